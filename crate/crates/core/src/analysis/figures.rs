use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{critical_loss, ensure_dir, format_float, sweep, CsvTable, SweepRequest, SweepTable, SweepVariable};
use crate::detection::{DetectionKind, PhaseWindow};
use crate::error::{Error, Result};
use crate::gaussian::InputSpec;
use crate::interferometer::{photon_budget, InterferometerConfig, MODE_A};

/// Figure ids with data emitters.
pub const FIGURES: [u32; 6] = [3, 4, 5, 6, 7, 8];

const G: f64 = 1.0;
const ALPHA: f64 = 2.0;
const R: f64 = 1.0;
const PHI_RANGE: (f64, f64, f64) = (-1.0, 1.0, 0.005);
const LOSS_RANGE: (f64, f64, f64) = (0.0, 0.3, 0.01);

fn inputs() -> [(&'static str, &'static str, InputSpec); 3] {
    [
        ("a", "vacuum", InputSpec::Vacuum),
        ("b", "coherent", InputSpec::coherent(ALPHA)),
        ("c", "coherent_squeezed", InputSpec::coherent_squeezed(ALPHA, R)),
    ]
}

fn write_table(table: &SweepTable, dir: &Path, name: &str, caption: &str) -> Result<PathBuf> {
    let mut csv = table.to_csv();
    csv.metadata.insert(0, ("figure".into(), caption.into()));
    let path = dir.join(name);
    csv.write(&path)?;
    Ok(path)
}

fn concat(parts: Vec<SweepTable>) -> SweepTable {
    let mut it = parts.into_iter();
    let mut first = it.next().expect("at least one sweep");
    for t in it {
        first.extend(t);
    }
    first
}

/// Write the data behind figure `n` into `out_dir` and return the files.
pub fn figure(n: u32, out_dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(out_dir)?;
    match n {
        3 => fig3(out_dir),
        4 => fig4(out_dir),
        5 => fig5(out_dir),
        6 => fig6(out_dir),
        7 => fig7(out_dir),
        8 => fig8(out_dir),
        _ => Err(Error::Unsupported(format!(
            "figure {n}; supported: {}",
            FIGURES.map(|f| f.to_string()).join(", ")
        ))),
    }
}

fn fig3(dir: &Path) -> Result<Vec<PathBuf>> {
    inputs()
        .into_iter()
        .map(|(panel, name, spec)| {
            let parts = [0.0, 0.05, 0.1]
                .into_iter()
                .map(|l| {
                    let config = InterferometerConfig::balanced(G).with_loss(l);
                    let req = SweepRequest::new(SweepVariable::Phi, PHI_RANGE, spec, config, vec![DetectionKind::parity()])
                        .with_label(format!("L={l}"));
                    sweep(&req)
                })
                .collect::<Result<Vec<_>>>()?;
            write_table(
                &concat(parts),
                dir,
                &format!("fig3{panel}_{name}.csv"),
                &format!("3({panel}) parity sensitivity vs phi, {name} input, L in {{0, 0.05, 0.1}}"),
            )
        })
        .collect()
}

struct CriticalSeries {
    file: &'static str,
    caption: &'static str,
    points: Vec<(InputSpec, f64)>,
}

fn fig4(dir: &Path) -> Result<Vec<PathBuf>> {
    let series = [
        CriticalSeries {
            file: "fig4a_vacuum_vary_g.csv",
            caption: "4(a) critical loss vs N_tot, vacuum input, g varied",
            points: (2..=12).map(|k| (InputSpec::Vacuum, 0.25 * k as f64)).collect(),
        },
        CriticalSeries {
            file: "fig4b_coherent_vary_g.csv",
            caption: "4(b) critical loss vs N_tot, |alpha_0| = 2, g in [1, 4]",
            points: (0..=12).map(|k| (InputSpec::coherent(ALPHA), 1.0 + 0.25 * k as f64)).collect(),
        },
        CriticalSeries {
            file: "fig4c_coherent_vary_alpha.csv",
            caption: "4(c) critical loss vs N_tot, g = 1, |alpha_0| in [0, 100]",
            points: [0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0]
                .into_iter()
                .map(|a| (if a == 0.0 { InputSpec::Vacuum } else { InputSpec::coherent(a) }, G))
                .collect(),
        },
    ];
    let det = DetectionKind::parity();
    let mut files = Vec::new();
    for s in series {
        let rows = s
            .points
            .par_iter()
            .map(|&(spec, g)| {
                let config = InterferometerConfig::balanced(g);
                let n_tot = photon_budget(&spec, &config).n_tot;
                let row = match critical_loss(&det, &spec, &config, PhaseWindow::full()) {
                    Ok(c) => vec![format_float(c.l_cri), format_float(c.snl), "1".into()],
                    Err(e) if e.is_numerical() => vec![String::new(), format_float(1.0 / n_tot.sqrt()), "0".into()],
                    Err(e) => return Err(e),
                };
                let mut full = vec![format_float(g), format_float(spec.alpha()), format_float(n_tot)];
                full.extend(row);
                Ok(full)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = CsvTable::new(["g", "alpha", "n_tot", "l_cri", "snl", "crossing"]);
        table
            .meta("figure", s.caption)
            .meta("generator", format!("su11 {}", env!("CARGO_PKG_VERSION")))
            .meta("detection", det.to_string())
            .meta("bracket", "L in [0, 0.5], tolerance 1e-4");
        for r in rows {
            table.push(r)?;
        }
        let path = dir.join(s.file);
        table.write(&path)?;
        files.push(path);
    }
    Ok(files)
}

fn fig5(dir: &Path) -> Result<Vec<PathBuf>> {
    inputs()
        .into_iter()
        .map(|(panel, name, spec)| {
            let mut dets = vec![DetectionKind::parity(), DetectionKind::intensity()];
            if spec != InputSpec::Vacuum {
                dets.insert(0, DetectionKind::homodyne());
            }
            let req = SweepRequest::new(SweepVariable::Loss, LOSS_RANGE, spec, InterferometerConfig::balanced(G), dets);
            write_table(
                &sweep(&req)?,
                dir,
                &format!("fig5{panel}_{name}.csv"),
                &format!("5({panel}) optimal sensitivity vs loss, {name} input"),
            )
        })
        .collect()
}

fn fig6(dir: &Path) -> Result<Vec<PathBuf>> {
    let config = InterferometerConfig::balanced(G);
    inputs()
        .into_iter()
        .map(|(panel, name, spec)| {
            let mut dets = vec![DetectionKind::parity(), DetectionKind::intensity()];
            if spec != InputSpec::Vacuum {
                dets.insert(0, DetectionKind::homodyne());
            }
            let mut parts = vec![sweep(&SweepRequest::new(SweepVariable::Phi, PHI_RANGE, spec, config, dets).with_label("theta_alpha=0"))?];
            if panel == "c" {
                for (label, theta) in [("theta_alpha=pi/10", PI / 10.0), ("theta_alpha=pi/4", PI / 4.0)] {
                    let spec = InputSpec::CoherentSqueezed { alpha: ALPHA, theta_alpha: theta, r: R };
                    let req = SweepRequest::new(SweepVariable::Phi, PHI_RANGE, spec, config, vec![DetectionKind::intensity()])
                        .with_label(label);
                    parts.push(sweep(&req)?);
                }
            }
            write_table(
                &concat(parts),
                dir,
                &format!("fig6{panel}_{name}.csv"),
                &format!("6({panel}) lossless sensitivity vs phi per detection, {name} input"),
            )
        })
        .collect()
}

fn fig7(dir: &Path) -> Result<Vec<PathBuf>> {
    let dets = vec![
        DetectionKind::homodyne(),
        DetectionKind::homodyne_optimal(MODE_A),
        DetectionKind::intensity(),
        DetectionKind::parity(),
    ];
    let req = SweepRequest::new(SweepVariable::Loss, LOSS_RANGE, InputSpec::two_coherent(ALPHA), InterferometerConfig::balanced(G), dets);
    Ok(vec![write_table(&sweep(&req)?, dir, "fig7_two_coherent.csv", "7 optimal sensitivity vs loss, two-coherent input")?])
}

fn fig8(dir: &Path) -> Result<Vec<PathBuf>> {
    let spec = InputSpec::coherent(ALPHA);
    let parts = [("ideal", 0.0, 0.0), ("sensing_arm_L1=0.1", 0.1, 0.0), ("free_arm_L2=0.1", 0.0, 0.1)]
        .into_iter()
        .map(|(label, l1, l2)| {
            let config = InterferometerConfig::balanced(G).with_losses(l1, l2);
            sweep(&SweepRequest::new(SweepVariable::Phi, PHI_RANGE, spec, config, vec![DetectionKind::parity()]).with_label(label))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = concat(parts);
    table.metadata.retain(|(k, _)| k != "l1" && k != "l2");
    Ok(vec![write_table(&table, dir, "fig8_unequal_loss.csv", "8 parity sensitivity vs phi, loss on one arm")?])
}
