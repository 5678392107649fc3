mod args;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use args::{Cli, Command, Common, FileConfig, Resolved, OUT_DIR_ENV};
use su11::analysis::{self, SweepRequest, VerifyLevel};
use su11::closed_forms::{parity_signal_ideal_cf, parity_signal_lossy_cf, quantum_limits};
use su11::{Error, InputKind, PhaseWindow, Sensor};

const EXIT_INVALID: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VERIFY: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Io(_)) => 1,
        Some(e) if e.is_numerical() => EXIT_NUMERICAL,
        Some(_) => EXIT_INVALID,
        None if err.chain().any(|e| e.is::<std::io::Error>()) => 1,
        None => EXIT_INVALID,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let resolve = |c: &Common| c.resolve(&file);
    match cli.command {
        Command::Signal(c) => signal(&resolve(&c)?),
        Command::Sensitivity { common, optimal } => sensitivity(&resolve(&common)?, optimal),
        Command::Sweep { common, variable, start, stop, step } => {
            let p = resolve(&common)?;
            let req = SweepRequest::new(variable, (start, stop, step), p.spec, p.config, p.detections.clone());
            let table = analysis::sweep(&req)?;
            let csv = table.to_csv();
            match &p.out {
                Some(path) if path.as_os_str() == "-" => std::io::stdout().write_all(&csv.to_bytes()?)?,
                _ => {
                    let path = p
                        .out
                        .clone()
                        .unwrap_or_else(|| p.out_dir.join(format!("sweep-{}.csv", variable.name())));
                    csv.write(&path)?;
                    println!("wrote {} rows to {}", table.rows.len(), path.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CriticalLoss(c) => critical_loss(&resolve(&c)?),
        Command::Compare(c) => compare(&resolve(&c)?),
        Command::Fig { common, figure } => {
            let p = resolve(&common)?;
            let ids: Vec<u32> = if figure == "all" {
                analysis::FIGURES.to_vec()
            } else {
                vec![figure.parse().map_err(|_| Error::InvalidParameter(format!("figure id `{figure}`")))?]
            };
            for n in ids {
                for path in analysis::figure(n, &p.out_dir)? {
                    println!("{}", path.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { common, full, inject_fault } => {
            let p = resolve(&common)?;
            let level = if full { VerifyLevel::Full } else { VerifyLevel::Quick };
            let report = analysis::verify(level, inject_fault)?;
            print!("{}", report.to_text());
            let path: PathBuf = p.out_dir.join("verify-report.txt");
            report.write(&path).with_context(|| format!("writing report (set --out or {OUT_DIR_ENV})"))?;
            println!("report: {}", path.display());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY) })
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

fn print_setup(p: &Resolved) {
    println!("input = {}", p.spec.kind().name());
    if p.spec.kind() != InputKind::Vacuum {
        println!("alpha = {}", p.spec.alpha());
        println!("theta_alpha = {}", p.spec.theta_alpha());
    }
    if p.spec.kind() == InputKind::CoherentSqueezed {
        println!("r = {}", p.spec.squeezing());
    }
    println!("g = {}", p.config.g1);
    println!("l1 = {}", p.config.l1);
    println!("l2 = {}", p.config.l2);
}

fn print_limits(p: &Resolved) {
    if let Ok(l) = quantum_limits(&p.spec, &p.config) {
        println!("n_tot = {}", fmt(l.n_tot));
        println!("snl = {}", fmt(l.snl));
        println!("hl = {}", fmt(l.hl));
        match l.qcrb {
            Some(q) => println!("qcrb = {}", fmt(q)),
            None => println!("qcrb = unsupported"),
        }
    }
}

fn signal(p: &Resolved) -> anyhow::Result<ExitCode> {
    print_setup(p);
    println!("phi = {}", p.phi);
    for det in &p.detections {
        let (mean, var) = Sensor::new(det.clone(), &p.spec, &p.config)?.stats(p.phi)?;
        println!("[{det}]");
        println!("signal = {}", fmt(mean));
        println!("variance = {}", fmt(var));
        if matches!(det, su11::DetectionKind::Parity { mode: 1 })
            && matches!(p.spec.kind(), InputKind::Vacuum | InputKind::Coherent | InputKind::CoherentSqueezed)
            && p.spec.theta_alpha() == 0.0
            && p.config.l1 == p.config.l2
        {
            let (a, r, g) = (p.spec.alpha(), p.spec.squeezing(), p.config.g1);
            let cf = if p.config.is_lossy() {
                parity_signal_lossy_cf(a, r, g, p.phi, p.config.l1)
            } else {
                parity_signal_ideal_cf(a, 0.0, r, g, p.phi)
            };
            if let Ok(v) = cf {
                println!("closed_form = {}", fmt(v));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sensitivity(p: &Resolved, optimal: bool) -> anyhow::Result<ExitCode> {
    print_setup(p);
    print_limits(p);
    for det in &p.detections {
        let sensor = Sensor::new(det.clone(), &p.spec, &p.config)?;
        let res = if optimal { sensor.optimal(PhaseWindow::full())? } else { sensor.sensitivity_or_limit(p.phi)? };
        println!("[{det}]");
        println!("phi = {}", fmt(res.phi));
        println!("delta_phi = {}", fmt(res.delta_phi));
        if res.limit {
            println!("limit = true");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn critical_loss(p: &Resolved) -> anyhow::Result<ExitCode> {
    print_setup(p);
    for det in &p.detections {
        let c = analysis::critical_loss(det, &p.spec, &p.config, PhaseWindow::full())?;
        println!("[{det}]");
        println!("l_cri = {:.4}", c.l_cri);
        println!("snl = {}", fmt(c.snl));
        println!("n_tot = {}", fmt(c.n_tot));
        println!("lossless_optimum = {}", fmt(c.lossless));
    }
    Ok(ExitCode::SUCCESS)
}

fn compare(p: &Resolved) -> anyhow::Result<ExitCode> {
    print_setup(p);
    println!("phi = {}", p.phi);
    print_limits(p);
    for c in analysis::compare(&p.spec, &p.config, p.phi)? {
        println!("[{}]", c.detection);
        match (c.delta_phi, &c.error) {
            (Some(d), _) => println!("delta_phi = {}{}", fmt(d), if c.limit { " (limit)" } else { "" }),
            (None, Some(e)) => println!("delta_phi = diverged ({e})"),
            (None, None) => println!("delta_phi = diverged"),
        }
        for (name, v) in &c.closed_forms {
            println!("{name} = {}", fmt(*v));
        }
    }
    Ok(ExitCode::SUCCESS)
}
