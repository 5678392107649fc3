use std::fs;

use su11::analysis::{
    self, critical_loss, sweep, Fault, Status, SweepRequest, SweepVariable, VerifyLevel, SWEEP_COLUMNS,
};
use su11::{DetectionKind, Error, InputSpec, InterferometerConfig, PhaseWindow, Sensor};

fn phi_sweep(spec: InputSpec, loss: f64, dets: Vec<DetectionKind>) -> SweepRequest {
    SweepRequest::new(SweepVariable::Phi, (-0.3, 0.3, 0.01), spec, InterferometerConfig::balanced(1.0).with_loss(loss), dets)
}

#[test]
fn lossless_vacuum_sweep_is_best_at_zero() {
    let parity = DetectionKind::parity().to_string();
    let table = sweep(&phi_sweep(InputSpec::Vacuum, 0.0, vec![DetectionKind::parity()])).unwrap();
    assert_eq!(table.rows.len(), 61);
    let best = table.minimum(&parity).unwrap();
    assert!(best.value.abs() < 1e-12, "minimum at {}", best.value);
    let expected = 1.0 / 2f64.sinh();
    assert!((best.delta_phi.unwrap() - expected).abs() < 1e-6 * expected);
    assert!((expected - 0.275721).abs() < 1e-6);
}

#[test]
fn loss_moves_the_optimum_off_zero() {
    let parity = DetectionKind::parity().to_string();
    let table = sweep(&phi_sweep(InputSpec::Vacuum, 0.05, vec![DetectionKind::parity()])).unwrap();
    let best = table.minimum(&parity).unwrap();
    assert!(best.value.abs() >= 0.05, "minimum at {}", best.value);
    let at_zero = table.series(&parity).find(|r| r.value.abs() < 1e-12).unwrap();
    assert!(at_zero.delta_phi.is_none_or(|d| d > best.delta_phi.unwrap()));
}

#[test]
fn sweep_csv_is_deterministic() {
    let req = phi_sweep(InputSpec::coherent(2.0), 0.05, vec![DetectionKind::parity(), DetectionKind::intensity()]);
    let a = sweep(&req).unwrap().to_csv().to_bytes().unwrap();
    let b = sweep(&req).unwrap().to_csv().to_bytes().unwrap();
    assert_eq!(a, b);

    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().any(|l| l == "# sweep = phi"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, SWEEP_COLUMNS.join(","));
}

#[test]
fn diverged_points_are_kept_with_a_sentinel() {
    let req = phi_sweep(InputSpec::coherent(2.0), 0.0, vec![DetectionKind::intensity()]);
    let table = sweep(&req).unwrap();
    let zero = table.rows.iter().find(|r| r.value.abs() < 1e-12).unwrap();
    assert!(zero.diverged());
    assert_eq!(table.rows.iter().filter(|r| r.diverged()).count(), 1);

    let csv = String::from_utf8(table.to_csv().to_bytes().unwrap()).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(csv.as_bytes());
    let diverged: Vec<_> = rdr.records().map(|r| r.unwrap()).filter(|r| &r[7] == "1").collect();
    assert_eq!(diverged.len(), 1);
    assert_eq!(&diverged[0][6], "");
}

#[test]
fn invalid_sweeps_are_rejected() {
    let spec = InputSpec::coherent(2.0);
    let config = InterferometerConfig::balanced(1.0);
    let dets = || vec![DetectionKind::parity()];
    for (var, range) in [
        (SweepVariable::Phi, (0.0, 1.0, 0.0)),
        (SweepVariable::Phi, (1.0, 0.0, 0.1)),
        (SweepVariable::Loss, (0.5, 1.0, 0.1)),
        (SweepVariable::Loss, (-0.1, 0.2, 0.1)),
    ] {
        let err = sweep(&SweepRequest::new(var, range, spec, config, dets())).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)), "{var} {range:?}: {err}");
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let req = phi_sweep(InputSpec::Vacuum, 0.0, vec![DetectionKind::parity()]).with_output(blocker.join("out.csv"));
    assert!(matches!(sweep(&req), Err(Error::Io(_))));
}

#[test]
fn sweep_writes_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/sweep.csv");
    let req = SweepRequest::new(
        SweepVariable::Loss,
        (0.0, 0.1, 0.05),
        InputSpec::coherent(2.0),
        InterferometerConfig::balanced(1.0),
        vec![DetectionKind::parity()],
    )
    .with_output(&path);
    let table = sweep(&req).unwrap();
    let written = fs::read(&path).unwrap();
    assert_eq!(written, table.to_csv().to_bytes().unwrap());
    let d: Vec<f64> = table.rows.iter().map(|r| r.delta_phi.unwrap()).collect();
    assert!(d.windows(2).all(|w| w[0] < w[1]), "{d:?}");
}

#[test]
fn critical_loss_brackets_the_snl() {
    let spec = InputSpec::coherent(2.0);
    let config = InterferometerConfig::balanced(1.0);
    let det = DetectionKind::parity();
    let c = critical_loss(&det, &spec, &config, PhaseWindow::full()).unwrap();
    assert!((c.l_cri - 0.0636).abs() < 1e-3, "{}", c.l_cri);
    assert!(c.lossless < c.snl);

    let opt = |l: f64| Sensor::new(det.clone(), &spec, &config.with_loss(l)).unwrap().optimal(PhaseWindow::full()).unwrap();
    assert!(opt(c.l_cri - 0.01).delta_phi < c.snl);
    assert!(opt(c.l_cri + 0.01).delta_phi > c.snl);
}

#[test]
fn critical_loss_without_advantage_has_no_crossing() {
    let err = critical_loss(
        &DetectionKind::homodyne(),
        &InputSpec::coherent(2.0),
        &InterferometerConfig::balanced(0.1),
        PhaseWindow::full(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::NoCrossing(_)), "{err}");
}

#[test]
fn unknown_figure_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(analysis::figure(2, dir.path()), Err(Error::Unsupported(_))));
    assert!(matches!(analysis::figure(9, dir.path()), Err(Error::Unsupported(_))));
}

#[test]
fn figure_8_orders_the_arms_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let paths = analysis::figure(8, dir.path()).unwrap();
    assert_eq!(paths.len(), 1);
    let first = fs::read(&paths[0]).unwrap();
    analysis::figure(8, dir.path()).unwrap();
    assert_eq!(first, fs::read(&paths[0]).unwrap());

    let mut best = std::collections::HashMap::<String, f64>::new();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(first.as_slice());
    for rec in rdr.records() {
        let rec = rec.unwrap();
        if let Ok(d) = rec[6].parse::<f64>() {
            let e = best.entry(rec[0].to_string()).or_insert(f64::INFINITY);
            *e = e.min(d);
        }
    }
    let (ideal, sensing, free) = (best["ideal"], best["sensing_arm_L1=0.1"], best["free_arm_L2=0.1"]);
    assert!(ideal < free && free < sensing, "{ideal} {free} {sensing}");
}

#[test]
fn quick_verify_passes() {
    let report = analysis::verify(VerifyLevel::Quick, None).unwrap();
    assert!(report.passed(), "{}", report.to_text());
    assert!(report.checks.iter().any(|c| c.status == Status::Tension && c.name.contains("QCRB")));
}

#[test]
fn injected_fault_is_caught_and_named() {
    let fault: Fault = "x2".parse().unwrap();
    let report = analysis::verify(VerifyLevel::Quick, Some(fault)).unwrap();
    assert!(!report.passed());
    let text = report.to_text();
    assert!(text.contains("failing:"), "{text}");
    assert!(report.failures().iter().any(|c| c.name.contains("x2") || c.detail.contains("x2")), "{text}");
}

#[test]
fn compare_lists_every_detection() {
    let rows = analysis::compare(&InputSpec::coherent(2.0), &InterferometerConfig::balanced(1.0), 0.1).unwrap();
    let names: Vec<_> = rows.iter().map(|c| c.detection.as_str()).collect();
    for want in ["parity", "homodyne", "intensity"] {
        assert!(names.iter().any(|n| n.starts_with(want)), "{names:?}");
    }
    assert!(rows.iter().all(|c| c.delta_phi.is_some()));
}
