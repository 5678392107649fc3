//! Sweeps, critical-loss searches, figure data and verification runs on top
//! of the simulation layers. Output is CSV with `#` metadata lines.

mod figures;
mod verify;

pub use figures::{figure, FIGURES};
pub use verify::{signal_grid, verify, CheckOutcome, Fault, Status, VerifyLevel, VerifyReport};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::closed_forms::{quantum_limits, LimitSet};
use crate::detection::{DetectionKind, PhaseWindow, SensitivityResult, Sensor};
use crate::error::{Error, Result};
use crate::gaussian::{InputKind, InputSpec};
use crate::interferometer::{photon_budget, InterferometerConfig};
use crate::numerics::{bisect, grid};

/// Upper end of the critical-loss bracket.
pub const CRITICAL_LOSS_MAX: f64 = 0.5;
/// Width at which the critical-loss bisection stops.
pub const CRITICAL_LOSS_TOL: f64 = 1e-4;

/// Floats are written with 12 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// In-memory CSV file: metadata comment lines, a header and string cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { metadata: Vec::new(), header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::DimensionMismatch { expected: self.header.len(), actual: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for (k, v) in &self.metadata {
            out.extend_from_slice(format!("# {k} = {}\n", v.replace('\n', " ")).as_bytes());
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }

    /// Write to `path`, creating parent directories.
    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        }
        fs::write(path, self.to_bytes()?).map_err(|e| io_error(path, e))
    }
}

pub(crate) fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Free variable of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    /// Sensitivity at each phase.
    Phi,
    /// Optimal sensitivity against equal loss on both arms.
    Loss,
    /// Optimal sensitivity against `N_tot`, set through the OPA strength.
    NTotViaG,
    /// Optimal sensitivity against `N_tot`, set through `|alpha_0|`.
    NTotViaAlpha,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Phi => "phi",
            SweepVariable::Loss => "loss",
            SweepVariable::NTotViaG => "n_tot-via-g",
            SweepVariable::NTotViaAlpha => "n_tot-via-alpha",
        }
    }

    /// Name of the parameter actually stepped.
    pub fn parameter(&self) -> &'static str {
        match self {
            SweepVariable::Phi => "phi",
            SweepVariable::Loss => "loss",
            SweepVariable::NTotViaG => "g",
            SweepVariable::NTotViaAlpha => "alpha",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "phi" => Ok(SweepVariable::Phi),
            "loss" | "l" => Ok(SweepVariable::Loss),
            "n-tot-via-g" | "ntot-via-g" | "g" => Ok(SweepVariable::NTotViaG),
            "n-tot-via-alpha" | "ntot-via-alpha" | "alpha" => Ok(SweepVariable::NTotViaAlpha),
            other => Err(Error::invalid(format!(
                "unknown sweep variable '{other}' (phi | loss | n_tot-via-g | n_tot-via-alpha)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub spec: InputSpec,
    pub config: InterferometerConfig,
    pub detections: Vec<DetectionKind>,
    /// Searched by the optimal-phase sweeps.
    pub window: PhaseWindow,
    /// Written to the first column of every row.
    pub label: String,
    pub output: Option<PathBuf>,
}

impl SweepRequest {
    pub fn new(
        variable: SweepVariable,
        (start, stop, step): (f64, f64, f64),
        spec: InputSpec,
        config: InterferometerConfig,
        detections: Vec<DetectionKind>,
    ) -> Self {
        Self {
            variable,
            start,
            stop,
            step,
            spec,
            config,
            detections,
            window: PhaseWindow::full(),
            label: String::new(),
            output: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_window(mut self, window: PhaseWindow) -> Self {
        self.window = window;
        self
    }

    pub fn with_output(mut self, path: impl Into<PathBuf>) -> Self {
        self.output = Some(path.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid(format!("sweep step must be > 0, got {}", self.step)));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start <= self.stop) {
            return Err(Error::invalid(format!("sweep range [{}, {}] is empty", self.start, self.stop)));
        }
        if self.detections.is_empty() {
            return Err(Error::invalid("sweep needs at least one detection"));
        }
        match self.variable {
            SweepVariable::Loss if self.start < 0.0 || self.stop >= 1.0 => {
                Err(Error::invalid(format!("loss range [{}, {}] must lie in [0, 1)", self.start, self.stop)))
            }
            SweepVariable::NTotViaG | SweepVariable::NTotViaAlpha if self.start < 0.0 => {
                Err(Error::invalid(format!("{} must be >= 0", self.variable.parameter())))
            }
            _ => {
                self.spec.validate()?;
                self.config.validate()
            }
        }
    }

    pub fn values(&self) -> Vec<f64> {
        grid(self.start, self.stop, self.step)
    }

    /// Input and interferometer at one value of the free variable.
    pub fn setup_at(&self, value: f64) -> (InputSpec, InterferometerConfig) {
        match self.variable {
            SweepVariable::Phi => (self.spec, self.config),
            SweepVariable::Loss => (self.spec, self.config.with_loss(value)),
            SweepVariable::NTotViaG => {
                let mut c = self.config;
                c.g1 = value;
                c.g2 = value;
                (self.spec, c)
            }
            SweepVariable::NTotViaAlpha => {
                let kind = match self.spec.kind() {
                    InputKind::Vacuum => InputKind::Coherent,
                    k => k,
                };
                let spec = InputSpec::from_parameters(kind, value, self.spec.theta_alpha(), self.spec.squeezing());
                (spec, self.config)
            }
        }
    }
}

/// One grid point for one detection.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub label: String,
    pub value: f64,
    pub n_tot: f64,
    pub detection: String,
    /// Operating phase: the swept phase, or the optimum.
    pub phi: Option<f64>,
    /// `None` when the point diverged.
    pub delta_phi: Option<f64>,
    pub snl: Option<f64>,
    pub hl: Option<f64>,
    pub qcrb: Option<f64>,
}

impl SweepRow {
    pub fn diverged(&self) -> bool {
        self.delta_phi.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub variable: SweepVariable,
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_COLUMNS: [&str; 11] =
    ["label", "variable", "value", "n_tot", "detection", "phi", "delta_phi", "diverged", "snl", "hl", "qcrb"];

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

impl SweepTable {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(SWEEP_COLUMNS);
        t.metadata = self.metadata.clone();
        for r in &self.rows {
            t.rows.push(vec![
                r.label.clone(),
                self.variable.parameter().to_string(),
                format_float(r.value),
                format_float(r.n_tot),
                r.detection.clone(),
                opt_float(r.phi),
                opt_float(r.delta_phi),
                if r.diverged() { "1" } else { "0" }.to_string(),
                opt_float(r.snl),
                opt_float(r.hl),
                opt_float(r.qcrb),
            ]);
        }
        t
    }

    /// Rows of one detection, in grid order.
    pub fn series<'a>(&'a self, detection: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.detection == detection)
    }

    /// The finite row with the smallest sensitivity for `detection`.
    pub fn minimum<'a>(&'a self, detection: &'a str) -> Option<&'a SweepRow> {
        self.series(detection)
            .filter(|r| r.delta_phi.is_some())
            .min_by(|a, b| a.delta_phi.partial_cmp(&b.delta_phi).unwrap_or(std::cmp::Ordering::Equal))
    }

    pub fn extend(&mut self, other: SweepTable) {
        self.rows.extend(other.rows);
    }
}

pub(crate) fn describe_setup(spec: &InputSpec, config: &InterferometerConfig) -> Vec<(String, String)> {
    vec![
        ("input".into(), spec.kind().name().into()),
        ("alpha".into(), spec.alpha().to_string()),
        ("theta_alpha".into(), spec.theta_alpha().to_string()),
        ("r".into(), spec.squeezing().to_string()),
        ("g1".into(), config.g1.to_string()),
        ("g2".into(), config.g2.to_string()),
        ("theta1".into(), config.theta1.to_string()),
        ("theta2".into(), config.theta2.to_string()),
        ("l1".into(), config.l1.to_string()),
        ("l2".into(), config.l2.to_string()),
    ]
}

/// Result of one evaluation, with numerical failures mapped to `None`.
fn evaluate(sensor: &Sensor, variable: SweepVariable, value: f64, window: PhaseWindow) -> Result<Option<SensitivityResult>> {
    let res = match variable {
        SweepVariable::Phi => sensor.sensitivity_or_limit(value),
        _ => sensor.optimal(window),
    };
    match res {
        Ok(r) if r.delta_phi.is_finite() => Ok(Some(r)),
        Ok(_) => Ok(None),
        Err(e) if e.is_numerical() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluate a sweep. Points run in parallel; rows come out in grid order,
/// detections in request order. Diverged points are kept with an empty
/// sensitivity. Writes the CSV when the request names an output path.
pub fn sweep(req: &SweepRequest) -> Result<SweepTable> {
    req.validate()?;
    let values = req.values();
    let rows: Vec<Vec<SweepRow>> = values
        .par_iter()
        .map(|&value| {
            let (spec, config) = req.setup_at(value);
            spec.validate()?;
            config.validate()?;
            let limits: Option<LimitSet> = quantum_limits(&spec, &config).ok();
            let n_tot = photon_budget(&spec, &config).n_tot;
            req.detections
                .iter()
                .map(|det| {
                    let sensor = Sensor::new(det.clone(), &spec, &config)?;
                    let res = evaluate(&sensor, req.variable, value, req.window)?;
                    let phi = match (req.variable, &res) {
                        (SweepVariable::Phi, _) => Some(value),
                        (_, Some(r)) => Some(r.phi),
                        _ => None,
                    };
                    Ok(SweepRow {
                        label: req.label.clone(),
                        value,
                        n_tot,
                        detection: det.to_string(),
                        phi,
                        delta_phi: res.map(|r| r.delta_phi),
                        snl: limits.map(|l| l.snl),
                        hl: limits.map(|l| l.hl),
                        qcrb: limits.and_then(|l| l.qcrb),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut metadata = vec![
        ("generator".to_string(), format!("su11 {}", env!("CARGO_PKG_VERSION"))),
        ("sweep".to_string(), req.variable.name().to_string()),
        ("range".to_string(), format!("{}:{}:{}", req.start, req.stop, req.step)),
        (
            "detections".to_string(),
            req.detections.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";"),
        ),
    ];
    if req.variable != SweepVariable::Phi {
        metadata.push(("phase_window".into(), format!("{}:{}", req.window.lo, req.window.hi)));
    }
    metadata.extend(describe_setup(&req.spec, &req.config));
    let table = SweepTable { variable: req.variable, metadata, rows: rows.into_iter().flatten().collect() };
    if let Some(path) = &req.output {
        table.to_csv().write(path)?;
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLoss {
    pub l_cri: f64,
    pub snl: f64,
    pub n_tot: f64,
    /// Optimal sensitivity without loss.
    pub lossless: f64,
}

/// Equal loss at which the optimal sensitivity of `det` rises to the SNL.
///
/// Bisection on `[0, 0.5]` to `1e-4`, each evaluation a full optimal-phase
/// search over `window`. Fails with `NoCrossing` when the lossless optimum is
/// not below the SNL or the loss cap is still below it.
pub fn critical_loss(
    det: &DetectionKind,
    spec: &InputSpec,
    config: &InterferometerConfig,
    window: PhaseWindow,
) -> Result<CriticalLoss> {
    let limits = quantum_limits(spec, config)?;
    let excess = |l: f64| -> Result<f64> {
        let sensor = Sensor::new(det.clone(), spec, &config.with_loss(l))?;
        Ok(sensor.optimal(window)?.delta_phi - limits.snl)
    };
    let at_zero = excess(0.0)?;
    if at_zero >= 0.0 {
        return Err(Error::NoCrossing(format!(
            "optimal sensitivity {:.6e} is not below the SNL {:.6e} without loss",
            at_zero + limits.snl,
            limits.snl
        )));
    }
    if excess(CRITICAL_LOSS_MAX)? <= 0.0 {
        return Err(Error::NoCrossing(format!("still below the SNL at L = {CRITICAL_LOSS_MAX}")));
    }
    let l_cri = bisect(excess, 0.0, CRITICAL_LOSS_MAX, CRITICAL_LOSS_TOL)?;
    Ok(CriticalLoss { l_cri, snl: limits.snl, n_tot: limits.n_tot, lossless: at_zero + limits.snl })
}

/// Sensitivity of each detection at one phase, next to the applicable
/// closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub detection: String,
    pub phi: f64,
    pub delta_phi: Option<f64>,
    /// Set when the value is the limit towards a stationary point.
    pub limit: bool,
    pub error: Option<String>,
    /// `(formula, value)` for the closed forms that apply at this point.
    pub closed_forms: Vec<(String, f64)>,
}

/// Compare parity, homodyne and intensity detection at `phi`. Parity and
/// intensity use the phi-dependent closed forms; the homodyne and optimum
/// formulas are quoted at `phi = 0`, where they apply.
pub fn compare(spec: &InputSpec, config: &InterferometerConfig, phi: f64) -> Result<Vec<Comparison>> {
    use crate::closed_forms::*;
    spec.validate()?;
    config.validate()?;
    let params = FormulaParams::from_setup(spec, config).ok();
    let equal = config.l1 == config.l2;
    let kind = spec.kind();
    let no_squeeze = spec.squeezing() == 0.0;
    let mut out = Vec::new();
    for det in [DetectionKind::parity(), DetectionKind::homodyne(), DetectionKind::intensity()] {
        let sensor = Sensor::new(det.clone(), spec, config)?;
        let (delta_phi, limit, error) = match sensor.sensitivity_or_limit(phi) {
            Ok(r) => (Some(r.delta_phi), r.limit, None),
            Err(e) if e.is_numerical() => (None, false, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        let mut forms: Vec<(String, f64)> = Vec::new();
        if let Some(p) = &params {
            let mut add = |name: &str, v: Result<f64>| {
                if let Ok(v) = v {
                    forms.push((name.to_string(), v));
                }
            };
            match &det {
                DetectionKind::Parity { .. } => {
                    if kind == InputKind::Vacuum && equal {
                        add(ParityFormula::VacuumLoss.name(), parity_sensitivity_cf(ParityFormula::VacuumLoss, p, phi));
                    }
                    if matches!(kind, InputKind::Coherent | InputKind::Vacuum) {
                        if equal {
                            let f = ParityFormula::CoherentEqualLoss;
                            add(f.name(), parity_sensitivity_cf(f, p, phi));
                        }
                        let f = ParityFormula::UnequalLoss;
                        add(f.name(), parity_sensitivity_cf(f, p, phi));
                    }
                    if phi == 0.0 && !config.is_lossy() && kind != InputKind::TwoCoherent {
                        let f = ParityFormula::IdealOptimal;
                        add(f.name(), parity_sensitivity_cf(f, p, phi));
                    }
                }
                DetectionKind::Homodyne { .. } if phi == 0.0 && equal => match kind {
                    InputKind::Coherent | InputKind::CoherentSqueezed => {
                        let f = HomodyneFormula::CoherentSqueezedLoss;
                        add(f.name(), hd_sensitivity_cf(f, p));
                    }
                    InputKind::TwoCoherent => {
                        let f = HomodyneFormula::TwoCoherent;
                        add(f.name(), hd_sensitivity_cf(f, p));
                    }
                    InputKind::Vacuum => {}
                },
                DetectionKind::Intensity { .. } if equal => match kind {
                    InputKind::Coherent if no_squeeze => {
                        let f = IntensityFormula::OneCoherentLoss;
                        add(f.name(), id_sensitivity_cf(f, p, phi));
                    }
                    InputKind::Vacuum => {
                        for f in [IntensityFormula::OneCoherentLoss, IntensityFormula::VacuumLoss] {
                            add(f.name(), id_sensitivity_cf(f, p, phi));
                        }
                    }
                    _ => {}
                },
                _ => {}
            }
        }
        out.push(Comparison { detection: det.to_string(), phi, delta_phi, limit, error, closed_forms: forms });
    }
    Ok(out)
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))
}
