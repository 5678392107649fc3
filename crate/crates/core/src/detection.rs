//! Detection statistics on Gaussian output states and phase sensitivity by
//! linear error propagation, `dphi = sqrt(Var S) / |d<S>/dphi|`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, InputSpec};
use crate::interferometer::{InterferometerConfig, Propagator, MODE_A, MODE_B};
use crate::numerics::{bisect, central_derivative, golden_section_min, Derivative};

/// Relative flatness below which the signal is treated as stationary.
pub const STATIONARY_TOL: f64 = 1e-14;
/// Grid step of the optimal-phase search.
pub const SEARCH_STEP: f64 = 1e-3;
/// Final bracket width of the optimal-phase search.
pub const SEARCH_TOL: f64 = 1e-8;
/// Distance kept from a stationary point during the refinement.
const STATIONARY_PAD: f64 = 1e-4;

/// Homodyne quadrature choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quadrature {
    /// Fixed angle: `X(theta) = X cos theta + P sin theta`.
    Angle(f64),
    /// The quadrature of the mode that minimises the propagated error at the
    /// operating point.
    Optimal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DetectionKind {
    Parity { mode: usize },
    Homodyne { mode: usize, quadrature: Quadrature },
    Intensity { modes: Vec<usize> },
}

impl DetectionKind {
    /// Parity on output `b`.
    pub fn parity() -> Self {
        DetectionKind::Parity { mode: MODE_B }
    }

    /// Homodyne on output `b`, phase quadrature.
    pub fn homodyne() -> Self {
        DetectionKind::Homodyne { mode: MODE_B, quadrature: Quadrature::Angle(FRAC_PI_2) }
    }

    pub fn homodyne_optimal(mode: usize) -> Self {
        DetectionKind::Homodyne { mode, quadrature: Quadrature::Optimal }
    }

    /// Total photon number of both outputs.
    pub fn intensity() -> Self {
        DetectionKind::Intensity { modes: vec![MODE_A, MODE_B] }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DetectionKind::Parity { .. } => "parity",
            DetectionKind::Homodyne { .. } => "homodyne",
            DetectionKind::Intensity { .. } => "intensity",
        }
    }

    fn check_modes(&self, n_modes: usize) -> Result<()> {
        let modes: &[usize] = match self {
            DetectionKind::Parity { mode } | DetectionKind::Homodyne { mode, .. } => std::slice::from_ref(mode),
            DetectionKind::Intensity { modes } => modes,
        };
        if modes.is_empty() {
            return Err(Error::invalid("intensity detection needs at least one mode"));
        }
        match modes.iter().find(|&&m| m >= n_modes) {
            Some(&index) => Err(Error::ModeOutOfRange { index, n_modes }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for DetectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectionKind::Parity { mode } => write!(f, "parity(mode={mode})"),
            DetectionKind::Homodyne { mode, quadrature: Quadrature::Angle(t) } => {
                write!(f, "homodyne(mode={mode},theta={t})")
            }
            DetectionKind::Homodyne { mode, quadrature: Quadrature::Optimal } => {
                write!(f, "homodyne(mode={mode},theta=optimal)")
            }
            DetectionKind::Intensity { modes } => {
                let list: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
                write!(f, "intensity(modes={})", list.join("+"))
            }
        }
    }
}

impl std::str::FromStr for DetectionKind {
    type Err = Error;

    /// Accepts `parity`, `homodyne`, `homodyne-optimal` and `intensity` with
    /// their default modes.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parity" => Ok(DetectionKind::parity()),
            "homodyne" => Ok(DetectionKind::homodyne()),
            "homodyne-optimal" => Ok(DetectionKind::homodyne_optimal(MODE_B)),
            "intensity" => Ok(DetectionKind::intensity()),
            other => Err(Error::invalid(format!("unknown detection `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityResult {
    pub phi: f64,
    pub delta_phi: f64,
    pub detection: DetectionKind,
    pub signal: f64,
    pub signal_variance: f64,
    /// True when `delta_phi` is the limit towards a stationary point rather
    /// than a direct evaluation.
    pub limit: bool,
}

fn mode_block(state: &GaussianState, mode: usize) -> Result<(Vector2<f64>, Matrix2<f64>)> {
    let n_modes = state.n_modes();
    if mode >= n_modes {
        return Err(Error::ModeOutOfRange { index: mode, n_modes });
    }
    let (m, v) = (state.mean(), state.cov());
    let i = 2 * mode;
    Ok((
        Vector2::new(m[i], m[i + 1]),
        Matrix2::new(v[(i, i)], v[(i, i + 1)], v[(i + 1, i)], v[(i + 1, i + 1)]),
    ))
}

/// Parity `<(-1)^N>` of one mode together with its variance `1 - <Pi>^2`.
///
/// The variance is evaluated as `(4 det V - 1 - expm1(-2q)) / (4 det V)` so it
/// keeps full relative precision when `<Pi>` is close to one.
pub fn parity_stats(state: &GaussianState, mode: usize) -> Result<(f64, f64)> {
    let (mu, v) = mode_block(state, mode)?;
    let det = v.determinant();
    if !(det > 1e-300) {
        return Err(Error::NumericDegeneracy(format!("reduced covariance of mode {mode} has det {det:e}")));
    }
    let inv = v.try_inverse().ok_or_else(|| Error::Singular("reduced covariance".into()))?;
    let q = 0.5 * mu.dot(&(inv * mu));
    let d2 = 4.0 * det;
    let parity = (-q).exp() / d2.sqrt();
    let variance = ((d2 - 1.0) - (-2.0 * q).exp_m1()) / d2;
    Ok((parity, variance.max(0.0)))
}

pub fn parity_expectation(state: &GaussianState, mode: usize) -> Result<f64> {
    parity_stats(state, mode).map(|(p, _)| p)
}

/// Mean and variance of `X(theta) = X cos theta + P sin theta` of one mode.
pub fn homodyne_stats(state: &GaussianState, mode: usize, theta: f64) -> Result<(f64, f64)> {
    let (mu, v) = mode_block(state, mode)?;
    let c = Vector2::new(theta.cos(), theta.sin());
    Ok((c.dot(&mu), c.dot(&(v * c))))
}

/// Mean and variance of the total photon number over `modes`, including
/// cross-mode correlations.
pub fn intensity_stats(state: &GaussianState, modes: &[usize]) -> Result<(f64, f64)> {
    if modes.is_empty() {
        return Err(Error::invalid("intensity detection needs at least one mode"));
    }
    let reduced = state.reduce_to_modes(modes)?;
    let (mu, v) = (reduced.mean(), reduced.cov());
    let k = modes.len() as f64;
    let mean = 0.5 * (v.trace() + mu.norm_squared() - k);
    let variance = 0.5 * (v * v).trace() + mu.dot(&(v * mu)) - 0.25 * k;
    Ok((mean, variance.max(0.0)))
}

/// Mean and variance of the detection signal. The optimal homodyne
/// quadrature is not defined without a phase derivative, so it is reported
/// along `X` here.
pub fn signal_stats(det: &DetectionKind, state: &GaussianState) -> Result<(f64, f64)> {
    det.check_modes(state.n_modes())?;
    match det {
        DetectionKind::Parity { mode } => parity_stats(state, *mode),
        DetectionKind::Homodyne { mode, quadrature: Quadrature::Angle(t) } => homodyne_stats(state, *mode, *t),
        DetectionKind::Homodyne { mode, quadrature: Quadrature::Optimal } => homodyne_stats(state, *mode, 0.0),
        DetectionKind::Intensity { modes } => intensity_stats(state, modes),
    }
}

fn is_stationary(d: &Derivative, scale: f64) -> bool {
    d.raw_difference.abs() / (2.0 * scale.abs().max(1.0)) <= STATIONARY_TOL
}

/// Phase window searched by [`optimal_sensitivity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseWindow {
    pub lo: f64,
    pub hi: f64,
}

impl PhaseWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("phase window needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// One full period.
    pub fn full() -> Self {
        Self { lo: -PI, hi: PI }
    }

    /// `(0, pi]`, enough for signals that are even in phi.
    pub fn positive() -> Self {
        Self { lo: 0.0, hi: PI }
    }

    fn grid(&self) -> Vec<f64> {
        let first = (self.lo / SEARCH_STEP).ceil() as i64;
        let last = (self.hi / SEARCH_STEP).floor() as i64;
        (first..=last).map(|k| k as f64 * SEARCH_STEP).collect()
    }
}

impl Default for PhaseWindow {
    fn default() -> Self {
        Self::full()
    }
}

/// A detection scheme attached to a fixed input and interferometer, evaluated
/// at arbitrary phases.
#[derive(Debug, Clone)]
pub struct Sensor {
    det: DetectionKind,
    propagator: Propagator,
}

impl Sensor {
    pub fn new(det: DetectionKind, spec: &InputSpec, config: &InterferometerConfig) -> Result<Self> {
        spec.validate()?;
        let propagator = Propagator::new(spec, config)?;
        det.check_modes(if propagator.is_lossy() { 4 } else { 2 })?;
        Ok(Self { det, propagator })
    }

    pub fn detection(&self) -> &DetectionKind {
        &self.det
    }

    pub fn output(&self, phi: f64) -> Result<GaussianState> {
        self.propagator.at(phi)
    }

    /// `(<S>, Var S)` at `phi`.
    pub fn stats(&self, phi: f64) -> Result<(f64, f64)> {
        signal_stats(&self.det, &self.propagator.at(phi)?)
    }

    pub fn signal(&self, phi: f64) -> Result<f64> {
        self.stats(phi).map(|(s, _)| s)
    }

    /// Derivative of the mean signal with respect to phi.
    pub fn signal_derivative(&self, phi: f64) -> Result<Derivative> {
        central_derivative(&|p| self.signal(p), phi)
    }

    /// Sensitivity at `phi`; fails with [`Error::StationaryPoint`] where the
    /// signal is flat.
    pub fn sensitivity(&self, phi: f64) -> Result<SensitivityResult> {
        if !phi.is_finite() {
            return Err(Error::invalid("phase must be finite"));
        }
        if let DetectionKind::Homodyne { mode, quadrature: Quadrature::Optimal } = self.det {
            return self.optimal_quadrature(mode, phi);
        }
        let (signal, variance) = self.stats(phi)?;
        let d = self.signal_derivative(phi)?;
        if is_stationary(&d, signal) || d.value == 0.0 {
            return Err(Error::StationaryPoint { phi, derivative: d.value.abs() });
        }
        Ok(SensitivityResult {
            phi,
            delta_phi: variance.sqrt() / d.value.abs(),
            detection: self.det.clone(),
            signal,
            signal_variance: variance,
            limit: false,
        })
    }

    /// Homodyne along `u = V^-1 dmu/dphi`, which gives `dphi = (d^T V^-1 d)^-1/2`.
    fn optimal_quadrature(&self, mode: usize, phi: f64) -> Result<SensitivityResult> {
        let component = |k: usize| {
            move |p: f64| -> Result<f64> { Ok(self.propagator.at(p)?.mean()[2 * mode + k]) }
        };
        let dx = central_derivative(&component(0), phi)?;
        let dp = central_derivative(&component(1), phi)?;
        let (mu, v) = mode_block(&self.propagator.at(phi)?, mode)?;
        if is_stationary(&dx, mu[0]) && is_stationary(&dp, mu[1]) {
            return Err(Error::StationaryPoint { phi, derivative: dx.value.hypot(dp.value) });
        }
        let d = Vector2::new(dx.value, dp.value);
        let inv = v.try_inverse().ok_or_else(|| Error::Singular("homodyne covariance".into()))?;
        let u = (inv * d).normalize();
        let slope = u.dot(&d).abs();
        let variance = u.dot(&(v * u));
        Ok(SensitivityResult {
            phi,
            delta_phi: variance.sqrt() / slope,
            detection: self.det.clone(),
            signal: u.dot(&mu),
            signal_variance: variance,
            limit: false,
        })
    }

    /// Limit of the sensitivity as phi approaches a stationary point `phi0`.
    ///
    /// The symmetric average of `dphi(phi0 +- h)` is extrapolated to `h = 0`
    /// by a Richardson table in `h^2` with `h = 0.02 / 2^k`, `k < 6`. Rounding
    /// in the finite-difference slope grows like `1/h`, so the diagonal entry
    /// that changed least from its predecessor is returned; it must have
    /// settled to `1e-6` relative, otherwise the sensitivity diverges and a
    /// stationary-point error is returned.
    pub fn limit(&self, phi0: f64) -> Result<SensitivityResult> {
        const LEVELS: usize = 6;
        let averaged = |h: f64| -> Result<f64> {
            Ok(0.5 * (self.sensitivity(phi0 + h)?.delta_phi + self.sensitivity(phi0 - h)?.delta_phi))
        };
        let mut h = 0.02;
        let mut prev_row = vec![averaged(h)?];
        let mut best: Option<(f64, f64)> = None;
        for _ in 1..LEVELS {
            h *= 0.5;
            let mut row = vec![averaged(h)?];
            let mut factor = 1.0;
            for (j, &prev) in prev_row.iter().enumerate() {
                factor *= 4.0;
                let next = row[j] + (row[j] - prev) / (factor - 1.0);
                row.push(next);
            }
            let estimate = *row.last().unwrap();
            let change = (estimate - prev_row.last().unwrap()).abs() / estimate.abs();
            if best.is_none_or(|(c, _)| change < c) {
                best = Some((change, estimate));
            }
            prev_row = row;
        }
        match best {
            Some((change, delta_phi)) if change <= 1e-6 && delta_phi.is_finite() => {
                let (signal, signal_variance) = self.stats(phi0)?;
                Ok(SensitivityResult {
                    phi: phi0,
                    delta_phi,
                    detection: self.det.clone(),
                    signal,
                    signal_variance,
                    limit: true,
                })
            }
            _ => {
                let derivative = self.signal_derivative(phi0).map(|d| d.value.abs()).unwrap_or(0.0);
                Err(Error::StationaryPoint { phi: phi0, derivative })
            }
        }
    }

    /// Sensitivity at `phi`, falling back to the limit at stationary points.
    pub fn sensitivity_or_limit(&self, phi: f64) -> Result<SensitivityResult> {
        match self.sensitivity(phi) {
            Err(Error::StationaryPoint { .. }) => self.limit(phi),
            other => other,
        }
    }

    /// Minimum of the sensitivity over `window`.
    ///
    /// A grid with step `1e-3` locates the best point. Points that fail are
    /// skipped; values within `1e-9` relative count as equal and the larger
    /// phi wins. The bracket of its two neighbours is refined by golden
    /// section to `1e-8`. If the signal is stationary inside that bracket,
    /// the limit there is also computed and wins unless the refined minimum
    /// is lower by more than `1e-6` relative (the finite-difference noise
    /// floor next to the stationary point).
    pub fn optimal(&self, window: PhaseWindow) -> Result<SensitivityResult> {
        let grid = window.grid();
        let mut best: Option<(usize, f64)> = None;
        for (i, &phi) in grid.iter().enumerate() {
            let Ok(res) = self.sensitivity(phi) else { continue };
            let value = res.delta_phi;
            if !value.is_finite() {
                continue;
            }
            match best {
                Some((_, b)) if value > b * (1.0 + 1e-9) => {}
                _ => best = Some((i, value)),
            }
        }
        let Some((i, grid_value)) = best else {
            return Err(Error::SearchFailure(format!(
                "no finite sensitivity in [{}, {}]",
                window.lo, window.hi
            )));
        };
        let lo = if i > 0 { grid[i - 1] } else { grid[i] };
        let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
        let objective = |p: f64| self.sensitivity(p).map(|r| r.delta_phi);

        let stationary = self.stationary_in(lo, hi, grid[i]);
        let candidates: Vec<(f64, f64)> = match stationary {
            Some(s) => [(lo, s - STATIONARY_PAD), (s + STATIONARY_PAD, hi)]
                .into_iter()
                .filter(|(a, b)| b - a > SEARCH_TOL)
                .filter_map(|(a, b)| golden_section_min(objective, a, b, SEARCH_TOL).ok())
                .collect(),
            None if hi > lo => golden_section_min(objective, lo, hi, SEARCH_TOL).into_iter().collect(),
            None => Vec::new(),
        };
        let mut winner = (grid[i], grid_value);
        for c in candidates {
            if c.1 < winner.1 {
                winner = c;
            }
        }
        if let Some(s) = stationary {
            if let Ok(lim) = self.limit(s) {
                if lim.delta_phi <= winner.1 * (1.0 + 1e-6) {
                    return Ok(lim);
                }
            }
        }
        self.sensitivity(winner.0)
    }

    /// Stationary point of the mean signal inside `[lo, hi]`, if any.
    fn stationary_in(&self, lo: f64, hi: f64, centre: f64) -> Option<f64> {
        if matches!(self.det, DetectionKind::Homodyne { quadrature: Quadrature::Optimal, .. }) {
            return None;
        }
        let slope = |p: f64| self.signal_derivative(p).map(|d| d.value);
        for p in [centre, lo, hi] {
            if let (Ok(d), Ok(s)) = (self.signal_derivative(p), self.signal(p)) {
                if is_stationary(&d, s) {
                    return Some(p);
                }
            }
        }
        let (Ok(a), Ok(b)) = (slope(lo), slope(hi)) else { return None };
        if a.signum() == b.signum() {
            return None;
        }
        bisect(slope, lo, hi, 1e-12).ok()
    }
}

/// Sensitivity of `det` at `phi` for the given input and interferometer.
pub fn phase_sensitivity(
    det: &DetectionKind,
    spec: &InputSpec,
    config: &InterferometerConfig,
    phi: f64,
) -> Result<SensitivityResult> {
    Sensor::new(det.clone(), spec, config)?.sensitivity(phi)
}

/// Limit of the sensitivity towards the stationary point `phi0`.
pub fn sensitivity_limit(
    det: &DetectionKind,
    spec: &InputSpec,
    config: &InterferometerConfig,
    phi0: f64,
) -> Result<SensitivityResult> {
    Sensor::new(det.clone(), spec, config)?.limit(phi0)
}

/// Best operating point within `window`.
pub fn optimal_sensitivity(
    det: &DetectionKind,
    spec: &InputSpec,
    config: &InterferometerConfig,
    window: PhaseWindow,
) -> Result<SensitivityResult> {
    Sensor::new(det.clone(), spec, config)?.optimal(window)
}
