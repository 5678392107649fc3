//! Brute-force reference model in a truncated two-mode Fock basis.
//!
//! The state is kept as a density operator `rho = sum_i |psi_i><psi_i|` over
//! unnormalised pure components. The OPA is the exponential of the
//! two-mode squeezing generator, the phase shift is diagonal and loss is
//! the binomial Kraus channel, whose outcomes become separate components.
//! Nothing here touches the Gaussian machinery, so agreement between the two
//! is an independent check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::detection::{homodyne_stats, intensity_stats, parity_expectation};
use crate::error::{Error, Result};
use crate::gaussian::InputSpec;
use crate::interferometer::{propagate, InterferometerConfig, MODE_A, MODE_B};

pub const DEFAULT_CUTOFF: usize = 40;
pub const MIN_CUTOFF: usize = 8;
/// Tail mass above which a truncation warning is raised.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-10;
/// Components lighter than this are dropped after a loss step; their weight
/// is added to the tail mass.
const PRUNE_WEIGHT: f64 = 1e-20;

/// Truncated two-mode state with at most `cutoff` photons per mode.
#[derive(Debug, Clone)]
pub struct FockStateRep {
    cutoff: usize,
    components: Vec<DVector<Complex64>>,
    tail_mass: f64,
}

impl FockStateRep {
    fn dim(cutoff: usize) -> usize {
        (cutoff + 1) * (cutoff + 1)
    }

    fn index(&self, na: usize, nb: usize) -> usize {
        na * (self.cutoff + 1) + nb
    }

    /// Product input state; the weight beyond the cutoff starts the tail.
    pub fn input(spec: &InputSpec, cutoff: usize) -> Result<Self> {
        spec.validate()?;
        if cutoff < MIN_CUTOFF {
            return Err(Error::invalid(format!("cutoff must be >= {MIN_CUTOFF}, got {cutoff}")));
        }
        let alpha0 = Complex64::from_polar(spec.alpha(), spec.theta_alpha());
        let (a, b) = match *spec {
            InputSpec::Vacuum => (coherent_amplitudes(Complex64::new(0.0, 0.0), cutoff), vacuum_amplitudes(cutoff)),
            InputSpec::Coherent { .. } => (coherent_amplitudes(alpha0, cutoff), vacuum_amplitudes(cutoff)),
            InputSpec::CoherentSqueezed { r, .. } => (coherent_amplitudes(alpha0, cutoff), squeezed_amplitudes(r, cutoff)),
            InputSpec::TwoCoherent { .. } => {
                let half = alpha0 / 2f64.sqrt();
                (coherent_amplitudes(half * Complex64::i(), cutoff), coherent_amplitudes(half, cutoff))
            }
        };
        let mut psi = DVector::zeros(Self::dim(cutoff));
        for (na, ca) in a.iter().enumerate() {
            for (nb, cb) in b.iter().enumerate() {
                psi[na * (cutoff + 1) + nb] = ca * cb;
            }
        }
        let norm = psi.norm_squared();
        Ok(Self { cutoff, components: vec![psi], tail_mass: (1.0 - norm).max(0.0) })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Estimated population lost beyond the cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn trace(&self) -> f64 {
        self.components.iter().map(|c| c.norm_squared()).sum()
    }

    /// Explicit density matrix; size `(cutoff+1)^2` squared, so only for
    /// small cutoffs.
    pub fn density_matrix(&self) -> DMatrix<Complex64> {
        let d = Self::dim(self.cutoff);
        let mut rho = DMatrix::zeros(d, d);
        for c in &self.components {
            rho += c * c.adjoint();
        }
        rho
    }

    pub fn apply_unitary_blocks(&mut self, op: &TwoModeSqueezer) {
        assert_eq!(op.cutoff, self.cutoff);
        self.components.par_iter_mut().for_each(|psi| op.apply(psi));
        self.tail_mass += self.edge_population();
    }

    fn apply_phase(&mut self, phi: f64) {
        let n = self.cutoff + 1;
        let phases: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, phi * k as f64)).collect();
        for psi in &mut self.components {
            for na in 0..n {
                for nb in 0..n {
                    psi[na * n + nb] *= phases[na];
                }
            }
        }
    }

    fn apply_loss(&mut self, l1: f64, l2: f64) {
        if l1 == 0.0 && l2 == 0.0 {
            return;
        }
        let n = self.cutoff + 1;
        let ka = kraus_coefficients(l1, self.cutoff);
        let kb = kraus_coefficients(l2, self.cutoff);
        let lost_a = if l1 == 0.0 { 1 } else { n };
        let lost_b = if l2 == 0.0 { 1 } else { n };
        let mut out = Vec::new();
        let mut dropped = 0.0;
        for psi in &self.components {
            for k in 0..lost_a {
                for j in 0..lost_b {
                    let mut next = DVector::zeros(n * n);
                    for na in k..n {
                        for nb in j..n {
                            let amp = psi[na * n + nb];
                            if amp != Complex64::new(0.0, 0.0) {
                                next[(na - k) * n + (nb - j)] = amp * (ka[(k, na)] * kb[(j, nb)]);
                            }
                        }
                    }
                    let w = next.norm_squared();
                    if w > PRUNE_WEIGHT {
                        out.push(next);
                    } else {
                        dropped += w;
                    }
                }
            }
        }
        self.components = out;
        self.tail_mass += dropped;
    }

    /// Population with either mode in the top two levels, a proxy for what
    /// the truncated generator has pushed against the cutoff.
    /// Population of each shell `max(n_a, n_b) = k`.
    pub fn shell_populations(&self) -> Vec<f64> {
        let n = self.cutoff + 1;
        let mut shells = vec![0.0; n];
        for psi in &self.components {
            for na in 0..n {
                for nb in 0..n {
                    shells[na.max(nb)] += psi[na * n + nb].norm_sqr();
                }
            }
        }
        shells
    }

    fn edge_population(&self) -> f64 {
        let n = self.cutoff + 1;
        let mut edge = 0.0;
        for psi in &self.components {
            for na in 0..n {
                for nb in 0..n {
                    if na + 2 >= n || nb + 2 >= n {
                        edge += psi[na * n + nb].norm_sqr();
                    }
                }
            }
        }
        edge
    }

    fn expect_diagonal(&self, f: impl Fn(usize, usize) -> f64) -> f64 {
        let n = self.cutoff + 1;
        let mut acc = 0.0;
        for psi in &self.components {
            for na in 0..n {
                for nb in 0..n {
                    acc += f(na, nb) * psi[na * n + nb].norm_sqr();
                }
            }
        }
        acc / self.trace()
    }

    /// `<(-1)^N>` of one mode.
    pub fn parity(&self, mode: usize) -> Result<f64> {
        check_mode(mode)?;
        Ok(self.expect_diagonal(|na, nb| {
            let k = if mode == MODE_A { na } else { nb };
            if k % 2 == 0 { 1.0 } else { -1.0 }
        }))
    }

    /// Mean and variance of the photon number summed over `modes`.
    pub fn photon_stats(&self, modes: &[usize]) -> Result<(f64, f64)> {
        if modes.is_empty() {
            return Err(Error::invalid("photon statistics need at least one mode"));
        }
        for &m in modes {
            check_mode(m)?;
        }
        let count = |na: usize, nb: usize| {
            modes.iter().map(|&m| if m == MODE_A { na } else { nb }).sum::<usize>() as f64
        };
        let mean = self.expect_diagonal(count);
        let second = self.expect_diagonal(|na, nb| count(na, nb).powi(2));
        Ok((mean, second - mean * mean))
    }

    /// Mean and variance of `X(theta) = (c e^{-i theta} + c^dag e^{i theta}) / sqrt 2`.
    pub fn homodyne_stats(&self, mode: usize, theta: f64) -> Result<(f64, f64)> {
        check_mode(mode)?;
        let n = self.cutoff + 1;
        let (mut c1, mut c2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for psi in &self.components {
            for na in 0..n {
                for nb in 0..n {
                    let k = if mode == MODE_A { na } else { nb };
                    let amp = psi[na * n + nb];
                    if k >= 1 {
                        let lower = if mode == MODE_A { self.index(na - 1, nb) } else { self.index(na, nb - 1) };
                        c1 += psi[lower].conj() * amp * (k as f64).sqrt();
                    }
                    if k >= 2 {
                        let lower = if mode == MODE_A { self.index(na - 2, nb) } else { self.index(na, nb - 2) };
                        c2 += psi[lower].conj() * amp * ((k * (k - 1)) as f64).sqrt();
                    }
                }
            }
        }
        let tr = self.trace();
        let (c1, c2) = (c1 / tr, c2 / tr);
        let (n_mean, _) = self.photon_stats(&[mode])?;
        let rot = Complex64::from_polar(1.0, -theta);
        let mean = 2f64.sqrt() * (rot * c1).re;
        let second = (rot * rot * c2).re + n_mean + 0.5;
        Ok((mean, second - mean * mean))
    }
}

fn check_mode(mode: usize) -> Result<()> {
    if mode > MODE_B {
        return Err(Error::ModeOutOfRange { index: mode, n_modes: 2 });
    }
    Ok(())
}

fn vacuum_amplitudes(cutoff: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    v[0] = Complex64::new(1.0, 0.0);
    v
}

fn coherent_amplitudes(beta: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(cutoff + 1);
    v.push(Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0));
    for n in 1..=cutoff {
        let prev = v[n - 1];
        v.push(prev * beta / (n as f64).sqrt());
    }
    v
}

/// Squeezed vacuum stretched along `X`: `c_2n = (tanh r)^n sqrt((2n)!) / (2^n n! sqrt(cosh r))`.
fn squeezed_amplitudes(r: f64, cutoff: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    let t = r.tanh();
    let mut c = 1.0 / r.cosh().sqrt();
    v[0] = Complex64::new(c, 0.0);
    let mut n = 1;
    while 2 * n <= cutoff {
        c *= t * ((2 * n - 1) as f64 / (2 * n) as f64).sqrt();
        v[2 * n] = Complex64::new(c, 0.0);
        n += 1;
    }
    v
}

/// `K_k[n] = sqrt(C(n, k)) (1-L)^{(n-k)/2} L^{k/2}`, the amplitude for
/// `|n> -> |n-k>`, stored as `(k, n)`.
pub fn kraus_coefficients(loss: f64, cutoff: usize) -> DMatrix<f64> {
    let n = cutoff + 1;
    let mut ln_fact = vec![0.0f64; n];
    for k in 1..n {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    DMatrix::from_fn(n, n, |k, m| {
        if k > m {
            return 0.0;
        }
        let binom = (ln_fact[m] - ln_fact[k] - ln_fact[m - k]).exp();
        (binom * (1.0 - loss).powi((m - k) as i32) * loss.powi(k as i32)).sqrt()
    })
}

/// `exp(zeta a^dag b^dag - zeta^* a b)` with `zeta = g e^{i theta}`, stored as
/// dense blocks of fixed `n_a - n_b`.
#[derive(Debug, Clone)]
pub struct TwoModeSqueezer {
    cutoff: usize,
    blocks: Vec<(Vec<usize>, DMatrix<Complex64>)>,
}

impl TwoModeSqueezer {
    pub fn new(g: f64, theta: f64, cutoff: usize) -> Self {
        let n = cutoff + 1;
        let zeta = Complex64::from_polar(g, theta);
        let mut blocks = Vec::with_capacity(2 * n - 1);
        for delta in -(cutoff as i64)..=(cutoff as i64) {
            let start = if delta >= 0 { (delta as usize, 0) } else { (0, (-delta) as usize) };
            let len = n - delta.unsigned_abs() as usize;
            let indices: Vec<usize> = (0..len).map(|m| (start.0 + m) * n + start.1 + m).collect();
            let mut gen = DMatrix::zeros(len, len);
            for m in 0..len.saturating_sub(1) {
                let (na, nb) = (start.0 + m, start.1 + m);
                let w = (((na + 1) * (nb + 1)) as f64).sqrt();
                gen[(m + 1, m)] = zeta * w;
                gen[(m, m + 1)] = -zeta.conj() * w;
            }
            blocks.push((indices, gen.exp()));
        }
        Self { cutoff, blocks }
    }

    fn apply(&self, psi: &mut DVector<Complex64>) {
        for (indices, u) in &self.blocks {
            let local = DVector::from_iterator(indices.len(), indices.iter().map(|&i| psi[i]));
            let out = u * local;
            for (k, &i) in indices.iter().enumerate() {
                psi[i] = out[k];
            }
        }
    }
}

/// Propagate without enforcing the truncation bound.
pub fn oracle_propagate_unchecked(
    spec: &InputSpec,
    config: &InterferometerConfig,
    phi: f64,
    cutoff: usize,
) -> Result<FockStateRep> {
    config.validate()?;
    if !phi.is_finite() {
        return Err(Error::invalid("phase must be finite"));
    }
    let mut state = FockStateRep::input(spec, cutoff)?;
    state.apply_unitary_blocks(&TwoModeSqueezer::new(config.g1, config.theta1, cutoff));
    state.apply_phase(phi);
    state.apply_loss(config.l1, config.l2);
    state.apply_unitary_blocks(&TwoModeSqueezer::new(config.g2, config.theta2, cutoff));
    Ok(state)
}

/// Propagate through OPA1, phase, loss and OPA2. Fails when the estimated
/// tail mass exceeds [`DEFAULT_TAIL_BOUND`].
pub fn oracle_propagate(
    spec: &InputSpec,
    config: &InterferometerConfig,
    phi: f64,
    cutoff: usize,
) -> Result<FockStateRep> {
    let state = oracle_propagate_unchecked(spec, config, phi, cutoff)?;
    if state.tail_mass > DEFAULT_TAIL_BOUND {
        return Err(Error::TruncationExceeded { tail_mass: state.tail_mass, bound: DEFAULT_TAIL_BOUND });
    }
    Ok(state)
}

/// One parameter point of a cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub spec: InputSpec,
    pub config: InterferometerConfig,
    pub phi: f64,
    pub cutoff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance on every compared statistic.
    pub absolute: f64,
    pub tail_bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { absolute: 1e-6, tail_bound: DEFAULT_TAIL_BOUND }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    pub point: OraclePoint,
    /// `(statistic, |oracle - gaussian|)`.
    pub deviations: Vec<(String, f64)>,
    pub tail_mass: f64,
    pub warning: Option<String>,
    pub error: Option<String>,
}

impl PointReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: &Tolerances) -> bool {
        self.error.is_none() && self.deviations.iter().all(|(_, d)| *d <= tol.absolute)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckReport {
    pub tolerances: Tolerances,
    pub points: Vec<PointReport>,
}

impl CrossCheckReport {
    pub fn max_deviation(&self) -> f64 {
        self.points.iter().map(PointReport::max_deviation).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> Vec<&PointReport> {
        self.points.iter().filter(|p| !p.passed(&self.tolerances)).collect()
    }

    pub fn warnings(&self) -> Vec<&PointReport> {
        self.points.iter().filter(|p| p.warning.is_some()).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Small-parameter grid: `g in {0.3, 0.5}`, `|alpha_0| in {0, 0.5, 1}`,
/// `r in {0, 0.5}`, `L in {0, 0.1, 0.2}`, `phi in {0, 0.2, 0.5, 1}` at the
/// default cutoff, plus two-coherent and unequal-loss points.
pub fn default_grid() -> Vec<OraclePoint> {
    let mut grid = Vec::new();
    for &g in &[0.3, 0.5] {
        for &alpha in &[0.0, 0.5, 1.0] {
            for &r in &[0.0, 0.5] {
                for &l in &[0.0, 0.1, 0.2] {
                    for &phi in &[0.0, 0.2, 0.5, 1.0] {
                        let spec = if alpha == 0.0 && r == 0.0 {
                            InputSpec::Vacuum
                        } else {
                            InputSpec::coherent_squeezed(alpha, r)
                        };
                        let config = InterferometerConfig::balanced(g).with_loss(l);
                        grid.push(OraclePoint { spec, config, phi, cutoff: DEFAULT_CUTOFF });
                    }
                }
            }
        }
    }
    for &phi in &[0.2, 1.0] {
        let config = InterferometerConfig::balanced(0.5).with_losses(0.2, 0.05);
        grid.push(OraclePoint { spec: InputSpec::two_coherent(1.0), config, phi, cutoff: DEFAULT_CUTOFF });
        let skew = InputSpec::CoherentSqueezed { alpha: 0.8, theta_alpha: 0.6, r: 0.4 };
        grid.push(OraclePoint { spec: skew, config, phi, cutoff: DEFAULT_CUTOFF });
    }
    grid
}

fn compare(point: &OraclePoint) -> Result<(Vec<(String, f64)>, f64)> {
    let fock = oracle_propagate_unchecked(&point.spec, &point.config, point.phi, point.cutoff)?;
    let gauss = propagate(&point.spec, &point.config, point.phi)?;
    let mut dev = Vec::new();
    for mode in [MODE_A, MODE_B] {
        dev.push((format!("parity[{mode}]"), (fock.parity(mode)? - parity_expectation(&gauss, mode)?).abs()));
    }
    for modes in [&[MODE_A][..], &[MODE_B][..], &[MODE_A, MODE_B][..]] {
        let (fm, fv) = fock.photon_stats(modes)?;
        let (gm, gv) = intensity_stats(&gauss, modes)?;
        let tag: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
        dev.push((format!("mean N[{}]", tag.join("+")), (fm - gm).abs()));
        dev.push((format!("var N[{}]", tag.join("+")), (fv - gv).abs()));
    }
    for mode in [MODE_A, MODE_B] {
        for theta in [0.0, std::f64::consts::FRAC_PI_2] {
            let (fm, fv) = fock.homodyne_stats(mode, theta)?;
            let (gm, gv) = homodyne_stats(&gauss, mode, theta)?;
            dev.push((format!("homodyne mean[{mode},{theta:.4}]"), (fm - gm).abs()));
            dev.push((format!("homodyne var[{mode},{theta:.4}]"), (fv - gv).abs()));
        }
    }
    Ok((dev, fock.tail_mass()))
}

/// Compare oracle and Gaussian statistics point by point. Failures and
/// truncation warnings are report entries, never errors.
pub fn cross_check(grid: &[OraclePoint], tol: &Tolerances) -> CrossCheckReport {
    let points = grid
        .par_iter()
        .map(|point| match compare(point) {
            Ok((deviations, tail_mass)) => PointReport {
                point: *point,
                deviations,
                tail_mass,
                warning: (tail_mass > tol.tail_bound).then(|| {
                    format!("tail mass {tail_mass:.3e} exceeds {:.1e} at cutoff {}", tol.tail_bound, point.cutoff)
                }),
                error: None,
            },
            Err(e) => PointReport {
                point: *point,
                deviations: Vec::new(),
                tail_mass: f64::NAN,
                warning: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    CrossCheckReport { tolerances: *tol, points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kraus_set_is_complete() {
        for loss in [0.0, 0.1, 0.5, 1.0] {
            let k = kraus_coefficients(loss, 30);
            for n in 0..=30 {
                let s: f64 = (0..=n).map(|j| k[(j, n)].powi(2)).sum();
                assert!((s - 1.0).abs() < 1e-10, "loss {loss}, n {n}: {s}");
            }
        }
    }

    #[test]
    fn input_amplitudes_are_normalised() {
        let s = FockStateRep::input(&InputSpec::coherent_squeezed(1.0, 0.5), 40).unwrap();
        assert!(s.tail_mass() < 1e-12);
        assert_relative_eq!(s.trace(), 1.0, epsilon = 1e-12);
        let (m, v) = s.photon_stats(&[MODE_B]).unwrap();
        assert_relative_eq!(m, 0.5f64.sinh().powi(2), epsilon = 1e-12);
        assert_relative_eq!(v, 2.0 * (0.5f64.sinh() * 0.5f64.cosh()).powi(2), epsilon = 1e-9);
        let (_, var_x) = s.homodyne_stats(MODE_B, 0.0).unwrap();
        assert_relative_eq!(var_x, 1f64.exp() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn balanced_vacuum_returns_to_vacuum() {
        let s = oracle_propagate(&InputSpec::Vacuum, &InterferometerConfig::balanced(0.3), 0.0, 30).unwrap();
        let rho = s.density_matrix();
        assert!((rho[(0, 0)].re - 1.0).abs() < 1e-10);
        assert!((rho.norm_squared() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn opa_photon_number() {
        for g in [0.2, 0.5] {
            let mut s = FockStateRep::input(&InputSpec::Vacuum, 30).unwrap();
            s.apply_unitary_blocks(&TwoModeSqueezer::new(g, 0.0, 30));
            let (m, _) = s.photon_stats(&[MODE_A]).unwrap();
            assert_relative_eq!(m, g.sinh().powi(2), epsilon = 1e-8);
            // Two-mode squeezed vacuum: parity of one arm is 1 / cosh(2g).
            assert_relative_eq!(s.parity(MODE_B).unwrap(), 1.0 / (2.0 * g).cosh(), epsilon = 1e-10);
        }
    }

    #[test]
    fn coherent_parity_and_poisson() {
        let s = FockStateRep::input(&InputSpec::coherent(1.0), 30).unwrap();
        assert_relative_eq!(s.parity(MODE_A).unwrap(), (-2.0f64).exp(), epsilon = 1e-12);
        let (m, v) = s.photon_stats(&[MODE_A]).unwrap();
        assert_relative_eq!(m, 1.0, epsilon = 1e-12);
        assert_relative_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn parity_is_one_at_balanced_origin() {
        for spec in [InputSpec::Vacuum, InputSpec::coherent(1.0), InputSpec::coherent_squeezed(1.0, 0.5)] {
            let s = oracle_propagate_unchecked(&spec, &InterferometerConfig::balanced(0.5), 0.0, 40).unwrap();
            assert!((s.parity(MODE_B).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn vacuum_parity_matches_gaussian() {
        let cfg = InterferometerConfig::balanced(0.3);
        let s = oracle_propagate(&InputSpec::Vacuum, &cfg, 0.4, 30).unwrap();
        let g = propagate(&InputSpec::Vacuum, &cfg, 0.4).unwrap();
        assert!((s.parity(MODE_B).unwrap() - parity_expectation(&g, MODE_B).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn lossy_point_matches_gaussian() {
        let point = OraclePoint {
            spec: InputSpec::coherent_squeezed(0.5, 0.3),
            config: InterferometerConfig::balanced(0.3).with_loss(0.1),
            phi: 0.2,
            cutoff: 40,
        };
        let report = cross_check(&[point], &Tolerances::default());
        assert!(report.passed(), "{:?}", report.points[0].deviations);
        assert!(report.max_deviation() < 1e-6);
    }

    #[test]
    fn empty_grid_passes() {
        let report = cross_check(&[], &Tolerances::default());
        assert!(report.passed());
        assert_eq!(report.max_deviation(), 0.0);
    }

    #[test]
    fn low_cutoff_warns() {
        let point = OraclePoint {
            spec: InputSpec::Vacuum,
            config: InterferometerConfig::balanced(0.5),
            phi: 0.3,
            cutoff: 10,
        };
        let report = cross_check(&[point], &Tolerances::default());
        assert_eq!(report.warnings().len(), 1);
        assert!(matches!(
            oracle_propagate(&point.spec, &point.config, point.phi, point.cutoff),
            Err(Error::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn rejects_small_cutoff() {
        assert!(FockStateRep::input(&InputSpec::Vacuum, 4).is_err());
    }
}
