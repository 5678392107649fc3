//! Transfer maps of the SU(1,1) interferometer and propagation of inputs.
//!
//! Stages act in physical order: OPA1, phase shift on arm `a`, per-arm loss
//! (fictitious beam splitters coupling to vacuum ancillas), OPA2. Arm modes are
//! indices 0 (`a`) and 1 (`b`); the lossy path appends ancillas `v_a` (2) and
//! `v_b` (3).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{make_input_state, BogoliubovMap, GaussianState, InputSpec};

/// Index of the phase-sensing arm.
pub const MODE_A: usize = 0;
/// Index of the free arm (parity is read out here).
pub const MODE_B: usize = 1;

/// OPA strengths and phases plus the internal loss on each arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    pub g1: f64,
    pub g2: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// Loss on the phase-sensing arm `a_1`.
    pub l1: f64,
    /// Loss on the free arm `b_1`.
    pub l2: f64,
}

impl InterferometerConfig {
    /// Balanced setting: equal strengths, `theta1 = 0`, `theta2 = pi`, so the
    /// second OPA undoes the first at `phi = 0`.
    pub fn balanced(g: f64) -> Self {
        Self { g1: g, g2: g, theta1: 0.0, theta2: PI, l1: 0.0, l2: 0.0 }
    }

    pub fn with_loss(self, loss: f64) -> Self {
        self.with_losses(loss, loss)
    }

    pub fn with_losses(mut self, l1: f64, l2: f64) -> Self {
        self.l1 = l1;
        self.l2 = l2;
        self
    }

    pub fn is_lossy(&self) -> bool {
        self.l1 != 0.0 || self.l2 != 0.0
    }

    pub fn is_balanced(&self) -> bool {
        self.g1 == self.g2 && self.theta1 == 0.0 && (self.theta2 - PI).abs() < 1e-15
    }

    pub fn validate(&self) -> Result<()> {
        for (name, g) in [("g1", self.g1), ("g2", self.g2)] {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {g}")));
            }
        }
        if !self.theta1.is_finite() || !self.theta2.is_finite() {
            return Err(Error::invalid("OPA phases must be finite"));
        }
        check_loss("l1", self.l1)?;
        check_loss("l2", self.l2)
    }
}

fn check_loss(name: &str, l: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&l) {
        return Err(Error::invalid(format!("{name} must lie in [0, 1], got {l}")));
    }
    Ok(())
}

/// Photon numbers inside the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonBudget {
    /// Spontaneous emission of the first OPA, `2 sinh^2 g`.
    pub n_opa: f64,
    /// Input photons `N_alpha + N_s`.
    pub n_in: f64,
    /// `(n_opa + 1) n_in + n_opa`.
    pub n_tot: f64,
}

/// Two-mode squeezer `[[cosh g, e^{i theta} sinh g], [e^{-i theta} sinh g, cosh g]]`
/// on `(alpha, beta^*)`.
pub fn opa_map(g: f64, theta: f64) -> Result<BogoliubovMap> {
    if !g.is_finite() || g < 0.0 {
        return Err(Error::invalid(format!("OPA strength must be >= 0, got {g}")));
    }
    let u = Complex64::new(g.cosh(), 0.0);
    let v = Complex64::from_polar(g.sinh(), theta);
    BogoliubovMap::alternating(DMatrix::from_row_slice(2, 2, &[u, v, v.conj(), u]))
}

/// Phase shift `diag(e^{i phi}, 1)` on arm `a`.
pub fn phase_map(phi: f64) -> BogoliubovMap {
    let m = DMatrix::from_diagonal(&DVector::from_vec(vec![
        Complex64::from_polar(1.0, phi),
        Complex64::new(1.0, 0.0),
    ]));
    BogoliubovMap::alternating(m).expect("2x2 phase map")
}

/// Four-mode loss stage on `(alpha, beta^*, v_a, v_b^*)`: arm `a` mixes with
/// `v_a` by `(sqrt(1-L1), sqrt L1)`, arm `b` with `v_b` by `(sqrt(1-L2), sqrt L2)`.
pub fn loss_map(l1: f64, l2: f64) -> Result<BogoliubovMap> {
    check_loss("l1", l1)?;
    check_loss("l2", l2)?;
    let (t1, s1) = ((1.0 - l1).sqrt(), l1.sqrt());
    let (t2, s2) = ((1.0 - l2).sqrt(), l2.sqrt());
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        t1,  0.0, s1,  0.0,
        0.0, t2,  0.0, s2,
        -s1, 0.0, t1,  0.0,
        0.0, -s2, 0.0, t2,
    ]);
    BogoliubovMap::alternating(m.map(|x| Complex64::new(x, 0.0)))
}

/// Compose the full transfer map. The ideal map acts on the two arms; the
/// lossy map acts on arms plus ancillas and reduces to the ideal one on the
/// arm block when `L1 = L2 = 0`.
pub fn build_transfer(config: &InterferometerConfig, phi: f64, lossy: bool) -> Result<BogoliubovMap> {
    config.validate()?;
    let opa1 = opa_map(config.g1, config.theta1)?;
    let opa2 = opa_map(config.g2, config.theta2)?;
    let phase = phase_map(phi);
    if lossy {
        opa1.embed(4)?
            .then(&phase.embed(4)?)?
            .then(&loss_map(config.l1, config.l2)?)?
            .then(&opa2.embed(4)?)
    } else {
        if config.is_lossy() {
            return Err(Error::invalid("the ideal transfer map cannot carry loss"));
        }
        opa1.then(&phase)?.then(&opa2)
    }
}

/// Output state of the interferometer. Lossless configurations use the
/// two-mode ideal path; lossy ones return arms plus the two ancillas.
pub fn propagate(spec: &InputSpec, config: &InterferometerConfig, phi: f64) -> Result<GaussianState> {
    Propagator::new(spec, config)?.at(phi)
}

/// Precomputed propagation for repeated evaluation at different phases.
///
/// Caches the state after OPA1 and the real map of everything after the
/// phase shift, so each phase only costs one rotation and one congruence.
#[derive(Debug, Clone)]
pub struct Propagator {
    after_opa1: GaussianState,
    post_phase: DMatrix<f64>,
    lossy: bool,
}

impl Propagator {
    pub fn new(spec: &InputSpec, config: &InterferometerConfig) -> Result<Self> {
        Self::with_path(spec, config, config.is_lossy())
    }

    /// Force the four-mode (`lossy = true`) or two-mode path.
    pub fn with_path(spec: &InputSpec, config: &InterferometerConfig, lossy: bool) -> Result<Self> {
        config.validate()?;
        if !lossy && config.is_lossy() {
            return Err(Error::invalid("the ideal path cannot carry loss"));
        }
        let n = if lossy { 4 } else { 2 };
        let input = make_input_state(spec, n - 2)?;
        let opa1 = opa_map(config.g1, config.theta1)?.embed(n)?;
        let opa2 = opa_map(config.g2, config.theta2)?.embed(n)?;
        let post = if lossy {
            loss_map(config.l1, config.l2)?.then(&opa2)?
        } else {
            opa2
        };
        Ok(Self {
            after_opa1: input.apply(&opa1)?,
            post_phase: post.symplectic().clone(),
            lossy,
        })
    }

    pub fn is_lossy(&self) -> bool {
        self.lossy
    }

    /// State between the OPAs before the phase shift.
    pub fn internal_state(&self) -> &GaussianState {
        &self.after_opa1
    }

    pub fn at(&self, phi: f64) -> Result<GaussianState> {
        if !phi.is_finite() {
            return Err(Error::invalid("phase must be finite"));
        }
        // Rotation of arm a's quadratures by phi, folded into the post map.
        let mut s = self.post_phase.clone();
        let (sin, cos) = phi.sin_cos();
        for row in 0..s.nrows() {
            let (x, p) = (s[(row, 0)], s[(row, 1)]);
            s[(row, 0)] = x * cos + p * sin;
            s[(row, 1)] = -x * sin + p * cos;
        }
        let mean = &s * self.after_opa1.mean();
        let cov = &s * self.after_opa1.cov() * s.transpose();
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(GaussianState::from_parts_unchecked(mean, cov))
    }
}

/// Photon budget from the input and the first OPA.
pub fn photon_budget(spec: &InputSpec, config: &InterferometerConfig) -> PhotonBudget {
    let n_opa = 2.0 * config.g1.sinh().powi(2);
    let n_in = spec.n_in();
    PhotonBudget { n_opa, n_in, n_tot: (n_opa + 1.0) * n_in + n_opa }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn opa_entries() {
        assert_eq!(opa_map(0.0, 0.3).unwrap().matrix(), &DMatrix::identity(2, 2));
        let m = opa_map(1.0, 0.0).unwrap();
        assert_relative_eq!(m.matrix()[(0, 0)].re, 1.5430806348152437, epsilon = 1e-15);
        assert_relative_eq!(m.matrix()[(0, 1)].re, 1.1752011936438014, epsilon = 1e-15);
        assert_relative_eq!(m.matrix()[(1, 0)].re, 1.1752011936438014, epsilon = 1e-15);
        let flipped = opa_map(1.0, PI).unwrap();
        assert_relative_eq!(flipped.matrix()[(0, 1)].re, -1.1752011936438014, epsilon = 1e-15);
        assert_relative_eq!(flipped.matrix()[(1, 0)].re, -1.1752011936438014, epsilon = 1e-15);
        assert!(opa_map(-0.1, 0.0).is_err());
    }

    #[test]
    fn phase_entries() {
        assert!(max_diff(phase_map(0.0).matrix(), &DMatrix::identity(2, 2)) < 1e-15);
        let half = phase_map(PI);
        assert!((half.matrix()[(0, 0)] - c(-1.0)).norm() < 1e-15);
        let quarter = phase_map(PI / 2.0);
        assert!((quarter.matrix()[(0, 0)] - Complex64::i()).norm() < 1e-15);
        assert_eq!(quarter.matrix()[(1, 1)], c(1.0));
    }

    #[test]
    fn loss_entries() {
        assert_eq!(loss_map(0.0, 0.0).unwrap().matrix(), &DMatrix::identity(4, 4));
        let m = loss_map(0.1, 0.0).unwrap();
        assert_relative_eq!(m.matrix()[(0, 0)].re, 0.9486832980505138, epsilon = 1e-15);
        assert!(loss_map(1.2, 0.0).is_err());
        assert!(loss_map(0.0, -0.1).is_err());
        assert!(m.metric_defect() < 1e-12);
    }

    #[test]
    fn full_loss_leaves_arm_vacuum_before_opa2() {
        let spec = InputSpec::coherent_squeezed(2.0, 1.0);
        let input = make_input_state(&spec, 2).unwrap();
        let out = input.apply(&loss_map(1.0, 1.0).unwrap()).unwrap();
        let arms = out.reduce_to_modes(&[0, 1]).unwrap();
        assert!(arms.max_abs_diff(&GaussianState::vacuum(2)) < 1e-15);
    }

    #[test]
    fn balanced_identity_at_zero_phase() {
        let t = build_transfer(&InterferometerConfig::balanced(1.0), 0.0, false).unwrap();
        assert!(max_diff(t.matrix(), &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn balanced_inverse_matches_closed_matrix() {
        let (g, phi) = (1.0f64, 0.3f64);
        let t = build_transfer(&InterferometerConfig::balanced(g), phi, false).unwrap();
        let inv = t.matrix().clone().try_inverse().unwrap();
        let a = Complex64::from_polar((phi / 2.0).cos(), -phi / 2.0);
        let b = Complex64::from_polar((phi / 2.0).sin(), -phi / 2.0);
        let i = Complex64::i();
        let gg = a - i * b * (2.0 * g).cosh();
        let hh = a + i * b * (2.0 * g).cosh();
        let rr = -i * b * (2.0 * g).sinh();
        let expected = DMatrix::from_row_slice(2, 2, &[gg, rr, -rr, hh]);
        assert!(max_diff(&inv, &expected) < 1e-12);
    }

    #[test]
    fn lossy_transfer_without_loss_matches_ideal() {
        let cfg = InterferometerConfig { g1: 0.7, g2: 1.1, theta1: 0.2, theta2: 2.9, l1: 0.0, l2: 0.0 };
        for phi in [-2.0, 0.0, 0.3, 1.7] {
            let ideal = build_transfer(&cfg, phi, false).unwrap();
            let lossy = build_transfer(&cfg, phi, true).unwrap();
            assert!(max_diff(&lossy.restrict(2), ideal.matrix()) < 1e-12);
            assert!(lossy.metric_defect() < 1e-10);
        }
    }

    #[test]
    fn ideal_path_rejects_loss() {
        let cfg = InterferometerConfig::balanced(1.0).with_loss(0.1);
        assert!(build_transfer(&cfg, 0.0, false).is_err());
    }

    #[test]
    fn vacuum_round_trip() {
        let out = propagate(&InputSpec::Vacuum, &InterferometerConfig::balanced(1.0), 0.0).unwrap();
        assert!(out.max_abs_diff(&GaussianState::vacuum(2)) < 1e-12);
    }

    #[test]
    fn squeezed_marginal_survives_balanced_zero_phase() {
        let spec = InputSpec::coherent_squeezed(2.0, 1.0);
        let out = propagate(&spec, &InterferometerConfig::balanced(1.0), 0.0).unwrap();
        let b = out.reduce_to_mode(MODE_B).unwrap();
        assert!(b.max_abs_diff(&GaussianState::squeezed_vacuum(1.0)) < 1e-11);
    }

    #[test]
    fn internal_photons_match_budget() {
        for spec in [
            InputSpec::Vacuum,
            InputSpec::coherent(2.0),
            InputSpec::coherent_squeezed(2.0, 1.0),
            InputSpec::two_coherent(1.5),
        ] {
            let cfg = InterferometerConfig::balanced(1.0).with_loss(0.2);
            let p = Propagator::new(&spec, &cfg).unwrap();
            let inside = p.internal_state();
            let n = inside.photon_number(MODE_A).unwrap() + inside.photon_number(MODE_B).unwrap();
            assert_relative_eq!(n, photon_budget(&spec, &cfg).n_tot, epsilon = 1e-10);
        }
        let vac = Propagator::new(&InputSpec::Vacuum, &InterferometerConfig::balanced(1.0)).unwrap();
        assert_relative_eq!(vac.internal_state().photon_number(MODE_A).unwrap(), 1.0f64.sinh().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn photon_budget_values() {
        let cfg = InterferometerConfig::balanced(1.0);
        assert_relative_eq!(photon_budget(&InputSpec::Vacuum, &cfg).n_tot, 2.762195691083631, epsilon = 1e-12);
        let b = photon_budget(&InputSpec::coherent(2.0), &cfg);
        assert_eq!(b.n_in, 4.0);
        assert_relative_eq!(b.n_tot, 17.810978455418155, epsilon = 1e-12);
        let b = photon_budget(&InputSpec::coherent_squeezed(2.0, 1.0), &cfg);
        assert_relative_eq!(b.n_in, 5.381097845541816, epsilon = 1e-12);
        assert_relative_eq!(b.n_tot, 23.00693881888046, epsilon = 1e-12);
    }

    #[test]
    fn propagator_matches_direct_composition() {
        let spec = InputSpec::CoherentSqueezed { alpha: 1.2, theta_alpha: 0.4, r: 0.6 };
        let cfg = InterferometerConfig::balanced(0.9).with_losses(0.1, 0.25);
        let p = Propagator::new(&spec, &cfg).unwrap();
        for phi in [-1.0, 0.2, 2.5] {
            let direct = make_input_state(&spec, 2).unwrap().apply(&build_transfer(&cfg, phi, true).unwrap()).unwrap();
            assert!(p.at(phi).unwrap().max_abs_diff(&direct) < 1e-11);
        }
    }
}
