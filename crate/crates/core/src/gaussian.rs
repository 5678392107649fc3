//! Multimode Gaussian states in quadrature coordinates and the linear
//! (Bogoliubov) maps that act on them.
//!
//! Quadratures are ordered `(X1, P1, X2, P2, ...)` with
//! `X = (c + c^dag)/sqrt(2)`, so each vacuum mode has covariance `I/2`. A
//! complex amplitude `c = (X + iP)/sqrt(2)` therefore has mean quadratures
//! `(sqrt(2) Re c, sqrt(2) Im c)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on covariance symmetry.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lower bound on the smallest eigenvalue of `cov + i Omega / 2`.
pub const UNCERTAINTY_TOL: f64 = 1e-10;
/// Tolerance on the bosonic metric for lossless maps.
pub const METRIC_TOL: f64 = 1e-10;

/// Which two-mode input enters the interferometer.
///
/// `alpha` is always the magnitude `|alpha_0|` and `theta_alpha` its phase.
/// The squeezed vacuum has its squeezing phase fixed to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputSpec {
    Vacuum,
    Coherent { alpha: f64, theta_alpha: f64 },
    CoherentSqueezed { alpha: f64, theta_alpha: f64, r: f64 },
    /// `|i alpha_0 / sqrt 2> (x) |alpha_0 / sqrt 2>`.
    TwoCoherent { alpha: f64, theta_alpha: f64 },
}

impl InputSpec {
    pub fn coherent(alpha: f64) -> Self {
        InputSpec::Coherent { alpha, theta_alpha: 0.0 }
    }

    pub fn coherent_squeezed(alpha: f64, r: f64) -> Self {
        InputSpec::CoherentSqueezed { alpha, theta_alpha: 0.0, r }
    }

    pub fn two_coherent(alpha: f64) -> Self {
        InputSpec::TwoCoherent { alpha, theta_alpha: 0.0 }
    }

    /// Build from the flat parameter set used by the CLI.
    pub fn from_parameters(kind: InputKind, alpha: f64, theta_alpha: f64, r: f64) -> Self {
        match kind {
            InputKind::Vacuum => InputSpec::Vacuum,
            InputKind::Coherent => InputSpec::Coherent { alpha, theta_alpha },
            InputKind::CoherentSqueezed => InputSpec::CoherentSqueezed { alpha, theta_alpha, r },
            InputKind::TwoCoherent => InputSpec::TwoCoherent { alpha, theta_alpha },
        }
    }

    pub fn kind(&self) -> InputKind {
        match self {
            InputSpec::Vacuum => InputKind::Vacuum,
            InputSpec::Coherent { .. } => InputKind::Coherent,
            InputSpec::CoherentSqueezed { .. } => InputKind::CoherentSqueezed,
            InputSpec::TwoCoherent { .. } => InputKind::TwoCoherent,
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            InputSpec::Vacuum => 0.0,
            InputSpec::Coherent { alpha, .. }
            | InputSpec::CoherentSqueezed { alpha, .. }
            | InputSpec::TwoCoherent { alpha, .. } => alpha,
        }
    }

    pub fn theta_alpha(&self) -> f64 {
        match *self {
            InputSpec::Vacuum => 0.0,
            InputSpec::Coherent { theta_alpha, .. }
            | InputSpec::CoherentSqueezed { theta_alpha, .. }
            | InputSpec::TwoCoherent { theta_alpha, .. } => theta_alpha,
        }
    }

    pub fn squeezing(&self) -> f64 {
        match *self {
            InputSpec::CoherentSqueezed { r, .. } => r,
            _ => 0.0,
        }
    }

    /// Coherent photon number `N_alpha = |alpha_0|^2`.
    pub fn n_alpha(&self) -> f64 {
        self.alpha().powi(2)
    }

    /// Squeezed-vacuum photon number `N_s = sinh^2 r`.
    pub fn n_squeezed(&self) -> f64 {
        self.squeezing().sinh().powi(2)
    }

    /// Total mean input photon number `N_in = N_alpha + N_s`.
    pub fn n_in(&self) -> f64 {
        self.n_alpha() + self.n_squeezed()
    }

    pub fn validate(&self) -> Result<()> {
        let alpha = self.alpha();
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::invalid(format!("|alpha0| must be finite and >= 0, got {alpha}")));
        }
        if !self.theta_alpha().is_finite() {
            return Err(Error::invalid("theta_alpha must be finite"));
        }
        let r = self.squeezing();
        if !r.is_finite() || r < 0.0 {
            return Err(Error::invalid(format!("squeezing r must be finite and >= 0, got {r}")));
        }
        Ok(())
    }
}

/// Input class without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputKind {
    Vacuum,
    Coherent,
    CoherentSqueezed,
    TwoCoherent,
}

impl InputKind {
    pub fn name(&self) -> &'static str {
        match self {
            InputKind::Vacuum => "vacuum",
            InputKind::Coherent => "coherent",
            InputKind::CoherentSqueezed => "coherent-squeezed",
            InputKind::TwoCoherent => "two-coherent",
        }
    }
}

impl std::str::FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vacuum" => Ok(InputKind::Vacuum),
            "coherent" => Ok(InputKind::Coherent),
            "coherent-squeezed" => Ok(InputKind::CoherentSqueezed),
            "two-coherent" => Ok(InputKind::TwoCoherent),
            other => Err(Error::invalid(format!("unknown input kind `{other}`"))),
        }
    }
}

/// A complex linear map on the stacked amplitude vector `(c_1, c_2^*, ...)`.
///
/// Each slot is either a mode amplitude or its conjugate (`conjugated[k]`).
/// The real `2n x 2n` quadrature matrix is computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovMap {
    matrix: DMatrix<Complex64>,
    conjugated: Vec<bool>,
    symplectic: DMatrix<f64>,
}

impl BogoliubovMap {
    /// Slot pattern `(c, c^*, c, c^*, ...)` used for all interferometer maps:
    /// arm `a`, arm `b^*`, ancilla `v_a`, ancilla `v_b^*`.
    pub fn alternating_pattern(n_modes: usize) -> Vec<bool> {
        (0..n_modes).map(|k| k % 2 == 1).collect()
    }

    pub fn new(matrix: DMatrix<Complex64>, conjugated: Vec<bool>) -> Result<Self> {
        let n = conjugated.len();
        if n == 0 {
            return Err(Error::invalid("a map needs at least one mode"));
        }
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let symplectic = real_representation(&matrix, &conjugated);
        Ok(Self { matrix, conjugated, symplectic })
    }

    /// Map with the alternating slot pattern.
    pub fn alternating(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, Self::alternating_pattern(n))
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::alternating(DMatrix::identity(n_modes, n_modes)).expect("square identity")
    }

    pub fn n_modes(&self) -> usize {
        self.conjugated.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn conjugated(&self) -> &[bool] {
        &self.conjugated
    }

    /// Real quadrature representation `S` with `r_out = S r_in`.
    pub fn symplectic(&self) -> &DMatrix<f64> {
        &self.symplectic
    }

    /// Map that applies `self` first and then `later`.
    pub fn then(&self, later: &BogoliubovMap) -> Result<BogoliubovMap> {
        if later.conjugated != self.conjugated {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                actual: later.n_modes(),
            });
        }
        Ok(BogoliubovMap {
            matrix: &later.matrix * &self.matrix,
            conjugated: self.conjugated.clone(),
            symplectic: &later.symplectic * &self.symplectic,
        })
    }

    /// Extend to `n_modes` slots by acting as the identity on the extra modes.
    pub fn embed(&self, n_modes: usize) -> Result<BogoliubovMap> {
        let n = self.n_modes();
        if n_modes < n {
            return Err(Error::DimensionMismatch { expected: n, actual: n_modes });
        }
        let mut m = DMatrix::identity(n_modes, n_modes);
        m.view_mut((0, 0), (n, n)).copy_from(&self.matrix);
        let mut conj = self.conjugated.clone();
        conj.extend((n..n_modes).map(|k| k % 2 == 1));
        BogoliubovMap::new(m, conj)
    }

    /// Sub-block acting on the first `n` slots.
    pub fn restrict(&self, n: usize) -> DMatrix<Complex64> {
        self.matrix.view((0, 0), (n, n)).into_owned()
    }

    /// `max |M eta M^dag - eta|` with `eta = diag(+1 / -1)` by slot type.
    pub fn metric_defect(&self) -> f64 {
        let eta = DMatrix::from_diagonal(&DVector::from_iterator(
            self.n_modes(),
            self.conjugated
                .iter()
                .map(|&c| Complex64::new(if c { -1.0 } else { 1.0 }, 0.0)),
        ));
        let lhs = &self.matrix * &eta * self.matrix.adjoint();
        (lhs - eta).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Convert a slot-wise complex map into the real quadrature map.
///
/// Rows for conjugated slots are conjugated first so that every output is
/// written as `c'_j = sum_k A_jk c_k + B_jk c_k^*`. With `c = (x + ip)/sqrt 2`
/// this gives `x' = Re(A+B) x - Im(A-B) p` and `p' = Im(A+B) x + Re(A-B) p`.
fn real_representation(matrix: &DMatrix<Complex64>, conjugated: &[bool]) -> DMatrix<f64> {
    let n = conjugated.len();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let mut c = matrix[(j, k)];
            if conjugated[j] {
                c = c.conj();
            }
            let (a, b) = if conjugated[j] ^ conjugated[k] {
                (Complex64::new(0.0, 0.0), c)
            } else {
                (c, Complex64::new(0.0, 0.0))
            };
            let p = a + b;
            let q = a - b;
            s[(2 * j, 2 * k)] = p.re;
            s[(2 * j, 2 * k + 1)] = -q.im;
            s[(2 * j + 1, 2 * k)] = p.im;
            s[(2 * j + 1, 2 * k + 1)] = q.re;
        }
    }
    s
}

/// Mean vector and covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validating constructor: checks dimensions, symmetry and the
    /// uncertainty relation.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::invalid(format!("mean length must be a positive even number, got {dim}")));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: cov.nrows() });
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::invalid(format!("covariance not symmetric (max |V - V^T| = {asym:e})")));
        }
        let state = Self { mean, cov };
        let min_eig = state.uncertainty_min_eigenvalue();
        if min_eig < -UNCERTAINTY_TOL {
            return Err(Error::invalid(format!(
                "covariance violates the uncertainty relation (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    pub fn coherent(amplitude: Complex64) -> Self {
        let s2 = std::f64::consts::SQRT_2;
        Self {
            mean: DVector::from_vec(vec![s2 * amplitude.re, s2 * amplitude.im]),
            cov: DMatrix::identity(2, 2) * 0.5,
        }
    }

    /// Squeezed vacuum with real squeezing parameter `r` and zero squeezing
    /// phase: `Var X = e^{2r}/2`, `Var P = e^{-2r}/2`.
    pub fn squeezed_vacuum(r: f64) -> Self {
        Self {
            mean: DVector::zeros(2),
            cov: DMatrix::from_diagonal(&DVector::from_vec(vec![
                0.5 * (2.0 * r).exp(),
                0.5 * (-2.0 * r).exp(),
            ])),
        }
    }

    /// Product state `self (x) other`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (d1, d2) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Transform by a Bogoliubov map: `mu -> S mu`, `V -> S V S^T`.
    pub fn apply(&self, map: &BogoliubovMap) -> Result<GaussianState> {
        if map.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                actual: map.n_modes(),
            });
        }
        let s = map.symplectic();
        let mean = s * &self.mean;
        let mut cov = s * &self.cov * s.transpose();
        // Re-symmetrise to keep rounding from accumulating across stages.
        let t = cov.transpose();
        cov = (cov + t) * 0.5;
        Ok(GaussianState { mean, cov })
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            Err(Error::ModeOutOfRange { index: mode, n_modes: self.n_modes() })
        } else {
            Ok(())
        }
    }

    /// Marginal of a single mode.
    pub fn reduce_to_mode(&self, mode: usize) -> Result<GaussianState> {
        self.reduce_to_modes(&[mode])
    }

    /// Marginal over the listed modes, in the listed order.
    pub fn reduce_to_modes(&self, modes: &[usize]) -> Result<GaussianState> {
        if modes.is_empty() {
            return Err(Error::invalid("mode set must be nonempty"));
        }
        for &m in modes {
            self.check_mode(m)?;
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]);
        Ok(GaussianState { mean, cov })
    }

    /// Wigner density in quadrature variables,
    /// `(2 pi)^{-n} det(V)^{-1/2} exp(-d^T V^{-1} d / 2)`.
    pub fn wigner_value(&self, point: &[f64]) -> Result<f64> {
        let dim = self.mean.len();
        if point.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: point.len() });
        }
        let det = self.cov.determinant();
        if !(det >= 1e-300) {
            return Err(Error::NumericDegeneracy(format!("covariance determinant {det:e}")));
        }
        let chol = self
            .cov
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NumericDegeneracy("covariance not positive definite".into()))?;
        let d = DVector::from_column_slice(point) - &self.mean;
        let q = d.dot(&chol.solve(&d));
        let n = self.n_modes() as i32;
        Ok((2.0 * PI).powi(-n) * det.powf(-0.5) * (-0.5 * q).exp())
    }

    /// Smallest eigenvalue of the Hermitian matrix `V + i Omega / 2`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let dim = self.mean.len();
        let mut h = DMatrix::<Complex64>::from_fn(dim, dim, |i, j| Complex64::new(self.cov[(i, j)], 0.0));
        for m in 0..self.n_modes() {
            h[(2 * m, 2 * m + 1)] += Complex64::new(0.0, 0.5);
            h[(2 * m + 1, 2 * m)] -= Complex64::new(0.0, 0.5);
        }
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest element-wise difference of means and covariances; infinite
    /// when the mode counts differ.
    pub fn max_abs_diff(&self, other: &GaussianState) -> f64 {
        if self.mean.len() != other.mean.len() {
            return f64::INFINITY;
        }
        (&self.mean - &other.mean).amax().max((&self.cov - &other.cov).amax())
    }

    /// Mean photon number `<c^dag c>` of one mode.
    pub fn photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        Ok(0.5 * (self.cov[(x, x)] + self.cov[(p, p)] + self.mean[x].powi(2) + self.mean[p].powi(2) - 1.0))
    }
}

/// Build the input product state: mode `a`, mode `b`, then `ancilla_vacua`
/// vacuum modes.
pub fn make_input_state(spec: &InputSpec, ancilla_vacua: usize) -> Result<GaussianState> {
    spec.validate()?;
    let a0 = Complex64::from_polar(spec.alpha(), spec.theta_alpha());
    let arms = match *spec {
        InputSpec::Vacuum => GaussianState::vacuum(2),
        InputSpec::Coherent { .. } => GaussianState::coherent(a0).tensor(&GaussianState::vacuum(1)),
        InputSpec::CoherentSqueezed { r, .. } => {
            GaussianState::coherent(a0).tensor(&GaussianState::squeezed_vacuum(r))
        }
        InputSpec::TwoCoherent { .. } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            GaussianState::coherent(Complex64::i() * a0 * s).tensor(&GaussianState::coherent(a0 * s))
        }
    };
    Ok(if ancilla_vacua > 0 {
        arms.tensor(&GaussianState::vacuum(ancilla_vacua))
    } else {
        arms
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn opa2(g: f64, theta: f64) -> BogoliubovMap {
        let u = Complex64::new(g.cosh(), 0.0);
        let v = Complex64::from_polar(g.sinh(), theta);
        BogoliubovMap::alternating(DMatrix::from_row_slice(2, 2, &[u, v, v.conj(), u])).unwrap()
    }

    #[test]
    fn vacuum_input() {
        let s = make_input_state(&InputSpec::Vacuum, 0).unwrap();
        assert_eq!(s.mean(), &DVector::zeros(4));
        assert_eq!(s.cov(), &(DMatrix::identity(4, 4) * 0.5));
    }

    #[test]
    fn coherent_input_mean() {
        let s = make_input_state(&InputSpec::coherent(2.0), 0).unwrap();
        assert_relative_eq!(s.mean()[0], 2.828_427_124_746_19, epsilon = 1e-12);
        assert_eq!(s.mean()[1], 0.0);
        assert_eq!(s.cov()[(0, 0)], 0.5);
        assert_eq!(s.cov()[(1, 1)], 0.5);
    }

    #[test]
    fn squeezed_input_variances() {
        let s = make_input_state(&InputSpec::coherent_squeezed(0.0, 1.0), 0).unwrap();
        assert_relative_eq!(s.cov()[(2, 2)], 3.694528049465325, epsilon = 1e-12);
        assert_relative_eq!(s.cov()[(3, 3)], 0.06766764161830635, epsilon = 1e-14);
    }

    #[test]
    fn two_coherent_input_amplitudes() {
        let s = make_input_state(&InputSpec::two_coherent(2.0), 2).unwrap();
        assert_eq!(s.n_modes(), 4);
        // mode a holds i*alpha/sqrt2 -> P = 2, mode b holds alpha/sqrt2 -> X = 2
        assert_relative_eq!(s.mean()[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(s.mean()[1], 2.0, epsilon = 1e-14);
        assert_relative_eq!(s.mean()[2], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn negative_squeezing_rejected() {
        let err = make_input_state(&InputSpec::coherent_squeezed(1.0, -0.1), 0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn identity_map_is_noop() {
        let s = make_input_state(&InputSpec::coherent_squeezed(1.3, 0.4), 2).unwrap();
        let out = s.apply(&BogoliubovMap::identity(4)).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn opa_on_vacuum_gives_sinh2_photons() {
        let out = GaussianState::vacuum(2).apply(&opa2(1.0, 0.0)).unwrap();
        for m in 0..2 {
            assert_relative_eq!(out.photon_number(m).unwrap(), 1.0f64.sinh().powi(2), epsilon = 1e-12);
        }
        assert_relative_eq!(out.photon_number(0).unwrap(), 1.381097845541816, epsilon = 1e-12);
    }

    #[test]
    fn phase_rotates_coherent_mean() {
        let phi = 0.7;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::from_polar(1.0, phi), 0.0.into(), 0.0.into(), 1.0.into()],
        );
        let map = BogoliubovMap::alternating(m).unwrap();
        let s = make_input_state(&InputSpec::coherent(1.5), 0).unwrap();
        let out = s.apply(&map).unwrap();
        let r = 1.5 * std::f64::consts::SQRT_2;
        assert_relative_eq!(out.mean()[0], r * phi.cos(), epsilon = 1e-12);
        assert_relative_eq!(out.mean()[1], r * phi.sin(), epsilon = 1e-12);
        assert_relative_eq!(out.cov(), s.cov(), epsilon = 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let s = GaussianState::vacuum(2);
        assert!(matches!(
            s.apply(&BogoliubovMap::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reduce_modes() {
        let v = GaussianState::vacuum(2).reduce_to_mode(0).unwrap();
        assert_eq!(v, GaussianState::vacuum(1));

        let g: f64 = 0.8;
        let tmsv = GaussianState::vacuum(2).apply(&opa2(g, 0.0)).unwrap();
        for m in 0..2 {
            let r = tmsv.reduce_to_mode(m).unwrap();
            assert_relative_eq!(r.cov()[(0, 0)], (2.0 * g).cosh() / 2.0, epsilon = 1e-12);
            assert_relative_eq!(r.cov()[(1, 1)], (2.0 * g).cosh() / 2.0, epsilon = 1e-12);
            assert_relative_eq!(r.cov()[(0, 1)], 0.0, epsilon = 1e-12);
        }

        let prod = make_input_state(&InputSpec::coherent_squeezed(2.0, 1.0), 0).unwrap();
        assert_eq!(prod.reduce_to_mode(1).unwrap(), GaussianState::squeezed_vacuum(1.0));
        assert!(matches!(prod.reduce_to_mode(2), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn wigner_values() {
        let v = GaussianState::vacuum(1);
        assert_relative_eq!(v.wigner_value(&[0.0, 0.0]).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert_relative_eq!(v.wigner_value(&[1.0, 0.0]).unwrap(), (-1.0f64).exp() / PI, epsilon = 1e-15);
        assert_relative_eq!(0.117099, (-1.0f64).exp() / PI, epsilon = 1e-6);
        let c = GaussianState::coherent(Complex64::new(0.4, -1.1));
        let m = c.mean().clone();
        assert_relative_eq!(c.wigner_value(m.as_slice()).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert!(matches!(v.wigner_value(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn singular_covariance_is_degenerate() {
        let s = GaussianState::from_parts_unchecked(DVector::zeros(2), DMatrix::zeros(2, 2));
        assert!(matches!(s.wigner_value(&[0.0, 0.0]), Err(Error::NumericDegeneracy(_))));
    }

    #[test]
    fn validating_constructor() {
        assert!(GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.5).is_ok());
        // too pure: violates the uncertainty relation
        assert!(GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.4).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(GaussianState::new(DVector::zeros(2), asym).is_err());
    }

    #[test]
    fn opa_preserves_metric() {
        assert!(opa2(1.3, 0.4).metric_defect() < METRIC_TOL);
    }
}
