//! Analytic signals, sensitivities and quantum limits of the balanced
//! interferometer (`g1 = g2 = g`, `theta1 = 0`, `theta2 = pi`).
//!
//! Long expressions are written term by term, without simplification, so
//! each named sub-term can be compared against the Gaussian pipeline.

use crate::error::{Error, Result};
use crate::gaussian::{InputKind, InputSpec};
use crate::interferometer::{photon_budget, InterferometerConfig};

/// Parameters shared by all closed forms. `alpha` is `|alpha_0|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaParams {
    pub alpha: f64,
    pub theta_alpha: f64,
    pub r: f64,
    pub g: f64,
    pub l1: f64,
    pub l2: f64,
}

impl FormulaParams {
    pub fn new(alpha: f64, r: f64, g: f64) -> Self {
        Self { alpha, theta_alpha: 0.0, r, g, l1: 0.0, l2: 0.0 }
    }

    pub fn with_loss(self, loss: f64) -> Self {
        self.with_losses(loss, loss)
    }

    pub fn with_losses(mut self, l1: f64, l2: f64) -> Self {
        self.l1 = l1;
        self.l2 = l2;
        self
    }

    pub fn with_theta_alpha(mut self, theta_alpha: f64) -> Self {
        self.theta_alpha = theta_alpha;
        self
    }

    /// Parameters of a simulated setup; the closed forms only cover the
    /// balanced interferometer.
    pub fn from_setup(spec: &InputSpec, config: &InterferometerConfig) -> Result<Self> {
        if !config.is_balanced() {
            return Err(Error::Unsupported(
                "closed forms need g1 = g2, theta1 = 0 and theta2 = pi".into(),
            ));
        }
        Ok(Self {
            alpha: spec.alpha(),
            theta_alpha: spec.theta_alpha(),
            r: spec.squeezing(),
            g: config.g1,
            l1: config.l1,
            l2: config.l2,
        })
    }

    fn equal_loss(&self, what: &str) -> Result<f64> {
        if self.l1 != self.l2 {
            return Err(Error::invalid(format!("{what} needs L1 = L2, got {} and {}", self.l1, self.l2)));
        }
        check_loss(self.l1)?;
        Ok(self.l1)
    }

    fn require_no_squeezing(&self, what: &str) -> Result<()> {
        if self.r != 0.0 {
            return Err(Error::invalid(format!("{what} assumes r = 0, got {}", self.r)));
        }
        Ok(())
    }

    fn n_opa(&self) -> f64 {
        2.0 * self.g.sinh().powi(2)
    }
}

fn check_loss(l: f64) -> Result<()> {
    if !(0.0..1.0).contains(&l) {
        return Err(Error::invalid(format!("loss must lie in [0, 1), got {l}")));
    }
    Ok(())
}

fn finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Singular(format!("{name} is not finite at this point")))
    }
}

/// Sub-terms of the ideal parity signal `<Pi_b> = x1^-1/2 exp(-x2/x3)`.
///
/// `x1_printed` is the expression as published. It carries two slips: the
/// prefactor should be `8 x1^-1/2`, and the `cos phi` coefficient inside the
/// bracket should be `8 sinh^2(4g)` rather than `8 sinh^4(2g)`. `x1` holds the
/// corrected term, which coincides with `y1` at zero loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealParityTerms {
    pub x1_printed: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl IdealParityTerms {
    pub fn new(alpha: f64, theta: f64, r: f64, g: f64, phi: f64) -> Self {
        let (e2r, e4r) = ((2.0 * r).exp(), (4.0 * r).exp());
        let s2g = (2.0 * g).sinh();
        let (c2g, c4g, c8g) = ((2.0 * g).cosh(), (4.0 * g).cosh(), (8.0 * g).cosh());
        let (cp, c2p, sp) = (phi.cos(), (2.0 * phi).cos(), phi.sin());
        let sh2 = (phi / 2.0).sin().powi(2);
        let sh4 = sh2 * sh2;
        let pre = (-2.0 * r).exp() * (e2r + 1.0).powi(2);

        let x1_printed = pre * (8.0 * s2g.powi(4) * (c2p - cp) + 4.0 * c4g + 3.0 * c8g - 7.0) + 64.0;
        let x1 = pre
            * (8.0 * s2g.powi(4) * c2p - 8.0 * (4.0 * g).sinh().powi(2) * cp + 4.0 * c4g + 3.0 * c8g - 7.0)
            + 64.0;
        let x2 = 4.0
            * alpha.powi(2)
            * s2g.powi(2)
            * (8.0 * c4g * (2.0 * theta).cos() * sh4
                - 8.0 * c2g * (2.0 * theta).sin() * sp * (cp - 1.0)
                + 8.0 * e4r * (theta.cos() * sp - 2.0 * c2g * theta.sin() * sh2).powi(2)
                + 32.0 * e2r * s2g.powi(2) * sh4
                + 8.0 * c4g * sh4
                - 8.0 * theta.cos().powi(2) * cp
                + (3.0 * (2.0 * theta).cos() - 1.0) * c2p
                + (2.0 * theta).cos()
                + 5.0);
        let x3 = (e2r + 1.0).powi(2) * (8.0 * c8g * sh4 + 8.0 * c4g * sp.powi(2) + 4.0 * cp + 3.0 * c2p - 7.0)
            + 64.0 * e2r;
        Self { x1_printed, x1, x2, x3 }
    }

    /// `8 x1^-1/2 exp(-x2/x3)` with the corrected `x1`.
    pub fn signal(&self) -> f64 {
        8.0 / self.x1.sqrt() * (-self.x2 / self.x3).exp()
    }

    /// `x1^-1/2 exp(-x2/x3)` exactly as published.
    pub fn signal_printed(&self) -> f64 {
        (-self.x2 / self.x3).exp() / self.x1_printed.sqrt()
    }
}

/// Sub-terms of the lossy parity signal `<Pi_b> = 8 y1^-1/2 exp(-y2/y3)` for
/// equal loss on both arms and `theta_alpha = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyParityTerms {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl LossyParityTerms {
    pub fn new(alpha: f64, r: f64, g: f64, phi: f64, l: f64) -> Self {
        let (e2r, e4r) = ((2.0 * r).exp(), (4.0 * r).exp());
        let (c, c2) = (phi.cos(), (2.0 * phi).cos());
        let ch = |k: f64| (k * g).cosh();
        let lm = l - 1.0;
        let lm2 = lm * lm;

        let y1 = (-2.0 * r).exp()
            * (-4.0 * ch(4.0)
                * (-2.0 * (5.0 * l * l - 2.0 * l + 1.0) * e2r + lm2 * (e2r + 1.0).powi(2) * c2 + lm2 * (-e4r) - lm2)
                + 16.0 * lm2 * e2r * ch(6.0) * c
                + 8.0 * lm2 * e4r * ch(6.0) * c
                - 8.0 * lm2 * e2r * ch(8.0) * c
                - 4.0 * lm2 * e4r * ch(8.0) * c
                + 2.0 * lm2 * e2r * ch(8.0) * c2
                + lm2 * e4r * ch(8.0) * c2
                + 16.0 * lm * e2r * ch(6.0) * c
                + 8.0 * lm * e4r * ch(6.0) * c
                + 8.0 * (1.0 - l) * l * ch(2.0) * ((e2r + 1.0).powi(2) * c - 2.0 * e2r + 7.0 * e4r + 7.0)
                - 16.0 * lm2 * e2r * ch(6.0)
                - 8.0 * lm2 * e4r * ch(6.0)
                + 6.0 * lm2 * e2r * ch(8.0)
                + 3.0 * lm2 * e4r * ch(8.0)
                - 16.0 * lm * e2r * ch(6.0)
                - 8.0 * lm * e4r * ch(6.0)
                + 8.0 * lm2 * ch(6.0) * c
                - 4.0 * lm2 * ch(8.0) * c
                + lm2 * ch(8.0) * c2
                + 8.0 * lm * ch(6.0) * c
                - 8.0 * lm2 * ch(6.0)
                + 3.0 * lm2 * ch(8.0)
                - 8.0 * lm * ch(6.0)
                + 8.0 * lm2 * e2r * c
                + 4.0 * lm2 * e4r * c
                + 6.0 * lm2 * e2r * c2
                + 3.0 * lm2 * e4r * c2
                + 82.0 * lm2 * e2r
                - 7.0 * lm2 * e4r
                + 64.0 * lm * e2r
                + 4.0 * lm2 * c
                + 3.0 * lm2 * c2
                - 7.0 * lm2
                + 32.0 * e2r);

        let y2 = 16.0
            * alpha.powi(2)
            * (1.0 - l)
            * (2.0 * g).sinh().powi(2)
            * (phi / 2.0).sin().powi(2)
            * (2.0 * lm * (e2r * (ch(4.0) - 1.0) * (c - 1.0) + (ch(4.0) + 1.0) * (c - 1.0) - 2.0 * e4r * (c + 1.0))
                + 8.0 * l * e2r * ch(2.0));

        let s2 = (2.0 * g).sinh();
        let inner = lm * (8.0 * s2.powi(4) * c2 + 3.0 * ch(8.0) - 7.0) + 4.0 * lm * ch(4.0) - 8.0 * l * ch(6.0);
        let y3 = -8.0 * lm2 * (e2r + 1.0).powi(2) * (4.0 * g).sinh().powi(2) * c
            + 2.0
                * e2r
                * (8.0 * (l - 2.0) * l * s2.powi(4) * c2 + 4.0 * (l * (5.0 * l - 2.0) + 1.0) * ch(4.0)
                    - 8.0 * lm * l * ch(6.0)
                    + 3.0 * lm2 * ch(8.0)
                    + 8.0 * s2.powi(4) * c2
                    + l * (41.0 * l - 50.0)
                    + 25.0)
            + lm * e4r * inner
            + 8.0 * lm * l * ch(2.0) * (4.0 * (e2r + 1.0).powi(2) * s2.powi(2) * c + 2.0 * e2r - 7.0 * e4r - 7.0)
            + lm * inner;
        Self { y1, y2, y3 }
    }

    pub fn signal(&self) -> f64 {
        8.0 / self.y1.sqrt() * (-self.y2 / self.y3).exp()
    }
}

fn check_terms(name: &str, denominator: f64, signal: f64) -> Result<f64> {
    if denominator.abs() < 1e-300 {
        return Err(Error::Singular(format!("{name} denominator vanishes")));
    }
    finite(name, signal)
}

/// Ideal parity signal with the corrected `x1`.
pub fn parity_signal_ideal_cf(alpha: f64, theta_alpha: f64, r: f64, g: f64, phi: f64) -> Result<f64> {
    let t = IdealParityTerms::new(alpha, theta_alpha, r, g, phi);
    check_terms("x3", t.x3, t.signal())
}

/// Ideal parity signal with `x1` and its prefactor exactly as published.
pub fn parity_signal_ideal_printed(alpha: f64, theta_alpha: f64, r: f64, g: f64, phi: f64) -> Result<f64> {
    let t = IdealParityTerms::new(alpha, theta_alpha, r, g, phi);
    check_terms("x3", t.x3, t.signal_printed())
}

pub fn parity_signal_lossy_cf(alpha: f64, r: f64, g: f64, phi: f64, loss: f64) -> Result<f64> {
    check_loss(loss)?;
    let t = LossyParityTerms::new(alpha, r, g, phi, loss);
    check_terms("y3", t.y3, t.signal())
}

/// Closed-form parity sensitivities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityFormula {
    /// Vacuum input, equal loss, any phi.
    VacuumLoss,
    /// Lossless optimum at `phi = 0` for coherent plus squeezed input,
    /// any `theta_alpha`.
    IdealOptimal,
    /// Lossless optimum at `theta_alpha = 0`.
    IdealOptimalAligned,
    /// One coherent input, equal loss.
    CoherentEqualLoss,
    /// One coherent input, independent losses on the two arms.
    UnequalLoss,
}

impl ParityFormula {
    pub fn name(&self) -> &'static str {
        match self {
            ParityFormula::VacuumLoss => "parity-vacuum-loss",
            ParityFormula::IdealOptimal => "parity-ideal-optimal",
            ParityFormula::IdealOptimalAligned => "parity-ideal-optimal-aligned",
            ParityFormula::CoherentEqualLoss => "parity-coherent-equal-loss",
            ParityFormula::UnequalLoss => "parity-unequal-loss",
        }
    }
}

pub fn parity_sensitivity_cf(formula: ParityFormula, p: &FormulaParams, phi: f64) -> Result<f64> {
    let name = formula.name();
    let value = match formula {
        ParityFormula::VacuumLoss => {
            if p.alpha != 0.0 || p.r != 0.0 {
                return Err(Error::invalid(format!("{name} needs alpha = r = 0")));
            }
            vacuum_loss(p.g, phi, p.equal_loss(name)?)
        }
        ParityFormula::IdealOptimal | ParityFormula::IdealOptimalAligned => {
            if p.l1 != 0.0 || p.l2 != 0.0 {
                return Err(Error::invalid(format!("{name} is lossless")));
            }
            let n_alpha = p.alpha.powi(2);
            let n_s = p.r.sinh().powi(2);
            let weight = if formula == ParityFormula::IdealOptimal {
                (2.0 * p.r).sinh() * (2.0 * p.theta_alpha).cos() + (2.0 * p.r).cosh()
            } else {
                (2.0 * p.r).exp()
            };
            1.0 / (2.0 * p.g).sinh() / (n_alpha * weight + n_s + 1.0).sqrt()
        }
        ParityFormula::CoherentEqualLoss => {
            p.require_no_squeezing(name)?;
            coherent_equal_loss(p.alpha, p.g, phi, p.equal_loss(name)?)
        }
        ParityFormula::UnequalLoss => {
            p.require_no_squeezing(name)?;
            check_loss(p.l1)?;
            check_loss(p.l2)?;
            unequal_loss(p.alpha, p.g, phi, p.l1, p.l2)
        }
    };
    finite(name, value)
}

fn vacuum_loss(g: f64, phi: f64, l: f64) -> f64 {
    let (s2g, c2g) = ((2.0 * g).sinh(), (2.0 * g).cosh());
    let base = (1.0 - l) * s2g.powi(2) * phi.cos() - (1.0 - l) * c2g.powi(2) - l * c2g;
    let bracket = 4.0 / (2.0 * g).tanh() * (l + (1.0 - l) * c2g) - 4.0 * (1.0 - l) * s2g * phi.cos();
    (1.0 - base.powi(-2)).sqrt() / phi.sin() / (16.0 * (1.0 - l)) * bracket.powi(2)
}

fn coherent_equal_loss(alpha: f64, g: f64, phi: f64, l: f64) -> f64 {
    let n = alpha * alpha;
    let s2 = (2.0 * g).sinh().powi(2);
    let (c2g, c4g, c) = ((2.0 * g).cosh(), (4.0 * g).cosh(), phi.cos());
    let den = 2.0 * l * c2g - (l - 1.0) * (-2.0 * s2 * c + c4g + 1.0);
    let z1 = 1.0
        - 4.0 * (8.0 * n * (l - 1.0) * s2 * (phi / 2.0).sin().powi(2) / den).exp()
            / ((l - 1.0) * (-2.0 * s2 * c + c4g + 1.0) - 2.0 * l * c2g).powi(2);
    let k1 = (1.0 - l).powi(2)
        * (2.0 * g).sinh().powi(4)
        * phi.sin().powi(2)
        * (-4.0 * (n + 1.0) * l * c2g + 2.0 * (1.0 - l) * c4g * c
            - (2.0 - 2.0 * l) * c4g
            - 4.0 * n * (1.0 - l)
            - 2.0 * (1.0 - l) * c
            - 3.0 * (1.0 - l)
            - l
            + 1.0)
            .powi(2);
    let base = 4.0 * (1.0 - l) * s2 * c - 4.0 * l * c2g - (2.0 - 2.0 * l) * c4g - 3.0 * (1.0 - l) - l + 1.0;
    let k2 = base.powi(6);
    let k3 = 4.0 * n * s2 * (-2.0 * (1.0 - l) * c - 2.0 * l + 2.0) / base;
    let z2 = 256.0 * k1 / k2 * k3.exp();
    (z1 / z2).sqrt()
}

fn unequal_loss(alpha: f64, g: f64, phi: f64, l1: f64, l2: f64) -> f64 {
    let n = alpha * alpha;
    let s2 = (2.0 * g).sinh().powi(2);
    let (c2g, c4g, c) = ((2.0 * g).cosh(), (4.0 * g).cosh(), phi.cos());
    let t = (1.0 - l1).sqrt() * (1.0 - l2).sqrt();
    let sh4 = g.sinh().powi(4);
    let c1 = -(2.0 * n * s2 * (2.0 * t * c + l1 + l2 - 2.0)) / (2.0 * t * s2 * c + 4.0 * l1 * sh4 + l2 * s2 - c4g - 1.0);
    let c2 = (-2.0 * t * s2 * c - 4.0 * l1 * sh4 - l2 * s2 + c4g + 1.0).powi(2);
    let d1 = (1.0 - l1)
        * (1.0 - l2)
        * (2.0 * g).sinh().powi(4)
        * phi.sin().powi(2)
        * (-4.0 * (n + 1.0) * l1 * c2g + 2.0 * t * c4g * c
            - (-l1 - l2 + 2.0) * c4g
            - 4.0 * n * (1.0 - l1)
            - 2.0 * t * c
            - 3.0 * (1.0 - l1)
            - l2
            + 1.0)
            .powi(2);
    let base = 4.0 * t * s2 * c - 4.0 * l1 * c2g - (2.0 - l1 - l2) * c4g - 3.0 * (1.0 - l1) - l2 + 1.0;
    let d2 = base.powi(6);
    let d3 = 4.0 * n * s2 * (-2.0 * t * c - l1 - l2 + 2.0) / base;
    let f1 = 1.0 - 4.0 / c2 * c1.exp();
    let f2 = 256.0 * d1 / d2 * d3.exp();
    (f1 / f2).sqrt()
}

/// Closed-form homodyne sensitivities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomodyneFormula {
    /// Coherent plus squeezed input with equal loss.
    CoherentSqueezedLoss,
    /// Optimal value for two equal coherent inputs, hyperbolic form.
    TwoCoherent,
    /// The same expression written with `N_OPA`.
    TwoCoherentPhotonForm,
}

impl HomodyneFormula {
    pub fn name(&self) -> &'static str {
        match self {
            HomodyneFormula::CoherentSqueezedLoss => "homodyne-coherent-squeezed-loss",
            HomodyneFormula::TwoCoherent => "homodyne-two-coherent",
            HomodyneFormula::TwoCoherentPhotonForm => "homodyne-two-coherent-photon-form",
        }
    }
}

pub fn hd_sensitivity_cf(formula: HomodyneFormula, p: &FormulaParams) -> Result<f64> {
    let name = formula.name();
    if p.alpha <= 0.0 {
        return Err(Error::invalid(format!(
            "{name} needs a coherent amplitude; homodyne carries no phase information without one"
        )));
    }
    let l = p.equal_loss(name)?;
    let value = match formula {
        HomodyneFormula::CoherentSqueezedLoss => {
            let n_alpha = p.alpha.powi(2);
            let n_s = p.r.sinh().powi(2);
            let n_opa = p.n_opa();
            let n_tot = (n_opa + 1.0) * (n_alpha + n_s) + n_opa;
            1.0 / (p.r.exp() * (2.0 * p.g).sinh() * n_alpha.sqrt())
                * (1.0 + l / (1.0 - l) * (2.0 * p.r).exp() * n_tot / (n_alpha + n_s)).sqrt()
        }
        HomodyneFormula::TwoCoherent => {
            ((l * (2.0 * p.g).cosh() + 1.0 - l) / (1.0 - l)).sqrt()
                / (2f64.sqrt() * p.alpha * p.g.cosh().powi(2) * (p.g.tanh() + 1.0))
        }
        HomodyneFormula::TwoCoherentPhotonForm => {
            let n_opa = p.n_opa();
            ((l * (2.0 * p.g).cosh() + 1.0 - l) / (1.0 - l)).sqrt() * 2f64.sqrt()
                / (p.alpha * ((n_opa * (n_opa + 2.0)).sqrt() + n_opa + 2.0))
        }
    };
    finite(name, value)
}

/// Closed-form intensity sensitivities (total photon number of both
/// outputs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntensityFormula {
    /// One coherent input, equal loss, any phi.
    OneCoherentLoss,
    /// Vacuum input as published. The last term enters with `+8 (1-L)^2`;
    /// the one-coherent formula at `alpha = 0` has `-8 (1-L)^2` and matches
    /// the pipeline.
    VacuumLoss,
    /// Optimal value for two equal coherent inputs.
    TwoCoherent,
}

impl IntensityFormula {
    pub fn name(&self) -> &'static str {
        match self {
            IntensityFormula::OneCoherentLoss => "intensity-one-coherent-loss",
            IntensityFormula::VacuumLoss => "intensity-vacuum-loss",
            IntensityFormula::TwoCoherent => "intensity-two-coherent",
        }
    }
}

pub fn id_sensitivity_cf(formula: IntensityFormula, p: &FormulaParams, phi: f64) -> Result<f64> {
    let name = formula.name();
    let l = p.equal_loss(name)?;
    let g = p.g;
    let s4 = (2.0 * g).sinh().powi(4);
    let csc2 = 1.0 / (phi / 2.0).sin().powi(2);
    let sec2 = 1.0 / (phi / 2.0).cos().powi(2);
    let value = match formula {
        IntensityFormula::OneCoherentLoss => {
            p.require_no_squeezing(name)?;
            let n = p.alpha.powi(2);
            let inner = (1.0 / s4)
                * (csc2
                    * (2.0 * (n + 1.0) * l * (1.0 - l) * (2.0 * g).cosh() + 2.0 * n * (1.0 - l).powi(2)
                        + l * l * (4.0 * g).cosh()
                        - (2.0 - l) * l)
                    + sec2
                        * ((2.0 * n + 1.0) * (1.0 - l).powi(2) * (8.0 * g).cosh()
                            + 2.0 * (n + 1.0) * l * (1.0 - l) * (6.0 * g).cosh()
                            + l * l * (4.0 * g).cosh()
                            - 1.0))
                - 8.0 * (2.0 * n + 1.0) * (1.0 - l).powi(2);
            inner.sqrt() / (n + 1.0) / (1.0 - l) / 8f64.sqrt()
        }
        IntensityFormula::VacuumLoss => {
            if p.alpha != 0.0 || p.r != 0.0 {
                return Err(Error::invalid(format!("{name} needs alpha = r = 0")));
            }
            let inner = (1.0 / s4)
                * (csc2 * (l * l * (4.0 * g).cosh() + 2.0 * (1.0 - l) * l * (2.0 * g).cosh() - (2.0 - l) * l)
                    + sec2
                        * (l * l * (4.0 * g).cosh()
                            + (1.0 - l).powi(2) * (8.0 * g).cosh()
                            + 2.0 * l * (1.0 - l) * (6.0 * g).cosh()
                            - 1.0))
                + 8.0 * (1.0 - l).powi(2);
            inner.sqrt() / (1.0 - l) / 8f64.sqrt()
        }
        IntensityFormula::TwoCoherent => {
            if p.alpha <= 0.0 {
                return Err(Error::invalid(format!("{name} needs alpha > 0")));
            }
            let n = p.alpha.powi(2);
            let (sh2, ch2) = (g.sinh().powi(2), g.cosh().powi(2));
            (1.0 / (4.0 * n * sh2 * ch2) * (1.0 + l / (1.0 - l) * (1.0 + 2.0 * sh2))
                + l / (1.0 - l).powi(2) * (1.0 + l * (sh2 + ch2)) / (4.0 * n * ch2))
                .sqrt()
        }
    };
    finite(name, value)
}

/// Shot-noise and Heisenberg limits plus the quantum Cramer-Rao bound where
/// it is tabulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSet {
    pub n_tot: f64,
    /// `1 / sqrt(N_tot)`.
    pub snl: f64,
    /// `1 / N_tot`.
    pub hl: f64,
    pub qcrb: Option<f64>,
}

/// Quantum Cramer-Rao bound of the balanced interferometer for the four
/// tabulated inputs, with `K = N_OPA (N_OPA + 2)`.
pub fn qcrb(spec: &InputSpec, config: &InterferometerConfig) -> Result<f64> {
    if config.g1 != config.g2 {
        return Err(Error::Unsupported("the QCRB is tabulated for g1 = g2 only".into()));
    }
    if config.is_lossy() {
        return Err(Error::Unsupported("the QCRB is tabulated for the lossless interferometer".into()));
    }
    let n = 2.0 * config.g1.sinh().powi(2);
    let k = n * (n + 2.0);
    let na = spec.n_alpha();
    let value = match spec.kind() {
        InputKind::Vacuum => 1.0 / k.sqrt(),
        InputKind::Coherent => 1.0 / (k * (2.0 * na + 1.0) + 2.0 * na * (n + 2.0)).sqrt(),
        InputKind::TwoCoherent => 1.0 / (2.0 * na * ((n + 1.0) * k.sqrt() + k + 1.0) + k).sqrt(),
        InputKind::CoherentSqueezed => {
            let r = spec.squeezing();
            1.0 / (2.0 * na * (n + 2.0)
                + n * n * (2.0 * r).sinh().powi(2) / 2.0
                + k * (2.0 * na * r.cosh() * r.exp() + r.cosh().powi(2)))
            .sqrt()
        }
    };
    finite("QCRB", value)
}

/// SNL and HL from the internal photon number; the QCRB is `None` outside
/// the tabulated cases. Loss does not change `N_tot`, so the limits are
/// quoted at the loss-free value.
pub fn quantum_limits(spec: &InputSpec, config: &InterferometerConfig) -> Result<LimitSet> {
    spec.validate()?;
    config.validate()?;
    let n_tot = photon_budget(spec, config).n_tot;
    if !(n_tot > 0.0) {
        return Err(Error::invalid("limits need a nonzero internal photon number (g > 0 or N_in > 0)"));
    }
    let lossless = config.with_losses(0.0, 0.0);
    Ok(LimitSet {
        n_tot,
        snl: 1.0 / n_tot.sqrt(),
        hl: 1.0 / n_tot,
        qcrb: qcrb(spec, &lossless).ok(),
    })
}
