//! Scalar numerical routines: finite differences, golden-section search and
//! bisection. Everything here is generic over fallible closures so callers can
//! propagate pipeline errors.

use crate::error::{Error, Result};

/// Inverse golden ratio, (sqrt(5) - 1) / 2.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a central-difference derivative estimate.
#[derive(Debug, Clone, Copy)]
pub struct Derivative {
    pub value: f64,
    /// `f(x + h) - f(x - h)` at the outer step, used for stationarity tests.
    pub raw_difference: f64,
    pub step: f64,
    pub refined: bool,
}

/// Central-difference derivative with step `h = 1e-6 * max(1, |x|)`.
///
/// Two estimates are taken at `h` and `h / 2`; when they disagree by more
/// than `1e-6` relative the Richardson combination `(4 D(h/2) - D(h)) / 3`
/// is returned instead of the half-step estimate.
pub fn central_derivative<F>(f: &F, x: f64) -> Result<Derivative>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = 1e-6 * x.abs().max(1.0);
    let fp = f(x + h)?;
    let fm = f(x - h)?;
    let d_full = (fp - fm) / (2.0 * h);
    let half = 0.5 * h;
    let d_half = (f(x + half)? - f(x - half)?) / (2.0 * half);

    let scale = d_full.abs().max(d_half.abs());
    let disagree = scale > 0.0 && (d_full - d_half).abs() > 1e-6 * scale;
    let value = if disagree {
        (4.0 * d_half - d_full) / 3.0
    } else {
        d_half
    };
    Ok(Derivative {
        value,
        raw_difference: fp - fm,
        step: h,
        refined: disagree,
    })
}

/// Five-point stencil derivative, used as an independent check on
/// [`central_derivative`].
pub fn five_point_derivative<F>(f: &F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let f2p = f(x + 2.0 * h)?;
    let f1p = f(x + h)?;
    let f1m = f(x - h)?;
    let f2m = f(x - 2.0 * h)?;
    Ok((-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h))
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
///
/// Evaluation errors are treated as `+inf`, which keeps the bracket away from
/// points where the objective is undefined. Returns `(x_min, f(x_min))`.
pub fn golden_section_min<F>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "golden section needs a < b and tol > 0 (a = {a}, b = {b}, tol = {tol})"
        )));
    }
    let eval = |x: f64| f(x).ok().filter(|v| v.is_finite()).unwrap_or(f64::INFINITY);

    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
    }
    let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fx.is_finite() {
        Ok((x, fx))
    } else {
        Err(Error::SearchFailure(format!(
            "no finite objective value in [{a}, {b}]"
        )))
    }
}

/// Bisection for a root of `f` on `[a, b]`; `f(a)` and `f(b)` must differ in
/// sign. Stops when the bracket is narrower than `tol`.
pub fn bisect<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoCrossing(format!(
            "no sign change on [{a}, {b}] (f = {f_lo:e}, {f_hi:e})"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Evenly spaced grid from `start` to `stop` inclusive (within half a step).
pub fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return Vec::new();
    }
    let n = ((stop - start) / step + 0.5).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}
