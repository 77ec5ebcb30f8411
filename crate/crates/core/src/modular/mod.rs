//! The modular function `j`: coefficients, certified evaluation, reduction
//! to the fundamental domain, inversion, and the growth and sign properties
//! used by the separation estimates.

mod eval;
mod inverse;
mod reduce;
mod series;

pub use eval::{
    j_derivative, j_double_prime, j_eval, j_eval_relative, j_prime, Accuracy, EvalResult, MAX_PRECISION,
};
pub use inverse::j_inverse;
pub use reduce::{reduce_to_fundamental_domain, Sl2};
pub use series::{j_coefficients, table as coefficient_table, JSeries, TABLE_TERMS};

use rug::Float;

use crate::error::{Error, Result};
use crate::uhp::UHPoint;

/// `||j(tau)| - e^{2 pi Im tau}|`, accurate to `2^{-32}` relative to `|j(tau)|`.
pub fn growth_gap(tau: &UHPoint) -> Result<f64> {
    let j = j_eval_relative(tau, 64)?;
    let prec = j.value.prec().0;
    let abs = Float::with_val(prec, j.value.abs_ref());
    let two_pi_y = Float::with_val(prec, rug::float::Constant::Pi) * 2u32 * &tau.im;
    let growth = two_pi_y.exp();
    Ok(Float::with_val(prec, abs - growth).abs().to_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Sign of `Im j(tau)` for `tau` in the closed fundamental domain.
///
/// `j` is real exactly on the geodesics `Re = 0`, `Re = +-1/2` and `|tau| = 1`;
/// points within `2^{-prec/2}` of one of them are reported as `Zero`.
pub fn sign_of_im_j(tau: &UHPoint, prec: u32) -> Result<Sign> {
    if !tau.in_closed_fundamental_domain(prec / 2) {
        return Err(Error::Domain(format!("{tau:?} is not in the closed fundamental domain")));
    }
    let wp = tau.precision_bits().max(prec) + 16;
    let tol = Float::with_val(wp, Float::u_exp(1, -((prec / 2) as i32)));
    let abs_re = Float::with_val(wp, tau.re.abs_ref());
    let norm = Float::with_val(wp, tau.re.square_ref()) + Float::with_val(wp, tau.im.square_ref());
    let off_half = Float::with_val(wp, &abs_re - 0.5f64).abs();
    let off_circle = Float::with_val(wp, norm - 1u32).abs();
    if abs_re < tol || off_half < tol || off_circle < tol {
        return Ok(Sign::Zero);
    }
    let j = j_eval_relative(tau, prec)?;
    let im = j.value.imag().to_f64();
    if im.abs() <= j.error_bound {
        return Err(Error::PrecisionInconclusive(format!(
            "|Im j| = {im:e} within error bound {:e} at {tau:?}",
            j.error_bound
        )));
    }
    Ok(if im < 0.0 { Sign::Negative } else { Sign::Positive })
}
