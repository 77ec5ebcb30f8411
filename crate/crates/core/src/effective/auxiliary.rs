//! The auxiliary functions that close the final inequality for huge `|disc|`.
//!
//! Everything takes `log x` so that arguments far beyond `f64` stay usable;
//! values are rounded upward since they enter as upper bounds.

use rug::float::Round;
use rug::Integer;

use crate::arith::log_big_e_for_magnitude;
use crate::error::{Error, Result};
use crate::interval::Interval;

const PREC: u32 = 128;

/// Default for the constant `c1` in `u1`: the constant in the explicit bound
/// `omega(n) <= log n / (log log n - 1.1714)`, which is what `u1` encodes when
/// `omega` is taken at `|disc|^{1/2}`.
pub const DEFAULT_C1: f64 = 1.1714;

/// `ln(10^10)` and `ln(10^15)`: lower ends of the domains.
pub fn log_of_power_of_ten(k: u32) -> f64 {
    k as f64 * std::f64::consts::LN_10
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuxiliaryReport {
    pub log_x: f64,
    pub c1: f64,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    /// Only defined for `x >= 10^15`.
    pub u3: Option<f64>,
    /// `(3/sqrt 5) log x - 10`, the lower bound used for `L`.
    pub l_lower: f64,
}

fn up(i: &Interval) -> f64 {
    i.hi().to_f64_round(Round::Up)
}

fn constant(v: f64) -> Interval {
    Interval::from_f64(PREC, v)
}

fn three_over_root5() -> Interval {
    Interval::from_int(PREC, 3).div(&Interval::from_int(PREC, 5).sqrt().expect("5 > 0")).expect("nonzero")
}

/// `1/loglog x + 4 loglog x / log x - 1/2`.
pub fn u0(log_x: &Interval) -> Result<Interval> {
    let ll = log_x.ln()?;
    Ok(ll.recip()?.add(&ll.mul_int(4).div(log_x)?).sub(&constant(0.5)))
}

/// `log 2 / (loglog x - c1 - log 2) + 4 loglog x / log x`.
pub fn u1(log_x: &Interval, c1: f64) -> Result<Interval> {
    let ll = log_x.ln()?;
    let ln2 = Interval::ln2(PREC);
    let denom = ll.sub(&constant(c1)).sub(&ln2);
    if denom.contains_zero() || denom.lo().is_sign_negative() {
        return Err(Error::Domain(format!("loglog x - c1 - log 2 <= 0 at log x = {}", log_x.mid_f64())));
    }
    Ok(ln2.div(&denom)?.add(&ll.mul_int(4).div(log_x)?))
}

/// `(3/sqrt 5 - 10/log x)^{-1}`.
pub fn u2(log_x: &Interval) -> Result<Interval> {
    three_over_root5().sub(&Interval::from_int(PREC, 10).div(log_x)?).recip()
}

/// `log(((3/sqrt 5) log x - 10)/pi) / ((3/sqrt 5) log x - 10)`.
pub fn u3(log_x: &Interval) -> Result<Interval> {
    let l = three_over_root5().mul(log_x).sub(&Interval::from_int(PREC, 10));
    l.div(&Interval::pi(PREC))?.ln()?.div(&l)
}

/// All four functions at `x = e^{log_x}`; needs `x >= 10^10`.
pub fn auxiliary_functions(log_x: f64, c1: f64) -> Result<AuxiliaryReport> {
    if !(log_x >= log_of_power_of_ten(10)) {
        return Err(Error::Domain(format!("x = e^{log_x} is below 10^10")));
    }
    let lx = constant(log_x);
    let u3v = if log_x >= log_of_power_of_ten(15) { Some(up(&u3(&lx)?)) } else { None };
    let l_lower = three_over_root5().mul(&lx).sub(&Interval::from_int(PREC, 10));
    Ok(AuxiliaryReport {
        log_x,
        c1,
        u0: up(&u0(&lx)?),
        u1: up(&u1(&lx, c1)?),
        u2: up(&u2(&lx)?),
        u3: u3v,
        l_lower: l_lower.lo().to_f64_round(Round::Down),
    })
}

/// Upper bound for `log(E |disc|^{-1/2}) / log|disc|` at `|disc| = 10^k`,
/// with `E` the exact primorial-based value for that magnitude.
pub fn log_e_over_root_ratio(k: u32) -> Result<f64> {
    let n = Integer::from(Integer::u_pow_u(10, k));
    let log_e = log_big_e_for_magnitude(&n, PREC)?;
    let log_n = Interval::ln(&Interval::from_integer(PREC, &n))?;
    let v = log_e.sub(&log_n.div(&Interval::from_int(PREC, 2))?).div(&log_n)?;
    Ok(up(&v))
}

/// Logarithmically spaced points in `[10^lo, 10^hi]`, returned as `log x`.
pub fn log_grid(lo: u32, hi: u32, points: usize) -> Vec<f64> {
    let (a, b) = (log_of_power_of_ten(lo), log_of_power_of_ten(hi));
    (0..points).map(|k| a + (b - a) * k as f64 / (points - 1) as f64).collect()
}
