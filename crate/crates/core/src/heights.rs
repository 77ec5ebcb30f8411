//! Weil heights of singular moduli and lower bounds for `h(j - alpha)`.
//!
//! Singular moduli are algebraic integers, so only archimedean places
//! contribute, and the conjugates of `j(tau)` are the values of `j` at the
//! roots of the reduced forms of the same discriminant.

use rayon::prelude::*;
use rug::float::{Constant, Round};
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::forms::{class_number, enumerate_reduced_forms, form_root, FactoredDiscriminant};
use crate::interval::Interval;
use crate::modular::j_eval_relative;
use crate::poly::polynomial_from_roots;
use crate::uhp::cabs;

#[derive(Clone, Debug, PartialEq)]
pub struct HeightEstimate {
    pub value: f64,
    pub error_bound: f64,
    /// Number of archimedean embeddings summed.
    pub terms: usize,
}

/// `log max(1, |v|)` for a value known to within `err`, with its own error.
fn log_max_one(abs: f64, err: f64) -> (f64, f64) {
    if abs - err > 1.0 {
        (abs.ln(), -(-err / abs).ln_1p())
    } else if abs + err < 1.0 {
        (0.0, 0.0)
    } else {
        // |v| straddles 1: the contribution lies in [0, log(1 + 2 err)]
        let hi = (1.0 + 2.0 * err).ln();
        (abs.max(1.0).ln(), hi)
    }
}

/// Height of `j(tau) - shift` summed over the whole Galois orbit.
fn orbit_height(d: &FactoredDiscriminant, shift: i64, prec: u32) -> Result<HeightEstimate> {
    let forms = enumerate_reduced_forms(d);
    let wp = prec + 16;
    let parts: Vec<Result<(f64, f64)>> = forms
        .par_iter()
        .map(|q| {
            let tau = form_root(q, wp + 32);
            let j = j_eval_relative(&tau, wp)?;
            let v = Complex::with_val(j.value.prec(), &j.value - shift);
            let (log, err) = log_max_one(cabs(&v), j.error_bound);
            // rounding of log and of the f64 conversion
            Ok((log, err + log.abs() * 4.0 * f64::EPSILON))
        })
        .collect();
    let mut sum = 0.0;
    let mut err = 0.0;
    for p in parts {
        let (l, e) = p?;
        sum += l;
        err += e;
    }
    let n = forms.len() as f64;
    Ok(HeightEstimate { value: sum / n, error_bound: err / n + sum.abs() / n * 4.0 * f64::EPSILON, terms: forms.len() })
}

/// `h(j_disc) = (1/C) sum log max(1, |j(tau_q)|)` over the reduced forms `q`.
pub fn singular_modulus_height(d: &FactoredDiscriminant, prec: u32) -> Result<HeightEstimate> {
    orbit_height(d, 0, prec)
}

/// `h(j_disc - alpha)` for a rational integer `alpha`; exact because
/// `j - alpha` is still an algebraic integer.
pub fn height_of_difference_with_integer(d: &FactoredDiscriminant, alpha: i64, prec: u32) -> Result<HeightEstimate> {
    orbit_height(d, alpha, prec)
}

/// Height of a unit from its conjugates, `-(1/n) sum_{|v| < 1} log |v|`.
///
/// Checked against `(1/n) sum log max(1, |v|)` and, when the precision
/// allows, against integrality of `prod (x - v)` with constant term `+-1`.
pub fn unit_height_via_small_conjugates(values: &[Complex]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain("empty conjugate list".into()));
    }
    let n = values.len() as f64;
    let mut max_formula = 0.0;
    let mut small_formula = 0.0;
    for v in values {
        let a = cabs(v);
        if a > 1.0 {
            max_formula += a.ln();
        } else {
            small_formula -= a.ln();
        }
    }
    max_formula /= n;
    small_formula /= n;
    let tol = 1e-9 * max_formula.max(1.0);
    let mut consistent = (max_formula - small_formula).abs() <= tol;
    let prec = values.iter().map(|v| v.prec().0).min().unwrap_or(64);
    let coeffs = polynomial_from_roots(values, prec + 32);
    // integrality is only decidable while the coefficients keep spare bits
    let biggest = coeffs.iter().map(cabs).fold(1.0, f64::max);
    if consistent && biggest.log2() < prec as f64 - 40.0 {
        let slack = 1e-6;
        for c in &coeffs {
            let re = c.real().to_f64();
            if (re - re.round()).abs() > slack || c.imag().to_f64().abs() > slack {
                consistent = false;
            }
        }
        let constant = coeffs[0].real().to_f64().abs();
        if (constant - 1.0).abs() > slack {
            consistent = false;
        }
    }
    if !consistent {
        return Err(Error::NotUnitConsistent { max_formula, small_formula });
    }
    Ok(small_formula)
}

fn log2_interval(prec: u32) -> Interval {
    Interval::ln2(prec)
}

fn round_down(x: &Float) -> f64 {
    x.to_f64_round(Round::Down)
}

/// `(pi |disc|^{1/2} - 0.01) / C(disc) - h(alpha) - log 2`, rounded down.
pub fn lower_bound_trivial(d: &FactoredDiscriminant, h_alpha: f64) -> Result<f64> {
    if d.abs() < 16 {
        return Err(Error::HypothesisUnmet(format!("|disc| = {} < 16", d.abs())));
    }
    let prec = 128;
    let root = Interval::from_int(prec, d.abs() as i64).sqrt()?;
    let num = Interval::pi(prec).mul(&root).sub(&Interval::from_rational(prec, &rug::Rational::from((1, 100))));
    let main = num.div(&Interval::from_int(prec, class_number(d) as i64))?;
    let v = main.sub(&Interval::from_f64(prec, h_alpha)).sub(&log2_interval(prec));
    Ok(round_down(v.lo()))
}

/// `(3/sqrt 5) log|disc| - 9.79 - h(alpha) - log 2`, rounded down.
pub fn lower_bound_colmez(d: &FactoredDiscriminant, h_alpha: f64) -> Result<f64> {
    let prec = 128;
    let coeff = Interval::from_int(prec, 3).div(&Interval::from_int(prec, 5).sqrt()?)?;
    let log = Interval::from_int(prec, d.abs() as i64).ln()?;
    let v = coeff
        .mul(&log)
        .sub(&Interval::from_rational(prec, &rug::Rational::from((979, 100))))
        .sub(&Interval::from_f64(prec, h_alpha))
        .sub(&log2_interval(prec));
    Ok(round_down(v.lo()))
}

/// `(pi |disc|^{1/2} - 0.01) / C(disc)`: the lower bound for `h(j)` itself.
pub fn singular_height_floor(d: &FactoredDiscriminant) -> f64 {
    let prec = 128;
    let pi = Float::with_val(prec, Constant::Pi);
    let v = (pi * Float::with_val(prec, d.abs()).sqrt() - 0.01f64) / class_number(d);
    v.to_f64_round(Round::Down)
}
