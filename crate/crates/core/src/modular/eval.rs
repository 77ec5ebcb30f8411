//! Certified evaluation of `j`, `j'` and `j''` from the q-expansion.
//!
//! The truncation tail after `q^N` is bounded with `c_n <= e^{4 pi sqrt n}`:
//! consecutive majorant terms have ratio at most
//! `((N+2)/(N+1))^k e^{2 pi / sqrt(N+1)} |q|`, so the tail is a dominated
//! geometric series. Rounding is bounded a priori by
//! `2^{-wp} 32 (N+16) (1 + 2 pi (|x| + y)) S_k`, with `S_k` the majorant
//! `|q|^{-1} + sum (n+1)^{k+1} c_n |q|^n` covering both the Horner
//! accumulation and the perturbation of `q` itself.

use std::f64::consts::PI;

use rug::float::Constant;
use rug::{Complex, Float};

use super::series::{table, table_f64, TABLE_TERMS};
use crate::error::{Error, Result};
use crate::uhp::{cabs, UHPoint};

/// Largest accepted target precision; error bounds are carried as `f64`.
pub const MAX_PRECISION: u32 = 1000;
const MAX_WORKING_PRECISION: u32 = 4096;

/// A value together with a bound on its absolute error.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Complex,
    pub error_bound: f64,
}

/// How the accuracy target is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Accuracy {
    /// `error_bound < 2^{-bits}`.
    Absolute(u32),
    /// `error_bound < 2^{-bits} max(1, |value|)`.
    Relative(u32),
}

impl Accuracy {
    fn bits(self) -> u32 {
        match self {
            Accuracy::Absolute(b) | Accuracy::Relative(b) => b,
        }
    }
}

/// Natural log of the tail bound `sum_{n > N} n^k c_n |q|^n`, or `None` when
/// the majorant ratio is not below 1.
fn log_tail_bound(n_trunc: usize, k: u32, log_q: f64) -> Option<f64> {
    let m = (n_trunc + 1) as f64;
    let log_ratio = k as f64 * ((m + 1.0) / m).ln() + 2.0 * PI / m.sqrt() + log_q;
    if log_ratio >= -1e-3 {
        return None;
    }
    let log_first = k as f64 * m.ln() + 4.0 * PI * m.sqrt() + m * log_q;
    Some(log_first - (-log_ratio.exp()).ln_1p())
}

struct Plan {
    n_trunc: usize,
    log_tail: f64,
    log2_s: f64,
}

fn plan(k: u32, y: f64, log2_target: f64) -> Result<Plan> {
    let log_q = -2.0 * PI * y;
    let target_ln = (log2_target - 4.0) * std::f64::consts::LN_2 - k as f64 * (2.0 * PI).ln();
    let mut n_trunc = 0;
    let log_tail = loop {
        if n_trunc + 1 >= TABLE_TERMS {
            return Err(Error::PrecisionUnreachable {
                prec: (-log2_target).max(0.0) as u32,
                reason: format!("Im(tau) = {y} needs more than {TABLE_TERMS} q-expansion terms"),
            });
        }
        if let Some(t) = log_tail_bound(n_trunc, k, log_q) {
            if t < target_ln {
                break t;
            }
        }
        n_trunc += 1;
    };
    let c = table_f64();
    let mut s = (-log_q).exp();
    for (n, cn) in c.iter().enumerate().take(n_trunc + 1) {
        s += ((n + 1) as f64).powi(k as i32 + 1) * cn * (n as f64 * log_q).exp();
    }
    Ok(Plan { n_trunc, log_tail, log2_s: s.log2() })
}

/// `(d/d tau)^k j` at `tau` for `k` in `0..=2`.
pub fn j_derivative(tau: &UHPoint, k: u32, accuracy: Accuracy) -> Result<EvalResult> {
    assert!(k <= 2, "only j, j', j'' are supported");
    if accuracy.bits() > MAX_PRECISION {
        return Err(Error::PrecisionUnreachable {
            prec: accuracy.bits(),
            reason: format!("precision is capped at {MAX_PRECISION} bits"),
        });
    }
    let y = tau.im_f64();
    if !(tau.im >= 0.5) {
        return Err(Error::Domain(format!("Im(tau) = {y} < 1/2")));
    }
    let bits = accuracy.bits() as f64;
    // for Im(tau) >= 3/2 the q^{-1} term dominates everything else by a factor > 5
    let scale_log2 = match accuracy {
        Accuracy::Relative(_) if y >= 1.5 => (2.0 * PI * y + k as f64 * (2.0 * PI).ln()) / std::f64::consts::LN_2 - 1.0,
        _ => 0.0,
    };
    let log2_target = scale_log2 - bits;
    let p = plan(k, y, log2_target)?;
    let x_mag = 0.5f64;
    let round_factor_log2 =
        (32.0 * (p.n_trunc as f64 + 16.0) * (1.0 + 2.0 * PI * (x_mag + y))).log2() + k as f64 * (2.0 * PI).log2();
    let mut wp = (bits - scale_log2 + p.log2_s + round_factor_log2 + 16.0).ceil().max(64.0) as u32;
    loop {
        if wp > MAX_WORKING_PRECISION {
            return Err(Error::PrecisionUnreachable {
                prec: accuracy.bits(),
                reason: format!("working precision would exceed {MAX_WORKING_PRECISION} bits"),
            });
        }
        let value = evaluate(tau, k, p.n_trunc, wp);
        let tail = (p.log_tail + k as f64 * (2.0 * PI).ln()).exp();
        let rounding = (round_factor_log2 + p.log2_s - wp as f64).exp2();
        let error_bound = tail + rounding;
        let allowed = match accuracy {
            Accuracy::Absolute(_) => (-bits).exp2(),
            Accuracy::Relative(_) => (-bits).exp2() * cabs(&value).max(1.0),
        };
        if error_bound < allowed {
            return Ok(EvalResult { value, error_bound });
        }
        wp += 64;
    }
}

fn evaluate(tau: &UHPoint, k: u32, n_trunc: usize, wp: u32) -> Complex {
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    // j has period 1, so drop the integer part of Re(tau) exactly
    let mut x = Float::with_val(wp, &tau.re);
    let shift = Float::with_val(wp, x.round_ref());
    x -= shift;
    let y = Float::with_val(wp, &tau.im);
    let modulus = Float::with_val(wp, -(Float::with_val(wp, &two_pi * &y))).exp();
    let (sin, cos) = Float::with_val(wp, &two_pi * &x).sin_cos(Float::new(wp));
    let q = Complex::with_val(wp, (Float::with_val(wp, &modulus * &cos), Float::with_val(wp, &modulus * &sin)));
    let coeffs = &table().coefficients;
    let mut acc = Complex::new(wp);
    for n in (0..=n_trunc).rev() {
        acc *= &q;
        match k {
            0 => acc += &coeffs[n],
            _ => acc += rug::Integer::from(&coeffs[n] * (n as u64).pow(k)),
        }
    }
    let q_inv = Complex::with_val(wp, q.recip_ref());
    let i_two_pi = Complex::with_val(wp, (0, &two_pi));
    match k {
        0 => acc + q_inv,
        1 => (acc - q_inv) * i_two_pi,
        _ => (acc + q_inv) * Complex::with_val(wp, i_two_pi.square_ref()),
    }
}

/// `j(tau)` with absolute error below `2^{-prec}`.
pub fn j_eval(tau: &UHPoint, prec: u32) -> Result<EvalResult> {
    j_derivative(tau, 0, Accuracy::Absolute(prec))
}

pub fn j_prime(tau: &UHPoint, prec: u32) -> Result<EvalResult> {
    j_derivative(tau, 1, Accuracy::Absolute(prec))
}

pub fn j_double_prime(tau: &UHPoint, prec: u32) -> Result<EvalResult> {
    j_derivative(tau, 2, Accuracy::Absolute(prec))
}

/// `j(tau)` with error below `2^{-bits} max(1, |j(tau)|)`; cheap for large `Im(tau)`.
pub fn j_eval_relative(tau: &UHPoint, bits: u32) -> Result<EvalResult> {
    j_derivative(tau, 0, Accuracy::Relative(bits))
}
