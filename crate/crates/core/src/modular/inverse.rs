//! Inversion of `j` on the closed fundamental domain.
//!
//! Real targets lie on one of three boundary geodesics where `j` is real and
//! monotone, and are found by bisection (this also covers the critical values
//! 0 and 1728, where Newton's method degenerates). Other targets use Newton's
//! method on `tau`, started from `q = 1/(z - 744)` for large `|z|` and from the
//! best point of a coarse grid otherwise.

use rug::float::Constant;
use rug::{Complex, Float};

use super::eval::{j_derivative, Accuracy};
use super::reduce::reduce_to_fundamental_domain;
use crate::error::{Error, Result};
use crate::uhp::{cabs, UHPoint};

const GRID_STEP: f64 = 0.05;
const GRID_TOP: f64 = 4.0;
const MAX_NEWTON_STEPS: usize = 200;

fn working_precision(z: &Complex, prec: u32) -> u32 {
    let mag = cabs(z).max(1.0);
    prec + 40 + mag.log2().ceil() as u32
}

fn residual(tau: &UHPoint, z: &Complex, prec: u32) -> Result<(Complex, f64)> {
    let j = j_derivative(tau, 0, Accuracy::Relative(prec + 8))?;
    let wp = j.value.prec().0.max(z.prec().0);
    let r = Complex::with_val(wp, &j.value - z);
    let abs = cabs(&r);
    Ok((r, abs))
}

/// Which boundary geodesic carries a real value, parametrized so that `j`
/// is increasing in the parameter.
enum Geodesic {
    /// `tau = i t`, `t >= 1`: values `>= 1728`.
    Imaginary,
    /// `tau = e^{i t}`, `pi/3 <= t <= pi/2`: values in `[0, 1728]`.
    Arc,
    /// `tau = 1/2 + i/t`, `0 < t <= 2/sqrt(3)`: values `<= 0`.
    HalfLine,
}

impl Geodesic {
    fn point(&self, t: &Float) -> UHPoint {
        let p = t.prec();
        match self {
            Geodesic::Imaginary => UHPoint { re: Float::new(p), im: t.clone() },
            Geodesic::Arc => {
                let (s, c) = t.clone().sin_cos(Float::new(p));
                UHPoint { re: c, im: s }
            }
            Geodesic::HalfLine => UHPoint { re: Float::with_val(p, 0.5), im: Float::with_val(p, t.recip_ref()) },
        }
    }
}

fn bisect_real(z: &Float, prec: u32) -> Result<UHPoint> {
    let zc = Complex::with_val(z.prec(), (z, 0));
    let wp = working_precision(&zc, prec);
    let tol = Float::with_val(64, Float::u_exp(1, -(prec as i32))).to_f64() * z.to_f64().abs().max(1.0);
    if *z == 1728 {
        return Ok(UHPoint::i(prec));
    }
    if *z == 0 {
        return Ok(UHPoint::rho(prec));
    }
    let pi = Float::with_val(wp, Constant::Pi);
    let top = ((z.to_f64().abs() + 2079.0).ln() / (2.0 * std::f64::consts::PI) + 1.0).max(2.0);
    let (geodesic, mut lo, mut hi) = if *z > 1728 {
        (Geodesic::Imaginary, Float::with_val(wp, 1), Float::with_val(wp, top))
    } else if *z > 0 {
        (Geodesic::Arc, Float::with_val(wp, &pi / 3u32), Float::with_val(wp, &pi / 2u32))
    } else {
        let upper = Float::with_val(wp, 2) / Float::with_val(wp, 3).sqrt();
        (Geodesic::HalfLine, Float::with_val(wp, 1.0 / top), upper)
    };
    for _ in 0..(4 * wp) {
        let mid = Float::with_val(wp, &lo + &hi) / 2u32;
        let tau = geodesic.point(&mid);
        let j = j_derivative(&tau, 0, Accuracy::Relative(prec + 8))?;
        let diff = Float::with_val(wp, j.value.real() - z);
        if diff.to_f64().abs() < tol {
            return Ok(tau);
        }
        if diff < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if lo == hi {
            break;
        }
    }
    Err(Error::NoConvergence(format!("{}", z.to_f64())))
}

fn grid_start(z: &Complex) -> Result<UHPoint> {
    let mut best: Option<(f64, UHPoint)> = None;
    let steps_x = (1.0 / GRID_STEP).round() as i32;
    let steps_y = (GRID_TOP / GRID_STEP).round() as i32;
    for ix in 0..=steps_x {
        let x = -0.5 + ix as f64 * GRID_STEP;
        for iy in 0..=steps_y {
            let y = iy as f64 * GRID_STEP;
            if x * x + y * y < 1.0 {
                continue;
            }
            let tau = UHPoint::from_f64(64, x, y)?;
            let (_, r) = residual(&tau, z, 24)?;
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, tau));
            }
        }
    }
    Ok(best.expect("grid is non-empty").1)
}

fn newton(z: &Complex, prec: u32) -> Result<UHPoint> {
    let wp = working_precision(z, prec);
    let mag = cabs(z).max(1.0);
    let tol = (-(prec as f64)).exp2() * mag;
    let mut tau = if mag > 3000.0 {
        // j = 1/q + 744 + O(q)
        let q = Complex::with_val(wp, Complex::with_val(wp, z - 744u32).recip_ref());
        let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
        let log_q = q.ln();
        let t = Complex::with_val(wp, log_q / Complex::with_val(wp, (0, &two_pi)));
        let (re, im) = t.into_real_imag();
        reduce_to_fundamental_domain(&UHPoint::new(re, im)?).0
    } else {
        grid_start(z)?.with_prec(wp)
    };
    for _ in 0..MAX_NEWTON_STEPS {
        let (r, abs) = residual(&tau, z, prec)?;
        if abs < tol {
            return Ok(tau);
        }
        let d = j_derivative(&tau, 1, Accuracy::Relative(prec + 8))?.value;
        let mut step = Complex::with_val(wp, r / d);
        let len = cabs(&step);
        if len > 0.25 {
            step *= Float::with_val(wp, 0.25 / len);
        }
        let t = Complex::with_val(wp, tau.to_complex(wp) - step);
        let (re, mut im) = t.into_real_imag();
        if im <= 0 {
            im = Float::with_val(wp, tau.im.clone()) / 2u32;
        }
        tau = reduce_to_fundamental_domain(&UHPoint::new(re, im)?).0;
    }
    Err(Error::NoConvergence(format!("{} + {}i", z.real().to_f64(), z.imag().to_f64())))
}

/// `tau` in the closed fundamental domain with `|j(tau) - z| < 2^{-prec} max(1, |z|)`,
/// carried at some 40 bits more than `prec` so the residual survives rounding of `tau`.
pub fn j_inverse(z: &Complex, prec: u32) -> Result<UHPoint> {
    if z.imag().is_zero() {
        return bisect_real(z.real(), prec);
    }
    let near = (-(prec as f64) / 2.0).exp2();
    let to_1728 = Complex::with_val(z.prec().0, z - 1728u32).abs().real().to_f64();
    let to_0 = cabs(z);
    if to_0 < near || to_1728 < near {
        return Err(Error::NearCriticalPoint(format!("{} + {}i", z.real().to_f64(), z.imag().to_f64())));
    }
    newton(z, prec)
}
