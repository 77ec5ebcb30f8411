//! Period lattices of `y^2 = 4x^3 - g2 x - g3` by the complex AGM.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::arith::sigma_k;
use crate::error::{Error, Result};
use crate::modular::reduce_to_fundamental_domain;
use crate::uhp::{cabs, UHPoint};

/// A lattice basis with `omega2 / omega1` in the closed fundamental domain.
#[derive(Clone, Debug)]
pub struct PeriodLattice {
    pub omega1: Complex,
    pub omega2: Complex,
}

impl PeriodLattice {
    pub fn ratio(&self) -> Result<UHPoint> {
        let prec = self.omega1.prec().0;
        UHPoint::from_complex(&Complex::with_val(prec, &self.omega2 / &self.omega1))
    }
}

fn two_pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi) * 2u32
}

/// `(E4(tau), E6(tau))` from their `q`-expansions; needs `Im(tau) >= 1/2`.
pub fn eisenstein_e4_e6(tau: &UHPoint, prec: u32) -> Result<(Complex, Complex)> {
    let y = tau.im_f64();
    if y < 0.5 {
        return Err(Error::Domain("Eisenstein series need Im(tau) >= 1/2".into()));
    }
    let wp = prec + 32;
    let arg = Complex::with_val(wp, (Float::new(wp), two_pi(wp))) * tau.to_complex(wp);
    let q = arg.exp();
    // |q|^n n^5 * 504 below 2^{-wp}
    let log_q = -2.0 * std::f64::consts::PI * y;
    let mut n_max = 1u64;
    while (n_max as f64) * log_q + 5.0 * (n_max as f64).ln() + 504f64.ln() > -(wp as f64) * std::f64::consts::LN_2 {
        n_max += 1;
    }
    let mut e4 = Complex::new(wp);
    let mut e6 = Complex::new(wp);
    for n in (1..=n_max).rev() {
        e4 += sigma_k(n, 3);
        e4 *= &q;
        e6 += sigma_k(n, 5);
        e6 *= &q;
    }
    let e4 = Complex::with_val(wp, 1 + e4 * 240u32);
    let e6 = Complex::with_val(wp, 1 - e6 * 504u32);
    Ok((e4, e6))
}

/// `(g2, g3)` of the lattice `omega1 Z + omega2 Z`.
pub fn lattice_invariants(omega1: &Complex, omega2: &Complex, prec: u32) -> Result<(Complex, Complex)> {
    let wp = prec + 32;
    let mut w1 = Complex::with_val(wp, omega1);
    let mut w2 = Complex::with_val(wp, omega2);
    if Complex::with_val(wp, &w2 / &w1).imag().is_sign_negative() {
        std::mem::swap(&mut w1, &mut w2);
    }
    let tau = UHPoint::from_complex(&Complex::with_val(wp, &w2 / &w1))?;
    let (reduced, m) = reduce_to_fundamental_domain(&tau);
    let w1r = Complex::with_val(wp, &w2 * Float::with_val(wp, m.c as f64)) + Complex::with_val(wp, &w1 * Float::with_val(wp, m.d as f64));
    let (e4, e6) = eisenstein_e4_e6(&reduced, wp)?;
    let s = Complex::with_val(wp, two_pi(wp) / &w1r);
    let s2 = Complex::with_val(wp, s.square_ref());
    let s4 = Complex::with_val(wp, s2.square_ref());
    let s6 = Complex::with_val(wp, &s4 * &s2);
    let g2 = Complex::with_val(prec, s4 * e4 / 12u32);
    let g3 = Complex::with_val(prec, s6 * e6 / 216u32);
    Ok((g2, g3))
}

/// `1728 g2^3 / (g2^3 - 27 g3^2)`.
pub fn curve_j_invariant(g2: &Complex, g3: &Complex) -> Result<Complex> {
    let prec = g2.prec().0.max(g3.prec().0);
    let g2c = Complex::with_val(prec, g2.square_ref()) * g2;
    let g3s = Complex::with_val(prec, g3.square_ref()) * 27u32;
    let disc = Complex::with_val(prec, &g2c - &g3s);
    if singular(&disc, &g2c, &g3s, prec) {
        return Err(Error::SingularCurve);
    }
    Ok(Complex::with_val(prec, g2c * 1728u32 / disc))
}

fn singular(disc: &Complex, g2c: &Complex, g3s: &Complex, prec: u32) -> bool {
    let scale = cabs(g2c).max(cabs(g3s));
    scale == 0.0 || cabs(disc) <= scale * (-(prec as f64) + 8.0).exp2()
}

/// AGM with the optimal square-root choice at every step.
fn agm(mut a: Complex, mut b: Complex, prec: u32) -> Complex {
    let tol = (-(prec as f64) + 4.0).exp2();
    if cabs(&Complex::with_val(prec, &a - &b)) > cabs(&Complex::with_val(prec, &a + &b)) {
        b = -b;
    }
    for _ in 0..(4 * prec) {
        if cabs(&Complex::with_val(prec, &a - &b)) <= tol * cabs(&a) {
            break;
        }
        let next_a = Complex::with_val(prec, &a + &b) / 2u32;
        let mut next_b = Complex::with_val(prec, &a * &b).sqrt();
        if cabs(&Complex::with_val(prec, &next_a - &next_b)) > cabs(&Complex::with_val(prec, &next_a + &next_b)) {
            next_b = -next_b;
        }
        a = next_a;
        b = next_b;
    }
    a
}

/// The three roots of `4x^3 - g2 x - g3`.
fn cubic_roots(g2: &Complex, g3: &Complex, prec: u32) -> [Complex; 3] {
    // x^3 + p x + q with p = -g2/4, q = -g3/4
    let p = Complex::with_val(prec, -g2) / 4u32;
    let q = Complex::with_val(prec, -g3) / 4u32;
    let half_q = Complex::with_val(prec, &q / 2u32);
    let p3 = Complex::with_val(prec, p.square_ref()) * &p / 27u32;
    let root = Complex::with_val(prec, Complex::with_val(prec, half_q.square_ref()) + p3).sqrt();
    let plus = Complex::with_val(prec, &root - &half_q);
    let minus = -Complex::with_val(prec, &half_q + &root);
    let u3 = if cabs(&plus) >= cabs(&minus) { plus } else { minus };
    let u = Complex::with_val(prec, u3.ln() / 3u32).exp();
    let third = Complex::with_val(prec, (Float::new(prec), two_pi(prec) / 3u32)).exp();
    let mut out: [Complex; 3] = std::array::from_fn(|_| Complex::new(prec));
    let mut uk = u;
    for slot in out.iter_mut() {
        let v = -Complex::with_val(prec, &p / Complex::with_val(prec, &uk * 3u32));
        let mut x = Complex::with_val(prec, &uk + v);
        for _ in 0..3 {
            let x2 = Complex::with_val(prec, x.square_ref());
            let f = Complex::with_val(prec, &x2 * &x) * 4u32 - Complex::with_val(prec, g2 * &x) - g3;
            let df = x2 * 12u32 - g2;
            if cabs(&df) == 0.0 {
                break;
            }
            x -= Complex::with_val(prec, f / df);
        }
        *slot = x;
        uk *= &third;
    }
    out
}

/// Moves a basis so that `omega2 / omega1` lies in the closed fundamental domain.
pub fn normalize_basis(omega1: &Complex, omega2: &Complex) -> Result<PeriodLattice> {
    let wp = omega1.prec().0.max(omega2.prec().0);
    let w1 = Complex::with_val(wp, omega1);
    let mut w2 = Complex::with_val(wp, omega2);
    if Complex::with_val(wp, &w2 / &w1).imag().is_sign_negative() {
        w2 = -w2;
    }
    let tau = UHPoint::from_complex(&Complex::with_val(wp, &w2 / &w1))?;
    let (_, m) = reduce_to_fundamental_domain(&tau);
    let f = |k: i128| Float::with_val(wp, k as f64);
    let new2 = Complex::with_val(wp, &w2 * f(m.a)) + Complex::with_val(wp, &w1 * f(m.b));
    let new1 = Complex::with_val(wp, &w2 * f(m.c)) + Complex::with_val(wp, &w1 * f(m.d));
    Ok(PeriodLattice { omega1: new1, omega2: new2 })
}

/// A basis of the period lattice of `y^2 = 4x^3 - g2 x - g3`, normalized so
/// `omega2 / omega1` is in the closed fundamental domain.
///
/// Each root `e_k` yields a period `pi / AGM(sqrt(e_k - e_l), sqrt(e_k - e_m))`;
/// a pair of them that reproduces `(g2, g3)` through the Eisenstein series is
/// returned.
pub fn compute_periods(g2: &Complex, g3: &Complex, prec: u32) -> Result<PeriodLattice> {
    let wp = prec + 48;
    let g2 = Complex::with_val(wp, g2);
    let g3 = Complex::with_val(wp, g3);
    curve_j_invariant(&g2, &g3)?;
    let e = cubic_roots(&g2, &g3, wp);
    let pi = Float::with_val(wp, Constant::Pi);
    let candidates: Vec<Complex> = (0..3)
        .map(|k| {
            let (l, m) = ((k + 1) % 3, (k + 2) % 3);
            let a = Complex::with_val(wp, &e[k] - &e[l]).sqrt();
            let b = Complex::with_val(wp, &e[k] - &e[m]).sqrt();
            Complex::with_val(wp, &pi / agm(a, b, wp))
        })
        .collect();
    let tol = (-(prec as f64) / 2.0).exp2();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let ratio = Complex::with_val(wp, &candidates[j] / &candidates[i]);
        if ratio.imag().to_f64().abs() < 1e-6 * cabs(&ratio) {
            continue;
        }
        let basis = normalize_basis(&candidates[i], &candidates[j])?;
        let (h2, h3) = lattice_invariants(&basis.omega1, &basis.omega2, wp)?;
        let s = 2.0 * std::f64::consts::PI / cabs(&basis.omega1);
        let d2 = cabs(&Complex::with_val(wp, &h2 - &g2));
        let d3 = cabs(&Complex::with_val(wp, &h3 - &g3));
        if d2 <= tol * s.powi(4) && d3 <= tol * s.powi(6) {
            return Ok(PeriodLattice {
                omega1: Complex::with_val(prec, &basis.omega1),
                omega2: Complex::with_val(prec, &basis.omega2),
            });
        }
    }
    Err(Error::NoConvergence("period lattice from AGM candidates".into()))
}
