//! How far `j` moves away from `j(xi)` outside a small disc around `xi`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::modular::{j_derivative, j_eval, Accuracy, Sl2};
use crate::uhp::{cabs, UHPoint};

/// Points within this distance of a boundary line or special point are taken
/// to lie on it.
const ON_BOUNDARY: f64 = 1e-25;
/// Relative safety margin applied to lower bounds computed in `f64`.
const SHRINK: f64 = 1.0 - 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// `xi = i`.
    PointI,
    /// On the boundary of the right half of the fundamental domain, not `i`.
    BoundaryNonI,
    Interior,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::PointI => "point_i",
            CaseTag::BoundaryNonI => "boundary_nonI",
            CaseTag::Interior => "interior",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationData {
    /// `|j''(i)|` at `i`, `|j'(xi)|` elsewhere.
    pub a: f64,
    /// `4e5 max(1, |j(xi)|)`.
    pub b: f64,
    /// Radius of the excluded disc, at most 1/12.
    pub delta_sep: f64,
    /// Lower bound for `|j(tau) - j(xi)|` outside the disc.
    pub c_xi: f64,
    pub case_tag: CaseTag,
    /// `xi` after mirroring into `0 <= Re <= 1/2`.
    pub normalized_xi: UHPoint,
}

fn zeta_points(prec: u32) -> [UHPoint; 2] {
    let rho = UHPoint::rho(prec);
    [rho.clone(), rho.mirror()]
}

/// Distances from `xi` (with `0 <= Re <= 1/2`) to the three boundary geodesics
/// of the right half: `Re = 0` (from `i` up), `Re = 1/2`, and the unit arc.
fn geodesic_distances(xi: &UHPoint) -> [f64; 3] {
    let prec = xi.precision_bits().max(64);
    let x = Float::with_val(prec, &xi.re);
    let y = Float::with_val(prec, &xi.im);
    let to_axis = if y >= 1 { x.clone() } else { Float::with_val(prec, x.hypot_ref(&Float::with_val(prec, 1 - &y))) };
    let to_half = Float::with_val(prec, 0.5f64 - &x);
    let to_arc = Float::with_val(prec, x.hypot_ref(&y)) - 1u32;
    [to_axis, to_half, to_arc].map(|d| d.to_f64().max(0.0))
}

/// `A`, `B`, `delta` and `c(xi)` for `xi` in the closed fundamental domain.
///
/// `j_xi` is `j(xi)`; only its modulus and imaginary part are used.
pub fn separation_constants(xi: &UHPoint, j_xi: &Complex) -> Result<SeparationData> {
    let prec = xi.precision_bits().max(128);
    if !xi.in_closed_fundamental_domain(60) {
        return Err(Error::Domain(format!("{xi:?} is not in the closed fundamental domain")));
    }
    if zeta_points(prec).iter().any(|z| z.distance_f64(xi) < ON_BOUNDARY) {
        return Err(Error::CornerPoint);
    }
    let xi = if xi.re.is_sign_negative() { xi.mirror() } else { xi.clone() };
    let is_i = xi.distance_f64(&UHPoint::i(prec)) < ON_BOUNDARY;
    let dist = geodesic_distances(&xi);
    let on = dist.map(|d| d < ON_BOUNDARY);
    let case_tag = if is_i {
        CaseTag::PointI
    } else if on.iter().any(|&b| b) {
        CaseTag::BoundaryNonI
    } else {
        CaseTag::Interior
    };
    let a = if is_i {
        cabs(&j_derivative(&UHPoint::i(prec), 2, Accuracy::Relative(64))?.value)
    } else {
        cabs(&j_derivative(&xi, 1, Accuracy::Relative(64))?.value)
    };
    if a == 0.0 {
        return Err(Error::CornerPoint);
    }
    let abs_j = cabs(j_xi);
    let b = 4e5 * abs_j.max(1.0);
    let mut delta_sep = a / (12.0 * a + 108.0 * b);
    for (d, on) in dist.iter().zip(on) {
        if !on {
            delta_sep = delta_sep.min(d / 2.0);
        }
    }
    let delta_sep = delta_sep * SHRINK;
    let c_xi = match case_tag {
        CaseTag::PointI => a * delta_sep * delta_sep / 4.0,
        CaseTag::BoundaryNonI => a * delta_sep / 2.0,
        CaseTag::Interior => j_xi.imag().to_f64().abs().min(a * delta_sep / 2.0),
    } * SHRINK;
    Ok(SeparationData { a, b, delta_sep, c_xi, case_tag, normalized_xi: xi })
}

/// The images `M xi` for `M` in `{1, T, T^-1, S}` that lie in the closed
/// fundamental domain, without duplicates.
pub fn t_orbit(xi: &UHPoint) -> Vec<UHPoint> {
    let prec = xi.precision_bits();
    let slack = (prec / 2).max(40);
    let mut out = vec![xi.clone()];
    for m in [Sl2::translation(1), Sl2::translation(-1), Sl2::S] {
        let p = m.apply(xi);
        if p.in_closed_fundamental_domain(slack) && out.iter().all(|q| q.distance_f64(&p) > 1e-20) {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinLogReport {
    pub samples: usize,
    pub violations: usize,
    /// Smallest `|j(tau) - j(xi)| / ((A/4)|tau - xi|^2)` seen.
    pub min_ratio_quadratic: f64,
    /// Smallest `|j(tau) - j(xi)| / ((A/2)|tau - xi|)` seen; absent at `i`.
    pub min_ratio_linear: Option<f64>,
    pub radius_quadratic: f64,
    pub radius_linear: Option<f64>,
}

/// Samples points in the discs where the two lower bounds for
/// `|j(tau) - j(xi)|` are claimed and counts violations.
pub fn verify_lin_log(xi: &UHPoint, samples: usize, seed: u64) -> Result<LinLogReport> {
    let prec = 160;
    let xi = xi.with_prec(prec);
    let j_xi = j_eval(&xi, prec)?.value;
    let sep = separation_constants(&xi, &j_xi)?;
    let (a, b) = (sep.a, sep.b);
    let r_quad = a / (12.0 * a + 108.0 * b);
    let r_lin = (sep.case_tag != CaseTag::PointI).then(|| a / (6.0 * a + 18.0 * b));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut min_quad = f64::INFINITY;
    let mut min_lin: Option<f64> = r_lin.map(|_| f64::INFINITY);
    for _ in 0..samples {
        for (radius, linear) in [(Some(r_quad), false), (r_lin, true)] {
            let Some(radius) = radius else { continue };
            let r = radius * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            let re = Float::with_val(prec, &xi.re) + r * theta.cos();
            let im = Float::with_val(prec, &xi.im) + r * theta.sin();
            let tau = UHPoint::new(re, im)?;
            let dist = tau.distance_f64(&xi);
            if dist == 0.0 {
                continue;
            }
            let jt = j_eval(&tau, prec)?;
            let gap = cabs(&Complex::with_val(prec, &jt.value - &j_xi));
            if linear {
                let ratio = gap / (a / 2.0 * dist);
                min_lin = min_lin.map(|m| m.min(ratio));
                if ratio < 1.0 {
                    violations += 1;
                }
            } else {
                let ratio = gap / (a / 4.0 * dist * dist);
                min_quad = min_quad.min(ratio);
                if ratio < 1.0 {
                    violations += 1;
                }
            }
        }
    }
    Ok(LinLogReport {
        samples,
        violations,
        min_ratio_quadratic: min_quad,
        min_ratio_linear: min_lin,
        radius_quadratic: r_quad,
        radius_linear: r_lin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;
    use rug::ops::Pow;

    fn at(re: f64, im: f64) -> (UHPoint, Complex) {
        let xi = UHPoint::from_f64(160, re, im).unwrap();
        let j = j_eval(&xi, 160).unwrap().value;
        (xi, j)
    }

    #[test]
    fn point_i_uses_second_derivative() {
        let (xi, j) = at(0.0, 1.0);
        let s = separation_constants(&xi, &j).unwrap();
        assert_eq!(s.case_tag, CaseTag::PointI);
        // 2 * 3^4 * Gamma(1/4)^8 / pi^4 from an independent Gamma evaluation
        let g = Float::with_val(128, 0.25).gamma();
        let pi = Float::with_val(128, Constant::Pi);
        let expected = (Float::with_val(128, g.pow(8u32)) * 162u32 / pi.pow(4u32)).to_f64();
        assert!((s.a - expected).abs() < 1e-10 * expected);
        assert!((s.b - 4e5 * 1728.0).abs() < 1e-3);
        // i lies on the axis and the arc, so only Re = 1/2 competes
        assert!((s.delta_sep / (s.a / (12.0 * s.a + 108.0 * s.b)) - 1.0).abs() < 1e-11);
        assert!((s.c_xi - s.a * s.delta_sep * s.delta_sep / 4.0).abs() <= 1e-11 * s.c_xi);
    }

    #[test]
    fn axis_point_is_boundary_case() {
        let (xi, j) = at(0.0, 2.0);
        let s = separation_constants(&xi, &j).unwrap();
        assert_eq!(s.case_tag, CaseTag::BoundaryNonI);
        let a = cabs(&crate::modular::j_prime(&xi, 100).unwrap().value);
        assert!((s.a - a).abs() < 1e-12 * a);
        assert!((s.c_xi - s.a * s.delta_sep / 2.0).abs() <= 1e-11 * s.c_xi);
    }

    #[test]
    fn interior_point_uses_imaginary_part() {
        let (xi, j) = at(0.3, 1.5);
        assert!(j.imag().is_sign_negative());
        let s = separation_constants(&xi, &j).unwrap();
        assert_eq!(s.case_tag, CaseTag::Interior);
        let want = j.imag().to_f64().abs().min(s.a * s.delta_sep / 2.0);
        assert!((s.c_xi - want).abs() <= 1e-11 * want);
    }

    #[test]
    fn mirror_gives_same_constants() {
        let (xi, j) = at(0.3, 1.5);
        let (m, jm) = at(-0.3, 1.5);
        let s = separation_constants(&xi, &j).unwrap();
        let t = separation_constants(&m, &jm).unwrap();
        assert!((s.c_xi - t.c_xi).abs() <= 1e-12 * s.c_xi);
        assert!((s.delta_sep - t.delta_sep).abs() <= 1e-15);
    }

    #[test]
    fn corners_rejected() {
        let rho = UHPoint::rho(160);
        let j = Complex::new(64);
        assert_eq!(separation_constants(&rho, &j), Err(Error::CornerPoint));
        assert_eq!(separation_constants(&rho.mirror(), &j), Err(Error::CornerPoint));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(t_orbit(&UHPoint::from_f64(128, 0.2, 1.3).unwrap()).len(), 1);
        let edge = t_orbit(&UHPoint::from_f64(128, -0.5, 1.3).unwrap());
        assert_eq!(edge.len(), 2);
        assert!((edge[1].re_f64() - 0.5).abs() < 1e-30);
        let theta = 1.3f64;
        let arc = t_orbit(&UHPoint::from_f64(128, theta.cos(), theta.sin()).unwrap());
        assert_eq!(arc.len(), 2);
        assert!((arc[1].re_f64() + theta.cos()).abs() < 1e-15);
        // i is fixed by S
        assert_eq!(t_orbit(&UHPoint::i(128)).len(), 1);
    }

    #[test]
    fn lin_log_holds_near_two_i() {
        let r = verify_lin_log(&UHPoint::from_f64(128, 0.0, 2.0).unwrap(), 300, 7).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.min_ratio_quadratic >= 1.0 && r.min_ratio_linear.unwrap() >= 1.0);
    }

    #[test]
    fn quadratic_bound_on_small_circle_around_i() {
        let i = UHPoint::i(160);
        for k in 0..16 {
            let t = k as f64 * std::f64::consts::TAU / 16.0;
            let tau = UHPoint::from_f64(160, 1e-3 * t.cos(), 1.0 + 1e-3 * t.sin()).unwrap();
            let j = j_eval(&tau, 160).unwrap().value;
            let gap = cabs(&Complex::with_val(160, j - 1728u32));
            assert!(gap >= 12413.0 * 1e-6, "{gap}");
            assert!(tau.distance_f64(&i) > 0.0);
        }
    }
}
