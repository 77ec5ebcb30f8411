//! Counting form roots in a disc, and the two explicit upper bounds.
//!
//! A root `(-b + i sqrt N)/2a` (with `N = |disc|`) lies in the open disc of
//! radius `eps` around `x + i sqrt(m)` iff `P < sqrt(m N)/a` where
//! `P = (b/2a + x)^2 + N/4a^2 + m - eps^2`, i.e. iff `P < 0` or
//! `P^2 < m N / a^2`. Centers are carried as rational `x` and rational `m`,
//! which covers rational points, binary floating-point inputs (exactly) and
//! roots of quadratic forms, so every count is decided exactly.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::arith::{big_f, factor::smallest_prime_factors, sigma_k};
use crate::error::{Error, Result};
use crate::forms::{enumerate_reduced_forms, for_each_reduced_form_in, max_leading_coefficient, FactoredDiscriminant, QuadraticForm};
use crate::interval::Interval;
use crate::uhp::UHPoint;

const INTERVAL_PREC: u32 = 128;
const CHUNK: u64 = 4096;

/// `x + i sqrt(m)` with rational `x` and `m > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Center {
    pub re: Rational,
    pub im_squared: Rational,
}

impl Center {
    pub fn rational(re: Rational, im: Rational) -> Result<Self> {
        if im <= 0 {
            return Err(Error::Domain("center must lie in the upper half-plane".into()));
        }
        Ok(Center { re, im_squared: im.square() })
    }

    /// Exact center taken from the binary values of a point.
    pub fn from_point(p: &UHPoint) -> Result<Self> {
        let re = p.re.to_rational().ok_or_else(|| Error::Domain("non-finite center".into()))?;
        let im = p.im.to_rational().ok_or_else(|| Error::Domain("non-finite center".into()))?;
        Self::rational(re, im)
    }

    /// The root of a positive definite form, exactly.
    pub fn form_root(q: &QuadraticForm) -> Self {
        let two_a = 2 * q.a;
        let n = -q.discriminant();
        Center {
            re: Rational::from((-q.b, two_a)),
            im_squared: Rational::from((Integer::from(n), Integer::from(two_a) * two_a)),
        }
    }

    pub fn to_point(&self, prec: u32) -> UHPoint {
        UHPoint {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im_squared).sqrt(),
        }
    }

    pub fn im_f64(&self) -> f64 {
        self.im_squared.to_f64().sqrt()
    }
}

/// A query for the number of reduced-form roots within `eps` of `center`.
#[derive(Clone, Debug)]
pub struct NeighborhoodQuery {
    pub delta: FactoredDiscriminant,
    pub center: Center,
    pub eps: Rational,
}

impl NeighborhoodQuery {
    /// Accepts `0 < eps < 1/2` and `Im(center) >= sqrt(3)/2`.
    pub fn new(delta: FactoredDiscriminant, center: Center, eps: Rational) -> Result<Self> {
        if eps <= 0 || eps >= Rational::from((1, 2)) {
            return Err(Error::Domain(format!("eps = {} must lie in (0, 1/2)", eps.to_f64())));
        }
        if center.im_squared < Rational::from((3, 4)) {
            return Err(Error::Domain(format!("Im(center) = {} < sqrt(3)/2", center.im_f64())));
        }
        Ok(NeighborhoodQuery { delta, center, eps })
    }

    /// The counting bounds are proved for `eps < 1/4` only.
    pub fn certified(&self) -> bool {
        self.eps < Rational::from((1, 4))
    }

    fn y_interval(&self) -> Interval {
        Interval::from_rational(INTERVAL_PREC, &self.center.im_squared).sqrt().expect("m > 0")
    }

    /// Candidate leading coefficients: `(N^{1/2}/(2y + 2 eps), N^{1/2}/(2y - 2 eps))`, widened.
    pub fn a_interval(&self) -> (f64, f64) {
        let p = INTERVAL_PREC;
        let root = Interval::from_int(p, self.delta.abs() as i64).sqrt().expect("N > 0");
        let y = self.y_interval();
        let e = Interval::from_rational(p, &self.eps);
        let lo = root.div(&y.add(&e).mul_int(2)).expect("y + eps > 0");
        let hi = root.div(&y.sub(&e).mul_int(2)).expect("y - eps > 0");
        (lo.lo().to_f64_round(Round::Down), hi.hi().to_f64_round(Round::Up))
    }

    fn a_range(&self) -> RangeInclusive<u64> {
        let (lo, hi) = self.a_interval();
        let a_max = max_leading_coefficient(&self.delta);
        let lo = (lo.floor().max(1.0)) as u64;
        let hi = (hi.ceil() as u64).min(a_max);
        lo..=hi
    }

    /// Exact test for the root of a form of this discriminant.
    pub fn contains(&self, q: &QuadraticForm) -> bool {
        let n = Integer::from(self.delta.abs());
        let a = Integer::from(q.a);
        let two_a = Integer::from(2 * q.a);
        let shift = Rational::from((Integer::from(q.b), two_a.clone())) + &self.center.re;
        let p = shift.square() + Rational::from((n.clone(), two_a.square())) + &self.center.im_squared
            - Rational::from(self.eps.square_ref());
        if p < 0 {
            return true;
        }
        p.square() < self.center.im_squared.clone() * n / a.square()
    }
}

/// Number of reduced forms whose root lies in the open `eps`-disc.
pub fn cm_count(q: &NeighborhoodQuery) -> u64 {
    let range = q.a_range();
    if range.is_empty() {
        return 0;
    }
    let (lo, hi) = (*range.start(), *range.end());
    let spf = smallest_prime_factors(hi as usize);
    // b window from |Re(root) - x| < eps, widened by one on each side
    let x = q.center.re.to_f64();
    let e = q.eps.to_f64();
    let mut chunks = Vec::new();
    let mut s = lo;
    while s <= hi {
        chunks.push((s, (s + CHUNK - 1).min(hi)));
        s += CHUNK;
    }
    chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut n = 0u64;
            for_each_reduced_form_in(&q.delta, lo..=hi, &spf, |f| {
                let two_a = 2.0 * f.a as f64;
                let b = f.b as f64;
                if b < -two_a * (x + e) - 1.0 || b > -two_a * (x - e) + 1.0 {
                    return;
                }
                if q.contains(&f) {
                    n += 1;
                }
            });
            n
        })
        .sum()
}

/// Reference count: every reduced form, distance compared in 256-bit floats.
pub fn cm_count_naive(q: &NeighborhoodQuery) -> u64 {
    let prec = 256;
    let c = q.center.to_point(prec);
    let eps = Float::with_val(prec, &q.eps);
    enumerate_reduced_forms(&q.delta)
        .iter()
        .filter(|f| {
            let r = crate::forms::form_root(f, prec);
            let dx = Float::with_val(prec, &r.re - &c.re);
            let dy = Float::with_val(prec, &r.im - &c.im);
            dx.hypot(&dy) < eps
        })
        .count() as u64
}

/// An upper bound, rounded up, with whether its hypotheses hold.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub certified: bool,
}

fn up(i: &Interval) -> f64 {
    i.hi().to_f64_round(Round::Up)
}

/// `F (32 s1/f~ N^{1/2}/(4y^2-1) eps^2 + 8 s0 (N/3)^{1/4} eps + 8 N^{1/2}/(4y^2-1) eps + 2)`
/// with `s_k = sigma_k(f~)`.
pub fn lemma_bound(q: &NeighborhoodQuery) -> Bound {
    let p = INTERVAL_PREC;
    let d = &q.delta;
    let ft = d.modified_conductor();
    let n = Interval::from_int(p, d.abs() as i64);
    let root = n.sqrt().expect("N > 0");
    let fourth = n.div(&Interval::from_int(p, 3)).expect("3 != 0").root4().expect("N/3 > 0");
    let denom = Interval::from_rational(p, &(Rational::from(4) * &q.center.im_squared - 1u32));
    let ratio = root.div(&denom).expect("4y^2 - 1 >= 2");
    let eps = Interval::from_rational(p, &q.eps);
    let s1 = Interval::from_rational(p, &Rational::from((sigma_k(ft, 1), Integer::from(ft))));
    let s0 = Interval::from_integer(p, &sigma_k(ft, 0));
    let t1 = s1.mul(&ratio).mul(&eps.square()).mul_int(32);
    let t2 = s0.mul(&fourth).mul(&eps).mul_int(8);
    let t3 = ratio.mul(&eps).mul_int(8);
    let total = t1.add(&t2).add(&t3).add(&Interval::from_int(p, 2));
    let v = Interval::from_int(p, big_f(d) as i64).mul(&total);
    Bound { value: up(&v), certified: q.certified() }
}

/// `F (32 N^{1/2} eps^2 loglog(N^{1/2}) + 11 N^{1/2} eps + 2)`; certified for
/// `N >= 10^14` and `eps < 1/4`.
pub fn corollary_bound(d: &FactoredDiscriminant, eps: &Rational) -> Bound {
    let p = INTERVAL_PREC;
    let n = Interval::from_int(p, d.abs() as i64);
    let root = n.sqrt().expect("N > 0");
    let loglog = root.ln().and_then(|l| l.ln());
    let e = Interval::from_rational(p, eps);
    let t2 = root.mul(&e).mul_int(11);
    let total = match loglog {
        Ok(ll) => root.mul(&e.square()).mul(&ll).mul_int(32).add(&t2),
        // log N^{1/2} <= 1 only for N <= 7; the term is then non-positive
        Err(_) => t2,
    };
    let v = Interval::from_int(p, big_f(d) as i64).mul(&total.add(&Interval::from_int(p, 2)));
    let certified = d.abs() >= 100_000_000_000_000 && *eps > 0 && *eps < Rational::from((1, 4));
    Bound { value: up(&v), certified }
}

#[derive(Clone, Debug)]
pub struct CountReport {
    pub exact_count: u64,
    pub lemma_bound: Bound,
    pub corollary_bound: Bound,
    pub a_interval: (f64, f64),
    pub certified: bool,
}

pub fn count_report(q: &NeighborhoodQuery) -> CountReport {
    CountReport {
        exact_count: cm_count(q),
        lemma_bound: lemma_bound(q),
        corollary_bound: corollary_bound(&q.delta, &q.eps),
        a_interval: q.a_interval(),
        certified: q.certified(),
    }
}

/// Parses `"3"`, `"-0.125"`, `"1e-4"`, `"2.5E3"` or `"7/3"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("cannot parse {s:?} as a number"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: Integer = num.trim().parse().map_err(|_| bad())?;
        let den: Integer = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::from((num, den)));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: Integer = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let all = all / 10u32;
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let mut r = if scale >= 0 {
        Rational::from(all * ten.pow(scale as u32))
    } else {
        Rational::from((all, ten.pow((-scale) as u32)))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}
