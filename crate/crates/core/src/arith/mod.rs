//! Arithmetic functions: distinct prime counts, divisor sums, the square gcd,
//! the `2^omega` envelope `F` and `E = F (log|disc|)^4`, and Robin's bound on
//! `omega`.

pub mod factor;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::forms::FactoredDiscriminant;
use crate::interval::Interval;

pub use factor::{factorize, is_prime, primes_below};

/// Number of distinct primes dividing `n`.
pub fn omega(n: u64) -> u32 {
    assert!(n >= 1, "omega(0)");
    factorize(n).len() as u32
}

/// Divisor sum `sum_{d | n} d^k`, exact.
pub fn sigma_k(n: u64, k: u32) -> Integer {
    assert!(n >= 1, "sigma_k(0, _)");
    let mut acc = Integer::from(1);
    for (p, e) in factorize(n) {
        if k == 0 {
            acc *= e + 1;
            continue;
        }
        // 1 + p^k + ... + p^{ek}
        let pk = Integer::from(p).pow(k);
        let mut term = Integer::from(1);
        let mut sum = Integer::from(1);
        for _ in 0..e {
            term *= &pk;
            sum += &term;
        }
        acc *= sum;
    }
    acc
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Largest `d >= 1` with `d^2 | m` and `d^2 | n`.
pub fn gcd2(m: i64, n: i64) -> Result<u64> {
    if m == 0 && n == 0 {
        return Err(Error::Domain("gcd2(0, 0) is unbounded".into()));
    }
    let g = gcd_u64(m.unsigned_abs(), n.unsigned_abs());
    Ok(factorize(g).iter().map(|&(p, e)| p.pow(e / 2)).product())
}

/// Number of primes whose product stays `<= bound`; `max omega(a)` over `a <= bound`.
pub fn primorial_count(bound: &Integer) -> u32 {
    let mut prod = Integer::from(1);
    let mut k = 0;
    let mut p = 2u64;
    loop {
        prod *= p;
        if prod > *bound {
            return k;
        }
        k += 1;
        p += 1;
        while !is_prime(p) {
            p += 1;
        }
    }
}

/// `max{2^omega(a) : a <= |disc|^{1/2}}` for a discriminant of arbitrary magnitude.
pub fn big_f_for_magnitude(abs_disc: &Integer) -> Integer {
    let root = abs_disc.clone().sqrt();
    Integer::from(1) << primorial_count(&root)
}

pub fn big_f(d: &FactoredDiscriminant) -> u64 {
    big_f_for_magnitude(&Integer::from(d.abs())).to_u64().expect("F(disc) fits in u64")
}

/// `F (log|disc|)^4` as an outward-rounded interval.
pub fn big_e(d: &FactoredDiscriminant, prec: u32) -> Result<Interval> {
    if d.abs() < 2 {
        return Err(Error::Domain("E needs |disc| >= 2".into()));
    }
    let log = Interval::from_int(prec, d.abs() as i64).ln()?;
    let f = Interval::from_int(prec, big_f(d) as i64);
    Ok(f.mul(&log.square().square()))
}

/// `log E = log F + 4 log log|disc|` for discriminants beyond machine range.
pub fn log_big_e_for_magnitude(abs_disc: &Integer, prec: u32) -> Result<Interval> {
    let k = primorial_count(&abs_disc.clone().sqrt());
    let log_f = Interval::ln2(prec).mul_int(k as i64);
    let loglog = Interval::from_integer(prec, abs_disc).ln()?.ln()?;
    Ok(log_f.add(&loglog.mul_int(4)))
}

/// Whether `omega(n) <= 1.4 log n / log log n`.
pub fn robin_check(n: u64) -> Result<bool> {
    if n < 3 {
        return Err(Error::Domain(format!("robin_check needs n >= 3, got {n}")));
    }
    let w = omega(n);
    let mut prec = 64;
    loop {
        let ln = Interval::from_int(prec, n as i64).ln()?;
        let rhs = Interval::from_rational(prec, &rug::Rational::from((7, 5))).mul(&ln).div(&ln.ln()?)?;
        let target = Float::with_val(prec, w);
        match rhs.certainly_less_than(&target) {
            Some(less) => return Ok(!less),
            None if prec < 1024 => prec *= 2,
            None => {
                return Err(Error::PrecisionInconclusive(format!(
                    "robin_check({n}) undecided at {prec} bits"
                )))
            }
        }
    }
}

/// Arithmetic data attached to a discriminant.
#[derive(Clone, Debug)]
pub struct ArithProfile {
    pub delta: FactoredDiscriminant,
    pub f_value: u64,
    pub e_value: Interval,
    pub sigma0_ftilde: Integer,
    pub sigma1_ftilde: Integer,
}

pub fn arith_profile(d: &FactoredDiscriminant, prec: u32) -> Result<ArithProfile> {
    let ft = d.modified_conductor();
    Ok(ArithProfile {
        delta: *d,
        f_value: big_f(d),
        e_value: big_e(d, prec)?,
        sigma0_ftilde: sigma_k(ft, 0),
        sigma1_ftilde: sigma_k(ft, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega_naive(mut n: u64) -> u32 {
        let mut count = 0;
        let mut p = 2;
        while n > 1 {
            if n.is_multiple_of(p) {
                count += 1;
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            p += 1;
        }
        count
    }

    fn sigma_naive(n: u64, k: u32) -> u128 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as u128).pow(k)).sum()
    }

    fn gcd2_naive(m: i64, n: i64) -> u64 {
        (1..=m.unsigned_abs().max(n.unsigned_abs()))
            .filter(|d| {
                let sq = (d * d) as i64;
                m % sq == 0 && n % sq == 0
            })
            .max()
            .unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(1), 0);
        assert_eq!(omega(12), 2);
        assert_eq!(omega(510510), 7);
        for n in 1..3000 {
            assert_eq!(omega(n), omega_naive(n));
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_k(1, 0), 1);
        assert_eq!(sigma_k(2, 1), 3);
        assert_eq!(sigma_k(12, 1), 28);
        for n in 1..600 {
            for k in 0..3 {
                assert_eq!(sigma_k(n, k), sigma_naive(n, k));
            }
        }
    }

    #[test]
    fn gcd2_examples() {
        assert_eq!(gcd2(12, 18).unwrap(), 1);
        assert_eq!(gcd2(4, 8).unwrap(), 2);
        assert_eq!(gcd2(48, 36).unwrap(), 2);
        assert_eq!(gcd2(0, 72).unwrap(), 6);
        assert!(gcd2(0, 0).is_err());
        for m in -60..60 {
            for n in 1..60 {
                assert_eq!(gcd2(m, n).unwrap(), gcd2_naive(m, n), "({m}, {n})");
            }
        }
    }

    #[test]
    fn big_f_examples() {
        let f = |n: u64| big_f_for_magnitude(&Integer::from(n));
        assert_eq!(f(3), 1);
        assert_eq!(f(4), 2);
        assert_eq!(f(100_000_000_000_000), 256);
        assert_eq!(f(36), 4);
        assert_eq!(f(35), 2);
    }

    #[test]
    fn robin_examples() {
        assert!(robin_check(3).unwrap());
        assert!(robin_check(510510).unwrap());
        assert!(robin_check(223092870).unwrap());
        assert!(robin_check(2).is_err());
    }
}
