//! Reduced primitive positive-definite forms of a fixed discriminant.
//!
//! For each leading coefficient `a` the admissible middle coefficients are the
//! solutions of `b^2 = disc (mod 4a)` in `(-a, a]`. Small `a` are scanned
//! directly; larger ones get their square roots from the factorization of
//! `4a` (Tonelli-Shanks and Hensel lifting per prime power, then CRT).

use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::{FactoredDiscriminant, QuadraticForm};
use crate::arith::factor::{factorize_with_table, mul_mod, pow_mod, smallest_prime_factors};

const DIRECT_SCAN_LIMIT: u64 = 128;
const CHUNK: u64 = 1 << 14;

/// Largest leading coefficient of a reduced form: `floor(sqrt(|disc|/3))`.
pub fn max_leading_coefficient(d: &FactoredDiscriminant) -> u64 {
    (d.abs() / 3).isqrt()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `x` with `x^2 = n (mod p)`, `p` an odd prime not dividing `n`, if one exists.
fn sqrt_mod_prime(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// All `x mod p^k` with `x^2 = n (mod p^k)`, `n` already reduced mod `p^k`.
fn sqrt_mod_prime_power(n: u64, p: u64, k: u32, out: &mut Vec<u64>) {
    out.clear();
    let pk = p.pow(k);
    if p != 2 && !n.is_multiple_of(p) {
        let Some(r) = sqrt_mod_prime(n, p) else { return };
        // Hensel: x <- x - (x^2 - n) / (2x)
        let mut x = r;
        let mut modulus = p;
        for _ in 1..k {
            modulus *= p;
            let fx = (mul_mod(x, x, modulus) + modulus - n % modulus) % modulus;
            let inv = mod_inverse((2 * x) % modulus, modulus);
            x = (x + modulus - mul_mod(fx, inv, modulus)) % modulus;
        }
        out.push(x);
        if x != 0 {
            out.push(pk - x);
        }
        return;
    }
    // Lift digit by digit; the root sets here are small (p = 2 or p | n, p^2 <= a).
    let mut roots: Vec<u64> = vec![if p == 2 { n % 2 } else { 0 }];
    let mut modulus = p;
    for _ in 1..k {
        let next = modulus * p;
        let mut lifted = Vec::with_capacity(roots.len());
        for &r in &roots {
            for t in 0..p {
                let x = r + t * modulus;
                if mul_mod(x, x, next) == n % next {
                    lifted.push(x);
                }
            }
        }
        roots = lifted;
        modulus = next;
        if roots.is_empty() {
            break;
        }
    }
    out.extend(roots);
}

/// Per-`a` worker with scratch space for the square-root search.
struct RootFinder<'a> {
    disc: i64,
    spf: &'a [u32],
    factors: Vec<(u64, u32)>,
    partial: Vec<u64>,
    next: Vec<u64>,
    local: Vec<u64>,
}

impl<'a> RootFinder<'a> {
    fn new(disc: i64, spf: &'a [u32]) -> Self {
        RootFinder { disc, spf, factors: Vec::new(), partial: Vec::new(), next: Vec::new(), local: Vec::new() }
    }

    /// Middle coefficients `b` in `(-a, a]`, ascending, with `b^2 = disc (mod 4a)`.
    fn middle_coefficients(&mut self, a: u64, out: &mut Vec<i64>) {
        out.clear();
        let ai = a as i64;
        if a <= DIRECT_SCAN_LIMIT {
            let m = 4 * ai;
            let target = self.disc.rem_euclid(m);
            for b in (-ai + 1)..=ai {
                if (b * b).rem_euclid(m) == target {
                    out.push(b);
                }
            }
            return;
        }
        factorize_with_table(a, self.spf, &mut self.factors);
        match self.factors.first_mut() {
            Some((2, e)) => *e += 2,
            _ => self.factors.insert(0, (2, 2)),
        }
        self.partial.clear();
        self.partial.push(0);
        let mut modulus = 1u64;
        for i in 0..self.factors.len() {
            let (p, e) = self.factors[i];
            let pe = p.pow(e);
            let n = self.disc.rem_euclid(pe as i64) as u64;
            sqrt_mod_prime_power(n, p, e, &mut self.local);
            if self.local.is_empty() {
                return;
            }
            // CRT: x = r (mod modulus), x = s (mod pe)
            let inv = mod_inverse(modulus % pe, pe);
            let combined = modulus * pe;
            self.next.clear();
            for &r in &self.partial {
                for &s in &self.local {
                    let diff = (s + pe - r % pe) % pe;
                    let t = mul_mod(diff, inv, pe);
                    self.next.push(r + modulus * t);
                }
            }
            std::mem::swap(&mut self.partial, &mut self.next);
            modulus = combined;
        }
        debug_assert_eq!(modulus, 4 * a);
        for &x in &self.partial {
            // representative in (-2a, 2a]; keep those in (-a, a]
            let x = x as i64;
            let b = if x > 2 * ai { x - 4 * ai } else { x };
            if b > -ai && b <= ai {
                out.push(b);
            }
        }
        out.sort_unstable();
    }
}

/// Calls `visit` on every reduced primitive form with leading coefficient in
/// `a_range`, in `(a, b)` order.
pub fn for_each_reduced_form_in<F: FnMut(QuadraticForm)>(
    d: &FactoredDiscriminant,
    a_range: RangeInclusive<u64>,
    spf: &[u32],
    mut visit: F,
) {
    let disc = d.delta();
    let a_hi = (*a_range.end()).min(max_leading_coefficient(d));
    let a_lo = (*a_range.start()).max(1);
    let mut finder = RootFinder::new(disc, spf);
    let mut bs = Vec::new();
    for a in a_lo..=a_hi {
        finder.middle_coefficients(a, &mut bs);
        let ai = a as i64;
        for &b in &bs {
            let c = (b * b - disc) / (4 * ai);
            if c < ai || (c == ai && b < 0) {
                continue;
            }
            if gcd(gcd(a, b.unsigned_abs()), c as u64) != 1 {
                continue;
            }
            visit(QuadraticForm { a: ai, b, c });
        }
    }
}

/// Smallest-prime-factor table large enough for every leading coefficient of `d`.
pub fn spf_table_for(d: &FactoredDiscriminant) -> Vec<u32> {
    let a_max = max_leading_coefficient(d);
    smallest_prime_factors(if a_max > DIRECT_SCAN_LIMIT { a_max as usize } else { 1 })
}

fn chunks(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + CHUNK - 1).min(hi);
        out.push((start, end));
        start = end + 1;
    }
    out
}

/// Reduced forms with leading coefficient in `a_range`, sorted by `(a, b)`.
pub fn enumerate_reduced_forms_in(d: &FactoredDiscriminant, a_range: RangeInclusive<u64>) -> Vec<QuadraticForm> {
    let spf = spf_table_for(d);
    let hi = (*a_range.end()).min(max_leading_coefficient(d));
    let parts: Vec<Vec<QuadraticForm>> = chunks((*a_range.start()).max(1), hi)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut v = Vec::new();
            for_each_reduced_form_in(d, lo..=hi, &spf, |q| v.push(q));
            v
        })
        .collect();
    parts.concat()
}

/// All reduced primitive forms of discriminant `d`, sorted by `(a, b)`.
pub fn enumerate_reduced_forms(d: &FactoredDiscriminant) -> Vec<QuadraticForm> {
    enumerate_reduced_forms_in(d, 1..=max_leading_coefficient(d))
}

/// Number of reduced primitive forms, without materializing them.
pub fn class_number(d: &FactoredDiscriminant) -> u64 {
    let a_max = max_leading_coefficient(d);
    if a_max <= DIRECT_SCAN_LIMIT {
        let mut n = 0;
        for_each_reduced_form_in(d, 1..=a_max, &[], |_| n += 1);
        return n;
    }
    let spf = spf_table_for(d);
    chunks(1, a_max)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut n = 0u64;
            for_each_reduced_form_in(d, lo..=hi, &spf, |_| n += 1);
            n
        })
        .sum()
}

/// Parallel fold over all reduced forms: `per_form` is applied to every form
/// and the per-chunk results are combined with `+`.
pub fn sum_over_reduced_forms<F>(d: &FactoredDiscriminant, per_form: F) -> u64
where
    F: Fn(&QuadraticForm) -> u64 + Sync,
{
    let spf = spf_table_for(d);
    chunks(1, max_leading_coefficient(d))
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut n = 0u64;
            for_each_reduced_form_in(d, lo..=hi, &spf, |q| n += per_form(&q));
            n
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::validate_discriminant;

    #[test]
    fn sqrt_mod_prime_roots_square_back() {
        for p in [3u64, 5, 7, 13, 17, 97, 257, 65537, 1_000_003] {
            for n in 1..50u64 {
                if n % p == 0 {
                    continue;
                }
                match sqrt_mod_prime(n, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), n % p),
                    None => assert!((0..p.min(2000)).all(|x| mul_mod(x, x, p) != n % p) || p > 2000),
                }
            }
        }
    }

    #[test]
    fn prime_power_roots_are_complete() {
        let mut out = Vec::new();
        for (p, k) in [(2u64, 5u32), (3, 4), (5, 3), (7, 2), (2, 2), (3, 1)] {
            let m = p.pow(k);
            for n in 0..m {
                sqrt_mod_prime_power(n, p, k, &mut out);
                let mut got = out.clone();
                got.sort_unstable();
                let want: Vec<u64> = (0..m).filter(|x| (x * x) % m == n).collect();
                assert_eq!(got, want, "n = {n} mod {p}^{k}");
            }
        }
    }

    #[test]
    fn root_finder_matches_direct_scan() {
        let spf = smallest_prime_factors(3000);
        for disc in [-4i64, -23, -1_000_003, -99_999_999_999_999, -4 * 3 * 3 * 5 * 5 * 7 * 7 * 11] {
            if !crate::forms::is_discriminant(disc) {
                continue;
            }
            let mut finder = RootFinder::new(disc, &spf);
            let mut got = Vec::new();
            for a in DIRECT_SCAN_LIMIT + 1..3000 {
                finder.middle_coefficients(a, &mut got);
                let ai = a as i64;
                let m = 4 * ai;
                let want: Vec<i64> =
                    ((-ai + 1)..=ai).filter(|b| (b * b).rem_euclid(m) == disc.rem_euclid(m)).collect();
                assert_eq!(got, want, "disc {disc}, a {a}");
            }
        }
    }

    #[test]
    fn small_examples() {
        let forms = |n| enumerate_reduced_forms(&validate_discriminant(n).unwrap());
        let q = |a, b, c| QuadraticForm { a, b, c };
        assert_eq!(forms(-4), vec![q(1, 0, 1)]);
        assert_eq!(forms(-3), vec![q(1, 1, 1)]);
        assert_eq!(forms(-23), vec![q(1, 1, 6), q(2, -1, 3), q(2, 1, 3)]);
        assert_eq!(class_number(&validate_discriminant(-47).unwrap()), 5);
    }
}
