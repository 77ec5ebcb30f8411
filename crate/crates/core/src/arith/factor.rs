//! Integer factorization for 64-bit inputs.
//!
//! Trial division by the primes below 10^6, a deterministic Miller-Rabin test
//! for the cofactor, and Pollard-Brent rho for the rare composite cofactor
//! whose prime factors all exceed 10^6.

use std::sync::OnceLock;

const TRIAL_LIMIT: u32 = 1_000_000;

/// All primes below `limit`, by the sieve of Eratosthenes.
pub fn primes_below(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut primes = Vec::with_capacity(n / 10);
    for i in 2..n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_LIMIT))
}

/// Smallest-prime-factor table for `0..=limit` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A nontrivial factor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 2u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn push_factor(out: &mut Vec<(u64, u32)>, p: u64) {
    match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    }
}

fn split_large(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        push_factor(out, n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Prime factorization of `n >= 1` as `(prime, exponent)` pairs sorted by prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize(0)");
    let mut out = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let limit = TRIAL_LIMIT as u64;
        if n < limit * limit {
            out.push((n, 1));
        } else {
            let start = out.len();
            split_large(n, &mut out);
            out[start..].sort_unstable();
        }
    }
    out
}

/// Factorization of `n <= spf.len() - 1` read off a smallest-prime-factor table.
pub fn factorize_with_table(mut n: u64, spf: &[u32], out: &mut Vec<(u64, u32)>) {
    out.clear();
    while n > 1 {
        let p = spf[n as usize] as u64;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multiply(f: &[(u64, u32)]) -> u64 {
        f.iter().map(|&(p, e)| p.pow(e)).product()
    }

    #[test]
    fn factorizes_small_and_large() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(510510).len(), 7);
        // product of two primes above 10^6
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n), vec![(1_000_003, 1), (1_000_033, 1)]);
        // p^2 q with p, q > 10^6
        let n = 1_000_003u64 * 1_000_003 * 1_000_037;
        assert_eq!(factorize(n), vec![(1_000_003, 2), (1_000_037, 1)]);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..20_000u64 {
            let naive = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn spf_table_matches_factorize() {
        let spf = smallest_prime_factors(5000);
        let mut buf = Vec::new();
        for n in 1..=5000u64 {
            factorize_with_table(n, &spf, &mut buf);
            assert_eq!(buf, factorize(n));
            assert_eq!(multiply(&buf), n);
        }
    }
}
