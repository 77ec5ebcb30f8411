//! Exact q-expansion coefficients of `j`.

use std::sync::OnceLock;

use rug::ops::Pow;
use rug::Integer;

/// Coefficients held in the shared table; enough for every supported precision.
pub const TABLE_TERMS: usize = 600;

/// `j(tau) = q^{-1} + sum_{n >= 0} coefficients[n] q^n`, truncated at `q^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct JSeries {
    pub coefficients: Vec<Integer>,
}

impl JSeries {
    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }
}

fn mul_truncated(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `sum sigma_3(n) q^n` scaled into `E4 = 1 + 240 sum sigma_3(n) q^n`.
fn eisenstein_e4(len: usize) -> Vec<Integer> {
    let mut sigma3 = vec![Integer::new(); len];
    for d in 1..len {
        let cube = Integer::from(d as u64).pow(3);
        let mut m = d;
        while m < len {
            sigma3[m] += &cube;
            m += d;
        }
    }
    let mut e4: Vec<Integer> = sigma3.into_iter().map(|s| s * 240u32).collect();
    e4[0] = Integer::from(1);
    e4
}

/// `prod_{n >= 1} (1 - q^n)^{-24}` via the pentagonal number theorem and
/// repeated squaring of the partition series.
fn inverse_eta_product_24(len: usize) -> Vec<Integer> {
    // p(n) by Euler's recurrence
    let mut part = vec![Integer::new(); len];
    part[0] = Integer::from(1);
    for n in 1..len {
        let mut acc = Integer::new();
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign_positive = k % 2 == 1;
            for g in [g1, (k * (3 * k + 1) / 2) as usize] {
                if g <= n {
                    if sign_positive {
                        acc += &part[n - g];
                    } else {
                        acc -= &part[n - g];
                    }
                }
            }
            k += 1;
        }
        part[n] = acc;
    }
    let p2 = mul_truncated(&part, &part, len);
    let p4 = mul_truncated(&p2, &p2, len);
    let p8 = mul_truncated(&p4, &p4, len);
    let p16 = mul_truncated(&p8, &p8, len);
    mul_truncated(&p8, &p16, len)
}

/// Coefficients `c_0..=c_N` from `E4^3 / (q prod (1 - q^n)^24)`.
pub fn j_coefficients(n: usize) -> JSeries {
    if n < TABLE_TERMS {
        if let Some(t) = TABLE.get() {
            return JSeries { coefficients: t.coefficients[..=n].to_vec() };
        }
    }
    compute(n)
}

fn compute(n: usize) -> JSeries {
    let len = n + 2;
    let e4 = eisenstein_e4(len);
    let e4_cubed = mul_truncated(&mul_truncated(&e4, &e4, len), &e4, len);
    let a = mul_truncated(&e4_cubed, &inverse_eta_product_24(len), len);
    debug_assert_eq!(a[0], 1);
    JSeries { coefficients: a[1..].to_vec() }
}

static TABLE: OnceLock<JSeries> = OnceLock::new();

/// Shared table of `TABLE_TERMS` coefficients.
pub fn table() -> &'static JSeries {
    TABLE.get_or_init(|| compute(TABLE_TERMS - 1))
}

/// `c_n` as `f64` (finite for every table entry).
pub fn table_f64() -> &'static [f64] {
    static F: OnceLock<Vec<f64>> = OnceLock::new();
    F.get_or_init(|| table().coefficients.iter().map(|c| c.to_f64()).collect())
}
