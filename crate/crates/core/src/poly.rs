//! Integer polynomials: complex roots, Mahler measure and Weil height.

use std::fmt;

use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::uhp::cabs;

/// Polynomial with integer coefficients, stored constant term first.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().rev().map(|c| c.to_string()).collect();
        write!(f, "IntPoly[{}]", parts.join(", "))
    }
}

impl IntPoly {
    /// From coefficients listed constant term first; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<Integer>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::Domain("polynomial must have degree >= 1".into()));
        }
        Ok(IntPoly { coeffs })
    }

    /// From coefficients listed leading term first, e.g. `[1, -2]` is `x - 2`.
    pub fn from_leading_first(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().rev().map(|&c| Integer::from(c)).collect())
    }

    /// Parses a comma-separated list, leading coefficient first.
    pub fn parse(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let c: Integer = part
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad polynomial coefficient {part:?}")))?;
            coeffs.push(c);
        }
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Integer {
        self.coeffs.last().expect("degree >= 1")
    }

    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::new(), |g, c| g.gcd(c))
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec().0;
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Vec<Integer> {
        self.coeffs.iter().enumerate().skip(1).map(|(i, c)| Integer::from(c * i as u64)).collect()
    }

    /// All complex roots by the Aberth-Ehrlich iteration at `prec` bits.
    pub fn roots(&self, prec: u32) -> Result<Vec<Complex>> {
        let d = self.degree();
        let wp = prec + 32;
        if d == 1 {
            let r = Float::with_val(wp, -Float::with_val(wp, &self.coeffs[0]) / Float::with_val(wp, &self.coeffs[1]));
            return Ok(vec![Complex::with_val(wp, (r, 0))]);
        }
        let lead = Float::with_val(wp, self.leading());
        let mut radius = 0f64;
        for c in &self.coeffs[..d] {
            radius = radius.max(Float::with_val(wp, c / &lead).abs().to_f64());
        }
        let radius = 1.0 + radius;
        let deriv = self.derivative();
        let mut z: Vec<Complex> = (0..d)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
                Complex::with_val(wp, (radius * angle.cos(), radius * angle.sin()))
            })
            .collect();
        let tol = (-(wp as f64) + 16.0).exp2();
        let noise = (-(wp as f64) + 8.0).exp2();
        let abs_coeffs: Vec<f64> = self.coeffs.iter().map(|c| c.to_f64().abs()).collect();
        for _ in 0..2000 {
            let mut converged = true;
            for k in 0..d {
                let p = self.eval_complex(&z[k]);
                // stop moving a root once |p| is at the level of evaluation noise
                let r = cabs(&z[k]);
                let scale: f64 = abs_coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a);
                if cabs(&p) <= noise * scale {
                    continue;
                }
                let mut dp = Complex::new(wp);
                for c in deriv.iter().rev() {
                    dp *= &z[k];
                    dp += c;
                }
                let ratio = Complex::with_val(wp, &p / &dp);
                let mut sum = Complex::new(wp);
                for j in 0..d {
                    if j != k {
                        sum += Complex::with_val(wp, &z[k] - &z[j]).recip();
                    }
                }
                let denom = Complex::with_val(wp, 1 - Complex::with_val(wp, &ratio * &sum));
                let w = Complex::with_val(wp, &ratio / &denom);
                if cabs(&w) > tol * r.max(1.0) {
                    converged = false;
                }
                z[k] -= w;
            }
            if converged {
                return Ok(z);
            }
        }
        Err(Error::NoConvergence(format!("roots of {self:?}")))
    }

    /// `log M(P) = log|a_d| + sum log max(1, |root|)`.
    pub fn log_mahler_measure(&self, prec: u32) -> Result<f64> {
        let mut acc = Float::with_val(prec, self.leading()).abs().ln().to_f64();
        for r in self.roots(prec)? {
            acc += cabs(&r).max(1.0).ln();
        }
        Ok(acc)
    }

    /// Absolute logarithmic Weil height of a root, assuming `self` is the
    /// primitive irreducible polynomial of that root.
    pub fn root_height(&self, prec: u32) -> Result<f64> {
        if self.content() != 1 {
            return Err(Error::Domain(format!("{self:?} is not primitive")));
        }
        Ok(self.log_mahler_measure(prec)? / self.degree() as f64)
    }
}

/// Coefficients of `prod (x - v)`, constant term first.
pub fn polynomial_from_roots(values: &[Complex], prec: u32) -> Vec<Complex> {
    let mut coeffs = vec![Complex::with_val(prec, 1)];
    for v in values {
        let mut next = vec![Complex::new(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Complex::with_val(prec, c * v);
        }
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cyclotomic_and_quadratic() {
        let p = IntPoly::from_leading_first(&[1, 0, 1]).unwrap();
        let mut r: Vec<f64> = p.roots(100).unwrap().iter().map(|z| z.imag().to_f64()).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 1.0).abs() < 1e-25 && (r[1] - 1.0).abs() < 1e-25);
        let p = IntPoly::from_leading_first(&[2, 1, 3]).unwrap();
        for z in p.roots(100).unwrap() {
            assert!(cabs(&p.eval_complex(&z)) < 1e-25);
            assert!((cabs(&z).powi(2) - 1.5).abs() < 1e-14);
        }
    }

    #[test]
    fn heights() {
        let golden = IntPoly::from_leading_first(&[1, -1, -1]).unwrap();
        let h = golden.root_height(128).unwrap();
        assert!((h - 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-14);
        let two = IntPoly::from_leading_first(&[1, -2]).unwrap();
        assert!((two.root_height(64).unwrap() - 2f64.ln()).abs() < 1e-15);
        let half = IntPoly::from_leading_first(&[2, -1]).unwrap();
        assert!((half.root_height(64).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(IntPoly::from_leading_first(&[2, 4]).unwrap().root_height(64).is_err());
    }

    #[test]
    fn degree_ten_roots_are_accurate() {
        // (x - 1)(x - 2)...(x - 10)
        let roots: Vec<Complex> = (1..=10).map(|k| Complex::with_val(200, k)).collect();
        let coeffs: Vec<Integer> = polynomial_from_roots(&roots, 200)
            .iter()
            .map(|c| c.real().to_integer().unwrap())
            .collect();
        let p = IntPoly::new(coeffs).unwrap();
        let mut found: Vec<f64> = p.roots(128).unwrap().iter().map(|z| z.real().to_f64()).collect();
        found.sort_by(f64::total_cmp);
        for (k, r) in found.iter().enumerate() {
            assert!((r - (k + 1) as f64).abs() < 1e-20);
        }
    }

    #[test]
    fn parse_leading_first() {
        let p = IntPoly::parse("1, -2").unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.coeffs()[0], -2);
        assert!(IntPoly::parse("0").is_err());
        assert!(IntPoly::parse("1,x").is_err());
    }
}
