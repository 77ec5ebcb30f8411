//! Points of the upper half-plane.

use std::fmt;

use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct UHPoint {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for UHPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re.to_f64(), self.im.to_f64())
    }
}

impl UHPoint {
    pub fn new(re: Float, im: Float) -> Result<Self> {
        if !(im > 0) {
            return Err(Error::Domain(format!("Im(tau) = {} is not positive", im.to_f64())));
        }
        Ok(UHPoint { re, im })
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Result<Self> {
        Self::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Result<Self> {
        Self::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_complex(z: &Complex) -> Result<Self> {
        Self::new(z.real().clone(), z.imag().clone())
    }

    /// `i`, at the given precision.
    pub fn i(prec: u32) -> Self {
        UHPoint { re: Float::new(prec), im: Float::with_val(prec, 1) }
    }

    /// `e^{i pi/3} = 1/2 + i sqrt(3)/2`.
    pub fn rho(prec: u32) -> Self {
        let im = Float::with_val(prec, 3).sqrt() / 2u32;
        UHPoint { re: Float::with_val(prec, 0.5), im }
    }

    pub fn precision_bits(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        UHPoint { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.re, &self.im))
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    /// `|re| <= 1/2` and `|tau| >= 1`, each up to `2^{-slack_bits}`.
    pub fn in_closed_fundamental_domain(&self, slack_bits: u32) -> bool {
        let prec = self.precision_bits().max(64);
        let slack = Float::with_val(prec, Float::u_exp(1, -(slack_bits as i32)));
        let half = Float::with_val(prec, 0.5);
        let abs_re = Float::with_val(prec, self.re.abs_ref());
        let norm = Float::with_val(prec, self.re.square_ref()) + Float::with_val(prec, self.im.square_ref());
        abs_re <= half + &slack && norm >= 1 - slack
    }

    /// The mirror image `-conj(tau)`.
    pub fn mirror(&self) -> Self {
        UHPoint { re: -self.re.clone(), im: self.im.clone() }
    }

    /// Euclidean distance, as `f64`.
    pub fn distance_f64(&self, other: &UHPoint) -> f64 {
        let prec = self.precision_bits().max(other.precision_bits());
        let dx = Float::with_val(prec, &self.re - &other.re);
        let dy = Float::with_val(prec, &self.im - &other.im);
        dx.hypot(&dy).to_f64()
    }
}

/// `|z|` rounded to `f64`.
pub fn cabs(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_lower_half_plane() {
        assert!(UHPoint::from_f64(53, 0.0, 0.0).is_err());
        assert!(UHPoint::from_f64(53, 0.0, -1.0).is_err());
        assert!(UHPoint::from_f64(53, 0.0, 1e-300).is_ok());
    }

    #[test]
    fn fundamental_domain_membership() {
        assert!(UHPoint::i(64).in_closed_fundamental_domain(60));
        assert!(UHPoint::rho(128).in_closed_fundamental_domain(100));
        assert!(!UHPoint::from_f64(64, 0.6, 2.0).unwrap().in_closed_fundamental_domain(40));
        assert!(!UHPoint::from_f64(64, 0.0, 0.9).unwrap().in_closed_fundamental_domain(40));
    }
}
