//! Closed real intervals with MPFR endpoints and outward rounding.
//!
//! Every operation rounds the lower endpoint toward -inf and the upper
//! endpoint toward +inf, so the exact real result of the same expression on
//! any point of the input intervals lies inside the output. Bounds that must
//! never be understated are read off [`Interval::hi`].

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

fn down<T>(prec: u32, val: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Down).0
}

fn up<T>(prec: u32, val: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Up).0
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_f64(prec: u32, x: f64) -> Self {
        Interval { lo: down(prec, x), hi: up(prec, x) }
    }

    pub fn from_int(prec: u32, n: i64) -> Self {
        Interval { lo: down(prec, n), hi: up(prec, n) }
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        Interval { lo: down(prec, n), hi: up(prec, n) }
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Interval { lo: down(prec, q), hi: up(prec, q) }
    }

    pub fn pi(prec: u32) -> Self {
        Interval { lo: down(prec, Constant::Pi), hi: up(prec, Constant::Pi) }
    }

    pub fn ln2(prec: u32) -> Self {
        Interval { lo: down(prec, Constant::Log2), hi: up(prec, Constant::Log2) }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn width(&self) -> f64 {
        up(64, &self.hi - &self.lo).to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo = down(p, pairs[0].0 * pairs[0].1);
        let mut hi = up(p, pairs[0].0 * pairs[0].1);
        for (a, b) in &pairs[1..] {
            let l = down(p, *a * *b);
            let h = up(p, *a * *b);
            if l < lo {
                lo = l;
            }
            if h > hi {
                hi = h;
            }
        }
        Interval { lo, hi }
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        self.mul(&Interval::from_int(self.prec(), k))
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::Domain(format!("reciprocal of interval {self:?} containing 0")));
        }
        let p = self.prec();
        let mut lo = Float::with_val(p, &self.hi);
        lo.recip_round(Round::Down);
        let mut hi = Float::with_val(p, &self.lo);
        hi.recip_round(Round::Up);
        Ok(Interval { lo, hi })
    }

    pub fn square(&self) -> Interval {
        if self.lo >= 0 {
            let p = self.prec();
            Interval { lo: down(p, self.lo.square_ref()), hi: up(p, self.hi.square_ref()) }
        } else if self.hi <= 0 {
            self.neg().square()
        } else {
            let m = if -self.lo.clone() > self.hi { self.neg().hi } else { self.hi.clone() };
            let p = self.prec();
            Interval { lo: Float::with_val(p, 0), hi: up(p, m.square_ref()) }
        }
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0 {
            return Err(Error::Domain(format!("sqrt of interval {self:?} reaching below 0")));
        }
        let mut lo = self.lo.clone();
        lo.sqrt_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.sqrt_round(Round::Up);
        Ok(Interval { lo, hi })
    }

    /// Non-negative fourth root.
    pub fn root4(&self) -> Result<Interval> {
        self.sqrt()?.sqrt()
    }

    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0 {
            return Err(Error::Domain(format!("log of interval {self:?} reaching 0")));
        }
        let mut lo = self.lo.clone();
        lo.ln_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.ln_round(Round::Up);
        Ok(Interval { lo, hi })
    }

    pub fn exp(&self) -> Interval {
        let mut lo = self.lo.clone();
        lo.exp_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.exp_round(Round::Up);
        Interval { lo, hi }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let m = if -self.lo.clone() > self.hi { -self.lo.clone() } else { self.hi.clone() };
            Interval { lo: Float::with_val(self.prec(), 0), hi: m }
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        let lo = if self.lo >= o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval { lo, hi }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        let lo = if self.lo <= o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi <= o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval { lo, hi }
    }

    /// `Some(true)` if every point is `< x`, `Some(false)` if every point is
    /// `>= x`, `None` when the interval straddles `x`.
    pub fn certainly_less_than(&self, x: &Float) -> Option<bool> {
        if self.hi < *x {
            Some(true)
        } else if self.lo >= *x {
            Some(false)
        } else {
            None
        }
    }
}
