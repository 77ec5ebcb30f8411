//! Discriminants, reduced binary quadratic forms and their roots.

mod discriminant;
mod enumerate;

pub use discriminant::{
    is_discriminant, is_fundamental, is_squarefree, validate_discriminant, FactoredDiscriminant,
    MAX_ABS_DISCRIMINANT,
};
pub use enumerate::{
    class_number, enumerate_reduced_forms, enumerate_reduced_forms_in, for_each_reduced_form_in,
    max_leading_coefficient, spf_table_for, sum_over_reduced_forms,
};

use rug::Float;

use crate::uhp::UHPoint;

/// A binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn discriminant(&self) -> i128 {
        (self.b as i128).pow(2) - 4 * self.a as i128 * self.c as i128
    }

    pub fn is_primitive(&self) -> bool {
        let g = |x: u64, y: u64| {
            let (mut x, mut y) = (x, y);
            while y != 0 {
                (x, y) = (y, x % y);
            }
            x
        };
        g(g(self.a.unsigned_abs(), self.b.unsigned_abs()), self.c.unsigned_abs()) == 1
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }
}

/// The root `(-b + i sqrt|disc|) / 2a` in the upper half-plane.
pub fn form_root(q: &QuadraticForm, prec: u32) -> UHPoint {
    let disc = -q.discriminant();
    assert!(disc > 0 && q.a > 0, "form_root needs a positive definite form, got {q:?}");
    let two_a = 2 * q.a;
    let re = Float::with_val(prec, -q.b) / two_a;
    let im = Float::with_val(prec, rug::Integer::from(disc)).sqrt() / two_a;
    UHPoint { re, im }
}

/// Absolute logarithmic Weil height of the root of `q`.
///
/// With `a x^2 + b x + c` primitive the Mahler measure is
/// `a max(1,|tau|) max(1,|conj tau|) = max(a, c)` because `|tau|^2 = c/a`.
pub fn quadratic_height(q: &QuadraticForm) -> f64 {
    assert!(q.a > 0 && q.discriminant() < 0, "quadratic_height needs a positive definite form");
    0.5 * (q.a.max(q.c) as f64).ln()
}
