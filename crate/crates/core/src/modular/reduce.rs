//! Reduction of upper half-plane points to the closed fundamental domain.

use rug::Float;

use crate::uhp::UHPoint;

/// An element of `SL2(Z)` acting by `tau -> (a tau + b) / (c tau + d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };
    /// `tau -> -1/tau`.
    pub const S: Sl2 = Sl2 { a: 0, b: -1, c: 1, d: 0 };

    pub fn translation(n: i128) -> Sl2 {
        Sl2 { a: 1, b: n, c: 0, d: 1 }
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, tau: &UHPoint) -> UHPoint {
        let prec = tau.precision_bits();
        let z = tau.to_complex(prec);
        let num = rug::Complex::with_val(prec, Float::with_val(prec, self.a) * &z) + Float::with_val(prec, self.b);
        let den = rug::Complex::with_val(prec, Float::with_val(prec, self.c) * &z) + Float::with_val(prec, self.d);
        let w = rug::Complex::with_val(prec, num / den);
        let (re, im) = w.into_real_imag();
        UHPoint { re, im }
    }
}

/// `(tau', M)` with `tau' = M tau` in the closed fundamental domain.
///
/// Works at the input precision plus 64 bits; each inversion can cost bits
/// when `Im(tau)` is small.
pub fn reduce_to_fundamental_domain(tau: &UHPoint) -> (UHPoint, Sl2) {
    let prec = tau.precision_bits() + 64;
    let mut x = Float::with_val(prec, &tau.re);
    let mut y = Float::with_val(prec, &tau.im);
    let mut m = Sl2::IDENTITY;
    for _ in 0..100_000 {
        let n = Float::with_val(prec, x.round_ref());
        let shift = n.to_integer().expect("finite real part").to_i128().expect("translation fits in i128");
        if shift != 0 {
            x -= &n;
            m = Sl2::translation(-shift).compose(&m);
        }
        let norm = Float::with_val(prec, x.square_ref()) + Float::with_val(prec, y.square_ref());
        if norm >= 1 {
            break;
        }
        x = -x / &norm;
        y /= &norm;
        m = Sl2::S.compose(&m);
    }
    let out_prec = tau.precision_bits();
    (UHPoint { re: Float::with_val(out_prec, x), im: Float::with_val(out_prec, y) }, m)
}
