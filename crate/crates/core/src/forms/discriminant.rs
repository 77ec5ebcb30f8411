use std::fmt;

use crate::arith::factorize;
use crate::error::{Error, Result};

/// Largest supported `|disc|`. Keeps every intermediate of form arithmetic
/// (`b^2`, `4ac`) comfortably inside `i64`.
pub const MAX_ABS_DISCRIMINANT: u64 = 1 << 61;

/// A negative discriminant split as `delta = fundamental * conductor^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactoredDiscriminant {
    delta: i64,
    fundamental: i64,
    conductor: u64,
    modified_conductor: u64,
}

impl fmt::Debug for FactoredDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Disc({} = {} * {}^2, f~ = {})",
            self.delta, self.fundamental, self.conductor, self.modified_conductor
        )
    }
}

impl FactoredDiscriminant {
    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn abs(&self) -> u64 {
        self.delta.unsigned_abs()
    }

    pub fn fundamental(&self) -> i64 {
        self.fundamental
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `f` when `D = 1 mod 4`, `2f` when `D = 0 mod 4`; makes `delta / f~^2` squarefree.
    pub fn modified_conductor(&self) -> u64 {
        self.modified_conductor
    }
}

pub fn is_discriminant(n: i64) -> bool {
    n < 0 && matches!(n.rem_euclid(4), 0 | 1)
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Fundamental discriminant test for negative `n`.
pub fn is_fundamental(n: i64) -> bool {
    if n >= 0 {
        return false;
    }
    match n.rem_euclid(4) {
        1 => is_squarefree(n.unsigned_abs()),
        0 => {
            let m = n / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Splits `n` into fundamental discriminant and conductor.
pub fn validate_discriminant(n: i64) -> Result<FactoredDiscriminant> {
    if !is_discriminant(n) {
        return Err(Error::NonDiscriminant(n));
    }
    let abs = n.unsigned_abs();
    if abs > MAX_ABS_DISCRIMINANT {
        return Err(Error::Unsupported(format!("|disc| = {abs} exceeds 2^61")));
    }
    let mut two_exp = 0u32;
    let mut odd_square_root = 1u64;
    let mut odd_core = 1u64;
    for (p, e) in factorize(abs) {
        if p == 2 {
            two_exp = e;
        } else {
            odd_square_root *= p.pow(e / 2);
            if e % 2 == 1 {
                odd_core *= p;
            }
        }
    }
    // n / odd_square_root^2 = 2^two_exp * core with core odd, squarefree, negative
    let core = -(odd_core as i64);
    let (fundamental, two_part) = if two_exp.is_multiple_of(2) {
        if core.rem_euclid(4) == 1 {
            (core, 1u64 << (two_exp / 2))
        } else {
            (4 * core, 1u64 << ((two_exp - 2) / 2))
        }
    } else {
        (8 * core, 1u64 << ((two_exp - 3) / 2))
    };
    let conductor = odd_square_root * two_part;
    let modified_conductor = if fundamental.rem_euclid(4) == 1 { conductor } else { 2 * conductor };
    debug_assert_eq!(fundamental as i128 * (conductor as i128).pow(2), n as i128);
    Ok(FactoredDiscriminant { delta: n, fundamental, conductor, modified_conductor })
}
