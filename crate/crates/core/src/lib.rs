//! Numerics for singular moduli `j(tau)` and the explicit quantities that
//! bound the discriminants for which `j(tau) - alpha` can be an algebraic unit.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`]: `omega`, divisor sums, the square gcd, `F(disc)` and `E(disc)`.
//! * [`forms`]: discriminant decomposition and reduced-form enumeration.
//! * [`modular`]: certified evaluation of `j`, `j'`, `j''`, reduction to the
//!   fundamental domain and inversion of `j`.
//! * [`counting`]: exact counts of form roots in a disc and the two upper bounds.
//! * [`heights`]: heights of singular moduli and the lower bounds for `h(j - alpha)`.
//! * [`effective`]: separation constants, periods, and the final discriminant bound.
//! * [`verify`]: property suites shared by the test harness and the CLI.

pub mod arith;
pub mod counting;
pub mod effective;
pub mod error;
pub mod forms;
pub mod heights;
pub mod interval;
pub mod modular;
pub mod poly;
pub mod uhp;
pub mod verify;

pub use error::{Error, Result};
pub use forms::{FactoredDiscriminant, QuadraticForm};
pub use interval::Interval;
pub use uhp::UHPoint;

/// Working precision in bits when callers do not ask for one.
pub const DEFAULT_PRECISION: u32 = 128;
