//! Property suites run by `moduli-gauge verify`. Each check compares a
//! computed quantity with a brute-force reference or an explicit bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Rational};

use crate::arith::big_f;
use crate::counting::{cm_count, cm_count_naive, lemma_bound, Center, NeighborhoodQuery};
use crate::effective::{log_e_over_root_ratio, log_grid, log_of_power_of_ten, auxiliary_functions, DEFAULT_C1};
use crate::error::{Error, Result};
use crate::forms::{class_number, enumerate_reduced_forms, is_discriminant, quadratic_height, validate_discriminant};
use crate::heights::{lower_bound_colmez, lower_bound_trivial, singular_height_floor, singular_modulus_height};
use crate::modular::{growth_gap, j_eval, sign_of_im_j, Sign};
use crate::uhp::{cabs, UHPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Forms,
    Counting,
    Modular,
    Heights,
    Auxiliary,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Forms, Suite::Counting, Suite::Modular, Suite::Heights, Suite::Auxiliary];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Forms => "forms",
            Suite::Counting => "counting",
            Suite::Modular => "modular",
            Suite::Heights => "heights",
            Suite::Auxiliary => "section4",
        }
    }

    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        if s == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|x| x.name() == s).map(|x| vec![*x])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    pub detail: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

const SEED: u64 = 0x6d67_7667;

/// Reduced forms by a direct search over `(a, b)`.
fn naive_class_number(n: i64) -> u64 {
    let abs = -n;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= abs {
        for b in -a + 1..=a {
            let num = b * b - n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            let g = gcd(gcd(a, b.abs()), c);
            if g == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

fn gcd(mut x: i64, mut y: i64) -> i64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

fn forms_suite() -> Result<Vec<Check>> {
    let mut class = Check { name: "class number vs direct search, |disc| <= 3000".into(), cases: 0, violations: 0, detail: String::new() };
    let mut shape = Check { name: "forms reduced, primitive, of the right discriminant".into(), cases: 0, violations: 0, detail: String::new() };
    let mut decomposition = Check { name: "disc = D f^2 with D fundamental".into(), cases: 0, violations: 0, detail: String::new() };
    for n in (3..=3000i64).map(|n| -n).filter(|&n| is_discriminant(n)) {
        let d = validate_discriminant(n)?;
        class.cases += 1;
        if class_number(&d) != naive_class_number(n) {
            class.violations += 1;
            class.detail = format!("disc {n}");
        }
        for q in enumerate_reduced_forms(&d) {
            shape.cases += 1;
            if !q.is_reduced() || !q.is_primitive() || q.discriminant() != n as i128 {
                shape.violations += 1;
                shape.detail = format!("{q:?}");
            }
        }
        decomposition.cases += 1;
        let f = d.conductor() as i64;
        if d.fundamental() * f * f != n || !crate::forms::is_fundamental(d.fundamental()) {
            decomposition.violations += 1;
            decomposition.detail = format!("disc {n}");
        }
    }
    Ok(vec![class, shape, decomposition])
}

fn counting_suite() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut agree = Check { name: "restricted count equals full scan".into(), cases: 0, violations: 0, detail: String::new() };
    let mut bound = Check { name: "count <= lemma bound".into(), cases: 0, violations: 0, detail: String::new() };
    while agree.cases < 200 {
        let n = -(rng.gen_range(3..1_000_000i64));
        if !is_discriminant(n) {
            continue;
        }
        let d = validate_discriminant(n)?;
        let x = Rational::from((rng.gen_range(-500..=500), 1000));
        let y = Rational::from((rng.gen_range(867..3000), 1000));
        let eps = Rational::from((rng.gen_range(1..250), 1000));
        let q = NeighborhoodQuery::new(d, Center::rational(x, y)?, eps)?;
        let count = cm_count(&q);
        agree.cases += 1;
        if count != cm_count_naive(&q) {
            agree.violations += 1;
            agree.detail = format!("disc {n}");
        }
        bound.cases += 1;
        let b = lemma_bound(&q).value;
        if count as f64 > b {
            bound.violations += 1;
            bound.detail = format!("disc {n}: {count} > {b}");
        }
    }
    Ok(vec![agree, bound])
}

fn modular_suite() -> Result<Vec<Check>> {
    let mut known = Check { name: "j at i, 2i, (1 + i sqrt 7)/2, i sqrt 2".into(), cases: 0, violations: 0, detail: String::new() };
    let s7 = rug::Float::with_val(160, 7).sqrt() / 2u32;
    let s2 = rug::Float::with_val(160, 2).sqrt();
    let points = [
        (UHPoint::i(160), 1728i64),
        (UHPoint::from_f64(160, 0.0, 2.0)?, 287496),
        (UHPoint::new(rug::Float::with_val(160, 0.5), s7)?, -3375),
        (UHPoint::new(rug::Float::with_val(160, 0), s2)?, 8000),
    ];
    for (tau, want) in points {
        known.cases += 1;
        let j = j_eval(&tau, 128)?.value;
        let err = cabs(&Complex::with_val(160, &j - want)) / want.abs() as f64;
        if err >= 1e-20 {
            known.violations += 1;
            known.detail = format!("j({tau:?}) relative error {err:e}");
        }
    }
    let mut growth_f = Check { name: "||j| - e^{2 pi y}| <= 2079 on the fundamental domain".into(), cases: 0, violations: 0, detail: String::new() };
    let mut growth_h = Check { name: "||j| - e^{2 pi y}| <= 287473 for y >= 1/2".into(), cases: 0, violations: 0, detail: String::new() };
    let mut sign = Check { name: "Im j < 0 for 0 < Re < 1/2 inside the domain".into(), cases: 0, violations: 0, detail: String::new() };
    for ix in 0..=20 {
        for iy in 0..=20 {
            let x = -0.5 + ix as f64 / 20.0;
            let y = 0.5 + 5.5 * iy as f64 / 20.0;
            let tau = UHPoint::from_f64(128, x, y)?;
            growth_h.cases += 1;
            let gap = growth_gap(&tau)?;
            if gap > 287473.0 {
                growth_h.violations += 1;
                growth_h.detail = format!("{tau:?}");
            }
            if x * x + y * y >= 1.0 {
                growth_f.cases += 1;
                if gap > 2079.0 {
                    growth_f.violations += 1;
                    growth_f.detail = format!("{tau:?}");
                }
                if x > 0.0 && x < 0.5 && x * x + y * y > 1.0 {
                    sign.cases += 1;
                    if sign_of_im_j(&tau, 128)? != Sign::Negative {
                        sign.violations += 1;
                        sign.detail = format!("{tau:?}");
                    }
                }
            }
        }
    }
    Ok(vec![known, growth_f, growth_h, sign])
}

fn heights_suite() -> Result<Vec<Check>> {
    let mut trivial = Check { name: "h(j) >= (pi |disc|^{1/2} - 0.01)/C(disc), 16 <= |disc| <= 1000".into(), cases: 0, violations: 0, detail: String::new() };
    let mut colmez = Check { name: "h(j) >= (3/sqrt 5) log|disc| - 9.79".into(), cases: 0, violations: 0, detail: String::new() };
    let mut root = Check { name: "h(tau) <= log |disc|^{1/2} for every reduced root".into(), cases: 0, violations: 0, detail: String::new() };
    for n in (16..=1000i64).map(|n| -n).filter(|&n| is_discriminant(n)) {
        let d = validate_discriminant(n)?;
        let h = singular_modulus_height(&d, 64)?;
        let hi = h.value + h.error_bound;
        trivial.cases += 1;
        if hi < singular_height_floor(&d) {
            trivial.violations += 1;
            trivial.detail = format!("disc {n}");
        }
        // both helpers subtract h(alpha) + log 2; add it back for alpha = 0
        let log2 = std::f64::consts::LN_2;
        colmez.cases += 1;
        if hi < lower_bound_colmez(&d, 0.0)? + log2 - 1e-12 {
            colmez.violations += 1;
            colmez.detail = format!("disc {n}");
        }
        if hi < lower_bound_trivial(&d, 0.0)? + log2 - 1e-12 {
            trivial.violations += 1;
            trivial.detail = format!("disc {n}");
        }
        let cap = 0.5 * (d.abs() as f64).ln();
        for q in enumerate_reduced_forms(&d) {
            root.cases += 1;
            if quadratic_height(&q) > cap + 1e-12 {
                root.violations += 1;
                root.detail = format!("{q:?}");
            }
        }
    }
    Ok(vec![trivial, colmez, root])
}

fn auxiliary_suite() -> Result<Vec<Check>> {
    let mut gates = Check { name: "u0(1e50) < -0.1, u1 u2 (1e50) <= 0.4896, u3(1e15) < 0.0674".into(), cases: 3, violations: 0, detail: String::new() };
    let at50 = auxiliary_functions(log_of_power_of_ten(50), DEFAULT_C1)?;
    let at15 = auxiliary_functions(log_of_power_of_ten(15), DEFAULT_C1)?;
    let u3 = at15.u3.ok_or_else(|| Error::Domain("u3 undefined at 1e15".into()))?;
    for (ok, what) in [(at50.u0 < -0.1, "u0"), (at50.u1 * at50.u2 <= 0.4896, "u1 u2"), (u3 < 0.0674, "u3")] {
        if !ok {
            gates.violations += 1;
            gates.detail = what.to_string();
        }
    }
    let mut monotone = Check { name: "u0..u3 decreasing on a 20-point log grid".into(), cases: 0, violations: 0, detail: String::new() };
    let grid = log_grid(10, 60, 20);
    let reps = grid.iter().map(|&l| auxiliary_functions(l, DEFAULT_C1)).collect::<Result<Vec<_>>>()?;
    let grid3 = log_grid(15, 60, 20);
    let reps3 = grid3.iter().map(|&l| auxiliary_functions(l, DEFAULT_C1)).collect::<Result<Vec<_>>>()?;
    let series: [(&str, Vec<f64>); 4] = [
        ("u0", reps.iter().map(|r| r.u0).collect()),
        ("u1", reps.iter().map(|r| r.u1).collect()),
        ("u2", reps.iter().map(|r| r.u2).collect()),
        ("u3", reps3.iter().filter_map(|r| r.u3).collect()),
    ];
    for (name, values) in series {
        for w in values.windows(2) {
            monotone.cases += 1;
            if w[1] >= w[0] {
                monotone.violations += 1;
                monotone.detail = name.to_string();
            }
        }
    }
    let mut power = Check { name: "E |disc|^{-1/2} < |disc|^{-0.1} for |disc| = 10^50..10^60".into(), cases: 0, violations: 0, detail: String::new() };
    for k in 50..=60 {
        power.cases += 1;
        if log_e_over_root_ratio(k)? >= -0.1 {
            power.violations += 1;
            power.detail = format!("10^{k}");
        }
    }
    let mut f256 = Check { name: "F(disc) >= 256 near 10^14".into(), cases: 0, violations: 0, detail: String::new() };
    for n in (100_000_000_000_000i64..100_000_000_000_040).map(|n| -n).filter(|&n| is_discriminant(n)) {
        f256.cases += 1;
        if big_f(&validate_discriminant(n)?) < 256 {
            f256.violations += 1;
            f256.detail = format!("disc {n}");
        }
    }
    Ok(vec![gates, monotone, power, f256])
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Forms => forms_suite()?,
        Suite::Counting => counting_suite()?,
        Suite::Modular => modular_suite()?,
        Suite::Heights => heights_suite()?,
        Suite::Auxiliary => auxiliary_suite()?,
    };
    Ok(SuiteReport { suite, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(vec![s]));
        }
        assert_eq!(Suite::parse("all").unwrap().len(), 5);
        assert!(Suite::parse("nope").is_none());
    }

    #[test]
    fn naive_class_numbers() {
        assert_eq!(naive_class_number(-3), 1);
        assert_eq!(naive_class_number(-23), 3);
        assert_eq!(naive_class_number(-71), 7);
        assert_eq!(naive_class_number(-16), 1);
    }

    #[test]
    fn auxiliary_suite_passes() {
        let r = run_suite(Suite::Auxiliary).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn forms_suite_passes() {
        let r = run_suite(Suite::Forms).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn remaining_suites_pass() {
        for s in [Suite::Counting, Suite::Modular, Suite::Heights] {
            let r = run_suite(s).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
