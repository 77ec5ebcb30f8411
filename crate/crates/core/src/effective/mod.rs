//! Explicit constants: separation data for each conjugate of `alpha`, the
//! penalty and period terms, the height upper bound, and the final bound on
//! `|disc|` beyond which `j_disc - alpha` cannot be a unit.
//!
//! Quantities that can exceed `1e30` are reported with their logarithm.

mod periods;
mod auxiliary;
mod separation;

pub use periods::{
    compute_periods, curve_j_invariant, eisenstein_e4_e6, lattice_invariants, normalize_basis, PeriodLattice,
};
pub use auxiliary::{
    log_e_over_root_ratio, log_grid, log_of_power_of_ten, auxiliary_functions, u0, u1, u2, u3, AuxiliaryReport,
    DEFAULT_C1,
};
pub use separation::{separation_constants, t_orbit, verify_lin_log, CaseTag, LinLogReport, SeparationData};

use rayon::prelude::*;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::counting::{count_report, Center, CountReport, NeighborhoodQuery};
use crate::error::{Error, Result};
use crate::forms::{class_number, enumerate_reduced_forms, form_root, is_discriminant, validate_discriminant, FactoredDiscriminant};
use crate::interval::Interval;
use crate::modular::{j_eval, j_eval_relative, j_inverse};
use crate::poly::IntPoly;
use crate::uhp::{cabs, UHPoint};

const PREC: u32 = 256;

/// Default bound on `|disc|` for the singular-modulus scan.
pub const DEFAULT_SCAN_BOUND: u64 = 2000;

#[derive(Clone, Debug)]
pub struct Embedding {
    pub alpha: Complex,
    pub xi: UHPoint,
    pub omega1: Complex,
    pub omega2: Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSource {
    /// `y^2 = 4x^3 - t x - t` with `t = 27 alpha / (alpha - 1728)`.
    Default,
    /// A rational Weierstrass model given by the caller.
    Curve,
    /// Periods given by the caller; the model height is the caller's value
    /// or, failing that, the default model's.
    SuppliedPeriods,
}

impl ModelSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelSource::Default => "default_model",
            ModelSource::Curve => "curve",
            ModelSource::SuppliedPeriods => "supplied_periods",
        }
    }
}

#[derive(Clone, Debug)]
pub enum PeriodInput {
    Default,
    Curve { g2: Rational, g3: Rational },
    Supplied { periods: Vec<(Complex, Complex)>, h_model: Option<f64> },
}

#[derive(Clone, Debug)]
pub struct ProfileOptions {
    pub prec: u32,
    pub scan_bound: u64,
    pub periods: PeriodInput,
    /// Preimage to use for the embedding it matches, instead of inverting `j`.
    pub xi: Option<UHPoint>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { prec: 128, scan_bound: DEFAULT_SCAN_BOUND, periods: PeriodInput::Default, xi: None }
    }
}

/// `alpha` with everything the bounds need about its conjugates.
#[derive(Clone, Debug)]
pub struct AlphaProfile {
    pub min_poly: IntPoly,
    pub degree: usize,
    pub h_alpha: f64,
    pub embeddings: Vec<Embedding>,
    pub h_model: f64,
    pub model_source: ModelSource,
    /// `alpha` was compared against every singular modulus with `|disc|` up to this.
    pub scan_bound: u64,
}

fn poly_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// Minimal polynomial of `t = 27 alpha / (alpha - 1728)`: since
/// `alpha = 1728 t / (t - 27)`, it is `sum p_k (1728 t)^k (t - 27)^{d-k}`.
fn model_parameter_poly(p: &IntPoly) -> Result<IntPoly> {
    let d = p.degree();
    let lin = [Integer::from(-27), Integer::from(1)];
    let mut out = vec![Integer::new(); d + 1];
    for (k, pk) in p.coeffs().iter().enumerate() {
        let mut term = vec![(pk * Integer::from(1728).pow(k as u32))];
        term = poly_mul(&term, &{
            let mut t = vec![Integer::new(); k + 1];
            t[k] = Integer::from(1);
            t
        });
        for _ in 0..(d - k) {
            term = poly_mul(&term, &lin);
        }
        for (i, c) in term.into_iter().enumerate() {
            out[i] += c;
        }
    }
    let content = out.iter().fold(Integer::new(), |g, c| g.gcd(c));
    if content == 0 {
        return Err(Error::Domain("alpha = 1728 has no default model".into()));
    }
    IntPoly::new(out.into_iter().map(|c| c / &content).collect())
}

/// Height of the projective point `(1 : g2 : g3)` for rational `g2, g3`.
pub fn projective_height(g2: &Rational, g3: &Rational) -> f64 {
    let l = g2.denom().clone().lcm(g3.denom());
    let coords = [l.clone(), (g2.numer() * (&l / Integer::from(g2.denom()))), (g3.numer() * (&l / Integer::from(g3.denom())))];
    let g = coords.iter().fold(Integer::new(), |g, c| g.gcd(c));
    let max = coords.iter().map(|c| Integer::from(c.abs_ref())).max().expect("three coordinates") / g;
    Float::with_val(PREC, &max).ln().to_f64()
}

/// Rejects `alpha` if some conjugate equals a singular modulus of degree
/// `deg(alpha)` with `|disc| <= bound`.
pub fn check_not_singular(roots: &[Complex], bound: u64) -> Result<()> {
    let degree = roots.len() as u64;
    let hits: Vec<(usize, i64)> = (3..=bound as i64)
        .into_par_iter()
        .filter(|n| is_discriminant(-n))
        .filter_map(|n| {
            let d = validate_discriminant(-n).ok()?;
            if class_number(&d) != degree {
                return None;
            }
            for q in enumerate_reduced_forms(&d) {
                let j = j_eval_relative(&form_root(&q, 192), 96).ok()?.value;
                for (k, a) in roots.iter().enumerate() {
                    let diff = cabs(&Complex::with_val(192, &j - a));
                    if diff <= 1e-15 * cabs(a).max(1.0) {
                        return Some((k, -n));
                    }
                }
            }
            None
        })
        .collect();
    match hits.first() {
        Some(&(k, disc)) => Err(Error::SingularModulus(
            format!("{} + {}i", roots[k].real().to_f64(), roots[k].imag().to_f64()),
            disc,
        )),
        None => Ok(()),
    }
}

/// Re-expresses a lattice basis so its ratio is exactly the given `xi`
/// (the normalized ratio can differ from `xi` by a boundary identification).
fn align_basis(lattice: &PeriodLattice, xi: &UHPoint, tol: f64) -> Result<(Complex, Complex)> {
    let wp = lattice.omega1.prec().0;
    let (w1, w2) = (&lattice.omega1, &lattice.omega2);
    let candidates = [
        (w1.clone(), w2.clone()),
        (w1.clone(), Complex::with_val(wp, w2 + w1)),
        (w1.clone(), Complex::with_val(wp, w2 - w1)),
        (w2.clone(), Complex::with_val(wp, -w1)),
    ];
    for (a, b) in candidates {
        let r = UHPoint::from_complex(&Complex::with_val(wp, &b / &a))?;
        if r.distance_f64(xi) < tol {
            return Ok((a, b));
        }
    }
    Err(Error::Domain(format!("period ratio does not match xi = {xi:?}")))
}

fn sort_roots(mut roots: Vec<Complex>) -> Vec<Complex> {
    roots.sort_by(|a, b| {
        let ka = (a.real().to_f64(), a.imag().to_f64());
        let kb = (b.real().to_f64(), b.imag().to_f64());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    roots
}

impl AlphaProfile {
    /// Builds the profile of the root of the primitive irreducible `min_poly`.
    pub fn build(min_poly: IntPoly, opts: &ProfileOptions) -> Result<Self> {
        let prec = opts.prec;
        let degree = min_poly.degree();
        let h_alpha = min_poly.root_height(prec)?;
        let roots = sort_roots(min_poly.roots(prec + 32)?);
        check_not_singular(&roots, opts.scan_bound)?;
        let tol = (-(prec as f64) / 4.0).exp2();

        let xis: Vec<UHPoint> = roots
            .par_iter()
            .map(|a| -> Result<UHPoint> {
                if let Some(x) = &opts.xi {
                    let j = j_eval(&x.with_prec(prec + 32), prec)?.value;
                    if cabs(&Complex::with_val(prec + 32, &j - a)) < 1e-20 * cabs(a).max(1.0) {
                        if !x.in_closed_fundamental_domain(prec / 2) {
                            return Err(Error::Domain("supplied xi is not in the closed fundamental domain".into()));
                        }
                        return Ok(x.with_prec(prec + 32));
                    }
                }
                j_inverse(a, prec)
            })
            .collect::<Result<_>>()?;
        if let Some(x) = &opts.xi {
            let matched = xis.iter().any(|p| p.distance_f64(x) < 1e-20);
            if !matched {
                return Err(Error::Domain("supplied xi does not map to a conjugate of alpha".into()));
            }
        }

        let default_model_height = || -> Result<f64> {
            let t_poly = model_parameter_poly(&min_poly)?;
            Ok(1f64.max(t_poly.root_height(prec)?).max(h_alpha))
        };

        let (lattices, h_model, model_source): (Vec<(Complex, Complex)>, f64, ModelSource) = match &opts.periods {
            PeriodInput::Default => {
                let lat = roots
                    .par_iter()
                    .zip(xis.par_iter())
                    .map(|(a, xi)| {
                        let wp = prec + 32;
                        let den = Complex::with_val(wp, a - 1728u32);
                        let t = Complex::with_val(wp, Complex::with_val(wp, a * 27u32) / den);
                        let l = compute_periods(&t, &t, prec)?;
                        align_basis(&l, xi, tol)
                    })
                    .collect::<Result<Vec<_>>>()?;
                (lat, default_model_height()?, ModelSource::Default)
            }
            PeriodInput::Curve { g2, g3 } => {
                if degree != 1 {
                    return Err(Error::Unsupported("a rational curve model needs a rational alpha".into()));
                }
                let alpha = Rational::from((-Integer::from(&min_poly.coeffs()[0]), min_poly.coeffs()[1].clone()));
                let g2c = Rational::from(g2 * g2) * g2;
                let disc = &g2c - Rational::from(g3 * g3) * 27u32;
                if disc == 0 {
                    return Err(Error::SingularCurve);
                }
                if Rational::from(&g2c * 1728u32) / disc != alpha {
                    return Err(Error::Domain("curve j-invariant differs from alpha".into()));
                }
                let wp = prec + 32;
                let l = compute_periods(&Complex::with_val(wp, g2), &Complex::with_val(wp, g3), prec)?;
                let basis = align_basis(&l, &xis[0], tol)?;
                let h = 1f64.max(projective_height(g2, g3)).max(h_alpha);
                (vec![basis], h, ModelSource::Curve)
            }
            PeriodInput::Supplied { periods, h_model } => {
                if periods.len() != degree {
                    return Err(Error::MissingEmbeddingData(format!(
                        "{} period pairs for {degree} embeddings",
                        periods.len()
                    )));
                }
                let lat = periods
                    .iter()
                    .zip(&xis)
                    .map(|(p, xi)| {
                        let l = normalize_basis(&p.0, &p.1)?;
                        align_basis(&l, xi, tol)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let h = match h_model {
                    Some(h) => h.max(1.0),
                    None => default_model_height()?,
                };
                (lat, h, ModelSource::SuppliedPeriods)
            }
        };

        let embeddings = roots
            .into_iter()
            .zip(xis)
            .zip(lattices)
            .map(|((alpha, xi), (omega1, omega2))| Embedding { alpha, xi, omega1, omega2 })
            .collect();
        Ok(AlphaProfile { min_poly, degree, h_alpha, embeddings, h_model, model_source, scan_bound: opts.scan_bound })
    }

    fn check_complete(&self) -> Result<()> {
        if self.embeddings.is_empty() || self.embeddings.len() != self.degree {
            return Err(Error::MissingEmbeddingData(format!(
                "{} embeddings for degree {}",
                self.embeddings.len(),
                self.degree
            )));
        }
        Ok(())
    }
}

/// `c2 = 2^50 3^43 5^18 D^6 h^2`.
#[derive(Clone, Debug)]
pub struct C2Constant {
    /// `2^50 3^43 5^18 D^6`, exact.
    pub integer_part: Integer,
    pub h_model: f64,
    pub value: Interval,
    pub log_value: f64,
}

pub fn c2_constant(degree: usize, h_model: f64) -> Result<C2Constant> {
    if degree == 0 || !(h_model >= 1.0) {
        return Err(Error::Domain(format!("c2 needs degree >= 1 and h >= 1, got {degree}, {h_model}")));
    }
    let integer_part = Integer::from(Integer::u_pow_u(2, 50))
        * Integer::from(Integer::u_pow_u(3, 43))
        * Integer::from(Integer::u_pow_u(5, 18))
        * Integer::from(degree).pow(6u32);
    let h = Interval::from_f64(PREC, h_model);
    let value = Interval::from_integer(PREC, &integer_part).mul(&h.square());
    let log_value = value.ln()?.mid_f64();
    Ok(C2Constant { integer_part, h_model, value, log_value })
}

/// `log max(1, max 1/c)`.
pub fn pen_from_constants(c_values: &[f64]) -> f64 {
    c_values.iter().map(|c| (1.0 / c).max(1.0).ln()).fold(0.0, f64::max)
}

/// `log max(1, |omega1|, |omega2|)` over all embeddings.
pub fn period_term(periods: &[(Complex, Complex)]) -> f64 {
    periods.iter().map(|(a, b)| cabs(a).max(cabs(b)).max(1.0).ln()).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct PenaltyReport {
    pub pen: f64,
    pub m: f64,
    pub separations: Vec<SeparationData>,
    /// Whether `Pen >= log 12`, which the bounds assume.
    pub pen_at_least_log12: bool,
}

pub fn pen_and_m(profile: &AlphaProfile) -> Result<PenaltyReport> {
    profile.check_complete()?;
    let separations = profile
        .embeddings
        .par_iter()
        .map(|e| {
            let j = j_eval(&e.xi, 128)?.value;
            separation_constants(&e.xi, &j)
        })
        .collect::<Result<Vec<_>>>()?;
    let pen = pen_from_constants(&separations.iter().map(|s| s.c_xi).collect::<Vec<_>>());
    let periods: Vec<(Complex, Complex)> = profile.embeddings.iter().map(|e| (e.omega1.clone(), e.omega2.clone())).collect();
    let m = period_term(&periods);
    Ok(PenaltyReport { pen, m, separations, pen_at_least_log12: pen >= 12f64.ln() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountChoice {
    Exact,
    Lemma,
    Corollary,
}

impl CountChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountChoice::Exact => "exact",
            CountChoice::Lemma => "lemma_bound",
            CountChoice::Corollary => "corollary_bound",
        }
    }

    fn pick(&self, r: &CountReport) -> f64 {
        match self {
            CountChoice::Exact => r.exact_count as f64,
            CountChoice::Lemma => r.lemma_bound.value,
            CountChoice::Corollary => r.corollary_bound.value,
        }
    }
}

/// Count reports for every center `M xi_sigma`, in embedding order.
pub fn orbit_count_reports(d: &FactoredDiscriminant, profile: &AlphaProfile, eps: &Rational) -> Result<Vec<CountReport>> {
    let mut out = Vec::new();
    for e in &profile.embeddings {
        for p in t_orbit(&e.xi) {
            let q = NeighborhoodQuery::new(*d, Center::from_point(&p)?, eps.clone())?;
            out.push(count_report(&q));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct HeightUpperBound {
    /// Upper bound for `h(j - alpha)`.
    pub value: f64,
    pub log_value: f64,
    pub count_sum: f64,
    pub count_choice: CountChoice,
    pub counting_term: f64,
    pub pen_term: f64,
    pub period_term: f64,
    pub eps_term: f64,
    pub certified: bool,
    pub unmet: Vec<String>,
}

/// `c2 (sum counts)/(16 C(disc)) (log|disc|)^4 + 5 Pen + 4 M + |log eps|`.
pub fn height_upper_bound(
    d: &FactoredDiscriminant,
    profile: &AlphaProfile,
    penalty: &PenaltyReport,
    eps: &Rational,
    counts: &[CountReport],
    choice: CountChoice,
) -> Result<HeightUpperBound> {
    profile.check_complete()?;
    let centers: usize = profile.embeddings.iter().map(|e| t_orbit(&e.xi).len()).sum();
    if counts.len() != centers {
        return Err(Error::MissingEmbeddingData(format!("{} count reports for {centers} centers", counts.len())));
    }
    let mut unmet = Vec::new();
    if *eps <= 0 || *eps >= Rational::from((1, 4)) {
        unmet.push("0 < eps < 1/4".to_string());
    }
    let c2 = c2_constant(profile.degree, profile.h_model)?;
    let abs = Interval::from_int(PREC, d.abs() as i64);
    let log_abs = abs.ln()?;
    // |disc| >= max(2D, e^{12 pi h})
    let need = Interval::pi(PREC).mul_int(12).mul(&Interval::from_f64(PREC, profile.h_model));
    if (d.abs() as f64) < 2.0 * profile.degree as f64 || log_abs.hi() < need.lo() {
        unmet.push("|disc| >= max(2D, e^{12 pi h})".to_string());
    }
    let count_sum: f64 = counts.iter().map(|r| choice.pick(r)).sum();
    let counting = c2
        .value
        .mul(&Interval::from_f64(PREC, count_sum))
        .div(&Interval::from_int(PREC, 16 * class_number(d) as i64))?
        .mul(&log_abs.square().square());
    let pen = Interval::from_f64(PREC, penalty.pen).mul_int(5);
    let per = Interval::from_f64(PREC, penalty.m).mul_int(4);
    let eps_i = Interval::from_rational(PREC, eps);
    let eps_term = eps_i.ln()?.abs();
    let total = counting.add(&pen).add(&per).add(&eps_term);
    let up = |i: &Interval| i.hi().to_f64_round(Round::Up);
    Ok(HeightUpperBound {
        value: up(&total),
        log_value: total.ln().map(|l| up(&l)).unwrap_or(f64::NEG_INFINITY),
        count_sum,
        count_choice: choice,
        counting_term: up(&counting),
        pen_term: up(&pen),
        period_term: up(&per),
        eps_term: up(&eps_term),
        certified: unmet.is_empty(),
        unmet,
    })
}

/// A constant reported both directly and by its logarithm.
#[derive(Clone, Debug)]
pub struct BigReal {
    pub value: Interval,
    pub log_value: f64,
}

impl BigReal {
    fn new(value: Interval) -> Result<Self> {
        let log_value = value.ln()?.hi().to_f64_round(Round::Up);
        Ok(BigReal { value, log_value })
    }

    pub fn upper_f64(&self) -> f64 {
        self.value.hi().to_f64_round(Round::Up)
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub degree: usize,
    pub h_alpha: f64,
    pub h_model: f64,
    pub pen: f64,
    pub m: f64,
    pub c2: C2Constant,
    /// `4 D c2 + 5 Pen + 4 M`.
    pub c_prime: BigReal,
    /// `C' + h(alpha) + log 2 + 0.01`.
    pub c_route_const: BigReal,
    /// `2 D c2 + 6 Pen + 4 M + h(alpha) + log 2 + 0.01`.
    pub c_route_final: BigReal,
    pub c_final: BigReal,
    /// `log e^{15 C} = 15 C`.
    pub log_bound_e15c: f64,
    /// Logs of `10^50`, `e^{10 sqrt5/3 (C + 1)}`, `(10 D c2/(2 pi))^10`, `(10 D c2/(4 pi))^10`.
    pub log_term_1e50: f64,
    pub log_term_exp: f64,
    pub log_term_c2_2pi: f64,
    pub log_term_c2_4pi: f64,
    pub log_bound_max_form: f64,
    /// `15 C` is at least each of the max-form terms.
    pub e15c_dominates: bool,
}

/// Both assemblies of `C`, `e^{15 C}` in log form, and the three-term maximum.
pub fn final_delta_bound(profile: &AlphaProfile, penalty: &PenaltyReport) -> Result<BoundReport> {
    profile.check_complete()?;
    let c2 = c2_constant(profile.degree, profile.h_model)?;
    let dc2 = c2.value.mul_int(profile.degree as i64);
    let pen = Interval::from_f64(PREC, penalty.pen);
    let m = Interval::from_f64(PREC, penalty.m);
    let tail = Interval::from_f64(PREC, profile.h_alpha)
        .add(&Interval::ln2(PREC))
        .add(&Interval::from_rational(PREC, &Rational::from((1, 100))));
    let c_prime = dc2.mul_int(4).add(&pen.mul_int(5)).add(&m.mul_int(4));
    let c_route_const = c_prime.add(&tail);
    let c_route_final = dc2.mul_int(2).add(&pen.mul_int(6)).add(&m.mul_int(4)).add(&tail);
    let c_final = c_route_const.max(&c_route_final);
    let up = |i: &Interval| i.hi().to_f64_round(Round::Up);
    let log_bound_e15c = up(&c_final.mul_int(15));
    let log_term_1e50 = up(&Interval::from_int(PREC, 10).ln()?.mul_int(50));
    let ten_root5_over3 = Interval::from_int(PREC, 5).sqrt()?.mul_int(10).div(&Interval::from_int(PREC, 3))?;
    let log_term_exp = up(&ten_root5_over3.mul(&c_final.add(&Interval::from_int(PREC, 1))));
    let c2_term = |denominator: Interval| -> Result<f64> {
        Ok(up(&dc2.mul_int(10).div(&denominator)?.ln()?.mul_int(10)))
    };
    let log_term_c2_2pi = c2_term(Interval::pi(PREC).mul_int(2))?;
    let log_term_c2_4pi = c2_term(Interval::pi(PREC).mul_int(4))?;
    let log_bound_max_form = log_term_1e50.max(log_term_exp).max(log_term_c2_2pi).max(log_term_c2_4pi);
    let lower_15c = c_final.mul_int(15).lo().to_f64_round(Round::Down);
    let e15c_dominates = [log_term_1e50, log_term_exp, log_term_c2_2pi, log_term_c2_4pi].iter().all(|&t| lower_15c >= t);
    Ok(BoundReport {
        degree: profile.degree,
        h_alpha: profile.h_alpha,
        h_model: profile.h_model,
        pen: penalty.pen,
        m: penalty.m,
        c2,
        c_prime: BigReal::new(c_prime)?,
        c_route_const: BigReal::new(c_route_const)?,
        c_route_final: BigReal::new(c_route_final)?,
        c_final: BigReal::new(c_final)?,
        log_bound_e15c,
        log_term_1e50,
        log_term_exp,
        log_term_c2_2pi,
        log_term_c2_4pi,
        log_bound_max_form,
        e15c_dominates,
    })
}

/// One line of the derivation that turns the counting bound into the
/// closed-form height bound, evaluated at a concrete discriminant.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub label: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub eps: f64,
    pub steps: Vec<ChainStep>,
    pub hypotheses: Vec<(&'static str, bool)>,
}

/// Evaluates each displayed estimate of the derivation with
/// `eps = C(disc) / (E |disc|^{1/2})`, for a degree-`degree` `alpha` whose
/// `c2`, `Pen` and `M` are given. Consecutive steps must not decrease.
pub fn corollary_chain(d: &FactoredDiscriminant, degree: usize, c2: f64, pen: f64, m: f64) -> ChainReport {
    let n = d.abs() as f64;
    let root = n.sqrt();
    let lg = n.ln();
    let ll = root.ln().ln();
    let f = crate::arith::big_f(d) as f64;
    let e = f * lg.powi(4);
    let ch = class_number(d) as f64;
    let eps = ch / (e * root);
    let k = degree as f64 * c2;
    let p = 5.0 * pen + 4.0 * m;
    let log_tail = (e * root / ch).ln();
    let main = k * e / (2.0 * ch);
    let pi = std::f64::consts::PI;
    let steps = vec![
        ChainStep {
            label: "counting bound inserted",
            value: k * 4.0 * f * (32.0 * root * eps * eps * ll + 11.0 * root * eps + 2.0) / (16.0 * ch) * lg.powi(4)
                + p
                + eps.ln().abs(),
        },
        ChainStep {
            label: "expanded",
            value: k * e * 128.0 * root * ll / (16.0 * ch) * eps * eps + k * e * 44.0 * root / (16.0 * ch) * eps + main + p + log_tail,
        },
        ChainStep { label: "simplified", value: k * 8.0 * ll / f * ch / (lg.powi(4) * root) + 3.0 * k + main + p + log_tail },
        ChainStep { label: "F lower bound", value: k * 0.5 * ch / (lg.powi(4) * root) + 3.0 * k + main + p + log_tail },
        ChainStep { label: "class number bound", value: k / (2.0 * pi) * (2.0 + lg) / lg.powi(4) + 3.0 * k + main + p + log_tail },
        ChainStep { label: "evaluated at 10^14", value: k / (2.0 * pi) * 35.0 / 32f64.powi(4) + 3.0 * k + main + p + log_tail },
        ChainStep { label: "final form", value: main + log_tail + 4.0 * k + p },
    ];
    let hypotheses = vec![
        ("|disc| >= 10^14", n >= 1e14),
        ("F >= 256", f >= 256.0),
        ("F >= 18 loglog |disc|^{1/2}", f >= 18.0 * ll),
        ("F >= |disc|^{0.34/loglog |disc|^{1/2}}", f.ln() >= 0.34 / ll * lg),
        ("C(disc) <= |disc|^{1/2}(2 + log|disc|)/pi", ch <= root * (2.0 + lg) / pi),
        ("eps < 2e-3", eps < 2e-3),
    ];
    ChainReport { eps, steps, hypotheses }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integer_profile(alpha: i64) -> AlphaProfile {
        AlphaProfile::build(IntPoly::from_leading_first(&[1, -alpha]).unwrap(), &ProfileOptions::default()).unwrap()
    }

    #[test]
    fn c2_examples() {
        let base = Integer::from(Integer::u_pow_u(2, 50)) * Integer::from(Integer::u_pow_u(3, 43)) * Integer::from(Integer::u_pow_u(5, 18));
        let one = c2_constant(1, 1.0).unwrap();
        assert_eq!(one.integer_part, base);
        assert!((one.value.mid_f64() / 1.409852939643675e48 - 1.0).abs() < 1e-14);
        assert_eq!(c2_constant(2, 1.0).unwrap().integer_part, Integer::from(&base * 64u32));
        let h2 = c2_constant(1, 2.0).unwrap();
        assert!((h2.value.mid_f64() / one.value.mid_f64() - 4.0).abs() < 1e-14);
        assert!((one.log_value - base.to_f64().ln()).abs() < 1e-12);
        assert!(c2_constant(1, 0.5).is_err());
    }

    #[test]
    fn pen_and_period_examples() {
        assert!((pen_from_constants(&[1.0 / 20.0]) - 20f64.ln()).abs() < 1e-14);
        assert!((pen_from_constants(&[1.0 / 20.0, 1.0 / 50.0]) - 50f64.ln()).abs() < 1e-14);
        assert_eq!(pen_from_constants(&[3.0]), 0.0);
        let one = Complex::with_val(64, 1);
        let i = Complex::with_val(64, (0, 1));
        assert_eq!(period_term(&[(one, i)]), 0.0);
    }

    #[test]
    fn model_parameter_for_rational_alpha() {
        // alpha = 2: t = 54 / (-1726) = -27/863
        let p = model_parameter_poly(&IntPoly::from_leading_first(&[1, -2]).unwrap()).unwrap();
        assert_eq!(p.coeffs(), &[Integer::from(27), Integer::from(863)]);
        assert!((p.root_height(64).unwrap() - 863f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn projective_height_of_rationals() {
        let h = projective_height(&Rational::from((1, 2)), &Rational::from((3, 4)));
        // (4 : 2 : 3)
        assert!((h - 4f64.ln()).abs() < 1e-15);
        assert_eq!(projective_height(&Rational::from(0), &Rational::from(0)), 0.0);
    }

    #[test]
    fn singular_moduli_are_rejected() {
        for (alpha, disc) in [(1728, -4), (-3375, -7), (287496, -16), (8000, -8)] {
            let err = AlphaProfile::build(IntPoly::from_leading_first(&[1, -alpha]).unwrap(), &ProfileOptions::default());
            assert!(matches!(err, Err(Error::SingularModulus(_, d)) if d == disc), "{alpha}");
        }
        // class polynomial of discriminant -15
        let p = IntPoly::from_leading_first(&[1, 191025, -121287375]).unwrap();
        assert!(matches!(AlphaProfile::build(p, &ProfileOptions::default()), Err(Error::SingularModulus(_, -15))));
    }

    #[test]
    fn pipeline_for_two() {
        let prof = integer_profile(2);
        assert_eq!(prof.degree, 1);
        let e = &prof.embeddings[0];
        let j = j_eval(&e.xi, 128).unwrap().value;
        assert!(cabs(&Complex::with_val(128, &j - 2u32)) < 1e-20);
        let ratio = UHPoint::from_complex(&Complex::with_val(160, &e.omega2 / &e.omega1)).unwrap();
        assert!(ratio.distance_f64(&e.xi) < 1e-25);
        assert!((prof.h_model - 863f64.ln()).abs() < 1e-12);
        let pen = pen_and_m(&prof).unwrap();
        assert_eq!(pen.separations[0].case_tag, CaseTag::BoundaryNonI);
        let b = final_delta_bound(&prof, &pen).unwrap();
        assert!(b.e15c_dominates);
        assert!(b.log_bound_e15c >= b.log_term_1e50);
        assert!(b.c_route_const.upper_f64() >= b.c_route_final.upper_f64());
        assert!(b.log_term_c2_2pi > b.log_term_c2_4pi);
    }

    #[test]
    fn supplied_and_curve_periods_agree_with_default() {
        let base = integer_profile(2);
        let e = &base.embeddings[0];
        let opts = ProfileOptions {
            periods: PeriodInput::Supplied { periods: vec![(e.omega1.clone(), e.omega2.clone())], h_model: None },
            ..Default::default()
        };
        let p = AlphaProfile::build(IntPoly::from_leading_first(&[1, -2]).unwrap(), &opts).unwrap();
        assert_eq!(p.model_source, ModelSource::SuppliedPeriods);
        assert_eq!(p.h_model, base.h_model);
        let t = Rational::from((-27, 863));
        let opts = ProfileOptions { periods: PeriodInput::Curve { g2: t.clone(), g3: t }, ..Default::default() };
        let c = AlphaProfile::build(IntPoly::from_leading_first(&[1, -2]).unwrap(), &opts).unwrap();
        assert!((c.h_model - base.h_model).abs() < 1e-12);
        // the basis with ratio xi is unique up to sign
        let w = &c.embeddings[0].omega1;
        let diff = cabs(&Complex::with_val(128, w - &e.omega1)).min(cabs(&Complex::with_val(128, w + &e.omega1)));
        assert!(diff < 1e-25, "{diff}");
    }

    #[test]
    fn final_bound_arithmetic() {
        let mut prof = integer_profile(2);
        prof.h_model = 1.0;
        prof.h_alpha = 0.0;
        let pen = PenaltyReport { pen: 20f64.ln(), m: 0.0, separations: vec![], pen_at_least_log12: true };
        let b = final_delta_bound(&prof, &pen).unwrap();
        let c2 = c2_constant(1, 1.0).unwrap().value;
        let want = c2
            .mul_int(4)
            .add(&Interval::from_f64(PREC, 20f64.ln()).mul_int(5))
            .add(&Interval::ln2(PREC))
            .add(&Interval::from_rational(PREC, &Rational::from((1, 100))));
        assert!(b.c_route_const.value.lo() <= want.hi() && want.lo() <= b.c_route_const.value.hi());
        assert!((b.log_bound_e15c / (15.0 * want.mid_f64()) - 1.0).abs() < 1e-14);
        // doubling h quadruples the c2 part
        prof.h_model = 2.0;
        let b2 = final_delta_bound(&prof, &pen).unwrap();
        let rest = Interval::from_f64(PREC, 20f64.ln()).mul_int(5).add(&Interval::ln2(PREC)).add(&Interval::from_f64(PREC, 0.01));
        let part1 = b.c_route_const.value.sub(&rest).mid_f64();
        let part2 = b2.c_route_const.value.sub(&rest).mid_f64();
        assert!((part2 / part1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn height_bound_assembly() {
        let prof = integer_profile(2);
        let pen = pen_and_m(&prof).unwrap();
        let d = validate_discriminant(-100_003).unwrap();
        let eps = Rational::from((1, 1000));
        let counts = orbit_count_reports(&d, &prof, &eps).unwrap();
        let zero: Vec<CountReport> = counts
            .iter()
            .cloned()
            .map(|mut r| {
                r.exact_count = 0;
                r
            })
            .collect();
        let h = height_upper_bound(&d, &prof, &pen, &eps, &zero, CountChoice::Exact).unwrap();
        let want = 5.0 * pen.pen + 4.0 * pen.m + 1000f64.ln();
        assert!((h.value - want).abs() < 1e-9 && h.value >= want - 1e-12);
        assert!(!h.certified);
        let ch = class_number(&d);
        let mut full = zero.clone();
        full[0].exact_count = 16 * ch;
        let h = height_upper_bound(&d, &prof, &pen, &eps, &full, CountChoice::Exact).unwrap();
        let c2 = c2_constant(1, prof.h_model).unwrap().value.mid_f64();
        let want = c2 * (100_003f64).ln().powi(4) + want;
        assert!((h.value / want - 1.0).abs() < 1e-12);
        assert!(height_upper_bound(&d, &prof, &pen, &eps, &full[1..], CountChoice::Exact).is_err());
    }
}
