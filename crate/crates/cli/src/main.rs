mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::{Complex, Float, Integer};

use moduli_gauge::counting::{count_report, parse_rational, Center, NeighborhoodQuery};
use moduli_gauge::effective::{final_delta_bound, pen_and_m, AlphaProfile, PeriodInput, ProfileOptions, DEFAULT_SCAN_BOUND};
use moduli_gauge::forms::{class_number, enumerate_reduced_forms, form_root, is_discriminant, validate_discriminant};
use moduli_gauge::heights::{
    height_of_difference_with_integer, lower_bound_colmez, lower_bound_trivial, singular_height_floor,
    singular_modulus_height,
};
use moduli_gauge::modular::{j_derivative, j_eval, j_inverse, j_prime, Accuracy};
use moduli_gauge::poly::IntPoly;
use moduli_gauge::uhp::{cabs, UHPoint};
use moduli_gauge::verify::{run_suite, Suite};
use moduli_gauge::Error;

use output::{ulp, Record};

#[derive(Parser, Debug)]
#[command(name = "moduli-gauge", version, about = "Singular moduli, counting bounds and effective discriminant bounds")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "MODULI_GAUGE_PRECISION", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(32..=1000))]
    precision: u32,

    /// Output format; tabular commands default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced forms and class number of a discriminant.
    Forms {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Class numbers for every discriminant with |disc| in LO:HI.
    Classno {
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Write the CSV table here instead of stdout.
        #[arg(long)]
        table: Option<std::path::PathBuf>,
    },
    /// Roots of reduced forms within EPS of XI, with both upper bounds.
    Count {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Center as `re,im`; decimals and fractions are read exactly.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        eps: String,
    },
    /// j or one of its first two derivatives at TAU, or j^-1 with --inverse.
    J {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "inverse")]
        tau: Option<String>,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=2))]
        derivative: u32,
        #[arg(long, requires = "value", conflicts_with = "tau")]
        inverse: bool,
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
    },
    /// Height of the singular modulus and the lower bounds for h(j - alpha).
    Height {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// A rational integer alpha.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        alpha: i64,
    },
    /// Separation data, periods and the final discriminant bound for alpha.
    Effective {
        /// Minimal polynomial of alpha, leading coefficient first, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        alpha_poly: String,
        /// One `w1re,w1im,w2re,w2im` per embedding, separated by `;`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "curve")]
        periods: Option<String>,
        /// Model height to use with --periods.
        #[arg(long, requires = "periods")]
        h_model: Option<f64>,
        /// Rational Weierstrass model `g2,g3` with j = alpha.
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
    },
    /// Run property suites; exits 1 on any violation.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonDiscriminant(_)
            | Error::Domain(_)
            | Error::CornerPoint
            | Error::SingularCurve
            | Error::SingularModulus(..)
            | Error::HypothesisUnmet(_)
            | Error::MissingEmbeddingData(_)
            | Error::Unsupported(_)
            | Error::NearCriticalPoint(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

/// The flag says whether a violation was found.
type Outcome = Result<(Emit, bool), Failure>;

/// What to print.
enum Emit {
    Record(Record),
    Table(Vec<String>, Vec<Vec<String>>),
    Both(Record, Vec<String>, Vec<Vec<String>>),
}

fn pair(s: &str) -> Result<(&str, &str), Failure> {
    s.split_once(',').ok_or_else(|| Failure::Usage(format!("expected re,im but got {s:?}")))
}

fn parse_complex(s: &str, prec: u32) -> Result<Complex, Failure> {
    let (re, im) = pair(s)?;
    Ok(Complex::with_val(prec, (float(re, prec)?, float(im, prec)?)))
}

fn float(s: &str, prec: u32) -> Result<Float, Failure> {
    let r = parse_rational(s)?;
    Ok(Float::with_val(prec, &r))
}

fn parse_point(s: &str, prec: u32) -> Result<UHPoint, Failure> {
    let (re, im) = pair(s)?;
    Ok(UHPoint::from_rationals(prec, &parse_rational(re)?, &parse_rational(im)?)?)
}

fn forms_cmd(disc: i64, prec: u32) -> Outcome {
    let d = validate_discriminant(disc)?;
    let forms = enumerate_reduced_forms(&d);
    let header = ["a", "b", "c", "root_re", "root_im"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for q in &forms {
        let root = form_root(q, prec);
        let mut r = Record::new();
        r.int("a", q.a).int("b", q.b).int("c", q.c);
        r.big("root_re", &root.re, 0.0).big("root_im", &root.im, ulp(root.im_f64()));
        rows.push(vec![q.a.to_string(), q.b.to_string(), q.c.to_string(), root.re_f64().to_string(), root.im_f64().to_string()]);
        items.push(r);
    }
    let mut r = Record::new();
    r.int("disc", d.delta())
        .int("fundamental", d.fundamental())
        .int("conductor", d.conductor())
        .int("modified_conductor", d.modified_conductor())
        .int("class_number", class_number(&d))
        .list("forms", items);
    Ok((Emit::Both(r, header, rows), false))
}

fn classno_cmd(range: &str) -> Result<(Vec<String>, Vec<Vec<String>>), Failure> {
    let (lo, hi) = range.split_once(':').ok_or_else(|| Failure::Usage(format!("expected LO:HI but got {range:?}")))?;
    let parse = |s: &str| s.trim().parse::<i64>().map(i64::unsigned_abs).map_err(|_| Failure::Usage(format!("bad bound {s:?}")));
    let (a, b) = (parse(lo)?, parse(hi)?);
    let (lo, hi) = (a.min(b).max(3), a.max(b));
    if hi > moduli_gauge::forms::MAX_ABS_DISCRIMINANT {
        return Err(Failure::Usage(format!("|disc| above {}", moduli_gauge::forms::MAX_ABS_DISCRIMINANT)));
    }
    let rows: Vec<Vec<String>> = (lo..=hi)
        .into_par_iter()
        .filter(|&n| is_discriminant(-(n as i64)))
        .map(|n| {
            let d = validate_discriminant(-(n as i64)).expect("checked");
            vec![d.delta().to_string(), d.fundamental().to_string(), d.conductor().to_string(), class_number(&d).to_string()]
        })
        .collect();
    let header = ["disc", "fundamental", "conductor", "class_number"].map(String::from).to_vec();
    Ok((header, rows))
}

fn count_cmd(disc: i64, xi: &str, eps: &str) -> Outcome {
    let d = validate_discriminant(disc)?;
    let (re, im) = pair(xi)?;
    let center = Center::rational(parse_rational(re)?, parse_rational(im)?)?;
    let q = NeighborhoodQuery::new(d, center, parse_rational(eps)?)?;
    let rep = count_report(&q);
    let mut r = Record::new();
    r.int("disc", d.delta())
        .int("exact_count", rep.exact_count)
        .real("lemma_bound", rep.lemma_bound.value, ulp(rep.lemma_bound.value))
        .flag("lemma_bound_certified", rep.lemma_bound.certified)
        .real("corollary_bound", rep.corollary_bound.value, ulp(rep.corollary_bound.value))
        .flag("corollary_bound_certified", rep.corollary_bound.certified)
        .real("a_min", rep.a_interval.0, ulp(rep.a_interval.0))
        .real("a_max", rep.a_interval.1, ulp(rep.a_interval.1))
        .flag("certified", rep.certified);
    if !rep.certified {
        r.text("status", "non-certified");
    }
    let violation = rep.lemma_bound.certified && rep.exact_count as f64 > rep.lemma_bound.value;
    Ok((Emit::Record(r), violation))
}

fn j_cmd(tau: Option<&str>, derivative: u32, value: Option<&str>, prec: u32) -> Outcome {
    let mut r = Record::new();
    match (tau, value) {
        (Some(t), _) => {
            let tau = parse_point(t, prec)?;
            let res = j_derivative(&tau, derivative, Accuracy::Absolute(prec))?;
            r.int("derivative", derivative)
                .big("value_re", res.value.real(), res.error_bound)
                .big("value_im", res.value.imag(), res.error_bound)
                .bound("error_bound", res.error_bound);
        }
        (None, Some(v)) => {
            let z = parse_complex(v, prec + 64)?;
            let tau = j_inverse(&z, prec)?;
            let residual = cabs(&Complex::with_val(prec + 64, &j_eval(&tau, prec + 32)?.value - &z));
            // first-order estimate of the distance to the true preimage
            let slope = cabs(&j_prime(&tau, 64)?.value);
            let err = if slope > 0.0 { 2.0 * residual / slope } else { f64::INFINITY };
            r.big("tau_re", &tau.re, err)
                .big("tau_im", &tau.im, err)
                .real("residual", residual, ulp(residual));
        }
        (None, None) => return Err(Failure::Usage("need --tau or --inverse --value".into())),
    }
    Ok((Emit::Record(r), false))
}

fn height_cmd(disc: i64, alpha: i64, prec: u32) -> Outcome {
    let d = validate_discriminant(disc)?;
    let h = singular_modulus_height(&d, prec.min(256))?;
    let h_alpha = (alpha.unsigned_abs().max(1) as f64).ln();
    let mut r = Record::new();
    r.int("disc", d.delta())
        .int("class_number", class_number(&d))
        .int("alpha", alpha)
        .real("height", h.value, h.error_bound)
        .real("height_floor", singular_height_floor(&d), 1e-12)
        .real("h_alpha", h_alpha, ulp(h_alpha));
    let mut violation = h.value + h.error_bound < singular_height_floor(&d) && d.abs() >= 16;
    let diff = height_of_difference_with_integer(&d, alpha, prec.min(256))?;
    r.real("height_difference", diff.value, diff.error_bound);
    let colmez = lower_bound_colmez(&d, h_alpha)?;
    r.real("lower_bound_colmez", colmez, ulp(colmez));
    violation |= diff.value + diff.error_bound < colmez;
    match lower_bound_trivial(&d, h_alpha) {
        Ok(v) => {
            r.real("lower_bound_trivial", v, ulp(v));
            violation |= diff.value + diff.error_bound < v;
        }
        Err(e) => {
            r.text("lower_bound_trivial_unmet", e.to_string()).text("status", "non-certified");
        }
    }
    Ok((Emit::Record(r), violation))
}

#[allow(clippy::too_many_arguments)]
fn effective_cmd(
    alpha_poly: &str,
    periods: Option<&str>,
    h_model: Option<f64>,
    curve: Option<&str>,
    xi: Option<&str>,
    scan_bound: u64,
    prec: u32,
) -> Outcome {
    let poly = IntPoly::parse(alpha_poly)?;
    let periods = match (periods, curve) {
        (Some(list), _) => {
            let mut out = Vec::new();
            for item in list.split(';').filter(|s| !s.trim().is_empty()) {
                let parts: Vec<&str> = item.split(',').collect();
                if parts.len() != 4 {
                    return Err(Failure::Usage(format!("period pair needs four numbers: {item:?}")));
                }
                let w1 = Complex::with_val(prec, (float(parts[0], prec)?, float(parts[1], prec)?));
                let w2 = Complex::with_val(prec, (float(parts[2], prec)?, float(parts[3], prec)?));
                out.push((w1, w2));
            }
            PeriodInput::Supplied { periods: out, h_model }
        }
        (None, Some(c)) => {
            let (g2, g3) = pair(c)?;
            PeriodInput::Curve { g2: parse_rational(g2)?, g3: parse_rational(g3)? }
        }
        (None, None) => PeriodInput::Default,
    };
    let xi = xi.map(|s| parse_point(s, prec)).transpose()?;
    let opts = ProfileOptions { prec, scan_bound, periods, xi };
    let profile = AlphaProfile::build(poly, &opts)?;
    let penalty = pen_and_m(&profile)?;
    let rep = final_delta_bound(&profile, &penalty)?;

    let mut embeddings = Vec::new();
    for (e, s) in profile.embeddings.iter().zip(&penalty.separations) {
        let mut r = Record::new();
        let tiny = (-(prec as f64)).exp2();
        r.big("alpha_re", e.alpha.real(), tiny)
            .big("alpha_im", e.alpha.imag(), tiny)
            .big("xi_re", &e.xi.re, tiny)
            .big("xi_im", &e.xi.im, tiny)
            .big("omega1_re", e.omega1.real(), tiny)
            .big("omega1_im", e.omega1.imag(), tiny)
            .big("omega2_re", e.omega2.real(), tiny)
            .big("omega2_im", e.omega2.imag(), tiny)
            .real("sep_a", s.a, ulp(s.a) * 4.0)
            .real("sep_b", s.b, ulp(s.b) * 4.0)
            .real("sep_delta", s.delta_sep, ulp(s.delta_sep) * 4.0)
            .real("sep_c", s.c_xi, ulp(s.c_xi) * 4.0)
            .text("case_tag", s.case_tag.as_str());
        embeddings.push(r);
    }
    let err_log = |v: f64| ulp(v) * 4.0;
    let mut r = Record::new();
    r.int("degree", rep.degree as u64)
        .real("h_alpha", rep.h_alpha, 1e-12 * rep.h_alpha.max(1.0))
        .real("h_model", rep.h_model, 1e-12 * rep.h_model.max(1.0))
        .text("model_source", profile.model_source.as_str())
        .int("scan_bound", profile.scan_bound)
        .real("pen", rep.pen, err_log(rep.pen))
        .flag("pen_at_least_log12", penalty.pen_at_least_log12)
        .real("m", rep.m, err_log(rep.m))
        .list("embeddings", embeddings)
        .int("c2_integer_part", rep.c2.integer_part.clone())
        .log("c2", rep.c2.log_value, err_log(rep.c2.log_value))
        .log("c_prime", rep.c_prime.log_value, err_log(rep.c_prime.log_value))
        .log("c_route_const", rep.c_route_const.log_value, err_log(rep.c_route_const.log_value))
        .log("c_route_final", rep.c_route_final.log_value, err_log(rep.c_route_final.log_value))
        .log("c_final", rep.c_final.log_value, err_log(rep.c_final.log_value))
        .log("bound_e15c", rep.log_bound_e15c, err_log(rep.log_bound_e15c))
        .log("term_1e50", rep.log_term_1e50, err_log(rep.log_term_1e50))
        .log("term_exp", rep.log_term_exp, err_log(rep.log_term_exp))
        .log("term_c2_2pi", rep.log_term_c2_2pi, err_log(rep.log_term_c2_2pi))
        .log("term_c2_4pi", rep.log_term_c2_4pi, err_log(rep.log_term_c2_4pi))
        .log("bound_max_form", rep.log_bound_max_form, err_log(rep.log_bound_max_form))
        .flag("e15c_dominates", rep.e15c_dominates)
        .flag("e15c_at_least_1e50", rep.log_bound_e15c >= rep.log_term_1e50);
    let mut unmet = Vec::new();
    if !penalty.pen_at_least_log12 {
        unmet.push("Pen >= log 12".to_string());
    }
    if !matches!(profile.model_source, moduli_gauge::effective::ModelSource::Curve) && profile.degree > 1 {
        unmet.push("sum taken over embeddings of Q(alpha)".to_string());
    }
    r.strings("assumptions_unmet", &unmet);
    r.flag("certified", unmet.is_empty());
    if !unmet.is_empty() {
        r.text("status", "non-certified");
    }
    Ok((Emit::Record(r), false))
}

fn verify_cmd(suite: &str) -> Outcome {
    let suites = Suite::parse(suite).ok_or_else(|| Failure::Usage(format!("unknown suite {suite:?}")))?;
    let mut all_passed = true;
    let mut items = Vec::new();
    for s in suites {
        let rep = run_suite(s)?;
        all_passed &= rep.passed();
        let checks = rep
            .checks
            .iter()
            .map(|c| {
                let mut r = Record::new();
                r.text("name", c.name.clone())
                    .int("cases", c.cases)
                    .int("violations", c.violations)
                    .flag("passed", c.passed())
                    .text("detail", c.detail.clone());
                r
            })
            .collect();
        let mut r = Record::new();
        r.text("suite", s.name()).flag("passed", rep.passed()).list("checks", checks);
        items.push(r);
    }
    let mut r = Record::new();
    r.list("suites", items).flag("passed", all_passed);
    Ok((Emit::Record(r), !all_passed))
}

fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn table_record(header: &[String], rows: &[Vec<String>]) -> Record {
    let items = rows
        .iter()
        .map(|row| {
            let mut r = Record::new();
            for (k, v) in header.iter().zip(row) {
                r.int(k, v.parse::<Integer>().expect("integer column"));
            }
            r
        })
        .collect();
    let mut r = Record::new();
    r.list("rows", items);
    r
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let prec = cli.precision;
    let tabular = matches!(cli.command, Command::Forms { .. } | Command::Classno { .. });
    let format = cli.format.unwrap_or(if matches!(cli.command, Command::Classno { .. }) { Format::Csv } else { Format::Json });
    if format == Format::Csv && !tabular {
        return Err(Failure::Usage("csv output is only available for forms and classno".into()));
    }
    let (emit, violation) = match &cli.command {
        Command::Forms { disc } => forms_cmd(*disc, prec)?,
        Command::Classno { range, table } => {
            let (header, rows) = classno_cmd(range)?;
            if let Some(path) = table {
                std::fs::write(path, csv(&header, &rows)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                eprintln!("wrote {} rows to {}", rows.len(), path.display());
                return Ok((String::new(), false));
            }
            (Emit::Table(header, rows), false)
        }
        Command::Count { disc, xi, eps } => count_cmd(*disc, xi, eps)?,
        Command::J { tau, derivative, value, .. } => j_cmd(tau.as_deref(), *derivative, value.as_deref(), prec)?,
        Command::Height { disc, alpha } => height_cmd(*disc, *alpha, prec)?,
        Command::Effective { alpha_poly, periods, h_model, curve, xi, scan_bound } => effective_cmd(
            alpha_poly,
            periods.as_deref(),
            *h_model,
            curve.as_deref(),
            xi.as_deref(),
            *scan_bound,
            prec,
        )?,
        Command::Verify { suite } => verify_cmd(suite)?,
    };
    let text = match (emit, format) {
        (Emit::Record(r), Format::Json) => r.to_json() + "\n",
        (Emit::Record(r), _) => r.to_text(),
        (Emit::Both(_, h, rows), Format::Csv) | (Emit::Table(h, rows), Format::Csv) => csv(&h, &rows),
        (Emit::Both(r, ..), Format::Json) => r.to_json() + "\n",
        (Emit::Both(r, ..), Format::Text) => r.to_text(),
        (Emit::Table(h, rows), Format::Json) => table_record(&h, &rows).to_json() + "\n",
        (Emit::Table(h, rows), Format::Text) => table_record(&h, &rows).to_text(),
    };
    Ok((text, violation))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, violation)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if violation {
                eprintln!("violation found");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
