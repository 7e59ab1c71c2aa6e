//! Command-line front end.
//!
//! Every stage is reachable on its own (`seq`, `search`, `cfrac`, `matveev`,
//! `reduce`, `legendre`) alongside the full `certify` pipelines. Exit codes:
//! 0 success, 1 verification failure, 2 invalid input, 3 precision exhausted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::bigseq::Family;
use crate::certreal::{parse_decimal, PrecisionPolicy, RealExpr, RealSummary};
use crate::contfrac;
use crate::error::{Error, Result};
use crate::linforms::{matveev_coefficient, MatveevInput};
use crate::reduction::{self, MuTemplate, ReductionProblem, ReductionStatus, SweepSpec};
use crate::solver::{self, cross_check, CertificationReport, Equation, PipelineConfig, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "recdioph",
    version,
    about = "Solve and certify U_n + U_m = V_k over binary recurrences"
)]
pub struct CliConfig {
    /// Starting precision in bits, rounded up to a power of two.
    #[arg(long, global = true, default_value_t = 192)]
    pub precision_bits: u32,
    /// Highest precision tried before giving up, rounded up to a power of two.
    #[arg(long, global = true, default_value_t = 4096)]
    pub precision_ceiling: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for search and sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Terms of a built-in sequence.
    Seq {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Exhaustive search over 0 <= m <= n <= n-max.
    Search {
        #[arg(long)]
        equation: String,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
    },
    /// Partial quotients and convergents of a real number.
    Cfrac {
        #[arg(long)]
        alpha: String,
        /// Number of quotients, starting with a_0.
        #[arg(long)]
        terms: usize,
    },
    /// Matveev's constant C and, with --B, the bound -C(1 + log B).
    Matveev {
        #[arg(long)]
        t: u32,
        #[arg(long = "D")]
        d: u32,
        /// Comma-separated A_1, ..., A_t.
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: Option<String>,
    },
    /// One reduction instance, or a sweep over shifts with --sweep.
    Reduce(ReduceArgs),
    /// Legendre lower bound for |k*alpha - e| over 0 < k < M.
    Legendre {
        #[arg(long)]
        alpha: String,
        #[arg(long = "M")]
        m: String,
        /// With --q, test whether p/q is a convergent.
        #[arg(long, requires = "q")]
        p: Option<String>,
        #[arg(long, requires = "p")]
        q: Option<String>,
    },
    /// Run a full certification pipeline, or cross-check a saved report.
    Certify {
        #[arg(long, required_unless_present = "check")]
        equation: Option<String>,
        #[arg(long, default_value_t = 200)]
        window: u64,
        /// Cross-check a JSON report instead of computing one.
        #[arg(long, conflicts_with = "equation")]
        check: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long = "M")]
    m: String,
    /// Convergent index; defaults to the first q > 6M.
    #[arg(long)]
    q_index: Option<usize>,
    /// Shift range LO..HI (inclusive).
    #[arg(long, requires = "mu_template")]
    sweep: Option<String>,
    /// mu as a function of the shift, with {s} as placeholder.
    #[arg(long)]
    mu_template: Option<String>,
    /// Comma-separated shifts to skip.
    #[arg(long, requires = "sweep")]
    exclude: Option<String>,
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            let text = e.render().to_string();
            let line = text.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{line}");
            return EXIT_INVALID;
        }
    };
    match execute(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_precision_exhausted() => EXIT_EXHAUSTED,
        Error::Parse(_)
        | Error::InvalidInput(_)
        | Error::UnsupportedFamily(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

impl CliConfig {
    pub fn policy(&self) -> Result<PrecisionPolicy> {
        let start = self.precision_bits.max(2).checked_next_power_of_two();
        let ceiling = self.precision_ceiling.max(2).checked_next_power_of_two();
        match (start, ceiling) {
            (Some(s), Some(c)) if s <= c => Ok(PrecisionPolicy::new(s, c)),
            (Some(s), Some(c)) => Err(Error::InvalidInput(format!(
                "--precision-bits {s} exceeds --precision-ceiling {c}"
            ))),
            _ => Err(Error::InvalidInput("precision out of range".into())),
        }
    }
}

/// What a subcommand produced, ready for any of the three formats.
struct Output {
    text: String,
    json: serde_json::Value,
    csv: Option<(Vec<String>, Vec<Vec<String>>)>,
    code: i32,
}

impl Output {
    fn new(text: String, json: &impl Serialize) -> Result<Output> {
        Ok(Output {
            text,
            json: serde_json::to_value(json)?,
            csv: None,
            code: EXIT_OK,
        })
    }

    fn with_csv(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Output {
        self.csv = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    fn with_code(mut self, code: i32) -> Output {
        self.code = code;
        self
    }

    fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Csv => {
                let (header, rows) = self.csv.clone().unwrap_or_else(|| flatten(&self.json));
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&header).map_err(csv_err)?;
                for r in rows {
                    w.write_record(&r).map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                String::from_utf8_lossy(&bytes).into_owned()
            }
        })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e))
}

/// `key,value` rows for nested JSON, keys joined by dots.
fn flatten(v: &serde_json::Value) -> (Vec<String>, Vec<Vec<String>>) {
    fn walk(prefix: String, v: &serde_json::Value, out: &mut Vec<Vec<String>>) {
        match v {
            serde_json::Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(key, x, out);
                }
            }
            serde_json::Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(format!("{prefix}.{i}"), x, out);
                }
            }
            serde_json::Value::String(s) => out.push(vec![prefix, s.clone()]),
            serde_json::Value::Null => out.push(vec![prefix, String::new()]),
            other => out.push(vec![prefix, other.to_string()]),
        }
    }
    let mut rows = Vec::new();
    walk(String::new(), v, &mut rows);
    (vec!["key".into(), "value".into()], rows)
}

fn execute(cfg: &CliConfig) -> Result<i32> {
    let policy = cfg.policy()?;
    let out = if cfg.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("--jobs {}: {e}", cfg.jobs)))?;
        pool.install(|| dispatch(cfg, &policy))?
    } else {
        dispatch(cfg, &policy)?
    };
    let rendered = out.render(cfg.format)?;
    match &cfg.out {
        Some(path) => fs::write(path, rendered)?,
        None => io::stdout().lock().write_all(rendered.as_bytes())?,
    }
    Ok(out.code)
}

fn dispatch(cfg: &CliConfig, policy: &PrecisionPolicy) -> Result<Output> {
    match &cfg.command {
        Command::Seq { family, from, to } => seq(family, *from, *to),
        Command::Search { equation, n_max } => search(equation, *n_max),
        Command::Cfrac { alpha, terms } => cfrac(alpha, *terms, policy),
        Command::Matveev { t, d, a, b } => matveev(*t, *d, a, b.as_deref(), policy),
        Command::Reduce(args) => reduce(args, policy),
        Command::Legendre { alpha, m, p, q } => {
            legendre(alpha, m, p.as_deref().zip(q.as_deref()), policy)
        }
        Command::Certify {
            equation,
            window,
            check,
        } => match (equation, check) {
            (_, Some(path)) => check_report(path),
            (Some(eq), None) => certify(eq, *window, cfg.jobs, policy),
            (None, None) => Err(Error::InvalidInput(
                "certify needs --equation or --check".into(),
            )),
        },
    }
}

fn expr(flag: &str, text: &str) -> Result<RealExpr> {
    RealExpr::parse(text).map_err(|e| Error::InvalidInput(format!("--{flag}: {e}")))
}

/// Integers as plain digits, `3e29` or `3*10^29`.
pub fn parse_bigint(flag: &str, text: &str) -> Result<BigInt> {
    let bad = || Error::InvalidInput(format!("--{flag}: {text:?} is not an integer"));
    let t = text.trim();
    if let Ok(n) = t.parse::<BigInt>() {
        return Ok(n);
    }
    let (mant, exp) = t
        .split_once(['e', 'E'])
        .or_else(|| t.split_once("*10^"))
        .ok_or_else(bad)?;
    let mant = parse_decimal(mant).ok_or_else(bad)?;
    let exp: u32 = exp.parse().map_err(|_| bad())?;
    let v = mant * BigRational::from_integer(num_traits::pow(BigInt::from(10), exp as usize));
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(bad())
    }
}

fn family(text: &str) -> Result<Family> {
    Family::parse(text)
        .ok_or_else(|| Error::InvalidInput(format!("--family: unknown family {text:?}")))
}

fn equation(text: &str) -> Result<Equation> {
    text.parse().map_err(|_| {
        Error::InvalidInput(format!(
            "--equation: unknown equation {text:?} (expected jj-l or ll-j)"
        ))
    })
}

#[derive(Serialize)]
struct Term {
    n: u64,
    #[serde(serialize_with = "crate::ser::display")]
    value: BigInt,
}

fn seq(fam: &str, from: u64, to: u64) -> Result<Output> {
    let f = family(fam)?;
    if from > to {
        return Err(Error::InvalidInput(format!(
            "--from {from} exceeds --to {to}"
        )));
    }
    let terms: Vec<Term> = f
        .recurrence()
        .iter()
        .skip(from as usize)
        .take((to - from + 1) as usize)
        .map(|(n, value)| Term { n, value })
        .collect();
    let text = terms
        .iter()
        .map(|t| t.value.to_string())
        .collect::<Vec<_>>()
        .join(" ")
        + "\n";
    let rows = terms
        .iter()
        .map(|t| vec![t.n.to_string(), t.value.to_string()])
        .collect();
    Ok(Output::new(text, &terms)?.with_csv(&["n", "value"], rows))
}

#[derive(Serialize)]
struct SearchOutput {
    equation: Equation,
    n_max: u64,
    solutions: Vec<solver::SolutionTriple>,
}

fn search(eq: &str, n_max: u64) -> Result<Output> {
    let eq = equation(eq)?;
    let (u, v) = eq.families();
    let solutions = solver::enumerate_solutions(&u.recurrence(), &v.recurrence(), n_max);
    let text = solutions
        .iter()
        .map(|t| format!("{} {} {}\n", t.n, t.m, t.k))
        .collect();
    let rows = solutions
        .iter()
        .map(|t| vec![t.n.to_string(), t.m.to_string(), t.k.to_string()])
        .collect();
    let out = SearchOutput {
        equation: eq,
        n_max,
        solutions,
    };
    Ok(Output::new(text, &out)?.with_csv(&["n", "m", "k"], rows))
}

fn cfrac(alpha: &str, terms: usize, policy: &PrecisionPolicy) -> Result<Output> {
    let x = expr("alpha", alpha)?;
    if terms == 0 {
        return Err(Error::InvalidInput("--terms must be positive".into()));
    }
    let table = contfrac::expand(&x, terms - 1, policy)?;
    let rows = table.rows();
    let text = rows
        .iter()
        .map(|r| format!("{} {} {} {}\n", r.index, r.a, r.p, r.q))
        .collect();
    let csv = rows
        .iter()
        .map(|r| vec![r.index.to_string(), r.a.clone(), r.p.clone(), r.q.clone()])
        .collect();
    Ok(Output::new(text, &rows)?.with_csv(&["index", "a", "p", "q"], csv))
}

fn matveev(t: u32, d: u32, a: &str, b: Option<&str>, policy: &PrecisionPolicy) -> Result<Output> {
    let a = a
        .split(',')
        .map(|s| expr("A", s.trim()))
        .collect::<Result<Vec<_>>>()?;
    let mut inp = MatveevInput::new(t, d, a);
    if let Some(b) = b {
        inp = inp.with_b(expr("B", b)?);
    }
    let bound = matveev_coefficient(&inp, policy)?;
    let mut text = format!("C = {}\n", pm(&bound.c));
    if let Some(l) = &bound.log_lower_bound {
        text += &format!("-C(1+log B) = {}\n", pm(l));
    }
    Output::new(text, &bound)
}

fn pm(s: &RealSummary) -> String {
    format!("{} ± {}", s.mid, s.rad)
}

fn parse_range(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::InvalidInput(format!("--sweep: {text:?} is not a range LO..HI"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn reduce(args: &ReduceArgs, policy: &PrecisionPolicy) -> Result<Output> {
    let alpha = expr("alpha", &args.alpha)?;
    let a = expr("A", &args.a)?;
    let b = expr("B", &args.b)?;
    let m = parse_bigint("M", &args.m)?;
    let template = args
        .mu_template
        .as_deref()
        .map(MuTemplate::new)
        .transpose()?;
    let mu = match (&args.mu, &template) {
        (Some(mu), _) => expr("mu", mu)?,
        (None, Some(t)) => t.instantiate(0)?,
        (None, None) => {
            return Err(Error::InvalidInput(
                "reduce needs --mu or --mu-template".into(),
            ))
        }
    };
    let prob = ReductionProblem::new(alpha.clone(), mu, a, b, m.clone())?;

    let Some(range) = &args.sweep else {
        let result = match args.q_index {
            Some(i) => {
                let table = contfrac::expand(&alpha, i, policy)?;
                reduction::reduce_once(&prob, &table, i, policy)?
            }
            None => reduction::reduce_auto(&prob, reduction::DEFAULT_ATTEMPTS, policy)?.result,
        };
        let mut text = format!("q_{} = {}\n", result.q_index, result.q_used);
        if let Some(e) = &result.epsilon {
            text += &format!("epsilon = {}\n", pm(e));
        }
        if let Some(w) = &result.omega_bound {
            text += &format!("omega <= {w}\n");
        }
        text += &format!("status: {}\n", result.status);
        let code = status_code(result.status);
        return Ok(Output::new(text, &result)?.with_code(code));
    };

    let (s_lo, s_hi) = parse_range(range)?;
    let template =
        template.ok_or_else(|| Error::InvalidInput("--sweep needs --mu-template".into()))?;
    let mut exclusions = BTreeMap::new();
    for s in args
        .exclude
        .iter()
        .flat_map(|e| e.split(','))
        .filter(|s| !s.trim().is_empty())
    {
        let s: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("--exclude: {s:?} is not a shift")))?;
        exclusions.insert(s, "excluded on the command line".to_string());
    }
    let six_m = &m * 6u32;
    let mut table = contfrac::expand(&alpha, args.q_index.unwrap_or(40), policy)?;
    let q_index = match args.q_index {
        Some(i) => i,
        None => contfrac::first_denominator_exceeding(&mut table, &six_m)?.0,
    };
    let spec = SweepSpec {
        problem: prob,
        template,
        s_lo,
        s_hi,
        exclusions,
        q_index,
    };
    let out = reduction::reduce_sweep(&spec, &table, policy, 0)?;
    let mut text = format!("q_{} = {}\n", out.q_index, out.q_used);
    for r in &out.shifts {
        let eps = r.epsilon.as_ref().map(pm).unwrap_or_else(|| "-".into());
        let w = r
            .omega_bound
            .as_ref()
            .map(|w| w.to_string())
            .unwrap_or_else(|| "-".into());
        text += &format!("s = {}: epsilon = {eps}, omega <= {w}, {}\n", r.s, r.status);
    }
    for x in &out.excluded {
        text += &format!("s = {}: excluded ({})\n", x.s, x.reason);
    }
    if let (Some(e), Some(at)) = (&out.min_epsilon, out.min_epsilon_at) {
        text += &format!("min epsilon = {} at s = {at}\n", pm(e));
    }
    if let (Some(w), Some(at)) = (&out.worst_omega_bound, out.worst_omega_at) {
        text += &format!("omega <= {w} for every shift (attained at s = {at})\n");
    }
    let code = if out.is_success() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    let rows = out
        .shifts
        .iter()
        .map(|r| {
            vec![
                r.s.to_string(),
                r.epsilon
                    .as_ref()
                    .map(|e| e.mid.clone())
                    .unwrap_or_default(),
                r.epsilon
                    .as_ref()
                    .map(|e| e.rad.clone())
                    .unwrap_or_default(),
                r.omega_bound
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_default(),
                r.status.to_string(),
            ]
        })
        .collect();
    Ok(Output::new(text, &out)?
        .with_csv(
            &["s", "epsilon_mid", "epsilon_rad", "omega_bound", "status"],
            rows,
        )
        .with_code(code))
}

fn status_code(s: ReductionStatus) -> i32 {
    match s {
        ReductionStatus::Success => EXIT_OK,
        ReductionStatus::EpsilonNonpositive => EXIT_FAILURE,
        ReductionStatus::PrecisionExhausted => EXIT_EXHAUSTED,
    }
}

#[derive(Serialize)]
struct LegendreOutput {
    alpha: String,
    m: String,
    n_star: usize,
    q_before: String,
    q_n_star: String,
    b: String,
    lower_bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergent: Option<bool>,
}

fn legendre(
    alpha: &str,
    m: &str,
    pq: Option<(&str, &str)>,
    policy: &PrecisionPolicy,
) -> Result<Output> {
    let x = expr("alpha", alpha)?;
    let m = parse_bigint("M", m)?;
    if !m.is_positive() || m.is_one() {
        return Err(Error::InvalidInput(format!("--M {m} must exceed 1")));
    }
    let mut table = contfrac::expand(&x, 16, policy)?;
    contfrac::first_denominator_exceeding(&mut table, &m)?;
    let lb = contfrac::legendre_lower_bound(&table, &m)?;
    let convergent = match pq {
        Some((p, q)) => {
            let (p, q) = (parse_bigint("p", p)?, parse_bigint("q", q)?);
            Some(contfrac::legendre_is_convergent(&p, &q, &x, policy)?)
        }
        None => None,
    };
    let out = LegendreOutput {
        alpha: x.to_string(),
        m: m.to_string(),
        n_star: lb.n_star,
        q_before: lb.q_before.to_string(),
        q_n_star: lb.q_n_star.to_string(),
        b: lb.b.to_string(),
        lower_bound: lb.statement(),
        convergent,
    };
    let mut text = format!(
        "N = {}: q_N = {} > M\nb = max a_i (i <= N) = {}\n{}\n",
        out.n_star, out.q_n_star, out.b, out.lower_bound
    );
    if let Some(c) = convergent {
        text += &format!("p/q is {}a convergent\n", if c { "" } else { "not " });
    }
    Output::new(text, &out)
}

fn certify(eq: &str, window: u64, jobs: usize, policy: &PrecisionPolicy) -> Result<Output> {
    let eq = equation(eq)?;
    let cfg = PipelineConfig {
        policy: *policy,
        window,
        jobs,
        ..PipelineConfig::default()
    };
    let report = solver::certify(eq, &cfg);
    let check = cross_check(&report);
    let code = if report.verdict == Verdict::Complete && check.pass {
        EXIT_OK
    } else if report.exhausted_precision() {
        EXIT_EXHAUSTED
    } else {
        EXIT_FAILURE
    };
    let text = report_text(&report, &check.failures);
    let rows = report
        .stages
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                serde_json::to_value(s.status)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                s.message.clone().unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Output::new(text, &report)?
        .with_csv(&["stage", "status", "message"], rows)
        .with_code(code))
}

fn report_text(r: &CertificationReport, failures: &[String]) -> String {
    let mut t = format!(
        "{} ({}), window n <= {}\n",
        r.equation,
        r.equation.describe(),
        r.window
    );
    t += &format!(
        "solutions: {}\n",
        r.solutions
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    for s in &r.stages {
        let status = serde_json::to_value(s.status).unwrap_or_default();
        let status = status.as_str().unwrap_or("?");
        match &s.message {
            Some(m) => t += &format!("  {:<16} {status}: {m}\n", s.name),
            None => t += &format!("  {:<16} {status}\n", s.name),
        }
    }
    let c = &r.ceilings;
    if let Some(g) = &c.global_bound {
        t += &format!("global bound: {g}\n");
    }
    let show = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
    t += &format!(
        "ceilings: n-m <= {}, sweep n <= {}, legendre n <= {}, final n <= {}\n",
        show(c.shift),
        show(c.sweep_n),
        show(c.legendre_n),
        show(c.final_n)
    );
    t += &format!(
        "verdict: {}\n",
        if r.verdict == Verdict::Complete {
            "complete"
        } else {
            "incomplete"
        }
    );
    for f in failures {
        t += &format!("cross-check: {f}\n");
    }
    t
}

#[derive(Serialize)]
struct CheckOutput {
    file: String,
    pass: bool,
    failures: Vec<String>,
}

fn check_report(path: &PathBuf) -> Result<Output> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("--check {}: {e}", path.display())))?;
    let report: CertificationReport = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("--check {}: {e}", path.display())))?;
    let check = cross_check(&report);
    let mut out = format!(
        "{}: {}\n",
        path.display(),
        if check.pass { "pass" } else { "fail" }
    );
    for f in &check.failures {
        out += &format!("  {f}\n");
    }
    let code = if check.pass { EXIT_OK } else { EXIT_FAILURE };
    let json = CheckOutput {
        file: path.display().to_string(),
        pass: check.pass,
        failures: check.failures,
    };
    Ok(Output::new(out, &json)?.with_code(code))
}
