//! The Dujella–Pethő reduction: single instances, automatic convergent
//! selection, and sweeps over a shift parameter.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certreal::{CertError, CertifiedReal, Dyadic, PrecisionPolicy, RealExpr, RealSummary};
use crate::contfrac::{self, ContinuedFractionTable};
use crate::error::{Error, Result};

/// `0 < |nα − m + μ| < A/B^ω` with `n ≤ M`.
#[derive(Clone, Debug)]
pub struct ReductionProblem {
    pub alpha: RealExpr,
    pub mu: RealExpr,
    pub a: RealExpr,
    pub b: RealExpr,
    pub m: BigInt,
}

impl ReductionProblem {
    pub fn new(
        alpha: RealExpr,
        mu: RealExpr,
        a: RealExpr,
        b: RealExpr,
        m: BigInt,
    ) -> Result<ReductionProblem> {
        let prob = ReductionProblem { alpha, mu, a, b, m };
        prob.validate(&PrecisionPolicy::default())?;
        Ok(prob)
    }

    fn validate(&self, policy: &PrecisionPolicy) -> Result<()> {
        if self.m < BigInt::one() {
            return Err(Error::InvalidInput("M must be at least 1".into()));
        }
        policy.run(|bits| {
            let a = self.a.eval(bits)?;
            let b = self.b.eval(bits)?;
            let one = CertifiedReal::from_int(1, bits);
            let a_ok = a
                .lt(&CertifiedReal::from_int(0, bits))
                .map(|neg| !neg && !a.contains_zero());
            match (a_ok, one.lt(&b)) {
                (Some(true), Some(true)) => Ok(()),
                (Some(false), _) => Err(Error::InvalidInput(format!(
                    "A = {} must be positive",
                    self.a
                ))),
                (_, Some(false)) => {
                    Err(Error::InvalidInput(format!("B = {} must exceed 1", self.b)))
                }
                _ => Err(CertError::Ambiguous { bits }.into()),
            }
        })
    }

    pub fn with_mu(&self, mu: RealExpr) -> ReductionProblem {
        ReductionProblem { mu, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    Success,
    EpsilonNonpositive,
    PrecisionExhausted,
}

impl fmt::Display for ReductionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionStatus::Success => "success",
            ReductionStatus::EpsilonNonpositive => "epsilon_nonpositive",
            ReductionStatus::PrecisionExhausted => "precision_exhausted",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionResult {
    #[serde(serialize_with = "crate::ser::display")]
    pub q_used: BigInt,
    pub q_index: usize,
    pub epsilon: Option<RealSummary>,
    /// `⌊log(A·q/ε_lo)/log B⌋`, evaluated at the upper endpoint.
    #[serde(serialize_with = "ser_opt")]
    pub omega_bound: Option<BigInt>,
    pub status: ReductionStatus,
    #[serde(skip)]
    pub epsilon_interval: Option<CertifiedReal>,
}

fn ser_opt<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

impl ReductionResult {
    pub fn is_success(&self) -> bool {
        self.status == ReductionStatus::Success
    }
}

/// `ε` must be known to this many absolute bits before it is reported.
const EPSILON_ABS_BITS: i64 = 80;

/// `ε = ‖μq‖ − M‖αq‖` for `q = q_index` of `table`, which must expand `α`.
pub fn reduce_once(
    prob: &ReductionProblem,
    table: &ContinuedFractionTable,
    index: usize,
    policy: &PrecisionPolicy,
) -> Result<ReductionResult> {
    if index >= table.len() {
        return Err(Error::TableTooShort(format!(
            "index {index} with {} quotients",
            table.len()
        )));
    }
    let q = table.q(index).clone();
    if q <= &prob.m * 6u32 {
        return Err(Error::InvalidInput(format!(
            "q_{index} = {q} does not exceed 6M"
        )));
    }
    let attempt = policy.run(|bits| epsilon_at(prob, &q, bits));
    let (eps, omega) = match attempt {
        Ok(v) => v,
        Err(e) if e.is_precision_exhausted() => {
            return Ok(ReductionResult {
                q_used: q,
                q_index: index,
                epsilon: None,
                omega_bound: None,
                status: ReductionStatus::PrecisionExhausted,
                epsilon_interval: None,
            })
        }
        Err(e) => return Err(e),
    };
    let status = if omega.is_some() {
        ReductionStatus::Success
    } else {
        ReductionStatus::EpsilonNonpositive
    };
    Ok(ReductionResult {
        q_used: q,
        q_index: index,
        epsilon: Some(eps.summary()),
        omega_bound: omega,
        status,
        epsilon_interval: Some(eps),
    })
}

fn epsilon_at(
    prob: &ReductionProblem,
    q: &BigInt,
    bits: u32,
) -> Result<(CertifiedReal, Option<BigInt>)> {
    let ambiguous = || Error::Cert(CertError::Ambiguous { bits });
    let alpha_q = prob.alpha.eval(bits)?.mul_int(q);
    let mu_q = prob.mu.eval(bits)?.mul_int(q);
    let eps = mu_q
        .nearest_integer_distance()
        .sub(&alpha_q.nearest_integer_distance().mul_int(&prob.m));
    if eps.is_negative() || (eps.is_exact() && eps.lo().is_zero()) {
        return Ok((eps, None));
    }
    if !eps.is_positive() || eps.width() > Dyadic::pow2(-EPSILON_ABS_BITS) {
        return Err(ambiguous());
    }
    Ok((eps.clone(), Some(omega_bound(prob, q, &eps, bits)?)))
}

/// `⌊log(A·q/ε_lo)/log B⌋` using the upper endpoint of the quotient.
pub fn omega_bound(
    prob: &ReductionProblem,
    q: &BigInt,
    eps: &CertifiedReal,
    bits: u32,
) -> Result<BigInt> {
    let eps_lo = CertifiedReal::exact(eps.lo().clone(), bits);
    let num = prob.a.eval(bits)?.mul_int(q).div(&eps_lo)?.ln()?;
    let ratio = num.div(&prob.b.eval(bits)?.ln()?)?;
    Ok(ratio.hi().floor())
}

#[derive(Clone, Debug, Serialize)]
pub struct AutoReduction {
    pub result: ReductionResult,
    /// Every convergent tried, in order.
    pub attempts: Vec<ReductionResult>,
}

pub const DEFAULT_ATTEMPTS: usize = 10;

/// Starts at the first `q > 6M` and walks forward on `ε ≤ 0`.
pub fn reduce_auto(
    prob: &ReductionProblem,
    attempts: usize,
    policy: &PrecisionPolicy,
) -> Result<AutoReduction> {
    let mut table = contfrac::expand(&prob.alpha, 40, policy)?;
    let (start, _) = contfrac::first_denominator_exceeding(&mut table, &(&prob.m * 6u32))?;
    let mut tried = Vec::new();
    for index in start..start + attempts.max(1) {
        if index >= table.len() {
            table = table.extended(table.len() * 2)?;
        }
        let r = reduce_once(prob, &table, index, policy)?;
        if r.status == ReductionStatus::PrecisionExhausted {
            return Err(CertError::PrecisionExhausted {
                ceiling: policy.ceiling,
            }
            .into());
        }
        tried.push(r.clone());
        if r.is_success() {
            return Ok(AutoReduction {
                result: r,
                attempts: tried,
            });
        }
    }
    let listing: Vec<String> = tried
        .iter()
        .map(|r| {
            let eps = r
                .epsilon
                .as_ref()
                .map(|e| e.mid.clone())
                .unwrap_or_default();
            format!("q_{} = {} (ε ≈ {eps})", r.q_index, r.q_used)
        })
        .collect();
    Err(Error::StructuralFailure(format!(
        "ε ≤ 0 for every convergent tried: {}",
        listing.join("; ")
    )))
}

/// A `μ(s)` expression with `{s}` standing for the shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuTemplate(String);

impl MuTemplate {
    pub fn new(text: &str) -> Result<MuTemplate> {
        if !text.contains("{s}") {
            return Err(Error::InvalidInput(format!(
                "template {text:?} has no {{s}} placeholder"
            )));
        }
        let t = MuTemplate(text.to_string());
        t.instantiate(0)?;
        Ok(t)
    }

    pub fn instantiate(&self, s: u64) -> Result<RealExpr> {
        Ok(RealExpr::parse(&self.0.replace("{s}", &s.to_string()))?)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    /// `μ` of this problem is ignored; the template supplies `μ(s)`.
    pub problem: ReductionProblem,
    pub template: MuTemplate,
    pub s_lo: u64,
    pub s_hi: u64,
    /// Shifts skipped, each with the reason.
    pub exclusions: BTreeMap<u64, String>,
    pub q_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftResult {
    pub s: u64,
    pub epsilon: Option<RealSummary>,
    #[serde(serialize_with = "ser_opt")]
    pub omega_bound: Option<BigInt>,
    pub status: ReductionStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcludedShift {
    pub s: u64,
    pub reason: String,
    /// `ε` is still computed so the reason for exclusion is visible.
    pub epsilon: Option<RealSummary>,
    pub status: ReductionStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub q_index: usize,
    #[serde(serialize_with = "crate::ser::display")]
    pub q_used: BigInt,
    pub min_epsilon_at: Option<u64>,
    pub min_epsilon: Option<RealSummary>,
    #[serde(serialize_with = "ser_opt")]
    pub worst_omega_bound: Option<BigInt>,
    pub worst_omega_at: Option<u64>,
    pub nonpositive: Vec<u64>,
    pub excluded: Vec<ExcludedShift>,
    pub shifts: Vec<ShiftResult>,
    #[serde(skip)]
    pub min_epsilon_interval: Option<CertifiedReal>,
}

impl SweepOutcome {
    pub fn is_success(&self) -> bool {
        self.nonpositive.is_empty() && self.worst_omega_bound.is_some()
    }
}

/// Runs [`reduce_once`] for every shift in `[s_lo, s_hi]`, sharing one
/// convergent. `jobs = 0` uses rayon's default pool.
pub fn reduce_sweep(
    spec: &SweepSpec,
    table: &ContinuedFractionTable,
    policy: &PrecisionPolicy,
    jobs: usize,
) -> Result<SweepOutcome> {
    if spec.s_lo > spec.s_hi {
        return Err(Error::InvalidInput(format!(
            "empty shift range {}..{}",
            spec.s_lo, spec.s_hi
        )));
    }
    let run = || -> Vec<Result<(u64, ReductionResult)>> {
        (spec.s_lo..=spec.s_hi)
            .into_par_iter()
            .map(|s| {
                let prob = spec.problem.with_mu(spec.template.instantiate(s)?);
                Ok((s, reduce_once(&prob, table, spec.q_index, policy)?))
            })
            .collect()
    };
    let results = if jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(run)
    };

    let mut out = SweepOutcome {
        q_index: spec.q_index,
        q_used: table.q(spec.q_index).clone(),
        min_epsilon_at: None,
        min_epsilon: None,
        worst_omega_bound: None,
        worst_omega_at: None,
        nonpositive: Vec::new(),
        excluded: Vec::new(),
        shifts: Vec::new(),
        min_epsilon_interval: None,
    };
    let mut all_bounded = true;
    for item in results {
        let (s, r) = item?;
        if let Some(reason) = spec.exclusions.get(&s) {
            out.excluded.push(ExcludedShift {
                s,
                reason: reason.clone(),
                epsilon: r.epsilon.clone(),
                status: r.status,
            });
            continue;
        }
        match r.status {
            ReductionStatus::PrecisionExhausted => {
                return Err(Error::SweepExhausted {
                    s,
                    ceiling: policy.ceiling,
                });
            }
            ReductionStatus::EpsilonNonpositive => {
                out.nonpositive.push(s);
                all_bounded = false;
            }
            ReductionStatus::Success => {
                let eps = r.epsilon_interval.clone().expect("success carries ε");
                let smaller = out
                    .min_epsilon_interval
                    .as_ref()
                    .map(|m| eps.lo() < m.lo())
                    .unwrap_or(true);
                if smaller {
                    out.min_epsilon_at = Some(s);
                    out.min_epsilon = r.epsilon.clone();
                    out.min_epsilon_interval = Some(eps);
                }
                let w = r.omega_bound.clone().expect("success carries a bound");
                if out
                    .worst_omega_bound
                    .as_ref()
                    .map(|b| &w > b)
                    .unwrap_or(true)
                {
                    out.worst_omega_bound = Some(w);
                    out.worst_omega_at = Some(s);
                }
            }
        }
        out.shifts.push(ShiftResult {
            s,
            epsilon: r.epsilon,
            omega_bound: r.omega_bound,
            status: r.status,
        });
    }
    if !all_bounded {
        out.worst_omega_bound = None;
        out.worst_omega_at = None;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> RealExpr {
        RealExpr::parse(s).unwrap()
    }

    fn alpha() -> RealExpr {
        e("log(phi)/log(2)")
    }

    fn pow10(n: usize) -> BigInt {
        num_traits::pow(BigInt::from(10), n)
    }

    fn jj_problem() -> ReductionProblem {
        ReductionProblem::new(
            alpha(),
            e("log(3)/log(2)"),
            e("26"),
            e("2"),
            BigInt::from(3) * pow10(29),
        )
        .unwrap()
    }

    fn table() -> ContinuedFractionTable {
        contfrac::expand(&alpha(), 76, &PrecisionPolicy::default()).unwrap()
    }

    #[test]
    fn first_instance() {
        let r = reduce_once(&jj_problem(), &table(), 75, &PrecisionPolicy::default()).unwrap();
        assert!(r.is_success());
        let eps = r.epsilon_interval.unwrap();
        assert!((eps.to_f64() - 0.1403780356272216).abs() < 1e-14);
        assert_eq!(r.omega_bound, Some(BigInt::from(125)));
    }

    #[test]
    fn zero_mu_is_nonpositive() {
        let prob = jj_problem().with_mu(e("0"));
        let r = reduce_once(&prob, &table(), 75, &PrecisionPolicy::default()).unwrap();
        assert_eq!(r.status, ReductionStatus::EpsilonNonpositive);
        assert!(r.omega_bound.is_none());
    }

    #[test]
    fn small_q_is_rejected() {
        assert!(reduce_once(&jj_problem(), &table(), 60, &PrecisionPolicy::default()).is_err());
    }

    #[test]
    fn starved_precision_is_reported() {
        let r = reduce_once(&jj_problem(), &table(), 75, &PrecisionPolicy::new(64, 128)).unwrap();
        assert_eq!(r.status, ReductionStatus::PrecisionExhausted);
    }

    #[test]
    fn auto_selects_first_large_convergent() {
        let a = reduce_auto(&jj_problem(), DEFAULT_ATTEMPTS, &PrecisionPolicy::default()).unwrap();
        assert_eq!(a.result.q_index, 69);
        assert!(a.result.is_success());
        // μ = α gives ε = (1 − M)‖αq‖ < 0 for every q, exactly as μ = 0 does
        let prob = jj_problem().with_mu(alpha());
        let err = reduce_auto(&prob, 4, &PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::StructuralFailure(_)));
        let t = table();
        let direct = reduce_once(
            &jj_problem().with_mu(e("0")),
            &t,
            69,
            &PrecisionPolicy::default(),
        )
        .unwrap();
        assert_eq!(direct.status, ReductionStatus::EpsilonNonpositive);
    }

    #[test]
    fn auto_gives_up_on_zero_mu() {
        let prob = jj_problem().with_mu(e("0"));
        let err = reduce_auto(&prob, 3, &PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::StructuralFailure(_)));
    }

    #[test]
    fn template_needs_placeholder() {
        assert!(MuTemplate::new("log(3)").is_err());
        let t = MuTemplate::new("log(3/(1+2^(-{s})))/log(2)").unwrap();
        assert!(t.instantiate(5).is_ok());
    }

    #[test]
    fn small_sweep_orders_by_shift() {
        let spec = SweepSpec {
            problem: jj_problem(),
            template: MuTemplate::new("log(3/(1+2^(-{s})))/log(2)").unwrap(),
            s_lo: 0,
            s_hi: 6,
            exclusions: BTreeMap::from([(1, "handled separately".to_string())]),
            q_index: 75,
        };
        let t = table();
        let one = reduce_sweep(&spec, &t, &PrecisionPolicy::default(), 1).unwrap();
        let many = reduce_sweep(&spec, &t, &PrecisionPolicy::default(), 4).unwrap();
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&many).unwrap()
        );
        assert_eq!(
            one.shifts.iter().map(|r| r.s).collect::<Vec<_>>(),
            vec![0, 2, 3, 4, 5, 6]
        );
        assert_eq!(one.excluded[0].status, ReductionStatus::EpsilonNonpositive);
        assert!(one.is_success());
    }
}
