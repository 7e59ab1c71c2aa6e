//! End-to-end certification of `J_n + J_m = L_k` and `L_n + L_m = J_k`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::forms::{LinearFormInstance, MuShape};
use super::report::*;
use super::{enumerate_solutions, index_relation, power_of_two_targets, Equation, SolutionTriple};
use crate::bigseq::BinaryRecurrence;
use crate::certreal::{
    format_sci_up, round_up_decimal, CertError, CertifiedReal, PrecisionPolicy, RealExpr,
    RealSummary,
};
use crate::contfrac::{self, ContinuedFractionTable};
use crate::error::{Error, Result};
use crate::linforms::{matveev_coefficient, solve_index_bound};
use crate::reduction::{self, ReductionProblem, ReductionStatus, SweepSpec};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub policy: PrecisionPolicy,
    /// Exhaustive search covers `0 ≤ m ≤ n ≤ window`.
    pub window: u64,
    /// Overrides the reduction bound `M`.
    pub m_override: Option<BigInt>,
    /// Overrides the convergent used by the reductions.
    pub q_index: Option<usize>,
    /// Overrides the upper end of the shift sweep.
    pub sweep_hi: Option<u64>,
    /// Worker threads for search and sweeps; 0 uses every core.
    pub jobs: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            policy: PrecisionPolicy::default(),
            window: 200,
            m_override: None,
            q_index: None,
            sweep_hi: None,
            jobs: 0,
        }
    }
}

/// Per-equation constants and the reference values they are compared with.
struct Setup {
    eq: Equation,
    first: LinearFormInstance,
    second: LinearFormInstance,
    m: BigInt,
    q_index: usize,
    sweep_hi: u64,
    /// `log` of the base of the Matveev variable's growth (`c0`).
    c0: RealExpr,
    /// `c1 = factor·K₂`, `c3 = factor·K₁`
    factor: u32,
    variable: &'static str,
    exclusions: BTreeMap<u64, String>,
    quoted: Quoted,
}

struct Quoted {
    k1: &'static str,
    k2: &'static str,
    global: &'static str,
    global_value: (u64, usize),
    epsilon: &'static str,
    shift: &'static str,
    sweep_min: &'static str,
    sweep_min_at: Option<u64>,
    sweep: &'static str,
}

const QUOTED_C1: &str = "1.4938e12";
const QUOTED_C2: &str = "6.79e11";

fn pow10(n: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), n)
}

impl Setup {
    fn new(eq: Equation, cfg: &PipelineConfig) -> Setup {
        match eq {
            Equation::JjL => Setup {
                eq,
                first: LinearFormInstance::zeta1(),
                second: LinearFormInstance::zeta2(),
                m: cfg
                    .m_override
                    .clone()
                    .unwrap_or_else(|| BigInt::from(3) * pow10(29)),
                q_index: cfg.q_index.unwrap_or(75),
                sweep_hi: cfg.sweep_hi.unwrap_or(128),
                c0: RealExpr::log(RealExpr::int(2)),
                factor: 2,
                variable: "k",
                exclusions: BTreeMap::from([(
                    1,
                    "n-m = 1: J_m + J_(m+1) = 2^m, handled by the Legendre branch".to_string(),
                )]),
                quoted: Quoted {
                    k1: "3e12",
                    k2: "1.37e12",
                    global: "n < k < 1.1e29",
                    global_value: (11, 28),
                    epsilon: "0.140378035627",
                    shift: "n-m < 127",
                    sweep_min: "0.00343788493",
                    sweep_min_at: Some(121),
                    sweep: "n < 200",
                },
            },
            Equation::LlJ => Setup {
                eq,
                first: LinearFormInstance::zeta3(),
                second: LinearFormInstance::zeta4(),
                m: cfg
                    .m_override
                    .clone()
                    .unwrap_or_else(|| BigInt::from(4) * pow10(28)),
                q_index: cfg.q_index.unwrap_or(70),
                sweep_hi: cfg.sweep_hi.unwrap_or(168),
                c0: RealExpr::log(RealExpr::Phi),
                factor: 1,
                variable: "n",
                exclusions: BTreeMap::new(),
                quoted: Quoted {
                    k1: "3e12",
                    k2: "1.37e12",
                    global: "n < 3.7e28",
                    global_value: (37, 27),
                    epsilon: "0.0328403974748",
                    shift: "n-m < 168",
                    sweep_min: "0.004",
                    sweep_min_at: None,
                    sweep: "n < 172",
                },
            },
        }
    }
}

pub fn certify_jj_equals_l(cfg: &PipelineConfig) -> CertificationReport {
    certify(Equation::JjL, cfg)
}

pub fn certify_ll_equals_j(cfg: &PipelineConfig) -> CertificationReport {
    certify(Equation::LlJ, cfg)
}

pub fn certify(eq: Equation, cfg: &PipelineConfig) -> CertificationReport {
    if cfg.jobs > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
        {
            return pool.install(|| Run::new(eq, cfg).execute());
        }
    }
    Run::new(eq, cfg).execute()
}

/// Values carried from one stage to the next.
#[derive(Default)]
struct Carry {
    k1: Option<BigRational>,
    k2: Option<BigRational>,
    table: Option<ContinuedFractionTable>,
    q_index: Option<usize>,
}

struct Run<'a> {
    cfg: &'a PipelineConfig,
    setup: Setup,
    u: BinaryRecurrence,
    v: BinaryRecurrence,
    report: CertificationReport,
    carry: Carry,
    halted: bool,
}

type StageOutput = Result<(StageDetails, Option<String>)>;

impl<'a> Run<'a> {
    fn new(eq: Equation, cfg: &'a PipelineConfig) -> Run<'a> {
        let (u, v) = eq.families();
        Run {
            cfg,
            setup: Setup::new(eq, cfg),
            u: u.recurrence(),
            v: v.recurrence(),
            report: CertificationReport {
                equation: eq,
                window: cfg.window,
                solutions: Vec::new(),
                stages: Vec::new(),
                ceilings: Ceilings::default(),
                verdict: Verdict::Incomplete,
                failing_stage: None,
                timings_ms: BTreeMap::new(),
            },
            carry: Carry::default(),
            halted: false,
        }
    }

    fn execute(mut self) -> CertificationReport {
        self.stage("search", Self::search);
        self.stage("index_relation", Self::index_relation);
        self.stage("matveev_first", Self::matveev_first);
        self.stage("matveev_second", Self::matveev_second);
        self.stage("global_bound", Self::global_bound);
        self.stage("reduction", Self::reduction);
        self.stage("sweep", Self::sweep);
        if self.setup.eq == Equation::JjL {
            self.stage("legendre", Self::legendre);
        }
        self.finish()
    }

    /// Runs one stage unless an earlier one failed. A stage returns its
    /// details and, when its conclusion does not hold, a failure message.
    fn stage(&mut self, name: &str, f: fn(&mut Self) -> StageOutput) {
        if self.halted {
            return;
        }
        let start = Instant::now();
        let out = f(self);
        let ms = start.elapsed().as_millis() as u64;
        self.report.timings_ms.insert(name.to_string(), ms);
        let record = match out {
            Ok((details, None)) => StageRecord {
                name: name.into(),
                status: StageStatus::Success,
                message: None,
                details: Some(details),
            },
            Ok((details, Some(msg))) => StageRecord {
                name: name.into(),
                status: StageStatus::Failure,
                message: Some(msg),
                details: Some(details),
            },
            Err(e) => StageRecord {
                name: name.into(),
                status: if e.is_precision_exhausted() {
                    StageStatus::PrecisionExhausted
                } else {
                    StageStatus::Failure
                },
                message: Some(e.to_string()),
                details: None,
            },
        };
        if record.status != StageStatus::Success {
            self.halted = true;
            self.report.failing_stage = Some(name.to_string());
        }
        self.report.stages.push(record);
    }

    fn finish(mut self) -> CertificationReport {
        let c = &mut self.report.ceilings;
        if !self.halted {
            c.final_n = c.sweep_n.max(c.legendre_n);
            match c.final_n {
                Some(n) if n <= self.cfg.window => self.report.verdict = Verdict::Complete,
                Some(n) => {
                    self.report.failing_stage = Some("verdict".into());
                    self.report.stages.push(StageRecord {
                        name: "verdict".into(),
                        status: StageStatus::Failure,
                        message: Some(format!(
                            "final ceiling n <= {n} exceeds the search window {}",
                            self.cfg.window
                        )),
                        details: None,
                    });
                }
                None => self.report.failing_stage = Some("verdict".into()),
            }
        }
        self.report
    }

    fn policy(&self) -> &PrecisionPolicy {
        &self.cfg.policy
    }

    fn search(&mut self) -> StageOutput {
        let sols = enumerate_solutions(&self.u, &self.v, self.cfg.window);
        for t in &sols {
            SolutionTriple::new(&self.u, &self.v, t.n, t.m, t.k)?;
        }
        self.report.solutions = sols;
        Ok((
            StageDetails::Search(SearchStage {
                n_max: self.cfg.window,
                count: self.report.solutions.len(),
            }),
            None,
        ))
    }

    fn index_relation(&mut self) -> StageOutput {
        let rel = index_relation(&self.u, &self.v, self.policy())?;
        let msg = (rel.simplified_from > self.cfg.window).then(|| {
            format!(
                "{} only holds from n = {}, beyond the window {}",
                rel.simplified, rel.simplified_from, self.cfg.window
            )
        });
        Ok((StageDetails::IndexRelation(rel), msg))
    }

    /// `(n−m)·log B < K₁·log X` from `log c − w·log B > −C₁(1 + log X)`.
    fn matveev_first(&mut self) -> StageOutput {
        let form = self.setup.first.clone();
        let bound = matveev_coefficient(&form.matveev_input(), self.policy())?;
        let checked = self
            .policy()
            .run(|bits| form.check_a_values(0, bits).map(|_| true))?;
        let c_hi = bound.c_interval.hi_rational();
        let log_c = |bits| form.log_error_c(bits);
        let k1 = self.multiplier(&bound.c_interval, &log_c, 1)?;
        self.carry.k1 = Some(k1.clone());
        let quoted_c = quoted_value(QUOTED_C1);
        let w_log = match self.setup.eq {
            Equation::JjL => "(n-m)*log(2)",
            Equation::LlJ => "(n-m)*log(phi)",
        };
        Ok((
            StageDetails::Matveev(MatveevStage {
                form: form.label,
                expression: form.expression.into(),
                t: 3,
                d: 2,
                a: form.a_list(),
                b: form.b_index.into(),
                a_values_checked: checked,
                c: bound.c,
                quoted_c_ceiling: QUOTED_C1.into(),
                c_below_quoted: c_hi < quoted_c,
                multiplier: sci(&k1),
                quoted_multiplier: self.setup.quoted.k1.into(),
                inequality: format!("{w_log} < {}*log({})", sci(&k1), form.b_index),
            }),
            (c_hi >= quoted_c).then(|| format!("C = {} is not below {QUOTED_C1}", sci(&c_hi))),
        ))
    }

    /// `n·log B < K₂·log X·A₃` from the shifted form, `A₃ ≥ 4`.
    fn matveev_second(&mut self) -> StageOutput {
        let form = self.setup.second.clone();
        let bound = matveev_coefficient(&form.matveev_input(), self.policy())?;
        let window = self.cfg.window.max(256);
        let checked = self
            .policy()
            .run(|bits| form.check_a_values(window, bits).map(|_| true))?;
        let c_hi = bound.c_interval.hi_rational();
        let log_c = |bits| form.log_error_c(bits);
        let k2 = self.multiplier(&bound.c_interval, &log_c, 4)?;
        self.carry.k2 = Some(k2.clone());
        let quoted_c = quoted_value(QUOTED_C2);
        let a3 = form.a_list()[2].clone();
        let n_log = match self.setup.eq {
            Equation::JjL => "n*log(2)",
            Equation::LlJ => "n*log(phi)",
        };
        Ok((
            StageDetails::Matveev(MatveevStage {
                form: form.label,
                expression: form.expression.into(),
                t: 3,
                d: 2,
                a: form.a_list(),
                b: form.b_index.into(),
                a_values_checked: checked,
                c: bound.c,
                quoted_c_ceiling: QUOTED_C2.into(),
                c_below_quoted: c_hi < quoted_c,
                multiplier: sci(&k2),
                quoted_multiplier: self.setup.quoted.k2.into(),
                inequality: format!("{n_log} < {}*log({})*({a3})", sci(&k2), form.b_index),
            }),
            (c_hi >= quoted_c).then(|| format!("C = {} is not below {QUOTED_C2}", sci(&c_hi))),
        ))
    }

    /// Smallest three-digit `K ≥ 2C` with `(K − 2C)·a_min ≥ log c`, so that
    /// `log c + C(1 + L)·A ≤ K·L·A` for all `L ≥ 1` and `A ≥ a_min`.
    fn multiplier(
        &self,
        c: &CertifiedReal,
        log_c: &dyn Fn(u32) -> Result<CertifiedReal>,
        a_min: u32,
    ) -> Result<BigRational> {
        let two_c = c.hi_rational() * BigRational::from_integer(2.into());
        let mut k = round_up_decimal(&two_c, 3);
        let step = {
            let e = decimal_exponent(&k);
            ten_pow(e - 2)
        };
        loop {
            let ok = self.policy().run(|bits| {
                let slack = CertifiedReal::from_rational(&k, bits)
                    .sub(&c.mul_int(&BigInt::from(2)))
                    .mul_int(&BigInt::from(a_min));
                slack
                    .lt(&log_c(bits)?)
                    .map(|short| !short)
                    .ok_or(Error::Cert(CertError::Ambiguous { bits }))
            })?;
            if ok {
                return Ok(k);
            }
            k += &step;
        }
    }

    fn global_bound(&mut self) -> StageOutput {
        let (k1, k2) = match (&self.carry.k1, &self.carry.k2) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => return Err(Error::Invariant("Matveev stages did not run".into())),
        };
        let f = BigRational::from_integer(self.setup.factor.into());
        let c0 = self.setup.c0.clone();
        let c1 = RealExpr::Rational(&k2 * &f);
        let c2 = RealExpr::int(4);
        let c3 = RealExpr::Rational(&k1 * &f);
        let b = solve_index_bound(&c0, &c1, &c2, &c3, self.policy())?;
        // variable < bound, so variable ≤ bound − 1 must not exceed M
        let m_covers = &b.bound - 1u32 <= self.setup.m;
        let (mant, exp) = self.setup.quoted.global_value;
        let within_quoted = b.bound <= BigInt::from(mant) * pow10(exp);
        self.report.ceilings.global_bound = Some(format!("{} < {}", self.setup.variable, b.bound));
        let msg = (!m_covers)
            .then(|| format!("M = {} is below the global bound {}", self.setup.m, b.bound));
        Ok((
            StageDetails::GlobalBound(GlobalBoundStage {
                variable: self.setup.variable.into(),
                c0: c0.to_string(),
                c1: sci(&(&k2 * &f)),
                c2: "4".into(),
                c3: sci(&(&k1 * &f)),
                bound: b.bound.to_string(),
                least: b.least,
                quoted_bound: self.setup.quoted.global.into(),
                within_quoted,
                m: self.setup.m.to_string(),
                m_covers_bound: m_covers,
            }),
            msg,
        ))
    }

    /// Picks the configured convergent when it clears `6M`, else the first
    /// that does.
    fn convergent(&mut self, alpha: &RealExpr) -> Result<(ContinuedFractionTable, usize, String)> {
        if let (Some(t), Some(i)) = (&self.carry.table, self.carry.q_index) {
            return Ok((t.clone(), i, "shared with the first reduction".into()));
        }
        let six_m = &self.setup.m * 6u32;
        let mut table = contfrac::expand(alpha, self.setup.q_index.max(40) + 1, self.policy())?;
        let (index, how) = if table.q(self.setup.q_index) > &six_m {
            (self.setup.q_index, "configured index, q > 6M".to_string())
        } else {
            let (i, _) = contfrac::first_denominator_exceeding(&mut table, &six_m)?;
            (i, "first q > 6M".to_string())
        };
        self.carry.table = Some(table.clone());
        self.carry.q_index = Some(index);
        Ok((table, index, how))
    }

    fn reduction(&mut self) -> StageOutput {
        let form = self.setup.first.clone();
        let mu = match &form.mu {
            MuShape::Fixed(mu) => mu.clone(),
            MuShape::Template(_) => {
                return Err(Error::Invariant("first form takes a fixed mu".into()))
            }
        };
        let prob = ReductionProblem::new(
            form.alpha.clone(),
            mu.clone(),
            form.a.clone(),
            form.b.clone(),
            self.setup.m.clone(),
        )?;
        let (table, index, how) = self.convergent(&form.alpha)?;
        let threshold = self.policy().run(|bits| {
            form.check_reduction_constant(bits)?;
            form.validity_threshold(bits)
        })?;
        let r = reduction::reduce_once(&prob, &table, index, self.policy())?;
        if r.status == ReductionStatus::PrecisionExhausted {
            return Err(CertError::PrecisionExhausted {
                ceiling: self.policy().ceiling,
            }
            .into());
        }
        let omega = r.omega_bound.as_ref().and_then(|w| w.to_u64());
        let ceiling = omega.map(|w| w.max(threshold.saturating_sub(1)));
        self.report.ceilings.shift = ceiling;
        let msg =
            (r.status != ReductionStatus::Success).then(|| "epsilon is not positive".to_string());
        Ok((
            StageDetails::Reduction(ReductionStage {
                form: form.label,
                alpha: form.alpha.to_string(),
                mu: mu.to_string(),
                a: form.a.to_string(),
                b: form.b.to_string(),
                m: self.setup.m.to_string(),
                q_index: index,
                q: r.q_used.to_string(),
                q_selection: how,
                epsilon: r.epsilon.clone(),
                quoted_epsilon: self.setup.quoted.epsilon.into(),
                status: r.status,
                omega: form.w.into(),
                omega_bound: omega,
                validity_threshold: threshold,
                ceiling,
                quoted_ceiling: self.setup.quoted.shift.into(),
            }),
            msg,
        ))
    }

    fn sweep(&mut self) -> StageOutput {
        let form = self.setup.second.clone();
        let template = match &form.mu {
            MuShape::Template(t) => t.clone(),
            MuShape::Fixed(_) => {
                return Err(Error::Invariant("second form takes a mu template".into()))
            }
        };
        let shift = self
            .report
            .ceilings
            .shift
            .ok_or_else(|| Error::Invariant("no shift ceiling".into()))?;
        let s_hi = self.setup.sweep_hi.max(shift);
        let (table, index, _) = self.convergent(&form.alpha)?;
        let threshold = self.policy().run(|bits| {
            form.check_reduction_constant(bits)?;
            form.validity_threshold(bits)
        })?;
        let spec = SweepSpec {
            problem: ReductionProblem::new(
                form.alpha.clone(),
                template.instantiate(0)?,
                form.a.clone(),
                form.b.clone(),
                self.setup.m.clone(),
            )?,
            template: template.clone(),
            s_lo: 0,
            s_hi,
            exclusions: self.setup.exclusions.clone(),
            q_index: index,
        };
        let out = reduction::reduce_sweep(&spec, &table, self.policy(), 0)?;
        let worst = out.worst_omega_bound.as_ref().and_then(|w| w.to_u64());
        let n_ceiling = worst.map(|w| (w + form.omega_offset).max(threshold.saturating_sub(1)));
        self.report.ceilings.sweep_n = n_ceiling;
        let omega = if form.omega_offset == 0 {
            form.w.to_string()
        } else {
            format!("{}-{}", form.w, form.omega_offset)
        };
        let msg = (!out.nonpositive.is_empty())
            .then(|| format!("epsilon <= 0 for n-m in {:?}", out.nonpositive));
        Ok((
            StageDetails::Sweep(SweepStage {
                form: form.label,
                template: template.as_str().into(),
                s_lo: 0,
                s_hi,
                a: form.a.to_string(),
                b: form.b.to_string(),
                m: self.setup.m.to_string(),
                q_index: index,
                q: out.q_used.to_string(),
                min_epsilon: out.min_epsilon.clone(),
                min_epsilon_at: out.min_epsilon_at,
                quoted_min_epsilon: self.setup.quoted.sweep_min.into(),
                quoted_min_epsilon_at: self.setup.quoted.sweep_min_at,
                nonpositive: out.nonpositive.clone(),
                excluded: out
                    .excluded
                    .iter()
                    .map(|x| ExcludedRow {
                        s: x.s,
                        reason: x.reason.clone(),
                        epsilon: x.epsilon.as_ref().map(short),
                        status: x.status,
                    })
                    .collect(),
                omega,
                worst_omega_bound: worst,
                worst_omega_at: out.worst_omega_at,
                validity_threshold: threshold,
                n_ceiling,
                quoted_ceiling: self.setup.quoted.sweep.into(),
                shifts: out
                    .shifts
                    .iter()
                    .map(|r| ShiftRow {
                        s: r.s,
                        epsilon: r.epsilon.as_ref().map(short),
                        omega_bound: r.omega_bound.as_ref().and_then(|w| w.to_u64()),
                        status: r.status,
                    })
                    .collect(),
            }),
            msg,
        ))
    }

    /// `n − m = 1`: `J_m + J_{m+1} = 2^m`, so `L_k = 2^e`. Legendre's bound
    /// `|kα − e| > 1/((b+2)k)` against `|kα − e| < 18/2^e` caps `e`.
    fn legendre(&mut self) -> StageOutput {
        const IDENTITY_TO: u64 = 200;
        let j = BinaryRecurrence::jacobsthal();
        let js = j.terms(IDENTITY_TO + 1);
        for s in 0..=IDENTITY_TO as usize {
            if &js[s] + &js[s + 1] != BigInt::from(1) << s {
                return Err(Error::Invariant(format!("J_{s} + J_{} != 2^{s}", s + 1)));
            }
        }
        let m = self.setup.m.clone();
        let mut table = match &self.carry.table {
            Some(t) => t.clone(),
            None => contfrac::expand(&self.setup.first.alpha, 80, self.policy())?,
        };
        contfrac::first_denominator_exceeding(&mut table, &m)?;
        let lb = contfrac::legendre_lower_bound(&table, &m)?;
        // 2^e < 18·(b + 2)·k ≤ 18·(b + 2)·M
        let cap: BigInt = BigInt::from(18) * (&lb.b + 2u32) * &m;
        let e_max = (&cap - 1u32).bits() - 1;
        let threshold = self
            .policy()
            .run(|bits| self.setup.first.validity_threshold(bits))?;
        let e_ceiling = e_max.max(threshold.saturating_sub(1));
        let n_ceiling = e_ceiling + 1;
        let targets = power_of_two_targets(&self.v, e_ceiling);
        let mut branch = Vec::new();
        for &(k, e) in &targets {
            branch.push(SolutionTriple::new(&self.u, &self.v, e + 1, e, k)?);
        }
        let in_search = branch
            .iter()
            .all(|t| t.n > self.cfg.window || self.report.solutions.contains(t));
        self.report.ceilings.legendre_n = Some(n_ceiling);
        let msg = (!in_search).then(|| "a branch solution is missing from the search".to_string());
        Ok((
            StageDetails::Legendre(LegendreStage {
                identity_checked_to: IDENTITY_TO,
                inequality: "|k*log(phi)/log(2) - e| < 18/2^e with L_k = 2^e, e = m = n-1".into(),
                m: m.to_string(),
                n_star: lb.n_star,
                q_before: lb.q_before.to_string(),
                q_n_star: lb.q_n_star.to_string(),
                b: lb.b.to_string(),
                quoted_b: "134".into(),
                lower_bound: lb.statement(),
                power_bound: format!("2^e < {}", sci(&BigRational::from_integer(cap))),
                quoted_power_bound: "2^n < 1.944e32".into(),
                exponent_ceiling: e_ceiling,
                n_ceiling,
                quoted_n_ceiling: "n <= 110".into(),
                targets: targets.iter().map(|&(k, e)| PowerTarget { k, e }).collect(),
                branch_solutions: branch,
                branch_in_search: in_search,
            }),
            msg,
        ))
    }
}

fn short(s: &RealSummary) -> String {
    let mid: f64 = s.mid_f64();
    format!("{mid:.15e}")
}

/// Short scientific form; exact for the decimal constants printed here.
fn sci(r: &BigRational) -> String {
    format_sci_up(r, 12)
}

fn quoted_value(s: &str) -> BigRational {
    let (mant, exp) = s.split_once('e').unwrap_or((s, "0"));
    let mant =
        crate::certreal::parse_decimal(mant).unwrap_or_else(|| unreachable!("quoted constant {s}"));
    let exp: i64 = exp
        .parse()
        .unwrap_or_else(|_| unreachable!("quoted constant {s}"));
    mant * ten_pow(exp)
}

fn ten_pow(e: i64) -> BigRational {
    let p = BigRational::from_integer(pow10(e.unsigned_abs() as usize));
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn decimal_exponent(r: &BigRational) -> i64 {
    let mut e = r.numer().to_string().len() as i64 - r.denom().to_string().len() as i64;
    while ten_pow(e) > *r {
        e -= 1;
    }
    while ten_pow(e + 1) <= *r {
        e += 1;
    }
    e
}
