//! Solution search, index relations, and the certification pipelines.

mod forms;
mod pipeline;
mod report;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigseq::{is_power_of_two, BinaryRecurrence, Family};
use crate::certreal::{CertifiedReal, PrecisionPolicy, RealExpr};
use crate::error::{Error, Result};

pub use forms::{FormLabel, LinearFormInstance, MuShape};
pub use pipeline::{certify, certify_jj_equals_l, certify_ll_equals_j, PipelineConfig};
pub use report::{
    cross_check, Ceilings, CertificationReport, CrossCheck, StageDetails, StageRecord, StageStatus,
    Verdict,
};

/// `U_n + U_m = V_k` for one of the two built-in pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Equation {
    /// `J_n + J_m = L_k`
    #[serde(rename = "jj-l")]
    JjL,
    /// `L_n + L_m = J_k`
    #[serde(rename = "ll-j")]
    LlJ,
}

impl Equation {
    pub fn families(self) -> (Family, Family) {
        match self {
            Equation::JjL => (Family::Jacobsthal, Family::Lucas),
            Equation::LlJ => (Family::Lucas, Family::Jacobsthal),
        }
    }

    pub fn from_families(u: Family, v: Family) -> Result<Equation> {
        match (u, v) {
            (Family::Jacobsthal, Family::Lucas) => Ok(Equation::JjL),
            (Family::Lucas, Family::Jacobsthal) => Ok(Equation::LlJ),
            _ => Err(Error::UnsupportedFamily(format!("{u} + {u} = {v}"))),
        }
    }

    pub fn holds(self, t: &SolutionTriple) -> bool {
        let (u, v) = self.families();
        let (u, v) = (u.recurrence(), v.recurrence());
        u.term(t.n) + u.term(t.m) == v.term(t.k)
    }

    pub fn describe(self) -> &'static str {
        match self {
            Equation::JjL => "J_n + J_m = L_k",
            Equation::LlJ => "L_n + L_m = J_k",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::JjL => "jj-l",
            Equation::LlJ => "ll-j",
        })
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Equation> {
        match s {
            "jj-l" => Ok(Equation::JjL),
            "ll-j" => Ok(Equation::LlJ),
            _ => Err(Error::InvalidInput(format!(
                "unknown equation {s:?} (expected jj-l or ll-j)"
            ))),
        }
    }
}

/// `(n, m, k)` with `n ≥ m` and `U_n + U_m = V_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionTriple {
    pub n: u64,
    pub m: u64,
    pub k: u64,
}

impl SolutionTriple {
    /// Checks the equation exactly.
    pub fn new(
        u: &BinaryRecurrence,
        v: &BinaryRecurrence,
        n: u64,
        m: u64,
        k: u64,
    ) -> Result<SolutionTriple> {
        if m > n {
            return Err(Error::InvalidInput(format!("m = {m} exceeds n = {n}")));
        }
        if u.term(n) + u.term(m) != v.term(k) {
            return Err(Error::Invariant(format!(
                "{}_{n} + {}_{m} ≠ {}_{k}",
                u.name(),
                u.name(),
                v.name()
            )));
        }
        Ok(SolutionTriple { n, m, k })
    }
}

impl fmt::Display for SolutionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.m, self.k)
    }
}

/// Every `(n, m, k)` with `0 ≤ m ≤ n ≤ n_max` and `U_n + U_m = V_k`, sorted.
pub fn enumerate_solutions(
    u: &BinaryRecurrence,
    v: &BinaryRecurrence,
    n_max: u64,
) -> Vec<SolutionTriple> {
    let us = u.terms(n_max);
    let top = us.iter().max().cloned().unwrap_or_default() * 2;
    let mut index: HashMap<BigInt, Vec<u64>> = HashMap::new();
    for (k, value) in v.terms_up_to_value(&top) {
        index.entry(value).or_default().push(k);
    }
    let mut out: Vec<SolutionTriple> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut found = Vec::new();
            for m in 0..=n {
                let sum = &us[n as usize] + &us[m as usize];
                for &k in index.get(&sum).into_iter().flatten() {
                    found.push(SolutionTriple { n, m, k });
                }
            }
            found
        })
        .collect();
    out.sort();
    debug_assert!(out.iter().all(|t| u.term(t.n) + u.term(t.m) == v.term(t.k)));
    out
}

/// Triple loop over `m ≤ n ≤ n_max`, `k ≤ k_max`, with no shared tables.
pub fn naive_solutions(
    u: &BinaryRecurrence,
    v: &BinaryRecurrence,
    n_max: u64,
    k_max: u64,
) -> Vec<SolutionTriple> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n {
            let sum = u.term(n) + u.term(m);
            for k in 0..=k_max {
                if v.term(k) == sum {
                    out.push(SolutionTriple { n, m, k });
                }
            }
        }
    }
    out
}

/// Linear window for `k` in terms of `n`, derived from the growth bounds.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IndexRelation {
    pub equation: Equation,
    pub derivation: Vec<String>,
    pub k_lower: String,
    pub k_upper: String,
    /// The simplified relation and the first `n` from which it holds.
    pub simplified: String,
    pub simplified_from: u64,
    pub validated_from: u64,
    pub validated_to: u64,
}

struct Window {
    lower_slope: RealExpr,
    lower_offset: i64,
    lower_add: i64,
    upper_slope: RealExpr,
    upper_add: i64,
}

impl Window {
    fn for_equation(eq: Equation) -> Window {
        let r = |s: &str| RealExpr::parse(s).unwrap_or_else(|e| unreachable!("{e}"));
        match eq {
            // (n − 3)·log 2/log θ ≤ k ≤ n·log 2/log θ + 1
            Equation::JjL => Window {
                lower_slope: r("log(2)/log(phi)"),
                lower_offset: -3,
                lower_add: 0,
                upper_slope: r("log(2)/log(phi)"),
                upper_add: 1,
            },
            // (n − 1)·log θ/log 2 + 1 ≤ k ≤ n·log θ/log 2 + 4
            Equation::LlJ => Window {
                lower_slope: r("log(phi)/log(2)"),
                lower_offset: -1,
                lower_add: 1,
                upper_slope: r("log(phi)/log(2)"),
                upper_add: 4,
            },
        }
    }

    /// Integer range `[k_lo, k_hi]` implied for index `n`.
    fn at(&self, n: u64, policy: &PrecisionPolicy) -> Result<(i64, i64)> {
        policy.run(|bits| {
            let lo = self
                .lower_slope
                .eval(bits)?
                .mul_int(&BigInt::from(n as i64 + self.lower_offset))
                .add(&CertifiedReal::from_int(self.lower_add, bits));
            let hi = self
                .upper_slope
                .eval(bits)?
                .mul_int(&BigInt::from(n))
                .add(&CertifiedReal::from_int(self.upper_add, bits));
            // ceil(lo) = −floor(−lo)
            let k_lo = -lo.neg().certified_floor()?;
            let k_hi = hi.certified_floor()?;
            let to_i64 = |b: BigInt| {
                i64::try_from(b).map_err(|_| Error::InvalidInput("index overflow".into()))
            };
            Ok::<_, Error>((to_i64(k_lo)?, to_i64(k_hi)?))
        })
    }
}

pub const INDEX_VALIDATION_RANGE: (u64, u64) = (5, 500);

/// Derives and numerically validates the relation between `k` and `n`.
pub fn index_relation(
    u: &BinaryRecurrence,
    v: &BinaryRecurrence,
    policy: &PrecisionPolicy,
) -> Result<IndexRelation> {
    let eq = match (family_of(u), family_of(v)) {
        (Some(a), Some(b)) => Equation::from_families(a, b)?,
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "{} / {}",
                u.name(),
                v.name()
            )))
        }
    };
    let w = Window::for_equation(eq);
    let (derivation, k_lower, k_upper, simplified) = match eq {
        Equation::JjL => (
            vec![
                "L_k = J_n + J_m >= J_n >= 2^(n-2) and L_k <= 2*theta^k, so k >= (n-3)*log 2/log theta".to_string(),
                "theta^(k-1) <= L_k <= 2*J_n <= 2^n, so k <= n*log 2/log theta + 1".to_string(),
            ],
            "(n-3)*log(2)/log(phi)",
            "n*log(2)/log(phi) + 1",
            "n < k < 2n",
        ),
        Equation::LlJ => (
            vec![
                "2^(k-2) <= J_k = L_n + L_m <= 2*L_n <= 4*theta^n, so k <= n*log theta/log 2 + 4".to_string(),
                "2^(k-1) >= J_k >= L_n >= theta^(n-1), so k >= (n-1)*log theta/log 2 + 1".to_string(),
            ],
            "(n-1)*log(phi)/log(2) + 1",
            "n*log(phi)/log(2) + 4",
            "k < n",
        ),
    };
    let (from, to) = INDEX_VALIDATION_RANGE;
    let u_terms = u.terms(to);
    let v_terms = v.terms(2 * to + 8);
    let mut simplified_from = None;
    for n in from..=to {
        let (k_lo, k_hi) = w.at(n, policy)?;
        let un = &u_terms[n as usize];
        let min_um = u_terms[..=n as usize]
            .iter()
            .min()
            .cloned()
            .unwrap_or_default();
        let (s_min, s_max) = (un + min_um, un * 2);
        // no V_k outside [k_lo, k_hi] can reach a sum U_n + U_m
        let below_ok = v_terms[..k_lo.max(0) as usize].iter().all(|x| x < &s_min);
        let above_ok = v_terms[(k_hi + 1).max(0) as usize..]
            .iter()
            .all(|x| x > &s_max);
        if !below_ok || !above_ok {
            return Err(Error::Invariant(format!(
                "index window [{k_lo}, {k_hi}] misses candidates at n = {n}"
            )));
        }
        let simple = match eq {
            Equation::JjL => k_lo > n as i64 && k_hi < 2 * n as i64,
            Equation::LlJ => k_hi < n as i64,
        };
        match (simple, simplified_from) {
            (true, None) => simplified_from = Some(n),
            (false, Some(_)) => simplified_from = None,
            _ => {}
        }
    }
    let simplified_from = simplified_from
        .ok_or_else(|| Error::Invariant(format!("{simplified} fails at n = {to}")))?;
    Ok(IndexRelation {
        equation: eq,
        derivation,
        k_lower: k_lower.into(),
        k_upper: k_upper.into(),
        simplified: simplified.into(),
        simplified_from,
        validated_from: from,
        validated_to: to,
    })
}

fn family_of(r: &BinaryRecurrence) -> Option<Family> {
    [Family::Lucas, Family::Jacobsthal]
        .into_iter()
        .find(|f| &f.recurrence() == r)
}

/// All `(k, e)` with `U_k = 2^e` and `e ≤ exponent_bound`, sorted by `(e, k)`.
pub fn power_of_two_targets(rec: &BinaryRecurrence, exponent_bound: u64) -> Vec<(u64, u64)> {
    let bound = BigInt::from(1) << exponent_bound;
    let mut out: Vec<(u64, u64)> = rec
        .terms_up_to_value(&bound)
        .into_iter()
        .filter_map(|(k, v)| is_power_of_two(&v).map(|e| (k, e)))
        .filter(|&(_, e)| e <= exponent_bound)
        .collect();
    out.sort_by_key(|&(k, e)| (e, k));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u64, m: u64, k: u64) -> SolutionTriple {
        SolutionTriple { n, m, k }
    }

    #[test]
    fn theorem_solution_sets() {
        let (j, l) = (BinaryRecurrence::jacobsthal(), BinaryRecurrence::lucas());
        let mut expect = vec![
            t(1, 1, 0),
            t(2, 1, 0),
            t(2, 2, 0),
            t(1, 0, 1),
            t(2, 0, 1),
            t(3, 0, 2),
            t(3, 1, 3),
            t(3, 2, 3),
            t(5, 0, 5),
        ];
        expect.sort();
        assert_eq!(enumerate_solutions(&j, &l, 200), expect);
        let expect = vec![
            t(1, 0, 3),
            t(2, 0, 4),
            t(3, 1, 4),
            t(4, 3, 5),
            t(6, 2, 6),
            t(15, 1, 12),
        ];
        assert_eq!(enumerate_solutions(&l, &j, 200), expect);
        assert_eq!(enumerate_solutions(&j, &l, 1), vec![t(1, 0, 1), t(1, 1, 0)]);
    }

    #[test]
    fn naive_loop_agrees_on_small_range() {
        let (j, l) = (BinaryRecurrence::jacobsthal(), BinaryRecurrence::lucas());
        assert_eq!(
            enumerate_solutions(&j, &l, 20),
            naive_solutions(&j, &l, 20, 88)
        );
        assert_eq!(
            enumerate_solutions(&l, &j, 20),
            naive_solutions(&l, &j, 20, 88)
        );
    }

    #[test]
    fn triple_construction_checks_equation() {
        let (j, l) = (BinaryRecurrence::jacobsthal(), BinaryRecurrence::lucas());
        assert!(SolutionTriple::new(&j, &l, 5, 0, 5).is_ok());
        assert!(SolutionTriple::new(&j, &l, 5, 0, 6).is_err());
        assert!(SolutionTriple::new(&j, &l, 0, 5, 5).is_err());
    }

    #[test]
    fn index_relations() {
        let p = PrecisionPolicy::default();
        let (j, l) = (BinaryRecurrence::jacobsthal(), BinaryRecurrence::lucas());
        let r = index_relation(&j, &l, &p).unwrap();
        assert_eq!(r.simplified, "n < k < 2n");
        assert_eq!(r.simplified_from, 10);
        let r = index_relation(&l, &j, &p).unwrap();
        assert_eq!(r.simplified, "k < n");
        assert_eq!(r.simplified_from, 14);
        assert!(matches!(
            index_relation(&l, &l, &p),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn powers_of_two_in_sequences() {
        let (j, l) = (BinaryRecurrence::jacobsthal(), BinaryRecurrence::lucas());
        assert_eq!(power_of_two_targets(&l, 110), vec![(1, 0), (0, 1), (3, 2)]);
        assert_eq!(power_of_two_targets(&l, 0), vec![(1, 0)]);
        assert_eq!(power_of_two_targets(&j, 10), vec![(1, 0), (2, 0)]);
    }

    #[test]
    fn equation_names_round_trip() {
        for eq in [Equation::JjL, Equation::LlJ] {
            assert_eq!(eq.to_string().parse::<Equation>().unwrap(), eq);
            assert_eq!(serde_json::to_string(&eq).unwrap(), format!("\"{eq}\""));
        }
    }
}
