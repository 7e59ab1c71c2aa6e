//! Certified continued fractions and Legendre's criterion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::certreal::{CertError, CertifiedReal, PrecisionPolicy, RealExpr};
use crate::error::{Error, Result};

/// Partial quotients `a_0 … a_N` of a real number and its exact convergents
/// `p_i / q_i`.
#[derive(Clone, Debug)]
pub struct ContinuedFractionTable {
    source: RealExpr,
    quotients: Vec<BigInt>,
    convergents: Vec<(BigInt, BigInt)>,
    bits: u32,
    policy: PrecisionPolicy,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergentRow {
    pub index: usize,
    pub a: String,
    pub p: String,
    pub q: String,
}

impl ContinuedFractionTable {
    pub fn source(&self) -> &RealExpr {
        &self.source
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Precision at which every quotient was certified.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn q(&self, i: usize) -> &BigInt {
        &self.convergents[i].1
    }

    pub fn p(&self, i: usize) -> &BigInt {
        &self.convergents[i].0
    }

    pub fn rows(&self) -> Vec<ConvergentRow> {
        self.quotients
            .iter()
            .zip(&self.convergents)
            .enumerate()
            .map(|(index, (a, (p, q)))| ConvergentRow {
                index,
                a: a.to_string(),
                p: p.to_string(),
                q: q.to_string(),
            })
            .collect()
    }

    /// Largest partial quotient among `a_0 … a_upto`.
    pub fn max_quotient(&self, upto: usize) -> BigInt {
        self.quotients[..=upto.min(self.len() - 1)]
            .iter()
            .max()
            .cloned()
            .unwrap_or_default()
    }

    /// Re-expands with more quotients when fewer than `count + 1` are held.
    pub fn extended(&self, count: usize) -> Result<ContinuedFractionTable> {
        if self.len() > count {
            return Ok(self.clone());
        }
        expand(&self.source, count, &self.policy)
    }

    /// Re-checks every table invariant with certified arithmetic.
    pub fn check_invariants(&self) -> Result<()> {
        for (i, a) in self.quotients.iter().enumerate().skip(1) {
            if !a.is_positive() {
                return Err(Error::Invariant(format!("a_{i} = {a} is not positive")));
            }
        }
        for i in 0..self.len() {
            let (p, q) = &self.convergents[i];
            let (p1, q1) = if i == 0 {
                (BigInt::one(), BigInt::zero())
            } else {
                self.convergents[i - 1].clone()
            };
            let (p2, q2) = match i {
                0 => (BigInt::zero(), BigInt::one()),
                1 => (BigInt::one(), BigInt::zero()),
                _ => self.convergents[i - 2].clone(),
            };
            let a = &self.quotients[i];
            if *p != a * &p1 + p2 || *q != a * &q1 + q2 {
                return Err(Error::Invariant(format!(
                    "convergent recurrence fails at {i}"
                )));
            }
            if !p.gcd(q).is_one() {
                return Err(Error::Invariant(format!("p_{i}/q_{i} not in lowest terms")));
            }
        }
        let policy = PrecisionPolicy::new(self.bits, self.policy.ceiling.max(self.bits));
        policy.run(|bits| self.check_approximations(bits))
    }

    fn check_approximations(&self, bits: u32) -> Result<()> {
        let x = self.source.eval(bits)?;
        let undecided = || Error::Cert(CertError::Ambiguous { bits });
        for i in 0..self.len() {
            let (p, q) = &self.convergents[i];
            let diff = x.sub(&CertifiedReal::from_ratio(p, q, bits));
            // even convergents lie below x, odd ones above
            let side_ok = if i % 2 == 0 {
                diff.lo().signum() >= 0
            } else {
                diff.hi().signum() <= 0
            };
            if !side_ok {
                if diff.contains_zero() && !diff.is_exact() {
                    return Err(undecided());
                }
                return Err(Error::Invariant(format!(
                    "convergent {i} on the wrong side of x"
                )));
            }
            if i + 1 < self.len() {
                let q1 = self.q(i + 1);
                let bound = CertifiedReal::from_ratio(&BigInt::one(), &(q * q1), bits);
                match diff.abs().lt(&bound) {
                    Some(true) => {}
                    Some(false) => {
                        return Err(Error::Invariant(format!(
                            "|x − p_{i}/q_{i}| ≥ 1/(q_{i} q_{})",
                            i + 1
                        )))
                    }
                    None => return Err(undecided()),
                }
            }
        }
        Ok(())
    }
}

/// First `count + 1` partial quotients of `x` by the Gauss map on intervals.
/// An undecidable floor restarts the whole expansion at doubled precision.
pub fn expand(
    x: &RealExpr,
    count: usize,
    policy: &PrecisionPolicy,
) -> Result<ContinuedFractionTable> {
    let (quotients, bits) = policy.run(|bits| expand_at(x, count, bits).map(|q| (q, bits)))?;
    let convergents = convergents_of(&quotients);
    let table = ContinuedFractionTable {
        source: x.clone(),
        quotients,
        convergents,
        bits,
        policy: *policy,
    };
    table.check_invariants()?;
    Ok(table)
}

fn expand_at(x: &RealExpr, count: usize, bits: u32) -> Result<Vec<BigInt>> {
    let mut xi = x.eval(bits)?;
    let mut out = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let a = xi.certified_floor()?;
        if i == count {
            out.push(a);
            break;
        }
        let frac = xi.sub(&CertifiedReal::from_int(a.clone(), bits));
        out.push(a);
        xi = match frac.recip() {
            Ok(v) => v,
            Err(CertError::DivisionByZero) => {
                return Err(Error::InvalidInput(format!(
                    "{x} is rational: its expansion ends after {} quotients",
                    out.len()
                )))
            }
            Err(e) => return Err(e.into()),
        };
    }
    Ok(out)
}

pub fn convergents_of(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    quotients
        .iter()
        .map(|a| {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, p.clone());
            q2 = std::mem::replace(&mut q1, q.clone());
            (p, q)
        })
        .collect()
}

/// Smallest `i` with `q_i > threshold`, extending the table if needed.
pub fn first_denominator_exceeding(
    table: &mut ContinuedFractionTable,
    threshold: &BigInt,
) -> Result<(usize, BigInt)> {
    if table.is_empty() {
        return Err(Error::TableTooShort("empty table".into()));
    }
    loop {
        if let Some(i) = table.convergents.iter().position(|(_, q)| q > threshold) {
            return Ok((i, table.q(i).clone()));
        }
        let more = (table.len() * 2).max(table.len() + 16);
        *table = table.extended(more)?;
    }
}

/// Legendre's criterion: `|p/q − x| < 1/(2q²)`, certified. A `true` answer
/// is cross-checked against the convergents of `x`.
pub fn legendre_is_convergent(
    p: &BigInt,
    q: &BigInt,
    x: &RealExpr,
    policy: &PrecisionPolicy,
) -> Result<bool> {
    if !q.is_positive() {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::InvalidInput(format!(
            "{p}/{q} is not in lowest terms"
        )));
    }
    let two_q2 = BigInt::from(2) * q * q;
    let close = policy.run(|bits| {
        let diff = x
            .eval(bits)?
            .sub(&CertifiedReal::from_ratio(p, q, bits))
            .abs();
        let bound = CertifiedReal::from_ratio(&BigInt::one(), &two_q2, bits);
        diff.lt(&bound)
            .ok_or(Error::Cert(CertError::Ambiguous { bits }))
    })?;
    if close {
        let mut table = expand(x, 8, policy)?;
        while table.convergents.last().map(|(_, d)| d < q).unwrap_or(true) {
            table = table.extended(table.len() * 2)?;
        }
        if !table.convergents.iter().any(|(a, b)| a == p && b == q) {
            return Err(Error::LegendreMismatch(format!(
                "{p}/{q} passes the 1/(2q²) test but is not a convergent of {x}"
            )));
        }
    }
    Ok(close)
}

/// Outcome of Legendre's lower bound: for every `0 < s < M` and any `r`,
/// `|r/s − x| > 1/((b + 2)·s²)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreBound {
    pub m: BigInt,
    /// Smallest index with `q_n > M`.
    pub n_star: usize,
    pub q_before: BigInt,
    pub q_n_star: BigInt,
    /// `max{a_i : 0 ≤ i ≤ n_star}`
    pub b: BigInt,
}

impl LegendreBound {
    /// `1/((b + 2)·s²)`
    pub fn lower_bound(&self, s: &BigInt) -> BigRational {
        BigRational::new(BigInt::one(), (&self.b + 2u32) * s * s)
    }

    pub fn statement(&self) -> String {
        format!(
            "for all 0 < s < {} and all r: |r/s - x| > 1/({}·s²)",
            self.m,
            &self.b + 2u32
        )
    }
}

pub fn legendre_lower_bound(table: &ContinuedFractionTable, m: &BigInt) -> Result<LegendreBound> {
    if !m.is_positive() {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    let n_star = table
        .convergents
        .iter()
        .position(|(_, q)| q > m)
        .ok_or_else(|| {
            Error::TableTooShort(format!(
                "no denominator exceeds {m} among {} convergents",
                table.len()
            ))
        })?;
    let q_before = if n_star == 0 {
        BigInt::zero()
    } else {
        table.q(n_star - 1).clone()
    };
    Ok(LegendreBound {
        m: m.clone(),
        n_star,
        q_before,
        q_n_star: table.q(n_star).clone(),
        b: table.max_quotient(n_star),
    })
}
