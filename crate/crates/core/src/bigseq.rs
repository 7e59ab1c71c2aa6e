//! Exact binary recurrences `U_{n+2} = p·U_{n+1} + q·U_n`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::certreal::{CertError, CertifiedReal, PrecisionPolicy, RealExpr};
use crate::error::{Error, Result};
use crate::surd::QuadraticSurd;

/// The two families the certification pipelines know about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lucas,
    Jacobsthal,
}

impl Family {
    pub fn recurrence(self) -> BinaryRecurrence {
        match self {
            Family::Lucas => BinaryRecurrence::lucas(),
            Family::Jacobsthal => BinaryRecurrence::jacobsthal(),
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "lucas" | "l" => Some(Family::Lucas),
            "jacobsthal" | "j" => Some(Family::Jacobsthal),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Lucas => "lucas",
            Family::Jacobsthal => "jacobsthal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryRecurrence {
    name: String,
    p: i64,
    q: i64,
    u0: BigInt,
    u1: BigInt,
}

impl BinaryRecurrence {
    pub fn new(
        name: impl Into<String>,
        p: i64,
        q: i64,
        u0: BigInt,
        u1: BigInt,
    ) -> Result<BinaryRecurrence> {
        if q == 0 {
            return Err(Error::InvalidInput(
                "recurrence coefficient q must be non-zero".into(),
            ));
        }
        if (p as i128) * (p as i128) + 4 * (q as i128) <= 0 {
            return Err(Error::InvalidInput(format!(
                "discriminant p² + 4q must be positive (p = {p}, q = {q})"
            )));
        }
        Ok(BinaryRecurrence {
            name: name.into(),
            p,
            q,
            u0,
            u1,
        })
    }

    pub fn lucas() -> BinaryRecurrence {
        BinaryRecurrence {
            name: "lucas".into(),
            p: 1,
            q: 1,
            u0: 2.into(),
            u1: 1.into(),
        }
    }

    pub fn jacobsthal() -> BinaryRecurrence {
        BinaryRecurrence {
            name: "jacobsthal".into(),
            p: 1,
            q: 2,
            u0: 0.into(),
            u1: 1.into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn seeds(&self) -> (&BigInt, &BigInt) {
        (&self.u0, &self.u1)
    }

    pub fn discriminant(&self) -> BigInt {
        BigInt::from(self.p) * self.p + BigInt::from(4) * self.q
    }

    /// Characteristic roots `θ > η` of `y² − p·y − q`.
    pub fn roots(&self) -> (QuadraticSurd, QuadraticSurd) {
        let disc = self.discriminant();
        let theta = QuadraticSurd::new(self.p.into(), 1.into(), 2.into(), disc.clone());
        let eta = QuadraticSurd::new(self.p.into(), (-1).into(), 2.into(), disc);
        (theta, eta)
    }

    /// Binet coefficients `(A, B)` with `U_n = A·θⁿ + B·ηⁿ`.
    pub fn binet_coefficients(&self) -> (QuadraticSurd, QuadraticSurd) {
        let (theta, eta) = self.roots();
        let gap = theta.sub(&eta);
        let u0 = QuadraticSurd::from_int(self.u0.clone());
        let u1 = QuadraticSurd::from_int(self.u1.clone());
        let a = u1.sub(&u0.mul(&eta)).div(&gap);
        let b = u0.mul(&theta).sub(&u1).div(&gap);
        match (a, b) {
            (Some(a), Some(b)) => (a, b),
            _ => unreachable!("distinct roots give a non-zero gap"),
        }
    }

    pub fn iter(&self) -> Terms<'_> {
        Terms {
            rec: self,
            cur: self.u0.clone(),
            next: self.u1.clone(),
            index: 0,
        }
    }

    pub fn term(&self, n: u64) -> BigInt {
        let mut it = self.iter();
        for _ in 0..n {
            it.advance();
        }
        it.cur
    }

    /// `U_0, …, U_{n}` inclusive.
    pub fn terms(&self, n: u64) -> Vec<BigInt> {
        self.iter().take(n as usize + 1).map(|(_, v)| v).collect()
    }

    /// `A·θⁿ + B·ηⁿ` evaluated in exact surd arithmetic.
    pub fn binet_exact(&self, n: u32) -> BigRational {
        let (theta, eta) = self.roots();
        let (a, b) = self.binet_coefficients();
        let v = a.mul(&theta.pow(n)).add(&b.mul(&eta.pow(n)));
        match v.to_rational() {
            Some(r) => r,
            None => unreachable!("Binet formula of an integer recurrence is rational"),
        }
    }

    /// All `(n, U_n)` with `U_n ≤ bound`.
    ///
    /// The scan stops once two consecutive terms exceed the bound; for
    /// families with `p, q > 0` and non-negative seeds the sequence is then
    /// increasing, so no later term can come back under it.
    pub fn terms_up_to_value(&self, bound: &BigInt) -> Vec<(u64, BigInt)> {
        let mut out = Vec::new();
        let mut above_prev = false;
        for (n, v) in self.iter() {
            let above = &v > bound;
            if !above {
                out.push((n, v));
            } else if above_prev {
                break;
            }
            above_prev = above;
        }
        out
    }
}

pub struct Terms<'a> {
    rec: &'a BinaryRecurrence,
    cur: BigInt,
    next: BigInt,
    index: u64,
}

impl Terms<'_> {
    fn advance(&mut self) {
        let after = &self.next * self.rec.p + &self.cur * self.rec.q;
        self.cur = std::mem::replace(&mut self.next, after);
        self.index += 1;
    }
}

impl Iterator for Terms<'_> {
    type Item = (u64, BigInt);

    fn next(&mut self) -> Option<(u64, BigInt)> {
        let out = (self.index, self.cur.clone());
        self.advance();
        Some(out)
    }
}

/// Certified check of `θ^{n−1} ≤ L_n ≤ 2θⁿ` (Lucas) or
/// `2^{n−2} ≤ J_n ≤ 2^{n−1}` (Jacobsthal).
pub fn growth_bounds_hold(family: Family, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput("growth bounds need n ≥ 1".into()));
    }
    let value = family.recurrence().term(n);
    match family {
        Family::Jacobsthal => {
            let v = BigRational::from_integer(value);
            let two = BigRational::from_integer(2.into());
            let lower = pow_rational(&two, n as i64 - 2);
            let upper = pow_rational(&two, n as i64 - 1);
            Ok(lower <= v && v <= upper)
        }
        Family::Lucas => {
            let n = i64::try_from(n).map_err(|_| Error::InvalidInput("index too large".into()))?;
            let lower = RealExpr::pow(RealExpr::Phi, n - 1);
            let upper = RealExpr::mul(RealExpr::int(2), RealExpr::pow(RealExpr::Phi, n));
            let policy = PrecisionPolicy::new(64 + 2 * n as u32, 64 + 2 * n as u32 + 4096);
            let ok = policy.run(|bits| {
                let v = CertifiedReal::from_int(value.clone(), bits);
                let lo = lower.eval(bits)?;
                let hi = upper.eval(bits)?;
                match (lo.le(&v), v.le(&hi)) {
                    (Some(a), Some(b)) => Ok(a && b),
                    (Some(false), _) | (_, Some(false)) => Ok(false),
                    _ => Err(CertError::Ambiguous { bits }),
                }
            })?;
            Ok(ok)
        }
    }
}

fn pow_rational(base: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

pub(crate) fn is_power_of_two(v: &BigInt) -> Option<u64> {
    if !v.is_positive() {
        return None;
    }
    let e = v.bits() - 1;
    (v == &(BigInt::one() << e)).then_some(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn seed_values_and_known_terms() {
        let l = BinaryRecurrence::lucas();
        let j = BinaryRecurrence::jacobsthal();
        assert_eq!(l.term(0), big(2));
        assert_eq!(l.term(1), big(1));
        assert_eq!(j.term(0), big(0));
        assert_eq!(j.term(1), big(1));
        // (2^12 − 1)/3
        assert_eq!(j.term(12), (BigInt::from(4096) - 1) / 3);
        assert_eq!(j.term(12), big(1365));
        assert_eq!(l.term(5), big(11));
        assert_eq!(j.term(5), big(11));
        assert_eq!(l.term(7), big(29));
    }

    #[test]
    fn binet_matches_recurrence() {
        for rec in [BinaryRecurrence::lucas(), BinaryRecurrence::jacobsthal()] {
            let terms = rec.terms(60);
            for (n, t) in terms.iter().enumerate() {
                assert_eq!(
                    rec.binet_exact(n as u32),
                    BigRational::from_integer(t.clone())
                );
            }
        }
        assert_eq!(
            BinaryRecurrence::lucas().binet_exact(0),
            BigRational::from_integer(big(2))
        );
    }

    #[test]
    fn jacobsthal_closed_form() {
        let j = BinaryRecurrence::jacobsthal();
        for n in 0..=60u32 {
            let two_n = BigInt::one() << n;
            let sign = if n % 2 == 0 { big(1) } else { big(-1) };
            let expect = BigRational::new(two_n - sign, big(3));
            assert_eq!(j.binet_exact(n), expect);
        }
    }

    #[test]
    fn binet_coefficients_of_builtins() {
        let (a, b) = BinaryRecurrence::lucas().binet_coefficients();
        assert_eq!(a, QuadraticSurd::from_int(1));
        assert_eq!(b, QuadraticSurd::from_int(1));
        let (a, b) = BinaryRecurrence::jacobsthal().binet_coefficients();
        assert_eq!(a.to_rational(), Some(BigRational::new(big(1), big(3))));
        assert_eq!(b.to_rational(), Some(BigRational::new(big(-1), big(3))));
    }

    #[test]
    fn terms_up_to_value_examples() {
        let pairs = |v: Vec<(u64, BigInt)>| -> Vec<(u64, i64)> {
            v.into_iter()
                .map(|(n, x)| (n, i64::try_from(x).unwrap()))
                .collect()
        };
        assert_eq!(
            pairs(BinaryRecurrence::lucas().terms_up_to_value(&big(4))),
            vec![(0, 2), (1, 1), (2, 3), (3, 4)]
        );
        assert_eq!(
            pairs(BinaryRecurrence::jacobsthal().terms_up_to_value(&big(1))),
            vec![(0, 0), (1, 1), (2, 1)]
        );
        assert!(BinaryRecurrence::lucas()
            .terms_up_to_value(&big(0))
            .is_empty());
        // bound 1 must keep L_1 = 1 even though L_0 = 2 already exceeds it
        assert_eq!(
            pairs(BinaryRecurrence::lucas().terms_up_to_value(&big(1))),
            vec![(1, 1)]
        );
    }

    #[test]
    fn rejects_degenerate_recurrences() {
        assert!(BinaryRecurrence::new("x", 1, 0, big(0), big(1)).is_err());
        assert!(BinaryRecurrence::new("x", 2, -1, big(0), big(1)).is_err());
        assert!(BinaryRecurrence::new("pell", 2, 1, big(0), big(1)).is_ok());
    }

    #[test]
    fn growth_bounds_boundary_cases() {
        assert!(growth_bounds_hold(Family::Lucas, 1).unwrap());
        assert!(growth_bounds_hold(Family::Jacobsthal, 2).unwrap());
        assert!(growth_bounds_hold(Family::Jacobsthal, 0).is_err());
    }

    #[test]
    fn power_of_two_detection() {
        assert_eq!(is_power_of_two(&big(1)), Some(0));
        assert_eq!(is_power_of_two(&big(64)), Some(6));
        assert_eq!(is_power_of_two(&big(0)), None);
        assert_eq!(is_power_of_two(&big(12)), None);
    }
}
