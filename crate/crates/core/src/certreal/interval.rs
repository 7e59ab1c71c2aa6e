use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::dyadic::{Dyadic, Round};
use super::format::{format_sig, RealSummary};
use super::CertError;

/// A closed interval `[lo, hi]` of dyadic rationals that contains the exact
/// value it stands for. Every operation rounds outward to `bits` significant
/// bits of endpoint mantissa.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl CertifiedReal {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> CertifiedReal {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        CertifiedReal {
            lo: lo.round(bits, Round::Down),
            hi: hi.round(bits, Round::Up),
            bits,
        }
    }

    pub fn exact(x: Dyadic, bits: u32) -> CertifiedReal {
        CertifiedReal::new(x.clone(), x, bits)
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> CertifiedReal {
        CertifiedReal::exact(Dyadic::from_int(n.into()), bits)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> CertifiedReal {
        assert!(!den.is_zero(), "zero denominator");
        CertifiedReal {
            lo: Dyadic::from_ratio(num, den, bits, Round::Down),
            hi: Dyadic::from_ratio(num, den, bits, Round::Up),
            bits,
        }
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> CertifiedReal {
        CertifiedReal::from_ratio(r.numer(), r.denom(), bits)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn radius(&self) -> Dyadic {
        self.width().mul_pow2(-1)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    /// `self ⊆ other`
    pub fn is_within(&self, other: &CertifiedReal) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certified `self < other`; `None` when the intervals overlap.
    pub fn lt(&self, other: &CertifiedReal) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `self ≤ other`; `None` when undecidable at this precision.
    pub fn le(&self, other: &CertifiedReal) -> Option<bool> {
        if self.hi <= other.lo {
            Some(true)
        } else if self.lo > other.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn with_bits(&self, bits: u32) -> CertifiedReal {
        CertifiedReal::new(self.lo.clone(), self.hi.clone(), bits)
    }

    fn prec(&self, other: &CertifiedReal) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn neg(&self) -> CertifiedReal {
        CertifiedReal {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> CertifiedReal {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            CertifiedReal::new(Dyadic::zero(), m, self.bits)
        }
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        CertifiedReal::new(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.prec(other),
        )
    }

    pub fn sub(&self, other: &CertifiedReal) -> CertifiedReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CertifiedReal) -> CertifiedReal {
        let cands = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = cands.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = cands.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        CertifiedReal::new(lo, hi, self.prec(other))
    }

    pub fn mul_int(&self, n: &BigInt) -> CertifiedReal {
        self.mul(&CertifiedReal::from_int(n.clone(), self.bits))
    }

    pub fn div(&self, other: &CertifiedReal) -> Result<CertifiedReal, CertError> {
        if other.lo.is_zero() && other.hi.is_zero() {
            return Err(CertError::DivisionByZero);
        }
        if other.contains_zero() {
            return Err(CertError::ContainsZero { bits: other.bits });
        }
        let bits = self.prec(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, bits, Round::Down))
            .min()
            .unwrap_or_else(Dyadic::zero);
        let hi = pairs
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, bits, Round::Up))
            .max()
            .unwrap_or_else(Dyadic::zero);
        Ok(CertifiedReal::new(lo, hi, bits))
    }

    pub fn recip(&self) -> Result<CertifiedReal, CertError> {
        CertifiedReal::from_int(1, self.bits).div(self)
    }

    pub fn powi(&self, n: i64) -> Result<CertifiedReal, CertError> {
        if n == 0 {
            return Ok(CertifiedReal::from_int(1, self.bits));
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let e =
            u32::try_from(n).map_err(|_| CertError::Domain(format!("exponent {n} too large")))?;
        let (lo, hi) = if self.lo.signum() >= 0 {
            (self.lo.pow(e), self.hi.pow(e))
        } else if self.hi.signum() <= 0 {
            let (a, b) = (self.hi.pow(e), self.lo.pow(e));
            if e % 2 == 0 {
                (a, b)
            } else {
                (b, a)
            }
        } else if e % 2 == 0 {
            (Dyadic::zero(), self.lo.abs().max(self.hi.clone()).pow(e))
        } else {
            (self.lo.pow(e), self.hi.pow(e))
        };
        Ok(CertifiedReal::new(lo, hi, self.bits))
    }

    pub fn sqrt(&self) -> Result<CertifiedReal, CertError> {
        if self.hi.signum() < 0 {
            return Err(CertError::Domain("square root of a negative value".into()));
        }
        if self.lo.signum() < 0 {
            return Err(CertError::Ambiguous { bits: self.bits });
        }
        Ok(CertifiedReal::new(
            self.lo.sqrt(self.bits, Round::Down),
            self.hi.sqrt(self.bits, Round::Up),
            self.bits,
        ))
    }

    /// Natural logarithm; the argument must be provably positive.
    pub fn ln(&self) -> Result<CertifiedReal, CertError> {
        if self.hi.signum() <= 0 {
            return Err(CertError::Domain(
                "logarithm of a non-positive value".into(),
            ));
        }
        if self.lo.signum() <= 0 {
            return Err(CertError::Ambiguous { bits: self.bits });
        }
        let lo = super::log::ln_dyadic(&self.lo, self.bits);
        let hi = if self.is_exact() {
            super::log::ln_dyadic(&self.lo, self.bits)
        } else {
            super::log::ln_dyadic(&self.hi, self.bits)
        };
        Ok(CertifiedReal::new(lo.lo, hi.hi, self.bits))
    }

    /// `⌊x⌋`, returned only when both endpoints agree.
    pub fn certified_floor(&self) -> Result<BigInt, CertError> {
        let a = self.lo.floor();
        let b = self.hi.floor();
        if a == b {
            Ok(a)
        } else {
            Err(CertError::Ambiguous { bits: self.bits })
        }
    }

    /// Interval enclosing `min_{z ∈ ℤ} |x − z|` over every point of `self`.
    ///
    /// The distance map is a tent function with minima at integers and
    /// maxima at half-integers, so its image over `[lo, hi]` is spanned by the
    /// endpoint values plus whichever critical points lie inside.
    pub fn nearest_integer_distance(&self) -> CertifiedReal {
        fn dist(x: &Dyadic) -> Dyadic {
            let fl = Dyadic::from_int(x.floor());
            let down = x.sub(&fl);
            let up = Dyadic::one().sub(&down);
            down.clone().min(up.clone())
        }
        let half = Dyadic::pow2(-1);
        let dlo = dist(&self.lo);
        let dhi = dist(&self.hi);
        let has_integer = self.lo.ceil() <= self.hi.floor();
        let shifted_lo = self.lo.sub(&half);
        let shifted_hi = self.hi.sub(&half);
        let has_half = shifted_lo.ceil() <= shifted_hi.floor();
        let lo = if has_integer {
            Dyadic::zero()
        } else {
            dlo.clone().min(dhi.clone())
        };
        let hi = if has_half {
            half
        } else {
            dlo.clone().max(dhi.clone())
        };
        CertifiedReal::new(lo, hi, self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    pub fn summary(&self) -> RealSummary {
        RealSummary::of(self)
    }

    /// Midpoint with `digits` significant decimal digits.
    pub fn mid_string(&self, digits: usize) -> String {
        format_sig(&self.midpoint().to_rational(), digits)
    }

    pub fn lo_rational(&self) -> BigRational {
        self.lo.to_rational()
    }

    pub fn hi_rational(&self) -> BigRational {
        self.hi.to_rational()
    }

    /// Smallest integer certified to be `≥` every point of the interval.
    pub fn ceil_hi(&self) -> BigInt {
        self.hi.ceil()
    }

    /// Largest integer certified to be `≤` every point of the interval.
    pub fn floor_lo(&self) -> BigInt {
        self.lo.floor()
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]@{}", self.lo, self.hi, self.bits)
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.summary();
        write!(f, "{} ± {}", s.mid, s.rad)
    }
}

/// Integer `n` such that `2^n ≥ |x|` for every point of the interval.
pub fn log2_ceiling(x: &CertifiedReal) -> i64 {
    let m = x.lo().abs().max(x.hi().abs());
    if m.is_zero() {
        i64::MIN
    } else {
        m.magnitude() + 1
    }
}
