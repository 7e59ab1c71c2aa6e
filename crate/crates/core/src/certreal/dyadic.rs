//! Dyadic rationals `mant · 2^exp` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rounding direction for endpoint operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `⌊m / 2^n⌋`
pub(crate) fn shr_floor(m: &BigInt, n: u64) -> BigInt {
    if n == 0 {
        return m.clone();
    }
    if m.sign() == Sign::Minus {
        let mask = (BigInt::one() << n) - 1u32;
        -((-m + mask) >> n)
    } else {
        m >> n
    }
}

/// `⌈m / 2^n⌉`
pub(crate) fn shr_ceil(m: &BigInt, n: u64) -> BigInt {
    -shr_floor(&-m, n)
}

pub(crate) fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => -((-num).div_floor(den)),
    }
}

/// Exact dyadic rational. The representation is normalized so that the
/// mantissa is odd (or zero with exponent 0), which makes `==` structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(BigInt::one())
    }

    pub fn from_int(n: BigInt) -> Dyadic {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Dyadic {
        Dyadic::from_int(BigInt::from(n))
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `⌊log2 |x|⌋` for non-zero `x`.
    pub fn magnitude(&self) -> i64 {
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn pow(&self, n: u32) -> Dyadic {
        Dyadic::new(
            num_traits::pow(self.mant.clone(), n as usize),
            self.exp * n as i64,
        )
    }

    /// Rounds to at most `bits` significant bits in the given direction.
    pub fn round(&self, bits: u32, dir: Round) -> Dyadic {
        let len = self.mant.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        let m = match dir {
            Round::Down => shr_floor(&self.mant, shift),
            Round::Up => shr_ceil(&self.mant, shift),
        };
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// `a / b` rounded to `bits` significant bits.
    pub fn div(a: &Dyadic, b: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the integer quotient carries > bits + 2 bits.
        let want = bits as i64 + 2 + b.mant.bits() as i64 - a.mant.bits() as i64;
        let s = want.max(0) as u64;
        let num = &a.mant << s;
        let q = div_round(&num, &b.mant, dir);
        Dyadic::new(q, a.exp - b.exp - s as i64).round(bits, dir)
    }

    /// `num / den` rounded to `bits` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32, dir: Round) -> Dyadic {
        Dyadic::div(
            &Dyadic::from_int(num.clone()),
            &Dyadic::from_int(den.clone()),
            bits,
            dir,
        )
    }

    pub fn from_rational(r: &BigRational, bits: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(r.numer(), r.denom(), bits, dir)
    }

    /// Square root of a non-negative dyadic rounded to `bits` significant bits.
    pub fn sqrt(&self, bits: u32, dir: Round) -> Dyadic {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // value = mant · 2^exp; choose even e' ≤ exp with enough mantissa bits
        let target = 2 * (bits as i64 + 2);
        let mut shift = (target - self.mant.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let e = self.exp - shift;
        let r = m.sqrt();
        let exact = &r * &r == m;
        let r = if dir == Round::Up && !exact {
            r + 1u32
        } else {
            r
        };
        Dyadic::new(r, e / 2).round(bits, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_floor(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_ceil(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest `f64`, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits() as i64;
        let keep = 60i64;
        let (m, e) = if len > keep {
            (
                shr_floor(&self.mant, (len - keep) as u64),
                self.exp + len - keep,
            )
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf: f64 = num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::NAN);
        if e > i32::MAX as i64 {
            return mf.signum() * f64::INFINITY;
        }
        if e < i32::MIN as i64 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes before aligning huge exponents.
        let (ma, mb) = (self.magnitude(), other.magnitude());
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if sa > 0 { ord } else { ord.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·2^{}", self.mant, self.exp)
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Dyadic {
        Dyadic::from_i64(n)
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Dyadic {
        Dyadic::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(d(12, 0), d(3, 2));
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn floor_and_ceil_of_negative_values() {
        let x = d(-5, -1); // -2.5
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        assert_eq!(d(7, -1).floor(), BigInt::from(3));
    }

    #[test]
    fn directed_division_brackets_one_third() {
        let one = Dyadic::one();
        let three = Dyadic::from_i64(3);
        let lo = Dyadic::div(&one, &three, 64, Round::Down);
        let hi = Dyadic::div(&one, &three, 64, Round::Up);
        assert!(lo < hi);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!(hi.sub(&lo) <= Dyadic::pow2(-64));
    }

    #[test]
    fn sqrt_brackets_and_is_exact_on_squares() {
        let five = Dyadic::from_i64(5);
        let lo = five.sqrt(100, Round::Down);
        let hi = five.sqrt(100, Round::Up);
        assert!(lo.mul(&lo) < five && five < hi.mul(&hi));
        let nine = Dyadic::from_i64(9);
        assert_eq!(nine.sqrt(10, Round::Up), Dyadic::from_i64(3));
        assert_eq!(d(1, -4).sqrt(10, Round::Down), d(1, -2));
    }

    #[test]
    fn rounding_is_directed() {
        let x = d(-0b10111, 0);
        assert_eq!(x.round(3, Round::Down), d(-0b110, 2));
        assert_eq!(x.round(3, Round::Up), d(-0b101, 2));
    }

    #[test]
    fn ordering_across_exponents() {
        assert!(d(1, 100) > d(3, 98));
        assert!(d(-1, 100) < d(-3, 98));
        assert!(d(1, -3) < d(1, -2));
    }
}
