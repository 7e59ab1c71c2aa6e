//! Exact arithmetic in `Q(√d)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certreal::{CertifiedReal, Dyadic};

/// `(a + b·√d) / c` with `c > 0` and `gcd(a, b, c) = 1`.
///
/// When `d` is a perfect square the value is rational; `b·√d` is folded into
/// `a` so that rational values have a single representation (`b = 0`,
/// `d = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> QuadraticSurd {
        assert!(!c.is_zero(), "surd denominator must be non-zero");
        assert!(!d.is_negative(), "radicand must be non-negative");
        let (mut a, mut b, mut c, mut d) = (a, b, c, d);
        let r = d.sqrt();
        if &r * &r == d {
            a += &b * r;
            b = BigInt::zero();
        }
        if b.is_zero() {
            d = BigInt::zero();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadraticSurd { a, b, c, d }
    }

    pub fn from_rational(r: &BigRational) -> QuadraticSurd {
        QuadraticSurd::new(
            r.numer().clone(),
            BigInt::zero(),
            r.denom().clone(),
            BigInt::zero(),
        )
    }

    pub fn from_int(n: impl Into<BigInt>) -> QuadraticSurd {
        QuadraticSurd::new(n.into(), BigInt::zero(), BigInt::one(), BigInt::zero())
    }

    /// `(1 + √5)/2`
    pub fn golden_ratio() -> QuadraticSurd {
        QuadraticSurd::new(1.into(), 1.into(), 2.into(), 5.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_radicand(&self, other: &QuadraticSurd) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "surds from different fields");
                self.d.clone()
            }
        }
    }

    pub fn add(&self, other: &QuadraticSurd) -> QuadraticSurd {
        let d = self.common_radicand(other);
        QuadraticSurd::new(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        )
    }

    pub fn neg(&self) -> QuadraticSurd {
        QuadraticSurd::new(-&self.a, -&self.b, self.c.clone(), self.d.clone())
    }

    pub fn sub(&self, other: &QuadraticSurd) -> QuadraticSurd {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QuadraticSurd) -> QuadraticSurd {
        let d = self.common_radicand(other);
        QuadraticSurd::new(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            d,
        )
    }

    /// `√d ↦ −√d`
    pub fn conj(&self) -> QuadraticSurd {
        QuadraticSurd::new(self.a.clone(), -&self.b, self.c.clone(), self.d.clone())
    }

    /// `x · conj(x)`, always rational.
    pub fn norm(&self) -> BigRational {
        BigRational::new(
            &self.a * &self.a - &self.b * &self.b * &self.d,
            &self.c * &self.c,
        )
    }

    pub fn recip(&self) -> Option<QuadraticSurd> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let inv = QuadraticSurd::from_rational(&n.recip());
        Some(self.conj().mul(&inv))
    }

    pub fn div(&self, other: &QuadraticSurd) -> Option<QuadraticSurd> {
        other.recip().map(|r| self.mul(&r))
    }

    pub fn pow(&self, n: u32) -> QuadraticSurd {
        let mut acc = QuadraticSurd::from_int(1);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Integer coefficients `[a₀, a₁, a₂]` of the primitive minimal
    /// polynomial `a₀x² + a₁x + a₂` (or `[a₀, a₁]` for rationals), `a₀ > 0`.
    pub fn minimal_polynomial(&self) -> Vec<BigInt> {
        if self.is_rational() {
            // c·x − a
            return vec![self.c.clone(), -&self.a];
        }
        // (c x − a)² = b² d
        let c2 = &self.c * &self.c;
        let lin = BigInt::from(-2) * &self.a * &self.c;
        let cst = &self.a * &self.a - &self.b * &self.b * &self.d;
        let g = c2.gcd(&lin).gcd(&cst);
        vec![c2 / &g, lin / &g, cst / &g]
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> i32 {
        // sign(a + b√d) compared via squares when signs of a and b differ
        let sa = self.a.signum();
        let sb = self.b.signum();
        let s = if sb.is_zero() {
            sa
        } else if sa.is_zero() || sa == sb {
            sb
        } else {
            let lhs = &self.a * &self.a;
            let rhs = &self.b * &self.b * &self.d;
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Greater => sa,
                std::cmp::Ordering::Less => sb,
                std::cmp::Ordering::Equal => BigInt::zero(),
            }
        };
        if s.is_positive() {
            1
        } else if s.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn enclose(&self, bits: u32) -> CertifiedReal {
        let sqrt = if self.is_rational() {
            CertifiedReal::from_int(0, bits)
        } else {
            CertifiedReal::exact(Dyadic::from_int(self.d.clone()), bits)
                .sqrt()
                .unwrap_or_else(|_| unreachable!("radicand is a non-negative integer"))
        };
        let num = CertifiedReal::from_int(self.a.clone(), bits).add(&sqrt.mul_int(&self.b));
        num.div(&CertifiedReal::from_int(self.c.clone(), bits))
            .unwrap_or_else(|_| unreachable!("denominator is a positive integer"))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.is_rational() {
            format!("{}", self.a)
        } else if self.a.is_zero() {
            format!("{}*sqrt({})", self.b, self.d)
        } else if self.b.is_negative() {
            format!("{} - {}*sqrt({})", self.a, -&self.b, self.d)
        } else {
            format!("{} + {}*sqrt({})", self.a, self.b, self.d)
        };
        if self.c.is_one() {
            f.write_str(&num)
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}
