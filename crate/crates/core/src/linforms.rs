//! Logarithmic heights, Matveev's lower bound, and explicit index bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::certreal::{
    CertError, CertifiedReal, PrecisionPolicy, RealExpr, RealSummary, Retryable,
};
use crate::error::{Error, Result};
use crate::surd::QuadraticSurd;

/// An algebraic number of degree at most two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicNumberDesc {
    Rational(BigRational),
    /// A quadratic irrational with its primitive minimal polynomial
    /// `a₀x² + a₁x + a₂`, `a₀ > 0`.
    Quadratic {
        surd: QuadraticSurd,
        poly: [BigInt; 3],
    },
}

impl AlgebraicNumberDesc {
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<AlgebraicNumberDesc> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(AlgebraicNumberDesc::Rational(BigRational::new(
            num.into(),
            den,
        )))
    }

    /// Rational surds fold to the rational case.
    pub fn from_surd(surd: &QuadraticSurd) -> AlgebraicNumberDesc {
        match surd.to_rational() {
            Some(r) => AlgebraicNumberDesc::Rational(r),
            None => {
                let p = surd.minimal_polynomial();
                AlgebraicNumberDesc::Quadratic {
                    surd: surd.clone(),
                    poly: [p[0].clone(), p[1].clone(), p[2].clone()],
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            AlgebraicNumberDesc::Rational(_) => 1,
            AlgebraicNumberDesc::Quadratic { .. } => 2,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AlgebraicNumberDesc::Rational(r) => r.is_zero(),
            AlgebraicNumberDesc::Quadratic { surd, .. } => surd.is_zero(),
        }
    }

    /// Exact check of the descriptor invariants.
    pub fn is_well_formed(&self) -> bool {
        match self {
            AlgebraicNumberDesc::Rational(r) => {
                r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
            }
            AlgebraicNumberDesc::Quadratic { surd, poly } => {
                if surd.is_rational() || !poly[0].is_positive() {
                    return false;
                }
                let content = poly[0].gcd(&poly[1]).gcd(&poly[2]);
                let value = surd
                    .mul(surd)
                    .mul(&QuadraticSurd::from_int(poly[0].clone()))
                    .add(&surd.mul(&QuadraticSurd::from_int(poly[1].clone())))
                    .add(&QuadraticSurd::from_int(poly[2].clone()));
                content.is_one() && value.is_zero()
            }
        }
    }

    pub fn enclose(&self, bits: u32) -> CertifiedReal {
        match self {
            AlgebraicNumberDesc::Rational(r) => CertifiedReal::from_rational(r, bits),
            AlgebraicNumberDesc::Quadratic { surd, .. } => surd.enclose(bits),
        }
    }
}

/// Absolute logarithmic height `h(x)`.
pub fn height(x: &AlgebraicNumberDesc, bits: u32) -> Result<CertifiedReal> {
    if x.is_zero() {
        return Err(Error::InvalidInput(
            "the height of 0 is not defined here".into(),
        ));
    }
    if !x.is_well_formed() {
        return Err(Error::InvalidInput(
            "malformed algebraic number descriptor".into(),
        ));
    }
    match x {
        AlgebraicNumberDesc::Rational(r) => {
            let m = r.numer().abs().max(r.denom().clone());
            Ok(CertifiedReal::from_int(m, bits).ln()?)
        }
        AlgebraicNumberDesc::Quadratic { surd, poly } => {
            let mut sum = CertifiedReal::from_int(poly[0].clone(), bits).ln()?;
            for root in [surd.clone(), surd.conj()] {
                let r = root.enclose(bits).abs();
                let one = CertifiedReal::from_int(1, bits);
                match r.le(&one) {
                    Some(true) => {}
                    Some(false) => sum = sum.add(&r.ln()?),
                    None => return Err(CertError::Ambiguous { bits }.into()),
                }
            }
            Ok(sum.mul(&CertifiedReal::from_ratio(&1.into(), &2.into(), bits)))
        }
    }
}

#[derive(Clone, Debug)]
pub enum HeightCombine<'a> {
    /// `h(x₁ ± … ± x_k) ≤ Σ h(x_i) + (k − 1)·log 2`
    Sum(&'a [CertifiedReal]),
    /// `h(x₁ ⋯ x_k) ≤ Σ h(x_i)`
    Product(&'a [CertifiedReal]),
    /// `h(x^s) = |s|·h(x)`
    Power(&'a CertifiedReal, BigInt),
}

pub fn height_combine_bound(op: HeightCombine<'_>, bits: u32) -> CertifiedReal {
    let total = |hs: &[CertifiedReal]| {
        hs.iter()
            .fold(CertifiedReal::from_int(0, bits), |acc, h| acc.add(h))
    };
    match op {
        HeightCombine::Sum(hs) => {
            let extra = hs.len().saturating_sub(1);
            let ln2 = CertifiedReal::from_int(2, bits)
                .ln()
                .unwrap_or_else(|_| unreachable!("log 2 of an exact positive value"));
            total(hs).add(&ln2.mul_int(&BigInt::from(extra)))
        }
        HeightCombine::Product(hs) => total(hs),
        HeightCombine::Power(h, s) => h.mul_int(&s.abs()),
    }
}

/// Parameters of Matveev's theorem.
#[derive(Clone, Debug)]
pub struct MatveevInput {
    pub t: u32,
    pub d: u32,
    pub b: Option<RealExpr>,
    pub a: Vec<RealExpr>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatveevBound {
    /// `C = 1.4·30^{t+3}·t^{4.5}·D²(1 + log D)·ΠA_i`
    pub c: RealSummary,
    /// `−C·(1 + log B)` when `B` was supplied.
    pub log_lower_bound: Option<RealSummary>,
    #[serde(skip)]
    pub c_interval: CertifiedReal,
}

impl MatveevInput {
    pub fn new(t: u32, d: u32, a: Vec<RealExpr>) -> MatveevInput {
        MatveevInput { t, d, b: None, a }
    }

    pub fn with_b(mut self, b: RealExpr) -> MatveevInput {
        self.b = Some(b);
        self
    }

    /// Certifies `A_i ≥ 0.16`, `B ≥ 1` and `len(A) = t`.
    pub fn validate(&self, bits: u32) -> Result<()> {
        if self.t == 0 || self.d == 0 {
            return Err(Error::InvalidInput("t and D must be positive".into()));
        }
        if self.a.len() != self.t as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} values of A, got {}",
                self.t,
                self.a.len()
            )));
        }
        let floor = CertifiedReal::from_ratio(&4.into(), &25.into(), bits);
        for (i, a) in self.a.iter().enumerate() {
            require_ge(&a.eval(bits)?, &floor, bits, || {
                format!("A_{} = {a} is below 0.16", i + 1)
            })?;
        }
        if let Some(b) = &self.b {
            let one = CertifiedReal::from_int(1, bits);
            require_ge(&b.eval(bits)?, &one, bits, || format!("B = {b} is below 1"))?;
        }
        Ok(())
    }

    /// Certifies `A_i ≥ max(D·h(α), |log α|, 0.16)` for a known `α`.
    pub fn check_against(&self, i: usize, alpha: &AlgebraicNumberDesc, bits: u32) -> Result<()> {
        let a = self
            .a
            .get(i)
            .ok_or_else(|| Error::InvalidInput(format!("no A_{}", i + 1)))?
            .eval(bits)?;
        let dh = height(alpha, bits)?.mul_int(&BigInt::from(self.d));
        let log_abs = alpha.enclose(bits).abs().ln()?.abs();
        require_ge(&a, &dh, bits, || format!("A_{} < D·h(α)", i + 1))?;
        require_ge(&a, &log_abs, bits, || format!("A_{} < |log α|", i + 1))
    }
}

fn require_ge(
    x: &CertifiedReal,
    floor: &CertifiedReal,
    bits: u32,
    msg: impl FnOnce() -> String,
) -> Result<()> {
    match floor.le(x) {
        Some(true) => Ok(()),
        Some(false) => Err(Error::InvalidInput(msg())),
        None => Err(CertError::Ambiguous { bits }.into()),
    }
}

pub fn matveev_coefficient(inp: &MatveevInput, policy: &PrecisionPolicy) -> Result<MatveevBound> {
    policy.run(|bits| matveev_at(inp, bits))
}

fn matveev_at(inp: &MatveevInput, bits: u32) -> Result<MatveevBound> {
    inp.validate(bits)?;
    let t = BigInt::from(inp.t);
    let d = CertifiedReal::from_int(inp.d, bits);
    let lead = CertifiedReal::from_ratio(&14.into(), &10.into(), bits)
        .mul_int(&num_traits::pow(BigInt::from(30), inp.t as usize + 3))
        .mul_int(&num_traits::pow(t.clone(), 4))
        .mul(&CertifiedReal::from_int(t, bits).sqrt()?);
    let one = CertifiedReal::from_int(1, bits);
    let mut c = lead.mul(&d).mul(&d).mul(&one.add(&d.ln()?));
    for a in &inp.a {
        c = c.mul(&a.eval(bits)?);
    }
    let log_lower_bound = match &inp.b {
        Some(b) => Some(c.mul(&one.add(&b.eval(bits)?.ln()?)).neg().summary()),
        None => None,
    };
    Ok(MatveevBound {
        c: c.summary(),
        log_lower_bound,
        c_interval: c,
    })
}

/// Least integer `X ≥ 2` past which `c0·x ≥ c1·log x·(c2 + c3·log x)` holds
/// for every real `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexBound {
    #[serde(serialize_with = "crate::ser::display")]
    pub bound: BigInt,
    /// Whether the inequality was certified to fail at `bound − 1`.
    pub least: bool,
    pub bits: u32,
}

pub fn solve_index_bound(
    c0: &RealExpr,
    c1: &RealExpr,
    c2: &RealExpr,
    c3: &RealExpr,
    policy: &PrecisionPolicy,
) -> Result<IndexBound> {
    // a bound that is sound but not provably least is kept only at the top rung
    let ladder = policy.ladder();
    let mut last = None;
    for bits in ladder {
        match solve_at(c0, c1, c2, c3, bits) {
            Ok(b) if b.least => return Ok(b),
            Ok(b) => last = Some(b),
            Err(e) if e.is_retryable() => continue,
            Err(e) => return Err(e),
        }
    }
    last.ok_or_else(|| {
        CertError::PrecisionExhausted {
            ceiling: policy.ceiling,
        }
        .into()
    })
}

struct Coeffs {
    c0: CertifiedReal,
    c1: CertifiedReal,
    c2: CertifiedReal,
    c3: CertifiedReal,
    bits: u32,
}

/// `Some(v ≥ 0)` when the sign is decided.
fn nonneg(v: &CertifiedReal) -> Option<bool> {
    if v.lo().signum() >= 0 {
        Some(true)
    } else if v.is_negative() {
        Some(false)
    } else {
        None
    }
}

impl Coeffs {
    /// `c0·x − c1·log x·(c2 + c3·log x)`
    fn gap(&self, x: &BigInt) -> Result<CertifiedReal> {
        let xr = CertifiedReal::from_int(x.clone(), self.bits);
        let l = xr.ln()?;
        let rhs = self.c1.mul(&l).mul(&self.c2.add(&self.c3.mul(&l)));
        Ok(self.c0.mul(&xr).sub(&rhs))
    }

    fn holds(&self, x: &BigInt) -> Result<Option<bool>> {
        Ok(nonneg(&self.gap(x)?))
    }

    /// The derivative `c0 − c1·(c2 + 2c3·log y)/y` stays positive for all
    /// `y ≥ x` when it is positive at `x` and `x > 2c1c3/c0`.
    fn increasing_from(&self, x: &BigInt) -> Result<bool> {
        let xr = CertifiedReal::from_int(x.clone(), self.bits);
        let l = xr.ln()?;
        let two = BigInt::from(2);
        let slope = self
            .c0
            .mul(&xr)
            .sub(&self.c1.mul(&self.c2.add(&self.c3.mul(&l).mul_int(&two))));
        let knee = xr.mul(&self.c0).sub(&self.c1.mul(&self.c3).mul_int(&two));
        Ok(slope.is_positive() && knee.is_positive())
    }

    /// Certified: the inequality holds at `x` and at every larger real.
    fn settled(&self, x: &BigInt) -> Result<bool> {
        Ok(self.holds(x)? == Some(true) && self.increasing_from(x)?)
    }
}

fn solve_at(
    c0: &RealExpr,
    c1: &RealExpr,
    c2: &RealExpr,
    c3: &RealExpr,
    bits: u32,
) -> Result<IndexBound> {
    let k = Coeffs {
        c0: c0.eval(bits)?,
        c1: c1.eval(bits)?,
        c2: c2.eval(bits)?,
        c3: c3.eval(bits)?,
        bits,
    };
    if !k.c0.is_positive() {
        return Err(Error::InvalidInput("c0 must be positive".into()));
    }
    if k.c1.is_negative() || k.c3.is_negative() {
        return Err(Error::InvalidInput("c1 and c3 must be non-negative".into()));
    }
    let two = BigInt::from(2);
    if k.c1.is_exact() && k.c1.lo().is_zero() {
        return Ok(IndexBound {
            bound: two,
            least: true,
            bits,
        });
    }
    let seed = fixed_point_seed(&k);
    let mut hi = BigInt::from(seed.max(2.0) as u128).max(two.clone()) + 1u32;
    let mut doublings = 0;
    while !k.settled(&hi)? {
        hi *= 2;
        doublings += 1;
        if doublings > 4 * bits {
            return Err(CertError::Ambiguous { bits }.into());
        }
    }
    // invariant: lo fails or lo < 2, and hi is settled
    let mut lo = BigInt::one();
    let mut probe = BigInt::from((seed * 0.99).max(1.0) as u128);
    while probe >= two && probe < hi {
        if k.holds(&probe)? == Some(false) {
            lo = probe;
            break;
        }
        probe /= 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        if k.settled(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let least = lo < two || k.holds(&lo)? == Some(false);
    Ok(IndexBound {
        bound: hi,
        least,
        bits,
    })
}

/// Upward iteration `x ← (c1/c0)·log x·(c2 + c3·log x)` in floating point.
fn fixed_point_seed(k: &Coeffs) -> f64 {
    let (c0, c1, c2, c3) = (k.c0.to_f64(), k.c1.to_f64(), k.c2.to_f64(), k.c3.to_f64());
    let mut x = 2.0f64;
    for _ in 0..200 {
        let l = x.ln();
        let next = (c1 / c0 * l * (c2 + c3 * l)).max(2.0);
        if !next.is_finite() || (next - x).abs() <= 1e-12 * x {
            return next.min(1e300);
        }
        x = next;
    }
    x
}
