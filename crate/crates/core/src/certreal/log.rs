//! Natural logarithm with a rigorous error bound.
//!
//! `x = y · 2^k` with `y ∈ [3/4, 3/2)`, then `ln y = 2·atanh((y−1)/(y+1))`
//! and `ln 2 = 2·atanh(1/3)`. Both series are summed in fixed point with an
//! explicit bound on the accumulated truncation error.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};

pub(crate) struct Bounds {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

/// `atanh(a/b) · 2^w ∈ [sum − err, sum + err]`, for `|a/b| ≤ 1/3`.
fn atanh_fixed(a: &BigInt, b: &BigInt, w: u64) -> (BigInt, BigInt) {
    debug_assert!(BigInt::from(3) * a.abs() <= b.abs());
    let a2 = a * a;
    let b2 = b * b;
    // Truncating division keeps |error| < 1 per step; with z² ≤ 1/9 the
    // error carried by `term` never exceeds 9/8 ulp.
    let mut term: BigInt = (a << w) / b;
    let mut sum = term.clone();
    let mut n_terms: u64 = 1;
    let mut j: u64 = 1;
    loop {
        term = (&term * &a2) / &b2;
        if term.is_zero() {
            break;
        }
        sum += &term / BigInt::from(2 * j + 1);
        j += 1;
        n_terms += 1;
    }
    // per-term error ≤ 2.125 ulp, plus the tail once `term` truncates to 0
    let err = BigInt::from(3 * n_terms + 8);
    (sum, err)
}

/// Enclosure of `ln x` for a positive dyadic `x`, with roughly `bits`
/// significant bits.
pub(crate) fn ln_dyadic(x: &Dyadic, bits: u32) -> Bounds {
    assert!(x.signum() > 0, "ln of non-positive dyadic");
    if *x == Dyadic::one() {
        return Bounds {
            lo: Dyadic::zero(),
            hi: Dyadic::zero(),
        };
    }
    let mut k = x.magnitude();
    let mut y = x.mul_pow2(-k);
    let three_halves = Dyadic::new(BigInt::from(3), -1);
    if y >= three_halves {
        k += 1;
        y = y.mul_pow2(-1);
    }
    // y = m / 2^s
    let (m, s) = if y.exponent() >= 0 {
        (y.mantissa() << y.exponent() as u64, 0u64)
    } else {
        (y.mantissa().clone(), (-y.exponent()) as u64)
    };
    let pow_s = BigInt::one() << s;
    let a = &m - &pow_s;
    let b = &m + &pow_s;

    let guard = 40 + (64 - (k.unsigned_abs()).leading_zeros() as u64);
    let w = bits as u64 + guard;
    let (sy, ey) = if a.is_zero() {
        (BigInt::zero(), BigInt::zero())
    } else {
        atanh_fixed(&a, &b, w)
    };
    let mut lo = (&sy - &ey) * 2;
    let mut hi = (&sy + &ey) * 2;
    if k != 0 {
        let (s2, e2) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
        let l2_lo = (&s2 - &e2) * 2;
        let l2_hi = (&s2 + &e2) * 2;
        let kb = BigInt::from(k);
        if k > 0 {
            lo += &kb * l2_lo;
            hi += &kb * l2_hi;
        } else {
            lo += &kb * l2_hi;
            hi += &kb * l2_lo;
        }
    }
    let w = w as i64;
    Bounds {
        lo: Dyadic::new(lo, -w).round(bits, Round::Down),
        hi: Dyadic::new(hi, -w).round(bits, Round::Up),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_encloses_reference_digits() {
        let b = ln_dyadic(&Dyadic::from_i64(2), 128);
        // ln 2 = 0.693147180559945309417232121458176568075...
        let lo = b.lo.to_f64();
        let hi = b.hi.to_f64();
        let ln2 = std::f64::consts::LN_2;
        assert!(lo <= ln2 && ln2 <= hi + 1e-16);
        assert!(b.hi.sub(&b.lo) < Dyadic::pow2(-120));
    }

    #[test]
    fn ln_of_one_is_exact_zero() {
        let b = ln_dyadic(&Dyadic::one(), 64);
        assert!(b.lo.is_zero() && b.hi.is_zero());
    }

    #[test]
    fn ln_of_small_and_large_arguments() {
        for &(m, e) in &[(1i64, -40i64), (3, 100), (7, -3), (12345, 0)] {
            let x = Dyadic::new(BigInt::from(m), e);
            let b = ln_dyadic(&x, 96);
            let expect = (m as f64).ln() + e as f64 * std::f64::consts::LN_2;
            assert!(b.lo.to_f64() <= expect + 1e-12 && expect - 1e-12 <= b.hi.to_f64());
            assert!(b.lo < b.hi);
        }
    }
}
