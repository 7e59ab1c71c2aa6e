//! Decimal rendering of exact rationals and interval summaries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::CertifiedReal;

/// `{mid, rad, bits}` view of a certified real, used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealSummary {
    pub mid: String,
    pub rad: String,
    pub bits: u32,
}

impl RealSummary {
    pub fn of(x: &CertifiedReal) -> RealSummary {
        RealSummary {
            mid: format_sig(&x.midpoint().to_rational(), 25),
            rad: format_sci_up(&x.radius().to_rational(), 2),
            bits: x.bits(),
        }
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.parse().unwrap_or(f64::NAN)
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// `⌊log10 |r|⌋` for non-zero `r`.
fn decimal_exponent(r: &BigRational) -> i64 {
    let a = r.abs();
    let num_digits = a.numer().to_string().len() as i64;
    let den_digits = a.denom().to_string().len() as i64;
    let mut e = num_digits - den_digits;
    // correct the estimate: 10^e ≤ a < 10^(e+1)
    loop {
        let p = scale(&BigRational::one(), e);
        if p > a {
            e -= 1;
            continue;
        }
        let p1 = scale(&BigRational::one(), e + 1);
        if p1 <= a {
            e += 1;
            continue;
        }
        return e;
    }
}

fn scale(r: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        r * BigRational::from_integer(pow10(e as u32))
    } else {
        r / BigRational::from_integer(pow10((-e) as u32))
    }
}

/// Round-half-up rendering with `digits` significant digits. Plain notation
/// for moderate exponents, scientific otherwise.
pub fn format_sig(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let mut e = decimal_exponent(&a);
    let shift = digits as i64 - 1 - e;
    let scaled = scale(&a, shift);
    let two = BigInt::from(2);
    let mut m = (scaled.numer() * &two + scaled.denom()).div_floor(&(scaled.denom() * &two));
    if m == pow10(digits as u32) {
        m = pow10(digits as u32 - 1);
        e += 1;
    }
    let ds = m.to_string();
    let body = if (-6..21).contains(&e) {
        if e >= 0 {
            let int_len = e as usize + 1;
            if ds.len() <= int_len {
                format!("{}{}", ds, "0".repeat(int_len - ds.len()))
            } else {
                let frac = ds[int_len..].trim_end_matches('0');
                if frac.is_empty() {
                    ds[..int_len].to_string()
                } else {
                    format!("{}.{}", &ds[..int_len], frac)
                }
            }
        } else {
            let lead = "0".repeat((-e - 1) as usize);
            let frac = ds.trim_end_matches('0');
            format!("0.{lead}{frac}")
        }
    } else {
        let frac = ds[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{}", &ds[..1], e)
        } else {
            format!("{}.{}e{}", &ds[..1], frac, e)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Scientific notation rounded away from zero, so a printed radius never
/// understates the true one.
pub fn format_sci_up(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let (m, mut e) = round_up_sig(&r.abs(), digits);
    let mut ds = m.to_string();
    if ds.len() > digits {
        ds.truncate(digits);
        e += 1;
    }
    let frac = ds[1..].trim_end_matches('0');
    let sign = if r.is_negative() { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{}e{}", &ds[..1], e)
    } else {
        format!("{sign}{}.{}e{}", &ds[..1], frac, e)
    }
}

/// Smallest `m · 10^(e − digits + 1)` with `digits`-digit `m` that is `≥ a`.
/// Returns `(m, e)`.
fn round_up_sig(a: &BigRational, digits: usize) -> (BigInt, i64) {
    let e = decimal_exponent(a);
    let shift = digits as i64 - 1 - e;
    let scaled = scale(a, shift);
    let m = -((-scaled.numer()).div_floor(scaled.denom()));
    (m, e)
}

/// Rounds a positive rational up to `digits` significant decimal digits and
/// returns the exact decimal as a rational.
pub fn round_up_decimal(a: &BigRational, digits: usize) -> BigRational {
    assert!(a.is_positive());
    let (m, e) = round_up_sig(a, digits);
    scale(&BigRational::from_integer(m), e - (digits as i64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn significant_digit_rendering() {
        assert_eq!(format_sig(&q(1, 3), 5), "0.33333");
        assert_eq!(format_sig(&q(2, 3), 3), "0.667");
        assert_eq!(format_sig(&q(-1234567, 1), 3), "-1230000");
        assert_eq!(format_sig(&q(999_999, 1_000_000), 3), "1");
        assert_eq!(format_sig(&q(1, 10_000_000), 3), "1e-7");
        let big = BigRational::from_integer(BigInt::from(3) * pow10(29));
        assert_eq!(format_sig(&big, 4), "3e29");
    }

    #[test]
    fn radius_rounds_up() {
        assert_eq!(format_sci_up(&q(1234, 1_000_000), 2), "1.3e-3");
        assert_eq!(format_sci_up(&q(1, 1), 2), "1e0");
        assert_eq!(format_sci_up(&q(999, 1), 2), "1e3");
    }

    #[test]
    fn decimal_round_up() {
        let c = BigRational::new(298_680_000_000_123i64.into(), 100.into());
        assert_eq!(
            round_up_decimal(&c, 3),
            BigRational::from_integer(2_990_000_000_000i64.into())
        );
        assert_eq!(round_up_decimal(&q(3, 1), 3), q(3, 1));
    }
}
