//! The four linear forms `ζ₁ … ζ₄` and the constants attached to them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::certreal::{CertError, CertifiedReal, RealExpr};
use crate::error::{Error, Result};
use crate::linforms::{
    height, height_combine_bound, AlgebraicNumberDesc, HeightCombine, MatveevInput,
};
use crate::reduction::MuTemplate;
use crate::surd::QuadraticSurd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormLabel {
    #[serde(rename = "zeta1")]
    Zeta1,
    #[serde(rename = "zeta2")]
    Zeta2,
    #[serde(rename = "zeta3")]
    Zeta3,
    #[serde(rename = "zeta4")]
    Zeta4,
}

impl fmt::Display for FormLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormLabel::Zeta1 => "zeta1",
            FormLabel::Zeta2 => "zeta2",
            FormLabel::Zeta3 => "zeta3",
            FormLabel::Zeta4 => "zeta4",
        })
    }
}

#[derive(Clone, Debug)]
pub enum MuShape {
    Fixed(RealExpr),
    /// `μ(s)` with `s = n − m`.
    Template(MuTemplate),
}

/// A form `ζ = α₁^{b₁} α₂^{b₂} α₃ − 1` with `|ζ| < c/B^w`, and the
/// one-dimensional reduction it feeds.
#[derive(Clone, Debug)]
pub struct LinearFormInstance {
    pub label: FormLabel,
    pub expression: &'static str,
    /// Bases with the role of their exponent (`n`, `k`, or `1`).
    pub bases: Vec<(AlgebraicNumberDesc, &'static str)>,
    /// Matveev `A_i`; for the shifted forms `A₃` is factored out and set to 1.
    pub matveev_a: Vec<RealExpr>,
    /// `A₃ = 4 + slope·(n − m)` when `A₃` is factored out.
    pub a3_slope: Option<RealExpr>,
    /// The exponent bound `B` is this index.
    pub b_index: &'static str,
    /// `|ζ| < error_c / error_base^w`
    pub error_c: BigRational,
    pub error_base: RealExpr,
    pub w: &'static str,
    pub alpha: RealExpr,
    pub mu: MuShape,
    pub a: RealExpr,
    pub b: RealExpr,
    /// `ω = w − omega_offset`
    pub omega_offset: u64,
}

fn expr(s: &str) -> RealExpr {
    RealExpr::parse(s).unwrap_or_else(|e| unreachable!("built-in expression: {e}"))
}

fn rat(n: i64, d: i64) -> AlgebraicNumberDesc {
    AlgebraicNumberDesc::rational(n, d).unwrap_or_else(|e| unreachable!("{e}"))
}

fn theta() -> AlgebraicNumberDesc {
    AlgebraicNumberDesc::from_surd(&QuadraticSurd::golden_ratio())
}

pub const JJ_SWEEP_TEMPLATE: &str = "log(3/(1+2^(-{s})))/log(2)";
pub const LL_SWEEP_TEMPLATE: &str = "log(3*(1+phi^(-{s})))/log(2)";

fn template(s: &str) -> MuShape {
    MuShape::Template(MuTemplate::new(s).unwrap_or_else(|e| unreachable!("{e}")))
}

impl LinearFormInstance {
    /// `2^{−n}·θ^k·3 − 1`
    pub fn zeta1() -> LinearFormInstance {
        LinearFormInstance {
            label: FormLabel::Zeta1,
            expression: "2^(-n) * theta^k * 3 - 1",
            bases: vec![(rat(2, 1), "-n"), (theta(), "k"), (rat(3, 1), "1")],
            matveev_a: vec![expr("1.4"), expr("0.5"), expr("2.2")],
            a3_slope: None,
            b_index: "k",
            error_c: BigRational::from_integer(9.into()),
            error_base: expr("2"),
            w: "n-m",
            alpha: expr("log(phi)/log(2)"),
            mu: MuShape::Fixed(expr("log(3)/log(2)")),
            a: expr("26"),
            b: expr("2"),
            omega_offset: 0,
        }
    }

    /// `θ^k·2^{−n}·3(1 + 2^{m−n})^{−1} − 1`
    pub fn zeta2() -> LinearFormInstance {
        LinearFormInstance {
            label: FormLabel::Zeta2,
            expression: "theta^k * 2^(-n) * 3*(1 + 2^(m-n))^(-1) - 1",
            bases: vec![(rat(2, 1), "-n"), (theta(), "k")],
            matveev_a: vec![expr("1.4"), expr("0.5"), expr("1")],
            a3_slope: Some(expr("2*log(2)")),
            b_index: "k",
            error_c: BigRational::new(11.into(), 2.into()),
            error_base: expr("2"),
            w: "n",
            alpha: expr("log(phi)/log(2)"),
            mu: template(JJ_SWEEP_TEMPLATE),
            a: expr("1"),
            b: expr("2"),
            omega_offset: 4,
        }
    }

    /// `2^k·θ^{−n}·(1/3) − 1`
    pub fn zeta3() -> LinearFormInstance {
        LinearFormInstance {
            label: FormLabel::Zeta3,
            expression: "2^k * theta^(-n) * (1/3) - 1",
            bases: vec![(rat(2, 1), "k"), (theta(), "-n"), (rat(1, 3), "1")],
            matveev_a: vec![expr("1.4"), expr("0.5"), expr("2.2")],
            a3_slope: None,
            b_index: "n",
            error_c: BigRational::from_integer(4.into()),
            error_base: RealExpr::Phi,
            w: "n-m",
            alpha: expr("log(phi)/log(2)"),
            mu: MuShape::Fixed(expr("log(3)/log(2)")),
            a: expr("12"),
            b: RealExpr::Phi,
            omega_offset: 0,
        }
    }

    /// `2^k·θ^{−n}·(1/3)(1 + θ^{m−n})^{−1} − 1`
    pub fn zeta4() -> LinearFormInstance {
        LinearFormInstance {
            label: FormLabel::Zeta4,
            expression: "2^k * theta^(-n) * (1/3)*(1 + theta^(m-n))^(-1) - 1",
            bases: vec![(rat(2, 1), "k"), (theta(), "-n")],
            matveev_a: vec![expr("1.4"), expr("0.5"), expr("1")],
            a3_slope: Some(expr("log(phi)")),
            b_index: "n",
            error_c: BigRational::from_integer(4.into()),
            error_base: RealExpr::Phi,
            w: "n",
            alpha: expr("log(phi)/log(2)"),
            mu: template(LL_SWEEP_TEMPLATE),
            a: expr("12"),
            b: RealExpr::Phi,
            omega_offset: 0,
        }
    }

    pub fn matveev_input(&self) -> MatveevInput {
        MatveevInput::new(3, 2, self.matveev_a.clone())
    }

    pub fn a_list(&self) -> Vec<String> {
        let mut out: Vec<String> = self.matveev_a.iter().map(|a| a.to_string()).collect();
        if let Some(slope) = &self.a3_slope {
            out[2] = format!("4 + {slope}*(n-m)");
        }
        out
    }

    /// `log c`, the constant on the right of `log|ζ| < log c − w·log B`.
    pub fn log_error_c(&self, bits: u32) -> Result<CertifiedReal> {
        Ok(CertifiedReal::from_rational(&self.error_c, bits).ln()?)
    }

    /// Smallest `w` with `c/B^w < 1/2`; below it the case `log-form < 0`
    /// of the reduction argument is not covered.
    pub fn validity_threshold(&self, bits: u32) -> Result<u64> {
        let two_c = CertifiedReal::from_rational(
            &(&self.error_c * BigRational::from_integer(2.into())),
            bits,
        );
        let base = self.error_base.eval(bits)?;
        let mut power = CertifiedReal::from_int(1, bits);
        for w in 0..4096u64 {
            match two_c.lt(&power) {
                Some(true) => return Ok(w),
                Some(false) => {}
                None => return Err(CertError::Ambiguous { bits }.into()),
            }
            power = power.mul(&base);
        }
        Err(Error::Invariant(format!(
            "no validity threshold for {}",
            self.label
        )))
    }

    /// Certifies `2c/log 2 ≤ A·B^{offset}`, which turns `|ζ| < c/B^w` into
    /// the reduction hypothesis `|…| < A/B^ω`.
    pub fn check_reduction_constant(&self, bits: u32) -> Result<()> {
        let lhs = CertifiedReal::from_rational(&self.error_c, bits)
            .mul_int(&BigInt::from(2))
            .div(&expr("log(2)").eval(bits)?)?;
        let rhs = self
            .a
            .eval(bits)?
            .mul(&self.b.eval(bits)?.powi(self.omega_offset as i64)?);
        match lhs.le(&rhs) {
            Some(true) => Ok(()),
            Some(false) => Err(Error::Invariant(format!(
                "{}: 2c/log 2 exceeds A·B^{}",
                self.label, self.omega_offset
            ))),
            None => Err(CertError::Ambiguous { bits }.into()),
        }
    }

    /// Certifies every `A_i` against the heights of its base. For the shifted
    /// forms the factored `A₃` is checked against its height bound for each
    /// shift up to `max_shift`.
    pub fn check_a_values(&self, max_shift: u64, bits: u32) -> Result<()> {
        let inp = self.matveev_input();
        for (i, (base, _)) in self.bases.iter().enumerate() {
            inp.check_against(i, base, bits)?;
        }
        let Some(slope) = &self.a3_slope else {
            return Ok(());
        };
        let slope = slope.eval(bits)?;
        let (lead, step, one_plus) = match self.label {
            FormLabel::Zeta2 => (rat(3, 1), rat(2, 1), expr("2")),
            _ => (rat(1, 3), theta(), RealExpr::Phi),
        };
        let h_lead = height(&lead, bits)?;
        let h_step = height(&step, bits)?;
        let zero = CertifiedReal::from_int(0, bits);
        let lead_val = lead.enclose(bits);
        let base = one_plus.eval(bits)?;
        for w in 0..=max_shift {
            let a3 = CertifiedReal::from_int(4, bits).add(&slope.mul_int(&BigInt::from(w)));
            let h_pow = height_combine_bound(HeightCombine::Power(&h_step, BigInt::from(w)), bits);
            let h_sum = height_combine_bound(HeightCombine::Sum(&[zero.clone(), h_pow]), bits);
            let h = height_combine_bound(HeightCombine::Product(&[h_lead.clone(), h_sum]), bits);
            let dh = h.mul_int(&BigInt::from(2));
            // α₃ = lead·(1 + base^{−w})^{∓1}; |log α₃| ≤ |log lead| + log 2
            let shifted = CertifiedReal::from_int(1, bits).add(&base.powi(-(w as i64))?);
            let log_abs = lead_val.ln()?.abs().add(&shifted.ln()?);
            for (what, v) in [("D·h(α₃)", &dh), ("|log α₃|", &log_abs)] {
                match v.le(&a3) {
                    Some(true) => {}
                    Some(false) => {
                        return Err(Error::Invariant(format!(
                            "{}: A₃ < {what} at n-m = {w}",
                            self.label
                        )))
                    }
                    None => return Err(CertError::Ambiguous { bits }.into()),
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(
            LinearFormInstance::zeta1().validity_threshold(128).unwrap(),
            5
        );
        assert_eq!(
            LinearFormInstance::zeta2().validity_threshold(128).unwrap(),
            4
        );
        assert_eq!(
            LinearFormInstance::zeta3().validity_threshold(128).unwrap(),
            5
        );
        assert_eq!(
            LinearFormInstance::zeta4().validity_threshold(128).unwrap(),
            5
        );
    }

    #[test]
    fn constants_are_consistent() {
        for f in [
            LinearFormInstance::zeta1(),
            LinearFormInstance::zeta2(),
            LinearFormInstance::zeta3(),
            LinearFormInstance::zeta4(),
        ] {
            f.check_reduction_constant(128).unwrap();
            f.check_a_values(64, 128).unwrap();
        }
    }
}
