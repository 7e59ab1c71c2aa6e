//! Certified real arithmetic.
//!
//! Every irrational quantity is an interval of dyadic rationals rounded
//! outward after each operation. Discrete decisions (floors, signs,
//! comparisons) are taken only when the interval proves them; otherwise the
//! caller escalates precision through [`PrecisionPolicy`].

mod dyadic;
mod expr;
mod format;
mod interval;
mod log;

use thiserror::Error;

pub use dyadic::{Dyadic, Round};
pub use expr::{parse_decimal, ParseError, RealExpr};
pub use format::{format_sci_up, format_sig, round_up_decimal, RealSummary};
pub use interval::{log2_ceiling, CertifiedReal};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("value undecidable at {bits} bits")]
    Ambiguous { bits: u32 },
    #[error("divisor interval contains zero at {bits} bits")]
    ContainsZero { bits: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted at the {ceiling}-bit ceiling")]
    PrecisionExhausted { ceiling: u32 },
}

/// Errors that may disappear at higher precision.
pub trait Retryable {
    fn is_retryable(&self) -> bool;
    fn exhausted(ceiling: u32) -> Self;
}

impl Retryable for CertError {
    fn is_retryable(&self) -> bool {
        matches!(
            self,
            CertError::Ambiguous { .. } | CertError::ContainsZero { .. }
        )
    }

    fn exhausted(ceiling: u32) -> Self {
        CertError::PrecisionExhausted { ceiling }
    }
}

/// Start at `start` bits and double up to `ceiling` before giving up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub ceiling: u32,
}

pub const DEFAULT_START_BITS: u32 = 192;
pub const DEFAULT_CEILING_BITS: u32 = 4096;

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: DEFAULT_START_BITS,
            ceiling: DEFAULT_CEILING_BITS,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start: u32, ceiling: u32) -> PrecisionPolicy {
        PrecisionPolicy { start, ceiling }
    }

    /// The sequence of precisions tried, in order.
    pub fn ladder(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut b = self.start.min(self.ceiling).max(2);
        loop {
            out.push(b);
            if b >= self.ceiling {
                break;
            }
            b = (b.saturating_mul(2)).min(self.ceiling);
        }
        out
    }

    /// Same policy, starting at twice the precision.
    pub fn doubled(&self) -> PrecisionPolicy {
        PrecisionPolicy {
            start: self.start.saturating_mul(2),
            ceiling: self.ceiling.max(self.start.saturating_mul(2)),
        }
    }

    pub fn run<T, E: Retryable>(&self, mut f: impl FnMut(u32) -> Result<T, E>) -> Result<T, E> {
        for bits in self.ladder() {
            match f(bits) {
                Err(e) if e.is_retryable() => continue,
                other => return other,
            }
        }
        Err(E::exhausted(self.ceiling))
    }
}

/// Evaluates `expr` and escalates until the enclosure is at most `2^-abs_bits`
/// wide, or until the ceiling.
pub fn eval_to_width(
    expr: &RealExpr,
    abs_bits: i64,
    policy: &PrecisionPolicy,
) -> Result<CertifiedReal, CertError> {
    policy.run(|bits| {
        let x = expr.eval(bits)?;
        if x.width() <= Dyadic::pow2(-abs_bits) {
            Ok(x)
        } else {
            Err(CertError::Ambiguous { bits })
        }
    })
}
