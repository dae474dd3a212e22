//! Symbolic expressions over the supported constants and operations.
//!
//! An `Expr` is the re-evaluable form of every real quantity in the
//! pipeline: it can be evaluated at any working precision, which is what
//! drives precision escalation (`refine`). Certified values that must
//! survive a precision bump are always carried as expressions, never as
//! already-rounded intervals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::constants::Constant;
use super::creal::CReal;
use super::dyadic::Dyadic;
use super::RealError;

/// Decimal-digit working precision policy with a hard cap.
#[derive(Clone, Debug)]
pub struct PrecisionPolicy {
    /// Starting working precision in decimal digits.
    pub start_digits: u32,
    /// Hard cap in decimal digits; exceeding it is an error, never a guess.
    pub cap_digits: u32,
}

/// Environment variable overriding the default precision cap (digits).
pub const PRECISION_CAP_ENV: &str = "FIBPELL_PRECISION_CAP";

impl Default for PrecisionPolicy {
    fn default() -> Self {
        let cap_digits = std::env::var(PRECISION_CAP_ENV)
            .ok()
            .and_then(|v| v.parse::<u32>().ok())
            .unwrap_or(10_000);
        PrecisionPolicy { start_digits: 256, cap_digits }
    }
}

impl PrecisionPolicy {
    pub fn with_start(digits: u32) -> Self {
        PrecisionPolicy { start_digits: digits, ..Default::default() }
    }
}

/// Conversion from decimal digits to mantissa bits (with headroom).
pub fn digits_to_bits(digits: u32) -> u32 {
    // log2(10) = 3.3219... < 3.322
    (digits as u64 * 3322 / 1000) as u32 + 16
}

#[derive(Clone, Debug)]
pub enum Expr {
    Constant(Constant),
    Int(BigInt),
    Ratio(BigInt, BigInt),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Abs(Arc<Expr>),
    Log(Arc<Expr>),
    Sqrt(Arc<Expr>),
    Pow(Arc<Expr>, i64),
}

// Builder functions take operands by value and mirror the variant names.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn bigint(n: BigInt) -> Expr {
        Expr::Int(n)
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::Ratio(BigInt::from(num), BigInt::from(den))
    }

    pub fn constant(c: Constant) -> Expr {
        Expr::Constant(c)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Arc::new(a), Arc::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Arc::new(a), Arc::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Arc::new(a), Arc::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Arc::new(a), Arc::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Arc::new(a))
    }

    pub fn abs(a: Expr) -> Expr {
        Expr::Abs(Arc::new(a))
    }

    pub fn log(a: Expr) -> Expr {
        Expr::Log(Arc::new(a))
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::Sqrt(Arc::new(a))
    }

    pub fn pow(a: Expr, e: i64) -> Expr {
        Expr::Pow(Arc::new(a), e)
    }

    /// Evaluates at `bits` of working precision with outward rounding.
    pub fn eval(&self, bits: u32) -> Result<CReal, RealError> {
        match self {
            Expr::Constant(c) => super::constants::cached_constant(*c, bits),
            Expr::Int(n) => Ok(CReal::from_bigint(n, bits)),
            Expr::Ratio(n, d) => CReal::from_ratio(n, d, bits),
            Expr::Add(a, b) => Ok(a.eval(bits)?.add(&b.eval(bits)?)),
            Expr::Sub(a, b) => Ok(a.eval(bits)?.sub(&b.eval(bits)?)),
            Expr::Mul(a, b) => Ok(a.eval(bits)?.mul(&b.eval(bits)?)),
            Expr::Div(a, b) => a.eval(bits)?.div(&b.eval(bits)?),
            Expr::Neg(a) => Ok(a.eval(bits)?.neg()),
            Expr::Abs(a) => Ok(a.eval(bits)?.abs()),
            Expr::Log(a) => a.eval(bits)?.log(),
            Expr::Sqrt(a) => a.eval(bits)?.sqrt(),
            Expr::Pow(a, e) => a.eval(bits)?.pow_i64(*e),
        }
    }

    /// Evaluates at `digits` decimal digits of working precision.
    pub fn eval_digits(&self, digits: u32) -> Result<CReal, RealError> {
        self.eval(digits_to_bits(digits))
    }

    /// Re-evaluates at doubling precision until the radius is at most
    /// `target_radius`, failing hard at the policy cap.
    pub fn refine(
        &self,
        target_radius: &Dyadic,
        policy: &PrecisionPolicy,
    ) -> Result<CReal, RealError> {
        let mut digits = policy.start_digits;
        loop {
            let v = self.eval_digits(digits)?;
            if v.radius().cmp(target_radius) != std::cmp::Ordering::Greater {
                return Ok(v);
            }
            digits = digits.saturating_mul(2);
            if digits > policy.cap_digits {
                return Err(RealError::PrecisionCapExceeded {
                    cap: policy.cap_digits,
                    context: format!("refining {self} to radius {}", target_radius.to_decimal(3)),
                });
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => write!(f, "{c}"),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ratio(n, d) => write!(f, "({n}/{d})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Abs(a) => write!(f, "|{a}|"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
        }
    }
}
