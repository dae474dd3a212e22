//! Arbitrary-precision certified real arithmetic.
//!
//! Every real quantity in the solver (roots, logarithms, τ, μ, ε) is a
//! [`CReal`]: a dyadic interval guaranteed to contain the true value,
//! maintained by outward rounding through every operation. Quantities
//! that may need more precision later are carried as [`Expr`] trees and
//! re-evaluated; nothing is ever silently truncated.

mod creal;
mod dyadic;
mod log;

pub mod constants;
pub mod expr;

pub use constants::{make_constant, Constant};
pub use creal::{arith, ArithOp, CReal, Truth};
pub use dyadic::{Dyadic, Rounding};
pub use expr::{digits_to_bits, Expr, PrecisionPolicy, PRECISION_CAP_ENV};

use thiserror::Error;

// Certified values are immutable and move freely between threads.
const _: fn() = || {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<CReal>();
    assert_send_sync::<Expr>();
};

/// Errors of the certified-arithmetic layer.
#[derive(Debug, Error)]
pub enum RealError {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("logarithm of a non-positive interval")]
    LogNonPositive,
    #[error("square root of an interval containing negative values")]
    SqrtNegative,
    #[error("interval too wide: {0}")]
    IntervalTooWide(String),
    #[error("comparison undecidable at current precision: {0}")]
    Undecidable(String),
    #[error("precision cap of {cap} decimal digits exceeded while {context}")]
    PrecisionCapExceeded { cap: u32, context: String },
    #[error("wrong operand count for {op}: expected {expected}, got {got}")]
    Arity { op: String, expected: usize, got: usize },
}
