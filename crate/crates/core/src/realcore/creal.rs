//! Certified reals as closed dyadic intervals.
//!
//! A `CReal` is a pair of exact dyadic endpoints `[lo, hi]` guaranteed to
//! contain the value it stands for. Every operation rounds outward to the
//! working precision, so containment is preserved unconditionally.
//! Decisions (comparisons, signs) are three-valued: overlapping intervals
//! answer `Unknown` and the caller refines instead of guessing.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use super::dyadic::{Dyadic, Rounding};
use super::log::log_dyadic;
use super::RealError;

/// Outcome of a certified decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    /// The intervals overlap; refine and retry.
    Unknown,
}

impl Truth {
    pub fn is_true(self) -> bool {
        self == Truth::True
    }

    /// Collapses to a `Result`, refusing to pick a branch on `Unknown`.
    pub fn decided(self, what: &str) -> Result<bool, RealError> {
        match self {
            Truth::True => Ok(true),
            Truth::False => Ok(false),
            Truth::Unknown => Err(RealError::Undecidable(what.to_string())),
        }
    }
}

/// A certified real: the true value lies in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

// Arithmetic is by reference and partly fallible, so the methods keep
// their plain names instead of the operator traits.
#[allow(clippy::should_implement_trait)]
impl CReal {
    /// Exact point interval.
    pub fn exact(d: Dyadic, prec: u32) -> Self {
        CReal { lo: d.clone(), hi: d, prec }
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        CReal::exact(Dyadic::from_bigint(n.clone()), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        CReal::exact(Dyadic::from_i64(n), prec)
    }

    pub fn zero(prec: u32) -> Self {
        CReal::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        CReal::exact(Dyadic::one(), prec)
    }

    /// Interval from endpoints; panics if they are out of order.
    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert_ne!(lo.cmp(&hi), Ordering::Greater, "interval endpoints out of order");
        CReal { lo, hi, prec }
    }

    /// `num/den` rounded outward.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Self, RealError> {
        if den.is_zero() {
            return Err(RealError::DivisionByZero);
        }
        let n = CReal::from_bigint(num, prec);
        let d = CReal::from_bigint(den, prec);
        n.div(&d)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Midpoint (exact dyadic).
    pub fn center(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Half-width (exact dyadic, non-negative).
    pub fn radius(&self) -> Dyadic {
        self.hi.sub(&self.lo).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn outward(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        CReal { lo: lo.round(prec, Rounding::Down), hi: hi.round(prec, Rounding::Up), prec }
    }

    pub fn add(&self, other: &CReal) -> CReal {
        let prec = self.prec.max(other.prec);
        CReal::outward(self.lo.add(&other.lo), self.hi.add(&other.hi), prec)
    }

    pub fn sub(&self, other: &CReal) -> CReal {
        let prec = self.prec.max(other.prec);
        CReal::outward(self.lo.sub(&other.hi), self.hi.sub(&other.lo), prec)
    }

    pub fn neg(&self) -> CReal {
        CReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> CReal {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            CReal { lo: Dyadic::zero(), hi: self.lo.neg().max(self.hi.clone()), prec: self.prec }
        }
    }

    pub fn mul(&self, other: &CReal) -> CReal {
        let prec = self.prec.max(other.prec);
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            lo = lo.min(p.clone());
            hi = hi.max(p.clone());
        }
        CReal::outward(lo, hi, prec)
    }

    pub fn mul_bigint(&self, n: &BigInt) -> CReal {
        self.mul(&CReal::from_bigint(n, self.prec))
    }

    pub fn mul_i64(&self, n: i64) -> CReal {
        self.mul(&CReal::from_i64(n, self.prec))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn div(&self, other: &CReal) -> Result<CReal, RealError> {
        if other.contains_zero() {
            return Err(RealError::DivisionByZero);
        }
        let prec = self.prec.max(other.prec);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (n, d) in pairs {
            let down = n.div(d, prec + 2, Rounding::Down);
            let up = n.div(d, prec + 2, Rounding::Up);
            lo = Some(lo.map_or(down.clone(), |l| l.min(down)));
            hi = Some(hi.map_or(up.clone(), |h| h.max(up)));
        }
        Ok(CReal::outward(lo.unwrap(), hi.unwrap(), prec))
    }

    pub fn recip(&self) -> Result<CReal, RealError> {
        CReal::one(self.prec).div(self)
    }

    /// Natural logarithm; requires the interval to be strictly positive.
    pub fn log(&self) -> Result<CReal, RealError> {
        if !self.lo.is_positive() {
            return Err(RealError::LogNonPositive);
        }
        let prec = self.prec;
        let lo_log = log_dyadic(&self.lo, prec)?;
        let hi_log = if self.is_point() { lo_log.clone() } else { log_dyadic(&self.hi, prec)? };
        Ok(CReal::outward(lo_log.lo, hi_log.hi, prec))
    }

    /// Square root; requires the interval to be non-negative.
    pub fn sqrt(&self) -> Result<CReal, RealError> {
        if self.lo.is_negative() {
            return Err(RealError::SqrtNegative);
        }
        let prec = self.prec;
        Ok(CReal::outward(
            self.lo.sqrt(prec + 2, Rounding::Down),
            self.hi.sqrt(prec + 2, Rounding::Up),
            prec,
        ))
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// the reciprocal and therefore require the base to exclude zero.
    pub fn pow_i64(&self, e: i64) -> Result<CReal, RealError> {
        if e == 0 {
            return Ok(CReal::one(self.prec));
        }
        if e < 0 {
            return self.pow_i64(-e)?.recip();
        }
        let mut base = self.clone();
        let mut acc: Option<CReal> = None;
        let mut e = e as u64;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.unwrap())
    }

    /// Certified comparison: `None` when the intervals overlap.
    pub fn cmp_certified(&self, other: &CReal) -> Option<Ordering> {
        if self.is_point() && other.is_point() && self.lo == other.lo {
            return Some(Ordering::Equal);
        }
        if self.hi.cmp(&other.lo) == Ordering::Less {
            return Some(Ordering::Less);
        }
        if self.lo.cmp(&other.hi) == Ordering::Greater {
            return Some(Ordering::Greater);
        }
        None
    }

    pub fn lt(&self, other: &CReal) -> Truth {
        if self.hi.cmp(&other.lo) == Ordering::Less {
            Truth::True
        } else if self.lo.cmp(&other.hi) != Ordering::Less {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    pub fn le(&self, other: &CReal) -> Truth {
        if self.hi.cmp(&other.lo) != Ordering::Greater {
            Truth::True
        } else if self.lo.cmp(&other.hi) == Ordering::Greater {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    pub fn gt(&self, other: &CReal) -> Truth {
        other.lt(self)
    }

    pub fn ge(&self, other: &CReal) -> Truth {
        other.le(self)
    }

    /// Certified strict positivity of the interval's value.
    pub fn sign_positive(&self) -> Truth {
        if self.lo.is_positive() {
            Truth::True
        } else if !self.hi.is_positive() {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    /// True value's floor, when the interval determines it.
    pub fn floor_certain(&self) -> Option<BigInt> {
        let f_lo = self.lo.floor();
        let f_hi = self.hi.floor();
        // An exact-integer upper endpoint belongs to the interval, so the
        // floor is determined only when both endpoint floors agree.
        if f_lo == f_hi {
            Some(f_lo)
        } else {
            None
        }
    }

    /// Does this interval contain the exact dyadic `d`?
    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        self.lo.cmp(d) != Ordering::Greater && self.hi.cmp(d) != Ordering::Less
    }

    pub fn contains(&self, other: &CReal) -> bool {
        self.contains_dyadic(&other.lo) && self.contains_dyadic(&other.hi)
    }

    pub fn intersects(&self, other: &CReal) -> bool {
        self.lo.cmp(&other.hi) != Ordering::Greater && other.lo.cmp(&self.hi) != Ordering::Greater
    }

    /// Distance to the nearest integer, `||x||`, as a certified interval
    /// inside `[0, 1/2]`. Requires radius < 1/4 so at most one integer can
    /// be nearest over the whole interval.
    pub fn nearest_int_distance(&self) -> Result<CReal, RealError> {
        let half = Dyadic::half();
        if self.width().cmp(&half) != Ordering::Less {
            return Err(RealError::IntervalTooWide(
                "nearest-integer distance needs radius < 1/4".to_string(),
            ));
        }
        let nearest = Dyadic::from_bigint(self.center().round_nearest_int());
        // d = |x - nearest| lies in [0, 3/4); all arithmetic here is exact.
        let shifted = CReal {
            lo: self.lo.sub(&nearest),
            hi: self.hi.sub(&nearest),
            prec: self.prec,
        };
        let d = shifted.abs();
        let one = Dyadic::one();
        let (lo, hi) = if d.hi.cmp(&half) != Ordering::Greater {
            // Entirely on the near side: ||x|| = d.
            (d.lo.clone(), d.hi.clone())
        } else if d.lo.cmp(&half) != Ordering::Less {
            // Entirely beyond the half-integer: ||x|| = 1 - d.
            (one.sub(&d.hi), one.sub(&d.lo))
        } else {
            // Straddles the half-integer: maximum distance is exactly 1/2.
            (d.lo.clone().min(one.sub(&d.hi)), half.clone())
        };
        Ok(CReal::outward(lo, hi, self.prec))
    }

    /// Widen to include `other` (interval hull).
    pub fn hull(&self, other: &CReal) -> CReal {
        CReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    /// Decimal rendering of the midpoint with `sig` significant digits.
    pub fn approx_decimal(&self, sig: u32) -> String {
        self.center().to_decimal(sig)
    }

    /// Decimal rendering of the radius, rounded up to 2 significant digits.
    pub fn radius_decimal(&self) -> String {
        let r = self.radius();
        if r.is_zero() {
            return "0".to_string();
        }
        // Rounding the mantissa up keeps the printed radius an upper bound.
        r.round(8, Rounding::Up).to_decimal(2)
    }
}

/// Operation selector for the generic arithmetic entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Log,
    Abs,
}

impl ArithOp {
    fn arity(self) -> usize {
        match self {
            ArithOp::Add | ArithOp::Sub | ArithOp::Mul | ArithOp::Div => 2,
            ArithOp::Neg | ArithOp::Log | ArithOp::Abs => 1,
        }
    }
}

/// Uniform dispatch over the certified operations; the wire-level surface
/// used by the bindings. Library code calls the methods directly.
pub fn arith(op: ArithOp, args: &[CReal]) -> Result<CReal, RealError> {
    if args.len() != op.arity() {
        return Err(RealError::Arity { op: format!("{op:?}"), expected: op.arity(), got: args.len() });
    }
    match op {
        ArithOp::Add => Ok(args[0].add(&args[1])),
        ArithOp::Sub => Ok(args[0].sub(&args[1])),
        ArithOp::Mul => Ok(args[0].mul(&args[1])),
        ArithOp::Div => args[0].div(&args[1]),
        ArithOp::Neg => Ok(args[0].neg()),
        ArithOp::Log => args[0].log(),
        ArithOp::Abs => Ok(args[0].abs()),
    }
}
