//! Exact dyadic numbers `man * 2^exp` on big-integer mantissas.
//!
//! Addition, subtraction and multiplication are exact. Division, square
//! root and the width-limiting `round` are directed: the caller picks the
//! rounding direction and the result is guaranteed to lie on that side of
//! the true value. These are the only primitives the interval layer needs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rounding direction for the inexact primitives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// A dyadic rational `man * 2^exp`, kept normalized (odd mantissa, or zero
/// with exponent zero) so that equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).man.sign() {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

// Arithmetic is by reference and partly fallible, so the methods keep
// their plain names instead of the operator traits.
#[allow(clippy::should_implement_trait)]
impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::from(1), exp: 0 }
    }

    /// 1/2 as an exact dyadic.
    pub fn half() -> Self {
        Dyadic { man: BigInt::from(1), exp: -1 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// 2^k.
    pub fn pow2(k: i64) -> Self {
        Dyadic { man: BigInt::from(1), exp: k }
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    /// Number of significant bits of the mantissa (0 for zero).
    pub fn mantissa_bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit: `2^(e-1) <= |x| < 2^e`. None for zero.
    pub fn magnitude_exp(&self) -> Option<i64> {
        if self.man.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.man.is_zero() {
            return other.clone();
        }
        if other.man.is_zero() {
            return self.clone();
        }
        let (a, b) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let shift = (a.exp - b.exp) as u64;
        Dyadic::new((&a.man << shift) + &b.man, b.exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.man.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            self.man.div_floor(&(BigInt::from(1) << (-self.exp) as u64))
        }
    }

    /// Nearest integer; halves round up.
    pub fn round_nearest_int(&self) -> BigInt {
        self.add(&Dyadic::half()).floor()
    }

    /// Directed rounding to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, dir: Rounding) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let man = match dir {
            // BigInt shr is a floor shift (rounds toward negative infinity).
            Rounding::Down => &self.man >> shift,
            Rounding::Up => -(&(-&self.man) >> shift),
        };
        Dyadic::new(man, self.exp + shift as i64)
    }

    /// Directed division `self / other` with roughly `prec` result bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Rounding) -> Dyadic {
        assert!(!other.man.is_zero(), "dyadic division by zero");
        if self.man.is_zero() {
            return Dyadic::zero();
        }
        let target = prec as i64 + 2;
        let have = self.man.bits() as i64 - other.man.bits() as i64;
        let shift = (target - have).max(0) as u64;
        let num = &self.man << shift;
        let (q, r) = num.div_mod_floor(&other.man);
        // div_mod_floor keeps the remainder sign equal to the divisor's, so
        // q <= true quotient < q + 1 regardless of operand signs.
        let exact = r.is_zero();
        let q = match (dir, exact) {
            (Rounding::Down, _) | (Rounding::Up, true) => q,
            (Rounding::Up, false) => q + 1,
        };
        Dyadic::new(q, self.exp - other.exp - shift as i64).round(prec, dir)
    }

    /// Directed square root; `self` must be non-negative.
    pub fn sqrt(&self, prec: u32, dir: Rounding) -> Dyadic {
        assert!(!self.man.is_negative(), "dyadic sqrt of a negative number");
        if self.man.is_zero() {
            return Dyadic::zero();
        }
        let target = 2 * (prec as i64 + 2);
        let have = self.man.bits() as i64;
        // Even shift so the exponent halves exactly.
        let mut shift = (target - have).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.man << shift as u64;
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let root = match (dir, exact) {
            (Rounding::Down, _) | (Rounding::Up, true) => root,
            (Rounding::Up, false) => root + 1,
        };
        Dyadic::new(root, (self.exp - shift) / 2).round(prec, dir)
    }

    /// Decimal rendering with `sig` significant digits, truncated toward
    /// zero; used for human-readable output, never for certification.
    pub fn to_decimal(&self, sig: u32) -> String {
        if self.man.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1) as i64;
        // dec_exp = floor(log10 |x|) within 1; correct below by inspection.
        let mag = self.magnitude_exp().unwrap();
        let mut dec_exp = ((mag - 1) as i128 * 30103 / 100000) as i64;
        let digits = loop {
            // digits = trunc(|x| * 10^(sig - 1 - dec_exp))
            let p = sig - 1 - dec_exp;
            let d = self.scaled_decimal_trunc(p);
            let s = d.to_string();
            let len = s.len() as i64;
            if len > sig {
                dec_exp += len - sig;
            } else if len < sig {
                dec_exp -= sig - len;
            } else {
                break s;
            }
        };
        let sign = if self.man.is_negative() { "-" } else { "" };
        if sig == 1 {
            return format!("{sign}{digits}e{dec_exp}");
        }
        format!("{sign}{}.{}e{}", &digits[..1], &digits[1..], dec_exp)
    }

    /// trunc(|x| * 10^p) as a non-negative integer.
    fn scaled_decimal_trunc(&self, p: i64) -> BigInt {
        let man = self.man.abs();
        let (num, den) = if p >= 0 {
            (man * BigInt::from(10).pow(p as u32), BigInt::from(1))
        } else {
            (man, BigInt::from(10).pow((-p) as u32))
        };
        let (num, den) = if self.exp >= 0 {
            (num << self.exp as u64, den)
        } else {
            (num, den << (-self.exp) as u64)
        };
        num / den
    }
}
