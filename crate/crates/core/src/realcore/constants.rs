//! Named constants of the solver: the characteristic roots of the two
//! recurrences, the square roots they are built from, their logarithms,
//! and the index-ratio constants c1, c2.

use std::fmt;
use std::str::FromStr;

use super::creal::CReal;
use super::expr::{digits_to_bits, Expr};
use super::RealError;

/// Identifiers for the built-in constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    /// (1+√5)/2, dominant root of x²−x−1.
    Alpha,
    /// (1−√5)/2 = −1/α.
    Beta,
    /// 1+√2, dominant root of x²−2x−1.
    Gamma,
    /// 1−√2 = −1/γ.
    Delta,
    Sqrt2,
    Sqrt5,
    LogAlpha,
    LogGamma,
    /// log γ / log α = 1.83157…
    C1,
    /// log α / log γ = 0.545979…
    C2,
}

impl Constant {
    pub const ALL: [Constant; 10] = [
        Constant::Alpha,
        Constant::Beta,
        Constant::Gamma,
        Constant::Delta,
        Constant::Sqrt2,
        Constant::Sqrt5,
        Constant::LogAlpha,
        Constant::LogGamma,
        Constant::C1,
        Constant::C2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constant::Alpha => "alpha",
            Constant::Beta => "beta",
            Constant::Gamma => "gamma",
            Constant::Delta => "delta",
            Constant::Sqrt2 => "sqrt2",
            Constant::Sqrt5 => "sqrt5",
            Constant::LogAlpha => "log_alpha",
            Constant::LogGamma => "log_gamma",
            Constant::C1 => "c1",
            Constant::C2 => "c2",
        }
    }

    /// Defining expression over integers, square roots and logs.
    pub fn expr(self) -> Expr {
        match self {
            Constant::Sqrt2 => Expr::sqrt(Expr::int(2)),
            Constant::Sqrt5 => Expr::sqrt(Expr::int(5)),
            Constant::Alpha => Expr::div(
                Expr::add(Expr::int(1), Constant::Sqrt5.expr()),
                Expr::int(2),
            ),
            Constant::Beta => Expr::div(
                Expr::sub(Expr::int(1), Constant::Sqrt5.expr()),
                Expr::int(2),
            ),
            Constant::Gamma => Expr::add(Expr::int(1), Constant::Sqrt2.expr()),
            Constant::Delta => Expr::sub(Expr::int(1), Constant::Sqrt2.expr()),
            Constant::LogAlpha => Expr::log(Constant::Alpha.expr()),
            Constant::LogGamma => Expr::log(Constant::Gamma.expr()),
            Constant::C1 => Expr::div(Constant::LogGamma.expr(), Constant::LogAlpha.expr()),
            Constant::C2 => Expr::div(Constant::LogAlpha.expr(), Constant::LogGamma.expr()),
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Constant {
    type Err = RealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Constant::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| RealError::UnknownConstant(s.to_string()))
    }
}

/// Evaluates a named constant at the given working precision, memoized
/// per `(constant, bits)`; the same key always yields the same interval.
pub(crate) fn cached_constant(name: Constant, bits: u32) -> Result<CReal, RealError> {
    use std::collections::BTreeMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<BTreeMap<(u8, u32), CReal>>> = OnceLock::new();
    let key = (name as u8, bits);
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = name.expr().eval(bits)?;
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// Builds the named constant certified to `digits` decimal digits:
/// the returned interval contains the constant and its radius is at most
/// `10^(−digits+2)`.
pub fn make_constant(name: Constant, digits: u32) -> Result<CReal, RealError> {
    let digits = digits.max(32);
    let mut bits = digits_to_bits(digits);
    loop {
        let v = cached_constant(name, bits)?;
        // radius <= 10^(−digits+2) is implied by radius < 2^(−(digits−2)·10/3)
        let target = -((digits as i64 - 2) * 10) / 3;
        if v.radius().cmp(&super::dyadic::Dyadic::pow2(target)) == std::cmp::Ordering::Less {
            return Ok(v);
        }
        bits *= 2;
    }
}
