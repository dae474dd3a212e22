//! Certified natural logarithm of exact dyadic points.
//!
//! `log x = log m + e·log 2` after normalizing `x = m·2^e` with `m` in
//! `[1, 2)`, and `log m = 2·atanh(z)` with `z = (m−1)/(m+1)` in `[0, 1/3]`.
//! The atanh series is summed in interval arithmetic with an explicit
//! geometric tail bound, so the returned interval always contains the
//! exact logarithm.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use super::creal::CReal;
use super::dyadic::Dyadic;
use super::RealError;

const GUARD_BITS: u32 = 24;

/// Certified `log` of an exact dyadic `x > 0`, as a thin interval at
/// `prec` mantissa bits.
pub fn log_dyadic(x: &Dyadic, prec: u32) -> Result<CReal, RealError> {
    if !x.is_positive() {
        return Err(RealError::LogNonPositive);
    }
    let w = prec + GUARD_BITS;
    // x = m·2^e with m in [1, 2): shift the mantissa below its own width.
    let e = x.magnitude_exp().unwrap() - 1;
    let m = x.mul_pow2(-e);
    let log_m = atanh_series(&m, w);
    let result = if e == 0 {
        log_m
    } else {
        log_m.add(&log2(w).mul_i64(e))
    };
    Ok(result)
}

/// `log 2 = 2·atanh(1/3)` at `w` working bits, cached per precision.
pub fn log2(w: u32) -> CReal {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, CReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let one = CReal::one(w);
    let three = CReal::from_i64(3, w);
    let z = one.div(&three).expect("exact nonzero divisor");
    let v = two_atanh(&z, w);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// `log m` for an exact dyadic `m` in `[1, 2)`.
fn atanh_series(m: &Dyadic, w: u32) -> CReal {
    debug_assert!(m.cmp(&Dyadic::one()) != std::cmp::Ordering::Less);
    debug_assert!(m.cmp(&Dyadic::from_i64(2)) == std::cmp::Ordering::Less);
    let mc = CReal::exact(m.clone(), w);
    let one = CReal::one(w);
    let num = mc.sub(&one);
    if num.lo().is_zero() && num.is_point() {
        return CReal::zero(w);
    }
    let den = mc.add(&one);
    let z = num.div(&den).expect("m+1 >= 2 cannot contain zero");
    two_atanh(&z, w)
}

/// `2·atanh(z) = 2·Σ z^{2j+1}/(2j+1)` for certified `z` with `0 <= z <= 1/3`.
fn two_atanh(z: &CReal, w: u32) -> CReal {
    let zsq = z.mul(z);
    let mut power = z.clone(); // z^{2j+1}
    let mut sum = CReal::zero(w);
    let threshold = Dyadic::pow2(-(w as i64) - 2);
    let mut j: i64 = 0;
    loop {
        let term = power.div(&CReal::from_i64(2 * j + 1, w)).expect("odd denominator");
        sum = sum.add(&term);
        power = power.mul(&zsq);
        j += 1;
        // Tail after truncation: Σ_{i>=j} z^{2i+1}/(2i+1)
        //   <= z^{2j+1} / ((2j+1)(1−z²)) <= (9/8)·z^{2j+1}/(2j+1)  for z <= 1/3.
        let next_hi = power.hi().round(64, super::dyadic::Rounding::Up);
        if next_hi.cmp(&threshold) == std::cmp::Ordering::Less {
            let tail = next_hi.mul(&Dyadic::from_i64(2)); // covers the 9/8 factor
            let tail_iv = CReal::from_endpoints(Dyadic::zero(), tail, w);
            sum = sum.add(&tail_iv);
            break;
        }
    }
    sum.mul_i64(2)
}
