//! Continued-fraction reduction of the stage-1 bounds.
//!
//! The criterion: if `p/q` is a convergent of the irrational τ with
//! `q > 6M` and `ε = ‖μq‖ − M·‖τq‖ > 0`, then `0 < mτ − n + μ < A·B^{−k}`
//! has no solution with `m ≤ M` and `k ≥ log(Aq/ε)/log B`. Every quotient
//! of the expansion is certified by endpoint agreement, ε is certified
//! positive (or the run fails hard), and the final bound is rounded
//! outward so the true bound is never exceeded.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linforms::{LinearFormStage, StageId};
use crate::realcore::{
    digits_to_bits, CReal, Constant, Expr, PrecisionPolicy, RealError, Truth,
};
use crate::sequences::RecurrencePair;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("precision cap reached while expanding a continued fraction at quotient {index} (rational input or cap too low)")]
    ExpansionExhausted { index: usize },
    #[error("epsilon is certified non-positive for {label} at convergent {index}")]
    EpsilonNotPositive { label: String, index: usize },
    #[error("epsilon sign undecidable for {label} at convergent {index} at the precision cap")]
    EpsilonUndecidable { label: String, index: usize },
    #[error("no admissible convergent with q > 6M within the extension budget for {label}")]
    NoAdmissibleConvergent { label: String },
    #[error("table does not reach pinned convergent index {0}")]
    PinnedIndexUnavailable(usize),
    #[error("invalid instance {label}: {reason}")]
    InvalidInstance { label: String, reason: String },
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Certified continued-fraction expansion of an irrational.
#[derive(Debug, Clone)]
pub struct ConvergentTable {
    expr: Expr,
    digits: u32,
    value: CReal,
    quotients: Vec<BigInt>,
    convergents: Vec<(BigInt, BigInt)>,
}

impl ConvergentTable {
    /// Expands `expr` until some denominator exceeds `min_q`, escalating
    /// the working precision as needed. Every partial quotient is the
    /// common value of `floor` on both interval endpoints; a rational
    /// input can never keep agreeing and ends in `ExpansionExhausted`.
    pub fn expand(
        expr: Expr,
        min_q: &BigInt,
        policy: &PrecisionPolicy,
    ) -> Result<Self, ReductionError> {
        let mut digits = policy.start_digits;
        loop {
            match Self::try_expand(&expr, min_q, digits) {
                Ok(table) => return Ok(table),
                Err(stalled_at) => {
                    digits = digits.saturating_mul(2);
                    if digits > policy.cap_digits {
                        return Err(ReductionError::ExpansionExhausted { index: stalled_at });
                    }
                }
            }
        }
    }

    /// One expansion attempt at fixed precision; `Err(i)` means the i-th
    /// quotient could not be certified at this precision.
    fn try_expand(expr: &Expr, min_q: &BigInt, digits: u32) -> Result<ConvergentTable, usize> {
        let bits = digits_to_bits(digits);
        let value = expr.eval(bits).map_err(|_| 0usize)?;
        let mut x = value.clone();
        let mut quotients = Vec::new();
        let mut convergents: Vec<(BigInt, BigInt)> = Vec::new();
        let (mut p_prev, mut p_prev2) = (BigInt::from(1), BigInt::from(0));
        let (mut q_prev, mut q_prev2) = (BigInt::from(0), BigInt::from(1));
        loop {
            let i = quotients.len();
            let a = x.floor_certain().ok_or(i)?;
            let p = &a * &p_prev + &p_prev2;
            let q = &a * &q_prev + &q_prev2;
            quotients.push(a.clone());
            convergents.push((p.clone(), q.clone()));
            p_prev2 = std::mem::replace(&mut p_prev, p);
            q_prev2 = std::mem::replace(&mut q_prev, q);
            if &convergents[i].1 > min_q {
                return Ok(ConvergentTable {
                    expr: expr.clone(),
                    digits,
                    value,
                    quotients,
                    convergents,
                });
            }
            let frac = x.sub(&CReal::from_bigint(&a, bits));
            if frac.contains_zero() {
                return Err(i);
            }
            x = frac.recip().map_err(|_| i)?;
        }
    }

    /// Re-expands if necessary so that the largest denominator exceeds
    /// `target`.
    pub fn ensure_q_exceeds(
        &mut self,
        target: &BigInt,
        policy: &PrecisionPolicy,
    ) -> Result<(), ReductionError> {
        if self.convergents.last().map(|(_, q)| q > target) == Some(true) {
            return Ok(());
        }
        let grown = PrecisionPolicy { start_digits: self.digits, ..policy.clone() };
        *self = ConvergentTable::expand(self.expr.clone(), target, &grown)?;
        Ok(())
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Working precision (decimal digits) of the current expansion.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// The expanded value at the table's working precision.
    pub fn value(&self) -> &CReal {
        &self.value
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    pub fn len(&self) -> usize {
        self.convergents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.convergents.is_empty()
    }

    /// Smallest index whose denominator exceeds `bound`.
    pub fn first_index_with_q_over(&self, bound: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > bound)
    }

    /// Checks `p_i·q_{i−1} − p_{i−1}·q_i = ±1` for all i ≥ 1.
    pub fn determinants_ok(&self) -> bool {
        self.convergents.windows(2).all(|w| {
            let (ref p0, ref q0) = w[0];
            let (ref p1, ref q1) = w[1];
            (p1 * q0 - p0 * q1).abs() == BigInt::from(1)
        })
    }

    /// Denominators strictly increase from the second convergent on.
    pub fn denominators_increase(&self) -> bool {
        self.convergents.windows(2).skip(1).all(|w| w[0].1 < w[1].1)
    }

    /// Certifies `|x − p_i/q_i| < 1/q_i²` for every computed convergent.
    pub fn approximation_quality_ok(&self) -> Result<bool, ReductionError> {
        let bits = digits_to_bits(self.digits);
        for (p, q) in &self.convergents {
            let approx = CReal::from_ratio(p, q, bits)?;
            let err = self.value.sub(&approx).abs();
            let qq = q * q;
            let cap = CReal::from_ratio(&BigInt::from(1), &qq, bits)?;
            match err.lt(&cap) {
                Truth::True => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

/// One application of the reduction criterion.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub label: String,
    pub tau: Expr,
    pub mu: Expr,
    /// The A of the inequality as used (an integer in the replayed
    /// campaigns).
    pub a: CReal,
    /// The certified conversion bound `2·rhs_coeff/log γ` that the used A
    /// is recorded against in the certificate.
    pub a_derived: CReal,
    pub b: Expr,
    pub big_m: BigInt,
    /// Replay pinning: use exactly this convergent index (still checked
    /// for `q > 6M` and `ε > 0`).
    pub pinned_index: Option<usize>,
    /// Fallback bound where the Γ-derivation's guard assumption fails
    /// (m ≤ 19 / n ≤ 100); the effective bound never depends on the guard.
    pub guard_bound: Option<BigInt>,
    /// Negative-Γ mirror (μ replaced by −μ); ‖·‖ makes ε identical, and
    /// both signs are recorded in the certificate.
    pub mirrored: bool,
}

/// Outcome of one reduction.
#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub label: String,
    pub mirrored: bool,
    pub a_used: CReal,
    pub a_derived: CReal,
    pub convergent_index: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub epsilon: CReal,
    /// Bound on the criterion's exponent k: solutions have k ≤ this.
    pub exponent_bound: BigInt,
    /// `max(exponent_bound, guard_bound)`.
    pub effective_bound: BigInt,
}

/// `ε = ‖μq‖ − M·‖τq‖` as a certified interval.
pub fn dp_epsilon(
    q: &BigInt,
    tau: &CReal,
    mu: &CReal,
    big_m: &BigInt,
) -> Result<CReal, RealError> {
    let mu_q = mu.mul_bigint(q).nearest_int_distance()?;
    let tau_q = tau.mul_bigint(q).nearest_int_distance()?;
    Ok(mu_q.sub(&tau_q.mul_bigint(big_m)))
}

fn six_m(big_m: &BigInt) -> BigInt {
    BigInt::from(6) * big_m
}

/// Applies the criterion: selects the smallest convergent index with
/// `q > 6M` and certified `ε > 0` (advancing past convergents whose ε is
/// non-positive), or the pinned index when the instance carries one, and
/// returns the certified exponent bound `⌊log(A·q/ε)/log B⌋` computed
/// with outward rounding.
pub fn dp_reduce(
    inst: &ReductionInstance,
    table: &mut ConvergentTable,
    policy: &PrecisionPolicy,
) -> Result<ReductionOutcome, ReductionError> {
    if inst.big_m < BigInt::from(1) {
        return Err(ReductionError::InvalidInstance {
            label: inst.label.clone(),
            reason: "M must be at least 1".to_string(),
        });
    }
    let threshold = six_m(&inst.big_m);
    let start = match inst.pinned_index {
        Some(i) => {
            if table.len() <= i {
                // Grow the table far enough to hold index i.
                let mut target = table.convergents().last().expect("non-empty").1.clone();
                while table.len() <= i {
                    target *= BigInt::from(16);
                    table.ensure_q_exceeds(&target, policy)?;
                }
            }
            if table.convergents()[i].1 <= threshold {
                return Err(ReductionError::InvalidInstance {
                    label: inst.label.clone(),
                    reason: format!("pinned convergent {i} has q <= 6M"),
                });
            }
            i
        }
        None => {
            table.ensure_q_exceeds(&threshold, policy)?;
            table.first_index_with_q_over(&threshold).ok_or_else(|| {
                ReductionError::NoAdmissibleConvergent { label: inst.label.clone() }
            })?
        }
    };

    let budget = 60usize;
    let mut index = start;
    loop {
        if index >= table.len() {
            let last_q = table.convergents().last().expect("non-empty").1.clone();
            table.ensure_q_exceeds(&(last_q * BigInt::from(16)), policy)?;
            continue;
        }
        let q = table.convergents()[index].1.clone();
        match certified_epsilon_sign(inst, &q, policy)? {
            (eps, Truth::True) => {
                let (p, _) = table.convergents()[index].clone();
                let bound = exponent_bound(inst, &q, &eps, policy)?;
                let effective =
                    inst.guard_bound.iter().fold(bound.clone(), |acc, g| acc.max(g.clone()));
                return Ok(ReductionOutcome {
                    label: inst.label.clone(),
                    mirrored: inst.mirrored,
                    a_used: inst.a.clone(),
                    a_derived: inst.a_derived.clone(),
                    convergent_index: index,
                    p,
                    q,
                    epsilon: eps,
                    exponent_bound: bound,
                    effective_bound: effective,
                });
            }
            (_, Truth::False) => {
                if inst.pinned_index.is_some() {
                    return Err(ReductionError::EpsilonNotPositive {
                        label: inst.label.clone(),
                        index,
                    });
                }
                if index - start >= budget {
                    return Err(ReductionError::NoAdmissibleConvergent {
                        label: inst.label.clone(),
                    });
                }
                index += 1;
            }
            (_, Truth::Unknown) => {
                return Err(ReductionError::EpsilonUndecidable {
                    label: inst.label.clone(),
                    index,
                })
            }
        }
    }
}

/// Evaluates ε at escalating precision until its sign is decided or the
/// cap is reached (`Unknown` only at the cap).
fn certified_epsilon_sign(
    inst: &ReductionInstance,
    q: &BigInt,
    policy: &PrecisionPolicy,
) -> Result<(CReal, Truth), ReductionError> {
    let mut digits = policy.start_digits;
    loop {
        let bits = digits_to_bits(digits);
        let tau = inst.tau.eval(bits)?;
        let mu = inst.mu.eval(bits)?;
        match dp_epsilon(q, &tau, &mu, &inst.big_m) {
            Ok(eps) => match eps.sign_positive() {
                Truth::Unknown => {}
                decided => return Ok((eps, decided)),
            },
            // Interval too wide to even take ‖·‖: refine below.
            Err(RealError::IntervalTooWide(_)) => {}
            Err(e) => return Err(e.into()),
        }
        digits = digits.saturating_mul(2);
        if digits > policy.cap_digits {
            return Ok((CReal::zero(digits_to_bits(policy.start_digits)), Truth::Unknown));
        }
    }
}

/// `⌊ log(A·q/ε) / log B ⌋` with outward rounding: the interval quotient's
/// upper endpoint is floored, so the returned integer never undershoots
/// the criterion's true threshold.
fn exponent_bound(
    inst: &ReductionInstance,
    q: &BigInt,
    eps: &CReal,
    policy: &PrecisionPolicy,
) -> Result<BigInt, ReductionError> {
    let bits = digits_to_bits(policy.start_digits);
    let b = inst.b.eval(bits)?;
    if !b.gt(&CReal::one(bits)).is_true() {
        return Err(ReductionError::InvalidInstance {
            label: inst.label.clone(),
            reason: "B must exceed 1".to_string(),
        });
    }
    if !inst.a.sign_positive().is_true() {
        return Err(ReductionError::InvalidInstance {
            label: inst.label.clone(),
            reason: "A must be positive".to_string(),
        });
    }
    let ratio = inst.a.mul_bigint(q).div(eps)?.log()?.div(&b.log()?)?;
    Ok(ratio.hi().floor())
}

/// Outcome of a μ-family campaign.
#[derive(Debug)]
pub struct FamilyOutcome {
    pub label: String,
    pub members: Vec<ReductionOutcome>,
    /// The member ε with the smallest lower endpoint.
    pub min_epsilon: CReal,
    pub max_exponent_bound: BigInt,
    pub max_effective_bound: BigInt,
}

/// Runs one reduction per family member (shared τ, A, B, M; μ varies
/// with m). Every member's ε must certify positive; a non-positive member
/// fails the whole campaign identifying its m.
pub fn reduce_family(
    base: &ReductionInstance,
    mu_values: &[(usize, Expr)],
    table: &mut ConvergentTable,
    policy: &PrecisionPolicy,
) -> Result<FamilyOutcome, ReductionError> {
    let mut members = Vec::with_capacity(mu_values.len());
    let mut min_epsilon: Option<CReal> = None;
    let mut max_bound = BigInt::zero();
    let mut max_effective = BigInt::zero();
    for (m, mu) in mu_values {
        let inst = ReductionInstance {
            label: format!("{} m={m}", base.label),
            mu: mu.clone(),
            ..base.clone()
        };
        let outcome = dp_reduce(&inst, table, policy)?;
        min_epsilon = Some(match min_epsilon {
            None => outcome.epsilon.clone(),
            Some(cur) => {
                if outcome.epsilon.lo().cmp(cur.lo()) == Ordering::Less {
                    outcome.epsilon.clone()
                } else {
                    cur
                }
            }
        });
        max_bound = max_bound.max(outcome.exponent_bound.clone());
        max_effective = max_effective.max(outcome.effective_bound.clone());
        members.push(outcome);
    }
    Ok(FamilyOutcome {
        label: base.label.clone(),
        members,
        min_epsilon: min_epsilon.expect("family is non-empty"),
        max_exponent_bound: max_bound,
        max_effective_bound: max_effective,
    })
}

/// The shared τ of all four campaigns: `log α / log γ`.
pub fn campaign_tau() -> Expr {
    Expr::constant(Constant::C2)
}

/// The campaign constant `M = 3·10³¹` (it dominates `k < 4n < 2.8·10³¹`).
pub fn campaign_big_m() -> BigInt {
    BigInt::from(3) * BigInt::from(10u32).pow(31)
}

/// Converts a linear-form stage into the criterion's data `(τ, μ, A, B, M)`:
/// the `|e^Γ−1|` bound becomes a `|Γ|` bound via `|x| < 2|e^x−1|`, division
/// by `log γ` produces τ and μ, and A is the integer constant of the
/// replayed argument (17, 52, 3, 5). The m-indexed stages (Λ₂/Λ₄) need the
/// member index. The mirrored form replaces μ by −μ.
pub fn gamma_to_lemma_form(
    stage: &LinearFormStage,
    pair: &RecurrencePair,
    mirrored: bool,
    member_m: Option<usize>,
    digits: u32,
) -> Result<ReductionInstance, ReductionError> {
    let bits = digits_to_bits(digits);
    let log_gamma = Expr::constant(Constant::LogGamma);
    let sqrt5 = Expr::constant(Constant::Sqrt5);
    let two_sqrt2 = Expr::sqrt(Expr::int(8));
    let (a_int, mu_num, guard, label) = match stage.id {
        StageId::Lambda1 => {
            (17, Expr::div(Expr::int(8), sqrt5), BigInt::from(19), "Gamma1".to_string())
        }
        StageId::Lambda3 => {
            (3, Expr::div(two_sqrt2, Expr::int(5)), BigInt::from(19), "Gamma3".to_string())
        }
        StageId::Lambda2 => {
            let m = member_m.ok_or_else(|| ReductionError::InvalidInstance {
                label: "Gamma2".to_string(),
                reason: "family member index m is required".to_string(),
            })?;
            let pm = pair.v().term(m);
            (
                52,
                Expr::div(two_sqrt2, Expr::mul(sqrt5, Expr::bigint(pm))),
                BigInt::from(100),
                format!("Gamma2 m={m}"),
            )
        }
        StageId::Lambda4 => {
            let m = member_m.ok_or_else(|| ReductionError::InvalidInstance {
                label: "Gamma4".to_string(),
                reason: "family member index m is required".to_string(),
            })?;
            let fm = pair.v().term(m);
            (
                5,
                Expr::div(Expr::mul(two_sqrt2, Expr::bigint(fm)), sqrt5),
                BigInt::from(100),
                format!("Gamma4 m={m}"),
            )
        }
    };
    let mut mu = Expr::div(Expr::log(mu_num), log_gamma.clone());
    if mirrored {
        mu = Expr::neg(mu);
    }
    // |Γ| < 2·rhs·(decay)^{−·}, then division by log γ.
    let a_derived =
        Expr::div(Expr::mul(Expr::int(2), stage.rhs_coeff_expr.clone()), log_gamma).eval(bits)?;
    Ok(ReductionInstance {
        label: format!("{label}{}", if mirrored { " (mirrored)" } else { "" }),
        tau: campaign_tau(),
        mu,
        a: CReal::from_i64(a_int, bits),
        a_derived,
        b: stage.decay_base_expr.clone(),
        big_m: campaign_big_m(),
        pinned_index: None,
        guard_bound: Some(guard),
        mirrored,
    })
}

/// Builds the μ expressions of a family campaign for `m` in the given
/// range (Pell terms for Λ₂, Fibonacci terms for Λ₄).
pub fn family_mu_values(
    stage_id: StageId,
    pair: &RecurrencePair,
    m_range: std::ops::RangeInclusive<usize>,
    mirrored: bool,
) -> Vec<(usize, Expr)> {
    let log_gamma = Expr::constant(Constant::LogGamma);
    let sqrt5 = Expr::constant(Constant::Sqrt5);
    let two_sqrt2 = Expr::sqrt(Expr::int(8));
    m_range
        .map(|m| {
            let term = pair.v().term(m);
            let num = match stage_id {
                StageId::Lambda2 => {
                    Expr::div(two_sqrt2.clone(), Expr::mul(sqrt5.clone(), Expr::bigint(term)))
                }
                StageId::Lambda4 => {
                    Expr::div(Expr::mul(two_sqrt2.clone(), Expr::bigint(term)), sqrt5.clone())
                }
                _ => unreachable!("families exist only for the n-stages"),
            };
            let mut mu = Expr::div(Expr::log(num), log_gamma.clone());
            if mirrored {
                mu = Expr::neg(mu);
            }
            (m, mu)
        })
        .collect()
}
