//! Lower bounds for linear forms in logarithms and the absolute index
//! bounds they imply.
//!
//! For each equation two forms are built: Λ₁/Λ₃ bound the smaller index m
//! in terms of n, and Λ₂/Λ₄ (whose first parameter carries an m-dependent
//! height) then bound n outright. The lower-bound constant is
//!
//! ```text
//! 1.4 · 30^{l+3} · l^{4.5} · d² · (1 + log d) · (1 + log D) · A₁A₂⋯A_l
//! ```
//!
//! recomputed in certified arithmetic every run; the literature's rounded
//! values appear only in tests.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::realcore::{digits_to_bits, CReal, Expr, RealError, Truth};
use crate::sequences::{RecurrencePair, SequenceError};
use crate::Equation;

#[derive(Debug, Error)]
pub enum LinformError {
    #[error("stage {0} needs the certified height input from the first-stage m-bound")]
    MissingHeightInput(StageId),
    #[error("A-value for {which} does not dominate max(d·h, |log η|, 0.16)")]
    InvalidAValue { which: String },
    #[error("exponent-bound iteration failed to converge after {iterations} rounds")]
    NonConvergent { iterations: u32 },
    #[error("certified decision failed: {0}")]
    Undecidable(String),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// The four linear forms of the proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageId {
    /// FPP, bounds m: `(8/√5)·α^k·γ^{−n−m} − 1`.
    Lambda1,
    /// FPP, bounds n: `(2√2/(√5 P_m))·α^k·γ^{−n} − 1`.
    Lambda2,
    /// FFP, bounds m: `(5/(2√2))·γ^k·α^{−n−m} − 1`.
    Lambda3,
    /// FFP, bounds n: `(√5/(2√2 F_m))·γ^k·α^{−n} − 1`.
    Lambda4,
}

impl StageId {
    pub fn name(self) -> &'static str {
        match self {
            StageId::Lambda1 => "lambda1",
            StageId::Lambda2 => "lambda2",
            StageId::Lambda3 => "lambda3",
            StageId::Lambda4 => "lambda4",
        }
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which exponent the right-hand decay bound shrinks in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayVar {
    M,
    N,
}

/// Height bound for one ηⱼ: a number, or a certified multiple of
/// `(1 + log(s·n))` when the parameter depends on the first-stage bound.
#[derive(Clone, Debug)]
pub enum HeightBound {
    Fixed(CReal),
    NDependent { coeff: CReal, s: u32 },
}

/// The A-value fed to the lower bound, same two shapes. An `NDependent`
/// A evaluates to `coeff · (1 + log D)` at a concrete `D = s·n`.
#[derive(Clone, Debug)]
pub enum AValue {
    Fixed(CReal),
    NDependent { coeff: CReal, s: u32 },
}

/// One ηⱼ of a linear form, with its height and A-value data.
#[derive(Clone, Debug)]
pub struct AlgebraicParam {
    pub description: String,
    pub exponent: String,
    pub height_bound: HeightBound,
    pub log_abs: CReal,
    pub a_value: AValue,
}

impl AlgebraicParam {
    /// Builds a parameter whose A is exactly `d_L·h`: dominance over the
    /// height holds by construction (the same interval is scaled), and the
    /// strict conditions `A ≥ |log η|`, `A ≥ 0.16` are certified.
    fn from_height(
        description: &str,
        exponent: &str,
        height: CReal,
        log_abs: CReal,
        d_l: u32,
        bits: u32,
    ) -> Result<Self, LinformError> {
        let a = height.mul_i64(d_l as i64);
        let param = AlgebraicParam {
            description: description.to_string(),
            exponent: exponent.to_string(),
            height_bound: HeightBound::Fixed(height),
            log_abs,
            a_value: AValue::Fixed(a),
        };
        param.check_cross(bits)
    }

    /// Builds a parameter with an explicitly chosen A; all three dominance
    /// conditions are certified (they must hold strictly).
    fn with_explicit_a(
        description: &str,
        exponent: &str,
        height_bound: HeightBound,
        log_abs: CReal,
        a_value: AValue,
        d_l: u32,
        bits: u32,
    ) -> Result<Self, LinformError> {
        let dominates = match (&a_value, &height_bound) {
            (AValue::Fixed(a), HeightBound::Fixed(h)) => a.ge(&h.mul_i64(d_l as i64)).is_true(),
            (
                AValue::NDependent { coeff: ac, s: sa },
                HeightBound::NDependent { coeff: hc, s: sh },
            ) => {
                // Both scale with the same (1 + log(s·n)) ≥ 1 factor.
                sa == sh && ac.ge(&hc.mul_i64(d_l as i64)).is_true()
            }
            _ => false,
        };
        if !dominates {
            return Err(LinformError::InvalidAValue { which: description.to_string() });
        }
        let param = AlgebraicParam {
            description: description.to_string(),
            exponent: exponent.to_string(),
            height_bound,
            log_abs,
            a_value,
        };
        param.check_cross(bits)
    }

    /// Certifies `A ≥ |log η|` and `A ≥ 0.16`.
    fn check_cross(self, bits: u32) -> Result<Self, LinformError> {
        let min_a = CReal::from_ratio(&16.into(), &100.into(), bits).expect("exact rational");
        let a = match &self.a_value {
            AValue::Fixed(a) => a.clone(),
            // (1+log(s·n)) ≥ 1, so the coefficient is a lower bound for A.
            AValue::NDependent { coeff, .. } => coeff.clone(),
        };
        if a.ge(&self.log_abs.abs()).is_true() && a.ge(&min_a).is_true() {
            Ok(self)
        } else {
            Err(LinformError::InvalidAValue { which: self.description })
        }
    }
}

/// A fully populated linear-form instance Λᵢ.
#[derive(Clone, Debug)]
pub struct LinearFormStage {
    pub id: StageId,
    pub l: u32,
    pub d_l: u32,
    pub params: Vec<AlgebraicParam>,
    /// D = d_coeff · n.
    pub d_coeff: u32,
    /// |Λ| < rhs_coeff · decay_base^{−decay_var}.
    pub rhs_coeff: CReal,
    pub rhs_coeff_expr: Expr,
    pub decay_base_expr: Expr,
    pub decay_var: DecayVar,
    /// Power of `(1 + log(d_coeff·n))` in the final bound.
    pub log_power: u8,
}

/// `1.4 · 30^{l+3} · l^{4.5} · d² · (1+log d)` as a certified value.
fn matveev_prefactor(l: u32, d_l: u32, bits: u32) -> Result<CReal, RealError> {
    let c14 = CReal::from_ratio(&7.into(), &5.into(), bits)?;
    let thirty = CReal::from_i64(30, bits).pow_i64(l as i64 + 3)?;
    // l^4.5 = sqrt(l^9), exact integer under the root.
    let l_pow = CReal::from_bigint(&BigInt::from(l).pow(9), bits).sqrt()?;
    let d_sq = CReal::from_i64((d_l * d_l) as i64, bits);
    let one_log_d = CReal::one(bits).add(&CReal::from_i64(d_l as i64, bits).log()?);
    Ok(c14.mul(&thirty).mul(&l_pow).mul(&d_sq).mul(&one_log_d))
}

impl LinearFormStage {
    /// The constant C with `−log|Λ| < C · (1 + log(d_coeff·n))^log_power`:
    /// the prefactor times every A-coefficient.
    pub fn coefficient(&self) -> Result<CReal, LinformError> {
        let bits = self.rhs_coeff.prec();
        let mut c = matveev_prefactor(self.l, self.d_l, bits)?;
        for p in &self.params {
            c = match &p.a_value {
                AValue::Fixed(a) => c.mul(a),
                AValue::NDependent { coeff, .. } => c.mul(coeff),
            };
        }
        Ok(c)
    }
}

/// Certified magnitude of the lower bound: a value B with
/// `log|Λ| > −B`, evaluated at a concrete `D = max{|dⱼ|, 3}`. Monotone
/// nondecreasing in every Aⱼ and in D.
pub fn matveev_lower_bound(
    stage: &LinearFormStage,
    d_value: &BigInt,
) -> Result<CReal, LinformError> {
    debug_assert!(*d_value >= BigInt::from(3), "D = max(|d_j|, 3)");
    let bits = stage.rhs_coeff.prec();
    let one_log_d = CReal::one(bits).add(&CReal::from_bigint(d_value, bits).log()?);
    let mut b = matveev_prefactor(stage.l, stage.d_l, bits)?.mul(&one_log_d);
    for p in &stage.params {
        let a = match &p.a_value {
            AValue::Fixed(a) => a.clone(),
            AValue::NDependent { coeff, .. } => coeff.mul(&one_log_d),
        };
        b = b.mul(&a);
    }
    Ok(b)
}

fn fixed_param(
    description: &str,
    exponent: &str,
    height: Expr,
    log_abs: Expr,
    d_l: u32,
    bits: u32,
) -> Result<AlgebraicParam, LinformError> {
    AlgebraicParam::from_height(
        description,
        exponent,
        height.eval(bits)?,
        log_abs.eval(bits)?,
        d_l,
        bits,
    )
}

/// Builds one of the four stages. Λ₂ and Λ₄ require the certified
/// m-height input produced by [`stage1_m_bound`]: their η₁ involves P_m
/// or F_m, whose height is only bounded through the first stage.
pub fn build_stage(
    id: StageId,
    pair: &RecurrencePair,
    m_height: Option<&StageBound>,
    digits: u32,
) -> Result<LinearFormStage, LinformError> {
    let bits = digits_to_bits(digits);
    let d_l = 4;
    let log_u = pair.u().log_root_dom_expr();
    let log_v = pair.v().log_root_dom_expr();
    let sqrt_disc_u = Expr::sqrt(Expr::bigint(pair.u().discriminant().clone()));
    let sqrt_disc_v = Expr::sqrt(Expr::bigint(pair.v().discriminant().clone()));

    // The quadratic units: h(root) = (1/2)·log(root), so A = 2·log(root).
    let root_u_param = |exp: &str| {
        fixed_param(
            "dominant root of U",
            exp,
            Expr::div(log_u.clone(), Expr::int(2)),
            log_u.clone(),
            d_l,
            bits,
        )
    };
    let root_v_param = |exp: &str| {
        fixed_param(
            "dominant root of V",
            exp,
            Expr::div(log_v.clone(), Expr::int(2)),
            log_v.clone(),
            d_l,
            bits,
        )
    };

    match id {
        StageId::Lambda1 | StageId::Lambda3 => {
            // η₁ = disc_V/√disc_U (8/√5 for FPP, 5/(2√2) for FFP), a root
            // of disc_U·X² − disc_V²: h = log(disc_V), A = 4·h.
            let disc_v = pair.v().discriminant().clone();
            let eta1 = Expr::div(Expr::bigint(disc_v.clone()), sqrt_disc_u.clone());
            let h = Expr::log(Expr::bigint(disc_v.clone()));
            let eta1_desc = format!("{}/sqrt({})", disc_v, pair.u().discriminant());
            let p1 = fixed_param(&eta1_desc, "1", h, Expr::log(eta1), d_l, bits)?;
            let (s, rhs) = match id {
                // |Λ₁| < 16/(√5·γ^{2m}); D = 4n.
                StageId::Lambda1 => (4, Expr::div(Expr::int(16), sqrt_disc_u.clone())),
                // |Λ₃| < 6/α^{2m}; D = 3n.
                _ => (3, Expr::int(6)),
            };
            Ok(LinearFormStage {
                id,
                l: 3,
                d_l,
                params: vec![p1, root_u_param("k")?, root_v_param("-(m+n)")?],
                d_coeff: s,
                rhs_coeff: rhs.eval(bits)?,
                rhs_coeff_expr: rhs,
                decay_base_expr: Expr::pow(pair.v().root_dom_expr(), 2),
                decay_var: DecayVar::M,
                log_power: 1,
            })
        }
        StageId::Lambda2 | StageId::Lambda4 => {
            let mb = m_height.ok_or(LinformError::MissingHeightInput(id))?;
            // A₁ = a1_coeff·(1+log(s·n)) with the round coefficient of the
            // source chain (16·10¹³ / 12·10¹³), certified below to
            // dominate 4× the height coefficient.
            let (a1_coeff_int, s) = match id {
                StageId::Lambda2 => (BigInt::from(16u64) * BigInt::from(10u64).pow(13), 4u32),
                _ => (BigInt::from(12u64) * BigInt::from(10u64).pow(13), 3u32),
            };
            let a1_coeff = CReal::from_bigint(&a1_coeff_int, bits);
            let height_coeff = mb.coefficient.clone();
            let eta1_desc = match id {
                StageId::Lambda2 => "sqrt(5)·P_m/(2·sqrt(2))",
                _ => "2·sqrt(2)·F_m/sqrt(5)",
            };
            let p1 = AlgebraicParam::with_explicit_a(
                eta1_desc,
                "-1",
                HeightBound::NDependent { coeff: height_coeff, s },
                // |log η₁| at its smallest member (m = 1); the A-value
                // dominates every member through the height coefficient.
                Expr::log(Expr::div(sqrt_disc_u.clone(), sqrt_disc_v.clone()))
                    .eval(bits)?
                    .abs(),
                AValue::NDependent { coeff: a1_coeff, s },
                d_l,
                bits,
            )?;
            let rhs = match id {
                // |Λ₂| ≤ 36√2/(√5·γ^{2n}).
                StageId::Lambda2 => Expr::div(
                    Expr::mul(Expr::int(36), Expr::sqrt(Expr::int(2))),
                    Expr::sqrt(Expr::int(5)),
                ),
                // |Λ₄| < 4/α^{2n}.
                _ => Expr::int(4),
            };
            Ok(LinearFormStage {
                id,
                l: 3,
                d_l,
                params: vec![p1, root_u_param("k")?, root_v_param("-n")?],
                d_coeff: s,
                rhs_coeff: rhs.eval(bits)?,
                rhs_coeff_expr: rhs,
                decay_base_expr: Expr::pow(pair.v().root_dom_expr(), 2),
                decay_var: DecayVar::N,
                log_power: 2,
            })
        }
    }
}

/// One inequality of the bounding chain:
/// `linear_coeff·x − offset < coefficient·(1 + log(s··))^power`.
/// For the m-bounds the log argument is the other index n and
/// `resulting_bound` stays empty; the solved n-stages carry the smallest
/// N at which the inequality fails for all larger x.
#[derive(Clone, Debug)]
pub struct StageBound {
    pub label: String,
    pub coefficient: CReal,
    pub s: u32,
    pub power: u8,
    pub linear_coeff: CReal,
    pub offset: CReal,
    pub resulting_bound: Option<BigInt>,
}

/// First-stage output: a certified coefficient C with
/// `m·log(dom_V) [+1 for FFP] < C·(1 + log(s·n))`, feeding A₁ of the
/// second linear form.
pub fn stage1_m_bound(equation: Equation, digits: u32) -> Result<StageBound, LinformError> {
    let pair = RecurrencePair::for_equation(equation);
    stage1_m_bound_for(&pair, equation, digits)
}

pub fn stage1_m_bound_for(
    pair: &RecurrencePair,
    equation: Equation,
    digits: u32,
) -> Result<StageBound, LinformError> {
    let bits = digits_to_bits(digits);
    let (id, s) = match equation {
        Equation::Fpp => (StageId::Lambda1, 4u32),
        Equation::Ffp => (StageId::Lambda3, 3u32),
    };
    let stage = build_stage(id, pair, None, digits)?;
    let k = stage.coefficient()?;
    let log_v = pair.v().log_root_dom_expr().eval(bits)?;
    let one_log_s = CReal::one(bits).add(&CReal::from_i64(s as i64, bits).log()?);
    // From 2m·log(dom_V) − log(rhs) < K·(1+log(s·n)) and (1+log(s·n)) ≥
    // (1+log s): m·log(dom_V) < [(K + log(rhs)/(1+log s))/2]·(1+log(s·n)).
    let log_rhs = stage.rhs_coeff.log()?;
    let folded = k.add(&log_rhs.div(&one_log_s)?);
    let half = CReal::from_ratio(&1.into(), &2.into(), bits)?;
    let mut coefficient = folded.mul(&half);
    let mut offset = CReal::zero(bits);
    if equation == Equation::Ffp {
        // The height chain needs m·log α + 1, so absorb the extra 1 too.
        coefficient = coefficient.add(&CReal::one(bits).div(&one_log_s)?);
        offset = CReal::from_i64(-1, bits);
    }
    let label = match equation {
        Equation::Fpp => "m·log(gamma) < C·(1+log(4n))".to_string(),
        Equation::Ffp => "m·log(alpha) + 1 < C·(1+log(3n))".to_string(),
    };
    Ok(StageBound {
        label,
        coefficient,
        s,
        power: 1,
        linear_coeff: log_v,
        offset,
        resulting_bound: None,
    })
}

/// Truth of `linear·x − offset < c·(1 + log(s·x))^p` at integer `x ≥ 1`.
pub fn exponent_inequality_holds(
    linear: &CReal,
    offset: &CReal,
    c: &CReal,
    s: u32,
    p: u8,
    x: &BigInt,
) -> Result<Truth, LinformError> {
    let bits = linear.prec().max(c.prec());
    let xv = CReal::from_bigint(x, bits);
    let lhs = linear.mul(&xv).sub(offset);
    let rhs = if p == 0 {
        c.clone()
    } else {
        let one_log = CReal::one(bits).add(&xv.mul_i64(s as i64).log()?);
        c.mul(&one_log.pow_i64(p as i64)?)
    };
    Ok(lhs.lt(&rhs))
}

/// Smallest certified N such that `linear·x − offset < c·(1+log(s·x))^p`
/// fails for every `x ≥ N`: the inequality certifiably fails at N, still
/// holds at N−1, and the gap is certifiably increasing beyond N.
pub fn solve_exponent_bound(
    linear: &CReal,
    offset: &CReal,
    c: &CReal,
    s: u32,
    p: u8,
) -> Result<BigInt, LinformError> {
    let bits = linear.prec().max(c.prec());
    if p == 0 {
        // Closed form: fails for every x ≥ (c + offset)/linear.
        let ratio = c.add(offset).div(linear)?;
        let n = -ratio.hi().neg().floor(); // ceil
        return Ok(n);
    }
    // Fixed-point iteration x ← (c(1+log(s·x))^p + offset)/linear from
    // x₀ = max(ceil(c), 3); the map contracts near the last crossing since
    // its derivative c·p·(1+log(sx))^{p−1}/(linear·x) vanishes as x grows.
    let mut x: BigInt = (-c.hi().neg().floor()).max(BigInt::from(3));
    let mut converged = false;
    for _ in 0..200 {
        let xv = CReal::from_bigint(&x, bits);
        let one_log = CReal::one(bits).add(&xv.mul_i64(s as i64).log()?);
        let g = c.mul(&one_log.pow_i64(p as i64)?).add(offset).div(linear)?;
        let next: BigInt = g.hi().floor() + BigInt::from(1);
        let step: BigInt = (&next - &x).abs();
        x = next;
        if step <= BigInt::from(1) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinformError::NonConvergent { iterations: 200 });
    }
    // Walk down to the smallest N that certifiably fails.
    let mut n = &x + BigInt::from(2);
    let one = BigInt::from(1);
    for _ in 0..10_000 {
        let prev = &n - &one;
        match exponent_inequality_holds(linear, offset, c, s, p, &prev)? {
            Truth::False => n = prev,
            Truth::True => break,
            Truth::Unknown => {
                return Err(LinformError::Undecidable(format!("inequality sign at x = {prev}")))
            }
        }
    }
    // Certify failure at N itself ...
    match exponent_inequality_holds(linear, offset, c, s, p, &n)? {
        Truth::False => {}
        _ => return Err(LinformError::Undecidable(format!("failure at N = {n}"))),
    }
    // ... and that the gap keeps growing: linear > c·p·(1+log(sN))^{p−1}/N,
    // the right side being decreasing in x.
    let nv = CReal::from_bigint(&n, bits);
    let one_log = CReal::one(bits).add(&nv.mul_i64(s as i64).log()?);
    let slope = c.mul_i64(p as i64).mul(&one_log.pow_i64(p as i64 - 1)?).div(&nv)?;
    if !linear.gt(&slope).is_true() {
        return Err(LinformError::Undecidable(format!(
            "monotonicity of the bound gap at N = {n}"
        )));
    }
    Ok(n)
}

/// Everything stage 1 produces for one equation.
#[derive(Debug)]
pub struct Stage1Report {
    pub equation: Equation,
    pub first_stage: LinearFormStage,
    /// K with −log|Λ_first| < K·(1+log(s·n)).
    pub first_coefficient: CReal,
    pub m_bound: StageBound,
    pub second_stage: LinearFormStage,
    /// C with −log|Λ_second| < C·(1+log(s·n))².
    pub second_coefficient: CReal,
    pub n_bound: StageBound,
}

impl Stage1Report {
    pub fn absolute_n_bound(&self) -> &BigInt {
        self.n_bound.resulting_bound.as_ref().expect("n-stage is always solved")
    }
}

/// Runs the full stage-1 chain for one equation:
/// Λ₁ (or Λ₃) → m-bound → Λ₂ (or Λ₄) → certified absolute n-bound.
pub fn stage1_report(equation: Equation, digits: u32) -> Result<Stage1Report, LinformError> {
    let pair = RecurrencePair::for_equation(equation);
    let bits = digits_to_bits(digits);
    let (first_id, second_id, s) = match equation {
        Equation::Fpp => (StageId::Lambda1, StageId::Lambda2, 4u32),
        Equation::Ffp => (StageId::Lambda3, StageId::Lambda4, 3u32),
    };
    let first_stage = build_stage(first_id, &pair, None, digits)?;
    let first_coefficient = first_stage.coefficient()?;
    let m_bound = stage1_m_bound_for(&pair, equation, digits)?;
    let second_stage = build_stage(second_id, &pair, Some(&m_bound), digits)?;
    let second_coefficient = second_stage.coefficient()?;
    // 2n·log(dom_V) − log(rhs) < C·(1+log(s·n))², solved for n.
    let linear = pair.v().log_root_dom_expr().eval(bits)?.mul_i64(2);
    let offset = second_stage.rhs_coeff.log()?;
    let n = solve_exponent_bound(&linear, &offset, &second_coefficient, s, 2)?;
    let n_bound = StageBound {
        label: format!("2n·log(dom_V) − log(rhs) < C·(1+log({s}n))²"),
        coefficient: second_coefficient.clone(),
        s,
        power: 2,
        linear_coeff: linear,
        offset,
        resulting_bound: Some(n),
    };
    Ok(Stage1Report {
        equation,
        first_stage,
        first_coefficient,
        m_bound,
        second_stage,
        second_coefficient,
        n_bound,
    })
}

/// The end-to-end stage-1 absolute bound: every solution with m ≤ n has
/// `n < absolute_bound(equation)`.
pub fn absolute_bound(equation: Equation, digits: u32) -> Result<BigInt, LinformError> {
    Ok(stage1_report(equation, digits)?.absolute_n_bound().clone())
}
