//! Binary recurrence engine: exact big-integer terms, Binet data, growth
//! inequalities and index-range estimates for Fibonacci, Pell, and
//! configurable pairs satisfying the same structural conditions.

use std::sync::RwLock;

use num_bigint::BigInt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::realcore::{digits_to_bits, CReal, Expr, RealError, Truth};
use crate::Equation;

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("discriminant a^2+4b = {0} must be positive (real roots)")]
    NonPositiveDiscriminant(BigInt),
    #[error("discriminant a^2+4b = {0} is a perfect square (rational roots)")]
    SquareDiscriminant(BigInt),
    #[error("coefficient b must be 1 or -1 so the root product is a unit, got {0}")]
    RootProductNotUnit(BigInt),
    #[error("coefficient a must be positive, got {0}")]
    NonPositiveA(BigInt),
    #[error("initial terms must not both be zero")]
    ZeroInitialTerms,
    #[error("the two recurrences generate the same quadratic field (squarefree part {0})")]
    SameQuadraticField(BigInt),
    #[error("discriminant {0} too large to factor for the field check")]
    DiscriminantTooLarge(BigInt),
    #[error("certified check undecidable at index {index}: {source}")]
    Undecidable { index: usize, source: RealError },
    #[error(transparent)]
    Real(#[from] RealError),
}

/// A sequence `u_{n+2} = a·u_{n+1} + b·u_n` with real irrational
/// characteristic roots whose product is ±1.
#[derive(Debug)]
pub struct BinaryRecurrence {
    name: String,
    a: BigInt,
    b: BigInt,
    u0: BigInt,
    u1: BigInt,
    disc: BigInt,
    terms: RwLock<Vec<BigInt>>,
}

impl BinaryRecurrence {
    /// F_0 = 0, F_1 = 1, F_{n+2} = F_{n+1} + F_n.
    pub fn fibonacci() -> Self {
        BinaryRecurrence::new("fibonacci", 1.into(), 1.into(), 0.into(), 1.into())
            .expect("fibonacci data is valid")
    }

    /// P_0 = 0, P_1 = 1, P_{n+2} = 2·P_{n+1} + P_n.
    pub fn pell() -> Self {
        BinaryRecurrence::new("pell", 2.into(), 1.into(), 0.into(), 1.into())
            .expect("pell data is valid")
    }

    /// Validates and constructs a configurable recurrence. Rejected inputs
    /// never produce a sequence object, so no later stage can emit an
    /// unsound certificate for them.
    pub fn new(
        name: &str,
        a: BigInt,
        b: BigInt,
        u0: BigInt,
        u1: BigInt,
    ) -> Result<Self, SequenceError> {
        if !a.is_positive() {
            return Err(SequenceError::NonPositiveA(a));
        }
        if b.abs() != BigInt::from(1) {
            return Err(SequenceError::RootProductNotUnit(b));
        }
        if u0.is_zero() && u1.is_zero() {
            return Err(SequenceError::ZeroInitialTerms);
        }
        let disc: BigInt = &a * &a + BigInt::from(4) * &b;
        if !disc.is_positive() {
            return Err(SequenceError::NonPositiveDiscriminant(disc));
        }
        let root = disc.sqrt();
        if &root * &root == disc {
            return Err(SequenceError::SquareDiscriminant(disc));
        }
        let terms = RwLock::new(vec![u0.clone(), u1.clone()]);
        Ok(BinaryRecurrence { name: name.to_string(), a, b, u0, u1, disc, terms })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeff_a(&self) -> &BigInt {
        &self.a
    }

    pub fn coeff_b(&self) -> &BigInt {
        &self.b
    }

    pub fn initial_terms(&self) -> (&BigInt, &BigInt) {
        (&self.u0, &self.u1)
    }

    /// Discriminant `a² + 4b` of the characteristic polynomial.
    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Exact n-th term; the memo table grows to the largest index seen.
    pub fn term(&self, n: usize) -> BigInt {
        {
            let t = self.terms.read().unwrap();
            if n < t.len() {
                return t[n].clone();
            }
        }
        let mut t = self.terms.write().unwrap();
        while t.len() <= n {
            let len = t.len();
            let next = &self.a * &t[len - 1] + &self.b * &t[len - 2];
            t.push(next);
        }
        t[n].clone()
    }

    /// Exact terms `u_0 … u_n` as a snapshot.
    pub fn terms_upto(&self, n: usize) -> Vec<BigInt> {
        self.term(n);
        self.terms.read().unwrap()[..=n].to_vec()
    }

    /// Dominant characteristic root `(a + √disc)/2`.
    pub fn root_dom_expr(&self) -> Expr {
        Expr::div(
            Expr::add(Expr::bigint(self.a.clone()), Expr::sqrt(Expr::bigint(self.disc.clone()))),
            Expr::int(2),
        )
    }

    /// Subdominant root `(a − √disc)/2`.
    pub fn root_sub_expr(&self) -> Expr {
        Expr::div(
            Expr::sub(Expr::bigint(self.a.clone()), Expr::sqrt(Expr::bigint(self.disc.clone()))),
            Expr::int(2),
        )
    }

    /// Binet scale `1/(root_dom − root_sub) = 1/√disc`.
    pub fn binet_scale_expr(&self) -> Expr {
        Expr::div(Expr::int(1), Expr::sqrt(Expr::bigint(self.disc.clone())))
    }

    /// `log` of the dominant root.
    pub fn log_root_dom_expr(&self) -> Expr {
        Expr::log(self.root_dom_expr())
    }

    /// Certifies `u_n = round(scale·(dom^n − sub^n))` by checking the
    /// Binet residual stays below 1/2 for every `n ≤ n_max`.
    pub fn binet_agreement(&self, n_max: usize, digits: u32) -> Result<(), SequenceError> {
        let bits = digits_to_bits(digits);
        let dom = self.root_dom_expr().eval(bits)?;
        let sub = self.root_sub_expr().eval(bits)?;
        let scale = self.binet_scale_expr().eval(bits)?;
        let half = CReal::from_ratio(&1.into(), &2.into(), bits)?;
        let mut dom_pow = CReal::one(bits);
        let mut sub_pow = CReal::one(bits);
        for n in 0..=n_max {
            let binet = scale.mul(&dom_pow.sub(&sub_pow));
            let residual = binet.sub(&CReal::from_bigint(&self.term(n), bits)).abs();
            match residual.lt(&half) {
                Truth::True => {}
                Truth::False => {
                    return Err(SequenceError::Undecidable {
                        index: n,
                        source: RealError::IntervalTooWide("Binet residual >= 1/2".into()),
                    })
                }
                Truth::Unknown => {
                    return Err(SequenceError::Undecidable {
                        index: n,
                        source: RealError::Undecidable("Binet residual vs 1/2".into()),
                    })
                }
            }
            dom_pow = dom_pow.mul(&dom);
            sub_pow = sub_pow.mul(&sub);
        }
        Ok(())
    }

    /// Certifies `dom^{n−2} ≤ u_n ≤ dom^{n−1}` for `1 ≤ n ≤ n_max`,
    /// returning any violating indices. Expected empty for n ≥ 1; the
    /// bounds genuinely fail at n = 0 where u_0 = 0 < dom^{−2}.
    pub fn check_growth_bounds(&self, n_max: usize) -> Result<GrowthReport, SequenceError> {
        let mut digits = 64;
        'retry: loop {
            let bits = digits_to_bits(digits);
            let dom = self.root_dom_expr().eval(bits)?;
            let mut violations = Vec::new();
            for n in 1..=n_max {
                let u = CReal::from_bigint(&self.term(n), bits);
                // Powers are taken fresh so that exponent 0 is the exact
                // interval [1,1]; the bounds are equalities there (u_1 = 1
                // meets dom^0) and drifted endpoints would never decide.
                let low_pow = dom.pow_i64(n as i64 - 2)?;
                let high_pow = dom.pow_i64(n as i64 - 1)?;
                match (low_pow.le(&u), u.le(&high_pow)) {
                    (Truth::Unknown, _) | (_, Truth::Unknown) => {
                        digits *= 2;
                        if digits > 4096 {
                            return Err(SequenceError::Undecidable {
                                index: n,
                                source: RealError::Undecidable("growth bound".into()),
                            });
                        }
                        continue 'retry;
                    }
                    (lo, hi) => {
                        if !lo.is_true() || !hi.is_true() {
                            violations.push(n);
                        }
                    }
                }
            }
            return Ok(GrowthReport { n_max, violations });
        }
    }
}

/// Outcome of a growth-bound certification sweep.
#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub n_max: usize,
    pub violations: Vec<usize>,
}

impl GrowthReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Squarefree part of a positive integer by trial division; recurrence
/// discriminants are small, so this is cheap.
fn squarefree_part(n: &BigInt) -> Result<BigInt, SequenceError> {
    let limit = BigInt::from(u64::MAX);
    if n > &limit {
        return Err(SequenceError::DiscriminantTooLarge(n.clone()));
    }
    let mut v: u64 = n.try_into().expect("checked against u64::MAX");
    let mut core: u64 = 1;
    let mut p: u64 = 2;
    while p * p <= v {
        let mut count = 0;
        while v.is_multiple_of(p) {
            v /= p;
            count += 1;
        }
        if count % 2 == 1 {
            core *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok(BigInt::from(core * v))
}

/// The pair (U, V) of recurrences appearing in `U_k = V_m · V_n`.
#[derive(Debug)]
pub struct RecurrencePair {
    u: BinaryRecurrence,
    v: BinaryRecurrence,
}

impl RecurrencePair {
    /// Requires the two quadratic fields to be distinct: the squarefree
    /// parts of the discriminants must differ.
    pub fn new(u: BinaryRecurrence, v: BinaryRecurrence) -> Result<Self, SequenceError> {
        let su = squarefree_part(u.discriminant())?;
        let sv = squarefree_part(v.discriminant())?;
        if su == sv {
            return Err(SequenceError::SameQuadraticField(su));
        }
        Ok(RecurrencePair { u, v })
    }

    /// `F_k = P_m·P_n`: U = Fibonacci, V = Pell.
    pub fn fpp() -> Self {
        RecurrencePair::new(BinaryRecurrence::fibonacci(), BinaryRecurrence::pell())
            .expect("fields Q(sqrt5) and Q(sqrt2) are distinct")
    }

    /// `P_k = F_m·F_n`: U = Pell, V = Fibonacci.
    pub fn ffp() -> Self {
        RecurrencePair::new(BinaryRecurrence::pell(), BinaryRecurrence::fibonacci())
            .expect("fields Q(sqrt2) and Q(sqrt5) are distinct")
    }

    pub fn for_equation(eq: Equation) -> Self {
        match eq {
            Equation::Fpp => RecurrencePair::fpp(),
            Equation::Ffp => RecurrencePair::ffp(),
        }
    }

    pub fn u(&self) -> &BinaryRecurrence {
        &self.u
    }

    pub fn v(&self) -> &BinaryRecurrence {
        &self.v
    }

    /// `c = log(dom_V)/log(dom_U)`: c1 for Fibonacci/Pell, c2 for
    /// Pell/Fibonacci.
    pub fn c_ratio_expr(&self) -> Expr {
        Expr::div(self.v.log_root_dom_expr(), self.u.log_root_dom_expr())
    }

    /// Integer bracket `[k_lo, k_hi]` containing every k with
    /// `U_k = V_m·V_n`, from `1 + c(m+n−4) ≤ k ≤ 2 + c(m+n−2)` with
    /// outward rounding on c.
    pub fn k_range(
        &self,
        m: usize,
        n: usize,
        digits: u32,
    ) -> Result<(BigInt, BigInt), SequenceError> {
        let bits = digits_to_bits(digits);
        let c = self.c_ratio_expr().eval(bits)?;
        let s = m as i64 + n as i64;
        let low = CReal::one(bits).add(&c.mul_i64(s - 4));
        let high = CReal::from_i64(2, bits).add(&c.mul_i64(s - 2));
        // ceil(low.lo) and floor(high.hi): no admissible k is excluded.
        let k_lo = -low.lo().neg().floor();
        let k_hi = high.hi().floor();
        Ok((k_lo, k_hi))
    }

    /// Smallest integer multiplier `t ≥ 3` with a certificate that
    /// `k < t·n` for every admissible `(k, m, n)` with `m ≤ n`: from
    /// `k ≤ 2 + c(2n−2)` it suffices that `t > 2` and `t > 2c`.
    pub fn coarse_k_multiplier(&self, digits: u32) -> Result<u32, SequenceError> {
        let bits = digits_to_bits(digits);
        let c = self.c_ratio_expr().eval(bits)?;
        for t in 3u32..=16 {
            let tv = CReal::from_i64(t as i64, bits);
            if c.mul_i64(2).lt(&tv).is_true() {
                return Ok(t);
            }
        }
        Err(SequenceError::Real(RealError::Undecidable(
            "no coarse k-multiplier up to 16".into(),
        )))
    }
}

/// Certified upper bound for the logarithmic height of
/// `η₁ = √disc_U · V_m / √disc_V`, the algebraic number carried by the
/// second linear form, via `h(η₁) ≤ log(V_m · √disc_U)`.
///
/// For `F_k = P_mP_n` this is `log(P_m√5) < m log γ`; for `P_k = F_mF_n`
/// it is `log(F_m·2√2) < m log α + 1`.
pub fn eta1_height_bound(
    pair: &RecurrencePair,
    equation: Equation,
    m: usize,
    digits: u32,
) -> Result<CReal, SequenceError> {
    debug_assert_eq!(
        matches!(equation, Equation::Fpp),
        pair.u().name() == "fibonacci" || pair.v().name() == "pell",
    );
    let bits = digits_to_bits(digits);
    let vm = pair.v().term(m);
    let bound = Expr::log(Expr::mul(
        Expr::bigint(vm),
        Expr::sqrt(Expr::bigint(pair.u().discriminant().clone())),
    ));
    Ok(bound.eval(bits)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms_match_known_lists() {
        let fib = BinaryRecurrence::fibonacci();
        let want: [i64; 13] = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(fib.term(n), BigInt::from(*w), "F_{n}");
        }
        let pell = BinaryRecurrence::pell();
        let want: [i64; 10] = [0, 1, 2, 5, 12, 29, 70, 169, 408, 985];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(pell.term(n), BigInt::from(*w), "P_{n}");
        }
        assert_eq!(fib.term(0), *fib.initial_terms().0);
    }

    #[test]
    fn recurrence_identity_holds_exactly() {
        for rec in [BinaryRecurrence::fibonacci(), BinaryRecurrence::pell()] {
            let t = rec.terms_upto(1000);
            for n in 0..=998 {
                assert_eq!(t[n + 2], rec.coeff_a() * &t[n + 1] + rec.coeff_b() * &t[n]);
            }
        }
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert!(matches!(
            BinaryRecurrence::new("x", 1.into(), 2.into(), 0.into(), 1.into()),
            Err(SequenceError::RootProductNotUnit(_))
        ));
        assert!(matches!(
            BinaryRecurrence::new("x", 2.into(), (-1).into(), 0.into(), 1.into()),
            Err(SequenceError::NonPositiveDiscriminant(_))
        ));
        assert!(matches!(
            BinaryRecurrence::new("x", 1.into(), 1.into(), 0.into(), 0.into()),
            Err(SequenceError::ZeroInitialTerms)
        ));
        assert!(matches!(
            BinaryRecurrence::new("x", 0.into(), 1.into(), 0.into(), 1.into()),
            Err(SequenceError::NonPositiveA(_))
        ));
    }

    #[test]
    fn pair_with_same_field_is_rejected() {
        // a=1,b=1 and a=4,b=1 both generate Q(√5): discriminants 5 and 20.
        let u = BinaryRecurrence::new("u", 1.into(), 1.into(), 0.into(), 1.into()).unwrap();
        let v = BinaryRecurrence::new("v", 4.into(), 1.into(), 0.into(), 1.into()).unwrap();
        assert!(matches!(RecurrencePair::new(u, v), Err(SequenceError::SameQuadraticField(_))));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&5.into()).unwrap(), BigInt::from(5));
        assert_eq!(squarefree_part(&8.into()).unwrap(), BigInt::from(2));
        assert_eq!(squarefree_part(&20.into()).unwrap(), BigInt::from(5));
        assert_eq!(squarefree_part(&1.into()).unwrap(), BigInt::from(1));
    }

    #[test]
    fn binet_agreement_small() {
        BinaryRecurrence::fibonacci().binet_agreement(100, 64).unwrap();
        BinaryRecurrence::pell().binet_agreement(100, 64).unwrap();
    }

    #[test]
    fn growth_bounds_hold_from_one() {
        let report = BinaryRecurrence::fibonacci().check_growth_bounds(120).unwrap();
        assert!(report.all_hold(), "violations: {:?}", report.violations);
        let report = BinaryRecurrence::pell().check_growth_bounds(120).unwrap();
        assert!(report.all_hold());
    }

    #[test]
    fn growth_lower_bound_genuinely_fails_at_zero() {
        let fib = BinaryRecurrence::fibonacci();
        let bits = digits_to_bits(48);
        let dom = fib.root_dom_expr().eval(bits).unwrap();
        let low = dom.pow_i64(-2).unwrap();
        let u0 = CReal::from_bigint(&fib.term(0), bits);
        assert!(u0.lt(&low).is_true());
    }

    #[test]
    fn k_range_contains_known_solutions() {
        let pair = RecurrencePair::fpp();
        // F_5 = 5 = P_1·P_3
        let (lo, hi) = pair.k_range(1, 3, 48).unwrap();
        assert!(lo <= 5.into() && BigInt::from(5) <= hi, "[{lo}, {hi}]");
        // F_12 = 144 = P_4²
        let (lo, hi) = pair.k_range(4, 4, 48).unwrap();
        assert!(lo <= 12.into() && BigInt::from(12) <= hi, "[{lo}, {hi}]");
    }

    #[test]
    fn coarse_multipliers_match_growth_ratio() {
        assert_eq!(RecurrencePair::fpp().coarse_k_multiplier(48).unwrap(), 4);
        assert_eq!(RecurrencePair::ffp().coarse_k_multiplier(48).unwrap(), 3);
    }

    #[test]
    fn eta1_height_bounds() {
        let fpp = RecurrencePair::fpp();
        let bits = digits_to_bits(48);
        let log_gamma = fpp.v().log_root_dom_expr().eval(bits).unwrap();
        // m = 1: bound is log √5 <= log γ
        let h1 = eta1_height_bound(&fpp, Equation::Fpp, 1, 48).unwrap();
        assert!(h1.le(&log_gamma).is_true());
        // m = 2: bound <= 2 log γ ...
        let h2 = eta1_height_bound(&fpp, Equation::Fpp, 2, 48).unwrap();
        assert!(h2.le(&log_gamma.mul_i64(2)).is_true());
        // ... and the exact height of η₁ = √(5/2) (root of 2X²−5, both
        // conjugates above 1 in modulus) is (1/2)·log 5, which is smaller.
        let exact_h = Expr::div(Expr::log(Expr::int(5)), Expr::int(2)).eval(bits).unwrap();
        assert!(exact_h.le(&h2).is_true());

        let ffp = RecurrencePair::ffp();
        let log_alpha = ffp.v().log_root_dom_expr().eval(bits).unwrap();
        // m = 3: bound <= 3 log α + 1
        let h3 = eta1_height_bound(&ffp, Equation::Ffp, 3, 48).unwrap();
        let cap = log_alpha.mul_i64(3).add(&CReal::one(bits));
        assert!(h3.le(&cap).is_true());
    }
}
