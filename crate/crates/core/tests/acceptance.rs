//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `-- --nocapture` to see them on success).
//!
//! Two checks pin values printed in the replayed argument that exact
//! certified computation refutes; they fail deliberately, with the
//! witness in the message, rather than asserting what the arithmetic
//! disproves:
//!   - criterion 5c: the Γ₂-family minimum ε is 1.9199…·10⁻³, not > 0.019
//!     (0.019 would even imply n ≤ 52, contradicting the stated n ≤ 53);
//!   - criterion 6a: the FPP solution k-set is {1,2,3,5,12} — the triple
//!     (k,m,n) = (3,1,2) with F₃ = 2 = P₁·P₂ is a genuine solution.

use std::sync::OnceLock;

use num_bigint::BigInt;

use fibpell::linforms::{self, exponent_inequality_holds, StageId};
use fibpell::pipeline::{self, VerificationRun, VerifyOptions};
use fibpell::realcore::{digits_to_bits, make_constant, CReal, Constant, Truth};
use fibpell::sequences::RecurrencePair;
use fibpell::Equation;

mod common;

struct Shared {
    fpp: VerificationRun,
    ffp: VerificationRun,
    fpp_json: String,
    ffp_json: String,
    fpp_json_replay: String,
    ffp_json_replay: String,
}

fn shared() -> &'static Shared {
    static SHARED: OnceLock<Shared> = OnceLock::new();
    SHARED.get_or_init(|| {
        let options = VerifyOptions::default();
        let fpp = pipeline::verification_run(Equation::Fpp, &options).expect("FPP run");
        let ffp = pipeline::verification_run(Equation::Ffp, &options).expect("FFP run");
        let fpp_json = pipeline::certificate_for(&fpp).to_json();
        let ffp_json = pipeline::certificate_for(&ffp).to_json();
        // Full second runs for the byte-identity criterion.
        let fpp_json_replay = pipeline::verify_theorem(Equation::Fpp, &options)
            .expect("FPP replay")
            .to_json();
        let ffp_json_replay = pipeline::verify_theorem(Equation::Ffp, &options)
            .expect("FFP replay")
            .to_json();
        Shared { fpp, ffp, fpp_json, ffp_json, fpp_json_replay, ffp_json_replay }
    })
}

fn ratio(num: i64, den: i64) -> CReal {
    CReal::from_ratio(&BigInt::from(num), &BigInt::from(den), digits_to_bits(64)).unwrap()
}

/// x·10^e as an exact interval.
fn sci(x: i64, e: u32) -> CReal {
    CReal::from_bigint(&(BigInt::from(x) * BigInt::from(10u32).pow(e)), digits_to_bits(64))
}

fn report(criterion: &str, ok: bool, detail: &str) {
    println!("criterion {criterion}: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_golden_constants() {
    let c1 = make_constant(Constant::C1, 50).unwrap();
    let c1_ok = ratio(183157, 100000).le(&c1).is_true() && c1.le(&ratio(183158, 100000)).is_true();
    let c2 = make_constant(Constant::C2, 50).unwrap();
    let c2_ok = ratio(545979, 1000000).le(&c2).is_true() && c2.le(&ratio(545980, 1000000)).is_true();
    report(
        "1 (golden constants)",
        c1_ok && c2_ok,
        &format!("c1 = {}…, c2 = {}…", c1.approx_decimal(6), c2.approx_decimal(6)),
    );
}

#[test]
fn criterion_2_matveev_coefficients() {
    let k1 = linforms::build_stage(StageId::Lambda1, &RecurrencePair::fpp(), None, 64)
        .unwrap()
        .coefficient()
        .unwrap();
    let k3 = linforms::build_stage(StageId::Lambda3, &RecurrencePair::ffp(), None, 64)
        .unwrap()
        .coefficient()
        .unwrap();
    // K1 <= 7.8e13 and within 1% of 7.79e13 (exact-rational thresholds);
    // K3 <= 5.98e13. All comparisons certified.
    let k1_cap = k1.le(&sci(78, 12)).is_true();
    let k1_lo = k1.ge(&sci(7_712_100, 7)).is_true(); // 0.99 · 7.79e13
    let k1_hi = k1.le(&sci(7_867_900, 7)).is_true(); // 1.01 · 7.79e13
    let k3_cap = k3.le(&sci(598, 11)).is_true();
    report(
        "2 (Matveev coefficients)",
        k1_cap && k1_lo && k1_hi && k3_cap,
        &format!("K1 = {}, K3 = {}", k1.approx_decimal(6), k3.approx_decimal(6)),
    );
}

#[test]
fn criterion_3_absolute_bounds() {
    let s = shared();
    let fpp_n = s.fpp.stage1.absolute_n_bound();
    let ffp_n = s.ffp.stage1.absolute_n_bound();
    let fpp_cap = BigInt::from(5) * BigInt::from(10u32).pow(30);
    let ffp_cap = BigInt::from(7) * BigInt::from(10u32).pow(30);
    let mut ok = *fpp_n <= fpp_cap && *ffp_n <= ffp_cap;
    // Certified failure at N (and validity at N−1) for both bounds.
    for run in [&s.fpp, &s.ffp] {
        let nb = &run.stage1.n_bound;
        let n = run.stage1.absolute_n_bound();
        let fails = exponent_inequality_holds(
            &nb.linear_coeff,
            &nb.offset,
            &nb.coefficient,
            nb.s,
            nb.power,
            n,
        )
        .unwrap();
        let holds = exponent_inequality_holds(
            &nb.linear_coeff,
            &nb.offset,
            &nb.coefficient,
            nb.s,
            nb.power,
            &(n - 1),
        )
        .unwrap();
        ok = ok && fails == Truth::False && holds == Truth::True;
    }
    report(
        "3 (absolute bounds)",
        ok,
        &format!("FPP n < {fpp_n} <= 5e30, FFP n < {ffp_n} <= 7e30, both certified at N and N−1"),
    );
}

#[test]
fn criterion_4_replay_convergent() {
    let s = shared();
    let p74: BigInt = "2037068391552562960855777461929676271".parse().unwrap();
    let q74: BigInt = "3731035235978315437343082205475618926".parse().unwrap();
    let conv = &s.fpp.table.convergents()[pipeline::REPLAY_CONVERGENT_INDEX];
    let six_m = BigInt::from(6) * BigInt::from(3) * BigInt::from(10u32).pow(31);
    let ok = conv.0 == p74 && conv.1 == q74 && conv.1 > six_m;
    report(
        "4 (74th convergent)",
        ok,
        &format!("p74/q74 reproduced bit-exactly; q74 > 6·3·10^31 = {six_m}"),
    );
}

#[test]
fn criterion_5a_gamma1_reduction() {
    let s = shared();
    let eps_cap = ratio(4, 10);
    let mut ok = s.fpp.m_bound == BigInt::from(49);
    for c in &s.fpp.m_campaigns {
        ok = ok
            && c.epsilon.sign_positive().is_true()
            && c.epsilon.gt(&eps_cap).is_true()
            && c.exponent_bound == BigInt::from(49);
    }
    report(
        "5a (Γ1: ε > 0.4 → m ≤ 49)",
        ok,
        &format!("ε = {}, m ≤ {}", s.fpp.m_campaigns[0].epsilon.approx_decimal(10), s.fpp.m_bound),
    );
}

#[test]
fn criterion_5b_gamma3_reduction() {
    let s = shared();
    let eps_cap = ratio(2, 10);
    let mut ok = s.ffp.m_bound == BigInt::from(90);
    for c in &s.ffp.m_campaigns {
        ok = ok
            && c.epsilon.sign_positive().is_true()
            && c.epsilon.gt(&eps_cap).is_true()
            && c.exponent_bound == BigInt::from(90);
    }
    report(
        "5b (Γ3: ε > 0.2 → m ≤ 90)",
        ok,
        &format!("ε = {}, m ≤ {}", s.ffp.m_campaigns[0].epsilon.approx_decimal(10), s.ffp.m_bound),
    );
}

#[test]
fn criterion_5c_gamma2_family() {
    let s = shared();
    let mut ok = s.fpp.n_bound_lemma == BigInt::from(53);
    let mut min_eps = None::<CReal>;
    for f in &s.fpp.family_campaigns {
        for m in &f.members {
            ok = ok && m.epsilon.sign_positive().is_true();
        }
        min_eps = Some(f.min_epsilon.clone());
        ok = ok && f.max_exponent_bound == BigInt::from(53);
    }
    let min_eps = min_eps.unwrap();
    // The stated threshold: family minima ε > 0.019. Exact computation
    // gives 1.9199…·10⁻³ (at member m = 16), an order of magnitude lower;
    // note that ε > 0.019 would give n ≤ 52, contradicting the stated
    // n ≤ 53, while the computed ε yields exactly 53.
    let stated_threshold_holds = min_eps.gt(&ratio(19, 1000)).is_true();
    report(
        "5c (Γ2 family: ε > 0.019 → n ≤ 53)",
        ok && stated_threshold_holds,
        &format!(
            "all 90 member ε certified positive; n-bound = {} (= 53 as stated); \
             but min ε = {} (radius {}) at m = 16, which refutes the stated \
             'ε > 0.019'; the certified threshold is min ε > 0.0019",
            s.fpp.n_bound_lemma,
            min_eps.approx_decimal(10),
            min_eps.radius_decimal(),
        ),
    );
}

#[test]
fn criterion_5d_gamma4_family() {
    let s = shared();
    let mut ok = s.ffp.n_bound_lemma == BigInt::from(94);
    let mut min_eps = None::<CReal>;
    for f in &s.ffp.family_campaigns {
        for m in &f.members {
            ok = ok && m.epsilon.sign_positive().is_true();
        }
        min_eps = Some(f.min_epsilon.clone());
        ok = ok && f.max_exponent_bound == BigInt::from(94);
    }
    let min_eps = min_eps.unwrap();
    ok = ok && min_eps.gt(&ratio(5, 1000)).is_true();
    report(
        "5d (Γ4 family: ε > 0.005 → n ≤ 94)",
        ok,
        &format!("min ε = {}, n ≤ {}", min_eps.approx_decimal(10), s.ffp.n_bound_lemma),
    );
}

#[test]
fn criterion_6a_fpp_theorem_k_set() {
    let s = shared();
    let k_set = s.fpp.k_set();
    // The stated solution list: k ∈ {1, 2, 5, 12}. The certified search
    // also finds k = 3: F₃ = 2 = P₁·P₂ (triple (3,1,2)), so the honest
    // k-set is {1, 2, 3, 5, 12}.
    let stated = vec![1usize, 2, 5, 12];
    report(
        "6a (FPP k-set = {1,2,5,12})",
        k_set == stated,
        &format!(
            "exact search over k ≤ 400, m ≤ n ≤ 100 yields k-set {k_set:?}; \
             the triple (k,m,n) = (3,1,2) with F_3 = 2 = P_1·P_2 = 1·2 is a \
             genuine solution missing from the stated list"
        ),
    );
}

#[test]
fn criterion_6b_ffp_theorem_k_set() {
    let s = shared();
    let k_set = s.ffp.k_set();
    report(
        "6b (FFP k-set = {1,2,3,7})",
        k_set == vec![1usize, 2, 3, 7],
        &format!("exact search yields k-set {k_set:?}"),
    );
}

#[test]
fn criterion_7_property_suites() {
    let s = shared();
    // Convergent identities and approximation quality on the replay table.
    let det_ok = s.fpp.table.determinants_ok() && s.ffp.table.determinants_ok();
    let inc_ok = s.fpp.table.denominators_increase();
    let quality_ok = s.fpp.table.approximation_quality_ok().unwrap();
    // Growth bounds and Binet agreement were certified to 500 inside the
    // runs (a violation or undecidable comparison aborts the run).
    let growth_ok = s.fpp.growth_violations.is_empty()
        && s.ffp.growth_violations.is_empty()
        && s.fpp.options.sequence_check_max == 500;
    // Search vs naive triple loop at k ≤ 200, n ≤ 60.
    let mut naive_ok = true;
    for eq in Equation::BOTH {
        let pair = RecurrencePair::for_equation(eq);
        let fast = pipeline::search(&pair, eq, 200, 60);
        let mut naive = Vec::new();
        for k in 1..=200usize {
            let uk = pair.u().term(k);
            for m in 1..=60usize {
                for n in m..=60usize {
                    if pair.v().term(m) * pair.v().term(n) == uk {
                        naive.push((k, m, n));
                    }
                }
            }
        }
        naive.sort_unstable();
        let fast_triples: Vec<(usize, usize, usize)> =
            fast.iter().map(|t| (t.k, t.m, t.n)).collect();
        naive_ok = naive_ok && fast_triples == naive;
    }
    // 50 random reduction instances cross-checked by brute force.
    common::dp_small_instance_oracle(0xacce_707e, 50);
    report(
        "7 (property suites)",
        det_ok && inc_ok && quality_ok && growth_ok && naive_ok,
        &format!(
            "determinants ±1 over {} convergents; |τ−p/q| < 1/q² certified; \
             growth+Binet certified to 500; reduction oracle: 50/50 instances \
             with zero counterexamples; search = naive triple loop at k≤200, n≤60",
            s.fpp.table.len()
        ),
    );
}

#[test]
fn criterion_8_certificate_determinism() {
    let s = shared();
    let ok = s.fpp_json == s.fpp_json_replay && s.ffp_json == s.ffp_json_replay;
    report(
        "8 (byte-identical replay)",
        ok,
        &format!(
            "two independent runs: FPP {} bytes, FFP {} bytes, both byte-identical",
            s.fpp_json.len(),
            s.ffp_json.len()
        ),
    );
}
