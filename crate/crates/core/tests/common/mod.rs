//! Shared helpers for the integration suites.

use num_bigint::BigInt;
use num_traits::One;

use fibpell::realcore::{digits_to_bits, CReal, Expr, PrecisionPolicy, Truth};
use fibpell::reduction::{self, ConvergentTable, ReductionInstance};

/// Deterministic 64-bit generator (SplitMix64) for the counted suites.
pub struct Rng(pub u64);

impl Rng {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

const NONSQUARES: [i64; 10] = [2, 3, 5, 6, 7, 8, 10, 11, 13, 15];
const BASES: [(i64, i64); 5] = [(3, 2), (2, 1), (5, 2), (3, 1), (4, 1)];

/// Truth of `0 < m·τ − n + μ < A·B^{−k}` at escalating precision.
fn in_window(tau: &Expr, mu: &Expr, a: i64, b: (i64, i64), m: i64, n: &BigInt, k: i64) -> bool {
    for digits in [64u32, 128, 256] {
        let bits = digits_to_bits(digits);
        let lhs = tau
            .eval(bits)
            .unwrap()
            .mul_i64(m)
            .add(&mu.eval(bits).unwrap())
            .sub(&CReal::from_bigint(n, bits));
        let rhs = CReal::from_ratio(&BigInt::from(b.0), &BigInt::from(b.1), bits)
            .unwrap()
            .pow_i64(-k)
            .unwrap()
            .mul_i64(a);
        match (lhs.sign_positive(), lhs.lt(&rhs)) {
            (Truth::Unknown, _) | (_, Truth::Unknown) => continue,
            (pos, below) => return pos.is_true() && below.is_true(),
        }
    }
    panic!("window membership undecidable at 256 digits");
}

/// Random small reduction instances cross-checked against brute force:
/// the region `k > exponent_bound` the criterion certifies empty really
/// contains no solutions (the reported bound is the outward floor, so a
/// solution may sit at the bound itself but never beyond it).
pub fn dp_small_instance_oracle(seed: u64, count: usize) {
    let policy = PrecisionPolicy { start_digits: 64, cap_digits: 4096 };
    let bits = digits_to_bits(64);
    let mut rng = Rng(seed);
    let mut done = 0;
    while done < count {
        let d_tau = NONSQUARES[rng.below(10) as usize];
        let d_mu = NONSQUARES[rng.below(10) as usize];
        if d_mu == d_tau {
            // μ = ±√d/c with the same surd can make ε = (1/c − M)·‖τq‖
            // non-positive for every convergent; the criterion never
            // applies there.
            continue;
        }
        let c_mu = 1 + rng.below(4) as i64;
        let mu_sign = if rng.below(2) == 0 { 1 } else { -1 };
        let a = 1 + rng.below(10) as i64;
        let b = BASES[rng.below(5) as usize];
        let big_m = 1 + rng.below(20) as i64;
        let tau = Expr::sqrt(Expr::int(d_tau));
        let mu = Expr::div(
            Expr::mul(Expr::int(mu_sign), Expr::sqrt(Expr::int(d_mu))),
            Expr::int(c_mu),
        );
        let inst = ReductionInstance {
            label: format!("oracle τ=√{d_tau} mu={mu_sign}√{d_mu}/{c_mu} A={a} B={}/{}", b.0, b.1),
            tau: tau.clone(),
            mu: mu.clone(),
            a: CReal::from_i64(a, bits),
            a_derived: CReal::from_i64(a, bits),
            b: Expr::ratio(b.0, b.1),
            big_m: BigInt::from(big_m),
            pinned_index: None,
            guard_bound: None,
            mirrored: false,
        };
        let six_m = BigInt::from(6 * big_m);
        let mut table = ConvergentTable::expand(tau.clone(), &six_m, &policy).unwrap();
        let outcome = reduction::dp_reduce(&inst, &mut table, &policy).unwrap();
        assert!(outcome.q > six_m);
        assert!(outcome.epsilon.sign_positive().is_true());

        let bound: i64 = (&outcome.exponent_bound).try_into().unwrap();
        for m in 1..=big_m {
            let center = tau.eval(bits).unwrap().mul_i64(m).add(&mu.eval(bits).unwrap());
            let n0 = center.lo().floor();
            for k in (bound + 1)..=(bound + 10) {
                // Only n within one unit of mτ+μ can land in the window;
                // anything else is certifiably outside (0, A·B^{−k}).
                for dn in -1..=1 {
                    let n = &n0 + BigInt::from(dn);
                    if n < BigInt::one() || n > BigInt::from(200) {
                        continue;
                    }
                    assert!(
                        !in_window(&tau, &mu, a, b, m, &n, k),
                        "{}: excluded window hit at m={m} n={n} k={k} (bound {bound})",
                        inst.label
                    );
                }
            }
        }
        done += 1;
    }
}
