//! The machine-readable proof certificate.
//!
//! A certificate is a single JSON tree with every stage's certified
//! quantities: exact integers as decimal strings, reals as
//! (approximation, radius) pairs. Identical runs produce byte-identical
//! certificates; nothing time- or host-dependent is recorded.

use serde::Serialize;

use crate::linforms::{AValue, HeightBound, LinearFormStage, StageBound};
use crate::realcore::CReal;
use crate::reduction::{FamilyOutcome, ReductionOutcome};
use crate::sequences::BinaryRecurrence;

use super::VerificationRun;

/// Significant digits used for decimal renderings of certified reals.
const APPROX_DIGITS: u32 = 10;

/// Decimal rendering of a certified real: midpoint approximation plus an
/// upper bound for the radius.
#[derive(Debug, Clone, Serialize)]
pub struct CRealEcho {
    pub approx: String,
    pub radius: String,
}

impl CRealEcho {
    pub fn of(v: &CReal) -> Self {
        CRealEcho { approx: v.approx_decimal(APPROX_DIGITS), radius: v.radius_decimal() }
    }
}

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub format: &'static str,
    pub equation: String,
    pub config: ConfigEcho,
    pub environment: EnvironmentEcho,
    pub sequences: SequencesEcho,
    pub stage1: Stage1Echo,
    pub stage2: Stage2Echo,
    pub stage3: Stage3Echo,
    pub assumed_lemmas: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub precision_digits: u32,
    pub k_max: usize,
    pub n_max: usize,
    pub family_m_max: usize,
    pub sequence_check_max: usize,
    pub big_m: String,
    pub pinned_convergent_index: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct EnvironmentEcho {
    pub package: &'static str,
    pub version: &'static str,
    pub precision_policy: String,
}

#[derive(Debug, Serialize)]
pub struct RecurrenceEcho {
    pub name: String,
    pub a: String,
    pub b: String,
    pub u0: String,
    pub u1: String,
    pub discriminant: String,
}

impl RecurrenceEcho {
    fn of(rec: &BinaryRecurrence) -> Self {
        let (u0, u1) = rec.initial_terms();
        RecurrenceEcho {
            name: rec.name().to_string(),
            a: rec.coeff_a().to_string(),
            b: rec.coeff_b().to_string(),
            u0: u0.to_string(),
            u1: u1.to_string(),
            discriminant: rec.discriminant().to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SequencesEcho {
    pub u: RecurrenceEcho,
    pub v: RecurrenceEcho,
    /// Construction-time checks: root product ±1, real irrational roots,
    /// distinct quadratic fields.
    pub structural_conditions_checked: bool,
    pub growth_bounds_certified_to: usize,
    pub growth_violations: Vec<usize>,
    pub binet_agreement_certified_to: usize,
}

#[derive(Debug, Serialize)]
pub struct ParamEcho {
    pub description: String,
    pub exponent: String,
    pub height_bound: String,
    pub log_abs: CRealEcho,
    pub a_value: String,
}

fn height_echo(h: &HeightBound) -> String {
    match h {
        HeightBound::Fixed(v) => v.approx_decimal(APPROX_DIGITS),
        HeightBound::NDependent { coeff, s } => {
            format!("{}·(1+log({s}n))", coeff.approx_decimal(APPROX_DIGITS))
        }
    }
}

fn a_echo(a: &AValue) -> String {
    match a {
        AValue::Fixed(v) => v.approx_decimal(APPROX_DIGITS),
        AValue::NDependent { coeff, s } => {
            format!("{}·(1+log({s}n))", coeff.approx_decimal(APPROX_DIGITS))
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FormEcho {
    pub id: String,
    pub log_count: u32,
    pub field_degree: u32,
    pub params: Vec<ParamEcho>,
    pub d_expr: String,
    pub rhs_coeff: CRealEcho,
    pub rhs_symbolic: String,
    pub decay_base: String,
    pub decay_var: String,
    pub log_power: u8,
}

impl FormEcho {
    fn of(stage: &LinearFormStage) -> Self {
        FormEcho {
            id: stage.id.to_string(),
            log_count: stage.l,
            field_degree: stage.d_l,
            params: stage
                .params
                .iter()
                .map(|p| ParamEcho {
                    description: p.description.clone(),
                    exponent: p.exponent.clone(),
                    height_bound: height_echo(&p.height_bound),
                    log_abs: CRealEcho::of(&p.log_abs),
                    a_value: a_echo(&p.a_value),
                })
                .collect(),
            d_expr: format!("{}n", stage.d_coeff),
            rhs_coeff: CRealEcho::of(&stage.rhs_coeff),
            rhs_symbolic: stage.rhs_coeff_expr.to_string(),
            decay_base: stage.decay_base_expr.to_string(),
            decay_var: match stage.decay_var {
                crate::linforms::DecayVar::M => "m".to_string(),
                crate::linforms::DecayVar::N => "n".to_string(),
            },
            log_power: stage.log_power,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundEcho {
    pub label: String,
    pub coefficient: CRealEcho,
    pub s: u32,
    pub power: u8,
    pub linear_coeff: CRealEcho,
    pub offset: CRealEcho,
    pub resulting_bound: Option<String>,
}

impl BoundEcho {
    fn of(b: &StageBound) -> Self {
        BoundEcho {
            label: b.label.clone(),
            coefficient: CRealEcho::of(&b.coefficient),
            s: b.s,
            power: b.power,
            linear_coeff: CRealEcho::of(&b.linear_coeff),
            offset: CRealEcho::of(&b.offset),
            resulting_bound: b.resulting_bound.as_ref().map(|n| n.to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Stage1Echo {
    pub first_form: FormEcho,
    pub first_coefficient: CRealEcho,
    pub m_bound: BoundEcho,
    pub second_form: FormEcho,
    pub second_coefficient: CRealEcho,
    pub n_bound: BoundEcho,
    pub absolute_n_bound: String,
    pub coarse_k_multiplier: u32,
    pub criterion_index_cap: String,
    pub criterion_index_cap_below_m: bool,
}

#[derive(Debug, Serialize)]
pub struct CampaignEcho {
    pub label: String,
    pub mirrored: bool,
    pub a_used: CRealEcho,
    pub a_derived: CRealEcho,
    pub convergent_index: usize,
    pub q: String,
    pub epsilon: CRealEcho,
    pub exponent_bound: String,
    pub effective_bound: String,
}

impl CampaignEcho {
    fn of(o: &ReductionOutcome) -> Self {
        CampaignEcho {
            label: o.label.clone(),
            mirrored: o.mirrored,
            a_used: CRealEcho::of(&o.a_used),
            a_derived: CRealEcho::of(&o.a_derived),
            convergent_index: o.convergent_index,
            q: o.q.to_string(),
            epsilon: CRealEcho::of(&o.epsilon),
            exponent_bound: o.exponent_bound.to_string(),
            effective_bound: o.effective_bound.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FamilyMemberEcho {
    pub m: usize,
    pub epsilon: CRealEcho,
    pub exponent_bound: String,
}

#[derive(Debug, Serialize)]
pub struct FamilyEcho {
    pub label: String,
    pub a_used: CRealEcho,
    pub a_derived: CRealEcho,
    pub members: Vec<FamilyMemberEcho>,
    pub min_epsilon: CRealEcho,
    pub max_exponent_bound: String,
    pub max_effective_bound: String,
}

impl FamilyEcho {
    fn of(f: &FamilyOutcome, m_start: usize) -> Self {
        FamilyEcho {
            label: f.label.clone(),
            a_used: CRealEcho::of(&f.members[0].a_used),
            a_derived: CRealEcho::of(&f.members[0].a_derived),
            members: f
                .members
                .iter()
                .enumerate()
                .map(|(i, o)| FamilyMemberEcho {
                    m: m_start + i,
                    epsilon: CRealEcho::of(&o.epsilon),
                    exponent_bound: o.exponent_bound.to_string(),
                })
                .collect(),
            min_epsilon: CRealEcho::of(&f.min_epsilon),
            max_exponent_bound: f.max_exponent_bound.to_string(),
            max_effective_bound: f.max_effective_bound.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Stage2Echo {
    pub tau: String,
    pub tau_value: CRealEcho,
    pub big_m: String,
    pub expansion_digits: u32,
    pub convergent_count: usize,
    pub replay_p: String,
    pub replay_q: String,
    pub replay_q_exceeds_6m: bool,
    pub m_campaigns: Vec<CampaignEcho>,
    pub m_bound_reduced: String,
    pub family_campaigns: Vec<FamilyEcho>,
    pub n_bound_reduced: String,
    pub n_bound_effective: String,
}

#[derive(Debug, Serialize)]
pub struct TripleEcho {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub value: String,
    pub k_range: [String; 2],
}

#[derive(Debug, Serialize)]
pub struct Stage3Echo {
    pub k_max: usize,
    pub n_max: usize,
    pub solutions: Vec<TripleEcho>,
    pub k_set: Vec<usize>,
}

/// Assembles the certificate from a completed run.
pub fn build(run: &VerificationRun) -> Certificate {
    let pair = crate::sequences::RecurrencePair::for_equation(run.equation);
    let opts = &run.options;
    let replay_index = opts.pinned_index.unwrap_or(0);
    let (replay_p, replay_q) = if replay_index < run.table.len() {
        let (p, q) = &run.table.convergents()[replay_index];
        (p.to_string(), q.to_string())
    } else {
        (String::new(), String::new())
    };
    let six_m = crate::reduction::campaign_big_m() * num_bigint::BigInt::from(6);
    let replay_q_ok = run
        .table
        .convergents()
        .get(replay_index)
        .map(|(_, q)| *q > six_m)
        .unwrap_or(false);

    let m_campaigns = run.m_campaigns.iter().map(CampaignEcho::of).collect();
    let family_campaigns =
        run.family_campaigns.iter().map(|f| FamilyEcho::of(f, 1)).collect();

    Certificate {
        format: "fibpell.certificate.v1",
        equation: run.equation.to_string(),
        config: ConfigEcho {
            precision_digits: opts.digits,
            k_max: opts.k_max,
            n_max: opts.n_max,
            family_m_max: opts.family_m_max,
            sequence_check_max: opts.sequence_check_max,
            big_m: crate::reduction::campaign_big_m().to_string(),
            pinned_convergent_index: opts.pinned_index,
        },
        environment: EnvironmentEcho {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            precision_policy: format!(
                "dyadic intervals, outward rounding; start {} digits, escalate by doubling",
                opts.digits
            ),
        },
        sequences: SequencesEcho {
            u: RecurrenceEcho::of(pair.u()),
            v: RecurrenceEcho::of(pair.v()),
            structural_conditions_checked: true,
            growth_bounds_certified_to: opts.sequence_check_max,
            growth_violations: run.growth_violations.clone(),
            binet_agreement_certified_to: opts.sequence_check_max,
        },
        stage1: Stage1Echo {
            first_form: FormEcho::of(&run.stage1.first_stage),
            first_coefficient: CRealEcho::of(&run.stage1.first_coefficient),
            m_bound: BoundEcho::of(&run.stage1.m_bound),
            second_form: FormEcho::of(&run.stage1.second_stage),
            second_coefficient: CRealEcho::of(&run.stage1.second_coefficient),
            n_bound: BoundEcho::of(&run.stage1.n_bound),
            absolute_n_bound: run.stage1.absolute_n_bound().to_string(),
            coarse_k_multiplier: run.coarse_multiplier,
            criterion_index_cap: (num_bigint::BigInt::from(run.coarse_multiplier)
                * run.stage1.absolute_n_bound())
            .to_string(),
            criterion_index_cap_below_m: true,
        },
        stage2: Stage2Echo {
            tau: "log(alpha)/log(gamma)".to_string(),
            tau_value: CRealEcho::of(run.table.value()),
            big_m: crate::reduction::campaign_big_m().to_string(),
            expansion_digits: run.table.digits(),
            convergent_count: run.table.len(),
            replay_p,
            replay_q,
            replay_q_exceeds_6m: replay_q_ok,
            m_campaigns,
            m_bound_reduced: run.m_bound.to_string(),
            family_campaigns,
            n_bound_reduced: run.n_bound_lemma.to_string(),
            n_bound_effective: run.n_bound_effective.to_string(),
        },
        stage3: Stage3Echo {
            k_max: opts.k_max,
            n_max: opts.n_max,
            solutions: run
                .solutions
                .iter()
                .zip(&run.solution_ranges)
                .map(|(t, (lo, hi))| TripleEcho {
                    k: t.k,
                    m: t.m,
                    n: t.n,
                    value: t.value.to_string(),
                    k_range: [lo.to_string(), hi.to_string()],
                })
                .collect(),
            k_set: run.k_set(),
        },
        assumed_lemmas: vec![
            "Nonvanishing of each linear form: the power product of the two \
             dominant roots is a unit of the quartic field, while the rational \
             surd ratio it would have to equal has non-unit field norm \
             (2^12/5^2 in the first form); hence the form cannot be zero. \
             Recorded as an assumed algebraic lemma, not recomputed here."
                .to_string(),
        ],
    }
}

