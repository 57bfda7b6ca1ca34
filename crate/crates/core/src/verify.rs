//! Randomized verification suites, one per result being reproduced.
//!
//! Every trial draws from its own generator seeded by `(seed, trial)`, so a
//! failing trial can be replayed alone.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::{construct_counterexample, product_space, Capacity};
use crate::choquet::{choquet, choquet_riemann_oracle, comonotone_additivity_check};
use crate::core_polytope::{core_vertices, is_balanced, robust_value};
use crate::distortion::{monotone_bisection, DistortionFunction, UtilityFunction};
use crate::error::{Error, Result};
use crate::models::entropic::donsker_varadhan_grid;
use crate::models::family::{
    check_comonotone_agreement, check_comonotone_agreement_events, check_nested_monotonicity,
    family_representation_value,
};
use crate::models::mixture::{subjective_mixture, subjective_mixture_fixed_point_oracle};
use crate::models::{
    attitude_report, axiom_audit, comparative_full, half_probability_event, more_ambiguity_averse,
    Axiom, ModelSpec,
};
use crate::sampling::{
    dominated_capacity, inner_measure, payoff_box, payoff_range, random_act_in, random_capacity,
    random_comonotone_acts, random_concave_distortion, random_concave_utility,
    random_convex_distortion, random_convex_utility, random_crdu_model, random_distortion,
    random_measure, random_partition, random_strictly_concave_distortion,
    random_submodular_capacity, random_supermodular_capacity, random_utility, ModelOptions,
};
use crate::space::{Act, ProbabilityMeasure, RiskPartition, StateSpace};

/// Grid used by the Riemann oracle in the Choquet suite.
pub const ORACLE_GRID: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Sorted-sum Choquet integral against the Riemann oracle, plus
    /// comonotone additivity.
    Choquet,
    /// Robust aggregation over the core for supermodular capacities.
    Maxmin,
    /// Concave `u`, convex `g` and supermodular `ν` give diversification.
    Main,
    /// Setwise dominance of matching probabilities and the comparative
    /// implication.
    Comam,
    /// Act-dependent distortion families.
    Family,
    /// Convex transforms of supermodular set functions.
    Latt,
    /// The two-coordinate construction that is diversification seeking but
    /// not ambiguity averse.
    Counterexample,
    /// Variational form of the entropic certainty equivalent.
    Dv,
    /// Matching probabilities recover `ν`.
    Matching,
    /// Closed-form subjective mixtures against the fixed-point oracle.
    Mixture,
    /// Sampled axiom checks on generated models.
    Audit,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Choquet,
        Suite::Maxmin,
        Suite::Main,
        Suite::Comam,
        Suite::Family,
        Suite::Latt,
        Suite::Counterexample,
        Suite::Dv,
        Suite::Matching,
        Suite::Mixture,
        Suite::Audit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Choquet => "choquet",
            Suite::Maxmin => "maxmin",
            Suite::Main => "main",
            Suite::Comam => "comam",
            Suite::Family => "family",
            Suite::Latt => "latt",
            Suite::Counterexample => "counterexample",
            Suite::Dv => "dv",
            Suite::Matching => "matching",
            Suite::Mixture => "mixture",
            Suite::Audit => "audit",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::Unsupported(format!(
                    "unknown suite {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub passed: usize,
    pub seed: u64,
    /// Trial index and description of the first failure.
    pub first_failure: Option<(usize, String)>,
    /// Largest error observed against the suite's tolerance, where one applies.
    pub max_error: Option<f64>,
    /// Extra facts worth printing.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

/// Per-trial accumulator.
struct Trial {
    failure: Option<String>,
    max_error: f64,
    notes: Vec<String>,
}

impl Trial {
    fn new() -> Self {
        Trial {
            failure: None,
            max_error: 0.0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn close(&mut self, got: f64, want: f64, tol: f64, what: impl FnOnce() -> String) {
        let err = (got - want).abs();
        if err.is_nan() {
            self.check(false, || format!("{}: NaN", what()));
            return;
        }
        self.max_error = self.max_error.max(err);
        self.check(err <= tol, || {
            format!(
                "{}: got {got}, want {want} (error {err:.3e} > {tol:e})",
                what()
            )
        });
    }
}

/// Generator for trial `t` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, t: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Runs `trials` trials of `suite`.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::InvalidModel("at least one trial is required".into()));
    }
    let mut report = SuiteReport {
        suite,
        trials,
        passed: 0,
        seed,
        first_failure: None,
        max_error: None,
        notes: Vec::new(),
    };
    let mut max_error: f64 = 0.0;
    let mut tracks_error = false;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let mut trial = Trial::new();
        let outcome = match suite {
            Suite::Choquet => choquet_trial(&mut rng, &mut trial),
            Suite::Maxmin => maxmin_trial(&mut rng, &mut trial),
            Suite::Main => main_trial(&mut rng, &mut trial),
            Suite::Comam => comam_trial(&mut rng, &mut trial, t),
            Suite::Family => family_trial(&mut rng, &mut trial),
            Suite::Latt => latt_trial(&mut rng, &mut trial),
            Suite::Counterexample => counterexample_trial(&mut rng, &mut trial, t),
            Suite::Dv => dv_trial(&mut rng, &mut trial),
            Suite::Matching => matching_trial(&mut rng, &mut trial),
            Suite::Mixture => mixture_trial(&mut rng, &mut trial),
            Suite::Audit => audit_trial(&mut rng, &mut trial),
        };
        if let Err(e) = outcome {
            trial.check(false, || format!("error: {e}"));
        }
        if trial.max_error > 0.0 {
            tracks_error = true;
        }
        max_error = max_error.max(trial.max_error);
        if t == 0 {
            report.notes = trial.notes;
        }
        match trial.failure {
            None => report.passed += 1,
            Some(msg) => {
                report.first_failure.get_or_insert((t, msg));
            }
        }
    }
    if tracks_error {
        report.max_error = Some(max_error);
    }
    Ok(report)
}

fn n_states(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

fn choquet_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let s = StateSpace::indexed(n_states(rng, 1, 6))?;
    let nu = random_capacity(rng, &s)?;
    let x = random_act_in(rng, &s, -3.0, 3.0)?;
    let fast = choquet(&x, &nu)?;
    let slow = choquet_riemann_oracle(&x, &nu, ORACLE_GRID)?;
    t.close(fast, slow, 1e-5, || {
        format!("Riemann oracle at X = {:?}", x.payoffs())
    });
    let acts = random_comonotone_acts(rng, &s, 2, -3.0, 3.0)?;
    t.check(
        comonotone_additivity_check(&acts[0], &acts[1], &nu)?,
        || {
            format!(
                "comonotone additivity fails for {:?} and {:?}",
                acts[0].payoffs(),
                acts[1].payoffs()
            )
        },
    );
    Ok(())
}

fn maxmin_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let s = StateSpace::indexed(n_states(rng, 2, 5))?;
    let nu = random_supermodular_capacity(rng, &s)?;
    let u = random_utility(rng)?;
    let g = random_distortion(rng)?;
    let (lo, hi) = payoff_range(&u);
    let w = nu.compose(&g);
    let priors = core_vertices(&nu)?;
    let p = random_measure(rng, &s)?;
    let ceu = ModelSpec::ceu(u.clone(), nu.clone(), RiskPartition::trivial(&s), p)?;
    let meu = ModelSpec::meu(u.clone(), priors, None)?;
    for _ in 0..10 {
        let x = random_act_in(rng, &s, lo, hi)?;
        let ux = x.try_map(|v| u.eval(v))?;
        let robust = robust_value(&u, &g, &nu, &x)?;
        t.close(robust.value, choquet(&ux, &w)?, 1e-7, || {
            format!("robust value vs Choquet at X = {:?}", x.payoffs())
        });
        t.close(meu.value(&x)?, ceu.value(&x)?, 1e-7, || {
            format!("MEU over core vertices vs CEU at X = {:?}", x.payoffs())
        });
    }
    Ok(())
}

/// A supermodular capacity that agrees with `P` on the partition's algebra.
fn supermodular_conforming(
    rng: &mut ChaCha8Rng,
    s: &StateSpace,
) -> Result<(Capacity, RiskPartition, ProbabilityMeasure)> {
    let p = random_measure(rng, s)?;
    if rng.gen_bool(0.5) {
        let part = RiskPartition::trivial(s);
        Ok((random_supermodular_capacity(rng, s)?, part, p))
    } else {
        let part = random_partition(rng, s)?;
        let nu =
            Capacity::from_measure(&p).mix(&inner_measure(&part, &p)?, rng.gen_range(0.0..1.0))?;
        Ok((nu, part, p))
    }
}

/// Raises the lower-valued act by a constant so both are indifferent.
fn equalize(m: &ModelSpec, x: Act, y: Act, width: f64) -> Result<(Act, Act)> {
    let (vx, vy) = (m.value(&x)?, m.value(&y)?);
    let (low, high, swapped) = if vx <= vy {
        (x, y, false)
    } else {
        (y, x, true)
    };
    let target = vx.max(vy);
    let c = monotone_bisection(
        |c| {
            low.shift(c)
                .and_then(|a| m.value(&a))
                .unwrap_or(f64::INFINITY)
        },
        target,
        0.0,
        width,
        1e-15,
    );
    let raised = low.shift(c)?;
    Ok(if swapped {
        (high, raised)
    } else {
        (raised, high)
    })
}

fn main_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let s = StateSpace::indexed(n_states(rng, 2, 5))?;
    let (nu, part, p) = supermodular_conforming(rng, &s)?;
    let u = random_concave_utility(rng)?;
    let g = random_convex_distortion(rng)?;
    let m = ModelSpec::crdu(u.clone(), g, nu, part, p)?;
    let report = attitude_report(&m)?;
    t.check(report.holds("DS") == Some(true), || {
        format!(
            "DS flag fails: {:?}",
            report.get("DS").and_then(|f| f.witness.clone())
        )
    });
    let (lo, hi) = payoff_box(&u);
    for _ in 0..10 {
        let x = random_act_in(rng, &s, lo, hi)?;
        let y = random_act_in(rng, &s, lo, hi)?;
        let (x, y) = equalize(&m, x, y, hi - lo)?;
        let lambda = rng.gen_range(0.0..=1.0);
        let mix = x.convex_mix(&y, lambda)?;
        let (vm, vx) = (m.value(&mix)?, m.value(&x)?);
        t.check(vm >= vx - 1e-9, || {
            format!(
                "mixture with λ = {lambda} of X = {:?}, Y = {:?} is worse: {vm} < {vx}",
                x.payoffs(),
                y.payoffs()
            )
        });
    }
    Ok(())
}

fn comam_trial(rng: &mut ChaCha8Rng, t: &mut Trial, index: usize) -> Result<()> {
    let n = n_states(rng, 2, 5);
    let m1 = random_crdu_model(rng, n, ModelOptions::default())?;
    let c1 = m1.choquet_model().expect("CRDU");
    let theta = rng.gen_range(0.2..0.8);
    let nu2 = dominated_capacity(c1.capacity(), c1.partition(), c1.reference(), theta)?;
    let m2 = ModelSpec::crdu(
        c1.utility().clone(),
        c1.distortion().clone(),
        nu2.clone(),
        c1.partition().clone(),
        c1.reference().clone(),
    )?;
    let seed = rng.gen();
    let fwd = comparative_full(&m1, &m2, 200, seed)?;
    t.check(fwd.holds(), || {
        "dominated capacity not recognized as more averse".into()
    });
    t.check(fwd.aversion.behavioral.holds(), || {
        format!(
            "binary-act check fails at {:?}",
            fwd.aversion.behavioral.witness()
        )
    });
    t.check(fwd.sampled.holds(), || {
        format!(
            "comparative implication fails at {:?}",
            fwd.sampled.violation
        )
    });

    let s = m1.space();
    let strict = s
        .events()
        .any(|e| c1.capacity().value(e) > nu2.value(e) + 1e-9);
    if strict {
        let back = more_ambiguity_averse(&m2, &m1)?;
        t.check(!back.holds() && back.setwise.witness().is_some(), || {
            "reversed comparison reported as holding".into()
        });
        if index == 0 {
            if let Some(e) = back.setwise.witness() {
                t.notes.push(format!(
                    "reversed pair witness event {{{}}}",
                    s.event_label(*e)
                ));
            }
        }
    }
    // a different distortion breaks the equivalence
    let g_other = DistortionFunction::power(if c1.distortion().is_identity() {
        2.0
    } else {
        1.0
    })?;
    if !g_other.agrees_on_grid(c1.distortion(), 201, 1e-9) {
        let m3 = ModelSpec::crdu(
            c1.utility().clone(),
            g_other,
            nu2,
            c1.partition().clone(),
            c1.reference().clone(),
        )?;
        let other = comparative_full(&m1, &m3, 1, seed)?;
        t.check(!other.holds(), || {
            "different distortions reported as comparable".into()
        });
    }
    Ok(())
}

fn family_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let n = n_states(rng, 2, 5);
    let m = random_crdu_model(
        rng,
        n,
        ModelOptions {
            p_consistent: true,
            ..Default::default()
        },
    )?;
    let u = m.utility().expect("CRDU");
    let (lo, hi) = payoff_range(u);
    let s = m.space().clone();
    for k in 0..100 {
        let x = if k % 2 == 0 {
            random_act_in(rng, &s, lo, hi)?
        } else {
            random_comonotone_acts(rng, &s, 1, lo, hi)?.remove(0)
        };
        t.close(
            family_representation_value(&m, &x)?,
            m.value(&x)?,
            1e-9,
            || format!("family representation at X = {:?}", x.payoffs()),
        );
    }
    let nested = check_nested_monotonicity(&m)?;
    t.check(nested.holds(), || {
        format!("property (a) fails at {:?}", nested.witness())
    });
    let events = check_comonotone_agreement_events(&m)?;
    t.check(events.holds(), || {
        format!("property (c) fails at {:?}", events.witness())
    });
    let acts = random_comonotone_acts(rng, &s, 6, lo, hi)?;
    let agree = check_comonotone_agreement(&m, &acts)?;
    t.check(agree.holds(), || {
        format!("property (c) fails for acts {:?}", agree.witness())
    });
    Ok(())
}

fn latt_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let s = StateSpace::indexed(n_states(rng, 2, 6))?;
    let phi = random_supermodular_capacity(rng, &s)?;
    let f = random_convex_distortion(rng)?;
    let sup = phi.compose(&f).is_supermodular()?;
    t.check(sup.holds(), || {
        format!("convex ∘ supermodular fails at {:?}", sup.witness())
    });
    let psi = random_submodular_capacity(rng, &s)?;
    let f = random_concave_distortion(rng)?;
    let sub = psi.compose(&f).is_submodular()?;
    t.check(sub.holds(), || {
        format!("concave ∘ submodular fails at {:?}", sub.witness())
    });
    Ok(())
}

/// Facts about one instance of the two-coordinate construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleFacts {
    pub risk_conforming: bool,
    pub h_of_p_on_h_algebra: bool,
    pub sandwich: bool,
    pub distorted_supermodular: bool,
    /// `ν(A₀) + ν(A₀ᶜ)` for the first second-coordinate block `A₀`.
    pub complement_sum: f64,
    pub balanced: bool,
    pub ds_with_concave_u: bool,
}

impl CounterexampleFacts {
    pub fn reproduced(&self) -> bool {
        self.risk_conforming
            && self.h_of_p_on_h_algebra
            && self.sandwich
            && self.distorted_supermodular
            && self.complement_sum > 1.0 + 1e-12
            && !self.balanced
            && self.ds_with_concave_u
    }
}

/// Checks the construction on a `g_blocks × h_blocks` grid.
pub fn counterexample_facts(
    g_blocks: usize,
    h_blocks: usize,
    p: &ProbabilityMeasure,
    h: &DistortionFunction,
) -> Result<CounterexampleFacts> {
    let cx = construct_counterexample(g_blocks, h_blocks, p, h)?;
    let nu = &cx.capacity;
    let s = nu.space();
    let tol = 1e-12;
    let risk_conforming = nu.is_risk_conforming(&cx.g_partition, p)?.holds();
    let h_of_p_on_h_algebra = cx
        .h_partition
        .algebra()
        .iter()
        .all(|&e| (nu.value(e) - h.eval(p.prob(e)).unwrap_or(f64::NAN)).abs() <= tol);
    let sandwich = s.events().all(|e| {
        let pa = p.prob(e);
        let upper = h.eval(pa).unwrap_or(f64::NAN);
        upper + tol >= nu.value(e) && nu.value(e) + tol >= pa
    });
    let distorted_supermodular = nu.compose(&cx.g).is_supermodular()?.holds();
    let a0 = cx.h_partition.blocks()[0];
    let complement_sum = nu.value(a0) + nu.value(a0.complement(s.len()));
    let balanced = is_balanced(nu)?;
    let u = UtilityFunction::power(0.5, 0.0, f64::INFINITY)?;
    let m = ModelSpec::crdu(
        u,
        cx.g.clone(),
        nu.clone(),
        cx.g_partition.clone(),
        p.clone(),
    )?;
    let report = attitude_report(&m)?;
    Ok(CounterexampleFacts {
        risk_conforming,
        h_of_p_on_h_algebra,
        sandwich,
        distorted_supermodular,
        complement_sum,
        balanced,
        ds_with_concave_u: report.holds("DS") == Some(true) && report.holds("AA") == Some(false),
    })
}

fn counterexample_trial(rng: &mut ChaCha8Rng, t: &mut Trial, index: usize) -> Result<()> {
    let (gb, hb, p, h) = if index == 0 {
        let s = product_space(2, 2)?;
        (
            2,
            2,
            ProbabilityMeasure::uniform(&s),
            DistortionFunction::power(0.5)?,
        )
    } else {
        let (gb, hb) = [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2)][rng.gen_range(0..5)];
        let s = product_space(gb, hb)?;
        let pg = random_measure(rng, &StateSpace::indexed(gb)?)?;
        let ph = random_measure(rng, &StateSpace::indexed(hb)?)?;
        let w = (0..gb)
            .flat_map(|i| (0..hb).map(move |j| (i, j)))
            .map(|(i, j)| pg.weight(i) * ph.weight(j))
            .collect();
        (
            gb,
            hb,
            ProbabilityMeasure::new(&s, w)?,
            random_strictly_concave_distortion(rng)?,
        )
    };
    let facts = counterexample_facts(gb, hb, &p, &h)?;
    t.check(facts.reproduced(), || {
        format!("{gb}×{hb} construction: {facts:?}")
    });
    if index == 0 {
        t.close(facts.complement_sum, 2f64.sqrt(), 1e-9, || {
            "ν(A0)+ν(A0ᶜ)".into()
        });
        t.notes
            .push(format!("ν(A0)+ν(A0ᶜ) = {:.6}", facts.complement_sum));
        t.notes.push(format!(
            "risk conforming {}, ν = h∘P on H-algebra {}, sandwich {}, g∘ν supermodular {}, balanced {}",
            facts.risk_conforming, facts.h_of_p_on_h_algebra, facts.sandwich, facts.distorted_supermodular, facts.balanced
        ));
    }
    Ok(())
}

fn dv_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let s = StateSpace::indexed(3)?;
    let p = random_measure(rng, &s)?;
    let x = random_act_in(rng, &s, -3.0, 3.0)?;
    let beta = rng.gen_range(0.1..3.0);
    let grid = donsker_varadhan_grid(&x, beta, &p)?;
    let m = ModelSpec::entropic(beta, p)?;
    t.close(grid.value, m.certainty_equivalent(&x)?, 1e-4, || {
        format!("β = {beta}, X = {:?}", x.payoffs())
    });
    Ok(())
}

fn matching_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let n = n_states(rng, 1, 6);
    let m = random_crdu_model(rng, n, ModelOptions::default())?;
    let cm = m.choquet_model().expect("CRDU");
    for e in m.space().events() {
        t.close(
            m.matching_probability(e)?,
            cm.capacity().value(e),
            1e-9,
            || format!("matching probability of event {:?}", e),
        );
    }
    for e in cm.partition().algebra() {
        t.close(
            m.matching_probability(e)?,
            cm.reference().prob(e),
            1e-9,
            || format!("risky event {:?}", e),
        );
    }
    Ok(())
}

fn mixture_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let n = n_states(rng, 2, 5);
    let m = random_crdu_model(
        rng,
        n,
        ModelOptions {
            with_half: true,
            ..Default::default()
        },
    )?;
    let cm = m.choquet_model().expect("CRDU");
    let r =
        half_probability_event(cm.partition(), cm.reference()).expect("sampled with a half event");
    let (lo, hi) = payoff_range(cm.utility());
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(lo..=hi);
    let (x, y) = if a >= b { (a, b) } else { (b, a) };
    t.close(
        subjective_mixture(&m, x, y)?,
        subjective_mixture_fixed_point_oracle(&m, x, y, r)?,
        1e-8,
        || format!("x = {x}, y = {y}"),
    );
    let linear = ModelSpec::crdu(
        UtilityFunction::identity(),
        cm.distortion().clone(),
        cm.capacity().clone(),
        cm.partition().clone(),
        cm.reference().clone(),
    )?;
    let z = subjective_mixture(&linear, x, y)?;
    t.check(z == 0.5 * (x + y), || {
        format!("linear mixture of {x}, {y} is {z}")
    });
    Ok(())
}

/// Samples per axiom in the audit suite.
pub const AUDIT_SAMPLES: usize = 200;

fn audit_trial(rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<()> {
    let n = n_states(rng, 2, 5);
    let opts = ModelOptions {
        with_half: true,
        ..Default::default()
    };
    let m = random_crdu_model(rng, n, opts)?;
    let seed = rng.gen();
    let report = axiom_audit(&m, AUDIT_SAMPLES, seed)?;
    for a in [Axiom::M, Axiom::RC, Axiom::SRM, Axiom::RS, Axiom::SCI] {
        t.check(report.passed(a) == Some(true), || {
            format!("CRDU fails {a}: {:?}", report.result(a))
        });
    }
    let cm = m.choquet_model().expect("CRDU");
    let dual = ModelSpec::dual(
        cm.distortion().clone(),
        cm.capacity().clone(),
        cm.partition().clone(),
        cm.reference().clone(),
    )?;
    let r = axiom_audit(&dual, AUDIT_SAMPLES, seed)?;
    t.check(r.passed(Axiom::CI) == Some(true), || {
        format!("dual model fails CI: {:?}", r.result(Axiom::CI))
    });
    let convex = ModelSpec::crdu(
        random_convex_utility(rng)?,
        cm.distortion().clone(),
        cm.capacity().clone(),
        cm.partition().clone(),
        cm.reference().clone(),
    )?;
    let r = axiom_audit(&convex, AUDIT_SAMPLES, seed)?;
    t.check(r.passed(Axiom::CI) == Some(false), || {
        "convex utility passes CI".into()
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn suites_pass_briefly() {
        for s in Suite::ALL {
            let trials = if s == Suite::Choquet { 2 } else { 5 };
            let r = run_suite(s, trials, 11).unwrap();
            assert!(r.ok(), "{s}: {:?}", r.first_failure);
        }
    }

    #[test]
    fn counterexample_notes() {
        let r = run_suite(Suite::Counterexample, 1, 0).unwrap();
        assert!(r.ok());
        assert!(r.notes.iter().any(|n| n.contains("1.414214")));
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            run_suite(Suite::Maxmin, 3, 5).unwrap(),
            run_suite(Suite::Maxmin, 3, 5).unwrap()
        );
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_suite(Suite::Dv, 0, 0).is_err());
    }
}
