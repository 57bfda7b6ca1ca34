//! Sampled checks of the axioms at the level of a given representation.
//!
//! Each axiom is tested on its own stream of random instances derived from
//! the seed, so reports are reproducible and independent of which axioms
//! apply to a model.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distortion::monotone_bisection;
use crate::error::Result;
use crate::models::mixture::act_mixture;
use crate::models::{half_probability_event, ModelKind, ModelSpec};
use crate::sampling::{payoff_box, random_act_in, random_comonotone_acts, random_measurable_act};
use crate::space::{fsd_geq, Act, Event, ProbabilityMeasure, RiskPartition};

/// Note attached to every report.
pub const OMITTED_NOTE: &str =
    "continuity (C) and continuity of the capacity have no content on a finite space and are not audited";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// Pointwise monotonicity.
    M,
    /// Risky acts with equal distributions are indifferent.
    RC,
    /// Risky acts that are almost surely better are strictly preferred.
    SRM,
    /// `c_{xRz} R c_{z'Ry} ≃ c_{xRz'} R c_{zRy}` on a coin-flip event `R`.
    RS,
    /// Comonotonic independence for subjective mixtures.
    SCI,
    /// Comonotonic independence for arithmetic mixtures.
    CI,
    /// First-order stochastic dominance under the reference measure.
    FSD,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::M,
        Axiom::RC,
        Axiom::SRM,
        Axiom::RS,
        Axiom::SCI,
        Axiom::CI,
        Axiom::FSD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::M => "M",
            Axiom::RC => "RC",
            Axiom::SRM => "SRM",
            Axiom::RS => "RS",
            Axiom::SCI => "SCI",
            Axiom::CI => "CI",
            Axiom::FSD => "FSD",
        }
    }

    /// Whether every model of `kind` satisfies the axiom.
    pub fn characterizes(self, kind: ModelKind) -> bool {
        use Axiom::*;
        match kind {
            ModelKind::Crdu | ModelKind::Ceu | ModelKind::Rdu => {
                matches!(self, M | RC | SRM | RS | SCI)
            }
            ModelKind::Dual => matches!(self, M | RC | SRM | RS | SCI | CI),
            ModelKind::Meu => matches!(self, M),
            ModelKind::Entropic => matches!(self, M | RC | FSD),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failing instance: the acts involved and what went wrong.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomWitness {
    pub acts: Vec<Act>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxiomOutcome {
    Checked {
        passed: usize,
        total: usize,
        counterexample: Option<AxiomWitness>,
    },
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub outcome: AxiomOutcome,
}

impl AxiomResult {
    /// `Some(true)` if every sample passed, `None` if skipped.
    pub fn passed(&self) -> Option<bool> {
        match &self.outcome {
            AxiomOutcome::Checked { passed, total, .. } => Some(passed == total),
            AxiomOutcome::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub kind: ModelKind,
    pub samples: usize,
    pub seed: u64,
    pub results: Vec<AxiomResult>,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn result(&self, axiom: Axiom) -> &AxiomResult {
        self.results
            .iter()
            .find(|r| r.axiom == axiom)
            .expect("every axiom has a result")
    }

    pub fn passed(&self, axiom: Axiom) -> Option<bool> {
        self.result(axiom).passed()
    }

    /// Checked axioms of the model's kind that failed on some sample.
    pub fn violations(&self) -> Vec<Axiom> {
        self.results
            .iter()
            .filter(|r| r.axiom.characterizes(self.kind) && r.passed() == Some(false))
            .map(|r| r.axiom)
            .collect()
    }
}

struct Ctx<'a> {
    m: &'a ModelSpec,
    part: Option<RiskPartition>,
    p: Option<ProbabilityMeasure>,
    half: Option<Event>,
    lo: f64,
    hi: f64,
}

type Trial = Result<Option<AxiomWitness>>;

fn fail(acts: Vec<Act>, detail: impl Into<String>) -> Trial {
    Ok(Some(AxiomWitness {
        acts,
        detail: detail.into(),
    }))
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => "≻",
        Ordering::Equal => "≃",
        Ordering::Less => "≺",
    }
}

/// Checks (M), (RC), (SRM), (RS), (SCI), (CI) and (FSD) on `n_samples`
/// random instances each.
///
/// (RC) and (SRM) need a risk partition and reference measure; (RS) and
/// (SCI) also need a utility and a union of blocks with probability one
/// half, and are skipped with a notice otherwise.
pub fn axiom_audit(m: &ModelSpec, n_samples: usize, seed: u64) -> Result<AuditReport> {
    let part = m.partition();
    let p = m.reference().cloned();
    let half = match (&part, &p) {
        (Some(part), Some(p)) => half_probability_event(part, p),
        _ => None,
    };
    let (lo, hi) = match m.utility() {
        Some(u) => payoff_box(u),
        None => (-1.5, 1.5),
    };
    let ctx = Ctx {
        m,
        part,
        p,
        half,
        lo,
        hi,
    };

    let mut results = Vec::new();
    for (k, axiom) in Axiom::ALL.into_iter().enumerate() {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k as u64 + 1)));
        let outcome = match skip_reason(&ctx, axiom) {
            Some(reason) => AxiomOutcome::Skipped(reason),
            None => {
                let mut passed = 0;
                let mut counterexample = None;
                for _ in 0..n_samples {
                    match trial(&ctx, axiom, &mut rng)? {
                        None => passed += 1,
                        Some(w) => {
                            counterexample.get_or_insert(w);
                        }
                    }
                }
                AxiomOutcome::Checked {
                    passed,
                    total: n_samples,
                    counterexample,
                }
            }
        };
        results.push(AxiomResult { axiom, outcome });
    }
    Ok(AuditReport {
        kind: m.kind(),
        samples: n_samples,
        seed,
        results,
        notes: vec![OMITTED_NOTE.to_string()],
    })
}

fn skip_reason(ctx: &Ctx, axiom: Axiom) -> Option<String> {
    let risky = ctx.part.is_some() && ctx.p.is_some();
    match axiom {
        Axiom::M | Axiom::CI => None,
        Axiom::RC | Axiom::SRM if !risky => {
            Some("model has no risk partition and reference measure".into())
        }
        Axiom::RC | Axiom::SRM => None,
        Axiom::FSD if ctx.p.is_none() => Some("model has no reference measure".into()),
        Axiom::FSD => None,
        Axiom::RS | Axiom::SCI => {
            if ctx.m.utility().is_none() {
                Some("model has no utility, so subjective mixtures are undefined".into())
            } else if !risky {
                Some("model has no risk partition and reference measure".into())
            } else if ctx.half.is_none() {
                Some("no union of risk blocks has probability exactly one half".into())
            } else {
                None
            }
        }
    }
}

fn trial(ctx: &Ctx, axiom: Axiom, rng: &mut ChaCha8Rng) -> Trial {
    match axiom {
        Axiom::M => trial_m(ctx, rng),
        Axiom::RC => trial_rc(ctx, rng),
        Axiom::SRM => trial_srm(ctx, rng),
        Axiom::RS => trial_rs(ctx, rng),
        Axiom::SCI => trial_independence(ctx, rng, true),
        Axiom::CI => trial_independence(ctx, rng, false),
        Axiom::FSD => trial_fsd(ctx, rng),
    }
}

/// `Y` with `lo ≤ Y ≤ X`, lowered on a random subset of states.
fn lowered(ctx: &Ctx, rng: &mut ChaCha8Rng, x: &Act) -> Result<Act> {
    let payoff = x
        .payoffs()
        .iter()
        .map(|&v| {
            if rng.gen_bool(0.6) {
                ctx.lo + (v - ctx.lo) * rng.gen::<f64>()
            } else {
                v
            }
        })
        .collect();
    Act::new(x.space(), payoff)
}

fn trial_m(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Trial {
    let s = ctx.m.space();
    let x = random_act_in(rng, s, ctx.lo, ctx.hi)?;
    let y = lowered(ctx, rng, &x)?;
    let o = ctx.m.prefer(&x, &y)?;
    if o == Ordering::Less {
        return fail(vec![x, y], "X ≥ Y pointwise but X ≺ Y");
    }
    Ok(None)
}

fn trial_rc(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Trial {
    let part = ctx.part.as_ref().expect("checked");
    let p = ctx.p.as_ref().expect("checked");
    let s = ctx.m.space();
    let (x, y) = match ctx.half {
        Some(r) if rng.gen_bool(0.5) => {
            let a = rng.gen_range(ctx.lo..=ctx.hi);
            let b = rng.gen_range(ctx.lo..=ctx.hi);
            (Act::binary(s, a, r, b)?, Act::binary(s, b, r, a)?)
        }
        _ => {
            let x = random_measurable_act(rng, part, ctx.lo, ctx.hi)?;
            let blocks = part.blocks();
            let mut values: Vec<f64> = blocks
                .iter()
                .map(|b| x.at(b.members().next().unwrap()))
                .collect();
            // permute values among blocks of equal mass; null blocks get fresh values
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for (k, b) in blocks.iter().enumerate() {
                let mass = p.prob(*b);
                if mass == 0.0 {
                    values[k] = rng.gen_range(ctx.lo..=ctx.hi);
                    continue;
                }
                match classes
                    .iter_mut()
                    .find(|c| (p.prob(blocks[c[0]]) - mass).abs() <= 1e-12)
                {
                    Some(c) => c.push(k),
                    None => classes.push(vec![k]),
                }
            }
            for class in classes {
                let mut vals: Vec<f64> = class.iter().map(|&k| values[k]).collect();
                vals.shuffle(rng);
                for (&k, v) in class.iter().zip(vals) {
                    values[k] = v;
                }
            }
            let y = Act::new(s, (0..s.len()).map(|i| values[part.block_of(i)]).collect())?;
            (x, y)
        }
    };
    let o = ctx.m.prefer(&x, &y)?;
    if o != Ordering::Equal {
        return fail(
            vec![x, y],
            format!(
                "equally distributed risky acts ranked X {} Y",
                ordering_name(o)
            ),
        );
    }
    Ok(None)
}

fn trial_srm(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Trial {
    let part = ctx.part.as_ref().expect("checked");
    let p = ctx.p.as_ref().expect("checked");
    let s = ctx.m.space();
    let y = random_measurable_act(rng, part, ctx.lo, ctx.hi)?;
    let width = ctx.hi - ctx.lo;
    let bumps: Vec<f64> = part
        .blocks()
        .iter()
        .map(|b| {
            if p.prob(*b) == 0.0 {
                f64::NAN
            } else {
                rng.gen_range(0.01 * width..=0.5 * width)
            }
        })
        .collect();
    let null_vals: Vec<f64> = part
        .blocks()
        .iter()
        .map(|_| rng.gen_range(ctx.lo..=ctx.hi))
        .collect();
    let x = Act::new(
        s,
        (0..s.len())
            .map(|i| {
                let k = part.block_of(i);
                if bumps[k].is_nan() {
                    null_vals[k]
                } else {
                    y.at(i) + bumps[k]
                }
            })
            .collect(),
    )?;
    let o = ctx.m.prefer(&x, &y)?;
    if o != Ordering::Greater {
        return fail(
            vec![x, y],
            format!(
                "X > Y almost surely on risky acts but X {} Y",
                ordering_name(o)
            ),
        );
    }
    Ok(None)
}

fn trial_rs(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Trial {
    let r = ctx.half.expect("checked");
    let s = ctx.m.space();
    let a = rng.gen_range(ctx.lo..=ctx.hi);
    let b = rng.gen_range(ctx.lo..=ctx.hi);
    let (x, y) = if a >= b { (a, b) } else { (b, a) };
    let z = rng.gen_range(y..=x);
    let z2 = rng.gen_range(y..=x);
    let ce = |hi: f64, lo: f64| ctx.m.certainty_equivalent(&Act::binary(s, hi, r, lo)?);
    let left = Act::binary(s, ce(x, z)?, r, ce(z2, y)?)?;
    let right = Act::binary(s, ce(x, z2)?, r, ce(z, y)?)?;
    let o = ctx.m.prefer(&left, &right)?;
    if o != Ordering::Equal {
        return fail(
            vec![left, right],
            format!(
                "x={x}, y={y}, z={z}, z'={z2}: left {} right",
                ordering_name(o)
            ),
        );
    }
    Ok(None)
}

/// Raises the worse of `x`, `y` by a constant until both are indifferent.
fn equalize(ctx: &Ctx, x: Act, y: Act) -> Result<(Act, Act)> {
    let (vx, vy) = (ctx.m.value(&x)?, ctx.m.value(&y)?);
    let (low, high, swapped) = if vx <= vy {
        (x, y, false)
    } else {
        (y, x, true)
    };
    let target = ctx.m.value(&high)?;
    let width = ctx.hi - ctx.lo;
    let mut failure = None;
    let c = monotone_bisection(
        |c| match low.shift(c).and_then(|a| ctx.m.value(&a)) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        target,
        0.0,
        width,
        1e-15,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let raised = low.shift(c)?;
    Ok(if swapped {
        (high, raised)
    } else {
        (raised, high)
    })
}

fn trial_independence(ctx: &Ctx, rng: &mut ChaCha8Rng, subjective: bool) -> Trial {
    let s = ctx.m.space();
    let acts = random_comonotone_acts(rng, s, 3, ctx.lo, ctx.hi)?;
    let (x, y) = equalize(ctx, acts[0].clone(), acts[1].clone())?;
    let z = acts[2].clone();
    if ctx.m.prefer(&x, &y)? != Ordering::Equal {
        // bisection could not reach indifference; nothing to test
        return Ok(None);
    }
    let (mx, my) = if subjective {
        (act_mixture(ctx.m, &x, &z)?, act_mixture(ctx.m, &y, &z)?)
    } else {
        (x.convex_mix(&z, 0.5)?, y.convex_mix(&z, 0.5)?)
    };
    let o = ctx.m.prefer(&mx, &my)?;
    if o != Ordering::Equal {
        let gap = ctx.m.value(&mx)? - ctx.m.value(&my)?;
        return fail(
            vec![x, y, z],
            format!(
                "X ≃ Y but ½X+½Z {} ½Y+½Z (value gap {gap:.3e})",
                ordering_name(o)
            ),
        );
    }
    Ok(None)
}

fn trial_fsd(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Trial {
    let p = ctx.p.as_ref().expect("checked");
    let s = ctx.m.space();
    let x = random_act_in(rng, s, ctx.lo, ctx.hi)?;
    let low = lowered(ctx, rng, &x)?;
    // move payoffs among states of equal weight; null states take anything
    let mut payoff = low.payoffs().to_vec();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, v) in payoff.iter_mut().enumerate() {
        let w = p.weight(i);
        if w == 0.0 {
            *v = rng.gen_range(ctx.lo..=ctx.hi);
            continue;
        }
        match classes
            .iter_mut()
            .find(|c| (p.weight(c[0]) - w).abs() <= 1e-15)
        {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    for class in classes {
        let mut vals: Vec<f64> = class.iter().map(|&i| payoff[i]).collect();
        vals.shuffle(rng);
        for (&i, v) in class.iter().zip(vals) {
            payoff[i] = v;
        }
    }
    let y = Act::new(s, payoff)?;
    if !fsd_geq(&x, &y, p)? {
        return Ok(None);
    }
    let o = ctx.m.prefer(&x, &y)?;
    if o == Ordering::Less {
        return fail(
            vec![x, y],
            "X dominates Y in distribution under P but X ≺ Y",
        );
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::Capacity;
    use crate::distortion::{DistortionFunction, UtilityFunction};
    use crate::space::StateSpace;

    fn setup() -> (StateSpace, RiskPartition, ProbabilityMeasure, Capacity) {
        let s = StateSpace::new(["a", "b", "c", "d"]).unwrap();
        let part = RiskPartition::new(
            &s,
            vec![Event::from_indices([0, 1]), Event::from_indices([2, 3])],
        )
        .unwrap();
        let p = ProbabilityMeasure::new(&s, vec![0.2, 0.3, 0.1, 0.4]).unwrap();
        let nu = Capacity::from_fn(&s, |e| {
            let (i, o) = (p.prob(part.inner(e)), p.prob(part.outer(e)));
            i + 0.3 * (o - i)
        })
        .unwrap();
        (s, part, p, nu)
    }

    #[test]
    fn crdu_passes_its_axioms() {
        let (_, part, p, nu) = setup();
        let u = UtilityFunction::power(0.5, 0.0, f64::INFINITY).unwrap();
        let m = ModelSpec::crdu(u, DistortionFunction::power(1.7).unwrap(), nu, part, p).unwrap();
        let r = axiom_audit(&m, 200, 4).unwrap();
        for a in [Axiom::M, Axiom::RC, Axiom::SRM, Axiom::RS, Axiom::SCI] {
            assert_eq!(r.passed(a), Some(true), "{a}: {:?}", r.result(a));
        }
        assert_eq!(r.passed(Axiom::CI), Some(false));
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn dual_passes_ci() {
        let (_, part, p, nu) = setup();
        let m = ModelSpec::dual(DistortionFunction::power(0.6).unwrap(), nu, part, p).unwrap();
        let r = axiom_audit(&m, 200, 8).unwrap();
        assert_eq!(r.passed(Axiom::CI), Some(true));
        assert_eq!(r.passed(Axiom::SCI), Some(true));
    }

    #[test]
    fn entropic_is_monotone_and_fsd_consistent() {
        let (s, _, _, _) = setup();
        let m = ModelSpec::entropic(0.8, ProbabilityMeasure::uniform(&s)).unwrap();
        let r = axiom_audit(&m, 200, 1).unwrap();
        assert_eq!(r.passed(Axiom::M), Some(true));
        assert_eq!(r.passed(Axiom::RC), Some(true));
        assert_eq!(r.passed(Axiom::FSD), Some(true));
        assert_eq!(r.passed(Axiom::SCI), None);
    }

    #[test]
    fn rs_skipped_without_half_event() {
        let s = StateSpace::new(["a", "b"]).unwrap();
        let p = ProbabilityMeasure::new(&s, vec![0.3, 0.7]).unwrap();
        let m = ModelSpec::ceu(
            UtilityFunction::identity(),
            Capacity::from_measure(&p),
            RiskPartition::finest(&s),
            p,
        )
        .unwrap();
        let r = axiom_audit(&m, 10, 0).unwrap();
        assert!(matches!(
            r.result(Axiom::RS).outcome,
            AxiomOutcome::Skipped(_)
        ));
    }

    #[test]
    fn audit_is_deterministic() {
        let (_, part, p, nu) = setup();
        let u = UtilityFunction::power(2.0, 0.0, f64::INFINITY).unwrap();
        let m = ModelSpec::crdu(u, DistortionFunction::identity(), nu, part, p).unwrap();
        assert_eq!(
            axiom_audit(&m, 50, 3).unwrap(),
            axiom_audit(&m, 50, 3).unwrap()
        );
    }
}
