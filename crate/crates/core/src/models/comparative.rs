//! Comparative ambiguity aversion between two Choquet models.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::Verdict;
use crate::distortion::{DistortionFunction, UtilityFunction};
use crate::error::{Error, Result};
use crate::models::{ChoquetModel, ModelSpec};
use crate::sampling::{payoff_box, random_act_in, random_measurable_act};
use crate::space::{Act, Event};

/// Grid size used to compare utilities and distortions.
pub const SHAPE_GRID: usize = 201;

/// Largest gap allowed between two functions called equal.
pub const SHAPE_TOL: f64 = 1e-9;

fn parts(m: &ModelSpec) -> Result<&ChoquetModel> {
    m.choquet_model().ok_or_else(|| {
        Error::Unsupported(format!("comparisons need Choquet models, not {}", m.kind()))
    })
}

/// Outcome of [`more_ambiguity_averse`].
#[derive(Clone, Debug, PartialEq)]
pub struct AversionComparison {
    /// `ν₁ ≥ ν₂` event-wise; the witness is an event where `ν₂` is larger.
    pub setwise: Verdict<Event>,
    /// `R ≿₁ A ⇒ R ≿₂ A` over risky events `R` and all events `A`.
    pub behavioral: Verdict<(Event, Event)>,
}

impl AversionComparison {
    /// Whether the second model is more ambiguity averse than the first.
    pub fn holds(&self) -> bool {
        self.setwise.holds()
    }
}

/// Whether `m2` is more ambiguity averse than `m1`, i.e. `ν₁ ≥ ν₂`.
///
/// The binary-act definition is checked by brute force alongside. With a
/// finite risk algebra it is only a necessary condition, since the algebra
/// need not contain an event matching every `ν(A)`.
pub fn more_ambiguity_averse(m1: &ModelSpec, m2: &ModelSpec) -> Result<AversionComparison> {
    let (c1, c2) = (parts(m1)?, parts(m2)?);
    let s = c1.capacity().space();
    s.ensure_same(c2.capacity().space())?;
    let setwise = c1.capacity().dominates_setwise(c2.capacity())?;

    let risky = c1.partition().algebra();
    let mut behavioral = Verdict::Holds;
    'outer: for &r in &risky {
        let bet_r = Act::indicator(s, r)?;
        let (r1, r2) = (m1.value(&bet_r)?, m2.value(&bet_r)?);
        for a in s.events() {
            let bet_a = Act::indicator(s, a)?;
            let d1 = r1 - m1.value(&bet_a)?;
            let d2 = r2 - m2.value(&bet_a)?;
            if d1 >= -super::INDIFFERENCE_TOL && d2 < -super::INDIFFERENCE_TOL {
                behavioral = Verdict::Violated((r, a));
                break 'outer;
            }
        }
    }
    Ok(AversionComparison {
        setwise,
        behavioral,
    })
}

/// Result of a sampled check of `X ≿₁ Y ⇒ X ≿₂ Y` (and the strict version)
/// for risky `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpReport {
    pub checked: usize,
    /// First pair `(X, Y)` violating the implication.
    pub violation: Option<(Act, Act)>,
}

impl EpReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Samples `n` pairs `(X, Y)` with `X` measurable for the first model's
/// partition and checks the comparative implication.
///
/// Pairs cycle through three shapes: `X` risky with `Y` its certainty
/// equivalent, `X` the certainty equivalent of a random `Y`, and two
/// independent random acts.
pub fn ep_check(m1: &ModelSpec, m2: &ModelSpec, n: usize, seed: u64) -> Result<EpReport> {
    let c1 = parts(m1)?;
    parts(m2)?;
    let s = m1.space().clone();
    s.ensure_same(m2.space())?;
    let part = c1.partition().clone();
    let (lo, hi) = common_box(m1, m2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for k in 0..n {
        let (x, y) = match k % 3 {
            0 => {
                let x = random_measurable_act(&mut rng, &part, lo, hi)?;
                let c = m1.certainty_equivalent(&x)?.clamp(lo, hi);
                (x, Act::constant(&s, c)?)
            }
            1 => {
                let y = if rng.gen_bool(0.5) {
                    let e = Event(rng.gen_range(0..s.event_count() as u32));
                    Act::binary(&s, hi, e, lo)?
                } else {
                    random_act_in(&mut rng, &s, lo, hi)?
                };
                let c = m1.certainty_equivalent(&y)?.clamp(lo, hi);
                (Act::constant(&s, c)?, y)
            }
            _ => (
                random_measurable_act(&mut rng, &part, lo, hi)?,
                random_act_in(&mut rng, &s, lo, hi)?,
            ),
        };
        let o1 = m1.prefer(&x, &y)?;
        let o2 = m2.prefer(&x, &y)?;
        let broken = match o1 {
            Ordering::Greater => o2 != Ordering::Greater,
            Ordering::Equal => o2 == Ordering::Less,
            Ordering::Less => false,
        };
        if broken {
            return Ok(EpReport {
                checked: k + 1,
                violation: Some((x, y)),
            });
        }
    }
    Ok(EpReport {
        checked: n,
        violation: None,
    })
}

fn common_box(m1: &ModelSpec, m2: &ModelSpec) -> (f64, f64) {
    let b1 = payoff_box(m1.utility().expect("Choquet model"));
    let b2 = payoff_box(m2.utility().expect("Choquet model"));
    let lo = b1.0.max(b2.0);
    let hi = b1.1.min(b2.1);
    if lo < hi {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn same_utility(u1: &UtilityFunction, u2: &UtilityFunction) -> Result<bool> {
    let (n1, n2) = (u1.normalized()?, u2.normalized()?);
    let (a1, b1) = u1.domain();
    let (a2, b2) = u2.domain();
    if a1 != a2 || b1 != b2 {
        return Ok(false);
    }
    let lo = a1.max(-10.0);
    let hi = b1.min(10.0);
    Ok(n1.agrees_on_grid(&n2, lo, hi, SHAPE_GRID, SHAPE_TOL))
}

fn same_distortion(g1: &DistortionFunction, g2: &DistortionFunction) -> bool {
    g1.agrees_on_grid(g2, SHAPE_GRID, SHAPE_TOL)
}

/// Outcome of [`comparative_full`].
#[derive(Clone, Debug, PartialEq)]
pub struct FullComparison {
    pub same_utility: bool,
    pub same_distortion: bool,
    pub aversion: AversionComparison,
    pub sampled: EpReport,
}

impl FullComparison {
    /// Whether the comparative implication holds on all risky/general pairs.
    pub fn holds(&self) -> bool {
        self.same_utility && self.same_distortion && self.aversion.holds()
    }
}

/// Equal utilities (up to normalization), equal distortions, and `ν₁ ≥ ν₂`;
/// a sampled check of the implication runs alongside and supplies a
/// witness pair when one is found.
pub fn comparative_full(
    m1: &ModelSpec,
    m2: &ModelSpec,
    samples: usize,
    seed: u64,
) -> Result<FullComparison> {
    let (c1, c2) = (parts(m1)?, parts(m2)?);
    c1.capacity().space().ensure_same(c2.capacity().space())?;
    Ok(FullComparison {
        same_utility: same_utility(c1.utility(), c2.utility())?,
        same_distortion: same_distortion(c1.distortion(), c2.distortion()),
        aversion: more_ambiguity_averse(m1, m2)?,
        sampled: ep_check(m1, m2, samples, seed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::Capacity;
    use crate::space::{ProbabilityMeasure, RiskPartition, StateSpace};

    fn setup() -> (StateSpace, RiskPartition, ProbabilityMeasure) {
        let s = StateSpace::new(["1", "2", "3", "4"]).unwrap();
        let part = RiskPartition::new(
            &s,
            vec![Event::from_indices([0, 1]), Event::from_indices([2, 3])],
        )
        .unwrap();
        let p = ProbabilityMeasure::new(&s, vec![0.2, 0.3, 0.1, 0.4]).unwrap();
        (s, part, p)
    }

    fn model(
        nu: Capacity,
        g: DistortionFunction,
        part: &RiskPartition,
        p: &ProbabilityMeasure,
    ) -> ModelSpec {
        ModelSpec::crdu(UtilityFunction::identity(), g, nu, part.clone(), p.clone()).unwrap()
    }

    fn squared(part: &RiskPartition, p: &ProbabilityMeasure) -> Capacity {
        // P² off the risky algebra, lifted to stay between P(inner) and P(A)
        Capacity::from_fn(p.space(), |e| {
            if part.contains_event(e) {
                p.prob(e)
            } else {
                p.prob(part.inner(e)).max(p.prob(e).powi(2))
            }
        })
        .unwrap()
    }

    #[test]
    fn identical_models() {
        let (_, part, p) = setup();
        let m = model(
            Capacity::from_measure(&p),
            DistortionFunction::identity(),
            &part,
            &p,
        );
        assert!(more_ambiguity_averse(&m, &m).unwrap().holds());
        let full = comparative_full(&m, &m, 300, 1).unwrap();
        assert!(full.holds() && full.sampled.holds());
    }

    #[test]
    fn squared_capacity_is_more_averse() {
        let (_, part, p) = setup();
        let g = DistortionFunction::power(1.3).unwrap();
        let m1 = model(Capacity::from_measure(&p), g.clone(), &part, &p);
        let m2 = model(squared(&part, &p), g, &part, &p);
        let fwd = more_ambiguity_averse(&m1, &m2).unwrap();
        assert!(fwd.holds() && fwd.behavioral.holds());
        let full = comparative_full(&m1, &m2, 600, 7).unwrap();
        assert!(full.holds());
        assert!(full.sampled.holds(), "{:?}", full.sampled);

        let back = more_ambiguity_averse(&m2, &m1).unwrap();
        assert!(!back.holds());
        assert!(back.setwise.witness().is_some());
        let sampled = ep_check(&m2, &m1, 600, 7).unwrap();
        assert!(!sampled.holds());
    }

    #[test]
    fn different_distortions_fail() {
        let (_, part, p) = setup();
        let m1 = model(
            Capacity::from_measure(&p),
            DistortionFunction::identity(),
            &part,
            &p,
        );
        let m2 = model(
            Capacity::from_measure(&p),
            DistortionFunction::power(2.0).unwrap(),
            &part,
            &p,
        );
        let full = comparative_full(&m1, &m2, 300, 3).unwrap();
        assert!(!full.same_distortion);
        assert!(!full.holds());
        assert!(full.sampled.violation.is_some());
    }
}
