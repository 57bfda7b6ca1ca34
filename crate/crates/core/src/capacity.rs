//! Capacities (monotone, normalized set functions) stored as full
//! `2^|Ω|` tables indexed by event bitmask, and their structural checkers.
//!
//! Checkers return a [`Verdict`]: either the property holds or a witness
//! (event or event pair) that violates it. Continuity of a capacity has no
//! content on a finite space and is not modelled.

use crate::distortion::DistortionFunction;
use crate::error::{Error, Result};
use crate::space::{Event, ProbabilityMeasure, RiskPartition, StateSpace};

/// Slack on every event-level comparison.
pub const EVENT_TOL: f64 = 1e-12;

/// Outcome of a property check: holds, or fails with a witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<W> {
    Holds,
    Violated(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(w) => Some(w),
        }
    }

    pub fn map<V, F: FnOnce(W) -> V>(self, f: F) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Violated(w) => Verdict::Violated(f(w)),
        }
    }
}

/// A monotone set function with `ν(∅) = 0` and `ν(Ω) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Capacity {
    space: StateSpace,
    values: Vec<f64>,
}

impl Capacity {
    /// Builds a capacity from a full table indexed by event mask.
    pub fn from_table(space: &StateSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.event_count() {
            return Err(Error::InvalidCapacity {
                constraint: "incomplete capacity table",
                detail: format!("{} values for {} events", values.len(), space.event_count()),
            });
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidCapacity {
                constraint: "finite values",
                detail: format!("ν({}) = {v}", space.event_label(Event(i as u32))),
            });
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidCapacity {
                constraint: "capacity not grounded",
                detail: format!("ν(∅) = {}", values[0]),
            });
        }
        let full = space.full().index();
        if values[full] != 1.0 {
            return Err(Error::InvalidCapacity {
                constraint: "capacity not normalized",
                detail: format!("ν(Ω) = {}", values[full]),
            });
        }
        for mask in 1..values.len() {
            let e = Event(mask as u32);
            for i in e.members() {
                let sub = e.difference(Event::singleton(i));
                if values[sub.index()] > values[mask] + EVENT_TOL {
                    return Err(Error::InvalidCapacity {
                        constraint: "capacity not monotone",
                        detail: format!(
                            "ν({}) = {} exceeds ν({}) = {}",
                            space.event_label(sub),
                            values[sub.index()],
                            space.event_label(e),
                            values[mask]
                        ),
                    });
                }
            }
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    /// Tabulates `f` over all events and validates the result.
    pub fn from_fn<F: FnMut(Event) -> f64>(space: &StateSpace, mut f: F) -> Result<Self> {
        let values = space.events().map(&mut f).collect();
        Self::from_table(space, values)
    }

    /// `ν(A) = Σ_{ω∈A} μ(ω)`.
    pub fn from_measure(mu: &ProbabilityMeasure) -> Self {
        let space = mu.space().clone();
        let mut values: Vec<f64> = space.events().map(|e| mu.prob(e)).collect();
        values[0] = 0.0;
        let full = space.full().index();
        values[full] = 1.0;
        Self { space, values }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn value(&self, e: Event) -> f64 {
        self.values[e.index()]
    }

    pub fn table(&self) -> &[f64] {
        &self.values
    }

    /// Event-wise `g(ν(A))`; monotone because `g` is nondecreasing.
    pub fn compose(&self, g: &DistortionFunction) -> Capacity {
        let mut values: Vec<f64> = self.values.iter().map(|&v| g.apply(v)).collect();
        values[0] = 0.0;
        let full = values.len() - 1;
        values[full] = 1.0;
        Capacity {
            space: self.space.clone(),
            values,
        }
    }

    /// The conjugate capacity `A ↦ 1 - ν(Aᶜ)`.
    pub fn dual(&self) -> Capacity {
        let n = self.space.len();
        let values = self
            .space
            .events()
            .map(|e| 1.0 - self.value(e.complement(n)))
            .collect();
        Capacity {
            space: self.space.clone(),
            values,
        }
    }

    /// Convex combination `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &Capacity, lambda: f64) -> Result<Capacity> {
        self.space.ensure_same(&other.space)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Capacity::from_table(&self.space, values)
    }

    fn modularity_scan(&self, superm: bool) -> Result<Verdict<(Event, Event)>> {
        self.space.ensure_at_most(crate::space::MAX_STATES)?;
        let count = self.values.len() as u32;
        for a in 0..count {
            for b in a + 1..count {
                // nested pairs satisfy the inequality with equality
                if a & b == a || a & b == b {
                    continue;
                }
                let lhs = self.values[a as usize] + self.values[b as usize];
                let rhs = self.values[(a | b) as usize] + self.values[(a & b) as usize];
                let violated = if superm {
                    lhs > rhs + EVENT_TOL
                } else {
                    lhs < rhs - EVENT_TOL
                };
                if violated {
                    return Ok(Verdict::Violated((Event(a), Event(b))));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// `ν(A) + ν(B) ≤ ν(A∪B) + ν(A∩B)` for all pairs; the first violating
    /// pair in mask order is the witness.
    pub fn is_supermodular(&self) -> Result<Verdict<(Event, Event)>> {
        self.modularity_scan(true)
    }

    pub fn is_submodular(&self) -> Result<Verdict<(Event, Event)>> {
        self.modularity_scan(false)
    }

    pub fn is_additive(&self) -> Verdict<Event> {
        for e in self.space.events() {
            let sum: f64 = e.members().map(|i| self.value(Event::singleton(i))).sum();
            if (self.value(e) - sum).abs() > EVENT_TOL {
                return Verdict::Violated(e);
            }
        }
        Verdict::Holds
    }

    /// `ν(U) = P(U)` for every union `U` of partition blocks.
    pub fn is_risk_conforming(
        &self,
        part: &RiskPartition,
        p: &ProbabilityMeasure,
    ) -> Result<Verdict<Event>> {
        self.space.ensure_same(part.space())?;
        self.space.ensure_same(p.space())?;
        for u in part.algebra() {
            if (self.value(u) - p.prob(u)).abs() > EVENT_TOL {
                return Ok(Verdict::Violated(u));
            }
        }
        Ok(Verdict::Holds)
    }

    /// `ν(A) = ν(B)` whenever `A` and `B` differ by a `P`-null set.
    ///
    /// By monotonicity it suffices to compare `ν(A)` with `ν(A ∪ N)` where
    /// `N` collects the null states; the witness is that pair.
    pub fn is_p_consistent(&self, p: &ProbabilityMeasure) -> Result<Verdict<(Event, Event)>> {
        self.space.ensure_same(p.space())?;
        let null = p.null_states();
        if null.is_empty() {
            return Ok(Verdict::Holds);
        }
        for a in self.space.events() {
            let b = a.union(null);
            if (self.value(a) - self.value(b)).abs() > EVENT_TOL {
                return Ok(Verdict::Violated((a, b)));
            }
        }
        Ok(Verdict::Holds)
    }

    /// `self(A) ≥ other(A)` for every event; the witness is an event where it fails.
    pub fn dominates_setwise(&self, other: &Capacity) -> Result<Verdict<Event>> {
        self.space.ensure_same(&other.space)?;
        for e in self.space.events() {
            if self.value(e) < other.value(e) - EVENT_TOL {
                return Ok(Verdict::Violated(e));
            }
        }
        Ok(Verdict::Holds)
    }
}

/// Output of [`construct_counterexample`].
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub capacity: Capacity,
    /// Blocks indexed by the first coordinate (the unambiguous algebra).
    pub g_partition: RiskPartition,
    /// Blocks indexed by the second coordinate (the independent algebra).
    pub h_partition: RiskPartition,
    /// The convex inverse of `h`.
    pub g: DistortionFunction,
    pub h: DistortionFunction,
}

/// Index of state `(i, j)` in a `g_blocks × h_blocks` product space.
pub fn product_state(i: usize, j: usize, h_blocks: usize) -> usize {
    i * h_blocks + j
}

/// Product space labelled `g{i}h{j}`, row-major in `(i, j)`.
pub fn product_space(g_blocks: usize, h_blocks: usize) -> Result<StateSpace> {
    StateSpace::new((0..g_blocks).flat_map(|i| (0..h_blocks).map(move |j| format!("g{i}h{j}"))))
}

/// Builds the capacity `ν = h ∘ ν̃` with `ν̃(A) = Σ_b P(b) · g(P(A|b))`, the sum
/// running over the blocks `b` of the second-coordinate partition and
/// `g = h⁻¹`.
///
/// For a strictly concave `h` and a product measure the result is risk
/// conforming for the first-coordinate partition, equals `h∘P` on the
/// second-coordinate algebra, satisfies `h(P(A)) ≥ ν(A) ≥ P(A)` and makes
/// `g∘ν` supermodular, while `ν(A) + ν(Aᶜ) > 1` for any nontrivial
/// second-coordinate event `A`.
pub fn construct_counterexample(
    g_blocks: usize,
    h_blocks: usize,
    p: &ProbabilityMeasure,
    h: &DistortionFunction,
) -> Result<Counterexample> {
    if g_blocks == 0 || h_blocks == 0 {
        return Err(Error::InvalidModel(
            "both coordinates need at least one block".into(),
        ));
    }
    if p.space().len() != g_blocks * h_blocks {
        return Err(Error::InvalidModel(format!(
            "measure has {} states, expected {g_blocks}×{h_blocks}",
            p.space().len()
        )));
    }
    if !h.is_strictly_concave() {
        return Err(Error::InvalidFunction(
            "h must be strictly concave (concave and not affine)".into(),
        ));
    }
    let g = h.inverse_function()?;
    let space = p.space().clone();

    let row = |i: usize| Event::from_indices((0..h_blocks).map(|j| product_state(i, j, h_blocks)));
    let col = |j: usize| Event::from_indices((0..g_blocks).map(|i| product_state(i, j, h_blocks)));
    let g_partition = RiskPartition::new(&space, (0..g_blocks).map(row).collect())?;
    let h_partition = RiskPartition::new(&space, (0..h_blocks).map(col).collect())?;

    for i in 0..g_blocks {
        for j in 0..h_blocks {
            let joint = p.weight(product_state(i, j, h_blocks));
            let prod = p.prob(row(i)) * p.prob(col(j));
            if (joint - prod).abs() > 1e-12 {
                return Err(Error::InvalidModel(format!(
                    "coordinates are not independent under P at (g{i}, h{j}): {joint} ≠ {prod}"
                )));
            }
        }
    }

    let tilde = |a: Event| -> f64 {
        (0..h_blocks)
            .map(|j| {
                let b = col(j);
                let pb = p.prob(b);
                if pb == 0.0 {
                    0.0
                } else {
                    pb * g.apply(p.prob(a.intersection(b)) / pb)
                }
            })
            .sum()
    };
    let mut values: Vec<f64> = space.events().map(|a| h.apply(tilde(a))).collect();
    values[0] = 0.0;
    let full = space.full().index();
    values[full] = 1.0;
    let capacity = Capacity::from_table(&space, values)?;
    Ok(Counterexample {
        capacity,
        g_partition,
        h_partition,
        g,
        h: h.clone(),
    })
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // six-digit published values
mod tests {
    use super::*;

    fn two_state(a: f64, b: f64) -> Capacity {
        let s = StateSpace::new(["1", "2"]).unwrap();
        Capacity::from_table(&s, vec![0.0, a, b, 1.0]).unwrap()
    }

    pub(crate) fn three_state_nonsupermodular() -> Capacity {
        let s = StateSpace::new(["1", "2", "3"]).unwrap();
        // masks: {1}=1 {2}=2 {1,2}=3 {3}=4 {1,3}=5 {2,3}=6
        Capacity::from_table(&s, vec![0.0, 0.0, 0.0, 0.8, 0.0, 0.8, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn table_validation() {
        let s = StateSpace::new(["1", "2"]).unwrap();
        let err = Capacity::from_table(&s, vec![0.1, 0.3, 0.4, 1.0]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidCapacity {
                constraint: "capacity not grounded",
                ..
            }
        ));
        let err = Capacity::from_table(&s, vec![0.0, 0.3, 0.4]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidCapacity {
                constraint: "incomplete capacity table",
                ..
            }
        ));
        let s3 = StateSpace::new(["1", "2", "3"]).unwrap();
        let err =
            Capacity::from_table(&s3, vec![0.0, 0.5, 0.0, 0.4, 0.0, 0.5, 0.0, 1.0]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidCapacity {
                constraint: "capacity not monotone",
                ..
            }
        ));
    }

    #[test]
    fn from_measure_examples() {
        let s = StateSpace::new(["1", "2"]).unwrap();
        assert_eq!(
            Capacity::from_measure(&ProbabilityMeasure::uniform(&s)).value(Event(1)),
            0.5
        );
        let mu = ProbabilityMeasure::new(&s, vec![0.3, 0.7]).unwrap();
        assert_eq!(Capacity::from_measure(&mu).value(Event(2)), 0.7);
        let s3 = StateSpace::new(["1", "2", "3"]).unwrap();
        let mu = ProbabilityMeasure::new(&s3, vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(
            Capacity::from_measure(&mu).value(Event::from_indices([0, 2])),
            0.5
        );
    }

    #[test]
    fn supermodularity_examples() {
        assert!(two_state(0.3, 0.4).is_supermodular().unwrap().holds());
        let s = StateSpace::new(["1", "2", "3"]).unwrap();
        let mu = ProbabilityMeasure::new(&s, vec![0.2, 0.3, 0.5]).unwrap();
        let add = Capacity::from_measure(&mu);
        assert!(add.is_supermodular().unwrap().holds());
        assert!(add.is_submodular().unwrap().holds());
        let v = three_state_nonsupermodular().is_supermodular().unwrap();
        assert_eq!(
            v,
            Verdict::Violated((Event::from_indices([0, 1]), Event::from_indices([0, 2])))
        );
    }

    #[test]
    fn additivity_examples() {
        let s = StateSpace::new(["1", "2", "3"]).unwrap();
        let mu = ProbabilityMeasure::new(&s, vec![0.2, 0.3, 0.5]).unwrap();
        assert!(Capacity::from_measure(&mu).is_additive().holds());
        assert!(!two_state(0.707107, 0.707107).is_additive().holds());
        let composed = Capacity::from_measure(&mu).compose(&DistortionFunction::identity());
        assert!(composed.is_additive().holds());
    }

    #[test]
    fn p_consistency_examples() {
        let s = StateSpace::new(["1", "2", "3"]).unwrap();
        let full = ProbabilityMeasure::new(&s, vec![0.2, 0.3, 0.5]).unwrap();
        assert!(three_state_nonsupermodular()
            .is_p_consistent(&full)
            .unwrap()
            .holds());

        let p = ProbabilityMeasure::new(&s, vec![0.5, 0.5, 0.0]).unwrap();
        // ν({1}) = 0.5 but ν({1,3}) = 0.6
        let nu = Capacity::from_table(&s, vec![0.0, 0.5, 0.5, 1.0, 0.0, 0.6, 0.5, 1.0]).unwrap();
        assert!(!nu.is_p_consistent(&p).unwrap().holds());
        assert!(Capacity::from_measure(&p)
            .is_p_consistent(&p)
            .unwrap()
            .holds());
    }

    #[test]
    fn compose_examples() {
        let nu = two_state(0.5, 0.5);
        assert_eq!(nu.compose(&DistortionFunction::identity()), nu);
        assert_eq!(
            nu.compose(&DistortionFunction::power(2.0).unwrap())
                .value(Event(1)),
            0.25
        );
        let root = nu.compose(&DistortionFunction::power(0.5).unwrap());
        assert!((root.value(Event(1)) - 0.707107).abs() < 1e-6);
    }

    #[test]
    fn setwise_dominance_examples() {
        let s = StateSpace::new(["1", "2", "3"]).unwrap();
        let p = ProbabilityMeasure::new(&s, vec![0.2, 0.3, 0.5]).unwrap();
        let base = Capacity::from_measure(&p);
        let concave = base.compose(&DistortionFunction::power(0.6).unwrap());
        assert!(base.dominates_setwise(&base).unwrap().holds());
        assert!(concave.dominates_setwise(&base).unwrap().holds());
        assert!(!base.dominates_setwise(&concave).unwrap().holds());
    }

    #[test]
    fn risk_conformity_examples() {
        let s = StateSpace::new(["1", "2", "3"]).unwrap();
        let p = ProbabilityMeasure::new(&s, vec![0.2, 0.3, 0.5]).unwrap();
        let part =
            RiskPartition::new(&s, vec![Event::from_indices([0, 1]), Event::singleton(2)]).unwrap();
        assert!(Capacity::from_measure(&p)
            .is_risk_conforming(&part, &p)
            .unwrap()
            .holds());
        let off = Capacity::from_measure(&p).compose(&DistortionFunction::power(2.0).unwrap());
        assert!(!off.is_risk_conforming(&part, &p).unwrap().holds());
    }

    #[test]
    fn counterexample_two_by_two() {
        let s = product_space(2, 2).unwrap();
        let p = ProbabilityMeasure::uniform(&s);
        let h = DistortionFunction::power(0.5).unwrap();
        let cx = construct_counterexample(2, 2, &p, &h).unwrap();
        let a0 = cx.h_partition.blocks()[0];
        assert!((cx.capacity.value(a0) - 0.5f64.sqrt()).abs() < 1e-12);
        let sum = cx.capacity.value(a0) + cx.capacity.value(a0.complement(4));
        assert!((sum - 1.414214).abs() < 1e-6);
        let g_event = cx.g_partition.blocks()[0];
        assert!((cx.capacity.value(g_event) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn counterexample_rejects_bad_inputs() {
        let s = product_space(2, 2).unwrap();
        let p = ProbabilityMeasure::uniform(&s);
        assert!(construct_counterexample(2, 2, &p, &DistortionFunction::identity()).is_err());
        let dependent = ProbabilityMeasure::new(&s, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let h = DistortionFunction::power(0.5).unwrap();
        assert!(construct_counterexample(2, 2, &dependent, &h).is_err());
    }
}
