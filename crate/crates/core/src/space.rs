//! Finite state spaces, events, acts, probability measures and risk partitions,
//! together with the order relations on acts (pointwise, almost-sure and
//! stochastic dominance, comonotonicity).
//!
//! Everything here is finite: the state space carries at most
//! [`MAX_STATES`] labelled states and events are bitmasks over state indices.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest state space accepted by the exhaustive (2^|Ω|) routines.
pub const MAX_STATES: usize = 16;

/// Slack used when checking that weights sum to one.
pub const MEASURE_TOL: f64 = 1e-12;

/// An ordered, finite set of distinct named states.
///
/// Cloning is cheap; clones compare equal to the original.
#[derive(Clone)]
pub struct StateSpace {
    labels: Arc<[String]>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSpace("state space is empty".into()));
        }
        if labels.len() > MAX_STATES {
            return Err(Error::SpaceTooLarge {
                size: labels.len(),
                max: MAX_STATES,
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(',') {
                return Err(Error::InvalidSpace(format!(
                    "label {l:?} must be nonempty and free of commas"
                )));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidSpace(format!("duplicate label {l:?}")));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// A space with labels `s0, s1, ...`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("s{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Number of events, `2^|Ω|`.
    pub fn event_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn full(&self) -> Event {
        Event::full(self.len())
    }

    /// Iterates over every event in increasing bitmask order.
    pub fn events(&self) -> impl Iterator<Item = Event> {
        (0..self.event_count() as u32).map(Event)
    }

    /// Canonical textual form: member labels in state order, comma-joined.
    pub fn event_label(&self, e: Event) -> String {
        e.members()
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses a comma-joined list of labels. The empty string is the empty event.
    pub fn parse_event(&self, text: &str) -> Result<Event> {
        let text = text.trim();
        if text.is_empty() || text == "∅" {
            return Ok(Event::EMPTY);
        }
        if text == "Ω" {
            return Ok(self.full());
        }
        let mut mask = 0u32;
        for part in text.split(',') {
            let part = part.trim();
            let i = self
                .index_of(part)
                .ok_or_else(|| Error::InvalidSpace(format!("unknown state label {part:?}")))?;
            if mask & (1 << i) != 0 {
                return Err(Error::InvalidSpace(format!(
                    "label {part:?} repeated in event {text:?}"
                )));
            }
            mask |= 1 << i;
        }
        Ok(Event(mask))
    }

    pub(crate) fn check_event(&self, e: Event) -> Result<()> {
        if e.0 & !self.full().0 != 0 {
            return Err(Error::InvalidSpace(format!(
                "event mask {:#b} refers to states outside a space of size {}",
                e.0,
                self.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn ensure_same(&self, other: &StateSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub(crate) fn ensure_at_most(&self, max: usize) -> Result<()> {
        if self.len() > max {
            Err(Error::SpaceTooLarge {
                size: self.len(),
                max,
            })
        } else {
            Ok(())
        }
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for StateSpace {}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A subset of states, stored as a bitmask over state indices.
///
/// Events do not carry their space; operations that combine an event with a
/// space-bound object validate the mask against that object's space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Event(pub u32);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub fn full(n: usize) -> Event {
        if n >= 32 {
            Event(u32::MAX)
        } else {
            Event((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Event {
        Event(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Event {
        Event(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    pub fn intersection(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn difference(self, other: Event) -> Event {
        Event(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Event) -> Event {
        Event(self.0 ^ other.0)
    }

    pub fn complement(self, n: usize) -> Event {
        Event(!self.0 & Event::full(n).0)
    }

    pub fn is_subset(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    /// Every subset of this event, including the empty set and itself.
    pub fn subsets(self) -> impl Iterator<Item = Event> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(Event(cur))
        })
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// A bounded payoff assignment, one finite real per state.
#[derive(Clone, Debug, PartialEq)]
pub struct Act {
    space: StateSpace,
    payoff: Vec<f64>,
}

impl Act {
    pub fn new(space: &StateSpace, payoff: Vec<f64>) -> Result<Self> {
        if payoff.len() != space.len() {
            return Err(Error::InvalidAct(format!(
                "{} payoffs given for {} states",
                payoff.len(),
                space.len()
            )));
        }
        if let Some(x) = payoff.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidAct(format!("payoff {x} is not finite")));
        }
        Ok(Self {
            space: space.clone(),
            payoff,
        })
    }

    pub fn constant(space: &StateSpace, c: f64) -> Result<Self> {
        Self::new(space, vec![c; space.len()])
    }

    /// The binary act paying `x` on `event` and `y` elsewhere.
    pub fn binary(space: &StateSpace, x: f64, event: Event, y: f64) -> Result<Self> {
        space.check_event(event)?;
        let payoff = (0..space.len())
            .map(|i| if event.contains(i) { x } else { y })
            .collect();
        Self::new(space, payoff)
    }

    pub fn indicator(space: &StateSpace, event: Event) -> Result<Self> {
        Self::binary(space, 1.0, event, 0.0)
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoff
    }

    pub fn at(&self, state: usize) -> f64 {
        self.payoff[state]
    }

    /// Sup-norm, `max |X(ω)|`.
    pub fn norm(&self) -> f64 {
        self.payoff.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.payoff.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.payoff
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.payoff.iter().all(|&x| x == self.payoff[0])
    }

    /// The upper level set `{X > x}`.
    pub fn strictly_above(&self, x: f64) -> Event {
        Event::from_indices((0..self.payoff.len()).filter(|&i| self.payoff[i] > x))
    }

    pub fn map<F: FnMut(f64) -> f64>(&self, f: F) -> Result<Act> {
        Act::new(&self.space, self.payoff.iter().copied().map(f).collect())
    }

    pub fn try_map<F: FnMut(f64) -> Result<f64>>(&self, f: F) -> Result<Act> {
        let payoff = self.payoff.iter().copied().map(f).collect::<Result<_>>()?;
        Act::new(&self.space, payoff)
    }

    pub fn zip_with<F: FnMut(f64, f64) -> f64>(&self, other: &Act, mut f: F) -> Result<Act> {
        self.space.ensure_same(&other.space)?;
        let payoff = self
            .payoff
            .iter()
            .zip(&other.payoff)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Act::new(&self.space, payoff)
    }

    pub fn add(&self, other: &Act) -> Result<Act> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn shift(&self, c: f64) -> Result<Act> {
        self.map(|x| x + c)
    }

    pub fn scale(&self, k: f64) -> Result<Act> {
        self.map(|x| k * x)
    }

    /// `λX + (1-λ)Y`.
    pub fn convex_mix(&self, other: &Act, lambda: f64) -> Result<Act> {
        self.zip_with(other, |a, b| lambda * a + (1.0 - lambda) * b)
    }

    /// Distinct payoff values in increasing order.
    pub fn levels(&self) -> Vec<f64> {
        let mut v = self.payoff.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// A probability measure on a finite space; null states are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityMeasure {
    space: StateSpace,
    weight: Vec<f64>,
}

impl ProbabilityMeasure {
    pub fn new(space: &StateSpace, weight: Vec<f64>) -> Result<Self> {
        if weight.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights given for {} states",
                weight.len(),
                space.len()
            )));
        }
        if let Some(w) = weight.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "weight {w} is negative or not finite"
            )));
        }
        let total: f64 = weight.iter().sum();
        if (total - 1.0).abs() > MEASURE_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            space: space.clone(),
            weight,
        })
    }

    pub fn uniform(space: &StateSpace) -> Self {
        let n = space.len();
        Self {
            space: space.clone(),
            weight: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on one state.
    pub fn dirac(space: &StateSpace, state: usize) -> Self {
        let mut weight = vec![0.0; space.len()];
        weight[state] = 1.0;
        Self {
            space: space.clone(),
            weight,
        }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    pub fn weight(&self, state: usize) -> f64 {
        self.weight[state]
    }

    pub fn prob(&self, e: Event) -> f64 {
        e.members()
            .filter(|&i| i < self.weight.len())
            .map(|i| self.weight[i])
            .sum()
    }

    /// States carrying zero weight.
    pub fn null_states(&self) -> Event {
        Event::from_indices((0..self.weight.len()).filter(|&i| self.weight[i] == 0.0))
    }

    pub fn expectation(&self, act: &Act) -> Result<f64> {
        self.space.ensure_same(act.space())?;
        Ok(self
            .weight
            .iter()
            .zip(act.payoffs())
            .map(|(w, x)| w * x)
            .sum())
    }
}

/// A partition of the states into nonempty disjoint blocks; the unions of
/// blocks form the algebra of unambiguous (risk) events.
#[derive(Clone, Debug, PartialEq)]
pub struct RiskPartition {
    space: StateSpace,
    blocks: Vec<Event>,
}

impl RiskPartition {
    pub fn new(space: &StateSpace, blocks: Vec<Event>) -> Result<Self> {
        let mut seen = Event::EMPTY;
        for &b in &blocks {
            space.check_event(b)?;
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !b.intersection(seen).is_empty() {
                return Err(Error::InvalidPartition(format!(
                    "blocks overlap on {}",
                    space.event_label(b.intersection(seen))
                )));
            }
            seen = seen.union(b);
        }
        if seen != space.full() {
            return Err(Error::InvalidPartition(format!(
                "blocks miss states {}",
                space.event_label(space.full().difference(seen))
            )));
        }
        Ok(Self {
            space: space.clone(),
            blocks,
        })
    }

    /// Every state in its own block: every act is measurable.
    pub fn finest(space: &StateSpace) -> Self {
        Self {
            space: space.clone(),
            blocks: (0..space.len()).map(Event::singleton).collect(),
        }
    }

    /// The single block Ω: only constants are measurable.
    pub fn trivial(space: &StateSpace) -> Self {
        Self {
            space: space.clone(),
            blocks: vec![space.full()],
        }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[Event] {
        &self.blocks
    }

    pub fn block_of(&self, state: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(state))
            .expect("partition covers every state")
    }

    /// True iff `e` is a union of blocks.
    pub fn contains_event(&self, e: Event) -> bool {
        self.blocks
            .iter()
            .all(|&b| b.is_subset(e) || b.intersection(e).is_empty())
    }

    /// All unions of blocks, `2^(#blocks)` events.
    pub fn algebra(&self) -> Vec<Event> {
        let k = self.blocks.len();
        (0..1u32 << k)
            .map(|sel| {
                Event::from_indices((0..k).filter(|j| sel & (1 << j) != 0))
                    .members()
                    .fold(Event::EMPTY, |acc, j| acc.union(self.blocks[j]))
            })
            .collect()
    }

    /// Union of the blocks contained in `e`.
    pub fn inner(&self, e: Event) -> Event {
        self.blocks
            .iter()
            .filter(|b| b.is_subset(e))
            .fold(Event::EMPTY, |acc, &b| acc.union(b))
    }

    /// Union of the blocks meeting `e`.
    pub fn outer(&self, e: Event) -> Event {
        self.blocks
            .iter()
            .filter(|b| !b.intersection(e).is_empty())
            .fold(Event::EMPTY, |acc, &b| acc.union(b))
    }
}

/// The law of an act under a measure: strictly increasing support with the
/// matching probabilities. Zero-probability atoms are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub support: Vec<f64>,
    pub prob: Vec<f64>,
}

impl Distribution {
    /// `μ(X > x)` read off the law.
    pub fn survival(&self, x: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.prob)
            .filter(|(v, _)| **v > x)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn approx_eq(&self, other: &Distribution, tol: f64) -> bool {
        self.support.len() == other.support.len()
            && self
                .support
                .iter()
                .zip(&other.support)
                .all(|(a, b)| (a - b).abs() <= tol)
            && self
                .prob
                .iter()
                .zip(&other.prob)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// True iff the act is constant on every block of the partition.
pub fn is_measurable(act: &Act, part: &RiskPartition) -> Result<bool> {
    act.space().ensure_same(part.space())?;
    Ok(part.blocks().iter().all(|b| {
        let mut members = b.members();
        let first = act.at(members.next().expect("blocks are nonempty"));
        members.all(|i| act.at(i) == first)
    }))
}

pub fn distribution(act: &Act, mu: &ProbabilityMeasure) -> Result<Distribution> {
    act.space().ensure_same(mu.space())?;
    let mut pairs: Vec<(f64, f64)> = act
        .payoffs()
        .iter()
        .zip(mu.weights())
        .filter(|(_, &w)| w > 0.0)
        .map(|(&x, &w)| (x, w))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut support: Vec<f64> = Vec::new();
    let mut prob: Vec<f64> = Vec::new();
    for (x, w) in pairs {
        match support.last() {
            Some(&last) if last == x => *prob.last_mut().unwrap() += w,
            _ => {
                support.push(x);
                prob.push(w);
            }
        }
    }
    Ok(Distribution { support, prob })
}

fn merged_breakpoints(x: &Act, y: &Act) -> Vec<f64> {
    let mut pts: Vec<f64> = x.payoffs().iter().chain(y.payoffs()).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// First-order stochastic dominance under `mu`: `μ(X>x) ≥ μ(Y>x)` for all x.
///
/// Survival functions are right-continuous steps that only move at payoff
/// values, so checking the merged breakpoints is exact.
pub fn fsd_geq(x: &Act, y: &Act, mu: &ProbabilityMeasure) -> Result<bool> {
    x.space().ensure_same(y.space())?;
    x.space().ensure_same(mu.space())?;
    Ok(merged_breakpoints(x, y)
        .into_iter()
        .all(|t| mu.prob(x.strictly_above(t)) >= mu.prob(y.strictly_above(t)) - MEASURE_TOL))
}

fn lower_partial_moment(act: &Act, mu: &ProbabilityMeasure, t: f64) -> f64 {
    act.payoffs()
        .iter()
        .zip(mu.weights())
        .map(|(&x, &w)| w * (t - x).max(0.0))
        .sum()
}

/// Second-order (increasing concave) dominance under `mu`, via
/// `E[(t-X)+] ≤ E[(t-Y)+]` at every merged breakpoint `t`.
pub fn ssd_geq(x: &Act, y: &Act, mu: &ProbabilityMeasure) -> Result<bool> {
    x.space().ensure_same(y.space())?;
    x.space().ensure_same(mu.space())?;
    Ok(merged_breakpoints(x, y)
        .into_iter()
        .all(|t| lower_partial_moment(x, mu, t) <= lower_partial_moment(y, mu, t) + MEASURE_TOL))
}

/// Almost-sure dominance. Non-strict: `μ(X ≥ Y) = 1`; strict: `μ(X > Y) = 1`.
pub fn as_dominates(x: &Act, y: &Act, mu: &ProbabilityMeasure, strict: bool) -> Result<bool> {
    x.space().ensure_same(y.space())?;
    x.space().ensure_same(mu.space())?;
    Ok((0..x.space().len()).all(|i| {
        mu.weight(i) == 0.0
            || if strict {
                x.at(i) > y.at(i)
            } else {
                x.at(i) >= y.at(i)
            }
    }))
}

pub fn comonotonic(x: &Act, y: &Act) -> Result<bool> {
    x.space().ensure_same(y.space())?;
    let n = x.space().len();
    for i in 0..n {
        for j in i + 1..n {
            if (x.at(i) - x.at(j)) * (y.at(i) - y.at(j)) < 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
