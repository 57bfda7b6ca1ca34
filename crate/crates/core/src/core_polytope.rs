//! The core `{μ : μ(A) ≥ ν(A) for all A, μ(Ω) = 1}` of a capacity, its
//! vertices, exactness, and the robust (maxmin) aggregation.
//!
//! Vertices are enumerated by the double description method: start from
//! the probability simplex and cut by one core inequality at a time,
//! keeping for every vertex the set of constraints it makes tight. Two
//! vertices are adjacent when no third vertex is tight on every constraint
//! they share.

use std::cmp::Ordering;

use crate::capacity::{Capacity, Verdict};
use crate::choquet::{choquet, descending_order};
use crate::distortion::{DistortionFunction, UtilityFunction};
use crate::error::{Error, Result};
use crate::space::{Act, Event, ProbabilityMeasure};

/// Largest space handled by the core routines.
pub const MAX_CORE_STATES: usize = 8;

/// Slack of [`core_contains`].
pub const CONTAINS_TOL: f64 = 1e-10;

/// Max-norm distance under which two vertices are identified.
pub const VERTEX_TOL: f64 = 1e-9;

/// Slack used by exactness and chain tightness tests.
pub const TIGHT_TOL: f64 = 1e-9;

const SIGN_TOL: f64 = 1e-10;

/// Constraint index set: bits `0..n` are nonnegativity, bit `n + k` is the
/// `k`-th core inequality added.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Tight([u64; 5]);

impl Tight {
    const EMPTY: Tight = Tight([0; 5]);

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Tight) -> Tight {
        let mut out = [0; 5];
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.0[k] & other.0[k];
        }
        Tight(out)
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains(&self, other: &Tight) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

#[derive(Clone, Debug)]
struct Vertex {
    x: Vec<f64>,
    tight: Tight,
}

/// The core inequality system of a capacity.
#[derive(Clone, Debug)]
pub struct CorePolytope {
    nu: Capacity,
}

impl CorePolytope {
    pub fn new(nu: &Capacity) -> Result<Self> {
        nu.space().ensure_at_most(MAX_CORE_STATES)?;
        Ok(Self { nu: nu.clone() })
    }

    pub fn capacity(&self) -> &Capacity {
        &self.nu
    }

    /// Proper nonempty events with `ν(A) > 0`; the rest are implied by `μ ≥ 0`.
    pub fn binding_events(&self) -> Vec<Event> {
        let n = self.nu.space().len();
        let full = Event::full(n);
        let mut events: Vec<Event> = self
            .nu
            .space()
            .events()
            .filter(|&e| !e.is_empty() && e != full && self.nu.value(e) > 0.0)
            .collect();
        events.sort_by_key(|e| (e.len(), e.mask()));
        events
    }

    pub fn contains(&self, mu: &ProbabilityMeasure) -> Result<bool> {
        core_contains(&self.nu, mu)
    }

    /// All vertices in canonical (lexicographic) order; empty iff the core is empty.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.nu.space().len();
        let mut verts: Vec<Vertex> = (0..n)
            .map(|i| {
                let mut x = vec![0.0; n];
                x[i] = 1.0;
                let mut tight = Tight::EMPTY;
                for j in (0..n).filter(|&j| j != i) {
                    tight.set(j);
                }
                Vertex { x, tight }
            })
            .collect();

        for (k, event) in self.binding_events().into_iter().enumerate() {
            let bound = self.nu.value(event);
            let slack = |x: &[f64]| -> f64 { event.members().map(|i| x[i]).sum::<f64>() - bound };
            let id = n + k;
            let slacks: Vec<f64> = verts.iter().map(|v| slack(&v.x)).collect();
            if slacks.iter().all(|&s| s >= -SIGN_TOL) {
                for (v, &s) in verts.iter_mut().zip(&slacks) {
                    if s.abs() <= SIGN_TOL {
                        v.tight.set(id);
                    }
                }
                continue;
            }
            let pos: Vec<usize> = (0..verts.len()).filter(|&i| slacks[i] > SIGN_TOL).collect();
            let neg: Vec<usize> = (0..verts.len())
                .filter(|&i| slacks[i] < -SIGN_TOL)
                .collect();

            let mut fresh = Vec::new();
            for &p in &pos {
                for &q in &neg {
                    if !adjacent(&verts, p, q, n) {
                        continue;
                    }
                    let t = slacks[p] / (slacks[p] - slacks[q]);
                    let x: Vec<f64> = verts[p]
                        .x
                        .iter()
                        .zip(&verts[q].x)
                        .map(|(a, b)| a + t * (b - a))
                        .collect();
                    let mut tight = verts[p].tight.and(&verts[q].tight);
                    tight.set(id);
                    fresh.push(Vertex { x, tight });
                }
            }

            let mut next: Vec<Vertex> = Vec::with_capacity(verts.len() + fresh.len());
            for (mut v, &s) in verts.into_iter().zip(&slacks) {
                if s < -SIGN_TOL {
                    continue;
                }
                if s.abs() <= SIGN_TOL {
                    v.tight.set(id);
                }
                next.push(v);
            }
            for v in fresh {
                match next.iter_mut().find(|w| max_dist(&w.x, &v.x) <= VERTEX_TOL) {
                    Some(w) => {
                        let merged = Tight(std::array::from_fn(|i| w.tight.0[i] | v.tight.0[i]));
                        w.tight = merged;
                    }
                    None => next.push(v),
                }
            }
            verts = next;
            if verts.is_empty() {
                break;
            }
        }

        let mut out: Vec<Vec<f64>> = verts
            .into_iter()
            .map(|v| {
                v.x.into_iter()
                    .map(|c| if c.abs() < 1e-15 { 0.0 } else { c })
                    .collect()
            })
            .collect();
        out.sort_by(|a, b| lex_cmp(a, b));
        out.dedup_by(|a, b| max_dist(a, b) <= VERTEX_TOL);
        out
    }
}

fn adjacent(verts: &[Vertex], p: usize, q: usize, n: usize) -> bool {
    let common = verts[p].tight.and(&verts[q].tight);
    // an edge of an (n-1)-dimensional polytope needs n-2 shared constraints
    if (common.count() as usize) + 2 < n {
        return false;
    }
    !verts
        .iter()
        .enumerate()
        .any(|(r, v)| r != p && r != q && v.tight.contains(&common))
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > VERTEX_TOL {
            return x.total_cmp(y);
        }
    }
    Ordering::Equal
}

/// `μ(A) ≥ ν(A) - 1e-10` for every event.
pub fn core_contains(nu: &Capacity, mu: &ProbabilityMeasure) -> Result<bool> {
    nu.space().ensure_same(mu.space())?;
    Ok(nu
        .space()
        .events()
        .all(|e| mu.prob(e) >= nu.value(e) - CONTAINS_TOL))
}

/// Vertices of the core as probability measures, in canonical order.
pub fn core_vertices(nu: &Capacity) -> Result<Vec<ProbabilityMeasure>> {
    let poly = CorePolytope::new(nu)?;
    Ok(poly
        .vertices()
        .into_iter()
        .map(|x| measure_from(nu, x))
        .collect())
}

fn measure_from(nu: &Capacity, x: Vec<f64>) -> ProbabilityMeasure {
    let x: Vec<f64> = x.into_iter().map(|c| c.max(0.0)).collect();
    let total: f64 = x.iter().sum();
    let x = x.into_iter().map(|c| c / total).collect();
    ProbabilityMeasure::new(nu.space(), x).expect("core vertex is a probability vector")
}

/// The marginal vector of `ν` along `perm`: state `perm[i]` receives
/// `ν(perm[..=i]) - ν(perm[..i])`. It lies in the core whenever `ν` is
/// supermodular.
pub fn marginal_vector(nu: &Capacity, perm: &[usize]) -> Result<ProbabilityMeasure> {
    let n = nu.space().len();
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm
            .iter()
            .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
    {
        return Err(Error::InvalidModel(format!(
            "{perm:?} is not a permutation of 0..{n}"
        )));
    }
    let mut weights = vec![0.0; n];
    let mut upper = Event::EMPTY;
    let mut prev = 0.0;
    for &i in perm {
        upper = upper.union(Event::singleton(i));
        let cur = nu.value(upper);
        weights[i] = cur - prev;
        prev = cur;
    }
    ProbabilityMeasure::new(nu.space(), weights)
}

/// Nonempty core.
pub fn is_balanced(nu: &Capacity) -> Result<bool> {
    Ok(!CorePolytope::new(nu)?.vertices().is_empty())
}

/// Every event attains its capacity at some core element. An empty core
/// is not exact.
pub fn is_exact(nu: &Capacity) -> Result<bool> {
    Ok(exactness_witness(nu)?.holds())
}

/// Like [`is_exact`] but names the first event whose core minimum exceeds `ν`.
/// An empty core is reported against `Ω`.
pub fn exactness_witness(nu: &Capacity) -> Result<Verdict<Event>> {
    let verts = CorePolytope::new(nu)?.vertices();
    if verts.is_empty() {
        return Ok(Verdict::Violated(nu.space().full()));
    }
    for e in nu.space().events() {
        let min = verts
            .iter()
            .map(|x| e.members().map(|i| x[i]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if (min - nu.value(e)).abs() > TIGHT_TOL {
            return Ok(Verdict::Violated(e));
        }
    }
    Ok(Verdict::Holds)
}

/// Result of [`robust_value`].
#[derive(Clone, Debug)]
pub struct RobustValue {
    /// Smallest objective found over the candidate measures.
    pub value: f64,
    /// True when `ν` is supermodular, so `value` is the true minimum over
    /// the core; otherwise it is an upper bound attained at `argmin`.
    pub exact: bool,
    pub argmin: ProbabilityMeasure,
}

/// `min_{μ ∈ core(ν)} ∫ u(X) d(g∘μ)` over the core vertices and the marginal
/// vector of the ranking of `X`.
pub fn robust_value(
    u: &UtilityFunction,
    g: &DistortionFunction,
    nu: &Capacity,
    x: &Act,
) -> Result<RobustValue> {
    nu.space().ensure_same(x.space())?;
    let verts = core_vertices(nu)?;
    if verts.is_empty() {
        return Err(Error::EmptyCore);
    }
    let ux = x.try_map(|v| u.eval(v))?;
    let mut candidates = verts;
    let ranked = marginal_vector(nu, &descending_order(&ux))?;
    if core_contains(nu, &ranked)? {
        candidates.push(ranked);
    }
    let mut best: Option<(f64, ProbabilityMeasure)> = None;
    for mu in candidates {
        let v = choquet(&ux, &Capacity::from_measure(&mu).compose(g))?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, mu));
        }
    }
    let (value, argmin) = best.expect("at least one candidate");
    Ok(RobustValue {
        value,
        exact: nu.is_supermodular()?.holds(),
        argmin,
    })
}

/// Whether some core element agrees with `ν` on every event of a nested chain.
///
/// The set of such elements is a face of the core, so it is nonempty
/// exactly when it contains a vertex.
pub fn chain_attainable(nu: &Capacity, chain: &[Event]) -> Result<bool> {
    for e in chain {
        nu.space().check_event(*e)?;
    }
    for w in chain.windows(2) {
        if !w[0].is_subset(w[1]) {
            return Err(Error::ChainNotNested);
        }
    }
    let verts = CorePolytope::new(nu)?.vertices();
    Ok(attained(nu, &verts, chain))
}

fn attained(nu: &Capacity, verts: &[Vec<f64>], chain: &[Event]) -> bool {
    verts.iter().any(|x| {
        chain
            .iter()
            .all(|e| (e.members().map(|i| x[i]).sum::<f64>() - nu.value(*e)).abs() <= TIGHT_TOL)
    })
}

/// An act on which the robust value strictly exceeds the Choquet value.
#[derive(Clone, Debug)]
pub struct ConverseWitness {
    /// Nested events that no core element matches simultaneously.
    pub chain: Vec<Event>,
    pub act: Act,
    pub robust: f64,
    pub choquet: f64,
}

impl ConverseWitness {
    pub fn gap(&self) -> f64 {
        self.robust - self.choquet
    }
}

/// For balanced, non-supermodular `ν`, finds a chain `A₁ ⊆ … ⊆ A_k` not
/// attained by any core element and the act whose utility counts the chain
/// events containing each state. For `k = 2` and a normalized `u` this is
/// `c·𝟙_A + 𝟙_{B∖A}` with `u(c) = 2`.
///
/// Returns `None` when `ν` is supermodular.
pub fn converse_witness(
    u: &UtilityFunction,
    g: &DistortionFunction,
    nu: &Capacity,
) -> Result<Option<ConverseWitness>> {
    if nu.is_supermodular()?.holds() {
        return Ok(None);
    }
    let verts = CorePolytope::new(nu)?.vertices();
    if verts.is_empty() {
        return Err(Error::EmptyCore);
    }
    let s = nu.space();
    let mut chain = None;
    'pairs: for b in s.events() {
        for a in b.subsets() {
            if !a.is_empty() && a != b && !attained(nu, &verts, &[a, b]) {
                chain = Some(vec![a, b]);
                break 'pairs;
            }
        }
    }
    if chain.is_none() {
        chain = maximal_chains(s.len()).find(|c| !attained(nu, &verts, c));
    }
    let Some(chain) = chain else {
        return Ok(None);
    };

    let k = chain.len();
    let (u0, step) = {
        let (rlo, rhi) = u.range();
        if u.is_normalized() && rlo <= 0.0 && rhi >= k as f64 {
            (0.0, 1.0)
        } else {
            let (lo, hi) = crate::sampling::payoff_range(u);
            let (ulo, uhi) = (u.eval(lo)?, u.eval(hi)?);
            (ulo, (uhi - ulo) / k as f64)
        }
    };
    let payoff = (0..s.len())
        .map(|i| {
            let count = chain.iter().filter(|e| e.contains(i)).count();
            u.inverse(u0 + step * count as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let act = Act::new(s, payoff)?;
    let ux = act.try_map(|v| u.eval(v))?;
    Ok(Some(ConverseWitness {
        robust: robust_value(u, g, nu, &act)?.value,
        choquet: choquet(&ux, &nu.compose(g))?,
        chain,
        act,
    }))
}

/// Chains `{π(1)} ⊆ {π(1), π(2)} ⊆ …` over all permutations `π`.
fn maximal_chains(n: usize) -> impl Iterator<Item = Vec<Event>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut first = true;
    std::iter::from_fn(move || {
        if !first && !next_permutation(&mut perm) {
            return None;
        }
        first = false;
        let mut acc = Event::EMPTY;
        Some(
            perm[..n.saturating_sub(1)]
                .iter()
                .map(|&i| {
                    acc = acc.union(Event::singleton(i));
                    acc
                })
                .collect(),
        )
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
