//! Act-dependent distortions `g_X(α) = g(ν(X > x))` with `α = P(X > x)`,
//! defined on the level set `𝒟(X) = {P(X > x) : x ∈ ℝ}`.

use crate::capacity::{Verdict, EVENT_TOL};
use crate::error::{Error, Result};
use crate::models::{ChoquetModel, ModelSpec};
use crate::space::{comonotonic, Act, Event};

/// Tolerance for identifying two levels of `𝒟(X)`.
pub const LEVEL_TOL: f64 = 1e-12;

/// `g_X` restricted to `𝒟(X)`, sorted by level.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionFamilyEntry {
    pub act: Act,
    /// `(α, g_X(α))` pairs, increasing in `α`, from `(0, 0)` to `(1, 1)`.
    pub levels: Vec<(f64, f64)>,
}

impl DistortionFamilyEntry {
    pub fn alphas(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|&(a, _)| a)
    }

    /// `g_X(α)` if `α ∈ 𝒟(X)`.
    pub fn value_at(&self, alpha: f64) -> Option<f64> {
        self.levels
            .iter()
            .find(|(a, _)| (a - alpha).abs() <= LEVEL_TOL)
            .map(|&(_, v)| v)
    }
}

fn choquet_parts(m: &ModelSpec) -> Result<&ChoquetModel> {
    m.choquet_model().ok_or_else(|| {
        Error::Unsupported(format!(
            "distortion families need a Choquet model, not {}",
            m.kind()
        ))
    })
}

fn ensure_p_consistent(cm: &ChoquetModel) -> Result<()> {
    if let Some((a, b)) = cm.capacity().is_p_consistent(cm.reference())?.witness() {
        let s = cm.capacity().space();
        return Err(Error::NotPConsistent(format!(
            "ν({{{}}}) ≠ ν({{{}}}) although the events differ by a null set",
            s.event_label(*a),
            s.event_label(*b)
        )));
    }
    Ok(())
}

/// Upper sets `{X > x}` for every threshold, from `Ω` down to `∅`.
fn upper_sets(x: &Act) -> Vec<Event> {
    let mut sets = vec![x.space().full()];
    sets.extend(x.levels().into_iter().rev().map(|t| x.strictly_above(t)));
    sets
}

fn entry_unchecked(cm: &ChoquetModel, x: &Act) -> Result<DistortionFamilyEntry> {
    let p = cm.reference();
    let mut levels: Vec<(f64, f64)> = Vec::new();
    for e in upper_sets(x) {
        let alpha = p.prob(e);
        let value = cm.weights().value(e);
        match levels.iter().find(|(a, _)| (a - alpha).abs() <= LEVEL_TOL) {
            Some(&(_, v)) if (v - value).abs() > EVENT_TOL => {
                return Err(Error::NotPConsistent(format!(
                    "level {alpha} of the act maps to both {v} and {value}"
                )))
            }
            Some(_) => {}
            None => levels.push((alpha, value)),
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(DistortionFamilyEntry {
        act: x.clone(),
        levels,
    })
}

/// `g_X` on `𝒟(X)`. Requires `ν` to be `P`-consistent, which makes the
/// value independent of the threshold chosen for each level.
pub fn derive_distortion_family(m: &ModelSpec, x: &Act) -> Result<DistortionFamilyEntry> {
    let cm = choquet_parts(m)?;
    cm.capacity().space().ensure_same(x.space())?;
    ensure_p_consistent(cm)?;
    entry_unchecked(cm, x)
}

/// `∫ u(X) d(g_X∘P)`, summed over the distinct levels of `X`.
pub fn family_representation_value(m: &ModelSpec, x: &Act) -> Result<f64> {
    let cm = choquet_parts(m)?;
    let entry = derive_distortion_family(m, x)?;
    let p = cm.reference();
    let u = cm.utility();
    let levels = x.levels();
    let mut total = 0.0;
    let mut prev = 0.0;
    for (k, &level) in levels.iter().enumerate().rev() {
        // {X ≥ level} = {X > next lower level}, or Ω at the bottom
        let upper = if k == 0 {
            x.space().full()
        } else {
            x.strictly_above(levels[k - 1])
        };
        let cur = entry
            .value_at(p.prob(upper))
            .expect("upper-set level belongs to 𝒟(X)");
        total += u.eval(level)? * (cur - prev);
        prev = cur;
    }
    Ok(total)
}

/// Property (a): `A ⊆ B` implies `g_{𝟙_A} ≤ g_{𝟙_B}` on shared levels.
pub fn check_nested_monotonicity(m: &ModelSpec) -> Result<Verdict<(Event, Event)>> {
    let cm = choquet_parts(m)?;
    ensure_p_consistent(cm)?;
    let space = cm.capacity().space().clone();
    let entries: Vec<DistortionFamilyEntry> = space
        .events()
        .map(|e| entry_unchecked(cm, &Act::indicator(&space, e)?))
        .collect::<Result<_>>()?;
    for b in space.events() {
        for a in b.subsets() {
            let (ea, eb) = (&entries[a.index()], &entries[b.index()]);
            for alpha in ea.alphas() {
                if let (Some(va), Some(vb)) = (ea.value_at(alpha), eb.value_at(alpha)) {
                    if va > vb + EVENT_TOL {
                        return Ok(Verdict::Violated((a, b)));
                    }
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Property (c) over event bets: nested events are comonotonic, so their
/// entries must agree on shared levels.
pub fn check_comonotone_agreement_events(m: &ModelSpec) -> Result<Verdict<(Event, Event)>> {
    let cm = choquet_parts(m)?;
    ensure_p_consistent(cm)?;
    let space = cm.capacity().space().clone();
    let entries: Vec<DistortionFamilyEntry> = space
        .events()
        .map(|e| entry_unchecked(cm, &Act::indicator(&space, e)?))
        .collect::<Result<_>>()?;
    for b in space.events() {
        for a in b.subsets() {
            if !agree(&entries[a.index()], &entries[b.index()]) {
                return Ok(Verdict::Violated((a, b)));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Property (c) over a list of acts: every comonotonic pair agrees on shared
/// levels. The witness holds the two indices.
pub fn check_comonotone_agreement(m: &ModelSpec, acts: &[Act]) -> Result<Verdict<(usize, usize)>> {
    let entries: Vec<DistortionFamilyEntry> = acts
        .iter()
        .map(|x| derive_distortion_family(m, x))
        .collect::<Result<_>>()?;
    for i in 0..acts.len() {
        for j in i + 1..acts.len() {
            if comonotonic(&acts[i], &acts[j])? && !agree(&entries[i], &entries[j]) {
                return Ok(Verdict::Violated((i, j)));
            }
        }
    }
    Ok(Verdict::Holds)
}

fn agree(a: &DistortionFamilyEntry, b: &DistortionFamilyEntry) -> bool {
    a.levels.iter().all(|&(alpha, va)| match b.value_at(alpha) {
        Some(vb) => (va - vb).abs() <= EVENT_TOL,
        None => true,
    })
}
