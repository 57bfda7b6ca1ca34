//! Seeded random generators for measures, capacities, functions, acts and
//! models. Every generator takes the RNG by reference, so a single seed
//! fixes a whole experiment.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::capacity::Capacity;
use crate::distortion::{DistortionFunction, UtilityFunction};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::space::{Act, Event, ProbabilityMeasure, RiskPartition, StateSpace};

/// Largest magnitude of a sampled payoff.
pub const PAYOFF_BOUND: f64 = 3.0;

fn exp_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3)
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// A measure with every state charged.
pub fn random_measure<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
) -> Result<ProbabilityMeasure> {
    ProbabilityMeasure::new(space, exp_weights(rng, space.len()))
}

/// A measure in which each state is null with probability `null_rate`; at
/// least one state keeps positive mass.
pub fn random_measure_with_nulls<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    null_rate: f64,
) -> Result<ProbabilityMeasure> {
    let n = space.len();
    let keep = rng.gen_range(0..n);
    let mut w = exp_weights(rng, n);
    for (i, wi) in w.iter_mut().enumerate() {
        if i != keep && rng.gen_bool(null_rate) {
            *wi = 0.0;
        }
    }
    let total: f64 = w.iter().sum();
    ProbabilityMeasure::new(space, w.into_iter().map(|x| x / total).collect())
}

/// A partition into a random number of nonempty blocks.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, space: &StateSpace) -> Result<RiskPartition> {
    let n = space.len();
    let k = rng.gen_range(1..=n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut blocks = vec![Event::EMPTY; k];
    for (pos, &i) in order.iter().enumerate() {
        let b = if pos < k { pos } else { rng.gen_range(0..k) };
        blocks[b] = blocks[b].union(Event::singleton(i));
    }
    RiskPartition::new(space, blocks)
}

/// A partition with at least two blocks and a measure under which some
/// union of blocks has probability exactly one half.
pub fn random_partition_with_half<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
) -> Result<(RiskPartition, ProbabilityMeasure, Event)> {
    let n = space.len();
    if n < 2 {
        return Err(Error::InvalidSpace(
            "a half-probability event needs two states".into(),
        ));
    }
    let part = loop {
        let part = random_partition(rng, space)?;
        if part.blocks().len() >= 2 {
            break part;
        }
    };
    let blocks = part.blocks();
    let cut = rng.gen_range(1..blocks.len());
    let mut shuffled = blocks.to_vec();
    shuffled.shuffle(rng);
    let half = shuffled[..cut]
        .iter()
        .fold(Event::EMPTY, |a, &b| a.union(b));
    let raw = exp_weights(rng, n);
    let mass_in: f64 = half.members().map(|i| raw[i]).sum();
    let mass_out: f64 = 1.0 - mass_in;
    let w: Vec<f64> = (0..n)
        .map(|i| {
            if half.contains(i) {
                0.5 * raw[i] / mass_in
            } else {
                0.5 * raw[i] / mass_out
            }
        })
        .collect();
    let p = ProbabilityMeasure::new(space, w)?;
    Ok((part, p, half))
}

/// Replaces each value by the maximum over its subsets, then builds the
/// capacity; `values[0]` and the last entry are reset to 0 and 1.
pub fn monotone_closure(space: &StateSpace, mut values: Vec<f64>) -> Result<Capacity> {
    let full = values.len() - 1;
    values[0] = 0.0;
    values[full] = 1.0;
    for mask in 1..values.len() {
        let e = Event(mask as u32);
        let mut best = values[mask];
        for i in e.members() {
            best = best.max(values[e.difference(Event::singleton(i)).index()]);
        }
        values[mask] = best.min(1.0);
    }
    Capacity::from_table(space, values)
}

/// A monotone capacity with independent uniform draws before closure.
pub fn random_capacity<R: Rng + ?Sized>(rng: &mut R, space: &StateSpace) -> Result<Capacity> {
    let values = space.events().map(|_| rng.gen::<f64>()).collect();
    monotone_closure(space, values)
}

fn unanimity(space: &StateSpace, t: Event) -> Vec<f64> {
    space
        .events()
        .map(|e| if t.is_subset(e) { 1.0 } else { 0.0 })
        .collect()
}

/// A supermodular capacity: a convex mixture of convex distortions of
/// random measures and of unanimity games `A ↦ 𝟙[T ⊆ A]`. Each term is
/// supermodular, hence so is the mixture; the result is verified.
pub fn random_supermodular_capacity<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
) -> Result<Capacity> {
    let terms = rng.gen_range(1..=3);
    let mut values = vec![0.0; space.event_count()];
    let weights = exp_weights(rng, terms);
    for w in weights {
        let term: Vec<f64> = if rng.gen_bool(0.7) {
            let mu = random_measure(rng, space)?;
            let f = random_convex_distortion(rng)?;
            space
                .events()
                .map(|e| f.eval(mu.prob(e)).unwrap_or(1.0))
                .collect()
        } else {
            let t = Event(rng.gen_range(1..space.event_count() as u32));
            unanimity(space, t)
        };
        for (v, t) in values.iter_mut().zip(term) {
            *v += w * t;
        }
    }
    let full = values.len() - 1;
    values[full] = 1.0;
    let nu = Capacity::from_table(space, values)?;
    if !nu.is_supermodular()?.holds() {
        return Err(Error::Degenerate(
            "sampled capacity failed the supermodularity check".into(),
        ));
    }
    Ok(nu)
}

/// A submodular capacity: the conjugate of a supermodular one.
pub fn random_submodular_capacity<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
) -> Result<Capacity> {
    Ok(random_supermodular_capacity(rng, space)?.dual())
}

/// Blocks fully charged by `A` up to null states, and blocks `A` charges.
fn p_inner_outer(part: &RiskPartition, p: &ProbabilityMeasure, a: Event) -> (Event, Event) {
    let mut inner = Event::EMPTY;
    let mut outer = Event::EMPTY;
    for &b in part.blocks() {
        if p.prob(b.difference(a)) == 0.0 {
            inner = inner.union(b);
        }
        if p.prob(b.intersection(a)) > 0.0 {
            outer = outer.union(b);
        }
    }
    (inner, outer)
}

/// The lower envelope `A ↦ P(inner(A))`, with inner blocks taken up to
/// null states. It is monotone, risk conforming and `P`-consistent, and
/// lies below every risk-conforming capacity that is `P`-consistent.
pub fn inner_measure(part: &RiskPartition, p: &ProbabilityMeasure) -> Result<Capacity> {
    let space = p.space();
    monotone_closure(
        space,
        space
            .events()
            .map(|e| p.prob(p_inner_outer(part, p, e).0))
            .collect(),
    )
}

/// A capacity that agrees with `P` on the partition's algebra: each event
/// gets a random point between the mass of the blocks it covers and the
/// mass of the blocks it meets. With `p_consistent` the draw depends on
/// the event only through its non-null part.
pub fn random_risk_conforming_capacity<R: Rng + ?Sized>(
    rng: &mut R,
    part: &RiskPartition,
    p: &ProbabilityMeasure,
    p_consistent: bool,
) -> Result<Capacity> {
    let space = p.space();
    let null = p.null_states();
    let t: Vec<f64> = space.events().map(|_| rng.gen::<f64>()).collect();
    let values = space
        .events()
        .map(|e| {
            let key = if p_consistent { e.difference(null) } else { e };
            let (inner, outer) = if p_consistent {
                p_inner_outer(part, p, key)
            } else {
                (part.inner(e), part.outer(e))
            };
            let (lo, hi) = (p.prob(inner), p.prob(outer));
            lo + t[key.index()] * (hi - lo)
        })
        .collect();
    monotone_closure(space, values)
}

/// `θ ν + (1 - θ) P(inner(·))`, which lies below `ν` event-wise and stays
/// risk conforming and `P`-consistent when `ν` is.
pub fn dominated_capacity(
    nu: &Capacity,
    part: &RiskPartition,
    p: &ProbabilityMeasure,
    theta: f64,
) -> Result<Capacity> {
    nu.mix(&inner_measure(part, p)?, theta)
}

/// `x^γ` with `γ ∈ [1, 3]` or a convex piecewise-linear map.
pub fn random_convex_distortion<R: Rng + ?Sized>(rng: &mut R) -> Result<DistortionFunction> {
    if rng.gen_bool(0.6) {
        DistortionFunction::power(rng.gen_range(1.0..3.0))
    } else {
        random_pwl_distortion(rng, true)
    }
}

/// `x^γ` with `γ ∈ [0.3, 1]` or a concave piecewise-linear map.
pub fn random_concave_distortion<R: Rng + ?Sized>(rng: &mut R) -> Result<DistortionFunction> {
    if rng.gen_bool(0.6) {
        DistortionFunction::power(rng.gen_range(0.3..1.0))
    } else {
        random_pwl_distortion(rng, false)
    }
}

/// A strictly concave distortion, suitable as `h` in the two-coordinate
/// construction.
pub fn random_strictly_concave_distortion<R: Rng + ?Sized>(
    rng: &mut R,
) -> Result<DistortionFunction> {
    loop {
        let h = random_concave_distortion(rng)?;
        if h.is_strictly_concave() {
            return Ok(h);
        }
    }
}

fn random_pwl_distortion<R: Rng + ?Sized>(rng: &mut R, convex: bool) -> Result<DistortionFunction> {
    let k = rng.gen_range(2..=4);
    let mut slopes: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..3.0)).collect();
    slopes.sort_by(f64::total_cmp);
    if !convex {
        slopes.reverse();
    }
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(0.05..0.95)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 0.02);
    let xs: Vec<f64> = std::iter::once(0.0)
        .chain(cuts)
        .chain(std::iter::once(1.0))
        .collect();
    let mut ys = vec![0.0];
    for (w, s) in xs.windows(2).zip(&slopes) {
        ys.push(ys.last().unwrap() + s * (w[1] - w[0]));
    }
    let top = *ys.last().unwrap();
    let points = xs
        .into_iter()
        .zip(ys)
        .map(|(x, y)| (x, if x == 1.0 { 1.0 } else { y / top }))
        .collect();
    DistortionFunction::piecewise_linear(points)
}

/// A strictly increasing distortion of any shape.
pub fn random_distortion<R: Rng + ?Sized>(rng: &mut R) -> Result<DistortionFunction> {
    match rng.gen_range(0..4) {
        0 => DistortionFunction::power(rng.gen_range(0.3..3.0)),
        1 => random_convex_distortion(rng),
        2 => random_concave_distortion(rng),
        _ => {
            let mut xs: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..0.95)).collect();
            let mut ys: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..0.95)).collect();
            xs.sort_by(f64::total_cmp);
            ys.sort_by(f64::total_cmp);
            xs.dedup_by(|a, b| (*a - *b).abs() < 0.02);
            ys.truncate(xs.len());
            ys.dedup_by(|a, b| (*a - *b).abs() < 0.02);
            xs.truncate(ys.len());
            let points = std::iter::once((0.0, 0.0))
                .chain(xs.into_iter().zip(ys))
                .chain(std::iter::once((1.0, 1.0)))
                .collect();
            DistortionFunction::piecewise_linear(points)
        }
    }
}

/// A strictly increasing utility normalized to `u(0) = 0`, `u(1) = 1`.
pub fn random_utility<R: Rng + ?Sized>(rng: &mut R) -> Result<UtilityFunction> {
    let u = match rng.gen_range(0..4) {
        0 => UtilityFunction::identity(),
        1 => UtilityFunction::power(rng.gen_range(0.3..2.5), 0.0, f64::INFINITY)?,
        2 => {
            UtilityFunction::exponential(rng.gen_range(0.5..3.0), f64::NEG_INFINITY, f64::INFINITY)?
        }
        _ => {
            let k = rng.gen_range(2..=4);
            let mut xs: Vec<f64> = (0..k)
                .map(|_| rng.gen_range(-PAYOFF_BOUND..PAYOFF_BOUND))
                .collect();
            xs.extend([-PAYOFF_BOUND - 1.0, 0.0, PAYOFF_BOUND + 1.0]);
            xs.sort_by(f64::total_cmp);
            xs.dedup_by(|a, b| (*a - *b).abs() < 0.05);
            let mut y = 0.0;
            let mut points = vec![(xs[0], y)];
            for w in xs.windows(2) {
                y += rng.gen_range(0.2..2.0) * (w[1] - w[0]);
                points.push((w[1], y));
            }
            UtilityFunction::piecewise_linear(points)?
        }
    };
    u.normalized()
}

/// A strictly convex utility `x^γ` with `γ > 1` on `[0, ∞)`.
pub fn random_convex_utility<R: Rng + ?Sized>(rng: &mut R) -> Result<UtilityFunction> {
    UtilityFunction::power(rng.gen_range(1.5..3.0), 0.0, f64::INFINITY)
}

/// A concave utility: identity, a power below one, or exponential.
pub fn random_concave_utility<R: Rng + ?Sized>(rng: &mut R) -> Result<UtilityFunction> {
    let u = match rng.gen_range(0..3) {
        0 => UtilityFunction::identity(),
        1 => UtilityFunction::power(rng.gen_range(0.3..1.0), 0.0, f64::INFINITY)?,
        _ => {
            UtilityFunction::exponential(rng.gen_range(0.5..3.0), f64::NEG_INFINITY, f64::INFINITY)?
        }
    };
    u.normalized()
}

/// The payoff interval acts are drawn from: the utility's domain cut to
/// `[-3, 3]`, keeping only its lower half so that upward shifts stay
/// inside the domain.
pub fn payoff_box(u: &UtilityFunction) -> (f64, f64) {
    let (lo, hi) = u.domain();
    let lo = lo.max(-PAYOFF_BOUND);
    let hi = hi.min(PAYOFF_BOUND);
    (lo, lo + 0.5 * (hi - lo))
}

/// The full sampling interval of `u`, before halving.
pub fn payoff_range(u: &UtilityFunction) -> (f64, f64) {
    let (lo, hi) = u.domain();
    (lo.max(-PAYOFF_BOUND), hi.min(PAYOFF_BOUND))
}

/// Independent uniform payoffs in `[lo, hi]`.
pub fn random_act_in<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    lo: f64,
    hi: f64,
) -> Result<Act> {
    Act::new(
        space,
        (0..space.len()).map(|_| rng.gen_range(lo..=hi)).collect(),
    )
}

/// A payoff per block, uniform in `[lo, hi]`.
pub fn random_measurable_act<R: Rng + ?Sized>(
    rng: &mut R,
    part: &RiskPartition,
    lo: f64,
    hi: f64,
) -> Result<Act> {
    let space = part.space();
    let per_block: Vec<f64> = part
        .blocks()
        .iter()
        .map(|_| rng.gen_range(lo..=hi))
        .collect();
    Act::new(
        space,
        (0..space.len())
            .map(|i| per_block[part.block_of(i)])
            .collect(),
    )
}

/// Acts sharing one random ranking of the states, so every pair is
/// comonotonic. Ties are introduced with probability 0.2 per rank.
pub fn random_comonotone_acts<R: Rng + ?Sized>(
    rng: &mut R,
    space: &StateSpace,
    count: usize,
    lo: f64,
    hi: f64,
) -> Result<Vec<Act>> {
    let n = space.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (0..count)
        .map(|_| {
            let mut vals: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
            vals.sort_by(|a, b| b.total_cmp(a));
            for k in 1..n {
                if rng.gen_bool(0.2) {
                    vals[k] = vals[k - 1];
                }
            }
            let mut payoff = vec![0.0; n];
            for (rank, &state) in order.iter().enumerate() {
                payoff[state] = vals[rank];
            }
            Act::new(space, payoff)
        })
        .collect()
}

/// Options for [`random_crdu_model`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ModelOptions {
    /// Guarantee a union of blocks with probability one half.
    pub with_half: bool,
    /// Allow null states and make `ν` consistent with them.
    pub p_consistent: bool,
    /// Restrict to concave utilities.
    pub concave_utility: bool,
}

/// A random CRDU model on `n` states.
pub fn random_crdu_model<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    opts: ModelOptions,
) -> Result<ModelSpec> {
    let space = StateSpace::indexed(n)?;
    let (part, p) = if opts.with_half {
        let (part, p, _) = random_partition_with_half(rng, &space)?;
        (part, p)
    } else if opts.p_consistent {
        (
            random_partition(rng, &space)?,
            random_measure_with_nulls(rng, &space, 0.3)?,
        )
    } else {
        (random_partition(rng, &space)?, random_measure(rng, &space)?)
    };
    let nu = random_risk_conforming_capacity(rng, &part, &p, opts.p_consistent)?;
    let u = if opts.concave_utility {
        random_concave_utility(rng)?
    } else {
        random_utility(rng)?
    };
    ModelSpec::crdu(u, random_distortion(rng)?, nu, part, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let s = StateSpace::indexed(n).unwrap();
            let sup = random_supermodular_capacity(&mut rng, &s).unwrap();
            assert!(sup.is_supermodular().unwrap().holds());
            assert!(random_submodular_capacity(&mut rng, &s)
                .unwrap()
                .is_submodular()
                .unwrap()
                .holds());
            let part = random_partition(&mut rng, &s).unwrap();
            let p = random_measure_with_nulls(&mut rng, &s, 0.4).unwrap();
            let nu = random_risk_conforming_capacity(&mut rng, &part, &p, true).unwrap();
            assert!(nu.is_risk_conforming(&part, &p).unwrap().holds());
            assert!(nu.is_p_consistent(&p).unwrap().holds());
            let low = dominated_capacity(&nu, &part, &p, 0.4).unwrap();
            assert!(nu.dominates_setwise(&low).unwrap().holds());
            assert!(low.is_risk_conforming(&part, &p).unwrap().holds());
            assert!(low.is_p_consistent(&p).unwrap().holds());
        }
    }

    #[test]
    fn half_event_has_half_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=6 {
            let s = StateSpace::indexed(n).unwrap();
            let (part, p, half) = random_partition_with_half(&mut rng, &s).unwrap();
            assert!(part.contains_event(half));
            assert!((p.prob(half) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn functions_have_their_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            assert!(random_convex_distortion(&mut rng).unwrap().is_convex());
            assert!(random_concave_distortion(&mut rng).unwrap().is_concave());
            assert!(random_distortion(&mut rng)
                .unwrap()
                .is_strictly_increasing());
            assert!(random_utility(&mut rng).unwrap().is_normalized());
            assert!(random_concave_utility(&mut rng).unwrap().is_concave());
        }
    }

    #[test]
    fn comonotone_acts_are_comonotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = StateSpace::indexed(5).unwrap();
        let acts = random_comonotone_acts(&mut rng, &s, 4, -1.0, 2.0).unwrap();
        for a in &acts {
            for b in &acts {
                assert!(crate::space::comonotonic(a, b).unwrap());
            }
        }
    }
}
