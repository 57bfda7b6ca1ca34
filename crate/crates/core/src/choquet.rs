//! The Choquet integral of a finite act against a capacity.

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::space::{comonotonic, Act, Event};

/// Tolerance of [`comonotone_additivity_check`].
pub const COMONOTONE_TOL: f64 = 1e-9;

/// Smallest grid accepted by [`choquet_riemann_oracle`].
pub const MIN_ORACLE_GRID: usize = 10_000;

/// State indices sorted by payoff, highest first; ties keep index order.
pub fn descending_order(x: &Act) -> Vec<usize> {
    let p = x.payoffs();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    order
}

/// One rank step of the sorted-sum: the state, its payoff, the upper set
/// `A_i` after adding it, and the decision weight `ν(A_i) - ν(A_{i-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankStep {
    pub state: usize,
    pub payoff: f64,
    pub upper_set: Event,
    pub weight: f64,
}

/// The rank steps whose weighted payoffs sum to the Choquet integral.
pub fn decomposition(x: &Act, nu: &Capacity) -> Result<Vec<RankStep>> {
    x.space().ensure_same(nu.space())?;
    let mut upper = Event::EMPTY;
    let mut prev = 0.0;
    Ok(descending_order(x)
        .into_iter()
        .map(|state| {
            upper = upper.union(Event::singleton(state));
            let cur = nu.value(upper);
            let step = RankStep {
                state,
                payoff: x.at(state),
                upper_set: upper,
                weight: cur - prev,
            };
            prev = cur;
            step
        })
        .collect())
}

/// `Σ_i X_(i) (ν(A_i) - ν(A_{i-1}))` with `X_(1) ≥ … ≥ X_(n)`.
pub fn choquet(x: &Act, nu: &Capacity) -> Result<f64> {
    Ok(decomposition(x, nu)?
        .iter()
        .map(|s| s.payoff * s.weight)
        .sum())
}

/// Midpoint step integration of
/// `∫_0^∞ ν(X>t) dt + ∫_{-∞}^0 (ν(X>t) - 1) dt`.
///
/// The integrand is constant outside `[min X, max X]`, so those tails are
/// added in closed form; the interval itself is split at zero and covered
/// by `grid` cells in total.
pub fn choquet_riemann_oracle(x: &Act, nu: &Capacity, grid: usize) -> Result<f64> {
    x.space().ensure_same(nu.space())?;
    if grid < MIN_ORACLE_GRID {
        return Err(Error::InvalidModel(format!(
            "oracle grid {grid} is below {MIN_ORACLE_GRID}"
        )));
    }
    let lo = x.min();
    let hi = x.max();
    let survival = |t: f64| nu.value(x.strictly_above(t));

    let mut total = 0.0;
    // ν(X>t) = 1 on [0, lo) and 0 on [hi, 0)
    if lo > 0.0 {
        total += lo;
    }
    if hi < 0.0 {
        total += hi;
    }
    let span = hi - lo;
    if span == 0.0 {
        return Ok(total);
    }

    let integrate = |a: f64, b: f64, cells: usize, shift: f64| -> f64 {
        if b <= a {
            return 0.0;
        }
        let h = (b - a) / cells as f64;
        let mut acc = 0.0;
        for k in 0..cells {
            acc += survival(a + (k as f64 + 0.5) * h) - shift;
        }
        acc * h
    };

    let neg = (lo.min(0.0), hi.min(0.0));
    let pos = (lo.max(0.0), hi.max(0.0));
    let neg_cells = (((neg.1 - neg.0) / span) * grid as f64).round().max(1.0) as usize;
    let pos_cells = grid.saturating_sub(neg_cells).max(1);
    total += integrate(neg.0, neg.1, neg_cells, 1.0);
    total += integrate(pos.0, pos.1, pos_cells, 0.0);
    Ok(total)
}

/// `|C(X+Y) - C(X) - C(Y)| ≤ 1e-9` for comonotonic `X`, `Y`.
pub fn comonotone_additivity_check(x: &Act, y: &Act, nu: &Capacity) -> Result<bool> {
    if !comonotonic(x, y)? {
        return Err(Error::NotComonotonic);
    }
    let sum = x.add(y)?;
    let gap = choquet(&sum, nu)? - choquet(x, nu)? - choquet(y, nu)?;
    Ok(gap.abs() <= COMONOTONE_TOL)
}
