//! Variational form of the entropic certainty equivalent:
//! `min_μ E^μ[X] + β H(μ | P)` over the probability simplex.

use crate::error::{Error, Result};
use crate::space::{Act, ProbabilityMeasure};

/// Points per axis on each refinement level.
pub const GRID_POINTS: usize = 41;

/// Number of zoom levels.
pub const ZOOM_LEVELS: usize = 8;

/// Largest support the grid search accepts.
pub const MAX_GRID_STATES: usize = 5;

/// `H(μ | P) = Σ μ ln(μ / P)`; infinite unless `μ ≪ P`.
pub fn relative_entropy(mu: &[f64], p: &ProbabilityMeasure) -> f64 {
    mu.iter()
        .zip(p.weights())
        .map(|(&m, &q)| {
            if m <= 0.0 {
                0.0
            } else if q <= 0.0 {
                f64::INFINITY
            } else {
                m * (m / q).ln()
            }
        })
        .sum()
}

fn objective(x: &Act, beta: f64, p: &ProbabilityMeasure, mu: &[f64]) -> f64 {
    let mean: f64 = mu.iter().zip(x.payoffs()).map(|(m, v)| m * v).sum();
    mean + beta * relative_entropy(mu, p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariationalMinimum {
    pub value: f64,
    pub argmin: Vec<f64>,
}

/// Minimizes `E^μ[X] + β H(μ | P)` by a grid over the support of `P`,
/// zooming around the incumbent on each level.
pub fn donsker_varadhan_grid(
    x: &Act,
    beta: f64,
    p: &ProbabilityMeasure,
) -> Result<VariationalMinimum> {
    p.space().ensure_same(x.space())?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "entropic β must be positive, got {beta}"
        )));
    }
    let n = x.space().len();
    let support: Vec<usize> = (0..n).filter(|&i| p.weight(i) > 0.0).collect();
    if support.len() > MAX_GRID_STATES {
        return Err(Error::SpaceTooLarge {
            size: support.len(),
            max: MAX_GRID_STATES,
        });
    }
    let free = support.len() - 1;
    let embed = |coords: &[f64]| -> Option<Vec<f64>> {
        let last = 1.0 - coords.iter().sum::<f64>();
        if last < -1e-15 || coords.iter().any(|&c| c < 0.0) {
            return None;
        }
        let mut mu = vec![0.0; n];
        for (k, &c) in coords.iter().enumerate() {
            mu[support[k]] = c;
        }
        mu[support[free]] = last.max(0.0);
        Some(mu)
    };

    let mut center = vec![1.0 / support.len() as f64; free];
    let mut best_mu = embed(&center).expect("barycenter is feasible");
    let mut best = objective(x, beta, p, &best_mu);
    let mut half_width = 1.0;
    let mut idx = vec![0usize; free];
    for _ in 0..ZOOM_LEVELS {
        let step = 2.0 * half_width / (GRID_POINTS - 1) as f64;
        idx.iter_mut().for_each(|k| *k = 0);
        loop {
            let coords: Vec<f64> = center
                .iter()
                .zip(&idx)
                .map(|(c, &k)| c - half_width + step * k as f64)
                .collect();
            if let Some(mu) = embed(&coords) {
                let v = objective(x, beta, p, &mu);
                if v < best {
                    best = v;
                    best_mu = mu;
                }
            }
            // odometer over the free coordinates
            let mut d = 0;
            while d < free {
                idx[d] += 1;
                if idx[d] < GRID_POINTS {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == free {
                break;
            }
        }
        center = support[..free].iter().map(|&i| best_mu[i]).collect();
        half_width = 2.0 * step;
    }
    Ok(VariationalMinimum {
        value: best,
        argmin: best_mu,
    })
}
