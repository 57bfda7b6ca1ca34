//! Probability distortions `g: [0,1] → [0,1]` and von Neumann–Morgenstern
//! utilities `u`, with evaluation, inversion and shape tests.
//!
//! Three distortion families are representable (identity, power,
//! piecewise linear) and four utility families (identity, power on a
//! nonnegative domain, exponential `-exp(-x/β)`, piecewise linear). Utilities
//! carry an explicit domain and an affine rescaling so they can be
//! normalized to `u(0) = 0`, `u(1) = 1`.

use crate::error::{Error, Result};

/// Accuracy of inverses, measured on the argument.
pub const INVERSE_TOL: f64 = 1e-12;

/// Slack allowed when an argument sits just outside `[0, 1]` from rounding.
const UNIT_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum DistortionKind {
    Identity,
    Power { gamma: f64 },
    PiecewiseLinear { points: Vec<(f64, f64)> },
}

/// An increasing map of `[0,1]` onto itself fixing both endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionFunction {
    kind: DistortionKind,
    strict: bool,
}

fn validate_points(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InvalidFunction(
            "piecewise-linear function needs at least two points".into(),
        ));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidFunction("points must be finite".into()));
    }
    for w in points.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::InvalidFunction(format!(
                "abscissae must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
        if w[1].1 < w[0].1 {
            return Err(Error::InvalidFunction(format!(
                "ordinates must be nondecreasing ({} then {})",
                w[0].1, w[1].1
            )));
        }
    }
    Ok(())
}

fn slopes(points: &[(f64, f64)]) -> impl Iterator<Item = f64> + '_ {
    points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
}

const SLOPE_TOL: f64 = 1e-12;

fn pwl_convex(points: &[(f64, f64)]) -> bool {
    let s: Vec<f64> = slopes(points).collect();
    s.windows(2).all(|w| w[1] >= w[0] - SLOPE_TOL)
}

fn pwl_concave(points: &[(f64, f64)]) -> bool {
    let s: Vec<f64> = slopes(points).collect();
    s.windows(2).all(|w| w[1] <= w[0] + SLOPE_TOL)
}

fn pwl_eval(points: &[(f64, f64)], x: f64) -> f64 {
    let k = points
        .windows(2)
        .position(|w| x <= w[1].0)
        .unwrap_or(points.len() - 2);
    let (x0, y0) = points[k];
    let (x1, y1) = points[k + 1];
    if x == x1 {
        return y1;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn pwl_inverse(points: &[(f64, f64)], y: f64) -> f64 {
    let k = points
        .windows(2)
        .position(|w| y <= w[1].1)
        .unwrap_or(points.len() - 2);
    let (x0, y0) = points[k];
    let (x1, y1) = points[k + 1];
    if y == y1 {
        return x1;
    }
    x0 + (x1 - x0) * (y - y0) / (y1 - y0)
}

/// Solves `f(x) = target` for nondecreasing `f` on `[lo, hi]` by bisection,
/// stopping once the bracket is narrower than `tol`.
pub fn monotone_bisection<F>(mut f: F, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl DistortionFunction {
    pub fn identity() -> Self {
        Self {
            kind: DistortionKind::Identity,
            strict: true,
        }
    }

    /// `g(x) = x^γ`.
    pub fn power(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidFunction(format!(
                "power exponent must be positive, got {gamma}"
            )));
        }
        Ok(Self {
            kind: DistortionKind::Power { gamma },
            strict: true,
        })
    }

    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self> {
        validate_points(&points)?;
        let first = points[0];
        let last = points[points.len() - 1];
        if first != (0.0, 0.0) || last != (1.0, 1.0) {
            return Err(Error::InvalidFunction(
                "distortion must start at (0,0) and end at (1,1)".into(),
            ));
        }
        let strict = points.windows(2).all(|w| w[1].1 > w[0].1);
        Ok(Self {
            kind: DistortionKind::PiecewiseLinear { points },
            strict,
        })
    }

    pub fn kind(&self) -> &DistortionKind {
        &self.kind
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            DistortionKind::Identity => true,
            DistortionKind::Power { gamma } => *gamma == 1.0,
            DistortionKind::PiecewiseLinear { points } => points.iter().all(|(x, y)| x == y),
        }
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.strict
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(&x) {
            return Err(Error::Domain {
                value: x,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(self.apply(x.clamp(0.0, 1.0)))
    }

    /// Evaluation without domain checks; `x` is clamped to `[0,1]`.
    pub(crate) fn apply(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match &self.kind {
            DistortionKind::Identity => x,
            DistortionKind::Power { gamma } => x.powf(*gamma),
            DistortionKind::PiecewiseLinear { points } => pwl_eval(points, x),
        }
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !self.strict {
            return Err(Error::NotStrictlyIncreasing);
        }
        if !(-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(&y) {
            return Err(Error::Range {
                value: y,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let y = y.clamp(0.0, 1.0);
        Ok(match &self.kind {
            DistortionKind::Identity => y,
            DistortionKind::Power { gamma } => y.powf(1.0 / gamma),
            DistortionKind::PiecewiseLinear { points } => pwl_inverse(points, y),
        })
    }

    /// The inverse distortion as a function in its own right.
    pub fn inverse_function(&self) -> Result<DistortionFunction> {
        if !self.strict {
            return Err(Error::NotStrictlyIncreasing);
        }
        match &self.kind {
            DistortionKind::Identity => Ok(Self::identity()),
            DistortionKind::Power { gamma } => Self::power(1.0 / gamma),
            DistortionKind::PiecewiseLinear { points } => {
                Self::piecewise_linear(points.iter().map(|&(x, y)| (y, x)).collect())
            }
        }
    }

    pub fn is_convex(&self) -> bool {
        match &self.kind {
            DistortionKind::Identity => true,
            DistortionKind::Power { gamma } => *gamma >= 1.0,
            DistortionKind::PiecewiseLinear { points } => pwl_convex(points),
        }
    }

    pub fn is_concave(&self) -> bool {
        match &self.kind {
            DistortionKind::Identity => true,
            DistortionKind::Power { gamma } => *gamma <= 1.0,
            DistortionKind::PiecewiseLinear { points } => pwl_concave(points),
        }
    }

    /// Concave and not affine. For a distortion this forces `g(x) > x` on `(0,1)`.
    pub fn is_strictly_concave(&self) -> bool {
        self.is_concave() && !self.is_convex()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum UtilityKind {
    Identity,
    /// `x^γ` on a nonnegative domain.
    Power {
        gamma: f64,
    },
    /// `-exp(-x/β)`.
    Exponential {
        beta: f64,
    },
    PiecewiseLinear {
        points: Vec<(f64, f64)>,
    },
}

/// A continuous, strictly increasing utility on a closed interval, possibly
/// rescaled affinely: `u(x) = scale · base(x) + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct UtilityFunction {
    kind: UtilityKind,
    lo: f64,
    hi: f64,
    scale: f64,
    offset: f64,
}

/// Tolerance for the `u(0) = 0`, `u(1) = 1` normalization test.
pub const NORMALIZATION_TOL: f64 = 1e-12;

impl UtilityFunction {
    fn checked(kind: UtilityKind, lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidFunction(format!(
                "utility domain [{lo}, {hi}] is empty"
            )));
        }
        Ok(Self {
            kind,
            lo,
            hi,
            scale: 1.0,
            offset: 0.0,
        })
    }

    /// `u(x) = x` on the whole real line.
    pub fn identity() -> Self {
        Self {
            kind: UtilityKind::Identity,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn identity_on(lo: f64, hi: f64) -> Result<Self> {
        Self::checked(UtilityKind::Identity, lo, hi)
    }

    /// `u(x) = x^γ` on `[lo, hi]` with `lo ≥ 0`; `hi` may be infinite.
    pub fn power(gamma: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidFunction(format!(
                "power exponent must be positive, got {gamma}"
            )));
        }
        if lo < 0.0 {
            return Err(Error::InvalidFunction(
                "power utility needs a nonnegative domain".into(),
            ));
        }
        Self::checked(UtilityKind::Power { gamma }, lo, hi)
    }

    /// `u(x) = -exp(-x/β)` on `[lo, hi]`.
    pub fn exponential(beta: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidFunction(format!(
                "exponential utility needs β > 0, got {beta}"
            )));
        }
        Self::checked(UtilityKind::Exponential { beta }, lo, hi)
    }

    /// Interpolating utility; the domain is the span of the abscissae.
    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self> {
        validate_points(&points)?;
        if points.windows(2).any(|w| w[1].1 <= w[0].1) {
            return Err(Error::NotStrictlyIncreasing);
        }
        let lo = points[0].0;
        let hi = points[points.len() - 1].0;
        Self::checked(UtilityKind::PiecewiseLinear { points }, lo, hi)
    }

    /// Applies `u ↦ a·u + b` with `a > 0`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite()) {
            return Err(Error::InvalidFunction(format!(
                "affine rescaling needs a finite positive slope, got {a}"
            )));
        }
        Ok(Self {
            scale: a * self.scale,
            offset: a * self.offset + b,
            ..self.clone()
        })
    }

    /// The affine rescaling with `u(0) = 0` and `u(1) = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let u0 = self.eval(0.0)?;
        let u1 = self.eval(1.0)?;
        let a = 1.0 / (u1 - u0);
        let mut out = self.affine(a, -a * u0)?;
        // pin the endpoints exactly where the family allows it
        if out.kind == UtilityKind::Identity || matches!(out.kind, UtilityKind::Power { .. }) {
            out.scale = 1.0;
            out.offset = 0.0;
        }
        Ok(out)
    }

    pub fn is_normalized(&self) -> bool {
        match (self.eval(0.0), self.eval(1.0)) {
            (Ok(a), Ok(b)) => a.abs() <= NORMALIZATION_TOL && (b - 1.0).abs() <= NORMALIZATION_TOL,
            _ => false,
        }
    }

    pub fn kind(&self) -> &UtilityKind {
        &self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn in_domain(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn base(&self, x: f64) -> f64 {
        match &self.kind {
            UtilityKind::Identity => x,
            UtilityKind::Power { gamma } => x.powf(*gamma),
            UtilityKind::Exponential { beta } => -(-x / beta).exp(),
            UtilityKind::PiecewiseLinear { points } => pwl_eval(points, x),
        }
    }

    fn base_inverse(&self, b: f64) -> f64 {
        match &self.kind {
            UtilityKind::Identity => b,
            UtilityKind::Power { gamma } => b.max(0.0).powf(1.0 / gamma),
            UtilityKind::Exponential { beta } => -beta * (-b).ln(),
            UtilityKind::PiecewiseLinear { points } => pwl_inverse(points, b),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.in_domain(x) {
            return Err(Error::Domain {
                value: x,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(self.scale * self.base(x) + self.offset)
    }

    /// The image of the domain, `[u(lo), u(hi)]`.
    pub fn range(&self) -> (f64, f64) {
        let at = |x: f64| {
            if x.is_infinite() {
                match (&self.kind, x > 0.0) {
                    (UtilityKind::Exponential { .. }, true) => self.offset,
                    (_, true) => f64::INFINITY,
                    (UtilityKind::Exponential { .. }, false) => f64::NEG_INFINITY,
                    (_, false) => f64::NEG_INFINITY,
                }
            } else {
                self.scale * self.base(x) + self.offset
            }
        };
        (at(self.lo), at(self.hi))
    }

    /// The unique `x` in the domain with `u(x) = y`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let (rlo, rhi) = self.range();
        let slack = INVERSE_TOL * (1.0 + y.abs());
        let open_top =
            matches!(self.kind, UtilityKind::Exponential { .. }) && self.hi.is_infinite();
        if y.is_nan() || y < rlo - slack || y > rhi + slack || (open_top && y >= rhi) {
            return Err(Error::Range {
                value: y,
                lo: rlo,
                hi: rhi,
            });
        }
        let b = (y - self.offset) / self.scale;
        Ok(self.base_inverse(b).clamp(self.lo, self.hi))
    }

    pub fn is_concave(&self) -> bool {
        match &self.kind {
            UtilityKind::Identity => true,
            UtilityKind::Power { gamma } => *gamma <= 1.0,
            UtilityKind::Exponential { .. } => true,
            UtilityKind::PiecewiseLinear { points } => pwl_concave(points),
        }
    }

    pub fn is_convex(&self) -> bool {
        match &self.kind {
            UtilityKind::Identity => true,
            UtilityKind::Power { gamma } => *gamma >= 1.0,
            UtilityKind::Exponential { .. } => false,
            UtilityKind::PiecewiseLinear { points } => pwl_convex(points),
        }
    }

    /// True when both utilities agree within `tol` at `n` evenly spaced
    /// points of `[lo, hi]` (both must be defined there).
    pub fn agrees_on_grid(
        &self,
        other: &UtilityFunction,
        lo: f64,
        hi: f64,
        n: usize,
        tol: f64,
    ) -> bool {
        (0..=n).all(|k| {
            let x = lo + (hi - lo) * k as f64 / n as f64;
            match (self.eval(x), other.eval(x)) {
                (Ok(a), Ok(b)) => (a - b).abs() <= tol,
                _ => false,
            }
        })
    }
}

impl DistortionFunction {
    /// True when both distortions agree within `tol` on an `n`-point grid of `[0,1]`.
    pub fn agrees_on_grid(&self, other: &DistortionFunction, n: usize, tol: f64) -> bool {
        (0..=n).all(|k| {
            let x = k as f64 / n as f64;
            (self.apply(x) - other.apply(x)).abs() <= tol
        })
    }
}
