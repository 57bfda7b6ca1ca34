//! Subjective mixtures `½x ⊕ ½y`: the outcome whose utility is the average
//! of the two utilities.

use crate::distortion::monotone_bisection;
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::space::{Act, Event};

/// Bisection tolerance of the fixed-point oracle.
pub const ORACLE_TOL: f64 = 1e-10;

fn utility_of(m: &ModelSpec) -> Result<&crate::distortion::UtilityFunction> {
    m.utility().ok_or_else(|| {
        Error::Unsupported(format!("{} has no utility function to mix with", m.kind()))
    })
}

/// `u⁻¹((u(x) + u(y)) / 2)`.
pub fn subjective_mixture(m: &ModelSpec, x: f64, y: f64) -> Result<f64> {
    let u = utility_of(m)?;
    let (ux, uy) = (u.eval(x)?, u.eval(y)?);
    if x == y {
        return Ok(x);
    }
    let z = u.inverse(0.5 * (ux + uy))?;
    Ok(z.clamp(x.min(y), x.max(y)))
}

/// Finds `z ∈ [y, x]` with `c_{xRz} R c_{zRy} ≃ xRy` by bisection, using
/// only model values and certainty equivalents.
///
/// `R` should be a risky event with probability one half for the result to
/// be the subjective mixture; any `R` weighted strictly inside `(0, 1)`
/// yields the same fixed point for a Choquet model.
pub fn subjective_mixture_fixed_point_oracle(
    m: &ModelSpec,
    x: f64,
    y: f64,
    r: Event,
) -> Result<f64> {
    let space = m.space().clone();
    space.check_event(r)?;
    let (x, y) = if x >= y { (x, y) } else { (y, x) };
    if x == y {
        return Ok(x);
    }
    let bet = |hi: f64, lo: f64| Act::binary(&space, hi, r, lo);
    let target = m.value(&bet(x, y)?)?;
    let lo_v = m.value(&Act::constant(&space, y)?)?;
    let hi_v = m.value(&Act::constant(&space, x)?)?;
    let span = hi_v - lo_v;
    if !(target - lo_v > 1e-12 * span.abs().max(1.0) && hi_v - target > 1e-12 * span.abs().max(1.0))
    {
        return Err(Error::Degenerate(format!(
            "event {{{}}} carries decision weight 0 or 1",
            space.event_label(r)
        )));
    }

    let mut failure = None;
    let objective = |z: f64| -> f64 {
        let eval = || -> Result<f64> {
            let c1 = m.certainty_equivalent(&bet(x, z)?)?;
            let c2 = m.certainty_equivalent(&bet(z, y)?)?;
            m.value(&bet(c1, c2)?)
        };
        match eval() {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let z = monotone_bisection(objective, target, y, x, ORACLE_TOL);
    match failure {
        Some(e) => Err(e),
        None => Ok(z),
    }
}

/// State-wise subjective mixture `½X ⊕ ½Y`.
pub fn act_mixture(m: &ModelSpec, x: &Act, y: &Act) -> Result<Act> {
    x.space().ensure_same(y.space())?;
    let payoff = x
        .payoffs()
        .iter()
        .zip(y.payoffs())
        .map(|(&a, &b)| subjective_mixture(m, a, b))
        .collect::<Result<Vec<f64>>>()?;
    Act::new(x.space(), payoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::Capacity;
    use crate::distortion::{DistortionFunction, UtilityFunction};
    use crate::space::{ProbabilityMeasure, RiskPartition, StateSpace};

    fn model(u: UtilityFunction) -> ModelSpec {
        let s = StateSpace::new(["1", "2"]).unwrap();
        let p = ProbabilityMeasure::uniform(&s);
        ModelSpec::crdu(
            u,
            DistortionFunction::power(0.7).unwrap(),
            Capacity::from_measure(&p),
            RiskPartition::finest(&s),
            p,
        )
        .unwrap()
    }

    fn pwl() -> UtilityFunction {
        UtilityFunction::piecewise_linear(vec![(-1.0, -1.0), (0.0, 0.0), (1.0, 2.0)])
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let id = model(UtilityFunction::identity());
        assert_eq!(subjective_mixture(&id, 1.0, 0.0).unwrap(), 0.5);
        assert_eq!(subjective_mixture(&id, 0.3, 0.3).unwrap(), 0.3);
        let m = model(pwl());
        assert!((subjective_mixture(&m, 1.0, -1.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let r = Event::singleton(0);
        let id = model(UtilityFunction::identity());
        assert!(
            (subjective_mixture_fixed_point_oracle(&id, 3.0, -1.0, r).unwrap() - 1.0).abs() < 1e-9
        );
        let m = model(pwl());
        assert!(
            (subjective_mixture_fixed_point_oracle(&m, 1.0, -1.0, r).unwrap() - 0.25).abs() < 1e-8
        );
        assert_eq!(
            subjective_mixture_fixed_point_oracle(&m, 0.5, 0.5, r).unwrap(),
            0.5
        );
        assert!(matches!(
            subjective_mixture_fixed_point_oracle(&m, 1.0, 0.0, Event::EMPTY),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn act_mixture_examples() {
        let m = model(pwl());
        let s = m.space().clone();
        let x = Act::new(&s, vec![1.0, -1.0]).unwrap();
        let y = Act::new(&s, vec![-1.0, 1.0]).unwrap();
        let mix = act_mixture(&m, &x, &y).unwrap();
        assert!((mix.at(0) - 0.25).abs() < 1e-12 && (mix.at(1) - 0.25).abs() < 1e-12);
        assert_eq!(act_mixture(&m, &x, &x).unwrap(), x);
        let id = model(UtilityFunction::identity());
        assert_eq!(act_mixture(&id, &x, &y).unwrap().payoffs(), &[0.0, 0.0]);
    }
}
