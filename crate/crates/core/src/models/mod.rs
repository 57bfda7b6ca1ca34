//! Preference evaluators and the tools built on them.
//!
//! [`ModelSpec`] is a tagged evaluator. The Choquet kinds (CRDU, CEU, dual)
//! share one parameterization `(u, g, ν, partition, P)`; CEU fixes
//! `g = id` and the dual model fixes `u = id`.

pub mod attitudes;
pub mod audit;
pub mod comparative;
pub mod entropic;
pub mod family;
pub mod mixture;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::capacity::Capacity;
use crate::choquet::{choquet, decomposition, RankStep};
use crate::distortion::{DistortionFunction, UtilityFunction};
use crate::error::{Error, Result};
use crate::space::{Act, Event, ProbabilityMeasure, RiskPartition, StateSpace};

pub use attitudes::{attitude_report, AttitudeFlag, AttitudeReport};
pub use audit::{axiom_audit, AuditReport, Axiom, AxiomOutcome, AxiomResult};
pub use comparative::{comparative_full, ep_check, more_ambiguity_averse};
pub use entropic::{donsker_varadhan_grid, relative_entropy, VariationalMinimum};
pub use family::{derive_distortion_family, family_representation_value, DistortionFamilyEntry};
pub use mixture::{act_mixture, subjective_mixture, subjective_mixture_fixed_point_oracle};

/// Half-width of the indifference band used by [`ModelSpec::prefer`].
pub const INDIFFERENCE_TOL: f64 = 1e-10;

/// Model selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Crdu,
    Ceu,
    Rdu,
    Dual,
    Meu,
    Entropic,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Crdu,
        ModelKind::Ceu,
        ModelKind::Rdu,
        ModelKind::Dual,
        ModelKind::Meu,
        ModelKind::Entropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Crdu => "CRDU",
            ModelKind::Ceu => "CEU",
            ModelKind::Rdu => "RDU",
            ModelKind::Dual => "Dual",
            ModelKind::Meu => "MEU",
            ModelKind::Entropic => "Entropic",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidModel(format!("unknown model kind `{s}`")))
    }
}

/// Parameters shared by the CRDU, CEU and dual kinds.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoquetModel {
    u: UtilityFunction,
    g: DistortionFunction,
    nu: Capacity,
    part: RiskPartition,
    p: ProbabilityMeasure,
    weights: Capacity,
}

impl ChoquetModel {
    fn new(
        u: UtilityFunction,
        g: DistortionFunction,
        nu: Capacity,
        part: RiskPartition,
        p: ProbabilityMeasure,
    ) -> Result<Self> {
        nu.space().ensure_same(part.space())?;
        nu.space().ensure_same(p.space())?;
        if !g.is_strictly_increasing() {
            return Err(Error::InvalidModel(
                "distortion must be strictly increasing".into(),
            ));
        }
        if let Some(e) = nu.is_risk_conforming(&part, &p)?.witness() {
            return Err(Error::InvalidCapacity {
                constraint: "capacity not risk conforming",
                detail: format!(
                    "ν({}) = {} but P = {}",
                    nu.space().event_label(*e),
                    nu.value(*e),
                    p.prob(*e)
                ),
            });
        }
        let weights = nu.compose(&g);
        Ok(Self {
            u,
            g,
            nu,
            part,
            p,
            weights,
        })
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.u
    }

    pub fn distortion(&self) -> &DistortionFunction {
        &self.g
    }

    /// The matching probability `ν`.
    pub fn capacity(&self) -> &Capacity {
        &self.nu
    }

    pub fn partition(&self) -> &RiskPartition {
        &self.part
    }

    pub fn reference(&self) -> &ProbabilityMeasure {
        &self.p
    }

    /// The decision capacity `g∘ν`.
    pub fn weights(&self) -> &Capacity {
        &self.weights
    }
}

/// Rank-dependent utility under the reference measure.
#[derive(Clone, Debug, PartialEq)]
pub struct RduModel {
    u: UtilityFunction,
    g: DistortionFunction,
    p: ProbabilityMeasure,
    weights: Capacity,
}

impl RduModel {
    pub fn utility(&self) -> &UtilityFunction {
        &self.u
    }

    pub fn distortion(&self) -> &DistortionFunction {
        &self.g
    }

    pub fn reference(&self) -> &ProbabilityMeasure {
        &self.p
    }

    pub fn weights(&self) -> &Capacity {
        &self.weights
    }
}

/// Maxmin expected utility over a finite set of priors.
#[derive(Clone, Debug, PartialEq)]
pub struct MeuModel {
    u: UtilityFunction,
    priors: Vec<ProbabilityMeasure>,
    conformity: Option<(RiskPartition, ProbabilityMeasure)>,
}

impl MeuModel {
    pub fn utility(&self) -> &UtilityFunction {
        &self.u
    }

    pub fn priors(&self) -> &[ProbabilityMeasure] {
        &self.priors
    }

    pub fn partition(&self) -> Option<&RiskPartition> {
        self.conformity.as_ref().map(|(part, _)| part)
    }

    pub fn reference(&self) -> Option<&ProbabilityMeasure> {
        self.conformity.as_ref().map(|(_, p)| p)
    }
}

/// `X ↦ -E_P[exp(-X/β)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropicModel {
    beta: f64,
    p: ProbabilityMeasure,
}

impl EntropicModel {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn reference(&self) -> &ProbabilityMeasure {
        &self.p
    }
}

/// A preference evaluator.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Crdu(ChoquetModel),
    Ceu(ChoquetModel),
    Rdu(RduModel),
    Dual(ChoquetModel),
    Meu(MeuModel),
    Entropic(EntropicModel),
}

fn require_normalized(u: &UtilityFunction) -> Result<()> {
    if u.is_normalized() {
        Ok(())
    } else {
        Err(Error::InvalidModel(
            "utility must satisfy u(0) = 0 and u(1) = 1; see UtilityFunction::normalized".into(),
        ))
    }
}

impl ModelSpec {
    /// `X ↦ ∫ u(X) d(g∘ν)`.
    pub fn crdu(
        u: UtilityFunction,
        g: DistortionFunction,
        nu: Capacity,
        part: RiskPartition,
        p: ProbabilityMeasure,
    ) -> Result<Self> {
        require_normalized(&u)?;
        Ok(ModelSpec::Crdu(ChoquetModel::new(u, g, nu, part, p)?))
    }

    /// `X ↦ ∫ u(X) dν`.
    pub fn ceu(
        u: UtilityFunction,
        nu: Capacity,
        part: RiskPartition,
        p: ProbabilityMeasure,
    ) -> Result<Self> {
        require_normalized(&u)?;
        let g = DistortionFunction::identity();
        Ok(ModelSpec::Ceu(ChoquetModel::new(u, g, nu, part, p)?))
    }

    /// `X ↦ ∫ u(X) d(g∘P)`.
    pub fn rdu(u: UtilityFunction, g: DistortionFunction, p: ProbabilityMeasure) -> Result<Self> {
        let weights = Capacity::from_measure(&p).compose(&g);
        Ok(ModelSpec::Rdu(RduModel { u, g, p, weights }))
    }

    /// `X ↦ ∫ X d(g∘ν)`.
    pub fn dual(
        g: DistortionFunction,
        nu: Capacity,
        part: RiskPartition,
        p: ProbabilityMeasure,
    ) -> Result<Self> {
        let u = UtilityFunction::identity();
        Ok(ModelSpec::Dual(ChoquetModel::new(u, g, nu, part, p)?))
    }

    /// `X ↦ min_μ E_μ[u(X)]`. When `(part, P)` is given every prior must
    /// agree with `P` on the partition's algebra.
    pub fn meu(
        u: UtilityFunction,
        priors: Vec<ProbabilityMeasure>,
        conformity: Option<(RiskPartition, ProbabilityMeasure)>,
    ) -> Result<Self> {
        let first = priors
            .first()
            .ok_or_else(|| Error::InvalidModel("MEU needs at least one prior".into()))?;
        for mu in &priors {
            first.space().ensure_same(mu.space())?;
        }
        if let Some((part, p)) = &conformity {
            first.space().ensure_same(part.space())?;
            first.space().ensure_same(p.space())?;
            for (k, mu) in priors.iter().enumerate() {
                if let Some(e) = Capacity::from_measure(mu)
                    .is_risk_conforming(part, p)?
                    .witness()
                {
                    return Err(Error::InvalidModel(format!(
                        "prior {k} is not risk conforming on {{{}}}",
                        p.space().event_label(*e)
                    )));
                }
            }
        }
        Ok(ModelSpec::Meu(MeuModel {
            u,
            priors,
            conformity,
        }))
    }

    /// `X ↦ -E_P[exp(-X/β)]`.
    pub fn entropic(beta: f64, p: ProbabilityMeasure) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidModel(format!(
                "β must be positive, got {beta}"
            )));
        }
        Ok(ModelSpec::Entropic(EntropicModel { beta, p }))
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Crdu(_) => ModelKind::Crdu,
            ModelSpec::Ceu(_) => ModelKind::Ceu,
            ModelSpec::Rdu(_) => ModelKind::Rdu,
            ModelSpec::Dual(_) => ModelKind::Dual,
            ModelSpec::Meu(_) => ModelKind::Meu,
            ModelSpec::Entropic(_) => ModelKind::Entropic,
        }
    }

    pub fn space(&self) -> &StateSpace {
        match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => m.nu.space(),
            ModelSpec::Rdu(m) => m.p.space(),
            ModelSpec::Meu(m) => m.priors[0].space(),
            ModelSpec::Entropic(m) => m.p.space(),
        }
    }

    /// The Choquet parameterization, for CRDU, CEU and dual models.
    pub fn choquet_model(&self) -> Option<&ChoquetModel> {
        match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => Some(m),
            _ => None,
        }
    }

    pub fn utility(&self) -> Option<&UtilityFunction> {
        match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => Some(&m.u),
            ModelSpec::Rdu(m) => Some(&m.u),
            ModelSpec::Meu(m) => Some(&m.u),
            ModelSpec::Entropic(_) => None,
        }
    }

    pub fn distortion(&self) -> Option<&DistortionFunction> {
        match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => Some(&m.g),
            ModelSpec::Rdu(m) => Some(&m.g),
            _ => None,
        }
    }

    pub fn reference(&self) -> Option<&ProbabilityMeasure> {
        match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => Some(&m.p),
            ModelSpec::Rdu(m) => Some(&m.p),
            ModelSpec::Meu(m) => m.reference(),
            ModelSpec::Entropic(m) => Some(&m.p),
        }
    }

    /// The risk partition; RDU and entropic models treat every event as risky.
    pub fn partition(&self) -> Option<RiskPartition> {
        match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => Some(m.part.clone()),
            ModelSpec::Rdu(m) => Some(RiskPartition::finest(m.p.space())),
            ModelSpec::Meu(m) => m.partition().cloned(),
            ModelSpec::Entropic(m) => Some(RiskPartition::finest(m.p.space())),
        }
    }

    /// The capacity the utility profile is integrated against, if the model
    /// is a Choquet model.
    pub fn decision_capacity(&self) -> Option<&Capacity> {
        match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => Some(&m.weights),
            ModelSpec::Rdu(m) => Some(&m.weights),
            _ => None,
        }
    }

    fn utility_profile(&self, x: &Act) -> Result<Act> {
        self.space().ensure_same(x.space())?;
        match self.utility() {
            Some(u) => x.try_map(|v| u.eval(v)),
            None => Ok(x.clone()),
        }
    }

    pub fn value(&self, x: &Act) -> Result<f64> {
        match self {
            ModelSpec::Crdu(_) | ModelSpec::Ceu(_) | ModelSpec::Dual(_) | ModelSpec::Rdu(_) => {
                let ux = self.utility_profile(x)?;
                choquet(&ux, self.decision_capacity().expect("Choquet kind"))
            }
            ModelSpec::Meu(m) => {
                let ux = self.utility_profile(x)?;
                let mut best = f64::INFINITY;
                for mu in &m.priors {
                    best = best.min(mu.expectation(&ux)?);
                }
                Ok(best)
            }
            ModelSpec::Entropic(m) => {
                m.p.space().ensure_same(x.space())?;
                Ok(-x
                    .payoffs()
                    .iter()
                    .zip(m.p.weights())
                    .map(|(v, w)| w * (-v / m.beta).exp())
                    .sum::<f64>())
            }
        }
    }

    /// Rank steps of the Choquet sum of `u∘X`, for Choquet and RDU models.
    pub fn decomposition(&self, x: &Act) -> Result<Option<Vec<RankStep>>> {
        match self.decision_capacity() {
            Some(w) => Ok(Some(decomposition(&self.utility_profile(x)?, w)?)),
            None => Ok(None),
        }
    }

    /// The constant `c` with `X ≃ c`.
    pub fn certainty_equivalent(&self, x: &Act) -> Result<f64> {
        let v = self.value(x)?;
        match self {
            ModelSpec::Entropic(m) => Ok(-m.beta * (-v).ln()),
            _ => {
                if x.is_constant() {
                    return Ok(x.at(0));
                }
                self.utility().expect("utility-based kind").inverse(v)
            }
        }
    }

    /// `X` versus `Y`, with values within 1e-10 treated as indifferent.
    pub fn prefer(&self, x: &Act, y: &Act) -> Result<Ordering> {
        let d = self.value(x)? - self.value(y)?;
        Ok(if d > INDIFFERENCE_TOL {
            Ordering::Greater
        } else if d < -INDIFFERENCE_TOL {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }

    /// The reference probability a risky bet must carry to match a bet on
    /// `A`: `g⁻¹(V(𝟙_A))`. Requires `u(0) = 0`, `u(1) = 1`.
    pub fn matching_probability(&self, a: Event) -> Result<f64> {
        self.space().check_event(a)?;
        let (u, g) = match self {
            ModelSpec::Crdu(m) | ModelSpec::Ceu(m) | ModelSpec::Dual(m) => (&m.u, &m.g),
            ModelSpec::Rdu(m) => (&m.u, &m.g),
            _ => {
                return Err(Error::Unsupported(format!(
                    "matching probabilities need a distortion; {} has none",
                    self.kind()
                )))
            }
        };
        require_normalized(u)?;
        let bet = Act::indicator(self.space(), a)?;
        g.inverse(self.value(&bet)?)
    }
}

/// A union of partition blocks with reference probability exactly one half.
pub fn half_probability_event(part: &RiskPartition, p: &ProbabilityMeasure) -> Option<Event> {
    let n = p.space().len();
    part.algebra()
        .into_iter()
        .filter(|&e| (p.prob(e) - 0.5).abs() <= 1e-12)
        .min_by_key(|e| (e.len().abs_diff(n / 2), e.mask()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> StateSpace {
        StateSpace::new(["1", "2"]).unwrap()
    }

    fn trivial_crdu(g: DistortionFunction, nu: Capacity) -> ModelSpec {
        let s = nu.space().clone();
        ModelSpec::crdu(
            UtilityFunction::identity(),
            g,
            nu,
            RiskPartition::trivial(&s),
            ProbabilityMeasure::uniform(&s),
        )
        .unwrap()
    }

    #[test]
    fn value_examples() {
        let s = two();
        let uni = ProbabilityMeasure::uniform(&s);
        let m = trivial_crdu(DistortionFunction::identity(), Capacity::from_measure(&uni));
        assert_eq!(
            m.value(&Act::new(&s, vec![0.0, 1.0]).unwrap()).unwrap(),
            0.5
        );

        let nu = Capacity::from_table(&s, vec![0.0, 0.6, 0.2, 1.0]).unwrap();
        let m = trivial_crdu(DistortionFunction::power(2.0).unwrap(), nu);
        let v = m
            .value(&Act::indicator(&s, Event::singleton(0)).unwrap())
            .unwrap();
        assert!((v - 0.36).abs() < 1e-12);

        let priors = vec![
            ProbabilityMeasure::new(&s, vec![0.3, 0.7]).unwrap(),
            ProbabilityMeasure::new(&s, vec![0.6, 0.4]).unwrap(),
        ];
        let m = ModelSpec::meu(UtilityFunction::identity(), priors, None).unwrap();
        let v = m.value(&Act::new(&s, vec![1.0, 0.0]).unwrap()).unwrap();
        assert!((v - 0.3).abs() < 1e-12);
    }

    #[test]
    fn certainty_equivalent_examples() {
        let s = two();
        let uni = ProbabilityMeasure::uniform(&s);
        let m = ModelSpec::entropic(1.0, uni.clone()).unwrap();
        let ce = m
            .certainty_equivalent(&Act::new(&s, vec![0.0, 2f64.ln()]).unwrap())
            .unwrap();
        assert!((ce - 0.287682).abs() < 1e-6);
        assert!((ce + 0.75f64.ln()).abs() < 1e-12);

        let u = UtilityFunction::power(2.0, 0.0, f64::INFINITY).unwrap();
        let m = ModelSpec::crdu(
            u,
            DistortionFunction::identity(),
            Capacity::from_measure(&uni),
            RiskPartition::trivial(&s),
            uni.clone(),
        )
        .unwrap();
        let ce = m
            .certainty_equivalent(&Act::new(&s, vec![0.0, 1.0]).unwrap())
            .unwrap();
        assert!((ce - 0.5f64.sqrt()).abs() < 1e-12);

        for m in [m, ModelSpec::entropic(0.7, uni).unwrap()] {
            let c = Act::constant(&s, 0.4).unwrap();
            assert!((m.certainty_equivalent(&c).unwrap() - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn prefer_examples() {
        let s = two();
        let nu = Capacity::from_table(&s, vec![0.0, 0.3, 0.4, 1.0]).unwrap();
        let m = trivial_crdu(DistortionFunction::identity(), nu);
        let x = Act::new(&s, vec![1.0, 0.0]).unwrap();
        let y = Act::new(&s, vec![0.0, 1.0]).unwrap();
        assert_eq!(m.prefer(&x, &y).unwrap(), Ordering::Less);
        assert_eq!(m.prefer(&x, &x).unwrap(), Ordering::Equal);

        let p = ProbabilityMeasure::uniform(&s);
        let m = ModelSpec::crdu(
            UtilityFunction::identity(),
            DistortionFunction::power(0.5).unwrap(),
            Capacity::from_measure(&p),
            RiskPartition::finest(&s),
            p,
        )
        .unwrap();
        assert_eq!(m.prefer(&x, &y).unwrap(), Ordering::Equal);
    }

    #[test]
    fn matching_probability_examples() {
        let s = two();
        let nu = Capacity::from_table(&s, vec![0.0, 0.6, 0.2, 1.0]).unwrap();
        let m = trivial_crdu(DistortionFunction::power(2.0).unwrap(), nu);
        let got = m.matching_probability(Event::singleton(0)).unwrap();
        assert!((got - 0.6).abs() < 1e-12);
        assert_eq!(m.matching_probability(s.full()).unwrap(), 1.0);
    }

    #[test]
    fn construction_checks() {
        let s = two();
        let p = ProbabilityMeasure::new(&s, vec![0.25, 0.75]).unwrap();
        let nu = Capacity::from_table(&s, vec![0.0, 0.3, 0.6, 1.0]).unwrap();
        let err = ModelSpec::crdu(
            UtilityFunction::identity(),
            DistortionFunction::identity(),
            nu.clone(),
            RiskPartition::finest(&s),
            p.clone(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidCapacity {
                constraint: "capacity not risk conforming",
                ..
            }
        ));

        let shifted = UtilityFunction::identity().affine(2.0, 1.0).unwrap();
        assert!(ModelSpec::ceu(
            shifted.clone(),
            nu.clone(),
            RiskPartition::trivial(&s),
            p.clone()
        )
        .is_err());
        assert!(ModelSpec::ceu(
            shifted.normalized().unwrap(),
            nu,
            RiskPartition::trivial(&s),
            p.clone()
        )
        .is_ok());
        assert!(ModelSpec::entropic(0.0, p.clone()).is_err());
        assert!(ModelSpec::meu(UtilityFunction::identity(), vec![], None).is_err());
        let off = ProbabilityMeasure::new(&s, vec![0.5, 0.5]).unwrap();
        let part = RiskPartition::finest(&s);
        assert!(ModelSpec::meu(UtilityFunction::identity(), vec![off], Some((part, p))).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
        assert!("SEU".parse::<ModelKind>().is_err());
    }
}
