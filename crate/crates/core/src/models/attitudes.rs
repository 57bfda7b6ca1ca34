//! Ambiguity and risk attitudes read off the parameters of a Choquet model.

use crate::capacity::Verdict;
use crate::core_polytope::{core_contains, is_balanced};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::space::StateSpace;

/// One attitude: whether it holds and, if not, why.
#[derive(Clone, Debug, PartialEq)]
pub struct AttitudeFlag {
    pub name: &'static str,
    pub description: &'static str,
    pub holds: bool,
    pub witness: Option<String>,
}

/// Flags in the order AN, AA, RAA, DS, SRA, NSC, AAF.
#[derive(Clone, Debug, PartialEq)]
pub struct AttitudeReport {
    pub flags: Vec<AttitudeFlag>,
}

impl AttitudeReport {
    pub const NAMES: [&'static str; 7] = ["AN", "AA", "RAA", "DS", "SRA", "NSC", "AAF"];

    pub fn get(&self, name: &str) -> Option<&AttitudeFlag> {
        self.flags
            .iter()
            .find(|f| f.name.eq_ignore_ascii_case(name))
    }

    pub fn holds(&self, name: &str) -> Option<bool> {
        self.get(name).map(|f| f.holds)
    }
}

fn flag(
    name: &'static str,
    description: &'static str,
    holds: bool,
    witness: Option<String>,
) -> AttitudeFlag {
    AttitudeFlag {
        name,
        description,
        holds,
        witness: if holds { None } else { witness },
    }
}

fn pair_label(
    s: &StateSpace,
    v: &Verdict<(crate::space::Event, crate::space::Event)>,
) -> Option<String> {
    v.witness().map(|(a, b)| {
        format!(
            "A = {{{}}}, B = {{{}}}",
            s.event_label(*a),
            s.event_label(*b)
        )
    })
}

/// Ambiguity neutrality (`ν` additive), aversion (`ν` balanced), reference
/// aversion (`P` in the core), diversification seeking (`u` concave and
/// `g∘ν` supermodular), strong risk aversion (`u` concave and `g` convex),
/// null-set consistency (`ν` is `P`-consistent), and an ambiguity-averse
/// distortion family (`g_X ≤ g` on every level).
pub fn attitude_report(m: &ModelSpec) -> Result<AttitudeReport> {
    let cm = m.choquet_model().ok_or_else(|| {
        Error::Unsupported(format!(
            "attitudes are defined for Choquet models, not {}",
            m.kind()
        ))
    })?;
    let (u, g, nu, p) = (cm.utility(), cm.distortion(), cm.capacity(), cm.reference());
    let s = nu.space();

    let an = nu.is_additive();
    let an = flag(
        "AN",
        "matching probability is additive",
        an.holds(),
        an.witness().map(|e| {
            format!(
                "ν({{{}}}) differs from the sum over its states",
                s.event_label(*e)
            )
        }),
    );

    let balanced = is_balanced(nu)?;
    let aa = flag(
        "AA",
        "matching probability has a nonempty core",
        balanced,
        Some("core is empty".into()),
    );

    let raa_holds = core_contains(nu, p)?;
    let raa_witness = s
        .events()
        .find(|&e| p.prob(e) < nu.value(e) - crate::core_polytope::CONTAINS_TOL)
        .map(|e| {
            format!(
                "P({{{}}}) = {} < ν = {}",
                s.event_label(e),
                p.prob(e),
                nu.value(e)
            )
        });
    let raa = flag(
        "RAA",
        "reference measure lies in the core",
        raa_holds,
        raa_witness,
    );

    let superm = cm.weights().is_supermodular()?;
    let ds_holds = u.is_concave() && superm.holds();
    let ds_witness = if !u.is_concave() {
        Some("utility is not concave".to_string())
    } else {
        pair_label(s, &superm).map(|w| format!("g∘ν not supermodular at {w}"))
    };
    let ds = flag(
        "DS",
        "concave utility and supermodular g∘ν",
        ds_holds,
        ds_witness,
    );

    let sra_holds = u.is_concave() && g.is_convex();
    let sra_witness = if !u.is_concave() {
        "utility is not concave"
    } else {
        "distortion is not convex"
    };
    let sra = flag(
        "SRA",
        "concave utility and convex distortion",
        sra_holds,
        Some(sra_witness.into()),
    );

    let nsc = nu.is_p_consistent(p)?;
    let nsc = flag(
        "NSC",
        "matching probability ignores null sets",
        nsc.holds(),
        pair_label(s, &nsc).map(|w| format!("ν differs on {w}")),
    );

    // g_{𝟙_A}(P(A)) = g(ν(A)) must not exceed g(P(A))
    let aaf_witness = s
        .events()
        .find(|&e| cm.weights().value(e) > g.eval(p.prob(e)).unwrap_or(f64::INFINITY) + 1e-12)
        .map(|e| format!("g(ν({{{}}})) exceeds g(P)", s.event_label(e)));
    let aaf = flag(
        "AAF",
        "distortion family lies below g",
        aaf_witness.is_none(),
        aaf_witness,
    );

    Ok(AttitudeReport {
        flags: vec![an, aa, raa, ds, sra, nsc, aaf],
    })
}
