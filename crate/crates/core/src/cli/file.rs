//! The model file: JSON with labelled states, an explicit capacity table and
//! named acts.

use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::distortion::{DistortionFunction, DistortionKind, UtilityFunction, UtilityKind};
use crate::error::Error;
use crate::models::{ModelKind, ModelSpec};
use crate::space::{Act, Event, ProbabilityMeasure, RiskPartition, StateSpace};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn default_kind() -> String {
    "crdu".into()
}

/// Labelled probabilities, e.g. `{"a": 0.5, "b": 0.5}`.
pub type LabelMap = IndexMap<String, f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default = "default_kind")]
    pub kind: String,
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<LabelMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_partition: Option<Vec<Vec<String>>>,
    /// Subset key (comma-joined labels) to value; `∅` and `Ω` may be omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<LabelMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<DistortionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility: Option<UtilitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<LabelMap>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Additional named partitions kept for reference.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub partitions: IndexMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub acts: IndexMap<String, LabelMap>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistortionSpec {
    Identity,
    Power { gamma: f64 },
    PiecewiseLinear { points: Vec<[f64; 2]> },
}

/// A utility family with an optional domain and affine rescaling
/// `scale · base(x) + offset`. Missing bounds mean unbounded (zero for the
/// lower end of a power utility).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum UtilitySpec {
    Identity {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<f64>,
    },
    Power {
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<f64>,
    },
    Exponential {
        beta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<f64>,
    },
    PiecewiseLinear {
        points: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<f64>,
    },
}

impl DistortionSpec {
    pub fn build(&self) -> crate::error::Result<DistortionFunction> {
        match self {
            DistortionSpec::Identity => Ok(DistortionFunction::identity()),
            DistortionSpec::Power { gamma } => DistortionFunction::power(*gamma),
            DistortionSpec::PiecewiseLinear { points } => {
                DistortionFunction::piecewise_linear(points.iter().map(|p| (p[0], p[1])).collect())
            }
        }
    }

    pub fn of(g: &DistortionFunction) -> Self {
        match g.kind() {
            DistortionKind::Identity => DistortionSpec::Identity,
            DistortionKind::Power { gamma } => DistortionSpec::Power { gamma: *gamma },
            DistortionKind::PiecewiseLinear { points } => DistortionSpec::PiecewiseLinear {
                points: points.iter().map(|&(x, y)| [x, y]).collect(),
            },
        }
    }

    /// Parses `identity`, `power:0.5` or `pwl:0:0,0.5:0.8,1:1`.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        if text == "identity" {
            return Ok(DistortionSpec::Identity);
        }
        if let Some(g) = text.strip_prefix("power:") {
            let gamma = g.parse().map_err(|_| format!("bad exponent {g:?}"))?;
            return Ok(DistortionSpec::Power { gamma });
        }
        if let Some(pts) = text.strip_prefix("pwl:") {
            let points = pts
                .split(',')
                .map(|p| {
                    let (x, y) = p
                        .split_once(':')
                        .ok_or_else(|| format!("bad point {p:?}"))?;
                    let x: f64 = x.trim().parse().map_err(|_| format!("bad point {p:?}"))?;
                    let y: f64 = y.trim().parse().map_err(|_| format!("bad point {p:?}"))?;
                    Ok([x, y])
                })
                .collect::<std::result::Result<_, String>>()?;
            return Ok(DistortionSpec::PiecewiseLinear { points });
        }
        Err(format!(
            "unknown distortion {text:?}; use identity, power:GAMMA or pwl:x:y,..."
        ))
    }
}

fn rescale(
    u: UtilityFunction,
    scale: Option<f64>,
    offset: Option<f64>,
) -> crate::error::Result<UtilityFunction> {
    match (scale, offset) {
        (None, None) => Ok(u),
        (a, b) => u.affine(a.unwrap_or(1.0), b.unwrap_or(0.0)),
    }
}

fn bound(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl UtilitySpec {
    pub fn build(&self) -> crate::error::Result<UtilityFunction> {
        let lo = |b: Option<f64>| b.unwrap_or(f64::NEG_INFINITY);
        let hi = |b: Option<f64>| b.unwrap_or(f64::INFINITY);
        match self {
            UtilitySpec::Identity {
                lo: a,
                hi: b,
                scale,
                offset,
            } => {
                let u = if a.is_none() && b.is_none() {
                    UtilityFunction::identity()
                } else {
                    UtilityFunction::identity_on(lo(*a), hi(*b))?
                };
                rescale(u, *scale, *offset)
            }
            UtilitySpec::Power {
                gamma,
                lo: a,
                hi: b,
                scale,
                offset,
            } => rescale(
                UtilityFunction::power(*gamma, a.unwrap_or(0.0), hi(*b))?,
                *scale,
                *offset,
            ),
            UtilitySpec::Exponential {
                beta,
                lo: a,
                hi: b,
                scale,
                offset,
            } => rescale(
                UtilityFunction::exponential(*beta, lo(*a), hi(*b))?,
                *scale,
                *offset,
            ),
            UtilitySpec::PiecewiseLinear {
                points,
                scale,
                offset,
            } => rescale(
                UtilityFunction::piecewise_linear(points.iter().map(|p| (p[0], p[1])).collect())?,
                *scale,
                *offset,
            ),
        }
    }

    pub fn of(u: &UtilityFunction) -> Self {
        let (a, b) = u.domain();
        let scale = (u.scale() != 1.0 || u.offset() != 0.0).then_some(u.scale());
        let offset = (u.scale() != 1.0 || u.offset() != 0.0).then_some(u.offset());
        match u.kind() {
            UtilityKind::Identity => UtilitySpec::Identity {
                lo: bound(a),
                hi: bound(b),
                scale,
                offset,
            },
            UtilityKind::Power { gamma } => UtilitySpec::Power {
                gamma: *gamma,
                lo: (a != 0.0).then_some(a),
                hi: bound(b),
                scale,
                offset,
            },
            UtilityKind::Exponential { beta } => UtilitySpec::Exponential {
                beta: *beta,
                lo: bound(a),
                hi: bound(b),
                scale,
                offset,
            },
            UtilityKind::PiecewiseLinear { points } => UtilitySpec::PiecewiseLinear {
                points: points.iter().map(|&(x, y)| [x, y]).collect(),
                scale,
                offset,
            },
        }
    }
}

/// A load failure, anchored to a line of the file where possible.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadError {
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.path, l, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for LoadError {}

/// A loaded model with its acts and extra partitions.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedModel {
    pub model: ModelSpec,
    pub acts: IndexMap<String, Act>,
    pub partitions: IndexMap<String, RiskPartition>,
}

impl LoadedModel {
    pub fn act(&self, name: &str) -> Option<&Act> {
        self.acts.get(name)
    }
}

/// Locates the line of `"key"` inside the object introduced by `"section"`.
fn locate(text: &str, section: &str, key: Option<&str>) -> Option<usize> {
    let quoted = |s: &str| format!("\"{}\"", s);
    let start = text.find(&quoted(section))?;
    let pos = match key {
        Some(k) => start + text[start..].find(&quoted(k)).unwrap_or(0),
        None => start,
    };
    Some(text[..pos].matches('\n').count() + 1)
}

struct Ctx<'a> {
    path: &'a str,
    text: &'a str,
}

impl Ctx<'_> {
    fn fail(&self, section: &str, key: Option<&str>, message: impl Into<String>) -> LoadError {
        LoadError {
            path: self.path.to_string(),
            line: locate(self.text, section, key).or_else(|| locate(self.text, section, None)),
            message: message.into(),
        }
    }

    fn wrap<T>(
        &self,
        r: crate::error::Result<T>,
        section: &str,
        key: Option<&str>,
    ) -> Result<T, LoadError> {
        r.map_err(|e| self.fail(section, key, e.to_string()))
    }
}

fn label_weights(
    ctx: &Ctx,
    s: &StateSpace,
    map: &LabelMap,
    section: &str,
) -> Result<Vec<f64>, LoadError> {
    let mut w = vec![f64::NAN; s.len()];
    for (label, &v) in map {
        let i = s.index_of(label).ok_or_else(|| {
            ctx.fail(
                section,
                Some(label),
                format!("{section}: unknown state {label:?}"),
            )
        })?;
        w[i] = v;
    }
    if let Some(i) = w.iter().position(|v| v.is_nan()) {
        return Err(ctx.fail(
            section,
            None,
            format!("{section}: missing state {:?}", s.labels()[i]),
        ));
    }
    Ok(w)
}

fn measure(
    ctx: &Ctx,
    s: &StateSpace,
    map: &LabelMap,
    section: &str,
) -> Result<ProbabilityMeasure, LoadError> {
    let w = label_weights(ctx, s, map, section)?;
    ctx.wrap(ProbabilityMeasure::new(s, w), section, None)
}

fn partition(
    ctx: &Ctx,
    s: &StateSpace,
    blocks: &[Vec<String>],
    section: &str,
) -> Result<RiskPartition, LoadError> {
    let events = blocks
        .iter()
        .map(|b| {
            ctx.wrap(
                s.parse_event(&b.join(",")),
                section,
                b.first().map(String::as_str),
            )
        })
        .collect::<Result<Vec<Event>, LoadError>>()?;
    ctx.wrap(RiskPartition::new(s, events), section, None)
}

fn capacity(ctx: &Ctx, s: &StateSpace, table: &LabelMap) -> Result<Capacity, LoadError> {
    let full = s.full();
    let mut values = vec![f64::NAN; s.event_count()];
    for (key, &v) in table {
        let e = ctx.wrap(s.parse_event(key), "capacity", Some(key))?;
        if !values[e.index()].is_nan() {
            return Err(ctx.fail(
                "capacity",
                Some(key),
                format!("duplicate capacity entry for {{{}}}", s.event_label(e)),
            ));
        }
        if e.is_empty() && v != 0.0 {
            return Err(ctx.fail(
                "capacity",
                Some(key),
                format!("capacity not grounded: ν(∅) = {v}"),
            ));
        }
        if e == full && v != 1.0 {
            return Err(ctx.fail(
                "capacity",
                Some(key),
                format!("capacity not normalized: ν(Ω) = {v}"),
            ));
        }
        values[e.index()] = v;
    }
    values[0] = 0.0;
    values[full.index()] = 1.0;
    if let Some(k) = values.iter().position(|v| v.is_nan()) {
        return Err(ctx.fail(
            "capacity",
            None,
            format!(
                "incomplete capacity table: no entry for {{{}}}",
                s.event_label(Event(k as u32))
            ),
        ));
    }
    ctx.wrap(Capacity::from_table(s, values), "capacity", None)
}

fn require<'a, T>(
    ctx: &Ctx,
    field: &'a Option<T>,
    name: &str,
    kind: ModelKind,
) -> Result<&'a T, LoadError> {
    field.as_ref().ok_or_else(|| LoadError {
        path: ctx.path.to_string(),
        line: None,
        message: format!("a {kind} model needs a \"{name}\" entry"),
    })
}

fn forbid<T>(ctx: &Ctx, field: &Option<T>, name: &str, kind: ModelKind) -> Result<(), LoadError> {
    if field.is_some() {
        return Err(ctx.fail(
            name,
            None,
            format!("\"{name}\" does not apply to a {kind} model"),
        ));
    }
    Ok(())
}

/// Parses and validates model-file text; `path` is used in messages only.
pub fn parse_model(text: &str, path: &str) -> Result<LoadedModel, LoadError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| LoadError {
        path: path.to_string(),
        line: Some(e.line()),
        message: format!("parse error: {e}"),
    })?;
    from_file(&file, text, path)
}

/// Reads and validates a model file.
pub fn load(path: &Path) -> Result<LoadedModel, LoadError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| LoadError {
        path: name.clone(),
        line: None,
        message: format!("cannot read file: {e}"),
    })?;
    parse_model(&text, &name)
}

fn from_file(file: &ModelFile, text: &str, path: &str) -> Result<LoadedModel, LoadError> {
    let ctx = Ctx { path, text };
    if file.schema_version != SCHEMA_VERSION {
        return Err(ctx.fail(
            "schema_version",
            None,
            format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            ),
        ));
    }
    let kind: ModelKind = file
        .kind
        .parse()
        .map_err(|e: Error| ctx.fail("kind", None, e.to_string()))?;
    let s = ctx.wrap(StateSpace::new(file.states.iter().cloned()), "states", None)?;

    let reference = file
        .reference
        .as_ref()
        .map(|m| measure(&ctx, &s, m, "reference"))
        .transpose()?;
    let part = file
        .risk_partition
        .as_ref()
        .map(|b| partition(&ctx, &s, b, "risk_partition"))
        .transpose()?;
    let g = file
        .distortion
        .as_ref()
        .map(|d| ctx.wrap(d.build(), "distortion", None))
        .transpose()?;
    let u = file
        .utility
        .as_ref()
        .map(|d| ctx.wrap(d.build(), "utility", None))
        .transpose()?;

    let choquet_parts =
        |ctx: &Ctx| -> Result<(Capacity, RiskPartition, ProbabilityMeasure), LoadError> {
            let table = require(ctx, &file.capacity, "capacity", kind)?;
            let p = require(ctx, &reference, "reference", kind)?.clone();
            let nu = capacity(ctx, &s, table)?;
            let part = part.clone().unwrap_or_else(|| RiskPartition::trivial(&s));
            Ok((nu, part, p))
        };
    let normalized = |u: Option<UtilityFunction>| -> Result<UtilityFunction, LoadError> {
        let u = u.unwrap_or_else(UtilityFunction::identity);
        if u.is_normalized() {
            Ok(u)
        } else {
            ctx.wrap(u.normalized(), "utility", None)
        }
    };
    let model_key = match kind {
        ModelKind::Crdu | ModelKind::Ceu | ModelKind::Dual => "capacity",
        ModelKind::Rdu | ModelKind::Entropic => "reference",
        ModelKind::Meu => "priors",
    };

    let built = match kind {
        ModelKind::Crdu => {
            forbid(&ctx, &file.priors, "priors", kind)?;
            forbid(&ctx, &file.beta, "beta", kind)?;
            let (nu, part, p) = choquet_parts(&ctx)?;
            ModelSpec::crdu(
                normalized(u)?,
                g.unwrap_or_else(DistortionFunction::identity),
                nu,
                part,
                p,
            )
        }
        ModelKind::Ceu => {
            forbid(&ctx, &file.priors, "priors", kind)?;
            forbid(&ctx, &file.beta, "beta", kind)?;
            if g.as_ref().is_some_and(|g| !g.is_identity()) {
                return Err(ctx.fail(
                    "distortion",
                    None,
                    "a CEU model has the identity distortion",
                ));
            }
            let (nu, part, p) = choquet_parts(&ctx)?;
            ModelSpec::ceu(normalized(u)?, nu, part, p)
        }
        ModelKind::Dual => {
            forbid(&ctx, &file.priors, "priors", kind)?;
            forbid(&ctx, &file.beta, "beta", kind)?;
            if u.as_ref()
                .is_some_and(|u| *u != UtilityFunction::identity())
            {
                return Err(ctx.fail("utility", None, "a dual model has the identity utility"));
            }
            let (nu, part, p) = choquet_parts(&ctx)?;
            ModelSpec::dual(g.unwrap_or_else(DistortionFunction::identity), nu, part, p)
        }
        ModelKind::Rdu => {
            forbid(&ctx, &file.capacity, "capacity", kind)?;
            forbid(&ctx, &file.priors, "priors", kind)?;
            forbid(&ctx, &file.beta, "beta", kind)?;
            let p = require(&ctx, &reference, "reference", kind)?.clone();
            ModelSpec::rdu(
                u.unwrap_or_else(UtilityFunction::identity),
                g.unwrap_or_else(DistortionFunction::identity),
                p,
            )
        }
        ModelKind::Meu => {
            forbid(&ctx, &file.capacity, "capacity", kind)?;
            forbid(&ctx, &file.distortion, "distortion", kind)?;
            forbid(&ctx, &file.beta, "beta", kind)?;
            let priors = require(&ctx, &file.priors, "priors", kind)?
                .iter()
                .map(|m| measure(&ctx, &s, m, "priors"))
                .collect::<Result<Vec<_>, _>>()?;
            let conformity = match (part.clone(), reference.clone()) {
                (Some(part), Some(p)) => Some((part, p)),
                _ => None,
            };
            ModelSpec::meu(
                u.unwrap_or_else(UtilityFunction::identity),
                priors,
                conformity,
            )
        }
        ModelKind::Entropic => {
            for (f, name) in [
                (file.capacity.is_some(), "capacity"),
                (file.priors.is_some(), "priors"),
                (file.distortion.is_some(), "distortion"),
                (file.utility.is_some(), "utility"),
                (file.risk_partition.is_some(), "risk_partition"),
            ] {
                if f {
                    return Err(ctx.fail(
                        name,
                        None,
                        format!("\"{name}\" does not apply to a {kind} model"),
                    ));
                }
            }
            let beta = *require(&ctx, &file.beta, "beta", kind)?;
            let p = require(&ctx, &reference, "reference", kind)?.clone();
            ModelSpec::entropic(beta, p)
        }
    };
    let model = ctx.wrap(built, model_key, None)?;

    let mut acts = IndexMap::new();
    for (name, payoffs) in &file.acts {
        let w = label_weights(&ctx, &s, payoffs, "acts").map_err(|mut e| {
            e.message = format!("act {name:?}: {}", e.message);
            e.line = locate(text, "acts", Some(name)).or(e.line);
            e
        })?;
        acts.insert(name.clone(), ctx.wrap(Act::new(&s, w), "acts", Some(name))?);
    }
    let mut partitions = IndexMap::new();
    for (name, blocks) in &file.partitions {
        partitions.insert(name.clone(), partition(&ctx, &s, blocks, "partitions")?);
    }
    Ok(LoadedModel {
        model,
        acts,
        partitions,
    })
}

fn label_map(s: &StateSpace, values: &[f64]) -> LabelMap {
    s.labels()
        .iter()
        .cloned()
        .zip(values.iter().copied())
        .collect()
}

fn blocks(part: &RiskPartition) -> Vec<Vec<String>> {
    let s = part.space();
    part.blocks()
        .iter()
        .map(|b| b.members().map(|i| s.labels()[i].clone()).collect())
        .collect()
}

fn capacity_table(nu: &Capacity) -> LabelMap {
    let s = nu.space();
    let full = s.full();
    s.events()
        .filter(|&e| !e.is_empty() && e != full)
        .map(|e| (s.event_label(e), nu.value(e)))
        .collect()
}

/// The file form of a model. Capacity keys list labels in state order.
pub fn to_file(loaded: &LoadedModel) -> ModelFile {
    let m = &loaded.model;
    let s = m.space();
    let mut file = ModelFile {
        schema_version: SCHEMA_VERSION,
        kind: m.kind().name().to_ascii_lowercase(),
        states: s.labels().to_vec(),
        reference: None,
        risk_partition: None,
        capacity: None,
        distortion: None,
        utility: None,
        priors: None,
        beta: None,
        partitions: loaded
            .partitions
            .iter()
            .map(|(k, p)| (k.clone(), blocks(p)))
            .collect(),
        acts: loaded
            .acts
            .iter()
            .map(|(k, a)| (k.clone(), label_map(s, a.payoffs())))
            .collect(),
    };
    match m {
        ModelSpec::Crdu(c) | ModelSpec::Ceu(c) | ModelSpec::Dual(c) => {
            file.reference = Some(label_map(s, c.reference().weights()));
            file.risk_partition = Some(blocks(c.partition()));
            file.capacity = Some(capacity_table(c.capacity()));
            if !matches!(m, ModelSpec::Ceu(_)) {
                file.distortion = Some(DistortionSpec::of(c.distortion()));
            }
            if !matches!(m, ModelSpec::Dual(_)) {
                file.utility = Some(UtilitySpec::of(c.utility()));
            }
        }
        ModelSpec::Rdu(r) => {
            file.reference = Some(label_map(s, r.reference().weights()));
            file.distortion = Some(DistortionSpec::of(r.distortion()));
            file.utility = Some(UtilitySpec::of(r.utility()));
        }
        ModelSpec::Meu(r) => {
            file.utility = Some(UtilitySpec::of(r.utility()));
            file.priors = Some(
                r.priors()
                    .iter()
                    .map(|mu| label_map(s, mu.weights()))
                    .collect(),
            );
            if let (Some(part), Some(p)) = (r.partition(), r.reference()) {
                file.risk_partition = Some(blocks(part));
                file.reference = Some(label_map(s, p.weights()));
            }
        }
        ModelSpec::Entropic(e) => {
            file.beta = Some(e.beta());
            file.reference = Some(label_map(s, e.reference().weights()));
        }
    }
    file
}

/// Pretty-printed JSON for a model.
pub fn to_json(loaded: &LoadedModel) -> String {
    let mut text = serde_json::to_string_pretty(&to_file(loaded)).expect("model files serialize");
    text.push('\n');
    text
}

/// Writes a model file.
pub fn save(loaded: &LoadedModel, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_json(loaded))
}
