//! The JSON instance format.
//!
//! Every number is an exact string: `"p/q"`, an integer, or, for interval
//! points, `"a+b*sqrt2"`. A finite document names its points and refers to
//! them by label; an interval document describes maps by affine pieces.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use relfix_core::certifier::{Assertions, Theorem};
use relfix_core::contraction::{ComparisonFunction, ContractionCondition, Variant};
use relfix_core::instance::{FiniteInstance, IntervalInstance};
use relfix_core::mappings::{FiniteMap, Pair, Piece, PiecewiseMap};
use relfix_core::region::{Cell, Interval, NumberClass, Region};
use relfix_core::relspace::{
    metric_axioms_check, symmetric_closure, AxiomViolation, DistanceTable, FiniteRelation, FiniteSpace,
    IntervalSpace, PointId, Relation, RelationDescriptor,
};
use relfix_core::scalar::{parse_rational, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub carrier: CarrierDoc,
    pub metric: MetricDoc,
    pub relation: RelationDoc,
    pub f: MapDoc,
    pub g: MapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    /// Declared verdicts for hypotheses that cannot be decided.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assertions: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarrierDoc {
    Points(Vec<String>),
    Interval(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricDoc {
    /// `|x - y|`; finite labels must then be numbers.
    AbsoluteDifference,
    /// `|c_x - c_y|` for one coordinate per point.
    Coordinates(Vec<String>),
    Table(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationDoc {
    Pairs(Vec<(String, String)>),
    SignCone,
    Universal,
    Symmetric(Box<RelationDoc>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapDoc {
    /// Images of the points in carrier order.
    Values(Vec<String>),
    Constant(String),
    Identity,
    Pieces(Vec<PieceDoc>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub on: String,
    #[serde(default)]
    pub class: NumberClass,
    #[serde(default = "zero")]
    pub slope: String,
    pub intercept: String,
}

fn zero() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubspaceDoc {
    Points(Vec<String>),
    Cells(Vec<CellDoc>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub on: String,
    #[serde(default)]
    pub class: NumberClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", deny_unknown_fields)]
pub enum ConditionDoc {
    #[serde(rename = "m")]
    M { phi: PhiDoc },
    #[serde(rename = "q")]
    Q { phi: PhiDoc },
    #[serde(rename = "j")]
    J { alpha: String },
    #[serde(rename = "q1")]
    Q1 { k: String },
    #[serde(rename = "q2")]
    Q2 { a: String, b: String, c: String },
    #[serde(rename = "q3")]
    Q3 { k: String },
    #[serde(rename = "q4")]
    Q4 { k: String },
    #[serde(rename = "B")]
    B { phi: PhiDoc },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiDoc {
    Linear(String),
    Tabulated {
        knots: Vec<(String, String)>,
        tail_slope: String,
        ratio_bound: String,
    },
}

/// An input problem, positioned in the source text when it can be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub message: String,
    pub position: Option<(usize, usize)>,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError {
            message: message.into(),
            position: None,
        }
    }

    /// Positions the error at the first occurrence of `token` as a JSON
    /// string in `source`.
    fn at(mut self, source: Option<&str>, token: &str) -> Self {
        if let (None, Some(text)) = (self.position, source) {
            let quoted = serde_json::to_string(token).unwrap_or_default();
            if let Some(offset) = text.find(&quoted) {
                let before = &text[..offset];
                let line = before.matches('\n').count() + 1;
                let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                self.position = Some((line, column));
            }
        }
        self
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, column)) => write!(f, "line {line}, column {column}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for InputError {}

pub fn parse_document(text: &str) -> Result<InstanceDocument, InputError> {
    serde_json::from_str(text).map_err(|e| InputError {
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
        position: (e.line() > 0).then(|| (e.line(), e.column())),
    })
}

pub fn to_json(doc: &InstanceDocument) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Built {
    Finite(FiniteInstance),
    Interval(IntervalInstance),
}

/// A validated document.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub name: String,
    pub instance: Built,
    pub condition: Option<ContractionCondition>,
    pub theorem: Option<Theorem>,
    pub assertions: Assertions,
}

/// Parses and validates `text`.
pub fn load_text(text: &str, default_name: &str) -> Result<Loaded, InputError> {
    let doc = parse_document(text)?;
    build(&doc, Some(text), default_name)
}

/// Validates a parsed document; `source` positions semantic errors.
pub fn build(doc: &InstanceDocument, source: Option<&str>, default_name: &str) -> Result<Loaded, InputError> {
    let instance = match &doc.carrier {
        CarrierDoc::Points(labels) => Built::Finite(build_finite(doc, labels, source)?),
        CarrierDoc::Interval(iv) => Built::Interval(build_interval(doc, iv, source)?),
    };
    let condition = doc.condition.as_ref().map(|c| build_condition(c, source)).transpose()?;
    let theorem = doc
        .theorem
        .as_ref()
        .map(|t| t.parse::<Theorem>().map_err(|e| InputError::new(e.to_string()).at(source, t)))
        .transpose()?;
    Ok(Loaded {
        name: doc.name.clone().unwrap_or_else(|| default_name.to_string()),
        instance,
        condition,
        theorem,
        assertions: doc.assertions.clone(),
    })
}

fn rational(text: &str, source: Option<&str>) -> Result<BigRational, InputError> {
    parse_rational(text)
        .ok_or_else(|| InputError::new(format!("`{text}` is not an exact rational (expected p/q)")).at(source, text))
}

fn scalar(text: &str, source: Option<&str>) -> Result<Scalar, InputError> {
    text.parse::<Scalar>()
        .map_err(|e| InputError::new(e.to_string()).at(source, text))
}

fn interval(text: &str, source: Option<&str>) -> Result<Interval, InputError> {
    text.parse::<Interval>()
        .map_err(|e| InputError::new(format!("`{text}`: {e}")).at(source, text))
}

fn finite_relation(
    doc: &RelationDoc,
    labels: &[String],
    id: &dyn Fn(&str) -> Result<PointId, InputError>,
    coords: &dyn Fn() -> Result<Vec<Scalar>, InputError>,
) -> Result<FiniteRelation, InputError> {
    let n = labels.len();
    Ok(match doc {
        RelationDoc::Pairs(pairs) => {
            let mut r = FiniteRelation::empty(n);
            for (u, v) in pairs {
                r.insert(id(u)?, id(v)?);
            }
            r
        }
        RelationDoc::Universal => FiniteRelation::universal(n),
        RelationDoc::SignCone => {
            let xs = coords()?;
            let mut r = FiniteRelation::empty(n);
            for (i, x) in xs.iter().enumerate() {
                for (j, y) in xs.iter().enumerate() {
                    if RelationDescriptor::SignCone.contains(x, y) {
                        r.insert(PointId(i), PointId(j));
                    }
                }
            }
            r
        }
        RelationDoc::Symmetric(inner) => symmetric_closure(&finite_relation(inner, labels, id, coords)?),
    })
}

fn build_finite(doc: &InstanceDocument, labels: &[String], source: Option<&str>) -> Result<FiniteInstance, InputError> {
    let n = labels.len();
    let id = |label: &str| -> Result<PointId, InputError> {
        labels
            .iter()
            .position(|l| l == label)
            .map(PointId)
            .ok_or_else(|| InputError::new(format!("unknown point `{label}`")).at(source, label))
    };
    let label_coords = || -> Result<Vec<Scalar>, InputError> {
        labels
            .iter()
            .map(|l| {
                l.parse::<Scalar>().map_err(|_| {
                    InputError::new(format!("point `{l}` is not a number; give coordinates or a table")).at(source, l)
                })
            })
            .collect()
    };
    let coords = || -> Result<Vec<Scalar>, InputError> {
        match &doc.metric {
            MetricDoc::Coordinates(cs) => cs.iter().map(|c| scalar(c, source)).collect(),
            _ => label_coords(),
        }
    };
    let rows: Vec<Vec<BigRational>> = match &doc.metric {
        MetricDoc::Table(rows) => rows
            .iter()
            .map(|row| row.iter().map(|x| rational(x, source)).collect())
            .collect::<Result<_, _>>()?,
        MetricDoc::AbsoluteDifference | MetricDoc::Coordinates(_) => {
            let xs = coords()?;
            if xs.len() != n {
                return Err(InputError::new(format!("{} coordinates for {n} points", xs.len())));
            }
            if let Some(x) = xs.iter().find(|x| !x.is_rational()) {
                return Err(InputError::new(format!("finite distances must be rational; coordinate {x} is not")));
            }
            xs.iter()
                .map(|a| xs.iter().map(|b| (a - b).abs().as_rational().cloned().expect("rational")).collect())
                .collect()
        }
    };
    let table = DistanceTable::from_rows(rows).map_err(|e| InputError::new(e.to_string()))?;
    let relation = finite_relation(&doc.relation, labels, &id, &coords)?;
    let subspace = match &doc.subspace {
        None => None,
        Some(SubspaceDoc::Points(ps)) => Some(ps.iter().map(|p| id(p)).collect::<Result<Vec<_>, _>>()?),
        Some(SubspaceDoc::Cells(_)) => return Err(InputError::new("a finite carrier takes a subspace of points")),
    };
    let space = FiniteSpace::new(labels.to_vec(), table, relation, subspace).map_err(|e| InputError::new(e.to_string()))?;
    let axioms = metric_axioms_check(&space);
    if let Some(v) = axioms.violations.first() {
        return Err(InputError::new(format!("not a metric: {}", describe_violation(v))));
    }
    let map = |m: &MapDoc, name: &str| -> Result<FiniteMap, InputError> {
        match m {
            MapDoc::Values(vs) => {
                if vs.len() != n {
                    return Err(InputError::new(format!("map `{name}` has {} values for {n} points", vs.len())));
                }
                Ok(FiniteMap(vs.iter().map(|v| id(v)).collect::<Result<_, _>>()?))
            }
            MapDoc::Constant(c) => Ok(FiniteMap(vec![id(c)?; n])),
            MapDoc::Identity => Ok(FiniteMap::identity(n)),
            MapDoc::Pieces(_) => Err(InputError::new(format!("map `{name}`: pieces need an interval carrier"))),
        }
    };
    let pair = Pair::new(map(&doc.f, "f")?, map(&doc.g, "g")?);
    FiniteInstance::new(space, pair).map_err(|e| InputError::new(e.to_string()))
}

fn describe_violation(v: &AxiomViolation) -> String {
    match v {
        AxiomViolation::Negative { u, v, distance } => format!("d({u},{v}) = {distance} is negative"),
        AxiomViolation::NonzeroSelfDistance { u, distance } => format!("d({u},{u}) = {distance} is not 0"),
        AxiomViolation::ZeroSeparation { u, v } => format!("d({u},{v}) = 0 for distinct points"),
        AxiomViolation::Asymmetric { u, v, forward, backward } => {
            format!("d({u},{v}) = {forward} but d({v},{u}) = {backward}")
        }
        AxiomViolation::Triangle { u, v, via, direct, detour } => {
            format!("d({u},{v}) = {direct} exceeds d({u},{via}) + d({via},{v}) = {detour}")
        }
    }
}

fn interval_relation(doc: &RelationDoc, source: Option<&str>) -> Result<RelationDescriptor, InputError> {
    Ok(match doc {
        RelationDoc::Pairs(pairs) => RelationDescriptor::Explicit {
            pairs: pairs
                .iter()
                .map(|(u, v)| Ok((scalar(u, source)?, scalar(v, source)?)))
                .collect::<Result<_, InputError>>()?,
        },
        RelationDoc::SignCone => RelationDescriptor::SignCone,
        RelationDoc::Universal => RelationDescriptor::Universal,
        RelationDoc::Symmetric(inner) => interval_relation(inner, source)?.symmetric_closure(),
    })
}

fn build_interval(doc: &InstanceDocument, iv: &str, source: Option<&str>) -> Result<IntervalInstance, InputError> {
    let domain = interval(iv, source)?;
    if doc.metric != MetricDoc::AbsoluteDifference {
        return Err(InputError::new("an interval carrier takes the absolute-difference metric"));
    }
    let relation = interval_relation(&doc.relation, source)?;
    let subspace = match &doc.subspace {
        None => None,
        Some(SubspaceDoc::Points(ps)) => Some(Region::from_points(
            ps.iter().map(|p| rational(p, source)).collect::<Result<Vec<_>, _>>()?,
        )),
        Some(SubspaceDoc::Cells(cells)) => Some(Region::new(
            cells
                .iter()
                .map(|c| Ok(Cell::new(interval(&c.on, source)?, c.class)))
                .collect::<Result<_, InputError>>()?,
        )),
    };
    let space = IntervalSpace::new(domain.clone(), relation, subspace).map_err(|e| InputError::new(e.to_string()))?;
    let map = |m: &MapDoc, name: &str| -> Result<PiecewiseMap, InputError> {
        Ok(PiecewiseMap::new(match m {
            MapDoc::Pieces(ps) => ps
                .iter()
                .map(|p| {
                    Ok(Piece {
                        cell: Cell::new(interval(&p.on, source)?, p.class),
                        slope: rational(&p.slope, source)?,
                        intercept: rational(&p.intercept, source)?,
                    })
                })
                .collect::<Result<_, InputError>>()?,
            MapDoc::Constant(c) => vec![Piece::constant(Cell::all(domain.clone()), rational(c, source)?)],
            MapDoc::Identity => vec![Piece {
                cell: Cell::all(domain.clone()),
                slope: BigRational::from_integer(1.into()),
                intercept: BigRational::from_integer(0.into()),
            }],
            MapDoc::Values(_) => {
                return Err(InputError::new(format!("map `{name}`: value lists need a finite carrier")))
            }
        }))
    };
    let pair = Pair::new(map(&doc.f, "f")?, map(&doc.g, "g")?);
    IntervalInstance::new(space, pair).map_err(|e| InputError::new(e.to_string()))
}

fn build_phi(phi: &PhiDoc, source: Option<&str>) -> Result<ComparisonFunction, InputError> {
    let r = |t: &String| rational(t, source);
    match phi {
        PhiDoc::Linear(k) => ComparisonFunction::linear(r(k)?),
        PhiDoc::Tabulated {
            knots,
            tail_slope,
            ratio_bound,
        } => ComparisonFunction::tabulated(
            knots.iter().map(|(x, y)| Ok((r(x)?, r(y)?))).collect::<Result<_, InputError>>()?,
            r(tail_slope)?,
            r(ratio_bound)?,
        ),
    }
    .map_err(|e| InputError::new(format!("φ: {e}")))
}

fn build_condition(c: &ConditionDoc, source: Option<&str>) -> Result<ContractionCondition, InputError> {
    let r = |t: &String| rational(t, source);
    let (variant, phi) = match c {
        ConditionDoc::M { phi } => (Variant::M, Some(build_phi(phi, source)?)),
        ConditionDoc::Q { phi } => (Variant::N, Some(build_phi(phi, source)?)),
        ConditionDoc::B { phi } => (Variant::UniversalN, Some(build_phi(phi, source)?)),
        ConditionDoc::J { alpha } => (Variant::Linear { alpha: r(alpha)? }, None),
        ConditionDoc::Q1 { k } => (Variant::ScaledN { k: r(k)? }, None),
        ConditionDoc::Q2 { a, b, c } => (Variant::HardyRogers { a: r(a)?, b: r(b)?, c: r(c)? }, None),
        ConditionDoc::Q3 { k } => (Variant::Kannan { k: r(k)? }, None),
        ConditionDoc::Q4 { k } => (Variant::Chatterjea { k: r(k)? }, None),
    };
    ContractionCondition::new(variant, phi).map_err(|e| InputError::new(format!("condition: {e}")))
}

pub const EXAMPLE_5_1: &str = include_str!("../instances/example_5_1.json");
pub const EXAMPLE_5_2: &str = include_str!("../instances/example_5_2.json");

/// The bundled documents by name.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "example_5_1" => Some(EXAMPLE_5_1),
        "example_5_2" => Some(EXAMPLE_5_2),
        _ => None,
    }
}
