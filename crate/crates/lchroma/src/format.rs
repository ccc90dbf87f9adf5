//! JSON file formats: instances, colorings, pillar dumps and traces.
//!
//! Coordinates are written as JSON integers when they are integral and as
//! `{"n": .., "d": ..}` otherwise. On input a coordinate may also be a string
//! such as `"7/2"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use lchroma_core::colorer::{Audit, ColorRun};
use lchroma_core::coord::Coord;
use lchroma_core::extend::RoundTrace;
use lchroma_core::geometry::{validate_collection, GeometryError, LCollection, LShape};
use lchroma_core::graph::IntersectionGraph;
use lchroma_core::pillars::{PillarAssignment, Top};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad coordinate `{field}` of `{id}`: {reason}")]
    BadCoordinate {
        id: String,
        field: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("coloring has no color for `{0}`")]
    MissingColor(String),
    #[error("coloring names unknown shape `{0}`")]
    UnknownShape(String),
    #[error("color of `{0}` must be positive")]
    ZeroColor(String),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl std::fmt::Display for Number {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Number::Int(v) => write!(f, "{v}"),
            Number::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum CoordJson {
    Int(i64),
    Text(String),
    Frac { n: Number, d: Number },
}

impl CoordJson {
    pub fn to_coord(&self) -> Result<Coord, String> {
        match self {
            CoordJson::Int(v) => Ok(Coord::from_int(*v)),
            CoordJson::Text(s) => s.parse().map_err(|e| format!("{e}")),
            CoordJson::Frac { n, d } => format!("{n}/{d}").parse().map_err(|e| format!("{e}")),
        }
    }
}

impl From<&Coord> for CoordJson {
    fn from(c: &Coord) -> Self {
        if let Some(v) = c.to_i64() {
            return CoordJson::Int(v);
        }
        let text = c.to_string();
        let (n, d) = text.split_once('/').unwrap_or((&text, "1"));
        let num = |s: &str| s.parse().map(Number::Int).unwrap_or_else(|_| Number::Text(s.into()));
        CoordJson::Frac { n: num(n), d: num(d) }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ShapeJson {
    pub id: String,
    pub l: CoordJson,
    pub r: CoordJson,
    pub h: CoordJson,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub shapes: Vec<ShapeJson>,
}

pub fn parse_instance(text: &str) -> Result<LCollection, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let mut shapes = Vec::with_capacity(file.shapes.len());
    for s in &file.shapes {
        let get = |field: &'static str, c: &CoordJson| {
            c.to_coord().map_err(|reason| FormatError::BadCoordinate {
                id: s.id.clone(),
                field,
                reason,
            })
        };
        shapes.push(LShape::new(s.id.clone(), get("l", &s.l)?, get("r", &s.r)?, get("h", &s.h)?));
    }
    Ok(validate_collection(shapes)?)
}

pub fn instance_json(collection: &LCollection, name: Option<&str>) -> String {
    let file = InstanceFile {
        name: name.map(String::from),
        shapes: collection
            .shapes()
            .iter()
            .map(|s| ShapeJson {
                id: s.id.clone(),
                l: (&s.left).into(),
                r: (&s.right).into(),
                h: (&s.height).into(),
            })
            .collect(),
    };
    pretty(&file)
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct AuditJson {
    pub omega: usize,
    pub omega_measured: bool,
    pub flatten_classes: usize,
    /// Pillar palette size per class.
    pub k: u32,
    pub pillar_colors_used: Vec<usize>,
    pub refinement_max: usize,
    pub palette_used: usize,
    pub pipeline_bound: u64,
    pub theorem_bound: u64,
    pub within_pipeline: bool,
    pub within_theorem: bool,
}

impl From<&Audit> for AuditJson {
    fn from(a: &Audit) -> Self {
        AuditJson {
            omega: a.omega,
            omega_measured: a.omega_measured,
            flatten_classes: a.flatten_classes,
            k: a.bound.k,
            pillar_colors_used: a.pillar_colors_used.clone(),
            refinement_max: a.refinement_max,
            palette_used: a.bound.palette_used,
            pipeline_bound: a.bound.pipeline_bound as u64,
            theorem_bound: a.bound.theorem_bound as u64,
            within_pipeline: a.bound.within_pipeline,
            within_theorem: a.bound.within_theorem,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ColoringFile {
    pub colors: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditJson>,
}

pub fn coloring_json(run: &ColorRun) -> String {
    let c = &run.coloring;
    let file = ColoringFile {
        colors: c.ids().iter().cloned().zip(c.colors().iter().copied()).collect(),
        audit: Some((&c.audit).into()),
    };
    pretty(&file)
}

pub fn parse_coloring(text: &str) -> Result<ColoringFile, FormatError> {
    Ok(serde_json::from_str(text)?)
}

/// Colors of a coloring file laid out parallel to the collection.
pub fn colors_for(collection: &LCollection, file: &ColoringFile) -> Result<Vec<u32>, FormatError> {
    if let Some(id) = file.colors.keys().find(|id| collection.index_of(id).is_none()) {
        return Err(FormatError::UnknownShape(id.clone()));
    }
    collection
        .shapes()
        .iter()
        .map(|s| match file.colors.get(&s.id) {
            None => Err(FormatError::MissingColor(s.id.clone())),
            Some(0) => Err(FormatError::ZeroColor(s.id.clone())),
            Some(&c) => Ok(c),
        })
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TopJson {
    Infinite,
    TerminatesOn { pillar: usize, point: [CoordJson; 2] },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PillarJson {
    pub base: CoordJson,
    pub color: u32,
    pub corners: Vec<[CoordJson; 2]>,
    pub top: TopJson,
    pub supports: Vec<String>,
    pub assigned: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ClassDump {
    pub members: Vec<String>,
    pub pillars: Vec<PillarJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PillarDump {
    pub classes: Vec<ClassDump>,
}

fn dump_class(state: &PillarAssignment) -> ClassDump {
    let shapes = state.collection().shapes();
    let id = |i: usize| shapes[i].id.clone();
    let pillars = state
        .pillars()
        .iter()
        .enumerate()
        .map(|(p, pillar)| PillarJson {
            base: pillar.base().into(),
            color: state.colors()[p],
            corners: pillar.corners().iter().map(|c| [(&c.x).into(), (&c.y).into()]).collect(),
            top: match pillar.top() {
                Top::Infinite => TopJson::Infinite,
                Top::TerminatesOn { pillar, point } => TopJson::TerminatesOn {
                    pillar: *pillar,
                    point: [(&point.x).into(), (&point.y).into()],
                },
            },
            supports: pillar.supports().iter().map(|&s| id(s)).collect(),
            assigned: state.pillar_class(p).into_iter().map(id).collect(),
        })
        .collect();
    ClassDump {
        members: shapes.iter().map(|s| s.id.clone()).collect(),
        pillars,
    }
}

pub fn pillar_dump(run: &ColorRun) -> PillarDump {
    PillarDump {
        classes: run.classes.iter().map(|c| dump_class(&c.assignment)).collect(),
    }
}

pub fn parse_pillar_dump(text: &str) -> Result<PillarDump, FormatError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TraceLine {
    pub class: usize,
    pub round: usize,
    pub l_star: String,
    pub segment: [String; 2],
    pub new_bases: Vec<CoordJson>,
    pub new_colors: Vec<u32>,
    pub free_colors: usize,
    pub colored_before: usize,
    pub colored_after: usize,
    pub max_segment_degree: usize,
}

impl TraceLine {
    pub fn new(class: usize, r: &RoundTrace) -> Self {
        TraceLine {
            class,
            round: r.round,
            l_star: r.l_star.clone(),
            segment: [r.segment.lo.to_string(), r.segment.hi.to_string()],
            new_bases: r.new_bases.iter().map(CoordJson::from).collect(),
            new_colors: r.new_colors.clone(),
            free_colors: r.free_colors,
            colored_before: r.colored_before,
            colored_after: r.colored_after,
            max_segment_degree: r.segment_degrees.iter().copied().max().unwrap_or(0),
        }
    }
}

/// One JSON object per extension round, in class then round order.
pub fn trace_jsonl(run: &ColorRun) -> String {
    let mut out = String::new();
    for (ci, class) in run.classes.iter().enumerate() {
        for r in &class.rounds {
            out.push_str(&serde_json::to_string(&TraceLine::new(ci, r)).expect("trace lines serialize"));
            out.push('\n');
        }
    }
    out
}

/// `id id` per edge, one per line.
pub fn edge_list(g: &IntersectionGraph) -> String {
    let ids = g.ids();
    g.edges().into_iter().map(|(a, b)| format!("{} {}\n", ids[a], ids[b])).collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}
