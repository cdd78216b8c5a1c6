//! JSON file formats for instances, solutions and 3D piercing lifts.
//!
//! Coordinates are stored as exact fraction strings `"p/q"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Objective, Orientation, Rect, Segment, Solution, StabInstance};
use crate::rational::{serde_frac, Rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RectJson {
    pub id: u64,
    #[serde(with = "serde_frac")]
    pub x1: Rational,
    #[serde(with = "serde_frac")]
    pub x2: Rational,
    #[serde(with = "serde_frac")]
    pub y1: Rational,
    #[serde(with = "serde_frac")]
    pub y2: Rational,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum OrientJson {
    #[default]
    #[serde(rename = "h")]
    H,
    #[serde(rename = "v")]
    V,
}

impl From<Orientation> for OrientJson {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Horizontal => OrientJson::H,
            Orientation::Vertical => OrientJson::V,
        }
    }
}

impl From<OrientJson> for Orientation {
    fn from(o: OrientJson) -> Self {
        match o {
            OrientJson::H => Orientation::Horizontal,
            OrientJson::V => Orientation::Vertical,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SegmentJson {
    pub id: u64,
    #[serde(with = "serde_frac")]
    pub x1: Rational,
    #[serde(with = "serde_frac")]
    pub x2: Rational,
    #[serde(with = "serde_frac")]
    pub y: Rational,
    #[serde(default)]
    pub orient: OrientJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveJson {
    #[default]
    Length,
    Cardinality,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    pub rects: Vec<RectJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<SegmentJson>>,
    #[serde(default)]
    pub objective: ObjectiveJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionJson {
    pub segments: Vec<SegmentJson>,
    #[serde(with = "serde_frac")]
    pub cost: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<serde_json::Value>,
}

impl From<&Rect> for RectJson {
    fn from(r: &Rect) -> Self {
        RectJson {
            id: r.id,
            x1: r.x_left.clone(),
            x2: r.x_right.clone(),
            y1: r.y_bottom.clone(),
            y2: r.y_top.clone(),
            mult: r.multiplicity,
        }
    }
}

impl TryFrom<RectJson> for Rect {
    type Error = Error;
    fn try_from(r: RectJson) -> Result<Rect> {
        Rect::new(r.id, r.x1, r.x2, r.y1, r.y2)?.with_multiplicity(r.mult)
    }
}

impl From<&Segment> for SegmentJson {
    fn from(s: &Segment) -> Self {
        SegmentJson {
            id: s.id,
            x1: s.x_left.clone(),
            x2: s.x_right.clone(),
            y: s.y.clone(),
            orient: s.orientation.into(),
        }
    }
}

impl TryFrom<SegmentJson> for Segment {
    type Error = Error;
    fn try_from(s: SegmentJson) -> Result<Segment> {
        let seg = Segment { id: s.id, x_left: s.x1, x_right: s.x2, y: s.y, orientation: s.orient.into() };
        seg.validate()?;
        Ok(seg)
    }
}

impl From<Objective> for ObjectiveJson {
    fn from(o: Objective) -> Self {
        match o {
            Objective::Length => ObjectiveJson::Length,
            Objective::Cardinality => ObjectiveJson::Cardinality,
        }
    }
}

impl From<ObjectiveJson> for Objective {
    fn from(o: ObjectiveJson) -> Self {
        match o {
            ObjectiveJson::Length => Objective::Length,
            ObjectiveJson::Cardinality => Objective::Cardinality,
        }
    }
}

pub fn segments_to_json(segs: &[Segment]) -> Vec<SegmentJson> {
    segs.iter().map(SegmentJson::from).collect()
}

pub fn segments_from_json(segs: Vec<SegmentJson>) -> Result<Vec<Segment>> {
    segs.into_iter().map(Segment::try_from).collect()
}

pub fn instance_to_json(inst: &StabInstance) -> InstanceJson {
    InstanceJson {
        rects: inst.rects.iter().map(RectJson::from).collect(),
        candidates: inst.fixed_candidates.as_deref().map(segments_to_json),
        objective: inst.objective.into(),
    }
}

pub fn instance_from_json(j: InstanceJson) -> Result<StabInstance> {
    let rects = j.rects.into_iter().map(Rect::try_from).collect::<Result<Vec<_>>>()?;
    let cands = j.candidates.map(segments_from_json).transpose()?;
    StabInstance::new(rects, cands, j.objective.into())
}

pub fn solution_to_json(sol: &Solution, stats: Option<serde_json::Value>) -> SolutionJson {
    SolutionJson {
        segments: segments_to_json(&sol.segments),
        cost: sol.cost.clone(),
        assignment: sol
            .assignment
            .as_ref()
            .map(|m| m.iter().map(|(k, v)| (k.to_string(), *v)).collect()),
        stats,
    }
}

pub fn solution_from_json(j: SolutionJson) -> Result<Solution> {
    let assignment = match j.assignment {
        Some(m) => Some(
            m.into_iter()
                .map(|(k, v)| {
                    k.parse::<u64>()
                        .map(|k| (k, v))
                        .map_err(|_| Error::Parse(format!("bad rect id in assignment: {k:?}")))
                })
                .collect::<Result<BTreeMap<_, _>>>()?,
        ),
        None => None,
    };
    Ok(Solution { segments: segments_from_json(j.segments)?, cost: j.cost, assignment })
}

pub fn read_instance(text: &str) -> Result<StabInstance> {
    instance_from_json(serde_json::from_str(text)?)
}

pub fn write_instance(inst: &StabInstance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&instance_to_json(inst))?)
}

pub fn read_solution(text: &str) -> Result<Solution> {
    solution_from_json(serde_json::from_str(text)?)
}

pub fn write_solution(sol: &Solution, stats: Option<serde_json::Value>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&solution_to_json(sol, stats))?)
}
