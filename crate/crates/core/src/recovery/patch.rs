use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::direction_space::Mode;
use crate::error::{Error, Result};
use crate::kernel::{Polytope, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchRecord {
    pub cell: usize,
    pub sign: Sign,
    /// `None` stands for the forced zero offset of sections.
    pub offset: Option<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchInput {
    pub cell_count: usize,
    pub records: Vec<PatchRecord>,
}

/// Whether `Q = sign·P + b` as vertex multisets.
pub fn relation_holds(p: &Polytope, q: &Polytope, sign: Sign, b: &Vector) -> bool {
    if p.vertices().len() != q.vertices().len() {
        return false;
    }
    let mut moved: Vec<Vector> = p
        .vertices()
        .iter()
        .map(|v| match sign {
            Sign::Plus => v + b,
            Sign::Minus => b - v,
        })
        .collect();
    moved.sort();
    moved == q.sorted_vertices()
}

/// Center of symmetry of `p`, if it is centrally symmetric.
fn symmetry_center(p: &Polytope) -> Option<Vector> {
    let two_c = p.vertex_centroid().scale(&crate::rat::Rat::integer(2));
    relation_holds(p, p, Sign::Minus, &two_c).then_some(two_c)
}

/// Glues per-cell `(sign, offset)` records into one global relation
/// `Q = ±P + b`, verified exactly on the vertex sets. A `+` relation is
/// preferred whenever one holds.
pub fn global_patch(patch: &PatchInput, p: &Polytope, q: &Polytope, mode: Mode) -> Result<(Sign, Vector)> {
    let mut seen = HashSet::new();
    for r in &patch.records {
        if r.cell >= patch.cell_count || !seen.insert(r.cell) {
            return Err(Error::Precondition(format!("cell {} is out of range or repeated", r.cell)));
        }
    }
    if seen.len() != patch.cell_count {
        return Err(Error::Precondition("every cell needs exactly one record".into()));
    }
    if mode == Mode::Sections && patch.records.iter().any(|r| r.offset.is_some()) {
        return Err(Error::Precondition("sections records carry no offset".into()));
    }
    let zero = Vector::zeros(3);
    let values: BTreeSet<(Sign, Vector)> = patch
        .records
        .iter()
        .map(|r| (r.sign, r.offset.clone().unwrap_or_else(|| zero.clone())))
        .collect();
    let mut verified: BTreeSet<(Sign, Vector)> = BTreeSet::new();
    for (sign, b) in values {
        if relation_holds(p, q, sign, &b) {
            if sign == Sign::Minus {
                // −P + b = P + (b − 2c) when P is symmetric about c.
                if let Some(two_c) = symmetry_center(p) {
                    verified.insert((Sign::Plus, &b - &two_c));
                }
            }
            verified.insert((sign, b));
        }
    }
    if let Some(best) = verified.into_iter().next() {
        return Ok(best);
    }
    let mut records: Vec<&PatchRecord> = patch.records.iter().collect();
    records.sort_by_key(|r| r.cell);
    let first = records
        .first()
        .ok_or_else(|| Error::Precondition("no cell records".into()))?;
    let other = records
        .iter()
        .find(|r| r.sign != first.sign || r.offset != first.offset)
        .unwrap_or(first);
    Err(Error::NoConsistentPatch(first.cell, other.cell))
}
