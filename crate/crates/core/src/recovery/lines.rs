use serde::{Deserialize, Serialize};

use super::grid_directions;
use super::patch::Sign;
use crate::error::{Error, Result};
use crate::kernel::Vector;
use crate::rat::Rat;

/// The line `{b + t a}` with `a` a canonical primitive integer direction and
/// `b` the foot point, `a · b = 0`. Equal lines have equal fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LineJson")]
pub struct ParamLine {
    a: Vector,
    a2: Rat,
    b: Vector,
}

#[derive(Deserialize)]
struct LineJson {
    a: Vector,
    b: Vector,
}

impl TryFrom<LineJson> for ParamLine {
    type Error = Error;
    fn try_from(raw: LineJson) -> Result<ParamLine> {
        ParamLine::through(&raw.b, &raw.a)
    }
}

impl ParamLine {
    /// The line through `point` with direction `dir`.
    pub fn through(point: &Vector, dir: &Vector) -> Result<ParamLine> {
        if point.dim() != 3 || dir.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: point.dim().min(dir.dim()),
            });
        }
        if dir.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let a = dir.canonical_line();
        let a2 = a.norm2();
        let b = point - &a.scale(&(&point.dot(&a) / &a2));
        if b.is_zero() {
            return Err(Error::OriginLine);
        }
        Ok(ParamLine { a, a2, b })
    }

    pub fn a(&self) -> &Vector {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn a_norm2(&self) -> &Rat {
        &self.a2
    }

    /// `−l`, the point reflection through the origin.
    pub fn reflect(&self) -> ParamLine {
        ParamLine {
            b: -&self.b,
            ..self.clone()
        }
    }

    pub fn translate(&self, t: &Vector) -> Result<ParamLine> {
        ParamLine::through(&(&self.b + t), &self.a)
    }

    pub fn signed(&self, s: Sign) -> ParamLine {
        match s {
            Sign::Plus => self.clone(),
            Sign::Minus => self.reflect(),
        }
    }

    /// Numerator and denominator-free pieces of `v(ξ) = w / s`, the point
    /// where the line meets `ξ⊥`.
    fn cleared_point(&self, xi: &Vector) -> Result<(Rat, Vector)> {
        let s = self.a.dot(xi);
        if s.is_zero() {
            return Err(Error::DirectionOnLine(xi.clone()));
        }
        let w = &self.b.scale(&s) - &self.a.scale(&self.b.dot(xi));
        Ok((s, w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pairing {
    #[serde(rename = "13-24")]
    P13_24,
    #[serde(rename = "14-23")]
    P14_23,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum LinePairVerdict {
    /// `l3 = l1 + b`, `l4 = l2 + b`.
    ParallelTranslate { b: Vector },
    /// `l3 = −l1 + c`, `l4 = −l2 + c`.
    ParallelSwap { c: Vector },
    /// `l3 = s1 l1`, `l4 = s2 l2` (or with `l3`, `l4` exchanged).
    SignMatch { s1: Sign, s2: Sign, pairing: Pairing },
    Inconsistent { witness: Vector },
}

/// `(|s1 s2 (v1 − v2)|², (s1 s2)²)` with `s_i = a_i · ξ`.
fn cleared_distance(l1: &ParamLine, l2: &ParamLine, xi: &Vector) -> Result<(Rat, Rat)> {
    let (s1, w1) = l1.cleared_point(xi)?;
    let (s2, w2) = l2.cleared_point(xi)?;
    let diff = &w1.scale(&s2) - &w2.scale(&s1);
    let q = &s1 * &s2;
    Ok((diff.norm2(), &q * &q))
}

fn distances_agree(l: [&ParamLine; 4], xi: &Vector) -> Result<bool> {
    let (p12, q12) = cleared_distance(l[0], l[1], xi)?;
    let (p34, q34) = cleared_distance(l[2], l[3], xi)?;
    Ok(&p12 * &q34 == &p34 * &q12)
}

fn grid_witness(l: [&ParamLine; 4]) -> Result<LinePairVerdict> {
    // The cleared identity has degree 8, so an 11-point grid per axis
    // cannot hide a nonzero difference.
    grid_directions(5)
        .filter(|xi| l.iter().all(|line| !line.a.dot(xi).is_zero()))
        .find(|xi| !distances_agree(l, xi).expect("grid directions avoid the lines"))
        .map(|witness| LinePairVerdict::Inconsistent { witness })
        .ok_or_else(|| Error::Precondition("no separating direction for an unclassified quadruple".into()))
}

/// Classifies four lines whose sections satisfy `|v1 v2| = |v3 v4|`.
pub fn line_pair_classify(
    l1: &ParamLine,
    l2: &ParamLine,
    l3: &ParamLine,
    l4: &ParamLine,
    dirs: &[Vector],
) -> Result<LinePairVerdict> {
    let lines = [l1, l2, l3, l4];
    for xi in dirs {
        if lines.iter().any(|l| l.a.dot(xi).is_zero()) {
            return Err(Error::DirectionOnLine(xi.clone()));
        }
    }
    for xi in dirs {
        if !distances_agree(lines, xi)? {
            return Ok(LinePairVerdict::Inconsistent { witness: xi.clone() });
        }
    }
    if l1.a == l2.a {
        if l3.a == l1.a && l4.a == l1.a {
            let b = &l3.b - &l1.b;
            if l2.translate(&b).ok().as_ref() == Some(l4) {
                return Ok(LinePairVerdict::ParallelTranslate { b });
            }
            let c = &l3.b + &l1.b;
            if l2.reflect().translate(&c).ok().as_ref() == Some(l4) {
                return Ok(LinePairVerdict::ParallelSwap { c });
            }
        }
        return grid_witness(lines);
    }
    for (pairing, x, y) in [(Pairing::P13_24, l3, l4), (Pairing::P14_23, l4, l3)] {
        for s1 in [Sign::Plus, Sign::Minus] {
            for s2 in [Sign::Plus, Sign::Minus] {
                if *x == l1.signed(s1) && *y == l2.signed(s2) {
                    let span = Vector::rank(&[l1.a.clone(), l1.b.clone(), l2.a.clone(), l2.b.clone()]);
                    if s1 != s2 && span == 3 {
                        return grid_witness(lines);
                    }
                    return Ok(LinePairVerdict::SignMatch { s1, s2, pairing });
                }
            }
        }
    }
    grid_witness(lines)
}

/// Whether the section triangle `v_p v_q v_r` has a right angle at `v_p`.
pub fn right_angle_guard(lp: &ParamLine, lq: &ParamLine, lr: &ParamLine, xi: &Vector) -> Result<bool> {
    let (sp, wp) = lp.cleared_point(xi)?;
    let (sq, wq) = lq.cleared_point(xi)?;
    let (sr, wr) = lr.cleared_point(xi)?;
    let f = &(&(&sp * &sp) * &wq.dot(&wr)) - &(&(&sp * &sr) * &wq.dot(&wp)) - &(&sp * &sq) * &wp.dot(&wr)
        + &(&sq * &sr) * &wp.norm2();
    Ok(f.is_zero())
}
