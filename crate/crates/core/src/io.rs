//! JSON file formats.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::kernel::{hull, Polytope, Vector};
use crate::rat::Rat;

/// A rational from a JSON integer or `"p/q"` string; floats only with a
/// tolerance.
pub fn rat_from_json(v: &Value, float_tol: Option<f64>) -> Result<Rat> {
    match v {
        Value::String(s) => s
            .parse::<Rat>()
            .map_err(|e| Error::InvalidInput(e.to_string())),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(Rat::integer(i));
            }
            let f = n.as_f64().ok_or_else(|| Error::InvalidInput(format!("bad number {n}")))?;
            match float_tol {
                Some(tol) => Rat::approximate(f, tol)
                    .ok_or_else(|| Error::InvalidInput(format!("cannot approximate {f} within {tol}"))),
                None => Err(Error::InvalidInput(format!(
                    "floating-point coordinate {f} needs --float-tol"
                ))),
            }
        }
        other => Err(Error::InvalidInput(format!("expected a rational, got {other}"))),
    }
}

pub fn vector_from_json(v: &Value, float_tol: Option<f64>) -> Result<Vector> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput(format!("expected a coordinate list, got {v}")))?;
    items
        .iter()
        .map(|c| rat_from_json(c, float_tol))
        .collect::<Result<Vec<_>>>()
        .map(Vector::new)
}

/// Reads `{"dim": 3, "vertices": [[x, y, z], ...]}` and takes the hull.
pub fn parse_polytope(text: &str, float_tol: Option<f64>) -> Result<Polytope> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let dim = doc
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("missing integer field \"dim\"".into()))? as usize;
    if dim != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: dim });
    }
    let verts = doc
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("missing array field \"vertices\"".into()))?;
    let points = verts
        .iter()
        .map(|v| vector_from_json(v, float_tol))
        .collect::<Result<Vec<_>>>()?;
    hull(&points)
}

#[derive(Serialize)]
struct PolytopeJson<'a> {
    dim: usize,
    vertices: &'a [Vector],
}

pub fn polytope_to_json(p: &Polytope) -> String {
    serde_json::to_string_pretty(&PolytopeJson {
        dim: p.dim(),
        vertices: p.vertices(),
    })
    .expect("polytopes serialize")
}

/// Parses `"p,q,r"` with rational entries.
pub fn parse_vector_arg(s: &str) -> Result<Vector> {
    s.split(',')
        .map(|t| t.trim().parse::<Rat>().map_err(|e| Error::InvalidInput(e.to_string())))
        .collect::<Result<Vec<_>>>()
        .map(Vector::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let text = r#"{"dim":3,"vertices":[["0","0","0"],[1,0,0],["0","1/2","0"],[0,0,"3"]]}"#;
        let p = parse_polytope(text, None).unwrap();
        assert_eq!(p.vertices().len(), 4);
        let back = parse_polytope(&polytope_to_json(&p), None).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn floats_need_tolerance() {
        let text = r#"{"dim":3,"vertices":[[0,0,0],[0.5,0,0],[0,1,0],[0,0,1]]}"#;
        assert!(matches!(parse_polytope(text, None), Err(Error::InvalidInput(_))));
        let p = parse_polytope(text, Some(1e-9)).unwrap();
        assert!(p.vertices().contains(&Vector::new(vec![Rat::new(1, 2), Rat::zero(), Rat::zero()])));
    }

    #[test]
    fn vector_args() {
        assert_eq!(parse_vector_arg("1, -2/3,4").unwrap(), Vector::new(vec![Rat::one(), Rat::new(-2, 3), Rat::integer(4)]));
        assert!(parse_vector_arg("1,x,2").is_err());
    }
}
