//! JSON interchange for bodies and number formatting for reports.
//!
//! ```json
//! { "dim": 3, "kind": "simplex", "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]] }
//! ```
//!
//! Polytopes (`"simple-polytope"`, or `"polyhedral"` for 3-polytopes with
//! vertices of degree above 3) also carry `"neighbors"`, the adjacency list
//! of every vertex. Coordinates are written with 17 significant digits so
//! they read back bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::geom::{Body, EuclideanSimplex, SimplePolytope};
use crate::linalg::Point;

fn field_error(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("field `{field}`: {msg}"))
}

fn describe(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| field_error(field, format!("expected an array, found {}", describe(v))))
}

pub fn parse_body(text: &str) -> Result<Body> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| Error::Parse(format!("expected an object, found {}", describe(&root))))?;
    let get = |key: &str| obj.get(key).ok_or_else(|| field_error(key, "missing"));

    let dim = get("dim")?;
    let dim = dim
        .as_u64()
        .filter(|&d| (2..=16).contains(&d))
        .ok_or_else(|| field_error("dim", format!("expected an integer in 2..=16, found {dim}")))? as usize;
    let kind = get("kind")?;
    let kind = kind.as_str().ok_or_else(|| field_error("kind", format!("expected a string, found {}", describe(kind))))?;

    let mut vertices = Vec::new();
    for (i, row) in array(get("vertices")?, "vertices")?.iter().enumerate() {
        let name = format!("vertices[{i}]");
        let row = array(row, &name)?;
        if row.len() != dim {
            return Err(field_error(&name, format!("expected {dim} coordinates, found {}", row.len())));
        }
        let coords = row
            .iter()
            .enumerate()
            .map(|(j, x)| {
                x.as_f64()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| field_error(&format!("{name}[{j}]"), format!("expected a finite number, found {x}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        vertices.push(Point::from_vec(coords));
    }

    let neighbors = match obj.get("neighbors") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let mut lists = Vec::new();
            for (i, list) in array(v, "neighbors")?.iter().enumerate() {
                let name = format!("neighbors[{i}]");
                let ids = array(list, &name)?
                    .iter()
                    .enumerate()
                    .map(|(j, x)| {
                        x.as_u64()
                            .map(|k| k as usize)
                            .ok_or_else(|| field_error(&format!("{name}[{j}]"), format!("expected a vertex index, found {x}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                lists.push(ids);
            }
            Some(lists)
        }
    };

    match kind {
        "simplex" => Ok(Body::Simplex(EuclideanSimplex::new(vertices)?)),
        "simple-polytope" | "polyhedral" => {
            let neighbors = neighbors.ok_or_else(|| field_error("neighbors", "required for polytopes"))?;
            if neighbors.len() != vertices.len() {
                return Err(field_error(
                    "neighbors",
                    format!("expected {} adjacency lists, found {}", vertices.len(), neighbors.len()),
                ));
            }
            let p = SimplePolytope::from_parts(dim, vertices, neighbors)?;
            if kind == "simple-polytope" && !p.is_simple() {
                let v = (0..p.vertex_count()).find(|&v| p.neighbors(v).len() != dim).unwrap_or(0);
                return Err(Error::NotSimple(v));
            }
            Ok(Body::Polytope(p))
        }
        other => Err(field_error(
            "kind",
            format!("expected \"simplex\", \"simple-polytope\" or \"polyhedral\", found {other:?}"),
        )),
    }
}

pub fn read_body(path: &Path) -> Result<Body> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_body(&text)
}

pub fn body_kind(body: &Body) -> &'static str {
    match body {
        Body::Simplex(_) => "simplex",
        Body::Polytope(p) if p.is_simple() => "simple-polytope",
        Body::Polytope(_) => "polyhedral",
    }
}

/// Serializes a body; coordinates carry 17 significant digits.
pub fn body_to_json(body: &Body) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"dim\": {},\n  \"kind\": \"{}\",\n  \"vertices\": [", body.dim(), body_kind(body));
    for (i, v) in body.vertices().iter().enumerate() {
        let coords: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(out, "{sep}\n    [{}]", coords.join(", "));
    }
    out.push_str("\n  ]");
    if let Body::Polytope(p) = body {
        out.push_str(",\n  \"neighbors\": [");
        for (i, n) in p.all_neighbors().iter().enumerate() {
            let ids: Vec<String> = n.iter().map(|k| k.to_string()).collect();
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n    [{}]", ids.join(", "));
        }
        out.push_str("\n  ]");
    }
    out.push_str("\n}\n");
    out
}

/// Twelve significant digits, for human-facing tables.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{regular_polytope, regular_simplex, RegularSolid};

    #[test]
    fn round_trip_is_exact() {
        for body in [
            Body::from(regular_simplex(4).unwrap()),
            regular_polytope(RegularSolid::Dodecahedron).unwrap(),
            regular_polytope(RegularSolid::Icosahedron).unwrap(),
            regular_polytope(RegularSolid::Tesseract).unwrap(),
        ] {
            let text = body_to_json(&body);
            let back = parse_body(&text).unwrap();
            assert_eq!(body_kind(&back), body_kind(&body));
            for (a, b) in body.vertices().iter().zip(back.vertices()) {
                assert_eq!(a, b);
            }
        }
        assert_eq!(body_kind(&regular_polytope(RegularSolid::Octahedron).unwrap()), "polyhedral");
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_body(r#"{"dim": 2, "kind": "simplex", "vertices": [[0, 0], [1, "x"], [0, 1]]}"#).unwrap_err();
        assert!(e.to_string().contains("vertices[1][1]"), "{e}");
        let e = parse_body(r#"{"dim": 3, "vertices": []}"#).unwrap_err();
        assert!(e.to_string().contains("`kind`"), "{e}");
        let e = parse_body(r#"{"dim": 2, "kind": "simplex", "vertices": [[0, 0], [1, 0, 3], [0, 1]]}"#).unwrap_err();
        assert!(e.to_string().contains("vertices[1]"), "{e}");
        let e = parse_body(r#"{"dim": 3, "kind": "simple-polytope", "vertices": [[0, 0, 0]]}"#).unwrap_err();
        assert!(e.to_string().contains("neighbors"), "{e}");
    }

    #[test]
    fn degenerate_input_is_reported() {
        let e = parse_body(r#"{"dim": 2, "kind": "simplex", "vertices": [[0, 0], [1, 1], [2, 2]]}"#).unwrap_err();
        assert!(e.to_string().starts_with("Degenerate"), "{e}");
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt12(0.0625), "0.0625");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(1.5e-7), "1.50000000000e-7");
    }
}
