//! Body files: `{"dim": n, "vertices": [[x, y, ...], ...]}`.
//!
//! Only vertices are stored; facets are recomputed on load. Coordinates are
//! written with 17 significant digits, which round-trips every double.

use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::polytope::{canonicalize, Polytope};
use crate::vector::{Vector, MAX_DIM};

/// Serializes the vertex list of `p`.
pub fn body_to_json(p: &Polytope) -> String {
    let rows: Vec<String> = p
        .vertices()
        .iter()
        .map(|v| {
            let c: Vec<String> = v.coords().iter().map(|x| format!("{x:.16e}")).collect();
            format!("    [{}]", c.join(", "))
        })
        .collect();
    format!("{{\n  \"dim\": {},\n  \"vertices\": [\n{}\n  ]\n}}\n", p.dim(), rows.join(",\n"))
}

/// Parses a body document and canonicalizes its vertices.
pub fn body_from_json(text: &str) -> Result<Polytope> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let field = |name: &str| {
        doc.get(name).ok_or_else(|| Error::Parse {
            location: name.to_string(),
            message: "missing field".into(),
        })
    };
    let dim = field("dim")?
        .as_u64()
        .filter(|d| (1..=MAX_DIM as u64).contains(d))
        .ok_or_else(|| Error::Parse {
            location: "dim".into(),
            message: format!("expected an integer in 1..={MAX_DIM}"),
        })? as usize;
    let rows = field("vertices")?.as_array().ok_or_else(|| Error::Parse {
        location: "vertices".into(),
        message: "expected an array".into(),
    })?;
    let mut pts = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let coords = row.as_array().ok_or_else(|| Error::Parse {
            location: format!("vertices[{i}]"),
            message: "expected an array of coordinates".into(),
        })?;
        if coords.len() != dim {
            return Err(Error::Parse {
                location: format!("vertices[{i}]"),
                message: format!("expected {dim} coordinates, found {}", coords.len()),
            });
        }
        let mut c = [0.0; MAX_DIM];
        for (j, x) in coords.iter().enumerate() {
            c[j] = x.as_f64().filter(|x| x.is_finite()).ok_or_else(|| Error::Parse {
                location: format!("vertices[{i}][{j}]"),
                message: "expected a finite number".into(),
            })?;
        }
        pts.push(Vector::from_slice(&c[..dim]));
    }
    if pts.is_empty() {
        return Err(Error::degenerate("body file has no vertices"));
    }
    canonicalize(&pts)
}

pub fn read_body(path: impl AsRef<Path>) -> Result<Polytope> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    body_from_json(&text)
}

/// Writes `p` to `path` through a sibling temporary file and a rename, so
/// readers never observe a partial file.
pub fn write_body(p: &Polytope, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), body_to_json(p).as_bytes())
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate_body, BodySpec};

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        for spec in [
            BodySpec::cube(2),
            BodySpec::random_polytope(2, 9, 3),
            BodySpec::random_polytope(3, 15, 4),
            BodySpec::ellipse(2.0, 1.0, 0.3),
        ] {
            let p = generate_body(&spec).unwrap();
            let path = dir.path().join("body.json");
            write_body(&p, &path).unwrap();
            let q = read_body(&path).unwrap();
            assert_eq!(p.vertices(), q.vertices());
        }
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let err = body_from_json(r#"{"dim": 2, "vertices": [[0, 0], [1, 1]]}"#).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)), "{err}");
        let err = body_from_json(r#"{"dim": 2, "vertices": [[0, 0], [1, 1], [2, 2]]}"#).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)), "{err}");
    }

    #[test]
    fn ragged_rows_report_their_location() {
        let err = body_from_json(r#"{"dim": 2, "vertices": [[0, 0], [1, 0, 3], [0, 1]]}"#).unwrap_err();
        match err {
            Error::Parse { location, .. } => assert_eq!(location, "vertices[1]"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        let err = body_from_json("{\n  \"dim\": 2,\n  \"vertices\": [[0, 0],, ]\n}").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.starts_with("line 3"), "{location}"),
            e => panic!("unexpected {e}"),
        }
    }
}
