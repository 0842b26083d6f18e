//! JSON datum format `cone-morse-datum/1`.

use std::collections::BTreeMap;
use std::path::Path;

use cone_morse::morse::CriticalPoint;
use cone_morse::ratlinalg::{format_rational, parse_rational, ParseRationalError};
use cone_morse::{Entry, MorseDatum};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "cone-morse-datum/1";

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{path}: {err}")]
    Json { path: String, err: serde_json::Error },
    #[error("{path}: unsupported format {found:?}, expected {FORMAT:?}")]
    Format { path: String, found: String },
    #[error("{path}: {map}[{entry}].coeff: {err}")]
    Coeff { path: String, map: &'static str, entry: usize, err: ParseRationalError },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Generator {
    id: String,
    index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRecord {
    from: String,
    to: String,
    coeff: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumFile {
    format: String,
    name: String,
    manifold_dim: usize,
    p: usize,
    generators: Vec<Generator>,
    boundary: Vec<EntryRecord>,
    cone_map: Vec<EntryRecord>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

/// Canonical JSON text of `d`, newline terminated.
pub fn emit(d: &MorseDatum) -> String {
    let d = d.canonicalize();
    let records = |es: &[Entry]| {
        es.iter()
            .map(|e| EntryRecord { from: e.from.clone(), to: e.to.clone(), coeff: format_rational(&e.coeff) })
            .collect()
    };
    let file = DatumFile {
        format: FORMAT.into(),
        name: d.name.clone(),
        manifold_dim: d.manifold_dim,
        p: d.p,
        generators: d.points.iter().map(|c| Generator { id: c.id.clone(), index: c.index }).collect(),
        boundary: records(&d.boundary),
        cone_map: records(&d.cone_map),
        metadata: d.metadata.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("datum serializes");
    s.push('\n');
    s
}

/// Parses datum text; `path` only labels errors.
pub fn parse(text: &str, path: &str) -> Result<MorseDatum, FileError> {
    let file: DatumFile =
        serde_json::from_str(text).map_err(|err| FileError::Json { path: path.into(), err })?;
    if file.format != FORMAT {
        return Err(FileError::Format { path: path.into(), found: file.format });
    }
    let entries = |map: &'static str, records: Vec<EntryRecord>| {
        records
            .into_iter()
            .enumerate()
            .map(|(entry, r)| {
                let coeff = parse_rational(&r.coeff)
                    .map_err(|err| FileError::Coeff { path: path.into(), map, entry, err })?;
                Ok(Entry::new(r.from, r.to, coeff))
            })
            .collect::<Result<Vec<_>, FileError>>()
    };
    Ok(MorseDatum {
        name: file.name,
        manifold_dim: file.manifold_dim,
        p: file.p,
        points: file.generators.into_iter().map(|g| CriticalPoint { id: g.id, index: g.index }).collect(),
        boundary: entries("boundary", file.boundary)?,
        cone_map: entries("cone_map", file.cone_map)?,
        metadata: file.metadata,
    })
}

pub fn read(path: &Path) -> Result<MorseDatum, FileError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|err| FileError::Io { path: label.clone(), err })?;
    parse(&text, &label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cone_morse::examples::{projective_space, torus, TorusConvention};
    use cone_morse::morse::stabilize;

    #[test]
    fn round_trip() {
        let t = torus(TorusConvention::adjacent(2)).unwrap();
        let data = [t.clone(), projective_space(3, 1).unwrap(), stabilize(&t, 1, "s").unwrap()];
        for d in data {
            let text = emit(&d);
            let back = parse(&text, "mem").unwrap();
            assert_eq!(back, d.canonicalize());
            assert_eq!(emit(&back), text);
        }
    }

    #[test]
    fn bad_coefficient() {
        let text = emit(&torus(TorusConvention::adjacent(1)).unwrap()).replacen("\"coeff\": \"1\"", "\"coeff\": \"1/0\"", 1);
        let err = parse(&text, "t2.json").unwrap_err();
        assert!(err.to_string().contains("invalid rational"), "{err}");
        assert!(err.to_string().starts_with("t2.json: cone_map[0].coeff"), "{err}");
    }

    #[test]
    fn wrong_format() {
        let text = emit(&torus(TorusConvention::adjacent(1)).unwrap()).replace(FORMAT, "other/2");
        assert!(matches!(parse(&text, "x"), Err(FileError::Format { .. })));
    }
}
