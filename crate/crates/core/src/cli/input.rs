use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::channels::{ChoiMatrix, StinespringPair};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};

/// Problems reading or validating an input document.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: String,
    dims: RawDims,
    matrices: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDims {
    n: Option<usize>,
    m: Option<usize>,
    k: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    DensityPair,
    Choi,
    Stinespring,
}

impl DocumentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::DensityPair => "density-pair",
            Self::Choi => "choi",
            Self::Stinespring => "stinespring",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputDocument {
    DensityPair { p: HermitianMatrix, q: HermitianMatrix },
    Choi(ChoiMatrix),
    Stinespring(StinespringPair),
}

impl InputDocument {
    pub fn kind(&self) -> DocumentKind {
        match self {
            Self::DensityPair { .. } => DocumentKind::DensityPair,
            Self::Choi(_) => DocumentKind::Choi,
            Self::Stinespring(_) => DocumentKind::Stinespring,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| InputError(format!("invalid input document: {e}")))?;
        let mut matrices = raw.matrices;
        let mut take = |name: &str, rows: usize, cols: usize| -> Result<ComplexMatrix, InputError> {
            let data = matrices.remove(name).ok_or_else(|| InputError(format!("missing matrix `{name}`")))?;
            to_matrix(name, data, rows, cols)
        };
        let dim = |name: &str, v: Option<usize>| -> Result<usize, InputError> {
            match v {
                Some(0) => Err(InputError(format!("dimension `{name}` must be positive"))),
                Some(d) => Ok(d),
                None => Err(InputError(format!("missing dimension `{name}`"))),
            }
        };
        let doc = match raw.kind.as_str() {
            "density-pair" => {
                let n = dim("n", raw.dims.n)?;
                let p = hermitian("P", take("P", n, n)?)?;
                let q = hermitian("Q", take("Q", n, n)?)?;
                Self::DensityPair { p, q }
            }
            "choi" => {
                let n = dim("n", raw.dims.n)?;
                let m = dim("m", raw.dims.m)?;
                let j = take("J", m * n, m * n)?;
                Self::Choi(ChoiMatrix::new(j, n, m).map_err(|e| InputError(e.to_string()))?)
            }
            "stinespring" => {
                let n = dim("n", raw.dims.n)?;
                let m = dim("m", raw.dims.m)?;
                let k = dim("k", raw.dims.k)?;
                let a0 = take("A0", m * k, n)?;
                let a1 = take("A1", m * k, n)?;
                Self::Stinespring(StinespringPair::new(a0, a1, n, m, k).map_err(|e| InputError(e.to_string()))?)
            }
            other => {
                return Err(InputError(format!(
                    "unknown kind `{other}`, expected one of `density-pair`, `choi`, `stinespring`"
                )))
            }
        };
        if let Some(extra) = matrices.keys().next() {
            return Err(InputError(format!("unexpected matrix `{extra}` for kind `{}`", raw.kind)));
        }
        Ok(doc)
    }

    /// Serializes back to the input format.
    pub fn to_json(&self) -> serde_json::Value {
        let enc = |m: &ComplexMatrix| -> serde_json::Value {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| serde_json::json!([z.re, z.im])).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into()
        };
        match self {
            Self::DensityPair { p, q } => serde_json::json!({
                "kind": "density-pair",
                "dims": {"n": p.dim()},
                "matrices": {"P": enc(p), "Q": enc(q)},
            }),
            Self::Choi(j) => serde_json::json!({
                "kind": "choi",
                "dims": {"n": j.input_dim(), "m": j.output_dim()},
                "matrices": {"J": enc(j.matrix())},
            }),
            Self::Stinespring(s) => serde_json::json!({
                "kind": "stinespring",
                "dims": {"n": s.input_dim(), "m": s.output_dim(), "k": s.env_dim()},
                "matrices": {"A0": enc(s.a0()), "A1": enc(s.a1())},
            }),
        }
    }
}

fn to_matrix(name: &str, data: Vec<Vec<[f64; 2]>>, rows: usize, cols: usize) -> Result<ComplexMatrix, InputError> {
    if data.len() != rows {
        return Err(InputError(format!("matrix `{name}` has {} rows, expected {rows}", data.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(InputError(format!("matrix `{name}` row {i} has {} entries, expected {cols}", row.len())));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(InputError(format!("matrix `{name}` entry ({i}, {j}) is not finite")));
            }
            entries.push(C64::new(*re, *im));
        }
    }
    ComplexMatrix::new(rows, cols, entries).map_err(|e| InputError(format!("matrix `{name}`: {e}")))
}

fn hermitian(name: &str, m: ComplexMatrix) -> Result<HermitianMatrix, InputError> {
    let tol = 1e-10 * m.max_abs().max(1.0);
    HermitianMatrix::with_tolerance(m, tol).map_err(|e| InputError(format!("matrix `{name}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIR: &str = r#"{"kind": "density-pair", "dims": {"n": 1},
        "matrices": {"P": [[[1.0, 0.0]]], "Q": [[[0.5, 0.0]]]}}"#;

    #[test]
    fn parses_and_round_trips() {
        let doc = InputDocument::parse(PAIR).unwrap();
        assert_eq!(doc.kind(), DocumentKind::DensityPair);
        let again = InputDocument::parse(&doc.to_json().to_string()).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn error_messages_name_the_problem() {
        let e = InputDocument::parse(r#"{"kind": "choi", "dims": {"n": 1, "m": 1}}"#).unwrap_err();
        assert!(e.0.contains("missing field `matrices`"), "{e}");
        let e = InputDocument::parse("{\n\"kind\": \"choi\",\n\"dims\": {").unwrap_err();
        assert!(e.0.contains("line 3"), "{e}");
        let e = InputDocument::parse(r#"{"kind": "choi", "dims": {"n": 1, "m": 1}, "matrices": {}}"#).unwrap_err();
        assert!(e.0.contains("missing matrix `J`"), "{e}");
        let e = InputDocument::parse(r#"{"kind": "unitary", "dims": {}, "matrices": {}}"#).unwrap_err();
        assert!(e.0.contains("unknown kind"), "{e}");
        let bad = PAIR.replace("[[[0.5, 0.0]]]", "[[[0.5, 0.0], [1.0, 0.0]]]");
        assert!(InputDocument::parse(&bad).unwrap_err().0.contains("row 0"));
    }

    #[test]
    fn rejects_non_hermitian_density() {
        let doc = r#"{"kind": "density-pair", "dims": {"n": 2},
            "matrices": {"P": [[[1,0],[1,0]],[[0,0],[1,0]]], "Q": [[[1,0],[0,0]],[[0,0],[1,0]]]}}"#;
        assert!(InputDocument::parse(doc).unwrap_err().0.contains("`P`"));
    }
}
