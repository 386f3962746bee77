//! JSON file formats and the small matrix/vector notations used on the
//! command line.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{catalog, LieLattice};
use crate::padic::{format_rational, parse_rational, rat, Prime, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

/// On-disk lattice. Unlisted pairs have zero bracket.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub name: String,
    pub p: u64,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub brackets: Vec<BracketEntry>,
}

impl LatticeFile {
    pub fn from_lattice(l: &LieLattice) -> Self {
        LatticeFile {
            name: l.name().to_string(),
            p: l.p().get(),
            dim: l.dim(),
            basis: l.labels().map(<[String]>::to_vec),
            brackets: l
                .brackets()
                .map(|(i, j, c)| BracketEntry {
                    i,
                    j,
                    coeffs: c.iter().map(format_rational).collect(),
                })
                .collect(),
        }
    }

    /// Builds and validates the lattice (integrality, then Jacobi).
    pub fn to_lattice(&self) -> Result<LieLattice> {
        let p = Prime::new(self.p)?;
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            let coeffs = b.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            brackets.push((b.i, b.j, coeffs));
        }
        let mut l = LieLattice::new(self.name.clone(), p, self.dim, brackets)?;
        if let Some(labels) = &self.basis {
            l = l.with_labels(labels.clone())?;
        }
        l.validate()?;
        Ok(l)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("malformed lattice file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lattice file serialises")
    }
}

pub fn parse_lattice_json(s: &str) -> Result<LieLattice> {
    LatticeFile::from_json(s)?.to_lattice()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// `builtin:<name>[?dim=N]` or a path to a lattice file. A prime is
/// required for built-ins and, when given, must agree with a file's.
pub fn load_lattice(arg: &str, p: Option<u64>) -> Result<LieLattice> {
    if let Some(spec) = arg.strip_prefix("builtin:") {
        let p = p.ok_or_else(|| Error::InvalidInput("built-in lattices need --p".into()))?;
        let l = catalog::builtin(spec, Prime::new(p)?)?;
        l.validate()?;
        return Ok(l);
    }
    let l = parse_lattice_json(&read(Path::new(arg))?)?;
    match p {
        Some(p) if p != l.p().get() => Err(Error::InvalidInput(format!(
            "--p {p} disagrees with the file's p = {}",
            l.p()
        ))),
        _ => Ok(l),
    }
}

fn value_to_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| Error::InvalidInput(format!("{n} is not an integer; write it as \"a/b\""))),
        other => Err(Error::InvalidInput(format!("expected a rational, found {other}"))),
    }
}

/// Array of rationals given as strings or integers.
pub fn parse_vector_json(s: &str) -> Result<Vec<Rational>> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("malformed vector: {e}")))?;
    match v {
        Value::Array(xs) => xs.iter().map(value_to_rational).collect(),
        _ => Err(Error::InvalidInput("a vector must be a JSON array".into())),
    }
}

/// Array of rows, entries as strings or integers.
pub fn parse_matrix_json(s: &str) -> Result<QMatrix> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("malformed matrix: {e}")))?;
    let Value::Array(rows) = v else {
        return Err(Error::InvalidInput("a matrix must be a JSON array of rows".into()));
    };
    let rows = rows
        .iter()
        .map(|r| match r {
            Value::Array(xs) => xs.iter().map(value_to_rational).collect::<Result<Vec<_>>>(),
            _ => Err(Error::InvalidInput("each matrix row must be an array".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    QMatrix::from_rows(rows)
}

/// `diag(a,b,...)`, `scale(m)` (for `p^m I`), `id`, an inline JSON matrix,
/// or a path to a file holding one.
pub fn parse_matrix_spec(spec: &str, dim: usize, p: Prime) -> Result<QMatrix> {
    let s = spec.trim();
    let m = if let Some(body) = s.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let xs = body
            .split(',')
            .map(|x| parse_rational(x.trim()))
            .collect::<Result<Vec<_>>>()?;
        QMatrix::diag(&xs)
    } else if let Some(body) = s.strip_prefix("scale(").and_then(|r| r.strip_suffix(')')) {
        let m: i64 = body
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad exponent in {s:?}")))?;
        QMatrix::identity(dim).scale(&p.rational_pow(m))
    } else if s == "id" {
        QMatrix::identity(dim)
    } else if s.starts_with('[') {
        parse_matrix_json(s)?
    } else {
        parse_matrix_json(&read(Path::new(s))?)?
    };
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::InvalidInput(format!(
            "matrix {s:?} is {}x{}, expected {dim}x{dim}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}
