//! Polytope specifications, from JSON or from command-line flags.
//!
//! The JSON form is one object:
//!
//! ```json
//! {"kind": "cross",   "dim": 2, "axes": ["sqrt(2)", "1+sqrt(2)"]}
//! {"kind": "simplex", "dim": 2, "axes": ["sqrt(2)", "1"], "signs": [1, -1]}
//! {"kind": "simplex", "dim": 2, "A": [[1, 1], [-1, 0], [0, -1]], "b": [1, 0, 0]}
//! {"kind": "hrep",    "dim": 1, "A": [["sqrt(2)"], [-1]], "b": [3, 3]}
//! ```
//!
//! Entries are integers or field-element strings such as `"1 - 1/6*sqrt(2)"`.

use latcount_core::polytope::{CrossPolytope, HPolytope, OrthantSimplex};
use latcount_core::AlgebraicQuad;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug)]
pub enum PolytopeSpec {
    Cross(CrossPolytope),
    /// `Σ ε_i x_i / a_i ≤ 1` in one orthant.
    Orthant(OrthantSimplex),
    /// A simplex as `n + 1` inequalities.
    Simplex(HPolytope),
    HRep(HPolytope),
}

impl PolytopeSpec {
    pub fn dim(&self) -> usize {
        match self {
            Self::Cross(c) => c.dim(),
            Self::Orthant(s) => s.dim(),
            Self::Simplex(p) | Self::HRep(p) => p.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Cross(_) => "cross",
            Self::Orthant(_) | Self::Simplex(_) => "simplex",
            Self::HRep(_) => "hrep",
        }
    }

    /// Axis lengths, for the kinds that have them.
    pub fn axes(&self) -> Option<&[AlgebraicQuad]> {
        match self {
            Self::Cross(c) => Some(c.axes()),
            Self::Orthant(s) => Some(s.axes()),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    dim: Option<usize>,
    axes: Option<Vec<Entry>>,
    signs: Option<Vec<i8>>,
    open: Option<Vec<bool>>,
    #[serde(rename = "A")]
    a: Option<Vec<Vec<Entry>>>,
    b: Option<Vec<Entry>>,
    strict: Option<Vec<bool>>,
}

/// Parses a field element, with `sqrtD` standing for `sqrt(D)` when `d` is
/// given.
pub fn parse_quad(text: &str, d: Option<u64>) -> Result<AlgebraicQuad, String> {
    let expanded = match d {
        Some(d) => text.replace("sqrtD", &format!("sqrt({d})")),
        None => text.to_owned(),
    };
    expanded
        .parse()
        .map_err(|e: latcount_core::Error| format!("{expanded:?}: {e}"))
}

fn entry(e: &Entry, field: String) -> CliResult<AlgebraicQuad> {
    match e {
        Entry::Int(n) => Ok(AlgebraicQuad::from_int(*n)),
        Entry::Text(s) => parse_quad(s, None).map_err(|m| CliError::spec(field, m)),
    }
}

pub fn parse_polytope(text: &str) -> CliResult<PolytopeSpec> {
    let raw: RawSpec = serde_json::from_str(text)?;
    let axes = raw
        .axes
        .as_ref()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, e)| entry(e, format!("axes[{i}]")))
                .collect::<CliResult<Vec<_>>>()
        })
        .transpose()?;
    let matrix = raw
        .a
        .as_ref()
        .map(|rows| {
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, e)| entry(e, format!("A[{i}][{j}]")))
                        .collect::<CliResult<Vec<_>>>()
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .transpose()?;
    let rhs = raw
        .b
        .as_ref()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, e)| entry(e, format!("b[{i}]")))
                .collect::<CliResult<Vec<_>>>()
        })
        .transpose()?;

    let spec = match (raw.kind.as_str(), axes, matrix, rhs) {
        ("cross", Some(axes), None, None) => {
            if raw.signs.is_some() || raw.open.is_some() || raw.strict.is_some() {
                return Err(CliError::spec("kind", "a cross-polytope takes only axes"));
            }
            PolytopeSpec::Cross(CrossPolytope::new(axes).map_err(|e| CliError::spec("axes", e))?)
        }
        ("simplex", Some(axes), None, None) => {
            let d = axes.len();
            let signs = raw.signs.clone().unwrap_or_else(|| vec![1; d]);
            let open = raw.open.clone().unwrap_or_else(|| vec![false; d]);
            PolytopeSpec::Orthant(
                OrthantSimplex::new(axes, signs, open).map_err(|e| CliError::spec("axes", e))?,
            )
        }
        ("simplex" | "hrep", None, Some(a), Some(b)) => {
            let strict = raw.strict.clone().unwrap_or_else(|| vec![false; a.len()]);
            let p = HPolytope::with_strictness(a, b, strict).map_err(|e| CliError::spec("A", e))?;
            if raw.kind == "simplex" {
                if p.num_constraints() != p.dim() + 1 {
                    return Err(CliError::spec(
                        "A",
                        format!(
                            "a simplex in dimension {} needs {} rows, got {}",
                            p.dim(),
                            p.dim() + 1,
                            p.num_constraints()
                        ),
                    ));
                }
                PolytopeSpec::Simplex(p)
            } else {
                PolytopeSpec::HRep(p)
            }
        }
        ("cross" | "simplex" | "hrep", ..) => {
            return Err(CliError::spec(
                "kind",
                format!(
                    "kind {:?} needs either \"axes\" or both \"A\" and \"b\" (cross: axes only)",
                    raw.kind
                ),
            ))
        }
        (other, ..) => return Err(CliError::spec("kind", format!("unknown kind {other:?}"))),
    };
    if let Some(dim) = raw.dim {
        if dim != spec.dim() {
            return Err(CliError::spec(
                "dim",
                format!("declared {dim}, data has dimension {}", spec.dim()),
            ));
        }
    }
    Ok(spec)
}

/// Splits `"1,0;0,1"`-style text into rows of field elements.
pub fn parse_matrix(text: &str, d: Option<u64>) -> CliResult<Vec<Vec<AlgebraicQuad>>> {
    text.split(';')
        .enumerate()
        .map(|(i, row)| {
            parse_list(row, d).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("row {i}: {m}")),
                other => other,
            })
        })
        .collect()
}

pub fn parse_list(text: &str, d: Option<u64>) -> CliResult<Vec<AlgebraicQuad>> {
    text.split(',')
        .map(|s| parse_quad(s.trim(), d).map_err(CliError::Config))
        .collect()
}
