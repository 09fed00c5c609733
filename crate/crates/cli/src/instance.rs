//! Instance files: a preorder, a coefficient ring and a task, in TOML.

use std::fmt;
use std::path::Path;

use fi_jordan::{build_ring, direct_product, matrix_ring, triangular_ring, Bimodule, Preorder, StructureRing, ZmVector};
use serde::Deserialize;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Parse(String),
    /// Field path and the validation failure reported for it.
    Invalid { field: String, message: String },
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(msg) => write!(f, "cannot read instance: {msg}"),
            Self::Parse(msg) => write!(f, "cannot parse instance: {msg}"),
            Self::Invalid { field, message } => write!(f, "invalid `{field}`: {message}"),
        }
    }
}

fn invalid(field: impl Into<String>, err: impl fmt::Display) -> LoadError {
    LoadError::Invalid { field: field.into(), message: err.to_string() }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub preorder: Option<PreorderSpec>,
    pub ring: Option<RingSpec>,
    #[serde(default)]
    pub task: TaskSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreorderSpec {
    pub labels: Vec<String>,
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
    #[serde(default = "default_true")]
    pub auto_close: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingSpec {
    /// `Z/m`.
    Zmod { modulus: u64 },
    /// `Z/m[x]/(x²)`.
    Dual { modulus: u64 },
    /// `M_n` over another ring.
    Matrix { size: usize, over: Box<RingSpec> },
    /// Direct product of the factors, in order.
    Product { factors: Vec<RingSpec> },
    /// `Tri(A, M, B)`. With only `over`, this is `Tri(R, R, R)`; otherwise `left`, `right`,
    /// `rank` and both action tables describe the bimodule.
    Triangular {
        over: Option<Box<RingSpec>>,
        left: Option<Box<RingSpec>>,
        right: Option<Box<RingSpec>>,
        rank: Option<usize>,
        left_action: Option<Vec<i64>>,
        right_action: Option<Vec<i64>>,
    },
    /// Structure constants `constants[i][j][t]` and an optional unit.
    Explicit { modulus: u64, rank: usize, constants: Vec<Vec<Vec<i64>>>, unit: Option<Vec<i64>> },
}

impl RingSpec {
    /// Diagonal matrix units when the top-level ring is `M_n` over something.
    fn diagonal_units(&self, field: &str) -> Result<Option<Vec<ZmVector>>, LoadError> {
        match self {
            Self::Matrix { size, over } => {
                let base = over.build(&format!("{field}.over"))?;
                Ok(Some(matrix_ring(&base, *size).map_err(|e| invalid(field, e))?.diagonal_units()))
            }
            _ => Ok(None),
        }
    }

    pub fn build(&self, field: &str) -> Result<StructureRing, LoadError> {
        match self {
            Self::Zmod { modulus } => StructureRing::zmod(*modulus).map_err(|e| invalid(format!("{field}.modulus"), e)),
            Self::Dual { modulus } => {
                StructureRing::dual_numbers(*modulus).map_err(|e| invalid(format!("{field}.modulus"), e))
            }
            Self::Matrix { size, over } => {
                let base = over.build(&format!("{field}.over"))?;
                matrix_ring(&base, *size).map(|mr| mr.into_ring()).map_err(|e| invalid(field, e))
            }
            Self::Product { factors } => {
                let mut iter = factors.iter().enumerate();
                let (_, first) = iter.next().ok_or_else(|| invalid(format!("{field}.factors"), "needs at least one factor"))?;
                let mut acc = first.build(&format!("{field}.factors[0]"))?;
                for (i, f) in iter {
                    let next = f.build(&format!("{field}.factors[{i}]"))?;
                    acc = direct_product(&acc, &next).map_err(|e| invalid(format!("{field}.factors[{i}]"), e))?;
                }
                Ok(acc)
            }
            Self::Triangular { over, left, right, rank, left_action, right_action } => {
                let bimodule = match (over, left, right, rank, left_action, right_action) {
                    (Some(over), None, None, None, None, None) => Bimodule::regular(&over.build(&format!("{field}.over"))?),
                    (None, Some(l), Some(r), Some(rank), Some(la), Some(ra)) => {
                        let l = l.build(&format!("{field}.left"))?;
                        let r = r.build(&format!("{field}.right"))?;
                        let m = l.modulus();
                        let reduce = |v: &[i64]| v.iter().map(|&x| x.rem_euclid(m as i64) as u64).collect();
                        Bimodule::new(l, r, *rank, reduce(la), reduce(ra)).map_err(|e| invalid(field, e))?
                    }
                    _ => {
                        return Err(invalid(
                            field,
                            "give either `over`, or all of `left`, `right`, `rank`, `left_action`, `right_action`",
                        ))
                    }
                };
                triangular_ring(&bimodule).map_err(|e| invalid(field, e))
            }
            Self::Explicit { modulus, rank, constants, unit } => {
                build_ring(*modulus, *rank, constants, unit.as_deref()).map_err(|e| invalid(format!("{field}.constants"), e))
            }
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub budget: Option<usize>,
    pub moduli: Option<Vec<u64>>,
    pub max_rank: Option<usize>,
}

/// A parsed and validated instance.
#[derive(Debug, Default)]
pub struct Instance {
    pub preorder: Option<Preorder>,
    pub ring: Option<StructureRing>,
    /// Diagonal matrix units, for a top-level matrix ring.
    pub matrix_units: Option<Vec<ZmVector>>,
    pub task: TaskSpec,
}

pub fn parse_instance(text: &str) -> Result<Instance, LoadError> {
    let file: InstanceFile = toml::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(invalid("format_version", format!("expected {FORMAT_VERSION}, found {}", file.format_version)));
    }
    let preorder = file
        .preorder
        .as_ref()
        .map(|p| Preorder::from_pairs(&p.labels, &p.pairs, p.auto_close).map_err(|e| invalid("preorder", e)))
        .transpose()?;
    let ring = file.ring.as_ref().map(|r| r.build("ring")).transpose()?;
    let matrix_units = match &file.ring {
        Some(r) => r.diagonal_units("ring")?,
        None => None,
    };
    Ok(Instance { preorder, ring, matrix_units, task: file.task })
}

pub fn load_instance(path: &Path) -> Result<Instance, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_zmod() {
        let inst = parse_instance("format_version = 1\n[ring]\nkind = \"zmod\"\nmodulus = 2\n[task]\ncommand = \"solve-jder\"\n").unwrap();
        assert_eq!(inst.ring.unwrap().rank(), 1);
        assert_eq!(inst.task.command.as_deref(), Some("solve-jder"));
        assert!(inst.preorder.is_none());
    }

    #[test]
    fn nested_matrix_and_triangular() {
        let text = r#"
            format_version = 1
            [ring]
            kind = "matrix"
            size = 2
            over = { kind = "triangular", over = { kind = "zmod", modulus = 3 } }
        "#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.ring.unwrap().rank(), 12);
        assert_eq!(inst.matrix_units.unwrap().len(), 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = parse_instance("format_version = 1\n[ring]\nkind = \"zmod\"\nmodulus = 2\ncolour = 1\n").unwrap_err();
        assert!(matches!(err, LoadError::Parse(ref m) if m.contains("colour")), "{err}");
        let err = parse_instance("format_version = 1\nextra = 3\n").unwrap_err();
        assert!(matches!(err, LoadError::Parse(_)));
    }

    #[test]
    fn non_associative_constants_report_triple() {
        let text = r#"
            format_version = 1
            [ring]
            kind = "explicit"
            modulus = 2
            rank = 2
            constants = [[[0, 1], [0, 0]], [[1, 0], [0, 0]]]
        "#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("(0, 0, 0)"), "{err}");
        assert!(err.to_string().contains("ring.constants"), "{err}");
    }

    #[test]
    fn wrong_version_and_bad_preorder() {
        assert!(parse_instance("format_version = 2\n").is_err());
        let text = "format_version = 1\n[preorder]\nlabels = [\"a\"]\npairs = [[\"a\", \"b\"]]\n";
        assert!(parse_instance(text).unwrap_err().to_string().contains("`b`"));
    }
}
