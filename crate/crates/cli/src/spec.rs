//! Spec-file model and conversion into library types.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use opdef::{CMatrix, FiniteGroup, OperatorFunction, ToleranceConfig, UnitaryRep};
use serde::Deserialize;

use crate::CliError;

pub const SUPPORTED_SCHEMA_VERSIONS: &[&str] = &["1"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema_version: String,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub function: Option<FunctionSpec>,
    #[serde(default)]
    pub rep: Option<RepSpec>,
    #[serde(default)]
    pub operators: Option<BTreeMap<String, MatrixSpec>>,
    #[serde(default)]
    pub tolerances: Option<ToleranceSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Klein,
    Product { factors: Vec<GroupSpec> },
    Table { table: Vec<Vec<usize>>, #[serde(default)] labels: Option<Vec<String>> },
}

/// Matrix entry: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// Row-major nested rows.
pub type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    /// One matrix per group element, in element-index order.
    pub values: Vec<MatrixSpec>,
    #[serde(default)]
    pub dilation: Option<DilationSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationSpec {
    pub v: MatrixSpec,
    pub u: Vec<MatrixSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub builder: RepBuilder,
    #[serde(default)]
    pub values: Option<Vec<MatrixSpec>>,
    #[serde(default)]
    pub u0: Option<MatrixSpec>,
    #[serde(default)]
    pub ur: Option<MatrixSpec>,
    #[serde(default)]
    pub us: Option<MatrixSpec>,
    /// `V` for the compression command.
    #[serde(default)]
    pub isometry: Option<MatrixSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepBuilder {
    Explicit,
    Cyclic,
    SymmetricCommutative,
    DihedralCommutative,
    Permutation,
    LeftRegular,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub psd_tol: Option<f64>,
    pub rank_tol: Option<f64>,
    pub cluster_tol: Option<f64>,
    pub contraction_tol: Option<f64>,
}

pub fn load(path: &Path) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<SpecFile, CliError> {
    let spec: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if !SUPPORTED_SCHEMA_VERSIONS.contains(&spec.schema_version.as_str()) {
        return Err(CliError::Validation(format!(
            "unsupported schema_version {:?}; supported: {:?}",
            spec.schema_version, SUPPORTED_SCHEMA_VERSIONS
        )));
    }
    let payloads = [spec.function.is_some(), spec.rep.is_some(), spec.operators.is_some()];
    if payloads.iter().filter(|&&p| p).count() > 1 {
        return Err(CliError::Validation("exactly one of function, rep, operators may be given".into()));
    }
    Ok(spec)
}

pub fn matrix(m: &MatrixSpec, name: &str) -> Result<CMatrix, CliError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(CliError::Validation(format!("{name}: empty matrix")));
    }
    if let Some(i) = m.iter().position(|r| r.len() != cols) {
        return Err(CliError::Validation(format!("{name}: row {i} has {} entries, expected {cols}", m[i].len())));
    }
    let out = CMatrix::from_fn(rows, cols, |i, j| match m[i][j] {
        Entry::Real(x) => Complex64::new(x, 0.0),
        Entry::Complex([re, im]) => Complex64::new(re, im),
    });
    if !opdef::linalg::is_finite(&out) {
        return Err(CliError::Validation(format!("{name}: non-finite entry")));
    }
    Ok(out)
}

fn matrices(ms: &[MatrixSpec], name: &str) -> Result<Vec<CMatrix>, CliError> {
    ms.iter().enumerate().map(|(i, m)| matrix(m, &format!("{name}[{i}]"))).collect()
}

pub fn group(spec: &GroupSpec) -> Result<FiniteGroup, CliError> {
    Ok(match spec {
        GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n)?,
        GroupSpec::Dihedral { n } => FiniteGroup::dihedral(*n)?,
        GroupSpec::Symmetric { n } => FiniteGroup::symmetric(*n)?,
        GroupSpec::Klein => {
            let z2 = FiniteGroup::cyclic(2)?;
            FiniteGroup::product(&z2, &z2)?
        }
        GroupSpec::Product { factors } => {
            let mut it = factors.iter();
            let first = it.next().ok_or_else(|| CliError::Validation("product with no factors".into()))?;
            let mut g = group(first)?;
            for f in it {
                g = FiniteGroup::product(&g, &group(f)?)?;
            }
            g
        }
        GroupSpec::Table { table, labels } => {
            let g = FiniteGroup::from_table(table)?;
            match labels {
                Some(l) => g.with_labels(l.clone())?,
                None => g,
            }
        }
    })
}

impl SpecFile {
    pub fn tolerances(&self, tol_flag: Option<f64>) -> Result<ToleranceConfig, CliError> {
        let mut cfg = ToleranceConfig::default();
        if let Some(t) = &self.tolerances {
            cfg.psd_tol = t.psd_tol.unwrap_or(cfg.psd_tol);
            cfg.rank_tol = t.rank_tol.unwrap_or(cfg.rank_tol);
            cfg.cluster_tol = t.cluster_tol.unwrap_or(cfg.cluster_tol);
            cfg.contraction_tol = t.contraction_tol.unwrap_or(cfg.contraction_tol);
        }
        if let Some(t) = tol_flag {
            cfg.psd_tol = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn group_spec(&self) -> Result<&GroupSpec, CliError> {
        self.group.as_ref().ok_or_else(|| CliError::Validation("missing group".into()))
    }

    pub fn function(&self) -> Result<OperatorFunction, CliError> {
        let f = self.function.as_ref().ok_or_else(|| CliError::Validation("missing function payload".into()))?;
        let g = group(self.group_spec()?)?;
        Ok(OperatorFunction::new(g, matrices(&f.values, "function.values")?)?)
    }

    pub fn supplied_dilation(&self) -> Result<Option<(CMatrix, Vec<CMatrix>)>, CliError> {
        let Some(d) = self.function.as_ref().and_then(|f| f.dilation.as_ref()) else { return Ok(None) };
        Ok(Some((matrix(&d.v, "dilation.v")?, matrices(&d.u, "dilation.u")?)))
    }

    pub fn rep_spec(&self) -> Result<&RepSpec, CliError> {
        self.rep.as_ref().ok_or_else(|| CliError::Validation("missing rep payload".into()))
    }

    pub fn rep(&self, cfg: &ToleranceConfig) -> Result<UnitaryRep, CliError> {
        let r = self.rep_spec()?;
        let gs = self.group_spec()?;
        let need = |m: &Option<MatrixSpec>, name: &str| -> Result<CMatrix, CliError> {
            matrix(m.as_ref().ok_or_else(|| CliError::Validation(format!("rep builder needs {name}")))?, name)
        };
        let wrong_group =
            |what: &str| CliError::Validation(format!("builder {what} needs a matching group kind, got {gs:?}"));
        Ok(match r.builder {
            RepBuilder::Explicit => {
                let values = r.values.as_ref().ok_or_else(|| CliError::Validation("explicit rep needs values".into()))?;
                UnitaryRep::new(group(gs)?, matrices(values, "rep.values")?)?
            }
            RepBuilder::Cyclic => match gs {
                GroupSpec::Cyclic { n } => opdef::reps::build_cyclic_rep(*n, &need(&r.u0, "u0")?, cfg)?,
                _ => return Err(wrong_group("cyclic")),
            },
            RepBuilder::SymmetricCommutative => match gs {
                GroupSpec::Symmetric { n } => opdef::reps::build_symmetric_commutative(*n, &need(&r.u0, "u0")?, cfg)?,
                _ => return Err(wrong_group("symmetric_commutative")),
            },
            RepBuilder::DihedralCommutative => match gs {
                GroupSpec::Dihedral { n } => {
                    opdef::reps::build_dihedral_commutative(*n, &need(&r.ur, "ur")?, &need(&r.us, "us")?, cfg)?
                }
                _ => return Err(wrong_group("dihedral_commutative")),
            },
            RepBuilder::Permutation => match gs {
                GroupSpec::Symmetric { n } => UnitaryRep::permutation(*n)?,
                _ => return Err(wrong_group("permutation")),
            },
            RepBuilder::LeftRegular => UnitaryRep::left_regular(&group(gs)?),
        })
    }

    pub fn isometry(&self) -> Result<CMatrix, CliError> {
        let r = self.rep_spec()?;
        matrix(r.isometry.as_ref().ok_or_else(|| CliError::Validation("compression needs rep.isometry".into()))?, "isometry")
    }

    pub fn operator(&self, name: &str) -> Result<CMatrix, CliError> {
        let ops = self.operators.as_ref().ok_or_else(|| CliError::Validation("missing operators payload".into()))?;
        let m = ops.get(name).ok_or_else(|| CliError::Validation(format!("missing operator {name}")))?;
        matrix(m, name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_accept_reals_and_pairs() {
        let s = parse(r#"{"schema_version":"1","operators":{"A":[[1,[0,2]],[[0,-2],3.5]]}}"#).unwrap();
        let a = s.operator("A").unwrap();
        assert_eq!(a[(0, 1)], Complex64::new(0.0, 2.0));
        assert_eq!(a[(1, 1)], Complex64::new(3.5, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("{"), Err(CliError::Parse(_))));
        assert!(matches!(parse(r#"{"schema_version":"9"}"#), Err(CliError::Validation(_))));
        assert!(matches!(parse(r#"{"schema_version":"1","bogus":1}"#), Err(CliError::Parse(_))));
        let both = r#"{"schema_version":"1","operators":{},"rep":{"builder":"permutation"}}"#;
        assert!(matches!(parse(both), Err(CliError::Validation(_))));
        let ragged = parse(r#"{"schema_version":"1","operators":{"A":[[1,2],[3]]}}"#).unwrap();
        assert!(matches!(ragged.operator("A"), Err(CliError::Validation(_))));
    }

    #[test]
    fn tolerance_overrides() {
        let s = parse(r#"{"schema_version":"1","tolerances":{"rank_tol":1e-6}}"#).unwrap();
        let cfg = s.tolerances(Some(1e-4)).unwrap();
        assert_eq!((cfg.psd_tol, cfg.rank_tol), (1e-4, 1e-6));
        assert!(s.tolerances(Some(-1.0)).is_err());
    }
}
