//! Minimal Naimark dilations `T(s) = V* U(s) V` of positive definite functions
//! on finite groups.
//!
//! The dilation space is the range of the Gram block `Delta = Q Lambda Q*`
//! (eigenpairs above `rank_tol * lambda_max`). Left translation `L(t)` permutes
//! the blocks of `C^{md}` and commutes with `Delta`, so it leaves that range
//! invariant; `U(t) = Q+* L(t) Q+` is its restriction and
//! `V = Lambda+^{1/2} Q+* iota_e`.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{self, fro, hermitian_eigen, identity, rank, zeros, CMatrix, ToleranceConfig, ONE};
use crate::pdfun::OperatorFunction;
use crate::reps::UnitaryRep;

#[derive(Debug, Clone)]
pub struct NaimarkDilation {
    pub group: FiniteGroup,
    /// `dimK x d`.
    pub v: CMatrix,
    /// `dimK x dimK` unitary per element.
    pub u: Vec<CMatrix>,
    pub dim_k: usize,
    pub residuals: DilationResiduals,
}

/// Residuals of the dilation identities. All norms are Frobenius norms,
/// maximised over elements or pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationResiduals {
    /// `max_s ||V* U(s) V - T(s)||`.
    pub compression: f64,
    /// `max_{s,t} ||U(st) - U(s) U(t)||`.
    pub homomorphism: f64,
    /// `max_s ||U(s)* U(s) - I||`.
    pub unitarity: f64,
    /// `||U(e) - I||`.
    pub identity: f64,
    /// `||V* V - T(e)||`.
    pub isometry: f64,
    /// `dimK - rank [U(s) V]_s`; zero for a minimal dilation.
    pub minimality_defect: usize,
}

impl DilationResiduals {
    pub fn max_residual(&self) -> f64 {
        [self.compression, self.homomorphism, self.unitarity, self.identity, self.isometry]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Name and value of the worst residual.
    pub fn worst(&self) -> (&'static str, f64) {
        [
            ("compression", self.compression),
            ("homomorphism", self.homomorphism),
            ("unitarity", self.unitarity),
            ("identity", self.identity),
            ("isometry", self.isometry),
        ]
        .into_iter()
        .fold(("compression", f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    }
}

/// Outcome of [`verify_dilation`].
#[derive(Debug, Clone)]
pub struct DilationReport {
    pub valid: bool,
    pub residuals: DilationResiduals,
    pub threshold: f64,
    /// `s -> V* U(s) V` passes the positive definiteness check.
    pub compression_positive: bool,
}

impl NaimarkDilation {
    /// Wraps an externally supplied `(V, U)`; residuals are measured against
    /// `t` but not judged, see [`verify_dilation`].
    pub fn from_parts(t: &OperatorFunction, v: CMatrix, u: Vec<CMatrix>, cfg: &ToleranceConfig) -> Result<Self> {
        let k = v.nrows();
        if v.ncols() != t.dim() || u.len() != t.group().order() || u.iter().any(|m| m.shape() != (k, k)) {
            return Err(Error::Shape("dilation shapes do not match the function".into()));
        }
        let residuals = residuals(t, &v, &u, cfg);
        Ok(Self { group: t.group().clone(), v, u, dim_k: k, residuals })
    }

    pub fn rep(&self) -> Result<UnitaryRep> {
        UnitaryRep::new(self.group.clone(), self.u.clone())
    }
}

/// Absolute threshold for dilation residuals: `cluster_tol * max(1, max_s ||T(s)||_F)`.
pub fn dilation_threshold(t: &OperatorFunction, cfg: &ToleranceConfig) -> f64 {
    cfg.cluster_tol * t.values().iter().map(fro).fold(1.0, f64::max)
}

/// Block permutation `(L(t) h)(s) = h(t^-1 s)` on `C^{md}`.
fn translation(g: &FiniteGroup, t: usize, d: usize) -> CMatrix {
    let m = g.order();
    let mut l = zeros(m * d, m * d);
    let ti = g.inv(t);
    for s in g.elements() {
        let src = g.mul(ti, s);
        for k in 0..d {
            l[(s * d + k, src * d + k)] = ONE;
        }
    }
    l
}

pub fn naimark_dilate(t: &OperatorFunction, cfg: &ToleranceConfig) -> Result<NaimarkDilation> {
    let report = t.is_positive_definite(cfg)?;
    if !report.is_psd() {
        return Err(Error::Indefinite(Box::new(report)));
    }
    let g = t.group();
    let d = t.dim();
    let m = g.order();
    let delta = t.full_gram().flat;
    let (values, q) = hermitian_eigen(&delta);
    let top = values.last().copied().unwrap_or(0.0);
    let keep: Vec<usize> = if top > 0.0 {
        (0..values.len()).filter(|&j| values[j] > cfg.rank_tol * top).collect()
    } else {
        Vec::new()
    };
    let dim_k = keep.len();
    let q_plus = CMatrix::from_fn(m * d, dim_k, |r, c| q[(r, keep[c])]);
    let e = g.identity();
    let mut v = q_plus.rows(e * d, d).adjoint();
    for (c, &j) in keep.iter().enumerate() {
        v.row_mut(c).scale_mut(values[j].sqrt());
    }
    let u: Vec<CMatrix> = g.elements().map(|s| q_plus.adjoint() * translation(g, s, d) * &q_plus).collect();
    let residuals = residuals(t, &v, &u, cfg);
    let threshold = dilation_threshold(t, cfg);
    let (what, worst) = residuals.worst();
    if worst > threshold {
        return Err(Error::Construction { what, residual: worst });
    }
    if residuals.minimality_defect != 0 {
        return Err(Error::Construction { what: "minimality", residual: residuals.minimality_defect as f64 });
    }
    Ok(NaimarkDilation { group: g.clone(), v, u, dim_k, residuals })
}

fn residuals(t: &OperatorFunction, v: &CMatrix, u: &[CMatrix], cfg: &ToleranceConfig) -> DilationResiduals {
    let g = t.group();
    let k = v.nrows();
    let va = v.adjoint();
    let compression = g.elements().map(|s| fro(&(&va * &u[s] * v - t.value(s)))).fold(0.0, f64::max);
    let mut homomorphism = 0.0f64;
    for s in g.elements() {
        for r in g.elements() {
            homomorphism = homomorphism.max(fro(&(&u[g.mul(s, r)] - &u[s] * &u[r])));
        }
    }
    let unitarity = u.iter().map(linalg::unitarity_defect).fold(0.0, f64::max);
    let identity_defect = fro(&(&u[g.identity()] - identity(k)));
    let isometry = fro(&(&va * v - t.at_identity()));
    let mut span = zeros(k, g.order() * v.ncols());
    for s in g.elements() {
        span.view_mut((0, s * v.ncols()), (k, v.ncols())).copy_from(&(&u[s] * v));
    }
    let minimality_defect = k - rank(&span, cfg).min(k);
    DilationResiduals { compression, homomorphism, unitarity, identity: identity_defect, isometry, minimality_defect }
}

/// Recomputes every dilation identity for `(V, U)` against `T`, plus the
/// converse check that the compression is positive definite.
pub fn verify_dilation(t: &OperatorFunction, dil: &NaimarkDilation, cfg: &ToleranceConfig) -> Result<DilationReport> {
    let k = dil.v.nrows();
    if dil.v.ncols() != t.dim() || dil.u.len() != t.group().order() || dil.u.iter().any(|m| m.shape() != (k, k)) {
        return Err(Error::Shape("dilation shapes do not match the function".into()));
    }
    let residuals = residuals(t, &dil.v, &dil.u, cfg);
    let threshold = dilation_threshold(t, cfg);
    let compressed = OperatorFunction::new(
        t.group().clone(),
        dil.u.iter().map(|m| dil.v.adjoint() * m * &dil.v).collect(),
    )?;
    let compression_positive = match compressed.is_positive_definite(cfg) {
        Ok(r) => r.is_psd(),
        Err(Error::NotSymmetric { .. }) => false,
        Err(e) => return Err(e),
    };
    let valid = residuals.max_residual() <= threshold && residuals.minimality_defect == 0 && compression_positive;
    Ok(DilationReport { valid, residuals, threshold, compression_positive })
}

/// `s -> V* U(s) V`.
pub fn compression(rep: &UnitaryRep, v: &CMatrix) -> Result<OperatorFunction> {
    if v.nrows() != rep.dim() {
        return Err(Error::Shape(format!("V has {} rows, representation dimension is {}", v.nrows(), rep.dim())));
    }
    let va = v.adjoint();
    OperatorFunction::new(rep.group().clone(), rep.values().iter().map(|u| &va * u * v).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCompatibility {
    pub n: u32,
    /// `s -> T(s)^n` is positive definite.
    pub power_positive: bool,
    /// `s -> U(s)^n` is a unitary representation.
    pub power_rep: bool,
    /// Both preconditions hold; the comparisons below are only meaningful then.
    pub precondition_met: bool,
    /// `max_s ||V* U(s)^n V - T(s)^n||_F`.
    pub dilation_residual: f64,
    /// `max_s ||T(s^n) - T(s)^n||_F`.
    pub function_residual: f64,
    pub compatible: bool,
    /// Element with the largest function residual when incompatible.
    pub witness: Option<usize>,
    pub threshold: f64,
}

/// Whether the dilation also dilates `T_n(s) = T(s)^n` through `U(s)^n`,
/// computed from the dilation and from `T(s^n) = T(s)^n` independently.
pub fn power_compatibility(
    t: &OperatorFunction,
    dil: &NaimarkDilation,
    n: u32,
    cfg: &ToleranceConfig,
) -> Result<PowerCompatibility> {
    let tn = t.power_map(n)?;
    let power_positive = match tn.is_positive_definite(cfg) {
        Ok(r) => r.is_psd(),
        Err(Error::NotSymmetric { .. }) => false,
        Err(e) => return Err(e),
    };
    let power_rep = dil.rep()?.power_rep_check(n, cfg)?.is_representation;
    let precondition_met = power_positive && power_rep;
    let g = t.group();
    let threshold = dilation_threshold(&tn, cfg);
    let va = dil.v.adjoint();
    let dilation_residual = g
        .elements()
        .map(|s| fro(&(&va * linalg::mat_pow(&dil.u[s], n) * &dil.v - tn.value(s))))
        .fold(0.0, f64::max);
    let (mut function_residual, mut witness) = (0.0, None);
    for s in g.elements() {
        let r = fro(&(t.value(g.pow(s, n as i64)) - tn.value(s)));
        if r > function_residual {
            function_residual = r;
            witness = Some(s);
        }
    }
    let via_dilation = dilation_residual <= threshold;
    let via_function = function_residual <= threshold;
    if precondition_met && via_dilation != via_function {
        return Err(Error::Consistency(format!(
            "dilation residual {dilation_residual:e} and T(s^n) residual {function_residual:e} disagree"
        )));
    }
    let compatible = precondition_met && via_function;
    Ok(PowerCompatibility {
        n,
        power_positive,
        power_rep,
        precondition_met,
        dilation_residual,
        function_residual,
        compatible,
        witness: witness.filter(|_| !via_function),
        threshold,
    })
}
