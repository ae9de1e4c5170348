//! Dense complex matrix kernel.
//!
//! Everything here works on [`CMatrix`] (`DMatrix<Complex64>`). Hermitian
//! problems go through a Hermitian eigensolve; positivity verdicts are relative
//! to `max(1, ||M||_F)` so that exact zero eigenvalues are not misclassified.

use nalgebra::linalg::{SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numerical tolerances shared by every verdict-producing operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative threshold on the minimum eigenvalue (and Hermitian deviation).
    pub psd_tol: f64,
    /// Relative singular-value cutoff for ranks and pseudoinverses.
    pub rank_tol: f64,
    /// Eigenvalue clustering tolerance for joint diagonalization.
    pub cluster_tol: f64,
    /// Slack allowed on `||T|| <= 1`.
    pub contraction_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            psd_tol: 1e-9,
            rank_tol: 1e-10,
            cluster_tol: 1e-8,
            contraction_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("psd_tol", self.psd_tol),
            ("rank_tol", self.rank_tol),
            ("cluster_tol", self.cluster_tol),
            ("contraction_tol", self.contraction_tol),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} must be strictly positive")));
            }
        }
        Ok(())
    }

    /// Absolute threshold `psd_tol * max(1, scale)`.
    pub fn psd_threshold(&self, scale: f64) -> f64 {
        self.psd_tol * scale.max(1.0)
    }

    pub fn is_contraction_norm(&self, norm: f64) -> bool {
        norm <= 1.0 + self.contraction_tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdVerdict {
    /// Minimum eigenvalue strictly above the tolerance band.
    Positive,
    /// Minimum eigenvalue inside `[-tol*scale, tol*scale]`.
    PositiveSemidefiniteAtTolerance,
    Indefinite,
}

impl PsdVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PsdVerdict::Positive => "positive",
            PsdVerdict::PositiveSemidefiniteAtTolerance => "positive-semidefinite-at-tolerance",
            PsdVerdict::Indefinite => "indefinite",
        }
    }
}

/// Certificate produced by [`psd_check`].
#[derive(Debug, Clone)]
pub struct PsdReport {
    pub verdict: PsdVerdict,
    pub min_eigenvalue: f64,
    /// Full spectrum of the Hermitian part, ascending.
    pub eigenvalues: Vec<f64>,
    pub tolerance_used: f64,
    /// `max(1, ||M||_F)`.
    pub scale: f64,
    /// Unit eigenvector for the minimum eigenvalue when indefinite.
    pub witness: Option<CVector>,
}

impl PsdReport {
    pub fn is_psd(&self) -> bool {
        self.verdict != PsdVerdict::Indefinite
    }
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMatrix {
    CMatrix::zeros(r, c)
}

/// Builds a matrix from real row-major rows.
pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { ZERO })
}

pub fn diag(values: &[Complex64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius norm.
pub fn fro(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    fro(&(m - m.adjoint()))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `||U*U - I||_F`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    fro(&(u.adjoint() * u - identity(u.ncols())))
}

pub fn normality_defect(m: &CMatrix) -> f64 {
    fro(&(m * m.adjoint() - m.adjoint() * m))
}

pub fn mat_pow(m: &CMatrix, n: u32) -> CMatrix {
    let mut acc = identity(m.nrows());
    let mut base = m.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

fn require_square(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("{what} must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Hermitian eigendecomposition of `(M + M*)/2`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Spectral certificate for positivity of a Hermitian matrix.
pub fn psd_check(m: &CMatrix, cfg: &ToleranceConfig) -> Result<PsdReport> {
    require_square(m, "psd_check input")?;
    if !is_finite(m) {
        return Err(Error::Shape("matrix has non-finite entries".into()));
    }
    let scale = fro(m).max(1.0);
    let deviation = hermitian_deviation(m);
    let threshold = cfg.psd_tol * scale;
    if deviation > threshold {
        return Err(Error::NotHermitian { deviation, threshold });
    }
    let (values, vectors) = hermitian_eigen(m);
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    let verdict = if min_eigenvalue < -threshold {
        PsdVerdict::Indefinite
    } else if min_eigenvalue > threshold {
        PsdVerdict::Positive
    } else {
        PsdVerdict::PositiveSemidefiniteAtTolerance
    };
    let witness = (verdict == PsdVerdict::Indefinite).then(|| vectors.column(0).into_owned());
    Ok(PsdReport {
        verdict,
        min_eigenvalue,
        eigenvalues: values,
        tolerance_used: cfg.psd_tol,
        scale,
        witness,
    })
}

/// `Q diag(sqrt(max(lambda, 0))) Q*` for a Hermitian matrix, no positivity check.
pub(crate) fn sqrt_clipped(h: &CMatrix) -> CMatrix {
    sqrt_floored(h, 0.0)
}

/// Square root of `I - X*X`-type matrices, whose natural scale is 1 even
/// when every eigenvalue is roundoff.
pub(crate) fn sqrt_defect(h: &CMatrix) -> CMatrix {
    sqrt_floored(h, 1.0)
}

fn sqrt_floored(h: &CMatrix, scale: f64) -> CMatrix {
    let (values, q) = hermitian_eigen(h);
    // roundoff-level eigenvalues would otherwise contribute sqrt(eps) noise
    let top = values.iter().fold(scale, |a, v| a.max(v.abs()));
    let floor = 64.0 * values.len() as f64 * f64::EPSILON * top;
    let mut scaled = q.clone();
    for (j, v) in values.iter().enumerate() {
        let v = if *v <= floor { 0.0 } else { *v };
        scaled.column_mut(j).scale_mut(v.sqrt());
    }
    hermitian_part(&(scaled * q.adjoint()))
}

/// Principal square root of a PSD matrix.
pub fn sqrt_psd(m: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
    let report = psd_check(m, cfg)?;
    if !report.is_psd() {
        return Err(Error::Indefinite(Box::new(report)));
    }
    Ok(sqrt_clipped(m))
}

/// Defect operator `D_T = (I - T*T)^{1/2}`.
pub fn defect(t: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
    let norm = op_norm(t);
    if !cfg.is_contraction_norm(norm) {
        return Err(Error::NotContraction { norm });
    }
    Ok(sqrt_defect(&(identity(t.ncols()) - t.adjoint() * t)))
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Numerical rank with cutoff `rank_tol * sigma_max`.
pub fn rank(m: &CMatrix, cfg: &ToleranceConfig) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > cfg.rank_tol * top).count()
}

/// Moore-Penrose pseudoinverse.
pub fn pinv(m: &CMatrix, cfg: &ToleranceConfig) -> CMatrix {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return zeros(c, r);
    }
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut out = zeros(c, r);
    if top == 0.0 {
        return out;
    }
    let cutoff = cfg.rank_tol * top;
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            let vk = v_t.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (vk * uk) * Complex64::new(1.0 / s, 0.0);
        }
    }
    out
}

/// Orthogonal projector onto the column space of `m`.
pub fn range_projector(m: &CMatrix, cfg: &ToleranceConfig) -> CMatrix {
    m * pinv(m, cfg)
}

/// Flattens a grid of equally sized blocks; block `(i, j)` lands at rows
/// `[i*r, (i+1)*r)` and columns `[j*c, (j+1)*c)`.
pub fn block_assemble(blocks: &[Vec<CMatrix>]) -> Result<CMatrix> {
    let p = blocks.len();
    if p == 0 {
        return Ok(zeros(0, 0));
    }
    let q = blocks[0].len();
    if q == 0 {
        return Err(Error::Shape("block grid has an empty row".into()));
    }
    let (r, c) = blocks[0][0].shape();
    for (i, row) in blocks.iter().enumerate() {
        if row.len() != q {
            return Err(Error::Shape(format!("block row {i} has {} blocks, expected {q}", row.len())));
        }
        for (j, b) in row.iter().enumerate() {
            if b.shape() != (r, c) {
                return Err(Error::Shape(format!(
                    "block ({i},{j}) is {}x{}, expected {r}x{c}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
    }
    let mut out = zeros(p * r, q * c);
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            out.view_mut((i * r, j * c), (r, c)).copy_from(b);
        }
    }
    Ok(out)
}

/// Result of [`joint_diagonalize`].
#[derive(Debug, Clone)]
pub struct JointDiagonalization {
    /// Unitary `Q` whose columns are joint eigenvectors.
    pub basis: CMatrix,
    /// `eigenvalues[k][j]` is the eigenvalue of family member `k` on column `j`.
    pub eigenvalues: Vec<Vec<Complex64>>,
}

impl JointDiagonalization {
    /// `max_k ||Q diag(eig_k) Q* - M_k||_F`.
    pub fn reconstruction_residual(&self, family: &[CMatrix]) -> f64 {
        family
            .iter()
            .zip(&self.eigenvalues)
            .map(|(m, e)| fro(&(&self.basis * diag(e) * self.basis.adjoint() - m)))
            .fold(0.0, f64::max)
    }
}

const JOINT_RETRIES: usize = 8;

/// Simultaneous diagonalization of pairwise commuting normal matrices.
///
/// A seeded random real combination of the Hermitian and skew parts of the
/// family is diagonalized; each eigenvalue cluster (gap > `cluster_tol`) is
/// refined recursively on its own subspace until every member acts as a scalar.
pub fn joint_diagonalize(family: &[CMatrix], cfg: &ToleranceConfig, seed: u64) -> Result<JointDiagonalization> {
    let Some(first) = family.first() else {
        return Ok(JointDiagonalization { basis: zeros(0, 0), eigenvalues: Vec::new() });
    };
    let n = first.nrows();
    for (k, m) in family.iter().enumerate() {
        require_square(m, "family member")?;
        if m.nrows() != n {
            return Err(Error::Shape(format!("family member {k} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
        }
        let defect = normality_defect(m);
        if defect > cfg.cluster_tol * fro(m).powi(2).max(1.0) {
            return Err(Error::NonNormal { index: k, defect });
        }
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let norm = fro(&commutator(&family[i], &family[j]));
            if norm > cfg.cluster_tol * (fro(&family[i]) * fro(&family[j])).max(1.0) {
                return Err(Error::NonCommuting { i, j, norm });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut leaves = Vec::new();
    refine(family, identity(n), cfg, &mut rng, &mut leaves)?;
    let mut basis = zeros(n, n);
    let mut col = 0;
    for leaf in &leaves {
        basis.view_mut((0, col), (n, leaf.ncols())).copy_from(leaf);
        col += leaf.ncols();
    }
    let eigenvalues = family
        .iter()
        .map(|m| {
            let d = basis.adjoint() * m * &basis;
            (0..n).map(|j| d[(j, j)]).collect()
        })
        .collect();
    Ok(JointDiagonalization { basis, eigenvalues })
}

fn is_scalar(a: &CMatrix, cfg: &ToleranceConfig) -> bool {
    let k = a.nrows();
    let mean = a.trace() / Complex64::new(k as f64, 0.0);
    fro(&(a - identity(k) * mean)) <= cfg.cluster_tol * fro(a).max(1.0)
}

fn refine(
    family: &[CMatrix],
    sub: CMatrix,
    cfg: &ToleranceConfig,
    rng: &mut ChaCha8Rng,
    leaves: &mut Vec<CMatrix>,
) -> Result<()> {
    let k = sub.ncols();
    let restricted: Vec<CMatrix> = family.iter().map(|m| sub.adjoint() * m * &sub).collect();
    if k <= 1 || restricted.iter().all(|a| is_scalar(a, cfg)) {
        leaves.push(sub);
        return Ok(());
    }
    let half_i = Complex64::new(0.0, -0.5);
    for _ in 0..JOINT_RETRIES {
        let mut h = zeros(k, k);
        for a in &restricted {
            let herm = hermitian_part(a);
            let skew = (a - a.adjoint()) * half_i;
            h += herm * Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            h += skew * Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        }
        let (values, q) = hermitian_eigen(&h);
        let gap = cfg.cluster_tol * fro(&h).max(1.0);
        let mut clusters: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for j in 1..=k {
            if j == k || values[j] - values[j - 1] > gap {
                clusters.push((start, j));
                start = j;
            }
        }
        if clusters.len() == 1 {
            continue;
        }
        for (a, b) in clusters {
            let cols = q.columns(a, b - a).into_owned();
            refine(family, &sub * cols, cfg, rng, leaves)?;
        }
        return Ok(());
    }
    Err(Error::Consistency(format!(
        "joint diagonalization could not split a {k}-dimensional block after {JOINT_RETRIES} random combinations"
    )))
}
