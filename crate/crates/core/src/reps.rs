//! Unitary representations of finite groups and the structure decomposition
//! of commutative ones into projections weighted by characters.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{self, FiniteGroup};
use crate::linalg::{self, commutator, fro, identity, joint_diagonalize, CMatrix, ToleranceConfig, ONE, ZERO};

/// `s -> U(s)`, one `d x d` matrix per element. Construction checks shapes
/// only; [`UnitaryRep::verify`] checks the representation identities.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: FiniteGroup,
    dim: usize,
    u: Vec<CMatrix>,
}

/// Residuals of [`UnitaryRep::verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct RepReport {
    pub valid: bool,
    /// `||U(e) - I||_F`.
    pub identity_defect: f64,
    /// `max_s ||U(s)*U(s) - I||_F`.
    pub unitarity_defect: f64,
    pub unitarity_witness: Option<usize>,
    /// `max_{s,t} ||U(st) - U(s)U(t)||_F`.
    pub homomorphism_defect: f64,
    pub homomorphism_witness: Option<(usize, usize)>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub within_roots: bool,
    /// Largest distance from an eigenvalue to the nearest `|G|`-th root of unity.
    pub max_distance: f64,
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutativityReport {
    pub commutative: bool,
    /// `max_{s,t} ||U(s)U(t) - U(t)U(s)||_F`.
    pub max_commutator: f64,
    pub commutator_witness: Option<(usize, usize)>,
    /// `max_{g in [G,G]} ||U(g) - I||_F`.
    pub max_subgroup_defect: f64,
    pub commutator_subgroup: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PowerRepReport {
    pub n: u32,
    /// Whether `s -> U(s)^n` is a representation, and by how much it fails.
    pub direct: RepReport,
    pub power_subgroup: Vec<usize>,
    pub max_subgroup_defect: f64,
    pub is_representation: bool,
}

impl UnitaryRep {
    pub fn new(group: FiniteGroup, u: Vec<CMatrix>) -> Result<Self> {
        if u.len() != group.order() {
            return Err(Error::Shape(format!("{} matrices for a group of order {}", u.len(), group.order())));
        }
        let dim = u[0].nrows();
        for (s, m) in u.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(Error::Shape(format!(
                    "U({s}) is {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if !linalg::is_finite(m) {
                return Err(Error::Shape(format!("U({s}) has non-finite entries")));
            }
        }
        Ok(Self { group, dim, u })
    }

    pub fn trivial(group: FiniteGroup, dim: usize) -> Self {
        let u = vec![identity(dim); group.order()];
        Self { group, dim, u }
    }

    /// `U(s) e_i = e_{sigma(i)}` on `C^n` over [`FiniteGroup::symmetric`].
    pub fn permutation(n: usize) -> Result<Self> {
        let g = FiniteGroup::symmetric(n)?;
        let u = group::permutations_lex(n)
            .iter()
            .map(|p| CMatrix::from_fn(n, n, |r, c| if p[c] == r { ONE } else { ZERO }))
            .collect();
        Self::new(g, u)
    }

    /// Left regular representation `L(s) e_t = e_{st}`.
    pub fn left_regular(group: &FiniteGroup) -> Self {
        let m = group.order();
        let u = group
            .elements()
            .map(|s| CMatrix::from_fn(m, m, |r, c| if group.mul(s, c) == r { ONE } else { ZERO }))
            .collect();
        Self { group: group.clone(), dim: m, u }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, s: usize) -> &CMatrix {
        &self.u[s]
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.u
    }

    /// Absolute threshold for the representation identities.
    pub fn threshold(&self, cfg: &ToleranceConfig) -> f64 {
        cfg.cluster_tol * (self.dim as f64).max(1.0)
    }

    pub fn verify(&self, cfg: &ToleranceConfig) -> RepReport {
        let g = &self.group;
        let threshold = self.threshold(cfg);
        let identity_defect = fro(&(&self.u[g.identity()] - identity(self.dim)));
        let (mut unitarity_defect, mut unitarity_witness) = (0.0, None);
        for (s, m) in self.u.iter().enumerate() {
            let d = linalg::unitarity_defect(m);
            if d > unitarity_defect {
                unitarity_defect = d;
                unitarity_witness = Some(s);
            }
        }
        let (mut homomorphism_defect, mut homomorphism_witness) = (0.0, None);
        for s in g.elements() {
            for t in g.elements() {
                let d = fro(&(&self.u[g.mul(s, t)] - &self.u[s] * &self.u[t]));
                if d > homomorphism_defect {
                    homomorphism_defect = d;
                    homomorphism_witness = Some((s, t));
                }
            }
        }
        let valid = identity_defect <= threshold && unitarity_defect <= threshold && homomorphism_defect <= threshold;
        RepReport {
            valid,
            identity_defect,
            unitarity_defect,
            unitarity_witness: unitarity_witness.filter(|_| unitarity_defect > threshold),
            homomorphism_defect,
            homomorphism_witness: homomorphism_witness.filter(|_| homomorphism_defect > threshold),
            threshold,
        }
    }

    pub fn ensure_valid(&self, cfg: &ToleranceConfig) -> Result<RepReport> {
        let r = self.verify(cfg);
        if !r.valid {
            return Err(Error::Precondition(format!(
                "not a unitary representation (identity {:e}, unitarity {:e}, homomorphism {:e})",
                r.identity_defect, r.unitarity_defect, r.homomorphism_defect
            )));
        }
        Ok(r)
    }

    /// Every eigenvalue of every `U(s)` lies within `cluster_tol` of a
    /// `|G|`-th root of unity.
    pub fn spectrum_in_roots(&self, cfg: &ToleranceConfig) -> Result<SpectrumReport> {
        let m = self.group.order();
        let (mut max_distance, mut witness) = (0.0, None);
        for (s, u) in self.u.iter().enumerate() {
            let jd = joint_diagonalize(std::slice::from_ref(u), cfg, s as u64)?;
            for z in &jd.eigenvalues[0] {
                let (_, dist) = snap_to_root(*z, m);
                if dist > max_distance {
                    max_distance = dist;
                    witness = Some(s);
                }
            }
        }
        let within_roots = max_distance <= cfg.cluster_tol;
        Ok(SpectrumReport { within_roots, max_distance, witness: witness.filter(|_| !within_roots) })
    }

    /// Pairwise commutation and triviality on `[G, G]`, cross-checked.
    pub fn is_commutative(&self, cfg: &ToleranceConfig) -> Result<CommutativityReport> {
        let g = &self.group;
        let threshold = self.threshold(cfg);
        let (mut max_commutator, mut commutator_witness) = (0.0, None);
        for s in g.elements() {
            for t in (s + 1)..g.order() {
                let c = fro(&commutator(&self.u[s], &self.u[t]));
                if c > max_commutator {
                    max_commutator = c;
                    commutator_witness = Some((s, t));
                }
            }
        }
        let commutator_subgroup = g.commutator_subgroup();
        let max_subgroup_defect = self.max_defect_on(&commutator_subgroup);
        let pairwise = max_commutator <= threshold;
        let subgroup = max_subgroup_defect <= threshold;
        if pairwise != subgroup {
            return Err(Error::Consistency(format!(
                "pairwise commutator {max_commutator:e} and [G,G] defect {max_subgroup_defect:e} disagree"
            )));
        }
        Ok(CommutativityReport {
            commutative: pairwise,
            max_commutator,
            commutator_witness: commutator_witness.filter(|_| !pairwise),
            max_subgroup_defect,
            commutator_subgroup,
        })
    }

    fn max_defect_on(&self, subset: &[usize]) -> f64 {
        subset.iter().map(|&x| fro(&(&self.u[x] - identity(self.dim)))).fold(0.0, f64::max)
    }

    /// `s -> U(s)^n` is a representation iff `U` is trivial on the power
    /// subgroup; both are computed and must agree.
    pub fn power_rep_check(&self, n: u32, cfg: &ToleranceConfig) -> Result<PowerRepReport> {
        if n == 0 {
            return Err(Error::Domain("power representation needs n >= 1".into()));
        }
        let powered = UnitaryRep {
            group: self.group.clone(),
            dim: self.dim,
            u: self.u.iter().map(|m| linalg::mat_pow(m, n)).collect(),
        };
        let direct = powered.verify(cfg);
        let power_subgroup = self.group.power_subgroup(n as usize)?;
        let max_subgroup_defect = self.max_defect_on(&power_subgroup);
        let subgroup_trivial = max_subgroup_defect <= self.threshold(cfg);
        if direct.valid != subgroup_trivial {
            return Err(Error::Consistency(format!(
                "U^{n} representation check ({}) disagrees with triviality on G_{n} ({})",
                direct.valid, subgroup_trivial
            )));
        }
        Ok(PowerRepReport { n, is_representation: direct.valid, direct, power_subgroup, max_subgroup_defect })
    }

    /// Joint spectral decomposition `U(s) = sum_i lambda_i(s) P_i` of a
    /// commutative representation.
    pub fn structure_decompose(&self, cfg: &ToleranceConfig, seed: u64) -> Result<StructureDecomposition> {
        self.ensure_valid(cfg)?;
        let comm = self.is_commutative(cfg)?;
        if let Some((i, j)) = comm.commutator_witness {
            return Err(Error::NonCommuting { i, j, norm: comm.max_commutator });
        }
        let m = self.group.order();
        let jd = joint_diagonalize(&self.u, cfg, seed)?;
        let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for col in 0..self.dim {
            let mut key = Vec::with_capacity(m);
            for s in 0..m {
                let (k, dist) = snap_to_root(jd.eigenvalues[s][col], m);
                if dist > cfg.cluster_tol {
                    return Err(Error::Snapping { distance: dist });
                }
                key.push(k);
            }
            classes.entry(key).or_default().push(col);
        }
        let mut projections = Vec::with_capacity(classes.len());
        let mut exponents = Vec::with_capacity(classes.len());
        for (key, cols) in classes {
            let q = CMatrix::from_fn(self.dim, cols.len(), |r, c| jd.basis[(r, cols[c])]);
            projections.push(linalg::hermitian_part(&(&q * q.adjoint())));
            exponents.push(key);
        }
        let decomposition = StructureDecomposition { group: self.group.clone(), dim: self.dim, projections, exponents };
        let report = decomposition.check(cfg);
        if let Some(what) = report.first_failure() {
            return Err(Error::Consistency(format!("structure decomposition violates {what}")));
        }
        let residual = decomposition.reconstruction_residual(self);
        if residual > self.threshold(cfg) {
            return Err(Error::Consistency(format!("structure decomposition reconstructs U with residual {residual:e}")));
        }
        Ok(decomposition)
    }
}

/// `(k, |z - exp(2 pi i k / m)|)` for the nearest `m`-th root of unity.
pub fn snap_to_root(z: Complex64, m: usize) -> (usize, f64) {
    let m_f = m as f64;
    let k = (z.arg() * m_f / TAU).round().rem_euclid(m_f) as usize % m;
    (k, (z - root_of_unity(k, m)).norm())
}

pub fn root_of_unity(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % m) as f64 / m as f64)
}

/// `U(s) = sum_i lambda_i(s) P_i` with characters stored as exponents:
/// `lambda_i(s) = exp(2 pi i exponents[i][s] / |G|)`.
#[derive(Debug, Clone)]
pub struct StructureDecomposition {
    group: FiniteGroup,
    dim: usize,
    projections: Vec<CMatrix>,
    exponents: Vec<Vec<usize>>,
}

/// Invariant residuals of a [`StructureDecomposition`].
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    /// `max_i ||P_i^2 - P_i||_F`.
    pub idempotence: f64,
    /// `max_i ||P_i - P_i*||_F`.
    pub hermiticity: f64,
    /// `max_{i != j} ||P_i P_j||_F`.
    pub orthogonality: f64,
    /// `||sum_i P_i - I||_F`.
    pub resolution: f64,
    /// Characters are exact homomorphisms into the `|G|`-th roots of unity.
    pub characters_multiplicative: bool,
    pub threshold: f64,
}

impl StructureReport {
    pub fn first_failure(&self) -> Option<&'static str> {
        if self.idempotence > self.threshold {
            Some("idempotence")
        } else if self.hermiticity > self.threshold {
            Some("hermiticity")
        } else if self.orthogonality > self.threshold {
            Some("orthogonality")
        } else if self.resolution > self.threshold {
            Some("resolution of identity")
        } else if !self.characters_multiplicative {
            Some("character multiplicativity")
        } else {
            None
        }
    }
}

impl StructureDecomposition {
    /// Hand-built decomposition; each `lambda[i][s]` is snapped to a root of unity.
    pub fn from_parts(
        group: FiniteGroup,
        projections: Vec<CMatrix>,
        lambda: Vec<Vec<Complex64>>,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        if projections.is_empty() || projections.len() != lambda.len() {
            return Err(Error::Shape(format!("{} projections and {} characters", projections.len(), lambda.len())));
        }
        let dim = projections[0].nrows();
        let m = group.order();
        for p in &projections {
            if p.shape() != (dim, dim) {
                return Err(Error::Shape("projections must share one square shape".into()));
            }
        }
        let mut exponents = Vec::with_capacity(lambda.len());
        for row in &lambda {
            if row.len() != m {
                return Err(Error::Shape(format!("character has {} values, group order {m}", row.len())));
            }
            let mut key = Vec::with_capacity(m);
            for z in row {
                let (k, distance) = snap_to_root(*z, m);
                if distance > cfg.cluster_tol {
                    return Err(Error::Snapping { distance });
                }
                key.push(k);
            }
            exponents.push(key);
        }
        Ok(Self { group, dim, projections, exponents })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of projections.
    pub fn k(&self) -> usize {
        self.projections.len()
    }

    pub fn projections(&self) -> &[CMatrix] {
        &self.projections
    }

    pub fn exponents(&self) -> &[Vec<usize>] {
        &self.exponents
    }

    pub fn lambda(&self, i: usize, s: usize) -> Complex64 {
        root_of_unity(self.exponents[i][s], self.group.order())
    }

    /// `k x |G|` table of character values.
    pub fn character_table(&self) -> Vec<Vec<Complex64>> {
        (0..self.k()).map(|i| self.group.elements().map(|s| self.lambda(i, s)).collect()).collect()
    }

    /// `{lambda_1(s), ..., lambda_k(s)}`.
    pub fn spectrum_at(&self, s: usize) -> Vec<Complex64> {
        (0..self.k()).map(|i| self.lambda(i, s)).collect()
    }

    pub fn check(&self, cfg: &ToleranceConfig) -> StructureReport {
        let threshold = cfg.cluster_tol * (self.dim as f64).max(1.0);
        let mut r = StructureReport {
            idempotence: 0.0,
            hermiticity: 0.0,
            orthogonality: 0.0,
            resolution: 0.0,
            characters_multiplicative: true,
            threshold,
        };
        let mut sum = linalg::zeros(self.dim, self.dim);
        for (i, p) in self.projections.iter().enumerate() {
            r.idempotence = r.idempotence.max(fro(&(p * p - p)));
            r.hermiticity = r.hermiticity.max(linalg::hermitian_deviation(p));
            for q in &self.projections[i + 1..] {
                r.orthogonality = r.orthogonality.max(fro(&(p * q)));
            }
            sum += p;
        }
        r.resolution = fro(&(sum - identity(self.dim)));
        let g = &self.group;
        let m = g.order();
        r.characters_multiplicative = self.exponents.iter().all(|e| {
            g.elements().all(|s| g.elements().all(|t| e[g.mul(s, t)] == (e[s] + e[t]) % m))
        });
        r
    }

    /// `max_s ||sum_i lambda_i(s) P_i - U(s)||_F`.
    pub fn reconstruction_residual(&self, rep: &UnitaryRep) -> f64 {
        self.group
            .elements()
            .map(|s| fro(&(self.value_at(s) - rep.value(s))))
            .fold(0.0, f64::max)
    }

    fn value_at(&self, s: usize) -> CMatrix {
        let mut u = linalg::zeros(self.dim, self.dim);
        for (i, p) in self.projections.iter().enumerate() {
            u += p * self.lambda(i, s);
        }
        u
    }

    /// `U(s) = sum_i lambda_i(s) P_i`, after checking every invariant.
    pub fn reconstruct(&self, cfg: &ToleranceConfig) -> Result<UnitaryRep> {
        if let Some(what) = self.check(cfg).first_failure() {
            return Err(Error::Precondition(format!("decomposition violates {what}")));
        }
        let rep = UnitaryRep::new(self.group.clone(), self.group.elements().map(|s| self.value_at(s)).collect())?;
        let report = rep.verify(cfg);
        if !report.valid {
            return Err(Error::Consistency("reconstruction is not a unitary representation".into()));
        }
        Ok(rep)
    }
}

/// All homomorphisms `G -> mu_|G|`, as exponent tables, by brute force over
/// images of a generating set.
pub fn characters(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let m = g.order();
    let gens = group::generating_set(g);
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(table) = extend_character(g, &gens, &choice) {
            out.push(table);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < m {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_character(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let m = g.order();
    let mut table = vec![usize::MAX; m];
    table[g.identity()] = 0;
    let mut queue = std::collections::VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &k) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let v = (table[x] + k) % m;
            if table[y] == usize::MAX {
                table[y] = v;
                queue.push_back(y);
            } else if table[y] != v {
                return None;
            }
        }
    }
    let ok = g.elements().all(|s| g.elements().all(|t| table[g.mul(s, t)] == (table[s] + table[t]) % m));
    ok.then_some(table)
}

fn require_self_adjoint_unitary(u: &CMatrix, name: &str, cfg: &ToleranceConfig) -> Result<()> {
    let tol = cfg.cluster_tol * (u.nrows() as f64).max(1.0);
    if u.nrows() != u.ncols() {
        return Err(Error::Shape(format!("{name} must be square")));
    }
    if linalg::hermitian_deviation(u) > tol {
        return Err(Error::Precondition(format!("{name} is not self-adjoint")));
    }
    if linalg::unitarity_defect(u) > tol {
        return Err(Error::Precondition(format!("{name} is not unitary")));
    }
    Ok(())
}

/// Representation of `Z_n` determined by `U(1) = U0`; needs `U0^n = I`.
pub fn build_cyclic_rep(n: usize, u0: &CMatrix, cfg: &ToleranceConfig) -> Result<UnitaryRep> {
    let g = FiniteGroup::cyclic(n)?;
    if u0.nrows() != u0.ncols() {
        return Err(Error::Shape("U0 must be square".into()));
    }
    let d = u0.nrows();
    let tol = cfg.cluster_tol * (d as f64).max(1.0);
    if linalg::unitarity_defect(u0) > tol {
        return Err(Error::Precondition("U0 is not unitary".into()));
    }
    let defect = fro(&(linalg::mat_pow(u0, n as u32) - identity(d)));
    if defect > tol {
        return Err(Error::Precondition(format!("U0^{n} differs from I by {defect:e}")));
    }
    let u = (0..n).map(|k| linalg::mat_pow(u0, k as u32)).collect();
    UnitaryRep::new(g, u)
}

/// `I` on even permutations and a self-adjoint unitary `U0` on odd ones.
pub fn build_symmetric_commutative(n: usize, u0: &CMatrix, cfg: &ToleranceConfig) -> Result<UnitaryRep> {
    require_self_adjoint_unitary(u0, "U0", cfg)?;
    let g = FiniteGroup::symmetric(n)?;
    let d = u0.nrows();
    let u = group::permutations_lex(n)
        .iter()
        .map(|p| if group::is_even_permutation(p) { identity(d) } else { u0.clone() })
        .collect();
    UnitaryRep::new(g, u)
}

/// Commutative representation of `D_n` from commuting self-adjoint unitaries:
/// `U(r^k) = Ur^k`, `U(s r^k) = Ur^k Us` (exponents mod 2). Odd `n` forces `Ur = I`.
pub fn build_dihedral_commutative(n: usize, ur: &CMatrix, us: &CMatrix, cfg: &ToleranceConfig) -> Result<UnitaryRep> {
    require_self_adjoint_unitary(ur, "Ur", cfg)?;
    require_self_adjoint_unitary(us, "Us", cfg)?;
    if ur.shape() != us.shape() {
        return Err(Error::Shape("Ur and Us must have the same shape".into()));
    }
    let d = ur.nrows();
    let tol = cfg.cluster_tol * (d as f64).max(1.0);
    let c = fro(&commutator(ur, us));
    if c > tol {
        return Err(Error::Precondition(format!("Ur and Us do not commute (norm {c:e})")));
    }
    if n % 2 == 1 && fro(&(ur - identity(d))) > tol {
        return Err(Error::Precondition("odd n forces Ur = I".into()));
    }
    let g = FiniteGroup::dihedral(n)?;
    let rot = |k: usize| if k.is_multiple_of(2) { identity(d) } else { ur.clone() };
    let u = (0..2 * n).map(|x| if x < n { rot(x) } else { rot(x - n) * us }).collect();
    UnitaryRep::new(g, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, diag_real, from_real_rows};
    use approx::assert_abs_diff_eq;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn i_unit() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    #[test]
    fn verification() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(UnitaryRep::trivial(s3, 2).verify(&cfg()).valid);
        let p = UnitaryRep::permutation(3).unwrap();
        assert!(p.verify(&cfg()).valid);
        let mut u = p.values().to_vec();
        u[1][(0, 0)] += Complex64::new(1e-3, 0.0);
        let bad = UnitaryRep::new(p.group().clone(), u).unwrap().verify(&cfg());
        assert!(!bad.valid);
        assert!(bad.homomorphism_witness.is_some());
        assert!(bad.unitarity_witness == Some(1));
    }

    #[test]
    fn spectra_are_roots_of_unity() {
        let i = i_unit();
        let z4 = build_cyclic_rep(4, &diag(&[i, -i]), &cfg()).unwrap();
        assert!(z4.spectrum_in_roots(&cfg()).unwrap().within_roots);
        assert!(UnitaryRep::permutation(3).unwrap().spectrum_in_roots(&cfg()).unwrap().within_roots);
        let g = FiniteGroup::cyclic(5).unwrap();
        assert!(UnitaryRep::trivial(g, 3).spectrum_in_roots(&cfg()).unwrap().max_distance < 1e-12);
        // not a rep of Z_3, eigenvalue i is not a cube root of unity
        let g3 = FiniteGroup::cyclic(3).unwrap();
        let fake = UnitaryRep::new(g3, vec![identity(1), diag(&[i]), diag(&[-i])]).unwrap();
        assert!(!fake.spectrum_in_roots(&cfg()).unwrap().within_roots);
    }

    #[test]
    fn commutativity() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let w = root_of_unity(1, 6);
        let rep = build_cyclic_rep(6, &diag(&[w, w * w]), &cfg()).unwrap();
        assert!(rep.is_commutative(&cfg()).unwrap().commutative);
        assert_eq!(rep.group(), &z6);
        let p = UnitaryRep::permutation(3).unwrap().is_commutative(&cfg()).unwrap();
        assert!(!p.commutative && p.commutator_witness.is_some());
        let sc = build_symmetric_commutative(3, &diag_real(&[1.0, -1.0]), &cfg()).unwrap();
        assert!(sc.verify(&cfg()).valid);
        assert!(sc.is_commutative(&cfg()).unwrap().commutative);
    }

    #[test]
    fn dihedral_builders() {
        let ur = diag_real(&[1.0, -1.0]);
        let us = diag_real(&[-1.0, 1.0]);
        let d4 = build_dihedral_commutative(4, &ur, &us, &cfg()).unwrap();
        assert!(d4.verify(&cfg()).valid);
        let distinct: std::collections::BTreeSet<String> =
            d4.values().iter().map(|m| format!("{m:?}")).collect();
        assert_eq!(distinct.len(), 4);
        assert!(build_dihedral_commutative(3, &ur, &us, &cfg()).is_err());
        let d3 = build_dihedral_commutative(3, &identity(2), &us, &cfg()).unwrap();
        assert!(d3.verify(&cfg()).valid);
        let x = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(matches!(build_dihedral_commutative(4, &ur, &x, &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn structure_of_trivial_rep() {
        let rep = UnitaryRep::trivial(FiniteGroup::cyclic(3).unwrap(), 2);
        let s = rep.structure_decompose(&cfg(), 1).unwrap();
        assert_eq!(s.k(), 1);
        assert_abs_diff_eq!(fro(&(&s.projections()[0] - identity(2))), 0.0, epsilon = 1e-12);
        assert!(s.exponents()[0].iter().all(|&e| e == 0));
    }

    #[test]
    fn structure_of_dihedral_rep() {
        let rep = build_dihedral_commutative(3, &identity(2), &diag_real(&[1.0, -1.0]), &cfg()).unwrap();
        let s = rep.structure_decompose(&cfg(), 2).unwrap();
        assert_eq!(s.k(), 2);
        for row in s.character_table() {
            for z in row {
                assert!((z - ONE).norm() < 1e-12 || (z + ONE).norm() < 1e-12);
            }
        }
        assert!(s.check(&cfg()).characters_multiplicative);
    }

    #[test]
    fn structure_of_diagonal_z4_rep() {
        let i = i_unit();
        let rep = build_cyclic_rep(4, &diag(&[ONE, i, -ONE, -i]), &cfg()).unwrap();
        let s = rep.structure_decompose(&cfg(), 3).unwrap();
        assert_eq!(s.k(), 4);
        let mut at_one: Vec<usize> = s.exponents().iter().map(|e| e[1]).collect();
        at_one.sort_unstable();
        assert_eq!(at_one, vec![0, 1, 2, 3]);
        let back = s.reconstruct(&cfg()).unwrap();
        assert!(s.reconstruction_residual(&rep) < 1e-10);
        assert!(back.verify(&cfg()).valid);
    }

    #[test]
    fn hand_built_decomposition() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let p1 = diag_real(&[1.0, 0.0]);
        let p2 = diag_real(&[0.0, 1.0]);
        let s = StructureDecomposition::from_parts(
            z2.clone(),
            vec![p1.clone(), p2.clone()],
            vec![vec![ONE, ONE], vec![ONE, -ONE]],
            &cfg(),
        )
        .unwrap();
        let rep = s.reconstruct(&cfg()).unwrap();
        assert!(fro(&(rep.value(1) - (p1 - p2))) < 1e-12);
        let trivial = StructureDecomposition::from_parts(z2.clone(), vec![identity(2)], vec![vec![ONE, ONE]], &cfg())
            .unwrap()
            .reconstruct(&cfg())
            .unwrap();
        assert!(trivial.values().iter().all(|u| u == &identity(2)));
        let broken =
            StructureDecomposition::from_parts(z2, vec![diag_real(&[1.0, 0.0])], vec![vec![ONE, ONE]], &cfg()).unwrap();
        assert!(matches!(broken.reconstruct(&cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_commutative_decomposition_fails() {
        let p = UnitaryRep::permutation(3).unwrap();
        assert!(matches!(p.structure_decompose(&cfg(), 0), Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn power_representations() {
        let p = UnitaryRep::permutation(3).unwrap();
        assert!(p.power_rep_check(1, &cfg()).unwrap().is_representation);
        let r2 = p.power_rep_check(2, &cfg()).unwrap();
        assert!(!r2.is_representation);
        assert_eq!(r2.power_subgroup.len(), 3);
        let sc = build_symmetric_commutative(3, &diag_real(&[1.0, -1.0]), &cfg()).unwrap();
        assert!(sc.power_rep_check(2, &cfg()).unwrap().is_representation);
        assert!(p.power_rep_check(0, &cfg()).is_err());
    }

    #[test]
    fn character_enumeration() {
        // abelian groups have |G| characters, S_3 and D_4 have |G/[G,G]|
        assert_eq!(characters(&FiniteGroup::cyclic(6).unwrap()).len(), 6);
        assert_eq!(characters(&FiniteGroup::symmetric(3).unwrap()).len(), 2);
        assert_eq!(characters(&FiniteGroup::dihedral(4).unwrap()).len(), 4);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(characters(&FiniteGroup::product(&z2, &z2).unwrap()).len(), 4);
    }

    #[test]
    fn snapping() {
        let (k, d) = snap_to_root(Complex64::new(0.0, -1.0), 4);
        assert_eq!(k, 3);
        assert!(d < 1e-15);
        assert_eq!(snap_to_root(Complex64::new(1.0, -1e-17), 6).0, 0);
    }
}
