//! Operator-valued functions on finite groups and their Gram blocks.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupMorphism};
use crate::linalg::{self, fro, psd_check, CMatrix, PsdReport, ToleranceConfig};

/// `T: G -> M_d(C)`, one matrix per element in index order.
#[derive(Debug, Clone)]
pub struct OperatorFunction {
    group: FiniteGroup,
    dim: usize,
    values: Vec<CMatrix>,
}

/// Outcome of [`OperatorFunction::check_symmetry`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    /// `max_s ||T(s^-1) - T(s)*||_F`.
    pub worst_violation: f64,
    pub witness: Option<usize>,
    pub threshold: f64,
}

impl OperatorFunction {
    pub fn new(group: FiniteGroup, values: Vec<CMatrix>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Shape(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        let dim = values[0].nrows();
        for (s, v) in values.iter().enumerate() {
            if v.shape() != (dim, dim) {
                return Err(Error::Shape(format!(
                    "value at element {s} is {}x{}, expected {dim}x{dim}",
                    v.nrows(),
                    v.ncols()
                )));
            }
            if !linalg::is_finite(v) {
                return Err(Error::Shape(format!("value at element {s} has non-finite entries")));
            }
        }
        Ok(Self { group, dim, values })
    }

    pub fn from_fn(group: FiniteGroup, f: impl Fn(usize) -> CMatrix) -> Result<Self> {
        let values = group.elements().map(f).collect();
        Self::new(group, values)
    }

    pub fn constant(group: FiniteGroup, value: CMatrix) -> Result<Self> {
        Self::from_fn(group, |_| value.clone())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, s: usize) -> &CMatrix {
        &self.values[s]
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    /// `T(e)`.
    pub fn at_identity(&self) -> &CMatrix {
        &self.values[self.group.identity()]
    }

    fn scale(&self) -> f64 {
        self.values.iter().map(fro).fold(1.0, f64::max)
    }

    pub fn check_symmetry(&self, cfg: &ToleranceConfig) -> SymmetryReport {
        let threshold = cfg.psd_tol * self.scale();
        let mut worst = 0.0;
        let mut witness = None;
        for s in self.group.elements() {
            let v = fro(&(&self.values[self.group.inv(s)] - self.values[s].adjoint()));
            if v > worst {
                worst = v;
                witness = Some(s);
            }
        }
        let symmetric = worst <= threshold;
        SymmetryReport { symmetric, worst_violation: worst, witness: if symmetric { None } else { witness }, threshold }
    }

    pub fn ensure_symmetric(&self, cfg: &ToleranceConfig) -> Result<SymmetryReport> {
        let report = self.check_symmetry(cfg);
        match report.witness {
            Some(element) => Err(Error::NotSymmetric { element, violation: report.worst_violation }),
            None => Ok(report),
        }
    }

    /// Blocks `T(s_i^-1 s_j)` over the given ordered tuple.
    pub fn gram_block(&self, tuple: &[usize]) -> Result<BlockGram> {
        if tuple.is_empty() {
            return Err(Error::Shape("gram block needs a non-empty tuple".into()));
        }
        for &s in tuple {
            self.group.check_element(s)?;
        }
        let g = &self.group;
        let blocks = tuple
            .iter()
            .map(|&si| tuple.iter().map(|&sj| self.values[g.mul(g.inv(si), sj)].clone()).collect())
            .collect();
        let grid = BlockGrid::new(blocks)?;
        let flat = grid.flat();
        Ok(BlockGram { tuple: tuple.to_vec(), grid, flat })
    }

    /// Gram block over all elements in native index order.
    pub fn full_gram(&self) -> BlockGram {
        let tuple: Vec<usize> = self.group.elements().collect();
        self.gram_block(&tuple).expect("native tuple is valid")
    }

    /// Symmetry check followed by a spectral check of the full Gram block.
    pub fn is_positive_definite(&self, cfg: &ToleranceConfig) -> Result<PsdReport> {
        self.ensure_symmetric(cfg)?;
        psd_check(&self.full_gram().flat, cfg)
    }

    /// `s -> V* T(s) V` for `V` of shape `d x d'`.
    pub fn conjugate_by(&self, v: &CMatrix) -> Result<OperatorFunction> {
        if v.nrows() != self.dim {
            return Err(Error::Shape(format!("V has {} rows, function dimension is {}", v.nrows(), self.dim)));
        }
        let va = v.adjoint();
        let values = self.values.iter().map(|t| &va * t * v).collect();
        Self::new(self.group.clone(), values)
    }

    /// `T o phi` on the source group of `phi`.
    pub fn pullback(&self, phi: &GroupMorphism) -> Result<OperatorFunction> {
        if !phi.target.same_table(&self.group) {
            return Err(Error::Precondition("morphism target is not the function's group".into()));
        }
        phi.ensure_homomorphism()?;
        let values = phi.map.iter().map(|&x| self.values[x].clone()).collect();
        Self::new(phi.source.clone(), values)
    }

    /// `s -> T(s)^n`.
    pub fn power_map(&self, n: u32) -> Result<OperatorFunction> {
        if n == 0 {
            return Err(Error::Domain("power map needs n >= 1".into()));
        }
        let values = self.values.iter().map(|t| linalg::mat_pow(t, n)).collect();
        Self::new(self.group.clone(), values)
    }

    /// Positivity of the n-fold block Hadamard power of the Gram block,
    /// computed both as a Hadamard power and as the Gram block of
    /// [`power_map`](Self::power_map), with the two routes cross-checked.
    pub fn power_pd_check(&self, n: u32, cfg: &ToleranceConfig) -> Result<PowerPdReport> {
        let direct_fn = self.power_map(n)?;
        self.ensure_symmetric(cfg)?;
        let base = self.full_gram();
        let base_positive = psd_check(&base.flat, cfg)?.is_psd();
        let mut power = base.grid.clone();
        for _ in 1..n {
            power = power.hadamard(&base.grid)?;
        }
        let hadamard_flat = power.flat();
        let direct_flat = direct_fn.full_gram().flat;
        let route_residual = fro(&(&hadamard_flat - &direct_flat));
        let hadamard = psd_check(&hadamard_flat, cfg)?;
        let direct = psd_check(&direct_flat, cfg)?;
        if route_residual > cfg.psd_tol * hadamard.scale || hadamard.is_psd() != direct.is_psd() {
            return Err(Error::Consistency(format!(
                "Hadamard-power and power-map routes disagree (residual {route_residual:e}, verdicts {} vs {})",
                hadamard.verdict.as_str(),
                direct.verdict.as_str()
            )));
        }
        Ok(PowerPdReport { n, hadamard, direct, route_residual, base_positive, flat: hadamard_flat })
    }
}

/// Result of [`OperatorFunction::power_pd_check`].
#[derive(Debug, Clone)]
pub struct PowerPdReport {
    pub n: u32,
    pub hadamard: PsdReport,
    pub direct: PsdReport,
    pub route_residual: f64,
    /// Whether `T` itself passed; the power is still evaluated when it did not.
    pub base_positive: bool,
    pub flat: CMatrix,
}

/// Square grid of equally sized square blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    blocks: Vec<Vec<CMatrix>>,
    block_dim: usize,
}

impl BlockGrid {
    pub fn new(blocks: Vec<Vec<CMatrix>>) -> Result<Self> {
        let m = blocks.len();
        if m == 0 {
            return Err(Error::Shape("empty block grid".into()));
        }
        let d = blocks[0].first().map_or(0, |b| b.nrows());
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Shape(format!("grid row {i} has {} blocks, expected {m}", row.len())));
            }
            for (j, b) in row.iter().enumerate() {
                if b.shape() != (d, d) {
                    return Err(Error::Shape(format!(
                        "block ({i},{j}) is {}x{}, expected {d}x{d}",
                        b.nrows(),
                        b.ncols()
                    )));
                }
            }
        }
        Ok(Self { blocks, block_dim: d })
    }

    /// Number of block rows.
    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn block(&self, i: usize, j: usize) -> &CMatrix {
        &self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<CMatrix>] {
        &self.blocks
    }

    pub fn flat(&self) -> CMatrix {
        linalg::block_assemble(&self.blocks).expect("grid shape validated on construction")
    }

    /// Blockwise product `[A_ij B_ij]`.
    pub fn hadamard(&self, other: &BlockGrid) -> Result<BlockGrid> {
        hadamard_block(self, other)
    }
}

pub fn hadamard_block(a: &BlockGrid, b: &BlockGrid) -> Result<BlockGrid> {
    if a.size() != b.size() || a.block_dim != b.block_dim {
        return Err(Error::Shape(format!(
            "grids {}x{} of {}-blocks and {}x{} of {}-blocks",
            a.size(),
            a.size(),
            a.block_dim,
            b.size(),
            b.size(),
            b.block_dim
        )));
    }
    let blocks = a
        .blocks
        .iter()
        .zip(&b.blocks)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x * y).collect())
        .collect();
    BlockGrid::new(blocks)
}

/// Gram block over an ordered element tuple.
#[derive(Debug, Clone)]
pub struct BlockGram {
    pub tuple: Vec<usize>,
    pub grid: BlockGrid,
    pub flat: CMatrix,
}
