//! Explicit positivity criteria for small groups and for finite truncations
//! of `Z` and `Z + Z`.
//!
//! Each criterion computes its own verdict from contraction factorizations
//! and also runs [`psd_check`] on the assembled Gram block. A disagreement is
//! an error unless the oracle's minimum eigenvalue sits inside a narrow band
//! around zero (`BOUNDARY_BAND` times the PSD threshold), where both answers
//! are numerically legitimate; such cases are flagged through
//! `oracle_agrees = false` instead.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    self, block_assemble, fro, identity, op_norm, pinv, psd_check, range_projector, sqrt_clipped, sqrt_defect, zeros, CMatrix,
    PsdReport, PsdVerdict, ToleranceConfig,
};
use crate::sampling;

/// Multiple of the PSD threshold inside which criterion and oracle may differ.
pub const BOUNDARY_BAND: f64 = 1e3;
/// Default level caps for the truncations.
pub const Z_LEVEL_CAP: usize = 8;
pub const ZZ_LEVEL_CAP: usize = 4;

fn cross_check(what: &str, criterion: bool, oracle: &PsdReport) -> Result<bool> {
    if criterion == oracle.is_psd() {
        return Ok(true);
    }
    let band = BOUNDARY_BAND * oracle.tolerance_used * oracle.scale;
    if oracle.min_eigenvalue.abs() <= band {
        return Ok(false);
    }
    Err(Error::Consistency(format!(
        "{what} criterion says {criterion} but the Gram block has minimum eigenvalue {:e}",
        oracle.min_eigenvalue
    )))
}

fn square(m: &CMatrix, name: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("{name} must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(m.nrows())
}

fn same_square(ms: &[(&CMatrix, &str)]) -> Result<usize> {
    let d = square(ms[0].0, ms[0].1)?;
    for (m, name) in &ms[1..] {
        if m.shape() != (d, d) {
            return Err(Error::Shape(format!("{name} must be {d}x{d}, got {}x{}", m.nrows(), m.ncols())));
        }
    }
    Ok(d)
}

fn require_hermitian(m: &CMatrix, name: &str, cfg: &ToleranceConfig) -> Result<()> {
    let deviation = linalg::hermitian_deviation(m);
    let threshold = cfg.psd_threshold(fro(m));
    if deviation > threshold {
        return Err(Error::Precondition(format!(
            "{name} is not Hermitian (deviation {deviation:e} > {threshold:e})"
        )));
    }
    Ok(())
}

fn blocks2(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> Result<CMatrix> {
    block_assemble(&[vec![a.clone(), b.clone()], vec![b.adjoint(), c.clone()]])
}

/// `B = A^{1/2} Gamma C^{1/2}` for the block `[[A, B], [B*, C]]`.
#[derive(Debug, Clone)]
pub struct GammaFactor {
    pub gamma: CMatrix,
    pub norm: f64,
    /// `||A^{1/2} Gamma C^{1/2} - B||_F`.
    pub reconstruction_residual: f64,
    pub is_contraction: bool,
    /// Criterion verdict: exact reconstruction by a contraction.
    pub positive: bool,
    pub oracle: PsdReport,
    pub oracle_agrees: bool,
}

pub fn gamma_factor(a: &CMatrix, b: &CMatrix, c: &CMatrix, cfg: &ToleranceConfig) -> Result<GammaFactor> {
    square(a, "A")?;
    square(c, "C")?;
    if b.shape() != (a.nrows(), c.nrows()) {
        return Err(Error::Shape(format!(
            "B must be {}x{}, got {}x{}",
            a.nrows(),
            c.nrows(),
            b.nrows(),
            b.ncols()
        )));
    }
    for m in [a, c] {
        let r = psd_check(m, cfg)?;
        if !r.is_psd() {
            return Err(Error::Indefinite(Box::new(r)));
        }
    }
    let block = blocks2(a, b, c)?;
    let oracle = psd_check(&block, cfg)?;
    let a_half = sqrt_clipped(a);
    let c_half = sqrt_clipped(c);
    let raw = pinv(&a_half, cfg) * b * pinv(&c_half, cfg);
    let gamma = range_projector(&a_half, cfg) * raw * range_projector(&c_half, cfg);
    let norm = op_norm(&gamma);
    let reconstruction_residual = fro(&(&a_half * &gamma * &c_half - b));
    let is_contraction = cfg.is_contraction_norm(norm);
    let positive = is_contraction && reconstruction_residual <= cfg.psd_threshold(oracle.scale);
    let oracle_agrees = cross_check("gamma factorization", positive, &oracle)?;
    Ok(GammaFactor { gamma, norm, reconstruction_residual, is_contraction, positive, oracle, oracle_agrees })
}

/// `[[A, B], [B, A]] >= 0` iff `A - B >= 0` and `A + B >= 0`.
#[derive(Debug, Clone)]
pub struct PmReport {
    pub minus: PsdReport,
    pub plus: PsdReport,
    pub holds: bool,
    pub oracle: PsdReport,
    pub oracle_agrees: bool,
}

pub fn pm_criterion(a: &CMatrix, b: &CMatrix, cfg: &ToleranceConfig) -> Result<PmReport> {
    same_square(&[(a, "A"), (b, "B")])?;
    require_hermitian(b, "B", cfg)?;
    let minus = psd_check(&(a - b), cfg)?;
    let plus = psd_check(&(a + b), cfg)?;
    let holds = minus.is_psd() && plus.is_psd();
    let oracle = psd_check(&block_assemble(&[vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]])?, cfg)?;
    let oracle_agrees = cross_check("+-B <= A", holds, &oracle)?;
    Ok(PmReport { minus, plus, holds, oracle, oracle_agrees })
}

#[derive(Debug, Clone)]
pub struct Z2Report {
    /// The block `[[T0, T1], [T1, T0]]` is PSD.
    pub block: PsdReport,
    pub t0: PsdReport,
    /// `T1 = T0^{1/2} Gamma T0^{1/2}` with a contraction; absent when `T0` is indefinite.
    pub gamma: Option<GammaFactor>,
    /// `T0 >= 0` and `+-T1 <= T0`.
    pub pm: PmReport,
    /// `||T1|| <= 1`, reported when `T0 = I`.
    pub identity_case: Option<bool>,
    /// `T0 > 0` and `T0^{-1/2} T1 T0^{-1/2}` a strict contraction, in strict mode.
    pub strict: Option<StrictZ2>,
    pub positive: bool,
    pub oracle_agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrictZ2 {
    pub gamma_norm: f64,
    pub strictly_positive: bool,
}

pub fn z2_criterion(t0: &CMatrix, t1: &CMatrix, cfg: &ToleranceConfig, strict: bool) -> Result<Z2Report> {
    let d = same_square(&[(t0, "T(0)"), (t1, "T(1)")])?;
    require_hermitian(t0, "T(0)", cfg)?;
    require_hermitian(t1, "T(1)", cfg)?;
    let block = psd_check(&block_assemble(&[vec![t0.clone(), t1.clone()], vec![t1.clone(), t0.clone()]])?, cfg)?;
    let t0_report = psd_check(t0, cfg)?;
    let gamma = if t0_report.is_psd() { Some(gamma_factor(t0, t1, t0, cfg)?) } else { None };
    let pm = pm_criterion(t0, t1, cfg)?;
    let cond3 = gamma.as_ref().is_some_and(|g| g.positive);
    let cond4 = t0_report.is_psd() && pm.holds;
    let identity_case = (fro(&(t0 - identity(d))) <= cfg.psd_threshold(fro(t0)))
        .then(|| cfg.is_contraction_norm(op_norm(t1)));
    let mut oracle_agrees = cross_check("Z2 factorization", cond3, &block)?;
    oracle_agrees &= cross_check("Z2 +-T(1) <= T(0)", cond4, &block)?;
    if let Some(c) = identity_case {
        oracle_agrees &= cross_check("Z2 ||T(1)|| <= 1", c, &block)?;
    }
    let strict = if strict {
        if t0_report.verdict != PsdVerdict::Positive {
            return Err(Error::Singular(format!(
                "strict mode needs T(0) invertible (minimum eigenvalue {:e})",
                t0_report.min_eigenvalue
            )));
        }
        let (values, q) = linalg::hermitian_eigen(t0);
        let inv_sqrt = &q
            * linalg::diag_real(&values.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>())
            * q.adjoint();
        let gamma_norm = op_norm(&(&inv_sqrt * t1 * &inv_sqrt));
        let strictly_positive = gamma_norm < 1.0 - cfg.contraction_tol;
        let strict_block = block.verdict == PsdVerdict::Positive;
        if strictly_positive != strict_block && block.min_eigenvalue.abs() > BOUNDARY_BAND * block.tolerance_used * block.scale {
            return Err(Error::Consistency("strict Z2 criterion disagrees with the Gram block".into()));
        }
        Some(StrictZ2 { gamma_norm, strictly_positive })
    } else {
        None
    };
    Ok(Z2Report { block, t0: t0_report, gamma, pm, identity_case, strict, positive: cond4, oracle_agrees })
}

/// Factorization of the 3x3 block `[[A, B, R], [B*, C, B'], [R*, B'*, D]]`.
#[derive(Debug, Clone)]
pub struct Factor3x3 {
    pub left: GammaFactor,
    pub right: GammaFactor,
    /// Which 2x2 corner fails, if any.
    pub failing_corner: Option<&'static str>,
    pub gamma_r: Option<CMatrix>,
    pub gamma_r_norm: f64,
    pub reconstruction_residual: f64,
    pub positive: bool,
    pub oracle: PsdReport,
    pub oracle_agrees: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn factor_3x3(
    a: &CMatrix,
    b: &CMatrix,
    r: &CMatrix,
    c: &CMatrix,
    bp: &CMatrix,
    d: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<Factor3x3> {
    square(a, "A")?;
    square(c, "C")?;
    square(d, "D")?;
    if r.shape() != (a.nrows(), d.nrows()) {
        return Err(Error::Shape("R must map the third space into the first".into()));
    }
    let flat = block_assemble(&[
        vec![a.clone(), b.clone(), r.clone()],
        vec![b.adjoint(), c.clone(), bp.clone()],
        vec![r.adjoint(), bp.adjoint(), d.clone()],
    ])?;
    let oracle = psd_check(&flat, cfg)?;
    let left = gamma_factor(a, b, c, cfg)?;
    let right = gamma_factor(c, bp, d, cfg)?;
    let failing_corner = if !left.positive {
        Some("[[A, B], [B*, C]]")
    } else if !right.positive {
        Some("[[C, B'], [B'*, D]]")
    } else {
        None
    };
    let (mut gamma_r, mut gamma_r_norm, mut reconstruction_residual, mut positive) = (None, 0.0, f64::INFINITY, false);
    if failing_corner.is_none() {
        let a_half = sqrt_clipped(a);
        let d_half = sqrt_clipped(d);
        let g = &left.gamma;
        let gp = &right.gamma;
        let d_g_star = sqrt_defect(&(identity(g.nrows()) - g * g.adjoint()));
        let d_gp = sqrt_defect(&(identity(gp.ncols()) - gp.adjoint() * gp));
        let base = &a_half * g * gp * &d_half;
        let target = r - &base;
        let raw = pinv(&d_g_star, cfg) * pinv(&a_half, cfg) * &target * pinv(&d_half, cfg) * pinv(&d_gp, cfg);
        let gr = range_projector(&d_g_star, cfg) * raw * range_projector(&d_gp, cfg);
        gamma_r_norm = op_norm(&gr);
        reconstruction_residual = fro(&(&a_half * &d_g_star * &gr * &d_gp * &d_half + base - r));
        positive = cfg.is_contraction_norm(gamma_r_norm) && reconstruction_residual <= cfg.psd_threshold(oracle.scale);
        gamma_r = Some(gr);
    }
    let oracle_agrees = cross_check("3x3 factorization", positive, &oracle)?;
    Ok(Factor3x3 {
        left,
        right,
        failing_corner,
        gamma_r,
        gamma_r_norm,
        reconstruction_residual,
        positive,
        oracle,
        oracle_agrees,
    })
}

#[derive(Debug, Clone)]
pub struct Z3Report {
    pub factor: Factor3x3,
    /// Present when `T(0) = I`: `T1* = D_{T1*} Gamma D_{T1} + T1^2`.
    pub identity_case: Option<Z3IdentityCase>,
    pub positive: bool,
    pub oracle_agrees: bool,
}

#[derive(Debug, Clone)]
pub struct Z3IdentityCase {
    pub gamma: CMatrix,
    pub gamma_norm: f64,
    pub reconstruction_residual: f64,
    pub positive: bool,
    /// `||D_{T1*}^{-1} (T1* - T1^2) D_{T1}^{-1}||` in strict mode.
    pub strict_norm: Option<f64>,
}

/// Gram block over `Z_3` is `[[T0, T1, T1*], [T1*, T0, T1], [T1, T1*, T0]]`.
pub fn z3_gram(t0: &CMatrix, t1: &CMatrix) -> Result<CMatrix> {
    let t2 = t1.adjoint();
    block_assemble(&[
        vec![t0.clone(), t1.clone(), t2.clone()],
        vec![t2.clone(), t0.clone(), t1.clone()],
        vec![t1.clone(), t2, t0.clone()],
    ])
}

pub fn z3_criterion(t0: &CMatrix, t1: &CMatrix, cfg: &ToleranceConfig, strict: bool) -> Result<Z3Report> {
    let d = same_square(&[(t0, "T(0)"), (t1, "T(1)")])?;
    require_hermitian(t0, "T(0)", cfg)?;
    let t0_report = psd_check(t0, cfg)?;
    if !t0_report.is_psd() {
        return Err(Error::Indefinite(Box::new(t0_report)));
    }
    let t1s = t1.adjoint();
    let factor = factor_3x3(t0, t1, &t1s, t0, t1, t0, cfg)?;
    let mut oracle_agrees = factor.oracle_agrees;
    let identity_case = if fro(&(t0 - identity(d))) <= cfg.psd_threshold(fro(t0)) {
        let norm = op_norm(t1);
        if !cfg.is_contraction_norm(norm) {
            if strict {
                return Err(Error::NotContraction { norm });
            }
            Some(Z3IdentityCase {
                gamma: zeros(d, d),
                gamma_norm: f64::INFINITY,
                reconstruction_residual: f64::INFINITY,
                positive: false,
                strict_norm: None,
            })
        } else {
            let d_t = sqrt_defect(&(identity(d) - t1.adjoint() * t1));
            let d_ts = sqrt_defect(&(identity(d) - t1 * t1.adjoint()));
            let target = &t1s - t1 * t1;
            let gamma = range_projector(&d_ts, cfg) * pinv(&d_ts, cfg) * &target * pinv(&d_t, cfg) * range_projector(&d_t, cfg);
            let gamma_norm = op_norm(&gamma);
            let reconstruction_residual = fro(&(&d_ts * &gamma * &d_t + t1 * t1 - &t1s));
            let positive = cfg.is_contraction_norm(gamma_norm)
                && reconstruction_residual <= cfg.psd_threshold(factor.oracle.scale);
            let strict_norm = if strict {
                let (inv_t, inv_ts) = match (d_t.clone().try_inverse(), d_ts.clone().try_inverse()) {
                    (Some(a), Some(b)) if 1.0 - norm > cfg.contraction_tol => (a, b),
                    _ => return Err(Error::Singular("strict mode needs ||T(1)|| < 1".into())),
                };
                Some(op_norm(&(inv_ts * &target * inv_t)))
            } else {
                None
            };
            oracle_agrees &= cross_check("Z3 identity-case factorization", positive, &factor.oracle)?;
            Some(Z3IdentityCase { gamma, gamma_norm, reconstruction_residual, positive, strict_norm })
        }
    } else {
        if strict {
            return Err(Error::Precondition("strict mode applies to T(0) = I".into()));
        }
        None
    };
    Ok(Z3Report { positive: factor.positive, factor, identity_case, oracle_agrees })
}

/// `(T)_{1/2}`: the off-diagonal block of the square root of `[[I, T], [T*, I]]`.
#[derive(Debug, Clone)]
pub struct HalfPower {
    pub b: CMatrix,
    /// `D_{B*}`, also the top-left block of the square root.
    pub d_b_star: CMatrix,
    /// `D_B`, also the bottom-right block.
    pub d_b: CMatrix,
    /// `max` of the two diagonal-block residuals.
    pub block_residual: f64,
    /// `||2 B D_B - T||_F`.
    pub identity_residual: f64,
}

pub fn half_power(t: &CMatrix, cfg: &ToleranceConfig) -> Result<HalfPower> {
    let d = square(t, "T")?;
    let norm = op_norm(t);
    if !cfg.is_contraction_norm(norm) {
        return Err(Error::NotContraction { norm });
    }
    let s = sqrt_clipped(&blocks2(&identity(d), t, &identity(d))?);
    let b = s.view((0, d), (d, d)).into_owned();
    let d_b_star = sqrt_defect(&(identity(d) - &b * b.adjoint()));
    let d_b = sqrt_defect(&(identity(d) - b.adjoint() * &b));
    let block_residual = fro(&(s.view((0, 0), (d, d)) - &d_b_star)).max(fro(&(s.view((d, d), (d, d)) - &d_b)));
    let identity_residual = fro(&((&b * &d_b) * Complex64::new(2.0, 0.0) - t));
    let tol = cfg.cluster_tol * fro(t).max(1.0);
    if block_residual > tol || identity_residual > tol {
        return Err(Error::Consistency(format!(
            "half power residuals {block_residual:e} / {identity_residual:e}"
        )));
    }
    Ok(HalfPower { b, d_b_star, d_b, block_residual, identity_residual })
}

/// `Z_4` Gram block with `T(0) = I`, `T(1) = T1`, `T(2) = T2`, `T(3) = T1*`.
pub fn z4_gram(t1: &CMatrix, t2: &CMatrix) -> Result<CMatrix> {
    let i = identity(t1.nrows());
    let t3 = t1.adjoint();
    block_assemble(&[
        vec![i.clone(), t1.clone(), t2.clone(), t3.clone()],
        vec![t3.clone(), i.clone(), t1.clone(), t2.clone()],
        vec![t2.clone(), t3.clone(), i.clone(), t1.clone()],
        vec![t1.clone(), t2.clone(), t3, i],
    ])
}

#[derive(Debug, Clone)]
pub struct Z4Report {
    pub t1_contraction: bool,
    /// `+-T2 <= I`.
    pub pm_t2: bool,
    /// `T1 + T1* = (I + T2)^{1/2} Gamma+ (I + T2)^{1/2}`; absent unless `+-T2 <= I`.
    pub gamma_plus: Option<GammaFactor>,
    /// `T1 - T1* = (I - T2)^{1/2} Gamma- (I - T2)^{1/2}`.
    pub gamma_minus: Option<GammaFactor>,
    /// Condition with the half power `S = (T1)_{1/2}`; absent unless `T1` is a contraction.
    pub half_power_condition: Option<Z4HalfPowerCondition>,
    pub positive: bool,
    pub oracle: PsdReport,
    pub oracle_agrees: bool,
}

/// One candidate `Gamma = pinv(A^{1/2}) B pinv(A^{1/2})` for
/// `A = [[I, T1], [T1*, I]]`, `B = [[T2, T1*], [T1, T2]]`, with the residuals
/// of the block equations written in terms of `S` and its defects.
#[derive(Debug, Clone)]
pub struct Z4HalfPowerCondition {
    pub gamma: CMatrix,
    pub gamma_norm: f64,
    /// `||Gamma - Gamma*||_F`.
    pub self_adjointness: f64,
    /// Residual of the top-left expression for `T2`.
    pub t2_top_residual: f64,
    /// Residual of the bottom-right expression for `T2`.
    pub t2_bottom_residual: f64,
    /// Residual of the bottom-left expression for `T1`.
    pub t1_residual: f64,
    pub holds: bool,
}

pub fn z4_criterion(t1: &CMatrix, t2: &CMatrix, cfg: &ToleranceConfig) -> Result<Z4Report> {
    let d = same_square(&[(t1, "T1"), (t2, "T2")])?;
    require_hermitian(t2, "T2", cfg)?;
    let i = identity(d);
    let oracle = psd_check(&z4_gram(t1, t2)?, cfg)?;
    let t1_contraction = cfg.is_contraction_norm(op_norm(t1));
    let plus_i = &i + t2;
    let minus_i = &i - t2;
    let pm_t2 = psd_check(&plus_i, cfg)?.is_psd() && psd_check(&minus_i, cfg)?.is_psd();
    let (gamma_plus, gamma_minus) = if pm_t2 {
        let sum = t1 + t1.adjoint();
        let diff = t1 - t1.adjoint();
        (
            Some(gamma_factor(&plus_i, &sum, &plus_i, cfg)?),
            Some(gamma_factor(&minus_i, &diff, &minus_i, cfg)?),
        )
    } else {
        (None, None)
    };
    let cond4 = t1_contraction
        && pm_t2
        && gamma_plus.as_ref().is_some_and(|g| g.positive)
        && gamma_minus.as_ref().is_some_and(|g| g.positive);
    let half_power_condition = if t1_contraction { Some(z4_half_power(t1, t2, &oracle, cfg)?) } else { None };
    let cond3 = t1_contraction && half_power_condition.as_ref().is_some_and(|c| c.holds);
    let mut oracle_agrees = cross_check("Z4 condition with Gamma+-", cond4, &oracle)?;
    oracle_agrees &= cross_check("Z4 half-power condition", cond3, &oracle)?;
    Ok(Z4Report {
        t1_contraction,
        pm_t2,
        gamma_plus,
        gamma_minus,
        half_power_condition,
        positive: cond4,
        oracle,
        oracle_agrees,
    })
}

fn z4_half_power(t1: &CMatrix, t2: &CMatrix, oracle: &PsdReport, cfg: &ToleranceConfig) -> Result<Z4HalfPowerCondition> {
    let d = t1.nrows();
    let hp = half_power(t1, cfg)?;
    let s = &hp.b;
    let ss = s.adjoint();
    let a_half = block_assemble(&[vec![hp.d_b_star.clone(), s.clone()], vec![ss.clone(), hp.d_b.clone()]])?;
    let big_b = block_assemble(&[vec![t2.clone(), t1.adjoint()], vec![t1.clone(), t2.clone()]])?;
    let p = pinv(&a_half, cfg);
    let gamma = range_projector(&a_half, cfg) * (&p * big_b * &p) * range_projector(&a_half, cfg);
    let g1 = gamma.view((0, 0), (d, d)).into_owned();
    let g2 = gamma.view((0, d), (d, d)).into_owned();
    let g4 = gamma.view((d, d), (d, d)).into_owned();
    let g2s = g2.adjoint();
    let (dss, ds) = (&hp.d_b_star, &hp.d_b);
    let t2_top = dss * &g1 * dss + dss * &g2 * &ss + s * &g2s * dss + s * &g4 * &ss;
    let t2_bottom = &ss * &g1 * s + &ss * &g2 * ds + ds * &g2s * s + ds * &g4 * ds;
    let t1_expr = &ss * &g1 * dss + &ss * &g2 * &ss + ds * &g2s * dss + ds * &g4 * &ss;
    let gamma_norm = op_norm(&gamma);
    let self_adjointness = linalg::hermitian_deviation(&gamma);
    let t2_top_residual = fro(&(t2_top - t2));
    let t2_bottom_residual = fro(&(t2_bottom - t2));
    let t1_residual = fro(&(t1_expr - t1));
    let tol = cfg.psd_threshold(oracle.scale);
    let holds = cfg.is_contraction_norm(gamma_norm)
        && self_adjointness <= tol
        && t2_top_residual <= tol
        && t2_bottom_residual <= tol
        && t1_residual <= tol;
    Ok(Z4HalfPowerCondition {
        gamma,
        gamma_norm,
        self_adjointness,
        t2_top_residual,
        t2_bottom_residual,
        t1_residual,
        holds,
    })
}

/// Gram block over `{e, a, b, ab}` with `T(e) = I`.
pub fn klein_gram(t1: &CMatrix, t2: &CMatrix, t3: &CMatrix) -> Result<CMatrix> {
    let i = identity(t1.nrows());
    block_assemble(&[
        vec![i.clone(), t1.clone(), t2.clone(), t3.clone()],
        vec![t1.clone(), i.clone(), t3.clone(), t2.clone()],
        vec![t2.clone(), t3.clone(), i.clone(), t1.clone()],
        vec![t3.clone(), t2.clone(), t1.clone(), i],
    ])
}

#[derive(Debug, Clone)]
pub struct KleinReport {
    pub t1_contraction: bool,
    pub pm_t2: bool,
    /// `T1 + T3 = (I + T2)^{1/2} Gamma+ (I + T2)^{1/2}`.
    pub gamma_plus: Option<GammaFactor>,
    /// `T1 - T3 = (I - T2)^{1/2} Gamma- (I - T2)^{1/2}`.
    pub gamma_minus: Option<GammaFactor>,
    pub positive: bool,
    pub oracle: PsdReport,
    pub oracle_agrees: bool,
}

pub fn klein_criterion(t1: &CMatrix, t2: &CMatrix, t3: &CMatrix, cfg: &ToleranceConfig) -> Result<KleinReport> {
    let d = same_square(&[(t1, "T1"), (t2, "T2"), (t3, "T3")])?;
    // element k of {e, a, b, ab} carries T_k
    for (k, m) in [t1, t2, t3].into_iter().enumerate() {
        let violation = linalg::hermitian_deviation(m);
        if violation > cfg.psd_threshold(fro(m)) {
            return Err(Error::NotSymmetric { element: k + 1, violation });
        }
    }
    let i = identity(d);
    let oracle = psd_check(&klein_gram(t1, t2, t3)?, cfg)?;
    let t1_contraction = cfg.is_contraction_norm(op_norm(t1));
    let plus_i = &i + t2;
    let minus_i = &i - t2;
    let pm_t2 = psd_check(&plus_i, cfg)?.is_psd() && psd_check(&minus_i, cfg)?.is_psd();
    let (gamma_plus, gamma_minus) = if pm_t2 {
        (
            Some(gamma_factor(&plus_i, &(t1 + t3), &plus_i, cfg)?),
            Some(gamma_factor(&minus_i, &(t1 - t3), &minus_i, cfg)?),
        )
    } else {
        (None, None)
    };
    let positive = t1_contraction
        && pm_t2
        && gamma_plus.as_ref().is_some_and(|g| g.positive)
        && gamma_minus.as_ref().is_some_and(|g| g.positive);
    let oracle_agrees = cross_check("Klein", positive, &oracle)?;
    Ok(KleinReport { t1_contraction, pm_t2, gamma_plus, gamma_minus, positive, oracle, oracle_agrees })
}

/// Positivity of a truncation, valid only up to the stated level.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub level: usize,
    pub psd: PsdReport,
    /// Residual of the internal structural identity checked while building.
    pub identity_residual: f64,
}

impl TruncationReport {
    pub fn label(&self) -> String {
        if self.psd.is_psd() {
            format!("positive up to level {}", self.level)
        } else {
            format!("indefinite at level {}", self.level)
        }
    }
}

/// `Delta_n` over `Z` with `T(k) = P^k` for `k >= 0` and `P*^{-k}` otherwise,
/// on `n + 1` blocks.
pub fn z_gram(p: &CMatrix, n: usize) -> CMatrix {
    let d = p.nrows();
    let mut powers = vec![identity(d)];
    for k in 1..=n {
        powers.push(&powers[k - 1] * p);
    }
    let blocks: Vec<Vec<CMatrix>> = (0..=n)
        .map(|i| (0..=n).map(|j| if j >= i { powers[j - i].clone() } else { powers[i - j].adjoint() }).collect())
        .collect();
    block_assemble(&blocks).expect("uniform blocks")
}

pub fn z_truncation(p: &CMatrix, n: usize, cfg: &ToleranceConfig) -> Result<TruncationReport> {
    z_truncation_capped(p, n, Z_LEVEL_CAP, cfg)
}

pub fn z_truncation_capped(p: &CMatrix, n: usize, cap: usize, cfg: &ToleranceConfig) -> Result<TruncationReport> {
    let d = square(p, "P")?;
    if n == 0 || n > cap {
        return Err(Error::Domain(format!("truncation level {n} outside 1..={cap}")));
    }
    let delta = z_gram(p, n);
    // Delta_n = (I - Q)^-1 + (I - Q*)^-1 - I with P* on the block subdiagonal of Q
    let size = (n + 1) * d;
    let mut q = zeros(size, size);
    for i in 0..n {
        q.view_mut(((i + 1) * d, i * d), (d, d)).copy_from(&p.adjoint());
    }
    let eye = identity(size);
    let lower = (&eye - &q).try_inverse().ok_or_else(|| Error::Singular("I - Q".into()))?;
    let upper = (&eye - q.adjoint()).try_inverse().ok_or_else(|| Error::Singular("I - Q*".into()))?;
    let identity_residual = fro(&(lower + upper - &eye - &delta));
    let psd = psd_check(&delta, cfg)?;
    if identity_residual > cfg.cluster_tol * psd.scale {
        return Err(Error::Consistency(format!("shift identity residual {identity_residual:e}")));
    }
    Ok(TruncationReport { level: n, psd, identity_residual })
}

/// `T(m, n)` over `Z + Z` built from a commuting pair.
pub fn zz_value(t1: &CMatrix, t2: &CMatrix, m: i64, n: i64) -> CMatrix {
    let p = |x: &CMatrix, k: i64| linalg::mat_pow(x, k.unsigned_abs() as u32);
    match (m >= 0, n >= 0) {
        (true, true) => p(t1, m) * p(t2, n),
        (false, true) => p(&t1.adjoint(), m) * p(t2, n),
        (true, false) => p(&t2.adjoint(), n) * p(t1, m),
        (false, false) => p(&t1.adjoint(), m) * p(&t2.adjoint(), n),
    }
}

/// Gram block over the index pairs `[0, n]^2` in lexicographic order.
pub fn zz_gram(t1: &CMatrix, t2: &CMatrix, n: usize) -> CMatrix {
    let idx: Vec<(i64, i64)> = (0..=n as i64).flat_map(|i| (0..=n as i64).map(move |j| (i, j))).collect();
    let blocks: Vec<Vec<CMatrix>> = idx
        .iter()
        .map(|&(p1, p2)| idx.iter().map(|&(q1, q2)| zz_value(t1, t2, q1 - p1, q2 - p2)).collect())
        .collect();
    block_assemble(&blocks).expect("uniform blocks")
}

fn require_commuting(t1: &CMatrix, t2: &CMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    let norm = fro(&linalg::commutator(t1, t2));
    if norm > cfg.cluster_tol * (fro(t1) * fro(t2)).max(1.0) {
        return Err(Error::NonCommuting { i: 1, j: 2, norm });
    }
    Ok(norm)
}

pub fn zz_truncation(t1: &CMatrix, t2: &CMatrix, n: usize, cfg: &ToleranceConfig) -> Result<TruncationReport> {
    zz_truncation_capped(t1, t2, n, ZZ_LEVEL_CAP, cfg)
}

pub fn zz_truncation_capped(
    t1: &CMatrix,
    t2: &CMatrix,
    n: usize,
    cap: usize,
    cfg: &ToleranceConfig,
) -> Result<TruncationReport> {
    let d = same_square(&[(t1, "T1"), (t2, "T2")])?;
    require_commuting(t1, t2, cfg)?;
    if n == 0 || n > cap {
        return Err(Error::Domain(format!("truncation level {n} outside 1..={cap}")));
    }
    let delta = zz_gram(t1, t2, n);
    // super-blocks over the first coordinate: A_{0j} = A_{00} (I (x) T1)^j
    let w = (n + 1) * d;
    let a00 = delta.view((0, 0), (w, w)).into_owned();
    let mut lambda = zeros(w, w);
    for k in 0..=n {
        lambda.view_mut((k * d, k * d), (d, d)).copy_from(t1);
    }
    let mut power = identity(w);
    let mut identity_residual = 0.0f64;
    for j in 0..=n {
        let a0j = delta.view((0, j * w), (w, w)).into_owned();
        identity_residual = identity_residual.max(fro(&(a0j - &a00 * &power)));
        power = &power * &lambda;
    }
    let psd = psd_check(&delta, cfg)?;
    if identity_residual > cfg.cluster_tol * psd.scale {
        return Err(Error::Consistency(format!("super-block identity residual {identity_residual:e}")));
    }
    Ok(TruncationReport { level: n, psd, identity_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublyCommutingReport {
    /// `||T1 T2 - T2 T1||_F`.
    pub commutator: f64,
    /// `||T1* T2 - T2 T1*||_F`.
    pub star_commutator: f64,
    pub commuting: bool,
    pub doubly_commuting: bool,
    pub threshold: f64,
}

pub fn doubly_commuting_check(t1: &CMatrix, t2: &CMatrix, cfg: &ToleranceConfig) -> Result<DoublyCommutingReport> {
    same_square(&[(t1, "T1"), (t2, "T2")])?;
    let threshold = cfg.cluster_tol * (fro(t1) * fro(t2)).max(1.0);
    let commutator = fro(&linalg::commutator(t1, t2));
    let star_commutator = fro(&linalg::commutator(&t1.adjoint(), t2));
    let commuting = commutator <= threshold;
    Ok(DoublyCommutingReport {
        commutator,
        star_commutator,
        commuting,
        doubly_commuting: commuting && star_commutator <= threshold,
        threshold,
    })
}

#[derive(Debug, Clone)]
pub struct BrehmerReport {
    /// `I - T1*T1 - T2*T2 + (T1 T2)*(T1 T2)`.
    pub operator: CMatrix,
    pub psd: PsdReport,
    pub t1_norm: f64,
    pub t2_norm: f64,
    pub contractions: bool,
    pub passes: bool,
    /// `max_h |<Delta_2 x, x> - <B h, h>|` over seeded random `h`, with
    /// `x = (T1 T2 h, -T1 h, -T2 h, h)`.
    pub quadratic_form_residual: f64,
}

pub const BREHMER_SAMPLES: usize = 8;

pub fn brehmer_check(t1: &CMatrix, t2: &CMatrix, cfg: &ToleranceConfig, seed: u64) -> Result<BrehmerReport> {
    let d = same_square(&[(t1, "T1"), (t2, "T2")])?;
    require_commuting(t1, t2, cfg)?;
    let t12 = t1 * t2;
    let operator = identity(d) - t1.adjoint() * t1 - t2.adjoint() * t2 + t12.adjoint() * &t12;
    let psd = psd_check(&linalg::hermitian_part(&operator), cfg)?;
    let t1_norm = op_norm(t1);
    let t2_norm = op_norm(t2);
    let contractions = cfg.is_contraction_norm(t1_norm) && cfg.is_contraction_norm(t2_norm);
    let delta2 = zz_gram(t1, t2, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quadratic_form_residual = 0.0f64;
    for _ in 0..BREHMER_SAMPLES {
        let h = sampling::gaussian(&mut rng, d, 1);
        let mut x = zeros(4 * d, 1);
        x.view_mut((0, 0), (d, 1)).copy_from(&(&t12 * &h));
        x.view_mut((d, 0), (d, 1)).copy_from(&(-(t1 * &h)));
        x.view_mut((2 * d, 0), (d, 1)).copy_from(&(-(t2 * &h)));
        x.view_mut((3 * d, 0), (d, 1)).copy_from(&h);
        let lhs = (x.adjoint() * &delta2 * &x)[(0, 0)];
        let rhs = (h.adjoint() * &operator * &h)[(0, 0)];
        quadratic_form_residual = quadratic_form_residual.max((lhs - rhs).norm());
    }
    Ok(BrehmerReport {
        passes: psd.is_psd() && contractions,
        operator,
        psd,
        t1_norm,
        t2_norm,
        contractions,
        quadratic_form_residual,
    })
}

/// `a_1 = 1`, `a_2 = 2`, `a_k = a_{k-1} + a_{k-2}`; index 0 holds `a_0 = 1`.
fn fib_sequence(n: usize) -> Vec<f64> {
    let mut a = vec![1.0, 1.0, 2.0];
    while a.len() <= n {
        let k = a.len();
        a.push(a[k - 1] + a[k - 2]);
    }
    a
}

/// Closed form for `det Delta_{T_n}` of the two-element counterexample,
/// `T(0) = diag(2, 1)`, `T(1) = [[-1, -1], [-1, 0]]`, with `T_n(s) = T(s)^n`.
pub fn counterexample_det(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("closed form needs n >= 3, got {n}")));
    }
    let a = fib_sequence(n);
    let (an, an1, an2) = (a[n], a[n - 1], a[n - 2]);
    let four_n = 4f64.powi(n as i32);
    let two_n1 = 2f64.powi(n as i32 + 1);
    Ok((four_n - an * an) * (1.0 - an2 * an2) - an1 * an1 * (two_n1 + 2.0 * an * an2 - an1 * an1))
}

/// Determinant of the assembled `Delta_{T_n}`, for any `n >= 1`.
///
/// The Gram block over `Z_2` is `[[A, B], [B, A]]`, block diagonalised by
/// `[[I, I], [I, -I]]` into `A + B` and `A - B`; the two 2x2 determinants are
/// exact for these integer entries, unlike an LU of the full block once the
/// entries reach `2^n`.
pub fn counterexample_numeric_det(n: u32) -> f64 {
    let t0 = linalg::diag_real(&[2.0, 1.0]);
    let t1 = linalg::from_real_rows(&[&[-1.0, -1.0], &[-1.0, 0.0]]);
    let (p0, p1) = (linalg::mat_pow(&t0, n), linalg::mat_pow(&t1, n));
    ((&p0 + &p1).determinant() * (&p0 - &p1).determinant()).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, diag_real, from_real_rows, ONE};
    use approx::assert_abs_diff_eq;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gamma_examples() {
        let b = from_real_rows(&[&[0.3, 0.4], &[0.0, 0.5]]);
        let g = gamma_factor(&identity(2), &b, &identity(2), &cfg()).unwrap();
        assert!(g.positive);
        assert_abs_diff_eq!(fro(&(&g.gamma - &b)), 0.0, epsilon = 1e-12);
        let big = identity(2) * c(1.5);
        let g = gamma_factor(&identity(2), &big, &identity(2), &cfg()).unwrap();
        assert!(!g.positive && !g.oracle.is_psd());
        let t0 = diag_real(&[2.0, 1.0]);
        let t1 = from_real_rows(&[&[-1.0, -1.0], &[-1.0, 0.0]]);
        let g = gamma_factor(&t0, &t1, &t0, &cfg()).unwrap();
        assert!(g.positive && g.oracle_agrees);
        assert_abs_diff_eq!(g.norm, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.oracle.min_eigenvalue, 0.0, epsilon = 1e-12);
        assert!(matches!(
            gamma_factor(&diag_real(&[1.0, -1.0]), &b, &identity(2), &cfg()),
            Err(Error::Indefinite(_))
        ));
    }

    #[test]
    fn gamma_outside_range_is_rejected() {
        // A = 0 forces B = 0
        let g = gamma_factor(&zeros(1, 1), &from_real_rows(&[&[0.1]]), &identity(1), &cfg()).unwrap();
        assert!(!g.positive && !g.oracle.is_psd());
    }

    #[test]
    fn pm_examples() {
        let r = pm_criterion(&identity(2), &zeros(2, 2), &cfg()).unwrap();
        assert!(r.holds);
        let r = pm_criterion(&identity(2), &diag_real(&[1.0, -1.0]), &cfg()).unwrap();
        assert!(r.holds);
        assert_abs_diff_eq!(r.oracle.min_eigenvalue, 0.0, epsilon = 1e-12);
        let r = pm_criterion(&identity(2), &(identity(2) * c(2.0)), &cfg()).unwrap();
        assert!(!r.holds);
        let nh = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(pm_criterion(&identity(2), &nh, &cfg()).is_err());
    }

    #[test]
    fn z2_examples() {
        let half = from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let r = z2_criterion(&identity(2), &half, &cfg(), false).unwrap();
        assert!(r.positive && r.identity_case == Some(true));
        let t0 = diag_real(&[2.0, 1.0]);
        let t1 = from_real_rows(&[&[-1.0, -1.0], &[-1.0, 0.0]]);
        assert!(z2_criterion(&t0, &t1, &cfg(), false).unwrap().positive);
        let r = z2_criterion(&identity(2), &(identity(2) * c(2.0)), &cfg(), false).unwrap();
        assert!(!r.positive && r.identity_case == Some(false));
        let strict = z2_criterion(&identity(2), &half, &cfg(), true).unwrap().strict.unwrap();
        assert!(strict.strictly_positive);
        assert!(!z2_criterion(&t0, &t1, &cfg(), true).unwrap().strict.unwrap().strictly_positive);
        assert!(matches!(
            z2_criterion(&diag_real(&[1.0, 0.0]), &zeros(2, 2), &cfg(), true),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn factor_3x3_examples() {
        let i = identity(2);
        let z = zeros(2, 2);
        let r = from_real_rows(&[&[0.2, 0.5], &[-0.3, 0.1]]);
        let f = factor_3x3(&i, &z, &r, &i, &z, &i, &cfg()).unwrap();
        assert!(f.positive);
        assert_abs_diff_eq!(fro(&(f.gamma_r.unwrap() - &r)), 0.0, epsilon = 1e-12);
        let big = &r * c(5.0);
        let f = factor_3x3(&i, &z, &big, &i, &z, &i, &cfg()).unwrap();
        assert!(!f.positive && !f.oracle.is_psd());
        let f = factor_3x3(&i, &(&i * c(2.0)), &z, &i, &z, &i, &cfg()).unwrap();
        assert_eq!(f.failing_corner, Some("[[A, B], [B*, C]]"));
    }

    #[test]
    fn z3_examples() {
        let w = crate::reps::root_of_unity(1, 3);
        let r = z3_criterion(&identity(2), &(identity(2) * w), &cfg(), false).unwrap();
        assert!(r.positive && r.oracle_agrees);
        assert!(r.identity_case.unwrap().positive);
        let r = z3_criterion(&identity(2), &identity(2), &cfg(), false).unwrap();
        assert!(r.positive);
        assert!(matches!(z3_criterion(&identity(2), &identity(2), &cfg(), true), Err(Error::Singular(_))));
        let small = from_real_rows(&[&[0.2, 0.1], &[0.0, -0.3]]);
        let r = z3_criterion(&identity(2), &small, &cfg(), true).unwrap();
        let ic = r.identity_case.unwrap();
        assert!(ic.positive && ic.strict_norm.unwrap() <= 1.0);
        assert_eq!(r.factor.oracle.is_psd(), r.positive);
    }

    #[test]
    fn half_powers() {
        let hp = half_power(&zeros(2, 2), &cfg()).unwrap();
        assert!(fro(&hp.b) < 1e-12);
        let hp = half_power(&identity(1), &cfg()).unwrap();
        assert_abs_diff_eq!(hp.b[(0, 0)].re, 1.0 / 2f64.sqrt(), epsilon = 1e-9);
        // 2 b sqrt(1 - b^2) = 1/2 on the branch with b < 1/sqrt 2
        let b = ((1.0 - (1.0 - 0.25f64).sqrt()) / 2.0).sqrt();
        let hp = half_power(&(identity(2) * c(0.5)), &cfg()).unwrap();
        assert_abs_diff_eq!(fro(&(&hp.b - identity(2) * c(b))), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 0.2588, epsilon = 1e-4);
        assert!(matches!(half_power(&(identity(2) * c(1.1)), &cfg()), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn z4_examples() {
        let r = z4_criterion(&zeros(2, 2), &zeros(2, 2), &cfg()).unwrap();
        assert!(r.positive && r.oracle_agrees);
        assert!(r.half_power_condition.unwrap().holds);
        let i = Complex64::new(0.0, 1.0);
        let r = z4_criterion(&diag(&[i]), &diag(&[-ONE]), &cfg()).unwrap();
        assert!(r.positive && r.oracle.is_psd() && r.oracle_agrees);
        let r = z4_criterion(&(identity(1) * c(0.9)), &(identity(1) * c(-0.9)), &cfg()).unwrap();
        assert!(!r.positive && !r.oracle.is_psd());
    }

    #[test]
    fn klein_examples() {
        let z = zeros(2, 2);
        let r = klein_criterion(&z, &z, &z, &cfg()).unwrap();
        assert!(r.positive);
        let i = identity(2);
        let r = klein_criterion(&i, &i, &i, &cfg()).unwrap();
        assert!(r.positive && r.oracle_agrees);
        let r = klein_criterion(&i, &(&i * c(-1.0)), &i, &cfg()).unwrap();
        assert!(!r.positive && !r.oracle.is_psd());
        let nh = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(klein_criterion(&nh, &z, &z, &cfg()), Err(Error::NotSymmetric { element: 1, .. })));
    }

    #[test]
    fn z_truncations() {
        for n in 1..=6 {
            assert_eq!(z_truncation(&zeros(2, 2), n, &cfg()).unwrap().psd.verdict, PsdVerdict::Positive);
            let u = from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
            assert!(z_truncation(&u, n, &cfg()).unwrap().psd.is_psd());
        }
        let r = z_truncation(&(identity(2) * c(1.1)), 1, &cfg()).unwrap();
        assert!(!r.psd.is_psd());
        assert_eq!(r.label(), "indefinite at level 1");
        assert!(z_truncation(&identity(1), 0, &cfg()).is_err());
        assert!(z_truncation(&identity(1), 9, &cfg()).is_err());
        assert_eq!(z_truncation(&identity(1), 3, &cfg()).unwrap().label(), "positive up to level 3");
    }

    #[test]
    fn zz_truncations() {
        let z = zeros(2, 2);
        assert!(zz_truncation(&z, &z, 2, &cfg()).unwrap().psd.is_psd());
        let u = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        for n in 1..=3 {
            let r = zz_truncation(&(&u * c(0.7)), &(&u * c(-0.5)), n, &cfg()).unwrap();
            assert!(r.psd.is_psd());
            assert!(r.identity_residual < 1e-12);
        }
        assert!(!zz_truncation(&(identity(1) * c(1.2)), &zeros(1, 1), 1, &cfg()).unwrap().psd.is_psd());
        let a = diag_real(&[1.0, 0.0]);
        assert!(matches!(zz_truncation(&a, &u, 1, &cfg()), Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn doubly_commuting() {
        let t1 = from_real_rows(&[&[0.5, 0.2], &[0.2, -0.1]]);
        let t2 = &t1 * &t1 * c(0.5) + &t1;
        assert!(doubly_commuting_check(&t1, &t2, &cfg()).unwrap().doubly_commuting);
        let j = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = doubly_commuting_check(&j, &j, &cfg()).unwrap();
        assert!(r.commuting && !r.doubly_commuting);
        let r = doubly_commuting_check(&j, &j.transpose(), &cfg()).unwrap();
        assert!(!r.commuting);
    }

    #[test]
    fn brehmer_examples() {
        let z = zeros(2, 2);
        let r = brehmer_check(&z, &z, &cfg(), 0).unwrap();
        assert!(r.passes);
        assert_abs_diff_eq!(fro(&(&r.operator - identity(2))), 0.0);
        let r = brehmer_check(&identity(2), &identity(2), &cfg(), 0).unwrap();
        assert!(r.passes && fro(&r.operator) < 1e-15);
        let cc = 0.9;
        let s = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]) * c(cc);
        let r = brehmer_check(&s, &s, &cfg(), 1).unwrap();
        assert!(r.passes);
        let want = (1.0 - cc * cc) * (1.0 - cc * cc);
        assert_abs_diff_eq!(fro(&(&r.operator - identity(2) * c(want))), 0.0, epsilon = 1e-12);
        assert!(r.quadratic_form_residual < 1e-12);
    }

    #[test]
    fn counterexample_determinants() {
        assert_abs_diff_eq!(counterexample_numeric_det(1), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(counterexample_numeric_det(2), -11.0, epsilon = 1e-9);
        assert_abs_diff_eq!(counterexample_numeric_det(3), -72.0, epsilon = 1e-9);
        for n in 3..=12 {
            let closed = counterexample_det(n).unwrap();
            let numeric = counterexample_numeric_det(n as u32);
            assert!((closed - numeric).abs() <= 1e-6 * numeric.abs().max(1.0), "n={n}: {closed} vs {numeric}");
            assert!(closed < 0.0);
        }
        assert!(matches!(counterexample_det(2), Err(Error::Domain(_))));
    }
}
