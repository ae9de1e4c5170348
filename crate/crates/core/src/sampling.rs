//! Seeded random instances for property tests and the acceptance suite.

use nalgebra::linalg::QR;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::group::FiniteGroup;
use crate::linalg::{self, fro, identity, op_norm, CMatrix};
use crate::pdfun::OperatorFunction;
use crate::reps::{self, UnitaryRep};

/// Entries with independent standard complex normal distribution.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary via QR with phase correction.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = QR::new(gaussian(rng, d, d));
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { linalg::ONE };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Random matrix rescaled to operator norm exactly `norm`.
pub fn with_norm<R: Rng + ?Sized>(rng: &mut R, d: usize, norm: f64) -> CMatrix {
    let g = gaussian(rng, d, d);
    let n = op_norm(&g);
    g * Complex64::new(norm / n, 0.0)
}

/// Contraction with operator norm drawn uniformly from `[0, 1]`.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let norm = rng.random_range(0.0..=1.0);
    with_norm(rng, d, norm)
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    linalg::hermitian_part(&gaussian(rng, d, d))
}

/// `G G*` with `G` of shape `d x rank`.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> CMatrix {
    let g = gaussian(rng, d, rank);
    linalg::hermitian_part(&(&g * g.adjoint()))
}

/// Self-adjoint unitary `W diag(+-1) W*`.
pub fn self_adjoint_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let w = unitary(rng, d);
    let signs: Vec<f64> = (0..d).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    linalg::hermitian_part(&(&w * linalg::diag_real(&signs) * w.adjoint()))
}

/// Positive definite function `T(s) = V* (L(s) (x) I_k) V` from the left
/// regular representation, normalised so that `||T(e)||_F = 1`.
pub fn positive_definite_function<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup, d: usize) -> OperatorFunction {
    let m = g.order();
    let k = rng.random_range(1..=d);
    let v = gaussian(rng, m * k, d);
    let reg = UnitaryRep::left_regular(g);
    let values: Vec<CMatrix> = reg.values().iter().map(|l| v.adjoint() * l.kronecker(&identity(k)) * &v).collect();
    let scale = fro(&values[g.identity()]).max(f64::MIN_POSITIVE);
    let values = values.into_iter().map(|t| t * Complex64::new(1.0 / scale, 0.0)).collect();
    OperatorFunction::new(g.clone(), values).expect("uniform shapes")
}

/// `U(s) = W diag(chi_1(s), ..., chi_d(s)) W*` with characters drawn from
/// all homomorphisms `G -> mu_|G|`.
pub fn commutative_rep<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup, d: usize) -> UnitaryRep {
    let chars = reps::characters(g);
    let chosen: Vec<&Vec<usize>> = (0..d).map(|_| &chars[rng.random_range(0..chars.len())]).collect();
    let w = unitary(rng, d);
    let m = g.order();
    let u = g
        .elements()
        .map(|s| {
            let diag: Vec<Complex64> = chosen.iter().map(|c| reps::root_of_unity(c[s], m)).collect();
            &w * linalg::diag(&diag) * w.adjoint()
        })
        .collect();
    UnitaryRep::new(g.clone(), u).expect("uniform shapes")
}

/// Doubly commuting contractions: either `A (x) I` and `I (x) B` on a
/// product space or simultaneously diagonal normal matrices.
pub fn doubly_commuting_pair<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> (CMatrix, CMatrix) {
    if max_dim >= 4 && rng.random_bool(0.5) {
        let d1 = 2;
        let d2 = rng.random_range(2..=max_dim / 2);
        let a = contraction(rng, d1);
        let b = contraction(rng, d2);
        (a.kronecker(&identity(d2)), identity(d1).kronecker(&b))
    } else {
        let d = rng.random_range(1..=max_dim);
        let w = unitary(rng, d);
        let mut disc = || {
            let r = rng.random_range(0.0f64..=1.0).sqrt();
            Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        };
        let z1: Vec<Complex64> = (0..d).map(|_| disc()).collect();
        let z2: Vec<Complex64> = (0..d).map(|_| disc()).collect();
        (&w * linalg::diag(&z1) * w.adjoint(), &w * linalg::diag(&z2) * w.adjoint())
    }
}
