//! Worked examples shared by the tests and the CLI.

use crate::group::{self, FiniteGroup};
use crate::linalg::{diag_real, from_real_rows, identity, CMatrix, ONE, ZERO};
use crate::pdfun::OperatorFunction;
use crate::reps::UnitaryRep;

/// `T(0) = diag(2, 1)` of the two-element counterexample.
pub fn counterexample_t0() -> CMatrix {
    diag_real(&[2.0, 1.0])
}

/// `T(1) = [[-1, -1], [-1, 0]]` of the two-element counterexample.
pub fn counterexample_t1() -> CMatrix {
    from_real_rows(&[&[-1.0, -1.0], &[-1.0, 0.0]])
}

/// Positive definite on `Z_2` with a zero eigenvalue; its pointwise powers
/// `T(s)^n` are not positive definite for any `n >= 2`.
pub fn counterexample() -> OperatorFunction {
    let z2 = FiniteGroup::cyclic(2).expect("order 2");
    OperatorFunction::new(z2, vec![counterexample_t0(), counterexample_t1()]).expect("2x2 values")
}

/// `T(0) = I`, `T(1) = [[0, 1/2], [1/2, 0]]` on `Z_2`.
pub fn final_example() -> OperatorFunction {
    let z2 = FiniteGroup::cyclic(2).expect("order 2");
    let t1 = from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]);
    OperatorFunction::new(z2, vec![identity(2), t1]).expect("2x2 values")
}

/// Scalar function on `S_3`: `1` on permutations fixing the first point, `0` elsewhere.
pub fn s3_fix1() -> OperatorFunction {
    let s3 = FiniteGroup::symmetric(3).expect("order 6");
    let values = group::permutations_lex(3)
        .iter()
        .map(|p| CMatrix::from_element(1, 1, if p[0] == 0 { ONE } else { ZERO }))
        .collect();
    OperatorFunction::new(s3, values).expect("1x1 values")
}

/// Permutation representation of `S_3` on `C^3`.
pub fn s3_permutation_rep() -> UnitaryRep {
    UnitaryRep::permutation(3).expect("S_3")
}

/// `V z = (z, 0, 0)`.
pub fn fix1_isometry() -> CMatrix {
    let mut v = CMatrix::zeros(3, 1);
    v[(0, 0)] = ONE;
    v
}

/// `Z_2 x Z_2`; element `(i, j)` has index `2i + j`.
pub fn klein_group() -> FiniteGroup {
    let z2 = FiniteGroup::cyclic(2).expect("order 2");
    FiniteGroup::product(&z2, &z2).expect("order 4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{psd_check, ToleranceConfig};

    #[test]
    fn fix1_quadratic_form() {
        // sum T(s^-1 t) h(t) conj h(s) = |z1 + z2|^2 when h is supported on the stabilizer
        let t = s3_fix1();
        let flat = t.full_gram().flat;
        let s3 = t.group();
        let stab: Vec<usize> = s3.elements().filter(|&x| t.value(x)[(0, 0)] == ONE).collect();
        assert_eq!(stab.len(), 2);
        let mut h = CMatrix::zeros(6, 1);
        h[(stab[0], 0)] = num_complex::Complex64::new(0.3, -1.0);
        h[(stab[1], 0)] = num_complex::Complex64::new(-0.7, 0.2);
        let q = (h.adjoint() * &flat * &h)[(0, 0)];
        let z = h[(stab[0], 0)] + h[(stab[1], 0)];
        assert!((q.re - z.norm_sqr()).abs() < 1e-12 && q.im.abs() < 1e-12);
        assert!(psd_check(&flat, &ToleranceConfig::default()).unwrap().is_psd());
    }

    #[test]
    fn klein_elements_have_order_two() {
        let v4 = klein_group();
        assert!(v4.elements().skip(1).all(|x| v4.element_order(x) == 2));
    }
}
