mod common;

use common::group;
use opdef::group::{find_isomorphism, is_even_permutation, permutations_lex, GroupMorphism};
use opdef::FiniteGroup;
use proptest::prelude::*;

proptest! {
    #[test]
    fn axioms(g in group()) {
        let e = g.identity();
        for a in g.elements() {
            prop_assert_eq!(g.mul(e, a), a);
            prop_assert_eq!(g.mul(a, e), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), e);
            for b in g.elements() {
                for c in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn pow_and_order(g in group(), k in -10i64..10) {
        for a in g.elements() {
            let o = g.element_order(a);
            prop_assert_eq!(g.pow(a, o as i64), g.identity());
            prop_assert_eq!(g.order() % o, 0);
            prop_assert_eq!(g.mul(g.pow(a, k), g.pow(a, -k)), g.identity());
        }
    }

    #[test]
    fn subgroups_are_closed(g in group(), n in 1usize..=4) {
        for sub in [g.commutator_subgroup(), g.power_subgroup(n).unwrap()] {
            prop_assert_eq!(g.order() % sub.len(), 0);
            let h = g.restrict(&sub).unwrap();
            prop_assert_eq!(h.order(), sub.len());
        }
    }

    #[test]
    fn relabelled_group_is_isomorphic(g in group(), seed: u64) {
        // conjugate the table by a permutation fixing the identity
        let m = g.order();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut s = seed;
        for i in (2..m).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, 1 + (s >> 33) as usize % i);
        }
        let mut inv = vec![0; m];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let table: Vec<Vec<usize>> = (0..m).map(|a| (0..m).map(|b| perm[g.mul(inv[a], inv[b])]).collect()).collect();
        let h = FiniteGroup::from_table(&table).unwrap();
        let phi = find_isomorphism(&g, &h).expect("relabelling is an isomorphism");
        prop_assert!(phi.validate().is_isomorphism());
        let known = GroupMorphism::new(g.clone(), h, perm).unwrap();
        prop_assert!(known.validate().is_isomorphism());
    }
}

#[test]
fn permutation_parity_counts() {
    for n in 1..=5 {
        let perms = permutations_lex(n);
        let even = perms.iter().filter(|p| is_even_permutation(p)).count();
        let total = perms.len();
        assert_eq!(even, if n == 1 { 1 } else { total / 2 });
    }
}

#[test]
fn non_isomorphic_groups_are_rejected() {
    let z4 = FiniteGroup::cyclic(4).unwrap();
    assert!(find_isomorphism(&z4, &opdef::catalog::klein_group()).is_none());
    let z6 = FiniteGroup::cyclic(6).unwrap();
    assert!(find_isomorphism(&z6, &FiniteGroup::symmetric(3).unwrap()).is_none());
}
