use proptest::prelude::*;

use simstoq::su_basis::{build_basis, index_maps, structure_constants_analytic, structure_constants_trace, BasisLabel};

#[test]
fn tables_agree_for_small_dimensions() {
    for d in 2..=6 {
        let analytic = structure_constants_analytic(d).unwrap();
        let oracle = structure_constants_trace(&build_basis(d).unwrap()).unwrap();
        assert!(analytic.max_sym_difference(&oracle) <= 1e-12, "d = {d}");
        assert_eq!(analytic.sym_count(), oracle.sym_count(), "d = {d}");
    }
}

#[test]
fn oracle_permutation_symmetry() {
    for d in 2..=4 {
        let t = structure_constants_trace(&build_basis(d).unwrap()).unwrap();
        let n = d * d - 1;
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    let s = t.sym(i, j, k);
                    for p in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        assert_eq!(t.sym(p.0, p.1, p.2), s);
                    }
                    let f = t.antisym(i, j, k);
                    assert_eq!(t.antisym(j, i, k), -f);
                    assert_eq!(t.antisym(i, k, j), -f);
                    assert_eq!(t.antisym(k, j, i), -f);
                    assert_eq!(t.antisym(j, k, i), f);
                }
            }
        }
    }
}

#[test]
fn contracted_symmetric_constants_vanish() {
    // sum_j d_ijj = Tr(lambda_i sum_j lambda_j^2)/2 and sum_j lambda_j^2 is a multiple of I
    for d in 2..=6 {
        let t = structure_constants_analytic(d).unwrap();
        let n = d * d - 1;
        for i in 1..=n {
            let s: f64 = (1..=n).map(|j| t.sym(i, j, j)).sum();
            assert!(s.abs() <= 1e-12, "d = {d}, i = {i}: {s}");
        }
    }
}

proptest! {
    #[test]
    fn index_map_is_a_bijection(d in 2usize..=16) {
        let map = index_maps(d).unwrap();
        prop_assert_eq!(map.len(), d * d - 1);
        for linear in 1..=map.len() {
            let label = map.label(linear).unwrap();
            prop_assert_eq!(map.linear(label).unwrap(), linear);
        }
        prop_assert!(map.label(0).is_err());
        prop_assert!(map.label(d * d).is_err());
        let out_of_range = BasisLabel::D { j: d };
        prop_assert!(map.linear(out_of_range).is_err());
    }

    #[test]
    fn basis_is_orthonormal(d in 2usize..=7) {
        let b = build_basis(d).unwrap();
        for i in 0..b.len() {
            prop_assert!(b.element(i).as_matrix().trace().norm() <= 1e-14);
            for j in 0..b.len() {
                let g = b.element(i).as_matrix().trace_product(b.element(j).as_matrix());
                let want = if i == j { 2.0 } else { 0.0 };
                prop_assert!((g.re - want).abs() <= 1e-12 && g.im.abs() <= 1e-12);
            }
        }
    }
}
