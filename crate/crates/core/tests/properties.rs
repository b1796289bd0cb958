use proptest::prelude::*;

use silting_core::exact::scalar::int;
use silting_core::exact::snf::invariant_factors;
use silting_core::exact::{solve, BoundQuiverAlgebra, FinDimAlgebra, Matrix, Scalar};
use silting_core::group::{
    canonical_relator, free_reduce, invariants, inverse_word, tietze_simplify, FiniteGroup, GroupPresentation, Letter,
    Word,
};
use silting_core::model::interval::{IntervalModel, Rep};
use silting_core::model::twoterm::{Complex, TwoTermModel};
use silting_core::model::Model;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, cols), rows)
}

fn to_matrix(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
}

fn word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(gen, inv)| Letter { gen, inv }).collect())
}

fn presentation() -> impl Strategy<Value = GroupPresentation> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(word(n, 6), 0..=3).prop_map(move |rels| {
            let gens = (0..n).map(|i| format!("x{i}")).collect();
            GroupPresentation::new(gens, rels).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn solve_reproduces_the_right_hand_side(a in int_matrix(3, 4), x in prop::collection::vec(-3i64..=3, 4)) {
        let a = to_matrix(&a);
        let x = Matrix::from_rows(x.iter().map(|&v| vec![int(v)]).collect());
        let b = a.mul(&x);
        let sol = solve(&a, &b).expect("b lies in the column space");
        prop_assert_eq!(a.mul(&sol.particular), b);
        let zero: Vec<Scalar> = vec![int(0); a.rows()];
        for v in &sol.kernel {
            prop_assert_eq!(a.mul_vec(v), zero.clone());
        }
    }

    #[test]
    fn rank_plus_nullity(a in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        let m = to_matrix(&a);
        prop_assert_eq!(m.rank() + m.kernel().len(), m.cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn smith_form_ignores_unimodular_moves(
        a in int_matrix(3, 3),
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2, any::<bool>()), 0..6),
    ) {
        let mut b = a.clone();
        for (i, j, k, on_rows) in ops {
            if i == j {
                continue;
            }
            if on_rows {
                for c in 0..3 {
                    b[j][c] += k * b[i][c];
                }
            } else {
                for row in b.iter_mut() {
                    row[j] += k * row[i];
                }
            }
        }
        b.swap(0, 2);
        prop_assert_eq!(invariant_factors(&a, 3), invariant_factors(&b, 3));
    }

    #[test]
    fn free_reduction(w in word(3, 12)) {
        let r = free_reduce(&w);
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert!(r.windows(2).all(|p| p[0] != p[1].inverse()));
        let mut ww = w.clone();
        ww.extend(inverse_word(&w));
        prop_assert!(free_reduce(&ww).is_empty());
    }

    #[test]
    fn canonical_relator_is_a_class_invariant(w in word(3, 10), k in 0usize..10, flip in any::<bool>()) {
        let c = canonical_relator(&w);
        let mut v = w.clone();
        if !v.is_empty() {
            let n = v.len();
            v.rotate_left(k % n);
        }
        if flip {
            v = inverse_word(&v);
        }
        prop_assert_eq!(canonical_relator(&v), c);
    }

    #[test]
    fn text_format_roundtrips(p in presentation()) {
        let q = GroupPresentation::parse_text(&p.to_text()).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(GroupPresentation::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn tietze_keeps_invariants(p in presentation()) {
        let targets = FiniteGroup::defaults();
        let before = invariants(&p, &targets, 1 << 24).unwrap();
        let out = tietze_simplify(&p, 64).unwrap();
        prop_assert!(out.presentation.generators.len() <= p.generators.len());
        let after = invariants(&out.presentation, &targets, 1 << 24).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn idempotents_of_incidence_algebras(rel in prop::collection::vec(prop::collection::vec(any::<bool>(), 3), 3)) {
        // reflexive transitive closure of a random relation
        let mut mask = rel.clone();
        for (i, row) in mask.iter_mut().enumerate() {
            row[i] = true;
        }
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    if mask[i][k] && mask[k][j] {
                        mask[i][j] = true;
                    }
                }
            }
        }
        let alg = FinDimAlgebra::matrix_units(&mask);
        prop_assert!(alg.check_invariants().is_ok());
        let es = alg.decompose_idempotents().unwrap();
        prop_assert_eq!(es.len(), 3);
        let mut sum = alg.zero_vector();
        for e in &es {
            prop_assert!(alg.is_idempotent(e));
            prop_assert_eq!(alg.corner(e).0.dim(), 1);
            for (s, x) in sum.iter_mut().zip(e) {
                *s += x;
            }
        }
        prop_assert_eq!(&sum, alg.unit());
        let mut pieces = 0;
        for e in &es {
            for f in &es {
                let span: Vec<Vec<Scalar>> =
                    (0..alg.dim()).map(|b| alg.mul(&alg.mul(e, &alg.basis_vector(b)), f)).collect();
                pieces += silting_core::exact::matrix::rank_of(&span, alg.dim());
            }
        }
        prop_assert_eq!(pieces, alg.dim());
    }

    #[test]
    fn interval_sums_decompose(picks in prop::collection::vec(0usize..6, 0..6)) {
        let m = IntervalModel::new(3);
        let mut rep = Rep::zero(3);
        for &x in &picks {
            rep = rep.direct_sum(m.rep(x));
        }
        let mut want = picks.clone();
        want.sort_unstable();
        prop_assert_eq!(m.decompose(&rep), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn two_term_sums_decompose(picks in prop::collection::vec(0usize..64, 1..4)) {
        let m = TwoTermModel::new(BoundQuiverAlgebra::linear_a(2)).unwrap();
        let objs = m.objects();
        let ids: Vec<_> = picks.iter().map(|&k| objs[k % objs.len()]).collect();
        let parts: Vec<&Complex> = ids.iter().map(|&x| m.complex(x)).collect();
        let sum = Complex::direct_sum(m.algebra(), &parts);
        let mut want = ids.clone();
        want.sort_unstable();
        prop_assert_eq!(m.decompose(&sum).unwrap(), want);
    }
}
