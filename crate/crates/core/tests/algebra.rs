use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use parafree_core::coset::{quotient_table, todd_coxeter, EnumerationOptions, Strategy as Tc};
use parafree_core::gog::{
    ab_order, check_constraints, divisibility_holds, euler_candidates, tree_pi1_presentation, GroupTree, TreeEdge,
};
use parafree_core::intmat::{abelian_invariants, determinant, smith_normal_form, Matrix};
use parafree_core::parse::parse_presentation;
use parafree_core::rewriting::{rs_presentation, simplify};
use parafree_core::word::lcs_relators;
use parafree_core::{Gen, IntMatrix, Word};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<i64>> {
    prop::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| {
        Matrix::from_rows(v.chunks(cols).map(|c| c.to_vec()).collect()).unwrap()
    })
}

fn big(m: &Matrix<i64>) -> IntMatrix {
    IntMatrix::from_rows(m.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()).unwrap()
}

// A random unimodular matrix as a product of elementary operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k, swap) in ops {
            if swap {
                u.swap_rows(i, j);
            } else if i != j {
                for c in 0..n {
                    let v = u[(j, c)].clone() * k;
                    u[(i, c)] += v;
                }
            }
        }
        u
    })
}

fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            for k in 0..a.cols() {
                out[(i, j)] += &a[(i, k)] * &b[(k, j)];
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn smith_form_is_a_divisibility_chain(m in matrix(4, 3)) {
        let s = smith_normal_form(&m);
        let d = &s.invariant_factors;
        for pair in d.windows(2) {
            if !pair[1].is_zero() {
                prop_assert!(!pair[0].is_zero() && pair[1] % pair[0] == 0);
            }
            prop_assert!(pair[0] >= 0 && pair[1] >= 0);
        }
        prop_assert_eq!(s.rank, d.iter().filter(|x| !x.is_zero()).count());
    }

    #[test]
    fn smith_form_is_invariant_under_unimodular_changes(m in matrix(3, 3), u in unimodular(3), v in unimodular(3)) {
        let a = big(&m);
        let b = mul(&mul(&u, &a), &v);
        prop_assert_eq!(smith_normal_form(&a), smith_normal_form(&b));
        prop_assert_eq!(determinant(&a).unwrap().abs(), determinant(&b).unwrap().abs());
    }

    #[test]
    fn determinant_is_the_product_of_invariant_factors(m in matrix(4, 4)) {
        let s = smith_normal_form(&m);
        let prod: i64 = s.invariant_factors.iter().product();
        prop_assert_eq!(determinant(&m).unwrap().abs(), prod);
    }

    #[test]
    fn abelian_quotient_orders_match_smith_form(x in 1i64..7, y in 1i64..7) {
        let pres = parse_presentation(&format!("<a,b | a^{x}, b^{y}, [a,b]>")).unwrap();
        let table = todd_coxeter(&pres, &[], EnumerationOptions::default()).unwrap();
        prop_assert_eq!(table.len() as i64, x * y);
        let s = abelian_invariants(&pres);
        prop_assert_eq!(s.order(), Some(BigInt::from(x * y)));
    }

    #[test]
    fn tree_abelianization_matches_formula(
        shape in prop::collection::vec(0usize..100, 0..4),
        labels in prop::collection::vec((1u32..4, 0u32..3), 5),
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        // vertex i + 1 hangs off an earlier vertex
        let k = shape.len() + 1;
        let vertices: Vec<u32> = labels[..k].iter().map(|l| l.0).collect();
        let edges: Vec<TreeEdge> = shape
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let parent = s % (i + 1);
                let child = i + 1;
                let limit = vertices[parent].min(vertices[child]);
                TreeEdge { u: parent, v: child, exponent: labels[child].1 % limit }
            })
            .collect();
        let t = GroupTree::new(p, vertices, edges).unwrap();
        let via_pipeline = abelian_invariants(&tree_pi1_presentation(&t).unwrap()).order();
        prop_assert_eq!(via_pipeline, Some(ab_order(&t)));
    }
}

#[test]
fn closed_tables_are_permutation_representations() {
    let cases = [
        ("<a,b | a^3, b^3>", 3usize, 27usize),
        ("<a,b | a^2, b^3, (a*b)^5>", 2, 60),
        ("<a,b | (a*[b,a])^3, b^3>", 4, 243),
    ];
    for (text, class, order) in cases {
        let pres = parse_presentation(text).unwrap();
        let extra = if text.contains("^5") { Vec::new() } else { lcs_relators(pres.alphabet(), class).unwrap() };
        for strategy in [Tc::Hlt, Tc::Felsch] {
            let options = EnumerationOptions { max_cosets: 200_000, strategy };
            let t = quotient_table(&pres, &extra, options).unwrap();
            assert_eq!(t.len(), order, "{text}");
            assert!(t.is_closed());
            for g in pres.alphabet().gens() {
                let mut perm = t.permutation(g);
                perm.sort_unstable();
                assert_eq!(perm, (0..order).collect::<Vec<_>>());
            }
            for r in pres.relators().iter().chain(&extra) {
                assert!(t.word_is_identity(r).unwrap());
            }
        }
    }
}

#[test]
fn commutator_subgroup_of_free_product_is_free() {
    for p in [2i64, 3, 5] {
        let pres = parse_presentation(&format!("<a,b | a^{p}, b^{p}>")).unwrap();
        let comm = Word::commutator(&Word::generator(Gen(0)), &Word::generator(Gen(1)));
        let table = quotient_table(&pres, &[comm], EnumerationOptions::default()).unwrap();
        assert_eq!(table.len() as i64, p * p);
        let data = rs_presentation(&pres, &table).unwrap();
        // Schreier generators: index * (rank - 1) + 1
        assert_eq!(data.presentation.num_generators() as i64, p * p + 1);
        let simple = simplify(&data).unwrap();
        assert_eq!(simple.presentation.num_generators() as i64, (p - 1) * (p - 1));
        assert!(simple.presentation.relators().is_empty());
    }
}

#[test]
fn divisibility_step_holds_on_euler_candidates() {
    for (p, n) in [(3u64, 1u32), (3, 2), (3, 3), (3, 4), (5, 3)] {
        let candidates = euler_candidates(p, n, 4, 3).unwrap();
        for t in &candidates {
            assert!(check_constraints(t, n).euler_ok);
            assert!(divisibility_holds(t), "{}", t.describe());
            let c = check_constraints(t, n);
            if c.product_ok && t.num_vertices() >= n as usize {
                assert!(t.is_free_product_of_cp() && t.num_vertices() == n as usize, "{}", t.describe());
            }
        }
    }
}
