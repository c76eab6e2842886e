//! Property tests for the algebraic invariants.

use dqg_core::axioms::galois_maps;
use dqg_core::builders::{build_function_algebra, build_group_algebra};
use dqg_core::linalg::{random_vector, real, CMatrix, CVector};
use dqg_core::magma::{analyze, comult_from_table, extract_operation, random_group_table};
use dqg_core::structure::find_h;
use dqg_core::tensor::{flip, slice_right, tensor_elem};
use dqg_core::wedderburn::wedderburn;
use dqg_core::{
    AlgebraElement, Comultiplication, FiniteMagma, LinearFunctional, MultiMatrixAlgebra, QuantumGroupFile, QuantumGroupStructure,
    StructureConstants, TensorElement, TensorLayout, Tolerances,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn block_dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=3)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_element(a: &MultiMatrixAlgebra, r: &mut ChaCha8Rng) -> AlgebraElement {
    a.element(&random_vector(r, a.dim()))
}

fn random_functional(a: &MultiMatrixAlgebra, r: &mut ChaCha8Rng) -> LinearFunctional {
    LinearFunctional::new(a, random_vector(r, a.dim()))
}

fn random_tensor(factors: &[MultiMatrixAlgebra], r: &mut ChaCha8Rng) -> TensorElement {
    let layout = TensorLayout::new(factors);
    let n = layout.product().dim();
    TensorElement::from_coords(layout, &random_vector(r, n))
}

fn random_unitary(n: usize, r: &mut ChaCha8Rng) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| random_vector(r, 1)[0]);
    m.qr().q()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// Random magma tables of order at most 4.
fn magma() -> impl Strategy<Value = FiniteMagma> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0..n, n), n)
            .prop_map(move |table| FiniteMagma::new((0..n).map(|i| format!("m{i}")).collect(), table).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coordinates_round_trip(dims in block_dims(), seed in any::<u64>()) {
        let a = MultiMatrixAlgebra::new(&dims).unwrap();
        let v = random_vector(&mut rng(seed), a.dim());
        let x = a.element(&v);
        prop_assert_eq!(&x.coords(), &v);
        let back = AlgebraElement::from_blocks(&a, x.blocks().to_vec()).unwrap();
        prop_assert_eq!(back.coords(), v);
        for k in 0..a.dim() {
            prop_assert_eq!(a.basis_index(a.matrix_unit(k)), k);
        }
    }

    #[test]
    fn tensor_coordinates_round_trip(left in block_dims(), right in block_dims(), seed in any::<u64>()) {
        let factors = [MultiMatrixAlgebra::new(&left).unwrap(), MultiMatrixAlgebra::new(&right).unwrap()];
        let x = random_tensor(&factors, &mut rng(seed));
        let back = TensorElement::from_kron(x.layout().clone(), &x.kron_coords());
        prop_assert_eq!(back.coords(), x.coords());
    }

    #[test]
    fn simple_tensors_multiply_legwise(left in block_dims(), right in block_dims(), seed in any::<u64>()) {
        let (a, b) = (MultiMatrixAlgebra::new(&left).unwrap(), MultiMatrixAlgebra::new(&right).unwrap());
        let mut r = rng(seed);
        let (a1, a2, b1, b2) = (random_element(&a, &mut r), random_element(&a, &mut r), random_element(&b, &mut r), random_element(&b, &mut r));
        let lhs = tensor_elem(&a1, &b1).mul(&tensor_elem(&a2, &b2));
        let rhs = tensor_elem(&(&a1 * &a2), &(&b1 * &b2));
        prop_assert!(lhs.residual(&rhs) < 1e-13);
    }

    #[test]
    fn flip_and_permutations_preserve_norm(dims in block_dims(), seed in any::<u64>(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let a = MultiMatrixAlgebra::new(&dims).unwrap();
        let b = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let mut r = rng(seed);
        let x = random_tensor(&[a.clone(), b.clone()], &mut r);
        let f = flip(&x).unwrap();
        prop_assert!(close(f.frobenius_norm(), x.frobenius_norm(), 1e-14));
        prop_assert!(flip(&f).unwrap().residual(&x) < 1e-15);
        let y = random_tensor(&[a, b.clone(), b], &mut r);
        let p = y.permute_legs(&perm).unwrap();
        prop_assert!(close(p.frobenius_norm(), y.frobenius_norm(), 1e-14));
    }

    #[test]
    fn right_slice_absorbs_translation(dims in block_dims(), seed in any::<u64>()) {
        let a = MultiMatrixAlgebra::new(&dims).unwrap();
        let mut r = rng(seed);
        let x = random_tensor(&[a.clone(), a.clone()], &mut r);
        let b = random_element(&a, &mut r);
        let omega = random_functional(&a, &mut r);
        let lhs = slice_right(&omega, &x.mul(&tensor_elem(&a.identity(), &b))).unwrap();
        let rhs = slice_right(&omega.translate_right(&b), &x).unwrap();
        prop_assert!(lhs.residual(&rhs) < 1e-13);
    }

    #[test]
    fn dual_norm_is_a_norm(dims in block_dims(), seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let a = MultiMatrixAlgebra::new(&dims).unwrap();
        let mut r = rng(seed);
        let (w1, w2) = (random_functional(&a, &mut r), random_functional(&a, &mut r));
        prop_assert!(w1.add(&w2).dual_norm() <= w1.dual_norm() + w2.dual_norm() + 1e-12);
        let s = dqg_core::linalg::c(re, im);
        prop_assert!(close(w1.scale(s).dual_norm(), s.norm() * w1.dual_norm(), 1e-12));
        prop_assert!(w1.dual_norm() >= 0.0);
    }

    #[test]
    fn galois_bridge_on_random_magmas(m in magma()) {
        let (_, delta) = comult_from_table(&m);
        let maps = galois_maps(&delta, &Tolerances::default());
        let report = analyze(&m);
        prop_assert_eq!(report.right_cancellative, maps.t1_bijective());
        prop_assert_eq!(report.left_cancellative, maps.t2_bijective());
    }

    #[test]
    fn tables_survive_the_comultiplication(m in magma()) {
        let (_, delta) = comult_from_table(&m);
        let back = extract_operation(&delta, Some(m.labels()), &Tolerances::default()).unwrap();
        prop_assert_eq!(back.table(), m.table());
    }

    #[test]
    fn wedderburn_recovers_blocks_in_any_basis(dims in block_dims(), seed in any::<u64>()) {
        let a = MultiMatrixAlgebra::new(&dims).unwrap();
        let d = a.dim();
        let mut r = rng(seed);
        let v = random_unitary(d, &mut r) * CMatrix::from_diagonal(&CVector::from_fn(d, |i, _| real(1.0 + i as f64 / d as f64)));
        let v_inv = v.clone().try_inverse().unwrap();
        let canonical = StructureConstants::of_algebra(&a);
        let mut star = CMatrix::zeros(d, d);
        for k in 0..d {
            let col = &v_inv * canonical.adjoint(&v.column(k).into_owned());
            star.set_column(k, &col);
        }
        let sc = StructureConstants::from_products(
            d,
            |i, j| &v_inv * canonical.mul(&v.column(i).into_owned(), &v.column(j).into_owned()),
            star,
        )
        .unwrap();
        let w = wedderburn(&sc, &Tolerances::default(), seed).unwrap();
        let mut got = w.algebra.block_dims().to_vec();
        let mut want = dims.clone();
        got.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(got.iter().map(|n| n * n).sum::<usize>(), d);
        prop_assert_eq!(got, want);
        prop_assert!(w.residual <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_groups_are_groups(seed in any::<u64>()) {
        let m = random_group_table(&mut rng(seed), 6);
        let report = analyze(&m);
        prop_assert!(report.is_group);
        let (_, delta) = comult_from_table(&m);
        let back = extract_operation(&delta, Some(m.labels()), &Tolerances::default()).unwrap();
        prop_assert_eq!(back.table(), m.table());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn distinguished_projection_follows_unitary_change_of_basis(seed in any::<u64>()) {
        let tol = Tolerances::default();
        let m = random_group_table(&mut rng(seed), 6);
        let file = build_group_algebra(&m, &tol, seed).unwrap();
        let delta = file.comultiplication().unwrap();
        let a = delta.algebra().clone();
        let mut r = rng(seed ^ 0x5eed);
        let blocks: Vec<CMatrix> = a.block_dims().iter().map(|&n| random_unitary(n, &mut r)).collect();
        let u = AlgebraElement::from_blocks(&a, blocks).unwrap();
        let conj = |x: &AlgebraElement, inverse: bool| if inverse { &(&u.adjoint() * x) * &u } else { &(&u * x) * &u.adjoint() };
        let map = CMatrix::from_fn(a.dim(), a.dim(), |i, k| conj(&a.basis(k), false).coords()[i]);
        let codomain = [a.clone()];
        let moved = Comultiplication::from_fn(&a, |k| {
            delta
                .apply(&conj(&a.basis(k), true))
                .map_leg(0, &map, &codomain)
                .and_then(|x| x.map_leg(1, &map, &codomain))
                .unwrap()
        })
        .unwrap();
        let (h, _) = find_h(&delta, &tol).unwrap();
        let (h_moved, _) = find_h(&moved, &tol).unwrap();
        prop_assert!(h_moved.residual(&conj(&h, false)) < 1e-9);
    }

    #[test]
    fn antipode_is_an_involution_on_function_algebras(seed in any::<u64>()) {
        let m = random_group_table(&mut rng(seed), 6);
        let file = build_function_algebra(&m).unwrap();
        let (s, _) = QuantumGroupStructure::derive(&file.comultiplication().unwrap(), &Tolerances::default()).unwrap();
        let n = m.order();
        prop_assert!((&s.antipode * &s.antipode - CMatrix::identity(n, n)).norm() < 1e-12);
        for k in 0..n {
            let x = s.algebra().basis(k);
            prop_assert!((s.counit.apply(&s.apply_antipode(&x)) - s.counit.apply(&x)).norm() < 1e-12);
        }
    }

    #[test]
    fn files_round_trip_exactly(dims in block_dims(), seed in any::<u64>(), exponent in -300i32..300) {
        let a = MultiMatrixAlgebra::new(&dims).unwrap();
        let n = a.dim();
        let mut r = rng(seed);
        let scale = 10f64.powi(exponent);
        let delta = CMatrix::from_fn(n * n, n, |_, _| random_vector(&mut r, 1)[0] * real(scale));
        let file = QuantumGroupFile { block_dims: dims, delta, expected: Default::default(), note: Some("random".into()) };
        let back = QuantumGroupFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(back.delta, file.delta);
    }
}
