//! Derived pipeline values compared against closed forms computed from group tables.

use dqg_core::axioms::{check_injectivity_h, galois_maps};
use dqg_core::builders::{build_function_algebra, build_group_algebra, group_algebra_with_iso};
use dqg_core::gns::gns;
use dqg_core::haar::{gram_matrix, haar_weight};
use dqg_core::linalg::{c, inverse, kron, real, CMatrix, CVector};
use dqg_core::magma::{cyclic, symmetric3};
use dqg_core::unitary::{build_w, FundamentalUnitary};
use dqg_core::{Error, FiniteMagma, GnsSpace, HaarWeight, QuantumGroupFile, QuantumGroupStructure, Tolerances};

fn derive(file: &QuantumGroupFile) -> QuantumGroupStructure {
    QuantumGroupStructure::derive(&file.comultiplication().unwrap(), &Tolerances::default())
        .unwrap()
        .0
}

fn pipeline(file: &QuantumGroupFile) -> (QuantumGroupStructure, HaarWeight, GnsSpace, FundamentalUnitary) {
    let tol = Tolerances::default();
    let s = derive(file);
    let haar = haar_weight(&s, &tol).unwrap();
    let space = gns(&s, &haar).unwrap();
    let w = build_w(&s, &space, &tol);
    (s, haar, space, w)
}

fn identity_of(m: &FiniteMagma) -> usize {
    let n = m.order();
    (0..n).find(|&e| (0..n).all(|x| m.op(e, x) == x && m.op(x, e) == x)).unwrap()
}

fn inverse_of(m: &FiniteMagma, g: usize) -> usize {
    let e = identity_of(m);
    (0..m.order()).find(|&x| m.op(g, x) == e).unwrap()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Permutation matrix sending basis vector `a` to `f(a)`.
fn permutation(n: usize, f: impl Fn(usize) -> usize) -> CMatrix {
    let mut p = CMatrix::zeros(n, n);
    for a in 0..n {
        p[(f(a), a)] = real(1.0);
    }
    p
}

fn conjugacy_classes(m: &FiniteMagma) -> usize {
    let n = m.order();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for x in 0..n {
        if seen[x] {
            continue;
        }
        classes += 1;
        for g in 0..n {
            seen[m.op(m.op(g, x), inverse_of(m, g))] = true;
        }
    }
    classes
}

#[test]
fn function_algebra_antipode_squares_to_identity() {
    for m in [cyclic(4), symmetric3()] {
        let s = derive(&build_function_algebra(&m).unwrap());
        let n = m.order();
        let expected = permutation(n, |g| inverse_of(&m, g));
        assert!(max_abs(&(&s.antipode - &expected)) < 1e-12);
        assert!(max_abs(&(&s.antipode * &s.antipode - CMatrix::identity(n, n))) < 1e-12);
    }
}

#[test]
fn group_algebra_antipode_is_inversion() {
    let m = symmetric3();
    let (file, w) = group_algebra_with_iso(&m, &Tolerances::default(), 3).unwrap();
    let s = derive(&file);
    let algebra = s.algebra().clone();
    for g in 0..m.order() {
        let lambda = algebra.element(&w.iso.column(g).into_owned());
        let inv = algebra.element(&w.iso.column(inverse_of(&m, g)).into_owned());
        assert!(s.apply_antipode(&lambda).residual(&inv) < 1e-12);
        assert!((s.counit.apply(&s.apply_antipode(&lambda)) - s.counit.apply(&lambda)).norm() < 1e-12);
    }
}

#[test]
fn gram_of_function_algebra_is_identity() {
    for m in [cyclic(2), symmetric3()] {
        let (s, haar, _, _) = pipeline(&build_function_algebra(&m).unwrap());
        let n = m.order();
        assert!(max_abs(&(gram_matrix(s.algebra(), &haar.phi) - CMatrix::identity(n, n))) < 1e-12);
    }
}

#[test]
fn fundamental_unitary_of_z2_is_the_addition_permutation() {
    let (_, _, _, w) = pipeline(&build_function_algebra(&cyclic(2)).unwrap());
    let expected = permutation(4, |i| {
        let (a, b) = (i / 2, i % 2);
        ((a + b) % 2) * 2 + b
    });
    assert!(max_abs(&(&w.w - &expected)) < 1e-12);
}

#[test]
fn dual_action_is_right_translation() {
    let m = symmetric3();
    let n = m.order();
    let (s, _, space, _) = pipeline(&build_function_algebra(&m).unwrap());
    let algebra = s.algebra().clone();
    for t in 0..n {
        let op = space.pi_dual(&algebra.coordinate_functional(t));
        let tinv = inverse_of(&m, t);
        let expected = permutation(n, |g| m.op(g, tinv));
        assert!(max_abs(&(op - expected)) < 1e-12, "t = {t}");
    }
}

#[test]
fn dual_comultiplication_is_diagonal_on_translations() {
    let m = symmetric3();
    let n = m.order();
    let (_, _, _, w) = pipeline(&build_function_algebra(&m).unwrap());
    let id = CMatrix::identity(n, n);
    let mut flipped_worst = 0.0_f64;
    for g in 0..n {
        let rho = permutation(n, |a| m.op(a, g));
        let lhs = w.w.adjoint() * kron(&id, &rho) * &w.w;
        assert!(max_abs(&(lhs - kron(&rho, &rho))) < 1e-12, "g = {g}");
        let flipped = &w.w * kron(&id, &rho) * w.w.adjoint();
        flipped_worst = flipped_worst.max(max_abs(&(flipped - kron(&rho, &rho))));
    }
    // the opposite convention fails on a non-abelian group
    assert!(flipped_worst > 0.5);
}

#[test]
fn z4_idempotents_are_characters() {
    let n = 4;
    let (_, w) = group_algebra_with_iso(&cyclic(n), &Tolerances::default(), 0).unwrap();
    assert_eq!(w.algebra.block_dims(), &[1, 1, 1, 1]);
    let characters: Vec<CVector> = (0..n)
        .map(|k| {
            CVector::from_fn(n, |g, _| {
                let angle = -2.0 * std::f64::consts::PI * (k * g) as f64 / n as f64;
                c(angle.cos(), angle.sin()) / real(n as f64)
            })
        })
        .collect();
    for unit in w.iso_inv.column_iter() {
        let best = characters.iter().map(|p| (unit - p).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-9, "idempotent {unit} is not a character projection");
    }
}

#[test]
fn group_algebra_blocks_count_conjugacy_classes() {
    let tol = Tolerances::default();
    for m in [cyclic(6), symmetric3()] {
        let file = build_group_algebra(&m, &tol, 0).unwrap();
        assert_eq!(file.block_dims.len(), conjugacy_classes(&m));
        assert_eq!(file.block_dims.iter().map(|d| d * d).sum::<usize>(), m.order());
    }
    let mut dims = build_group_algebra(&symmetric3(), &tol, 0).unwrap().block_dims;
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 1, 2]);
}

#[test]
fn perturbed_weight_is_not_faithful() {
    let m = cyclic(2);
    let (s, haar, _, _) = pipeline(&build_function_algebra(&m).unwrap());
    let mut coords = haar.phi.coords().clone();
    coords[1] = real(0.0);
    let bad = HaarWeight {
        phi: dqg_core::LinearFunctional::new(s.algebra(), coords),
        ..haar
    };
    assert_eq!(gns(&s, &bad).unwrap_err(), Error::GramNotPD);
}

#[test]
fn galois_map_inverts() {
    let tol = Tolerances::default();
    for file in [
        build_function_algebra(&symmetric3()).unwrap(),
        build_group_algebra(&symmetric3(), &tol, 0).unwrap(),
    ] {
        let delta = file.comultiplication().unwrap();
        let maps = galois_maps(&delta, &tol);
        let inv = inverse(&maps.t1, tol.rank).expect("T1 invertible");
        let n = maps.t1.nrows();
        assert!(max_abs(&(&maps.t1 * inv - CMatrix::identity(n, n))) < 1e-9);
    }
}

#[test]
fn injectivity_matches_galois_bijectivity() {
    let tol = Tolerances::default();
    for file in [
        build_function_algebra(&cyclic(3)).unwrap(),
        build_group_algebra(&symmetric3(), &tol, 0).unwrap(),
    ] {
        let s = derive(&file);
        let report = check_injectivity_h(&s.delta, &s.h, &tol);
        let maps = galois_maps(&s.delta, &tol);
        assert_eq!(
            report.right_leg_injective() && report.left_leg_injective(),
            maps.t1_bijective() && maps.t2_bijective()
        );
        assert!(report.right_leg_injective() && report.left_leg_injective());
    }
}

#[test]
fn haar_weight_of_group_algebra_is_the_trace_at_identity() {
    let m = symmetric3();
    let n = m.order();
    let (file, w) = group_algebra_with_iso(&m, &Tolerances::default(), 5).unwrap();
    let (s, haar, _, _) = pipeline(&file);
    let algebra = s.algebra().clone();
    let e = identity_of(&m);
    let mut average = algebra.zero();
    for g in 0..n {
        let lambda = algebra.element(&w.iso.column(g).into_owned());
        let target = if g == e { n as f64 } else { 0.0 };
        assert!((haar.phi.apply(&lambda) - real(target)).norm() < 1e-9);
        assert!((s.counit.apply(&lambda) - real(1.0)).norm() < 1e-9);
        average = average.try_add(&lambda.scale(real(1.0 / n as f64))).unwrap();
    }
    assert!(s.h.residual(&average) < 1e-9);
}
