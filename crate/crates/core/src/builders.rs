//! Example quantum groups: functions on a finite group, the group algebra,
//! and two degenerate comultiplications.

use crate::algebra::MultiMatrixAlgebra;
use crate::axioms::Comultiplication;
use crate::error::{Error, Result};
use crate::file::{Expected, QuantumGroupFile};
use crate::linalg::{real, CMatrix, CVector, Tolerances, ONE, ZERO};
use crate::magma::{analyze, comult_from_table, FiniteMagma};
use crate::tensor::{tensor_elem, TensorElement};
use crate::wedderburn::{wedderburn, StructureConstants, Wedderburn};

fn group_data(m: &FiniteMagma) -> Result<(usize, Vec<usize>)> {
    let report = analyze(m);
    if !report.is_group {
        return Err(Error::NotAGroup);
    }
    Ok((
        report.identity.expect("groups have identities"),
        report.inverses.expect("groups have inverses"),
    ))
}

fn unit_vector(n: usize, k: usize) -> CVector {
    CVector::from_fn(n, |i, _| if i == k { ONE } else { ZERO })
}

/// `C(G)` with `Delta(d_g) = sum over st = g of d_s (x) d_t`.
pub fn build_function_algebra(m: &FiniteMagma) -> Result<QuantumGroupFile> {
    let (e, inv) = group_data(m)?;
    let n = m.order();
    let (_, delta) = comult_from_table(m);
    let antipode = CMatrix::from_fn(n, n, |r, g| if r == inv[g] { ONE } else { ZERO });
    let expected = Expected {
        h: Some(unit_vector(n, e)),
        counit: Some(unit_vector(n, e)),
        antipode: Some(antipode),
        haar: Some(CVector::from_element(n, ONE)),
    };
    let note = format!("functions on the group {{{}}}", m.labels().join(", "));
    Ok(QuantumGroupFile::from_comultiplication(&delta, expected, Some(note)))
}

/// Structure constants of `C[G]` in the basis `lambda_g`.
pub fn group_algebra_constants(m: &FiniteMagma) -> Result<StructureConstants> {
    let (_, inv) = group_data(m)?;
    let n = m.order();
    let star = CMatrix::from_fn(n, n, |k, g| if k == inv[g] { ONE } else { ZERO });
    StructureConstants::from_products(n, |s, t| unit_vector(n, m.op(s, t)), star)
}

/// `C[G]` decomposed into matrix blocks, with `Delta(lambda_g) = lambda_g (x) lambda_g`.
pub fn build_group_algebra(m: &FiniteMagma, tol: &Tolerances, seed: u64) -> Result<QuantumGroupFile> {
    Ok(group_algebra_with_iso(m, tol, seed)?.0)
}

/// As [`build_group_algebra`], also returning the decomposition.
pub fn group_algebra_with_iso(m: &FiniteMagma, tol: &Tolerances, seed: u64) -> Result<(QuantumGroupFile, Wedderburn)> {
    let (e, inv) = group_data(m)?;
    let n = m.order();
    let w = wedderburn(&group_algebra_constants(m)?, tol, seed)?;
    let algebra = &w.algebra;
    let lambdas: Vec<_> = (0..n).map(|g| algebra.element(&w.iso.column(g).into_owned())).collect();
    let images: Vec<TensorElement> = lambdas.iter().map(|l| tensor_elem(l, l)).collect();
    let b = &w.iso_inv;
    let delta = Comultiplication::from_fn(algebra, |k| {
        images
            .iter()
            .enumerate()
            .fold(TensorElement::zero(images[0].layout().clone()), |acc, (g, t)| {
                acc.add(&t.scale(b[(g, k)]))
            })
    })?;
    let average = CVector::from_element(n, real(1.0 / n as f64));
    let s_lambda = CMatrix::from_fn(n, n, |r, g| if r == inv[g] { ONE } else { ZERO });
    let expected = Expected {
        h: Some(&w.iso * average),
        counit: Some(CVector::from_fn(n, |k, _| (0..n).map(|g| b[(g, k)]).sum())),
        antipode: Some(&w.iso * s_lambda * b),
        haar: Some(CVector::from_fn(n, |k, _| b[(e, k)] * real(n as f64))),
    };
    let note = format!("group algebra of {{{}}}", m.labels().join(", "));
    Ok((QuantumGroupFile::from_comultiplication(&delta, expected, Some(note)), w))
}

/// `Delta(a) = a (x) 1`: every element satisfies the equation defining `h`.
pub fn build_left_trivial(block_dims: &[usize]) -> Result<QuantumGroupFile> {
    let algebra = MultiMatrixAlgebra::new(block_dims)?;
    let delta = Comultiplication::left_trivial(&algebra);
    Ok(QuantumGroupFile::from_comultiplication(
        &delta,
        Expected::default(),
        Some("Delta(a) = a (x) 1".into()),
    ))
}

/// `Delta(a) = 1 (x) a`: no element satisfies the equation defining `h`.
pub fn build_right_trivial(block_dims: &[usize]) -> Result<QuantumGroupFile> {
    let algebra = MultiMatrixAlgebra::new(block_dims)?;
    let delta = Comultiplication::right_trivial(&algebra);
    Ok(QuantumGroupFile::from_comultiplication(
        &delta,
        Expected::default(),
        Some("Delta(a) = 1 (x) a".into()),
    ))
}

/// Image of a single group element in the decomposed group algebra, for tests.
pub fn transported_lambda(w: &Wedderburn, g: usize) -> CVector {
    w.iso.column(g).into_owned()
}
