//! Tensor products of multi-matrix algebras with leg bookkeeping.
//!
//! A [`TensorElement`] over factors `A_1, ..., A_n` is stored as an element of
//! the product algebra `A_1 (x) ... (x) A_n` in its canonical basis. Leg
//! operations (embedding, permuting, slicing, applying a linear map to one
//! leg) go through the "Kronecker" coordinates instead: the multi-index
//! `(i_1, ..., i_n)` of factor basis indices, left factor most significant.
//! [`TensorLayout`] holds the permutation between the two orders.

use std::sync::Arc;

use crate::algebra::{AlgebraElement, LinearFunctional, MatrixUnit, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};

/// Factor list of a tensor power together with the basis permutation.
#[derive(Debug, PartialEq)]
pub struct TensorLayout {
    factors: Vec<MultiMatrixAlgebra>,
    product: MultiMatrixAlgebra,
    /// Kronecker index -> canonical index of the product algebra.
    to_algebra: Vec<usize>,
    /// Canonical index -> Kronecker index.
    to_kron: Vec<usize>,
}

fn pair_index(left: &MultiMatrixAlgebra, right: &MultiMatrixAlgebra, product: &MultiMatrixAlgebra, p: usize, q: usize) -> usize {
    let u = left.matrix_unit(p);
    let v = right.matrix_unit(q);
    let m = right.block_dim(v.block);
    product.basis_index(MatrixUnit {
        block: u.block * right.num_blocks() + v.block,
        row: u.row * m + v.row,
        col: u.col * m + v.col,
    })
}

impl TensorLayout {
    pub fn new(factors: &[MultiMatrixAlgebra]) -> Arc<Self> {
        assert!(!factors.is_empty(), "tensor layout needs at least one factor");
        let mut product = factors[0].clone();
        let mut to_algebra: Vec<usize> = (0..product.dim()).collect();
        for factor in &factors[1..] {
            let next = product.tensor(factor);
            let mut map = Vec::with_capacity(to_algebra.len() * factor.dim());
            for &p in &to_algebra {
                for q in 0..factor.dim() {
                    map.push(pair_index(&product, factor, &next, p, q));
                }
            }
            product = next;
            to_algebra = map;
        }
        let mut to_kron = vec![0; to_algebra.len()];
        for (k, &a) in to_algebra.iter().enumerate() {
            to_kron[a] = k;
        }
        Arc::new(TensorLayout {
            factors: factors.to_vec(),
            product,
            to_algebra,
            to_kron,
        })
    }

    pub fn power(algebra: &MultiMatrixAlgebra, n: usize) -> Arc<Self> {
        Self::new(&vec![algebra.clone(); n])
    }

    pub fn factors(&self) -> &[MultiMatrixAlgebra] {
        &self.factors
    }

    pub fn product(&self) -> &MultiMatrixAlgebra {
        &self.product
    }

    pub fn kron_dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }

    /// Canonical index of the basis tensor with the given factor indices.
    pub fn algebra_index(&self, multi: &[usize]) -> usize {
        let mut k = 0;
        for (f, &i) in self.factors.iter().zip(multi) {
            k = k * f.dim() + i;
        }
        self.to_algebra[k]
    }

    pub fn to_algebra_order(&self, kron: &CVector) -> CVector {
        let mut v = CVector::zeros(kron.len());
        for (k, &a) in self.to_algebra.iter().enumerate() {
            v[a] = kron[k];
        }
        v
    }

    pub fn to_kron_order(&self, coords: &CVector) -> CVector {
        let mut v = CVector::zeros(coords.len());
        for (a, &k) in self.to_kron.iter().enumerate() {
            v[k] = coords[a];
        }
        v
    }

    /// Reorders the rows of a matrix whose rows are canonical coordinates.
    pub fn rows_to_kron(&self, m: &CMatrix) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |k, j| m[(self.to_algebra[k], j)])
    }

    /// Reorders the columns of a matrix whose columns are indexed canonically.
    pub fn cols_to_kron(&self, m: &CMatrix) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, k| m[(i, self.to_algebra[k])])
    }
}

/// An element of a tensor product of multi-matrix algebras.
#[derive(Clone, Debug)]
pub struct TensorElement {
    layout: Arc<TensorLayout>,
    element: AlgebraElement,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.layout.factors == other.layout.factors && self.element == other.element
    }
}

/// Tensor product algebra `A (x) B`.
pub fn tensor_algebra(a: &MultiMatrixAlgebra, b: &MultiMatrixAlgebra) -> MultiMatrixAlgebra {
    a.tensor(b)
}

/// `a (x) b` as a two-leg tensor.
pub fn tensor_elem(a: &AlgebraElement, b: &AlgebraElement) -> TensorElement {
    TensorElement::single(a).tensor(&TensorElement::single(b))
}

fn outer(x: &[C64], y: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; x.len() * y.len()];
    for (i, xi) in x.iter().enumerate() {
        if *xi == ZERO {
            continue;
        }
        let row = &mut out[i * y.len()..(i + 1) * y.len()];
        for (slot, yj) in row.iter_mut().zip(y) {
            *slot = xi * yj;
        }
    }
    out
}

impl TensorElement {
    pub fn new(layout: Arc<TensorLayout>, element: AlgebraElement) -> Result<Self> {
        if element.algebra() != layout.product() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(TensorElement { layout, element })
    }

    pub fn single(a: &AlgebraElement) -> Self {
        TensorElement {
            layout: TensorLayout::new(std::slice::from_ref(a.algebra())),
            element: a.clone(),
        }
    }

    pub fn from_kron(layout: Arc<TensorLayout>, kron: &CVector) -> Self {
        let coords = layout.to_algebra_order(kron);
        let element = AlgebraElement::from_coords(layout.product(), &coords);
        TensorElement { layout, element }
    }

    pub fn from_coords(layout: Arc<TensorLayout>, coords: &CVector) -> Self {
        let element = AlgebraElement::from_coords(layout.product(), coords);
        TensorElement { layout, element }
    }

    pub fn identity(layout: Arc<TensorLayout>) -> Self {
        let element = layout.product().identity();
        TensorElement { layout, element }
    }

    pub fn zero(layout: Arc<TensorLayout>) -> Self {
        let element = layout.product().zero();
        TensorElement { layout, element }
    }

    pub fn layout(&self) -> &Arc<TensorLayout> {
        &self.layout
    }

    pub fn factors(&self) -> &[MultiMatrixAlgebra] {
        self.layout.factors()
    }

    pub fn num_legs(&self) -> usize {
        self.layout.factors.len()
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }

    pub fn into_element(self) -> AlgebraElement {
        self.element
    }

    pub fn coords(&self) -> CVector {
        self.element.coords()
    }

    pub fn kron_coords(&self) -> CVector {
        self.layout.to_kron_order(&self.element.coords())
    }

    /// Concatenates legs: `x (x) y`.
    pub fn tensor(&self, other: &TensorElement) -> TensorElement {
        let mut factors = self.factors().to_vec();
        factors.extend_from_slice(other.factors());
        let layout = TensorLayout::new(&factors);
        let kron = outer(self.kron_coords().as_slice(), other.kron_coords().as_slice());
        TensorElement::from_kron(layout, &CVector::from_vec(kron))
    }

    pub fn try_mul(&self, other: &TensorElement) -> Result<TensorElement> {
        if self.layout.factors != other.layout.factors {
            return Err(Error::AlgebraMismatch);
        }
        Ok(TensorElement {
            layout: self.layout.clone(),
            element: self.element.try_mul(&other.element)?,
        })
    }

    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        self.try_mul(other).expect("product of tensors over different factors")
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.layout.factors, other.layout.factors);
        TensorElement {
            layout: self.layout.clone(),
            element: &self.element - &other.element,
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.layout.factors, other.layout.factors);
        TensorElement {
            layout: self.layout.clone(),
            element: &self.element + &other.element,
        }
    }

    pub fn scale(&self, s: C64) -> TensorElement {
        TensorElement {
            layout: self.layout.clone(),
            element: self.element.scale(s),
        }
    }

    pub fn adjoint(&self) -> TensorElement {
        TensorElement {
            layout: self.layout.clone(),
            element: self.element.adjoint(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.element.frobenius_norm()
    }

    pub fn residual(&self, other: &TensorElement) -> f64 {
        assert_eq!(self.layout.factors, other.layout.factors, "residual across layouts");
        self.element.residual(&other.element)
    }

    /// Reorders legs: output leg `k` carries input leg `perm[k]`.
    pub fn permute_legs(&self, perm: &[usize]) -> Result<TensorElement> {
        let n = self.num_legs();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::BadPermutation(n));
        }
        let dims = self.layout.kron_dims();
        let mut in_strides = vec![1; n];
        for k in (0..n.saturating_sub(1)).rev() {
            in_strides[k] = in_strides[k + 1] * dims[k + 1];
        }
        let factors: Vec<MultiMatrixAlgebra> = perm.iter().map(|&p| self.factors()[p].clone()).collect();
        let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        let layout = TensorLayout::new(&factors);
        let src = self.kron_coords();
        let total = src.len();
        let mut out = CVector::zeros(total);
        let mut idx = vec![0usize; n];
        for slot in out.iter_mut() {
            let offset: usize = (0..n).map(|k| idx[k] * in_strides[perm[k]]).sum();
            *slot = src[offset];
            for k in (0..n).rev() {
                idx[k] += 1;
                if idx[k] < out_dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(TensorElement::from_kron(layout, &out))
    }

    /// Places a two-leg tensor into legs `i < j` (1-based) of `factors`, identity elsewhere.
    pub fn embed_legs_in(&self, legs: (usize, usize), factors: &[MultiMatrixAlgebra]) -> Result<TensorElement> {
        let n = factors.len();
        let (i, j) = legs;
        if self.num_legs() != 2 || i == 0 || i >= j || j > n {
            return Err(Error::BadLegIndices(i, j, n));
        }
        if factors[i - 1] != self.factors()[0] || factors[j - 1] != self.factors()[1] {
            return Err(Error::AlgebraMismatch);
        }
        let rest: Vec<MultiMatrixAlgebra> = (0..n)
            .filter(|&k| k != i - 1 && k != j - 1)
            .map(|k| factors[k].clone())
            .collect();
        let unit = if rest.is_empty() {
            return Ok(self.clone());
        } else {
            TensorElement::identity(TensorLayout::new(&rest))
        };
        let joined = self.tensor(&unit);
        // joined legs: [x_1, x_2, rest...]; build output leg -> joined leg map
        let mut perm = Vec::with_capacity(n);
        let mut next_rest = 2;
        for k in 0..n {
            if k == i - 1 {
                perm.push(0);
            } else if k == j - 1 {
                perm.push(1);
            } else {
                perm.push(next_rest);
                next_rest += 1;
            }
        }
        joined.permute_legs(&perm)
    }

    /// Leg numbering for a tensor over `A (x) A`: places it in legs `i < j` of `A^(x)n`.
    pub fn embed_legs(&self, legs: (usize, usize), n: usize) -> Result<TensorElement> {
        if self.num_legs() != 2 || self.factors()[0] != self.factors()[1] {
            return Err(Error::AlgebraMismatch);
        }
        self.embed_legs_in(legs, &vec![self.factors()[0].clone(); n])
    }

    /// Applies `omega` to leg `leg` (0-based), leaving the others.
    pub fn slice_leg(&self, leg: usize, omega: &LinearFunctional) -> Result<TensorElement> {
        let n = self.num_legs();
        if leg >= n || n < 2 {
            return Err(Error::BadLegIndices(leg, leg, n));
        }
        if omega.algebra() != &self.factors()[leg] {
            return Err(Error::AlgebraMismatch);
        }
        let dims = self.layout.kron_dims();
        let pre: usize = dims[..leg].iter().product();
        let mid = dims[leg];
        let post: usize = dims[leg + 1..].iter().product();
        let x = self.kron_coords();
        let w = omega.coords();
        let mut out = CVector::zeros(pre * post);
        for p in 0..pre {
            for m in 0..mid {
                let wm = w[m];
                if wm == ZERO {
                    continue;
                }
                let base = (p * mid + m) * post;
                for q in 0..post {
                    out[p * post + q] += wm * x[base + q];
                }
            }
        }
        let factors: Vec<MultiMatrixAlgebra> = self
            .factors()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != leg)
            .map(|(_, f)| f.clone())
            .collect();
        Ok(TensorElement::from_kron(TensorLayout::new(&factors), &out))
    }

    /// Applies a linear map to leg `leg` (0-based).
    ///
    /// `map` has columns indexed by the canonical basis of the leg's algebra
    /// and rows by the canonical basis of the product of `codomain`.
    pub fn map_leg(&self, leg: usize, map: &CMatrix, codomain: &[MultiMatrixAlgebra]) -> Result<TensorElement> {
        let n = self.num_legs();
        if leg >= n {
            return Err(Error::BadLegIndices(leg, leg, n));
        }
        let cod_layout = TensorLayout::new(codomain);
        if map.ncols() != self.factors()[leg].dim() || map.nrows() != cod_layout.product().dim() {
            return Err(Error::ShapeMismatch(format!(
                "map of shape {:?} on leg of dimension {}",
                map.shape(),
                self.factors()[leg].dim()
            )));
        }
        let map_kron = cod_layout.rows_to_kron(map);
        let dims = self.layout.kron_dims();
        let pre: usize = dims[..leg].iter().product();
        let mid = dims[leg];
        let post: usize = dims[leg + 1..].iter().product();
        let outd = map.nrows();
        let x = self.kron_coords();
        let mut out = CVector::zeros(pre * outd * post);
        for p in 0..pre {
            for m in 0..mid {
                let base = (p * mid + m) * post;
                for o in 0..outd {
                    let coeff = map_kron[(o, m)];
                    if coeff == ZERO {
                        continue;
                    }
                    let dst = (p * outd + o) * post;
                    for q in 0..post {
                        out[dst + q] += coeff * x[base + q];
                    }
                }
            }
        }
        let mut factors = self.factors()[..leg].to_vec();
        factors.extend_from_slice(codomain);
        factors.extend_from_slice(&self.factors()[leg + 1..]);
        Ok(TensorElement::from_kron(TensorLayout::new(&factors), &out))
    }

    /// Full contraction with one functional per leg.
    pub fn pair(&self, functionals: &[&LinearFunctional]) -> Result<C64> {
        if functionals.len() != self.num_legs() {
            return Err(Error::AlgebraMismatch);
        }
        let mut current = self.clone();
        for omega in functionals.iter().rev().take(functionals.len() - 1) {
            let last = current.num_legs() - 1;
            current = current.slice_leg(last, omega)?;
        }
        functionals[0].try_apply(current.element())
    }
}

/// `(omega (x) id) x` for a two-leg tensor.
pub fn slice_left(omega: &LinearFunctional, x: &TensorElement) -> Result<AlgebraElement> {
    if x.num_legs() != 2 {
        return Err(Error::BadLegIndices(1, 2, x.num_legs()));
    }
    Ok(x.slice_leg(0, omega)?.into_element())
}

/// `(id (x) omega) x` for a two-leg tensor.
pub fn slice_right(omega: &LinearFunctional, x: &TensorElement) -> Result<AlgebraElement> {
    if x.num_legs() != 2 {
        return Err(Error::BadLegIndices(1, 2, x.num_legs()));
    }
    Ok(x.slice_leg(1, omega)?.into_element())
}

/// The flip `a (x) b -> b (x) a`.
pub fn flip(x: &TensorElement) -> Result<TensorElement> {
    if x.num_legs() != 2 {
        return Err(Error::BadPermutation(x.num_legs()));
    }
    x.permute_legs(&[1, 0])
}

pub fn apply_functional(omega: &LinearFunctional, a: &AlgebraElement) -> Result<C64> {
    omega.try_apply(a)
}

/// Relative residual between two tensors as flat coefficient vectors.
pub fn tensor_residual(x: &TensorElement, y: &TensorElement) -> f64 {
    linalg::relative_residual(x.coords().as_slice(), y.coords().as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real, ONE};

    fn random_element(algebra: &MultiMatrixAlgebra, seed: u64) -> AlgebraElement {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let coords = CVector::from_fn(algebra.dim(), |_, _| c(next(), next()));
        algebra.element(&coords)
    }

    #[test]
    fn tensor_algebra_pairs_blocks_lexicographically() {
        let z2 = MultiMatrixAlgebra::points(2).unwrap();
        assert_eq!(tensor_algebra(&z2, &z2).block_dims(), &[1, 1, 1, 1]);
        let m2 = MultiMatrixAlgebra::new(&[2]).unwrap();
        assert_eq!(tensor_algebra(&m2, &m2).block_dims(), &[4]);
        let a = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let b = MultiMatrixAlgebra::new(&[3, 1]).unwrap();
        assert_eq!(tensor_algebra(&a, &b).block_dims(), &[3, 1, 6, 2]);
    }

    #[test]
    fn tensor_basis_order_matches_formula() {
        let a = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let b = MultiMatrixAlgebra::new(&[2, 1]).unwrap();
        let ab = a.tensor(&b);
        for p in 0..a.dim() {
            for q in 0..b.dim() {
                let u = a.matrix_unit(p);
                let v = b.matrix_unit(q);
                let m = b.block_dim(v.block);
                let expected = ab.basis_index(MatrixUnit {
                    block: u.block * b.num_blocks() + v.block,
                    row: u.row * m + v.row,
                    col: u.col * m + v.col,
                });
                let t = tensor_elem(&a.basis(p), &b.basis(q));
                let coords = t.coords();
                for k in 0..ab.dim() {
                    let want = if k == expected { ONE } else { ZERO };
                    assert_eq!(coords[k], want, "p={p} q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn one_tensor_delta() {
        let z2 = MultiMatrixAlgebra::points(2).unwrap();
        let x = tensor_elem(&z2.identity(), &z2.basis(0));
        let coords = x.coords();
        // pair order (0,0),(0,1),(1,0),(1,1)
        assert_eq!(coords.as_slice(), &[ONE, ZERO, ONE, ZERO]);
    }

    #[test]
    fn flip_swaps_factors_and_is_involutive() {
        let a = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let x = random_element(&a, 1);
        let y = random_element(&a, 2);
        let t = tensor_elem(&x, &y);
        let f = flip(&t).unwrap();
        assert!(f.residual(&tensor_elem(&y, &x)) < 1e-15);
        assert!(flip(&f).unwrap().residual(&t) < 1e-15);
    }

    #[test]
    fn four_leg_cycle_permutation() {
        let a = MultiMatrixAlgebra::new(&[1, 1]).unwrap();
        let m = MultiMatrixAlgebra::new(&[2]).unwrap();
        let parts = [a.basis(0), m.basis(1), a.basis(1), m.basis(3)];
        let t = tensor_elem(&parts[0], &parts[1])
            .tensor(&TensorElement::single(&parts[2]))
            .tensor(&TensorElement::single(&parts[3]));
        // sigma(a (x) b (x) c (x) d) = b (x) c (x) a (x) d
        let sigma = t.permute_legs(&[1, 2, 0, 3]).unwrap();
        let expected = tensor_elem(&parts[1], &parts[2])
            .tensor(&TensorElement::single(&parts[0]))
            .tensor(&TensorElement::single(&parts[3]));
        assert_eq!(sigma, expected);
    }

    #[test]
    fn bad_permutations_rejected() {
        let a = MultiMatrixAlgebra::points(2).unwrap();
        let t = tensor_elem(&a.basis(0), &a.basis(1));
        assert_eq!(t.permute_legs(&[0, 0]), Err(Error::BadPermutation(2)));
        assert_eq!(t.permute_legs(&[0]), Err(Error::BadPermutation(2)));
    }

    #[test]
    fn embed_legs_basic_cases() {
        let a = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let x = tensor_elem(&random_element(&a, 3), &random_element(&a, 4));
        let one = TensorElement::single(&a.identity());
        assert!(x.embed_legs((1, 2), 3).unwrap().residual(&x.tensor(&one)) < 1e-15);
        let expected = one.tensor(&x).tensor(&one);
        assert!(x.embed_legs((2, 3), 4).unwrap().residual(&expected) < 1e-15);
        assert_eq!(x.embed_legs((2, 2), 3), Err(Error::BadLegIndices(2, 2, 3)));
        assert_eq!(x.embed_legs((0, 2), 3), Err(Error::BadLegIndices(0, 2, 3)));
        assert_eq!(x.embed_legs((1, 4), 3), Err(Error::BadLegIndices(1, 4, 3)));
    }

    #[test]
    fn embed_legs_non_adjacent() {
        let a = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let p = random_element(&a, 5);
        let q = random_element(&a, 6);
        let x = tensor_elem(&p, &q);
        let one = a.identity();
        let expected = tensor_elem(&p, &one)
            .tensor(&TensorElement::single(&q))
            .tensor(&TensorElement::single(&one));
        assert!(x.embed_legs((1, 3), 4).unwrap().residual(&expected) < 1e-15);
    }

    #[test]
    fn disjoint_embeddings_commute() {
        let a = MultiMatrixAlgebra::new(&[2, 1]).unwrap();
        let x = tensor_elem(&random_element(&a, 7), &random_element(&a, 8));
        let y = tensor_elem(&random_element(&a, 9), &random_element(&a, 10));
        let x13 = x.embed_legs((1, 3), 4).unwrap();
        let y24 = y.embed_legs((2, 4), 4).unwrap();
        assert!(x13.mul(&y24).residual(&y24.mul(&x13)) < 1e-13);
    }

    #[test]
    fn slices() {
        let a = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let x = random_element(&a, 11);
        let y = random_element(&a, 12);
        let eps = a.coordinate_functional(0);
        let t = tensor_elem(&x, &y);
        let right = slice_right(&eps, &t).unwrap();
        assert!(right.residual(&x.scale(eps.apply(&y))) < 1e-15);
        let omega = LinearFunctional::new(&a, CVector::from_fn(a.dim(), |k, _| real(k as f64 + 1.0)));
        let left = slice_left(&omega, &tensor_elem(&a.identity(), &y)).unwrap();
        assert!(left.residual(&y.scale(omega.apply(&a.identity()))) < 1e-14);
    }

    #[test]
    fn map_leg_matches_tensor_of_images() {
        let a = MultiMatrixAlgebra::new(&[1, 2]).unwrap();
        let b = MultiMatrixAlgebra::new(&[1]).unwrap();
        let x = random_element(&a, 13);
        let y = random_element(&a, 14);
        // trace map A -> C viewed as A -> [1]
        let map = CMatrix::from_fn(1, a.dim(), |_, k| {
            let u = a.matrix_unit(k);
            if u.row == u.col {
                ONE
            } else {
                ZERO
            }
        });
        let t = tensor_elem(&x, &y);
        let mapped = t.map_leg(0, &map, std::slice::from_ref(&b)).unwrap();
        let expected = tensor_elem(&b.identity().scale(x.trace()), &y);
        assert!(mapped.residual(&expected) < 1e-14);
    }
}
