//! Candidate comultiplications and the axiom checks run on them.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Tolerances};
use crate::report::{worst, Check};
use crate::tensor::{tensor_elem, TensorElement, TensorLayout};

/// A linear map `A -> A (x) A` stored as a dense matrix over canonical bases.
///
/// Column `k` holds the coordinates of `Delta(e_k)`.
#[derive(Debug, Clone)]
pub struct Comultiplication {
    algebra: MultiMatrixAlgebra,
    pair: Arc<TensorLayout>,
    matrix: CMatrix,
}

impl Comultiplication {
    pub fn new(algebra: &MultiMatrixAlgebra, matrix: CMatrix) -> Result<Self> {
        let pair = TensorLayout::power(algebra, 2);
        let n = algebra.dim();
        if matrix.shape() != (n * n, n) {
            return Err(Error::ShapeMismatch(format!(
                "comultiplication matrix is {:?}, expected ({}, {})",
                matrix.shape(),
                n * n,
                n
            )));
        }
        Ok(Comultiplication {
            algebra: algebra.clone(),
            pair,
            matrix,
        })
    }

    /// Builds the matrix column by column from the images of basis elements.
    pub fn from_fn(algebra: &MultiMatrixAlgebra, image: impl Fn(usize) -> TensorElement) -> Result<Self> {
        let n = algebra.dim();
        let cols: Vec<CVector> = (0..n)
            .map(|k| {
                let t = image(k);
                if t.factors() != [algebra.clone(), algebra.clone()] {
                    return Err(Error::AlgebraMismatch);
                }
                Ok(t.coords())
            })
            .collect::<Result<_>>()?;
        Self::new(algebra, linalg::hstack(&cols, n * n))
    }

    /// `Delta(a) = a (x) 1`.
    pub fn left_trivial(algebra: &MultiMatrixAlgebra) -> Self {
        let one = algebra.identity();
        Self::from_fn(algebra, |k| tensor_elem(&algebra.basis(k), &one)).expect("well-formed")
    }

    /// `Delta(a) = 1 (x) a`.
    pub fn right_trivial(algebra: &MultiMatrixAlgebra) -> Self {
        let one = algebra.identity();
        Self::from_fn(algebra, |k| tensor_elem(&one, &algebra.basis(k))).expect("well-formed")
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn pair_layout(&self) -> &Arc<TensorLayout> {
        &self.pair
    }

    pub fn apply(&self, a: &AlgebraElement) -> TensorElement {
        assert_eq!(a.algebra(), &self.algebra, "comultiplication applied across algebras");
        TensorElement::from_coords(self.pair.clone(), &(&self.matrix * a.coords()))
    }

    pub fn apply_basis(&self, k: usize) -> TensorElement {
        TensorElement::from_coords(self.pair.clone(), &self.matrix.column(k).into_owned())
    }

    /// Applies the comultiplication to leg `leg` (0-based) of a tensor.
    pub fn apply_on_leg(&self, x: &TensorElement, leg: usize) -> TensorElement {
        x.map_leg(leg, &self.matrix, &[self.algebra.clone(), self.algebra.clone()])
            .expect("leg lives in the comultiplication's algebra")
    }

    /// `Delta^(2)(a) = (Delta (x) id) Delta(a)`.
    pub fn iterate2(&self, a: &AlgebraElement) -> TensorElement {
        self.apply_on_leg(&self.apply(a), 0)
    }

    /// `Delta^(3)(a) = (Delta (x) id (x) id) Delta^(2)(a)`.
    pub fn iterate3(&self, a: &AlgebraElement) -> TensorElement {
        self.apply_on_leg(&self.iterate2(a), 0)
    }

    pub fn one_tensor(&self, b: &AlgebraElement) -> TensorElement {
        tensor_elem(&self.algebra.identity(), b)
    }

    pub fn tensor_one(&self, b: &AlgebraElement) -> TensorElement {
        tensor_elem(b, &self.algebra.identity())
    }

    /// Matrix of the linear map `b -> x (1 (x) b)` (or `x (b (x) 1)` when `left` is set).
    pub fn multiplier_map(&self, x: &TensorElement, left: bool) -> CMatrix {
        let n = self.algebra.dim();
        let cols: Vec<CVector> = (0..n)
            .map(|k| {
                let e = self.algebra.basis(k);
                let factor = if left { self.tensor_one(&e) } else { self.one_tensor(&e) };
                x.mul(&factor).coords()
            })
            .collect();
        linalg::hstack(&cols, n * n)
    }
}

/// Residuals of the unital *-homomorphism property.
#[derive(Debug, Clone, Serialize)]
pub struct StarHomReport {
    pub multiplicative: f64,
    pub star: f64,
    pub unital: f64,
    pub tolerance: f64,
}

impl StarHomReport {
    pub fn passed(&self) -> bool {
        self.multiplicative <= self.tolerance && self.star <= self.tolerance && self.unital <= self.tolerance
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::residual(
                "comult.multiplicative",
                "Delta(ab) = Delta(a)Delta(b)",
                self.multiplicative,
                self.tolerance,
            ),
            Check::residual("comult.star", "Delta(a*) = Delta(a)*", self.star, self.tolerance),
            Check::residual("comult.unital", "Delta(1) = 1 (x) 1", self.unital, self.tolerance),
        ]
    }
}

pub fn check_star_hom(delta: &Comultiplication, tol: &Tolerances) -> StarHomReport {
    let algebra = delta.algebra();
    let n = algebra.dim();
    let images: Vec<TensorElement> = (0..n).map(|k| delta.apply_basis(k)).collect();
    let mut mult = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let ab = &algebra.basis(p) * &algebra.basis(q);
            let lhs = delta.apply(&ab);
            let rhs = images[p].mul(&images[q]);
            mult = worst([mult, lhs.residual(&rhs)]);
        }
    }
    let star = worst((0..n).map(|k| {
        let lhs = delta.apply(&algebra.basis(k).adjoint());
        lhs.residual(&images[k].adjoint())
    }));
    let one = algebra.identity();
    let unital = delta.apply(&one).residual(&tensor_elem(&one, &one));
    StarHomReport {
        multiplicative: mult,
        star,
        unital,
        tolerance: tol.residual,
    }
}

/// `||(Delta (x) id)Delta - (id (x) Delta)Delta||` relative, as maps `A -> A (x) A (x) A`.
pub fn check_coassoc(delta: &Comultiplication) -> f64 {
    let n = delta.algebra().dim();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for k in 0..n {
        let d = delta.apply_basis(k);
        left.extend(delta.apply_on_leg(&d, 0).coords().iter().copied());
        right.extend(delta.apply_on_leg(&d, 1).coords().iter().copied());
    }
    linalg::relative_residual(&left, &right)
}

/// The Galois maps `T1(a (x) b) = Delta(a)(1 (x) b)` and `T2(a (x) b) = Delta(a)(b (x) 1)`.
///
/// Both matrices use the canonical basis of `A (x) A` for domain and codomain.
#[derive(Debug, Clone)]
pub struct GaloisMaps {
    pub t1: CMatrix,
    pub t2: CMatrix,
    pub rank_t1: usize,
    pub rank_t2: usize,
    pub dim: usize,
}

impl GaloisMaps {
    pub fn t1_bijective(&self) -> bool {
        self.rank_t1 == self.dim
    }

    pub fn t2_bijective(&self) -> bool {
        self.rank_t2 == self.dim
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::flag(
                "galois.t1_bijective",
                "a (x) b -> Delta(a)(1 (x) b) is bijective",
                self.t1_bijective(),
                format!("rank {} of {}", self.rank_t1, self.dim),
            ),
            Check::flag(
                "galois.t2_bijective",
                "a (x) b -> Delta(a)(b (x) 1) is bijective",
                self.t2_bijective(),
                format!("rank {} of {}", self.rank_t2, self.dim),
            ),
        ]
    }
}

pub fn galois_maps(delta: &Comultiplication, tol: &Tolerances) -> GaloisMaps {
    let algebra = delta.algebra();
    let n = algebra.dim();
    let layout = delta.pair_layout();
    let mut t1 = CMatrix::zeros(n * n, n * n);
    let mut t2 = CMatrix::zeros(n * n, n * n);
    for p in 0..n {
        let d = delta.apply_basis(p);
        for q in 0..n {
            let col = layout.algebra_index(&[p, q]);
            let b = algebra.basis(q);
            t1.set_column(col, &d.mul(&delta.one_tensor(&b)).coords());
            t2.set_column(col, &d.mul(&delta.tensor_one(&b)).coords());
        }
    }
    GaloisMaps {
        rank_t1: linalg::rank(&t1, tol.rank),
        rank_t2: linalg::rank(&t2, tol.rank),
        t1,
        t2,
        dim: n * n,
    }
}

/// Discreteness verdict: both Galois maps bijective.
pub fn check_discrete(maps: &GaloisMaps) -> bool {
    maps.t1_bijective() && maps.t2_bijective()
}

/// Ranks of `a -> Delta(h)(1 (x) a)` and `a -> Delta(h)(a (x) 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    pub rank_right_leg: usize,
    pub rank_left_leg: usize,
    pub dim: usize,
}

impl InjectivityReport {
    /// `Delta(h)(1 (x) a) = 0 => a = 0`.
    pub fn right_leg_injective(&self) -> bool {
        self.rank_right_leg == self.dim
    }

    /// `Delta(h)(a (x) 1) = 0 => a = 0`.
    pub fn left_leg_injective(&self) -> bool {
        self.rank_left_leg == self.dim
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::flag(
                "injectivity.one_tensor_a",
                "Delta(h)(1 (x) a) = 0 implies a = 0",
                self.right_leg_injective(),
                format!("rank {} of {}", self.rank_right_leg, self.dim),
            ),
            Check::flag(
                "injectivity.a_tensor_one",
                "Delta(h)(a (x) 1) = 0 implies a = 0",
                self.left_leg_injective(),
                format!("rank {} of {}", self.rank_left_leg, self.dim),
            ),
        ]
    }
}

pub fn check_injectivity_h(delta: &Comultiplication, h: &AlgebraElement, tol: &Tolerances) -> InjectivityReport {
    let dh = delta.apply(h);
    InjectivityReport {
        rank_right_leg: linalg::rank(&delta.multiplier_map(&dh, false), tol.rank),
        rank_left_leg: linalg::rank(&delta.multiplier_map(&dh, true), tol.rank),
        dim: delta.algebra().dim(),
    }
}

/// Spans `I0 = {(w (x) id)Delta(h)}` and `J0 = {(id (x) w)Delta(h)}`.
#[derive(Debug, Clone)]
pub struct IdealReport {
    /// Orthonormal basis of `I0` as coordinate columns.
    pub i0_basis: CMatrix,
    pub j0_basis: CMatrix,
    pub dim_i0: usize,
    pub dim_j0: usize,
    pub dim: usize,
    /// Worst projection residual of mutual containment.
    pub equality_residual: f64,
    pub equal: bool,
    pub essential: bool,
}

impl IdealReport {
    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::flag(
                "ideals.full",
                "dim I0 = dim J0 = dim A",
                self.dim_i0 == self.dim && self.dim_j0 == self.dim,
                format!("dim I0 = {}, dim J0 = {}, dim A = {}", self.dim_i0, self.dim_j0, self.dim),
            ),
            Check::flag(
                "ideals.equal",
                "I = J",
                self.equal,
                format!("containment residual {:.3e}", self.equality_residual),
            ),
            Check::flag("ideals.essential", "b a = 0 for all b in I implies a = 0", self.essential, ""),
        ]
    }
}

pub fn compute_ideals(delta: &Comultiplication, h: &AlgebraElement, tol: &Tolerances) -> IdealReport {
    let algebra = delta.algebra();
    let n = algebra.dim();
    let dh = delta.apply(h);
    let mut i_span = Vec::with_capacity(n);
    let mut j_span = Vec::with_capacity(n);
    for k in 0..n {
        let omega = algebra.coordinate_functional(k);
        i_span.push(dh.slice_leg(0, &omega).expect("two legs").coords());
        j_span.push(dh.slice_leg(1, &omega).expect("two legs").coords());
    }
    let i_span = linalg::hstack(&i_span, n);
    let j_span = linalg::hstack(&j_span, n);
    let i0_basis = linalg::column_space(&i_span, tol.rank);
    let j0_basis = linalg::column_space(&j_span, tol.rank);
    let equality_residual = worst([
        linalg::containment_residual(&i_span, &j0_basis),
        linalg::containment_residual(&j_span, &i0_basis),
    ]);
    // essential: a -> (b_k a)_k injective over a spanning set of I0
    let mut stacked = CMatrix::zeros(n * i0_basis.ncols(), n);
    for (r, col) in i0_basis.column_iter().enumerate() {
        let b = algebra.element(&col.into_owned());
        let lm = algebra.left_multiplication(&b);
        stacked.view_mut((r * n, 0), (n, n)).copy_from(&lm);
    }
    let essential = linalg::rank(&stacked, tol.rank) == n;
    IdealReport {
        dim_i0: i0_basis.ncols(),
        dim_j0: j0_basis.ncols(),
        dim: n,
        equal: equality_residual <= tol.residual && i0_basis.ncols() == j0_basis.ncols(),
        equality_residual,
        essential,
        i0_basis,
        j0_basis,
    }
}

/// Residuals of the four-leg identities satisfied by `Delta(h)` and the
/// containment `Delta(h)(A (x) 1) in Delta(h)(1 (x) A)`.
#[derive(Debug, Clone, Serialize)]
pub struct HIdentityReport {
    pub coproduct_absorption: f64,
    pub three_factor: f64,
    pub containment: f64,
    pub tolerance: f64,
}

impl HIdentityReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::residual(
                "h.four_leg_absorption",
                "Delta_23(h) Delta_14(h) = Delta_23(h) Delta^(3)(h)",
                self.coproduct_absorption,
                self.tolerance,
            ),
            Check::residual(
                "h.four_leg_exchange",
                "Delta_23(h) Delta_14(h) Delta_12(h) = Delta_23(h) Delta_14(h) Delta_34(h)",
                self.three_factor,
                self.tolerance,
            ),
            Check::residual(
                "h.slice_containment",
                "Delta(h)(A (x) 1) is contained in Delta(h)(1 (x) A)",
                self.containment,
                self.tolerance,
            ),
        ]
    }
}

pub fn check_h_identities(delta: &Comultiplication, h: &AlgebraElement, tol: &Tolerances) -> HIdentityReport {
    let dh = delta.apply(h);
    let d23 = dh.embed_legs((2, 3), 4).expect("valid legs");
    let d14 = dh.embed_legs((1, 4), 4).expect("valid legs");
    let d12 = dh.embed_legs((1, 2), 4).expect("valid legs");
    let d34 = dh.embed_legs((3, 4), 4).expect("valid legs");
    let d3 = delta.iterate3(h);
    let prefix = d23.mul(&d14);
    let coproduct_absorption = prefix.residual(&d23.mul(&d3));
    let three_factor = prefix.mul(&d12).residual(&prefix.mul(&d34));
    let left = delta.multiplier_map(&dh, true);
    let right_basis = linalg::column_space(&delta.multiplier_map(&dh, false), tol.rank);
    HIdentityReport {
        coproduct_absorption,
        three_factor,
        containment: linalg::containment_residual(&left, &right_basis),
        tolerance: tol.residual,
    }
}

/// A non-zero component `Delta^{(left, right)}_source` of the block decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSupport {
    pub source: usize,
    pub left: usize,
    pub right: usize,
    /// Frobenius mass of the component summed over the source block's matrix units.
    pub mass: f64,
}

pub fn block_support(delta: &Comultiplication, tol: &Tolerances) -> Vec<BlockSupport> {
    let algebra = delta.algebra();
    let nb = algebra.num_blocks();
    let mut mass = vec![0.0f64; nb * nb * nb];
    for k in 0..algebra.dim() {
        let source = algebra.matrix_unit(k).block;
        let image = delta.apply_basis(k);
        for (pair, block) in image.element().blocks().iter().enumerate() {
            mass[source * nb * nb + pair] += block.norm_squared();
        }
    }
    let scale = mass.iter().copied().fold(0.0, f64::max).sqrt().max(1.0);
    let mut out = Vec::new();
    for source in 0..nb {
        for left in 0..nb {
            for right in 0..nb {
                let m = mass[source * nb * nb + left * nb + right].sqrt();
                if m > tol.residual * scale {
                    out.push(BlockSupport {
                        source,
                        left,
                        right,
                        mass: m,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn z2() -> Comultiplication {
        let a = MultiMatrixAlgebra::points(2).unwrap();
        Comultiplication::from_fn(&a, |g| {
            let mut t = TensorElement::zero(TensorLayout::power(&a, 2));
            for s in 0..2 {
                t = t.add(&tensor_elem(&a.basis(s), &a.basis((g + s) % 2)));
            }
            t
        })
        .unwrap()
    }

    #[test]
    fn z2_is_a_coassociative_star_homomorphism() {
        let tol = Tolerances::default();
        let delta = z2();
        assert!(check_star_hom(&delta, &tol).passed());
        assert!(check_coassoc(&delta) <= 1e-15);
    }

    #[test]
    fn random_map_is_not_multiplicative() {
        let a = MultiMatrixAlgebra::points(2).unwrap();
        let m = CMatrix::from_fn(4, 2, |i, j| crate::linalg::real(((i * 7 + j * 3) % 5) as f64 - 1.5));
        let delta = Comultiplication::new(&a, m).unwrap();
        let report = check_star_hom(&delta, &Tolerances::default());
        assert!(!report.passed());
        assert!(report.multiplicative > 1e-3);
    }

    #[test]
    fn z2_galois_maps() {
        let delta = z2();
        let maps = galois_maps(&delta, &Tolerances::default());
        assert!(check_discrete(&maps));
        // T1(d_a (x) d_b) = d_{a-b} (x) d_b
        let layout = delta.pair_layout();
        for a in 0..2 {
            for b in 0..2 {
                let col = maps.t1.column(layout.algebra_index(&[a, b]));
                let target = layout.algebra_index(&[(a + b) % 2, b]);
                for r in 0..4 {
                    assert_eq!(col[r], if r == target { ONE } else { linalg::ZERO });
                }
            }
        }
    }

    #[test]
    fn left_trivial_comultiplication() {
        let a = MultiMatrixAlgebra::points(2).unwrap();
        let delta = Comultiplication::left_trivial(&a);
        let tol = Tolerances::default();
        assert!(check_star_hom(&delta, &tol).passed());
        assert!(check_coassoc(&delta) <= 1e-15);
        let maps = galois_maps(&delta, &tol);
        assert!(maps.t1_bijective());
        assert!(!maps.t2_bijective());
        assert_eq!(maps.rank_t2, 2);
    }

    #[test]
    fn zero_h_is_not_injective() {
        let delta = z2();
        let report = check_injectivity_h(&delta, &delta.algebra().zero(), &Tolerances::default());
        assert!(!report.right_leg_injective() && !report.left_leg_injective());
    }

    #[test]
    fn z2_block_support() {
        let support = block_support(&z2(), &Tolerances::default());
        let triples: Vec<(usize, usize, usize)> = support.iter().map(|s| (s.source, s.left, s.right)).collect();
        assert_eq!(triples, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]);
        let m2 = MultiMatrixAlgebra::new(&[2]).unwrap();
        let single = block_support(&Comultiplication::left_trivial(&m2), &Tolerances::default());
        assert_eq!(single.len(), 1);
    }
}
