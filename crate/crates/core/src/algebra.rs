//! Multi-matrix *-algebras, their elements and linear functionals.
//!
//! The canonical basis of `M_{n_1} + ... + M_{n_k}` is the family of matrix
//! units `e^(a)_{ij}`, enumerated block by block and row-major inside each
//! block. Every matrix representation in this crate is written against that
//! order.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE};

#[derive(Debug, PartialEq, Eq)]
struct Layout {
    block_dims: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

/// A finite direct sum of full complex matrix algebras.
///
/// Cheap to clone; equality compares block dimensions.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiMatrixAlgebra {
    layout: Arc<Layout>,
}

impl fmt::Debug for MultiMatrixAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiMatrixAlgebra{:?}", self.layout.block_dims)
    }
}

/// Position of a canonical basis element: block, row, column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixUnit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl MultiMatrixAlgebra {
    pub fn new(block_dims: &[usize]) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::EmptyBlockList);
        }
        if let Some(pos) = block_dims.iter().position(|&n| n == 0) {
            return Err(Error::NonPositiveDim(pos));
        }
        let mut offsets = Vec::with_capacity(block_dims.len());
        let mut dim = 0;
        for &n in block_dims {
            offsets.push(dim);
            dim += n * n;
        }
        Ok(MultiMatrixAlgebra {
            layout: Arc::new(Layout {
                block_dims: block_dims.to_vec(),
                offsets,
                dim,
            }),
        })
    }

    /// The commutative algebra of functions on `n` points.
    pub fn points(n: usize) -> Result<Self> {
        Self::new(&vec![1; n])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.layout.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.layout.block_dims.len()
    }

    pub fn block_dim(&self, block: usize) -> usize {
        self.layout.block_dims[block]
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.layout.offsets[block]
    }

    /// Total dimension `sum n_a^2`.
    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn is_commutative(&self) -> bool {
        self.layout.block_dims.iter().all(|&n| n == 1)
    }

    pub fn basis_index(&self, unit: MatrixUnit) -> usize {
        let n = self.block_dim(unit.block);
        debug_assert!(unit.row < n && unit.col < n);
        self.block_offset(unit.block) + unit.row * n + unit.col
    }

    pub fn matrix_unit(&self, index: usize) -> MatrixUnit {
        assert!(index < self.dim(), "basis index {index} out of range");
        let block = match self.layout.offsets.binary_search(&index) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        let n = self.block_dim(block);
        let local = index - self.block_offset(block);
        MatrixUnit {
            block,
            row: local / n,
            col: local % n,
        }
    }

    /// Tensor product algebra, blocks indexed by label pairs in lexicographic order.
    pub fn tensor(&self, other: &MultiMatrixAlgebra) -> MultiMatrixAlgebra {
        let dims: Vec<usize> = self
            .block_dims()
            .iter()
            .flat_map(|&n| other.block_dims().iter().map(move |&m| n * m))
            .collect();
        MultiMatrixAlgebra::new(&dims).expect("tensor of valid algebras is valid")
    }

    pub fn tensor_power(&self, n: usize) -> MultiMatrixAlgebra {
        assert!(n >= 1);
        (1..n).fold(self.clone(), |acc, _| acc.tensor(self))
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.block_dims().iter().map(|&n| CMatrix::identity(n, n)).collect(),
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.block_dims().iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    /// The canonical basis element with the given index.
    pub fn basis(&self, index: usize) -> AlgebraElement {
        let unit = self.matrix_unit(index);
        let mut e = self.zero();
        e.blocks[unit.block][(unit.row, unit.col)] = ONE;
        e
    }

    pub fn basis_elements(&self) -> Vec<AlgebraElement> {
        (0..self.dim()).map(|k| self.basis(k)).collect()
    }

    pub fn element(&self, coords: &CVector) -> AlgebraElement {
        AlgebraElement::from_coords(self, coords)
    }

    /// Matrix of left multiplication by `a` on coordinates.
    pub fn left_multiplication(&self, a: &AlgebraElement) -> CMatrix {
        let cols: Vec<CVector> = (0..self.dim()).map(|k| (a * &self.basis(k)).coords()).collect();
        linalg::hstack(&cols, self.dim())
    }

    /// Coordinate dual basis functional `e_k^*`.
    pub fn coordinate_functional(&self, index: usize) -> LinearFunctional {
        let mut coords = CVector::zeros(self.dim());
        coords[index] = ONE;
        LinearFunctional::new(self, coords)
    }
}

/// One complex matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    algebra: MultiMatrixAlgebra,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(algebra: &MultiMatrixAlgebra, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() || blocks.iter().zip(algebra.block_dims()).any(|(b, &n)| b.shape() != (n, n)) {
            return Err(Error::ShapeMismatch(format!(
                "blocks do not match block dimensions {:?}",
                algebra.block_dims()
            )));
        }
        Ok(AlgebraElement {
            algebra: algebra.clone(),
            blocks,
        })
    }

    pub fn from_coords(algebra: &MultiMatrixAlgebra, coords: &CVector) -> Self {
        assert_eq!(coords.len(), algebra.dim(), "coordinate vector length");
        let blocks = algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let off = algebra.block_offset(b);
                CMatrix::from_fn(n, n, |i, j| coords[off + i * n + j])
            })
            .collect();
        AlgebraElement {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &CMatrix {
        &self.blocks[b]
    }

    pub fn coords(&self) -> CVector {
        let mut v = CVector::zeros(self.algebra.dim());
        for (b, m) in self.blocks.iter().enumerate() {
            let n = m.nrows();
            let off = self.algebra.block_offset(b);
            for i in 0..n {
                for j in 0..n {
                    v[off + i * n + j] = m[(i, j)];
                }
            }
        }
        v
    }

    pub fn try_mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        })
    }

    fn zip_with(&self, other: &AlgebraElement, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|m| m * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }

    /// C*-norm: largest operator norm over blocks.
    pub fn operator_norm(&self) -> f64 {
        self.blocks.iter().map(linalg::operator_norm).fold(0.0, f64::max)
    }

    /// Sum of the block traces.
    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|m| m.trace()).sum()
    }

    /// Relative residual against another element of the same algebra.
    pub fn residual(&self, other: &AlgebraElement) -> f64 {
        assert_eq!(self.algebra, other.algebra, "residual across algebras");
        linalg::relative_residual(self.coords().as_slice(), other.coords().as_slice())
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    /// Panics on algebra mismatch; use [`AlgebraElement::try_mul`] for a checked product.
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("product of elements from different algebras")
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("sum of elements from different algebras")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("difference of elements from different algebras")
    }
}

/// A linear functional given by its values on the canonical basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional {
    algebra: MultiMatrixAlgebra,
    coords: CVector,
}

impl LinearFunctional {
    pub fn new(algebra: &MultiMatrixAlgebra, coords: CVector) -> Self {
        assert_eq!(coords.len(), algebra.dim(), "functional coordinate length");
        LinearFunctional {
            algebra: algebra.clone(),
            coords,
        }
    }

    pub fn zero(algebra: &MultiMatrixAlgebra) -> Self {
        Self::new(algebra, CVector::zeros(algebra.dim()))
    }

    /// The functional `a -> sum_a Tr(rho_a a_a)`.
    pub fn from_densities(algebra: &MultiMatrixAlgebra, densities: &[CMatrix]) -> Result<Self> {
        let rho = AlgebraElement::from_blocks(algebra, densities.iter().map(|m| m.transpose()).collect())?;
        Ok(Self::new(algebra, rho.coords()))
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }

    pub fn apply(&self, a: &AlgebraElement) -> C64 {
        self.try_apply(a).expect("functional applied to element of another algebra")
    }

    pub fn try_apply(&self, a: &AlgebraElement) -> Result<C64> {
        if a.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.coords.iter().zip(a.coords().iter()).map(|(w, x)| w * x).sum())
    }

    /// Density matrix `rho_a` of block `b`.
    pub fn density(&self, b: usize) -> CMatrix {
        let n = self.algebra.block_dim(b);
        let off = self.algebra.block_offset(b);
        CMatrix::from_fn(n, n, |i, j| self.coords[off + j * n + i])
    }

    /// True when every density is positive semidefinite up to `tol` (relative).
    pub fn is_positive(&self, tol: f64) -> bool {
        (0..self.algebra.num_blocks()).all(|b| {
            let rho = self.density(b);
            let herm = linalg::matrix_residual(&rho, &rho.adjoint()) <= tol;
            let (values, _) = linalg::hermitian_eigen(&rho);
            let scale = values.iter().map(|v| v.abs()).fold(1.0, f64::max);
            herm && values.iter().all(|&v| v >= -tol * scale)
        })
    }

    /// Norm as an element of the dual C*-algebra: sum of trace norms of the densities.
    pub fn dual_norm(&self) -> f64 {
        (0..self.algebra.num_blocks())
            .map(|b| linalg::trace_norm(&self.density(b)))
            .sum()
    }

    /// `x -> conj(omega(x*))`.
    pub fn bar(&self) -> LinearFunctional {
        let coords = CVector::from_fn(self.algebra.dim(), |k, _| {
            let unit = self.algebra.matrix_unit(k);
            let swapped = self.algebra.basis_index(MatrixUnit {
                block: unit.block,
                row: unit.col,
                col: unit.row,
            });
            self.coords[swapped].conj()
        });
        LinearFunctional::new(&self.algebra, coords)
    }

    /// `x -> omega(x b)`.
    pub fn translate_right(&self, b: &AlgebraElement) -> LinearFunctional {
        let coords = CVector::from_fn(self.algebra.dim(), |k, _| self.apply(&(&self.algebra.basis(k) * b)));
        LinearFunctional::new(&self.algebra, coords)
    }

    /// `x -> omega(b x)`.
    pub fn translate_left(&self, b: &AlgebraElement) -> LinearFunctional {
        let coords = CVector::from_fn(self.algebra.dim(), |k, _| self.apply(&(b * &self.algebra.basis(k))));
        LinearFunctional::new(&self.algebra, coords)
    }

    /// Precomposition with a linear map given as a matrix on coordinates: `x -> omega(M x)`.
    pub fn compose(&self, map: &CMatrix) -> LinearFunctional {
        LinearFunctional::new(&self.algebra, map.transpose() * &self.coords)
    }

    pub fn add(&self, other: &LinearFunctional) -> LinearFunctional {
        assert_eq!(self.algebra, other.algebra);
        LinearFunctional::new(&self.algebra, &self.coords + &other.coords)
    }

    pub fn sub(&self, other: &LinearFunctional) -> LinearFunctional {
        assert_eq!(self.algebra, other.algebra);
        LinearFunctional::new(&self.algebra, &self.coords - &other.coords)
    }

    pub fn scale(&self, s: C64) -> LinearFunctional {
        LinearFunctional::new(&self.algebra, &self.coords * s)
    }

    pub fn residual(&self, other: &LinearFunctional) -> f64 {
        linalg::relative_residual(self.coords.as_slice(), other.coords.as_slice())
    }
}
