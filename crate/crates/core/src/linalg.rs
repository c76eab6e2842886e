//! Dense complex linear algebra kernels shared by every other module.
//!
//! Everything is built on the singular value decomposition and the Hermitian
//! eigendecomposition from `nalgebra`. Singular values below
//! `sigma_max * max(rows, cols) * rank_tol` are treated as zero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default relative residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default relative threshold on singular values.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Tolerances used by every check.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Relative residual threshold.
    pub residual: f64,
    /// Relative singular value threshold.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: DEFAULT_TOL,
            rank: DEFAULT_RANK_TOL,
        }
    }
}

pub fn frobenius(values: &[C64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||lhs - rhs|| / max(1, ||lhs||, ||rhs||)` over flat coefficient slices.
pub fn relative_residual(lhs: &[C64], rhs: &[C64]) -> f64 {
    assert_eq!(lhs.len(), rhs.len(), "residual of differently sized operands");
    let diff = lhs.iter().zip(rhs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    diff / 1f64.max(frobenius(lhs)).max(frobenius(rhs))
}

pub fn matrix_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    assert_eq!(lhs.shape(), rhs.shape(), "residual of differently shaped matrices");
    relative_residual(lhs.as_slice(), rhs.as_slice())
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// Thin SVD factors: `m = u * diag(sigma) * v^H`.
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// One-sided Jacobi SVD. Accurate to high relative precision, including for
/// clustered singular values.
pub fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Svd {
            u: CMatrix::zeros(rows, 0),
            sigma: Vec::new(),
            v: CMatrix::zeros(cols, 0),
        };
    }
    if rows < cols {
        let t = svd(&m.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let mut a = m.clone();
    let mut v = CMatrix::identity(cols, cols);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for x in [&mut a, &mut v] {
                    for r in 0..x.nrows() {
                        let xp = x[(r, p)];
                        let xq = x[(r, q)] * phase.conj();
                        x[(r, p)] = xp * cs - xq * sn;
                        x[(r, q)] = xp * sn + xq * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|k| a.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let u = CMatrix::from_fn(rows, cols, |r, k| {
        let s = sigma[k];
        if s > 0.0 {
            a[(r, order[k])] / s
        } else {
            ZERO
        }
    });
    Svd {
        u,
        sigma,
        v: select_columns(&v, &order),
    }
}

fn significant(m: &CMatrix, s: &Svd, rank_tol: f64, floor: f64) -> Vec<usize> {
    let smax = s.sigma.iter().copied().fold(floor, f64::max);
    if smax == 0.0 {
        return Vec::new();
    }
    let thr = smax * (m.nrows().max(m.ncols()) as f64) * rank_tol;
    (0..s.sigma.len()).filter(|&i| s.sigma[i] > thr).collect()
}

pub fn rank(m: &CMatrix, rank_tol: f64) -> usize {
    let s = svd(m);
    significant(m, &s, rank_tol, 0.0).len()
}

fn select_columns(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), idx.len(), |r, k| m[(r, idx[k])])
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &CMatrix, rank_tol: f64) -> CMatrix {
    let s = svd(m);
    let idx = significant(m, &s, rank_tol, 0.0);
    select_columns(&s.u, &idx)
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn nullspace(m: &CMatrix, rank_tol: f64) -> CMatrix {
    nullspace_scaled(m, rank_tol, 0.0)
}

/// As [`nullspace`], measuring singular values against at least `scale`
/// instead of the largest one, so that a matrix of pure rounding noise is
/// treated as zero.
pub fn nullspace_scaled(m: &CMatrix, rank_tol: f64, scale: f64) -> CMatrix {
    let n = m.ncols();
    let s = svd(m);
    let idx = significant(m, &s, rank_tol, scale);
    let row_space = select_columns(&s.v, &idx);
    orthogonal_complement(&row_space, n)
}

/// Orthonormal basis of the complement of the span of the orthonormal columns of `basis`.
pub fn orthogonal_complement(basis: &CMatrix, n: usize) -> CMatrix {
    let r = basis.ncols();
    if r == n {
        return CMatrix::zeros(n, 0);
    }
    if r == 0 {
        return CMatrix::identity(n, n);
    }
    let projector = CMatrix::identity(n, n) - basis * basis.adjoint();
    let (values, vectors) = hermitian_eigen(&projector);
    // eigenvalues of a projector are 0 or 1; the top n - r span the complement
    let idx: Vec<usize> = (0..n).filter(|&i| values[i] > 0.5).collect();
    select_columns(&vectors, &idx)
}

/// Least-squares solution with its absolute residual `||m x - y||`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: CVector,
    pub residual: f64,
}

/// Minimum-norm least-squares solution through the truncated pseudo-inverse.
pub fn least_squares(m: &CMatrix, y: &CVector, rank_tol: f64) -> LeastSquares {
    let s = svd(m);
    let idx = significant(m, &s, rank_tol, 0.0);
    let mut x = CVector::zeros(m.ncols());
    for &i in &idx {
        let coeff = s.u.column(i).dotc(y) / s.sigma[i];
        x += s.v.column(i) * coeff;
    }
    let residual = (m * &x - y).norm();
    LeastSquares { solution: x, residual }
}

/// Solves `m x = y`; fails when the residual exceeds `res_tol * max(1, ||y||)`.
pub fn solve(m: &CMatrix, y: &CVector, rank_tol: f64, res_tol: f64) -> Result<LeastSquares> {
    let ls = least_squares(m, y, rank_tol);
    if ls.residual > res_tol * 1f64.max(y.norm()) {
        return Err(Error::NoSolution { residual: ls.residual });
    }
    Ok(ls)
}

/// Inverse of a square matrix, or `None` when it is rank deficient at `rank_tol`.
pub fn inverse(m: &CMatrix, rank_tol: f64) -> Option<CMatrix> {
    assert!(m.is_square());
    let n = m.nrows();
    let s = svd(m);
    if significant(m, &s, rank_tol, 0.0).len() < n {
        return None;
    }
    let mut inv = CMatrix::zeros(n, n);
    for i in 0..n {
        let scaled = s.v.column(i) / real(s.sigma[i]);
        inv += scaled * s.u.column(i).adjoint();
    }
    Some(inv)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let herm = (m + m.adjoint()) * real(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = select_columns(&eig.eigenvectors, &order);
    (values, vectors)
}

/// Lower-triangular `l` with `m = l l^H`, or `None` if `m` is not positive definite.
pub fn cholesky(m: &CMatrix) -> Option<CMatrix> {
    assert!(m.is_square());
    let n = m.nrows();
    let herm = (m + m.adjoint()) * real(0.5);
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = herm[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if !(pivot > 0.0) {
            return None;
        }
        let d = pivot.sqrt();
        l[(j, j)] = real(d);
        for i in j + 1..n {
            let mut acc = herm[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / d;
        }
    }
    Some(l)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    svd(m).sigma.into_iter().fold(0.0, f64::max)
}

pub fn trace_norm(m: &CMatrix) -> f64 {
    svd(m).sigma.into_iter().sum()
}

/// Largest relative distance of the columns of `vectors` from the span of the
/// orthonormal columns of `basis`.
pub fn containment_residual(vectors: &CMatrix, basis: &CMatrix) -> f64 {
    let projected = basis * (basis.adjoint() * vectors);
    (0..vectors.ncols())
        .map(|k| {
            let v = vectors.column(k);
            (v - projected.column(k)).norm() / 1f64.max(v.norm())
        })
        .fold(0.0, f64::max)
}

/// Vector with entries uniform in `[-1, 1] + i[-1, 1]`.
pub fn random_vector(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Stacks column vectors into a matrix.
pub fn hstack(columns: &[CVector], rows: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, columns.len());
    for (k, col) in columns.iter().enumerate() {
        m.set_column(k, col);
    }
    m
}
