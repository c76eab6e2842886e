//! Numerical Wedderburn decomposition of a finite-dimensional C*-algebra
//! given by structure constants.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::MultiMatrixAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, Tolerances, ZERO};
use crate::report::worst;

/// Attempts with fresh random elements before giving up on a degenerate spectrum.
pub const RETRY_BUDGET: usize = 8;

/// An algebra with basis `b_0, ..., b_{d-1}`.
///
/// `left[i]` is the matrix of `x -> b_i x`; column `j` holds the coordinates
/// of `b_i b_j`. Column `i` of `star` holds the coordinates of `b_i*`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    left: Vec<CMatrix>,
    star: CMatrix,
}

impl StructureConstants {
    pub fn new(left: Vec<CMatrix>, star: CMatrix) -> Result<Self> {
        let d = left.len();
        if d == 0 {
            return Err(Error::ShapeMismatch("empty structure constants".into()));
        }
        if left.iter().any(|m| m.shape() != (d, d)) || star.shape() != (d, d) {
            return Err(Error::ShapeMismatch(format!(
                "structure constants of dimension {d} have inconsistent shapes"
            )));
        }
        Ok(StructureConstants { left, star })
    }

    /// `product(i, j)` gives the coordinates of `b_i b_j`.
    pub fn from_products(d: usize, product: impl Fn(usize, usize) -> CVector, star: CMatrix) -> Result<Self> {
        let left = (0..d)
            .map(|i| {
                let mut m = CMatrix::zeros(d, d);
                for j in 0..d {
                    m.set_column(j, &product(i, j));
                }
                m
            })
            .collect();
        Self::new(left, star)
    }

    /// Structure constants of a multi-matrix algebra in its canonical basis.
    pub fn of_algebra(algebra: &MultiMatrixAlgebra) -> Self {
        let d = algebra.dim();
        let basis = algebra.basis_elements();
        let left = basis.iter().map(|b| algebra.left_multiplication(b)).collect();
        let star = CMatrix::from_fn(d, d, |k, i| basis[i].adjoint().coords()[k]);
        StructureConstants { left, star }
    }

    pub fn dim(&self) -> usize {
        self.left.len()
    }

    pub fn left(&self, i: usize) -> &CMatrix {
        &self.left[i]
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult(&self, x: &CVector) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (i, l) in self.left.iter().enumerate() {
            if x[i] != ZERO {
                m += l * x[i];
            }
        }
        m
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult(&self, x: &CVector) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |k, j| (0..d).map(|i| self.left[j][(k, i)] * x[i]).sum())
    }

    pub fn mul(&self, x: &CVector, y: &CVector) -> CVector {
        self.left_mult(x) * y
    }

    pub fn adjoint(&self, x: &CVector) -> CVector {
        &self.star * x.conjugate()
    }

    /// Worst associativity residual over basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let d = self.dim();
        worst((0..d).flat_map(|i| {
            (0..d).map(move |j| {
                // L_{b_i b_j} = L_i L_j
                let bij = self.left[i].column(j).into_owned();
                linalg::matrix_residual(&self.left_mult(&bij), &(&self.left[i] * &self.left[j]))
            })
        }))
    }

    /// Worst residual of `(xy)* = y* x*` and `x** = x` over the basis.
    pub fn star_residual(&self) -> f64 {
        let d = self.dim();
        let involutive = linalg::matrix_residual(&(&self.star * self.star.conjugate()), &CMatrix::identity(d, d));
        let anti = worst((0..d).flat_map(|i| {
            (0..d).map(move |j| {
                let lhs = self.adjoint(&self.left[i].column(j).into_owned());
                let rhs = self.mul(&self.star.column(j).into_owned(), &self.star.column(i).into_owned());
                linalg::relative_residual(lhs.as_slice(), rhs.as_slice())
            })
        }));
        worst([involutive, anti])
    }

    /// The unit, if it exists.
    pub fn unit(&self, tol: &Tolerances) -> Option<CVector> {
        let d = self.dim();
        // sum_m u_m L_m = I as a linear system on vec(L_m)
        let mut system = CMatrix::zeros(d * d, d);
        for (m, l) in self.left.iter().enumerate() {
            system.set_column(m, &CVector::from_column_slice(l.as_slice()));
        }
        let target = CVector::from_column_slice(CMatrix::identity(d, d).as_slice());
        let u = linalg::solve(&system, &target, tol.rank, tol.residual).ok()?.solution;
        let right = linalg::matrix_residual(&self.right_mult(&u), &CMatrix::identity(d, d));
        (right <= tol.residual).then_some(u)
    }

    /// `t(x) = Tr(L_x)`.
    pub fn trace(&self, x: &CVector) -> linalg::C64 {
        self.left_mult(x).trace()
    }
}

/// Result of the decomposition.
///
/// `iso` maps input coordinates to canonical coordinates of `algebra`;
/// column `k` of `iso_inv` is the `k`-th matrix unit in input coordinates.
#[derive(Debug, Clone)]
pub struct Wedderburn {
    pub algebra: MultiMatrixAlgebra,
    pub iso: CMatrix,
    pub iso_inv: CMatrix,
    /// Worst residual of the *-isomorphism property.
    pub residual: f64,
}

struct Block {
    n: usize,
    /// Central idempotent, input coordinates.
    idempotent: CVector,
    /// Matrix units `E_ij` at `i*n + j`, input coordinates.
    units: Vec<CVector>,
}

/// Groups ascending values whose consecutive gaps stay below `gap`.
fn cluster(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Separation threshold for eigenvalue clusters of random elements of norm about one.
const CLUSTER_GAP: f64 = 1e-6;

pub fn wedderburn(sc: &StructureConstants, tol: &Tolerances, seed: u64) -> Result<Wedderburn> {
    let d = sc.dim();
    let assoc = sc.associativity_residual();
    if !(assoc <= tol.residual) {
        return Err(Error::NotAssociative(assoc));
    }
    let star = sc.star_residual();
    if !(star <= tol.residual) {
        return Err(Error::NotStar(star));
    }
    let unit = sc.unit(tol).ok_or(Error::NoUnit)?;

    // orthonormal coordinates for <x, y> = t(y* x)
    let basis: Vec<CVector> = (0..d)
        .map(|k| CVector::from_fn(d, |i, _| if i == k { linalg::ONE } else { ZERO }))
        .collect();
    let form = CMatrix::from_fn(d, d, |k, j| sc.trace(&sc.mul(&sc.adjoint(&basis[k]), &basis[j])));
    let form = (&form + form.adjoint()).scale(0.5);
    let k_fac = linalg::cholesky(&form).ok_or(Error::IndefiniteTraceForm)?;
    let to_ortho = k_fac.adjoint();
    let from_ortho = to_ortho
        .clone()
        .solve_upper_triangular(&CMatrix::identity(d, d))
        .ok_or(Error::IndefiniteTraceForm)?;
    let ortho_left = |x: &CVector| {
        let m = &to_ortho * sc.left_mult(x) * &from_ortho;
        (&m + m.adjoint()).scale(0.5)
    };

    // center: x b_i = b_i x for every i
    let mut commutator = CMatrix::zeros(d * d, d);
    for i in 0..d {
        let diff = sc.right_mult(&basis[i]) - &sc.left[i];
        commutator.view_mut((i * d, 0), (d, d)).copy_from(&diff);
    }
    let scale = sc.left.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let center = linalg::nullspace_scaled(&commutator, tol.rank, scale);
    let z_dim = center.ncols();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = None;
    for _ in 0..RETRY_BUDGET {
        if let Some(found) = try_blocks(sc, &center, &unit, &ortho_left, &to_ortho, &from_ortho, &mut rng, z_dim) {
            blocks = Some(found);
            break;
        }
    }
    let mut blocks = blocks.ok_or(Error::DegenerateSpectrum(RETRY_BUDGET))?;

    blocks.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| fingerprint_order(&b.idempotent, &a.idempotent)));
    let dims: Vec<usize> = blocks.iter().map(|b| b.n).collect();
    let algebra = MultiMatrixAlgebra::new(&dims)?;
    let units: Vec<CVector> = blocks.into_iter().flat_map(|b| b.units).collect();
    let iso_inv = linalg::hstack(&units, d);
    let iso = linalg::inverse(&iso_inv, tol.rank).ok_or(Error::IsoResidualTooLarge(f64::INFINITY))?;

    let target = StructureConstants::of_algebra(&algebra);
    let mut residual = 0.0f64;
    for i in 0..d {
        let xi = iso.column(i).into_owned();
        for j in 0..d {
            let lhs = &iso * sc.left[i].column(j);
            let rhs = target.mul(&xi, &iso.column(j).into_owned());
            residual = worst([residual, linalg::relative_residual(lhs.as_slice(), rhs.as_slice())]);
        }
        let lhs = &iso * sc.star.column(i);
        let rhs = target.adjoint(&xi);
        residual = worst([residual, linalg::relative_residual(lhs.as_slice(), rhs.as_slice())]);
    }
    if !(residual <= tol.residual) {
        return Err(Error::IsoResidualTooLarge(residual));
    }
    Ok(Wedderburn {
        algebra,
        iso,
        iso_inv,
        residual,
    })
}

/// Lexicographic order on coordinates, comparing real then imaginary parts.
fn fingerprint_order(a: &CVector, b: &CVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > 1e-6 {
                return p.partial_cmp(&q).unwrap_or(Ordering::Equal);
            }
        }
    }
    Ordering::Equal
}

#[allow(clippy::too_many_arguments)]
fn try_blocks(
    sc: &StructureConstants,
    center: &CMatrix,
    unit: &CVector,
    ortho_left: &impl Fn(&CVector) -> CMatrix,
    to_ortho: &CMatrix,
    from_ortho: &CMatrix,
    rng: &mut ChaCha8Rng,
    z_dim: usize,
) -> Option<Vec<Block>> {
    let d = sc.dim();
    let c0 = center * linalg::random_vector(rng, z_dim);
    let z = &c0 + sc.adjoint(&c0);
    let (values, vectors) = linalg::hermitian_eigen(&ortho_left(&z));
    let scale = values.iter().fold(1f64, |m, v| m.max(v.abs()));
    let clusters = cluster(&values, CLUSTER_GAP * scale);
    if clusters.len() != z_dim {
        return None;
    }
    let unit_o = to_ortho * unit;
    let mut blocks = Vec::with_capacity(z_dim);
    for range in clusters {
        let mult = range.len();
        let n = (mult as f64).sqrt().round() as usize;
        if n * n != mult {
            return None;
        }
        let v = vectors.columns(range.start, mult).into_owned();
        let e = from_ortho * (&v * (v.adjoint() * &unit_o));
        if n == 1 {
            blocks.push(Block {
                n,
                units: vec![e.clone()],
                idempotent: e,
            });
            continue;
        }
        // minimal projection from a random self-adjoint element of the corner
        let r = linalg::random_vector(rng, d);
        let y = sc.mul(&e, &(&r + sc.adjoint(&r)));
        let restricted = v.adjoint() * ortho_left(&y) * &v;
        let restricted = (&restricted + restricted.adjoint()).scale(0.5);
        let (yv, yvec) = linalg::hermitian_eigen(&restricted);
        let yscale = yv.iter().fold(1f64, |m, x| m.max(x.abs()));
        let first = cluster(&yv, CLUSTER_GAP * yscale).into_iter().next()?;
        if first.len() != n {
            return None;
        }
        let w = &v * yvec.columns(first.start, n);
        let e11 = from_ortho * (&w * (w.adjoint() * &unit_o));
        let t = sc.trace(&e11);
        if (t - c(n as f64, 0.0)).norm() > 1e-6 * n as f64 {
            return None;
        }
        // rows e_{1j} by pivoted Gram-Schmidt on e11 A e for <v, w> = t(v w*)/n
        let ip = |a: &CVector, b: &CVector| sc.trace(&sc.mul(a, &sc.adjoint(b))) / n as f64;
        let mut rows: Vec<CVector> = vec![e11.clone()];
        let mut candidates: Vec<CVector> = (0..mult).map(|k| sc.mul(&e11, &(from_ortho * v.column(k)))).collect();
        while rows.len() < n {
            let last = rows.last().expect("non-empty").clone();
            for cand in candidates.iter_mut() {
                let coeff = ip(cand, &last);
                *cand -= &last * coeff;
            }
            let (best, norm) = candidates
                .iter()
                .enumerate()
                .map(|(k, x)| (k, ip(x, x).re.max(0.0).sqrt()))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if norm < 1e-6 {
                break;
            }
            let next = candidates.swap_remove(best) / c(norm, 0.0);
            rows.push(next);
        }
        if rows.len() != n {
            return None;
        }
        let mut units = Vec::with_capacity(mult);
        for i in 0..n {
            let ui_star = sc.adjoint(&rows[i]);
            for j in 0..n {
                units.push(sc.mul(&ui_star, &rows[j]));
            }
        }
        blocks.push(Block { n, idempotent: e, units });
    }
    Some(blocks)
}
