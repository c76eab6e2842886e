//! The fundamental unitary `W` on `H (x) H` and the reduced dual algebra it generates.
//!
//! Operators on `H (x) H` are matrices in Kronecker order: the vector
//! `x (x) y` has entry `x[i] y[k]` at `i * d + k`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::axioms::{galois_maps, Comultiplication};
use crate::error::{Error, Result};
use crate::gns::GnsSpace;
use crate::linalg::{self, CMatrix, CVector, Tolerances};
use crate::report::{worst, Check};
use crate::structure::QuantumGroupStructure;
use crate::tensor::{tensor_elem, TensorElement, TensorLayout};
use crate::wedderburn::{wedderburn, StructureConstants, Wedderburn};

/// Largest `dim H` for which the Pentagon equation is checked as a full matrix identity.
pub const FULL_PENTAGON_MAX_DIM: usize = 8;
/// Random vectors used for the Pentagon equation above that size.
pub const PENTAGON_SAMPLES: usize = 1000;

#[derive(Debug, Clone)]
pub struct FundamentalUnitary {
    /// `d^2 x d^2` matrix in Kronecker order of GNS coordinates.
    pub w: CMatrix,
    pub dim: usize,
}

/// `W(Lambda(a) (x) Lambda(b)) = (Lambda (x) Lambda)(Delta(a)(1 (x) b))`.
pub fn build_w(structure: &QuantumGroupStructure, space: &GnsSpace, tol: &Tolerances) -> FundamentalUnitary {
    let maps = galois_maps(&structure.delta, tol);
    let layout = structure.delta.pair_layout();
    let t1 = layout.cols_to_kron(&layout.rows_to_kron(&maps.t1));
    let lam2 = linalg::kron(&space.lambda, &space.lambda);
    let lam2_inv = linalg::kron(&space.lambda_inv, &space.lambda_inv);
    FundamentalUnitary {
        w: lam2 * t1 * lam2_inv,
        dim: space.dim(),
    }
}

impl FundamentalUnitary {
    /// `(omega_{e_l, e_k} (x) id)(W)`: the block of `W` at first-leg indices `(k, l)`.
    pub fn first_leg_slice(&self, k: usize, l: usize) -> CMatrix {
        let d = self.dim;
        self.w.view((k * d, l * d), (d, d)).into_owned()
    }

    /// `(id (x) omega_{e_j, e_i})(W)`.
    pub fn second_leg_slice(&self, i: usize, j: usize) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d, d, |a, b| self.w[(a * d + i, b * d + j)])
    }

    /// `W` as an element of `M_d (x) M_d`.
    fn as_tensor(&self) -> TensorElement {
        let d = self.dim;
        let md = MultiMatrixAlgebra::new(&[d]).expect("d >= 1");
        let layout = TensorLayout::power(&md, 2);
        let dd = d * d;
        let mut kron = CVector::zeros(dd * dd);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        kron[(i * d + j) * dd + k * d + l] = self.w[(i * d + k, j * d + l)];
                    }
                }
            }
        }
        TensorElement::from_kron(layout, &kron)
    }

    /// Applies `W` on legs `legs` (0-based, increasing) of a vector in `H (x) H (x) H`.
    pub fn apply_on_legs(&self, legs: (usize, usize), v: &CVector) -> CVector {
        let d = self.dim;
        let (p, q) = legs;
        let r = 3 - p - q;
        let index = |x: [usize; 3]| (x[0] * d + x[1]) * d + x[2];
        let mut out = CVector::zeros(d * d * d);
        for a in 0..d {
            for b in 0..d {
                let row = a * d + b;
                for a2 in 0..d {
                    for b2 in 0..d {
                        let coeff = self.w[(row, a2 * d + b2)];
                        if coeff == linalg::ZERO {
                            continue;
                        }
                        for c in 0..d {
                            let mut dst = [0; 3];
                            let mut src = [0; 3];
                            dst[p] = a;
                            dst[q] = b;
                            dst[r] = c;
                            src[p] = a2;
                            src[q] = b2;
                            src[r] = c;
                            out[index(dst)] += coeff * v[index(src)];
                        }
                    }
                }
            }
        }
        out
    }

    /// `||W23 W12 - W12 W13 W23||`, as a full matrix identity for small `d`
    /// and on seeded random vectors otherwise.
    pub fn pentagon_residual(&self, seed: u64) -> (f64, bool) {
        if self.dim <= FULL_PENTAGON_MAX_DIM {
            let t = self.as_tensor();
            let w12 = t.embed_legs((1, 2), 3).expect("valid legs");
            let w13 = t.embed_legs((1, 3), 3).expect("valid legs");
            let w23 = t.embed_legs((2, 3), 3).expect("valid legs");
            let lhs = w23.mul(&w12);
            let rhs = w12.mul(&w13).mul(&w23);
            (lhs.residual(&rhs), true)
        } else {
            let d = self.dim;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst_r = 0.0f64;
            for _ in 0..PENTAGON_SAMPLES {
                let v = linalg::random_vector(&mut rng, d * d * d);
                let lhs = self.apply_on_legs((1, 2), &self.apply_on_legs((0, 1), &v));
                let rhs = self.apply_on_legs((0, 1), &self.apply_on_legs((0, 2), &self.apply_on_legs((1, 2), &v)));
                worst_r = worst([worst_r, linalg::relative_residual(lhs.as_slice(), rhs.as_slice())]);
            }
            (worst_r, false)
        }
    }
}

/// `(pi (x) pi)(x)` for `x` in `A (x) A`, in Kronecker order.
pub fn pi_pair(structure: &QuantumGroupStructure, space: &GnsSpace, x: &TensorElement) -> CMatrix {
    let layout = structure.delta.pair_layout();
    let product = layout.product();
    let m = product.left_multiplication(x.element());
    let m = layout.cols_to_kron(&layout.rows_to_kron(&m));
    let lam2 = linalg::kron(&space.lambda, &space.lambda);
    let lam2_inv = linalg::kron(&space.lambda_inv, &space.lambda_inv);
    lam2 * m * lam2_inv
}

pub fn check_matrix_elements(unitary: &FundamentalUnitary, structure: &QuantumGroupStructure, space: &GnsSpace) -> f64 {
    let d = unitary.dim;
    let algebra = structure.algebra();
    let pis: Vec<CMatrix> = algebra.basis_elements().iter().map(|a| space.pi_alg(a)).collect();
    let mut lhs = Vec::with_capacity(d * d * d * d);
    let mut rhs = Vec::with_capacity(d * d * d * d);
    for j in 0..d {
        for l in 0..d {
            // w(x) = <pi(x) e_j, e_l>
            let coords = CVector::from_fn(d, |k, _| pis[k][(l, j)]);
            let omega = crate::algebra::LinearFunctional::new(algebra, coords);
            let p = space.pi_dual(&omega);
            for i1 in 0..d {
                for i2 in 0..d {
                    lhs.push(unitary.w[(i2 * d + l, i1 * d + j)]);
                    rhs.push(p[(i2, i1)]);
                }
            }
        }
    }
    linalg::relative_residual(&lhs, &rhs)
}

pub fn check_w_identities(
    unitary: &FundamentalUnitary,
    structure: &QuantumGroupStructure,
    space: &GnsSpace,
    tol: &Tolerances,
    seed: u64,
) -> Vec<Check> {
    let d = unitary.dim;
    let w = &unitary.w;
    let algebra = structure.algebra();
    let delta = &structure.delta;
    let id_d = CMatrix::identity(d, d);
    let id2 = CMatrix::identity(d * d, d * d);
    let isometry = linalg::matrix_residual(&(w.adjoint() * w), &id2);
    let coisometry = linalg::matrix_residual(&(w * w.adjoint()), &id2);

    let intertwiner = worst(algebra.basis_elements().iter().map(|a| {
        let lhs = w * linalg::kron(&space.pi_alg(a), &id_d);
        let rhs = pi_pair(structure, space, &delta.apply(a)) * w;
        linalg::matrix_residual(&lhs, &rhs)
    }));

    let slices: Vec<Vec<CMatrix>> = (0..d)
        .map(|k| (0..d).map(|l| unitary.first_leg_slice(k, l)).collect())
        .collect();
    let mut in_algebra = 0.0f64;
    let mut coproduct = 0.0f64;
    for k in 0..d {
        for l in 0..d {
            let x = &slices[k][l];
            let m = &space.lambda_inv * x * &space.lambda;
            let a = algebra.element(&(&m * algebra.identity().coords()));
            in_algebra = worst([in_algebra, linalg::matrix_residual(&space.pi_alg(&a), x)]);
            let lhs = pi_pair(structure, space, &delta.apply(&a));
            let mut rhs = CMatrix::zeros(d * d, d * d);
            for mid in 0..d {
                rhs += linalg::kron(&slices[k][mid], &slices[mid][l]);
            }
            coproduct = worst([coproduct, linalg::matrix_residual(&lhs, &rhs)]);
        }
    }

    let (pentagon, full) = unitary.pentagon_residual(seed);

    let lh = space.vector(&structure.h);
    let fixed_in = linalg::kron(&id_d, &CMatrix::from_column_slice(d, 1, lh.as_slice()));
    let fixed = linalg::matrix_residual(&(w * &fixed_in), &fixed_in);

    let n = algebra.dim();
    let gammas = CMatrix::from_fn(d, n, |i, q| space.gamma(&algebra.coordinate_functional(q))[i]);
    let range_rank = linalg::rank(&linalg::kron(&id_d, &gammas), tol.rank);

    let matrix_elements = check_matrix_elements(unitary, structure, space);

    vec![
        Check::residual(
            "unitary.matrix_elements",
            "<W xi1 (x) eta1, xi2 (x) eta2> = <pi(w_{eta1,eta2}) xi1, xi2>",
            matrix_elements,
            tol.residual,
        ),
        Check::residual("unitary.isometry", "W* W = 1", isometry, tol.residual),
        Check::residual("unitary.coisometry", "W W* = 1", coisometry, tol.residual),
        Check::residual(
            "unitary.intertwiner",
            "W (pi(a) (x) 1) = (pi (x) pi)(Delta(a)) W",
            intertwiner,
            tol.residual,
        ),
        Check::residual(
            "unitary.slice_in_algebra",
            "(w (x) id)(W) lies in pi(A)",
            in_algebra,
            tol.residual,
        ),
        Check::residual(
            "unitary.comultiplication",
            "(id (x) Delta)(W) = W12 W13",
            coproduct,
            tol.residual,
        ),
        Check::residual("unitary.pentagon", "W23 W12 = W12 W13 W23", pentagon, tol.residual).with_detail(if full {
            "full matrix identity".to_string()
        } else {
            format!("{PENTAGON_SAMPLES} seeded random vectors")
        }),
        Check::residual(
            "unitary.fixed_vector",
            "W (xi (x) Lambda(h)) = xi (x) Lambda(h)",
            fixed,
            tol.residual,
        ),
        Check::flag(
            "unitary.range",
            "xi (x) Gamma(w) span H (x) H",
            range_rank == d * d,
            format!("rank {range_rank} of {}", d * d),
        ),
    ]
}

/// The algebra spanned by the slices `(id (x) w)(W)` with its comultiplication
/// `x -> W* (1 (x) x) W`.
#[derive(Debug, Clone)]
pub struct DualAlgebra {
    /// Hilbert-Schmidt orthonormal basis.
    pub basis: Vec<CMatrix>,
    pub structure: StructureConstants,
    /// `coproduct[a][(p, q)]`: coefficient of `x_p (x) x_q` in the image of `x_a`.
    pub coproduct: Vec<CMatrix>,
    pub closure_residual: f64,
    pub coproduct_residual: f64,
    pub coassociativity_residual: f64,
}

fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn dual_algebra(unitary: &FundamentalUnitary, tol: &Tolerances) -> Result<DualAlgebra> {
    let d = unitary.dim;
    let mut spanning = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            spanning.push(vectorize(&unitary.second_leg_slice(i, j)));
        }
    }
    let q = linalg::column_space(&linalg::hstack(&spanning, d * d), tol.rank);
    let m = q.ncols();
    let basis: Vec<CMatrix> = (0..m)
        .map(|a| CMatrix::from_column_slice(d, d, q.column(a).as_slice()))
        .collect();

    let mut products = Vec::with_capacity(m * m);
    for x in &basis {
        for y in &basis {
            products.push(vectorize(&(x * y)));
        }
    }
    let adjoints: Vec<CVector> = basis.iter().map(|x| vectorize(&x.adjoint())).collect();
    let prod_m = linalg::hstack(&products, d * d);
    let adj_m = linalg::hstack(&adjoints, d * d);
    let closure_residual = worst([
        linalg::containment_residual(&prod_m, &q),
        linalg::containment_residual(&adj_m, &q),
    ]);
    if !(closure_residual <= tol.residual) {
        return Err(Error::DualNotClosed(closure_residual));
    }
    let coeffs = q.adjoint() * prod_m;
    let left = (0..m)
        .map(|i| CMatrix::from_fn(m, m, |k, j| coeffs[(k, i * m + j)]))
        .collect();
    let star = q.adjoint() * adj_m;
    let structure = StructureConstants::new(left, star)?;

    let w = &unitary.w;
    let id_d = CMatrix::identity(d, d);
    let mut coproduct = Vec::with_capacity(m);
    let mut coproduct_residual = 0.0f64;
    for x in &basis {
        let image = w.adjoint() * linalg::kron(&id_d, x) * w;
        // partial[p] = sum_{i,j} conj(x_p[i,j]) image[(i,.),(j,.)]
        let partial: Vec<CMatrix> = basis
            .iter()
            .map(|xp| {
                let mut acc = CMatrix::zeros(d, d);
                for i in 0..d {
                    for j in 0..d {
                        let c = xp[(i, j)].conj();
                        if c != linalg::ZERO {
                            acc += image.view((i * d, j * d), (d, d)) * c;
                        }
                    }
                }
                acc
            })
            .collect();
        let coeff = CMatrix::from_fn(m, m, |p, qq| {
            basis[qq].iter().zip(partial[p].iter()).map(|(a, b)| a.conj() * b).sum()
        });
        let mut rebuilt = CMatrix::zeros(d * d, d * d);
        for p in 0..m {
            for qq in 0..m {
                if coeff[(p, qq)] != linalg::ZERO {
                    rebuilt += linalg::kron(&basis[p], &basis[qq]) * coeff[(p, qq)];
                }
            }
        }
        coproduct_residual = worst([coproduct_residual, linalg::matrix_residual(&image, &rebuilt)]);
        coproduct.push(coeff);
    }

    let mut coassociativity_residual = 0.0f64;
    for ck in &coproduct {
        let mut lhs = vec![linalg::ZERO; m * m * m];
        let mut rhs = vec![linalg::ZERO; m * m * m];
        for a in 0..m {
            for b in 0..m {
                let c = ck[(a, b)];
                if c == linalg::ZERO {
                    continue;
                }
                for p in 0..m {
                    for qq in 0..m {
                        // (D (x) id): D(x_a) (x) x_b
                        lhs[(p * m + qq) * m + b] += c * coproduct[a][(p, qq)];
                        // (id (x) D): x_a (x) D(x_b)
                        rhs[(a * m + p) * m + qq] += c * coproduct[b][(p, qq)];
                    }
                }
            }
        }
        coassociativity_residual = worst([coassociativity_residual, linalg::relative_residual(&lhs, &rhs)]);
    }

    Ok(DualAlgebra {
        basis,
        structure,
        coproduct,
        closure_residual,
        coproduct_residual,
        coassociativity_residual,
    })
}

impl DualAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn decompose(&self, tol: &Tolerances, seed: u64) -> Result<Wedderburn> {
        wedderburn(&self.structure, tol, seed)
    }

    /// The comultiplication carried to the block algebra of a decomposition.
    pub fn transport(&self, w: &Wedderburn) -> Result<Comultiplication> {
        let m = self.dim();
        let algebra = &w.algebra;
        let images: Vec<AlgebraElement> = (0..m).map(|a| algebra.element(&w.iso.column(a).into_owned())).collect();
        let layout = TensorLayout::power(algebra, 2);
        let mut pairs = Vec::with_capacity(m * m);
        for p in 0..m {
            for q in 0..m {
                pairs.push(tensor_elem(&images[p], &images[q]));
            }
        }
        Comultiplication::from_fn(algebra, |k| {
            let mut acc = TensorElement::zero(layout.clone());
            for (a, coeff) in self.coproduct.iter().enumerate() {
                let c = w.iso_inv[(a, k)];
                if c == linalg::ZERO {
                    continue;
                }
                for p in 0..m {
                    for q in 0..m {
                        let x = coeff[(p, q)] * c;
                        if x != linalg::ZERO {
                            acc = acc.add(&pairs[p * m + q].scale(x));
                        }
                    }
                }
            }
            acc
        })
    }

    pub fn checks(&self, expected_dim: usize, tol: &Tolerances) -> Vec<Check> {
        vec![
            Check::flag(
                "dual.dimension",
                "dim of span{(id (x) w)(W)} = dim A",
                self.dim() == expected_dim,
                format!("{} vs {expected_dim}", self.dim()),
            ),
            Check::residual(
                "dual.closed",
                "dual closed under product and adjoint",
                self.closure_residual,
                tol.residual,
            ),
            Check::residual(
                "dual.comultiplication",
                "W* (1 (x) x) W lies in dual (x) dual",
                self.coproduct_residual,
                tol.residual,
            ),
            Check::residual(
                "dual.coassociative",
                "dual comultiplication is coassociative",
                self.coassociativity_residual,
                tol.residual,
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_function_algebra, build_group_algebra};
    use crate::gns::gns;
    use crate::haar::haar_weight;
    use crate::magma::{cyclic, symmetric3};
    use crate::QuantumGroupFile;

    fn pipeline(file: QuantumGroupFile) -> (QuantumGroupStructure, GnsSpace, FundamentalUnitary) {
        let tol = Tolerances::default();
        let s = QuantumGroupStructure::derive(&file.comultiplication().unwrap(), &tol)
            .unwrap()
            .0;
        let space = gns(&s, &haar_weight(&s, &tol).unwrap()).unwrap();
        let w = build_w(&s, &space, &tol);
        (s, space, w)
    }

    #[test]
    fn identities_hold_on_s3() {
        let tol = Tolerances::default();
        for file in [
            build_function_algebra(&symmetric3()).unwrap(),
            build_group_algebra(&symmetric3(), &tol, 0).unwrap(),
        ] {
            let (s, space, w) = pipeline(file);
            let checks = check_w_identities(&w, &s, &space, &tol, 1);
            assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        }
    }

    #[test]
    fn sampled_pentagon_above_the_full_size() {
        let (_, _, w) = pipeline(build_function_algebra(&cyclic(9)).unwrap());
        let (residual, full) = w.pentagon_residual(4);
        assert!(!full);
        assert!(residual < 1e-12);
    }

    #[test]
    fn sampled_pentagon_detects_a_broken_unitary() {
        let (_, _, mut w) = pipeline(build_function_algebra(&cyclic(9)).unwrap());
        w.w.swap_columns(0, 1);
        assert!(w.pentagon_residual(4).0 > 1e-3);
    }

    #[test]
    fn dual_of_abelian_function_algebra_is_commutative() {
        let tol = Tolerances::default();
        let (_, _, w) = pipeline(build_function_algebra(&cyclic(3)).unwrap());
        let dual = dual_algebra(&w, &tol).unwrap();
        assert_eq!(dual.dim(), 3);
        assert!(dual.checks(3, &tol).iter().all(|c| c.passed));
        let blocks = dual.decompose(&tol, 0).unwrap();
        assert_eq!(blocks.algebra.block_dims(), &[1, 1, 1]);
    }
}
