//! The GNS space of the Haar weight and the regular representations of `A` and `A*`.
//!
//! Vectors of `H` are written in the coordinates `Lambda(a) = L^H a`, where
//! `G = L L^H` is the Cholesky factorization of the Gram matrix. In these
//! coordinates the inner product is the standard one, `<x, y> = y^H x`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, LinearFunctional};
use crate::error::{Error, Result};
use crate::haar::{gram_matrix, HaarWeight};
use crate::linalg::{self, CMatrix, CVector, Tolerances};
use crate::report::{worst, Check};
use crate::structure::QuantumGroupStructure;

#[derive(Debug, Clone)]
pub struct GnsSpace {
    pub gram: CMatrix,
    /// Lower triangular Cholesky factor of the Gram matrix.
    pub l: CMatrix,
    /// `L^H`, the coordinate map `a -> Lambda(a)`.
    pub lambda: CMatrix,
    /// `(L^H)^-1`.
    pub lambda_inv: CMatrix,
    /// `slices[q][:, k]` holds the coordinates of `(id (x) e_q^*)Delta(e_k)`.
    slices: Vec<CMatrix>,
    /// Matrix of `w -> (id (x) w)Delta(h)`.
    r: CMatrix,
}

pub fn gns(structure: &QuantumGroupStructure, haar: &HaarWeight) -> Result<GnsSpace> {
    let algebra = structure.algebra();
    let n = algebra.dim();
    let gram = gram_matrix(algebra, &haar.phi);
    // symmetrize rounding before factoring
    let gram = (&gram + gram.adjoint()).scale(0.5);
    let l = linalg::cholesky(&gram).ok_or(Error::GramNotPD)?;
    let lambda = l.adjoint();
    let lambda_inv = lambda
        .clone()
        .solve_upper_triangular(&CMatrix::identity(n, n))
        .ok_or(Error::GramNotPD)?;
    let layout = structure.delta.pair_layout();
    let kron = layout.rows_to_kron(structure.delta.matrix());
    let slices = (0..n).map(|q| CMatrix::from_fn(n, n, |p, k| kron[(p * n + q, k)])).collect();
    Ok(GnsSpace {
        gram,
        l,
        lambda,
        lambda_inv,
        slices,
        r: haar.r.clone(),
    })
}

impl GnsSpace {
    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    /// `Lambda(a)`.
    pub fn vector(&self, a: &AlgebraElement) -> CVector {
        &self.lambda * a.coords()
    }

    /// Operator of left multiplication by `a` on `H`.
    pub fn pi_alg(&self, a: &AlgebraElement) -> CMatrix {
        let m = a.algebra().left_multiplication(a);
        &self.lambda * m * &self.lambda_inv
    }

    /// `pi(w) Lambda(a) = Lambda((id (x) w)Delta(a))`.
    pub fn pi_dual(&self, omega: &LinearFunctional) -> CMatrix {
        let n = self.dim();
        let mut p = CMatrix::zeros(n, n);
        for (q, s) in self.slices.iter().enumerate() {
            let w = omega.coords()[q];
            if w != linalg::ZERO {
                p += s * w;
            }
        }
        &self.lambda * p * &self.lambda_inv
    }

    /// `Gamma(w) = Lambda((id (x) w)Delta(h))`.
    pub fn gamma(&self, omega: &LinearFunctional) -> CVector {
        &self.lambda * (&self.r * omega.coords())
    }

    /// `w(x) = <pi(x) eta1, eta2>`.
    pub fn vector_functional(&self, structure: &QuantumGroupStructure, eta1: &CVector, eta2: &CVector) -> LinearFunctional {
        let algebra = structure.algebra();
        let coords = CVector::from_fn(algebra.dim(), |k, _| {
            let op = self.pi_alg(&algebra.basis(k));
            eta2.dotc(&(op * eta1))
        });
        LinearFunctional::new(algebra, coords)
    }
}

/// Random functional with coordinates uniform in `[-1, 1] + i[-1, 1]`.
pub fn random_functional(structure: &QuantumGroupStructure, rng: &mut impl Rng) -> LinearFunctional {
    let n = structure.algebra().dim();
    LinearFunctional::new(structure.algebra(), linalg::random_vector(rng, n))
}

pub fn check_gns_identities(
    structure: &QuantumGroupStructure,
    haar: &HaarWeight,
    space: &GnsSpace,
    tol: &Tolerances,
    seed: u64,
) -> Vec<Check> {
    let algebra = structure.algebra();
    let n = algebra.dim();
    let basis = algebra.basis_elements();
    let duals: Vec<LinearFunctional> = (0..n).map(|k| algebra.coordinate_functional(k)).collect();
    let phi = &haar.phi;
    let rel = |a: linalg::C64, b: linalg::C64| (a - b).norm() / 1f64.max(a.norm()).max(b.norm());

    let mut inner = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let lhs = space.vector(&basis[p]).dotc(&space.vector(&basis[q]));
            // <Lambda(e_q), Lambda(e_p)> = phi(e_p* e_q)
            let rhs = phi.apply(&(&basis[p].adjoint() * &basis[q]));
            inner = worst([inner, rel(lhs, rhs)]);
        }
    }

    let pis: Vec<CMatrix> = basis.iter().map(|a| space.pi_alg(a)).collect();
    let identity = CMatrix::identity(n, n);
    let unital = linalg::matrix_residual(&space.pi_alg(&algebra.identity()), &identity);
    let mut alg_mult = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let lhs = space.pi_alg(&(&basis[p] * &basis[q]));
            alg_mult = worst([alg_mult, linalg::matrix_residual(&lhs, &(&pis[p] * &pis[q]))]);
        }
    }
    let alg_star = worst((0..n).map(|k| linalg::matrix_residual(&space.pi_alg(&basis[k].adjoint()), &pis[k].adjoint())));

    let slices: Vec<AlgebraElement> = duals.iter().map(|w| algebra.element(&(&space.r * w.coords()))).collect();
    let stars: Vec<LinearFunctional> = duals.iter().map(|w| structure.involution(w)).collect();
    let gammas: Vec<CVector> = duals.iter().map(|w| space.gamma(w)).collect();
    let pi_duals: Vec<CMatrix> = duals.iter().map(|w| space.pi_dual(w)).collect();

    let mut scalar = 0.0f64;
    let mut action = 0.0f64;
    let mut conv_hom = 0.0f64;
    for (i1, w1) in duals.iter().enumerate() {
        for (i2, w2) in duals.iter().enumerate() {
            let lhs = phi.apply(&(&slices[i2].adjoint() * &slices[i1]));
            let rhs = structure.convolve(&stars[i2], w1).apply(&structure.h);
            scalar = worst([scalar, rel(lhs, rhs)]);

            // w = w1 acting on Gamma(w2)
            let lhs = &pi_duals[i1] * &gammas[i2];
            let rhs = space.gamma(&structure.convolve(w1, w2));
            action = worst([action, linalg::relative_residual(lhs.as_slice(), rhs.as_slice())]);

            let lhs = space.pi_dual(&structure.convolve(w1, w2));
            conv_hom = worst([conv_hom, linalg::matrix_residual(&lhs, &(&pi_duals[i1] * &pi_duals[i2]))]);
        }
    }

    let dh = structure.delta.apply(&structure.h);
    let mut matrix_element = 0.0f64;
    for (k, a) in basis.iter().enumerate() {
        let adh = structure.delta.tensor_one(a).mul(&dh);
        for i1 in 0..n {
            let v = &pis[k] * &gammas[i1];
            for i2 in 0..n {
                let lhs = gammas[i2].dotc(&v);
                let rhs = adh.pair(&[&stars[i2], &duals[i1]]).expect("two legs");
                matrix_element = worst([matrix_element, rel(lhs, rhs)]);
            }
        }
    }

    let dual_star = worst((0..n).map(|k| linalg::matrix_residual(&space.pi_dual(&stars[k]), &pi_duals[k].adjoint())));
    let counit_unit = linalg::matrix_residual(&space.pi_dual(&structure.counit), &identity);
    let gamma_counit = linalg::relative_residual(
        space.gamma(&structure.counit).as_slice(),
        space.vector(&structure.h).as_slice(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut excess = f64::NEG_INFINITY;
    for _ in 0..100 {
        let w = random_functional(structure, &mut rng);
        let norm = linalg::operator_norm(&space.pi_dual(&w));
        excess = excess.max(norm - w.dual_norm());
    }

    vec![
        Check::residual("gns.inner_product", "<Lambda(a), Lambda(b)> = phi(b* a)", inner, tol.residual),
        Check::residual("gns.pi_unital", "pi(1) = 1", unital, tol.residual),
        Check::residual("gns.pi_multiplicative", "pi(ab) = pi(a) pi(b)", alg_mult, tol.residual),
        Check::residual("gns.pi_star", "pi(a*) = pi(a)*", alg_star, tol.residual),
        Check::residual(
            "gns.scalar_product",
            "phi(b* a) = (w2* w1)(h) for a = (id (x) w1)Delta(h), b = (id (x) w2)Delta(h)",
            scalar,
            tol.residual,
        ),
        Check::residual(
            "gns.convolution_action",
            "pi(w) Gamma(w1) = Gamma(w w1)",
            action,
            tol.residual,
        ),
        Check::residual(
            "gns.matrix_element",
            "<pi(a) Gamma(w1), Gamma(w2)> = (w2* (x) w1)((a (x) 1)Delta(h))",
            matrix_element,
            tol.residual,
        ),
        Check::residual("gns.dual_star", "pi(w*) = pi(w)*", dual_star, tol.residual),
        Check::residual("gns.dual_multiplicative", "pi(w1 w2) = pi(w1) pi(w2)", conv_hom, tol.residual),
        Check::residual("gns.counit", "pi(epsilon) = 1", counit_unit, tol.residual),
        Check::residual("gns.gamma_counit", "Gamma(epsilon) = Lambda(h)", gamma_counit, tol.residual),
        Check::flag(
            "gns.norm_bound",
            "||pi(w)|| <= ||w|| for 100 random w",
            excess <= tol.residual,
            format!("largest excess {excess:.3e}"),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_function_algebra, build_group_algebra};
    use crate::haar::haar_weight;
    use crate::magma::{cyclic, symmetric3};

    fn space(file: crate::QuantumGroupFile) -> (QuantumGroupStructure, HaarWeight, GnsSpace) {
        let tol = Tolerances::default();
        let s = QuantumGroupStructure::derive(&file.comultiplication().unwrap(), &tol)
            .unwrap()
            .0;
        let haar = haar_weight(&s, &tol).unwrap();
        let space = gns(&s, &haar).unwrap();
        (s, haar, space)
    }

    #[test]
    fn function_algebra_embeds_isometrically() {
        let (_, _, space) = space(build_function_algebra(&cyclic(3)).unwrap());
        assert!((&space.lambda - CMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn identities_hold_on_s3() {
        let tol = Tolerances::default();
        for file in [
            build_function_algebra(&symmetric3()).unwrap(),
            build_group_algebra(&symmetric3(), &tol, 0).unwrap(),
        ] {
            let (s, haar, space) = space(file);
            let checks = check_gns_identities(&s, &haar, &space, &tol, 1);
            assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        }
    }

    #[test]
    fn gamma_of_counit_is_lambda_of_h() {
        let (s, _, space) = space(build_function_algebra(&symmetric3()).unwrap());
        assert!((space.gamma(&s.counit) - space.vector(&s.h)).norm() < 1e-12);
    }
}
