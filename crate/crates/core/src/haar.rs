//! The Haar weight `phi(a) = w_a(1)` where `(id (x) w_a)Delta(h) = a`.

use serde::Serialize;

use crate::algebra::{LinearFunctional, MatrixUnit, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Tolerances};
use crate::report::{worst, Check};
use crate::structure::QuantumGroupStructure;

#[derive(Debug, Clone)]
pub struct HaarWeight {
    pub phi: LinearFunctional,
    /// Matrix of `w -> (id (x) w)Delta(h)`.
    pub r: CMatrix,
    pub r_inv: CMatrix,
}

/// Matrix of the slice map `w -> (id (x) w)Delta(h)` over coordinate functionals.
pub fn slice_matrix(structure: &QuantumGroupStructure) -> CMatrix {
    let layout = structure.delta.pair_layout();
    let kron = structure.delta.apply(&structure.h).kron_coords();
    let n = structure.algebra().dim();
    // one factor per leg, so kron index = p * n + q
    debug_assert_eq!(layout.kron_dims(), vec![n, n]);
    CMatrix::from_fn(n, n, |p, q| kron[p * n + q])
}

pub fn haar_weight(structure: &QuantumGroupStructure, tol: &Tolerances) -> Result<HaarWeight> {
    let algebra = structure.algebra();
    let r = slice_matrix(structure);
    let r_inv = linalg::inverse(&r, tol.rank).ok_or(Error::RSingular)?;
    let one = algebra.identity().coords();
    let phi = LinearFunctional::new(algebra, r_inv.transpose() * one);
    Ok(HaarWeight { phi, r, r_inv })
}

/// `G[k, j] = phi(e_k* e_j)`, so that `phi(b* a) = b^H G a`.
pub fn gram_matrix(algebra: &MultiMatrixAlgebra, phi: &LinearFunctional) -> CMatrix {
    let n = algebra.dim();
    let basis = algebra.basis_elements();
    CMatrix::from_fn(n, n, |k, j| phi.apply(&(&basis[k].adjoint() * &basis[j])))
}

/// Extreme eigenvalues of the Gram matrix.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GramSpectrum {
    pub min: f64,
    pub max: f64,
}

impl GramSpectrum {
    pub fn of(gram: &CMatrix) -> Self {
        let (values, _) = linalg::hermitian_eigen(gram);
        GramSpectrum {
            min: values.first().copied().unwrap_or(0.0),
            max: values.last().copied().unwrap_or(0.0),
        }
    }

    pub fn ratio(&self) -> f64 {
        if self.max > 0.0 {
            self.min / self.max
        } else {
            f64::NAN
        }
    }
}

pub fn check_haar(structure: &QuantumGroupStructure, haar: &HaarWeight, tol: &Tolerances) -> Vec<Check> {
    let algebra = structure.algebra();
    let n = algebra.dim();
    let delta = &structure.delta;
    let phi = &haar.phi;
    let one = algebra.identity();

    let invariance = worst((0..n).map(|k| {
        let lhs = delta.apply_basis(k).slice_leg(0, phi).expect("two legs");
        lhs.element().residual(&one.scale(phi.coords()[k]))
    }));

    let mut positive = Vec::new();
    for b in 0..algebra.num_blocks() {
        for i in 0..algebra.block_dim(b) {
            let unit = MatrixUnit {
                block: b,
                row: i,
                col: i,
            };
            positive.push(algebra.coordinate_functional(algebra.basis_index(unit)));
        }
    }
    let total = positive.iter().skip(1).fold(positive[0].clone(), |acc, w| acc.add(w));
    positive.push(total);
    let mut positive_form = 0.0f64;
    for w in &positive {
        let w1 = w.apply(&one);
        for k in 0..n {
            let lhs = phi.apply(delta.apply_basis(k).slice_leg(1, w).expect("two legs").element());
            let rhs = w1 * phi.coords()[k];
            positive_form = worst([positive_form, (lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm())]);
        }
    }

    let r_consistency = worst((0..n).map(|k| {
        let w = LinearFunctional::new(algebra, haar.r_inv.column(k).into_owned());
        let back = structure.delta.apply(&structure.h).slice_leg(1, &w).expect("two legs");
        back.element().residual(&algebra.basis(k))
    }));

    let at_h = (phi.apply(&structure.h) - linalg::ONE).norm();
    let gram = gram_matrix(algebra, phi);
    let hermitian = linalg::matrix_residual(&gram, &gram.adjoint());
    let spectrum = GramSpectrum::of(&gram);
    let faithful = spectrum.min > n as f64 * tol.rank * spectrum.max;
    vec![
        Check::residual("haar.invariance", "(phi (x) id)Delta(a) = phi(a) 1", invariance, tol.residual),
        Check::residual(
            "haar.invariance_positive",
            "phi((id (x) w)Delta(a)) = w(1) phi(a) for positive w",
            positive_form,
            tol.residual,
        ),
        Check::residual(
            "haar.slice_inverse",
            "(id (x) R^-1(a))Delta(h) = a",
            r_consistency,
            tol.residual,
        ),
        Check::residual("haar.normalized", "phi(h) = 1", at_h, tol.residual * 1e-3),
        Check::residual("haar.gram_hermitian", "phi(b* a) = conj(phi(a* b))", hermitian, tol.residual),
        Check::flag(
            "haar.positive",
            "phi(a* a) >= 0",
            spectrum.min >= -(n as f64) * tol.rank * spectrum.max.abs(),
            format!("smallest Gram eigenvalue {:.6e}", spectrum.min),
        ),
        Check::flag(
            "haar.faithful",
            "phi(a* a) = 0 implies a = 0",
            faithful,
            format!("Gram eigenvalue ratio {:.6e}", spectrum.ratio()),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_function_algebra, build_group_algebra};
    use crate::linalg::real;
    use crate::magma::{cyclic, symmetric3};

    fn structure(file: crate::QuantumGroupFile) -> QuantumGroupStructure {
        QuantumGroupStructure::derive(&file.comultiplication().unwrap(), &Tolerances::default())
            .unwrap()
            .0
    }

    #[test]
    fn counting_measure_on_function_algebras() {
        let s = structure(build_function_algebra(&cyclic(5)).unwrap());
        let haar = haar_weight(&s, &Tolerances::default()).unwrap();
        assert!(haar.phi.coords().iter().all(|z| (z - real(1.0)).norm() < 1e-12));
        assert!(check_haar(&s, &haar, &Tolerances::default()).iter().all(|c| c.passed));
    }

    #[test]
    fn group_algebra_weight_is_faithful() {
        let tol = Tolerances::default();
        let s = structure(build_group_algebra(&symmetric3(), &tol, 0).unwrap());
        let haar = haar_weight(&s, &tol).unwrap();
        let spectrum = GramSpectrum::of(&gram_matrix(s.algebra(), &haar.phi));
        assert!(spectrum.ratio() > 1e-8);
        let checks = check_haar(&s, &haar, &tol);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn slice_matrix_inverts() {
        let s = structure(build_function_algebra(&symmetric3()).unwrap());
        let haar = haar_weight(&s, &Tolerances::default()).unwrap();
        assert!((&haar.r * &haar.r_inv - CMatrix::identity(6, 6)).norm() < 1e-12);
    }
}
