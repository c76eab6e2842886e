//! Derivation of the distinguished projection, counit and antipode.

use crate::algebra::{AlgebraElement, LinearFunctional, MultiMatrixAlgebra};
use crate::axioms::Comultiplication;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Tolerances, ONE};
use crate::report::{worst, Check};
use crate::tensor::{flip, tensor_elem, TensorElement};

/// Finds the unique self-adjoint projection `h` with `Delta(a)(1 (x) h) = a (x) h`.
///
/// Returns `h` together with its post-verification checks.
pub fn find_h(delta: &Comultiplication, tol: &Tolerances) -> Result<(AlgebraElement, Vec<Check>)> {
    let algebra = delta.algebra();
    let n = algebra.dim();
    let block = n * n;
    let mut stacked = CMatrix::zeros(n * block, n);
    for k in 0..n {
        let a = algebra.basis(k);
        let image = delta.apply_basis(k);
        let map = delta.multiplier_map(&image, false);
        for j in 0..n {
            let shifted = tensor_elem(&a, &algebra.basis(j)).coords();
            let col = map.column(j) - shifted;
            stacked.view_mut((k * block, j), (block, 1)).copy_from(&col);
        }
    }
    // each column is a difference of unit-norm terms, so rounding noise is measured against 1
    let kernel = linalg::nullspace_scaled(&stacked, tol.rank, 1.0);
    match kernel.ncols() {
        0 => return Err(Error::NoSuchH),
        1 => {}
        d => return Err(Error::AmbiguousH(d)),
    }
    let x = algebra.element(&kernel.column(0).into_owned());
    // x = mu h for a projection h, so x* x = conj(mu) x
    let xs_x = &x.adjoint() * &x;
    let xc = x.coords();
    let scale = xc.dotc(&xs_x.coords()) / xc.dotc(&xc);
    let h = x.scale(ONE / scale.conj());
    let idempotent = (&h * &h).residual(&h);
    let selfadjoint = h.adjoint().residual(&h);
    let worst_norm = worst([idempotent, selfadjoint]);
    if !(worst_norm <= tol.residual) {
        return Err(Error::NormalizationFailure(worst_norm));
    }
    let left_absorb = worst((0..n).map(|k| {
        let lhs = delta.apply_basis(k).mul(&delta.tensor_one(&h));
        lhs.residual(&tensor_elem(&h, &algebra.basis(k)))
    }));
    let checks = vec![
        Check::flag(
            "h.unique",
            "solutions of Delta(a)(1 (x) x) = a (x) x form a line",
            true,
            "kernel dimension 1",
        ),
        Check::residual("h.idempotent", "h^2 = h", idempotent, tol.residual),
        Check::residual("h.selfadjoint", "h* = h", selfadjoint, tol.residual),
        Check::residual("h.left_absorption", "Delta(a)(h (x) 1) = h (x) a", left_absorb, tol.residual),
    ];
    Ok((h, checks))
}

/// Reads the counit off `a h = epsilon(a) h` and verifies its defining properties.
pub fn counit(delta: &Comultiplication, h: &AlgebraElement, tol: &Tolerances) -> Result<(LinearFunctional, Vec<Check>)> {
    let algebra = delta.algebra();
    let n = algebra.dim();
    let hc = h.coords();
    let hh = hc.dotc(&hc);
    let mut coords = CVector::zeros(n);
    let mut absorb = 0.0f64;
    for k in 0..n {
        let a = algebra.basis(k);
        let ah = &a * h;
        let value = hc.dotc(&ah.coords()) / hh;
        let target = h.scale(value);
        let r = worst([ah.residual(&target), (h * &a).residual(&target)]);
        if !(r <= tol.residual) {
            return Err(Error::CounitInconsistent { index: k, residual: r });
        }
        absorb = worst([absorb, r]);
        coords[k] = value;
    }
    let eps = LinearFunctional::new(algebra, coords);
    let mut mult = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let ab = &algebra.basis(p) * &algebra.basis(q);
            let lhs = eps.apply(&ab);
            let rhs = eps.coords()[p] * eps.coords()[q];
            mult = worst([mult, (lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm())]);
        }
    }
    let star = eps.bar().residual(&eps);
    let at_h = (eps.apply(h) - ONE).norm();
    let mut right = 0.0f64;
    let mut left = 0.0f64;
    for k in 0..n {
        let image = delta.apply_basis(k);
        let a = algebra.basis(k);
        right = worst([right, image.slice_leg(1, &eps).expect("two legs").element().residual(&a)]);
        left = worst([left, image.slice_leg(0, &eps).expect("two legs").element().residual(&a)]);
    }
    let checks = vec![
        Check::residual("counit.absorption", "a h = h a = epsilon(a) h", absorb, tol.residual),
        Check::residual(
            "counit.multiplicative",
            "epsilon(ab) = epsilon(a) epsilon(b)",
            mult,
            tol.residual,
        ),
        Check::residual("counit.star", "epsilon(a*) = conj(epsilon(a))", star, tol.residual),
        Check::residual("counit.at_h", "epsilon(h) = 1", at_h, tol.residual),
        Check::residual("counit.right", "(id (x) epsilon)Delta(a) = a", right, tol.residual),
        Check::residual("counit.left", "(epsilon (x) id)Delta(a) = a", left, tol.residual),
    ];
    Ok((eps, checks))
}

/// Solves `Delta(h)(1 (x) b) = Delta(h)(a_k (x) 1)` for every basis element.
///
/// Returns the antipode matrix and its inverse.
pub fn antipode(delta: &Comultiplication, h: &AlgebraElement, tol: &Tolerances) -> Result<(CMatrix, CMatrix)> {
    let algebra = delta.algebra();
    let n = algebra.dim();
    let dh = delta.apply(h);
    let map = delta.multiplier_map(&dh, false);
    let mut s = CMatrix::zeros(n, n);
    for k in 0..n {
        let target = dh.mul(&delta.tensor_one(&algebra.basis(k))).coords();
        match linalg::solve(&map, &target, tol.rank, tol.residual) {
            Ok(sol) => s.set_column(k, &sol.solution),
            Err(Error::NoSolution { residual }) => return Err(Error::AntipodeUndefined { index: k, residual }),
            Err(e) => return Err(e),
        }
    }
    let s_inv = linalg::inverse(&s, tol.rank).ok_or(Error::SingularAntipode)?;
    Ok((s, s_inv))
}

/// Everything derived from `(A, Delta)` before the Haar weight.
#[derive(Debug, Clone)]
pub struct QuantumGroupStructure {
    pub delta: Comultiplication,
    pub h: AlgebraElement,
    pub counit: LinearFunctional,
    pub antipode: CMatrix,
    pub antipode_inv: CMatrix,
    pub tolerances: Tolerances,
}

impl QuantumGroupStructure {
    /// Runs `find_h`, `counit` and `antipode` in sequence.
    pub fn derive(delta: &Comultiplication, tol: &Tolerances) -> Result<(Self, Vec<Check>)> {
        let (h, mut checks) = find_h(delta, tol)?;
        let (counit, counit_checks) = counit(delta, &h, tol)?;
        checks.extend(counit_checks);
        let (antipode, antipode_inv) = antipode(delta, &h, tol)?;
        Ok((
            QuantumGroupStructure {
                delta: delta.clone(),
                h,
                counit,
                antipode,
                antipode_inv,
                tolerances: *tol,
            },
            checks,
        ))
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        self.delta.algebra()
    }

    pub fn apply_antipode(&self, a: &AlgebraElement) -> AlgebraElement {
        self.algebra().element(&(&self.antipode * a.coords()))
    }

    pub fn apply_antipode_inv(&self, a: &AlgebraElement) -> AlgebraElement {
        self.algebra().element(&(&self.antipode_inv * a.coords()))
    }

    /// `(S0 w)(a) = w(S(a))`.
    pub fn dual_antipode(&self, omega: &LinearFunctional) -> LinearFunctional {
        omega.compose(&self.antipode)
    }

    /// `(w1 w2)(a) = (w1 (x) w2)Delta(a)`.
    pub fn convolve(&self, w1: &LinearFunctional, w2: &LinearFunctional) -> LinearFunctional {
        convolution(&self.delta, w1, w2)
    }

    /// `w*(x) = conj(w(S(x)*))`.
    pub fn involution(&self, omega: &LinearFunctional) -> LinearFunctional {
        let algebra = self.algebra();
        let coords = CVector::from_fn(algebra.dim(), |k, _| {
            let sx = self.apply_antipode(&algebra.basis(k));
            omega.apply(&sx.adjoint()).conj()
        });
        LinearFunctional::new(algebra, coords)
    }

    /// A functional `psi` with `w(a) = psi(Delta(h)(1 (x) a))`, if one exists.
    pub fn witness(&self, omega: &LinearFunctional) -> Result<LinearFunctional> {
        let dh = self.delta.apply(&self.h);
        let map = self.delta.multiplier_map(&dh, false);
        let sol = linalg::solve(
            &map.transpose(),
            omega.coords(),
            self.tolerances.rank,
            self.tolerances.residual,
        )?;
        Ok(LinearFunctional::new(self.delta.pair_layout().product(), sol.solution))
    }

    /// `a -> psi(Delta(h)(a (x) 1))` for a witness `psi` of `w`.
    pub fn dual_antipode_via_witness(&self, omega: &LinearFunctional) -> Result<LinearFunctional> {
        let psi = self.witness(omega)?;
        let dh = self.delta.apply(&self.h);
        let map = self.delta.multiplier_map(&dh, true);
        Ok(LinearFunctional::new(self.algebra(), map.transpose() * psi.coords()))
    }
}

/// `(w1 w2)(a) = (w1 (x) w2)Delta(a)`.
pub fn convolution(delta: &Comultiplication, w1: &LinearFunctional, w2: &LinearFunctional) -> LinearFunctional {
    let layout = delta.pair_layout();
    let pairing = layout.to_algebra_order(&w1.coords().kronecker(w2.coords()));
    LinearFunctional::new(delta.algebra(), delta.matrix().transpose() * pairing)
}

/// Residuals of the antipode identities and the dual antipode on convolution.
pub fn verify_antipode_identities(structure: &QuantumGroupStructure) -> Vec<Check> {
    let tol = structure.tolerances.residual;
    let delta = &structure.delta;
    let algebra = structure.algebra();
    let n = algebra.dim();
    let basis = algebra.basis_elements();
    let images: Vec<AlgebraElement> = basis.iter().map(|a| structure.apply_antipode(a)).collect();
    let dh = delta.apply(&structure.h);

    let defining = worst((0..n).map(|k| {
        dh.mul(&delta.tensor_one(&basis[k]))
            .residual(&dh.mul(&delta.one_tensor(&images[k])))
    }));

    let mut anti = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let lhs = structure.apply_antipode(&(&basis[p] * &basis[q]));
            anti = worst([anti, lhs.residual(&(&images[q] * &images[p]))]);
        }
    }

    let swap = worst((0..n).map(|k| {
        delta
            .one_tensor(&basis[k])
            .mul(&dh)
            .residual(&delta.tensor_one(&images[k]).mul(&dh))
    }));

    let star = worst((0..n).map(|k| structure.apply_antipode(&images[k].adjoint()).adjoint().residual(&basis[k])));

    let s_factors = [algebra.clone()];
    let flip_res = worst((0..n).map(|k| {
        let image = delta.apply_basis(k);
        let lhs = image
            .map_leg(0, &structure.antipode, &s_factors)
            .and_then(|t| t.map_leg(1, &structure.antipode, &s_factors))
            .expect("antipode acts on each leg");
        let rhs = flip(&delta.apply(&images[k])).expect("two legs");
        lhs.residual(&rhs)
    }));

    let one = algebra.identity();
    let left3 = dh.tensor(&TensorElement::single(&one));
    let right3 = TensorElement::single(&one).tensor(&dh);
    let three_leg = worst((0..n).map(|k| {
        let a_first = tensor_elem(&basis[k], &one).tensor(&TensorElement::single(&one));
        let a_last = tensor_elem(&one, &one).tensor(&TensorElement::single(&basis[k]));
        left3.mul(&a_first).mul(&right3).residual(&left3.mul(&a_last).mul(&right3))
    }));

    let fixes_h = structure.apply_antipode(&structure.h).residual(&structure.h);
    let inverse = linalg::matrix_residual(&(&structure.antipode * &structure.antipode_inv), &CMatrix::identity(n, n));
    let eps = &structure.counit;
    let counit_inv = structure.dual_antipode(eps).residual(eps);

    let mut s0_anti = 0.0f64;
    let mut unit = 0.0f64;
    let duals: Vec<LinearFunctional> = (0..n).map(|k| algebra.coordinate_functional(k)).collect();
    for w1 in &duals {
        unit = worst([
            unit,
            structure.convolve(w1, eps).residual(w1),
            structure.convolve(eps, w1).residual(w1),
        ]);
        for w2 in &duals {
            let lhs = structure.dual_antipode(&structure.convolve(w1, w2));
            let rhs = structure.convolve(&structure.dual_antipode(w2), &structure.dual_antipode(w1));
            s0_anti = worst([s0_anti, lhs.residual(&rhs)]);
        }
    }

    let mut checks = vec![
        Check::residual("antipode.defining", "Delta(h)(a (x) 1) = Delta(h)(1 (x) S(a))", defining, tol),
        Check::residual("antipode.anti_multiplicative", "S(ab) = S(b)S(a)", anti, tol),
        Check::residual("antipode.swap", "(1 (x) a)Delta(h) = (S(a) (x) 1)Delta(h)", swap, tol),
        Check::residual("antipode.star_involution", "S(S(a)*)* = a", star, tol),
        Check::residual("antipode.flip", "(S (x) S)Delta(a) = flip Delta(S(a))", flip_res, tol),
        Check::residual(
            "antipode.three_leg",
            "(Delta(h) (x) 1)(a (x) 1 (x) 1)(1 (x) Delta(h)) = (Delta(h) (x) 1)(1 (x) 1 (x) a)(1 (x) Delta(h))",
            three_leg,
            tol,
        ),
        Check::residual("antipode.fixes_h", "S(h) = h", fixes_h, tol),
        Check::residual("antipode.inverse", "S S^-1 = 1", inverse, tol),
        Check::residual("antipode.counit", "epsilon(S(a)) = epsilon(a)", counit_inv, tol),
        Check::residual("dual_antipode.anti_multiplicative", "S0(w1 w2) = S0(w2) S0(w1)", s0_anti, tol),
        Check::residual("convolution.unit", "w epsilon = epsilon w = w", unit, tol),
    ];

    let witness = worst(duals.iter().map(|w| match structure.dual_antipode_via_witness(w) {
        Ok(via) => via.residual(&structure.dual_antipode(w)),
        Err(_) => f64::INFINITY,
    }));
    checks.push(Check::residual(
        "dual_antipode.witness",
        "S0(w)(a) = psi(Delta(h)(a (x) 1)) where w = psi(Delta(h)(1 (x) .))",
        witness,
        tol,
    ));

    if n <= 8 {
        let mut assoc = 0.0f64;
        for w1 in &duals {
            for w2 in &duals {
                let w12 = structure.convolve(w1, w2);
                for w3 in &duals {
                    let lhs = structure.convolve(&w12, w3);
                    let rhs = structure.convolve(w1, &structure.convolve(w2, w3));
                    assoc = worst([assoc, lhs.residual(&rhs)]);
                }
            }
        }
        checks.push(Check::residual(
            "convolution.associative",
            "(w1 w2) w3 = w1 (w2 w3)",
            assoc,
            tol,
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_function_algebra;
    use crate::linalg::{c, real};
    use crate::magma::{cyclic, symmetric3};

    fn function_algebra(m: &crate::magma::FiniteMagma) -> Comultiplication {
        build_function_algebra(m).unwrap().comultiplication().unwrap()
    }

    #[test]
    fn h_of_function_algebra_is_the_identity_indicator() {
        let delta = function_algebra(&cyclic(3));
        let (h, checks) = find_h(&delta, &Tolerances::default()).unwrap();
        assert!(checks.iter().all(|c| c.passed));
        assert!((h.coords() - CVector::from_vec(vec![ONE, real(0.0), real(0.0)])).norm() < 1e-12);
    }

    #[test]
    fn h_survives_rounding_noise_in_dimension_one() {
        let algebra = MultiMatrixAlgebra::points(1).unwrap();
        let phase = c(1.0, 1e-16) / c(1.0, 1e-16).norm();
        let delta = Comultiplication::new(&algebra, CMatrix::from_element(1, 1, phase)).unwrap();
        let (h, _) = find_h(&delta, &Tolerances::default()).unwrap();
        assert!((h.coords()[0] - ONE).norm() < 1e-12);
    }

    #[test]
    fn degenerate_comultiplications_have_no_unique_h() {
        let algebra = MultiMatrixAlgebra::points(2).unwrap();
        let tol = Tolerances::default();
        assert_eq!(
            find_h(&Comultiplication::left_trivial(&algebra), &tol).unwrap_err(),
            Error::AmbiguousH(2)
        );
        assert_eq!(
            find_h(&Comultiplication::right_trivial(&algebra), &tol).unwrap_err(),
            Error::NoSuchH
        );
    }

    #[test]
    fn counit_is_evaluation_at_the_identity() {
        let delta = function_algebra(&symmetric3());
        let tol = Tolerances::default();
        let (h, _) = find_h(&delta, &tol).unwrap();
        let (eps, checks) = counit(&delta, &h, &tol).unwrap();
        assert!(checks.iter().all(|c| c.passed));
        assert!((eps.coords() - h.coords()).norm() < 1e-12);
    }

    #[test]
    fn antipode_identities_hold_on_s3() {
        let (s, checks) = QuantumGroupStructure::derive(&function_algebra(&symmetric3()), &Tolerances::default()).unwrap();
        assert!(checks.iter().all(|c| c.passed));
        let report = verify_antipode_identities(&s);
        assert!(report.iter().all(|c| c.passed), "{report:?}");
        assert!((&s.antipode * &s.antipode_inv - CMatrix::identity(6, 6)).norm() < 1e-12);
    }
}
