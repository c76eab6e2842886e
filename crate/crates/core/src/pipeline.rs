//! End-to-end verification of a quantum group file.
//!
//! Phases run in dependency order: comultiplication axioms, `h`, counit and
//! antipode, the identities they satisfy, the Haar weight, the GNS space, and
//! the fundamental unitary with its dual. The first error that prevents a
//! later phase from running ends the run and is recorded in the certificate.

use std::time::Instant;

use crate::axioms::{self, Comultiplication};
use crate::certificate::{matrix_sha256, vector_fingerprint, Certificate, Failure, PhaseTiming};
use crate::error::{Error, Result};
use crate::file::{Expected, QuantumGroupFile};
use crate::gns;
use crate::haar;
use crate::linalg::{self, Tolerances};
use crate::magma::{analyze, comult_from_table, extract_operation, FiniteMagma};
use crate::report::Check;
use crate::structure::{self, QuantumGroupStructure};
use crate::unitary;

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tolerances: Tolerances,
    pub seed: u64,
    /// Record wall-clock time per phase. Off by default so that certificates are reproducible.
    pub timings: bool,
    /// Largest accepted `dim A`.
    pub max_dim: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tolerances: Tolerances::default(),
            seed: DEFAULT_SEED,
            timings: false,
            max_dim: None,
        }
    }
}

struct Run {
    cert: Certificate,
    timings: Vec<PhaseTiming>,
    clock: Instant,
}

impl Run {
    fn mark(&mut self, phase: &str) {
        let now = Instant::now();
        self.timings.push(PhaseTiming {
            phase: phase.to_string(),
            seconds: (now - self.clock).as_secs_f64(),
        });
        self.clock = now;
    }
}

fn expected_vector(name: &str, statement: &str, actual: &linalg::CVector, expected: &linalg::CVector, tol: f64) -> Check {
    if actual.len() != expected.len() {
        return Check::flag(
            name,
            statement,
            false,
            format!("length {} vs {}", actual.len(), expected.len()),
        );
    }
    Check::residual(
        name,
        statement,
        linalg::relative_residual(actual.as_slice(), expected.as_slice()),
        tol,
    )
}

/// Checks derived values against the reference values stored in the file.
fn compare_structure(expected: &Expected, s: &QuantumGroupStructure, tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    if let Some(h) = &expected.h {
        out.push(expected_vector(
            "expected.h",
            "h matches the stored value",
            &s.h.coords(),
            h,
            tol,
        ));
    }
    if let Some(e) = &expected.counit {
        out.push(expected_vector(
            "expected.counit",
            "epsilon matches the stored value",
            s.counit.coords(),
            e,
            tol,
        ));
    }
    if let Some(a) = &expected.antipode {
        out.push(Check::residual(
            "expected.antipode",
            "S matches the stored value",
            linalg::matrix_residual(&s.antipode, a),
            tol,
        ));
    }
    out
}

fn phase<T>(run: &mut Run, name: &str, result: Result<T>) -> Option<T> {
    match result {
        Ok(v) => Some(v),
        Err(e) => {
            run.cert.failure = Some(Failure::new(name, &e));
            run.mark(name);
            None
        }
    }
}

fn execute(run: &mut Run, file: &QuantumGroupFile, opts: &VerifyOptions) -> Option<()> {
    let tol = &opts.tolerances;
    let t = tol.residual;
    run.cert.block_dims = file.block_dims.clone();
    let delta: Comultiplication = phase(run, "load", file.comultiplication())?;
    if let Some(max) = opts.max_dim {
        let n = delta.algebra().dim();
        if n > max {
            let err = Error::ShapeMismatch(format!("dim A = {n} exceeds the limit {max}"));
            return phase(run, "load", Err(err));
        }
    }
    run.mark("load");

    run.cert.extend(axioms::check_star_hom(&delta, tol).checks());
    run.cert.extend([Check::residual(
        "comult.coassociative",
        "(Delta (x) id)Delta = (id (x) Delta)Delta",
        axioms::check_coassoc(&delta),
        t,
    )]);
    run.cert.extend(axioms::galois_maps(&delta, tol).checks());
    run.mark("axioms");

    let (s, checks) = phase(run, "structure", QuantumGroupStructure::derive(&delta, tol))?;
    run.cert.extend(checks);
    run.cert.fingerprints.h = Some(vector_fingerprint(&s.h.coords()));
    run.cert.fingerprints.counit = Some(vector_fingerprint(s.counit.coords()));
    run.cert.fingerprints.antipode_sha256 = Some(matrix_sha256(&s.antipode));
    run.cert.extend(compare_structure(&file.expected, &s, t));
    run.mark("structure");

    run.cert.extend(axioms::check_injectivity_h(&delta, &s.h, tol).checks());
    run.cert.extend(axioms::compute_ideals(&delta, &s.h, tol).checks());
    run.cert.extend(axioms::check_h_identities(&delta, &s.h, tol).checks());
    run.cert.extend(structure::verify_antipode_identities(&s));
    run.mark("identities");

    let weight = phase(run, "haar", haar::haar_weight(&s, tol))?;
    run.cert.extend(haar::check_haar(&s, &weight, tol));
    run.cert.fingerprints.haar = Some(vector_fingerprint(weight.phi.coords()));
    if let Some(phi) = &file.expected.haar {
        run.cert.extend([expected_vector(
            "expected.haar",
            "phi matches the stored value",
            weight.phi.coords(),
            phi,
            t,
        )]);
    }
    run.mark("haar");

    let space = phase(run, "gns", gns::gns(&s, &weight))?;
    run.cert
        .extend(gns::check_gns_identities(&s, &weight, &space, tol, opts.seed));
    run.mark("gns");

    let w = unitary::build_w(&s, &space, tol);
    run.cert.fingerprints.w_sha256 = Some(matrix_sha256(&w.w));
    run.cert
        .extend(unitary::check_w_identities(&w, &s, &space, tol, opts.seed.wrapping_add(1)));
    run.mark("unitary");

    let dual = phase(run, "dual", unitary::dual_algebra(&w, tol))?;
    run.cert.extend(dual.checks(delta.algebra().dim(), tol));
    let decomposition = phase(run, "dual", dual.decompose(tol, opts.seed))?;
    run.cert.fingerprints.dual_blocks = Some(decomposition.algebra.block_dims().to_vec());
    run.mark("dual");
    Some(())
}

/// Runs every phase on `file` and returns the certificate.
pub fn verify(file: &QuantumGroupFile, source: &str, opts: &VerifyOptions) -> Certificate {
    let mut run = Run {
        cert: Certificate::new(source, opts.tolerances, opts.seed),
        timings: Vec::new(),
        clock: Instant::now(),
    };
    let _ = execute(&mut run, file, opts);
    if opts.timings {
        run.cert.timings = Some(run.timings);
    }
    run.cert.finish();
    run.cert
}

/// Certificate for an input that could not be read or built.
pub fn failed_input(source: &str, opts: &VerifyOptions, err: &Error) -> Certificate {
    let mut cert = Certificate::new(source, opts.tolerances, opts.seed);
    cert.failure = Some(Failure::new("load", err));
    cert.finish();
    cert
}

/// The reduced dual of a quantum group as a file over its block decomposition.
pub fn dual_file(file: &QuantumGroupFile, opts: &VerifyOptions) -> Result<QuantumGroupFile> {
    let tol = &opts.tolerances;
    let delta = file.comultiplication()?;
    let (s, _) = QuantumGroupStructure::derive(&delta, tol)?;
    let weight = haar::haar_weight(&s, tol)?;
    let space = gns::gns(&s, &weight)?;
    let w = unitary::build_w(&s, &space, tol);
    let dual = unitary::dual_algebra(&w, tol)?;
    let decomposition = dual.decompose(tol, opts.seed)?;
    let comult = dual.transport(&decomposition)?;
    let note = match &file.note {
        Some(n) => format!("reduced dual of: {n}"),
        None => "reduced dual".to_string(),
    };
    Ok(QuantumGroupFile::from_comultiplication(
        &comult,
        Expected::default(),
        Some(note),
    ))
}

/// Certificate for a finite magma: table properties, the comultiplication it
/// induces, and the agreement between cancellation and bijectivity of the
/// Galois maps. For groups the derived antipode must be the inversion map.
pub fn reconstruct(m: &FiniteMagma, source: &str, opts: &VerifyOptions) -> Certificate {
    let tol = &opts.tolerances;
    let mut cert = Certificate::new(source, *tol, opts.seed);
    let report = analyze(m);
    let label = |k: usize| m.labels()[k].clone();
    let (algebra, delta) = comult_from_table(m);
    cert.block_dims = algebra.block_dims().to_vec();
    cert.extend([
        Check::flag("table.associative", "(s t) u = s (t u)", report.associative, ""),
        Check::flag(
            "table.left_cancellative",
            "s t = s u implies t = u",
            report.left_cancellative,
            "",
        ),
        Check::flag(
            "table.right_cancellative",
            "t s = u s implies t = u",
            report.right_cancellative,
            "",
        ),
        Check::flag(
            "table.identity",
            "some e has e s = s e = s",
            report.identity.is_some(),
            report.identity.map(label).unwrap_or_else(|| "none".into()),
        ),
        Check::flag(
            "table.inverses",
            "every s has a two-sided inverse",
            report.inverses.is_some(),
            "",
        ),
        Check::flag("table.is_group", "the table is a group", report.is_group, ""),
    ]);
    let round_trip = extract_operation(&delta, Some(m.labels()), tol);
    cert.extend([Check::flag(
        "table.round_trip",
        "the operation read back from Delta is the table",
        round_trip.as_ref().is_ok_and(|back| back == m),
        match &round_trip {
            Ok(_) => String::new(),
            Err(e) => e.to_string(),
        },
    )]);
    cert.extend(axioms::check_star_hom(&delta, tol).checks());
    cert.extend([Check::residual(
        "comult.coassociative",
        "(Delta (x) id)Delta = (id (x) Delta)Delta",
        axioms::check_coassoc(&delta),
        tol.residual,
    )]);
    let maps = axioms::galois_maps(&delta, tol);
    cert.extend(maps.checks());
    cert.extend([Check::flag(
        "galois.bridge",
        "the table is cancellative iff both Galois maps are bijective",
        report.cancellative() == axioms::check_discrete(&maps),
        format!(
            "cancellative {}, bijective {}",
            report.cancellative(),
            axioms::check_discrete(&maps)
        ),
    )]);

    if let Some(inverses) = report.inverses.as_ref().filter(|_| report.is_group) {
        match QuantumGroupStructure::derive(&delta, tol) {
            Ok((s, _)) => {
                let n = m.order();
                let expected = linalg::CMatrix::from_fn(n, n, |r, g| if r == inverses[g] { linalg::ONE } else { linalg::ZERO });
                cert.extend([Check::residual(
                    "table.antipode_is_inverse",
                    "S(d_g) = d_(g^-1)",
                    linalg::matrix_residual(&s.antipode, &expected),
                    tol.residual,
                )]);
            }
            Err(e) => cert.failure = Some(Failure::new("structure", &e)),
        }
    }
    cert.finish();
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_function_algebra, build_left_trivial, build_right_trivial};
    use crate::magma::{cyclic, nonassociative3, symmetric3, truncated_monoid};

    #[test]
    fn z2_passes() {
        let file = build_function_algebra(&cyclic(2)).unwrap();
        let cert = verify(&file, "z2", &VerifyOptions::default());
        let failed: Vec<_> = cert.failed_checks().map(|c| c.name.clone()).collect();
        assert!(cert.passed, "failed: {failed:?} {:?}", cert.failure);
        assert_eq!(cert.exit_code(), 0);
        assert_eq!(cert.fingerprints.dual_blocks, Some(vec![1, 1]));
        assert!(cert.timings.is_none());
    }

    #[test]
    fn degenerate_comultiplications_stop() {
        let opts = VerifyOptions::default();
        let cert = verify(&build_left_trivial(&[1, 1]).unwrap(), "left", &opts);
        assert_eq!(cert.failure.as_ref().unwrap().code, "AmbiguousH");
        assert_eq!(cert.exit_code(), 2);
        let cert = verify(&build_right_trivial(&[1, 1]).unwrap(), "right", &opts);
        assert_eq!(cert.failure.as_ref().unwrap().code, "NoSuchH");
        assert!(cert.failure.as_ref().unwrap().axiom.is_some());
    }

    #[test]
    fn size_limit() {
        let file = build_function_algebra(&cyclic(3)).unwrap();
        let opts = VerifyOptions {
            max_dim: Some(2),
            ..VerifyOptions::default()
        };
        let cert = verify(&file, "z3", &opts);
        assert_eq!(cert.exit_code(), 3);
    }

    #[test]
    fn dual_of_function_algebra_verifies() {
        let opts = VerifyOptions::default();
        let file = build_function_algebra(&cyclic(3)).unwrap();
        let dual = dual_file(&file, &opts).unwrap();
        assert_eq!(dual.block_dims, vec![1, 1, 1]);
        let cert = verify(&dual, "dual", &opts);
        let failed: Vec<_> = cert.failed_checks().map(|c| c.name.clone()).collect();
        assert!(cert.passed, "failed: {failed:?} {:?}", cert.failure);
    }

    #[test]
    fn reconstruction_certificates() {
        let opts = VerifyOptions::default();
        for m in [cyclic(4), symmetric3()] {
            let cert = reconstruct(&m, "group", &opts);
            assert!(cert.passed, "{}", cert.to_table());
            assert!(cert.check("table.antipode_is_inverse").is_some());
        }
        for n in [1, 2, 3] {
            let cert = reconstruct(&truncated_monoid(n), "monoid", &opts);
            assert!(!cert.passed);
            assert!(!cert.check("galois.t1_bijective").unwrap().passed);
            assert!(!cert.check("table.left_cancellative").unwrap().passed);
            assert!(cert.check("galois.bridge").unwrap().passed);
            assert_eq!(cert.exit_code(), 2);
        }
        let cert = reconstruct(&nonassociative3(), "magma", &opts);
        assert!(!cert.check("comult.coassociative").unwrap().passed);
    }
}
