use criterion::{criterion_group, criterion_main, Criterion};
use dqg_bench::{function_algebra, group_algebra, groups};
use dqg_core::builders::group_algebra_constants;
use dqg_core::gns::gns;
use dqg_core::haar::haar_weight;
use dqg_core::unitary::build_w;
use dqg_core::wedderburn::wedderburn;
use dqg_core::{verify, QuantumGroupStructure, Tolerances, VerifyOptions};

fn full_verification(c: &mut Criterion) {
    let opts = VerifyOptions::default();
    for (name, g) in groups() {
        let fn_alg = function_algebra(&g);
        let grp_alg = group_algebra(&g);
        c.bench_function(&format!("verify fn-alg {name}"), |b| b.iter(|| verify(&fn_alg, name, &opts)));
        c.bench_function(&format!("verify grp-alg {name}"), |b| {
            b.iter(|| verify(&grp_alg, name, &opts))
        });
    }
}

fn wedderburn_decomposition(c: &mut Criterion) {
    let tol = Tolerances::default();
    for (name, g) in groups() {
        let sc = group_algebra_constants(&g).unwrap();
        c.bench_function(&format!("wedderburn {name}"), |b| {
            b.iter(|| wedderburn(&sc, &tol, 0).unwrap())
        });
    }
}

fn pentagon(c: &mut Criterion) {
    let tol = Tolerances::default();
    for (name, g) in groups() {
        let file = group_algebra(&g);
        let (s, _) = QuantumGroupStructure::derive(&file.comultiplication().unwrap(), &tol).unwrap();
        let space = gns(&s, &haar_weight(&s, &tol).unwrap()).unwrap();
        let w = build_w(&s, &space, &tol);
        c.bench_function(&format!("pentagon {name}"), |b| b.iter(|| w.pentagon_residual(0)));
    }
}

criterion_group!(benches, full_verification, wedderburn_decomposition, pentagon);
criterion_main!(benches);
