//! Acceptance suite: one test per criterion, each ending with a printed
//! pass line (run with `--nocapture` to see the details).
//!
//! Criterion 1 asserts the spin-j norm identity `sqrt(j(j+1))` across all
//! half-integer steps. That identity is mathematically valid only for
//! integer j (the ladder maximum sits at m = -1/2, a weight that exists
//! exactly when j is a half-integer, giving j + 1/2 instead), so the
//! half-integer cases fail by construction and the test reports them; see
//! the repository notes for the analysis.

use std::time::Instant;

use rootsim::algebra::{decompose, enumerate_roots, weyl_act, AlgebraElement, AlgebraId};
use rootsim::chain::{
    fit_exponent, scaling_study, to_algebra_element, ChainModel, ChainSpec, PauliTerm,
};
use rootsim::functionals::{
    act_seminorm, activity, commutator_via_roots, curvature, norm_equivalence_constants,
    profile_from_decomposition, root_profile,
};
use rootsim::gates::{
    circuit_unitary, compile_su2_strang, effective_generator, lower_bound, random_circuit,
};
use rootsim::linalg::{commutator, expm_skew, logm_unitary, op_dist, op_norm, CMat};
use rootsim::rep::{HalfSpin, Representation};
use rootsim::sampling;
use rootsim::splitting::{
    composed_evolution, error_sweep, exact_evolution, strang, Scheme, SplitErrorReport,
};
use rootsim::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn su2_element(a: f64, b: f64, cc: f64) -> AlgebraElement {
    let mat = CMat::from_rows(2, 2, &[c(0.0, a), c(b, cc), c(-b, cc), c(0.0, -a)]).unwrap();
    AlgebraElement::new(AlgebraId::Su2, mat).unwrap()
}

fn random_element(rng: &mut sampling::Rng64, algebra: AlgebraId) -> AlgebraElement {
    AlgebraElement::new(algebra, sampling::random_skew_herm(rng, algebra.dim(), 1.0)).unwrap()
}

fn defining(algebra: AlgebraId) -> Representation {
    Representation::defining(algebra).unwrap()
}

fn plus_root(algebra: AlgebraId) -> rootsim::algebra::RootDatum {
    enumerate_roots(algebra)
        .unwrap()
        .into_iter()
        .find(|r| r.label.is_positive())
        .unwrap()
}

fn dyadic_times() -> Vec<f64> {
    (4..=10).map(|k| 2f64.powi(-k)).collect()
}

/// The three benchmark generators of the splitting criteria.
fn benchmark_generators() -> Vec<(String, Representation, AlgebraElement)> {
    let mut rng = sampling::rng(404);
    vec![
        (
            "su(2) spin-1/2".into(),
            Representation::spin(HalfSpin::from_twice(1)),
            su2_element(1.0, 0.7, 0.3),
        ),
        (
            "su(2) spin-2".into(),
            Representation::spin(HalfSpin::from_twice(4)),
            su2_element(1.0, 0.7, 0.3),
        ),
        (
            "random su(3)".into(),
            defining(AlgebraId::Sun(3)),
            random_element(&mut rng, AlgebraId::Sun(3)),
        ),
    ]
}

#[test]
fn criterion_01_spin_j_norm_law() {
    let root = plus_root(AlgebraId::Su2);
    let mut failures = Vec::new();
    for twice in 1..=20u32 {
        let j = HalfSpin::from_twice(twice);
        let rep = Representation::spin(j);
        let computed = rep.root_image_norm(&root).unwrap();
        let asserted = (j.value() * (j.value() + 1.0)).sqrt();
        if (computed - asserted).abs() < 1e-10 {
            println!("criterion 01: j={j}: computed {computed:.12} = sqrt(j(j+1)) OK");
        } else {
            failures.push(format!(
                "j={j}: computed {computed:.12}, asserted sqrt(j(j+1)) = {asserted:.12}"
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "criterion 01 FAIL: the identity ||drho_j(E_a)||_op = sqrt(j(j+1)) does not hold for \
         half-integer j, where the ladder maximum over the weight m = -1/2 gives j + 1/2 \
         = sqrt(j(j+1) + 1/4) instead (spin-1/2 coincides with the defining representation, \
         whose matrix-unit root image has norm exactly 1):\n{}",
        failures.join("\n")
    );
    println!("criterion 01: PASS");
}

#[test]
fn criterion_02_commutator_closed_form() {
    let mut rng = sampling::rng(2);
    for algebra in [AlgebraId::Su2, AlgebraId::Sun(3), AlgebraId::Sun(4)] {
        let rep = defining(algebra);
        for _ in 0..100 {
            let x = random_element(&mut rng, algebra);
            let d = decompose(&x);
            let via = commutator_via_roots(&rep, &d).unwrap();
            let direct = commutator(
                &rep.apply(&d.toral_element()).unwrap(),
                &rep.apply(&d.root_element()).unwrap(),
            )
            .unwrap();
            let dist = op_dist(&via, &direct).unwrap();
            assert!(dist <= 1e-10, "{algebra}: closed-form distance {dist:e}");
        }
    }
    println!("criterion 02: PASS (100 samples each on su(2), su(3), su(4), tol 1e-10)");
}

#[test]
fn criterion_03_curvature_bound() {
    let mut rng = sampling::rng(2);
    for algebra in [AlgebraId::Su2, AlgebraId::Sun(3), AlgebraId::Sun(4)] {
        let rep = defining(algebra);
        for _ in 0..100 {
            let x = random_element(&mut rng, algebra);
            let d = decompose(&x);
            let profile = profile_from_decomposition(&rep, &d).unwrap();
            let comm = commutator(
                &rep.apply(&d.toral_element()).unwrap(),
                &rep.apply(&d.root_element()).unwrap(),
            )
            .unwrap();
            let bound = (profile.active_roots() as f64).sqrt() * curvature(&profile);
            let norm = op_norm(&comm).unwrap();
            assert!(norm <= bound + 1e-10, "{algebra}: {norm} > {bound}");
        }
    }
    println!("criterion 03: PASS (||[A,B]|| <= sqrt(active) * C + 1e-10 on all samples)");
}

fn sweep(rep: &Representation, x: &AlgebraElement, scheme: Scheme) -> SplitErrorReport {
    error_sweep(rep, x, &dyadic_times(), scheme).unwrap()
}

#[test]
fn criterion_04_splitting_orders() {
    let start = Instant::now();
    for (name, rep, x) in benchmark_generators() {
        let s = sweep(&rep, &x, Scheme::Strang);
        let order = s.fitted_order.expect("order defined");
        assert!(
            (2.9..=3.1).contains(&order),
            "{name}: Strang order {order} outside [2.9, 3.1]"
        );
        let t = sweep(&rep, &x, Scheme::Trotter1);
        let order1 = t.fitted_order.expect("order defined");
        assert!(
            (1.9..=2.1).contains(&order1),
            "{name}: Trotter1 order {order1} outside [1.9, 2.1]"
        );
        println!("criterion 04: {name}: strang {order:.4}, trotter1 {order1:.4}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "runtime {elapsed:?} >= 5 s");
    println!("criterion 04: PASS in {elapsed:?}");
}

#[test]
fn criterion_05_bound_validity() {
    for (name, rep, x) in benchmark_generators() {
        let s = sweep(&rep, &x, Scheme::Strang);
        let lead = s.c_hat_leading;
        assert!(lead > 0.0, "{name}: no leading ratio");
        for (i, (&e, &b)) in s.errors.iter().zip(&s.bound_rhs).enumerate() {
            if e >= s.roundoff_floor {
                assert!(
                    e <= 1.5 * lead * b,
                    "{name} point {i}: error {e} > 1.5 * c_hat * bound {}",
                    1.5 * lead * b
                );
            }
        }
        println!("criterion 05: {name}: c_hat(t=2^-4) = {lead:.6}, all smaller points within 1.5x");
    }
    println!("criterion 05: PASS");
}

#[test]
fn criterion_06_commuting_exactness() {
    let terms = vec![
        PauliTerm::new(0.9, "ZZII".into()).unwrap(),
        PauliTerm::new(-0.4, "IZZI".into()).unwrap(),
        PauliTerm::new(0.7, "IIZZ".into()).unwrap(),
        PauliTerm::new(0.3, "ZIIZ".into()).unwrap(),
        PauliTerm::new(-0.2, "ZZZZ".into()).unwrap(),
    ];
    let x = to_algebra_element(&terms, 4).unwrap();
    let rep = defining(AlgebraId::Qubits(4));
    let d = decompose(&x);
    for t in [0.1, 1.0, 10.0] {
        let err = op_dist(
            &exact_evolution(&rep, &x, t).unwrap(),
            &strang(&rep, &d, t).unwrap(),
        )
        .unwrap();
        assert!(err <= 1e-12, "t={t}: splitting error {err:e}");
        println!("criterion 06: t={t}: error {err:.3e}");
    }
    println!("criterion 06: PASS");
}

#[test]
fn criterion_07_weyl_and_intertwiner_invariance() {
    let mut rng = sampling::rng(7);
    // Weyl invariance on su(2) and su(3), all representatives.
    let su2_perms: Vec<Vec<usize>> = vec![vec![0, 1], vec![1, 0]];
    let su3_perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![1, 0, 2],
        vec![0, 2, 1],
        vec![2, 1, 0],
        vec![1, 2, 0],
        vec![2, 0, 1],
    ];
    for (algebra, perms) in [(AlgebraId::Su2, su2_perms), (AlgebraId::Sun(3), su3_perms)] {
        let rep = defining(algebra);
        for _ in 0..20 {
            let x = random_element(&mut rng, algebra);
            let px = root_profile(&rep, &x).unwrap();
            for perm in &perms {
                let y = weyl_act(algebra, perm, &x).unwrap();
                let py = root_profile(&rep, &y).unwrap();
                for p in [1.0, 2.0, f64::INFINITY] {
                    let d = (activity(&px, p).unwrap() - activity(&py, p).unwrap()).abs();
                    assert!(d <= 1e-10, "{algebra} perm {perm:?}: activity drift {d:e}");
                }
                let dc = (curvature(&px) - curvature(&py)).abs();
                assert!(
                    dc <= 1e-10,
                    "{algebra} perm {perm:?}: curvature drift {dc:e}"
                );
            }
        }
    }
    // Intertwiner invariance: exact equality under tensor-with-trivial.
    for (base, algebra) in [
        (defining(AlgebraId::Sun(3)), AlgebraId::Sun(3)),
        (
            Representation::spin(HalfSpin::from_twice(2)),
            AlgebraId::Su2,
        ),
    ] {
        let wrapped = Representation::tensor_trivial(base.clone());
        let x = random_element(&mut rng, algebra);
        let p0 = root_profile(&base, &x).unwrap();
        let p1 = root_profile(&wrapped, &x).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            assert_eq!(activity(&p0, p).unwrap(), activity(&p1, p).unwrap());
        }
        assert_eq!(curvature(&p0), curvature(&p1));
    }
    println!("criterion 07: PASS");
}

#[test]
fn criterion_08_chain_scalings() {
    // Translation-invariant TFIM, J = h = 1, n = 2..10.
    let ns: Vec<usize> = (2..=10).collect();
    let rows = scaling_study(
        |n| {
            ChainSpec::new(
                n,
                ChainModel::TransverseIsing {
                    j: vec![1.0; n - 1],
                    h: vec![1.0; n],
                },
            )
        },
        &ns,
    )
    .unwrap();
    let a1: Vec<f64> = rows.iter().map(|r| r.a1).collect();
    let a2: Vec<f64> = rows.iter().map(|r| r.a2).collect();
    let cg: Vec<f64> = rows.iter().map(|r| r.c_grouped).collect();
    let e1 = fit_exponent(&ns, &a1).unwrap().exponent;
    let e2 = fit_exponent(&ns, &a2).unwrap().exponent;
    let ec = fit_exponent(&ns, &cg).unwrap().exponent;
    assert!((e1 - 1.0).abs() <= 0.05, "A1 exponent {e1}");
    assert!((e2 - 0.5).abs() <= 0.05, "A2 exponent {e2}");
    assert!((ec - 0.5).abs() <= 0.05, "C exponent {ec}");
    println!("criterion 08: TFIM exponents ({e1:.3}, {e2:.3}, {ec:.3})");

    // Sparse support of two sites: all functionals independent of n.
    let ns_sparse: Vec<usize> = (4..=12).collect();
    let sparse_rows = scaling_study(
        |n| {
            let mut h = std::collections::BTreeMap::new();
            h.insert(1usize, 0.8);
            h.insert(2usize, 0.6);
            ChainSpec::new(
                n,
                ChainModel::SparseField {
                    j: vec![1.0; n - 1],
                    h,
                },
            )
        },
        &ns_sparse,
    )
    .unwrap();
    for (name, vals) in [
        ("A1", sparse_rows.iter().map(|r| r.a1).collect::<Vec<_>>()),
        ("A2", sparse_rows.iter().map(|r| r.a2).collect::<Vec<_>>()),
        (
            "C",
            sparse_rows.iter().map(|r| r.c_grouped).collect::<Vec<_>>(),
        ),
    ] {
        let e = fit_exponent(&ns_sparse, &vals).unwrap().exponent;
        assert!(e.abs() <= 0.05, "sparse {name} exponent {e}");
        println!("criterion 08: sparse {name} exponent {e:.3}");
    }
    println!("criterion 08: PASS");
}

#[test]
fn criterion_09_geometric_control() {
    let mut rng = sampling::rng(9);
    let s0 = 0.1;
    for algebra in [AlgebraId::Su2, AlgebraId::Sun(3), AlgebraId::Sun(4)] {
        let rep = defining(algebra);
        let ne = norm_equivalence_constants(&rep, algebra, 200, 0).unwrap();
        for k in 0..500 {
            let n_gates = 1 + (k % 20);
            let circuit = random_circuit(&mut rng, algebra, n_gates, s0, s0).unwrap();
            let z = effective_generator(&rep, &circuit).unwrap();
            let total = circuit.total_arc();
            assert!(
                z.norm() <= total + 1e-9,
                "{algebra} circuit {k}: ||Z|| {} > {total}",
                z.norm()
            );
            let act = act_seminorm(&rep, &z).unwrap();
            let bound = ne.upper * circuit.len() as f64 * s0;
            assert!(
                act <= bound + 1e-8,
                "{algebra} circuit {k}: ||Z||_act {act} > M1*N*s0 {bound}"
            );
        }
        println!(
            "criterion 09: {algebra}: 500 circuits OK (M1 = {:.6})",
            ne.upper
        );
    }
    println!("criterion 09: PASS");
}

#[test]
fn criterion_10_lower_bound_soundness() {
    let rep = defining(AlgebraId::Su2);
    let (s0, eps0) = (0.1, 1e-3);
    let report = lower_bound(&rep, AlgebraId::Su2, s0, eps0, 200, 0).unwrap();
    let mut rng = sampling::rng(10);
    let mut max_len = 0usize;
    for trial in 0..200 {
        let x = su2_element(
            sampling::uniform(&mut rng, -1.0, 1.0),
            sampling::uniform(&mut rng, -1.0, 1.0),
            sampling::uniform(&mut rng, -1.0, 1.0),
        );
        let t = sampling::uniform(&mut rng, 0.2, 1.5);
        let act = act_seminorm(&rep, &x).unwrap();
        let target = exact_evolution(&rep, &x, t).unwrap();
        let d = decompose(&x);
        let mut r = 1usize;
        while op_dist(&composed_evolution(&rep, &d, t, r).unwrap(), &target).unwrap() > 0.9 * eps0 {
            r *= 2;
            assert!(r < 1 << 22, "trial {trial}: no step count reached eps0");
        }
        let circuit = compile_su2_strang(&x, t, r, s0).unwrap();
        let eps = op_dist(&circuit_unitary(&rep, &circuit).unwrap(), &target).unwrap();
        assert!(eps <= eps0, "trial {trial}: compiled eps {eps} > eps0");
        let bound = report.n_lower(act, t);
        assert!(
            circuit.len() >= bound,
            "trial {trial}: length {} < n_lower {bound}",
            circuit.len()
        );
        max_len = max_len.max(circuit.len());
    }
    println!(
        "criterion 10: PASS (200 trials, c1 = {:.4}, c2 = {:.4}, longest circuit {max_len})",
        report.c1, report.c2
    );
}

#[test]
fn criterion_11_logarithm_round_trip() {
    let mut rng = sampling::rng(11);
    for k in 0..200 {
        let dim = 2 + (k % 7);
        let z = sampling::random_skew_herm_opnorm(&mut rng, dim, std::f64::consts::PI - 0.1);
        let u = expm_skew(&z).unwrap();
        let back = logm_unitary(&u).unwrap();
        let dist = op_dist(&back, &z).unwrap();
        assert!(dist <= 1e-9, "sample {k} (dim {dim}): round-trip {dist:e}");
    }
    println!("criterion 11: PASS (200 samples, tol 1e-9)");
}

#[test]
fn criterion_12_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_rootsim");
    let dir = tempfile::tempdir().unwrap();
    let ham = dir.path().join("h.json");
    std::fs::write(
        &ham,
        r#"{"n": 2, "terms": [{"coeff": 1.0, "ops": "ZZ"}, {"coeff": 0.6, "ops": "XI"}, {"coeff": -0.4, "ops": "IY"}]}"#,
    )
    .unwrap();
    let chain = dir.path().join("chain.json");
    std::fs::write(&chain, r#"{"model": "tfim", "n": 4, "J": 1.0, "h": 0.7}"#).unwrap();

    let runs: Vec<Vec<String>> = vec![
        vec![
            "decompose".into(),
            "--input".into(),
            ham.display().to_string(),
        ],
        vec![
            "functionals".into(),
            "--input".into(),
            chain.display().to_string(),
        ],
        vec![
            "split-error".into(),
            "--input".into(),
            ham.display().to_string(),
            "--points".into(),
            "6".into(),
        ],
        vec![
            "chain-scaling".into(),
            "--input".into(),
            chain.display().to_string(),
        ],
        vec![
            "lower-bound".into(),
            "--input".into(),
            ham.display().to_string(),
            "--samples".into(),
            "60".into(),
            "--seed".into(),
            "7".into(),
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for pass in 0..2 {
            let out_path = dir.path().join(format!("out_{i}_{pass}.json"));
            let mut full = args.clone();
            full.push("--output".into());
            full.push(out_path.display().to_string());
            let status = std::process::Command::new(bin)
                .args(&full)
                .status()
                .unwrap();
            assert!(status.success(), "command {args:?} failed");
            outputs.push(std::fs::read(&out_path).unwrap());
        }
        assert_eq!(
            outputs[0], outputs[1],
            "command {:?} output differs between runs",
            args[0]
        );
        println!(
            "criterion 12: {} deterministic ({} bytes)",
            args[0],
            outputs[0].len()
        );
    }
    println!("criterion 12: PASS");
}
