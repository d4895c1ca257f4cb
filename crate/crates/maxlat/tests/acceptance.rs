//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! The maximal-operator oracle here is an independent naive double loop:
//! for every candidate ball (center, threshold) it recomputes membership
//! and the average from scratch with plain summation, sharing no index
//! structures with the library path.

use std::sync::OnceLock;
use std::time::Instant;

use maxlat::config::RunConfig;
use maxlat::grids::{build_adjacent_system, choose_delta, verify_grid_axioms, AdjacentGridSystem};
use maxlat::lattice::{
    aoki_rolewicz_check, luxemburg_norm, verify_modular_properties, verify_norm_equivalences,
    verify_quasi_triangle, ExponentFunction, Lattice, ModularKind,
};
use maxlat::maximal::{ball_maximal, dyadic_maximal, verify_equivalence, MaximalOp};
use maxlat::selfimprove::{
    compute_self_improvement_params, estimate_operator_norm, holder_chain_check,
    self_improvement_bound_check, NormStrategy, SelfImproveInputs,
};
use maxlat::space::{generate_space, Space, SpaceKind};
use maxlat::weights::{
    a1_dyadic_constant, admissible_eta, corollary_pointwise_check, reverse_holder_check,
    rubio_de_francia, verify_rdf_properties,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// 25 seeded spaces with point counts capped at `max_n`.
fn corpus_kinds(max_n: usize) -> Vec<(String, SpaceKind, u64)> {
    let cap = |n: usize| n.min(max_n);
    let mut kinds: Vec<(String, SpaceKind, u64)> = Vec::new();
    for n in [3usize, 5, 16, 40] {
        kinds.push((format!("path:{}", cap(n)), SpaceKind::Path { n: cap(n) }, 0));
    }
    for (n, beta) in [(3usize, 2.0), (8, 1.5)] {
        kinds.push((
            format!("snowflake:{beta}:path:{n}"),
            SpaceKind::Snowflake {
                base: Box::new(SpaceKind::Path { n }),
                beta,
            },
            0,
        ));
    }
    for (n, beta, seed) in [(12usize, 2.0, 5u64), (20, 1.5, 6)] {
        kinds.push((
            format!("snowflake:{beta}:planar:{n}"),
            SpaceKind::Snowflake {
                base: Box::new(SpaceKind::RandomPlanar { n }),
                beta,
            },
            seed,
        ));
    }
    for n in [4usize, 9, 25] {
        kinds.push((format!("discrete:{n}"), SpaceKind::Discrete { n }, 0));
    }
    for side in [3usize, 4, 6] {
        kinds.push((format!("grid2d:{side}"), SpaceKind::Grid2d { side }, 0));
    }
    for depth in [3u32, 4, 5] {
        kinds.push((
            format!("cantor:{depth}"),
            SpaceKind::CantorUltrametric { depth },
            0,
        ));
    }
    for (i, n) in [16usize, 24, 32, 48, 56, 64, 96, 128]
        .into_iter()
        .enumerate()
    {
        kinds.push((
            format!("planar:{}", cap(n)),
            SpaceKind::RandomPlanar { n: cap(n) },
            10 + i as u64,
        ));
    }
    assert_eq!(kinds.len(), 25);
    kinds
}

fn corpus64() -> &'static Vec<(String, Space)> {
    static CORPUS: OnceLock<Vec<(String, Space)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        corpus_kinds(64)
            .into_iter()
            .map(|(name, kind, seed)| (name, generate_space(&kind, seed).unwrap()))
            .collect()
    })
}

fn systems128() -> &'static Vec<(String, Space, AdjacentGridSystem)> {
    static SYSTEMS: OnceLock<Vec<(String, Space, AdjacentGridSystem)>> = OnceLock::new();
    SYSTEMS.get_or_init(|| {
        corpus_kinds(128)
            .into_iter()
            .map(|(name, kind, seed)| {
                let space = generate_space(&kind, seed).unwrap();
                let delta = choose_delta(space.a0());
                let system = build_adjacent_system(&space, delta, 24, 1000 + seed)
                    .unwrap_or_else(|e| panic!("{name}: {e}"));
                (name, space, system)
            })
            .collect()
    })
}

fn path3_system() -> (Space, AdjacentGridSystem) {
    let space = generate_space(&SpaceKind::Path { n: 3 }, 0).unwrap();
    let system = build_adjacent_system(&space, 1.0 / 128.0, 24, 3).unwrap();
    (space, system)
}

fn random_functions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

fn indicators(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect()
}

// --- naive oracles -------------------------------------------------------

#[allow(clippy::needless_range_loop)] // plain indexed loops are the point
fn naive_ball_maximal(space: &Space, f: &[f64], r: f64) -> Vec<f64> {
    let n = space.n();
    let mut out = vec![0.0f64; n];
    for c in 0..n {
        for t in 0..n {
            let d = space.dist(c, t);
            let radius = if d == 0.0 {
                0.5 * space.min_separation()
            } else {
                d.next_up()
            };
            let mut sum = 0.0;
            let mut measure = 0.0;
            for y in 0..n {
                if space.dist(c, y) < radius {
                    sum += f[y].abs().powf(r) * space.mass(y);
                    measure += space.mass(y);
                }
            }
            let avg = (sum / measure).powf(1.0 / r);
            for x in 0..n {
                if space.dist(c, x) < radius && avg > out[x] {
                    out[x] = avg;
                }
            }
        }
    }
    out
}

fn naive_dyadic_maximal(space: &Space, system: &AdjacentGridSystem, f: &[f64], r: f64) -> Vec<f64> {
    let n = space.n();
    let mut out = vec![0.0f64; n];
    for grid in &system.grids {
        for cubes in &grid.levels {
            for cube in cubes {
                let ids = cube.members.to_indices();
                let mut sum = 0.0;
                let mut measure = 0.0;
                for &y in &ids {
                    sum += f[y].abs().powf(r) * space.mass(y);
                    measure += space.mass(y);
                }
                let avg = (sum / measure).powf(1.0 / r);
                for &x in &ids {
                    if avg > out[x] {
                        out[x] = avg;
                    }
                }
            }
        }
    }
    out
}

// --- criteria ------------------------------------------------------------

#[test]
fn criterion_01_maximal_oracle_equivalence() {
    let start = Instant::now();
    let mut checked = 0usize;
    for (name, space) in corpus64() {
        let n = space.n();
        let system = build_adjacent_system(space, choose_delta(space.a0()), 24, 2000).unwrap();
        let mut fs = random_functions(n, 3, 42);
        fs.push(vec![1.0; n]);
        let mut e = vec![0.0; n];
        e[n / 2] = 1.0;
        fs.push(e);
        for f in &fs {
            for r in [1.0, 2.0] {
                let fast = ball_maximal(space, f, r).unwrap();
                let slow = naive_ball_maximal(space, f, r);
                for (a, b) in fast.iter().zip(&slow) {
                    assert!(close_rel(*a, *b, 1e-12), "{name} ball r={r}: {a} vs {b}");
                }
                let fast = dyadic_maximal(space, &system, f, r).unwrap();
                let slow = naive_dyadic_maximal(space, &system, f, r);
                for (a, b) in fast.iter().zip(&slow) {
                    assert!(close_rel(*a, *b, 1e-12), "{name} dyadic r={r}: {a} vs {b}");
                }
                checked += 2;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "oracle sweep took {elapsed:?}"
    );
    println!(
        "ACCEPTANCE 01 maximal-oracle-equivalence: PASS ({checked} evaluations on 25 spaces in {elapsed:?})"
    );
}

#[test]
fn criterion_02_hand_traced_values() {
    let space = generate_space(&SpaceKind::Path { n: 3 }, 0).unwrap();
    let mf = ball_maximal(&space, &[1.0, 0.0, 0.0], 1.0).unwrap();
    let expected = [1.0, 0.5, 1.0 / 3.0];
    for (a, b) in mf.iter().zip(&expected) {
        assert!(close_rel(*a, *b, 1e-12), "{a} vs {b}");
    }
    let l1 = Lattice::constant_exponent(3, 1.0, ModularKind::Sum).unwrap();
    let est = estimate_operator_norm(
        &space,
        None,
        &l1,
        MaximalOp::Ball,
        NormStrategy::ExactL1PointMass,
        0,
    )
    .unwrap();
    assert!(close_rel(est.value, 2.0, 1e-12), "{}", est.value);
    println!(
        "ACCEPTANCE 02 hand-traced-values: PASS (Mf=(1,1/2,1/3), L1 norm = {})",
        est.value
    );
}

#[test]
fn criterion_03_grid_axioms_on_corpus() {
    let start = Instant::now();
    for (name, space, system) in systems128() {
        let records = verify_grid_axioms(space, system);
        for rec in &records {
            assert!(!rec.failed(), "{name}: {rec:?}");
        }
        assert!(
            system.constants.c_ball_cube.is_finite(),
            "{name}: infinite ball/cube constant"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "axiom sweep took {elapsed:?}");
    println!(
        "ACCEPTANCE 03 grid-axioms: PASS (25 systems, K up to {}, in {elapsed:?})",
        systems128()
            .iter()
            .map(|(_, _, s)| s.constants.grid_count)
            .max()
            .unwrap()
    );
}

#[test]
fn criterion_04_pointwise_equivalence() {
    let mut cases = 0usize;
    for (name, space, system) in systems128() {
        let n = space.n();
        let mut fs = indicators(n);
        fs.extend(random_functions(n, 100, 4242));
        for f in &fs {
            for rec in verify_equivalence(space, system, f).unwrap() {
                assert!(!rec.failed(), "{name}: {rec:?}");
            }
            cases += 1;
        }
    }
    println!("ACCEPTANCE 04 pointwise-equivalence: PASS ({cases} functions across 25 systems)");
}

#[test]
fn criterion_05_luxemburg_vs_closed_form() {
    let start = Instant::now();
    let space = generate_space(&SpaceKind::RandomPlanar { n: 24 }, 77).unwrap();
    let n = space.n();
    let fs = random_functions(n, 100, 505);
    let mut cases = 0usize;
    for p_const in [0.5, 1.0, 2.0, 7.0, f64::INFINITY] {
        let p = ExponentFunction::constant(n, p_const).unwrap();
        for f in &fs {
            let signed: Vec<f64> = f.iter().map(|v| 3.0 * v - 1.0).collect();
            let got = luxemburg_norm(&space, &signed, &p, ModularKind::Sum).unwrap();
            let expected = if p_const == f64::INFINITY {
                signed.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            } else {
                (0..n)
                    .map(|i| signed[i].abs().powf(p_const) * space.mass(i))
                    .sum::<f64>()
                    .powf(1.0 / p_const)
            };
            assert!(
                close_rel(got, expected, 1e-12),
                "p={p_const}: {got} vs {expected}"
            );
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(cases, 500);
    assert!(elapsed.as_secs_f64() < 5.0, "solver sweep took {elapsed:?}");
    println!("ACCEPTANCE 05 luxemburg-closed-form: PASS (500 cases in {elapsed:?})");
}

#[test]
fn criterion_06_lattice_suite() {
    let space = generate_space(&SpaceKind::RandomPlanar { n: 10 }, 11).unwrap();
    let n = space.n();
    let p_var = ExponentFunction::new(vec![
        2.0,
        3.0,
        0.5,
        f64::INFINITY,
        1.0,
        2.5,
        0.75,
        4.0,
        f64::INFINITY,
        1.5,
    ])
    .unwrap();
    let mut lattices = Vec::new();
    for kind in [ModularKind::Sum, ModularKind::Max] {
        lattices.push(Lattice::constant_exponent(n, 2.0, kind).unwrap());
        lattices.push(Lattice::constant_exponent(n, 0.5, kind).unwrap());
        lattices.push(Lattice::variable(p_var.clone(), kind));
        lattices.push(
            Lattice::variable(p_var.clone(), kind)
                .convexified(0.75)
                .unwrap(),
        );
        lattices.push(
            Lattice::variable(p_var.clone(), kind)
                .convexified(2.0)
                .unwrap(),
        );
    }

    let fs = random_functions(n, 200, 66);
    let gs = random_functions(n, 200, 67);
    for lattice in &lattices {
        for (f, g) in fs.iter().zip(&gs) {
            let rec = verify_quasi_triangle(&space, lattice, f, g).unwrap();
            assert!(!rec.failed(), "{}: {rec:?}", lattice.descriptor());
        }
        let rec = aoki_rolewicz_check(&space, lattice, &fs[..10]).unwrap();
        assert!(!rec.failed(), "{rec:?}");
        let rec = aoki_rolewicz_check(&space, lattice, &indicators(n)).unwrap();
        assert!(!rec.failed(), "{rec:?}");
    }

    for (f, g) in fs.iter().zip(&gs).take(30) {
        for alpha in [0.25, 0.5, 0.75] {
            for rec in verify_modular_properties(&space, &p_var, f, g, alpha, 1.0 - alpha).unwrap()
            {
                assert!(!rec.failed(), "{rec:?}");
            }
        }
    }

    for s in [0.5, 1.0, 2.0] {
        for f in fs.iter().take(50) {
            for rec in verify_norm_equivalences(&space, &p_var, s, f).unwrap() {
                assert!(!rec.failed(), "s={s}: {rec:?}");
            }
        }
    }
    // the sandwich constants at p_- = 2, s = 2 are 2^(-1/2) and 2
    let p2 = ExponentFunction::constant(n, 2.0).unwrap();
    let f = &fs[0];
    let convex = Lattice::variable(p2.clone(), ModularKind::Sum)
        .convexified(2.0)
        .unwrap();
    let direct = luxemburg_norm(&space, f, &p2.scaled(2.0).unwrap(), ModularKind::Sum).unwrap();
    let via = convex.quasinorm(&space, f).unwrap();
    assert!(2f64.powf(-0.5) * via <= direct * (1.0 + 1e-10));
    assert!(direct <= 2.0 * via * (1.0 + 1e-10));
    println!(
        "ACCEPTANCE 06 lattice-suite: PASS ({} lattices, 200 pairs each)",
        lattices.len()
    );
}

#[test]
fn criterion_07_rubio_de_francia() {
    let (space, system) = path3_system();
    let lattice = Lattice::variable(
        ExponentFunction::new(vec![2.0, 3.0, 2.0]).unwrap(),
        ModularKind::Sum,
    );
    let md_est = estimate_operator_norm(
        &space,
        Some(&system),
        &lattice,
        MaximalOp::Dyadic,
        NormStrategy::Multistart {
            starts: 8,
            steps: 25,
        },
        9,
    )
    .unwrap();
    let inflated = 1.5 * md_est.value;
    let cap = 2f64.powf(-1.0 / lattice.rho()) / inflated;
    let hs = random_functions(3, 10, 700);
    for frac in [0.25, 0.5, 0.75] {
        let epsilon = frac * cap;
        for h in &hs {
            let records =
                verify_rdf_properties(&space, &system, &lattice, h, epsilon, inflated).unwrap();
            for rec in &records {
                assert!(!rec.failed(), "eps={epsilon}: {rec:?}");
            }
            // the A1 bound restated with absolute slack
            let rdf = rubio_de_francia(&space, &system, h, epsilon, 1e-12).unwrap();
            let a1 = a1_dyadic_constant(&space, &system, &rdf.function).unwrap();
            assert!(a1 <= 1.0 / epsilon + 1e-9);

            // truncation certificate: verdicts stable under tol/100
            let fine = rubio_de_francia(&space, &system, h, epsilon, 1e-14).unwrap();
            let a1_fine = a1_dyadic_constant(&space, &system, &fine.function).unwrap();
            assert_eq!(a1 <= 1.0 / epsilon + 1e-9, a1_fine <= 1.0 / epsilon + 1e-9);
            for (c, f) in rdf.function.iter().zip(&fine.function) {
                assert!((c - f).abs() <= rdf.tail_bound + fine.tail_bound + 1e-15);
            }
        }
    }
    println!("ACCEPTANCE 07 rubio-de-francia: PASS (10 seeds x 3 weights, certificates stable)");
}

#[test]
fn criterion_08_reverse_holder_and_corollary() {
    for (name, space, system) in [
        {
            let (s, g) = path3_system();
            ("path:3".to_string(), s, g)
        },
        {
            let space = generate_space(&SpaceKind::RandomPlanar { n: 16 }, 21).unwrap();
            let system = build_adjacent_system(&space, choose_delta(space.a0()), 24, 77).unwrap();
            ("planar:16".to_string(), space, system)
        },
        {
            let space = generate_space(
                &SpaceKind::Snowflake {
                    base: Box::new(SpaceKind::Path { n: 4 }),
                    beta: 2.0,
                },
                0,
            )
            .unwrap();
            let system = build_adjacent_system(&space, choose_delta(space.a0()), 24, 78).unwrap();
            ("snowflake:2:path:4".to_string(), space, system)
        },
    ] {
        let n = space.n();
        let mut weights: Vec<Vec<f64>> =
            vec![vec![1.0; n], (0..n).map(|i| 1.0 + (i % 2) as f64).collect()];
        for h in random_functions(n, 2, 800) {
            weights.push(
                rubio_de_francia(&space, &system, &h, 0.25, 1e-12)
                    .unwrap()
                    .function,
            );
        }
        for w in &weights {
            let a1 = a1_dyadic_constant(&space, &system, w).unwrap();
            let eta0 = admissible_eta(&system, a1);
            for eta in [eta0, eta0 / 2.0, eta0 / 10.0] {
                for rec in reverse_holder_check(&space, &system, w, eta).unwrap() {
                    assert!(!rec.failed(), "{name}: {rec:?}");
                }
                for rec in corollary_pointwise_check(&space, &system, w, eta).unwrap() {
                    assert!(!rec.failed(), "{name}: {rec:?}");
                }
            }
        }
    }
    println!("ACCEPTANCE 08 reverse-holder: PASS (3 systems x 4 weights x 3 exponent bumps)");
}

#[test]
fn criterion_09_self_improvement_chain() {
    // parameter identities at unit constants
    let unit = compute_self_improvement_params(&SelfImproveInputs::unit(), 1.0, 1.0).unwrap();
    assert_eq!(unit.epsilon, 0.5);
    assert_eq!(unit.eta0, 0.25);
    assert_eq!(unit.r0, 0.8);
    assert_eq!(unit.r0, unit.r0_lower_bound);

    let (space, system) = path3_system();
    let lattice = Lattice::constant_exponent(3, 2.0, ModularKind::Sum).unwrap();
    let md_est = estimate_operator_norm(
        &space,
        Some(&system),
        &lattice,
        MaximalOp::Dyadic,
        NormStrategy::Multistart {
            starts: 8,
            steps: 25,
        },
        5,
    )
    .unwrap();
    let m_est = estimate_operator_norm(
        &space,
        Some(&system),
        &lattice,
        MaximalOp::Ball,
        NormStrategy::Multistart {
            starts: 8,
            steps: 25,
        },
        6,
    )
    .unwrap();
    // theta = 1/2 with the safety-inflated norm estimate
    let inputs = SelfImproveInputs::from_parts(&system, &lattice, 1.5 * md_est.value, m_est.value);
    let params = compute_self_improvement_params(&inputs, 0.5, 1.0).unwrap();
    assert!(params.r0 > 0.0 && params.r0 <= 1.0 && params.eta0 > 0.0);

    let mut samples = indicators(3);
    samples.extend(random_functions(3, 10, 900));
    for h in random_functions(3, 3, 901) {
        samples.push(
            rubio_de_francia(&space, &system, &h, params.epsilon, 1e-12)
                .unwrap()
                .function,
        );
    }
    let r_grid = [params.r0, 0.5 * (1.0 + params.r0), 0.99];
    for f in &samples {
        for &r in &r_grid {
            for rec in
                self_improvement_bound_check(&space, &system, &lattice, &params, f, r).unwrap()
            {
                assert!(!rec.failed(), "r={r}: {rec:?}");
            }
        }
    }
    println!(
        "ACCEPTANCE 09 self-improvement: PASS (eps={:.4}, {} samples x 3 orders; unit identities exact)",
        params.epsilon,
        samples.len()
    );
}

#[test]
fn criterion_10_holder_chain() {
    let (space, _) = path3_system();
    // closed-form instance: lhs 7/6, rhs sqrt(11/6)
    let l1 = Lattice::constant_exponent(3, 1.0, ModularKind::Sum).unwrap();
    let rec = holder_chain_check(&space, &l1, &[1.0, 0.0, 0.0], 1.0, 2.0).unwrap();
    assert!(!rec.failed());
    assert!(close_rel(rec.lhs, 7.0 / 6.0, 1e-12));
    assert!(close_rel(rec.rhs, (11.0f64 / 6.0).sqrt(), 1e-12));

    let space = generate_space(&SpaceKind::RandomPlanar { n: 8 }, 31).unwrap();
    let p = ExponentFunction::new(vec![2.0, 3.0, 2.0, 1.5, f64::INFINITY, 0.8, 2.0, 1.0]).unwrap();
    let fs = random_functions(8, 100, 1000);
    for kind in [ModularKind::Sum, ModularKind::Max] {
        let base = Lattice::variable(p.clone(), kind);
        for (r, s) in [(1.0, 2.0), (0.5, 1.0), (0.75, 1.5)] {
            for f in &fs {
                let rec = holder_chain_check(&space, &base, f, r, s).unwrap();
                assert!(!rec.failed(), "r={r} s={s}: {rec:?}");
            }
        }
    }
    println!("ACCEPTANCE 10 holder-chain: PASS (closed form + 600 sampled triples)");
}

#[test]
fn criterion_11_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| -> (i32, Vec<u8>, Vec<u8>) {
        let out = dir.path().join(sub);
        let code = maxlat::cli::run_command([
            "maxlat",
            "verify",
            "--suite",
            "all",
            "--space",
            "path:3",
            "--seed",
            "7",
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        (
            code,
            std::fs::read(out.join("report.csv")).unwrap(),
            std::fs::read(out.join("report.json")).unwrap(),
        )
    };
    let (code1, csv1, json1) = run("a");
    let (code2, csv2, json2) = run("b");
    assert_eq!(code1, 0);
    assert_eq!(code2, 0);
    assert_eq!(csv1, csv2, "CSV reports differ between identical runs");
    assert_eq!(json1, json2, "JSON reports differ between identical runs");
    // plot tables: one row per grid value plus a header, LF endings
    let coeff = std::fs::read_to_string(dir.path().join("a/bound_coeff.csv")).unwrap();
    assert_eq!(coeff.lines().count(), 27);
    assert!(!coeff.contains('\r'));
    assert!(dir.path().join("a/decay.csv").exists());
    println!(
        "ACCEPTANCE 11 determinism: PASS (byte-identical reports, {} bytes of CSV)",
        csv1.len()
    );
}

#[test]
fn run_config_defaults_drive_the_full_pipeline() {
    // the default configuration document resolves and passes end to end
    let cfg = RunConfig {
        samples_random: 25,
        norm_starts: 4,
        norm_steps: 12,
        ..RunConfig::default()
    };
    let out = maxlat::suites::run_verify(&cfg).unwrap();
    assert!(out.report.passed());
}
