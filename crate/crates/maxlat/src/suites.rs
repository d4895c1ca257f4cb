//! Named verification suites over one configured run.
//!
//! Each suite instantiates a family of checked inequalities and aggregates
//! per-sample records into one row per statement (worst margin wins), so
//! reports stay readable at any sample count. Empirical operator norms
//! only ever appear in `info` rows or on the harmless side of an
//! inequality (a smaller norm shrinks the iteration weight).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::grids::{build_adjacent_system, choose_delta, AdjacentGridSystem};
use crate::lattice::{
    aoki_rolewicz_check, verify_modular_properties, verify_norm_equivalences,
    verify_quasi_triangle, ExponentFunction, Lattice, ModularKind,
};
use crate::maximal::{
    ball_maximal, verify_equivalence, verify_r_monotonicity, verify_subadditivity, MaximalOp,
};
use crate::numeric::margin;
use crate::report::{plot_csv, CheckRecord, Provenance, SuiteReport, Verdict};
use crate::selfimprove::{
    compute_self_improvement_params, estimate_operator_norm, holder_chain_check,
    params_consistency_records, self_improvement_bound_check, NormStrategy, SelfImproveInputs,
};
use crate::space::Space;
use crate::weights::{
    a1_dyadic_constant, admissible_eta, corollary_pointwise_check, reverse_holder_check,
    rubio_de_francia, verify_rdf_properties,
};

pub const SUITES: &[&str] = &[
    "axioms",
    "equivalence",
    "modular",
    "norms",
    "rdf",
    "reverse-holder",
    "selfimprove",
    "all",
];

/// A finished run: the report plus plot-ready tables (file name, body).
pub struct VerifyOutput {
    pub report: SuiteReport,
    pub plots: Vec<(String, String)>,
}

struct Ctx {
    cfg: RunConfig,
    space: Space,
    system: Option<AdjacentGridSystem>,
    build_failure: Option<CheckRecord>,
    lattice: Lattice,
    p: ExponentFunction,
}

impl Ctx {
    fn new(cfg: &RunConfig) -> Result<Ctx> {
        let space = cfg.resolve_space()?;
        let delta = if cfg.delta == 0.0 {
            choose_delta(space.a0())
        } else {
            cfg.delta
        };
        let (system, build_failure) =
            match build_adjacent_system(&space, delta, cfg.kmax_grids, cfg.seed) {
                Ok(system) => (Some(system), None),
                Err(e @ Error::InsufficientAdjacency { .. }) => (
                    None,
                    Some(CheckRecord::bool(
                        format!("grid-adjacency[{e}]"),
                        "ball-in-comparable-cube",
                        false,
                        0.0,
                        0.0,
                    )),
                ),
                Err(e) => return Err(e),
            };
        let p = cfg.resolve_exponents(space.n())?;
        let lattice = cfg.resolve_lattice(space.n())?;
        Ok(Ctx {
            cfg: cfg.clone(),
            space,
            system,
            build_failure,
            lattice,
            p,
        })
    }

    fn system(&self) -> Result<&AdjacentGridSystem> {
        self.system
            .as_ref()
            .ok_or_else(|| Error::Precondition("no grid system available for this suite".into()))
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(stream);
        rng
    }

    fn indicators(&self) -> Vec<Vec<f64>> {
        let n = self.space.n();
        (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect()
    }

    fn random_functions(&self, count: usize, stream: u64) -> Vec<Vec<f64>> {
        let n = self.space.n();
        let mut rng = self.rng(stream);
        (0..count)
            .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
            .collect()
    }

    fn md_norm_estimate(&self) -> Result<f64> {
        let system = self.system()?;
        let est = estimate_operator_norm(
            &self.space,
            Some(system),
            &self.lattice,
            MaximalOp::Dyadic,
            NormStrategy::Multistart {
                starts: self.cfg.norm_starts,
                steps: self.cfg.norm_steps,
            },
            self.cfg.seed ^ 0x6d64,
        )?;
        Ok(est.value)
    }
}

/// Collapses a family of per-sample records into one row carrying the
/// worst-margin instance; the verdict fails if any instance failed.
fn aggregate(name: &str, statement: &str, records: &[CheckRecord]) -> CheckRecord {
    assert!(!records.is_empty(), "aggregate of no records");
    let mut worst = &records[0];
    let mut worst_margin = f64::INFINITY;
    let mut any_fail = false;
    for r in records {
        any_fail |= r.failed();
        let m = margin(r.lhs, r.rhs);
        if m < worst_margin {
            worst_margin = m;
            worst = r;
        }
    }
    CheckRecord {
        name: format!("{name}[{} cases; worst {}]", records.len(), worst.name),
        statement: statement.to_string(),
        lhs: worst.lhs,
        rhs: worst.rhs,
        margin: worst_margin,
        verdict: if any_fail {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
    }
}

fn suite_axioms(ctx: &Ctx, report: &mut SuiteReport) -> Result<()> {
    let system = ctx.system()?;
    report.extend(crate::grids::verify_grid_axioms(&ctx.space, system));
    Ok(())
}

fn suite_equivalence(ctx: &Ctx, report: &mut SuiteReport) -> Result<()> {
    let system = ctx.system()?;
    let mut samples = ctx.indicators();
    samples.extend(ctx.random_functions(ctx.cfg.samples_random, 1));

    let mut by_ball = Vec::new();
    let mut by_dyadic = Vec::new();
    for f in &samples {
        let recs = verify_equivalence(&ctx.space, system, f)?;
        by_ball.push(recs[0].clone());
        by_dyadic.push(recs[1].clone());
    }
    report.push(aggregate(
        "equivalence-dyadic-by-ball",
        "pointwise-equivalence",
        &by_ball,
    ));
    report.push(aggregate(
        "equivalence-ball-by-dyadic",
        "pointwise-equivalence",
        &by_dyadic,
    ));

    // subadditivity: indicator split of one random function, then pairs
    let mut sub = Vec::new();
    if let Some(f) = samples.last() {
        let parts: Vec<Vec<f64>> = (0..ctx.space.n())
            .map(|i| {
                let mut e = vec![0.0; ctx.space.n()];
                e[i] = f[i];
                e
            })
            .collect();
        sub.extend(verify_subadditivity(&ctx.space, Some(system), &parts)?);
    }
    let pairs = ctx.random_functions(10, 2);
    for pair in pairs.chunks(2) {
        if pair.len() == 2 {
            sub.extend(verify_subadditivity(&ctx.space, Some(system), pair)?);
        }
    }
    report.push(aggregate("subadditivity", "countable-subadditivity", &sub));

    let mut mono = Vec::new();
    for f in samples.iter().take(10) {
        for (r, s) in [(1.0, 2.0), (0.5, 4.0)] {
            mono.extend(verify_r_monotonicity(&ctx.space, Some(system), f, r, s)?);
        }
    }
    report.push(aggregate(
        "power-monotonicity",
        "power-average-monotone",
        &mono,
    ));
    Ok(())
}

fn suite_modular(ctx: &Ctx, report: &mut SuiteReport) -> Result<()> {
    let fs = ctx.random_functions(20, 3);
    let gs = ctx.random_functions(20, 4);
    let mut by_statement: BTreeMap<String, Vec<CheckRecord>> = BTreeMap::new();
    for (f, g) in fs.iter().zip(&gs) {
        for alpha in [0.25, 0.5] {
            let recs = verify_modular_properties(&ctx.space, &ctx.p, f, g, alpha, 1.0 - alpha)?;
            for r in recs {
                by_statement.entry(r.statement.clone()).or_default().push(r);
            }
        }
    }
    for (statement, records) in by_statement {
        report.push(aggregate(&statement, &statement, &records));
    }
    Ok(())
}

fn lattice_family(ctx: &Ctx) -> Result<Vec<Lattice>> {
    let n = ctx.space.n();
    Ok(vec![
        Lattice::variable(ctx.p.clone(), ModularKind::Sum),
        Lattice::variable(ctx.p.clone(), ModularKind::Max),
        Lattice::variable(ctx.p.clone(), ModularKind::Sum).convexified(0.5)?,
        Lattice::variable(ctx.p.clone(), ModularKind::Max).convexified(2.0)?,
        Lattice::constant_exponent(n, 0.5, ModularKind::Sum)?,
        Lattice::constant_exponent(n, 2.0, ModularKind::Max)?,
    ])
}

fn suite_norms(ctx: &Ctx, report: &mut SuiteReport) -> Result<()> {
    let fs = ctx.random_functions(200, 5);
    let gs = ctx.random_functions(200, 6);
    for lattice in lattice_family(ctx)? {
        let mut tri = Vec::new();
        for (f, g) in fs.iter().zip(&gs) {
            tri.push(verify_quasi_triangle(&ctx.space, &lattice, f, g)?);
        }
        report.push(aggregate(
            &format!("quasi-triangle[{}]", lattice.descriptor()),
            "quasi-triangle",
            &tri,
        ));

        let ar = vec![
            aoki_rolewicz_check(&ctx.space, &lattice, &ctx.indicators())?,
            aoki_rolewicz_check(&ctx.space, &lattice, &ctx.random_functions(10, 7))?,
            aoki_rolewicz_check(&ctx.space, &lattice, &[fs[0].clone()])?,
        ];
        report.push(aggregate(
            &format!("aoki-rolewicz[{}]", lattice.descriptor()),
            "aoki-rolewicz-sum",
            &ar,
        ));
    }

    let mut by_statement: BTreeMap<String, Vec<CheckRecord>> = BTreeMap::new();
    for s in [0.5, 2.0] {
        for f in fs.iter().take(20) {
            for r in verify_norm_equivalences(&ctx.space, &ctx.p, s, f)? {
                by_statement
                    .entry(format!("{}[s={s}]", r.statement))
                    .or_default()
                    .push(r);
            }
        }
    }
    for (key, records) in by_statement {
        let statement = records[0].statement.clone();
        report.push(aggregate(&key, &statement, &records));
    }
    Ok(())
}

fn suite_rdf(ctx: &Ctx, report: &mut SuiteReport) -> Result<()> {
    let system = ctx.system()?;
    let md_norm = ctx.md_norm_estimate()?;
    report.push(CheckRecord::info(
        "dyadic-norm-lower-bound",
        "operator-norm-estimate",
        md_norm,
        md_norm,
    ));
    let rho = ctx.lattice.rho();
    let cap = 2f64.powf(-1.0 / rho) / (ctx.cfg.safety * md_norm);
    let hs = ctx.random_functions(10, 8);
    for &frac in &ctx.cfg.epsilon_fracs {
        if !(frac > 0.0 && frac < 1.0) {
            return Err(Error::Usage(format!(
                "epsilon fractions must lie in (0,1), got {frac}"
            )));
        }
        let epsilon = frac * cap;
        let mut by_statement: BTreeMap<String, Vec<CheckRecord>> = BTreeMap::new();
        for h in &hs {
            for r in verify_rdf_properties(
                &ctx.space,
                system,
                &ctx.lattice,
                h,
                epsilon,
                ctx.cfg.safety * md_norm,
            )? {
                by_statement.entry(r.statement.clone()).or_default().push(r);
            }
        }
        for (statement, records) in by_statement {
            report.push(aggregate(
                &format!("{statement}[eps={epsilon:.6}]"),
                &statement,
                &records,
            ));
        }

        // truncation certificate: a hundredfold tighter tail changes no verdict
        let h = &hs[0];
        let coarse = rubio_de_francia(&ctx.space, system, h, epsilon, ctx.cfg.tol_trunc)?;
        let fine = rubio_de_francia(&ctx.space, system, h, epsilon, ctx.cfg.tol_trunc / 100.0)?;
        let a1_coarse = a1_dyadic_constant(&ctx.space, system, &coarse.function)?;
        let a1_fine = a1_dyadic_constant(&ctx.space, system, &fine.function)?;
        let bound = 1.0 / epsilon + ctx.cfg.tol_trunc;
        report.push(CheckRecord::bool(
            format!("truncation-certificate[eps={epsilon:.6}]"),
            "truncation-certificate",
            (a1_coarse <= bound) == (a1_fine <= bound),
            a1_coarse,
            a1_fine,
        ));

        // eta0 consistency: eps [Rh] <= 1 keeps eta0 admissible for Rh
        report.push(CheckRecord::leq(
            format!("eta0-consistency[eps={epsilon:.6}]"),
            "eta0-consistency",
            epsilon * a1_fine,
            1.0,
            ctx.cfg.tol_trunc,
        ));
    }
    Ok(())
}

fn weight_families(ctx: &Ctx, system: &AdjacentGridSystem) -> Result<Vec<(String, Vec<f64>)>> {
    let n = ctx.space.n();
    let mut out = vec![
        ("constant".to_string(), vec![1.0; n]),
        (
            "alternating".to_string(),
            (0..n).map(|i| 1.0 + (i % 2) as f64).collect(),
        ),
    ];
    let hs = ctx.random_functions(ctx.cfg.samples_rdf.max(1), 9);
    for (i, h) in hs.iter().take(3).enumerate() {
        let rdf = rubio_de_francia(&ctx.space, system, h, 0.25, 1e-12)?;
        out.push((format!("rdf-{i}"), rdf.function));
    }
    Ok(out)
}

fn suite_reverse_holder(ctx: &Ctx, report: &mut SuiteReport) -> Result<()> {
    let system = ctx.system()?;
    for (name, w) in weight_families(ctx, system)? {
        let a1 = a1_dyadic_constant(&ctx.space, system, &w)?;
        let eta0 = if ctx.cfg.eta > 0.0 {
            ctx.cfg.eta
        } else {
            admissible_eta(system, a1)
        };
        for (tag, eta) in [
            ("eta0", eta0),
            ("eta0/2", eta0 / 2.0),
            ("eta0/10", eta0 / 10.0),
        ] {
            let mut recs = reverse_holder_check(&ctx.space, system, &w, eta)?;
            recs.extend(corollary_pointwise_check(&ctx.space, system, &w, eta)?);
            for mut r in recs {
                r.name = format!("{}[w={name},{tag}]", r.name);
                report.push(r);
            }
        }
    }
    Ok(())
}

fn default_s_sweep(s_max: f64) -> Vec<f64> {
    let mut sweep: Vec<f64> = [1.05, 1.1, 1.25, 1.5, 2.0]
        .iter()
        .copied()
        .filter(|s| *s <= s_max)
        .collect();
    if sweep.last() != Some(&s_max) && s_max > 1.0 {
        sweep.push(s_max);
    }
    sweep
}

/// The self-improvement suite: the per-function transfer to higher
/// convexifications, the report-only decay diagnostic, the explicit
/// parameter calculus, the bound on lower convexifications with its proof
/// chain replayed, and the translation between the convexified and the
/// rescaled-exponent routes.
pub fn run_theorem_suite(cfg: &RunConfig) -> Result<VerifyOutput> {
    let ctx = Ctx::new(cfg)?;
    let mut report = SuiteReport::new(provenance(&ctx)?);
    if let Some(fail) = &ctx.build_failure {
        report.push(fail.clone());
        return Ok(VerifyOutput {
            report,
            plots: Vec::new(),
        });
    }
    let mut plots = Vec::new();
    theorem_suite_into(&ctx, &mut report, &mut plots)?;
    Ok(VerifyOutput { report, plots })
}

fn theorem_suite_into(
    ctx: &Ctx,
    report: &mut SuiteReport,
    plots: &mut Vec<(String, String)>,
) -> Result<()> {
    let system = ctx.system()?;
    let strategy = NormStrategy::Multistart {
        starts: ctx.cfg.norm_starts,
        steps: ctx.cfg.norm_steps,
    };

    let md_est = estimate_operator_norm(
        &ctx.space,
        Some(system),
        &ctx.lattice,
        MaximalOp::Dyadic,
        strategy,
        ctx.cfg.seed ^ 0x6d64,
    )?;
    let m_est = estimate_operator_norm(
        &ctx.space,
        Some(system),
        &ctx.lattice,
        MaximalOp::Ball,
        strategy,
        ctx.cfg.seed ^ 0x6d,
    )?;
    report.push(CheckRecord::info(
        "dyadic-norm-lower-bound",
        "operator-norm-estimate",
        md_est.value,
        md_est.value,
    ));
    report.push(CheckRecord::info(
        "ball-norm-lower-bound",
        "operator-norm-estimate",
        m_est.value,
        m_est.value,
    ));

    // transfer to higher convexifications, per-function form
    let sweep = default_s_sweep(ctx.cfg.s_max);
    let mut samples = ctx.indicators();
    samples.extend(ctx.random_functions(10, 10));
    for &s in &sweep {
        let mut recs = Vec::new();
        for f in &samples {
            recs.push(holder_chain_check(&ctx.space, &ctx.lattice, f, 1.0, s)?);
        }
        report.push(aggregate(
            &format!("holder-chain[s={s}]"),
            "holder-chain-per-function",
            &recs,
        ));
    }
    let mut recs = Vec::new();
    for (r, s) in [(0.5, 1.0), (0.75, 1.5)] {
        for f in samples.iter().take(8) {
            recs.push(holder_chain_check(&ctx.space, &ctx.lattice, f, r, s)?);
        }
    }
    report.push(aggregate(
        "holder-chain[fractional]",
        "holder-chain-per-function",
        &recs,
    ));

    // decay diagnostic: (s-1) ||M||_{X^(s)} as s drops to 1; estimates are
    // lower bounds, so these rows are informational by construction
    let mut decay_rows = Vec::new();
    for &s in sweep.iter().rev() {
        let xs = ctx.lattice.clone().convexified(s)?;
        let est = estimate_operator_norm(
            &ctx.space,
            Some(system),
            &xs,
            MaximalOp::Ball,
            NormStrategy::Multistart {
                starts: ctx.cfg.norm_starts.min(4),
                steps: ctx.cfg.norm_steps.min(15),
            },
            ctx.cfg.seed ^ s.to_bits(),
        )?;
        let value = (s - 1.0) * est.value;
        decay_rows.push((s, value));
        report.push(CheckRecord::info(
            format!("decay-diagnostic[s={s}]"),
            "norm-decay-toward-one",
            value,
            value,
        ));
    }
    plots.push(("decay.csv".into(), plot_csv("s", "decay", &decay_rows)));

    // explicit parameter calculus and the lower-convexification bound
    let inputs = SelfImproveInputs::from_parts(
        system,
        &ctx.lattice,
        ctx.cfg.safety * md_est.value,
        m_est.value,
    );
    let params = compute_self_improvement_params(&inputs, ctx.cfg.theta, 1.0)?;
    report.extend(params_consistency_records(&params));

    let r_grid = [params.r0, 0.5 * (1.0 + params.r0), 0.99];
    let mut sample_family = ctx.indicators();
    sample_family.extend(ctx.random_functions(ctx.cfg.samples_random.min(20), 11));
    for h in ctx.random_functions(ctx.cfg.samples_rdf, 12) {
        sample_family
            .push(rubio_de_francia(&ctx.space, system, &h, params.epsilon, 1e-12)?.function);
    }
    for &r in &r_grid {
        let mut by_statement: BTreeMap<String, Vec<CheckRecord>> = BTreeMap::new();
        for f in &sample_family {
            for rec in
                self_improvement_bound_check(&ctx.space, system, &ctx.lattice, &params, f, r)?
            {
                by_statement
                    .entry(rec.statement.clone())
                    .or_default()
                    .push(rec);
            }
        }
        for (statement, records) in by_statement {
            report.push(aggregate(
                &format!("{statement}[r={r}]"),
                &statement,
                &records,
            ));
        }
    }

    let coeff_rows: Vec<(f64, f64)> = (0..=25)
        .map(|i| {
            let r = 0.75 + 0.25 * i as f64 / 25.0;
            (r, params.bound_coeff(r))
        })
        .collect();
    plots.push((
        "bound_coeff.csv".into(),
        plot_csv("r", "bound_coeff", &coeff_rows),
    ));

    corollary_translation(ctx, report, &sweep)?;
    Ok(())
}

/// Translation between the convexified quasi-norm route and the direct
/// rescaled-exponent route, at the per-function norm-ratio level: within
/// the factor `c(p_-, s)` for the sum modular, exactly for the max one.
fn corollary_translation(ctx: &Ctx, report: &mut SuiteReport, sweep: &[f64]) -> Result<()> {
    let pm = ctx.p.p_minus();
    let mut samples = ctx.indicators();
    samples.extend(ctx.random_functions(10, 13));
    for &s in sweep.iter().rev().take(2) {
        let c_factor = 2f64.powf((1.0 / (s * pm)).max(1.0) + (1.0 / s) * (1.0 / pm).max(1.0));
        let scaled = ctx.p.scaled(s)?;
        let sum_convex = Lattice::variable(ctx.p.clone(), ModularKind::Sum).convexified(s)?;
        let sum_direct = Lattice::variable(scaled.clone(), ModularKind::Sum);
        let max_convex = Lattice::variable(ctx.p.clone(), ModularKind::Max).convexified(s)?;
        let max_direct = Lattice::variable(scaled, ModularKind::Max);

        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut equal = Vec::new();
        for f in &samples {
            let mf = ball_maximal(&ctx.space, f, 1.0)?;
            let ratio = |lat: &Lattice| -> Result<f64> {
                Ok(lat.quasinorm(&ctx.space, &mf)? / lat.quasinorm(&ctx.space, f)?)
            };
            let rc = ratio(&sum_convex)?;
            let rd = ratio(&sum_direct)?;
            upper.push(CheckRecord::leq(
                format!("corollary-ratio-upper[s={s}]"),
                "corollary-norm-translation",
                rc,
                c_factor * rd,
                ctx.cfg.tol_norm,
            ));
            lower.push(CheckRecord::leq(
                format!("corollary-ratio-lower[s={s}]"),
                "corollary-norm-translation",
                rd,
                c_factor * rc,
                ctx.cfg.tol_norm,
            ));
            equal.push(CheckRecord::eq(
                format!("corollary-ratio-max-equality[s={s}]"),
                "max-norm-convexification-equality",
                ratio(&max_convex)?,
                ratio(&max_direct)?,
                ctx.cfg.tol_norm,
            ));
        }
        report.push(aggregate(
            &format!("corollary-ratio-upper[s={s}]"),
            "corollary-norm-translation",
            &upper,
        ));
        report.push(aggregate(
            &format!("corollary-ratio-lower[s={s}]"),
            "corollary-norm-translation",
            &lower,
        ));
        report.push(aggregate(
            &format!("corollary-ratio-max-equality[s={s}]"),
            "max-norm-convexification-equality",
            &equal,
        ));
    }
    Ok(())
}

fn provenance(ctx: &Ctx) -> Result<Provenance> {
    let mut constants = BTreeMap::new();
    constants.insert("a0".into(), ctx.space.a0());
    constants.insert("doubling".into(), ctx.space.doubling_constant());
    constants.insert(
        "geometric_doubling".into(),
        ctx.space.geometric_doubling() as f64,
    );
    let system_desc = if let Some(system) = &ctx.system {
        constants.insert("delta".into(), system.delta);
        constants.insert("grid_count".into(), system.constants.grid_count as f64);
        constants.insert("c_ball_cube".into(), system.constants.c_ball_cube);
        constants.insert("c1_measured".into(), system.constants.c1_measured);
        constants.insert("s_formula".into(), system.constants.s_formula);
        if let Some(s) = system.constants.s_measured {
            constants.insert("s_measured".into(), s);
        }
        system.descriptor()
    } else {
        "unbuilt".into()
    };
    constants.insert("rho".into(), ctx.lattice.rho());
    constants.insert("c_tri".into(), ctx.lattice.c_tri());
    constants.insert("c_fatou".into(), ctx.lattice.c_fatou());
    Ok(Provenance {
        library_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: ctx.cfg.hash(),
        seed: ctx.cfg.seed,
        space: format!("{} (n={})", ctx.cfg.space, ctx.space.n()),
        system: system_desc,
        lattice: ctx.lattice.descriptor(),
        constants,
    })
}

/// Runs the selected suite (or all of them) and assembles the report.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyOutput> {
    if !SUITES.contains(&cfg.suite.as_str()) {
        return Err(Error::Usage(format!(
            "unknown suite {:?}; expected one of {}",
            cfg.suite,
            SUITES.join(", ")
        )));
    }
    let ctx = Ctx::new(cfg)?;
    let mut report = SuiteReport::new(provenance(&ctx)?);
    let mut plots = Vec::new();

    if let Some(fail) = &ctx.build_failure {
        report.push(fail.clone());
        return Ok(VerifyOutput { report, plots });
    }

    let selected = |name: &str| cfg.suite == name || cfg.suite == "all";
    if selected("axioms") {
        suite_axioms(&ctx, &mut report)?;
    }
    if selected("equivalence") {
        suite_equivalence(&ctx, &mut report)?;
    }
    if selected("modular") {
        suite_modular(&ctx, &mut report)?;
    }
    if selected("norms") {
        suite_norms(&ctx, &mut report)?;
    }
    if selected("rdf") {
        suite_rdf(&ctx, &mut report)?;
    }
    if selected("reverse-holder") {
        suite_reverse_holder(&ctx, &mut report)?;
    }
    if selected("selfimprove") {
        theorem_suite_into(&ctx, &mut report, &mut plots)?;
    }
    Ok(VerifyOutput { report, plots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes_everything() {
        let cfg = RunConfig {
            samples_random: 20,
            norm_steps: 10,
            norm_starts: 4,
            ..RunConfig::default()
        };
        let out = run_verify(&cfg).unwrap();
        if let Some(rec) = out.report.failures().next() {
            panic!("unexpected failure: {rec:?}");
        }
        assert!(out.report.passed());
        assert!(!out.report.records.is_empty());
        assert_eq!(out.plots.len(), 2);
    }

    #[test]
    fn theorem_suite_max_modular_route() {
        let cfg = RunConfig {
            modular: "max".into(),
            suite: "selfimprove".into(),
            samples_random: 10,
            norm_steps: 8,
            norm_starts: 3,
            ..RunConfig::default()
        };
        let out = run_theorem_suite(&cfg).unwrap();
        assert!(
            out.report.passed(),
            "{:?}",
            out.report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        let cfg = RunConfig {
            suite: "wat".into(),
            ..RunConfig::default()
        };
        assert!(matches!(run_verify(&cfg), Err(Error::Usage(_))));
    }

    #[test]
    fn out_of_range_eta_is_precondition_error() {
        let cfg = RunConfig {
            suite: "reverse-holder".into(),
            eta: 999.0,
            ..RunConfig::default()
        };
        assert!(matches!(run_verify(&cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = RunConfig {
            suite: "equivalence".into(),
            samples_random: 15,
            ..RunConfig::default()
        };
        let a = run_verify(&cfg).unwrap();
        let b = run_verify(&cfg).unwrap();
        assert_eq!(a.report.to_csv(), b.report.to_csv());
        assert_eq!(a.report.to_json(), b.report.to_json());
    }
}
