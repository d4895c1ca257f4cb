//! The self-improvement pipeline end to end: operator-norm estimation,
//! the explicit parameter calculus (iteration weight, exponent bump,
//! convexification threshold), the boundedness transfer to higher and
//! lower convexifications, and the full suite report.
//!
//! Run: `cargo run --example self_improvement`

use maxlat::config::RunConfig;
use maxlat::grids::{build_adjacent_system, choose_delta};
use maxlat::lattice::{Lattice, ModularKind};
use maxlat::maximal::MaximalOp;
use maxlat::selfimprove::{
    compute_self_improvement_params, estimate_operator_norm, holder_chain_check, NormStrategy,
    SelfImproveInputs,
};
use maxlat::space::{generate_space, SpaceKind};
use maxlat::suites::run_theorem_suite;

fn main() -> Result<(), maxlat::Error> {
    // at unit constants the parameter calculus has closed-form values:
    // eps = 1/2, eta0 = 1/4, threshold r0 = 4/5 equal to its lower bound
    let unit = compute_self_improvement_params(&SelfImproveInputs::unit(), 1.0, 1.0)?;
    println!(
        "unit constants: eps = {}, eta0 = {}, r0 = {} (lower bound {})",
        unit.epsilon, unit.eta0, unit.r0, unit.r0_lower_bound
    );
    println!(
        "  bound coefficient at r0: {:.3}",
        unit.bound_coeff(unit.r0)
    );

    // a real system: exact and empirical operator norms
    let space = generate_space(&SpaceKind::Path { n: 3 }, 0)?;
    let system = build_adjacent_system(&space, choose_delta(space.a0()), 24, 3)?;

    let l1 = Lattice::constant_exponent(3, 1.0, ModularKind::Sum)?;
    let exact = estimate_operator_norm(
        &space,
        None,
        &l1,
        MaximalOp::Ball,
        NormStrategy::ExactL1PointMass,
        0,
    )?;
    println!(
        "\n||M|| on weighted L1 via point masses: {} ({})",
        exact.value, exact.kind
    );

    let l2 = Lattice::constant_exponent(3, 2.0, ModularKind::Sum)?;
    let md = estimate_operator_norm(
        &space,
        Some(&system),
        &l2,
        MaximalOp::Dyadic,
        NormStrategy::Multistart {
            starts: 8,
            steps: 25,
        },
        11,
    )?;
    println!(
        "||M^D|| on L2: >= {:.6} ({}, {} starts)",
        md.value, md.kind, md.trials
    );

    // per-function transfer to a higher convexification
    let rec = holder_chain_check(&space, &l1, &[1.0, 0.0, 0.0], 1.0, 2.0)?;
    println!(
        "\ntransfer to the 2-convexification: {:.6} <= {:.6} [{}]",
        rec.lhs, rec.rhs, rec.verdict
    );

    // realistic parameters: the iteration weight shrinks with the safety-
    // inflated norm, and the threshold r0 rounds to 1 at f64 precision
    // because the gdp constant is astronomically conservative
    let inputs = SelfImproveInputs::from_parts(&system, &l2, 1.5 * md.value, md.value);
    let params = compute_self_improvement_params(&inputs, 0.5, 1.0)?;
    println!(
        "3-point system: eps = {:.4}, eta0 = {:.3e}, r0 = {}, coeff(0.99) = {:.3e}",
        params.epsilon,
        params.eta0,
        params.r0,
        params.bound_coeff(0.99)
    );

    // the whole orchestrated suite, as `maxlat verify --suite selfimprove`
    let cfg = RunConfig {
        suite: "selfimprove".into(),
        samples_random: 20,
        ..RunConfig::default()
    };
    let out = run_theorem_suite(&cfg)?;
    println!(
        "\ntheorem suite: {} records, passed = {}",
        out.report.records.len(),
        out.report.passed()
    );
    for rec in out.report.records.iter().take(12) {
        println!("  [{}] {}", rec.verdict, rec.name);
    }
    println!("  ... plus {} plot tables", out.plots.len());
    Ok(())
}
