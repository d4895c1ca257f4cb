//! Build an adjacent system of dyadic grids and verify its axioms: level
//! partitions, nesting, parent/child structure, outer ball containment,
//! and containment of every ball in a comparable-size cube of some grid.
//!
//! Run: `cargo run --example grids`

use maxlat::grids::{
    build_adjacent_system, choose_delta, compute_s, dump_grids, generalized_dyadic_parent,
    verify_grid_axioms,
};
use maxlat::space::{generate_space, SpaceKind};

fn main() -> Result<(), maxlat::Error> {
    let space = generate_space(&SpaceKind::RandomPlanar { n: 20 }, 5)?;
    let delta = choose_delta(space.a0());
    println!("A0 = {}, chosen delta = {delta}", space.a0());

    let system = build_adjacent_system(&space, delta, 24, 5)?;
    println!("built: {}", system.descriptor());
    println!(
        "constants: C1 = {} (outer), c1 measured = {:.4} vs formula {:.4}",
        system.constants.big_c1, system.constants.c1_measured, system.constants.c1_formula
    );
    println!(
        "ball/cube constant C = {:.3}; S formula = {:.3e}, measured = {:?}",
        system.constants.c_ball_cube, system.constants.s_formula, system.constants.s_measured
    );

    for record in verify_grid_axioms(&space, &system) {
        println!(
            "  [{}] {} ({})",
            record.verdict, record.name, record.statement
        );
    }

    // a generalized dyadic parent: two levels coarser, containing every
    // same-level cube that meets the given one
    let bottom = &system.level_cubes(0, system.k_max)[0];
    let gdp = generalized_dyadic_parent(&space, &system, bottom)?;
    println!(
        "gdp of a bottom cube: level {} with {} members",
        gdp.level,
        gdp.members.len()
    );
    let s = compute_s(&space, &system)?;
    println!(
        "gdp mass ratios: measured {:.3} <= formula {:.3e}",
        s.measured, s.formula
    );

    // a coarse out-of-regime scale forces several adjacent grids: cell
    // boundaries then fall between adjacent points of a unit path
    let path = generate_space(&SpaceKind::Path { n: 32 }, 0)?;
    let coarse = build_adjacent_system(&path, 0.25, 24, 1)?;
    println!(
        "\npath:32 at delta=1/4 (out of regime): K = {} grids, levels {}..{}",
        coarse.constants.grid_count, coarse.k_min, coarse.k_max
    );

    let two = generate_space(&SpaceKind::Path { n: 2 }, 0)?;
    let tiny = build_adjacent_system(&two, 1.0 / 128.0, 4, 7)?;
    println!("\ncube dump of the 2-point system:");
    print!("{}", dump_grids(&tiny));
    Ok(())
}
