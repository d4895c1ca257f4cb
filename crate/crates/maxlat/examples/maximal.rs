//! Ball and "dyadic" maximal functions, their pointwise equivalence and
//! the parameterized variants.
//!
//! Run: `cargo run --example maximal`

use maxlat::grids::{build_adjacent_system, choose_delta};
use maxlat::maximal::{
    ball_maximal, dyadic_maximal, verify_equivalence, verify_r_monotonicity, verify_subadditivity,
};
use maxlat::space::{generate_space, SpaceKind};

fn main() -> Result<(), maxlat::Error> {
    let space = generate_space(&SpaceKind::Path { n: 3 }, 0)?;
    let f = [1.0, 0.0, 0.0];

    // averages over all six balls of the unit path give (1, 1/2, 1/3)
    let mf = ball_maximal(&space, &f, 1.0)?;
    println!("M[(1,0,0)]      = {mf:?}");
    let m2f = ball_maximal(&space, &f, 2.0)?;
    println!("M_2[(1,0,0)]    = {m2f:?}");

    let system = build_adjacent_system(&space, choose_delta(space.a0()), 24, 3)?;
    let mdf = dyadic_maximal(&space, &system, &f, 1.0)?;
    println!(
        "M^D[(1,0,0)]    = {mdf:?} over {} grids",
        system.constants.grid_count
    );

    println!(
        "\npointwise equivalence with C = {:.3}:",
        system.constants.c_ball_cube
    );
    for record in verify_equivalence(&space, &system, &f)? {
        println!(
            "  [{}] {}: {:.4} <= {:.4}",
            record.verdict, record.name, record.lhs, record.rhs
        );
    }

    // subadditivity across an indicator split, and monotonicity of the
    // power-averaged family
    let parts: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            let mut e = vec![0.0; 3];
            e[i] = [1.0, 0.25, 2.0][i];
            e
        })
        .collect();
    for record in verify_subadditivity(&space, Some(&system), &parts)? {
        println!("  [{}] {}", record.verdict, record.name);
    }
    for record in verify_r_monotonicity(&space, Some(&system), &[0.3, 1.7, 0.9], 0.5, 4.0)? {
        println!("  [{}] {}", record.verdict, record.name);
    }
    Ok(())
}
