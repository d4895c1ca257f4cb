//! Generate finite quasi-metric measure spaces and inspect their
//! structural constants: the quasi-metric constant A0, the measure
//! doubling constant A, and the greedy geometric-doubling count.
//!
//! Run: `cargo run --example spaces`

use maxlat::space::{generate_space, SpaceKind};

fn main() -> Result<(), maxlat::Error> {
    let kinds = [
        ("path:6", SpaceKind::Path { n: 6 }),
        ("grid2d:3", SpaceKind::Grid2d { side: 3 }),
        ("discrete:5", SpaceKind::Discrete { n: 5 }),
        ("cantor:4", SpaceKind::CantorUltrametric { depth: 4 }),
        ("random-planar:24", SpaceKind::RandomPlanar { n: 24 }),
        (
            "snowflake:2:path:4",
            SpaceKind::Snowflake {
                base: Box::new(SpaceKind::Path { n: 4 }),
                beta: 2.0,
            },
        ),
    ];

    println!(
        "{:<22} {:>4} {:>8} {:>10} {:>8} {:>12} {:>7}",
        "space", "n", "A0", "doubling", "geom", "homog.bound", "balls"
    );
    for (name, kind) in kinds {
        let space = generate_space(&kind, 7)?;
        println!(
            "{:<22} {:>4} {:>8.3} {:>10.3} {:>8} {:>12.1} {:>7}",
            name,
            space.n(),
            space.a0(),
            space.doubling_constant(),
            space.geometric_doubling(),
            space.homogeneity_bound(),
            space.balls().len(),
        );
    }

    // the snowflake transform pushes A0 above 1: squaring unit-path
    // distances turns the collinear triple inequality into a ratio of 2
    let flake = generate_space(
        &SpaceKind::Snowflake {
            base: Box::new(SpaceKind::Path { n: 3 }),
            beta: 2.0,
        },
        0,
    )?;
    println!(
        "\nsnowflake over path:3 with exponent 2 -> A0 = {}",
        flake.a0()
    );

    // every ball of the 3-point unit path, with witness radii
    let path3 = generate_space(&SpaceKind::Path { n: 3 }, 0)?;
    println!(
        "\nballs of path:3 ({} distinct member sets):",
        path3.balls().len()
    );
    for ball in path3.balls() {
        println!(
            "  B(center={}, r={:.4}) = {:?}  measure {}",
            ball.center,
            ball.radius,
            ball.members.to_indices(),
            ball.measure
        );
    }
    Ok(())
}
