//! Variable-exponent modulars, Luxemburg–Nakano quasi-norms and lattice
//! convexifications with their constants.
//!
//! Run: `cargo run --example luxemburg`

use maxlat::lattice::{
    aoki_rolewicz_check, luxemburg_norm, modular, verify_norm_equivalences, verify_quasi_triangle,
    ExponentFunction, Lattice, ModularKind,
};
use maxlat::space::{generate_space, SpaceKind};

fn main() -> Result<(), maxlat::Error> {
    let space = generate_space(&SpaceKind::Path { n: 2 }, 0)?;

    // a mixed exponent: one integrable direction, one sup direction
    let p = ExponentFunction::new(vec![1.0, f64::INFINITY])?;
    let f = [2.0, 3.0];
    for kind in [ModularKind::Sum, ModularKind::Max] {
        println!(
            "modular[{kind}](f) = {}, norm[{kind}](f) = {}",
            modular(&space, &f, &p, kind),
            luxemburg_norm(&space, &f, &p, kind)?
        );
    }

    // constant exponents recover the classical norms
    let p2 = ExponentFunction::constant(2, 2.0)?;
    println!(
        "\n||(3,4)||_2 = {}  (classical 5)",
        luxemburg_norm(&space, &[3.0, 4.0], &p2, ModularKind::Sum)?
    );
    let l4 = Lattice::constant_exponent(2, 2.0, ModularKind::Sum)?.convexified(2.0)?;
    println!(
        "||(3,4)|| in the 2-convexification of L^2 = {}  (337^(1/4) = {})",
        l4.quasinorm(&space, &[3.0, 4.0])?,
        337f64.powf(0.25)
    );

    // lattice constants across the family
    println!(
        "\n{:<34} {:>8} {:>8} {:>8}",
        "lattice", "C_tri", "rho", "C_F"
    );
    let p_var = ExponentFunction::new(vec![0.5, 3.0])?;
    for lattice in [
        Lattice::constant_exponent(2, 0.5, ModularKind::Sum)?,
        Lattice::constant_exponent(2, 2.0, ModularKind::Sum)?,
        Lattice::variable(p_var.clone(), ModularKind::Max),
        Lattice::variable(p_var.clone(), ModularKind::Sum).convexified(2.0)?,
        Lattice::variable(p_var, ModularKind::Sum).convexified(0.75)?,
    ] {
        println!(
            "{:<34} {:>8.4} {:>8.4} {:>8.4}",
            lattice.descriptor(),
            lattice.c_tri(),
            lattice.rho(),
            lattice.c_fatou()
        );
    }

    // the quasi-triangle inequality is sharp for disjoint indicators in
    // the exponent-1/2 space: both sides equal 4
    let half = Lattice::constant_exponent(2, 0.5, ModularKind::Sum)?;
    let rec = verify_quasi_triangle(&space, &half, &[1.0, 0.0], &[0.0, 1.0])?;
    println!(
        "\nsharp quasi-triangle: {} <= {} [{}]",
        rec.lhs, rec.rhs, rec.verdict
    );

    let rec = aoki_rolewicz_check(&space, &half, &[vec![1.0, 0.0], vec![0.0, 1.0]])?;
    println!(
        "finite-sum bound:     {} <= {} [{}]",
        rec.lhs, rec.rhs, rec.verdict
    );

    // convexified vs rescaled-exponent quasi-norms: a two-sided sandwich
    // for the sum modular, exact equality for the max modular
    let p_mixed = ExponentFunction::new(vec![0.5, 3.0])?;
    for rec in verify_norm_equivalences(&space, &p_mixed, 2.0, &[1.2, 0.4])? {
        println!(
            "[{}] {}: {:.6} vs {:.6}",
            rec.verdict, rec.name, rec.lhs, rec.rhs
        );
    }
    Ok(())
}
