//! "Dyadic" A1 weights, the Rubio de Francia iteration and the reverse
//! Hölder inequalities it feeds.
//!
//! The iteration `R h = sum_k eps^k (M^D)^k h` is truncated at the first
//! index whose certified tail bound `eps^(N+1) max|h| / (1 - eps)` drops
//! below the requested tolerance; the bound is valid because iterating the
//! "dyadic" maximal operator never raises the maximum of a nonnegative
//! function.

use crate::error::{Error, Result};
use crate::grids::AdjacentGridSystem;
use crate::lattice::Lattice;
use crate::maximal::{dyadic_maximal, validate_function};
use crate::numeric::compensated_sum_by;
use crate::report::{pointwise_leq_record, CheckRecord};
use crate::space::Space;

pub fn validate_weight(space: &Space, w: &[f64]) -> Result<()> {
    validate_function(space, w)?;
    for (index, &value) in w.iter().enumerate() {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::NonpositiveWeight { index, value });
        }
    }
    Ok(())
}

/// The "dyadic" A1 constant: `max_x M^D w(x) / w(x)`, always at least 1
/// because bottom cubes are singletons.
pub fn a1_dyadic_constant(space: &Space, system: &AdjacentGridSystem, w: &[f64]) -> Result<f64> {
    validate_weight(space, w)?;
    let md = dyadic_maximal(space, system, w, 1.0)?;
    Ok(md.iter().zip(w).map(|(m, v)| m / v).fold(1.0f64, f64::max))
}

/// Output of the truncated Rubio de Francia iteration.
#[derive(Clone, Debug)]
pub struct RdfResult {
    pub function: Vec<f64>,
    pub epsilon: f64,
    /// Truncation index N: terms 0..=N were summed.
    pub terms_used: usize,
    /// Certified bound on the discarded tail, `<=` the requested tolerance.
    pub tail_bound: f64,
}

/// Truncated iteration `sum_{k=0}^{N} eps^k (M^D)^k h` with
/// `(M^D)^0 h = |h|`.
pub fn rubio_de_francia(
    space: &Space,
    system: &AdjacentGridSystem,
    h: &[f64],
    epsilon: f64,
    tol: f64,
) -> Result<RdfResult> {
    validate_function(space, h)?;
    if epsilon.is_nan() || epsilon <= 0.0 || epsilon >= 1.0 {
        return Err(Error::InvalidParam(format!(
            "iteration weight must lie in (0,1), got {epsilon}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "tail tolerance must be positive, got {tol}"
        )));
    }
    let hmax = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut n_terms = 0usize;
    while epsilon.powi(n_terms as i32 + 1) * hmax / (1.0 - epsilon) > tol {
        n_terms += 1;
        if n_terms > 100_000 {
            return Err(Error::NoConvergence(
                "tail of the iteration does not reach the tolerance".into(),
            ));
        }
    }
    let mut current: Vec<f64> = h.iter().map(|v| v.abs()).collect();
    let mut acc = current.clone();
    let mut weight = 1.0;
    for _ in 1..=n_terms {
        current = dyadic_maximal(space, system, &current, 1.0)?;
        weight *= epsilon;
        for (a, c) in acc.iter_mut().zip(&current) {
            *a += weight * c;
        }
    }
    Ok(RdfResult {
        function: acc,
        epsilon,
        terms_used: n_terms,
        tail_bound: epsilon.powi(n_terms as i32 + 1) * hmax / (1.0 - epsilon),
    })
}

const RDF_SLACK: f64 = 1e-9;

/// The three properties of the iteration output: pointwise domination of
/// `|h|`, lattice-norm boundedness with constant `4^(1/rho) C_F`, and the
/// A1 constant bound `1/eps`. Requires `eps * ||M^D|| < 2^(-1/rho)` for the
/// supplied operator-norm value.
pub fn verify_rdf_properties(
    space: &Space,
    system: &AdjacentGridSystem,
    lattice: &Lattice,
    h: &[f64],
    epsilon: f64,
    md_norm: f64,
) -> Result<Vec<CheckRecord>> {
    let rho = lattice.rho();
    let cap = 2f64.powf(-1.0 / rho);
    if epsilon.is_nan()
        || epsilon <= 0.0
        || epsilon * md_norm >= cap
        || (epsilon * md_norm).is_nan()
    {
        return Err(Error::Precondition(format!(
            "need eps * ||M^D|| < 2^(-1/rho): {epsilon} * {md_norm} >= {cap}"
        )));
    }
    let rdf = rubio_de_francia(space, system, h, epsilon, 1e-12)?;
    let habs: Vec<f64> = h.iter().map(|v| v.abs()).collect();
    let mut records = vec![pointwise_leq_record(
        "rdf-dominates-input",
        "rdf-pointwise-domination",
        &habs,
        &rdf.function,
        RDF_SLACK,
    )];
    let lhs = lattice.quasinorm(space, &rdf.function)?;
    let rhs = 4f64.powf(1.0 / rho) * lattice.c_fatou() * lattice.quasinorm(space, h)?;
    records.push(CheckRecord::leq(
        format!("rdf-norm-bound[{}]", lattice.descriptor()),
        "rdf-norm-bound",
        lhs,
        rhs,
        RDF_SLACK,
    ));
    let a1 = a1_dyadic_constant(space, system, &rdf.function)?;
    records.push(CheckRecord::leq(
        format!("rdf-a1-constant[eps={epsilon}]"),
        "rdf-a1-bound",
        a1,
        1.0 / epsilon,
        RDF_SLACK,
    ));
    Ok(records)
}

/// The largest admissible exponent bump for a weight:
/// `1 / (2 S^2 K [w])` with the formula value of S.
pub fn admissible_eta(system: &AdjacentGridSystem, a1_constant: f64) -> f64 {
    let s = system.constants.s_formula;
    let k = system.constants.grid_count as f64;
    1.0 / (2.0 * s * s * k * a1_constant)
}

fn check_eta(system: &AdjacentGridSystem, a1_constant: f64, eta: f64) -> Result<()> {
    let cap = admissible_eta(system, a1_constant);
    if eta.is_nan() || eta <= 0.0 || eta > cap * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "exponent bump {eta} outside the admissible range (0, {cap}]"
        )));
    }
    Ok(())
}

const RHI_SLACK: f64 = 1e-10;

/// Weak reverse Hölder inequality over every cube of every grid:
/// `((2 mu(Q))^-1 int_Q w^(1+eta))^(1/(1+eta)) <= S [w] avg_Q w`.
pub fn reverse_holder_check(
    space: &Space,
    system: &AdjacentGridSystem,
    w: &[f64],
    eta: f64,
) -> Result<Vec<CheckRecord>> {
    validate_weight(space, w)?;
    let a1 = a1_dyadic_constant(space, system, w)?;
    check_eta(system, a1, eta)?;
    let s = system.constants.s_formula;
    let mut lhs_all = Vec::new();
    let mut rhs_all = Vec::new();
    for (_, cube) in system.all_cubes() {
        let bumped = compensated_sum_by(cube.members.iter(), |i| {
            w[i].powf(1.0 + eta) * space.mass(i)
        });
        let plain = compensated_sum_by(cube.members.iter(), |i| w[i] * space.mass(i));
        lhs_all.push((bumped / (2.0 * cube.measure)).powf(1.0 / (1.0 + eta)));
        rhs_all.push(s * a1 * plain / cube.measure);
    }
    Ok(vec![pointwise_leq_record(
        &format!("reverse-holder[eta={eta:.3e};cube "),
        "weak-reverse-holder",
        &lhs_all,
        &rhs_all,
        RHI_SLACK,
    )])
}

/// Pointwise bound for the bumped "dyadic" maximal function of a weight:
/// `M^D_(1+eta) w <= 2 S [w]^2 w` everywhere.
pub fn corollary_pointwise_check(
    space: &Space,
    system: &AdjacentGridSystem,
    w: &[f64],
    eta: f64,
) -> Result<Vec<CheckRecord>> {
    validate_weight(space, w)?;
    let a1 = a1_dyadic_constant(space, system, w)?;
    check_eta(system, a1, eta)?;
    let s = system.constants.s_formula;
    let lhs = dyadic_maximal(space, system, w, 1.0 + eta)?;
    let rhs: Vec<f64> = w.iter().map(|v| 2.0 * s * a1 * a1 * v).collect();
    Ok(vec![pointwise_leq_record(
        &format!("bumped-maximal-bound[eta={eta:.3e}]"),
        "bumped-maximal-pointwise",
        &lhs,
        &rhs,
        RHI_SLACK,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::build_adjacent_system;
    use crate::lattice::ModularKind;
    use crate::space::{generate_space, SpaceKind};

    fn two_point_system() -> (Space, AdjacentGridSystem) {
        let space = Space::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![1.0, 1.0]).unwrap();
        let system = build_adjacent_system(&space, 1.0 / 128.0, 4, 7).unwrap();
        (space, system)
    }

    fn path_system(n: usize, seed: u64) -> (Space, AdjacentGridSystem) {
        let space = generate_space(&SpaceKind::Path { n }, 0).unwrap();
        let system = build_adjacent_system(&space, 1.0 / 128.0, 8, seed).unwrap();
        (space, system)
    }

    #[test]
    fn a1_constant_examples() {
        let (space, system) = two_point_system();
        assert_eq!(
            a1_dyadic_constant(&space, &system, &[1.0, 1.0]).unwrap(),
            1.0
        );
        assert_eq!(
            a1_dyadic_constant(&space, &system, &[1.0, 2.0]).unwrap(),
            1.5
        );
        assert!(a1_dyadic_constant(&space, &system, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn rdf_constant_input_geometric_series() {
        let (space, system) = two_point_system();
        let rdf = rubio_de_francia(&space, &system, &[1.0, 1.0], 0.5, 1e-12).unwrap();
        for v in &rdf.function {
            // sum eps^k = 2 up to the certified tail
            assert!((v - 2.0).abs() <= rdf.tail_bound + 1e-12, "{v}");
        }
        assert!(rdf.tail_bound <= 1e-12);
    }

    #[test]
    fn rdf_indicator_matches_direct_iteration() {
        let (space, system) = two_point_system();
        let eps = 0.25;
        let rdf = rubio_de_francia(&space, &system, &[1.0, 0.0], eps, 1e-12).unwrap();
        // direct long iteration, 50 terms
        let mut current = vec![1.0, 0.0];
        let mut acc = current.clone();
        let mut weight = 1.0;
        for _ in 1..=50 {
            current = dyadic_maximal(&space, &system, &current, 1.0).unwrap();
            weight *= eps;
            for (a, c) in acc.iter_mut().zip(&current) {
                *a += weight * c;
            }
        }
        for (a, b) in rdf.function.iter().zip(&acc) {
            assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
        // closed forms: 4/3 at the support, 4/21 at the other point
        assert!((rdf.function[0] - 4.0 / 3.0).abs() <= 1e-10);
        assert!((rdf.function[1] - 4.0 / 21.0).abs() <= 1e-10);
    }

    #[test]
    fn rdf_first_order_truncation() {
        let (space, system) = two_point_system();
        let h = [1.0, 0.0];
        // tiny eps with a tolerance forcing at least one iteration term
        let eps = 1e-4;
        let rdf = rubio_de_francia(&space, &system, &h, eps, 1e-9).unwrap();
        assert!(rdf.terms_used >= 1);
        let md = dyadic_maximal(&space, &system, &h, 1.0).unwrap();
        for ((r, h), m) in rdf.function.iter().zip(&h).zip(&md) {
            assert!((r - (h.abs() + eps * m)).abs() <= 1e-7);
        }
    }

    #[test]
    fn rdf_properties_records() {
        let (space, system) = path_system(3, 3);
        let lattice = Lattice::constant_exponent(3, 2.0, ModularKind::Sum).unwrap();
        for h in [
            vec![1.0, 1.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.2, 3.0, 1.4],
        ] {
            let records = verify_rdf_properties(&space, &system, &lattice, &h, 0.25, 1.2).unwrap();
            assert_eq!(records.len(), 3);
            for rec in records {
                assert!(!rec.failed(), "{rec:?}");
            }
        }
    }

    #[test]
    fn rdf_precondition_refused() {
        let (space, system) = path_system(3, 3);
        let lattice = Lattice::constant_exponent(3, 2.0, ModularKind::Sum).unwrap();
        // rho = 1, cap = 1/2: eps * norm = 0.6 violates it
        let err = verify_rdf_properties(&space, &system, &lattice, &[1.0, 0.0, 0.0], 0.5, 1.2);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn reverse_holder_and_corollary_on_weights() {
        let (space, system) = path_system(3, 3);
        let weights: Vec<Vec<f64>> = vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, 2.0, 1.0],
            rubio_de_francia(&space, &system, &[1.0, 0.0, 0.0], 0.25, 1e-12)
                .unwrap()
                .function,
        ];
        for w in &weights {
            let a1 = a1_dyadic_constant(&space, &system, w).unwrap();
            let eta0 = admissible_eta(&system, a1);
            for eta in [eta0, eta0 / 2.0, eta0 / 10.0] {
                for rec in reverse_holder_check(&space, &system, w, eta).unwrap() {
                    assert!(!rec.failed(), "{rec:?}");
                }
                for rec in corollary_pointwise_check(&space, &system, w, eta).unwrap() {
                    assert!(!rec.failed(), "{rec:?}");
                }
            }
        }
    }

    #[test]
    fn eta_out_of_range_is_refused() {
        let (space, system) = path_system(3, 3);
        let err = reverse_holder_check(&space, &system, &[1.0, 1.0, 1.0], 999.0);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = corollary_pointwise_check(&space, &system, &[1.0, 1.0, 1.0], -1.0);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn a1_constant_scale_invariance() {
        let (space, system) = path_system(4, 9);
        let w = [0.5, 2.0, 1.25, 3.0];
        let base = a1_dyadic_constant(&space, &system, &w).unwrap();
        let scaled: Vec<f64> = w.iter().map(|v| 4.0 * v).collect();
        assert_eq!(a1_dyadic_constant(&space, &system, &scaled).unwrap(), base);
    }

    #[test]
    fn rdf_monotone_in_input() {
        let (space, system) = path_system(4, 9);
        let h1 = [0.5, 0.0, 1.0, 0.25];
        let h2 = [0.75, 0.5, 1.0, 1.0];
        let r1 = rubio_de_francia(&space, &system, &h1, 0.3, 1e-12).unwrap();
        let r2 = rubio_de_francia(&space, &system, &h2, 0.3, 1e-12).unwrap();
        for (a, b) in r1.function.iter().zip(&r2.function) {
            assert!(a <= &(b + 1e-12));
        }
    }

    #[test]
    fn truncation_certificate_stable_under_tighter_tolerance() {
        let (space, system) = path_system(3, 3);
        let w = [1.0, 2.0, 1.0];
        let coarse = rubio_de_francia(&space, &system, &w, 0.25, 1e-9).unwrap();
        let fine = rubio_de_francia(&space, &system, &w, 0.25, 1e-11).unwrap();
        let a1_coarse = a1_dyadic_constant(&space, &system, &coarse.function).unwrap();
        let a1_fine = a1_dyadic_constant(&space, &system, &fine.function).unwrap();
        // verdict-level agreement of the A1 bound
        assert_eq!(a1_coarse <= 4.0 + 1e-9, a1_fine <= 4.0 + 1e-9);
        assert!((a1_coarse - a1_fine).abs() < 1e-7);
    }
}
