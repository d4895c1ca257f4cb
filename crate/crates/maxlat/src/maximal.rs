//! Ball and "dyadic" maximal operators, exactly evaluated.
//!
//! `M_r f(x)` maximizes the r-th-power average of `|f|` over the canonical
//! balls containing `x`; the "dyadic" version maximizes over the cubes of
//! every grid of an adjacent system. Both are exact enumerations, the
//! supremum being a maximum over a finite precomputed family, with
//! compensated summation inside each average.

use crate::error::{Error, Result};
use crate::grids::AdjacentGridSystem;
use crate::numeric::compensated_sum_by;
use crate::report::CheckRecord;
use crate::space::Space;

/// Which cube/ball family a maximal operator ranges over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MaximalOp {
    Ball,
    Dyadic,
}

impl std::fmt::Display for MaximalOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MaximalOp::Ball => f.write_str("ball"),
            MaximalOp::Dyadic => f.write_str("dyadic"),
        }
    }
}

pub fn validate_function(space: &Space, f: &[f64]) -> Result<()> {
    if f.len() != space.n() {
        return Err(Error::LengthMismatch {
            got: f.len(),
            expected: space.n(),
        });
    }
    for (i, &v) in f.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry { index: i, value: v });
        }
    }
    Ok(())
}

fn validate_r(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "maximal-operator exponent must be positive, got {r}"
        )));
    }
    Ok(())
}

fn check_system(space: &Space, system: &AdjacentGridSystem) -> Result<()> {
    let ok = system
        .grids
        .first()
        .and_then(|g| g.levels.first())
        .and_then(|l| l.first())
        .is_some_and(|c| c.members.universe() == space.n());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParam(
            "grid system does not match the space".into(),
        ))
    }
}

/// `|f|^r` weighted by mass, reused across balls/cubes of one evaluation.
fn powered_terms(space: &Space, f: &[f64], r: f64) -> Vec<f64> {
    if r == 1.0 {
        f.iter()
            .enumerate()
            .map(|(i, &v)| v.abs() * space.mass(i))
            .collect()
    } else {
        f.iter()
            .enumerate()
            .map(|(i, &v)| v.abs().powf(r) * space.mass(i))
            .collect()
    }
}

fn root(v: f64, r: f64) -> f64 {
    if r == 1.0 {
        v
    } else {
        v.powf(1.0 / r)
    }
}

/// The parameterized maximal function `M_r f` over canonical balls.
pub fn ball_maximal(space: &Space, f: &[f64], r: f64) -> Result<Vec<f64>> {
    validate_function(space, f)?;
    validate_r(r)?;
    let terms = powered_terms(space, f, r);
    let mut best = vec![0.0f64; space.n()];
    for ball in space.balls() {
        let avg = compensated_sum_by(ball.members.iter(), |i| terms[i]) / ball.measure;
        for x in ball.members.iter() {
            if avg > best[x] {
                best[x] = avg;
            }
        }
    }
    Ok(best.into_iter().map(|v| root(v, r)).collect())
}

/// The parameterized "dyadic" maximal function `M^D_r f` over the union of
/// all grids' cubes.
pub fn dyadic_maximal(
    space: &Space,
    system: &AdjacentGridSystem,
    f: &[f64],
    r: f64,
) -> Result<Vec<f64>> {
    validate_function(space, f)?;
    validate_r(r)?;
    check_system(space, system)?;
    let terms = powered_terms(space, f, r);
    let mut best = vec![0.0f64; space.n()];
    for (_, cube) in system.all_cubes() {
        let avg = compensated_sum_by(cube.members.iter(), |i| terms[i]) / cube.measure;
        for x in cube.members.iter() {
            if avg > best[x] {
                best[x] = avg;
            }
        }
    }
    Ok(best.into_iter().map(|v| root(v, r)).collect())
}

pub fn apply(
    space: &Space,
    system: Option<&AdjacentGridSystem>,
    op: MaximalOp,
    f: &[f64],
    r: f64,
) -> Result<Vec<f64>> {
    match op {
        MaximalOp::Ball => ball_maximal(space, f, r),
        MaximalOp::Dyadic => {
            let system = system.ok_or_else(|| {
                Error::InvalidParam("dyadic maximal operator needs a grid system".into())
            })?;
            dyadic_maximal(space, system, f, r)
        }
    }
}

const EXACT_SLACK: f64 = 1e-12;

use crate::report::pointwise_leq_record as pointwise_record;

/// Pointwise equivalence of the two operators with the system's measured
/// ball/cube constant, in both directions.
pub fn verify_equivalence(
    space: &Space,
    system: &AdjacentGridSystem,
    f: &[f64],
) -> Result<Vec<CheckRecord>> {
    let c = system.constants.c_ball_cube;
    let mf = ball_maximal(space, f, 1.0)?;
    let mdf = dyadic_maximal(space, system, f, 1.0)?;
    let scaled_mf: Vec<f64> = mf.iter().map(|v| c * v).collect();
    let scaled_mdf: Vec<f64> = mdf.iter().map(|v| c * v).collect();
    Ok(vec![
        pointwise_record(
            "equivalence-dyadic-by-ball",
            "pointwise-equivalence",
            &mdf,
            &scaled_mf,
            EXACT_SLACK,
        ),
        pointwise_record(
            "equivalence-ball-by-dyadic",
            "pointwise-equivalence",
            &mf,
            &scaled_mdf,
            EXACT_SLACK,
        ),
    ])
}

/// `M(sum f_k) <= sum M f_k` pointwise, for the ball operator and (when a
/// system is given) the "dyadic" one.
pub fn verify_subadditivity(
    space: &Space,
    system: Option<&AdjacentGridSystem>,
    fk_list: &[Vec<f64>],
) -> Result<Vec<CheckRecord>> {
    if fk_list.is_empty() {
        return Err(Error::InvalidParam("empty function list".into()));
    }
    let n = space.n();
    let mut total = vec![0.0f64; n];
    for f in fk_list {
        validate_function(space, f)?;
        for (t, &v) in total.iter_mut().zip(f) {
            *t += v;
        }
    }
    let mut records = Vec::new();
    for op in [MaximalOp::Ball, MaximalOp::Dyadic] {
        if op == MaximalOp::Dyadic && system.is_none() {
            continue;
        }
        let lhs = apply(space, system, op, &total, 1.0)?;
        let mut rhs = vec![0.0f64; n];
        for f in fk_list {
            let mf = apply(space, system, op, f, 1.0)?;
            for (acc, v) in rhs.iter_mut().zip(mf) {
                *acc += v;
            }
        }
        records.push(pointwise_record(
            &format!("subadditivity-{op}"),
            "countable-subadditivity",
            &lhs,
            &rhs,
            EXACT_SLACK,
        ));
    }
    Ok(records)
}

/// `M_r f <= M_s f` pointwise for `0 < r < s`, ball and dyadic versions.
pub fn verify_r_monotonicity(
    space: &Space,
    system: Option<&AdjacentGridSystem>,
    f: &[f64],
    r: f64,
    s: f64,
) -> Result<Vec<CheckRecord>> {
    if !(r > 0.0 && r < s) {
        return Err(Error::Precondition(format!(
            "need 0 < r < s, got r={r} s={s}"
        )));
    }
    let mut records = Vec::new();
    for op in [MaximalOp::Ball, MaximalOp::Dyadic] {
        if op == MaximalOp::Dyadic && system.is_none() {
            continue;
        }
        let lo = apply(space, system, op, f, r)?;
        let hi = apply(space, system, op, f, s)?;
        records.push(pointwise_record(
            &format!("power-monotonicity-{op}[r={r},s={s}]"),
            "power-average-monotone",
            &lo,
            &hi,
            EXACT_SLACK,
        ));
    }
    Ok(records)
}
