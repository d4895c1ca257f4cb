//! Small numeric helpers shared across the crate: compensated summation
//! and slack-aware comparisons for verified inequalities.

/// Neumaier-compensated sum. Deterministic for a fixed input order.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Compensated sum of `f(i)` over an index iterator.
pub fn compensated_sum_by(
    iter: impl Iterator<Item = usize>,
    mut f: impl FnMut(usize) -> f64,
) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in iter {
        let x = f(i);
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `lhs <= rhs` up to a relative slack on the larger magnitude, with an
/// absolute floor so near-zero quantities get an allowance of `rel`.
pub fn leq_with_slack(lhs: f64, rhs: f64, rel: f64) -> bool {
    lhs <= rhs + rel * rhs.abs().max(lhs.abs()).max(1.0)
}

/// Relative agreement: |a - b| <= rel * max(|a|, |b|), with exact zero allowed.
pub fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Signed margin of the inequality `lhs <= rhs`, normalized by scale.
pub fn margin(lhs: f64, rhs: f64) -> f64 {
    (rhs - lhs) / rhs.abs().max(lhs.abs()).max(1.0)
}
