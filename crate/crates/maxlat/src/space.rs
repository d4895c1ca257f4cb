//! Finite quasi-metric measure spaces.
//!
//! A space is a finite point set with a symmetric positive distance matrix
//! and strictly positive atomic masses. On construction we compute the
//! structural constants (the quasi-metric constant, the measure-doubling
//! constant and a greedy geometric-doubling count) and enumerate every
//! point set realizable as an open ball, each with a canonical witness
//! radius. Everything downstream (grids, maximal operators, weights) takes
//! suprema over this finite ball list, so enumeration here is exhaustive
//! and deduplicated.
//!
//! Open-ball semantics are strict (`dist < r`) throughout. Canonical radii
//! are distance values nudged up by one ulp, together with their doubles;
//! on a finite space ball membership changes only at distance values, so
//! this set realizes every ball.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, compensated_sum_by};
use crate::pointset::PointSet;

/// Relative tolerance for distance-matrix symmetry validation.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// An open ball: all points strictly closer than `radius` to `center`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
    pub members: PointSet,
    pub measure: f64,
}

/// A finite quasi-metric measure space with its structural constants and
/// the canonical ball list. Immutable after construction.
pub struct Space {
    n: usize,
    dist: Vec<f64>,
    mass: Vec<f64>,
    total_mass: f64,
    diameter: f64,
    min_sep: f64,
    a0: f64,
    a_dbl: f64,
    a1_geo: usize,
    canonical_radii: Vec<f64>,
    balls: Vec<Ball>,
    containing: Vec<Vec<u32>>,
    // per point: (neighbor ids sorted by distance, prefix mass sums)
    sorted_rows: Vec<(Vec<u32>, Vec<f64>)>,
}

impl Space {
    /// Validates the raw matrix and masses, then computes all constants and
    /// enumerates the canonical balls. O(n^3) in the triple sweep for the
    /// quasi-metric constant; intended for desk-scale spaces.
    pub fn new(dist_rows: Vec<Vec<f64>>, mass: Vec<f64>) -> Result<Space> {
        let n = dist_rows.len();
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        if mass.len() != n {
            return Err(Error::LengthMismatch {
                got: mass.len(),
                expected: n,
            });
        }
        for (i, row) in dist_rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadDimensions {
                    row: i,
                    got: row.len(),
                    expected: n,
                });
            }
        }
        for (i, &m) in mass.iter().enumerate() {
            if !m.is_finite() || m <= 0.0 {
                return Err(Error::NonpositiveMass { i, value: m });
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d = dist_rows[i][j];
                if i == j {
                    if d != 0.0 {
                        return Err(Error::NonzeroDiagonal { i, value: d });
                    }
                    continue;
                }
                if !d.is_finite() || d <= 0.0 {
                    return Err(Error::BadOffDiagonal { i, j, value: d });
                }
                let dji = dist_rows[j][i];
                if (d - dji).abs() > SYMMETRY_TOL * d.abs().max(dji.abs()) {
                    return Err(Error::AsymmetricDistance { i, j, dij: d, dji });
                }
                // canonicalize to the upper-triangle value
                dist[i * n + j] = if i < j { d } else { dist_rows[j][i] };
            }
        }

        let mut diameter: f64 = 0.0;
        let mut min_sep = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist[i * n + j];
                diameter = diameter.max(d);
                min_sep = min_sep.min(d);
            }
        }

        let a0 = quasi_metric_constant(&dist, n);
        let canonical_radii = canonical_radii(&dist, n, min_sep);

        let mut sorted_rows = Vec::with_capacity(n);
        for x in 0..n {
            let mut ids: Vec<u32> = (0..n as u32).collect();
            ids.sort_by(|&a, &b| {
                dist[x * n + a as usize]
                    .partial_cmp(&dist[x * n + b as usize])
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let mut prefix = Vec::with_capacity(n + 1);
            let mut acc = 0.0;
            prefix.push(0.0);
            for &id in &ids {
                acc += mass[id as usize];
                prefix.push(acc);
            }
            sorted_rows.push((ids, prefix));
        }

        let total_mass = compensated_sum(&mass);
        let balls = enumerate_balls_impl(&dist, n, &mass, min_sep);
        let mut containing = vec![Vec::new(); n];
        for (bi, ball) in balls.iter().enumerate() {
            for p in ball.members.iter() {
                containing[p].push(bi as u32);
            }
        }

        let mut space = Space {
            n,
            dist,
            mass,
            total_mass,
            diameter,
            min_sep,
            a0,
            a_dbl: 1.0,
            a1_geo: 1,
            canonical_radii,
            balls,
            containing,
            sorted_rows,
        };
        space.a_dbl = space.compute_doubling_constant();
        space.a1_geo = space.compute_geometric_doubling();
        Ok(space)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, x: usize, y: usize) -> f64 {
        self.dist[x * self.n + y]
    }

    pub fn mass(&self, x: usize) -> f64 {
        self.mass[x]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn min_separation(&self) -> f64 {
        self.min_sep
    }

    /// Quasi-metric constant: the least `A0 >= 1` with
    /// `d(x,y) <= A0 (d(x,z) + d(z,y))` for all triples.
    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Measure-doubling constant: the least `A >= 1` with
    /// `mu(B(x,r)) <= A mu(B(x,r/2))` over all centers and canonical radii.
    pub fn doubling_constant(&self) -> f64 {
        self.a_dbl
    }

    /// Greedy geometric-doubling count: the worst-case number of half-radius
    /// balls a greedy cover needs for a canonical ball.
    pub fn geometric_doubling(&self) -> usize {
        self.a1_geo
    }

    /// Upper estimate `A^(3 log2 A0 + 5)` for the homogeneity count implied
    /// by doubling; compared against `geometric_doubling` as a soft check.
    pub fn homogeneity_bound(&self) -> f64 {
        self.a_dbl.powf(3.0 * self.a0.log2() + 5.0)
    }

    /// Distance thresholds at which ball membership can change, plus their
    /// doubles: `next_up(d)` and `2 next_up(d)` for each distinct value `d`.
    pub fn canonical_radii(&self) -> &[f64] {
        &self.canonical_radii
    }

    /// All distinct open balls, deduplicated by member set, with witness
    /// center and radius. Order: by witness center, then radius.
    ///
    /// Sufficient wherever only the member set matters (maximal operators
    /// take suprema over sets). Checks whose demands depend on the radius
    /// itself must sweep [`Space::ball_instances`] instead.
    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// Every open-ball instance without deduplication: for each center,
    /// the prefixes of its distance-sorted neighbor list, each realized at
    /// its smallest canonical radius.
    pub fn ball_instances(&self) -> impl Iterator<Item = Ball> + '_ {
        (0..self.n).flat_map(move |x| {
            let (ids, prefix) = &self.sorted_rows[x];
            let mut members = PointSet::empty(self.n);
            let mut i = 0;
            let mut out = Vec::with_capacity(self.n);
            while i < self.n {
                let d = self.dist(x, ids[i] as usize);
                while i < self.n && self.dist(x, ids[i] as usize) == d {
                    members.insert(ids[i] as usize);
                    i += 1;
                }
                out.push(Ball {
                    center: x,
                    radius: bump_radius(d, self.min_sep),
                    members: members.clone(),
                    measure: prefix[i],
                });
            }
            out
        })
    }

    /// Indices into `balls()` of the balls containing point `x`.
    pub fn balls_containing(&self, x: usize) -> &[u32] {
        &self.containing[x]
    }

    /// Member set of the open ball `B(center, radius)`.
    pub fn ball_set(&self, center: usize, radius: f64) -> PointSet {
        let mut s = PointSet::empty(self.n);
        for y in 0..self.n {
            if self.dist(center, y) < radius {
                s.insert(y);
            }
        }
        s
    }

    /// Measure of the open ball `B(center, radius)` via per-center prefix
    /// sums; O(log n).
    pub fn ball_measure(&self, center: usize, radius: f64) -> f64 {
        let (ids, prefix) = &self.sorted_rows[center];
        let k = ids.partition_point(|&id| self.dist(center, id as usize) < radius);
        prefix[k]
    }

    pub fn set_measure(&self, set: &PointSet) -> f64 {
        compensated_sum_by(set.iter(), |i| self.mass[i])
    }

    fn compute_doubling_constant(&self) -> f64 {
        let mut a: f64 = 1.0;
        for x in 0..self.n {
            for &r in &self.canonical_radii {
                let big = self.ball_measure(x, r);
                let small = self.ball_measure(x, r / 2.0);
                a = a.max(big / small);
            }
        }
        a
    }

    fn compute_geometric_doubling(&self) -> usize {
        let mut worst = 1;
        for ball in &self.balls {
            let members = ball.members.to_indices();
            let half = ball.radius / 2.0;
            let mut covered = vec![false; members.len()];
            let mut count = 0;
            for i in 0..members.len() {
                if covered[i] {
                    continue;
                }
                count += 1;
                let y = members[i];
                for (j, &z) in members.iter().enumerate() {
                    if !covered[j] && self.dist(y, z) < half {
                        covered[j] = true;
                    }
                }
            }
            worst = worst.max(count);
        }
        worst
    }
}

impl std::fmt::Debug for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Space")
            .field("n", &self.n)
            .field("a0", &self.a0)
            .field("doubling", &self.a_dbl)
            .field("geometric_doubling", &self.a1_geo)
            .field("balls", &self.balls.len())
            .finish()
    }
}

/// Max over triples (x,y,z), z distinct from x and y, of
/// `d(x,y) / (d(x,z) + d(z,y))`, clamped below at 1. Two-point spaces have
/// no nondegenerate triple and clamp to 1.
fn quasi_metric_constant(dist: &[f64], n: usize) -> f64 {
    let mut a0: f64 = 1.0;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let dxy = dist[x * n + y];
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                a0 = a0.max(dxy / (dist[x * n + z] + dist[z * n + y]));
            }
        }
    }
    a0
}

/// The one-ulp bump realizing the threshold `dist <= d` as an open ball.
/// The zero threshold uses half the minimum separation instead, so that
/// halving the radius (doubling checks, greedy covers) stays positive.
fn bump_radius(d: f64, min_sep: f64) -> f64 {
    if d == 0.0 {
        0.5 * min_sep
    } else {
        d.next_up()
    }
}

fn canonical_radii(dist: &[f64], n: usize, min_sep: f64) -> Vec<f64> {
    let mut values: Vec<f64> = dist[..n * n].to_vec();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    let mut radii = Vec::with_capacity(2 * values.len());
    for d in values {
        let bumped = bump_radius(d, min_sep);
        radii.push(bumped);
        radii.push(2.0 * bumped);
    }
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();
    radii
}

/// Per center, realizable balls are the prefixes of the distance-sorted
/// neighbor list; each set's witness radius is the smallest canonical
/// radius realizing it. Deduplicates across centers keeping the first
/// witness in (center, radius) order.
fn enumerate_balls_impl(dist: &[f64], n: usize, mass: &[f64], min_sep: f64) -> Vec<Ball> {
    use std::collections::HashSet;
    let mut seen: HashSet<PointSet> = HashSet::new();
    let mut balls = Vec::new();
    for x in 0..n {
        let mut ids: Vec<u32> = (0..n as u32).collect();
        ids.sort_by(|&a, &b| {
            dist[x * n + a as usize]
                .partial_cmp(&dist[x * n + b as usize])
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut members = PointSet::empty(n);
        let mut terms: Vec<f64> = Vec::with_capacity(n);
        let mut i = 0;
        while i < n {
            let d = dist[x * n + ids[i] as usize];
            // absorb the whole tie class at distance d
            while i < n && dist[x * n + ids[i] as usize] == d {
                members.insert(ids[i] as usize);
                terms.push(mass[ids[i] as usize]);
                i += 1;
            }
            if seen.insert(members.clone()) {
                balls.push(Ball {
                    center: x,
                    radius: bump_radius(d, min_sep),
                    members: members.clone(),
                    measure: compensated_sum(&terms),
                });
            }
        }
    }
    balls
}

/// Space generators. All are deterministic in (kind, seed).
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    /// `n` unit-spaced collinear points, unit masses.
    Path { n: usize },
    /// `side x side` integer lattice with Euclidean distance, unit masses.
    Grid2d { side: usize },
    /// `n` points pairwise at distance 1, unit masses.
    Discrete { n: usize },
    /// `2^depth` leaves of a binary tree; distance `2^-lcp`, unit masses.
    CantorUltrametric { depth: u32 },
    /// `n` uniform points in the unit square, masses uniform in [1/2, 2).
    RandomPlanar { n: usize },
    /// Base space with distances raised to the power `beta > 1`, which
    /// produces quasi-metric constants above 1.
    Snowflake { base: Box<SpaceKind>, beta: f64 },
}

pub fn generate_space(kind: &SpaceKind, seed: u64) -> Result<Space> {
    let (dist, mass) = generate_raw(kind, seed)?;
    Space::new(dist, mass)
}

fn generate_raw(kind: &SpaceKind, seed: u64) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    match kind {
        SpaceKind::Path { n } => {
            require_points(*n)?;
            let dist = matrix(*n, |i, j| (i as f64 - j as f64).abs());
            Ok((dist, vec![1.0; *n]))
        }
        SpaceKind::Grid2d { side } => {
            let n = side * side;
            require_points(n)?;
            let coord = |i: usize| ((i / side) as f64, (i % side) as f64);
            let dist = matrix(n, |i, j| {
                let (xi, yi) = coord(i);
                let (xj, yj) = coord(j);
                (xi - xj).hypot(yi - yj)
            });
            Ok((dist, vec![1.0; n]))
        }
        SpaceKind::Discrete { n } => {
            require_points(*n)?;
            let dist = matrix(*n, |i, j| if i == j { 0.0 } else { 1.0 });
            Ok((dist, vec![1.0; *n]))
        }
        SpaceKind::CantorUltrametric { depth } => {
            if *depth == 0 || *depth > 16 {
                return Err(Error::InvalidParam(format!(
                    "cantor depth must be in 1..=16, got {depth}"
                )));
            }
            let n = 1usize << depth;
            let dist = matrix(n, |i, j| {
                if i == j {
                    0.0
                } else {
                    let lcp = ((i ^ j) as u32).leading_zeros() - (32 - depth);
                    2f64.powi(-(lcp as i32))
                }
            });
            Ok((dist, vec![1.0; n]))
        }
        SpaceKind::RandomPlanar { n } => {
            require_points(*n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pts: Vec<(f64, f64)> = Vec::with_capacity(*n);
            while pts.len() < *n {
                let p = (rng.gen::<f64>(), rng.gen::<f64>());
                // keep points separated so the matrix stays valid
                if pts.iter().all(|q| (p.0 - q.0).hypot(p.1 - q.1) > 1e-6) {
                    pts.push(p);
                }
            }
            let mass: Vec<f64> = (0..*n).map(|_| 0.5 + 1.5 * rng.gen::<f64>()).collect();
            let dist = matrix(*n, |i, j| (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1));
            Ok((dist, mass))
        }
        SpaceKind::Snowflake { base, beta } => {
            if !beta.is_finite() || *beta <= 1.0 {
                return Err(Error::InvalidParam(format!(
                    "snowflake exponent must be > 1, got {beta}"
                )));
            }
            let (dist, mass) = generate_raw(base, seed)?;
            let n = dist.len();
            let dist = (0..n)
                .map(|i| (0..n).map(|j| dist[i][j].powf(*beta)).collect())
                .collect();
            Ok((dist, mass))
        }
    }
}

fn require_points(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidParam(format!(
            "generator needs at least 2 points, got {n}"
        )))
    } else {
        Ok(())
    }
}

fn matrix(n: usize, f: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
}
