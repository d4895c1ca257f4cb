//! Variable Lebesgue lattices and their convexifications.
//!
//! An exponent function assigns each point a value in (0, 700] or infinity.
//! Two modulars are supported: the sum modular (integral part plus the sup
//! over the infinity set) and the max modular (maximum of the two parts).
//! The Luxemburg–Nakano quasi-norm is the infimal `lambda` with
//! `modular(f/lambda) <= 1`, computed by bracketing and bisection; the
//! modular is nonincreasing in `lambda`, which makes the bracket certified.
//!
//! A lattice is either a variable Lebesgue space (exponent plus modular
//! kind) or a convexification of one by some order `r > 0`. Each lattice
//! carries its quasi-triangle constant, Fatou constant and Aoki–Rolewicz
//! exponent; convexifications derive theirs from the base.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maximal::validate_function;
use crate::numeric::compensated_sum;
use crate::report::CheckRecord;
use crate::space::Space;

/// Finite exponent entries are capped here; anything larger must be
/// declared infinite, keeping `|f|^p` inside the f64 exponent range.
pub const EXPONENT_CAP: f64 = 700.0;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModularKind {
    Sum,
    Max,
}

impl std::fmt::Display for ModularKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModularKind::Sum => f.write_str("sum"),
            ModularKind::Max => f.write_str("max"),
        }
    }
}

/// A variable exponent `p(.)` with its infinity set tracked explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFunction {
    entries: Vec<f64>,
}

impl ExponentFunction {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        for (index, &p) in entries.iter().enumerate() {
            let ok = p == f64::INFINITY || (p > 0.0 && p <= EXPONENT_CAP);
            if !ok {
                return Err(Error::BadExponent { index, value: p });
            }
        }
        if entries.is_empty() {
            return Err(Error::InvalidParam("empty exponent function".into()));
        }
        Ok(ExponentFunction { entries })
    }

    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_inf(&self, i: usize) -> bool {
        self.entries[i] == f64::INFINITY
    }

    /// Points where the exponent is infinite.
    pub fn omega_inf(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.entries.len()).filter(|&i| self.is_inf(i))
    }

    /// Essential infimum; on a finite space, the minimum entry.
    pub fn p_minus(&self) -> f64 {
        self.entries.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// The exponent `s * p(.)`; infinity entries stay infinite.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "exponent scale must be positive, got {s}"
            )));
        }
        Self::new(
            self.entries
                .iter()
                .map(|&p| if p == f64::INFINITY { p } else { p * s })
                .collect(),
        )
    }

    pub fn descriptor(&self) -> String {
        let mut parts: Vec<String> = self.entries.iter().take(8).map(|p| p.to_string()).collect();
        if self.entries.len() > 8 {
            parts.push("..".into());
        }
        format!("p=({})", parts.join(","))
    }
}

/// The modular of `f`: integral part over finite-exponent points plus (sum
/// kind) or maximized with (max kind) the sup over the infinity set.
/// Overflow is reported as +inf, a legal value during norm bracketing.
pub fn modular(space: &Space, f: &[f64], p: &ExponentFunction, kind: ModularKind) -> f64 {
    debug_assert_eq!(f.len(), p.len());
    let mut terms = Vec::with_capacity(f.len());
    let mut sup = 0.0f64;
    for (i, &v) in f.iter().enumerate() {
        let av = v.abs();
        if p.is_inf(i) {
            sup = sup.max(av);
        } else {
            terms.push(av.powf(p.entry(i)) * space.mass(i));
        }
    }
    let integral = compensated_sum(&terms);
    match kind {
        ModularKind::Sum => integral + sup,
        ModularKind::Max => integral.max(sup),
    }
}

const NORM_REL_TOL: f64 = 5e-14;
const SOLVER_CAP: usize = 200;

/// Luxemburg–Nakano quasi-norm: `inf { lambda > 0 : modular(f/lambda) <= 1 }`.
///
/// Purely infinite exponents short-circuit to `max |f|`. Otherwise the
/// solver brackets the threshold between an infeasible `lambda` and a
/// feasible one and bisects; the returned value is the feasible end of the
/// final bracket, so `modular(f/norm) <= 1` always holds.
pub fn luxemburg_norm(
    space: &Space,
    f: &[f64],
    p: &ExponentFunction,
    kind: ModularKind,
) -> Result<f64> {
    validate_function(space, f)?;
    if f.len() != p.len() {
        return Err(Error::LengthMismatch {
            got: p.len(),
            expected: f.len(),
        });
    }
    let fmax = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if fmax == 0.0 {
        return Ok(0.0);
    }
    if (0..p.len()).all(|i| p.is_inf(i)) {
        return Ok(fmax);
    }

    // Starting at max|f| keeps the sup part at most 1, so only the integral
    // part decides feasibility from here on.
    let eval = |lambda: f64| {
        let scaled: Vec<f64> = f.iter().map(|v| v / lambda).collect();
        modular(space, &scaled, p, kind)
    };
    let mut hi = fmax;
    let mut steps = 0;
    while eval(hi) > 1.0 {
        hi *= 2.0;
        steps += 1;
        if steps > SOLVER_CAP {
            return Err(Error::NoConvergence(format!(
                "no feasible lambda found up to {hi}"
            )));
        }
    }
    let mut lo = hi / 2.0;
    while eval(lo) <= 1.0 {
        lo /= 2.0;
        steps += 1;
        if steps > SOLVER_CAP {
            // the modular stays at or below 1 arbitrarily close to zero
            return Ok(0.0);
        }
    }
    let mut iter = 0;
    while hi - lo > NORM_REL_TOL * hi && iter < SOLVER_CAP {
        let mid = 0.5 * (lo + hi);
        if eval(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    Ok(hi)
}

/// A quasi-normed lattice: a variable Lebesgue space or a convexification.
#[derive(Clone, Debug)]
pub enum Lattice {
    VariableLebesgue {
        p: ExponentFunction,
        kind: ModularKind,
    },
    Convexified {
        base: Box<Lattice>,
        r: f64,
    },
}

impl Lattice {
    pub fn variable(p: ExponentFunction, kind: ModularKind) -> Lattice {
        Lattice::VariableLebesgue { p, kind }
    }

    pub fn constant_exponent(n: usize, p: f64, kind: ModularKind) -> Result<Lattice> {
        Ok(Lattice::variable(ExponentFunction::constant(n, p)?, kind))
    }

    pub fn convexified(self, r: f64) -> Result<Lattice> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "convexification order must be positive, got {r}"
            )));
        }
        Ok(Lattice::Convexified {
            base: Box::new(self),
            r,
        })
    }

    /// Quasi-triangle constant. Variable Lebesgue: `max(1, 2^(1/p_- - 1))`;
    /// convexification of order r: `2^|1 - 1/r| * C(base)^(1/r)`.
    pub fn c_tri(&self) -> f64 {
        match self {
            Lattice::VariableLebesgue { p, .. } => {
                let pm = p.p_minus();
                1.0f64.max(2f64.powf(1.0 / pm - 1.0))
            }
            Lattice::Convexified { base, r } => {
                2f64.powf((1.0 - 1.0 / r).abs()) * base.c_tri().powf(1.0 / r)
            }
        }
    }

    /// Aoki–Rolewicz exponent, from `2^(1/rho - 1) = c_tri`.
    pub fn rho(&self) -> f64 {
        1.0 / (1.0 + self.c_tri().log2())
    }

    /// Fatou constant: 1 for variable Lebesgue spaces, `C(base)^(1/r)` for
    /// convexifications.
    pub fn c_fatou(&self) -> f64 {
        match self {
            Lattice::VariableLebesgue { .. } => 1.0,
            Lattice::Convexified { base, r } => base.c_fatou().powf(1.0 / r),
        }
    }

    /// The quasi-norm of `f` in this lattice.
    ///
    /// Convexifications evaluate `|| |f|^r ||_base ^ (1/r)` recursively.
    pub fn quasinorm(&self, space: &Space, f: &[f64]) -> Result<f64> {
        match self {
            Lattice::VariableLebesgue { p, kind } => luxemburg_norm(space, f, p, *kind),
            Lattice::Convexified { base, r } => {
                let powered: Vec<f64> = f.iter().map(|v| v.abs().powf(*r)).collect();
                Ok(base.quasinorm(space, &powered)?.powf(1.0 / r))
            }
        }
    }

    pub fn modular_kind(&self) -> ModularKind {
        match self {
            Lattice::VariableLebesgue { kind, .. } => *kind,
            Lattice::Convexified { base, .. } => base.modular_kind(),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Lattice::VariableLebesgue { p, kind } => {
                format!("L[{}; {kind}]", p.descriptor())
            }
            Lattice::Convexified { base, r } => format!("({})^({r})", base.descriptor()),
        }
    }
}

const MODULAR_SLACK: f64 = 1e-12;
const NORM_SLACK: f64 = 1e-10;

/// Elementary modular properties, run for both modular kinds:
/// order preservation (against the dominated cut of `g` by `f`), the
/// scaling bound for `0 < alpha < 1`, and the convexity-type splitting
/// bound when `p_- < 1` and `alpha + beta = 1`.
pub fn verify_modular_properties(
    space: &Space,
    p: &ExponentFunction,
    f: &[f64],
    g: &[f64],
    alpha: f64,
    beta: f64,
) -> Result<Vec<CheckRecord>> {
    validate_function(space, f)?;
    validate_function(space, g)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Precondition(format!(
            "scaling factor must lie in (0,1), got {alpha}"
        )));
    }
    let pm = p.p_minus();
    let mut records = Vec::new();
    for kind in [ModularKind::Sum, ModularKind::Max] {
        let m_f = modular(space, f, p, kind);
        // order preservation on the pointwise cut of g by |f|
        let dominated: Vec<f64> = g
            .iter()
            .zip(f)
            .map(|(&gv, &fv)| gv.abs().min(fv.abs()))
            .collect();
        records.push(CheckRecord::leq(
            format!("modular-order[{kind}]"),
            "modular-order",
            modular(space, &dominated, p, kind),
            m_f,
            MODULAR_SLACK,
        ));
        let scaled: Vec<f64> = f.iter().map(|v| alpha * v).collect();
        records.push(CheckRecord::leq(
            format!("modular-scaling[{kind},alpha={alpha}]"),
            "modular-scaling",
            modular(space, &scaled, p, kind),
            alpha.powf(pm.min(1.0)) * m_f,
            MODULAR_SLACK,
        ));
        if pm < 1.0 && (alpha + beta - 1.0).abs() <= 1e-15 && beta >= 0.0 {
            let mix: Vec<f64> = f
                .iter()
                .zip(g)
                .map(|(&fv, &gv)| alpha * fv + beta * gv)
                .collect();
            records.push(CheckRecord::leq(
                format!("modular-convexity[{kind},alpha={alpha}]"),
                "modular-convexity",
                modular(space, &mix, p, kind),
                alpha.powf(pm) * m_f + beta.powf(pm) * modular(space, g, p, kind),
                MODULAR_SLACK,
            ));
        }
    }
    Ok(records)
}

/// `||f+g|| <= c_tri (||f|| + ||g||)` in the given lattice.
pub fn verify_quasi_triangle(
    space: &Space,
    lattice: &Lattice,
    f: &[f64],
    g: &[f64],
) -> Result<CheckRecord> {
    let sum: Vec<f64> = f.iter().zip(g).map(|(a, b)| a + b).collect();
    let lhs = lattice.quasinorm(space, &sum)?;
    let rhs = lattice.c_tri() * (lattice.quasinorm(space, f)? + lattice.quasinorm(space, g)?);
    Ok(CheckRecord::leq(
        format!("quasi-triangle[{}]", lattice.descriptor()),
        "quasi-triangle",
        lhs,
        rhs,
        NORM_SLACK,
    ))
}

/// Relations between the convexified quasi-norm and the rescaled-exponent
/// quasi-norm: a two-sided sandwich for the sum modular, exact equality for
/// the max modular.
pub fn verify_norm_equivalences(
    space: &Space,
    p: &ExponentFunction,
    s: f64,
    f: &[f64],
) -> Result<Vec<CheckRecord>> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::Precondition(format!(
            "convexification order must be positive, got {s}"
        )));
    }
    let pm = p.p_minus();
    let scaled = p.scaled(s)?;
    let mut records = Vec::new();

    // sum modular: sandwich with explicit constants
    let convex = Lattice::variable(p.clone(), ModularKind::Sum).convexified(s)?;
    let via_convex = convex.quasinorm(space, f)?;
    let direct = luxemburg_norm(space, f, &scaled, ModularKind::Sum)?;
    let lower = 2f64.powf(-(1.0 / s) * (1.0 / pm).max(1.0));
    let upper = 2f64.powf((1.0 / (s * pm)).max(1.0));
    records.push(CheckRecord::leq(
        format!("norm-sandwich-lower[s={s}]"),
        "convexified-norm-sandwich",
        lower * via_convex,
        direct,
        NORM_SLACK,
    ));
    records.push(CheckRecord::leq(
        format!("norm-sandwich-upper[s={s}]"),
        "convexified-norm-sandwich",
        direct,
        upper * via_convex,
        NORM_SLACK,
    ));

    // max modular: the two quasi-norms coincide
    let convex_max = Lattice::variable(p.clone(), ModularKind::Max).convexified(s)?;
    records.push(CheckRecord::eq(
        format!("max-norm-equality[s={s}]"),
        "max-norm-convexification-equality",
        convex_max.quasinorm(space, f)?,
        luxemburg_norm(space, f, &scaled, ModularKind::Max)?,
        NORM_SLACK,
    ));
    Ok(records)
}

/// Finite-sum Aoki–Rolewicz inequality with the lattice's exponent:
/// `||sum f_k|| <= 2^(1/rho) C_F (sum ||f_k||^rho)^(1/rho)`.
pub fn aoki_rolewicz_check(
    space: &Space,
    lattice: &Lattice,
    fk_list: &[Vec<f64>],
) -> Result<CheckRecord> {
    if fk_list.is_empty() {
        return Err(Error::InvalidParam("empty function list".into()));
    }
    for f in fk_list {
        validate_function(space, f)?;
        if let Some((index, &value)) = f.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NonFiniteEntry { index, value });
        }
    }
    let n = space.n();
    let mut total = vec![0.0f64; n];
    for f in fk_list {
        for (t, v) in total.iter_mut().zip(f) {
            *t += v;
        }
    }
    let rho = lattice.rho();
    let lhs = lattice.quasinorm(space, &total)?;
    let mut pow_terms = Vec::with_capacity(fk_list.len());
    for f in fk_list {
        pow_terms.push(lattice.quasinorm(space, f)?.powf(rho));
    }
    let rhs =
        2f64.powf(1.0 / rho) * lattice.c_fatou() * compensated_sum(&pow_terms).powf(1.0 / rho);
    Ok(CheckRecord::leq(
        format!("aoki-rolewicz[k={}]", fk_list.len()),
        "aoki-rolewicz-sum",
        lhs,
        rhs,
        NORM_SLACK,
    ))
}
