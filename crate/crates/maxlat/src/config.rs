//! Run configuration and flat-file ingestion.
//!
//! A run is described by one flat TOML document; CLI flags override
//! individual keys. Space files are plain text: the point count, the
//! distance matrix row by row, then one line of masses. Function and
//! exponent files carry one value per line (`inf` allowed for exponents).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{ExponentFunction, Lattice, ModularKind};
use crate::space::{generate_space, Space, SpaceKind};

/// Flat run configuration with documented defaults. `delta = 0` means the
/// regime-maximal power of two; `eta = 0` means the admissible maximum.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Generator spec (`path:3`, `snowflake:2:path:3`, ...) or a file path.
    pub space: String,
    /// Grid scale; 0 selects the largest power of two in regime.
    pub delta: f64,
    /// Cap on the number of adjacent grids.
    pub kmax_grids: usize,
    /// Seed for grids, samples and norm estimation.
    pub seed: u64,
    /// Exponent spec: `auto`, `const:P`, inline `2,3,2` (with `inf`), or a
    /// file path.
    pub exponents: String,
    /// Modular kind for the configured lattice: `sum` or `max`.
    pub modular: String,
    /// Convexification order applied to the configured lattice; 1 = none.
    pub convexify_r: f64,
    /// Suite selection for `verify`.
    pub suite: String,
    /// Number of seeded random sample functions.
    pub samples_random: usize,
    /// Number of iteration-generated sample weights.
    pub samples_rdf: usize,
    /// Fraction of the admissible iteration-weight range to use.
    pub theta: f64,
    /// Inflation factor applied to empirical operator-norm values.
    pub safety: f64,
    /// Multi-start norm estimation budget.
    pub norm_starts: usize,
    pub norm_steps: usize,
    /// Upper end of the convexification sweep above 1.
    pub s_max: f64,
    /// Exponent bump for the reverse Hölder checks; 0 = admissible maximum.
    pub eta: f64,
    /// Fractions of the admissible cap used as iteration weights.
    pub epsilon_fracs: Vec<f64>,
    /// Output directory; empty = `$MAXLAT_OUT_DIR` or `maxlat-out`.
    pub out_dir: String,
    /// Slack for exact-arithmetic checks.
    pub tol_exact: f64,
    /// Slack for truncation-propagated checks.
    pub tol_trunc: f64,
    /// Slack for solver-normed checks.
    pub tol_norm: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            space: "path:3".into(),
            delta: 0.0,
            kmax_grids: 24,
            seed: 7,
            exponents: "auto".into(),
            modular: "sum".into(),
            convexify_r: 1.0,
            suite: "all".into(),
            samples_random: 100,
            samples_rdf: 10,
            theta: 0.5,
            safety: 1.5,
            norm_starts: 8,
            norm_steps: 25,
            s_max: 2.0,
            eta: 0.0,
            epsilon_fracs: vec![0.25, 0.5, 0.75],
            out_dir: String::new(),
            tol_exact: 1e-12,
            tol_trunc: 1e-9,
            tol_norm: 1e-10,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Usage(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialization")
    }

    /// Hash of the resolved configuration, for provenance headers. The
    /// output directory is not part of the hash: it does not affect any
    /// computed value.
    pub fn hash(&self) -> String {
        let canonical = RunConfig {
            out_dir: String::new(),
            ..self.clone()
        };
        let digest = Sha256::digest(canonical.to_toml().as_bytes());
        hex_prefix(&digest, 12)
    }

    pub fn modular_kind(&self) -> Result<ModularKind> {
        match self.modular.as_str() {
            "sum" => Ok(ModularKind::Sum),
            "max" => Ok(ModularKind::Max),
            other => Err(Error::Usage(format!(
                "modular must be sum or max, got {other:?}"
            ))),
        }
    }

    pub fn resolve_space(&self) -> Result<Space> {
        load_space(&self.space, self.seed)
    }

    pub fn resolve_exponents(&self, n: usize) -> Result<ExponentFunction> {
        parse_exponent_spec(&self.exponents, n)
    }

    pub fn resolve_lattice(&self, n: usize) -> Result<Lattice> {
        let p = self.resolve_exponents(n)?;
        let lattice = Lattice::variable(p, self.modular_kind()?);
        if self.convexify_r == 1.0 {
            Ok(lattice)
        } else {
            lattice.convexified(self.convexify_r)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        if !self.out_dir.is_empty() {
            PathBuf::from(&self.out_dir)
        } else if let Ok(dir) = std::env::var("MAXLAT_OUT_DIR") {
            PathBuf::from(dir)
        } else {
            PathBuf::from("maxlat-out")
        }
    }
}

fn hex_prefix(bytes: &[u8], len: usize) -> String {
    bytes
        .iter()
        .flat_map(|b| [b >> 4, b & 0xf])
        .take(len)
        .map(|nibble| char::from_digit(nibble as u32, 16).unwrap())
        .collect()
}

/// Parses a generator spec like `path:5`, `snowflake:2.0:path:3`,
/// `random-planar:16`, or falls back to reading a space file.
pub fn parse_space_spec(spec: &str) -> Result<Option<SpaceKind>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usize_arg = |value: &str, what: &str| -> Result<usize> {
        value
            .parse()
            .map_err(|_| Error::Usage(format!("bad {what} in space spec {spec:?}")))
    };
    match parts[0] {
        "path" if parts.len() == 2 => Ok(Some(SpaceKind::Path {
            n: usize_arg(parts[1], "point count")?,
        })),
        "grid2d" if parts.len() == 2 => Ok(Some(SpaceKind::Grid2d {
            side: usize_arg(parts[1], "side")?,
        })),
        "discrete" if parts.len() == 2 => Ok(Some(SpaceKind::Discrete {
            n: usize_arg(parts[1], "point count")?,
        })),
        "cantor" if parts.len() == 2 => Ok(Some(SpaceKind::CantorUltrametric {
            depth: usize_arg(parts[1], "depth")? as u32,
        })),
        "random-planar" | "planar" if parts.len() == 2 => Ok(Some(SpaceKind::RandomPlanar {
            n: usize_arg(parts[1], "point count")?,
        })),
        "snowflake" if parts.len() >= 3 => {
            let beta: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Usage(format!("bad exponent in space spec {spec:?}")))?;
            let inner = parse_space_spec(&parts[2..].join(":"))?
                .ok_or_else(|| Error::Usage(format!("snowflake needs a generator: {spec:?}")))?;
            Ok(Some(SpaceKind::Snowflake {
                base: Box::new(inner),
                beta,
            }))
        }
        "file" if parts.len() == 2 => Ok(None),
        _ => Ok(None),
    }
}

/// Resolves a space spec: generator string or file path.
pub fn load_space(spec: &str, seed: u64) -> Result<Space> {
    if let Some(kind) = parse_space_spec(spec)? {
        return generate_space(&kind, seed);
    }
    let path = spec.strip_prefix("file:").unwrap_or(spec);
    if Path::new(path).exists() {
        parse_space_file(Path::new(path))
    } else {
        Err(Error::UnknownKind(spec.to_string()))
    }
}

/// Space file format: line 1 the point count, then n rows of n distances,
/// then one line of n masses. Reports the first offending line.
pub fn parse_space_file(path: &Path) -> Result<Space> {
    let text = std::fs::read_to_string(path)?;
    let name = path.display().to_string();
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let mut next_line = |what: &str| -> Result<(usize, &str)> {
        lines
            .next()
            .ok_or_else(|| Error::ParseFile {
                path: name.clone(),
                line: text.lines().count(),
                message: format!("missing {what}"),
            })
            .map(|(i, l)| (i + 1, l))
    };

    let (line_no, header) = next_line("point count")?;
    let n: usize = header.trim().parse().map_err(|_| Error::ParseFile {
        path: name.clone(),
        line: line_no,
        message: format!("bad point count {header:?}"),
    })?;

    let mut dist = Vec::with_capacity(n);
    for row in 0..n {
        let (line_no, line) = next_line(&format!("distance row {row}"))?;
        let values = parse_reals(line).map_err(|message| Error::ParseFile {
            path: name.clone(),
            line: line_no,
            message,
        })?;
        if values.len() != n {
            return Err(Error::BadDimensions {
                row,
                got: values.len(),
                expected: n,
            });
        }
        dist.push(values);
    }
    let (line_no, line) = next_line("mass line")?;
    let mass = parse_reals(line).map_err(|message| Error::ParseFile {
        path: name.clone(),
        line: line_no,
        message,
    })?;
    if mass.len() != n {
        return Err(Error::LengthMismatch {
            got: mass.len(),
            expected: n,
        });
    }
    Space::new(dist, mass)
}

fn parse_reals(line: &str) -> std::result::Result<Vec<f64>, String> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| format!("bad real value {tok:?}"))
        })
        .collect()
}

/// Writes a space in the ingestion format.
pub fn write_space_file(space: &Space) -> String {
    let n = space.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| space.dist(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let masses: Vec<String> = (0..n).map(|i| space.mass(i).to_string()).collect();
    out.push_str(&masses.join(" "));
    out.push('\n');
    out
}

/// Function file format: one real per line.
pub fn parse_function_file(path: &Path, n: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let name = path.display().to_string();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        values.push(line.parse::<f64>().map_err(|_| Error::ParseFile {
            path: name.clone(),
            line: i + 1,
            message: format!("bad real value {line:?}"),
        })?);
    }
    if values.len() != n {
        return Err(Error::LengthMismatch {
            got: values.len(),
            expected: n,
        });
    }
    Ok(values)
}

/// Exponent spec: `auto` (a mildly variable exponent fitted to the space),
/// `const:P`, an inline comma list with `inf` tokens, or a file path with
/// one entry per line.
pub fn parse_exponent_spec(spec: &str, n: usize) -> Result<ExponentFunction> {
    let parse_token = |tok: &str| -> Result<f64> {
        if tok.eq_ignore_ascii_case("inf") {
            Ok(f64::INFINITY)
        } else {
            tok.parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad exponent value {tok:?}")))
        }
    };
    if spec == "auto" {
        // the default pipeline exponent: 2 with a bump to 3 at one point
        let mut entries = vec![2.0; n];
        if n > 1 {
            entries[1] = 3.0;
        }
        return ExponentFunction::new(entries);
    }
    if let Some(value) = spec.strip_prefix("const:") {
        return ExponentFunction::constant(n, parse_token(value)?);
    }
    if spec.contains(',') {
        let entries: Result<Vec<f64>> = spec.split(',').map(|t| parse_token(t.trim())).collect();
        let entries = entries?;
        if entries.len() != n {
            return Err(Error::LengthMismatch {
                got: entries.len(),
                expected: n,
            });
        }
        return ExponentFunction::new(entries);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            entries.push(parse_token(line)?);
        }
        if entries.len() != n {
            return Err(Error::LengthMismatch {
                got: entries.len(),
                expected: n,
            });
        }
        return ExponentFunction::new(entries);
    }
    Err(Error::Usage(format!(
        "cannot interpret exponent spec {spec:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_hash_stability() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.space, "path:3");
        assert_eq!(cfg.hash(), RunConfig::default().hash());
        let other = RunConfig {
            seed: 8,
            ..RunConfig::default()
        };
        assert_ne!(cfg.hash(), other.hash());
        // round-trip through TOML
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(RunConfig::from_toml("nonsense_key = 3").is_err());
    }

    #[test]
    fn space_spec_parsing() {
        assert_eq!(
            parse_space_spec("path:5").unwrap(),
            Some(SpaceKind::Path { n: 5 })
        );
        assert_eq!(
            parse_space_spec("snowflake:2.0:path:3").unwrap(),
            Some(SpaceKind::Snowflake {
                base: Box::new(SpaceKind::Path { n: 3 }),
                beta: 2.0
            })
        );
        assert_eq!(parse_space_spec("no-such-generator").unwrap(), None);
        assert!(load_space("path:3", 0).is_ok());
        assert!(load_space("no/such/file", 0).is_err());
    }

    #[test]
    fn space_file_roundtrip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("space.txt");
        std::fs::write(&good, "3\n0 1 2\n1 0 1\n2 1 0\n1 1 1\n").unwrap();
        let space = parse_space_file(&good).unwrap();
        assert_eq!(space.n(), 3);
        assert_eq!(space.a0(), 1.0);

        let rewritten = dir.path().join("space2.txt");
        std::fs::write(&rewritten, write_space_file(&space)).unwrap();
        let again = parse_space_file(&rewritten).unwrap();
        assert_eq!(again.dist(0, 2), 2.0);

        let zero_mass = dir.path().join("bad_mass.txt");
        std::fs::write(&zero_mass, "2\n0 1\n1 0\n1 0\n").unwrap();
        assert!(matches!(
            parse_space_file(&zero_mass),
            Err(Error::NonpositiveMass { .. })
        ));

        let asym = dir.path().join("asym.txt");
        std::fs::write(&asym, "2\n0 1\n1.001 0\n1 1\n").unwrap();
        assert!(matches!(
            parse_space_file(&asym),
            Err(Error::AsymmetricDistance { .. })
        ));

        let short = dir.path().join("short.txt");
        std::fs::write(&short, "3\n0 1\n").unwrap();
        assert!(parse_space_file(&short).is_err());
    }

    #[test]
    fn function_files() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("f.txt");
        std::fs::write(&good, "1.5\n0\n-2.25\n").unwrap();
        assert_eq!(parse_function_file(&good, 3).unwrap(), vec![1.5, 0.0, -2.25]);
        assert!(parse_function_file(&good, 4).is_err());
        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "1.5\nnope\n2\n").unwrap();
        assert!(matches!(
            parse_function_file(&bad, 3),
            Err(Error::ParseFile { line: 2, .. })
        ));
    }

    #[test]
    fn exponent_specs() {
        let p = parse_exponent_spec("2,inf,0.5", 3).unwrap();
        assert_eq!(p.entry(0), 2.0);
        assert!(p.is_inf(1));
        assert_eq!(p.p_minus(), 0.5);
        assert!(parse_exponent_spec("2,3", 3).is_err());
        let c = parse_exponent_spec("const:2", 4).unwrap();
        assert_eq!(c.p_minus(), 2.0);
        let auto = parse_exponent_spec("auto", 3).unwrap();
        assert_eq!(auto.entries(), &[2.0, 3.0, 2.0]);
        assert!(parse_exponent_spec("wat", 3).is_err());
    }

    #[test]
    fn lattice_resolution() {
        let cfg = RunConfig::default();
        let lattice = cfg.resolve_lattice(3).unwrap();
        assert_eq!(lattice.c_fatou(), 1.0);
        let convex = RunConfig {
            convexify_r: 2.0,
            ..RunConfig::default()
        };
        let lattice = convex.resolve_lattice(3).unwrap();
        assert!(matches!(lattice, Lattice::Convexified { .. }));
    }
}
