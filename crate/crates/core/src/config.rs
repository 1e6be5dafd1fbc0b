//! Run configuration: a flat `key = value` text format with `[section]` headers and
//! `#` comments.
//!
//! Every key is declared in [`SCHEMA`] with a type and a default; unknown keys and
//! ill-typed values are rejected. [`RunConfig::to_text`] writes every key in schema
//! order, and parsing that text gives back an identical configuration.
//!
//! The defaults reproduce the reference medium `ρ0 = 1 fm⁻³`, `g = 1.15`,
//! `m_G = 460 MeV` and the soliton parameters used for the reference figures.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::table::config_hash;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Bool,
    Str,
    /// Comma-separated floats.
    List,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    List(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Str(v) => f.write_str(v),
            Value::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

fn parse_float(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

impl Value {
    fn parse(kind: Kind, raw: &str) -> Option<Value> {
        let s = raw.trim();
        match kind {
            Kind::Float => parse_float(s).map(Value::Float),
            Kind::Int => s.parse().ok().map(Value::Int),
            Kind::Bool => match s {
                "true" => Some(Value::Bool(true)),
                "false" => Some(Value::Bool(false)),
                _ => None,
            },
            Kind::Str => {
                let unq = s.trim_matches('"');
                (!unq.is_empty()).then(|| Value::Str(unq.to_string()))
            }
            Kind::List => {
                let items: Option<Vec<f64>> = s.split(',').map(parse_float).collect();
                items.filter(|v| !v.is_empty()).map(Value::List)
            }
        }
    }
}

/// `(section.key, type, default)`.
pub const SCHEMA: &[(&str, Kind, &str)] = &[
    // medium
    ("physics.g", Kind::Float, "1.15"),
    ("physics.m_g_mev", Kind::Float, "460"),
    ("physics.bag", Kind::Float, "0"),
    ("physics.rho0", Kind::Float, "1"),
    ("physics.gamma_q", Kind::Int, "6"),
    ("equation.kind", Kind::Str, "kp_cart"),
    // uniform-matter table
    ("eos.rho_min", Kind::Float, "0"),
    ("eos.rho_max", Kind::Float, "3"),
    ("eos.n", Kind::Int, "31"),
    // cylindrical soliton (b = √(1 − a²))
    ("cyl.a", Kind::Float, "0.6"),
    ("cyl.u", Kind::Float, "0.73"),
    // cartesian soliton (ℬ = √(1 − 𝒜² − 𝒞²))
    ("cart.a", Kind::Float, "0.6"),
    ("cart.c", Kind::Float, "0.5"),
    ("cart.u", Kind::Float, "0.66"),
    // soliton-eval slice
    ("eval.slice", Kind::Str, "rz"),
    ("eval.t", Kind::Float, "18"),
    ("eval.fixed", Kind::Float, "0"),
    ("eval.c1_min", Kind::Float, "0"),
    ("eval.c1_max", Kind::Float, "60"),
    ("eval.c1_n", Kind::Int, "121"),
    ("eval.c2_min", Kind::Float, "0"),
    ("eval.c2_max", Kind::Float, "30"),
    ("eval.c2_n", Kind::Int, "61"),
    // existence region scan
    ("scan.geometry", Kind::Str, "cyl"),
    ("scan.a_min", Kind::Float, "0.2"),
    ("scan.a_max", Kind::Float, "1"),
    ("scan.a_n", Kind::Int, "81"),
    ("scan.u_min", Kind::Float, "0.6"),
    ("scan.u_max", Kind::Float, "1.8"),
    ("scan.u_n", Kind::Int, "121"),
    // 1-D evolution
    ("kdv.initial", Kind::Str, "soliton"),
    ("kdv.amplitude", Kind::Float, "0.05"),
    ("kdv.width", Kind::Float, "5"),
    ("kdv.length", Kind::Float, "200"),
    ("kdv.n", Kind::Int, "512"),
    ("kdv.dt", Kind::Float, "0.05"),
    ("kdv.t_end", Kind::Float, "50"),
    ("kdv.integrator", Kind::Str, "rk4"),
    ("kdv.snapshot_stride", Kind::Int, "200"),
    ("kdv.breaking_ratio", Kind::Float, "20"),
    // 2-D KP evolution of the tilted line soliton
    ("kp.nx", Kind::Int, "256"),
    ("kp.ny", Kind::Int, "128"),
    ("kp.lx", Kind::Float, "20"),
    ("kp.ly", Kind::Float, "15"),
    ("kp.t_start", Kind::Float, "30"),
    ("kp.t_end", Kind::Float, "120"),
    ("kp.dt", Kind::Float, "0.05"),
    ("kp.integrator", Kind::Str, "etdrk4"),
    ("kp.snapshot_stride", Kind::Int, "150"),
    // residual check
    // residual check; equation is ckp_cyl, kp_cart (formula as written) or kp_line
    ("residual.equation", Kind::Str, "ckp_cyl"),
    ("residual.ckp_h", Kind::Float, "0.1"),
    ("residual.ckp_t", Kind::Float, "18"),
    ("residual.kp_h", Kind::Float, "0.04"),
    ("residual.kp_t", Kind::Float, "0"),
    ("residual.levels", Kind::Int, "4"),
    // acoustics
    ("acoustic.n", Kind::Int, "256"),
    ("acoustic.length", Kind::Float, "100"),
    ("acoustic.width", Kind::Float, "2"),
    ("acoustic.amplitude", Kind::Float, "0.01"),
    ("acoustic.dt", Kind::Float, "0.5"),
    ("acoustic.crossings", Kind::Float, "100"),
    ("acoustic.snapshot_stride", Kind::Int, "40"),
    ("acoustic.scheme", Kind::Str, "spectral"),
    // parameter sweep
    ("sweep.g", Kind::List, "0, 1.15"),
    ("sweep.m_g_mev", Kind::List, "460"),
    ("sweep.rho0", Kind::List, "1"),
    ("sweep.random", Kind::Int, "0"),
    ("sweep.max_cells", Kind::Int, "1000000"),
    ("sweep.threads", Kind::Int, "0"),
    ("output.dir", Kind::Str, "out"),
    ("run.seed", Kind::Int, "42"),
];

fn lookup(key: &str) -> Option<(Kind, &'static str)> {
    SCHEMA
        .iter()
        .find(|(k, _, _)| *k == key)
        .map(|(_, kind, d)| (*kind, *d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, Value>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let values = SCHEMA
            .iter()
            .map(|(k, kind, d)| {
                let v = Value::parse(*kind, d).expect("schema default parses");
                (k.to_string(), v)
            })
            .collect();
        Self { values }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        Error::Config(format!("line {}: malformed section header", lineno + 1))
                    })?
                    .trim();
                if !SCHEMA
                    .iter()
                    .any(|(k, _, _)| k.split('.').next() == Some(name))
                {
                    return Err(Error::Config(format!(
                        "line {}: unknown section [{name}]",
                        lineno + 1
                    )));
                }
                section = name.to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = if section.is_empty() {
                k.trim().to_string()
            } else {
                format!("{section}.{}", k.trim())
            };
            cfg.set(&key, v)
                .map_err(|e| Error::Config(format!("line {}: {}", lineno + 1, strip(e))))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets `section.key` from its text form.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        let (kind, _) = lookup(key).ok_or_else(|| Error::Config(format!("unknown key '{key}'")))?;
        let v = Value::parse(kind, raw).ok_or_else(|| {
            Error::Config(format!("invalid {kind:?} value '{}' for {key}", raw.trim()))
        })?;
        self.values.insert(key.to_string(), v);
        Ok(())
    }

    /// Applies a `section.key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override '{assignment}' is not key=value")))?;
        self.set(k.trim(), v)
    }

    /// Canonical text: every key, grouped by section, in schema order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut current = "";
        for (key, _, _) in SCHEMA {
            let (section, name) = key.split_once('.').expect("schema keys have a section");
            if section != current {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("[{section}]\n"));
                current = section;
            }
            out.push_str(&format!("{name} = {}\n", self.values[*key]));
        }
        out
    }

    /// Hash of the canonical text.
    pub fn hash(&self) -> String {
        config_hash(&self.to_text())
    }

    fn get(&self, key: &str) -> &Value {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("'{key}' is not a configuration key"))
    }

    pub fn f64(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Float(v) => *v,
            Value::Int(v) => *v as f64,
            other => panic!("{key} is not numeric: {other:?}"),
        }
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.get(key) {
            Value::Int(v) => *v,
            other => panic!("{key} is not an integer: {other:?}"),
        }
    }

    /// Integer that must be ≥ `min`, as a `usize`.
    pub fn count(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.int(key);
        if v < min as i64 {
            return Err(Error::Config(format!("{key} must be >= {min}, got {v}")));
        }
        Ok(v as usize)
    }

    pub fn bool(&self, key: &str) -> bool {
        match self.get(key) {
            Value::Bool(v) => *v,
            other => panic!("{key} is not a boolean: {other:?}"),
        }
    }

    pub fn str(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Str(v) => v,
            other => panic!("{key} is not a string: {other:?}"),
        }
    }

    pub fn list(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::List(v) => v,
            other => panic!("{key} is not a list: {other:?}"),
        }
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        let text = cfg.to_text();
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
        assert!(text.starts_with("[physics]\ng = 1.15\n"));
    }

    #[test]
    fn sections_comments_and_overrides() {
        let text = "# medium\n[physics]\ng = 0.5   # weaker\n\n[sweep]\ng = 0, 1, 2\n";
        let mut cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.f64("physics.g"), 0.5);
        assert_eq!(cfg.list("sweep.g"), &[0.0, 1.0, 2.0]);
        cfg.apply_override("cyl.u=0.8").unwrap();
        assert_eq!(cfg.f64("cyl.u"), 0.8);
        let again = RunConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(RunConfig::parse("[physics]\nmass = 3\n").is_err());
        assert!(RunConfig::parse("[nonsense]\n").is_err());
        assert!(RunConfig::parse("[physics]\ng = abc\n").is_err());
        assert!(RunConfig::parse("[physics]\ngamma_q = 1.5\n").is_err());
        assert!(RunConfig::parse("[kp]\nnx\n").is_err());
        let err = RunConfig::default()
            .apply_override("physics.g")
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.set("physics.g", "1.2").unwrap();
        assert_ne!(a.hash(), b.hash());
    }
}
