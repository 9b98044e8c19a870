//! Run configuration: flat `key = value` files overlaid with flags.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use holodisk::holomap::{parse_map, MapExpr};
use holodisk::Complex;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Role {
    Selfmap,
    Generator,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Selfmap => "selfmap",
            Role::Generator => "generator",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "holodisk", version, about = "Boundary rigidity analyzers for holomorphic maps of the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jet, LFT detection, classification and every applicable rigidity report.
    Analyze,
    /// Denjoy-Wolff point and type of a self-map or generator.
    Classify,
    /// Trajectory of the semigroup generated by the subject, as CSV.
    Flow {
        /// Starting point, a constant expression such as `0.2+0.1*i`.
        #[arg(long)]
        z0: Option<String>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Rigidity reports only.
    Rigidity,
    /// Run the reproduction suite and print the audit table.
    Verify,
    /// Berkson-Porta factor and half-plane decomposition at the base point.
    Decompose,
}

#[derive(Debug, Default, Args)]
pub struct GlobalOpts {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub subject: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub role: Option<Role>,
    /// Boundary base point, a unimodular constant expression.
    #[arg(long, global = true)]
    pub tau: Option<String>,
    /// Comma-separated horocycle radii.
    #[arg(long, global = true)]
    pub k_list: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub tol_jet: Option<f64>,
    #[arg(long, global = true)]
    pub tol_ode: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp and version block from JSON output.
    #[arg(long, global = true)]
    pub no_meta: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subject: Option<String>,
    pub role: Role,
    pub tau: Complex,
    pub k_list: Vec<f64>,
    pub seed: u64,
    pub jet_tol: f64,
    pub ode_tol: f64,
    /// Samples for pointwise bounds and the falsification search.
    pub samples: usize,
    pub z0: Complex,
    pub t_end: f64,
    pub out: Option<PathBuf>,
    pub no_meta: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            subject: None,
            role: Role::Selfmap,
            tau: Complex::new(1.0, 0.0),
            k_list: vec![0.5, 1.0, 2.0],
            seed: 42,
            jet_tol: 1e-6,
            ode_tol: 1e-10,
            samples: 500,
            z0: Complex::new(0.0, 0.0),
            t_end: 1.0,
            out: None,
            no_meta: false,
        }
    }
}

fn bad(key: &str, message: impl Into<String>) -> CliError {
    CliError::Value { key: key.into(), message: message.into() }
}

/// Parses a constant expression such as `0.5`, `-i` or `(1+i)/2`.
pub fn parse_constant(key: &str, text: &str) -> Result<Complex, CliError> {
    let e = parse_map(text).map_err(|err| bad(key, err.to_string()))?;
    let at = |z: f64| e.eval(Complex::new(z, 0.0)).map_err(|err| bad(key, err.to_string()));
    let (v0, v1) = (at(0.0)?, at(0.5)?);
    if v0 != v1 {
        return Err(bad(key, format!("`{text}` depends on z")));
    }
    Ok(v0)
}

fn parse_positive(key: &str, text: &str) -> Result<f64, CliError> {
    let v: f64 = text.trim().parse().map_err(|_| bad(key, format!("`{text}` is not a number")))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, "must be positive"))
    }
}

fn parse_k_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_positive("k_list", s)).collect()
}

impl RunConfig {
    /// Sets one configuration key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "subject" => self.subject = Some(value.to_string()),
            "role" => {
                self.role = Role::from_str(value, true).map_err(|e| bad(key, e))?;
            }
            "tau" => self.set_tau(parse_constant(key, value)?)?,
            "k_list" => self.k_list = parse_k_list(value)?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key, format!("`{value}` is not an integer")))?,
            "tol_jet" => self.jet_tol = parse_positive(key, value)?,
            "tol_ode" => self.ode_tol = parse_positive(key, value)?,
            "samples" => {
                self.samples = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| bad(key, "must be a positive integer"))?
            }
            "z0" => self.z0 = parse_constant(key, value)?,
            "t_end" => {
                self.t_end = value.parse().ok().filter(|t: &f64| *t >= 0.0).ok_or_else(|| bad(key, "must be >= 0"))?
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "no_meta" => self.no_meta = value.parse().map_err(|_| bad(key, "expected true or false"))?,
            _ => return Err(bad(key, "unknown key")),
        }
        Ok(())
    }

    fn set_tau(&mut self, tau: Complex) -> Result<(), CliError> {
        if (tau.norm() - 1.0).abs() > 1e-12 {
            return Err(bad("tau", format!("|tau| = {} is not 1", tau.norm())));
        }
        self.tau = tau;
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config { line: i + 1, message: format!("expected key = value, got `{line}`") })?;
            cfg.set(key.trim(), value).map_err(|e| CliError::Config { line: i + 1, message: e.to_string() })?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Self::from_text(&text)
    }

    /// Config file (if any) overlaid with the flags that were given.
    pub fn resolve(opts: &GlobalOpts, command: &Command) -> Result<Self, CliError> {
        let mut cfg = match &opts.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        if let Some(s) = &opts.subject {
            cfg.subject = Some(s.clone());
        }
        if let Some(r) = opts.role {
            cfg.role = r;
        }
        if let Some(t) = &opts.tau {
            cfg.set("tau", t)?;
        }
        if let Some(k) = &opts.k_list {
            cfg.set("k_list", k)?;
        }
        if let Some(s) = opts.seed {
            cfg.seed = s;
        }
        if let Some(t) = opts.tol_jet {
            cfg.set("tol_jet", &t.to_string())?;
        }
        if let Some(t) = opts.tol_ode {
            cfg.set("tol_ode", &t.to_string())?;
        }
        if let Some(o) = &opts.out {
            cfg.out = Some(o.clone());
        }
        cfg.no_meta |= opts.no_meta;
        if let Command::Flow { z0, t_end } = command {
            if let Some(z) = z0 {
                cfg.set("z0", z)?;
            }
            if let Some(t) = t_end {
                cfg.set("t_end", &t.to_string())?;
            }
        }
        Ok(cfg)
    }

    /// The subject parsed as a map.
    pub fn subject_expr(&self) -> Result<MapExpr, CliError> {
        let text = self.subject.as_deref().ok_or(CliError::MissingSubject)?;
        Ok(parse_map(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_and_flags() {
        let cfg = RunConfig::from_text("# corpus entry\nsubject = z/(2-z)\nrole = selfmap\nk_list = 1, 3\nseed = 7\ntau=-1\n").unwrap();
        assert_eq!(cfg.subject.as_deref(), Some("z/(2-z)"));
        assert_eq!(cfg.k_list, vec![1.0, 3.0]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.tau, Complex::new(-1.0, 0.0));
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(RunConfig::from_text("colour = red"), Err(CliError::Config { line: 1, .. })));
        assert!(RunConfig::from_text("tau = 0.5").is_err());
        assert!(RunConfig::from_text("tol_ode = -1").is_err());
        assert!(RunConfig::from_text("z0 = z").is_err());
        assert!(RunConfig::from_text("just words").is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(parse_constant("z0", "0.2+0.1*i").unwrap(), Complex::new(0.2, 0.1));
        assert_eq!(parse_constant("z0", "-i").unwrap(), Complex::new(0.0, -1.0));
    }
}
