//! Batch entry points: configuration from flags and `key = value` files,
//! and the four commands.

mod run;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric_grid::Sym2;
use crate::moduli::UHPoint;

pub use run::{run_command, RunSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Corrugate,
    Search,
    Rigidity,
    Modulus,
}

impl Command {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "corrugate" => Some(Command::Corrugate),
            "search" => Some(Command::Search),
            "rigidity" => Some(Command::Rigidity),
            "modulus" => Some(Command::Modulus),
            _ => None,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Corrugate => "corrugate",
            Command::Search => "search",
            Command::Rigidity => "rigidity",
            Command::Modulus => "modulus",
        };
        f.write_str(name)
    }
}

/// Corrugation numbers: an explicit list (a sweep for `corrugate`, one per
/// dictionary term for `search`) or the automatic policy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrugationNumbers {
    Auto,
    List(Vec<u64>),
}

impl fmt::Display for CorrugationNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrugationNumbers::Auto => f.write_str("auto"),
            CorrugationNumbers::List(ns) => {
                let parts: Vec<String> = ns.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub grid_n: usize,
    pub epsilon: f64,
    pub rho: f64,
    pub w0: UHPoint,
    pub n_policy: CorrugationNumbers,
    pub word_len: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Constant metric `E, F, G` for the `modulus` command.
    pub metric: Sym2,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Corrugate,
            grid_n: 128,
            epsilon: 2e-3,
            rho: 0.1,
            w0: UHPoint::I,
            n_policy: CorrugationNumbers::Auto,
            word_len: 4,
            output_dir: PathBuf::from("out"),
            seed: 0,
            metric: Sym2::IDENTITY,
        }
    }
}

/// Line number used for errors in command-line flags.
pub const FLAG_LINE: usize = 0;

impl RunConfig {
    /// Sets one key from its text value. `line` locates the value for errors.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let canonical = key.trim().replace('-', "_");
        let value = value.trim();
        let err = |message: String| Error::ConfigError { key: key.trim().to_string(), line, message };
        let positive_int = |v: &str| -> Result<usize> {
            match v.parse::<i64>() {
                Ok(n) if n > 0 => Ok(n as usize),
                _ => Err(err(format!("expected a positive integer, got {v:?}"))),
            }
        };
        let positive_real = |v: &str| -> Result<f64> {
            match v.parse::<f64>() {
                Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
                _ => Err(err(format!("expected a positive number, got {v:?}"))),
            }
        };
        match canonical.as_str() {
            "command" => {
                self.command = Command::parse(value)
                    .ok_or_else(|| err(format!("unknown command {value:?} (corrugate, search, rigidity, modulus)")))?
            }
            "grid_n" => {
                let n = positive_int(value)?;
                if n < 8 {
                    return Err(err(format!("grid needs at least 8 samples per axis, got {n}")));
                }
                self.grid_n = n;
            }
            "epsilon" => self.epsilon = positive_real(value)?,
            "rho" => self.rho = positive_real(value)?,
            "w0" => self.w0 = UHPoint::parse(value).map_err(|e| err(e.to_string()))?,
            "n_policy" => {
                self.n_policy = if value == "auto" {
                    CorrugationNumbers::Auto
                } else {
                    let ns = value
                        .split(',')
                        .map(|s| positive_int(s.trim()).map(|n| n as u64))
                        .collect::<Result<Vec<u64>>>()?;
                    CorrugationNumbers::List(ns)
                }
            }
            "word_len" => self.word_len = positive_int(value)?,
            "out" | "output_dir" => {
                if value.is_empty() {
                    return Err(err("empty output directory".into()));
                }
                self.output_dir = PathBuf::from(value);
            }
            "seed" => self.seed = value.parse().map_err(|_| err(format!("expected an unsigned integer, got {value:?}")))?,
            "metric" => {
                let parts: Vec<f64> = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(format!("expected E,F,G, got {value:?}")))?;
                let [e, f, g] = parts[..] else {
                    return Err(err(format!("expected three components E,F,G, got {}", parts.len())));
                };
                let m = Sym2::new(e, f, g);
                if !m.is_positive_definite() {
                    return Err(err("metric is not positive definite".into()));
                }
                self.metric = m;
            }
            _ => return Err(err("unknown key".into())),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::ConfigError {
                    key: content.to_string(),
                    line,
                    message: "expected key = value".into(),
                });
            };
            self.set(key, value, line)?;
        }
        Ok(())
    }

    /// The configuration as a `key = value` file that parses back to itself.
    pub fn to_file_text(&self) -> String {
        let m = self.metric;
        format!(
            "command = {}\ngrid_n = {}\nepsilon = {}\nrho = {}\nw0 = {}\nn_policy = {}\nword_len = {}\noutput_dir = {}\nseed = {}\nmetric = {},{},{}\n",
            self.command,
            self.grid_n,
            self.epsilon,
            self.rho,
            self.w0,
            self.n_policy,
            self.word_len,
            self.output_dir.display(),
            self.seed,
            m.e,
            m.f,
            m.g
        )
    }
}

#[derive(Parser, Debug, Default)]
#[command(name = "spacelike", about = "Corrugated spacelike tori, conformal search and orbit-hull rigidity constants")]
struct Flags {
    #[arg(long, allow_hyphen_values = true)]
    command: Option<String>,
    #[arg(long = "grid-n", allow_hyphen_values = true)]
    grid_n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w0: Option<String>,
    #[arg(long = "n-policy", allow_hyphen_values = true)]
    n_policy: Option<String>,
    #[arg(long = "word-len", allow_hyphen_values = true)]
    word_len: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    out: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    metric: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Defaults, then the `--config` file, then the other flags. `args` excludes
/// the program name.
pub fn parse_config<I, S>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("spacelike")).chain(args.into_iter().map(Into::into));
    let flags = Flags::try_parse_from(argv).map_err(|e| Error::ConfigError {
        key: "arguments".into(),
        line: FLAG_LINE,
        message: e.to_string().lines().next().unwrap_or_default().to_string(),
    })?;
    let mut cfg = RunConfig::default();
    if let Some(path) = &flags.config {
        cfg.apply_file_text(&read_config(path)?)?;
    }
    let pairs = [
        ("command", &flags.command),
        ("grid-n", &flags.grid_n),
        ("epsilon", &flags.epsilon),
        ("rho", &flags.rho),
        ("w0", &flags.w0),
        ("n-policy", &flags.n_policy),
        ("word-len", &flags.word_len),
        ("out", &flags.out),
        ("seed", &flags.seed),
        ("metric", &flags.metric),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            cfg.set(key, v, FLAG_LINE)?;
        }
    }
    Ok(cfg)
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        assert_eq!(parse_config(Vec::<String>::new()).unwrap(), RunConfig::default());
        let cfg = parse_config(["--grid-n", "256", "--w0", "0.3+1.2i"]).unwrap();
        assert_eq!(cfg.grid_n, 256);
        assert_eq!(cfg.w0, UHPoint::new(0.3, 1.2).unwrap());
        let cfg = parse_config(["--n-policy", "50,100,200,400", "--command", "search", "--out", "runs/a"]).unwrap();
        assert_eq!(cfg.n_policy, CorrugationNumbers::List(vec![50, 100, 200, 400]));
        assert_eq!(cfg.command, Command::Search);
        assert_eq!(cfg.output_dir, PathBuf::from("runs/a"));
    }

    #[test]
    fn invalid_flags() {
        let err = parse_config(["--grid-n", "-4"]).unwrap_err();
        assert!(matches!(err, Error::ConfigError { ref key, line: 0, .. } if key == "grid-n"), "{err}");
        assert!(matches!(parse_config(["--command", "dance"]), Err(Error::ConfigError { .. })));
        assert!(matches!(parse_config(["--epsilon", "0"]), Err(Error::ConfigError { .. })));
        assert!(matches!(parse_config(["--w0", "1-1i"]), Err(Error::ConfigError { .. })));
        assert!(matches!(parse_config(["--bogus", "1"]), Err(Error::ConfigError { .. })));
        assert!(matches!(parse_config(["--metric", "1,2,1"]), Err(Error::ConfigError { .. })));
    }

    #[test]
    fn file_values_and_errors_carry_lines() {
        let mut cfg = RunConfig::default();
        cfg.apply_file_text("# comment\ncommand = modulus\n\nmetric = 1, 0, 4  # rectangle\n").unwrap();
        assert_eq!(cfg.command, Command::Modulus);
        assert_eq!(cfg.metric, Sym2::new(1.0, 0.0, 4.0));
        let err = RunConfig::default().apply_file_text("rho = 0.2\ncolour = blue\n").unwrap_err();
        assert!(matches!(err, Error::ConfigError { ref key, line: 2, .. } if key == "colour"));
        let err = RunConfig::default().apply_file_text("seed 4\n").unwrap_err();
        assert!(matches!(err, Error::ConfigError { line: 1, .. }));
    }

    #[test]
    fn flags_override_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "grid_n = 64\nrho = 0.2\n").unwrap();
        let cfg = parse_config(["--config", path.to_str().unwrap(), "--grid-n", "32"]).unwrap();
        assert_eq!((cfg.grid_n, cfg.rho), (32, 0.2));
        assert!(matches!(parse_config(["--config", "/nonexistent/run.cfg"]), Err(Error::IoError { .. })));
    }

    #[test]
    fn resolved_config_round_trips() {
        let cfg = parse_config(["--command", "search", "--w0", "0.05+1i", "--n-policy", "9,99,999,9999", "--seed", "7"]).unwrap();
        let mut back = RunConfig::default();
        back.apply_file_text(&cfg.to_file_text()).unwrap();
        assert_eq!(back, cfg);
    }
}
