//! Command-line parsing and validation. Nothing here touches the kernels;
//! a [`RunConfig`] that exists has already passed every input check.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use realforms::laurent::parse_coefficient_list;
use realforms::{LaurentPoly, Rational};

/// Largest accepted degree bound for the oracle; the linear systems grow
/// quadratically past this.
pub const MAX_DEG_BOUND: u32 = 24;

#[derive(Parser, Debug)]
#[command(name = "realforms", version, about = "Exact checks for equivariant real circle forms")]
pub struct Cli {
    /// Print extra diagnostics to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    /// Emit JSON instead of the human-readable report.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    #[arg(long)]
    pub m: u32,
    /// Coefficients of h in ascending degree, e.g. "2,8" for 2 + 8T.
    #[arg(long, allow_hyphen_values = true)]
    pub h: String,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[command(flatten)]
    pub form: FormArgs,
    /// Coefficients of h′.
    #[arg(long, allow_hyphen_values = true)]
    pub hp: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that μ_h is a real circle form.
    VerifyForm {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Decide whether μ_h and μ_h′ are equivalent.
    Equiv {
        #[command(flatten)]
        pair: PairArgs,
        /// Write the certificate here when a rational witness exists.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file against h and h′.
    VerifyCertificate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        file: PathBuf,
    },
    /// Partition a list of forms into equivalence classes.
    Classify {
        #[arg(long)]
        m: u32,
        /// JSON array of coefficient lists.
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for conjugators by brute-force linear algebra.
    Oracle {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 6)]
        deg: u32,
        #[arg(long = "r-grid", default_value = "1,-1,2,-2,1/2,-1/2", allow_hyphen_values = true)]
        r_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the explicit trivialisation of the O₂-bundle on W₁ × W₂.
    Case12,
    /// Print the quotient relation and the images of its generators.
    Quotient {
        #[arg(long)]
        m: u32,
        /// Optional h; the images are computed for μ₀ and, if given, μ_h.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Run the full acceptance suite.
    Selftest {
        /// Run only these criteria (comma-separated ids).
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    pub m: u32,
    pub h: LaurentPoly,
}

#[derive(Debug, Clone)]
pub enum RunConfig {
    VerifyForm(Form),
    Equiv { m: u32, h: LaurentPoly, hp: LaurentPoly, out: Option<PathBuf> },
    VerifyCertificate { m: u32, h: LaurentPoly, hp: LaurentPoly, file: PathBuf },
    Classify { m: u32, forms: Vec<LaurentPoly>, out: Option<PathBuf> },
    Oracle { m: u32, h: LaurentPoly, hp: LaurentPoly, deg: u32, r_grid: Vec<Rational>, out: Option<PathBuf> },
    Case12,
    Quotient { m: u32, h: Option<LaurentPoly> },
    Selftest { only: Vec<u32> },
}

#[derive(Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

fn check_m(m: u32) -> Result<u32, UsageError> {
    if m == 0 {
        return usage("--m must be at least 1");
    }
    Ok(m)
}

pub fn parse_real_poly(flag: &str, text: &str) -> Result<LaurentPoly, UsageError> {
    let p = parse_coefficient_list(text).map_err(|e| UsageError(format!("{flag}: {e}")))?;
    if !p.is_real() {
        return usage(format!("{flag}: coefficients must be real, got {text:?}"));
    }
    Ok(p)
}

fn parse_pair(pair: &PairArgs) -> Result<(u32, LaurentPoly, LaurentPoly), UsageError> {
    Ok((check_m(pair.form.m)?, parse_real_poly("--h", &pair.form.h)?, parse_real_poly("--hp", &pair.hp)?))
}

pub fn parse_r_grid(text: &str) -> Result<Vec<Rational>, UsageError> {
    let mut grid = Vec::new();
    for item in text.split(',').map(str::trim) {
        let r: Rational = item.parse().map_err(|_| UsageError(format!("--r-grid: cannot parse {item:?}")))?;
        if r.is_zero() {
            return usage("--r-grid: scale factors must be nonzero");
        }
        if !grid.contains(&r) {
            grid.push(r);
        }
    }
    if grid.is_empty() {
        return usage("--r-grid: empty");
    }
    Ok(grid)
}

/// Reads a JSON array whose entries are coefficient-list strings or arrays
/// of numbers/strings.
pub fn parse_forms_file(text: &str) -> Result<Vec<LaurentPoly>, UsageError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| UsageError(format!("--file: invalid JSON: {e}")))?;
    let serde_json::Value::Array(items) = value else {
        return usage("--file: expected a JSON array of coefficient lists");
    };
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let flag = format!("--file entry {i}");
            match item {
                serde_json::Value::String(s) => parse_real_poly(&flag, s),
                serde_json::Value::Array(cs) => {
                    let parts: Result<Vec<String>, UsageError> = cs
                        .iter()
                        .map(|c| match c {
                            serde_json::Value::String(s) => Ok(s.clone()),
                            serde_json::Value::Number(n) if n.is_i64() => Ok(n.to_string()),
                            _ => usage(format!("{flag}: coefficients must be integers or strings")),
                        })
                        .collect();
                    let parts = parts?;
                    if parts.is_empty() {
                        Ok(LaurentPoly::zero())
                    } else {
                        parse_real_poly(&flag, &parts.join(","))
                    }
                }
                _ => usage(format!("{flag}: expected a string or an array")),
            }
        })
        .collect()
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, UsageError> {
        Ok(match &cli.command {
            Command::VerifyForm { form } => RunConfig::VerifyForm(Form {
                m: check_m(form.m)?,
                h: parse_real_poly("--h", &form.h)?,
            }),
            Command::Equiv { pair, out } => {
                let (m, h, hp) = parse_pair(pair)?;
                RunConfig::Equiv { m, h, hp, out: out.clone() }
            }
            Command::VerifyCertificate { pair, file } => {
                let (m, h, hp) = parse_pair(pair)?;
                RunConfig::VerifyCertificate { m, h, hp, file: file.clone() }
            }
            Command::Classify { m, file, out } => {
                let text = std::fs::read_to_string(file)
                    .map_err(|e| UsageError(format!("--file {}: {e}", file.display())))?;
                let forms = parse_forms_file(&text)?;
                if forms.is_empty() {
                    return usage("--file: no forms given");
                }
                RunConfig::Classify { m: check_m(*m)?, forms, out: out.clone() }
            }
            Command::Oracle { pair, deg, r_grid, out } => {
                let (m, h, hp) = parse_pair(pair)?;
                if *deg > MAX_DEG_BOUND {
                    return usage(format!("--deg: at most {MAX_DEG_BOUND}"));
                }
                RunConfig::Oracle { m, h, hp, deg: *deg, r_grid: parse_r_grid(r_grid)?, out: out.clone() }
            }
            Command::Case12 => RunConfig::Case12,
            Command::Quotient { m, h } => RunConfig::Quotient {
                m: check_m(*m)?,
                h: h.as_deref().map(|s| parse_real_poly("--h", s)).transpose()?,
            },
            Command::Selftest { only } => {
                let only = match only {
                    None => Vec::new(),
                    Some(list) => list
                        .split(',')
                        .map(|s| match s.trim().parse::<u32>() {
                            Ok(id) if (1..=10).contains(&id) => Ok(id),
                            _ => usage(format!("--only: unknown criterion {s:?}")),
                        })
                        .collect::<Result<_, _>>()?,
                };
                RunConfig::Selftest { only }
            }
        })
    }
}

/// Reads `REALFORMS_THREADS`; `None` when unset.
pub fn thread_count(var: Option<String>) -> Result<Option<usize>, UsageError> {
    match var {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => usage(format!("REALFORMS_THREADS must be a positive integer, got {s:?}")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("realforms").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn non_real_h_is_a_usage_error() {
        let err = RunConfig::from_cli(&cli(&["verify-form", "--m", "2", "--h", "1,i"])).unwrap_err();
        assert!(err.0.contains("real"));
    }

    #[test]
    fn zero_m_rejected() {
        assert!(RunConfig::from_cli(&cli(&["verify-form", "--m", "0", "--h", "1"])).is_err());
    }

    #[test]
    fn negative_coefficients_accepted() {
        let cfg = RunConfig::from_cli(&cli(&["equiv", "--m", "2", "--h", "-1,2", "--hp", "-1/2"])).unwrap();
        let RunConfig::Equiv { h, .. } = cfg else { panic!() };
        assert_eq!(h, LaurentPoly::from_coeffs([-1i64, 2]));
    }

    #[test]
    fn r_grid_parsing() {
        assert_eq!(parse_r_grid("1, -1/2,1").unwrap().len(), 2);
        assert!(parse_r_grid("1,0").is_err());
        assert!(parse_r_grid("x").is_err());
    }

    #[test]
    fn forms_file_shapes() {
        let forms = parse_forms_file(r#"["1,1", [1, 2], ["1/2", "0", "3"], []]"#).unwrap();
        assert_eq!(forms[1], LaurentPoly::from_coeffs([1i64, 2]));
        assert!(forms[3].is_zero());
        assert!(parse_forms_file(r#"{"a": 1}"#).is_err());
        assert!(parse_forms_file(r#"["1,i"]"#).is_err());
    }

    #[test]
    fn thread_env() {
        assert_eq!(thread_count(None).unwrap(), None);
        assert_eq!(thread_count(Some("4".into())).unwrap(), Some(4));
        assert!(thread_count(Some("0".into())).is_err());
    }

    #[test]
    fn oversized_degree_bound_rejected() {
        let args = ["oracle", "--m", "1", "--h", "0", "--hp", "1", "--deg", "99"];
        assert!(RunConfig::from_cli(&cli(&args)).is_err());
    }
}
