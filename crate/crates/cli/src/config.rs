use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Scalar,
    Tensor,
    NuZeroReference,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Scalar => "scalar",
            ProblemKind::Tensor => "tensor",
            ProblemKind::NuZeroReference => "nu-zero-reference",
        }
    }

    pub fn default_resolution(self) -> usize {
        match self {
            ProblemKind::Tensor => 551,
            _ => 250,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub convergence: f64,
    pub realness: f64,
    pub shooting: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { convergence: 1e-10, realness: 1e-10, shooting: 1e-12 }
    }
}

/// Fully resolved settings of a `compute` run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub n: i64,
    pub k: i64,
    pub overtones: usize,
    /// One entry means "build the default ladder from this base".
    pub resolutions: Vec<usize>,
    pub tolerances: Tolerances,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub lambda_cc: f64,
    pub eigenfunctions: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTolerances {
    convergence: Option<f64>,
    realness: Option<f64>,
    shooting: Option<f64>,
}

/// Key-value config file; every key is optional and command-line flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    problem: Option<ProblemKind>,
    n: Option<i64>,
    k: Option<i64>,
    overtones: Option<usize>,
    resolution: Option<OneOrMany>,
    format: Option<Format>,
    out: Option<PathBuf>,
    lambda_cc: Option<f64>,
    eigenfunctions: Option<bool>,
    #[serde(default)]
    tolerances: FileTolerances,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Invalid(format!("config {}: {e}", path.display())))
    }
}

/// Values given on the command line for `compute`.
#[derive(Debug, Clone, Default)]
pub struct ComputeFlags {
    pub problem: Option<ProblemKind>,
    pub n: Option<i64>,
    pub k: Option<i64>,
    pub overtones: Option<usize>,
    pub resolution: Option<Vec<usize>>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub lambda_cc: Option<f64>,
    pub eigenfunctions: bool,
    pub convergence_tol: Option<f64>,
    pub realness_tol: Option<f64>,
}

impl RunConfig {
    pub fn resolve(flags: ComputeFlags, file: Option<FileConfig>) -> Result<Self, CliError> {
        let file = file.unwrap_or_default();
        let problem = flags.problem.or(file.problem).unwrap_or(ProblemKind::Scalar);
        let resolutions = match (flags.resolution, file.resolution) {
            (Some(r), _) => r,
            (None, Some(OneOrMany::One(r))) => vec![r],
            (None, Some(OneOrMany::Many(r))) => r,
            (None, None) => vec![problem.default_resolution()],
        };
        let defaults = Tolerances::default();
        let config = RunConfig {
            problem,
            n: flags.n.or(file.n).unwrap_or(0),
            k: flags.k.or(file.k).unwrap_or(0),
            overtones: flags.overtones.or(file.overtones).unwrap_or(5),
            resolutions,
            tolerances: Tolerances {
                convergence: flags.convergence_tol.or(file.tolerances.convergence).unwrap_or(defaults.convergence),
                realness: flags.realness_tol.or(file.tolerances.realness).unwrap_or(defaults.realness),
                shooting: file.tolerances.shooting.unwrap_or(defaults.shooting),
            },
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            out: flags.out.or(file.out),
            lambda_cc: flags.lambda_cc.or(file.lambda_cc).unwrap_or(1.0),
            eigenfunctions: flags.eigenfunctions || file.eigenfunctions.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.overtones < 1 {
            return Err(CliError::Invalid("overtones must be at least 1".into()));
        }
        if self.resolutions.is_empty() {
            return Err(CliError::Invalid("at least one resolution is required".into()));
        }
        if self.resolutions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Invalid(format!("resolutions must be strictly ascending, got {:?}", self.resolutions)));
        }
        let t = &self.tolerances;
        for (name, v) in [("convergence", t.convergence), ("realness", t.realness), ("shooting", t.shooting)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Invalid(format!("{name} tolerance must be positive, got {v}")));
            }
        }
        if !(self.lambda_cc > 0.0 && self.lambda_cc.is_finite()) {
            return Err(CliError::Invalid(format!("lambda_cc must be positive, got {}", self.lambda_cc)));
        }
        if self.eigenfunctions && self.format == Format::Csv && self.out.is_none() {
            return Err(CliError::Invalid("CSV eigenfunction export needs --out".into()));
        }
        Ok(())
    }
}

/// Parses "a:b" into an inclusive overtone window.
pub fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: usize = a.trim().parse().map_err(|e| format!("window start {a:?}: {e}"))?;
    let hi: usize = b.trim().parse().map_err(|e| format!("window end {b:?}: {e}"))?;
    if lo >= hi {
        return Err(format!("window start must be below its end, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str("problem = \"tensor\"\novertones = 7\nresolution = [101, 127]\n").unwrap();
        let flags = ComputeFlags { overtones: Some(3), ..Default::default() };
        let c = RunConfig::resolve(flags, Some(file)).unwrap();
        assert_eq!(c.problem, ProblemKind::Tensor);
        assert_eq!(c.overtones, 3);
        assert_eq!(c.resolutions, vec![101, 127]);
    }

    #[test]
    fn single_resolution_and_nested_tolerances() {
        let file: FileConfig = toml::from_str("resolution = 64\n[tolerances]\nrealness = 1e-8\n").unwrap();
        let c = RunConfig::resolve(ComputeFlags::default(), Some(file)).unwrap();
        assert_eq!(c.resolutions, vec![64]);
        assert_eq!(c.tolerances.realness, 1e-8);
        assert_eq!(c.tolerances.convergence, 1e-10);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(toml::from_str::<FileConfig>("colour = 3\n").is_err());
        let flags = ComputeFlags { resolution: Some(vec![300, 250]), ..Default::default() };
        assert!(matches!(RunConfig::resolve(flags, None), Err(CliError::Invalid(_))));
        let flags = ComputeFlags { overtones: Some(0), ..Default::default() };
        assert!(RunConfig::resolve(flags, None).is_err());
        let flags = ComputeFlags { convergence_tol: Some(-1.0), ..Default::default() };
        assert!(RunConfig::resolve(flags, None).is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("200:500"), Ok((200, 500)));
        assert!(parse_window("500:200").is_err());
        assert!(parse_window("200").is_err());
    }
}
