//! Run configuration: defaults, overrides from flags and files, validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming a config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "ULTRACONE_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Norms,
    Cutting,
    Covering,
    Intnorm,
    Matnorm,
    Products,
    Coneprobe,
    All,
}

impl Suite {
    /// Every concrete suite, in report order.
    pub const CONCRETE: [Suite; 7] = [
        Suite::Norms,
        Suite::Cutting,
        Suite::Covering,
        Suite::Intnorm,
        Suite::Matnorm,
        Suite::Products,
        Suite::Coneprobe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Norms => "norms",
            Suite::Cutting => "cutting",
            Suite::Covering => "covering",
            Suite::Intnorm => "intnorm",
            Suite::Matnorm => "matnorm",
            Suite::Products => "products",
            Suite::Coneprobe => "coneprobe",
            Suite::All => "all",
        }
    }

    /// Position in [`Suite::CONCRETE`]; also the RNG stream of the suite.
    pub fn stream(self) -> u64 {
        Suite::CONCRETE.iter().position(|&s| s == self).map_or(u64::MAX, |i| i as u64)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::CONCRETE
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s.trim())
            .ok_or_else(|| CliError::ConfigInvalid(format!("unknown suite {s:?}")))
    }
}

/// Everything a run depends on. Two runs with equal configs produce
/// byte-identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    /// Largest symmetric degree enumerated exhaustively; checks that name a
    /// larger degree are run at this one instead.
    pub max_degree: usize,
    /// Random pairs per matrix dimension.
    pub samples: usize,
    /// Random pairs in `S_30` for the cutting bounds.
    pub permutation_pairs: usize,
    /// Random conjugate-product certificates.
    pub certificates: usize,
    /// Largest `n` for the factorial-generator norms.
    pub depth: usize,
    /// Singular value threshold for numeric ranks.
    pub tau: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub jobs: usize,
    /// Registers the identity map as a norm-decreasing projection. The run
    /// then fails, which exercises the failure path end to end.
    pub broken_projection: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suites: vec![Suite::All],
            max_degree: 8,
            samples: 1000,
            permutation_pairs: 100_000,
            certificates: 100,
            depth: 8,
            tau: 1e-8,
            seed: 0,
            out: PathBuf::from("ultracone-report.json"),
            jobs: 1,
            broken_projection: false,
        }
    }
}

pub const MAX_DEGREE_RANGE: (usize, usize) = (5, 8);
pub const SAMPLES_RANGE: (usize, usize) = (1, 100_000);
pub const PERMUTATION_PAIRS_RANGE: (usize, usize) = (0, 1_000_000);
pub const CERTIFICATES_RANGE: (usize, usize) = (0, 10_000);
pub const DEPTH_RANGE: (usize, usize) = (1, 12);
pub const TAU_RANGE: (f64, f64) = (1e-14, 1e-4);
pub const JOBS_RANGE: (usize, usize) = (1, 64);

fn within<T: PartialOrd + fmt::Display + Copy>(name: &str, value: T, (lo, hi): (T, T)) -> Result<(), CliError> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(CliError::ConfigInvalid(format!("{name} = {value} is outside [{lo}, {hi}]")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.suites.is_empty() {
            return Err(CliError::ConfigInvalid("no suite selected".into()));
        }
        within("max_degree", self.max_degree, MAX_DEGREE_RANGE)?;
        within("samples", self.samples, SAMPLES_RANGE)?;
        within("permutation_pairs", self.permutation_pairs, PERMUTATION_PAIRS_RANGE)?;
        within("certificates", self.certificates, CERTIFICATES_RANGE)?;
        within("depth", self.depth, DEPTH_RANGE)?;
        if !self.tau.is_finite() {
            return Err(CliError::ConfigInvalid(format!("tau = {} is not finite", self.tau)));
        }
        within("tau", self.tau, TAU_RANGE)?;
        within("jobs", self.jobs, JOBS_RANGE)?;
        if self.out.as_os_str().is_empty() {
            return Err(CliError::ConfigInvalid("empty output path".into()));
        }
        Ok(())
    }

    /// Selected suites with `all` expanded, deduplicated, in report order.
    pub fn resolved_suites(&self) -> Vec<Suite> {
        if self.suites.contains(&Suite::All) {
            return Suite::CONCRETE.to_vec();
        }
        Suite::CONCRETE.into_iter().filter(|s| self.suites.contains(s)).collect()
    }

    pub fn apply(&mut self, o: Overrides) {
        let Overrides {
            suites,
            max_degree,
            samples,
            permutation_pairs,
            certificates,
            depth,
            tau,
            seed,
            out,
            jobs,
            broken_projection,
        } = o;
        if let Some(v) = suites {
            self.suites = v;
        }
        self.max_degree = max_degree.unwrap_or(self.max_degree);
        self.samples = samples.unwrap_or(self.samples);
        self.permutation_pairs = permutation_pairs.unwrap_or(self.permutation_pairs);
        self.certificates = certificates.unwrap_or(self.certificates);
        self.depth = depth.unwrap_or(self.depth);
        self.tau = tau.unwrap_or(self.tau);
        self.seed = seed.unwrap_or(self.seed);
        if let Some(v) = out {
            self.out = v;
        }
        self.jobs = jobs.unwrap_or(self.jobs);
        self.broken_projection = broken_projection.unwrap_or(self.broken_projection);
    }

    /// Defaults, then `flags`, then the config file if one is given. Values
    /// from the file win over flags.
    pub fn resolve(flags: Overrides, file: Option<&Path>) -> Result<Self, CliError> {
        let mut config = RunConfig::default();
        config.apply(flags);
        if let Some(path) = file {
            config.apply(Overrides::from_file(path)?);
        }
        config.validate()?;
        Ok(config)
    }
}

/// A partial [`RunConfig`]; the shape of a TOML config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub suites: Option<Vec<Suite>>,
    pub max_degree: Option<usize>,
    pub samples: Option<usize>,
    pub permutation_pairs: Option<usize>,
    pub certificates: Option<usize>,
    pub depth: Option<usize>,
    pub tau: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub broken_projection: Option<bool>,
}

impl Overrides {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::ConfigInvalid(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::default().resolved_suites(), Suite::CONCRETE.to_vec());
    }

    #[test]
    fn file_wins_over_flags() {
        let flags = Overrides { seed: Some(1), samples: Some(5), ..Default::default() };
        let mut config = RunConfig::default();
        config.apply(flags);
        config.apply(Overrides::from_toml("seed = 9\nsuites = [\"cutting\", \"norms\"]").unwrap());
        assert_eq!((config.seed, config.samples), (9, 5));
        assert_eq!(config.resolved_suites(), vec![Suite::Norms, Suite::Cutting]);
    }

    #[test]
    fn rejects_out_of_range_and_unknown_keys() {
        let config = RunConfig { max_degree: 12, ..RunConfig::default() };
        assert!(matches!(config.validate(), Err(CliError::ConfigInvalid(_))));
        let config = RunConfig { tau: f64::NAN, ..RunConfig::default() };
        assert!(config.validate().is_err());
        assert!(Overrides::from_toml("colour = 3").is_err());
        assert!(Overrides::from_toml("suites = [\"nope\"]").is_err());
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("matnorm".parse::<Suite>().unwrap(), Suite::Matnorm);
    }
}
