//! JSON run configurations. Every struct rejects unknown keys; command-line
//! flags override individual fields after the file is read.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use seqpe_core::ethylene::PppParams;
use seqpe_core::experiment::{Experiment, InputState, Variant};
use seqpe_core::qpe::VariantPolicy;
use seqpe_core::resources::{ScanConfig, SyntheticSpec};

pub const OUTPUT_DIR_ENV: &str = "SEQPE_OUTPUT_DIR";
const DEFAULT_OUTPUT_DIR: &str = "seqpe-out";

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Flag, then config file, then environment, then `./seqpe-out`.
pub fn output_dir(flag: Option<&Path>, file: Option<&Path>) -> Result<PathBuf> {
    let dir = flag
        .or(file)
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

/// Ethylene experiment selection shared by `build` and `simulate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: PppParams,
    pub m: usize,
    pub tau: f64,
    pub variant: String,
    /// `mean-field`, `optimal`, `eigenstate` or an ansatz angle in radians.
    pub input: String,
    /// Per-bit `c`/`g` string; overrides `variant` when set.
    pub policy: Option<String>,
    pub cat: bool,
    pub mr: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: PppParams::default(),
            m: 5,
            tau: 10.0,
            variant: "se-qpe".into(),
            input: "mean-field".into(),
            policy: None,
            cat: false,
            mr: false,
        }
    }
}

impl ExperimentConfig {
    pub fn resolve_variant(&self) -> Result<Variant> {
        if let Some(p) = &self.policy {
            let policy = VariantPolicy::parse(p, self.cat, self.mr)?;
            if policy.m() != self.m {
                bail!("policy {p:?} covers {} bits but m = {}", policy.m(), self.m);
            }
            return Ok(Variant::Policy(policy));
        }
        Ok(self.variant.parse()?)
    }

    pub fn experiment(&self) -> Result<Experiment> {
        let input: InputState = self.input.parse()?;
        Ok(Experiment::new(self.params, self.m, self.tau, input)?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildConfig {
    pub experiment: ExperimentConfig,
    /// T gates per rotation in the reported T counts.
    pub t_eps: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub experiment: ExperimentConfig,
    /// Zero runs the exact phase marginal.
    pub shots: usize,
    pub seed: u64,
    pub p2: f64,
    pub pm: f64,
    pub out_dir: Option<PathBuf>,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentConfig::default(),
            shots: 0,
            seed: 1,
            p2: 0.0,
            pm: 0.0,
            out_dir: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanRunConfig {
    /// Double-factorized coefficients as JSON; the synthetic sweep is used when absent.
    pub spec: Option<PathBuf>,
    pub ns: Vec<usize>,
    /// Factors per spin-orbital in the synthetic sweep; `synthetic.l` is used when absent.
    pub l_per_n: Option<usize>,
    pub synthetic: SyntheticSpec,
    pub scan: ScanConfig,
    pub out_dir: Option<PathBuf>,
}

impl Default for ScanRunConfig {
    fn default() -> Self {
        Self {
            spec: None,
            ns: (2..=15).map(|k| 2 * k).collect(),
            l_per_n: Some(2),
            synthetic: SyntheticSpec::default(),
            scan: ScanConfig::default(),
            out_dir: None,
        }
    }
}
