//! Experiment description shared by all subcommands.
//!
//! Every field can come from a JSON spec file (`--spec`) or from flags; flags
//! win. After defaults are filled in, the resolved spec is hashed and the
//! hash is stamped on every output.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use eqpolar::{Kernel, KernelSchedule, SignalSet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A configuration problem: bad flags, an unreadable spec or an unknown name.
/// Reported with exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub es: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kernels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<String>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub block_len: Option<usize>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub info_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snr_db: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design_snr_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction_trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub codes: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_space: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

fn pick_vec<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read spec {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid spec {}: {e}", path.display())).into())
    }

    /// Field-wise merge where `self` (the flags) takes precedence.
    pub fn over(self, file: ExperimentSpec) -> ExperimentSpec {
        ExperimentSpec {
            command: pick(self.command, file.command),
            q: pick(self.q, file.q),
            set: pick(self.set, file.set),
            es: pick(self.es, file.es),
            kernels: pick_vec(self.kernels, file.kernels),
            stages: pick_vec(self.stages, file.stages),
            block_len: pick(self.block_len, file.block_len),
            info_len: pick(self.info_len, file.info_len),
            snr_db: pick_vec(self.snr_db, file.snr_db),
            trials: pick(self.trials, file.trials),
            design_snr_db: pick(self.design_snr_db, file.design_snr_db),
            construction_trials: pick(self.construction_trials, file.construction_trials),
            codes: pick_vec(self.codes, file.codes),
            variants: pick_vec(self.variants, file.variants),
            full_space: pick(self.full_space, file.full_space),
            seed: pick(self.seed, file.seed),
            out: pick(self.out, file.out),
        }
    }

    /// Hex SHA-256 (first 16 characters) of the spec without its output path.
    pub fn hash(&self) -> String {
        let mut copy = self.clone();
        copy.out = None;
        let bytes = serde_json::to_vec(&copy).expect("spec serializes");
        hex::encode(Sha256::digest(&bytes))[..16].to_string()
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn es(&self) -> f64 {
        self.es.unwrap_or(1.0)
    }

    /// Resolves the signal set. `set` is a name (`psk`, `pskN`, `rotated4`)
    /// or a path to a JSON file `{q, es, points}`. Fills in `q` and `set`.
    pub fn signal_set(&mut self) -> Result<SignalSet> {
        let name = self.set.clone().unwrap_or_else(|| "psk".into());
        let set = if name.ends_with(".json") {
            let text = std::fs::read_to_string(&name).map_err(|e| UsageError(format!("cannot read signal set {name}: {e}")))?;
            let set: SignalSet =
                serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid signal set {name}: {e}")))?;
            if let Some(q) = self.q {
                if q != set.q() {
                    return usage(format!("--q {q} does not match the {}-point set in {name}", set.q()));
                }
            }
            set
        } else {
            if name.eq_ignore_ascii_case("psk") && self.q.is_none() {
                return usage("--q is required with --set psk");
            }
            SignalSet::by_name(&name, self.q, self.es()).map_err(|e| UsageError(e.to_string()))?
        };
        self.q = Some(set.q());
        self.set = Some(name);
        Ok(set)
    }
}

/// Resolves a kernel name for alphabet size `q`. Besides the library
/// builtins, `proposed` picks the distance-optimized design for `q` and
/// `set`.
pub fn kernel(name: &str, q: usize, set: &SignalSet) -> Result<Kernel> {
    let resolved = if name.eq_ignore_ascii_case("proposed") {
        match proposed_name(q, set) {
            Some(n) => n,
            None => return usage(format!("no proposed kernel for q={q} over {}", set.label())),
        }
    } else {
        name
    };
    Kernel::builtin(resolved, Some(q)).map_err(|e| UsageError(e.to_string()).into())
}

/// Distance-optimized kernel per alphabet size.
pub fn proposed_name(q: usize, set: &SignalSet) -> Option<&'static str> {
    match q {
        3 => Some("L3"),
        4 if set.label() == "rotated4" => Some("M4"),
        4 => Some("L4"),
        5 => Some("L5a"),
        8 => Some("L8"),
        _ => None,
    }
}

/// `log2 N` for a power-of-two block length of at least 2.
pub fn stages_for(block_len: usize) -> Result<usize> {
    if block_len < 2 || !block_len.is_power_of_two() {
        return usage(format!("N must be a power of two >= 2, got {block_len}"));
    }
    Ok(block_len.trailing_zeros() as usize)
}

/// Builds an explicit per-stage schedule from names.
pub fn schedule_from_names(names: &[String], q: usize, set: &SignalSet, block_len: usize) -> Result<KernelSchedule> {
    let n = stages_for(block_len)?;
    if names.len() != n {
        return usage(format!("--stages lists {} kernels but N={block_len} has {n} stages", names.len()));
    }
    let kernels = names.iter().map(|s| kernel(s, q, set)).collect::<Result<Vec<_>>>()?;
    KernelSchedule::new(kernels).context("building schedule")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = ExperimentSpec {
            q: Some(5),
            trials: Some(10),
            snr_db: vec![1.0, 2.0],
            ..Default::default()
        };
        let flags = ExperimentSpec {
            trials: Some(20),
            ..Default::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.q, Some(5));
        assert_eq!(merged.trials, Some(20));
        assert_eq!(merged.snr_db, vec![1.0, 2.0]);
    }

    #[test]
    fn hash_ignores_output_path() {
        let a = ExperimentSpec {
            q: Some(5),
            out: Some("x".into()),
            ..Default::default()
        };
        let b = ExperimentSpec {
            q: Some(5),
            ..Default::default()
        };
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), ExperimentSpec::default().hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<ExperimentSpec>(r#"{"qq": 5}"#).is_err());
        let s: ExperimentSpec = serde_json::from_str(r#"{"q": 5, "N": 64, "snr_db": [2.0]}"#).unwrap();
        assert_eq!(s.block_len, Some(64));
    }
}
