use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_GROUP: &str = "cyclic:6";
pub const DEFAULT_YOUNG: &str = "power:2";
/// A fresh real random measure per trial.
pub const DEFAULT_MEASURE: &str = "random";

/// Perturbation of one representation matrix, used for fault injection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fault {
    pub irrep: usize,
    pub element: usize,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub id: String,
    #[serde(default = "default_group")]
    pub group: String,
    #[serde(default = "default_young")]
    pub young: String,
    #[serde(default = "default_measure")]
    pub measure: String,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Falls back to the check's default tolerance.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub fault: Option<Fault>,
}

fn default_group() -> String {
    DEFAULT_GROUP.into()
}

fn default_young() -> String {
    DEFAULT_YOUNG.into()
}

fn default_measure() -> String {
    DEFAULT_MEASURE.into()
}

fn default_trials() -> usize {
    20
}

impl CheckSpec {
    pub fn new(id: &str, group: &str, young: &str) -> Self {
        Self {
            id: id.into(),
            group: group.into(),
            young: young.into(),
            measure: default_measure(),
            trials: default_trials(),
            seed: 0,
            tol: None,
            fault: None,
        }
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn measure(mut self, measure: &str) -> Self {
        self.measure = measure.into();
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        })
    }
}

/// Constants entering the bound checks: the computed `C₀ = ‖χ_G‖^o_Ψ` and
/// the two inverse values it is compared with.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c0: Option<f64>,
    pub phi_inv_one: Option<f64>,
    pub psi_inv_one: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub group: String,
    pub young: String,
    pub measure: String,
    pub status: Status,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tol: f64,
    pub witnesses: Vec<String>,
    pub runtime_ms: u64,
    pub constants: Constants,
    pub note: Option<String>,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check id `{0}`")]
    UnknownId(String),
    #[error("invalid check spec: {0}")]
    InvalidSpec(String),
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] oh_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("report error: {0}")]
    Report(String),
}

pub type VResult<T> = std::result::Result<T, VerifyError>;
