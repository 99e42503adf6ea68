//! Suite configuration and parallel execution.
//!
//! A suite is a TOML file:
//!
//! ```toml
//! seed = 42
//! trials = 20
//!
//! [matrix]
//! groups = ["cyclic:6", "dihedral:4"]
//! young = ["power:2", "npower:3"]
//! checks = ["C-EO", "C-SANDWICH"]   # omitted: the whole catalog
//! measures = ["random"]
//!
//! [trials_per_check]
//! C-HY-RATIO = 200
//!
//! [[check]]
//! id = "C-DUAL-VALID"
//! group = "dihedral:4"
//! fault = { irrep = 2, element = 1, eps = 1e-3 }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use oh_core::{FiniteGroup, OrliczPair};

use crate::checks::{lookup, run_check, CATALOG};
use crate::spec::{CheckResult, CheckSpec, Status, VResult, VerifyError, DEFAULT_MEASURE};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "OH_THREADS";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrix {
    #[serde(default)]
    pub groups: Vec<String>,
    #[serde(default)]
    pub young: Vec<String>,
    pub checks: Option<Vec<String>>,
    #[serde(default)]
    pub measures: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub matrix: Option<Matrix>,
    #[serde(default)]
    pub trials_per_check: BTreeMap<String, usize>,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
}

/// A parsed config together with its source, kept for error locations.
#[derive(Debug, Clone)]
pub struct Suite {
    pub config: SuiteConfig,
    source: String,
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

impl Suite {
    pub fn parse(source: &str) -> VResult<Self> {
        let config: SuiteConfig = toml::from_str(source).map_err(|e| VerifyError::Config {
            line: e.span().map(|s| line_of(source, s.start)).unwrap_or(0),
            message: e.message().to_string(),
        })?;
        let suite = Suite {
            config,
            source: source.to_string(),
        };
        suite.validate()?;
        Ok(suite)
    }

    pub fn load(path: &Path) -> VResult<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Line of the first occurrence of `"token"` in the source, or 0.
    fn locate(&self, token: &str) -> usize {
        let quoted = format!("\"{token}\"");
        self.source
            .find(&quoted)
            .or_else(|| self.source.find(token))
            .map(|o| line_of(&self.source, o))
            .unwrap_or(0)
    }

    fn config_error(&self, token: &str, message: String) -> VerifyError {
        VerifyError::Config {
            line: self.locate(token),
            message,
        }
    }

    fn validate(&self) -> VResult<()> {
        let c = &self.config;
        let mut ids: Vec<&str> = c.checks.iter().map(|s| s.id.as_str()).collect();
        let mut groups: Vec<&str> = c.checks.iter().map(|s| s.group.as_str()).collect();
        let mut youngs: Vec<&str> = c.checks.iter().map(|s| s.young.as_str()).collect();
        if let Some(m) = &c.matrix {
            ids.extend(m.checks.iter().flatten().map(String::as_str));
            groups.extend(m.groups.iter().map(String::as_str));
            youngs.extend(m.young.iter().map(String::as_str));
        }
        ids.extend(c.trials_per_check.keys().map(String::as_str));
        for id in ids {
            if lookup(id).is_err() {
                return Err(self.config_error(id, format!("unknown check id `{id}`")));
            }
        }
        for g in groups {
            if !g.starts_with("json:") {
                FiniteGroup::parse(g)
                    .map_err(|e| self.config_error(g, format!("group `{g}`: {e}")))?;
            }
        }
        for y in youngs {
            OrliczPair::parse(y).map_err(|e| self.config_error(y, format!("young `{y}`: {e}")))?;
        }
        let zero_trials = c.trials == Some(0)
            || c.checks.iter().any(|s| s.trials == 0)
            || c.trials_per_check.values().any(|&t| t == 0);
        if zero_trials {
            return Err(self.config_error("trials", "trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Expands the matrix and explicit entries into check specs. Checks that
    /// ignore the group (or the Young function) run only on the first one.
    pub fn expand(&self, seed_override: Option<u64>) -> Vec<CheckSpec> {
        let c = &self.config;
        let seed = seed_override.or(c.seed).unwrap_or(0);
        let trials_for =
            |id: &str, fallback: usize| c.trials_per_check.get(id).copied().unwrap_or(fallback);
        let mut specs = Vec::new();
        let mut seen = BTreeSet::new();
        if let Some(m) = &c.matrix {
            let ids: Vec<&str> = match &m.checks {
                Some(ids) => ids.iter().map(String::as_str).collect(),
                None => CATALOG.iter().map(|i| i.id).collect(),
            };
            let default_measure = vec![DEFAULT_MEASURE.to_string()];
            let measures = if m.measures.is_empty() {
                &default_measure
            } else {
                &m.measures
            };
            for id in ids {
                let info = lookup(id).expect("validated");
                let groups = if info.uses_group {
                    &m.groups[..]
                } else {
                    &m.groups[..m.groups.len().min(1)]
                };
                let youngs = if info.uses_young {
                    &m.young[..]
                } else {
                    &m.young[..m.young.len().min(1)]
                };
                for g in groups {
                    for y in youngs {
                        for mu in measures {
                            if seen.insert((id.to_string(), g.clone(), y.clone(), mu.clone())) {
                                let trials = trials_for(id, c.trials.unwrap_or(20));
                                specs.push(
                                    CheckSpec::new(id, g, y)
                                        .measure(mu)
                                        .trials(trials)
                                        .seed(seed),
                                );
                            }
                        }
                    }
                }
            }
        }
        for s in &c.checks {
            let mut s = s.clone();
            if let Some(seed) = seed_override {
                s.seed = seed;
            }
            specs.push(s);
        }
        specs
    }
}

/// Worker count: `OH_THREADS` when set and positive, otherwise rayon's default.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Runs the specs concurrently and sorts the results by id, group, Young
/// function and measure. A check that errors is reported as a failure.
pub fn run_specs(specs: &[CheckSpec]) -> Vec<CheckResult> {
    let work = || -> Vec<CheckResult> { specs.par_iter().map(run_or_fail).collect() };
    let mut results = match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    results.sort_by(|a, b| {
        (&a.id, &a.group, &a.young, &a.measure).cmp(&(&b.id, &b.group, &b.young, &b.measure))
    });
    results
}

fn run_or_fail(spec: &CheckSpec) -> CheckResult {
    match run_check(spec) {
        Ok(r) => r,
        Err(e) => CheckResult {
            id: spec.id.clone(),
            group: spec.group.clone(),
            young: spec.young.clone(),
            measure: spec.measure.clone(),
            status: Status::Fail,
            lhs: 0.0,
            rhs: 0.0,
            residual: f64::MAX,
            tol: spec
                .tol
                .unwrap_or_else(|| lookup(&spec.id).map(|i| i.tol).unwrap_or(0.0)),
            witnesses: Vec::new(),
            runtime_ms: 0,
            constants: Default::default(),
            note: Some(format!("error: {e}")),
        },
    }
}

/// 0 when nothing failed, 1 otherwise.
pub fn exit_code(results: &[CheckResult]) -> i32 {
    if results.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}

/// Loads and runs a suite file.
pub fn run_suite(path: &Path, seed: Option<u64>) -> VResult<(Vec<CheckResult>, i32)> {
    let suite = Suite::load(path)?;
    let results = run_specs(&suite.expand(seed));
    let code = exit_code(&results);
    Ok((results, code))
}

/// The default suite: every catalog group up to order 12 against the power
/// pairs `x²`, `x²/2`, `x^{3/2}/(3/2)` and `x³/3`.
pub const DEFAULT_SUITE: &str = include_str!("../suites/default.toml");
