//! Seeded property suites with independent oracles.

pub mod gen;
pub mod oracles;
mod suites;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5EED;

pub const SUITES: [&str; 7] = [
    "translation-lemma",
    "composition",
    "ef-bridge",
    "linear-order",
    "definability",
    "quotient",
    "enumeration",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub seed: u64,
    pub suites: Vec<String>,
    /// Case counts overriding each suite's default.
    pub cases: BTreeMap<String, usize>,
    pub caps: Caps,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: DEFAULT_SEED,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            cases: BTreeMap::new(),
            caps: Caps::default(),
        }
    }
}

impl CorpusConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CorpusConfig = serde_json::from_str(text)?;
        if let Some(bad) = cfg.suites.iter().chain(cfg.cases.keys()).find(|s| !SUITES.contains(&s.as_str())) {
            return Err(Error::IllFormed(format!("unknown suite `{bad}`")));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl Outcome {
    /// `Ok(None)` passes, `Ok(Some(why))` fails, and a cap error is inconclusive.
    pub(crate) fn settle(r: Result<Option<String>>) -> Self {
        match r {
            Ok(None) => Outcome::Pass,
            Ok(Some(why)) => Outcome::Fail(why),
            Err(Error::CapExceeded(why)) => Outcome::Inconclusive(why),
            Err(e) => Outcome::Fail(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub status: Status,
    /// The first few failing or inconclusive cases.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl CorpusSummary {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {}\n", self.seed);
        for s in &self.suites {
            let status = match s.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            out += &format!(
                "{:<18} {status:<12} {} passed, {} failed, {} inconclusive of {}\n",
                s.suite, s.passed, s.failed, s.inconclusive, s.cases
            );
            for f in &s.failures {
                out += &format!("    {f}\n");
            }
        }
        out
    }
}

/// Seed for case `index` of a suite, so any case can be replayed alone.
pub(crate) fn case_seed(seed: u64, suite: &str, index: usize) -> u64 {
    let salt = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    seed ^ salt.rotate_left(17) ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub(crate) fn run_cases<F>(count: usize, case: F) -> Vec<Outcome>
where
    F: Fn(usize) -> Outcome + Sync + Send,
{
    (0..count).into_par_iter().map(case).collect()
}

fn tally(suite: &str, outcomes: Vec<Outcome>) -> SuiteResult {
    let mut r = SuiteResult {
        suite: suite.to_owned(),
        cases: outcomes.len(),
        passed: 0,
        failed: 0,
        inconclusive: 0,
        status: Status::Pass,
        failures: Vec::new(),
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass => r.passed += 1,
            Outcome::Fail(why) => {
                r.failed += 1;
                if r.failures.len() < 5 {
                    r.failures.push(format!("case {i}: {why}"));
                }
            }
            Outcome::Inconclusive(why) => {
                r.inconclusive += 1;
                if r.failures.len() < 5 {
                    r.failures.push(format!("case {i} inconclusive: {why}"));
                }
            }
        }
    }
    r.status = if r.failed > 0 {
        Status::Fail
    } else if r.inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    r
}

/// Runs one suite; `None` for an unknown name.
pub fn run_suite(name: &str, cfg: &CorpusConfig) -> Option<SuiteResult> {
    let n = cfg.cases.get(name).copied();
    let outcomes = match name {
        "translation-lemma" => suites::translation_lemma(cfg, n.unwrap_or(200)),
        "composition" => suites::composition(cfg, n.unwrap_or(100)),
        "ef-bridge" => suites::ef_bridge(cfg, n.unwrap_or(30)),
        "linear-order" => suites::linear_order(cfg, n.unwrap_or(9)),
        "definability" => suites::definability(cfg, n.unwrap_or(60)),
        "quotient" => suites::quotient(cfg, n.unwrap_or(100)),
        "enumeration" => suites::enumeration(cfg, n.unwrap_or(usize::MAX)),
        _ => return None,
    };
    Some(tally(name, outcomes))
}

pub fn run(cfg: &CorpusConfig) -> Result<CorpusSummary> {
    let mut suites = Vec::new();
    for name in &cfg.suites {
        suites.push(run_suite(name, cfg).ok_or_else(|| Error::IllFormed(format!("unknown suite `{name}`")))?);
    }
    Ok(CorpusSummary { seed: cfg.seed, suites })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_schema() {
        let cfg = CorpusConfig::from_json(r#"{"seed": 3, "suites": ["quotient"]}"#).unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.caps, Caps::default());
        assert!(CorpusConfig::from_json(r#"{"suites": ["nope"]}"#).is_err());
        assert!(CorpusConfig::from_json(r#"{"seeds": 1}"#).is_err());
    }

    #[test]
    fn seeded_runs_repeat() {
        let cfg = CorpusConfig {
            suites: vec!["quotient".into(), "translation-lemma".into()],
            cases: BTreeMap::from([("quotient".into(), 20), ("translation-lemma".into(), 20)]),
            ..CorpusConfig::default()
        };
        let a = run(&cfg).unwrap();
        assert!(a.all_pass(), "{}", a.to_text());
        assert_eq!(a, run(&cfg).unwrap());
    }

    #[test]
    fn caps_make_cases_inconclusive() {
        let cfg = CorpusConfig {
            suites: vec!["ef-bridge".into()],
            cases: BTreeMap::from([("ef-bridge".into(), 6)]),
            caps: Caps {
                max_bf_len: 2,
                ..Caps::default()
            },
            ..CorpusConfig::default()
        };
        let s = run(&cfg).unwrap();
        assert_eq!(s.suites[0].status, Status::Inconclusive);
        assert_eq!(s.suites[0].failed, 0);
        assert!(s.all_pass());
    }
}
