//! Self-verifying fixtures: discovered search witnesses frozen into the
//! repository together with their provenance. Loading a fixture re-evaluates
//! its defining predicate, so a stale or corrupted witness fails fast.

use crate::ap_groups::{classify_slop3, is_expected_slop3_solution, Slop3Letter};
use crate::combinatorics::{lemma_negav_e, CyclicSet, HexagonTable, SignVector};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// Environment variable overriding the fixture directory.
pub const FIXTURE_DIR_ENV: &str = "VNLAB_FIXTURES";

#[derive(Debug)]
pub enum FixtureError {
    Io(std::io::Error),
    Parse(serde_json::Error),
    ChecksumMismatch { expected: String, computed: String },
    VerificationFailed(String),
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::Io(e) => write!(f, "fixture io error: {e}"),
            FixtureError::Parse(e) => write!(f, "fixture parse error: {e}"),
            FixtureError::ChecksumMismatch { expected, computed } => {
                write!(
                    f,
                    "fixture checksum mismatch: file says {expected}, payload hashes to {computed}"
                )
            }
            FixtureError::VerificationFailed(msg) => {
                write!(f, "fixture verification failed: {msg}")
            }
        }
    }
}

impl std::error::Error for FixtureError {}

impl From<std::io::Error> for FixtureError {
    fn from(e: std::io::Error) -> Self {
        FixtureError::Io(e)
    }
}

impl From<serde_json::Error> for FixtureError {
    fn from(e: serde_json::Error) -> Self {
        FixtureError::Parse(e)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub search_parameters: String,
    pub discovery_date: String,
}

/// The three fixture kinds the experiments rely on.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum FixturePayload {
    /// Three-copy set whose non-divisible-by-3 progressions beat the
    /// trivial ones by more than 8x, plus the crossed-product threshold.
    NegavE {
        d: i64,
        f: Vec<i64>,
        seed: u64,
        good: u64,
        bad: u64,
        /// `has_sum` is negative for every `N >=` this value.
        negtrace_threshold_n: i64,
    },
    /// Sign vector with a negative hexagon sum, plus the torus sweep
    /// parameters validated on it.
    SignVector {
        d: i64,
        f: Vec<i64>,
        signs: String,
        x: i64,
        /// Truncations at which `generic_limit / M^8` is negative and stable.
        m_values: Vec<i64>,
        /// Truncation used for the empirical-vs-limit two-route check.
        m_empirical: i64,
    },
    /// Brute-forced solution set of the quintuple relation.
    Slop3Solutions { r: i64, solutions: Vec<Vec<String>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub payload: FixturePayload,
    pub provenance: Provenance,
    pub checksum: String,
}

impl Fixture {
    pub fn new(payload: FixturePayload, provenance: Provenance) -> Self {
        let checksum = payload_checksum(&payload);
        Fixture {
            payload,
            provenance,
            checksum,
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), FixtureError> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    /// Loads, checks the checksum, and re-evaluates the defining predicate.
    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        let text = std::fs::read_to_string(path)?;
        let fixture: Fixture = serde_json::from_str(&text)?;
        let computed = payload_checksum(&fixture.payload);
        if computed != fixture.checksum {
            return Err(FixtureError::ChecksumMismatch {
                expected: fixture.checksum.clone(),
                computed,
            });
        }
        fixture.verify()?;
        Ok(fixture)
    }

    /// Re-evaluates the fixture's defining predicate.
    pub fn verify(&self) -> Result<(), FixtureError> {
        match &self.payload {
            FixturePayload::NegavE {
                d,
                f,
                seed,
                good,
                bad,
                negtrace_threshold_n,
            } => {
                let fset = CyclicSet::new(*d, f.iter().copied());
                if !fset.is_3ap_free() {
                    return Err(FixtureError::VerificationFailed("F contains a 3AP".into()));
                }
                let sample = lemma_negav_e(&fset, *d, *seed);
                if sample.good != *good || sample.bad != *bad {
                    return Err(FixtureError::VerificationFailed(format!(
                        "counts drifted: recomputed good={} bad={}, fixture says good={good} bad={bad}",
                        sample.good, sample.bad
                    )));
                }
                if sample.good <= 8 * sample.bad {
                    return Err(FixtureError::VerificationFailed(
                        "good count does not exceed 8x bad".into(),
                    ));
                }
                if *negtrace_threshold_n < 1 {
                    return Err(FixtureError::VerificationFailed(
                        "negtrace threshold must be positive".into(),
                    ));
                }
                Ok(())
            }
            FixturePayload::SignVector {
                d,
                f,
                signs,
                x,
                m_values,
                m_empirical,
            } => {
                let fset = CyclicSet::new(*d, f.iter().copied());
                if *d % 2 == 0 {
                    return Err(FixtureError::VerificationFailed("d must be odd".into()));
                }
                if !fset.is_3ap_free() {
                    return Err(FixtureError::VerificationFailed("F contains a 3AP".into()));
                }
                let parsed = parse_signs(signs, *d)
                    .ok_or_else(|| FixtureError::VerificationFailed("bad sign string".into()))?;
                let table = HexagonTable::new(&fset);
                let got = table.x_value(&parsed);
                if got != *x {
                    return Err(FixtureError::VerificationFailed(format!(
                        "hexagon sum drifted: recomputed {got}, fixture says {x}"
                    )));
                }
                if got >= 0 {
                    return Err(FixtureError::VerificationFailed("X is not negative".into()));
                }
                if m_values.is_empty() || *m_empirical < 1 {
                    return Err(FixtureError::VerificationFailed(
                        "missing M parameters".into(),
                    ));
                }
                Ok(())
            }
            FixturePayload::Slop3Solutions { r, solutions } => {
                let recomputed = classify_slop3(*r);
                let tokens: Vec<Vec<String>> = recomputed
                    .iter()
                    .map(|t| t.iter().map(Slop3Letter::token).collect())
                    .collect();
                if &tokens != solutions {
                    return Err(FixtureError::VerificationFailed(
                        "solution set differs from fresh enumeration".into(),
                    ));
                }
                if !recomputed.iter().all(is_expected_slop3_solution) {
                    return Err(FixtureError::VerificationFailed(
                        "solutions violate the permutation classification".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn sign_vector(&self) -> Option<(CyclicSet, SignVector)> {
        if let FixturePayload::SignVector { d, f, signs, .. } = &self.payload {
            let fset = CyclicSet::new(*d, f.iter().copied());
            let sv = parse_signs(signs, *d)?;
            Some((fset, sv))
        } else {
            None
        }
    }
}

pub fn format_signs(signs: &SignVector) -> String {
    signs
        .signs()
        .iter()
        .map(|&s| if s > 0 { '+' } else { '-' })
        .collect()
}

pub fn parse_signs(text: &str, d: i64) -> Option<SignVector> {
    if text.len() != d as usize {
        return None;
    }
    let signs: Option<Vec<i8>> = text
        .chars()
        .map(|c| match c {
            '+' => Some(1i8),
            '-' => Some(-1i8),
            _ => None,
        })
        .collect();
    Some(SignVector::new(d, signs?))
}

/// FNV-1a over the canonical payload JSON.
pub fn payload_checksum(payload: &FixturePayload) -> String {
    let json = serde_json::to_string(payload).expect("payload serializes");
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in json.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a:{hash:016x}")
}

/// Fixture directory: `$VNLAB_FIXTURES`, else the workspace `fixtures/`.
pub fn fixture_dir() -> PathBuf {
    if let Ok(dir) = std::env::var(FIXTURE_DIR_ENV) {
        return PathBuf::from(dir);
    }
    // compiled-in workspace layout: crates/core -> ../../fixtures
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let candidate = manifest.join("../../fixtures");
    if candidate.is_dir() {
        return candidate;
    }
    PathBuf::from("fixtures")
}

pub fn load_named(name: &str) -> Result<Fixture, FixtureError> {
    Fixture::load(&fixture_dir().join(name))
}
