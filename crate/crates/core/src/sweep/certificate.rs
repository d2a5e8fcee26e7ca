//! Per-slice certificates as JSON Lines: one header record, one record per
//! verified inequality, one per level, optional vertex sets, and a verdict.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{LevelStats, Neighborhood, RunConfig, Snapshot, Verdict};
use crate::map::{ParameterSlice, Regime};

pub const SCHEMA_VERSION: u32 = 1;
const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A verified inequality and its margin. JSON has no infinities, so a
/// non-finite margin is stored as `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSlack {
    pub name: String,
    pub slack: Option<f64>,
}

impl CheckSlack {
    pub fn new(name: &str, slack: f64) -> Self {
        CheckSlack {
            name: name.to_string(),
            slack: slack.is_finite().then_some(slack),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub artifact_version: String,
    pub config_hash: String,
    pub slice: ParameterSlice,
    pub eps: f64,
    pub config: RunConfig,
    pub neighborhood: Option<Neighborhood>,
    pub checks: Vec<CheckSlack>,
    pub levels: Vec<LevelStats>,
    /// Surviving squares per level; empty unless requested.
    pub vertex_sets: Vec<Snapshot>,
    pub trapping_rule_fired: bool,
    pub verdict: Verdict,
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record {
    Header {
        schema: u32,
        artifact_version: String,
        config_hash: String,
        slice: ParameterSlice,
        eps: f64,
        config: RunConfig,
        neighborhood: Option<Neighborhood>,
        note: Option<String>,
    },
    Check(CheckSlack),
    Level(LevelStats),
    Vertices(Snapshot),
    Verdict {
        verdict: Verdict,
        trapping_rule_fired: bool,
    },
}

#[derive(Serialize)]
struct HashInput<'a> {
    schema: u32,
    artifact_version: &'a str,
    regime: Regime,
    eps: f64,
    config: &'a RunConfig,
}

/// SHA-256 of everything besides the slice that determines a certificate.
pub fn config_hash(regime: Regime, eps: f64, cfg: &RunConfig) -> String {
    let input = HashInput {
        schema: SCHEMA_VERSION,
        artifact_version: ARTIFACT_VERSION,
        regime,
        eps,
        config: cfg,
    };
    let bytes = serde_json::to_vec(&input).expect("plain data serializes");
    hex::encode(Sha256::digest(bytes))
}

impl Certificate {
    /// An inconclusive certificate with no levels, to be filled by the caller.
    pub fn new(slice: ParameterSlice, eps: f64, config: RunConfig, config_hash: String, checks: Vec<CheckSlack>) -> Self {
        Certificate {
            schema: SCHEMA_VERSION,
            artifact_version: ARTIFACT_VERSION.to_string(),
            config_hash,
            slice,
            eps,
            config,
            neighborhood: None,
            checks,
            levels: Vec::new(),
            vertex_sets: Vec::new(),
            trapping_rule_fired: false,
            verdict: Verdict::Inconclusive,
            note: None,
        }
    }

    /// `Proved` only with a nonempty trace ending in an empty level.
    pub fn is_consistent(&self) -> bool {
        match self.verdict {
            Verdict::Proved => self.levels.last().is_some_and(|l| l.survivors == 0),
            Verdict::Inconclusive => true,
        }
    }

    pub fn file_name(slice: &ParameterSlice, hash: &str) -> String {
        format!("slice_{}_{}_{}.jsonl", slice.a.lo(), slice.a.hi(), &hash[..16])
    }

    pub fn to_jsonl(&self) -> String {
        let mut records = vec![Record::Header {
            schema: self.schema,
            artifact_version: self.artifact_version.clone(),
            config_hash: self.config_hash.clone(),
            slice: self.slice,
            eps: self.eps,
            config: self.config.clone(),
            neighborhood: self.neighborhood,
            note: self.note.clone(),
        }];
        records.extend(self.checks.iter().cloned().map(Record::Check));
        records.extend(self.levels.iter().cloned().map(Record::Level));
        records.extend(self.vertex_sets.iter().cloned().map(Record::Vertices));
        records.push(Record::Verdict {
            verdict: self.verdict,
            trapping_rule_fired: self.trapping_rule_fired,
        });
        let mut out = String::new();
        for r in records {
            out += &serde_json::to_string(&r).expect("plain data serializes");
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        Self::from_lines(text.lines().map(|l| Ok(l.to_string())))
    }

    fn from_lines(lines: impl Iterator<Item = std::io::Result<String>>) -> Result<Self> {
        let mut cert: Option<Certificate> = None;
        let mut done = false;
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record =
                serde_json::from_str(&line).map_err(|e| Error::Format(format!("line {}: {e}", i + 1)))?;
            if done {
                return Err(Error::Format(format!("line {}: record after verdict", i + 1)));
            }
            match (rec, cert.as_mut()) {
                (
                    Record::Header {
                        schema,
                        artifact_version,
                        config_hash,
                        slice,
                        eps,
                        config,
                        neighborhood,
                        note,
                    },
                    None,
                ) => {
                    if schema != SCHEMA_VERSION {
                        return Err(Error::Format(format!("unsupported schema {schema}")));
                    }
                    let mut c = Certificate::new(slice, eps, config, config_hash, Vec::new());
                    c.artifact_version = artifact_version;
                    c.neighborhood = neighborhood;
                    c.note = note;
                    cert = Some(c);
                }
                (Record::Header { .. }, Some(_)) => return Err(Error::Format("duplicate header".into())),
                (_, None) => return Err(Error::Format("first record must be the header".into())),
                (Record::Check(c), Some(cert)) => cert.checks.push(c),
                (Record::Level(l), Some(cert)) => cert.levels.push(l),
                (Record::Vertices(s), Some(cert)) => cert.vertex_sets.push(s),
                (
                    Record::Verdict {
                        verdict,
                        trapping_rule_fired,
                    },
                    Some(cert),
                ) => {
                    cert.verdict = verdict;
                    cert.trapping_rule_fired = trapping_rule_fired;
                    done = true;
                }
            }
        }
        if !done {
            return Err(Error::Format("missing verdict record (truncated file?)".into()));
        }
        let cert = cert.expect("verdict implies header");
        if !cert.is_consistent() {
            return Err(Error::Format("verdict Proved without an empty final level".into()));
        }
        Ok(cert)
    }

    /// Writes to a temporary file and renames, so an interrupted run never
    /// leaves a truncated certificate under the final name.
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("jsonl.tmp");
        {
            let mut w = BufWriter::new(std::fs::File::create(&tmp)?);
            w.write_all(self.to_jsonl().as_bytes())?;
            w.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::from_lines(BufReader::new(f).lines())
    }
}
