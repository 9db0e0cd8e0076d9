//! File formats: group input files, certificates and golden corpus files.
//!
//! Every format carries `"schema": 1`. Points are 1-based throughout.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::control::{ControlResult, TraceRecord};
use crate::corpus::Corpus;
use crate::cycle_base::CycleBaseResult;
use crate::error::{Error, Result};
use crate::group::{conjugating_element, derived_series, is_solvable, Group};
use crate::oracle::{oracle_cyc, ORACLE_VERSION};
use crate::perm::Perm;

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A generator as a 1-based image list or cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Images(Vec<usize>),
    Cycles(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub degree: usize,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn default_schema() -> u32 {
    SCHEMA
}

impl GroupFile {
    pub fn from_group(g: &Group, name: Option<String>) -> GroupFile {
        GroupFile {
            schema: SCHEMA,
            degree: g.degree(),
            generators: g
                .generators()
                .iter()
                .map(|x| GeneratorSpec::Cycles(x.to_cycle_string()))
                .collect(),
            name,
        }
    }

    pub fn parse(text: &str) -> Result<GroupFile> {
        let file: GroupFile = serde_json::from_str(text)?;
        if file.schema != SCHEMA {
            return Err(Error::Argument(format!("unsupported schema {}", file.schema)));
        }
        if file.degree == 0 {
            return Err(Error::Argument("degree must be at least 1".into()));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<GroupFile> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn generators(&self) -> Result<Vec<Perm>> {
        self.generators
            .iter()
            .map(|g| match g {
                GeneratorSpec::Images(img) => {
                    if img.len() != self.degree {
                        return Err(Error::Degree(self.degree, img.len()));
                    }
                    Ok(Perm::from_images_one_based(img)?)
                }
                GeneratorSpec::Cycles(s) => Ok(Perm::parse_cycles(s, self.degree)?),
            })
            .collect()
    }

    pub fn group(&self) -> Result<Group> {
        Group::new(self.degree, self.generators()?)
    }
}

/// SHA-256 of the degree and 1-based generator images, independent of how
/// the generators were written.
pub fn input_hash(g: &Group) -> String {
    let canonical: Vec<Vec<usize>> = g.generators().iter().map(Perm::one_based_images).collect();
    let text = serde_json::to_string(&(g.degree(), canonical)).expect("integers serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, passed: bool, detail: Option<String>) -> Check {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// The controlling subgroup as recorded in a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlSummary {
    pub conclusion: crate::control::Conclusion,
    pub order: String,
    /// Cycle strings.
    pub generators: Vec<String>,
    /// Orders along the derived series, ending in 1.
    pub derived_series: Vec<String>,
    pub trace: Vec<TraceRecord>,
}

impl ControlSummary {
    pub fn new(c: &ControlResult) -> ControlSummary {
        ControlSummary {
            conclusion: c.conclusion,
            order: c.m.order().to_string(),
            generators: c.m.generators().iter().map(Perm::to_cycle_string).collect(),
            derived_series: derived_series(&c.m).iter().map(|g| g.order().to_string()).collect(),
            trace: c.trace.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub tool_version: String,
    pub input_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub degree: usize,
    pub group_order: String,
    pub seed: u64,
    pub control: ControlSummary,
    pub cycle_base: CycleBaseResult,
    /// The base as cycle strings, sorted by smallest moved point.
    pub base_cycles: Vec<String>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }
}

/// Runs the structural checks on a finished pipeline and assembles the
/// certificate. `oracle_cap` enables the brute-force comparison.
pub fn build_certificate(
    k: &Group,
    name: Option<String>,
    seed: u64,
    control: &ControlResult,
    base: &CycleBaseResult,
    oracle_cap: Option<u64>,
) -> Result<Certificate> {
    let m = &control.m;
    let mut checks = vec![
        Check::new("m_solvable", is_solvable(m), None),
        Check::new("m_subgroup_of_k", m.is_subgroup_of(k), None),
        Check::new(
            "phi_bound",
            base.base.len() as u64 <= base.phi_bound,
            Some(format!("{} <= {}", base.base.len(), base.phi_bound)),
        ),
        Check::new(
            "base_full_cycles_in_m",
            base.base.iter().all(|c| c.is_full_cycle() && m.has(c)),
            None,
        ),
    ];
    let mut distinct = true;
    for (i, c) in base.base.iter().enumerate() {
        for d in &base.base[i + 1..] {
            distinct &= conjugating_element(k, c, d)?.is_none();
        }
    }
    checks.push(Check::new("pairwise_nonconjugate", distinct, None));
    if let Some(cap) = oracle_cap {
        match oracle_cyc(k, cap) {
            Ok(classes) => {
                let mut hit: Vec<Option<usize>> = base
                    .base
                    .iter()
                    .map(|c| crate::oracle::class_of(&classes, c))
                    .collect();
                hit.sort();
                hit.dedup();
                let agrees = classes.len() == base.base.len()
                    && hit.len() == base.base.len()
                    && hit.iter().all(Option::is_some);
                checks.push(Check::new(
                    "oracle_agreement",
                    agrees,
                    Some(format!("oracle {} classes, base {}", classes.len(), base.base.len())),
                ));
            }
            Err(Error::Cap { order, cap }) => checks.push(Check::new(
                "oracle_agreement",
                true,
                Some(format!("skipped: order {order} above cap {cap}")),
            )),
            Err(e) => return Err(e),
        }
    }
    let mut base_cycles: Vec<(usize, String)> = base
        .base
        .iter()
        .map(|c| (c.first_moved_point().unwrap_or(0), c.to_cycle_string()))
        .collect();
    base_cycles.sort();
    Ok(Certificate {
        schema: SCHEMA,
        tool_version: TOOL_VERSION.to_string(),
        input_hash: input_hash(k),
        name,
        degree: k.degree(),
        group_order: k.order().to_string(),
        seed,
        control: ControlSummary::new(control),
        cycle_base: base.clone(),
        base_cycles: base_cycles.into_iter().map(|(_, s)| s).collect(),
        checks,
        timestamp: None,
    })
}

/// Oracle facts about one corpus entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub name: String,
    pub family: String,
    pub degree: usize,
    pub order: String,
    /// Class representatives (canonical generators); absent when not enumerated.
    pub classes: Option<Vec<Perm>>,
    pub class_sizes: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCorpus {
    pub schema: u32,
    pub oracle_version: u32,
    pub profile: String,
    pub entries: Vec<GoldenEntry>,
}

impl GoldenCorpus {
    pub fn compute(corpus: &Corpus, cap: u64) -> Result<GoldenCorpus> {
        let mut entries = Vec::new();
        for e in &corpus.entries {
            let classes = if e.enumerable {
                Some(oracle_cyc(&e.group, cap)?)
            } else {
                None
            };
            entries.push(GoldenEntry {
                name: e.name.clone(),
                family: e.family.to_string(),
                degree: e.group.degree(),
                order: e.group.order().to_string(),
                class_sizes: classes
                    .as_ref()
                    .map(|c| c.iter().map(|x| x.subgroups.len()).collect()),
                classes: classes.map(|c| c.into_iter().map(|x| x.representative).collect()),
            });
        }
        Ok(GoldenCorpus {
            schema: SCHEMA,
            oracle_version: ORACLE_VERSION,
            profile: corpus.profile.clone(),
            entries,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("golden file serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::control_subgroup;
    use crate::cycle_base::cycle_base_with;

    #[test]
    fn group_file_accepts_both_generator_forms() {
        let f = GroupFile::parse(r#"{"degree": 4, "generators": [[2,3,4,1], "(1,2)"]}"#).unwrap();
        assert_eq!(f.group().unwrap().order_u64(), Some(24));
        assert!(GroupFile::parse(r#"{"degree": 3, "generators": [[1,2]]}"#)
            .unwrap()
            .group()
            .is_err());
        assert!(GroupFile::parse("{not json").is_err());
        assert!(GroupFile::parse(r#"{"schema": 2, "degree": 1, "generators": []}"#).is_err());
    }

    #[test]
    fn hash_ignores_notation() {
        let a = GroupFile::parse(r#"{"degree": 3, "generators": ["(1,2,3)"]}"#).unwrap();
        let b = GroupFile::parse(r#"{"degree": 3, "generators": [[2,3,1]]}"#).unwrap();
        assert_eq!(input_hash(&a.group().unwrap()), input_hash(&b.group().unwrap()));
    }

    #[test]
    fn certificate_round_trip() {
        let k = crate::corpus::sym5_wr_c2();
        let run = cycle_base_with(&k, &Default::default()).unwrap();
        let cert = build_certificate(&k, None, 0, &run.control, &run.result, Some(100_000)).unwrap();
        assert!(cert.passed());
        let back: Certificate = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.cycle_base.base, run.result.base);
        assert_eq!(control_subgroup(&k, 0).unwrap().m.order_u64(), Some(800));
    }
}
