//! JSON documents for configurations, angle multisets and certificates.
//!
//! Every document carries `"version": 1`; on input the field may be omitted
//! but any other value is rejected, as are unknown fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Angle, AngleInstance, AngleMultiset, Certificate, CertifiedAngle, Config};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Schema(format!("unsupported schema version {v}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default = "schema_version")]
    pub version: u32,
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleEntryDoc {
    pub radians: f64,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultisetDoc {
    #[serde(default = "schema_version")]
    pub version: u32,
    pub angles: Vec<AngleEntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub occurrence: usize,
    pub target: f64,
    pub apex: usize,
    pub ends: [usize; 2],
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    #[serde(default = "schema_version")]
    pub version: u32,
    pub tolerance: f64,
    pub assignments: Vec<AssignmentDoc>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl From<&Config> for ConfigDoc {
    fn from(c: &Config) -> Self {
        ConfigDoc {
            version: SCHEMA_VERSION,
            dim: c.dim(),
            points: c.points().to_vec(),
        }
    }
}

impl TryFrom<ConfigDoc> for Config {
    type Error = Error;
    fn try_from(doc: ConfigDoc) -> Result<Self> {
        check_version(doc.version)?;
        Config::new(doc.dim, doc.points)
    }
}

impl From<&AngleMultiset> for MultisetDoc {
    fn from(ms: &AngleMultiset) -> Self {
        MultisetDoc {
            version: SCHEMA_VERSION,
            angles: ms
                .entries()
                .iter()
                .map(|&(a, mult)| AngleEntryDoc {
                    radians: a.radians(),
                    mult,
                })
                .collect(),
        }
    }
}

impl TryFrom<MultisetDoc> for AngleMultiset {
    type Error = Error;
    /// Entries may come in any order; equal angles are merged.
    fn try_from(doc: MultisetDoc) -> Result<Self> {
        check_version(doc.version)?;
        if doc.angles.iter().any(|e| e.mult == 0) {
            return Err(Error::Schema("multiplicity must be at least 1".into()));
        }
        AngleMultiset::from_radians(
            doc.angles
                .iter()
                .flat_map(|e| std::iter::repeat_n(e.radians, e.mult)),
        )
    }
}

impl From<&Certificate> for CertificateDoc {
    fn from(c: &Certificate) -> Self {
        CertificateDoc {
            version: SCHEMA_VERSION,
            tolerance: c.tolerance,
            assignments: c
                .assignments
                .iter()
                .map(|a| AssignmentDoc {
                    occurrence: a.occurrence,
                    target: a.target,
                    apex: a.instance.apex,
                    ends: a.instance.ends,
                    measured: a.instance.measured.radians(),
                })
                .collect(),
            warnings: c.warnings.clone(),
        }
    }
}

impl TryFrom<CertificateDoc> for Certificate {
    type Error = Error;
    fn try_from(doc: CertificateDoc) -> Result<Self> {
        check_version(doc.version)?;
        let assignments = doc
            .assignments
            .into_iter()
            .map(|a| {
                Ok(CertifiedAngle {
                    occurrence: a.occurrence,
                    target: a.target,
                    instance: AngleInstance {
                        apex: a.apex,
                        ends: a.ends,
                        measured: Angle::new(a.measured)?,
                    },
                })
            })
            .collect::<Result<_>>()?;
        Ok(Certificate {
            assignments,
            tolerance: doc.tolerance,
            warnings: doc.warnings,
        })
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn render<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

pub fn config_to_json(c: &Config) -> String {
    render(&ConfigDoc::from(c))
}

pub fn config_from_json(text: &str) -> Result<Config> {
    parse::<ConfigDoc>(text)?.try_into()
}

pub fn multiset_to_json(ms: &AngleMultiset) -> String {
    render(&MultisetDoc::from(ms))
}

pub fn multiset_from_json(text: &str) -> Result<AngleMultiset> {
    parse::<MultisetDoc>(text)?.try_into()
}

pub fn certificate_to_json(c: &Certificate) -> String {
    render(&CertificateDoc::from(c))
}

pub fn certificate_from_json(text: &str) -> Result<Certificate> {
    parse::<CertificateDoc>(text)?.try_into()
}
