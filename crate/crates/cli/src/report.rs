//! JSON report documents written with `--out`.

use serde::{Deserialize, Serialize};
use transversal_core::certificate::{CertificateOutcome, CertificateReport};
use transversal_core::exactla::{format_rational, Hyperplane};
use transversal_core::format::{vector_record, PartitionRecord, WitnessRecord};
use transversal_core::transversal::{ColorfulReport, Partition};

fn one_based(t: &[usize]) -> Vec<usize> {
    t.iter().map(|i| i + 1).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TuplePoint {
    pub tuple: Vec<usize>,
    pub point: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ColorfulDoc {
    pub command: String,
    pub holds: bool,
    pub witnesses: Vec<TuplePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_tuple: Option<Vec<usize>>,
}

impl ColorfulDoc {
    pub fn new(r: &ColorfulReport) -> Self {
        ColorfulDoc {
            command: "check-colorful".into(),
            holds: r.holds,
            witnesses: r
                .witnesses
                .iter()
                .map(|(t, p)| TuplePoint {
                    tuple: one_based(t),
                    point: vector_record(p),
                })
                .collect(),
            failing_tuple: r.failing_tuple.as_deref().map(one_based),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SeparationRecord {
    pub partition: PartitionRecord,
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TransversalDoc {
    pub command: String,
    pub family: usize,
    pub k: usize,
    pub present: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub separations: Vec<SeparationRecord>,
}

impl SeparationRecord {
    pub fn new(p: &Partition, h: &Hyperplane) -> Self {
        SeparationRecord {
            partition: PartitionRecord::from_partition(p),
            normal: vector_record(&h.normal),
            offset: format_rational(&h.offset),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TheoremDoc {
    pub command: String,
    pub family: usize,
    pub k: usize,
    pub witness: WitnessRecord,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyCheckRecord {
    pub family: usize,
    pub k: usize,
    pub vertices: usize,
    pub maximal_chains: usize,
    pub pairs: usize,
    pub euler: i64,
    pub involution_free: bool,
    pub antipodal: bool,
    pub passed: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimplexRecord {
    pub chains: Vec<Vec<Vec<usize>>>,
    pub c_tuple: Vec<usize>,
    pub d_tuple: Vec<usize>,
    pub u: Vec<String>,
    pub w: Vec<String>,
    pub functional: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<bool>,
    pub passed: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub command: String,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inseparable_pair: Option<PartitionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyCheckRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join_f_vector: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join_euler: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub simplices: Vec<SimplexRecord>,
}

pub const THEOREM_CONFIRMED: &str = "THEOREM-CONFIRMED";
pub const CERTIFICATE_COMPLETE: &str = "CERTIFICATE-COMPLETE";

impl CertificateDoc {
    pub fn new(outcome: &CertificateOutcome) -> Self {
        match outcome {
            CertificateOutcome::TheoremConfirmed {
                family_index,
                pair,
                witness,
            } => CertificateDoc {
                command: "certificate".into(),
                outcome: THEOREM_CONFIRMED.into(),
                family: Some(family_index + 1),
                inseparable_pair: Some(PartitionRecord::from_partition(pair)),
                witness: Some(WitnessRecord::from_witness(witness)),
                families: Vec::new(),
                join_f_vector: None,
                join_euler: None,
                simplices: Vec::new(),
            },
            CertificateOutcome::CertificateComplete(r) => Self::complete(r),
        }
    }

    fn complete(r: &CertificateReport) -> Self {
        CertificateDoc {
            command: "certificate".into(),
            outcome: CERTIFICATE_COMPLETE.into(),
            family: None,
            inseparable_pair: None,
            witness: None,
            families: r
                .families
                .iter()
                .map(|f| FamilyCheckRecord {
                    family: f.family_index + 1,
                    k: f.k,
                    vertices: f.vertex_count,
                    maximal_chains: f.maximal_chains,
                    pairs: f.pair_count,
                    euler: f.euler,
                    involution_free: f.involution_free,
                    antipodal: f.antipodal,
                    passed: f.passed(),
                })
                .collect(),
            join_f_vector: Some(r.join_f_vector.clone()),
            join_euler: Some(r.join_euler),
            simplices: r
                .simplices
                .iter()
                .map(|s| SimplexRecord {
                    chains: s
                        .simplex
                        .chains
                        .iter()
                        .map(|c| c.iter().map(|sub| one_based(&sub.members())).collect())
                        .collect(),
                    c_tuple: one_based(&s.c_tuple),
                    d_tuple: one_based(&s.d_tuple),
                    u: vector_record(&s.u),
                    w: vector_record(&s.w),
                    functional: vector_record(&s.functional),
                    audit: s.audit,
                    passed: s.passed(),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
    s.push('\n');
    s
}
