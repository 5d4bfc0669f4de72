//! JSON instance files and witness records. Every coordinate is a rational string
//! (`"3"`, `"-7/2"`), never a JSON number.

use serde::{Deserialize, Serialize};

use crate::convex::{AffineFlat, ConvexBody, VPolytope};
use crate::error::{Error, Result};
use crate::exactla::{format_rational, parse_rational, QVector};
use crate::transversal::{Family, Instance, Partition, TransversalWitness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub families: Vec<FamilyRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRecord {
    pub k: usize,
    pub sets: Vec<BodyRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum BodyRecord {
    #[serde(rename = "vpolytope")]
    VPolytope { points: Vec<Vec<String>> },
    #[serde(rename = "flat")]
    Flat {
        base: Vec<String>,
        directions: Vec<Vec<String>>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<String>,
}

pub fn vector_record(v: &QVector) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn parse_vector(entries: &[String], dim: usize, what: &str) -> Result<QVector> {
    if entries.len() != dim {
        return Err(Error::Malformed(format!(
            "{what} has {} coordinates, expected {dim}",
            entries.len()
        )));
    }
    entries
        .iter()
        .map(|s| parse_rational(s).map_err(|e| Error::Malformed(format!("{what}: {e}"))))
        .collect::<Result<Vec<_>>>()
        .map(QVector::new)
}

impl BodyRecord {
    pub fn from_body(body: &ConvexBody) -> Self {
        match body {
            ConvexBody::Polytope(p) => BodyRecord::VPolytope {
                points: p.generators().iter().map(vector_record).collect(),
            },
            ConvexBody::Flat(f) => BodyRecord::Flat {
                base: vector_record(f.base()),
                directions: f.directions().iter().map(vector_record).collect(),
            },
        }
    }

    pub fn to_body(&self, dim: usize, what: &str) -> Result<ConvexBody> {
        match self {
            BodyRecord::VPolytope { points } => {
                let gens = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| parse_vector(p, dim, &format!("{what} point {}", i + 1)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(VPolytope::new(gens)?.into())
            }
            BodyRecord::Flat { base, directions } => {
                let base = parse_vector(base, dim, &format!("{what} base"))?;
                let dirs = directions
                    .iter()
                    .enumerate()
                    .map(|(i, d)| parse_vector(d, dim, &format!("{what} direction {}", i + 1)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(AffineFlat::new(base, dirs)?.into())
            }
        }
    }
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance, meta: Option<Meta>) -> Self {
        InstanceFile {
            dimension: instance.dim,
            families: instance
                .families
                .iter()
                .map(|f| FamilyRecord {
                    k: f.k,
                    sets: f.bodies.iter().map(BodyRecord::from_body).collect(),
                })
                .collect(),
            meta,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let families = self
            .families
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let bodies = f
                    .sets
                    .iter()
                    .enumerate()
                    .map(|(j, b)| {
                        b.to_body(self.dimension, &format!("family {} set {}", i + 1, j + 1))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Family::new(f.k, bodies))
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(self.dimension, families)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Malformed(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files serialize");
        s.push('\n');
        s
    }
}

/// Parses an instance document into the data model.
pub fn parse_instance(text: &str) -> Result<(Instance, Option<Meta>)> {
    let file = InstanceFile::parse(text)?;
    let inst = file.to_instance()?;
    Ok((inst, file.meta))
}

pub fn write_instance(instance: &Instance, meta: Option<Meta>) -> String {
    InstanceFile::from_instance(instance, meta).to_json()
}

/// Members are 1-based in files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl PartitionRecord {
    pub fn from_partition(p: &Partition) -> Self {
        PartitionRecord {
            a: p.a.iter().map(|i| i + 1).collect(),
            b: p.b.iter().map(|i| i + 1).collect(),
        }
    }

    pub fn to_partition(&self) -> Result<Partition> {
        let side = |s: &[usize]| -> Result<Vec<usize>> {
            s.iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .ok_or_else(|| Error::Malformed("member indices are 1-based".into()))
                })
                .collect()
        };
        Ok(Partition {
            a: side(&self.a)?,
            b: side(&self.b)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatRecord {
    pub base: Vec<String>,
    pub directions: Vec<Vec<String>>,
}

impl FlatRecord {
    pub fn from_flat(f: &AffineFlat) -> Self {
        FlatRecord {
            base: vector_record(f.base()),
            directions: f.directions().iter().map(vector_record).collect(),
        }
    }

    pub fn to_flat(&self, dim: usize) -> Result<AffineFlat> {
        let base = parse_vector(&self.base, dim, "flat base")?;
        let dirs = self
            .directions
            .iter()
            .map(|d| parse_vector(d, dim, "flat direction"))
            .collect::<Result<Vec<_>>>()?;
        AffineFlat::new(base, dirs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorRecord {
    pub member: usize,
    pub point: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub partition: PartitionRecord,
    pub crossing_point: Vec<String>,
    pub anchors: Vec<AnchorRecord>,
    pub flat: FlatRecord,
    pub flat_dimension: usize,
}

impl WitnessRecord {
    pub fn from_witness(w: &TransversalWitness) -> Self {
        WitnessRecord {
            partition: PartitionRecord::from_partition(&w.partition),
            crossing_point: vector_record(&w.crossing_point),
            anchors: w
                .anchors
                .iter()
                .enumerate()
                .map(|(i, p)| AnchorRecord {
                    member: i + 1,
                    point: vector_record(p),
                })
                .collect(),
            flat: FlatRecord::from_flat(&w.flat),
            flat_dimension: w.flat.dim(),
        }
    }

    pub fn to_witness(&self, dim: usize) -> Result<TransversalWitness> {
        let mut anchors = self.anchors.clone();
        anchors.sort_by_key(|a| a.member);
        if anchors.iter().enumerate().any(|(i, a)| a.member != i + 1) {
            return Err(Error::Malformed(
                "anchors must cover members 1..=k+2".into(),
            ));
        }
        Ok(TransversalWitness {
            partition: self.partition.to_partition()?,
            crossing_point: parse_vector(&self.crossing_point, dim, "crossing point")?,
            anchors: anchors
                .iter()
                .map(|a| parse_vector(&a.point, dim, "anchor"))
                .collect::<Result<_>>()?,
            flat: self.flat.to_flat(dim)?,
        })
    }
}
