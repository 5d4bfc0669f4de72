//! The antipodal separating-normal certificate.
//!
//! For a family `F` of `k + 2` polytopes, `K(F)` is the order complex of the nonempty
//! proper subfamilies (a barycentric subdivision of the boundary of a `(k+1)`-simplex,
//! so a `k`-sphere), with the free involution `σ ↦ F \ σ`. If every complementary pair
//! is strictly separated, choosing the separating normals gives an antipodal vertex
//! map. On the join of all families' complexes, each maximal simplex then has a
//! positive functional `u - w`, where `u` is a common point of the simplex's minimal
//! members and `w` one of its maximal complements. Building all of this is only
//! possible when no family has its transversal.

use std::collections::HashMap;
use std::fmt;

use num_traits::Signed;
use rayon::prelude::*;

use crate::convex::common_point;
use crate::error::{display_tuple, Error, Result};
use crate::exactla::{origin_in_hull, positive_functional, QVector, Rational};
use crate::transversal::{
    check_colorful, k_transversal, partition_separators, tuples, Family, Instance, Partition,
    TransversalWitness,
};

/// A subfamily, as a bitmask over member indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub fn from_members(members: &[usize]) -> Self {
        Subset(members.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_proper_subset_of(self, other: Subset) -> bool {
        self.0 & other.0 == self.0 && self != other
    }

    pub fn members(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(self, size: usize) -> Subset {
        Subset(!self.0 & ((1u32 << size) - 1))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", m.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubsetVertex {
    pub family_index: usize,
    /// Number of members of the family, `k + 2`.
    pub size: usize,
    pub subset: Subset,
}

/// `σ ↦ F \ σ`.
pub fn involution(v: SubsetVertex) -> SubsetVertex {
    SubsetVertex {
        subset: v.subset.complement(v.size),
        ..v
    }
}

/// Order complex of the nonempty proper subsets of a `(k+2)`-element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexK {
    pub family_index: usize,
    pub k: usize,
    pub vertices: Vec<Subset>,
    /// Every chain `σ_1 ⊂ … ⊂ σ_r`, listed from smallest to largest.
    pub faces: Vec<Vec<Subset>>,
    /// Chains with sizes `1, 2, …, k + 1`.
    pub maximal: Vec<Vec<Subset>>,
}

pub fn build_k(k: usize) -> ChainComplexK {
    build_k_for(0, k)
}

pub fn build_k_for(family_index: usize, k: usize) -> ChainComplexK {
    let size = k + 2;
    assert!(size < 31, "family too large for subset enumeration");
    let full = (1u32 << size) - 1;
    let mut vertices: Vec<Subset> = (1..full).map(Subset).collect();
    vertices.sort_by_key(|s| (s.len(), s.members()));

    let mut faces = Vec::new();
    let mut chain = Vec::new();
    fn extend(vertices: &[Subset], chain: &mut Vec<Subset>, faces: &mut Vec<Vec<Subset>>) {
        faces.push(chain.clone());
        let top = *chain.last().expect("nonempty chain");
        for &v in vertices {
            if top.is_proper_subset_of(v) {
                chain.push(v);
                extend(vertices, chain, faces);
                chain.pop();
            }
        }
    }
    for &v in &vertices {
        chain.push(v);
        extend(&vertices, &mut chain, &mut faces);
        chain.pop();
    }
    let maximal = faces.iter().filter(|c| c.len() == k + 1).cloned().collect();
    ChainComplexK {
        family_index,
        k,
        vertices,
        faces,
        maximal,
    }
}

impl ChainComplexK {
    pub fn size(&self) -> usize {
        self.k + 2
    }

    /// `f[j]` = number of `j`-dimensional faces (chains of length `j + 1`).
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.k + 1];
        for c in &self.faces {
            f[c.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler(&self.f_vector())
    }

    pub fn vertex(&self, subset: Subset) -> SubsetVertex {
        SubsetVertex {
            family_index: self.family_index,
            size: self.size(),
            subset,
        }
    }

    /// Complementary pairs, each represented by the side containing member 1.
    pub fn complementary_pairs(&self) -> Vec<(Subset, Subset)> {
        self.vertices
            .iter()
            .filter(|s| s.contains(0))
            .map(|&s| (s, s.complement(self.size())))
            .collect()
    }

    /// The involution has no fixed vertex, squares to the identity, and maps every chain
    /// to a chain with the inclusions reversed.
    pub fn involution_is_free(&self) -> bool {
        let fixed_point_free = self.vertices.iter().all(|&s| {
            let v = self.vertex(s);
            involution(v) != v && involution(involution(v)) == v
        });
        let reverses = self.faces.iter().all(|c| {
            let image: Vec<Subset> = c.iter().rev().map(|s| s.complement(self.size())).collect();
            image.windows(2).all(|w| w[0].is_proper_subset_of(w[1]))
        });
        fixed_point_free && reverses
    }
}

fn euler(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(j, &c)| if j % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// The join `K_1 * … * K_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinComplex {
    pub factors: Vec<ChainComplexK>,
    pub f_vector: Vec<usize>,
}

/// One maximal chain per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalJoinSimplex {
    pub chains: Vec<Vec<Subset>>,
}

impl MaximalJoinSimplex {
    pub fn vertex_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for MaximalJoinSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chains
            .iter()
            .map(|c| {
                c.iter()
                    .map(Subset::to_string)
                    .collect::<Vec<_>>()
                    .join("<")
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

pub fn build_join(complexes: Vec<ChainComplexK>) -> Result<JoinComplex> {
    if complexes.is_empty() {
        return Err(Error::Malformed("join of no complexes".into()));
    }
    // Face polynomials including the empty face multiply under join.
    let mut poly = vec![1usize];
    for c in &complexes {
        let mut factor = vec![1usize];
        factor.extend(c.f_vector());
        let mut next = vec![0usize; poly.len() + factor.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        poly = next;
    }
    Ok(JoinComplex {
        factors: complexes,
        f_vector: poly[1..].to_vec(),
    })
}

impl JoinComplex {
    pub fn euler_characteristic(&self) -> i64 {
        euler(&self.f_vector)
    }

    /// Dimension of the sphere the join triangulates: `Σ (k_i + 1) - 1`.
    pub fn sphere_dim(&self) -> usize {
        self.factors.iter().map(|c| c.k + 1).sum::<usize>() - 1
    }

    pub fn expected_euler(&self) -> i64 {
        1 + if self.sphere_dim().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn maximal_count(&self) -> usize {
        self.factors.iter().map(|c| c.maximal.len()).product()
    }

    /// Maximal simplices in lexicographic order of per-factor chain indices.
    pub fn maximal_simplices(&self) -> Vec<MaximalJoinSimplex> {
        let counts: Vec<usize> = self.factors.iter().map(|c| c.maximal.len()).collect();
        tuples(&counts)
            .into_iter()
            .map(|t| MaximalJoinSimplex {
                chains: t
                    .iter()
                    .zip(&self.factors)
                    .map(|(&i, c)| c.maximal[i].clone())
                    .collect(),
            })
            .collect()
    }
}

/// Separating hyperplanes for every complementary pair of one family, oriented so that
/// members of `σ` satisfy `f(σ)·p > b(σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalAssignment {
    pub family_index: usize,
    pub size: usize,
    /// Keyed by the representative containing member 1.
    pub pairs: Vec<(Subset, QVector, Rational)>,
}

impl NormalAssignment {
    /// `(f(σ), b(σ))`, with `f(F \ σ) = -f(σ)` and `b(F \ σ) = -b(σ)`.
    pub fn normal(&self, subset: Subset) -> (QVector, Rational) {
        let (rep, flip) = if subset.contains(0) {
            (subset, false)
        } else {
            (subset.complement(self.size), true)
        };
        let (_, f, b) = self
            .pairs
            .iter()
            .find(|(s, _, _)| *s == rep)
            .expect("every proper subset has an assigned pair");
        if flip {
            (-f, -b.clone())
        } else {
            (f.clone(), b.clone())
        }
    }

    /// Exact antipodality and the strict sign conditions on every generator.
    pub fn check(&self, family: &Family) -> Result<bool> {
        for &(s, _, _) in &self.pairs {
            let c = s.complement(self.size);
            let (f, b) = self.normal(s);
            let (fc, bc) = self.normal(c);
            if fc != -&f || bc != -b.clone() {
                return Ok(false);
            }
            for (i, body) in family.bodies.iter().enumerate() {
                let poly = body.as_polytope().ok_or_else(|| {
                    Error::UnsupportedRepresentation("normals need V-polytopes".into())
                })?;
                for g in poly.generators() {
                    let side = f.dot(g) - &b;
                    let ok = if s.contains(i) {
                        side.is_positive()
                    } else {
                        side.is_negative()
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalOutcome {
    Assigned(NormalAssignment),
    /// The first complementary pair (in partition search order) with intersecting hulls.
    Inseparable(Partition),
}

pub fn assign_normals(family: &Family, family_index: usize) -> Result<NormalOutcome> {
    let seps = partition_separators(family)?;
    let mut pairs = Vec::with_capacity(seps.len());
    for (partition, sep) in seps {
        let Some(h) = sep else {
            return Ok(NormalOutcome::Inseparable(partition));
        };
        // h·p < b on side a; flip so side a is positive.
        pairs.push((Subset::from_members(&partition.a), -&h.normal, -h.offset));
    }
    Ok(NormalOutcome::Assigned(NormalAssignment {
        family_index,
        size: family.len(),
        pairs,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCheck {
    pub family_index: usize,
    pub k: usize,
    pub vertex_count: usize,
    pub maximal_chains: usize,
    pub pair_count: usize,
    pub euler: i64,
    pub involution_free: bool,
    pub antipodal: bool,
}

impl FamilyCheck {
    pub fn expected_vertices(&self) -> usize {
        (1 << (self.k + 2)) - 2
    }

    pub fn expected_euler(&self) -> i64 {
        1 + if self.k.is_multiple_of(2) { 1 } else { -1 }
    }

    pub fn expected_pairs(&self) -> usize {
        (1 << (self.k + 1)) - 1
    }

    pub fn passed(&self) -> bool {
        self.vertex_count == self.expected_vertices()
            && self.euler == self.expected_euler()
            && self.pair_count == self.expected_pairs()
            && self.involution_free
            && self.antipodal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexCheck {
    pub simplex: MaximalJoinSimplex,
    /// Members `C_i` (single element of each `σ_1`).
    pub c_tuple: Vec<usize>,
    /// Members `D_i` (single element of each top complement).
    pub d_tuple: Vec<usize>,
    pub u: QVector,
    pub w: QVector,
    pub functional: QVector,
    /// Result of the LP audit that the origin is outside the normals' hull, when sampled.
    pub audit: Option<bool>,
}

impl SimplexCheck {
    pub fn passed(&self) -> bool {
        self.audit != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub families: Vec<FamilyCheck>,
    pub join_f_vector: Vec<usize>,
    pub join_euler: i64,
    pub join_expected_euler: i64,
    pub simplices: Vec<SimplexCheck>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyCheck::passed)
            && self.join_euler == self.join_expected_euler
            && self.simplices.iter().all(SimplexCheck::passed)
    }

    /// Plain-text ledger, one check per line.
    pub fn ledger(&self) -> String {
        let pf = |b: bool| if b { "PASS" } else { "FAIL" };
        let mut out = String::new();
        for f in &self.families {
            let i = f.family_index + 1;
            out += &format!(
                "vertices[{i}] k={} {} {} (expected {})\n",
                f.k,
                pf(f.vertex_count == f.expected_vertices()),
                f.vertex_count,
                f.expected_vertices()
            );
            out += &format!(
                "euler[{i}] k={} {} {} (expected {})\n",
                f.k,
                pf(f.euler == f.expected_euler()),
                f.euler,
                f.expected_euler()
            );
            out += &format!(
                "pairs[{i}] k={} {} {} (expected {})\n",
                f.k,
                pf(f.pair_count == f.expected_pairs()),
                f.pair_count,
                f.expected_pairs()
            );
            out += &format!("involution[{i}] {}\n", pf(f.involution_free));
            out += &format!("antipodal[{i}] {}\n", pf(f.antipodal));
        }
        let fv: Vec<String> = self.join_f_vector.iter().map(usize::to_string).collect();
        out += &format!(
            "join-euler {} {} (expected {}) f=({})\n",
            pf(self.join_euler == self.join_expected_euler),
            self.join_euler,
            self.join_expected_euler,
            fv.join(",")
        );
        for (idx, s) in self.simplices.iter().enumerate() {
            let audit = match s.audit {
                None => String::new(),
                Some(a) => format!(" audit={}", pf(a)),
            };
            out += &format!(
                "simplex[{}] {} {} C={} D={} u={} w={} v={}{audit}\n",
                idx + 1,
                s.simplex,
                pf(s.passed()),
                display_tuple(&s.c_tuple),
                display_tuple(&s.d_tuple),
                s.u,
                s.w,
                s.functional
            );
        }
        out += &format!(
            "claim {} {}/{} maximal simplices\n",
            pf(self.passed()),
            self.simplices.iter().filter(|s| s.passed()).count(),
            self.simplices.len()
        );
        out
    }
}

/// Every `AUDIT_STRIDE`-th maximal simplex is also checked by LP duality.
pub const AUDIT_STRIDE: usize = 10;

/// Checks the origin-avoidance claim on every maximal simplex of the join.
pub fn verify_claim(
    instance: &Instance,
    assignments: &[NormalAssignment],
) -> Result<CertificateReport> {
    if assignments.len() != instance.n() {
        return Err(Error::Malformed(format!(
            "{} normal assignments for {} families",
            assignments.len(),
            instance.n()
        )));
    }
    let complexes: Vec<ChainComplexK> = instance
        .families
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if f.len() != f.k + 2 {
                return Err(Error::WrongFamilySize {
                    family: i + 1,
                    expected: f.k + 2,
                    found: f.len(),
                });
            }
            Ok(build_k_for(i, f.k))
        })
        .collect::<Result<_>>()?;

    let mut families = Vec::with_capacity(complexes.len());
    for ((c, a), fam) in complexes.iter().zip(assignments).zip(&instance.families) {
        families.push(FamilyCheck {
            family_index: c.family_index,
            k: c.k,
            vertex_count: c.vertices.len(),
            maximal_chains: c.maximal.len(),
            pair_count: a.pairs.len(),
            euler: c.euler_characteristic(),
            involution_free: c.involution_is_free(),
            antipodal: a.pairs.len() == c.complementary_pairs().len() && a.check(fam)?,
        });
    }

    let join = build_join(complexes)?;
    let simplices = join.maximal_simplices();

    // u and w only depend on the member tuple, so solve each tuple once.
    let points: HashMap<Vec<usize>, QVector> = instance
        .tuples()
        .into_par_iter()
        .map(|t| {
            let p = common_point(&instance.tuple_bodies(&t))?;
            p.map(|p| (t.clone(), p))
                .ok_or(Error::ColorfulViolation { tuple: t })
        })
        .collect::<Result<_>>()?;

    let checks = simplices
        .into_par_iter()
        .enumerate()
        .map(|(idx, simplex)| {
            let sizes: Vec<usize> = instance.families.iter().map(Family::len).collect();
            let c_tuple: Vec<usize> = simplex.chains.iter().map(|c| c[0].members()[0]).collect();
            let d_tuple: Vec<usize> = simplex
                .chains
                .iter()
                .zip(&sizes)
                .map(|(c, &s)| c.last().expect("nonempty").complement(s).members()[0])
                .collect();
            let mut normals = Vec::with_capacity(simplex.vertex_count());
            let mut offsets = Vec::with_capacity(simplex.vertex_count());
            for (chain, a) in simplex.chains.iter().zip(assignments) {
                for &s in chain {
                    let (f, b) = a.normal(s);
                    normals.push(f);
                    offsets.push(b);
                }
            }
            let u = points[&c_tuple].clone();
            let w = points[&d_tuple].clone();
            let functional =
                positive_functional(&normals, &offsets, &u, &w).map_err(|e| match e {
                    Error::Precondition { index, detail } => {
                        Error::CertificateInconsistency(format!(
                            "simplex {simplex}: normal {index} violates w·f < b < u·f ({detail})"
                        ))
                    }
                    other => other,
                })?;
            let audit = if idx % AUDIT_STRIDE == 0 {
                Some(!origin_in_hull(&normals)?)
            } else {
                None
            };
            Ok(SimplexCheck {
                simplex,
                c_tuple,
                d_tuple,
                u,
                w,
                functional,
                audit,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CertificateReport {
        families,
        join_euler: join.euler_characteristic(),
        join_expected_euler: join.expected_euler(),
        join_f_vector: join.f_vector,
        simplices: checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateOutcome {
    /// Some complementary pair of this family cannot be separated, so the family has its
    /// transversal.
    TheoremConfirmed {
        family_index: usize,
        pair: Partition,
        witness: TransversalWitness,
    },
    /// Every family is fully separated and the claim holds on every maximal simplex.
    CertificateComplete(CertificateReport),
}

pub fn full_certificate(instance: &Instance) -> Result<CertificateOutcome> {
    for (i, f) in instance.families.iter().enumerate() {
        if f.len() != f.k + 2 {
            return Err(Error::WrongFamilySize {
                family: i + 1,
                expected: f.k + 2,
                found: f.len(),
            });
        }
    }
    let colorful = check_colorful(instance)?;
    if let Some(tuple) = colorful.failing_tuple {
        return Err(Error::ColorfulViolation { tuple });
    }
    let mut assignments = Vec::with_capacity(instance.n());
    for (i, f) in instance.families.iter().enumerate() {
        match assign_normals(f, i)? {
            NormalOutcome::Assigned(a) => assignments.push(a),
            NormalOutcome::Inseparable(pair) => {
                let witness = k_transversal(f)?.ok_or_else(|| {
                    Error::CertificateInconsistency(format!(
                        "pair {pair} of family {} is inseparable but no transversal was found",
                        i + 1
                    ))
                })?;
                return Ok(CertificateOutcome::TheoremConfirmed {
                    family_index: i,
                    pair,
                    witness,
                });
            }
        }
    }
    let report = verify_claim(instance, &assignments)?;
    if !report.passed() {
        return Err(Error::CertificateInconsistency(
            "assembled certificate fails a structural check".into(),
        ));
    }
    Ok(CertificateOutcome::CertificateComplete(report))
}
