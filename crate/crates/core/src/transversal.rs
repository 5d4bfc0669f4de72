//! Deciding k-transversals of (k+2)-member families through Radon-type partitions,
//! checking the colorful intersection property, and verifying that some family of a
//! colorful instance admits its transversal.

use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::convex::{affine_span, common_point, contains, hull_union, AffineFlat, ConvexBody};
use crate::error::{Error, Result};
use crate::exactla::{
    hull_intersection, int, strict_separation, FeasibilityProblem, Hyperplane, QVector, Rational,
    Relation,
};

/// A color class: `bodies` together with the target transversal dimension `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub k: usize,
    pub bodies: Vec<ConvexBody>,
}

impl Family {
    pub fn new(k: usize, bodies: Vec<ConvexBody>) -> Self {
        Family { k, bodies }
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn is_polytopal(&self) -> bool {
        self.bodies.iter().all(|b| b.as_polytope().is_some())
    }

    fn require_partition_shape(&self) -> Result<()> {
        if self.bodies.len() != self.k + 2 {
            return Err(Error::Malformed(format!(
                "family has {} members, expected k + 2 = {}",
                self.bodies.len(),
                self.k + 2
            )));
        }
        if !self.is_polytopal() {
            return Err(Error::UnsupportedRepresentation(
                "transversal decisions need V-polytope members; truncate flats first".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub dim: usize,
    pub families: Vec<Family>,
}

impl Instance {
    pub fn new(dim: usize, families: Vec<Family>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        if families.is_empty() {
            return Err(Error::Malformed("instance has no families".into()));
        }
        for (i, f) in families.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::Malformed(format!("family {} is empty", i + 1)));
            }
            if let Some(j) = f.bodies.iter().position(|b| b.dim() != dim) {
                return Err(Error::Malformed(format!(
                    "member {} of family {} lives in dimension {}, expected {dim}",
                    j + 1,
                    i + 1,
                    f.bodies[j].dim()
                )));
            }
        }
        Ok(Instance { dim, families })
    }

    pub fn n(&self) -> usize {
        self.families.len()
    }

    pub fn m(&self) -> usize {
        self.families.iter().map(|f| f.k).sum()
    }

    /// All member-index tuples, one member per family, in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let sizes: Vec<usize> = self.families.iter().map(Family::len).collect();
        tuples(&sizes)
    }

    pub fn tuple_bodies(&self, tuple: &[usize]) -> Vec<ConvexBody> {
        tuple
            .iter()
            .zip(&self.families)
            .map(|(&j, f)| f.bodies[j].clone())
            .collect()
    }
}

pub(crate) fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..s).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

/// A split of member indices `0..size` into two nonempty sides, canonically with
/// member 0 on side `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Partition {
    pub fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &[usize]| {
            s.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}}}/{{{}}}", side(&self.a), side(&self.b))
    }
}

/// The `2^(size-1) - 1` canonical partitions, ordered by `|a|` and then
/// lexicographically.
pub fn partitions(size: usize) -> Result<Vec<Partition>> {
    if size < 2 {
        return Err(Error::Malformed(format!("cannot partition {size} members")));
    }
    if size > 31 {
        return Err(Error::Malformed(format!(
            "{size} members is too many to enumerate"
        )));
    }
    let full = (1u32 << size) - 1;
    let mut out: Vec<Partition> = (0..full)
        .filter(|mask| mask & 1 == 1)
        .map(|mask| {
            let (a, b) = (0..size).partition(|&i| mask >> i & 1 == 1);
            Partition { a, b }
        })
        .collect();
    out.sort_by(|x, y| x.a.len().cmp(&y.a.len()).then_with(|| x.a.cmp(&y.a)));
    Ok(out)
}

/// Evidence that a family has a transversal of dimension at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalWitness {
    pub partition: Partition,
    /// A point in the hulls of both sides' anchors.
    pub crossing_point: QVector,
    /// One point per member, indexed like the family.
    pub anchors: Vec<QVector>,
    pub flat: AffineFlat,
}

/// Decides whether a family of `k + 2` V-polytopes has a `k`-dimensional transversal,
/// returning a witness built from the first partition whose side hulls meet.
pub fn k_transversal(family: &Family) -> Result<Option<TransversalWitness>> {
    family.require_partition_shape()?;
    let parts = partitions(family.len())?;
    let found = parts
        .par_iter()
        .map(|p| partition_witness(family, p))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(None),
        Some(r) => r,
    }
}

fn partition_witness(family: &Family, partition: &Partition) -> Result<Option<TransversalWitness>> {
    let polys: Vec<_> = family
        .bodies
        .iter()
        .map(|b| b.as_polytope().expect("checked polytopal"))
        .collect();
    let dim = polys[0].dim();
    let mut lp = FeasibilityProblem::new();
    let weights: Vec<Vec<usize>> = polys
        .iter()
        .map(|p| p.generators().iter().map(|_| lp.add_nonneg()).collect())
        .collect();
    for j in 0..dim {
        let mut terms = Vec::new();
        for (side, sign) in [(&partition.a, int(1)), (&partition.b, int(-1))] {
            for &i in side.iter() {
                for (&w, g) in weights[i].iter().zip(polys[i].generators()) {
                    if !g[j].is_zero() {
                        terms.push((w, &sign * &g[j]));
                    }
                }
            }
        }
        lp.add_row(terms, Relation::Eq, int(0));
    }
    for side in [&partition.a, &partition.b] {
        let terms = side
            .iter()
            .flat_map(|&i| weights[i].iter().map(|&w| (w, int(1))))
            .collect();
        lp.add_row(terms, Relation::Eq, int(1));
    }
    let Some(sol) = lp.solve_checked()? else {
        return Ok(None);
    };

    let mut crossing_point = QVector::zeros(dim);
    let mut anchors = Vec::with_capacity(polys.len());
    for (i, poly) in polys.iter().enumerate() {
        let total: Rational = weights[i].iter().map(|&w| sol[w].clone()).sum();
        let mut weighted = QVector::zeros(dim);
        for (&w, g) in weights[i].iter().zip(poly.generators()) {
            weighted.add_scaled(&sol[w], g);
        }
        if partition.a.contains(&i) {
            crossing_point = &crossing_point + &weighted;
        }
        let anchor = if total.is_positive() {
            weighted.scale(&total.recip())
        } else {
            poly.generators()[0].clone()
        };
        anchors.push(anchor);
    }
    let flat = affine_span(&anchors)?;
    Ok(Some(TransversalWitness {
        partition: partition.clone(),
        crossing_point,
        anchors,
        flat,
    }))
}

/// Independently re-checks a witness against its family.
pub fn validate_witness(family: &Family, witness: &TransversalWitness) -> Result<()> {
    let bad = |msg: String| Err(Error::WitnessInvalid(msg));
    let p = &witness.partition;
    let mut seen: Vec<usize> = p.a.iter().chain(&p.b).copied().collect();
    seen.sort_unstable();
    if p.a.is_empty() || p.b.is_empty() || seen != (0..family.len()).collect::<Vec<_>>() {
        return bad(format!("{p} is not a partition of the family"));
    }
    if witness.anchors.len() != family.len() {
        return bad("one anchor per member is required".into());
    }
    for (i, (anchor, body)) in witness.anchors.iter().zip(&family.bodies).enumerate() {
        if !contains(body, anchor)? {
            return bad(format!("anchor {} lies outside its member", i + 1));
        }
        if !contains(&witness.flat.clone().into(), anchor)? {
            return bad(format!("anchor {} is not on the flat", i + 1));
        }
    }
    for side in [&p.a, &p.b] {
        let pts: Vec<QVector> = side.iter().map(|&i| witness.anchors[i].clone()).collect();
        if hull_intersection(&pts, std::slice::from_ref(&witness.crossing_point))?.is_none() {
            return bad("crossing point is outside an anchor hull".into());
        }
    }
    if witness.flat.dim() > family.k {
        return bad(format!(
            "flat has dimension {} > k = {}",
            witness.flat.dim(),
            family.k
        ));
    }
    Ok(())
}

/// Strict separator (or its absence) for each canonical partition, in search order.
pub fn partition_separators(family: &Family) -> Result<Vec<(Partition, Option<Hyperplane>)>> {
    family.require_partition_shape()?;
    partitions(family.len())?
        .into_par_iter()
        .map(|p| {
            let side = |idx: &[usize]| -> Result<Vec<QVector>> {
                let bodies: Vec<&ConvexBody> = idx.iter().map(|&i| &family.bodies[i]).collect();
                Ok(hull_union(&bodies)?.generators().to_vec())
            };
            let sep = strict_separation(&side(&p.a)?, &side(&p.b)?)?;
            Ok((p, sep))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorfulReport {
    pub holds: bool,
    /// Common points for every tuple checked before the first failure, in order.
    pub witnesses: Vec<(Vec<usize>, QVector)>,
    /// Lexicographically first tuple with empty intersection.
    pub failing_tuple: Option<Vec<usize>>,
}

pub fn check_colorful(instance: &Instance) -> Result<ColorfulReport> {
    let tuples = instance.tuples();
    let points: Vec<Option<QVector>> = tuples
        .par_iter()
        .map(|t| common_point(&instance.tuple_bodies(t)))
        .collect::<Result<_>>()?;
    let mut witnesses = Vec::with_capacity(tuples.len());
    for (t, p) in tuples.into_iter().zip(points) {
        match p {
            Some(p) => witnesses.push((t, p)),
            None => {
                return Ok(ColorfulReport {
                    holds: false,
                    witnesses,
                    failing_tuple: Some(t),
                })
            }
        }
    }
    Ok(ColorfulReport {
        holds: true,
        witnesses,
        failing_tuple: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    /// 0-based index of the first family with a transversal.
    pub family_index: usize,
    pub witness: TransversalWitness,
}

/// Checks the theorem's hypotheses (ambient dimension `n + m - 1`, family sizes
/// `k_i + 2`, colorful intersection) and returns the first family that admits its
/// `k_i`-transversal. Failing to find one on a valid instance is reported as
/// [`Error::TheoremViolation`].
pub fn verify_theorem(instance: &Instance) -> Result<TheoremReport> {
    let expected = instance.n() + instance.m() - 1;
    if instance.dim != expected {
        return Err(Error::WrongDimension {
            expected,
            found: instance.dim,
        });
    }
    for (i, f) in instance.families.iter().enumerate() {
        if f.len() != f.k + 2 {
            return Err(Error::WrongFamilySize {
                family: i + 1,
                expected: f.k + 2,
                found: f.len(),
            });
        }
        if !f.is_polytopal() {
            return Err(Error::UnsupportedRepresentation(format!(
                "family {} contains flats; truncate first",
                i + 1
            )));
        }
    }
    let colorful = check_colorful(instance)?;
    if let Some(tuple) = colorful.failing_tuple {
        return Err(Error::ColorfulViolation { tuple });
    }
    for (i, f) in instance.families.iter().enumerate() {
        if let Some(witness) = k_transversal(f)? {
            return Ok(TheoremReport {
                family_index: i,
                witness,
            });
        }
    }
    Err(Error::TheoremViolation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::VPolytope;

    fn pts(points: &[&[i64]]) -> ConvexBody {
        VPolytope::new(points.iter().map(|p| QVector::from_ints(p)).collect())
            .unwrap()
            .into()
    }

    fn intervals(ivs: &[(i64, i64)]) -> Vec<ConvexBody> {
        ivs.iter().map(|&(a, b)| pts(&[&[a], &[b]])).collect()
    }

    #[test]
    fn partition_counts_and_order() {
        let p2 = partitions(2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].to_string(), "{1}/{2}");
        let p3: Vec<String> = partitions(3)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(p3, ["{1}/{2,3}", "{1,2}/{3}", "{1,3}/{2}"]);
        assert_eq!(partitions(4).unwrap().len(), 7);
        assert!(partitions(1).is_err());
    }

    #[test]
    fn partitions_match_brute_force_enumeration() {
        for size in 2..=6usize {
            // every unordered {A, B} split with both sides nonempty
            let mut brute = std::collections::BTreeSet::new();
            for mask in 1..(1u32 << size) - 1 {
                let a: Vec<usize> = (0..size).filter(|i| mask >> i & 1 == 1).collect();
                let b: Vec<usize> = (0..size).filter(|i| mask >> i & 1 == 0).collect();
                brute.insert(if a.contains(&0) { (a, b) } else { (b, a) });
            }
            let ours: std::collections::BTreeSet<_> = partitions(size)
                .unwrap()
                .into_iter()
                .map(|p| (p.a, p.b))
                .collect();
            assert_eq!(ours, brute);
            assert_eq!(ours.len(), (1 << (size - 1)) - 1);
        }
    }

    #[test]
    fn collinear_points_have_a_line() {
        let fam = Family::new(1, vec![pts(&[&[0, 0]]), pts(&[&[1, 0]]), pts(&[&[2, 0]])]);
        let w = k_transversal(&fam).unwrap().expect("collinear");
        assert_eq!(w.partition.to_string(), "{1,3}/{2}");
        assert_eq!(w.crossing_point, QVector::from_ints(&[1, 0]));
        assert_eq!(w.flat.dim(), 1);
        assert!(contains(&w.flat.clone().into(), &QVector::from_ints(&[7, 0])).unwrap());
        validate_witness(&fam, &w).unwrap();
    }

    #[test]
    fn triangle_vertices_have_no_line() {
        let fam = Family::new(1, vec![pts(&[&[0, 0]]), pts(&[&[1, 1]]), pts(&[&[2, 0]])]);
        assert_eq!(k_transversal(&fam).unwrap(), None);
        let seps = partition_separators(&fam).unwrap();
        assert_eq!(seps.len(), 3);
        assert!(seps.iter().all(|(_, h)| h.is_some()));
    }

    #[test]
    fn overlapping_intervals_share_a_point() {
        let fam = Family::new(0, intervals(&[(0, 2), (1, 3)]));
        let w = k_transversal(&fam).unwrap().unwrap();
        assert!(w.crossing_point[0] >= int(1) && w.crossing_point[0] <= int(2));
        assert_eq!(w.flat.dim(), 0);
        validate_witness(&fam, &w).unwrap();
    }

    #[test]
    fn partition_shape_errors() {
        let fam = Family::new(1, intervals(&[(0, 2), (1, 3)]));
        assert!(matches!(k_transversal(&fam), Err(Error::Malformed(_))));
        let flat = crate::convex::AffineFlat::new(QVector::from_ints(&[0]), vec![]).unwrap();
        let fam = Family::new(0, vec![pts(&[&[0]]), flat.into()]);
        assert!(matches!(
            k_transversal(&fam),
            Err(Error::UnsupportedRepresentation(_))
        ));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let fam = Family::new(0, intervals(&[(0, 2), (1, 3)]));
        let mut w = k_transversal(&fam).unwrap().unwrap();
        w.anchors[1] = QVector::from_ints(&[5]);
        assert!(matches!(
            validate_witness(&fam, &w),
            Err(Error::WitnessInvalid(_))
        ));
    }

    #[test]
    fn colorful_examples() {
        let inst = Instance::new(
            1,
            vec![
                Family::new(0, intervals(&[(0, 2), (1, 3)])),
                Family::new(0, intervals(&[(0, 3), (1, 2)])),
            ],
        )
        .unwrap();
        let r = check_colorful(&inst).unwrap();
        assert!(r.holds);
        assert_eq!(r.witnesses.len(), 4);

        let disjoint = Instance::new(
            1,
            vec![
                Family::new(0, intervals(&[(0, 1)])),
                Family::new(0, intervals(&[(2, 3)])),
            ],
        )
        .unwrap();
        let r = check_colorful(&disjoint).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing_tuple, Some(vec![0, 0]));

        let t = verify_theorem(&inst).unwrap();
        assert_eq!(t.family_index, 0);
        let x = &t.witness.crossing_point[0];
        assert!(*x >= int(1) && *x <= int(2));
    }

    #[test]
    fn verify_theorem_gates_preconditions() {
        let wrong_dim = Instance::new(
            2,
            vec![
                Family::new(0, vec![pts(&[&[0, 0]]), pts(&[&[0, 0]])]),
                Family::new(0, vec![pts(&[&[0, 0]]), pts(&[&[0, 0]])]),
            ],
        )
        .unwrap();
        assert!(matches!(
            verify_theorem(&wrong_dim),
            Err(Error::WrongDimension {
                expected: 1,
                found: 2
            })
        ));
        let wrong_size = Instance::new(
            1,
            vec![
                Family::new(0, intervals(&[(0, 2), (1, 3), (1, 2)])),
                Family::new(0, intervals(&[(0, 3), (1, 2)])),
            ],
        )
        .unwrap();
        assert!(matches!(
            verify_theorem(&wrong_size),
            Err(Error::WrongFamilySize { family: 1, .. })
        ));
        let not_colorful = Instance::new(
            1,
            vec![
                Family::new(0, intervals(&[(0, 1), (0, 1)])),
                Family::new(0, intervals(&[(2, 3), (2, 3)])),
            ],
        )
        .unwrap();
        assert!(matches!(
            verify_theorem(&not_colorful),
            Err(Error::ColorfulViolation { .. })
        ));
    }

    #[test]
    fn tuples_are_lexicographic() {
        assert_eq!(
            tuples(&[2, 3]),
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
    }
}
