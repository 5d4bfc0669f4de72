//! Instance generators.
//!
//! * [`gen_counterexample`] builds families in `R^(n+m)` that intersect colorfully yet
//!   have no `k_i`-transversal: members of family `i` are fibers of the orthogonal
//!   projection onto the affine span of a generic point set `X_i`.
//! * [`gen_planted`] builds instances where family 0 has a known transversal.
//! * [`gen_colorful_random`] builds colorful instances at dimension `n + m - 1`.
//!
//! All generators are deterministic in their seed.

use std::fmt;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::{AffineFlat, ConvexBody, VPolytope};
use crate::error::{Error, Result};
use crate::exactla::{frac, int, null_space, solve_linear, QMatrix, QVector, Rational};
use crate::transversal::{check_colorful, k_transversal, tuples, Family, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    Flats,
    Truncated,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Flats => "flats",
            Representation::Truncated => "truncated",
        })
    }
}

impl std::str::FromStr for Representation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flats" => Ok(Representation::Flats),
            "truncated" => Ok(Representation::Truncated),
            other => Err(Error::Malformed(format!(
                "unknown representation `{other}`"
            ))),
        }
    }
}

/// One named pass/fail line of a certificate ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl NamedCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        NamedCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for NamedCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{} {} {}", self.name, verdict, self.detail)
    }
}

/// Rank evidence that a point set `X = X_1 ∪ … ∪ X_n` is generic enough for the
/// counterexample construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPositionCertificate {
    pub point_set: Vec<QVector>,
    /// Indices into `point_set`, one block per family.
    pub parts: Vec<Vec<usize>>,
    pub checks: Vec<NamedCheck>,
}

impl GeneralPositionCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn part_points(&self, i: usize) -> Vec<QVector> {
        self.parts[i]
            .iter()
            .map(|&j| self.point_set[j].clone())
            .collect()
    }

    pub fn ledger(&self) -> String {
        self.checks.iter().map(|c| format!("{c}\n")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleInstance {
    pub instance: Instance,
    pub representation: Representation,
    /// The unique common point of every member tuple, in lexicographic tuple order.
    pub tuple_points: Vec<(Vec<usize>, QVector)>,
    pub certificate: GeneralPositionCertificate,
}

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    /// Side length of the integer sampling box centred on the origin.
    pub box_side: i64,
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            box_side: 1000,
            max_attempts: 64,
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_int_point(rng: &mut ChaCha8Rng, dim: usize, half: i64) -> QVector {
    QVector::new((0..dim).map(|_| int(rng.gen_range(-half..=half))).collect())
}

/// All `size`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

fn homogenize(p: &QVector) -> QVector {
    let mut v = p.entries().to_vec();
    v.push(int(1));
    QVector::new(v)
}

fn span_directions(points: &[QVector]) -> Vec<QVector> {
    points[1..].iter().map(|p| p - &points[0]).collect()
}

fn rank_of(rows: &[QVector]) -> usize {
    if rows.is_empty() {
        0
    } else {
        QMatrix::from_rows(rows.to_vec())
            .expect("rows share a dimension")
            .rank()
    }
}

/// Runs every general-position rank check on a partitioned point set in `R^(n+m)`.
pub fn certify_general_position(
    ks: &[usize],
    point_set: Vec<QVector>,
) -> Result<GeneralPositionCertificate> {
    let n = ks.len();
    let m: usize = ks.iter().sum();
    let dim = n + m;
    if n == 0 {
        return Err(Error::Malformed("at least one family is required".into()));
    }
    if point_set.len() != 2 * n + m || point_set.iter().any(|p| p.dim() != dim) {
        return Err(Error::Malformed(format!(
            "need {} points in dimension {dim}",
            2 * n + m
        )));
    }
    let mut parts = Vec::with_capacity(n);
    let mut next = 0;
    for &k in ks {
        parts.push((next..next + k + 2).collect::<Vec<_>>());
        next += k + 2;
    }

    let mut checks = Vec::new();
    let homog: Vec<QVector> = point_set.iter().map(homogenize).collect();
    let subsets = combinations(homog.len(), dim);
    let deficient = subsets
        .iter()
        .find(|s| rank_of(&s.iter().map(|&i| homog[i].clone()).collect::<Vec<_>>()) < dim);
    checks.push(NamedCheck::new(
        "hyperplane-spans",
        deficient.is_none(),
        match deficient {
            None => format!(
                "all {} subsets of size {dim} are affinely independent",
                subsets.len()
            ),
            Some(s) => format!("subset {s:?} is affinely dependent"),
        },
    ));

    let mut all_dirs = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let pts: Vec<QVector> = part.iter().map(|&j| point_set[j].clone()).collect();
        let dirs = span_directions(&pts);
        let r = rank_of(&dirs);
        checks.push(NamedCheck::new(
            format!("affine-rank[{}]", i + 1),
            r == ks[i] + 1,
            format!("affine dimension {r}, expected {}", ks[i] + 1),
        ));
        all_dirs.extend(dirs);
    }
    let r = rank_of(&all_dirs);
    checks.push(NamedCheck::new(
        "fiber-systems-unique",
        r == dim,
        format!("combined span directions have rank {r} of {dim}"),
    ));
    Ok(GeneralPositionCertificate {
        point_set,
        parts,
        checks,
    })
}

/// Builds the counterexample from an explicit point set (first `k_1 + 2` points form
/// `X_1`, and so on).
pub fn counterexample_from_points(
    ks: &[usize],
    point_set: Vec<QVector>,
    representation: Representation,
) -> Result<CounterexampleInstance> {
    let certificate = certify_general_position(ks, point_set)?;
    if let Some(c) = certificate.checks.iter().find(|c| !c.passed) {
        return Err(Error::CounterexampleInvalid {
            check: c.name.clone(),
            detail: c.detail.clone(),
        });
    }
    let dim = ks.len() + ks.iter().sum::<usize>();

    // Fiber of π_i through x: x + (span directions of X_i)^⊥.
    let part_dirs: Vec<Vec<QVector>> = (0..ks.len())
        .map(|i| span_directions(&certificate.part_points(i)))
        .collect();
    let mut flat_families = Vec::with_capacity(ks.len());
    for (i, &k) in ks.iter().enumerate() {
        let normal_dirs = null_space(&part_dirs[i], dim);
        let bodies = certificate
            .part_points(i)
            .into_iter()
            .map(|x| AffineFlat::new(x, normal_dirs.clone()).map(ConvexBody::from))
            .collect::<Result<Vec<_>>>()?;
        flat_families.push(Family::new(k, bodies));
    }

    let system = QMatrix::from_rows(part_dirs.iter().flatten().cloned().collect())?;
    let sizes: Vec<usize> = ks.iter().map(|k| k + 2).collect();
    let mut tuple_points = Vec::new();
    for t in tuples(&sizes) {
        let rhs: Vec<Rational> = t
            .iter()
            .enumerate()
            .flat_map(|(i, &j)| {
                let x = &certificate.point_set[certificate.parts[i][j]];
                part_dirs[i].iter().map(move |d| d.dot(x))
            })
            .collect();
        let sol = solve_linear(&system, &QVector::new(rhs))?.ok_or_else(|| {
            Error::CounterexampleInvalid {
                check: "fiber-systems-unique".into(),
                detail: "tuple system is inconsistent".into(),
            }
        })?;
        tuple_points.push((t, sol.particular));
    }

    let families = match representation {
        Representation::Flats => flat_families,
        Representation::Truncated => truncated_families(ks, &tuple_points)?,
    };
    Ok(CounterexampleInstance {
        instance: Instance::new(dim, families)?,
        representation,
        tuple_points,
        certificate,
    })
}

/// Member `j` of family `i` becomes the hull of the tuple points whose tuple picks `j`
/// in coordinate `i`.
fn truncated_families(ks: &[usize], tuple_points: &[(Vec<usize>, QVector)]) -> Result<Vec<Family>> {
    ks.iter()
        .enumerate()
        .map(|(i, &k)| {
            let bodies = (0..k + 2)
                .map(|j| {
                    let gens = tuple_points
                        .iter()
                        .filter(|(t, _)| t[i] == j)
                        .map(|(_, p)| p.clone())
                        .collect();
                    VPolytope::new(gens).map(ConvexBody::from)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Family::new(k, bodies))
        })
        .collect()
}

impl CounterexampleInstance {
    /// The same counterexample with flats replaced by hulls of their tuple points.
    pub fn truncated(&self) -> Result<CounterexampleInstance> {
        if self.representation == Representation::Truncated {
            return Ok(self.clone());
        }
        let ks: Vec<usize> = self.instance.families.iter().map(|f| f.k).collect();
        Ok(CounterexampleInstance {
            instance: Instance::new(
                self.instance.dim,
                truncated_families(&ks, &self.tuple_points)?,
            )?,
            representation: Representation::Truncated,
            tuple_points: self.tuple_points.clone(),
            certificate: self.certificate.clone(),
        })
    }
}

pub fn gen_counterexample(
    ks: &[usize],
    seed: u64,
    representation: Representation,
) -> Result<CounterexampleInstance> {
    gen_counterexample_with(ks, seed, representation, &GeneratorConfig::default())
}

pub fn gen_counterexample_with(
    ks: &[usize],
    seed: u64,
    representation: Representation,
    config: &GeneratorConfig,
) -> Result<CounterexampleInstance> {
    if ks.is_empty() {
        return Err(Error::Malformed("at least one family is required".into()));
    }
    let n = ks.len();
    let m: usize = ks.iter().sum();
    let mut rng = rng_for(seed);
    let half = (config.box_side / 2).max(1);
    for _ in 0..config.max_attempts {
        let points: Vec<QVector> = (0..2 * n + m)
            .map(|_| random_int_point(&mut rng, n + m, half))
            .collect();
        if certify_general_position(ks, points.clone())?.passed() {
            return counterexample_from_points(ks, points, representation);
        }
    }
    Err(Error::RetryExhausted {
        attempts: config.max_attempts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub checks: Vec<NamedCheck>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn ledger(&self) -> String {
        self.checks.iter().map(|c| format!("{c}\n")).collect()
    }
}

/// Re-establishes every property the construction promises:
/// 1. colorful intersection (and agreement with the recorded tuple points),
/// 2. each `X_i` has affine dimension `k_i + 1`, so no `k_i`-flat projects onto a set
///    containing it,
/// 3. on the truncated representation, every partition of every family is strictly
///    separated, i.e. no family has its transversal.
pub fn verify_counterexample(ce: &CounterexampleInstance) -> Result<CounterexampleReport> {
    let report = counterexample_checks(ce)?;
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::CounterexampleInvalid {
            check: c.name.clone(),
            detail: c.detail.clone(),
        });
    }
    Ok(report)
}

/// Like [`verify_counterexample`] but returns failing checks in the report instead of
/// as an error.
pub fn counterexample_checks(ce: &CounterexampleInstance) -> Result<CounterexampleReport> {
    let inst = &ce.instance;
    let ks: Vec<usize> = inst.families.iter().map(|f| f.k).collect();
    let mut checks = Vec::new();

    let expected_dim = inst.n() + inst.m();
    let sizes_ok = inst.families.iter().all(|f| f.len() == f.k + 2);
    checks.push(NamedCheck::new(
        "shape",
        inst.dim == expected_dim && sizes_ok,
        format!(
            "dimension {} (expected n+m = {expected_dim}), family sizes k+2: {sizes_ok}",
            inst.dim
        ),
    ));

    let colorful = check_colorful(inst)?;
    let detail = match &colorful.failing_tuple {
        None => format!("{} tuples intersect", colorful.witnesses.len()),
        Some(t) => format!(
            "tuple {} has empty intersection",
            crate::error::display_tuple(t)
        ),
    };
    checks.push(NamedCheck::new("colorful", colorful.holds, detail));

    let mut on_members = true;
    for (t, p) in &ce.tuple_points {
        for (i, &j) in t.iter().enumerate() {
            let member = inst.families.get(i).and_then(|f| f.bodies.get(j));
            match member {
                Some(b) if crate::convex::contains(b, p)? => {}
                _ => on_members = false,
            }
        }
    }
    checks.push(NamedCheck::new(
        "tuple-points",
        on_members,
        format!(
            "{} recorded tuple points lie on their members",
            ce.tuple_points.len()
        ),
    ));

    for (i, k) in ks.iter().enumerate() {
        let passed = i < ce.certificate.parts.len() && {
            let dirs = span_directions(&ce.certificate.part_points(i));
            rank_of(&dirs) == k + 1
        };
        checks.push(NamedCheck::new(
            format!("affine-rank[{}]", i + 1),
            passed,
            format!("X_{} must have affine dimension {}", i + 1, k + 1),
        ));
    }

    let truncated = match ce.representation {
        Representation::Truncated => inst.clone(),
        Representation::Flats => ce.truncated()?.instance,
    };
    for (i, fam) in truncated.families.iter().enumerate() {
        let absent = fam.len() == fam.k + 2 && k_transversal(fam)?.is_none();
        checks.push(NamedCheck::new(
            format!("no-transversal[{}]", i + 1),
            absent,
            format!(
                "all {} partitions strictly separated",
                (1usize << (fam.len().max(1) - 1)) - 1
            ),
        ));
    }
    Ok(CounterexampleReport { checks })
}

fn sample_in_box(rng: &mut ChaCha8Rng, anchors: &[QVector]) -> QVector {
    // Uniform half-integer grid on the anchors' bounding box scaled by 2 about its centre.
    let dim = anchors[0].dim();
    let coords = (0..dim)
        .map(|j| {
            let lo = anchors
                .iter()
                .map(|a| a[j].clone())
                .min()
                .expect("nonempty");
            let hi = anchors
                .iter()
                .map(|a| a[j].clone())
                .max()
                .expect("nonempty");
            // anchors are integral here
            let lo = lo.to_integer().to_i64().expect("small coordinates");
            let hi = hi.to_integer().to_i64().expect("small coordinates");
            let (a, b) = (3 * lo - hi, 3 * hi - lo);
            frac(rng.gen_range(a..=b), 2)
        })
        .collect();
    QVector::new(coords)
}

const ANCHOR_HALF_SIDE: i64 = 50;

/// Random colorful instance in dimension `n + m - 1`: one anchor point per member
/// tuple, each member the hull of the anchors of the tuples that select it, plus up to
/// two noise generators.
pub fn gen_colorful_random(ks: &[usize], seed: u64) -> Result<Instance> {
    let n = ks.len();
    let m: usize = ks.iter().sum();
    if n == 0 || n + m < 2 {
        return Err(Error::Malformed(format!(
            "ambient dimension n + m - 1 = {} must be positive",
            (n + m).saturating_sub(1)
        )));
    }
    let dim = n + m - 1;
    let mut rng = rng_for(seed);
    let sizes: Vec<usize> = ks.iter().map(|k| k + 2).collect();
    let anchors: Vec<(Vec<usize>, QVector)> = tuples(&sizes)
        .into_iter()
        .map(|t| {
            let p = random_int_point(&mut rng, dim, ANCHOR_HALF_SIDE);
            (t, p)
        })
        .collect();
    let families = build_anchor_families(&mut rng, ks, &anchors, |_, _| Vec::new());
    let inst = Instance::new(dim, families)?;
    if !check_colorful(&inst)?.holds {
        return Err(Error::Internal(
            "anchored instance failed the colorful check".into(),
        ));
    }
    Ok(inst)
}

fn build_anchor_families(
    rng: &mut ChaCha8Rng,
    ks: &[usize],
    anchors: &[(Vec<usize>, QVector)],
    mut extra: impl FnMut(usize, usize) -> Vec<QVector>,
) -> Vec<Family> {
    ks.iter()
        .enumerate()
        .map(|(i, &k)| {
            let bodies = (0..k + 2)
                .map(|j| {
                    let mut gens = extra(i, j);
                    gens.extend(
                        anchors
                            .iter()
                            .filter(|(t, _)| t[i] == j)
                            .map(|(_, p)| p.clone()),
                    );
                    let integral = gens.len();
                    let noise = rng.gen_range(0..=2);
                    for _ in 0..noise {
                        let p = sample_in_box(rng, &gens[..integral]);
                        gens.push(p);
                    }
                    VPolytope::new(gens).expect("nonempty generators").into()
                })
                .collect();
            Family::new(k, bodies)
        })
        .collect()
}

/// Instance in which family 0 has a planted `k_0`-transversal: a random rational flat of
/// dimension `k_0` carries one point of each member. All families also share one anchor
/// point per member tuple, so the colorful property holds.
pub fn gen_planted(dim: usize, ks: &[usize], seed: u64) -> Result<Instance> {
    if ks.is_empty() {
        return Err(Error::Malformed("at least one family is required".into()));
    }
    let kmax = *ks.iter().max().expect("nonempty");
    if dim == 0 || dim < kmax {
        return Err(Error::Malformed(format!(
            "dimension {dim} is below the largest target {kmax}"
        )));
    }
    let mut rng = rng_for(seed);
    let k0 = ks[0];
    let base = random_int_point(&mut rng, dim, ANCHOR_HALF_SIDE);
    let directions = loop {
        let dirs: Vec<QVector> = (0..k0)
            .map(|_| random_int_point(&mut rng, dim, 10))
            .collect();
        if rank_of(&dirs) == k0 {
            break dirs;
        }
    };
    let planted: Vec<QVector> = (0..k0 + 2)
        .map(|_| {
            let mut p = base.clone();
            for d in &directions {
                p.add_scaled(&int(rng.gen_range(-5..=5)), d);
            }
            p
        })
        .collect();
    let sizes: Vec<usize> = ks.iter().map(|k| k + 2).collect();
    let anchors: Vec<(Vec<usize>, QVector)> = tuples(&sizes)
        .into_iter()
        .map(|t| {
            let p = random_int_point(&mut rng, dim, ANCHOR_HALF_SIDE);
            (t, p)
        })
        .collect();
    let families = build_anchor_families(&mut rng, ks, &anchors, |i, j| {
        if i == 0 {
            vec![planted[j].clone()]
        } else {
            Vec::new()
        }
    });
    Instance::new(dim, families)
}

/// Whether family 0 of a [`gen_planted`] instance admits its transversal.
pub fn planted_family_has_transversal(inst: &Instance) -> Result<bool> {
    Ok(k_transversal(&inst.families[0])?.is_some())
}
