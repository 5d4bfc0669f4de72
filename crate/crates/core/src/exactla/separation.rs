use num_traits::Signed;

use super::rational::{int, Rational};
use super::simplex::{FeasibilityProblem, Relation};
use super::vector::QVector;
use crate::error::{Error, Result};

/// An affine functional `x ↦ normal · x - offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: QVector,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn side(&self, x: &QVector) -> Rational {
        self.normal.dot(x) - &self.offset
    }
}

fn common_dim(sets: &[&[QVector]]) -> Result<usize> {
    let mut dim = None;
    for set in sets {
        if set.is_empty() {
            return Err(Error::Malformed("empty point set".into()));
        }
        for p in set.iter() {
            match dim {
                None => dim = Some(p.dim()),
                Some(d) if d != p.dim() => {
                    return Err(Error::Malformed(format!(
                        "mixed dimensions {d} and {}",
                        p.dim()
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(dim.expect("at least one point"))
}

/// Finds `(h, b)` with `h·p < b` for every `p ∈ p_side` and `h·q > b` for every
/// `q ∈ q_side`, via the unit-margin system `h·p ≤ b - 1`, `h·q ≥ b + 1`.
///
/// Returns `None` exactly when `conv(p_side) ∩ conv(q_side) ≠ ∅`.
pub fn strict_separation(p_side: &[QVector], q_side: &[QVector]) -> Result<Option<Hyperplane>> {
    let dim = common_dim(&[p_side, q_side])?;
    let mut lp = FeasibilityProblem::new();
    let h: Vec<usize> = (0..dim).map(|_| lp.add_free()).collect();
    let b = lp.add_free();
    for p in p_side {
        let mut terms: Vec<(usize, Rational)> = h
            .iter()
            .zip(p.iter())
            .map(|(&v, a)| (v, a.clone()))
            .collect();
        terms.push((b, int(-1)));
        lp.add_row(terms, Relation::Le, int(-1));
    }
    for q in q_side {
        let mut terms: Vec<(usize, Rational)> =
            h.iter().zip(q.iter()).map(|(&v, a)| (v, -a)).collect();
        terms.push((b, int(1)));
        lp.add_row(terms, Relation::Le, int(-1));
    }
    let Some(sol) = lp.solve_checked()? else {
        return Ok(None);
    };
    let plane = Hyperplane {
        normal: QVector::new(h.iter().map(|&v| sol[v].clone()).collect()),
        offset: sol[b].clone(),
    };
    let ok = p_side.iter().all(|p| plane.side(p).is_negative())
        && q_side.iter().all(|q| plane.side(q).is_positive());
    if !ok {
        return Err(Error::Internal("separator fails substitution".into()));
    }
    Ok(Some(plane))
}

/// A point in `conv(p_side) ∩ conv(q_side)`, or `None` if the hulls are disjoint.
pub fn hull_intersection(p_side: &[QVector], q_side: &[QVector]) -> Result<Option<QVector>> {
    let dim = common_dim(&[p_side, q_side])?;
    let mut lp = FeasibilityProblem::new();
    let lp_vars: Vec<usize> = p_side.iter().map(|_| lp.add_nonneg()).collect();
    let lq_vars: Vec<usize> = q_side.iter().map(|_| lp.add_nonneg()).collect();
    for j in 0..dim {
        let mut terms = Vec::new();
        for (&v, p) in lp_vars.iter().zip(p_side) {
            terms.push((v, p[j].clone()));
        }
        for (&v, q) in lq_vars.iter().zip(q_side) {
            terms.push((v, -&q[j]));
        }
        lp.add_row(terms, Relation::Eq, int(0));
    }
    lp.add_row(
        lp_vars.iter().map(|&v| (v, int(1))).collect(),
        Relation::Eq,
        int(1),
    );
    lp.add_row(
        lq_vars.iter().map(|&v| (v, int(1))).collect(),
        Relation::Eq,
        int(1),
    );
    let Some(sol) = lp.solve_checked()? else {
        return Ok(None);
    };
    let mut x = QVector::zeros(dim);
    for (&v, p) in lp_vars.iter().zip(p_side) {
        x.add_scaled(&sol[v], p);
    }
    Ok(Some(x))
}

/// Given `w·v_i < b_i < u·v_i` for every `i`, returns `v = u - w`, which satisfies
/// `v·v_i > 0` for every `i` since `(u - w)·v_i = (u·v_i - b_i) + (b_i - w·v_i)`.
pub fn positive_functional(
    normals: &[QVector],
    offsets: &[Rational],
    u: &QVector,
    w: &QVector,
) -> Result<QVector> {
    if normals.len() != offsets.len() {
        return Err(Error::Malformed(format!(
            "{} normals but {} offsets",
            normals.len(),
            offsets.len()
        )));
    }
    if u.dim() != w.dim() {
        return Err(Error::Malformed("u and w differ in dimension".into()));
    }
    for (i, (n, b)) in normals.iter().zip(offsets).enumerate() {
        if n.dim() != u.dim() {
            return Err(Error::Malformed(format!("normal {i} has wrong dimension")));
        }
        let lo = w.dot(n);
        let hi = u.dot(n);
        if !(lo < *b && *b < hi) {
            return Err(Error::Precondition {
                index: i,
                detail: format!("need w·v < b < u·v, got {lo} < {b} < {hi}"),
            });
        }
    }
    let v = u - w;
    if let Some(i) = normals.iter().position(|n| !v.dot(n).is_positive()) {
        return Err(Error::Internal(format!("u - w not positive on normal {i}")));
    }
    Ok(v)
}

/// Whether the origin lies in `conv(vectors)`: decides `Σ μ_i v_i = 0, μ ≥ 0, Σ μ_i = 1`.
pub fn origin_in_hull(vectors: &[QVector]) -> Result<bool> {
    let zero = QVector::zeros(common_dim(&[vectors])?);
    Ok(hull_intersection(vectors, std::slice::from_ref(&zero))?.is_some())
}
