//! Convex bodies (V-polytopes and affine flats) and exact predicates on them.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{
    int, null_space, solve_linear, FeasibilityProblem, QMatrix, QVector, Rational, Relation,
};

/// The convex hull of a nonempty list of generators. Redundant generators are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    generators: Vec<QVector>,
}

impl VPolytope {
    pub fn new(generators: Vec<QVector>) -> Result<Self> {
        let dim = generators
            .first()
            .map(QVector::dim)
            .ok_or_else(|| Error::Malformed("polytope needs at least one generator".into()))?;
        if dim == 0 || generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::Malformed(
                "polytope generators differ in dimension".into(),
            ));
        }
        Ok(VPolytope { generators })
    }

    pub fn point(p: QVector) -> Self {
        VPolytope {
            generators: vec![p],
        }
    }

    pub fn generators(&self) -> &[QVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }
}

/// `base + span(directions)` with linearly independent directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFlat {
    base: QVector,
    directions: Vec<QVector>,
}

impl AffineFlat {
    pub fn new(base: QVector, directions: Vec<QVector>) -> Result<Self> {
        if base.dim() == 0 {
            return Err(Error::Malformed("flat in zero-dimensional space".into()));
        }
        if directions.iter().any(|d| d.dim() != base.dim()) {
            return Err(Error::Malformed(
                "flat directions differ in dimension".into(),
            ));
        }
        if !directions.is_empty()
            && QMatrix::from_rows(directions.clone())?.rank() != directions.len()
        {
            return Err(Error::Malformed(
                "flat directions are linearly dependent".into(),
            ));
        }
        Ok(AffineFlat { base, directions })
    }

    pub fn base(&self) -> &QVector {
        &self.base
    }

    pub fn directions(&self) -> &[QVector] {
        &self.directions
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    /// Dimension of the flat itself.
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Rows `N` and right-hand side `c` with `flat = {x : N x = c}`.
    pub fn equations(&self) -> (Vec<QVector>, Vec<Rational>) {
        let normals = null_space(&self.directions, self.ambient_dim());
        let rhs = normals.iter().map(|n| n.dot(&self.base)).collect();
        (normals, rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexBody {
    Polytope(VPolytope),
    Flat(AffineFlat),
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dim(),
            ConvexBody::Flat(f) => f.ambient_dim(),
        }
    }

    pub fn as_polytope(&self) -> Option<&VPolytope> {
        match self {
            ConvexBody::Polytope(p) => Some(p),
            ConvexBody::Flat(_) => None,
        }
    }
}

impl From<VPolytope> for ConvexBody {
    fn from(p: VPolytope) -> Self {
        ConvexBody::Polytope(p)
    }
}

impl From<AffineFlat> for ConvexBody {
    fn from(f: AffineFlat) -> Self {
        ConvexBody::Flat(f)
    }
}

/// A point in the intersection of all bodies, or `None` if it is empty.
///
/// One feasibility system: a convex-combination weight block per polytope and free
/// parameters per flat. The common point is expressed through the first polytope's
/// weights when there is one, and through free ambient coordinates otherwise.
pub fn common_point(bodies: &[ConvexBody]) -> Result<Option<QVector>> {
    let dim = bodies
        .first()
        .map(ConvexBody::dim)
        .ok_or_else(|| Error::Malformed("no bodies given".into()))?;
    if let Some(i) = bodies.iter().position(|b| b.dim() != dim) {
        return Err(Error::Malformed(format!(
            "body {i} lives in dimension {}, expected {dim}",
            bodies[i].dim()
        )));
    }
    let mut lp = FeasibilityProblem::new();
    // `point[j]` is the linear expression (terms, constant) for coordinate j of x.
    let pivot_body = bodies.iter().position(|b| b.as_polytope().is_some());
    let point: Vec<(Vec<(usize, Rational)>, Rational)> = match pivot_body {
        Some(i) => {
            let p = bodies[i].as_polytope().expect("polytope");
            let weights = convex_weights(&mut lp, p);
            (0..dim)
                .map(|j| {
                    let terms = weights
                        .iter()
                        .zip(p.generators())
                        .filter(|(_, g)| !g[j].is_zero())
                        .map(|(&w, g)| (w, g[j].clone()))
                        .collect();
                    (terms, Rational::zero())
                })
                .collect()
        }
        None => (0..dim)
            .map(|_| (vec![(lp.add_free(), int(1))], Rational::zero()))
            .collect(),
    };
    for (idx, body) in bodies.iter().enumerate() {
        if Some(idx) == pivot_body {
            continue;
        }
        // x - (body parametrisation) = 0, coordinate by coordinate.
        match body {
            ConvexBody::Polytope(p) => {
                let weights = convex_weights(&mut lp, p);
                for (j, (x_terms, _)) in point.iter().enumerate() {
                    let mut terms = x_terms.clone();
                    for (&w, g) in weights.iter().zip(p.generators()) {
                        if !g[j].is_zero() {
                            terms.push((w, -&g[j]));
                        }
                    }
                    lp.add_row(terms, Relation::Eq, int(0));
                }
            }
            ConvexBody::Flat(f) => {
                let params: Vec<usize> = f.directions().iter().map(|_| lp.add_free()).collect();
                for (j, (x_terms, _)) in point.iter().enumerate() {
                    let mut terms = x_terms.clone();
                    for (&t, d) in params.iter().zip(f.directions()) {
                        if !d[j].is_zero() {
                            terms.push((t, -&d[j]));
                        }
                    }
                    lp.add_row(terms, Relation::Eq, f.base()[j].clone());
                }
            }
        }
    }
    Ok(lp.solve_checked()?.map(|sol| {
        QVector::new(
            point
                .iter()
                .map(|(terms, c)| {
                    let mut v = c.clone();
                    for (var, coeff) in terms {
                        v += coeff * &sol[*var];
                    }
                    v
                })
                .collect(),
        )
    }))
}

fn convex_weights(lp: &mut FeasibilityProblem, p: &VPolytope) -> Vec<usize> {
    let weights: Vec<usize> = p.generators().iter().map(|_| lp.add_nonneg()).collect();
    lp.add_row(
        weights.iter().map(|&w| (w, int(1))).collect(),
        Relation::Eq,
        int(1),
    );
    weights
}

/// Pools generators: `conv(⋃ conv(G_i)) = conv(⋃ G_i)`.
pub fn hull_union(bodies: &[&ConvexBody]) -> Result<VPolytope> {
    let mut generators = Vec::new();
    for body in bodies {
        match body {
            ConvexBody::Polytope(p) => generators.extend(p.generators().iter().cloned()),
            ConvexBody::Flat(_) => {
                return Err(Error::UnsupportedRepresentation(
                    "hull of a union is only formed for V-polytopes; truncate flats first".into(),
                ))
            }
        }
    }
    VPolytope::new(generators)
}

/// Affine span: base is the first point, directions a maximal independent subset of
/// the differences to it.
pub fn affine_span(points: &[QVector]) -> Result<AffineFlat> {
    let base = points
        .first()
        .cloned()
        .ok_or_else(|| Error::Malformed("affine span of no points".into()))?;
    let mut directions: Vec<QVector> = Vec::new();
    for p in &points[1..] {
        if p.dim() != base.dim() {
            return Err(Error::Malformed("points differ in dimension".into()));
        }
        let d = p - &base;
        if d.is_zero() {
            continue;
        }
        directions.push(d);
        if QMatrix::from_rows(directions.clone())?.rank() < directions.len() {
            directions.pop();
        }
    }
    AffineFlat::new(base, directions)
}

/// The point of `flat` closest to `x`, via the Gram normal equations.
pub fn orthogonal_projection(flat: &AffineFlat, x: &QVector) -> Result<QVector> {
    if x.dim() != flat.ambient_dim() {
        return Err(Error::Malformed(
            "point and flat differ in dimension".into(),
        ));
    }
    let dirs = flat.directions();
    if dirs.is_empty() {
        return Ok(flat.base().clone());
    }
    let gram = QMatrix::from_rows(
        dirs.iter()
            .map(|a| QVector::new(dirs.iter().map(|b| a.dot(b)).collect()))
            .collect(),
    )?;
    let offset = x - flat.base();
    let rhs = QVector::new(dirs.iter().map(|d| d.dot(&offset)).collect());
    let coeffs = solve_linear(&gram, &rhs)?
        .ok_or_else(|| Error::Internal("Gram matrix of independent directions is singular".into()))?
        .particular;
    let mut p = flat.base().clone();
    for (c, d) in coeffs.iter().zip(dirs) {
        p.add_scaled(c, d);
    }
    Ok(p)
}

pub fn contains(body: &ConvexBody, x: &QVector) -> Result<bool> {
    if x.dim() != body.dim() {
        return Err(Error::Malformed(
            "point and body differ in dimension".into(),
        ));
    }
    match body {
        ConvexBody::Polytope(p) => {
            let mut lp = FeasibilityProblem::new();
            let weights: Vec<usize> = p.generators().iter().map(|_| lp.add_nonneg()).collect();
            for j in 0..x.dim() {
                let terms = weights
                    .iter()
                    .zip(p.generators())
                    .filter(|(_, g)| !g[j].is_zero())
                    .map(|(&w, g)| (w, g[j].clone()))
                    .collect();
                lp.add_row(terms, Relation::Eq, x[j].clone());
            }
            lp.add_row(
                weights.iter().map(|&w| (w, int(1))).collect(),
                Relation::Eq,
                int(1),
            );
            Ok(lp.solve_checked()?.is_some())
        }
        ConvexBody::Flat(f) => {
            if f.directions().is_empty() {
                return Ok(f.base() == x);
            }
            let a = QMatrix::from_rows(f.directions().to_vec())?.transpose();
            Ok(solve_linear(&a, &(x - f.base()))?.is_some())
        }
    }
}
