//! Phase-one primal simplex over exact rationals.
//!
//! Only feasibility is decided. Pivoting follows Bland's rule (lowest-index entering
//! column, lowest-index leaving basic variable among ratio ties), so the method
//! terminates on degenerate systems without any perturbation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use super::vector::QVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    /// Strict `<`. Decided with unit margin (`<= rhs - 1`), which is exact for the
    /// positively scalable systems this crate builds.
    Lt,
}

/// `normal · x  (relation)  rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub normal: QVector,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(normal: QVector, relation: Relation, rhs: Rational) -> Self {
        LinearConstraint {
            normal,
            relation,
            rhs,
        }
    }

    pub fn eq(normal: QVector, rhs: Rational) -> Self {
        Self::new(normal, Relation::Eq, rhs)
    }

    pub fn le(normal: QVector, rhs: Rational) -> Self {
        Self::new(normal, Relation::Le, rhs)
    }

    /// `normal · x >= rhs`, stored as `-normal · x <= -rhs`.
    pub fn ge(normal: QVector, rhs: Rational) -> Self {
        Self::new(-&normal, Relation::Le, -rhs)
    }

    pub fn lt(normal: QVector, rhs: Rational) -> Self {
        Self::new(normal, Relation::Lt, rhs)
    }

    pub fn is_satisfied_by(&self, x: &QVector) -> bool {
        let lhs = self.normal.dot(x);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
        }
    }
}

/// A feasibility system over a mix of free and sign-constrained variables.
#[derive(Clone, Debug, Default)]
pub struct FeasibilityProblem {
    nonneg: Vec<bool>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
struct Row {
    terms: Vec<(usize, Rational)>,
    relation: Relation,
    rhs: Rational,
}

impl FeasibilityProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_free(&mut self) -> usize {
        self.nonneg.push(false);
        self.nonneg.len() - 1
    }

    pub fn add_nonneg(&mut self) -> usize {
        self.nonneg.push(true);
        self.nonneg.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.nonneg.len()
    }

    /// Adds `Σ coeff·x_var (relation) rhs`. Repeated variables are summed.
    pub fn add_row(&mut self, terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        debug_assert!(terms.iter().all(|(v, _)| *v < self.nonneg.len()));
        self.rows.push(Row {
            terms,
            relation,
            rhs,
        });
    }

    /// Returns a point satisfying every row, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<QVector> {
        let n = self.nonneg.len();
        // Column layout: one column per variable, a second (negated) column for each
        // free variable, then one slack per inequality, then artificials.
        let mut neg_col = vec![usize::MAX; n];
        let mut ncols = n;
        for (v, col) in neg_col.iter_mut().enumerate() {
            if !self.nonneg[v] {
                *col = ncols;
                ncols += 1;
            }
        }
        let mut slack_col = vec![usize::MAX; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            if row.relation != Relation::Eq {
                slack_col[i] = ncols;
                ncols += 1;
            }
        }

        // Each row is scaled to integers. A slack can start in the basis only when its
        // row needs no scaling, so that every basic column holds the common denominator
        // (1 initially); other rows get an artificial.
        let m = self.rows.len();
        let mut rows: Vec<(Vec<BigInt>, BigInt)> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = vec![usize::MAX; m];
        let mut needs_artificial = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut dense = vec![Rational::zero(); ncols];
            for (v, c) in &row.terms {
                dense[*v] += c;
                if neg_col[*v] != usize::MAX {
                    dense[neg_col[*v]] -= c;
                }
            }
            let mut rhs = row.rhs.clone();
            if row.relation == Relation::Lt {
                rhs -= int(1);
            }
            if slack_col[i] != usize::MAX {
                dense[slack_col[i]] = int(1);
            }
            if rhs.is_negative() {
                for a in dense.iter_mut() {
                    *a = -&*a;
                }
                rhs = -rhs;
            }
            let scale = dense
                .iter()
                .fold(rhs.denom().clone(), |acc, a| acc.lcm(a.denom()));
            let scale_q = Rational::from_integer(scale.clone());
            let to_int = |a: &Rational| (a * &scale_q).to_integer();
            let int_row: Vec<BigInt> = dense.iter().map(to_int).collect();
            if slack_col[i] != usize::MAX && scale.is_one() && dense[slack_col[i]].is_positive() {
                basis[i] = slack_col[i];
            } else {
                needs_artificial.push(i);
            }
            rows.push((int_row, to_int(&rhs)));
        }
        let total = ncols + needs_artificial.len();
        for (k, &i) in needs_artificial.iter().enumerate() {
            basis[i] = ncols + k;
        }
        let mut tableau: Vec<Vec<BigInt>> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (mut row, rhs))| {
                row.resize(total, BigInt::zero());
                row[basis[i]] = BigInt::one();
                row.push(rhs);
                row
            })
            .collect();

        // Phase-one objective: minimise the sum of artificials. `cost` holds the reduced
        // costs and, in its last slot, minus the objective value (all over `denom`).
        let mut cost = vec![BigInt::zero(); total + 1];
        for &i in &needs_artificial {
            for j in 0..ncols {
                if !tableau[i][j].is_zero() {
                    cost[j] -= &tableau[i][j];
                }
            }
            cost[total] -= &tableau[i][total];
        }
        let mut denom = BigInt::one();

        loop {
            let d_sign = denom.sign();
            // Bland: lowest-index column with negative reduced cost.
            let Some(enter) = (0..total).find(|&j| !cost[j].is_zero() && cost[j].sign() != d_sign)
            else {
                break;
            };
            // Ratio test over rows whose true entry (entry / denom) is positive; all such
            // entries share the sign of denom, so cross-multiplication preserves order.
            let mut leave: Option<usize> = None;
            for i in 0..m {
                let a = &tableau[i][enter];
                if a.is_zero() || a.sign() != d_sign {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let lhs = &tableau[i][total] * &tableau[l][enter];
                        let rhs = &tableau[l][total] * a;
                        match lhs.cmp(&rhs) {
                            std::cmp::Ordering::Less => Some(i),
                            std::cmp::Ordering::Equal if basis[i] < basis[l] => Some(i),
                            _ => Some(l),
                        }
                    }
                };
            }
            // A negative reduced cost with no positive entry would mean an unbounded
            // phase-one objective, impossible since it is bounded below by zero.
            let r = leave.expect("phase-one objective is bounded");
            pivot(&mut tableau, &mut cost, &mut denom, r, enter);
            basis[r] = enter;
        }

        if !cost[total].is_zero() {
            return None;
        }

        let mut values = vec![Rational::zero(); total];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = Rational::new(tableau[i][total].clone(), tableau[i][b].clone());
        }
        let x = (0..n)
            .map(|v| {
                if neg_col[v] == usize::MAX {
                    values[v].clone()
                } else {
                    &values[v] - &values[neg_col[v]]
                }
            })
            .collect();
        Some(QVector::new(x))
    }

    pub fn is_satisfied_by(&self, x: &QVector) -> bool {
        if x.dim() != self.nonneg.len() {
            return false;
        }
        if self
            .nonneg
            .iter()
            .zip(x.iter())
            .any(|(&nn, v)| nn && v.is_negative())
        {
            return false;
        }
        self.rows.iter().all(|row| {
            let mut lhs = Rational::zero();
            for (v, c) in &row.terms {
                lhs += c * &x[*v];
            }
            match row.relation {
                Relation::Eq => lhs == row.rhs,
                Relation::Le => lhs <= row.rhs,
                Relation::Lt => lhs < row.rhs,
            }
        })
    }

    /// Solves and re-checks the returned point by exact substitution.
    pub fn solve_checked(&self) -> Result<Option<QVector>> {
        match self.solve() {
            Some(x) if !self.is_satisfied_by(&x) => Err(Error::Internal(
                "simplex returned a point violating its own system".into(),
            )),
            other => Ok(other),
        }
    }
}

/// Fraction-free pivot: every entry is replaced by `(p·t - t_c·t_r) / denom`, which
/// is exact, and the pivot `p` becomes the new common denominator.
fn pivot(tableau: &mut [Vec<BigInt>], cost: &mut [BigInt], denom: &mut BigInt, r: usize, c: usize) {
    let p = tableau[r][c].clone();
    let pivot_row = tableau[r].clone();
    let update = |row: &mut [BigInt]| {
        let f = row[c].clone();
        for (a, b) in row.iter_mut().zip(&pivot_row) {
            let mut v = &p * &*a;
            if !f.is_zero() && !b.is_zero() {
                v -= &f * b;
            }
            if !denom.is_one() {
                v /= &*denom;
            }
            *a = v;
        }
    };
    for (i, row) in tableau.iter_mut().enumerate() {
        if i != r {
            update(row);
        }
    }
    update(cost);
    *denom = p;
}

/// Finds a point of `R^dim` satisfying every constraint, or `None` if none exists.
pub fn lp_feasible(constraints: &[LinearConstraint], dim: usize) -> Result<Option<QVector>> {
    if dim == 0 {
        return Err(Error::Malformed("dimension must be positive".into()));
    }
    if let Some(i) = constraints.iter().position(|c| c.normal.dim() != dim) {
        return Err(Error::Malformed(format!(
            "constraint {i} has dimension {}, expected {dim}",
            constraints[i].normal.dim()
        )));
    }
    let mut lp = FeasibilityProblem::new();
    for _ in 0..dim {
        lp.add_free();
    }
    for c in constraints {
        let terms = c
            .normal
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| (j, a.clone()))
            .collect();
        lp.add_row(terms, c.relation, c.rhs.clone());
    }
    lp.solve_checked()
}
