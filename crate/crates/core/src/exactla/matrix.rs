use num_traits::{One, Zero};

use super::rational::Rational;
use super::vector::QVector;
use crate::error::{Error, Result};

/// Dense rectangular rational matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: Vec<QVector>,
    ncols: usize,
}

impl QMatrix {
    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let ncols = rows
            .first()
            .map(QVector::dim)
            .ok_or_else(|| Error::Malformed("matrix has no rows".into()))?;
        if let Some(bad) = rows.iter().position(|r| r.dim() != ncols) {
            return Err(Error::Malformed(format!(
                "row {bad} has length {}, expected {ncols}",
                rows[bad].dim()
            )));
        }
        Ok(QMatrix { rows, ncols })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| QVector::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            rows: (0..n).map(|i| QVector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn transpose(&self) -> QMatrix {
        let rows = (0..self.ncols)
            .map(|j| QVector::new(self.rows.iter().map(|r| r[j].clone()).collect()))
            .collect();
        QMatrix {
            rows,
            ncols: self.rows.len(),
        }
    }

    pub fn mul_vec(&self, x: &QVector) -> QVector {
        QVector::new(self.rows.iter().map(|r| r.dot(x)).collect())
    }

    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.entries().to_vec()).collect();
        row_reduce(&mut work, self.ncols).len()
    }
}

/// Reduces `rows` in place to reduced row echelon form over the first `ncols` columns
/// and returns the pivot column of each nonzero row, in order.
pub(crate) fn row_reduce(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for a in rows[r].iter_mut() {
                *a *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solution set of a linear system: one particular solution plus a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: QVector,
    pub kernel_basis: Vec<QVector>,
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent.
pub fn solve_linear(a: &QMatrix, b: &QVector) -> Result<Option<LinearSolution>> {
    if b.dim() != a.nrows() {
        return Err(Error::Malformed(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.dim(),
            a.nrows()
        )));
    }
    let n = a.ncols();
    let mut aug: Vec<Vec<Rational>> = a
        .rows()
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut v = row.entries().to_vec();
            v.push(rhs.clone());
            v
        })
        .collect();
    let pivots = row_reduce(&mut aug, n);
    if aug[pivots.len()..].iter().any(|row| !row[n].is_zero()) {
        return Ok(None);
    }

    let mut particular = QVector::zeros(n);
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][n].clone();
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let kernel_basis = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = QVector::zeros(n);
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -aug[r][f].clone();
            }
            v
        })
        .collect();
    Ok(Some(LinearSolution {
        particular,
        kernel_basis,
    }))
}

/// Basis of `{x : M x = 0}` for a matrix with `ncols` columns; `rows` may be empty.
pub fn null_space(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    if rows.is_empty() {
        return (0..ncols).map(|i| QVector::unit(ncols, i)).collect();
    }
    let a = QMatrix::from_rows(rows.to_vec()).expect("rows share a dimension");
    solve_linear(&a, &QVector::zeros(rows.len()))
        .expect("dimensions agree")
        .expect("homogeneous systems are consistent")
        .kernel_basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::int;

    #[test]
    fn identity_solve() {
        let s = solve_linear(&QMatrix::identity(2), &QVector::from_ints(&[3, 5]))
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, QVector::from_ints(&[3, 5]));
        assert!(s.kernel_basis.is_empty());
    }

    #[test]
    fn one_equation_one_free_direction() {
        let a = QMatrix::from_ints(&[&[1, 1]]).unwrap();
        let s = solve_linear(&a, &QVector::from_ints(&[2]))
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, QVector::from_ints(&[2, 0]));
        assert_eq!(s.kernel_basis.len(), 1);
        let k = &s.kernel_basis[0];
        // proportional to (1, -1)
        assert_eq!(&k[0] + &k[1], int(0));
        assert!(!k.is_zero());
    }

    #[test]
    fn contradictory_rows() {
        let a = QMatrix::from_ints(&[&[1, 0], &[1, 0]]).unwrap();
        assert_eq!(
            solve_linear(&a, &QVector::from_ints(&[0, 1])).unwrap(),
            None
        );
    }

    #[test]
    fn dimension_mismatch_is_malformed() {
        let a = QMatrix::identity(2);
        assert!(matches!(
            solve_linear(&a, &QVector::from_ints(&[1])),
            Err(Error::Malformed(_))
        ));
        assert!(QMatrix::from_ints(&[&[1, 2], &[3]]).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap().rank(), 1);
        // (0,0),(1,0),(0,1),(1,2) homogenized
        let m = QMatrix::from_ints(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 2, 1]]).unwrap();
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn null_space_of_empty_system_is_everything() {
        assert_eq!(null_space(&[], 3).len(), 3);
        let ns = null_space(&[QVector::from_ints(&[1, 1])], 2);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0].dot(&QVector::from_ints(&[1, 1])), int(0));
    }
}
