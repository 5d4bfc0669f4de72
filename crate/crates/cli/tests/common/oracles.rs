//! Line-stabbing oracles for three planar segments, independent of the Radon-partition
//! route used by `k_transversal`.

use transversal_core::exactla::{int, lp_feasible, LinearConstraint, QVector};

pub type Seg = [(i64, i64); 2];

fn vertical_line_exists(segs: &[Seg]) -> bool {
    let lo = segs.iter().map(|s| s[0].0.min(s[1].0)).max().unwrap();
    let hi = segs.iter().map(|s| s[0].0.max(s[1].0)).min().unwrap();
    lo <= hi
}

/// A non-vertical line `y = a x + b` meets segment PQ iff `y - a x - b` takes opposite
/// (or zero) signs at P and Q. For each of the 2^n choices of which endpoint lies on or
/// above the line, feasibility over `(a, b)` is a two-variable LP.
pub fn sign_pattern_oracle(segs: &[Seg]) -> bool {
    if vertical_line_exists(segs) {
        return true;
    }
    (0..1u32 << segs.len()).any(|pattern| {
        let mut cs = Vec::new();
        for (i, s) in segs.iter().enumerate() {
            let (above, below) = if pattern >> i & 1 == 0 {
                (s[0], s[1])
            } else {
                (s[1], s[0])
            };
            // a x + b <= y  at the endpoint on or above
            cs.push(LinearConstraint::le(
                QVector::from_ints(&[above.0, 1]),
                int(above.1),
            ));
            // a x + b >= y  at the endpoint on or below
            cs.push(LinearConstraint::ge(
                QVector::from_ints(&[below.0, 1]),
                int(below.1),
            ));
        }
        lp_feasible(&cs, 2).unwrap().is_some()
    })
}

fn orient(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> i64 {
    ((q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)).signum()
}

/// LP-free: if a non-vertical stabbing line exists, the stabbing region in `(a, b)` is
/// a pointed polyhedron whose vertices are lines through two endpoints with distinct x,
/// so enumerating those lines (plus vertical lines) is exhaustive.
pub fn endpoint_pair_oracle(segs: &[Seg]) -> bool {
    if vertical_line_exists(segs) {
        return true;
    }
    let pts: Vec<(i64, i64)> = segs.iter().flat_map(|s| s.iter().copied()).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (p, q) = (pts[i], pts[j]);
            if p.0 == q.0 {
                continue;
            }
            if segs
                .iter()
                .all(|s| orient(p, q, s[0]) * orient(p, q, s[1]) <= 0)
            {
                return true;
            }
        }
    }
    false
}
