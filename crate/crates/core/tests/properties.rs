use proptest::collection::vec;
use proptest::prelude::*;

use transversal_core::convex::{
    affine_span, common_point, contains, hull_union, orthogonal_projection,
};
use transversal_core::exactla::{
    frac, hull_intersection, int, lp_feasible, null_space, origin_in_hull, solve_linear,
    strict_separation, LinearConstraint,
};
use transversal_core::format::{parse_instance, write_instance, InstanceFile};
use transversal_core::transversal::validate_witness;
use transversal_core::witness::{gen_counterexample, gen_planted, planted_family_has_transversal};
use transversal_core::{
    check_colorful, k_transversal, AffineFlat, ConvexBody, Family, Instance, QMatrix, QVector,
    Rational, Representation, VPolytope,
};

fn qvec(xs: &[i64]) -> QVector {
    QVector::from_ints(xs)
}

fn points(dim: usize, min: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    vec(vec(-6i64..=6, dim), min..=max)
}

fn polytope(pts: &[Vec<i64>]) -> ConvexBody {
    VPolytope::new(pts.iter().map(|p| qvec(p)).collect())
        .unwrap()
        .into()
}

fn body_points(body: &ConvexBody) -> Vec<QVector> {
    body.as_polytope().unwrap().generators().to_vec()
}

/// Feasibility of `{x : a_i·x <= b_i}` with every coordinate boxed in `[-box, box]`, by
/// enumerating vertices of the bounded polyhedron.
fn vertex_oracle(rows: &[(Vec<i64>, i64)], dim: usize, bound: i64) -> bool {
    let mut all: Vec<(QVector, Rational)> = rows.iter().map(|(a, b)| (qvec(a), int(*b))).collect();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        all.push((qvec(&e), int(bound)));
        e[i] = -1;
        all.push((qvec(&e), int(bound)));
    }
    let mut pick = vec![0usize; dim];
    fn rec(
        all: &[(QVector, Rational)],
        dim: usize,
        start: usize,
        depth: usize,
        pick: &mut Vec<usize>,
    ) -> bool {
        if depth == dim {
            let a = QMatrix::from_rows(pick.iter().map(|&i| all[i].0.clone()).collect()).unwrap();
            if a.rank() < dim {
                return false;
            }
            let b = QVector::new(pick.iter().map(|&i| all[i].1.clone()).collect());
            let x = solve_linear(&a, &b).unwrap().unwrap().particular;
            return all.iter().all(|(n, r)| n.dot(&x) <= *r);
        }
        (start..all.len()).any(|i| {
            pick[depth] = i;
            rec(all, dim, i + 1, depth + 1, pick)
        })
    }
    rec(&all, dim, 0, 0, &mut pick)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_is_transpose_invariant(rows in vec(vec(-3i64..=3, 4), 1..=5)) {
        let a = QMatrix::from_rows(rows.iter().map(|r| qvec(r)).collect()).unwrap();
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn solve_linear_solutions_substitute(rows in vec(vec(-4i64..=4, 3), 1..=4), rhs in vec(-5i64..=5, 4)) {
        let a = QMatrix::from_rows(rows.iter().map(|r| qvec(r)).collect()).unwrap();
        let b = qvec(&rhs[..a.nrows()]);
        match solve_linear(&a, &b).unwrap() {
            Some(sol) => {
                prop_assert_eq!(a.mul_vec(&sol.particular), b);
                prop_assert_eq!(sol.kernel_basis.len(), 3 - a.rank());
                for k in &sol.kernel_basis {
                    prop_assert!(a.mul_vec(k).is_zero());
                }
            }
            None => {
                let mut aug: Vec<QVector> = Vec::new();
                for (r, bi) in a.rows().iter().zip(b.iter()) {
                    let mut e = r.entries().to_vec();
                    e.push(bi.clone());
                    aug.push(QVector::new(e));
                }
                prop_assert!(QMatrix::from_rows(aug).unwrap().rank() > a.rank());
            }
        }
        for k in null_space(a.rows(), 3) {
            prop_assert!(a.mul_vec(&k).is_zero());
        }
    }

    #[test]
    fn lp_agrees_with_vertex_enumeration(
        dim in 1usize..=3,
        rows in vec((vec(-3i64..=3, 3), -6i64..=6), 1..=6),
    ) {
        let rows: Vec<(Vec<i64>, i64)> = rows.into_iter().map(|(a, b)| (a[..dim].to_vec(), b)).collect();
        let bound = 20;
        let mut cs: Vec<LinearConstraint> = rows.iter().map(|(a, b)| LinearConstraint::le(qvec(a), int(*b))).collect();
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            cs.push(LinearConstraint::le(qvec(&e), int(bound)));
            cs.push(LinearConstraint::ge(qvec(&e), int(-bound)));
        }
        let got = lp_feasible(&cs, dim).unwrap();
        if let Some(x) = &got {
            prop_assert!(cs.iter().all(|c| c.is_satisfied_by(x)));
        }
        prop_assert_eq!(got.is_some(), vertex_oracle(&rows, dim, bound));
    }

    #[test]
    fn lp_terminates_on_degenerate_systems(
        base in vec(vec(-2i64..=2, 3), 1..=3),
        copies in 2usize..=4,
    ) {
        // Many constraints tight at the origin, repeated: a classic cycling setup.
        let mut cs = Vec::new();
        for _ in 0..copies {
            for a in &base {
                cs.push(LinearConstraint::le(qvec(a), int(0)));
                cs.push(LinearConstraint::ge(qvec(a), int(0)));
            }
        }
        cs.push(LinearConstraint::le(qvec(&[1, 1, 1]), int(0)));
        let x = lp_feasible(&cs, 3).unwrap().expect("origin is feasible");
        prop_assert!(cs.iter().all(|c| c.is_satisfied_by(&x)));
    }

    #[test]
    fn separation_is_dual_to_intersection(p in points(2, 1, 4), q in points(2, 1, 4), lift in 0usize..2) {
        let dim = 2 + lift;
        let up = |v: &Vec<i64>| {
            let mut e = v.clone();
            e.resize(dim, 1);
            qvec(&e)
        };
        let ps: Vec<QVector> = p.iter().map(up).collect();
        let qs: Vec<QVector> = q.iter().map(up).collect();
        let sep = strict_separation(&ps, &qs).unwrap();
        let meet = hull_intersection(&ps, &qs).unwrap();
        prop_assert!(sep.is_some() != meet.is_some());
        if let Some(h) = sep {
            prop_assert!(ps.iter().all(|x| h.side(x) < int(0)) || ps.iter().all(|x| h.side(x) > int(0)));
            let s = h.side(&ps[0]) > int(0);
            prop_assert!(qs.iter().all(|x| (h.side(x) > int(0)) != s && h.side(x) != int(0)));
        }
        if let Some(x) = meet {
            prop_assert!(contains(&VPolytope::new(ps).unwrap().into(), &x).unwrap());
            prop_assert!(contains(&VPolytope::new(qs).unwrap().into(), &x).unwrap());
        }
    }

    #[test]
    fn origin_in_hull_matches_separation(vs in points(2, 1, 4)) {
        let qs: Vec<QVector> = vs.iter().map(|v| qvec(v)).collect();
        let sep = strict_separation(&qs, &[QVector::zeros(2)]).unwrap();
        prop_assert_eq!(origin_in_hull(&qs).unwrap(), sep.is_none());
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal(
        base in vec(-5i64..=5, 3),
        dirs in vec(vec(-3i64..=3, 3), 1..=2),
        x in vec(-9i64..=9, 3),
    ) {
        let dirs: Vec<QVector> = dirs.iter().map(|d| qvec(d)).collect();
        prop_assume!(QMatrix::from_rows(dirs.clone()).unwrap().rank() == dirs.len());
        let flat = AffineFlat::new(qvec(&base), dirs.clone()).unwrap();
        let x = qvec(&x);
        let p = orthogonal_projection(&flat, &x).unwrap();
        prop_assert!(contains(&flat.clone().into(), &p).unwrap());
        prop_assert_eq!(orthogonal_projection(&flat, &p).unwrap(), p.clone());
        let r = &x - &p;
        for d in &dirs {
            prop_assert_eq!(r.dot(d), int(0));
        }
    }

    #[test]
    fn hull_union_contains_each_body(a in points(2, 1, 3), b in points(2, 1, 3)) {
        let (a, b) = (polytope(&a), polytope(&b));
        let u: ConvexBody = hull_union(&[&a, &b]).unwrap().into();
        for g in body_points(&a).iter().chain(&body_points(&b)) {
            prop_assert!(contains(&u, g).unwrap());
        }
        let reversed: ConvexBody = hull_union(&[&b, &a]).unwrap().into();
        for g in body_points(&u) {
            prop_assert!(contains(&reversed, &g).unwrap());
        }
    }

    #[test]
    fn common_point_lies_in_every_body(bodies in vec(points(2, 1, 3), 2..=3)) {
        let bodies: Vec<ConvexBody> = bodies.iter().map(|b| polytope(b)).collect();
        if let Some(x) = common_point(&bodies).unwrap() {
            for b in &bodies {
                prop_assert!(contains(b, &x).unwrap());
            }
        } else if bodies.len() == 2 {
            prop_assert!(strict_separation(&body_points(&bodies[0]), &body_points(&bodies[1])).unwrap().is_some());
        }
    }

    #[test]
    fn flat_pairs_meet_iff_linear_system_solves(
        b1 in vec(-4i64..=4, 3), d1 in vec(vec(-2i64..=2, 3), 1..=2),
        b2 in vec(-4i64..=4, 3), d2 in vec(vec(-2i64..=2, 3), 1..=2),
    ) {
        let d1: Vec<QVector> = d1.iter().map(|d| qvec(d)).collect();
        let d2: Vec<QVector> = d2.iter().map(|d| qvec(d)).collect();
        prop_assume!(QMatrix::from_rows(d1.clone()).unwrap().rank() == d1.len());
        prop_assume!(QMatrix::from_rows(d2.clone()).unwrap().rank() == d2.len());
        let f1 = AffineFlat::new(qvec(&b1), d1.clone()).unwrap();
        let f2 = AffineFlat::new(qvec(&b2), d2.clone()).unwrap();
        // b1 + D1 s - D2 t = b2
        let cols: Vec<QVector> = d1.iter().cloned().chain(d2.iter().map(|d| -d)).collect();
        let a = QMatrix::from_rows(cols).unwrap().transpose();
        let rhs = &qvec(&b2) - &qvec(&b1);
        let solvable = solve_linear(&a, &rhs).unwrap().is_some();
        let cp = common_point(&[f1.clone().into(), f2.clone().into()]).unwrap();
        prop_assert_eq!(cp.is_some(), solvable);
        if let Some(x) = cp {
            prop_assert!(contains(&f1.into(), &x).unwrap());
            prop_assert!(contains(&f2.into(), &x).unwrap());
        }
    }

    #[test]
    fn affine_span_contains_its_points(pts in points(3, 1, 4)) {
        let qs: Vec<QVector> = pts.iter().map(|p| qvec(p)).collect();
        let span = affine_span(&qs).unwrap();
        let diffs: Vec<QVector> = qs.iter().map(|p| p - &qs[0]).collect();
        prop_assert_eq!(span.dim(), QMatrix::from_rows(diffs).unwrap().rank());
        for p in &qs {
            prop_assert!(contains(&span.clone().into(), p).unwrap());
        }
    }

    #[test]
    fn transversal_witnesses_are_sound(k in 0usize..=1, members in vec(points(2, 1, 3), 3)) {
        let fam = Family::new(k, members[..k + 2].iter().map(|m| polytope(m)).collect());
        if let Some(w) = k_transversal(&fam).unwrap() {
            validate_witness(&fam, &w).unwrap();
            prop_assert!(w.flat.dim() <= k);
        }
    }

    #[test]
    fn points_transversal_matches_affine_rank(members in vec(vec(-4i64..=4, 3), 4)) {
        // Four single points in R^3 have a plane transversal iff they are affinely dependent.
        let pts: Vec<QVector> = members.iter().map(|p| qvec(p)).collect();
        let fam = Family::new(2, pts.iter().map(|p| VPolytope::point(p.clone()).into()).collect());
        let diffs: Vec<QVector> = pts.iter().map(|p| p - &pts[0]).collect();
        let dependent = QMatrix::from_rows(diffs).unwrap().rank() <= 2;
        prop_assert_eq!(k_transversal(&fam).unwrap().is_some(), dependent);
    }

    #[test]
    fn colorful_is_order_invariant_and_monotone(
        f1 in vec(points(2, 1, 3), 2), f2 in vec(points(2, 1, 3), 2), extra in vec(-6i64..=6, 2),
    ) {
        let fam = |ms: &[Vec<Vec<i64>>]| Family::new(0, ms.iter().map(|m| polytope(m)).collect());
        let a = Instance::new(2, vec![fam(&f1), fam(&f2)]).unwrap();
        let b = Instance::new(2, vec![fam(&f2), fam(&f1)]).unwrap();
        let ra = check_colorful(&a).unwrap();
        prop_assert_eq!(ra.holds, check_colorful(&b).unwrap().holds);
        let mut grown = f1.clone();
        grown[0].push(extra);
        let c = Instance::new(2, vec![fam(&grown), fam(&f2)]).unwrap();
        if ra.holds {
            prop_assert!(check_colorful(&c).unwrap().holds);
        }
    }

    #[test]
    fn instance_files_round_trip(
        members in vec(points(2, 1, 3), 2),
        base in vec(-9i64..=9, 2), num in -9i64..=9, den in 1i64..=5,
    ) {
        let mut bodies: Vec<ConvexBody> = members.iter().map(|m| polytope(m)).collect();
        let flat = AffineFlat::new(
            QVector::new(vec![frac(num, den), int(base[1])]),
            vec![QVector::new(vec![int(1), frac(base[0], den)])],
        ).unwrap();
        bodies.push(flat.into());
        let inst = Instance::new(2, vec![Family::new(1, bodies)]).unwrap();
        let text = write_instance(&inst, None);
        let (back, meta) = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert!(meta.is_none());
        prop_assert_eq!(InstanceFile::parse(&text).unwrap().to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncation_keeps_members_inside_flats(seed in any::<u64>(), ks in prop::sample::select(vec![vec![0, 0], vec![1, 0], vec![1, 1]])) {
        let flats = gen_counterexample(&ks, seed, Representation::Flats).unwrap();
        let truncated = flats.truncated().unwrap();
        for (ff, tf) in flats.instance.families.iter().zip(&truncated.instance.families) {
            for (fb, tb) in ff.bodies.iter().zip(&tf.bodies) {
                for g in body_points(tb) {
                    prop_assert!(contains(fb, &g).unwrap());
                }
            }
        }
        prop_assert_eq!(&flats.tuple_points, &truncated.tuple_points);
        let report = check_colorful(&truncated.instance).unwrap();
        prop_assert!(report.holds);
        for (t, p) in &truncated.tuple_points {
            for b in truncated.instance.tuple_bodies(t) {
                prop_assert!(contains(&b, p).unwrap());
            }
        }
    }

    #[test]
    fn planted_family_always_has_its_transversal(seed in any::<u64>(), extra in 0usize..=1) {
        let inst = gen_planted(3 + extra, &[1, 1], seed).unwrap();
        prop_assert!(planted_family_has_transversal(&inst).unwrap());
        let w = k_transversal(&inst.families[0]).unwrap().unwrap();
        validate_witness(&inst.families[0], &w).unwrap();
    }
}
