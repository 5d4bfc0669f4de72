//! Shared fixtures for the criterion benchmarks.

use transversal_core::exactla::{int, LinearConstraint};
use transversal_core::witness::{gen_colorful_random, gen_counterexample};
use transversal_core::{Instance, QVector, Representation};

/// A random colorful instance in theorem dimension.
pub fn theorem_instance(ks: &[usize], seed: u64) -> Instance {
    gen_colorful_random(ks, seed).expect("generator succeeds")
}

/// A truncated counterexample instance.
pub fn counterexample_instance(ks: &[usize], seed: u64) -> Instance {
    gen_counterexample(ks, seed, Representation::Truncated)
        .expect("generator succeeds")
        .instance
}

/// The cube `[-n, n]^dim` cut by a few diagonal half-spaces.
pub fn cut_cube(dim: usize, n: i64) -> Vec<LinearConstraint> {
    let mut cs = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        cs.push(LinearConstraint::le(QVector::from_ints(&e), int(n)));
        cs.push(LinearConstraint::ge(QVector::from_ints(&e), int(-n)));
    }
    for shift in 0..dim {
        let row: Vec<i64> = (0..dim).map(|j| ((j + shift) % 3) as i64 - 1).collect();
        cs.push(LinearConstraint::ge(QVector::from_ints(&row), int(1)));
    }
    cs
}
