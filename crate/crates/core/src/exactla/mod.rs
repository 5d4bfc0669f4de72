//! Exact rational linear algebra and linear-programming feasibility.

mod matrix;
mod rational;
mod separation;
mod simplex;
mod vector;

pub use matrix::{null_space, solve_linear, LinearSolution, QMatrix};
pub use rational::{approx, format_rational, frac, int, parse_rational, Rational};
pub use separation::{
    hull_intersection, origin_in_hull, positive_functional, strict_separation, Hyperplane,
};
pub use simplex::{lp_feasible, FeasibilityProblem, LinearConstraint, Relation};
pub use vector::QVector;
