#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use tropic::geometry::{self, ConstraintSystem};
use tropic::lp::{self, LpOutcome};
use tropic::network::{BiasMode, Layer, MaxoutUnit};
use tropic::rational::{dot, int, Rational};

pub fn unit(w: &[&[i64]], b: Option<&[i64]>) -> MaxoutUnit {
    MaxoutUnit::new(
        w.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
        b.map(|b| b.iter().map(|&x| int(x)).collect()),
    )
}

/// max{2y, x+y+1, 2} and max{0, 3x+2y, 5x+y}.
pub fn worked_example() -> Layer {
    let a = unit(&[&[0, 2], &[1, 1], &[0, 0]], Some(&[0, 1, 2]));
    let b = unit(&[&[0, 0], &[3, 2], &[5, 1]], Some(&[0, 0, 0]));
    Layer::new(2, BiasMode::Bias, vec![a, b]).unwrap()
}

/// Alternating face count of `{x : eqs, ineqs}`: one term per distinct face,
/// found by making subsets of inequalities tight.
pub fn face_decomposition(sys: &ConstraintSystem) -> i64 {
    let k = sys.inequalities.len();
    let mut seen = BTreeSet::new();
    let mut total = 0;
    for mask in 0u32..(1 << k) {
        let mut face = sys.clone();
        for i in 0..k {
            if mask >> i & 1 == 1 {
                let c = &sys.inequalities[i];
                face.add_eq(c.coeffs.clone(), c.rhs.clone());
            }
        }
        if geometry::feasible(&face).unwrap().is_none() {
            continue;
        }
        let tight: Vec<usize> = (0..k)
            .filter(|&i| {
                let c = &sys.inequalities[i];
                match lp::solve(sys.ambient_dim, &face.equalities, &face.inequalities, Some(&c.coeffs)) {
                    LpOutcome::Optimal(x) => dot(&c.coeffs, &x) == c.rhs,
                    _ => false,
                }
            })
            .collect();
        if seen.insert(tight) {
            let dim = geometry::affine_dimension(&face).unwrap().unwrap();
            total += if dim.is_multiple_of(2) { 1 } else { -1 };
        }
    }
    total
}

pub fn small_int() -> impl Strategy<Value = i64> {
    -4i64..=4
}

/// Random polyhedra in dimension at most 3 with at most five inequalities.
pub fn polyhedron() -> impl Strategy<Value = ConstraintSystem> {
    (1usize..=3).prop_flat_map(|d| {
        (
            prop::collection::vec((prop::collection::vec(-3i64..=3, d), -3i64..=3), 0..=5),
            prop::option::weighted(0.2, (prop::collection::vec(-2i64..=2, d), -2i64..=2)),
        )
            .prop_map(move |(ineqs, eq)| {
                let mut sys = ConstraintSystem::new(d);
                for (a, b) in ineqs {
                    sys.add_ge(a.into_iter().map(int).collect(), int(b));
                }
                if let Some((a, b)) = eq {
                    sys.add_eq(a.into_iter().map(int).collect(), int(b));
                }
                sys
            })
    })
}

/// Small random layers: up to 2 inputs, 3 units of rank at most 3.
pub fn layer(mode: BiasMode) -> impl Strategy<Value = Layer> {
    (1usize..=2, prop::collection::vec(1usize..=3, 1..=3)).prop_flat_map(move |(n, ranks)| {
        let units: Vec<_> = ranks
            .iter()
            .map(|&k| {
                (prop::collection::vec(prop::collection::vec(small_int(), n), k), prop::collection::vec(small_int(), k))
                    .prop_map(move |(w, b)| {
                        let w: Vec<Vec<Rational>> = w.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
                        let b = match mode {
                            BiasMode::Bias => Some(b.into_iter().map(int).collect()),
                            BiasMode::NoBias => None,
                        };
                        MaxoutUnit::new(w, b)
                    })
            })
            .collect();
        units.prop_map(move |u| Layer::new(n, mode, u).unwrap())
    })
}
