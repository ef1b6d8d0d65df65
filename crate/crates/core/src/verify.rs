//! Seeded randomized checks of the counting identities.

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arrangement::{bounded_region_gap, build_atoms, count_regions_bruteforce, is_simple};
use crate::arrangement::{subsum_identity_central, subsum_identity_noncentral};
use crate::bounds::{binom, identity_inclusion_exclusion, identity_reformulation};
use crate::budget::Budget;
use crate::construct::{sample_generic, SampleOptions};
use crate::error::Result;
use crate::geometry::{affine_chart, Constraint};
use crate::minkowski::{classify_vertices, duality_check, effective_ranks, lift_layer, point_sets_to_json, upper_vertex_identity};
use crate::network::{BiasMode, Layer};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    /// The first failing instance with the values that disagreed.
    pub counterexample: Option<Value>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "status": if self.ok() { "pass" } else { "fail" },
            "counterexample": self.counterexample,
        })
    }
}

pub const SUITES: [&str; 8] = [
    "inclusion_exclusion",
    "reformulation",
    "subsum_noncentral",
    "subsum_central",
    "upper_faces",
    "gap",
    "bounded_floor",
    "duality",
];

struct Runner {
    name: &'static str,
    trials: usize,
    passed: usize,
    counterexample: Option<Value>,
}

impl Runner {
    fn new(name: &'static str) -> Self {
        Runner { name, trials: 0, passed: 0, counterexample: None }
    }

    fn record(&mut self, ok: bool, instance: impl FnOnce() -> Value) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(instance());
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult { name: self.name, trials: self.trials, passed: self.passed, counterexample: self.counterexample }
    }
}

fn ranks(rng: &mut ChaCha8Rng, m: usize, lo: usize, hi: usize) -> Vec<usize> {
    (0..m).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn small_layer(rng: &mut ChaCha8Rng, mode: BiasMode, certify_lift: bool) -> Result<Layer> {
    let n = rng.gen_range(1..=2);
    let ambient = if mode == BiasMode::NoBias { n + 1 } else { n };
    let m = rng.gen_range(n + 1..=4);
    let r = ranks(rng, m, 2, 3);
    let opts = SampleOptions { certify_lift, ..SampleOptions::default() };
    Ok(sample_generic(ambient, &r, mode, rng.gen(), &opts)?.layer)
}

fn verdict(lhs: &BigInt, rhs: &BigInt, layer: Value) -> Value {
    json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string(), "instance": layer })
}

/// Runs one named suite with `trials` random instances.
pub fn run_suite(name: &str, trials: usize, seed: u64, budget: &Budget) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv(name));
    let key = SUITES.iter().copied().find(|s| *s == name).ok_or_else(|| {
        crate::error::Error::Input(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))
    })?;
    let mut run = Runner::new(key);
    match key {
        "inclusion_exclusion" => {
            for m in 1..=12 {
                for n in 0..m {
                    for r in 0..=n {
                        let v = identity_inclusion_exclusion(m, n, r)?;
                        run.record(v.is_one(), || json!({ "m": m, "n": n, "r": r, "value": v.to_string() }));
                    }
                }
            }
        }
        "reformulation" => {
            for _ in 0..trials {
                let n = rng.gen_range(0..=5);
                let m = rng.gen_range(n + 1..=n + 6);
                let r = ranks(&mut rng, m, 2, 9);
                let c = identity_reformulation(n, &r)?;
                run.record(c.holds(), || json!({ "n": n, "ranks": r, "lhs": c.lhs.to_string(), "rhs": c.rhs.to_string() }));
            }
        }
        "subsum_noncentral" => {
            for _ in 0..trials {
                let layer = small_layer(&mut rng, BiasMode::Bias, false)?;
                let c = subsum_identity_noncentral(&layer, budget)?;
                run.record(c.holds(), || verdict(&c.lhs, &c.rhs, layer.to_json()));
            }
        }
        "subsum_central" => {
            for _ in 0..trials {
                let layer = small_layer(&mut rng, BiasMode::NoBias, false)?;
                let c = subsum_identity_central(&layer, budget)?;
                run.record(c.holds(), || verdict(&c.lhs, &c.rhs, layer.to_json()));
            }
        }
        "upper_faces" => {
            let mut done = 0;
            while done < trials {
                let layer = small_layer(&mut rng, BiasMode::Bias, false)?;
                let sets = lift_layer(&layer);
                let mut general = true;
                for s in &sets {
                    general &= classify_vertices(s, budget)?.upper() >= 2;
                }
                if !general {
                    continue;
                }
                let c = upper_vertex_identity(&sets, budget)?;
                run.record(c.holds(), || verdict(&c.lhs, &c.rhs, point_sets_to_json(&sets)));
                done += 1;
            }
        }
        "gap" => {
            for _ in 0..trials {
                let layer = small_layer(&mut rng, BiasMode::NoBias, false)?;
                let d = layer.input_dim;
                let w = loop {
                    let w: Vec<Rational> = (0..d).map(|_| int(rng.gen_range(-9..=9))).collect();
                    if w.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let chart = affine_chart(d, &[Constraint::new(w.clone(), Rational::one())]).expect("nonzero normal");
                    if is_simple(&build_atoms(&layer.restrict(&chart), budget)?, budget)?.simple {
                        break w;
                    }
                };
                let g = bounded_region_gap(&layer, &w, budget)?;
                run.record(g.holds(), || {
                    json!({ "r_a": g.r_a, "r_ag": g.r_ag, "floor": g.floor.to_string(), "instance": layer.to_json(),
                            "normal": crate::rational::vec_to_json(&w) })
                });
            }
        }
        "bounded_floor" => {
            let mut done = 0;
            while done < trials {
                let layer = small_layer(&mut rng, BiasMode::Bias, true)?;
                if effective_ranks(&layer, budget)?.iter().any(|&k| k < 2) {
                    continue;
                }
                done += 1;
                let bounded = count_regions_bruteforce(&layer, budget)?.bounded_regions;
                let floor = binom(layer.width() as i64 - 1, layer.input_dim as i64);
                run.record(BigInt::from(bounded) >= floor, || {
                    json!({ "bounded": bounded, "floor": floor.to_string(), "instance": layer.to_json() })
                });
            }
        }
        "duality" => {
            for i in 0..trials {
                let mode = if i % 2 == 0 { BiasMode::Bias } else { BiasMode::NoBias };
                let layer = small_layer(&mut rng, mode, false)?;
                let d = duality_check(&layer, budget)?;
                run.record(d.holds(), || {
                    json!({ "regions": d.region_count, "vertices": d.vertex_count, "instance": layer.to_json() })
                });
            }
        }
        _ => unreachable!(),
    }
    Ok(run.finish())
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

pub fn run_all(trials: usize, seed: u64, budget: &Budget) -> Result<Vec<SuiteResult>> {
    SUITES.iter().map(|s| run_suite(s, trials, seed, budget)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_replay() {
        let b = Budget::default();
        let a = run_all(3, 7, &b).unwrap();
        assert!(a.iter().all(SuiteResult::ok), "{a:?}");
        assert_eq!(a, run_all(3, 7, &b).unwrap());
        assert!(run_suite("nope", 1, 0, &b).is_err());
    }
}
