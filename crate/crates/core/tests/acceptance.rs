//! One pass/fail line per acceptance criterion.

mod common;

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropic::arrangement::{
    build_atoms, build_poset, count_faces_poset, count_regions_bruteforce, count_regions_poset, enumerate_cells,
    euler_sum, face_counts_bruteforce, is_simple, bounded_region_gap, subsum_identity_central,
    subsum_identity_noncentral, Poset,
};
use tropic::bounds::{
    binom, deep_lower, deep_upper, identity_inclusion_exclusion, identity_reformulation, shallow_formula, DeepQuery,
    ShallowQuery,
};
use tropic::budget::Budget;
use tropic::construct::{
    construct_deep_lower, construct_shallow_optimal, construct_shallow_optimal_nobias, count_regions_on_line,
    sample_generic, SampleOptions,
};
use tropic::geometry::{self, affine_chart, ConstraintSystem, Constraint};
use tropic::minkowski::{
    classify_vertices, duality_check, effective_ranks, lift_layer, partial_sum_trivial_bound, upper_vertex_identity,
    LabeledPointSet,
};
use tropic::network::{BiasMode, Layer};
use tropic::rational::{int, Rational};

use common::{face_decomposition, worked_example};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T>(r: tropic::error::Result<T>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn budget() -> Budget {
    Budget::default()
}

/// Ranks of the sharpness grid: uniform tuples and one mixed tuple per size.
fn rank_grid() -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in 1..=4 {
            for k in 2..=4 {
                out.push((n, vec![k; m]));
            }
            if m > 1 {
                out.push((n, [2, 3, 4, 3][..m].to_vec()));
            }
        }
    }
    out
}

/// Cells of the genericity grid; every cell gets 100 seeded samples.
fn sample_grid() -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in 1..=3 {
            for k in 2..=3 {
                out.push((n, vec![k; m]));
            }
        }
    }
    out
}

const SAMPLES: u64 = 100;

fn samples(mode: BiasMode) -> Result<Vec<Layer>, String> {
    static CACHE: [OnceLock<Result<Vec<Layer>, String>>; 2] = [OnceLock::new(), OnceLock::new()];
    CACHE[usize::from(mode == BiasMode::NoBias)].get_or_init(|| draw_samples(mode)).clone()
}

fn draw_samples(mode: BiasMode) -> Result<Vec<Layer>, String> {
    let opts = SampleOptions { certify_lift: mode == BiasMode::Bias, ..SampleOptions::default() };
    let mut out = Vec::new();
    for (cell, (n, ranks)) in sample_grid().into_iter().enumerate() {
        for s in 0..SAMPLES {
            out.push(e(sample_generic(n, &ranks, mode, 1000 * cell as u64 + s, &opts))?.layer);
        }
    }
    Ok(out)
}

fn constructions() -> Result<Vec<Layer>, String> {
    let mut out = Vec::new();
    for (n, ranks) in rank_grid() {
        out.push(e(construct_shallow_optimal(n, &ranks, 1))?);
        out.push(e(construct_shallow_optimal_nobias(n, &ranks, 1))?);
    }
    Ok(out)
}

fn c1_worked_example() -> Outcome {
    let layer = worked_example();
    let b = budget();
    let brute = e(face_counts_bruteforce(&layer, &b))?;
    let poset = e(build_poset(&e(build_atoms(&layer, &b))?, &b))?;
    let regions = count_regions_poset(&poset);
    let edges = e(count_faces_poset(&poset, 1))?;
    ensure(brute[2] == 8 && brute[1] == 12, || format!("brute force f = {brute:?}"))?;
    ensure(regions == BigInt::from(8) && edges == BigInt::from(12), || format!("poset gives {regions} regions, {edges} edges"))?;
    Ok("8 regions and 12 one-faces by poset and brute force".into())
}

fn central_sample(n: usize, ranks: &[usize], seed: u64) -> Result<Layer, String> {
    e(sample_generic(n, ranks, BiasMode::NoBias, seed, &SampleOptions::default())).map(|s| s.layer)
}

fn c2_central_examples() -> Outcome {
    let b = budget();
    for (n, ranks, want) in [(2, vec![3, 2], 5), (3, vec![3, 3, 2], 15)] {
        let layer = e(construct_shallow_optimal_nobias(n, &ranks, 2))?;
        let id = e(subsum_identity_central(&layer, &b))?;
        let poset = e(build_poset(&e(build_atoms(&layer, &b))?, &b))?;
        let p = count_regions_poset(&poset);
        let w = BigInt::from(want);
        ensure(id.lhs == w && id.rhs == w && p == w, || {
            format!("ranks {ranks:?}: brute {} formula {} poset {p}, expected {want}", id.lhs, id.rhs)
        })?;
    }
    Ok("5 and 15 regions by formula, poset and brute force".into())
}

fn c3_sharpness() -> Outcome {
    let b = budget();
    let mut checked = 0;
    for (n, ranks) in rank_grid() {
        for mode in [BiasMode::Bias, BiasMode::NoBias] {
            let layer = match mode {
                BiasMode::Bias => e(construct_shallow_optimal(n, &ranks, 1))?,
                BiasMode::NoBias => e(construct_shallow_optimal_nobias(n, &ranks, 1))?,
            };
            let got = BigInt::from(e(count_regions_bruteforce(&layer, &b))?.regions);
            let want = shallow_formula(&ShallowQuery::new(n, &ranks, mode));
            ensure(got == want, || format!("n={n} ranks={ranks:?} {}: {got} != {want}", mode.as_str()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} constructions attain the formula"))
}

fn c4_generic_upper() -> Outcome {
    let b = budget();
    let mut checked = 0;
    for mode in [BiasMode::Bias, BiasMode::NoBias] {
        for layer in samples(mode)? {
            let got = BigInt::from(e(count_regions_bruteforce(&layer, &b))?.regions);
            let bound = shallow_formula(&ShallowQuery::new(layer.input_dim, &layer.ranks(), mode));
            ensure(got <= bound, || format!("{} regions exceed {bound}: {}", got, layer.to_json()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} sampled layers within the bound"))
}

fn c5_duality() -> Outcome {
    let b = budget();
    let mut layers = constructions()?;
    layers.extend(samples(BiasMode::Bias)?);
    layers.extend(samples(BiasMode::NoBias)?);
    for layer in &layers {
        let r = e(duality_check(layer, &b))?;
        ensure(r.holds(), || format!("{} regions vs {} vertices: {}", r.region_count, r.vertex_count, layer.to_json()))?;
    }
    Ok(format!("{} layers", layers.len()))
}

fn random_ranks(rng: &mut ChaCha8Rng, m: usize, lo: usize, hi: usize) -> Vec<usize> {
    (0..m).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn simple_family(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<LabeledPointSet>, String> {
    let opts = SampleOptions { bound: 6, ..SampleOptions::default() };
    loop {
        let ranks = random_ranks(rng, m, 2, 4);
        let layer = e(sample_generic(n, &ranks, BiasMode::Bias, rng.gen(), &opts))?.layer;
        let sets = lift_layer(&layer);
        let mut ok = true;
        for s in &sets {
            ok &= e(classify_vertices(s, &budget()))?.upper() >= 2;
        }
        if ok {
            return Ok(sets);
        }
    }
}

fn c6_identities() -> Outcome {
    for m in 1..=12 {
        for n in 0..m {
            for r in 0..=n {
                let v = e(identity_inclusion_exclusion(m, n, r))?;
                ensure(v.is_one(), || format!("m={m} n={n} r={r} gives {v}"))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let n = rng.gen_range(0..=5);
        let m = rng.gen_range(n + 1..=n + 6);
        let ranks = random_ranks(&mut rng, m, 2, 9);
        let c = e(identity_reformulation(n, &ranks))?;
        ensure(c.holds(), || format!("n={n} ranks={ranks:?}: {c:?}"))?;
    }
    let b = budget();
    for i in 0..50u64 {
        let n = 1 + (i % 2) as usize;
        let m = rng.gen_range(n + 1..=4);
        let ranks = random_ranks(&mut rng, m, 2, 3);
        let layer = e(sample_generic(n, &ranks, BiasMode::Bias, 600 + i, &SampleOptions::default()))?.layer;
        let c = e(subsum_identity_noncentral(&layer, &b))?;
        ensure(c.holds(), || format!("non-central {c:?}: {}", layer.to_json()))?;
        let layer = central_sample(n + 1, &ranks, 700 + i)?;
        let c = e(subsum_identity_central(&layer, &b))?;
        ensure(c.holds(), || format!("central {c:?}: {}", layer.to_json()))?;
    }
    for i in 0..100usize {
        let n = 1 + i % 2;
        let m = n + 1 + (i / 2) % 3;
        let sets = simple_family(n, m, &mut rng)?;
        let c = e(upper_vertex_identity(&sets, &b))?;
        ensure(c.holds(), || format!("upper-face identity {c:?} on {:?}", sets))?;
    }
    Ok("inclusion-exclusion, reformulation, both subsum identities and the upper-face identity".into())
}

fn c7_bounded_floor() -> Outcome {
    let b = budget();
    let (mut checked, mut skipped) = (0, 0);
    for layer in samples(BiasMode::Bias)? {
        if e(effective_ranks(&layer, &b))?.iter().any(|&k| k < 2) {
            skipped += 1;
            continue;
        }
        let (n, m) = (layer.input_dim, layer.width());
        let bounded = e(count_regions_bruteforce(&layer, &b))?.bounded_regions;
        let floor = binom(m as i64 - 1, n as i64);
        ensure(BigInt::from(bounded) >= floor, || format!("{bounded} bounded < {floor}: {}", layer.to_json()))?;
        checked += 1;
    }
    for layer in samples(BiasMode::NoBias)? {
        let bounded = e(count_regions_bruteforce(&layer, &b))?.bounded_regions;
        ensure(bounded == 0, || format!("central layer with {bounded} bounded regions"))?;
    }
    Ok(format!("{checked} non-central samples meet the floor ({skipped} with a constant unit skipped); central samples have none"))
}

fn c8_gap() -> Outcome {
    let b = budget();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..50u64 {
        let n = 1 + (i % 2) as usize;
        let m = rng.gen_range(n + 1..=4);
        let ranks = random_ranks(&mut rng, m, 2, 3);
        let layer = central_sample(n + 1, &ranks, 800 + i)?;
        let w = loop {
            let w: Vec<Rational> = (0..=n).map(|_| int(rng.gen_range(-9..=9))).collect();
            if w.iter().all(Zero::is_zero) {
                continue;
            }
            let chart = affine_chart(n + 1, &[Constraint::new(w.clone(), Rational::one())]).unwrap();
            let restricted = layer.restrict(&chart);
            if e(is_simple(&e(build_atoms(&restricted, &b))?, &b))?.simple {
                break w;
            }
        };
        let g = e(bounded_region_gap(&layer, &w, &b))?;
        ensure(g.holds(), || format!("gap {} < {}: {}", g.gap, g.floor, layer.to_json()))?;
    }
    Ok("50 central instances".into())
}

fn c9_partial_sums() -> Outcome {
    let b = budget();
    let mut checked = 0;
    for layer in constructions()? {
        let sets = lift_layer(&layer);
        let d = sets[0].ambient_dim;
        for (s, p) in e(partial_sum_trivial_bound(&sets, d - 1, &b))? {
            ensure(p.attained(), || {
                format!("subset {s:?} has {} vertices, product {}: {}", p.actual, p.trivial, layer.to_json())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} partial sums attain the product"))
}

fn mobius_ok(p: &Poset) -> bool {
    (0..p.len()).all(|x| {
        let mu = p.mobius_from(x);
        (0..p.len()).all(|y| {
            if !p.leq(x, y) {
                return true;
            }
            let s: i64 = (0..p.len()).filter(|&z| p.leq(x, z) && p.leq(z, y)).map(|z| mu[z]).sum();
            s == i64::from(x == y)
        })
    })
}

fn c10_euler_mobius() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut polyhedra = 0;
    while polyhedra < 200 {
        let d = rng.gen_range(1..=3);
        let mut sys = ConstraintSystem::new(d);
        for _ in 0..rng.gen_range(0..=5) {
            sys.add_ge((0..d).map(|_| int(rng.gen_range(-3..=3))).collect(), int(rng.gen_range(-3..=3)));
        }
        if rng.gen_bool(0.2) {
            sys.add_eq((0..d).map(|_| int(rng.gen_range(-2..=2))).collect(), int(rng.gen_range(-2..=2)));
        }
        if geometry::feasible(&sys).unwrap().is_none() {
            continue;
        }
        let psi = e(geometry::euler_characteristic(&sys))?;
        let oracle = face_decomposition(&sys);
        ensure(psi == oracle, || format!("closed form {psi}, faces {oracle}: {sys:?}"))?;
        polyhedra += 1;
    }
    let b = budget();
    let mut layers = constructions()?;
    layers.extend(samples(BiasMode::Bias)?.into_iter().step_by(10));
    layers.extend(samples(BiasMode::NoBias)?.into_iter().step_by(10));
    layers.push(worked_example());
    let mut posets = 0;
    for layer in &layers {
        if layer.bias_mode == BiasMode::Bias {
            let cells = e(enumerate_cells(layer, &b))?;
            let want = if layer.input_dim % 2 == 0 { 1 } else { -1 };
            ensure(euler_sum(&cells) == want, || format!("cell Euler sum {}: {}", euler_sum(&cells), layer.to_json()))?;
        }
        let poset = e(build_poset(&e(build_atoms(layer, &b))?, &b))?;
        ensure(mobius_ok(&poset), || format!("Möbius recursion fails: {}", layer.to_json()))?;
        posets += 1;
    }
    Ok(format!("200 polyhedra, {posets} posets"))
}

fn c11_deep() -> Outcome {
    let up = deep_upper(&DeepQuery::uniform(2, &[2, 2], 3, BiasMode::Bias));
    let lo = e(deep_lower(2, &[2, 2], 3, BiasMode::Bias))?.value;
    ensure(up == BigInt::from(81) && lo == BigInt::from(25), || format!("upper {up}, lower {lo}"))?;
    let net = e(construct_deep_lower(1, &[2, 1], 2, 0))?;
    let count = BigInt::from(e(count_regions_on_line(&net, &[int(0)], &[int(1)]))?);
    let lo = e(deep_lower(1, &[2, 1], 2, BiasMode::Bias))?.value;
    let up = deep_upper(&DeepQuery::uniform(1, &[2, 1], 2, BiasMode::Bias));
    ensure(lo <= count && count <= up && count >= BigInt::from(6), || format!("{lo} <= {count} <= {up} fails"))?;
    for n0 in 1..=3 {
        for w in 2..=6 {
            for k in 2..=4 {
                for depth in 1..=3 {
                    let widths = vec![w; depth];
                    let u = deep_upper(&DeepQuery::uniform(n0, &widths, k, BiasMode::Bias));
                    let wider = deep_upper(&DeepQuery::uniform(n0, &vec![w + 1; depth], k, BiasMode::Bias));
                    let higher = deep_upper(&DeepQuery::uniform(n0, &widths, k + 1, BiasMode::Bias));
                    ensure(u <= wider && u <= higher, || format!("upper bound not monotone at {n0} {widths:?} {k}"))?;
                    if let Ok(l) = deep_lower(n0, &widths, k, BiasMode::Bias) {
                        ensure(l.value <= u, || format!("lower {} above upper {u} at {n0} {widths:?} {k}", l.value))?;
                    }
                }
            }
        }
    }
    Ok(format!("81/25 reproduced; the deep construction has {count} regions"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 11] = [
        ("worked example", c1_worked_example, Duration::from_secs(5)),
        ("central examples", c2_central_examples, Duration::from_secs(30)),
        ("sharpness grid", c3_sharpness, Duration::from_secs(600)),
        ("generic upper bound", c4_generic_upper, Duration::MAX),
        ("duality", c5_duality, Duration::MAX),
        ("identity suites", c6_identities, Duration::from_secs(900)),
        ("bounded-region floor", c7_bounded_floor, Duration::MAX),
        ("gap", c8_gap, Duration::MAX),
        ("partial-sum bound", c9_partial_sums, Duration::MAX),
        ("Euler and Möbius", c10_euler_mobius, Duration::MAX),
        ("deep bounds", c11_deep, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *limit => Err(format!("{msg}, but took {took:.1?} (limit {limit:?})")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {:>2} {name}: PASS ({msg}; {took:.1?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({msg}; {took:.1?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
