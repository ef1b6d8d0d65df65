//! Parameter choices that attain the region bounds, and seeded generic samples.

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{self, build_atoms, is_simple};
use crate::bounds::deep_lower_at;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geometry::AffineChart;
use crate::network::{BiasMode, Layer, MaxoutUnit, Network};
use crate::rational::{frac, int, Rational};

const RETRIES: usize = 64;

fn moment(t: i64, n: usize) -> Vec<Rational> {
    (0..n).map(|p| int(t.pow(p as u32))).collect()
}

/// Parallel-hyperplane unit: feature `r` is `r <w, x> - r(r-1)/2 - r δ`,
/// so feature `r` wins on `r - 1 + δ < <w, x> < r + δ`.
fn ladder_unit(w: &[Rational], k: usize, delta: &Rational) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let mut weights = Vec::with_capacity(k);
    let mut biases = Vec::with_capacity(k);
    for r in 0..k as i64 {
        weights.push(w.iter().map(|x| x * int(r)).collect());
        biases.push(-int(r * (r - 1) / 2) - delta * int(r));
    }
    (weights, biases)
}

fn check_ranks(ranks: &[usize]) -> Result<()> {
    if ranks.iter().any(|&k| k < 2) {
        return Err(Error::Precondition(format!("optimal constructions need ranks >= 2, got {ranks:?}")));
    }
    Ok(())
}

/// Moment-curve nodes and shifts for attempt `attempt`; the first attempt uses
/// shifts `i/(m+1)`, later ones random fractions with a prime denominator.
fn ladder_params(m: usize, rng: &mut ChaCha8Rng, attempt: usize) -> (Vec<i64>, Vec<Rational>) {
    let mut nodes: Vec<i64> = (1..=(2 * m as i64 + 1)).collect();
    nodes.shuffle(rng);
    nodes.truncate(m);
    let deltas = if attempt == 0 {
        let mut order: Vec<i64> = (1..=m as i64).collect();
        order.shuffle(rng);
        order.into_iter().map(|i| frac(i, m as i64 + 1)).collect()
    } else {
        (0..m).map(|_| frac(rng.gen_range(1..1009), 1009)).collect()
    };
    (nodes, deltas)
}

fn certified(layer: &Layer) -> Result<bool> {
    let budget = Budget::unlimited();
    Ok(is_simple(&build_atoms(layer, &budget)?, &budget)?.simple)
}

/// A layer with biases attaining `sum_{j<=n} e_j(k_i - 1)` regions.
pub fn construct_shallow_optimal(n: usize, ranks: &[usize], seed: u64) -> Result<Layer> {
    if n == 0 {
        return Err(Error::Precondition("input dimension must be at least 1".into()));
    }
    check_ranks(ranks)?;
    let m = ranks.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..RETRIES {
        let (nodes, deltas) = ladder_params(m, &mut rng, attempt);
        let units = (0..m)
            .map(|i| {
                let (w, b) = ladder_unit(&moment(nodes[i], n), ranks[i], &deltas[i]);
                MaxoutUnit::new(w, Some(b))
            })
            .collect();
        let layer = Layer::new(n, BiasMode::Bias, units)?;
        if certified(&layer)? {
            return Ok(layer);
        }
    }
    Err(Error::Precondition(format!("no simple parameters found after {RETRIES} attempts")))
}

/// A bias-free layer attaining `C(m-1, n-1) + sum_{j<n} e_j(k_i - 1)` regions:
/// the `(n-1)`-input ladder with its biases moved into the last coordinate.
pub fn construct_shallow_optimal_nobias(n: usize, ranks: &[usize], seed: u64) -> Result<Layer> {
    if n == 0 {
        return Err(Error::Precondition("input dimension must be at least 1".into()));
    }
    check_ranks(ranks)?;
    let m = ranks.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n == 1 {
        let units = ranks.iter().map(|&k| MaxoutUnit::new((0..k as i64).map(|r| vec![int(r)]).collect(), None)).collect();
        return Layer::new(1, BiasMode::NoBias, units);
    }
    let above = AffineChart { origin: last_coordinate(n, 1), basis: leading_basis(n) };
    let below = AffineChart { origin: last_coordinate(n, -1), basis: leading_basis(n) };
    for attempt in 0..RETRIES {
        let (nodes, deltas) = ladder_params(m, &mut rng, attempt);
        let units = (0..m)
            .map(|i| {
                let (w, b) = ladder_unit(&moment(nodes[i], n - 1), ranks[i], &deltas[i]);
                let weights = w
                    .into_iter()
                    .zip(b)
                    .map(|(mut v, bias)| {
                        v.push(bias);
                        v
                    })
                    .collect();
                MaxoutUnit::new(weights, None)
            })
            .collect();
        let layer = Layer::new(n, BiasMode::NoBias, units)?;
        if certified(&layer)? && certified(&layer.restrict(&above))? && certified(&layer.restrict(&below))? {
            return Ok(layer);
        }
    }
    Err(Error::Precondition(format!("no simple parameters found after {RETRIES} attempts")))
}

fn last_coordinate(n: usize, v: i64) -> Vec<Rational> {
    let mut o = vec![Rational::zero(); n];
    o[n - 1] = int(v);
    o
}

fn leading_basis(n: usize) -> Vec<Vec<Rational>> {
    (0..n - 1)
        .map(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            e
        })
        .collect()
}

/// The deep construction with the largest admissible `n`.
pub fn construct_deep_lower(n0: usize, widths: &[usize], k: usize, seed: u64) -> Result<Network> {
    let hidden = &widths[..widths.len().saturating_sub(1)];
    let n = hidden.iter().map(|w| w / 2).chain([n0]).min().unwrap_or(n0);
    construct_deep_lower_with(n, n0, widths, k, seed)
}

/// Zig-zag folding layers on `n` input coordinates followed by an optimal
/// shallow layer whose regions all meet the unit cube.
pub fn construct_deep_lower_with(n: usize, n0: usize, widths: &[usize], k: usize, seed: u64) -> Result<Network> {
    if widths.is_empty() || k < 2 {
        return Err(Error::Precondition("need at least one layer and rank >= 2".into()));
    }
    if deep_lower_at(n, n0, widths, k, BiasMode::Bias).is_none() {
        let portions: Vec<String> = widths[..widths.len() - 1]
            .iter()
            .map(|&w| if n == 0 { "0".to_string() } else { (w / (2 * n) * 2 * n).to_string() })
            .collect();
        return Err(Error::Precondition(format!(
            "with n={n} each hidden width must be an even multiple of n (largest admissible even portions: {})",
            portions.join(",")
        )));
    }
    let (last, hidden) = widths.split_last().unwrap();
    let mut layers = Vec::new();
    // coefficient of previous output j in coordinate y_i
    let mut mixing: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); n0];
            row[i] = Rational::one();
            row
        })
        .collect();
    let mut in_dim = n0;
    for &width in hidden {
        let per = width / n;
        let breaks = per * (k - 1);
        let s = int(breaks as i64 + 1);
        let b: Vec<Rational> = (1..=breaks as i64).map(|j| frac(j, breaks as i64 + 1)).collect();
        let mut units = Vec::with_capacity(width);
        let mut next_mixing = vec![vec![Rational::zero(); width]; n];
        for (i, next_row) in next_mixing.iter_mut().enumerate() {
            let evens: Vec<Rational> = b.iter().skip(1).step_by(2).cloned().collect();
            let odds: Vec<Rational> = b.iter().step_by(2).cloned().collect();
            for (sign, list) in [(1i64, evens), (-1i64, odds)] {
                for (q, chunk) in list.chunks(k - 1).enumerate() {
                    let linear = if sign == 1 && q == 0 { s.clone() } else { Rational::zero() };
                    let mut weights = Vec::with_capacity(k);
                    let mut biases = Vec::with_capacity(k);
                    let mut offset = Rational::zero();
                    for r in 0..k {
                        if r > 0 {
                            offset += &chunk[r - 1];
                        }
                        let slope = int(2 * r as i64) * &s + &linear;
                        weights.push(mixing[i].iter().map(|c| c * &slope).collect());
                        biases.push(-int(2) * &s * &offset);
                    }
                    next_row[units.len()] = int(sign);
                    units.push(MaxoutUnit::new(weights, Some(biases)));
                }
            }
        }
        layers.push(Layer::new(in_dim, BiasMode::Bias, units)?);
        mixing = next_mixing;
        in_dim = width;
    }
    let shallow = construct_shallow_optimal(n, &vec![k; *last], seed)?;
    let final_layer = if hidden.is_empty() {
        embed(&shallow, &mixing, in_dim)
    } else {
        let cells = arrangement::enumerate_regions(&shallow, &Budget::unlimited())?;
        let mut lo = vec![Rational::zero(); n];
        let mut hi = vec![Rational::zero(); n];
        for i in 0..n {
            let coords = cells.iter().map(|c| c.witness[i].clone());
            lo[i] = coords.clone().min().unwrap() - int(1);
            hi[i] = coords.max().unwrap() + int(1);
        }
        let scale: Vec<Rational> = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
        let boxed = shallow.restrict(&AffineChart {
            origin: lo,
            basis: (0..n)
                .map(|i| {
                    let mut e = vec![Rational::zero(); n];
                    e[i] = scale[i].clone();
                    e
                })
                .collect(),
        });
        // a common slope keeps every Jacobian column nonzero, so folds never merge pieces
        let tilted = Layer {
            units: boxed
                .units
                .iter()
                .map(|u| {
                    let w = u.weights.iter().map(|v| v.iter().map(|x| x + frac(1, 2)).collect()).collect();
                    MaxoutUnit::new(w, u.biases.clone())
                })
                .collect(),
            ..boxed
        };
        embed(&tilted, &mixing, in_dim)
    };
    layers.push(final_layer);
    Network::new(n0, layers)
}

/// Precomposes a layer on `y` with `y = mixing · x`.
fn embed(layer: &Layer, mixing: &[Vec<Rational>], in_dim: usize) -> Layer {
    let units = layer
        .units
        .iter()
        .map(|u| {
            let weights = u
                .weights
                .iter()
                .map(|w| {
                    (0..in_dim)
                        .map(|j| w.iter().zip(mixing).map(|(a, row)| a * &row[j]).sum())
                        .collect()
                })
                .collect();
            MaxoutUnit::new(weights, Some((0..u.rank()).map(|r| u.bias(r)).collect()))
        })
        .collect();
    Layer { input_dim: in_dim, bias_mode: BiasMode::Bias, units }
}

#[derive(Clone, Debug)]
pub struct SampleOptions {
    /// Integer parameters are drawn from `[-bound, bound]`.
    pub bound: i64,
    pub retries: usize,
    /// For layers with biases, also require the homogenized layer and its
    /// part at infinity (weights only) to be simple.
    pub certify_lift: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { bound: 12, retries: 200, certify_lift: false }
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub layer: Layer,
    /// Number of rejected draws before the certified one.
    pub rejected: usize,
}

/// Integer parameters from a seeded grid, certified simple.
pub fn sample_generic(n: usize, ranks: &[usize], bias_mode: BiasMode, seed: u64, opts: &SampleOptions) -> Result<Sample> {
    if n == 0 {
        return Err(Error::Precondition("input dimension must be at least 1".into()));
    }
    if ranks.contains(&0) {
        return Err(Error::Precondition("ranks must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| int(rng.gen_range(-opts.bound..=opts.bound));
    for rejected in 0..opts.retries {
        let mut units = Vec::with_capacity(ranks.len());
        let mut distinct = true;
        for &k in ranks {
            let weights: Vec<Vec<Rational>> = (0..k).map(|_| (0..n).map(|_| draw(&mut rng)).collect()).collect();
            let biases = match bias_mode {
                BiasMode::Bias => Some((0..k).map(|_| draw(&mut rng)).collect::<Vec<_>>()),
                BiasMode::NoBias => None,
            };
            let u = MaxoutUnit::new(weights, biases);
            for a in 0..k {
                for b in a + 1..k {
                    if u.lifted(a) == u.lifted(b) {
                        distinct = false;
                    }
                }
            }
            units.push(u);
        }
        if !distinct {
            continue;
        }
        let layer = Layer::new(n, bias_mode, units)?;
        if !certified(&layer)? {
            continue;
        }
        if opts.certify_lift
            && bias_mode == BiasMode::Bias
            && !(certified(&layer.homogenize())? && certified(&at_infinity(&layer))?)
        {
            continue;
        }
        return Ok(Sample { layer, rejected });
    }
    Err(Error::Precondition(format!(
        "no simple sample in {} draws; try a larger parameter bound than {}",
        opts.retries, opts.bound
    )))
}

fn at_infinity(layer: &Layer) -> Layer {
    Layer {
        input_dim: layer.input_dim,
        bias_mode: BiasMode::NoBias,
        units: layer.units.iter().map(|u| MaxoutUnit::new(u.weights.clone(), None)).collect(),
    }
}

/// One piece of a piecewise affine map of a real parameter `s`.
#[derive(Clone, Debug, PartialEq)]
struct Piece {
    /// Left end; `None` is minus infinity.
    start: Option<Rational>,
    slopes: Vec<Rational>,
    intercepts: Vec<Rational>,
}

fn probe(start: &Option<Rational>, end: &Option<Rational>) -> Rational {
    match (start, end) {
        (None, None) => Rational::zero(),
        (None, Some(b)) => b - int(1),
        (Some(a), None) => a + int(1),
        (Some(a), Some(b)) => (a + b) / int(2),
    }
}

/// Linear regions of `s -> net(origin + s * direction)`, counted exactly by
/// propagating breakpoints through the layers.
pub fn count_regions_on_line(net: &Network, origin: &[Rational], direction: &[Rational]) -> Result<u64> {
    if origin.len() != net.input_dim || direction.len() != net.input_dim {
        return Err(Error::Input("line does not live in the input space".into()));
    }
    let mut pieces = vec![Piece { start: None, slopes: direction.to_vec(), intercepts: origin.to_vec() }];
    for layer in &net.layers {
        let mut next = Vec::new();
        for (idx, p) in pieces.iter().enumerate() {
            let end = pieces.get(idx + 1).and_then(|q| q.start.clone());
            // each feature is alpha s + beta on this piece
            let feats: Vec<Vec<(Rational, Rational)>> = layer
                .units
                .iter()
                .map(|u| {
                    (0..u.rank())
                        .map(|r| {
                            let w = &u.weights[r];
                            let alpha: Rational = w.iter().zip(&p.slopes).map(|(a, b)| a * b).sum();
                            let beta: Rational = w.iter().zip(&p.intercepts).map(|(a, b)| a * b).sum::<Rational>() + u.bias(r);
                            (alpha, beta)
                        })
                        .collect()
                })
                .collect();
            let inside = |t: &Rational| {
                p.start.as_ref().is_none_or(|a| t > a) && end.as_ref().is_none_or(|b| t < b)
            };
            let mut cuts: Vec<Rational> = Vec::new();
            for f in &feats {
                for a in 0..f.len() {
                    for b in a + 1..f.len() {
                        if f[a].0 != f[b].0 {
                            let t = (&f[b].1 - &f[a].1) / (&f[a].0 - &f[b].0);
                            if inside(&t) {
                                cuts.push(t);
                            }
                        }
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            let mut starts = vec![p.start.clone()];
            starts.extend(cuts.into_iter().map(Some));
            for (j, st) in starts.iter().enumerate() {
                let en = starts.get(j + 1).cloned().flatten().or_else(|| end.clone());
                let t = probe(st, &en);
                let mut slopes = Vec::with_capacity(feats.len());
                let mut intercepts = Vec::with_capacity(feats.len());
                for f in &feats {
                    let best = f
                        .iter()
                        .max_by(|x, y| (&x.0 * &t + &x.1).cmp(&(&y.0 * &t + &y.1)))
                        .expect("rank >= 1");
                    slopes.push(best.0.clone());
                    intercepts.push(best.1.clone());
                }
                next.push(Piece { start: st.clone(), slopes, intercepts });
            }
        }
        next.dedup_by(|b, a| a.slopes == b.slopes && a.intercepts == b.intercepts);
        pieces = next;
    }
    Ok(pieces.len() as u64)
}
