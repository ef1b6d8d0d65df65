//! Maxout arrangements: atoms, argmax cells, the intersection poset with its
//! Möbius function, and the counting formulas evaluated on it.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bounds::binom;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geometry::{self, affine_chart, ConstraintSystem, Constraint};
use crate::network::{BiasMode, Layer, MaxoutUnit};
use crate::rational::{self, Rational};

/// `coeffs · x >= rhs` iff feature `a` is at least feature `c`.
fn dominance(u: &MaxoutUnit, a: usize, c: usize) -> (Vec<Rational>, Rational) {
    let coeffs = u.weights[a].iter().zip(&u.weights[c]).map(|(x, y)| x - y).collect();
    (coeffs, u.bias(c) - u.bias(a))
}

/// Indices of pairwise distinct features; each class is a list of equal ones.
fn feature_classes(u: &MaxoutUnit) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for r in 0..u.rank() {
        match classes.iter_mut().find(|c| u.weights[c[0]] == u.weights[r] && u.bias(c[0]) == u.bias(r)) {
            Some(c) => c.push(r),
            None => classes.push(vec![r]),
        }
    }
    classes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub unit: usize,
    pub pair: (usize, usize),
    pub geometry: ConstraintSystem,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub ambient_dim: usize,
    pub units: usize,
    pub atoms: Vec<Atom>,
    pub central: bool,
}

/// All nonempty codimension-one indecision sets of the layer.
pub fn build_atoms(layer: &Layer, budget: &Budget) -> Result<Arrangement> {
    let n = layer.input_dim;
    let mut atoms = Vec::new();
    for (i, u) in layer.units.iter().enumerate() {
        let reps: Vec<usize> = feature_classes(u).into_iter().map(|c| c[0]).collect();
        if reps.len() < 2 {
            continue;
        }
        for (x, &a) in reps.iter().enumerate() {
            for &b in &reps[x + 1..] {
                let mut sys = ConstraintSystem::new(n);
                let (c, r) = dominance(u, a, b);
                sys.add_eq(c, r);
                for &c in reps.iter().filter(|&&c| c != a && c != b) {
                    let (co, r) = dominance(u, a, c);
                    sys.add_ge(co, r);
                }
                budget.charge(1)?;
                if geometry::affine_dimension(&sys)? == Some(n - 1) {
                    atoms.push(Atom { unit: i, pair: (a, b), geometry: sys });
                }
            }
        }
    }
    Ok(Arrangement { ambient_dim: n, units: layer.width(), atoms, central: layer.bias_mode == BiasMode::NoBias })
}

/// A relatively open set of inputs with fixed argmax sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub signature: Vec<Vec<usize>>,
    pub dim: usize,
    pub bounded: bool,
    pub witness: Vec<Rational>,
}

impl Cell {
    pub fn to_json(&self) -> Value {
        json!({
            "signature": self.signature.iter().map(|t| t.iter().map(|r| r + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "dim": self.dim,
            "bounded": self.bounded,
            "witness": rational::vec_to_json(&self.witness),
        })
    }
}

struct CellSearch<'a> {
    layer: &'a Layer,
    classes: Vec<Vec<Vec<usize>>>,
    regions_only: bool,
    budget: &'a Budget,
}

impl CellSearch<'_> {
    fn choices(&self, unit: usize) -> Vec<u64> {
        let c = self.classes[unit].len();
        if self.regions_only {
            (0..c).map(|i| 1u64 << i).collect()
        } else {
            (1..(1u64 << c)).collect()
        }
    }

    fn extend(&self, sys: &ConstraintSystem, unit: usize, mask: u64) -> ConstraintSystem {
        let u = &self.layer.units[unit];
        let reps: Vec<usize> = self.classes[unit].iter().map(|c| c[0]).collect();
        let chosen: Vec<usize> = (0..reps.len()).filter(|&i| mask >> i & 1 == 1).map(|i| reps[i]).collect();
        let a = chosen[0];
        let mut out = sys.clone();
        for &b in &chosen[1..] {
            let (c, r) = dominance(u, a, b);
            out.add_eq(c, r);
        }
        for (i, &c) in reps.iter().enumerate() {
            if mask >> i & 1 == 0 {
                let (co, r) = dominance(u, a, c);
                out.add_ge(co, r);
            }
        }
        out
    }

    fn descend(&self, sys: ConstraintSystem, unit: usize, masks: &mut Vec<u64>, out: &mut Vec<Cell>) -> Result<()> {
        if unit == self.layer.width() {
            out.push(self.finish(&sys, masks)?);
            return Ok(());
        }
        for mask in self.choices(unit) {
            let next = self.extend(&sys, unit, mask);
            self.budget.charge(1)?;
            if geometry::strictly_feasible(&next)?.is_none() {
                continue;
            }
            masks.push(mask);
            self.descend(next, unit + 1, masks, out)?;
            masks.pop();
        }
        Ok(())
    }

    fn finish(&self, sys: &ConstraintSystem, masks: &[u64]) -> Result<Cell> {
        let n = sys.ambient_dim;
        self.budget.charge(2)?;
        let witness = geometry::strictly_feasible(sys)?.expect("checked nonempty");
        let eq_rows: Vec<Vec<Rational>> = sys.equalities.iter().map(|c| c.coeffs.clone()).collect();
        let dim = n - geometry::rank(&eq_rows, n);
        let p = geometry::recession_profile(sys)?;
        let signature = masks
            .iter()
            .zip(&self.classes)
            .map(|(&mask, cls)| {
                let mut t: Vec<usize> =
                    (0..cls.len()).filter(|&i| mask >> i & 1 == 1).flat_map(|i| cls[i].iter().copied()).collect();
                t.sort_unstable();
                t
            })
            .collect();
        Ok(Cell { signature, dim, bounded: p.lineality_dim == 0 && p.pointed_part_bounded, witness })
    }
}

fn run_cells(layer: &Layer, regions_only: bool, budget: &Budget) -> Result<Vec<Cell>> {
    let classes: Vec<Vec<Vec<usize>>> = layer.units.iter().map(feature_classes).collect();
    if classes.iter().any(|c| c.len() > 63) {
        return Err(Error::Budget("cell enumeration supports at most 63 distinct features per unit".into()));
    }
    let needed: u128 = classes
        .iter()
        .map(|c| if regions_only { c.len() as u128 } else { (1u128 << c.len().min(100)) - 1 })
        .try_fold(1u128, |acc, v| acc.checked_mul(v))
        .unwrap_or(u128::MAX);
    budget.check_signatures(needed)?;
    let search = CellSearch { layer, classes, regions_only, budget };
    let root = ConstraintSystem::new(layer.input_dim);
    if layer.width() == 0 {
        return Ok(vec![search.finish(&root, &[])?]);
    }
    let parts: Vec<Result<Vec<Cell>>> = search
        .choices(0)
        .into_par_iter()
        .map(|mask| {
            let next = search.extend(&root, 0, mask);
            budget.charge(1)?;
            let mut out = Vec::new();
            if geometry::strictly_feasible(&next)?.is_some() {
                search.descend(next, 1, &mut vec![mask], &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut cells = Vec::new();
    for p in parts {
        cells.extend(p?);
    }
    Ok(cells)
}

/// Every nonempty argmax cell of the layer, in signature order.
pub fn enumerate_cells(layer: &Layer, budget: &Budget) -> Result<Vec<Cell>> {
    run_cells(layer, false, budget)
}

/// The full-dimensional cells only.
pub fn enumerate_regions(layer: &Layer, budget: &Budget) -> Result<Vec<Cell>> {
    run_cells(layer, true, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionCount {
    pub regions: u64,
    pub bounded_regions: u64,
}

pub fn count_regions_bruteforce(layer: &Layer, budget: &Budget) -> Result<RegionCount> {
    let cells = enumerate_regions(layer, budget)?;
    Ok(RegionCount { regions: cells.len() as u64, bounded_regions: cells.iter().filter(|c| c.bounded).count() as u64 })
}

/// Number of cells of each dimension `0..=n`.
pub fn face_counts_bruteforce(layer: &Layer, budget: &Budget) -> Result<Vec<u64>> {
    let mut f = vec![0u64; layer.input_dim + 1];
    for c in enumerate_cells(layer, budget)? {
        f[c.dim] += 1;
    }
    Ok(f)
}

#[derive(Clone, Debug)]
pub struct PosetElement {
    pub id: usize,
    pub geometry: ConstraintSystem,
    pub dim: usize,
    pub psi: i64,
    /// Atoms containing the element; the element is their intersection.
    pub atoms: Vec<usize>,
    /// The atom subset through which the element was first reached.
    pub generator: Vec<usize>,
    pub support: Option<Vec<usize>>,
}

/// Intersection poset ordered by reverse inclusion; element 0 is the ambient space.
#[derive(Clone, Debug)]
pub struct Poset {
    pub ambient_dim: usize,
    pub elements: Vec<PosetElement>,
    /// `mobius[y] = μ(0̂, y)`.
    pub mobius: Vec<i64>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl Poset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `x <= y`, i.e. `y` is contained in `x`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        is_subset(&self.elements[x].atoms, &self.elements[y].atoms)
    }

    /// `μ(x, y)` for all `y`, zero where `y` is not above `x`.
    pub fn mobius_from(&self, x: usize) -> Vec<i64> {
        let mut mu = vec![0i64; self.len()];
        let mut above: Vec<usize> = (0..self.len()).filter(|&y| self.leq(x, y)).collect();
        above.sort_by_key(|&y| self.elements[y].atoms.len());
        for (k, &y) in above.iter().enumerate() {
            if y == x {
                mu[y] = 1;
                continue;
            }
            mu[y] = -above[..k].iter().filter(|&&t| self.leq(t, y) && t != y).map(|&t| mu[t]).sum::<i64>();
        }
        mu
    }

    /// Pairs `(x, y)` with `y` covering `x`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y || !self.leq(x, y) {
                    continue;
                }
                let between = (0..n).any(|t| t != x && t != y && self.leq(x, t) && self.leq(t, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let elements: Vec<Value> = self
            .elements
            .iter()
            .map(|e| {
                json!({
                    "id": e.id,
                    "dim": e.dim,
                    "psi": e.psi,
                    "mobius": self.mobius[e.id],
                    "support": e.support,
                    "atoms": e.atoms,
                    "generator": e.generator,
                })
            })
            .collect();
        json!({ "ambient_dim": self.ambient_dim, "elements": elements, "covers": self.covers() })
    }
}

pub fn build_poset(arr: &Arrangement, budget: &Budget) -> Result<Poset> {
    let n = arr.ambient_dim;
    let ambient = ConstraintSystem::new(n);
    let mut elements = vec![PosetElement {
        id: 0,
        geometry: ambient,
        dim: n,
        psi: if n.is_multiple_of(2) { 1 } else { -1 },
        atoms: vec![],
        generator: vec![],
        support: Some(vec![]),
    }];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(vec![], 0);
    let mut next = 0;
    while next < elements.len() {
        let y = elements[next].clone();
        next += 1;
        for a in 0..arr.atoms.len() {
            if y.atoms.binary_search(&a).is_ok() {
                continue;
            }
            let z = y.geometry.intersect(&arr.atoms[a].geometry);
            budget.charge(1)?;
            let Some(w) = geometry::feasible(&z)? else { continue };
            let mut key = Vec::new();
            for (b, atom) in arr.atoms.iter().enumerate() {
                let inside = if b == a || y.atoms.binary_search(&b).is_ok() {
                    true
                } else if !atom.geometry.contains_point(&w) {
                    false
                } else {
                    budget.charge(1)?;
                    geometry::contains(&atom.geometry, &z)?
                };
                if inside {
                    key.push(b);
                }
            }
            if index.contains_key(&key) {
                continue;
            }
            budget.charge(2)?;
            let dim = geometry::affine_dimension(&z)?.expect("nonempty");
            let psi = geometry::euler_characteristic(&z)?;
            let mut units: Vec<usize> = key.iter().map(|&b| arr.atoms[b].unit).collect();
            units.dedup();
            let support = if arr.central && dim == 0 { None } else { Some(units) };
            let mut generator = y.generator.clone();
            generator.push(a);
            let id = elements.len();
            index.insert(key.clone(), id);
            elements.push(PosetElement { id, geometry: z, dim, psi, atoms: key, generator, support });
        }
    }
    // canonical order: by dimension descending, then by atom key
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&i, &j| elements[j].dim.cmp(&elements[i].dim).then_with(|| elements[i].atoms.cmp(&elements[j].atoms)));
    let mut sorted: Vec<PosetElement> = order.into_iter().map(|i| elements[i].clone()).collect();
    for (id, e) in sorted.iter_mut().enumerate() {
        e.id = id;
    }
    let mut poset = Poset { ambient_dim: n, elements: sorted, mobius: vec![] };
    poset.mobius = poset.mobius_from(0);
    Ok(poset)
}

/// `(-1)^n sum_y ψ(y) μ(y)`.
pub fn count_regions_poset(poset: &Poset) -> BigInt {
    let total: i64 = poset.elements.iter().map(|e| e.psi * poset.mobius[e.id]).sum();
    BigInt::from(if poset.ambient_dim.is_multiple_of(2) { total } else { -total })
}

/// Number of `s`-dimensional faces.
pub fn count_faces_poset(poset: &Poset, s: usize) -> Result<BigInt> {
    if s > poset.ambient_dim {
        return Err(Error::Input(format!("face dimension {s} exceeds ambient dimension {}", poset.ambient_dim)));
    }
    let mut total = 0i64;
    for x in poset.elements.iter().filter(|e| e.dim == s) {
        let mu = poset.mobius_from(x.id);
        let inner: i64 = poset.elements.iter().map(|y| y.psi * mu[y.id]).sum();
        total += if s.is_multiple_of(2) { inner } else { -inner };
    }
    Ok(BigInt::from(total))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityCertificate {
    pub simple: bool,
    /// Atom indices of the first offending intersection.
    pub violation: Option<Vec<usize>>,
    pub checked: u64,
}

/// Checks that `j` atoms of distinct units meet in codimension `j`, or not at
/// all (only in the origin, for central arrangements).
pub fn is_simple(arr: &Arrangement, budget: &Budget) -> Result<SimplicityCertificate> {
    let n = arr.ambient_dim;
    let max_size = if arr.central { n } else { n + 1 };
    let mut by_unit: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, a) in arr.atoms.iter().enumerate() {
        by_unit.entry(a.unit).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = by_unit.into_values().collect();
    let mut cert = SimplicityCertificate { simple: true, violation: None, checked: 0 };
    let mut chosen = Vec::new();
    simple_dfs(arr, &groups, 0, &ConstraintSystem::new(n), max_size, &mut chosen, &mut cert, budget)?;
    Ok(cert)
}

#[allow(clippy::too_many_arguments)]
fn simple_dfs(
    arr: &Arrangement,
    groups: &[Vec<usize>],
    start: usize,
    sys: &ConstraintSystem,
    max_size: usize,
    chosen: &mut Vec<usize>,
    cert: &mut SimplicityCertificate,
    budget: &Budget,
) -> Result<()> {
    let n = arr.ambient_dim;
    for g in start..groups.len() {
        for &a in &groups[g] {
            let next = sys.intersect(&arr.atoms[a].geometry);
            chosen.push(a);
            budget.charge(1)?;
            cert.checked += 1;
            let dim = geometry::affine_dimension(&next)?;
            let j = chosen.len();
            let ok = match dim {
                None => true,
                Some(0) if arr.central => true,
                Some(d) => j <= n && d == n - j,
            };
            if !ok {
                cert.simple = false;
                cert.violation = Some(chosen.clone());
                return Ok(());
            }
            let extendable = match dim {
                None => false,
                Some(0) if arr.central => false,
                _ => j < max_size,
            };
            if extendable {
                simple_dfs(arr, groups, g + 1, &next, max_size, chosen, cert, budget)?;
                if !cert.simple {
                    return Ok(());
                }
            }
            chosen.pop();
        }
    }
    Ok(())
}

/// Regions of every sub-layer with at most `max_size` units, keyed by unit set.
pub fn subset_region_counts(layer: &Layer, max_size: usize, budget: &Budget) -> Result<BTreeMap<Vec<usize>, u64>> {
    let m = layer.width();
    let mut out = BTreeMap::new();
    for size in 0..=max_size.min(m) {
        for s in combinations(m, size) {
            let r = count_regions_bruteforce(&layer.sub_layer(&s), budget)?.regions;
            out.insert(s, r);
        }
    }
    Ok(out)
}

pub fn combinations(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < left {
                break;
            }
            cur.push(i);
            go(i + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, size, &mut Vec::new(), &mut out);
    out
}

/// `sum_{j<=n} (-1)^{n-j} C(m-1-j, n-j) sum_{|S|=j} counts[S]`.
pub fn alternating_subsum(m: usize, n: usize, counts: &BTreeMap<Vec<usize>, u64>) -> BigInt {
    let mut per_size = vec![BigInt::zero(); n + 1];
    for (s, &r) in counts {
        if s.len() <= n {
            per_size[s.len()] += BigInt::from(r);
        }
    }
    (0..=n)
        .map(|j| {
            let t = binom(m as i64 - 1 - j as i64, (n - j) as i64) * &per_size[j];
            if (n - j).is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .sum()
}

pub use crate::bounds::IdentityCheck;

fn require_simple(layer: &Layer, budget: &Budget) -> Result<()> {
    let arr = build_atoms(layer, budget)?;
    let cert = is_simple(&arr, budget)?;
    if !cert.simple {
        return Err(Error::Precondition(format!("arrangement is not simple (atoms {:?})", cert.violation.unwrap())));
    }
    Ok(())
}

/// Regions of a simple layer with biases against the alternating subsum.
pub fn subsum_identity_noncentral(layer: &Layer, budget: &Budget) -> Result<IdentityCheck> {
    let (m, n) = (layer.width(), layer.input_dim);
    if layer.bias_mode != BiasMode::Bias {
        return Err(Error::Precondition("expected a layer with biases".into()));
    }
    if m < n + 1 {
        return Err(Error::Precondition(format!("need m >= n + 1, got m={m}, n={n}")));
    }
    require_simple(layer, budget)?;
    let counts = subset_region_counts(layer, n, budget)?;
    let lhs = BigInt::from(count_regions_bruteforce(layer, budget)?.regions);
    Ok(IdentityCheck { lhs, rhs: alternating_subsum(m, n, &counts) })
}

/// Regions of a simple bias-free layer on `Q^{n+1}` against
/// `C(m-1, n)` plus the alternating subsum.
pub fn subsum_identity_central(layer: &Layer, budget: &Budget) -> Result<IdentityCheck> {
    let m = layer.width();
    if layer.bias_mode != BiasMode::NoBias {
        return Err(Error::Precondition("expected a layer without biases".into()));
    }
    let n = layer.input_dim - 1;
    if m < n + 1 {
        return Err(Error::Precondition(format!("need m >= n + 1, got m={m}, n={n}")));
    }
    require_simple(layer, budget)?;
    let counts = subset_region_counts(layer, n, budget)?;
    let lhs = BigInt::from(count_regions_bruteforce(layer, budget)?.regions);
    let rhs = binom(m as i64 - 1, n as i64) + alternating_subsum(m, n, &counts);
    Ok(IdentityCheck { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub r_a: u64,
    pub r_ag: u64,
    pub gap: i64,
    pub floor: BigInt,
}

impl GapReport {
    pub fn holds(&self) -> bool {
        BigInt::from(self.gap) >= self.floor
    }
}

/// Regions of a central layer versus the regions it induces on `{<x, w> = 1}`.
pub fn bounded_region_gap(layer: &Layer, w: &[Rational], budget: &Budget) -> Result<GapReport> {
    let m = layer.width();
    if layer.bias_mode != BiasMode::NoBias {
        return Err(Error::Precondition("expected a central (bias-free) layer".into()));
    }
    if w.len() != layer.input_dim {
        return Err(Error::Input(format!("hyperplane normal has {} entries, expected {}", w.len(), layer.input_dim)));
    }
    if w.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("hyperplane normal must be nonzero".into()));
    }
    let n = layer.input_dim - 1;
    if m < n + 1 {
        return Err(Error::Precondition(format!("need m >= n + 1, got m={m}, n={n}")));
    }
    require_simple(layer, budget)?;
    let chart = affine_chart(layer.input_dim, &[Constraint::new(w.to_vec(), Rational::one())]).expect("nonzero normal");
    let r_a = count_regions_bruteforce(layer, budget)?.regions;
    let r_ag = count_regions_bruteforce(&layer.restrict(&chart), budget)?.regions;
    Ok(GapReport { r_a, r_ag, gap: r_a as i64 - r_ag as i64, floor: binom(m as i64 - 1, n as i64) })
}

/// `Σ (-1)^dim` over all cells.
pub fn euler_sum(cells: &[Cell]) -> i64 {
    cells.iter().map(|c| if c.dim % 2 == 0 { 1 } else { -1 }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn unit(ws: &[&[i64]], bs: Option<&[i64]>) -> MaxoutUnit {
        MaxoutUnit::new(ws.iter().map(|w| v(w)).collect(), bs.map(v))
    }

    fn relu() -> Layer {
        Layer::new(1, BiasMode::Bias, vec![unit(&[&[1], &[0]], Some(&[0, 0]))]).unwrap()
    }

    #[test]
    fn relu_cells() {
        let b = Budget::default();
        let cells = enumerate_cells(&relu(), &b).unwrap();
        assert_eq!(cells.len(), 3);
        assert_eq!(cells.iter().filter(|c| c.dim == 1).count(), 2);
        let tie = cells.iter().find(|c| c.dim == 0).unwrap();
        assert_eq!(tie.signature, vec![vec![0, 1]]);
        assert_eq!(build_atoms(&relu(), &b).unwrap().atoms.len(), 1);
    }

    #[test]
    fn dominated_feature_gives_no_atom() {
        let l = Layer::new(1, BiasMode::Bias, vec![unit(&[&[1], &[1]], Some(&[0, 1]))]).unwrap();
        assert!(build_atoms(&l, &Budget::default()).unwrap().atoms.is_empty());
        let empty = Layer::new(3, BiasMode::Bias, vec![]).unwrap();
        let arr = build_atoms(&empty, &Budget::default()).unwrap();
        let poset = build_poset(&arr, &Budget::default()).unwrap();
        assert_eq!(count_regions_poset(&poset), BigInt::from(1));
        assert_eq!(count_regions_bruteforce(&empty, &Budget::default()).unwrap().regions, 1);
    }

    #[test]
    fn duplicate_features_collapse() {
        let l = Layer::new(1, BiasMode::Bias, vec![unit(&[&[1], &[0], &[1]], Some(&[0, 0, 0]))]).unwrap();
        let b = Budget::default();
        assert_eq!(count_regions_bruteforce(&l, &b).unwrap().regions, 2);
        let cells = enumerate_cells(&l, &b).unwrap();
        assert!(cells.iter().any(|c| c.signature == vec![vec![0, 2]] && c.dim == 1));
    }

    #[test]
    fn three_lines() {
        let l = Layer::new(
            2,
            BiasMode::Bias,
            vec![
                unit(&[&[1, 0], &[0, 0]], Some(&[0, 0])),
                unit(&[&[0, 1], &[0, 0]], Some(&[0, 0])),
                unit(&[&[1, 1], &[0, 0]], Some(&[-1, 0])),
            ],
        )
        .unwrap();
        let b = Budget::default();
        let arr = build_atoms(&l, &b).unwrap();
        assert!(is_simple(&arr, &b).unwrap().simple);
        let poset = build_poset(&arr, &b).unwrap();
        assert_eq!(poset.len(), 7);
        assert!(poset.elements.iter().filter(|e| e.dim == 0).all(|e| poset.mobius[e.id] == 1));
        assert_eq!(count_regions_poset(&poset), BigInt::from(7));
        assert_eq!(count_faces_poset(&poset, 0).unwrap(), BigInt::from(3));
        let r = count_regions_bruteforce(&l, &b).unwrap();
        assert_eq!(r, RegionCount { regions: 7, bounded_regions: 1 });
        let id = subsum_identity_noncentral(&l, &b).unwrap();
        assert_eq!((id.lhs.clone(), id.rhs.clone()), (BigInt::from(7), BigInt::from(7)));
    }

    #[test]
    fn shared_hyperplane_is_not_simple() {
        let l = Layer::new(
            2,
            BiasMode::Bias,
            vec![unit(&[&[1, 0], &[0, 0]], Some(&[0, 0])), unit(&[&[2, 0], &[0, 0]], Some(&[0, 0]))],
        )
        .unwrap();
        let b = Budget::default();
        let cert = is_simple(&build_atoms(&l, &b).unwrap(), &b).unwrap();
        assert!(!cert.simple);
        assert_eq!(cert.violation, Some(vec![0, 1]));
    }

    #[test]
    fn identity_preconditions() {
        let b = Budget::default();
        assert!(subsum_identity_noncentral(&relu(), &b).is_err());
        let central = Layer::new(
            3,
            BiasMode::NoBias,
            vec![unit(&[&[1, 0, 0], &[0, 0, 0]], None), unit(&[&[0, 1, 0], &[0, 0, 0]], None)],
        )
        .unwrap();
        assert!(subsum_identity_central(&central, &b).is_err());
        assert!(bounded_region_gap(&central, &v(&[0, 0, 1]), &b).is_err());
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
