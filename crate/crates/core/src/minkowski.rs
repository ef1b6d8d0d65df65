//! Minkowski sums of finite point sets and LP-based vertex classification.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arrangement::{combinations, count_regions_bruteforce};
use crate::bounds::{binom, IdentityCheck};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lp::{self, Constraint, LpOutcome};
use crate::network::{BiasMode, Layer};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPointSet {
    pub ambient_dim: usize,
    pub points: Vec<Vec<Rational>>,
    pub label: String,
}

impl LabeledPointSet {
    /// Validates dimensions and drops repeated points, keeping first occurrences.
    pub fn new(ambient_dim: usize, points: Vec<Vec<Rational>>, label: impl Into<String>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Input("point sets need ambient dimension >= 1".into()));
        }
        let mut out: Vec<Vec<Rational>> = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != ambient_dim {
                return Err(Error::Input(format!("point {i} has {} coordinates, expected {ambient_dim}", p.len())));
            }
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(LabeledPointSet { ambient_dim, points: out, label: label.into() })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "ambient_dim": self.ambient_dim,
            "points": self.points.iter().map(|p| rational::vec_to_json(p)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(doc: &Value, path: &str) -> Result<Self> {
        let pts = doc
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(path, "expected an object with a \"points\" array"))?;
        let mut points = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            let arr = p.as_array().ok_or_else(|| Error::parse(format!("{path}.points[{i}]"), "expected an array"))?;
            let mut v = Vec::with_capacity(arr.len());
            for (j, x) in arr.iter().enumerate() {
                v.push(rational::from_json(x).map_err(|e| Error::parse(format!("{path}.points[{i}][{j}]"), e))?);
            }
            points.push(v);
        }
        let dim = match doc.get("ambient_dim") {
            Some(d) => d.as_u64().ok_or_else(|| Error::parse(format!("{path}.ambient_dim"), "expected an integer"))? as usize,
            None => points.first().map_or(0, Vec::len),
        };
        let label = doc.get("label").and_then(Value::as_str).unwrap_or("").to_string();
        LabeledPointSet::new(dim, points, label)
    }
}

/// Reads either one point set or `{"sets": [...]}`, a family of them.
pub fn parse_point_sets(text: &str) -> Result<Vec<LabeledPointSet>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
    match doc.get("sets") {
        Some(Value::Array(sets)) => sets
            .iter()
            .enumerate()
            .map(|(i, s)| LabeledPointSet::from_json(s, &format!("sets[{i}]")))
            .collect(),
        Some(_) => Err(Error::parse("sets", "expected an array")),
        None => Ok(vec![LabeledPointSet::from_json(&doc, "$")?]),
    }
}

pub fn point_sets_to_json(sets: &[LabeledPointSet]) -> Value {
    json!({ "sets": sets.iter().map(LabeledPointSet::to_json).collect::<Vec<_>>() })
}

/// One point set per unit: `(w, b)` with biases, `w` without.
pub fn lift_layer(layer: &Layer) -> Vec<LabeledPointSet> {
    let d = match layer.bias_mode {
        BiasMode::Bias => layer.input_dim + 1,
        BiasMode::NoBias => layer.input_dim,
    };
    layer
        .units
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let pts = (0..u.rank())
                .map(|r| match layer.bias_mode {
                    BiasMode::Bias => u.lifted(r),
                    BiasMode::NoBias => u.weights[r].clone(),
                })
                .collect();
            LabeledPointSet::new(d.max(1), pts, format!("unit {}", j + 1)).expect("layer dimensions are consistent")
        })
        .collect()
}

pub fn minkowski_sum(sets: &[LabeledPointSet]) -> Result<LabeledPointSet> {
    let Some(first) = sets.first() else {
        return Err(Error::Input("cannot sum an empty family".into()));
    };
    let d = first.ambient_dim;
    if let Some(bad) = sets.iter().find(|s| s.ambient_dim != d) {
        return Err(Error::Input(format!("dimension mismatch: {} versus {d} ({})", bad.ambient_dim, bad.label)));
    }
    let mut acc = first.points.clone();
    for s in &sets[1..] {
        let mut next = Vec::with_capacity(acc.len() * s.len());
        for a in &acc {
            for b in &s.points {
                let p: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                next.push(p);
            }
        }
        next.sort();
        next.dedup();
        acc = next;
    }
    let label = sets.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join(" + ");
    LabeledPointSet::new(d, acc, label)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointClass {
    pub is_vertex: bool,
    pub is_upper_vertex: bool,
    pub is_strict_lower_vertex: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClassification {
    pub points: Vec<PointClass>,
}

impl VertexClassification {
    pub fn vertices(&self) -> usize {
        self.points.iter().filter(|c| c.is_vertex).count()
    }

    pub fn upper(&self) -> usize {
        self.points.iter().filter(|c| c.is_upper_vertex).count()
    }

    pub fn strict_lower(&self) -> usize {
        self.points.iter().filter(|c| c.is_strict_lower_vertex).count()
    }

    /// Vertices exposed by a horizontal normal only.
    pub fn horizontal(&self) -> usize {
        self.vertices() - self.upper() - self.strict_lower()
    }

    pub fn to_json(&self, set: &LabeledPointSet) -> Value {
        json!({
            "vertices": self.vertices(),
            "upper_vertices": self.upper(),
            "strict_lower_vertices": self.strict_lower(),
            "horizontal_vertices": self.horizontal(),
            "points": set.points.iter().zip(&self.points).map(|(p, c)| json!({
                "point": rational::vec_to_json(p),
                "vertex": c.is_vertex,
                "upper": c.is_upper_vertex,
                "strict_lower": c.is_strict_lower_vertex,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Is `p` in the hull of the other points, optionally extended downward
/// along the last axis? Witness normals exist exactly when it is not.
fn covered(set: &LabeledPointSet, i: usize, downward: bool) -> bool {
    let d = set.ambient_dim;
    let others: Vec<&Vec<Rational>> = set.points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
    let vars = others.len() + usize::from(downward);
    let mut eqs: Vec<Constraint> = (0..d)
        .map(|c| {
            let mut row: Vec<Rational> = others.iter().map(|q| q[c].clone()).collect();
            if downward {
                row.push(if c == d - 1 { -Rational::one() } else { Rational::zero() });
            }
            Constraint::new(row, set.points[i][c].clone())
        })
        .collect();
    let mut ones = vec![Rational::one(); others.len()];
    if downward {
        ones.push(Rational::zero());
    }
    eqs.push(Constraint::new(ones, Rational::one()));
    !matches!(lp::solve_nonneg(vars, &eqs, &[], None), LpOutcome::Infeasible)
}

fn classify_point(set: &LabeledPointSet, i: usize) -> PointClass {
    if covered(set, i, false) {
        return PointClass::default();
    }
    let upper = !covered(set, i, true);
    PointClass { is_vertex: true, is_upper_vertex: upper, is_strict_lower_vertex: !upper }
}

/// Two LPs per point; points are processed in parallel.
pub fn classify_vertices(set: &LabeledPointSet, budget: &Budget) -> Result<VertexClassification> {
    if set.is_empty() {
        return Err(Error::Empty);
    }
    budget.charge(2 * set.len() as u64)?;
    let points = (0..set.len()).into_par_iter().map(|i| classify_point(set, i)).collect();
    Ok(VertexClassification { points })
}

/// Features of each unit that win on some open set: upper vertices of the
/// lifted points with biases, vertices without.
pub fn effective_ranks(layer: &Layer, budget: &Budget) -> Result<Vec<usize>> {
    lift_layer(layer)
        .iter()
        .map(|s| {
            let c = classify_vertices(s, budget)?;
            Ok(match layer.bias_mode {
                BiasMode::Bias => c.upper(),
                BiasMode::NoBias => c.vertices(),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub region_count: u64,
    /// Upper vertices with biases, all vertices without.
    pub vertex_count: u64,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.region_count == self.vertex_count
    }
}

pub fn duality_check(layer: &Layer, budget: &Budget) -> Result<DualityReport> {
    let region_count = count_regions_bruteforce(layer, budget)?.regions;
    let vertex_count = if layer.width() == 0 {
        1
    } else {
        let sum = minkowski_sum(&lift_layer(layer))?;
        let c = classify_vertices(&sum, budget)?;
        match layer.bias_mode {
            BiasMode::Bias => c.upper(),
            BiasMode::NoBias => c.vertices(),
        }
    } as u64;
    Ok(DualityReport { region_count, vertex_count })
}

fn subset_sum(sets: &[LabeledPointSet], s: &[usize]) -> Result<LabeledPointSet> {
    let chosen: Vec<LabeledPointSet> = s.iter().map(|&i| sets[i].clone()).collect();
    minkowski_sum(&chosen)
}

/// Upper-vertex count of the full sum against the alternating sum over
/// partial sums of at most `n = d - 1` summands.
pub fn upper_vertex_identity(sets: &[LabeledPointSet], budget: &Budget) -> Result<IdentityCheck> {
    let m = sets.len();
    let d = sets.first().map_or(0, |s| s.ambient_dim);
    let n = d.saturating_sub(1);
    if m < n + 1 || m == 0 {
        return Err(Error::Precondition(format!("need m >= n + 1 summands, got m={m}, n={n}")));
    }
    if let Some(s) = sets.iter().find(|s| s.len() < 2) {
        return Err(Error::Precondition(format!("summand {:?} is a single point", s.label)));
    }
    let lhs = BigInt::from(classify_vertices(&minkowski_sum(sets)?, budget)?.upper());
    let mut rhs = BigInt::zero();
    for j in 0..=n {
        let mut total = BigInt::zero();
        if j == 0 {
            total = BigInt::one();
        } else {
            for s in combinations(m, j) {
                total += classify_vertices(&subset_sum(sets, &s)?, budget)?.upper();
            }
        }
        let t = binom((m - 1 - j) as i64, (n - j) as i64) * total;
        if (n - j).is_multiple_of(2) {
            rhs += t;
        } else {
            rhs -= t;
        }
    }
    Ok(IdentityCheck { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSum {
    pub actual: u64,
    pub trivial: BigInt,
}

impl PartialSum {
    pub fn attained(&self) -> bool {
        BigInt::from(self.actual) == self.trivial
    }
}

/// Vertex counts of every partial sum with `1 <= |S| <= n` against the product
/// of the summands' vertex counts.
pub fn partial_sum_trivial_bound(
    sets: &[LabeledPointSet],
    n: usize,
    budget: &Budget,
) -> Result<BTreeMap<Vec<usize>, PartialSum>> {
    let own: Vec<u64> = sets
        .iter()
        .map(|s| classify_vertices(s, budget).map(|c| c.vertices() as u64))
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for size in 1..=n.min(sets.len()) {
        for s in combinations(sets.len(), size) {
            let actual = classify_vertices(&subset_sum(sets, &s)?, budget)?.vertices() as u64;
            let trivial = s.iter().map(|&i| BigInt::from(own[i])).product();
            out.insert(s, PartialSum { actual, trivial });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::MaxoutUnit;
    use crate::rational::int;

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn set(rows: &[&[i64]]) -> LabeledPointSet {
        LabeledPointSet::new(rows[0].len(), pts(rows), "s").unwrap()
    }

    fn segment_triangle_layer() -> Layer {
        let a = MaxoutUnit::new(pts(&[&[0, 0], &[2, 2]]), Some(vec![int(0), int(0)]));
        let b = MaxoutUnit::new(pts(&[&[1, 0], &[0, 1], &[1, 1]]), Some(vec![int(1), int(1), int(0)]));
        Layer::new(2, BiasMode::Bias, vec![a, b]).unwrap()
    }

    #[test]
    fn lifts_and_sums() {
        let relu = Layer::new(1, BiasMode::Bias, vec![MaxoutUnit::new(pts(&[&[1], &[0]]), Some(vec![int(0), int(0)]))]).unwrap();
        assert_eq!(lift_layer(&relu)[0].points, pts(&[&[1, 0], &[0, 0]]));
        let lifted = lift_layer(&segment_triangle_layer());
        assert_eq!(lifted[0].points, pts(&[&[0, 0, 0], &[2, 2, 0]]));
        assert_eq!(lifted[1].points, pts(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]]));
        let sum = minkowski_sum(&lifted).unwrap();
        let mut expected = pts(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0], &[2, 3, 1], &[3, 2, 1], &[3, 3, 0]]);
        expected.sort();
        assert_eq!(sum.points, expected);
        let single = set(&[&[5, 5, 5]]);
        let shifted = minkowski_sum(&[lifted[1].clone(), single]).unwrap();
        assert_eq!(shifted.points, pts(&[&[5, 6, 6], &[6, 5, 6], &[6, 6, 5]]));
        assert!(minkowski_sum(&[set(&[&[1]]), set(&[&[1, 2]])]).is_err());
    }

    #[test]
    fn classification_examples() {
        let b = Budget::default();
        let sum = minkowski_sum(&lift_layer(&segment_triangle_layer())).unwrap();
        let c = classify_vertices(&sum, &b).unwrap();
        assert_eq!((c.vertices(), c.upper()), (6, 5));
        let hidden = sum.points.iter().position(|p| *p == pts(&[&[1, 1, 0]])[0]).unwrap();
        assert!(c.points[hidden].is_vertex && !c.points[hidden].is_upper_vertex);

        let h = classify_vertices(&set(&[&[0, 0], &[1, 0]]), &b).unwrap();
        assert_eq!((h.vertices(), h.upper(), h.strict_lower()), (2, 2, 0));
        let v = classify_vertices(&set(&[&[0, 0], &[0, 1]]), &b).unwrap();
        assert_eq!((v.vertices(), v.upper(), v.strict_lower()), (2, 1, 1));
        assert!(v.points[1].is_upper_vertex && v.points[0].is_strict_lower_vertex);
        let mid = classify_vertices(&set(&[&[0, 0], &[1, 1], &[2, 2]]), &b).unwrap();
        assert!(!mid.points[1].is_vertex);
    }

    #[test]
    fn effective_ranks_skip_dominated_features() {
        let u = MaxoutUnit::new(pts(&[&[0], &[0], &[1]]), Some(vec![int(-8), int(-12), int(0)]));
        let layer = Layer::new(1, BiasMode::Bias, vec![u]).unwrap();
        assert_eq!(effective_ranks(&layer, &Budget::default()).unwrap(), vec![2]);
    }

    #[test]
    fn duality_on_segment_triangle_layer() {
        let r = duality_check(&segment_triangle_layer(), &Budget::default()).unwrap();
        assert_eq!(r, DualityReport { region_count: 5, vertex_count: 5 });
    }

    #[test]
    fn upper_vertex_identity_on_segments() {
        let sets = vec![set(&[&[0, 0], &[1, 3]]), set(&[&[0, 0], &[2, -1]]), set(&[&[0, 0], &[-1, 2]])];
        let c = upper_vertex_identity(&sets, &Budget::default()).unwrap();
        assert!(c.holds(), "{c:?}");
        assert!(upper_vertex_identity(&sets[..1], &Budget::default()).is_err());
    }

    #[test]
    fn partial_sums() {
        let b = Budget::default();
        let tri = set(&[&[0, 0], &[1, 0], &[0, 1]]);
        let r = partial_sum_trivial_bound(&[tri.clone(), tri], 2, &b).unwrap();
        assert!(r[&vec![0]].attained());
        assert_eq!(r[&vec![0, 1]].actual, 3);
        assert_eq!(r[&vec![0, 1]].trivial, BigInt::from(9));
    }

    #[test]
    fn json_round_trip() {
        let s = set(&[&[0, 1], &[2, 3]]);
        let back = parse_point_sets(&s.to_json().to_string()).unwrap();
        assert_eq!(back, vec![s.clone()]);
        let fam = parse_point_sets(&point_sets_to_json(&[s.clone(), s]).to_string()).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(parse_point_sets(r#"{"points": [[0.5]]}"#).is_err());
    }
}
