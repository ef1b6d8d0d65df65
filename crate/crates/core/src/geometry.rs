//! Polyhedra given by rational equalities and inequalities, and the exact
//! queries every other module is built on.

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome};
use crate::rational::{self, Rational};

pub use crate::lp::Constraint;

/// `{x in Q^d : eqs hold, ineqs hold as coeffs·x >= rhs}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstraintSystem {
    pub ambient_dim: usize,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecessionProfile {
    pub lineality_dim: usize,
    pub pointed_part_bounded: bool,
}

impl ConstraintSystem {
    pub fn new(ambient_dim: usize) -> Self {
        ConstraintSystem { ambient_dim, ..Default::default() }
    }

    pub fn with_eq(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.add_eq(coeffs, rhs);
        self
    }

    pub fn with_ge(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.add_ge(coeffs, rhs);
        self
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.equalities.push(Constraint::new(coeffs, rhs));
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.inequalities.push(Constraint::new(coeffs, rhs));
    }

    pub fn intersect(&self, other: &ConstraintSystem) -> ConstraintSystem {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut out = self.clone();
        out.equalities.extend(other.equalities.iter().cloned());
        out.inequalities.extend(other.inequalities.iter().cloned());
        out
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|c| rational::dot(&c.coeffs, x) == c.rhs)
            && self.inequalities.iter().all(|c| rational::dot(&c.coeffs, x) >= c.rhs)
    }

    pub fn check(&self) -> Result<()> {
        for (kind, list) in [("equality", &self.equalities), ("inequality", &self.inequalities)] {
            for (i, c) in list.iter().enumerate() {
                if c.coeffs.len() != self.ambient_dim {
                    return Err(Error::Input(format!(
                        "{kind} {i} has {} coefficients in ambient dimension {}",
                        c.coeffs.len(),
                        self.ambient_dim
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let enc = |list: &[Constraint]| -> Value {
            list.iter()
                .map(|c| json!({ "coeffs": rational::vec_to_json(&c.coeffs), "rhs": rational::to_json(&c.rhs) }))
                .collect()
        };
        json!({
            "ambient_dim": self.ambient_dim,
            "equalities": enc(&self.equalities),
            "inequalities": enc(&self.inequalities),
        })
    }
}

pub fn feasible(sys: &ConstraintSystem) -> Result<Option<Vec<Rational>>> {
    sys.check()?;
    Ok(match lp::solve(sys.ambient_dim, &sys.equalities, &sys.inequalities, None) {
        LpOutcome::Optimal(x) => Some(x),
        _ => None,
    })
}

/// A point meeting every equality and every inequality strictly.
pub fn strictly_feasible(sys: &ConstraintSystem) -> Result<Option<Vec<Rational>>> {
    sys.check()?;
    if sys.inequalities.is_empty() {
        return feasible(sys);
    }
    let d = sys.ambient_dim;
    let extend = |c: &Constraint, t: Rational| {
        let mut coeffs = c.coeffs.clone();
        coeffs.push(t);
        Constraint::new(coeffs, c.rhs.clone())
    };
    let eqs: Vec<_> = sys.equalities.iter().map(|c| extend(c, Rational::zero())).collect();
    let mut ineqs: Vec<_> = sys.inequalities.iter().map(|c| extend(c, -Rational::one())).collect();
    let mut cap = vec![Rational::zero(); d + 1];
    cap[d] = -Rational::one();
    ineqs.push(Constraint::new(cap.clone(), -Rational::one()));
    let mut obj = vec![Rational::zero(); d + 1];
    obj[d] = Rational::one();
    Ok(match lp::solve(d + 1, &eqs, &ineqs, Some(&obj)) {
        LpOutcome::Optimal(mut x) => {
            let t = x.pop().unwrap();
            t.is_positive().then_some(x)
        }
        _ => None,
    })
}

/// Rank of a list of rational row vectors.
pub fn rank(rows: &[Vec<Rational>], width: usize) -> usize {
    row_echelon(rows.to_vec(), width).len()
}

/// Reduced row echelon form; returns the nonzero rows with their pivot columns.
pub(crate) fn row_echelon(mut m: Vec<Vec<Rational>>, width: usize) -> Vec<(usize, Vec<Rational>)> {
    let mut out: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        r += 1;
    }
    for row in m.into_iter().take(r) {
        let col = (0..width).find(|&j| !row[j].is_zero()).unwrap();
        out.push((col, row));
    }
    out
}

/// Indices of inequalities that hold with equality on the whole (nonempty) set.
fn implicit_equalities(sys: &ConstraintSystem) -> Vec<usize> {
    let d = sys.ambient_dim;
    let mut unknown: Vec<usize> = (0..sys.inequalities.len()).collect();
    while !unknown.is_empty() {
        let nv = d + unknown.len();
        let pad = |c: &Constraint| {
            let mut coeffs = c.coeffs.clone();
            coeffs.resize(nv, Rational::zero());
            Constraint::new(coeffs, c.rhs.clone())
        };
        let eqs: Vec<_> = sys.equalities.iter().map(pad).collect();
        let mut ineqs: Vec<_> = sys.inequalities.iter().map(pad).collect();
        for (k, &i) in unknown.iter().enumerate() {
            ineqs[i].coeffs[d + k] = -Rational::one();
            let mut lo = vec![Rational::zero(); nv];
            lo[d + k] = Rational::one();
            ineqs.push(Constraint::new(lo.clone(), Rational::zero()));
            lo[d + k] = -Rational::one();
            ineqs.push(Constraint::new(lo, -Rational::one()));
        }
        let mut obj = vec![Rational::zero(); nv];
        for v in obj.iter_mut().skip(d) {
            *v = Rational::one();
        }
        let LpOutcome::Optimal(x) = lp::solve(nv, &eqs, &ineqs, Some(&obj)) else {
            unreachable!("bounded feasible program")
        };
        let before = unknown.len();
        unknown = unknown
            .iter()
            .enumerate()
            .filter(|&(k, _)| !x[d + k].is_positive())
            .map(|(_, &i)| i)
            .collect();
        if unknown.len() == before {
            break;
        }
    }
    unknown
}

/// Dimension of the affine hull, or `None` for the empty set.
pub fn affine_dimension(sys: &ConstraintSystem) -> Result<Option<usize>> {
    sys.check()?;
    let d = sys.ambient_dim;
    let mut rows: Vec<Vec<Rational>> = sys.equalities.iter().map(|c| c.coeffs.clone()).collect();
    if strictly_feasible(sys)?.is_none() {
        if feasible(sys)?.is_none() {
            return Ok(None);
        }
        rows.extend(implicit_equalities(sys).into_iter().map(|i| sys.inequalities[i].coeffs.clone()));
    }
    Ok(Some(d - rank(&rows, d)))
}

pub fn recession_profile(sys: &ConstraintSystem) -> Result<RecessionProfile> {
    if feasible(sys)?.is_none() {
        return Err(Error::Empty);
    }
    let d = sys.ambient_dim;
    let all: Vec<Vec<Rational>> =
        sys.equalities.iter().chain(&sys.inequalities).map(|c| c.coeffs.clone()).collect();
    let lineality_dim = d - rank(&all, d);
    if sys.inequalities.is_empty() {
        return Ok(RecessionProfile { lineality_dim, pointed_part_bounded: true });
    }
    // Look for v in the recession cone with some inequality strictly increasing.
    let eqs: Vec<_> =
        sys.equalities.iter().map(|c| Constraint::new(c.coeffs.clone(), Rational::zero())).collect();
    let mut ineqs: Vec<_> =
        sys.inequalities.iter().map(|c| Constraint::new(c.coeffs.clone(), Rational::zero())).collect();
    let mut total = vec![Rational::zero(); d];
    for c in &sys.inequalities {
        for (t, v) in total.iter_mut().zip(&c.coeffs) {
            *t += v;
        }
    }
    ineqs.push(Constraint::new(total.iter().map(|v| -v).collect(), -Rational::one()));
    let grows = match lp::solve(d, &eqs, &ineqs, Some(&total)) {
        LpOutcome::Optimal(v) => rational::dot(&total, &v).is_positive(),
        _ => unreachable!("bounded feasible program"),
    };
    Ok(RecessionProfile { lineality_dim, pointed_part_bounded: !grows })
}

/// Compactly supported Euler characteristic of a nonempty closed polyhedron.
pub fn euler_characteristic(sys: &ConstraintSystem) -> Result<i64> {
    let p = recession_profile(sys)?;
    Ok(if !p.pointed_part_bounded {
        0
    } else if p.lineality_dim % 2 == 0 {
        1
    } else {
        -1
    })
}

/// Minimum of `coeffs · x` over `sys`; `None` when unbounded below.
fn minimize(sys: &ConstraintSystem, coeffs: &[Rational]) -> Option<Rational> {
    let obj: Vec<Rational> = coeffs.iter().map(|v| -v).collect();
    match lp::solve(sys.ambient_dim, &sys.equalities, &sys.inequalities, Some(&obj)) {
        LpOutcome::Optimal(x) => Some(rational::dot(coeffs, &x)),
        _ => None,
    }
}

/// Whether every point of `inner` lies in `outer`.
pub fn contains(outer: &ConstraintSystem, inner: &ConstraintSystem) -> Result<bool> {
    outer.check()?;
    inner.check()?;
    if outer.ambient_dim != inner.ambient_dim {
        return Err(Error::Input("ambient dimensions differ".into()));
    }
    let Some(w) = feasible(inner)? else { return Ok(true) };
    if !outer.contains_point(&w) {
        return Ok(false);
    }
    for c in &outer.inequalities {
        match minimize(inner, &c.coeffs) {
            Some(v) if v >= c.rhs => {}
            _ => return Ok(false),
        }
    }
    for c in &outer.equalities {
        let neg: Vec<Rational> = c.coeffs.iter().map(|v| -v).collect();
        let lo = minimize(inner, &c.coeffs);
        let hi = minimize(inner, &neg).map(|v| -v);
        if lo.as_ref() != Some(&c.rhs) || hi.as_ref() != Some(&c.rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An affine parametrization `x = origin + basis^T u` of `{x : eqs}`.
#[derive(Clone, Debug)]
pub struct AffineChart {
    pub origin: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
}

impl AffineChart {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn point(&self, u: &[Rational]) -> Vec<Rational> {
        let mut x = self.origin.clone();
        for (b, ui) in self.basis.iter().zip(u) {
            for (xj, bj) in x.iter_mut().zip(b) {
                *xj += ui * bj;
            }
        }
        x
    }
}

/// Chart of the affine subspace cut out by the equalities, `None` if empty.
pub fn affine_chart(dim: usize, eqs: &[Constraint]) -> Option<AffineChart> {
    let rows: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|c| {
            let mut r = c.coeffs.clone();
            r.push(c.rhs.clone());
            r
        })
        .collect();
    let ech = row_echelon(rows, dim + 1);
    if ech.iter().any(|(col, _)| *col == dim) {
        return None;
    }
    let pivots: Vec<usize> = ech.iter().map(|(c, _)| *c).collect();
    let mut origin = vec![Rational::zero(); dim];
    for (col, row) in &ech {
        origin[*col] = row[dim].clone();
    }
    let mut basis = Vec::new();
    for free in (0..dim).filter(|j| !pivots.contains(j)) {
        let mut v = vec![Rational::zero(); dim];
        v[free] = Rational::one();
        for (col, row) in &ech {
            v[*col] = -row[free].clone();
        }
        basis.push(v);
    }
    Some(AffineChart { origin, basis })
}
