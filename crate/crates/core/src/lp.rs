//! Exact two-phase simplex with Bland's rule.
//!
//! Rows are scaled to integers and pivoted fraction-free: every tableau entry
//! is the true value times a common positive denominator, and each update is
//! an exact integer division by the previous pivot. The fast path runs on
//! `i128` with checked arithmetic and falls back to `BigInt` on overflow.

use std::cmp::Ordering;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// `coeffs · x = rhs` or `coeffs · x >= rhs` depending on where it is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    /// Optimal vertex; with no objective this is the phase-one witness.
    Optimal(Vec<Rational>),
}

/// Maximize `objective · x` over `{x : eqs, ineqs}` with `x` free.
pub fn solve(
    dim: usize,
    eqs: &[Constraint],
    ineqs: &[Constraint],
    objective: Option<&[Rational]>,
) -> LpOutcome {
    solve_model(Model::build(dim, eqs, ineqs, objective, false))
}

/// As [`solve`], with `x >= 0` imposed without extra rows.
pub fn solve_nonneg(
    dim: usize,
    eqs: &[Constraint],
    ineqs: &[Constraint],
    objective: Option<&[Rational]>,
) -> LpOutcome {
    solve_model(Model::build(dim, eqs, ineqs, objective, true))
}

fn solve_model(model: Model) -> LpOutcome {
    match run::<i128>(&model) {
        Some(out) => out,
        None => run::<BigInt>(&model).expect("arbitrary precision cannot overflow"),
    }
}

trait Ring: Clone + Sized {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn unit() -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn neg(&self) -> Option<Self>;
    fn sign(&self) -> Ordering;
    fn vanishes(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl Ring for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn unit() -> Self {
        1
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sign(&self) -> Ordering {
        self.cmp(&0)
    }
}

impl Ring for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn unit() -> Self {
        <BigInt as One>::one()
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!((self % o).is_zero());
        self / o
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Standard-form data over the integers: columns are `x+`, `x-`, slacks,
/// artificials; every row has a nonnegative right-hand side.
struct Model {
    dim: usize,
    ncols: usize,
    n_art_start: usize,
    rows: Vec<Vec<BigInt>>,
    basis: Vec<usize>,
    art_rows: Vec<usize>,
    objective: Option<Vec<BigInt>>,
}

fn scale_to_integers(coeffs: &[Rational], rhs: Option<&Rational>) -> (Vec<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for q in coeffs.iter().chain(rhs) {
        l = l.lcm(q.denom());
    }
    let mut out: Vec<BigInt> = coeffs.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let mut r = rhs.map(|q| q.numer() * (&l / q.denom())).unwrap_or_default();
    let mut g = r.abs();
    for v in &out {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        for v in &mut out {
            *v /= &g;
        }
        r /= &g;
    }
    (out, r)
}

impl Model {
    fn build(dim: usize, eqs: &[Constraint], ineqs: &[Constraint], objective: Option<&[Rational]>, nonneg: bool) -> Model {
        let nslack = ineqs.len();
        let slack0 = 2 * dim;
        let art0 = slack0 + nslack;
        let mut pending: Vec<(Vec<BigInt>, bool)> = Vec::new();
        for c in eqs {
            assert_eq!(c.coeffs.len(), dim, "equality has wrong length");
            let (a, b) = scale_to_integers(&c.coeffs, Some(&c.rhs));
            let mut row = vec![BigInt::zero(); art0];
            for j in 0..dim {
                row[j] = a[j].clone();
                if !nonneg {
                    row[dim + j] = -&a[j];
                }
            }
            row.push(b);
            pending.push((row, true));
        }
        for (k, c) in ineqs.iter().enumerate() {
            assert_eq!(c.coeffs.len(), dim, "inequality has wrong length");
            let (a, b) = scale_to_integers(&c.coeffs, Some(&c.rhs));
            let mut row = vec![BigInt::zero(); art0];
            for j in 0..dim {
                row[j] = a[j].clone();
                if !nonneg {
                    row[dim + j] = -&a[j];
                }
            }
            row[slack0 + k] = -BigInt::one();
            row.push(b);
            pending.push((row, false));
        }
        let mut rows = Vec::with_capacity(pending.len());
        let mut basis = Vec::with_capacity(pending.len());
        let mut art_rows = Vec::new();
        let mut nart = 0;
        let mut needs_art = Vec::new();
        for (i, (mut row, is_eq)) in pending.into_iter().enumerate() {
            let b = row.last().unwrap().clone();
            let flip = if is_eq { b.is_negative() } else { !b.is_positive() };
            if flip {
                for v in &mut row {
                    *v = -&*v;
                }
            }
            if !is_eq && flip {
                // slack now carries coefficient +1 and can start in the basis
                basis.push(slack0 + (i - eqs.len()));
                needs_art.push(false);
            } else {
                basis.push(art0 + nart);
                nart += 1;
                needs_art.push(true);
                art_rows.push(i);
            }
            rows.push(row);
        }
        let ncols = art0 + nart;
        for (i, row) in rows.iter_mut().enumerate() {
            let rhs = row.pop().unwrap();
            row.resize(ncols, BigInt::zero());
            if needs_art[i] {
                row[basis[i]] = BigInt::one();
            }
            row.push(rhs);
        }
        let objective = objective.map(|c| {
            assert_eq!(c.len(), dim, "objective has wrong length");
            let (a, _) = scale_to_integers(c, None);
            let mut r = vec![BigInt::zero(); ncols + 1];
            for j in 0..dim {
                r[j] = -&a[j];
                if !nonneg {
                    r[dim + j] = a[j].clone();
                }
            }
            r
        });
        Model { dim, ncols, n_art_start: art0, rows, basis, art_rows, objective }
    }
}

struct Tableau<R> {
    rows: Vec<Vec<R>>,
    phase1: Vec<R>,
    phase2: Option<Vec<R>>,
    basis: Vec<usize>,
    denom: R,
    ncols: usize,
}

impl<R: Ring> Tableau<R> {
    fn pivot(&mut self, p: usize, q: usize) -> Option<()> {
        let piv = self.rows[p][q].clone();
        let d = self.denom.clone();
        let prow = self.rows[p].clone();
        let update = |row: &mut Vec<R>| -> Option<()> {
            let f = row[q].clone();
            for j in 0..row.len() {
                let v = if f.vanishes() {
                    row[j].mul(&piv)?
                } else {
                    row[j].mul(&piv)?.sub(&f.mul(&prow[j])?)?
                };
                row[j] = v.div_exact(&d);
            }
            Some(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != p {
                update(row)?;
            }
        }
        update(&mut self.phase1)?;
        if let Some(o) = self.phase2.as_mut() {
            update(o)?;
        }
        self.basis[p] = q;
        if piv.sign() == Ordering::Less {
            let flip = |row: &mut Vec<R>| -> Option<()> {
                for v in row.iter_mut() {
                    *v = v.neg()?;
                }
                Some(())
            };
            for row in self.rows.iter_mut() {
                flip(row)?;
            }
            flip(&mut self.phase1)?;
            if let Some(o) = self.phase2.as_mut() {
                flip(o)?;
            }
            self.denom = piv.neg()?;
        } else {
            self.denom = piv;
        }
        Some(())
    }

    /// Bland's rule on the given reduced-cost row. Returns `Ok(true)` at
    /// optimality and `Ok(false)` when unbounded.
    fn optimize(&mut self, use_phase2: bool, allowed: usize) -> Option<bool> {
        loop {
            let obj = if use_phase2 { self.phase2.as_ref().unwrap() } else { &self.phase1 };
            let Some(q) = (0..allowed).find(|&j| obj[j].sign() == Ordering::Less) else {
                return Some(true);
            };
            let rhs = self.ncols;
            let mut best: Option<usize> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][q].sign() != Ordering::Greater {
                    continue;
                }
                best = Some(match best {
                    None => i,
                    Some(b) => {
                        // compare rhs_i / a_iq with rhs_b / a_bq
                        let lhs = self.rows[i][rhs].mul(&self.rows[b][q])?;
                        let rhs_v = self.rows[b][rhs].mul(&self.rows[i][q])?;
                        match lhs.sub(&rhs_v)?.sign() {
                            Ordering::Less => i,
                            Ordering::Equal if self.basis[i] < self.basis[b] => i,
                            _ => b,
                        }
                    }
                });
            }
            match best {
                None => return Some(false),
                Some(p) => self.pivot(p, q)?,
            }
        }
    }
}

fn run<R: Ring>(m: &Model) -> Option<LpOutcome> {
    let conv = |row: &Vec<BigInt>| -> Option<Vec<R>> { row.iter().map(R::from_big).collect() };
    let rows: Vec<Vec<R>> = m.rows.iter().map(conv).collect::<Option<_>>()?;
    let mut phase1 = vec![BigInt::zero(); m.ncols + 1];
    for &i in &m.art_rows {
        for (j, v) in m.rows[i].iter().enumerate() {
            if j < m.n_art_start || j == m.ncols {
                phase1[j] -= v;
            }
        }
    }
    let mut t = Tableau {
        rows,
        phase1: conv(&phase1)?,
        phase2: match &m.objective {
            Some(o) => Some(conv(o)?),
            None => None,
        },
        basis: m.basis.clone(),
        denom: R::unit(),
        ncols: m.ncols,
    };
    let bounded = t.optimize(false, m.n_art_start)?;
    debug_assert!(bounded, "phase one is always bounded");
    if t.phase1[m.ncols].sign() == Ordering::Less {
        return Some(LpOutcome::Infeasible);
    }
    // Drive remaining artificials out of the basis.
    for p in 0..t.rows.len() {
        if t.basis[p] >= m.n_art_start {
            if let Some(q) = (0..m.n_art_start).find(|&j| !t.rows[p][j].vanishes()) {
                t.pivot(p, q)?;
            }
        }
    }
    if t.phase2.is_some() && !t.optimize(true, m.n_art_start)? {
        return Some(LpOutcome::Unbounded);
    }
    let denom = t.denom.to_big();
    let mut x = vec![Rational::zero(); m.dim];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < 2 * m.dim {
            let v = Rational::new(t.rows[i][m.ncols].to_big(), denom.clone());
            if b < m.dim {
                x[b] += v;
            } else {
                x[b - m.dim] -= v;
            }
        }
    }
    Some(LpOutcome::Optimal(x))
}
