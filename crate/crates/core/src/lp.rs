//! Small dense linear programs, solved by the two-phase simplex method with
//! Bland's anti-cycling rule.
//!
//! Sized for separation problems with a handful of variables and at most a
//! few hundred constraints.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

const PIVOT_EPS: f64 = 1e-12;
const FEASIBILITY_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;
/// Smallest column entry accepted as a pivot.
const RATIO_PIVOT_MIN: f64 = 1e-9;
const TIE_EPS: f64 = 1e-12;
const POST_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex pivot limit reached")]
    IterationLimit,
    #[error("solution failed the feasibility post-check")]
    Numerical,
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    coeffs: Vec<f64>,
    relation: Relation,
    rhs: f64,
}

/// `minimize c.x` subject to linear rows; variables are nonnegative unless
/// marked free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    free: Vec<bool>,
    objective: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        Self { free: vec![false; vars], objective: vec![0.0; vars], rows: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.free.len()
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn minimize(&mut self, objective: Vec<f64>) {
        assert_eq!(objective.len(), self.vars());
        self.objective = objective;
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.vars());
        self.rows.push(Row { coeffs, relation, rhs });
    }

    fn satisfied_by(&self, x: &[f64]) -> bool {
        let bounds = x.iter().zip(&self.free).all(|(v, f)| *f || *v >= -POST_CHECK_TOL);
        bounds
            && self.rows.iter().all(|r| {
                let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                let scale = 1.0 + r.rhs.abs() + r.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
                let tol = POST_CHECK_TOL * scale;
                match r.relation {
                    Relation::Le => lhs <= r.rhs + tol,
                    Relation::Ge => lhs >= r.rhs - tol,
                    Relation::Eq => (lhs - r.rhs).abs() <= tol,
                }
            })
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        let n = self.vars();
        // column layout: [split variables | slacks | artificials]
        let mut var_cols = Vec::with_capacity(n);
        let mut ncols = 0;
        for &f in &self.free {
            var_cols.push((ncols, if f { Some(ncols + 1) } else { None }));
            ncols += if f { 2 } else { 1 };
        }
        let rows: Vec<Row> = self
            .rows
            .iter()
            .map(|r| {
                if r.rhs < 0.0 {
                    let relation = match r.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    Row { coeffs: r.coeffs.iter().map(|c| -c).collect(), relation, rhs: -r.rhs }
                } else {
                    r.clone()
                }
            })
            .collect();
        let slack_start = ncols;
        let slacks = rows.iter().filter(|r| r.relation != Relation::Eq).count();
        let art_start = slack_start + slacks;
        let arts = rows.iter().filter(|r| r.relation != Relation::Le).count();
        let width = art_start + arts;

        let m = rows.len();
        let mut t = Tableau { a: vec![vec![0.0; width + 1]; m], basis: vec![0; m], width };
        let (mut s, mut a) = (slack_start, art_start);
        for (i, r) in rows.iter().enumerate() {
            for (j, &c) in r.coeffs.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                t.a[i][pos] = c;
                if let Some(neg) = neg {
                    t.a[i][neg] = -c;
                }
            }
            t.a[i][width] = r.rhs;
            match r.relation {
                Relation::Le => {
                    t.a[i][s] = 1.0;
                    t.basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    t.a[i][s] = -1.0;
                    s += 1;
                    t.a[i][a] = 1.0;
                    t.basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    t.a[i][a] = 1.0;
                    t.basis[i] = a;
                    a += 1;
                }
            }
        }

        // phase 1: drive the artificials to zero
        let mut phase1 = vec![0.0; width];
        for c in &mut phase1[art_start..] {
            *c = 1.0;
        }
        t.optimize(&phase1, width)?;
        if t.objective(&phase1) > FEASIBILITY_TOL {
            return Err(LpError::Infeasible);
        }
        t.evict_artificials(art_start);

        // phase 2
        let mut cost = vec![0.0; width];
        for (j, &c) in self.objective.iter().enumerate() {
            let (pos, neg) = var_cols[j];
            cost[pos] = c;
            if let Some(neg) = neg {
                cost[neg] = -c;
            }
        }
        t.optimize(&cost, art_start)?;

        let mut values = vec![0.0; width];
        for (i, &b) in t.basis.iter().enumerate() {
            values[b] = t.a[i][width];
        }
        let x: Vec<f64> = var_cols.iter().map(|&(pos, neg)| values[pos] - neg.map_or(0.0, |c| values[c])).collect();
        if !self.satisfied_by(&x) {
            return Err(LpError::Numerical);
        }
        let objective = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        Ok(LpSolution { x, objective })
    }
}

struct Tableau {
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn objective(&self, cost: &[f64]) -> f64 {
        self.basis.iter().enumerate().map(|(i, &b)| cost[b] * self.a[i][self.width]).sum()
    }

    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        cost[j] - self.basis.iter().enumerate().map(|(i, &b)| cost[b] * self.a[i][j]).sum::<f64>()
    }

    /// Minimizes `cost` letting only columns below `allowed` enter.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<(), LpError> {
        for _ in 0..MAX_PIVOTS {
            let entering =
                (0..allowed).filter(|j| !self.basis.contains(j)).find(|&j| self.reduced_cost(cost, j) < -PIVOT_EPS);
            let Some(j) = entering else {
                return Ok(());
            };
            // minimum ratio; near-ties go to the smallest basic index
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.a.len() {
                let coef = self.a[i][j];
                if coef <= RATIO_PIVOT_MIN {
                    continue;
                }
                let ratio = self.a[i][self.width].max(0.0) / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - TIE_EPS || (ratio <= best + TIE_EPS && self.basis[i] < self.basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((i, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(i, j);
        }
        Err(LpError::IterationLimit)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col];
        for v in &mut self.a[row] {
            *v /= p;
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[row] = col;
        for r in &mut self.a {
            if r[self.width].abs() < 1e-14 {
                r[self.width] = 0.0;
            }
        }
    }

    /// Pivots basic artificial columns out, dropping redundant rows.
    fn evict_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= art_start {
                let best = (0..art_start)
                    .filter(|j| !self.basis.contains(j))
                    .max_by(|&p, &q| self.a[i][p].abs().total_cmp(&self.a[i][q].abs()))
                    .filter(|&j| self.a[i][j].abs() > RATIO_PIVOT_MIN);
                match best {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}
