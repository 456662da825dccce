//! Dense two-phase simplex.
//!
//! Dantzig pricing with a Harris ratio test, falling back to Bland's rule on
//! long degenerate runs. The tableau is rebuilt from the original rows every
//! few pivots and before any verdict, so rounding does not accumulate.

use serde::Serialize;

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-9;
// pivots below this are taken only when no improving column offers better
const ACCEPT_PIVOT: f64 = 1e-6;
const COST_EPS: f64 = 1e-11;
// an unblocked column improving slower than this is rounding noise on a
// zero-cost ray
const RAY_EPS: f64 = 1e-8;
const HARRIS_TOL: f64 = 1e-10;
const FEASIBILITY_TOL: f64 = 1e-9;
const BLAND_AFTER: usize = 50;
const REFACTOR_EVERY: usize = 20;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `optimize objective·x subject to constraints, x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub value: f64,
    pub x: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, sense: Sense) -> LinearProgram {
        LinearProgram {
            objective,
            sense,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                got: coeffs.len(),
            });
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    /// Errors: [`Error::InfeasiblePolytope`], [`Error::Unbounded`].
    pub fn solve(&self) -> Result<Solution> {
        let nv = self.num_vars();
        if let Some(c) = self.constraints.iter().find(|c| c.coeffs.len() != nv) {
            return Err(Error::DimensionMismatch {
                expected: nv,
                got: c.coeffs.len(),
            });
        }
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    /// The rows as built, for refactoring.
    orig: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
    artificial_from: usize,
    pivots: usize,
    since_refactor: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let nv = lp.num_vars();
        // flip rows so every rhs is nonnegative
        let normalized: Vec<(Vec<f64>, Relation, f64)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < 0.0 {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), rel, -c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs)
                }
            })
            .collect();
        let n_slack = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Eq)
            .count();
        let n_art = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let artificial_from = nv + n_slack;
        let ncols = artificial_from + n_art;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut s, mut a) = (nv, artificial_from);
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![0.0; ncols + 1];
            row[..nv].copy_from_slice(&coeffs);
            row[ncols] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = 1.0;
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[a] = 1.0;
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = 1.0;
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            orig: rows.clone(),
            rows,
            basis,
            ncols,
            artificial_from,
            pivots: 0,
            since_refactor: 0,
        }
    }

    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
        self.since_refactor += 1;
    }

    /// Rebuilds the tableau as `B⁻¹·[A | b]` from the original rows, by
    /// Gauss–Jordan elimination with partial pivoting over the basic
    /// columns. Keeps the current tableau if the basis looks singular.
    fn refactor(&mut self) {
        let m = self.orig.len();
        let mut t = self.orig.clone();
        let mut owner = vec![usize::MAX; m];
        for &col in &self.basis {
            let Some(r) = (0..m)
                .filter(|&r| owner[r] == usize::MAX)
                .max_by(|&x, &y| t[x][col].abs().total_cmp(&t[y][col].abs()))
            else {
                return;
            };
            let p = t[r][col];
            if p.abs() < 1e-12 {
                return;
            }
            for v in t[r].iter_mut() {
                *v /= p;
            }
            let pivot_row = t[r].clone();
            for (i, row) in t.iter_mut().enumerate() {
                let f = row[col];
                if i != r && f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                    row[col] = 0.0;
                }
            }
            owner[r] = col;
        }
        self.rows = t;
        self.basis = owner;
        self.since_refactor = 0;
    }

    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        let mut d = cost[j];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let a = row[j];
            if a != 0.0 {
                d -= cost[b] * a;
            }
        }
        d
    }

    /// Minimizes `cost · x` over the current basis, entering only columns
    /// below `limit`.
    fn minimize(&mut self, cost: &[f64], limit: usize) -> Result<()> {
        let mut degenerate = 0;
        let mut fresh = false;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::Solver("pivot limit reached".into()));
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor();
                fresh = true;
            }
            let bland = degenerate >= BLAND_AFTER;
            let mut basic = vec![false; self.ncols];
            for &b in &self.basis {
                basic[b] = true;
            }
            let mut improving: Vec<(usize, f64)> = (0..limit)
                .filter(|&j| !basic[j])
                .map(|j| (j, self.reduced_cost(cost, j)))
                .filter(|&(_, d)| d < -COST_EPS)
                .collect();
            if !bland {
                improving.sort_by(|x, y| x.1.total_cmp(&y.1));
            }
            // first column with a well-sized pivot, else the first blocked one
            let mut chosen = None;
            let mut fallback = None;
            let mut unbounded = false;
            for &(c, d) in &improving {
                match self.leaving_row(c, bland) {
                    Some((r, step)) if self.rows[r][c] >= ACCEPT_PIVOT => {
                        chosen = Some((r, c, step));
                        break;
                    }
                    Some((r, step)) => {
                        fallback = fallback.or(Some((r, c, step)));
                    }
                    None if d <= -RAY_EPS => {
                        unbounded = true;
                        break;
                    }
                    None => {}
                }
            }
            let next = if unbounded { None } else { chosen.or(fallback) };
            let Some((r, c, step)) = next else {
                // verdicts are only taken on a freshly rebuilt tableau
                if fresh {
                    return if unbounded {
                        Err(Error::Unbounded)
                    } else {
                        Ok(())
                    };
                }
                self.refactor();
                fresh = true;
                continue;
            };
            self.pivot(r, c);
            fresh = false;
            degenerate = if step <= 1e-12 { degenerate + 1 } else { 0 };
        }
    }

    /// Row leaving the basis when column `c` enters, and the step length.
    fn leaving_row(&self, c: usize, bland: bool) -> Option<(usize, f64)> {
        let ratio = |i: usize| self.rhs(i).max(0.0) / self.rows[i][c];
        let candidates = (0..self.rows.len()).filter(|&i| self.rows[i][c] > PIVOT_EPS);
        if bland {
            // smallest basis index among the tied rows, ignoring pivots
            // that are tiny next to the widest tied one
            let best = candidates.clone().map(ratio).fold(f64::INFINITY, f64::min);
            let tied: Vec<usize> = candidates.filter(|&i| ratio(i) <= best + 1e-12).collect();
            let widest = tied.iter().map(|&i| self.rows[i][c]).fold(0.0, f64::max);
            return tied
                .into_iter()
                .filter(|&i| self.rows[i][c] >= 1e-3 * widest)
                .min_by_key(|&i| self.basis[i])
                .map(|i| (i, ratio(i)));
        }
        // widest pivot among rows whose ratio fits under the relaxed bound
        let bound = candidates
            .clone()
            .map(|i| (self.rhs(i).max(0.0) + HARRIS_TOL) / self.rows[i][c])
            .fold(f64::INFINITY, f64::min);
        candidates
            .filter(|&i| ratio(i) <= bound)
            .max_by(|&x, &y| self.rows[x][c].total_cmp(&self.rows[y][c]))
            .map(|i| (i, ratio(i)))
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<Solution> {
        let nv = lp.num_vars();
        if self.artificial_from < self.ncols {
            let mut cost = vec![0.0; self.ncols];
            for c in cost.iter_mut().skip(self.artificial_from) {
                *c = 1.0;
            }
            self.minimize(&cost, self.ncols)?;
            let infeasibility: f64 = (0..self.rows.len())
                .filter(|&i| self.basis[i] >= self.artificial_from)
                .map(|i| self.rhs(i).abs())
                .sum();
            if infeasibility > FEASIBILITY_TOL {
                return Err(Error::InfeasiblePolytope);
            }
            // drive artificials out of the basis; rows where that is
            // impossible are redundant and keep their artificial at zero
            for i in 0..self.rows.len() {
                if self.basis[i] < self.artificial_from {
                    continue;
                }
                let col = (0..self.artificial_from)
                    .filter(|j| !self.basis.contains(j))
                    .map(|j| (j, self.rows[i][j].abs()))
                    .filter(|&(_, a)| a > PIVOT_EPS)
                    .max_by(|x, y| x.1.total_cmp(&y.1))
                    .map(|(j, _)| j);
                if let Some(j) = col {
                    self.pivot(i, j);
                }
            }
            self.refactor();
        }
        let sign = match lp.sense {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        };
        let mut cost = vec![0.0; self.ncols];
        for (c, o) in cost.iter_mut().zip(&lp.objective) {
            *c = sign * o;
        }
        self.minimize(&cost, self.artificial_from)?;
        let mut x = vec![0.0; nv];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < nv {
                x[b] = self.rhs(i).max(0.0);
            }
        }
        let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(Solution { value, x })
    }
}
