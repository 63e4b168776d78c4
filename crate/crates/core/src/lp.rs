//! Exact two-phase simplex over the rationals.
//!
//! Solves `maximize c·x  subject to  A x = b, x ≥ 0` with `b ≥ 0`. Pivoting
//! follows Bland's rule (lowest-index entering column, lowest-index leaving
//! basic variable on ratio ties), which rules out cycling.

use num_traits::{Signed, Zero};

use crate::ratcore::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, x: Vec<Rat> },
}

/// Standard-form problem with equality rows.
#[derive(Debug, Clone, Default)]
pub struct StandardLp {
    pub num_vars: usize,
    pub rows: Vec<Vec<Rat>>,
    pub rhs: Vec<Rat>,
    pub objective: Vec<Rat>,
}

impl StandardLp {
    pub fn new(num_vars: usize) -> Self {
        StandardLp {
            num_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
            objective: vec![Rat::zero(); num_vars],
        }
    }

    /// Adds `row · x = rhs`, flipping signs so the right-hand side is nonnegative.
    pub fn add_row(&mut self, mut row: Vec<Rat>, mut rhs: Rat) {
        debug_assert_eq!(row.len(), self.num_vars);
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    /// Row-major; the last column is the right-hand side.
    cells: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    num_vars: usize,
    num_art: usize,
}

impl Tableau {
    fn build(lp: &StandardLp) -> Self {
        let m = lp.rows.len();
        let n = lp.num_vars;
        let width = n + m + 1;
        let mut cells = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            let mut r = Vec::with_capacity(width);
            r.extend(row.iter().cloned());
            r.extend((0..m).map(|k| if k == i { Rat::from_integer(1.into()) } else { Rat::zero() }));
            r.push(lp.rhs[i].clone());
            cells.push(r);
        }
        Tableau {
            cells,
            basis: (n..n + m).collect(),
            num_vars: n,
            num_art: m,
        }
    }

    fn rhs_col(&self) -> usize {
        self.num_vars + self.num_art
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let rc = self.rhs_col();
        let p = self.cells[row][col].clone();
        if !p.is_zero() {
            for v in self.cells[row].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.cells[row].clone();
        for (i, r) in self.cells.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..=rc {
                if !pivot_row[j].is_zero() {
                    let d = &f * &pivot_row[j];
                    r[j] -= d;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `cost` over the current basic feasible solution using only
    /// columns `< allowed`. Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: usize) -> bool {
        let rc = self.rhs_col();
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    let a = &self.cells[i][j];
                    if !a.is_zero() && !cost[b].is_zero() {
                        reduced -= &cost[b] * a;
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.cells.len() {
                let a = &self.cells[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.cells[i][rc] / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn run(mut self, objective: &[Rat]) -> LpOutcome {
        let n = self.num_vars;
        let total = n + self.num_art;
        let rc = self.rhs_col();
        let one = Rat::from_integer(1.into());

        // Phase one: maximize the negated sum of artificials.
        let mut phase1 = vec![Rat::zero(); total];
        for c in phase1.iter_mut().skip(n) {
            *c = -one.clone();
        }
        self.optimize(&phase1, total);
        let infeasibility: Rat = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= n)
            .map(|(i, _)| self.cells[i][rc].clone())
            .fold(Rat::zero(), |acc, v| acc + v);
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }

        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.cells.len() {
            if self.basis[i] >= n {
                match (0..n).find(|&j| !self.cells[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.cells.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        let mut cost = vec![Rat::zero(); total];
        cost[..n].clone_from_slice(&objective[..n]);
        if !self.optimize(&cost, n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rat::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.cells[i][rc].clone();
            }
        }
        let value = x
            .iter()
            .zip(objective)
            .fold(Rat::zero(), |acc, (xi, ci)| acc + xi * ci);
        LpOutcome::Optimal { value, x }
    }
}
