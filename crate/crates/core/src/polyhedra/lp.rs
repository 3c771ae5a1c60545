//! Exact two-phase simplex over the rationals (Bland's rule).

use num_traits::{One, Signed, Zero};

use crate::ratlinalg::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Maximize `objective . x` subject to linear constraints. Variables are
/// nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    objective: Vec<Rat>,
    constraints: Vec<(Vec<Rat>, Relation, Rat)>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            objective: vec![Rat::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_all_free(&mut self) {
        self.free.iter_mut().for_each(|f| *f = true);
    }

    pub fn maximize(&mut self, objective: Vec<Rat>) {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    pub fn constrain(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> LpOutcome {
        // column layout: structural (free vars split), slacks, artificials
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &f in &self.free {
            if f {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                col_of.push((ncols, None));
                ncols += 1;
            }
        }
        let structural = ncols;
        let m = self.constraints.len();
        let slack_count = self.constraints.iter().filter(|c| c.1 != Relation::Eq).count();
        let art_start = structural + slack_count;
        let total = art_start + m;

        let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut slack = structural;
        for (i, (coeffs, rel, rhs)) in self.constraints.iter().enumerate() {
            let mut row = vec![Rat::zero(); total + 1];
            for (j, c) in coeffs.iter().enumerate() {
                let (p, n) = col_of[j];
                row[p] = c.clone();
                if let Some(n) = n {
                    row[n] = -c.clone();
                }
            }
            match rel {
                Relation::Le => {
                    row[slack] = Rat::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[total] = rhs.clone();
            if rhs.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[art_start + i] = Rat::one();
            t.push(row);
        }
        let mut basis: Vec<usize> = (art_start..art_start + m).collect();

        // phase 1: maximize -sum(artificials)
        let mut cost1 = vec![Rat::zero(); total];
        for c in cost1.iter_mut().skip(art_start) {
            *c = -Rat::one();
        }
        run_simplex(&mut t, &mut basis, &cost1, total);
        let infeasibility: Rat = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art_start)
            .map(|(i, _)| t[i][total].clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis
        let mut i = 0;
        while i < t.len() {
            if basis[i] >= art_start {
                match (0..art_start).find(|&j| !t[i][j].is_zero()) {
                    Some(j) => {
                        pivot(&mut t, &mut basis, i, j);
                        i += 1;
                    }
                    None => {
                        t.remove(i);
                        basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }

        // phase 2
        let mut cost2 = vec![Rat::zero(); total];
        for (j, c) in self.objective.iter().enumerate() {
            let (p, n) = col_of[j];
            cost2[p] = c.clone();
            if let Some(n) = n {
                cost2[n] = -c.clone();
            }
        }
        if !run_simplex(&mut t, &mut basis, &cost2, art_start) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![Rat::zero(); total];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = t[i][total].clone();
        }
        let point: Vec<Rat> = col_of
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &values[p] - &values[n],
                None => values[p].clone(),
            })
            .collect();
        let value = point
            .iter()
            .zip(&self.objective)
            .fold(Rat::zero(), |acc, (x, c)| acc + x * c);
        LpOutcome::Optimal { point, value }
    }
}

fn pivot(t: &mut [Vec<Rat>], basis: &mut [usize], r: usize, c: usize) {
    let inv = Rat::one() / &t[r][c];
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    basis[r] = c;
}

/// Maximizes `cost` over columns `< allowed`. Returns false if unbounded.
fn run_simplex(t: &mut [Vec<Rat>], basis: &mut [usize], cost: &[Rat], allowed: usize) -> bool {
    let rhs = t.first().map_or(0, |r| r.len() - 1);
    loop {
        // Bland: first column with negative reduced cost
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: Rat = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| !t[*i][j].is_zero())
                .fold(Rat::zero(), |acc, (i, &b)| acc + &cost[b] * &t[i][j]);
            (z - &cost[j]).is_negative()
        });
        let Some(j) = entering else { return true };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..t.len() {
            if !t[i][j].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][j];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else { return false };
        pivot(t, basis, r, j);
    }
}
