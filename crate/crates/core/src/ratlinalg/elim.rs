use num_traits::{One, Zero};

use super::{primitive_vector, Rat, RatVector};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RatVector], ncols: usize) -> (Vec<RatVector>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m.into_iter().map(RatVector::new).collect(), pivots)
}

pub fn rank(rows: &[RatVector]) -> usize {
    match rows.first() {
        None => 0,
        Some(first) => rref(rows, first.len()).1.len(),
    }
}

/// Basis of `{x : <row, x> = 0 for every row}` inside `Q^ncols`.
pub fn nullspace(rows: &[RatVector], ncols: usize) -> Vec<RatVector> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = RatVector::zeros(ncols);
            x.entries_mut()[f] = Rat::one();
            for (row, &p) in red.iter().zip(&pivots) {
                x.entries_mut()[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Canonical basis of the row span: reduced echelon rows scaled to primitive
/// integer vectors. Two families span the same subspace iff their results are equal.
pub fn span_basis(rows: &[RatVector], ncols: usize) -> Vec<RatVector> {
    rref(rows, ncols)
        .0
        .iter()
        .map(|r| primitive_vector(r).expect("rref rows are nonzero"))
        .collect()
}

/// Some `x` with `sum_j x_j columns[j] = b`, or `None` if `b` is not in the span.
/// Free variables are set to zero, so the answer is unique when the columns are
/// independent.
pub fn solve_unique(columns: &[RatVector], b: &RatVector) -> Option<RatVector> {
    let n = b.len();
    let k = columns.len();
    // augmented system: rows are coordinates
    let rows: Vec<RatVector> = (0..n)
        .map(|i| {
            let mut e: Vec<Rat> = columns.iter().map(|c| c[i].clone()).collect();
            e.push(b[i].clone());
            RatVector::new(e)
        })
        .collect();
    let (red, pivots) = rref(&rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = RatVector::zeros(k);
    for (row, &p) in red.iter().zip(&pivots) {
        x.entries_mut()[p] = row[k].clone();
    }
    Some(x)
}
