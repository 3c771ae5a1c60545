//! Double description (Motzkin) conversion from inequalities to generators.

use num_traits::{Signed, Zero};

use crate::ratlinalg::{nullspace, primitive_vector, Rat, RatVector};

/// Bitset over processed inequality indices.
#[derive(Clone, Debug)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(bits: usize) -> Self {
        ZeroSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

fn normalize(v: RatVector) -> RatVector {
    primitive_vector(&v).unwrap_or(v)
}

/// Generators of `{x in Q^dim : <a, x> >= 0 for a in ineqs, <e, x> = 0 for e in eqs}`.
///
/// Returns `(rays, lineality)`. The rays are the extreme rays of the cone
/// modulo its lineality space, one representative each (not yet canonical).
pub(crate) fn inequalities_to_generators(
    dim: usize,
    ineqs: &[RatVector],
    eqs: &[RatVector],
) -> (Vec<RatVector>, Vec<RatVector>) {
    let mut lineality = nullspace(eqs, dim);
    let mut rays: Vec<RatVector> = Vec::new();
    let mut processed: Vec<&RatVector> = Vec::new();

    for a in ineqs {
        if let Some(pos) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            // The new halfspace cuts the lineality space: one direction of it
            // becomes a ray, the rest is shifted into the hyperplane a = 0.
            let mut l = lineality.swap_remove(pos);
            let mut al = a.dot(&l);
            if al.is_negative() {
                l = l.neg();
                al = -al;
            }
            for other in lineality.iter_mut() {
                let t = a.dot(other) / &al;
                if !t.is_zero() {
                    *other = other.add_scaled(&-t, &l);
                }
            }
            for r in rays.iter_mut() {
                let t = a.dot(r) / &al;
                if !t.is_zero() {
                    *r = normalize(r.add_scaled(&-t, &l));
                }
            }
            rays.push(normalize(l));
            processed.push(a);
            continue;
        }

        let values: Vec<Rat> = rays.iter().map(|r| a.dot(r)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            processed.push(a);
            continue;
        }

        let zero_sets: Vec<ZeroSet> = rays
            .iter()
            .map(|r| {
                let mut z = ZeroSet::new(processed.len());
                for (k, b) in processed.iter().enumerate() {
                    if b.dot(r).is_zero() {
                        z.set(k);
                    }
                }
                z
            })
            .collect();

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let mut next: Vec<RatVector> = (0..rays.len())
            .filter(|&i| !values[i].is_negative())
            .map(|i| rays[i].clone())
            .collect();

        for &p in &pos {
            for &n in &neg {
                let common = zero_sets[p].and(&zero_sets[n]);
                let adjacent = (0..rays.len()).all(|r| r == p || r == n || !common.is_subset_of(&zero_sets[r]));
                if !adjacent {
                    continue;
                }
                // values[p] > 0 > values[n]; the combination lies on a = 0.
                let combo = rays[n].scale(&values[p]).add_scaled(&-values[n].clone(), &rays[p]);
                next.push(normalize(combo));
            }
        }
        rays = next;
        processed.push(a);
    }
    (rays, lineality)
}
