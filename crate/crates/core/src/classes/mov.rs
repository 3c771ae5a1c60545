use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::polyhedra::PolyCone;
use crate::ratlinalg::RatVector;

/// `M_τ`: curve classes with `a_i = 0` unless `ρ_i` is adjacent to `τ`, and
/// `a_i ≥ 0` unless `ρ_i ∈ τ`. These are the classes of curves moving in a
/// family sweeping out `V(τ)`.
pub fn moving_cone_for(fan: &Fan, tau: &Cone) -> Result<PolyCone> {
    let r = fan.num_rays();
    let adjacent = fan.adjacent_rays(tau)?;
    let mut eqs = fan.relation_rows();
    let mut ineqs = Vec::new();
    for i in 0..r {
        if !adjacent.contains(&i) {
            eqs.push(RatVector::unit(r, i));
        } else if !tau.contains(i) {
            ineqs.push(RatVector::unit(r, i));
        }
    }
    PolyCone::from_inequalities(r, &ineqs, &eqs)
}

fn check_k(fan: &Fan, k: usize) -> Result<()> {
    if k == 0 || k > fan.rank() {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            lo: 1,
            hi: fan.rank() as i64,
        });
    }
    Ok(())
}

/// `Mov_k(X) = Σ_{dim τ ≤ n-k} M_τ`.
pub fn mov_cone(fan: &Fan, k: usize) -> Result<PolyCone> {
    mov_cone_via(fan, fan, k)
}

/// `Mov_k(X, X†)` for the small modification given by `dagger`, in the ray
/// indexing of `fan`: the sum of `M_τ(Δ†)` over cones `τ` of dimension at
/// most `n - k` lying in both fans, so that `V(τ)` is carried birationally
/// onto its image.
pub fn mov_cone_via(fan: &Fan, dagger: &Fan, k: usize) -> Result<PolyCone> {
    check_k(fan, k)?;
    let perm = fan.ray_permutation_to(dagger)?;
    let r = fan.num_rays();
    let n = fan.rank();
    let mut gens = Vec::new();
    for tau in dagger.all_cones() {
        if tau.dim() > n - k {
            continue;
        }
        let image = Cone::new(tau.indices().iter().map(|&j| perm[j]).collect());
        if !fan.has_cone(&image) {
            continue;
        }
        let m = moving_cone_for(dagger, &tau)?;
        for g in m.generators() {
            let mut a = RatVector::zeros(r);
            for (j, x) in g.iter().enumerate() {
                a.entries_mut()[perm[j]] = x.clone();
            }
            gens.push(a);
        }
    }
    PolyCone::from_generators(r, &gens, &[])
}
