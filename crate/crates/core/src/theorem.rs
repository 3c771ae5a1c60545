//! Decomposing extremal rays of `Amp^ℓ(X)^∨` into curves that move on small
//! modifications, and checking `Amp^{n-k}(X)^∨ = Σ_f Mov_k(X, X†)` on a fan.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classes::{mov_cone_via, stable_base_locus, ClassSpaces, DivisorClass, StableBaseLocus};
use crate::construct::{
    check_small_modification_hypotheses, construct_curve_witness, construct_small_modification,
    nearest_small_modification, CurveWitness, SmallModification,
};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::polyhedra::PolyCone;
use crate::ratlinalg::{Rat, RatVector};

/// Limits for the flip search tried before the polytope construction.
pub const MAX_FLIPS: usize = 4;
pub const MAX_FLIP_FANS: usize = 3000;

/// Which small modification to use when the curve has to move on one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModificationStrategy {
    /// Fewest wall flips from the source fan (within [`MAX_FLIPS`]); the
    /// polytope construction if none is found.
    #[default]
    Nearest,
    /// Always the polytope construction.
    Polytope,
}

/// An extremal ray `c` of `Amp^ℓ(X)^∨` realized by a curve moving in a family
/// that sweeps out `V(τ)` on a small modification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub class: RatVector,
    pub level: usize,
    /// an `ℓ`-dimensional cone with `c` extremal in `Γ_σ^∨`
    pub sigma: Cone,
    /// the rays where `c` is negative
    pub tau: Cone,
    pub modification: Option<SmallModification>,
    pub witness: CurveWitness,
    pub swept_dimension: usize,
}

impl Decomposition {
    /// The fan the witness curve lives on.
    pub fn target_fan(&self) -> &Fan {
        &self.witness.fan
    }

    /// Checks the invariants: the witness verifies and has class `c`, the
    /// swept dimension is at least `n - ℓ`, `τ ⊆ σ`, and the modification (if
    /// any) verifies and carries the witness's fan.
    pub fn verify(&self, source: &Fan) -> bool {
        let n = source.rank();
        let fan_ok = match &self.modification {
            None => &self.witness.fan == source,
            Some(m) => &m.source == source && m.target == self.witness.fan && m.verify(),
        };
        fan_ok
            && self.witness.verify()
            && self.witness.target == self.class
            && self.witness.tau == self.tau
            && self.swept_dimension == self.witness.swept_dimension()
            && self.swept_dimension + self.level >= n
            && self.tau.is_face_of(&self.sigma)
            && self.sigma.dim() == self.level
    }
}

pub fn decompose_extremal_ray(fan: &Fan, ell: usize, c: &RatVector) -> Result<Decomposition> {
    decompose_extremal_ray_with(fan, ell, c, ModificationStrategy::default())
}

pub fn decompose_extremal_ray_with(
    fan: &Fan,
    ell: usize,
    c: &RatVector,
    strategy: ModificationStrategy,
) -> Result<Decomposition> {
    let spaces = ClassSpaces::new(fan)?;
    decompose_in(&spaces, ell, c, strategy)
}

fn decompose_in(
    spaces: &ClassSpaces,
    ell: usize,
    c: &RatVector,
    strategy: ModificationStrategy,
) -> Result<Decomposition> {
    let fan = spaces.fan();
    let r = fan.num_rays();
    if c.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: c.len(),
        });
    }
    let amp_dual = spaces.amp_dual_cone(ell)?;
    if !amp_dual.is_extremal(c)? {
        return Err(Error::NotExtremal(format!(
            "{c} does not span an extremal ray of Amp^{ell}(X)^∨"
        )));
    }
    let mut sigma = None;
    for s in fan.cones_of_dim(ell)? {
        if spaces.gamma_dual_cone(&s)?.is_extremal(c)? {
            sigma = Some(s);
            break;
        }
    }
    let sigma = sigma.ok_or_else(|| Error::NotExtremal(format!("{c} is extremal in no Γ_σ^∨ with dim σ = {ell}")))?;
    let tau = Cone::new((0..r).filter(|&i| c[i].is_negative()).collect());
    if !tau.is_face_of(&sigma) {
        return Err(Error::NotExtremal(format!(
            "negative entries of {c} do not span a face of {sigma}"
        )));
    }
    let (modification, target) = if tau.is_zero() {
        (None, fan.clone())
    } else {
        let others: Vec<usize> = (0..r).filter(|&i| c[i].is_positive()).collect();
        check_small_modification_hypotheses(fan, &tau, &others).map_err(|e| match e {
            Error::Hypothesis(why) => Error::NotExtremal(why),
            e => e,
        })?;
        let m = match strategy {
            ModificationStrategy::Nearest => {
                match nearest_small_modification(fan, &tau, &others, MAX_FLIPS, MAX_FLIP_FANS)? {
                    Some(m) => m,
                    None => construct_small_modification(fan, &tau, &others)?,
                }
            }
            ModificationStrategy::Polytope => construct_small_modification(fan, &tau, &others)?,
        };
        let target = m.target.clone();
        (Some(m), target)
    };
    let witness = construct_curve_witness(&target, &tau, c)?;
    Ok(Decomposition {
        class: c.clone(),
        level: ell,
        sigma,
        swept_dimension: witness.swept_dimension(),
        tau,
        modification,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayReport {
    pub ray: RatVector,
    pub decomposition: std::result::Result<Decomposition, String>,
    /// the decomposition verifies and the witness class lies in `Mov_k(X, X†)`
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReverseCheck {
    /// index into [`TheoremReport::fans`]
    pub fan: usize,
    /// generators of `Mov_k(X, X†)` pairing negatively with some generator of `Amp^{n-k}`
    pub violations: Vec<RatVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub fan: Fan,
    pub k: usize,
    pub level: usize,
    pub rays: Vec<RayReport>,
    /// the source fan, then every distinct small modification used
    pub fans: Vec<Fan>,
    pub reverse: Vec<ReverseCheck>,
    /// `Σ_f Mov_k(X, X†)` over [`Self::fans`] equals `Amp^{n-k}(X)^∨`
    pub sum_equals_amp_dual: bool,
    pub problems: Vec<String>,
}

impl TheoremReport {
    pub fn forward_ok(&self) -> bool {
        self.rays.iter().all(|r| r.ok)
    }

    pub fn reverse_ok(&self) -> bool {
        self.reverse.iter().all(|c| c.violations.is_empty())
    }

    pub fn verified(&self) -> bool {
        self.problems.is_empty() && self.forward_ok() && self.reverse_ok() && self.sum_equals_amp_dual
    }

    /// Rays whose curve had to move on a nontrivial modification.
    pub fn needing_modification(&self) -> impl Iterator<Item = &RayReport> {
        self.rays
            .iter()
            .filter(|r| matches!(&r.decomposition, Ok(d) if d.modification.as_ref().is_some_and(|m| !m.is_trivial())))
    }

    /// `Σ_f Mov_k(X, X†)` over the fans of the report.
    pub fn movable_sum(&self) -> Result<PolyCone> {
        movable_sum(&self.fan, &self.fans, self.k)
    }
}

fn movable_sum(fan: &Fan, fans: &[Fan], k: usize) -> Result<PolyCone> {
    let mut gens = Vec::new();
    for f in fans {
        gens.extend(mov_cone_via(fan, f, k)?.generators().iter().cloned());
    }
    PolyCone::from_generators(fan.num_rays(), &gens, &[])
}

pub fn verify_theorem(fan: &Fan, k: usize) -> Result<TheoremReport> {
    verify_theorem_with(fan, k, ModificationStrategy::default())
}

/// Decomposes every extremal ray of `Amp^{n-k}(X)^∨`, then checks that each
/// `Mov_k(X, X†)` over the modifications used pairs nonnegatively with
/// `Amp^{n-k}(X)`, and that together they span `Amp^{n-k}(X)^∨`.
pub fn verify_theorem_with(fan: &Fan, k: usize, strategy: ModificationStrategy) -> Result<TheoremReport> {
    let n = fan.rank();
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            lo: 1,
            hi: n as i64,
        });
    }
    let ell = n - k;
    let spaces = ClassSpaces::new(fan)?;
    let mut report = TheoremReport {
        fan: fan.clone(),
        k,
        level: ell,
        rays: Vec::new(),
        fans: vec![fan.clone()],
        reverse: Vec::new(),
        sum_equals_amp_dual: false,
        problems: Vec::new(),
    };
    let amp_dual = spaces.amp_dual_cone(ell)?;
    let rays = match amp_dual.extremal_rays() {
        Ok(rays) => rays,
        Err(e) => {
            report.problems.push(format!("Amp^{ell}(X)^∨: {e}"));
            return Ok(report);
        }
    };
    for ray in rays {
        let decomposition = decompose_in(&spaces, ell, &ray, strategy).map_err(|e| e.to_string());
        let mut ok = false;
        if let Ok(d) = &decomposition {
            let target = d.target_fan();
            ok = d.verify(fan) && d.swept_dimension >= k && mov_cone_via(fan, target, k)?.contains(&ray)?;
            if !report.fans.contains(target) {
                report.fans.push(target.clone());
            }
        }
        report.rays.push(RayReport { ray, decomposition, ok });
    }
    let amp = spaces.amp_cone(ell)?;
    let amp_gens: Vec<&RatVector> = amp.generators().iter().chain(amp.lineality_basis()).collect();
    let lineality: Vec<&RatVector> = amp.lineality_basis().iter().collect();
    for (i, f) in report.fans.iter().enumerate() {
        let mut violations = Vec::new();
        for g in mov_cone_via(fan, f, k)?.generators() {
            let y = spaces.curve_coords(g)?;
            let bad =
                amp_gens.iter().any(|x| x.dot(&y).is_negative()) || lineality.iter().any(|x| !x.dot(&y).is_zero());
            if bad {
                violations.push(g.clone());
            }
        }
        report.reverse.push(ReverseCheck { fan: i, violations });
    }
    report.sum_equals_amp_dual = movable_sum(fan, &report.fans, k)? == amp_dual;
    Ok(report)
}

/// A curve showing `dim B(D) ≥ k`: it moves in a family sweeping out
/// `V(τ)` (of dimension at least `k`) on a small modification and pairs
/// negatively with `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocusWitness {
    pub decomposition: Decomposition,
    pub pairing: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocusTest {
    pub locus: StableBaseLocus,
    /// `dim B(D) < k`
    pub holds: bool,
    pub witness: Option<BaseLocusWitness>,
}

/// Decides `dim B(D) < k`. When it fails, finds an extremal ray of
/// `Amp^{n-k}(X)^∨` pairing negatively with `D` and decomposes it.
pub fn stable_base_locus_dim_test(fan: &Fan, d: &DivisorClass, k: usize) -> Result<BaseLocusTest> {
    let n = fan.rank();
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            lo: 1,
            hi: n as i64,
        });
    }
    let spaces = ClassSpaces::new(fan)?;
    let locus = stable_base_locus(&spaces, d)?;
    let holds = locus.dimension_below(k);
    let mut witness = None;
    if !holds {
        let ell = n - k;
        for ray in spaces.amp_dual_cone(ell)?.extremal_rays()? {
            let pairing = d.coefficients().dot(&ray);
            if pairing.is_negative() {
                let decomposition = decompose_in(&spaces, ell, &ray, ModificationStrategy::default())?;
                witness = Some(BaseLocusWitness { decomposition, pairing });
                break;
            }
        }
        if witness.is_none() {
            return Err(Error::InvalidFan(
                "base locus is too large but no curve pairs negatively with D".into(),
            ));
        }
    }
    Ok(BaseLocusTest { locus, holds, witness })
}
