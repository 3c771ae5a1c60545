use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{quotient_fan, Cone, Fan, QuotientFanData};
use crate::ratlinalg::{solve_unique, Int, Rat, RatVector};

/// The first condition of the curve construction that a class violates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveViolation {
    /// (1) `Σ a_i v_i ≠ 0`
    NotAClass,
    /// (2) `a_i ≠ 0` for a ray not adjacent to `τ`
    NotAdjacent(usize),
    /// (3) `a_i < 0` for a ray outside `τ`
    Negative(usize),
}

impl CurveViolation {
    pub fn condition(&self) -> u8 {
        match self {
            CurveViolation::NotAClass => 1,
            CurveViolation::NotAdjacent(_) => 2,
            CurveViolation::Negative(_) => 3,
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            CurveViolation::NotAClass => None,
            CurveViolation::NotAdjacent(i) | CurveViolation::Negative(i) => Some(*i),
        }
    }
}

impl fmt::Display for CurveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveViolation::NotAClass => write!(f, "condition (1): Σ a_i v_i is not zero"),
            CurveViolation::NotAdjacent(i) => {
                write!(f, "condition (2): a_{i} is nonzero but ray {i} is not adjacent to τ")
            }
            CurveViolation::Negative(i) => {
                write!(f, "condition (3): a_{i} is negative but ray {i} is not in τ")
            }
        }
    }
}

/// Checks that `a` is the class of a curve moving in a family sweeping out
/// `V(τ)`; `Ok(None)` when all three conditions hold.
pub fn check_curve_conditions(fan: &Fan, tau: &Cone, a: &RatVector) -> Result<Option<CurveViolation>> {
    if a.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch {
            expected: fan.num_rays(),
            got: a.len(),
        });
    }
    let adjacent = fan.adjacent_rays(tau)?;
    if !fan.ray_matrix().mul_rat_vec(a).is_zero() {
        return Ok(Some(CurveViolation::NotAClass));
    }
    if let Some(i) = (0..a.len()).find(|&i| !a[i].is_zero() && !adjacent.contains(&i)) {
        return Ok(Some(CurveViolation::NotAdjacent(i)));
    }
    if let Some(i) = (0..a.len()).find(|&i| a[i].is_negative() && !tau.contains(i)) {
        return Ok(Some(CurveViolation::Negative(i)));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessBody {
    /// `τ = 0`: the curve `z ↦ Π φ_i(z - λ_i)^{a_i}` through the torus.
    SweepAll {
        exponents: Vec<Int>,
        /// `λ_i` for each ray with positive exponent
        markers: Vec<Option<Int>>,
    },
    /// `τ ≠ 0`: a curve on `V(τ)`, built on the quotient fan with targets `a_i m_i`.
    OnSubvariety {
        quotient: QuotientFanData,
        inner: Box<CurveWitness>,
    },
}

/// A certificate that `target` is the class of an irreducible curve moving
/// in a family sweeping out `V(tau)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveWitness {
    pub fan: Fan,
    pub target: RatVector,
    /// The body realizes the integral class `scale * target`.
    pub scale: Int,
    pub tau: Cone,
    pub body: WitnessBody,
}

impl CurveWitness {
    /// Dimension of `V(τ)`, the subvariety swept out by the curve.
    pub fn swept_dimension(&self) -> usize {
        self.fan.rank() - self.tau.dim()
    }

    pub fn depth(&self) -> usize {
        match &self.body {
            WitnessBody::SweepAll { .. } => 0,
            WitnessBody::OnSubvariety { inner, .. } => 1 + inner.depth(),
        }
    }

    /// Rebuilds the class bottom-up from the body: exponents at the
    /// bottom, then division by `m_i` and the kernel relation for the
    /// entries on `τ` at every level above.
    pub fn recompute_class(&self) -> Result<RatVector> {
        let r = self.fan.num_rays();
        let integral = match &self.body {
            WitnessBody::SweepAll { exponents, .. } => {
                if exponents.len() != r {
                    return Err(Error::DimensionMismatch {
                        expected: r,
                        got: exponents.len(),
                    });
                }
                RatVector::from_ints(exponents)
            }
            WitnessBody::OnSubvariety { quotient, inner } => {
                let b = inner.recompute_class()?;
                let mut a = RatVector::zeros(r);
                for q in &quotient.ray_map {
                    a.entries_mut()[q.original] = &b[q.image] / Rat::from_integer(q.multiplier.clone());
                }
                let rest = self.fan.ray_matrix().mul_rat_vec(&a);
                let cols: Vec<RatVector> = self.tau.indices().iter().map(|&i| self.fan.ray_vector(i)).collect();
                let x = solve_unique(&cols, &rest.neg())
                    .ok_or_else(|| Error::NotACurveClass("kernel relation has no solution on τ".into()))?;
                for (k, &i) in self.tau.indices().iter().enumerate() {
                    a.entries_mut()[i] = x[k].clone();
                }
                if !self.fan.ray_matrix().mul_rat_vec(&a).is_zero() {
                    return Err(Error::NotACurveClass("kernel relation has no solution on τ".into()));
                }
                a
            }
        };
        Ok(integral.scale(&Rat::new(Int::one(), self.scale.clone())))
    }

    /// Every level's invariants: the curve conditions, distinct markers
    /// matching the positive exponents, inner targets `a_i m_i`, and the
    /// recomputed class equal to the target.
    pub fn verify(&self) -> bool {
        self.verify_detailed().is_ok()
    }

    pub fn verify_detailed(&self) -> std::result::Result<(), String> {
        if !self.scale.is_positive() {
            return Err("scale must be positive".into());
        }
        match check_curve_conditions(&self.fan, &self.tau, &self.target) {
            Ok(None) => {}
            Ok(Some(v)) => return Err(v.to_string()),
            Err(e) => return Err(e.to_string()),
        }
        let integral = self.target.scale(&Rat::from_integer(self.scale.clone()));
        match &self.body {
            WitnessBody::SweepAll { exponents, markers } => {
                if !self.tau.is_zero() {
                    return Err("sweeping witness on a nonzero cone".into());
                }
                if RatVector::from_ints(exponents) != integral {
                    return Err("exponents differ from the scaled target".into());
                }
                if markers.len() != exponents.len() {
                    return Err("one marker slot per ray required".into());
                }
                let mut seen = BTreeSet::new();
                for (e, m) in exponents.iter().zip(markers) {
                    match m {
                        Some(l) if e.is_positive() => {
                            if !seen.insert(l.clone()) {
                                return Err(format!("marker {l} repeated"));
                            }
                        }
                        None if !e.is_positive() => {}
                        _ => return Err("markers must sit exactly on positive exponents".into()),
                    }
                }
            }
            WitnessBody::OnSubvariety { quotient, inner } => {
                if self.tau.is_zero() || quotient.base_cone != self.tau {
                    return Err("quotient taken over the wrong cone".into());
                }
                match quotient_fan(&self.fan, &self.tau) {
                    Ok(q) if &q == quotient => {}
                    _ => return Err("quotient fan data does not match the fan".into()),
                }
                if inner.fan != quotient.fan {
                    return Err("inner witness lives on another fan".into());
                }
                for q in &quotient.ray_map {
                    let want = &integral[q.original] * Rat::from_integer(q.multiplier.clone());
                    if inner.target[q.image] != want {
                        return Err(format!(
                            "inner target for ray {} is {}, expected a_i m_i = {want}",
                            q.original, inner.target[q.image]
                        ));
                    }
                }
                inner.verify_detailed().map_err(|e| format!("inner: {e}"))?;
            }
        }
        match self.recompute_class() {
            Ok(c) if c == self.target => Ok(()),
            Ok(c) => Err(format!("recomputed class {c} differs from target {}", self.target)),
            Err(e) => Err(e.to_string()),
        }
    }
}

/// Builds a curve witness for `a` sweeping out `V(τ)`, following the two
/// cases of the construction: a product of one-parameter subgroups when
/// `τ = 0`, and otherwise a curve on `V(τ)` from its quotient fan.
pub fn construct_curve_witness(fan: &Fan, tau: &Cone, a: &RatVector) -> Result<CurveWitness> {
    if let Some(v) = check_curve_conditions(fan, tau, a)? {
        return Err(Error::CurveConditions(v.to_string()));
    }
    let scale = if a.is_zero() { Int::one() } else { a.denominator_lcm() };
    let integral = a.scale(&Rat::from_integer(scale.clone()));
    let ints = integral.to_ints().expect("denominators cleared");
    let body = if tau.is_zero() {
        let markers = ints
            .iter()
            .enumerate()
            .map(|(i, e)| e.is_positive().then(|| Int::from(i + 1)))
            .collect();
        WitnessBody::SweepAll {
            exponents: ints,
            markers,
        }
    } else {
        let quotient = quotient_fan(fan, tau)?;
        let mut b = RatVector::zeros(quotient.fan.num_rays());
        for q in &quotient.ray_map {
            b.entries_mut()[q.image] = Rat::from_integer(&ints[q.original] * &q.multiplier);
        }
        let inner = construct_curve_witness(&quotient.fan, &Cone::zero(), &b)?;
        WitnessBody::OnSubvariety {
            quotient,
            inner: Box::new(inner),
        }
    };
    Ok(CurveWitness {
        fan: fan.clone(),
        target: a.clone(),
        scale,
        tau: tau.clone(),
        body,
    })
}
