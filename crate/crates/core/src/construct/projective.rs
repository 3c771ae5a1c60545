use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classes::wall_curves;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::polyhedra::lp::{LinearProgram, LpOutcome, Relation};
use crate::ratlinalg::{solve_unique, Rat, RatVector};

/// A strictly convex piecewise linear function on the fan: one linear
/// functional `m_σ` per maximal cone, agreeing on shared faces and
/// strictly larger than the neighbouring functional across every wall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectivityCertificate {
    /// The ample divisor `Σ d_i D_i` with `<m_σ, v_i> = -d_i` for `i ∈ σ`.
    pub divisor: RatVector,
    /// `(σ, m_σ)` in the order of the fan's maximal cones.
    pub functionals: Vec<(Cone, RatVector)>,
    /// The smallest intersection number with a wall curve.
    pub margin: Rat,
}

/// Weights on the walls of the fan whose curves sum to zero: no divisor
/// can be positive on all of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonProjectivityCertificate {
    pub weights: Vec<(Cone, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projectivity {
    Projective(ProjectivityCertificate),
    NotProjective(NonProjectivityCertificate),
}

impl Projectivity {
    pub fn is_projective(&self) -> bool {
        matches!(self, Projectivity::Projective(_))
    }

    pub fn certificate(&self) -> Option<&ProjectivityCertificate> {
        match self {
            Projectivity::Projective(c) => Some(c),
            Projectivity::NotProjective(_) => None,
        }
    }
}

/// Finds an ample divisor by an exact LP that maximizes the smallest
/// intersection number with a wall curve (capped at 1).
pub fn projectivity_certificate(fan: &Fan) -> Result<Projectivity> {
    let walls = wall_curves(fan)?;
    let r = fan.num_rays();
    // variables: d_0..d_{r-1} (free), t
    let mut lp = LinearProgram::new(r + 1);
    for i in 0..r {
        lp.set_free(i);
    }
    for (_, a) in &walls {
        let mut row: Vec<Rat> = a.entries().to_vec();
        row.push(-Rat::one());
        lp.constrain(row, Relation::Ge, Rat::zero());
    }
    let mut cap = vec![Rat::zero(); r + 1];
    cap[r] = Rat::one();
    lp.constrain(cap.clone(), Relation::Le, Rat::one());
    lp.maximize(cap);
    let LpOutcome::Optimal { point, value } = lp.solve() else {
        return Err(Error::InvalidFan("projectivity LP did not reach an optimum".into()));
    };
    if value.is_positive() {
        let divisor = RatVector::new(point[..r].to_vec());
        let functionals = fan
            .max_cones()
            .iter()
            .map(|s| Ok((s.clone(), local_functional(fan, s, &divisor)?)))
            .collect::<Result<Vec<_>>>()?;
        let margin = walls
            .iter()
            .map(|(_, a)| a.dot(&divisor))
            .min()
            .unwrap_or_else(Rat::one);
        return Ok(Projectivity::Projective(ProjectivityCertificate {
            divisor,
            functionals,
            margin,
        }));
    }
    // y ≥ 0, Σ y = 1, Σ y_ω a^ω = 0
    let mut lp = LinearProgram::new(walls.len());
    for i in 0..r {
        let row = walls.iter().map(|(_, a)| a[i].clone()).collect();
        lp.constrain(row, Relation::Eq, Rat::zero());
    }
    lp.constrain(vec![Rat::one(); walls.len()], Relation::Eq, Rat::one());
    let LpOutcome::Optimal { point, .. } = lp.solve() else {
        return Err(Error::InvalidFan("no ample divisor and no dual certificate".into()));
    };
    Ok(Projectivity::NotProjective(NonProjectivityCertificate {
        weights: walls.into_iter().map(|(w, _)| w).zip(point).collect(),
    }))
}

/// `m_σ` with `<m_σ, v_i> = -d_i` for `i ∈ σ`.
fn local_functional(fan: &Fan, sigma: &Cone, d: &RatVector) -> Result<RatVector> {
    let n = fan.rank();
    let cols: Vec<RatVector> = (0..n)
        .map(|j| {
            RatVector::new(
                sigma
                    .indices()
                    .iter()
                    .map(|&i| Rat::from_integer(fan.ray(i)[j].clone()))
                    .collect(),
            )
        })
        .collect();
    let rhs = RatVector::new(sigma.indices().iter().map(|&i| -d[i].clone()).collect());
    solve_unique(&cols, &rhs).ok_or_else(|| Error::InvalidFan(format!("cone {sigma} is not full dimensional")))
}

impl ProjectivityCertificate {
    /// Checks the functionals by substitution: they agree on the rays of
    /// each wall, and across the wall `m_σ` exceeds `m_σ'` on the ray of
    /// `σ'` opposite the wall.
    pub fn verify(&self, fan: &Fan) -> bool {
        if self.functionals.len() != fan.max_cones().len()
            || self.functionals.iter().zip(fan.max_cones()).any(|((s, _), t)| s != t)
        {
            return false;
        }
        let n = fan.rank();
        if self.functionals.iter().any(|(_, m)| m.len() != n) {
            return false;
        }
        for (k, (s, ms)) in self.functionals.iter().enumerate() {
            for (l, (t, mt)) in self.functionals.iter().enumerate() {
                if k == l {
                    continue;
                }
                let common = s.intersection(t);
                if common.dim() + 1 != n {
                    continue;
                }
                for &i in common.indices() {
                    let v = fan.ray_vector(i);
                    if ms.dot(&v) != mt.dot(&v) {
                        return false;
                    }
                }
                for &j in t.indices().iter().filter(|&&j| !s.contains(j)) {
                    let w = fan.ray_vector(j);
                    if ms.dot(&w) <= mt.dot(&w) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl NonProjectivityCertificate {
    pub fn verify(&self, fan: &Fan) -> bool {
        let Ok(walls) = wall_curves(fan) else {
            return false;
        };
        if walls.len() != self.weights.len() || self.weights.iter().any(|(_, y)| y.is_negative()) {
            return false;
        }
        let total: Rat = self.weights.iter().map(|(_, y)| y.clone()).sum();
        if total.is_zero() {
            return false;
        }
        let mut sum = RatVector::zeros(fan.num_rays());
        for ((w, a), (w2, y)) in walls.iter().zip(&self.weights) {
            if w != w2 {
                return false;
            }
            sum = sum.add_scaled(y, a);
        }
        sum.is_zero()
    }
}
