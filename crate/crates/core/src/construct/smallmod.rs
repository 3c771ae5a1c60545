use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::projective::{projectivity_certificate, Projectivity, ProjectivityCertificate};
use crate::error::{Error, Result};
use crate::fan::{star_subdivision, validate_fan, Cone, Fan};
use crate::polyhedra::lp::{LinearProgram, LpOutcome, Relation};
use crate::polyhedra::{polytope_faces, PolyCone};
use crate::ratlinalg::{rank, Int, Rat, RatVector};

const SCHEDULE_STEPS: u32 = 8;

/// How a small modification was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionLog {
    Polytope(PolytopeLog),
    Flips(FlipLog),
}

/// Walls flipped from the source fan, in order; each wall is given in the
/// ray indexing shared by all the fans along the way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipLog {
    pub walls: Vec<Cone>,
}

/// Parameters and intermediate fans of one run of the polytope construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeLog {
    /// schedule step that succeeded, starting at 1
    pub attempt: u32,
    pub p: Int,
    pub q: Int,
    /// `(j, ε_j)` for the rays outside `S`
    pub epsilons: Vec<(usize, Rat)>,
    /// maximal cones of the face fan of `Q`, in the source fan's ray indexing
    pub face_fan_cones: Vec<Cone>,
    /// rays of the source fan that are not vertices of `Q`, in the order subdivided
    pub subdivisions: Vec<usize>,
}

/// A complete simplicial fan on the same rays as `source` in which every
/// ray of `rays` is adjacent to `tau`, together with its construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallModification {
    pub source: Fan,
    pub target: Fan,
    pub tau: Cone,
    /// `S`: the rays of `tau`, then the rays to make adjacent
    pub rays: Vec<usize>,
    pub log: ConstructionLog,
    pub certificate: ProjectivityCertificate,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SmallModificationCheck {
    pub target_valid: bool,
    pub same_rays: bool,
    pub contains_tau: bool,
    pub rays_adjacent: bool,
    pub certificate_verifies: bool,
}

impl SmallModificationCheck {
    pub fn is_valid(&self) -> bool {
        self.target_valid && self.same_rays && self.contains_tau && self.rays_adjacent && self.certificate_verifies
    }
}

impl SmallModification {
    pub fn check(&self) -> SmallModificationCheck {
        let target_valid = validate_fan(&self.target).is_valid();
        let same_rays = self.source.rank() == self.target.rank() && self.source.rays() == self.target.rays();
        let contains_tau = self.target.has_cone(&self.tau);
        let rays_adjacent = contains_tau
            && self
                .target
                .adjacent_rays(&self.tau)
                .map(|adj| self.rays.iter().all(|i| adj.contains(i)))
                .unwrap_or(false);
        let certificate_verifies = target_valid && self.certificate.verify(&self.target);
        SmallModificationCheck {
            target_valid,
            same_rays,
            contains_tau,
            rays_adjacent,
            certificate_verifies,
        }
    }

    pub fn verify(&self) -> bool {
        self.check().is_valid()
    }

    /// Whether the modification changes no maximal cone.
    pub fn is_trivial(&self) -> bool {
        self.source.max_cones() == self.target.max_cones()
    }
}

/// Checks the hypotheses for making `others` adjacent to `tau`, where
/// `S = tau ∪ others`, with `others.last()` playing the part of the ray
/// left out of the independence condition. Returns a strictly positive
/// relation `Σ_{τ} a_i v_i = Σ_{others} a_i v_i`, indexed like `S`.
pub fn check_small_modification_hypotheses(fan: &Fan, tau: &Cone, others: &[usize]) -> Result<Vec<Rat>> {
    fan.require_cone(tau)?;
    let r = fan.num_rays();
    let n = fan.rank();
    let mut s: Vec<usize> = tau.indices().to_vec();
    for &i in others {
        if i >= r {
            return Err(Error::Hypothesis(format!("ray index {i} out of range")));
        }
        if s.contains(&i) {
            return Err(Error::Hypothesis(format!("ray {i} listed twice or already in τ")));
        }
        s.push(i);
    }
    let k = tau.dim();
    if s.len() <= k + 1 {
        return Err(Error::Hypothesis(format!(
            "s > k+1 required (s = {}, k = {k})",
            s.len()
        )));
    }
    let head: Vec<RatVector> = s[..s.len() - 1].iter().map(|&i| fan.ray_vector(i)).collect();
    if rank(&head) != head.len() {
        return Err(Error::Hypothesis(
            "the rays of S other than the last are linearly dependent".into(),
        ));
    }
    // maximize t subject to Σ_τ a_i v_i - Σ_others a_i v_i = 0, a_i ≥ t, Σ a_i = 1
    let m = s.len();
    let mut lp = LinearProgram::new(m + 1);
    for j in 0..n {
        let mut row: Vec<Rat> = s
            .iter()
            .enumerate()
            .map(|(pos, &i)| {
                let x = Rat::from_integer(fan.ray(i)[j].clone());
                if pos < k {
                    x
                } else {
                    -x
                }
            })
            .collect();
        row.push(Rat::zero());
        lp.constrain(row, Relation::Eq, Rat::zero());
    }
    for pos in 0..m {
        let mut row = vec![Rat::zero(); m + 1];
        row[pos] = Rat::one();
        row[m] = -Rat::one();
        lp.constrain(row, Relation::Ge, Rat::zero());
    }
    let mut norm = vec![Rat::one(); m + 1];
    norm[m] = Rat::zero();
    lp.constrain(norm, Relation::Eq, Rat::one());
    let mut obj = vec![Rat::zero(); m + 1];
    obj[m] = Rat::one();
    lp.maximize(obj);
    let relation = match lp.solve() {
        LpOutcome::Optimal { point, value } if value.is_positive() => point[..m].to_vec(),
        _ => {
            return Err(Error::Hypothesis(
                "no relation Σ_τ a_i v_i = Σ_others a_i v_i with all a_i > 0".into(),
            ))
        }
    };
    let gens: Vec<RatVector> = s.iter().map(|&i| fan.ray_vector(i)).collect();
    let cone_s = PolyCone::from_generators(n, &gens, &[])?;
    for j in (0..r).filter(|j| !s.contains(j)) {
        if cone_s.contains(&fan.ray_vector(j))? {
            return Err(Error::Hypothesis(format!("ray {j} lies in the cone spanned by S")));
        }
    }
    Ok(relation)
}

/// Builds a projective small modification `Δ†` of `fan` containing `tau`
/// in which every ray of `others` is adjacent to `tau`: the face fan of
/// `Q = conv{p v_τ, q v_others, ε_j v_j}`, star subdivided at the rays of
/// `fan` that are not vertices of `Q`.
pub fn construct_small_modification(fan: &Fan, tau: &Cone, others: &[usize]) -> Result<SmallModification> {
    check_small_modification_hypotheses(fan, tau, others)?;
    let r = fan.num_rays();
    let mut s: Vec<usize> = tau.indices().to_vec();
    s.extend_from_slice(others);
    let rest: Vec<usize> = (0..r).filter(|i| !s.contains(i)).collect();
    let mut failures = Vec::new();
    for t in 1..=SCHEDULE_STEPS {
        let p = Int::from(4).pow(t);
        let q = Int::one();
        let b = Int::from(8).pow(t);
        let epsilons: Vec<(usize, Rat)> = rest
            .iter()
            .enumerate()
            .map(|(pos, &j)| (j, Rat::new(Int::one(), &b * Int::from(pos + 1))))
            .collect();
        match attempt(fan, tau, &s, &p, &q, &epsilons) {
            Ok((target, face_fan_cones, subdivisions)) => {
                let certificate = match projectivity_certificate(&target)? {
                    Projectivity::Projective(c) => c,
                    Projectivity::NotProjective(_) => {
                        failures.push(format!("step {t}: result is not projective"));
                        continue;
                    }
                };
                let m = SmallModification {
                    source: fan.clone(),
                    target,
                    tau: tau.clone(),
                    rays: s.clone(),
                    log: ConstructionLog::Polytope(PolytopeLog {
                        attempt: t,
                        p,
                        q,
                        epsilons,
                        face_fan_cones,
                        subdivisions,
                    }),
                    certificate,
                };
                let check = m.check();
                if check.is_valid() {
                    return Ok(m);
                }
                failures.push(format!("step {t}: result fails its checks: {check:?}"));
            }
            Err(why) => failures.push(format!("step {t}: {why}")),
        }
    }
    Err(Error::ParameterSearchExhausted(failures.join("; ")))
}

type Attempt = (Fan, Vec<Cone>, Vec<usize>);

fn attempt(
    fan: &Fan,
    tau: &Cone,
    s: &[usize],
    p: &Int,
    q: &Int,
    epsilons: &[(usize, Rat)],
) -> std::result::Result<Attempt, String> {
    let r = fan.num_rays();
    let n = fan.rank();
    let mut factor = vec![Rat::zero(); r];
    for &i in s {
        factor[i] = Rat::from_integer(if tau.contains(i) { p.clone() } else { q.clone() });
    }
    for (j, e) in epsilons {
        factor[*j] = e.clone();
    }
    let points: Vec<RatVector> = (0..r).map(|i| fan.ray_vector(i).scale(&factor[i])).collect();
    let q_poly = polytope_faces(&points);
    if q_poly.dim() != Some(n) {
        return Err("Q is not full dimensional".into());
    }
    // vertex position -> ray index
    let vertex_ray: Vec<usize> = q_poly
        .vertices()
        .iter()
        .map(|v| points.iter().position(|p| p == v).expect("vertices are input points"))
        .collect();
    let facets: Vec<Cone> = q_poly
        .facets()
        .map(|f| Cone::new(f.vertices.iter().map(|&v| vertex_ray[v]).collect()))
        .collect();
    if facets.iter().any(|c| c.dim() != n) {
        return Err("the face fan of Q is not simplicial".into());
    }
    for &i in &s[tau.dim()..] {
        let want: Vec<usize> = s
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| q_poly.vertex_index(&points[j]))
            .collect::<Option<Vec<_>>>()
            .ok_or("a point of S is not a vertex of Q")?;
        if !q_poly.is_face(&want) {
            return Err(format!("S minus ray {i} does not span a face of Q"));
        }
    }
    // face fan on its own rays, listed in increasing source index
    let mut used: Vec<usize> = vertex_ray.clone();
    used.sort_unstable();
    let pos_of = |i: usize| used.iter().position(|&u| u == i).expect("vertex ray");
    let cones: Vec<Cone> = facets
        .iter()
        .map(|c| Cone::new(c.indices().iter().map(|&i| pos_of(i)).collect()))
        .collect();
    let rays = used.iter().map(|&i| fan.ray(i).to_vec()).collect();
    let mut current = Fan::new(n, rays, cones).map_err(|e| format!("face fan of Q: {e}"))?;
    let missing: Vec<usize> = (0..r).filter(|i| !used.contains(i)).collect();
    for &j in &missing {
        current = star_subdivision(&current, &fan.ray_vector(j)).map_err(|e| format!("subdividing at ray {j}: {e}"))?;
    }
    let perm = current.ray_permutation_to(fan).map_err(|e| e.to_string())?;
    let target = current.reindexed(&perm).map_err(|e| e.to_string())?;
    Ok((target, facets, missing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::tests::f1;
    use crate::fan::tests::{eight_ray, p2};

    #[test]
    fn flop_of_the_eight_ray_fan() {
        let f = eight_ray();
        let m = construct_small_modification(&f, &Cone::ray(6), &[0, 1, 2]).unwrap();
        assert!(m.verify());
        let adj = m.target.adjacent_rays(&Cone::ray(6)).unwrap();
        for i in [0, 1, 2] {
            assert!(adj.contains(&i));
        }
        assert!(!m.is_trivial());
        assert_eq!(m.target.max_cones().len(), 12);
    }

    #[test]
    fn second_ray_set_also_qualifies() {
        // v4 + v5 + v6 = 3 v7 is a strictly positive relation
        let f = eight_ray();
        let m = construct_small_modification(&f, &Cone::ray(6), &[3, 4, 5]).unwrap();
        assert!(m.verify());
    }

    #[test]
    fn too_few_rays() {
        let err = construct_small_modification(&eight_ray(), &Cone::ray(6), &[0]).unwrap_err();
        assert_eq!(err, Error::Hypothesis("s > k+1 required (s = 2, k = 1)".into()));
    }

    #[test]
    fn hypotheses_checked() {
        let f = eight_ray();
        // v1 + v8 is not a positive multiple of v7
        assert!(check_small_modification_hypotheses(&f, &Cone::ray(6), &[0, 7]).is_err());
        // v0 + v1 + v2 = 0 on P²: the signs are wrong
        assert!(check_small_modification_hypotheses(&p2(), &Cone::ray(0), &[1, 2]).is_err());
        // v3 = v0 + v1 on the blow-up of P²
        let rel = check_small_modification_hypotheses(&f1(), &Cone::ray(3), &[0, 1]).unwrap();
        assert!(rel.iter().all(|a| a.is_positive()));
        assert!(check_small_modification_hypotheses(&f, &Cone::ray(6), &[0, 0, 1]).is_err());
        assert!(check_small_modification_hypotheses(&f, &Cone::ray(6), &[6, 0, 1]).is_err());
        assert!(check_small_modification_hypotheses(&f, &Cone::ray(6), &[0, 1, 9]).is_err());
    }

    #[test]
    fn serialized_modification_still_verifies() {
        let m = construct_small_modification(&eight_ray(), &Cone::ray(6), &[0, 1, 2]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: SmallModification = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.check(), m.check());
    }

    #[test]
    fn conic_class_moves_on_the_polytope_modification() {
        use crate::classes::tests::c_class;
        use crate::construct::{check_curve_conditions, construct_curve_witness, WitnessBody};
        let f = eight_ray();
        let tau = Cone::ray(6);
        assert!(check_curve_conditions(&f, &tau, &c_class()).unwrap().is_some());
        let m = construct_small_modification(&f, &tau, &[0, 1, 2]).unwrap();
        assert_eq!(check_curve_conditions(&m.target, &tau, &c_class()).unwrap(), None);
        let w = construct_curve_witness(&m.target, &tau, &c_class()).unwrap();
        assert!(w.verify());
        assert_eq!(w.swept_dimension(), 2);
        let WitnessBody::OnSubvariety { quotient, inner } = &w.body else {
            panic!("τ is nonzero");
        };
        // here V(ρ7) is the plane with boundary D1, D2, D3 and C is a line on it
        assert_eq!(m.target.adjacent_rays(&tau).unwrap(), vec![0, 1, 2, 6]);
        assert_eq!(quotient.fan.num_rays(), 3);
        for q in &quotient.ray_map {
            assert_eq!(inner.target[q.image], Rat::one());
        }
    }

    #[test]
    fn surfaces_admit_only_trivial_modifications() {
        let m = construct_small_modification(&f1(), &Cone::ray(3), &[0, 1]).unwrap();
        assert!(m.verify());
        assert!(m.is_trivial());
    }
}
