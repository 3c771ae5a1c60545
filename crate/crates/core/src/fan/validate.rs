use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Cone, Fan};
use crate::polyhedra::PolyCone;
use crate::ratlinalg::{is_primitive_ints, rank, RatVector};

const DIRECTION_SAMPLES: usize = 100;
const DIRECTION_SEED: u64 = 0x7041_7a4e;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rays_primitive: bool,
    pub simplicial: bool,
    pub compatible: bool,
    pub complete: bool,
    /// indices into `Fan::max_cones` of cones involved in some failure
    pub offending_cones: Vec<usize>,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.rays_primitive && self.simplicial && self.compatible && self.complete
    }
}

pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let mut report = ValidationReport {
        rays_primitive: true,
        simplicial: true,
        compatible: true,
        complete: true,
        ..Default::default()
    };
    let mut offending = BTreeSet::new();
    let n = fan.rank();

    // rays
    let mut seen = BTreeMap::new();
    for (i, r) in fan.rays().iter().enumerate() {
        if r.iter().all(Zero::is_zero) {
            report.rays_primitive = false;
            report.problems.push(format!("ray {i} is zero"));
        } else if !is_primitive_ints(r) {
            report.rays_primitive = false;
            report.problems.push(format!("ray {i} is not primitive"));
        }
        if let Some(j) = seen.insert(r.clone(), i) {
            report.rays_primitive = false;
            report.problems.push(format!("rays {j} and {i} coincide"));
        }
    }
    let used: BTreeSet<usize> = fan
        .max_cones()
        .iter()
        .flat_map(|c| c.indices().iter().copied())
        .collect();
    for i in 0..fan.num_rays() {
        if !used.contains(&i) {
            report.rays_primitive = false;
            report.problems.push(format!("ray {i} lies in no maximal cone"));
        }
    }

    // simplicial
    for (k, c) in fan.max_cones().iter().enumerate() {
        let gens: Vec<RatVector> = c.indices().iter().map(|&i| fan.ray_vector(i)).collect();
        if rank(&gens) != c.dim() {
            report.simplicial = false;
            offending.insert(k);
            report.problems.push(format!("cone {c} is not simplicial"));
        }
    }

    // pairwise compatibility: cone(a) ∩ cone(b) = cone(a ∩ b)
    let cones: Vec<PolyCone> = fan
        .max_cones()
        .iter()
        .map(|c| {
            let gens: Vec<RatVector> = c.indices().iter().map(|&i| fan.ray_vector(i)).collect();
            PolyCone::from_generators(n, &gens, &[]).expect("ray lengths checked")
        })
        .collect();
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            let common = fan.max_cones()[a].intersection(&fan.max_cones()[b]);
            let gens: Vec<RatVector> = common.indices().iter().map(|&i| fan.ray_vector(i)).collect();
            let expected = PolyCone::from_generators(n, &gens, &[]).expect("ray lengths checked");
            let actual = cones[a].intersection(&cones[b]).expect("same ambient dimension");
            if actual != expected {
                report.compatible = false;
                offending.insert(a);
                offending.insert(b);
                report.problems.push(format!(
                    "cones {} and {} do not meet in a common face",
                    fan.max_cones()[a],
                    fan.max_cones()[b]
                ));
            }
        }
    }

    // completeness: pure of full dimension, every wall in exactly two maximal
    // cones, cross-checked by locating sample directions
    let mut complete = true;
    for (k, c) in fan.max_cones().iter().enumerate() {
        if c.dim() != n {
            complete = false;
            offending.insert(k);
            report
                .problems
                .push(format!("maximal cone {c} has dimension {} < {n}", c.dim()));
        }
    }
    if fan.max_cones().is_empty() {
        complete = false;
        report.problems.push("fan has no maximal cones".into());
    }
    if complete && n > 0 {
        let mut walls: BTreeMap<Cone, Vec<usize>> = BTreeMap::new();
        for (k, c) in fan.max_cones().iter().enumerate() {
            for w in c.subsets(n - 1) {
                walls.entry(w).or_default().push(k);
            }
        }
        for (w, owners) in &walls {
            if owners.len() != 2 {
                complete = false;
                offending.extend(owners.iter().copied());
                report
                    .problems
                    .push(format!("wall {w} lies in {} maximal cones instead of 2", owners.len()));
            }
        }
    }
    if n > 0 && report.simplicial {
        let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED);
        let mut located = true;
        for _ in 0..DIRECTION_SAMPLES {
            let mut x: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..=50)).collect();
            if x.iter().all(|&v| v == 0) {
                x[0] = 1;
            }
            let x = RatVector::from_i64s(&x);
            if fan.locate(&x).is_none() {
                located = false;
                report.problems.push(format!("direction {x} lies outside the support"));
                break;
            }
        }
        if complete != located {
            report.problems.push(format!(
                "completeness checks disagree (walls: {complete}, sampling: {located})"
            ));
        }
        complete &= located;
    }
    report.complete = complete;
    report.offending_cones = offending.into_iter().collect();
    report
}
