use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use super::projective::{projectivity_certificate, Projectivity};
use super::smallmod::{ConstructionLog, FlipLog, SmallModification};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::ratlinalg::{nullspace, Rat, RatVector};

/// Flips `fan` across the codimension one cone `wall`. The rays `Z` of the
/// two maximal cones meeting along `wall` satisfy one linear relation; when
/// every coefficient is nonzero, the cones `Z \ {k}` for `k` on one side of
/// the relation triangulate the same cone as those for `k` on the other
/// side. The flip swaps the two triangulations. Returns `None` when the
/// relation has a zero coefficient, when the old triangulation is not made
/// of maximal cones of `fan`, or when a ray would disappear.
pub fn flip_wall(fan: &Fan, wall: &Cone) -> Result<Option<Fan>> {
    let n = fan.rank();
    fan.require_cone(wall)?;
    if wall.dim() + 1 != n {
        return Err(Error::OutOfRange {
            what: "wall dimension",
            value: wall.dim() as i64,
            lo: n as i64 - 1,
            hi: n as i64 - 1,
        });
    }
    let sides: Vec<&Cone> = fan.maximal_cones_containing(wall).collect();
    if sides.len() != 2 {
        return Err(Error::InvalidFan(format!(
            "wall {wall} lies in {} maximal cones",
            sides.len()
        )));
    }
    let mut z: Vec<usize> = wall.indices().to_vec();
    z.extend(
        sides
            .iter()
            .flat_map(|c| c.indices().iter().copied().filter(|&i| !wall.contains(i))),
    );
    let z = Cone::new(z);
    let rows: Vec<RatVector> = (0..n)
        .map(|j| {
            RatVector::new(
                z.indices()
                    .iter()
                    .map(|&i| Rat::from_integer(fan.ray(i)[j].clone()))
                    .collect(),
            )
        })
        .collect();
    let kernel = nullspace(&rows, z.dim());
    let [c] = kernel.as_slice() else {
        return Err(Error::InvalidFan(format!(
            "cones around wall {wall} are not simplicial"
        )));
    };
    if c.iter().any(Zero::is_zero) {
        return Ok(None);
    }
    let outer = z
        .indices()
        .iter()
        .position(|&i| !wall.contains(i))
        .expect("two outer rays");
    let positive = c[outer].is_positive();
    let (old, new): (Vec<usize>, Vec<usize>) = z
        .indices()
        .iter()
        .zip(c.iter())
        .map(|(&i, x)| (i, x.is_positive() == positive))
        .fold((Vec::new(), Vec::new()), |(mut o, mut w), (i, same)| {
            if same {
                o.push(i)
            } else {
                w.push(i)
            }
            (o, w)
        });
    if new.len() < 2 {
        return Ok(None);
    }
    let old_cones: Vec<Cone> = old.iter().map(|&k| z.without(k)).collect();
    if old_cones.iter().any(|c| !fan.max_cones().contains(c)) {
        return Ok(None);
    }
    let mut cones: Vec<Cone> = fan
        .max_cones()
        .iter()
        .filter(|c| !old_cones.contains(c))
        .cloned()
        .collect();
    cones.extend(new.iter().map(|&k| z.without(k)));
    Fan::new(n, fan.rays().to_vec(), cones).map(Some)
}

/// Breadth-first search over wall flips of `fan` for a projective fan
/// containing `tau` in which every ray of `others` is adjacent to `tau`,
/// using at most `max_flips` flips and visiting at most `max_fans` fans.
/// The fan found is one of fewest flips from `fan`.
pub fn nearest_small_modification(
    fan: &Fan,
    tau: &Cone,
    others: &[usize],
    max_flips: usize,
    max_fans: usize,
) -> Result<Option<SmallModification>> {
    fan.require_cone(tau)?;
    let n = fan.rank();
    let mut rays: Vec<usize> = tau.indices().to_vec();
    rays.extend_from_slice(others);
    let mut seen: BTreeSet<Vec<Cone>> = BTreeSet::new();
    let mut queue: VecDeque<(Fan, Vec<Cone>)> = VecDeque::new();
    seen.insert(fan.max_cones().to_vec());
    queue.push_back((fan.clone(), Vec::new()));
    while let Some((current, walls)) = queue.pop_front() {
        if current.has_cone(tau) {
            let adj = current.adjacent_rays(tau)?;
            if others.iter().all(|i| adj.contains(i)) {
                if let Projectivity::Projective(certificate) = projectivity_certificate(&current)? {
                    let m = SmallModification {
                        source: fan.clone(),
                        target: current,
                        tau: tau.clone(),
                        rays: rays.clone(),
                        log: ConstructionLog::Flips(FlipLog { walls }),
                        certificate,
                    };
                    if m.verify() {
                        return Ok(Some(m));
                    }
                    continue;
                }
            }
        }
        if walls.len() == max_flips {
            continue;
        }
        for wall in current.cones_of_dim(n - 1)? {
            if seen.len() >= max_fans {
                break;
            }
            let Some(next) = flip_wall(&current, &wall)? else {
                continue;
            };
            if seen.insert(next.max_cones().to_vec()) {
                let mut w = walls.clone();
                w.push(wall);
                queue.push_back((next, w));
            }
        }
    }
    Ok(None)
}
