use num_traits::Signed;

use super::Fan;
use crate::error::{Error, Result};
use crate::ratlinalg::{primitive_vector, RatVector};

/// Star subdivision of `fan` at the ray through `v`. The new ray is appended
/// after the existing ones; existing ray indices are unchanged.
pub fn star_subdivision(fan: &Fan, v: &RatVector) -> Result<Fan> {
    if v.len() != fan.rank() {
        return Err(Error::DimensionMismatch {
            expected: fan.rank(),
            got: v.len(),
        });
    }
    let p = primitive_vector(v)?;
    let p_ints = p.to_ints().expect("primitive vectors are integral");
    if fan.ray_index(&p_ints).is_some() {
        return Err(Error::AlreadyARay(p.to_string()));
    }
    let new_ray = fan.num_rays();
    let mut cones = Vec::new();
    let mut hit = false;
    for c in fan.max_cones() {
        match fan.cone_coordinates(c, &p) {
            Some(lambda) => {
                hit = true;
                for (k, &i) in c.indices().iter().enumerate() {
                    if lambda[k].is_positive() {
                        cones.push(c.without(i).with(new_ray));
                    }
                }
            }
            None => cones.push(c.clone()),
        }
    }
    if !hit {
        return Err(Error::NotInSupport(p.to_string()));
    }
    let mut rays = fan.rays().to_vec();
    rays.push(p_ints);
    Fan::new(fan.rank(), rays, cones)
}
