use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Cone, Fan};
use crate::error::Result;
use crate::ratlinalg::{hermite_normal_form, primitive_ints, smith_normal_form, Int, IntMatrix};

/// Image of a ray adjacent to (but not in) the base cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientRay {
    /// index of the ray in the original fan
    pub original: usize,
    /// index of the image ray in the quotient fan
    pub image: usize,
    pub primitive_image: Vec<Int>,
    /// `projection * v_original == multiplier * primitive_image`
    pub multiplier: Int,
}

/// The star of a cone `tau`, pushed to the quotient lattice `N / (N ∩ span tau)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientFanData {
    pub base_cone: Cone,
    pub quotient_rank: usize,
    /// `(n - dim tau) x n`, surjective onto the quotient lattice, kernel `span(tau) ∩ N`
    pub projection: IntMatrix,
    pub fan: Fan,
    pub ray_map: Vec<QuotientRay>,
}

impl QuotientFanData {
    pub fn image_of(&self, original: usize) -> Option<&QuotientRay> {
        self.ray_map.iter().find(|q| q.original == original)
    }
}

pub fn quotient_fan(fan: &Fan, tau: &Cone) -> Result<QuotientFanData> {
    fan.require_cone(tau)?;
    let n = fan.rank();
    let k = tau.dim();

    // Adapt a basis of N to the saturation of span(tau): U * B * V = S puts
    // the tau generators into the first k coordinates.
    let cols: Vec<Vec<Int>> = tau.indices().iter().map(|&i| fan.ray(i).to_vec()).collect();
    let b = IntMatrix::from_columns(n, &cols);
    let snf = smith_normal_form(&b);
    let rows: Vec<Vec<Int>> = (k..n).map(|i| snf.u.row(i).to_vec()).collect();
    let projection = hermite_normal_form(&IntMatrix::from_rows(n, &rows));
    debug_assert_eq!(projection.rows(), n - k);

    let adjacent = fan.adjacent_rays(tau)?;
    let mut ray_map = Vec::new();
    let mut images = Vec::new();
    for i in adjacent.into_iter().filter(|&i| !tau.contains(i)) {
        let img = projection.mul_vec(fan.ray(i));
        let m = img.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
        let w = primitive_ints(&img);
        ray_map.push(QuotientRay {
            original: i,
            image: images.len(),
            primitive_image: w.clone(),
            multiplier: m,
        });
        images.push(w);
    }
    let index_of = |orig: usize| ray_map.iter().find(|q| q.original == orig).map(|q| q.image);
    let cones: Vec<Cone> = fan
        .maximal_cones_containing(tau)
        .map(|c| {
            Cone::new(
                c.indices()
                    .iter()
                    .filter(|&&i| !tau.contains(i))
                    .map(|&i| index_of(i).expect("adjacent ray"))
                    .collect(),
            )
        })
        .collect();
    let quotient = if n == k {
        Fan::from_parts(0, Vec::new(), cones)?
    } else {
        Fan::new(n - k, images, cones)?
    };
    Ok(QuotientFanData {
        base_cone: tau.clone(),
        quotient_rank: n - k,
        projection,
        fan: quotient,
        ray_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::tests::{eight_ray, p1p1, p2};
    use crate::fan::validate_fan;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn p1p1_over_a_ray() {
        let q = quotient_fan(&p1p1(), &Cone::ray(0)).unwrap();
        assert_eq!(q.quotient_rank, 1);
        assert_eq!(q.ray_map.len(), 2);
        assert!(q.ray_map.iter().all(|r| r.multiplier == Int::from(1)));
        let mut imgs: Vec<Vec<Int>> = q.ray_map.iter().map(|r| r.primitive_image.clone()).collect();
        imgs.sort();
        assert_eq!(imgs, vec![ints(&[-1]), ints(&[1])]);
        assert!(validate_fan(&q.fan).is_valid());
    }

    #[test]
    fn eight_ray_fan_over_its_seventh_ray() {
        let q = quotient_fan(&eight_ray(), &Cone::ray(6)).unwrap();
        assert_eq!(q.quotient_rank, 2);
        let origs: Vec<usize> = q.ray_map.iter().map(|r| r.original).collect();
        assert_eq!(origs, vec![3, 4, 5]);
        let imgs: Vec<Vec<Int>> = q.ray_map.iter().map(|r| r.primitive_image.clone()).collect();
        assert_eq!(imgs, vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[-1, -1])]);
        assert!(q.ray_map.iter().all(|r| r.multiplier == Int::from(1)));
        assert_eq!(q.fan.max_cones().len(), 3);
        assert!(validate_fan(&q.fan).is_valid());
    }

    #[test]
    fn multipliers_detect_non_saturated_images() {
        // weighted projective plane style fan: rays (1,0),(0,1),(-1,-2)
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        let q = quotient_fan(&f, &Cone::ray(0)).unwrap();
        // projection kills (1,0): image of (0,1) is ±1, image of (-1,-2) is ±2
        let ms: Vec<Int> = q.ray_map.iter().map(|r| r.multiplier.clone()).collect();
        assert_eq!(ms, vec![Int::from(1), Int::from(2)]);
        for r in &q.ray_map {
            let img = q.projection.mul_vec(f.ray(r.original));
            let scaled: Vec<Int> = r.primitive_image.iter().map(|x| x * &r.multiplier).collect();
            assert_eq!(img, scaled);
        }
    }

    #[test]
    fn zero_cone_quotient_is_the_fan() {
        let f = p2();
        let q = quotient_fan(&f, &Cone::zero()).unwrap();
        assert_eq!(q.fan, f);
        assert_eq!(q.projection, IntMatrix::identity(2));
    }

    #[test]
    fn maximal_cone_quotient_is_a_point() {
        let q = quotient_fan(&p2(), &Cone::new(vec![0, 1])).unwrap();
        assert_eq!(q.quotient_rank, 0);
        assert!(q.ray_map.is_empty());
        assert_eq!(q.fan.max_cones(), &[Cone::zero()]);
    }

    #[test]
    fn non_cone_rejected() {
        assert!(quotient_fan(&eight_ray(), &Cone::new(vec![0, 6])).is_err());
    }
}
