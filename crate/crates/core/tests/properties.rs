use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricloci::classes::{
    base_locus_finite, mov_cone, moving_cone_for, pair, stable_base_locus, wall_curves, ClassSpaces, CycleClass,
    DivisorClass,
};
use toricloci::construct::{construct_curve_witness, construct_small_modification, SmallModification, WitnessBody};
use toricloci::document::{builtin, builtins, parse_fan, serialize_fan, BUILTIN_NAMES};
use toricloci::fan::{quotient_fan, star_subdivision, validate_fan, Cone, Fan};
use toricloci::polyhedra::lp::{LinearProgram, LpOutcome, Relation};
use toricloci::polyhedra::PolyCone;
use toricloci::ratlinalg::{
    integer_kernel_basis, primitive_vector, rank, smith_normal_form, Int, IntMatrix, Rat, RatVector,
};
use toricloci::theorem::{decompose_extremal_ray, stable_base_locus_dim_test, verify_theorem, TheoremReport};

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), m).prop_map(move |rows| {
            let rows: Vec<Vec<Int>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(Int::from).collect())
                .collect();
            IntMatrix::from_rows(n, &rows)
        })
    })
}

/// Rank by fraction-free (Bareiss) elimination over the integers.
fn bareiss_rank(a: &IntMatrix) -> usize {
    let mut m: Vec<Vec<BigInt>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                m[i][j] = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn int_vector(len: usize, lo: i64, hi: i64) -> impl Strategy<Value = RatVector> {
    proptest::collection::vec(lo..=hi, len).prop_map(|v| RatVector::from_i64s(&v))
}

fn cone_gens() -> impl Strategy<Value = (usize, Vec<RatVector>)> {
    (2usize..=5).prop_flat_map(|d| (Just(d), proptest::collection::vec(int_vector(d, -3, 3), 1..=8)))
}

fn cone_pair() -> impl Strategy<Value = (usize, Vec<RatVector>, Vec<RatVector>)> {
    (2usize..=4).prop_flat_map(|d| {
        (
            Just(d),
            proptest::collection::vec(int_vector(d, -3, 3), d..=6),
            proptest::collection::vec(int_vector(d, -3, 3), d..=6),
        )
    })
}

fn cone(d: usize, gens: &[RatVector]) -> PolyCone {
    PolyCone::from_generators(d, gens, &[]).unwrap()
}

fn lp_member(gens: &[RatVector], x: &RatVector) -> bool {
    let mut lp = LinearProgram::new(gens.len());
    for j in 0..x.len() {
        lp.constrain(gens.iter().map(|g| g[j].clone()).collect(), Relation::Eq, x[j].clone());
    }
    matches!(lp.solve(), LpOutcome::Optimal { .. })
}

fn builtin_index() -> impl Strategy<Value = usize> {
    0..BUILTIN_NAMES.len()
}

fn nth_builtin(i: usize) -> (&'static str, Fan) {
    builtins().swap_remove(i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(a in int_matrix()) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        prop_assert!(snf.u.determinant().abs().is_one());
        prop_assert!(snf.v.determinant().abs().is_one());
        prop_assert!(snf.s.is_diagonal());
        let d = snf.diagonal();
        for w in d.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn integer_kernel_has_the_right_size(a in int_matrix()) {
        let kernel = integer_kernel_basis(&a);
        for x in &kernel {
            prop_assert!(x.is_integral());
            prop_assert!(a.mul_rat_vec(x).is_zero());
        }
        prop_assert_eq!(kernel.len(), a.cols() - bareiss_rank(&a));
        prop_assert_eq!(rank(&kernel), kernel.len());
    }

    #[test]
    fn primitive_vector_is_idempotent_and_scale_invariant(
        v in int_vector(4, -9, 9),
        num in 1i64..50,
        den in 1i64..50,
    ) {
        prop_assume!(!v.is_zero());
        let p = primitive_vector(&v).unwrap();
        prop_assert_eq!(primitive_vector(&p).unwrap(), p.clone());
        prop_assert_eq!(primitive_vector(&v.scale(&Rat::new(num.into(), den.into()))).unwrap(), p);
    }

    #[test]
    fn cones_are_bidual((d, gens) in cone_gens()) {
        let c = cone(d, &gens);
        let cc = c.dual().dual();
        prop_assert!(c.contains_cone(&cc).unwrap() && cc.contains_cone(&c).unwrap());
        prop_assert_eq!(cc, c);
    }

    #[test]
    fn every_extremal_ray_is_needed((d, gens) in cone_gens()) {
        let c = cone(d, &gens);
        prop_assume!(c.is_strongly_convex());
        let rays = c.extremal_rays().unwrap();
        for i in 0..rays.len() {
            let rest: Vec<RatVector> = rays.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
            let smaller = PolyCone::from_generators(d, &rest, &[]).unwrap();
            prop_assert!(c.contains_cone(&smaller).unwrap());
            prop_assert!(!smaller.contains(&rays[i]).unwrap());
        }
    }

    #[test]
    fn duality_exchanges_intersection_and_sum((d, a, b) in cone_pair()) {
        let (ca, cb) = (cone(d, &a), cone(d, &b));
        prop_assume!(ca.is_strongly_convex() && cb.is_strongly_convex());
        prop_assume!(ca.dimension() == d && cb.dimension() == d);
        let lhs = ca.intersection(&cb).unwrap().dual();
        let rhs = ca.dual().sum(&cb.dual()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn containment_agrees_with_lp((d, gens) in cone_gens(), x in int_vector(5, -4, 4)) {
        let x = RatVector::new(x.entries()[..d].to_vec());
        let c = cone(d, &gens);
        prop_assert_eq!(c.contains(&x).unwrap(), lp_member(&gens, &x));
    }
}

fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<RatVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| RatVector::from_i64s(&(0..n).map(|_| rng.gen_range(-20..=20)).collect::<Vec<_>>()))
        .filter(|v| !v.is_zero())
        .collect()
}

fn walls_meet_two_cones(f: &Fan) -> bool {
    f.cones_of_dim(f.rank() - 1)
        .unwrap()
        .iter()
        .all(|w| f.maximal_cones_containing(w).count() == 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_subdivision_is_a_complete_fan(i in builtin_index(), v in int_vector(3, -3, 3), seed in any::<u64>()) {
        let (_, f) = nth_builtin(i);
        let n = f.rank();
        let v = RatVector::new(v.entries()[..n].to_vec());
        prop_assume!(!v.is_zero());
        let p = primitive_vector(&v).unwrap().to_ints().unwrap();
        prop_assume!(f.ray_index(&p).is_none());
        let g = star_subdivision(&f, &v).unwrap();
        prop_assert!(validate_fan(&g).is_valid());
        prop_assert_eq!(g.num_rays(), f.num_rays() + 1);
        prop_assert!(walls_meet_two_cones(&g));
        for x in sample_directions(n, 20, seed) {
            prop_assert_eq!(f.locate(&x).is_some(), g.locate(&x).is_some());
        }
    }

    #[test]
    fn quotient_fans_are_complete_and_compatible(i in builtin_index(), pick in any::<prop::sample::Index>()) {
        let (_, f) = nth_builtin(i);
        let cones: Vec<Cone> = f.all_cones().into_iter().filter(|c| c.dim() < f.rank()).collect();
        let tau = pick.get(&cones).clone();
        let q = quotient_fan(&f, &tau).unwrap();
        prop_assert_eq!(q.quotient_rank, f.rank() - tau.dim());
        for r in &q.ray_map {
            let image = q.projection.mul_vec(f.ray(r.original));
            let expected: Vec<Int> = r.primitive_image.iter().map(|x| x * &r.multiplier).collect();
            prop_assert_eq!(image, expected);
            prop_assert_eq!(q.fan.ray(r.image), &r.primitive_image[..]);
        }
        let kernel = integer_kernel_basis(&q.projection);
        let tau_rays: Vec<RatVector> = tau.indices().iter().map(|&i| f.ray_vector(i)).collect();
        let both: Vec<RatVector> = kernel.iter().chain(&tau_rays).cloned().collect();
        prop_assert_eq!(kernel.len(), tau.dim());
        prop_assert_eq!(rank(&both), tau.dim());
        if q.quotient_rank > 0 {
            prop_assert!(validate_fan(&q.fan).is_valid());
        }
    }
}

#[test]
fn walls_of_builtin_fans_meet_two_maximal_cones() {
    for (name, f) in builtins() {
        assert!(walls_meet_two_cones(&f), "{name}");
    }
}

fn curve_class(spaces: &ClassSpaces, t: &[i64]) -> RatVector {
    spaces
        .curve_basis()
        .iter()
        .zip(t)
        .fold(RatVector::zeros(spaces.num_rays()), |acc, (b, &x)| {
            acc.add_scaled(&Rat::from_integer(x.into()), b)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn principal_divisors_pair_to_zero(
        i in builtin_index(),
        d in proptest::collection::vec(-3i64..=3, 8),
        t in proptest::collection::vec(-3i64..=3, 5),
        row in any::<prop::sample::Index>(),
        s in -3i64..=3,
    ) {
        let (_, f) = nth_builtin(i);
        let spaces = ClassSpaces::new(&f).unwrap();
        let r = f.num_rays();
        let d = DivisorClass::from_i64s(&d[..r]);
        let c = CycleClass::new(&f, curve_class(&spaces, &t)).unwrap();
        let rel = spaces.divisor_relations();
        let shift = RatVector::from_ints(rel.row(row.index(rel.rows())));
        let shifted = DivisorClass::new(d.coefficients().add_scaled(&Rat::from_integer(s.into()), &shift));
        prop_assert_eq!(pair(&d, &c).unwrap(), pair(&shifted, &c).unwrap());
        prop_assert!(spaces.same_class(&d, &shifted).unwrap());
    }

    #[test]
    fn stable_base_locus_matches_sections(i in builtin_index(), d in proptest::collection::vec(-3i64..=3, 8)) {
        let (_, f) = nth_builtin(i);
        let d = DivisorClass::from_i64s(&d[..f.num_rays()]);
        let stable = stable_base_locus(&ClassSpaces::new(&f).unwrap(), &d).unwrap();
        for m in [1, 2, 3] {
            let finite = base_locus_finite(&f, &d, m).unwrap();
            prop_assert!(stable.member_cones.iter().all(|c| finite.contains(c)));
        }
        prop_assert_eq!(base_locus_finite(&f, &d, 12).unwrap().member_cones, stable.member_cones);
    }
}

#[test]
fn amp_dual_is_the_dual_of_amp() {
    for (name, f) in builtins() {
        let s = ClassSpaces::new(&f).unwrap();
        for k in 0..f.rank() {
            let amp = s.amp_cone(k).unwrap();
            let dual = s.curve_cone_coords(&s.amp_dual_cone(k).unwrap()).unwrap();
            assert_eq!(amp.dual(), dual, "{name}, k = {k}");
        }
    }
}

#[test]
fn cones_shrink_along_the_filtration() {
    for (name, f) in builtins() {
        let s = ClassSpaces::new(&f).unwrap();
        let n = f.rank();
        for k in 0..n - 1 {
            assert!(
                s.amp_cone(k)
                    .unwrap()
                    .contains_cone(&s.amp_cone(k + 1).unwrap())
                    .unwrap(),
                "{name} Amp^{k}"
            );
        }
        for k in 1..n {
            assert!(
                mov_cone(&f, k)
                    .unwrap()
                    .contains_cone(&mov_cone(&f, k + 1).unwrap())
                    .unwrap(),
                "{name} Mov_{k}"
            );
        }
        for k in 1..=n {
            let amp_dual = s.amp_dual_cone(n - k).unwrap();
            assert!(
                amp_dual.contains_cone(&mov_cone(&f, k).unwrap()).unwrap(),
                "{name} Mov_{k}"
            );
        }
    }
}

#[test]
fn top_ample_cone_is_cut_out_by_wall_curves() {
    for (name, f) in builtins() {
        let s = ClassSpaces::new(&f).unwrap();
        // independent of Γ_τ: D is nef iff it pairs nonnegatively with each V(ω)
        let walls: Vec<RatVector> = wall_curves(&f)
            .unwrap()
            .into_iter()
            .map(|(_, a)| s.curve_coords(&a).unwrap())
            .collect();
        let nef = PolyCone::from_inequalities(s.picard_rank(), &walls, &[]).unwrap();
        assert_eq!(s.amp_cone(f.rank() - 1).unwrap(), nef, "{name}");
        for (w, a) in wall_curves(&f).unwrap() {
            assert!(CycleClass::new(&f, a).is_ok(), "{name}: V({w}) is a curve class");
        }
    }
}

fn witness_levels(w: &toricloci::construct::CurveWitness, f: &mut impl FnMut(&toricloci::construct::CurveWitness)) {
    f(w);
    if let WitnessBody::OnSubvariety { inner, .. } = &w.body {
        witness_levels(inner, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witnesses_recompute_their_class(
        i in builtin_index(),
        pick in any::<prop::sample::Index>(),
        t in proptest::collection::vec(-3i64..=3, 12),
    ) {
        let (_, f) = nth_builtin(i);
        let cones: Vec<Cone> = f.all_cones().into_iter().filter(|c| c.dim() < f.rank()).collect();
        let tau = pick.get(&cones).clone();
        let m = moving_cone_for(&f, &tau).unwrap();
        let a = m
            .generators()
            .iter()
            .zip(&t)
            .fold(RatVector::zeros(f.num_rays()), |acc, (g, &x)| acc.add_scaled(&Rat::from_integer(x.abs().into()), g));
        let lin = m.lineality_basis().iter().zip(t.iter().rev());
        let a = lin.fold(a, |acc, (g, &x)| acc.add_scaled(&Rat::from_integer(x.into()), g));
        let w = construct_curve_witness(&f, &tau, &a).unwrap();
        prop_assert!(w.verify());
        let mut ok = true;
        witness_levels(&w, &mut |level| {
            ok &= level.recompute_class().unwrap() == level.target;
            if let WitnessBody::SweepAll { exponents, markers } = &level.body {
                let used: Vec<&Int> = markers.iter().flatten().collect();
                let mut distinct = used.clone();
                distinct.sort();
                distinct.dedup();
                ok &= distinct.len() == used.len();
                ok &= exponents.iter().zip(markers).all(|(e, m)| m.is_some() == e.is_positive());
                let scaled = level.target.scale(&Rat::from_integer(level.scale.clone()));
                ok &= scaled == RatVector::from_ints(exponents);
            }
        });
        prop_assert!(ok);
    }
}

#[test]
fn witnesses_exist_for_moving_classes() {
    // every generator of M_τ is realized, and the witness reproduces it
    for (name, f) in builtins() {
        for tau in f.all_cones() {
            if tau.dim() == f.rank() {
                continue;
            }
            let m = moving_cone_for(&f, &tau).unwrap();
            for g in m.generators() {
                let w = construct_curve_witness(&f, &tau, g).unwrap_or_else(|e| panic!("{name} {tau}: {e}"));
                assert!(w.verify(), "{name} {tau}");
                assert_eq!(&w.recompute_class().unwrap(), g);
            }
        }
    }
}

fn modification_inputs() -> Vec<(&'static str, Cone, Vec<usize>)> {
    let mut out = Vec::new();
    for (name, f) in builtins() {
        let n = f.rank();
        for t in 0..f.num_rays() {
            let tau = Cone::ray(t);
            let rest: Vec<usize> = (0..f.num_rays()).filter(|&i| i != t).collect();
            for others in Cone::new(rest).subsets(n) {
                out.push((name, tau.clone(), others.indices().to_vec()));
            }
        }
    }
    out
}

fn check_modification(m: &SmallModification) -> Result<(), TestCaseError> {
    let c = m.check();
    prop_assert!(c.is_valid(), "{c:?}");
    prop_assert!(validate_fan(&m.target).is_valid());
    prop_assert_eq!(m.target.rays(), m.source.rays());
    prop_assert!(m.target.has_cone(&m.tau));
    let adj = m.target.adjacent_rays(&m.tau).unwrap();
    prop_assert!(m.rays.iter().all(|i| adj.contains(i)));
    prop_assert!(m.certificate.verify(&m.target));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn small_modifications_are_sound(pick in any::<prop::sample::Index>()) {
        let inputs = modification_inputs();
        let (name, tau, others) = pick.get(&inputs);
        let f = builtin(name).unwrap();
        let Ok(m) = construct_small_modification(&f, tau, others) else {
            return Ok(());
        };
        check_modification(&m)?;
        let text = serde_json::to_string(&m).unwrap();
        let back: SmallModification = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.check(), m.check());
        prop_assert_eq!(back.verify(), m.verify());
    }
}

#[test]
fn the_example_flop_is_sound() {
    let f = builtin("paper-example").unwrap();
    let m = construct_small_modification(&f, &Cone::ray(6), &[0, 1, 2]).unwrap();
    check_modification(&m).unwrap();
}

fn extremal_rays(name: &str, ell: usize) -> Vec<RatVector> {
    let f = builtin(name).unwrap();
    ClassSpaces::new(&f)
        .unwrap()
        .amp_dual_cone(ell)
        .unwrap()
        .extremal_rays()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decompositions_round_trip(i in builtin_index(), level in any::<prop::sample::Index>(), pick in any::<prop::sample::Index>()) {
        let (name, f) = nth_builtin(i);
        let ell = level.index(f.rank());
        let rays = extremal_rays(name, ell);
        let c = pick.get(&rays);
        let d = decompose_extremal_ray(&f, ell, c).unwrap();
        prop_assert!(d.verify(&f));
        prop_assert_eq!(&d.witness.recompute_class().unwrap(), c);
        prop_assert!(d.swept_dimension + ell >= f.rank());
    }
}

#[test]
fn every_extremal_ray_decomposes() {
    for (name, f) in builtins() {
        for ell in 0..f.rank() {
            for c in extremal_rays(name, ell) {
                let d = decompose_extremal_ray(&f, ell, &c).unwrap_or_else(|e| panic!("{name} ℓ={ell} {c}: {e}"));
                assert!(d.verify(&f), "{name} ℓ={ell} {c}");
            }
        }
    }
}

fn report(name: &'static str, k: usize) -> TheoremReport {
    static CACHE: OnceLock<Mutex<HashMap<(&'static str, usize), TheoremReport>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&(name, k)) {
        return r.clone();
    }
    let r = verify_theorem(&builtin(name).unwrap(), k).unwrap();
    cache.lock().unwrap().insert((name, k), r.clone());
    r
}

#[test]
fn theorem_holds_on_every_builtin() {
    for (name, f) in builtins() {
        for k in 1..=f.rank() {
            let r = report(name, k);
            assert!(r.verified(), "{name}, k = {k}: {:?}", r.problems);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn base_locus_test_agrees_with_movable_curves(
        i in builtin_index(),
        k in 1usize..=3,
        d in proptest::collection::vec(-3i64..=3, 8),
    ) {
        let (name, f) = nth_builtin(i);
        let k = k.min(f.rank());
        let d = DivisorClass::from_i64s(&d[..f.num_rays()]);
        let sum = report(name, k).movable_sum().unwrap();
        let pairs_nonnegatively = sum.generators().iter().all(|g| !d.coefficients().dot(g).is_negative())
            && sum.lineality_basis().iter().all(|g| d.coefficients().dot(g).is_zero());
        let test = stable_base_locus_dim_test(&f, &d, k).unwrap();
        prop_assert_eq!(test.holds, pairs_nonnegatively);
        prop_assert_eq!(test.holds, test.witness.is_none());
        if let Some(w) = &test.witness {
            prop_assert!(w.pairing.is_negative());
            prop_assert!(w.decomposition.swept_dimension >= k);
            prop_assert!(w.decomposition.verify(&f));
        }
    }

    #[test]
    fn documents_round_trip(i in builtin_index()) {
        let (name, f) = nth_builtin(i);
        let text = serialize_fan(&f, Some(name)).unwrap();
        let parsed = parse_fan(&text, true).unwrap();
        prop_assert_eq!(parsed.fan, f);
        prop_assert_eq!(parsed.name.as_deref(), Some(name));
        prop_assert!(parsed.warnings.is_empty());
    }
}
