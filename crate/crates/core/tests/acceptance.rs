//! Acceptance criteria 1-10, each run at its stated limit. Prints one line
//! per criterion and exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricloci::classes::{base_locus_finite, mov_cone, stable_base_locus, ClassSpaces, DivisorClass};
use toricloci::construct::{construct_small_modification, CurveWitness, SmallModification, WitnessBody};
use toricloci::document::{builtin, builtins};
use toricloci::fan::{validate_fan, Cone, Fan};
use toricloci::polyhedra::PolyCone;
use toricloci::ratlinalg::{rank, rat, Int, RatVector};
use toricloci::theorem::{decompose_extremal_ray, verify_theorem};

fn c_class() -> RatVector {
    RatVector::from_i64s(&[1, 1, 1, 0, 0, 0, -3, 0])
}

fn fixture() -> Fan {
    builtin("paper-example").expect("builtin")
}

#[derive(Default)]
struct Produced {
    witnesses: Vec<CurveWitness>,
    modifications: Vec<SmallModification>,
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let f = fixture();
    let s = ClassSpaces::new(&f).map_err(err)?;
    ensure(s.picard_rank() == 5, "picard rank is not 5")?;
    let chosen = [0, 1, 2, 6, 7];
    let rows: Vec<RatVector> = chosen.iter().map(|&i| s.prime_coords(i)).collect();
    ensure(rank(&rows) == 5, "[D1],[D2],[D3],[D7],[D8] are dependent")?;
    let t = ClassSpaces::with_basis(&f, &chosen).map_err(err)?;
    for (j, &i) in chosen.iter().enumerate() {
        ensure(
            t.prime_coords(i) == RatVector::unit(5, j),
            "coordinates in the chosen basis are not unit vectors",
        )?;
    }
    Ok("picard rank 5, the 5×5 matrix of [D1],[D2],[D3],[D7],[D8] is invertible".into())
}

fn criterion_2() -> Outcome {
    let f = fixture();
    let s = ClassSpaces::new(&f).map_err(err)?;
    let rays = s.amp_dual_cone(1).map_err(err)?.extremal_rays().map_err(err)?;
    ensure(rays.contains(&c_class()), "c is not an extremal ray of Amp^1(X)^∨")?;
    let gamma = s.gamma_cone(&Cone::ray(6)).map_err(err)?;
    let normal = s.curve_coords(&c_class()).map_err(err)?.primitive().map_err(err)?;
    ensure(
        gamma.inequalities().contains(&normal),
        "c is not a facet normal of Γ_ρ7",
    )?;
    let on_face: Vec<usize> = (0..8)
        .filter(|&j| j != 6 && s.prime_coords(j).dot(&normal).is_zero())
        .collect();
    ensure(
        on_face == vec![3, 4, 5, 7],
        "face of Γ_ρ7 is not spanned by [D4],[D5],[D6],[D8]",
    )?;
    ensure(
        (0..8)
            .filter(|&j| j != 6)
            .all(|j| s.prime_coords(j).dot(&normal) >= rat(0)),
        "normal is not inward",
    )?;
    Ok(format!(
        "{} extremal rays, c among them; face of Γ_ρ7 = [D4],[D5],[D6],[D8]",
        rays.len()
    ))
}

fn criterion_3() -> Outcome {
    let f = fixture();
    let s = ClassSpaces::new(&f).map_err(err)?;
    let in_mov = mov_cone(&f, 2).map_err(err)?.contains(&c_class()).map_err(err)?;
    let in_amp = s.amp_dual_cone(1).map_err(err)?.contains(&c_class()).map_err(err)?;
    ensure(!in_mov, "c lies in Mov_2(X)")?;
    ensure(in_amp, "c is not in Amp^1(X)^∨")?;
    Ok("c ∉ Mov_2(X), c ∈ Amp^1(X)^∨".into())
}

/// Whether some integer matrix with entries in [-2, 2] and determinant ±1
/// maps `rays` onto `target`.
fn unimodularly_equivalent(rays: &[Vec<Int>], target: &[[i64; 2]]) -> bool {
    if rays.len() != target.len() {
        return false;
    }
    let mut want: Vec<[i64; 2]> = target.to_vec();
    want.sort();
    let rays: Vec<[i64; 2]> = rays
        .iter()
        .map(|r| [i64::try_from(&r[0]).unwrap(), i64::try_from(&r[1]).unwrap()])
        .collect();
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            for c in -2..=2i64 {
                for d in -2..=2i64 {
                    if (a * d - b * c).abs() != 1 {
                        continue;
                    }
                    let mut img: Vec<[i64; 2]> = rays
                        .iter()
                        .map(|r| [a * r[0] + b * r[1], c * r[0] + d * r[1]])
                        .collect();
                    img.sort();
                    if img == want {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn criterion_4(out: &mut Produced) -> Outcome {
    let f = fixture();
    let d = decompose_extremal_ray(&f, 1, &c_class()).map_err(err)?;
    ensure(d.tau == Cone::ray(6), "τ is not <v7>")?;
    let m = d.modification.clone().ok_or("no small modification")?;
    let adj = m.target.adjacent_rays(&Cone::ray(6)).map_err(err)?;
    ensure(
        [0, 1, 2].iter().all(|i| adj.contains(i)),
        "ρ1, ρ2, ρ3 are not adjacent to ρ7",
    )?;
    let WitnessBody::OnSubvariety { quotient, .. } = &d.witness.body else {
        return Err("witness does not live on V(ρ7)".into());
    };
    let blow_up = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]];
    ensure(
        unimodularly_equivalent(quotient.fan.rays(), &blow_up),
        "quotient fan at ρ7 is not the fan of Bℓ₃P²",
    )?;
    ensure(m.certificate.verify(&m.target), "projectivity certificate fails")?;
    ensure(
        d.witness.recompute_class().map_err(err)? == c_class(),
        "witness class is not c",
    )?;
    ensure(d.swept_dimension == 2, "swept dimension is not 2")?;
    ensure(d.verify(&f), "decomposition does not verify")?;
    let quotient_rays = quotient.fan.num_rays();
    out.witnesses.push(d.witness.clone());
    out.modifications.push(m);
    Ok(format!(
        "τ = <v7>, V(ρ7) has {quotient_rays} rays (Bℓ₃P²), swept dimension 2"
    ))
}

fn criterion_5(out: &mut Produced) -> Outcome {
    let mut cases: Vec<(String, Fan, Vec<usize>)> = Vec::new();
    for (name, f) in builtins() {
        let ks = (1..=f.rank()).collect();
        cases.push((name.into(), f, ks));
    }
    let mut checked = Vec::new();
    for (name, f, ks) in cases {
        for k in ks {
            let rep = verify_theorem(&f, k).map_err(err)?;
            ensure(rep.verified(), &format!("{name}, k = {k}: not verified"))?;
            for r in &rep.rays {
                if let Ok(d) = &r.decomposition {
                    out.witnesses.push(d.witness.clone());
                    if let Some(m) = &d.modification {
                        out.modifications.push(m.clone());
                    }
                }
            }
            if name == "paper-example" && k == 2 && rep.needing_modification().next().is_none() {
                return Err("fixture, k = 2: no ray needed a modification".into());
            }
            checked.push(format!("{name}/{k}"));
        }
    }
    Ok(format!("verified for {}", checked.join(" ")))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut total = 0;
    for (name, f) in builtins() {
        let s = ClassSpaces::new(&f).map_err(err)?;
        for _ in 0..100 {
            let d: Vec<i64> = (0..f.num_rays()).map(|_| rng.gen_range(-3..=3)).collect();
            let d = DivisorClass::from_i64s(&d);
            let a = stable_base_locus(&s, &d).map_err(err)?;
            let b = base_locus_finite(&f, &d, 12).map_err(err)?;
            ensure(
                a.member_cones == b.member_cones,
                &format!(
                    "{name}, D = {}: {:?} vs {:?}",
                    d.coefficients(),
                    a.member_cones,
                    b.member_cones
                ),
            )?;
            total += 1;
        }
    }
    Ok(format!("{total} divisors agree"))
}

fn criterion_7() -> Outcome {
    for (name, f) in builtins() {
        let s = ClassSpaces::new(&f).map_err(err)?;
        let amp = s.amp_cone(f.rank() - 1).map_err(err)?;
        ensure(
            amp == s.wall_nef_cone().map_err(err)?,
            &format!("{name}: Amp^(n-1) differs from the nef cone"),
        )?;
    }
    Ok("Amp^(n-1) = nef cone on all builtins".into())
}

fn random_cone(rng: &mut ChaCha8Rng, dim: usize) -> PolyCone {
    let count = rng.gen_range(1..=8);
    let gens: Vec<RatVector> = (0..count)
        .map(|_| RatVector::from_i64s(&(0..dim).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>()))
        .collect();
    PolyCone::from_generators(dim, &gens, &[]).expect("generators have the ambient dimension")
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 200;
    for t in 0..trials {
        let dim = rng.gen_range(1..=5);
        let a = random_cone(&mut rng, dim);
        let b = random_cone(&mut rng, dim);
        ensure(a.dual().dual() == a, &format!("trial {t}: biduality fails"))?;
        if a.is_strongly_convex() {
            let rays = a.extremal_rays().map_err(err)?;
            for (i, r) in rays.iter().enumerate() {
                let others: Vec<RatVector> = rays
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                let rest = PolyCone::from_generators(dim, &others, &[]).map_err(err)?;
                ensure(
                    !rest.contains(r).map_err(err)?,
                    &format!("trial {t}: extremal ray {r} is redundant"),
                )?;
            }
        }
        let meet = a.intersection(&b).map_err(err)?;
        let join = a.sum(&b).map_err(err)?;
        ensure(
            meet.dual() == a.dual().sum(&b.dual()).map_err(err)?,
            &format!("trial {t}: (A∩B)^∨ ≠ A^∨+B^∨"),
        )?;
        ensure(
            join.dual() == a.dual().intersection(&b.dual()).map_err(err)?,
            &format!("trial {t}: (A+B)^∨ ≠ A^∨∩B^∨"),
        )?;
    }
    Ok(format!("{trials} random cone pairs"))
}

fn recompute_everywhere(w: &CurveWitness) -> Result<(), String> {
    let got = w.recompute_class().map_err(err)?;
    ensure(
        got == w.target,
        &format!("witness for {} recomputes to {got}", w.target),
    )?;
    if let WitnessBody::OnSubvariety { inner, .. } = &w.body {
        recompute_everywhere(inner)?;
    }
    Ok(())
}

fn criterion_9(out: &Produced) -> Outcome {
    ensure(!out.witnesses.is_empty(), "no witnesses were produced")?;
    for w in &out.witnesses {
        recompute_everywhere(w)?;
        ensure(w.verify(), &format!("witness for {} fails verification", w.target))?;
    }
    Ok(format!("{} witnesses recompute exactly", out.witnesses.len()))
}

fn criterion_10(out: &Produced) -> Outcome {
    let f = fixture();
    let mut all = out.modifications.clone();
    for others in [[0, 1, 2], [3, 4, 5]] {
        all.push(construct_small_modification(&f, &Cone::ray(6), &others).map_err(err)?);
    }
    for m in &all {
        let check = m.check();
        ensure(check.is_valid(), &format!("modification at {}: {check:?}", m.tau))?;
        ensure(validate_fan(&m.target).is_valid(), "target fan is invalid")?;
        ensure(m.certificate.verify(&m.target), "certificate fails")?;
        let mut a = m.source.rays().to_vec();
        let mut b = m.target.rays().to_vec();
        a.sort();
        b.sort();
        ensure(a == b, "ray sets differ")?;
    }
    let nontrivial = all.iter().filter(|m| !m.is_trivial()).count();
    ensure(nontrivial > 0, "no nontrivial modification was produced")?;
    Ok(format!("{} modifications ({nontrivial} nontrivial) verify", all.len()))
}

fn main() {
    let mut produced = Produced::default();
    let mut failures = 0;
    let mut report = |n: usize, limit: Option<u64>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(secs) {
                outcome = Err(format!("took {elapsed:.2?}, limit {secs} s"));
            }
        }
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS ({msg}; {elapsed:.2?})"),
            Err(msg) => {
                failures += 1;
                println!("criterion {n}: FAIL ({msg}; {elapsed:.2?})");
            }
        }
    };
    report(1, Some(1), &mut criterion_1);
    report(2, Some(5), &mut criterion_2);
    report(3, Some(5), &mut criterion_3);
    report(4, Some(10), &mut || criterion_4(&mut produced));
    report(5, Some(60), &mut || criterion_5(&mut produced));
    report(6, Some(120), &mut criterion_6);
    report(7, Some(5), &mut criterion_7);
    report(8, Some(60), &mut criterion_8);
    report(9, None, &mut || criterion_9(&produced));
    report(10, None, &mut || criterion_10(&produced));
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
