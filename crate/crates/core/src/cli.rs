//! Command-line front end. [`run`] returns the exit code and the report so
//! it can be tested without a process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classes::{
    base_locus_finite, divisor_polytope, mov_cone, section_points, stable_base_locus, ClassSpaces, DivisorClass,
    StableBaseLocus,
};
use crate::construct::{
    check_curve_conditions, construct_curve_witness, construct_small_modification, nearest_small_modification,
    ConstructionLog, CurveWitness, SmallModification, WitnessBody,
};
use crate::document::{builtin_description, builtin_document, parse_document, ParsedFan, BUILTIN_NAMES};
use crate::error::{Error, Result};
use crate::fan::{validate_fan, Cone, Fan};
use crate::polyhedra::PolyCone;
use crate::ratlinalg::{parse_rat, Rat, RatVector};
use crate::theorem::{
    decompose_extremal_ray, stable_base_locus_dim_test, verify_theorem, Decomposition, MAX_FLIPS, MAX_FLIP_FANS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "toricloci",
    version,
    about = "Stable base loci, movable curves and small modifications of toric varieties"
)]
struct Cli {
    /// Builtin fan name or path to a fan JSON file
    #[arg(long, global = true)]
    fan: Option<String>,
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Reject non-primitive rays instead of normalizing them
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the fan axioms
    Validate,
    /// Picard rank, the chosen basis of N¹ and the relations
    Classes {
        /// Ray indices whose divisor classes form the basis of N¹
        #[arg(long)]
        basis: Option<String>,
    },
    /// Amp^k in N¹ coordinates
    Amp {
        #[arg(long)]
        k: usize,
    },
    /// Extremal rays of Amp^k(X)^∨
    Ampdual {
        #[arg(long)]
        k: usize,
    },
    /// Generators of Mov_k(X)
    Mov {
        #[arg(long)]
        k: usize,
    },
    /// Stable base locus of a divisor
    Sbl {
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        /// Also decide whether the locus has dimension less than k
        #[arg(long)]
        k: Option<usize>,
        /// Cross-check against the base loci of |mD| for m up to this bound
        #[arg(long)]
        check: Option<usize>,
    },
    /// The polytope P_D and its lattice points
    Polytope {
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// A curve with the given class moving in a family sweeping out V(τ)
    Witness {
        /// Ray indices of τ (empty for the zero cone)
        #[arg(long, default_value = "")]
        tau: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// A projective small modification making the given rays adjacent to τ
    Smallmod {
        #[arg(long)]
        tau: String,
        /// The ray set S; indices of τ may be included and are skipped
        #[arg(long)]
        rays: String,
        #[arg(long, value_enum, default_value_t = Method::Polytope)]
        method: Method,
    },
    /// Realize an extremal ray of Amp^ℓ(X)^∨ as a moving curve
    Decompose {
        #[arg(long)]
        ell: usize,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Check Amp^{n-k}(X)^∨ = Σ Mov_k(X, X†)
    Theorem {
        #[arg(long)]
        k: usize,
    },
    /// List the builtin fans
    Examples,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Face fan of a polytope, then star subdivisions
    Polytope,
    /// Fewest wall flips from the fan
    Flips,
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: String, json: Value) -> Report {
        Report { code, text, json }
    }
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let json = cli.json;
    match execute(cli) {
        Ok(r) if json => (r.code, serde_json::to_string_pretty(&r.json).expect("json") + "\n"),
        Ok(r) => (r.code, r.text),
        Err(e) if json => (
            EXIT_INPUT,
            serde_json::to_string_pretty(&json!({ "error": e.to_string() })).expect("json") + "\n",
        ),
        Err(e) => (EXIT_INPUT, format!("error: {e}\n")),
    }
}

fn execute(cli: Cli) -> Result<Report> {
    if let Command::Examples = cli.command {
        return Ok(examples());
    }
    let source = cli
        .fan
        .as_deref()
        .ok_or_else(|| Error::Parse("--fan <builtin|path> is required".into()))?;
    let doc = match builtin_document(source) {
        Some(d) => d,
        None => {
            let text = std::fs::read_to_string(source)
                .map_err(|e| Error::Parse(format!("{source}: {e} (builtins: {})", BUILTIN_NAMES.join(", "))))?;
            parse_document(&text).map_err(|e| Error::Parse(format!("{source}: {e}")))?
        }
    };
    if let Command::Validate = cli.command {
        return Ok(validate(doc.into_unvalidated(cli.strict)?));
    }
    let parsed = doc.into_fan(cli.strict)?;
    let mut report = match &cli.command {
        Command::Validate | Command::Examples => unreachable!(),
        Command::Classes { basis } => classes(&parsed.fan, basis.as_deref())?,
        Command::Amp { k } => amp(&parsed.fan, *k)?,
        Command::Ampdual { k } => ampdual(&parsed.fan, *k)?,
        Command::Mov { k } => mov(&parsed.fan, *k)?,
        Command::Sbl { divisor, k, check } => sbl(&parsed.fan, divisor, *k, *check)?,
        Command::Polytope { divisor } => polytope(&parsed.fan, divisor)?,
        Command::Witness { tau, class } => witness(&parsed.fan, tau, class)?,
        Command::Smallmod { tau, rays, method } => smallmod(&parsed.fan, tau, rays, *method)?,
        Command::Decompose { ell, class } => decompose(&parsed.fan, *ell, class)?,
        Command::Theorem { k } => theorem(&parsed.fan, *k)?,
    };
    if !parsed.warnings.is_empty() {
        let mut text = String::new();
        for w in &parsed.warnings {
            writeln!(text, "warning: {w}").unwrap();
        }
        report.text = text + &report.text;
        if let Value::Object(map) = &mut report.json {
            map.insert("warnings".into(), json!(parsed.warnings));
        }
    }
    Ok(report)
}

fn rat_json(x: &Rat) -> Value {
    Value::String(x.to_string())
}

fn vec_json(v: &RatVector) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

fn vecs_json(vs: &[RatVector]) -> Value {
    Value::Array(vs.iter().map(vec_json).collect())
}

fn cone_json(c: &Cone) -> Value {
    json!(c.indices())
}

/// `<0,3> (1-based <1,4>)`
fn cone_text(c: &Cone) -> String {
    format!("{c} (1-based {})", c.one_based())
}

fn parse_vector(s: &str, len: usize, what: &str) -> Result<RatVector> {
    let entries = s.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
    if entries.len() != len {
        return Err(Error::Parse(format!(
            "{what}: expected {len} comma-separated entries, found {}",
            entries.len()
        )));
    }
    Ok(RatVector::new(entries))
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("not a ray index: {t:?}")))
        })
        .collect()
}

fn lines(out: &mut String, label: &str, vs: &[RatVector]) {
    writeln!(out, "{label} ({}):", vs.len()).unwrap();
    for v in vs {
        writeln!(out, "  {v}").unwrap();
    }
}

fn examples() -> Report {
    let mut text = String::new();
    let mut list = Vec::new();
    for name in BUILTIN_NAMES {
        let desc = builtin_description(name).unwrap_or_default();
        writeln!(text, "{name:<14} {desc}").unwrap();
        list.push(json!({ "name": name, "description": desc }));
    }
    Report::new(EXIT_OK, text, json!({ "builtins": list }))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(parsed: ParsedFan) -> Report {
    let f = &parsed.fan;
    let rep = validate_fan(f);
    let mut text = String::new();
    for w in &parsed.warnings {
        writeln!(text, "warning: {w}").unwrap();
    }
    writeln!(
        text,
        "fan: {} (rank {}, {} rays, {} maximal cones)",
        parsed.name.as_deref().unwrap_or("unnamed"),
        f.rank(),
        f.num_rays(),
        f.max_cones().len()
    )
    .unwrap();
    writeln!(text, "rays primitive: {}", yes(rep.rays_primitive)).unwrap();
    writeln!(text, "simplicial: {}", yes(rep.simplicial)).unwrap();
    writeln!(text, "compatible: {}", yes(rep.compatible)).unwrap();
    writeln!(text, "complete: {}", yes(rep.complete)).unwrap();
    for p in &rep.problems {
        writeln!(text, "problem: {p}").unwrap();
    }
    writeln!(text, "{}", if rep.is_valid() { "valid" } else { "invalid" }).unwrap();
    let json = json!({
        "name": parsed.name,
        "rank": f.rank(),
        "num_rays": f.num_rays(),
        "num_max_cones": f.max_cones().len(),
        "rays_primitive": rep.rays_primitive,
        "simplicial": rep.simplicial,
        "compatible": rep.compatible,
        "complete": rep.complete,
        "offending_cones": rep.offending_cones,
        "problems": rep.problems,
        "valid": rep.is_valid(),
        "warnings": parsed.warnings,
    });
    Report::new(if rep.is_valid() { EXIT_OK } else { EXIT_FALSE }, text, json)
}

fn classes(f: &Fan, basis: Option<&str>) -> Result<Report> {
    let s = match basis {
        Some(b) => ClassSpaces::with_basis(f, &parse_indices(b)?)?,
        None => ClassSpaces::new(f)?,
    };
    let one_based = |v: &[usize]| v.iter().map(|i| format!("D{}", i + 1)).collect::<Vec<_>>().join(", ");
    let mut text = String::new();
    writeln!(text, "picard rank: {}", s.picard_rank()).unwrap();
    writeln!(text, "basis of N¹: {:?} ({})", s.basis(), one_based(s.basis())).unwrap();
    writeln!(
        text,
        "spanning complement: {:?} ({})",
        s.complement(),
        one_based(s.complement())
    )
    .unwrap();
    let rel = s.divisor_relations().row_vectors();
    lines(&mut text, "relations Σ <m, v_i> D_i = 0 for m = e_j", &rel);
    lines(&mut text, "basis of N₁ (integral kernel)", s.curve_basis());
    let prime: Vec<RatVector> = (0..f.num_rays()).map(|i| s.prime_coords(i)).collect();
    writeln!(text, "coordinates of [D_i]:").unwrap();
    for (i, p) in prime.iter().enumerate() {
        writeln!(text, "  D{}: {p}", i + 1).unwrap();
    }
    let json = json!({
        "picard_rank": s.picard_rank(),
        "basis": s.basis(),
        "complement": s.complement(),
        "relations": vecs_json(&rel),
        "curve_basis": vecs_json(s.curve_basis()),
        "prime_coordinates": vecs_json(&prime),
    });
    Ok(Report::new(EXIT_OK, text, json))
}

fn cone_report(c: &PolyCone, text: &mut String) -> Value {
    lines(text, "generators", c.generators());
    if !c.lineality_basis().is_empty() {
        lines(text, "lineality", c.lineality_basis());
    }
    lines(text, "inequalities", c.inequalities());
    if !c.equations().is_empty() {
        lines(text, "equations", c.equations());
    }
    json!({
        "dimension": c.dimension(),
        "generators": vecs_json(c.generators()),
        "lineality": vecs_json(c.lineality_basis()),
        "inequalities": vecs_json(c.inequalities()),
        "equations": vecs_json(c.equations()),
    })
}

fn amp(f: &Fan, k: usize) -> Result<Report> {
    let s = ClassSpaces::new(f)?;
    let c = s.amp_cone(k)?;
    let mut text = String::new();
    writeln!(
        text,
        "Amp^{k} in N¹ coordinates, basis {:?}; dimension {}",
        s.basis(),
        c.dimension()
    )
    .unwrap();
    let mut json = cone_report(&c, &mut text);
    json["k"] = json!(k);
    json["basis"] = json!(s.basis());
    Ok(Report::new(EXIT_OK, text, json))
}

fn ampdual(f: &Fan, k: usize) -> Result<Report> {
    let c = ClassSpaces::new(f)?.amp_dual_cone(k)?;
    let mut text = String::new();
    writeln!(
        text,
        "Amp^{k}(X)^∨ in curve coordinates (D_1·C, …, D_r·C); dimension {}",
        c.dimension()
    )
    .unwrap();
    let mut json = cone_report(&c, &mut text);
    json["k"] = json!(k);
    Ok(Report::new(EXIT_OK, text, json))
}

fn mov(f: &Fan, k: usize) -> Result<Report> {
    let c = mov_cone(f, k)?;
    let mut text = String::new();
    writeln!(text, "Mov_{k}(X) in curve coordinates; dimension {}", c.dimension()).unwrap();
    let mut json = cone_report(&c, &mut text);
    json["k"] = json!(k);
    Ok(Report::new(EXIT_OK, text, json))
}

fn locus_text(b: &StableBaseLocus, text: &mut String) -> Value {
    if b.is_empty() {
        writeln!(text, "stable base locus: empty").unwrap();
    } else {
        writeln!(text, "stable base locus: union of V(τ) for").unwrap();
        for c in &b.member_cones {
            writeln!(text, "  {}", cone_text(c)).unwrap();
        }
    }
    match b.dimension {
        Some(d) => writeln!(text, "dimension: {d}").unwrap(),
        None => writeln!(text, "dimension: -inf").unwrap(),
    }
    json!({
        "member_cones": b.member_cones.iter().map(cone_json).collect::<Vec<_>>(),
        "dimension": b.dimension,
    })
}

fn sbl(f: &Fan, divisor: &str, k: Option<usize>, check: Option<usize>) -> Result<Report> {
    let d = DivisorClass::new(parse_vector(divisor, f.num_rays(), "--divisor")?);
    let mut text = format!("D = {}\n", d.coefficients());
    let mut code = EXIT_OK;
    let locus = stable_base_locus(&ClassSpaces::new(f)?, &d)?;
    let mut json = json!({ "divisor": vec_json(d.coefficients()), "locus": locus_text(&locus, &mut text) });
    if let Some(m) = check {
        let finite = base_locus_finite(f, &d, m)?;
        let agree = finite == locus;
        writeln!(text, "base locus of |mD|, m ≤ {m}, agrees: {}", yes(agree)).unwrap();
        json["finite_check"] = json!({ "m_max": m, "agrees": agree });
        if !agree {
            code = EXIT_FALSE;
        }
    }
    if let Some(k) = k {
        let t = stable_base_locus_dim_test(f, &d, k)?;
        writeln!(text, "dim B(D) < {k}: {}", yes(t.holds)).unwrap();
        let mut jt = json!({ "k": k, "holds": t.holds });
        if let Some(w) = &t.witness {
            writeln!(
                text,
                "curve {} sweeps out V({}) (dimension {}) with D·C = {}",
                w.decomposition.class, w.decomposition.tau, w.decomposition.swept_dimension, w.pairing
            )
            .unwrap();
            jt["witness"] = json!({
                "class": vec_json(&w.decomposition.class),
                "tau": cone_json(&w.decomposition.tau),
                "swept_dimension": w.decomposition.swept_dimension,
                "pairing": rat_json(&w.pairing),
            });
        }
        json["dimension_test"] = jt;
        if !t.holds {
            code = EXIT_FALSE;
        }
    }
    Ok(Report::new(code, text, json))
}

fn polytope(f: &Fan, divisor: &str) -> Result<Report> {
    let d = DivisorClass::new(parse_vector(divisor, f.num_rays(), "--divisor")?);
    let p = divisor_polytope(f, &d)?;
    let mut text = String::new();
    writeln!(text, "P_D = {{u : <u, v_i> ≥ -d_i}}").unwrap();
    match p.dim() {
        None => writeln!(text, "empty").unwrap(),
        Some(k) => writeln!(text, "dimension: {k}").unwrap(),
    }
    lines(&mut text, "vertices", p.vertices());
    let mut json = json!({ "dimension": p.dim(), "vertices": vecs_json(p.vertices()) });
    if d.is_integral() {
        let pts = section_points(f, &d)?;
        writeln!(text, "lattice points ({}):", pts.len()).unwrap();
        for u in &pts {
            writeln!(text, "  {}", RatVector::from_ints(u)).unwrap();
        }
        json["lattice_points"] = Value::Array(pts.iter().map(|u| vec_json(&RatVector::from_ints(u))).collect());
    }
    Ok(Report::new(EXIT_OK, text, json))
}

fn witness_text(w: &CurveWitness, depth: usize, text: &mut String) -> Value {
    let pad = "  ".repeat(depth);
    writeln!(
        text,
        "{pad}rank {} fan, τ = {}, class {}, scale {}, sweeps dimension {}",
        w.fan.rank(),
        w.tau,
        w.target,
        w.scale,
        w.swept_dimension()
    )
    .unwrap();
    let body = match &w.body {
        WitnessBody::SweepAll { exponents, markers } => {
            let m: Vec<String> = markers
                .iter()
                .map(|x| x.as_ref().map_or("-".into(), |x| x.to_string()))
                .collect();
            let e: Vec<String> = exponents.iter().map(|x| x.to_string()).collect();
            writeln!(
                text,
                "{pad}φ(z) = Π φ_i(z - λ_i)^a_i with a = ({}) and λ = ({})",
                e.join(","),
                m.join(",")
            )
            .unwrap();
            json!({
                "kind": "sweep_all",
                "exponents": exponents.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "markers": markers.iter().map(|x| x.as_ref().map(|x| x.to_string())).collect::<Vec<_>>(),
            })
        }
        WitnessBody::OnSubvariety { quotient, inner } => {
            let m: Vec<String> = quotient
                .ray_map
                .iter()
                .map(|q| format!("ρ{}↦{} (m={})", q.original + 1, q.image, q.multiplier))
                .collect();
            writeln!(text, "{pad}on V(τ), quotient rays {}", m.join(", ")).unwrap();
            json!({
                "kind": "on_subvariety",
                "quotient_rays": quotient.fan.rays().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "ray_map": quotient.ray_map.iter().map(|q| json!({"original": q.original, "image": q.image, "multiplier": q.multiplier.to_string()})).collect::<Vec<_>>(),
                "inner": witness_text(inner, depth + 1, text),
            })
        }
    };
    json!({
        "tau": cone_json(&w.tau),
        "target": vec_json(&w.target),
        "scale": w.scale.to_string(),
        "swept_dimension": w.swept_dimension(),
        "body": body,
    })
}

fn witness(f: &Fan, tau: &str, class: &str) -> Result<Report> {
    let tau = Cone::new(parse_indices(tau)?);
    let a = parse_vector(class, f.num_rays(), "--class")?;
    let mut text = String::new();
    if let Some(v) = check_curve_conditions(f, &tau, &a)? {
        writeln!(text, "conditions fail: {v}").unwrap();
        let json = json!({ "conditions_hold": false, "condition": v.condition(), "index": v.index(), "message": v.to_string() });
        return Ok(Report::new(EXIT_FALSE, text, json));
    }
    let w = construct_curve_witness(f, &tau, &a)?;
    let body = witness_text(&w, 0, &mut text);
    let ok = w.verify();
    writeln!(text, "recomputed class matches: {}", yes(ok)).unwrap();
    let json = json!({ "conditions_hold": true, "witness": body, "verified": ok });
    Ok(Report::new(if ok { EXIT_OK } else { EXIT_FALSE }, text, json))
}

fn modification_text(m: &SmallModification, text: &mut String) -> Value {
    let log = match &m.log {
        ConstructionLog::Polytope(l) => {
            writeln!(
                text,
                "polytope construction: step {}, p = {}, q = {}",
                l.attempt, l.p, l.q
            )
            .unwrap();
            for (j, e) in &l.epsilons {
                writeln!(text, "  ε for ρ{} = {e}", j + 1).unwrap();
            }
            let sub: Vec<String> = l.subdivisions.iter().map(|j| format!("ρ{}", j + 1)).collect();
            writeln!(
                text,
                "  star subdivisions at: {}",
                if sub.is_empty() { "none".into() } else { sub.join(", ") }
            )
            .unwrap();
            json!({
                "method": "polytope",
                "attempt": l.attempt,
                "p": l.p.to_string(),
                "q": l.q.to_string(),
                "epsilons": l.epsilons.iter().map(|(j, e)| json!([j, rat_json(e)])).collect::<Vec<_>>(),
                "face_fan_cones": l.face_fan_cones.iter().map(cone_json).collect::<Vec<_>>(),
                "subdivisions": l.subdivisions,
            })
        }
        ConstructionLog::Flips(l) => {
            let w: Vec<String> = l.walls.iter().map(cone_text).collect();
            writeln!(
                text,
                "wall flips ({}): {}",
                w.len(),
                if w.is_empty() { "none".into() } else { w.join(", ") }
            )
            .unwrap();
            json!({ "method": "flips", "walls": l.walls.iter().map(cone_json).collect::<Vec<_>>() })
        }
    };
    writeln!(text, "maximal cones of Δ†:").unwrap();
    for c in m.target.max_cones() {
        writeln!(text, "  {}", cone_text(c)).unwrap();
    }
    let check = m.check();
    let adj = m.target.adjacent_rays(&m.tau).unwrap_or_default();
    writeln!(text, "rays adjacent to τ in Δ†: {adj:?}").unwrap();
    writeln!(text, "projectivity certificate margin: {}", m.certificate.margin).unwrap();
    writeln!(text, "verified: {}", yes(check.is_valid())).unwrap();
    json!({
        "tau": cone_json(&m.tau),
        "rays": m.rays,
        "log": log,
        "max_cones": m.target.max_cones().iter().map(cone_json).collect::<Vec<_>>(),
        "adjacent_to_tau": adj,
        "trivial": m.is_trivial(),
        "certificate": {
            "divisor": vec_json(&m.certificate.divisor),
            "margin": rat_json(&m.certificate.margin),
        },
        "checks": check,
        "verified": check.is_valid(),
    })
}

fn smallmod(f: &Fan, tau: &str, rays: &str, method: Method) -> Result<Report> {
    let tau = Cone::new(parse_indices(tau)?);
    let others: Vec<usize> = parse_indices(rays)?.into_iter().filter(|&i| !tau.contains(i)).collect();
    let result = match method {
        Method::Polytope => construct_small_modification(f, &tau, &others),
        Method::Flips => nearest_small_modification(f, &tau, &others, MAX_FLIPS, MAX_FLIP_FANS).and_then(|m| {
            m.ok_or_else(|| Error::ParameterSearchExhausted(format!("no projective fan within {MAX_FLIPS} flips")))
        }),
    };
    let mut text = String::new();
    match result {
        Ok(m) => {
            let json = modification_text(&m, &mut text);
            let code = if m.verify() { EXIT_OK } else { EXIT_FALSE };
            Ok(Report::new(code, text, json))
        }
        Err(e @ (Error::Hypothesis(_) | Error::ParameterSearchExhausted(_))) => {
            writeln!(text, "no small modification: {e}").unwrap();
            Ok(Report::new(EXIT_FALSE, text, json!({ "error": e.to_string() })))
        }
        Err(e) => Err(e),
    }
}

fn decomposition_text(d: &Decomposition, text: &mut String) -> Value {
    writeln!(text, "class {} at level ℓ = {}", d.class, d.level).unwrap();
    writeln!(text, "σ = {}, τ = {}", cone_text(&d.sigma), cone_text(&d.tau)).unwrap();
    let modification = match &d.modification {
        None => {
            writeln!(text, "no modification needed").unwrap();
            Value::Null
        }
        Some(m) => modification_text(m, text),
    };
    writeln!(
        text,
        "witness sweeps out a {}-dimensional subvariety",
        d.swept_dimension
    )
    .unwrap();
    let w = witness_text(&d.witness, 1, text);
    json!({
        "class": vec_json(&d.class),
        "level": d.level,
        "sigma": cone_json(&d.sigma),
        "tau": cone_json(&d.tau),
        "swept_dimension": d.swept_dimension,
        "modification": modification,
        "witness": w,
    })
}

fn decompose(f: &Fan, ell: usize, class: &str) -> Result<Report> {
    let c = parse_vector(class, f.num_rays(), "--class")?;
    let mut text = String::new();
    match decompose_extremal_ray(f, ell, &c) {
        Ok(d) => {
            let ok = d.verify(f);
            let mut json = decomposition_text(&d, &mut text);
            json["verified"] = json!(ok);
            writeln!(text, "verified: {}", yes(ok)).unwrap();
            Ok(Report::new(if ok { EXIT_OK } else { EXIT_FALSE }, text, json))
        }
        Err(e @ Error::NotExtremal(_)) => {
            writeln!(text, "{e}").unwrap();
            Ok(Report::new(EXIT_FALSE, text, json!({ "error": e.to_string() })))
        }
        Err(e) => Err(e),
    }
}

fn theorem(f: &Fan, k: usize) -> Result<Report> {
    let rep = verify_theorem(f, k)?;
    let mut text = String::new();
    writeln!(
        text,
        "Amp^{}(X)^∨ = Σ_f Mov_{k}(X, X†): {}",
        rep.level,
        if rep.verified() { "verified" } else { "not verified" }
    )
    .unwrap();
    writeln!(text, "extremal rays ({}):", rep.rays.len()).unwrap();
    let mut rays = Vec::new();
    for r in &rep.rays {
        match &r.decomposition {
            Ok(d) => {
                let how = match &d.modification {
                    None => "on X".to_string(),
                    Some(m) if m.is_trivial() => "on X (no flips needed)".to_string(),
                    Some(m) => {
                        let i = rep.fans.iter().position(|g| g == &m.target).unwrap_or(0);
                        match &m.log {
                            ConstructionLog::Flips(l) => format!(
                                "on modification #{i} ({} flips: {})",
                                l.walls.len(),
                                l.walls.iter().map(|w| w.one_based()).collect::<Vec<_>>().join(" ")
                            ),
                            ConstructionLog::Polytope(_) => format!("on modification #{i} (polytope construction)"),
                        }
                    }
                };
                writeln!(
                    text,
                    "  {}  τ = {}  sweeps dim {}  {how}  ok: {}",
                    r.ray,
                    d.tau,
                    d.swept_dimension,
                    yes(r.ok)
                )
                .unwrap();
                rays.push(json!({
                    "ray": vec_json(&r.ray),
                    "sigma": cone_json(&d.sigma),
                    "tau": cone_json(&d.tau),
                    "swept_dimension": d.swept_dimension,
                    "modification": d.modification.as_ref().filter(|m| !m.is_trivial()).map(|m| rep.fans.iter().position(|g| g == &m.target)),
                    "ok": r.ok,
                }));
            }
            Err(e) => {
                writeln!(text, "  {}  failed: {e}", r.ray).unwrap();
                rays.push(json!({ "ray": vec_json(&r.ray), "error": e, "ok": false }));
            }
        }
    }
    writeln!(text, "fans used: {} (#0 is X)", rep.fans.len()).unwrap();
    let mut fans = Vec::new();
    for (i, g) in rep.fans.iter().enumerate().skip(1) {
        let cones: Vec<String> = g.max_cones().iter().map(|c| c.one_based()).collect();
        writeln!(text, "  #{i}: {}", cones.join(" ")).unwrap();
        fans.push(json!({ "index": i, "max_cones": g.max_cones().iter().map(cone_json).collect::<Vec<_>>() }));
    }
    for c in &rep.reverse {
        if !c.violations.is_empty() {
            writeln!(
                text,
                "Mov_{k} on fan #{} has generators pairing negatively with Amp^{}:",
                c.fan, rep.level
            )
            .unwrap();
            for v in &c.violations {
                writeln!(text, "  {v}").unwrap();
            }
        }
    }
    writeln!(text, "forward inclusion: {}", yes(rep.forward_ok())).unwrap();
    writeln!(text, "reverse inclusion: {}", yes(rep.reverse_ok())).unwrap();
    writeln!(
        text,
        "sum of movable cones equals Amp^{}(X)^∨: {}",
        rep.level,
        yes(rep.sum_equals_amp_dual)
    )
    .unwrap();
    for p in &rep.problems {
        writeln!(text, "problem: {p}").unwrap();
    }
    let json = json!({
        "k": k,
        "level": rep.level,
        "verdict": if rep.verified() { "verified" } else { "not verified" },
        "rays": rays,
        "modifications": fans,
        "forward": rep.forward_ok(),
        "reverse": rep.reverse_ok(),
        "reverse_violations": rep.reverse.iter().map(|c| json!({"fan": c.fan, "violations": vecs_json(&c.violations)})).collect::<Vec<_>>(),
        "sum_equals_amp_dual": rep.sum_equals_amp_dual,
        "problems": rep.problems,
    });
    Ok(Report::new(
        if rep.verified() { EXIT_OK } else { EXIT_FALSE },
        text,
        json,
    ))
}
