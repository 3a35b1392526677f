//! Command-line front end. Every command prints one JSON document on
//! standard output; exit code 1 means bad input and 2 a failed check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::context::{etale_semilattice, is_admissible, ContextId};
use crate::finmodel::{
    hom_to_json, is_isomorphic, leq_matrix, make_zmod, model_from_json, model_to_json, Hom,
    Model, Sort,
};
use crate::relspec::{
    adjunction_census, admissible_equalizer, admissible_product, admissible_pullback,
    counit_transposes_to_identity, relative_spec, RelSpec,
};
use crate::semilattice::{pit_holds, reticulation};
use crate::space::{
    coequalizer_spaces, coproduct_spaces, equalizer_spaces, product_spaces, pullback_spaces,
    standard_probes, verify_coequalizer, verify_coproduct, verify_equalizer, verify_product,
    verify_pullback, Cone,
};
use crate::spectrum::{
    factorization_is_initial, factorize, spec, standardness_witness, unit_eta, ModelledMap,
    ModelledSpace, SpecSpace,
};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "coste", version, about = "Spectra of finite rings and distributive lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Write DOT renderings of the computed posets and lattices here.
    #[arg(long, global = true, value_name = "DIR")]
    pub dot: Option<PathBuf>,
    /// Run the exhaustive checks and exit with 2 if one fails.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Seed for sampling probe spaces.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest carrier accepted for any input model.
    #[arg(long, global = true, default_value_t = 64)]
    pub max_carrier: usize,
    /// Largest number of points accepted for enumerated spaces.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_points: usize,
    /// Number of probe spaces used for universal properties.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_probes: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectrum of a model.
    Spec(ModelArgs),
    /// Global sections of a spectrum or of a given modelled space.
    Gamma(GammaArgs),
    /// The reticulation as a quotient of the free distributive lattice.
    Reticulation(ModelArgs),
    /// Whether the points separate the étale semilattice.
    Pit(ModelArgs),
    /// Admissibility of a homomorphism.
    Admissible(HomArgs),
    /// Étale/admissible factorization of a homomorphism into a local model.
    Factorize(HomArgs),
    /// Coproduct or coequalizer of a diagram of modelled spaces.
    Colim(DiagramArgs),
    /// Product, equalizer or pullback of a diagram of modelled spaces.
    Lim(DiagramArgs),
    /// Relative spectrum of a map into a T-modelled base.
    Relspec(TriangleArgs),
    /// Hom-set census for the relative spectrum adjunction.
    AdjunctionCheck(TriangleArgs),
    /// Standardness checks on a spectrum.
    Standardness(ModelArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Ctx {
    Trivial,
    Zariski,
    Dl,
    Pierce,
    Field,
    Domain,
}

impl From<Ctx> for ContextId {
    fn from(c: Ctx) -> ContextId {
        match c {
            Ctx::Trivial => ContextId::Trivial,
            Ctx::Zariski => ContextId::Zariski,
            Ctx::Dl => ContextId::Dl,
            Ctx::Pierce => ContextId::Pierce,
            Ctx::Field => ContextId::Field,
            Ctx::Domain => ContextId::Domain,
        }
    }
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub context: Ctx,
    /// A model as JSON, or `@path` to a JSON file.
    #[arg(long)]
    pub model: String,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[arg(long, value_enum)]
    pub context: Option<Ctx>,
    #[arg(long)]
    pub model: Option<String>,
    /// A modelled space as JSON, or `@path`.
    #[arg(long, conflicts_with = "model")]
    pub space: Option<String>,
}

#[derive(Args, Debug)]
pub struct HomArgs {
    #[arg(long, value_enum)]
    pub context: Ctx,
    /// `{"source": model, "target": model, "map": [...]}`, or `@path`.
    #[arg(long)]
    pub hom: String,
}

#[derive(Args, Debug)]
pub struct DiagramArgs {
    /// Work in the admissible category of this context.
    #[arg(long, value_enum)]
    pub context: Option<Ctx>,
    /// `{"kind": …, "sort": …, "spaces": [...], "maps": [...]}`, or `@path`.
    #[arg(long)]
    pub diagram: String,
}

#[derive(Args, Debug)]
pub struct TriangleArgs {
    #[arg(long, value_enum)]
    pub context: Ctx,
    /// `{"base": space, "total": space, "map": {"points", "flat"}}`, or `@path`.
    #[arg(long)]
    pub triangle: String,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Verification(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: msg.into(),
    }
}

/// The outcome of a command: the JSON report and whether every requested
/// check passed.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

/// Parses arguments, runs the command and returns the exit code, printing
/// the report to standard output and diagnostics to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.report).expect("reports serialize");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if out.ok {
                0
            } else {
                eprintln!("verification failed");
                2
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| input(format!("malformed JSON: {e}")))
}

fn load_model(arg: &str, o: &Options) -> Result<Model, Failure> {
    let m = model_from_json(&read_json(arg)?)?;
    check_model(&m, o)?;
    Ok(m)
}

fn check_model(m: &Model, o: &Options) -> Result<(), Failure> {
    if m.size() > o.max_carrier {
        return Err(input(format!(
            "carrier of size {} exceeds --max-carrier {}",
            m.size(),
            o.max_carrier
        )));
    }
    Ok(())
}

fn check_context(ctx: ContextId, sort: Sort) -> Result<(), Failure> {
    if ctx.accepts(sort) {
        Ok(())
    } else {
        Err(input(format!("context {} does not accept {sort:?} models", ctx.name())))
    }
}

fn load_space(v: &Value, o: &Options) -> Result<ModelledSpace, Failure> {
    let x = ModelledSpace::from_json(v)?;
    for m in x.stalks() {
        check_model(m, o)?;
    }
    Ok(x)
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let o = &cli.opts;
    match &cli.command {
        Command::Spec(a) => cmd_spec(a, o),
        Command::Gamma(a) => cmd_gamma(a, o),
        Command::Reticulation(a) => cmd_reticulation(a, o),
        Command::Pit(a) => {
            let (ctx, m) = model_args(a, o)?;
            let v = etale_semilattice(ctx, &m)?;
            Ok(Outcome {
                report: json!({"pit": pit_holds(&v)}),
                ok: true,
            })
        }
        Command::Admissible(a) => {
            let (ctx, h) = hom_args(a, o)?;
            Ok(Outcome {
                report: json!({"admissible": is_admissible(ctx, &h)?}),
                ok: true,
            })
        }
        Command::Factorize(a) => cmd_factorize(a, o),
        Command::Colim(a) => cmd_colim(a, o),
        Command::Lim(a) => cmd_lim(a, o),
        Command::Relspec(a) => cmd_relspec(a, o),
        Command::AdjunctionCheck(a) => cmd_adjunction(a, o),
        Command::Standardness(a) => {
            let (ctx, m) = model_args(a, o)?;
            let s = spec(ctx, &m)?;
            let r = standardness_witness(&s);
            Ok(Outcome {
                report: json!({
                    "context": ctx.name(),
                    "standard": r.all_pass(),
                    "report": r,
                }),
                ok: true,
            })
        }
    }
}

fn model_args(a: &ModelArgs, o: &Options) -> Result<(ContextId, Model), Failure> {
    let ctx: ContextId = a.context.into();
    let m = load_model(&a.model, o)?;
    check_context(ctx, m.sort())?;
    Ok((ctx, m))
}

fn hom_args(a: &HomArgs, o: &Options) -> Result<(ContextId, Hom), Failure> {
    let ctx: ContextId = a.context.into();
    let v = read_json(&a.hom)?;
    let source = model_from_json(&v["source"])?;
    let target = model_from_json(&v["target"])?;
    check_model(&source, o)?;
    check_model(&target, o)?;
    check_context(ctx, source.sort())?;
    let h = crate::finmodel::hom_from_json(&v, &source, &target)?;
    Ok((ctx, h))
}

fn space_report(x: &ModelledSpace) -> Value {
    json!({
        "points": x.len(),
        "labels": x.labels(),
        "stalk_sizes": x.stalks().iter().map(|m| m.size()).collect::<Vec<_>>(),
        "covers": x.poset().covers(),
        "space": x.to_json(),
    })
}

fn cmd_spec(a: &ModelArgs, o: &Options) -> Result<Outcome, Failure> {
    let (ctx, m) = model_args(a, o)?;
    let s = spec(ctx, &m)?;
    let g = s.space.gamma().model;
    let mut report = json!({
        "context": ctx.name(),
        "model_size": m.size(),
        "gamma_size": g.size(),
        "gamma": model_to_json(&g),
    });
    merge(&mut report, space_report(&s.space));
    let mut ok = true;
    if o.verify {
        let sheaf = sheaf_agrees(&s)?;
        report["verify"] = json!({"sections_match_local_definition": sheaf});
        ok = sheaf;
    }
    write_dot(o, "spec", &poset_dot(&s.space))?;
    Ok(Outcome { report, ok })
}

fn sheaf_agrees(s: &SpecSpace) -> Result<bool, Failure> {
    if s.len() > crate::spectrum::UP_SET_LIMIT {
        return Err(input("too many points to enumerate opens"));
    }
    for w in s.space.poset().up_sets() {
        if s.space.sections(&w)? != s.sections_local(&w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cmd_gamma(a: &GammaArgs, o: &Options) -> Result<Outcome, Failure> {
    let (x, eta) = match (&a.space, &a.model, a.context) {
        (Some(sp), _, _) => (load_space(&read_json(sp)?, o)?, None),
        (None, Some(m), Some(c)) => {
            let ctx: ContextId = c.into();
            let m = load_model(m, o)?;
            check_context(ctx, m.sort())?;
            let s = spec(ctx, &m)?;
            let eta = unit_eta(&s);
            (s.space.clone(), Some(eta))
        }
        _ => return Err(input("gamma needs --space, or --context with --model")),
    };
    let g = x.gamma().model;
    let mut report = json!({"gamma_size": g.size(), "gamma": model_to_json(&g)});
    if let Some(eta) = eta {
        report["unit_is_iso"] = json!(eta.is_iso());
        report["unit"] = hom_to_json(&eta);
    }
    Ok(Outcome { report, ok: true })
}

fn cmd_reticulation(a: &ModelArgs, o: &Options) -> Result<Outcome, Failure> {
    let (ctx, m) = model_args(a, o)?;
    let v = etale_semilattice(ctx, &m)?;
    let r = reticulation(&v)?;
    let mut report = json!({
        "context": ctx.name(),
        "semilattice_size": v.len(),
        "free_size": r.free.lattice.size(),
        "lattice_size": r.lattice.size(),
        "lattice": model_to_json(&r.lattice),
        "classes": r.classify.map,
    });
    let mut ok = true;
    if o.verify {
        let s = spec(ctx, &m)?;
        let same = is_isomorphic(&r.lattice, &s.compact_lattice);
        report["verify"] = json!({"matches_compact_opens": same});
        ok = same;
    }
    write_dot(o, "reticulation", &lattice_dot(&r.lattice))?;
    Ok(Outcome { report, ok })
}

fn cmd_factorize(a: &HomArgs, o: &Options) -> Result<Outcome, Failure> {
    let (ctx, h) = hom_args(a, o)?;
    let (va, f) = factorize(ctx, &h)?;
    let mut report = json!({
        "middle": va.elements[f.middle].tag.to_string(),
        "middle_size": va.codomain(f.middle).size(),
        "first": hom_to_json(&f.first),
        "second": hom_to_json(&f.second),
        "second_admissible": is_admissible(ctx, &f.second)?,
    });
    let mut ok = true;
    if o.verify {
        let initial = factorization_is_initial(ctx, &h, &va, &f)?;
        report["verify"] = json!({"initial": initial});
        ok = initial;
    }
    Ok(Outcome { report, ok })
}

struct Diagram {
    kind: String,
    sort: Sort,
    spaces: Vec<ModelledSpace>,
    maps: Vec<ModelledMap>,
}

fn load_diagram(arg: &str, o: &Options) -> Result<Diagram, Failure> {
    let v = read_json(arg)?;
    let kind = v["kind"]
        .as_str()
        .ok_or_else(|| input("diagram needs a kind"))?
        .to_string();
    let spaces = v["spaces"]
        .as_array()
        .ok_or_else(|| input("diagram needs a spaces array"))?
        .iter()
        .map(|s| load_space(s, o))
        .collect::<Result<Vec<_>, _>>()?;
    let sort = match v.get("sort") {
        Some(s) => serde_json::from_value(s.clone()).map_err(|e| input(e.to_string()))?,
        None => spaces
            .first()
            .map(|x| x.sort())
            .ok_or_else(|| input("an empty diagram needs a sort"))?,
    };
    if spaces.iter().any(|x| x.sort() != sort) {
        return Err(Error::SortMismatch.into());
    }
    let mut maps = Vec::new();
    if let Some(ms) = v.get("maps") {
        for m in ms.as_array().ok_or_else(|| input("maps must be an array"))? {
            let s = m["source"].as_u64().ok_or_else(|| input("map needs a source"))? as usize;
            let t = m["target"].as_u64().ok_or_else(|| input("map needs a target"))? as usize;
            if s >= spaces.len() || t >= spaces.len() {
                return Err(input("map endpoint outside the diagram"));
            }
            maps.push(ModelledMap::from_json(m, &spaces[s], &spaces[t])?);
        }
    }
    Ok(Diagram {
        kind,
        sort,
        spaces,
        maps,
    })
}

fn parallel_pair(d: &Diagram) -> Result<(&ModelledMap, &ModelledMap), Failure> {
    match d.maps.as_slice() {
        [f, g] => Ok((f, g)),
        _ => Err(input(format!("{} needs exactly two maps", d.kind))),
    }
}

fn probes(sort: Sort, ctx: Option<ContextId>, o: &Options) -> Vec<ModelledSpace> {
    let mut ps = match ctx {
        Some(c) => standard_probes(c),
        None => {
            let (c, extra) = match sort {
                Sort::Ring => (ContextId::Zariski, ModelledSpace::point(&make_zmod(6).expect("ℤ/6"))),
                Sort::Lattice => (
                    ContextId::Dl,
                    ModelledSpace::point(&crate::finmodel::boolean_lattice(2)),
                ),
            };
            let mut v = standard_probes(c);
            v.push(extra);
            v
        }
    };
    ps.retain(|x| x.len() <= o.max_points.min(3));
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    if ps.len() > o.max_probes {
        ps.shuffle(&mut rng);
        ps.truncate(o.max_probes);
    }
    ps
}

fn require_t_modelled(ctx: ContextId, d: &Diagram) -> Result<(), Failure> {
    check_context(ctx, d.sort)?;
    for x in &d.spaces {
        if !x.is_t_modelled(ctx)? {
            return Err(input("every space of the diagram must be T-modelled"));
        }
    }
    for m in &d.maps {
        if !m.is_admissible(ctx)? {
            return Err(input("every map of the diagram must be admissible"));
        }
    }
    Ok(())
}

fn check_budget(spaces: &[&ModelledSpace], o: &Options) -> Result<(), Failure> {
    if spaces.iter().any(|x| x.len() > o.max_points) {
        return Err(input(format!("verification needs spaces with at most {} points", o.max_points)));
    }
    Ok(())
}

fn cmd_colim(a: &DiagramArgs, o: &Options) -> Result<Outcome, Failure> {
    let d = load_diagram(&a.diagram, o)?;
    let ctx: Option<ContextId> = a.context.map(Into::into);
    if let Some(c) = ctx {
        require_t_modelled(c, &d)?;
    }
    let (apex, legs, check) = match d.kind.as_str() {
        "coproduct" => {
            let c = coproduct_spaces(d.sort, &d.spaces)?;
            let check = if o.verify {
                check_budget(&[&c.apex], o)?;
                Some(verify_coproduct(&c, &d.spaces, &probes(d.sort, ctx, o), ctx)?)
            } else {
                None
            };
            (c.apex, c.legs, check)
        }
        "coequalizer" => {
            let (f, g) = parallel_pair(&d)?;
            let (z, p) = coequalizer_spaces(f, g)?;
            let check = if o.verify {
                check_budget(&[&z, &f.target], o)?;
                Some(verify_coequalizer(f, g, &z, &p, &probes(d.sort, ctx, o), ctx)?)
            } else {
                None
            };
            (z, vec![p], check)
        }
        k => return Err(input(format!("unknown colimit kind {k:?}"))),
    };
    let mut report = space_report(&apex);
    report["legs"] = json!(legs.iter().map(ModelledMap::to_json).collect::<Vec<_>>());
    let mut ok = true;
    if let Some(c) = ctx {
        let t = apex.is_t_modelled(c)?;
        let adm = legs.iter().map(|l| l.is_admissible(c)).collect::<Result<Vec<_>, _>>()?;
        let adm = adm.into_iter().all(|b| b);
        report["t_modelled"] = json!(t);
        report["legs_admissible"] = json!(adm);
        ok &= t && adm;
    }
    if let Some(u) = check {
        report["verify"] = json!({"universal": u});
        ok &= u;
    }
    write_dot(o, "colim", &poset_dot(&apex))?;
    Ok(Outcome { report, ok })
}

fn cmd_lim(a: &DiagramArgs, o: &Options) -> Result<Outcome, Failure> {
    let d = load_diagram(&a.diagram, o)?;
    let ctx: Option<ContextId> = a.context.map(Into::into);
    if let Some(c) = ctx {
        require_t_modelled(c, &d)?;
    }
    let ps = || probes(d.sort, ctx, o);
    let (apex, legs, check) = match d.kind.as_str() {
        "product" => {
            let cone: Cone = match ctx {
                Some(c) => admissible_product(c, &d.spaces)?.1,
                None => product_spaces(d.sort, &d.spaces)?,
            };
            let check = if o.verify {
                check_budget(&[&cone.apex], o)?;
                Some(verify_product(&cone, &d.spaces, &ps(), ctx)?)
            } else {
                None
            };
            (cone.apex, cone.legs, check)
        }
        "equalizer" => {
            let (f, g) = parallel_pair(&d)?;
            let (e_space, e) = match ctx {
                Some(c) => {
                    let (rs, e) = admissible_equalizer(c, f, g)?;
                    (rs.space, e)
                }
                None => equalizer_spaces(f, g)?,
            };
            let check = if o.verify {
                check_budget(&[&e_space, &f.source], o)?;
                Some(verify_equalizer(f, g, &e_space, &e, &ps(), ctx)?)
            } else {
                None
            };
            (e_space, vec![e], check)
        }
        "pullback" => {
            let (f, g) = parallel_pair(&d)?;
            let cone = match ctx {
                Some(c) => admissible_pullback(c, f, g)?.1,
                None => pullback_spaces(f, g)?,
            };
            let check = if o.verify {
                check_budget(&[&cone.apex], o)?;
                Some(verify_pullback(f, g, &cone, &ps(), ctx)?)
            } else {
                None
            };
            (cone.apex, cone.legs, check)
        }
        k => return Err(input(format!("unknown limit kind {k:?}"))),
    };
    let mut report = space_report(&apex);
    report["legs"] = json!(legs.iter().map(ModelledMap::to_json).collect::<Vec<_>>());
    let mut ok = true;
    if let Some(u) = check {
        report["verify"] = json!({"universal": u});
        ok &= u;
    }
    write_dot(o, "lim", &poset_dot(&apex))?;
    Ok(Outcome { report, ok })
}

fn load_triangle(a: &TriangleArgs, o: &Options) -> Result<(ContextId, ModelledMap), Failure> {
    let ctx: ContextId = a.context.into();
    let v = read_json(&a.triangle)?;
    let base = load_space(&v["base"], o)?;
    let total = load_space(&v["total"], o)?;
    check_context(ctx, base.sort())?;
    if !base.is_t_modelled(ctx)? {
        return Err(input("the base is not T-modelled"));
    }
    let f = ModelledMap::from_json(&v["map"], &total, &base)?;
    Ok((ctx, f))
}

fn relspec_report(rs: &RelSpec) -> Value {
    let mut report = space_report(&rs.space);
    report["counit"] = rs.counit.to_json();
    report["structure"] = rs.structure[0].to_json();
    report
}

fn cmd_relspec(a: &TriangleArgs, o: &Options) -> Result<Outcome, Failure> {
    let (ctx, f) = load_triangle(a, o)?;
    let rs = relative_spec(ctx, &f)?;
    let mut report = relspec_report(&rs);
    report["structure_admissible"] = json!(rs.structure[0].is_admissible(ctx)?);
    let mut ok = true;
    if o.verify {
        if rs.len() > crate::spectrum::UP_SET_LIMIT {
            return Err(input("too many points to enumerate opens"));
        }
        let mut sheaf = true;
        for w in rs.space.poset().up_sets() {
            sheaf &= rs.space.sections(&w)? == rs.sections_formula(&w)?;
        }
        let unit = counit_transposes_to_identity(&rs)?;
        report["verify"] = json!({"sections_match_formula": sheaf, "counit_transpose_is_identity": unit});
        ok = sheaf && unit;
    }
    write_dot(o, "relspec", &poset_dot(&rs.space))?;
    Ok(Outcome { report, ok })
}

fn cmd_adjunction(a: &TriangleArgs, o: &Options) -> Result<Outcome, Failure> {
    let (ctx, f) = load_triangle(a, o)?;
    let rs = relative_spec(ctx, &f)?;
    check_budget(&[&rs.space, &rs.total], o)?;
    let mut rows = Vec::new();
    let mut ok = counit_transposes_to_identity(&rs)?;
    for z in probes(f.source.sort(), Some(ctx), o) {
        for t in adjunction_census(&rs, &z)? {
            ok &= t.bijective;
            rows.push(t);
        }
    }
    Ok(Outcome {
        report: json!({
            "triangles": rows.len(),
            "all_bijective": ok,
            "census": rows,
        }),
        ok,
    })
}

fn merge(into: &mut Value, from: Value) {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

/// The specialization order as a digraph of covering pairs.
pub fn poset_dot(x: &ModelledSpace) -> String {
    let mut s = String::from("digraph space {\n  rankdir=BT;\n");
    for (p, label) in x.labels().iter().enumerate() {
        let _ = writeln!(s, "  {p} [label=\"{} ({})\"];", label.replace('"', "'"), x.stalk(p).size());
    }
    for (p, q) in x.poset().covers() {
        let _ = writeln!(s, "  {p} -> {q};");
    }
    s.push_str("}\n");
    s
}

/// The Hasse diagram of a lattice.
pub fn lattice_dot(l: &Model) -> String {
    let leq = leq_matrix(l);
    let n = l.size();
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
    for a in 0..n {
        let _ = writeln!(s, "  {a};");
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && leq[a][b] && !(0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b]) {
                let _ = writeln!(s, "  {a} -> {b};");
            }
        }
    }
    s.push_str("}\n");
    s
}

fn write_dot(o: &Options, name: &str, body: &str) -> Result<(), Failure> {
    if let Some(dir) = &o.dot {
        std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
        let path: PathBuf = Path::new(dir).join(format!("{name}.dot"));
        std::fs::write(&path, body).map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome, Failure> {
        let mut v = vec!["coste"];
        v.extend_from_slice(args);
        run(&Cli::try_parse_from(v).expect("arguments parse"))
    }

    #[test]
    fn spec_of_z12() {
        let out = run_args(&["spec", "--context", "zariski", "--model", r#"{"zmod":12}"#, "--verify"]).unwrap();
        assert_eq!(out.report["points"], 2);
        let mut sizes: Vec<u64> = out.report["stalk_sizes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 4]);
        assert_eq!(out.report["gamma_size"], 12);
        assert!(out.ok);
    }

    #[test]
    fn trivial_ring_and_pit() {
        let out = run_args(&["spec", "--context", "zariski", "--model", r#"{"zmod":1}"#]).unwrap();
        assert_eq!(out.report["points"], 0);
        assert_eq!(out.report["gamma_size"], 1);
        let out = run_args(&["pit", "--context", "dl", "--model", r#"{"kind":"lattice","diamond":true}"#]).unwrap();
        assert_eq!(out.report, json!({"pit": true}));
    }

    #[test]
    fn exit_codes() {
        let bad = run_args(&["spec", "--context", "zariski", "--model", "{not json"]).err().unwrap();
        assert_eq!(bad.code, 1);
        let mismatch = run_args(&["spec", "--context", "dl", "--model", r#"{"zmod":4}"#]).err().unwrap();
        assert_eq!(mismatch.code, 1);
        let big = run_args(&["spec", "--context", "zariski", "--model", r#"{"zmod":100}"#]).err().unwrap();
        assert_eq!(big.code, 1);
    }

    #[test]
    fn output_is_stable_and_round_trips() {
        let a = run_args(&["spec", "--context", "pierce", "--model", r#"{"zmod":30}"#]).unwrap();
        let b = run_args(&["spec", "--context", "pierce", "--model", r#"{"zmod":30}"#]).unwrap();
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
        let x = ModelledSpace::from_json(&a.report["space"]).unwrap();
        assert_eq!(x.to_json(), a.report["space"]);
        let g = model_from_json(&a.report["gamma"]).unwrap();
        assert_eq!(model_to_json(&g), a.report["gamma"]);
    }

    #[test]
    fn diagrams() {
        let pt = |n: usize| json!({"stalks": [{"zmod": n}]});
        let d = json!({"kind": "coproduct", "spaces": [pt(4), pt(9)]}).to_string();
        let out = run_args(&["colim", "--context", "zariski", "--diagram", &d, "--verify"]).unwrap();
        assert!(out.ok);
        assert_eq!(out.report["points"], 2);
        let two = json!({"stalks": [{"zmod": 3}, {"zmod": 3}]});
        let d = json!({
            "kind": "coequalizer",
            "spaces": [pt(3), two],
            "maps": [
                {"source": 0, "target": 1, "points": [0], "flat": [[0, 1, 2]]},
                {"source": 0, "target": 1, "points": [1], "flat": [[0, 1, 2]]}
            ]
        })
        .to_string();
        let out = run_args(&["colim", "--context", "zariski", "--diagram", &d, "--verify"]).unwrap();
        assert!(out.ok);
        assert_eq!(out.report["points"], 1);
        let d = json!({"kind": "product", "spaces": [pt(4), pt(9)]}).to_string();
        let out = run_args(&["lim", "--diagram", &d, "--verify"]).unwrap();
        assert_eq!(out.report["stalk_sizes"], json!([1]));
        assert!(out.ok);
        let out = run_args(&["lim", "--context", "zariski", "--diagram", &d, "--verify"]).unwrap();
        assert_eq!(out.report["points"], 0);
        assert!(out.ok);
    }

    #[test]
    fn triangles() {
        let t = json!({
            "base": {"stalks": [{"zmod": 4}]},
            "total": {"stalks": [{"product": [2, 2]}]},
            "map": {"points": [0], "flat": [[0, 3, 0, 3]]}
        })
        .to_string();
        let out = run_args(&["relspec", "--context", "zariski", "--triangle", &t, "--verify"]).unwrap();
        assert_eq!(out.report["points"], 2);
        assert!(out.ok);
        let out = run_args(&["adjunction-check", "--context", "zariski", "--triangle", &t]).unwrap();
        assert!(out.ok);
        assert!(out.report["triangles"].as_u64().unwrap() > 0);
    }

    #[test]
    fn homs_and_standardness() {
        let h = json!({"source": {"zmod": 12}, "target": {"zmod": 4}, "map": [0,1,2,3,0,1,2,3,0,1,2,3]}).to_string();
        let out = run_args(&["admissible", "--context", "zariski", "--hom", &h]).unwrap();
        assert_eq!(out.report, json!({"admissible": false}));
        let out = run_args(&["factorize", "--context", "zariski", "--hom", &h, "--verify"]).unwrap();
        assert!(out.ok);
        assert_eq!(out.report["middle_size"], 4);
        let out = run_args(&["standardness", "--context", "field", "--model", r#"{"zmod":12}"#]).unwrap();
        assert_eq!(out.report["standard"], false);
        let out = run_args(&["reticulation", "--context", "zariski", "--model", r#"{"zmod":12}"#, "--verify"]).unwrap();
        assert_eq!(out.report["lattice_size"], 4);
        assert!(out.ok);
    }
}
