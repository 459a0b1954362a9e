mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hk_core::classes::probes::EppaWitness;
use hk_core::dot::to_dot;
use hk_core::dynamics::{
    automorphisms_with_limit, direction_count_check, fine_orientations, is_fine, is_refinement, orientation_orbits_with_limit,
    reachability_ball, refine_to_fine,
};
use hk_core::predimension::{closure_reduct, roots, ReductVariant};
use hk_core::{
    attach_gadgets, build_generic, build_t0, build_t1, check_sparsity, class_membership, d_closure, delta,
    enumerate_orientations, enumerate_strong_copies, free_amalgam_shared, is_strong, iterated_free_amalgam, orient,
    reduct_consistency, successor_closure, successor_d_closure, verify_extension_property, ArcConstraint, ClassKind,
    GenericApproximation, ProbeOutcome, RootedGadget, Structure, StrongKind, VertexId, VertexSet,
};
use serde::Serialize;
use serde_json::{json, Value};

use input::{parse_arcs, parse_ids, parse_set};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Resource(String),
}

impl From<hk_core::Error> for Failure {
    fn from(e: hk_core::Error) -> Self {
        match e {
            hk_core::Error::Domain(m) => Failure::Usage(m),
            hk_core::Error::Resource(m) => Failure::Resource(m),
        }
    }
}

#[derive(Parser)]
#[command(name = "hk", version, about = "Sparse graphs, orientations and their amalgamation classes")]
struct Cli {
    /// Worker threads for the parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    S,
    D,
}

impl From<KindArg> for StrongKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::S => StrongKind::S,
            KindArg::D => StrongKind::D,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosureArg {
    Scl,
    Sdcl,
    Dcl,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Circle,
    Bullet,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetArg {
    T0,
    T1,
}

#[derive(Args)]
struct InputArg {
    /// Structure in canonical JSON; `-` reads standard input.
    #[arg(long, short, default_value = "-")]
    input: PathBuf,
}

#[derive(Args)]
struct ClassArgs {
    /// C0_s, CF_d, D0_s, DF_d, E0_fine or EF_dfine (or c0, cf, d0, df, e0, ef).
    #[arg(long)]
    class: String,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Preset name (girth5, example321), inline JSON or a JSON file.
    #[arg(long)]
    growth: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide k-sparsity, with an orientation or a violating set.
    CheckSparse {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        k: u32,
    },
    /// Find a k-orientation under constraints.
    Orient {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        k: u32,
        /// Edges leaving this set must point into it.
        #[arg(long, value_parser = parse_set)]
        inward: Option<VertexSet>,
        /// Arcs to force, as `u>v,...`.
        #[arg(long, value_parser = parse_arcs)]
        force: Option<input::Arcs>,
    },
    /// List every k-orientation.
    Enumerate {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Predimension of a vertex set.
    Delta {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_set)]
        set: VertexSet,
    },
    /// Successor, successor-d or d-closure of a vertex set
    Closure {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum)]
        kind: ClosureArg,
        #[arg(long, value_parser = parse_set)]
        set: VertexSet,
        /// Needed for dcl on a graph.
        #[arg(long)]
        k: Option<u32>,
        /// Check the input against this growth function first (dcl only).
        #[arg(long)]
        growth: Option<String>,
    },
    /// Decide whether a set is strong.
    Strong {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_parser = parse_set)]
        set: VertexSet,
        /// Needed for graph input.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Closure data of an orientation, with its roots.
    Reduct {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Circle)]
        variant: VariantArg,
    },
    /// Class membership with a violator.
    Member {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Free amalgam of two structures over their shared vertices.
    Amalgamate {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_parser = parse_set)]
        shared: VertexSet,
        #[arg(long)]
        class: Option<String>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        growth: Option<String>,
    },
    /// Strong embeddings of one structure into another.
    Copies {
        #[arg(long)]
        small: PathBuf,
        #[arg(long)]
        large: PathBuf,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Bounded search for an amalgam of two extensions of a base.
    WapProbe {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        bound: usize,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Bounded search for an extension realising every strong partial automorphism.
    EppaProbe {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        bound: usize,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Build the tree gadgets, attach them, or glue copies of a structure
    Gadget {
        #[command(subcommand)]
        which: GadgetCommand,
    },
    /// Grow a strong chain realising small strong extensions.
    BuildGeneric {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a build log for missing strong extensions.
    VerifyEp {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        bound: usize,
    },
    /// Automorphism group of a graph.
    Aut {
        #[command(flatten)]
        input: InputArg,
    },
    /// Orbits of the automorphism group on k-orientations.
    Orbits {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        k: u32,
    },
    /// Orientations with no proper refinement.
    Fine {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Refine an orientation to a fine one, or compare it with another.
    Refine {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Decide whether this orientation refines the input instead.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Vertices reachable within a number of arcs.
    Ball {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        center: u32,
        #[arg(long)]
        radius: u32,
    },
    /// How often a vertex points at given neighbours over all k-orientations.
    DirectionCheck {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        center: u32,
        /// Defaults to every neighbour of the centre.
        #[arg(long, value_parser = parse_ids)]
        neighbors: Option<input::Ids>,
    },
}

#[derive(Subcommand)]
enum GadgetCommand {
    T0 {
        #[arg(long)]
        n: u32,
    },
    T1 {
        #[arg(long)]
        m: u32,
    },
    /// Glue gadget copies onto a 2-orientation.
    Attach {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum)]
        gadget: GadgetArg,
        /// Height for t0, m for t1.
        #[arg(long)]
        size: u32,
    },
    /// Copies of a structure glued over a set.
    Iterate {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_parser = parse_set)]
        over: VertexSet,
        #[arg(long)]
        copies: usize,
    },
}

/// What a command produced: a JSON result, whether the decision was
/// positive, and a structure to draw for `--format dot`.
struct Output {
    result: Value,
    positive: bool,
    drawing: Option<Structure>,
}

fn out(result: impl Serialize, positive: bool, drawing: Option<Structure>) -> Result<Output, Failure> {
    let result = serde_json::to_value(result).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(Output { result, positive, drawing })
}

fn max_vertices() -> Result<usize, Failure> {
    match std::env::var("HK_MAX_VERTICES") {
        Ok(v) => v.parse().map_err(|_| Failure::Usage(format!("HK_MAX_VERTICES={v:?} is not a number"))),
        Err(_) => Ok(12),
    }
}

fn cap(n: usize) -> Result<(), Failure> {
    let limit = max_vertices()?;
    if n > limit {
        Err(Failure::Resource(format!("{n} vertices exceeds HK_MAX_VERTICES={limit}")))
    } else {
        Ok(())
    }
}

fn need_k(k: Option<u32>, what: &str) -> Result<u32, Failure> {
    k.ok_or_else(|| Failure::Usage(format!("{what} on a graph needs --k")))
}

fn gadget(kind: GadgetArg, size: u32) -> Result<RootedGadget, Failure> {
    Ok(match kind {
        GadgetArg::T0 => build_t0(size)?,
        GadgetArg::T1 => build_t1(size)?,
    })
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::CheckSparse { input, k } => {
            let g = input::read_graph(&input.input)?;
            let v = check_sparsity(&g, k)?;
            let draw = v.witness_orientation.clone().map(Structure::Oriented).unwrap_or(Structure::Graph(g));
            out(&v, v.sparse, Some(draw))
        }
        Command::Orient { input, k, inward, force } => {
            let g = input::read_graph(&input.input)?;
            let c = ArcConstraint { forced_arcs: force.map(|f| f.0).unwrap_or_default().into_iter().collect(), inward_set: inward };
            let o = orient(&g, k, &c)?;
            let feasible = o.is_some();
            out(json!({ "feasible": feasible, "orientation": o }), feasible, o.map(Structure::Oriented))
        }
        Command::Enumerate { input, k, cap: limit } => {
            let g = input::read_graph(&input.input)?;
            cap(g.vertex_count())?;
            out(enumerate_orientations(&g, k, limit)?, true, None)
        }
        Command::Delta { input, k, set } => {
            let g = input::read_structure(&input.input)?.graph();
            out(delta(&g, &set, k)?, true, None)
        }
        Command::Closure { input, kind, set, k, growth } => {
            let s = input::read_structure(&input.input)?;
            let r = match kind {
                ClosureArg::Scl => successor_closure(orientation_of(&s, "scl")?, &set)?,
                ClosureArg::Sdcl => successor_d_closure(orientation_of(&s, "sdcl")?, &set)?,
                ClosureArg::Dcl => {
                    let k = match &s {
                        Structure::Oriented(o) => o.k(),
                        Structure::Graph(_) => need_k(k, "dcl")?,
                    };
                    let g = s.graph();
                    if let Some(f) = growth {
                        let spec = hk_core::ClassSpec::new(ClassKind::CFD, k, Some(input::growth(&f)?))?;
                        let m = class_membership(&Structure::Graph(g.clone()), &spec)?;
                        if !m.member {
                            return Err(Failure::Usage(format!("input is not in the class, violator {:?}", m.violator)));
                        }
                    }
                    d_closure(&g, &set, k)?
                }
            };
            out(r, true, None)
        }
        Command::Strong { input, kind, set, k } => match input::read_structure(&input.input)? {
            Structure::Graph(g) => {
                let v = is_strong(&g, &set, kind.into(), need_k(k, "strong")?)?;
                out(&v, v.strong, None)
            }
            Structure::Oriented(o) => {
                let strong = hk_core::predimension::is_strong_in_orientation(&o, &set, kind.into())?;
                out(json!({ "strong": strong }), strong, None)
            }
        },
        Command::Reduct { input, variant } => {
            let o = input::read_orientation(&input.input)?;
            let v = match variant {
                VariantArg::Circle => ReductVariant::Circle,
                VariantArg::Bullet => ReductVariant::Bullet,
            };
            out(json!({ "roots": roots(&o), "reduct": closure_reduct(&o, v) }), true, None)
        }
        Command::Member { input, class } => {
            let s = input::read_structure(&input.input)?;
            let spec = input::class_spec(&class.class, class.k, class.growth.as_deref())?;
            let v = class_membership(&s, &spec)?;
            out(&v, v.member, None)
        }
        Command::Amalgamate { left, right, shared, class, k, growth } => {
            let b1 = input::read_structure(&left)?;
            let b2 = input::read_structure(&right)?;
            let spec = class.map(|c| input::class_spec(&c, k, growth.as_deref())).transpose()?;
            let r = free_amalgam_shared(&b1, &b2, &shared, spec.as_ref())?;
            let draw = r.amalgam.clone();
            out(&r, r.in_class, Some(draw))
        }
        Command::Copies { small, large, class } => {
            let a = input::read_structure(&small)?;
            let b = input::read_structure(&large)?;
            cap(a.vertex_count())?;
            let spec = input::class_spec(&class.class, class.k, class.growth.as_deref())?;
            let copies = enumerate_strong_copies(&a, &b, &spec)?;
            let found = !copies.is_empty();
            out(json!({ "count": copies.len(), "embeddings": copies }), found, None)
        }
        Command::WapProbe { base, left, right, bound, class } => {
            let a = input::read_structure(&base)?;
            let c1 = input::read_structure(&left)?;
            let c2 = input::read_structure(&right)?;
            let spec = input::class_spec(&class.class, class.k, class.growth.as_deref())?;
            let r = hk_core::classes::wap_probe(&spec, &a, &c1, &c2, bound)?;
            let draw = r.found().map(|w| w.amalgam.clone());
            out(&r, !r.is_exhausted(), draw)
        }
        Command::EppaProbe { input, bound, class } => {
            let a = input::read_structure(&input.input)?;
            cap(a.vertex_count())?;
            let spec = input::class_spec(&class.class, class.k, class.growth.as_deref())?;
            let r: ProbeOutcome<EppaWitness> = hk_core::classes::eppa_probe(&spec, &a, bound)?;
            let draw = r.found().map(|w| w.extension.clone());
            out(&r, !r.is_exhausted(), draw)
        }
        Command::Gadget { which } => match which {
            GadgetCommand::T0 { n } => {
                let t = build_t0(n)?;
                let draw = Structure::Oriented(t.away_orientation());
                out(&t, true, Some(draw))
            }
            GadgetCommand::T1 { m } => {
                let t = build_t1(m)?;
                let draw = Structure::Oriented(t.away_orientation());
                out(&t, true, Some(draw))
            }
            GadgetCommand::Attach { input, gadget: kind, size } => {
                let b = input::read_orientation(&input.input)?;
                let e = attach_gadgets(&b, &gadget(kind, size)?)?;
                let draw = Structure::Oriented(e.away.clone());
                out(&e, true, Some(draw))
            }
            GadgetCommand::Iterate { input, over, copies } => {
                let x = input::read_structure(&input.input)?;
                let r = iterated_free_amalgam(&x, &over, copies)?;
                let draw = r.amalgam.clone();
                out(&r, true, Some(draw))
            }
        },
        Command::BuildGeneric { class, size, bound, seed } => {
            let spec = input::class_spec(&class.class, class.k, class.growth.as_deref())?;
            let g = build_generic(&spec, size, bound, seed)?;
            let draw = g.last_stage().clone();
            out(&g, true, Some(draw))
        }
        Command::VerifyEp { input, bound } => {
            // accepts the bare log or the envelope printed by build-generic
            let mut doc: Value = input::read_json(&input.input)?;
            if let Some(inner) = doc.get_mut("result") {
                doc = inner.take();
            }
            let g: GenericApproximation = serde_json::from_value(doc).map_err(|e| Failure::Usage(format!("build log: {e}")))?;
            if bound > g.obligation_bound {
                eprintln!("note: bound {bound} exceeds the build bound {}, open obligations are expected", g.obligation_bound);
            }
            let r = verify_extension_property(&g, bound)?;
            let reducts = match g.spec.kind {
                ClassKind::D0S | ClassKind::DFD => Some(reduct_consistency(&g)?),
                _ => None,
            };
            let ok = r.open_in_completed == 0 && reducts.as_ref().is_none_or(|x| x.consistent);
            out(json!({ "extension": r, "reducts": reducts }), ok, None)
        }
        Command::Aut { input } => {
            let g = input::read_graph(&input.input)?;
            out(automorphisms_with_limit(&g, max_vertices()?)?, true, None)
        }
        Command::Orbits { input, k } => {
            let g = input::read_graph(&input.input)?;
            out(orientation_orbits_with_limit(&g, k, max_vertices()?)?, true, None)
        }
        Command::Fine { input, k, kind } => {
            let g = input::read_graph(&input.input)?;
            cap(g.vertex_count())?;
            let f = fine_orientations(&g, k, kind.into())?;
            out(json!({ "count": f.len(), "orientations": f }), true, None)
        }
        Command::Refine { input, kind, against } => {
            let o = input::read_orientation(&input.input)?;
            cap(o.vertex_count())?;
            match against {
                Some(path) => {
                    let b = input::read_orientation(&path)?;
                    let v = is_refinement(&o, &b, kind.into())?;
                    out(&v, v.is_refinement, None)
                }
                None => {
                    let fine = is_fine(&o, kind.into())?;
                    let r = refine_to_fine(&o, kind.into())?;
                    let draw = Structure::Oriented(r.clone());
                    out(json!({ "input_is_fine": fine, "fine": r }), true, Some(draw))
                }
            }
        }
        Command::Ball { input, center, radius } => {
            let o = input::read_orientation(&input.input)?;
            let r = reachability_ball(&o, VertexId(center), radius)?;
            out(&r, r.within_bound, None)
        }
        Command::DirectionCheck { input, k, center, neighbors } => {
            let g = input::read_graph(&input.input)?;
            cap(g.vertex_count())?;
            let a = VertexId(center);
            let nb = match neighbors {
                Some(n) => n.0,
                None => g.neighbors(a).collect(),
            };
            let r = direction_count_check(&g, k, a, &nb)?;
            out(&r, r.within_bound, None)
        }
    }
}

fn orientation_of<'a>(s: &'a Structure, what: &str) -> Result<&'a hk_core::Orientation, Failure> {
    s.as_orientation().ok_or_else(|| Failure::Usage(format!("{what} needs an orientation")))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckSparse { .. } => "check-sparse",
        Command::Orient { .. } => "orient",
        Command::Enumerate { .. } => "enumerate",
        Command::Delta { .. } => "delta",
        Command::Closure { .. } => "closure",
        Command::Strong { .. } => "strong",
        Command::Reduct { .. } => "reduct",
        Command::Member { .. } => "member",
        Command::Amalgamate { .. } => "amalgamate",
        Command::Copies { .. } => "copies",
        Command::WapProbe { .. } => "wap-probe",
        Command::EppaProbe { .. } => "eppa-probe",
        Command::Gadget { which } => match which {
            GadgetCommand::T0 { .. } => "gadget t0",
            GadgetCommand::T1 { .. } => "gadget t1",
            GadgetCommand::Attach { .. } => "gadget attach",
            GadgetCommand::Iterate { .. } => "gadget iterate",
        },
        Command::BuildGeneric { .. } => "build-generic",
        Command::VerifyEp { .. } => "verify-ep",
        Command::Aut { .. } => "aut",
        Command::Orbits { .. } => "orbits",
        Command::Fine { .. } => "fine",
        Command::Refine { .. } => "refine",
        Command::Ball { .. } => "ball",
        Command::DirectionCheck { .. } => "direction-check",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let name = command_name(&cli.command);
    match run(cli.command) {
        Ok(o) => {
            match cli.format {
                Format::Json => {
                    let doc = json!({ "schema_version": SCHEMA_VERSION, "command": name, "result": o.result });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("JSON values serialise"));
                }
                Format::Dot => match o.drawing {
                    Some(s) => print!("{}", to_dot(&s)),
                    None => {
                        eprintln!("error: {name} has no DOT output");
                        return ExitCode::from(2);
                    }
                },
            }
            ExitCode::from(if o.positive { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("resource limit: {m}");
            ExitCode::from(3)
        }
    }
}
