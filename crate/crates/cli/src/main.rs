mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sgquiver::corpus::{self, EXAMPLES};
use sgquiver::covering::{
    build_zcover_with_ray_depth, default_basepoint, free_action_check, verify_galois, ConditionStatus,
    CoveringQuiver, Window,
};
use sgquiver::oracle::{self, Semisimple};
use sgquiver::quiver::{grading, is_locally_bounded_presentation, parse_quiver, Quiver};
use sgquiver::singularity::{
    default_depth, is_isomorphic, is_zero, normalize, parse_object, reduce_to_generators, sg_generators,
    sg_is_trivial, Reduction, StalkSum, Ternary,
};

use render::{Output, Tone};

#[derive(Parser)]
#[command(name = "sgquiver", version, about = "Singularity categories of radical square zero quivers")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a quiver file and summarize it.
    Check { file: PathBuf },
    /// Grading period and, when gradable, the grade of every vertex.
    Grade { file: PathBuf },
    /// Materialize a window of the minimal gradable covering.
    Cover {
        file: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        /// Print the window as Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Check the Galois covering conditions on a window.
    Galois {
        file: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Stalk-sum calculus in the singularity category.
    Sg {
        #[command(subcommand)]
        command: SgCommand,
    },
    /// Explicit linear-algebra cross-checks.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Run the bundled examples and check their expected conclusions.
    Corpus {
        /// Read the example files from this directory instead of the bundled copies.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WindowArgs {
    /// Level range LO..HI (half-open).
    #[arg(long, allow_hyphen_values = true)]
    window: Window,
    /// Base vertex lifted to level 0 (default: smallest vertex name).
    #[arg(long)]
    basepoint: Option<String>,
    /// Ray vertices kept per ray (default: window height).
    #[arg(long)]
    ray_depth: Option<u64>,
}

#[derive(Args)]
struct ObjectArgs {
    file: PathBuf,
    /// Object such as "S(3)[0] + 2*S(5)[1]"; repeatable.
    #[arg(long = "object")]
    objects: Vec<String>,
    /// Rewrite depth bound (default: 4 per vertex).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    depth: Option<u64>,
}

#[derive(Subcommand)]
enum SgCommand {
    /// Whether the object is zero.
    Zero(ObjectArgs),
    /// Drop dead terms and settle the ones feeding them.
    Normalize(ObjectArgs),
    /// Rewrite the object onto generator representatives.
    Reduce(ObjectArgs),
    /// Decide whether two objects are isomorphic.
    Iso(ObjectArgs),
    /// Terminal components and their representatives.
    Generators { file: PathBuf },
    /// Whether the singularity category vanishes.
    Trivial { file: PathBuf },
}

#[derive(Args)]
struct VertexArgs {
    file: PathBuf,
    #[arg(long)]
    vertex: String,
    /// Ray vertices kept per ray when the quiver has rays.
    #[arg(long, default_value_t = 4)]
    ray_depth: u64,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Syzygy of a simple, from the kernel of its projective cover.
    Syzygy(VertexArgs),
    /// Cosyzygy of a simple, from the cokernel of its injective envelope.
    Cosyzygy(VertexArgs),
    /// Iterated syzygies of a simple.
    Resolve {
        #[command(flatten)]
        vertex: VertexArgs,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
    },
    /// Cohomology of the complex of projectives attached to a module over the
    /// opposite covering window.
    Fcomplex {
        file: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        /// Module file with `dim V = d` and `mat ARROW = [[...]]` lines.
        #[arg(long)]
        module: PathBuf,
    },
}

enum Outcome {
    Done,
    Inconclusive,
    Failed,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Quiver> {
    let text = read(path)?;
    parse_quiver(&text).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn cover(q: &Quiver, args: &WindowArgs) -> Result<CoveringQuiver> {
    let basepoint = match &args.basepoint {
        Some(b) => b.clone(),
        None => default_basepoint(q).context("the quiver has no vertices")?.to_string(),
    };
    let depth = args.ray_depth.unwrap_or(args.window.height());
    Ok(build_zcover_with_ray_depth(q, &basepoint, args.window, depth)?)
}

fn objects(q: &Quiver, args: &ObjectArgs, expected: usize) -> Result<Vec<StalkSum>> {
    if args.objects.len() != expected {
        bail!("expected {expected} --object argument(s), got {}", args.objects.len());
    }
    args.objects
        .iter()
        .map(|o| parse_object(o, q).with_context(|| format!("in object `{o}`")))
        .collect()
}

fn terms_json(q: &Quiver, x: &StalkSum) -> Value {
    json!(x.named_terms(q))
}

fn multiset_json(q: &Quiver, m: &Semisimple) -> Value {
    let map: serde_json::Map<String, Value> = m
        .iter()
        .map(|(&v, &mult)| (q.vertex_names()[v].clone(), json!(mult)))
        .collect();
    Value::Object(map)
}

fn multiset_text(q: &Quiver, m: &Semisimple) -> String {
    if m.is_empty() {
        return "0".to_string();
    }
    m.iter()
        .map(|(&v, &mult)| {
            let name = &q.vertex_names()[v];
            if mult == 1 {
                format!("S({name})")
            } else {
                format!("{mult}*S({name})")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn check(out: &Output, path: &Path) -> Result<Outcome> {
    let q = load(path)?;
    let g = grading(&q);
    let finite = is_locally_bounded_presentation(&q.description()).locally_finite;
    out.emit(
        json!({
            "command": "check",
            "quiver": q.name(),
            "vertices": q.vertex_count(),
            "arrows": q.arrow_count(),
            "rays": q.rays().len(),
            "locally_finite": finite,
            "connected": q.is_connected(),
            "gradable": g.gradable,
            "period": g.period,
        }),
        || {
            format!(
                "quiver {}\nvertices: {}\narrows: {}\nrays: {}\nlocally finite: {}\nconnected: {}\ngradable: {}\nperiod: {}",
                q.name(),
                q.vertex_count(),
                q.arrow_count(),
                q.rays().len(),
                finite,
                q.is_connected(),
                out.paint_bool(g.gradable),
                g.period
            )
        },
    );
    Ok(Outcome::Done)
}

fn grade(out: &Output, path: &Path) -> Result<Outcome> {
    let q = load(path)?;
    let g = grading(&q);
    let grades: Option<serde_json::Map<String, Value>> = g.grade.as_ref().map(|gr| {
        q.vertex_names()
            .iter()
            .zip(gr)
            .map(|(n, &d)| (n.clone(), json!(d)))
            .collect()
    });
    out.emit(
        json!({"command": "grade", "gradable": g.gradable, "period": g.period, "grades": grades}),
        || {
            let mut s = format!("gradable: {}\nperiod: {}", out.paint_bool(g.gradable), g.period);
            if let Some(gr) = &g.grade {
                for (n, d) in q.vertex_names().iter().zip(gr) {
                    s.push_str(&format!("\n{n}: {d}"));
                }
            }
            s
        },
    );
    Ok(Outcome::Done)
}

fn cover_cmd(out: &Output, path: &Path, args: &WindowArgs, dot: bool) -> Result<Outcome> {
    let q = load(path)?;
    let c = cover(&q, args)?;
    if dot {
        print!("{}", c.to_dot());
        return Ok(Outcome::Done);
    }
    let vertices: Vec<Value> = c
        .vertices()
        .iter()
        .map(|v| json!({"name": c.vertex_label(*v), "base": q.vertex_name(v.base), "level": v.level}))
        .collect();
    let arrows: Vec<Value> = c
        .arrows()
        .iter()
        .map(|a| {
            json!({
                "name": c.arrow_label(a),
                "source": c.vertex_label(c.vertices()[a.source]),
                "target": c.vertex_label(c.vertices()[a.target]),
            })
        })
        .collect();
    out.emit(
        json!({
            "command": "cover",
            "window": c.window(),
            "basepoint": q.vertex_name(c.basepoint()),
            "period": c.period(),
            "ray_depth": c.ray_depth(),
            "vertices": vertices,
            "arrows": arrows,
        }),
        || {
            let w = c.to_quiver();
            let mut s = format!(
                "window {} of the covering through {}@0 (period {})\n{} vertices, {} arrows",
                c.window(),
                q.vertex_name(c.basepoint()),
                c.period(),
                w.vertex_count(),
                w.arrow_count()
            );
            for a in c.arrows() {
                s.push_str(&format!(
                    "\n{}: {} -> {}",
                    c.arrow_label(a),
                    c.vertex_label(c.vertices()[a.source]),
                    c.vertex_label(c.vertices()[a.target])
                ));
            }
            s
        },
    );
    Ok(Outcome::Done)
}

fn galois(out: &Output, path: &Path, args: &WindowArgs) -> Result<Outcome> {
    let q = load(path)?;
    let c = cover(&q, args)?;
    let report = verify_galois(&c);
    let free = free_action_check(&c);
    out.emit(
        json!({"command": "galois", "conditions": report.conditions, "free_action": free}),
        || {
            let mut s = String::new();
            for cond in &report.conditions {
                let (word, tone) = match &cond.status {
                    ConditionStatus::Pass => ("pass".to_string(), Tone::Good),
                    ConditionStatus::PassWithinWindow => ("pass within window".to_string(), Tone::Good),
                    ConditionStatus::Fail { witness } => (format!("FAIL at {witness}"), Tone::Bad),
                    ConditionStatus::Inconclusive { reason } => (format!("inconclusive: {reason}"), Tone::Unsure),
                };
                s.push_str(&format!("({}) {}: {}\n", cond.condition, cond.name, out.paint(&word, tone)));
            }
            s.push_str(&format!("free action: {}", out.paint_bool(free)));
            s
        },
    );
    let inconclusive = report
        .conditions
        .iter()
        .any(|c| matches!(c.status, ConditionStatus::Inconclusive { .. }));
    Ok(if inconclusive { Outcome::Inconclusive } else { Outcome::Done })
}

fn sg(out: &Output, command: &SgCommand) -> Result<Outcome> {
    match command {
        SgCommand::Zero(args) => {
            let q = load(&args.file)?;
            let x = objects(&q, args, 1)?.remove(0);
            let zero = is_zero(&x, &q);
            out.emit(
                json!({"command": "sg zero", "object": terms_json(&q, &x), "zero": zero}),
                || out.paint_bool(zero),
            );
            Ok(Outcome::Done)
        }
        SgCommand::Normalize(args) => {
            let q = load(&args.file)?;
            let x = objects(&q, args, 1)?.remove(0);
            let n = normalize(&x, &q);
            out.emit(
                json!({"command": "sg normalize", "object": terms_json(&q, &x), "normalized": terms_json(&q, &n)}),
                || n.display(&q).to_string(),
            );
            Ok(Outcome::Done)
        }
        SgCommand::Reduce(args) => {
            let q = load(&args.file)?;
            let x = objects(&q, args, 1)?.remove(0);
            let report = sg_generators(&q);
            let depth = args.depth.unwrap_or_else(|| default_depth(&q));
            let (status, result, outcome) = match reduce_to_generators(&x, &q, &report, depth) {
                Reduction::Reduced(r) => ("reduced", r, Outcome::Done),
                Reduction::Unknown { partial } => ("unknown", partial, Outcome::Inconclusive),
            };
            out.emit(
                json!({
                    "command": "sg reduce",
                    "object": terms_json(&q, &x),
                    "status": status,
                    "depth": depth,
                    "result": terms_json(&q, &result),
                }),
                || match outcome {
                    Outcome::Done => result.display(&q).to_string(),
                    _ => format!(
                        "{} (depth {depth} exhausted; partial: {})",
                        out.paint("unknown", Tone::Unsure),
                        result.display(&q)
                    ),
                },
            );
            Ok(outcome)
        }
        SgCommand::Iso(args) => {
            let q = load(&args.file)?;
            let xs = objects(&q, args, 2)?;
            let depth = args.depth.unwrap_or_else(|| default_depth(&q));
            let answer = is_isomorphic(&xs[0], &xs[1], &q, depth);
            out.emit(
                json!({
                    "command": "sg iso",
                    "left": terms_json(&q, &xs[0]),
                    "right": terms_json(&q, &xs[1]),
                    "depth": depth,
                    "isomorphic": answer,
                }),
                || match answer {
                    Ternary::True => out.paint("true", Tone::Good),
                    Ternary::False => out.paint("false", Tone::Bad),
                    Ternary::Unknown => out.paint("unknown", Tone::Unsure),
                },
            );
            Ok(if answer == Ternary::Unknown {
                Outcome::Inconclusive
            } else {
                Outcome::Done
            })
        }
        SgCommand::Generators { file } => {
            let q = load(file)?;
            let report = sg_generators(&q);
            let named = report.named(&q);
            out.emit(
                json!({"command": "sg generators", "trivial": report.is_trivial(), "components": named}),
                || {
                    if named.is_empty() {
                        return "no generators (the singularity category is zero)".to_string();
                    }
                    named
                        .iter()
                        .map(|c| {
                            let kind = match c.kind {
                                sgquiver::singularity::ComponentKind::Cycle => "cycle",
                                sgquiver::singularity::ComponentKind::Ray => "ray",
                            };
                            let period = c.period.map(|p| format!(", S ≅ S[{p}]")).unwrap_or_default();
                            format!("{kind} component, representative {}{period}", c.representative)
                        })
                        .collect::<Vec<_>>()
                        .join("\n")
                },
            );
            Ok(Outcome::Done)
        }
        SgCommand::Trivial { file } => {
            let q = load(file)?;
            let trivial = sg_is_trivial(&q);
            out.emit(json!({"command": "sg trivial", "trivial": trivial}), || {
                out.paint_bool(trivial)
            });
            Ok(Outcome::Done)
        }
    }
}

/// The quiver the oracle works on: rays cut to `depth` vertices.
fn finite_view(q: &Quiver, depth: u64) -> Quiver {
    if q.is_finite() {
        q.clone()
    } else {
        q.truncate_rays(depth).quiver
    }
}

fn oracle_cmd(out: &Output, command: &OracleCommand) -> Result<Outcome> {
    match command {
        OracleCommand::Syzygy(args) | OracleCommand::Cosyzygy(args) => {
            let dual = matches!(command, OracleCommand::Cosyzygy(_));
            let q = finite_view(&load(&args.file)?, args.ray_depth);
            let v = q
                .vertex_id(&args.vertex)
                .with_context(|| format!("unknown vertex `{}`", args.vertex))?;
            let input = Semisimple::from([(v, 1)]);
            let result = if dual {
                oracle::cosyzygy(&q, &input)?
            } else {
                oracle::syzygy(&q, &input)?
            };
            let name = if dual { "oracle cosyzygy" } else { "oracle syzygy" };
            out.emit(
                json!({"command": name, "vertex": args.vertex, "result": multiset_json(&q, &result)}),
                || multiset_text(&q, &result),
            );
            Ok(Outcome::Done)
        }
        OracleCommand::Resolve { vertex: args, steps } => {
            let q = finite_view(&load(&args.file)?, args.ray_depth);
            let v = q
                .vertex_id(&args.vertex)
                .with_context(|| format!("unknown vertex `{}`", args.vertex))?;
            let r = oracle::resolve(&q, v, *steps as usize)?;
            out.emit(
                json!({
                    "command": "oracle resolve",
                    "vertex": args.vertex,
                    "steps": r.steps.iter().map(|s| multiset_json(&q, s)).collect::<Vec<_>>(),
                    "terminated": r.terminated,
                }),
                || {
                    let mut s: Vec<String> = r
                        .steps
                        .iter()
                        .enumerate()
                        .map(|(i, m)| format!("step {i}: {}", multiset_text(&q, m)))
                        .collect();
                    s.push(format!("terminated: {}", out.paint_bool(r.terminated)));
                    s.join("\n")
                },
            );
            Ok(Outcome::Done)
        }
        OracleCommand::Fcomplex { file, window, module } => {
            let q = load(file)?;
            let c = cover(&q, window)?;
            let wop = c.to_quiver().opposite();
            let m = oracle::parse_module(&read(module)?, &wop)
                .map_err(|e| anyhow::anyhow!("{}: {e}", module.display()))?;
            let f = oracle::build_f_complex(&c, &m)?;
            let report = oracle::bounded_cohomology_check(&f);
            out.emit(
                json!({"command": "oracle fcomplex", "window": c.window(), "cohomology": report}),
                || {
                    let mut s = format!("d² = 0: {}", out.paint_bool(report.squares_to_zero));
                    for e in report.entries.iter().filter(|e| e.dimension > 0) {
                        let at: Vec<String> = e.vertices.iter().map(|(k, d)| format!("{k}:{d}")).collect();
                        let edge = if e.boundary { " (window boundary)" } else { "" };
                        s.push_str(&format!("\nH^{} = {} [{}]{edge}", e.degree, e.dimension, at.join(" ")));
                    }
                    s
                },
            );
            Ok(if report.boundary_degrees.is_empty() {
                Outcome::Done
            } else {
                Outcome::Inconclusive
            })
        }
    }
}

fn corpus_cmd(out: &Output, dir: Option<&Path>) -> Result<Outcome> {
    let mut verdicts = Vec::new();
    for e in EXAMPLES {
        let source = match dir {
            Some(d) => read(&d.join(e.file))?,
            None => e.source.to_string(),
        };
        let verdict = corpus::run_example(e.name, &source).map_err(|err| anyhow::anyhow!("{}:{err}", e.file))?;
        verdicts.push(verdict);
    }
    let passed = verdicts.iter().all(|v| v.passed);
    out.emit(
        json!({"command": "corpus", "passed": passed, "examples": verdicts}),
        || {
            let mut s = Vec::new();
            for v in &verdicts {
                for c in &v.checks {
                    let mark = if c.passed {
                        out.paint("PASS", Tone::Good)
                    } else {
                        out.paint("FAIL", Tone::Bad)
                    };
                    s.push(format!("{mark} {}: {}", v.example, c.name));
                }
            }
            s.join("\n")
        },
    );
    Ok(if passed { Outcome::Done } else { Outcome::Failed })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let out = Output::new(cli.format);
    match &cli.command {
        Command::Check { file } => check(&out, file),
        Command::Grade { file } => grade(&out, file),
        Command::Cover { file, window, dot } => cover_cmd(&out, file, window, *dot),
        Command::Galois { file, window } => galois(&out, file, window),
        Command::Sg { command } => sg(&out, command),
        Command::Oracle { command } => oracle_cmd(&out, command),
        Command::Corpus { dir } => corpus_cmd(&out, dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Ok(Outcome::Inconclusive) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
