//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use lchroma_core::colorer::{color_with_options, verify_coloring, ColorError, ColorOptions};
use lchroma_core::extend::palette_size;
use lchroma_core::geometry::LCollection;
use lchroma_core::graph::{
    build_intersection_graph, chromatic_number_exact, clique_number, GraphError, CHROMATIC_VERTEX_LIMIT,
    CLIQUE_NODE_BUDGET,
};
use lchroma_core::instances::{desk_suite, gadget_gl_representation, random_collection, Gadget, Profile};

use crate::format::{
    coloring_json, colors_for, edge_list, instance_json, parse_coloring, parse_instance, parse_pillar_dump,
    pillar_dump, trace_jsonl,
};
use crate::svg::{pillar_paths, render};

#[derive(Parser, Debug)]
#[command(name = "lchroma", version, about = "Color grounded L-graphs with pillar assignments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a random or gadget instance as JSON.
    Generate {
        /// uniform, flat, dense, or gadget:gl_not_if[:N]
        #[arg(long, default_value = "flat")]
        profile: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, env = "LCHROMA_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
    /// Color an instance and write the coloring with its audit.
    Color {
        #[arg(short, long)]
        i: PathBuf,
        #[arg(short, long)]
        o: Option<PathBuf>,
        /// Use this clique number instead of computing it.
        #[arg(long)]
        omega_override: Option<usize>,
        /// Write one JSON line per extension round.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the final pillars of every class.
        #[arg(long)]
        pillars: Option<PathBuf>,
    },
    /// Check a coloring for properness and against the bounds.
    Verify {
        #[arg(short, long)]
        i: PathBuf,
        #[arg(short, long)]
        c: PathBuf,
    },
    /// Exact clique and chromatic numbers for small instances.
    Oracle {
        #[arg(short, long)]
        i: PathBuf,
        /// Also write the intersection graph as an edge list.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Draw an instance, optionally colored and with pillars, as SVG.
    Render {
        #[arg(short, long)]
        i: PathBuf,
        #[arg(short, long)]
        c: Option<PathBuf>,
        #[arg(long)]
        pillars: Option<PathBuf>,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Run a benchmark suite and print a summary table.
    Bench {
        #[arg(long, default_value = "desk")]
        suite: String,
        #[arg(long, env = "LCHROMA_SEED", default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Verification(_) => "verification",
            CliError::Input(_) => "input",
            CliError::Invariant(_) => "invariant",
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    code: u8,
    message: String,
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(&CliError::Input(e.to_string().trim_end().into())),
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    let line = ErrorJson {
        error: e.kind(),
        code: e.code(),
        message: e.to_string(),
    };
    eprintln!("{}", serde_json::to_string(&line).expect("errors serialize"));
    ExitCode::from(e.code())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}"))),
    }
}

fn load_instance(path: &Path) -> Result<LCollection, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn measured_omega(collection: &LCollection) -> Result<usize, CliError> {
    if collection.is_empty() {
        return Ok(0);
    }
    clique_number(&build_intersection_graph(collection), CLIQUE_NODE_BUDGET)
        .map(|c| c.size)
        .map_err(|e| CliError::Input(e.to_string()))
}

fn color_error(e: ColorError, overridden: bool) -> CliError {
    match e {
        ColorError::Graph(GraphError::LimitExceeded(m)) => CliError::Input(m),
        e if overridden => CliError::Input(format!("{e} (with omega override)")),
        e => CliError::Invariant(e.to_string()),
    }
}

fn parse_profile(profile: &str, n: usize, seed: u64) -> Result<LCollection, CliError> {
    if let Some(name) = profile.strip_prefix("gadget:") {
        let gadget = if name.eq_ignore_ascii_case("gl_not_if") {
            Gadget::GlNotIf(n)
        } else {
            name.parse::<Gadget>().map_err(CliError::Input)?
        };
        return match gadget {
            Gadget::GlNotIf(n) => gadget_gl_representation(n).map_err(|e| match e {
                lchroma_core::instances::InstanceError::RepresentationMismatch { .. } => {
                    CliError::Invariant(e.to_string())
                }
                e => CliError::Input(e.to_string()),
            }),
            other => Err(CliError::Input(format!(
                "gadget {other:?} has no explicit L-representation; only gl_not_if does"
            ))),
        };
    }
    let p: Profile = profile.parse().map_err(CliError::Input)?;
    Ok(random_collection(n, seed, p))
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate { profile, n, seed, o } => {
            let c = parse_profile(&profile, n, seed)?;
            let name = format!("{profile}-n{n}-seed{seed}");
            write(o.as_deref(), &instance_json(&c, Some(&name)))
        }
        Command::Color {
            i,
            o,
            omega_override,
            trace,
            pillars,
        } => {
            let c = load_instance(&i)?;
            let options = ColorOptions {
                omega_override,
                ..ColorOptions::default()
            };
            let run = color_with_options(&c, &options).map_err(|e| color_error(e, omega_override.is_some()))?;
            if let Some(t) = trace {
                write(Some(&t), &trace_jsonl(&run))?;
            }
            if let Some(p) = pillars {
                let dump = serde_json::to_string_pretty(&pillar_dump(&run)).expect("dump serializes") + "\n";
                write(Some(&p), &dump)?;
            }
            write(o.as_deref(), &coloring_json(&run))?;
            if o.is_some() {
                let a = &run.coloring.audit;
                println!(
                    "colored {} shapes with {} colors (omega {}, bound {})",
                    c.len(),
                    a.bound.palette_used,
                    a.omega,
                    a.bound.pipeline_bound
                );
            }
            Ok(())
        }
        Command::Verify { i, c } => {
            let collection = load_instance(&i)?;
            let file = parse_coloring(&read(&c)?).map_err(|e| CliError::Input(format!("{}: {e}", c.display())))?;
            let colors = colors_for(&collection, &file).map_err(|e| CliError::Input(e.to_string()))?;
            let omega = measured_omega(&collection)?;
            let k = if omega <= 1 { 1 } else { palette_size(omega) };
            let r = verify_coloring(&collection, &colors, omega, k);
            let summary = serde_json::json!({
                "proper": r.proper,
                "conflict": r.conflict,
                "omega": omega,
                "palette_used": r.bound.palette_used,
                "pipeline_bound": r.bound.pipeline_bound as u64,
                "theorem_bound": r.bound.theorem_bound as u64,
                "within_bound": r.bound.holds(),
            });
            println!("{summary}");
            if let Some((a, b)) = r.conflict {
                return Err(CliError::Verification(format!("shapes `{a}` and `{b}` intersect and share a color")));
            }
            if !r.bound.holds() {
                return Err(CliError::Verification(format!(
                    "{} colors exceed the bound {} for omega {omega}",
                    r.bound.palette_used, r.bound.pipeline_bound
                )));
            }
            Ok(())
        }
        Command::Oracle { i, edges } => {
            let c = load_instance(&i)?;
            let g = build_intersection_graph(&c);
            if let Some(p) = edges {
                write(Some(&p), &edge_list(&g))?;
            }
            if c.len() > CHROMATIC_VERTEX_LIMIT {
                return Err(CliError::Input(format!(
                    "oracle handles at most {CHROMATIC_VERTEX_LIMIT} shapes, got {}",
                    c.len()
                )));
            }
            let chi = chromatic_number_exact(&g).map_err(|e| CliError::Input(e.to_string()))?;
            let run = color_with_options(&c, &ColorOptions::default()).map_err(|e| color_error(e, false))?;
            let a = &run.coloring.audit;
            let bound = if a.omega >= 2 { a.bound.theorem_bound } else { a.bound.pipeline_bound };
            let used = a.bound.palette_used;
            let holds = chi <= used && used as u128 <= bound;
            println!("omega={} chi={chi} colors_used={used} bound={bound}", a.omega);
            println!("{chi} <= {used} <= {bound}: {}", if holds { "holds" } else { "FAILS" });
            if holds {
                Ok(())
            } else {
                Err(CliError::Invariant(String::from("oracle chain does not hold")))
            }
        }
        Command::Render { i, c, pillars, o } => {
            let collection = load_instance(&i)?;
            let colors = match c {
                Some(p) => {
                    let file =
                        parse_coloring(&read(&p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                    Some(colors_for(&collection, &file).map_err(|e| CliError::Input(e.to_string()))?)
                }
                None => None,
            };
            let paths = match pillars {
                Some(p) => {
                    let dump = parse_pillar_dump(&read(&p)?)
                        .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                    pillar_paths(&dump).map_err(CliError::Input)?
                }
                None => Vec::new(),
            };
            write(Some(&o), &render(&collection, colors.as_deref(), &paths))
        }
        Command::Bench { suite, seed } => {
            if suite != "desk" {
                return Err(CliError::Input(format!("unknown suite `{suite}`; available: desk")));
            }
            bench_desk(seed)
        }
    }
}

#[derive(Default)]
struct Row {
    instances: usize,
    total_n: usize,
    max_colors: usize,
    max_pillar_colors: usize,
    max_rounds: usize,
}

fn bench_desk(seed: u64) -> Result<(), CliError> {
    let start = Instant::now();
    let suite = desk_suite(seed);
    let mut rows: [Row; 5] = Default::default();
    let mut failures = 0;
    for inst in &suite {
        match color_with_options(&inst.collection, &ColorOptions::default()) {
            Ok(run) if run.coloring.audit.bound.holds() => {
                let row = &mut rows[inst.omega];
                row.instances += 1;
                row.total_n += inst.collection.len();
                row.max_colors = row.max_colors.max(run.coloring.palette_used());
                let pc = run.coloring.audit.pillar_colors_used.iter().copied().max().unwrap_or(0);
                row.max_pillar_colors = row.max_pillar_colors.max(pc);
                let rounds = run.classes.iter().map(|c| c.rounds.len()).max().unwrap_or(0);
                row.max_rounds = row.max_rounds.max(rounds);
            }
            Ok(_) => {
                failures += 1;
                eprintln!("bound exceeded on {}", inst.name);
            }
            Err(e) => {
                failures += 1;
                eprintln!("{}: {e}", inst.name);
            }
        }
    }
    println!("omega  instances  mean_n  max_colors  bound_2w2k  bound_17w4  max_pillar_colors  k   max_rounds");
    for (w, row) in rows.iter().enumerate().filter(|(_, r)| r.instances > 0) {
        let k = palette_size(w) as u64;
        let ww = w as u64;
        println!(
            "{w:<5}  {:<9}  {:<6.1}  {:<10}  {:<10}  {:<10}  {:<17}  {k:<3} {}",
            row.instances,
            row.total_n as f64 / row.instances as f64,
            row.max_colors,
            2 * ww * ww * k,
            17 * ww.pow(4),
            row.max_pillar_colors,
            row.max_rounds
        );
    }
    println!(
        "{} instances, {failures} failures, {:.2}s",
        suite.len(),
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("{failures} suite instances failed")))
    }
}
