//! The `smith` command line.
//!
//! Exit codes: 0 on success, 1 when an input or a checked law fails
//! validation, 2 on usage and I/O errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::convergence::{
    fit_affine, invariance_diagnostic, lattice_family, make_lattice, overlay_svg, LATTICE_HEIGHT,
};
use crate::error::Error;
use crate::io;
use crate::mated_crt::{build_map, mark_vertices, sample_excursion, MarkPolicy};
use crate::tiling::{render_svg, smith_embedding, tile, validate, ColorBy};
use crate::verify::{verify_map, Tolerances, VerifyOptions};
use crate::walk::DEFAULT_BUDGET;

const SOLVE_HELP: &str = "Reads a map document and writes a solution document: \
{schema: \"smith/1\", kind: \"solution\", map, h: {vertex id: voltage}, eta, residual, w: {dual vertex: conjugate}}.";
const TILE_HELP: &str =
    "Reads a map or solution document (schema smith/1) and writes a diagram document: \
{schema: \"smith/1\", kind: \"diagram\", eta, rects: [{edge, x0, x1, y0, y1, degenerate}], \
hsegs: [{vertex, x0, len, y}], vsegs: [{face, x, y0, y1}]}. Exits 1 if the tiling check fails.";
const RENDER_HELP: &str =
    "Reads a diagram, map or solution document (schema smith/1) and writes SVG 1.1.";
const VERIFY_HELP: &str = "Reads a map document (schema smith/1) and writes a verify-report document: \
{schema: \"smith/1\", kind: \"verify-report\", pass, laws: [{name, status, max_deviation, tolerance, detail}]}. \
Exits 1 if any law fails.";
const MATED_HELP: &str = "Writes a map document (schema smith/1, kind \"map\") with unit conductances and no \
coordinates. --increments reads {schema: \"smith/1\", kind: \"increments\", dl: [...], dr: [...]}; cell infima \
are then drawn from Brownian bridges using --seed.";
const CONVERGE_HELP: &str =
    "Writes CSV with header n,eta,c_h,b_h,b_w,sup_err_height,sup_err_angle, one row per \
lattice, sorted by n. The SVG overlay (for the largest n) is SVG 1.1. Schema version smith/1.";

#[derive(Parser, Debug)]
#[command(
    name = "smith",
    version,
    about = "Smith diagrams of doubly marked planar maps (documents use schema smith/1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the voltage and its harmonic conjugate.
    #[command(after_help = SOLVE_HELP)]
    Solve(Io),
    /// Build the Smith diagram.
    #[command(after_help = TILE_HELP)]
    Tile(Io),
    /// Draw a Smith diagram.
    #[command(after_help = RENDER_HELP)]
    Render(RenderArgs),
    /// Check the exact discrete laws on one map.
    #[command(after_help = VERIFY_HELP)]
    Verify(VerifyArgs),
    /// Sample a mated-CRT map.
    #[command(name = "mated-crt", after_help = MATED_HELP)]
    MatedCrt(MatedArgs),
    /// Fit Smith embeddings of cylinder lattices to their a priori positions.
    #[command(after_help = CONVERGE_HELP)]
    Converge(ConvergeArgs),
}

#[derive(Args, Debug)]
struct Io {
    /// Input file; stdin if absent or "-".
    #[arg(help_heading = "Files")]
    input: Option<PathBuf>,
    /// Output file; stdout if absent or "-".
    #[arg(short, long, help_heading = "Files")]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Coloring {
    Order,
    Size,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value = "order")]
    color_by: Coloring,
    #[arg(long, default_value_t = 800)]
    width_px: u32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol_geometric: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol_algebraic: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol_exact: f64,
    /// Random closed dual walks for the closure check.
    #[arg(long, default_value_t = 100)]
    dual_cycles: usize,
    /// Vertices inserted for the series-law and projection checks.
    #[arg(long, default_value_t = 10)]
    insertions: usize,
    /// Longest height sequence for the hitting and winding laws.
    #[arg(long, default_value_t = 4)]
    hitting_steps: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mark {
    Uniform,
    FirstLast,
}

#[derive(Args, Debug)]
struct MatedArgs {
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    gamma: f64,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Load the excursion instead of sampling it.
    #[arg(long)]
    increments: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "uniform")]
    mark: Mark,
    #[arg(long, default_value_t = 10_000_000)]
    max_attempts: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    band: f64,
    /// Seed for the exit-law walks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Walks per start for the exit-law diagnostic, reported on stderr; 0 skips it.
    #[arg(long, default_value_t = 0)]
    walks: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Overlay of the fitted Smith positions on the a priori ones.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

/// Runs the command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(s) = std::env::var("SMITH_THREADS") {
        match s.trim().parse::<usize>() {
            Ok(k) if k > 0 => b = b.num_threads(k),
            _ => return Err(format!("SMITH_THREADS = {s:?} is not a positive integer")),
        }
    }
    b.build().map_err(|e| e.to_string())
}

fn dispatch(cmd: Command) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Solve(a) => {
            let (map, emb) = io::read_map(&read_input(a.input.as_deref())?)?;
            let t = tile(&map, emb.as_ref())?;
            let doc = io::solution_doc(&map, emb.as_ref(), &t.voltage, &t.conjugate);
            write_output(a.output.as_deref(), &io::to_json(&doc))?;
            Ok(0)
        }
        Command::Tile(a) => {
            let (map, emb) = io::read_map_or_solution(&read_input(a.input.as_deref())?)?;
            let t = tile(&map, emb.as_ref())?;
            write_output(a.output.as_deref(), &io::write_diagram(&map, &t.diagram))?;
            let rep = validate(&map, &t.voltage, &t.diagram);
            if !rep.passes(Tolerances::default().geometric) {
                eprintln!("tiling check failed: {rep:?}");
                return Ok(1);
            }
            Ok(0)
        }
        Command::Render(a) => {
            let text = read_input(a.io.input.as_deref())?;
            let diagram = match io::document_kind(&text)?.as_str() {
                "diagram" => io::read_diagram(&text)?,
                _ => {
                    let (map, emb) = io::read_map_or_solution(&text)?;
                    tile(&map, emb.as_ref())?.diagram
                }
            };
            let color = match a.color_by {
                Coloring::Order => ColorBy::Order,
                Coloring::Size => ColorBy::Size,
            };
            write_output(
                a.io.output.as_deref(),
                &render_svg(&diagram, color, a.width_px),
            )?;
            Ok(0)
        }
        Command::Verify(a) => {
            let tol = Tolerances {
                geometric: a.tol_geometric,
                algebraic: a.tol_algebraic,
                exact: a.tol_exact,
            };
            for (name, t) in [
                ("geometric", tol.geometric),
                ("algebraic", tol.algebraic),
                ("exact", tol.exact),
            ] {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Failure::Usage(format!(
                        "--tol-{name} must be positive, got {t}"
                    )));
                }
            }
            let opts = VerifyOptions {
                tol,
                seed: a.seed,
                dual_cycles: a.dual_cycles,
                insertions: a.insertions,
                hitting_steps: a.hitting_steps,
                ..VerifyOptions::default()
            };
            let (map, emb) = io::read_map(&read_input(a.io.input.as_deref())?)?;
            let rep = verify_map(&map, emb.as_ref(), &opts)?;
            write_output(a.io.output.as_deref(), &io::write_report(&rep))?;
            Ok(if rep.pass { 0 } else { 1 })
        }
        Command::MatedCrt(a) => {
            let exc = match &a.increments {
                Some(p) => io::read_increments(&read_input(Some(p))?)?.with_bridge_minima(a.seed),
                None => sample_excursion(a.gamma, a.n, a.seed, a.max_attempts)?,
            };
            let m = build_map(&exc)?;
            let policy = match a.mark {
                Mark::Uniform => MarkPolicy::UniformPair,
                Mark::FirstLast => MarkPolicy::FirstLast,
            };
            let m = mark_vertices(&m, policy, a.seed)?;
            write_output(a.output.as_deref(), &io::write_map(&m.map, None))?;
            Ok(0)
        }
        Command::Converge(a) => converge(a),
    }
}

fn converge(a: ConvergeArgs) -> std::result::Result<i32, Failure> {
    if a.n_list.is_empty() || a.n_list.iter().any(|&n| n < 3) {
        return Err(Failure::Usage(format!(
            "--n-list needs lattice sizes >= 3, got {:?}",
            a.n_list
        )));
    }
    if !(a.band > 0.0 && a.band < LATTICE_HEIGHT) {
        return Err(Failure::Usage(format!(
            "--band must lie in (0, {LATTICE_HEIGHT}), got {}",
            a.band
        )));
    }
    let rows = lattice_family(&a.n_list, a.band)?;
    write_output(a.output.as_deref(), &crate::convergence::family_csv(&rows))?;
    let mut code = 0;
    if a.walks > 0 {
        for r in &rows {
            let (map, emb) = make_lattice(r.n, LATTICE_HEIGHT)?;
            let rep = invariance_diagnostic(&map, &emb, a.band, a.walks, a.seed, a.budget)?;
            eprintln!(
                "n = {}: exit-law z = {:.3} over {} starts{}",
                r.n,
                rep.z,
                rep.rows.len(),
                if rep.pass { "" } else { " (FAIL)" }
            );
            if !rep.pass {
                code = 1;
            }
        }
    }
    if let Some(p) = &a.svg {
        let n = *a.n_list.iter().max().expect("nonempty");
        let (map, emb) = make_lattice(n, LATTICE_HEIGHT)?;
        let t = tile(&map, Some(&emb))?;
        let se = smith_embedding(&map, &t.diagram);
        let fit = fit_affine(&se, t.diagram.eta, &emb, a.band)?;
        write_output(Some(p), &overlay_svg(&fit, &se, &emb, a.band, 800))?;
    }
    Ok(code)
}

fn is_std(p: Option<&Path>) -> bool {
    p.is_none_or(|p| p.as_os_str() == "-")
}

fn read_input(p: Option<&Path>) -> std::result::Result<String, Failure> {
    let mut s = String::new();
    let r = if is_std(p) {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        let p = p.expect("checked");
        std::fs::read_to_string(p)
            .map(|t| s = t)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))
    };
    r.map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(s)
}

fn write_output(p: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    let r = if is_std(p) {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush())
    } else {
        let p = p.expect("checked");
        std::fs::write(p, text)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))
    };
    r.map_err(|e| Failure::Usage(e.to_string()))
}
