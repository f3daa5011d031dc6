use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use planar_cayley::catalog::{reference_count, CatalogFile};
use planar_cayley::decider::{
    complete_to_fullness, decide_planar, default_oracle, CosetOracle, ExternalOracle,
    FullPresentation, WordOracle,
};
use planar_cayley::enumeration::primitive_family;
use planar_cayley::geometry::{angle_sum_over_pi, solve_edge_length};
use planar_cayley::render::{render_svg, ColorBy, RenderOptions};
use planar_cayley::tiling::{build_ball_with, build_complete, BuildOptions, DEFAULT_VERTEX_CAP};
use planar_cayley::word_problem::WordProblem;
use planar_cayley::{GeometryClass, GroupWord, LabelingScheme, TypeVector};

#[derive(Parser)]
#[command(name = "pcayley", version, about = "Planar Cayley graphs from labeling schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the scheme classes of one degree and write the catalog.
    Enumerate {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Face orbits, duals and primitive vector of a scheme.
    Orbits {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a type vector against a scheme.
    Validate {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Type vector such as `4,3,3,3,3`, with `inf` for an infinite face.
        #[arg(long)]
        tv: TypeVector,
    },
    /// Canonical presentation of a scheme with a type vector.
    Present {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Type vector such as `4,3,3,3,3`, with `inf` for an infinite face.
        #[arg(long)]
        tv: TypeVector,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geometry class and edge length of a type vector.
    Solve {
        /// Type vector such as `4,3,3,3,3`, with `inf` for an infinite face.
        #[arg(long)]
        tv: TypeVector,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a ball of the Cayley graph (the whole graph when spherical and no radius is given).
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a ball as SVG.
    Draw {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 800)]
        height: u32,
        #[arg(long, default_value_t = 1.5)]
        stroke_width: f64,
        #[arg(long, value_enum, default_value_t = Coloring::Generator)]
        color_by: Coloring,
        #[arg(long)]
        labels: bool,
        /// Vertex id placed at the centre.
        #[arg(long, default_value_t = 0)]
        center: usize,
    },
    /// Decide whether a word is trivial, or whether two words are equal.
    Wp {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Type vector such as `4,3,3,3,3`, with `inf` for an infinite face.
        #[arg(long)]
        tv: TypeVector,
        /// Generator names separated by spaces, e.g. "a1 a3 a3".
        #[arg(long, allow_hyphen_values = true)]
        word: GroupWord,
        /// Compare `--word` with this word instead of testing it for triviality.
        #[arg(long)]
        equals: Option<GroupWord>,
    },
    /// Decide whether a full presentation has a planar Cayley graph.
    Decide {
        #[arg(long)]
        presentation: PathBuf,
        /// External word-problem oracle, run through `sh -c`.
        #[arg(long)]
        oracle: Option<String>,
        /// Complete the presentation to every trivial word up to this length first.
        #[arg(long)]
        complete: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        coset_bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SchemeArg {
    /// Scheme JSON file, or the JSON itself.
    #[arg(long)]
    scheme: String,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    scheme: SchemeArg,
    /// Type vector such as `4,3,3,3,3`, with `inf` for an infinite face.
    #[arg(long)]
    tv: TypeVector,
    /// Ball radius in edges around the identity.
    #[arg(long)]
    radius: Option<usize>,
    /// Give up once this many cosets have been allocated.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    vertex_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coloring {
    Generator,
    FaceClass,
    None,
}

impl From<Coloring> for ColorBy {
    fn from(c: Coloring) -> ColorBy {
        match c {
            Coloring::Generator => ColorBy::Generator,
            Coloring::FaceClass => ColorBy::FaceClass,
            Coloring::None => ColorBy::None,
        }
    }
}

impl SchemeArg {
    fn load(&self) -> anyhow::Result<LabelingScheme> {
        let text = if self.scheme.trim_start().starts_with('{') {
            self.scheme.clone()
        } else {
            fs::read_to_string(&self.scheme).with_context(|| format!("--scheme: cannot read {}", self.scheme))?
        };
        serde_json::from_str(&text).with_context(|| format!("--scheme: invalid scheme {}", self.scheme))
    }
}

impl GraphArgs {
    fn build(&self) -> anyhow::Result<planar_cayley::Ball> {
        let scheme = self.scheme.load()?;
        let options = BuildOptions {
            vertex_cap: self.vertex_cap,
            ..BuildOptions::default()
        };
        let ball = match self.radius {
            Some(r) => build_ball_with(&scheme, &self.tv, r, &options)?,
            None if solve_edge_length(&self.tv)?.geometry == GeometryClass::Spherical => {
                build_complete(&scheme, &self.tv, &options)?
            }
            None => bail!("--radius is required for an infinite graph"),
        };
        Ok(ball)
    }
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("--out: cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(value: &serde_json::Value, out: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(&text, out)
}

/// Exit status of a successful run: 0, or 1 for a negative decision.
fn execute(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Enumerate { degree, jobs, out } => {
            let catalog = CatalogFile::build(degree, jobs.max(1))?;
            emit(&catalog.to_json_string(), out.as_deref())?;
            let n = catalog.counts.classes;
            match reference_count(degree) {
                Some(p) if p != n => eprintln!(
                    "degree {degree}: {n} classes (Burnside count {}); the reference table lists {p}",
                    catalog.counts.burnside
                ),
                _ => eprintln!("degree {degree}: {n} classes (Burnside count {})", catalog.counts.burnside),
            }
        }
        Command::Orbits { scheme, out } => {
            let s = scheme.load()?;
            let mut v = s.orbits().to_json_value();
            v["scheme"] = serde_json::to_value(&s)?;
            v["primitive_vector"] = serde_json::to_value(&s.primitive_vector().0)?;
            if s.degree() >= 3 {
                v["family_pattern"] = primitive_family(&s).to_string().into();
            }
            emit_json(&v, out.as_deref())?;
            eprintln!("{s}: primitive vector {}", s.primitive_vector());
        }
        Command::Validate { scheme, tv } => {
            let s = scheme.load()?;
            s.check_type_vector(&tv)?;
            println!("valid");
        }
        Command::Present { scheme, tv, out } => {
            let s = scheme.load()?;
            let p = s.canonical_presentation(&tv)?;
            emit_json(&p.to_json_value(), out.as_deref())?;
            eprintln!("{p}");
        }
        Command::Solve { tv, out } => {
            let sol = solve_edge_length(&tv)?;
            let mut v = serde_json::to_value(&sol)?;
            v["angle_sum_over_pi"] = angle_sum_over_pi(&tv).to_string().into();
            emit_json(&v, out.as_deref())?;
            eprintln!("{tv}: {} with edge length {}", sol.geometry, sol.edge_length);
        }
        Command::Build { graph, out } => {
            let ball = graph.build()?;
            emit_json(&ball.to_json(), out.as_deref())?;
            eprintln!(
                "{} vertices, {} edges, radius {}",
                ball.vertex_count(),
                ball.edge_count(),
                ball.radius
            );
        }
        Command::Draw {
            graph,
            out,
            width,
            height,
            stroke_width,
            color_by,
            labels,
            center,
        } => {
            let ball = graph.build()?;
            let opts = RenderOptions {
                width,
                height,
                stroke_width,
                color_by: color_by.into(),
                label_vertices: labels,
                center,
            };
            emit(&render_svg(&ball, &opts)?, out.as_deref())?;
            eprintln!("{} vertices, {} edges drawn", ball.vertex_count(), ball.edge_count());
        }
        Command::Wp {
            scheme,
            tv,
            word,
            equals,
        } => {
            let s = scheme.load()?;
            let wp = WordProblem::new(&s, &tv)?;
            let yes = match &equals {
                Some(other) => wp.are_equal(&word, other)?,
                None => wp.is_trivial(&word)?,
            };
            let answer = match (equals.is_some(), yes) {
                (false, true) => "trivial",
                (false, false) => "nontrivial",
                (true, true) => "equal",
                (true, false) => "different",
            };
            println!("{answer}");
            return Ok(if yes { 0 } else { 1 });
        }
        Command::Decide {
            presentation,
            oracle,
            complete,
            coset_bound,
            out,
        } => {
            let text = fs::read_to_string(&presentation)
                .with_context(|| format!("--presentation: cannot read {}", presentation.display()))?;
            let mut pres = FullPresentation::from_json(&text).context("--presentation")?;
            let external = oracle.as_deref().map(ExternalOracle::new);
            if let Some(len) = complete {
                pres = match &external {
                    Some(o) => complete_to_fullness(pres.generators(), len, o)?,
                    None => complete_to_fullness(pres.generators(), len, &CosetOracle::new(&pres, coset_bound)?)?,
                };
                eprintln!("completed to {} relators of length at most {len}", pres.relators().len());
            }
            let fallback;
            let oracle: &dyn WordOracle = match &external {
                Some(o) => o,
                None => {
                    fallback = default_oracle(&pres, coset_bound)?;
                    &fallback
                }
            };
            let verdict = decide_planar(&pres, oracle)?;
            emit_json(&serde_json::to_value(&verdict)?, out.as_deref())?;
            let r = verdict.report();
            eprintln!(
                "{}: {} candidates, search space {}",
                if verdict.is_yes() { "planar" } else { "not planar" },
                r.candidates,
                r.search_space
            );
            return Ok(if verdict.is_yes() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
