use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use polarscope::characterizer::{self, classify, expected_profile, is_quadric_pointset, parse_lemmas, Verdict};
use polarscope::io::{read_point_set, write_point_set};
use polarscope::polar::{construct, tits_ovoid};
use polarscope::profiles::{double_counts, profile};
use polarscope::{PointSet, PolarKind, PolarSpec, ProjSpace};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "polarscope",
    version,
    about = "Finite polar spaces and their intersection numbers"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true, env = "POLARSCOPE_THREADS")]
    threads: Option<usize>,
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Append wall-clock timing to reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the point set of a polar space or the Tits ovoid.
    Construct {
        #[arg(long, value_parser = parse_kind_or_tits)]
        kind: KindArg,
        #[arg(long)]
        dim: Option<usize>,
        /// Order of the ambient field (q² for Hermitian varieties).
        #[arg(long)]
        q: u32,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Intersection numbers of a point set with a family of flats.
    Profile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "1")]
        codim: CodimArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run counting lemmas for a polar-space kind against a point set.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: PolarKind,
        /// `all` or a comma-separated list of lemma names.
        #[arg(long, default_value = "all")]
        lemmas: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the dual of the tangent hyperplanes of a point set.
    Dualize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Hyperplane size defining tangency (default: from the matching kind).
        #[arg(long)]
        tangent_size: Option<u64>,
        #[arg(long, value_parser = parse_kind)]
        kind: Option<PolarKind>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Classify a point set against the classical polar spaces.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a known counterexample end to end.
    Counterexample {
        #[command(subcommand)]
        which: Counterexample,
    },
}

#[derive(Subcommand)]
enum Counterexample {
    /// The Suzuki-Tits ovoid: a quasi-quadric that is no quadric.
    Tits {
        #[arg(long, default_value_t = 8)]
        q: u32,
    },
}

#[derive(Clone, Copy)]
enum KindArg {
    Polar(PolarKind),
    Tits,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodimArg {
    #[value(name = "1")]
    Hyperplane,
    #[value(name = "2")]
    Two,
    Line,
}

fn parse_kind(s: &str) -> Result<PolarKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "q+" | "hyperbolic" => Ok(PolarKind::Hyperbolic),
        "q" | "parabolic" => Ok(PolarKind::Parabolic),
        "q-" | "elliptic" => Ok(PolarKind::Elliptic),
        "h" | "hermitian" => Ok(PolarKind::Hermitian),
        _ => Err(format!("unknown kind {s:?} (Q+, Q, Q-, H)")),
    }
}

fn parse_kind_or_tits(s: &str) -> Result<KindArg, String> {
    if s.eq_ignore_ascii_case("tits") {
        return Ok(KindArg::Tits);
    }
    parse_kind(s).map(KindArg::Polar)
}

/// Verification failures exit with 1, usage and input errors with 2.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<(ProjSpace, PointSet)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_point_set(&text).with_context(|| format!("{}", path.display()))
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

struct Clock {
    start: Instant,
    enabled: bool,
}

impl Clock {
    fn text(&self, body: &mut String) {
        if self.enabled {
            writeln!(body, "elapsed: {:.3}s", self.start.elapsed().as_secs_f64()).unwrap();
        }
    }

    fn json(&self, value: &mut serde_json::Value) {
        if self.enabled {
            value["elapsed_seconds"] = json!(self.start.elapsed().as_secs_f64());
        }
    }
}

fn to_json(mut value: serde_json::Value, clock: &Clock) -> String {
    clock.json(&mut value);
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<Outcome> {
    let clock = Clock {
        start: Instant::now(),
        enabled: cli.timing,
    };
    match &cli.command {
        Command::Construct { kind, dim, q, out } => {
            let (space, set, name) = match kind {
                KindArg::Tits => {
                    if dim.is_some_and(|d| d != 3) {
                        bail!("the Tits ovoid lives in PG(3,q)");
                    }
                    let (s, k) = tits_ovoid(*q)?;
                    (s, k, format!("tits_ovoid({q})"))
                }
                KindArg::Polar(kind) => {
                    let dim = dim.context("--dim is required")?;
                    let spec = PolarSpec::in_space(*kind, dim, *q)?;
                    let (s, k) = construct(&spec)?;
                    (s, k, spec.to_string())
                }
            };
            let text = write_point_set(&space, &set);
            match out {
                Some(p) => {
                    emit(Some(p), &text)?;
                    let mut msg = format!("{name}: {} points written to {}\n", set.len(), p.display());
                    clock.text(&mut msg);
                    print!("{msg}");
                }
                None => print!("{text}"),
            }
            Ok(Outcome::Pass)
        }
        Command::Profile { input, codim, out } => {
            let (space, set) = load(input)?;
            let c = match codim {
                CodimArg::Hyperplane => 1,
                CodimArg::Two => 2,
                CodimArg::Line => space.dim() - 1,
            };
            let prof = profile(&space, &set, c)?;
            let dcs = double_counts(&space, &prof, set.len() as u64);
            let ok = dcs.iter().all(|d| d.pass());
            let body = if cli.json {
                to_json(
                    json!({
                        "space": format!("PG({},{})", space.dim(), space.q()),
                        "points": set.len(),
                        "codim": c,
                        "histogram": prof.histogram,
                        "double_counts": dcs.iter().map(|d| json!({
                            "name": d.name, "lhs": d.lhs.to_string(), "rhs": d.rhs.to_string(), "pass": d.pass(),
                        })).collect::<Vec<_>>(),
                    }),
                    &clock,
                )
            } else {
                let mut b = format!(
                    "profile of {} points in PG({},{}) against flats of codimension {c}\nhistogram:\n",
                    set.len(),
                    space.dim(),
                    space.q()
                );
                for (size, count) in &prof.histogram {
                    writeln!(b, "  {size}: {count}").unwrap();
                }
                for d in &dcs {
                    writeln!(
                        b,
                        "double count of {}: {} = {} {}",
                        d.name,
                        d.lhs,
                        d.rhs,
                        if d.pass() { "PASS" } else { "FAIL" }
                    )
                    .unwrap();
                }
                clock.text(&mut b);
                b
            };
            emit(out.as_deref(), &body)?;
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Verify {
            input,
            kind,
            lemmas,
            out,
        } => {
            let lemmas = parse_lemmas(lemmas).map_err(anyhow::Error::msg)?;
            let (space, set) = load(input)?;
            let spec = PolarSpec::in_space(*kind, space.dim(), space.q())?;
            let report = characterizer::verify(&space, &set, &spec, &lemmas)?;
            let body = if cli.json {
                to_json(serde_json::to_value(&report)?, &clock)
            } else {
                let mut b = report.render_text();
                clock.text(&mut b);
                b
            };
            emit(out.as_deref(), &body)?;
            Ok(if report.pass() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Dualize {
            input,
            tangent_size,
            kind,
            out,
        } => {
            let (space, set) = load(input)?;
            let t = match (tangent_size, kind) {
                (Some(t), _) => *t,
                (None, Some(kind)) => {
                    expected_profile(&PolarSpec::in_space(*kind, space.dim(), space.q())?)?.tangent_size()
                }
                (None, None) => {
                    let c = classify(&space, &set)?;
                    let matched = c
                        .matched
                        .context("no polar space matches; pass --tangent-size or --kind")?;
                    characterizer::candidates(&space)
                        .into_iter()
                        .find(|e| e.spec.to_string() == matched)
                        .map(|e| e.tangent_size())
                        .context("matched kind disappeared")?
                }
            };
            let dual = characterizer::dual_tangent_set(&space, &set, t)?;
            let text = write_point_set(&space, &dual);
            match out {
                Some(p) => {
                    emit(Some(p), &text)?;
                    let mut msg = format!(
                        "{} tangent hyperplanes of size {t} written to {}\n",
                        dual.len(),
                        p.display()
                    );
                    clock.text(&mut msg);
                    print!("{msg}");
                }
                None => print!("{text}"),
            }
            Ok(Outcome::Pass)
        }
        Command::Classify { input, out } => {
            let (space, set) = load(input)?;
            let c = classify(&space, &set)?;
            let body = if cli.json {
                to_json(serde_json::to_value(&c)?, &clock)
            } else {
                let mut b = c.render_text();
                clock.text(&mut b);
                b
            };
            emit(out.as_deref(), &body)?;
            Ok(Outcome::Pass)
        }
        Command::Counterexample {
            which: Counterexample::Tits { q },
        } => {
            let (space, set) = tits_ovoid(*q)?;
            let c = classify(&space, &set)?;
            let quadric = is_quadric_pointset(&space, &set)?;
            let matched = c.matched.clone().unwrap_or_else(|| "no polar space".into());
            let headline = format!(
                "{}: profile matches {matched}, {}",
                c.verdict,
                if quadric {
                    "a quadratic form fits"
                } else {
                    "no quadratic form fits"
                }
            );
            let ok = matches!(c.verdict, Verdict::QuasiOnly(PolarKind::Elliptic)) && !quadric;
            let body = if cli.json {
                to_json(
                    json!({ "headline": headline, "is_quadric": quadric, "classification": c }),
                    &clock,
                )
            } else {
                let mut b = format!("{headline}\n{}", c.render_text());
                clock.text(&mut b);
                b
            };
            print!("{body}");
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
    }
}
