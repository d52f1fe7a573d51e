//! `agcodes`: builds codes, verifies their guarantees, emits bound tables and
//! replays manifests.
//!
//! Exit status: 0 on success, 2 for usage errors and violated
//! preconditions, 3 when a verified guarantee fails, 1 for anything else.
//! `AGCODES_THREADS` caps the worker thread count.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agcodes_core::bounds::{frontier_table, gv_crossing};
use agcodes_core::center::Strategy;
use agcodes_core::code::Code;
use agcodes_core::curve::{Curve, CurveKind, Divisor};
use agcodes_core::field::{field_of_order, self_test};
use agcodes_core::harness::{
    parse_spec, replay, run_build, sha256_hex, verify_averaging, verify_distance, BuildManifest, BuildSpec,
};
use agcodes_core::section::{asymptotic_count_estimate, SectionSpace};
use agcodes_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "agcodes",
    version,
    about = "Algebraic-geometry code constructions and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite field checks.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Curve data.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Evaluation codes of Riemann-Roch spaces.
    #[command(subcommand)]
    Goppa(GoppaCmd),
    /// Derivative-word codes with ball-centered selection.
    #[command(subcommand)]
    Xing(XingCmd),
    /// Rational sections of degree-zero divisors on P^1.
    #[command(subcommand)]
    Sections(SectionsCmd),
    /// Section codes with ball-centered selection over P^1(k).
    #[command(subcommand)]
    Combined(CombinedCmd),
    /// Asymptotic bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Recompute guarantees from scratch.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Rebuild artifacts from a manifest.
    #[command(subcommand)]
    Replay(ReplayCmd),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Field axioms on random triples and a^q = a on every element.
    Selftest {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1000)]
        triples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    P1,
    Hermitian,
}

impl From<CurveArg> for CurveKind {
    fn from(c: CurveArg) -> CurveKind {
        match c {
            CurveArg::P1 => CurveKind::ProjectiveLine,
            CurveArg::Hermitian => CurveKind::Hermitian,
        }
    }
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Genus, rational points and optionally a Riemann-Roch basis.
    Info {
        #[arg(long, value_enum, default_value = "p1")]
        curve: CurveArg,
        #[arg(long)]
        q: u64,
        /// Divisor such as `inf:3` or `pt(1):1;poly(1,1,1):-1`.
        #[arg(long)]
        divisor: Option<String>,
    },
}

#[derive(Args)]
struct Output {
    /// Code file to write.
    #[arg(long)]
    out: PathBuf,
    /// Manifest path; defaults to the code file with `.manifest.json` appended.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Skip the exact minimum distance computation.
    #[arg(long)]
    no_measure: bool,
}

#[derive(Args)]
struct Search {
    #[arg(long, value_enum, default_value = "exhaustive")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of center tuples tried by the random strategy.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Random,
    Greedy,
}

impl Search {
    fn strategy(&self) -> Strategy {
        match self.strategy {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Random => Strategy::Random {
                seed: self.seed,
                trials: self.trials,
            },
            StrategyArg::Greedy => Strategy::Greedy { seed: self.seed },
        }
    }
}

fn split_points(s: &Option<String>) -> Option<Vec<String>> {
    s.as_ref().map(|s| s.split(';').map(|p| p.trim().to_owned()).collect())
}

#[derive(Subcommand)]
enum GoppaCmd {
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "p1")]
        curve: CurveArg,
        #[arg(long)]
        divisor: String,
        /// Evaluation points separated by `;`, e.g. `0;1;inf` or `0,0;1,1`.
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum XingCmd {
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "p1")]
        curve: CurveArg,
        #[arg(long)]
        divisor: String,
        #[arg(long)]
        m: usize,
        /// Radii `s_0,...,s_(m-1)`.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<usize>,
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum SectionsCmd {
    /// Count (and optionally list) the sections of height at most h.
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "0")]
        divisor: String,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        list: bool,
    },
    /// Sample section pairs and compare total multiplicity with h + h'.
    Proposition {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "0")]
        divisor: String,
        /// Bound on h + h'.
        #[arg(long, default_value_t = 6)]
        max_total: usize,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The code of all twisted evaluations over P^1(k).
    Code {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "0")]
        divisor: String,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum CombinedCmd {
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "0")]
        divisor: String,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        s0: usize,
        #[arg(long)]
        d0: usize,
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// CSV of every bound family on the grid i/(grid+1).
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 99)]
        grid: usize,
        /// Derivative depth of the finite Xing column.
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether the Goppa line rises above the GV curve.
    Crossing {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Exact minimum distance of a code file against its claimed bound.
    Distance { code: PathBuf },
    /// The averaging identity for the spec recorded in a manifest (or a bare spec).
    Averaging { manifest: PathBuf },
}

#[derive(Subcommand)]
enum ReplayCmd {
    /// Rebuild the code file of a manifest and check its digest.
    Manifest {
        manifest: PathBuf,
        /// Where to write the rebuilt code; defaults to the recorded file name
        /// beside the manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Verification(_)) => 3,
            Failure::Core(Error::Io(_) | Error::Json(_)) | Failure::Io(_) => 1,
            Failure::Core(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn write_atomic(path: &Path, contents: &[u8]) -> CliResult {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("agcodes: {e}");
        std::process::exit(1);
    }
}

fn print(v: Value) {
    emit(&(serde_json::to_string_pretty(&v).expect("json value") + "\n"));
}

fn build(spec: BuildSpec, output: &Output) -> CliResult {
    let mut out = run_build(&spec, !output.no_measure)?;
    out.manifest.code_file = output
        .out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let manifest_path = output.manifest.clone().unwrap_or_else(|| {
        let mut p = output.out.clone().into_os_string();
        p.push(".manifest.json");
        PathBuf::from(p)
    });
    write_atomic(&output.out, out.text.as_bytes())?;
    write_atomic(&manifest_path, out.manifest.to_json()?.as_bytes())?;
    print(json!({
        "code_file": output.out,
        "manifest": manifest_path,
        "words": out.code.len(),
        "length": out.code.length(),
        "rate": out.code.rate(),
        "claimed_distance": out.manifest.claimed_distance,
        "measured_distance": out.manifest.measured_distance,
        "counts": out.manifest.counts,
    }));
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Field(FieldCmd::Selftest { q, triples, seed }) => {
            let field = field_of_order(q)?;
            let r = self_test(&field, triples, seed);
            print(json!({
                "q": q,
                "modulus": field.modulus(),
                "triples": r.triples,
                "axiom_failures": r.axiom_failures,
                "division_failures": r.division_failures,
                "frobenius_failures": r.frobenius_failures,
            }));
            if !r.passed() {
                return Err(Error::Verification(format!("GF({q}) failed its self-test")).into());
            }
        }
        Command::Curve(CurveCmd::Info { curve, q, divisor }) => {
            let field = field_of_order(q)?;
            let c = Curve::build(curve.into(), &field)?;
            let mut info = json!({
                "curve": c.kind().to_string(),
                "q": q,
                "q0": c.q0(),
                "genus": c.genus(),
                "points": c.points().len(),
            });
            if let Some(d) = divisor {
                let d = Divisor::parse(&field, &d)?;
                let basis = c.riemann_roch_basis(&d)?;
                info["divisor"] = json!(d.to_string());
                info["degree"] = json!(d.degree());
                info["dimension"] = json!(basis.len());
                info["basis"] = json!(basis.iter().map(|f| f.to_string()).collect::<Vec<_>>());
            }
            print(info);
        }
        Command::Goppa(GoppaCmd::Build {
            q,
            curve,
            divisor,
            points,
            output,
        }) => build(
            BuildSpec::Goppa {
                q,
                curve: curve.into(),
                divisor,
                points: split_points(&points),
            },
            &output,
        )?,
        Command::Xing(XingCmd::Build {
            q,
            curve,
            divisor,
            m,
            radii,
            points,
            search,
            output,
        }) => build(
            BuildSpec::Xing {
                q,
                curve: curve.into(),
                divisor,
                m,
                radii,
                points: split_points(&points),
                strategy: search.strategy(),
                centers: None,
            },
            &output,
        )?,
        Command::Sections(SectionsCmd::Enumerate { q, divisor, h, list }) => {
            let field = field_of_order(q)?;
            let space = SectionSpace::new(&field, &Divisor::parse(&field, &divisor)?)?;
            let sections = space.enumerate(h)?;
            let mut info = json!({
                "q": q,
                "divisor": divisor,
                "h": h,
                "count": sections.len(),
                "estimate_all_points": asymptotic_count_estimate(field.order(), field.order() as usize + 1, h),
            });
            if list {
                info["sections"] = json!(sections.iter().map(|f| f.to_string()).collect::<Vec<_>>());
            }
            print(info);
        }
        Command::Sections(SectionsCmd::Proposition {
            q,
            divisor,
            max_total,
            pairs,
            seed,
        }) => {
            let field = field_of_order(q)?;
            let space = SectionSpace::new(&field, &Divisor::parse(&field, &divisor)?)?;
            let r = space.proposition_check(max_total, pairs, seed)?;
            print(json!({
                "q": q,
                "divisor": divisor,
                "pairs": r.pairs,
                "max_total_height": r.max_total_height,
                "count_failures": r.count_failures,
                "identity_failures": r.identity_failures,
            }));
            if !r.holds() {
                return Err(Error::Verification("multiplicity count failed on sampled pairs".into()).into());
            }
        }
        Command::Sections(SectionsCmd::Code {
            q,
            divisor,
            h,
            points,
            output,
        }) => build(
            BuildSpec::Section {
                q,
                divisor,
                h,
                points: split_points(&points),
            },
            &output,
        )?,
        Command::Combined(CombinedCmd::Build {
            q,
            divisor,
            h,
            s0,
            d0,
            points,
            search,
            output,
        }) => build(
            BuildSpec::Combined {
                q,
                divisor,
                h,
                s0,
                d0,
                points: split_points(&points),
                strategy: search.strategy(),
                center: None,
            },
            &output,
        )?,
        Command::Bounds(BoundsCmd::Table { q, grid, m, out }) => {
            let table = frontier_table(q, grid, m)?;
            let csv = table.to_csv();
            match out {
                Some(path) => {
                    write_atomic(&path, csv.as_bytes())?;
                    print(json!({
                        "table": path,
                        "rows": table.deltas.len(),
                        "dv_ceiling": table.dv_ceiling,
                    }));
                }
                None => emit(&csv),
            }
        }
        Command::Bounds(BoundsCmd::Crossing { q }) => {
            let r = gv_crossing(q)?;
            print(json!({
                "q": q,
                "crosses": r.crosses,
                "argmax_delta": r.delta.to_sig(15),
                "max_entropy_minus_delta": r.max_gap.to_sig(15),
                "goppa_deficit": r.goppa_deficit.to_sig(15),
            }));
        }
        Command::Verify(VerifyCmd::Distance { code }) => {
            let code = Code::from_text(&fs::read_to_string(&code)?)?;
            let r = verify_distance(&code)?;
            print(json!({
                "words": r.words,
                "length": r.length,
                "measured_distance": r.measured.to_string(),
                "claimed_distance": r.claimed,
            }));
            if !r.holds() {
                return Err(Error::Verification(format!(
                    "measured distance {} is below the claimed {}",
                    r.measured,
                    r.claimed.unwrap_or_default()
                ))
                .into());
            }
        }
        Command::Verify(VerifyCmd::Averaging { manifest }) => {
            let text = fs::read_to_string(&manifest)?;
            let spec = match BuildManifest::from_json(&text) {
                Ok(m) => m.spec,
                Err(_) => parse_spec(&text)?,
            };
            let r = verify_averaging(&spec)?;
            print(json!({
                "items": r.items,
                "alphabet": r.alphabet,
                "n": r.n,
                "radii": r.radii,
                "direct_total": r.direct.to_string(),
                "predicted_total": r.predicted.to_string(),
                "ball_walk_total": r.walk.to_string(),
            }));
            if !r.holds() {
                return Err(Error::Verification("averaging identity failed".into()).into());
            }
        }
        Command::Replay(ReplayCmd::Manifest { manifest, out }) => {
            let m = BuildManifest::from_json(&fs::read_to_string(&manifest)?)?;
            let text = replay(&m)?;
            let path = out.unwrap_or_else(|| manifest.parent().unwrap_or(Path::new(".")).join(&m.code_file));
            write_atomic(&path, text.as_bytes())?;
            print(json!({
                "code_file": path,
                "code_sha256": sha256_hex(text.as_bytes()),
                "identical": true,
            }));
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("AGCODES_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("agcodes: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
