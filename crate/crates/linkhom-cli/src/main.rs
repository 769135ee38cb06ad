//! `linkhom` — exact abelian link observables and 3-manifold invariants
//! from the command line.
//!
//! Subcommands: `observable`, `invariant`, `homology`, `catalog`,
//! `kirby check`, `reciprocity`. Input files are UTF-8 JSON presentation
//! files; see the repository README for the format. Exit codes: 0 on
//! success, 1 on a domain error (undefined observable, enumeration bound,
//! invalid input file, failed invariance check), 2 on a usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use linkhom::homology::{determinant, first_homology, smith_normal_form};
use linkhom::invariants::{
    connected_sum, genus_times_circle, lens_presentation, reciprocity_check,
    rt_invariant_with_workers, signature, subgroup_invariant_with_workers,
};
use linkhom::io::{CyclotomicJson, PresentationFile};
use linkhom::kirby::certify_random_moves;
use linkhom::observables::{
    observable_s3, observable_split_homology_sphere, observable_surgery_with_workers,
    push_to_sphere,
};
use linkhom::{AmbientLinkPresentation, Coupling, CyclotomicNumber};

const SCHEMA_VERSION: u32 = 1;

/// Environment variable giving the default worker count for colour-state
/// enumeration; `--threads` overrides it, and 0 means "all cores".
const THREADS_ENV: &str = "LINKHOM_THREADS";

#[derive(Parser)]
#[command(
    name = "linkhom",
    version,
    about = "Exact abelian link observables and 3-manifold invariants",
    after_help = "Input files are JSON presentation files; see the README for the format."
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Worker threads for colour enumeration (0 = all cores). Defaults to
    /// the LINKHOM_THREADS environment variable, then to 1.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expectation value of a coloured link, in the sphere or in a
    /// surgery-presented manifold.
    Observable(ObservableArgs),
    /// Manifold invariant of a surgery presentation.
    Invariant(InvariantArgs),
    /// First homology of a surgery presentation.
    Homology(HomologyArgs),
    /// Emit standard surgery presentations as presentation files.
    Catalog {
        #[command(subcommand)]
        entry: CatalogEntry,
    },
    /// Kirby-move tooling.
    Kirby {
        #[command(subcommand)]
        action: KirbyAction,
    },
    /// Verify the Gauss-sum reciprocity identity for a parameter triple.
    Reciprocity {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
    },
}

#[derive(Args)]
struct ObservableArgs {
    /// Presentation file (link with optional surgery instructions).
    #[arg(long, value_name = "FILE")]
    link: PathBuf,

    /// Coupling constant.
    #[arg(short, long)]
    k: i64,

    /// Use the closed form available for split +1/-1 surgery blocks
    /// instead of enumerating colour states.
    #[arg(long, conflicts_with = "push_to_sphere")]
    closed_form: bool,

    /// Push the link to the sphere (the presented manifold must leave the
    /// link homologically trivial mod 2k) and evaluate it there.
    #[arg(long)]
    push_to_sphere: bool,
}

#[derive(Args)]
struct InvariantArgs {
    /// Presentation file with a surgery_matrix.
    #[arg(long, value_name = "FILE")]
    surgery: PathBuf,

    /// Coupling constant.
    #[arg(short, long)]
    k: i64,

    /// Order of the colour subgroup to restrict to (must divide 2k);
    /// omitted means the full invariant.
    #[arg(short = 'p', long, value_name = "P")]
    subgroup: Option<i64>,
}

#[derive(Args)]
struct HomologyArgs {
    /// Presentation file with a surgery_matrix.
    #[arg(long, value_name = "FILE")]
    surgery: PathBuf,
}

#[derive(Subcommand)]
enum CatalogEntry {
    /// Lens space L(p, r): the linking chain of the negative continued
    /// fraction expansion of p/r.
    Lens { p: i64, r: i64 },
    /// Product of a genus-g surface with the circle: the zero matrix of
    /// size 2g + 1.
    GenusS1 { g: usize },
    /// Connected sum of two presentations (block diagonal of their
    /// surgery matrices).
    ConnectedSum {
        first: PathBuf,
        second: PathBuf,
    },
}

#[derive(Subcommand)]
enum KirbyAction {
    /// Apply a pseudo-random move sequence and verify that every
    /// invariant and observable is unchanged.
    Check(KirbyCheckArgs),
}

#[derive(Args)]
struct KirbyCheckArgs {
    /// Presentation file.
    #[arg(long, value_name = "FILE")]
    surgery: PathBuf,

    /// Coupling constant.
    #[arg(short, long)]
    k: i64,

    /// Number of pseudo-random move draws.
    #[arg(long, default_value_t = 8)]
    moves: usize,

    /// Seed for the reproducible move generator.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Stabilizations stop once the presentation reaches this many
    /// surgery components.
    #[arg(long, default_value_t = 6)]
    max_components: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let workers = resolve_workers(cli.threads);
    let format = cli.format;
    match cli.command {
        Command::Observable(args) => observable_command(args, format, workers),
        Command::Invariant(args) => invariant_command(args, format, workers),
        Command::Homology(args) => homology_command(args, format),
        Command::Catalog { entry } => catalog_command(entry),
        Command::Kirby { action: KirbyAction::Check(args) } => kirby_check_command(args, format),
        Command::Reciprocity { a, b, c } => reciprocity_command(a, b, c, format),
    }
}

fn resolve_workers(flag: Option<usize>) -> usize {
    let requested = flag
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1);
    if requested == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        requested
    }
}

/// Reads and parses a presentation file, returning the presentation plus
/// the SHA-256 digest of the raw bytes for the report metadata.
fn load(path: &Path) -> Result<(AmbientLinkPresentation, String), String> {
    let bytes = std::fs::read(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| format!("{} is not UTF-8: {e}", path.display()))?;
    let presentation = linkhom::io::parse_presentation(text).map_err(|e| e.to_string())?;
    let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok((presentation, format!("sha256:{hex}")))
}

fn coupling(k: i64) -> Result<Coupling, String> {
    Coupling::new(k).map_err(|e| e.to_string())
}

fn approx_string(value: &CyclotomicNumber) -> String {
    let z = value.embed();
    format!("{:.9} {} {:.9}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
}

fn value_json(value: &CyclotomicNumber) -> serde_json::Value {
    let mut v = serde_json::to_value(CyclotomicJson::from_value(value))
        .expect("cyclotomic values serialize");
    v["display"] = json!(value.to_string());
    v
}

fn print_report(format: Format, report: serde_json::Value, text: String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Text => println!("{text}"),
    }
}

fn observable_command(
    args: ObservableArgs,
    format: Format,
    workers: usize,
) -> Result<ExitCode, String> {
    let started = Instant::now();
    let (presentation, digest) = load(&args.link)?;
    let k = coupling(args.k)?;

    let mut pushed: Option<linkhom::ColouredLinkingData> = None;
    let method;
    let value = if args.closed_form {
        method = "closed-form";
        observable_split_homology_sphere(&presentation, k).map_err(|e| e.to_string())?
    } else if args.push_to_sphere {
        method = "push-to-sphere";
        let link = push_to_sphere(&presentation, k).map_err(|e| e.to_string())?;
        let value = observable_s3(&link, k);
        pushed = Some(link);
        value
    } else if presentation.surgery_count() == 0 {
        method = "sphere";
        observable_s3(presentation.link(), k)
    } else {
        method = "surgery";
        observable_surgery_with_workers(&presentation, k, workers).map_err(|e| e.to_string())?
    };
    let value = value.require().map_err(|e| e.to_string())?;

    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "observable",
        "method": method,
        "input_digest": digest,
        "k": args.k,
        "surgery_components": presentation.surgery_count(),
        "link_components": presentation.link().size(),
        "exact": value_json(value),
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    let mut text = format!(
        "observable ({method}) at k = {}\nvalue  = {value}\napprox = {}",
        args.k,
        approx_string(value),
    );
    if let Some(link) = &pushed {
        report["pushed_link"] = json!({
            "matrix": link.matrix(),
            "colours": link.colours(),
        });
        text.push_str(&format!(
            "\npushed link: {} unit-colour components, self-linking total {}",
            link.size(),
            link.quadratic_form(),
        ));
    }
    print_report(format, report, text);
    Ok(ExitCode::SUCCESS)
}

fn invariant_command(
    args: InvariantArgs,
    format: Format,
    workers: usize,
) -> Result<ExitCode, String> {
    let started = Instant::now();
    let (presentation, digest) = load(&args.surgery)?;
    if presentation.surgery_count() == 0 && presentation.link().size() > 0 {
        return Err("input has no surgery_matrix; a link alone does not name a manifold".into());
    }
    let k = coupling(args.k)?;
    let b = presentation.surgery_matrix();

    let invariant = match args.subgroup {
        Some(p) => subgroup_invariant_with_workers(b, k, p, workers),
        None => rt_invariant_with_workers(b, k, workers),
    }
    .map_err(|e| e.to_string())?;
    let value = invariant.value();
    let triple = signature(b).map_err(|e| e.to_string())?;
    let homology = first_homology(b).map_err(|e| e.to_string())?;

    let name = match args.subgroup {
        Some(p) => format!("I_(p={p}, k={})", args.k),
        None => format!("I_{}", args.k),
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "invariant",
        "input_digest": digest,
        "k": args.k,
        "subgroup": args.subgroup,
        "surgery_components": presentation.surgery_count(),
        "exact": value_json(value),
        "signature": {
            "n_plus": triple.n_plus(),
            "n_minus": triple.n_minus(),
            "n_zero": triple.n_zero(),
        },
        "homology": homology.to_string(),
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    let text = format!(
        "{name} of {}-component presentation\nvalue  = {value}\napprox = {}\nsignature = ({}, {}, {})  [n+, n-, n0]\nhomology  = {homology}",
        presentation.surgery_count(),
        approx_string(value),
        triple.n_plus(),
        triple.n_minus(),
        triple.n_zero(),
    );
    print_report(format, report, text);
    Ok(ExitCode::SUCCESS)
}

fn homology_command(args: HomologyArgs, format: Format) -> Result<ExitCode, String> {
    let started = Instant::now();
    let (presentation, digest) = load(&args.surgery)?;
    if presentation.surgery_count() == 0 && presentation.link().size() > 0 {
        return Err("input has no surgery_matrix; a link alone does not name a manifold".into());
    }
    let b = presentation.surgery_matrix();
    let group = first_homology(b).map_err(|e| e.to_string())?;
    let factors: Vec<String> =
        smith_normal_form(b).diagonal().iter().map(|d| d.to_string()).collect();
    let det = determinant(b);

    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "homology",
        "input_digest": digest,
        "surgery_components": presentation.surgery_count(),
        "group": group.to_string(),
        "free_rank": group.free_rank(),
        "torsion": group.torsion().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "invariant_factors": factors,
        "determinant": det.to_string(),
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    let text = format!(
        "first homology of {}-component presentation\ngroup = {group}\ninvariant factors = [{}]\ndeterminant = {det}",
        presentation.surgery_count(),
        smith_normal_form(b).diagonal().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "),
    );
    print_report(format, report, text);
    Ok(ExitCode::SUCCESS)
}

fn catalog_command(entry: CatalogEntry) -> Result<ExitCode, String> {
    let surgery = match entry {
        CatalogEntry::Lens { p, r } => lens_presentation(p, r).map_err(|e| e.to_string())?,
        CatalogEntry::GenusS1 { g } => genus_times_circle(g),
        CatalogEntry::ConnectedSum { first, second } => {
            let (a, _) = load(&first)?;
            let (b, _) = load(&second)?;
            connected_sum(a.surgery_matrix(), b.surgery_matrix())
        }
    };
    let file = PresentationFile {
        surgery_matrix: Some(surgery),
        ..PresentationFile::default()
    };
    println!("{}", file.to_json());
    Ok(ExitCode::SUCCESS)
}

fn kirby_check_command(args: KirbyCheckArgs, format: Format) -> Result<ExitCode, String> {
    let started = Instant::now();
    let (presentation, digest) = load(&args.surgery)?;
    let k = coupling(args.k)?;
    let cert = certify_random_moves(&presentation, k, args.moves, args.seed, args.max_components)
        .map_err(|e| e.to_string())?;
    let passed = cert.passed();

    let side = |v: &Option<linkhom::ManifoldInvariant>| match v {
        Some(inv) => json!(inv.value().to_string()),
        None => serde_json::Value::Null,
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "kirby check",
        "input_digest": digest,
        "k": args.k,
        "seed": args.seed,
        "requested_moves": args.moves,
        "applied_moves": cert.moves.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "transformed_surgery_matrix": cert.transformed.surgery_matrix(),
        "rt": { "before": cert.rt_before.value().to_string(),
                "after": cert.rt_after.value().to_string() },
        "subgroup": cert.subgroup.iter().map(|(p, before, after)| json!({
            "p": p, "before": side(before), "after": side(after),
        })).collect::<Vec<_>>(),
        "homology": { "before": cert.homology_before.to_string(),
                      "after": cert.homology_after.to_string() },
        "determinant": { "before": cert.determinant_before.to_string(),
                         "after": cert.determinant_after.to_string() },
        "observable": { "before": cert.observable_before.to_string(),
                        "after": cert.observable_after.to_string() },
        "passed": passed,
        "timing_ms": started.elapsed().as_millis() as u64,
    });

    let mut text = format!(
        "applied {} of {} requested moves (seed {}):\n",
        cert.moves.len(),
        args.moves,
        args.seed,
    );
    for (i, mv) in cert.moves.iter().enumerate() {
        text.push_str(&format!("  {}. {mv}\n", i + 1));
    }
    text.push_str(&format!(
        "rt invariant: before = {}, after = {}\n",
        cert.rt_before.value(),
        cert.rt_after.value(),
    ));
    for (p, before, after) in &cert.subgroup {
        let show = |v: &Option<linkhom::ManifoldInvariant>| match v {
            Some(inv) => inv.value().to_string(),
            None => "undefined".to_string(),
        };
        text.push_str(&format!(
            "subgroup p={p}: before = {}, after = {}\n",
            show(before),
            show(after),
        ));
    }
    text.push_str(&format!(
        "homology: before = {}, after = {}\n|det|: before = {}, after = {}\nobservable: before = {}, after = {}\n{}",
        cert.homology_before,
        cert.homology_after,
        cert.determinant_before,
        cert.determinant_after,
        cert.observable_before,
        cert.observable_after,
        if passed { "PASS" } else { "FAIL" },
    ));
    print_report(format, report, text);
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn reciprocity_command(a: i64, b: i64, c: i64, format: Format) -> Result<ExitCode, String> {
    let holds = reciprocity_check(a, b, c).map_err(|e| e.to_string())?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "reciprocity",
        "a": a, "b": b, "c": c,
        "holds": holds,
    });
    let text = format!(
        "reciprocity for a = {a}, b = {b}, c = {c}: {}",
        if holds { "holds (exact)" } else { "FAILED" },
    );
    print_report(format, report, text);
    Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
