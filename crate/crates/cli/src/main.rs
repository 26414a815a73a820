use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mfq::catalog::Catalog;
use mfq::classical::{classical_order, standard_generators, FamilySpec};
use mfq::congruence::{crt_check, reduction_kernel_check, theorem1_minimal_chain, ModKind};
use mfq::fuchsian::{find_epimorphisms, kernel_genus, Signature};
use mfq::group::{
    enumerate_group, find_subgroup_by_type, sampled_spectrum, EnumeratedGroup, GenSet, SubgroupSearch, TargetSpec,
};
use mfq::replay::{self, ReplayOptions, Report};
use serde_json::Value;

/// `println!` that ignores a closed stdout (for example when piped into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// Exit code for malformed input or configuration.
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "mfq", version, about = "Finite quotient computations for mapping class groups of genus 3 and 4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact order of a group given by a spec such as `psp(6,2)`.
    Order { spec: String },
    /// Element-order spectrum, exact by enumeration or sampled.
    Spectrum {
        spec: String,
        /// Sample this many random elements instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Enumeration cap.
        #[arg(long, default_value_t = 5_000_000)]
        cap: u64,
    },
    /// Fuchsian signature computations.
    Signature {
        #[command(subcommand)]
        command: SignatureCommand,
    },
    /// Epimorphisms from Fuchsian groups.
    Epi {
        #[command(subcommand)]
        command: EpiCommand,
    },
    /// Injected-subgroup ledger, recomputed.
    Ledger {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Replay a quotient-exclusion pipeline.
    Replay {
        #[arg(value_enum)]
        pipeline: Pipeline,
        #[command(flatten)]
        opts: ReplayArgs,
    },
    /// Congruence subgroup checks.
    Congruence {
        #[command(subcommand)]
        command: CongruenceCommand,
    },
}

#[derive(Subcommand)]
enum SignatureCommand {
    /// Signature of the preimage of a subgroup under each epimorphism class.
    Preimage {
        #[arg(long)]
        sig: String,
        #[arg(long)]
        group: String,
        /// `z(n)` for the cyclic group generated by the first element of order n,
        /// or one of `q8`, `s(5)`, `psl(2,7)`.
        #[arg(long)]
        subgroup: String,
    },
}

#[derive(Subcommand)]
enum EpiCommand {
    /// Surface-kernel epimorphisms up to conjugacy.
    Find {
        #[arg(long)]
        sig: String,
        #[arg(long)]
        group: String,
        /// Allow elliptic images whose order properly divides the period.
        #[arg(long)]
        non_surface: bool,
        /// List every epimorphism rather than one per conjugacy class.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pipeline {
    G3,
    G4,
    #[value(name = "frontier-g3")]
    FrontierG3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ReplayArgs {
    /// Catalog file; the embedded catalog when omitted.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
}

#[derive(Args)]
struct CongruenceArgs {
    #[arg(long = "type")]
    kind: ModKind,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum CongruenceCommand {
    /// Reduction to prime-power factors is a bijection.
    Crt {
        #[command(flatten)]
        common: CongruenceArgs,
        #[arg(long)]
        k: u32,
    },
    /// Kernel of reduction mod p from Z/p^r.
    Kernel {
        #[command(flatten)]
        common: CongruenceArgs,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: u32,
    },
    /// Reduction from Z/p^2 to F_p and simplicity of the projective image.
    Chain {
        #[command(flatten)]
        common: CongruenceArgs,
        #[arg(long)]
        p: u32,
    },
}

/// Failure with an exit code: 1 for a mathematical discrepancy, 2 for input.
struct Failure(u8, String);

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure(INPUT_ERROR, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Order { spec } => {
            let family = parse_spec(&spec)?;
            say!("{}", classical_order(&family).map_err(Failure::input)?);
            Ok(0)
        }
        Command::Spectrum { spec, sample, seed, cap } => spectrum(&spec, sample, seed, cap),
        Command::Signature { command: SignatureCommand::Preimage { sig, group, subgroup } } => {
            preimage(&sig, &group, &subgroup)
        }
        Command::Epi { command: EpiCommand::Find { sig, group, non_surface, all } } => {
            epi_find(&sig, &group, !non_surface, !all)
        }
        Command::Ledger { genus, format } => {
            let entries = replay::injected_subgroup_ledger(genus).map_err(Failure::input)?;
            match format {
                Format::Text => emit(&replay::ledger_text(&entries)),
                Format::Json => say!("{}", serde_json::to_string_pretty(&entries).expect("serializable")),
            }
            Ok(if entries.iter().all(|e| e.verified) { 0 } else { 1 })
        }
        Command::Replay { pipeline, opts } => run_replay(pipeline, &opts),
        Command::Congruence { command } => congruence(command),
    }
}

fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

/// A family spec, or a catalog name such as `O8-(2)`.
fn parse_spec(spec: &str) -> Result<FamilySpec, Failure> {
    spec.parse::<FamilySpec>().or_else(|e| {
        Catalog::default_catalog().get(spec).map(|r| r.family.clone()).ok_or_else(|| Failure::input(e))
    })
}

/// Family generators, else the catalog's generators for that name.
fn generators(spec: &str) -> Result<GenSet, Failure> {
    let family = parse_spec(spec)?;
    standard_generators(&family).or_else(|e| {
        let catalog = Catalog::default_catalog();
        catalog.get(spec).and_then(|r| r.generator_set()).ok_or_else(|| Failure::input(e))
    })
}

fn build_group(spec: &str, cap: u64) -> Result<EnumeratedGroup, Failure> {
    enumerate_group(&generators(spec)?, cap).map_err(Failure::input)
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn spectrum(spec: &str, sample: Option<usize>, seed: u64, cap: u64) -> Result<u8, Failure> {
    match sample {
        Some(n) => {
            let gens = generators(spec)?;
            let s = sampled_spectrum(&gens, n, seed, 1 << 20).map_err(Failure::input)?;
            say!("sampled ({n} elements, seed {seed}): {}", join(&s.orders));
        }
        None => {
            let g = build_group(spec, cap)?;
            say!("order: {}", g.order());
            say!("exact: {}", join(&g.spectrum()));
        }
    }
    Ok(0)
}

fn subgroup_gens(g: &EnumeratedGroup, subgroup: &str) -> Result<GenSet, Failure> {
    let family = parse_spec(subgroup)?;
    let target = match family {
        FamilySpec::Cyclic(n) => {
            let i = g
                .element_orders()
                .iter()
                .position(|&o| o == n)
                .ok_or_else(|| Failure(1, format!("no element of order {n}")))?;
            return GenSet::new(subgroup, vec![g.element(i as u32)]).map_err(Failure::input);
        }
        FamilySpec::Quaternion => TargetSpec::Q8,
        FamilySpec::Symmetric(5) => TargetSpec::S5,
        FamilySpec::PSL { n: 2, q: 7 } => TargetSpec::Psl27,
        _ => return Err(Failure::input(format!("unsupported subgroup {subgroup}"))),
    };
    match find_subgroup_by_type(g, target, 50_000_000) {
        SubgroupSearch::Found(w) => GenSet::new(subgroup, w.generators).map_err(Failure::input),
        SubgroupSearch::Absent { .. } => Err(Failure(1, format!("no subgroup {subgroup}"))),
        SubgroupSearch::Indeterminate { .. } => Err(Failure::input(format!("search for {subgroup} ran out of budget"))),
    }
}

fn preimage(sig: &str, group: &str, subgroup: &str) -> Result<u8, Failure> {
    let sig: Signature = sig.parse().map_err(Failure::input)?;
    let g = build_group(group, 5_000_000)?;
    let h = subgroup_gens(&g, subgroup)?;
    let epis = find_epimorphisms(&sig, &g, true, true).map_err(Failure::input)?;
    if epis.is_empty() {
        say!("no surface-kernel epimorphism {sig} -> {group}");
        return Ok(1);
    }
    if let Ok(genus) = kernel_genus(&sig, g.order()) {
        say!("kernel genus: {genus}");
    }
    for (i, e) in epis.iter().enumerate() {
        let pre = e.preimage_signature(&h).map_err(Failure::input)?;
        let (index, mult) = e.check_measure_multiplicativity(&h).map_err(Failure::input)?;
        let images: Vec<String> = e.image_elements().iter().map(|x| x.to_string()).collect();
        say!("epimorphism {i}: [{}]", images.join(", "));
        say!("  preimage of {subgroup} (index {index}): {pre}{}", if mult { "" } else { "  MEASURE MISMATCH" });
    }
    Ok(0)
}

fn epi_find(sig: &str, group: &str, surface: bool, up_to_conjugacy: bool) -> Result<u8, Failure> {
    let sig: Signature = sig.parse().map_err(Failure::input)?;
    let g = build_group(group, 5_000_000)?;
    let epis = find_epimorphisms(&sig, &g, surface, up_to_conjugacy).map_err(Failure::input)?;
    let what = if up_to_conjugacy { "conjugacy classes of epimorphisms" } else { "epimorphisms" };
    say!("{} {what} {sig} -> {group}", epis.len());
    if let Ok(genus) = kernel_genus(&sig, g.order()) {
        say!("kernel genus: {genus}");
    }
    for e in &epis {
        let images: Vec<String> = e.image_elements().iter().map(|x| x.to_string()).collect();
        say!("[{}]", images.join(", "));
    }
    Ok(if epis.is_empty() { 1 } else { 0 })
}

fn run_replay(pipeline: Pipeline, args: &ReplayArgs) -> Result<u8, Failure> {
    let catalog = match &args.catalog {
        Some(path) => Catalog::load(path).map_err(Failure::input)?,
        None => Catalog::default_catalog(),
    };
    let opts = ReplayOptions { seed: args.seed, samples: args.samples, ..ReplayOptions::default() };
    let report: Report = match pipeline {
        Pipeline::G3 => replay::replay_g3(&catalog, opts),
        Pipeline::G4 => replay::replay_g4(&catalog, opts),
        Pipeline::FrontierG3 => replay::frontier_g3(&catalog, opts),
    }
    .map_err(Failure::input)?;
    match args.format {
        Format::Text => emit(&report.to_text()),
        Format::Json => emit(&report.to_json()),
    }
    Ok(report.exit_code() as u8)
}

fn congruence(command: CongruenceCommand) -> Result<u8, Failure> {
    let (value, passed, format) = match command {
        CongruenceCommand::Crt { common, k } => {
            let r = crt_check(common.kind, common.n, k).map_err(Failure::input)?;
            (serde_json::to_value(&r), r.passed, common.format)
        }
        CongruenceCommand::Kernel { common, p, r } => {
            let rep = reduction_kernel_check(common.kind, common.n, p, r).map_err(Failure::input)?;
            (serde_json::to_value(&rep), rep.passed, common.format)
        }
        CongruenceCommand::Chain { common, p } => {
            let r = theorem1_minimal_chain(common.kind, common.n, p).map_err(Failure::input)?;
            (serde_json::to_value(&r), r.passed, common.format)
        }
    };
    let value = value.expect("serializable");
    match format {
        Format::Json => say!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
        Format::Text => print_text(&value, ""),
    }
    Ok(if passed { 0 } else { 1 })
}

fn print_text(value: &Value, indent: &str) {
    let Value::Object(map) = value else { return };
    for (k, v) in map {
        match v {
            Value::Object(_) => {
                say!("{indent}{k}:");
                print_text(v, &format!("{indent}  "));
            }
            Value::Array(items) if items.iter().any(|x| x.is_object()) => {
                say!("{indent}{k}:");
                for item in items {
                    say!("{indent}  -");
                    print_text(item, &format!("{indent}    "));
                }
            }
            Value::String(s) => say!("{indent}{k}: {s}"),
            other => say!("{indent}{k}: {other}"),
        }
    }
}
