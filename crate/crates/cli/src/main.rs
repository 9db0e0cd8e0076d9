//! `cycbase`: cycle bases and controlling subgroups of permutation groups.
//!
//! Exit codes: 0 success (an empty base included), 2 result not certified
//! maximal, 3 input error, 1 internal failure or failed self-test.

mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cycbase::control::control_subgroup;
use cycbase::corpus::generate_corpus;
use cycbase::cycle_base::{cycle_base_with, CycleBaseOptions, DEFAULT_ENUM_BOUND};
use cycbase::io::{build_certificate, GoldenCorpus, GroupFile, SCHEMA};
use cycbase::oracle::oracle_cyc;
use cycbase::{Error, Group, Perm};

const EXIT_UNVERIFIED: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "cycbase", version, about = "Cycle bases of permutation groups")]
struct Cli {
    /// Worker threads for sampling and corpus fan-out; never changes results.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Group file (JSON with "degree" and "generators").
    path: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit a JSON certificate instead of text.
    #[arg(long)]
    json: bool,
    /// Compare with the brute-force oracle when |K| is within the cap.
    #[arg(long)]
    verify: bool,
    /// Largest group order that is enumerated (M when harvesting, K for the oracle).
    #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
    enum_cap: u64,
    /// Random draws in M when it is too large to enumerate (default 200·n·φ(n)).
    #[arg(long)]
    sample_budget: Option<u64>,
    /// Record the wall-clock time in the certificate.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// One full cycle per conjugacy class of regular cyclic subgroups.
    CycleBase(RunArgs),
    /// Pairwise nonequivalent circulant representations, given Aut(X).
    Circulant(RunArgs),
    /// The solvable controlling subgroup M and the recursion trace.
    Control {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force conjugacy classes of regular cyclic subgroups.
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
        cap: u64,
    },
    /// Runs the invariant suite over a corpus profile.
    Selftest {
        #[arg(long, default_value = "tiny")]
        profile: String,
        /// Golden file to compare oracle results against.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Regenerates a golden corpus file from the oracle.
    Golden {
        #[arg(long, default_value = "tiny")]
        profile: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
        cap: u64,
    },
}

fn load(path: &Path) -> Result<(GroupFile, Group), ExitCode> {
    GroupFile::read(path)
        .and_then(|f| f.group().map(|g| (f, g)))
        .map_err(|e| {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_INPUT)
        })
}

fn internal(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::FAILURE
}

fn run_cycle_base(args: &RunArgs, threads: usize, circulant: bool) -> Result<ExitCode, ExitCode> {
    let (file, k) = load(&args.path)?;
    let opts = CycleBaseOptions {
        seed: args.seed,
        enum_bound: args.enum_cap,
        sample_budget: args.sample_budget,
        threads,
    };
    let mut run = cycle_base_with(&k, &opts).map_err(internal)?;
    if args.verify && !run.result.verified {
        match cycbase::cycle_base::confirm_with_oracle(&k, &mut run.result, args.enum_cap) {
            Ok(_) | Err(Error::Cap { .. }) => {}
            Err(e) => return Err(internal(e)),
        }
    }
    let oracle_cap = args.verify.then_some(args.enum_cap);
    let mut cert = build_certificate(&k, file.name.clone(), args.seed, &run.control, &run.result, oracle_cap)
        .map_err(internal)?;
    if args.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        cert.timestamp = Some(format!("{secs}"));
    }
    if args.json && circulant {
        let reps: Vec<serde_json::Value> = run
            .result
            .base
            .iter()
            .map(|c| {
                serde_json::json!({
                    "cycle": c.to_cycle_string(),
                    "labelling": circulant_labelling(c),
                })
            })
            .collect();
        let out = serde_json::json!({
            "schema": SCHEMA,
            "input_hash": cert.input_hash,
            "verified": run.result.verified,
            "representations": reps,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json value serializes"));
    } else if args.json {
        print!("{}", cert.to_json());
    } else {
        println!(
            "# degree {}, |K| = {}, |M| = {}, {} class{}, {}",
            k.degree(),
            k.order(),
            run.control.m.order(),
            run.result.base.len(),
            if run.result.base.len() == 1 { "" } else { "es" },
            if run.result.verified { "verified" } else { "unverified" }
        );
        for c in &cert.base_cycles {
            if circulant {
                let c = Perm::parse_cycles(c, k.degree()).expect("own output parses");
                println!("{}", circulant_labelling(&c).iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
            } else {
                println!("{c}");
            }
        }
        for check in cert.checks.iter().filter(|c| !c.passed) {
            eprintln!("check failed: {}", check.name);
        }
    }
    if !cert.passed() {
        return Ok(ExitCode::FAILURE);
    }
    Ok(if run.result.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNVERIFIED)
    })
}

/// Points in cyclic order `1, 1^c, 1^{c^2}, …`: point `i` of the circulant
/// labelling is the `i`-th entry.
fn circulant_labelling(c: &Perm) -> Vec<usize> {
    let mut out = vec![1];
    let mut x = c.image(0);
    while x != 0 {
        out.push(x + 1);
        x = c.image(x);
    }
    out
}

fn run_control(path: &Path, seed: u64, json: bool) -> Result<ExitCode, ExitCode> {
    let (_, k) = load(path)?;
    let res = control_subgroup(&k, seed).map_err(internal)?;
    let summary = cycbase::io::ControlSummary::new(&res);
    if json {
        let out = serde_json::json!({ "schema": SCHEMA, "seed": seed, "control": summary });
        println!("{}", serde_json::to_string_pretty(&out).expect("json value serializes"));
        return Ok(ExitCode::SUCCESS);
    }
    println!("conclusion: {:?}", res.conclusion);
    println!("order: {}", summary.order);
    println!("derived series: {}", summary.derived_series.join(" > "));
    println!("generators:");
    for g in &summary.generators {
        println!("  {g}");
    }
    println!("trace:");
    for t in &res.trace {
        println!(
            "  depth {} degree {} blocks {}x{} {:?}",
            t.depth, t.degree, t.block_count, t.block_size, t.branch
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(path: &Path, cap: u64) -> Result<ExitCode, ExitCode> {
    let (_, k) = load(path)?;
    let classes = oracle_cyc(&k, cap).map_err(|e| match e {
        Error::Cap { .. } => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
        e => internal(e),
    })?;
    println!("{} classes", classes.len());
    for c in &classes {
        println!("{}  ({} subgroups)", c.representative.to_cycle_string(), c.subgroups.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_golden(profile: &str, out: &Path, cap: u64) -> Result<ExitCode, ExitCode> {
    let corpus = generate_corpus(profile).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_INPUT)
    })?;
    let golden = GoldenCorpus::compute(&corpus, cap).map_err(internal)?;
    std::fs::write(out, golden.to_json()).map_err(|e| internal(e.into()))?;
    eprintln!("wrote {} entries to {}", golden.entries.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.max(1);
    let result = match &cli.command {
        Command::CycleBase(args) => run_cycle_base(args, threads, false),
        Command::Circulant(args) => run_cycle_base(args, threads, true),
        Command::Control { path, seed, json } => run_control(path, *seed, *json),
        Command::Oracle { path, cap } => run_oracle(path, *cap),
        Command::Selftest { profile, golden } => selftest::run(profile, golden.as_deref(), threads),
        Command::Golden { profile, out, cap } => run_golden(profile, out, *cap),
    };
    result.unwrap_or_else(|code| code)
}
