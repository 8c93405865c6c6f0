use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modline::catalog;
use modline::fields::{is_representable_with, matroid_from_matrix, MatrixDocument, MatrixRep};
use modline::matroid::MatroidDocument;
use modline::minors::minor_search;
use modline::pool::{default_spec, generate_pool, PoolEntry, PoolSpec};
use modline::search::{Budget, Outcome, DEFAULT_BUDGET};
use modline::verify::{exit_code, run_claim, Claim, ClaimSummary, VerifyConfig};
use modline::{Matroid, Subset};

/// Exit status for unreadable input or invalid arguments.
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "modline",
    version,
    about = "Matroid toolkit for modular lines, minors and representability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a catalog matroid as JSON, or list the catalog names.
    Cat { name: Option<String> },
    /// Build an instance pool and stream it as JSON lines.
    Pool {
        /// Pool spec file, or `default` for the built-in verification pool.
        spec: String,
        /// Print the spec as JSON instead of building the pool.
        #[arg(long)]
        show_spec: bool,
    },
    /// Search a host for a minor isomorphic to a pattern.
    /// Exit 0 found, 1 absent, 2 budget exceeded.
    Minor {
        /// Catalog name or JSON file (matroid, pool record, or matrix).
        #[arg(long)]
        host: String,
        #[arg(long)]
        pattern: String,
        /// Host labels the minor must keep, comma separated.
        #[arg(long = "use", value_delimiter = ',')]
        must_use: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Search for a representation over GF(q).
    /// Exit 0 found, 1 absent, 2 budget exceeded.
    Represent {
        matroid: String,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check a claim (or `all`) over a pool.
    /// Exit 0 all pass, 1 a failure, 2 budget exceeded, 3 too few
    /// non-vacuous instances.
    Verify {
        claim: String,
        /// Pool spec file; the built-in pool when omitted.
        #[arg(long)]
        pool: Option<PathBuf>,
        /// Write every report as a JSON line to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Node ceiling per search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 3)]
        min_instances: usize,
        /// Sampled triples for the linking check.
        #[arg(long, default_value_t = 600)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

type Failure = Box<dyn std::error::Error>;

fn load_matroid(arg: &str) -> Result<Matroid, Failure> {
    let path = Path::new(arg);
    if !path.exists() {
        return Ok(catalog::by_name(arg)?);
    }
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("entries").is_some() {
        let doc: MatrixDocument = serde_json::from_value(value)?;
        return Ok(matroid_from_matrix(&MatrixRep::from_document(&doc)?)?);
    }
    let doc: MatroidDocument = serde_json::from_value(value)?;
    Ok(Matroid::from_document(&doc)?)
}

fn load_spec(arg: &str) -> Result<PoolSpec, Failure> {
    if arg == "default" && !Path::new(arg).exists() {
        return Ok(default_spec());
    }
    Ok(PoolSpec::from_json(&fs::read_to_string(arg)?)?)
}

fn outcome_code<T>(out: &Outcome<T>) -> u8 {
    match out {
        Outcome::Found(_) => 0,
        Outcome::Absent => 1,
        Outcome::BudgetExceeded => 2,
    }
}

fn cat(name: Option<String>) -> Result<u8, Failure> {
    let Some(name) = name else {
        let mut out = io::stdout().lock();
        for n in catalog::NAMES {
            writeln!(out, "{n}")?;
        }
        return Ok(0);
    };
    let m = catalog::by_name(&name)?;
    println!("{}", serde_json::to_string_pretty(&m.to_document(&name))?);
    Ok(0)
}

fn pool(spec: &str, show_spec: bool) -> Result<u8, Failure> {
    let spec = load_spec(spec)?;
    if show_spec {
        println!("{}", spec.to_json());
        return Ok(0);
    }
    let entries = generate_pool(&spec)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for (i, e) in entries.iter().enumerate() {
        writeln!(out, "{}", serde_json::to_string(&e.record(i))?)?;
    }
    out.flush()?;
    Ok(0)
}

fn minor(host: &str, pattern: &str, must_use: &[String], budget: u64) -> Result<u8, Failure> {
    let host = load_matroid(host)?;
    let pattern = load_matroid(pattern)?;
    let mut keep = Subset::EMPTY;
    for label in must_use {
        let i = host
            .ground()
            .index_of(label)
            .map_err(|_| modline::Error::MustUseNotInHost(label.clone()))?;
        keep = keep.with(i);
    }
    let out = minor_search(&host, &pattern, keep, &mut Budget::new(budget))?;
    let json = match &out {
        Outcome::Found(w) => serde_json::json!({
            "found": true,
            "deleted": w.deleted_labels(&host),
            "contracted": w.contracted_labels(&host),
            "map": w.map,
        }),
        Outcome::Absent => serde_json::json!({ "found": false }),
        Outcome::BudgetExceeded => serde_json::json!({ "found": null, "budget": budget }),
    };
    println!("{}", serde_json::to_string_pretty(&json)?);
    Ok(outcome_code(&out))
}

fn represent(matroid: &str, q: usize, budget: u64) -> Result<u8, Failure> {
    let m = load_matroid(matroid)?;
    let out = is_representable_with(&m, q, &mut Budget::new(budget))?;
    match &out {
        Outcome::Found(rep) => println!("{}", serde_json::to_string_pretty(&rep.to_document())?),
        Outcome::Absent => println!("{{\"representable\": false}}"),
        Outcome::BudgetExceeded => println!("{{\"representable\": null}}"),
    }
    Ok(outcome_code(&out))
}

fn verify(
    claim: &str,
    pool: Option<&Path>,
    report: Option<&Path>,
    config: VerifyConfig,
) -> Result<u8, Failure> {
    let claims: Vec<Claim> = if claim == "all" {
        Claim::ALL.to_vec()
    } else {
        vec![claim.parse()?]
    };
    let spec = match pool {
        Some(p) => PoolSpec::from_json(&fs::read_to_string(p)?)?,
        None => default_spec(),
    };
    let entries: Vec<PoolEntry> = generate_pool(&spec)?;
    let mut sink = match report {
        Some(p) => Some(BufWriter::new(fs::File::create(p)?)),
        None => None,
    };
    let mut summaries = Vec::new();
    println!(
        "{:<24} {:>6} {:>6} {:>8} {:>7}",
        "claim", "pass", "fail", "vacuous", "budget"
    );
    for c in claims {
        let reports = run_claim(c, &entries, &config);
        if let Some(w) = sink.as_mut() {
            for r in &reports {
                writeln!(w, "{}", serde_json::to_string(r)?)?;
            }
        }
        let s = ClaimSummary::of(c, &reports);
        println!(
            "{:<24} {:>6} {:>6} {:>8} {:>7}",
            c.id(),
            s.pass,
            s.fail,
            s.vacuous,
            s.budget
        );
        summaries.push(s);
    }
    if let Some(mut w) = sink {
        w.flush()?;
    }
    Ok(exit_code(&summaries, config.min_instances) as u8)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Cat { name } => cat(name),
        Command::Pool { spec, show_spec } => pool(&spec, show_spec),
        Command::Minor {
            host,
            pattern,
            must_use,
            budget,
        } => minor(&host, &pattern, &must_use, budget),
        Command::Represent { matroid, q, budget } => represent(&matroid, q, budget),
        Command::Verify {
            claim,
            pool,
            report,
            budget,
            jobs,
            min_instances,
            samples,
            seed,
        } => verify(
            &claim,
            pool.as_deref(),
            report.as_deref(),
            VerifyConfig {
                budget,
                min_instances,
                jobs,
                linking_samples: samples,
                seed,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
