//! `rbx` — the verification harness for the Rota-Baxter operator catalog.
//!
//! Exit status is 0 iff the requested run is green (no failed checks, no
//! unmatched search hits, no diagnosed errors).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use rbx_core::campaign::{orbit_report, replay_conjugations, verify_catalog, CampaignReport};
use rbx_core::catalog::{Catalog, EntryKind};
use rbx_core::linalg::Scalar;
use rbx_core::morphism::parse_morphism_spec;
use rbx_core::operator::{builtin_context, OperatorMatrix};
use rbx_core::search::{search_f3, search_m2, SearchConfig, SearchResult};

#[derive(Parser)]
#[command(
    name = "rbx",
    about = "Exact verification engine for Rota-Baxter operators on M2, M3 and F3",
    long_about = None,
    version
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

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
    /// Run the full catalog verification campaign.
    VerifyCatalog,
    /// Replay every explicit conjugation claim as an exact equality.
    ReplayConjugations,
    /// Classify all pairs of M3 entries by orbit-separating invariants.
    OrbitReport,
    /// Exhaustive grid searches.
    Search {
        #[command(subcommand)]
        target: SearchTarget,
    },
    /// Print one catalog entry (images of all basis elements plus the
    /// computed fingerprint).
    Show { id: String },
    /// Catalog export and inspection.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Conjugate a catalog entry by a morphism spec and print the result.
    ///
    /// Morphism specs compose left-to-right in application order:
    /// `phi23*rho:a=1,b=1,c=1*phi23` applies `phi23` first. Available
    /// atoms: id, phi12, phi13, phi23, phi123, phi132, transpose,
    /// case6psi, case6xi, psi:alpha=Q, chi:alpha=Q,gamma=Q, xi:alpha=Q,
    /// upsilon:a=Q, rho:a=Q,b=Q,c=Q, inner:<n*n rationals>.
    Conjugate {
        id: String,
        #[arg(long)]
        morph: String,
    },
    /// Check an operator file against the Rota-Baxter identity.
    Check {
        file: PathBuf,
        /// Optional algebra context file (defaults to the built-in
        /// contexts M2, M3, F3 by name).
        #[arg(long)]
        context_file: Option<PathBuf>,
    },
    /// Export a built-in algebra context in the context file format.
    Context {
        #[command(subcommand)]
        action: ContextAction,
    },
}

#[derive(Subcommand)]
enum SearchTarget {
    /// All 3x3 operator matrices over the grid on F3 (default 3^9).
    F3 {
        /// Comma-separated rational grid values.
        #[arg(long, default_value = "-1,0,1")]
        grid: String,
        /// Rota-Baxter weight p/q.
        #[arg(long, default_value = "1")]
        weight: String,
    },
    /// All 4x4 operator matrices over the grid on M2 (default 3^16).
    M2 {
        #[arg(long, default_value = "-1,0,1")]
        grid: String,
        #[arg(long, default_value = "1")]
        weight: String,
        /// Abort with a partial result after this many seconds.
        #[arg(long)]
        budget_sec: Option<u64>,
        /// Number of worker threads (default: rayon's choice).
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Dump every entry in the operator file format.
    Export,
    /// Print one entry (same as the top-level `show`).
    Show { id: String },
}

#[derive(Subcommand)]
enum ContextAction {
    Export { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(green) => {
            if green {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::VerifyCatalog => {
            let cat = build_catalog()?;
            emit_campaign(&verify_catalog(&cat), cli.format)
        }
        Command::ReplayConjugations => {
            let cat = build_catalog()?;
            emit_campaign(&replay_conjugations(&cat), cli.format)
        }
        Command::OrbitReport => {
            let cat = build_catalog()?;
            emit_campaign(&orbit_report(&cat), cli.format)
        }
        Command::Search { target } => match target {
            SearchTarget::F3 { grid, weight } => {
                let cfg = parse_search_config(&grid, &weight, None, None)?;
                let result = search_f3(&cfg).map_err(|e| e.to_string())?;
                emit_search(&result, cli.format)
            }
            SearchTarget::M2 {
                grid,
                weight,
                budget_sec,
                threads,
            } => {
                let cfg = parse_search_config(&grid, &weight, budget_sec, threads)?;
                let result = search_m2(&cfg).map_err(|e| e.to_string())?;
                emit_search(&result, cli.format)
            }
        },
        Command::Show { id } | Command::Catalog { action: CatalogAction::Show { id } } => {
            let cat = build_catalog()?;
            let entry = cat
                .get(&id)
                .ok_or_else(|| format!("no catalog entry `{id}`"))?;
            show_entry(entry, cli.format)
        }
        Command::Catalog { action: CatalogAction::Export } => {
            let cat = build_catalog()?;
            match cli.format {
                Format::Text => {
                    for entry in cat.entries() {
                        for (label, op) in entry.instances() {
                            println!("# {} ({})", label, entry.case_label);
                            print!("{}", op.to_text(&label));
                            println!();
                        }
                    }
                }
                Format::Json => {
                    let items: Vec<serde_json::Value> = cat
                        .entries()
                        .iter()
                        .flat_map(|entry| {
                            entry.instances().into_iter().map(|(label, op)| {
                                serde_json::json!({
                                    "id": label,
                                    "case": entry.case_label,
                                    "tags": entry.tags,
                                    "context": op.context().name(),
                                    "weight": op.weight(),
                                    "operator": op.to_text(&label),
                                })
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&items).unwrap());
                }
            }
            Ok(true)
        }
        Command::Conjugate { id, morph } => {
            let cat = build_catalog()?;
            let entry = cat
                .get(&id)
                .ok_or_else(|| format!("no catalog entry `{id}`"))?;
            let op = entry.representative();
            let psi = parse_morphism_spec(op.context(), &morph).map_err(|e| e.to_string())?;
            let conj = op.conjugate_by(&psi).map_err(|e| e.to_string())?;
            let rb = conj.rb_check();
            match cli.format {
                Format::Text => {
                    print!("{}", conj.to_text(&format!("{id}^({morph})")));
                    println!("# rb_check: {}", if rb.is_pass() { "pass" } else { "FAIL" });
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "source": id,
                            "morphism": morph,
                            "operator": conj.to_text("conjugated"),
                            "rb_check": rb.is_pass(),
                        })
                    );
                }
            }
            Ok(rb.is_pass())
        }
        Command::Check { file, context_file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let custom = match context_file {
                Some(path) => {
                    let ctx_text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    Some(
                        rbx_core::algebra::AlgebraContext::parse_text(&ctx_text)
                            .map_err(|e| e.to_string())?,
                    )
                }
                None => None,
            };
            let resolve = |name: &str| {
                if let Some(c) = &custom {
                    if c.name() == name {
                        return Some(c.clone());
                    }
                }
                builtin_context(name)
            };
            let (name, op) =
                OperatorMatrix::parse_text(&text, resolve).map_err(|e| e.to_string())?;
            let rb = op.rb_check();
            match cli.format {
                Format::Text => {
                    println!(
                        "operator {name} on {} weight {}: {}",
                        op.context().name(),
                        op.weight(),
                        rb.describe(op.context())
                    );
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "operator": name,
                            "context": op.context().name(),
                            "weight": op.weight(),
                            "rb_check": rb.is_pass(),
                            "detail": rb.describe(op.context()),
                        })
                    );
                }
            }
            Ok(rb.is_pass())
        }
        Command::Context { action: ContextAction::Export { name } } => {
            let ctx =
                builtin_context(&name).ok_or_else(|| format!("unknown context `{name}`"))?;
            print!("{}", ctx.to_text());
            Ok(true)
        }
    }
}

fn build_catalog() -> Result<Catalog, String> {
    Catalog::build().map_err(|e| e.to_string())
}

fn parse_search_config(
    grid: &str,
    weight: &str,
    budget_sec: Option<u64>,
    threads: Option<usize>,
) -> Result<SearchConfig, String> {
    let grid: Result<Vec<Scalar>, _> = grid.split(',').map(|s| s.trim().parse()).collect();
    Ok(SearchConfig {
        grid: grid.map_err(|e| format!("bad grid: {e}"))?,
        weight: weight
            .trim()
            .parse()
            .map_err(|e| format!("bad weight: {e}"))?,
        budget: budget_sec.map(Duration::from_secs),
        threads,
    })
}

fn emit_campaign(report: &CampaignReport, format: Format) -> Result<bool, String> {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_canonical_json()),
    }
    Ok(report.is_green())
}

fn emit_search(result: &SearchResult, format: Format) -> Result<bool, String> {
    match format {
        Format::Text => print!("{}", result.to_text()),
        Format::Json => println!("{}", result.to_canonical_json()),
    }
    Ok(result.unmatched() == 0 && !result.partial)
}

fn show_entry(entry: &rbx_core::catalog::CatalogEntry, format: Format) -> Result<bool, String> {
    let instances = entry.instances();
    match format {
        Format::Text => {
            println!("id: {}", entry.id);
            println!("case: {}", entry.case_label);
            if !entry.tags.is_empty() {
                println!("tags: {:?}", entry.tags);
            }
            if let EntryKind::Family(f) = &entry.kind {
                println!(
                    "parametric family in ({}), documented samples below",
                    f.param_names.join(", ")
                );
            }
            for (label, op) in &instances {
                println!();
                print!("{}", op.to_text(label));
                match op.fingerprint() {
                    Ok(fp) => {
                        println!("# six-tuple: {:?}", fp.six_tuple);
                        println!("# min poly: {}", fp.min_poly);
                        println!("# trace R(1): {}", fp.trace_r1);
                        println!(
                            "# ker profile: dim {} rad {:?}; ker(R+λ) profile: dim {} rad {:?}",
                            fp.ker_profile.dim,
                            fp.ker_profile.radical_dim,
                            fp.ker_phi_profile.dim,
                            fp.ker_phi_profile.radical_dim
                        );
                    }
                    Err(e) => println!("# fingerprint unavailable: {e}"),
                }
            }
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = instances
                .iter()
                .map(|(label, op)| {
                    serde_json::json!({
                        "id": label,
                        "operator": op.to_text(label),
                        "fingerprint": op.fingerprint().ok(),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "id": entry.id,
                    "case": entry.case_label,
                    "tags": entry.tags,
                    "instances": items,
                })
            );
        }
    }
    Ok(true)
}
