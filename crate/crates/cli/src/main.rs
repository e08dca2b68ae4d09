//! nimforge: build the two fusion ring families from finite group data,
//! classify their NIM-reps, export graphs, extract algebra objects, and
//! check catalogs against the brute-force oracle.
//!
//! Exit codes: 0 success or agreement, 1 mathematical disagreement,
//! 2 resource limit hit, 3 bad input.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use nimforge_core::catalog::{
    glm_catalog, jl_catalog, load_catalog, save_catalog, Catalog, GroupSpec, RingDescriptor,
};
use nimforge_core::graph::{nim_orbit_graph, NimGraph};
use nimforge_core::group::{decode_shorthand, Subgroup};
use nimforge_core::nimrep::decompose_orbits;
use nimforge_core::oracle::{cross_check, enumerate_all, SearchConfig, SearchOrder};
use nimforge_core::ring::{glm_ring_with_options, jl_ring};
use nimforge_core::{FiniteGroup, FusionRing, NimRep};

const EXIT_DISAGREEMENT: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "nimforge", version, about = "Fusion ring NIM-rep classification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a fusion ring and report on its axioms
    Ring {
        #[command(subcommand)]
        family: RingFamily,
    },
    /// Enumerate NIM-rep classes into a catalog
    Classify {
        #[command(subcommand)]
        family: ClassifyFamily,
    },
    /// Export the NIM-graph of a catalog entry as DOT
    Graph(GraphArgs),
    /// Check a catalog against the brute-force search
    Verify(VerifyArgs),
    /// Print algebra objects for catalog entries
    Algebras(AlgebrasArgs),
}

#[derive(Args)]
struct GroupOpts {
    /// Abelian group shorthand, e.g. Z2xZ4
    #[arg(long)]
    group: Option<String>,
    /// JSON multiplication table file for arbitrary groups
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RingFamily {
    /// Group ring extended by p-1 interchanging elements
    Jl {
        #[command(flatten)]
        group: GroupOpts,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Twisted doubling of an even abelian group
    Glm {
        #[command(flatten)]
        group: GroupOpts,
        /// Element index or digit tuple like "(1,0)"
        #[arg(long)]
        delta: String,
        /// Accept odd group orders (experimental degenerate case)
        #[arg(long)]
        allow_odd: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ClassifyFamily {
    Jl {
        #[command(flatten)]
        group: GroupOpts,
        #[arg(long)]
        p: usize,
        /// Keep only classes with this orbit count
        #[arg(long)]
        orbits: Option<usize>,
        /// Print class counts by (orbit count, dim)
        #[arg(long)]
        summary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Zero the timestamp for byte-reproducible output
        #[arg(long)]
        reproducible: bool,
    },
    Glm {
        #[command(flatten)]
        group: GroupOpts,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        allow_odd: bool,
        #[arg(long)]
        orbits: Option<usize>,
        #[arg(long)]
        summary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        reproducible: bool,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    catalog: PathBuf,
    #[arg(long)]
    entry: usize,
    /// Contract invertible edges into the orbit graph
    #[arg(long)]
    orbit_graph: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    catalog: PathBuf,
    #[arg(long)]
    max_dim: usize,
    /// Search without family-specific block shortcuts
    #[arg(long)]
    no_hints: bool,
    #[arg(long)]
    entry_bound: Option<u64>,
    /// Seconds before the search gives up with a partial result
    #[arg(long)]
    time_budget: Option<u64>,
    /// Compare only classes with this orbit count
    #[arg(long)]
    orbits: Option<usize>,
    /// Externally stated class counts to adjudicate, as label=N
    #[arg(long, value_parser = parse_reference)]
    reference: Vec<(String, usize)>,
    /// Write the cross-check report JSON here
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write every class the search found as a JSON list
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Rewrite the catalog with the report embedded
    #[arg(long)]
    attach: bool,
}

#[derive(Args)]
struct AlgebrasArgs {
    #[arg(long)]
    catalog: PathBuf,
    /// Single entry; all entries when absent
    #[arg(long)]
    entry: Option<usize>,
}

fn parse_reference(raw: &str) -> Result<(String, usize), String> {
    let (label, count) = raw
        .split_once('=')
        .ok_or_else(|| format!("expected label=N, got {raw}"))?;
    let count = count.parse().map_err(|e| format!("bad count in {raw}: {e}"))?;
    Ok((label.to_string(), count))
}

struct Failure {
    code: u8,
    message: String,
}

fn bad_input(msg: impl Display) -> Failure {
    Failure { code: EXIT_BAD_INPUT, message: msg.to_string() }
}

fn disagreement(msg: impl Display) -> Failure {
    Failure { code: EXIT_DISAGREEMENT, message: msg.to_string() }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("NIMFORGE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Ring { family } => cmd_ring(family),
        Command::Classify { family } => cmd_classify(family),
        Command::Graph(args) => cmd_graph(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Algebras(args) => cmd_algebras(args),
    }
}

/// Resolves --group/--table into a rebuildable description.
fn group_spec(opts: &GroupOpts) -> Result<GroupSpec, Failure> {
    match (&opts.group, &opts.table) {
        (Some(shorthand), None) => {
            let factors = decode_shorthand(shorthand)
                .map_err(|e| bad_input(format!("cannot read group {shorthand:?}: {e}")))?;
            Ok(GroupSpec::abelian(&factors))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
            let table: Vec<Vec<usize>> = serde_json::from_str(&text)
                .map_err(|e| bad_input(format!("bad table in {}: {e}", path.display())))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "table".to_string());
            Ok(GroupSpec::from_table(name, table))
        }
        (Some(_), Some(_)) => Err(bad_input("give either --group or --table, not both")),
        (None, None) => Err(bad_input("a group is required: --group Z2xZ2 or --table FILE")),
    }
}

/// Accepts a plain element index or a digit tuple like "(1,0)".
fn parse_delta(raw: &str, gamma: &FiniteGroup) -> Result<usize, Failure> {
    let trimmed = raw.trim();
    if let Ok(index) = trimmed.parse::<usize>() {
        if index >= gamma.order() {
            return Err(bad_input(format!(
                "delta {index} out of range for a group of order {}",
                gamma.order()
            )));
        }
        return Ok(index);
    }
    let inner = trimmed.trim_start_matches('(').trim_end_matches(')');
    let digits = inner
        .split(',')
        .map(|part| part.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| bad_input(format!("cannot read delta {raw:?}: {e}")))?;
    gamma
        .element_from_digits(&digits)
        .map_err(|e| bad_input(format!("cannot read delta {raw:?}: {e}")))
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| bad_input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn cmd_ring(family: RingFamily) -> Result<u8, Failure> {
    let (ring, out) = match family {
        RingFamily::Jl { group, p, out } => {
            let g = group_spec(&group)?.build().map_err(bad_input)?;
            (jl_ring(&g, p).map_err(bad_input)?, out)
        }
        RingFamily::Glm { group, delta, allow_odd, out } => {
            let g = group_spec(&group)?.build().map_err(bad_input)?;
            let delta = parse_delta(&delta, &g)?;
            (glm_ring_with_options(&g, delta, allow_odd).map_err(bad_input)?, out)
        }
    };
    write_or_print(&out, &ring.to_json())?;
    let report = ring.verify_axioms();
    if report.passed() {
        println!("axioms: pass");
        Ok(0)
    } else {
        println!("axioms: FAIL ({} violations)", report.violations.len());
        for v in &report.violations {
            println!("  {v:?}");
        }
        Err(disagreement("ring axioms do not hold"))
    }
}

fn cmd_classify(family: ClassifyFamily) -> Result<u8, Failure> {
    let (catalog, orbits, summary, out) = match family {
        ClassifyFamily::Jl { group, p, orbits, summary, out, reproducible } => {
            let spec = group_spec(&group)?;
            let catalog =
                jl_catalog(&spec, p, orbits, reproducible).map_err(bad_input)?;
            (catalog, orbits, summary, out)
        }
        ClassifyFamily::Glm { group, delta, allow_odd, orbits, summary, out, reproducible } => {
            let spec = group_spec(&group)?;
            let gamma = spec.build().map_err(bad_input)?;
            let delta = parse_delta(&delta, &gamma)?;
            let catalog = glm_catalog(&spec, delta, allow_odd, orbits, reproducible)
                .map_err(bad_input)?;
            (catalog, orbits, summary, out)
        }
    };
    match orbits {
        Some(m) => println!("classes: {} (orbit count {m})", catalog.entries.len()),
        None => println!("classes: {}", catalog.entries.len()),
    }
    if summary {
        for (m, dim, count) in catalog.summary() {
            println!("  orbits={m} dim={dim}: {count}");
        }
    }
    for note in &catalog.notes {
        println!("note: {note}");
    }
    if let Some(path) = out {
        let text = save_catalog(&catalog).map_err(bad_input)?;
        std::fs::write(&path, text)
            .map_err(|e| bad_input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(0)
}

fn load_catalog_file(path: &Path) -> Result<Catalog, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
    load_catalog(&text).map_err(|e| bad_input(format!("bad catalog {}: {e}", path.display())))
}

fn cmd_graph(args: GraphArgs) -> Result<u8, Failure> {
    let catalog = load_catalog_file(&args.catalog)?;
    if args.entry >= catalog.entries.len() {
        return Err(bad_input(format!(
            "catalog has {} entries, no entry {}",
            catalog.entries.len(),
            args.entry
        )));
    }
    let ring = catalog.build_ring().map_err(bad_input)?;
    let rep = catalog
        .entry_rep(&ring, args.entry)
        .map_err(|e| disagreement(format!("entry {} does not validate: {e}", args.entry)))?;
    let dot = if args.orbit_graph {
        let action = rep.invertible_action().map_err(disagreement)?;
        let full = Subgroup::full(&action.group);
        nim_orbit_graph(&rep, &action, &full).map_err(disagreement)?.to_dot()
    } else {
        NimGraph::from_rep(&rep).to_dot()
    };
    write_or_print(&args.out, &dot)?;
    Ok(0)
}

/// Matrix-level comparison set: every entry for orbit-tuple catalogs, one
/// representative per matrix class for twisted-doubling catalogs.
fn comparison_reps(
    catalog: &Catalog,
    ring: &Arc<FusionRing>,
    max_dim: usize,
    orbits: Option<usize>,
) -> Result<(Vec<NimRep>, usize), Failure> {
    let glm = matches!(catalog.ring, RingDescriptor::Glm { .. });
    let mut seen_iso: Vec<usize> = Vec::new();
    let mut reps = Vec::new();
    let mut skipped = 0usize;
    for (i, entry) in catalog.entries.iter().enumerate() {
        if orbits.is_some_and(|m| entry.orbit_count != m) {
            continue;
        }
        if entry.dim > max_dim {
            skipped += 1;
            continue;
        }
        if glm {
            let iso = entry.iso_class_id.ok_or_else(|| {
                bad_input(format!("entry {i} is missing its matrix class id"))
            })?;
            if seen_iso.contains(&iso) {
                continue;
            }
            seen_iso.push(iso);
        }
        let rep = catalog
            .entry_rep(ring, i)
            .map_err(|e| disagreement(format!("entry {i} does not validate: {e}")))?;
        reps.push(rep);
    }
    Ok((reps, skipped))
}

fn orbit_count_of(rep: &NimRep) -> Result<usize, Failure> {
    let action = rep.invertible_action().map_err(disagreement)?;
    let full = Subgroup::full(&action.group);
    let dec = decompose_orbits(rep, &action, &full).map_err(disagreement)?;
    Ok(dec.orbits.len())
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let mut catalog = load_catalog_file(&args.catalog)?;
    let ring = catalog.build_ring().map_err(bad_input)?;
    let (reps, skipped) = comparison_reps(&catalog, &ring, args.max_dim, args.orbits)?;
    if skipped > 0 {
        println!("skipped {skipped} catalog entries above dimension {}", args.max_dim);
    }
    let cfg = SearchConfig {
        max_dim: args.max_dim,
        entry_bound: args.entry_bound,
        require_irreducible: true,
        time_budget: args.time_budget.map(Duration::from_secs),
        use_hints: !args.no_hints,
        order: SearchOrder::Forward,
    };
    let mut outcome = enumerate_all(&ring, &cfg).map_err(bad_input)?;
    if let Some(m) = args.orbits {
        let mut filtered = Vec::new();
        for rep in outcome.reps {
            if orbit_count_of(&rep)? == m {
                filtered.push(rep);
            }
        }
        outcome.reps = filtered;
    }
    if let Some(path) = &args.dump {
        let values: Vec<serde_json::Value> = outcome
            .reps
            .iter()
            .map(|r| serde_json::from_str(&r.to_json()).expect("rep wire form parses"))
            .collect();
        let text = serde_json::to_string_pretty(&serde_json::Value::Array(values))
            .map_err(|e| bad_input(format!("cannot encode rep list: {e}")))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| bad_input(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = cross_check(&reps, &outcome, &args.reference);
    println!("classifier classes compared: {}", report.classifier_count);
    println!(
        "oracle classes found: {}{}",
        report.oracle_count,
        if report.oracle_complete { "" } else { " (partial)" }
    );
    for (label, count) in &args.reference {
        let verdict = if *count == report.oracle_count { "matches" } else { "differs from" };
        println!("stated count {label}={count} {verdict} the oracle");
    }
    if !report.only_classifier.is_empty() {
        println!("classifier-only entries: {:?}", report.only_classifier);
    }
    if !report.only_oracle.is_empty() {
        println!("oracle-only classes: {:?}", report.only_oracle);
    }
    println!("agreement: {}", if report.agreement { "yes" } else { "no" });
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| bad_input(format!("cannot encode report: {e}")))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| bad_input(format!("cannot write {}: {e}", path.display())))?;
    }
    if args.attach {
        catalog.cross_check = Some(report.clone());
        let text = save_catalog(&catalog).map_err(bad_input)?;
        std::fs::write(&args.catalog, text)
            .map_err(|e| bad_input(format!("cannot write {}: {e}", args.catalog.display())))?;
    }
    if !report.oracle_complete {
        return Ok(EXIT_RESOURCE);
    }
    Ok(if report.agreement { 0 } else { EXIT_DISAGREEMENT })
}

/// Multiset over the ring basis in readable form, e.g. "e + 2*X1".
fn format_object(ring: &FusionRing, multiplicities: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &m) in multiplicities.iter().enumerate() {
        match m {
            0 => {}
            1 => terms.push(ring.label(i).to_string()),
            k => terms.push(format!("{k}*{}", ring.label(i))),
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn cmd_algebras(args: AlgebrasArgs) -> Result<u8, Failure> {
    let catalog = load_catalog_file(&args.catalog)?;
    let ring = catalog.build_ring().map_err(bad_input)?;
    let indices: Vec<usize> = match args.entry {
        Some(i) if i >= catalog.entries.len() => {
            return Err(bad_input(format!(
                "catalog has {} entries, no entry {i}",
                catalog.entries.len()
            )))
        }
        Some(i) => vec![i],
        None => (0..catalog.entries.len()).collect(),
    };
    let mut all_agree = true;
    for i in indices {
        let entry = &catalog.entries[i];
        println!("entry {i} (dim {}, {} orbits):", entry.dim, entry.orbit_count);
        for report in &entry.algebras {
            let closed = format_object(&ring, &report.closed_form);
            let loops = format_object(&ring, &report.self_loops);
            let flag = if report.agree { "agree" } else { "DIFFER" };
            println!("  orbit {} [point {}]: closed-form = {closed}", report.orbit, report.base_point);
            println!("  orbit {} [point {}]: self-loops  = {loops} ({flag})", report.orbit, report.base_point);
            if !report.agree {
                all_agree = false;
                println!("    deviating points: {:?}", report.deviating_points);
            }
        }
    }
    Ok(if all_agree { 0 } else { EXIT_DISAGREEMENT })
}
