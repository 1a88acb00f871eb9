//! `indpoly`: independence polynomials, counterexample families and free-tree
//! scans from the command line.
//!
//! Exit status: 0 on success, 1 when a verification or verdict fails, 2 for
//! usage errors, 3 for I/O and parse errors.

mod verify;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use indpoly::checks::{check_log_concave, check_unimodal, ConcavityReport, UnimodalReport};
use indpoly::engine::{
    independence_polynomial_bruteforce, independence_polynomial_general,
    independence_polynomial_tree,
};
use indpoly::enumeration::{FreeTrees, MAX_ORDER};
use indpoly::families::{
    build_family_tree, build_named_graph, first_violating_k, threshold_crossover,
    top_coefficients_closed_form, NamedTree, Structure, TopCoefficients,
};
use indpoly::search::{run_search, Predicate, SearchJob};
use indpoly::{Graph, Polynomial, Tree};

#[derive(Parser)]
#[command(
    name = "indpoly",
    version,
    about = "Independence polynomials of graphs and trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Graph6,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Method {
    Auto,
    Tree,
    General,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Poly,
    Graph6,
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeEmit {
    Graph6,
}

#[derive(Subcommand)]
enum Command {
    /// Independence polynomial of a graph read from a file.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// A member of one of the counterexample families.
    Family {
        #[arg(long)]
        structure: Structure,
        #[arg(long = "k", value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_enum, default_value = "poly")]
        emit: Emit,
        #[arg(long)]
        json: bool,
    },
    /// One of the individually published trees.
    Named {
        #[arg(long)]
        tree: NamedTree,
        #[arg(long, value_enum, default_value = "poly")]
        emit: Emit,
        #[arg(long)]
        json: bool,
    },
    /// Log-concavity and unimodality verdicts; exit status 1 if either fails.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        json: bool,
    },
    /// Every free tree of one order, one graph6 line each.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_ORDER as i64))]
        n: u32,
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum, default_value = "graph6")]
        emit: TreeEmit,
    },
    /// Scan all free trees in a range of orders for a property.
    Search {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_ORDER as i64))]
        min_n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_ORDER as i64))]
        max_n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
        /// JSON Lines output; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, requires = "out")]
        checkpoint: Option<PathBuf>,
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        #[arg(long, default_value = "non-log-concave")]
        predicate: Predicate,
    },
    /// Real crossing point of the top coefficients for a family.
    Thresholds {
        #[arg(long)]
        structure: Structure,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every published fixture; exit status 1 on any mismatch.
    Verify {
        #[arg(long)]
        json: bool,
        /// Replace the order-28 tree with this edge list.
        #[arg(long, hide = true)]
        ex28_edges: Option<PathBuf>,
    },
}

enum CliError {
    /// Exit status 1.
    Failed,
    /// Exit status 2.
    Usage(String),
    /// Exit status 3.
    Input(String),
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Compute {
            input,
            format,
            method,
            json,
        } => compute(&input, format, method, json),
        Command::Family {
            structure,
            k,
            emit,
            json,
        } => family(structure, k, emit, json),
        Command::Named { tree, emit, json } => named(tree, emit, json),
        Command::Check {
            input,
            format,
            json,
        } => check(&input, format, json),
        Command::Enumerate {
            n,
            count_only,
            emit: TreeEmit::Graph6,
        } => enumerate(n as usize, count_only),
        Command::Search {
            min_n,
            max_n,
            threads,
            out,
            checkpoint,
            resume,
            predicate,
        } => search(
            min_n as usize,
            max_n as usize,
            threads,
            out,
            checkpoint,
            resume,
            predicate,
        ),
        Command::Thresholds { structure, json } => thresholds(structure, json),
        Command::Verify { json, ex28_edges } => verify_cmd(json, ex28_edges.as_deref()),
    }
}

fn read_graph(path: &Path, format: Format) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let parsed = match format {
        Format::Edgelist => Graph::from_edge_list(&text),
        Format::Graph6 => {
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .unwrap_or("");
            Graph::from_graph6(line)
        }
    };
    parsed.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("values serialize")
    );
}

fn concavity_lines(r: &ConcavityReport) -> Vec<String> {
    let mut lines = vec![format!(
        "log-concave: {}",
        if r.is_log_concave { "yes" } else { "no" }
    )];
    for v in &r.violations {
        lines.push(format!(
            "  violation at k = {} (alpha - k = {}): s_k^2 = {} < s_(k-1)*s_(k+1) = {}",
            v.k,
            v.offset,
            v.lhs(),
            v.rhs()
        ));
    }
    lines
}

fn unimodal_line(u: &UnimodalReport) -> String {
    match (u.is_unimodal, u.mode_low, u.mode_high) {
        (true, Some(lo), Some(hi)) if lo == hi => format!("unimodal: yes, mode at k = {lo}"),
        (true, Some(lo), Some(hi)) => format!("unimodal: yes, modes at k = {lo}..{hi}"),
        (true, _, _) => "unimodal: yes".to_string(),
        (false, _, _) => format!(
            "unimodal: no, rises again after a descent at k = {}",
            u.first_descent_then_ascent.unwrap_or_default()
        ),
    }
}

fn verdict_json(p: &Polynomial) -> Value {
    json!({
        "polynomial": p,
        "alpha": p.degree(),
        "log_concavity": check_log_concave(p),
        "unimodality": check_unimodal(p),
    })
}

fn print_verdicts(p: &Polynomial) {
    println!("I(x) = {p}");
    for line in concavity_lines(&check_log_concave(p)) {
        println!("{line}");
    }
    println!("{}", unimodal_line(&check_unimodal(p)));
}

fn compute(input: &Path, format: Format, method: Method, json_out: bool) -> CliResult {
    let g = read_graph(input, format)?;
    let as_tree = || {
        Tree::from_graph(&g, 0)
            .map_err(|_| CliError::Usage("method tree needs a tree as input".into()))
    };
    let (used, poly) = match method {
        Method::Auto => match Tree::from_graph(&g, 0) {
            Ok(t) => ("tree", independence_polynomial_tree(&t)),
            Err(_) => ("general", independence_polynomial_general(&g)),
        },
        Method::Tree => ("tree", independence_polynomial_tree(&as_tree()?)),
        Method::General => ("general", independence_polynomial_general(&g)),
        Method::Brute => (
            "brute",
            independence_polynomial_bruteforce(&g).map_err(|e| CliError::Usage(e.to_string()))?,
        ),
    };
    if json_out {
        let mut v = verdict_json(&poly);
        v["n"] = json!(g.order());
        v["m"] = json!(g.size());
        v["method"] = json!(used);
        print_json(&v);
    } else {
        println!("n = {}, m = {}, method = {used}", g.order(), g.size());
        print_verdicts(&poly);
    }
    Ok(())
}

fn check(input: &Path, format: Format, json_out: bool) -> CliResult {
    let g = read_graph(input, format)?;
    let poly = indpoly::independence_polynomial_auto(&g);
    let lc = check_log_concave(&poly);
    let um = check_unimodal(&poly);
    if json_out {
        print_json(&json!({
            "n": g.order(),
            "alpha": lc.alpha,
            "log_concavity": &lc,
            "unimodality": &um,
        }));
    } else {
        for line in concavity_lines(&lc) {
            println!("{line}");
        }
        println!("{}", unimodal_line(&um));
    }
    if lc.is_log_concave && um.is_unimodal {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn top_json(t: &TopCoefficients) -> Value {
    json!({
        "top_exponent": t.top_exponent,
        "c0": t.c0.to_string(),
        "c1": t.c1.to_string(),
        "c2": t.c2.to_string(),
    })
}

fn emit_graph(g: &Graph, poly: &Polynomial, emit: Emit, json_out: bool, extra: Value) -> CliResult {
    let graph6 = g.to_graph6().map_err(|e| CliError::Input(e.to_string()))?;
    match (emit, json_out) {
        (Emit::Poly, false) => println!("{poly}"),
        (Emit::Poly, true) => print_json(&json!({ "n": g.order(), "polynomial": poly })),
        (Emit::Graph6, false) => println!("{graph6}"),
        (Emit::Graph6, true) => print_json(&json!({ "n": g.order(), "graph6": graph6 })),
        (Emit::Report, true) => {
            let mut v = verdict_json(poly);
            v["n"] = json!(g.order());
            v["graph6"] = json!(graph6);
            if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
                dst.extend(src);
            }
            print_json(&v);
        }
        (Emit::Report, false) => {
            println!("n = {}, graph6 = {graph6}", g.order());
            print_verdicts(poly);
            if let Value::Object(src) = extra {
                for (key, value) in src {
                    println!("{key}: {value}");
                }
            }
        }
    }
    Ok(())
}

fn family(structure: Structure, k: u32, emit: Emit, json_out: bool) -> CliResult {
    let spec = structure.with_k(k);
    let t = build_family_tree(spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let poly = independence_polynomial_tree(&t);
    let computed = TopCoefficients::of(&poly).expect("family trees have degree at least 2");
    let extra = match top_coefficients_closed_form(spec) {
        Some(closed) => json!({
            "structure": structure.name(),
            "k": k,
            "top_coefficients": top_json(&computed),
            "closed_form": top_json(&closed),
            "closed_form_matches": closed == computed,
            "violation_below_top": computed.violates(),
        }),
        None => json!({
            "structure": structure.name(),
            "k": k,
            "top_coefficients": top_json(&computed),
            "closed_form": Value::Null,
            "violation_below_top": computed.violates(),
        }),
    };
    emit_graph(&t.to_graph(), &poly, emit, json_out, extra)
}

fn named(tree: NamedTree, emit: Emit, json_out: bool) -> CliResult {
    let g = build_named_graph(tree);
    let poly = independence_polynomial_general(&g);
    let extra = json!({
        "tree": tree.name(),
        "matches_published": poly == tree.published_polynomial(),
    });
    emit_graph(&g, &poly, emit, json_out, extra)
}

fn enumerate(n: usize, count_only: bool) -> CliResult {
    let mut trees = FreeTrees::new(n).map_err(|e| CliError::Usage(e.to_string()))?;
    if count_only {
        println!("{}", trees.count_remaining());
        return Ok(());
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    while let Some(levels) = trees.advance() {
        let parents = indpoly::enumeration::parents_from_levels(levels);
        let g = Tree::from_parents(parents)
            .expect("level sequences are trees")
            .to_graph();
        let line = g.to_graph6().expect("small orders fit graph6");
        if writeln!(out, "{line}").is_err() {
            // closed pipe
            return Ok(());
        }
    }
    out.flush().map_err(|e| CliError::Input(e.to_string()))
}

#[allow(clippy::too_many_arguments)]
fn search(
    min_n: usize,
    max_n: usize,
    threads: Option<u32>,
    out: Option<PathBuf>,
    checkpoint: Option<PathBuf>,
    resume: bool,
    predicate: Predicate,
) -> CliResult {
    if min_n > max_n {
        return Err(CliError::Usage(format!(
            "--min-n {min_n} exceeds --max-n {max_n}"
        )));
    }
    let workers = threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    // without --out, records go through a temporary file to standard output
    let tmp_dir;
    let output_path = match &out {
        Some(p) => p.clone(),
        None => {
            tmp_dir = std::env::temp_dir().join(format!("indpoly-search-{}", std::process::id()));
            fs::create_dir_all(&tmp_dir).map_err(|e| CliError::Input(e.to_string()))?;
            tmp_dir.join("records.jsonl")
        }
    };
    let job = SearchJob {
        min_n,
        max_n,
        predicate,
        workers,
        output_path: output_path.clone(),
        checkpoint_path: checkpoint,
        resume,
        halt_after_chunks: None,
    };
    let summary = run_search(&job).map_err(|e| match e {
        indpoly::search::SearchError::InvalidJob(msg) => CliError::Usage(msg),
        other => CliError::Input(other.to_string()),
    });
    if out.is_none() {
        let text = fs::read_to_string(&output_path).unwrap_or_default();
        let _ = fs::remove_dir_all(output_path.parent().expect("temp file has a parent"));
        print!("{text}");
    }
    let summary = summary?;
    for o in &summary.orders {
        eprintln!(
            "n = {:>2}: {} trees scanned, {} found, {:.2} s",
            o.n, o.trees_scanned, o.counterexamples_found, o.elapsed_secs
        );
    }
    Ok(())
}

fn thresholds(structure: Structure, json_out: bool) -> CliResult {
    let root = threshold_crossover(structure).map_err(|e| CliError::Usage(e.to_string()))?;
    let first = first_violating_k(structure, 64).map_err(|e| CliError::Usage(e.to_string()))?;
    if json_out {
        print_json(&json!({
            "structure": structure.name(),
            "threshold": root,
            "first_violating_k": first,
        }));
    } else {
        println!("threshold: {root:.6}");
        match first {
            Some(k) => println!("first violating k: {k}"),
            None => println!("first violating k: none up to 64"),
        }
    }
    Ok(())
}

fn verify_cmd(json_out: bool, ex28_edges: Option<&Path>) -> CliResult {
    let mut overrides = verify::Overrides::default();
    if let Some(path) = ex28_edges {
        overrides.ex28 = Some(read_graph(path, Format::Edgelist)?);
    }
    let outcomes = verify::run_suite(&overrides);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let all = passed == outcomes.len();
    if json_out {
        print_json(&json!({
            "passed": passed,
            "failed": outcomes.len() - passed,
            "all_passed": all,
            "checks": outcomes,
        }));
    } else {
        for o in &outcomes {
            println!(
                "{} {} ({})",
                if o.passed { "PASS" } else { "FAIL" },
                o.name,
                o.detail
            );
        }
        println!("{passed}/{} checks passed", outcomes.len());
    }
    if all {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
