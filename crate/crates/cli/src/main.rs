//! `rainbow`: solve, check, generate, certify, search and export instances.
//!
//! Exit codes:
//! - 0 success (including `check` reporting a failed hypothesis or a counterexample)
//! - 1 other failure (constructive stall, exhausted budget, no instance found)
//! - 2 hypothesis failure in `solve`
//! - 3 violation: `solve` found no rainbow matching despite the hypothesis,
//!   or `certify` rejected a certificate
//! - 64 input file unreadable or malformed
//! - 65 parameters do not fit the instance
//! - 66 certificate file malformed

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rainbow_core::format::{
    parse_instance, parse_matching_certificate, parse_network, parse_regimentation, to_dot, write_instance,
    write_matching_certificate, Instance,
};
use rainbow_core::generators::{
    drisko_family, random_cooperative_family, sharpness_family, staircase_family, DEFAULT_DENSITY,
};
use rainbow_core::regimentation::{
    check_structure_lemmas, verify_regimentation, Regimentation, StructureReport, Violation,
};
use rainbow_core::search::{conjecture_search, Conjecture, SearchMode, SearchParams};
use rainbow_core::{
    build_network, verify_arrow_statement, ArrowOutcome, BipartiteGraph, Error, Network, NetworkFamily,
    RainbowMatching, SolveMode, SolveOutcome, Vertex,
};

const EXIT_OTHER: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_PARSE: u8 = 64;
const EXIT_PARAMS: u8 = 65;
const EXIT_CERT: u8 = 66;

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Rainbow matchings under the cooperative condition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a rainbow matching of size n in a family of 2n+k-3 sets.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "hybrid")]
        mode: ModeArg,
    },
    /// Evaluate "every k sets have a matching of size n, so a rainbow matching of size q exists" on one family of m sets.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
    },
    /// Print a generated instance.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Overridden by the RAINBOW_SEED environment variable.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Right side size for random families (default n).
        #[arg(long)]
        right: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: f64,
        #[arg(long, default_value_t = 1000)]
        attempts: usize,
    },
    /// Verify a regimentation certificate and check its structural consequences.
    Certify {
        /// Network file, or instance file (with --matching for the current rainbow matching).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        regimentation: PathBuf,
        #[arg(long)]
        matching: Option<PathBuf>,
    },
    /// Search small families for counterexamples to a strengthened statement.
    Search {
        #[arg(long, value_enum)]
        conjecture: ConjectureArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        left: usize,
        #[arg(long, default_value_t = 2)]
        right: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: SearchModeArg,
        /// Overridden by the RAINBOW_SEED environment variable.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Print the network in Graphviz DOT format.
    ExportDot {
        /// Network file, or instance file (with --matching for the current rainbow matching).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        matching: Option<PathBuf>,
        /// Marks arcs backward on its paths.
        #[arg(long)]
        regimentation: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Constructive,
    Oracle,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Sharpness,
    Drisko,
    Staircase,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConjectureArg {
    /// Graded union condition over all subfamilies.
    #[value(alias = "c4.1")]
    Graded,
    /// Members doubled onto a disjoint vertex copy.
    #[value(alias = "c4.3")]
    Doubled,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchModeArg {
    Exhaustive,
    Sampled,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8) -> impl FnOnce(anyhow::Error) -> Failure {
    move |error| Failure { code, error }
}

/// Exit code for a library error raised while checking parameters.
fn params(e: Error) -> Failure {
    let code = match e {
        Error::Stalled(_) | Error::BudgetExhausted { .. } => EXIT_OTHER,
        _ => EXIT_PARAMS,
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { input, n, k, mode } => solve(&input, n, k, mode),
        Command::Check { input, m, k, n, q } => check(&input, m, k, n, q),
        Command::Gen {
            family,
            n,
            k,
            seed,
            right,
            density,
            attempts,
        } => seed_override(seed).and_then(|seed| generate(family, n, k, seed, right, density, attempts)),
        Command::Certify {
            input,
            regimentation,
            matching,
        } => certify(&input, &regimentation, matching.as_deref()),
        Command::Search {
            conjecture,
            k,
            left,
            right,
            mode,
            seed,
            budget,
        } => seed_override(seed).and_then(|seed| search(conjecture, k, left, right, mode, seed, budget)),
        Command::ExportDot {
            input,
            matching,
            regimentation,
        } => export_dot(&input, matching.as_deref(), regimentation.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn seed_override(seed: u64) -> Result<u64, Failure> {
    match std::env::var("RAINBOW_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!("RAINBOW_SEED={v:?} is not an unsigned integer"))
            .map_err(fail(EXIT_PARAMS)),
        Err(_) => Ok(seed),
    }
}

fn read(path: &Path, code: u8) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(fail(code))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read(path, EXIT_PARSE)?;
    parse_instance(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(fail(EXIT_PARSE))
}

fn solve(input: &Path, n: usize, k: usize, mode: ModeArg) -> Outcome {
    let inst = load_instance(input)?;
    let mode = match mode {
        ModeArg::Constructive => SolveMode::Constructive,
        ModeArg::Oracle => SolveMode::Oracle,
        ModeArg::Hybrid => SolveMode::Hybrid,
    };
    match rainbow_core::solve_main(&inst.graph(), &inst.family, k, n, mode).map_err(params)? {
        SolveOutcome::Solved { matching, trail, .. } => {
            print!("{}", write_matching_certificate(&matching, &trail));
            Ok(0)
        }
        SolveOutcome::HypothesisFailure { failing, nu } => {
            println!(
                "hypothesis-failure: sets {:?} have matching number {nu} < {n}",
                one_based(&failing)
            );
            Ok(EXIT_HYPOTHESIS)
        }
        SolveOutcome::Violation { nu_r } => {
            println!("violation: hypothesis holds but the largest rainbow matching has size {nu_r} < {n}");
            Ok(EXIT_VIOLATION)
        }
    }
}

fn one_based(members: &[usize]) -> Vec<usize> {
    members.iter().map(|m| m + 1).collect()
}

fn check(input: &Path, m: usize, k: usize, n: usize, q: usize) -> Outcome {
    let inst = load_instance(input)?;
    match verify_arrow_statement(m, k, n, q, &inst.family).map_err(params)? {
        ArrowOutcome::Holds { witness } => println!("holds: rainbow matching of size {witness} >= {q}"),
        ArrowOutcome::HypothesisFailure { failing, nu } => println!(
            "hypothesis-failure: sets {:?} have matching number {nu} < {n}",
            one_based(&failing)
        ),
        ArrowOutcome::Counterexample { nu_r } => {
            println!("counterexample: hypothesis holds, largest rainbow matching {nu_r} < {q}")
        }
    }
    Ok(0)
}

fn generate(
    family: FamilyArg,
    n: Option<usize>,
    k: Option<usize>,
    seed: u64,
    right: Option<usize>,
    density: f64,
    attempts: usize,
) -> Outcome {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Failure {
        code: EXIT_PARAMS,
        error: anyhow!("--{name} is required for this family"),
    });
    let inst = match family {
        FamilyArg::Sharpness => {
            let n = need(n, "n")?;
            let (_, fam) = sharpness_family(n, need(k, "k")?).map_err(params)?;
            Instance { left: n, right: n, family: fam }
        }
        FamilyArg::Drisko => {
            let n = need(n, "n")?;
            Instance {
                left: n,
                right: n,
                family: drisko_family(n, seed).map_err(params)?,
            }
        }
        FamilyArg::Staircase => {
            let k = need(k, "k")?;
            Instance {
                left: k,
                right: k,
                family: staircase_family(k, seed).map_err(params)?,
            }
        }
        FamilyArg::Random => {
            let (n, k) = (need(n, "n")?, need(k, "k")?);
            let right = right.unwrap_or(n);
            let g = BipartiteGraph::complete(n, right).map_err(params)?;
            let fam = random_cooperative_family(n, k, &g, seed, attempts, density)
                .map_err(params)?
                .ok_or_else(|| Failure {
                    code: EXIT_OTHER,
                    error: anyhow!("no cooperative family found in {attempts} attempts"),
                })?;
            Instance { left: n, right, family: fam }
        }
    };
    print!("{}", write_instance(&inst));
    Ok(0)
}

/// The network of an input file: taken directly from a network file, or
/// built from an instance and its current rainbow matching.
fn load_network(input: &Path, matching: Option<&Path>) -> Result<(Network, NetworkFamily), Failure> {
    let text = read(input, EXIT_PARSE)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", input.display()))
        .map_err(fail(EXIT_PARSE))?;
    if value.get("inner").is_some() {
        if matching.is_some() {
            return Err(Failure {
                code: EXIT_PARAMS,
                error: anyhow!("--matching applies to instance files only"),
            });
        }
        return parse_network(&text)
            .with_context(|| format!("parsing {}", input.display()))
            .map_err(fail(EXIT_PARSE));
    }
    let inst = parse_instance(&text)
        .with_context(|| format!("parsing {}", input.display()))
        .map_err(fail(EXIT_PARSE))?;
    let rm = match matching {
        Some(path) => parse_matching_certificate(&read(path, EXIT_CERT)?, &inst.family)
            .with_context(|| format!("parsing {}", path.display()))
            .map_err(fail(EXIT_CERT))?,
        None => RainbowMatching::empty(),
    };
    build_network(&inst.graph(), &inst.family, &rm).map_err(params)
}

fn certify(input: &Path, regimentation: &Path, matching: Option<&Path>) -> Outcome {
    let (net, nf) = load_network(input, matching)?;
    let written = parse_regimentation(&read(regimentation, EXIT_CERT)?, net.inner_count())
        .with_context(|| format!("parsing {}", regimentation.display()))
        .map_err(fail(EXIT_CERT))?;
    let checked = Regimentation::from_member_ids(&nf, written.paths, &written.assignment)
        .and_then(|r| verify_regimentation(&net, &nf, &r).map(|_| r));
    let r = match checked {
        Ok(r) => r,
        Err(v) => {
            let text = describe(&v, &nf);
            match v.condition() {
                Some(c) => println!("FAIL condition {c}: {text}"),
                None => println!("FAIL: {text}"),
            }
            return Ok(EXIT_VIOLATION);
        }
    };
    match check_structure_lemmas(&net, &nf, &r).map_err(params)? {
        StructureReport::HypothesisNotMet(p) => {
            println!("PASS (1)(2)(3); structure checks skipped, rainbow s-t path {}", p.path);
            Ok(0)
        }
        StructureReport::Checked(c) => {
            let checks = [
                ("essential-count", c.essential_count),
                ("inessential-backward", c.inessential_backward),
                ("essential-confined", c.essential_confined),
                ("inessential-pathless", c.inessential_pathless),
                ("essential-unique-path", c.essential_unique_path),
                ("essential-iff-path", c.essential_iff_path),
            ];
            let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
            if failed.is_empty() {
                println!("PASS (1)(2)(3), essential-count OK");
                for (name, _) in &checks[1..] {
                    println!("  {name} OK");
                }
                Ok(0)
            } else {
                println!("PASS (1)(2)(3); FAIL structure: {}", failed.join(", "));
                Ok(EXIT_VIOLATION)
            }
        }
    }
}

/// Violation text with 1-based family members and inner vertices.
fn describe(v: &Violation, nf: &NetworkFamily) -> String {
    let vertex = |x: &Vertex| match x {
        Vertex::Inner(i) => (i + 1).to_string(),
        other => other.to_string(),
    };
    match v {
        Violation::UnknownMember(m) => format!("set {} is not an unrepresented member", m + 1),
        Violation::Cover(x) => format!("vertex {} is not covered", vertex(x)),
        Violation::Containment(pos) => format!("set {} does not contain its path", nf.member_id(*pos) + 1),
        other => other.to_string(),
    }
}

fn search(
    conjecture: ConjectureArg,
    k: usize,
    left: usize,
    right: usize,
    mode: SearchModeArg,
    seed: u64,
    budget: u64,
) -> Outcome {
    let conjecture = match conjecture {
        ConjectureArg::Graded => Conjecture::GradedUnions,
        ConjectureArg::Doubled => Conjecture::DoubledCopies,
    };
    let mode = match mode {
        SearchModeArg::Exhaustive => SearchMode::Exhaustive,
        SearchModeArg::Sampled => SearchMode::Sampled { seed },
    };
    let report = conjecture_search(conjecture, SearchParams { k, left, right }, mode, budget).map_err(params)?;
    let space = report.space.map(|s| format!(" of {s}")).unwrap_or_default();
    match &report.counterexample {
        None => println!(
            "no counterexample; {} instances{space} ({} satisfied the hypothesis)",
            report.checked, report.hypothesis_held
        ),
        Some(c) => {
            println!(
                "counterexample ({}): rainbow matching {} < {} after {} instances{space}",
                conjecture.name(),
                c.nu_r,
                c.required,
                report.checked
            );
            let (l, r) = c.family.extent();
            print!(
                "{}",
                write_instance(&Instance {
                    left: l.max(left),
                    right: r.max(right),
                    family: c.family.clone(),
                })
            );
        }
    }
    Ok(0)
}

fn export_dot(input: &Path, matching: Option<&Path>, regimentation: Option<&Path>) -> Outcome {
    let (net, nf) = load_network(input, matching)?;
    let r = match regimentation {
        Some(path) => {
            let written = parse_regimentation(&read(path, EXIT_CERT)?, net.inner_count())
                .with_context(|| format!("parsing {}", path.display()))
                .map_err(fail(EXIT_CERT))?;
            let r = Regimentation::from_member_ids(&nf, written.paths, &written.assignment)
                .map_err(|v| anyhow!(v))
                .map_err(fail(EXIT_CERT))?;
            Some(r)
        }
        None => None,
    };
    print!("{}", to_dot(&net, &nf, r.as_ref()));
    Ok(0)
}
