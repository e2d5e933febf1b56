use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use netlocal::bellpoly::{facet_enumeration, membership_lp, Membership};
use netlocal::finitemodel::{compress_source, evaluate_with, AnyModel, EvalConfig, ModelFile};
use netlocal::netcore::{
    affine_dimension, cardinality_bound_basic, cardinality_bound_refined, is_nonsignaling, relaxation_size,
    AnyBehavior, BehaviorFile, Network, NetworkJson, NetworkRef,
};
use netlocal::polysos::verify_bilocal_certificate;
use netlocal::quantumcorr::compare_table;
use netlocal::scalar::format_rational;
use netlocal::trianglesearch::{
    enumerate_and_prune, numeric_feasibility, possibilistic_feasible, FeasibilityProblem, NumericConfig,
    NumericOutcome, Possibilistic, SearchMode,
};
use netlocal::{Error, Flavor};

#[derive(Parser, Debug)]
#[command(name = "netlocal", version, about = "Finite local models and certificates for causal networks")]
struct Cli {
    /// Numeric flavor for commands that evaluate models.
    #[arg(long, global = true)]
    flavor: Option<Flavor>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Work cap: grid points for `eval`, patterns or nodes for `possibilistic`.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cardinality bounds per source for a network (or the network of a behavior or model file).
    Bound { network: PathBuf },
    /// Size of the degree-2 moment relaxation for the triangle at the given source ranks.
    RelaxSize {
        #[arg(default_values_t = [4u128, 5, 6])]
        ranks: Vec<u128>,
    },
    /// Evaluates a finite local model to its behavior.
    Eval { model: PathBuf },
    /// Compresses sources of an exact model without changing its behavior.
    Compress {
        model: PathBuf,
        /// Source to compress; all sources in order when omitted.
        #[arg(long)]
        source: Option<usize>,
    },
    /// Decides membership in the local polytope of a single-source scenario.
    BellTest { behavior: PathBuf },
    /// Lists every facet of the local polytope of a single-source scenario.
    BellFacets { network: PathBuf },
    /// Searches support patterns of the binary triangle for an exact model of a target.
    TriangleSearch {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value = "2,2,2")]
        cards: String,
        #[arg(long, default_value_t = NumericConfig::default().starts)]
        starts: usize,
        #[arg(long, default_value_t = NumericConfig::default().seed)]
        seed: u64,
    },
    /// Decides whether a set of triangle outcomes is exactly the support of some model.
    Possibilistic {
        /// Comma-separated outcomes such as `001,010`.
        #[arg(long)]
        support: String,
        #[arg(long, default_value = "2,2,2")]
        cards: String,
        /// Depth-first search with propagation instead of a full scan.
        #[arg(long)]
        pruned: bool,
    },
    /// Verifies the bilocal detection-efficiency certificate.
    SosVerify,
    /// Simulates the entanglement-swapping correlators and checks their closed forms.
    QuantumTable {
        #[arg(long)]
        eta: f64,
    },
}

/// Exit status for a successful run: decision-shaped commands report a
/// negative answer with [`Outcome::Negative`].
enum Outcome {
    Positive(Value),
    Negative(Value),
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Resource(_) => 3,
        Error::Verification(_) => 1,
        Error::Domain(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is configured once");
    }
    if cli.cap == Some(0) {
        eprintln!("error: --cap must be positive");
        return ExitCode::from(2);
    }
    let (value, code) = match run(&cli) {
        Ok(Outcome::Positive(v)) => (v, 0),
        Ok(Outcome::Negative(v)) => (v, 1),
        Err(e) => {
            eprintln!("error: {e}");
            (json!({"error": e.to_string()}), exit_code(&e))
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text + "\n"),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    serde_json::from_value(read_json(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A network file, or the network referenced by a behavior or model file.
fn read_network(path: &Path) -> Result<Network, Error> {
    let value = read_json(path)?;
    let network = match value.get("network") {
        Some(inner) => {
            let r: NetworkRef = serde_json::from_value(inner.clone())?;
            r.resolve(path.parent())?
        }
        None => Network::try_from(serde_json::from_value::<NetworkJson>(value)?)?,
    };
    for w in network.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(network)
}

fn read_behavior(path: &Path) -> Result<AnyBehavior, Error> {
    parse_file::<BehaviorFile>(path)?.into_behavior(path.parent())
}

fn read_model(path: &Path) -> Result<AnyModel, Error> {
    parse_file::<ModelFile>(path)?.into_model(path.parent())
}

fn parse_cards(s: &str) -> Result<[usize; 3], Error> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("bad cardinality {p:?}"))))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| Error::Parse(format!("expected three cardinalities, got {s:?}")))
}

/// `"001,010"` to the outcome bitmask over `4a + 2b + c`.
fn parse_support(s: &str) -> Result<u8, Error> {
    let mut mask = 0u8;
    for word in s.split(',').map(str::trim).filter(|w| !w.is_empty()) {
        if word.len() != 3 || !word.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!("outcome {word:?} is not three binary digits")));
        }
        let k = usize::from_str_radix(word, 2).expect("validated digits");
        mask |= 1 << k;
    }
    Ok(mask)
}

fn outcomes(mask: u8) -> Vec<String> {
    (0..8).filter(|k| mask >> k & 1 == 1).map(|k| format!("{k:03b}")).collect()
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Bound { network } => bound(&read_network(network)?),
        Command::RelaxSize { ranks } => {
            let sizes = ranks.iter().map(|&r| relaxation_size(r)).collect::<Result<Vec<_>, _>>()?;
            for s in &sizes {
                eprintln!(
                    "rank {}: {} unknowns, moment matrix side {}",
                    s.rank, s.degrees_of_freedom, s.moment_matrix_side
                );
            }
            Ok(Outcome::Positive(serde_json::to_value(sizes)?))
        }
        Command::Eval { model } => eval(cli, read_model(model)?),
        Command::Compress { model, source } => compress(read_model(model)?, *source),
        Command::BellTest { behavior } => bell_test(read_behavior(behavior)?),
        Command::BellFacets { network } => bell_facets(&read_network(network)?),
        Command::TriangleSearch { target, cards, starts, seed } => {
            triangle_search(read_behavior(target)?, parse_cards(cards)?, *starts, *seed)
        }
        Command::Possibilistic { support, cards, pruned } => {
            let mask = parse_support(support)?;
            let cards = parse_cards(cards)?;
            let mode = match (*pruned, cli.cap) {
                (true, cap) => SearchMode::Pruned { node_cap: cap.unwrap_or(u64::MAX) },
                (false, Some(cap)) => SearchMode::Exhaustive { cap },
                (false, None) => SearchMode::default(),
            };
            let result = possibilistic_feasible(mask, cards, mode)?;
            let base = json!({"support": outcomes(mask), "cards": cards});
            Ok(match result {
                Possibilistic::Feasible(p) => {
                    eprintln!("feasible: pattern {p} has exactly these outcomes");
                    Outcome::Positive(json!({"input": base, "feasible": true, "witness": p.to_string()}))
                }
                Possibilistic::Infeasible => {
                    eprintln!("infeasible: no pattern at cards {cards:?} has exactly these outcomes");
                    Outcome::Negative(json!({"input": base, "feasible": false}))
                }
            })
        }
        Command::SosVerify => {
            let report = verify_bilocal_certificate()?;
            eprint!("{}", report.transcript());
            Ok(Outcome::Positive(report.to_json()))
        }
        Command::QuantumTable { eta } => {
            let table = compare_table(*eta)?;
            for e in &table.entries {
                eprintln!(
                    "{:<10} {:>22.15} {:<14} {}",
                    e.label,
                    e.value,
                    e.formula,
                    if e.pass { "pass" } else { "FAIL" }
                );
            }
            let value = serde_json::to_value(&table)?;
            Ok(if table.all_pass() { Outcome::Positive(value) } else { Outcome::Negative(value) })
        }
    }
}

fn bound(network: &Network) -> Result<Outcome, Error> {
    let dim = affine_dimension(&network.input_sizes(), &network.output_sizes());
    let basic = cardinality_bound_basic(network);
    let mut sources = Vec::new();
    for j in 0..network.source_count() {
        let refined = cardinality_bound_refined(network, j)?;
        eprintln!("source {j}: refined bound {}, basic bound {basic}", refined.value);
        let mut entry = serde_json::to_value(&refined)?;
        entry["source"] = json!(j);
        entry["basic"] = json!(basic);
        sources.push(entry);
    }
    Ok(Outcome::Positive(json!({
        "affineDimension": dim,
        "basic": basic,
        "sources": sources,
    })))
}

fn eval(cli: &Cli, model: AnyModel) -> Result<Outcome, Error> {
    let model = match cli.flavor {
        Some(f) => model.with_flavor(f)?,
        None => model,
    };
    let mut config = EvalConfig::default();
    if let Some(cap) = cli.cap {
        config.grid_cap = cap as u128;
    }
    let behavior = match &model {
        AnyModel::Exact(m) => AnyBehavior::Exact(evaluate_with(m, &config)?),
        AnyModel::Float(m) => AnyBehavior::Float(evaluate_with(m, &config)?),
    };
    let nonsignaling = match &behavior {
        AnyBehavior::Exact(b) => is_nonsignaling(b).nonsignaling,
        AnyBehavior::Float(b) => is_nonsignaling(b).nonsignaling,
    };
    if !nonsignaling {
        return Err(Error::Verification("evaluated behavior is signaling".into()));
    }
    Ok(Outcome::Positive(serde_json::to_value(behavior.to_file())?))
}

fn compress(model: AnyModel, source: Option<usize>) -> Result<Outcome, Error> {
    let AnyModel::Exact(mut model) = model else {
        return Err(Error::Domain("compression needs an exact-flavor model".into()));
    };
    let targets: Vec<usize> = match source {
        Some(j) if j >= model.network().source_count() => {
            return Err(Error::Domain(format!("source {j} does not exist")))
        }
        Some(j) => vec![j],
        None => (0..model.network().source_count()).collect(),
    };
    let before = model.cards();
    for j in targets {
        let c = compress_source(&model, j)?;
        eprintln!(
            "source {j}: {} values -> {} (distinct conditionals {}, hull dimension {})",
            model.cards()[j],
            c.model.cards()[j],
            c.distinct_points,
            c.hull_dimension
        );
        model = c.model;
    }
    eprintln!("cards {before:?} -> {:?}", model.cards());
    Ok(Outcome::Positive(serde_json::to_value(model.to_file())?))
}

fn bell_test(behavior: AnyBehavior) -> Result<Outcome, Error> {
    let behavior = behavior.exact()?;
    Ok(match membership_lp(&behavior)? {
        Membership::Local(d) => {
            eprintln!("local: mixture of {} deterministic strategies", d.support().len());
            Outcome::Positive(json!({
                "result": "local",
                "weights": d.weights.iter().map(format_rational).collect::<Vec<_>>(),
                "support": d.support(),
            }))
        }
        Membership::Nonlocal(cert) => {
            eprintln!("nonlocal: certificate value {}", format_rational(&cert.value));
            Outcome::Negative(json!({"result": "nonlocal", "certificate": cert.to_json()}))
        }
    })
}

fn bell_facets(network: &Network) -> Result<Outcome, Error> {
    let facets = facet_enumeration(network)?;
    eprintln!("{} facets", facets.len());
    let list: Vec<Value> = facets
        .iter()
        .map(|f| {
            json!({
                "xi": f.xi.iter().map(format_rational).collect::<Vec<_>>(),
                "cg": f.cg.iter().map(format_rational).collect::<Vec<_>>(),
                "constant": format_rational(&f.constant),
                "tight": f.tight,
            })
        })
        .collect();
    Ok(Outcome::Positive(json!({"count": facets.len(), "facets": list})))
}

fn triangle_search(target: AnyBehavior, cards: [usize; 3], starts: usize, seed: u64) -> Result<Outcome, Error> {
    if cards != [2, 2, 2] {
        return Err(Error::Domain("pattern enumeration covers cards 2,2,2 only".into()));
    }
    let target = target.exact()?;
    let report = enumerate_and_prune(&target)?;
    eprintln!(
        "{} patterns, {} with the target support, {} up to the stabilizer of order {}",
        report.total,
        report.matching,
        report.survivors.len(),
        report.stabilizer_order
    );
    let config = NumericConfig { starts, seed, ..NumericConfig::default() };
    let mut attempts = Vec::new();
    let mut found = None;
    for pattern in &report.survivors {
        let problem = FeasibilityProblem::new(pattern.clone(), target.clone())?;
        match numeric_feasibility(&problem, &config) {
            NumericOutcome::Model { model, start } => {
                eprintln!("{pattern}: exact model from start {start}");
                attempts.push(json!({"pattern": pattern.to_string(), "found": true, "start": start}));
                found = Some((pattern.to_string(), model));
                break;
            }
            NumericOutcome::NoSolutionFound { starts, best_residual } => {
                eprintln!("{pattern}: no solution in {starts} starts (best residual {best_residual:.3e})");
                attempts.push(json!({
                    "pattern": pattern.to_string(),
                    "found": false,
                    "bestResidual": best_residual,
                }));
            }
        }
    }
    let base = json!({
        "support": outcomes(report.support),
        "total": report.total,
        "matching": report.matching,
        "stabilizerOrder": report.stabilizer_order,
        "survivors": report.survivors.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "attempts": attempts,
    });
    Ok(match found {
        Some((pattern, model)) => {
            let mut v = base;
            v["pattern"] = json!(pattern);
            v["model"] = serde_json::to_value(model.to_file())?;
            Outcome::Positive(v)
        }
        None => Outcome::Negative(base),
    })
}
