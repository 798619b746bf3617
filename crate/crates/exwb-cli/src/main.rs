//! `exwb` — command-line front end for the exclusivity workbench.
//!
//! Exit codes: 0 success, 2 computed negative verdict (non-member,
//! self-complementarity refuted, relaxation infeasible, ...), 1 usage or
//! I/O error. Every file output is accompanied by a `.manifest.json`
//! recording the command line, input hashes, seeds and tolerances, so runs
//! can be replayed byte for byte.

mod manifest;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use exwb_core::exgraph::{
    behaviour_to_weights, complement, exclusivity_graph, exclusivity_graph_all_contexts,
    find_isomorphism, h_embedding, is_self_complementary, or_power_capped, ExclusivityGraph,
    VertexWeights, DEFAULT_OR_CAP,
};
use exwb_core::polytope::{
    in_e_n, in_local_polytope, in_qstab, in_stab, verdict_to_json, MembershipVerdict,
};
use exwb_core::quantum::{
    behaviour_from_realization, check_ideal, constraint_c_verdict, npa_infeasibility, seesaw_fit,
    validate_realization, ConstraintCVerdict, NpaOutcome, Realization, SeesawOptions,
};
use exwb_core::scenario::{
    catalog_get, check_nondisturbance, check_normalization, enumerate_contexts,
    tensor_behaviours, Behaviour, Scenario,
};
use exwb_core::suite;
use exwb_core::thetabody::{
    antiblocker_duality_check, in_theta_body, max_linear_over_theta, sandwich_report,
    ThetaVerdict,
};

use manifest::ManifestBuilder;

const EXIT_NEGATIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "exwb", version, about = "Correlation-set membership workbench for Bell/KS scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scenarios, contexts, behaviours and the built-in catalog.
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
    /// Exclusivity graphs and their algebra.
    Exgraph {
        #[command(subcommand)]
        cmd: ExgraphCmd,
    },
    /// Membership verdicts with certificates.
    Membership(MembershipArgs),
    /// Theta-body queries.
    Theta {
        #[command(subcommand)]
        cmd: ThetaCmd,
    },
    /// Projective realizations: validation, evaluation, search, refutation.
    Quantum {
        #[command(subcommand)]
        cmd: QuantumCmd,
    },
    /// Run the whole reproducible check suite.
    PaperSuite(PaperSuiteArgs),
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// Enumerate contexts (cliques of the compatibility graph).
    Contexts {
        #[arg(long)]
        scenario: PathBuf,
        /// List every clique rather than only the maximal ones.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check normalization (A) and non-disturbance (B); exit 2 on failure.
    Check {
        #[arg(long)]
        behaviour: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a catalog behaviour (and optionally its scenario).
    Catalog {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        scenario_out: Option<PathBuf>,
    },
    /// Statistically independent composition of two behaviours.
    Tensor {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExgraphCmd {
    /// Exclusivity graph of a scenario's events.
    Build {
        #[arg(long)]
        scenario: PathBuf,
        /// Include sub-context events, not only maximal-context ones.
        #[arg(long)]
        all_contexts: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Behaviour probabilities as vertex weights of a graph.
    Weights {
        #[arg(long)]
        behaviour: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complement graph.
    Complement {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n-fold OR power.
    OrPower {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        copies: usize,
        #[arg(long, default_value_t = DEFAULT_OR_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 4n-vertex self-complementary embedding, with witness.
    HEmbed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Self-complementarity test; exit 2 when refuted.
    SelfComplementary {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isomorphism search between two graphs; exit 2 when none exists.
    Iso {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DOT rendering for external tools.
    Dot {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MembershipArgs {
    /// One of: stab, qstab, en, theta, local.
    #[arg(long)]
    set: String,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Behaviour input (required for --set local).
    #[arg(long)]
    behaviour: Option<PathBuf>,
    /// Number of copies for --set en.
    #[arg(long, default_value_t = 2)]
    copies: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// Maximize a nonnegative direction over TH(G).
    Max {
        #[arg(long)]
        graph: PathBuf,
        /// JSON weights file; all-ones when omitted (the Lovász number).
        #[arg(long)]
        direction: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership in TH(G); exit 2 on non-member.
    Member {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled antiblocker duality evidence on a self-complementary graph.
    Antiblocker {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform-ray sandwich report for a vertex-transitive graph.
    Sandwich {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QuantumCmd {
    /// Validate the projector axioms of a realization; exit 2 on failure.
    Validate {
        #[arg(long)]
        realization: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the behaviour of a realization.
    Behaviour {
        #[arg(long)]
        realization: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ideal-measurement checks including coarse-grainings; exit 2 on failure.
    Ideal {
        #[arg(long)]
        realization: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alternating search for a realization of a target behaviour.
    Seesaw {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 150)]
        budget: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moment-matrix relaxation; exit 2 when infeasible (non-quantum).
    Npa {
        #[arg(long)]
        behaviour: PathBuf,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combined see-saw plus relaxation verdict; exit 2 on "non-quantum".
    ConstraintC {
        #[arg(long)]
        behaviour: PathBuf,
        #[arg(long, default_value_t = 6)]
        dmax: usize,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PaperSuiteArgs {
    /// Directory for per-criterion artifact files.
    #[arg(long)]
    artifacts: Option<PathBuf>,
    /// Comma-separated criterion ids (1..=11); all when omitted.
    #[arg(long)]
    criteria: Option<String>,
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

fn emit(value: &Value, out: Option<&Path>, manifest: &mut ManifestBuilder) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .with_context(|| format!("cannot write {}", path.display()))?;
            manifest.output(path);
            manifest.write(path)?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_text(text: &str, out: Option<&Path>, manifest: &mut ManifestBuilder) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .with_context(|| format!("cannot write {}", path.display()))?;
            manifest.output(path);
            manifest.write(path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn verdict_exit(v: &MembershipVerdict) -> u8 {
    if v.member {
        0
    } else {
        EXIT_NEGATIVE
    }
}

fn run() -> Result<u8> {
    if let Ok(threads) = std::env::var("EXWB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let mut mf = ManifestBuilder::new();
    match cli.command {
        Command::Scenario { cmd } => scenario_cmd(cmd, &mut mf),
        Command::Exgraph { cmd } => exgraph_cmd(cmd, &mut mf),
        Command::Membership(args) => membership_cmd(args, &mut mf),
        Command::Theta { cmd } => theta_cmd(cmd, &mut mf),
        Command::Quantum { cmd } => quantum_cmd(cmd, &mut mf),
        Command::PaperSuite(args) => paper_suite_cmd(args),
    }
}

fn scenario_cmd(cmd: ScenarioCmd, mf: &mut ManifestBuilder) -> Result<u8> {
    match cmd {
        ScenarioCmd::Contexts { scenario, all, out } => {
            mf.input(&scenario)?;
            let s: Scenario = load_json(&scenario)?;
            let contexts = enumerate_contexts(&s, !all);
            let keys: Vec<String> = contexts.iter().map(|c| c.key(&s)).collect();
            emit(&json!({ "contexts": keys }), out.as_deref(), mf)?;
            Ok(0)
        }
        ScenarioCmd::Check { behaviour, tol, out } => {
            mf.input(&behaviour)?;
            mf.tolerance("check", tol);
            let b: Behaviour = load_json(&behaviour)?;
            let norm = check_normalization(&b, tol);
            let nd = check_nondisturbance(&b, tol);
            let pass = norm.pass && nd.pass;
            let report = json!({
                "normalization": {
                    "pass": norm.pass,
                    "worst_context": norm.worst_context,
                    "worst_deviation": norm.worst_deviation,
                },
                "nondisturbance": {
                    "pass": nd.pass,
                    "pairs_checked": nd.pairs_checked,
                    "max_mismatch": nd.max_mismatch,
                },
                "pass": pass,
            });
            emit(&report, out.as_deref(), mf)?;
            Ok(if pass { 0 } else { EXIT_NEGATIVE })
        }
        ScenarioCmd::Catalog { name, out, scenario_out } => {
            let b = catalog_get(&name).map_err(|e| anyhow::anyhow!("{e}"))?;
            if let Some(path) = &scenario_out {
                let text = serde_json::to_string_pretty(b.scenario())?;
                std::fs::write(path, text)?;
                mf.output(path);
                eprintln!("wrote {}", path.display());
            }
            emit(&serde_json::to_value(&b)?, out.as_deref(), mf)?;
            Ok(0)
        }
        ScenarioCmd::Tensor { left, right, out } => {
            mf.input(&left)?;
            mf.input(&right)?;
            let a: Behaviour = load_json(&left)?;
            let b: Behaviour = load_json(&right)?;
            let t = tensor_behaviours(&a, &b).map_err(|e| anyhow::anyhow!("{e}"))?;
            emit(&serde_json::to_value(&t)?, out.as_deref(), mf)?;
            Ok(0)
        }
    }
}

fn exgraph_cmd(cmd: ExgraphCmd, mf: &mut ManifestBuilder) -> Result<u8> {
    match cmd {
        ExgraphCmd::Build { scenario, all_contexts, out } => {
            mf.input(&scenario)?;
            let s: Scenario = load_json(&scenario)?;
            let g = if all_contexts {
                exclusivity_graph_all_contexts(&s)
            } else {
                exclusivity_graph(&s)
            };
            emit(&serde_json::to_value(&g)?, out.as_deref(), mf)?;
            Ok(0)
        }
        ExgraphCmd::Weights { behaviour, graph, out } => {
            mf.input(&behaviour)?;
            mf.input(&graph)?;
            let b: Behaviour = load_json(&behaviour)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let w = behaviour_to_weights(&b, &g).map_err(|e| anyhow::anyhow!("{e}"))?;
            emit(&serde_json::to_value(&w)?, out.as_deref(), mf)?;
            Ok(0)
        }
        ExgraphCmd::Complement { graph, out } => {
            mf.input(&graph)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            emit(&serde_json::to_value(complement(&g))?, out.as_deref(), mf)?;
            Ok(0)
        }
        ExgraphCmd::OrPower { graph, copies, cap, out } => {
            mf.input(&graph)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let p = or_power_capped(&g, copies, cap).map_err(|e| anyhow::anyhow!("{e}"))?;
            emit(&serde_json::to_value(&p)?, out.as_deref(), mf)?;
            Ok(0)
        }
        ExgraphCmd::HEmbed { graph, out } => {
            mf.input(&graph)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let h = h_embedding(&g);
            let witness = is_self_complementary(&h).map_err(|e| anyhow::anyhow!("{e}"))?;
            let payload = json!({
                "graph": serde_json::to_value(&h)?,
                "self_complementarity_witness": witness,
            });
            emit(&payload, out.as_deref(), mf)?;
            Ok(0)
        }
        ExgraphCmd::SelfComplementary { graph, out } => {
            mf.input(&graph)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let witness = is_self_complementary(&g).map_err(|e| anyhow::anyhow!("{e}"))?;
            let found = witness.is_some();
            emit(&json!({ "self_complementary": found, "witness": witness }), out.as_deref(), mf)?;
            Ok(if found { 0 } else { EXIT_NEGATIVE })
        }
        ExgraphCmd::Iso { graph, other, out } => {
            mf.input(&graph)?;
            mf.input(&other)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let h: ExclusivityGraph = load_json(&other)?;
            let witness = find_isomorphism(&g, &h).map_err(|e| anyhow::anyhow!("{e}"))?;
            let found = witness.is_some();
            emit(&json!({ "isomorphic": found, "witness": witness }), out.as_deref(), mf)?;
            Ok(if found { 0 } else { EXIT_NEGATIVE })
        }
        ExgraphCmd::Dot { graph, out } => {
            mf.input(&graph)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            emit_text(&g.to_dot("exclusivity"), out.as_deref(), mf)?;
            Ok(0)
        }
    }
}

fn membership_cmd(args: MembershipArgs, mf: &mut ManifestBuilder) -> Result<u8> {
    let verdict = match args.set.as_str() {
        "local" => {
            let path = args
                .behaviour
                .as_ref()
                .context("--set local requires --behaviour")?;
            mf.input(path)?;
            let b: Behaviour = load_json(path)?;
            in_local_polytope(&b).map_err(|e| anyhow::anyhow!("{e}"))?
        }
        "theta" => {
            let (g, w) = graph_and_weights(&args, mf)?;
            return theta_membership(&g, &w, args.out.as_deref(), mf);
        }
        other => {
            let (g, w) = graph_and_weights(&args, mf)?;
            match other {
                "stab" => in_stab(&g, &w).map_err(|e| anyhow::anyhow!("{e}"))?,
                "qstab" => in_qstab(&g, &w).map_err(|e| anyhow::anyhow!("{e}"))?,
                "en" => in_e_n(&g, &w, args.copies).map_err(|e| anyhow::anyhow!("{e}"))?,
                _ => bail!("unknown set `{}`; use stab|qstab|en|theta|local", args.set),
            }
        }
    };
    emit(&verdict_to_json(&verdict), args.out.as_deref(), mf)?;
    Ok(verdict_exit(&verdict))
}

fn graph_and_weights(
    args: &MembershipArgs,
    mf: &mut ManifestBuilder,
) -> Result<(ExclusivityGraph, VertexWeights)> {
    let gpath = args.graph.as_ref().context("this set requires --graph")?;
    mf.input(gpath)?;
    let g: ExclusivityGraph = load_json(gpath)?;
    let w = if let Some(wpath) = &args.weights {
        mf.input(wpath)?;
        load_json(wpath)?
    } else if let Some(bpath) = &args.behaviour {
        mf.input(bpath)?;
        let b: Behaviour = load_json(bpath)?;
        behaviour_to_weights(&b, &g).map_err(|e| anyhow::anyhow!("{e}"))?
    } else {
        bail!("provide --weights or --behaviour");
    };
    Ok((g, w))
}

fn theta_membership(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    out: Option<&Path>,
    mf: &mut ManifestBuilder,
) -> Result<u8> {
    match in_theta_body(g, w).map_err(|e| anyhow::anyhow!("{e}"))? {
        ThetaVerdict::Member(cert) => {
            let payload = json!({ "member": true, "certificate": serde_json::to_value(&cert)? });
            emit(&payload, out, mf)?;
            Ok(0)
        }
        ThetaVerdict::NonMember { dual, margin } => {
            let payload = json!({
                "member": false,
                "certificate": { "type": "sdp-dual", "dual": dual, "margin": margin },
            });
            emit(&payload, out, mf)?;
            Ok(EXIT_NEGATIVE)
        }
        ThetaVerdict::Inconclusive { reason } => {
            bail!("theta membership inconclusive: {reason}")
        }
    }
}

fn theta_cmd(cmd: ThetaCmd, mf: &mut ManifestBuilder) -> Result<u8> {
    match cmd {
        ThetaCmd::Max { graph, direction, out } => {
            mf.input(&graph)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let dir: Vec<f64> = match &direction {
                Some(path) => {
                    mf.input(path)?;
                    let w: VertexWeights = load_json(path)?;
                    w.as_slice().to_vec()
                }
                None => vec![1.0; g.len()],
            };
            let v = max_linear_over_theta(&g, &dir).map_err(|e| anyhow::anyhow!("{e}"))?;
            emit(&json!({ "value": v }), out.as_deref(), mf)?;
            Ok(0)
        }
        ThetaCmd::Member { graph, weights, out } => {
            mf.input(&graph)?;
            mf.input(&weights)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let w: VertexWeights = load_json(&weights)?;
            theta_membership(&g, &w, out.as_deref(), mf)
        }
        ThetaCmd::Antiblocker { graph, samples, seed, out } => {
            mf.input(&graph)?;
            mf.seed("antiblocker", seed);
            let g: ExclusivityGraph = load_json(&graph)?;
            let report =
                antiblocker_duality_check(&g, samples, seed).map_err(|e| anyhow::anyhow!("{e}"))?;
            let within = report.all_within;
            emit(&serde_json::to_value(&report)?, out.as_deref(), mf)?;
            Ok(if within { 0 } else { EXIT_NEGATIVE })
        }
        ThetaCmd::Sandwich { graph, n_max, out } => {
            mf.input(&graph)?;
            let g: ExclusivityGraph = load_json(&graph)?;
            let report = sandwich_report(&g, n_max).map_err(|e| anyhow::anyhow!("{e}"))?;
            let ok = report.chain_ok;
            emit(&serde_json::to_value(&report)?, out.as_deref(), mf)?;
            Ok(if ok { 0 } else { EXIT_NEGATIVE })
        }
    }
}

fn quantum_cmd(cmd: QuantumCmd, mf: &mut ManifestBuilder) -> Result<u8> {
    match cmd {
        QuantumCmd::Validate { realization, scenario, out } => {
            mf.input(&realization)?;
            mf.input(&scenario)?;
            let r: Realization = load_json(&realization)?;
            let s: Scenario = load_json(&scenario)?;
            let report = validate_realization(&r, &s).map_err(|e| anyhow::anyhow!("{e}"))?;
            let pass = report.pass;
            emit(&serde_json::to_value(&report)?, out.as_deref(), mf)?;
            Ok(if pass { 0 } else { EXIT_NEGATIVE })
        }
        QuantumCmd::Behaviour { realization, scenario, out } => {
            mf.input(&realization)?;
            mf.input(&scenario)?;
            let r: Realization = load_json(&realization)?;
            let s: Scenario = load_json(&scenario)?;
            let b = behaviour_from_realization(&r, &s).map_err(|e| anyhow::anyhow!("{e}"))?;
            emit(&serde_json::to_value(&b)?, out.as_deref(), mf)?;
            Ok(0)
        }
        QuantumCmd::Ideal { realization, scenario, out } => {
            mf.input(&realization)?;
            mf.input(&scenario)?;
            let r: Realization = load_json(&realization)?;
            let s: Scenario = load_json(&scenario)?;
            let report = check_ideal(&r, &s).map_err(|e| anyhow::anyhow!("{e}"))?;
            let pass = report.pass;
            emit(&serde_json::to_value(&report)?, out.as_deref(), mf)?;
            Ok(if pass { 0 } else { EXIT_NEGATIVE })
        }
        QuantumCmd::Seesaw { scenario, target, dim, budget, restarts, seed, out } => {
            mf.input(&scenario)?;
            mf.input(&target)?;
            mf.seed("seesaw", seed);
            let s: Scenario = load_json(&scenario)?;
            let b: Behaviour = load_json(&target)?;
            let opts = SeesawOptions { seed, restarts, iterations: budget };
            let fit = seesaw_fit(&s, &b, dim, &opts).map_err(|e| anyhow::anyhow!("{e}"))?;
            let payload = json!({
                "distance": fit.distance,
                "restart": fit.restart,
                "realization": serde_json::to_value(&fit.realization)?,
            });
            emit(&payload, out.as_deref(), mf)?;
            Ok(0)
        }
        QuantumCmd::Npa { behaviour, level, out } => {
            mf.input(&behaviour)?;
            let b: Behaviour = load_json(&behaviour)?;
            let outcome =
                npa_infeasibility(b.scenario(), &b, level).map_err(|e| anyhow::anyhow!("{e}"))?;
            let (code, payload) = match outcome {
                NpaOutcome::Feasible { moment_matrix } => {
                    (0, json!({ "status": "feasible", "moment_matrix": moment_matrix }))
                }
                NpaOutcome::Infeasible { certificate } => (
                    EXIT_NEGATIVE,
                    json!({ "status": "infeasible", "certificate": serde_json::to_value(&certificate)? }),
                ),
                NpaOutcome::Inconclusive { reason } => {
                    bail!("relaxation inconclusive: {reason}")
                }
            };
            emit(&payload, out.as_deref(), mf)?;
            Ok(code)
        }
        QuantumCmd::ConstraintC { behaviour, dmax, level, seed, out } => {
            mf.input(&behaviour)?;
            mf.seed("seesaw", seed);
            let b: Behaviour = load_json(&behaviour)?;
            let verdict =
                constraint_c_verdict(&b, dmax, level, seed).map_err(|e| anyhow::anyhow!("{e}"))?;
            let (code, payload) = match verdict {
                ConstraintCVerdict::Quantum { dimension, distance, realization } => (
                    0,
                    json!({
                        "verdict": "quantum (realization found)",
                        "dimension": dimension,
                        "distance": distance,
                        "realization": serde_json::to_value(&*realization)?,
                    }),
                ),
                ConstraintCVerdict::NonQuantum { level, certificate, best_distance } => (
                    EXIT_NEGATIVE,
                    json!({
                        "verdict": "non-quantum (relaxation infeasible)",
                        "level": level,
                        "certificate": serde_json::to_value(&certificate)?,
                        "best_seesaw_distance": best_distance,
                    }),
                ),
                ConstraintCVerdict::Undecided { best_distance, best_dimension, .. } => (
                    0,
                    json!({
                        "verdict": "undecided (gap)",
                        "best_seesaw_distance": best_distance,
                        "best_dimension": best_dimension,
                    }),
                ),
            };
            emit(&payload, out.as_deref(), mf)?;
            Ok(code)
        }
    }
}

fn paper_suite_cmd(args: PaperSuiteArgs) -> Result<u8> {
    let ids: Vec<usize> = match &args.criteria {
        Some(list) => list
            .split(',')
            .map(|t| t.trim().parse::<usize>().context("bad criterion id"))
            .collect::<Result<_>>()?,
        None => (1..=11).collect(),
    };
    if let Some(dir) = &args.artifacts {
        std::fs::create_dir_all(dir)?;
    }
    let mut all_pass = true;
    for id in ids {
        if !(1..=11).contains(&id) {
            bail!("criterion ids are 1..=11");
        }
        let r = suite::run_criterion(id);
        println!(
            "[{}] criterion {:2} {:34} {:7.2}s  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.seconds,
            r.details
        );
        all_pass &= r.pass;
        if let Some(dir) = &args.artifacts {
            let path = dir.join(format!("criterion_{:02}.json", r.id));
            std::fs::write(&path, serde_json::to_string_pretty(&r)?)?;
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
