use std::path::Path;
use std::time::Duration;

use anyhow::{anyhow, bail, ensure, Context, Result};
use gapforge::ecc::{enumerate_codebook, CodeSpec};
use gapforge::math::{is_prime, parse_big, parse_rational};
use gapforge::reductions::{
    certify_gap, clique_to_setcover_small_universe, compose, preset_derand, preset_w1, preset_w2, remove_weights,
    setcover_to_clique, Composed,
};
use gapforge::solvers::{
    block_greedy, exact_clique, exact_weighted_opt, greedy, ExactOutcome, SolverBudget, SolverError,
};
use gapforge::threshold::{build_threshold_graph, AVertex, BVertex, Faults, ThresholdGraph};
use gapforge::{verify_cover, Limits, SetCoverInstance, SimpleGraph, WeightedSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::file::{emit, load, to_dimacs, to_json, Instance};
use crate::{
    Algo, BudgetArgs, Cli, Command, ExportArgs, GenArgs, GraphArgs, PresetArgs, Reduction, SolveArgs, Theorem,
    VerifyArgs, VerifyMode, EXIT_BUDGET, EXIT_OK, EXIT_VERIFY_FAILED,
};

/// What a command printed and the exit code it asks for.
#[derive(Debug, Clone, PartialEq)]
pub struct Finished {
    pub code: u8,
    pub stdout: String,
}

impl Finished {
    fn report(code: u8, value: &Value) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("reports serialize");
        stdout.push('\n');
        Finished { code, stdout }
    }

    fn silent() -> Self {
        Finished {
            code: EXIT_OK,
            stdout: String::new(),
        }
    }
}

/// Runs one parsed command. Errors are usage or precondition failures.
pub fn run(cli: Cli) -> Result<Finished> {
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Reduce { reduction } => cmd_reduce(reduction),
        Command::Verify(args) => cmd_verify(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Preset(args) => cmd_preset(&args),
        Command::Export(args) => cmd_export(&args),
    }
}

fn budget(args: &BudgetArgs) -> Result<SolverBudget> {
    SolverBudget::new(args.max_weight, args.max_nodes, Duration::from_millis(args.budget_ms))
        .context("--budget-ms, --max-nodes and --max-weight must be positive")
}

fn write_instance(out: Option<&Path>, inst: &Instance) -> Result<Finished> {
    let text = to_json(inst);
    match out {
        Some(path) => {
            emit(Some(path), &text)?;
            Ok(Finished::silent())
        }
        None => Ok(Finished {
            code: EXIT_OK,
            stdout: text,
        }),
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<Finished> {
    ensure!((0.0..=1.0).contains(&args.density), "--density must lie in [0, 1], got {}", args.density);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let inst = if args.graph {
        ensure!(args.weights == [1], "--weights applies to set systems only");
        let mut edges = Vec::new();
        for u in 0..args.vertices {
            for v in u + 1..args.vertices {
                if rng.random_bool(args.density) {
                    edges.push((u, v));
                }
            }
        }
        Instance::Graph(SimpleGraph::new(args.vertices, edges, args.k)?)
    } else {
        ensure!(!args.weights.is_empty(), "--weights needs at least one value");
        ensure!(args.sets > 0 || args.elements == 0 || !args.ensure_cover, "--ensure-cover needs at least one set");
        let mut members: Vec<Vec<usize>> = (0..args.sets)
            .map(|_| (0..args.elements).filter(|_| rng.random_bool(args.density)).collect())
            .collect();
        if args.ensure_cover {
            for e in 0..args.elements {
                if !members.iter().any(|s| s.contains(&e)) {
                    let s = rng.random_range(0..args.sets);
                    members[s].push(e);
                }
            }
        }
        let sets = members
            .into_iter()
            .enumerate()
            .map(|(i, elements)| {
                let weight = args.weights[rng.random_range(0..args.weights.len())];
                WeightedSet::new(i as u64, weight, elements)
            })
            .collect();
        Instance::SetCover(SetCoverInstance::new(args.elements, sets, args.k)?)
    };
    write_instance(args.out.as_deref(), &inst)
}

fn least_prime_from(mut p: u64) -> u64 {
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Least prime `p >= max(m, 2)` with `p^r >= sets`.
fn default_alphabet(m: usize, r: usize, sets: usize) -> Result<u32> {
    let mut p = least_prime_from(m.max(2) as u64);
    while (p as u128).saturating_pow(r as u32) < sets as u128 {
        p = least_prime_from(p + 1);
    }
    u32::try_from(p).map_err(|_| anyhow!("alphabet {p} is too large"))
}

fn threshold_graph(p: u32, r: usize, m: usize, k: usize, epsilon: &str, limits: &Limits) -> Result<ThresholdGraph> {
    let epsilon = parse_rational(epsilon).ok_or_else(|| anyhow!("cannot parse epsilon `{epsilon}`"))?;
    let spec = CodeSpec::reed_solomon(p, r, m)?;
    let book = enumerate_codebook(&spec, limits)?;
    Ok(build_threshold_graph(book, k, epsilon, limits)?)
}

fn graph_from_args(args: &GraphArgs, sets: usize, limits: &Limits) -> Result<ThresholdGraph> {
    let p = match args.p {
        Some(p) => p,
        None => default_alphabet(args.m, args.r, sets)?,
    };
    threshold_graph(p, args.r, args.m, args.k, &args.epsilon, limits)
}

pub fn cmd_reduce(reduction: Reduction) -> Result<Finished> {
    let limits = Limits::default();
    match reduction {
        Reduction::Compose { input, c, graph, out } => {
            let gamma = load(&input)?.set_cover()?;
            let g = graph_from_args(&graph, gamma.len(), &limits)?;
            let composed = compose(&gamma, &g, c, &limits)?;
            write_instance(out.as_deref(), &Instance::SetCover(composed.instance))
        }
        Reduction::RemoveWeights { input, out } => {
            let gamma = load(&input)?.set_cover()?;
            write_instance(out.as_deref(), &Instance::SetCover(remove_weights(&gamma, &limits)?))
        }
        Reduction::CliqueToSetcover { input, k, out } => {
            let g = load(&input)?.graph()?;
            let k = resolve_k(k, g.parameter_k())?;
            let (inst, _) = clique_to_setcover_small_universe(&g, k)?;
            write_instance(out.as_deref(), &Instance::SetCover(inst))
        }
        Reduction::SetcoverToClique { input, k, out } => {
            let gamma = load(&input)?.set_cover()?;
            let k = resolve_k(k, gamma.parameter_k())?;
            let red = setcover_to_clique(&gamma, k, &limits)?;
            write_instance(out.as_deref(), &Instance::Graph(red.graph))
        }
    }
}

fn resolve_k(flag: Option<usize>, stored: Option<u64>) -> Result<usize> {
    flag.or(stored.map(|k| k as usize))
        .ok_or_else(|| anyhow!("no k given: pass --k or store `k` in the input file"))
}

fn parse_fields<const N: usize>(text: &str, what: &str) -> Result<[u64; N]> {
    let parts: Vec<&str> = text.split(':').collect();
    ensure!(parts.len() == N, "{what} `{text}` needs {N} colon-separated fields");
    let mut out = [0u64; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.trim().parse().with_context(|| format!("{what} `{text}`"))?;
    }
    Ok(out)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Finished> {
    let budget = budget(&args.budget)?;
    match args.mode {
        VerifyMode::ThresholdGraph => verify_threshold_graph(args),
        VerifyMode::Gap => {
            ensure!(args.files.len() == 2, "gap mode takes ORIGINAL and REDUCED files");
            verify_gap(&args.files[0], &args.files[1], &budget)
        }
        VerifyMode::Oracle => {
            ensure!(args.files.len() == 1, "oracle mode takes one instance file");
            verify_oracle(load(&args.files[0])?, args.k, &budget)
        }
    }
}

fn verify_threshold_graph(args: &VerifyArgs) -> Result<Finished> {
    ensure!(args.files.is_empty(), "threshold-graph mode builds its graph from --p, --r, --m, --k");
    let limits = Limits::default();
    let m = args.m.ok_or_else(|| anyhow!("threshold-graph mode needs --m"))?;
    let k = args.k.ok_or_else(|| anyhow!("threshold-graph mode needs --k"))?;
    let p = match args.p {
        Some(p) => p,
        None => default_alphabet(m, args.r, 0)?,
    };
    let mut faults = Faults::default();
    for text in &args.delete_edges {
        let [ap, codeword, bp, index] = parse_fields::<4>(text, "--delete-edge")?;
        let a = AVertex {
            part: ap as usize,
            codeword: codeword as usize,
        };
        faults.removed_edges.insert((a, BVertex { part: bp as usize, index }));
    }
    for text in &args.delete_b {
        let [part, index] = parse_fields::<2>(text, "--delete-b")?;
        faults.removed_b.insert(BVertex {
            part: part as usize,
            index,
        });
    }
    let g = threshold_graph(p, args.r, m, k, &args.epsilon, &limits)?.with_faults(faults);
    let covering = g.check_covering_property(&limits)?;
    let mut passed = covering.passed;
    let mut code = EXIT_OK;
    let sweep = if args.no_sweep {
        json!({ "skipped": "--no-sweep" })
    } else {
        match g.sweep_threshold_property(args.sweep_max, &limits) {
            Ok(report) => {
                passed &= report.passed();
                serde_json::to_value(&report)?
            }
            Err(err) => {
                code = EXIT_BUDGET;
                json!({ "skipped": err.to_string() })
            }
        }
    };
    if !passed {
        code = EXIT_VERIFY_FAILED;
    }
    let report = json!({
        "mode": "threshold-graph",
        "code": { "p": p, "r": args.r, "m": m },
        "params": g.params(),
        "faults": { "removed_edges": g.faults().removed_edges.len(), "removed_b": g.faults().removed_b.len() },
        "covering": covering,
        "threshold_sweep": sweep,
        "passed": passed,
    });
    Ok(Finished::report(code, &report))
}

/// Exact `log_p n`, when `n` is a power of `p`.
fn exact_log(n: u64, p: u64) -> Option<usize> {
    let mut power = 1u64;
    for r in 0..64 {
        if power == n {
            return Some(r);
        }
        power = power.checked_mul(p)?;
    }
    None
}

fn verify_gap(original: &Path, reduced: &Path, budget: &SolverBudget) -> Result<Finished> {
    let limits = Limits::default();
    let gamma = load(original)?.set_cover()?;
    let reduced = load(reduced)?.set_cover()?;
    let step = reduced
        .provenance()
        .iter()
        .rev()
        .find(|s| s.reduction == "compose")
        .ok_or_else(|| anyhow!("the reduced instance records no compose step"))?
        .clone();
    let param = |key: &str| -> Result<u64> {
        step.parameter(key)
            .ok_or_else(|| anyhow!("compose step lacks `{key}`"))?
            .parse()
            .with_context(|| format!("compose parameter `{key}`"))
    };
    let (p, n, m, k, c) = (param("alphabet")?, param("n")?, param("m")?, param("k")?, param("c")?);
    let r = exact_log(n, p).ok_or_else(|| anyhow!("n = {n} is not a power of the alphabet {p}"))?;
    let epsilon = step.parameter("epsilon").unwrap_or("1/2");
    let p = u32::try_from(p).context("alphabet")?;
    let graph = threshold_graph(p, r, m as usize, k as usize, epsilon, &limits)?;
    let recomputed = compose(&gamma, &graph, c as usize, &limits)?;
    let matches = recomputed.instance.content_hash() == reduced.content_hash();
    let composed = Composed {
        instance: reduced,
        layout: recomputed.layout,
    };
    let report = certify_gap(&gamma, &composed, &graph, budget)?;
    let passed = report.passed && matches;
    let code = if passed {
        EXIT_OK
    } else if report.provenance_ok && matches && !report.unverified.is_empty() {
        EXIT_BUDGET
    } else {
        EXIT_VERIFY_FAILED
    };
    let mut value = serde_json::to_value(&report)?;
    value["mode"] = json!("gap");
    value["recomputed_matches"] = json!(matches);
    value["passed"] = json!(passed);
    Ok(Finished::report(code, &value))
}

/// Minimum cover weight by enumerating every subfamily; `None` if no cover.
pub fn enumerate_opt(inst: &SetCoverInstance) -> Option<u64> {
    let n = inst.len();
    let mut best: Option<u64> = None;
    for mask in 0u64..1 << n {
        let indices: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let weight: u64 = indices.iter().map(|&i| inst.sets()[i].weight).sum();
        if best.is_some_and(|b| weight >= b) {
            continue;
        }
        let solution = inst.solution_from_indices(indices);
        if verify_cover(inst, &solution).is_ok_and(|c| c.covered) {
            best = Some(weight);
        }
    }
    best
}

const ENUMERATION_LIMIT: usize = 20;

fn verify_oracle(inst: Instance, k: Option<usize>, budget: &SolverBudget) -> Result<Finished> {
    match inst {
        Instance::SetCover(inst) => {
            let exact = exact_weighted_opt(&inst, budget);
            let mut checks = Vec::new();
            let mut code = EXIT_OK;
            match &exact.outcome {
                ExactOutcome::Optimal { weight, witness } => {
                    let covers = verify_cover(&inst, witness)?.covered;
                    checks.push(json!({ "check": "exact witness covers", "holds": covers }));
                    if let Ok(g) = greedy(&inst) {
                        let ok = verify_cover(&inst, &g)?.covered && g.total_weight() >= *weight;
                        checks.push(json!({ "check": "greedy covers and weighs at least OPT", "holds": ok, "greedy": g.total_weight() }));
                    }
                    if inst.len() <= ENUMERATION_LIMIT {
                        let brute = enumerate_opt(&inst);
                        checks.push(json!({ "check": "exact equals enumeration", "holds": brute == Some(*weight), "enumeration": brute }));
                    }
                }
                ExactOutcome::Infeasible { .. } => {
                    if inst.len() <= ENUMERATION_LIMIT {
                        let brute = enumerate_opt(&inst);
                        checks.push(json!({ "check": "enumeration finds no cover", "holds": brute.is_none() }));
                    }
                }
                _ => code = EXIT_BUDGET,
            }
            let passed = checks.iter().all(|c| c["holds"] == json!(true));
            if !passed {
                code = EXIT_VERIFY_FAILED;
            }
            Ok(Finished::report(
                code,
                &json!({ "mode": "oracle", "kind": "setcover", "exact": exact, "checks": checks, "passed": passed && code == EXIT_OK }),
            ))
        }
        Instance::Graph(g) => {
            let k = resolve_k(k, g.parameter_k())?;
            let result = exact_clique(&g, k);
            let mut checks = vec![json!({
                "check": "witness is a k-clique",
                "holds": result.witness.as_ref().is_none_or(|w| w.len() == k && g.is_clique(w)),
            })];
            if g.vertex_count() <= 24 {
                let brute = brute_clique(&g, k);
                checks.push(json!({ "check": "search equals enumeration", "holds": brute == result.found }));
            }
            let passed = checks.iter().all(|c| c["holds"] == json!(true));
            let code = if passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
            Ok(Finished::report(
                code,
                &json!({ "mode": "oracle", "kind": "graph", "k": k, "clique": { "found": result.found, "witness": result.witness }, "checks": checks, "passed": passed }),
            ))
        }
    }
}

fn brute_clique(g: &SimpleGraph, k: usize) -> bool {
    fn extend(g: &SimpleGraph, k: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in start..g.vertex_count() {
            if chosen.iter().all(|&u| g.has_edge(u, v)) {
                chosen.push(v);
                if extend(g, k, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    extend(g, k, 0, &mut Vec::new())
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Finished> {
    let budget = budget(&args.budget)?;
    let inst = load(&args.file)?;
    match args.algo {
        Algo::Exact => {
            let inst = inst.set_cover()?;
            let report = exact_weighted_opt(&inst, &budget);
            let code = match report.outcome {
                ExactOutcome::Optimal { .. } | ExactOutcome::Infeasible { .. } => EXIT_OK,
                _ => EXIT_BUDGET,
            };
            Ok(Finished::report(code, &json!({ "algo": "exact", "report": report })))
        }
        Algo::Greedy => {
            let inst = inst.set_cover()?;
            let solution = greedy(&inst)?;
            Ok(Finished::report(
                EXIT_OK,
                &json!({ "algo": "greedy", "weight": solution.total_weight(), "solution": solution }),
            ))
        }
        Algo::BlockGreedy => {
            let inst = inst.set_cover()?;
            let k = resolve_k(args.k, inst.parameter_k())?;
            let t = match args.t {
                Some(t) => t,
                None if k >= 3 => k - 1,
                None => bail!("block greedy needs k >= 3 for the default T = k - 1"),
            };
            match block_greedy(&inst, k, t, &budget) {
                Ok(report) => Ok(Finished::report(EXIT_OK, &json!({ "algo": "block-greedy", "report": report }))),
                Err(SolverError::BudgetExhausted { nodes }) => Ok(Finished::report(
                    EXIT_BUDGET,
                    &json!({ "algo": "block-greedy", "budget_exhausted": true, "nodes": nodes }),
                )),
                Err(err) => Err(err.into()),
            }
        }
        Algo::Clique => {
            let g = inst.graph()?;
            let k = resolve_k(args.k, g.parameter_k())?;
            let result = exact_clique(&g, k);
            Ok(Finished::report(
                EXIT_OK,
                &json!({ "algo": "clique", "k": k, "found": result.found, "witness": result.witness }),
            ))
        }
    }
}

pub fn cmd_preset(args: &PresetArgs) -> Result<Finished> {
    let n = parse_big(&args.n).ok_or_else(|| anyhow!("cannot parse n = `{}`", args.n))?;
    let params = match args.theorem {
        Theorem::W2 => preset_w2(&n, args.k, args.c0)?,
        Theorem::W1 => preset_w1(&n, args.k, args.floor)?,
        Theorem::Derand => preset_derand(&n, args.k)?,
    };
    Ok(Finished::report(EXIT_OK, &serde_json::to_value(&params)?))
}

pub fn cmd_export(args: &ExportArgs) -> Result<Finished> {
    let inst = load(&args.file)?.set_cover()?;
    let text = match args.format {
        crate::ExportFormat::Dimacs => to_dimacs(&inst),
    };
    match &args.out {
        Some(path) => {
            emit(Some(path), &text)?;
            Ok(Finished::silent())
        }
        None => Ok(Finished {
            code: EXIT_OK,
            stdout: text,
        }),
    }
}
