//! Acceptance suite. One line per criterion:
//!
//! ```text
//! PASS  <id>  <name>  <detail>  (<seconds>)
//! ```
//!
//! Time limits are part of each criterion. Criterion 9 is listed in
//! `KNOWN_FAILURES`: its second implication does not hold for this
//! reduction, so it prints FAIL. The process exits non-zero when the set of
//! failing criteria differs from that list in either direction.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gapforge::ecc::{enumerate_codebook, min_relative_distance, CodeSpec, Codebook};
use gapforge::math::{parse_big, Rational};
use gapforge::reductions::{
    certify_gap, clique_to_setcover_small_universe, compose, preset_derand, preset_w2, remove_weights,
    setcover_to_clique,
};
use gapforge::solvers::{block_greedy, certify_no_cover_at_most, exact_clique, SolverBudget};
use gapforge::threshold::{build_threshold_graph, AVertex, BVertex, ThresholdGraph};
use gapforge::{verify_cover, Limits, SetCoverInstance, SimpleGraph, WeightedSet};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[u32] = &[9];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Minimum cover weight by enumerating every subfamily.
fn brute_opt(inst: &SetCoverInstance) -> Option<u64> {
    let n = inst.len();
    assert!(n <= 20, "brute force over {n} sets");
    let universe = inst.universe_size();
    let masks: Vec<u128> = inst
        .sets()
        .iter()
        .map(|s| s.elements.iter().fold(0u128, |m, &e| m | 1 << e))
        .collect();
    assert!(universe <= 128);
    let full = if universe == 128 { u128::MAX } else { (1u128 << universe) - 1 };
    let mut best = None;
    for choice in 0u32..1 << n {
        let mut union = 0u128;
        let mut weight = 0u64;
        for (i, mask) in masks.iter().enumerate() {
            if choice >> i & 1 == 1 {
                union |= mask;
                weight += inst.sets()[i].weight;
            }
        }
        if union == full && best.is_none_or(|b| weight < b) {
            best = Some(weight);
        }
    }
    best
}

fn rs_graph(p: u32, r: usize, m: usize, k: usize) -> ThresholdGraph {
    let limits = Limits::default();
    let book = enumerate_codebook(&CodeSpec::reed_solomon(p, r, m).unwrap(), &limits).unwrap();
    build_threshold_graph(book, k, Rational::new(1, 2), &limits).unwrap()
}

fn random_family(rng: &mut ChaCha8Rng, universe: usize, sets: usize, density: f64) -> Vec<Vec<usize>> {
    (0..sets)
        .map(|_| (0..universe).filter(|_| rng.random_bool(density)).collect())
        .collect()
}

fn rs_distance_law() -> Outcome {
    let limits = Limits::default();
    let mut details = Vec::new();
    let mut ok = true;
    for (p, r, m) in [(5u32, 2usize, 4usize), (7, 2, 5), (7, 3, 6), (11, 2, 8)] {
        let book = enumerate_codebook(&CodeSpec::reed_solomon(p, r, m).unwrap(), &limits).unwrap();
        let measured = min_relative_distance(&book, &limits).unwrap();
        let law = Rational::new((m - r) as u128, m as u128);
        ok &= book.len() == (p as usize).pow(r as u32) && measured >= law;
        details.push(format!("({p},{r},{m}): {measured} >= {law}"));
    }
    outcome(ok, details.join("; "))
}

fn concatenation_distance() -> Outcome {
    let limits = Limits::default();
    // (a, b, a + b) over Z_9
    let sum9 = Codebook::from_encoder(9, 2, Rational::new(2, 3), &limits, |m| {
        Ok(vec![m[0], m[1], (m[0] + m[1]) % 9])
    })
    .unwrap();
    let pairs: Vec<(CodeSpec, Codebook)> = vec![
        (CodeSpec::reed_solomon(3, 2, 3).unwrap(), sum9),
        (
            CodeSpec::reed_solomon(5, 1, 3).unwrap(),
            enumerate_codebook(&CodeSpec::reed_solomon(5, 2, 4).unwrap(), &limits).unwrap(),
        ),
        (
            CodeSpec::reed_solomon(3, 1, 2).unwrap(),
            enumerate_codebook(&CodeSpec::reed_solomon(3, 2, 3).unwrap(), &limits).unwrap(),
        ),
        (CodeSpec::reed_solomon(2, 2, 2).unwrap(), Codebook::repetition(4, 3, &limits).unwrap()),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (symbol_code, block_code) in &pairs {
        let concatenated = Codebook::concatenate(symbol_code, block_code, &limits).unwrap();
        let measured = min_relative_distance(&concatenated, &limits).unwrap();
        let d1 = min_relative_distance(&enumerate_codebook(symbol_code, &limits).unwrap(), &limits).unwrap();
        let d2 = min_relative_distance(block_code, &limits).unwrap();
        ok &= measured >= d1 * d2;
        details.push(format!("{measured} >= {d1}*{d2}"));
    }
    outcome(ok, details.join("; "))
}

fn covering_property() -> Outcome {
    let g = rs_graph(5, 2, 4, 2);
    let report = g.check_covering_property(&Limits::default()).unwrap();
    // literal form: some b in B_j is adjacent to every tuple member
    let t = g.params().t;
    let mut literal = 0u64;
    let mut ok = report.passed;
    for x0 in 0..25 {
        for x1 in 0..25 {
            for part in 0..4 {
                literal += 1;
                let exists = (0..t).any(|index| {
                    let b = BVertex { part, index };
                    [x0, x1]
                        .iter()
                        .enumerate()
                        .all(|(p, &codeword)| g.adjacency(AVertex { part: p, codeword }, b).unwrap())
                });
                ok &= exists;
            }
        }
    }
    ok &= literal == 2500 && report.tuples_checked == 2500;
    outcome(ok, format!("{} (tuple, part) checks, literal scan {literal}", report.tuples_checked))
}

fn threshold_property() -> Outcome {
    let g = rs_graph(3, 2, 3, 2);
    let h_floor = g.params().h_floor() as usize;
    let report = g.sweep_threshold_property(Some(h_floor), &Limits::default()).unwrap();
    outcome(
        report.passed() && report.max_subset_size == h_floor,
        format!(
            "|X| <= {h_floor}, {} subsets, {} b-choices, max bad-index count {}",
            report.subsets_checked, report.b_choices_checked, report.max_bad_index_count
        ),
    )
}

fn gap_completeness() -> Outcome {
    let g = rs_graph(5, 2, 4, 2);
    let gamma = SetCoverInstance::unweighted(3, vec![vec![0, 1], vec![2], vec![0], vec![1]], Some(2)).unwrap();
    let cover = gamma.solution([gapforge::SetId(0), gapforge::SetId(1)]).unwrap();
    if !verify_cover(&gamma, &cover).unwrap().covered {
        return outcome(false, "the source 2-cover does not verify");
    }
    let composed = compose(&gamma, &g, 2, &Limits::default()).unwrap();
    let witness = composed.completeness_witness(&gamma, &g, &cover).unwrap();
    let check = verify_cover(&composed.instance, &witness).unwrap();
    let report = certify_gap(&gamma, &composed, &g, &SolverBudget::default()).unwrap();
    outcome(
        check.covered && witness.total_weight() == 8 && report.passed,
        format!(
            "witness weight {} (2m = 8), covers {} of {} elements, gap report {}",
            witness.total_weight(),
            composed.instance.universe_size() - check.uncovered_elements.len(),
            composed.instance.universe_size(),
            if report.passed { "pass" } else { "fail" }
        ),
    )
}

/// All covers of weight `<= 2` in a composed instance: `A` sets weigh `m/k`,
/// `B` sets weigh 1.
fn light_cover_exists(inst: &SetCoverInstance, bound: u64) -> bool {
    let light: Vec<usize> = (0..inst.len()).filter(|&i| inst.sets()[i].weight <= bound).collect();
    let covers = |picks: &[usize]| {
        let mut seen = vec![false; inst.universe_size()];
        for &i in picks {
            for &e in &inst.sets()[i].elements {
                seen[e] = true;
            }
        }
        seen.iter().all(|&s| s)
    };
    for size in 1..=bound as usize {
        for picks in light.iter().copied().combinations(size) {
            let weight: u64 = picks.iter().map(|&i| inst.sets()[i].weight).sum();
            if weight <= bound && covers(&picks) {
                return true;
            }
        }
    }
    false
}

fn gap_soundness() -> Outcome {
    let g = rs_graph(5, 2, 4, 2);
    let gamma = SetCoverInstance::unweighted(3, vec![vec![0], vec![1], vec![2], vec![0]], Some(2)).unwrap();
    let opt = brute_opt(&gamma);
    if opt.is_none_or(|o| o <= 2) {
        return outcome(false, format!("source OPT {opt:?} is not > 2"));
    }
    let composed = compose(&gamma, &g, 2, &Limits::default()).unwrap();
    // ⌊min{m·h/k, (1-ε)·m·c}⌋ with m = 4, h = √2, k = 2, c = 2
    let threshold = (4.0 * 2f64.sqrt() / 2.0).min(0.5 * 4.0 * 2.0).floor() as u64;
    let certificate = certify_no_cover_at_most(&composed.instance, threshold, &SolverBudget::default());
    let oracle = light_cover_exists(&composed.instance, threshold);
    let report = certify_gap(&gamma, &composed, &g, &SolverBudget::default()).unwrap();
    outcome(
        threshold == 2 && certificate.certified() && !oracle && report.passed,
        format!(
            "source OPT {}, bound {threshold}, certificate {}, independent enumeration found {}",
            opt.unwrap(),
            if certificate.certified() { "no cover" } else { "not certified" },
            if oracle { "a cover" } else { "no cover" }
        ),
    )
}

fn weight_removal() -> Outcome {
    let limits = Limits::default();
    let mut ok = true;
    let mut heavy_cases = 0;
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let universe = rng.random_range(1..=5);
        let count = rng.random_range(1..=5);
        let omega = rng.random_range(2..=3u64);
        let sets: Vec<WeightedSet> = random_family(&mut rng, universe, count, 0.5)
            .into_iter()
            .enumerate()
            .map(|(i, e)| WeightedSet::new(i as u64, if rng.random_bool(0.5) { omega } else { 1 }, e))
            .collect();
        let inst = SetCoverInstance::new(universe, sets, None).unwrap();
        heavy_cases += usize::from(inst.distinct_weights().contains(&omega));
        let out = remove_weights(&inst, &limits).unwrap();
        ok &= out.is_unweighted() && brute_opt(&out) == brute_opt(&inst);
    }
    outcome(ok, format!("30 instances, {heavy_cases} with a weight-ω set"))
}

fn has_triangle(g: &SimpleGraph) -> bool {
    (0..g.vertex_count())
        .tuple_combinations()
        .any(|(a, b, c)| g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c))
}

fn clique_front_end() -> Outcome {
    let mut ok = true;
    let mut yes = 0;
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let density = [0.2, 0.35, 0.5][seed as usize % 3];
        let edges = (0..6usize)
            .tuple_combinations()
            .filter(|_| rng.random_bool(density))
            .collect();
        let g = SimpleGraph::new(6, edges, None).unwrap();
        let (inst, _) = clique_to_setcover_small_universe(&g, 3).unwrap();
        let small = !certify_no_cover_at_most(&inst, 3, &SolverBudget::default()).certified();
        let triangle = has_triangle(&g);
        yes += usize::from(triangle);
        ok &= small == triangle;
    }
    outcome(ok, format!("30 graphs, {yes} with a triangle"))
}

struct CliqueTally {
    equal_k: usize,
    equal_k_found: usize,
    below_k: usize,
    below_k_absent: usize,
    at_most_k_agree: usize,
    above_k: usize,
    above_k_absent: usize,
}

fn clique_appendix_tally() -> CliqueTally {
    let mut t = CliqueTally {
        equal_k: 0,
        equal_k_found: 0,
        below_k: 0,
        below_k_absent: 0,
        at_most_k_agree: 0,
        above_k: 0,
        above_k_absent: 0,
    };
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        // k = 2 with four or more sets groups elements in pairs
        let (k, sets, universe) = match seed % 3 {
            0 => (2, rng.random_range(4..=6), 2 * rng.random_range(1..=2)),
            1 => (2, rng.random_range(2..=3), rng.random_range(1..=4)),
            _ => (3, rng.random_range(3..=6), rng.random_range(2..=4)),
        };
        let family = random_family(&mut rng, universe, sets, 0.45);
        let gamma = SetCoverInstance::unweighted(universe, family, Some(k as u64)).unwrap();
        let red = setcover_to_clique(&gamma, k, &Limits::default()).unwrap();
        let found = exact_clique(&red.graph, red.k_prime).found;
        let opt = brute_opt(&gamma);
        match opt {
            Some(o) if o == k as u64 => {
                t.equal_k += 1;
                t.equal_k_found += usize::from(found);
                t.at_most_k_agree += usize::from(found);
            }
            Some(o) if o < k as u64 => {
                t.below_k += 1;
                t.below_k_absent += usize::from(!found);
                t.at_most_k_agree += usize::from(found);
            }
            _ => {
                t.above_k += 1;
                t.above_k_absent += usize::from(!found);
            }
        }
    }
    t
}

fn clique_appendix() -> Outcome {
    let t = clique_appendix_tally();
    let passed = t.equal_k_found == t.equal_k && t.below_k_absent == t.below_k;
    let diagnostic = format!(
        "OPT = k: {}/{} cliques found; OPT < k: {}/{} without a clique; OPT > k: {}/{} without a clique; \
         reading OPT <= k <=> clique holds on {}/{}",
        t.equal_k_found,
        t.equal_k,
        t.below_k_absent,
        t.below_k,
        t.above_k_absent,
        t.above_k,
        t.at_most_k_agree + t.above_k_absent,
        t.equal_k + t.below_k + t.above_k
    );
    outcome(passed, diagnostic)
}

fn planted(rng: &mut ChaCha8Rng, universe: usize, k: usize, noise: usize) -> SetCoverInstance {
    let mut sets = vec![Vec::new(); k];
    for e in 0..universe {
        sets[rng.random_range(0..k)].push(e);
    }
    sets.extend(random_family(rng, universe, noise, 0.25));
    // shuffle so the planted sets are not first
    for i in (1..sets.len()).rev() {
        let j = rng.random_range(0..=i);
        sets.swap(i, j);
    }
    SetCoverInstance::unweighted(universe, sets, Some(k as u64)).unwrap()
}

fn block_greedy_bound() -> Outcome {
    let mut ok = true;
    let mut details = BTreeSet::new();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + seed);
        let k = rng.random_range(3..=6usize);
        let t = if seed % 2 == 0 { 2 } else { k - 1 };
        let universe = rng.random_range(8..=64usize);
        let noise = rng.random_range(2..=8);
        let inst = planted(&mut rng, universe, k, noise);
        let report = block_greedy(&inst, k, t, &SolverBudget::default()).unwrap();
        let rounds = ((universe as f64).ln() / ((k as f64).ln() - (t as f64).ln())).ceil() as usize;
        let size_bound = rounds * (k - t);
        let mut per_round = true;
        for (i, round) in report.rounds.iter().enumerate() {
            let i = i as u32 + 1;
            per_round &= round.uncovered_after as u128 * (k as u128).pow(i) <= (t as u128).pow(i) * universe as u128;
        }
        let covered = verify_cover(&inst, &report.solution).unwrap().covered;
        ok &= covered && report.solution.len() <= size_bound && per_round;
        details.insert((k, t));
    }
    outcome(ok, format!("20 planted instances, (k, T) pairs {details:?}"))
}

fn preset_arithmetic() -> Outcome {
    let w2 = preset_w2(&parse_big("10^6").unwrap(), 4, 2).unwrap();
    let w2_ok = w2.m == 1024 && w2.c == 8 && w2.completeness == "2048" && w2.soundness == "4096";
    let d = preset_derand(&parse_big("2^256").unwrap(), 4).unwrap();
    let names = ["sigma^(rR) ~ n", "unrounded sigma^(rR) = n", "unrounded mM = L^5/(8LL)", "mM <= L^5/(8LL)"];
    let derand_ok = names.iter().all(|n| d.check(n).is_some_and(|c| c.holds));
    outcome(
        w2_ok && derand_ok,
        format!(
            "w2: m = {}, c = {}, completeness {}, soundness {}; derand: |Σ| = {}, R = {:?}, mM = {}, checks {}",
            w2.m,
            w2.c,
            w2.completeness,
            w2.soundness,
            d.sigma_size,
            d.big_r,
            d.block_length,
            if derand_ok { "hold" } else { "fail" }
        ),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "rs-distance-law", Duration::from_secs(10), rs_distance_law),
        (2, "concatenation-distance", Duration::from_secs(30), concatenation_distance),
        (3, "threshold-covering", Duration::from_secs(10), covering_property),
        (4, "threshold-soundness-sweep", Duration::from_secs(300), threshold_property),
        (5, "gap-completeness", Duration::from_secs(60), gap_completeness),
        (6, "gap-soundness", Duration::from_secs(300), gap_soundness),
        (7, "weight-removal", Duration::from_secs(60), weight_removal),
        (8, "clique-to-setcover", Duration::from_secs(120), clique_front_end),
        (9, "setcover-to-clique", Duration::from_secs(120), clique_appendix),
        (10, "block-greedy", Duration::from_secs(60), block_greedy_bound),
        (11, "preset-arithmetic", Duration::from_secs(1), preset_arithmetic),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let passed = result.passed && elapsed <= limit;
        let mut detail = result.detail;
        if elapsed > limit {
            detail.push_str(&format!("; over the {}s limit", limit.as_secs()));
        }
        if !passed {
            failed.push(id);
            if KNOWN_FAILURES.contains(&id) {
                detail.push_str("; known failure");
            }
        }
        println!(
            "{}  {id:>2}  {name}  {detail}  ({:.2}s)",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 11 criteria pass", 11 - failed.len());
    if failed == KNOWN_FAILURES {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria {failed:?} differ from the known list {KNOWN_FAILURES:?}");
        ExitCode::FAILURE
    }
}
