//! Run reports, instance generators and the benchmark matrix behind the
//! `trimcolor` command line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bhk::{decide_k_colorable, find_coloring};
use crate::dominating::{solve_k_via_k_minus_1, DEFAULT_DELTA};
use crate::error::{Error, Result};
use crate::exact::int;
use crate::graph::{greedy_distance3_set, Graph, ListAssignment, PartialColoring};
use crate::limits::Limits;
use crate::lists::{solve_list_backtracking, solve_list_via_augmentation, Backtracking, ListInstance};
use crate::randomized::{default_max_reps, select_parameters, solve_randomized};
use crate::removal::{check_certificate, removal_lemma, SetFamily};
use crate::trimmed::{
    decide_bounded_stats, decide_with_plan, find_coloring_trimmed, plan_bounded, trimmed_count, work_bound, TrimmedInstance,
    WorkStats,
};

/// Block degree used by the trimmed algorithms when none is given.
pub const DEFAULT_TRIMMED_DELTA: usize = 3;

/// One run of a command. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub verdict: Verdict,
    pub coloring: Option<Vec<u32>>,
    pub counters: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    pub seed: Option<u64>,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Colorable,
    NotColorable,
    /// One-sided search gave up; the graph may still be colorable.
    NoColoringFound,
    CertificateValid,
    Value,
}

impl RunReport {
    fn new(verdict: Verdict, parameters: Value) -> Self {
        RunReport {
            command: Vec::new(),
            verdict,
            coloring: None,
            counters: BTreeMap::new(),
            wall_ms: None,
            seed: None,
            parameters,
            details: Value::Null,
        }
    }

    fn counter(mut self, name: &str, value: u64) -> Self {
        self.counters.insert(name.to_string(), value);
        self
    }

    fn stats(self, s: WorkStats) -> Self {
        self.counter("lattice_entries", s.lattice_entries)
            .counter("beta_entries", s.beta_entries)
            .counter("subsets_visited", s.subsets_visited)
            .counter("colorings_tried", s.colorings_tried)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Times `f` and stores the elapsed milliseconds when `timed`.
pub fn timed(timed: bool, f: impl FnOnce() -> Result<RunReport>) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = f()?;
    if timed {
        report.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn verify(g: &Graph, k: usize, c: Option<PartialColoring>, report: RunReport) -> Result<RunReport> {
    match c {
        Some(c) => {
            if !c.is_proper_k_coloring(g, k) {
                return Err(Error::InternalContradiction("reported coloring does not verify".into()));
            }
            Ok(RunReport {
                verdict: Verdict::Colorable,
                coloring: c.to_vec(),
                ..report
            })
        }
        None => Ok(RunReport {
            verdict: Verdict::NotColorable,
            ..report
        }),
    }
}

fn verdict(colorable: bool) -> Verdict {
    if colorable {
        Verdict::Colorable
    } else {
        Verdict::NotColorable
    }
}

macro_rules! choice_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!("unknown value '{other}'")),
                }
            }
        }
    };
}

choice_enum!(DecideAlgorithm { Bhk => "bhk", Trimmed => "trimmed", Bounded => "bounded" });
choice_enum!(ColorAlgorithm { Bhk => "bhk", Trimmed => "trimmed", Reduction => "reduction", A3 => "a3" });
choice_enum!(ListAlgorithm { Backtracking => "backtracking", Augmentation => "augmentation" });
choice_enum!(Family { Cycle => "cycle", Gnp => "gnp", Bounded => "bounded" });

pub fn decide(g: &Graph, k: usize, algorithm: DecideAlgorithm, delta: Option<usize>, limits: &Limits) -> Result<RunReport> {
    let delta = delta.unwrap_or(DEFAULT_TRIMMED_DELTA);
    match algorithm {
        DecideAlgorithm::Bhk => {
            let yes = decide_k_colorable(g, k, limits)?;
            Ok(RunReport::new(verdict(yes), json!({"algorithm": "bhk", "k": k, "n": g.n()})).counter("lattice_entries", 1u64 << g.n()))
        }
        DecideAlgorithm::Trimmed => {
            let s = greedy_distance3_set(g, delta);
            let h = trimmed_count(&TrimmedInstance { g, s, k, max_block_degree: delta }, limits)?;
            let bound = work_bound(g.n() - s.len(), s.len(), delta);
            let mut r = RunReport::new(
                verdict(h.value > 0.into()),
                json!({"algorithm": "trimmed", "k": k, "n": g.n(), "delta": delta, "selected": s.to_vec()}),
            )
            .stats(h.stats);
            r.details = json!({"cover_count": h.value.to_string(), "bound_rhs": bound.to_string()});
            Ok(r)
        }
        DecideAlgorithm::Bounded => {
            let (yes, stats) = decide_bounded_stats(g, k, delta, limits)?;
            Ok(RunReport::new(verdict(yes), json!({"algorithm": "bounded", "k": k, "n": g.n(), "delta": delta})).stats(stats))
        }
    }
}

/// Options of [`color`] that only some algorithms read.
#[derive(Debug, Clone, Default)]
pub struct ColorOptions {
    pub delta: Option<usize>,
    pub alpha: Option<BigRational>,
    pub seed: Option<u64>,
    pub max_reps: Option<u64>,
    pub epsilon: Option<BigRational>,
}

pub fn color(g: &Graph, k: usize, algorithm: ColorAlgorithm, opts: &ColorOptions, limits: &Limits) -> Result<RunReport> {
    match algorithm {
        ColorAlgorithm::Bhk => {
            let mut calls = 0u64;
            let c = find_coloring(g, k, |h, k| {
                calls += 1;
                decide_k_colorable(h, k, limits)
            })?;
            let r = RunReport::new(Verdict::NotColorable, json!({"algorithm": "bhk", "k": k, "n": g.n()})).counter("decider_calls", calls);
            verify(g, k, c, r)
        }
        ColorAlgorithm::Trimmed => {
            let delta = opts.delta.unwrap_or(DEFAULT_TRIMMED_DELTA);
            let c = find_coloring_trimmed(g, k, delta, limits)?;
            let r = RunReport::new(Verdict::NotColorable, json!({"algorithm": "trimmed", "k": k, "n": g.n(), "delta": delta}));
            verify(g, k, c, r)
        }
        ColorAlgorithm::Reduction => {
            let delta = opts.delta.unwrap_or(DEFAULT_DELTA);
            let alpha = opts.alpha.clone().unwrap_or_else(crate::dominating::default_alpha);
            let out = solve_k_via_k_minus_1(g, k, &alpha, delta, limits, &Backtracking)?;
            let mut r = RunReport::new(
                Verdict::NotColorable,
                json!({"algorithm": "reduction", "k": k, "n": g.n(), "delta": delta, "alpha": alpha.to_string()}),
            )
            .counter("colorings_tried", out.colorings_tried)
            .counter("list_calls", out.list_calls);
            r.details = json!({"branch": out.branch, "dominating_set_size": out.dominating_set_size});
            verify(g, k, out.coloring.map(|c| PartialColoring::from_colors(&c)), r)
        }
        ColorAlgorithm::A3 => {
            let epsilon = opts.epsilon.clone().unwrap_or_else(crate::randomized::default_epsilon);
            let params = select_parameters(k, &epsilon)?;
            let seed = opts.seed.unwrap_or(0);
            let max_reps = opts.max_reps.unwrap_or_else(|| default_max_reps(g.n()));
            let out = solve_randomized(g, &params, seed, max_reps, limits, &Backtracking)?;
            let mut r = RunReport::new(
                Verdict::NoColoringFound,
                json!({"algorithm": "a3", "k": k, "n": g.n(), "max_reps": max_reps, "reduction": params}),
            )
            .counter("attempts", out.attempts)
            .counter("reps", out.reps);
            r.seed = Some(seed);
            r.details = json!({"transcript": out.transcript});
            match out.coloring {
                Some(c) => verify(g, k, Some(PartialColoring::from_colors(&c)), r),
                None => Ok(r),
            }
        }
    }
}

pub fn listcolor(
    g: &Graph,
    lists: &ListAssignment,
    k: Option<usize>,
    algorithm: ListAlgorithm,
    delta: Option<usize>,
    limits: &Limits,
) -> Result<RunReport> {
    let inst = ListInstance::new(g.clone(), lists.clone())?;
    let k = k.unwrap_or_else(|| lists.max_list_size());
    match algorithm {
        ListAlgorithm::Backtracking => {
            let c = solve_list_backtracking(&inst)?;
            let mut r = RunReport::new(verdict(c.is_some()), json!({"algorithm": "backtracking", "n": g.n()}));
            if let Some(c) = c {
                if !inst.accepts(&c) {
                    return Err(Error::InternalContradiction("reported list coloring does not verify".into()));
                }
                r.coloring = c.to_vec();
            }
            Ok(r)
        }
        ListAlgorithm::Augmentation => {
            let delta = delta.unwrap_or(DEFAULT_TRIMMED_DELTA);
            let yes = solve_list_via_augmentation(&inst, k, delta, limits)?;
            Ok(RunReport::new(verdict(yes), json!({"algorithm": "augmentation", "n": g.n(), "k": k, "delta": delta})))
        }
    }
}

pub fn removal(f: &SetFamily, c: &BigRational) -> Result<RunReport> {
    let result = removal_lemma(f, c)?;
    check_certificate(f, c, &result)?;
    let mut r = RunReport::new(
        Verdict::CertificateValid,
        json!({"C": c.to_string(), "delta": f.delta(), "sets": f.len(), "universe": f.universe_size()}),
    )
    .counter("thresholds_scanned", result.thresholds_scanned)
    .counter("thresholds_evaluated", result.thresholds_evaluated);
    r.details = serde_json::to_value(&result).expect("removal results serialize");
    Ok(r)
}

/// Brute-force references, reported like the main commands.
pub mod oracle_cmd {
    use super::*;
    use crate::oracle::{brute_chromatic_number, brute_cover_count, brute_k_colorable, brute_list_colorable, brute_removal_best, OracleBudget};

    pub fn colorable(g: &Graph, k: usize, b: &OracleBudget) -> Result<RunReport> {
        Ok(RunReport::new(verdict(brute_k_colorable(g, k, b)?), json!({"oracle": "colorable", "k": k, "n": g.n()})))
    }

    pub fn chromatic(g: &Graph, b: &OracleBudget) -> Result<RunReport> {
        let mut r = RunReport::new(Verdict::Value, json!({"oracle": "chromatic", "n": g.n()}));
        r.details = json!({"chromatic_number": brute_chromatic_number(g, b)?});
        Ok(r)
    }

    pub fn cover(g: &Graph, k: usize, b: &OracleBudget) -> Result<RunReport> {
        let mut r = RunReport::new(Verdict::Value, json!({"oracle": "cover", "k": k, "n": g.n()}));
        r.details = json!({"cover_count": brute_cover_count(g, k, &[], g.vertices(), b)?.to_string()});
        Ok(r)
    }

    pub fn listcolor(g: &Graph, lists: &ListAssignment, b: &OracleBudget) -> Result<RunReport> {
        Ok(RunReport::new(verdict(brute_list_colorable(g, lists, b)?), json!({"oracle": "listcolor", "n": g.n()})))
    }

    pub fn removal(f: &SetFamily, c: &BigRational) -> Result<RunReport> {
        let best = brute_removal_best(f.members(), f.universe_size(), c)?;
        let mut r = RunReport::new(Verdict::Value, json!({"oracle": "removal", "C": c.to_string(), "sets": f.len()}));
        r.details = json!({"best_score": best.to_string()});
        Ok(r)
    }
}

/// `G(n, p)` from `seed`; pairs are visited in lexicographic order.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, &edges)
}

/// A dense core `G(n - f, 0.7)` plus a fringe of `f = ceil(α n)` vertices of
/// degree at most `Δ`, so the result is `(α, Δ)`-bounded.
pub fn gen_bounded(n: usize, delta: usize, alpha: &BigRational, seed: u64) -> Result<Graph> {
    if *alpha < int(0) || *alpha > int(1) {
        return Err(Error::contract(format!("α = {alpha} outside [0, 1]")));
    }
    let fringe = (alpha * int(n)).ceil().to_integer().try_into().unwrap_or(n).min(n);
    let core = n - fringe;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..core {
        for v in u + 1..core {
            if rng.gen_bool(0.7) {
                edges.push((u, v));
            }
        }
    }
    let mut degree = vec![0usize; n];
    for f in core..n {
        let mut targets: Vec<usize> = (0..n).filter(|&v| v != f).collect();
        targets.shuffle(&mut rng);
        let want = rng.gen_range(0..=delta);
        for t in targets {
            if degree[f] >= want {
                break;
            }
            let t_full = t >= core && degree[t] >= delta;
            if t_full || edges.contains(&(t.min(f), t.max(f))) {
                continue;
            }
            edges.push((t.min(f), t.max(f)));
            degree[f] += 1;
            degree[t] += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn family_graph(family: Family, n: usize, delta: usize, seed: u64) -> Result<Graph> {
    match family {
        Family::Cycle => Ok(Graph::cycle(n)),
        Family::Gnp => gen_gnp(n, 0.3, seed),
        Family::Bounded => gen_bounded(n, delta, &crate::exact::ratio(3, 4), seed),
    }
}

/// One CSV row of the benchmark matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub algorithm: String,
    pub verdict: bool,
    pub entries_touched: u64,
    /// `2^|V \ S| (2 - 2^-Δ)^|S|`, exact.
    pub bound_rhs: String,
    pub wall_ms: u64,
    pub seed: u64,
}

pub const BENCH_HEADER: &str = "family,n,algorithm,verdict,entries_touched,bound_rhs,wall_ms,seed";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.family, self.n, self.algorithm, self.verdict, self.entries_touched, self.bound_rhs, self.wall_ms, self.seed
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub algorithms: Vec<DecideAlgorithm>,
    pub sizes: Vec<usize>,
    pub k: usize,
    pub delta: usize,
    pub seed: u64,
}

/// Runs every (family, size, algorithm) cell; `emit` sees rows as they
/// finish. `bound_rhs` is `2^n` for full-lattice rows, and for the bounded
/// pipeline it is the per-coloring bound times the colorings tried.
pub fn bench(cfg: &BenchConfig, limits: &Limits, mut emit: impl FnMut(&BenchRow) -> Result<()>) -> Result<()> {
    for &family in &cfg.families {
        for &n in &cfg.sizes {
            let g = family_graph(family, n, cfg.delta, cfg.seed)?;
            for &algorithm in &cfg.algorithms {
                let start = Instant::now();
                let (yes, entries, bound) = match algorithm {
                    DecideAlgorithm::Bhk => (decide_k_colorable(&g, cfg.k, limits)?, 1u64 << n, work_bound(n, 0, cfg.delta)),
                    DecideAlgorithm::Trimmed => {
                        let s = greedy_distance3_set(&g, cfg.delta);
                        let inst = TrimmedInstance {
                            g: &g,
                            s,
                            k: cfg.k,
                            max_block_degree: cfg.delta,
                        };
                        let h = trimmed_count(&inst, limits)?;
                        let bound = work_bound(n - s.len(), s.len(), cfg.delta);
                        (h.value > 0.into(), h.stats.lattice_entries, bound)
                    }
                    DecideAlgorithm::Bounded => {
                        let plan = plan_bounded(&g, cfg.k, cfg.delta)?;
                        let (yes, stats) = decide_with_plan(&g, cfg.k, &plan, limits)?;
                        let ground = n - plan.v0.len() - plan.s.len();
                        let bound = work_bound(ground, plan.s.len(), cfg.delta) * int(stats.colorings_tried.max(1));
                        (yes, stats.lattice_entries, bound)
                    }
                };
                let row = BenchRow {
                    family: family.to_string(),
                    n,
                    algorithm: algorithm.to_string(),
                    verdict: yes,
                    entries_touched: entries,
                    bound_rhs: bound.to_string(),
                    wall_ms: start.elapsed().as_millis() as u64,
                    seed: cfg.seed,
                };
                emit(&row)?;
            }
        }
    }
    Ok(())
}
