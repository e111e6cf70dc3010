//! Randomized reduction from k-coloring to (k-2)-list coloring.
//!
//! `A₁` samples `R_0`, colors it and the vertices `B` that see at most one
//! color on `R_0`, and hands the rest to the list solver: every remaining
//! vertex sees two colors, so its list has at most `k - 2` entries. `A₂`
//! routes `(α', Δ)`-bounded graphs to the trimmed search and the rest to
//! `A₁`. `A₃` contracts random independent `r`-subsets of high-degree
//! neighborhoods before calling `A₂`.
//!
//! Randomness comes from one ChaCha8 stream per attempt
//! (`seed_from_u64(seed)` then `set_stream(attempt)`), consumed in this
//! order: the flag, the vertex `v`, the subset `S` (repeated per recursion
//! level), then `R_0` membership in ascending vertex order.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ceil_u64, int, ln_enclosure, pow, probability_threshold};
use crate::graph::{is_alpha_delta_bounded, Graph, PartialColoring, VertexSet};
use crate::limits::Limits;
use crate::lists::{ListInstance, ListSolver};
use crate::removal::serialize_rational;
use crate::trimmed::{find_coloring_trimmed, for_each_proper_coloring};
use crate::ListAssignment;

/// Largest `r` tried by [`select_parameters`].
pub const MAX_R: usize = 256;
/// Largest `Δ'` tried by [`select_parameters`].
pub const MAX_DELTA_PRIME: u64 = 1 << 40;
/// Cap on the default repetition count.
pub const MAX_REPS_CAP: u64 = 1_000_000;

/// The constant schedule of the reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionParams {
    pub k: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub epsilon: BigRational,
    pub r: usize,
    pub delta_prime: u64,
    /// `Δ = r² + r (k-1) Δ'`.
    pub delta: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub beta_prime: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub alpha_prime: BigRational,
    /// Certified lower bound on `2 - (k/(2-ε))^x (2-ε)`; positive exactly
    /// when the feasibility inequality was certified.
    #[serde(serialize_with = "serialize_rational")]
    pub epsilon_double_prime: BigRational,
}

fn base(epsilon: &BigRational) -> BigRational {
    int(2) - epsilon
}

/// `β' = 8 (2-ε)^-(r-1) / (1 - (2-ε)^-r)`.
pub fn beta_prime(epsilon: &BigRational, r: usize) -> BigRational {
    let inv = base(epsilon).recip();
    int(8) * pow(&inv, r as u64 - 1) / (BigRational::one() - pow(&inv, r as u64))
}

/// Upper bound on `x = (6 + ln Δ')/Δ' + β'`.
fn exponent_hi(delta_prime: u64, beta: &BigRational) -> BigRational {
    let (_, ln_hi) = ln_enclosure(&int(delta_prime), 64);
    (int(6) + ln_hi) / int(delta_prime) + beta
}

/// Certified lower bound on `ln 2 - ln(2-ε) - x ln(k/(2-ε))`: positive
/// implies `(k/(2-ε))^x (2-ε) < 2`.
fn feasibility_margin(k: usize, epsilon: &BigRational, x_hi: &BigRational) -> BigRational {
    let b = base(epsilon);
    let (lhs_lo, _) = ln_enclosure(&(int(2) / &b), 64);
    let ratio = int(k) / &b;
    if ratio <= BigRational::one() {
        // (k/(2-ε))^x <= 1 for x >= 0
        return lhs_lo;
    }
    let (_, log_hi) = ln_enclosure(&ratio, 64);
    lhs_lo - x_hi * log_hi
}

/// `2 - e^(ln(2-ε) + x ln(k/(2-ε)))` bounded below through the margin:
/// `2 - 2 e^-m >= 2 - 2/(1+m) = 2m/(1+m)`.
fn epsilon_lower(margin: &BigRational) -> BigRational {
    if margin.is_positive() {
        int(2) * margin / (BigRational::one() + margin)
    } else {
        BigRational::zero()
    }
}

impl ReductionParams {
    /// Constants for the given `(r, Δ')`, rejecting pairs whose feasibility
    /// inequality is not certified.
    pub fn new(k: usize, epsilon: BigRational, r: usize, delta_prime: u64) -> Result<Self> {
        let p = Self::relaxed(k, epsilon, r, delta_prime)?;
        if !p.epsilon_double_prime.is_positive() {
            return Err(Error::contract(format!(
                "(r, Δ') = ({r}, {delta_prime}) violates the feasibility inequality"
            )));
        }
        Ok(p)
    }

    /// Constants without the feasibility requirement. Only soundness holds
    /// for such parameters; they let the `A₁` branch run on small graphs.
    pub fn relaxed(k: usize, epsilon: BigRational, r: usize, delta_prime: u64) -> Result<Self> {
        check_inputs(k, &epsilon)?;
        if r < 2 || delta_prime < 2 {
            return Err(Error::contract("r and Δ' must be at least 2"));
        }
        let beta = beta_prime(&epsilon, r);
        let margin = feasibility_margin(k, &epsilon, &exponent_hi(delta_prime, &beta));
        let delta = (r as u64)
            .checked_mul(r as u64)
            .and_then(|sq| {
                (r as u64)
                    .checked_mul(k as u64 - 1)
                    .and_then(|x| x.checked_mul(delta_prime))
                    .and_then(|x| x.checked_add(sq))
            })
            .ok_or_else(|| Error::resource("Δ overflows 64 bits"))?;
        Ok(ReductionParams {
            k,
            alpha_prime: &beta / int(2),
            beta_prime: beta,
            epsilon,
            r,
            delta_prime,
            delta,
            epsilon_double_prime: epsilon_lower(&margin),
        })
    }

    /// Whether the feasibility inequality is certified for these constants.
    pub fn feasible(&self) -> bool {
        let x = exponent_hi(self.delta_prime, &self.beta_prime);
        feasibility_margin(self.k, &self.epsilon, &x).is_positive()
    }

    fn delta_usize(&self) -> usize {
        self.delta.to_usize().unwrap_or(usize::MAX)
    }
}

fn check_inputs(k: usize, epsilon: &BigRational) -> Result<()> {
    if !epsilon.is_positive() || *epsilon >= BigRational::one() {
        return Err(Error::contract(format!("ε = {epsilon} must lie strictly between 0 and 1")));
    }
    if k < 3 {
        return Err(Error::contract(format!("k = {k} must be at least 3")));
    }
    Ok(())
}

/// The lexicographically smallest feasible `(r, Δ')`.
pub fn select_parameters(k: usize, epsilon: &BigRational) -> Result<ReductionParams> {
    check_inputs(k, epsilon)?;
    let feasible = |dp: u64, beta: &BigRational| feasibility_margin(k, epsilon, &exponent_hi(dp, beta)).is_positive();
    for r in 2..=MAX_R {
        let beta = beta_prime(epsilon, r);
        if !feasible(MAX_DELTA_PRIME, &beta) {
            continue;
        }
        // (6 + ln x)/x decreases for x >= 1, so feasibility is monotone in Δ'
        let (mut lo, mut hi) = (2u64, MAX_DELTA_PRIME);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if feasible(mid, &beta) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        return ReductionParams::new(k, epsilon.clone(), r, lo);
    }
    Err(Error::resource(format!(
        "no feasible (r, Δ') with r <= {MAX_R} and Δ' <= {MAX_DELTA_PRIME}"
    )))
}

/// One step of an attempt, in the order it happened.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Flag { n: usize, set: bool },
    Vertex { v: usize, degree: usize },
    HaltLowDegree,
    Subset { s: Vec<usize> },
    HaltNotIndependent,
    Contract { n_after: usize },
    Trimmed { found: bool },
    Sample { r0: Vec<usize> },
    HaltLargeSample,
    Solved { colorings_tried: u64, list_calls: u64, found: bool },
}

/// `B(R_0, c')`: vertices outside `R_0` whose `R_0`-neighbors carry at
/// most one color.
pub fn bad_set(g: &Graph, r0: VertexSet, c: &PartialColoring) -> VertexSet {
    (g.vertices() - r0)
        .iter()
        .filter(|&v| c.colors_on(g.neighbors(v) & r0).len() <= 1)
        .collect()
}

fn bernoulli(rng: &mut ChaCha8Rng, threshold: u64) -> bool {
    threshold == u64::MAX || rng.gen::<u64>() < threshold
}

/// `A₁(G, k, Δ', β)`.
#[allow(clippy::too_many_arguments)]
pub fn algorithm_a1(
    g: &Graph,
    k: usize,
    delta_prime: u64,
    beta: &BigRational,
    rng: &mut ChaCha8Rng,
    limits: &Limits,
    solver: &dyn ListSolver,
    events: &mut Vec<Event>,
) -> Result<Option<PartialColoring>> {
    let n = g.n();
    let (ln_lo, _) = ln_enclosure(&int(delta_prime), 64);
    let p = &ln_lo / int(delta_prime);
    let threshold = probability_threshold(&p);
    let r0: VertexSet = (0..n).filter(|_| bernoulli(rng, threshold)).collect();
    events.push(Event::Sample { r0: r0.to_vec() });
    if int(r0.len()) * int(delta_prime) > (BigRational::one() + &ln_lo) * int(n) {
        events.push(Event::HaltLargeSample);
        return Ok(None);
    }
    limits.check_enumeration(r0.len())?;
    let b_limit = beta * int(n) + int(5 * n as u64) / int(delta_prime);
    let colors: Vec<u32> = (0..k as u32).collect();
    let all = |_: usize| colors.clone();
    let (mut tried, mut calls) = (0u64, 0u64);
    let mut found = None;
    let mut coloring = PartialColoring::new(n);
    for_each_proper_coloring(g, &r0.to_vec(), &all, &mut coloring, &mut |c1| {
        tried += 1;
        let b = bad_set(g, r0, c1);
        if int(b.len()) >= b_limit {
            return Ok(false);
        }
        limits.check_enumeration(r0.len() + b.len())?;
        let mut c = c1.clone();
        for_each_proper_coloring(g, &b.to_vec(), &all, &mut c, &mut |c2| {
            let colored = r0 | b;
            let (sub, vertices) = g.induced(g.vertices() - colored);
            let mut lists = Vec::with_capacity(vertices.len());
            for &v in &vertices {
                let seen = c2.colors_on(g.neighbors(v) & colored);
                let list: Vec<u32> = (0..k as u32).filter(|x| seen.binary_search(x).is_err()).collect();
                if list.len() + 2 > k {
                    return Err(Error::InternalContradiction(format!(
                        "vertex {v} outside B sees fewer than two colors"
                    )));
                }
                lists.push(list);
            }
            calls += 1;
            let inst = ListInstance::new(sub, ListAssignment::new(k as u32, lists)?)?;
            let Some(rest) = solver.solve(&inst)? else {
                return Ok(false);
            };
            let mut full = c2.clone();
            for (i, &v) in vertices.iter().enumerate() {
                full.set(v, rest.get(i).expect("list solution is total"));
            }
            found = Some(full);
            Ok(true)
        })
    })?;
    events.push(Event::Solved {
        colorings_tried: tried,
        list_calls: calls,
        found: found.is_some(),
    });
    if let Some(c) = &found {
        if !c.is_proper_k_coloring(g, k) {
            return Err(Error::InternalContradiction("A₁ produced an improper coloring".into()));
        }
    }
    Ok(found)
}

/// `A₂`: the trimmed search on `(α', Δ)`-bounded graphs, `A₁` otherwise.
pub fn algorithm_a2(
    g: &Graph,
    params: &ReductionParams,
    rng: &mut ChaCha8Rng,
    limits: &Limits,
    solver: &dyn ListSolver,
    events: &mut Vec<Event>,
) -> Result<Option<PartialColoring>> {
    let delta = params.delta_usize();
    if is_alpha_delta_bounded(g, &params.alpha_prime, delta) {
        let found = find_coloring_trimmed(g, params.k, delta.min(g.n()), limits)?;
        events.push(Event::Trimmed { found: found.is_some() });
        return Ok(found);
    }
    algorithm_a1(g, params.k, params.delta_prime, &params.beta_prime, rng, limits, solver, events)
}

/// A graph obtained by contractions: `groups[i]` lists the vertices of the
/// previous level merged into vertex `i`.
struct Level {
    graph: Graph,
    groups: Vec<Vec<usize>>,
}

/// Removes `s` and appends one vertex adjacent to `N(s)`.
fn contract(g: &Graph, s: VertexSet) -> Result<Level> {
    let kept: Vec<usize> = (g.vertices() - s).to_vec();
    let mut position = vec![usize::MAX; g.n()];
    for (i, &v) in kept.iter().enumerate() {
        position[v] = i;
    }
    let merged = kept.len();
    let mut rows: Vec<VertexSet> = kept
        .iter()
        .map(|&v| {
            let mut row: VertexSet = (g.neighbors(v) - s).iter().map(|u| position[u]).collect();
            if g.neighbors(v).intersects(s) {
                row.insert(merged);
            }
            row
        })
        .collect();
    rows.push((g.neighborhood_of(s) - s).iter().map(|u| position[u]).collect());
    let mut groups: Vec<Vec<usize>> = kept.iter().map(|&v| vec![v]).collect();
    groups.push(s.to_vec());
    Ok(Level {
        graph: Graph::from_adjacency(rows)?,
        groups,
    })
}

/// Gives every merged vertex the color of its contracted vertex.
fn expand(previous: &Graph, level: &Level, c: &PartialColoring, k: usize) -> Result<PartialColoring> {
    let mut out = PartialColoring::new(previous.n());
    for (i, group) in level.groups.iter().enumerate() {
        let color = c.get(i).expect("coloring of the contracted graph is total");
        for &v in group {
            out.set(v, color);
        }
    }
    if !out.is_proper_k_coloring(previous, k) {
        return Err(Error::InternalContradiction("expanding a contraction broke properness".into()));
    }
    Ok(out)
}

/// One run of `A₃`, with its transcript.
pub fn algorithm_a3(
    g: &Graph,
    params: &ReductionParams,
    rng: &mut ChaCha8Rng,
    limits: &Limits,
    solver: &dyn ListSolver,
) -> Result<(Option<PartialColoring>, Vec<Event>)> {
    let mut events = Vec::new();
    let mut levels: Vec<Level> = Vec::new();
    let inv = base(&params.epsilon).recip();
    let delta = params.delta_usize();
    let found = loop {
        let current = levels.last().map_or(g, |l| &l.graph);
        let n = current.n();
        let set = bernoulli(rng, probability_threshold(&pow(&inv, n as u64)));
        events.push(Event::Flag { n, set });
        if set || n <= params.r {
            break algorithm_a2(current, params, rng, limits, solver, &mut events)?;
        }
        let v = rng.gen_range(0..n);
        let degree = current.degree(v);
        events.push(Event::Vertex { v, degree });
        if degree < delta {
            events.push(Event::HaltLowDegree);
            break None;
        }
        let neighbors = current.neighbors(v).to_vec();
        let s: VertexSet = sample(rng, neighbors.len(), params.r).iter().map(|i| neighbors[i]).collect();
        events.push(Event::Subset { s: s.to_vec() });
        if !current.is_independent(s) {
            events.push(Event::HaltNotIndependent);
            break None;
        }
        let level = contract(current, s)?;
        events.push(Event::Contract { n_after: level.graph.n() });
        levels.push(level);
    };
    let Some(mut c) = found else {
        return Ok((None, events));
    };
    for i in (0..levels.len()).rev() {
        let previous = if i == 0 { g } else { &levels[i - 1].graph };
        c = expand(previous, &levels[i], &c, params.k)?;
    }
    Ok((Some(c), events))
}

/// The RNG of attempt `attempt` under `seed`.
pub fn attempt_rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// `min(10 n 2^n, 10^6)`.
pub fn default_max_reps(n: usize) -> u64 {
    if n >= 20 {
        return MAX_REPS_CAP;
    }
    (10 * n as u64 * (1u64 << n)).min(MAX_REPS_CAP)
}

/// `n (2-ε)^(n+1)` rounded up, saturating.
pub fn theoretical_reps(n: usize, epsilon: &BigRational) -> u64 {
    let b = base(epsilon);
    let x = int(n) * pow(&b, n as u64 + 1);
    if x > BigRational::from_integer(BigInt::from(u64::MAX)) {
        u64::MAX
    } else {
        ceil_u64(&x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandomizedOutcome {
    pub coloring: Option<Vec<u32>>,
    /// Attempts up to and including the successful one, or all of them.
    pub attempts: u64,
    pub reps: u64,
    pub params: ReductionParams,
    pub seed: u64,
    /// Transcript of the successful attempt.
    pub transcript: Vec<Event>,
}

/// Repeats `A₃` up to `min(max_reps, n (2-ε)^(n+1))` times; the lowest
/// successful attempt wins, so the outcome does not depend on scheduling.
pub fn solve_randomized(
    g: &Graph,
    params: &ReductionParams,
    seed: u64,
    max_reps: u64,
    limits: &Limits,
    solver: &dyn ListSolver,
) -> Result<RandomizedOutcome> {
    let reps = max_reps.min(theoretical_reps(g.n(), &params.epsilon)).max(1);
    let first = (0..reps)
        .into_par_iter()
        .map(|a| {
            let mut rng = attempt_rng(seed, a);
            algorithm_a3(g, params, &mut rng, limits, solver).map(|(c, t)| c.map(|c| (a, c, t)))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    let (attempts, coloring, transcript) = match first {
        None => (reps, None, Vec::new()),
        Some(Err(e)) => return Err(e),
        Some(Ok(None)) => unreachable!(),
        Some(Ok(Some((a, c, t)))) => (a + 1, Some(c), t),
    };
    if let Some(c) = &coloring {
        if !c.is_proper_k_coloring(g, params.k) {
            return Err(Error::InternalContradiction("randomized search returned an improper coloring".into()));
        }
    }
    Ok(RandomizedOutcome {
        coloring: coloring.map(|c| c.to_vec().expect("total coloring")),
        attempts,
        reps,
        params: params.clone(),
        seed,
        transcript,
    })
}

/// `ε = 19/100`, the base of an `O(1.81^n)` list solver.
pub fn default_epsilon() -> BigRational {
    crate::exact::ratio(19, 100)
}

/// 6-coloring with the default `ε` and the selected constants.
pub fn solve_6_coloring(
    g: &Graph,
    seed: u64,
    max_reps: u64,
    limits: &Limits,
    solver: &dyn ListSolver,
) -> Result<RandomizedOutcome> {
    static PARAMS: OnceLock<ReductionParams> = OnceLock::new();
    let params = match PARAMS.get() {
        Some(p) => p,
        None => {
            let p = select_parameters(6, &default_epsilon())?;
            PARAMS.get_or_init(|| p)
        }
    };
    solve_randomized(g, params, seed, max_reps, limits, solver)
}
