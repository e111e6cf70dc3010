//! Brute-force references.
//!
//! Everything here depends on the graph types only and deliberately avoids
//! transforms, inclusion–exclusion and the solvers it is used to check.
//! Inputs above the budget are refused with [`Error::Budget`].

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Graph, ListAssignment, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_tuples: u64,
    pub max_assignments: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 12,
            max_tuples: 10_000_000,
            max_assignments: 10_000_000,
        }
    }
}

fn budget(msg: String) -> Error {
    Error::Budget(msg)
}

impl OracleBudget {
    fn check_vertices(&self, n: usize) -> Result<()> {
        if n > self.max_vertices {
            return Err(budget(format!(
                "{n} vertices exceed the oracle budget of {}",
                self.max_vertices
            )));
        }
        Ok(())
    }
}

fn edge_free(g: &Graph, set: VertexSet) -> bool {
    for u in set {
        for v in set {
            if u < v && g.has_edge(u, v) {
                return false;
            }
        }
    }
    true
}

/// Every subset of `ground`, as a list, in ascending bitmask order of the
/// local coordinates.
fn subsets_of(ground: VertexSet) -> Vec<VertexSet> {
    let members = ground.to_vec();
    (0u32..1 << members.len())
        .map(|mask| {
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Number of independent sets (including the empty one) inside `set`.
pub fn brute_independent_sets(g: &Graph, set: VertexSet, b: &OracleBudget) -> Result<u64> {
    b.check_vertices(set.len())?;
    Ok(subsets_of(set).into_iter().filter(|&s| edge_free(g, s)).count() as u64)
}

/// Whether some assignment of colors `0..k` to all vertices is proper,
/// searched depth-first over vertices `0..n` with improper prefixes cut.
pub fn brute_k_colorable(g: &Graph, k: usize, b: &OracleBudget) -> Result<bool> {
    b.check_vertices(g.n())?;
    let n = g.n();
    if n == 0 {
        return Ok(true);
    }
    if k == 0 {
        return Ok(false);
    }
    let mut colors = vec![usize::MAX; n];
    let mut visited: u64 = 0;
    fn go(
        g: &Graph,
        k: usize,
        v: usize,
        colors: &mut [usize],
        visited: &mut u64,
        limit: u64,
    ) -> Result<bool> {
        if v == colors.len() {
            return Ok(true);
        }
        for c in 0..k {
            *visited += 1;
            if *visited > limit {
                return Err(budget(format!("more than {limit} partial assignments")));
            }
            if (0..v).all(|u| !(g.has_edge(u, v) && colors[u] == c)) {
                colors[v] = c;
                if go(g, k, v + 1, colors, visited, limit)? {
                    return Ok(true);
                }
            }
        }
        colors[v] = usize::MAX;
        Ok(false)
    }
    go(g, k, 0, &mut colors, &mut visited, b.max_assignments)
}

/// Least `k` with [`brute_k_colorable`].
pub fn brute_chromatic_number(g: &Graph, b: &OracleBudget) -> Result<usize> {
    for k in 0..=g.n() {
        if brute_k_colorable(g, k, b)? {
            return Ok(k);
        }
    }
    unreachable!("n colors always suffice")
}

/// Number of ordered `k`-tuples `(I_1, ..., I_k)` of independent sets of
/// `g[ground]` with union `ground`, where every `I_j` meets every set of
/// `required_hits`.
///
/// Counted by a forward pass over "union so far" states: each step appends
/// one admissible independent set to every partial tuple.
pub fn brute_cover_count(
    g: &Graph,
    k: usize,
    required_hits: &[VertexSet],
    ground: VertexSet,
    b: &OracleBudget,
) -> Result<BigUint> {
    b.check_vertices(ground.len())?;
    let members = ground.to_vec();
    let m = members.len();
    let local = |s: VertexSet| -> usize {
        members
            .iter()
            .enumerate()
            .filter(|(_, &v)| s.contains(v))
            .map(|(i, _)| 1usize << i)
            .sum()
    };
    let admissible: Vec<usize> = subsets_of(ground)
        .into_iter()
        .filter(|&s| edge_free(g, s) && required_hits.iter().all(|h| h.intersects(s)))
        .map(local)
        .collect();
    let work = (k as u64)
        .saturating_mul(1u64 << m)
        .saturating_mul(admissible.len() as u64);
    if work > b.max_tuples {
        return Err(budget(format!(
            "{work} tuple extensions exceed the oracle budget of {}",
            b.max_tuples
        )));
    }
    let mut counts = vec![BigUint::zero(); 1 << m];
    counts[0] = BigUint::from(1u32);
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); 1 << m];
        for (state, count) in counts.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for &set in &admissible {
                next[state | set] += count;
            }
        }
        counts = next;
    }
    Ok(counts.swap_remove((1 << m) - 1))
}

/// Whether some choice of one color per vertex from its list is proper,
/// by plain enumeration of the whole product of lists.
pub fn brute_list_colorable(g: &Graph, lists: &ListAssignment, b: &OracleBudget) -> Result<bool> {
    let n = g.n();
    if lists.vertex_count() != n {
        return Err(Error::Contract(format!(
            "{} lists for {n} vertices",
            lists.vertex_count()
        )));
    }
    let mut product: u64 = 1;
    for v in 0..n {
        let len = lists.list(v).len() as u64;
        if len == 0 {
            return Ok(false);
        }
        product = product.saturating_mul(len);
    }
    if product > b.max_assignments {
        return Err(budget(format!(
            "{product} list assignments exceed the oracle budget of {}",
            b.max_assignments
        )));
    }
    let mut digits = vec![0usize; n];
    loop {
        let color = |v: usize| lists.list(v)[digits[v]];
        if g.edges().all(|(u, v)| color(u) != color(v)) {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            digits[i] += 1;
            if digits[i] < lists.list(i).len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn max_independent(conflicts: &[u32], alive: u32) -> u32 {
    if alive == 0 {
        return 0;
    }
    let v = alive.trailing_zeros() as usize;
    let rest = alive & !(1 << v);
    let take = 1 + max_independent(conflicts, rest & !conflicts[v]);
    if conflicts[v] & rest == 0 {
        return take;
    }
    take.max(max_independent(conflicts, rest))
}

/// `max |F'| - C |U'|` over all element sets `U'` and member index sets `F'`
/// whose members are pairwise disjoint outside `U'`.
pub fn brute_removal_best(
    members: &[Vec<u32>],
    universe_size: u32,
    c: &BigRational,
) -> Result<BigRational> {
    if members.len() > 12 || universe_size > 12 {
        return Err(budget(format!(
            "removal oracle limited to 12 sets over 12 elements, got {} over {universe_size}",
            members.len()
        )));
    }
    let masks: Vec<u32> = members
        .iter()
        .map(|m| m.iter().fold(0u32, |acc, &e| acc | 1 << e))
        .collect();
    let mut best: Option<BigRational> = None;
    for removed in 0u32..1 << universe_size {
        let conflicts: Vec<u32> = (0..masks.len())
            .map(|i| {
                (0..masks.len())
                    .filter(|&j| j != i && masks[i] & masks[j] & !removed != 0)
                    .fold(0u32, |acc, j| acc | 1 << j)
            })
            .collect();
        let kept = max_independent(&conflicts, (1u32 << masks.len()) - 1);
        let score = BigRational::from_integer(kept.into())
            - c * BigRational::from_integer(removed.count_ones().into());
        if best.as_ref().is_none_or(|b| score > *b) {
            best = Some(score);
        }
    }
    Ok(best.expect("at least the empty removal is scored"))
}

/// Whether `colors` is a proper coloring of every edge.
pub fn brute_is_proper(g: &Graph, colors: &[u32]) -> bool {
    colors.len() == g.n() && g.edges().all(|(u, v)| colors[u] != colors[v])
}

/// Whether every vertex lies in `r` or has a neighbor in `r`.
pub fn brute_dominates(g: &Graph, r: VertexSet) -> bool {
    (0..g.n()).all(|v| r.contains(v) || (0..g.n()).any(|u| r.contains(u) && g.has_edge(u, v)))
}
