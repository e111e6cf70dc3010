//! Inclusion–exclusion coloring over the full subset lattice.
//!
//! `i(X)` is the number of independent sets (the empty set included) of the
//! subgraph induced by `X`. The number of ordered `k`-tuples of independent
//! sets covering `V` is `F = Σ_X (-1)^(n - |X|) i(X)^k`, positive exactly
//! when the graph is `k`-colorable.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::biguint_to_bigint;
use crate::graph::{Graph, PartialColoring, VertexSet};
use crate::limits::Limits;
use crate::subset::SubsetTable;

/// The number of ordered covers by independent sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCount {
    pub value: BigUint,
}

/// `table[X] = i(G[X])`, filled in ascending bitmask order with
/// `i(X) = i(X \ {v}) + i(X \ N[v])` for the lowest `v ∈ X`.
///
/// Counts fit in `u64` because `i(X) <= 2^|X|` and tables are capped well
/// below 64 vertices.
pub fn independent_set_table(g: &Graph, limits: &Limits) -> Result<SubsetTable<u64>> {
    let n = g.n();
    limits.check_table(n)?;
    if n >= 40 {
        return Err(Error::resource(format!("a dense table over {n} vertices")));
    }
    let closed: Vec<usize> = (0..n).map(|v| g.closed_neighbors(v).bits() as usize).collect();
    let mut values = vec![0u64; 1usize << n];
    values[0] = 1;
    for x in 1..values.len() {
        let v = x.trailing_zeros() as usize;
        values[x] = values[x & (x - 1)] + values[x & !closed[v]];
    }
    SubsetTable::from_values(n, values)
}

/// `Σ_X (-1)^(n - |X|) table[X]^k`.
pub fn cover_count_from_table(table: &SubsetTable<u64>, k: usize) -> Result<CoverCount> {
    let n = table.ground_size();
    let exponent = u32::try_from(k).map_err(|_| Error::contract("k too large"))?;
    let (plus, minus) = table
        .values()
        .par_chunks(1 << 12)
        .enumerate()
        .map(|(chunk, values)| {
            let mut acc = SignedAccumulator::default();
            let base = chunk << 12;
            for (offset, &i) in values.iter().enumerate() {
                let x = base + offset;
                let negative = (n - x.count_ones() as usize) % 2 == 1;
                acc.add_power(i, exponent, negative);
            }
            acc.finish()
        })
        .reduce(
            || (BigUint::zero(), BigUint::zero()),
            |(a, b), (c, d)| (a + c, b + d),
        );
    let value = biguint_to_bigint(plus) - biguint_to_bigint(minus);
    if value.is_negative() {
        return Err(Error::InternalContradiction(format!("negative cover count {value}")));
    }
    Ok(CoverCount {
        value: value.to_biguint().expect("nonnegative"),
    })
}

/// Sums of `base^k` split by sign, staying in `u128` while possible.
#[derive(Default)]
pub(crate) struct SignedAccumulator {
    plus_small: u128,
    minus_small: u128,
    plus: BigUint,
    minus: BigUint,
}

impl SignedAccumulator {
    pub(crate) fn add_power(&mut self, base: u64, k: u32, negative: bool) {
        match (base as u128).checked_pow(k) {
            Some(p) => self.add_small(p, negative),
            None => self.add_big(BigUint::from(base).pow(k), negative),
        }
    }

    pub(crate) fn add_small(&mut self, p: u128, negative: bool) {
        let slot = if negative {
            &mut self.minus_small
        } else {
            &mut self.plus_small
        };
        match slot.checked_add(p) {
            Some(sum) => *slot = sum,
            None => {
                let spilled = std::mem::take(slot);
                let big = if negative { &mut self.minus } else { &mut self.plus };
                *big += spilled;
                *big += p;
            }
        }
    }

    pub(crate) fn add_big(&mut self, p: BigUint, negative: bool) {
        if negative {
            self.minus += p;
        } else {
            self.plus += p;
        }
    }

    pub(crate) fn finish(self) -> (BigUint, BigUint) {
        (self.plus + self.plus_small, self.minus + self.minus_small)
    }

    pub(crate) fn net(self) -> BigInt {
        let (plus, minus) = self.finish();
        biguint_to_bigint(plus) - biguint_to_bigint(minus)
    }
}

pub fn cover_count(g: &Graph, k: usize, limits: &Limits) -> Result<CoverCount> {
    let table = independent_set_table(g, limits)?;
    cover_count_from_table(&table, k)
}

pub fn decide_k_colorable(g: &Graph, k: usize, limits: &Limits) -> Result<bool> {
    Ok(!cover_count(g, k, limits)?.value.is_zero())
}

/// Size of a greedily grown clique, maximized over starting vertices.
pub fn greedy_clique_bound(g: &Graph) -> usize {
    (0..g.n())
        .map(|start| {
            let mut clique = VertexSet::singleton(start);
            let mut candidates = g.neighbors(start);
            while let Some(v) = candidates.first() {
                clique.insert(v);
                candidates = candidates & g.neighbors(v);
            }
            clique.len()
        })
        .max()
        .unwrap_or(0)
}

/// Least `k` with a positive cover count, searched upward from a clique
/// bound over a single shared table.
pub fn chromatic_number(g: &Graph, limits: &Limits) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let table = independent_set_table(g, limits)?;
    let mut k = greedy_clique_bound(g).max(1);
    loop {
        if !cover_count_from_table(&table, k)?.value.is_zero() {
            return Ok(k);
        }
        k += 1;
        if k > g.n() {
            return Err(Error::InternalContradiction(
                "no k up to n gives a positive cover count".into(),
            ));
        }
    }
}

/// Adds each listed non-edge whose addition keeps `decide` true.
///
/// Returns `None` when `decide(g)` is false. `decide` is called at most
/// `1 + pairs.len()` times.
pub fn self_reduce(
    g: &Graph,
    pairs: impl IntoIterator<Item = (usize, usize)>,
    mut decide: impl FnMut(&Graph) -> Result<bool>,
) -> Result<Option<Graph>> {
    if !decide(g)? {
        return Ok(None);
    }
    let mut current = g.clone();
    for (u, v) in pairs {
        if u == v || current.has_edge(u, v) {
            continue;
        }
        let candidate = current.with_edge(u, v);
        if decide(&candidate)? {
            current = candidate;
        }
    }
    Ok(Some(current))
}

/// Colors `domain` by the co-clique classes of a saturated graph: vertices
/// are in one class exactly when non-adjacent. Fails unless the non-edges
/// inside `domain` form an equivalence with at most `k` classes.
pub fn coclique_coloring(saturated: &Graph, domain: VertexSet, k: usize) -> Result<PartialColoring> {
    let mut coloring = PartialColoring::new(saturated.n());
    let mut remaining = domain;
    let mut color = 0u32;
    while let Some(v) = remaining.first() {
        let class = (domain - saturated.neighbors(v)).with(v);
        if !class.is_subset(remaining) || !saturated.is_independent(class) {
            return Err(Error::InternalContradiction(format!(
                "non-adjacency is not transitive around vertex {v}"
            )));
        }
        if color as usize >= k {
            return Err(Error::InternalContradiction(format!(
                "saturated graph has more than {k} color classes"
            )));
        }
        for u in class {
            coloring.set(u, color);
        }
        remaining = remaining - class;
        color += 1;
    }
    Ok(coloring)
}

/// Search via any sound and complete decider: saturate with non-edges that
/// keep the graph `k`-colorable, then read off the co-clique classes.
pub fn find_coloring(
    g: &Graph,
    k: usize,
    mut decider: impl FnMut(&Graph, usize) -> Result<bool>,
) -> Result<Option<PartialColoring>> {
    let n = g.n();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let Some(saturated) = self_reduce(g, pairs, |h| decider(h, k))? else {
        return Ok(None);
    };
    let coloring = coclique_coloring(&saturated, g.vertices(), k)?;
    if !coloring.is_proper_k_coloring(g, k) {
        return Err(Error::InternalContradiction(
            "self-reduction produced an improper coloring".into(),
        ));
    }
    Ok(Some(coloring))
}

/// [`find_coloring`] with [`decide_k_colorable`] as the decider.
pub fn find_coloring_bhk(g: &Graph, k: usize, limits: &Limits) -> Result<Option<PartialColoring>> {
    find_coloring(g, k, |h, k| decide_k_colorable(h, k, limits))
}
