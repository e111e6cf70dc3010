//! Coloring over trimmed lattices.
//!
//! Setting: `V(G) = V0 ∪ V`, a proper coloring `c0` of `V0` with classes
//! `V0^j`, and an independent set `S ⊆ V` whose neighborhoods inside `V` are
//! pairwise disjoint. With `W = V \ S` the ground set to be covered,
//!
//! * `β_j(V', T)` counts `I ⊆ V'` with `I ∪ V0^j` independent and `I`
//!   meeting `N(s) ∩ W` for all `s ∈ T`;
//! * `h(S') = Σ_{V' ∈ B(S')} (-1)^(|W| - |V'|) Π_j β_j(V', S' \ S_j)`, where
//!   `S_j` are the members of `S` already adjacent to `V0^j`;
//! * `H = Σ_{S' ⊆ S} (-1)^|S'| h(S')` is a nonnegative count, positive
//!   exactly when `c0` extends to a proper `k`-coloring of `G`.
//!
//! `β_j(·, T)` vanishes outside `B(T)`, so it is computed by the trimmed zeta
//! transform over `B(T)` only and no dense `2^|W|` table is ever built.
//! When `V0 = ∅` every `S_j` is empty and the count is the plain
//! disjoint-neighborhood version.

use std::collections::HashMap;
use std::ops::{Add, AddAssign};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bhk::{coclique_coloring, self_reduce, SignedAccumulator};
use crate::error::{Error, Result};
use crate::exact::{int, ln_enclosure, pow};
use crate::graph::{greedy_independent_low_degree, Graph, ListAssignment, PartialColoring, VertexSet};
use crate::limits::Limits;
use crate::removal::{removal_lemma, RemovalResult, SetFamily};
use crate::subset::{trimmed_zeta, ProductLattice};

/// Largest `S` whose `2^|S|` sub-selections are enumerated.
pub const MAX_SELECTED: usize = 40;

/// Largest number of memoized β entries.
const MAX_MEMO_ENTRIES: f64 = (1u64 << 28) as f64;

#[derive(Debug, Clone, Copy)]
pub struct TrimmedInstance<'a> {
    pub g: &'a Graph,
    pub s: VertexSet,
    pub k: usize,
    pub max_block_degree: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct FixedColoringInstance<'a> {
    pub g: &'a Graph,
    pub v0: VertexSet,
    pub c0: &'a PartialColoring,
    pub s: VertexSet,
    pub k: usize,
}

/// Work counters. `lattice_entries` is `Σ_{S'} |B(S')|` over the assembled
/// sums; `beta_entries` counts entries of the β tables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct WorkStats {
    pub lattice_entries: u64,
    pub beta_entries: u64,
    pub subsets_visited: u64,
    pub colorings_tried: u64,
}

impl Add for WorkStats {
    type Output = WorkStats;
    fn add(self, o: WorkStats) -> WorkStats {
        WorkStats {
            lattice_entries: self.lattice_entries + o.lattice_entries,
            beta_entries: self.beta_entries + o.beta_entries,
            subsets_visited: self.subsets_visited + o.subsets_visited,
            colorings_tried: self.colorings_tried + o.colorings_tried,
        }
    }
}

impl AddAssign for WorkStats {
    fn add_assign(&mut self, o: WorkStats) {
        *self = *self + o;
    }
}

/// The count `H` and the work spent on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HCount {
    pub value: BigInt,
    pub stats: WorkStats,
}

/// `2^|W| (2 - 2^-Δ)^|S|`.
pub fn work_bound(ground: usize, selected: usize, delta: usize) -> BigRational {
    let two = int(2);
    let factor = &two - BigRational::new(BigInt::one(), BigInt::one() << delta);
    pow(&two, ground as u64) * pow(&factor, selected as u64)
}

struct ColorClass {
    avail: VertexSet,
    /// Local mask over `S` of members adjacent to this class.
    blocked: u64,
    multiplicity: u32,
}

type Table = (ProductLattice, Vec<u64>);

struct Engine<'a> {
    g: &'a Graph,
    w: VertexSet,
    blocks: Vec<VertexSet>,
    classes: Vec<ColorClass>,
}

impl<'a> Engine<'a> {
    /// Assumes a validated instance with `k >= 1`.
    fn new(g: &'a Graph, v0: VertexSet, c0: &PartialColoring, s: VertexSet, k: usize, limits: &Limits) -> Result<Self> {
        let w = g.vertices() - v0 - s;
        limits.check_table(w.len())?;
        if s.len() > MAX_SELECTED {
            return Err(Error::resource(format!(
                "{} selected vertices exceed the cap of {MAX_SELECTED}",
                s.len()
            )));
        }
        let s_list = s.to_vec();
        let blocks: Vec<VertexSet> = s_list.iter().map(|&v| g.neighbors(v) & w).collect();
        let mut by_members: HashMap<VertexSet, usize> = HashMap::new();
        let mut classes: Vec<ColorClass> = Vec::new();
        for j in 0..k as u32 {
            let members: VertexSet = v0.iter().filter(|&v| c0.get(v) == Some(j)).collect();
            if let Some(&q) = by_members.get(&members) {
                classes[q].multiplicity += 1;
                continue;
            }
            let touched = g.neighborhood_of(members);
            let blocked = s_list
                .iter()
                .enumerate()
                .filter(|(_, &v)| touched.contains(v))
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            by_members.insert(members, classes.len());
            classes.push(ColorClass {
                avail: w - touched,
                blocked,
                multiplicity: 1,
            });
        }
        Ok(Engine { g, w, blocks, classes })
    }

    fn selected(&self) -> usize {
        self.blocks.len()
    }

    /// Members of `S` adjacent to every color class: they cannot be colored.
    fn hopeless(&self) -> bool {
        self.classes.iter().fold(u64::MAX, |acc, c| acc & c.blocked) & self.full_mask() != 0
    }

    fn full_mask(&self) -> u64 {
        if self.selected() == 64 {
            u64::MAX
        } else {
            (1u64 << self.selected()) - 1
        }
    }

    fn lattice(&self, mask: u64) -> ProductLattice {
        let blocks: Vec<VertexSet> = (0..self.selected())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.blocks[i])
            .collect();
        ProductLattice::new(self.w, &blocks).expect("blocks are disjoint subsets of the ground set")
    }

    fn beta_table(&self, class: usize, t: u64) -> Table {
        let lattice = self.lattice(t);
        let avail = self.classes[class].avail;
        let g = self.g;
        let values = trimmed_zeta(&lattice, |v| (v.is_subset(avail) && g.is_independent(v)) as u64);
        (lattice, values)
    }

    /// `h(S')` given a lookup of `β_q(·, S' \ S_q)` per class `q`.
    fn assemble<'t>(&self, sp: u64, table: impl Fn(usize, u64) -> &'t Table) -> (BigInt, u64) {
        let b = self.lattice(sp);
        let ground = self.w.len();
        let mut acc = SignedAccumulator::default();
        let lookups: Vec<(&Table, bool, u32)> = self
            .classes
            .iter()
            .enumerate()
            .map(|(q, c)| {
                let t = sp & !c.blocked;
                (table(q, t), t == sp, c.multiplicity)
            })
            .collect();
        for idx in 0..b.total_size() {
            let v = b.unindex(idx);
            let negative = (ground - v.len()) % 2 == 1;
            let mut small: Option<u128> = Some(1);
            let mut big: Option<BigUint> = None;
            for &((lattice, values), same, mult) in &lookups {
                let pos = if same {
                    idx
                } else {
                    lattice.index(v).expect("B(S') lies inside B(T) for T ⊆ S'")
                };
                let beta = values[pos as usize];
                if beta == 0 {
                    small = Some(0);
                    big = None;
                    break;
                }
                match small.and_then(|p| (beta as u128).checked_pow(mult).and_then(|f| p.checked_mul(f))) {
                    Some(p) => small = Some(p),
                    None => {
                        let current = big.take().unwrap_or_else(|| BigUint::from(small.unwrap_or(1)));
                        big = Some(current * BigUint::from(beta).pow(mult));
                        small = None;
                    }
                }
            }
            match (small, big) {
                (Some(p), _) => acc.add_small(p, negative),
                (None, Some(p)) => acc.add_big(p, negative),
                (None, None) => unreachable!(),
            }
        }
        (acc.net(), b.total_size())
    }

    /// `H`, computing each β table exactly once. When some class blocks a
    /// member of `S`, tables are shared between sub-selections and all of
    /// them are built before any `h` is assembled; otherwise each table is
    /// used by one sub-selection only and is built right before it.
    fn total(&self) -> Result<HCount> {
        let full = self.full_mask();
        let subsets = full.checked_add(1).expect("at most 40 selected vertices");
        let sign = |sp: u64| if sp.count_ones() % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        let shared = self.classes.iter().any(|c| c.blocked != 0);
        let (value, mut stats) = if shared {
            let memo = self.memoize()?;
            let beta_entries: u64 = memo.values().map(|(l, _)| l.total_size()).sum();
            let (value, entries) = (0..subsets)
                .into_par_iter()
                .map(|sp| {
                    let (h, entries) = self.assemble(sp, |q, t| &memo[&(q, t)]);
                    (sign(sp) * h, entries)
                })
                .reduce(|| (BigInt::zero(), 0), |(a, x), (b, y)| (a + b, x + y));
            (
                value,
                WorkStats {
                    lattice_entries: entries,
                    beta_entries,
                    ..WorkStats::default()
                },
            )
        } else {
            (0..subsets)
                .into_par_iter()
                .map(|sp| {
                    let tables: Vec<Table> = (0..self.classes.len()).map(|q| self.beta_table(q, sp)).collect();
                    let beta_entries: u64 = tables.iter().map(|(l, _)| l.total_size()).sum();
                    let (h, entries) = self.assemble(sp, |q, _| &tables[q]);
                    (
                        sign(sp) * h,
                        WorkStats {
                            lattice_entries: entries,
                            beta_entries,
                            ..WorkStats::default()
                        },
                    )
                })
                .reduce(|| (BigInt::zero(), WorkStats::default()), |(a, x), (b, y)| (a + b, x + y))
        };
        stats.subsets_visited = subsets;
        if value.is_negative() {
            return Err(Error::InternalContradiction(format!("negative cover count {value}")));
        }
        Ok(HCount { value, stats })
    }

    /// β tables for every class `q` and every `T ⊆ S \ S_q`.
    fn memoize(&self) -> Result<HashMap<(usize, u64), Table>> {
        let ground = 2f64.powi(self.w.len() as i32);
        let mut estimate = 0f64;
        let mut keys = Vec::new();
        for (q, c) in self.classes.iter().enumerate() {
            let free = self.full_mask() & !c.blocked;
            estimate += ground
                * (0..self.selected())
                    .filter(|i| free >> i & 1 == 1)
                    .map(|i| 2.0 - 0.5f64.powi(self.blocks[i].len() as i32))
                    .product::<f64>();
            let mut t = free;
            loop {
                keys.push((q, t));
                if t == 0 {
                    break;
                }
                t = (t - 1) & free;
            }
        }
        if estimate > MAX_MEMO_ENTRIES {
            return Err(Error::resource(format!(
                "memoized tables would hold about {estimate:.0} entries"
            )));
        }
        Ok(keys
            .into_par_iter()
            .map(|(q, t)| ((q, t), self.beta_table(q, t)))
            .collect())
    }

    fn single(&self, sp: u64) -> BigInt {
        let tables: Vec<Table> = self
            .classes
            .iter()
            .enumerate()
            .map(|(q, c)| self.beta_table(q, sp & !c.blocked))
            .collect();
        self.assemble(sp, |q, _| &tables[q]).0
    }
}

fn check_disjoint_neighborhoods(g: &Graph, s: VertexSet, inside: VertexSet) -> Result<()> {
    if !g.is_independent(s) {
        return Err(Error::contract(format!("selected set {s} is not independent")));
    }
    let mut seen = VertexSet::EMPTY;
    for v in s {
        let block = g.neighbors(v) & inside;
        if block.intersects(seen) {
            return Err(Error::contract(format!(
                "neighborhood of selected vertex {v} overlaps another selected neighborhood"
            )));
        }
        seen = seen | block;
    }
    Ok(())
}

fn validate_trimmed(inst: &TrimmedInstance) -> Result<()> {
    let g = inst.g;
    if !inst.s.is_subset(g.vertices()) {
        return Err(Error::contract("selected set leaves the vertex set"));
    }
    if let Some(v) = inst.s.iter().find(|&v| g.degree(v) > inst.max_block_degree) {
        return Err(Error::contract(format!(
            "selected vertex {v} has degree {} > {}",
            g.degree(v),
            inst.max_block_degree
        )));
    }
    check_disjoint_neighborhoods(g, inst.s, g.vertices())
}

fn validate_fixed(inst: &FixedColoringInstance) -> Result<()> {
    let g = inst.g;
    let all = g.vertices();
    if !inst.v0.is_subset(all) || !inst.s.is_subset(all) {
        return Err(Error::contract("instance sets leave the vertex set"));
    }
    if inst.c0.vertex_count() != g.n() || inst.c0.domain() != inst.v0 {
        return Err(Error::contract("the fixed coloring must be defined exactly on V0"));
    }
    if inst.s.intersects(inst.v0) {
        return Err(Error::contract("selected set must avoid V0"));
    }
    if let Some(v) = inst.v0.iter().find(|&v| inst.c0.get(v).is_some_and(|c| c as usize >= inst.k)) {
        return Err(Error::contract(format!("vertex {v} uses a color outside [k]")));
    }
    if !inst.c0.is_proper(g) {
        return Err(Error::contract("the fixed coloring is not proper on G[V0]"));
    }
    check_disjoint_neighborhoods(g, inst.s, all - inst.v0)
}

/// `h(S')` for one `S' ⊆ S` in the disjoint-neighborhood setting: the number
/// of ordered `k`-tuples of independent sets covering `V \ S` whose members
/// all meet `N(s)` for every `s ∈ S'`.
pub fn h_count(inst: &TrimmedInstance, s_prime: VertexSet, limits: &Limits) -> Result<BigInt> {
    validate_trimmed(inst)?;
    if !s_prime.is_subset(inst.s) {
        return Err(Error::contract("S' must be a subset of S"));
    }
    if inst.k == 0 {
        let ground = inst.g.vertices() - inst.s;
        return Ok(BigInt::from(ground.is_empty() as u8));
    }
    let empty = PartialColoring::new(inst.g.n());
    let engine = Engine::new(inst.g, VertexSet::EMPTY, &empty, inst.s, inst.k, limits)?;
    let local = inst
        .s
        .iter()
        .enumerate()
        .filter(|&(_, v)| s_prime.contains(v))
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    Ok(engine.single(local))
}

/// `H` for the disjoint-neighborhood setting.
pub fn trimmed_count(inst: &TrimmedInstance, limits: &Limits) -> Result<HCount> {
    validate_trimmed(inst)?;
    let empty = PartialColoring::new(inst.g.n());
    extension_count(
        &FixedColoringInstance {
            g: inst.g,
            v0: VertexSet::EMPTY,
            c0: &empty,
            s: inst.s,
            k: inst.k,
        },
        limits,
    )
}

pub fn decide_trimmed(inst: &TrimmedInstance, limits: &Limits) -> Result<bool> {
    Ok(trimmed_count(inst, limits)?.value.is_positive())
}

/// `H` for an instance with a fixed partial coloring; zero when some member
/// of `S` is adjacent to all `k` color classes.
pub fn extension_count(inst: &FixedColoringInstance, limits: &Limits) -> Result<HCount> {
    validate_fixed(inst)?;
    if inst.k == 0 {
        let colorable = inst.g.n() == 0;
        return Ok(HCount {
            value: BigInt::from(colorable as u8),
            stats: WorkStats::default(),
        });
    }
    let engine = Engine::new(inst.g, inst.v0, inst.c0, inst.s, inst.k, limits)?;
    if engine.hopeless() {
        return Ok(HCount {
            value: BigInt::zero(),
            stats: WorkStats::default(),
        });
    }
    engine.total()
}

pub fn decide_extension(inst: &FixedColoringInstance, limits: &Limits) -> Result<bool> {
    Ok(extension_count(inst, limits)?.value.is_positive())
}

/// `C = ln k / (-ln(1 - 2^-(Δ+1)))`, as a rational.
///
/// For `Δ >= 60` the denominator is replaced by its lower bound
/// `2^-(Δ+1)`, which only enlarges `C`.
pub fn removal_constant(k: usize, delta: usize) -> BigRational {
    assert!(k >= 2, "removal constant needs k >= 2");
    let t = BigRational::new(BigInt::one(), BigInt::one() << (delta + 1));
    let (ln_k, _) = ln_enclosure(&int(k), 64);
    let denominator = if delta >= 60 {
        t
    } else {
        let (_, hi) = ln_enclosure(&(BigRational::one() - &t), 64 + delta as u64);
        let d = -hi;
        if d.is_positive() {
            d
        } else {
            t
        }
    };
    ln_k / denominator
}

/// The pre-colored set `V0` and the selected set `S` of the bounded pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedPlan {
    /// Independent low-degree vertices before the removal step.
    pub candidates: VertexSet,
    pub s: VertexSet,
    pub v0: VertexSet,
    pub removal: Option<RemovalResult>,
}

/// Greedy independent low-degree set, then the removal lemma on its
/// neighborhoods: the kept members form `S`, the removed elements `V0`.
pub fn plan_bounded(g: &Graph, k: usize, delta: usize) -> Result<BoundedPlan> {
    let candidates = greedy_independent_low_degree(g, delta);
    if candidates.is_empty() || delta == 0 || k < 2 {
        return Ok(BoundedPlan {
            candidates,
            s: candidates,
            v0: VertexSet::EMPTY,
            removal: None,
        });
    }
    let order = candidates.to_vec();
    let members: Vec<Vec<u32>> = order
        .iter()
        .map(|&v| g.neighbors(v).iter().map(|u| u as u32).collect())
        .collect();
    let family = SetFamily::new(g.n() as u32, members, delta)?;
    let removal = removal_lemma(&family, &removal_constant(k, delta))?;
    let s = removal.kept.iter().map(|&i| order[i]).collect();
    let v0 = removal.removed_universe.iter().map(|&u| u as usize).collect();
    Ok(BoundedPlan {
        candidates,
        s,
        v0,
        removal: Some(removal),
    })
}

/// Visits proper colorings of `vertices` (ascending, colors from `choices`)
/// in radix order until `visit` returns true.
pub(crate) fn for_each_proper_coloring(
    g: &Graph,
    vertices: &[usize],
    choices: &dyn Fn(usize) -> Vec<u32>,
    coloring: &mut PartialColoring,
    visit: &mut dyn FnMut(&PartialColoring) -> Result<bool>,
) -> Result<bool> {
    let Some((&v, rest)) = vertices.split_first() else {
        return visit(coloring);
    };
    for c in choices(v) {
        if g.neighbors(v).iter().any(|u| coloring.get(u) == Some(c)) {
            continue;
        }
        coloring.set(v, c);
        if for_each_proper_coloring(g, rest, choices, coloring, visit)? {
            coloring.unset(v);
            return Ok(true);
        }
    }
    coloring.unset(v);
    Ok(false)
}

/// Runs the bounded pipeline with a fixed plan: every proper coloring of
/// `V0` is tried as the fixed coloring.
pub fn decide_with_plan(g: &Graph, k: usize, plan: &BoundedPlan, limits: &Limits) -> Result<(bool, WorkStats)> {
    if k == 0 {
        return Ok((g.n() == 0, WorkStats::default()));
    }
    limits.check_enumeration(plan.v0.len())?;
    let vertices = plan.v0.to_vec();
    let mut stats = WorkStats::default();
    let mut coloring = PartialColoring::new(g.n());
    let all_colors: Vec<u32> = (0..k as u32).collect();
    let found = for_each_proper_coloring(g, &vertices, &|_| all_colors.clone(), &mut coloring, &mut |c0| {
        stats.colorings_tried += 1;
        let h = extension_count(
            &FixedColoringInstance {
                g,
                v0: plan.v0,
                c0,
                s: plan.s,
                k,
            },
            limits,
        )?;
        stats += h.stats;
        Ok(h.value.is_positive())
    })?;
    Ok((found, stats))
}

pub fn decide_bounded_stats(g: &Graph, k: usize, delta: usize, limits: &Limits) -> Result<(bool, WorkStats)> {
    if k == 1 {
        return Ok((g.edge_count() == 0, WorkStats::default()));
    }
    let plan = plan_bounded(g, k, delta)?;
    decide_with_plan(g, k, &plan, limits)
}

pub fn decide_bounded(g: &Graph, k: usize, delta: usize, limits: &Limits) -> Result<bool> {
    Ok(decide_bounded_stats(g, k, delta, limits)?.0)
}

/// List coloring through the augmented graph: one extra vertex per color
/// `u`, pre-colored `u` and adjacent to every vertex whose list lacks `u`.
pub fn decide_list_bounded(
    g: &Graph,
    lists: &ListAssignment,
    k: usize,
    delta: usize,
    limits: &Limits,
) -> Result<bool> {
    let n = g.n();
    if lists.vertex_count() != n {
        return Err(Error::contract(format!("{} lists for {n} vertices", lists.vertex_count())));
    }
    if let Some(v) = (0..n).find(|&v| lists.list(v).len() > k) {
        return Err(Error::contract(format!(
            "list of vertex {v} has {} colors, more than k = {k}",
            lists.list(v).len()
        )));
    }
    if (0..n).any(|v| lists.list(v).is_empty()) {
        return Ok(false);
    }
    if n == 0 {
        return Ok(true);
    }
    let universe = lists.universe_size() as usize;
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for v in 0..n {
        for u in 0..universe {
            if !lists.allows(v, u as u32) {
                edges.push((v, n + u));
            }
        }
    }
    let augmented = Graph::from_edges(n + universe, &edges)
        .map_err(|_| Error::resource(format!("augmented graph on {} vertices", n + universe)))?;
    let plan = plan_bounded(g, k.max(2), delta)?;
    limits.check_enumeration(plan.v0.len())?;
    let color_vertices: VertexSet = (n..n + universe).collect();
    let v0 = plan.v0 | color_vertices;
    let mut coloring = PartialColoring::new(n + universe);
    for u in 0..universe {
        coloring.set(n + u, u as u32);
    }
    let vertices = plan.v0.to_vec();
    for_each_proper_coloring(
        &augmented,
        &vertices,
        &|v| lists.list(v).to_vec(),
        &mut coloring,
        &mut |c0| {
            decide_extension(
                &FixedColoringInstance {
                    g: &augmented,
                    v0,
                    c0,
                    s: plan.s,
                    k: universe,
                },
                limits,
            )
        },
    )
}

/// Colors each `s ∈ S` with the least color absent from its neighborhood.
pub fn extend_over_s(g: &Graph, s: VertexSet, partial: &PartialColoring, k: usize) -> Result<Option<PartialColoring>> {
    if !g.is_independent(s) {
        return Err(Error::contract("S must be independent"));
    }
    if partial.vertex_count() != g.n() || partial.domain() != g.vertices() - s {
        return Err(Error::contract("partial coloring must be defined exactly on V \\ S"));
    }
    if !partial.is_proper(g) {
        return Err(Error::contract("partial coloring is not proper"));
    }
    let mut out = partial.clone();
    for v in s {
        let seen = partial.colors_on(g.neighbors(v));
        match (0..k as u32).find(|c| seen.binary_search(c).is_err()) {
            Some(c) => out.set(v, c),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Search: saturate `G[V \ S]` with edges that keep the plan's decision true,
/// color `V \ S` by co-clique classes, then extend over `S`.
pub fn find_coloring_trimmed(g: &Graph, k: usize, delta: usize, limits: &Limits) -> Result<Option<PartialColoring>> {
    if k == 0 {
        return Ok((g.n() == 0).then(|| PartialColoring::new(0)));
    }
    if k == 1 {
        return Ok((g.edge_count() == 0).then(|| PartialColoring::from_colors(&vec![0; g.n()])));
    }
    let plan = plan_bounded(g, k, delta)?;
    let rest = g.vertices() - plan.s;
    let members = rest.to_vec();
    let pairs: Vec<(usize, usize)> = members
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| members[i + 1..].iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    let Some(saturated) = self_reduce(g, pairs, |h| Ok(decide_with_plan(h, k, &plan, limits)?.0))? else {
        return Ok(None);
    };
    let partial = coclique_coloring(&saturated, rest, k)?;
    let coloring = extend_over_s(g, plan.s, &partial, k)?.ok_or_else(|| {
        Error::InternalContradiction("a selected vertex sees all colors after saturation".into())
    })?;
    if !coloring.is_proper_k_coloring(g, k) {
        return Err(Error::InternalContradiction("trimmed search produced an improper coloring".into()));
    }
    Ok(Some(coloring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bhk::decide_k_colorable;
    use crate::graph::greedy_distance3_set;
    use crate::oracle::{brute_cover_count, brute_k_colorable, brute_list_colorable, OracleBudget};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn limits() -> Limits {
        Limits::default()
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn inst(g: &Graph, s: VertexSet, k: usize) -> TrimmedInstance<'_> {
        TrimmedInstance {
            g,
            s,
            k,
            max_block_degree: g.n(),
        }
    }

    #[test]
    fn h_count_examples() {
        let p3 = Graph::path(3);
        let s = VertexSet::singleton(0);
        let i = inst(&p3, s, 2);
        assert_eq!(h_count(&i, VertexSet::EMPTY, &limits()).unwrap(), BigInt::from(2));
        assert_eq!(h_count(&i, s, &limits()).unwrap(), BigInt::zero());
        assert!(decide_trimmed(&i, &limits()).unwrap());
        assert_eq!(trimmed_count(&i, &limits()).unwrap().value, BigInt::from(2));
    }

    #[test]
    fn isolated_selected_vertex_gives_zero() {
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let s = VertexSet::singleton(0);
        assert_eq!(h_count(&inst(&g, s, 2), s, &limits()).unwrap(), BigInt::zero());
    }

    #[test]
    fn decide_trimmed_examples() {
        let k3 = Graph::complete(3);
        assert!(!decide_trimmed(&inst(&k3, VertexSet::EMPTY, 2), &limits()).unwrap());
        let c5 = Graph::cycle(5);
        let i = TrimmedInstance {
            g: &c5,
            s: VertexSet::singleton(0),
            k: 3,
            max_block_degree: 2,
        };
        assert!(decide_trimmed(&i, &limits()).unwrap());
        let i2 = TrimmedInstance { k: 2, ..i };
        assert!(!decide_trimmed(&i2, &limits()).unwrap());
    }

    #[test]
    fn preconditions_are_checked() {
        let p3 = Graph::path(3);
        // 0 and 2 share the neighbor 1
        let s: VertexSet = [0, 2].into_iter().collect();
        assert!(matches!(decide_trimmed(&inst(&p3, s, 2), &limits()), Err(Error::Contract(_))));
        let adjacent: VertexSet = [0, 1].into_iter().collect();
        assert!(decide_trimmed(&inst(&p3, adjacent, 2), &limits()).is_err());
        let tight = TrimmedInstance {
            g: &p3,
            s: VertexSet::singleton(1),
            k: 2,
            max_block_degree: 1,
        };
        assert!(decide_trimmed(&tight, &limits()).is_err());
    }

    #[test]
    fn h_count_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = OracleBudget::default();
        for _ in 0..40 {
            let n = rng.gen_range(2..=9);
            let g = random_graph(&mut rng, n, 0.3);
            let s = greedy_distance3_set(&g, 3);
            let s = s.iter().take(3).collect::<VertexSet>();
            let ground = g.vertices() - s;
            let s_list = s.to_vec();
            for k in 1..=3 {
                let i = inst(&g, s, k);
                for mask in 0u32..1 << s_list.len() {
                    let sp: VertexSet = s_list.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &v)| v).collect();
                    let hits: Vec<VertexSet> = sp.iter().map(|v| g.neighbors(v)).collect();
                    let expected = brute_cover_count(&g, k, &hits, ground, &b).unwrap();
                    let got = h_count(&i, sp, &limits()).unwrap();
                    assert_eq!(got, BigInt::from(expected), "n={n} k={k} S'={sp}");
                }
            }
        }
    }

    #[test]
    fn trimmed_agrees_with_full_lattice() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=10);
            let g = random_graph(&mut rng, n, 0.35);
            let s = greedy_distance3_set(&g, 3);
            for k in 1..=4 {
                let expected = decide_k_colorable(&g, k, &limits()).unwrap();
                let i = TrimmedInstance {
                    g: &g,
                    s,
                    k,
                    max_block_degree: 3,
                };
                assert_eq!(decide_trimmed(&i, &limits()).unwrap(), expected);
                let empty = PartialColoring::new(n);
                let f = FixedColoringInstance {
                    g: &g,
                    v0: VertexSet::EMPTY,
                    c0: &empty,
                    s,
                    k,
                };
                assert_eq!(decide_extension(&f, &limits()).unwrap(), expected);
                assert_eq!(decide_bounded(&g, k, 3, &limits()).unwrap(), expected);
            }
        }
    }

    #[test]
    fn work_bound_holds() {
        for n in [9, 12, 15] {
            let g = Graph::cycle(n);
            let s = greedy_distance3_set(&g, 3);
            let i = TrimmedInstance {
                g: &g,
                s,
                k: 3,
                max_block_degree: 3,
            };
            let h = trimmed_count(&i, &limits()).unwrap();
            let bound = work_bound(n - s.len(), s.len(), 3);
            assert!(int(h.stats.lattice_entries) <= bound);
            // blocks of size 2 give exactly 2^|W| (7/4)^|S|
            let exact = work_bound(n - s.len(), s.len(), 2);
            assert_eq!(int(h.stats.lattice_entries), exact);
        }
    }

    #[test]
    fn extension_examples() {
        let edge = Graph::path(2);
        let mut c0 = PartialColoring::new(2);
        c0.set(0, 0);
        let f = FixedColoringInstance {
            g: &edge,
            v0: VertexSet::singleton(0),
            c0: &c0,
            s: VertexSet::EMPTY,
            k: 2,
        };
        assert!(decide_extension(&f, &limits()).unwrap());

        let tri = Graph::complete(3);
        let mut c0 = PartialColoring::new(3);
        c0.set(0, 0);
        c0.set(1, 1);
        let f = FixedColoringInstance {
            g: &tri,
            v0: [0, 1].into_iter().collect(),
            c0: &c0,
            s: VertexSet::EMPTY,
            k: 2,
        };
        assert!(!decide_extension(&f, &limits()).unwrap());

        let mut bad = PartialColoring::new(3);
        bad.set(0, 0);
        bad.set(1, 0);
        let f = FixedColoringInstance { c0: &bad, ..f };
        assert!(matches!(decide_extension(&f, &limits()), Err(Error::Contract(_))));
    }

    /// Reference: extend `c0` by brute force.
    fn brute_extends(g: &Graph, c0: &PartialColoring, k: usize) -> bool {
        let free: Vec<usize> = (0..g.n()).filter(|&v| c0.get(v).is_none()).collect();
        let total = (k as u64).pow(free.len() as u32);
        (0..total).any(|mut code| {
            let mut c = c0.clone();
            for &v in &free {
                c.set(v, (code % k as u64) as u32);
                code /= k as u64;
            }
            c.is_proper(g)
        })
    }

    #[test]
    fn extension_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 80 {
            let n = rng.gen_range(2..=9);
            let g = random_graph(&mut rng, n, 0.3);
            let k = rng.gen_range(2..=3);
            let v0: VertexSet = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let mut c0 = PartialColoring::new(n);
            for v in v0 {
                c0.set(v, rng.gen_range(0..k as u32));
            }
            if !c0.is_proper(&g) {
                continue;
            }
            // independent S with disjoint neighborhoods inside V
            let inside = g.vertices() - v0;
            let mut s = VertexSet::EMPTY;
            let mut used = VertexSet::EMPTY;
            for v in inside {
                let block = g.neighbors(v) & inside;
                if !g.neighbors(v).intersects(s) && !block.intersects(used) && !used.contains(v) && rng.gen_bool(0.6) {
                    s.insert(v);
                    used = used | block;
                }
            }
            let f = FixedColoringInstance { g: &g, v0, c0: &c0, s, k };
            assert_eq!(decide_extension(&f, &limits()).unwrap(), brute_extends(&g, &c0, k), "{g:?} {c0:?} {s}");
            checked += 1;
        }
    }

    /// `β_j(V', S') = β_j(V', S' ∪ S_j)`, both sides by enumeration.
    #[test]
    fn blocked_members_do_not_change_beta() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let beta = |g: &Graph, class: VertexSet, vp: VertexSet, sp: VertexSet| -> usize {
            let members = vp.to_vec();
            (0u32..1 << members.len())
                .filter(|mask| {
                    let i: VertexSet = members.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &v)| v).collect();
                    let with = i | class;
                    g.is_independent(with) && sp.iter().all(|s| g.neighbors(s).intersects(with))
                })
                .count()
        };
        for _ in 0..30 {
            let n = 8;
            let g = random_graph(&mut rng, n, 0.3);
            let class: VertexSet = [0, 1].into_iter().filter(|_| rng.gen_bool(0.7)).collect();
            if !g.is_independent(class) {
                continue;
            }
            let rest = g.vertices() - class;
            let s: VertexSet = rest.iter().filter(|_| rng.gen_bool(0.3)).collect();
            let blocked: VertexSet = s.iter().filter(|&v| g.neighbors(v).intersects(class)).collect();
            let vp = rest - s;
            for sub in [VertexSet::EMPTY, s - blocked, s & !blocked] {
                assert_eq!(beta(&g, class, vp, sub), beta(&g, class, vp, sub | blocked));
            }
        }
    }

    #[test]
    fn bounded_examples() {
        assert!(decide_bounded(&Graph::cycle(6), 2, 2, &limits()).unwrap());
        let mut edges: Vec<(usize, usize)> = Graph::complete(4).edges().collect();
        edges.push((3, 4));
        let k4_pendant = Graph::from_edges(5, &edges).unwrap();
        assert!(!decide_bounded(&k4_pendant, 3, 1, &limits()).unwrap());
        assert!(decide_bounded(&k4_pendant, 4, 1, &limits()).unwrap());
    }

    #[test]
    fn bounded_plan_uses_removal() {
        // sunflower: many low-degree vertices sharing one neighbor
        let mut edges = Vec::new();
        for i in 1..=8 {
            edges.push((0, i));
            edges.push((i, 8 + i));
        }
        let g = Graph::from_edges(17, &edges).unwrap();
        let plan = plan_bounded(&g, 3, 2).unwrap();
        let removal = plan.removal.as_ref().unwrap();
        assert!(!removal.kept.is_empty());
        for u in plan.s {
            for v in plan.s {
                if u < v {
                    assert!(!(g.neighbors(u) & g.neighbors(v)).intersects(g.vertices() - plan.v0));
                }
            }
        }
        assert!(decide_bounded(&g, 2, 2, &limits()).unwrap());
    }

    #[test]
    fn list_examples() {
        let edge = Graph::path(2);
        let same = ListAssignment::from_lists(vec![vec![0], vec![0]]);
        assert!(!decide_list_bounded(&edge, &same, 1, 2, &limits()).unwrap());
        let both = ListAssignment::from_lists(vec![vec![0, 1], vec![0, 1]]);
        assert!(decide_list_bounded(&edge, &both, 2, 2, &limits()).unwrap());
        assert!(matches!(decide_list_bounded(&edge, &both, 1, 2, &limits()), Err(Error::Contract(_))));
        let k33 = Graph::complete_bipartite(3, 3);
        let side = [vec![0, 1], vec![0, 2], vec![1, 2]];
        let lists = ListAssignment::from_lists(side.iter().chain(side.iter()).cloned().collect());
        assert!(!decide_list_bounded(&k33, &lists, 2, 3, &limits()).unwrap());
    }

    #[test]
    fn list_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let b = OracleBudget::default();
        for _ in 0..60 {
            let n = rng.gen_range(1..=8);
            let g = random_graph(&mut rng, n, 0.35);
            let lists: Vec<Vec<u32>> = (0..n)
                .map(|_| {
                    let size = rng.gen_range(1..=3);
                    (0..size).map(|_| rng.gen_range(0..5)).collect()
                })
                .collect();
            let lists = ListAssignment::new(5, lists).unwrap();
            let expected = brute_list_colorable(&g, &lists, &b).unwrap();
            assert_eq!(decide_list_bounded(&g, &lists, 3, 2, &limits()).unwrap(), expected);
        }
    }

    #[test]
    fn extend_examples() {
        let p3 = Graph::path(3);
        let mut partial = PartialColoring::new(3);
        partial.set(1, 0);
        partial.set(2, 1);
        let full = extend_over_s(&p3, VertexSet::singleton(0), &partial, 2).unwrap().unwrap();
        assert_eq!(full.to_vec().unwrap(), vec![1, 0, 1]);

        let star = Graph::star(2);
        let mut partial = PartialColoring::new(3);
        partial.set(1, 0);
        partial.set(2, 1);
        assert!(extend_over_s(&star, VertexSet::singleton(0), &partial, 2).unwrap().is_none());
    }

    #[test]
    fn search_examples() {
        let c5 = Graph::cycle(5);
        let c = find_coloring_trimmed(&c5, 3, 2, &limits()).unwrap().unwrap();
        assert!(c.is_proper_k_coloring(&c5, 3));
        assert!(find_coloring_trimmed(&Graph::complete(4), 3, 3, &limits()).unwrap().is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..15 {
            let n = rng.gen_range(3..=10);
            let g = random_graph(&mut rng, n, 0.3);
            let colorable = brute_k_colorable(&g, 3, &OracleBudget::default()).unwrap();
            let found = find_coloring_trimmed(&g, 3, 3, &limits()).unwrap();
            assert_eq!(found.is_some(), colorable);
            if let Some(c) = found {
                assert!(c.is_proper_k_coloring(&g, 3));
            }
        }
    }

    #[test]
    fn removal_constant_value() {
        let c = removal_constant(3, 3);
        let expected = 3f64.ln() / -(1.0 - 1.0 / 16.0f64).ln();
        assert!((crate::exact::to_f64(&c) - expected).abs() < 1e-9);
        assert!(removal_constant(5, 80).is_positive());
    }
}
