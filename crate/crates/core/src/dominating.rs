//! Deterministic reduction from k-coloring to (k-1)-list coloring through a
//! small dominating set.
//!
//! `R_0` samples each vertex with probability `p = ln Δ / Δ`; the dominating
//! set is `R_0` plus every vertex outside `R_0` without a neighbor in it. The
//! sample is fixed vertex by vertex so the conditional expectation of `|R|`
//! never increases.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, ln_enclosure, ratio};
use crate::graph::{is_alpha_delta_bounded, Graph, ListAssignment, PartialColoring, VertexSet};
use crate::limits::Limits;
use crate::lists::{ListInstance, ListSolver};
use crate::trimmed::{find_coloring_trimmed, for_each_proper_coloring};

pub const DEFAULT_DELTA: usize = 12;

pub fn default_alpha() -> BigRational {
    ratio(1, 4)
}

/// `ln Δ / Δ`, rounded down to a rational with a 64-bit enclosure of `ln Δ`.
pub fn sampling_probability(delta: usize) -> Result<BigRational> {
    if delta < 2 {
        return Err(Error::contract(format!("Δ = {delta} must be at least 2")));
    }
    let (ln_lo, _) = ln_enclosure(&int(delta), 64);
    Ok(ln_lo / int(delta))
}

/// `E[|R|]` in units of `den^(n+1)`, where `p = num / den`.
///
/// Every term is `p^a (1-p)^b` with `a + b <= n + 1`, so scaling by
/// `den^(n+1)` keeps all arithmetic in integers.
struct Scaled {
    num: BigInt,
    q: BigInt,
    den_powers: Vec<BigInt>,
    q_powers: Vec<BigInt>,
}

impl Scaled {
    fn new(p: &BigRational, n: usize) -> Self {
        let num = p.numer().clone();
        let den = p.denom().clone();
        let q = &den - &num;
        let mut den_powers = vec![BigInt::one()];
        let mut q_powers = vec![BigInt::one()];
        for _ in 0..=n {
            den_powers.push(den_powers.last().unwrap() * &den);
            q_powers.push(q_powers.last().unwrap() * &q);
        }
        Scaled {
            num,
            q,
            den_powers,
            q_powers,
        }
    }

    fn top(&self) -> usize {
        self.den_powers.len() - 1
    }

    /// `(1-p)^e` scaled.
    fn q_pow(&self, e: usize) -> BigInt {
        &self.q_powers[e] * &self.den_powers[self.top() - e]
    }

    fn one(&self) -> BigInt {
        self.den_powers[self.top()].clone()
    }

    fn p(&self) -> BigInt {
        &self.num * &self.den_powers[self.top() - 1]
    }

    fn expectation(&self, g: &Graph, v1: VertexSet, v0: VertexSet) -> BigInt {
        let mut total = BigInt::zero();
        for v in 0..g.n() {
            let nb = g.neighbors(v);
            total += if v1.contains(v) {
                self.one()
            } else if v0.contains(v) {
                if nb.intersects(v1) {
                    BigInt::zero()
                } else {
                    self.q_pow((nb - v0).len())
                }
            } else if nb.intersects(v1) {
                self.p()
            } else {
                self.p() + self.q_pow(1 + (nb - v0).len())
            };
        }
        total
    }

    fn unscale(&self, x: BigInt) -> BigRational {
        BigRational::new(x, self.den_powers[self.top()].clone())
    }
}

/// `E[|R|]` given `V1 ⊆ R_0` and `V0 ∩ R_0 = ∅`, exact.
pub fn conditional_expectation(g: &Graph, v1: VertexSet, v0: VertexSet, p: &BigRational) -> Result<BigRational> {
    if v1.intersects(v0) {
        return Err(Error::contract("decided-in and decided-out sets overlap"));
    }
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::contract(format!("probability {p} outside [0, 1]")));
    }
    let s = Scaled::new(p, g.n());
    Ok(s.unscale(s.expectation(g, v1, v0)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominatingCertificate {
    pub r: Vec<usize>,
    #[serde(serialize_with = "crate::removal::serialize_rational")]
    pub p: BigRational,
    /// `E[|R|]` before any vertex is decided; `|R|` never exceeds it.
    #[serde(serialize_with = "crate::removal::serialize_rational")]
    pub expectation: BigRational,
    /// `((1-α)(1 + ln Δ)/Δ + α) n` with `α` the fraction of vertices of
    /// degree below `Δ - 1`.
    #[serde(serialize_with = "crate::removal::serialize_rational")]
    pub bound: BigRational,
}

impl DominatingCertificate {
    pub fn set(&self) -> VertexSet {
        self.r.iter().copied().collect()
    }
}

pub fn dominates(g: &Graph, r: VertexSet) -> bool {
    (g.vertices() - r).iter().all(|v| g.neighbors(v).intersects(r))
}

/// Decides vertices in ascending order, in or out, never increasing the
/// conditional expectation; ties go out.
pub fn dominating_set(g: &Graph, delta: usize) -> Result<DominatingCertificate> {
    let n = g.n();
    if n == 0 {
        return Err(Error::contract("dominating set of an empty graph"));
    }
    let p = sampling_probability(delta)?;
    let s = Scaled::new(&p, n);
    let (mut v1, mut v0) = (VertexSet::EMPTY, VertexSet::EMPTY);
    let root = s.expectation(g, v1, v0);
    let mut current = root.clone();
    for u in 0..n {
        let e_in = s.expectation(g, v1.with(u), v0);
        let e_out = s.expectation(g, v1, v0.with(u));
        // scaled identity: E = p E_in + (1-p) E_out
        debug_assert_eq!(
            &current * &s.den_powers[1],
            &s.num * &e_in + &s.q * &e_out,
            "conditional expectation identity"
        );
        assert!(e_in.clone().min(e_out.clone()) <= current, "derandomization step increased the expectation");
        if e_in < e_out {
            v1.insert(u);
            current = e_in;
        } else {
            v0.insert(u);
            current = e_out;
        }
    }
    let undominated = (g.vertices() - v1).iter().filter(|&v| !g.neighbors(v).intersects(v1));
    let r: VertexSet = v1 | undominated.collect();
    assert!(dominates(g, r), "dominating set construction missed a vertex");
    // with every vertex decided the expectation is exactly |R|
    assert_eq!(current, s.one() * BigInt::from(r.len()));

    let low = (0..n).filter(|&v| g.degree(v) + 1 < delta).count();
    let alpha = ratio(low as i64, n as i64);
    let (_, ln_hi) = ln_enclosure(&int(delta), 64);
    let bound = ((BigRational::one() - &alpha) * (BigRational::one() + ln_hi) / int(delta) + alpha) * int(n);
    let expectation = s.unscale(root);
    if int(r.len()) > expectation || expectation > bound {
        return Err(Error::InternalContradiction(format!(
            "dominating set of size {} against expectation {expectation} and bound {bound}",
            r.len()
        )));
    }
    Ok(DominatingCertificate {
        r: r.to_vec(),
        p,
        expectation,
        bound,
    })
}

/// The degree-below-`k` peeling: `core` is induced on the surviving vertices,
/// `vertices[i]` is the original id of core vertex `i`.
#[derive(Debug, Clone)]
pub struct Peeling {
    pub core: Graph,
    pub vertices: Vec<usize>,
    pub stack: Vec<usize>,
}

impl Peeling {
    /// Extends a coloring of the core by popping the stack, each vertex
    /// taking the least color unused by its colored neighbors.
    pub fn replay(&self, g: &Graph, core_coloring: &PartialColoring, k: usize) -> Result<PartialColoring> {
        let mut c = PartialColoring::new(g.n());
        for (i, &v) in self.vertices.iter().enumerate() {
            let color = core_coloring
                .get(i)
                .ok_or_else(|| Error::contract(format!("core vertex {i} is uncolored")))?;
            c.set(v, color);
        }
        for &v in self.stack.iter().rev() {
            let seen = c.colors_on(g.neighbors(v));
            let color = (0..k as u32)
                .find(|x| seen.binary_search(x).is_err())
                .ok_or_else(|| Error::InternalContradiction(format!("peeled vertex {v} sees all {k} colors")))?;
            c.set(v, color);
        }
        Ok(c)
    }
}

/// Removes the lowest-index vertex of current degree below `k` until none
/// is left.
pub fn peel_low_degree(g: &Graph, k: usize) -> Result<Peeling> {
    if k == 0 {
        return Err(Error::contract("peeling needs k >= 1"));
    }
    let mut alive = g.vertices();
    let mut stack = Vec::new();
    while let Some(v) = alive.iter().find(|&v| (g.neighbors(v) & alive).len() < k) {
        alive.remove(v);
        stack.push(v);
    }
    let (core, vertices) = g.induced(alive);
    Ok(Peeling { core, vertices, stack })
}

/// List instance on `G[V \ R]`, with `vertices[i]` the original id of
/// instance vertex `i`.
#[derive(Debug, Clone)]
pub struct ReducedLists {
    pub instance: ListInstance,
    pub vertices: Vec<usize>,
}

/// `L(v) = [k] \ c_R(N(v) ∩ R)`; `None` when some list is empty.
pub fn reduce_to_lists(g: &Graph, r: VertexSet, c_r: &PartialColoring, k: usize) -> Result<Option<ReducedLists>> {
    if c_r.vertex_count() != g.n() || c_r.domain() != r {
        return Err(Error::contract("the coloring of R must be defined exactly on R"));
    }
    if !c_r.is_proper(g) || r.iter().any(|v| c_r.get(v).is_some_and(|c| c as usize >= k)) {
        return Err(Error::contract("the coloring of R is not a proper k-coloring of G[R]"));
    }
    if !dominates(g, r) {
        return Err(Error::contract("R does not dominate the graph"));
    }
    let (sub, vertices) = g.induced(g.vertices() - r);
    let mut lists = Vec::with_capacity(vertices.len());
    for &v in &vertices {
        let seen = c_r.colors_on(g.neighbors(v) & r);
        let list: Vec<u32> = (0..k as u32).filter(|x| seen.binary_search(x).is_err()).collect();
        if list.is_empty() {
            return Ok(None);
        }
        lists.push(list);
    }
    let lists = ListAssignment::new(k as u32, lists)?;
    Ok(Some(ReducedLists {
        instance: ListInstance::new(sub, lists)?,
        vertices,
    }))
}

/// Which route [`solve_k_via_k_minus_1`] took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Trimmed,
    Dominating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionOutcome {
    pub coloring: Option<Vec<u32>>,
    pub branch: Branch,
    pub dominating_set_size: Option<usize>,
    pub colorings_tried: u64,
    pub list_calls: u64,
}

/// k-coloring: the trimmed search on `(α, Δ)`-bounded graphs, otherwise
/// every proper coloring of a dominating set `R` (radix order) reduced to
/// a (k-1)-list instance on `V \ R`.
pub fn solve_k_via_k_minus_1(
    g: &Graph,
    k: usize,
    alpha: &BigRational,
    delta: usize,
    limits: &Limits,
    solver: &dyn ListSolver,
) -> Result<ReductionOutcome> {
    if k < 2 {
        return Err(Error::contract(format!("k = {k} must be at least 2")));
    }
    if g.n() == 0 || is_alpha_delta_bounded(g, alpha, delta) {
        let c = find_coloring_trimmed(g, k, delta, limits)?;
        return Ok(ReductionOutcome {
            coloring: c.map(|c| c.to_vec().expect("total coloring")),
            branch: Branch::Trimmed,
            dominating_set_size: None,
            colorings_tried: 0,
            list_calls: 0,
        });
    }
    let cert = dominating_set(g, delta)?;
    let r = cert.set();
    limits.check_enumeration(r.len())?;
    let mut tried = 0u64;
    let mut calls = 0u64;
    let mut found: Option<PartialColoring> = None;
    let colors: Vec<u32> = (0..k as u32).collect();
    let mut c_r = PartialColoring::new(g.n());
    for_each_proper_coloring(g, &cert.r, &|_| colors.clone(), &mut c_r, &mut |c_r| {
        tried += 1;
        let Some(reduced) = reduce_to_lists(g, r, c_r, k)? else {
            return Ok(false);
        };
        calls += 1;
        let Some(sub) = solver.solve(&reduced.instance)? else {
            return Ok(false);
        };
        let mut full = c_r.clone();
        for (i, &v) in reduced.vertices.iter().enumerate() {
            full.set(v, sub.get(i).expect("list solution is total"));
        }
        found = Some(full);
        Ok(true)
    })?;
    if let Some(c) = &found {
        if !c.is_proper_k_coloring(g, k) {
            return Err(Error::InternalContradiction("reduction produced an improper coloring".into()));
        }
    }
    Ok(ReductionOutcome {
        coloring: found.map(|c| c.to_vec().expect("total coloring")),
        branch: Branch::Dominating,
        dominating_set_size: Some(r.len()),
        colorings_tried: tried,
        list_calls: calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bhk::decide_k_colorable;
    use crate::lists::Backtracking;
    use crate::oracle::{brute_dominates, brute_k_colorable, OracleBudget};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn expectation_cases() {
        let p = ratio(1, 3);
        let k3 = Graph::complete(3);
        let all = k3.vertices();
        assert_eq!(conditional_expectation(&k3, all, VertexSet::EMPTY, &p).unwrap(), int(3));
        let single = Graph::empty(1);
        let e = conditional_expectation(&single, VertexSet::EMPTY, VertexSet::EMPTY, &p).unwrap();
        assert_eq!(e, int(1));
        assert!(conditional_expectation(&k3, VertexSet::singleton(0), VertexSet::singleton(0), &p).is_err());
        // path 0-1-2 with 0 in, 2 out: 1 + p + (1 - p)
        let p3 = Graph::path(3);
        let e = conditional_expectation(&p3, VertexSet::singleton(0), VertexSet::singleton(2), &p).unwrap();
        assert_eq!(e, int(2));
    }

    #[test]
    fn expectation_matches_sampling() {
        let star = Graph::star(3);
        let p = ratio(1, 2);
        let exact = crate::exact::to_f64(
            &conditional_expectation(&star, VertexSet::EMPTY, VertexSet::EMPTY, &p).unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let samples = 100_000;
        let (mut sum, mut sq) = (0f64, 0f64);
        for _ in 0..samples {
            let r0: VertexSet = (0..4).filter(|_| rng.gen_bool(0.5)).collect();
            let r = r0 | (star.vertices() - r0).iter().filter(|&v| !star.neighbors(v).intersects(r0)).collect();
            let x = r.len() as f64;
            sum += x;
            sq += x * x;
        }
        let mean = sum / samples as f64;
        let se = ((sq / samples as f64 - mean * mean) / samples as f64).sqrt();
        assert!((mean - exact).abs() <= 3.0 * se, "mean {mean} exact {exact} se {se}");
    }

    #[test]
    fn dominating_examples() {
        let k6 = Graph::complete(6);
        let c = dominating_set(&k6, 4).unwrap();
        assert!(dominates(&k6, c.set()));
        assert!(c.r.len() <= 2);
        let star = Graph::star(9);
        let c = dominating_set(&star, 4).unwrap();
        assert!(dominates(&star, c.set()));
        let empty = Graph::empty(5);
        assert_eq!(dominating_set(&empty, 4).unwrap().r, vec![0, 1, 2, 3, 4]);
        assert!(dominating_set(&empty, 1).is_err());
    }

    #[test]
    fn dominating_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let n = rng.gen_range(1..=30);
            let g = random_graph(&mut rng, n, 0.3);
            for delta in [2, 4, 8] {
                let c = dominating_set(&g, delta).unwrap();
                assert!(brute_dominates(&g, c.set()));
                assert!(int(c.r.len()) <= c.bound);
            }
        }
    }

    #[test]
    fn peeling_examples() {
        let tree = Graph::from_edges(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        let p = peel_low_degree(&tree, 2).unwrap();
        assert_eq!(p.core.n(), 0);
        assert_eq!(p.stack.len(), 5);
        let k5 = Graph::complete(5);
        let p = peel_low_degree(&k5, 3).unwrap();
        assert_eq!(p.core.n(), 5);
        assert!(p.stack.is_empty());
        let mut edges: Vec<(usize, usize)> = Graph::complete(4).edges().collect();
        edges.extend([(3, 4), (4, 5), (5, 6)]);
        let lollipop = Graph::from_edges(7, &edges).unwrap();
        let p = peel_low_degree(&lollipop, 3).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn peel_replay_extends_core_colorings() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let n = rng.gen_range(1..=10);
            let g = random_graph(&mut rng, n, 0.4);
            let k = 3;
            let p = peel_low_degree(&g, k).unwrap();
            if let Some(core_c) = crate::bhk::find_coloring_bhk(&p.core, k, &Limits::default()).unwrap() {
                let c = p.replay(&g, &core_c, k).unwrap();
                assert!(c.is_proper_k_coloring(&g, k));
            } else {
                assert!(!brute_k_colorable(&g, k, &OracleBudget::default()).unwrap());
            }
        }
    }

    #[test]
    fn list_reduction_examples() {
        let star = Graph::star(3);
        let mut c = PartialColoring::new(4);
        c.set(0, 0);
        let reduced = reduce_to_lists(&star, VertexSet::singleton(0), &c, 3).unwrap().unwrap();
        for v in 0..3 {
            assert_eq!(reduced.instance.lists.list(v), &[1, 2]);
        }
        let k3 = Graph::complete(3);
        let r: VertexSet = [0, 1].into_iter().collect();
        let mut c = PartialColoring::new(3);
        c.set(0, 0);
        c.set(1, 1);
        assert!(reduce_to_lists(&k3, r, &c, 2).unwrap().is_none());
        c.set(1, 0);
        assert!(matches!(reduce_to_lists(&k3, r, &c, 2), Err(Error::Contract(_))));
    }

    #[test]
    fn reduction_examples() {
        let l = Limits::default();
        let alpha = default_alpha();
        let c5 = Graph::cycle(5);
        let out = solve_k_via_k_minus_1(&c5, 5, &alpha, DEFAULT_DELTA, &l, &Backtracking).unwrap();
        assert!(PartialColoring::from_colors(&out.coloring.unwrap()).is_proper_k_coloring(&c5, 5));
        let k6 = Graph::complete(6);
        let out = solve_k_via_k_minus_1(&k6, 5, &alpha, DEFAULT_DELTA, &l, &Backtracking).unwrap();
        assert!(out.coloring.is_none());
    }

    #[test]
    fn reduction_matches_bhk_on_both_branches() {
        let l = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut branches = (0, 0);
        for _ in 0..40 {
            let n = rng.gen_range(4..=11);
            let density = rng.gen_range(0.3..0.8);
            let g = random_graph(&mut rng, n, density);
            let delta = 3;
            let out = solve_k_via_k_minus_1(&g, 4, &ratio(1, 2), delta, &l, &Backtracking).unwrap();
            match out.branch {
                Branch::Trimmed => branches.0 += 1,
                Branch::Dominating => branches.1 += 1,
            }
            assert_eq!(out.coloring.is_some(), decide_k_colorable(&g, 4, &l).unwrap());
        }
        assert!(branches.0 > 0 && branches.1 > 0, "{branches:?}");
    }
}
