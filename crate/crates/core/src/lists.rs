//! Exact list coloring.
//!
//! The reductions reach list coloring only through [`ListSolver`], so the
//! backtracking engine can be swapped without touching them.

use crate::error::{Error, Result};
use crate::graph::{Graph, ListAssignment, PartialColoring};
use crate::limits::Limits;
use crate::trimmed::decide_list_bounded;

/// A graph with one color list per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListInstance {
    pub g: Graph,
    pub lists: ListAssignment,
}

impl ListInstance {
    pub fn new(g: Graph, lists: ListAssignment) -> Result<Self> {
        if lists.vertex_count() != g.n() {
            return Err(Error::contract(format!(
                "{} lists for {} vertices",
                lists.vertex_count(),
                g.n()
            )));
        }
        Ok(ListInstance { g, lists })
    }

    /// Proper on every edge with `c(v) ∈ C_v` for all `v`.
    pub fn accepts(&self, c: &PartialColoring) -> bool {
        c.is_total()
            && c.vertex_count() == self.g.n()
            && c.is_proper(&self.g)
            && (0..self.g.n()).all(|v| c.get(v).is_some_and(|x| self.lists.allows(v, x)))
    }
}

pub trait ListSolver: Sync {
    fn solve(&self, inst: &ListInstance) -> Result<Option<PartialColoring>>;
}

/// Backtracking, most-constrained vertex first, lowest color first.
#[derive(Debug, Clone, Copy, Default)]
pub struct Backtracking;

impl ListSolver for Backtracking {
    fn solve(&self, inst: &ListInstance) -> Result<Option<PartialColoring>> {
        solve_list_backtracking(inst)
    }
}

fn available<'a>(inst: &'a ListInstance, c: &PartialColoring, v: usize) -> impl Iterator<Item = u32> + 'a {
    let taken = c.colors_on(inst.g.neighbors(v));
    inst.lists
        .list(v)
        .iter()
        .copied()
        .filter(move |x| taken.binary_search(x).is_err())
}

fn backtrack(inst: &ListInstance, c: &mut PartialColoring, remaining: usize) -> bool {
    if remaining == 0 {
        return true;
    }
    let mut best: Option<(usize, Vec<u32>)> = None;
    for v in (0..inst.g.n()).filter(|&v| c.get(v).is_none()) {
        let options: Vec<u32> = available(inst, c, v).collect();
        if best.as_ref().is_none_or(|(_, b)| options.len() < b.len()) {
            let empty = options.is_empty();
            best = Some((v, options));
            if empty {
                return false;
            }
        }
    }
    let (v, options) = best.expect("an uncolored vertex remains");
    for x in options {
        c.set(v, x);
        if backtrack(inst, c, remaining - 1) {
            return true;
        }
    }
    c.unset(v);
    false
}

/// A coloring from the lists, or `None` when none exists.
pub fn solve_list_backtracking(inst: &ListInstance) -> Result<Option<PartialColoring>> {
    let mut c = PartialColoring::new(inst.g.n());
    if !backtrack(inst, &mut c, inst.g.n()) {
        return Ok(None);
    }
    if !inst.accepts(&c) {
        return Err(Error::InternalContradiction("backtracking returned an invalid list coloring".into()));
    }
    Ok(Some(c))
}

/// Verdict through the augmented graph and the trimmed extension count.
pub fn solve_list_via_augmentation(inst: &ListInstance, k: usize, delta: usize, limits: &Limits) -> Result<bool> {
    decide_list_bounded(&inst.g, &inst.lists, k, delta, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_list_colorable, OracleBudget};
    use proptest::prelude::*;

    fn instance(g: Graph, lists: Vec<Vec<u32>>) -> ListInstance {
        ListInstance::new(g, ListAssignment::from_lists(lists)).unwrap()
    }

    #[test]
    fn trivial_examples() {
        let single = instance(Graph::empty(1), vec![vec![7]]);
        let c = solve_list_backtracking(&single).unwrap().unwrap();
        assert_eq!(c.get(0), Some(7));
        let edge = instance(Graph::path(2), vec![vec![0], vec![0]]);
        assert!(solve_list_backtracking(&edge).unwrap().is_none());
    }

    #[test]
    fn augmentation_examples() {
        let l = Limits::default();
        let tri = instance(Graph::complete(3), vec![vec![0, 1]; 3]);
        assert!(!solve_list_via_augmentation(&tri, 2, 2, &l).unwrap());
        let tri = instance(Graph::complete(3), vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(solve_list_via_augmentation(&tri, 2, 2, &l).unwrap());
        let side = vec![vec![0, 1], vec![0, 2], vec![1, 2]];
        let k33 = instance(Graph::complete_bipartite(3, 3), [side.clone(), side].concat());
        assert!(!solve_list_via_augmentation(&k33, 2, 3, &l).unwrap());
        assert!(solve_list_backtracking(&k33).unwrap().is_none());
    }

    #[test]
    fn mismatched_lists_rejected() {
        assert!(ListInstance::new(Graph::path(3), ListAssignment::from_lists(vec![vec![0]])).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = ListInstance> {
        (1usize..=10).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                proptest::collection::vec(proptest::bool::weighted(0.35), pairs),
                proptest::collection::vec(proptest::collection::vec(0u32..6, 1..=4), n),
            )
                .prop_map(move |(bits, lists)| {
                    let edges: Vec<(usize, usize)> = (0..n)
                        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                        .zip(bits)
                        .filter_map(|(e, b)| b.then_some(e))
                        .collect();
                    let g = Graph::from_edges(n, &edges).unwrap();
                    ListInstance::new(g, ListAssignment::new(6, lists).unwrap()).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]
        #[test]
        fn backtracking_matches_product_enumeration(inst in arb_instance()) {
            let expected = brute_list_colorable(&inst.g, &inst.lists, &OracleBudget::default()).unwrap();
            let got = solve_list_backtracking(&inst).unwrap();
            prop_assert_eq!(got.is_some(), expected);
            if let Some(c) = got {
                prop_assert!(inst.accepts(&c));
            }
        }
    }
}
