//! Graph representation, text formats and structural subroutines.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Largest vertex count representable by a [`VertexSet`].
pub const MAX_VERTICES: usize = 128;

/// A set of vertex indices stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u128) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex count {n} exceeds {MAX_VERTICES}");
        if n == MAX_VERTICES {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u128 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[must_use]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u128 << v)
    }

    #[must_use]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u128 << v))
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u128 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u128 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;

    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone)]
pub struct VertexIter(u128);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: Self) -> Self {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

/// An immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex count {n} exceeds {MAX_VERTICES}");
        Graph {
            adjacency: vec![VertexSet::EMPTY; n],
            labels: None,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::contract(format!(
                "{n} vertices exceed the supported maximum of {MAX_VERTICES}"
            )));
        }
        let mut adjacency = vec![VertexSet::EMPTY; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::contract(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::contract(format!("self-loop at vertex {u}")));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(Graph {
            adjacency,
            labels: None,
        })
    }

    /// Builds a graph from adjacency rows, checking symmetry and irreflexivity.
    pub fn from_adjacency(rows: Vec<VertexSet>) -> Result<Self> {
        let n = rows.len();
        if n > MAX_VERTICES {
            return Err(Error::contract(format!("{n} vertices exceed {MAX_VERTICES}")));
        }
        let all = VertexSet::full(n);
        for (v, row) in rows.iter().enumerate() {
            if !row.is_subset(all) {
                return Err(Error::contract(format!("row {v} references a vertex >= {n}")));
            }
            if row.contains(v) {
                return Err(Error::contract(format!("self-loop at vertex {v}")));
            }
            for u in row.iter() {
                if !rows[u].contains(v) {
                    return Err(Error::contract(format!("adjacency not symmetric at ({v},{u})")));
                }
            }
        }
        Ok(Graph {
            adjacency: rows,
            labels: None,
        })
    }

    pub fn complete(n: usize) -> Self {
        let all = VertexSet::full(n);
        Graph {
            adjacency: (0..n).map(|v| all.without(v)).collect(),
            labels: None,
        }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("valid star")
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::with_capacity(a * b);
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("valid complete bipartite graph")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).expect("valid Petersen graph")
    }

    /// Attaches labels used when emitting DIMACS.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::contract("label count must equal vertex count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adjacency[v]
    }

    pub fn closed_neighbors(&self, v: usize) -> VertexSet {
        self.adjacency[v].with(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, row)| {
            row.iter().filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Union of the neighborhoods of `set`.
    pub fn neighborhood_of(&self, set: VertexSet) -> VertexSet {
        set.iter().fold(VertexSet::EMPTY, |acc, v| acc | self.adjacency[v])
    }

    pub fn is_independent(&self, set: VertexSet) -> bool {
        set.iter().all(|v| !self.adjacency[v].intersects(set))
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(|r| r.len()).min().unwrap_or(0)
    }

    /// Vertices of degree at most `max_degree`.
    pub fn low_degree_vertices(&self, max_degree: usize) -> VertexSet {
        (0..self.n()).filter(|&v| self.degree(v) <= max_degree).collect()
    }

    /// A copy with the extra edge `{u, v}`.
    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        assert!(u != v && u < self.n() && v < self.n());
        let mut g = self.clone();
        g.adjacency[u].insert(v);
        g.adjacency[v].insert(u);
        g
    }

    /// Induced subgraph on `set`, with `map[i]` the original index of new vertex `i`.
    pub fn induced(&self, set: VertexSet) -> (Graph, Vec<usize>) {
        let map = set.to_vec();
        let mut position = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            position[v] = i;
        }
        let adjacency = map
            .iter()
            .map(|&v| (self.adjacency[v] & set).iter().map(|u| position[u]).collect())
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| map.iter().map(|&v| l[v].clone()).collect());
        (Graph { adjacency, labels }, map)
    }

    /// Disjoint union, `other`'s vertices shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let shift = self.n();
        let mut edges: Vec<_> = self.edges().collect();
        edges.extend(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(shift + other.n(), &edges)
    }
}

/// Parses DIMACS `.col` text (`p edge n m`, `e u v` with 1-based ids).
///
/// Comment lines start with `c`; a comment of the form `c label <v> <name>`
/// restores a vertex label written by [`to_dimacs`].
pub fn load_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut labels: Vec<(usize, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap_or_default();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        match tag {
            "c" => {
                if parts.next() == Some("label") {
                    let v: usize = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| parse_err("malformed label comment".into()))?;
                    let name = parts.collect::<Vec<_>>().join(" ");
                    labels.push((v, name));
                }
            }
            "p" => {
                if n.is_some() {
                    return Err(parse_err("duplicate problem line".into()));
                }
                let format = parts.next();
                if !matches!(format, Some("edge") | Some("col")) {
                    return Err(parse_err(format!("expected 'p edge n m', found '{line}'")));
                }
                let count: usize = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err("missing or invalid vertex count".into()))?;
                parts
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| parse_err("missing or invalid edge count".into()))?;
                if count > MAX_VERTICES {
                    return Err(parse_err(format!(
                        "{count} vertices exceed the supported maximum of {MAX_VERTICES}"
                    )));
                }
                n = Some(count);
            }
            "e" => {
                let count = n.ok_or_else(|| parse_err("edge line before problem line".into()))?;
                let mut endpoint = || -> Result<usize> {
                    let tok = parts
                        .next()
                        .ok_or_else(|| parse_err("edge line needs two endpoints".into()))?;
                    let id: usize = tok
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex id '{tok}'")))?;
                    if id == 0 || id > count {
                        return Err(parse_err(format!("vertex {id} out of range 1..={count}")));
                    }
                    Ok(id - 1)
                };
                let u = endpoint()?;
                let v = endpoint()?;
                if u == v {
                    return Err(parse_err(format!("self-loop at vertex {}", u + 1)));
                }
                edges.push((u, v));
            }
            other => return Err(parse_err(format!("unknown line type '{other}'"))),
        }
    }
    let n = n.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing problem line".into(),
    })?;
    let mut g = Graph::from_edges(n, &edges)?;
    if !labels.is_empty() {
        let mut names: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
        for (v, name) in labels {
            if v == 0 || v > n {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("label for vertex {v} out of range"),
                });
            }
            names[v - 1] = name;
        }
        g.labels = Some(names);
    }
    Ok(g)
}

/// Emits DIMACS `.col` text; edges appear once, in lexicographic order.
pub fn to_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    if let Some(labels) = &g.labels {
        for (v, name) in labels.iter().enumerate() {
            out.push_str(&format!("c label {} {}\n", v + 1, name));
        }
    }
    out.push_str(&format!("p edge {} {}\n", g.n(), g.edge_count()));
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// A coloring defined on a subset of the vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialColoring {
    colors: Vec<Option<u32>>,
}

impl fmt::Debug for PartialColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.colors.iter().enumerate().filter_map(|(v, c)| c.map(|c| (v, c))))
            .finish()
    }
}

impl PartialColoring {
    /// Empty coloring over a graph with `n` vertices.
    pub fn new(n: usize) -> Self {
        PartialColoring {
            colors: vec![None; n],
        }
    }

    /// A total coloring from a color per vertex.
    pub fn from_colors(colors: &[u32]) -> Self {
        PartialColoring {
            colors: colors.iter().map(|&c| Some(c)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, v: usize) -> Option<u32> {
        self.colors.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: usize, color: u32) {
        self.colors[v] = Some(color);
    }

    pub fn unset(&mut self, v: usize) {
        self.colors[v] = None;
    }

    pub fn domain(&self) -> VertexSet {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|_| v))
            .collect()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    /// The colors as a dense vector; `None` unless total.
    pub fn to_vec(&self) -> Option<Vec<u32>> {
        self.colors.iter().copied().collect()
    }

    /// True when no edge inside the domain is monochromatic.
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colors.len() == g.n()
            && g.edges().all(|(u, v)| match (self.colors[u], self.colors[v]) {
                (Some(a), Some(b)) => a != b,
                _ => true,
            })
    }

    /// Total, proper and using colors `< k` only.
    pub fn is_proper_k_coloring(&self, g: &Graph, k: usize) -> bool {
        self.is_total()
            && self.is_proper(g)
            && self.colors.iter().all(|c| c.is_some_and(|c| (c as usize) < k))
    }

    /// Colors appearing on `set`.
    pub fn colors_on(&self, set: VertexSet) -> Vec<u32> {
        let mut seen: Vec<u32> = set.iter().filter_map(|v| self.get(v)).collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    }
}

/// A color list per vertex over a universe `0..universe_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    universe_size: u32,
    lists: Vec<Vec<u32>>,
}

impl ListAssignment {
    /// Lists are sorted and deduplicated; every id must be `< universe_size`.
    pub fn new(universe_size: u32, lists: Vec<Vec<u32>>) -> Result<Self> {
        let mut lists = lists;
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&c) = list.iter().find(|&&c| c >= universe_size) {
                return Err(Error::contract(format!(
                    "color {c} of vertex {v} outside universe of size {universe_size}"
                )));
            }
        }
        Ok(ListAssignment {
            universe_size,
            lists,
        })
    }

    /// Universe inferred as `max id + 1`.
    pub fn from_lists(lists: Vec<Vec<u32>>) -> Self {
        let universe = lists.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
        ListAssignment::new(universe, lists).expect("inferred universe covers every id")
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    pub fn list(&self, v: usize) -> &[u32] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<u32>] {
        &self.lists
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    pub fn max_list_size(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn allows(&self, v: usize, color: u32) -> bool {
        self.lists[v].binary_search(&color).is_ok()
    }
}

/// Parses a lists file: one line `v: c1 c2 ...` per vertex, 0-based.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_lists(text: &str, n: usize) -> Result<ListAssignment> {
    let mut lists: Vec<Option<Vec<u32>>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (head, tail) = line
            .split_once(':')
            .ok_or_else(|| parse_err("expected 'v: c1 c2 ...'".into()))?;
        let v: usize = head
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("invalid vertex '{}'", head.trim())))?;
        if v >= n {
            return Err(parse_err(format!("vertex {v} out of range for n={n}")));
        }
        if lists[v].is_some() {
            return Err(parse_err(format!("duplicate list for vertex {v}")));
        }
        let colors = tail
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| parse_err(format!("invalid color '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        lists[v] = Some(colors);
    }
    let lists = lists
        .into_iter()
        .enumerate()
        .map(|(v, l)| {
            l.ok_or(Error::Parse {
                line: 0,
                message: format!("no list given for vertex {v}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ListAssignment::from_lists(lists))
}

/// Emits the lists file format read by [`parse_lists`].
pub fn format_lists(lists: &ListAssignment) -> String {
    let mut out = String::new();
    for (v, list) in lists.lists().iter().enumerate() {
        out.push_str(&format!("{v}:"));
        for c in list {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    out
}

/// Greedy set of low-degree vertices with pairwise distance at least three.
///
/// Candidates are scanned in ascending order; taking `v` discards its whole
/// 2-neighborhood. When every vertex has degree `<= max_degree` the result has
/// at least `n / (1 + max_degree^2)` members.
pub fn greedy_distance3_set(g: &Graph, max_degree: usize) -> VertexSet {
    let mut available = g.low_degree_vertices(max_degree);
    let mut chosen = VertexSet::EMPTY;
    while let Some(v) = available.first() {
        chosen.insert(v);
        let ball = g.closed_neighbors(v) | g.neighborhood_of(g.neighbors(v));
        available = available - ball;
    }
    chosen
}

/// Greedy independent set among the vertices of degree `<= max_degree`.
///
/// Its size is at least `|{v : deg(v) <= max_degree}| / (1 + max_degree)`.
pub fn greedy_independent_low_degree(g: &Graph, max_degree: usize) -> VertexSet {
    let mut available = g.low_degree_vertices(max_degree);
    let mut chosen = VertexSet::EMPTY;
    while let Some(v) = available.first() {
        chosen.insert(v);
        available = available - g.closed_neighbors(v);
    }
    chosen
}

/// Whether at least `alpha * n` vertices have degree `<= max_degree`,
/// compared exactly.
pub fn is_alpha_delta_bounded(g: &Graph, alpha: &BigRational, max_degree: usize) -> bool {
    let low = g.low_degree_vertices(max_degree).len();
    BigRational::from_integer(BigInt::from(low)) >= alpha * BigInt::from(g.n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn bfs_distance(g: &Graph, a: usize, b: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; g.n()];
        let mut queue = std::collections::VecDeque::from([a]);
        dist[a] = 0;
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        (dist[b] != usize::MAX).then_some(dist[b])
    }

    #[test]
    fn dimacs_path() {
        let g = load_dimacs("p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!((0..3).map(|v| g.degree(v)).collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn dimacs_edgeless_and_comments() {
        let g = load_dimacs("c hello\np edge 2 0\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dimacs_duplicates_collapse() {
        let g = load_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn dimacs_errors_name_line() {
        match load_dimacs("p edge 2 1\ne 1 1\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected self-loop error on line 2, got {other:?}"),
        }
        assert!(matches!(
            load_dimacs("p edge 2 1\ne 1 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(load_dimacs("p graph x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_dimacs("e 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(load_dimacs("").is_err());
    }

    #[test]
    fn dimacs_labels_round_trip() {
        let g = Graph::path(3)
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let back = load_dimacs(&to_dimacs(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn distance3_on_c6() {
        let s = greedy_distance3_set(&Graph::cycle(6), 2);
        assert_eq!(s.to_vec(), vec![0, 3]);
    }

    #[test]
    fn distance3_edgeless() {
        assert_eq!(greedy_distance3_set(&Graph::empty(5), 0).len(), 5);
    }

    #[test]
    fn distance3_star_keeps_one_leaf() {
        let g = Graph::star(4);
        let s = greedy_distance3_set(&g, 1);
        assert_eq!(s.len(), 1);
        let leaf = s.first().unwrap();
        assert!(leaf >= 1);
        // every pair of leaves is at distance exactly two
        assert_eq!(bfs_distance(&g, 1, 2), Some(2));
    }

    #[test]
    fn independent_low_degree_examples() {
        let s = greedy_independent_low_degree(&Graph::path(4), 2);
        assert!(s.len() >= 2);
        assert!(Graph::path(4).is_independent(s));
        assert!(greedy_independent_low_degree(&Graph::complete(5), 1).is_empty());
        assert_eq!(greedy_independent_low_degree(&Graph::empty(6), 0).len(), 6);
    }

    #[test]
    fn alpha_delta_examples() {
        assert!(is_alpha_delta_bounded(&Graph::complete(4), &ratio(1, 2), 3));
        assert!(!is_alpha_delta_bounded(&Graph::complete(4), &ratio(1, 4), 2));
        assert!(is_alpha_delta_bounded(&Graph::star(9), &ratio(9, 10), 1));
        // boundary: exactly alpha * n
        assert!(is_alpha_delta_bounded(&Graph::star(3), &ratio(3, 4), 1));
        assert!(!is_alpha_delta_bounded(&Graph::star(3), &ratio(76, 100), 1));
    }

    #[test]
    fn lists_parse_and_format() {
        let lists = parse_lists("0: 1 2\n1: 0\n# note\n2: 3 1\n", 3).unwrap();
        assert_eq!(lists.universe_size(), 4);
        assert_eq!(lists.list(2), &[1, 3]);
        let again = parse_lists(&format_lists(&lists), 3).unwrap();
        assert_eq!(again, lists);
        assert!(parse_lists("0: 1\n", 2).is_err());
        assert!(matches!(parse_lists("0 1\n", 1), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn petersen_is_cubic() {
        let g = Graph::petersen();
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn induced_subgraph_maps_vertices() {
        let g = Graph::cycle(5);
        let (h, map) = g.induced(VertexSet::from_iter([0, 1, 3]));
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }
}
