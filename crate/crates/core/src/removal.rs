//! Removal lemma for families of small sets.
//!
//! Given sets of size at most `Δ` and a trade-off constant `C > 0`,
//! [`removal_lemma`] returns a sub-family `F'` and an element set `U'` such
//! that the members of `F'` are pairwise disjoint outside `U'` and
//! `|F'| > ρ |F| + C |U'|` with `ρ` a rational strictly below
//! `1 / (Δ e^(1 + C Δ²))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exp_enclosure, floor_exp, int, pow, ratio};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe_size: u32,
    members: Vec<Vec<u32>>,
    delta: usize,
}

impl SetFamily {
    /// Members are sorted and deduplicated; each must lie in the universe
    /// and have at most `delta` elements.
    pub fn new(universe_size: u32, members: Vec<Vec<u32>>, delta: usize) -> Result<Self> {
        let mut members = members;
        for (i, m) in members.iter_mut().enumerate() {
            m.sort_unstable();
            m.dedup();
            if let Some(&e) = m.iter().find(|&&e| e >= universe_size) {
                return Err(Error::contract(format!(
                    "element {e} of set {i} outside universe of size {universe_size}"
                )));
            }
            if m.len() > delta {
                return Err(Error::contract(format!(
                    "set {i} has {} elements, more than delta = {delta}",
                    m.len()
                )));
            }
        }
        let family = SetFamily {
            universe_size,
            members,
            delta,
        };
        debug_assert!(family.degree_sum_within_bound());
        Ok(family)
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of members containing each element.
    pub fn element_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.universe_size as usize];
        for m in &self.members {
            for &e in m {
                deg[e as usize] += 1;
            }
        }
        deg
    }

    /// `hist[d]` = number of elements of degree `d`.
    pub fn degree_histogram(&self) -> Vec<usize> {
        let deg = self.element_degrees();
        let mut hist = vec![0usize; deg.iter().copied().max().unwrap_or(0) + 1];
        for d in deg {
            hist[d] += 1;
        }
        hist
    }

    /// `sum_d d * hist[d] <= Δ |F|`.
    pub fn degree_sum_within_bound(&self) -> bool {
        let sum: usize = self
            .degree_histogram()
            .iter()
            .enumerate()
            .map(|(d, &count)| d * count)
            .sum();
        sum <= self.delta * self.members.len()
    }
}

/// Greedy pairwise-disjoint sub-family, scanning members in index order.
pub fn greedy_disjoint(f: &SetFamily) -> Vec<usize> {
    let mut used = vec![false; f.universe_size as usize];
    greedy_restricted(f, &vec![false; f.universe_size as usize], &mut used)
}

/// Greedy over members restricted to elements outside `removed`.
fn greedy_restricted(f: &SetFamily, removed: &[bool], used: &mut [bool]) -> Vec<usize> {
    let mut kept = Vec::new();
    for (i, m) in f.members.iter().enumerate() {
        if m.iter().all(|&e| removed[e as usize] || !used[e as usize]) {
            for &e in m {
                used[e as usize] = true;
            }
            kept.push(i);
        }
    }
    kept
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovalResult {
    /// Indices into the family's members.
    pub kept: Vec<usize>,
    pub removed_universe: Vec<u32>,
    /// Rational strictly below `1 / (Δ e^(1 + C Δ²))`; zero once the true
    /// value is too small to be worth representing.
    #[serde(serialize_with = "serialize_rational")]
    pub rho_bound: BigRational,
    pub threshold_used: u64,
    /// Thresholds covered: `min(D, max element degree)`.
    pub thresholds_scanned: u64,
    /// Distinct removal sets actually evaluated.
    pub thresholds_evaluated: u64,
    /// `floor(e^(1 + C Δ²))`, saturated at `u64::MAX`.
    pub threshold_limit: u64,
}

pub(crate) fn serialize_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Exponents above this report `rho_bound = 0`.
const RHO_EXPONENT_CAP: i64 = 4096;

/// `D = floor(e^(1 + C Δ²))`, saturated at `u64::MAX`.
pub fn threshold_limit(c: &BigRational, delta: usize) -> u64 {
    let x = exponent(c, delta);
    floor_exp(&x).unwrap_or(u64::MAX)
}

fn exponent(c: &BigRational, delta: usize) -> BigRational {
    BigRational::one() + c * int(delta * delta)
}

/// A rational strictly below `1 / (Δ e^(1 + C Δ²))`.
pub fn rho_lower_bound(c: &BigRational, delta: usize) -> BigRational {
    let x = exponent(c, delta);
    let delta = int(delta);
    if x <= int(64) {
        let (_, hi) = exp_enclosure(&x, 64);
        let margin = BigRational::new(BigInt::one(), BigInt::one() << 64);
        return BigRational::one() / (delta * (hi + margin));
    }
    let ceil = x.ceil().to_integer();
    if ceil > BigInt::from(RHO_EXPONENT_CAP) {
        return BigRational::zero();
    }
    // e < 2719/1000, so e^x < (2719/1000)^ceil(x)
    let steps: u64 = ceil.try_into().expect("bounded by the cap");
    BigRational::one() / (delta * pow(&ratio(2719, 1000), steps))
}

/// Selects the best threshold `d` in `1..=min(D, max element degree)`.
///
/// For each `d`, `U'_d` is the set of elements of degree above `d` and the
/// candidate sub-family is the greedy disjoint family of members restricted
/// to the remaining elements. The score `|kept| - C |U'_d|` is maximized,
/// ties going to the smaller `d`. Thresholds at or above the maximum degree
/// all give `U'_d = ∅` and the same greedy family, so the scan stops there;
/// within a run of thresholds with equal `U'_d` only the smallest is
/// evaluated, since the outcome depends on `d` only through `U'_d`.
pub fn removal_lemma(f: &SetFamily, c: &BigRational) -> Result<RemovalResult> {
    if f.is_empty() {
        return Err(Error::contract("removal lemma needs a nonempty family"));
    }
    if f.delta == 0 {
        return Err(Error::contract("removal lemma needs delta >= 1"));
    }
    if !c.is_positive() {
        return Err(Error::contract("removal lemma needs C > 0"));
    }
    let limit = threshold_limit(c, f.delta);
    let degrees = f.element_degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0).max(1) as u64;
    let last = limit.min(max_degree);
    let universe = f.universe_size as usize;

    let mut best: Option<(BigRational, u64, Vec<usize>, Vec<u32>)> = None;
    let mut removed = vec![false; universe];
    let mut used = vec![false; universe];
    let mut candidates: Vec<u64> = degrees.iter().map(|&d| d as u64).filter(|&d| d >= 1 && d <= last).collect();
    candidates.push(1);
    candidates.sort_unstable();
    candidates.dedup();
    for &d in &candidates {
        let mut removed_list = Vec::new();
        for (u, &deg) in degrees.iter().enumerate() {
            removed[u] = deg as u64 > d;
            if removed[u] {
                removed_list.push(u as u32);
            }
        }
        used.iter_mut().for_each(|x| *x = false);
        let kept = greedy_restricted(f, &removed, &mut used);
        let score = int(kept.len()) - c * int(removed_list.len());
        if best.as_ref().is_none_or(|(s, ..)| score > *s) {
            best = Some((score, d, kept, removed_list));
        }
    }
    let (_, threshold_used, kept, removed_universe) = best.expect("at least one threshold");
    let result = RemovalResult {
        kept,
        removed_universe,
        rho_bound: rho_lower_bound(c, f.delta),
        threshold_used,
        thresholds_scanned: last,
        thresholds_evaluated: candidates.len() as u64,
        threshold_limit: limit,
    };
    check_certificate(f, c, &result)?;
    Ok(result)
}

/// Both guarantees: disjointness outside `U'` and the counting inequality.
pub fn check_certificate(f: &SetFamily, c: &BigRational, r: &RemovalResult) -> Result<()> {
    let mut removed = vec![false; f.universe_size as usize];
    for &u in &r.removed_universe {
        removed[u as usize] = true;
    }
    let mut owner = vec![usize::MAX; f.universe_size as usize];
    for &i in &r.kept {
        for &e in &f.members[i] {
            if removed[e as usize] {
                continue;
            }
            if owner[e as usize] != usize::MAX {
                return Err(Error::InternalContradiction(format!(
                    "kept sets {} and {i} share element {e} outside the removed set",
                    owner[e as usize]
                )));
            }
            owner[e as usize] = i;
        }
    }
    let lhs = int(r.kept.len());
    let rhs = &r.rho_bound * int(f.len()) + c * int(r.removed_universe.len());
    if lhs <= rhs {
        return Err(Error::InternalContradiction(format!(
            "certificate fails: {} kept <= {rhs}",
            r.kept.len()
        )));
    }
    Ok(())
}

/// Disjoint copies of a complete `(C+1)`-ary tree of depth `Δ - 1`; every
/// root-to-leaf path is a member, repeated `C + 1` times.
///
/// Nodes of a copy are numbered breadth-first, copies consecutively.
pub fn hard_instance(c: usize, delta: usize, n: usize) -> Result<SetFamily> {
    if c == 0 || delta == 0 || n == 0 {
        return Err(Error::contract("hard instance needs C, delta, n >= 1"));
    }
    let arity = c + 1;
    let nodes: usize = (0..delta).map(|i| arity.pow(i as u32)).sum();
    let leaves = arity.pow(delta as u32 - 1);
    let first_leaf = nodes - leaves;
    let mut members = Vec::with_capacity(n * leaves * arity);
    for copy in 0..n {
        let base = copy * nodes;
        for leaf in 0..leaves {
            let mut path = Vec::with_capacity(delta);
            let mut node = first_leaf + leaf;
            loop {
                path.push((base + node) as u32);
                if node == 0 {
                    break;
                }
                node = (node - 1) / arity;
            }
            path.reverse();
            for _ in 0..arity {
                members.push(path.clone());
            }
        }
    }
    SetFamily::new((n * nodes) as u32, members, delta)
}

/// Reads `universe_size count delta` followed by one set per line; a blank
/// line after the header is an empty set. Lines starting with `#` are skipped.
pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
        .skip_while(|(_, l)| l.is_empty());
    let bad_header = |line| Error::Parse {
        line,
        message: "header must be 'universe_size count delta'".into(),
    };
    let (line, header) = lines.next().ok_or(bad_header(1))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad_header(line))?;
    let [universe, count, delta] = nums[..] else {
        return Err(bad_header(line));
    };
    let mut members = Vec::with_capacity(count);
    let mut last_line = line;
    for (line, text) in lines {
        last_line = line;
        if members.len() == count {
            if text.is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line,
                message: format!("more than the declared {count} sets"),
            });
        }
        let set = text
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid element '{t}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        members.push(set);
    }
    if members.len() < count {
        // trailing empty sets may have no line at all
        members.resize(count, Vec::new());
    }
    let universe = u32::try_from(universe).map_err(|_| bad_header(line))?;
    SetFamily::new(universe, members, delta).map_err(|e| Error::Parse {
        line: last_line,
        message: e.to_string(),
    })
}

pub fn format_family(f: &SetFamily) -> String {
    let mut out = format!("{} {} {}\n", f.universe_size, f.members.len(), f.delta);
    for m in &f.members {
        let line: Vec<String> = m.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::harmonic;
    use crate::oracle::brute_removal_best;

    fn fam(universe: u32, sets: &[&[u32]], delta: usize) -> SetFamily {
        SetFamily::new(universe, sets.iter().map(|s| s.to_vec()).collect(), delta).unwrap()
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_disjoint(&fam(3, &[&[0], &[1], &[2]], 1)), vec![0, 1, 2]);
        let chain = fam(4, &[&[0, 1], &[1, 2], &[2, 3]], 2);
        assert_eq!(greedy_disjoint(&chain), vec![0, 2]);
        let copies = fam(1, &[&[0u32][..]; 5], 1);
        assert_eq!(greedy_disjoint(&copies), vec![0]);
    }

    #[test]
    fn disjoint_family_keeps_everything() {
        let f = fam(6, &[&[0, 1], &[2, 3], &[4, 5]], 2);
        let r = removal_lemma(&f, &int(1)).unwrap();
        assert_eq!(r.kept, vec![0, 1, 2]);
        assert!(r.removed_universe.is_empty());
    }

    #[test]
    fn threshold_count_for_unit_constant() {
        assert_eq!(threshold_limit(&int(1), 2), 148);
    }

    #[test]
    fn sunflower_removes_core() {
        let sets: Vec<Vec<u32>> = (1..=10).map(|i| vec![0, i]).collect();
        let f = SetFamily::new(11, sets.clone(), 2).unwrap();
        let r = removal_lemma(&f, &int(1)).unwrap();
        assert_eq!(r.kept.len(), 10);
        assert_eq!(r.removed_universe, vec![0]);
        assert_eq!(r.threshold_used, 1);
        let best = brute_removal_best(&sets, 11, &int(1)).unwrap();
        assert_eq!(best, int(9));
    }

    #[test]
    fn rho_is_strictly_below() {
        let rho = rho_lower_bound(&int(1), 2);
        let true_value = 1.0 / (2.0 * 5f64.exp());
        let approx = crate::exact::to_f64(&rho);
        assert!((approx - true_value).abs() < true_value * 1e-9);
        let (_, e5_hi) = exp_enclosure(&int(5), 128);
        assert!(rho < BigRational::one() / (int(2) * e5_hi));
        assert!(rho_lower_bound(&int(100), 4) > BigRational::zero());
        assert_eq!(rho_lower_bound(&int(1000), 4), BigRational::zero());
    }

    #[test]
    fn rejects_bad_input() {
        let empty = SetFamily::new(3, vec![], 2).unwrap();
        assert!(removal_lemma(&empty, &int(1)).is_err());
        assert!(SetFamily::new(3, vec![vec![0, 1, 2]], 2).is_err());
        assert!(SetFamily::new(2, vec![vec![2]], 2).is_err());
        let f = fam(2, &[&[0]], 1);
        assert!(removal_lemma(&f, &int(0)).is_err());
    }

    #[test]
    fn hard_instance_shapes() {
        let f = hard_instance(1, 2, 1).unwrap();
        assert_eq!(f.members(), &[vec![0, 1], vec![0, 1], vec![0, 2], vec![0, 2]]);
        assert_eq!(f.universe_size(), 3);
        let g = hard_instance(1, 1, 1).unwrap();
        assert_eq!(g.members(), &[vec![0], vec![0]]);
        let h = hard_instance(2, 2, 2).unwrap();
        assert_eq!(h.len(), 18);
        assert_eq!(h.universe_size(), 8);
        assert!(h.members().iter().all(|m| m.len() == 2));
    }

    #[test]
    fn hard_instance_is_tight_per_copy() {
        let f = hard_instance(1, 2, 1).unwrap();
        assert_eq!(brute_removal_best(f.members(), f.universe_size(), &int(1)).unwrap(), int(1));
    }

    #[test]
    fn harmonic_fact() {
        for m in 1..=3i64 {
            let d = floor_exp(&int(m)).unwrap();
            assert!(harmonic(d) >= int(m));
        }
    }

    #[test]
    fn degree_sum_bound_holds() {
        let f = hard_instance(2, 3, 2).unwrap();
        assert!(f.degree_sum_within_bound());
    }

    #[test]
    fn family_text_round_trip() {
        let f = fam(5, &[&[0, 1], &[], &[3, 4]], 2);
        let text = format_family(&f);
        assert_eq!(parse_family(&text).unwrap(), f);
        assert!(parse_family("3 1\n0\n").is_err());
        assert!(parse_family("3 1 1\n5\n").is_err());
    }
}
