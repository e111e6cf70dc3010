//! Zeta transforms over subset lattices.
//!
//! [`SubsetTable`] is the dense `2^m` table with the in-place Yates sweep.
//! [`ProductLattice`] indexes the restricted lattice of subsets that meet
//! every one of a list of disjoint blocks, and [`trimmed_zeta`] runs the same
//! sweep on that lattice alone, treating every excluded subset as zero.

use std::ops::AddAssign;

use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// Values that can be accumulated by the zeta sweeps.
pub trait ZetaValue: Clone + for<'a> AddAssign<&'a Self> {}

impl<T: Clone + for<'a> AddAssign<&'a T>> ZetaValue for T {}

/// A value for every subset of a ground set of size `m`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTable<T> {
    ground_size: usize,
    values: Vec<T>,
}

impl<T> SubsetTable<T> {
    pub fn from_values(ground_size: usize, values: Vec<T>) -> Result<Self> {
        if ground_size >= usize::BITS as usize || values.len() != 1usize << ground_size {
            return Err(Error::contract(format!(
                "table for ground size {ground_size} needs 2^{ground_size} entries, got {}",
                values.len()
            )));
        }
        Ok(SubsetTable {
            ground_size,
            values,
        })
    }

    pub fn from_fn(ground_size: usize, f: impl FnMut(usize) -> T) -> Self {
        let values = (0..1usize << ground_size).map(f).collect();
        SubsetTable {
            ground_size,
            values,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn get(&self, mask: usize) -> &T {
        &self.values[mask]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// In-place zeta transform: afterwards `t[X] = sum over Y ⊆ X of old t[Y]`.
///
/// One sweep per coordinate adds the `u_i = 0` half-cube into the `u_i = 1`
/// half-cube, for `m * 2^(m-1)` additions.
pub fn fast_zeta_in_place<T: ZetaValue>(t: &mut SubsetTable<T>) {
    let len = t.values.len();
    let mut half = 1;
    while half < len {
        for block in t.values.chunks_exact_mut(2 * half) {
            let (zeros, ones) = block.split_at_mut(half);
            for (z, o) in zeros.iter().zip(ones.iter_mut()) {
                *o += z;
            }
        }
        half *= 2;
    }
}

/// Zeta transform returning a new table.
pub fn fast_zeta<T: ZetaValue>(t: &SubsetTable<T>) -> SubsetTable<T> {
    let mut out = t.clone();
    fast_zeta_in_place(&mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coordinate {
    /// Bit of the free digit.
    Free(u32),
    /// Bit `bit` of block `block`.
    Block { block: usize, bit: u32 },
}

/// Mixed-radix index over `{V' ⊆ ground : V' ∩ b ≠ ∅ for every block b}`.
///
/// Digit order: the free part (ground minus all blocks) occupies the lowest
/// `2^|free|` digit, followed by one digit per block in the given order with
/// radix `2^|b| - 1`; a block digit is the block-local bitmask minus one.
#[derive(Debug, Clone)]
pub struct ProductLattice {
    ground: VertexSet,
    free: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    block_sets: Vec<VertexSet>,
    radices: Vec<u64>,
    strides: Vec<u64>,
    total: u64,
    coordinates: Vec<(usize, Coordinate)>,
}

/// Largest ground set a lattice may be built over.
pub const MAX_LATTICE_GROUND: usize = 62;

impl ProductLattice {
    /// Builds the lattice. Blocks must be pairwise disjoint subsets of
    /// `ground`; an empty block yields an empty lattice.
    pub fn new(ground: VertexSet, blocks: &[VertexSet]) -> Result<Self> {
        if ground.len() > MAX_LATTICE_GROUND {
            return Err(Error::resource(format!(
                "lattice ground of {} vertices exceeds {MAX_LATTICE_GROUND}",
                ground.len()
            )));
        }
        let mut covered = VertexSet::EMPTY;
        for b in blocks {
            if !b.is_subset(ground) {
                return Err(Error::contract(format!("block {b} is not inside the ground set")));
            }
            if b.intersects(covered) {
                return Err(Error::contract(format!("block {b} overlaps an earlier block")));
            }
            covered = covered | *b;
        }
        let free_set = ground - covered;
        let free = free_set.to_vec();
        let mut coordinates: Vec<(usize, Coordinate)> = free
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, Coordinate::Free(i as u32)))
            .collect();
        let mut radices = Vec::with_capacity(blocks.len());
        let mut strides = Vec::with_capacity(blocks.len());
        let mut stride: u64 = 1u64 << free.len();
        let mut block_lists = Vec::with_capacity(blocks.len());
        for (bi, b) in blocks.iter().enumerate() {
            let members = b.to_vec();
            let radix = (1u64 << members.len()) - 1;
            for (bit, &v) in members.iter().enumerate() {
                coordinates.push((
                    v,
                    Coordinate::Block {
                        block: bi,
                        bit: bit as u32,
                    },
                ));
            }
            radices.push(radix);
            strides.push(stride);
            stride *= radix;
            block_lists.push(members);
        }
        coordinates.sort_by_key(|&(v, _)| v);
        Ok(ProductLattice {
            ground,
            free,
            blocks: block_lists,
            block_sets: blocks.to_vec(),
            radices,
            strides,
            total: stride,
            coordinates,
        })
    }

    pub fn ground(&self) -> VertexSet {
        self.ground
    }

    pub fn free_part(&self) -> VertexSet {
        self.free.iter().copied().collect()
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.block_sets
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    /// Number of lattice members: `2^|free| * prod(2^|b| - 1)`.
    pub fn total_size(&self) -> u64 {
        self.total
    }

    pub fn contains(&self, v: VertexSet) -> bool {
        v.is_subset(self.ground) && self.block_sets.iter().all(|b| b.intersects(v))
    }

    /// Rank of `v`, or `None` when `v` misses a block or leaves the ground.
    pub fn index(&self, v: VertexSet) -> Option<u64> {
        if !v.is_subset(self.ground) {
            return None;
        }
        let mut idx = 0u64;
        for (i, &u) in self.free.iter().enumerate() {
            if v.contains(u) {
                idx |= 1 << i;
            }
        }
        for (bi, members) in self.blocks.iter().enumerate() {
            let mut local = 0u64;
            for (bit, &u) in members.iter().enumerate() {
                if v.contains(u) {
                    local |= 1 << bit;
                }
            }
            if local == 0 {
                return None;
            }
            idx += (local - 1) * self.strides[bi];
        }
        Some(idx)
    }

    /// Inverse of [`ProductLattice::index`].
    pub fn unindex(&self, idx: u64) -> VertexSet {
        debug_assert!(idx < self.total);
        let mut set = VertexSet::EMPTY;
        let free_digit = idx & ((1u64 << self.free.len()) - 1);
        for (i, &u) in self.free.iter().enumerate() {
            if free_digit >> i & 1 == 1 {
                set.insert(u);
            }
        }
        for (bi, members) in self.blocks.iter().enumerate() {
            let local = (idx / self.strides[bi]) % self.radices[bi] + 1;
            for (bit, &u) in members.iter().enumerate() {
                if local >> bit & 1 == 1 {
                    set.insert(u);
                }
            }
        }
        set
    }
}

/// Zeta transform restricted to the lattice.
///
/// `out[index(V')]` is the sum of `base(V'')` over lattice members `V'' ⊆ V'`;
/// subsets outside the lattice count as zero and are never materialized. The
/// sweep visits ground vertices in ascending order and skips the update
/// whenever removing the vertex would leave the lattice.
pub fn trimmed_zeta<T: ZetaValue>(l: &ProductLattice, base: impl Fn(VertexSet) -> T) -> Vec<T> {
    let total = l.total as usize;
    let mut f: Vec<T> = (0..l.total).map(|i| base(l.unindex(i))).collect();
    if total == 0 {
        return f;
    }
    let free_mask = (1u64 << l.free.len()) - 1;
    for &(_, coord) in &l.coordinates {
        match coord {
            Coordinate::Free(bit) => {
                let step = 1usize << bit;
                for idx in 0..total {
                    if (idx as u64 & free_mask) >> bit & 1 == 1 {
                        let (lo, hi) = f.split_at_mut(idx);
                        hi[0] += &lo[idx - step];
                    }
                }
            }
            Coordinate::Block { block, bit } => {
                let stride = l.strides[block];
                let radix = l.radices[block];
                let jump = ((1u64 << bit) * stride) as usize;
                for idx in 0..total {
                    let local = (idx as u64 / stride) % radix + 1;
                    if local >> bit & 1 == 1 && local != 1 << bit {
                        let (lo, hi) = f.split_at_mut(idx);
                        hi[0] += &lo[idx - jump];
                    }
                }
            }
        }
    }
    f
}
