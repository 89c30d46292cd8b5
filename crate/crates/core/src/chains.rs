//! Cups, caps and convex-position subsets.
//!
//! Cup and cap detection are edge-based dynamic programs over the x-order: a
//! chain is a cup iff every consecutive triple turns left, and a cap iff every
//! consecutive triple turns right. The largest convex subset is assembled from
//! a cap and a cup that share both endpoints. Everything here assumes a
//! validated point set with distinct x-coordinates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{in_convex_position, Point, PointSet};
use crate::predicates::OrientTable;

/// Default size limit for exhaustive subset enumeration.
pub const ORACLE_GUARD: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ChainKind {
    Cup,
    Cap,
    /// Fewer than three points: both a cup and a cap.
    Both,
    Neither,
}

impl ChainKind {
    pub fn is_cup(self) -> bool {
        matches!(self, ChainKind::Cup | ChainKind::Both)
    }

    pub fn is_cap(self) -> bool {
        matches!(self, ChainKind::Cap | ChainKind::Both)
    }
}

/// Strictly increasing indices into an x-sorted point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chain {
    pub indices: Vec<usize>,
    pub kind: ChainKind,
}

impl Chain {
    pub fn new(table: &OrientTable, indices: Vec<usize>) -> Self {
        let kind = classify_indices(table, &indices);
        Chain { indices, kind }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.indices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

/// Points in convex position, as sorted indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConvexWitness {
    pub indices: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Cup,
    Cap,
    Convex,
}

/// The turn every consecutive triple of a chain must make.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Turn {
    Left,
    Right,
}

impl Turn {
    #[inline]
    pub(crate) fn holds(self, table: &OrientTable, i: usize, j: usize, k: usize) -> bool {
        match self {
            Turn::Left => table.left(i, j, k),
            Turn::Right => table.right(i, j, k),
        }
    }
}

fn classify_indices(table: &OrientTable, indices: &[usize]) -> ChainKind {
    if indices.len() <= 2 {
        return ChainKind::Both;
    }
    let turns = || indices.windows(3).map(|w| table.sign(w[0], w[1], w[2]));
    if turns().all(|s| s > 0) {
        ChainKind::Cup
    } else if turns().all(|s| s < 0) {
        ChainKind::Cap
    } else {
        ChainKind::Neither
    }
}

/// Classifies the chain at `indices` (strictly increasing) by its slopes.
pub fn classify_chain(set: &PointSet, indices: &[usize]) -> ChainKind {
    classify_indices(&OrientTable::new(set), indices)
}

/// Longest chain with the given turn among `idx` (ascending), ties broken
/// towards the lexicographically smallest index sequence.
pub(crate) fn longest_chain_in(table: &OrientTable, idx: &[usize], turn: Turn) -> Vec<usize> {
    let m = idx.len();
    if m <= 2 {
        return idx.to_vec();
    }
    // best[a * m + b]: longest chain starting with edge a -> b (local indices).
    let mut best = vec![0u32; m * m];
    for a in (0..m).rev() {
        for b in a + 1..m {
            let mut len = 2;
            for c in b + 1..m {
                let cand = best[b * m + c] + 1;
                if cand > len && turn.holds(table, idx[a], idx[b], idx[c]) {
                    len = cand;
                }
            }
            best[a * m + b] = len;
        }
    }
    let target = *best.iter().max().unwrap();
    let (mut a, mut b) = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .find(|&(a, b)| best[a * m + b] == target)
        .unwrap();
    let mut chain = vec![idx[a], idx[b]];
    let mut remaining = target - 2;
    while remaining > 0 {
        let c = (b + 1..m)
            .find(|&c| best[b * m + c] == remaining + 1 && turn.holds(table, idx[a], idx[b], idx[c]))
            .expect("dp table is consistent");
        chain.push(idx[c]);
        a = b;
        b = c;
        remaining -= 1;
    }
    chain
}

/// `ends[a * m + b]` is the longest chain (local indices) ending with edge
/// `a -> b`; every pair is at least 2.
pub(crate) fn chain_ends(table: &OrientTable, idx: &[usize], turn: Turn) -> Vec<u32> {
    let m = idx.len();
    let mut ends = vec![0u32; m * m];
    for b in 0..m {
        for a in 0..b {
            let mut len = 2;
            for h in 0..a {
                let cand = ends[h * m + a] + 1;
                if cand > len && turn.holds(table, idx[h], idx[a], idx[b]) {
                    len = cand;
                }
            }
            ends[a * m + b] = len;
        }
    }
    ends
}

/// `starts[a * m + b]` is the longest chain starting with edge `a -> b`.
pub(crate) fn chain_starts(table: &OrientTable, idx: &[usize], turn: Turn) -> Vec<u32> {
    let m = idx.len();
    let mut starts = vec![0u32; m * m];
    for a in (0..m).rev() {
        for b in a + 1..m {
            let mut len = 2;
            for c in b + 1..m {
                let cand = starts[b * m + c] + 1;
                if cand > len && turn.holds(table, idx[a], idx[b], idx[c]) {
                    len = cand;
                }
            }
            starts[a * m + b] = len;
        }
    }
    starts
}

/// Rebuilds a maximal chain ending with local edge `a -> b` from [`chain_ends`].
pub(crate) fn backtrack_ends(
    table: &OrientTable,
    idx: &[usize],
    ends: &[u32],
    turn: Turn,
    mut a: usize,
    mut b: usize,
) -> Vec<usize> {
    let m = idx.len();
    let mut rev = vec![idx[b], idx[a]];
    let mut len = ends[a * m + b];
    while len > 2 {
        let h = (0..a)
            .find(|&h| ends[h * m + a] == len - 1 && turn.holds(table, idx[h], idx[a], idx[b]))
            .expect("dp table is consistent");
        rev.push(idx[h]);
        b = a;
        a = h;
        len -= 1;
    }
    rev.reverse();
    rev
}

/// Rebuilds a maximal chain starting with local edge `a -> b` from [`chain_starts`].
pub(crate) fn forward_starts(
    table: &OrientTable,
    idx: &[usize],
    starts: &[u32],
    turn: Turn,
    mut a: usize,
    mut b: usize,
) -> Vec<usize> {
    let m = idx.len();
    let mut chain = vec![idx[a], idx[b]];
    let mut len = starts[a * m + b];
    while len > 2 {
        let c = (b + 1..m)
            .find(|&c| starts[b * m + c] == len - 1 && turn.holds(table, idx[a], idx[b], idx[c]))
            .expect("dp table is consistent");
        chain.push(idx[c]);
        a = b;
        b = c;
        len -= 1;
    }
    chain
}

fn all_indices(set: &PointSet) -> Vec<usize> {
    (0..set.len()).collect()
}

pub fn longest_cup(set: &PointSet) -> (usize, Chain) {
    let table = OrientTable::new(set);
    let chain = longest_chain_in(&table, &all_indices(set), Turn::Left);
    (chain.len(), Chain::new(&table, chain))
}

pub fn longest_cap(set: &PointSet) -> (usize, Chain) {
    let table = OrientTable::new(set);
    let chain = longest_chain_in(&table, &all_indices(set), Turn::Right);
    (chain.len(), Chain::new(&table, chain))
}

/// Longest cup restricted to the given ascending indices.
pub fn longest_cup_among(table: &OrientTable, indices: &[usize]) -> Vec<usize> {
    longest_chain_in(table, indices, Turn::Left)
}

/// Longest cap restricted to the given ascending indices.
pub fn longest_cap_among(table: &OrientTable, indices: &[usize]) -> Vec<usize> {
    longest_chain_in(table, indices, Turn::Right)
}

/// Largest subset in convex position among `idx` (ascending indices).
///
/// A set is in convex position iff, sorted by x, it splits into a cap and a
/// cup sharing the leftmost and rightmost points (every interior cap point
/// lies above the chord, every interior cup point below). So the answer is
/// the maximum over endpoint pairs of `cap + cup - 2`.
pub(crate) fn largest_convex_in(table: &OrientTable, idx: &[usize]) -> Vec<usize> {
    let m = idx.len();
    if m <= 2 {
        return idx.to_vec();
    }
    let mut cap = vec![0u32; m * m];
    let mut cup = vec![0u32; m * m];
    let mut best_size = 0u32;
    let mut best: Vec<usize> = Vec::new();
    for a in 0..m {
        fill_from(table, idx, a, Turn::Right, &mut cap);
        fill_from(table, idx, a, Turn::Left, &mut cup);
        for b in a + 1..m {
            let (cap_i, cap_len) = best_end(&cap, m, a, b);
            let (cup_i, cup_len) = best_end(&cup, m, a, b);
            let size = cap_len + cup_len - 2;
            if size > best_size {
                best_size = size;
                let mut pts = backtrack_from(table, idx, &cap, Turn::Right, a, cap_i, b);
                pts.extend(backtrack_from(table, idx, &cup, Turn::Left, a, cup_i, b));
                pts.sort_unstable();
                pts.dedup();
                best = pts;
            }
        }
    }
    best
}

/// Chains anchored at local start `a`: `tab[i * m + j]` is the longest chain
/// beginning at `a` and ending with edge `i -> j`, 0 when none exists.
fn fill_from(table: &OrientTable, idx: &[usize], a: usize, turn: Turn, tab: &mut [u32]) {
    let m = idx.len();
    for i in a..m {
        for j in i + 1..m {
            tab[i * m + j] = if i == a {
                2
            } else {
                let mut best = 0;
                for h in a..i {
                    let prev = tab[h * m + i];
                    if prev > best && turn.holds(table, idx[h], idx[i], idx[j]) {
                        best = prev;
                    }
                }
                if best > 0 {
                    best + 1
                } else {
                    0
                }
            };
        }
    }
}

fn best_end(tab: &[u32], m: usize, a: usize, b: usize) -> (usize, u32) {
    let mut best = (a, tab[a * m + b]);
    for i in a + 1..b {
        if tab[i * m + b] > best.1 {
            best = (i, tab[i * m + b]);
        }
    }
    best
}

fn backtrack_from(
    table: &OrientTable,
    idx: &[usize],
    tab: &[u32],
    turn: Turn,
    a: usize,
    mut i: usize,
    mut j: usize,
) -> Vec<usize> {
    let m = idx.len();
    let mut out = vec![idx[j], idx[i]];
    while i != a {
        let len = tab[i * m + j];
        let h = (a..i)
            .find(|&h| tab[h * m + i] == len - 1 && turn.holds(table, idx[h], idx[i], idx[j]))
            .expect("anchored dp table is consistent");
        out.push(idx[h]);
        j = i;
        i = h;
    }
    out
}

pub fn largest_convex_subset(set: &PointSet) -> (usize, ConvexWitness) {
    let table = OrientTable::new(set);
    let indices = largest_convex_in(&table, &all_indices(set));
    (indices.len(), ConvexWitness { indices })
}

/// Largest convex subset restricted to the given ascending indices.
pub fn largest_convex_among(table: &OrientTable, indices: &[usize]) -> ConvexWitness {
    ConvexWitness { indices: largest_convex_in(table, indices) }
}

/// Exhaustive check: does some `k`-subset form a `k`-cup, `k`-cap or convex
/// `k`-gon? Guarded at [`ORACLE_GUARD`] points.
pub fn brute_force_oracle(set: &PointSet, target: Target, k: usize) -> Result<bool> {
    brute_force_oracle_guarded(set, target, k, ORACLE_GUARD)
}

pub fn brute_force_oracle_guarded(set: &PointSet, target: Target, k: usize, guard: usize) -> Result<bool> {
    if set.len() > guard {
        return Err(Error::SizeGuard { size: set.len(), guard });
    }
    Ok(find_subset(set, target, k).is_some())
}

/// First `k`-subset (in lexicographic order) realizing the target.
fn find_subset(set: &PointSet, target: Target, k: usize) -> Option<Vec<usize>> {
    let n = set.len();
    if k > n {
        return None;
    }
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        if subset_matches(set, target, &comb) {
            return Some(comb);
        }
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if comb[i] < n - k + i {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        comb[i] += 1;
        for j in i + 1..k {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// Checks one subset straight from the definitions: consecutive slopes for
/// cups and caps, hull vertex count for convex position.
fn subset_matches(set: &PointSet, target: Target, comb: &[usize]) -> bool {
    let pts: Vec<&Point> = comb.iter().map(|&i| set.point(i)).collect();
    match target {
        Target::Cup | Target::Cap => {
            if pts.len() <= 2 {
                return true;
            }
            let slopes: Vec<_> = pts.windows(2).map(|w| (&w[1].y - &w[0].y) / (&w[1].x - &w[0].x)).collect();
            slopes.windows(2).all(|s| if target == Target::Cup { s[0] < s[1] } else { s[0] > s[1] })
        }
        Target::Convex => {
            let owned: Vec<Point> = pts.into_iter().cloned().collect();
            in_convex_position(&owned)
        }
    }
}

/// Largest `k` for which [`brute_force_oracle`] holds, with the witness.
pub fn oracle_max(set: &PointSet, target: Target, guard: usize) -> Result<(usize, Vec<usize>)> {
    if set.len() > guard {
        return Err(Error::SizeGuard { size: set.len(), guard });
    }
    for k in (1..=set.len()).rev() {
        if let Some(w) = find_subset(set, target, k) {
            return Ok((k, w));
        }
    }
    Ok((0, Vec::new()))
}

/// A detector result as the CLI reports it.
#[derive(Clone, Debug, Serialize)]
pub struct DetectionReport {
    pub operation: &'static str,
    pub input_size: usize,
    pub length: usize,
    pub witness: Vec<usize>,
    pub coordinates: Vec<Point>,
}

impl DetectionReport {
    pub fn new(set: &PointSet, operation: &'static str, witness: Vec<usize>) -> Self {
        DetectionReport {
            operation,
            input_size: set.len(),
            length: witness.len(),
            coordinates: set.coords(&witness),
            witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let cup = PointSet::from_ints(&[(0, 0), (1, 0), (2, 1)]);
        assert_eq!(classify_chain(&cup, &[0, 1, 2]), ChainKind::Cup);
        let cap = PointSet::from_ints(&[(0, 0), (1, 1), (2, 0)]);
        assert_eq!(classify_chain(&cap, &[0, 1, 2]), ChainKind::Cap);
        let neither = PointSet::from_ints(&[(0, 0), (1, 1), (2, 2), (3, 1)]);
        assert_eq!(classify_chain(&neither, &[0, 1, 2, 3]), ChainKind::Neither);
        assert_eq!(classify_chain(&neither, &[0, 3]), ChainKind::Both);
        assert_eq!(classify_chain(&neither, &[2]), ChainKind::Both);
    }

    #[test]
    fn whole_set_cup_and_cap() {
        let cup = PointSet::from_ints(&[(0, 0), (1, 1), (2, 3), (3, 6), (4, 10)]);
        assert_eq!(longest_cup(&cup).0, 5);
        let cap = PointSet::from_ints(&[(0, 0), (1, 3), (2, 5), (3, 6)]);
        assert_eq!(longest_cap(&cap).0, 4);
        assert_eq!(longest_cap(&cap).1.kind, ChainKind::Cap);
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // Square corners: every 3-subset is a cup or a cap.
        let set = PointSet::from_ints(&[(0, 0), (1, 2), (2, -1), (3, 1)]);
        let (len, chain) = longest_cup(&set);
        let (olen, _) = oracle_max(&set, Target::Cup, 20).unwrap();
        assert_eq!(len, olen);
        let mut smallest = None;
        let table = OrientTable::new(&set);
        let n = set.len();
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if idx.len() == len && classify_indices(&table, &idx).is_cup()
                && smallest.as_ref().is_none_or(|s: &Vec<usize>| idx < *s) {
                    smallest = Some(idx);
                }
        }
        assert_eq!(Some(chain.indices), smallest);
    }

    #[test]
    fn convex_position_basics() {
        let quad = PointSet::from_ints(&[(0, 0), (3, 1), (1, 4), (4, 3)]);
        assert_eq!(largest_convex_subset(&quad).0, 4);
        let tri_plus_center = PointSet::from_ints(&[(0, 0), (6, 1), (2, 5), (3, 2)]);
        assert_eq!(largest_convex_subset(&tri_plus_center).0, 3);
    }

    #[test]
    fn three_points_are_cup_xor_cap() {
        let set = PointSet::from_ints(&[(0, 0), (1, 5), (2, 3)]);
        let cup = brute_force_oracle(&set, Target::Cup, 3).unwrap();
        let cap = brute_force_oracle(&set, Target::Cap, 3).unwrap();
        assert!(cup ^ cap);
    }

    #[test]
    fn oracle_guard() {
        let pts: Vec<(i64, i64)> = (0..25).map(|i| (i, i * i)).collect();
        let set = PointSet::from_ints(&pts);
        assert!(matches!(
            brute_force_oracle(&set, Target::Cup, 3),
            Err(Error::SizeGuard { size: 25, guard: 20 })
        ));
    }

    #[test]
    fn tiny_sets() {
        let empty = PointSet::default();
        assert_eq!(longest_cup(&empty).0, 0);
        assert_eq!(largest_convex_subset(&empty).0, 0);
        let one = PointSet::from_ints(&[(1, 1)]);
        assert_eq!(longest_cap(&one).0, 1);
        assert_eq!(largest_convex_subset(&one).0, 1);
    }
}
