//! The upper/lower split and the recursive cup-or-cap search built on it.
//!
//! For a point `s`, every point to its left is scored by the angle between
//! the ray towards it and the upward vertical at `s`; every point to its right
//! by the angle with the downward vertical. `s` is lower (B) when the smallest
//! angle belongs to a left point and upper (A) otherwise.
//!
//! Angles are compared through `sign(d) * d^2 / |v|^2`, where `d` is the dot
//! product of the ray `v` with the reference direction: this is `sign(cos) *
//! cos^2`, strictly decreasing in the angle on `[0, pi]`, and exactly rational.

use num_traits::Signed;
use serde::Serialize;

use crate::bounds;
use crate::chains::{longest_cap_among, longest_cup_among, Chain};
use crate::error::{Error, Result};
use crate::geometry::{format_rational, Point, PointSet, Rational};
use crate::predicates::OrientTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Upper,
    Lower,
}

/// How one point was assigned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideRecord {
    pub index: usize,
    pub side: Side,
    /// The point realizing the smallest angle, if any.
    pub witness: Option<usize>,
    /// `sign(cos) * cos^2` of that angle, as `p/q`.
    pub score: Option<String>,
    /// Set when the best left and best right angles are equal.
    pub tie: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    pub records: Vec<SideRecord>,
}

impl Partition {
    pub fn ties(&self) -> impl Iterator<Item = usize> + '_ {
        self.records.iter().filter(|r| r.tie).map(|r| r.index)
    }

    pub fn side_of(&self, index: usize) -> Option<Side> {
        self.records.iter().find(|r| r.index == index).map(|r| r.side)
    }
}

fn angle_score(from: &Point, to: &Point, upward: bool) -> Rational {
    let vx = &to.x - &from.x;
    let vy = &to.y - &from.y;
    let d = if upward { vy.clone() } else { -vy.clone() };
    let norm = &vx * &vx + &vy * &vy;
    let mag = &d * &d / norm;
    if d.is_negative() {
        -mag
    } else {
        mag
    }
}

pub fn split_upper_lower(set: &PointSet) -> Partition {
    let idx: Vec<usize> = (0..set.len()).collect();
    split_among(set, &idx)
}

/// Splits the sub-collection `idx` (ascending, distinct x) using only its own points.
pub fn split_among(set: &PointSet, idx: &[usize]) -> Partition {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut records = Vec::with_capacity(idx.len());
    for (pos, &s) in idx.iter().enumerate() {
        let here = set.point(s);
        let best_of = |range: &[usize], upward: bool| -> Option<(usize, Rational)> {
            let mut best: Option<(usize, Rational)> = None;
            for &t in range {
                let score = angle_score(here, set.point(t), upward);
                if best.as_ref().is_none_or(|(_, b)| score > *b) {
                    best = Some((t, score));
                }
            }
            best
        };
        let left = best_of(&idx[..pos], true);
        let right = best_of(&idx[pos + 1..], false);
        let (side, witness, tie) = match (&left, &right) {
            (None, None) => (Side::Upper, None, false),
            (None, Some(r)) => (Side::Upper, Some(r.clone()), false),
            (Some(l), None) => (Side::Lower, Some(l.clone()), false),
            (Some(l), Some(r)) => {
                if l.1 > r.1 {
                    (Side::Lower, Some(l.clone()), false)
                } else {
                    (Side::Upper, Some(r.clone()), l.1 == r.1)
                }
            }
        };
        match side {
            Side::Upper => upper.push(s),
            Side::Lower => lower.push(s),
        }
        records.push(SideRecord {
            index: s,
            side,
            witness: witness.as_ref().map(|w| w.0),
            score: witness.as_ref().map(|w| format_rational(&w.1)),
            tie,
        });
    }
    Partition { upper, lower, records }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// A cap inside the upper set with no extension into the lower set.
    CapInUpper,
    /// A cup inside the lower set with no leftward extension into the upper set.
    CupInLower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub chain: Vec<usize>,
}

/// Largest set checked by full cap/cup enumeration.
pub const EXHAUSTIVE_EXTENSION_GUARD: usize = 16;
const ENUMERATE_UP_TO: usize = 12;

/// Checks that every cap (two or more points) in the upper set extends
/// rightwards by a lower point and every cup in the lower set extends
/// leftwards by an upper point.
///
/// Whether a chain extends depends only on its last (resp. first) edge, so
/// above 12 points the check runs over edges, which covers every chain; at or
/// below 12 points every chain is enumerated.
pub fn check_cap_extension(set: &PointSet, partition: &Partition) -> Vec<Violation> {
    let table = OrientTable::new(set);
    if set.len() <= ENUMERATE_UP_TO {
        enumerate_violations(&table, partition)
    } else {
        edge_violations(&table, partition)
    }
}

/// Enumerates every cap in A and every cup in B.
pub fn check_cap_extension_exhaustive(set: &PointSet, partition: &Partition) -> Result<Vec<Violation>> {
    if set.len() > EXHAUSTIVE_EXTENSION_GUARD {
        return Err(Error::SizeGuard { size: set.len(), guard: EXHAUSTIVE_EXTENSION_GUARD });
    }
    Ok(enumerate_violations(&OrientTable::new(set), partition))
}

fn cap_extends(table: &OrientTable, lower: &[usize], chain: &[usize]) -> bool {
    let q = chain[chain.len() - 1];
    lower.iter().any(|&b| {
        b > q && (chain.len() < 2 || table.right(chain[chain.len() - 2], q, b))
    })
}

fn cup_extends(table: &OrientTable, upper: &[usize], chain: &[usize]) -> bool {
    let p = chain[0];
    upper.iter().any(|&a| a < p && (chain.len() < 2 || table.left(a, p, chain[1])))
}

fn edge_violations(table: &OrientTable, part: &Partition) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, &p) in part.upper.iter().enumerate() {
        for &q in &part.upper[i + 1..] {
            if !cap_extends(table, &part.lower, &[p, q]) {
                out.push(Violation { kind: ViolationKind::CapInUpper, chain: vec![p, q] });
            }
        }
    }
    for (i, &p) in part.lower.iter().enumerate() {
        for &q in &part.lower[i + 1..] {
            if !cup_extends(table, &part.upper, &[p, q]) {
                out.push(Violation { kind: ViolationKind::CupInLower, chain: vec![p, q] });
            }
        }
    }
    out
}

fn enumerate_violations(table: &OrientTable, part: &Partition) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..part.upper.len() {
        stack.push(part.upper[start]);
        walk_chains(table, &part.upper, start, &mut stack, false, &mut |chain| {
            if !cap_extends(table, &part.lower, chain) {
                out.push(Violation { kind: ViolationKind::CapInUpper, chain: chain.to_vec() });
            }
        });
        stack.pop();
    }
    for start in 0..part.lower.len() {
        stack.push(part.lower[start]);
        walk_chains(table, &part.lower, start, &mut stack, true, &mut |chain| {
            if !cup_extends(table, &part.upper, chain) {
                out.push(Violation { kind: ViolationKind::CupInLower, chain: chain.to_vec() });
            }
        });
        stack.pop();
    }
    out
}

/// Visits every cup (`left_turns`) or cap extending the chain on `stack`,
/// whose last element sits at position `at` of `pool`.
fn walk_chains(
    table: &OrientTable,
    pool: &[usize],
    at: usize,
    stack: &mut Vec<usize>,
    left_turns: bool,
    visit: &mut dyn FnMut(&[usize]),
) {
    if stack.len() >= 2 {
        visit(stack);
    }
    for next in at + 1..pool.len() {
        let c = pool[next];
        let ok = stack.len() < 2 || {
            let (a, b) = (stack[stack.len() - 2], stack[stack.len() - 1]);
            if left_turns {
                table.left(a, b, c)
            } else {
                table.right(a, b, c)
            }
        };
        if ok {
            stack.push(c);
            walk_chains(table, pool, next, stack, left_turns, visit);
            stack.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundOutcome {
    FoundCup(Chain),
    FoundCap(Chain),
    BelowBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundSearch {
    pub outcome: BoundOutcome,
    pub trace: Vec<String>,
}

/// Runs the recursive cup-or-cap argument: above `C(m+n-4, n-2)` points,
/// split, descend into whichever side is over its own threshold, and extend
/// the structure found there across the split.
pub fn recursive_bound_check(set: &PointSet, n: usize, m: usize) -> Result<BoundSearch> {
    if n < 3 || m < 3 {
        return Err(Error::Domain(format!("recursive_bound_check needs n, m >= 3, got ({n}, {m})")));
    }
    let threshold = bounds::f_cupcap_small(n, m);
    let mut trace = Vec::new();
    if set.len() <= threshold {
        trace.push(format!("|S| = {} <= f({n},{m}) = {threshold}", set.len()));
        return Ok(BoundSearch { outcome: BoundOutcome::BelowBound, trace });
    }
    let table = OrientTable::new(set);
    let idx: Vec<usize> = (0..set.len()).collect();
    let found = descend(set, &table, &idx, n, m, &mut trace).map_err(|msg| {
        Error::ProofGapWitness(format!("{msg}; trace: {}", trace.join(" | ")))
    })?;
    let outcome = match found {
        Found::Cup(c) => BoundOutcome::FoundCup(Chain::new(&table, c)),
        Found::Cap(c) => BoundOutcome::FoundCap(Chain::new(&table, c)),
    };
    Ok(BoundSearch { outcome, trace })
}

enum Found {
    Cup(Vec<usize>),
    Cap(Vec<usize>),
}

fn descend(
    set: &PointSet,
    table: &OrientTable,
    idx: &[usize],
    n: usize,
    m: usize,
    trace: &mut Vec<String>,
) -> std::result::Result<Found, String> {
    if n == 3 || m == 3 {
        let cup = longest_cup_among(table, idx);
        if cup.len() >= n {
            trace.push(format!("base ({n},{m}) on {} points: {n}-cup", idx.len()));
            return Ok(Found::Cup(cup[..n].to_vec()));
        }
        let cap = longest_cap_among(table, idx);
        if cap.len() >= m {
            trace.push(format!("base ({n},{m}) on {} points: {m}-cap", idx.len()));
            return Ok(Found::Cap(cap[..m].to_vec()));
        }
        return Err(format!("base ({n},{m}) on {:?} has neither structure", idx));
    }
    let part = split_among(set, idx);
    let (a, b) = (&part.upper, &part.lower);
    let fa = bounds::f_cupcap_small(n, m - 1);
    let fb = bounds::f_cupcap_small(n - 1, m);
    trace.push(format!("({n},{m}): |A| = {}, |B| = {}", a.len(), b.len()));
    if a.len() > fa {
        match descend(set, table, a, n, m - 1, trace)? {
            Found::Cup(c) => Ok(Found::Cup(c)),
            Found::Cap(c) => {
                let (p, q) = (c[c.len() - 2], c[c.len() - 1]);
                let ext = b
                    .iter()
                    .copied()
                    .find(|&t| t > q && table.right(p, q, t))
                    .ok_or_else(|| format!("cap {c:?} in A has no extension into B"))?;
                trace.push(format!("extended {}-cap by {ext}", c.len()));
                let mut c = c;
                c.push(ext);
                Ok(Found::Cap(c))
            }
        }
    } else if b.len() > fb {
        match descend(set, table, b, n - 1, m, trace)? {
            Found::Cap(c) => Ok(Found::Cap(c)),
            Found::Cup(c) => {
                let (p, q) = (c[0], c[1]);
                let ext = a
                    .iter()
                    .copied()
                    .rev()
                    .find(|&t| t < p && table.left(t, p, q))
                    .ok_or_else(|| format!("cup {c:?} in B has no extension into A"))?;
                trace.push(format!("extended {}-cup by {ext}", c.len()));
                let mut out = vec![ext];
                out.extend(c);
                Ok(Found::Cup(out))
            }
        }
    } else {
        Err(format!(
            "pigeonhole failed: |A| = {} <= {fa} and |B| = {} <= {fb}",
            a.len(),
            b.len()
        ))
    }
}

/// Serializable angle comparison used in reports: the raw score for a pair.
pub fn score_between(set: &PointSet, s: usize, t: usize) -> Option<String> {
    if s == t || set.point(s).x == set.point(t).x {
        return None;
    }
    let upward = t < s;
    let score = angle_score(set.point(s), set.point(t), upward);
    Some(format_rational(&score))
}
