//! Good points: the constructive finder, property R, an adversarial
//! falsifier for certificates, and the three-outcome analysis.
//!
//! Goodness quantifies over every adjoined set, so it cannot be verified
//! outright. The finder follows the constructive descent and re-validates
//! what it returns; [`certify_adversarially`] then samples adjoined sets
//! biased towards degenerate placements and classifies what each one forces.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds;
use crate::chains::{
    backtrack_ends, chain_ends, chain_starts, forward_starts, largest_convex_in, longest_chain_in, Chain,
    ConvexWitness, Turn,
};
use crate::error::{Error, Result};
use crate::geometry::{orientation, validate, Orientation, Point, PointSet, Rational};
use crate::partition::split_among;
use crate::predicates::OrientTable;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodPointCertificate {
    pub s: usize,
    pub m: usize,
    pub l: usize,
    /// Parameters `(m', 4)` of the base case the descent ended in; the cup
    /// witness has `m' - 1` points.
    pub base_m: usize,
    /// Cup with `s` second from the right.
    pub cup_witness: Chain,
    /// A point right of the cup, strictly below the line through its last edge.
    pub r_witness: usize,
    /// An `(l-1)`-cap whose leftmost point is `s`.
    pub property_r_witness: Chain,
    pub trace: Vec<String>,
}

impl GoodPointCertificate {
    /// The rightmost cup vertex, `v1` in the case analysis.
    pub fn v1(&self) -> usize {
        *self.cup_witness.indices.last().expect("certificate cup is non-empty")
    }
}

fn describe(set: &PointSet, indices: &[usize]) -> String {
    let pts: Vec<String> = indices.iter().map(|&i| set.point(i).to_string()).collect();
    pts.join(" ")
}

fn check_free(set: &PointSet, table: &OrientTable, m: usize, l: usize) -> Result<()> {
    let all: Vec<usize> = (0..set.len()).collect();
    let cup = longest_chain_in(table, &all, Turn::Left);
    if cup.len() >= m {
        return Err(Error::FreenessViolated {
            m,
            l,
            witness: format!("{m}-cup {}", describe(set, &cup[..m])),
        });
    }
    let cap = longest_chain_in(table, &all, Turn::Right);
    if cap.len() >= l {
        return Err(Error::FreenessViolated {
            m,
            l,
            witness: format!("{l}-cap {}", describe(set, &cap[..l])),
        });
    }
    Ok(())
}

/// Whether `s` is the left endpoint of an `(l-1)`-cap, with such a cap.
pub fn has_property_r(set: &PointSet, s: usize, l: usize) -> (bool, Option<Chain>) {
    let table = OrientTable::new(set);
    match property_r_cap(&table, s, l) {
        Some(cap) => (true, Some(Chain::new(&table, cap))),
        None => (false, None),
    }
}

fn property_r_cap(table: &OrientTable, s: usize, l: usize) -> Option<Vec<usize>> {
    let n = table.len();
    let want = l.saturating_sub(1).max(1);
    if want == 1 {
        return Some(vec![s]);
    }
    let idx: Vec<usize> = (s..n).collect();
    let starts = chain_starts(table, &idx, Turn::Right);
    let k = idx.len();
    (1..k).find(|&b| starts[b] as usize >= want).map(|b| {
        let mut cap = forward_starts(table, &idx, &starts, Turn::Right, 0, b);
        cap.truncate(want);
        cap
    })
}

/// A point of the set right of `q` and strictly below the line `pq`.
fn below_extension(table: &OrientTable, p: usize, q: usize) -> Option<usize> {
    (q + 1..table.len()).find(|&r| table.right(p, q, r))
}

struct RCup {
    cup: Vec<usize>,
    r: usize,
}

/// An `(k-1)`-cup among `idx` with property R, by direct search over the
/// last edge.
fn r_cup_exact(table: &OrientTable, idx: &[usize], k: usize) -> Option<RCup> {
    let m = idx.len();
    let ends = chain_ends(table, idx, Turn::Left);
    for b in 0..m {
        for a in 0..b {
            if (ends[a * m + b] as usize) < k - 1 {
                continue;
            }
            if let Some(r) = below_extension(table, idx[a], idx[b]) {
                let chain = backtrack_ends(table, idx, &ends, Turn::Left, a, b);
                let cup = chain[chain.len() - (k - 1)..].to_vec();
                return Some(RCup { cup, r });
            }
        }
    }
    None
}

fn fallback(table: &OrientTable, idx: &[usize], k: usize, why: &str, trace: &mut Vec<String>) -> std::result::Result<RCup, String> {
    trace.push(format!("k={k}: {why}; direct search over {} points", idx.len()));
    r_cup_exact(table, idx, k).ok_or_else(|| format!("k={k}: no {}-cup with property R among {:?}", k - 1, idx))
}

/// Finds a `(k-1)`-cup with property R among `idx`, which holds more than
/// `C(k-1, 2) + 1` points of a set with no 4-cap.
fn r_cup(set: &PointSet, table: &OrientTable, idx: &[usize], k: usize, trace: &mut Vec<String>) -> std::result::Result<RCup, String> {
    let part = split_among(set, idx);
    let (a, b) = (&part.upper, &part.lower);
    trace.push(format!("k={k}: |A| = {}, |B| = {}", a.len(), b.len()));
    if k == 4 {
        if a.len() >= 3 {
            // A has no 3-cap (it would extend into B), so its 3-cups are all
            // candidates; take the first one with a point below its last edge.
            for (j, &q) in a.iter().enumerate().skip(2) {
                for (i, &p) in a[..j].iter().enumerate().skip(1) {
                    for &o in &a[..i] {
                        if table.left(o, p, q) {
                            if let Some(r) = below_extension(table, p, q) {
                                trace.push(format!("k=4: 3-cup in A ending at {q}, r = {r}"));
                                return Ok(RCup { cup: vec![o, p, q], r });
                            }
                        }
                    }
                }
            }
            return fallback(table, idx, k, "no 3-cup in A has a point below its last edge", trace);
        }
        let cap = longest_chain_in(table, b, Turn::Right);
        if cap.len() >= 3 {
            let (v1, v2, v3) = (cap[0], cap[1], cap[2]);
            if let Some(&o) = a.iter().rev().find(|&&o| o < v1 && table.left(o, v1, v2)) {
                trace.push(format!("k=4: 3-cap {v1},{v2},{v3} in B, cup {o},{v1},{v2}, r = {v3}"));
                return Ok(RCup { cup: vec![o, v1, v2], r: v3 });
            }
            return fallback(table, idx, k, "3-cap in B does not extend left into A", trace);
        }
        return fallback(table, idx, k, "B is a cup", trace);
    }
    if a.len() >= k - 1 {
        let cup = longest_chain_in(table, a, Turn::Left);
        if cup.len() == a.len() {
            for end in (k - 2..cup.len()).rev() {
                if let Some(r) = below_extension(table, cup[end - 1], cup[end]) {
                    trace.push(format!("k={k}: A is a cup, window ending at {}", cup[end]));
                    return Ok(RCup { cup: cup[end + 2 - k..=end].to_vec(), r });
                }
            }
            return fallback(table, idx, k, "no window of the cup A has property R", trace);
        }
        return fallback(table, idx, k, "A is not a cup", trace);
    }
    let inner = r_cup(set, table, b, k - 1, trace)?;
    let (p, q) = (inner.cup[0], inner.cup[1]);
    match a.iter().rev().find(|&&o| o < p && table.left(o, p, q)) {
        Some(&o) => {
            trace.push(format!("k={k}: extended cup from B left by {o}"));
            let mut cup = vec![o];
            cup.extend(inner.cup);
            Ok(RCup { cup, r: inner.r })
        }
        None => fallback(table, idx, k, "cup from B does not extend left into A", trace),
    }
}

struct Found {
    s: usize,
    base_m: usize,
    cup: Vec<usize>,
    r: usize,
    cap: Vec<usize>,
}

fn descend(
    set: &PointSet,
    table: &OrientTable,
    idx: &[usize],
    m: usize,
    l: usize,
    trace: &mut Vec<String>,
) -> std::result::Result<Found, String> {
    if l == 4 {
        let rc = r_cup(set, table, idx, m, trace)?;
        let s = rc.cup[rc.cup.len() - 2];
        let q = rc.cup[rc.cup.len() - 1];
        return Ok(Found { s, base_m: m, cap: vec![s, q, rc.r], cup: rc.cup, r: rc.r });
    }
    let part = split_among(set, idx);
    let (a, b) = (&part.upper, &part.lower);
    trace.push(format!("({m},{l}): |A| = {}, |B| = {}", a.len(), b.len()));
    let via_a = if m == 4 { true } else { a.len() > bounds::g_small(m, l - 1) };
    if via_a {
        if a.len() <= bounds::g_small(m, l - 1) {
            return Err(format!("({m},{l}): |A| = {} <= g({m},{}) ", a.len(), l - 1));
        }
        let mut found = descend(set, table, a, m, l - 1, trace)?;
        let (p, q) = (found.cap[found.cap.len() - 2], found.cap[found.cap.len() - 1]);
        let ext = b
            .iter()
            .copied()
            .find(|&t| t > q && table.right(p, q, t))
            .or_else(|| (q + 1..table.len()).find(|&t| table.right(p, q, t)));
        match ext {
            Some(t) => {
                trace.push(format!("({m},{l}): extended cap from {} by {t}", found.s));
                found.cap.push(t);
            }
            None => {
                // The base case may take its point r from outside A, and then
                // the cap need not extend; search all caps from s instead.
                trace.push(format!("({m},{l}): cap from {} does not extend; direct search", found.s));
                found.cap = property_r_cap(table, found.s, l)
                    .ok_or_else(|| format!("({m},{l}): {} starts no {}-cap", found.s, l - 1))?;
            }
        }
        Ok(found)
    } else if b.len() > bounds::g_small(m - 1, l) {
        descend(set, table, b, m - 1, l, trace)
    } else {
        Err(format!(
            "({m},{l}): |A| = {} <= g({m},{}) and |B| = {} <= g({},{l})",
            a.len(),
            l - 1,
            b.len(),
            m - 1
        ))
    }
}

/// Good-point candidate for `(m, 4)`-free sets of more than `C(m,2) - m + 2` points.
pub fn find_good_point_m4(set: &PointSet, m: usize) -> Result<GoodPointCertificate> {
    find_good_point(set, m, 4)
}

/// Good-point candidate with property R for `(m, l)`-free sets of more than
/// `g(m, l)` points.
pub fn find_good_point(set: &PointSet, m: usize, l: usize) -> Result<GoodPointCertificate> {
    if m < 4 || l < 4 {
        return Err(Error::Domain(format!("good points need m, l >= 4, got ({m}, {l})")));
    }
    validate(set)?;
    let table = OrientTable::new(set);
    check_free(set, &table, m, l)?;
    let g = bounds::g_series(m, l)?;
    if BigInt::from(set.len()) <= g {
        return Err(Error::NotEnoughPoints { required: g.to_string(), actual: set.len() });
    }
    let idx: Vec<usize> = (0..set.len()).collect();
    let mut trace = Vec::new();
    let found = descend(set, &table, &idx, m, l, &mut trace)
        .map_err(|msg| Error::ProofGapWitness(format!("{msg}; trace: {}", trace.join(" | "))))?;
    let cert = GoodPointCertificate {
        s: found.s,
        m,
        l,
        base_m: found.base_m,
        cup_witness: Chain::new(&table, found.cup),
        r_witness: found.r,
        property_r_witness: Chain::new(&table, found.cap),
        trace,
    };
    check_certificate(set, &cert).map_err(Error::ProofGapWitness)?;
    Ok(cert)
}

/// Re-validates every certificate invariant from the raw coordinates.
pub fn check_certificate(set: &PointSet, cert: &GoodPointCertificate) -> std::result::Result<(), String> {
    let pts = |c: &Chain| -> std::result::Result<Vec<&Point>, String> {
        c.indices
            .iter()
            .map(|&i| set.points().get(i).ok_or_else(|| format!("index {i} out of range")))
            .collect()
    };
    let turns_all = |p: &[&Point], want: Orientation| p.windows(3).all(|w| orientation(w[0], w[1], w[2]) == want);
    let sorted = |p: &[&Point]| p.windows(2).all(|w| w[0].x < w[1].x);

    let cup = pts(&cert.cup_witness)?;
    if cup.len() + 1 != cert.base_m || cert.base_m < 4 || cert.base_m > cert.m {
        return Err(format!("cup has {} points for base m = {}", cup.len(), cert.base_m));
    }
    if !sorted(&cup) || !turns_all(&cup, Orientation::Left) {
        return Err("cup witness is not a cup".into());
    }
    let k = cert.cup_witness.indices.len();
    if cert.cup_witness.indices[k - 2] != cert.s {
        return Err("s is not the second rightmost cup vertex".into());
    }
    let r = set.points().get(cert.r_witness).ok_or("r out of range")?;
    let (p, q) = (cup[k - 2], cup[k - 1]);
    if r.x <= q.x || orientation(p, q, r) != Orientation::Right {
        return Err("r is not right of the cup and below its last edge".into());
    }
    let cap = pts(&cert.property_r_witness)?;
    if cap.len() + 1 != cert.l || !sorted(&cap) || !turns_all(&cap, Orientation::Right) {
        return Err(format!("property R witness is not an {}-cap", cert.l - 1));
    }
    if cert.property_r_witness.indices[0] != cert.s {
        return Err("property R witness does not start at s".into());
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OutcomeKind {
    #[serde(rename = "l_cap_two_rightmost_in_S")]
    LCapTwoRightmostInS,
    #[serde(rename = "m_cup_two_leftmost_in_S")]
    MCupTwoLeftmostInS,
    #[serde(rename = "convex_n_gon")]
    ConvexNGon,
    #[serde(rename = "REFUTED")]
    Refuted,
}

/// Where the right end `u1` of the adjoined cup sits relative to the
/// certificate's `v1` and the line through `s` and `v1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    LeftAbove,
    LeftBelow,
    RightAbove,
    RightBelow,
}

impl Region {
    /// Order in which the outcomes are tested: the structure the case
    /// analysis predicts for the region comes first.
    fn order(self) -> [OutcomeKind; 3] {
        use OutcomeKind::*;
        match self {
            Region::LeftAbove => [MCupTwoLeftmostInS, ConvexNGon, LCapTwoRightmostInS],
            Region::LeftBelow => [ConvexNGon, LCapTwoRightmostInS, MCupTwoLeftmostInS],
            Region::RightAbove => [MCupTwoLeftmostInS, LCapTwoRightmostInS, ConvexNGon],
            Region::RightBelow => [ConvexNGon, LCapTwoRightmostInS, MCupTwoLeftmostInS],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdversaryOutcome {
    pub trial: u64,
    pub kind: OutcomeKind,
    pub region: Region,
    /// Points of the forced structure; for a refutation, the `(n-1)`-cup used.
    pub witness: Vec<Point>,
    /// The adjoined set B.
    pub adjoined: Vec<Point>,
    /// The `(n-1)`-cup from `s` into B.
    pub cup: Vec<Point>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversaryReport {
    pub n: usize,
    pub seed: u64,
    pub trials: u64,
    pub outcomes: Vec<AdversaryOutcome>,
    /// Trials for which no valid adjoined set was produced.
    pub exhausted: Vec<u64>,
}

impl AdversaryReport {
    pub fn refutations(&self) -> impl Iterator<Item = &AdversaryOutcome> {
        self.outcomes.iter().filter(|o| o.kind == OutcomeKind::Refuted)
    }

    pub fn count(&self, kind: OutcomeKind) -> usize {
        self.outcomes.iter().filter(|o| o.kind == kind).count()
    }
}

const SAMPLER_ATTEMPTS: usize = 64;

/// Samples `trials` adjoined sets, each of at most `n - 2` points creating an
/// `(n-1)`-cup from `cert.s` into B, and classifies what each one forces.
///
/// Deterministic in `(seed, trials)`: trial `t` draws from its own ChaCha
/// stream, so trials run on several threads without changing the result.
pub fn certify_adversarially(
    set: &PointSet,
    cert: &GoodPointCertificate,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<AdversaryReport> {
    check_certificate(set, cert).map_err(|e| Error::Domain(format!("invalid certificate: {e}")))?;
    adversary(set, cert.s, cert.v1(), cert.m, cert.l, n, trials, seed)
}

/// Reruns a single trial, e.g. to replay a refutation.
pub fn replay_trial(
    set: &PointSet,
    cert: &GoodPointCertificate,
    n: usize,
    seed: u64,
    trial: u64,
) -> Option<AdversaryOutcome> {
    run_trial(set, cert.s, cert.v1(), cert.m, cert.l, n, seed, trial)
}

#[allow(clippy::too_many_arguments)]
fn adversary(
    set: &PointSet,
    s: usize,
    v1: usize,
    m: usize,
    l: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<AdversaryReport> {
    if n < 4 {
        return Err(Error::Domain(format!("adjoined cups need n >= 4, got {n}")));
    }
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(trials.max(1) as usize);
    let mut results: Vec<Option<AdversaryOutcome>> = Vec::with_capacity(trials as usize);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w as u64..trials)
                        .step_by(workers)
                        .map(|t| (t, run_trial(set, s, v1, m, l, n, seed, t)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<(u64, Option<AdversaryOutcome>)> =
            handles.into_iter().flat_map(|h| h.join().expect("trial worker panicked")).collect();
        all.sort_by_key(|(t, _)| *t);
        results.extend(all.into_iter().map(|(_, r)| r));
    });
    let mut outcomes = Vec::new();
    let mut exhausted = Vec::new();
    for (t, r) in results.into_iter().enumerate() {
        match r {
            Some(o) => outcomes.push(o),
            None => exhausted.push(t as u64),
        }
    }
    Ok(AdversaryReport { n, seed, trials, outcomes, exhausted })
}

fn tiny(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << rng.gen_range(1..=40u32))
}

fn random_cup_from(table: &OrientTable, s: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut cup = vec![s];
    while cup.len() < k {
        let last = *cup.last().unwrap();
        let options: Vec<usize> = (last + 1..table.len())
            .filter(|&t| cup.len() < 2 || table.left(cup[cup.len() - 2], last, t))
            .collect();
        if options.is_empty() {
            break;
        }
        cup.push(options[rng.gen_range(0..options.len())]);
    }
    cup
}

/// Fresh points continuing the cup `base` to the right, slopes and steps
/// biased towards the lines and verticals through points of the set.
fn extend_cup(set: &PointSet, base: &[Point], fresh: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut last = base.last().unwrap().clone();
    let mut floor: Option<Rational> = (base.len() >= 2).then(|| {
        let p = &base[base.len() - 2];
        (&last.y - &p.y) / (&last.x - &p.x)
    });
    let lo = set.point(0).x.clone();
    let span = &set.point(set.len() - 1).x - &lo + Rational::one();
    let mut out = Vec::with_capacity(fresh);
    for _ in 0..fresh {
        let right: Vec<&Point> = set.iter().filter(|p| p.x > last.x).collect();
        let mut slope = match rng.gen_range(0..4) {
            0 if !right.is_empty() => {
                let t = right[rng.gen_range(0..right.len())];
                let base = (&t.y - &last.y) / (&t.x - &last.x);
                if rng.gen_bool(0.5) { base + tiny(rng) } else { base - tiny(rng) }
            }
            1 => match &floor {
                Some(f) => f + tiny(rng),
                None => Rational::from_integer(rng.gen_range(-50..=50i64).into()),
            },
            2 => {
                let big = Rational::from_integer(rng.gen_range(1..=1000i64).into());
                match &floor {
                    Some(f) => f + big,
                    None if rng.gen_bool(0.5) => -big,
                    None => big,
                }
            }
            _ => {
                let i = rng.gen_range(0..set.len());
                let j = rng.gen_range(0..set.len());
                if i == j {
                    tiny(rng)
                } else {
                    let (p, q) = (set.point(i.min(j)), set.point(i.max(j)));
                    (&q.y - &p.y) / (&q.x - &p.x) + tiny(rng)
                }
            }
        };
        if let Some(f) = &floor {
            if slope <= *f {
                slope = f + tiny(rng);
            }
        }
        let dx = match rng.gen_range(0..3) {
            0 => tiny(rng),
            1 if !right.is_empty() => {
                let t = right[rng.gen_range(0..right.len())];
                let d = &t.x - &last.x;
                let e = tiny(rng) * &d;
                if rng.gen_bool(0.5) { d + e } else { d - e }
            }
            _ => &span * Rational::new(rng.gen_range(1..=2000i64).into(), 1000.into()),
        };
        let next = Point::new(&last.x + &dx, &last.y + &slope * &dx);
        out.push(next.clone());
        floor = Some(slope);
        last = next;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn run_trial(
    set: &PointSet,
    s: usize,
    v1: usize,
    m: usize,
    l: usize,
    n: usize,
    seed: u64,
    trial: u64,
) -> Option<AdversaryOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let table = OrientTable::new(set);
    for _ in 0..SAMPLER_ATTEMPTS {
        let k = rng.gen_range(1..=n - 2);
        let from_s = random_cup_from(&table, s, k, &mut rng);
        let base: Vec<Point> = from_s.iter().map(|&i| set.point(i).clone()).collect();
        let fresh = extend_cup(set, &base, n - 1 - base.len(), &mut rng);
        let mut union: Vec<Point> = set.points().to_vec();
        union.extend(fresh.iter().cloned());
        let union = PointSet::new(union);
        if validate(&union).is_err() {
            continue;
        }
        let mut cup = base;
        cup.extend(fresh.iter().cloned());
        return Some(classify(set, &union, s, v1, m, l, n, &fresh, cup, trial));
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn classify(
    set: &PointSet,
    union: &PointSet,
    s: usize,
    v1: usize,
    m: usize,
    l: usize,
    n: usize,
    fresh: &[Point],
    cup: Vec<Point>,
    trial: u64,
) -> AdversaryOutcome {
    let (sp, vp) = (set.point(s), set.point(v1));
    let u1 = fresh.last().expect("at least one adjoined point");
    let above = orientation(sp, vp, u1) == Orientation::Left;
    let region = match (u1.x < vp.x, above) {
        (true, true) => Region::LeftAbove,
        (true, false) => Region::LeftBelow,
        (false, true) => Region::RightAbove,
        (false, false) => Region::RightBelow,
    };
    let members: BTreeSet<&Point> = set.iter().collect();
    let in_s: Vec<bool> = union.iter().map(|p| members.contains(p)).collect();
    let table = OrientTable::new(union);
    let idx: Vec<usize> = (0..union.len()).collect();
    let pick = |c: &[usize]| c.iter().map(|&i| union.point(i).clone()).collect::<Vec<_>>();
    for kind in region.order() {
        let found = match kind {
            OutcomeKind::LCapTwoRightmostInS => cap_ending_in(&table, &idx, &in_s, l),
            OutcomeKind::MCupTwoLeftmostInS => cup_starting_in(&table, &idx, &in_s, m),
            OutcomeKind::ConvexNGon => {
                let w = largest_convex_in(&table, &idx);
                (w.len() >= n).then(|| w[..n].to_vec())
            }
            OutcomeKind::Refuted => None,
        };
        if let Some(w) = found {
            return AdversaryOutcome { trial, kind, region, witness: pick(&w), adjoined: fresh.to_vec(), cup };
        }
    }
    AdversaryOutcome {
        trial,
        kind: OutcomeKind::Refuted,
        region,
        witness: cup.clone(),
        adjoined: fresh.to_vec(),
        cup,
    }
}

/// A `len`-cap whose last two points are both flagged.
fn cap_ending_in(table: &OrientTable, idx: &[usize], flag: &[bool], len: usize) -> Option<Vec<usize>> {
    let k = idx.len();
    let ends = chain_ends(table, idx, Turn::Right);
    for b in 0..k {
        for a in 0..b {
            if flag[a] && flag[b] && ends[a * k + b] as usize >= len {
                let chain = backtrack_ends(table, idx, &ends, Turn::Right, a, b);
                return Some(chain[chain.len() - len..].to_vec());
            }
        }
    }
    None
}

/// A `len`-cup whose first two points are both flagged.
fn cup_starting_in(table: &OrientTable, idx: &[usize], flag: &[bool], len: usize) -> Option<Vec<usize>> {
    let k = idx.len();
    let starts = chain_starts(table, idx, Turn::Left);
    for a in 0..k {
        for b in a + 1..k {
            if flag[a] && flag[b] && starts[a * k + b] as usize >= len {
                let mut chain = forward_starts(table, idx, &starts, Turn::Left, a, b);
                chain.truncate(len);
                return Some(chain);
            }
        }
    }
    None
}

/// The falsifier's control: replace `s` by each other point of the set in
/// turn until the adversary refutes one. Returns the replaced point and the
/// refuting outcome.
pub fn refute_corrupted(
    set: &PointSet,
    cert: &GoodPointCertificate,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Option<(usize, AdversaryOutcome)>> {
    for s in (0..set.len()).filter(|&s| s != cert.s && s != cert.v1()) {
        let report = adversary(set, s, cert.v1(), cert.m, cert.l, n, trials, seed)?;
        let refuted = report.refutations().next().cloned();
        if let Some(o) = refuted {
            return Ok(Some((s, o)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeOutcome {
    NCup(Chain),
    NMinus1Cap(Chain),
    ConvexNGon(ConvexWitness),
    BelowThreshold { threshold: String },
}

/// `f(n-1, n-1) + g(n, n-2) + 1`.
pub fn three_outcome_threshold(n: usize) -> Result<BigInt> {
    Ok(bounds::f_cupcap(n - 1, n - 1)? + bounds::g_series(n, n - 2)? + 1)
}

/// At or above the threshold, finds an `n`-cup, an `(n-1)`-cap or a convex
/// `n`-gon, tested in that order.
pub fn analyze_three_outcomes(set: &PointSet, n: usize) -> Result<ThreeOutcome> {
    if n < 6 {
        return Err(Error::Domain(format!("three-outcome analysis needs n >= 6, got {n}")));
    }
    validate(set)?;
    let threshold = three_outcome_threshold(n)?;
    if BigInt::from(set.len()) < threshold {
        return Ok(ThreeOutcome::BelowThreshold { threshold: threshold.to_string() });
    }
    let table = OrientTable::new(set);
    let idx: Vec<usize> = (0..set.len()).collect();
    let cup = longest_chain_in(&table, &idx, Turn::Left);
    if cup.len() >= n {
        return Ok(ThreeOutcome::NCup(Chain::new(&table, cup[..n].to_vec())));
    }
    let cap = longest_chain_in(&table, &idx, Turn::Right);
    if cap.len() + 1 >= n {
        return Ok(ThreeOutcome::NMinus1Cap(Chain::new(&table, cap[..n - 1].to_vec())));
    }
    let convex = largest_convex_in(&table, &idx);
    if convex.len() >= n {
        return Ok(ThreeOutcome::ConvexNGon(ConvexWitness { indices: convex[..n].to_vec() }));
    }
    Err(Error::ProofGapWitness(format!(
        "{} points, longest cup {}, longest cap {}, largest convex subset {}",
        set.len(),
        cup.len(),
        cap.len(),
        convex.len()
    )))
}

/// Number of points with property R for `l`; a convenience for reports.
pub fn count_property_r(set: &PointSet, l: usize) -> usize {
    let table = OrientTable::new(set);
    (0..set.len()).filter(|&s| property_r_cap(&table, s, l).is_some()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cupcap_extremal, random_free, FreeSampler};

    #[test]
    fn property_r_on_small_cases() {
        let set = PointSet::from_ints(&[(0, 0), (1, 2), (2, 3), (3, 1)]);
        let (ok, cap) = has_property_r(&set, 0, 4);
        assert!(ok);
        assert_eq!(cap.unwrap().indices.len(), 3);
        assert!(!has_property_r(&set, 3, 3).0);
    }

    #[test]
    fn rejects_sets_that_are_not_free() {
        let cap4 = PointSet::from_ints(&[(0, 0), (1, 3), (2, 4), (3, 3), (4, 1)]);
        assert!(matches!(find_good_point_m4(&cap4, 5), Err(Error::FreenessViolated { .. })));
    }

    #[test]
    fn size_threshold_is_strict() {
        let set = cupcap_extremal(5, 4).unwrap();
        let sub = PointSet::new(set.points()[..7].to_vec());
        assert!(matches!(find_good_point_m4(&sub, 5), Err(Error::NotEnoughPoints { actual: 7, .. })));
    }

    #[test]
    fn certificates_on_random_free_sets() {
        let batch = random_free(5, 4, 8, 20, 3, FreeSampler::Structured).unwrap();
        for set in &batch.sets {
            let cert = find_good_point_m4(set, 5).unwrap();
            check_certificate(set, &cert).unwrap();
            assert!(has_property_r(set, cert.s, 4).0);
        }
    }

    #[test]
    fn adversary_zero_trials_is_empty() {
        let set = random_free(5, 4, 8, 1, 4, FreeSampler::Structured).unwrap().sets.remove(0);
        let cert = find_good_point_m4(&set, 5).unwrap();
        let report = certify_adversarially(&set, &cert, 5, 0, 1).unwrap();
        assert!(report.outcomes.is_empty());
    }

    #[test]
    fn adversary_is_deterministic() {
        let set = random_free(5, 4, 8, 1, 8, FreeSampler::Structured).unwrap().sets.remove(0);
        let cert = find_good_point_m4(&set, 5).unwrap();
        let a = certify_adversarially(&set, &cert, 5, 50, 77).unwrap();
        let b = certify_adversarially(&set, &cert, 5, 50, 77).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_eq!(a.refutations().count(), 0);
        let one = replay_trial(&set, &cert, 5, 77, 17).unwrap();
        assert_eq!(Some(&one), a.outcomes.iter().find(|o| o.trial == 17));
    }

    #[test]
    fn three_outcomes_below_threshold() {
        let set = PointSet::from_ints(&[(0, 0), (1, 1), (2, 5)]);
        assert_eq!(
            analyze_three_outcomes(&set, 6).unwrap(),
            ThreeOutcome::BelowThreshold { threshold: "32".into() }
        );
    }
}
