//! Generators for extremal and random point sets.
//!
//! Every generator certifies its output with the detectors before returning
//! it; a failed certification is reported as [`Error::ConstructionBug`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds;
use crate::chains::{largest_convex_subset, longest_cap, longest_cup};
use crate::error::{Error, Result};
use crate::geometry::{validate, Point, PointSet, Rational};

/// Side of the square integer grid used by the random generators.
pub const GRID: i64 = 1_000_000;

type Coord = (BigInt, BigInt);

fn normalize(points: &mut [Coord]) {
    if points.is_empty() {
        return;
    }
    let min_x = points.iter().map(|p| p.0.clone()).min().unwrap();
    let min_y = points.iter().map(|p| p.1.clone()).min().unwrap();
    for p in points.iter_mut() {
        p.0 -= &min_x;
        p.1 -= &min_y;
    }
}

fn extent(points: &[Coord]) -> (BigInt, BigInt) {
    let w = points.iter().map(|p| p.0.clone()).max().unwrap_or_default();
    let h = points.iter().map(|p| p.1.clone()).max().unwrap_or_default();
    (w, h)
}

/// Largest slope between two points of the block (points sorted by x), or
/// `None` for fewer than two points.
fn max_slope(points: &[Coord]) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let s = BigRational::new(&q.1 - &p.1, &q.0 - &p.0);
            if best.as_ref().is_none_or(|b| s > *b) {
                best = Some(s);
            }
        }
    }
    best
}

fn max_abs_slope(points: &[Coord]) -> BigRational {
    let mut best = BigRational::zero();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let s = BigRational::new(&q.1 - &p.1, &q.0 - &p.0).abs();
            if s > best {
                best = s;
            }
        }
    }
    best
}

fn ceil(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

/// A `k`-point convex chain: slopes increase for a cup, decrease for a cap.
fn convex_chain(k: usize, cup: bool, rng: &mut Option<&mut ChaCha8Rng>) -> Vec<Coord> {
    let mut out = Vec::with_capacity(k);
    let (mut x, mut y) = (BigInt::zero(), BigInt::zero());
    let mut slope: i64 = match rng {
        Some(r) => r.gen_range(-5..=5),
        None => 0,
    };
    for i in 0..k {
        if i > 0 {
            let dx: i64 = match rng {
                Some(r) => r.gen_range(1..=5),
                None => 1,
            };
            x += dx;
            y += slope * dx;
        }
        out.push((x.clone(), y.clone()));
        let step: i64 = match rng {
            Some(r) => r.gen_range(1..=5),
            None => 2,
        };
        slope += if cup { step } else { -step };
    }
    out
}

fn cupcap_coords(n: usize, m: usize, rng: &mut Option<&mut ChaCha8Rng>) -> Vec<Coord> {
    if n <= 2 || m <= 2 {
        return vec![(BigInt::zero(), BigInt::zero())];
    }
    if n == 3 {
        return convex_chain(m - 1, false, rng);
    }
    if m == 3 {
        return convex_chain(n - 1, true, rng);
    }
    let mut left = cupcap_coords(n - 1, m, rng);
    let mut right = cupcap_coords(n, m - 1, rng);
    normalize(&mut left);
    normalize(&mut right);
    let (wl, hl) = extent(&left);
    let (wr, _) = extent(&right);
    let gap: BigInt = match rng {
        Some(r) => BigInt::from(r.gen_range(1..=4i64)) * (&wl + 1),
        None => BigInt::one(),
    };
    let width = &wl + &gap + &wr;
    // Every slope between the groups must exceed every slope inside them.
    let steep = [max_slope(&left), max_slope(&right)]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or_else(BigRational::zero)
        .max(BigRational::zero());
    let mut dy = ceil(&(steep * BigRational::from_integer(width))) + &hl + 1;
    if let Some(r) = rng {
        dy += BigInt::from(r.gen_range(0..=3i64)) * &dy;
    }
    let dx = wl + gap;
    left.extend(right.into_iter().map(|(x, y)| (x + &dx, y + &dy)));
    left
}

fn to_point_set(coords: Vec<Coord>) -> PointSet {
    coords
        .into_iter()
        .map(|(x, y)| Point::new(Rational::from_integer(x), Rational::from_integer(y)))
        .collect()
}

fn certify_free(set: &PointSet, n: usize, m: usize) -> std::result::Result<(), String> {
    validate(set).map_err(|e| e.to_string())?;
    let cup = longest_cup(set).0;
    let cap = longest_cap(set).0;
    if cup >= n || cap >= m {
        return Err(format!("longest cup {cup}, longest cap {cap} for ({n},{m})-freeness"));
    }
    Ok(())
}

/// A largest set with no `n`-cup and no `m`-cap: `C(m+n-4, n-2)` points.
///
/// Built recursively from the `(n-1, m)` and `(n, m-1)` sets, the second
/// placed to the right and high enough that every slope between the groups
/// exceeds every slope within them.
pub fn cupcap_extremal(n: usize, m: usize) -> Result<PointSet> {
    build_cupcap(n, m, None)
}

/// [`cupcap_extremal`] with randomized chain shapes, gaps and offsets.
pub fn cupcap_extremal_random(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<PointSet> {
    build_cupcap(n, m, Some(rng))
}

fn build_cupcap(n: usize, m: usize, rng: Option<&mut ChaCha8Rng>) -> Result<PointSet> {
    if n < 3 || m < 3 {
        return Err(Error::Domain(format!("cupcap_extremal needs n, m >= 3, got ({n}, {m})")));
    }
    let mut rng = rng;
    let set = to_point_set(cupcap_coords(n, m, &mut rng));
    let expected = bounds::f_cupcap_small(n, m);
    if set.len() != expected {
        return Err(Error::ConstructionBug(format!(
            "cupcap_extremal({n},{m}) has {} points, expected {expected}",
            set.len()
        )));
    }
    certify_free(&set, n, m).map_err(|e| Error::ConstructionBug(format!("cupcap_extremal({n},{m}): {e}")))?;
    Ok(set)
}

/// `2^(n-2)` points with no convex `n`-gon.
///
/// Block `i` (for `0 <= i <= n-2`) is a `(i+2, n-i)` cup/cap-free set of
/// `C(n-2, i)` points. Blocks sit left to right along a steep concave curve:
/// slopes between blocks exceed all slopes inside blocks and decrease from
/// one block pair to the next.
pub fn es_lower_bound(n: usize) -> Result<PointSet> {
    if n < 3 {
        return Err(Error::Domain(format!("es_lower_bound needs n >= 3, got {n}")));
    }
    let mut blocks: Vec<Vec<Coord>> = (0..=n - 2)
        .map(|i| {
            let mut b = cupcap_coords(i + 2, n - i, &mut None);
            normalize(&mut b);
            b
        })
        .collect();
    let width = blocks.iter().map(|b| extent(b).0).max().unwrap();
    let height = blocks.iter().map(|b| extent(b).1).max().unwrap();
    let steep = blocks.iter().map(|b| max_abs_slope(b)).max().unwrap();
    let n_big = BigInt::from(n);
    let spacing = BigInt::from(8) * &n_big * (&width + 1);
    let vertical = BigRational::new(2 * &height, &spacing - &width);
    let mut k = ceil(&steep) + ceil(&vertical) + 1;
    let c = 2 * &n_big;
    for _ in 0..64 {
        let mut coords = Vec::new();
        for (i, block) in blocks.iter_mut().enumerate() {
            let i = BigInt::from(i);
            let ox = &i * &spacing;
            let oy = &k * &spacing * (&c * &i - &i * &i);
            coords.extend(block.iter().map(|(x, y)| (x + &ox, y + &oy)));
        }
        let set = to_point_set(coords);
        if validate(&set).is_ok() {
            let expected = 1usize << (n - 2);
            let convex = largest_convex_subset(&set).0;
            if set.len() != expected || convex >= n {
                return Err(Error::ConstructionBug(format!(
                    "es_lower_bound({n}): {} points, largest convex subset {convex}",
                    set.len()
                )));
            }
            return Ok(set);
        }
        k += 1;
    }
    Err(Error::ConstructionBug(format!("es_lower_bound({n}): no general-position placement found")))
}

/// Adds a point on the grid unless it shares an x-coordinate with, or is
/// collinear with two of, the points already chosen.
fn admissible(points: &[(i64, i64)], cand: (i64, i64)) -> bool {
    if points.iter().any(|p| p.0 == cand.0) {
        return false;
    }
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let lhs = (q.0 - p.0) as i128 * (cand.1 - p.1) as i128;
            let rhs = (q.1 - p.1) as i128 * (cand.0 - p.0) as i128;
            if lhs == rhs {
                return false;
            }
        }
    }
    true
}

fn random_grid_points(count: usize, bound: i64, rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let cand = (rng.gen_range(0..=bound), rng.gen_range(0..=bound));
        if admissible(&pts, cand) {
            pts.push(cand);
        }
    }
    pts
}

/// `count` points on the grid `[0, GRID]^2` in general position with distinct x.
pub fn random_points(count: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_points_with(count, GRID, &mut rng)
}

pub fn random_points_with(count: usize, bound: i64, rng: &mut ChaCha8Rng) -> PointSet {
    let pts = random_grid_points(count, bound, rng);
    PointSet::new(pts.into_iter().map(|(x, y)| Point::from_ints(x, y)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeSampler {
    /// Uniform grid points, kept when free.
    Uniform,
    /// Random subsets of randomized extremal sets, optionally jittered, kept
    /// when free. Reaches sizes close to the maximum, where uniform sampling
    /// essentially never succeeds.
    Structured,
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeBatch {
    pub sets: Vec<PointSet>,
    pub attempts: usize,
    pub acceptance_rate: f64,
}

/// Rejection-samples `count` point sets of `size` points with no `n_cup`-cup
/// and no `m_cap`-cap.
pub fn random_free(
    n_cup: usize,
    m_cap: usize,
    size: usize,
    count: usize,
    seed: u64,
    sampler: FreeSampler,
) -> Result<FreeBatch> {
    if n_cup < 3 || m_cap < 3 {
        return Err(Error::Domain(format!("random_free needs n, m >= 3, got ({n_cup}, {m_cap})")));
    }
    let max = bounds::f_cupcap(n_cup, m_cap)?;
    if BigInt::from(size) > max {
        return Err(Error::InfeasibleSize { n: n_cup, m: m_cap, size, max: max.to_string() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 10_000usize.max(2_000 * count);
    let mut sets = Vec::with_capacity(count);
    let mut attempts = 0;
    while sets.len() < count {
        if attempts >= budget {
            return Err(Error::SamplerExhausted { attempts });
        }
        attempts += 1;
        let cand = match sampler {
            FreeSampler::Uniform => random_points_with(size, GRID, &mut rng),
            FreeSampler::Structured => structured_candidate(n_cup, m_cap, size, &mut rng)?,
        };
        if validate(&cand).is_ok() && longest_cup(&cand).0 < n_cup && longest_cap(&cand).0 < m_cap {
            sets.push(cand);
        }
    }
    Ok(FreeBatch { acceptance_rate: count as f64 / attempts.max(1) as f64, sets, attempts })
}

fn structured_candidate(n: usize, m: usize, size: usize, rng: &mut ChaCha8Rng) -> Result<PointSet> {
    let base = cupcap_extremal_random(n, m, rng)?;
    let keep = sample(rng, base.len(), size).into_vec();
    let mut pts: Vec<Point> = keep.into_iter().map(|i| base.point(i).clone()).collect();
    if rng.gen_bool(0.5) {
        for p in pts.iter_mut() {
            let jx: i64 = rng.gen_range(-2..=2);
            let jy: i64 = rng.gen_range(-2..=2);
            p.x += Rational::from_integer(jx.into());
            p.y += Rational::from_integer(jy.into());
        }
    }
    Ok(PointSet::new(pts))
}

/// What to generate; rendered into file headers for replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    CupcapExtremal { n: usize, m: usize },
    EsLowerBound { n: usize },
    Random { count: usize, seed: u64, bound: i64 },
    RandomFree { n_cup: usize, m_cap: usize, size: usize, count: usize, seed: u64, sampler: FreeSampler },
}

impl GeneratorSpec {
    pub fn header(&self) -> Vec<String> {
        let spec = match self {
            GeneratorSpec::CupcapExtremal { n, m } => format!("cupcap_extremal n={n} m={m}"),
            GeneratorSpec::EsLowerBound { n } => format!("es_lower_bound n={n}"),
            GeneratorSpec::Random { count, seed, bound } => {
                format!("random count={count} seed={seed} bbox=[0,{bound}]^2")
            }
            GeneratorSpec::RandomFree { n_cup, m_cap, size, count, seed, sampler } => format!(
                "random_free n_cup={n_cup} m_cap={m_cap} size={size} count={count} seed={seed} sampler={}",
                match sampler {
                    FreeSampler::Uniform => "uniform",
                    FreeSampler::Structured => "structured",
                }
            ),
        };
        vec![format!("generator: {spec}")]
    }

    /// Runs the generator; multi-set generators return every set.
    pub fn generate(&self) -> Result<Vec<PointSet>> {
        match *self {
            GeneratorSpec::CupcapExtremal { n, m } => Ok(vec![cupcap_extremal(n, m)?]),
            GeneratorSpec::EsLowerBound { n } => Ok(vec![es_lower_bound(n)?]),
            GeneratorSpec::Random { count, seed, bound } => {
                if count == 0 {
                    return Err(Error::Domain("random needs count >= 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok(vec![random_points_with(count, bound, &mut rng)])
            }
            GeneratorSpec::RandomFree { n_cup, m_cap, size, count, seed, sampler } => {
                Ok(random_free(n_cup, m_cap, size, count, seed, sampler)?.sets)
            }
        }
    }
}

/// True when every one of `probes` random extra points creates an `n`-cup or
/// an `m`-cap (points that break general position are skipped).
pub fn tightness_probe(set: &PointSet, n: usize, m: usize, probes: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<BigRational> = set.iter().map(|p| p.x.clone()).collect();
    let lo_x = xs.iter().min().cloned().unwrap_or_default();
    let hi_x = xs.iter().max().cloned().unwrap_or_default();
    let lo_y = set.iter().map(|p| p.y.clone()).min().unwrap_or_default();
    let hi_y = set.iter().map(|p| p.y.clone()).max().unwrap_or_default();
    let span = |lo: &BigRational, hi: &BigRational| hi - lo + BigRational::one();
    let (wx, wy) = (span(&lo_x, &hi_x), span(&lo_y, &hi_y));
    let mut done = 0;
    while done < probes {
        let fx = BigRational::new(rng.gen_range(-1000..=2000i64).into(), 1000.into());
        let fy = BigRational::new(rng.gen_range(-1000..=2000i64).into(), 1000.into());
        let p = Point::new(&lo_x + &wx * fx, &lo_y + &wy * fy);
        let mut pts = set.points().to_vec();
        pts.push(p);
        let grown = PointSet::new(pts);
        if validate(&grown).is_err() {
            continue;
        }
        done += 1;
        if longest_cup(&grown).0 < n && longest_cap(&grown).0 < m {
            return false;
        }
    }
    true
}

/// Coordinates of the set as `i64` pairs, when they are all integers in range.
pub fn integer_coords(set: &PointSet) -> Option<Vec<(i64, i64)>> {
    set.iter()
        .map(|p| {
            if !p.x.is_integer() || !p.y.is_integer() {
                return None;
            }
            Some((p.x.to_integer().to_i64()?, p.y.to_integer().to_i64()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::ChainKind;

    #[test]
    fn base_case_is_a_cap() {
        for m in 3..=7 {
            let set = cupcap_extremal(3, m).unwrap();
            assert_eq!(set.len(), m - 1);
            let (len, chain) = longest_cap(&set);
            assert_eq!(len, m - 1);
            assert!(chain.kind.is_cap());
        }
        let two = cupcap_extremal(3, 3).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(longest_cap(&two).1.kind, ChainKind::Both);
    }

    #[test]
    fn four_four_has_six_points() {
        let set = cupcap_extremal(4, 4).unwrap();
        assert_eq!(set.len(), 6);
        assert_eq!(longest_cup(&set).0, 3);
        assert_eq!(longest_cap(&set).0, 3);
    }

    #[test]
    fn five_four_is_free() {
        let set = cupcap_extremal(5, 4).unwrap();
        assert_eq!(set.len(), 10);
        assert!(longest_cup(&set).0 < 5);
        assert!(longest_cap(&set).0 < 4);
    }

    #[test]
    fn lower_bound_small_cases() {
        assert_eq!(es_lower_bound(3).unwrap().len(), 2);
        let four = es_lower_bound(4).unwrap();
        assert_eq!(four.len(), 4);
        assert_eq!(largest_convex_subset(&four).0, 3);
        let five = es_lower_bound(5).unwrap();
        assert_eq!(five.len(), 8);
        assert_eq!(largest_convex_subset(&five).0, 4);
    }

    #[test]
    fn random_free_rejects_infeasible_size() {
        assert!(matches!(
            random_free(4, 4, 7, 1, 0, FreeSampler::Uniform),
            Err(Error::InfeasibleSize { size: 7, .. })
        ));
    }

    #[test]
    fn random_free_trivial_case() {
        let batch = random_free(3, 3, 2, 1, 9, FreeSampler::Uniform).unwrap();
        assert_eq!(batch.sets.len(), 1);
        assert_eq!(batch.sets[0].len(), 2);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_points(30, 5), random_points(30, 5));
        assert_ne!(random_points(30, 5), random_points(30, 6));
        let a = random_free(5, 4, 8, 5, 11, FreeSampler::Structured).unwrap();
        let b = random_free(5, 4, 8, 5, 11, FreeSampler::Structured).unwrap();
        assert_eq!(a.sets, b.sets);
    }
}
