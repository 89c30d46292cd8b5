//! Index-addressed exact orientation.
//!
//! Coordinates are scaled to integers (x and y by separate positive factors,
//! which preserves every orientation sign). When the scaled values fit in 62
//! bits the cross product is evaluated in `i128`; otherwise in `BigInt`, with
//! all triples precomputed for moderate sizes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::geometry::{Orientation, Point, PointSet};

const SMALL_LIMIT: i64 = 1 << 62;
const CACHE_LIMIT: usize = 160;

enum Coords {
    Small(Vec<(i64, i64)>),
    Big { coords: Vec<(BigInt, BigInt)>, cache: Option<Vec<i8>> },
}

pub struct OrientTable {
    n: usize,
    coords: Coords,
}

impl OrientTable {
    pub fn new(set: &PointSet) -> Self {
        OrientTable::from_points(set.points())
    }

    pub fn from_points(points: &[Point]) -> Self {
        let n = points.len();
        let lx = points.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.x.denom()));
        let ly = points.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.y.denom()));
        let big: Vec<(BigInt, BigInt)> = points
            .iter()
            .map(|p| {
                (
                    p.x.numer() * (&lx / p.x.denom()),
                    p.y.numer() * (&ly / p.y.denom()),
                )
            })
            .collect();
        let small: Option<Vec<(i64, i64)>> = big
            .iter()
            .map(|(x, y)| {
                let x = x.to_i64().filter(|v| v.unsigned_abs() < SMALL_LIMIT as u64)?;
                let y = y.to_i64().filter(|v| v.unsigned_abs() < SMALL_LIMIT as u64)?;
                Some((x, y))
            })
            .collect();
        let coords = match small {
            Some(small) => Coords::Small(small),
            None => {
                let cache = (n <= CACHE_LIMIT).then(|| {
                    let mut cache = vec![0i8; n * n * n];
                    for i in 0..n {
                        for j in i + 1..n {
                            for k in j + 1..n {
                                cache[(i * n + j) * n + k] = big_sign(&big, i, j, k);
                            }
                        }
                    }
                    cache
                });
                Coords::Big { coords: big, cache }
            }
        };
        OrientTable { n, coords }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Orientation of the triple of points at indices `i, j, k`.
    pub fn orient(&self, i: usize, j: usize, k: usize) -> Orientation {
        match self.sign(i, j, k) {
            1 => Orientation::Left,
            -1 => Orientation::Right,
            _ => Orientation::Collinear,
        }
    }

    /// Sign of the cross product as -1, 0 or 1.
    pub fn sign(&self, i: usize, j: usize, k: usize) -> i8 {
        match &self.coords {
            Coords::Small(c) => {
                let (px, py) = c[i];
                let (qx, qy) = c[j];
                let (rx, ry) = c[k];
                let lhs = (qx as i128 - px as i128) * (ry as i128 - py as i128);
                let rhs = (qy as i128 - py as i128) * (rx as i128 - px as i128);
                (lhs > rhs) as i8 - (lhs < rhs) as i8
            }
            Coords::Big { coords, cache } => match cache {
                Some(cache) => {
                    let (mut a, mut b, mut c) = (i, j, k);
                    let mut parity = 1i8;
                    if a > b {
                        std::mem::swap(&mut a, &mut b);
                        parity = -parity;
                    }
                    if b > c {
                        std::mem::swap(&mut b, &mut c);
                        parity = -parity;
                    }
                    if a > b {
                        std::mem::swap(&mut a, &mut b);
                        parity = -parity;
                    }
                    if a == b || b == c {
                        return 0;
                    }
                    parity * cache[(a * self.n + b) * self.n + c]
                }
                None => big_sign(coords, i, j, k),
            },
        }
    }

    /// True when the triple turns left, i.e. for x-sorted `i < j < k` the
    /// slopes strictly increase.
    pub fn left(&self, i: usize, j: usize, k: usize) -> bool {
        self.sign(i, j, k) > 0
    }

    pub fn right(&self, i: usize, j: usize, k: usize) -> bool {
        self.sign(i, j, k) < 0
    }
}

fn big_sign(c: &[(BigInt, BigInt)], i: usize, j: usize, k: usize) -> i8 {
    let (px, py) = &c[i];
    let (qx, qy) = &c[j];
    let (rx, ry) = &c[k];
    let det = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    if det.is_zero() {
        0
    } else if det.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{orientation, rat, Point};

    #[test]
    fn extreme_i64_coordinates_take_the_exact_path() {
        let pts = vec![
            Point::from_ints(i64::MIN, 0),
            Point::from_ints(0, i64::MAX),
            Point::from_ints(1, i64::MIN),
            Point::from_ints(2, 3),
        ];
        let table = OrientTable::from_points(&pts);
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            assert_eq!(table.orient(i, j, k), orientation(&pts[i], &pts[j], &pts[k]));
        }
    }

    #[test]
    fn matches_rational_orientation_on_small_and_big_coordinates() {
        let huge = num_bigint::BigInt::from(10u8).pow(40u32);
        let pts = vec![
            Point::new(rat(1, 3), rat(-2, 7)),
            Point::new(rat(5, 2), rat(1, 9)),
            Point::new(rat(7, 1), rat(-11, 4)),
            Point::new(
                crate::geometry::Rational::from_integer(huge.clone()),
                crate::geometry::Rational::new(huge.clone() + 1u8, huge.clone() - 1u8),
            ),
            Point::new(rat(-3, 5), rat(13, 2)),
        ];
        let small = OrientTable::from_points(&pts[..3]);
        let big = OrientTable::from_points(&pts);
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                for k in 0..pts.len() {
                    let want = orientation(&pts[i], &pts[j], &pts[k]);
                    assert_eq!(big.orient(i, j, k), want, "big {i} {j} {k}");
                    if i < 3 && j < 3 && k < 3 {
                        assert_eq!(small.orient(i, j, k), want, "small {i} {j} {k}");
                    }
                }
            }
        }
    }
}
