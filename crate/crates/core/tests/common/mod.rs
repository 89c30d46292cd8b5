#![allow(dead_code)]

use esz_core::{Point, PointSet};
use proptest::prelude::*;

/// Keeps each candidate unless it repeats an x-coordinate or is collinear
/// with two points already kept.
pub fn general_position(raw: Vec<(i64, i64)>) -> PointSet {
    let mut kept: Vec<(i64, i64)> = Vec::new();
    for c in raw {
        if kept.iter().any(|p| p.0 == c.0) {
            continue;
        }
        let collinear = kept.iter().enumerate().any(|(i, p)| {
            kept[i + 1..].iter().any(|q| (q.0 - p.0) * (c.1 - p.1) == (q.1 - p.1) * (c.0 - p.0))
        });
        if !collinear {
            kept.push(c);
        }
    }
    PointSet::new(kept.into_iter().map(|(x, y)| Point::from_ints(x, y)).collect())
}

/// Point sets in general position with distinct x, up to `max` points.
pub fn point_sets(max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec((-60i64..60, -60i64..60), 0..=max + 4).prop_map(move |raw| {
        let set = general_position(raw);
        PointSet::new(set.points().iter().take(max).cloned().collect())
    })
}

/// Slopes strictly increase (cup) or decrease (cap) along the x-sorted
/// points, checked with cross-multiplied integer-free rationals.
pub fn is_chain(points: &[Point], cup: bool) -> bool {
    points.windows(3).all(|w| {
        let s1 = (&w[1].y - &w[0].y) / (&w[1].x - &w[0].x);
        let s2 = (&w[2].y - &w[1].y) / (&w[2].x - &w[1].x);
        if cup {
            s1 < s2
        } else {
            s1 > s2
        }
    }) && points.windows(2).all(|w| w[0].x < w[1].x)
}
