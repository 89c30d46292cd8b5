//! The projective reduction: remove a hull vertex `x`, send a line beyond
//! the set to infinity, and read convex polygons through `x` off as caps of
//! the image.
//!
//! The frame is chosen so that the segment from `x` to the auxiliary point
//! `y` crosses no line through two other points. After the map, `y` is the
//! downward point at infinity, so the image of `x` lies below every line
//! through two image points: any cap of the image together with `x` is in
//! convex position.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chains::{Chain, ChainKind};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, format_rational, in_convex_position, int, orientation, validate, Orientation, Point, PointSet, Rational};
use crate::predicates::OrientTable;

/// Apex, auxiliary point and the line `a x + b y + c = 0` sent to infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub apex: usize,
    pub x: Point,
    pub y: Point,
    /// Outward direction at the apex; `y = x + t * direction`.
    pub direction: (Rational, Rational),
    pub line: [Rational; 3],
}

impl Frame {
    /// Two distinct points on the auxiliary line.
    pub fn line_points(&self) -> (Point, Point) {
        let (dx, dy) = &self.direction;
        let other = Point::new(&self.y.x - dy, &self.y.y + dx);
        (self.y.clone(), other)
    }

    fn line_value(&self, p: &Point) -> Rational {
        &self.line[0] * &p.x + &self.line[1] * &p.y + &self.line[2]
    }
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Frame", 4)?;
        st.serialize_field("apex", &self.apex)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("y", &self.y)?;
        st.serialize_field("line", &self.line.iter().map(format_rational).collect::<Vec<_>>())?;
        st.end()
    }
}

/// Picks the lowest-leftmost hull vertex as apex and walks outward along the
/// sum of the two outward edge normals, halving the step until the segment
/// to `y` crosses no line through two other points.
pub fn choose_apex_and_frame(set: &PointSet) -> Result<Frame> {
    if set.len() < 4 {
        return Err(Error::Domain(format!("the reduction needs at least 4 points, got {}", set.len())));
    }
    validate(set)?;
    let hull = convex_hull(set.points());
    let x = hull[0].clone();
    let prev = &hull[hull.len() - 1];
    let next = &hull[1];
    // Outward normal of a counterclockwise edge (dx, dy) is (dy, -dx).
    let normal = |a: &Point, b: &Point| (&b.y - &a.y, &a.x - &b.x);
    let (n1, n2) = (normal(prev, &x), normal(&x, next));
    let direction = (&n1.0 + &n2.0, &n1.1 + &n2.1);
    let apex = set.iter().position(|p| *p == x).expect("hull vertex belongs to the set");
    let others: Vec<&Point> = set.iter().filter(|p| **p != x).collect();
    let mut t = int(1);
    let y = loop {
        let y = Point::new(&x.x + &t * &direction.0, &x.y + &t * &direction.1);
        if segment_clear(&others, &x, &y) {
            break y;
        }
        t /= int(2);
    };
    let line = [
        direction.0.clone(),
        direction.1.clone(),
        -(&direction.0 * &y.x + &direction.1 * &y.y),
    ];
    let frame = Frame { apex, x, y, direction, line };
    check_frame(set, &frame).map_err(Error::DegenerateFrame)?;
    Ok(frame)
}

/// `x` and `y` lie strictly on the same side of every line through two of `others`.
fn segment_clear(others: &[&Point], x: &Point, y: &Point) -> bool {
    for (i, a) in others.iter().enumerate() {
        for b in &others[i + 1..] {
            let ox = orientation(a, b, x);
            if ox == Orientation::Collinear || orientation(a, b, y) != ox {
                return false;
            }
        }
    }
    true
}

/// Explicit frame checks: `x` is a hull vertex, `xy` clears every line of
/// the other points, and the auxiliary line passes through `y` with the whole
/// set strictly on one side.
pub fn check_frame(set: &PointSet, frame: &Frame) -> std::result::Result<(), String> {
    if !convex_hull(set.points()).contains(&frame.x) {
        return Err("apex is not a hull vertex".into());
    }
    let others: Vec<&Point> = set.iter().filter(|p| **p != frame.x).collect();
    if !segment_clear(&others, &frame.x, &frame.y) {
        return Err("segment xy crosses a line through two points".into());
    }
    if !frame.line_value(&frame.y).is_zero() {
        return Err("auxiliary line misses y".into());
    }
    if frame.line[0].is_zero() && frame.line[1].is_zero() {
        return Err("auxiliary line is degenerate".into());
    }
    if !set.iter().all(|p| frame.line_value(p).is_negative()) {
        return Err("auxiliary line meets the hull".into());
    }
    Ok(())
}

type Matrix = [[Rational; 3]; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveMap {
    pub matrix: Matrix,
    pub inverse: Matrix,
    pub frame: Frame,
    /// Set when the x-axis of the image was flipped to make the determinant
    /// positive; the map then preserves every orientation.
    pub mirrored: bool,
    /// Always false for maps built here; kept so consumers can swap cup/cap
    /// roles for externally supplied maps.
    pub orientation_reversed: bool,
}

impl Serialize for ProjectiveMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let flat: Vec<String> = self.matrix.iter().flatten().map(format_rational).collect();
        let mut st = serializer.serialize_struct("ProjectiveMap", 5)?;
        st.serialize_field("matrix", &flat)?;
        st.serialize_field("frame", &self.frame)?;
        st.serialize_field("determinant", &format_rational(&det(&self.matrix)))?;
        st.serialize_field("mirrored", &self.mirrored)?;
        st.serialize_field("orientation_reversed", &self.orientation_reversed)?;
        st.end()
    }
}

impl fmt::Display for ProjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn det(m: &Matrix) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn invert(m: &Matrix) -> Option<Matrix> {
    let d = det(m);
    if d.is_zero() {
        return None;
    }
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
    // Adjugate (transposed cofactors) over the determinant.
    let adj = [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ];
    Some(adj.map(|row| row.map(|v| v / &d)))
}

fn apply_matrix(m: &Matrix, p: &Point) -> [Rational; 3] {
    let row = |r: &[Rational; 3]| &r[0] * &p.x + &r[1] * &p.y + &r[2];
    [row(&m[0]), row(&m[1]), row(&m[2])]
}

fn dehomogenize(h: [Rational; 3], original: &Point) -> Result<Point> {
    let [u, v, w] = h;
    if w.is_zero() {
        return Err(Error::PointAtInfinity(Box::new(original.clone())));
    }
    Ok(Point::new(u / &w, v / w))
}

impl ProjectiveMap {
    pub fn determinant(&self) -> Rational {
        det(&self.matrix)
    }

    pub fn homogeneous(&self, p: &Point) -> [Rational; 3] {
        apply_matrix(&self.matrix, p)
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        dehomogenize(self.homogeneous(p), p)
    }

    pub fn apply_inverse(&self, p: &Point) -> Result<Point> {
        dehomogenize(apply_matrix(&self.inverse, p), p)
    }
}

/// The map sending the auxiliary line to infinity, the line `xy` to the
/// vertical through the image of `x` (the origin), with the segment `xy`
/// running downwards from it.
///
/// Rows: `U(p) = cross(y - x, p - x)`, `V(p) = d.x - d.p`, `W(p) = d.y - d.p`
/// for the frame direction `d`, so `W` vanishes exactly on the auxiliary line
/// and is positive on the set.
pub fn build_map(set: &PointSet, frame: &Frame) -> Result<ProjectiveMap> {
    let (x, y) = (&frame.x, &frame.y);
    let (dx, dy) = &frame.direction;
    let big_d = (&y.x - &x.x, &y.y - &x.y);
    let dot = |p: &Point| dx * &p.x + dy * &p.y;
    let mut matrix: Matrix = [
        [-big_d.1.clone(), big_d.0.clone(), &big_d.1 * &x.x - &big_d.0 * &x.y],
        [-dx.clone(), -dy.clone(), dot(x)],
        [-dx.clone(), -dy.clone(), dot(y)],
    ];
    let mut mirrored = false;
    let d = det(&matrix);
    if d.is_zero() {
        return Err(Error::DegenerateFrame("singular matrix".into()));
    }
    if d.is_negative() {
        matrix[0] = matrix[0].clone().map(|v| -v);
        mirrored = true;
    }
    for p in set.iter() {
        let w = apply_matrix(&matrix, p)[2].clone();
        if w.is_zero() {
            return Err(Error::DegenerateFrame(format!("auxiliary line passes through {p}")));
        }
        if w.is_negative() {
            return Err(Error::DegenerateFrame(format!("{p} lies beyond the auxiliary line")));
        }
    }
    let inverse = invert(&matrix).expect("determinant is nonzero");
    Ok(ProjectiveMap { matrix, inverse, frame: frame.clone(), mirrored, orientation_reversed: false })
}

/// Image of the set without the apex, with `preimage[i]` the index in the
/// original set of image point `i`.
#[derive(Clone, Debug, Serialize)]
pub struct Image {
    pub points: PointSet,
    pub preimage: Vec<usize>,
}

/// Applies the map to every point except the apex. Image x-coordinates are
/// pairwise distinct because equal x would put two points on a line with `y`.
pub fn transform_set(set: &PointSet, map: &ProjectiveMap) -> Result<Image> {
    let mut pairs: Vec<(Point, usize)> = Vec::with_capacity(set.len().saturating_sub(1));
    for (i, p) in set.iter().enumerate() {
        if i == map.frame.apex {
            continue;
        }
        pairs.push((map.apply(p)?, i));
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    if pairs.windows(2).any(|w| w[0].0.x == w[1].0.x) {
        return Err(Error::DegenerateFrame("two image points share an x-coordinate".into()));
    }
    let preimage = pairs.iter().map(|(_, i)| *i).collect();
    let points = PointSet::new(pairs.into_iter().map(|(p, _)| p).collect());
    Ok(Image { points, preimage })
}

/// One checked correspondence: an image chain and its pulled-back points.
#[derive(Clone, Debug, Serialize)]
pub struct PulledBack {
    pub kind: ChainKind,
    pub image_indices: Vec<usize>,
    pub preimage: Vec<Point>,
    pub includes_apex: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub n: usize,
    pub map: ProjectiveMap,
    pub image: Vec<Point>,
    pub triples_checked: usize,
    pub round_trip: bool,
    pub caps_checked: usize,
    pub cups_checked: usize,
    /// Set when enumeration stopped at [`ENUMERATION_LIMIT`] chains per kind.
    pub truncated: bool,
    pub witnesses: Vec<PulledBack>,
}

pub const ENUMERATION_LIMIT: usize = 20_000;
const REPORTED_WITNESSES: usize = 50;

/// Runs the reduction on the set and checks it: triple orientations, exact
/// round trip, and that every `(n-1)`-cap of the image plus the apex, and
/// every `n`-cup of the image, pulls back to points in convex position.
pub fn verify_reduction(set: &PointSet, n: usize) -> Result<ReductionReport> {
    if n < 4 {
        return Err(Error::Domain(format!("the reduction needs n >= 4, got {n}")));
    }
    let frame = choose_apex_and_frame(set)?;
    let map = build_map(set, &frame)?;
    let image = transform_set(set, &map)?;
    let img = &image.points;

    let src = OrientTable::new(set);
    let dst = OrientTable::new(img);
    let k = img.len();
    let mut triples = 0;
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let want = src.sign(image.preimage[i], image.preimage[j], image.preimage[l]);
                let want = if map.orientation_reversed { -want } else { want };
                if dst.sign(i, j, l) != want {
                    return Err(Error::CorrespondenceViolation(format!(
                        "orientation of image triple ({i}, {j}, {l}) differs from its preimage"
                    )));
                }
                triples += 1;
            }
        }
    }
    for (i, p) in img.iter().enumerate() {
        let back = map.apply_inverse(p)?;
        if back != *set.point(image.preimage[i]) {
            return Err(Error::CorrespondenceViolation(format!("round trip of {} gives {back}", set.point(image.preimage[i]))));
        }
    }

    let apex = set.point(frame.apex).clone();
    let mut witnesses = Vec::new();
    let mut truncated = false;
    let mut check = |chain: &[usize], cap: bool| -> Result<()> {
        let mut pre: Vec<Point> = chain.iter().map(|&i| set.point(image.preimage[i]).clone()).collect();
        if cap {
            pre.push(apex.clone());
        }
        if !in_convex_position(&pre) {
            let what = if cap { "cap plus apex" } else { "cup" };
            let pts: Vec<String> = pre.iter().map(|p| p.to_string()).collect();
            return Err(Error::CorrespondenceViolation(format!("{what} pulls back to non-convex {}", pts.join(" "))));
        }
        if witnesses.len() < REPORTED_WITNESSES {
            witnesses.push(PulledBack {
                kind: if cap { ChainKind::Cap } else { ChainKind::Cup },
                image_indices: chain.to_vec(),
                preimage: pre,
                includes_apex: cap,
            });
        }
        Ok(())
    };
    let mut caps = 0;
    let done = enumerate_chains(&dst, n - 1, false, &mut |c| {
        caps += 1;
        check(c, true)
    })?;
    truncated |= !done;
    let mut cups = 0;
    let done = enumerate_chains(&dst, n, true, &mut |c| {
        cups += 1;
        check(c, false)
    })?;
    truncated |= !done;
    Ok(ReductionReport {
        n,
        image: img.points().to_vec(),
        map,
        triples_checked: triples,
        round_trip: true,
        caps_checked: caps,
        cups_checked: cups,
        truncated,
        witnesses,
    })
}

/// Visits every cup (or cap) of exactly `len` points; returns false if the
/// enumeration limit was hit.
fn enumerate_chains(
    table: &OrientTable,
    len: usize,
    cup: bool,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<bool> {
    let n = table.len();
    if len == 0 || len > n {
        return Ok(true);
    }
    // longest[a*n+b]: longest chain starting with edge a -> b, for pruning.
    let mut longest = vec![0usize; n * n];
    for a in (0..n).rev() {
        for b in a + 1..n {
            let mut best = 2;
            for c in b + 1..n {
                let ok = if cup { table.left(a, b, c) } else { table.right(a, b, c) };
                if ok {
                    best = best.max(longest[b * n + c] + 1);
                }
            }
            longest[a * n + b] = best;
        }
    }
    let mut count = 0;
    let mut stack = Vec::with_capacity(len);
    for a in 0..n {
        stack.push(a);
        if len == 1 {
            visit(&stack)?;
            count += 1;
        } else if !walk(table, &longest, len, cup, &mut stack, &mut count, visit)? {
            return Ok(false);
        }
        stack.pop();
        if count >= ENUMERATION_LIMIT {
            return Ok(false);
        }
    }
    Ok(true)
}

fn walk(
    table: &OrientTable,
    longest: &[usize],
    len: usize,
    cup: bool,
    stack: &mut Vec<usize>,
    count: &mut usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<bool> {
    let n = table.len();
    let last = *stack.last().unwrap();
    for c in last + 1..n {
        let k = stack.len();
        if k >= 2 {
            let ok = if cup { table.left(stack[k - 2], last, c) } else { table.right(stack[k - 2], last, c) };
            if !ok {
                continue;
            }
        }
        // Remaining points needed after `last`, counting `c`.
        let need = len - k;
        if longest[last * n + c] < need + 1 {
            continue;
        }
        stack.push(c);
        if stack.len() == len {
            visit(stack)?;
            *count += 1;
            if *count >= ENUMERATION_LIMIT {
                stack.pop();
                return Ok(false);
            }
        } else if !walk(table, longest, len, cup, stack, count, visit)? {
            stack.pop();
            return Ok(false);
        }
        stack.pop();
    }
    Ok(true)
}

/// Cup or cap classification of an image chain, for reports.
pub fn classify_image_chain(image: &Image, chain: &[usize]) -> Chain {
    Chain::new(&OrientTable::new(&image.points), chain.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    fn square_plus() -> PointSet {
        PointSet::from_ints(&[(0, 0), (4, 1), (1, 5), (5, 6), (2, 2)])
    }

    #[test]
    fn frame_passes_its_checks() {
        let set = square_plus();
        let frame = choose_apex_and_frame(&set).unwrap();
        check_frame(&set, &frame).unwrap();
        assert_eq!(frame.x, Point::from_ints(0, 0));
    }

    #[test]
    fn auxiliary_line_goes_to_infinity() {
        let set = square_plus();
        let frame = choose_apex_and_frame(&set).unwrap();
        let map = build_map(&set, &frame).unwrap();
        let (a, b) = frame.line_points();
        assert!(map.homogeneous(&a)[2].is_zero());
        assert!(map.homogeneous(&b)[2].is_zero());
        assert!(map.determinant().is_positive());
    }

    #[test]
    fn segment_maps_to_downward_vertical() {
        let set = square_plus();
        let frame = choose_apex_and_frame(&set).unwrap();
        let map = build_map(&set, &frame).unwrap();
        let origin = map.apply(&frame.x).unwrap();
        assert_eq!(origin, Point::new(int(0), int(0)));
        for k in 1..5 {
            let t = rat(k, 5);
            let p = Point::new(&frame.x.x + &t * (&frame.y.x - &frame.x.x), &frame.x.y + &t * (&frame.y.y - &frame.x.y));
            let q = map.apply(&p).unwrap();
            assert!(q.x.is_zero());
            assert!(q.y.is_negative());
        }
    }

    #[test]
    fn inverse_round_trips() {
        let set = square_plus();
        let frame = choose_apex_and_frame(&set).unwrap();
        let map = build_map(&set, &frame).unwrap();
        for (a, b) in [(1, 3), (-7, 2), (5, 9), (0, 1), (11, -4)] {
            let p = Point::new(rat(a, 3), rat(b, 7));
            if let Ok(q) = map.apply(&p) {
                assert_eq!(map.apply_inverse(&q).unwrap(), p);
            }
        }
    }

    #[test]
    fn convex_quadrilateral_leaves_a_triangle() {
        let set = PointSet::from_ints(&[(0, 0), (3, 1), (1, 3), (4, 4)]);
        let report = verify_reduction(&set, 4).unwrap();
        assert_eq!(report.image.len(), 3);
        assert!(report.caps_checked + report.cups_checked >= 1);
    }

    #[test]
    fn rejects_small_sets() {
        let set = PointSet::from_ints(&[(0, 0), (1, 2), (3, 1)]);
        assert!(matches!(choose_apex_and_frame(&set), Err(Error::Domain(_))));
    }
}
