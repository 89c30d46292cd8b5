//! Exact rational planar primitives.
//!
//! Every coordinate is a [`Rational`]; predicates never round. Point sets are
//! kept sorted by `x` (ties by `y`), and every index handed out by the rest of
//! the crate refers to that order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result, ValidationError};
use crate::predicates::OrientTable;

pub type Rational = BigRational;

/// Parses an integer or `p/q` literal.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| format!("bad numerator in {text:?}"))?;
            let den = BigInt::from_str(den.trim()).map_err(|_| format!("bad denominator in {text:?}"))?;
            if den.is_zero() {
                return Err(format!("zero denominator in {text:?}"));
            }
            Ok(Rational::new(num, den))
        }
        None => BigInt::from_str(text)
            .map(Rational::from_integer)
            .map_err(|_| format!("bad number {text:?}")),
    }
}

/// Canonical `p/q` (or `p` for integers) string.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn reflect_y(&self) -> Point {
        Point::new(self.x.clone(), -self.y.clone())
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational(&self.x), format_rational(&self.y)].serialize(serializer)
    }
}

/// Points sorted by increasing `x`, ties by increasing `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(mut points: Vec<Point>) -> Self {
        points.sort();
        PointSet { points }
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Self {
        PointSet::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// The sub-point-set at the given indices (re-sorted, so indices shift).
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet::new(indices.iter().map(|&i| self.points[i].clone()).collect())
    }

    /// Mirror image in the x-axis. The x-order is unchanged, so indices carry over.
    pub fn reflect_y(&self) -> PointSet {
        PointSet::new(self.points.iter().map(Point::reflect_y).collect())
    }

    pub fn has_distinct_x(&self) -> bool {
        self.points.windows(2).all(|w| w[0].x != w[1].x)
    }

    pub fn coords(&self, indices: &[usize]) -> Vec<Point> {
        indices.iter().map(|&i| self.points[i].clone()).collect()
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(serializer)
    }
}

impl FromIterator<Point> for PointSet {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        PointSet::new(iter.into_iter().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    /// Counterclockwise turn.
    Left,
    /// Clockwise turn.
    Right,
    Collinear,
}

impl Orientation {
    pub fn from_sign(sign: Ordering) -> Self {
        match sign {
            Ordering::Greater => Orientation::Left,
            Ordering::Less => Orientation::Right,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Sign of the cross product `(q - p) x (r - p)`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    let lhs = (&q.x - &p.x) * (&r.y - &p.y);
    let rhs = (&q.y - &p.y) * (&r.x - &p.x);
    Orientation::from_sign(lhs.cmp(&rhs))
}

pub fn slope(p: &Point, q: &Point) -> Result<Rational> {
    if p.x == q.x {
        return Err(Error::VerticalPair(Box::new(p.clone()), Box::new(q.clone())));
    }
    Ok((&q.y - &p.y) / (&q.x - &p.x))
}

/// Checks duplicates, collinear triples and shared x-coordinates, in that order.
pub fn validate(set: &PointSet) -> std::result::Result<(), ValidationError> {
    check_general_position(set)?;
    for (i, w) in set.points.windows(2).enumerate() {
        if w[0].x == w[1].x {
            return Err(ValidationError::DuplicateX { first: i, second: i + 1 });
        }
    }
    Ok(())
}

/// Like [`validate`] but allows shared x-coordinates.
pub fn check_general_position(set: &PointSet) -> std::result::Result<(), ValidationError> {
    for (i, w) in set.points.windows(2).enumerate() {
        if w[0] == w[1] {
            return Err(ValidationError::DuplicatePoint { first: i, second: i + 1 });
        }
    }
    let table = OrientTable::new(set);
    let n = set.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if table.orient(i, j, k) == Orientation::Collinear {
                    return Err(ValidationError::CollinearTriple { p: i, q: j, r: k });
                }
            }
        }
    }
    Ok(())
}

/// Shears `x' = x + eps * y` so all x-coordinates become distinct.
///
/// Returns the input unchanged with `eps = 0` when x is already distinct.
/// A shear has determinant one, so triple orientations are preserved; the
/// result is still re-validated and `eps` halved until both checks pass.
pub fn shear_distinct_x(set: &PointSet) -> (PointSet, Rational) {
    if set.has_distinct_x() {
        return (set.clone(), Rational::zero());
    }
    let pts = set.points();
    let mut eps = Rational::one();
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            if p.x != q.x {
                let bound = (&q.x - &p.x).abs() / (Rational::one() + (&q.y - &p.y).abs());
                if bound < eps {
                    eps = bound;
                }
            }
        }
    }
    eps /= int(2);
    let original = OrientTable::new(set);
    loop {
        let sheared: Vec<Point> =
            pts.iter().map(|p| Point::new(&p.x + &eps * &p.y, p.y.clone())).collect();
        // Keep the pre-shear indexing so orientations compare index by index.
        let image = OrientTable::from_points(&sheared);
        let distinct = {
            let mut xs: Vec<&Rational> = sheared.iter().map(|p| &p.x).collect();
            xs.sort();
            xs.windows(2).all(|w| w[0] != w[1])
        };
        let n = pts.len();
        let preserved = distinct
            && (0..n).all(|i| {
                (i + 1..n).all(|j| (j + 1..n).all(|k| original.orient(i, j, k) == image.orient(i, j, k)))
            });
        if preserved {
            return (PointSet::new(sheared), eps);
        }
        eps /= int(2);
    }
}

/// Convex hull vertices in counterclockwise order, starting from the
/// lowest-leftmost point. Collinear boundary points are dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && orientation(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Orientation::Left
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && orientation(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Orientation::Left
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// True iff every point is a vertex of the convex hull of the collection.
pub fn in_convex_position(points: &[Point]) -> bool {
    if points.len() <= 3 {
        // Three distinct non-collinear points always qualify; callers pass
        // validated input.
        return true;
    }
    convex_hull(points).len() == points.len()
}

/// A parsed point with its 1-based source line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPoint {
    pub point: Point,
    pub line: usize,
}

/// Parses the point-set text format: one `x y` pair per line, `#` comments,
/// blank lines ignored. Fields are integers or `p/q`.
pub fn parse_point_set(text: &str) -> Result<Vec<ParsedPoint>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let x = parse_rational(fields[0]).map_err(|message| Error::Parse { line, message })?;
        let y = parse_rational(fields[1]).map_err(|message| Error::Parse { line, message })?;
        out.push(ParsedPoint { point: Point::new(x, y), line });
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

/// Renders a point set, each header line prefixed with `# `.
pub fn format_point_set(set: &PointSet, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for p in set.iter() {
        out.push_str(&format!("{} {}\n", format_rational(&p.x), format_rational(&p.y)));
    }
    out
}
