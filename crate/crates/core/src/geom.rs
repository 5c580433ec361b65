//! Exact integer predicates and point sets in general position.
//!
//! Coordinates are bounded by `2^30` in absolute value so that every
//! orientation determinant fits in an `i128` without rounding.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible absolute coordinate value.
pub const COORD_BOUND: i64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn in_bounds(&self) -> bool {
        self.x.abs() <= COORD_BOUND && self.y.abs() <= COORD_BOUND
    }
}

impl From<[i64; 2]> for Point {
    fn from(a: [i64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [i64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("points {0}, {1}, {2} are collinear")]
    CollinearTriple(usize, usize, usize),
    #[error("point {0} exceeds the coordinate bound 2^30")]
    OutOfRange(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid point JSON: {0}")]
    Json(String),
}

/// Twice the signed area of triangle `pqr`.
pub fn cross(p: Point, q: Point, r: Point) -> i128 {
    debug_assert!(p.in_bounds() && q.in_bounds() && r.in_bounds());
    let (ax, ay) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
    let (bx, by) = ((r.x - p.x) as i128, (r.y - p.y) as i128);
    ax * by - ay * bx
}

/// `+1` if `r` is strictly left of the directed line `pq`, `-1` if strictly
/// right, `0` if the three points are collinear.
pub fn orient(p: Point, q: Point, r: Point) -> i32 {
    assert!(
        p.in_bounds() && q.in_bounds() && r.in_bounds(),
        "coordinate exceeds 2^30"
    );
    match cross(p, q, r).cmp(&0) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

fn on_closed_segment(a: Point, b: Point, p: Point) -> bool {
    cross(a, b, p) == 0
        && a.x.min(b.x) <= p.x
        && p.x <= a.x.max(b.x)
        && a.y.min(b.y) <= p.y
        && p.y <= a.y.max(b.y)
}

/// True iff closed segments `ab` and `cd` meet somewhere other than a single
/// shared endpoint.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let shared = [(a, c), (a, d), (b, c), (b, d)]
        .iter()
        .filter(|(u, v)| u == v)
        .count();
    if shared >= 2 {
        // Same segment as a set; callers never ask this.
        return true;
    }
    if shared == 1 {
        // Only a collinear overlap beyond the shared endpoint counts.
        let (s, x, y) = if a == c {
            (a, b, d)
        } else if a == d {
            (a, b, c)
        } else if b == c {
            (b, a, d)
        } else {
            (b, a, c)
        };
        return cross(s, x, y) == 0
            && ((x.x - s.x) as i128 * (y.x - s.x) as i128
                + (x.y - s.y) as i128 * (y.y - s.y) as i128)
                > 0;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_closed_segment(a, b, c))
        || (o2 == 0 && on_closed_segment(a, b, d))
        || (o3 == 0 && on_closed_segment(c, d, a))
        || (o4 == 0 && on_closed_segment(c, d, b))
}

/// Half-plane rank for angular sorting: directions in `[0, pi)` come first.
fn half(dx: i64, dy: i64) -> u8 {
    if dy > 0 || (dy == 0 && dx > 0) {
        0
    } else {
        1
    }
}

/// Compares the directions `a - c` and `b - c` by angle in `[0, 2pi)` measured
/// counter-clockwise from the positive x-axis.
pub fn angle_cmp(c: Point, a: Point, b: Point) -> Ordering {
    let (ax, ay) = (a.x - c.x, a.y - c.y);
    let (bx, by) = (b.x - c.x, b.y - c.y);
    half(ax, ay)
        .cmp(&half(bx, by))
        .then_with(|| 0.cmp(&cross(c, a, b)))
}

/// Strictly inside the triangle `abc` (either orientation).
pub fn in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    let s = [orient(a, b, p), orient(b, c, p), orient(c, a, p)];
    s.iter().all(|&x| x > 0) || s.iter().all(|&x| x < 0)
}

/// Strictly inside a convex polygon given counter-clockwise.
pub fn in_convex_polygon(p: Point, poly: &[Point]) -> bool {
    (0..poly.len()).all(|i| orient(poly[i], poly[(i + 1) % poly.len()], p) > 0)
}

/// Extreme points in counter-clockwise order, starting at the
/// lexicographically smallest point.
pub fn convex_hull(points: &[Point]) -> Result<Vec<usize>, GeomError> {
    if points.len() < 3 {
        return Err(GeomError::TooFewPoints(points.len()));
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by_key(|&i| (points[i], i));
    for w in idx.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(GeomError::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let chain = |order: &mut dyn Iterator<Item = usize>| -> Result<Vec<usize>, GeomError> {
        let mut h: Vec<usize> = Vec::new();
        for i in order {
            while h.len() >= 2 {
                let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
                match orient(points[a], points[b], points[i]) {
                    1 => break,
                    0 => {
                        let mut t = [a, b, i];
                        t.sort_unstable();
                        return Err(GeomError::CollinearTriple(t[0], t[1], t[2]));
                    }
                    _ => {
                        h.pop();
                    }
                }
            }
            h.push(i);
        }
        Ok(h)
    };
    let mut lower = chain(&mut idx.iter().copied())?;
    let mut upper = chain(&mut idx.iter().rev().copied())?;
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

/// An immutable point list in general position with its hull classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    hull: Vec<usize>,
    inner: Vec<usize>,
    // Position of each point along the hull cycle, if extreme.
    hull_pos: Vec<Option<usize>>,
}

/// Validates general position and classifies hull and inner points.
pub fn assert_general_position(points: &[Point]) -> Result<PointSet, GeomError> {
    PointSet::new(points.to_vec())
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, GeomError> {
        let n = points.len();
        if n < 3 {
            return Err(GeomError::TooFewPoints(n));
        }
        if let Some(i) = points.iter().position(|p| !p.in_bounds()) {
            return Err(GeomError::OutOfRange(i));
        }
        for i in 0..n {
            for j in i + 1..n {
                if points[i] == points[j] {
                    return Err(GeomError::DuplicatePoint(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if orient(points[i], points[j], points[k]) == 0 {
                        return Err(GeomError::CollinearTriple(i, j, k));
                    }
                }
            }
        }
        let hull = convex_hull(&points)?;
        let mut hull_pos = vec![None; n];
        for (k, &i) in hull.iter().enumerate() {
            hull_pos[i] = Some(k);
        }
        let inner = (0..n).filter(|&i| hull_pos[i].is_none()).collect();
        Ok(PointSet {
            points,
            hull,
            inner,
            hull_pos,
        })
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

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn hull(&self) -> &[usize] {
        &self.hull
    }

    pub fn inner(&self) -> &[usize] {
        &self.inner
    }

    pub fn h(&self) -> usize {
        self.hull.len()
    }

    pub fn is_extreme(&self, i: usize) -> bool {
        self.hull_pos[i].is_some()
    }

    /// True iff `{a, b}` is an edge of the convex hull polygon.
    pub fn is_hull_edge(&self, a: usize, b: usize) -> bool {
        match (self.hull_pos[a], self.hull_pos[b]) {
            (Some(x), Some(y)) => {
                let h = self.hull.len();
                (x + 1) % h == y || (y + 1) % h == x
            }
            _ => false,
        }
    }

    /// Hull edges as sorted index pairs, in hull order.
    pub fn hull_edges(&self) -> Vec<(usize, usize)> {
        let h = self.hull.len();
        (0..h)
            .map(|k| {
                let (a, b) = (self.hull[k], self.hull[(k + 1) % h]);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    pub fn orient(&self, a: usize, b: usize, c: usize) -> i32 {
        orient(self.points[a], self.points[b], self.points[c])
    }

    /// Sub-configuration on the given indices (kept in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet, GeomError> {
        PointSet::new(indices.iter().map(|&i| self.points[i]).collect())
    }

    /// Parses either the line format or the JSON form, by first character.
    pub fn parse(text: &str) -> Result<PointSet, GeomError> {
        PointSet::new(parse_points(text)?)
    }

    /// One point per line, `x y`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            s.push_str(&format!("{} {}\n", p.x, p.y));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PointsJson {
            points: self.points.clone(),
        })
        .expect("points serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct PointsJson {
    points: Vec<Point>,
}

/// Reads points from the line format (`x y`, `#` comments) or from
/// `{"points": [[x, y], ...]}`.
pub fn parse_points(text: &str) -> Result<Vec<Point>, GeomError> {
    if text.trim_start().starts_with('{') {
        let pj: PointsJson =
            serde_json::from_str(text).map_err(|e| GeomError::Json(e.to_string()))?;
        return Ok(pj.points);
    }
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GeomError::Parse {
                line: ln + 1,
                msg: format!("expected two integers, found {:?}", line),
            });
        }
        let parse = |s: &str| {
            s.parse::<i64>().map_err(|e| GeomError::Parse {
                line: ln + 1,
                msg: format!("{s:?}: {e}"),
            })
        };
        out.push(Point::new(parse(fields[0])?, parse(fields[1])?));
    }
    Ok(out)
}
