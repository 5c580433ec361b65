//! Deterministic point configurations: convex polygons, twisted double-gons,
//! the six-point mother example and seeded random sets.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{cross, in_triangle, orient, GeomError, Point, PointSet, COORD_BOUND};
use crate::graph::Edge;
use crate::subdivision::Subdivision;
use crate::triangulation::Triangulation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("no general-position sample after {0} retries")]
    ExhaustedRetries(usize),
}

/// A named point family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    ConvexGon { n: usize },
    TwistedDoubleGon { k: usize },
    MotherExample { concurrent: bool },
    Random { n: usize, seed: u64, bound: i64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<PointSet, GeneratorError> {
        match *self {
            GeneratorSpec::ConvexGon { n } => {
                if n < 3 {
                    return Err(GeneratorError::InvalidParameter(format!("n = {n} < 3")));
                }
                Ok(convex_gon(n))
            }
            GeneratorSpec::TwistedDoubleGon { k } => twisted_double_gon(k),
            GeneratorSpec::MotherExample { concurrent } => Ok(mother_example(concurrent)),
            GeneratorSpec::Random { n, seed, bound } => random_points(n, seed, bound),
        }
    }

    /// Number of extreme points the family promises, when fixed.
    pub fn declared_h(&self) -> Option<usize> {
        match *self {
            GeneratorSpec::ConvexGon { n } => Some(n),
            GeneratorSpec::TwistedDoubleGon { k } => Some(k),
            GeneratorSpec::MotherExample { .. } => Some(3),
            GeneratorSpec::Random { .. } => None,
        }
    }
}

fn circle_point(radius: f64, angle: f64) -> Point {
    Point::new(
        (radius * angle.cos()).round() as i64,
        (radius * angle.sin()).round() as i64,
    )
}

/// `n` points in convex position on a circle, counter-clockwise from angle 0.
///
/// Panics if `n < 3`.
pub fn convex_gon(n: usize) -> PointSet {
    assert!(n >= 3, "a convex polygon needs three points");
    let mut radius = 1_000_000.0;
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|i| circle_point(radius, 2.0 * PI * i as f64 / n as f64))
            .collect();
        if let Ok(ps) = PointSet::new(pts) {
            if ps.h() == n {
                return ps;
            }
        }
        // Rounding flattened some vertex; a larger circle restores it.
        radius *= 4.0;
        assert!(radius < COORD_BOUND as f64, "convex_gon({n}) does not fit the coordinate bound");
    }
}

/// Index layout of a twisted double-gon: `p_i = i`, `q_i = k + i`.
pub fn twisted_p(_k: usize, i: usize) -> usize {
    i
}

pub fn twisted_q(k: usize, i: usize) -> usize {
    k + i
}

/// Checks the defining conditions of a twisted double-gon under the index
/// layout above, and that `S□` has convex regions.
pub fn check_twisted(ps: &PointSet, k: usize) -> Result<(), String> {
    if ps.len() != 2 * k {
        return Err(format!("expected {} points", 2 * k));
    }
    // Extreme points are exactly p_0..p_{k-1}, numbered counter-clockwise.
    if ps.h() != k || (0..k).any(|i| !ps.is_extreme(i)) {
        return Err("extreme points are not p_0..p_{k-1}".into());
    }
    for i in 0..k {
        if ps.orient(i, (i + 1) % k, (i + 2) % k) <= 0 && k > 2 {
            return Err("hull numbering is not counter-clockwise".into());
        }
    }
    let p = |i: usize| ps.point(i % k);
    let q = |i: usize| ps.point(k + i % k);
    // Inner points in convex position, numbered along their hull.
    for i in 0..k {
        for j in 0..k {
            if j != i && j != (i + 1) % k && orient(q(i), q(i + 1), q(j)) <= 0 {
                return Err(format!("inner points not convex at q{i}"));
            }
        }
    }
    let extreme_without = |target: usize, removed: &[usize]| -> bool {
        let idx: Vec<usize> = (0..2 * k).filter(|i| !removed.contains(i)).collect();
        let sub = ps.subset(&idx).expect("subset of a general-position set");
        let pos = idx.iter().position(|&i| i == target).expect("target kept");
        sub.is_extreme(pos)
    };
    for i in 0..k {
        let qi = k + i;
        if !extreme_without(qi, &[i]) {
            return Err(format!("q{i} not extreme without p{i}"));
        }
        let prev = (i + k - 1) % k;
        if !extreme_without(qi, &[prev, k + prev]) {
            return Err(format!("q{i} not extreme without p{prev}, q{prev}"));
        }
        if !in_triangle(q(i), q(i + k - 1), p(i), q(i + 1)) {
            return Err(format!("q{i} not inside its triangle"));
        }
        // Region p_i p_{i+1} q_{i+1} q_i of S□ is strictly convex.
        let quad = [p(i), p(i + 1), q(i + 1), q(i)];
        if (0..4).any(|j| cross(quad[j], quad[(j + 1) % 4], quad[(j + 2) % 4]) <= 0) {
            return Err(format!("region at p{i} is not convex"));
        }
    }
    Ok(())
}

/// A twisted double-gon of `2k` points: `p_i` on a circle, `q_i` on a
/// smaller circle rotated clockwise.
///
/// Radius ratio and rotation come from a fixed grid scan; the middle passing
/// grid point is used, so the choice does not sit on a condition boundary.
pub fn twisted_double_gon(k: usize) -> Result<PointSet, GeneratorError> {
    if k < 3 {
        return Err(GeneratorError::InvalidParameter(format!("k = {k} < 3")));
    }
    const R: f64 = 10_000.0;
    let build = |ratio: f64, twist: f64| -> Option<PointSet> {
        let step = 2.0 * PI / k as f64;
        let mut pts: Vec<Point> = (0..k).map(|i| circle_point(R, step * i as f64)).collect();
        pts.extend((0..k).map(|i| circle_point(ratio * R, step * (i as f64 - twist))));
        let ps = PointSet::new(pts).ok()?;
        check_twisted(&ps, k).ok()?;
        Some(ps)
    };
    let mut good = Vec::new();
    for ratio in (30..100).step_by(2) {
        for twist in (2..100).step_by(4) {
            let (ratio, twist) = (ratio as f64 / 100.0, twist as f64 / 100.0);
            if build(ratio, twist).is_some() {
                good.push((ratio, twist));
            }
        }
    }
    if good.is_empty() {
        return Err(GeneratorError::ConstructionFailed(format!(
            "no grid point realizes a twisted double-gon with k = {k}"
        )));
    }
    let (ratio, twist) = good[good.len() / 2];
    Ok(build(ratio, twist).expect("grid point passed"))
}

/// `S□`: hull edges, spokes `q_i p_i` and the inner cycle `q_i q_{i+1}`.
pub fn twisted_square_subdivision(base: Arc<PointSet>) -> Subdivision {
    let k = base.len() / 2;
    let mut edges: BTreeSet<Edge> = base.hull_edges().into_iter().map(|(a, b)| Edge::new(a, b)).collect();
    for i in 0..k {
        edges.insert(Edge::new(i, k + i));
        edges.insert(Edge::new(k + i, k + (i + 1) % k));
    }
    let v = (0..base.len()).collect();
    Subdivision::new(base, v, edges).expect("S□ is a subdivision")
}

// Outer triangle p_0 p_1 p_2 and an inner triangle q_0 q_1 q_2; in the
// concurrent variant q_i is the midpoint of p_i and the centroid, so the
// lines p_i q_i meet at the centroid.
const MOTHER_CONCURRENT: [[i64; 2]; 6] = [[0, 0], [600, 0], [0, 600], [100, 100], [400, 100], [100, 400]];
// Same order type with q_2 moved off the line through p_2 and the centroid.
const MOTHER_SKEW: [[i64; 2]; 6] = [[0, 0], [600, 0], [0, 600], [100, 100], [400, 100], [130, 400]];

pub fn mother_example(concurrent: bool) -> PointSet {
    let raw = if concurrent { MOTHER_CONCURRENT } else { MOTHER_SKEW };
    PointSet::new(raw.iter().map(|&c| Point::from(c)).collect()).expect("frozen constants are valid")
}

/// Determinant of the three lines `p_i q_i`; zero iff they are concurrent.
pub fn mother_concurrency_det(ps: &PointSet) -> i128 {
    let line = |a: Point, b: Point| -> [i128; 3] {
        let (ax, ay, bx, by) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
        [ay - by, bx - ax, ax * by - ay * bx]
    };
    let l: Vec<[i128; 3]> = (0..3).map(|i| line(ps.point(i), ps.point(3 + i))).collect();
    l[0][0] * (l[1][1] * l[2][2] - l[1][2] * l[2][1]) - l[0][1] * (l[1][0] * l[2][2] - l[1][2] * l[2][0])
        + l[0][2] * (l[1][0] * l[2][1] - l[1][1] * l[2][0])
}

fn mother_graph(base: &Arc<PointSet>, extra: [(usize, usize); 3], inner: bool) -> (BTreeSet<usize>, BTreeSet<Edge>) {
    let mut edges: BTreeSet<Edge> = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)]
        .into_iter()
        .chain(extra)
        .map(|(a, b)| Edge::new(a, b))
        .collect();
    if inner {
        edges.extend([Edge::new(3, 4), Edge::new(4, 5), Edge::new(5, 3)]);
    }
    ((0..base.len()).collect(), edges)
}

/// Hull, spokes `p_i q_i` and the inner triangle: three quadrilaterals and
/// a triangle, slack 3.
pub fn mother_subdivision(base: Arc<PointSet>) -> Subdivision {
    let (v, e) = mother_graph(&base, [(3, 4), (4, 5), (5, 3)], false);
    Subdivision::new(base, v, e).expect("mother subdivision is valid")
}

/// Refinement of the mother subdivision by the diagonals `p_i q_{i+1}`.
pub fn mother_t_prime(base: Arc<PointSet>) -> Triangulation {
    let (v, e) = mother_graph(&base, [(0, 4), (1, 5), (2, 3)], true);
    Triangulation::new(base, v, e).expect("T' is a triangulation")
}

/// Refinement of the mother subdivision by the diagonals `p_{i+1} q_i`.
pub fn mother_t_double_prime(base: Arc<PointSet>) -> Triangulation {
    let (v, e) = mother_graph(&base, [(1, 3), (2, 4), (0, 5)], true);
    Triangulation::new(base, v, e).expect("T'' is a triangulation")
}

/// Orientation of every triple, in lexicographic triple order.
pub fn order_type(ps: &PointSet) -> Vec<i32> {
    let n = ps.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(ps.orient(i, j, k));
            }
        }
    }
    out
}

/// Per-point sampling budget of `random_points`.
/// A triangle with one point near its centroid: every inner edge is a
/// locked spoke, so no edge flips.
pub fn triangle_with_center() -> PointSet {
    PointSet::new(vec![Point::new(0, 0), Point::new(90, 0), Point::new(0, 90), Point::new(30, 31)])
        .expect("frozen constants are valid")
}

pub const RANDOM_RETRIES: usize = 100;

/// `n` integer points in `[0, bound]²`, each resampled until it keeps the
/// set in general position. Deterministic in `(n, seed, bound)`.
pub fn random_points(n: usize, seed: u64, bound: i64) -> Result<PointSet, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::InvalidParameter(format!("n = {n} < 3")));
    }
    if bound < n as i64 || bound > COORD_BOUND {
        return Err(GeneratorError::InvalidParameter(format!("bound {bound} outside [{n}, 2^30]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut placed = false;
        for _ in 0..RANDOM_RETRIES {
            let c = Point::new(rng.gen_range(0..=bound), rng.gen_range(0..=bound));
            let fits = pts.iter().all(|&a| a != c)
                && (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| orient(pts[i], pts[j], c) != 0));
            if fits {
                pts.push(c);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(GeneratorError::ExhaustedRetries(RANDOM_RETRIES));
        }
    }
    PointSet::new(pts).map_err(|e: GeomError| GeneratorError::ConstructionFailed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_gons_are_convex() {
        for n in 3..=12 {
            let ps = convex_gon(n);
            assert_eq!(ps.len(), n);
            assert_eq!(ps.h(), n);
        }
    }

    #[test]
    fn twisted_double_gons_satisfy_conditions() {
        for k in 3..=6 {
            let ps = twisted_double_gon(k).unwrap();
            assert_eq!(check_twisted(&ps, k), Ok(()));
            let s = twisted_square_subdivision(Arc::new(ps));
            assert_eq!(s.slack(), 2 * k - 3);
        }
        assert!(matches!(twisted_double_gon(2), Err(GeneratorError::InvalidParameter(_))));
    }

    #[test]
    fn mother_variants() {
        let a = mother_example(true);
        let b = mother_example(false);
        assert_eq!(mother_concurrency_det(&a), 0);
        assert_ne!(mother_concurrency_det(&b), 0);
        assert_eq!(order_type(&a), order_type(&b));
        for ps in [a, b] {
            let base = Arc::new(ps);
            assert_eq!(mother_subdivision(base.clone()).slack(), 3);
            assert_ne!(mother_t_prime(base.clone()), mother_t_double_prime(base));
        }
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_points(6, 42, 1000).unwrap();
        let b = random_points(6, 42, 1000).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_points(6, 43, 1000).unwrap());
        assert!(random_points(8, 7, 1_000_000).is_ok());
        assert!(matches!(random_points(10, 1, 5), Err(GeneratorError::InvalidParameter(_))));
    }
}
