//! Height functions, compliant spaces, fold labelings and exact regularity
//! decisions.
//!
//! Two notions are kept apart. Subdivision regularity lifts only `V(S)` and
//! asks for a height function that is affine on every region (bystanders
//! included) and folds every inner edge upward. Triangulation regularity
//! lifts every point of the base set; inner edges must fold upward and each
//! skipped point must lie strictly above the lifted triangle containing it.
//!
//! Both reduce to a system of strict homogeneous linear forms plus linear
//! equalities, decided by maximizing a margin `t <= 1` with exact simplex.

pub mod lp;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{convex_hull, cross, Point, PointSet};
use crate::graph::{Edge, Rotation};
use crate::subdivision::Subdivision;
use crate::triangulation::Triangulation;
use lp::{Lp, LpOutcome, LpStats, Sense};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegularityError {
    #[error("height function is not affine on region {0}")]
    NotCompliant(usize),
    #[error("no height for point {0}")]
    MissingHeight(usize),
    #[error("no label for edge {0}")]
    MissingLabel(Edge),
    #[error("instance has {n} points, cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("malformed height function: {0}")]
    Json(String),
}

/// Exact heights on a set of point indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeightFunction {
    heights: BTreeMap<usize, BigRational>,
}

impl HeightFunction {
    pub fn new(heights: BTreeMap<usize, BigRational>) -> Self {
        HeightFunction { heights }
    }

    pub fn from_integers(pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        HeightFunction {
            heights: pairs
                .into_iter()
                .map(|(i, h)| (i, BigRational::from_integer(BigInt::from(h))))
                .collect(),
        }
    }

    /// `x² + y²` on the given points.
    pub fn paraboloid(ps: &PointSet, points: impl IntoIterator<Item = usize>) -> Self {
        HeightFunction {
            heights: points
                .into_iter()
                .map(|i| {
                    let p = ps.point(i);
                    let v = BigInt::from(p.x) * p.x + BigInt::from(p.y) * p.y;
                    (i, BigRational::from_integer(v))
                })
                .collect(),
        }
    }

    pub fn get(&self, i: usize) -> Option<&BigRational> {
        self.heights.get(&i)
    }

    pub fn heights(&self) -> &BTreeMap<usize, BigRational> {
        &self.heights
    }

    /// The same function scaled by a positive integer to integer values.
    pub fn integer_heights(&self) -> BTreeMap<usize, BigInt> {
        let l = self
            .heights
            .values()
            .fold(BigInt::one(), |acc, h| acc.lcm(h.denom()));
        self.heights
            .iter()
            .map(|(&i, h)| (i, (h * BigRational::from_integer(l.clone())).to_integer()))
            .collect()
    }

    /// JSON object mapping each index to `"num/den"`.
    pub fn to_json(&self) -> String {
        let m: BTreeMap<String, String> = self
            .heights
            .iter()
            .map(|(i, h)| (i.to_string(), format!("{}/{}", h.numer(), h.denom())))
            .collect();
        serde_json::to_string(&m).expect("height map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, RegularityError> {
        let m: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| RegularityError::Json(e.to_string()))?;
        let mut heights = BTreeMap::new();
        for (k, v) in m {
            let i: usize = k.parse().map_err(|_| RegularityError::Json(format!("bad index {k}")))?;
            let (n, d) = v.split_once('/').unwrap_or((v.as_str(), "1"));
            let n: BigInt = n.trim().parse().map_err(|_| RegularityError::Json(format!("bad value {v}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| RegularityError::Json(format!("bad value {v}")))?;
            if d.is_zero() {
                return Err(RegularityError::Json(format!("zero denominator in {v}")));
            }
            heights.insert(i, BigRational::new(n, d));
        }
        Ok(HeightFunction { heights })
    }
}

/// Coefficients of the lifted 4×4 determinant as a linear form in the
/// heights of rows `a, b, c, d`: `C_i = (-1)^i · cross(other three)`.
fn lift_form(ps: &PointSet, rows: [usize; 4]) -> [(usize, i128); 4] {
    let p: Vec<Point> = rows.iter().map(|&i| ps.point(i)).collect();
    let minor = |skip: usize| {
        let o: Vec<Point> = (0..4).filter(|&k| k != skip).map(|k| p[k]).collect();
        cross(o[0], o[1], o[2])
    };
    [
        (rows[0], minor(0)),
        (rows[1], -minor(1)),
        (rows[2], minor(2)),
        (rows[3], -minor(3)),
    ]
}

/// Linear form, positive iff lifted `d` is strictly above the plane through
/// lifted `a, b, c`.
fn above_form(ps: &PointSet, a: usize, b: usize, c: usize, d: usize) -> [(usize, i128); 4] {
    let s = if cross(ps.point(a), ps.point(b), ps.point(c)) > 0 { -1 } else { 1 };
    lift_form(ps, [a, b, c, d]).map(|(i, v)| (i, s * v))
}

fn eval_form(form: &[(usize, i128)], w: &HeightFunction) -> Result<BigRational, RegularityError> {
    let mut v = BigRational::zero();
    for &(i, c) in form {
        let h = w.get(i).ok_or(RegularityError::MissingHeight(i))?;
        v += h * BigRational::from_integer(BigInt::from(c));
    }
    Ok(v)
}

/// What a strict row asserts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// The inner edge folds upward.
    Valley(Edge),
    /// The skipped point lies above its lifted triangle.
    Above(usize),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Valley(e) => write!(f, "valley {e}"),
            Condition::Above(p) => write!(f, "above p{p}"),
        }
    }
}

/// Strict forms `> 0` and equality forms `= 0` over the lifted points.
#[derive(Clone, Debug)]
pub struct System {
    pub vars: Vec<usize>,
    pub strict: Vec<(Condition, Vec<(usize, i128)>)>,
    /// Equalities with the index of the region they come from.
    pub equal: Vec<(usize, Vec<(usize, i128)>)>,
}

impl System {
    fn dense(&self, form: &[(usize, i128)]) -> Vec<BigRational> {
        let pos: HashMap<usize, usize> = self.vars.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut v = vec![BigRational::zero(); self.vars.len()];
        for &(i, c) in form {
            v[pos[&i]] += BigRational::from_integer(BigInt::from(c));
        }
        v
    }
}

/// Inner-edge apexes in the regions on either side: `(left, right)`.
fn side_vertices(rot: &Rotation, e: &Edge) -> (usize, usize) {
    let (a, b) = (e.lo(), e.hi());
    (rot.ccw_before(b, a), rot.ccw_before(a, b))
}

/// Conditions for subdivision regularity over `V(S)`.
pub fn subdivision_system(s: &Subdivision) -> System {
    let ps = s.ps();
    let rot = s.graph().rotation();
    let strict = s
        .graph()
        .inner_edges()
        .map(|e| {
            let (l, r) = side_vertices(&rot, e);
            (Condition::Valley(*e), above_form(ps, e.lo(), e.hi(), l, r).to_vec())
        })
        .collect();
    let mut equal = Vec::new();
    for (k, r) in s.regions().iter().enumerate() {
        let (v0, v1, v2) = (r.boundary[0], r.boundary[1], r.boundary[2]);
        for &vj in r.boundary[3..].iter().chain(&r.bystanders) {
            equal.push((k, lift_form(ps, [v0, v1, v2, vj]).to_vec()));
        }
    }
    System {
        vars: s.vertices().iter().copied().collect(),
        strict,
        equal,
    }
}

/// Conditions for triangulation regularity over the whole base set.
pub fn triangulation_system(t: &Triangulation) -> System {
    let ps = t.ps();
    let rot = t.rotation();
    let mut strict: Vec<(Condition, Vec<(usize, i128)>)> = t
        .graph()
        .inner_edges()
        .map(|e| {
            let (l, r) = side_vertices(rot, e);
            (Condition::Valley(*e), above_form(ps, e.lo(), e.hi(), l, r).to_vec())
        })
        .collect();
    for p in t.skipped() {
        let [a, b, c] = t.containing_triangle(p).expect("skipped point lies in some triangle");
        strict.push((Condition::Above(p), above_form(ps, a, b, c, p).to_vec()));
    }
    System {
        vars: (0..ps.len()).collect(),
        strict,
        equal: Vec::new(),
    }
}

/// Exact coefficients `y >= 0` (summing to 1) on the strict forms and `z`
/// on the equalities whose combination vanishes identically, proving that
/// no height function satisfies the strict system.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasCertificate {
    pub strict: Vec<BigRational>,
    pub equal: Vec<BigRational>,
}

impl FarkasCertificate {
    /// Recomputes the combination with exact arithmetic.
    pub fn verify(&self, sys: &System) -> bool {
        if self.strict.len() != sys.strict.len() || self.equal.len() != sys.equal.len() {
            return false;
        }
        if self.strict.iter().any(|y| y.is_negative()) {
            return false;
        }
        if self.strict.iter().cloned().sum::<BigRational>() != BigRational::one() {
            return false;
        }
        let mut total = vec![BigRational::zero(); sys.vars.len()];
        let rows = sys
            .strict
            .iter()
            .map(|(_, f)| f)
            .zip(&self.strict)
            .chain(sys.equal.iter().map(|(_, f)| f).zip(&self.equal));
        for (form, coef) in rows {
            for (t, v) in total.iter_mut().zip(sys.dense(form)) {
                *t += coef * v;
            }
        }
        total.iter().all(Zero::is_zero)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let enc = |v: &[BigRational]| -> Vec<String> { v.iter().map(|q| format!("{}/{}", q.numer(), q.denom())).collect() };
        serde_json::json!({ "strict": enc(&self.strict), "equal": enc(&self.equal) })
    }
}

/// Searches for a Farkas certificate of the system by a feasibility LP.
pub fn farkas_certificate(sys: &System) -> Option<FarkasCertificate> {
    let ns = sys.strict.len();
    let ne = sys.equal.len();
    // Variables: y (ns), z+ (ne), z- (ne).
    let mut lp = Lp::new(ns + 2 * ne);
    let strict: Vec<Vec<BigRational>> = sys.strict.iter().map(|(_, f)| sys.dense(f)).collect();
    let equal: Vec<Vec<BigRational>> = sys.equal.iter().map(|(_, f)| sys.dense(f)).collect();
    for k in 0..sys.vars.len() {
        let mut row: Vec<BigRational> = strict.iter().map(|f| f[k].clone()).collect();
        row.extend(equal.iter().map(|f| f[k].clone()));
        row.extend(equal.iter().map(|f| -f[k].clone()));
        lp.add(row, Sense::Eq, BigRational::zero());
    }
    let mut norm = vec![BigRational::one(); ns];
    norm.resize(ns + 2 * ne, BigRational::zero());
    lp.add(norm, Sense::Eq, BigRational::one());
    match lp.solve().0 {
        LpOutcome::Optimal { x, .. } => Some(FarkasCertificate {
            strict: x[..ns].to_vec(),
            equal: (0..ne).map(|j| &x[ns + j] - &x[ns + ne + j]).collect(),
        }),
        _ => None,
    }
}

/// Outcome of the margin LP for a strict system.
#[derive(Clone, Debug)]
pub struct Decision {
    pub feasible: bool,
    /// Margin reached, in `[0, 1]`; zero exactly when infeasible.
    pub margin: BigRational,
    /// Heights per variable when feasible.
    pub witness: Option<HeightFunction>,
    pub stats: LpStats,
}

/// Maximizes, until positive, a margin `t <= 1` subject to every strict form `>= t` and every
/// equality; heights are taken nonnegative, which loses nothing because all
/// forms are invariant under adding a constant.
pub fn decide(sys: &System) -> Decision {
    let nv = sys.vars.len();
    let mut lp = Lp::new(nv + 1);
    let mut obj = vec![BigRational::zero(); nv + 1];
    obj[nv] = BigRational::one();
    lp.objective = obj;
    for (_, f) in &sys.strict {
        let mut row: Vec<BigRational> = sys.dense(f).into_iter().map(|v| -v).collect();
        row.push(BigRational::one());
        lp.add(row, Sense::Le, BigRational::zero());
    }
    for (_, f) in &sys.equal {
        let mut row = sys.dense(f);
        row.push(BigRational::zero());
        lp.add(row, Sense::Eq, BigRational::zero());
    }
    let mut cap = vec![BigRational::zero(); nv + 1];
    cap[nv] = BigRational::one();
    lp.add(cap, Sense::Le, BigRational::one());
    // Any point with a positive margin decides the question.
    let (out, stats) = lp.solve_until_above(&BigRational::zero());
    match out {
        LpOutcome::Optimal { x, value } | LpOutcome::Reached { x, value } => {
            let feasible = value.is_positive();
            let witness = feasible.then(|| {
                HeightFunction::new(sys.vars.iter().zip(&x).map(|(&i, h)| (i, h.clone())).collect())
            });
            Decision {
                feasible,
                margin: value,
                witness,
                stats,
            }
        }
        // The origin is feasible and t is capped.
        other => unreachable!("margin LP is feasible and bounded, got {other:?}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    /// Lifting of `V(S)` only, affine on regions.
    Subdivision,
    /// Lifting of every point of the base set.
    Triangulation,
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub notion: Notion,
    pub regular: bool,
    pub margin: BigRational,
    pub witness: Option<HeightFunction>,
    /// Whether the witness passed the independent lower-hull check.
    pub witness_verified: Option<bool>,
    pub certificate: Option<FarkasCertificate>,
    /// Whether the certificate recombines to zero exactly.
    pub certificate_verified: Option<bool>,
    pub stats: LpStats,
}

impl RegularityReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let witness: Option<serde_json::Value> = self
            .witness
            .as_ref()
            .map(|w| serde_json::from_str(&w.to_json()).expect("valid json"));
        serde_json::json!({
            "notion": self.notion,
            "regular": self.regular,
            "margin": format!("{}/{}", self.margin.numer(), self.margin.denom()),
            "witness": witness,
            "witness_verified": self.witness_verified,
            "certificate": self.certificate.as_ref().map(FarkasCertificate::to_json_value),
            "certificate_verified": self.certificate_verified,
            "lp": self.stats,
        })
    }
}

fn report(notion: Notion, sys: &System, check: impl Fn(&HeightFunction) -> bool) -> RegularityReport {
    let d = decide(sys);
    let (certificate, certificate_verified) = if d.feasible {
        (None, None)
    } else {
        let c = farkas_certificate(sys);
        let ok = c.as_ref().map(|c| c.verify(sys));
        (c, ok.or(Some(false)))
    };
    RegularityReport {
        notion,
        regular: d.feasible,
        margin: d.margin,
        witness_verified: d.witness.as_ref().map(&check),
        witness: d.witness,
        certificate,
        certificate_verified,
        stats: d.stats,
    }
}

/// Regularity of a subdivision, lifting only its own vertex set.
pub fn is_regular_subdivision(s: &Subdivision) -> RegularityReport {
    report(Notion::Subdivision, &subdivision_system(s), |w| {
        lower_hull_matches(s.ps(), s.vertices(), s.edges(), w)
    })
}

/// Regularity of a (partial) triangulation, lifting every point.
pub fn is_regular_triangulation(t: &Triangulation) -> RegularityReport {
    let all: BTreeSet<usize> = (0..t.ps().len()).collect();
    report(Notion::Triangulation, &triangulation_system(t), |w| {
        lower_hull_matches_lifted(t.ps(), &all, t.vertices(), t.edges(), w)
    })
}

/// Projection of the lower hull of the lifted points `lifted`: the points
/// lying on lower faces and the boundary edges of those faces.
///
/// Brute force over triples, independent of the LP: a triple spans a lower
/// face iff no lifted point lies strictly below its plane.
pub fn lower_hull_projection(
    ps: &PointSet,
    lifted: &BTreeSet<usize>,
    w: &HeightFunction,
) -> Result<(BTreeSet<usize>, BTreeSet<Edge>), RegularityError> {
    let pts: Vec<usize> = lifted.iter().copied().collect();
    let wi = w.integer_heights();
    for &i in &pts {
        if !wi.contains_key(&i) {
            return Err(RegularityError::MissingHeight(i));
        }
    }
    let side = |a: usize, b: usize, c: usize, d: usize| -> BigInt {
        above_form(ps, a, b, c, d)
            .iter()
            .map(|&(i, coef)| &wi[&i] * BigInt::from(coef))
            .sum()
    };
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    let m = pts.len();
    for x in 0..m {
        for y in x + 1..m {
            for z in y + 1..m {
                let (a, b, c) = (pts[x], pts[y], pts[z]);
                let mut on = vec![a, b, c];
                let mut lower = true;
                for &d in &pts {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    let s = side(a, b, c, d);
                    if s.is_negative() {
                        lower = false;
                        break;
                    }
                    if s.is_zero() {
                        on.push(d);
                    }
                }
                if lower {
                    on.sort_unstable();
                    faces.insert(on);
                }
            }
        }
    }
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for f in &faces {
        verts.extend(f.iter().copied());
        let coords: Vec<Point> = f.iter().map(|&i| ps.point(i)).collect();
        let hull = convex_hull(&coords).expect("face points in general position");
        for k in 0..hull.len() {
            edges.insert(Edge::new(f[hull[k]], f[hull[(k + 1) % hull.len()]]));
        }
    }
    Ok((verts, edges))
}

fn lower_hull_matches_lifted(
    ps: &PointSet,
    lifted: &BTreeSet<usize>,
    verts: &BTreeSet<usize>,
    edges: &BTreeSet<Edge>,
    w: &HeightFunction,
) -> bool {
    match lower_hull_projection(ps, lifted, w) {
        Ok((v, e)) => v == *verts && e == *edges,
        Err(_) => false,
    }
}

/// The lower hull of `verts` lifted by `w` projects to exactly `edges`.
pub fn lower_hull_matches(
    ps: &PointSet,
    verts: &BTreeSet<usize>,
    edges: &BTreeSet<Edge>,
    w: &HeightFunction,
) -> bool {
    lower_hull_matches_lifted(ps, verts, verts, edges, w)
}

/// Dimension and a basis of the space of height functions on `V(S)` that
/// are affine on every region.
pub fn compliant_dim(s: &Subdivision) -> (usize, Vec<HeightFunction>) {
    let sys = subdivision_system(s);
    let rows: Vec<Vec<BigRational>> = sys.equal.iter().map(|(_, f)| sys.dense(f)).collect();
    let basis = lp::nullspace(&rows, sys.vars.len());
    let hs = basis
        .into_iter()
        .map(|v| HeightFunction::new(sys.vars.iter().copied().zip(v).collect()))
        .collect::<Vec<_>>();
    (hs.len(), hs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fold {
    /// Upward fold, the lifted surface is locally convex.
    Valley,
    /// Downward fold.
    Mountain,
    Flat,
}

impl fmt::Display for Fold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fold::Valley => write!(f, "-"),
            Fold::Mountain => write!(f, "+"),
            Fold::Flat => write!(f, "0"),
        }
    }
}

pub type EdgeLabeling = BTreeMap<Edge, Fold>;

/// Fold of every inner edge under a height function that is affine on
/// every region of `s`.
pub fn omega_labeling(s: &Subdivision, w: &HeightFunction) -> Result<EdgeLabeling, RegularityError> {
    let sys = subdivision_system(s);
    for (region, f) in &sys.equal {
        if !eval_form(f, w)?.is_zero() {
            return Err(RegularityError::NotCompliant(*region));
        }
    }
    let mut out = BTreeMap::new();
    for (c, f) in &sys.strict {
        let Condition::Valley(e) = c else { unreachable!("subdivision rows are valleys") };
        let v = eval_form(f, w)?;
        let fold = if v.is_positive() {
            Fold::Valley
        } else if v.is_negative() {
            Fold::Mountain
        } else {
            Fold::Flat
        };
        out.insert(*e, fold);
    }
    Ok(out)
}

/// First involved inner vertex whose labels are pointed: not all flat, and
/// some line through it strictly separates its mountain edges from its
/// valley edges. `None` means the labeling is valid.
pub fn valid_labeling_check(s: &Subdivision, labels: &EdgeLabeling) -> Result<Option<usize>, RegularityError> {
    for e in s.graph().inner_edges() {
        if !labels.contains_key(e) {
            return Err(RegularityError::MissingLabel(*e));
        }
    }
    let ps = s.ps();
    for v in s.involved() {
        let c = ps.point(v);
        // Mountain directions and reversed valley directions.
        let mut dirs: Vec<(i64, i64)> = Vec::new();
        for e in s.edges().iter().filter(|e| e.has(v)) {
            let o = ps.point(e.other(v));
            let d = (o.x - c.x, o.y - c.y);
            match labels[e] {
                Fold::Mountain => dirs.push(d),
                Fold::Valley => dirs.push((-d.0, -d.1)),
                Fold::Flat => {}
            }
        }
        if in_open_half_plane(&dirs) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Nonempty and contained in some open half-plane through the origin.
fn in_open_half_plane(dirs: &[(i64, i64)]) -> bool {
    if dirs.is_empty() {
        return false;
    }
    let o = Point::new(0, 0);
    let pt = |d: (i64, i64)| Point::new(d.0, d.1);
    let mut v: Vec<Point> = dirs.iter().map(|&d| pt(d)).collect();
    v.sort_by(|&a, &b| crate::geom::angle_cmp(o, a, b));
    // Merge equal directions.
    v.dedup_by(|a, b| cross(o, *a, *b) == 0 && (a.x as i128 * b.x as i128 + a.y as i128 * b.y as i128) > 0);
    if v.len() == 1 {
        return true;
    }
    // Some angular gap between cyclically consecutive directions exceeds π.
    (0..v.len()).any(|i| cross(o, v[i], v[(i + 1) % v.len()]) < 0)
}

/// A chain of perfect coarsenings from `s` up to the trivial subdivision,
/// found by depth-first search with memoized dead ends.
pub fn perfect_chain_to_trivial(s: &Subdivision, cap: usize) -> Result<Option<Vec<Subdivision>>, RegularityError> {
    let n = s.ps().len();
    if n > cap {
        return Err(RegularityError::CapExceeded { n, cap });
    }
    fn dfs(s: &Subdivision, dead: &mut BTreeSet<Vec<u8>>, path: &mut Vec<Subdivision>) -> bool {
        path.push(s.clone());
        if s.is_trivial() {
            return true;
        }
        for (_, t) in s.perfect_coarsenings() {
            let key = t.canonical_key();
            if dead.contains(&key) {
                continue;
            }
            if dfs(&t, dead, path) {
                return true;
            }
            dead.insert(key);
        }
        path.pop();
        false
    }
    let mut path = Vec::new();
    let mut dead = BTreeSet::new();
    Ok(dfs(s, &mut dead, &mut path).then_some(path))
}

/// The Delaunay triangulation, reached by flipping edges whose opposite
/// apex lies below the paraboloid plane of the other triangle until none
/// remain.
pub fn delaunay_triangulation(base: Arc<PointSet>) -> Triangulation {
    let all: Vec<usize> = (0..base.len()).collect();
    let w = HeightFunction::paraboloid(&base, all);
    let mut t = Triangulation::seed_full(base);
    loop {
        let bad = t.flippable_edges().into_iter().find(|e| {
            let (l, r) = t.apexes(e);
            let f = above_form(t.ps(), e.lo(), e.hi(), l, r);
            eval_form(&f, &w).expect("heights on all points").is_negative()
        });
        match bad {
            Some(e) => t = t.edge_flip(&e).expect("flippable"),
            None => return t,
        }
    }
}
