//! Brute-force oracles written without the library's predicates, used to
//! cross-check its enumerations and LP verdicts at small sizes.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use fliplab::regularity::{is_regular_triangulation, triangulation_system, Condition};
use fliplab::{PointSet, Triangulation};

pub type EdgeSet = BTreeSet<(usize, usize)>;
/// A plane graph as (vertex set, edge set), edges with `lo < hi`.
pub type Shape = (BTreeSet<usize>, EdgeSet);

pub fn xy(ps: &PointSet, i: usize) -> (i128, i128) {
    let p = ps.point(i);
    (p.x as i128, p.y as i128)
}

/// Twice the signed area of `abc`.
pub fn area2(ps: &PointSet, a: usize, b: usize, c: usize) -> i128 {
    let (a, b, c) = (xy(ps, a), xy(ps, b), xy(ps, c));
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Proper crossing of segments with four distinct endpoints. Segments that
/// share an endpoint never cross in general position.
pub fn crosses(ps: &PointSet, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let s = |x: i128| x.signum();
    s(area2(ps, a, b, c)) * s(area2(ps, a, b, d)) < 0 && s(area2(ps, c, d, a)) * s(area2(ps, c, d, b)) < 0
}

/// Points with every other point strictly on one side of some line through
/// them and a second point.
pub fn brute_hull(ps: &PointSet) -> BTreeSet<usize> {
    let n = ps.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && (0..n).filter(|&k| k != i && k != j).all(|k| area2(ps, i, j, k) > 0) {
                out.insert(i);
                out.insert(j);
            }
        }
    }
    out
}

/// Every maximal non-crossing set of segments on the points `pts`.
pub fn brute_triangulations_of(ps: &PointSet, pts: &[usize]) -> Vec<EdgeSet> {
    let mut segs = Vec::new();
    for (k, &a) in pts.iter().enumerate() {
        for &b in &pts[k + 1..] {
            segs.push((a.min(b), a.max(b)));
        }
    }
    let m = segs.len();
    assert!(m <= 64, "too many segments for a bitmask");
    let conflict: Vec<u64> = (0..m)
        .map(|i| (0..m).filter(|&j| crosses(ps, segs[i], segs[j])).fold(0u64, |acc, j| acc | 1 << j))
        .collect();
    let mut out = Vec::new();
    fn rec(i: usize, chosen: u64, conflict: &[u64], segs: &[(usize, usize)], out: &mut Vec<EdgeSet>) {
        if i == segs.len() {
            // Maximal: every left-out segment crosses a chosen one.
            let maximal = (0..segs.len()).all(|j| chosen >> j & 1 == 1 || conflict[j] & chosen != 0);
            if maximal {
                out.push((0..segs.len()).filter(|&j| chosen >> j & 1 == 1).map(|j| segs[j]).collect());
            }
            return;
        }
        if conflict[i] & chosen == 0 {
            rec(i + 1, chosen | 1 << i, conflict, segs, out);
        }
        rec(i + 1, chosen, conflict, segs, out);
    }
    rec(0, 0, &conflict, &segs, &mut out);
    out
}

pub fn brute_full_triangulations(ps: &PointSet) -> BTreeSet<EdgeSet> {
    let all: Vec<usize> = (0..ps.len()).collect();
    brute_triangulations_of(ps, &all).into_iter().collect()
}

/// Partial triangulations as the union, over vertex sets containing the
/// hull, of the full triangulations of that subset.
pub fn brute_partial_triangulations(ps: &PointSet) -> BTreeSet<Shape> {
    let hull = brute_hull(ps);
    let inner: Vec<usize> = (0..ps.len()).filter(|i| !hull.contains(i)).collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << inner.len() {
        let mut v = hull.clone();
        v.extend(inner.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p));
        let pts: Vec<usize> = v.iter().copied().collect();
        for e in brute_triangulations_of(ps, &pts) {
            out.insert((v.clone(), e));
        }
    }
    out
}

pub fn shape_of(vertices: &BTreeSet<usize>, edges: impl IntoIterator<Item = fliplab::Edge>) -> Shape {
    (vertices.clone(), edges.into_iter().map(|e| (e.lo(), e.hi())).collect())
}

/// Whether the neighbours of every vertex leave no angular gap of at least
/// π, apart from the exterior gap at hull vertices.
fn all_angles_convex(ps: &PointSet, hull: &BTreeSet<usize>, edges: &EdgeSet) -> bool {
    let mut nbrs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        nbrs.entry(a).or_default().push(b);
        nbrs.entry(b).or_default().push(a);
    }
    for (&v, ns) in &nbrs {
        // Sort by angle around v using half-plane then cross product.
        let (vx, vy) = xy(ps, v);
        let half = |u: usize| {
            let (x, y) = xy(ps, u);
            let (dx, dy) = (x - vx, y - vy);
            (dy < 0 || (dy == 0 && dx < 0)) as u8
        };
        let mut ns = ns.clone();
        ns.sort_by(|&a, &b| half(a).cmp(&half(b)).then_with(|| 0.cmp(&area2(ps, v, a, b))));
        let k = ns.len();
        let mut big_gaps = 0;
        for i in 0..k {
            let (a, b) = (ns[i], ns[(i + 1) % k]);
            // Gap from a counter-clockwise to b is at least π.
            if k == 1 || area2(ps, v, a, b) <= 0 {
                big_gaps += 1;
            }
        }
        let allowed = usize::from(hull.contains(&v));
        if big_gaps > allowed {
            return false;
        }
    }
    true
}

/// Every subdivision: non-crossing edge sets containing the hull cycle whose
/// bounded regions are convex, with any choice of bystanders among the
/// points without edges.
pub fn brute_subdivisions(ps: &PointSet) -> BTreeSet<Shape> {
    let n = ps.len();
    let hull = brute_hull(ps);
    let hull_cycle: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            let sides: BTreeSet<bool> = (0..n).filter(|&k| k != a && k != b).map(|k| area2(ps, a, b, k) > 0).collect();
            sides.len() == 1
        })
        .collect();
    let others: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|e| !hull_cycle.contains(e))
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << others.len() {
        let mut edges: EdgeSet = hull_cycle.iter().copied().collect();
        edges.extend(others.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e));
        let list: Vec<_> = edges.iter().copied().collect();
        let plane = list
            .iter()
            .enumerate()
            .all(|(i, &e)| list[i + 1..].iter().all(|&f| !crosses(ps, e, f)));
        if !plane || !all_angles_convex(ps, &hull, &edges) {
            continue;
        }
        let used: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        let free: Vec<usize> = (0..n).filter(|i| !used.contains(i)).collect();
        for b in 0u32..1 << free.len() {
            let mut v = used.clone();
            v.extend(free.iter().enumerate().filter(|(k, _)| b >> k & 1 == 1).map(|(_, &p)| p));
            out.insert((v, edges.clone()));
        }
    }
    out
}

/// Triangles of a triangulation: triples of pairwise adjacent vertices
/// with no vertex strictly inside.
pub fn triangles_of(ps: &PointSet, (v, e): &Shape) -> Vec<[usize; 3]> {
    let vs: Vec<usize> = v.iter().copied().collect();
    let has = |a: usize, b: usize| e.contains(&(a.min(b), a.max(b)));
    let mut out = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for (j, &b) in vs.iter().enumerate().skip(i + 1) {
            for &c in &vs[j + 1..] {
                if has(a, b) && has(b, c) && has(a, c) {
                    let inside = vs.iter().any(|&d| d != a && d != b && d != c && strictly_inside(ps, d, [a, b, c]));
                    if !inside {
                        out.push([a, b, c]);
                    }
                }
            }
        }
    }
    out
}

pub fn strictly_inside(ps: &PointSet, d: usize, [a, b, c]: [usize; 3]) -> bool {
    let s = [area2(ps, a, b, d), area2(ps, b, c, d), area2(ps, c, a, d)];
    s.iter().all(|&x| x > 0) || s.iter().all(|&x| x < 0)
}

/// Affine dependency of four points, signed so that the last coefficient
/// is positive. `Σ λ_i h_i > 0` says the last lifted point lies above the
/// plane spanned by the first three, or, for an edge `ab` with apexes
/// `c, d`, that the lift folds upward across `ab`.
pub fn dependency(ps: &PointSet, q: [usize; 4]) -> [i128; 4] {
    let minor = |skip: usize| {
        let o: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| q[k]).collect();
        area2(ps, o[0], o[1], o[2])
    };
    let mut l = [minor(0), -minor(1), minor(2), -minor(3)];
    if l[3] < 0 {
        l = l.map(|x| -x);
    }
    l
}

/// Strict conditions `Σ c_i h_i > 0` characterizing regularity of a
/// partial triangulation with every point lifted: one per inner edge and
/// one per skipped point. Keys name the condition.
pub fn regularity_conditions(ps: &PointSet, shape: &Shape) -> Vec<(String, Vec<(usize, i128)>)> {
    let tris = triangles_of(ps, shape);
    let hull = brute_hull(ps);
    let mut out = Vec::new();
    for &(a, b) in &shape.1 {
        let apexes: Vec<usize> = tris
            .iter()
            .filter(|t| t.contains(&a) && t.contains(&b))
            .map(|t| t.iter().copied().find(|&x| x != a && x != b).unwrap())
            .collect();
        match apexes[..] {
            [c, d] => {
                let l = dependency(ps, [a, b, c, d]);
                out.push((format!("edge {a}-{b}"), vec![(a, l[0]), (b, l[1]), (c, l[2]), (d, l[3])]));
            }
            [_] => assert!(hull.contains(&a) && hull.contains(&b), "only hull edges bound one triangle"),
            _ => panic!("edge {a}-{b} has {} incident triangles", apexes.len()),
        }
    }
    for p in (0..ps.len()).filter(|p| !shape.0.contains(p)) {
        let t = tris.iter().find(|t| strictly_inside(ps, p, **t)).expect("skipped point lies in a triangle");
        let l = dependency(ps, [t[0], t[1], t[2], p]);
        out.push((format!("point {p}"), vec![(t[0], l[0]), (t[1], l[1]), (t[2], l[2]), (p, l[3])]));
    }
    out
}

fn q(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Solves the square system `m x = rhs`, or `None` if singular.
fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let k = rhs.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
                let d = &f * &rhs[col];
                rhs[r] -= d;
            }
        }
    }
    Some((0..k).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Regularity by vertex enumeration. Heights are pinned to zero on the
/// three points of one triangle, which removes the affine gauge; then the
/// polyhedron `{h : every condition >= 1}` is pointed, so it is non-empty
/// iff one of its basic solutions is feasible.
pub fn regular_by_vertex_enumeration(ps: &PointSet, shape: &Shape) -> bool {
    let conds = regularity_conditions(ps, shape);
    let pinned = triangles_of(ps, shape)[0];
    let vars: Vec<usize> = (0..ps.len()).filter(|i| !pinned.contains(i)).collect();
    let pos: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let rows: Vec<Vec<BigRational>> = conds
        .iter()
        .map(|(_, f)| {
            let mut r = vec![BigRational::zero(); vars.len()];
            for &(i, c) in f {
                if let Some(&k) = pos.get(&i) {
                    r[k] += q(c);
                }
            }
            r
        })
        .collect();
    let k = vars.len();
    let feasible = |x: &[BigRational]| {
        rows.iter().all(|r| {
            let v: BigRational = r.iter().zip(x).map(|(a, b)| a * b).sum();
            v >= BigRational::one()
        })
    };
    if k == 0 {
        return feasible(&[]);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    if rows.len() < k {
        return false;
    }
    loop {
        let m: Vec<Vec<BigRational>> = idx.iter().map(|&i| rows[i].clone()).collect();
        if let Some(x) = solve(m, vec![BigRational::one(); k]) {
            if feasible(&x) {
                return true;
            }
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < rows.len() - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Triangles on the lower hull of the lifted points: triples whose plane has
/// every other point strictly above it.
pub fn lower_hull_triangles(ps: &PointSet, heights: &BTreeMap<usize, BigRational>) -> BTreeSet<[usize; 3]> {
    let n = ps.len();
    let h = |i: usize| heights[&i].clone();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if area2(ps, a, b, c) == 0 {
                    continue;
                }
                // Plane z = αx + βy + γ through the three lifted points.
                let m: Vec<Vec<BigRational>> = [a, b, c]
                    .iter()
                    .map(|&i| {
                        let (x, y) = xy(ps, i);
                        vec![q(x), q(y), BigRational::one()]
                    })
                    .collect();
                let coef = solve(m, vec![h(a), h(b), h(c)]).expect("non-collinear");
                let below_or_on = (0..n).filter(|&d| d != a && d != b && d != c).any(|d| {
                    let (x, y) = xy(ps, d);
                    let z = &coef[0] * q(x) + &coef[1] * q(y) + &coef[2];
                    h(d) <= z
                });
                if !below_or_on {
                    out.insert([a, b, c]);
                }
            }
        }
    }
    out
}

/// Checks a claimed infeasibility certificate against conditions computed
/// here: nonnegative weights, not all zero, whose combination vanishes.
pub fn certificate_refutes(ps: &PointSet, shape: &Shape, weights: &BTreeMap<String, BigRational>) -> bool {
    let conds = regularity_conditions(ps, shape);
    if weights.values().any(|w| w.is_negative()) || weights.values().all(|w| w.is_zero()) {
        return false;
    }
    let mut total = vec![BigRational::zero(); ps.len()];
    for (name, form) in &conds {
        let Some(w) = weights.get(name) else { continue };
        for &(i, c) in form {
            total[i] += w * q(c);
        }
    }
    weights.keys().all(|k| conds.iter().any(|(n, _)| n == k)) && total.iter().all(Zero::is_zero)
}

/// Vertex connectivity by trying every vertex set of size below the minimum
/// degree; returns the smallest separating size, capped at the minimum
/// degree (whose neighbourhood always separates a non-complete graph).
pub fn brute_connectivity(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let min_deg = adj.iter().map(Vec::len).min().unwrap_or(0);
    if min_deg + 1 == n {
        return min_deg;
    }
    let connected_without = |removed: &HashSet<usize>| {
        let Some(s) = (0..n).find(|v| !removed.contains(v)) else { return true };
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] && !removed.contains(&u) {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count + removed.len() == n
    };
    for size in 0..min_deg {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if !connected_without(&idx.iter().copied().collect()) {
                return size;
            }
            let mut i = size;
            let advanced = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                if idx[i] < n - size + i {
                    break true;
                }
            };
            if !advanced {
                break;
            }
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    min_deg
}

pub fn catalan(k: u64) -> u64 {
    // C_k = binom(2k, k) / (k + 1), built incrementally to stay exact.
    (0..k).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

/// LP verdict, witness and certificate for one triangulation, each checked
/// against the oracles. Returns the verdict.
pub fn check_regularity(ps: &PointSet, t: &Triangulation) -> Result<bool, String> {
    let shape = shape_of(t.vertices(), t.edges().iter().copied());
    let r = is_regular_triangulation(t);
    let expected = regular_by_vertex_enumeration(ps, &shape);
    if r.regular != expected {
        return Err(format!("LP says {}, vertex enumeration says {expected}", r.regular));
    }
    if r.regular {
        let w = r.witness.as_ref().ok_or("regular without witness")?;
        let got = lower_hull_triangles(ps, w.heights());
        let want: BTreeSet<[usize; 3]> = triangles_of(ps, &shape).into_iter().collect();
        if got != want {
            return Err(format!("witness lower hull {got:?}, triangulation {want:?}"));
        }
    } else {
        let c = r.certificate.as_ref().ok_or("non-regular without certificate")?;
        let sys = triangulation_system(t);
        let weights: BTreeMap<String, BigRational> = sys
            .strict
            .iter()
            .zip(&c.strict)
            .map(|((cond, _), y)| {
                let name = match cond {
                    Condition::Valley(e) => format!("edge {}-{}", e.lo(), e.hi()),
                    Condition::Above(p) => format!("point {p}"),
                };
                (name, y.clone())
            })
            .collect();
        if !certificate_refutes(ps, &shape, &weights) {
            return Err("certificate does not refute the oracle's conditions".into());
        }
    }
    Ok(r.regular)
}
