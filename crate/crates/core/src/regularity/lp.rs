//! Dense two-phase simplex, exact and fraction-free, with Bland's rule.
//!
//! Variables are nonnegative. Bland's rule (lowest eligible index enters,
//! lowest basic index breaks ratio ties) rules out cycling, so every call
//! terminates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub sense: Sense,
    pub rhs: BigRational,
}

/// Maximize `objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct Lp {
    pub num_vars: usize,
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    /// A feasible point beating the early-stop threshold; not necessarily
    /// optimal.
    Reached { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct LpStats {
    pub rows: usize,
    pub cols: usize,
    pub pivots: usize,
}

impl Lp {
    pub fn new(num_vars: usize) -> Self {
        Lp {
            num_vars,
            objective: vec![BigRational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, sense: Sense, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, sense, rhs });
    }

    pub fn solve(&self) -> (LpOutcome, LpStats) {
        Tableau::build(self).run(&self.objective, None)
    }

    /// Like `solve`, but returns the first basic feasible point whose
    /// objective exceeds `threshold`, reported as `Reached`. Only a zero
    /// threshold is supported.
    pub fn solve_until_above(&self, threshold: &BigRational) -> (LpOutcome, LpStats) {
        Tableau::build(self).run(&self.objective, Some(threshold))
    }
}

/// Integer-preserving tableau: the true tableau is `rows / d`, and every
/// division in a pivot is exact. Entries stay subdeterminants of the input,
/// which keeps them far smaller than reduced fractions would get.
struct Tableau {
    // rows[i] has `cols` coefficients followed by the right-hand side.
    rows: Vec<Vec<BigInt>>,
    basis: Vec<usize>,
    d: BigInt,
    cols: usize,
    num_vars: usize,
    first_artificial: usize,
    pivots: usize,
}

/// Integer multiple of a rational vector by the lcm of its denominators.
fn clear_denominators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let out = v
        .iter()
        .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    (out, l)
}

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let m = lp.constraints.len();
        // Integer rows with nonnegative right-hand sides.
        let norm: Vec<(Vec<BigInt>, Sense, BigInt)> = lp
            .constraints
            .iter()
            .map(|c| {
                let mut all = c.coeffs.clone();
                all.push(c.rhs.clone());
                let (mut ints, _) = clear_denominators(&all);
                let mut rhs = ints.pop().expect("rhs present");
                let mut sense = c.sense;
                if rhs.is_negative() {
                    ints.iter_mut().for_each(|a| *a = -&*a);
                    rhs = -rhs;
                    sense = match sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    };
                }
                (ints, sense, rhs)
            })
            .collect();
        let n_slack = norm.iter().filter(|c| c.1 != Sense::Eq).count();
        let n_art = norm.iter().filter(|c| c.1 != Sense::Le).count();
        let first_slack = lp.num_vars;
        let first_artificial = first_slack + n_slack;
        let cols = first_artificial + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (first_slack, first_artificial);
        for (coeffs, sense, rhs) in norm {
            let mut row = coeffs;
            row.resize(cols + 1, BigInt::zero());
            match sense {
                Sense::Le => {
                    row[s] = BigInt::one();
                    basis.push(s);
                    s += 1;
                }
                Sense::Ge => {
                    row[s] = -BigInt::one();
                    s += 1;
                    row[a] = BigInt::one();
                    basis.push(a);
                    a += 1;
                }
                Sense::Eq => {
                    row[a] = BigInt::one();
                    basis.push(a);
                    a += 1;
                }
            }
            row[cols] = rhs;
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            d: BigInt::one(),
            cols,
            num_vars: lp.num_vars,
            first_artificial,
            pivots: 0,
        }
    }

    /// Pivots on `(r, c)`, updating the extra row `red` alongside.
    fn pivot(&mut self, r: usize, c: usize, red: &mut [BigInt]) {
        self.pivots += 1;
        let p = self.rows[r][c].clone();
        let prow = self.rows[r].clone();
        let d = self.d.clone();
        let update = |row: &mut [BigInt]| {
            let f = row[c].clone();
            if f.is_zero() {
                for v in row.iter_mut() {
                    if !v.is_zero() {
                        *v = &*v * &p / &d;
                    }
                }
            } else {
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v = (&*v * &p - &f * pv) / &d;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row);
            }
        }
        update(red);
        self.basis[r] = c;
        self.d = p;
        if self.d.is_negative() {
            self.d = -&self.d;
            for row in self.rows.iter_mut() {
                row.iter_mut().for_each(|v| *v = -&*v);
            }
            red.iter_mut().for_each(|v| *v = -&*v);
        }
    }

    /// Reduced-cost row `d·cost_j - sum_i cost_{basis_i} rows_ij`; its last
    /// entry is `-d` times the objective value.
    fn reduced(&self, cost: &[BigInt]) -> Vec<BigInt> {
        let mut red: Vec<BigInt> = cost.iter().map(|c| c * &self.d).collect();
        red.push(BigInt::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (r, a) in red.iter_mut().zip(row) {
                if !a.is_zero() {
                    *r -= cb * a;
                }
            }
        }
        red
    }

    /// Maximizes `cost` over columns `< limit`; returns the final reduced
    /// row, or `None` if unbounded. Stops early once the objective is
    /// positive, when asked to.
    fn optimize(&mut self, cost: &[BigInt], limit: usize, stop_positive: bool) -> Option<Vec<BigInt>> {
        let mut red = self.reduced(cost);
        loop {
            if stop_positive && red[self.cols].is_negative() {
                return Some(red);
            }
            let Some(c) = (0..limit).find(|&j| red[j].is_positive()) else {
                return Some(red);
            };
            // Minimum ratio rhs_i / a_ic over a_ic > 0, lowest basic index on
            // ties; ratios compared by cross-multiplication.
            let mut best: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => {
                        let lhs = &row[self.cols] * &self.rows[b][c];
                        let rhs = &self.rows[b][self.cols] * &row[c];
                        lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[b])
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            let r = best?;
            self.pivot(r, c, &mut red);
        }
    }

    fn run(mut self, objective: &[BigRational], stop: Option<&BigRational>) -> (LpOutcome, LpStats) {
        let stats = |t: &Tableau| LpStats {
            rows: t.rows.len(),
            cols: t.cols,
            pivots: t.pivots,
        };
        if self.first_artificial < self.cols {
            let mut phase1 = vec![BigInt::zero(); self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = -BigInt::one();
            }
            let red = self.optimize(&phase1, self.cols, false).expect("phase one is bounded by zero");
            if red[self.cols].is_positive() {
                return (LpOutcome::Infeasible, stats(&self));
            }
            // Drive zero-valued artificials out of the basis; rows where
            // that is impossible are redundant.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(c) => {
                            let mut scratch = vec![BigInt::zero(); self.cols + 1];
                            self.pivot(r, c, &mut scratch);
                        }
                        None => {
                            self.rows.swap_remove(r);
                            self.basis.swap_remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        let (mut cost, scale) = clear_denominators(objective);
        cost.resize(self.cols, BigInt::zero());
        // Early stop is only supported at threshold zero, the one use.
        let stop_positive = match stop {
            Some(s) => {
                assert!(s.is_zero(), "early stop threshold must be zero");
                true
            }
            None => false,
        };
        let Some(red) = self.optimize(&cost, self.first_artificial, stop_positive) else {
            return (LpOutcome::Unbounded, stats(&self));
        };
        let den = BigRational::from_integer(self.d.clone());
        let mut x = vec![BigRational::zero(); self.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = BigRational::from_integer(self.rows[i][self.cols].clone()) / &den;
            }
        }
        let value = BigRational::new(-red[self.cols].clone(), &self.d * scale);
        let out = match stop {
            Some(s) if value > *s => LpOutcome::Reached { x, value },
            _ => LpOutcome::Optimal { x, value },
        };
        (out, stats(&self))
    }
}

/// Exact rank of a matrix by Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    row_echelon(rows).1.len()
}

/// Reduced row echelon form and its pivot columns.
pub fn row_echelon(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = &*v / &pv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, q) in row.iter_mut().zip(&prow) {
                    *v -= &f * q;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of the right nullspace of a matrix with `width` columns.
pub fn nullspace(rows: &[Vec<BigRational>], width: usize) -> Vec<Vec<BigRational>> {
    let (rref, pivots) = row_echelon(rows);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); width];
            v[f] = BigRational::one();
            for (row, &pc) in rref.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36.
        let mut lp = Lp::new(2);
        lp.objective = qs(&[3, 5]);
        lp.add(qs(&[1, 0]), Sense::Le, q(4));
        lp.add(qs(&[0, 2]), Sense::Le, q(12));
        lp.add(qs(&[3, 2]), Sense::Le, q(18));
        let (out, _) = lp.solve();
        assert_eq!(out, LpOutcome::Optimal { x: qs(&[2, 6]), value: q(36) });
    }

    #[test]
    fn equality_and_ge_rows() {
        // max -x - y, x + y = 3, x >= 1 -> value -3.
        let mut lp = Lp::new(2);
        lp.objective = qs(&[-1, -1]);
        lp.add(qs(&[1, 1]), Sense::Eq, q(3));
        lp.add(qs(&[1, 0]), Sense::Ge, q(1));
        match lp.solve().0 {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(-3));
                assert!(x[0] >= q(1));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::new(1);
        lp.add(qs(&[1]), Sense::Le, q(1));
        lp.add(qs(&[1]), Sense::Ge, q(2));
        assert_eq!(lp.solve().0, LpOutcome::Infeasible);
        let mut lp = Lp::new(2);
        lp.objective = qs(&[1, 0]);
        lp.add(qs(&[1, -1]), Sense::Le, q(1));
        assert_eq!(lp.solve().0, LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(2);
        lp.objective = qs(&[1, 0]);
        lp.add(qs(&[1, 1]), Sense::Eq, q(2));
        lp.add(qs(&[2, 2]), Sense::Eq, q(4));
        match lp.solve().0 {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(2)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn nullspace_of_plane() {
        let m = vec![qs(&[1, 1, 1])];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s: BigRational = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
        assert_eq!(rank(&[qs(&[1, 2]), qs(&[2, 4])]), 1);
    }
}
