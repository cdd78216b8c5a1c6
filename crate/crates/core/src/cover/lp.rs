//! LP relaxation `min c·z  s.t.  Σ_{S∋e} z_S ≥ 1,  z ≥ 0` by dual simplex.
//!
//! The slack basis is dual feasible because every cost is positive, so the
//! dual simplex starts there and never needs a phase one. Pivoting follows
//! Bland's rule (smallest index) on both the leaving row and the entering
//! column. The basis inverse is dense and square in the number of
//! elements, which is small at the scales this crate targets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::SetCoverInstance;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct FractionalSolution {
    /// `z[i]` belongs to `sc.sets[i]`.
    pub z: Vec<Rational>,
    pub objective: Rational,
    /// Optimal duals, one per element.
    pub duals: Vec<Rational>,
}

impl FractionalSolution {
    pub fn z_by_id(&self, sc: &SetCoverInstance) -> Vec<(u64, Rational)> {
        sc.sets.iter().zip(&self.z).map(|(s, z)| (s.id, z.clone())).collect()
    }

    /// Coverage `Σ_{S∋e} z_S` of every element.
    pub fn coverage(&self, sc: &SetCoverInstance) -> Vec<Rational> {
        let mut cov = vec![Rational::zero(); sc.n_elements()];
        for (s, z) in sc.sets.iter().zip(&self.z) {
            if z.is_zero() {
                continue;
            }
            for e in s.members.iter() {
                cov[e] += z;
            }
        }
        cov
    }

    pub fn is_feasible(&self, sc: &SetCoverInstance) -> bool {
        self.z.iter().all(|z| !z.is_negative())
            && self.coverage(sc).iter().all(|c| *c >= Rational::one())
    }
}

/// Arithmetic needed by the simplex.
pub trait LpScalar: Clone + PartialOrd + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn below_zero(&self) -> bool;
    fn near_zero(&self) -> bool;

    /// `row·cols[j]` for each `j` in `which`.
    fn dots(row: &[Self], cols: &[Vec<usize>], which: &[usize]) -> Vec<Self> {
        which
            .iter()
            .map(|&j| cols[j].iter().fold(Self::nil(), |acc, &e| acc.add(&row[e])))
            .collect()
    }

    /// `(j, row·col_j)` for every column whose product is negative.
    fn negative_dots(row: &[Self], cols: &[Vec<usize>]) -> Vec<(usize, Self)> {
        cols.iter()
            .enumerate()
            .filter_map(|(j, col)| {
                let v = col.iter().fold(Self::nil(), |acc, &e| acc.add(&row[e]));
                v.below_zero().then_some((j, v))
            })
            .collect()
    }
}

impl LpScalar for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn below_zero(&self) -> bool {
        self.is_negative()
    }
    fn near_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    // Sum integer numerators over a common denominator instead of adding
    // fractions column by column.
    fn dots(row: &[Self], cols: &[Vec<usize>], which: &[usize]) -> Vec<Self> {
        let (denom, scaled) = common_denominator(row);
        which
            .par_iter()
            .map(|&j| Rational::new(int_dot(&scaled, &cols[j]), denom.clone()))
            .collect()
    }

    fn negative_dots(row: &[Self], cols: &[Vec<usize>]) -> Vec<(usize, Self)> {
        let (denom, scaled) = common_denominator(row);
        cols.par_iter()
            .enumerate()
            .filter_map(|(j, col)| {
                let sum = int_dot(&scaled, col);
                sum.is_negative().then(|| (j, Rational::new(sum, denom.clone())))
            })
            .collect()
    }
}

fn common_denominator(row: &[Rational]) -> (BigInt, Vec<Option<BigInt>>) {
    let denom = row.iter().fold(BigInt::one(), |acc, v| if v.is_zero() { acc } else { acc.lcm(v.denom()) });
    let scaled = row.iter().map(|v| (!v.is_zero()).then(|| v.numer() * (&denom / v.denom()))).collect();
    (denom, scaled)
}

fn int_dot(scaled: &[Option<BigInt>], col: &[usize]) -> BigInt {
    let mut sum = BigInt::zero();
    for &e in col {
        if let Some(v) = &scaled[e] {
            sum += v;
        }
    }
    sum
}

const F64_TOL: f64 = 1e-9;

impl LpScalar for f64 {
    fn nil() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn below_zero(&self) -> bool {
        *self < -F64_TOL
    }
    fn near_zero(&self) -> bool {
        self.abs() <= F64_TOL
    }
}

/// Raw simplex output in the scalar type.
pub struct LpOutcome<T> {
    pub z: Vec<T>,
    pub duals: Vec<T>,
    pub pivots: usize,
}

/// Variables `0..n` are the sets, `n..n+m` the surplus of each element.
///
/// Reduced costs are not stored; they are recomputed from the duals
/// `y = c_B B⁻¹` for the few columns that take part in a ratio test.
pub fn dual_simplex<T: LpScalar>(sc: &SetCoverInstance) -> LpOutcome<T> {
    let m = sc.n_elements();
    let n = sc.n_sets();
    let costs: Vec<T> = sc.sets.iter().map(|s| T::from_rational(&s.cost)).collect();
    let members: Vec<Vec<usize>> = sc.sets.iter().map(|s| s.members.iter().collect()).collect();

    // B = -I for the surplus basis
    let mut binv: Vec<Vec<T>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { T::unit().neg() } else { T::nil() }).collect())
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut is_basic = vec![false; n + m];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut xb: Vec<T> = vec![T::unit().neg(); m];
    let mut y: Vec<T> = vec![T::nil(); m];
    let mut pivots = 0;

    let reduced = |y: &[T], j: usize| -> T {
        if j < n {
            members[j].iter().fold(costs[j].clone(), |acc, &e| acc.sub(&y[e]))
        } else {
            y[j - n].clone()
        }
    };

    // leaving: primal-infeasible basic variable with the smallest index
    while let Some(r) = (0..m).filter(|&i| xb[i].below_zero()).min_by_key(|&i| basis[i]) {
        let row = &binv[r];
        let mut negative = T::negative_dots(row, &members);
        negative.extend((0..m).filter(|&i| row[i].neg().below_zero()).map(|i| (n + i, row[i].neg())));

        negative.retain(|(j, _)| !is_basic[*j]);
        let set_cols: Vec<usize> = negative.iter().map(|(j, _)| *j).filter(|&j| j < n).collect();
        let mut ydots = T::dots(&y, &members, &set_cols).into_iter();
        let mut enter: Option<(usize, T, T)> = None;
        for (j, a) in negative {
            let d = if j < n { costs[j].sub(&ydots.next().expect("one dot per set column")) } else { y[j - n].clone() };
            let ratio = d.div(&a.neg());
            let better = match &enter {
                None => true,
                Some((bj, best, _)) => {
                    if ratio.sub(best).near_zero() {
                        j < *bj
                    } else {
                        ratio < *best
                    }
                }
            };
            if better {
                enter = Some((j, ratio, a));
            }
        }
        let (q, _, aq) = enter.expect("covering LP is feasible, dual bounded");
        let dq = reduced(&y, q);

        // column u = B⁻¹ a_q
        let u: Vec<T> = (0..m)
            .map(|i| {
                if q < n {
                    members[q].iter().fold(T::nil(), |acc, &e| acc.add(&binv[i][e]))
                } else {
                    binv[i][q - n].neg()
                }
            })
            .collect();

        let step = dq.div(&aq);
        for (yi, ri) in y.iter_mut().zip(&binv[r]) {
            if !ri.near_zero() {
                *yi = yi.add(&step.mul(ri));
            }
        }

        let theta = xb[r].div(&aq);
        for i in 0..m {
            if i != r && !u[i].near_zero() {
                xb[i] = xb[i].sub(&theta.mul(&u[i]));
            }
        }
        xb[r] = theta;

        let pivot_row: Vec<T> = binv[r].iter().map(|v| v.div(&aq)).collect();
        for i in 0..m {
            if i != r && !u[i].near_zero() {
                let f = u[i].clone();
                for (cell, p) in binv[i].iter_mut().zip(&pivot_row) {
                    if !p.near_zero() {
                        *cell = cell.sub(&f.mul(p));
                    }
                }
            }
        }
        binv[r] = pivot_row;

        let leaving = basis[r];
        is_basic[leaving] = false;
        is_basic[q] = true;
        basis[r] = q;
        pivots += 1;
    }

    let mut z = vec![T::nil(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            z[b] = xb[i].clone();
        }
    }
    LpOutcome { z, duals: y, pivots }
}

/// Exact LP optimum with optimal duals.
pub fn lp_solve(sc: &SetCoverInstance) -> FractionalSolution {
    let out = dual_simplex::<Rational>(sc);
    let objective = sc.sets.iter().zip(&out.z).fold(Rational::zero(), |acc, (s, z)| acc + &s.cost * z);
    FractionalSolution { z: out.z, objective, duals: out.duals }
}

/// Floating-point LP value, for benchmarking only.
pub fn lp_solve_f64(sc: &SetCoverInstance) -> f64 {
    let out = dual_simplex::<f64>(sc);
    sc.sets.iter().zip(&out.z).map(|(s, z)| s.cost.to_f64().unwrap_or(f64::NAN) * z).sum()
}
