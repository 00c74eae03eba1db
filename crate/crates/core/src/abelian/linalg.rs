//! Rational row reduction.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::RatMatrix;

pub type Q = BigRational;

/// Reduced row echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<Vec<Q>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn empty(ncols: usize) -> Self {
        Rref { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtracts multiples of basis rows so that every pivot coordinate of `v` is zero.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            axpy(&mut v, row, &-f);
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in the basis rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let coords: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        if self.contains(v) {
            Some(coords)
        } else {
            None
        }
    }

    /// Adds one vector, keeping the basis fully reduced. Returns whether the rank grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Q::one() / v[p].clone();
        v.iter_mut().for_each(|x| *x = x.clone() * inv.clone());
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                axpy(row, &v, &-f);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }
}

pub fn axpy(dst: &mut [Q], src: &[Q], f: &Q) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.clone() + f.clone() * s.clone();
        }
    }
}

/// Row space of a list of vectors of length `ncols`.
pub fn rref(vectors: &[Vec<Q>], ncols: usize) -> Rref {
    small::rref(vectors, ncols).unwrap_or_else(|| rref_big(vectors, ncols))
}

fn rref_big(vectors: &[Vec<Q>], ncols: usize) -> Rref {
    // Gaussian elimination column by column on a working copy.
    let mut work: Vec<Vec<Q>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let Some(pi) = work.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let mut prow = work.swap_remove(pi);
        let inv = Q::one() / prow[col].clone();
        prow.iter_mut().for_each(|x| *x = x.clone() * inv.clone());
        for r in work.iter_mut() {
            if !r[col].is_zero() {
                let f = r[col].clone();
                axpy(r, &prow, &-f);
            }
        }
        work.retain(|r| r.iter().any(|x| !x.is_zero()));
        rows.push(prow);
        pivots.push(col);
        if work.is_empty() {
            break;
        }
    }
    // back-substitute to reduce above pivots
    for k in (0..rows.len()).rev() {
        let p = pivots[k];
        let (head, tail) = rows.split_at_mut(k);
        let prow = &tail[0];
        for r in head.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                axpy(r, prow, &-f);
            }
        }
    }
    Rref { ncols, rows, pivots }
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(&m.row_vecs(), m.cols()).rank()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Q>> {
    let r = rref(&m.row_vecs(), m.cols());
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Q::zero(); n];
        v[free] = Q::one();
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            if !row[free].is_zero() {
                v[p] = -row[free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `m x = b`, if the system is consistent.
pub fn solve(m: &RatMatrix, b: &[Q]) -> Option<Vec<Q>> {
    let n = m.cols();
    let aug: Vec<Vec<Q>> = m
        .row_vecs()
        .into_iter()
        .zip(b)
        .map(|(mut r, bi)| {
            r.push(bi.clone());
            r
        })
        .collect();
    let r = rref(&aug, n + 1);
    if r.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in r.rows.iter().zip(&r.pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Solutions of `m x = b` for several right-hand sides in one elimination.
pub fn solve_many(m: &RatMatrix, bs: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.cols();
    let aug: Vec<Vec<Q>> = m
        .row_vecs()
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend(bs.iter().map(|b| b[i].clone()));
            r
        })
        .collect();
    let r = rref(&aug, n + bs.len());
    if r.pivots.last().is_some_and(|&p| p >= n) {
        return None;
    }
    Some(
        (0..bs.len())
            .map(|j| {
                let mut x = vec![Q::zero(); n];
                for (row, &p) in r.rows.iter().zip(&r.pivots) {
                    x[p] = row[n + j].clone();
                }
                x
            })
            .collect(),
    )
}

/// Column span of `m` as an [`Rref`] in the target space.
pub fn column_space(m: &RatMatrix) -> Rref {
    rref(&m.col_vecs(), m.rows())
}

/// Fraction-free elimination on primitive `i128` rows. Gives up on overflow;
/// the reduced echelon form is unique, so the result matches [`rref_big`].
mod small {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive, Zero};

    use super::{Rref, Q};

    fn primitive(v: &mut [i128]) {
        let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
        if g > 1 {
            v.iter_mut().for_each(|x| *x /= g);
        }
    }

    /// `r ← a·r − b·p`, then made primitive.
    fn combine(r: &mut [i128], a: i128, p: &[i128], b: i128) -> Option<()> {
        for (x, &y) in r.iter_mut().zip(p) {
            let ax = x.checked_mul(a)?;
            *x = if y == 0 { ax } else { ax.checked_sub(y.checked_mul(b)?)? };
        }
        primitive(r);
        Some(())
    }

    fn eliminate(r: &mut [i128], p: &[i128], col: usize) -> Option<()> {
        let (a, b) = (p[col], r[col]);
        let g = a.gcd(&b);
        combine(r, a / g, p, b / g)
    }

    fn to_ints(v: &[Q]) -> Option<Vec<i128>> {
        let mut d = BigInt::one();
        for x in v.iter().filter(|x| !x.is_zero()) {
            d = d.lcm(x.denom());
        }
        let mut out: Vec<i128> = Vec::with_capacity(v.len());
        for x in v {
            out.push(if x.is_zero() { 0 } else { (x.numer() * (&d / x.denom())).to_i64()? as i128 });
        }
        primitive(&mut out);
        Some(out)
    }

    pub fn rref(vectors: &[Vec<Q>], ncols: usize) -> Option<Rref> {
        let mut work: Vec<Vec<i128>> = Vec::with_capacity(vectors.len());
        for v in vectors {
            let r = to_ints(v)?;
            if r.iter().any(|&x| x != 0) {
                work.push(r);
            }
        }
        let mut rows: Vec<Vec<i128>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..ncols {
            // smallest pivot keeps the entries small
            let Some(pi) = (0..work.len()).filter(|&i| work[i][col] != 0).min_by_key(|&i| work[i][col].unsigned_abs())
            else {
                continue;
            };
            let prow = work.swap_remove(pi);
            for r in work.iter_mut() {
                if r[col] != 0 {
                    eliminate(r, &prow, col)?;
                }
            }
            work.retain(|r| r.iter().any(|&x| x != 0));
            rows.push(prow);
            pivots.push(col);
            if work.is_empty() {
                break;
            }
        }
        for k in (0..rows.len()).rev() {
            let p = pivots[k];
            let (head, tail) = rows.split_at_mut(k);
            for r in head.iter_mut() {
                if r[p] != 0 {
                    eliminate(r, &tail[0], p)?;
                }
            }
        }
        let rows = rows
            .into_iter()
            .zip(&pivots)
            .map(|(r, &p)| {
                let piv = BigInt::from(r[p]);
                r.into_iter().map(|x| if x == 0 { Q::zero() } else { Q::new(BigInt::from(x), piv.clone()) }).collect()
            })
            .collect();
        Some(Rref { ncols, rows, pivots })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::matrix::{rat, ExactMatrix};

    #[test]
    fn nullspace_of_rank_one() {
        let m = ExactMatrix::from_rows(vec![vec![rat(1), rat(2), rat(3)]], 3);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.apply(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_inconsistent() {
        let m = ExactMatrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]], 2);
        assert!(solve(&m, &[rat(1), rat(3)]).is_none());
        assert_eq!(m.apply(&solve(&m, &[rat(1), rat(2)]).unwrap()), vec![rat(1), rat(2)]);
    }

    #[test]
    fn small_path_matches_exact_path() {
        let vs = vec![
            vec![rat(3), rat(-6), rat(0), rat(9)],
            vec![rat(0), rat(4), rat(2), rat(-2)],
            vec![rat(3), rat(-2), rat(2), rat(7)],
            vec![rat(1), rat(0), rat(5), rat(5)],
        ];
        let a = small::rref(&vs, 4).unwrap();
        let b = rref_big(&vs, 4);
        assert_eq!((a.rows, a.pivots), (b.rows, b.pivots));
    }

    #[test]
    fn solve_many_matches_solve() {
        let m = ExactMatrix::from_rows(vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(2), rat(4)]], 3);
        let bs = vec![vec![rat(1), rat(2)], vec![rat(0), rat(-6)]];
        let xs = solve_many(&m, &bs).unwrap();
        for (x, b) in xs.iter().zip(&bs) {
            assert_eq!(&m.apply(x), b);
            assert_eq!(Some(x.clone()), solve(&m, b));
        }
        let sing = ExactMatrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]], 2);
        assert!(solve_many(&sing, &[vec![rat(1), rat(2)], vec![rat(1), rat(3)]]).is_none());
    }

    #[test]
    fn insert_matches_batch() {
        let vs = vec![vec![rat(0), rat(2), rat(4)], vec![rat(1), rat(1), rat(1)], vec![rat(1), rat(2), rat(3)]];
        let batch = rref(&vs, 3);
        let mut inc = Rref::empty(3);
        for v in &vs {
            inc.insert(v);
        }
        assert_eq!(batch.rows, inc.rows);
    }

    proptest::proptest! {
        #[test]
        fn small_path_agrees(rows in proptest::collection::vec(proptest::collection::vec((-9i64..=9, 1i64..=4), 5), 0..7)) {
            let vs: Vec<Vec<Q>> = rows
                .iter()
                .map(|r| r.iter().map(|&(a, b)| Q::new(a.into(), b.into())).collect())
                .collect();
            let a = small::rref(&vs, 5).unwrap();
            let b = rref_big(&vs, 5);
            proptest::prop_assert_eq!((a.rows, a.pivots), (b.rows, b.pivots));
        }
    }
}
