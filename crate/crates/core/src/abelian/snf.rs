use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::sparse::SparseIntMatrix;

/// `u * a * v == s` with `u`, `v` unimodular and `s` in Smith form.
/// `v_inv` is the inverse of `v`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

/// Rank and invariant factors of an integer matrix. `factors` holds every
/// nonzero diagonal entry of the Smith form, units included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pub rank: usize,
    pub factors: Vec<BigInt>,
}

impl InvariantFactors {
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

struct Transforms {
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

fn row_op(a: &mut IntMatrix, t: &mut Option<Transforms>, dst: usize, src: usize, f: &BigInt) {
    a.row_axpy(dst, src, f);
    if let Some(t) = t {
        t.u.row_axpy(dst, src, f);
    }
}

fn col_op(a: &mut IntMatrix, t: &mut Option<Transforms>, dst: usize, src: usize, f: &BigInt) {
    a.col_axpy(dst, src, f);
    if let Some(t) = t {
        t.v.col_axpy(dst, src, f);
        // (V E)^{-1} = E^{-1} V^{-1}; E adds f*col src to col dst, so E^{-1} subtracts row dst*f from row src.
        t.v_inv.row_axpy(src, dst, &-f);
    }
}

fn swap_r(a: &mut IntMatrix, t: &mut Option<Transforms>, i: usize, j: usize) {
    a.swap_rows(i, j);
    if let Some(t) = t {
        t.u.swap_rows(i, j);
    }
}

fn swap_c(a: &mut IntMatrix, t: &mut Option<Transforms>, i: usize, j: usize) {
    a.swap_cols(i, j);
    if let Some(t) = t {
        t.v.swap_cols(i, j);
        t.v_inv.swap_rows(i, j);
    }
}

fn smith_in_place(a: &mut IntMatrix, t: &mut Option<Transforms>) {
    let (m, n) = (a.rows(), a.cols());
    let mut p = 0;
    while p < m.min(n) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in p..m {
            for j in p..n {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.abs() < a.get(bi, bj).abs(),
                };
                if better {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        break;
                    }
                }
            }
            if let Some((bi, bj)) = best {
                if a.get(bi, bj).abs().is_one() {
                    break;
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_r(a, t, p, bi);
        swap_c(a, t, p, bj);
        loop {
            let piv = a.get(p, p).clone();
            let mut dirty = false;
            for i in p + 1..m {
                if a.get(i, p).is_zero() {
                    continue;
                }
                let q = a.get(i, p).div_floor(&piv);
                row_op(a, t, i, p, &-q);
                if !a.get(i, p).is_zero() {
                    dirty = true;
                }
            }
            for j in p + 1..n {
                if a.get(p, j).is_zero() {
                    continue;
                }
                let q = a.get(p, j).div_floor(&piv);
                col_op(a, t, j, p, &-q);
                if !a.get(p, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column p onto the pivot
                let mut bi = p;
                let mut bj = p;
                let mut bv = a.get(p, p).abs();
                for i in p + 1..m {
                    let x = a.get(i, p);
                    if !x.is_zero() && x.abs() < bv {
                        bv = x.abs();
                        bi = i;
                        bj = p;
                    }
                }
                for j in p + 1..n {
                    let x = a.get(p, j);
                    if !x.is_zero() && x.abs() < bv {
                        bv = x.abs();
                        bi = p;
                        bj = j;
                    }
                }
                swap_r(a, t, p, bi);
                swap_c(a, t, p, bj);
                continue;
            }
            // divisibility of the trailing block
            let piv = a.get(p, p).clone();
            let mut bad_row = None;
            'outer: for i in p + 1..m {
                for j in p + 1..n {
                    if !a.get(i, j).is_multiple_of(&piv) {
                        bad_row = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(i) => row_op(a, t, p, i, &BigInt::one()),
                None => break,
            }
        }
        if a.get(p, p).is_negative() {
            a.negate_row(p);
            if let Some(t) = t {
                t.u.negate_row(p);
            }
        }
        p += 1;
    }
}

/// Smith normal form with unimodular transforms, pivoting on the entry of
/// smallest absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut s = a.clone();
    let mut t = Some(Transforms {
        u: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
        v_inv: IntMatrix::identity(a.cols()),
    });
    smith_in_place(&mut s, &mut t);
    let t = t.unwrap();
    SmithForm { s, u: t.u, v: t.v, v_inv: t.v_inv }
}

fn dense_diagonal(a: IntMatrix) -> Vec<BigInt> {
    let mut a = a;
    smith_in_place(&mut a, &mut None);
    let k = a.rows().min(a.cols());
    (0..k).map(|i| a.get(i, i).clone()).filter(|d| !d.is_zero()).collect()
}

/// Invariant factors without transforms. Unit pivots are eliminated on a
/// sparse representation first, the remainder goes through the dense Smith form.
pub fn invariant_factors(a: &IntMatrix) -> InvariantFactors {
    invariant_factors_sparse(&SparseIntMatrix::from(a))
}

pub fn invariant_factors_sparse(a: &SparseIntMatrix) -> InvariantFactors {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<BTreeMap<usize, BigInt>> = a.entries.clone();
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut alive = vec![true; m];
    let mut units = 0usize;
    loop {
        // shortest alive row with a unit entry; within it the sparsest column
        let mut pick: Option<(usize, usize, usize, usize)> = None;
        for i in 0..m {
            if !alive[i] || rows[i].is_empty() {
                continue;
            }
            let len = rows[i].len();
            if let Some((_, _, bl, _)) = pick {
                if len >= bl {
                    continue;
                }
            }
            let mut best_col: Option<(usize, usize)> = None;
            for (&j, x) in &rows[i] {
                if x.abs().is_one() {
                    let cl = col_rows[j].len();
                    if best_col.is_none_or(|(_, c)| cl < c) {
                        best_col = Some((j, cl));
                    }
                }
            }
            if let Some((j, cl)) = best_col {
                pick = Some((i, j, len, cl));
            }
        }
        let Some((pi, pj, _, _)) = pick else { break };
        let pivot_row = rows[pi].clone();
        let pv = pivot_row[&pj].clone();
        let others: Vec<usize> = col_rows[pj].iter().copied().filter(|&r| r != pi).collect();
        for r in others {
            let f = rows[r][&pj].clone() * &pv; // pv = ±1, so a/pv = a*pv
            for (&j, x) in &pivot_row {
                let entry = rows[r].entry(j).or_insert_with(BigInt::zero);
                *entry -= &f * x;
                if entry.is_zero() {
                    rows[r].remove(&j);
                    col_rows[j].remove(&r);
                } else {
                    col_rows[j].insert(r);
                }
            }
        }
        for &j in pivot_row.keys() {
            col_rows[j].remove(&pi);
        }
        rows[pi].clear();
        alive[pi] = false;
        units += 1;
    }
    let rest_rows: Vec<usize> = (0..m).filter(|&i| alive[i] && !rows[i].is_empty()).collect();
    let rest_cols: Vec<usize> = (0..n).filter(|&j| !col_rows[j].is_empty()).collect();
    let mut factors = vec![BigInt::one(); units];
    if !rest_rows.is_empty() {
        let col_pos: BTreeMap<usize, usize> = rest_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut dense = IntMatrix::zeros(rest_rows.len(), rest_cols.len());
        for (k, &i) in rest_rows.iter().enumerate() {
            for (j, x) in &rows[i] {
                dense.set(k, col_pos[j], x.clone());
            }
        }
        factors.extend(dense_diagonal(dense));
    }
    factors.sort();
    InvariantFactors { rank: factors.len(), factors }
}

pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).rank
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m.get(r, k).is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
        }
        prev = m.get(k, k).clone();
    }
    sign * m.get(n - 1, n - 1)
}

/// Some integer `x` with `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let sf = smith_normal_form(a);
    let ub = sf.u.apply(b);
    let k = a.rows().min(a.cols());
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        let d = if i < k { sf.s.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ubi.is_zero() {
                return None;
            }
        } else {
            if !ubi.is_multiple_of(&d) {
                return None;
            }
            y[i] = ubi / &d;
        }
    }
    Some(sf.v.apply(&y))
}

/// Basis of the integer kernel `{x in Z^n : a x = 0}`, one vector per entry.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let sf = smith_normal_form(a);
    let r = sf.rank();
    (r..a.cols()).map(|j| sf.v.col(j)).collect()
}

/// Row-style Hermite normal form of the lattice spanned by `gens`
/// (each of length `n`). Returns a basis, pivots strictly increasing,
/// pivot entries positive, entries above each pivot reduced.
pub fn hermite_basis(gens: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..n {
        let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
        if idx.is_empty() {
            continue;
        }
        // gcd-combine all rows with a nonzero entry in `col` into one
        let first = idx.remove(0);
        for i in idx {
            let a = rows[first][col].clone();
            let b = rows[i][col].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let r1: Vec<BigInt> = rows[first].iter().zip(&rows[i]).map(|(p, q)| &x * p + &y * q).collect();
            let r2: Vec<BigInt> = rows[first].iter().zip(&rows[i]).map(|(p, q)| &ag * q - &bg * p).collect();
            rows[first] = r1;
            rows[i] = r2;
        }
        let mut piv_row = rows.remove(first);
        if piv_row[col].is_negative() {
            piv_row.iter_mut().for_each(|x| *x = -x.clone());
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        basis.push(piv_row);
        pivots.push(col);
    }
    // reduce entries above pivots
    for k in 0..basis.len() {
        let col = pivots[k];
        let p = basis[k][col].clone();
        for i in 0..k {
            let q = basis[i][col].div_floor(&p);
            if !q.is_zero() {
                let src = basis[k].clone();
                for (x, s) in basis[i].iter_mut().zip(&src) {
                    *x -= &q * s;
                }
            }
        }
    }
    basis
}
