//! Subgroups of `Q^N` of the form `L + V`: a finitely generated lattice `L`
//! plus a rational subspace `V`. Every group computed by the workbench is a
//! quotient of two such subgroups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::error::AbelianError;
use super::group::DiffCohGroup;
use super::linalg::{nullspace, rref, solve_many, Rref, Q};
use super::matrix::{IntMatrix, RatMatrix};
use super::snf::{hermite_basis, integer_kernel, invariant_factors};

#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: usize,
    /// Z-basis of `(L + V) / V`, each vector reduced modulo `space`.
    lattice: Vec<Vec<Q>>,
    space: Rref,
}

fn denominator_lcm(vs: &[Vec<Q>]) -> BigInt {
    let mut d = BigInt::one();
    for v in vs {
        for x in v {
            if !x.is_zero() {
                d = d.lcm(x.denom());
            }
        }
    }
    d
}

/// Solves for coordinates of vectors in a fixed linearly independent basis.
pub(crate) struct BasisSolver {
    n: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl BasisSolver {
    pub fn new(basis: &[Vec<Q>], n: usize) -> Self {
        let k = basis.len();
        let aug: Vec<Vec<Q>> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut r = b.clone();
                r.extend((0..k).map(|j| if i == j { Q::one() } else { Q::zero() }));
                r
            })
            .collect();
        let r = rref(&aug, n + k);
        debug_assert!(r.pivots.iter().all(|&p| p < n), "basis is not linearly independent");
        BasisSolver { n, rows: r.rows, pivots: r.pivots }
    }

    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let k = self.rows.len();
        let mut rest = v.to_vec();
        let mut coords = vec![Q::zero(); k];
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = rest[p].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.n {
                if !row[j].is_zero() {
                    rest[j] = rest[j].clone() - f.clone() * row[j].clone();
                }
            }
            for (c, t) in coords.iter_mut().zip(&row[self.n..]) {
                if !t.is_zero() {
                    *c = c.clone() + f.clone() * t.clone();
                }
            }
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }
}

impl Subgroup {
    pub fn zero(ambient: usize) -> Self {
        Subgroup { ambient, lattice: Vec::new(), space: Rref::empty(ambient) }
    }

    /// `Z^a ⊕ Q^b` in mixed coordinates: `integral[i]` marks coordinate `i` as integral.
    pub fn standard(integral: &[bool]) -> Self {
        let n = integral.len();
        let unit = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        };
        let lattice: Vec<Vec<Q>> = (0..n).filter(|&i| integral[i]).map(unit).collect();
        let space: Vec<Vec<Q>> = (0..n).filter(|&i| !integral[i]).map(unit).collect();
        Subgroup::from_generators(n, &lattice, &space)
    }

    pub fn full_integral(n: usize) -> Self {
        Self::standard(&vec![true; n])
    }

    pub fn full_rational(n: usize) -> Self {
        Self::standard(&vec![false; n])
    }

    pub fn from_generators(ambient: usize, lattice_gens: &[Vec<Q>], space_gens: &[Vec<Q>]) -> Self {
        let space = rref(space_gens, ambient);
        let reduced: Vec<Vec<Q>> =
            lattice_gens.iter().map(|g| space.reduce(g)).filter(|g| g.iter().any(|x| !x.is_zero())).collect();
        let lattice = if reduced.is_empty() {
            Vec::new()
        } else {
            let d = denominator_lcm(&reduced);
            let ints: Vec<Vec<BigInt>> = reduced
                .iter()
                .map(|v| v.iter().map(|x| (x.clone() * Q::from_integer(d.clone())).to_integer()).collect())
                .collect();
            hermite_basis(&ints, ambient)
                .into_iter()
                .map(|row| row.into_iter().map(|x| Q::new(x, d.clone())).collect())
                .collect()
        };
        Subgroup { ambient, lattice, space }
    }

    /// Integer-coefficient generators.
    pub fn from_int_generators(ambient: usize, lattice_gens: &[Vec<BigInt>], space_gens: &[Vec<BigInt>]) -> Self {
        let conv = |vs: &[Vec<BigInt>]| -> Vec<Vec<Q>> {
            vs.iter().map(|v| v.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
        };
        Self::from_generators(ambient, &conv(lattice_gens), &conv(space_gens))
    }

    /// `self ⊕ other` in `Q^{N+M}`.
    pub fn direct_sum(&self, other: &Subgroup) -> Subgroup {
        let n = self.ambient + other.ambient;
        let pad_l = |v: &Vec<Q>| {
            let mut w = v.clone();
            w.resize(n, Q::zero());
            w
        };
        let pad_r = |v: &Vec<Q>| {
            let mut w = vec![Q::zero(); self.ambient];
            w.extend(v.iter().cloned());
            w
        };
        let lat: Vec<Vec<Q>> = self.lattice.iter().map(pad_l).chain(other.lattice.iter().map(pad_r)).collect();
        let sp: Vec<Vec<Q>> = self.space.rows.iter().map(pad_l).chain(other.space.rows.iter().map(pad_r)).collect();
        Subgroup::from_generators(n, &lat, &sp)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn lattice(&self) -> &[Vec<Q>] {
        &self.lattice
    }

    pub fn space(&self) -> &[Vec<Q>] {
        &self.space.rows
    }

    pub fn space_dim(&self) -> usize {
        self.space.rank()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_zero(&self) -> bool {
        self.lattice.is_empty() && self.space.rank() == 0
    }

    /// Image under `f` (a matrix from this ambient space to another).
    pub fn image(&self, f: &RatMatrix) -> Subgroup {
        assert_eq!(f.cols(), self.ambient, "image: ambient mismatch");
        let l: Vec<Vec<Q>> = self.lattice.iter().map(|v| f.apply(v)).collect();
        let s: Vec<Vec<Q>> = self.space.rows.iter().map(|v| f.apply(v)).collect();
        Subgroup::from_generators(f.rows(), &l, &s)
    }

    pub fn sum(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.ambient, other.ambient, "sum: ambient mismatch");
        let mut l = self.lattice.clone();
        l.extend(other.lattice.iter().cloned());
        let mut s = self.space.rows.clone();
        s.extend(other.space.rows.iter().cloned());
        Subgroup::from_generators(self.ambient, &l, &s)
    }

    /// `{x in self : f x in target}`.
    pub fn preimage(&self, f: &RatMatrix, target: &Subgroup) -> Subgroup {
        assert_eq!(f.cols(), self.ambient, "preimage: source mismatch");
        assert_eq!(f.rows(), target.ambient, "preimage: target mismatch");
        let a = self.lattice.len();
        let a2 = target.lattice.len();
        let b = self.space.rank();
        let b2 = target.space.rank();
        let p = a + a2 + b + b2;
        let mut cols: Vec<Vec<Q>> = Vec::with_capacity(p);
        cols.extend(self.lattice.iter().map(|v| f.apply(v)));
        cols.extend(target.lattice.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        cols.extend(self.space.rows.iter().map(|v| f.apply(v)));
        cols.extend(target.space.rows.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let phi = RatMatrix::from_cols(&cols, f.rows());
        let k = mixed_kernel(&phi, a + a2);
        // map parameters back into the ambient space
        let mut back: Vec<Vec<Q>> = Vec::with_capacity(p);
        back.extend(self.lattice.iter().cloned());
        back.extend((0..a2).map(|_| vec![Q::zero(); self.ambient]));
        back.extend(self.space.rows.iter().cloned());
        back.extend((0..b2).map(|_| vec![Q::zero(); self.ambient]));
        let psi = RatMatrix::from_cols(&back, self.ambient);
        k.image(&psi)
    }

    pub fn kernel_of(&self, f: &RatMatrix) -> Subgroup {
        self.preimage(f, &Subgroup::zero(f.rows()))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        self.preimage(&RatMatrix::identity(self.ambient), other)
    }

    pub fn contains_vector(&self, v: &[Q]) -> bool {
        let r = self.space.reduce(v);
        if r.iter().all(|x| x.is_zero()) {
            return true;
        }
        let solver = BasisSolver::new(&self.lattice, self.ambient);
        match solver.coordinates(&r) {
            Some(c) => c.iter().all(|x| x.is_integer()),
            None => false,
        }
    }

    pub fn contains(&self, other: &Subgroup) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        if !other.space.rows.iter().all(|v| self.space.contains(v)) {
            return false;
        }
        let solver = BasisSolver::new(&self.lattice, self.ambient);
        other.lattice.iter().all(|v| {
            let r = self.space.reduce(v);
            r.iter().all(|x| x.is_zero()) || solver.coordinates(&r).is_some_and(|c| c.iter().all(|x| x.is_integer()))
        })
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// `self / sub` for `sub ⊆ self`.
    pub fn quotient(&self, sub: &Subgroup) -> Result<DiffCohGroup, AbelianError> {
        if self.ambient != sub.ambient {
            return Err(AbelianError::DimensionMismatch { expected: self.ambient, found: sub.ambient });
        }
        if !sub.space.rows.iter().all(|v| self.space.contains(v)) {
            return Err(AbelianError::NotASubgroup);
        }
        let d1 = self.space.rank();
        let d2 = sub.space.rank();
        // sub lattice modulo self.space
        let reduced: Vec<Vec<Q>> = sub.lattice.iter().map(|v| self.space.reduce(v)).collect();
        let lat_rank_mod_space = rref(&reduced, self.ambient).rank();
        let torus = sub.lattice.len() - lat_rank_mod_space;
        let vector_dim = d1 - d2 - torus;
        let solver = BasisSolver::new(&self.lattice, self.ambient);
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(reduced.len());
        for r in &reduced {
            if r.iter().all(|x| x.is_zero()) {
                continue;
            }
            let c = solver.coordinates(r).ok_or(AbelianError::NotASubgroup)?;
            if !c.iter().all(|x| x.is_integer()) {
                return Err(AbelianError::NotASubgroup);
            }
            cols.push(c.into_iter().map(|x| x.to_integer()).collect());
        }
        let l = self.lattice.len();
        let mut m = IntMatrix::zeros(l, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        let inv = invariant_factors(&m);
        Ok(DiffCohGroup::new(vector_dim, torus, l - inv.rank, &inv.factors))
    }
}

/// Integral points of the row space of `r`: a Z-basis of `span(r) ∩ Z^n`.
fn integral_points(r: &Rref) -> Vec<Vec<BigInt>> {
    let n = r.ncols;
    let d = denominator_lcm(&r.rows);
    let as_int = |v: &Vec<Q>| -> Vec<BigInt> { v.iter().map(|x| x.to_integer()).collect() };
    if d.is_one() {
        return r.rows.iter().map(as_int).collect();
    }
    let k = r.rank();
    let scaled: Vec<Vec<BigInt>> = r
        .rows
        .iter()
        .map(|v| v.iter().map(|x| (x.clone() * Q::from_integer(d.clone())).to_integer()).collect())
        .collect();
    // columns where some scaled entry is not a multiple of d constrain t
    let bad: Vec<usize> = (0..n).filter(|&j| scaled.iter().any(|row| !row[j].is_multiple_of(&d))).collect();
    if bad.is_empty() {
        return r.rows.iter().map(as_int).collect();
    }
    // t * scaled[:, bad] - d * y = 0
    let nb = bad.len();
    let mut m = IntMatrix::zeros(nb, k + nb);
    for (bi, &j) in bad.iter().enumerate() {
        for (i, row) in scaled.iter().enumerate() {
            if !row[j].is_zero() {
                m.set(bi, i, row[j].clone());
            }
        }
        m.set(bi, k + bi, -d.clone());
    }
    let ts: Vec<Vec<BigInt>> = integer_kernel(&m).into_iter().map(|v| v[..k].to_vec()).collect();
    let tb = hermite_basis(&ts, k);
    // Σ t_i r_i = (Σ t_i scaled_i) / d is integral by construction
    tb.iter()
        .map(|t| {
            let mut x = vec![BigInt::zero(); n];
            for (ti, row) in t.iter().zip(&scaled) {
                if ti.is_zero() {
                    continue;
                }
                for (xj, rj) in x.iter_mut().zip(row) {
                    if !rj.is_zero() {
                        *xj += ti * rj;
                    }
                }
            }
            x.into_iter().map(|v| v / &d).collect()
        })
        .collect()
}

/// Kernel of `phi` on `Z^n_int ⊕ Q^(cols - n_int)`.
pub fn mixed_kernel(phi: &RatMatrix, n_int: usize) -> Subgroup {
    let p = phi.cols();
    let m = phi.rows();
    let nq = p - n_int;
    // rational part of the kernel: vectors with zero integral coordinates
    let phi_q = RatMatrix::from_fn(m, nq, |i, j| phi.get(i, n_int + j).clone());
    let space: Vec<Vec<Q>> = nullspace(&phi_q)
        .into_iter()
        .map(|w| {
            let mut v = vec![Q::zero(); n_int];
            v.extend(w);
            v
        })
        .collect();
    if n_int == 0 {
        return Subgroup::from_generators(p, &[], &space);
    }
    // projection of the full kernel onto the integral coordinates
    let kernel = nullspace(phi);
    let proj: Vec<Vec<Q>> = kernel.iter().map(|v| v[..n_int].to_vec()).collect();
    let s = rref(&proj, n_int);
    let pts = integral_points(&s);
    let phi_z = RatMatrix::from_fn(m, n_int, |i, j| phi.get(i, j).clone());
    let xs: Vec<Vec<Q>> = pts.into_iter().map(|x| x.into_iter().map(Q::from_integer).collect()).collect();
    let rhs: Vec<Vec<Q>> = xs.iter().map(|x| phi_z.apply(x).into_iter().map(|y| -y).collect()).collect();
    let ws = solve_many(&phi_q, &rhs).expect("projected kernel vectors lift");
    let lattice: Vec<Vec<Q>> = xs
        .into_iter()
        .zip(ws)
        .map(|(mut v, w)| {
            v.extend(w);
            v
        })
        .collect();
    Subgroup::from_generators(p, &lattice, &space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::matrix::{rat, ratio};

    #[test]
    fn quotient_of_integers_by_multiples() {
        let z = Subgroup::full_integral(1);
        let two_z = Subgroup::from_generators(1, &[vec![rat(2)]], &[]);
        assert_eq!(z.quotient(&two_z).unwrap(), DiffCohGroup::from_u64(0, 0, 0, &[2]));
    }

    #[test]
    fn quotient_of_rationals_by_integers() {
        let q = Subgroup::full_rational(1);
        let z = Subgroup::full_integral(1);
        assert_eq!(q.quotient(&z).unwrap(), DiffCohGroup::from_u64(0, 1, 0, &[]));
        assert!(z.quotient(&q).is_err());
    }

    #[test]
    fn mixed_kernel_of_difference() {
        // {(a, b) in Z ⊕ Q : a - 2b = 0} is generated by (2, 1)... but also (1, 1/2)
        let phi = RatMatrix::from_rows(vec![vec![rat(1), rat(-2)]], 2);
        let k = mixed_kernel(&phi, 1);
        assert_eq!(k.lattice_rank(), 1);
        assert_eq!(k.space_dim(), 0);
        assert!(k.contains_vector(&[rat(1), ratio(1, 2)]));
        assert!(!k.contains_vector(&[ratio(1, 2), ratio(1, 4)]));
    }

    #[test]
    fn saturation_of_half_integral_line() {
        // integral points of the line spanned by (1, 1/2)
        let phi = RatMatrix::from_rows(vec![vec![rat(1), rat(-2)]], 2);
        let k = mixed_kernel(&phi, 2);
        assert_eq!(k.lattice(), &[vec![rat(2), rat(1)]]);
    }

    #[test]
    fn preimage_and_intersection() {
        let z2 = Subgroup::full_integral(2);
        let diag = Subgroup::from_generators(2, &[vec![rat(1), rat(1)]], &[]);
        let i = z2.intersection(&diag);
        assert!(i.same_as(&diag));
        let f = RatMatrix::from_rows(vec![vec![rat(2), rat(0)]], 2);
        let pre = z2.preimage(&f, &Subgroup::from_generators(1, &[vec![rat(4)]], &[]));
        assert!(pre.same_as(&Subgroup::from_generators(2, &[vec![rat(2), rat(0)], vec![rat(0), rat(1)]], &[])));
    }
}
