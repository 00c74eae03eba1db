use num_bigint::BigInt;
use rayon::prelude::*;

use super::complex::SimplicialComplex;
use crate::abelian::matrix::Scalar;
use crate::abelian::{
    invariant_factors, invariant_factors_sparse, AbelianError, ExactMatrix, FgAbGroup, IntMatrix, ScalarKind,
    SparseIntMatrix,
};

/// Coboundary `C^d -> C^{d+1}`: `(δc)(v_0..v_{d+1}) = Σ (-1)^i c(..v̂_i..)`.
pub fn coboundary(k: &SimplicialComplex, d: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(k.count(d + 1), k.count(d));
    for t in 0..k.count(d + 1) {
        for (f, sign) in k.faces(d + 1, t) {
            m.set(t, f, BigInt::from(sign));
        }
    }
    m
}

/// Alexander-Whitney cup product of a `p`-cochain and a `q`-cochain.
pub fn cup<T: Scalar>(k: &SimplicialComplex, a: &[T], p: usize, b: &[T], q: usize) -> Vec<T> {
    assert_eq!(a.len(), k.count(p), "cup: left cochain has the wrong length");
    assert_eq!(b.len(), k.count(q), "cup: right cochain has the wrong length");
    k.simplices(p + q)
        .iter()
        .map(|s| {
            let x = &a[k.index_of(&s[..=p]).unwrap()];
            if x.is_zero() {
                return T::zero();
            }
            let y = &b[k.index_of(&s[p..]).unwrap()];
            x.clone() * y.clone()
        })
        .collect()
}

/// Matrix of `x ↦ a ∪ x` from `C^q` to `C^{p+q}`.
pub fn cup_left_matrix<T: Scalar>(k: &SimplicialComplex, a: &[T], p: usize, q: usize) -> ExactMatrix<T> {
    let mut m = ExactMatrix::zeros(k.count(p + q), k.count(q));
    for (i, s) in k.simplices(p + q).iter().enumerate() {
        let x = &a[k.index_of(&s[..=p]).unwrap()];
        if !x.is_zero() {
            m.set(i, k.index_of(&s[p..]).unwrap(), x.clone());
        }
    }
    m
}

/// Matrix of `x ↦ x ∪ b` from `C^p` to `C^{p+q}`.
pub fn cup_right_matrix<T: Scalar>(k: &SimplicialComplex, b: &[T], p: usize, q: usize) -> ExactMatrix<T> {
    let mut m = ExactMatrix::zeros(k.count(p + q), k.count(p));
    for (i, s) in k.simplices(p + q).iter().enumerate() {
        let y = &b[k.index_of(&s[p..]).unwrap()];
        if !y.is_zero() {
            m.set(i, k.index_of(&s[..=p]).unwrap(), y.clone());
        }
    }
    m
}

/// `ker(d_this) / im(d_prev)`; over the rationals only the rank survives.
pub fn cohomology_at(d_prev: &IntMatrix, d_this: &IntMatrix, kind: ScalarKind) -> Result<FgAbGroup, AbelianError> {
    if d_prev.rows() != d_this.cols() {
        return Err(AbelianError::DimensionMismatch { expected: d_this.cols(), found: d_prev.rows() });
    }
    if !d_this.mul(d_prev).is_zero() {
        return Err(AbelianError::NotAComplex);
    }
    let (this, prev) = rayon::join(|| invariant_factors(d_this), || invariant_factors(d_prev));
    let free = d_this.cols() - this.rank - prev.rank;
    Ok(match kind {
        ScalarKind::Integer => FgAbGroup::new(free, &prev.factors),
        ScalarKind::Rational => FgAbGroup::free(free),
    })
}

/// Sparse version of [`cohomology_at`].
pub fn cohomology_at_sparse(
    d_prev: &SparseIntMatrix,
    d_this: &SparseIntMatrix,
    kind: ScalarKind,
) -> Result<FgAbGroup, AbelianError> {
    if d_prev.rows() != d_this.cols() {
        return Err(AbelianError::DimensionMismatch { expected: d_this.cols(), found: d_prev.rows() });
    }
    if !d_this.mul(d_prev).is_zero() {
        return Err(AbelianError::NotAComplex);
    }
    let (this, prev) = rayon::join(|| invariant_factors_sparse(d_this), || invariant_factors_sparse(d_prev));
    let free = d_this.cols() - this.rank - prev.rank;
    Ok(match kind {
        ScalarKind::Integer => FgAbGroup::new(free, &prev.factors),
        ScalarKind::Rational => FgAbGroup::free(free),
    })
}

/// Bounded cochain complex `C^0 -> C^1 -> ... -> C^n`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub kind: ScalarKind,
    pub dims: Vec<usize>,
    /// `maps[i] : C^i -> C^{i+1}`
    pub maps: Vec<IntMatrix>,
}

impl CochainComplex {
    pub fn new(kind: ScalarKind, maps: Vec<IntMatrix>, dims: Vec<usize>) -> Result<Self, AbelianError> {
        for (i, m) in maps.iter().enumerate() {
            if m.cols() != dims[i] || m.rows() != dims.get(i + 1).copied().unwrap_or(0) {
                return Err(AbelianError::DimensionMismatch { expected: dims[i], found: m.cols() });
            }
        }
        let c = CochainComplex { kind, dims, maps };
        if !c.is_square_zero() {
            return Err(AbelianError::NotAComplex);
        }
        Ok(c)
    }

    pub fn simplicial(k: &SimplicialComplex, kind: ScalarKind) -> Self {
        let dims: Vec<usize> = (0..=k.dim()).map(|d| k.count(d)).collect();
        let maps = (0..=k.dim()).map(|d| coboundary(k, d)).collect();
        CochainComplex { kind, dims, maps }
    }

    pub fn is_square_zero(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    fn map(&self, i: isize) -> IntMatrix {
        let dim = |j: isize| {
            if j < 0 {
                0
            } else {
                self.dims.get(j as usize).copied().unwrap_or(0)
            }
        };
        if i < 0 || i as usize >= self.maps.len() {
            return IntMatrix::zeros(dim(i + 1), dim(i));
        }
        self.maps[i as usize].clone()
    }

    pub fn cohomology(&self, n: usize) -> FgAbGroup {
        let n = n as isize;
        cohomology_at(&self.map(n - 1), &self.map(n), self.kind).expect("checked at construction")
    }

    pub fn all_cohomology(&self) -> Vec<FgAbGroup> {
        (0..self.dims.len()).into_par_iter().map(|n| self.cohomology(n)).collect()
    }
}

/// `H^n(K; Z)` for `n = 0..=dim K`.
pub fn integral_cohomology(k: &SimplicialComplex) -> Vec<FgAbGroup> {
    CochainComplex::simplicial(k, ScalarKind::Integer).all_cohomology()
}

pub fn betti_numbers(k: &SimplicialComplex) -> Vec<usize> {
    integral_cohomology(k).iter().map(|g| g.free_rank()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::matrix::int;
    use crate::simplicial::builders::{circle, product, sphere};
    use num_traits::Zero;

    #[test]
    fn coboundary_squares_to_zero() {
        let k = sphere(3);
        for d in 0..3 {
            assert!(coboundary(&k, d + 1).mul(&coboundary(&k, d)).is_zero());
        }
    }

    #[test]
    fn sphere_cohomology() {
        let h = integral_cohomology(&sphere(2));
        assert_eq!(h, vec![FgAbGroup::free(1), FgAbGroup::zero(), FgAbGroup::free(1)]);
    }

    #[test]
    fn torus_cup_of_generators_is_a_generator() {
        let c = circle(3).unwrap();
        let t = product(&c, &c);
        // indicator of the edge [0,2], pulled back along each projection
        let n1 = c.labels().len();
        let pull = |first: bool| -> Vec<BigInt> {
            t.simplices(1)
                .iter()
                .map(|e| {
                    let (a, b) = if first { (e[0] / n1, e[1] / n1) } else { (e[0] % n1, e[1] % n1) };
                    if (a, b) == (0, 2) {
                        int(1)
                    } else {
                        int(0)
                    }
                })
                .collect()
        };
        let (x, y) = (pull(true), pull(false));
        let d1t = coboundary(&t, 1);
        assert!(d1t.apply(&x).iter().all(|v| v.is_zero()));
        let xy = cup(&t, &x, 1, &y, 1);
        // a generator has a unit coordinate in the cokernel of δ_1
        let h2 = integral_cohomology(&t)[2].clone();
        assert_eq!(h2, FgAbGroup::free(1));
        let sf = crate::abelian::smith_normal_form(&d1t);
        let uxy = sf.u.apply(&xy);
        let r = sf.rank();
        assert_eq!(uxy[r..].iter().filter(|v| !v.is_zero()).count(), 1);
        assert!(uxy[r..].iter().any(|v| v == &int(1) || v == &int(-1)));
    }
}
