use num_bigint::BigInt;

use super::complex::SimplicialComplex;
use crate::abelian::{FgAbGroup, IntMatrix, ScalarKind};
use crate::error::{Error, Result};
use crate::simplicial::cochain::CochainComplex;

/// `±1` on every edge with `ε(ab) ε(bc) = ε(ac)` on every triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCocycle {
    values: Vec<i8>,
}

impl SignCocycle {
    pub fn new(k: &SimplicialComplex, values: Vec<i8>) -> Result<Self> {
        if values.len() != k.count(1) {
            return Err(Error::DegreeMismatch(format!("{} edge signs for {} edges", values.len(), k.count(1))));
        }
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::NotACocycle("sign values must be +1 or -1".into()));
        }
        let e = SignCocycle { values };
        for t in k.simplices(2) {
            let s = |a: usize, b: usize| e.values[k.index_of(&[t[a], t[b]]).unwrap()];
            if s(0, 1) * s(1, 2) != s(0, 2) {
                return Err(Error::NotACocycle(format!("sign cocycle fails on {}", k.label_of(t))));
            }
        }
        Ok(e)
    }

    pub fn trivial(k: &SimplicialComplex) -> Self {
        SignCocycle { values: vec![1; k.count(1)] }
    }

    /// From the set of edges carrying `-1`.
    pub fn from_negative_edges(k: &SimplicialComplex, edges: &[[usize; 2]]) -> Result<Self> {
        let mut values = vec![1i8; k.count(1)];
        for e in edges {
            let mut e = *e;
            e.sort_unstable();
            let i =
                k.index_of(&e).ok_or_else(|| Error::InvalidSimplex(format!("{} is not an edge", k.label_of(&e))))?;
            values[i] = -1;
        }
        Self::new(k, values)
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn sign(&self, k: &SimplicialComplex, a: usize, b: usize) -> i8 {
        self.values[k.index_of(&[a.min(b), a.max(b)]).expect("edge")]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }
}

/// Twisted coboundary `C^d -> C^{d+1}`: the leading face is transported along
/// the edge `v_0 v_1`, `(δ_ε c)(v_0..v_{d+1}) = ε(v_0 v_1) c(v_1..) + Σ_{i≥1} (-1)^i c(..v̂_i..)`.
pub fn twisted_coboundary(k: &SimplicialComplex, eps: &SignCocycle, d: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(k.count(d + 1), k.count(d));
    for t in 0..k.count(d + 1) {
        let s = &k.simplices(d + 1)[t];
        let lead = eps.sign(k, s[0], s[1]) as i64;
        for (i, (f, sign)) in k.faces(d + 1, t).into_iter().enumerate() {
            let v = if i == 0 { lead * sign } else { sign };
            m.set(t, f, BigInt::from(v));
        }
    }
    m
}

pub fn local_system_complex(k: &SimplicialComplex, eps: &SignCocycle) -> CochainComplex {
    let dims: Vec<usize> = (0..=k.dim()).map(|d| k.count(d)).collect();
    let maps = (0..=k.dim()).map(|d| twisted_coboundary(k, eps, d)).collect();
    CochainComplex::new(ScalarKind::Integer, maps, dims).expect("twisted coboundary squares to zero for a cocycle")
}

/// `H^n(K; Z_ε)` for `n = 0..=dim K`.
pub fn local_system_cohomology(k: &SimplicialComplex, eps: &SignCocycle) -> Vec<FgAbGroup> {
    local_system_complex(k, eps).all_cohomology()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders::circle;

    #[test]
    fn hexagon_with_one_flipped_edge() {
        let c = circle(6).unwrap();
        let eps = SignCocycle::from_negative_edges(&c, &[[0, 5]]).unwrap();
        let h = local_system_cohomology(&c, &eps);
        assert_eq!(h, vec![FgAbGroup::zero(), FgAbGroup::cyclic(2)]);
    }

    #[test]
    fn non_cocycle_rejected() {
        let k = crate::simplicial::builders::simplex(2);
        assert!(SignCocycle::from_negative_edges(&k, &[[0, 1]]).is_err());
    }
}
