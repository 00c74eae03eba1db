//! Čech double complex of the cover of `K` by open vertex stars. The
//! intersection over a nerve simplex `σ` is the open star of `σ`; its cochains
//! are modelled by the closed star `St(σ)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::cochain::{cohomology_at_sparse, integral_cohomology};
use super::complex::{Simplex, SimplicialComplex};
use crate::abelian::{FgAbGroup, ScalarKind, SparseIntMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Block {
    p: usize,
    sigma: usize,
    star: SimplicialComplex,
}

/// `C^{p,q} = ⊕_{σ ∈ N_p} C^q(St σ)` with total differential
/// `D = d + (-1)^q δ`, `q` the simplicial degree. The sign depends on the
/// column so that `D² = 0`.
#[derive(Clone, Debug)]
pub struct CechDoubleComplex {
    pub kind: ScalarKind,
    blocks: Vec<Block>,
    total_dims: Vec<usize>,
    /// `total_maps[t] : Tot^t -> Tot^{t+1}`
    total_maps: Vec<SparseIntMatrix>,
}

/// Vertex sets whose open stars meet: exactly the sets spanning a simplex.
fn nerve_of_open_stars(k: &SimplicialComplex) -> BTreeSet<Simplex> {
    let mut nerve = BTreeSet::new();
    for d in 0..=k.dim() {
        for s in k.simplices(d) {
            // the open star of each vertex of s contains the interior of s
            let n = s.len();
            for mask in 1u32..(1u32 << n) {
                nerve.insert((0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect::<Simplex>());
            }
        }
    }
    nerve
}

fn is_acyclic(k: &SimplicialComplex) -> bool {
    let h = integral_cohomology(k);
    h[0] == FgAbGroup::free(1) && h[1..].iter().all(|g| g.is_trivial())
}

pub fn cech_double_complex(k: &SimplicialComplex, kind: ScalarKind) -> Result<CechDoubleComplex> {
    if k.is_empty() {
        return Err(Error::BadCover("empty complex".into()));
    }
    let nerve = nerve_of_open_stars(k);
    let in_k: BTreeSet<Simplex> = (0..=k.dim()).flat_map(|d| k.simplices(d).iter().cloned()).collect();
    if nerve != in_k {
        return Err(Error::BadCover("nerve of the star cover differs from the complex".into()));
    }
    let mut blocks = Vec::new();
    for p in 0..=k.dim() {
        for (i, s) in k.simplices(p).iter().enumerate() {
            blocks.push(Block { p, sigma: i, star: k.closed_star(s) });
        }
    }
    let bad: Vec<String> =
        blocks.par_iter().filter(|b| !is_acyclic(&b.star)).map(|b| k.label_of(&k.simplices(b.p)[b.sigma])).collect();
    if !bad.is_empty() {
        return Err(Error::BadCover(format!("closed stars not acyclic: {}", bad.join(" "))));
    }
    let top = 2 * k.dim();
    // (block, q) -> start of that summand in Tot^{p+q}
    let mut offset_of = std::collections::HashMap::new();
    let mut total_dims = vec![0usize; top + 1];
    for (bi, b) in blocks.iter().enumerate() {
        for q in 0..=b.star.dim() {
            let t = b.p + q;
            offset_of.insert((bi, q), total_dims[t]);
            total_dims[t] += b.star.count(q);
        }
    }
    let block_index: std::collections::HashMap<(usize, usize), usize> =
        blocks.iter().enumerate().map(|(bi, b)| ((b.p, b.sigma), bi)).collect();
    let mut total_maps: Vec<SparseIntMatrix> =
        (0..=top).map(|t| SparseIntMatrix::zeros(total_dims.get(t + 1).copied().unwrap_or(0), total_dims[t])).collect();
    for (bi, b) in blocks.iter().enumerate() {
        for q in 0..=b.star.dim() {
            let t = b.p + q;
            let src = offset_of[&(bi, q)];
            // d: simplicial coboundary inside the star
            if q < b.star.dim() {
                let dst = offset_of[&(bi, q + 1)];
                for ti in 0..b.star.count(q + 1) {
                    for (f, sign) in b.star.faces(q + 1, ti) {
                        total_maps[t].add_at(dst + ti, src + f, &BigInt::from(sign));
                    }
                }
            }
        }
    }
    // δ: alternating restriction to the star of each coface
    for p in 0..k.dim() {
        for ti in 0..k.count(p + 1) {
            let bt = block_index[&(p + 1, ti)];
            for (i, (fi, _)) in k.faces(p + 1, ti).into_iter().enumerate() {
                let bs = block_index[&(p, fi)];
                let (star_s, star_t) = (&blocks[bs].star, &blocks[bt].star);
                for q in 0..=star_t.dim() {
                    let t = p + q;
                    let sign = if (i + q) % 2 == 0 { 1 } else { -1 };
                    let src = offset_of[&(bs, q)];
                    let dst = offset_of[&(bt, q)];
                    for (ri, rho) in star_t.simplices(q).iter().enumerate() {
                        let rj = star_s.index_of(rho).expect("star of a coface lies in the star of the face");
                        total_maps[t].add_at(dst + ri, src + rj, &BigInt::from(sign));
                    }
                }
            }
        }
    }
    Ok(CechDoubleComplex { kind, blocks, total_dims, total_maps })
}

impl CechDoubleComplex {
    pub fn total_dims(&self) -> &[usize] {
        &self.total_dims
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_square_zero(&self) -> bool {
        self.total_maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn total_cohomology(&self, t: usize) -> FgAbGroup {
        let zero_prev = SparseIntMatrix::zeros(self.total_dims[0], 0);
        let prev = if t == 0 { &zero_prev } else { &self.total_maps[t - 1] };
        cohomology_at_sparse(prev, &self.total_maps[t], self.kind).expect("total differential squares to zero")
    }

    /// Total cohomology in degrees `0..=2 dim K`.
    pub fn all_total_cohomology(&self) -> Vec<FgAbGroup> {
        (0..self.total_dims.len()).into_par_iter().map(|t| self.total_cohomology(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders::{circle, simplex};

    #[test]
    fn hexagon_total_cohomology() {
        let c = cech_double_complex(&circle(6).unwrap(), ScalarKind::Integer).unwrap();
        assert!(c.is_square_zero());
        let h = c.all_total_cohomology();
        assert_eq!(h[0], FgAbGroup::free(1));
        assert_eq!(h[1], FgAbGroup::free(1));
        assert!(h[2..].iter().all(|g| g.is_trivial()));
    }

    #[test]
    fn single_simplex() {
        let c = cech_double_complex(&simplex(2), ScalarKind::Integer).unwrap();
        let h = c.all_total_cohomology();
        assert_eq!(h[0], FgAbGroup::free(1));
        assert!(h[1..].iter().all(|g| g.is_trivial()));
    }
}
