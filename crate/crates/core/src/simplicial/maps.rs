use num_bigint::BigInt;
use num_traits::One;

use super::complex::SimplicialComplex;
use crate::abelian::IntMatrix;
use crate::error::{Error, Result};

/// Vertex map sending simplices to simplices and weakly preserving the vertex
/// order on every simplex, so that pullback commutes with coboundary and cup.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: SimplicialComplex,
    pub target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.labels().len() {
            return Err(Error::InvalidSimplex("vertex map has the wrong length".into()));
        }
        for d in 0..=source.dim() {
            for s in source.simplices(d) {
                let img: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
                if img.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::InvalidSimplex(format!("map reverses the order on {}", source.label_of(s))));
                }
                let mut dedup = img.clone();
                dedup.dedup();
                if !target.contains(&dedup) {
                    return Err(Error::InvalidSimplex(format!("image of {} is not a simplex", source.label_of(s))));
                }
            }
        }
        Ok(SimplicialMap { source, target, vertex_map })
    }

    pub fn inclusion(sub: &SimplicialComplex, k: &SimplicialComplex) -> Result<Self> {
        if !sub.is_subcomplex_of(k) {
            return Err(Error::NotASubcomplex("not contained in the target".into()));
        }
        Self::new(sub.clone(), k.clone(), (0..k.labels().len()).collect())
    }

    /// Projection of a staircase product `K × L` onto a factor.
    pub fn product_projection(
        product: &SimplicialComplex,
        k: &SimplicialComplex,
        l: &SimplicialComplex,
        first: bool,
    ) -> Result<Self> {
        let nl = l.labels().len();
        let vm: Vec<usize> = (0..product.labels().len()).map(|v| if first { v / nl } else { v % nl }).collect();
        let target = if first { k.clone() } else { l.clone() };
        Self::new(product.clone(), target, vm)
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// `f^* : C^d(target) -> C^d(source)`; degenerate images pull back to zero.
    pub fn pullback_matrix(&self, d: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.source.count(d), self.target.count(d));
        for (i, s) in self.source.simplices(d).iter().enumerate() {
            let img: Vec<usize> = s.iter().map(|&v| self.vertex_map[v]).collect();
            if img.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let j = self.target.index_of(&img).expect("validated at construction");
            m.set(i, j, BigInt::one());
        }
        m
    }

    pub fn pullback(&self, c: &[BigInt], d: usize) -> Vec<BigInt> {
        self.pullback_matrix(d).apply(c)
    }
}
