use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use crate::abelian::IntMatrix;
use crate::error::{Error, Result};

/// Strictly increasing list of vertex indices.
pub type Simplex = Vec<usize>;

/// Finite simplicial complex with a fixed global vertex order. Subcomplexes
/// share the vertex labels of their ambient complex.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.by_dim == other.by_dim
    }
}

impl SimplicialComplex {
    /// Closure of `facets`. Every labelled vertex becomes a 0-simplex.
    pub fn from_facets(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let mut all: BTreeSet<Simplex> = (0..labels.len()).map(|v| vec![v]).collect();
        Self::close_into(&labels, facets, &mut all)?;
        Ok(Self::from_closed_set(labels, all))
    }

    /// Closure of `facets` inside the vertex set of `labels`, without adding isolated vertices.
    pub fn subcomplex_from_facets(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let mut all = BTreeSet::new();
        Self::close_into(&labels, facets, &mut all)?;
        Ok(Self::from_closed_set(labels, all))
    }

    fn close_into(labels: &[String], facets: &[Vec<usize>], all: &mut BTreeSet<Simplex>) -> Result<()> {
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::InvalidSimplex("empty facet".into()));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidSimplex(format!("repeated vertex in {f:?}")));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= labels.len()) {
                return Err(Error::InvalidSimplex(format!("vertex {v} out of range")));
            }
            if s.len() > 20 {
                return Err(Error::InvalidSimplex("facet dimension too large".into()));
            }
            let k = s.len();
            for mask in 1u32..(1u32 << k) {
                let face: Simplex = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                all.insert(face);
            }
        }
        Ok(())
    }

    fn from_closed_set(labels: Vec<String>, all: BTreeSet<Simplex>) -> Self {
        let dim = all.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); dim];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        // BTreeSet order is lexicographic within each length
        let index = by_dim.iter().map(|ss| ss.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { labels, by_dim, index }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Top dimension; zero for the empty complex.
    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn count(&self, d: usize) -> usize {
        self.by_dim.get(d).map_or(0, |v| v.len())
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.count(0)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|v| v.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, v)| if d % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) }).sum()
    }

    pub fn total_simplices(&self) -> usize {
        self.by_dim.iter().map(|v| v.len()).sum()
    }

    /// Simplices not contained in a larger simplex.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<Simplex> = BTreeSet::new();
        for d in 1..self.by_dim.len() {
            for s in &self.by_dim[d] {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    covered.insert(f);
                }
            }
        }
        self.by_dim.iter().flatten().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    pub fn label_of(&self, s: &[usize]) -> String {
        let parts: Vec<&str> = s.iter().map(|&v| self.labels[v].as_str()).collect();
        format!("[{}]", parts.join(","))
    }

    pub fn is_subcomplex_of(&self, k: &SimplicialComplex) -> bool {
        self.labels == k.labels && self.by_dim.iter().flatten().all(|s| k.contains(s))
    }

    /// Subcomplex of all faces of simplices containing `sigma`.
    pub fn closed_star(&self, sigma: &[usize]) -> SimplicialComplex {
        let mut all = BTreeSet::new();
        for ss in &self.by_dim {
            for s in ss {
                if sigma.iter().all(|v| s.binary_search(v).is_ok()) {
                    let k = s.len();
                    for mask in 1u32..(1u32 << k) {
                        all.insert((0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect::<Simplex>());
                    }
                }
            }
        }
        Self::from_closed_set(self.labels.clone(), all)
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let all: BTreeSet<Simplex> = self.by_dim.iter().chain(other.by_dim.iter()).flatten().cloned().collect();
        Self::from_closed_set(self.labels.clone(), all)
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let all: BTreeSet<Simplex> = self.by_dim.iter().flatten().filter(|s| other.contains(s)).cloned().collect();
        Self::from_closed_set(self.labels.clone(), all)
    }

    /// Restriction of `d`-cochains from `self` to the subcomplex `sub`.
    pub fn restriction_matrix(&self, sub: &SimplicialComplex, d: usize) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(sub.count(d), self.count(d));
        for (i, s) in sub.simplices(d).iter().enumerate() {
            let j = self
                .index_of(s)
                .ok_or_else(|| Error::NotASubcomplex(format!("{} is not a simplex", self.label_of(s))))?;
            m.set(i, j, BigInt::one());
        }
        Ok(m)
    }

    /// Signed boundary faces of a `d`-simplex with `d >= 1`: `(index of face, sign)`.
    pub(crate) fn faces(&self, d: usize, idx: usize) -> Vec<(usize, i64)> {
        let s = &self.by_dim[d][idx];
        (0..s.len())
            .map(|i| {
                let mut f = s.clone();
                f.remove(i);
                let fi = self.index_of(&f).expect("complex is closed under faces");
                (fi, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_a_triangle() {
        let k = SimplicialComplex::from_facets(vec!["a".into(), "b".into(), "c".into()], &[vec![2, 0, 1]]).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert_eq!(k.euler_characteristic(), 1);
        assert_eq!(k.facets(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn invalid_facets() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(SimplicialComplex::from_facets(labels.clone(), &[vec![0, 0]]).is_err());
        assert!(SimplicialComplex::from_facets(labels, &[vec![0, 5]]).is_err());
    }
}
