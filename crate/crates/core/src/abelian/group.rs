use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntMatrix;
use super::snf::invariant_factors;

/// Normalizes a list of cyclic orders into invariant factors
/// `d_1 | d_2 | ...`, dropping units.
pub fn normalize_factors(orders: &[BigInt]) -> Vec<BigInt> {
    let orders: Vec<BigInt> = orders.iter().map(|o| o.abs()).filter(|o| !o.is_one() && !o.is_zero()).collect();
    if orders.len() <= 1 {
        return orders;
    }
    let n = orders.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, o) in orders.iter().enumerate() {
        m.set(i, i, o.clone());
    }
    invariant_factors(&m).torsion()
}

/// Finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(free_rank: usize, orders: &[BigInt]) -> Self {
        FgAbGroup { free_rank, torsion: normalize_factors(orders) }
    }

    pub fn zero() -> Self {
        Self::new(0, &[])
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, &[])
    }

    pub fn cyclic(order: u64) -> Self {
        if order == 0 {
            Self::free(1)
        } else {
            Self::new(0, &[BigInt::from(order)])
        }
    }

    /// Cokernel of a relation matrix whose columns are relations among `rows` generators.
    pub fn presented(relations: &IntMatrix) -> Self {
        let inv = invariant_factors(relations);
        FgAbGroup::new(relations.rows() - inv.rank, &inv.factors)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        FgAbGroup::new(self.free_rank + other.free_rank, &t)
    }

    pub fn to_diff(&self) -> DiffCohGroup {
        DiffCohGroup::new(0, 0, self.free_rank, &self.torsion)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_diff().fmt(f)
    }
}

impl Serialize for FgAbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FgAbGroup", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &FactorList(&self.torsion))?;
        st.end()
    }
}

/// `Q^v ⊕ (Q/Z)^t ⊕ Z^l ⊕ finite`. Differential cohomology groups of a finite
/// complex take this shape: a vector part, a torus, a lattice and a finite part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffCohGroup {
    vector_dim: usize,
    torus_rank: usize,
    lattice_rank: usize,
    finite_factors: Vec<BigInt>,
}

impl DiffCohGroup {
    pub fn new(vector_dim: usize, torus_rank: usize, lattice_rank: usize, finite: &[BigInt]) -> Self {
        DiffCohGroup { vector_dim, torus_rank, lattice_rank, finite_factors: normalize_factors(finite) }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0, &[])
    }

    pub fn from_u64(vector_dim: usize, torus_rank: usize, lattice_rank: usize, finite: &[u64]) -> Self {
        let f: Vec<BigInt> = finite.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(vector_dim, torus_rank, lattice_rank, &f)
    }

    pub fn vector_dim(&self) -> usize {
        self.vector_dim
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn finite_factors(&self) -> &[BigInt] {
        &self.finite_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.vector_dim == 0 && self.torus_rank == 0 && self.lattice_rank == 0 && self.finite_factors.is_empty()
    }

    /// Divisible (`Q^v ⊕ (Q/Z)^t`) with no lattice or finite part.
    pub fn is_divisible(&self) -> bool {
        self.lattice_rank == 0 && self.finite_factors.is_empty()
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.vector_dim == 0 && self.torus_rank == 0
    }

    pub fn to_fg(&self) -> Option<FgAbGroup> {
        self.is_finitely_generated().then(|| FgAbGroup::new(self.lattice_rank, &self.finite_factors))
    }

    pub fn direct_sum(&self, other: &DiffCohGroup) -> DiffCohGroup {
        let mut t = self.finite_factors.clone();
        t.extend(other.finite_factors.iter().cloned());
        DiffCohGroup::new(
            self.vector_dim + other.vector_dim,
            self.torus_rank + other.torus_rank,
            self.lattice_rank + other.lattice_rank,
            &t,
        )
    }
}

impl fmt::Display for DiffCohGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let pow = |base: &str, e: usize| {
            if e == 1 {
                base.to_string()
            } else {
                format!("{base}^{e}")
            }
        };
        if self.vector_dim > 0 {
            parts.push(pow("Q", self.vector_dim));
        }
        if self.torus_rank > 0 {
            parts.push(if self.torus_rank == 1 { "Q/Z".into() } else { format!("(Q/Z)^{}", self.torus_rank) });
        }
        if self.lattice_rank > 0 {
            parts.push(pow("Z", self.lattice_rank));
        }
        for d in &self.finite_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

struct FactorList<'a>(&'a [BigInt]);

impl Serialize for FactorList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for d in self.0 {
            match u64::try_from(d) {
                Ok(x) => seq.serialize_element(&x)?,
                Err(_) => seq.serialize_element(&d.to_string())?,
            }
        }
        seq.end()
    }
}

impl Serialize for DiffCohGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DiffCohGroup", 4)?;
        st.serialize_field("vector_dim", &self.vector_dim)?;
        st.serialize_field("torus_rank", &self.torus_rank)?;
        st.serialize_field("lattice_rank", &self.lattice_rank)?;
        st.serialize_field("finite_factors", &FactorList(&self.finite_factors))?;
        st.end()
    }
}

/// A factor as written by [`FactorList`]: a number, or a decimal string when it does not fit in `u64`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Factor {
    Small(u64),
    Big(String),
}

fn read_factors<E: serde::de::Error>(fs: Vec<Factor>) -> Result<Vec<BigInt>, E> {
    let out: Vec<BigInt> = fs
        .into_iter()
        .map(|f| match f {
            Factor::Small(x) => Ok(BigInt::from(x)),
            Factor::Big(s) => s.parse::<BigInt>().map_err(|_| E::custom(format!("bad factor `{s}`"))),
        })
        .collect::<Result<_, E>>()?;
    if normalize_factors(&out) != out {
        return Err(E::custom("factors must be at least 2 and form a divisibility chain"));
    }
    Ok(out)
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            free_rank: usize,
            torsion: Vec<Factor>,
        }
        let r = Raw::deserialize(d)?;
        Ok(FgAbGroup { free_rank: r.free_rank, torsion: read_factors(r.torsion)? })
    }
}

impl<'de> Deserialize<'de> for DiffCohGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            vector_dim: usize,
            torus_rank: usize,
            lattice_rank: usize,
            finite_factors: Vec<Factor>,
        }
        let r = Raw::deserialize(d)?;
        Ok(DiffCohGroup {
            vector_dim: r.vector_dim,
            torus_rank: r.torus_rank,
            lattice_rank: r.lattice_rank,
            finite_factors: read_factors(r.finite_factors)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_normalize() {
        let g = FgAbGroup::new(1, &[BigInt::from(4), BigInt::from(6), BigInt::from(1)]);
        assert_eq!(g.torsion(), &[BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g.to_string(), "Z ⊕ Z/2 ⊕ Z/12");
    }

    #[test]
    fn display_diff() {
        assert_eq!(DiffCohGroup::from_u64(3, 2, 1, &[]).to_string(), "Q^3 ⊕ (Q/Z)^2 ⊕ Z");
        assert_eq!(DiffCohGroup::zero().to_string(), "0");
        assert_eq!(DiffCohGroup::from_u64(0, 1, 0, &[]).to_string(), "Q/Z");
    }
}
