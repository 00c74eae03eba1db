use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::abelian::linalg::Q;
use crate::error::{Error, Result};
use crate::simplicial::{coboundary, cup, SimplicialComplex};

/// Element `(c, k, ω)` of the weight-`n` Deligne cochain complex in degree
/// `m`: `c ∈ C^m(Z)`, `k ∈ C^{m-1}(Q)`, `ω ∈ C^m(Q)`, and `ω = 0` when `m < n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffCochain {
    pub weight: usize,
    pub degree: usize,
    #[serde(serialize_with = "ser_ints")]
    pub c: Vec<BigInt>,
    #[serde(serialize_with = "ser_rats")]
    pub k: Vec<Q>,
    #[serde(serialize_with = "ser_rats")]
    pub omega: Vec<Q>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_rats<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub(crate) fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

pub(crate) fn delta_q(k: &SimplicialComplex, v: &[Q], d: usize) -> Vec<Q> {
    coboundary(k, d).to_rational().apply(v)
}

fn add(a: &mut [Q], b: &[Q]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

impl DiffCochain {
    pub fn new(
        k: &SimplicialComplex,
        weight: usize,
        degree: usize,
        c: Vec<BigInt>,
        kk: Vec<Q>,
        omega: Vec<Q>,
    ) -> Result<Self> {
        let want_k = if degree == 0 { 0 } else { k.count(degree - 1) };
        if c.len() != k.count(degree) || kk.len() != want_k || omega.len() != k.count(degree) {
            return Err(Error::DegreeMismatch(format!("cochain lengths do not fit degree {degree}")));
        }
        if degree < weight && omega.iter().any(|x| !x.is_zero()) {
            return Err(Error::WeightMismatch(format!("curvature must vanish below weight {weight}")));
        }
        Ok(DiffCochain { weight, degree, c, k: kk, omega })
    }

    pub fn zero(k: &SimplicialComplex, weight: usize, degree: usize) -> Self {
        let want_k = if degree == 0 { 0 } else { k.count(degree - 1) };
        DiffCochain {
            weight,
            degree,
            c: vec![BigInt::zero(); k.count(degree)],
            k: vec![Q::zero(); want_k],
            omega: vec![Q::zero(); k.count(degree)],
        }
    }

    /// `(c, k, ω) ↦ (δc, ω - c - δk, δω)`.
    pub fn differential(&self, k: &SimplicialComplex) -> DiffCochain {
        let m = self.degree;
        let c = coboundary(k, m).apply(&self.c);
        let mut kk = self.omega.clone();
        for (x, y) in kk.iter_mut().zip(&self.c) {
            *x -= Q::from_integer(y.clone());
        }
        if m > 0 {
            let dk = delta_q(k, &self.k, m - 1);
            for (x, y) in kk.iter_mut().zip(dk) {
                *x -= y;
            }
        }
        let omega = if m + 1 >= self.weight { delta_q(k, &self.omega, m) } else { vec![Q::zero(); k.count(m + 1)] };
        DiffCochain { weight: self.weight, degree: m + 1, c, k: kk, omega }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
            && self.k.iter().all(|x| x.is_zero())
            && self.omega.iter().all(|x| x.is_zero())
    }

    pub fn is_cocycle(&self, k: &SimplicialComplex) -> bool {
        self.differential(k).is_zero()
    }

    pub fn add(&self, other: &DiffCochain) -> Result<DiffCochain> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(format!("weights {} and {}", self.weight, other.weight)));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!("degrees {} and {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (x, y) in out.c.iter_mut().zip(&other.c) {
            *x += y;
        }
        add(&mut out.k, &other.k);
        add(&mut out.omega, &other.omega);
        Ok(out)
    }

    pub fn neg(&self) -> DiffCochain {
        DiffCochain {
            weight: self.weight,
            degree: self.degree,
            c: self.c.iter().map(|x| -x).collect(),
            k: self.k.iter().map(|x| -x).collect(),
            omega: self.omega.iter().map(|x| -x).collect(),
        }
    }
}

/// Deligne-Beilinson product
/// `(c₁,k₁,ω₁)·(c₂,k₂,ω₂) = (c₁∪c₂, (-1)^{m₁} c₁∪k₂ + k₁∪ω₂, ω₁∪ω₂)`
/// of weights `n₁, n₂` landing in weight `n₁ + n₂`.
pub fn db_cup(k: &SimplicialComplex, x: &DiffCochain, y: &DiffCochain) -> Result<DiffCochain> {
    let (m1, m2) = (x.degree, y.degree);
    let check = |z: &DiffCochain| -> Result<()> {
        let want_k = if z.degree == 0 { 0 } else { k.count(z.degree - 1) };
        if z.c.len() != k.count(z.degree) || z.k.len() != want_k || z.omega.len() != k.count(z.degree) {
            return Err(Error::DegreeMismatch(format!("cochain does not live on this complex in degree {}", z.degree)));
        }
        if z.degree < z.weight && z.omega.iter().any(|v| !v.is_zero()) {
            return Err(Error::WeightMismatch(format!("curvature in degree {} below weight {}", z.degree, z.weight)));
        }
        Ok(())
    };
    check(x)?;
    check(y)?;
    let m = m1 + m2;
    let weight = x.weight + y.weight;
    // the k part of a degree dim+1 cochain still lives in degree dim
    if m > k.dim() + 1 {
        return Ok(DiffCochain::zero(k, weight, m));
    }
    let c = cup(k, &x.c, m1, &y.c, m2);
    let mut kk = vec![Q::zero(); if m == 0 { 0 } else { k.count(m - 1) }];
    if m2 >= 1 {
        let mut t = cup(k, &to_q(&x.c), m1, &y.k, m2 - 1);
        if m1 % 2 == 1 {
            t.iter_mut().for_each(|v| *v = -v.clone());
        }
        add(&mut kk, &t);
    }
    if m1 >= 1 {
        add(&mut kk, &cup(k, &x.k, m1 - 1, &y.omega, m2));
    }
    let omega = cup(k, &x.omega, m1, &y.omega, m2);
    Ok(DiffCochain { weight, degree: m, c, k: kk, omega })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::matrix::{int, rat};
    use crate::simplicial::builders::sphere;

    #[test]
    fn differential_squares_to_zero() {
        let k = sphere(2);
        let x = DiffCochain::new(
            &k,
            1,
            1,
            (0..6).map(|i| int(i - 2)).collect(),
            (0..4).map(|i| rat(i * 3 - 1)).collect(),
            (0..6).map(rat).collect(),
        )
        .unwrap();
        assert!(x.differential(&k).differential(&k).is_zero());
    }

    #[test]
    fn leibniz_rule() {
        let k = sphere(2);
        let x = DiffCochain::new(
            &k,
            0,
            0,
            vec![int(1), int(2), int(0), int(-1)],
            vec![],
            vec![rat(3), rat(1), rat(0), rat(2)],
        )
        .unwrap();
        let y = DiffCochain::new(
            &k,
            1,
            1,
            (0..6).map(|i| int(i % 3)).collect(),
            vec![rat(1), rat(-2), rat(0), rat(5)],
            (0..6).map(|i| rat(2 - i)).collect(),
        )
        .unwrap();
        let lhs = db_cup(&k, &x, &y).unwrap().differential(&k);
        let a = db_cup(&k, &x.differential(&k), &y).unwrap();
        let b = db_cup(&k, &x, &y.differential(&k)).unwrap();
        assert_eq!(lhs, a.add(&b).unwrap());
    }

    #[test]
    fn curvature_below_weight_is_rejected() {
        let k = sphere(2);
        let r = DiffCochain::new(&k, 2, 0, vec![int(0); 4], vec![], vec![rat(1), rat(0), rat(0), rat(0)]);
        assert!(matches!(r, Err(Error::WeightMismatch(_))));
    }
}
