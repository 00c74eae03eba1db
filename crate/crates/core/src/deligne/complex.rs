use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cochain::{to_q, DiffCochain};
use super::layout::{Layout, Slot};
use crate::abelian::linalg::Q;
use crate::abelian::{DiffCohGroup, RatMatrix, Subgroup, Subquotient};
use crate::error::{Error, Result};
use crate::simplicial::cochain::{cup_left_matrix, cup_right_matrix};
use crate::simplicial::{coboundary, SimplicialComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Ev,
    Odd,
}

impl Parity {
    pub fn offset(self) -> usize {
        match self {
            Parity::Ev => 0,
            Parity::Odd => 1,
        }
    }

    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Ev
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Ev => Parity::Odd,
            Parity::Odd => Parity::Ev,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Ev => "ev",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ev" | "even" => Ok(Parity::Ev),
            "odd" => Ok(Parity::Odd),
            _ => Err(format!("unknown parity `{s}` (expected ev or odd)")),
        }
    }
}

/// Element of the periodic complex: one triple per weight of the right parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicDiffCochain {
    pub parity: Parity,
    pub components: Vec<DiffCochain>,
}

impl PeriodicDiffCochain {
    pub fn new(parity: Parity, components: Vec<DiffCochain>) -> Result<Self> {
        for c in &components {
            if Parity::of(c.weight) != parity || c.weight != c.degree {
                return Err(Error::WeightMismatch(format!(
                    "component of weight {} and degree {} in the {parity} complex",
                    c.weight, c.degree
                )));
            }
        }
        Ok(PeriodicDiffCochain { parity, components })
    }

    /// Coordinates in the degree-`s` layout of the periodic complex.
    pub fn to_vector(&self, layout: &Layout) -> Vec<Q> {
        let mut v = vec![Q::zero(); layout.total()];
        for x in &self.components {
            layout.write(&mut v, Slot::C, x.degree, &to_q(&x.c));
            if x.degree > 0 {
                layout.write(&mut v, Slot::K, x.degree - 1, &x.k);
            }
            layout.write(&mut v, Slot::Omega, x.degree, &x.omega);
        }
        v
    }
}

fn place(m: &mut RatMatrix, dst: &Layout, slot: Slot, degree: usize, col_off: usize, block: &RatMatrix) {
    if block.rows() == 0 || block.cols() == 0 {
        return;
    }
    if let Some(t) = dst.block(slot, degree) {
        m.add_block(t.offset, col_off, block);
    }
}

fn neg_identity(n: usize) -> RatMatrix {
    RatMatrix::identity(n).neg()
}

/// Matrix of `D(c, k, ω) = (δc, ω - c - δk, δω)` from `src` to `dst`; blocks
/// missing from `dst` are dropped.
pub fn triple_differential(k: &SimplicialComplex, src: &Layout, dst: &Layout) -> RatMatrix {
    let mut m = RatMatrix::zeros(dst.total(), src.total());
    for b in src.blocks() {
        let delta = coboundary(k, b.degree).to_rational();
        match b.slot {
            Slot::C => {
                place(&mut m, dst, Slot::C, b.degree + 1, b.offset, &delta);
                place(&mut m, dst, Slot::K, b.degree, b.offset, &neg_identity(b.len));
            }
            Slot::K => place(&mut m, dst, Slot::K, b.degree + 1, b.offset, &delta.neg()),
            Slot::Omega => {
                place(&mut m, dst, Slot::K, b.degree, b.offset, &RatMatrix::identity(b.len));
                place(&mut m, dst, Slot::Omega, b.degree + 1, b.offset, &delta);
            }
        }
    }
    m
}

fn cup_l(k: &SimplicialComplex, a: &[Q], p: usize, q: usize) -> RatMatrix {
    cup_left_matrix(k, a, p, q)
}

fn cup_r(k: &SimplicialComplex, b: &[Q], p: usize, q: usize) -> RatMatrix {
    cup_right_matrix(k, b, p, q)
}

/// Matrix of `x ↦ a·x` (Deligne-Beilinson product on the left).
pub fn left_product_matrix(k: &SimplicialComplex, a: &DiffCochain, src: &Layout, dst: &Layout) -> RatMatrix {
    let p = a.degree;
    let ac = to_q(&a.c);
    let sign = if p.is_multiple_of(2) { Q::one() } else { -Q::one() };
    let mut m = RatMatrix::zeros(dst.total(), src.total());
    for b in src.blocks() {
        let q = b.degree;
        if p + q > k.dim() + 1 {
            continue;
        }
        match b.slot {
            Slot::C => place(&mut m, dst, Slot::C, p + q, b.offset, &cup_l(k, &ac, p, q)),
            Slot::K => place(&mut m, dst, Slot::K, p + q, b.offset, &cup_l(k, &ac, p, q).scale(&sign)),
            Slot::Omega => {
                if p >= 1 {
                    place(&mut m, dst, Slot::K, p - 1 + q, b.offset, &cup_l(k, &a.k, p - 1, q));
                }
                place(&mut m, dst, Slot::Omega, p + q, b.offset, &cup_l(k, &a.omega, p, q));
            }
        }
    }
    m
}

/// Matrix of `x ↦ x·u` (Deligne-Beilinson product on the right).
pub fn right_product_matrix(k: &SimplicialComplex, u: &DiffCochain, src: &Layout, dst: &Layout) -> RatMatrix {
    let q = u.degree;
    let uc = to_q(&u.c);
    let mut m = RatMatrix::zeros(dst.total(), src.total());
    for b in src.blocks() {
        let p = b.degree;
        if p + q > k.dim() + 1 {
            continue;
        }
        match b.slot {
            Slot::C => {
                place(&mut m, dst, Slot::C, p + q, b.offset, &cup_r(k, &uc, p, q));
                if q >= 1 {
                    let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
                    place(&mut m, dst, Slot::K, p + q - 1, b.offset, &cup_r(k, &u.k, p, q - 1).scale(&sign));
                }
            }
            Slot::K => place(&mut m, dst, Slot::K, p + q, b.offset, &cup_r(k, &u.omega, p, q)),
            Slot::Omega => place(&mut m, dst, Slot::Omega, p + q, b.offset, &cup_r(k, &u.omega, p, q)),
        }
    }
    m
}

/// `ker(next) / im(prev)` inside the standard mixed group of `here`.
pub fn layout_subquotient(prev_src: &Layout, prev: &RatMatrix, here: &Layout, next: &RatMatrix) -> Subquotient {
    let num = here.standard().kernel_of(next);
    let den = prev_src.standard().image(prev);
    Subquotient::new(num, den).expect("the triple differential squares to zero")
}

fn weight_layout(k: &SimplicialComplex, n: usize, m: usize) -> Layout {
    let mut slots = vec![(Slot::C, m)];
    if m >= 1 {
        slots.push((Slot::K, m - 1));
    }
    if m >= n {
        slots.push((Slot::Omega, m));
    }
    Layout::new(k, &slots)
}

/// Subquotient model of `Ĥⁿ(K)` in weight `n`.
pub fn diff_cohomology_model(k: &SimplicialComplex, n: usize) -> (Layout, Subquotient) {
    let here = weight_layout(k, n, n);
    let next = weight_layout(k, n, n + 1);
    let d = triple_differential(k, &here, &next);
    let (prev_src, prev) = if n == 0 {
        (Layout::empty(), RatMatrix::zeros(here.total(), 0))
    } else {
        let p = weight_layout(k, n, n - 1);
        let dp = triple_differential(k, &p, &here);
        (p, dp)
    };
    let sq = layout_subquotient(&prev_src, &prev, &here, &d);
    (here, sq)
}

/// `Ĥⁿ(K)` of the weight-`n` Deligne complex.
pub fn diff_cohomology(k: &SimplicialComplex, n: usize) -> DiffCohGroup {
    diff_cohomology_model(k, n).1.group()
}

/// Periodic (Laurent) Deligne complex of one parity, optionally twisted by a
/// Deligne cocycle `ĥ` of odd degree: differential `D + ĥ·`. In degree `T`
/// the blocks are `c_m` for `m ≡ T`, `k_m` for `m + 1 ≡ T`, and `ω_m` for
/// `m ≡ T` once `T` reaches the parity offset.
#[derive(Clone, Debug)]
pub struct PeriodicDeligne {
    pub complex: SimplicialComplex,
    pub parity: Parity,
    pub twist: Option<DiffCochain>,
}

impl PeriodicDeligne {
    pub fn new(k: &SimplicialComplex, parity: Parity) -> Self {
        PeriodicDeligne { complex: k.clone(), parity, twist: None }
    }

    pub fn twisted(k: &SimplicialComplex, parity: Parity, twist: DiffCochain) -> Result<Self> {
        if twist.degree.is_multiple_of(2) {
            return Err(Error::DegreeMismatch(format!("twist of even degree {}", twist.degree)));
        }
        if twist.weight != twist.degree {
            return Err(Error::WeightMismatch(format!("twist of degree {} in weight {}", twist.degree, twist.weight)));
        }
        if !twist.is_cocycle(k) {
            return Err(Error::NotACocycle("Deligne twist is not closed".into()));
        }
        Ok(PeriodicDeligne { complex: k.clone(), parity, twist: Some(twist) })
    }

    /// Offset `s`: the periodic cohomology is the degree-`s` group.
    pub fn base(&self) -> i64 {
        self.parity.offset() as i64
    }

    pub fn layout(&self, t: i64) -> Layout {
        let k = &self.complex;
        let par = t.rem_euclid(2) as usize;
        let mut slots = Vec::new();
        for m in 0..=k.dim() {
            if m % 2 == par {
                slots.push((Slot::C, m));
            }
            if (m + 1) % 2 == par {
                slots.push((Slot::K, m));
            }
            if m % 2 == par && t >= self.base() {
                slots.push((Slot::Omega, m));
            }
        }
        Layout::new(k, &slots)
    }

    pub fn differential(&self, t: i64) -> RatMatrix {
        let (src, dst) = (self.layout(t), self.layout(t + 1));
        let mut d = triple_differential(&self.complex, &src, &dst);
        if let Some(h) = &self.twist {
            d = d.add(&left_product_matrix(&self.complex, h, &src, &dst));
        }
        d
    }

    pub fn subquotient(&self, t: i64) -> Subquotient {
        layout_subquotient(&self.layout(t - 1), &self.differential(t - 1), &self.layout(t), &self.differential(t))
    }

    pub fn cohomology_at(&self, t: i64) -> DiffCohGroup {
        self.subquotient(t).group()
    }

    pub fn cohomology(&self) -> DiffCohGroup {
        self.cohomology_at(self.base())
    }

    pub fn cocycles(&self, t: i64) -> Subgroup {
        self.layout(t).standard().kernel_of(&self.differential(t))
    }
}

/// Degree-`s` cohomology of the assembled periodic complex.
pub fn periodic_deligne_direct(k: &SimplicialComplex, parity: Parity) -> DiffCohGroup {
    PeriodicDeligne::new(k, parity).cohomology()
}

/// Weights contributing to the splitting, with their groups.
pub fn periodic_deligne_weights(k: &SimplicialComplex, parity: Parity) -> Vec<(usize, DiffCohGroup)> {
    (parity.offset()..=k.dim() + 1).step_by(2).map(|n| (n, diff_cohomology(k, n))).collect()
}

/// `⊕ Ĥ^{2j + s}(K)` over the weights up to `dim K + 1`.
pub fn periodic_deligne_split(k: &SimplicialComplex, parity: Parity) -> DiffCohGroup {
    periodic_deligne_weights(k, parity).into_iter().fold(DiffCohGroup::zero(), |acc, (_, g)| acc.direct_sum(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders::{circle, point, sphere};

    #[test]
    fn point_groups() {
        let p = point();
        assert_eq!(diff_cohomology(&p, 0), DiffCohGroup::from_u64(0, 0, 1, &[]));
        assert_eq!(diff_cohomology(&p, 1), DiffCohGroup::from_u64(0, 1, 0, &[]));
        assert_eq!(diff_cohomology(&p, 2), DiffCohGroup::zero());
        assert_eq!(periodic_deligne_direct(&p, Parity::Ev), DiffCohGroup::from_u64(0, 0, 1, &[]));
        assert_eq!(periodic_deligne_direct(&p, Parity::Odd), DiffCohGroup::from_u64(0, 1, 0, &[]));
    }

    #[test]
    fn two_sphere() {
        let s = sphere(2);
        let h2 = diff_cohomology(&s, 2);
        assert_eq!((h2.torus_rank(), h2.lattice_rank()), (0, 1));
        let ev = periodic_deligne_direct(&s, Parity::Ev);
        assert_eq!(ev, periodic_deligne_split(&s, Parity::Ev));
        assert_eq!((ev.torus_rank(), ev.lattice_rank()), (0, 2));
        let odd = periodic_deligne_direct(&s, Parity::Odd);
        assert_eq!(odd, periodic_deligne_split(&s, Parity::Odd));
        assert_eq!((odd.torus_rank(), odd.lattice_rank()), (2, 0));
    }

    #[test]
    fn circle_direct_matches_split() {
        let c = circle(6).unwrap();
        for par in [Parity::Ev, Parity::Odd] {
            assert_eq!(periodic_deligne_direct(&c, par), periodic_deligne_split(&c, par));
        }
    }
}
