//! Chain-level comparisons between twisted complexes: gauge transformations
//! for cohomologous twists and the untwisting of topologically trivial
//! differential twists.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::complex::{parity_layout, TwistedComplex};
use super::twist::Twist;
use crate::abelian::linalg::{solve, Q};
use crate::abelian::snf::solve_integer;
use crate::abelian::{DiffCohGroup, GroupMap, RatMatrix};
use crate::deligne::cochain::to_q;
use crate::deligne::{left_product_matrix, DiffCochain, Layout, Parity, PeriodicDeligne, Slot};
use crate::error::{Error, Result};
use crate::simplicial::cochain::cup_left_matrix;
use crate::simplicial::{coboundary, SimplicialComplex};

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    /// The comparison operators intertwine the differentials and are invertible.
    pub chain_level: bool,
    /// The induced maps on cohomology are isomorphisms (checked when `chain_level`).
    pub induced_isomorphism: bool,
    pub source: (DiffCohGroup, DiffCohGroup),
    pub target: (DiffCohGroup, DiffCohGroup),
    /// Trivializing cochain used for the comparison.
    pub trivializing: Vec<String>,
}

impl EquivalenceReport {
    pub fn descriptors_equal(&self) -> bool {
        self.source == self.target
    }
}

/// `Σ_j L^j / j!` for nilpotent `L`; `None` if `L` is not nilpotent within `bound` steps.
fn exp_nilpotent(l: &RatMatrix, sign: i64, bound: usize) -> Option<RatMatrix> {
    let n = l.rows();
    let mut out = RatMatrix::identity(n);
    let mut term = RatMatrix::identity(n);
    let s = Q::from_integer(BigInt::from(sign));
    for j in 1..=bound + 1 {
        term = l.mul(&term).scale(&(s.clone() / Q::from_integer(BigInt::from(j))));
        if term.is_zero() {
            return Some(out);
        }
        out = out.add(&term);
    }
    None
}

fn is_integral(m: &RatMatrix) -> bool {
    m.to_integer().is_some()
}

fn identity_like(a: &RatMatrix) -> bool {
    a.rows() == a.cols() && a.sub(&RatMatrix::identity(a.rows())).is_zero()
}

/// Integral twists of equal degree with `h - h2 = δb`: conjugation by `e^{b∪}`.
pub fn gauge_integral(k: &SimplicialComplex, h: &Twist, h2: &Twist) -> Result<EquivalenceReport> {
    let (Twist::Integral { degree: p, cochain: c1 }, Twist::Integral { degree: p2, cochain: c2 }) = (h, h2) else {
        return Err(Error::TwistKind("gauge_integral needs two integral twists".into()));
    };
    if p != p2 {
        return Err(Error::DegreeMismatch(format!("twists of degrees {p} and {p2}")));
    }
    let p = *p;
    let diff: Vec<BigInt> = c1.iter().zip(c2).map(|(a, b)| a - b).collect();
    let b = solve_integer(&coboundary(k, p - 1), &diff)
        .ok_or_else(|| Error::NotACocycle("twists are not cohomologous".into()))?;
    let a = TwistedComplex::integral(k, Some(h))?;
    let t = TwistedComplex::integral(k, Some(h2))?;
    let bq = to_q(&b);
    let layouts = [parity_layout(k, Parity::Ev), parity_layout(k, Parity::Odd)];
    let mut chain_level = p >= 3;
    let mut ops = Vec::new();
    for par in [Parity::Ev, Parity::Odd] {
        let lay = &layouts[par.offset()];
        let mut l = RatMatrix::zeros(lay.total(), lay.total());
        for blk in lay.blocks() {
            if let Some(tb) = lay.block(Slot::C, blk.degree + p - 1) {
                l.add_block(tb.offset, blk.offset, &cup_left_matrix(k, &bq, p - 1, blk.degree));
            }
        }
        match (exp_nilpotent(&l, 1, k.dim() + 1), exp_nilpotent(&l, -1, k.dim() + 1)) {
            (Some(e), Some(ei)) if chain_level => {
                chain_level &= identity_like(&e.mul(&ei)) && is_integral(&e) && is_integral(&ei);
                ops.push(e);
            }
            _ => chain_level = false,
        }
    }
    let mut induced_isomorphism = false;
    if chain_level {
        for par in [Parity::Ev, Parity::Odd] {
            let da = a.integral_differential(par).expect("integral").to_rational();
            let dt = t.integral_differential(par).expect("integral").to_rational();
            let (e_src, e_dst) = (&ops[par.offset()], &ops[par.flip().offset()]);
            chain_level &= dt.mul(e_src).sub(&e_dst.mul(&da)).is_zero();
        }
        if chain_level {
            induced_isomorphism = [Parity::Ev, Parity::Odd].iter().all(|&par| {
                GroupMap::new(a.subquotient(par), t.subquotient(par), ops[par.offset()].clone())
                    .map(|g| g.is_injective() && g.is_surjective())
                    .unwrap_or(false)
            });
        }
    }
    Ok(EquivalenceReport {
        chain_level,
        induced_isomorphism,
        source: a.cohomology(),
        target: t.cohomology(),
        trivializing: b.iter().map(|x| x.to_string()).collect(),
    })
}

/// Comparison operators `Φ ∘ Ψ` between the `ĥ`-twisted and the untwisted
/// periodic Deligne complex of one parity, for each degree in the window.
struct Untwisting {
    psi: Vec<RatMatrix>,
    phi: Vec<RatMatrix>,
}

fn omega_shift(k: &SimplicialComplex, kappa: &[Q], p: usize, lay: &Layout) -> RatMatrix {
    let mut n = RatMatrix::zeros(lay.total(), lay.total());
    for blk in lay.blocks().iter().filter(|b| b.slot == Slot::Omega) {
        if let Some(t) = lay.block(Slot::Omega, blk.degree + p - 1) {
            n.add_block(t.offset, blk.offset, &cup_left_matrix(k, kappa, p - 1, blk.degree));
        }
    }
    n
}

/// Untwisting of a differential twist whose integral part is a coboundary:
/// `ĥ = ĥ' + D(b, 0, 0)` with `ĥ' = (0, κ, δκ)`, then `Ψ = 1 + (b,0,0)·`
/// carries `D + ĥ` to `D + ĥ'` and `Φ(c, k, ω) = (c, k, ω + κ∪ω)` carries
/// `D + ĥ'` to `D`. Both identities are verified as matrices.
pub fn untwist_deligne(k: &SimplicialComplex, h: &Twist) -> Result<EquivalenceReport> {
    let Twist::Differential(hh) = h else {
        return Err(Error::TwistKind(format!("expected a differential twist, got {}", h.kind())));
    };
    let p = hh.degree;
    let b = if p == 0 { None } else { solve_integer(&coboundary(k, p - 1), &hh.c) }
        .ok_or_else(|| Error::TwistKind("the underlying integral twist is not a coboundary".into()))?;
    let bq = to_q(&b);
    let kappa: Vec<Q> = hh.k.iter().zip(&bq).map(|(x, y)| x + y).collect();
    let bhat = DiffCochain {
        weight: p,
        degree: p - 1,
        c: b.clone(),
        k: vec![Q::zero(); if p >= 2 { k.count(p - 2) } else { 0 }],
        omega: vec![Q::zero(); k.count(p - 1)],
    };
    let hprime = DiffCochain {
        weight: p,
        degree: p,
        c: vec![BigInt::zero(); k.count(p)],
        k: kappa.clone(),
        omega: hh.omega.clone(),
    };
    let twisted = TwistedComplex::deligne(k, Some(h))?;
    let plain = TwistedComplex::deligne(k, None)?;
    let mut chain_level = p >= 3;
    let mut induced_isomorphism = chain_level;
    if chain_level {
        for par in [Parity::Ev, Parity::Odd] {
            let a = PeriodicDeligne::twisted(k, par, hh.clone())?;
            let bp = PeriodicDeligne::twisted(k, par, hprime.clone())?;
            let c = PeriodicDeligne::new(k, par);
            let s = a.base();
            let mut u = Untwisting { psi: Vec::new(), phi: Vec::new() };
            for t in s - 1..=s + 2 {
                let lay = a.layout(t);
                let l = left_product_matrix(k, &bhat, &lay, &lay);
                let n = omega_shift(k, &kappa, p, &lay);
                if neumann_inverse(&l, k.dim() + 2).is_none() || neumann_inverse(&n, k.dim() + 2).is_none() {
                    chain_level = false;
                    break;
                }
                u.psi.push(RatMatrix::identity(lay.total()).add(&l));
                u.phi.push(RatMatrix::identity(lay.total()).add(&n));
            }
            if !chain_level {
                break;
            }
            for (i, t) in (s - 1..=s + 1).enumerate() {
                let ok_psi = bp.differential(t).mul(&u.psi[i]).sub(&u.psi[i + 1].mul(&a.differential(t))).is_zero();
                let ok_phi = c.differential(t).mul(&u.phi[i]).sub(&u.phi[i + 1].mul(&bp.differential(t))).is_zero();
                chain_level &= ok_psi && ok_phi;
            }
            if chain_level {
                let m = u.phi[1].mul(&u.psi[1]);
                let iso = GroupMap::new(a.subquotient(s), c.subquotient(s), m)
                    .map(|g| g.is_injective() && g.is_surjective())
                    .unwrap_or(false);
                induced_isomorphism &= iso;
            } else {
                induced_isomorphism = false;
            }
        }
    }
    Ok(EquivalenceReport {
        chain_level,
        induced_isomorphism: chain_level && induced_isomorphism,
        source: twisted.cohomology(),
        target: plain.cohomology(),
        trivializing: b.iter().map(|x| x.to_string()).collect(),
    })
}

/// `(1 + N)^{-1} = Σ (-N)^j` for nilpotent `N`.
fn neumann_inverse(n: &RatMatrix, bound: usize) -> Option<RatMatrix> {
    let mut out = RatMatrix::identity(n.rows());
    let mut term = RatMatrix::identity(n.rows());
    for _ in 0..=bound {
        term = n.mul(&term).neg();
        if term.is_zero() {
            return Some(out);
        }
        out = out.add(&term);
    }
    None
}

/// Differential twists with `ĥ - ĥ2 = D(b, β, 0)`, `b` integral: conjugation
/// by `e^{(b,β,0)·}`.
pub fn gauge_deligne(k: &SimplicialComplex, h: &Twist, h2: &Twist) -> Result<EquivalenceReport> {
    let (Twist::Differential(x), Twist::Differential(y)) = (h, h2) else {
        return Err(Error::TwistKind("gauge_deligne needs two differential twists".into()));
    };
    if x.degree != y.degree {
        return Err(Error::DegreeMismatch(format!("twists of degrees {} and {}", x.degree, y.degree)));
    }
    let p = x.degree;
    let delta = x.add(&y.neg())?;
    if delta.omega.iter().any(|v| !v.is_zero()) {
        return Err(Error::NotACocycle("twists differ in curvature".into()));
    }
    let b = solve_integer(&coboundary(k, p - 1), &delta.c)
        .ok_or_else(|| Error::NotACocycle("integral parts are not cohomologous".into()))?;
    // δβ = -(Δk + b)
    let rhs: Vec<Q> = delta.k.iter().zip(to_q(&b)).map(|(a, bb)| -(a + bb)).collect();
    let beta = if p >= 2 {
        solve(&coboundary(k, p - 2).to_rational(), &rhs)
            .ok_or_else(|| Error::NotACocycle("comparison cochains differ by a non-exact cochain".into()))?
    } else if rhs.iter().all(|v| v.is_zero()) {
        Vec::new()
    } else {
        return Err(Error::NotACocycle("comparison cochains differ".into()));
    };
    let bhat = DiffCochain { weight: p, degree: p - 1, c: b.clone(), k: beta, omega: vec![Q::zero(); k.count(p - 1)] };
    let a = TwistedComplex::deligne(k, Some(h))?;
    let t = TwistedComplex::deligne(k, Some(h2))?;
    let mut chain_level = p >= 3;
    let mut induced_isomorphism = chain_level;
    if chain_level {
        for par in [Parity::Ev, Parity::Odd] {
            let pa = PeriodicDeligne::twisted(k, par, x.clone())?;
            let pt = PeriodicDeligne::twisted(k, par, y.clone())?;
            let s = pa.base();
            let mut ops = Vec::new();
            for tt in s - 1..=s + 2 {
                let lay = pa.layout(tt);
                let l = left_product_matrix(k, &bhat, &lay, &lay);
                match (exp_nilpotent(&l, 1, k.dim() + 1), exp_nilpotent(&l, -1, k.dim() + 1)) {
                    (Some(e), Some(ei)) if identity_like(&e.mul(&ei)) => ops.push(e),
                    _ => {
                        chain_level = false;
                        break;
                    }
                }
            }
            if !chain_level {
                break;
            }
            for (i, tt) in (s - 1..=s + 1).enumerate() {
                chain_level &= pt.differential(tt).mul(&ops[i]).sub(&ops[i + 1].mul(&pa.differential(tt))).is_zero();
            }
            if chain_level {
                induced_isomorphism &= GroupMap::new(pa.subquotient(s), pt.subquotient(s), ops[1].clone())
                    .map(|g| g.is_injective() && g.is_surjective())
                    .unwrap_or(false);
            }
        }
    }
    Ok(EquivalenceReport {
        chain_level,
        induced_isomorphism: chain_level && induced_isomorphism,
        source: a.cohomology(),
        target: t.cohomology(),
        trivializing: b.iter().map(|v| v.to_string()).collect(),
    })
}
