use num_bigint::BigInt;
use num_traits::Zero;

use super::twist::{obstruction, Twist};
use crate::abelian::linalg::Q;
use crate::abelian::{DiffCohGroup, FgAbGroup, GroupMap, IntMatrix, RatMatrix, ScalarKind, Subgroup, Subquotient};
use crate::deligne::cochain::to_q;
use crate::deligne::{right_product_matrix, Layout, Parity, PeriodicDeligne, PeriodicDiffCochain, Slot};
use crate::error::{Error, Result};
use crate::simplicial::cochain::{cohomology_at, cup_left_matrix, cup_right_matrix};
use crate::simplicial::{coboundary, twisted_coboundary, SignCocycle, SimplicialComplex};

#[derive(Clone, Debug)]
enum Body {
    /// `maps[p]` goes from parity `p` to the other parity.
    Integral {
        layouts: [Layout; 2],
        maps: [IntMatrix; 2],
    },
    Deligne {
        ev: Box<PeriodicDeligne>,
        odd: Box<PeriodicDeligne>,
    },
}

/// Periodic cochains with a twisted differential: integral cochains with
/// `δ + h∪` (or the sign-twisted `δ_ε`), or Deligne triples with `D + ĥ·`.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    complex: SimplicialComplex,
    twist: Option<Twist>,
    body: Body,
    shifted: bool,
}

pub(crate) fn parity_layout(k: &SimplicialComplex, par: Parity) -> Layout {
    let slots: Vec<(Slot, usize)> = (0..=k.dim()).filter(|m| m % 2 == par.offset()).map(|m| (Slot::C, m)).collect();
    Layout::new(k, &slots)
}

fn idx(p: Parity) -> usize {
    p.offset()
}

fn nonzero_entries(m: &IntMatrix) -> usize {
    (0..m.rows()).map(|r| m.row(r).iter().filter(|x| !x.is_zero()).count()).sum()
}

fn integral_maps(k: &SimplicialComplex, twist: Option<&Twist>) -> Result<([Layout; 2], [IntMatrix; 2])> {
    let layouts = [parity_layout(k, Parity::Ev), parity_layout(k, Parity::Odd)];
    let mut maps = [
        IntMatrix::zeros(layouts[1].total(), layouts[0].total()),
        IntMatrix::zeros(layouts[0].total(), layouts[1].total()),
    ];
    for p in [Parity::Ev, Parity::Odd] {
        let (src, dst) = (&layouts[idx(p)], &layouts[idx(p.flip())]);
        let m = &mut maps[idx(p)];
        for b in src.blocks() {
            let d = b.degree;
            let delta = match twist {
                Some(Twist::Sign(e)) => twisted_coboundary(k, e, d),
                _ => coboundary(k, d),
            };
            if let Some(t) = dst.block(Slot::C, d + 1) {
                m.add_block(t.offset, b.offset, &delta);
            }
            if let Some(Twist::Integral { degree, cochain }) = twist {
                if let Some(t) = dst.block(Slot::C, d + degree) {
                    m.add_block(t.offset, b.offset, &cup_left_matrix(k, cochain, *degree, d));
                }
            }
        }
    }
    Ok((layouts, maps))
}

impl TwistedComplex {
    /// Integral periodic cochains, twisted by a sign or an integral twist. A
    /// differential twist acts through its underlying integral cocycle.
    pub fn integral(k: &SimplicialComplex, twist: Option<&Twist>) -> Result<Self> {
        let twist = match twist {
            Some(t @ Twist::Differential(_)) => t.underlying_integral(),
            t => t.cloned(),
        };
        if let Some(t) = &twist {
            if let Some(ob) = obstruction(k, t) {
                if !ob.is_zero() {
                    return Err(Error::ObstructionNonzero { nonzero: ob.nonzero_count() });
                }
            }
        }
        let (layouts, maps) = integral_maps(k, twist.as_ref())?;
        for p in [0, 1] {
            let sq = maps[1 - p].mul(&maps[p]);
            if !sq.is_zero() {
                return Err(Error::ObstructionNonzero { nonzero: nonzero_entries(&sq) });
            }
        }
        Ok(TwistedComplex { complex: k.clone(), twist, body: Body::Integral { layouts, maps }, shifted: false })
    }

    pub fn sign(k: &SimplicialComplex, eps: &SignCocycle) -> Result<Self> {
        Self::integral(k, Some(&Twist::Sign(eps.clone())))
    }

    /// Periodic Deligne complexes of both parities, twisted by a differential twist.
    pub fn deligne(k: &SimplicialComplex, twist: Option<&Twist>) -> Result<Self> {
        let (ev, odd) = match twist {
            None => (PeriodicDeligne::new(k, Parity::Ev), PeriodicDeligne::new(k, Parity::Odd)),
            Some(t @ Twist::Differential(h)) => {
                let ob = obstruction(k, t).expect("differential twist");
                if !ob.is_zero() {
                    return Err(Error::ObstructionNonzero { nonzero: ob.nonzero_count() });
                }
                (
                    PeriodicDeligne::twisted(k, Parity::Ev, h.clone())?,
                    PeriodicDeligne::twisted(k, Parity::Odd, h.clone())?,
                )
            }
            Some(t) => {
                return Err(Error::TwistKind(format!(
                    "Deligne coefficients need a differential twist, got {}",
                    t.kind()
                )))
            }
        };
        for p in [&ev, &odd] {
            let s = p.base();
            for t in s - 1..=s {
                if !p.differential(t + 1).mul(&p.differential(t)).is_zero() {
                    return Err(Error::ObstructionNonzero { nonzero: 1 });
                }
            }
        }
        Ok(TwistedComplex {
            complex: k.clone(),
            twist: twist.cloned(),
            body: Body::Deligne { ev: Box::new(ev), odd: Box::new(odd) },
            shifted: false,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn twist(&self) -> Option<&Twist> {
        self.twist.as_ref()
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.body, Body::Integral { .. })
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    /// Re-verifies `d² = 0` by matrix multiplication.
    pub fn is_square_zero(&self) -> bool {
        match &self.body {
            Body::Integral { maps, .. } => maps[1].mul(&maps[0]).is_zero() && maps[0].mul(&maps[1]).is_zero(),
            Body::Deligne { ev, odd } => [ev, odd].iter().all(|p| {
                let s = p.base();
                (s - 1..=s).all(|t| p.differential(t + 1).mul(&p.differential(t)).is_zero())
            }),
        }
    }

    /// Degree shift by one: even and odd exchange.
    pub fn parity_shift(&self) -> TwistedComplex {
        TwistedComplex { shifted: !self.shifted, ..self.clone() }
    }

    fn underlying(&self, p: Parity) -> Parity {
        if self.shifted {
            p.flip()
        } else {
            p
        }
    }

    /// Differential leaving parity `p` (before any shift), integral case.
    pub fn integral_differential(&self, p: Parity) -> Option<&IntMatrix> {
        match &self.body {
            Body::Integral { maps, .. } => Some(&maps[idx(self.underlying(p))]),
            Body::Deligne { .. } => None,
        }
    }

    pub fn layout(&self, p: Parity) -> Layout {
        let p = self.underlying(p);
        match &self.body {
            Body::Integral { layouts, .. } => layouts[idx(p)].clone(),
            Body::Deligne { ev, odd } => match p {
                Parity::Ev => ev.layout(ev.base()),
                Parity::Odd => odd.layout(odd.base()),
            },
        }
    }

    pub fn periodic(&self, p: Parity) -> Option<&PeriodicDeligne> {
        match &self.body {
            Body::Integral { .. } => None,
            Body::Deligne { ev, odd } => Some(match self.underlying(p) {
                Parity::Ev => ev,
                Parity::Odd => odd,
            }),
        }
    }

    /// Cohomology of parity `p` as `cocycles / coboundaries` in mixed coordinates.
    pub fn subquotient(&self, p: Parity) -> Subquotient {
        let q = self.underlying(p);
        match &self.body {
            Body::Integral { layouts, maps } => {
                let n = layouts[idx(q)].total();
                let num = Subgroup::full_integral(n).kernel_of(&maps[idx(q)].to_rational());
                let den =
                    Subgroup::full_integral(layouts[idx(q.flip())].total()).image(&maps[idx(q.flip())].to_rational());
                Subquotient::new(num, den).expect("square-zero certified")
            }
            Body::Deligne { .. } => {
                let pd = self.periodic(p).expect("Deligne body");
                pd.subquotient(pd.base())
            }
        }
    }

    /// `(ev, odd)` integral groups; `None` for Deligne coefficients.
    pub fn integral_groups(&self) -> Option<(FgAbGroup, FgAbGroup)> {
        match &self.body {
            Body::Integral { maps, .. } => {
                let ev = cohomology_at(&maps[1], &maps[0], ScalarKind::Integer).expect("square-zero certified");
                let odd = cohomology_at(&maps[0], &maps[1], ScalarKind::Integer).expect("square-zero certified");
                Some(if self.shifted { (odd, ev) } else { (ev, odd) })
            }
            Body::Deligne { .. } => None,
        }
    }

    /// `(ev, odd)` descriptors.
    pub fn cohomology(&self) -> (DiffCohGroup, DiffCohGroup) {
        match self.integral_groups() {
            Some((ev, odd)) => (ev.to_diff(), odd.to_diff()),
            None => {
                let g = |p: Parity| {
                    let pd = self.periodic(p).expect("Deligne body");
                    pd.cohomology()
                };
                (g(Parity::Ev), g(Parity::Odd))
            }
        }
    }
}

/// Twisted periodic integral cohomology `(ev, odd)` for an integral twist.
pub fn twisted_periodic_cohomology(k: &SimplicialComplex, h: &Twist) -> Result<(FgAbGroup, FgAbGroup)> {
    if !matches!(h, Twist::Integral { .. }) {
        return Err(Error::TwistKind(format!("expected an integral twist, got {}", h.kind())));
    }
    Ok(TwistedComplex::integral(k, Some(h))?.integral_groups().expect("integral body"))
}

/// Periodic cohomology with coefficients in the sign local system.
pub fn twisted_sign_cohomology(k: &SimplicialComplex, eps: &SignCocycle) -> Result<(FgAbGroup, FgAbGroup)> {
    Ok(TwistedComplex::sign(k, eps)?.integral_groups().expect("integral body"))
}

/// Twisted periodic Deligne cohomology `(ev, odd)`.
pub fn twisted_deligne_cohomology(k: &SimplicialComplex, h: &Twist) -> Result<(DiffCohGroup, DiffCohGroup)> {
    if !matches!(h, Twist::Differential(_)) {
        return Err(Error::TwistKind(format!("expected a differential twist, got {}", h.kind())));
    }
    Ok(TwistedComplex::deligne(k, Some(h))?.cohomology())
}

/// Right cup with an untwisted integral periodic cocycle `u` of parity `pu`,
/// as a map from the parity-`px` cohomology of `tc`.
pub fn integral_action_map(tc: &TwistedComplex, u: &[BigInt], pu: Parity, px: Parity) -> Result<GroupMap> {
    if !tc.is_integral() {
        return Err(Error::TwistKind("integral action on a Deligne complex".into()));
    }
    let k = tc.complex();
    let ul = parity_layout(k, pu);
    if u.len() != ul.total() {
        return Err(Error::DegreeMismatch(format!("{} coefficients for a layout of size {}", u.len(), ul.total())));
    }
    let du = integral_maps(k, None)?.1[idx(pu)].apply(u);
    if du.iter().any(|x| !x.is_zero()) {
        return Err(Error::NotACocycle("acting class is not closed".into()));
    }
    let target = Parity::of(px.offset() + pu.offset());
    let (src, dst) = (tc.layout(px), tc.layout(target));
    let mut m = RatMatrix::zeros(dst.total(), src.total());
    for ub in ul.blocks() {
        let uq = to_q(&u[ub.offset..ub.offset + ub.len]);
        for b in src.blocks() {
            if let Some(t) = dst.block(Slot::C, b.degree + ub.degree) {
                m.add_block(t.offset, b.offset, &cup_right_matrix(k, &uq, b.degree, ub.degree));
            }
        }
    }
    Ok(GroupMap::new(tc.subquotient(px), tc.subquotient(target), m)?)
}

/// Deligne-Beilinson product on the right with an untwisted periodic cocycle.
pub fn deligne_action_map(tc: &TwistedComplex, u: &PeriodicDiffCochain, px: Parity) -> Result<GroupMap> {
    if tc.is_integral() {
        return Err(Error::TwistKind("Deligne action on an integral complex".into()));
    }
    let k = tc.complex();
    let plain = PeriodicDeligne::new(k, u.parity);
    let ul = plain.layout(plain.base());
    let uv = u.to_vector(&ul);
    if plain.differential(plain.base()).apply(&uv).iter().any(|x: &Q| !x.is_zero()) {
        return Err(Error::NotACocycle("acting class is not closed".into()));
    }
    let target = Parity::of(px.offset() + u.parity.offset());
    let (src, dst) = (tc.layout(px), tc.layout(target));
    let mut m = RatMatrix::zeros(dst.total(), src.total());
    for c in &u.components {
        m = m.add(&right_product_matrix(k, c, &src, &dst));
    }
    Ok(GroupMap::new(tc.subquotient(px), tc.subquotient(target), m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders::{circle, sphere};
    use crate::twisted::builtin_twist;

    #[test]
    fn odd_sphere_torsion() {
        let s3 = sphere(3);
        for h in [1i64, 2, 3, 5] {
            let t = builtin_twist(&format!("h3_scale{h}"), &s3).unwrap().unwrap();
            let (ev, odd) = twisted_periodic_cohomology(&s3, &t).unwrap();
            assert!(ev.is_trivial());
            assert_eq!(odd, FgAbGroup::new(0, &[BigInt::from(h)]));
        }
    }

    #[test]
    fn hexagon_sign() {
        let c = circle(6).unwrap();
        let e = SignCocycle::from_negative_edges(&c, &[[0, 5]]).unwrap();
        let (ev, odd) = twisted_sign_cohomology(&c, &e).unwrap();
        assert!(ev.is_trivial());
        assert_eq!(odd, FgAbGroup::cyclic(2));
    }

    #[test]
    fn shift_swaps() {
        let s3 = sphere(3);
        let t = builtin_twist("h3_scale3", &s3).unwrap().unwrap();
        let tc = TwistedComplex::integral(&s3, Some(&t)).unwrap();
        let (a, b) = tc.cohomology();
        let (c, d) = tc.parity_shift().cohomology();
        assert_eq!((a.clone(), b.clone()), (d, c));
        assert_eq!(tc.parity_shift().parity_shift().cohomology(), (a, b));
    }
}
