//! The hexagon relating periodic differential cohomology to closed cochains,
//! rational classes, integral classes and flat classes.

use serde::Serialize;

use super::complex::{layout_subquotient, triple_differential, Parity, PeriodicDeligne};
use super::layout::{Layout, Slot};
use crate::abelian::{check_exact, DiffCohGroup, ExactnessReport, GroupMap, RatMatrix, Subgroup, Subquotient};
use crate::error::Result;
use crate::simplicial::SimplicialComplex;

/// Groups and maps of the diamond in parity `P`; `P'` is the other parity.
#[derive(Clone, Debug)]
pub struct DiamondData {
    pub parity: Parity,
    /// `Ĥ^P`
    pub hat: Subquotient,
    /// closed cochains of parity `P`
    pub forms_closed: Subquotient,
    /// cochains of parity `P'` modulo exact ones
    pub forms_mod_exact: Subquotient,
    /// `H^P(K; Z)`
    pub int_classes: Subquotient,
    /// `H^P(K; Q)`
    pub rat_classes: Subquotient,
    /// `H^{P'}(K; Q/Z)`, as cohomology of the cone of `Z → Q`
    pub flat: Subquotient,
    /// `H^{P'}(K; Q)`
    pub rat_classes_prev: Subquotient,
    /// `H^{P'}(K; Z)`
    pub int_classes_prev: Subquotient,
    /// curvature
    pub r: GroupMap,
    /// characteristic class
    pub i: GroupMap,
    /// `k ↦ (0, k, δk)`
    pub a: GroupMap,
    pub d: GroupMap,
    pub de_rham: GroupMap,
    /// flat classes as differential classes
    pub flat_incl: GroupMap,
    /// Bockstein
    pub beta: GroupMap,
    /// `H^P(Z) → H^P(Q)`
    pub j: GroupMap,
    pub rat_to_forms: GroupMap,
    pub rat_to_flat: GroupMap,
    pub int_to_forms: GroupMap,
    /// closed cochains of parity `P` with integral periods
    pub integral_period_forms: Subgroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiamondReport {
    pub parity: Parity,
    pub groups: Vec<(String, DiffCohGroup)>,
    pub sequences: Vec<(String, ExactnessReport)>,
    pub squares: Vec<(String, bool)>,
    /// `im R` equals the closed cochains with integral periods.
    pub image_of_r_is_integral_periods: bool,
    /// `im R` is all closed cochains.
    pub r_onto_closed: bool,
}

impl DiamondReport {
    pub fn passed(&self) -> bool {
        self.sequences.iter().all(|(_, r)| r.is_exact())
            && self.squares.iter().all(|(_, ok)| *ok)
            && self.image_of_r_is_integral_periods
    }
}

fn whole(l: &Layout) -> Subgroup {
    l.standard()
}

/// `ker(δ) / δ(prev)` on cochain layouts of a single slot.
fn cochain_classes(k: &SimplicialComplex, prev: &Layout, here: &Layout, next: &Layout) -> Subquotient {
    layout_subquotient(prev, &triple_differential(k, prev, here), here, &triple_differential(k, here, next))
}

fn parity_layout(k: &SimplicialComplex, par: usize, slot: Slot) -> Layout {
    let slots: Vec<(Slot, usize)> = (0..=k.dim()).filter(|m| m % 2 == par).map(|m| (slot, m)).collect();
    Layout::new(k, &slots)
}

pub fn diamond(k: &SimplicialComplex, parity: Parity) -> Result<DiamondData> {
    let p = PeriodicDeligne::new(k, parity);
    let s = p.base();
    let sp = parity.offset();
    let so = 1 - sp;
    let a_l = p.layout(s);
    let hat = p.subquotient(s);

    let om = parity_layout(k, sp, Slot::Omega);
    let om_prev = parity_layout(k, so, Slot::Omega);
    let c = parity_layout(k, sp, Slot::C);
    let c_prev = parity_layout(k, so, Slot::C);

    let forms_closed = Subquotient::whole(whole(&om).kernel_of(&triple_differential(k, &om, &om_prev)));
    let rat_classes = cochain_classes(k, &om_prev, &om, &om_prev);
    let int_classes = cochain_classes(k, &c_prev, &c, &c_prev);
    let rat_classes_prev = cochain_classes(k, &om, &om_prev, &om);
    let int_classes_prev = cochain_classes(k, &c, &c_prev, &c);
    let exact_prev = whole(&om).image(&triple_differential(k, &om, &om_prev));
    let forms_mod_exact = Subquotient::new(whole(&om_prev), exact_prev)?;

    let flat_l = a_l.only(&[Slot::C, Slot::K]);
    let flat_next = p.layout(s + 1).only(&[Slot::C, Slot::K]);
    let flat_prev = p.layout(s - 1);
    let flat = layout_subquotient(
        &flat_prev,
        &triple_differential(k, &flat_prev, &flat_l),
        &flat_l,
        &triple_differential(k, &flat_l, &flat_next),
    );

    let id = |x: Slot| x;
    let r = GroupMap::new(hat.clone(), forms_closed.clone(), om.transfer_from(&a_l, id))?;
    let i = GroupMap::new(hat.clone(), int_classes.clone(), c.transfer_from(&a_l, id))?;
    let a = GroupMap::new(forms_mod_exact.clone(), hat.clone(), triple_differential(k, &om_prev, &a_l))?;
    let d = GroupMap::new(forms_mod_exact.clone(), forms_closed.clone(), triple_differential(k, &om_prev, &om))?;
    let de_rham = GroupMap::new(forms_closed.clone(), rat_classes.clone(), RatMatrix::identity(om.total()))?;
    let flat_incl = GroupMap::new(flat.clone(), hat.clone(), a_l.transfer_from(&flat_l, id))?;
    let beta = GroupMap::new(flat.clone(), int_classes.clone(), c.transfer_from(&flat_l, id))?;
    let j = GroupMap::new(int_classes.clone(), rat_classes.clone(), om.transfer_from(&c, |_| Slot::Omega))?;
    let rat_to_forms =
        GroupMap::new(rat_classes_prev.clone(), forms_mod_exact.clone(), RatMatrix::identity(om_prev.total()))?;
    let rat_to_flat =
        GroupMap::new(rat_classes_prev.clone(), flat.clone(), flat_l.transfer_from(&om_prev, |_| Slot::K))?;
    let int_to_forms = GroupMap::new(
        int_classes_prev.clone(),
        forms_mod_exact.clone(),
        om_prev.transfer_from(&c_prev, |_| Slot::Omega),
    )?;

    let integral_cocycles = int_classes.num.image(&om.transfer_from(&c, |_| Slot::Omega));
    let integral_period_forms = integral_cocycles.sum(&rat_classes.den);

    Ok(DiamondData {
        parity,
        hat,
        forms_closed,
        forms_mod_exact,
        int_classes,
        rat_classes,
        flat,
        rat_classes_prev,
        int_classes_prev,
        r,
        i,
        a,
        d,
        de_rham,
        flat_incl,
        beta,
        j,
        rat_to_forms,
        rat_to_flat,
        int_to_forms,
        integral_period_forms,
    })
}

fn zero_in(g: &Subquotient) -> GroupMap {
    GroupMap::zero_from(Subquotient::trivial(), g.clone())
}

fn zero_out(g: &Subquotient) -> GroupMap {
    GroupMap::zero_from(g.clone(), Subquotient::trivial())
}

fn commutes(x: &GroupMap, y: &GroupMap, u: &GroupMap, v: &GroupMap) -> Result<bool> {
    Ok(x.then(y)?.agrees_with(&u.then(v)?))
}

pub fn check_diamond(dd: &DiamondData) -> Result<DiamondReport> {
    let seqs = vec![
        ("flat -> hat -> closed".to_string(), check_exact(&[zero_in(&dd.flat), dd.flat_incl.clone(), dd.r.clone()])?),
        (
            "forms -> hat -> integral".to_string(),
            check_exact(&[dd.a.clone(), dd.i.clone(), zero_out(&dd.int_classes)])?,
        ),
        ("integral' -> forms -> hat".to_string(), check_exact(&[dd.int_to_forms.clone(), dd.a.clone()])?),
        (
            "rational' -> forms -> closed -> rational".to_string(),
            check_exact(&[dd.rat_to_forms.clone(), dd.d.clone(), dd.de_rham.clone(), zero_out(&dd.rat_classes)])?,
        ),
        (
            "rational' -> flat -> integral -> rational".to_string(),
            check_exact(&[dd.rat_to_flat.clone(), dd.beta.clone(), dd.j.clone()])?,
        ),
    ];
    let squares = vec![
        ("R a = d".to_string(), commutes(&dd.a, &dd.r, &dd.d, &identity(&dd.forms_closed))?),
        ("I incl = beta".to_string(), commutes(&dd.flat_incl, &dd.i, &dd.beta, &identity(&dd.int_classes))?),
        ("j I = dR R".to_string(), commutes(&dd.i, &dd.j, &dd.r, &dd.de_rham)?),
        (
            "a = incl on rational classes".to_string(),
            commutes(&dd.rat_to_forms, &dd.a, &dd.rat_to_flat, &dd.flat_incl)?,
        ),
    ];
    let im_r = dd.r.image();
    let groups = vec![
        ("hat".to_string(), dd.hat.group()),
        ("closed".to_string(), dd.forms_closed.group()),
        ("forms mod exact".to_string(), dd.forms_mod_exact.group()),
        ("integral".to_string(), dd.int_classes.group()),
        ("rational".to_string(), dd.rat_classes.group()),
        ("flat".to_string(), dd.flat.group()),
    ];
    Ok(DiamondReport {
        parity: dd.parity,
        groups,
        sequences: seqs,
        squares,
        image_of_r_is_integral_periods: im_r.same_as(&dd.integral_period_forms),
        r_onto_closed: im_r.same_as(&dd.forms_closed.num),
    })
}

fn identity(g: &Subquotient) -> GroupMap {
    GroupMap::new(g.clone(), g.clone(), RatMatrix::identity(g.ambient())).expect("identity is well defined")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders::{point, sphere};

    #[test]
    fn point_diamond() {
        for par in [Parity::Ev, Parity::Odd] {
            let r = check_diamond(&diamond(&point(), par).unwrap()).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn sphere_curvature_image() {
        let r = check_diamond(&diamond(&sphere(2), Parity::Ev).unwrap()).unwrap();
        assert!(r.passed());
        assert!(!r.r_onto_closed);
    }
}
