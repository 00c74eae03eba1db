//! Resolution of `0 -> sub -> E -> quot -> 0` for groups of the shape
//! `Q^v ⊕ (Q/Z)^t ⊕ Z^l ⊕ finite`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::group::DiffCohGroup;
use super::matrix::IntMatrix;
use super::snf::invariant_factors;

/// Extensions enumerated before giving up on an exhaustive list.
const ENUMERATION_LIMIT: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Extension {
    /// Every extension is isomorphic to this group.
    Resolved { group: DiffCohGroup },
    /// Distinct isomorphism types of possible middle groups.
    Ambiguous { candidates: Vec<DiffCohGroup>, exhaustive: bool },
}

impl Extension {
    pub fn resolved(&self) -> Option<&DiffCohGroup> {
        match self {
            Extension::Resolved { group } => Some(group),
            Extension::Ambiguous { .. } => None,
        }
    }
}

/// Whether `Ext(quot, sub)` vanishes, summand by summand.
pub fn ext_vanishes(sub: &DiffCohGroup, quot: &DiffCohGroup) -> bool {
    let sub_lattice = sub.lattice_rank() > 0;
    let sub_finite = !sub.finite_factors().is_empty();
    // Ext(Q, -) survives only against Z; Ext(Q/Z, -) against Z and finite groups
    if quot.vector_dim() > 0 && sub_lattice {
        return false;
    }
    if quot.torus_rank() > 0 && (sub_lattice || sub_finite) {
        return false;
    }
    // Ext(Z/m, Z) = Z/m, Ext(Z/m, Z/n) = Z/gcd(m, n)
    for m in quot.finite_factors() {
        if sub_lattice {
            return false;
        }
        if sub.finite_factors().iter().any(|n| !m.gcd(n).is_one()) {
            return false;
        }
    }
    true
}

pub fn resolve_extension(sub: &DiffCohGroup, quot: &DiffCohGroup) -> Extension {
    let split = sub.direct_sum(quot);
    if ext_vanishes(sub, quot) {
        return Extension::Resolved { group: split };
    }
    if !sub.is_finitely_generated() || !quot.is_finitely_generated() {
        return Extension::Ambiguous { candidates: vec![split], exhaustive: false };
    }
    match enumerate_fg_extensions(sub, quot) {
        Some(c) if c.len() == 1 => Extension::Resolved { group: c.into_iter().next().unwrap() },
        Some(c) => Extension::Ambiguous { candidates: c, exhaustive: true },
        None => Extension::Ambiguous { candidates: vec![split], exhaustive: false },
    }
}

/// Every middle group for finitely generated `sub` and `quot`. The free part
/// of `quot` splits off; each torsion generator `e_j` of order `m_j` lifts with
/// `m_j e_j = phi_j`, where `phi_j` runs over `sub / m_j sub`.
fn enumerate_fg_extensions(sub: &DiffCohGroup, quot: &DiffCohGroup) -> Option<Vec<DiffCohGroup>> {
    let a_free = sub.lattice_rank();
    let a_tors: Vec<BigInt> = sub.finite_factors().to_vec();
    let ms: Vec<BigInt> = quot.finite_factors().to_vec();
    let ngen_a = a_free + a_tors.len();
    // ranges of each coordinate of phi_j
    let mut ranges: Vec<u64> = Vec::new();
    for m in &ms {
        let mu = m.to_u64()?;
        ranges.extend(std::iter::repeat_n(mu, a_free));
        for a in &a_tors {
            ranges.push(a.gcd(m).to_u64()?);
        }
    }
    let total = ranges.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r))?;
    if total > ENUMERATION_LIMIT {
        return None;
    }
    let ngen = ngen_a + ms.len();
    let mut seen = BTreeSet::new();
    let mut digits = vec![0u64; ranges.len()];
    for _ in 0..total {
        // relations as columns
        let nrel = a_tors.len() + ms.len();
        let mut rel = IntMatrix::zeros(ngen, nrel);
        for (i, a) in a_tors.iter().enumerate() {
            rel.set(a_free + i, i, a.clone());
        }
        for (j, m) in ms.iter().enumerate() {
            let col = a_tors.len() + j;
            rel.set(ngen_a + j, col, m.clone());
            for g in 0..ngen_a {
                let phi = digits[j * ngen_a + g];
                if phi != 0 {
                    rel.set(g, col, -BigInt::from(phi));
                }
            }
        }
        let inv = invariant_factors(&rel);
        let g = DiffCohGroup::new(0, 0, ngen - inv.rank + quot.lattice_rank(), &inv.factors);
        seen.insert(g);
        // odometer
        for (d, r) in digits.iter_mut().zip(&ranges) {
            *d += 1;
            if *d < *r {
                break;
            }
            *d = 0;
        }
    }
    Some(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: usize, t: usize, l: usize, f: &[u64]) -> DiffCohGroup {
        DiffCohGroup::from_u64(v, t, l, f)
    }

    #[test]
    fn divisible_sub_splits() {
        assert_eq!(resolve_extension(&g(2, 1, 0, &[]), &g(0, 0, 1, &[3])).resolved(), Some(&g(2, 1, 1, &[3])));
    }

    #[test]
    fn free_quotient_splits() {
        assert_eq!(resolve_extension(&g(0, 0, 0, &[2]), &g(0, 0, 2, &[])).resolved(), Some(&g(0, 0, 2, &[2])));
    }

    #[test]
    fn finite_sub_vector_quotient_splits() {
        assert_eq!(resolve_extension(&g(0, 0, 0, &[5]), &g(9, 0, 0, &[])).resolved(), Some(&g(9, 0, 0, &[5])));
    }

    #[test]
    fn z_by_z2_is_ambiguous() {
        let e = resolve_extension(&g(0, 0, 1, &[]), &g(0, 0, 0, &[2]));
        assert_eq!(e, Extension::Ambiguous { candidates: vec![g(0, 0, 1, &[]), g(0, 0, 1, &[2])], exhaustive: true });
    }

    #[test]
    fn coprime_finite_splits() {
        assert_eq!(resolve_extension(&g(0, 0, 0, &[2]), &g(0, 0, 0, &[3])).resolved(), Some(&g(0, 0, 0, &[6])));
    }
}
