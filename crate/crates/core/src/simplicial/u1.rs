use super::cochain::integral_cohomology;
use super::complex::SimplicialComplex;
use crate::abelian::DiffCohGroup;

/// `H^n(K; Q/Z) ≅ (Q/Z)^{b_n} ⊕ Tors H^{n+1}(K; Z)`, read off the
/// coefficient sequence `Z -> Q -> Q/Z`.
pub fn u1_cohomology(k: &SimplicialComplex, n: usize) -> DiffCohGroup {
    let h = integral_cohomology(k);
    let b = h.get(n).map_or(0, |g| g.free_rank());
    let tors = h.get(n + 1).map(|g| g.torsion().to_vec()).unwrap_or_default();
    DiffCohGroup::new(0, b, 0, &tors)
}
