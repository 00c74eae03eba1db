//! Mayer-Vietoris sequences, additivity and naturality for the twisted theories.

use serde::Serialize;

use super::complex::TwistedComplex;
use super::twist::Twist;
use crate::abelian::{check_exact, DiffCohGroup, ExactnessReport, GroupMap, RatMatrix, Subquotient};
use crate::deligne::{Layout, Parity, PeriodicDeligne};
use crate::error::{Error, Result};
use crate::simplicial::builders::disjoint_union;
use crate::simplicial::{SimplicialComplex, SimplicialMap};

#[derive(Clone, Debug, Serialize)]
pub struct MayerVietorisReport {
    pub sequences: Vec<(String, ExactnessReport)>,
    /// Image of each connecting homomorphism.
    pub connecting_images: Vec<(String, DiffCohGroup)>,
}

impl MayerVietorisReport {
    pub fn is_exact(&self) -> bool {
        self.sequences.iter().all(|(_, r)| r.is_exact())
    }
}

/// One degree of the sequence: groups and layouts on `K, U, V, U∩V` and the
/// differential of `U` leaving this degree.
struct Stage {
    sq: [Subquotient; 4],
    lay: [Layout; 4],
    d_u: RatMatrix,
}

struct Pieces<'a> {
    k: &'a SimplicialComplex,
    u: &'a SimplicialComplex,
    v: &'a SimplicialComplex,
    w: SimplicialComplex,
}

impl Pieces<'_> {
    fn res(&self, from: usize, to: usize, st: &Stage) -> RatMatrix {
        let cx = |i: usize| match i {
            0 => self.k,
            1 => self.u,
            2 => self.v,
            _ => &self.w,
        };
        st.lay[from].restriction_to(cx(from), cx(to), &st.lay[to])
    }

    fn restrict(&self, st: &Stage) -> Result<GroupMap> {
        let m = self.res(0, 1, st).vstack(&self.res(0, 2, st));
        Ok(GroupMap::new(st.sq[0].clone(), st.sq[1].direct_sum(&st.sq[2]), m)?)
    }

    fn difference(&self, st: &Stage) -> Result<GroupMap> {
        let m = self.res(1, 3, st).hstack(&self.res(2, 3, st).neg());
        Ok(GroupMap::new(st.sq[1].direct_sum(&st.sq[2]), st.sq[3].clone(), m)?)
    }

    /// Extend by zero to `U`, apply the differential of `U`, extend by zero to `K`.
    fn connecting(&self, st: &Stage, next: &Stage) -> Result<GroupMap> {
        let l = self.res(1, 3, st).transpose();
        let e = self.res(0, 1, next).transpose();
        let m = e.mul(&st.d_u.mul(&l));
        Ok(GroupMap::new(st.sq[3].clone(), next.sq[0].clone(), m)?)
    }

    fn sequence(&self, stages: &[&Stage]) -> Result<Vec<GroupMap>> {
        let mut maps = Vec::new();
        for (i, st) in stages.iter().enumerate() {
            maps.push(self.restrict(st)?);
            maps.push(self.difference(st)?);
            if let Some(next) = stages.get(i + 1) {
                maps.push(self.connecting(st, next)?);
            }
        }
        Ok(maps)
    }
}

fn validate(k: &SimplicialComplex, u: &SimplicialComplex, v: &SimplicialComplex) -> Result<SimplicialComplex> {
    if !u.is_subcomplex_of(k) || !v.is_subcomplex_of(k) {
        return Err(Error::BadDecomposition("pieces are not subcomplexes".into()));
    }
    if u.union(v) != *k {
        return Err(Error::BadDecomposition("the pieces do not cover the complex".into()));
    }
    Ok(u.intersection(v))
}

fn restrict_twist(t: Option<&Twist>, k: &SimplicialComplex, sub: &SimplicialComplex) -> Result<Option<Twist>> {
    t.map(|t| t.restrict(k, sub)).transpose()
}

/// Mayer-Vietoris for `K = U ∪ V`: the six-term hexagon for integral (or
/// sign) coefficients; for Deligne coefficients the nine-term sequence in
/// degrees `s-1, s, s+1` of each parity.
pub fn mayer_vietoris_check(
    k: &SimplicialComplex,
    u: &SimplicialComplex,
    v: &SimplicialComplex,
    twist: Option<&Twist>,
    deligne: bool,
) -> Result<MayerVietorisReport> {
    let w = validate(k, u, v)?;
    let pieces = Pieces { k, u, v, w };
    let spaces = [k, u, v, &pieces.w];
    let twists: Vec<Option<Twist>> = spaces.iter().map(|x| restrict_twist(twist, k, x)).collect::<Result<Vec<_>>>()?;
    let mut sequences = Vec::new();
    let mut connecting_images = Vec::new();
    if !deligne {
        let tcs: Vec<TwistedComplex> = spaces
            .iter()
            .zip(&twists)
            .map(|(x, t)| TwistedComplex::integral(x, t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let stage = |p: Parity| Stage {
            sq: std::array::from_fn(|i| tcs[i].subquotient(p)),
            lay: std::array::from_fn(|i| tcs[i].layout(p)),
            d_u: tcs[1].integral_differential(p).expect("integral").to_rational(),
        };
        let (ev, odd) = (stage(Parity::Ev), stage(Parity::Odd));
        let maps = pieces.sequence(&[&ev, &odd, &ev])?;
        connecting_images.push(("ev -> odd".to_string(), maps[2].image_group()));
        connecting_images.push(("odd -> ev".to_string(), maps[5].image_group()));
        sequences.push(("hexagon".to_string(), check_exact(&maps[..8])?));
    } else {
        for par in [Parity::Ev, Parity::Odd] {
            let pds: Vec<PeriodicDeligne> = spaces
                .iter()
                .zip(&twists)
                .map(|(x, t)| match t {
                    None => Ok(PeriodicDeligne::new(x, par)),
                    Some(Twist::Differential(h)) => PeriodicDeligne::twisted(x, par, h.clone()),
                    Some(t) => Err(Error::TwistKind(format!(
                        "Deligne coefficients need a differential twist, got {}",
                        t.kind()
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            let s = pds[0].base();
            let stage = |t: i64| Stage {
                sq: std::array::from_fn(|i| pds[i].subquotient(t)),
                lay: std::array::from_fn(|i| pds[i].layout(t)),
                d_u: pds[1].differential(t),
            };
            let st: Vec<Stage> = (s - 1..=s + 1).map(stage).collect();
            let maps = pieces.sequence(&[&st[0], &st[1], &st[2]])?;
            connecting_images.push((format!("{par}: degree {} -> {}", s - 1, s), maps[2].image_group()));
            connecting_images.push((format!("{par}: degree {} -> {}", s, s + 1), maps[5].image_group()));
            sequences.push((format!("{par} nine-term"), check_exact(&maps)?));
        }
    }
    Ok(MayerVietorisReport { sequences, connecting_images })
}

/// `(ev, odd)` of `K ⊔ L` against the sum of the two sides.
pub fn additivity_check(k: &SimplicialComplex, l: &SimplicialComplex, deligne: bool) -> Result<bool> {
    let groups = |x: &SimplicialComplex| -> Result<(DiffCohGroup, DiffCohGroup)> {
        Ok(if deligne { TwistedComplex::deligne(x, None)? } else { TwistedComplex::integral(x, None)? }.cohomology())
    };
    let (a, b, u) = (groups(k)?, groups(l)?, groups(&disjoint_union(k, l))?);
    Ok(u.0 == a.0.direct_sum(&b.0) && u.1 == a.1.direct_sum(&b.1))
}

/// Blockwise cochain pullback between layouts of the same shape.
fn layout_pullback(f: &SimplicialMap, from: &Layout, to: &Layout) -> RatMatrix {
    let mut m = RatMatrix::zeros(to.total(), from.total());
    for b in to.blocks() {
        if let Some(src) = from.block(b.slot, b.degree) {
            m.add_block(b.offset, src.offset, &f.pullback_matrix(b.degree).to_rational());
        }
    }
    m
}

/// `f^*` on twisted cohomology of parity `p`, from `f.target` with `twist`
/// to `f.source` with the pulled back twist. Construction fails unless the
/// cochain pullback is a well-defined map of cohomology groups.
pub fn pullback_map(f: &SimplicialMap, twist: Option<&Twist>, deligne: bool, p: Parity) -> Result<GroupMap> {
    let pulled = twist.map(|t| t.pullback(f));
    let (a, b) = if deligne {
        (TwistedComplex::deligne(&f.target, twist)?, TwistedComplex::deligne(&f.source, pulled.as_ref())?)
    } else {
        (TwistedComplex::integral(&f.target, twist)?, TwistedComplex::integral(&f.source, pulled.as_ref())?)
    };
    let m = layout_pullback(f, &a.layout(p), &b.layout(p));
    Ok(GroupMap::new(a.subquotient(p), b.subquotient(p), m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders::{hemispheres, sphere};
    use crate::twisted::builtin_twist;

    #[test]
    fn three_sphere_hexagon_with_twist() {
        let s3 = sphere(3);
        let (u, v) = hemispheres(&s3);
        let t = builtin_twist("h3_scale3", &s3).unwrap().unwrap();
        let r = mayer_vietoris_check(&s3, &u, &v, Some(&t), false).unwrap();
        assert!(r.is_exact(), "{r:?}");
        assert_eq!(r.connecting_images[0].1, DiffCohGroup::from_u64(0, 0, 0, &[3]));
    }

    #[test]
    fn two_sphere_deligne() {
        let s2 = sphere(2);
        let (u, v) = hemispheres(&s2);
        let r = mayer_vietoris_check(&s2, &u, &v, None, true).unwrap();
        assert!(r.is_exact(), "{r:?}");
    }

    #[test]
    fn bad_decomposition() {
        let s2 = sphere(2);
        let (u, _) = hemispheres(&s2);
        assert!(matches!(mayer_vietoris_check(&s2, &u, &u, None, false), Err(Error::BadDecomposition(_))));
    }
}
