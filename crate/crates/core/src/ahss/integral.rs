use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{AhssReport, Convergence, PageDifferential, Position, SSPage, SpectralSequence};
use crate::abelian::linalg::Q;
use crate::abelian::snf::solve_integer;
use crate::abelian::{GroupMap, Subgroup, Subquotient};
use crate::deligne::Parity;
use crate::error::{Error, Result};
use crate::simplicial::cochain::cup_left_matrix;
use crate::simplicial::{coboundary, SimplicialComplex};
use crate::twisted::Twist;

fn integral_classes(k: &SimplicialComplex, p: usize) -> Subquotient {
    let n = k.count(p);
    let num = Subgroup::full_integral(n).kernel_of(&coboundary(k, p).to_rational());
    let den = if p == 0 {
        Subgroup::zero(n)
    } else {
        Subgroup::full_integral(k.count(p - 1)).image(&coboundary(k, p - 1).to_rational())
    };
    Subquotient { num, den }
}

fn position(p: usize) -> Position {
    (p, (p % 2) as i64)
}

/// Twisted AHSS for periodic integral cohomology. `E_2^p = H^p(K; Z)` sits in
/// total parity `p mod 2`; the first differential induced by the twist is
/// `d_{2k+1}(x) = -[h] ∪ x`, applied on cocycle representatives. The sequence
/// stops at `E_{2k+2}` and reports convergence only when no later
/// differential can have both a nonzero source and a nonzero target, or when
/// the twist class vanishes (the untwisted differentials all vanish).
pub fn integral_ahss(k: &SimplicialComplex, h: &Twist) -> Result<SpectralSequence> {
    let Some(Twist::Integral { degree, cochain }) = h.underlying_integral() else {
        return Err(Error::TwistKind(format!("the integral sequence needs an integral twist, got {}", h.kind())));
    };
    let dim = k.dim();
    let r = degree;
    let e2: Vec<Subquotient> = (0..=dim).into_par_iter().map(|p| integral_classes(k, p)).collect();
    let hq: Vec<Q> = cochain.iter().map(|x| Q::from_integer(x.clone())).collect();

    let mut diffs = Vec::new();
    for p in 0..=dim {
        if p + r > dim {
            continue;
        }
        let m = cup_left_matrix(k, &hq, r, p).neg();
        let map = GroupMap::new(e2[p].clone(), e2[p + r].clone(), m)?;
        diffs.push(PageDifferential { r, from: position(p), to: position(p + r), map });
    }

    let next: Vec<Subquotient> = (0..=dim)
        .map(|p| {
            let out = diffs.iter().find(|d| d.from.0 == p);
            let inc = diffs.iter().find(|d| d.to.0 == p);
            let num = out.map(|d| d.map.kernel()).unwrap_or_else(|| e2[p].num.clone());
            let den = inc.map(|d| d.map.image()).unwrap_or_else(|| e2[p].den.clone());
            Subquotient::new(num, den)
        })
        .collect::<std::result::Result<_, _>>()?;

    let class_vanishes = degree > dim || solve_integer(&coboundary(k, degree - 1), &cochain).is_some();
    let entries = |v: &[Subquotient]| -> BTreeMap<Position, Subquotient> {
        v.iter().enumerate().map(|(p, s)| (position(p), s.clone())).collect()
    };
    let mut last = SSPage {
        r: r + 1,
        entries: entries(&next),
        differentials: Vec::new(),
        convergence: Convergence::Undetermined,
        extrapolated: BTreeSet::new(),
    };
    let blocking: Vec<(usize, usize)> = (r + 2..=dim)
        .step_by(2)
        .flat_map(|rr| (0..=dim - rr).map(move |p| (rr, p)))
        .filter(|&(rr, p)| !last.is_zero_at(position(p)) && !last.is_zero_at(position(p + rr)))
        .collect();
    let (convergence, reason) = if class_vanishes {
        (Convergence::Converged, "the twist class vanishes, so every differential vanishes".to_string())
    } else if blocking.is_empty() {
        (Convergence::Converged, format!("no d_r with r > {r} has a nonzero source and target"))
    } else {
        let (rr, p) = blocking[0];
        (Convergence::Undetermined, format!("d_{rr} from filtration {p} has a nonzero source and target"))
    };
    last.convergence = convergence;
    let degenerate = convergence == Convergence::Converged && diffs.iter().all(|d| d.map.image_group().is_trivial());
    let first = SSPage {
        r: 2,
        entries: entries(&e2),
        differentials: diffs,
        convergence: if degenerate { Convergence::Converged } else { Convergence::Undetermined },
        extrapolated: BTreeSet::new(),
    };
    let d_squared_zero = first.differentials_square_zero();
    Ok(SpectralSequence {
        e2: first,
        last,
        report: AhssReport {
            twist_page: r,
            d_squared_zero,
            convergence,
            reason,
            abutments: vec![(Parity::Ev, 0), (Parity::Odd, 1)],
        },
        forms_extension: None,
    })
}
