use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;

use super::{AhssReport, Convergence, FormsExtension, PageDifferential, Position, SSPage, SpectralSequence};
use crate::abelian::linalg::Q;
use crate::abelian::{resolve_extension, GroupMap, RatMatrix, Subgroup, Subquotient};
use crate::deligne::{Layout, Parity, PeriodicDeligne, Slot};
use crate::error::{Error, Result};
use crate::simplicial::SimplicialComplex;
use crate::twisted::{obstruction, Twist};

/// Columns drawn in the E₂ diagrams.
const DRAWN_COLUMNS: usize = 4;

/// Forms sit in filtration 0; `c_m` and `k_m` in filtration `m`.
fn filtration(slot: Slot, degree: usize) -> usize {
    match slot {
        Slot::Omega => 0,
        Slot::C | Slot::K => degree,
    }
}

/// `F^p`: the standard group on the blocks of filtration at least `p`.
fn filtered(l: &Layout, p: usize) -> Subgroup {
    let n = l.total();
    let unit = |i: usize| {
        let mut v = vec![Q::from_integer(0.into()); n];
        v[i] = Q::from_integer(1.into());
        v
    };
    let (mut lat, mut sp) = (Vec::new(), Vec::new());
    for b in l.blocks().iter().filter(|b| filtration(b.slot, b.degree) >= p) {
        for i in b.offset..b.offset + b.len {
            if b.slot == Slot::C {
                lat.push(unit(i));
            } else {
                sp.push(unit(i));
            }
        }
    }
    Subgroup::from_generators(n, &lat, &sp)
}

/// The twisted periodic Deligne complex in degrees `s-2 ..= s+2` with its
/// skeletal filtration.
type Cache<K> = Mutex<HashMap<K, Subgroup>>;

struct Filtered {
    s: i64,
    top: usize,
    layouts: BTreeMap<i64, Layout>,
    diffs: BTreeMap<i64, RatMatrix>,
    /// `F^p(T)` for `p <= top + 1`
    fs: BTreeMap<(i64, usize), Subgroup>,
    zs: Cache<(i64, usize, usize)>,
    bounds: Cache<(i64, usize, usize)>,
}

fn cached(cache: &Cache<(i64, usize, usize)>, key: (i64, usize, usize), f: impl FnOnce() -> Subgroup) -> Subgroup {
    if let Some(g) = cache.lock().expect("cache lock").get(&key) {
        return g.clone();
    }
    let g = f();
    cache.lock().expect("cache lock").insert(key, g.clone());
    g
}

impl Filtered {
    fn new(s: i64, top: usize, layouts: BTreeMap<i64, Layout>, diffs: BTreeMap<i64, RatMatrix>) -> Self {
        let fs = layouts
            .iter()
            .flat_map(|(&t, l)| {
                (0..=top + 1).map(move |p| ((t, p), if p > top { Subgroup::zero(l.total()) } else { filtered(l, p) }))
            })
            .collect();
        Filtered { s, top, layouts, diffs, fs, zs: Mutex::default(), bounds: Mutex::default() }
    }

    fn f(&self, t: i64, p: usize) -> Subgroup {
        self.fs[&(t, p.min(self.top + 1))].clone()
    }

    /// `Z_r^p(T) = F^p ∩ D^{-1}(F^{p+r})`; `Z_0^p = F^p`.
    fn z(&self, t: i64, p: usize, r: usize) -> Subgroup {
        if r == 0 || p > self.top {
            return self.f(t, p);
        }
        cached(&self.zs, (t, p, r.min(self.top + 1 - p)), || {
            self.f(t, p).preimage(&self.diffs[&t], &self.f(t + 1, p + r))
        })
    }

    /// `E_r^p(T) = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1}(T-1))`, filtration clamped at 0.
    fn entry(&self, t: i64, p: usize, r: usize) -> Subquotient {
        let num = self.z(t, p, r);
        let deeper = self.z(t, p + 1, r - 1);
        // elements of F^{p-r+1}(T-1) (all of it when p < r - 1) with boundary in F^p
        let q = (p + 1).saturating_sub(r);
        let bound = cached(&self.bounds, (t, q, p), || {
            let d = &self.diffs[&(t - 1)];
            self.f(t - 1, q).preimage(d, &self.f(t, p)).image(d)
        });
        Subquotient::new(num, deeper.sum(&bound)).expect("filtered complex")
    }

    fn page(&self, r: usize) -> BTreeMap<Position, Subquotient> {
        let keys: Vec<Position> = (self.s - 1..=self.s + 1).flat_map(|t| (0..=self.top).map(move |p| (p, t))).collect();
        keys.into_par_iter().map(|(p, t)| ((p, t), self.entry(t, p, r))).collect()
    }

    fn differentials(&self, r: usize, entries: &BTreeMap<Position, Subquotient>) -> Result<Vec<PageDifferential>> {
        let mut out = Vec::new();
        for t in self.s - 1..=self.s {
            for p in 0..=self.top {
                let (from, to) = ((p, t), (p + r, t + 1));
                if let (Some(a), Some(b)) = (entries.get(&from), entries.get(&to)) {
                    let map = GroupMap::new(a.clone(), b.clone(), self.diffs[&t].clone())?;
                    out.push(PageDifferential { r, from, to, map });
                }
            }
        }
        Ok(out)
    }
}

fn is_zero(s: &Subquotient) -> bool {
    s.den.contains(&s.num)
}

/// First later differential `d_{r'}` (`r' >= r`) with a nonzero source and target.
fn blocking(entries: &BTreeMap<Position, Subquotient>, r: usize, top: usize, s: i64) -> Option<(usize, Position)> {
    for rr in r.max(1)..=top {
        for t in s - 1..=s {
            for p in 0..=top - rr {
                let nz = |pos: Position| entries.get(&pos).is_some_and(|x| !is_zero(x));
                if nz((p, t)) && nz((p + rr, t + 1)) {
                    return Some((rr, (p, t)));
                }
            }
        }
    }
    None
}

fn forms_extension(l: &Layout, entry: &Subquotient) -> Result<FormsExtension> {
    let forms = l.only(&[Slot::Omega]);
    let pi = forms.transfer_from(l, |x| x);
    let target = Subquotient::new(entry.num.image(&pi), entry.den.image(&pi))?;
    let map = GroupMap::new(entry.clone(), target, pi)?;
    let (flat, forms) = (map.kernel_group(), map.image_group());
    let extension = resolve_extension(&flat, &forms);
    Ok(FormsExtension { flat, forms, extension })
}

/// Twisted AHSS for periodic Deligne cohomology of one parity, computed as
/// the spectral sequence of the skeletal filtration of the twisted periodic
/// Deligne complex: all curvature cochains in filtration 0, the integral and
/// comparison cochains of degree `m` in filtration `m`. Row 0 of `E_2` is
/// then the twisted-closed cochains of the parity (with integral
/// 0-component in even parity), the other entries are `U(1)` cohomology, and
/// the differentials are induced by `D + ĥ·` on representatives. Pages are
/// computed through the twist page `E_{2k+2}` and onwards until no later
/// differential can be nonzero for positional reasons.
pub fn differential_ahss(k: &SimplicialComplex, h: Option<&Twist>, parity: Parity) -> Result<SpectralSequence> {
    let pd = match h {
        None => PeriodicDeligne::new(k, parity),
        Some(t @ Twist::Differential(x)) => {
            let ob = obstruction(k, t).expect("differential twist");
            if !ob.is_zero() {
                return Err(Error::ObstructionNonzero { nonzero: ob.nonzero_count() });
            }
            PeriodicDeligne::twisted(k, parity, x.clone())?
        }
        Some(t) => {
            return Err(Error::TwistKind(format!("the Deligne sequence needs a differential twist, got {}", t.kind())))
        }
    };
    let s = pd.base();
    let layouts: BTreeMap<i64, Layout> = (s - 2..=s + 2).map(|t| (t, pd.layout(t))).collect();
    let diffs: BTreeMap<i64, RatMatrix> = (s - 2..=s + 1).map(|t| (t, pd.differential(t))).collect();
    for t in s - 2..s + 1 {
        if !diffs[&(t + 1)].mul(&diffs[&t]).is_zero() {
            return Err(Error::ObstructionNonzero { nonzero: 1 });
        }
    }
    let fc = Filtered::new(s, k.dim(), layouts, diffs);
    let twist_page = h.map(|t| t.degree()).unwrap_or(1);
    let first_stop = twist_page + 1;

    let extrapolated = |e: &BTreeMap<Position, Subquotient>| -> BTreeSet<Position> {
        e.keys().copied().filter(|&(p, t)| p > DRAWN_COLUMNS || t < s).collect()
    };

    let e2_entries = fc.page(2);
    let e2_diffs = fc.differentials(2, &e2_entries)?;
    let mut d_squared_zero = true;
    let mut r = 2;
    let mut entries = e2_entries.clone();
    let mut last_diffs = e2_diffs.clone();
    loop {
        d_squared_zero &= {
            let page = SSPage {
                r,
                entries: entries.clone(),
                differentials: last_diffs.clone(),
                convergence: Convergence::Undetermined,
                extrapolated: BTreeSet::new(),
            };
            page.differentials_square_zero()
        };
        if r >= first_stop && blocking(&entries, r, fc.top, s).is_none() {
            break;
        }
        r += 1;
        entries = fc.page(r);
        last_diffs = fc.differentials(r, &entries)?;
    }
    let reason = if r == first_stop || r == 2 {
        format!("no d_r with r >= {r} has a nonzero source and target")
    } else {
        let (rr, pos) = blocking(&fc.page(first_stop), first_stop, fc.top, s).expect("blocked earlier");
        format!(
            "pages after E_{first_stop} computed from the filtered complex (d_{rr} from {pos:?} was positionally possible); \
             no d_r with r >= {r} has a nonzero source and target"
        )
    };
    let e2_converged = r == 2;
    let e2 = SSPage {
        r: 2,
        extrapolated: extrapolated(&e2_entries),
        entries: e2_entries,
        differentials: e2_diffs,
        convergence: if e2_converged { Convergence::Converged } else { Convergence::Undetermined },
    };
    let last = SSPage {
        r,
        extrapolated: extrapolated(&entries),
        entries,
        differentials: Vec::new(),
        convergence: Convergence::Converged,
    };
    let forms_extension = Some(forms_extension(&fc.layouts[&s], &last.entries[&(0, s)])?);
    Ok(SpectralSequence {
        forms_extension,
        e2,
        last,
        report: AhssReport {
            twist_page,
            d_squared_zero,
            convergence: Convergence::Converged,
            reason,
            abutments: vec![(parity, s)],
        },
    })
}
