//! Atiyah-Hirzebruch spectral sequences for twisted periodic integral and
//! twisted periodic Deligne cohomology, filtered by skeleta (decreasing in `p`).

mod differential;
mod integral;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::abelian::{resolve_extension, DiffCohGroup, Extension, GroupMap, Subquotient};
use crate::deligne::Parity;
use crate::error::{Error, Result};

pub use differential::differential_ahss;
pub use integral::integral_ahss;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convergence {
    Converged,
    Undetermined,
}

/// Position of an entry: filtration degree `p` and total degree. For the
/// integral sequence the total degree is `0` (ev) or `1` (odd); for the
/// Deligne sequence it is the degree `T` in the periodic complex.
pub type Position = (usize, i64);

#[derive(Clone, Debug)]
pub struct PageDifferential {
    pub r: usize,
    pub from: Position,
    pub to: Position,
    pub map: GroupMap,
}

#[derive(Clone, Debug)]
pub struct SSPage {
    pub r: usize,
    pub entries: BTreeMap<Position, Subquotient>,
    /// Differentials computed on the entries of this page.
    pub differentials: Vec<PageDifferential>,
    pub convergence: Convergence,
    /// Entries whose placement is not drawn in the two E₂ diagrams.
    pub extrapolated: BTreeSet<Position>,
}

impl SSPage {
    pub fn group(&self, pos: Position) -> DiffCohGroup {
        self.entries.get(&pos).map(|s| s.group()).unwrap_or_else(DiffCohGroup::zero)
    }

    pub fn is_zero_at(&self, pos: Position) -> bool {
        self.entries.get(&pos).is_none_or(|s| s.num.same_as(&s.den) || s.den.contains(&s.num))
    }

    /// Nonzero entries in total degree `t`, by filtration.
    pub fn column(&self, t: i64) -> Vec<(usize, DiffCohGroup)> {
        self.entries
            .iter()
            .filter(|((_, tt), _)| *tt == t)
            .map(|(&(p, _), s)| (p, s.group()))
            .filter(|(_, g)| !g.is_trivial())
            .collect()
    }

    /// `d_r ∘ d_r = 0` wherever two differentials compose.
    pub fn differentials_square_zero(&self) -> bool {
        self.differentials.iter().all(|a| {
            self.differentials.iter().filter(|b| b.from == a.to && b.r == a.r).all(|b| {
                a.map.then(&b.map).map(|c| c.target.den.contains(&c.source.num.image(&c.matrix))).unwrap_or(false)
            })
        })
    }

    pub fn summary(&self) -> PageSummary {
        PageSummary {
            r: self.r,
            entries: self
                .entries
                .iter()
                .map(|(&(p, t), s)| EntrySummary {
                    p,
                    total: t,
                    group: s.group(),
                    extrapolated: self.extrapolated.contains(&(p, t)),
                })
                .collect(),
            differentials: self
                .differentials
                .iter()
                .map(|d| DifferentialSummary {
                    r: d.r,
                    from: d.from,
                    to: d.to,
                    image: d.map.image_group(),
                    kernel: d.map.kernel_group(),
                })
                .collect(),
            convergence: self.convergence,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntrySummary {
    pub p: usize,
    pub total: i64,
    pub group: DiffCohGroup,
    pub extrapolated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialSummary {
    pub r: usize,
    pub from: Position,
    pub to: Position,
    pub image: DiffCohGroup,
    pub kernel: DiffCohGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageSummary {
    pub r: usize,
    pub entries: Vec<EntrySummary>,
    pub differentials: Vec<DifferentialSummary>,
    pub convergence: Convergence,
}

#[derive(Clone, Debug, Serialize)]
pub struct AhssReport {
    /// Page carrying the first differential induced by the twist.
    pub twist_page: usize,
    pub d_squared_zero: bool,
    pub convergence: Convergence,
    pub reason: String,
    /// Parities whose total group the sequence computes, with their total degree.
    pub abutments: Vec<(Parity, i64)>,
}

/// The filtration-0 entry of the last page as an extension of its curvature
/// image by the classes with vanishing curvature part.
#[derive(Clone, Debug, Serialize)]
pub struct FormsExtension {
    pub flat: DiffCohGroup,
    pub forms: DiffCohGroup,
    pub extension: Extension,
}

#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub e2: SSPage,
    pub last: SSPage,
    pub report: AhssReport,
    /// Deligne sequence only.
    pub forms_extension: Option<FormsExtension>,
}

impl SpectralSequence {
    pub fn total_of(&self, p: Parity) -> Option<i64> {
        self.report.abutments.iter().find(|(q, _)| *q == p).map(|(_, t)| *t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Abutment {
    Resolved {
        group: DiffCohGroup,
    },
    /// The associated graded (by filtration) and the possible total groups.
    Ambiguous {
        graded: Vec<(usize, DiffCohGroup)>,
        candidates: Vec<DiffCohGroup>,
        exhaustive: bool,
    },
}

impl Abutment {
    pub fn resolved(&self) -> Option<&DiffCohGroup> {
        match self {
            Abutment::Resolved { group } => Some(group),
            Abutment::Ambiguous { .. } => None,
        }
    }
}

/// Folds a filtration column (highest `p` is the deepest subgroup) into a
/// total group with `resolve_extension`.
pub fn fold_column(graded: &[(usize, DiffCohGroup)]) -> Abutment {
    let mut pieces: Vec<&(usize, DiffCohGroup)> = graded.iter().filter(|(_, g)| !g.is_trivial()).collect();
    pieces.sort_by_key(|x| std::cmp::Reverse(x.0));
    let mut candidates: BTreeSet<DiffCohGroup> = BTreeSet::from([DiffCohGroup::zero()]);
    let mut exhaustive = true;
    let mut ambiguous = false;
    for (_, quot) in pieces {
        let mut next = BTreeSet::new();
        for sub in &candidates {
            match resolve_extension(sub, quot) {
                Extension::Resolved { group } => {
                    next.insert(group);
                }
                Extension::Ambiguous { candidates: c, exhaustive: e } => {
                    ambiguous = true;
                    exhaustive &= e;
                    next.extend(c);
                }
            }
        }
        candidates = next;
    }
    if candidates.len() == 1 && (!ambiguous || exhaustive) {
        let group = candidates.into_iter().next().expect("one candidate");
        return Abutment::Resolved { group };
    }
    Abutment::Ambiguous { graded: graded.to_vec(), candidates: candidates.into_iter().collect(), exhaustive }
}

/// Total group of parity `parity` from the last page.
pub fn assemble_abutment(ss: &SpectralSequence, parity: Parity) -> Result<Abutment> {
    if ss.last.convergence != Convergence::Converged {
        return Err(Error::NotConverged(format!("stopped at E_{}: {}", ss.last.r, ss.report.reason)));
    }
    let t = ss
        .total_of(parity)
        .ok_or_else(|| Error::DegreeMismatch(format!("this sequence does not compute the {parity} group")))?;
    Ok(fold_column(&ss.last.column(t)))
}
