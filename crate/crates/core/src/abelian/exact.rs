use serde::Serialize;

use super::error::AbelianError;
use super::group::DiffCohGroup;
use super::matrix::{IntMatrix, RatMatrix};
use super::subgroup::Subgroup;

/// `num / den` with `den ⊆ num ⊆ Q^N`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub num: Subgroup,
    pub den: Subgroup,
}

impl Subquotient {
    pub fn new(num: Subgroup, den: Subgroup) -> Result<Self, AbelianError> {
        if !num.contains(&den) {
            return Err(AbelianError::NotASubgroup);
        }
        Ok(Subquotient { num, den })
    }

    pub fn whole(num: Subgroup) -> Self {
        let den = Subgroup::zero(num.ambient());
        Subquotient { num, den }
    }

    /// Trivial group in a zero-dimensional ambient space.
    pub fn trivial() -> Self {
        Self::whole(Subgroup::zero(0))
    }

    /// `Z^n / (column span of relations)`.
    pub fn presented(relations: &IntMatrix) -> Self {
        let n = relations.rows();
        let cols: Vec<Vec<_>> = relations.col_vecs();
        let den = Subgroup::from_int_generators(n, &cols, &[]);
        Subquotient { num: Subgroup::full_integral(n), den }
    }

    pub fn direct_sum(&self, other: &Subquotient) -> Subquotient {
        Subquotient { num: self.num.direct_sum(&other.num), den: self.den.direct_sum(&other.den) }
    }

    pub fn ambient(&self) -> usize {
        self.num.ambient()
    }

    pub fn group(&self) -> DiffCohGroup {
        self.num.quotient(&self.den).expect("denominator checked at construction")
    }

    pub fn same_as(&self, other: &Subquotient) -> bool {
        self.ambient() == other.ambient() && self.num.same_as(&other.num) && self.den.same_as(&other.den)
    }
}

/// Homomorphism between subquotients induced by a rational matrix.
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub source: Subquotient,
    pub target: Subquotient,
    pub matrix: RatMatrix,
}

impl GroupMap {
    pub fn new(source: Subquotient, target: Subquotient, matrix: RatMatrix) -> Result<Self, AbelianError> {
        let m = GroupMap { source, target, matrix };
        m.validate(0)?;
        Ok(m)
    }

    fn validate(&self, index: usize) -> Result<(), AbelianError> {
        if self.matrix.cols() != self.source.ambient() || self.matrix.rows() != self.target.ambient() {
            return Err(AbelianError::IllDefinedMap { index });
        }
        if !self.target.num.contains(&self.source.num.image(&self.matrix))
            || !self.target.den.contains(&self.source.den.image(&self.matrix))
        {
            return Err(AbelianError::IllDefinedMap { index });
        }
        Ok(())
    }

    pub fn zero_from(source: Subquotient, target: Subquotient) -> Self {
        let matrix = RatMatrix::zeros(target.ambient(), source.ambient());
        GroupMap { source, target, matrix }
    }

    /// Preimage of the target denominator, as a subgroup of the source numerator.
    pub fn kernel(&self) -> Subgroup {
        self.source.num.preimage(&self.matrix, &self.target.den)
    }

    /// Image plus the target denominator.
    pub fn image(&self) -> Subgroup {
        self.source.num.image(&self.matrix).sum(&self.target.den)
    }

    pub fn kernel_group(&self) -> DiffCohGroup {
        self.kernel().quotient(&self.source.den).expect("denominator lies in the kernel")
    }

    pub fn image_group(&self) -> DiffCohGroup {
        self.image().quotient(&self.target.den).expect("denominator lies in the image")
    }

    pub fn cokernel_group(&self) -> DiffCohGroup {
        self.target.num.quotient(&self.image()).expect("image lies in the target")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().same_as(&self.source.den) || self.source.den.contains(&self.kernel())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().contains(&self.target.num)
    }

    /// Both maps induce the same homomorphism on the quotients.
    pub fn agrees_with(&self, other: &GroupMap) -> bool {
        let diff = self.matrix.sub(&other.matrix);
        self.target.den.contains(&self.source.num.image(&diff))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupMap) -> Result<GroupMap, AbelianError> {
        if !self.target.same_as(&other.source) {
            return Err(AbelianError::CompositionMismatch { index: 0 });
        }
        Ok(GroupMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Junction {
    /// 1-based position in the sequence; node `k` is the source of map `k`.
    pub node: usize,
    pub composite_zero: bool,
    /// `ker(next) / (ker(next) ∩ im(prev))`.
    pub homology: DiffCohGroup,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub junctions: Vec<Junction>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.junctions.iter().all(|j| j.exact)
    }

    pub fn failures(&self) -> Vec<usize> {
        self.junctions.iter().filter(|j| !j.exact).map(|j| j.node).collect()
    }
}

/// Checks exactness at every interior node of `A_1 -> A_2 -> ... -> A_{n+1}`.
pub fn check_exact(maps: &[GroupMap]) -> Result<ExactnessReport, AbelianError> {
    for (i, m) in maps.iter().enumerate() {
        m.validate(i + 1)?;
    }
    for i in 1..maps.len() {
        if !maps[i - 1].target.same_as(&maps[i].source) {
            return Err(AbelianError::CompositionMismatch { index: i + 1 });
        }
    }
    let mut junctions = Vec::new();
    for i in 1..maps.len() {
        let ker = maps[i].kernel();
        let im = maps[i - 1].image();
        let composite_zero = ker.contains(&im);
        let meet = ker.intersection(&im);
        let homology = ker.quotient(&meet)?;
        junctions.push(Junction {
            node: i + 1,
            composite_zero,
            exact: composite_zero && homology.is_trivial(),
            homology,
        });
    }
    Ok(ExactnessReport { junctions })
}
