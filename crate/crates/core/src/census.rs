//! Exhaustive rank census of a form family over a small prime field.
//!
//! Every nonzero coefficient vector `c ∈ F_p^7` gives `f_x = Σ c_i f_i` with
//! `x = Σ c_i b_i`. The census records the rank of each `f_x`, checks it
//! against the norm rule (generic rank iff `N(x) ≠ 0`, rank 4 iff `N(x) = 0`)
//! and tallies the square class of `N(x)` over the generic-rank elements.
//!
//! Enumeration is split into seven partitions by the position of the
//! leading nonzero coefficient, so partitions can be run separately (or
//! concurrently) and merged. In projective mode the leading coefficient is
//! fixed to 1, and counts are scaled by `p - 1` to recover affine counts;
//! rank and square class are invariant under `x ↦ λx`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::forms::FormFamily;
use crate::octonion::{OctonionAlgebra, PURE_DIM};

/// Largest number of points a census will enumerate.
pub const CENSUS_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CensusMode {
    /// One representative per line (leading coefficient 1).
    Projective,
    /// Every nonzero vector.
    Affine,
}

/// Counts gathered over part or all of the enumeration. Merging is
/// associative and commutative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusTally {
    pub points: u64,
    pub count_by_rank: BTreeMap<usize, u64>,
    /// Points with `N(x) = 0`.
    pub isotropic: u64,
    /// Generic-rank points whose norm is a nonzero square / non-square.
    pub generic_square: u64,
    pub generic_nonsquare: u64,
    /// Points whose rank disagrees with the norm rule.
    pub rule_violations: u64,
    /// Points whose form is not alternating.
    pub non_alternating: u64,
    /// Smallest violating coefficient vector (as residues), if any.
    pub first_violation: Option<Vec<u64>>,
}

impl CensusTally {
    pub fn merge(mut self, other: CensusTally) -> CensusTally {
        self.points += other.points;
        for (r, n) in other.count_by_rank {
            *self.count_by_rank.entry(r).or_default() += n;
        }
        self.isotropic += other.isotropic;
        self.generic_square += other.generic_square;
        self.generic_nonsquare += other.generic_nonsquare;
        self.rule_violations += other.rule_violations;
        self.non_alternating += other.non_alternating;
        self.first_violation = match (self.first_violation, other.first_violation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn rank_count(&self, rank: usize) -> u64 {
        self.count_by_rank.get(&rank).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub field: FieldSpec,
    pub mode: CensusMode,
    pub generic_rank: usize,
    pub tally: CensusTally,
}

impl CensusReport {
    /// Factor converting enumerated counts into counts over all nonzero
    /// vectors.
    pub fn affine_multiplier(&self) -> u64 {
        match self.mode {
            CensusMode::Affine => 1,
            CensusMode::Projective => self.field.modulus().expect("finite field") - 1,
        }
    }

    pub fn affine_rank_count(&self, rank: usize) -> u64 {
        self.tally.rank_count(rank) * self.affine_multiplier()
    }

    /// Number of square classes of `N(x)` met by generic-rank elements.
    pub fn square_classes_met(&self) -> usize {
        usize::from(self.tally.generic_square > 0) + usize::from(self.tally.generic_nonsquare > 0)
    }

    /// No rule violations and every form alternating.
    pub fn is_clean(&self) -> bool {
        self.tally.rule_violations == 0 && self.tally.non_alternating == 0
    }
}

fn check_feasible(field: FieldSpec) -> Result<u64> {
    let p = field
        .modulus()
        .ok_or_else(|| Error::CensusInfeasible("the census needs a finite field".into()))?;
    let total = (p as u128).pow(PURE_DIM as u32);
    if total > CENSUS_LIMIT as u128 {
        return Err(Error::CensusInfeasible(format!(
            "{p}^7 = {total} points exceeds the limit of {CENSUS_LIMIT}"
        )));
    }
    Ok(p)
}

/// Enumerates the partition whose leading nonzero coefficient sits at
/// position `lead` (0-based).
pub fn census_partition(
    algebra: &OctonionAlgebra,
    family: &FormFamily,
    lead: usize,
    mode: CensusMode,
) -> Result<CensusTally> {
    let field = algebra.field();
    let p = check_feasible(field)?;
    assert!(lead < PURE_DIM, "partition index out of range");
    let generic = family.space.generic_rank();
    let lead_values: Vec<u64> = match mode {
        CensusMode::Projective => vec![1],
        CensusMode::Affine => (1..p).collect(),
    };
    let free = PURE_DIM - lead - 1;
    let tail_count = p.pow(free as u32);

    let mut tally = CensusTally::default();
    let mut residues = vec![0u64; PURE_DIM];
    for &lv in &lead_values {
        for t in 0..tail_count {
            residues[lead] = lv;
            let mut rest = t;
            for slot in residues[lead + 1..].iter_mut().rev() {
                *slot = rest % p;
                rest /= p;
            }
            let coeffs: Vec<FieldElement> =
                residues.iter().map(|&r| field.from_i64(r as i64)).collect();
            let form = family.combination(&coeffs);
            let x = algebra.pure_from_coords(&coeffs);
            let n = algebra.norm(&x);
            let rank = form.rank();

            tally.points += 1;
            *tally.count_by_rank.entry(rank).or_default() += 1;
            let alternating = form.is_alternating();
            if !alternating {
                tally.non_alternating += 1;
            }
            let rule_ok = if n.is_zero() {
                tally.isotropic += 1;
                rank == 4
            } else {
                if n.is_square().expect("nonzero norm") {
                    tally.generic_square += 1;
                } else {
                    tally.generic_nonsquare += 1;
                }
                rank == generic
            };
            if !rule_ok {
                tally.rule_violations += 1;
            }
            if (!rule_ok || !alternating) && tally.first_violation.is_none() {
                tally.first_violation = Some(residues.clone());
            }
        }
    }
    Ok(tally)
}

/// Runs all seven partitions (in parallel) and merges them in order.
pub fn rank_census(
    algebra: &OctonionAlgebra,
    family: &FormFamily,
    mode: CensusMode,
) -> Result<CensusReport> {
    let field = algebra.field();
    check_feasible(field)?;
    let tallies: Vec<CensusTally> = (0..PURE_DIM)
        .into_par_iter()
        .map(|lead| census_partition(algebra, family, lead, mode))
        .collect::<Result<_>>()?;
    let tally = tallies
        .into_iter()
        .fold(CensusTally::default(), CensusTally::merge);
    Ok(CensusReport {
        field,
        mode,
        generic_rank: family.space.generic_rank(),
        tally,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Space;
    use crate::octonion::Construction;

    fn split(p: u64) -> (OctonionAlgebra, FormFamily) {
        let a =
            OctonionAlgebra::build(FieldSpec::prime(p).unwrap(), Construction::SplitZorn).unwrap();
        let fam = FormFamily::new(&a, Space::C0).unwrap();
        (a, fam)
    }

    #[test]
    fn rejects_infinite_and_large_fields() {
        let q = OctonionAlgebra::build(FieldSpec::rationals(), Construction::DivisionFano).unwrap();
        let fam = FormFamily::new(&q, Space::C0).unwrap();
        assert!(matches!(
            rank_census(&q, &fam, CensusMode::Projective),
            Err(Error::CensusInfeasible(_))
        ));
        let (a, fam) = split(23);
        assert!(matches!(
            rank_census(&a, &fam, CensusMode::Projective),
            Err(Error::CensusInfeasible(_))
        ));
    }

    #[test]
    fn partitions_cover_every_point_once() {
        let (a, fam) = split(3);
        let sizes: Vec<u64> = (0..7)
            .map(|k| {
                census_partition(&a, &fam, k, CensusMode::Affine)
                    .unwrap()
                    .points
            })
            .collect();
        assert_eq!(sizes, vec![1458, 486, 162, 54, 18, 6, 2]);
        assert_eq!(sizes.iter().sum::<u64>(), 2186);
    }

    #[test]
    fn projective_scales_to_affine() {
        let (a, fam) = split(3);
        let proj = rank_census(&a, &fam, CensusMode::Projective).unwrap();
        let aff = rank_census(&a, &fam, CensusMode::Affine).unwrap();
        for r in [4, 6] {
            assert_eq!(proj.affine_rank_count(r), aff.affine_rank_count(r));
        }
        assert_eq!(proj.tally.points, 1093);
    }

    #[test]
    fn merge_is_order_independent() {
        let (a, fam) = split(3);
        let parts: Vec<CensusTally> = (0..7)
            .map(|k| census_partition(&a, &fam, k, CensusMode::Projective).unwrap())
            .collect();
        let fwd = parts
            .iter()
            .cloned()
            .fold(CensusTally::default(), CensusTally::merge);
        let rev = parts
            .iter()
            .rev()
            .cloned()
            .fold(CensusTally::default(), CensusTally::merge);
        assert_eq!(fwd, rev);
    }
}
