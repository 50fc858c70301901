//! Alternating forms attached to pure octonions.
//!
//! For pure `x` the form `F_x(y, z) = ⟨xy, z⟩` lives on `C` and its
//! restriction `f_x` lives on `C_0`. Both are stored as exact skew-symmetric
//! matrices in the algebra's working basis (respectively its pure basis).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::{self, span_contains, span_rank, Matrix, Vector};
use crate::octonion::{Octonion, OctonionAlgebra, DIM, PURE_DIM};

/// The space a form is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// The whole algebra, dimension 8.
    C,
    /// The pure octonions, dimension 7.
    C0,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::C => DIM,
            Space::C0 => PURE_DIM,
        }
    }

    /// Rank of `F_x` / `f_x` for invertible `x`.
    pub fn generic_rank(self) -> usize {
        match self {
            Space::C => 8,
            Space::C0 => 6,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::C => "C",
            Space::C0 => "C0",
        })
    }
}

impl std::str::FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" => Ok(Space::C),
            "C0" => Ok(Space::C0),
            other => Err(Error::InvalidSpace(other.to_string())),
        }
    }
}

/// A bilinear form given by its Gram matrix; alternating when produced from
/// a genuine octonion algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltForm {
    pub matrix: Matrix,
    pub space: Space,
}

impl AltForm {
    pub fn new(matrix: Matrix, space: Space) -> Result<Self> {
        if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", space.dim()),
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        Ok(Self { matrix, space })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_alternating(&self) -> bool {
        self.matrix.is_skew_symmetric()
    }

    pub fn radical(&self) -> Vec<Vector> {
        self.matrix.kernel_basis()
    }

    /// `f(y, z) = yᵀ M z` on coordinate vectors of the form's space.
    pub fn evaluate(&self, y: &[FieldElement], z: &[FieldElement]) -> FieldElement {
        matrix::dot(y, &self.matrix.mul_vec(z), self.matrix.field())
    }

    /// Strict upper triangle, lexicographic in `(i, j)`.
    pub fn coords(&self) -> Vector {
        self.matrix.upper_triangle()
    }

    pub fn add(&self, other: &AltForm) -> AltForm {
        AltForm {
            matrix: self.matrix.add(&other.matrix),
            space: self.space,
        }
    }

    pub fn scale(&self, c: &FieldElement) -> AltForm {
        AltForm {
            matrix: self.matrix.scale(c),
            space: self.space,
        }
    }
}

fn require_pure(algebra: &OctonionAlgebra, x: &Octonion) -> Result<()> {
    if x.field() != algebra.field() {
        return Err(Error::AlgebraMismatch);
    }
    if !algebra.is_pure(x) {
        return Err(Error::NotPure);
    }
    Ok(())
}

/// `F_x` on `C`: entry `(i, j) = ⟨x b_i, b_j⟩`, i.e. `L_xᵀ G`.
pub fn form_on_c(algebra: &OctonionAlgebra, x: &Octonion) -> Result<AltForm> {
    require_pure(algebra, x)?;
    Ok(form_on_c_unchecked(algebra, x))
}

fn form_on_c_unchecked(algebra: &OctonionAlgebra, x: &Octonion) -> AltForm {
    let m = algebra
        .left_mult_matrix(x)
        .transpose()
        .mul(algebra.norm_gram());
    AltForm {
        matrix: m,
        space: Space::C,
    }
}

/// `f_x`, the restriction of `F_x` to `C_0` in the pure basis.
pub fn form_on_c0(algebra: &OctonionAlgebra, x: &Octonion) -> Result<AltForm> {
    require_pure(algebra, x)?;
    let big = form_on_c_unchecked(algebra, x);
    let p = &algebra.pure_basis().embedding;
    Ok(AltForm {
        matrix: p.transpose().mul(&big.matrix).mul(p),
        space: Space::C0,
    })
}

pub fn form_on(algebra: &OctonionAlgebra, x: &Octonion, space: Space) -> Result<AltForm> {
    match space {
        Space::C => form_on_c(algebra, x),
        Space::C0 => form_on_c0(algebra, x),
    }
}

/// Ranks of a form and of its restriction to a hyperplane, with whether the
/// radical lies inside the hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictionReport {
    pub rank_full: usize,
    pub rank_restricted: usize,
    pub radical_in_hyperplane: bool,
}

impl RestrictionReport {
    /// The restricted rank drops by exactly 2 when the radical sits inside
    /// the hyperplane, and is unchanged otherwise.
    pub fn is_consistent(&self) -> bool {
        if self.radical_in_hyperplane {
            self.rank_full >= 2 && self.rank_restricted == self.rank_full - 2
        } else {
            self.rank_restricted == self.rank_full
        }
    }
}

/// Restricts the form with Gram matrix `form` (n×n) to the span of
/// `hyperplane` (n-1 independent vectors of length n).
pub fn restriction_rank_check(form: &Matrix, hyperplane: &[Vector]) -> Result<RestrictionReport> {
    let n = form.rows();
    let f = form.field();
    if hyperplane.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: format!("vectors of length {n}"),
            got: "vectors of another length".into(),
        });
    }
    let dim = span_rank(f, n, hyperplane);
    if hyperplane.len() + 1 != n || dim + 1 != n {
        return Err(Error::BadHyperplane { dim, ambient: n });
    }
    let u = Matrix::from_columns(f, n, hyperplane);
    let restricted = u.transpose().mul(form).mul(&u);
    let radical = form.kernel_basis();
    let radical_in_hyperplane = radical.iter().all(|r| span_contains(f, hyperplane, r));
    Ok(RestrictionReport {
        rank_full: form.rank(),
        rank_restricted: restricted.rank(),
        radical_in_hyperplane,
    })
}

/// The seven generators `f_{b_1}, ..., f_{b_7}` (or `F_{b_i}`) of the image
/// of `x ↦ f_x`, with the flattened 7×21 (7×28) coordinate matrix.
#[derive(Debug, Clone)]
pub struct FormFamily {
    pub space: Space,
    pub generators: Vec<AltForm>,
    pub flattened: Matrix,
}

impl FormFamily {
    /// Builds the family; fails with `DegenerateFamily` if the generators are
    /// linearly dependent.
    pub fn new(algebra: &OctonionAlgebra, space: Space) -> Result<Self> {
        let generators: Vec<AltForm> = algebra
            .pure_basis()
            .vectors
            .iter()
            .map(|b| form_on(algebra, b, space))
            .collect::<Result<_>>()?;
        let rows: Vec<Vector> = generators.iter().map(AltForm::coords).collect();
        let flattened = Matrix::from_rows(algebra.field(), rows)?;
        let rank = flattened.rank();
        if rank < PURE_DIM {
            return Err(Error::DegenerateFamily(rank));
        }
        Ok(Self {
            space,
            generators,
            flattened,
        })
    }

    pub fn dim(&self) -> usize {
        self.flattened.rank()
    }

    /// `Σ c_i f_i`, which equals `f_x` for the pure `x` with coordinates `c`.
    pub fn combination(&self, coeffs: &[FieldElement]) -> AltForm {
        assert_eq!(coeffs.len(), self.generators.len());
        let field = self.flattened.field();
        let n = self.space.dim();
        let mut m = Matrix::zeros(field, n, n);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let gij = g.matrix.get(i, j);
                    if !gij.is_zero() {
                        let v = m.get(i, j) + &(c * gij);
                        m.set(i, j, v);
                    }
                }
            }
        }
        AltForm {
            matrix: m,
            space: self.space,
        }
    }

    /// Whether `form` lies in the span of the generators.
    pub fn contains(&self, form: &AltForm) -> bool {
        form.space == self.space
            && form.is_alternating()
            && span_contains(
                self.flattened.field(),
                &self.flattened.to_rows(),
                &form.coords(),
            )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::octonion::Construction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fano_q() -> OctonionAlgebra {
        OctonionAlgebra::build(FieldSpec::rationals(), Construction::DivisionFano).unwrap()
    }

    fn zorn(p: u64) -> OctonionAlgebra {
        OctonionAlgebra::build(FieldSpec::prime(p).unwrap(), Construction::SplitZorn).unwrap()
    }

    #[test]
    fn zero_form() {
        let a = fano_q();
        assert!(form_on_c(&a, &a.zero()).unwrap().matrix.is_zero());
        assert!(form_on_c0(&a, &a.zero()).unwrap().matrix.is_zero());
    }

    #[test]
    fn division_ranks() {
        let a = fano_q();
        assert_eq!(form_on_c(&a, &a.basis(1)).unwrap().rank(), 8);
        assert_eq!(form_on_c0(&a, &a.basis(1)).unwrap().rank(), 6);
    }

    #[test]
    fn non_pure_rejected() {
        let a = fano_q();
        assert_eq!(form_on_c(&a, a.identity()), Err(Error::NotPure));
        assert_eq!(form_on_c0(&a, a.identity()), Err(Error::NotPure));
    }

    #[test]
    fn split_isotropic_ranks() {
        let a = zorn(3);
        let f = a.field();
        let x = a
            .zorn(
                f.zero(),
                [f.one(), f.zero(), f.zero()],
                [f.zero(), f.zero(), f.zero()],
                f.zero(),
            )
            .unwrap();
        assert!(a.is_pure(&x) && a.norm(&x).is_zero());
        assert_eq!(form_on_c(&a, &x).unwrap().rank(), 4);
        assert_eq!(form_on_c0(&a, &x).unwrap().rank(), 4);
    }

    #[test]
    fn families_have_dimension_seven() {
        for a in [fano_q(), zorn(3)] {
            for space in [Space::C, Space::C0] {
                let fam = FormFamily::new(&a, space).unwrap();
                assert_eq!(fam.dim(), 7);
                assert_eq!(fam.flattened.cols(), space.dim() * (space.dim() - 1) / 2);
            }
        }
    }

    #[test]
    fn combination_matches_direct_form() {
        let a = zorn(5);
        let fam = FormFamily::new(&a, Space::C0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = a.random_pure(&mut rng);
            let direct = form_on_c0(&a, &x).unwrap();
            assert_eq!(fam.combination(&x.pure_coords()), direct);
            assert!(fam.contains(&direct));
        }
    }

    #[test]
    fn both_ranks_occur_in_split_family() {
        let a = zorn(3);
        let fam = FormFamily::new(&a, Space::C0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let x = a.random_nonzero_pure(&mut rng);
            seen.insert(fam.combination(&x.pure_coords()).rank());
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![4, 6]);
    }

    #[test]
    fn restriction_of_nondegenerate_form() {
        let a = fano_q();
        let big = form_on_c(&a, &a.basis(2)).unwrap();
        let f = a.field();
        // Hyperplane x_3 = 0.
        let hyper: Vec<Vector> = (0..8)
            .filter(|&i| i != 3)
            .map(|i| matrix::unit_vector(f, 8, i))
            .collect();
        let r = restriction_rank_check(&big.matrix, &hyper).unwrap();
        assert_eq!(
            (r.rank_full, r.rank_restricted, r.radical_in_hyperplane),
            (8, 6, true)
        );
        assert!(r.is_consistent());
    }

    #[test]
    fn restriction_of_zero_form() {
        let f = FieldSpec::prime(5).unwrap();
        let zero = Matrix::zeros(f, 8, 8);
        let hyper: Vec<Vector> = (1..8).map(|i| matrix::unit_vector(f, 8, i)).collect();
        let r = restriction_rank_check(&zero, &hyper).unwrap();
        // The radical of the zero form is the whole space.
        assert_eq!(
            (r.rank_full, r.rank_restricted, r.radical_in_hyperplane),
            (0, 0, false)
        );
        assert!(r.is_consistent());
    }

    #[test]
    fn restriction_rejects_non_hyperplanes() {
        let f = FieldSpec::prime(5).unwrap();
        let zero = Matrix::zeros(f, 8, 8);
        let too_small: Vec<Vector> = (1..7).map(|i| matrix::unit_vector(f, 8, i)).collect();
        assert!(matches!(
            restriction_rank_check(&zero, &too_small),
            Err(Error::BadHyperplane { .. })
        ));
        let mut dependent: Vec<Vector> = (1..7).map(|i| matrix::unit_vector(f, 8, i)).collect();
        dependent.push(matrix::unit_vector(f, 8, 1));
        assert!(matches!(
            restriction_rank_check(&zero, &dependent),
            Err(Error::BadHyperplane { dim: 6, ambient: 8 })
        ));
    }
}
