//! Exterior squares `Λ²(C_0)` and `Λ²(C)`, the evaluation map
//! `ω(z) = (f_1*(z), ..., f_7*(z))`, and decomposability tests.
//!
//! Bivectors use the lexicographic wedge basis `(0,1), (0,2), ..., (n-2, n-1)`
//! over the pure basis (21 coordinates) or the working basis of `C`
//! (28 coordinates).

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::forms::{AltForm, FormFamily, Space};
use crate::matrix::{self, span_contains, Matrix, Vector};
use crate::octonion::{Octonion, OctonionAlgebra, PURE_DIM};

/// Wedge pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn space_of_len(len: usize) -> Result<Space> {
    match len {
        7 => Ok(Space::C0),
        8 => Ok(Space::C),
        n => Err(Error::AmbientMismatch(format!(
            "vectors of length {n} belong to neither C_0 nor C"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bivector {
    pub coords: Vector,
    pub space: Space,
}

impl Bivector {
    pub fn new(coords: Vector, space: Space) -> Result<Self> {
        let n = space.dim();
        if coords.len() != n * (n - 1) / 2 {
            return Err(Error::AmbientMismatch(format!(
                "{} coordinates do not describe a bivector over a space of dimension {n}",
                coords.len()
            )));
        }
        Ok(Self { coords, space })
    }

    pub fn zero(field: FieldSpec, space: Space) -> Self {
        let n = space.dim();
        Self {
            coords: vec![field.zero(); n * (n - 1) / 2],
            space,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    pub fn add(&self, other: &Bivector) -> Bivector {
        Bivector {
            coords: matrix::vec_add(&self.coords, &other.coords),
            space: self.space,
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Bivector {
        Bivector {
            coords: matrix::vec_scale(c, &self.coords),
            space: self.space,
        }
    }

    /// The skew matrix `A` with `A_ij = a_ij`, `A_ji = -a_ij` for `i < j`;
    /// the Gram matrix of `ε_z` on the dual space in the dual basis.
    pub fn epsilon_matrix(&self) -> Matrix {
        let n = self.space.dim();
        let field = self.coords[0].field();
        let mut a = Matrix::zeros(field, n, n);
        for (k, (i, j)) in wedge_pairs(n).into_iter().enumerate() {
            a.set(i, j, self.coords[k].clone());
            a.set(j, i, -&self.coords[k]);
        }
        a
    }

    /// Rank of `ε_z`, which equals the dimension of the smallest subspace
    /// `U` with `z ∈ U ∧ U`.
    pub fn epsilon_rank(&self) -> usize {
        self.epsilon_matrix().rank()
    }

    /// The smallest subspace `U` with `z ∈ U ∧ U` (the column space of `ε_z`).
    pub fn support(&self) -> Vec<Vector> {
        self.epsilon_matrix().column_space_basis()
    }
}

/// `x ∧ y` with coordinates `x_i y_j - x_j y_i`.
pub fn wedge(x: &[FieldElement], y: &[FieldElement]) -> Result<Bivector> {
    if x.len() != y.len() {
        return Err(Error::AmbientMismatch(format!(
            "cannot wedge vectors of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    let space = space_of_len(x.len())?;
    let coords = wedge_pairs(x.len())
        .into_iter()
        .map(|(i, j)| &x[i] * &y[j] - &x[j] * &y[i])
        .collect();
    Ok(Bivector { coords, space })
}

/// `z` nonzero and decomposable, i.e. `ε_z` has rank 2.
pub fn is_decomposable(z: &Bivector) -> bool {
    z.epsilon_rank() == 2
}

/// The linear form `f*` on bivectors: `f*(e_i ∧ e_j) = f(e_i, e_j)`.
pub fn form_star(f: &AltForm, z: &Bivector) -> Result<FieldElement> {
    if f.space != z.space {
        return Err(Error::AmbientMismatch(format!(
            "form on {} evaluated on a bivector over {}",
            f.space, z.space
        )));
    }
    Ok(matrix::dot(&f.coords(), &z.coords, f.matrix.field()))
}

/// `Λ²S`: the matrix of `x ∧ y ↦ Sx ∧ Sy` in the wedge basis.
pub fn induced_action(s: &Matrix) -> Matrix {
    let pairs = wedge_pairs(s.rows());
    Matrix::from_fn(s.field(), pairs.len(), pairs.len(), |row, col| {
        let (i, j) = pairs[row];
        let (k, l) = pairs[col];
        s.get(i, k) * s.get(j, l) - s.get(i, l) * s.get(j, k)
    })
}

/// The map `ω` with its exact kernel.
#[derive(Debug, Clone)]
pub struct OmegaMap {
    pub space: Space,
    /// 7×21 or 7×28; row `i` holds the coordinates of `f_i*`.
    pub matrix: Matrix,
    pub kernel: Vec<Bivector>,
}

impl OmegaMap {
    /// Builds `ω` from a family with seven independent generators.
    pub fn new(family: &FormFamily) -> Result<Self> {
        let rank = family.flattened.rank();
        if rank < PURE_DIM {
            return Err(Error::DegenerateFamily(rank));
        }
        let matrix = family.flattened.clone();
        let kernel = matrix
            .kernel_basis()
            .into_iter()
            .map(|coords| Bivector {
                coords,
                space: family.space,
            })
            .collect();
        Ok(Self {
            space: family.space,
            matrix,
            kernel,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn apply(&self, z: &Bivector) -> Result<Vector> {
        if z.space != self.space {
            return Err(Error::AmbientMismatch(format!(
                "omega on {} applied to a bivector over {}",
                self.space, z.space
            )));
        }
        Ok(self.matrix.mul_vec(&z.coords))
    }

    /// Whether `z` lies in the kernel.
    pub fn annihilates(&self, z: &Bivector) -> bool {
        self.apply(z)
            .map(|v| v.iter().all(FieldElement::is_zero))
            .unwrap_or(false)
    }

    /// A random element of the kernel.
    pub fn random_kernel_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Bivector {
        let field = self.matrix.field();
        let mut z = Bivector::zero(field, self.space);
        for k in &self.kernel {
            z = z.add(&k.scale(&field.random(rng)));
        }
        z
    }
}

/// The identification of bivectors with alternating forms through the
/// polarization: `V ≅ V*` turns `ε_z` (a form on `V*`) into the form on `V`
/// with Gram matrix `G A G`.
#[derive(Debug, Clone)]
pub struct Duality {
    pub space: Space,
    gram: Matrix,
    gram_inv: Matrix,
}

impl Duality {
    pub fn new(algebra: &OctonionAlgebra, space: Space) -> Result<Self> {
        let gram = match space {
            Space::C => algebra.norm_gram().clone(),
            Space::C0 => {
                let p = &algebra.pure_basis().embedding;
                p.transpose().mul(algebra.norm_gram()).mul(p)
            }
        };
        let gram_inv = gram.inverse()?;
        Ok(Self {
            space,
            gram,
            gram_inv,
        })
    }

    pub fn bivector_to_altform(&self, z: &Bivector) -> Result<AltForm> {
        if z.space != self.space {
            return Err(Error::AmbientMismatch(format!(
                "duality on {} applied to a bivector over {}",
                self.space, z.space
            )));
        }
        let m = self.gram.mul(&z.epsilon_matrix()).mul(&self.gram);
        AltForm::new(m, self.space)
    }

    pub fn altform_to_bivector(&self, f: &AltForm) -> Result<Bivector> {
        if f.space != self.space {
            return Err(Error::AmbientMismatch(format!(
                "duality on {} applied to a form on {}",
                self.space, f.space
            )));
        }
        let a = self.gram_inv.mul(&f.matrix).mul(&self.gram_inv);
        Bivector::new(a.upper_triangle(), self.space)
    }
}

fn require_division_pure(algebra: &OctonionAlgebra, xs: &[&Octonion]) -> Result<()> {
    if !algebra.is_division() {
        return Err(Error::RequiresDivisionAlgebra);
    }
    for x in xs {
        if x.field() != algebra.field() {
            return Err(Error::AlgebraMismatch);
        }
        if x.is_zero() {
            return Err(Error::ZeroOctonion);
        }
        if !algebra.is_pure(x) {
            return Err(Error::NotPure);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMultipleWitness {
    /// Every `f_x` vanishes on `(y, z)`.
    pub all_forms_vanish: bool,
    /// Index `i` (1-based, into the working basis) with `f_{b_i}(y, z) ≠ 0`.
    pub witness: Option<usize>,
}

/// Decides whether all forms of the family vanish on `(y, z)` through the
/// pure part of `y z̄`, and otherwise names a basis form that does not.
pub fn scalar_multiple_witness(
    algebra: &OctonionAlgebra,
    y: &Octonion,
    z: &Octonion,
) -> Result<ScalarMultipleWitness> {
    require_division_pure(algebra, &[y, z])?;
    let w = algebra.mul(y, &algebra.conjugate(z));
    if algebra.pure_part(&w).is_zero() {
        return Ok(ScalarMultipleWitness {
            all_forms_vanish: true,
            witness: None,
        });
    }
    let witness = (1..=PURE_DIM).find(|&i| {
        let bi = algebra.basis(i);
        !algebra.polarize(&algebra.mul(&bi, y), z).is_zero()
    });
    if witness.is_none() {
        return Err(Error::InternalConsistency(
            "pure part of y z̄ is nonzero but every basis form vanishes".into(),
        ));
    }
    Ok(ScalarMultipleWitness {
        all_forms_vanish: false,
        witness,
    })
}

/// Matrix (in the pure basis) of `z ↦ pure_part(y z̄)` on `C_0`.
pub fn structural_map(algebra: &OctonionAlgebra, y: &Octonion) -> Matrix {
    let pb = algebra.pure_basis();
    let cols: Vec<Vector> = pb
        .vectors
        .iter()
        .map(|b| {
            let w = algebra.mul(y, &algebra.conjugate(b));
            pb.projection.mul_vec(algebra.pure_part(&w).coords())
        })
        .collect();
    Matrix::from_columns(algebra.field(), PURE_DIM, &cols)
}

/// Outcome of the two certificates that `ker ω` contains no nonzero
/// decomposable bivector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecomposabilityAudit {
    pub kernel_samples: usize,
    pub decomposable_found: usize,
    /// Histogram of `rank(ε_z)` over the sampled kernel elements.
    pub epsilon_ranks: BTreeMap<usize, usize>,
    pub structural_samples: usize,
    /// Samples where `z ↦ pure_part(y z̄)` did not have rank 6 with kernel
    /// `span(y)`.
    pub structural_failures: usize,
}

impl DecomposabilityAudit {
    pub fn passed(&self) -> bool {
        self.decomposable_found == 0
            && self.structural_failures == 0
            && self.epsilon_ranks.keys().all(|r| *r == 4 || *r == 6)
    }
}

/// Checks `samples` random nonzero kernel elements for decomposability and
/// `samples` random pure `y` for the structural rank condition.
pub fn kernel_decomposable_audit<R: Rng + ?Sized>(
    algebra: &OctonionAlgebra,
    omega: &OmegaMap,
    samples: usize,
    rng: &mut R,
) -> Result<DecomposabilityAudit> {
    if !algebra.is_division() {
        return Err(Error::RequiresDivisionAlgebra);
    }
    let mut audit = DecomposabilityAudit::default();
    while audit.kernel_samples < samples {
        let z = omega.random_kernel_element(rng);
        if z.is_zero() {
            continue;
        }
        audit.kernel_samples += 1;
        let r = z.epsilon_rank();
        *audit.epsilon_ranks.entry(r).or_default() += 1;
        if r == 2 {
            audit.decomposable_found += 1;
        }
    }
    let field = algebra.field();
    for _ in 0..samples {
        let y = algebra.random_nonzero_pure(rng);
        let t = structural_map(algebra, &y);
        let ker = t.kernel_basis();
        let ok = t.rank() == 6 && ker.len() == 1 && span_contains(field, &ker, &y.pure_coords());
        audit.structural_samples += 1;
        if !ok {
            audit.structural_failures += 1;
        }
    }
    Ok(audit)
}
