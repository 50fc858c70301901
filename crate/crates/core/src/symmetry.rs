//! Explicit automorphisms and derivations, and the invariance checks for
//! the form families and `ker ω`.
//!
//! Nothing here is assumed to be a symmetry: every map is validated against
//! the multiplication table (all 64 basis pairs) before use.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{induced_action, OmegaMap};
use crate::field::FieldSpec;
use crate::forms::{form_on, AltForm, FormFamily, Space};
use crate::matrix::{Matrix, Vector};
use crate::octonion::{Construction, Octonion, OctonionAlgebra, DIM, PURE_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Automorphism,
    Derivation,
}

/// A validated linear map on `C` (working basis) with its restriction to
/// `C_0` (pure basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    pub matrix: Matrix,
    pub restricted: Matrix,
    pub kind: MapKind,
}

fn restrict(algebra: &OctonionAlgebra, m: &Matrix) -> Matrix {
    let pb = algebra.pure_basis();
    pb.projection.mul(m).mul(&pb.embedding)
}

fn check_shape(m: &Matrix, field: FieldSpec) -> Result<()> {
    if m.rows() != DIM || m.cols() != DIM {
        return Err(Error::DimensionMismatch {
            expected: "8x8".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if m.field() != field {
        return Err(Error::FieldMismatch(
            field.to_string(),
            m.field().to_string(),
        ));
    }
    Ok(())
}

fn apply(algebra: &OctonionAlgebra, m: &Matrix, x: &Octonion) -> Octonion {
    algebra
        .element(m.mul_vec(x.coords()))
        .expect("8x8 matrix over the algebra's field")
}

/// Why `m` fails to be an automorphism; `None` when it is one.
pub fn automorphism_defect(algebra: &OctonionAlgebra, m: &Matrix) -> Option<String> {
    if let Err(e) = check_shape(m, algebra.field()) {
        return Some(e.to_string());
    }
    if &apply(algebra, m, algebra.identity()) != algebra.identity() {
        return Some("does not fix e".into());
    }
    if m.rank() != DIM {
        return Some("not invertible".into());
    }
    let images: Vec<Octonion> = (0..DIM)
        .map(|i| apply(algebra, m, &algebra.basis(i)))
        .collect();
    for i in 0..DIM {
        for j in 0..DIM {
            let lhs = apply(
                algebra,
                m,
                &algebra.mul(&algebra.basis(i), &algebra.basis(j)),
            );
            let rhs = algebra.mul(&images[i], &images[j]);
            if lhs != rhs {
                return Some(format!("not multiplicative on basis pair ({i}, {j})"));
            }
        }
    }
    None
}

pub fn is_automorphism(algebra: &OctonionAlgebra, m: &Matrix) -> bool {
    automorphism_defect(algebra, m).is_none()
}

/// Why `d` fails to be a derivation; `None` when it is one.
pub fn derivation_defect(algebra: &OctonionAlgebra, d: &Matrix) -> Option<String> {
    if let Err(e) = check_shape(d, algebra.field()) {
        return Some(e.to_string());
    }
    if !apply(algebra, d, algebra.identity()).is_zero() {
        return Some("does not annihilate e".into());
    }
    let images: Vec<Octonion> = (0..DIM)
        .map(|i| apply(algebra, d, &algebra.basis(i)))
        .collect();
    for i in 0..DIM {
        for j in 0..DIM {
            let (bi, bj) = (algebra.basis(i), algebra.basis(j));
            let lhs = apply(algebra, d, &algebra.mul(&bi, &bj));
            let rhs = &algebra.mul(&images[i], &bj) + &algebra.mul(&bi, &images[j]);
            if lhs != rhs {
                return Some(format!("Leibniz rule fails on basis pair ({i}, {j})"));
            }
        }
    }
    None
}

impl AlgebraMap {
    pub fn automorphism(algebra: &OctonionAlgebra, m: Matrix) -> Result<Self> {
        if let Some(why) = automorphism_defect(algebra, &m) {
            return Err(Error::NotAutomorphism(why));
        }
        Ok(Self {
            restricted: restrict(algebra, &m),
            matrix: m,
            kind: MapKind::Automorphism,
        })
    }

    pub fn derivation(algebra: &OctonionAlgebra, d: Matrix) -> Result<Self> {
        if let Some(why) = derivation_defect(algebra, &d) {
            return Err(Error::InternalConsistency(format!(
                "not a derivation: {why}"
            )));
        }
        Ok(Self {
            restricted: restrict(algebra, &d),
            matrix: d,
            kind: MapKind::Derivation,
        })
    }

    pub fn identity(algebra: &OctonionAlgebra) -> Self {
        Self::automorphism(algebra, Matrix::identity(algebra.field(), DIM))
            .expect("identity is an automorphism")
    }

    pub fn apply(&self, algebra: &OctonionAlgebra, x: &Octonion) -> Octonion {
        apply(algebra, &self.matrix, x)
    }

    /// `self ∘ other` for automorphisms.
    pub fn compose(&self, algebra: &OctonionAlgebra, other: &AlgebraMap) -> Result<Self> {
        Self::automorphism(algebra, self.matrix.mul(&other.matrix))
    }

    /// The matrix acting on `space`.
    pub fn on(&self, space: Space) -> &Matrix {
        match space {
            Space::C => &self.matrix,
            Space::C0 => &self.restricted,
        }
    }

    /// `Sᵀ G S = G`.
    pub fn is_isometry(&self, algebra: &OctonionAlgebra) -> bool {
        let g = algebra.norm_gram();
        &self.matrix.transpose().mul(g).mul(&self.matrix) == g
    }

    /// `Dᵀ G + G D = 0`.
    pub fn is_skew(&self, algebra: &OctonionAlgebra) -> bool {
        let g = algebra.norm_gram();
        self.matrix
            .transpose()
            .mul(g)
            .add(&g.mul(&self.matrix))
            .is_zero()
    }

    /// Whether the map sends `C_0` into `C_0`, i.e. the `e`-row vanishes on
    /// the pure coordinates.
    pub fn preserves_pure(&self) -> bool {
        (1..DIM).all(|j| self.matrix.get(0, j).is_zero())
    }
}

/// `σ([[α, v], [w, β]]) = [[α, A v], [A⁻ᵀ w, β]]` for `det A = 1`.
pub fn sl3_automorphism(algebra: &OctonionAlgebra, a: &Matrix) -> Result<AlgebraMap> {
    if algebra.construction() != &Construction::SplitZorn {
        return Err(Error::RequiresSplitZorn);
    }
    let field = algebra.field();
    if a.rows() != 3 || a.cols() != 3 || a.field() != field {
        return Err(Error::DimensionMismatch {
            expected: format!("3x3 over {field}"),
            got: format!("{}x{} over {}", a.rows(), a.cols(), a.field()),
        });
    }
    if !a.determinant()?.is_one() {
        return Err(Error::NotUnimodular);
    }
    let a_inv_t = a.inverse()?.transpose();
    let mut native = Matrix::identity(field, DIM);
    for i in 0..3 {
        for j in 0..3 {
            native.set(1 + i, 1 + j, a.get(i, j).clone());
            native.set(4 + i, 4 + j, a_inv_t.get(i, j).clone());
        }
    }
    let working = algebra
        .native_basis_inv()
        .mul(&native)
        .mul(algebra.native_basis());
    AlgebraMap::automorphism(algebra, working)
}

/// A uniformly random invertible 3×3 matrix rescaled to determinant 1.
pub fn random_sl3<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::from_fn(field, 3, 3, |_, _| field.random(rng));
        let det = m.determinant().expect("square");
        if let Ok(inv) = det.inv() {
            let mut out = m;
            for j in 0..3 {
                let v = out.get(0, j) * &inv;
                out.set(0, j, v);
            }
            return out;
        }
    }
}

/// The map fixing `e` with `b_i ↦ sign_i b_{perm_i}` for `i = 1..7`
/// (`perm` and `signs` indexed from 0 for `b_1`).
pub fn signed_permutation(
    algebra: &OctonionAlgebra,
    perm: [usize; PURE_DIM],
    signs: [i64; PURE_DIM],
) -> Result<AlgebraMap> {
    let field = algebra.field();
    let mut m = Matrix::zeros(field, DIM, DIM);
    m.set(0, 0, field.one());
    for i in 0..PURE_DIM {
        m.set(1 + perm[i], 1 + i, field.from_i64(signs[i]));
    }
    AlgebraMap::automorphism(algebra, m)
}

/// `e_i ↦ e_{i+1}` (indices mod 7), an automorphism of the Fano table.
pub fn fano_index_shift(algebra: &OctonionAlgebra) -> Result<AlgebraMap> {
    signed_permutation(algebra, [1, 2, 3, 4, 5, 6, 0], [1; PURE_DIM])
}

/// `e_i ↦ e_{2i}` (indices mod 7).
pub fn fano_doubling(algebra: &OctonionAlgebra) -> Result<AlgebraMap> {
    let perm = std::array::from_fn(|i| (2 * (i + 1) - 1) % 7);
    signed_permutation(algebra, perm, [1; PURE_DIM])
}

/// Generators of a finite group of automorphisms of the Fano table: the
/// index shift, the doubling map and every sign change that is an
/// automorphism.
pub fn fano_symmetry_generators(algebra: &OctonionAlgebra) -> Result<Vec<AlgebraMap>> {
    let mut gens = vec![fano_index_shift(algebra)?, fano_doubling(algebra)?];
    let id: [usize; PURE_DIM] = std::array::from_fn(|i| i);
    for mask in 1u32..(1 << PURE_DIM) {
        let signs = std::array::from_fn(|i| if mask >> i & 1 == 1 { -1 } else { 1 });
        if let Ok(m) = signed_permutation(algebra, id, signs) {
            gens.push(m);
        }
    }
    Ok(gens)
}

/// A random word of length 1..=6 in `generators`.
pub fn random_word<R: Rng + ?Sized>(
    algebra: &OctonionAlgebra,
    generators: &[AlgebraMap],
    rng: &mut R,
) -> Result<AlgebraMap> {
    let len = rng.gen_range(1..=6);
    let mut acc = AlgebraMap::identity(algebra);
    for _ in 0..len {
        let g = &generators[rng.gen_range(0..generators.len())];
        acc = acc.compose(algebra, g)?;
    }
    Ok(acc)
}

/// `D_{a,b} = [L_a, L_b] + [L_a, R_b] + [R_a, R_b]`, a derivation of any
/// alternative algebra.
pub fn derivation_from_pair(
    algebra: &OctonionAlgebra,
    a: &Octonion,
    b: &Octonion,
) -> Result<AlgebraMap> {
    let (la, lb) = (algebra.left_mult_matrix(a), algebra.left_mult_matrix(b));
    let (ra, rb) = (algebra.right_mult_matrix(a), algebra.right_mult_matrix(b));
    let comm = |x: &Matrix, y: &Matrix| x.mul(y).sub(&y.mul(x));
    let d = comm(&la, &lb).add(&comm(&la, &rb)).add(&comm(&ra, &rb));
    AlgebraMap::derivation(algebra, d)
}

/// `σ(f)(x, y) = f(σ⁻¹x, σ⁻¹y)`, i.e. `S⁻ᵀ M S⁻¹`.
pub fn act_on_form(map: &AlgebraMap, f: &AltForm) -> Result<AltForm> {
    if map.kind != MapKind::Automorphism {
        return Err(Error::NotAutomorphism(
            "derivations act infinitesimally".into(),
        ));
    }
    let s_inv = map.on(f.space).inverse()?;
    AltForm::new(s_inv.transpose().mul(&f.matrix).mul(&s_inv), f.space)
}

/// Infinitesimal action of a derivation on a form: `-(Dᵀ M + M D)`.
pub fn derivation_act_on_form(map: &AlgebraMap, f: &AltForm) -> AltForm {
    let d = map.on(f.space);
    let m = d.transpose().mul(&f.matrix).add(&f.matrix.mul(d));
    AltForm {
        matrix: m.scale(&-f.matrix.field().one()),
        space: f.space,
    }
}

/// Matrix of `x ∧ y ↦ Dx ∧ y + x ∧ Dy` in the wedge basis.
pub fn induced_derivation_action(d: &Matrix) -> Matrix {
    let n = d.rows();
    let field = d.field();
    let id = Matrix::identity(field, n);
    let pairs = crate::exterior::wedge_pairs(n);
    Matrix::from_fn(field, pairs.len(), pairs.len(), |row, col| {
        let (i, j) = pairs[row];
        let (k, l) = pairs[col];
        d.get(i, k) * id.get(j, l) + id.get(i, k) * d.get(j, l)
            - d.get(i, l) * id.get(j, k)
            - id.get(i, l) * d.get(j, k)
    })
}

/// Failure counts of an invariance audit; all zero means every check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    pub automorphisms: usize,
    pub derivations: usize,
    /// Maps that are not isometries / not skew, or do not preserve `C_0`.
    pub structure_failures: usize,
    /// `σ(f_i)` outside `span(family)`.
    pub membership_failures: usize,
    /// `σ(f_i) ≠ f_{σ(b_i)}` (generators) or `σ(f_x) ≠ f_{σ(x)}` (samples).
    pub identity_failures: usize,
    pub identity_samples: usize,
    /// `act(σ∘τ) ≠ act(σ)∘act(τ)` on a generator.
    pub homomorphism_failures: usize,
    /// Kernel basis vectors of `ω` mapped outside the kernel.
    pub kernel_failures: usize,
    pub derivation_triples: usize,
    pub derivation_failures: usize,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.structure_failures == 0
            && self.membership_failures == 0
            && self.identity_failures == 0
            && self.homomorphism_failures == 0
            && self.kernel_failures == 0
            && self.derivation_failures == 0
    }

    pub fn merge(mut self, other: &InvarianceReport) -> InvarianceReport {
        self.automorphisms += other.automorphisms;
        self.derivations += other.derivations;
        self.structure_failures += other.structure_failures;
        self.membership_failures += other.membership_failures;
        self.identity_failures += other.identity_failures;
        self.identity_samples += other.identity_samples;
        self.homomorphism_failures += other.homomorphism_failures;
        self.kernel_failures += other.kernel_failures;
        self.derivation_triples += other.derivation_triples;
        self.derivation_failures += other.derivation_failures;
        self
    }
}

fn random_in_space<R: Rng + ?Sized>(
    algebra: &OctonionAlgebra,
    space: Space,
    rng: &mut R,
) -> Octonion {
    match space {
        Space::C => algebra.random(rng),
        Space::C0 => algebra.random_pure(rng),
    }
}

/// Checks the family and `ker ω` against every map.
///
/// Automorphisms: `σ(f_i) ∈ span(family)` and `σ(f_i) = f_{σ(b_i)}` for each
/// generator, `σ(f_x) = f_{σ(x)}` on `samples` random pure `x`, and
/// `Λ²σ (ker ω) ⊆ ker ω`. Derivations: `F_{Dx}(y,z) + F_x(Dy,z) + F_x(y,Dz)
/// = 0` on `samples` random triples, the matrix form of the same identity on
/// the generators, and `ker ω` stability under the induced action.
pub fn invariance_audit<R: Rng + ?Sized>(
    algebra: &OctonionAlgebra,
    family: &FormFamily,
    omega: &OmegaMap,
    maps: &[AlgebraMap],
    samples: usize,
    rng: &mut R,
) -> Result<InvarianceReport> {
    let space = family.space;
    let mut report = InvarianceReport::default();
    let mut previous: Option<&AlgebraMap> = None;
    let kernel_matrix = Matrix::from_columns(
        algebra.field(),
        omega.matrix.cols(),
        &omega
            .kernel
            .iter()
            .map(|z| z.coords.clone())
            .collect::<Vec<Vector>>(),
    );
    for map in maps {
        let pure_ok = map.preserves_pure();
        match map.kind {
            MapKind::Automorphism => {
                report.automorphisms += 1;
                if !(pure_ok && map.is_isometry(algebra)) {
                    report.structure_failures += 1;
                }
                for (i, f) in family.generators.iter().enumerate() {
                    let moved = act_on_form(map, f)?;
                    if !family.contains(&moved) {
                        report.membership_failures += 1;
                    }
                    let image = map.apply(algebra, &algebra.pure_basis().vectors[i]);
                    if form_on(algebra, &image, space)? != moved {
                        report.identity_failures += 1;
                    }
                    if let Some(prev) = previous {
                        let composed = map.compose(algebra, prev)?;
                        if act_on_form(&composed, f)? != act_on_form(map, &act_on_form(prev, f)?)? {
                            report.homomorphism_failures += 1;
                        }
                    }
                }
                for _ in 0..samples {
                    let x = algebra.random_pure(rng);
                    report.identity_samples += 1;
                    let lhs = act_on_form(map, &form_on(algebra, &x, space)?)?;
                    if lhs != form_on(algebra, &map.apply(algebra, &x), space)? {
                        report.identity_failures += 1;
                    }
                }
                let moved = omega
                    .matrix
                    .mul(&induced_action(map.on(space)))
                    .mul(&kernel_matrix);
                if !moved.is_zero() {
                    report.kernel_failures += 1;
                }
                previous = Some(map);
            }
            MapKind::Derivation => {
                report.derivations += 1;
                if !(pure_ok && map.is_skew(algebra)) {
                    report.structure_failures += 1;
                }
                for (i, f) in family.generators.iter().enumerate() {
                    let dx = map.apply(algebra, &algebra.pure_basis().vectors[i]);
                    if form_on(algebra, &dx, space)? != derivation_act_on_form(map, f) {
                        report.identity_failures += 1;
                    }
                }
                for _ in 0..samples {
                    let x = algebra.random_pure(rng);
                    let y = random_in_space(algebra, space, rng);
                    let z = random_in_space(algebra, space, rng);
                    let form = |x: &Octonion, y: &Octonion, z: &Octonion| {
                        algebra.polarize(&algebra.mul(x, y), z)
                    };
                    let (dx, dy, dz) = (
                        map.apply(algebra, &x),
                        map.apply(algebra, &y),
                        map.apply(algebra, &z),
                    );
                    let total = form(&dx, &y, &z) + form(&x, &dy, &z) + form(&x, &y, &dz);
                    report.derivation_triples += 1;
                    if !total.is_zero() {
                        report.derivation_failures += 1;
                    }
                }
                let moved = omega
                    .matrix
                    .mul(&induced_derivation_action(map.on(space)))
                    .mul(&kernel_matrix);
                if !moved.is_zero() {
                    report.kernel_failures += 1;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octonion::Construction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fano() -> OctonionAlgebra {
        OctonionAlgebra::build(FieldSpec::rationals(), Construction::DivisionFano).unwrap()
    }

    fn zorn3() -> OctonionAlgebra {
        OctonionAlgebra::build(FieldSpec::prime(3).unwrap(), Construction::SplitZorn).unwrap()
    }

    #[test]
    fn identity_and_minus_identity() {
        let a = fano();
        let f = a.field();
        assert!(is_automorphism(&a, &Matrix::identity(f, DIM)));
        let minus = Matrix::identity(f, DIM).scale(&f.from_i64(-1));
        assert!(!is_automorphism(&a, &minus));
    }

    #[test]
    fn fano_maps_are_automorphisms() {
        let a = fano();
        let shift = fano_index_shift(&a).unwrap();
        assert_eq!(shift.apply(&a, &a.basis(7)), a.basis(1));
        assert!(fano_doubling(&a).is_ok());
        // Identity plus the seven nontrivial sign patterns.
        let gens = fano_symmetry_generators(&a).unwrap();
        assert_eq!(gens.len(), 2 + 7);
        // Transposing two units is not an automorphism.
        assert!(signed_permutation(&a, [1, 0, 2, 3, 4, 5, 6], [1; 7]).is_err());
    }

    #[test]
    fn sl3_maps() {
        let a = zorn3();
        let f = a.field();
        let id = sl3_automorphism(&a, &Matrix::identity(f, 3)).unwrap();
        assert_eq!(id.matrix, Matrix::identity(f, DIM));
        let shear = Matrix::from_i64(f, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(sl3_automorphism(&a, &shear).is_ok());
        let cyclic = Matrix::from_i64(f, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert!(sl3_automorphism(&a, &cyclic).is_ok());
        let scaled = Matrix::identity(f, 3).scale(&f.from_i64(2));
        assert_eq!(
            sl3_automorphism(&a, &scaled).unwrap_err(),
            Error::NotUnimodular
        );
        assert_eq!(
            sl3_automorphism(&fano(), &Matrix::identity(FieldSpec::rationals(), 3)).unwrap_err(),
            Error::RequiresSplitZorn
        );
    }

    #[test]
    fn derivation_examples() {
        let a = fano();
        let x = a.basis(3);
        assert!(derivation_from_pair(&a, &x, &x).unwrap().matrix.is_zero());
        assert!(derivation_from_pair(&a, a.identity(), &a.basis(5))
            .unwrap()
            .matrix
            .is_zero());
        let d = derivation_from_pair(&a, &a.basis(1), &a.basis(2)).unwrap();
        assert!(!d.matrix.is_zero());
        assert!(d.is_skew(&a) && d.preserves_pure());
    }

    #[test]
    fn act_on_form_with_identity_and_rank() {
        let a = zorn3();
        let fam = FormFamily::new(&a, Space::C0).unwrap();
        let id = AlgebraMap::identity(&a);
        assert_eq!(
            act_on_form(&id, &fam.generators[2]).unwrap(),
            fam.generators[2]
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sl3_automorphism(&a, &random_sl3(a.field(), &mut rng)).unwrap();
        for g in &fam.generators {
            assert_eq!(act_on_form(&s, g).unwrap().rank(), g.rank());
        }
    }

    #[test]
    fn small_audits_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = zorn3();
        let fam = FormFamily::new(&a, Space::C0).unwrap();
        let omega = OmegaMap::new(&fam).unwrap();
        let mut maps: Vec<AlgebraMap> = (0..3)
            .map(|_| sl3_automorphism(&a, &random_sl3(a.field(), &mut rng)).unwrap())
            .collect();
        maps.push(derivation_from_pair(&a, &a.random(&mut rng), &a.random(&mut rng)).unwrap());
        let report = invariance_audit(&a, &fam, &omega, &maps, 10, &mut rng).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!((report.automorphisms, report.derivations), (3, 1));
    }
}
