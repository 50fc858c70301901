//! Octonion algebras over an exact field.
//!
//! Three constructions are supported:
//!
//! * `SplitZorn`: Zorn vector matrices `[[α, v], [w, β]]` with
//!   `N = αβ - v·w`. Always split.
//! * `CayleyDickson(γ1, γ2, γ3)`: three doublings of the base field with
//!   `(a, b)(c, d) = (ac + γ d b̄, ā d + c b)` and `N(a, b) = N(a) - γ N(b)`.
//! * `DivisionFano`: the classical table on `e, e1, ..., e7` with
//!   `ei² = -e` and `ei e(i+1) = e(i+3)` along the Fano lines
//!   `{i, i+1, i+3}` (indices mod 7). Anisotropic over `Q`.
//!
//! Every construction is first written in its own native coordinates and
//! then re-expressed in a *working basis* `b0 = e, b1, ..., b7` where
//! `b1..b7` is the deterministic null-space basis of `⟨e, ·⟩`. All public
//! coordinates are working coordinates, so the pure octonions are exactly
//! the vectors with a vanishing 0-th coordinate for every construction.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{self, intersection_dim, Matrix, Vector};

pub const DIM: usize = 8;
pub const PURE_DIM: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    SplitZorn,
    CayleyDickson([FieldElement; 3]),
    DivisionFano,
}

impl Construction {
    /// Parses `split-zorn`, `division-fano` or `cayley-dickson:<g1>,<g2>,<g3>`
    /// with the parameters read as elements of `field`.
    pub fn parse(s: &str, field: FieldSpec) -> Result<Self> {
        let t = s.trim();
        match t {
            "split-zorn" => return Ok(Self::SplitZorn),
            "division-fano" => return Ok(Self::DivisionFano),
            _ => {}
        }
        let Some(params) = t.strip_prefix("cayley-dickson:") else {
            return Err(Error::InvalidAlgebraSpec(
                t.to_string(),
                "expected split-zorn, division-fano or cayley-dickson:<g1>,<g2>,<g3>".into(),
            ));
        };
        let parsed = params
            .split(',')
            .map(|p| field.parse_element(p))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidAlgebraSpec(t.to_string(), e.to_string()))?;
        let gammas: [FieldElement; 3] = parsed.try_into().map_err(|_| {
            Error::InvalidAlgebraSpec(t.to_string(), "expected exactly three parameters".into())
        })?;
        Ok(Self::CayleyDickson(gammas))
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SplitZorn => f.write_str("split-zorn"),
            Self::DivisionFano => f.write_str("division-fano"),
            Self::CayleyDickson([a, b, c]) => write!(f, "cayley-dickson:{a},{b},{c}"),
        }
    }
}

/// An element of an octonion algebra, in working coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Octonion {
    coords: Vector,
}

impl Octonion {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    pub fn scale(&self, c: &FieldElement) -> Octonion {
        Octonion {
            coords: matrix::vec_scale(c, &self.coords),
        }
    }

    /// Coordinates `1..8`, i.e. the coordinates in the pure basis when the
    /// element is pure.
    pub fn pure_coords(&self) -> Vector {
        self.coords[1..].to_vec()
    }
}

impl Add for &Octonion {
    type Output = Octonion;

    fn add(self, rhs: &Octonion) -> Octonion {
        Octonion {
            coords: matrix::vec_add(&self.coords, &rhs.coords),
        }
    }
}

impl Sub for &Octonion {
    type Output = Octonion;

    fn sub(self, rhs: &Octonion) -> Octonion {
        Octonion {
            coords: matrix::vec_sub(&self.coords, &rhs.coords),
        }
    }
}

impl Neg for &Octonion {
    type Output = Octonion;

    fn neg(self) -> Octonion {
        Octonion {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }
}

/// Basis of the pure octonions `C_0` together with its inclusion into `C`
/// and the projection `x ↦ coordinates of pure_part(x)`.
#[derive(Debug, Clone)]
pub struct PureBasis {
    pub vectors: Vec<Octonion>,
    /// 8×7, columns are the basis vectors.
    pub embedding: Matrix,
    /// 7×8 left inverse of `embedding` that kills `e`.
    pub projection: Matrix,
}

/// Dimensions describing `L_x`: image, kernel, and their intersections with
/// `C_0`, plus isotropy of image and kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelImageProfile {
    pub dim_image: usize,
    pub dim_kernel: usize,
    pub dim_image_meet_pure: usize,
    pub dim_kernel_meet_pure: usize,
    pub image_totally_isotropic: bool,
    pub kernel_totally_isotropic: bool,
}

impl KernelImageProfile {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (
            self.dim_image,
            self.dim_kernel,
            self.dim_image_meet_pure,
            self.dim_kernel_meet_pure,
        )
    }
}

/// An eight-dimensional composition algebra with its norm form, identity
/// and pure subspace, immutable once built.
#[derive(Debug, Clone)]
pub struct OctonionAlgebra {
    field: FieldSpec,
    construction: Construction,
    /// `products[8 i + j]` lists the nonzero `(k, c)` with `b_i b_j = Σ c b_k`.
    products: Vec<Vec<(usize, FieldElement)>>,
    norm_gram: Matrix,
    identity: Octonion,
    pure_basis: PureBasis,
    /// Columns are the working basis expressed in native coordinates.
    native_basis: Matrix,
    native_basis_inv: Matrix,
    labels: Vec<String>,
    anisotropic: bool,
    half: FieldElement,
}

impl OctonionAlgebra {
    /// Builds the algebra and checks every structural invariant; any
    /// violation is reported as `AlgebraConstruction`.
    pub fn build(field: FieldSpec, construction: Construction) -> Result<Self> {
        let algebra = Self::build_unchecked(field, construction)?;
        let violations = algebra.validate();
        if violations.is_empty() {
            Ok(algebra)
        } else {
            Err(Error::AlgebraConstruction(violations.join("; ")))
        }
    }

    /// Parses an algebra description against `field` and builds it.
    pub fn from_spec(field: FieldSpec, spec: &str) -> Result<Self> {
        Self::build(field, Construction::parse(spec, field)?)
    }

    fn build_unchecked(field: FieldSpec, construction: Construction) -> Result<Self> {
        let native = NativeModel::new(field, &construction)?;

        // Working basis: e first, then the null space of ⟨e, ·⟩.
        let e_row = Matrix::from_rows(field, vec![native.gram.mul_vec(&native.identity)])?;
        let mut columns = vec![native.identity.clone()];
        columns.extend(e_row.kernel_basis());
        let basis = Matrix::from_columns(field, DIM, &columns);
        let basis_inv = basis.inverse().map_err(|_| {
            Error::AlgebraConstruction("identity is isotropic for the polarization".into())
        })?;

        let mut products = Vec::with_capacity(DIM * DIM);
        for i in 0..DIM {
            for j in 0..DIM {
                let prod = native.mul(&columns[i], &columns[j]);
                let coords = basis_inv.mul_vec(&prod);
                products.push(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                );
            }
        }
        let norm_gram = basis.transpose().mul(&native.gram).mul(&basis);

        let vectors: Vec<Octonion> = (1..DIM)
            .map(|i| Octonion {
                coords: matrix::unit_vector(field, DIM, i),
            })
            .collect();
        let embedding = Matrix::from_fn(field, DIM, PURE_DIM, |i, j| {
            if i == j + 1 {
                field.one()
            } else {
                field.zero()
            }
        });
        let projection = embedding.transpose();

        let anisotropic = match field.modulus() {
            // Every form of dimension >= 3 over a finite field is isotropic.
            Some(_) => false,
            // Over Q a form of dimension >= 5 is isotropic unless it is
            // definite (Meyer), and N(e) = 1 rules out negative definite.
            None => is_positive_definite(&norm_gram),
        };

        Ok(Self {
            field,
            labels: native.labels,
            construction,
            products,
            norm_gram,
            identity: Octonion {
                coords: matrix::unit_vector(field, DIM, 0),
            },
            pure_basis: PureBasis {
                vectors,
                embedding,
                projection,
            },
            native_basis: basis,
            native_basis_inv: basis_inv,
            anisotropic,
            half: field.from_i64(2).inv().expect("characteristic is not 2"),
        })
    }

    /// Checks the defining identities; returns a description of each
    /// violation (empty when the table is a genuine octonion algebra).
    ///
    /// The composition law is checked through its full linearization
    /// `⟨x1 y1, x2 y2⟩ + ⟨x1 y2, x2 y1⟩ = ⟨x1, x2⟩⟨y1, y2⟩` on all basis
    /// quadruples, which is equivalent to `N(xy) = N(x) N(y)` for all `x, y`
    /// when the characteristic is not 2.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let f = self.field;
        let e = &self.identity;
        if !self.norm(e).is_one() {
            out.push("N(e) != 1".to_string());
        }
        if self.norm_gram.rank() != DIM {
            out.push("polarization is degenerate".to_string());
        }
        let basis: Vec<Octonion> = (0..DIM).map(|i| self.basis(i)).collect();
        for b in &basis {
            if &self.mul(e, b) != b || &self.mul(b, e) != b {
                out.push("e is not a two-sided identity".to_string());
                break;
            }
        }
        let table: Vec<Vector> = (0..DIM * DIM)
            .map(|ij| self.mul(&basis[ij / DIM], &basis[ij % DIM]).into_coords())
            .collect();
        let gram_table: Vec<Vector> = table.iter().map(|v| self.norm_gram.mul_vec(v)).collect();
        let g = &self.norm_gram;
        'outer: for x1 in 0..DIM {
            for x2 in 0..DIM {
                for y1 in 0..DIM {
                    for y2 in 0..DIM {
                        let lhs = matrix::dot(&table[x1 * DIM + y1], &gram_table[x2 * DIM + y2], f)
                            + matrix::dot(&table[x1 * DIM + y2], &gram_table[x2 * DIM + y1], f);
                        let rhs = g.get(x1, x2) * g.get(y1, y2);
                        if lhs != rhs {
                            out.push(format!(
                                "composition law fails on basis quadruple ({x1}, {x2}, {y1}, {y2})"
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        'conj: for i in 0..DIM {
            for j in 0..DIM {
                let lhs = self.conjugate(&self.mul(&basis[i], &basis[j]));
                let rhs = self.mul(&self.conjugate(&basis[j]), &self.conjugate(&basis[i]));
                if lhs != rhs {
                    out.push(format!(
                        "conjugation is not an anti-involution on ({i}, {j})"
                    ));
                    break 'conj;
                }
            }
        }
        let pure_gram = self
            .pure_basis
            .embedding
            .transpose()
            .mul(&self.norm_gram)
            .mul(&self.pure_basis.embedding);
        if pure_gram.rank() != PURE_DIM {
            out.push("norm restricted to C_0 is degenerate".to_string());
        }
        out
    }

    /// A copy whose structure constant `b_i b_j` has `delta` added to its
    /// `b_k` coefficient. No validation is performed; meant for fault
    /// injection.
    pub fn with_perturbed_constant(
        &self,
        i: usize,
        j: usize,
        k: usize,
        delta: &FieldElement,
    ) -> Self {
        let mut out = self.clone();
        let entry = &mut out.products[i * DIM + j];
        match entry.iter_mut().find(|(idx, _)| *idx == k) {
            Some((_, c)) => *c += delta,
            None => entry.push((k, delta.clone())),
        }
        entry.retain(|(_, c)| !c.is_zero());
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn norm_gram(&self) -> &Matrix {
        &self.norm_gram
    }

    pub fn identity(&self) -> &Octonion {
        &self.identity
    }

    pub fn pure_basis(&self) -> &PureBasis {
        &self.pure_basis
    }

    /// Labels of the working basis `b0..b7`.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Whether the norm is anisotropic, i.e. the algebra is a division
    /// algebra.
    pub fn is_division(&self) -> bool {
        self.anisotropic
    }

    /// Structure constants of `b_i b_j` as a dense coordinate vector.
    pub fn structure_constants(&self, i: usize, j: usize) -> Vector {
        let mut v = vec![self.field.zero(); DIM];
        for (k, c) in &self.products[i * DIM + j] {
            v[*k] = c.clone();
        }
        v
    }

    /// Change of basis from working to native coordinates (columns are the
    /// working basis vectors).
    pub fn native_basis(&self) -> &Matrix {
        &self.native_basis
    }

    pub fn native_basis_inv(&self) -> &Matrix {
        &self.native_basis_inv
    }

    pub fn element(&self, coords: Vector) -> Result<Octonion> {
        if coords.len() != DIM {
            return Err(Error::DimensionMismatch {
                expected: "8 coordinates".into(),
                got: format!("{} coordinates", coords.len()),
            });
        }
        if let Some(x) = coords.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                x.field().to_string(),
            ));
        }
        Ok(Octonion { coords })
    }

    pub fn from_i64(&self, coords: [i64; DIM]) -> Octonion {
        Octonion {
            coords: coords.iter().map(|&c| self.field.from_i64(c)).collect(),
        }
    }

    pub fn zero(&self) -> Octonion {
        Octonion {
            coords: vec![self.field.zero(); DIM],
        }
    }

    pub fn basis(&self, i: usize) -> Octonion {
        Octonion {
            coords: matrix::unit_vector(self.field, DIM, i),
        }
    }

    /// The pure octonion with the given coordinates in the pure basis.
    pub fn pure_from_coords(&self, coords: &[FieldElement]) -> Octonion {
        assert_eq!(coords.len(), PURE_DIM);
        Octonion {
            coords: self.pure_basis.embedding.mul_vec(coords),
        }
    }

    /// The Zorn vector matrix `[[alpha, v], [w, beta]]`.
    pub fn zorn(
        &self,
        alpha: FieldElement,
        v: [FieldElement; 3],
        w: [FieldElement; 3],
        beta: FieldElement,
    ) -> Result<Octonion> {
        if self.construction != Construction::SplitZorn {
            return Err(Error::RequiresSplitZorn);
        }
        let mut native = vec![alpha];
        native.extend(v);
        native.extend(w);
        native.push(beta);
        Ok(Octonion {
            coords: self.native_basis_inv.mul_vec(&native),
        })
    }

    pub fn to_native(&self, x: &Octonion) -> Vector {
        self.native_basis.mul_vec(&x.coords)
    }

    pub fn mul(&self, x: &Octonion, y: &Octonion) -> Octonion {
        let mut out = vec![self.field.zero(); DIM];
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in &self.products[i * DIM + j] {
                    out[*k] += &c * s;
                }
            }
        }
        Octonion { coords: out }
    }

    /// `mul` with a check that both operands belong to this algebra's field.
    pub fn checked_mul(&self, x: &Octonion, y: &Octonion) -> Result<Octonion> {
        if x.coords.len() != DIM
            || y.coords.len() != DIM
            || x.field() != self.field
            || y.field() != self.field
        {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.mul(x, y))
    }

    pub fn polarize(&self, x: &Octonion, y: &Octonion) -> FieldElement {
        matrix::dot(&x.coords, &self.norm_gram.mul_vec(&y.coords), self.field)
    }

    pub fn norm(&self, x: &Octonion) -> FieldElement {
        &self.polarize(x, x) * &self.half
    }

    /// `x̄ = ⟨x, e⟩ e - x`.
    pub fn conjugate(&self, x: &Octonion) -> Octonion {
        let t = self.polarize(x, &self.identity);
        &self.identity.scale(&t) - x
    }

    pub fn inverse(&self, x: &Octonion) -> Result<Octonion> {
        let n = self.norm(x);
        let inv = n.inv().map_err(|_| Error::NotInvertible)?;
        Ok(self.conjugate(x).scale(&inv))
    }

    pub fn is_pure(&self, x: &Octonion) -> bool {
        self.polarize(x, &self.identity).is_zero()
    }

    /// `x - (⟨x, e⟩ / 2) e`.
    pub fn pure_part(&self, x: &Octonion) -> Octonion {
        let t = &self.polarize(x, &self.identity) * &self.half;
        x - &self.identity.scale(&t)
    }

    /// Matrix of `L_x : y ↦ xy`; column `j` holds `x b_j`.
    pub fn left_mult_matrix(&self, x: &Octonion) -> Matrix {
        let cols: Vec<Vector> = (0..DIM)
            .map(|j| self.mul(x, &self.basis(j)).into_coords())
            .collect();
        Matrix::from_columns(self.field, DIM, &cols)
    }

    /// Matrix of `R_x : y ↦ yx`.
    pub fn right_mult_matrix(&self, x: &Octonion) -> Matrix {
        let cols: Vec<Vector> = (0..DIM)
            .map(|j| self.mul(&self.basis(j), x).into_coords())
            .collect();
        Matrix::from_columns(self.field, DIM, &cols)
    }

    pub fn kernel_image_profile(&self, x: &Octonion) -> Result<KernelImageProfile> {
        if x.is_zero() {
            return Err(Error::ZeroOctonion);
        }
        let l = self.left_mult_matrix(x);
        let image = l.column_space_basis();
        let kernel = l.kernel_basis();
        let pure: Vec<Vector> = self
            .pure_basis
            .vectors
            .iter()
            .map(|v| v.coords.clone())
            .collect();
        let f = self.field;
        Ok(KernelImageProfile {
            dim_image: image.len(),
            dim_kernel: kernel.len(),
            dim_image_meet_pure: intersection_dim(f, DIM, &image, &pure),
            dim_kernel_meet_pure: intersection_dim(f, DIM, &kernel, &pure),
            image_totally_isotropic: self.totally_isotropic(&image),
            kernel_totally_isotropic: self.totally_isotropic(&kernel),
        })
    }

    /// Whether the polarization vanishes identically on `span(vectors)`.
    pub fn totally_isotropic(&self, vectors: &[Vector]) -> bool {
        vectors.iter().all(|u| {
            let gu = self.norm_gram.mul_vec(u);
            vectors
                .iter()
                .all(|v| matrix::dot(&gu, v, self.field).is_zero())
        })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Octonion {
        Octonion {
            coords: (0..DIM).map(|_| self.field.random(rng)).collect(),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Octonion {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn random_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> Octonion {
        let coords: Vector = (0..PURE_DIM).map(|_| self.field.random(rng)).collect();
        self.pure_from_coords(&coords)
    }

    pub fn random_nonzero_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> Octonion {
        loop {
            let x = self.random_pure(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

fn is_positive_definite(gram: &Matrix) -> bool {
    (1..=gram.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        let minor = gram.submatrix(&idx, &idx).determinant().expect("square");
        minor
            .as_rational()
            .is_some_and(|r| num_traits::Signed::is_positive(&r))
    })
}

/// A construction in its own coordinates.
struct NativeModel {
    field: FieldSpec,
    kind: NativeKind,
    gram: Matrix,
    identity: Vector,
    labels: Vec<String>,
}

enum NativeKind {
    Zorn,
    Fano,
    Doubling([FieldElement; 3]),
}

impl NativeModel {
    fn new(field: FieldSpec, construction: &Construction) -> Result<Self> {
        let labels = |names: &[&str]| names.iter().map(|s| s.to_string()).collect();
        match construction {
            Construction::SplitZorn => {
                // Coordinates (α, v1, v2, v3, w1, w2, w3, β).
                let mut gram = Matrix::zeros(field, DIM, DIM);
                gram.set(0, 7, field.one());
                gram.set(7, 0, field.one());
                for k in 0..3 {
                    gram.set(1 + k, 4 + k, -field.one());
                    gram.set(4 + k, 1 + k, -field.one());
                }
                let mut identity = vec![field.zero(); DIM];
                identity[0] = field.one();
                identity[7] = field.one();
                Ok(Self {
                    field,
                    kind: NativeKind::Zorn,
                    gram,
                    identity,
                    labels: labels(&["e", "v1", "v2", "v3", "w1", "w2", "w3", "h"]),
                })
            }
            Construction::DivisionFano => Ok(Self {
                field,
                kind: NativeKind::Fano,
                gram: Matrix::identity(field, DIM).scale(&field.from_i64(2)),
                identity: matrix::unit_vector(field, DIM, 0),
                labels: labels(&["e", "e1", "e2", "e3", "e4", "e5", "e6", "e7"]),
            }),
            Construction::CayleyDickson(gammas) => {
                if let Some(g) = gammas.iter().find(|g| g.field() != field) {
                    return Err(Error::FieldMismatch(
                        field.to_string(),
                        g.field().to_string(),
                    ));
                }
                if gammas.iter().any(FieldElement::is_zero) {
                    return Err(Error::AlgebraConstruction(
                        "Cayley-Dickson parameters must be nonzero".into(),
                    ));
                }
                // N(b_i) is the product of -γ over the doublings selected by
                // the bits of i (bit 0 ↔ γ1, bit 2 ↔ γ3).
                let two = field.from_i64(2);
                let gram = Matrix::from_fn(field, DIM, DIM, |i, j| {
                    if i != j {
                        return field.zero();
                    }
                    let mut n = two.clone();
                    for (bit, g) in gammas.iter().enumerate() {
                        if i >> bit & 1 == 1 {
                            n = -(&n * g);
                        }
                    }
                    n
                });
                Ok(Self {
                    field,
                    kind: NativeKind::Doubling(gammas.clone()),
                    gram,
                    identity: matrix::unit_vector(field, DIM, 0),
                    labels: labels(&["e", "u1", "u2", "u3", "u4", "u5", "u6", "u7"]),
                })
            }
        }
    }

    fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vector {
        match &self.kind {
            NativeKind::Zorn => zorn_mul(x, y),
            NativeKind::Fano => fano_mul(self.field, x, y),
            NativeKind::Doubling(gammas) => doubling_mul(gammas, x, y),
        }
    }
}

fn cross(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// `[[α1, v1], [w1, β1]] · [[α2, v2], [w2, β2]] =
///  [[α1α2 + v1·w2, α1v2 + β2v1 - w1×w2], [α2w1 + β1w2 + v1×v2, β1β2 + w1·v2]]`.
fn zorn_mul(x: &[FieldElement], y: &[FieldElement]) -> Vector {
    let f = x[0].field();
    let (a1, v1, w1, b1) = (&x[0], &x[1..4], &x[4..7], &x[7]);
    let (a2, v2, w2, b2) = (&y[0], &y[1..4], &y[4..7], &y[7]);
    let ww = cross(w1, w2);
    let vv = cross(v1, v2);
    let mut out = Vec::with_capacity(DIM);
    out.push(a1 * a2 + matrix::dot(v1, w2, f));
    for k in 0..3 {
        out.push(a1 * &v2[k] + b2 * &v1[k] - &ww[k]);
    }
    for k in 0..3 {
        out.push(a2 * &w1[k] + b1 * &w2[k] + &vv[k]);
    }
    out.push(b1 * b2 + matrix::dot(w1, v2, f));
    out
}

/// `(sign, index)` of `e_i e_j` in the Fano table.
fn fano_basis_product(i: usize, j: usize) -> (i64, usize) {
    if i == 0 {
        return (1, j);
    }
    if j == 0 {
        return (1, i);
    }
    if i == j {
        return (-1, 0);
    }
    for t in 1..=7 {
        let line = [t, t % 7 + 1, (t + 2) % 7 + 1];
        for r in 0..3 {
            let (a, b, c) = (line[r], line[(r + 1) % 3], line[(r + 2) % 3]);
            if (i, j) == (a, b) {
                return (1, c);
            }
            if (i, j) == (b, a) {
                return (-1, c);
            }
        }
    }
    unreachable!("every pair of distinct imaginary units lies on a Fano line")
}

fn fano_mul(field: FieldSpec, x: &[FieldElement], y: &[FieldElement]) -> Vector {
    let mut out = vec![field.zero(); DIM];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            if xi.is_zero() || yj.is_zero() {
                continue;
            }
            let (s, k) = fano_basis_product(i, j);
            let c = xi * yj;
            out[k] += if s < 0 { -c } else { c };
        }
    }
    out
}

fn doubling_conj(x: &[FieldElement]) -> Vector {
    if x.len() == 1 {
        return x.to_vec();
    }
    let h = x.len() / 2;
    let mut out = doubling_conj(&x[..h]);
    out.extend(x[h..].iter().map(|c| -c));
    out
}

/// `(a, b)(c, d) = (ac + γ d b̄, ā d + c b)`, recursively.
fn doubling_mul(gammas: &[FieldElement], x: &[FieldElement], y: &[FieldElement]) -> Vector {
    if x.len() == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = x.len() / 2;
    let level = h.trailing_zeros() as usize;
    let g = &gammas[level];
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let first = matrix::vec_add(
        &doubling_mul(gammas, a, c),
        &matrix::vec_scale(g, &doubling_mul(gammas, d, &doubling_conj(b))),
    );
    let second = matrix::vec_add(
        &doubling_mul(gammas, &doubling_conj(a), d),
        &doubling_mul(gammas, c, b),
    );
    let mut out = first;
    out.extend(second);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn f3() -> FieldSpec {
        FieldSpec::prime(3).unwrap()
    }

    #[test]
    fn all_constructions_validate() {
        for field in [
            q(),
            f3(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(7).unwrap(),
        ] {
            for spec in [
                "split-zorn",
                "division-fano",
                "cayley-dickson:-1,-1,-1",
                "cayley-dickson:1,-1,2",
            ] {
                let a = OctonionAlgebra::from_spec(field, spec);
                assert!(a.is_ok(), "{spec} over {field}: {:?}", a.err());
            }
        }
    }

    #[test]
    fn fano_table_examples() {
        let a = OctonionAlgebra::build(q(), Construction::DivisionFano).unwrap();
        assert_eq!(a.mul(&a.basis(1), &a.basis(2)), a.basis(4));
        assert_eq!(a.mul(&a.basis(2), &a.basis(1)), -&a.basis(4));
        assert_eq!(a.mul(&a.basis(1), &a.basis(1)), -a.identity());
        let x = a.random(&mut rand::thread_rng());
        assert_eq!(&a.mul(a.identity(), &x), &x);
        assert_eq!(&a.mul(&x, a.identity()), &x);
    }

    #[test]
    fn norms_and_polarization() {
        let a = OctonionAlgebra::build(q(), Construction::DivisionFano).unwrap();
        assert_eq!(a.polarize(a.identity(), a.identity()), q().from_i64(2));
        assert_eq!(a.norm(&(&a.basis(1) + &a.basis(2))), q().from_i64(2));
        assert!(a.is_division());

        let z = OctonionAlgebra::build(f3(), Construction::SplitZorn).unwrap();
        let f = f3();
        let x = z
            .zorn(
                f.zero(),
                [f.one(), f.from_i64(2), f.one()],
                [f.zero(), f.zero(), f.zero()],
                f.zero(),
            )
            .unwrap();
        assert!(z.norm(&x).is_zero());
        let e11 = z
            .zorn(
                f.one(),
                [f.zero(), f.zero(), f.zero()],
                [f.zero(), f.zero(), f.zero()],
                f.zero(),
            )
            .unwrap();
        assert!(z.norm(&e11).is_zero());
        assert!(!z.is_division());
        assert_eq!(
            z.zorn(
                f.one(),
                [f.zero(), f.zero(), f.zero()],
                [f.zero(), f.zero(), f.zero()],
                f.one()
            )
            .unwrap(),
            *z.identity()
        );
    }

    #[test]
    fn zorn_norm_formula() {
        let f = FieldSpec::prime(5).unwrap();
        let z = OctonionAlgebra::build(f, Construction::SplitZorn).unwrap();
        let mut rng = rand::thread_rng();
        for _ in 0..50 {
            let c: Vec<FieldElement> = (0..8).map(|_| f.random(&mut rng)).collect();
            let x = z
                .zorn(
                    c[0].clone(),
                    [c[1].clone(), c[2].clone(), c[3].clone()],
                    [c[4].clone(), c[5].clone(), c[6].clone()],
                    c[7].clone(),
                )
                .unwrap();
            let expected = &c[0] * &c[7] - matrix::dot(&c[1..4], &c[4..7], f);
            assert_eq!(z.norm(&x), expected);
            assert_eq!(z.to_native(&x), c);
        }
    }

    #[test]
    fn cayley_dickson_minus_ones_is_sum_of_squares() {
        let a = OctonionAlgebra::from_spec(q(), "cayley-dickson:-1,-1,-1").unwrap();
        for i in 0..DIM {
            for j in 0..DIM {
                let expect = if i == j { 2 } else { 0 };
                assert_eq!(a.norm_gram().get(i, j), &q().from_i64(expect));
            }
        }
        assert!(a.is_division());
        let b = OctonionAlgebra::from_spec(q(), "cayley-dickson:1,-1,-1").unwrap();
        assert!(!b.is_division());
    }

    #[test]
    fn cayley_dickson_rejects_zero_parameter() {
        let err = OctonionAlgebra::from_spec(q(), "cayley-dickson:-1,0,-1").unwrap_err();
        assert!(matches!(err, Error::AlgebraConstruction(_)));
        assert!(OctonionAlgebra::from_spec(q(), "cayley-dickson:-1,-1").is_err());
        assert!(OctonionAlgebra::from_spec(q(), "sedenion").is_err());
    }

    #[test]
    fn conjugate_and_inverse() {
        let a = OctonionAlgebra::build(q(), Construction::DivisionFano).unwrap();
        assert_eq!(&a.conjugate(a.identity()), a.identity());
        assert_eq!(a.conjugate(&a.basis(3)), -&a.basis(3));
        let two_e1 = a.basis(1).scale(&q().from_i64(2));
        let expected = a.basis(1).scale(&q().from_ratio(-1, 2).unwrap());
        assert_eq!(a.inverse(&two_e1).unwrap(), expected);
        assert_eq!(&a.mul(&two_e1, &expected), a.identity());
        let z = OctonionAlgebra::build(f3(), Construction::SplitZorn).unwrap();
        let f = f3();
        let iso = z
            .zorn(
                f.one(),
                [f.zero(), f.zero(), f.zero()],
                [f.zero(), f.zero(), f.zero()],
                f.zero(),
            )
            .unwrap();
        assert_eq!(z.inverse(&iso), Err(Error::NotInvertible));
    }

    #[test]
    fn pure_part_examples() {
        let a = OctonionAlgebra::build(q(), Construction::DivisionFano).unwrap();
        assert!(a.pure_part(a.identity()).is_zero());
        assert_eq!(a.pure_part(&(a.identity() + &a.basis(1))), a.basis(1));
        let x = a.random(&mut rand::thread_rng());
        let p = a.pure_part(&x);
        assert!(a.is_pure(&p));
        assert_eq!(a.pure_part(&p), p);
        let pb = a.pure_basis();
        assert_eq!(
            pb.projection.mul(&pb.embedding),
            Matrix::identity(q(), PURE_DIM)
        );
        assert!(pb.vectors.iter().all(|v| a.is_pure(v)));
    }

    #[test]
    fn left_multiplication_ranks() {
        let a = OctonionAlgebra::build(q(), Construction::DivisionFano).unwrap();
        assert_eq!(a.left_mult_matrix(a.identity()), Matrix::identity(q(), DIM));
        assert_eq!(a.left_mult_matrix(&a.basis(5)).rank(), DIM);
        let z = OctonionAlgebra::build(f3(), Construction::SplitZorn).unwrap();
        let f = f3();
        let iso = z
            .zorn(
                f.one(),
                [f.zero(), f.zero(), f.zero()],
                [f.zero(), f.zero(), f.zero()],
                f.zero(),
            )
            .unwrap();
        assert_eq!(z.left_mult_matrix(&iso).rank(), 4);
        assert_eq!(z.left_mult_matrix(&iso).kernel_basis().len(), 4);
    }

    #[test]
    fn kernel_image_profiles() {
        let f = f3();
        let z = OctonionAlgebra::build(f, Construction::SplitZorn).unwrap();
        let iso = z
            .zorn(
                f.one(),
                [f.zero(), f.zero(), f.zero()],
                [f.zero(), f.zero(), f.zero()],
                f.zero(),
            )
            .unwrap();
        let p = z.kernel_image_profile(&iso).unwrap();
        assert_eq!(p.dims(), (4, 4, 3, 3));
        assert!(p.image_totally_isotropic && p.kernel_totally_isotropic);
        assert_eq!(
            z.kernel_image_profile(z.identity()).unwrap().dims(),
            (8, 0, 7, 0)
        );
        assert_eq!(z.kernel_image_profile(&z.zero()), Err(Error::ZeroOctonion));
    }

    #[test]
    fn checked_mul_rejects_foreign_elements() {
        let a = OctonionAlgebra::build(q(), Construction::DivisionFano).unwrap();
        let b = OctonionAlgebra::build(f3(), Construction::DivisionFano).unwrap();
        assert_eq!(
            a.checked_mul(&a.basis(1), &b.basis(2)),
            Err(Error::AlgebraMismatch)
        );
        assert!(a.element(vec![q().one(); 7]).is_err());
    }

    #[test]
    fn perturbed_table_fails_validation() {
        let z = OctonionAlgebra::build(f3(), Construction::SplitZorn).unwrap();
        let bad = z.with_perturbed_constant(1, 2, 3, &f3().one());
        assert!(!bad.validate().is_empty());
    }
}
