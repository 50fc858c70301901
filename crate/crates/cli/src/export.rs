//! JSON export of generator matrices and of `ker ω`.
//!
//! Scalars are written as decimal strings, fractions as `"num/den"`;
//! matrices are lists of rows.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use octo_rank_core::exterior::wedge_pairs;
use octo_rank_core::{
    AltForm, Duality, FieldSpec, FormFamily, Matrix, OctonionAlgebra, OmegaMap, Space,
};
use serde::{Deserialize, Serialize};

pub const BASIS_FORMAT: &str = "octo-rank/basis-matrices/v1";
pub const KERNEL_FORMAT: &str = "octo-rank/kernel/v1";

pub fn matrix_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

pub fn matrix_from_strings(field: FieldSpec, rows: &[Vec<String>]) -> Result<Matrix> {
    let parsed = rows
        .iter()
        .map(|row| row.iter().map(|s| field.parse_element(s)).collect())
        .collect::<octo_rank_core::Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(field, parsed)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisExport {
    pub format: String,
    pub field: String,
    pub algebra: String,
    pub space: String,
    /// Labels of the basis of the space the forms live on.
    pub basis_labels: Vec<String>,
    /// Labels of the pure elements `b_1..b_7` generating the family.
    pub generator_labels: Vec<String>,
    pub matrices: Vec<Vec<Vec<String>>>,
}

impl BasisExport {
    pub fn new(algebra: &OctonionAlgebra, family: &FormFamily) -> Self {
        let labels = algebra.labels();
        let basis_labels = match family.space {
            Space::C => labels.to_vec(),
            Space::C0 => labels[1..].to_vec(),
        };
        Self {
            format: BASIS_FORMAT.into(),
            field: algebra.field().to_string(),
            algebra: algebra.construction().to_string(),
            space: family.space.to_string(),
            basis_labels,
            generator_labels: labels[1..].to_vec(),
            matrices: family
                .generators
                .iter()
                .map(|g| matrix_to_strings(&g.matrix))
                .collect(),
        }
    }

    /// Parses the matrices back into exact forms, checking the header.
    pub fn forms(&self) -> Result<Vec<AltForm>> {
        ensure!(
            self.format == BASIS_FORMAT,
            "unexpected format {:?}",
            self.format
        );
        let field: FieldSpec = self.field.parse()?;
        let space: Space = self.space.parse()?;
        ensure!(
            self.basis_labels.len() == space.dim(),
            "expected {} basis labels, found {}",
            space.dim(),
            self.basis_labels.len()
        );
        self.matrices
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let m = matrix_from_strings(field, rows).with_context(|| format!("matrix {i}"))?;
                Ok(AltForm::new(m, space)?)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntry {
    /// Coordinates on `e_i ∧ e_j`, `i < j`, in `wedge_pairs` order.
    pub bivector: Vec<String>,
    /// The same element read as a form on the space through the
    /// polarization.
    pub altform: Vec<Vec<String>>,
    pub epsilon_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelExport {
    pub format: String,
    pub field: String,
    pub algebra: String,
    pub space: String,
    pub wedge_basis: Vec<[usize; 2]>,
    pub omega_rank: usize,
    pub kernel_dim: usize,
    pub kernel: Vec<KernelEntry>,
    /// `rank(ε_z)` histogram over the exported basis.
    pub rank_audit: BTreeMap<usize, usize>,
}

impl KernelExport {
    pub fn new(algebra: &OctonionAlgebra, family: &FormFamily) -> Result<Self> {
        let omega = OmegaMap::new(family)?;
        let duality = Duality::new(algebra, family.space)?;
        let mut rank_audit = BTreeMap::new();
        let kernel = omega
            .kernel
            .iter()
            .map(|z| {
                let form = duality.bivector_to_altform(z)?;
                let epsilon_rank = z.epsilon_rank();
                *rank_audit.entry(epsilon_rank).or_insert(0) += 1;
                Ok(KernelEntry {
                    bivector: z.coords.iter().map(ToString::to_string).collect(),
                    altform: matrix_to_strings(&form.matrix),
                    epsilon_rank,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            format: KERNEL_FORMAT.into(),
            field: algebra.field().to_string(),
            algebra: algebra.construction().to_string(),
            space: family.space.to_string(),
            wedge_basis: wedge_pairs(family.space.dim())
                .into_iter()
                .map(|(i, j)| [i, j])
                .collect(),
            omega_rank: omega.rank(),
            kernel_dim: omega.kernel.len(),
            kernel,
            rank_audit,
        })
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Re-imports an export and compares it with a freshly built family.
pub fn check_round_trip(export: &BasisExport, family: &FormFamily) -> Result<()> {
    let forms = export.forms()?;
    if forms != family.generators {
        bail!("re-imported matrices differ from the generators");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_entries_survive_a_round_trip() {
        let a =
            OctonionAlgebra::from_spec(FieldSpec::rationals(), "cayley-dickson:1/2,-3,5").unwrap();
        for space in [Space::C, Space::C0] {
            let fam = FormFamily::new(&a, space).unwrap();
            let export = BasisExport::new(&a, &fam);
            let text = serde_json::to_string(&export).unwrap();
            let back: BasisExport = serde_json::from_str(&text).unwrap();
            check_round_trip(&back, &fam).unwrap();
        }
    }

    #[test]
    fn kernel_export_dimensions() {
        let a = OctonionAlgebra::from_spec(FieldSpec::rationals(), "division-fano").unwrap();
        let fam = FormFamily::new(&a, Space::C0).unwrap();
        let k = KernelExport::new(&a, &fam).unwrap();
        assert_eq!(
            (k.omega_rank, k.kernel_dim, k.wedge_basis.len()),
            (7, 14, 21)
        );
        assert!(k.rank_audit.keys().all(|r| *r == 4 || *r == 6));
    }
}
