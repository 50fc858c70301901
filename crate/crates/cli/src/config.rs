//! Run configuration, loaded from JSON and overlaid with command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use octo_rank_core::{FieldSpec, OctonionAlgebra, Space};
use serde::{Deserialize, Serialize};

/// Random-sample counts for the audits. The defaults are the acceptance
/// sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleCounts {
    /// Random elements for the constant-rank check over a division algebra.
    pub random_elements: usize,
    /// Kernel elements and structural samples for the no-rank-2 certificate.
    pub kernel_samples: usize,
    /// Random `x` per automorphism in the covariance check.
    pub points_per_automorphism: usize,
    pub automorphisms: usize,
    pub derivations: usize,
    /// Random triples per derivation.
    pub triples: usize,
    /// Random pairs per algebra for the composition law.
    pub composition_pairs: usize,
    pub restriction_forms: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self {
            random_elements: 1000,
            kernel_samples: 1000,
            points_per_automorphism: 50,
            automorphisms: 20,
            derivations: 50,
            triples: 1000,
            composition_pairs: 10_000,
            restriction_forms: 1000,
        }
    }
}

impl SampleCounts {
    /// Sets every per-audit random-sample count to `n`, leaving the numbers of
    /// automorphisms and derivations alone.
    pub fn set_all(&mut self, n: usize) {
        self.random_elements = n;
        self.kernel_samples = n;
        self.points_per_automorphism = n;
        self.triples = n;
        self.composition_pairs = n;
        self.restriction_forms = n;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub field: String,
    pub algebra: String,
    pub space: String,
    pub seed: u64,
    pub samples: SampleCounts,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            field: "Q".into(),
            algebra: "division-fano".into(),
            space: "C0".into(),
            seed: 42,
            samples: SampleCounts::default(),
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("parsing run configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Parses every string field without building anything expensive.
    pub fn validate(&self) -> Result<()> {
        let field = self.field_spec()?;
        octo_rank_core::Construction::parse(&self.algebra, field)?;
        self.space()?;
        Ok(())
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        Ok(self.field.parse::<FieldSpec>()?)
    }

    pub fn space(&self) -> Result<Space> {
        Ok(self.space.parse::<Space>()?)
    }

    pub fn build_algebra(&self) -> Result<OctonionAlgebra> {
        let field = self.field_spec()?;
        OctonionAlgebra::from_spec(field, &self.algebra)
            .with_context(|| format!("building {} over {}", self.algebra, field))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg = RunConfig::from_json(r#"{"field": "Fp:5", "samples": {"triples": 7}}"#).unwrap();
        assert_eq!(cfg.field, "Fp:5");
        assert_eq!(cfg.samples.triples, 7);
        assert_eq!(cfg.samples.derivations, 50);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(RunConfig::from_json(r#"{"feild": "Q"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"samples": {"tripels": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"field": "Fp:2"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"algebra": "quaternion"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"space": "C1"}"#).is_err());
    }
}
