//! Argument parsing and the subcommands.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use octo_rank_core::census::{rank_census, CensusMode};
use octo_rank_core::symmetry::invariance_audit;
use octo_rank_core::{Error as CoreError, FormFamily, OmegaMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::export::{check_round_trip, read_json, write_json, BasisExport, KernelExport};
use crate::verify::{self, derivation_audit, random_automorphisms, VerifyConfig, CRITERIA};

#[derive(Debug, Parser)]
#[command(
    name = "octo-rank",
    version,
    about = "Exact rank computations for octonion form families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Flags override `--config`, which
/// overrides the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `Q` or `Fp:<odd prime>`.
    #[arg(long)]
    pub field: Option<String>,
    /// `split-zorn`, `division-fano` or `cayley-dickson:<g1>,<g2>,<g3>`.
    #[arg(long)]
    pub algebra: Option<String>,
    /// `C0` (forms f_x) or `C` (forms F_x).
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sets every random-sample count.
    #[arg(long)]
    pub samples: Option<usize>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(f) = &self.field {
            cfg.field = f.clone();
        }
        if let Some(a) = &self.algebra {
            cfg.algebra = a.clone();
        }
        if let Some(s) = &self.space {
            cfg.space = s.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(n) = self.samples {
            cfg.samples.set_all(n);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Projective,
    Affine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export the seven generator matrices of the family.
    BasisMatrices(CommonArgs),
    /// Exhaustive rank census over a small prime field.
    Census {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "projective")]
        mode: ModeArg,
    },
    /// Export a basis of ker ω with the corresponding forms.
    Kernel(CommonArgs),
    /// Check invariance under random automorphisms and derivations.
    Audit {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        autos: Option<usize>,
        #[arg(long)]
        derivs: Option<usize>,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict to these claim ids (e.g. `AC-01,AC-06`).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

/// Runs a parsed command, writing human-readable output to `out`. Returns
/// the process exit code (0 on success, 1 when a check fails).
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::BasisMatrices(common) => basis_matrices(&common.resolve()?, out),
        Command::Census { common, mode } => census(&common.resolve()?, mode, out),
        Command::Kernel(common) => kernel(&common.resolve()?, out),
        Command::Audit {
            common,
            autos,
            derivs,
        } => audit(&common.resolve()?, autos, derivs, out),
        Command::VerifyAll { common, only } => verify_all(&common.resolve()?, &only, out),
    }
}

fn basis_matrices(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let a = cfg.build_algebra()?;
    let family = FormFamily::new(&a, cfg.space()?)?;
    let export = BasisExport::new(&a, &family);
    match &cfg.out {
        Some(path) => {
            write_json(path, &export)?;
            let back: BasisExport = read_json(path)?;
            check_round_trip(&back, &family)
                .with_context(|| format!("round trip through {}", path.display()))?;
            let ranks: Vec<usize> = family.generators.iter().map(|g| g.rank()).collect();
            writeln!(
                out,
                "wrote {} matrices over {} to {} (ranks {:?}, round trip exact)",
                export.matrices.len(),
                export.field,
                path.display(),
                ranks
            )?;
        }
        None => writeln!(out, "{}", serde_json::to_string_pretty(&export)?)?,
    }
    Ok(0)
}

fn census(cfg: &RunConfig, mode: ModeArg, out: &mut dyn Write) -> Result<i32> {
    let a = cfg.build_algebra()?;
    let family = FormFamily::new(&a, cfg.space()?)?;
    let mode = match mode {
        ModeArg::Projective => CensusMode::Projective,
        ModeArg::Affine => CensusMode::Affine,
    };
    let report = match rank_census(&a, &family, mode) {
        Ok(r) => r,
        Err(CoreError::CensusInfeasible(why)) => {
            writeln!(out, "SKIP census: {why}")?;
            return Ok(0);
        }
        Err(e) => return Err(e.into()),
    };
    let t = &report.tally;
    let by_rank: Vec<(usize, u64)> = t
        .count_by_rank
        .keys()
        .map(|&r| (r, report.affine_rank_count(r)))
        .collect();
    let data = serde_json::json!({
        "field": cfg.field,
        "algebra": cfg.algebra,
        "space": cfg.space,
        "mode": format!("{mode:?}").to_lowercase(),
        "points": t.points,
        "rank_counts": t.count_by_rank,
        "affine_rank_counts": by_rank.iter().map(|(r, n)| (r.to_string(), n)).collect::<std::collections::BTreeMap<_, _>>(),
        "isotropic": t.isotropic,
        "generic_square": t.generic_square,
        "generic_nonsquare": t.generic_nonsquare,
        "rule_violations": t.rule_violations,
        "non_alternating": t.non_alternating,
        "first_violation": t.first_violation,
    });
    let tag = if report.is_clean() { "PASS" } else { "FAIL" };
    writeln!(
        out,
        "{tag} census {} {} {}: {} points, affine rank counts {:?}, {} square classes met, {} violations",
        cfg.field,
        cfg.algebra,
        cfg.space,
        t.points,
        by_rank,
        report.square_classes_met(),
        t.rule_violations + t.non_alternating
    )?;
    if let Some(path) = &cfg.out {
        write_json(path, &data)?;
    }
    Ok(if report.is_clean() { 0 } else { 1 })
}

fn kernel(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let a = cfg.build_algebra()?;
    let family = FormFamily::new(&a, cfg.space()?)?;
    let export = KernelExport::new(&a, &family)?;
    match &cfg.out {
        Some(path) => {
            write_json(path, &export)?;
            writeln!(
                out,
                "omega rank {}, kernel dimension {}, epsilon ranks {:?}; wrote {}",
                export.omega_rank,
                export.kernel_dim,
                export.rank_audit,
                path.display()
            )?;
        }
        None => writeln!(out, "{}", serde_json::to_string_pretty(&export)?)?,
    }
    Ok(0)
}

fn audit(
    cfg: &RunConfig,
    autos: Option<usize>,
    derivs: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    let a = cfg.build_algebra()?;
    let space = cfg.space()?;
    let autos = autos.unwrap_or(cfg.samples.automorphisms);
    let derivs = derivs.unwrap_or(cfg.samples.derivations);
    let family = FormFamily::new(&a, space)?;
    let omega = OmegaMap::new(&family)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let maps = random_automorphisms(&a, autos, &mut rng)?;
    let auto_report = invariance_audit(
        &a,
        &family,
        &omega,
        &maps,
        cfg.samples.points_per_automorphism,
        &mut rng,
    )?;
    let deriv_report = derivation_audit(&a, space, derivs, cfg.samples.triples, cfg.seed, 0)?;
    let mut ok = true;
    for (name, r) in [
        ("automorphisms", &auto_report),
        ("derivations", &deriv_report),
    ] {
        let tag = if r.passed() { "PASS" } else { "FAIL" };
        ok &= r.passed();
        writeln!(
            out,
            "{tag} {name} over {} {} {}: {r:?}",
            cfg.field, cfg.algebra, cfg.space
        )?;
    }
    if let Some(path) = &cfg.out {
        let data = serde_json::json!({
            "automorphisms": format!("{auto_report:?}"),
            "derivations": format!("{deriv_report:?}"),
            "passed": ok,
        });
        write_json(path, &data)?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn verify_all(cfg: &RunConfig, only: &[String], out: &mut dyn Write) -> Result<i32> {
    let vcfg = VerifyConfig::from(cfg);
    let indices: Vec<usize> = if only.is_empty() {
        (0..CRITERIA.len()).collect()
    } else {
        only.iter()
            .map(|id| match CRITERIA.iter().position(|c| c.id == id) {
                Some(i) => Ok(i),
                None => bail!("unknown claim id {id:?}"),
            })
            .collect::<Result<_>>()?
    };
    let report = verify::run_selected(&vcfg, &indices);
    write!(out, "{}", report.to_text())?;
    if let Some(path) = &cfg.out {
        write_json(path, &report)?;
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}
