//! Experiment configuration: TOML-backed sections with figure defaults, a
//! canonical digest for provenance, and the LDPC profile file format.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use gmrd_core::codec::{CodecConfig, LdpcProfile};
use gmrd_core::{GaussianMixtureSpec, MeanLayout};

/// Grid over one budget axis.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl GridSection {
    pub fn new(start: f64, stop: f64, points: usize) -> Self {
        GridSection { start, stop, points, spacing: Spacing::Linear }
    }

    pub fn log(start: f64, stop: f64, points: usize) -> Self {
        GridSection { start, stop, points, spacing: Spacing::Log }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            bail!("grid needs at least one point");
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            bail!("grid endpoints must be finite with start <= stop");
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            bail!("log spacing requires positive endpoints");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => {
                        (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// Source description; resolves to a validated [`GaussianMixtureSpec`].
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SourceSection {
    /// Two agents, ternary labels, weights (0.5, 0.2, 0.3), K = diag(0.75, 0.5).
    ExampleOne,
    /// Two agents, binary labels at ±1, K = sigma2·I.
    SymmetricBinary { sigma2: f64 },
    /// Fully explicit source.
    Custom {
        agents: usize,
        alphabet: usize,
        weights: Vec<f64>,
        /// `L` entries (diagonal) or `L*L` entries (full, row-major).
        covariance: Vec<f64>,
        mean_layout: MeanLayoutSection,
    },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "layout", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeanLayoutSection {
    UnitLadder,
    CenteredPm1,
    Explicit { means: Vec<Vec<f64>> },
}

impl SourceSection {
    pub fn resolve(&self) -> Result<GaussianMixtureSpec> {
        match self {
            SourceSection::ExampleOne => Ok(GaussianMixtureSpec::example_one()),
            SourceSection::SymmetricBinary { sigma2 } => {
                GaussianMixtureSpec::symmetric_binary(*sigma2)
                    .map_err(|e| anyhow::anyhow!("invalid source: {e}"))
            }
            SourceSection::Custom { agents, alphabet, weights, covariance, mean_layout } => {
                let layout = match mean_layout {
                    MeanLayoutSection::UnitLadder => MeanLayout::UnitLadder,
                    MeanLayoutSection::CenteredPm1 => MeanLayout::CenteredPm1,
                    MeanLayoutSection::Explicit { means } => MeanLayout::Explicit(means.clone()),
                };
                GaussianMixtureSpec::new(
                    *agents,
                    *alphabet,
                    weights.clone(),
                    layout,
                    covariance.clone(),
                )
                .map_err(|e| anyhow::anyhow!("invalid source: {e}"))
            }
        }
    }
}

/// Codec knobs, mirroring the core pipeline configuration.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct CodecSection {
    pub q: u32,
    pub step: f64,
    pub np_threshold: f64,
    pub sw_rate_margin: f64,
    pub bp_max_iters: usize,
    pub k: usize,
    pub trials: usize,
    pub ldpc: LdpcSection,
}

impl Default for CodecSection {
    fn default() -> Self {
        CodecSection {
            q: 3,
            step: 1.0,
            np_threshold: 1.0,
            sw_rate_margin: 0.15,
            bp_max_iters: 60,
            k: 8192,
            trials: 100,
            ldpc: LdpcSection::default(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct LdpcSection {
    /// Regular column weight, used unless `profile_file` is given.
    pub col_weight: usize,
    /// Optional path to a degree-profile file (see module docs).
    pub profile_file: Option<String>,
}

impl Default for LdpcSection {
    fn default() -> Self {
        LdpcSection { col_weight: 3, profile_file: None }
    }
}

impl LdpcSection {
    pub fn resolve(&self) -> Result<LdpcProfile> {
        match &self.profile_file {
            Some(path) => parse_profile_file(Path::new(path)),
            None => Ok(LdpcProfile::Regular { col_weight: self.col_weight }),
        }
    }
}

impl CodecSection {
    pub fn resolve(&self, spec: GaussianMixtureSpec, master_seed: u64) -> Result<CodecConfig> {
        let cfg = CodecConfig {
            spec,
            q: self.q,
            step: self.step,
            np_threshold: self.np_threshold,
            sw_rate_margin: self.sw_rate_margin,
            ldpc_profile: self.ldpc.resolve()?,
            bp_max_iters: self.bp_max_iters,
            k: self.k,
            trials: self.trials,
            master_seed,
        };
        cfg.validate().map_err(|e| anyhow::anyhow!("invalid codec config: {e}"))?;
        Ok(cfg)
    }
}

/// Parse a degree-profile file: one line "column_weight row_weight"
/// (regular), or one "degree fraction" pair per line (irregular).
pub fn parse_profile_file(path: &Path) -> Result<LdpcProfile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading LDPC profile {}", path.display()))?;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            bail!("profile line must hold exactly two numbers: {line:?}");
        };
        let a: f64 = a.parse().with_context(|| format!("bad number in {line:?}"))?;
        let b: f64 = b.parse().with_context(|| format!("bad number in {line:?}"))?;
        pairs.push((a, b));
    }
    if pairs.is_empty() {
        bail!("empty LDPC profile file");
    }
    let is_regular = pairs.len() == 1
        && pairs[0].0.fract() == 0.0
        && pairs[0].1.fract() == 0.0
        && pairs[0].1 > 1.0;
    if is_regular {
        // "column_weight row_weight": the row weight follows from block
        // length and rate, so only the column weight is load-bearing
        return Ok(LdpcProfile::Regular { col_weight: pairs[0].0 as usize });
    }
    let mut profile = Vec::with_capacity(pairs.len());
    for (degree, fraction) in pairs {
        if degree.fract() != 0.0 || degree < 1.0 {
            bail!("irregular profile degree must be a positive integer, got {degree}");
        }
        if !(fraction > 0.0 && fraction <= 1.0) {
            bail!("irregular profile fraction must lie in (0, 1], got {fraction}");
        }
        profile.push((degree as usize, fraction));
    }
    let total: f64 = profile.iter().map(|&(_, f)| f).sum();
    if (total - 1.0).abs() > 1e-9 {
        bail!("irregular profile fractions must sum to 1, got {total}");
    }
    Ok(LdpcProfile::Irregular(profile))
}

/// One config covering every subcommand; unset sections fall back to the
/// figure defaults.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Source override; each subcommand has a canonical default source.
    pub source: Option<SourceSection>,
    pub codec: CodecSection,
    pub surface: SurfaceSection,
    pub contours: ContourSection,
    pub regions: RegionsSection,
    pub rd_sweep: RdSweepSection,
    pub alloc: AllocSection,
    pub snr_sweep: SnrSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 20_240_817,
            source: None,
            codec: CodecSection::default(),
            surface: SurfaceSection::default(),
            contours: ContourSection::default(),
            regions: RegionsSection::default(),
            rd_sweep: RdSweepSection::default(),
            alloc: AllocSection::default(),
            snr_sweep: SnrSection::default(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceSection {
    pub d_s: GridSection,
    /// Shared per-agent budget axis (D_X1 = D_X2 on the surface).
    pub d_x: GridSection,
}

impl Default for SurfaceSection {
    fn default() -> Self {
        SurfaceSection {
            d_s: GridSection::new(0.02, 1.48, 50),
            d_x: GridSection::new(0.02, 0.5, 50),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ContourSection {
    /// Fixed semantic budgets for the D_X1 sweeps.
    pub fixed_d_s: Vec<f64>,
    /// Fixed observation budgets for the D_S sweeps.
    pub fixed_d_x1: Vec<f64>,
    pub d_x1: GridSection,
    pub d_s: GridSection,
}

impl Default for ContourSection {
    fn default() -> Self {
        ContourSection {
            fixed_d_s: vec![0.02, 0.34, 0.66, 0.98, 1.30],
            fixed_d_x1: vec![0.02, 0.165, 0.310, 0.455, 0.600],
            d_x1: GridSection::new(0.02, 0.6, 200),
            // deliberately past H(omega) so the semantic plateau is visible
            d_s: GridSection::new(0.02, 2.2, 200),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RegionsSection {
    pub d_s: GridSection,
    /// Total observation budget, split across agents in proportion to the
    /// marginal variances.
    pub sum_d_x: GridSection,
}

impl Default for RegionsSection {
    fn default() -> Self {
        RegionsSection {
            d_s: GridSection::new(0.02, 2.2, 200),
            sum_d_x: GridSection::new(0.005, 1.25, 200),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RdSweepSection {
    pub sigma2: f64,
    /// Fixed semantic budget for the D_X sweep.
    pub fixed_d_s: f64,
    /// Fixed observation budget for the D_S sweep.
    pub fixed_d_x: f64,
    pub d_x: GridSection,
    pub d_s: GridSection,
    /// Simulate every n-th sweep point (0 disables simulation).
    pub sim_every: usize,
    pub sim_trials: usize,
    /// Relative slack when tuning the baseline to the scheme's measured
    /// semantic loss.
    pub baseline_ds_slack: f64,
}

impl Default for RdSweepSection {
    fn default() -> Self {
        RdSweepSection {
            sigma2: 0.25,
            fixed_d_s: 0.05,
            fixed_d_x: 0.2,
            d_x: GridSection::new(0.02, 0.24, 23),
            d_s: GridSection::new(0.02, 0.5, 25),
            sim_every: 4,
            sim_trials: 20,
            baseline_ds_slack: 0.05,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct AllocSection {
    pub sigma2: f64,
    pub d_s: f64,
    pub d_x: f64,
    pub curve_points: usize,
    pub sim_trials: usize,
}

impl Default for AllocSection {
    fn default() -> Self {
        AllocSection { sigma2: 0.25, d_s: 0.05, d_x: 0.2, curve_points: 33, sim_trials: 20 }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SnrSection {
    /// Inverse-noise grid for the bound-gap part (sigma^-2, linear scale).
    pub bounds_snr: GridSection,
    /// Inverse-noise grid for the fixed-rate simulation part.
    pub rate_snr: GridSection,
    pub d_s: f64,
    pub d_x: f64,
    pub target_rate: f64,
    pub rate_tolerance: f64,
    pub tune_trials: usize,
    pub sim_trials: usize,
}

impl Default for SnrSection {
    fn default() -> Self {
        SnrSection {
            bounds_snr: GridSection::log(4.2, 16.0, 10),
            rate_snr: GridSection::log(1.0, 8.0, 10),
            d_s: 0.05,
            d_x: 0.2,
            target_rate: 3.85,
            rate_tolerance: 0.02,
            tune_trials: 4,
            sim_trials: 20,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for grid in [
            &self.surface.d_s,
            &self.surface.d_x,
            &self.contours.d_x1,
            &self.contours.d_s,
            &self.regions.d_s,
            &self.regions.sum_d_x,
            &self.rd_sweep.d_x,
            &self.rd_sweep.d_s,
            &self.snr_sweep.bounds_snr,
            &self.snr_sweep.rate_snr,
        ] {
            grid.validate()?;
        }
        if self.contours.fixed_d_s.is_empty() || self.contours.fixed_d_x1.is_empty() {
            bail!("contour fixed-value lists must be non-empty");
        }
        if !(self.rd_sweep.sigma2 > 0.0) || !(self.alloc.sigma2 > 0.0) {
            bail!("sigma2 must be positive");
        }
        if self.alloc.curve_points < 2 {
            bail!("allocation curve needs at least two points");
        }
        if !(self.snr_sweep.target_rate > 0.0) || !(self.snr_sweep.rate_tolerance > 0.0) {
            bail!("target rate and tolerance must be positive");
        }
        Ok(())
    }

    /// First 16 hex characters of the SHA-256 of the canonical TOML
    /// serialization; embedded in every emitted CSV.
    pub fn digest(&self) -> String {
        let text = toml::to_string(self).expect("config serializes");
        let hash = Sha256::digest(text.as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
