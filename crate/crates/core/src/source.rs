//! Gaussian mixture source model: validation, entropy summaries, and seeded
//! sampling of (semantic label, L-agent observation) pairs.
//!
//! A hidden label `S` in `{1..M}` with weights `omega` selects the mean of a
//! Gaussian observation vector; every component shares the covariance `K_X`.

use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::linalg::Cholesky;
use crate::mathkit::{qfn, Bits, Probability};

const PD_TOL: f64 = 1e-12;

/// Structured validation findings for a spec.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecDiagnostic {
    NoAgents,
    AlphabetTooSmall(usize),
    WeightCountMismatch { expected: usize, got: usize },
    WeightsSumNotOne(f64),
    NonPositiveWeight(usize),
    CenteredLayoutRequiresBinary(usize),
    MeanMatrixShape { expected: (usize, usize) },
    CovarianceShape { agents: usize, len: usize },
    CovarianceNotSymmetric,
    CovarianceNotPositiveDefinite,
    AlphabetTooLarge(usize),
}

impl fmt::Display for SpecDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecDiagnostic::NoAgents => write!(f, "agent count must be positive"),
            SpecDiagnostic::AlphabetTooSmall(m) => {
                write!(f, "alphabet size {m} below the minimum of 2")
            }
            SpecDiagnostic::WeightCountMismatch { expected, got } => {
                write!(f, "expected {expected} weights, got {got}")
            }
            SpecDiagnostic::WeightsSumNotOne(s) => write!(f, "weights sum {s} != 1"),
            SpecDiagnostic::NonPositiveWeight(i) => {
                write!(f, "weight {i} is not strictly positive")
            }
            SpecDiagnostic::CenteredLayoutRequiresBinary(m) => {
                write!(f, "centered +-1 layout requires M = 2, got {m}")
            }
            SpecDiagnostic::MeanMatrixShape { expected } => {
                write!(f, "explicit means must be a {}x{} matrix", expected.0, expected.1)
            }
            SpecDiagnostic::CovarianceShape { agents, len } => {
                write!(f, "covariance needs {agents} (diagonal) or {} entries, got {len}", agents * agents)
            }
            SpecDiagnostic::CovarianceNotSymmetric => write!(f, "covariance not symmetric"),
            SpecDiagnostic::CovarianceNotPositiveDefinite => {
                write!(f, "covariance not positive definite")
            }
            SpecDiagnostic::AlphabetTooLarge(m) => {
                write!(f, "alphabet size {m} exceeds the supported 255")
            }
        }
    }
}

/// Errors from source-model operations.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceError {
    Invalid(Vec<SpecDiagnostic>),
    EmptyBlock,
    BinaryOnly(usize),
    DegenerateMeans,
    AgentOutOfRange(usize),
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceError::Invalid(diags) => {
                write!(f, "invalid spec:")?;
                for d in diags {
                    write!(f, " [{d}]")?;
                }
                Ok(())
            }
            SourceError::EmptyBlock => write!(f, "block length must be at least 1"),
            SourceError::BinaryOnly(m) => {
                write!(f, "operation requires a binary alphabet, got M = {m}")
            }
            SourceError::DegenerateMeans => {
                write!(f, "component means do not separate along the detection statistic")
            }
            SourceError::AgentOutOfRange(i) => write!(f, "agent index {i} out of range"),
        }
    }
}

impl core::error::Error for SourceError {}

/// Placement of the component means.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanLayout {
    /// Component `l` has mean `l * 1` (all agents), `l = 1..M`.
    UnitLadder,
    /// Means `-1` and `+1` (all agents); binary alphabet only.
    CenteredPm1,
    /// Arbitrary `M x L` mean matrix, row per component.
    Explicit(Vec<Vec<f64>>),
}

/// A validated Gaussian mixture source.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixtureSpec {
    l: usize,
    m: usize,
    weights: Vec<f64>,
    mean_layout: MeanLayout,
    k_x: Vec<f64>, // row-major L x L
}

impl GaussianMixtureSpec {
    /// Build and validate a spec. `covariance` may have `L` entries
    /// (diagonal) or `L*L` entries (full row-major matrix).
    pub fn new(
        agents: usize,
        alphabet: usize,
        weights: Vec<f64>,
        mean_layout: MeanLayout,
        covariance: Vec<f64>,
    ) -> Result<Self, SourceError> {
        let k_x = if covariance.len() == agents && agents * agents != agents {
            let mut full = alloc::vec![0.0; agents * agents];
            for i in 0..agents {
                full[i * agents + i] = covariance[i];
            }
            full
        } else {
            covariance
        };
        let spec = GaussianMixtureSpec { l: agents, m: alphabet, weights, mean_layout, k_x };
        match spec.validate() {
            Ok(()) => Ok(spec),
            Err(diags) => Err(SourceError::Invalid(diags)),
        }
    }

    /// The running toy example: two agents, ternary alphabet,
    /// `omega = (0.5, 0.2, 0.3)`, `K_X = diag(0.75, 0.5)`, unit-ladder means.
    pub fn example_one() -> Self {
        Self::new(
            2,
            3,
            alloc::vec![0.5, 0.2, 0.3],
            MeanLayout::UnitLadder,
            alloc::vec![0.75, 0.5],
        )
        .expect("static example is valid")
    }

    /// Symmetric binary two-agent source with means `+-1` and per-agent
    /// variance `sigma2`; the shape used by the simulation experiments.
    pub fn symmetric_binary(sigma2: f64) -> Result<Self, SourceError> {
        Self::new(
            2,
            2,
            alloc::vec![0.5, 0.5],
            MeanLayout::CenteredPm1,
            alloc::vec![sigma2, sigma2],
        )
    }

    /// Check every invariant, reporting all violations.
    pub fn validate(&self) -> Result<(), Vec<SpecDiagnostic>> {
        let mut diags = Vec::new();
        if self.l == 0 {
            diags.push(SpecDiagnostic::NoAgents);
        }
        if self.m < 2 {
            diags.push(SpecDiagnostic::AlphabetTooSmall(self.m));
        }
        if self.m > 255 {
            diags.push(SpecDiagnostic::AlphabetTooLarge(self.m));
        }
        if self.weights.len() != self.m {
            diags.push(SpecDiagnostic::WeightCountMismatch {
                expected: self.m,
                got: self.weights.len(),
            });
        } else {
            let sum: f64 = self.weights.iter().sum();
            if libm::fabs(sum - 1.0) > 1e-12 {
                diags.push(SpecDiagnostic::WeightsSumNotOne(sum));
            }
            for (i, &w) in self.weights.iter().enumerate() {
                if !(w > 0.0) {
                    diags.push(SpecDiagnostic::NonPositiveWeight(i));
                }
            }
        }
        match &self.mean_layout {
            MeanLayout::UnitLadder => {}
            MeanLayout::CenteredPm1 => {
                if self.m != 2 {
                    diags.push(SpecDiagnostic::CenteredLayoutRequiresBinary(self.m));
                }
            }
            MeanLayout::Explicit(rows) => {
                let ok = rows.len() == self.m && rows.iter().all(|r| r.len() == self.l);
                if !ok {
                    diags.push(SpecDiagnostic::MeanMatrixShape { expected: (self.m, self.l) });
                }
            }
        }
        if self.k_x.len() != self.l * self.l {
            diags.push(SpecDiagnostic::CovarianceShape { agents: self.l, len: self.k_x.len() });
        } else {
            let mut symmetric = true;
            for i in 0..self.l {
                for j in 0..i {
                    if libm::fabs(self.k_x[i * self.l + j] - self.k_x[j * self.l + i]) > 1e-12 {
                        symmetric = false;
                    }
                }
            }
            if !symmetric {
                diags.push(SpecDiagnostic::CovarianceNotSymmetric);
            } else if Cholesky::factor(&self.k_x, self.l, PD_TOL).is_none() {
                diags.push(SpecDiagnostic::CovarianceNotPositiveDefinite);
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }

    pub fn agents(&self) -> usize {
        self.l
    }

    pub fn alphabet(&self) -> usize {
        self.m
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mean_layout(&self) -> &MeanLayout {
        &self.mean_layout
    }

    /// Mean of agent `i`'s observation under component `label` (1-based).
    pub fn mean(&self, label: usize, agent: usize) -> f64 {
        debug_assert!((1..=self.m).contains(&label) && agent < self.l);
        match &self.mean_layout {
            MeanLayout::UnitLadder => label as f64,
            MeanLayout::CenteredPm1 => {
                if label == 1 {
                    -1.0
                } else {
                    1.0
                }
            }
            MeanLayout::Explicit(rows) => rows[label - 1][agent],
        }
    }

    /// Covariance entry `(i, j)`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.k_x[i * self.l + j]
    }

    /// Marginal standard deviation of agent `i`.
    pub fn marginal_sigma(&self, i: usize) -> f64 {
        libm::sqrt(self.k_x[i * self.l + i])
    }

    /// `tr K_X`.
    pub fn covariance_trace(&self) -> f64 {
        (0..self.l).map(|i| self.k_x[i * self.l + i]).sum()
    }

    /// `log2 det K_X`.
    pub fn covariance_log2_det(&self) -> f64 {
        crate::mathkit::nats_to_bits(self.covariance_cholesky().ln_det())
    }

    pub(crate) fn covariance_cholesky(&self) -> Cholesky {
        Cholesky::factor(&self.k_x, self.l, PD_TOL).expect("validated covariance")
    }

    /// Marginal single-agent spec for agent `i` (same labels and weights).
    pub fn marginal(&self, i: usize) -> Result<GaussianMixtureSpec, SourceError> {
        if i >= self.l {
            return Err(SourceError::AgentOutOfRange(i));
        }
        let means = (1..=self.m).map(|label| alloc::vec![self.mean(label, i)]).collect();
        GaussianMixtureSpec::new(
            1,
            self.m,
            self.weights.clone(),
            MeanLayout::Explicit(means),
            alloc::vec![self.k_x[i * self.l + i]],
        )
    }

    /// Half the distance between agent `i`'s two component means (M = 2).
    pub fn agent_half_gap(&self, i: usize) -> Result<f64, SourceError> {
        if self.m != 2 {
            return Err(SourceError::BinaryOnly(self.m));
        }
        if i >= self.l {
            return Err(SourceError::AgentOutOfRange(i));
        }
        Ok(0.5 * libm::fabs(self.mean(2, i) - self.mean(1, i)))
    }

    /// Half-width of the label decision regions along the averaged
    /// detection statistic `(1/L) sum_i X_i`: half the minimum gap between
    /// adjacent projected component means. Unit-ladder means give 1/2 and
    /// centered `+-1` means give 1.
    pub fn decision_half_width(&self) -> Result<f64, SourceError> {
        let mut proj: Vec<f64> = (1..=self.m)
            .map(|label| {
                (0..self.l).map(|i| self.mean(label, i)).sum::<f64>() / self.l as f64
            })
            .collect();
        proj.sort_by(|a, b| a.partial_cmp(b).expect("finite means"));
        let mut min_gap = f64::INFINITY;
        for w in proj.windows(2) {
            min_gap = min_gap.min(w[1] - w[0]);
        }
        if min_gap < 1e-9 {
            return Err(SourceError::DegenerateMeans);
        }
        Ok(0.5 * min_gap)
    }
}

/// A block of `k` label/observation pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock {
    labels: Vec<u8>,        // 1-based
    observations: Vec<f64>, // row-major k x L
    k: usize,
    l: usize,
    pub seed: u64,
}

impl SampleBlock {
    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn observation_row(&self, row: usize) -> &[f64] {
        &self.observations[row * self.l..(row + 1) * self.l]
    }

    /// Copy of agent `i`'s observation series.
    pub fn agent_series(&self, i: usize) -> Vec<f64> {
        (0..self.k).map(|row| self.observations[row * self.l + i]).collect()
    }
}

/// Shannon entropy of the label weights, `H(omega)` in bits.
pub fn semantic_entropy(spec: &GaussianMixtureSpec) -> Bits {
    let mut acc = 0.0;
    for &w in spec.weights() {
        if w > 0.0 {
            acc -= w * libm::log2(w);
        }
    }
    Bits::new(acc).expect("entropy of a validated weight vector")
}

/// Draw `k` i.i.d. (label, observation) pairs, deterministically in `seed`.
pub fn sample(spec: &GaussianMixtureSpec, k: usize, seed: u64) -> Result<SampleBlock, SourceError> {
    if k == 0 {
        return Err(SourceError::EmptyBlock);
    }
    spec.validate().map_err(SourceError::Invalid)?;
    let l = spec.agents();
    let chol = spec.covariance_cholesky();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut gauss = GaussGen::new();
    let mut labels = Vec::with_capacity(k);
    let mut observations = alloc::vec![0.0; k * l];
    let mut z = alloc::vec![0.0; l];
    let mut corr = alloc::vec![0.0; l];
    for row in 0..k {
        let u = u01(&mut rng);
        let mut label = spec.alphabet();
        let mut cdf = 0.0;
        for (idx, &w) in spec.weights().iter().enumerate() {
            cdf += w;
            if u < cdf {
                label = idx + 1;
                break;
            }
        }
        labels.push(label as u8);
        for zi in z.iter_mut() {
            *zi = gauss.next(&mut rng);
        }
        chol.correlate(&z, &mut corr);
        for i in 0..l {
            observations[row * l + i] = spec.mean(label, i) + corr[i];
        }
    }
    Ok(SampleBlock { labels, observations, k, l, seed })
}

/// Per-agent maximum-likelihood label-detection error probability
/// `Q(h_i / sigma_i)` for a binary alphabet, where `h_i` is agent `i`'s
/// half mean gap.
pub fn per_agent_flip_prob(
    spec: &GaussianMixtureSpec,
    agent: usize,
) -> Result<Probability, SourceError> {
    let h = spec.agent_half_gap(agent)?;
    let sigma = spec.marginal_sigma(agent);
    Ok(Probability::new(qfn(h / sigma)).expect("Q value in range"))
}

/// Uniform in `[0, 1)` from 53 random bits.
pub(crate) fn u01(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `(0, 1]`, safe under `log`.
pub(crate) fn u01_open(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Box-Muller standard normal generator with one cached spare.
pub(crate) struct GaussGen {
    spare: Option<f64>,
}

impl GaussGen {
    pub(crate) fn new() -> Self {
        GaussGen { spare: None }
    }

    pub(crate) fn next(&mut self, rng: &mut impl RngCore) -> f64 {
        if let Some(s) = self.spare.take() {
            return s;
        }
        let u1 = u01_open(rng);
        let u2 = u01(rng);
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.spare = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn example_one_is_valid() {
        assert!(GaussianMixtureSpec::example_one().validate().is_ok());
    }

    #[test]
    fn bad_weights_diagnosed() {
        let err = GaussianMixtureSpec::new(
            1,
            2,
            alloc::vec![0.5, 0.6],
            MeanLayout::UnitLadder,
            alloc::vec![1.0],
        )
        .unwrap_err();
        let SourceError::Invalid(diags) = err else { panic!("expected diagnostics") };
        assert!(diags.iter().any(|d| matches!(d, SpecDiagnostic::WeightsSumNotOne(_))));
    }

    #[test]
    fn indefinite_covariance_diagnosed() {
        // eigenvalues 1.1 and -0.1
        let err = GaussianMixtureSpec::new(
            2,
            2,
            alloc::vec![0.5, 0.5],
            MeanLayout::CenteredPm1,
            alloc::vec![0.5, 0.6, 0.6, 0.5],
        )
        .unwrap_err();
        let SourceError::Invalid(diags) = err else { panic!("expected diagnostics") };
        assert!(diags.contains(&SpecDiagnostic::CovarianceNotPositiveDefinite));
    }

    #[test]
    fn semantic_entropy_values() {
        let uniform = GaussianMixtureSpec::symmetric_binary(0.25).unwrap();
        assert_abs_diff_eq!(semantic_entropy(&uniform).get(), 1.0, epsilon = 1e-15);
        let ex1 = GaussianMixtureSpec::example_one();
        assert_abs_diff_eq!(semantic_entropy(&ex1).get(), 1.4854752972273344, epsilon = 1e-12);
    }

    #[test]
    fn empty_block_rejected() {
        let spec = GaussianMixtureSpec::example_one();
        assert_eq!(sample(&spec, 0, 1).unwrap_err(), SourceError::EmptyBlock);
    }

    #[test]
    fn sampling_deterministic() {
        let spec = GaussianMixtureSpec::example_one();
        let a = sample(&spec, 500, 42).unwrap();
        let b = sample(&spec, 500, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn label_frequencies_match_weights() {
        let spec = GaussianMixtureSpec::symmetric_binary(0.25).unwrap();
        let k = 1_000_000;
        let block = sample(&spec, k, 3).unwrap();
        let ones = block.labels().iter().filter(|&&s| s == 1).count() as f64;
        let freq = ones / k as f64;
        let se = libm::sqrt(0.25 / k as f64);
        assert!((freq - 0.5).abs() < 3.0 * se, "freq {freq}");
    }

    #[test]
    fn observation_moments() {
        let spec = GaussianMixtureSpec::symmetric_binary(0.25).unwrap();
        let k = 200_000;
        let block = sample(&spec, k, 9).unwrap();
        // conditional mean of agent 0 given label 2 should be close to +1
        let (mut sum, mut cnt) = (0.0, 0usize);
        for row in 0..k {
            if block.labels()[row] == 2 {
                sum += block.observation_row(row)[0];
                cnt += 1;
            }
        }
        let mean = sum / cnt as f64;
        assert!((mean - 1.0).abs() < 3.0 * 0.5 / libm::sqrt(cnt as f64), "mean {mean}");
    }

    #[test]
    fn half_widths() {
        let ladder = GaussianMixtureSpec::example_one();
        assert_abs_diff_eq!(ladder.decision_half_width().unwrap(), 0.5, epsilon = 1e-12);
        let centered = GaussianMixtureSpec::symmetric_binary(1.0).unwrap();
        assert_abs_diff_eq!(centered.decision_half_width().unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(centered.agent_half_gap(0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn flip_prob_conventions() {
        // centered +-1 with sigma = 1: Q(1)
        let centered = GaussianMixtureSpec::symmetric_binary(1.0).unwrap();
        assert_abs_diff_eq!(
            per_agent_flip_prob(&centered, 0).unwrap().get(),
            0.15865525393145707,
            epsilon = 1e-12
        );
        // unit ladder with sigma = 0.5: half-gap 0.5 over 0.5 is again Q(1)
        let ladder = GaussianMixtureSpec::new(
            1,
            2,
            alloc::vec![0.5, 0.5],
            MeanLayout::UnitLadder,
            alloc::vec![0.25],
        )
        .unwrap();
        assert_abs_diff_eq!(
            per_agent_flip_prob(&ladder, 0).unwrap().get(),
            0.15865525393145707,
            epsilon = 1e-12
        );
        // vanishing noise
        let sharp = GaussianMixtureSpec::symmetric_binary(1e-8).unwrap();
        assert!(per_agent_flip_prob(&sharp, 0).unwrap().get() < 1e-12);
    }

    #[test]
    fn flip_prob_requires_binary() {
        let ex1 = GaussianMixtureSpec::example_one();
        assert!(matches!(per_agent_flip_prob(&ex1, 0), Err(SourceError::BinaryOnly(3))));
    }

    #[test]
    fn marginal_spec_matches_agent() {
        let ex1 = GaussianMixtureSpec::example_one();
        let m0 = ex1.marginal(0).unwrap();
        assert_eq!(m0.agents(), 1);
        assert_abs_diff_eq!(m0.mean(2, 0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m0.covariance(0, 0), 0.75, epsilon = 1e-15);
    }
}
