//! Monte-Carlo implementation of the detect-and-compress pipeline: per-agent
//! label clustering, subtractive-dithered scalar quantization of the
//! observations, Slepian-Wolf label coding over LDPC syndromes, conditional
//! entropy coding of the quantizer indices, label fusion, and distortion
//! measurement — plus a compress-then-detect baseline.

pub mod arith;
pub mod ldpc;
mod trial;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

pub use ldpc::{build_ldpc, sw_decode, sw_encode, LdpcCode, LdpcProfile};
pub use trial::{run_baseline_trial, run_trial, run_trial_with_codes, TrialReport};

use crate::mathkit::Bits;
use crate::source::{u01, GaussianMixtureSpec, SourceError};

/// Errors from the codec pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum CodecError {
    Source(SourceError),
    BinaryOnly(usize),
    LengthMismatch { expected: usize, got: usize },
    InvalidConfig(&'static str),
    InfeasibleProfile,
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::Source(e) => write!(f, "source error: {e}"),
            CodecError::BinaryOnly(m) => {
                write!(f, "clustering requires a binary alphabet, got M = {m}")
            }
            CodecError::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            CodecError::InvalidConfig(msg) => write!(f, "invalid codec config: {msg}"),
            CodecError::InfeasibleProfile => {
                write!(f, "degree profile infeasible for this block length and rate")
            }
        }
    }
}

impl core::error::Error for CodecError {}

impl From<SourceError> for CodecError {
    fn from(e: SourceError) -> Self {
        CodecError::Source(e)
    }
}

/// Full pipeline configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CodecConfig {
    pub spec: GaussianMixtureSpec,
    /// Quantizer bits per sample; indices live in `[-2^(q-1), 2^(q-1) - 1]`.
    pub q: u32,
    /// Quantizer step; the dither is uniform on `[-step/2, step/2)`.
    pub step: f64,
    /// Likelihood-ratio decision threshold of the clustering stage (1 = MAP
    /// under uniform priors).
    pub np_threshold: f64,
    /// Extra Slepian-Wolf rate above the conditional entropy, in bits.
    pub sw_rate_margin: f64,
    pub ldpc_profile: LdpcProfile,
    pub bp_max_iters: usize,
    /// Samples per trial; also the LDPC block length.
    pub k: usize,
    pub trials: usize,
    pub master_seed: u64,
}

impl CodecConfig {
    /// Defaults for the symmetric binary simulation setup: 3-bit quantizer
    /// with unit step (dither on `[-0.5, 0.5)`), regular weight-3 columns,
    /// and a 0.15-bit Slepian-Wolf margin.
    pub fn symmetric_default(sigma2: f64) -> Result<Self, CodecError> {
        Ok(CodecConfig {
            spec: GaussianMixtureSpec::symmetric_binary(sigma2)?,
            q: 3,
            step: 1.0,
            np_threshold: 1.0,
            sw_rate_margin: 0.15,
            ldpc_profile: LdpcProfile::Regular { col_weight: 3 },
            bp_max_iters: 60,
            k: 8192,
            trials: 100,
            master_seed: 0,
        })
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        if self.q < 1 {
            return Err(CodecError::InvalidConfig("quantizer needs at least 1 bit"));
        }
        if self.k < 1024 {
            return Err(CodecError::InvalidConfig("block length below 1024"));
        }
        if self.bp_max_iters < 1 {
            return Err(CodecError::InvalidConfig("decoder needs at least one iteration"));
        }
        if !(self.step > 0.0) {
            return Err(CodecError::InvalidConfig("quantizer step must be positive"));
        }
        if !(self.np_threshold > 0.0) {
            return Err(CodecError::InvalidConfig("decision threshold must be positive"));
        }
        if !(self.sw_rate_margin >= 0.0) {
            return Err(CodecError::InvalidConfig("rate margin must be non-negative"));
        }
        if self.trials < 1 {
            return Err(CodecError::InvalidConfig("at least one trial required"));
        }
        self.spec.validate().map_err(|d| CodecError::Source(SourceError::Invalid(d)))
    }
}

/// Per-sample likelihood-ratio label decision for a binary alphabet. With
/// threshold 1 and common variance this is a midpoint threshold on `x`;
/// exact ties go to the higher label.
pub fn np_cluster(
    x: &[f64],
    spec: &GaussianMixtureSpec,
    agent: usize,
    threshold: f64,
) -> Result<Vec<u8>, CodecError> {
    if spec.alphabet() != 2 {
        return Err(CodecError::BinaryOnly(spec.alphabet()));
    }
    let mu1 = spec.mean(1, agent);
    let mu2 = spec.mean(2, agent);
    let var = spec.covariance(agent, agent);
    let log_t = libm::log(threshold);
    // LLR(x) = [x (mu2 - mu1) - (mu2^2 - mu1^2)/2] / var
    let slope = (mu2 - mu1) / var;
    let offset = (mu2 * mu2 - mu1 * mu1) / (2.0 * var);
    Ok(x.iter()
        .map(|&xi| if xi * slope - offset >= log_t { 2u8 } else { 1u8 })
        .collect())
}

/// Subtractive-dithered uniform scalar quantization of `x` after removing
/// the clustered-label component mean. Returns the signed indices (clipped
/// to the `q`-bit range) and the clip count.
pub fn dithered_quantize(
    x: &[f64],
    labels: &[u8],
    spec: &GaussianMixtureSpec,
    agent: usize,
    q: u32,
    step: f64,
    dither_seed: u64,
) -> Result<(Vec<i32>, usize), CodecError> {
    if x.len() != labels.len() {
        return Err(CodecError::LengthMismatch { expected: x.len(), got: labels.len() });
    }
    if !(step > 0.0) || q < 1 {
        return Err(CodecError::InvalidConfig("positive step and q >= 1 required"));
    }
    let lo = -(1i64 << (q - 1));
    let hi = (1i64 << (q - 1)) - 1;
    let mut rng = ChaCha12Rng::seed_from_u64(dither_seed);
    let mut clips = 0usize;
    let mut out = Vec::with_capacity(x.len());
    for (&xi, &label) in x.iter().zip(labels) {
        let u = (u01(&mut rng) - 0.5) * step;
        let resid = xi - spec.mean(label as usize, agent);
        let idx = libm::round((resid + u) / step) as i64;
        let clipped = idx.clamp(lo, hi);
        if clipped != idx {
            clips += 1;
        }
        out.push(clipped as i32);
    }
    Ok((out, clips))
}

/// Inverse of [`dithered_quantize`]: rebuild `index * step`, subtract the
/// shared dither, and add back the decoded-label component mean.
pub fn dequantize(
    indices: &[i32],
    decoded_labels: &[u8],
    spec: &GaussianMixtureSpec,
    agent: usize,
    step: f64,
    dither_seed: u64,
) -> Result<Vec<f64>, CodecError> {
    if indices.len() != decoded_labels.len() {
        return Err(CodecError::LengthMismatch {
            expected: indices.len(),
            got: decoded_labels.len(),
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(dither_seed);
    Ok(indices
        .iter()
        .zip(decoded_labels)
        .map(|(&idx, &label)| {
            let u = (u01(&mut rng) - 0.5) * step;
            idx as f64 * step - u + spec.mean(label as usize, agent)
        })
        .collect())
}

/// Plug-in conditional entropy of the quantizer indices given the labels,
/// in bits per sample: the ideal rate of a conditional entropy coder.
pub fn entropy_code_rate(indices: &[i32], labels: &[u8]) -> Bits {
    plug_in_conditional_entropy(
        indices.iter().zip(labels).map(|(&i, &l)| (l as u32, i as i64)),
        indices.len(),
    )
}

/// Plug-in conditional entropy `H(value | context)` of paired samples.
pub(crate) fn plug_in_conditional_entropy(
    pairs: impl Iterator<Item = (u32, i64)>,
    len: usize,
) -> Bits {
    if len == 0 {
        return Bits::from_rounded(0.0);
    }
    let mut joint: BTreeMap<(u32, i64), usize> = BTreeMap::new();
    let mut context: BTreeMap<u32, usize> = BTreeMap::new();
    for (ctx, v) in pairs {
        *joint.entry((ctx, v)).or_insert(0) += 1;
        *context.entry(ctx).or_insert(0) += 1;
    }
    let n = len as f64;
    // sum of -p(ctx, v) log2 p(v | ctx)
    let mut h = 0.0;
    for (&(ctx, _), &c) in &joint {
        h -= c as f64 / n * libm::log2(c as f64 / context[&ctx] as f64);
    }
    Bits::from_rounded(h)
}

/// Bayes fusion of per-agent decoded labels modeled as independent binary
/// symmetric channels with the given flip rates. Returns per-sample
/// posteriors `[P(S=1 | labels), P(S=2 | labels)]`.
pub fn fuse_labels(
    decoded: &[Vec<u8>],
    flip_rates: &[f64],
    prior: (f64, f64),
) -> Result<Vec<[f64; 2]>, CodecError> {
    if decoded.len() != flip_rates.len() || decoded.is_empty() {
        return Err(CodecError::LengthMismatch {
            expected: flip_rates.len(),
            got: decoded.len(),
        });
    }
    let k = decoded[0].len();
    if decoded.iter().any(|b| b.len() != k) {
        return Err(CodecError::LengthMismatch { expected: k, got: 0 });
    }
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut post = [prior.0, prior.1];
        for (block, &f) in decoded.iter().zip(flip_rates) {
            let observed = block[j];
            for (s, p) in post.iter_mut().enumerate() {
                let truth = (s + 1) as u8;
                *p *= if observed == truth { 1.0 - f } else { f };
            }
        }
        let norm = post[0] + post[1];
        out.push([post[0] / norm, post[1] / norm]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{per_agent_flip_prob, sample};
    use approx::assert_abs_diff_eq;

    fn spec025() -> GaussianMixtureSpec {
        GaussianMixtureSpec::symmetric_binary(0.25).unwrap()
    }

    #[test]
    fn cluster_midpoint_tie_goes_high() {
        let spec = GaussianMixtureSpec::symmetric_binary(1.0).unwrap();
        let labels = np_cluster(&[0.0, -1e-9, 1e-9], &spec, 0, 1.0).unwrap();
        assert_eq!(labels, alloc::vec![2, 1, 2]);
    }

    #[test]
    fn cluster_error_matches_q_function() {
        let spec = GaussianMixtureSpec::symmetric_binary(1.0).unwrap();
        let k = 1_000_000;
        let block = sample(&spec, k, 17).unwrap();
        let x = block.agent_series(0);
        let labels = np_cluster(&x, &spec, 0, 1.0).unwrap();
        let errors =
            labels.iter().zip(block.labels()).filter(|(a, b)| a != b).count() as f64;
        let rate = errors / k as f64;
        let p = per_agent_flip_prob(&spec, 0).unwrap().get();
        let se = libm::sqrt(p * (1.0 - p) / k as f64);
        assert!((rate - p).abs() < 3.0 * se, "rate {rate} expected {p}");
    }

    #[test]
    fn cluster_perfect_when_noiseless() {
        let spec = GaussianMixtureSpec::symmetric_binary(1e-9).unwrap();
        let block = sample(&spec, 10_000, 3).unwrap();
        let labels = np_cluster(&block.agent_series(0), &spec, 0, 1.0).unwrap();
        assert_eq!(labels, block.labels());
    }

    #[test]
    fn quantizer_centered_sample() {
        let spec = spec025();
        // dither is irrelevant for the index at an exact component mean
        // only when it rounds away; use a seed-free check through the
        // round-trip identity instead
        let (idx, clips) =
            dithered_quantize(&[1.0, -1.0], &[2, 1], &spec, 0, 3, 1.0, 5).unwrap();
        assert_eq!(clips, 0);
        let xhat = dequantize(&idx, &[2, 1], &spec, 0, 1.0, 5).unwrap();
        assert!((xhat[0] - 1.0).abs() <= 0.5 + 1e-12);
        assert!((xhat[1] + 1.0).abs() <= 0.5 + 1e-12);
    }

    #[test]
    fn quantizer_mse_is_step_squared_over_12() {
        let spec = spec025();
        let k = 1_000_000;
        let block = sample(&spec, k, 23).unwrap();
        let x = block.agent_series(0);
        let labels = np_cluster(&x, &spec, 0, 1.0).unwrap();
        let step = 1.0;
        let (idx, clips) = dithered_quantize(&x, &labels, &spec, 0, 3, step, 71).unwrap();
        assert!((clips as f64 / k as f64) < 1e-4);
        let xhat = dequantize(&idx, &labels, &spec, 0, step, 71).unwrap();
        let mse: f64 =
            x.iter().zip(&xhat).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / k as f64;
        let expect = step * step / 12.0;
        assert!((mse - expect).abs() / expect < 0.02, "mse {mse}");
        // whitening: error nearly uncorrelated with the input
        let mean_x: f64 = x.iter().sum::<f64>() / k as f64;
        let mut cov = 0.0;
        let mut var_x = 0.0;
        let mut var_e = 0.0;
        for (a, b) in x.iter().zip(&xhat) {
            let e = b - a;
            cov += (a - mean_x) * e;
            var_x += (a - mean_x) * (a - mean_x);
            var_e += e * e;
        }
        let corr = cov / libm::sqrt(var_x * var_e);
        assert!(corr.abs() < 0.01, "correlation {corr}");
    }

    #[test]
    fn quantizer_deterministic_and_label_flip_offsets() {
        let spec = spec025();
        let x = alloc::vec![0.9, -1.1, 0.2];
        let labels = alloc::vec![2u8, 1, 2];
        let a = dithered_quantize(&x, &labels, &spec, 0, 3, 1.0, 9).unwrap();
        let b = dithered_quantize(&x, &labels, &spec, 0, 3, 1.0, 9).unwrap();
        assert_eq!(a, b);
        // decoding with a flipped label shifts by the mean gap
        let good = dequantize(&a.0, &labels, &spec, 0, 1.0, 9).unwrap();
        let flipped = dequantize(&a.0, &[1, 1, 2], &spec, 0, 1.0, 9).unwrap();
        assert_abs_diff_eq!(good[0] - flipped[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_rate_degenerate_and_uniform() {
        assert_eq!(entropy_code_rate(&[3; 100], &[1; 100]).get(), 0.0);
        // uniform indices independent of labels
        let indices: Vec<i32> = (0..8000).map(|i| ((i / 2) % 8) - 4).collect();
        let labels: Vec<u8> = (0..8000).map(|i| (i % 2) as u8 + 1).collect();
        let rate = entropy_code_rate(&indices, &labels).get();
        assert_abs_diff_eq!(rate, 3.0, epsilon = 0.02);
        // conditioning can only reduce the plug-in rate
        let dependent: Vec<i32> =
            labels.iter().enumerate().map(|(i, &l)| if l == 1 { 0 } else { (i % 4) as i32 }).collect();
        let cond = entropy_code_rate(&dependent, &labels).get();
        let uncond =
            plug_in_conditional_entropy(dependent.iter().map(|&v| (0, v as i64)), dependent.len())
                .get();
        assert!(cond < uncond);
    }

    #[test]
    fn fusion_agreement_and_conflict() {
        let post = fuse_labels(
            &[alloc::vec![2, 1], alloc::vec![2, 2]],
            &[0.1, 0.1],
            (0.5, 0.5),
        )
        .unwrap();
        // agreement on label 2
        assert!(post[0][1] > 0.9);
        // symmetric conflict
        assert_abs_diff_eq!(post[1][0], 0.5, epsilon = 1e-12);
        // asymmetric rates against a brute-force joint table
        let post2 =
            fuse_labels(&[alloc::vec![1], alloc::vec![2]], &[0.1, 0.2], (0.5, 0.5)).unwrap();
        // P(S=1) prop 0.5 * 0.9 * 0.2; P(S=2) prop 0.5 * 0.1 * 0.8
        let z = 0.5 * 0.9 * 0.2 + 0.5 * 0.1 * 0.8;
        assert_abs_diff_eq!(post2[0][0], 0.5 * 0.9 * 0.2 / z, epsilon = 1e-12);
    }

    #[test]
    fn config_validation() {
        let mut cfg = CodecConfig::symmetric_default(0.25).unwrap();
        assert!(cfg.validate().is_ok());
        cfg.k = 512;
        assert!(cfg.validate().is_err());
    }
}
