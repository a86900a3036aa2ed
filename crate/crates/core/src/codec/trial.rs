//! End-to-end Monte-Carlo trials of the detect-and-compress pipeline and
//! the compress-then-detect baseline.

use alloc::vec::Vec;

use super::ldpc::{build_ldpc, sw_decode, sw_encode, LdpcCode};
use super::{
    dequantize, dithered_quantize, entropy_code_rate, fuse_labels, np_cluster,
    plug_in_conditional_entropy, CodecConfig, CodecError,
};
use crate::mathkit::{bconv, h2, qfn, Bits, Probability};
use crate::source::{per_agent_flip_prob, sample, u01};

/// Measurements from one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    /// Per agent: (label-stream rate, quantizer-stream rate), bits/sample.
    pub per_agent: Vec<(Bits, Bits)>,
    /// Sum of all per-agent rates.
    pub r_sum: Bits,
    /// Empirical semantic log loss against the true labels, bits.
    pub log_loss: Bits,
    /// Per-agent reconstruction MSE.
    pub mse: Vec<f64>,
    /// Per-agent clustering error rate against the true labels.
    pub cluster_error: Vec<f64>,
    /// Per-agent residual label error after Slepian-Wolf decoding
    /// (agent 1 carries its labels losslessly, so its entry is 0).
    pub sw_residual: Vec<f64>,
    /// Per-agent quantizer clip rate.
    pub clip_rate: Vec<f64>,
    /// Plug-in conditional entropy of the true label given all decoded
    /// labels; the floor of the empirical log loss.
    pub label_cond_entropy: Bits,
    pub trial_seed: u64,
    /// Substream seeds actually used (sampling, per-agent dither, LDPC).
    pub sub_seeds: Vec<u64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fixed substream indices hanging off a trial seed, so any stage is
/// replayable in isolation.
pub(crate) fn sub_seed(trial_seed: u64, stream: u64) -> u64 {
    splitmix64(trial_seed ^ splitmix64(stream))
}

const STREAM_SAMPLING: u64 = 0;
const STREAM_DITHER_BASE: u64 = 1;
const STREAM_LDPC_BASE: u64 = 100;

/// Run one detect-and-compress trial, building LDPC codes from the trial's
/// own substream.
pub fn run_trial(config: &CodecConfig, trial_seed: u64) -> Result<TrialReport, CodecError> {
    run_trial_with_codes(config, trial_seed, None)
}

/// Like [`run_trial`] but optionally reusing prebuilt codes for agents
/// `2..=L` (index 0 is agent 2); sweep drivers use this to amortize the
/// construction across trials.
pub fn run_trial_with_codes(
    config: &CodecConfig,
    trial_seed: u64,
    codes: Option<&[LdpcCode]>,
) -> Result<TrialReport, CodecError> {
    config.validate()?;
    let spec = &config.spec;
    let l = spec.agents();
    let k = config.k;
    let mut sub_seeds = alloc::vec![sub_seed(trial_seed, STREAM_SAMPLING)];
    let block = sample(spec, k, sub_seeds[0])?;

    // per-agent detection and quantization
    let mut enc_labels: Vec<Vec<u8>> = Vec::with_capacity(l);
    let mut indices: Vec<Vec<i32>> = Vec::with_capacity(l);
    let mut cluster_error = Vec::with_capacity(l);
    let mut clip_rate = Vec::with_capacity(l);
    let mut quant_rate = Vec::with_capacity(l);
    let mut series: Vec<Vec<f64>> = Vec::with_capacity(l);
    for i in 0..l {
        let x = block.agent_series(i);
        let labels = np_cluster(&x, spec, i, config.np_threshold)?;
        cluster_error.push(
            labels.iter().zip(block.labels()).filter(|(a, b)| a != b).count() as f64 / k as f64,
        );
        let dither_seed = sub_seed(trial_seed, STREAM_DITHER_BASE + i as u64);
        sub_seeds.push(dither_seed);
        let (idx, clips) =
            dithered_quantize(&x, &labels, spec, i, config.q, config.step, dither_seed)?;
        clip_rate.push(clips as f64 / k as f64);
        quant_rate.push(entropy_code_rate(&idx, &labels).get());
        enc_labels.push(labels);
        indices.push(idx);
        series.push(x);
    }

    // label transport: agent 1 at its own entropy, the rest Slepian-Wolf
    // coded against agent 1's labels
    let flips: Vec<f64> = (0..l)
        .map(|i| per_agent_flip_prob(spec, i).map(Probability::get))
        .collect::<Result<_, _>>()?;
    let mut dec_labels: Vec<Vec<u8>> = Vec::with_capacity(l);
    let mut label_rate = Vec::with_capacity(l);
    let mut sw_residual = alloc::vec![0.0; l];
    let freq1 =
        enc_labels[0].iter().filter(|&&s| s == 2).count() as f64 / k as f64;
    label_rate.push(h2(freq1));
    dec_labels.push(enc_labels[0].clone());
    for i in 1..l {
        let crossover = bconv(flips[0], flips[i]).clamp(1e-9, 0.5 - 1e-9);
        let target_rate = (h2(crossover) + config.sw_rate_margin).min(0.999);
        let ldpc_seed = sub_seed(trial_seed, STREAM_LDPC_BASE + i as u64);
        sub_seeds.push(ldpc_seed);
        let built;
        let code = match codes.and_then(|cs| cs.get(i - 1)) {
            Some(c) => {
                if c.block_length() != k {
                    return Err(CodecError::LengthMismatch {
                        expected: k,
                        got: c.block_length(),
                    });
                }
                c
            }
            None => {
                built = build_ldpc(k, target_rate, &config.ldpc_profile, ldpc_seed)?;
                &built
            }
        };
        let bits: Vec<u8> = enc_labels[i].iter().map(|&s| s - 1).collect();
        let side: Vec<u8> = dec_labels[0].iter().map(|&s| s - 1).collect();
        let syn = sw_encode(&bits, code)?;
        let dec = sw_decode(
            &syn,
            &side,
            Probability::clamped(crossover),
            code,
            config.bp_max_iters,
        )?;
        sw_residual[i] =
            dec.iter().zip(&bits).filter(|(a, b)| a != b).count() as f64 / k as f64;
        label_rate.push(code.rate());
        dec_labels.push(dec.iter().map(|&b| b + 1).collect());
    }

    // reconstruction and distortion measurement
    let mut mse = Vec::with_capacity(l);
    for i in 0..l {
        let xhat = dequantize(
            &indices[i],
            &dec_labels[i],
            spec,
            i,
            config.step,
            sub_seeds[1 + i],
        )?;
        mse.push(
            series[i]
                .iter()
                .zip(&xhat)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                / k as f64,
        );
    }

    // semantic estimate: Bayes fusion of the decoded labels
    let w = spec.weights();
    let posteriors = fuse_labels(&dec_labels, &flips, (w[0], w[1]))?;
    let mut log_loss = 0.0;
    for (post, &s) in posteriors.iter().zip(block.labels()) {
        log_loss -= libm::log2(post[s as usize - 1].max(1e-300));
    }
    log_loss /= k as f64;

    let label_cond_entropy = plug_in_conditional_entropy(
        (0..k).map(|j| {
            let mut ctx = 0u32;
            for (i, dec) in dec_labels.iter().enumerate() {
                ctx |= ((dec[j] - 1) as u32) << i;
            }
            (ctx, block.labels()[j] as i64)
        }),
        k,
    );

    let per_agent: Vec<(Bits, Bits)> = label_rate
        .iter()
        .zip(&quant_rate)
        .map(|(&a, &b)| (Bits::from_rounded(a), Bits::from_rounded(b)))
        .collect();
    let r_sum = per_agent.iter().map(|(a, b)| a.get() + b.get()).sum::<f64>();
    Ok(TrialReport {
        per_agent,
        r_sum: Bits::from_rounded(r_sum),
        log_loss: Bits::from_rounded(log_loss),
        mse,
        cluster_error,
        sw_residual,
        clip_rate,
        label_cond_entropy,
        trial_seed,
        sub_seeds,
    })
}

/// Compress-then-detect baseline: quantize the raw observations with a
/// single codebook (no clustering), code the index streams at their
/// empirical joint entropies, and detect the label only at the decoder from
/// the reconstructions.
pub fn run_baseline_trial(
    config: &CodecConfig,
    trial_seed: u64,
) -> Result<TrialReport, CodecError> {
    config.validate()?;
    let spec = &config.spec;
    let l = spec.agents();
    let k = config.k;
    let mut sub_seeds = alloc::vec![sub_seed(trial_seed, STREAM_SAMPLING)];
    let block = sample(spec, k, sub_seeds[0])?;

    let lo = -(1i64 << (config.q - 1));
    let hi = (1i64 << (config.q - 1)) - 1;
    let mut indices: Vec<Vec<i32>> = Vec::with_capacity(l);
    let mut xhat: Vec<Vec<f64>> = Vec::with_capacity(l);
    let mut clip_rate = Vec::with_capacity(l);
    let mut mse = Vec::with_capacity(l);
    for i in 0..l {
        let x = block.agent_series(i);
        let dither_seed = sub_seed(trial_seed, STREAM_DITHER_BASE + i as u64);
        sub_seeds.push(dither_seed);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(dither_seed);
        use rand_core::SeedableRng;
        let mut clips = 0usize;
        let mut idx_block = Vec::with_capacity(k);
        let mut rec = Vec::with_capacity(k);
        for &xi in &x {
            let u = (u01(&mut rng) - 0.5) * config.step;
            let idx = libm::round((xi + u) / config.step) as i64;
            let clipped = idx.clamp(lo, hi);
            if clipped != idx {
                clips += 1;
            }
            idx_block.push(clipped as i32);
            rec.push(clipped as f64 * config.step - u);
        }
        clip_rate.push(clips as f64 / k as f64);
        mse.push(
            x.iter().zip(&rec).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / k as f64,
        );
        indices.push(idx_block);
        xhat.push(rec);
    }

    // rate accounting: agent 1 at its empirical entropy, later agents
    // conditioned on agent 1's indices (joint entropy coding)
    let mut quant_rate = Vec::with_capacity(l);
    quant_rate.push(
        plug_in_conditional_entropy(indices[0].iter().map(|&v| (0u32, v as i64)), k).get(),
    );
    for i in 1..l {
        quant_rate.push(
            plug_in_conditional_entropy(
                (0..k).map(|j| ((indices[0][j] as i64 - lo) as u32, indices[i][j] as i64)),
                k,
            )
            .get(),
        );
    }

    // decoder-side detection: per-agent MAP labels from the reconstructions
    // (quantization noise folded into the variances), then the same Bayes
    // label fusion as the main pipeline with the post-quantization flip rates
    let qvar = config.step * config.step / 12.0;
    let w = spec.weights();
    let m = spec.alphabet();
    let mut map_labels: Vec<Vec<u8>> = alloc::vec![Vec::with_capacity(k); l];
    for j in 0..k {
        for i in 0..l {
            let var = spec.covariance(i, i) + qvar;
            let mut best = (f64::NEG_INFINITY, 1u8);
            for s in 1..=m {
                let r = xhat[i][j] - spec.mean(s, i);
                let lp = libm::log(w[s - 1]) - 0.5 * r * r / var;
                if lp >= best.0 {
                    best = (lp, s as u8);
                }
            }
            map_labels[i].push(best.1);
        }
    }
    let flips: Vec<f64> = (0..l)
        .map(|i| {
            let h = spec.agent_half_gap(i)?;
            Ok(qfn(h / libm::sqrt(spec.covariance(i, i) + qvar)))
        })
        .collect::<Result<_, crate::source::SourceError>>()?;
    let posteriors = fuse_labels(&map_labels, &flips, (w[0], w[1]))?;
    let mut log_loss = 0.0;
    for (post, &s) in posteriors.iter().zip(block.labels()) {
        log_loss -= libm::log2(post[s as usize - 1].max(1e-300));
    }
    log_loss /= k as f64;

    let cluster_error: Vec<f64> = map_labels
        .iter()
        .map(|labels| {
            labels.iter().zip(block.labels()).filter(|(a, b)| a != b).count() as f64 / k as f64
        })
        .collect();
    let label_cond_entropy = plug_in_conditional_entropy(
        (0..k).map(|j| {
            let mut ctx = 0u32;
            for (i, labels) in map_labels.iter().enumerate() {
                ctx |= ((labels[j] - 1) as u32) << i;
            }
            (ctx, block.labels()[j] as i64)
        }),
        k,
    );

    let per_agent: Vec<(Bits, Bits)> = quant_rate
        .iter()
        .map(|&b| (Bits::from_rounded(0.0), Bits::from_rounded(b)))
        .collect();
    let r_sum = quant_rate.iter().sum::<f64>();
    Ok(TrialReport {
        per_agent,
        r_sum: Bits::from_rounded(r_sum),
        log_loss: Bits::from_rounded(log_loss),
        mse,
        cluster_error,
        sw_residual: alloc::vec![0.0; l],
        clip_rate,
        label_cond_entropy,
        trial_seed,
        sub_seeds,
    })
}
