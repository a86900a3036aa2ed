//! Experiment drivers: each produces one CSV document from a config.

use anyhow::{anyhow, bail, Result};
use rayon::prelude::*;

use gmrd_core::codec::{build_ldpc, run_baseline_trial, run_trial_with_codes, CodecConfig, LdpcCode};
use gmrd_core::inner::{inner_bound, rate_allocation, semantic_mismatch};
use gmrd_core::mathkit::{binary_convolve, binary_entropy, gm_posterior_entropy, q_function, EntropyMethod};
use gmrd_core::outer::{classify_region, conditional_rd_bound, outer_bound_closed};
use gmrd_core::source::{per_agent_flip_prob, semantic_entropy};
use gmrd_core::{DistortionBudget, GaussianMixtureSpec, Probability};

use crate::config::ExperimentConfig;
use crate::csvio::{CsvDoc, Field};

fn h2(p: f64) -> f64 {
    binary_entropy(Probability::clamped(p)).get()
}

fn bconv(a: f64, b: f64) -> f64 {
    binary_convolve(Probability::clamped(a), Probability::clamped(b)).get()
}

fn qfn(x: f64) -> f64 {
    q_function(x).get()
}

/// Deterministic per-stream seed derivation (splitmix64 mixing).
pub fn mix_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn budget(d_s: f64, d_x: Vec<f64>) -> Result<DistortionBudget> {
    DistortionBudget::new(d_s, d_x).map_err(|e| anyhow!("invalid budget: {e}"))
}

/// Per-agent budgets clamped into the admissible box (distortion at or
/// above the marginal variance costs no rate).
fn clamp_dx(spec: &GaussianMixtureSpec, d_x: f64) -> Vec<f64> {
    (0..spec.agents()).map(|i| d_x.min(spec.covariance(i, i))).collect()
}

/// The detect-and-compress semantic floor `H(S | detected labels)` at
/// perfect test channels; semantic budgets below it are infeasible for the
/// inner bound.
pub fn inner_floor(spec: &GaussianMixtureSpec) -> Result<f64> {
    let p1 = per_agent_flip_prob(spec, 0).map_err(|e| anyhow!("{e}"))?.get();
    let p2 = per_agent_flip_prob(spec, 1).map_err(|e| anyhow!("{e}"))?.get();
    Ok(semantic_mismatch(0.0, 0.0, p1, p2).map_err(|e| anyhow!("{e}"))?.get())
}

/// Semantic budget pushed up to the scheme floor when the requested value
/// sits below it; returns the effective value.
pub fn effective_d_s(spec: &GaussianMixtureSpec, d_s: f64) -> Result<f64> {
    let floor = inner_floor(spec)?;
    Ok(if d_s < floor { floor + 1e-9 } else { d_s })
}

pub fn run_surface(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let spec = match &cfg.source {
        Some(s) => s.resolve()?,
        None => GaussianMixtureSpec::example_one(),
    };
    // per-agent posterior entropies are budget-independent; compute once
    let h_omega = semantic_entropy(&spec).get();
    let mut eps = Vec::with_capacity(spec.agents());
    for i in 0..spec.agents() {
        let marginal = spec.marginal(i).map_err(|e| anyhow!("{e}"))?;
        eps.push(
            gm_posterior_entropy(&marginal, EntropyMethod::Quadrature, 0, 0)
                .map_err(|e| anyhow!("{e}"))?
                .bits
                .get(),
        );
    }

    let d_s_axis = cfg.surface.d_s.values();
    let d_x_axis = cfg.surface.d_x.values();
    let cells: Vec<(f64, f64)> = d_s_axis
        .iter()
        .flat_map(|&a| d_x_axis.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<Result<Vec<Field>>> = cells
        .par_iter()
        .map(|&(d_s, d_x)| {
            let d_x_vec = clamp_dx(&spec, d_x);
            let b = budget(d_s, d_x_vec.clone())?;
            let outer = outer_bound_closed(&b, &spec).map_err(|e| anyhow!("{e}"))?;
            let cond = conditional_rd_bound(&d_x_vec, &spec).map_err(|e| anyhow!("{e}"))?;
            let slb: f64 = d_x_vec
                .iter()
                .enumerate()
                .map(|(i, &d)| h_omega - eps[i] + 0.5 * (spec.covariance(i, i) / d).log2())
                .sum();
            Ok(vec![
                d_s.into(),
                d_x_vec[0].into(),
                d_x_vec[1].into(),
                outer.rate.get().into(),
                cond.get().into(),
                slb.into(),
                format!("{}", outer.region).as_str().into(),
            ])
        })
        .collect();

    let mut doc = CsvDoc::new(
        "gmrd-surface-v1",
        &cfg.digest(),
        &["d_s", "d_x1", "d_x2", "outer", "conditional", "slb", "region"],
    );
    for row in rows {
        doc.push(row?);
    }
    Ok(doc)
}

pub fn run_contours(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let spec = match &cfg.source {
        Some(s) => s.resolve()?,
        None => GaussianMixtureSpec::example_one(),
    };
    // the companion budget follows D_X1 in proportion to the variances so
    // the quoted D_X1 range stays inside the box
    let ratio = spec.covariance(1, 1) / spec.covariance(0, 0);

    #[derive(Clone)]
    struct Cell {
        family: &'static str,
        fixed: f64,
        d_s: f64,
        d_x1: f64,
    }
    let mut cells = Vec::new();
    for &d_s in &cfg.contours.fixed_d_s {
        for d_x1 in cfg.contours.d_x1.values() {
            cells.push(Cell { family: "fixed-ds", fixed: d_s, d_s, d_x1 });
        }
    }
    for &d_x1 in &cfg.contours.fixed_d_x1 {
        for d_s in cfg.contours.d_s.values() {
            cells.push(Cell { family: "fixed-dx1", fixed: d_x1, d_s, d_x1 });
        }
    }
    let rows: Vec<Result<Vec<Field>>> = cells
        .par_iter()
        .map(|c| {
            let d_x2 = (c.d_x1 * ratio).min(spec.covariance(1, 1));
            let d_x1 = c.d_x1.min(spec.covariance(0, 0));
            let b = budget(c.d_s, vec![d_x1, d_x2])?;
            let outer = outer_bound_closed(&b, &spec).map_err(|e| anyhow!("{e}"))?;
            Ok(vec![
                c.family.into(),
                c.fixed.into(),
                c.d_s.into(),
                d_x1.into(),
                d_x2.into(),
                outer.rate.get().into(),
                format!("{}", outer.region).as_str().into(),
            ])
        })
        .collect();

    let mut doc = CsvDoc::new(
        "gmrd-contours-v1",
        &cfg.digest(),
        &["family", "fixed", "d_s", "d_x1", "d_x2", "outer", "region"],
    );
    for row in rows {
        doc.push(row?);
    }
    Ok(doc)
}

pub fn run_regions(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let spec = match &cfg.source {
        Some(s) => s.resolve()?,
        None => GaussianMixtureSpec::example_one(),
    };
    let trace: f64 = (0..spec.agents()).map(|i| spec.covariance(i, i)).sum();
    let d_s_axis = cfg.regions.d_s.values();
    let sum_axis = cfg.regions.sum_d_x.values();
    let cells: Vec<(f64, f64)> = d_s_axis
        .iter()
        .flat_map(|&a| sum_axis.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<Result<Vec<Field>>> = cells
        .par_iter()
        .map(|&(d_s, sum_d_x)| {
            // split the total budget in proportion to the variances so every
            // admissible total stays inside the per-agent box
            let d_x: Vec<f64> = (0..spec.agents())
                .map(|i| sum_d_x * spec.covariance(i, i) / trace)
                .collect();
            let b = budget(d_s, d_x.clone())?;
            let region = classify_region(&b, &spec).map_err(|e| anyhow!("{e}"))?;
            let outer = outer_bound_closed(&b, &spec).map_err(|e| anyhow!("{e}"))?;
            Ok(vec![
                d_s.into(),
                sum_d_x.into(),
                d_x[0].into(),
                d_x[1].into(),
                format!("{region}").as_str().into(),
                outer.rate.get().into(),
            ])
        })
        .collect();

    let mut doc = CsvDoc::new(
        "gmrd-regions-v1",
        &cfg.digest(),
        &["d_s", "sum_d_x", "d_x1", "d_x2", "region", "outer"],
    );
    for row in rows {
        doc.push(row?);
    }
    Ok(doc)
}

/// Measurements averaged over trials at one simulated operating point.
pub struct SimStats {
    pub r_sum: f64,
    pub r_sum_se: f64,
    pub d_s: f64,
    pub d_x: f64,
    pub per_agent: Vec<(f64, f64)>,
}

/// Run `trials` deterministic trials, reusing one Slepian-Wolf code across
/// them (the code depends on the crossover, not the trial).
pub fn simulate_point(codec: &CodecConfig, trials: usize, seed: u64) -> Result<SimStats> {
    let codes = shared_codes(codec, seed)?;
    let reports: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial_with_codes(codec, mix_seed(seed, t as u64), Some(&codes)))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| anyhow!("trial failed: {e}"))?;
    let n = trials as f64;
    let rates: Vec<f64> = reports.iter().map(|r| r.r_sum.get()).collect();
    let r_sum = rates.iter().sum::<f64>() / n;
    let var = rates.iter().map(|r| (r - r_sum) * (r - r_sum)).sum::<f64>() / (n - 1.0).max(1.0);
    let r_sum_se = (var / n).sqrt();
    let d_s = reports.iter().map(|r| r.log_loss.get()).sum::<f64>() / n;
    let d_x = reports
        .iter()
        .map(|r| r.mse.iter().sum::<f64>() / r.mse.len() as f64)
        .sum::<f64>()
        / n;
    let agents = reports[0].per_agent.len();
    let per_agent = (0..agents)
        .map(|i| {
            let a = reports.iter().map(|r| r.per_agent[i].0.get()).sum::<f64>() / n;
            let b = reports.iter().map(|r| r.per_agent[i].1.get()).sum::<f64>() / n;
            (a, b)
        })
        .collect();
    Ok(SimStats { r_sum, r_sum_se, d_s, d_x, per_agent })
}

/// Prebuilt Slepian-Wolf codes for agents `2..=L` at this config's
/// crossover rates.
pub fn shared_codes(codec: &CodecConfig, seed: u64) -> Result<Vec<LdpcCode>> {
    let spec = &codec.spec;
    let p0 = per_agent_flip_prob(spec, 0).map_err(|e| anyhow!("{e}"))?.get();
    let mut codes = Vec::new();
    for i in 1..spec.agents() {
        let pi = per_agent_flip_prob(spec, i).map_err(|e| anyhow!("{e}"))?.get();
        let crossover = bconv(p0, pi).clamp(1e-9, 0.5 - 1e-9);
        let rate = (h2(crossover) + codec.sw_rate_margin).min(0.999);
        codes.push(
            build_ldpc(codec.k, rate, &codec.ldpc_profile, mix_seed(seed, 7_000 + i as u64))
                .map_err(|e| anyhow!("building SW code: {e}"))?,
        );
    }
    Ok(codes)
}

fn baseline_stats(codec: &CodecConfig, trials: usize, seed: u64) -> Result<SimStats> {
    let reports: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| run_baseline_trial(codec, mix_seed(seed, t as u64)))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| anyhow!("baseline trial failed: {e}"))?;
    let n = trials as f64;
    let rates: Vec<f64> = reports.iter().map(|r| r.r_sum.get()).collect();
    let r_sum = rates.iter().sum::<f64>() / n;
    let var = rates.iter().map(|r| (r - r_sum) * (r - r_sum)).sum::<f64>() / n;
    Ok(SimStats {
        r_sum,
        r_sum_se: (var / n).sqrt(),
        d_s: reports.iter().map(|r| r.log_loss.get()).sum::<f64>() / n,
        d_x: reports
            .iter()
            .map(|r| r.mse.iter().sum::<f64>() / r.mse.len() as f64)
            .sum::<f64>()
            / n,
        per_agent: Vec::new(),
    })
}

/// Hard-label fusion loss of the compress-then-detect baseline at the given
/// quantizer step (quantization noise folded into the flip rates).
fn baseline_fusion_loss(sigma2: f64, step: f64) -> f64 {
    let p = qfn(1.0 / (sigma2 + step * step / 12.0).sqrt());
    2.0 * h2(p) - h2(bconv(p, p))
}

/// Largest step whose fusion loss still meets `ds_target` (with relative
/// slack), capped by the step that meets the MSE budget; the matched-
/// distortion operating point of the baseline.
pub fn baseline_step(sigma2: f64, ds_target: f64, dx_target: f64, slack: f64) -> f64 {
    let cap = (12.0 * dx_target).sqrt();
    let goal = ds_target * (1.0 + slack);
    if baseline_fusion_loss(sigma2, cap) <= goal {
        return cap;
    }
    const MIN_STEP: f64 = 1e-2;
    if baseline_fusion_loss(sigma2, MIN_STEP) > goal {
        // the semantic target sits at (or below) the baseline's own floor;
        // best effort at the finest step
        return MIN_STEP;
    }
    let (mut lo, mut hi) = (MIN_STEP, cap);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if baseline_fusion_loss(sigma2, mid) <= goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Quantizer bits the baseline needs so its codebook spans the raw
/// observation range (largest mean plus four noise sigmas) at the given
/// step; the scheme quantizes mean-removed residuals, the baseline the raw
/// values, so a tuned-down step must come with more levels or clipping
/// wrecks the baseline's MSE.
fn baseline_bits(spec: &GaussianMixtureSpec, step: f64) -> u32 {
    let mut span: f64 = 0.0;
    for i in 0..spec.agents() {
        let sigma = spec.marginal_sigma(i);
        for label in 1..=spec.alphabet() {
            span = span.max(spec.mean(label, i).abs() + 4.0 * sigma);
        }
    }
    let levels = (2.0 * span / step).max(1.0);
    (levels.log2().ceil() as u32 + 1).clamp(3, 16)
}

pub fn run_rd_sweep(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let rd = &cfg.rd_sweep;
    let spec = GaussianMixtureSpec::symmetric_binary(rd.sigma2).map_err(|e| anyhow!("{e}"))?;
    let floor = inner_floor(&spec)?;

    struct Cell {
        sweep: &'static str,
        d_s: f64,
        d_x: f64,
        simulate: bool,
    }
    let mut cells = Vec::new();
    for (i, d_x) in rd.d_x.values().into_iter().enumerate() {
        let simulate = rd.sim_every > 0 && i % rd.sim_every == 0;
        cells.push(Cell { sweep: "dx", d_s: rd.fixed_d_s, d_x, simulate });
    }
    for (i, d_s) in rd.d_s.values().into_iter().enumerate() {
        let simulate = rd.sim_every > 0 && i % rd.sim_every == 0;
        cells.push(Cell { sweep: "ds", d_s, d_x: rd.fixed_d_x, simulate });
    }

    let rows: Vec<Result<Vec<Field>>> = cells
        .par_iter()
        .enumerate()
        .map(|(idx, c)| {
            let d_x_vec = clamp_dx(&spec, c.d_x);
            let d_s_eff = if c.d_s < floor { floor + 1e-9 } else { c.d_s };
            let outer = outer_bound_closed(&budget(c.d_s, d_x_vec.clone())?, &spec)
                .map_err(|e| anyhow!("{e}"))?
                .rate
                .get();
            let inner = inner_bound(&budget(d_s_eff, d_x_vec.clone())?, &spec)
                .map_err(|e| anyhow!("{e}"))?
                .rate
                .get();
            let cond = conditional_rd_bound(&d_x_vec, &spec)
                .map_err(|e| anyhow!("{e}"))?
                .get();
            let mut row: Vec<Field> = vec![
                c.sweep.into(),
                c.d_s.into(),
                c.d_x.into(),
                d_s_eff.into(),
                outer.into(),
                inner.into(),
                cond.into(),
            ];
            if c.simulate {
                let mut codec = base_codec(cfg, spec.clone())?;
                codec.step = (12.0 * c.d_x).sqrt();
                let seed = mix_seed(cfg.seed, 10_000 + idx as u64);
                let sim = simulate_point(&codec, rd.sim_trials, seed)?;
                let b_step =
                    baseline_step(rd.sigma2, sim.d_s, c.d_x, rd.baseline_ds_slack);
                let mut bcodec = codec.clone();
                bcodec.step = b_step;
                bcodec.q = baseline_bits(&spec, b_step);
                let base = baseline_stats(&bcodec, rd.sim_trials, mix_seed(seed, 1))?;
                row.extend([
                    Field::Float(sim.r_sum),
                    Field::Float(sim.r_sum_se),
                    Field::Float(sim.d_s),
                    Field::Float(sim.d_x),
                    Field::Float(base.r_sum),
                    Field::Float(base.d_s),
                    Field::Float(base.d_x),
                    Field::Float(b_step),
                ]);
            } else {
                row.extend(std::iter::repeat(Field::Empty).take(8));
            }
            Ok(row)
        })
        .collect();

    let mut doc = CsvDoc::new(
        "gmrd-rd-sweep-v1",
        &cfg.digest(),
        &[
            "sweep",
            "d_s_target",
            "d_x_target",
            "d_s_effective",
            "outer",
            "inner",
            "conditional",
            "sim_r_sum",
            "sim_r_sum_se",
            "sim_d_s",
            "sim_d_x",
            "base_r_sum",
            "base_d_s",
            "base_d_x",
            "base_step",
        ],
    );
    doc.annotate("inner_floor", &crate::csvio::format_float(floor));
    for row in rows {
        doc.push(row?);
    }
    Ok(doc)
}

fn base_codec(cfg: &ExperimentConfig, spec: GaussianMixtureSpec) -> Result<CodecConfig> {
    cfg.codec.resolve(spec, cfg.seed)
}

pub fn run_alloc(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let al = &cfg.alloc;
    let spec = GaussianMixtureSpec::symmetric_binary(al.sigma2).map_err(|e| anyhow!("{e}"))?;
    let d_s_eff = effective_d_s(&spec, al.d_s)?;
    let d_x_vec = clamp_dx(&spec, al.d_x);
    let b = budget(d_s_eff, d_x_vec)?;
    let curve = rate_allocation(&b, &spec, al.curve_points).map_err(|e| anyhow!("{e}"))?;

    let mut doc = CsvDoc::new(
        "gmrd-alloc-v1",
        &cfg.digest(),
        &["kind", "t", "r1", "r2"],
    );
    doc.annotate("d_s_target", &crate::csvio::format_float(al.d_s));
    doc.annotate("d_s_effective", &crate::csvio::format_float(d_s_eff));
    let n = curve.len();
    for (j, (r1, r2)) in curve.iter().enumerate() {
        let t = j as f64 / (n - 1) as f64;
        doc.push(vec!["curve".into(), t.into(), r1.get().into(), r2.get().into()]);
    }

    let mut codec = base_codec(cfg, spec)?;
    codec.step = (12.0 * al.d_x).sqrt();
    let sim = simulate_point(&codec, al.sim_trials, mix_seed(cfg.seed, 20_000))?;
    let r1 = sim.per_agent[0].0 + sim.per_agent[0].1;
    let r2 = sim.per_agent[1].0 + sim.per_agent[1].1;
    doc.push(vec!["simulated".into(), Field::Empty, r1.into(), r2.into()]);
    Ok(doc)
}

/// Measured sum rate at a given step, averaged over a few tuning trials.
fn measured_rate(codec: &CodecConfig, trials: usize, seed: u64, codes: &[LdpcCode]) -> Result<f64> {
    let mut acc = 0.0;
    for t in 0..trials {
        acc += run_trial_with_codes(codec, mix_seed(seed, t as u64), Some(codes))
            .map_err(|e| anyhow!("tuning trial failed: {e}"))?
            .r_sum
            .get();
    }
    Ok(acc / trials as f64)
}

/// Bisect the quantizer step until the measured sum rate hits the target
/// within tolerance; the rate is monotone decreasing in the step.
pub fn tune_step_for_rate(
    codec: &CodecConfig,
    target: f64,
    tol: f64,
    trials: usize,
    seed: u64,
    codes: &[LdpcCode],
) -> Result<f64> {
    let (mut lo, mut hi) = (0.05_f64, 24.0_f64);
    let mut cfg = codec.clone();
    for _ in 0..40 {
        let mid = (lo * hi).sqrt();
        cfg.step = mid;
        let r = measured_rate(&cfg, trials, seed, codes)?;
        if (r - target).abs() <= tol {
            return Ok(mid);
        }
        if r > target {
            lo = mid; // too fine: rate too high, coarsen
        } else {
            hi = mid;
        }
    }
    bail!("could not tune the step to rate {target} +- {tol}")
}

pub fn run_snr_sweep(cfg: &ExperimentConfig) -> Result<CsvDoc> {
    let sn = &cfg.snr_sweep;
    let mut doc = CsvDoc::new(
        "gmrd-snr-sweep-v1",
        &cfg.digest(),
        &[
            "part",
            "snr",
            "snr_db",
            "sigma2",
            "d_s_target",
            "d_x_target",
            "d_s_effective",
            "d_x_effective",
            "inner",
            "outer",
            "gap",
            "step",
            "r_sum",
            "r_sum_se",
            "meas_d_s",
            "meas_d_x",
        ],
    );

    // part 1: bound gap at the fixed budgets across SNR
    let bound_rows: Vec<Result<Vec<Field>>> = sn
        .bounds_snr
        .values()
        .into_par_iter()
        .map(|snr| {
            let sigma2 = 1.0 / snr;
            let spec =
                GaussianMixtureSpec::symmetric_binary(sigma2).map_err(|e| anyhow!("{e}"))?;
            let d_x_eff = sn.d_x.min(sigma2);
            let d_s_eff = effective_d_s(&spec, sn.d_s)?;
            let d_x_vec = vec![d_x_eff; 2];
            let outer = outer_bound_closed(&budget(sn.d_s, d_x_vec.clone())?, &spec)
                .map_err(|e| anyhow!("{e}"))?
                .rate
                .get();
            let inner = inner_bound(&budget(d_s_eff, d_x_vec)?, &spec)
                .map_err(|e| anyhow!("{e}"))?
                .rate
                .get();
            Ok(vec![
                "bounds".into(),
                snr.into(),
                (10.0 * snr.log10()).into(),
                sigma2.into(),
                sn.d_s.into(),
                sn.d_x.into(),
                d_s_eff.into(),
                d_x_eff.into(),
                inner.into(),
                outer.into(),
                (inner - outer).into(),
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
            ])
        })
        .collect();
    for row in bound_rows {
        doc.push(row?);
    }

    // part 2: measured distortions at the fixed total rate across SNR
    let rate_rows: Vec<Result<Vec<Field>>> = sn
        .rate_snr
        .values()
        .into_par_iter()
        .enumerate()
        .map(|(idx, snr)| {
            let sigma2 = 1.0 / snr;
            let spec =
                GaussianMixtureSpec::symmetric_binary(sigma2).map_err(|e| anyhow!("{e}"))?;
            let codec = base_codec(cfg, spec)?;
            let seed = mix_seed(cfg.seed, 30_000 + idx as u64);
            let codes = shared_codes(&codec, seed)?;
            let step = tune_step_for_rate(
                &codec,
                sn.target_rate,
                sn.rate_tolerance,
                sn.tune_trials,
                mix_seed(seed, 2),
                &codes,
            )?;
            let mut tuned = codec.clone();
            tuned.step = step;
            let sim = simulate_point(&tuned, sn.sim_trials, mix_seed(seed, 3))?;
            Ok(vec![
                "fixed-rate".into(),
                snr.into(),
                (10.0 * snr.log10()).into(),
                sigma2.into(),
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
                step.into(),
                sim.r_sum.into(),
                sim.r_sum_se.into(),
                sim.d_s.into(),
                sim.d_x.into(),
            ])
        })
        .collect();
    for row in rate_rows {
        doc.push(row?);
    }
    Ok(doc)
}
