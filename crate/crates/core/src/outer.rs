//! Converse (outer) bounds on the sum rate: the improved Fano-based bound
//! with distortion-region classification, plus two baselines.
//!
//! The improved bound minimizes
//! `H(omega) - beta(Gamma) + (1/2) log2 det(K_X)/det(Gamma)` over diagonal
//! `Gamma` dominated by the per-agent MSE budgets, where
//! `beta = min{D_S, 1 + log2(M-1) p_e(tr Gamma)}` and `p_e` is a detection
//! error bound obtained from a Gaussian tail plus a Chebyshev concentration
//! term, optimized over the decision slack `alpha`. Restricting to diagonal
//! `Gamma` loses nothing (Hadamard), so the search is over `L` scalars.

use alloc::vec::Vec;
use core::fmt;

use crate::mathkit::{self, qfn, Bits, Probability};
use crate::source::{semantic_entropy, GaussianMixtureSpec, SourceError};

/// Clip of the `alpha` search interval away from the `(h - alpha)^-2`
/// singularity.
const ALPHA_EPS: f64 = 1e-6;

/// Errors from the outer-bound computations.
#[derive(Debug, Clone, PartialEq)]
pub enum OuterError {
    NegativeTrace(f64),
    InvalidGamma,
    BudgetOutOfRange,
    Source(SourceError),
    Math(mathkit::MathError),
}

impl fmt::Display for OuterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterError::NegativeTrace(t) => write!(f, "trace {t} must be non-negative"),
            OuterError::InvalidGamma => write!(f, "gamma outside [0, diag K_X]"),
            OuterError::BudgetOutOfRange => {
                write!(f, "distortion budget outside the admissible box")
            }
            OuterError::Source(e) => write!(f, "source error: {e}"),
            OuterError::Math(e) => write!(f, "math error: {e}"),
        }
    }
}

impl core::error::Error for OuterError {}

impl From<SourceError> for OuterError {
    fn from(e: SourceError) -> Self {
        OuterError::Source(e)
    }
}

impl From<mathkit::MathError> for OuterError {
    fn from(e: mathkit::MathError) -> Self {
        OuterError::Math(e)
    }
}

/// Diagonal conditional-covariance candidate `Gamma = diag(gamma_1..gamma_L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaDiag(pub Vec<f64>);

impl GammaDiag {
    pub fn validate(&self, spec: &GaussianMixtureSpec) -> Result<(), OuterError> {
        if self.0.len() != spec.agents() {
            return Err(OuterError::InvalidGamma);
        }
        for (i, &g) in self.0.iter().enumerate() {
            if !(g >= 0.0) || g > spec.covariance(i, i) + 1e-12 {
                return Err(OuterError::InvalidGamma);
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Distortion budgets: semantic log loss `D_S` (bits) and per-agent MSE
/// `D_X`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionBudget {
    pub d_s: f64,
    pub d_x: Vec<f64>,
}

impl DistortionBudget {
    pub fn new(d_s: f64, d_x: Vec<f64>) -> Result<Self, OuterError> {
        if !(d_s >= 0.0) || !d_s.is_finite() || d_x.iter().any(|&d| !(d >= 0.0)) {
            return Err(OuterError::BudgetOutOfRange);
        }
        Ok(DistortionBudget { d_s, d_x })
    }

    /// Hard admissibility for the bound formulas: strictly positive MSE
    /// budgets not exceeding the marginal variances.
    pub fn validate(&self, spec: &GaussianMixtureSpec) -> Result<(), OuterError> {
        if self.d_x.len() != spec.agents() {
            return Err(OuterError::BudgetOutOfRange);
        }
        for (i, &d) in self.d_x.iter().enumerate() {
            if !(d > 0.0) || d > spec.covariance(i, i) + 1e-12 {
                return Err(OuterError::BudgetOutOfRange);
            }
        }
        Ok(())
    }

    /// Whether the budget also lies in the non-trivial semantic range
    /// `H(S|X) <= D_S <= H(omega)`, with the Monte-Carlo standard error of
    /// the `H(S|X)` estimate taken as slack.
    pub fn in_nontrivial_box(
        &self,
        spec: &GaussianMixtureSpec,
        mc_samples: usize,
        seed: u64,
    ) -> Result<bool, OuterError> {
        self.validate(spec)?;
        let est = mathkit::gm_posterior_entropy(
            spec,
            mathkit::EntropyMethod::MonteCarlo,
            mc_samples,
            seed,
        )?;
        let lo = est.bits.get() - 3.0 * est.std_error;
        Ok(self.d_s >= lo && self.d_s <= semantic_entropy(spec).get() + 1e-12)
    }

    pub fn trace(&self) -> f64 {
        self.d_x.iter().sum()
    }
}

/// Distortion-region label of the outer-bound minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Semantic constraint active: `beta = D_S`, full-budget `Gamma`.
    A,
    /// Both arms saturated: `p_e` capped at 1 and `D_S` beyond the Fano arm.
    C,
    /// Fano arm active with uncapped `p_e`.
    Bstar,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::A => write!(f, "A"),
            Region::C => write!(f, "C"),
            Region::Bstar => write!(f, "Bstar"),
        }
    }
}

/// Outer-bound value with the minimizing internals.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterBoundResult {
    pub rate: Bits,
    pub region: Region,
    pub gamma: GammaDiag,
    pub alpha_star: f64,
    pub p_e: Probability,
    pub beta: Bits,
}

/// Scalar detection-error subproblem: minimize over the decision slack
/// `alpha` the Gaussian-tail plus concentration objective
/// `g(alpha) = 2 Q(L alpha / sqrt(tr K_X)) + (1/L) (h - alpha)^-2 T`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AlphaProblem {
    /// `L / sqrt(tr K_X)`.
    c: f64,
    /// Decision half-width from the spec's mean layout.
    pub(crate) h: f64,
    inv_l: f64,
}

impl AlphaProblem {
    pub(crate) fn from_spec(spec: &GaussianMixtureSpec) -> Result<Self, OuterError> {
        let h = spec.decision_half_width()?;
        let l = spec.agents() as f64;
        Ok(AlphaProblem { c: l / libm::sqrt(spec.covariance_trace()), h, inv_l: 1.0 / l })
    }

    fn objective(&self, t: f64, alpha: f64) -> f64 {
        let gap = self.h - alpha;
        2.0 * qfn(self.c * alpha) + self.inv_l * t / (gap * gap)
    }

    /// Fast interior minimization: pure golden-section, valid because the
    /// objective is convex on `(0, h)` (the Gaussian tail has non-negative
    /// second derivative for positive arguments and the concentration term
    /// is convex).
    pub(crate) fn minimize_fast(&self, t: f64) -> (f64, f64) {
        let lo = ALPHA_EPS;
        let hi = self.h - ALPHA_EPS;
        mathkit::golden_section(&|a| self.objective(t, a), lo, hi, 1e-10)
    }

    /// Uncapped `p_e` via the fast path.
    pub(crate) fn p_e_raw(&self, t: f64) -> f64 {
        self.minimize_fast(t).1
    }
}

/// Minimize the `alpha` objective at trace `T` by the reference
/// grid-then-golden search; returns `(alpha_star, p_e_raw)` with the
/// minimum left uncapped.
pub fn optimal_alpha(t: f64, spec: &GaussianMixtureSpec) -> Result<(f64, f64), OuterError> {
    if !(t >= 0.0) {
        return Err(OuterError::NegativeTrace(t));
    }
    let prob = AlphaProblem::from_spec(spec)?;
    let (a, v) = mathkit::minimize_scalar(
        |alpha| prob.objective(t, alpha),
        ALPHA_EPS,
        prob.h - ALPHA_EPS,
        1e-9,
    )?;
    Ok((a, v))
}

/// Detection-error probability bound `min{1, p_e_raw(T)}`; monotone
/// non-decreasing in `T`.
pub fn error_prob_bound(t: f64, spec: &GaussianMixtureSpec) -> Result<Probability, OuterError> {
    let (_, raw) = optimal_alpha(t, spec)?;
    Ok(Probability::clamped(raw))
}

/// `beta(Gamma) = min{D_S, 1 + log2(M-1) p_e(tr Gamma)}`.
pub fn beta_value(
    gamma: &GammaDiag,
    d_s: f64,
    spec: &GaussianMixtureSpec,
) -> Result<Bits, OuterError> {
    gamma.validate(spec)?;
    let p_e = error_prob_bound(gamma.trace(), spec)?;
    let arm = fano_arm(p_e.get(), spec.alphabet());
    Bits::new(d_s.min(arm)).map_err(OuterError::Math)
}

fn fano_arm(p_e: f64, alphabet: usize) -> f64 {
    1.0 + libm::log2((alphabet - 1) as f64) * p_e
}

/// Numeric reference minimization of the outer bound over diagonal `Gamma`
/// by nested grid refinement (64 points per axis, then two 100-point
/// refinement passes per axis).
pub fn outer_bound_numeric(
    budget: &DistortionBudget,
    spec: &GaussianMixtureSpec,
) -> Result<OuterBoundResult, OuterError> {
    budget.validate(spec)?;
    let prob = AlphaProblem::from_spec(spec)?;
    let l = spec.agents();
    let h_omega = semantic_entropy(spec).get();
    let log2_det_k = spec.covariance_log2_det();
    let m = spec.alphabet();
    let rate_at = |gamma: &[f64]| -> f64 {
        let t: f64 = gamma.iter().sum();
        let beta = budget.d_s.min(fano_arm(prob.p_e_raw(t).min(1.0), m));
        let log_term: f64 = gamma.iter().map(|&g| libm::log2(g)).sum();
        h_omega - beta + 0.5 * (log2_det_k - log_term)
    };

    // coarse pass: 64 points per axis spanning (0, D_Xi]
    let mut centers: Vec<f64> = budget.d_x.clone();
    let mut steps: Vec<f64> = budget.d_x.iter().map(|&d| d / 64.0).collect();
    let mut best_gamma = budget.d_x.clone();
    let mut best_rate = f64::INFINITY;
    for pass in 0..3 {
        let points_per_axis: usize = if pass == 0 { 64 } else { 100 };
        let axes: Vec<Vec<f64>> = (0..l)
            .map(|i| {
                let (lo, hi) = if pass == 0 {
                    (steps[i], budget.d_x[i])
                } else {
                    ((centers[i] - steps[i]).max(steps[i] * 1e-3), (centers[i] + steps[i]).min(budget.d_x[i]))
                };
                (0..points_per_axis)
                    .map(|j| lo + (hi - lo) * j as f64 / (points_per_axis - 1) as f64)
                    .collect()
            })
            .collect();
        // mixed-radix sweep over the axis product
        let total: usize = points_per_axis.pow(l as u32);
        let mut gamma = alloc::vec![0.0; l];
        for idx in 0..total {
            let mut rem = idx;
            for i in 0..l {
                gamma[i] = axes[i][rem % points_per_axis];
                rem /= points_per_axis;
            }
            let r = rate_at(&gamma);
            if r < best_rate {
                best_rate = r;
                best_gamma.copy_from_slice(&gamma);
            }
        }
        centers.copy_from_slice(&best_gamma);
        for i in 0..l {
            let span = axes[i][points_per_axis - 1] - axes[i][0];
            steps[i] = span / (points_per_axis - 1) as f64;
        }
    }

    let t = best_gamma.iter().sum::<f64>();
    let (alpha_star, raw) = optimal_alpha(t, spec)?;
    let p_e = Probability::clamped(raw);
    let beta = budget.d_s.min(fano_arm(p_e.get(), m));
    Ok(OuterBoundResult {
        rate: Bits::from_rounded(best_rate),
        region: classify_region(budget, spec)?,
        gamma: GammaDiag(best_gamma),
        alpha_star,
        p_e,
        beta: Bits::from_rounded(beta),
    })
}

/// Classify the budget into the region whose closed form applies. Ties on
/// boundaries resolve in the order A, C, Bstar.
pub fn classify_region(
    budget: &DistortionBudget,
    spec: &GaussianMixtureSpec,
) -> Result<Region, OuterError> {
    budget.validate(spec)?;
    let prob = AlphaProblem::from_spec(spec)?;
    let p_e_raw = prob.p_e_raw(budget.trace());
    let p_e = p_e_raw.min(1.0);
    let threshold = 1.0 + libm::log2((spec.alphabet() - 1) as f64);
    if budget.d_s <= threshold && budget.d_s <= fano_arm(p_e, spec.alphabet()) {
        Ok(Region::A)
    } else if budget.d_s >= threshold && p_e_raw >= 1.0 {
        Ok(Region::C)
    } else {
        Ok(Region::Bstar)
    }
}

/// Closed-form outer bound for the classified region.
pub fn outer_bound_closed(
    budget: &DistortionBudget,
    spec: &GaussianMixtureSpec,
) -> Result<OuterBoundResult, OuterError> {
    budget.validate(spec)?;
    let prob = AlphaProblem::from_spec(spec)?;
    let region = classify_region(budget, spec)?;
    let m = spec.alphabet();
    let h_omega = semantic_entropy(spec).get();
    let log2_det_k = spec.covariance_log2_det();
    let t_full = budget.trace();
    let log_budget_term: f64 =
        0.5 * (log2_det_k - budget.d_x.iter().map(|&d| libm::log2(d)).sum::<f64>());

    let finish = |rate: f64, gamma: Vec<f64>, beta: f64, t: f64| -> Result<OuterBoundResult, OuterError> {
        let (alpha_star, raw) = optimal_alpha(t, spec)?;
        Ok(OuterBoundResult {
            rate: Bits::from_rounded(rate),
            region,
            gamma: GammaDiag(gamma),
            alpha_star,
            p_e: Probability::clamped(raw),
            beta: Bits::from_rounded(beta),
        })
    };

    match region {
        Region::A => {
            let rate = h_omega - budget.d_s + log_budget_term;
            finish(rate, budget.d_x.clone(), budget.d_s, t_full)
        }
        Region::Bstar => {
            let arm = fano_arm(prob.p_e_raw(t_full).min(1.0), m);
            let rate = h_omega - arm + log_budget_term;
            finish(rate, budget.d_x.clone(), arm, t_full)
        }
        Region::C => {
            let threshold = 1.0 + libm::log2((m - 1) as f64);
            // candidate at the full MSE budgets
            let full_rate = h_omega - threshold + log_budget_term;
            // candidate at the even trace split where p_e first caps
            let l = spec.agents();
            let t_star = p_e_inverse_one(&prob);
            let g = t_star / l as f64;
            let split_ok = (0..l).all(|i| g <= budget.d_x[i] + 1e-15 && g <= spec.covariance(i, i));
            let split_rate = if split_ok {
                h_omega - threshold + 0.5 * log2_det_k - 0.5 * l as f64 * libm::log2(g)
            } else {
                f64::INFINITY
            };
            if split_rate < full_rate {
                finish(split_rate, alloc::vec![g; l], threshold, t_star)
            } else {
                finish(full_rate, budget.d_x.clone(), threshold, t_full)
            }
        }
    }
}

/// Smallest trace at which the uncapped detection bound reaches 1, by
/// bisection on the monotone `p_e_raw` (tolerance 1e-9 in the trace).
fn p_e_inverse_one(prob: &AlphaProblem) -> f64 {
    if prob.p_e_raw(0.0) >= 1.0 {
        return 0.0;
    }
    let mut hi = prob.h * prob.h;
    while prob.p_e_raw(hi) < 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if prob.p_e_raw(mid) >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Conditional rate-distortion baseline: `sum_i (1/2) log2(sigma_i^2 / D_i)`.
pub fn conditional_rd_bound(
    d_x: &[f64],
    spec: &GaussianMixtureSpec,
) -> Result<Bits, OuterError> {
    if d_x.len() != spec.agents() {
        return Err(OuterError::BudgetOutOfRange);
    }
    let mut acc = 0.0;
    for (i, &d) in d_x.iter().enumerate() {
        let var = spec.covariance(i, i);
        if !(d > 0.0) || d > var + 1e-12 {
            return Err(OuterError::BudgetOutOfRange);
        }
        acc += 0.5 * libm::log2(var / d);
    }
    Ok(Bits::from_rounded(acc))
}

/// Shannon-type lower bound summed per agent:
/// `sum_i [H(omega) - H(S|X_i) + (1/2) log2(sigma_i^2 / D_i)]`, with the
/// per-agent posterior entropies computed by deterministic quadrature on
/// the marginal mixtures.
pub fn shannon_lower_bound(
    d_x: &[f64],
    spec: &GaussianMixtureSpec,
) -> Result<Bits, OuterError> {
    if d_x.len() != spec.agents() {
        return Err(OuterError::BudgetOutOfRange);
    }
    let h_omega = semantic_entropy(spec).get();
    let mut acc = 0.0;
    for (i, &d) in d_x.iter().enumerate() {
        let var = spec.covariance(i, i);
        if !(d > 0.0) || d > var + 1e-12 {
            return Err(OuterError::BudgetOutOfRange);
        }
        let marginal = spec.marginal(i)?;
        let eps =
            mathkit::gm_posterior_entropy(&marginal, mathkit::EntropyMethod::Quadrature, 0, 0)?;
        acc += h_omega - eps.bits.get() + 0.5 * libm::log2(var / d);
    }
    Ok(Bits::from_rounded(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ex1() -> GaussianMixtureSpec {
        GaussianMixtureSpec::example_one()
    }

    fn budget(d_s: f64, d1: f64, d2: f64) -> DistortionBudget {
        DistortionBudget::new(d_s, alloc::vec![d1, d2]).unwrap()
    }

    #[test]
    fn alpha_zero_trace_pushes_to_boundary() {
        let spec = ex1();
        let (a, raw) = optimal_alpha(0.0, &spec).unwrap();
        // with no concentration term the tail is minimized at the largest
        // admissible alpha
        assert!(a > 0.5 - 1e-4, "alpha {a}");
        let expect = 2.0 * qfn(2.0 * (0.5 - 1e-6) / libm::sqrt(1.25));
        assert_abs_diff_eq!(raw, expect, epsilon = 1e-6);
    }

    #[test]
    fn alpha_matches_dense_grid_oracle() {
        let spec = ex1();
        let t = 0.04;
        let (a, v) = optimal_alpha(t, &spec).unwrap();
        // exhaustive 10^6-point scan as the oracle
        let prob = AlphaProblem::from_spec(&spec).unwrap();
        let n = 1_000_000;
        let (mut ga, mut gv) = (0.0, f64::INFINITY);
        for j in 0..n {
            let alpha = 1e-6 + (0.5 - 2e-6) * j as f64 / (n - 1) as f64;
            let val = 2.0 * qfn(2.0 * alpha / libm::sqrt(1.25)) + 0.5 * t / ((0.5 - alpha) * (0.5 - alpha));
            if val < gv {
                gv = val;
                ga = alpha;
            }
        }
        assert!((a - ga).abs() < 1e-6, "golden {a} grid {ga}");
        assert!((v - gv).abs() < 1e-9);
        // fast path agrees with the reference path
        let (fa, fv) = prob.minimize_fast(t);
        assert!((fa - a).abs() < 1e-6);
        assert!((fv - v).abs() < 1e-10);
    }

    #[test]
    fn alpha_stationarity_residual_when_interior() {
        let spec = ex1();
        let (a, _) = optimal_alpha(0.04, &spec).unwrap();
        let prob = AlphaProblem::from_spec(&spec).unwrap();
        // centered finite-difference derivative as the stationarity residual
        let eps = 1e-6;
        let d = (prob.objective(0.04, a + eps) - prob.objective(0.04, a - eps)) / (2.0 * eps);
        assert!(d.abs() < 1e-4, "derivative {d}");
        assert!(a > ALPHA_EPS && a < prob.h - ALPHA_EPS);
    }

    #[test]
    fn large_trace_exceeds_one() {
        let spec = ex1();
        let (_, raw) = optimal_alpha(10.0, &spec).unwrap();
        assert!(raw > 1.0);
        assert_eq!(error_prob_bound(10.0, &spec).unwrap().get(), 1.0);
    }

    #[test]
    fn negative_trace_rejected() {
        let spec = ex1();
        assert!(matches!(optimal_alpha(-0.1, &spec), Err(OuterError::NegativeTrace(_))));
    }

    #[test]
    fn error_prob_monotone() {
        let spec = ex1();
        let mut prev = 0.0;
        for &t in &[0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3, 1.0] {
            let p = error_prob_bound(t, &spec).unwrap().get();
            assert!(p >= prev - 1e-12, "t {t}");
            prev = p;
        }
    }

    #[test]
    fn error_prob_high_resolution_limit() {
        // tiny covariance trace: the tail term is negligible
        let spec = GaussianMixtureSpec::new(
            2,
            2,
            alloc::vec![0.5, 0.5],
            crate::source::MeanLayout::UnitLadder,
            alloc::vec![0.005, 0.005],
        )
        .unwrap();
        let p = error_prob_bound(0.0, &spec).unwrap().get();
        assert!(p < 1e-12, "p {p}");
    }

    #[test]
    fn beta_arms() {
        let spec = ex1();
        let h_omega = semantic_entropy(&spec).get();
        // Fano arm at a small trace exceeds H(omega), so D_S binds
        let g = GammaDiag(alloc::vec![0.01, 0.01]);
        let b = beta_value(&g, h_omega, &spec).unwrap().get();
        assert_abs_diff_eq!(b, h_omega, epsilon = 1e-12);
        // saturated trace: arm = 1 + log2(M-1), beta still capped by D_S
        let g_full = GammaDiag(alloc::vec![0.75, 0.5]);
        let b_full = beta_value(&g_full, 3.0, &spec).unwrap().get();
        assert_abs_diff_eq!(b_full, 2.0, epsilon = 1e-12);
        // binary alphabet: the Fano arm is identically 1
        let bin = GaussianMixtureSpec::symmetric_binary(0.25).unwrap();
        let b_bin = beta_value(&GammaDiag(alloc::vec![0.25, 0.25]), 0.9, &bin).unwrap().get();
        assert_abs_diff_eq!(b_bin, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_region_a_example() {
        let spec = ex1();
        let res = outer_bound_closed(&budget(0.5, 0.1, 0.1), &spec).unwrap();
        assert_eq!(res.region, Region::A);
        let expect = semantic_entropy(&spec).get() - 0.5 + 0.5 * libm::log2(0.375 / 0.01);
        assert_abs_diff_eq!(res.rate.get(), expect, epsilon = 1e-10);
        assert_abs_diff_eq!(res.beta.get(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_full_budget_corner() {
        let spec = ex1();
        let h_omega = semantic_entropy(&spec).get();
        let res = outer_bound_closed(&budget(h_omega, 0.75, 0.5), &spec).unwrap();
        // log term vanishes at the variance corner of a diagonal covariance
        assert_abs_diff_eq!(res.rate.get() + res.beta.get(), h_omega, epsilon = 1e-9);
    }

    #[test]
    fn closed_matches_numeric_on_small_grid() {
        let spec = ex1();
        let h_omega = semantic_entropy(&spec).get();
        for &d_s in &[0.1, 0.7, h_omega] {
            for &d1 in &[0.05, 0.3, 0.75] {
                for &d2 in &[0.04, 0.2, 0.5] {
                    let b = budget(d_s, d1, d2);
                    let closed = outer_bound_closed(&b, &spec).unwrap();
                    let numeric = outer_bound_numeric(&b, &spec).unwrap();
                    assert!(
                        (closed.rate.get() - numeric.rate.get()).abs() <= 1e-4,
                        "({d_s}, {d1}, {d2}): closed {} numeric {}",
                        closed.rate.get(),
                        numeric.rate.get()
                    );
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let spec = ex1();
        // capped p_e with in-box D_S: region A for the ternary example
        let h_omega = semantic_entropy(&spec).get();
        assert_eq!(classify_region(&budget(h_omega, 0.3, 0.3), &spec).unwrap(), Region::A);
        // tiny trace keeps the Fano arm above H(omega): still A
        assert_eq!(classify_region(&budget(0.3, 0.005, 0.005), &spec).unwrap(), Region::A);
        // Fano arm below D_S with uncapped p_e: Bstar
        assert_eq!(classify_region(&budget(1.47, 1e-5, 1e-5), &spec).unwrap(), Region::Bstar);
        // beyond the threshold with capped p_e: C
        assert_eq!(classify_region(&budget(2.5, 0.3, 0.3), &spec).unwrap(), Region::C);
    }

    #[test]
    fn region_c_closed_form_prefers_smaller_candidate() {
        let spec = ex1();
        let b = budget(2.5, 0.3, 0.3);
        let closed = outer_bound_closed(&b, &spec).unwrap();
        assert_eq!(closed.region, Region::C);
        let numeric = outer_bound_numeric(&b, &spec).unwrap();
        assert!((closed.rate.get() - numeric.rate.get()).abs() <= 1e-4);
    }

    #[test]
    fn conditional_bound_values() {
        let spec = ex1();
        assert_abs_diff_eq!(
            conditional_rd_bound(&[0.75, 0.5], &spec).unwrap().get(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            conditional_rd_bound(&[0.375, 0.25], &spec).unwrap().get(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            conditional_rd_bound(&[0.1875, 0.125], &spec).unwrap().get(),
            2.0,
            epsilon = 1e-12
        );
        assert!(conditional_rd_bound(&[0.0, 0.1], &spec).is_err());
        assert!(conditional_rd_bound(&[0.8, 0.1], &spec).is_err());
    }

    #[test]
    fn slb_dominates_conditional() {
        let spec = ex1();
        let d_x = [0.1, 0.1];
        let slb = shannon_lower_bound(&d_x, &spec).unwrap().get();
        let cond = conditional_rd_bound(&d_x, &spec).unwrap().get();
        assert!(slb >= cond, "slb {slb} cond {cond}");
    }

    #[test]
    fn slb_reduces_to_conditional_for_equal_means() {
        let spec = GaussianMixtureSpec::new(
            2,
            2,
            alloc::vec![0.5, 0.5],
            crate::source::MeanLayout::Explicit(alloc::vec![
                alloc::vec![1.0, 1.0],
                alloc::vec![1.0, 1.0]
            ]),
            alloc::vec![0.5, 0.5],
        )
        .unwrap();
        let d_x = [0.2, 0.3];
        let slb = shannon_lower_bound(&d_x, &spec).unwrap().get();
        let cond = conditional_rd_bound(&d_x, &spec).unwrap().get();
        assert_abs_diff_eq!(slb, cond, epsilon = 1e-6);
    }

    #[test]
    fn numeric_never_below_conditional() {
        let spec = ex1();
        for &d_s in &[0.2, 0.8, 1.4] {
            for &d in &[0.05, 0.2, 0.45] {
                let b = budget(d_s, d, d);
                let outer = outer_bound_numeric(&b, &spec).unwrap().rate.get();
                let cond = conditional_rd_bound(&b.d_x, &spec).unwrap().get();
                assert!(outer >= cond - 1e-9, "({d_s}, {d})");
            }
        }
    }

    #[test]
    fn budget_box_checks() {
        let spec = ex1();
        let b = DistortionBudget::new(0.5, alloc::vec![0.1, 0.9]).unwrap();
        assert!(b.validate(&spec).is_err());
        assert!(DistortionBudget::new(-0.1, alloc::vec![0.1, 0.1]).is_err());
        let ok = budget(0.8, 0.1, 0.1);
        assert!(ok.validate(&spec).is_ok());
        assert!(ok.in_nontrivial_box(&spec, 50_000, 5).unwrap());
        assert!(!budget(0.1, 0.1, 0.1).in_nontrivial_box(&spec, 50_000, 5).unwrap());
    }
}
