//! Scalar information-theoretic and probabilistic kernels.
//!
//! Everything here is pure and reentrant. All entropies and rates are in
//! bits (base 2); natural-log intermediates are converted before they leave
//! a function.

use alloc::vec::Vec;
use core::fmt;

use crate::source::GaussianMixtureSpec;

const LN2: f64 = core::f64::consts::LN_2;

/// Errors from the scalar kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MathError {
    /// A probability argument fell outside `[0, 1]`.
    ProbabilityDomain(f64),
    /// A bits/rate value was negative or non-finite.
    BitsDomain(f64),
    /// `minimize_scalar` was called with `lo >= hi` or a non-positive
    /// tolerance.
    InvalidInterval,
    /// Quadrature was requested for a multi-agent spec.
    UnsupportedMethod,
    /// Too few samples requested for a Monte-Carlo estimate.
    TooFewSamples(usize),
}

impl fmt::Display for MathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MathError::ProbabilityDomain(v) => {
                write!(f, "probability {v} outside [0, 1]")
            }
            MathError::BitsDomain(v) => write!(f, "bits value {v} invalid"),
            MathError::InvalidInterval => write!(f, "invalid search interval"),
            MathError::UnsupportedMethod => {
                write!(f, "quadrature is only available for single-agent specs")
            }
            MathError::TooFewSamples(n) => {
                write!(f, "Monte-Carlo estimate needs at least 10^4 samples, got {n}")
            }
        }
    }
}

impl core::error::Error for MathError {}

/// A probability, guaranteed to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self, MathError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(MathError::ProbabilityDomain(value))
        }
    }

    /// Clamp a finite value into `[0, 1]`; handy for capped quantities.
    pub fn clamped(value: f64) -> Self {
        Probability(value.clamp(0.0, 1.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A non-negative quantity of information in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(f64);

impl Bits {
    pub fn new(value: f64) -> Result<Self, MathError> {
        if value.is_finite() && value >= 0.0 {
            Ok(Bits(value))
        } else {
            Err(MathError::BitsDomain(value))
        }
    }

    /// Treat tiny negative round-off as zero.
    pub(crate) fn from_rounded(value: f64) -> Self {
        Bits(if value < 0.0 && value > -1e-12 { 0.0 } else { value.max(0.0) })
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Binary entropy `H2(p) = -p log2 p - (1-p) log2 (1-p)`, with `0 log 0 = 0`.
pub fn binary_entropy(p: Probability) -> Bits {
    Bits(h2(p.get()))
}

/// Raw `f64` binary entropy used in hot loops.
pub(crate) fn h2(p: f64) -> f64 {
    let mut acc = 0.0;
    for v in [p, 1.0 - p] {
        if v > 0.0 {
            acc -= v * libm::log2(v);
        }
    }
    acc
}

/// Binary convolution `p * q = p(1-q) + q(1-p)`: the crossover probability
/// of two cascaded binary symmetric channels.
pub fn binary_convolve(p: Probability, q: Probability) -> Probability {
    Probability(bconv(p.get(), q.get()))
}

pub(crate) fn bconv(p: f64, q: f64) -> f64 {
    p * (1.0 - q) + q * (1.0 - p)
}

/// Standard Gaussian tail `Q(x) = P{Z >= x}`, via the complementary error
/// function.
pub fn q_function(x: f64) -> Probability {
    Probability(qfn(x))
}

pub(crate) fn qfn(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

/// Minimize `f` on `[lo, hi]`: coarse grid of 1024 points, then
/// golden-section refinement on the best bracket. For unimodal `f` this is
/// the global minimizer; for general `f` it is the best grid-local minimum.
pub fn minimize_scalar<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64), MathError> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(MathError::InvalidInterval);
    }
    const GRID: usize = 1024;
    let step = (hi - lo) / (GRID - 1) as f64;
    let mut best_i = 0usize;
    let mut best_v = f64::INFINITY;
    for i in 0..GRID {
        let x = lo + step * i as f64;
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let blo = if best_i == 0 { lo } else { lo + step * (best_i - 1) as f64 };
    let bhi = if best_i == GRID - 1 { hi } else { lo + step * (best_i + 1) as f64 };
    Ok(golden_section(&f, blo, bhi, tol))
}

/// Golden-section search on `[lo, hi]`, returning `(argmin, min)`.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    let fm = f(xm);
    if f1 <= f2 && f1 <= fm {
        (x1, f1)
    } else if f2 <= fm {
        (x2, f2)
    } else {
        (xm, fm)
    }
}

/// How to estimate the posterior label entropy `H(S|X)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyMethod {
    /// Gauss-Legendre quadrature over a +-8 sigma range; single agent only.
    Quadrature,
    /// Seeded Monte-Carlo average of the per-sample posterior entropy.
    MonteCarlo,
}

/// A posterior-entropy estimate with its standard error (zero for
/// quadrature).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub bits: Bits,
    pub std_error: f64,
}

/// Estimate `H(S|X) = E[-sum_l P(S=l|X) log2 P(S=l|X)]` for the mixture.
///
/// Monte-Carlo draws `(S, X)` pairs from the given seed; quadrature is
/// deterministic and available only when `L = 1`.
pub fn gm_posterior_entropy(
    spec: &GaussianMixtureSpec,
    method: EntropyMethod,
    n: usize,
    seed: u64,
) -> Result<EntropyEstimate, MathError> {
    match method {
        EntropyMethod::Quadrature => {
            if spec.agents() != 1 {
                return Err(MathError::UnsupportedMethod);
            }
            Ok(EntropyEstimate {
                bits: Bits::from_rounded(posterior_entropy_quadrature(spec)),
                std_error: 0.0,
            })
        }
        EntropyMethod::MonteCarlo => {
            if n < 10_000 {
                return Err(MathError::TooFewSamples(n));
            }
            let (mean, se) = posterior_entropy_mc(spec, n, seed);
            Ok(EntropyEstimate { bits: Bits::from_rounded(mean), std_error: se })
        }
    }
}

fn posterior_entropy_quadrature(spec: &GaussianMixtureSpec) -> f64 {
    let sigma = spec.marginal_sigma(0);
    let means: Vec<f64> = (1..=spec.alphabet()).map(|l| spec.mean(l, 0)).collect();
    let lo = means.iter().cloned().fold(f64::INFINITY, f64::min) - 8.0 * sigma;
    let hi = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 8.0 * sigma;
    let (nodes, weights) = gauss_legendre(2048);
    let w = spec.weights();
    let mut acc = 0.0;
    for (&t, &wt) in nodes.iter().zip(weights.iter()) {
        // map [-1, 1] -> [lo, hi]
        let x = 0.5 * (hi - lo) * t + 0.5 * (hi + lo);
        // mixture density and posterior entropy at x
        let mut dens = 0.0;
        let mut post: Vec<f64> = Vec::with_capacity(means.len());
        for (l, &mu) in means.iter().enumerate() {
            let z = (x - mu) / sigma;
            let p = w[l] * libm::exp(-0.5 * z * z);
            post.push(p);
            dens += p;
        }
        let mut hent = 0.0;
        for p in &post {
            let q = p / dens;
            if q > 0.0 {
                hent -= q * libm::log2(q);
            }
        }
        let norm = dens / (sigma * libm::sqrt(2.0 * core::f64::consts::PI));
        acc += wt * norm * hent;
    }
    acc * 0.5 * (hi - lo)
}

fn posterior_entropy_mc(spec: &GaussianMixtureSpec, n: usize, seed: u64) -> (f64, f64) {
    let block = crate::source::sample(spec, n, seed).expect("spec validated by caller");
    let chol = spec.covariance_cholesky();
    let l = spec.agents();
    let m = spec.alphabet();
    let w = spec.weights();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut resid = Vec::with_capacity(l);
    let mut logp = Vec::with_capacity(m);
    for row in 0..n {
        let x = block.observation_row(row);
        logp.clear();
        let mut maxlp = f64::NEG_INFINITY;
        for label in 1..=m {
            resid.clear();
            for i in 0..l {
                resid.push(x[i] - spec.mean(label, i));
            }
            // log w_l - (1/2) r^T K^-1 r, common covariance so the log-det
            // term cancels in the posterior
            let quad = chol.quadratic_form(&resid);
            let lp = libm::log(w[label - 1]) - 0.5 * quad;
            maxlp = maxlp.max(lp);
            logp.push(lp);
        }
        let mut dens = 0.0;
        for lp in logp.iter_mut() {
            *lp = libm::exp(*lp - maxlp);
            dens += *lp;
        }
        let mut hent = 0.0;
        for &p in logp.iter() {
            let q = p / dens;
            if q > 0.0 {
                hent -= q * libm::log2(q);
            }
        }
        sum += hent;
        sumsq += hent * hent;
    }
    let mean = sum / n as f64;
    let var = (sumsq / n as f64 - mean * mean).max(0.0);
    (mean, libm::sqrt(var / n as f64))
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        // Chebyshev-like initial guess
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if libm::fabs(dx) < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Natural log to bits.
pub(crate) fn nats_to_bits(x: f64) -> f64 {
    x / LN2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn entropy_degenerate_and_uniform() {
        assert_eq!(binary_entropy(p(0.0)).get(), 0.0);
        assert_eq!(binary_entropy(p(1.0)).get(), 0.0);
        assert_abs_diff_eq!(binary_entropy(p(0.5)).get(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_at_0_11() {
        // high-precision evaluation of the defining formula
        assert_abs_diff_eq!(binary_entropy(p(0.11)).get(), 0.499915958164528, epsilon = 1e-9);
    }

    #[test]
    fn probability_domain_rejected() {
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(1.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }

    #[test]
    fn convolve_identity_absorbing_and_value() {
        assert_abs_diff_eq!(binary_convolve(p(0.3), p(0.0)).get(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(binary_convolve(p(0.3), p(0.5)).get(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(binary_convolve(p(0.2), p(0.3)).get(), 0.38, epsilon = 1e-15);
    }

    #[test]
    fn q_function_values() {
        assert_abs_diff_eq!(q_function(0.0).get(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(q_function(1.0).get(), 0.15865525393145707, epsilon = 1e-12);
        assert!(q_function(40.0).get() < 1e-300);
    }

    #[test]
    fn minimize_quadratic() {
        let (x, v) = minimize_scalar(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-9).unwrap();
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-8);
        assert!(v < 1e-15);
    }

    #[test]
    fn minimize_boundary() {
        let (x, _) = minimize_scalar(|x| x, 0.0, 1.0, 1e-9).unwrap();
        assert!(x < 1e-8);
    }

    #[test]
    fn minimize_rejects_bad_interval() {
        assert_eq!(
            minimize_scalar(|x| x, 1.0, 0.0, 1e-9).unwrap_err(),
            MathError::InvalidInterval
        );
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let integral: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x * x).sum();
        assert_abs_diff_eq!(integral, 2.0 / 3.0, epsilon = 1e-13);
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn posterior_entropy_equal_means_is_prior_entropy() {
        // all component means equal: the observation carries no information
        let spec = GaussianMixtureSpec::new(
            1,
            3,
            alloc::vec![0.5, 0.2, 0.3],
            crate::source::MeanLayout::Explicit(alloc::vec![
                alloc::vec![1.0],
                alloc::vec![1.0],
                alloc::vec![1.0]
            ]),
            alloc::vec![0.5],
        )
        .unwrap();
        let est = gm_posterior_entropy(&spec, EntropyMethod::Quadrature, 0, 0).unwrap();
        assert_abs_diff_eq!(est.bits.get(), 1.4854752972273344, epsilon = 1e-9);
    }

    #[test]
    fn posterior_entropy_vanishing_noise() {
        let spec = GaussianMixtureSpec::new(
            1,
            2,
            alloc::vec![0.5, 0.5],
            crate::source::MeanLayout::UnitLadder,
            alloc::vec![1e-6],
        )
        .unwrap();
        let est = gm_posterior_entropy(&spec, EntropyMethod::Quadrature, 0, 0).unwrap();
        assert!(est.bits.get() < 1e-9);
    }

    #[test]
    fn posterior_entropy_mc_matches_quadrature_single_agent() {
        let spec = GaussianMixtureSpec::new(
            1,
            2,
            alloc::vec![0.5, 0.5],
            crate::source::MeanLayout::CenteredPm1,
            alloc::vec![1.0],
        )
        .unwrap();
        let exact = gm_posterior_entropy(&spec, EntropyMethod::Quadrature, 0, 0).unwrap();
        let mc = gm_posterior_entropy(&spec, EntropyMethod::MonteCarlo, 100_000, 7).unwrap();
        assert!(
            (mc.bits.get() - exact.bits.get()).abs() < 3.0 * mc.std_error,
            "mc {} exact {} se {}",
            mc.bits.get(),
            exact.bits.get(),
            mc.std_error
        );
    }

    #[test]
    fn posterior_entropy_mc_deterministic() {
        let spec = GaussianMixtureSpec::example_one();
        let a = gm_posterior_entropy(&spec, EntropyMethod::MonteCarlo, 20_000, 11).unwrap();
        let b = gm_posterior_entropy(&spec, EntropyMethod::MonteCarlo, 20_000, 11).unwrap();
        assert_eq!(a.bits.get().to_bits(), b.bits.get().to_bits());
    }

    #[test]
    fn quadrature_rejected_for_multi_agent() {
        let spec = GaussianMixtureSpec::example_one();
        assert_eq!(
            gm_posterior_entropy(&spec, EntropyMethod::Quadrature, 0, 0).unwrap_err(),
            MathError::UnsupportedMethod
        );
    }
}
