//! Achievable (inner) bound on the sum rate for the symmetric binary
//! two-agent case, via the detect-and-compress argument: each agent detects
//! its own label (flip probability `p_i`), passes it through a binary test
//! channel with flip probability `d_i`, Slepian-Wolf codes the result, and
//! separately quantizes its observation at the Gaussian rate
//! `(1/2) log2(sigma_i^2 / D_i)`.
//!
//! Writing `P = p_1 * p_2` and `D = d_1 * d_2` (binary convolutions), the
//! sum rate is `1 + H2(P*D) - H2(d_1) - H2(d_2) + sum_i (1/2) log2(sigma_i^2
//! / D_i)` subject to the semantic feasibility constraint
//! `sum_i H2(p_i*d_i) - H2(P*D) <= D_S`.

use alloc::vec::Vec;
use core::fmt;

use crate::mathkit::{bconv, h2, minimize_scalar, Bits, MathError};
use crate::outer::DistortionBudget;
use crate::source::{per_agent_flip_prob, GaussianMixtureSpec, SourceError};

/// Errors from the inner-bound computations.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerError {
    /// The bound is proven only for two agents, binary alphabet, uniform
    /// weights.
    UnsupportedShape,
    /// No test-channel pair satisfies the semantic constraint: `D_S` is
    /// below the scheme's floor.
    InfeasibleBudget { floor: f64 },
    /// An argument fell outside `[0, 1/2]`.
    Domain(f64),
    BudgetOutOfRange,
    Source(SourceError),
    Math(MathError),
}

impl fmt::Display for InnerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerError::UnsupportedShape => write!(
                f,
                "inner bound requires two agents, a binary alphabet, and uniform weights"
            ),
            InnerError::InfeasibleBudget { floor } => {
                write!(f, "semantic budget below the scheme floor {floor}")
            }
            InnerError::Domain(v) => write!(f, "argument {v} outside [0, 1/2]"),
            InnerError::BudgetOutOfRange => write!(f, "budget outside the admissible box"),
            InnerError::Source(e) => write!(f, "source error: {e}"),
            InnerError::Math(e) => write!(f, "math error: {e}"),
        }
    }
}

impl core::error::Error for InnerError {}

impl From<SourceError> for InnerError {
    fn from(e: SourceError) -> Self {
        InnerError::Source(e)
    }
}

/// Inner-bound value (coding overhead excluded, i.e. the large-block limit)
/// with its minimizing test channels and the per-agent rate split.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerBoundResult {
    pub rate: Bits,
    /// Test-channel flip probabilities, in `(0, 1/2]`.
    pub d: (f64, f64),
    /// `D_S` minus the semantic mismatch at the optimum; non-negative.
    pub constraint_slack: Bits,
    /// Per agent: (label rate, quantizer rate), at the corner where agent 1
    /// sends its label stream at full entropy.
    pub per_agent: [(Bits, Bits); 2],
}

/// Semantic mismatch `H2(p1*d1) + H2(p2*d2) - H2((p1*p2)*(d1*d2))`: the
/// conditional label entropy the decoder cannot remove, measured against
/// the budget `D_S`.
pub fn semantic_mismatch(d1: f64, d2: f64, p1: f64, p2: f64) -> Result<Bits, InnerError> {
    for v in [d1, d2, p1, p2] {
        if !(0.0..=0.5).contains(&v) {
            return Err(InnerError::Domain(v));
        }
    }
    Ok(Bits::from_rounded(mismatch_raw(d1, d2, p1, p2)))
}

#[inline]
fn mismatch_raw(d1: f64, d2: f64, p1: f64, p2: f64) -> f64 {
    h2(bconv(p1, d1)) + h2(bconv(p2, d2)) - h2(bconv(bconv(p1, p2), bconv(d1, d2)))
}

#[inline]
fn label_sum_rate(d1: f64, d2: f64, p1: f64, p2: f64) -> f64 {
    1.0 + h2(bconv(bconv(p1, p2), bconv(d1, d2))) - h2(d1) - h2(d2)
}

fn flip_probs(spec: &GaussianMixtureSpec) -> Result<(f64, f64), InnerError> {
    if spec.agents() != 2
        || spec.alphabet() != 2
        || (spec.weights()[0] - 0.5).abs() > 1e-12
    {
        return Err(InnerError::UnsupportedShape);
    }
    let p1 = per_agent_flip_prob(spec, 0)?.get();
    let p2 = per_agent_flip_prob(spec, 1)?.get();
    Ok((p1, p2))
}

fn quantizer_rates(
    budget: &DistortionBudget,
    spec: &GaussianMixtureSpec,
) -> Result<(f64, f64), InnerError> {
    if budget.d_x.len() != 2 {
        return Err(InnerError::BudgetOutOfRange);
    }
    let mut out = [0.0; 2];
    for i in 0..2 {
        let var = spec.covariance(i, i);
        if !(budget.d_x[i] > 0.0) || budget.d_x[i] > var + 1e-12 {
            return Err(InnerError::BudgetOutOfRange);
        }
        out[i] = 0.5 * libm::log2(var / budget.d_x[i]);
    }
    Ok((out[0], out[1]))
}

/// Minimize the inner-bound objective over the test channels on a 512x512
/// feasibility-masked grid, then refine locally to 1e-6.
pub fn inner_bound(
    budget: &DistortionBudget,
    spec: &GaussianMixtureSpec,
) -> Result<InnerBoundResult, InnerError> {
    let (p1, p2) = flip_probs(spec)?;
    let (r1q, r2q) = quantizer_rates(budget, spec)?;
    let d_s = budget.d_s;

    let feasible = |d1: f64, d2: f64| mismatch_raw(d1, d2, p1, p2) <= d_s + 1e-12;
    let objective = |d1: f64, d2: f64| label_sum_rate(d1, d2, p1, p2);

    // coarse pass over (0, 1/2]^2
    const GRID: usize = 512;
    let coarse: Vec<f64> =
        (0..GRID).map(|j| 0.5 * (j + 1) as f64 / GRID as f64).collect();
    let mut best: Option<(f64, f64, f64)> = None;
    for &d1 in &coarse {
        for &d2 in &coarse {
            if feasible(d1, d2) {
                let v = objective(d1, d2);
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((d1, d2, v));
                }
            }
        }
    }
    let (mut b1, mut b2, mut bv) = match best {
        Some(t) => t,
        None => {
            // the mismatch shrinks as the test channels sharpen, so its
            // floor over the closed domain sits at d = 0
            let floor = mismatch_raw(0.0, 0.0, p1, p2);
            if d_s + 1e-12 < floor {
                return Err(InnerError::InfeasibleBudget { floor });
            }
            // the budget sits between the floor and the coarse grid's
            // resolution; seed from the sharpest symmetric feasible channel
            let (mut lo, mut hi) = (0.0, 0.5 / GRID as f64);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid, mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let d = lo.max(1e-12);
            (d, d, objective(d, d))
        }
    };

    // two local refinement passes around the best cell
    let mut half_window = 0.5 / GRID as f64;
    for _ in 0..2 {
        const FINE: usize = 100;
        let lo1 = (b1 - half_window).max(1e-9);
        let hi1 = (b1 + half_window).min(0.5);
        let lo2 = (b2 - half_window).max(1e-9);
        let hi2 = (b2 + half_window).min(0.5);
        for i in 0..FINE {
            let d1 = lo1 + (hi1 - lo1) * i as f64 / (FINE - 1) as f64;
            for j in 0..FINE {
                let d2 = lo2 + (hi2 - lo2) * j as f64 / (FINE - 1) as f64;
                if feasible(d1, d2) {
                    let v = objective(d1, d2);
                    if v < bv {
                        bv = v;
                        b1 = d1;
                        b2 = d2;
                    }
                }
            }
        }
        half_window *= 2.0 / FINE as f64;
    }

    // nested polish: the minimum sits in a shallow valley along the
    // feasibility boundary, often at asymmetric test channels, which a
    // local window around the grid optimum tracks poorly. Profile out d2
    // for each d1 (the feasible d2 form an interval whose upper end is the
    // boundary) and minimize the profile in d1.
    let profile = |d1: f64| -> (f64, f64) {
        let g = |d2: f64| mismatch_raw(d1, d2, p1, p2);
        let upper = if g(0.5) <= d_s + 1e-12 {
            0.5
        } else {
            let (mut lo, mut hi) = (0.0, 0.5);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if g(mid) <= d_s + 1e-12 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        if upper <= 1e-9 {
            return (upper, f64::INFINITY);
        }
        match minimize_scalar(|d2| objective(d1, d2), 1e-9, upper, 1e-12) {
            Ok((x, v)) => (x, v),
            Err(_) => (upper, f64::INFINITY),
        }
    };
    if let Ok((x1, _)) = minimize_scalar(|d1| profile(d1).1, 1e-9, 0.5, 1e-10) {
        let (x2, v) = profile(x1);
        if v < bv && feasible(x1, x2) {
            b1 = x1;
            b2 = x2;
            bv = v;
        }
    }

    let slack = d_s - mismatch_raw(b1, b2, p1, p2);
    let joint = h2(bconv(bconv(p1, p2), bconv(b1, b2)));
    Ok(InnerBoundResult {
        rate: Bits::from_rounded(bv + r1q + r2q),
        d: (b1, b2),
        constraint_slack: Bits::from_rounded(slack),
        per_agent: [
            (Bits::from_rounded(1.0 - h2(b1)), Bits::from_rounded(r1q)),
            (Bits::from_rounded(joint - h2(b2)), Bits::from_rounded(r2q)),
        ],
    })
}

/// Boundary of achievable per-agent rate pairs at the optimal test
/// channels: the two Slepian-Wolf corner points and their time-sharing
/// segment, shifted by the fixed per-agent quantizer rates.
pub fn rate_allocation(
    budget: &DistortionBudget,
    spec: &GaussianMixtureSpec,
    sweep_points: usize,
) -> Result<Vec<(Bits, Bits)>, InnerError> {
    let (p1, p2) = flip_probs(spec)?;
    let opt = inner_bound(budget, spec)?;
    let (d1, d2) = opt.d;
    let (r1q, r2q) = quantizer_rates(budget, spec)?;
    let joint = h2(bconv(bconv(p1, p2), bconv(d1, d2)));
    // corner where agent 1 carries its label stream at full entropy
    let c1 = (1.0 - h2(d1) + r1q, joint - h2(d2) + r2q);
    // mirrored corner
    let c2 = (joint - h2(d1) + r1q, 1.0 - h2(d2) + r2q);
    let n = sweep_points.max(2);
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let t = j as f64 / (n - 1) as f64;
        let r1 = c1.0 + t * (c2.0 - c1.0);
        let r2 = c1.1 + t * (c2.1 - c1.1);
        out.push((Bits::from_rounded(r1), Bits::from_rounded(r2)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::qfn;
    use approx::assert_abs_diff_eq;

    fn vc_spec() -> GaussianMixtureSpec {
        GaussianMixtureSpec::symmetric_binary(0.25).unwrap()
    }

    fn budget(d_s: f64, d1: f64, d2: f64) -> DistortionBudget {
        DistortionBudget::new(d_s, alloc::vec![d1, d2]).unwrap()
    }

    #[test]
    fn mismatch_absorbing_channels() {
        let v = semantic_mismatch(0.5, 0.5, 0.1, 0.2).unwrap().get();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mismatch_nonnegative_cases() {
        // clean detection: mismatch is the redundancy of two noisy copies
        let v = semantic_mismatch(0.1, 0.1, 0.0, 0.0).unwrap().get();
        let expect = 2.0 * h2(0.1) - h2(bconv(0.1, 0.1));
        assert_abs_diff_eq!(v, expect, epsilon = 1e-12);
        assert!(v >= 0.0);
        // no test channel: the floor 2 H2(p) - H2(p*p)
        let p = qfn(1.0 / 0.5);
        let floor = semantic_mismatch(0.0, 0.0, p, p).unwrap().get();
        assert_abs_diff_eq!(floor, 2.0 * h2(p) - h2(bconv(p, p)), epsilon = 1e-12);
    }

    #[test]
    fn mismatch_domain_checked() {
        assert!(matches!(semantic_mismatch(0.6, 0.1, 0.1, 0.1), Err(InnerError::Domain(_))));
    }

    #[test]
    fn slack_budget_hits_gaussian_rates() {
        // D_S >= 1: the semantic constraint is slack and the optimum sits
        // at the absorbing point d = 1/2
        let spec = vc_spec();
        let res = inner_bound(&budget(1.0, 0.1, 0.05), &spec).unwrap();
        let expect = 0.5 * libm::log2(0.25 / 0.1) + 0.5 * libm::log2(0.25 / 0.05);
        assert_abs_diff_eq!(res.rate.get(), expect, epsilon = 1e-6);
        assert!(res.d.0 > 0.5 - 1e-3 && res.d.1 > 0.5 - 1e-3);
    }

    #[test]
    fn infeasible_budget_reports_floor() {
        let spec = vc_spec();
        let err = inner_bound(&budget(0.01, 0.2, 0.2), &spec).unwrap_err();
        let InnerError::InfeasibleBudget { floor } = err else { panic!("expected infeasible") };
        let p = qfn(2.0);
        assert_abs_diff_eq!(floor, 2.0 * h2(p) - h2(bconv(p, p)), epsilon = 1e-9);
        // the detection floor at sigma^2 = 0.25 is ~0.050827, so a semantic
        // budget of exactly 0.05 is (narrowly) infeasible as well
        assert!(floor > 0.05);
        assert!(matches!(
            inner_bound(&budget(0.05, 0.2, 0.2), &spec),
            Err(InnerError::InfeasibleBudget { .. })
        ));
    }

    #[test]
    fn unsupported_shapes_rejected() {
        let ex1 = GaussianMixtureSpec::example_one();
        assert!(matches!(
            inner_bound(&budget(0.5, 0.2, 0.2), &ex1),
            Err(InnerError::UnsupportedShape)
        ));
    }

    #[test]
    fn optimizer_matches_brute_force_at_vc_budget() {
        let spec = vc_spec();
        let res = inner_bound(&budget(0.06, 0.2, 0.2), &spec).unwrap();
        let p = qfn(2.0);
        // dense-grid oracle: its feasible points are a subset of the search
        // space, so the optimizer can only improve on it (the constraint
        // pins the optimum near d ~ 0.004 here, between grid points)
        let n = 600;
        let mut best = f64::INFINITY;
        for i in 0..n {
            let d1 = 0.5 * (i + 1) as f64 / n as f64;
            for j in 0..n {
                let d2 = 0.5 * (j + 1) as f64 / n as f64;
                if mismatch_raw(d1, d2, p, p) <= 0.06 + 1e-12 {
                    best = best.min(label_sum_rate(d1, d2, p, p));
                }
            }
        }
        let quant = 2.0 * 0.5 * libm::log2(0.25 / 0.2);
        assert!(res.rate.get() <= best + quant + 1e-9, "res {} oracle {}", res.rate.get(), best + quant);
        assert!(res.rate.get() >= best + quant - 5e-3);
        assert!(res.constraint_slack.get() >= 0.0);
    }

    #[test]
    fn optimizer_matches_continuous_oracle() {
        // label-part optima from an independent high-precision constrained
        // optimization (boundary root-solve plus 2-D refinement); for the
        // looser budgets the optimum is asymmetric with one channel
        // absorbed at d = 1/2
        let spec = vc_spec();
        let quant = 2.0 * 0.5 * libm::log2(0.25 / 0.2);
        let cases = [
            (0.06, 1.2187110213),
            (0.08, 1.1611532238),
            (0.10, 1.1168129196),
            (0.15, 1.0128287721),
            (0.20, 0.9274519303),
            (0.30, 0.7959592667),
            (0.50, 0.5587478083),
        ];
        for (d_s, label_part) in cases {
            let res = inner_bound(&budget(d_s, 0.2, 0.2), &spec).unwrap();
            assert!(
                (res.rate.get() - (label_part + quant)).abs() < 1e-4,
                "D_S {d_s}: res {} oracle {}",
                res.rate.get(),
                label_part + quant
            );
        }
    }

    #[test]
    fn per_agent_split_sums_to_rate() {
        let spec = vc_spec();
        let res = inner_bound(&budget(0.06, 0.2, 0.2), &spec).unwrap();
        let sum: f64 = res.per_agent.iter().map(|(a, b)| a.get() + b.get()).sum();
        assert_abs_diff_eq!(sum, res.rate.get(), epsilon = 1e-9);
    }

    #[test]
    fn allocation_endpoints_sum_equal() {
        let spec = vc_spec();
        let curve = rate_allocation(&budget(0.06, 0.2, 0.2), &spec, 33).unwrap();
        let first = curve.first().unwrap();
        let last = curve.last().unwrap();
        let inner = inner_bound(&budget(0.06, 0.2, 0.2), &spec).unwrap().rate.get();
        assert_abs_diff_eq!(first.0.get() + first.1.get(), inner, epsilon = 1e-6);
        assert_abs_diff_eq!(last.0.get() + last.1.get(), inner, epsilon = 1e-6);
        // the corners trade the joint-entropy term between the agents
        assert!(first.0.get() > last.0.get());
        assert!(first.1.get() < last.1.get());
    }

    #[test]
    fn monotone_in_budgets() {
        let spec = vc_spec();
        let r_tight = inner_bound(&budget(0.06, 0.2, 0.2), &spec).unwrap().rate.get();
        let r_loose = inner_bound(&budget(0.2, 0.2, 0.2), &spec).unwrap().rate.get();
        assert!(r_loose <= r_tight + 1e-9);
        let r_fine = inner_bound(&budget(0.06, 0.1, 0.2), &spec).unwrap().rate.get();
        assert!(r_fine > r_tight);
    }
}
