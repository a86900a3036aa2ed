//! LDPC code construction and syndrome-based Slepian-Wolf coding.
//!
//! Codes are built by progressive edge growth (PEG): edges are added one at
//! a time, each connecting a variable to the check that is farthest from it
//! in the current graph (preferring unreached checks of low degree), which
//! keeps short cycles out at these block lengths. Compression is by
//! syndrome: the encoder sends `s = x H^T`; the decoder runs belief
//! propagation with the side information as channel priors and a syndrome
//! sign flip in the check update.

use alloc::vec::Vec;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use super::CodecError;
use crate::mathkit::Probability;

/// Degree profile of the variable nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum LdpcProfile {
    /// Every column has the same weight.
    Regular { col_weight: usize },
    /// `(degree, fraction_of_columns)` pairs; fractions must sum to 1.
    Irregular(Vec<(usize, f64)>),
}

impl LdpcProfile {
    /// Per-column degrees for a block length `n`, largest degrees first.
    fn column_degrees(&self, n: usize) -> Result<Vec<usize>, CodecError> {
        match self {
            LdpcProfile::Regular { col_weight } => {
                if *col_weight == 0 {
                    return Err(CodecError::InfeasibleProfile);
                }
                Ok(alloc::vec![*col_weight; n])
            }
            LdpcProfile::Irregular(pairs) => {
                let total: f64 = pairs.iter().map(|&(_, f)| f).sum();
                if pairs.is_empty()
                    || (total - 1.0).abs() > 1e-9
                    || pairs.iter().any(|&(d, f)| d == 0 || !(0.0..=1.0).contains(&f))
                {
                    return Err(CodecError::InfeasibleProfile);
                }
                let mut sorted = pairs.clone();
                sorted.sort_by(|a, b| b.0.cmp(&a.0));
                let mut degrees = Vec::with_capacity(n);
                for &(d, f) in &sorted {
                    let count = libm::round(f * n as f64) as usize;
                    for _ in 0..count {
                        if degrees.len() < n {
                            degrees.push(d);
                        }
                    }
                }
                let last = sorted.last().map(|&(d, _)| d).unwrap_or(1);
                while degrees.len() < n {
                    degrees.push(last);
                }
                Ok(degrees)
            }
        }
    }
}

/// Sparse parity-check matrix with adjacency stored both ways.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcCode {
    n: usize,
    m: usize,
    col_rows: Vec<Vec<u32>>,
    row_cols: Vec<Vec<u32>>,
    profile: LdpcProfile,
    seed: u64,
}

impl LdpcCode {
    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn syndrome_length(&self) -> usize {
        self.m
    }

    /// Compression rate `m / n` in bits per source bit.
    pub fn rate(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn profile(&self) -> &LdpcProfile {
        &self.profile
    }

    pub fn construction_seed(&self) -> u64 {
        self.seed
    }

    /// True if two columns share two rows, i.e. the graph has a 4-cycle.
    /// PEG placement avoids these at moderate block lengths, so girth >= 6.
    pub fn has_four_cycle(&self) -> bool {
        let mut seen = alloc::collections::BTreeSet::new();
        for rows in &self.col_rows {
            for a in 0..rows.len() {
                for b in (a + 1)..rows.len() {
                    let key = (rows[a].min(rows[b]), rows[a].max(rows[b]));
                    if !seen.insert(key) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Build an `m x n` parity-check matrix with `m = round(n * target_rate)`
/// by PEG placement, deterministically in `seed`.
pub fn build_ldpc(
    n: usize,
    target_rate: f64,
    profile: &LdpcProfile,
    seed: u64,
) -> Result<LdpcCode, CodecError> {
    if n < 1024 || !(target_rate > 0.0 && target_rate < 1.0) {
        return Err(CodecError::InvalidConfig("block length >= 1024 and rate in (0, 1) required"));
    }
    let m = (libm::round(n as f64 * target_rate) as usize).clamp(1, n - 1);
    let degrees = profile.column_degrees(n)?;
    if degrees.iter().any(|&d| d > m) {
        return Err(CodecError::InfeasibleProfile);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut col_rows: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
    let mut row_cols: Vec<Vec<u32>> = alloc::vec![Vec::new(); m];
    // scratch for the per-edge BFS
    let mut check_dist = alloc::vec![u32::MAX; m];
    let mut var_dist = alloc::vec![u32::MAX; n];
    let mut frontier: Vec<u32> = Vec::new();
    let mut next: Vec<u32> = Vec::new();
    let mut candidates: Vec<u32> = Vec::new();

    for col in 0..n {
        for edge in 0..degrees[col] {
            let chosen = if edge == 0 {
                // seed edge: any minimum-degree check
                pick_min_degree(&row_cols, (0..m as u32).filter(|&r| !col_rows[col].contains(&r)), &mut candidates, &mut rng)
            } else {
                // BFS from this variable over the current graph
                for d in check_dist.iter_mut() {
                    *d = u32::MAX;
                }
                for d in var_dist.iter_mut() {
                    *d = u32::MAX;
                }
                var_dist[col] = 0;
                frontier.clear();
                frontier.push(col as u32);
                let mut depth = 0u32;
                while !frontier.is_empty() {
                    next.clear();
                    for &v in &frontier {
                        for &r in &col_rows[v as usize] {
                            if check_dist[r as usize] == u32::MAX {
                                check_dist[r as usize] = depth + 1;
                                for &c in &row_cols[r as usize] {
                                    if var_dist[c as usize] == u32::MAX {
                                        var_dist[c as usize] = depth + 2;
                                        next.push(c);
                                    }
                                }
                            }
                        }
                    }
                    core::mem::swap(&mut frontier, &mut next);
                    depth += 2;
                }
                // prefer unreached checks; otherwise the farthest ones
                let unreached =
                    (0..m as u32).filter(|&r| check_dist[r as usize] == u32::MAX);
                if unreached.clone().next().is_some() {
                    pick_min_degree(&row_cols, unreached, &mut candidates, &mut rng)
                } else {
                    let max_d = check_dist
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| !col_rows[col].contains(&(r as u32)))
                        .map(|(_, &d)| d)
                        .max()
                        .ok_or(CodecError::InfeasibleProfile)?;
                    pick_min_degree(
                        &row_cols,
                        (0..m as u32).filter(|&r| {
                            check_dist[r as usize] == max_d && !col_rows[col].contains(&r)
                        }),
                        &mut candidates,
                        &mut rng,
                    )
                }
            }?;
            col_rows[col].push(chosen);
            row_cols[chosen as usize].push(col as u32);
        }
    }
    Ok(LdpcCode { n, m, col_rows, row_cols, profile: profile.clone(), seed })
}

fn pick_min_degree(
    row_cols: &[Vec<u32>],
    pool: impl Iterator<Item = u32>,
    candidates: &mut Vec<u32>,
    rng: &mut ChaCha12Rng,
) -> Result<u32, CodecError> {
    candidates.clear();
    let mut best = usize::MAX;
    for r in pool {
        let w = row_cols[r as usize].len();
        if w < best {
            best = w;
            candidates.clear();
            candidates.push(r);
        } else if w == best {
            candidates.push(r);
        }
    }
    if candidates.is_empty() {
        return Err(CodecError::InfeasibleProfile);
    }
    Ok(candidates[(rng.next_u64() % candidates.len() as u64) as usize])
}

/// Syndrome `s = x H^T` over GF(2).
pub fn sw_encode(bits: &[u8], code: &LdpcCode) -> Result<Vec<u8>, CodecError> {
    if bits.len() != code.n {
        return Err(CodecError::LengthMismatch { expected: code.n, got: bits.len() });
    }
    Ok(code
        .row_cols
        .iter()
        .map(|cols| cols.iter().fold(0u8, |acc, &c| acc ^ (bits[c as usize] & 1)))
        .collect())
}

/// Belief-propagation syndrome decoding with side information.
///
/// Variable priors are `(1 - 2 s_i) log((1-c)/c)` from the side-info bits
/// under a BSC(`crossover`) correlation model; the check update carries the
/// syndrome sign flip `tanh(L_out/2) = (-1)^syn prod tanh(L_in/2)`. Returns
/// the hard decision after the syndrome is satisfied or `max_iters` passes.
pub fn sw_decode(
    syndrome: &[u8],
    side_info: &[u8],
    crossover: Probability,
    code: &LdpcCode,
    max_iters: usize,
) -> Result<Vec<u8>, CodecError> {
    if syndrome.len() != code.m {
        return Err(CodecError::LengthMismatch { expected: code.m, got: syndrome.len() });
    }
    if side_info.len() != code.n {
        return Err(CodecError::LengthMismatch { expected: code.n, got: side_info.len() });
    }
    let c = crossover.get().clamp(1e-12, 0.5 - 1e-12);
    let llr0 = libm::log((1.0 - c) / c);
    let prior: Vec<f64> =
        side_info.iter().map(|&b| if b & 1 == 0 { llr0 } else { -llr0 }).collect();

    // check-to-variable messages, stored per row position
    let mut c2v: Vec<Vec<f64>> =
        code.row_cols.iter().map(|cols| alloc::vec![0.0; cols.len()]).collect();
    let mut var_total = prior.clone();
    let mut hard: Vec<u8> = side_info.to_vec();
    let mut tanh_buf: Vec<f64> = Vec::new();

    for _ in 0..max_iters {
        // check pass
        for (j, cols) in code.row_cols.iter().enumerate() {
            tanh_buf.clear();
            let mut prod = if syndrome[j] & 1 == 1 { -1.0 } else { 1.0 };
            let mut zeros = 0usize;
            for (pos, &cidx) in cols.iter().enumerate() {
                let v2c = var_total[cidx as usize] - c2v[j][pos];
                let t = libm::tanh(0.5 * v2c);
                tanh_buf.push(t);
                if libm::fabs(t) < 1e-12 {
                    zeros += 1;
                } else {
                    prod *= t;
                }
            }
            for (pos, &t) in tanh_buf.iter().enumerate() {
                let ex = if zeros > 1 || (zeros == 1 && libm::fabs(t) >= 1e-12) {
                    0.0
                } else if zeros == 1 {
                    prod
                } else {
                    prod / t
                };
                c2v[j][pos] = 2.0 * libm::atanh(ex.clamp(-(1.0 - 1e-12), 1.0 - 1e-12));
            }
        }
        // variable pass
        var_total.copy_from_slice(&prior);
        for (j, cols) in code.row_cols.iter().enumerate() {
            for (pos, &cidx) in cols.iter().enumerate() {
                var_total[cidx as usize] += c2v[j][pos];
            }
        }
        for (i, &t) in var_total.iter().enumerate() {
            hard[i] = if t < 0.0 { 1 } else { 0 };
        }
        let satisfied = code.row_cols.iter().enumerate().all(|(j, cols)| {
            cols.iter().fold(0u8, |acc, &c| acc ^ hard[c as usize]) == syndrome[j]
        });
        if satisfied {
            break;
        }
    }
    Ok(hard)
}
