//! Monte-Carlo evaluation of the order-statistics bound on the greedy
//! algorithm's expected approximation ratio, and the seeded experiment grid
//! that measures per-algorithm ratios on random instances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{run_dynamics, AlgorithmKind};
use crate::error::{Error, Result};
use crate::instances::{calibrate_e_bar, sample_uniform_instance, DEFAULT_CALIBRATION_SAMPLES};

/// SplitMix64; gives every (seed, index, ...) tuple an independent stream so
/// results do not depend on thread count.
fn mix(mut state: u64) -> u64 {
    state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut state = 0x243f6a8885a308d3; // arbitrary nonzero start
    for &p in parts {
        state = mix(state ^ p);
    }
    state
}

/// Per-trial uniforms straight from the counter so trials are independent
/// and reproducible under any parallel schedule.
fn trial_uniforms(seed: u64, trial: u64, count: usize, out: &mut Vec<f64>) {
    out.clear();
    for idx in 0..count {
        let bits = mix(seed ^ mix(trial.wrapping_mul(0x10001).wrapping_add(idx as u64)));
        out.push((bits >> 11) as f64 / (1u64 << 53) as f64);
    }
}

/// Monte-Carlo estimate of the staying-creators bound: with `X_1 <= ... <=
/// X_c` sorted from `c` i.i.d. uniforms, `X_0 = -inf`, `X_{c+1} = +inf`,
/// estimates
///
/// `sum_{i=1}^{c-k+1} Pr( (X_i + X_{k+i})/2 >= k/c  and
///                        (X_{i-1} + X_{k+i-1})/2 <= 1 - k/c )`.
///
/// The events are counted per trial without assuming disjointness; the
/// returned standard error is that of the per-trial counts.
pub fn evaluate_bound_mc(c: usize, k: usize, trials: u64, seed: u64) -> Result<(f64, f64)> {
    if trials < 1 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    if !(2 * k > c && k < c) {
        return Err(Error::Precondition(format!("need c/2 < k < c, got c = {c}, k = {k}")));
    }
    let threshold = k as f64 / c as f64;
    const CHUNK: u64 = 1 << 14;
    let chunks = trials.div_ceil(CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut xs = Vec::with_capacity(c);
            let (mut sum, mut sumsq) = (0.0, 0.0);
            let hi = ((chunk + 1) * CHUNK).min(trials);
            for trial in chunk * CHUNK..hi {
                trial_uniforms(seed, trial, c, &mut xs);
                xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut count = 0u32;
                for i in 1..=c - k + 1 {
                    // 1-based order statistics with infinite sentinels.
                    let upper_ok = if k + i > c {
                        true
                    } else {
                        (xs[i - 1] + xs[k + i - 1]) / 2.0 >= threshold
                    };
                    let lower_ok = if i == 1 {
                        true
                    } else {
                        (xs[i - 2] + xs[k + i - 2]) / 2.0 <= 1.0 - threshold
                    };
                    if upper_ok && lower_ok {
                        count += 1;
                    }
                }
                let count = count as f64;
                sum += count;
                sumsq += count * count;
            }
            (sum, sumsq)
        })
        .collect();
    let (sum, sumsq) = partials
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let n = trials as f64;
    let mean = sum / n;
    let variance = (sumsq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Ok((mean, (variance / n).sqrt()))
}

/// One cell of an experiment grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridPoint {
    pub u: usize,
    pub c: usize,
    pub k: usize,
    pub a_bar: usize,
    pub dim: usize,
    /// Threshold multiplier: the instance threshold is `e_m` times the mean
    /// engagement of a random pair at this dimension.
    pub e_m: f64,
    pub algorithms: Vec<AlgorithmKind>,
    pub trials: u64,
}

/// Conditional mean approximation ratio of one algorithm at one grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: AlgorithmKind,
    pub mean_ratio: f64,
    pub ci_half_width: f64,
}

/// Results at one grid point. `eps_hat` is the fraction of trials whose
/// farsighted optimum was zero; those trials are excluded from the ratios.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub point: GridPoint,
    pub e_bar: f64,
    pub summaries: Vec<AlgorithmSummary>,
    pub eps_hat: f64,
    pub n_trials: u64,
    pub n_conditioned: u64,
}

/// Runs every grid point: sample `trials` instances, run the farsighted
/// baseline plus the requested algorithms, and average the ratios over
/// trials with a nonzero baseline. Deterministic in `seed` regardless of
/// thread count.
pub fn run_experiment_grid(points: &[GridPoint], seed: u64) -> Result<Vec<ExperimentResult>> {
    points
        .iter()
        .enumerate()
        .map(|(pi, point)| run_point(point, pi as u64, seed))
        .collect()
}

fn run_point(point: &GridPoint, point_index: u64, seed: u64) -> Result<ExperimentResult> {
    if point.c > crate::algorithms::FL_CREATOR_CAP {
        return Err(Error::ResourceLimit(format!(
            "grid point has {} creators; the exact baseline caps at {}",
            point.c,
            crate::algorithms::FL_CREATOR_CAP
        )));
    }
    let e_bar = calibrate_e_bar(
        point.dim,
        point.e_m,
        DEFAULT_CALIBRATION_SAMPLES,
        derive_seed(&[seed, point_index, u64::MAX]),
    )?;

    let per_trial: Vec<Result<Option<Vec<f64>>>> = (0..point.trials)
        .into_par_iter()
        .map(|trial| {
            let inst = sample_uniform_instance(
                point.u,
                point.c,
                point.k,
                point.a_bar,
                point.dim,
                e_bar,
                derive_seed(&[seed, point_index, trial]),
            )?;
            let fl = run_dynamics(&inst, AlgorithmKind::Fl)?.long_term_engagement;
            if fl <= 1e-12 {
                return Ok(None);
            }
            let ratios = point
                .algorithms
                .iter()
                .map(|&alg| {
                    Ok(run_dynamics(&inst, alg)?.long_term_engagement / fl)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(Some(ratios))
        })
        .collect();

    let mut conditioned: Vec<Vec<f64>> = vec![Vec::new(); point.algorithms.len()];
    let mut zeros = 0u64;
    for trial in per_trial {
        match trial? {
            None => zeros += 1,
            Some(ratios) => {
                for (slot, r) in conditioned.iter_mut().zip(ratios) {
                    slot.push(r);
                }
            }
        }
    }
    let n_conditioned = point.trials - zeros;
    let summaries = point
        .algorithms
        .iter()
        .zip(&conditioned)
        .map(|(&algorithm, ratios)| {
            let n = ratios.len() as f64;
            let mean = if ratios.is_empty() { f64::NAN } else { ratios.iter().sum::<f64>() / n };
            let var = if ratios.len() < 2 {
                0.0
            } else {
                ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1.0)
            };
            AlgorithmSummary {
                algorithm,
                mean_ratio: mean,
                ci_half_width: if ratios.is_empty() { f64::NAN } else { 1.96 * (var / n).sqrt() },
            }
        })
        .collect();
    Ok(ExperimentResult {
        point: point.clone(),
        e_bar,
        summaries,
        eps_hat: zeros as f64 / point.trials as f64,
        n_trials: point.trials,
        n_conditioned,
    })
}

/// Flattens results to CSV, one row per (point, algorithm). Numbers carry 17
/// significant digits so parsing them back reproduces the exact values.
pub fn summarize(results: &[ExperimentResult]) -> String {
    let mut out = String::from(
        "u,c,k,a_bar,dim,e_m,algorithm,mean_ratio,ci_half_width,eps_hat,n_trials,n_conditioned\n",
    );
    for res in results {
        for s in &res.summaries {
            out.push_str(&format!(
                "{},{},{},{},{},{:.16e},{},{:.16e},{:.16e},{:.16e},{},{}\n",
                res.point.u,
                res.point.c,
                res.point.k,
                res.point.a_bar,
                res.point.dim,
                res.point.e_m,
                s.algorithm,
                s.mean_ratio,
                s.ci_half_width,
                res.eps_hat,
                res.n_trials,
                res.n_conditioned,
            ));
        }
    }
    out
}
