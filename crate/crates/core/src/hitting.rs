//! Average hitting times: quotient-matrix solve, full-graph first-step
//! analysis and a seeded Monte Carlo estimator.
//!
//! All solves use the row-vector convention `H · (A⁻ − I) = −1`, where `A⁻`
//! is `A` with the row and column of the target label removed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labelings::{FEquitableCertificate, Label};
use crate::linalg::{solve_left, Matrix};
use crate::partition::{quotient_matrix, transition_matrix, Partition};
use crate::scalar::Scalar;

pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

/// Hitting time per non-target label; `h_{x_0} = 0` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingVector<T> {
    pub labels: Vec<Label>,
    pub values: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingJson {
    pub h: Vec<String>,
    pub h_float: Vec<f64>,
    pub labels: Vec<Label>,
}

impl<T: Scalar> HittingVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, label: &Label) -> Option<&T> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.values[i])
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Self {
        assert_eq!(labels.len(), self.values.len());
        self.labels = labels;
        self
    }

    pub fn to_json(&self) -> HittingJson {
        HittingJson {
            h: self.values.iter().map(Scalar::render).collect(),
            h_float: self.values.iter().map(Scalar::to_f64_lossy).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Solves `H · (A⁻ − I) = −1` for a square matrix indexed `x_0..x_r`.
pub fn solve_h<T: Scalar>(a: &Matrix<T>) -> Result<HittingVector<T>> {
    if !a.is_square() || a.rows() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "need a square matrix of order >= 2, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut m = a.without(0);
    for i in 0..m.rows() {
        m[(i, i)] = m[(i, i)].clone() - T::one();
    }
    let rhs = vec![-T::one(); m.rows()];
    let values = solve_left(&m, &rhs)?;
    Ok(HittingVector {
        labels: (1..a.rows() as i64).map(Label::Int).collect(),
        values,
    })
}

/// Hitting times of an f-equitable graph from its certificate: `solve_h(Q / k)`.
pub fn hitting_from_certificate<T: Scalar>(
    cert: &FEquitableCertificate,
) -> Result<HittingVector<T>> {
    if cert.valency == 0 {
        return Err(Error::SingularSystem);
    }
    let k = T::from_count(cert.valency);
    let a = cert.quotient.to_scalar::<T>().scaled(&(T::one() / k));
    Ok(solve_h(&a)?.with_labels(cert.labels()[1..].to_vec()))
}

/// Hitting times to the centre of a stabilized equitable partition, by block.
pub fn hitting_from_partition<T: Scalar>(g: &Graph, p: &Partition) -> Result<HittingVector<T>> {
    if p.center().is_none() {
        return Err(Error::NotStabilized(p.blocks()[0].len()));
    }
    let q = quotient_matrix(g, p)?;
    let t = transition_matrix::<T>(&q)?;
    solve_h(&t.t)
}

/// Exact per-vertex hitting times to `target` by first-step analysis:
/// `h_target = 0`, `deg(u)·h_u − Σ_{w∼u} h_w = deg(u)` otherwise.
pub fn exact_hitting_full<T: Scalar>(g: &Graph, target: usize) -> Result<Vec<T>> {
    g.check_vertex(target)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let index = |v: usize| if v < target { v } else { v - 1 };
    let mut m = Matrix::<i64>::zeros(n - 1, n - 1);
    let mut rhs = Vec::with_capacity(n - 1);
    for u in (0..n).filter(|&u| u != target) {
        let row = index(u);
        let deg = g.degree(u) as i64;
        m[(row, row)] = deg;
        for &w in g.neighbors(u).iter().filter(|&&w| w != target) {
            m[(row, index(w))] -= 1;
        }
        rhs.push(deg);
    }
    let solved = T::solve_integer(&m, &rhs)?;
    let mut h = Vec::with_capacity(n);
    h.extend(solved[..target].iter().cloned());
    h.push(T::zero());
    h.extend(solved[target..].iter().cloned());
    Ok(h)
}

/// Summary of a batch of simulated first-passage times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkEstimate {
    pub mean: f64,
    pub seed: u64,
    pub std_error: f64,
    pub step_cap: u64,
    pub trials: u64,
    pub truncated: u64,
}

/// Simple random walk from `source` until it first reaches `target`.
///
/// Trial `i` draws from ChaCha8 seeded with `seed` on stream `i`, so results
/// do not depend on thread scheduling. Walks longer than `step_cap` are
/// counted in `truncated` and left out of the mean.
pub fn mc_hitting(
    g: &Graph,
    source: usize,
    target: usize,
    trials: u64,
    seed: u64,
    step_cap: u64,
) -> Result<WalkEstimate> {
    g.check_vertex(source)?;
    g.check_vertex(target)?;
    if trials == 0 {
        return Err(Error::InvalidWalk("trials must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if source == target {
        return Ok(WalkEstimate {
            mean: 0.0,
            seed,
            std_error: 0.0,
            step_cap,
            trials,
            truncated: 0,
        });
    }

    let steps: Vec<Option<u64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            walk(g, source, target, step_cap, &mut rng)
        })
        .collect();

    let (mut count, mut sum, mut sum_sq) = (0u64, 0u128, 0u128);
    for s in steps.iter().flatten() {
        count += 1;
        sum += *s as u128;
        sum_sq += (*s as u128) * (*s as u128);
    }
    if count == 0 {
        return Err(Error::AllTruncated(trials));
    }
    let mean = sum as f64 / count as f64;
    let std_error = if count > 1 {
        let c = count as f64;
        let var = (sum_sq as f64 - (sum as f64) * (sum as f64) / c) / (c - 1.0);
        (var.max(0.0) / c).sqrt()
    } else {
        0.0
    };
    Ok(WalkEstimate {
        mean,
        seed,
        std_error,
        step_cap,
        trials,
        truncated: trials - count,
    })
}

fn walk(
    g: &Graph,
    source: usize,
    target: usize,
    step_cap: u64,
    rng: &mut ChaCha8Rng,
) -> Option<u64> {
    let mut at = source;
    let mut steps = 0;
    while at != target {
        if steps == step_cap {
            return None;
        }
        let nbrs = g.neighbors(at);
        at = nbrs[rng.gen_range(0..nbrs.len() as u32) as usize];
        steps += 1;
    }
    Some(steps)
}
