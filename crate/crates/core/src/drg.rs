//! Distance-regular graphs: detection, intersection arrays, the tridiagonal
//! quotient matrix and the classical closed form for hitting times.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hitting::HittingVector;
use crate::labelings::Label;
use crate::linalg::Matrix;
use crate::partition::{quotient_matrix, Partition, QuotientMatrix};
use crate::scalar::Scalar;

/// `{b_0, …, b_{Δ-1}; c_1, …, c_Δ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

impl IntersectionArray {
    pub fn new(b: Vec<u64>, c: Vec<u64>) -> Result<Self> {
        let arr = IntersectionArray { b, c };
        arr.validate()?;
        Ok(arr)
    }

    fn validate(&self) -> Result<()> {
        let d = self.b.len();
        if d == 0 || self.c.len() != d {
            return Err(Error::InvalidArray(format!(
                "need equally many b and c entries, got {} and {}",
                self.b.len(),
                self.c.len()
            )));
        }
        if self.c[0] != 1 {
            return Err(Error::InvalidArray(format!(
                "c_1 = {}, expected 1",
                self.c[0]
            )));
        }
        if let Some(i) = self.b.iter().position(|&v| v == 0) {
            return Err(Error::InvalidArray(format!("b_{i} = 0")));
        }
        if let Some(i) = self.c.iter().position(|&v| v == 0) {
            return Err(Error::InvalidArray(format!("c_{} = 0", i + 1)));
        }
        for i in 0..=d {
            if self.try_a(i).is_none() {
                return Err(Error::InvalidArray(format!("a_{i} would be negative")));
            }
        }
        Ok(())
    }

    pub fn valency(&self) -> u64 {
        self.b[0]
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    /// `b_i` with `b_Δ = 0`.
    pub fn b(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i` with `c_0 = 0`.
    pub fn c(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    fn try_a(&self, i: usize) -> Option<u64> {
        self.valency()
            .checked_sub(self.b(i))?
            .checked_sub(self.c(i))
    }

    /// `a_i = k − b_i − c_i`.
    pub fn a(&self, i: usize) -> u64 {
        self.try_a(i).expect("validated array")
    }

    /// Sphere sizes `k_0 = 1`, `k_i = b_{i-1} k_{i-1} / c_i`.
    pub fn subconstituent_sizes(&self) -> Result<Vec<u64>> {
        let mut ks = vec![1u64];
        for i in 1..=self.diameter() {
            let num = self.b(i - 1) * ks[i - 1];
            if !num.is_multiple_of(self.c(i)) {
                return Err(Error::NonIntegralKi(i));
            }
            ks.push(num / self.c(i));
        }
        Ok(ks)
    }

    pub fn order(&self) -> Result<u64> {
        Ok(self.subconstituent_sizes()?.iter().sum())
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{}; {}}}", join(&self.b), join(&self.c))
    }
}

/// Witness that a graph is not distance-regular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DrgViolation {
    NotRegular {
        u: usize,
        v: usize,
        deg_u: usize,
        deg_v: usize,
    },
    Eccentricity {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    NotEquitable {
        vertex: usize,
        distance: usize,
        target: usize,
        u: usize,
        v: usize,
    },
    QuotientMismatch {
        vertex: usize,
        row: usize,
        col: usize,
        expected: u64,
        found: u64,
    },
}

impl fmt::Display for DrgViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DrgViolation::NotRegular { u, v, deg_u, deg_v } => {
                write!(f, "vertex {u} has degree {deg_u}, vertex {v} has degree {deg_v}")
            }
            DrgViolation::Eccentricity { vertex, expected, found } => write!(
                f,
                "vertex {vertex} has eccentricity {found}, vertex 0 has {expected}"
            ),
            DrgViolation::NotEquitable { vertex, distance, target, u, v } => write!(
                f,
                "from vertex {vertex}: {u} and {v} at distance {distance} differ in neighbours at distance {target}"
            ),
            DrgViolation::QuotientMismatch { vertex, row, col, expected, found } => write!(
                f,
                "from vertex {vertex}: quotient entry ({row},{col}) is {found}, vertex 0 has {expected}"
            ),
        }
    }
}

fn distance_quotient(g: &Graph, vertex: usize) -> Result<QuotientMatrix, DrgViolation> {
    let table = g.bfs_distances(vertex);
    let p = Partition::from_keys(table.dist.iter().map(|d| d.finite().expect("connected")));
    match quotient_matrix(g, &p) {
        Ok(q) => Ok(q),
        Err(Error::NotEquitable {
            block,
            target,
            u,
            v,
            ..
        }) => Err(DrgViolation::NotEquitable {
            vertex,
            distance: block,
            target,
            u,
            v,
        }),
        Err(e) => unreachable!("distance partition rejected: {e}"),
    }
}

/// Detects distance-regularity by checking the distance partition of every
/// vertex, and extracts `b_i = q_{i+1,i}`, `c_i = q_{i-1,i}`.
pub fn intersection_array(g: &Graph) -> Result<IntersectionArray> {
    let n = g.vertex_count();
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if n < 2 {
        return Err(Error::InvalidArray("a single vertex has diameter 0".into()));
    }
    let deg0 = g.degree(0);
    if let Some(v) = (1..n).find(|&v| g.degree(v) != deg0) {
        return Err(Error::NotDrg(DrgViolation::NotRegular {
            u: 0,
            v,
            deg_u: deg0,
            deg_v: g.degree(v),
        }));
    }

    let quotients: Vec<Result<QuotientMatrix, DrgViolation>> = (0..n)
        .into_par_iter()
        .map(|v| distance_quotient(g, v))
        .collect();
    let mut reference: Option<QuotientMatrix> = None;
    for (vertex, q) in quotients.into_iter().enumerate() {
        let q = q.map_err(Error::NotDrg)?;
        let Some(r) = &reference else {
            reference = Some(q);
            continue;
        };
        if q.order() != r.order() {
            return Err(Error::NotDrg(DrgViolation::Eccentricity {
                vertex,
                expected: r.order() - 1,
                found: q.order() - 1,
            }));
        }
        for i in 0..r.order() {
            for j in 0..r.order() {
                if q.get(i, j) != r.get(i, j) {
                    return Err(Error::NotDrg(DrgViolation::QuotientMismatch {
                        vertex,
                        row: i,
                        col: j,
                        expected: r.get(i, j),
                        found: q.get(i, j),
                    }));
                }
            }
        }
    }
    let q = reference.expect("at least one vertex");
    let d = q.order() - 1;
    let b = (0..d).map(|i| q.get(i + 1, i)).collect();
    let c = (1..=d).map(|i| q.get(i - 1, i)).collect();
    IntersectionArray::new(b, c)
}

/// Tridiagonal quotient: subdiagonal `b_{i-1}`, diagonal `a_i`,
/// superdiagonal `c_{i+1}`.
pub fn drg_quotient_matrix(arr: &IntersectionArray) -> Result<QuotientMatrix> {
    let d = arr.diameter();
    let mut q = Matrix::zeros(d + 1, d + 1);
    for i in 0..=d {
        q[(i, i)] = arr.a(i);
        if i < d {
            q[(i + 1, i)] = arr.b(i);
            q[(i, i + 1)] = arr.c(i + 1);
        }
    }
    let block_sizes = arr
        .subconstituent_sizes()?
        .into_iter()
        .map(|k| k as usize)
        .collect();
    Ok(QuotientMatrix {
        q,
        labels: (0..=d as i64).map(Label::Int).collect(),
        block_sizes,
    })
}

/// `h_i = Σ_{j=1}^{i} k / (k_{j-1} b_{j-1}) · Σ_{l=j}^{Δ} k_l`.
pub fn biggs_hitting<T: Scalar>(arr: &IntersectionArray) -> Result<HittingVector<T>> {
    let ks = arr.subconstituent_sizes()?;
    let d = arr.diameter();
    let k = T::from_count(arr.valency());
    let mut values = Vec::with_capacity(d);
    let mut acc = T::zero();
    for j in 1..=d {
        let tail: u64 = ks[j..].iter().sum();
        let denom = T::from_count(ks[j - 1] * arr.b(j - 1));
        acc = acc + k.clone() * T::from_count(tail) / denom;
        values.push(acc.clone());
    }
    Ok(HittingVector {
        labels: (1..=d as i64).map(Label::Int).collect(),
        values,
    })
}
