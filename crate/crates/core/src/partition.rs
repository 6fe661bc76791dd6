//! Equitable partitions, their quotient matrices and the induced block walk.
//!
//! Matrices follow the destination-row convention: `q[(i, j)]` is the number
//! of neighbours in block `i` of any vertex of block `j`, so column `j`
//! describes where a walker standing in block `j` can go next.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labelings::Label;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Ordered, non-empty, disjoint blocks covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; n];
        let mut blocks = blocks;
        for (b, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(Error::PartitionMismatch(format!("block {b} is empty")));
            }
            block.sort_unstable();
            for &v in block.iter() {
                if v >= n {
                    return Err(Error::PartitionMismatch(format!(
                        "vertex {v} is outside 0..{n}"
                    )));
                }
                if block_of[v] != usize::MAX {
                    return Err(Error::PartitionMismatch(format!(
                        "vertex {v} appears in more than one block"
                    )));
                }
                block_of[v] = b;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::PartitionMismatch(format!(
                "vertex {v} is not covered"
            )));
        }
        Ok(Partition { blocks, block_of })
    }

    /// Groups vertices by a key; blocks are ordered by key.
    pub fn from_keys<K: Ord>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        let mut n = 0;
        for (v, k) in keys.into_iter().enumerate() {
            groups.entry(k).or_default().push(v);
            n = v + 1;
        }
        Partition::new(n, groups.into_values().collect()).expect("keys yield a partition")
    }

    pub fn unit(n: usize) -> Self {
        Partition::new(n, vec![(0..n).collect()]).expect("non-empty vertex set")
    }

    /// `{{center}, V \ {center}}`.
    pub fn centered(n: usize, center: usize) -> Result<Self> {
        let rest: Vec<usize> = (0..n).filter(|&v| v != center).collect();
        let blocks = if rest.is_empty() {
            vec![vec![center]]
        } else {
            vec![vec![center], rest]
        };
        Partition::new(n, blocks)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Single centre vertex if block 0 is a singleton.
    pub fn center(&self) -> Option<usize> {
        match self.blocks[0].as_slice() {
            [o] => Some(*o),
            _ => None,
        }
    }

    pub fn to_json(&self) -> PartitionJson {
        PartitionJson {
            blocks: self.blocks.clone(),
        }
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.vertex_count() != g.vertex_count() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} vertices, graph has {}",
                self.vertex_count(),
                g.vertex_count()
            )));
        }
        Ok(())
    }

    /// Neighbour counts of `v` into every block.
    fn profile(&self, g: &Graph, v: usize) -> Vec<usize> {
        let mut counts = vec![0; self.blocks.len()];
        for &w in g.neighbors(v) {
            counts[self.block_of[w]] += 1;
        }
        counts
    }
}

/// Constant neighbour counts between blocks of an equitable partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMatrix {
    pub q: Matrix<u64>,
    pub labels: Vec<Label>,
    pub block_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub block_sizes: Vec<usize>,
    pub labels: Vec<Label>,
    pub q: Vec<Vec<u64>>,
}

/// A broken structural identity found by [`QuotientMatrix::lemma_violations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaViolation {
    /// Column sum differs from the degree of the block's members.
    Degree {
        column: usize,
        sum: u64,
        degree: usize,
    },
    /// `|V_i| q_ji != |V_j| q_ij`.
    EdgeCount { i: usize, j: usize },
}

impl QuotientMatrix {
    pub fn order(&self) -> usize {
        self.q.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.q[(i, j)]
    }

    pub fn column_sum(&self, j: usize) -> u64 {
        (0..self.order()).map(|i| self.q[(i, j)]).sum()
    }

    /// Lemma checks: column sums against the supplied per-block degree, and
    /// the edge-count balance between every pair of blocks.
    pub fn lemma_violations(&self, block_degree: &[usize]) -> Vec<LemmaViolation> {
        let mut out = Vec::new();
        for (j, &degree) in block_degree.iter().enumerate() {
            let sum = self.column_sum(j);
            if sum != degree as u64 {
                out.push(LemmaViolation::Degree {
                    column: j,
                    sum,
                    degree,
                });
            }
        }
        out.extend(self.edge_balance_violations());
        out
    }

    pub fn edge_balance_violations(&self) -> Vec<LemmaViolation> {
        let r = self.order();
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let lhs = self.block_sizes[i] as u64 * self.q[(j, i)];
                let rhs = self.block_sizes[j] as u64 * self.q[(i, j)];
                if lhs != rhs {
                    out.push(LemmaViolation::EdgeCount { i, j });
                }
            }
        }
        out
    }

    /// Same matrix with new block labels.
    pub fn relabeled(mut self, labels: Vec<Label>) -> Self {
        assert_eq!(labels.len(), self.order());
        self.labels = labels;
        self
    }

    /// `q` as an exact or floating matrix.
    pub fn to_scalar<T: Scalar>(&self) -> Matrix<T> {
        self.q.map(|&v| T::from_count(v))
    }

    pub fn to_json(&self) -> QuotientJson {
        QuotientJson {
            block_sizes: self.block_sizes.clone(),
            labels: self.labels.clone(),
            q: self.q.to_rows(),
        }
    }
}

/// Column-stochastic block walk `t_ij = q_ij / Σ_l q_lj`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<T> {
    pub t: Matrix<T>,
    pub labels: Vec<Label>,
}

fn index_labels(r: usize) -> Vec<Label> {
    (0..r as i64).map(Label::Int).collect()
}

pub fn is_equitable(g: &Graph, p: &Partition) -> Result<bool> {
    Ok(equitability_witness(g, p)?.is_none())
}

/// First pair of same-block vertices whose neighbour counts differ.
fn equitability_witness(g: &Graph, p: &Partition) -> Result<Option<Error>> {
    p.check_graph(g)?;
    for (b, block) in p.blocks.iter().enumerate() {
        let first = block[0];
        let reference = p.profile(g, first);
        for &v in &block[1..] {
            let counts = p.profile(g, v);
            if let Some(target) = (0..counts.len()).find(|&i| counts[i] != reference[i]) {
                return Ok(Some(Error::NotEquitable {
                    block: b,
                    target,
                    u: first,
                    v,
                    count_u: reference[target],
                    count_v: counts[target],
                }));
            }
        }
    }
    Ok(None)
}

pub fn quotient_matrix(g: &Graph, p: &Partition) -> Result<QuotientMatrix> {
    if let Some(witness) = equitability_witness(g, p)? {
        return Err(witness);
    }
    let r = p.block_count();
    let mut q = Matrix::zeros(r, r);
    for (j, block) in p.blocks.iter().enumerate() {
        for (i, count) in p.profile(g, block[0]).into_iter().enumerate() {
            q[(i, j)] = count as u64;
        }
    }
    Ok(QuotientMatrix {
        q,
        labels: index_labels(r),
        block_sizes: p.block_sizes(),
    })
}

/// Coarsest equitable partition refining `p0`.
///
/// Each round splits every block by the vector of neighbour counts into the
/// current blocks. Split pieces stay at their parent's position, ordered by
/// smallest vertex, so a block 0 centre stays block 0.
pub fn refine_to_equitable(g: &Graph, p0: &Partition) -> Result<Partition> {
    p0.check_graph(g)?;
    let mut current = p0.clone();
    loop {
        let mut blocks = Vec::with_capacity(current.block_count());
        for block in &current.blocks {
            let mut pieces: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for &v in block {
                pieces.entry(current.profile(g, v)).or_default().push(v);
            }
            let mut pieces: Vec<Vec<usize>> = pieces.into_values().collect();
            pieces.sort_by_key(|piece| piece[0]);
            blocks.extend(pieces);
        }
        let stable = blocks.len() == current.block_count();
        current = Partition::new(g.vertex_count(), blocks)?;
        if stable {
            return Ok(current);
        }
    }
}

pub fn transition_matrix<T: Scalar>(q: &QuotientMatrix) -> Result<TransitionMatrix<T>> {
    let r = q.order();
    let mut t = Matrix::zeros(r, r);
    for j in 0..r {
        let sum = q.column_sum(j);
        if sum == 0 {
            return Err(Error::IsolatedBlock(j));
        }
        let denom = T::from_count(sum);
        for i in 0..r {
            t[(i, j)] = T::from_count(q.q[(i, j)]) / denom.clone();
        }
    }
    Ok(TransitionMatrix {
        t,
        labels: q.labels.clone(),
    })
}
