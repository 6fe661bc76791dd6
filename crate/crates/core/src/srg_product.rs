//! Strongly regular graphs and hitting times on Cartesian products of two
//! of them.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::drg::{drg_quotient_matrix, intersection_array, IntersectionArray};
use crate::error::{Error, Result};
use crate::graph::{Distance, Graph};
use crate::labelings::Label;
use crate::linalg::Matrix;
use crate::partition::QuotientMatrix;
use crate::scalar::ratio;
use crate::Rational;

/// `(n, k, a, c)`: order, valency, common neighbours of adjacent and of
/// non-adjacent pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: u64,
    pub k: u64,
    pub a: u64,
    pub c: u64,
}

impl SrgParams {
    pub fn new(n: u64, k: u64, a: u64, c: u64) -> Result<Self> {
        if k == 0 || c == 0 {
            return Err(Error::InvalidSrgParams("k and c must be positive".into()));
        }
        if a + 1 > k || k + 1 > n {
            return Err(Error::InvalidSrgParams(format!(
                "({n},{k},{a},{c}) violates a < k < n"
            )));
        }
        if k * (k - a - 1) != (n - k - 1) * c {
            return Err(Error::InvalidSrgParams(format!(
                "k(k-a-1) = {} but (n-k-1)c = {}",
                k * (k - a - 1),
                (n - k - 1) * c
            )));
        }
        if c > k {
            return Err(Error::InvalidSrgParams(format!("c = {c} exceeds k = {k}")));
        }
        Ok(SrgParams { n, k, a, c })
    }

    /// `{k, k − a − 1; 1, c}`.
    pub fn intersection_array(&self) -> IntersectionArray {
        IntersectionArray::new(vec![self.k, self.k - self.a - 1], vec![1, self.c])
            .expect("feasible parameters give a valid array")
    }

    /// 3×3 distance quotient matrix.
    pub fn quotient(&self) -> QuotientMatrix {
        drg_quotient_matrix(&self.intersection_array()).expect("feasible parameters")
    }
}

pub fn srg_params(g: &Graph) -> Result<SrgParams> {
    let arr = match intersection_array(g) {
        Ok(arr) => arr,
        Err(Error::NotDrg(v)) => return Err(Error::NotSrg(format!("not distance-regular: {v}"))),
        Err(e) => return Err(e),
    };
    if arr.diameter() != 2 {
        return Err(Error::NotSrg(format!(
            "diameter is {}, not 2",
            arr.diameter()
        )));
    }
    let k = arr.valency();
    SrgParams::new(g.vertex_count() as u64, k, k - arr.b(1) - 1, arr.c(2))
}

/// Labels `(i, j)` for `i, j ∈ {0,1,2}`, first factor major.
pub fn product_labels() -> Vec<Label> {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| Label::pair(Label::Int(i), Label::Int(j))))
        .collect()
}

/// The 9×9 quotient of `G₁ × G₂` under `(d_{G₁}, d_{G₂})`, entry by entry.
pub fn product_quotient(p1: &SrgParams, p2: &SrgParams) -> QuotientMatrix {
    let (k1, a1, c1) = (p1.k as i64, p1.a as i64, p1.c as i64);
    let (k2, a2, c2) = (p2.k as i64, p2.a as i64, p2.c as i64);
    #[rustfmt::skip]
    let rows: Vec<Vec<i64>> = vec![
        vec![0, 1, 0, 1, 0, 0, 0, 0, 0],
        vec![k2, a2, c2, 0, 1, 0, 0, 0, 0],
        vec![0, -a2 + k2 - 1, k2 - c2, 0, 0, 1, 0, 0, 0],
        vec![k1, 0, 0, a1, 1, 0, c1, 0, 0],
        vec![0, k1, 0, k2, a1 + a2, c2, 0, c1, 0],
        vec![0, 0, k1, 0, -a2 + k2 - 1, a1 - c2 + k2, 0, 0, c1],
        vec![0, 0, 0, -a1 + k1 - 1, 0, 0, k1 - c1, 1, 0],
        vec![0, 0, 0, 0, -a1 + k1 - 1, 0, k2, a2 - c1 + k1, c2],
        vec![0, 0, 0, 0, 0, -a1 + k1 - 1, 0, -a2 + k2 - 1, -c1 - c2 + k1 + k2],
    ];
    let q = Matrix::from_rows(rows)
        .expect("square")
        .map(|&v| u64::try_from(v).expect("feasible parameters give non-negative entries"));
    let s1 = p1
        .intersection_array()
        .subconstituent_sizes()
        .expect("integral");
    let s2 = p2
        .intersection_array()
        .subconstituent_sizes()
        .expect("integral");
    let block_sizes = s1
        .iter()
        .flat_map(|&x| s2.iter().map(move |&y| (x * y) as usize))
        .collect();
    QuotientMatrix {
        q,
        labels: product_labels(),
        block_sizes,
    }
}

/// `Q₁ ⊗ I₃ + I₃ ⊗ Q₂`.
pub fn kronecker_quotient(p1: &SrgParams, p2: &SrgParams) -> Matrix<u64> {
    p1.quotient().q.kron_sum(&p2.quotient().q)
}

/// Closed-form hitting times on `G × G`, by pair case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareHitting {
    pub d1: Rational,
    pub d2_same_coordinate: Rational,
    pub d2_mixed: Rational,
    pub d3: Rational,
    pub d4: Rational,
}

impl SquareHitting {
    pub fn get(&self, case: PairCase) -> Rational {
        match case {
            PairCase::Equal => Rational::zero(),
            PairCase::D1 => self.d1.clone(),
            PairCase::D2SameCoordinate => self.d2_same_coordinate.clone(),
            PairCase::D2Mixed => self.d2_mixed.clone(),
            PairCase::D3 => self.d3.clone(),
            PairCase::D4 => self.d4.clone(),
        }
    }

    pub fn cases(&self) -> [(PairCase, Rational); 5] {
        [
            PairCase::D1,
            PairCase::D2SameCoordinate,
            PairCase::D2Mixed,
            PairCase::D3,
            PairCase::D4,
        ]
        .map(|c| (c, self.get(c)))
    }
}

pub fn square_hitting_closed_form(p: &SrgParams) -> Result<SquareHitting> {
    let (n, k, a, c) = (p.n as i64, p.k as i64, p.a as i64, p.c as i64);
    let base = -a + c + 2 * k;
    let denom = c * base;
    if denom == 0 {
        return Err(Error::DegenerateDenominator);
    }
    let n2 = n * n;
    let m = n2 + n - 2;
    let d2_i = -c * (n2 - 1) * (a - 2 * k - 1) + c * c * (n2 - 1) + k * (k + n + 1);
    let d2_ii = -a * m + c * m + 2 * k * n2 + k * n - 4 * k + n2 - n;
    let d3 = c * (-a * m + k * (2 * n2 + n - 4) + n2 - 1) + c * c * m + k * (k + n + 1);
    let d4 = c * (-a * m + k * (2 * n2 + n - 4) + n2 + n - 2) + c * c * m + k * (2 * k + n + 2);
    Ok(SquareHitting {
        d1: ratio(n2 - 1, 1),
        d2_same_coordinate: ratio(d2_i, denom),
        d2_mixed: ratio(d2_ii, base),
        d3: ratio(d3, denom),
        d4: ratio(d4, denom),
    })
}

/// Case of a pair of product vertices for the `G × G` closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PairCase {
    Equal,
    D1,
    /// Distance 2 with one coordinate equal.
    D2SameCoordinate,
    /// Distance 2 with both coordinates at distance 1.
    D2Mixed,
    D3,
    D4,
}

impl PairCase {
    /// From componentwise factor distances, each in `0..=2`.
    pub fn from_distances(d1: usize, d2: usize) -> Option<PairCase> {
        if d1 > 2 || d2 > 2 {
            return None;
        }
        Some(match (d1 + d2, d1 == 0 || d2 == 0) {
            (0, _) => PairCase::Equal,
            (1, _) => PairCase::D1,
            (2, true) => PairCase::D2SameCoordinate,
            (2, false) => PairCase::D2Mixed,
            (3, _) => PairCase::D3,
            _ => PairCase::D4,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            PairCase::Equal => "equal",
            PairCase::D1 => "d1",
            PairCase::D2SameCoordinate => "d2_i",
            PairCase::D2Mixed => "d2_ii",
            PairCase::D3 => "d3",
            PairCase::D4 => "d4",
        }
    }
}

/// Classifies `(u, v)` in `g1 × g2` (vertices encoded `a * n2 + b`).
pub fn classify_pair(g1: &Graph, g2: &Graph, u: usize, v: usize) -> Result<PairCase> {
    let n2 = g2.vertex_count();
    let product_n = g1.vertex_count() * n2;
    for w in [u, v] {
        if w >= product_n {
            return Err(Error::VertexOutOfRange {
                vertex: w,
                n: product_n,
            });
        }
    }
    let d1 = g1.bfs_distances(u / n2).get(v / n2);
    let d2 = g2.bfs_distances(u % n2).get(v % n2);
    let (Distance::Finite(d1), Distance::Finite(d2)) = (d1, d2) else {
        return Err(Error::Disconnected);
    };
    PairCase::from_distances(d1, d2)
        .ok_or_else(|| Error::NotSrg(format!("factor distance {} exceeds 2", d1.max(d2))))
}

/// Index of label `(i, j)` in [`product_labels`].
pub fn product_label_index(i: usize, j: usize) -> usize {
    i * 3 + j
}

/// Per-case values obtained by merging the symmetric labels of a 9-label
/// hitting vector on `G × G`. Returns `None` if merged labels disagree.
pub fn merge_square_labels(h: &[Rational]) -> Option<SquareHitting> {
    assert_eq!(h.len(), 8, "hitting vector over labels (0,1)..(2,2)");
    // h is indexed by product label index minus one
    let at = |i: usize, j: usize| &h[product_label_index(i, j) - 1];
    let merged = |x: &Rational, y: &Rational| (x == y).then(|| x.clone());
    Some(SquareHitting {
        d1: merged(at(0, 1), at(1, 0))?,
        d2_same_coordinate: merged(at(0, 2), at(2, 0))?,
        d2_mixed: at(1, 1).clone(),
        d3: merged(at(1, 2), at(2, 1))?,
        d4: at(2, 2).clone(),
    })
}
