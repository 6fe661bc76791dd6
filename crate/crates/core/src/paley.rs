//! Generalized Paley graphs `GP(x, k)` over prime fields.
//!
//! Vertices are `𝔽_x`; `u ∼ v` iff `v − u` is a non-zero k-th power. The
//! graph is undirected exactly when `−1` is a k-th power, which for a prime
//! `x` means `2k | x − 1`; that congruence is what gets enforced.
//! Only prime fields are supported.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hitting::HittingVector;
use crate::labelings::{Label, PairLabeling};
use crate::linalg::Matrix;
use crate::partition::QuotientMatrix;
use crate::scalar::ratio;
use crate::Rational;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Smallest generator of `𝔽_p^*`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&a| factors.iter().all(|&q| pow_mod(a, (p - 1) / q, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// `𝔽_p` with its canonical generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    pub p: u64,
    pub alpha: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        Ok(PrimeField {
            p,
            alpha: primitive_root(p)?,
        })
    }

    /// Uses a caller-chosen generator instead of the smallest one.
    pub fn with_generator(p: u64, alpha: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if alpha == 0 || alpha >= p || field.order_of(alpha) != p - 1 {
            return Err(Error::InvalidLabeling(format!(
                "{alpha} does not generate F_{p}^*"
            )));
        }
        Ok(PrimeField { p, alpha })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.p)).then(|| self.pow(a, self.p - 2))
    }

    pub fn order_of(&self, a: u64) -> u64 {
        let mut x = a % self.p;
        let mut order = 1;
        while x != 1 {
            x = self.mul(x, a);
            order += 1;
            if order > self.p {
                return 0;
            }
        }
        order
    }
}

/// Maps each non-zero element to its coset `i ∈ 1..=k` of `α^{i-1}(𝔽^*)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerClassIndex {
    pub field: PrimeField,
    pub k: u64,
    class_of: Vec<u8>,
}

impl PowerClassIndex {
    pub fn new(field: PrimeField, k: u64) -> Result<Self> {
        let x = field.p;
        if k == 0 || !(x - 1).is_multiple_of(2 * k) {
            return Err(Error::BadCongruence { x, k });
        }
        let mut class_of = vec![0u8; x as usize];
        let mut power = 1;
        for e in 0..x - 1 {
            class_of[power as usize] = (e % k + 1) as u8;
            power = field.mul(power, field.alpha);
        }
        Ok(PowerClassIndex { field, k, class_of })
    }

    /// Class of a non-zero element, or 0 for zero.
    pub fn class_of(&self, v: u64) -> usize {
        self.class_of[(v % self.field.p) as usize] as usize
    }

    pub fn members(&self, class: usize) -> Vec<u64> {
        (1..self.field.p)
            .filter(|&v| self.class_of(v) == class)
            .collect()
    }

    pub fn class_size(&self) -> u64 {
        (self.field.p - 1) / self.k
    }
}

fn power_classes(x: u64, k: u64) -> Result<PowerClassIndex> {
    PowerClassIndex::new(PrimeField::new(x)?, k)
}

fn graph_from_classes(classes: &PowerClassIndex) -> Graph {
    let x = classes.field.p as usize;
    let edges: Vec<(usize, usize)> = (0..x)
        .flat_map(|u| (u + 1..x).map(move |v| (u, v)))
        .filter(|&(u, v)| classes.class_of((v - u) as u64) == 1)
        .collect();
    Graph::new(x, &edges).expect("valid Paley graph")
}

pub fn gp_graph(x: u64, k: u64) -> Result<Graph> {
    Ok(graph_from_classes(&power_classes(x, k)?))
}

/// `f(u, v) = i` where `v − u ∈ α^{i-1}(𝔽^*)^k`, and `f(u, u) = 0`.
pub fn paley_labeling(x: u64, k: u64) -> Result<PairLabeling> {
    labeling_from_classes(&power_classes(x, k)?)
}

/// Same labeling for an explicit generator.
pub fn paley_labeling_with_generator(x: u64, k: u64, alpha: u64) -> Result<PairLabeling> {
    labeling_from_classes(&PowerClassIndex::new(
        PrimeField::with_generator(x, alpha)?,
        k,
    )?)
}

fn labeling_from_classes(classes: &PowerClassIndex) -> Result<PairLabeling> {
    let field = classes.field;
    let labels = (0..=classes.k as i64).map(Label::Int).collect();
    PairLabeling::from_fn(
        format!("paley(alpha={})", field.alpha),
        field.p as usize,
        labels,
        |u, v| classes.class_of(field.sub(v as u64, u as u64)),
    )
}

/// Quasi-strongly-regular parameters: `c_i = |N(0) ∩ N(v)|` for `v` in class `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QsrParams {
    pub alpha: u64,
    pub c: Vec<u64>,
    pub k: u64,
    pub x: u64,
}

impl QsrParams {
    pub fn valency(&self) -> u64 {
        (self.x - 1) / self.k
    }

    /// `c_i`, 1-based, with cyclic wrap so that `c_{k+1} = c_1`.
    pub fn c_cyclic(&self, i: usize) -> u64 {
        let k = self.c.len();
        self.c[(i - 1) % k]
    }
}

pub fn qsr_params(x: u64, k: u64) -> Result<QsrParams> {
    let classes = power_classes(x, k)?;
    let g = graph_from_classes(&classes);
    let mut c = Vec::with_capacity(k as usize);
    for class in 1..=k as usize {
        let members = classes.members(class);
        let first = g.common_neighbors(0, members[0] as usize) as u64;
        if members
            .iter()
            .any(|&v| g.common_neighbors(0, v as usize) as u64 != first)
        {
            return Err(Error::NonConstantClass(class));
        }
        c.push(first);
    }
    Ok(QsrParams {
        alpha: classes.field.alpha,
        c,
        k,
        x,
    })
}

fn expect_classes(params: &QsrParams, k: u64) -> Result<()> {
    if params.k != k || params.c.len() as u64 != k {
        return Err(Error::WrongClassCount {
            expected: k,
            found: params.c.len() as u64,
        });
    }
    Ok(())
}

fn finish_quotient(rows: Vec<Vec<u64>>, params: &QsrParams) -> Result<QuotientMatrix> {
    let q = Matrix::from_rows(rows)?;
    let expected = params.valency() as i64;
    for column in 0..q.cols() {
        let found: u64 = (0..q.rows()).map(|i| q[(i, column)]).sum();
        if found as i64 != expected {
            return Err(Error::ColumnSumMismatch {
                column,
                expected,
                found: found as i64,
            });
        }
    }
    let r = q.rows();
    let size = params.valency() as usize;
    Ok(QuotientMatrix {
        q,
        labels: (0..r as i64).map(Label::Int).collect(),
        block_sizes: std::iter::once(1)
            .chain(std::iter::repeat_n(size, r - 1))
            .collect(),
    })
}

/// 4×4 quotient of `GP(x, 3)` from `(c_1, c_2, c_3)`.
pub fn q_x3(params: &QsrParams) -> Result<QuotientMatrix> {
    expect_classes(params, 3)?;
    let (c1, c2, c3) = (params.c[0], params.c[1], params.c[2]);
    let rows = vec![
        vec![0, 1, 0, 0],
        vec![params.valency(), c1, c2, c3],
        vec![0, c2, c3, 1 + c1],
        vec![0, c3, 1 + c1, c2],
    ];
    finish_quotient(rows, params)
}

/// 5×5 quotient of `GP(x, 4)`; requires `1 + c_1 + c_3` even and
/// `c_2 + c_4 = 2 c_3`.
pub fn q_x4(params: &QsrParams) -> Result<QuotientMatrix> {
    expect_classes(params, 4)?;
    let (c1, c2, c3, c4) = (params.c[0], params.c[1], params.c[2], params.c[3]);
    let s = 1 + c1 + c3;
    if s % 2 != 0 {
        return Err(Error::OddParity(s as i64));
    }
    if c2 + c4 != 2 * c3 {
        return Err(Error::ConstraintViolation(format!("{c2} + {c4} != 2·{c3}")));
    }
    let h = s / 2;
    let rows = vec![
        vec![0, 1, 0, 0, 0],
        vec![params.valency(), c1, c2, c3, c4],
        vec![0, c2, c4, h, h],
        vec![0, c3, h, c3, h],
        vec![0, c4, h, h, c2],
    ];
    finish_quotient(rows, params)
}

fn int(v: u64) -> Rational {
    ratio(v as i64, 1)
}

fn labeled(values: Vec<Rational>) -> HittingVector<Rational> {
    HittingVector {
        labels: (1..=values.len() as i64).map(Label::Int).collect(),
        values,
    }
}

/// Closed-form `(h_1, h_2, h_3)` for `GP(x, 3)`.
pub fn gen3_closed_form(params: &QsrParams) -> Result<HittingVector<Rational>> {
    expect_classes(params, 3)?;
    let (c1, c2, c3) = (int(params.c[0]), int(params.c[1]), int(params.c[2]));
    let one = int(1);
    let denom = &c2 * (&c1 + &c3 + &one) + (&c1 + &one) * &c3;
    if denom == int(0) {
        return Err(Error::DegenerateDenominator);
    }
    let x = int(params.x);
    let third = (&x - &one) / int(3);
    let common = &c1 * (int(3) * &c2 + int(3) * &c3 + int(2));
    let h2 = &third * (&common + int(3) * &c2 * (&c3 + &one) + int(4) * &c3 + int(2)) / &denom;
    let h3 = &third * (&common + &c2 * (int(3) * &c3 + int(4)) + int(3) * &c3 + int(2)) / &denom;
    Ok(labeled(vec![&x - &one, h2, h3]))
}

/// Closed-form `(h_1, …, h_4)` for `GP(x, 4)`, in terms of `x`, `c_3`, `c_4`.
pub fn gen4_closed_form(params: &QsrParams) -> Result<HittingVector<Rational>> {
    expect_classes(params, 4)?;
    let x = int(params.x);
    let (c3, c4) = (int(params.c[2]), int(params.c[3]));
    let n = |v: i64| ratio(v, 1);
    let xm1 = &x - n(1);
    let c3_2 = &c3 * &c3;
    let c3_3 = &c3_2 * &c3;
    let c4_2 = &c4 * &c4;
    let x2 = &x * &x;

    let inner = n(20) * &c3_3
        + &c3_2 * (n(-8) * &c4 - n(7) * &x + n(7))
        + n(4) * &c3 * &c4_2
        + n(2) * &c3 * &c4 * &xm1
        + ratio(9, 16) * &c3 * &xm1 * &xm1
        - &c4_2 * &xm1;
    let denom = n(64) * inner;
    if denom == n(0) {
        return Err(Error::DegenerateDenominator);
    }

    let num2 = n(1280) * &c3_3 - n(64) * &c3_2 * (n(8) * &c4 + n(7) * &x - n(13))
        + n(4)
            * &c3
            * (n(64) * &c4_2 + n(32) * &c4 * (&x - n(2)) + n(9) * &x2 - n(48) * &x + n(39))
        - &xm1 * (n(64) * &c4_2 - n(24) * &c4 - n(9) * &x + n(9));
    let num3 = n(1280) * &c3_3 - n(64) * &c3_2 * (n(8) * &c4 + n(7) * &x - n(10))
        + n(4) * &c3 * (n(64) * &c4_2 + n(32) * &c4 * &x + n(9) * &x2 - n(42) * &x + n(33))
        - n(2) * (n(32) * &c4_2 + n(9)) * &x
        + n(9) * &x2
        + n(9);
    let num4 = n(1280) * &c3_3 - n(64) * &c3_2 * (n(8) * &c4 + n(7) * &x - n(9))
        + n(4) * &c3 * (n(64) * &c4_2 + n(32) * &c4 * &x + n(9) * (&x2 - n(4) * &x + n(3)))
        - &xm1 * (n(64) * &c4_2 + n(24) * &c4 - n(9) * &x + n(9));

    Ok(labeled(vec![
        xm1.clone(),
        &xm1 * num2 / &denom,
        &xm1 * num3 / &denom,
        &xm1 * num4 / &denom,
    ]))
}
