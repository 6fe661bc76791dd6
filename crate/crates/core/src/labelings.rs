//! Vertex-pair labelings and the f-equitable checker.
//!
//! A labeling `f` assigns a label to every ordered vertex pair, with the
//! diagonal always mapped to the first label `x_0`. For a centre `o` the
//! label classes `F_x(o) = {v : f(o, v) = x}` form a candidate stabilized
//! partition; the graph is f-equitable when every centre yields an equitable
//! partition with the same label-indexed quotient matrix.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{quotient_matrix, Partition, QuotientMatrix};

/// A label value. Integers cover distances, class indices and user tables;
/// `Diagonal` is the reserved token of the common-neighbour labeling; `Pair`
/// labels come from products.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "LabelRepr", into = "LabelRepr")]
pub enum Label {
    Int(i64),
    Diagonal,
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn pair(a: Label, b: Label) -> Label {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Label::Int(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(v) => write!(f, "{v}"),
            Label::Diagonal => f.write_str("diag"),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Int(i64),
    Token(String),
    Pair([Box<Label>; 2]),
}

impl TryFrom<LabelRepr> for Label {
    type Error = String;

    fn try_from(repr: LabelRepr) -> std::result::Result<Self, String> {
        match repr {
            LabelRepr::Int(v) => Ok(Label::Int(v)),
            LabelRepr::Token(t) if t == "diag" => Ok(Label::Diagonal),
            LabelRepr::Token(t) => Err(format!("unknown label token {t:?}")),
            LabelRepr::Pair([a, b]) => Ok(Label::Pair(a, b)),
        }
    }
}

impl From<Label> for LabelRepr {
    fn from(label: Label) -> Self {
        match label {
            Label::Int(v) => LabelRepr::Int(v),
            Label::Diagonal => LabelRepr::Token("diag".into()),
            Label::Pair(a, b) => LabelRepr::Pair([a, b]),
        }
    }
}

/// Total function on ordered vertex pairs, stored as a dense class table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairLabeling {
    name: String,
    labels: Vec<Label>,
    n: usize,
    classes: Vec<u32>,
}

impl PairLabeling {
    /// Builds a labeling from a class-index function. `class(v, v)` must be 0
    /// and every class index must be below `labels.len()`.
    pub fn from_fn(
        name: impl Into<String>,
        n: usize,
        labels: Vec<Label>,
        class: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut classes = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                let c = class(u, v);
                if c >= labels.len() {
                    return Err(Error::InvalidLabeling(format!(
                        "pair ({u},{v}) mapped to class {c} of {}",
                        labels.len()
                    )));
                }
                if u == v && c != 0 {
                    return Err(Error::InvalidLabeling(format!(
                        "diagonal pair ({u},{u}) is not labeled {}",
                        labels[0]
                    )));
                }
                classes.push(c as u32);
            }
        }
        Ok(PairLabeling {
            name: name.into(),
            labels,
            n,
            classes,
        })
    }

    /// User-supplied `n × n` table of integer labels. The diagonal value
    /// becomes `x_0`; remaining values follow in ascending order.
    pub fn from_table(name: impl Into<String>, table: &[Vec<i64>]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLabeling(
                "table must be square and non-empty".into(),
            ));
        }
        let diag = table[0][0];
        if let Some(v) = (0..n).find(|&v| table[v][v] != diag) {
            return Err(Error::InvalidLabeling(format!(
                "diagonal entry ({v},{v}) = {} differs from {diag}",
                table[v][v]
            )));
        }
        let others: BTreeSet<i64> = table
            .iter()
            .flatten()
            .copied()
            .filter(|&x| x != diag)
            .collect();
        let values: Vec<i64> = std::iter::once(diag).chain(others).collect();
        let labels = values.iter().copied().map(Label::Int).collect();
        Self::from_fn(name, n, labels, |u, v| {
            values
                .iter()
                .position(|&x| x == table[u][v])
                .expect("value collected")
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Index of `f(u, v)` in [`Self::labels`].
    pub fn class(&self, u: usize, v: usize) -> usize {
        self.classes[u * self.n + v] as usize
    }

    pub fn eval(&self, u: usize, v: usize) -> &Label {
        &self.labels[self.class(u, v)]
    }

    /// Label classes `F_x(o)` for every label, in label order.
    pub fn classes_from(&self, center: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.labels.len()];
        for v in 0..self.n {
            out[self.class(center, v)].push(v);
        }
        out
    }
}

/// Distance labeling `d_G`, labels `0..=diameter`.
pub fn distance_labeling(g: &Graph) -> Result<PairLabeling> {
    let dist = g.distance_matrix().ok_or(Error::Disconnected)?;
    let diameter = dist.iter().flatten().copied().max().unwrap_or(0);
    let labels = (0..=diameter as i64).map(Label::Int).collect();
    PairLabeling::from_fn("distance", g.vertex_count(), labels, |u, v| dist[u][v])
}

/// Common-neighbour labeling `n_G` with a reserved diagonal token.
pub fn common_neighbor_labeling(g: &Graph) -> PairLabeling {
    let n = g.vertex_count();
    let counts: BTreeSet<usize> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .map(|(u, v)| g.common_neighbors(u, v))
        .collect();
    let counts: Vec<usize> = counts.into_iter().collect();
    let labels = std::iter::once(Label::Diagonal)
        .chain(counts.iter().map(|&c| Label::Int(c as i64)))
        .collect();
    PairLabeling::from_fn("common-neighbors", n, labels, |u, v| {
        if u == v {
            0
        } else {
            1 + counts
                .binary_search(&g.common_neighbors(u, v))
                .expect("count collected")
        }
    })
    .expect("classes in range")
}

/// Componentwise labeling on a Cartesian product, `(f(u,v), f'(u',v'))`,
/// with product vertices encoded as `a * n2 + b`. Labels are ordered
/// lexicographically with the first factor major.
pub fn product_labeling(f: &PairLabeling, f2: &PairLabeling) -> PairLabeling {
    let n2 = f2.vertex_count();
    let r2 = f2.labels.len();
    let labels = f
        .labels
        .iter()
        .flat_map(|a| {
            f2.labels
                .iter()
                .map(move |b| Label::pair(a.clone(), b.clone()))
        })
        .collect();
    PairLabeling::from_fn(
        format!("({},{})", f.name, f2.name),
        f.vertex_count() * n2,
        labels,
        |u, v| {
            let (u1, u2) = (u / n2, u % n2);
            let (v1, v2) = (v / n2, v % n2);
            f.class(u1, v1) * r2 + f2.class(u2, v2)
        },
    )
    .expect("classes in range")
}

/// Why a graph fails to be f-equitable, with the witness centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Condition 1: `F_{x_0}(center)` contains a vertex other than the centre.
    CenterClass { center: usize, other: usize },
    /// Condition 2: a label class is empty for this centre.
    EmptyClass { center: usize, label: Label },
    /// Condition 2: the label partition is not equitable.
    NotEquitable {
        center: usize,
        block: Label,
        target: Label,
        u: usize,
        v: usize,
    },
    /// Condition 3: quotient differs from the one at `reference`.
    QuotientMismatch {
        center: usize,
        reference: usize,
        row: Label,
        col: Label,
        expected: u64,
        found: u64,
    },
    /// The labeling is defined on a different number of vertices.
    SizeMismatch { graph: usize, labeling: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CenterClass { center, other } => write!(
                f,
                "centre {center}: vertex {other} shares the diagonal label"
            ),
            Violation::EmptyClass { center, label } => {
                write!(f, "centre {center}: label class {label} is empty")
            }
            Violation::NotEquitable {
                center,
                block,
                target,
                u,
                v,
            } => write!(
                f,
                "centre {center}: vertices {u} and {v} of class {block} differ in neighbours in class {target}"
            ),
            Violation::QuotientMismatch {
                center,
                reference,
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "centre {center}: quotient entry ({row},{col}) is {found}, centre {reference} has {expected}"
            ),
            Violation::SizeMismatch { graph, labeling } => write!(
                f,
                "labeling covers {labeling} vertices, graph has {graph}"
            ),
        }
    }
}

impl Violation {
    pub fn center(&self) -> Option<usize> {
        match self {
            Violation::CenterClass { center, .. }
            | Violation::EmptyClass { center, .. }
            | Violation::NotEquitable { center, .. }
            | Violation::QuotientMismatch { center, .. } => Some(*center),
            Violation::SizeMismatch { .. } => None,
        }
    }
}

/// Shared label-indexed quotient matrix and valency of an f-equitable graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FEquitableCertificate {
    pub quotient: QuotientMatrix,
    pub valency: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub labels: Vec<Label>,
    pub quotient: Vec<Vec<u64>>,
    pub valency: u64,
}

impl FEquitableCertificate {
    pub fn labels(&self) -> &[Label] {
        &self.quotient.labels
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            labels: self.quotient.labels.clone(),
            quotient: self.quotient.q.to_rows(),
            valency: self.valency,
        }
    }
}

/// Label-class partition from `center` and its quotient matrix.
pub fn center_quotient(
    g: &Graph,
    f: &PairLabeling,
    center: usize,
) -> Result<QuotientMatrix, Violation> {
    let classes = f.classes_from(center);
    if let Some(&other) = classes[0].iter().find(|&&v| v != center) {
        return Err(Violation::CenterClass { center, other });
    }
    if let Some(i) = classes.iter().position(Vec::is_empty) {
        return Err(Violation::EmptyClass {
            center,
            label: f.labels[i].clone(),
        });
    }
    let p = Partition::new(g.vertex_count(), classes).expect("classes partition V");
    match quotient_matrix(g, &p) {
        Ok(q) => Ok(q.relabeled(f.labels.clone())),
        Err(Error::NotEquitable {
            block,
            target,
            u,
            v,
            ..
        }) => Err(Violation::NotEquitable {
            center,
            block: f.labels[block].clone(),
            target: f.labels[target].clone(),
            u,
            v,
        }),
        Err(e) => unreachable!("label partition rejected: {e}"),
    }
}

/// Checks the three f-equitable conditions at every centre.
///
/// Centres are evaluated in parallel; the reported violation is always the
/// one at the smallest failing centre, as in a sequential scan.
pub fn check_f_equitable(g: &Graph, f: &PairLabeling) -> Result<FEquitableCertificate, Violation> {
    let n = g.vertex_count();
    if f.vertex_count() != n {
        return Err(Violation::SizeMismatch {
            graph: n,
            labeling: f.vertex_count(),
        });
    }
    let per_center: Vec<Result<QuotientMatrix, Violation>> = (0..n)
        .into_par_iter()
        .map(|o| center_quotient(g, f, o))
        .collect();

    let mut reference: Option<QuotientMatrix> = None;
    for (center, result) in per_center.into_iter().enumerate() {
        let q = result?;
        match &reference {
            None => reference = Some(q),
            Some(r) => {
                let order = r.order();
                for i in 0..order {
                    for j in 0..order {
                        if r.get(i, j) != q.get(i, j) {
                            return Err(Violation::QuotientMismatch {
                                center,
                                reference: 0,
                                row: f.labels[i].clone(),
                                col: f.labels[j].clone(),
                                expected: r.get(i, j),
                                found: q.get(i, j),
                            });
                        }
                    }
                }
            }
        }
    }
    let quotient = reference.ok_or(Violation::SizeMismatch {
        graph: 0,
        labeling: 0,
    })?;
    let valency = quotient.column_sum(0);
    Ok(FEquitableCertificate { quotient, valency })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn rows(c: &FEquitableCertificate) -> Vec<Vec<u64>> {
        c.quotient.q.to_rows()
    }

    #[test]
    fn distance_labels() {
        let g = Graph::petersen();
        let f = distance_labeling(&g).unwrap();
        assert_eq!(f.labels(), &[Label::Int(0), Label::Int(1), Label::Int(2)]);
        assert!((0..10).all(|v| f.eval(v, v) == &Label::Int(0)));
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(distance_labeling(&g), Err(Error::Disconnected));
    }

    #[test]
    fn common_neighbor_labels() {
        let k4 = common_neighbor_labeling(&Graph::complete(4));
        assert_eq!(k4.labels(), &[Label::Diagonal, Label::Int(2)]);
        let p = common_neighbor_labeling(&Graph::petersen());
        assert_eq!(p.labels(), &[Label::Diagonal, Label::Int(0), Label::Int(1)]);
        assert_eq!(p.eval(0, 1), &Label::Int(0));
        assert_eq!(p.eval(0, 2), &Label::Int(1));
    }

    #[test]
    fn product_labels() {
        let c5 = Graph::cycle(5);
        let d = distance_labeling(&c5).unwrap();
        let f = product_labeling(&d, &d);
        assert_eq!(f.eval(7, 7), &Label::pair(Label::Int(0), Label::Int(0)));
        // (0,0) -> (1,2)
        assert_eq!(f.eval(0, 5 + 2), &Label::pair(Label::Int(1), Label::Int(2)));
        let p = distance_labeling(&Graph::petersen()).unwrap();
        assert_eq!(product_labeling(&p, &p).labels().len(), 9);
    }

    #[test]
    fn petersen_certificate() {
        let g = Graph::petersen();
        let cert = check_f_equitable(&g, &distance_labeling(&g).unwrap()).unwrap();
        assert_eq!(
            rows(&cert),
            vec![vec![0, 1, 0], vec![3, 0, 1], vec![0, 2, 2]]
        );
        assert_eq!(cert.valency, 3);
        let json = serde_json::to_string(&cert.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"labels":[0,1,2],"quotient":[[0,1,0],[3,0,1],[0,2,2]],"valency":3}"#
        );
    }

    #[test]
    fn path_has_empty_class() {
        let g = Graph::path(3);
        let err = check_f_equitable(&g, &distance_labeling(&g).unwrap()).unwrap_err();
        assert_eq!(
            err,
            Violation::EmptyClass {
                center: 1,
                label: Label::Int(2)
            }
        );
    }

    #[test]
    fn star_quotients_disagree() {
        let g = Graph::star(3);
        let f = common_neighbor_labeling(&g);
        // centre 0 shares no neighbours with leaves; leaves share the centre
        assert!(check_f_equitable(&g, &f).is_err());
    }

    #[test]
    fn table_labeling_equals_distance() {
        let g = Graph::cycle(6);
        let table: Vec<Vec<i64>> = g
            .distance_matrix()
            .unwrap()
            .into_iter()
            .map(|r| r.into_iter().map(|d| d as i64).collect())
            .collect();
        let f = PairLabeling::from_table("table", &table).unwrap();
        let a = check_f_equitable(&g, &f).unwrap();
        let b = check_f_equitable(&g, &distance_labeling(&g).unwrap()).unwrap();
        assert_eq!(a, b.clone());
        assert_eq!(a.quotient.q, b.quotient.q);
    }

    #[test]
    fn table_rejects_mixed_diagonal() {
        let t = vec![vec![0, 1], vec![1, 5]];
        assert!(matches!(
            PairLabeling::from_table("t", &t),
            Err(Error::InvalidLabeling(_))
        ));
    }

    #[test]
    fn diagonal_label_reused_off_diagonal() {
        let g = Graph::cycle(4);
        let t = vec![vec![0; 4]; 4];
        let f = PairLabeling::from_table("zeros", &t).unwrap();
        assert_eq!(
            check_f_equitable(&g, &f),
            Err(Violation::CenterClass {
                center: 0,
                other: 1
            })
        );
    }

    #[test]
    fn star_centre_has_empty_distance_class() {
        let g = Graph::star(3);
        match check_f_equitable(&g, &distance_labeling(&g).unwrap()) {
            Err(Violation::EmptyClass { center: 0, label }) => assert_eq!(label, Label::Int(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quotient_mismatch_is_located() {
        // K_{2,3}: every distance partition is equitable, but the two sides
        // see different quotients.
        let edges: Vec<_> = (0..2).flat_map(|a| (2..5).map(move |b| (a, b))).collect();
        let g = Graph::new(5, &edges).unwrap();
        assert_eq!(
            check_f_equitable(&g, &distance_labeling(&g).unwrap()),
            Err(Violation::QuotientMismatch {
                center: 2,
                reference: 0,
                row: Label::Int(1),
                col: Label::Int(0),
                expected: 3,
                found: 2,
            })
        );
    }

    #[test]
    fn label_json_shapes() {
        let l = vec![
            Label::Diagonal,
            Label::Int(3),
            Label::pair(Label::Int(1), Label::Int(2)),
        ];
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"["diag",3,[1,2]]"#);
        let back: Vec<Label> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn product_quotient_is_kronecker_sum() {
        for (g, h) in [
            (Graph::cycle(5), Graph::cycle(5)),
            (Graph::petersen(), Graph::cycle(5)),
        ] {
            let (fg, fh) = (
                distance_labeling(&g).unwrap(),
                distance_labeling(&h).unwrap(),
            );
            let (cg, ch) = (
                check_f_equitable(&g, &fg).unwrap(),
                check_f_equitable(&h, &fh).unwrap(),
            );
            let prod = g.cartesian_product(&h);
            let cert = check_f_equitable(&prod, &product_labeling(&fg, &fh)).unwrap();
            let expected: Matrix<u64> = cg.quotient.q.kron_sum(&ch.quotient.q);
            assert_eq!(cert.quotient.q, expected);
            assert_eq!(cert.valency, cg.valency + ch.valency);
        }
    }
}
