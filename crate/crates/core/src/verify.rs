//! Identity batteries: every closed form and quotient solve checked against
//! the full-graph oracle, with exact equality.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::drg::{biggs_hitting, drg_quotient_matrix, intersection_array};
use crate::graph::Graph;
use crate::hitting::{exact_hitting_full, hitting_from_certificate};
use crate::labelings::{check_f_equitable, distance_labeling, product_labeling, PairLabeling};
use crate::paley::{
    gen3_closed_form, gen4_closed_form, gp_graph, paley_labeling, q_x3, q_x4, qsr_params,
};
use crate::partition::{quotient_matrix, refine_to_equitable, Partition, QuotientMatrix};
use crate::srg_product::{
    kronecker_quotient, merge_square_labels, product_quotient, square_hitting_closed_form,
    srg_params,
};
use crate::{ExactHitting, Rational};

pub const PALEY3_BATTERY: [u64; 6] = [7, 13, 19, 31, 37, 43];
pub const PALEY4_BATTERY: [u64; 5] = [17, 41, 73, 89, 97];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    FEquitable,
    Drg,
    SrgProd,
    Paley3,
    Paley4,
    Lemmas,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::FEquitable,
        Suite::Drg,
        Suite::SrgProd,
        Suite::Paley3,
        Suite::Paley4,
        Suite::Lemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FEquitable => "fequitable",
            Suite::Drg => "drg",
            Suite::SrgProd => "srgprod",
            Suite::Paley3 => "paley3",
            Suite::Paley4 => "paley4",
            Suite::Lemmas => "lemmas",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    /// `None` on success, otherwise a witness.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS [{}] {}", self.suite, self.name),
            Some(w) => write!(f, "FAIL [{}] {}: {}", self.suite, self.name, w),
        }
    }
}

type Check = Result<(), String>;

fn outcome(suite: Suite, name: impl Into<String>, result: Check) -> CheckOutcome {
    CheckOutcome {
        suite,
        name: name.into(),
        failure: result.err(),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Compares a label-indexed hitting vector with the full-graph oracle for
/// every `target` and every source: `oracle(target)[u] = h[f(target, u)]`.
pub fn compare_with_oracle(
    g: &Graph,
    f: &PairLabeling,
    h: &ExactHitting,
    targets: impl IntoIterator<Item = usize>,
) -> Check {
    for target in targets {
        let full: Vec<Rational> = exact_hitting_full(g, target).map_err(err)?;
        for (u, value) in full.iter().enumerate() {
            let class = f.class(target, u);
            let expected = if class == 0 {
                Rational::from_integer(0.into())
            } else {
                h.values[class - 1].clone()
            };
            if *value != expected {
                return Err(format!(
                    "target {target}, source {u}: oracle {value}, quotient {expected} (label {})",
                    f.eval(target, u)
                ));
            }
        }
    }
    Ok(())
}

/// The graphs of the f-equitable hitting-time battery with their labelings.
pub fn fequitable_battery() -> Vec<(String, Graph, PairLabeling)> {
    let mut out = Vec::new();
    for (name, g) in [
        ("C5", Graph::cycle(5)),
        ("C6", Graph::cycle(6)),
        ("C7", Graph::cycle(7)),
        ("K4", Graph::complete(4)),
        ("Petersen", Graph::petersen()),
    ] {
        let f = distance_labeling(&g).expect("connected");
        out.push((name.to_string(), g, f));
    }
    for (x, k) in [(7, 3), (13, 3), (17, 4)] {
        let g = gp_graph(x, k).expect("valid parameters");
        let f = paley_labeling(x, k).expect("valid parameters");
        out.push((format!("GP({x},{k})"), g, f));
    }
    let c5 = Graph::cycle(5);
    let d = distance_labeling(&c5).expect("connected");
    out.push((
        "C5xC5".into(),
        c5.cartesian_product(&c5),
        product_labeling(&d, &d),
    ));
    out
}

fn fequitable_suite() -> Vec<CheckOutcome> {
    fequitable_battery()
        .into_par_iter()
        .map(|(name, g, f)| {
            let result = (|| {
                let cert = check_f_equitable(&g, &f).map_err(err)?;
                let h = hitting_from_certificate::<Rational>(&cert).map_err(err)?;
                compare_with_oracle(&g, &f, &h, 0..g.vertex_count())
            })();
            outcome(
                Suite::FEquitable,
                format!("{name}: quotient solve = full oracle at every pair"),
                result,
            )
        })
        .collect()
}

fn drg_suite() -> Vec<CheckOutcome> {
    let graphs = vec![
        ("Petersen", Graph::petersen()),
        ("C5", Graph::cycle(5)),
        ("C6", Graph::cycle(6)),
        ("C7", Graph::cycle(7)),
        ("C8", Graph::cycle(8)),
        ("K4", Graph::complete(4)),
    ];
    graphs
        .into_par_iter()
        .map(|(name, g)| {
            let result = (|| {
                let arr = intersection_array(&g).map_err(err)?;
                let f = distance_labeling(&g).map_err(err)?;
                let cert = check_f_equitable(&g, &f).map_err(err)?;
                let tri = drg_quotient_matrix(&arr).map_err(err)?;
                ensure(tri.q == cert.quotient.q, || {
                    "tridiagonal quotient differs from label quotient".into()
                })?;
                let biggs = biggs_hitting::<Rational>(&arr).map_err(err)?;
                let solved = hitting_from_certificate::<Rational>(&cert).map_err(err)?;
                ensure(biggs.values == solved.values, || {
                    format!(
                        "closed form {:?} vs solve {:?}",
                        biggs.values, solved.values
                    )
                })?;
                let ks = arr.subconstituent_sizes().map_err(err)?;
                ensure(ks.iter().sum::<u64>() == g.vertex_count() as u64, || {
                    "sum of k_i != n".into()
                })?;
                compare_with_oracle(&g, &f, &solved, 0..g.vertex_count())
            })();
            outcome(
                Suite::Drg,
                format!("{name}: closed form = quotient solve = full oracle"),
                result,
            )
        })
        .collect()
}

fn srgprod_member(g1: &Graph, g2: &Graph, all_targets: bool) -> Check {
    let (p1, p2) = (srg_params(g1).map_err(err)?, srg_params(g2).map_err(err)?);
    let q = product_quotient(&p1, &p2);
    ensure(q.q == kronecker_quotient(&p1, &p2), || {
        "9x9 matrix != Kronecker sum".into()
    })?;

    let prod = g1.cartesian_product(g2);
    let f = product_labeling(
        &distance_labeling(g1).map_err(err)?,
        &distance_labeling(g2).map_err(err)?,
    );
    let cert = check_f_equitable(&prod, &f).map_err(err)?;
    ensure(cert.quotient.q == q.q, || {
        "9x9 matrix != quotient found on the product".into()
    })?;
    ensure(cert.valency == p1.k + p2.k, || "valency != k1 + k2".into())?;

    let h = hitting_from_certificate::<Rational>(&cert).map_err(err)?;
    let targets: Vec<usize> = if all_targets {
        (0..prod.vertex_count()).collect()
    } else {
        vec![0]
    };
    compare_with_oracle(&prod, &f, &h, targets)?;

    if p1 == p2 {
        let merged = merge_square_labels(&h.values).ok_or("symmetric labels disagree")?;
        let closed = square_hitting_closed_form(&p1).map_err(err)?;
        ensure(merged == closed, || {
            format!("closed form {closed:?} vs merged solve {merged:?}")
        })?;
    }
    Ok(())
}

fn srgprod_suite() -> Vec<CheckOutcome> {
    let members: Vec<(&str, Graph, Graph, bool)> = vec![
        ("C5xC5", Graph::cycle(5), Graph::cycle(5), true),
        (
            "PetersenxPetersen",
            Graph::petersen(),
            Graph::petersen(),
            false,
        ),
        ("PetersenxC5", Graph::petersen(), Graph::cycle(5), false),
    ];
    members
        .into_par_iter()
        .map(|(name, g1, g2, all)| {
            outcome(
                Suite::SrgProd,
                format!("{name}: 9x9 quotient, Kronecker sum, product solve and oracle agree"),
                srgprod_member(&g1, &g2, all),
            )
        })
        .collect()
}

/// Checks the Paley-quotient identities on `q`: symmetry of the non-centre
/// block and `q_{i,i} = c_{((k-i+1) mod k)+1}`.
pub fn paley_quotient_identities(q: &QuotientMatrix, c: &[u64]) -> Check {
    let k = c.len();
    ensure(q.order() == k + 1, || {
        format!("order {} != k + 1", q.order())
    })?;
    ensure(
        q.get(1, 0) as usize * k + 1 == q.block_sizes.iter().sum::<usize>(),
        || "entry (1,0) != (x-1)/k".into(),
    )?;
    ensure(q.get(0, 1) == 1, || "entry (0,1) != 1".into())?;
    for i in 1..=k {
        ensure(q.get(1, i) == c[i - 1], || {
            format!("row 1 entry {i} != c_{i}")
        })?;
        ensure(q.get(i, i) == c[(k - i + 1) % k], || {
            format!("diagonal entry {i} != c_{}", (k - i + 1) % k + 1)
        })?;
        for j in 1..=k {
            ensure(q.get(i, j) == q.get(j, i), || {
                format!("q_{i}{j} != q_{j}{i}")
            })?;
        }
    }
    Ok(())
}

fn paley_member(x: u64, k: u64) -> Check {
    let params = qsr_params(x, k).map_err(err)?;
    let g = gp_graph(x, k).map_err(err)?;
    let f = paley_labeling(x, k).map_err(err)?;
    let cert = check_f_equitable(&g, &f).map_err(err)?;
    let (printed, closed) = match k {
        3 => (
            q_x3(&params).map_err(err)?,
            gen3_closed_form(&params).map_err(err)?,
        ),
        4 => {
            let (c1, c2, c3, c4) = (params.c[0], params.c[1], params.c[2], params.c[3]);
            ensure(c2 + c4 == 2 * c3, || {
                format!("c2 + c4 = {} != 2 c3 = {}", c2 + c4, 2 * c3)
            })?;
            ensure((1 + c1 + c3) % 2 == 0, || "1 + c1 + c3 is odd".into())?;
            (
                q_x4(&params).map_err(err)?,
                gen4_closed_form(&params).map_err(err)?,
            )
        }
        _ => return Err(format!("no closed form for k = {k}")),
    };
    ensure(printed.q == cert.quotient.q, || {
        "parametrised quotient != discovered quotient".into()
    })?;
    paley_quotient_identities(&cert.quotient, &params.c)?;
    let solved = hitting_from_certificate::<Rational>(&cert).map_err(err)?;
    ensure(solved.values == closed.values, || {
        format!(
            "closed form {:?} vs solve {:?}",
            closed.values, solved.values
        )
    })?;
    compare_with_oracle(&g, &f, &solved, [0])
}

fn paley_suite(suite: Suite, k: u64, xs: &[u64]) -> Vec<CheckOutcome> {
    xs.par_iter()
        .map(|&x| {
            outcome(
                suite,
                format!("GP({x},{k}): closed form = quotient solve = full oracle"),
                paley_member(x, k),
            )
        })
        .collect()
}

/// Every quotient matrix the batteries produce, with its partition degrees.
pub fn lemma_targets() -> Vec<(String, Graph, Partition)> {
    let mut out = Vec::new();
    for (name, g, f) in fequitable_battery() {
        for o in 0..g.vertex_count() {
            let p =
                Partition::new(g.vertex_count(), f.classes_from(o)).expect("f-equitable classes");
            out.push((format!("{name} centre {o}"), g.clone(), p));
        }
        let refined = refine_to_equitable(
            &g,
            &Partition::centered(g.vertex_count(), 0).expect("vertex 0"),
        )
        .expect("same vertex set");
        out.push((format!("{name} refined"), g, refined));
    }
    let mut centre_zero = |name: String, g: Graph, f: PairLabeling| {
        let p = Partition::new(g.vertex_count(), f.classes_from(0)).expect("label classes");
        out.push((format!("{name} centre 0"), g, p));
    };
    let (c5, c8, pet) = (Graph::cycle(5), Graph::cycle(8), Graph::petersen());
    centre_zero(
        "C8".into(),
        c8.clone(),
        distance_labeling(&c8).expect("connected"),
    );
    let (dc5, dpet) = (
        distance_labeling(&c5).expect("connected"),
        distance_labeling(&pet).expect("connected"),
    );
    centre_zero(
        "PetersenxPetersen".into(),
        pet.cartesian_product(&pet),
        product_labeling(&dpet, &dpet),
    );
    centre_zero(
        "PetersenxC5".into(),
        pet.cartesian_product(&c5),
        product_labeling(&dpet, &dc5),
    );
    for (k, xs) in [(3, &PALEY3_BATTERY[..]), (4, &PALEY4_BATTERY[..])] {
        for &x in xs {
            let g = gp_graph(x, k).expect("battery");
            centre_zero(
                format!("GP({x},{k})"),
                g,
                paley_labeling(x, k).expect("battery"),
            );
        }
    }
    out
}

fn lemma_suite() -> Vec<CheckOutcome> {
    let targets = lemma_targets();
    let failures: Vec<String> = targets
        .par_iter()
        .filter_map(|(name, g, p)| {
            let q = match quotient_matrix(g, p) {
                Ok(q) => q,
                Err(e) => return Some(format!("{name}: {e}")),
            };
            let degrees: Vec<usize> = p.blocks().iter().map(|b| g.degree(b[0])).collect();
            let v = q.lemma_violations(&degrees);
            (!v.is_empty()).then(|| format!("{name}: {v:?}"))
        })
        .collect();
    vec![outcome(
        Suite::Lemmas,
        format!(
            "column sums = degree and |V_i| q_ji = |V_j| q_ij on {} partitions",
            targets.len()
        ),
        match failures.first() {
            None => Ok(()),
            Some(f) => Err(format!("{} violations, first: {f}", failures.len())),
        },
    )]
}

pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    match suite {
        Suite::FEquitable => fequitable_suite(),
        Suite::Drg => drg_suite(),
        Suite::SrgProd => srgprod_suite(),
        Suite::Paley3 => paley_suite(Suite::Paley3, 3, &PALEY3_BATTERY),
        Suite::Paley4 => paley_suite(Suite::Paley4, 4, &PALEY4_BATTERY),
        Suite::Lemmas => lemma_suite(),
    }
}

/// Runs `suites` in order on a pool of `threads` workers (rayon's default
/// when `None`). The report does not depend on the thread count.
pub fn run_suites(suites: &[Suite], threads: Option<usize>) -> Vec<CheckOutcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().expect("thread pool");
    pool.install(|| suites.iter().flat_map(|&s| run_suite(s)).collect())
}
