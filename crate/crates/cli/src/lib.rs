//! Command-line front end for `equihit`.
//!
//! [`run`] does all the work and returns the exit code together with what
//! should go to standard output and standard error, so the binary is a thin
//! wrapper and tests can drive the whole CLI in-process.

use std::ffi::OsString;
use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use equihit::drg::{biggs_hitting, drg_quotient_matrix, intersection_array, IntersectionArray};
use equihit::graph::GraphJson;
use equihit::hitting::{
    exact_hitting_full, hitting_from_certificate, hitting_from_partition, mc_hitting, solve_h,
    DEFAULT_STEP_CAP,
};
use equihit::labelings::{
    check_f_equitable, common_neighbor_labeling, distance_labeling, product_labeling,
};
use equihit::paley::{
    gen3_closed_form, gen4_closed_form, gp_graph, paley_labeling, q_x3, q_x4, qsr_params, QsrParams,
};
use equihit::partition::{quotient_matrix, refine_to_equitable, transition_matrix, PartitionJson};
use equihit::scalar::{render_rational, Scalar};
use equihit::srg_product::{
    kronecker_quotient, product_quotient, square_hitting_closed_form, srg_params, SrgParams,
};
use equihit::verify::{compare_with_oracle, paley_quotient_identities, run_suites, Suite};
use equihit::{Error, ExactHitting, Graph, PairLabeling, Partition, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "equihit",
    version,
    about = "Exact hitting times of random walks on f-equitable graphs",
    after_help = "GRAPH arguments accept a built-in name (petersen, cN, kN, pN, starN), \
                  gp:X:K for a generalized Paley graph, a JSON file {\"n\":..,\"edges\":[[u,v],..]}, \
                  or a Cartesian product of these joined by '*'."
)]
pub struct Cli {
    /// Output format; CSV is available for flat tables only.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Pretty-print JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a graph as JSON, or a summary of it.
    Graph(GraphArgs),
    /// Check or refine a partition and print its quotient matrix.
    Partition(PartitionArgs),
    /// Check that a labeling makes a graph f-equitable.
    Fequitable(LabeledGraphArgs),
    /// Hitting times by full solve, quotient solve or simulation.
    Hitting {
        #[command(subcommand)]
        mode: HittingMode,
    },
    /// Intersection array and hitting times of a distance-regular graph.
    Drg(DrgArgs),
    /// Quotient and hitting times of a product of strongly regular graphs.
    Srgprod(SrgProdArgs),
    /// Parameters, quotient and hitting times of a generalized Paley graph.
    Paley(PaleyArgs),
    /// Run identity batteries and print one PASS/FAIL line per identity.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long, value_name = "GRAPH")]
    pub graph: String,
    /// Print vertex count, edges, regularity, connectivity and diameter.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long, value_name = "GRAPH")]
    pub graph: String,
    /// JSON file {"blocks": [[..], ..]}.
    #[arg(long, value_name = "FILE", conflicts_with = "center")]
    pub blocks: Option<String>,
    /// Start from {{center}, rest}.
    #[arg(long)]
    pub center: Option<usize>,
    /// Refine to the coarsest equitable refinement first.
    #[arg(long)]
    pub refine: bool,
    /// Include the column-stochastic block transition matrix.
    #[arg(long)]
    pub transition: bool,
}

#[derive(Debug, Args)]
pub struct LabeledGraphArgs {
    #[arg(long, value_name = "GRAPH")]
    pub graph: String,
    /// distance, common-neighbors, product (factor-wise distance on A*B),
    /// paley (needs a gp:X:K graph) or a JSON file {"name":..,"table":[[..]]}.
    #[arg(long, default_value = "distance")]
    pub labeling: String,
}

#[derive(Debug, Subcommand)]
pub enum HittingMode {
    /// Full first-step solve on the whole graph.
    Exact {
        #[arg(long, value_name = "GRAPH")]
        graph: String,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        source: Option<usize>,
    },
    /// Quotient solve from a labeling certificate, or from the equitable
    /// refinement stabilized at `--target` when no labeling is given.
    Quotient {
        #[arg(long, value_name = "GRAPH")]
        graph: String,
        #[arg(long)]
        labeling: Option<String>,
        #[arg(long, conflicts_with = "labeling")]
        target: Option<usize>,
    },
    /// Monte Carlo estimate with a seeded generator.
    Mc {
        #[arg(long, value_name = "GRAPH")]
        graph: String,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        step_cap: u64,
    },
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true))]
pub struct DrgArgs {
    #[arg(long, value_name = "GRAPH", group = "input")]
    pub graph: Option<String>,
    /// Intersection array "b0,b1,..;c1,c2,..".
    #[arg(long, group = "input")]
    pub array: Option<String>,
    /// Include subconstituent sizes and closed-form hitting times.
    #[arg(long)]
    pub hitting: bool,
    /// Include the tridiagonal quotient matrix.
    #[arg(long)]
    pub quotient: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("first").required(true))]
pub struct SrgProdArgs {
    #[arg(long, value_name = "GRAPH", group = "first")]
    pub graph: Option<String>,
    /// Parameters "n,k,a,c".
    #[arg(long, group = "first")]
    pub params: Option<String>,
    /// Second factor; defaults to the first.
    #[arg(long, value_name = "GRAPH", conflicts_with = "params2")]
    pub graph2: Option<String>,
    #[arg(long)]
    pub params2: Option<String>,
    /// Include hitting times from the 9x9 quotient.
    #[arg(long)]
    pub hitting: bool,
    /// Include the closed form for equal factors.
    #[arg(long)]
    pub closed_form: bool,
}

#[derive(Debug, Args)]
pub struct PaleyArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub k: u64,
    /// Include the parameters (always present).
    #[arg(long)]
    pub params: bool,
    /// Include the quotient matrix found on the graph.
    #[arg(long)]
    pub quotient: bool,
    /// Include hitting times from the quotient solve.
    #[arg(long)]
    pub hitting: bool,
    /// Include the closed form (k = 3 or 4).
    #[arg(long)]
    pub closed_form: bool,
    /// Check closed form, quotient solve and full oracle against each other.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// fequitable, drg, srgprod, paley3, paley4, lemmas or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Worker threads; overrides EQUIHIT_THREADS.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Why a command failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Domain(Error),
    Input { kind: &'static str, detail: String },
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::Input { .. } => 1,
            CliError::Usage(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.kind(),
            CliError::Input { kind, .. } => kind,
            CliError::Usage(_) => "Usage",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            CliError::Domain(e) => e.to_string(),
            CliError::Input { detail, .. } | CliError::Usage(detail) => detail.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"detail": self.detail(), "kind": self.kind()}})
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn input(detail: impl Into<String>) -> CliError {
    CliError::Input {
        kind: "InvalidInput",
        detail: detail.into(),
    }
}

type CliResult<T> = Result<T, CliError>;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A command's result before formatting.
struct Report {
    json: Value,
    table: Option<Table>,
    lines: Option<Vec<String>>,
    code: i32,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn json(json: Value) -> Self {
        Report {
            json,
            table: None,
            lines: None,
            code: 0,
        }
    }

    fn with_table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }
}

pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Invocation {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Invocation {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli).and_then(|report| render(&cli, report)) {
        Ok((code, stdout, stderr)) => Invocation {
            code,
            stdout,
            stderr,
        },
        Err(e) => Invocation {
            code: e.exit_code(),
            stdout: format!("{}\n", e.to_json()),
            stderr: format!("error: {}\n", e.detail()),
        },
    }
}

fn render(cli: &Cli, report: Report) -> CliResult<(i32, String, String)> {
    let default = if report.lines.is_some() {
        Format::Text
    } else {
        Format::Json
    };
    let stdout = match cli.format.unwrap_or(default) {
        Format::Json => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&report.json)
            } else {
                serde_json::to_string(&report.json)
            };
            text.expect("JSON values serialize") + "\n"
        }
        Format::Csv => {
            let table = report.table.ok_or_else(|| {
                CliError::Usage("CSV output is only available for flat tables".into())
            })?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).expect("in-memory write");
            for row in &table.rows {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
        }
        Format::Text => {
            let lines = report.lines.ok_or_else(|| {
                CliError::Usage("text output is only available for verify reports".into())
            })?;
            lines.iter().map(|l| format!("{l}\n")).collect()
        }
    };
    Ok((report.code, stdout, String::new()))
}

fn execute(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Graph(a) => cmd_graph(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Fequitable(a) => cmd_fequitable(a),
        Command::Hitting { mode } => cmd_hitting(mode),
        Command::Drg(a) => cmd_drg(a),
        Command::Srgprod(a) => cmd_srgprod(a),
        Command::Paley(a) => cmd_paley(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn to_value<S: serde::Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn read_json<D: serde::de::DeserializeOwned>(path: &str) -> CliResult<D> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input {
        kind: "Io",
        detail: format!("{path}: {e}"),
    })?;
    serde_json::from_str(&text).map_err(|e| input(format!("{path}: {e}")))
}

fn parse_factor(spec: &str) -> CliResult<Graph> {
    if let Some(rest) = spec.strip_prefix("gp:") {
        let (x, k) = parse_gp(rest)?;
        return Ok(gp_graph(x, k)?);
    }
    if let Some(g) = Graph::named(spec) {
        return Ok(g);
    }
    if fs::metadata(spec).is_ok() {
        return Ok(Graph::from_json(&read_json::<GraphJson>(spec)?)?);
    }
    Err(input(format!(
        "{spec:?} is neither a built-in graph nor a readable file"
    )))
}

fn parse_gp(rest: &str) -> CliResult<(u64, u64)> {
    let (x, k) = rest
        .split_once(':')
        .ok_or_else(|| input(format!("expected gp:X:K, got gp:{rest}")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| input(format!("bad number {s:?}")))
    };
    Ok((num(x)?, num(k)?))
}

fn factors(spec: &str) -> Vec<&str> {
    spec.split('*').map(str::trim).collect()
}

/// Parses a graph argument; products are folded left to right.
pub fn parse_graph(spec: &str) -> CliResult<Graph> {
    let mut parts = factors(spec).into_iter();
    let mut g = parse_factor(parts.next().unwrap_or_default())?;
    for part in parts {
        g = g.cartesian_product(&parse_factor(part)?);
    }
    Ok(g)
}

fn parse_labeling(spec: &str, graph_spec: &str, g: &Graph) -> CliResult<PairLabeling> {
    match spec {
        "distance" => Ok(distance_labeling(g)?),
        "common-neighbors" => Ok(common_neighbor_labeling(g)),
        "product" => {
            let parts = factors(graph_spec);
            if parts.len() < 2 {
                return Err(input("the product labeling needs a graph of the form A*B"));
            }
            let mut f: Option<PairLabeling> = None;
            for part in parts {
                let d = distance_labeling(&parse_factor(part)?)?;
                f = Some(match f {
                    None => d,
                    Some(prev) => product_labeling(&prev, &d),
                });
            }
            Ok(f.expect("at least two factors"))
        }
        "paley" => {
            let rest = graph_spec
                .strip_prefix("gp:")
                .ok_or_else(|| input("the paley labeling needs a gp:X:K graph"))?;
            let (x, k) = parse_gp(rest)?;
            Ok(paley_labeling(x, k)?)
        }
        path => {
            let v: Value = read_json(path)?;
            let table: Vec<Vec<i64>> = serde_json::from_value(v["table"].clone())
                .map_err(|e| input(format!("{path}: table: {e}")))?;
            let name = v["name"].as_str().unwrap_or(path).to_string();
            let f = PairLabeling::from_table(name, &table)?;
            if f.vertex_count() != g.vertex_count() {
                return Err(input(format!(
                    "labeling covers {} vertices, graph has {}",
                    f.vertex_count(),
                    g.vertex_count()
                )));
            }
            Ok(f)
        }
    }
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(
        v.iter()
            .map(|r| Value::String(render_rational(r)))
            .collect(),
    )
}

fn floats(v: &[Rational]) -> Value {
    json!(v.iter().map(Scalar::to_f64_lossy).collect::<Vec<f64>>())
}

fn hitting_rows(h: &ExactHitting) -> Vec<Vec<String>> {
    h.labels
        .iter()
        .zip(&h.values)
        .map(|(l, v)| {
            vec![
                l.to_string(),
                render_rational(v),
                v.to_f64_lossy().to_string(),
            ]
        })
        .collect()
}

fn hitting_report(h: &ExactHitting, mut extra: Value) -> Report {
    let obj = extra.as_object_mut().expect("object");
    for (k, v) in to_value(&h.to_json()).as_object().expect("object") {
        obj.insert(k.clone(), v.clone());
    }
    Report::json(extra).with_table(vec!["label", "h", "h_float"], hitting_rows(h))
}

fn cmd_graph(a: &GraphArgs) -> CliResult<Report> {
    let g = parse_graph(&a.graph)?;
    if !a.summary {
        let rows = g
            .edges()
            .map(|(u, v)| vec![u.to_string(), v.to_string()])
            .collect();
        return Ok(Report::json(to_value(&g.to_json())).with_table(vec!["u", "v"], rows));
    }
    let json = json!({
        "connected": g.is_connected(),
        "diameter": g.diameter().finite(),
        "edges": g.edge_count(),
        "n": g.vertex_count(),
        "regular_degree": g.regular_degree(),
    });
    Ok(Report::json(json))
}

fn cmd_partition(a: &PartitionArgs) -> CliResult<Report> {
    let g = parse_graph(&a.graph)?;
    let n = g.vertex_count();
    let mut p = match (&a.blocks, a.center) {
        (Some(path), _) => Partition::new(n, read_json::<PartitionJson>(path)?.blocks)?,
        (None, Some(c)) => Partition::centered(n, c)?,
        (None, None) => Partition::unit(n),
    };
    if a.refine {
        p = refine_to_equitable(&g, &p)?;
    }
    let mut out = json!({"partition": to_value(&p.to_json())});
    match quotient_matrix(&g, &p) {
        Ok(q) => {
            out["equitable"] = json!(true);
            if a.transition {
                let t = transition_matrix::<Rational>(&q)?;
                let rows: Vec<Value> = t.t.to_rows().iter().map(|r| rationals(r)).collect();
                out["transition"] = Value::Array(rows);
            }
            out["quotient"] = to_value(&q.to_json());
        }
        Err(e @ Error::NotEquitable { .. }) => {
            out["equitable"] = json!(false);
            out["witness"] = json!(e.to_string());
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Report::json(out))
}

fn cmd_fequitable(a: &LabeledGraphArgs) -> CliResult<Report> {
    let g = parse_graph(&a.graph)?;
    let f = parse_labeling(&a.labeling, &a.graph, &g)?;
    let cert = check_f_equitable(&g, &f).map_err(Error::Violation)?;
    Ok(Report::json(to_value(&cert.to_json())))
}

fn cmd_hitting(mode: &HittingMode) -> CliResult<Report> {
    match mode {
        HittingMode::Exact {
            graph,
            target,
            source,
        } => {
            let g = parse_graph(graph)?;
            let h = exact_hitting_full::<Rational>(&g, *target)?;
            if let Some(s) = source {
                g.check_vertex(*s)?;
                let v = &h[*s];
                let json = json!({
                    "h": render_rational(v),
                    "h_float": v.to_f64_lossy(),
                    "source": s,
                    "target": target,
                });
                let row = vec![
                    s.to_string(),
                    render_rational(v),
                    v.to_f64_lossy().to_string(),
                ];
                return Ok(Report::json(json).with_table(vec!["source", "h", "h_float"], vec![row]));
            }
            let rows = h
                .iter()
                .enumerate()
                .map(|(u, v)| {
                    vec![
                        u.to_string(),
                        render_rational(v),
                        v.to_f64_lossy().to_string(),
                    ]
                })
                .collect();
            let json = json!({"h": rationals(&h), "h_float": floats(&h), "target": target});
            Ok(Report::json(json).with_table(vec!["source", "h", "h_float"], rows))
        }
        HittingMode::Quotient {
            graph,
            labeling,
            target,
        } => {
            let g = parse_graph(graph)?;
            if let Some(spec) = labeling {
                let f = parse_labeling(spec, graph, &g)?;
                let cert = check_f_equitable(&g, &f).map_err(Error::Violation)?;
                let h = hitting_from_certificate::<Rational>(&cert)?;
                return Ok(hitting_report(&h, json!({"valency": cert.valency})));
            }
            let target = target.unwrap_or(0);
            let p = refine_to_equitable(&g, &Partition::centered(g.vertex_count(), target)?)?;
            let h = hitting_from_partition::<Rational>(&g, &p)?;
            Ok(hitting_report(
                &h,
                json!({"blocks": p.blocks(), "target": target}),
            ))
        }
        HittingMode::Mc {
            graph,
            source,
            target,
            trials,
            seed,
            step_cap,
        } => {
            let g = parse_graph(graph)?;
            let est = mc_hitting(&g, *source, *target, *trials, *seed, *step_cap)?;
            let mut json = to_value(&est);
            json["source"] = json!(source);
            json["target"] = json!(target);
            let row = vec![
                source.to_string(),
                target.to_string(),
                est.trials.to_string(),
                est.seed.to_string(),
                est.mean.to_string(),
                est.std_error.to_string(),
                est.truncated.to_string(),
            ];
            Ok(Report::json(json).with_table(
                vec![
                    "source",
                    "target",
                    "trials",
                    "seed",
                    "mean",
                    "std_error",
                    "truncated",
                ],
                vec![row],
            ))
        }
    }
}

/// Parses "b0,b1,..;c1,c2,..".
pub fn parse_array(s: &str) -> CliResult<IntersectionArray> {
    let (b, c) = s
        .split_once(';')
        .ok_or_else(|| input(format!("expected \"b0,..;c1,..\", got {s:?}")))?;
    let list = |part: &str| -> CliResult<Vec<u64>> {
        part.split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| input(format!("bad number {v:?}")))
            })
            .collect()
    };
    Ok(IntersectionArray::new(list(b)?, list(c)?)?)
}

fn cmd_drg(a: &DrgArgs) -> CliResult<Report> {
    let arr = match (&a.graph, &a.array) {
        (Some(spec), _) => intersection_array(&parse_graph(spec)?)?,
        (None, Some(s)) => parse_array(s)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let mut json = to_value(&arr);
    let mut report_table = None;
    if a.hitting {
        let h = biggs_hitting::<Rational>(&arr)?;
        json["k"] = json!(arr.subconstituent_sizes()?);
        json["h"] = rationals(&h.values);
        json["h_float"] = floats(&h.values);
        report_table = Some(hitting_rows(&h));
    }
    if a.quotient {
        json["quotient"] = to_value(&drg_quotient_matrix(&arr)?.to_json());
    }
    let report = Report::json(json);
    Ok(match report_table {
        Some(rows) => report.with_table(vec!["label", "h", "h_float"], rows),
        None => report,
    })
}

fn parse_srg(s: &str) -> CliResult<SrgParams> {
    let v: Vec<u64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| input(format!("bad number {p:?}")))
        })
        .collect::<CliResult<_>>()?;
    match v[..] {
        [n, k, a, c] => Ok(SrgParams::new(n, k, a, c)?),
        _ => Err(input(format!("expected n,k,a,c, got {s:?}"))),
    }
}

fn cmd_srgprod(a: &SrgProdArgs) -> CliResult<Report> {
    let first = match (&a.graph, &a.params) {
        (Some(g), _) => srg_params(&parse_graph(g)?)?,
        (None, Some(p)) => parse_srg(p)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let second = match (&a.graph2, &a.params2) {
        (Some(g), _) => srg_params(&parse_graph(g)?)?,
        (None, Some(p)) => parse_srg(p)?,
        (None, None) => first,
    };
    let q = product_quotient(&first, &second);
    let mut json = json!({
        "first": to_value(&first),
        "kronecker_sum_agrees": q.q == kronecker_quotient(&first, &second),
        "quotient": to_value(&q.to_json()),
        "second": to_value(&second),
    });
    let mut table = None;
    if a.hitting {
        let valency = Rational::from_integer((first.k + second.k).into());
        let h = solve_h(
            &q.to_scalar::<Rational>()
                .scaled(&(Rational::from_integer(1.into()) / valency)),
        )?
        .with_labels(q.labels[1..].to_vec());
        for (k, v) in to_value(&h.to_json()).as_object().expect("object") {
            json[k] = v.clone();
        }
        table = Some(hitting_rows(&h));
    }
    if a.closed_form {
        if first != second {
            return Err(input("the closed form needs equal factors"));
        }
        let closed = square_hitting_closed_form(&first)?;
        let mut obj = serde_json::Map::new();
        let mut rows = Vec::new();
        for (case, h) in closed.cases() {
            obj.insert(case.name().to_string(), json!(render_rational(&h)));
            rows.push(vec![
                case.name().to_string(),
                render_rational(&h),
                h.to_f64_lossy().to_string(),
            ]);
        }
        json["closed_form"] = Value::Object(obj);
        table.get_or_insert(rows);
    }
    let report = Report::json(json);
    Ok(match table {
        Some(rows) => report.with_table(vec!["label", "h", "h_float"], rows),
        None => report,
    })
}

fn closed_form(params: &QsrParams) -> CliResult<ExactHitting> {
    match params.k {
        3 => Ok(gen3_closed_form(params)?),
        4 => Ok(gen4_closed_form(params)?),
        k => Err(input(format!(
            "closed forms exist for k = 3 and 4, not {k}"
        ))),
    }
}

fn paley_checks(x: u64, k: u64, params: &QsrParams) -> Vec<(String, Result<(), String>)> {
    let mut checks = Vec::new();
    let g = gp_graph(x, k).expect("parameters already validated");
    let f = paley_labeling(x, k).expect("parameters already validated");
    let cert = check_f_equitable(&g, &f).map_err(|v| v.to_string());
    checks.push((
        "labeling is f-equitable".to_string(),
        cert.as_ref().map(|_| ()).map_err(Clone::clone),
    ));
    let Ok(cert) = cert else { return checks };
    checks.push((
        "quotient row 1, symmetry and diagonal identities".into(),
        paley_quotient_identities(&cert.quotient, &params.c),
    ));
    let printed = match k {
        3 => Some(q_x3(params)),
        4 => Some(q_x4(params)),
        _ => None,
    };
    if let Some(printed) = printed {
        let r = printed.map_err(|e| e.to_string()).and_then(|q| {
            if q.q == cert.quotient.q {
                Ok(())
            } else {
                Err("matrices differ".into())
            }
        });
        checks.push(("parametrised quotient = quotient on the graph".into(), r));
    }
    if k == 4 {
        let c = &params.c;
        let r = if c[1] + c[3] == 2 * c[2] && (1 + c[0] + c[2]).is_multiple_of(2) {
            Ok(())
        } else {
            Err(format!("c = {c:?}"))
        };
        checks.push(("c2 + c4 = 2 c3 and 1 + c1 + c3 even".into(), r));
    }
    let solved = hitting_from_certificate::<Rational>(&cert).map_err(|e| e.to_string());
    if k == 3 || k == 4 {
        let r = closed_form(params)
            .map_err(|e| e.detail())
            .and_then(|closed| {
                let solved = solved.clone()?;
                if closed.values == solved.values {
                    Ok(())
                } else {
                    Err(format!(
                        "closed form {:?} vs solve {:?}",
                        closed.values, solved.values
                    ))
                }
            });
        checks.push(("closed form = quotient solve".into(), r));
    }
    let r = solved.and_then(|h| compare_with_oracle(&g, &f, &h, [0]));
    checks.push(("quotient solve = full-graph oracle".into(), r));
    checks
}

fn cmd_paley(a: &PaleyArgs) -> CliResult<Report> {
    let params = qsr_params(a.x, a.k)?;
    let mut json = to_value(&params);
    let mut table: Option<Vec<Vec<String>>> = None;
    let mut code = 0;
    if a.quotient || a.hitting {
        let cert = check_f_equitable(&gp_graph(a.x, a.k)?, &paley_labeling(a.x, a.k)?)
            .map_err(Error::Violation)?;
        if a.quotient {
            json["quotient"] = to_value(&cert.quotient.to_json());
        }
        if a.hitting {
            let h = hitting_from_certificate::<Rational>(&cert)?;
            for (k, v) in to_value(&h.to_json()).as_object().expect("object") {
                json[k] = v.clone();
            }
            table = Some(hitting_rows(&h));
        }
    }
    if a.closed_form {
        let h = closed_form(&params)?;
        json["closed_form"] = rationals(&h.values);
        table.get_or_insert_with(|| hitting_rows(&h));
    }
    let mut lines = Vec::new();
    if a.verify {
        let mut out = Vec::new();
        for (name, r) in paley_checks(a.x, a.k, &params) {
            match &r {
                Ok(()) => lines.push(format!("PASS GP({},{}): {name}", a.x, a.k)),
                Err(w) => {
                    code = 1;
                    lines.push(format!("FAIL GP({},{}): {name}: {w}", a.x, a.k));
                }
            }
            out.push(json!({"identity": name, "passed": r.is_ok(), "witness": r.err()}));
        }
        json["checks"] = Value::Array(out);
    }
    let mut report = Report::json(json);
    report.code = code;
    if a.verify {
        report.lines = Some(lines);
    }
    if table.is_none() && !a.verify {
        let rows = params
            .c
            .iter()
            .enumerate()
            .map(|(i, c)| vec![(i + 1).to_string(), c.to_string()])
            .collect();
        return Ok(report.with_table(vec!["class", "c"], rows));
    }
    Ok(match table {
        Some(rows) => report.with_table(vec!["label", "h", "h_float"], rows),
        None => report,
    })
}

fn thread_count(flag: Option<usize>) -> CliResult<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("EQUIHIT_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| input(format!("EQUIHIT_THREADS={s:?} is not a thread count"))),
        _ => Ok(None),
    }
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<Report> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(CliError::Usage)?]
    };
    let outcomes = run_suites(&suites, thread_count(a.threads)?);
    let passed = outcomes.iter().all(|o| o.passed());
    let json = json!({
        "outcomes": outcomes.iter().map(|o| json!({
            "name": o.name,
            "passed": o.passed(),
            "suite": o.suite.name(),
            "witness": o.failure,
        })).collect::<Vec<_>>(),
        "passed": passed,
    });
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.suite.name().to_string(),
                o.name.clone(),
                if o.passed() { "PASS" } else { "FAIL" }.to_string(),
                o.failure.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut report =
        Report::json(json).with_table(vec!["suite", "name", "result", "witness"], rows);
    report.lines = Some(outcomes.iter().map(ToString::to_string).collect());
    report.code = if passed { 0 } else { 1 };
    Ok(report)
}
