use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use acmin::cluster::{acmin, approx_aamc, AcminParams, InitStrategy};
use acmin::graph::io::{self, load_assignment, write_assignment, AttributeList};
use acmin::metrics::{self, LabelVector, MetricsReport};
use acmin::oracle::{
    brute_force_min_aamc, materialize_s_capped, simulate_walks_parallel, usc_capped, WalkSampler, BRUTE_FORCE_MAX_N,
};
use acmin::{AttributedGraph, WalkOperator};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{ClusterArgs, EvalArgs, GraphArgs, Method, Metric, OracleAction, WalkArgs};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Lib(acmin::Error),
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(acmin::Error::CapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => e.fmt(f),
            CliError::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl From<acmin::Error> for CliError {
    fn from(e: acmin::Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

pub(crate) fn load(graph: &Path, attrs: Option<&Path>) -> CliResult<AttributedGraph> {
    match attrs {
        Some(a) => Ok(io::load_graph(graph, a)?),
        None => {
            let file = fs::File::open(graph).map_err(|e| invalid(format!("cannot open {}: {e}", graph.display())))?;
            let edges = io::read_edges(std::io::BufReader::new(file), graph)?;
            Ok(io::assemble(edges, AttributeList::default(), graph)?)
        }
    }
}

pub(crate) fn write_json(path: Option<&Path>, value: &impl Serialize) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| invalid(format!("cannot serialize output: {e}")))?;
    match path {
        Some(p) => fs::write(p, text + "\n").map_err(|e| invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| invalid(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Fully resolved clustering configuration, echoed into the run report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub method: Method,
    pub graph: PathBuf,
    pub attrs: Option<PathBuf>,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub te: usize,
    pub tm: usize,
    pub seed: u64,
    pub init: InitStrategy,
    pub max_dense_n: usize,
}

impl ClusterConfig {
    fn params(&self) -> AcminParams {
        AcminParams {
            k: self.k,
            alpha: self.alpha,
            beta: self.beta,
            max_iterations: self.te,
            rounding_iterations: self.tm,
            seed: self.seed,
            init: self.init,
        }
    }
}

fn resolve_config(args: &ClusterArgs) -> CliResult<ClusterConfig> {
    if let Some(path) = &args.replay {
        let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        let report: Value =
            serde_json::from_str(&text).map_err(|e| invalid(format!("{} is not JSON: {e}", path.display())))?;
        return serde_json::from_value(report["config"].clone())
            .map_err(|e| invalid(format!("{} has no usable config: {e}", path.display())));
    }
    Ok(ClusterConfig {
        method: args.method,
        graph: args.graph.clone().expect("required by clap"),
        attrs: args.attrs.clone(),
        k: args.k.expect("required by clap"),
        alpha: args.alpha,
        beta: args.beta,
        te: args.te,
        tm: args.tm,
        seed: args.seed,
        init: args.init.into(),
        max_dense_n: args.max_dense_n,
    })
}

pub fn cluster(args: &ClusterArgs) -> CliResult {
    let cfg = resolve_config(args)?;
    let params = cfg.params();
    params.validate()?;
    let graph = load(&cfg.graph, cfg.attrs.as_deref())?;
    if cfg.k > graph.n() {
        return Err(invalid(format!("k = {} exceeds the node count {}", cfg.k, graph.n())));
    }

    let (nci, result, timings) = match cfg.method {
        Method::Acmin => {
            let report = acmin(&graph, &params)?;
            let result = serde_json::to_value(&report).expect("report serializes");
            let timings = serde_json::to_value(&report.timings).expect("timings serialize");
            (report.best_nci, result, timings)
        }
        Method::Usc => {
            let start = std::time::Instant::now();
            let res = usc_capped(&graph, &params, cfg.max_dense_n)?;
            let op = WalkOperator::new(&graph, cfg.alpha, cfg.beta)?;
            let objective = approx_aamc(&op, &res.nci)?;
            let result = json!({
                "iterations": res.iterations,
                "converged": res.converged,
                "kmeans_sweeps": res.kmeans_sweeps,
                "objective": objective,
            });
            let timings = json!({ "total": start.elapsed().as_secs_f64() });
            (res.nci, result, timings)
        }
    };

    write_assignment(&args.out, &nci)?;
    let report_path = args.report.clone().unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".json");
        PathBuf::from(p)
    });
    let op = WalkOperator::new(&graph, cfg.alpha, cfg.beta)?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "cluster",
        "config": cfg,
        "graph": { "n": graph.n(), "m": graph.m(), "d": graph.d(), "attr_entries": graph.attr_entries() },
        "assignment": args.out,
        "aamc": metrics::aamc(&op, &nci)?,
        "result": result,
        "timings": timings,
    });
    write_json(Some(&report_path), &report)
}

pub fn eval(args: &EvalArgs) -> CliResult {
    let requested: Vec<Metric> = match &args.metrics {
        Some(m) => m.clone(),
        None => {
            let mut m = Vec::new();
            if args.labels.is_some() {
                m.extend([Metric::Ca, Metric::Nmi]);
            }
            if args.graph.is_some() {
                m.push(Metric::Modularity);
            }
            if args.graph.is_some() && args.attrs.is_some() {
                m.push(Metric::Aamc);
            }
            m
        }
    };
    if requested.is_empty() {
        return Err(invalid("no metrics requested and no labels or graph given"));
    }
    let needs_labels = requested.iter().any(|m| matches!(m, Metric::Ca | Metric::Nmi));
    let needs_graph = requested.iter().any(|m| matches!(m, Metric::Modularity | Metric::Aamc));
    if needs_labels && args.labels.is_none() {
        return Err(invalid("ca and nmi need --labels"));
    }
    if needs_graph && args.graph.is_none() {
        return Err(invalid("modularity and aamc need --graph"));
    }
    if requested.contains(&Metric::Aamc) && args.attrs.is_none() {
        return Err(invalid("aamc needs --graph and --attrs"));
    }

    let graph = match &args.graph {
        Some(g) if needs_graph => Some(load(g, args.attrs.as_deref())?),
        _ => None,
    };
    let labels = match &args.labels {
        Some(l) if needs_labels => Some(LabelVector::load(l, graph.as_ref().map(|g| g.n()))?),
        _ => None,
    };
    let n = graph.as_ref().map(|g| g.n()).or(labels.as_ref().map(|l| l.len()));
    let pred = load_assignment(&args.pred, n, None)?;

    let mut report = MetricsReport::new(&pred);
    let pred_src = args.pred.display().to_string();
    for metric in requested {
        match metric {
            Metric::Ca => {
                let l = labels.as_ref().expect("checked");
                report.ca = Some(metrics::clustering_accuracy(&pred, l)?);
                report.provenance.insert("ca".into(), format!("pred={pred_src} labels={}", show(&args.labels)));
            }
            Metric::Nmi => {
                let l = labels.as_ref().expect("checked");
                report.nmi = Some(metrics::nmi(&pred, l)?);
                report.provenance.insert("nmi".into(), format!("pred={pred_src} labels={}", show(&args.labels)));
            }
            Metric::Modularity => {
                let g = graph.as_ref().expect("checked");
                report.modularity = Some(metrics::modularity(g, &pred)?);
                report.provenance.insert("modularity".into(), format!("pred={pred_src} graph={}", show(&args.graph)));
            }
            Metric::Aamc => {
                let g = graph.as_ref().expect("checked");
                let op = WalkOperator::new(g, args.walk.alpha, args.walk.beta)?;
                report.aamc = Some(metrics::aamc(&op, &pred)?);
                report.provenance.insert(
                    "aamc".into(),
                    format!(
                        "pred={pred_src} graph={} attrs={} alpha={} beta={}",
                        show(&args.graph),
                        show(&args.attrs),
                        args.walk.alpha,
                        args.walk.beta
                    ),
                );
            }
        }
    }
    write_json(None, &report)
}

fn show(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or_else(|| "-".to_string(), |p| p.display().to_string())
}

fn operator_inputs(graph: &GraphArgs, walk: &WalkArgs) -> CliResult<AttributedGraph> {
    if !(walk.alpha > 0.0 && walk.alpha <= 1.0) || !(0.0..=1.0).contains(&walk.beta) {
        return Err(invalid(format!(
            "alpha must lie in (0, 1] and beta in [0, 1], got {} and {}",
            walk.alpha, walk.beta
        )));
    }
    load(&graph.graph, graph.attrs.as_deref())
}

pub fn oracle(action: &OracleAction) -> CliResult {
    match action {
        OracleAction::DenseS {
            graph,
            walk,
            t,
            max_dense_n,
            out,
        } => {
            let g = operator_inputs(graph, walk)?;
            let op = WalkOperator::new(&g, walk.alpha, walk.beta)?;
            let t = t.unwrap_or_else(|| op.truncation_depth());
            let s = materialize_s_capped(&op, t, *max_dense_n)?;
            let rows: Vec<&[f64]> = (0..s.n).map(|i| s.s.row(i)).collect();
            write_json(
                out.as_deref(),
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "n": s.n,
                    "t": s.t,
                    "alpha": s.alpha,
                    "beta": s.beta,
                    "row_mass": s.row_mass(),
                    "s": rows,
                }),
            )
        }
        OracleAction::Simulate {
            graph,
            walk,
            source,
            walks,
            max_len,
            seed,
            out,
        } => {
            let g = operator_inputs(graph, walk)?;
            if *source >= g.n() {
                return Err(invalid(format!("source {source} outside 0..{}", g.n())));
            }
            if *walks == 0 {
                return Err(invalid("--walks must be at least 1"));
            }
            let op = WalkOperator::new(&g, walk.alpha, walk.beta)?;
            let sampler = WalkSampler::new(&op);
            let trace = simulate_walks_parallel(&sampler, *source, *walks, *max_len, *seed, None)?;
            let freq: Vec<f64> = trace.counts.iter().map(|&c| c as f64 / *walks as f64).collect();
            write_json(
                out.as_deref(),
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "source": trace.source,
                    "n_r": trace.n_r,
                    "max_len": max_len,
                    "seed": seed,
                    "alpha": walk.alpha,
                    "beta": walk.beta,
                    "counts": trace.counts,
                    "frequencies": freq,
                    "truncated": trace.truncated,
                }),
            )
        }
        OracleAction::BruteForce { graph, walk, k, out } => {
            let g = operator_inputs(graph, walk)?;
            if g.n() > BRUTE_FORCE_MAX_N {
                return Err(acmin::Error::CapExceeded {
                    what: "partition enumeration",
                    n: g.n(),
                    cap: BRUTE_FORCE_MAX_N,
                }
                .into());
            }
            if *k == 0 || *k > g.n() {
                return Err(invalid(format!("k must lie in 1..={}, got {k}", g.n())));
            }
            let op = WalkOperator::new(&g, walk.alpha, walk.beta)?;
            let s = materialize_s_capped(&op, op.truncation_depth(), BRUTE_FORCE_MAX_N)?;
            let best = brute_force_min_aamc(&s, *k)?;
            write_json(
                out.as_deref(),
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "k": k,
                    "t": s.t,
                    "alpha": walk.alpha,
                    "beta": walk.beta,
                    "phi": best.phi,
                    "assignment": best.nci.assignment(),
                    "partitions": best.partitions,
                }),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_errors_exit_with_three() {
        let cap = CliError::from(acmin::Error::CapExceeded { what: "dense", n: 10, cap: 5 });
        assert_eq!(cap.exit_code(), 3);
        assert_eq!(invalid("bad").exit_code(), 2);
        assert_eq!(CliError::from(acmin::Error::Contract("k".into())).exit_code(), 2);
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ClusterConfig {
            method: Method::Usc,
            graph: "g.edges".into(),
            attrs: None,
            k: 4,
            alpha: 0.25,
            beta: 0.5,
            te: 10,
            tm: 3,
            seed: 9,
            init: InitStrategy::Random,
            max_dense_n: 100,
        };
        let back: ClusterConfig = serde_json::from_value(serde_json::to_value(&cfg).unwrap()).unwrap();
        assert_eq!(back.method, Method::Usc);
        assert_eq!(back.params(), cfg.params());
        assert_eq!(back.graph, cfg.graph);
    }
}
