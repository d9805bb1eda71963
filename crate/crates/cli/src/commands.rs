use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use cu_sketch_lab::experiments::{
    self, dual_complete_check, error_distribution, metadata_header, parse_grid, regular_core_check,
    write_atomic, DistributionConfig, ExperimentConfig, SweepRow, SweepSummary,
};
use cu_sketch_lab::hypergraph::{
    gen_2regular_3uniform, gen_dual_complete_r, gen_erdos_renyi, parse_edge_list, peel,
    write_edge_list, Level,
};
use cu_sketch_lab::process::{self, RunSummary};
use cu_sketch_lab::sketch::guarantee_dims;
use cu_sketch_lab::streams::{read_keys, StreamSpec};
use cu_sketch_lab::{seed, CountingSketch64, Error, Hypergraph, Result};

use crate::{
    Command, DistArgs, DualArgs, Format, GenArgs, GraphKind, OutputArgs, PeelArgs, RandomGraphArgs,
    RegularArgs, RunArgs, SketchArgs, SweepArgs, ZipfArgs,
};

pub fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Peel(a) => peel_cmd(a),
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Dist(a) => dist(a),
        Command::Zipf(a) => zipf(a),
        Command::Dual(a) => dual(a),
        Command::Regular(a) => regular(a),
        Command::Sketch(a) => sketch(a),
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn emit(
    output: &OutputArgs,
    csv: impl FnOnce(&str) -> String,
    json: impl FnOnce(&str) -> Value,
) -> Result<()> {
    let header = metadata_header(output.seed);
    let bytes = match output.format {
        Format::Csv => csv(&header),
        Format::Json => {
            let mut body = json(&header);
            if let Value::Object(map) = &mut body {
                map.insert("header".into(), Value::String(header));
            }
            let mut s = serde_json::to_string_pretty(&body)?;
            s.push('\n');
            s
        }
    };
    write_atomic(&output.out, bytes.as_bytes())?;
    Ok(())
}

fn read_graph(path: &Path) -> Result<Hypergraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

fn random_graph(args: &RandomGraphArgs, seed: u64) -> Result<Hypergraph> {
    let lambda = args.lambda.ok_or_else(|| invalid("--lambda is required"))?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("--lambda must be positive, got {lambda}")));
    }
    let m = (lambda * args.n as f64).round() as usize;
    gen_erdos_renyi(args.n, m, args.k, seed)
}

fn graph_json(h: &Hypergraph) -> Value {
    json!({ "k": h.k(), "n": h.n(), "m": h.m(), "edges": h.edges().collect::<Vec<_>>() })
}

fn gen(a: GenArgs) -> Result<()> {
    let graph_seed = seed::derive(a.output.seed, "graph", &[]);
    let h = match a.kind {
        GraphKind::Random => random_graph(&a.graph, graph_seed)?,
        GraphKind::Dual => gen_dual_complete_r(a.graph.n, a.r)?,
        GraphKind::Regular => gen_2regular_3uniform(
            a.t.ok_or_else(|| invalid("--kind regular needs --t"))?,
            graph_seed,
        )?,
    };
    emit(
        &a.output,
        |hd| format!("{hd}\n{}", write_edge_list(&h)),
        |_| graph_json(&h),
    )
}

fn level_label(level: Level) -> String {
    match level {
        Level::Peeled(l) => l.to_string(),
        Level::Core => "core".into(),
        Level::Marked => "marked".into(),
    }
}

fn peel_cmd(a: PeelArgs) -> Result<()> {
    let h = read_graph(&a.input)?;
    let r = peel(&h, &a.marked)?;
    emit(
        &a.output,
        |hd| {
            let mut out = format!("{hd}\nvertex,level\n");
            for (v, &l) in r.levels.iter().enumerate() {
                writeln!(out, "{v},{}", level_label(l)).unwrap();
            }
            out
        },
        |_| {
            json!({
                "peelable": r.peelable,
                "rounds": r.rounds,
                "core_fraction": r.core_fraction(),
                "core_vertices": r.core_vertices,
                "core_edges": r.core_edges,
                "levels": r.levels.iter().map(|&l| level_label(l)).collect::<Vec<_>>(),
            })
        },
    )
}

fn run(a: RunArgs) -> Result<()> {
    let root = a.output.seed;
    let h = match &a.input {
        Some(path) => read_graph(path)?,
        None => random_graph(&a.graph, seed::derive(root, "graph", &[]))?,
    };
    let model = a.stream.model()?;
    let strategy = a.strategy.single()?;
    let spec = StreamSpec::new(
        model.clone(),
        a.stream.multiplicity,
        seed::derive(root, "stream", &[]),
    );
    let (report, _) = process::run::<u64>(&h, &spec, strategy, a.check_invariants)?;
    emit(
        &a.output,
        |hd| format!("{hd}\n{}", report.to_csv()),
        |_| {
            let summary =
                RunSummary::new(&h, &report, a.stream.multiplicity, &model, strategy, root);
            json!({ "summary": summary, "edges": report.edges })
        },
    )
}

fn lambdas(lambda: Option<f64>, grid: Option<&str>) -> Result<Vec<f64>> {
    match (lambda, grid) {
        (Some(l), None) => Ok(vec![l]),
        (None, Some(g)) => parse_grid(g),
        (None, None) => Err(invalid("one of --lambda or --lambda-grid is required")),
        (Some(_), Some(_)) => Err(invalid("--lambda and --lambda-grid are exclusive")),
    }
}

fn sweep_output(output: &OutputArgs, config: &ExperimentConfig, rows: &[SweepRow]) -> Result<()> {
    emit(
        output,
        |_| SweepRow::to_csv(rows, config.root_seed),
        |_| serde_json::to_value(SweepSummary::new(config, rows)).expect("summary serializes"),
    )
}

fn sweep(a: SweepArgs) -> Result<()> {
    let config = ExperimentConfig {
        k: a.k,
        n: a.n,
        lambdas: lambdas(a.lambda, a.lambda_grid.as_deref())?,
        multiplicity: a.stream.multiplicity,
        model: a.stream.model()?,
        strategies: a.strategy.all(),
        replicates: a.replicates,
        root_seed: a.output.seed,
        check_invariants: a.check_invariants,
    };
    let rows = experiments::sweep_lambda(&config)?;
    sweep_output(&a.output, &config, &rows)
}

fn zipf(a: ZipfArgs) -> Result<()> {
    if a.betas.iter().any(|b| !(*b >= 0.0 && b.is_finite())) {
        return Err(invalid("--betas must be finite and non-negative"));
    }
    let config = ExperimentConfig {
        k: a.k,
        n: a.n,
        lambdas: lambdas(a.lambda, a.lambda_grid.as_deref())?,
        multiplicity: a.multiplicity,
        model: cu_sketch_lab::StreamModel::Uniform,
        strategies: a.strategy.all(),
        replicates: a.replicates,
        root_seed: a.output.seed,
        check_invariants: a.check_invariants,
    };
    let rows = experiments::zipf_sweep(&config, &a.betas)?;
    emit(
        &a.output,
        |_| SweepRow::to_csv(&rows, config.root_seed),
        |_| {
            let mut v = serde_json::to_value(SweepSummary::new(&config, &rows))
                .expect("summary serializes");
            v["betas"] = json!(a.betas);
            v
        },
    )
}

fn dist(a: DistArgs) -> Result<()> {
    let lambda = a
        .graph
        .lambda
        .ok_or_else(|| invalid("--lambda is required"))?;
    let config = DistributionConfig {
        k: a.graph.k,
        lambda,
        n: a.graph.n,
        multiplicity: a.stream.multiplicity,
        model: a.stream.model()?,
        strategy: a.strategy.single()?,
        bin_width: a.bin_width,
        seed: a.output.seed,
    };
    let d = error_distribution(&config)?;
    emit(
        &a.output,
        |hd| d.to_csv(hd),
        |_| {
            let mode = d
                .histogram
                .dominant_mode(3)
                .map(|(center, fraction)| json!({ "center": center, "fraction": fraction }));
            json!({
                "config": config,
                "err_unweighted": d.report.err_unweighted,
                "err_weighted": d.report.err_weighted,
                "mode": mode,
                "histogram": d.histogram,
            })
        },
    )
}

fn dual(a: DualArgs) -> Result<()> {
    let model = a.stream.model()?;
    let checks = a
        .strategy
        .all()
        .into_iter()
        .map(|s| {
            dual_complete_check(
                a.n,
                a.r,
                a.stream.multiplicity,
                model.clone(),
                s,
                a.output.seed,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    emit(
        &a.output,
        |hd| {
            let mut out = format!(
                "{hd}\nn,r,N,model,strategy,measured_mean_r,predicted_r,mean_vertex_ratio,min_vertex_ratio,max_vertex_ratio,predicted_vertex_ratio\n"
            );
            for c in &checks {
                writeln!(
                    out,
                    "{},{},{},{model},{},{},{},{},{},{},{}",
                    c.n,
                    c.r,
                    a.stream.multiplicity,
                    c.strategy,
                    c.measured_mean_r,
                    c.predicted_r,
                    c.mean_vertex_ratio,
                    c.min_vertex_ratio,
                    c.max_vertex_ratio,
                    c.predicted_vertex_ratio
                )
                .unwrap();
            }
            out
        },
        |_| json!({ "N": a.stream.multiplicity, "model": model.to_string(), "checks": checks }),
    )
}

fn regular(a: RegularArgs) -> Result<()> {
    let model = a.stream.model()?;
    let strategies = a.strategy.all();
    let checks = strategies
        .iter()
        .map(|&s| {
            regular_core_check(
                a.t,
                a.stream.multiplicity,
                model.clone(),
                s,
                a.output.seed,
                a.replicates,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    emit(
        &a.output,
        |hd| {
            let mut out = format!("{hd}\nt,N,model,strategy,replicate,err\n");
            for (s, c) in strategies.iter().zip(&checks) {
                for (r, e) in c.errors.iter().enumerate() {
                    writeln!(out, "{},{},{model},{s},{r},{e}", a.t, a.stream.multiplicity).unwrap();
                }
            }
            out
        },
        |_| {
            let runs: Vec<Value> = strategies
                .iter()
                .zip(&checks)
                .map(|(s, c)| json!({ "strategy": s, "check": c }))
                .collect();
            json!({ "N": a.stream.multiplicity, "model": model.to_string(), "runs": runs })
        },
    )
}

fn sketch(a: SketchArgs) -> Result<()> {
    let (width, depth) = match (a.width, a.depth) {
        (Some(w), Some(d)) => (w, d),
        (w, d) => {
            let (sw, sd) = guarantee_dims(a.epsilon, a.delta)?;
            (w.unwrap_or(sw), d.unwrap_or(sd))
        }
    };
    let keys = read_keys(std::io::BufReader::new(std::fs::File::open(&a.input)?))?;
    let hash_seed = seed::derive(a.output.seed, "sketch-hash", &[]);
    let mut sk = CountingSketch64::new(width, depth, hash_seed, a.strategy.single()?)?;
    let mut counts = std::collections::BTreeMap::new();
    for &key in &keys {
        sk.update(key.to_le_bytes());
        *counts.entry(key).or_insert(0u64) += 1;
    }
    if let Some(path) = &a.save {
        write_atomic(path, &sk.export())?;
    }
    let rows: Vec<(u32, u64, u64)> = counts
        .into_iter()
        .map(|(key, count)| (key, count, sk.query(key.to_le_bytes())))
        .collect();
    emit(
        &a.output,
        |hd| {
            let mut out = format!("{hd}\nkey,count,estimate\n");
            for (key, count, est) in &rows {
                writeln!(out, "{key},{count},{est}").unwrap();
            }
            out
        },
        |_| {
            json!({
                "width": width,
                "depth": depth,
                "strategy": sk.strategy(),
                "stream_len": keys.len(),
                "keys": rows.iter().map(|(k, c, e)| json!({ "key": k, "count": c, "estimate": e })).collect::<Vec<_>>(),
            })
        },
    )
}
