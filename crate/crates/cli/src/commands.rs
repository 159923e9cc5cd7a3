use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kendall_core::analysis::{
    quantiles, rank_features, rank_transformed, simulate_bivariate, simulate_integration,
    simulate_multivariate_reps, synthetic_table, Decision, FeatureRanking, Method, Mixture,
    MultivariateScores, PERCENTILES,
};
use kendall_core::{
    copeland_inverse, expand_categorical, jitter_ties, merge_systems, transform_system, weighted_copeland,
    LogBase, OrdinalVector, Ranking, TransformedSystem,
};
use rayon::prelude::*;

use crate::table::{
    fmt_num, is_transformed, open_output, read_transformed, read_weighted, write_transformed, CliError, Column,
    Result, Table,
};

/// `--jitter seed:scale`
#[derive(Debug, Clone, Copy)]
pub struct Jitter {
    pub seed: u64,
    pub scale: f64,
}

impl FromStr for Jitter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (seed, scale) = s.split_once(':').ok_or("expected SEED:SCALE")?;
        Ok(Self {
            seed: seed.parse().map_err(|_| format!("bad seed '{seed}'"))?,
            scale: scale.parse().map_err(|_| format!("bad scale '{scale}'"))?,
        })
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Numeric feature columns of `table`, expanding text columns one-vs-rest
/// into `column=category` indicators when `expand` is set.
fn feature_columns(table: &Table, skip: Option<usize>, expand: bool) -> Result<Vec<OrdinalVector>> {
    let mut out = Vec::new();
    for j in (0..table.names.len()).filter(|&j| Some(j) != skip) {
        match table.column(j) {
            Column::Numeric(v) => out.push(v),
            Column::Text(raw) if expand => {
                let indicators = expand_categorical(&raw)
                    .map_err(|e| usage(format!("{}: column '{}': {e}", table.path.display(), table.names[j])))?;
                out.extend(indicators.into_iter().map(|mut v| {
                    v.name = format!("{}={}", table.names[j], v.name);
                    v
                }));
            }
            Column::Text(_) => {
                let err = table.numeric(j).expect_err("text column");
                return Err(usage(format!("{err} (use --expand-categorical for categorical columns)")));
            }
        }
    }
    Ok(out)
}

fn need_objects(table: &Table) -> Result<()> {
    if table.n() < 2 {
        return Err(usage(format!("{}: need at least 2 data rows, found {}", table.path.display(), table.n())));
    }
    Ok(())
}

pub fn transform(input: &Path, output: Option<&Path>, jitter: Option<Jitter>, expand: bool) -> Result<()> {
    let table = Table::read(input)?;
    need_objects(&table)?;
    let mut columns = feature_columns(&table, None, expand)?;
    if let Some(j) = jitter {
        // distinct stream per column so shared ties get independent noise
        columns = columns
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                jitter_ties(c, j.seed.wrapping_add(i as u64), j.scale)
                    .map_err(|e| usage(format!("column '{}': {e}", c.name)))
            })
            .collect::<Result<_>>()?;
    }
    let system = transform_system(&columns)?;
    let mut out = open_output(output)?;
    write_transformed(&system, &mut out)?;
    out.flush()?;
    Ok(())
}

fn write_ranks(names: &[String], rankings: &[Ranking], output: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(open_output(output)?);
    let mut header = vec!["object".to_owned()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    let n = rankings.first().map_or(0, Ranking::len);
    for i in 0..n {
        let mut row = vec![(i + 1).to_string()];
        row.extend(rankings.iter().map(|r| fmt_num(r.ranks[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn inverse(input: &Path, output: Option<&Path>, weighted: bool) -> Result<()> {
    if weighted {
        let features = read_weighted(input)?;
        let rankings: Vec<Ranking> = features.par_iter().map(|(_, v)| weighted_copeland(v)).collect();
        let names: Vec<String> = features.into_iter().map(|(f, _)| f).collect();
        write_ranks(&names, &rankings, output)
    } else {
        let system = read_transformed(input)?;
        let rankings: Vec<Ranking> = system.columns().par_iter().map(copeland_inverse).collect();
        write_ranks(system.names(), &rankings, output)
    }
}

fn write_ranking(ranking: &FeatureRanking, base: LogBase, output: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(open_output(output)?);
    w.write_record(["feature", "score"])?;
    for (name, score) in &ranking.entries {
        w.write_record([name.as_str(), &fmt_num(base.convert(*score))])?;
    }
    w.flush()?;
    Ok(())
}

pub fn score(inputs: &[PathBuf], decision: &str, method: Method, base: LogBase, output: Option<&Path>) -> Result<()> {
    let kinds = inputs.iter().map(|p| is_transformed(p)).collect::<Result<Vec<_>>>()?;
    let ranking = if kinds.iter().all(|&t| t) {
        if method != Method::Kendall {
            return Err(usage(format!("method '{method}' needs original values; transformed inputs support only 'kendall'")));
        }
        let systems = inputs.iter().map(|p| read_transformed(p)).collect::<Result<Vec<_>>>()?;
        let merged = merge_systems(&systems)?;
        if merged.column(decision).is_none() {
            return Err(usage(format!("unknown decision column '{decision}'; columns are {}", merged.names().join(", "))));
        }
        rank_transformed(&merged, &[decision])?
    } else if kinds.iter().any(|&t| t) {
        return Err(usage("cannot mix transformed and original inputs"));
    } else if inputs.len() == 1 {
        let table = Table::read(&inputs[0])?;
        need_objects(&table)?;
        let d = table.position(decision)?;
        let features = feature_columns(&table, Some(d), false)?;
        rank_features(&features, &decision_of(&table, d), method)?
    } else {
        if method != Method::Kendall {
            return Err(usage(format!("method '{method}' cannot combine several tables; use 'kendall'")));
        }
        score_batches(inputs, decision)?
    };
    write_ranking(&ranking, base, output)
}

fn decision_of(table: &Table, d: usize) -> Decision {
    match table.column(d) {
        Column::Numeric(v) => Decision::Numeric(v),
        Column::Text(raw) => Decision::Categorical(raw),
    }
}

/// Transforms each table on its own and scores on the merged system.
fn score_batches(inputs: &[PathBuf], decision: &str) -> Result<FeatureRanking> {
    let tables = inputs.iter().map(|p| Table::read(p)).collect::<Result<Vec<_>>>()?;
    let positions = tables.iter().map(|t| t.position(decision)).collect::<Result<Vec<_>>>()?;

    // categories are collected over all batches so indicator names line up
    let mut categories: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    let mut categorical = false;
    for (t, &d) in tables.iter().zip(&positions) {
        if let Column::Text(raw) = t.column(d) {
            categorical = true;
            for v in raw.into_iter().flatten() {
                if seen.insert(v.clone()) {
                    categories.push(v);
                }
            }
        }
    }
    if categories.len() == 2 {
        categories.truncate(1);
    }
    let targets: Vec<String> = if categorical {
        categories.iter().map(|c| format!("{decision}={c}")).collect()
    } else {
        vec![decision.to_owned()]
    };

    let systems = tables
        .iter()
        .zip(&positions)
        .map(|(t, &d)| -> Result<TransformedSystem> {
            need_objects(t)?;
            let mut cols = feature_columns(t, Some(d), false)?;
            if categorical {
                for (c, name) in categories.iter().zip(&targets) {
                    let values = t.cells[d].iter().map(|v| v.as_ref().map(|v| f64::from(u8::from(v == c))));
                    cols.push(OrdinalVector::with_missing(name.clone(), values.collect()));
                }
            } else {
                cols.push(t.numeric(d)?);
            }
            Ok(transform_system(&cols)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let merged = merge_systems(&systems)?;
    let targets: Vec<&str> = targets.iter().map(String::as_str).collect();
    Ok(rank_transformed(&merged, &targets)?)
}

pub fn merge(inputs: &[PathBuf], output: Option<&Path>) -> Result<()> {
    let systems = inputs.iter().map(|p| read_transformed(p)).collect::<Result<Vec<_>>>()?;
    let merged = merge_systems(&systems)?;
    let mut out = open_output(output)?;
    write_transformed(&merged, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Where the percentile summary goes: stdout when the table has its own
/// file, stderr when the table itself is on stdout.
fn summary_sink(output: Option<&Path>) -> Box<dyn Write> {
    match output {
        Some(p) if p != Path::new("-") => Box::new(std::io::stdout().lock()),
        _ => Box::new(std::io::stderr().lock()),
    }
}

fn percentile_row(values: &[f64]) -> Vec<String> {
    let finite: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    if finite.is_empty() {
        return vec!["NA".to_owned(); PERCENTILES.len()];
    }
    quantiles(&finite, &PERCENTILES).into_iter().map(fmt_num).collect()
}

fn percentile_header(lead: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = lead.iter().map(|s| s.to_string()).collect();
    h.extend(PERCENTILES.iter().map(|p| format!("p{}", (p * 100.0).round())));
    h
}

pub fn simulate_bivariate_cmd(r: f64, n: usize, reps: usize, seed: u64, base: LogBase, output: Option<&Path>) -> Result<()> {
    let res = simulate_bivariate(r, n, reps, seed)?;
    let mut w = csv::Writer::from_writer(open_output(output)?);
    let mut header = vec!["replicate".to_owned()];
    header.extend(res.estimators.iter().cloned());
    w.write_record(&header)?;
    for rep in 0..res.reps() {
        let mut row = vec![rep.to_string()];
        row.extend(res.values.iter().map(|v| fmt_num(base.convert(v[rep]))));
        w.write_record(&row)?;
    }
    w.flush()?;
    drop(w);

    let mut s = csv::Writer::from_writer(summary_sink(output));
    s.write_record(percentile_header(&["estimator"]))?;
    for (name, values) in res.estimators.iter().zip(&res.values) {
        let converted: Vec<f64> = values.iter().map(|&v| base.convert(v)).collect();
        let mut row = vec![name.clone()];
        row.extend(percentile_row(&converted));
        s.write_record(&row)?;
    }
    s.flush()?;
    Ok(())
}

pub fn simulate_multivariate_cmd(
    lambdas: &[f64],
    mixture: Mixture,
    n: usize,
    reps: usize,
    seed: u64,
    base: LogBase,
    output: Option<&Path>,
) -> Result<()> {
    let runs = lambdas
        .iter()
        .map(|&l| simulate_multivariate_reps(l, mixture, n, reps, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = csv::Writer::from_writer(open_output(output)?);
    let mut header = vec!["replicate".to_owned(), "lambda".to_owned()];
    header.extend(MultivariateScores::NAMES.iter().map(|s| s.to_string()));
    w.write_record(&header)?;
    for run in &runs {
        for (rep, s) in run.iter().enumerate() {
            let mut row = vec![rep.to_string(), fmt_num(s.lambda)];
            row.extend(s.values().iter().map(|&v| fmt_num(base.convert(v))));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    drop(w);

    let mut s = csv::Writer::from_writer(summary_sink(output));
    s.write_record(percentile_header(&["lambda", "estimator"]))?;
    for (run, &lambda) in runs.iter().zip(lambdas) {
        for (k, name) in MultivariateScores::NAMES.iter().enumerate() {
            let values: Vec<f64> = run.iter().map(|r| base.convert(r.values()[k])).collect();
            let mut row = vec![fmt_num(lambda), name.to_string()];
            row.extend(percentile_row(&values));
            s.write_record(&row)?;
        }
    }
    s.flush()?;
    Ok(())
}

pub struct IntegrationArgs<'a> {
    pub input: Option<&'a Path>,
    pub decision: Option<&'a str>,
    pub scale: f64,
    pub objects: usize,
    pub features: usize,
    pub reps: usize,
}

pub fn simulate_integration_cmd(args: IntegrationArgs<'_>, seed: u64, output: Option<&Path>) -> Result<()> {
    let (table, decision) = match (args.input, args.decision) {
        (Some(path), Some(name)) => {
            let t = Table::read(path)?;
            need_objects(&t)?;
            let d = t.position(name)?;
            (feature_columns(&t, Some(d), false)?, decision_of(&t, d))
        }
        (Some(_), None) => return Err(usage("--input needs --decision")),
        (None, Some(_)) => return Err(usage("--decision needs --input")),
        (None, None) => synthetic_table(args.objects, args.features, seed),
    };
    let res = simulate_integration(&table, &decision, args.scale, args.reps, seed)?;

    let mut w = csv::Writer::from_writer(open_output(output)?);
    w.write_record(["replicate", "transformed", "naive"])?;
    for (rep, (t, n)) in res.transformed.iter().zip(&res.naive).enumerate() {
        w.write_record([rep.to_string(), fmt_num(*t), fmt_num(*n)])?;
    }
    w.flush()?;
    drop(w);

    let mut s = csv::Writer::from_writer(summary_sink(output));
    s.write_record(percentile_header(&["estimator"]))?;
    for (name, values) in [("transformed", &res.transformed), ("naive", &res.naive)] {
        let mut row = vec![name.to_owned()];
        row.extend(percentile_row(values));
        s.write_record(&row)?;
    }
    s.flush()?;
    Ok(())
}
