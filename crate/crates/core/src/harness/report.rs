use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::Method;
use super::matrix::MatrixReport;
use crate::error::{Error, Result};

pub const RUNS_FILE: &str = "runs.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";

pub const RUN_HEADER: [&str; 13] = [
    "problem",
    "dim",
    "objectives",
    "grouper",
    "hybrid",
    "seed",
    "fes_decomp",
    "fes_opt",
    "hv",
    "igd",
    "wallclock_ms",
    "archive_size",
    "fully_separable",
];

pub const AGGREGATE_HEADER: [&str; 10] = [
    "method",
    "runs",
    "hv_mean",
    "hv_median",
    "hv_std",
    "igd_mean",
    "igd_median",
    "igd_std",
    "fes_decomp_mean",
    "fes_opt_mean",
];

/// File-name stem for a method, e.g. `lmm_hybrid`.
pub fn method_stem(method: Method) -> String {
    method.to_string().replace('+', "_")
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::io(path, e))
}

fn write_rows(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| Error::io(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct Solution<'a> {
    seed: u64,
    x: &'a [f64],
    objectives: &'a [f64],
}

/// Writes the per-run CSV, the aggregate CSV, and one archive CSV per method into `dir`.
pub fn emit_reports(report: &MatrixReport, dir: impl AsRef<Path>, dump_solutions: bool) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    if report.reports.iter().all(|r| r.rows.is_empty()) {
        return Err(Error::Empty("run reports"));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let with_stderr = report.rows().any(|r| r.hv_stderr.is_some());
    let mut header: Vec<String> = RUN_HEADER.iter().map(|s| s.to_string()).collect();
    if with_stderr {
        header.push("hv_stderr".into());
    }
    let rows: Vec<Vec<String>> = report
        .rows()
        .map(|r| {
            let mut v = vec![
                r.problem.clone(),
                r.dim.to_string(),
                r.objectives.to_string(),
                r.grouper.clone(),
                r.hybrid.to_string(),
                r.seed.to_string(),
                r.fes_decomp.to_string(),
                r.fes_opt.to_string(),
                r.hv.to_string(),
                r.igd.to_string(),
                r.wallclock_ms.to_string(),
                r.archive_size.to_string(),
                r.fully_separable.to_string(),
            ];
            if with_stderr {
                v.push(r.hv_stderr.map_or(String::new(), |s| s.to_string()));
            }
            v
        })
        .collect();
    let path = dir.join(RUNS_FILE);
    write_rows(&path, &header, &rows)?;
    written.push(path);

    let header: Vec<String> = AGGREGATE_HEADER.iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = report
        .reports
        .iter()
        .map(|r| {
            let n = r.rows.len().max(1) as f64;
            vec![
                r.method.to_string(),
                r.rows.len().to_string(),
                r.hv.mean.to_string(),
                r.hv.median.to_string(),
                r.hv.std.to_string(),
                r.igd.mean.to_string(),
                r.igd.median.to_string(),
                r.igd.std.to_string(),
                (r.rows.iter().map(|x| x.fes_decomp as f64).sum::<f64>() / n).to_string(),
                (r.rows.iter().map(|x| x.fes_opt as f64).sum::<f64>() / n).to_string(),
            ]
        })
        .collect();
    let path = dir.join(AGGREGATE_FILE);
    write_rows(&path, &header, &rows)?;
    written.push(path);

    for r in &report.reports {
        let m = r
            .archives
            .iter()
            .flat_map(|(_, a)| a.first())
            .map(|e| e.objectives.len())
            .next()
            .unwrap_or(0);
        let mut header = vec!["seed".to_string()];
        header.extend((1..=m).map(|k| format!("f{k}")));
        let rows: Vec<Vec<String>> = r
            .archives
            .iter()
            .flat_map(|(seed, a)| {
                a.iter().map(move |e| {
                    let mut v = vec![seed.to_string()];
                    v.extend(e.objectives.iter().map(|f| f.to_string()));
                    v
                })
            })
            .collect();
        let path = dir.join(format!("archive_{}.csv", method_stem(r.method)));
        write_rows(&path, &header, &rows)?;
        written.push(path);

        if dump_solutions {
            let sols: Vec<Solution> = r
                .archives
                .iter()
                .flat_map(|(seed, a)| {
                    a.iter().map(move |e| Solution {
                        seed: *seed,
                        x: &e.x,
                        objectives: &e.objectives,
                    })
                })
                .collect();
            let path = dir.join(format!("solutions_{}.json", method_stem(r.method)));
            let text = serde_json::to_string_pretty(&sols).map_err(|e| Error::io(&path, e))?;
            fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }

    if !report.failures.is_empty() {
        let rows: Vec<Vec<String>> = report
            .failures
            .iter()
            .map(|(m, s, e)| vec![m.to_string(), s.to_string(), e.clone()])
            .collect();
        let path = dir.join("failures.csv");
        write_rows(&path, &["method".into(), "seed".into(), "error".into()], &rows)?;
        written.push(path);
    }
    Ok(written)
}

/// Reads an archive CSV: an optional leading `seed` column followed by objective columns.
///
/// Returns the objective vectors grouped by seed (seed 0 when the column is absent), in file order.
pub fn read_archive_csv(path: impl AsRef<Path>) -> Result<Vec<(u64, Vec<Vec<f64>>)>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::io(path, e))?;
    let headers = reader.headers().map_err(|e| Error::io(path, e))?.clone();
    let has_seed = headers.get(0) == Some("seed");
    let mut out: Vec<(u64, Vec<Vec<f64>>)> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::io(path, e))?;
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| Error::Io {
                path: path.display().to_string(),
                message: format!("row {}: cannot parse `{s}` as a number", line + 2),
            })
        };
        let seed = if has_seed { parse(&record[0])? as u64 } else { 0 };
        let point = record
            .iter()
            .skip(usize::from(has_seed))
            .map(parse)
            .collect::<Result<Vec<f64>>>()?;
        match out.last_mut() {
            Some((s, pts)) if *s == seed => pts.push(point),
            _ => out.push((seed, vec![point])),
        }
    }
    Ok(out)
}
