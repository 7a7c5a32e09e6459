use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::config::Experiment;
use super::run::{RunRecord, Verdict};
use crate::error::{Error, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const SERIES_FILE: &str = "series.dat";
pub const MOMENTS_FILE: &str = "moments.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const CONFIG_FILE: &str = "config.json";

pub const RESULT_COLUMNS: [&str; 11] =
    ["step", "set_size", "field", "rank_num", "rank_den", "check", "gap_num", "gap_den", "bound", "verdict", "ms"];

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn parts(q: &Option<BigRational>) -> (String, String) {
    match q {
        Some(q) => (q.numer().to_string(), q.denom().to_string()),
        None => (String::new(), String::new()),
    }
}

/// The results table. The `ms` column is left empty so that identical
/// configurations give identical bytes; timings go to their own file.
pub fn results_csv(record: &RunRecord) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULT_COLUMNS).map_err(csv_err)?;
    for r in &record.rows {
        let (rn, rd) = parts(&r.rank);
        let (gn, gd) = parts(&r.gap);
        w.write_record([
            r.step.to_string(),
            r.set_size.to_string(),
            r.field.clone(),
            rn,
            rd,
            r.check.clone(),
            gn,
            gd,
            r.bound.clone().unwrap_or_default(),
            r.verdict.as_str().to_string(),
            String::new(),
        ])
        .map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))
}

pub fn timings_csv(record: &RunRecord) -> String {
    let mut s = String::from("step,check,ms\n");
    for r in &record.rows {
        let _ = writeln!(s, "{},{},{}", r.step, r.check, r.ms);
    }
    s
}

pub fn moments_csv(record: &RunRecord) -> String {
    let mut s = String::from("l,value_num,value_den,source\n");
    for m in &record.moments {
        for line in m.to_csv().lines().skip(1) {
            s.push_str(line);
            s.push('\n');
        }
    }
    s
}

/// One gnuplot data block per check, separated by two blank lines, with
/// columns `step set_size rank gap`.
pub fn series_dat(record: &RunRecord) -> String {
    let num = |q: &Option<BigRational>| q.as_ref().and_then(|q| q.to_f64()).map_or("nan".to_string(), |f| format!("{f:.12}"));
    let mut checks: Vec<&str> = Vec::new();
    for r in &record.rows {
        if !checks.contains(&r.check.as_str()) {
            checks.push(&r.check);
        }
    }
    let mut s = String::new();
    for (i, c) in checks.iter().enumerate() {
        if i > 0 {
            s.push_str("\n\n");
        }
        let _ = writeln!(s, "# {c}\n# step set_size rank gap");
        for r in record.rows.iter().filter(|r| r.check == *c) {
            let _ = writeln!(s, "{} {} {} {}", r.step, r.set_size, num(&r.rank), num(&r.gap));
        }
    }
    s
}

pub fn summary_text(record: &RunRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "run {}", record.name);
    let _ = writeln!(s, "config sha256 {}", record.hash);
    let _ = writeln!(
        s,
        "rows {}: {} PASS, {} FAIL, {} INFO, {} SKIP",
        record.rows.len(),
        record.count(Verdict::Pass),
        record.count(Verdict::Fail),
        record.count(Verdict::Info),
        record.count(Verdict::Skip)
    );
    for line in &record.summary {
        let _ = writeln!(s, "{line}");
    }
    for note in &record.notes {
        let _ = writeln!(s, "note: {note}");
    }
    let _ = writeln!(s, "verdict {}", if record.passed() { "PASS" } else { "FAIL" });
    s
}

/// Writes the run into `base/<config hash>`. Files are written to a
/// temporary directory that is then renamed into place. If the directory
/// already exists its results must match byte for byte.
pub fn persist(e: &Experiment, record: &RunRecord, base: &Path) -> Result<PathBuf> {
    fs::create_dir_all(base)?;
    let target = base.join(&record.hash);
    let results = results_csv(record)?;
    let tmp = tempfile::Builder::new().prefix(".run-").tempdir_in(base)?;
    fs::write(tmp.path().join(CONFIG_FILE), e.config.to_pretty() + "\n")?;
    fs::write(tmp.path().join(RESULTS_FILE), &results)?;
    fs::write(tmp.path().join(SUMMARY_FILE), summary_text(record))?;
    fs::write(tmp.path().join(SERIES_FILE), series_dat(record))?;
    fs::write(tmp.path().join(TIMINGS_FILE), timings_csv(record))?;
    if !record.moments.is_empty() {
        fs::write(tmp.path().join(MOMENTS_FILE), moments_csv(record))?;
    }
    match fs::rename(tmp.path(), &target) {
        Ok(()) => {
            // the directory now lives at `target`; nothing left to clean up
            let _ = tmp.keep();
            Ok(target)
        }
        Err(_) if target.is_dir() => {
            let existing = fs::read_to_string(target.join(RESULTS_FILE))?;
            if existing != results {
                return Err(Error::Io(format!("{} holds different results for the same config", target.display())));
            }
            Ok(target)
        }
        Err(err) => Err(err.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub summary: String,
    pub rows: usize,
    pub failures: usize,
}

/// Reads a persisted run back.
pub fn read_run(dir: &Path) -> Result<RunReport> {
    let summary = fs::read_to_string(dir.join(SUMMARY_FILE))?;
    let mut reader = csv::Reader::from_path(dir.join(RESULTS_FILE)).map_err(csv_err)?;
    let header: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(String::from).collect();
    if header != RESULT_COLUMNS {
        return Err(Error::Io(format!("unexpected columns {header:?}")));
    }
    let mut rows = 0;
    let mut failures = 0;
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let v = Verdict::parse(&rec[9]).ok_or_else(|| Error::Io(format!("bad verdict {:?}", &rec[9])))?;
        rows += 1;
        if v == Verdict::Fail {
            failures += 1;
        }
    }
    Ok(RunReport { summary, rows, failures })
}
