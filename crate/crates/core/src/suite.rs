//! Benchmark suite runner: solves every `*.cnf` file in a directory and
//! reports per-instance results plus aggregate timing over the solved
//! instances, mirroring competition-style tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cnf::{parse_dimacs, write_dimacs};
use crate::solver::{multi_copy_solve, SolveStatus, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InstanceStatus {
    Satisfiable,
    Unknown,
    Error,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub path: String,
    pub status: InstanceStatus,
    pub iterations_used: u64,
    pub elapsed_s: f64,
    pub best_count: usize,
    pub clause_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Average / median / maximum wall time over the solved instances only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteAggregates {
    pub solved_count: usize,
    pub average_time_s: Option<f64>,
    pub median_time_s: Option<f64>,
    pub maximum_time_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub records: Vec<InstanceRecord>,
    pub aggregates: SuiteAggregates,
}

impl SuiteReport {
    pub fn from_records(records: Vec<InstanceRecord>) -> SuiteReport {
        let aggregates = compute_aggregates(&records);
        SuiteReport {
            records,
            aggregates,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed columns: path,status,iterations,elapsed_s,best_count,clauses.
    pub fn to_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["path", "status", "iterations", "elapsed_s", "best_count", "clauses"])
            .unwrap();
        for r in &self.records {
            wtr.write_record([
                r.path.as_str(),
                match r.status {
                    InstanceStatus::Satisfiable => "SATISFIABLE",
                    InstanceStatus::Unknown => "UNKNOWN",
                    InstanceStatus::Error => "ERROR",
                },
                &r.iterations_used.to_string(),
                &format!("{:.6}", r.elapsed_s),
                &r.best_count.to_string(),
                &r.clause_count.to_string(),
            ])
            .unwrap();
        }
        String::from_utf8(wtr.into_inner().unwrap()).unwrap()
    }
}

pub fn compute_aggregates(records: &[InstanceRecord]) -> SuiteAggregates {
    let mut solved_times: Vec<f64> = records
        .iter()
        .filter(|r| r.status == InstanceStatus::Satisfiable)
        .map(|r| r.elapsed_s)
        .collect();
    solved_times.sort_by(f64::total_cmp);
    let solved_count = solved_times.len();
    if solved_count == 0 {
        return SuiteAggregates {
            solved_count: 0,
            average_time_s: None,
            median_time_s: None,
            maximum_time_s: None,
        };
    }
    let average = solved_times.iter().sum::<f64>() / solved_count as f64;
    let median = if solved_count % 2 == 1 {
        solved_times[solved_count / 2]
    } else {
        (solved_times[solved_count / 2 - 1] + solved_times[solved_count / 2]) / 2.0
    };
    SuiteAggregates {
        solved_count,
        average_time_s: Some(average),
        median_time_s: Some(median),
        maximum_time_s: Some(*solved_times.last().unwrap()),
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Per-instance seed: FNV-1a of the file name XORed into the suite seed.
/// Keeps suite runs deterministic per instance regardless of directory
/// enumeration order.
pub fn instance_seed(suite_seed: u64, file_name: &str) -> u64 {
    suite_seed ^ fnv1a64(file_name.as_bytes())
}

/// Runs the solver on every `*.cnf` file in `directory` (sorted by file
/// name). Unreadable or malformed files are recorded as errors, never
/// fatal.
pub fn run_suite(
    directory: &Path,
    config: &SolverConfig,
    time_limit: Duration,
) -> std::io::Result<SuiteReport> {
    let mut paths: Vec<PathBuf> = fs::read_dir(directory)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "cnf"))
        .collect();
    paths.sort();

    let records = paths
        .iter()
        .map(|path| run_instance(path, config, time_limit))
        .collect();
    Ok(SuiteReport::from_records(records))
}

fn run_instance(path: &Path, config: &SolverConfig, time_limit: Duration) -> InstanceRecord {
    let display = path.display().to_string();
    let error_record = |msg: String| InstanceRecord {
        path: display.clone(),
        status: InstanceStatus::Error,
        iterations_used: 0,
        elapsed_s: 0.0,
        best_count: 0,
        clause_count: 0,
        error: Some(msg),
    };
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => return error_record(e.to_string()),
    };
    let formula = match parse_dimacs(&text) {
        Ok(f) => f,
        Err(e) => return error_record(e.to_string()),
    };
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let config = SolverConfig {
        seed: instance_seed(config.seed, &file_name),
        wall_clock_limit: Some(time_limit),
        ..config.clone()
    };
    let outcome = multi_copy_solve(&formula, &config);
    InstanceRecord {
        path: display,
        status: match outcome.status {
            SolveStatus::Satisfiable => InstanceStatus::Satisfiable,
            SolveStatus::Unknown => InstanceStatus::Unknown,
        },
        iterations_used: outcome.iterations_used,
        elapsed_s: outcome.elapsed.as_secs_f64(),
        best_count: outcome.best_count,
        clause_count: formula.num_clauses(),
        error: None,
    }
}

/// Writes `report.json` and `report.csv` into `out_dir`.
pub fn write_report(report: &SuiteReport, out_dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(out_dir)?;
    fs::File::create(out_dir.join("report.json"))?.write_all(report.to_json().as_bytes())?;
    fs::File::create(out_dir.join("report.csv"))?.write_all(report.to_csv().as_bytes())?;
    Ok(())
}

/// Writes a formula to `<dir>/<name>.cnf`.
pub fn write_instance(
    dir: &Path,
    name: &str,
    formula: &crate::cnf::CnfFormula,
) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.cnf"));
    fs::write(&path, write_dimacs(formula))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::generate_planted_ksat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quick_config() -> SolverConfig {
        SolverConfig {
            max_iterations: 20_000,
            num_copies: 2,
            seed: 1,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn empty_directory_gives_empty_report() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_suite(dir.path(), &quick_config(), Duration::from_secs(5)).unwrap();
        assert!(report.records.is_empty());
        assert_eq!(report.aggregates.solved_count, 0);
        assert!(report.aggregates.average_time_s.is_none());
    }

    #[test]
    fn planted_instances_solve_and_aggregate() {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for i in 0..3 {
            let (f, _) = generate_planted_ksat(20, 80, 3, &mut rng);
            write_instance(dir.path(), &format!("inst_{i:02}"), &f).unwrap();
        }
        let report = run_suite(dir.path(), &quick_config(), Duration::from_secs(30)).unwrap();
        assert_eq!(report.records.len(), 3);
        assert_eq!(report.aggregates.solved_count, 3);

        // Aggregates recompute from the records.
        let again = compute_aggregates(&report.records);
        assert_eq!(again.solved_count, report.aggregates.solved_count);
        assert_eq!(again.average_time_s, report.aggregates.average_time_s);
        assert_eq!(again.median_time_s, report.aggregates.median_time_s);
        assert_eq!(again.maximum_time_s, report.aggregates.maximum_time_s);
    }

    #[test]
    fn corrupt_file_is_isolated() {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (f, _) = generate_planted_ksat(20, 80, 3, &mut rng);
        write_instance(dir.path(), "good", &f).unwrap();
        fs::write(dir.path().join("bad.cnf"), "p cnf nonsense\n").unwrap();
        let report = run_suite(dir.path(), &quick_config(), Duration::from_secs(30)).unwrap();
        assert_eq!(report.records.len(), 2);
        let bad = report
            .records
            .iter()
            .find(|r| r.path.ends_with("bad.cnf"))
            .unwrap();
        assert_eq!(bad.status, InstanceStatus::Error);
        assert!(bad.error.is_some());
        let good = report
            .records
            .iter()
            .find(|r| r.path.ends_with("good.cnf"))
            .unwrap();
        assert_eq!(good.status, InstanceStatus::Satisfiable);
    }

    #[test]
    fn suite_runs_are_deterministic_per_instance() {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (f, _) = generate_planted_ksat(20, 80, 3, &mut rng);
        write_instance(dir.path(), "only", &f).unwrap();
        let cfg = quick_config();
        let a = run_suite(dir.path(), &cfg, Duration::from_secs(30)).unwrap();
        let b = run_suite(dir.path(), &cfg, Duration::from_secs(30)).unwrap();
        assert_eq!(a.records[0].iterations_used, b.records[0].iterations_used);
        assert_eq!(a.records[0].best_count, b.records[0].best_count);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let report = SuiteReport::from_records(vec![InstanceRecord {
            path: "x.cnf".into(),
            status: InstanceStatus::Unknown,
            iterations_used: 5,
            elapsed_s: 0.25,
            best_count: 3,
            clause_count: 4,
            error: None,
        }]);
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "path,status,iterations,elapsed_s,best_count,clauses"
        );
        assert_eq!(lines.next().unwrap(), "x.cnf,UNKNOWN,5,0.250000,3,4");
    }
}
