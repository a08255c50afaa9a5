//! CSV result tables.
//!
//! `runs.csv` / `min_nodes.csv` rows use [`RUN_HEADER`]; sweeps use
//! [`SWEEP_HEADER`], which adds scenario geometry and a status column.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::path::Path;

use wsn_core::stats::display_value;
use wsn_core::RunRecord;

use crate::error::{CliError, CliResult};

pub const RUN_HEADER: [&str; 11] = [
    "scenario_id",
    "algorithm",
    "seed",
    "n_nodes",
    "coverage",
    "connectivity_ratio",
    "is_connected",
    "energy_total",
    "fitness",
    "generations_used",
    "wall_time_s",
];

pub const SWEEP_HEADER: [&str; 16] = [
    "scenario_id",
    "area_m",
    "area_n",
    "rs",
    "rc",
    "algorithm",
    "seed",
    "status",
    "n_nodes",
    "coverage",
    "connectivity_ratio",
    "is_connected",
    "energy_total",
    "fitness",
    "generations_used",
    "wall_time_s",
];

/// Formats a record: fractions to 6 decimals, energy in scientific notation.
pub fn record_fields(r: &RunRecord) -> Vec<String> {
    vec![
        r.scenario_id.clone(),
        r.algorithm.clone(),
        r.seed.to_string(),
        r.n_nodes.to_string(),
        format!("{:.6}", r.coverage),
        format!("{:.6}", r.connectivity_ratio),
        r.is_connected.to_string(),
        format!("{:.6e}", r.energy_total),
        format!("{:.6}", r.fitness),
        r.generations_used.to_string(),
        format!("{:.3}", r.wall_time_s),
    ]
}

fn field<'a>(row: &'a csv::StringRecord, headers: &csv::StringRecord, name: &str) -> CliResult<&'a str> {
    let idx = headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Config(format!("CSV has no `{name}` column")))?;
    row.get(idx).ok_or_else(|| CliError::Config(format!("row is missing `{name}`")))
}

fn parse<T: std::str::FromStr>(row: &csv::StringRecord, headers: &csv::StringRecord, name: &str) -> CliResult<T> {
    let raw = field(row, headers, name)?;
    raw.parse().map_err(|_| CliError::Config(format!("cannot parse `{name}` value `{raw}`")))
}

pub fn parse_record(row: &csv::StringRecord, headers: &csv::StringRecord) -> CliResult<RunRecord> {
    Ok(RunRecord {
        scenario_id: field(row, headers, "scenario_id")?.to_string(),
        algorithm: field(row, headers, "algorithm")?.to_string(),
        seed: parse(row, headers, "seed")?,
        n_nodes: parse(row, headers, "n_nodes")?,
        coverage: parse(row, headers, "coverage")?,
        connectivity_ratio: parse(row, headers, "connectivity_ratio")?,
        is_connected: parse(row, headers, "is_connected")?,
        energy_total: parse(row, headers, "energy_total")?,
        fitness: parse(row, headers, "fitness")?,
        generations_used: parse(row, headers, "generations_used")?,
        wall_time_s: parse(row, headers, "wall_time_s")?,
    })
}

/// Appends rows to `path`, writing the header first when the file is new.
pub fn append_records(path: &Path, records: &[RunRecord]) -> CliResult<()> {
    let exists = path.exists() && std::fs::metadata(path).map(|m| m.len() > 0).unwrap_or(false);
    let file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let io = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
    if !exists {
        w.write_record(RUN_HEADER).map_err(io)?;
    }
    for r in records {
        w.write_record(record_fields(r)).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_records(path: &Path) -> CliResult<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    let headers = rdr.headers().map_err(|e| CliError::Config(e.to_string()))?.clone();
    rdr.records().map(|row| parse_record(&row.map_err(|e| CliError::Config(e.to_string()))?, &headers)).collect()
}

/// One cell of a sweep: a record, or the failure that replaced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub area: [f64; 2],
    pub rs: f64,
    pub rc: f64,
    /// `ok`, `exhausted` or `error`.
    pub status: String,
    pub record: RunRecord,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn fields(&self) -> Vec<String> {
        let r = record_fields(&self.record);
        let mut out = vec![
            r[0].clone(),
            self.area[0].to_string(),
            self.area[1].to_string(),
            self.rs.to_string(),
            self.rc.to_string(),
            r[1].clone(),
            r[2].clone(),
            self.status.clone(),
        ];
        out.extend_from_slice(&r[3..]);
        out
    }
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    let io = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
    w.write_record(SWEEP_HEADER).map_err(io)?;
    for row in rows {
        w.write_record(row.fields()).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_sweep(path: &Path) -> CliResult<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    let headers = rdr.headers().map_err(|e| CliError::Config(e.to_string()))?.clone();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| CliError::Config(e.to_string()))?;
        out.push(SweepRow {
            area: [parse(&row, &headers, "area_m")?, parse(&row, &headers, "area_n")?],
            rs: parse(&row, &headers, "rs")?,
            rc: parse(&row, &headers, "rc")?,
            status: field(&row, &headers, "status")?.to_string(),
            record: parse_record(&row, &headers)?,
        });
    }
    Ok(out)
}

/// Scenario-by-algorithm table of mean node counts over successful cells.
pub fn write_pivot(path: &Path, rows: &[SweepRow], algorithms: &[String], floor: bool) -> CliResult<()> {
    let mut order: Vec<&str> = Vec::new();
    let mut geometry: BTreeMap<&str, &SweepRow> = BTreeMap::new();
    let mut cells: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
    for row in rows {
        let id = row.record.scenario_id.as_str();
        if !geometry.contains_key(id) {
            order.push(id);
            geometry.insert(id, row);
        }
        if row.is_ok() {
            cells.entry((id, row.record.algorithm.as_str())).or_default().push(row.record.n_nodes as f64);
        }
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    let io = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
    let mut header = vec!["scenario_id".to_string(), "area".into(), "rs".into(), "rc".into()];
    header.extend(algorithms.iter().cloned());
    w.write_record(&header).map_err(io)?;
    for id in order {
        let g = geometry[id];
        let mut line = vec![id.to_string(), format!("{}x{}", g.area[0], g.area[1]), g.rs.to_string(), g.rc.to_string()];
        for alg in algorithms {
            line.push(match cells.get(&(id, alg.as_str())) {
                Some(v) if !v.is_empty() => {
                    let mean = v.iter().sum::<f64>() / v.len() as f64;
                    if floor {
                        display_value(mean, true)
                    } else {
                        format!("{mean:.3}")
                    }
                }
                _ => String::new(),
            });
        }
        w.write_record(&line).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> RunRecord {
        RunRecord {
            scenario_id: "100x100_rs20_rc40".into(),
            algorithm: "hybrid".into(),
            seed: 7,
            n_nodes: 12,
            coverage: 0.9567,
            connectivity_ratio: 1.0,
            is_connected: true,
            energy_total: 4.123456e-3,
            fitness: 0.812345,
            generations_used: 50,
            wall_time_s: 1.25,
        }
    }

    #[test]
    fn golden_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        append_records(&path, &[sample()]).unwrap();
        append_records(&path, &[sample()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let golden = "scenario_id,algorithm,seed,n_nodes,coverage,connectivity_ratio,is_connected,energy_total,fitness,generations_used,wall_time_s\n\
                      100x100_rs20_rc40,hybrid,7,12,0.956700,1.000000,true,4.123456e-3,0.812345,50,1.250\n\
                      100x100_rs20_rc40,hybrid,7,12,0.956700,1.000000,true,4.123456e-3,0.812345,50,1.250\n";
        assert_eq!(text, golden);
        assert_eq!(read_records(&path).unwrap(), vec![sample(), sample()]);
    }

    #[test]
    fn sweep_header_is_stable() {
        assert_eq!(
            SWEEP_HEADER.join(","),
            "scenario_id,area_m,area_n,rs,rc,algorithm,seed,status,n_nodes,coverage,connectivity_ratio,\
             is_connected,energy_total,fitness,generations_used,wall_time_s"
        );
    }

    proptest! {
        #[test]
        fn csv_round_trip_keeps_declared_precision(
            cov in 0.0..1.0f64, conn in 0.0..1.0f64, energy in 1e-6..1.0f64, fit in -1.0..1.0f64,
            seed in any::<u64>(), n in 1usize..1000, id in "[a-z0-9_,\" ]{1,12}",
        ) {
            let r = RunRecord { scenario_id: id, seed, n_nodes: n, coverage: cov, connectivity_ratio: conn, energy_total: energy, fitness: fit, ..sample() };
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("r.csv");
            append_records(&path, std::slice::from_ref(&r)).unwrap();
            let back = read_records(&path).unwrap().remove(0);
            prop_assert_eq!(&back.scenario_id, &r.scenario_id);
            prop_assert_eq!((back.seed, back.n_nodes), (r.seed, r.n_nodes));
            prop_assert!((back.coverage - r.coverage).abs() <= 5e-7);
            prop_assert!((back.connectivity_ratio - r.connectivity_ratio).abs() <= 5e-7);
            prop_assert!(((back.energy_total - r.energy_total) / r.energy_total).abs() <= 1e-6);
            prop_assert_eq!(record_fields(&back), record_fields(&r));
        }
    }
}
