use std::collections::BTreeMap;
use std::io;

use serde::Serialize;

/// Maneuver label of the pooled rows added by [`MetricsTable::with_pooled`].
pub const ALL_MANEUVERS: &str = "all";

/// One cross-track error measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct CteSample {
    pub method: String,
    pub horizon_s: u32,
    pub cte: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricKey {
    pub method: String,
    pub horizon_s: u32,
    pub maneuver: String,
}

/// A CSV row of the metrics table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub method: String,
    pub horizon_s: u32,
    pub maneuver: String,
    pub mean_cte_m: f64,
    pub count: usize,
}

/// Mean cross-track error per (method, horizon, maneuver).
///
/// Raw samples are kept and summed in sorted order, so the table is the
/// same regardless of the order in which scenarios were merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsTable {
    cells: BTreeMap<MetricKey, Vec<f64>>,
}

impl MetricsTable {
    pub fn add(&mut self, method: &str, horizon_s: u32, maneuver: &str, cte: f64) {
        let key = MetricKey {
            method: method.to_string(),
            horizon_s,
            maneuver: maneuver.to_string(),
        };
        self.cells.entry(key).or_default().push(cte);
    }

    pub fn merge(&mut self, other: MetricsTable) {
        for (key, mut values) in other.cells {
            self.cells.entry(key).or_default().append(&mut values);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn key(method: &str, horizon_s: u32, maneuver: &str) -> MetricKey {
        MetricKey {
            method: method.to_string(),
            horizon_s,
            maneuver: maneuver.to_string(),
        }
    }

    pub fn count(&self, method: &str, horizon_s: u32, maneuver: &str) -> usize {
        self.cells
            .get(&Self::key(method, horizon_s, maneuver))
            .map_or(0, Vec::len)
    }

    pub fn mean(&self, method: &str, horizon_s: u32, maneuver: &str) -> Option<f64> {
        self.cells
            .get(&Self::key(method, horizon_s, maneuver))
            .and_then(|v| sorted_mean(v))
    }

    /// A copy with extra rows pooling every maneuver under [`ALL_MANEUVERS`].
    pub fn with_pooled(&self) -> MetricsTable {
        let mut out = self.clone();
        for (key, values) in &self.cells {
            if key.maneuver == ALL_MANEUVERS {
                continue;
            }
            out.cells
                .entry(Self::key(&key.method, key.horizon_s, ALL_MANEUVERS))
                .or_default()
                .extend_from_slice(values);
        }
        out
    }

    /// Rows in key order; empty cells are omitted.
    pub fn rows(&self) -> Vec<MetricRow> {
        self.cells
            .iter()
            .filter_map(|(k, v)| {
                sorted_mean(v).map(|mean| MetricRow {
                    method: k.method.clone(),
                    horizon_s: k.horizon_s,
                    maneuver: k.maneuver.clone(),
                    mean_cte_m: mean,
                    count: v.len(),
                })
            })
            .collect()
    }

    /// Writes `method,horizon_s,maneuver,mean_cte_m,count`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

fn sorted_mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(sorted.iter().sum::<f64>() / sorted.len() as f64)
}
