//! Self-contained experiment reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A failure means a bug or a false statement.
    Required,
    /// Recorded for inspection; the statement has no finite-size guarantee.
    Informative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub inequality: String,
    pub holds: bool,
    pub status: Status,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    pub q: u64,
    pub t: Option<u64>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: Params,
    pub measured: BTreeMap<String, Value>,
    pub bounds: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, Verdict>,
    /// Excluded when comparing reports for reproducibility.
    pub wall_time_ms: u64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, params: Params) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            params,
            measured: BTreeMap::new(),
            bounds: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            wall_time_ms: 0,
        }
    }

    pub fn measure(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.measured.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn bound(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.bounds.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn verdict(&mut self, key: &str, inequality: impl Into<String>, holds: bool, status: Status) -> &mut Self {
        self.verdicts.insert(key.to_string(), Verdict { inequality: inequality.into(), holds, status });
        self
    }

    pub fn measured_u64(&self, key: &str) -> Option<u64> {
        self.measured.get(key)?.as_u64()
    }

    pub fn measured_f64(&self, key: &str) -> Option<f64> {
        self.measured.get(key)?.as_f64()
    }

    /// Whether every required verdict holds.
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|v| v.holds || v.status == Status::Informative)
    }

    /// Inequalities of the failed required verdicts.
    pub fn failures(&self) -> Vec<&str> {
        self.verdicts
            .values()
            .filter(|v| !v.holds && v.status == Status::Required)
            .map(|v| v.inequality.as_str())
            .collect()
    }

    /// The report with the wall-time field zeroed.
    pub fn without_timing(&self) -> Self {
        ExperimentReport { wall_time_ms: 0, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_keys() {
        let mut r = ExperimentReport::new("demo", Params { q: 4, t: Some(1), ..Default::default() });
        r.measure("c4", 3u64).bound("upper", 5u64).verdict("range", "c4 <= 5", true, Status::Required);
        r.verdict("soft", "x >= 1", false, Status::Informative);
        assert!(r.passed());
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"experiment":"demo","params":{"q":4,"t":1,"seed":null,"trials":null},"measured":{"c4":3}"#));
        r.verdict("hard", "y >= 1", false, Status::Required);
        assert_eq!(r.failures(), vec!["y >= 1"]);
    }
}
