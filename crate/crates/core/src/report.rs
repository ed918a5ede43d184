//! Versioned JSON reports.
//!
//! Every document carries the schema version and the producing software
//! version next to the command-specific payload. Emitting a parsed document
//! reproduces the original text byte for byte.

use serde::{Deserialize, Serialize};

use crate::bootstrap::{BootstrapConfig, TestReport};
use crate::deviation::GridSummary;
use crate::error::{Error, Result};
use crate::identify::IdentificationResult;
use crate::mc::McTable;
use crate::var::{AicPenalty, Estimator, OrderSelection};

pub const SCHEMA_VERSION: u32 = 1;

pub const SOFTWARE: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestPayload {
    pub input: Option<String>,
    pub config: BootstrapConfig,
    pub report: TestReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifyPayload {
    pub input: Option<String>,
    pub statistic: f64,
    pub sup_matrix: Vec<Vec<f64>>,
    pub grid: GridSummary,
    pub column_means: Option<Vec<f64>>,
    pub identification: IdentificationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderPayload {
    pub input: Option<String>,
    pub estimator: Estimator,
    pub penalty: AicPenalty,
    pub p_min: usize,
    pub p_max: usize,
    pub selection: OrderSelection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "kebab-case")]
pub enum Payload {
    Test(TestPayload),
    Identify(IdentifyPayload),
    Mc(McTable),
    Order(OrderPayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub software: String,
    pub version: String,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Report {
    pub fn new(payload: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            software: SOFTWARE.to_string(),
            version: VERSION.to_string(),
            payload,
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::numerical(format!("cannot encode report: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Report =
            serde_json::from_str(text).map_err(|e| Error::domain(format!("invalid report: {e}")))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::domain(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                report.schema_version
            )));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelSpec;
    use crate::mc::{run_mc, McExperiment};
    use crate::series::MultivariateSeries;

    #[test]
    fn test_report_round_trips() {
        let xs: Vec<f64> = (0..64).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let x = MultivariateSeries::from_row_major(32, 2, &xs).unwrap().center();
        let config = BootstrapConfig {
            replicates: 19,
            ..Default::default()
        };
        let report = crate::run_test(&x, &config).unwrap();
        let doc = Report::new(Payload::Test(TestPayload {
            input: Some("x.csv".into()),
            config,
            report,
        }));
        let text = doc.to_json().unwrap();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json().unwrap(), text);
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"command\": \"test\""));
    }

    #[test]
    fn mc_report_round_trips() {
        let mut exp = McExperiment::new(ModelSpec::preset("ar1").unwrap(), vec![16]);
        exp.runs = 2;
        exp.replicates = 10;
        let doc = Report::new(Payload::Mc(run_mc(&exp).unwrap()));
        let text = doc.to_json().unwrap();
        assert_eq!(Report::from_json(&text).unwrap().to_json().unwrap(), text);
    }

    #[test]
    fn rejects_other_schema_versions() {
        let text = r#"{"schema_version": 2, "software": "x", "version": "0", "command": "mc", "result": {}}"#;
        assert!(Report::from_json(text).is_err());
    }
}
