//! The analysis document written by `protset analyze`.

use protset_core::linalg::SpectralGap;
use protset_core::protection::{GapStatus, ProtectionReport};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: Tool,
    pub inputs: Inputs,
    pub dimension: usize,
    pub spectrum: Vec<f64>,
    pub gaps: Vec<Gap>,
    pub protected_points: Vec<Point>,
    pub tolerances: Tolerances,
    pub probe_index: usize,
    pub gap_diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_BIN_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub a: InputDigest,
    pub b: InputDigest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Open interval; `None` stands for an infinite end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl From<&SpectralGap> for Gap {
    fn from(g: &SpectralGap) -> Self {
        Self {
            lower: g.lower.is_finite().then_some(g.lower),
            upper: g.upper.is_finite().then_some(g.upper),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub value: f64,
    pub residual: f64,
    pub gap: Gap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub protection: f64,
    pub cluster: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    NoProbeRoot,
    Rejected { root: f64, residual: f64 },
    Protected { root: f64, residual: f64 },
    Unresolvable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub gap: Gap,
    pub outcome: Outcome,
}

impl AnalysisReport {
    /// `gaps` are all gaps of `A`, unbounded ones included.
    pub fn new(inputs: Inputs, report: &ProtectionReport, gaps: &[SpectralGap]) -> Self {
        let gap_diagnostics: Vec<Diagnostic> = report
            .gap_diagnostics
            .iter()
            .map(|d| Diagnostic {
                gap: (&d.gap).into(),
                outcome: match d.status {
                    GapStatus::NoProbeRoot => Outcome::NoProbeRoot,
                    GapStatus::Rejected { root, residual } => Outcome::Rejected { root, residual },
                    GapStatus::Protected { root, residual } => Outcome::Protected { root, residual },
                    GapStatus::Unresolvable => Outcome::Unresolvable,
                },
            })
            .collect();
        Self {
            tool: Tool::current(),
            inputs,
            dimension: report.spectrum.len(),
            spectrum: report.spectrum.clone(),
            gaps: gaps.iter().map(Gap::from).collect(),
            protected_points: report
                .protected_points
                .iter()
                .map(|p| Point {
                    value: p.lambda,
                    residual: p.residual,
                    gap: (&p.gap).into(),
                })
                .collect(),
            tolerances: Tolerances {
                protection: report.tol,
                cluster: report.cluster_tol,
            },
            probe_index: report.probe_index,
            gap_diagnostics,
        }
    }
}
