use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use hodge_spectra::verify::{Check, ConstantsBundle, ConvergenceStudy};
use hodge_spectra::Spectrum;
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub spectra: Vec<SpectrumRecord>,
    pub checks: Vec<CheckRecord>,
    pub constants: BTreeMap<String, ConstantsRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub studies: Vec<StudyRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    /// Every computation finished but at least one check failed.
    ChecksFailed,
    /// A numerical failure stopped the run; the report holds what was computed.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub config: RunConfig,
    pub versions: BTreeMap<String, String>,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub label: String,
    pub degree: usize,
    pub kind: String,
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl SpectrumRecord {
    pub fn from_spectrum(spectrum: &Spectrum, source: &str) -> Self {
        let (kind, degree) = match spectrum.label {
            Some(l) => (l.kind.name().to_string(), l.degree),
            None => (String::from("pencil"), 0),
        };
        let label = match spectrum.label {
            Some(l) => format!("{}[p={}] {source}", l.kind.symbol(), l.degree),
            None => source.to_string(),
        };
        SpectrumRecord { label, degree, kind, values: spectrum.values.clone(), residuals: spectrum.residuals.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub relation: String,
    pub margin: Option<f64>,
    pub status: String,
    pub tolerance: f64,
    pub provenance: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&Check> for CheckRecord {
    fn from(c: &Check) -> Self {
        CheckRecord {
            name: c.name.clone(),
            lhs: c.lhs,
            rhs: c.rhs,
            relation: c.relation.symbol().to_string(),
            margin: c.margin,
            status: c.status.as_str().to_string(),
            tolerance: c.tolerance,
            provenance: c.provenance.clone(),
            note: c.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRecord {
    pub dim: u32,
    pub degree: u32,
    pub gamma: f64,
    pub c_np: f64,
    pub dirichlet_bound: f64,
    pub buckling_bound: f64,
    pub clamped_bound: f64,
}

impl ConstantsRecord {
    pub fn key(&self) -> String {
        format!("n={},p={}", self.dim, self.degree)
    }
}

impl From<&ConstantsBundle> for ConstantsRecord {
    fn from(c: &ConstantsBundle) -> Self {
        ConstantsRecord {
            dim: c.dim,
            degree: c.degree,
            gamma: c.gamma,
            c_np: c.c_np,
            dirichlet_bound: c.dirichlet_bound,
            buckling_bound: c.buckling_bound,
            clamped_bound: c.clamped_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRecord {
    pub label: String,
    pub resolutions: Vec<usize>,
    pub values: Vec<f64>,
    pub extrapolated: f64,
    /// Absent when the level differences were not monotone.
    pub observed_order: Option<f64>,
    pub error_estimate: f64,
}

impl From<&ConvergenceStudy> for StudyRecord {
    fn from(s: &ConvergenceStudy) -> Self {
        StudyRecord {
            label: s.label.clone(),
            resolutions: s.resolutions.clone(),
            values: s.values.clone(),
            extrapolated: s.extrapolated,
            observed_order: s.observed_order.is_finite().then_some(s.observed_order),
            error_estimate: s.error_estimate(),
        }
    }
}

fn format_number(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Serializes `report` in `format`.
pub fn render(report: &Report, format: OutputFormat) -> io::Result<Vec<u8>> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(io::Error::other)?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(["name", "lhs", "rhs", "relation", "margin", "status"])?;
            for c in &report.checks {
                writer.write_record([
                    c.name.as_str(),
                    &format_number(c.lhs),
                    &format_number(c.rhs),
                    &c.relation,
                    &format_number(c.margin),
                    &c.status,
                ])?;
            }
            writer.into_inner().map_err(|e| e.into_error())
        }
    }
}

/// Writes `report` to `path`, or to standard output when `path` is `None`.
pub fn emit_report(report: &Report, format: OutputFormat, path: Option<&Path>) -> io::Result<()> {
    let bytes = render(report, format)?;
    match path {
        Some(p) => File::create(p)?.write_all(&bytes),
        None => io::stdout().lock().write_all(&bytes),
    }
}
