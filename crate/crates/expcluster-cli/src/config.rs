//! Experiment configuration: TOML file plus flag overrides, resolved into a
//! single struct that round-trips losslessly and is echoed into every output
//! header.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use expcluster::coeff::SizeWindow;
use expcluster::sequences::{ParameterFunction, SlowlyVarying};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvConfig {
    /// "constant" or "log-power".
    pub kind: String,
    pub h: f64,
    pub p: f64,
}

impl Default for SvConfig {
    fn default() -> Self {
        SvConfig { kind: "constant".into(), h: 1.0, p: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PfConfig {
    pub l: f64,
    #[serde(rename = "L")]
    pub sv: SvConfig,
    pub h_scale: f64,
    /// CSV file holding multiset/generator counts `m_j` (row `j`).
    pub m_csv: Option<PathBuf>,
    /// Column name in `m_csv`; defaults to the first column.
    pub m_column: Option<String>,
}

impl Default for PfConfig {
    fn default() -> Self {
        PfConfig { l: 1.0, sv: SvConfig::default(), h_scale: 1.0, m_csv: None, m_column: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Fully resolved run description; serialised into every output header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    pub pf: PfConfig,
    /// Total-mass grid.
    pub n: Vec<u64>,
    /// Window exponent grid.
    pub beta: Vec<f64>,
    /// Component-size window "lo:hi" (hi may be "n").
    pub window: Option<String>,
    /// Fixed smallest-component cuts.
    pub r: Vec<u64>,
    /// Component sizes for count distributions.
    pub p: Vec<u64>,
    pub k_max: u64,
    /// Geometric-generator parameters.
    pub h: f64,
    pub q: f64,
    pub seed: u64,
    pub steps: u64,
    pub replicas: u64,
    pub burn_in: f64,
    /// Emit a full occupancy snapshot every this many events (0 = never).
    pub snapshot_every: u64,
    pub tol: f64,
    /// Turn tolerance breaches into a nonzero exit.
    #[serde(rename = "assert")]
    pub assert_mode: bool,
    /// Compute the (quadratic-cost) local-limit column in `saddle`.
    pub llt: bool,
    /// Carry exact rationals alongside the log-space table in `coeffs`.
    pub exact: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: String::new(),
            pf: PfConfig::default(),
            n: vec![1000],
            beta: vec![],
            window: None,
            r: vec![],
            p: vec![1],
            k_max: 5,
            h: 1.0,
            q: 2.0,
            seed: 1,
            steps: 100_000,
            replicas: 1,
            burn_in: 0.1,
            snapshot_every: 0,
            tol: 0.05,
            assert_mode: false,
            llt: false,
            exact: false,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    /// JSON echo for output headers.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Build the weight sequence this config describes. Tabulated sequences
    /// need `table_n` entries.
    pub fn build_pf(&self, table_n: usize) -> Result<ParameterFunction> {
        let sv = match self.pf.sv.kind.as_str() {
            "constant" => SlowlyVarying::constant(self.pf.sv.h)?,
            "log-power" => SlowlyVarying::log_power(self.pf.sv.h, self.pf.sv.p)?,
            other => bail!("unknown L kind {other:?} (constant | log-power)"),
        };
        let pf = match &self.pf.m_csv {
            Some(path) => {
                let m = read_m_column(path, self.pf.m_column.as_deref(), table_n)?;
                ParameterFunction::from_multiset(&m, table_n)?
                    .with_descriptor(self.pf.l, sv)?
            }
            None => ParameterFunction::power_law(self.pf.l, sv)?,
        };
        Ok(pf.h_transform(self.pf.h_scale)?)
    }

    /// Parse the window string ("lo:hi", hi may be "n"); defaults to full.
    pub fn parse_window(&self) -> Result<SizeWindow> {
        let Some(spec) = &self.window else {
            return Ok(SizeWindow::full());
        };
        let (lo_s, hi_s) = spec
            .split_once(':')
            .with_context(|| format!("window {spec:?} is not lo:hi"))?;
        let lo: usize = lo_s.trim().parse().context("window lo")?;
        let hi_s = hi_s.trim();
        if hi_s.eq_ignore_ascii_case("n") {
            Ok(SizeWindow::at_least(lo)?)
        } else {
            let hi: usize = hi_s.parse().context("window hi")?;
            Ok(SizeWindow::new(lo, hi)?)
        }
    }

    pub fn max_n(&self) -> usize {
        self.n.iter().copied().max().unwrap_or(0) as usize
    }
}

fn read_m_column(path: &Path, column: Option<&str>, need: usize) -> Result<Vec<f64>> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("opening m-sequence CSV {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let idx = match column {
        Some(name) => headers
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("column {name:?} not found in {}", path.display()))?,
        None => 0,
    };
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let cell = record
            .get(idx)
            .with_context(|| format!("row {} too short", out.len() + 1))?;
        out.push(cell.trim().parse::<f64>().with_context(|| format!("m value {cell:?}"))?);
    }
    if out.len() < need {
        bail!("m-sequence CSV has {} rows, need {need}", out.len());
    }
    Ok(out)
}
