//! JSON run configuration.
//!
//! A file holds either one scenario object or `{"scenarios": [...]}`.
//! Unknown fields are rejected so typos surface early.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use caqed_core::{ModelParams, SimulationGrid};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    /// Emitter amplitude `α(t)` and its decomposition.
    Trace,
    /// Photon occupation `|β_n(t)|²`.
    Field,
    /// Poles, residues and stationary profiles.
    BoundStates,
    /// Reduced density matrix and time-local rates.
    Rates,
    /// Entanglement entropy (written alongside the rates).
    Entropy,
    /// Circuit mapping report.
    Circuit,
    /// Lattice eigenvalues.
    Spectrum,
    /// Integral kernel along the band.
    Kernel,
    /// Spectral density along the band.
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Branch-cut integral plus residues.
    #[default]
    Exact,
    /// Brute-force chain integration.
    Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default = "one")]
    pub xi: f64,
    #[serde(default)]
    pub omega0: f64,
    pub g0: f64,
    pub delta: f64,
    #[serde(default = "one_u32")]
    pub nc: u32,
    #[serde(default)]
    pub d: Option<u32>,
}

fn one() -> f64 {
    1.0
}

fn one_u32() -> u32 {
    1
}

impl ParamsConfig {
    pub fn to_model(self) -> ModelParams {
        ModelParams { xi: self.xi, omega0: self.omega0, g0: self.g0, delta: self.delta, nc: self.nc, d: self.d }
    }

    pub fn from_model(p: &ModelParams) -> Self {
        ParamsConfig { xi: p.xi, omega0: p.omega0, g0: p.g0, delta: p.delta, nc: p.nc, d: p.d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: f64,
    pub n_t: usize,
    #[serde(default = "default_half_width")]
    pub lattice_half_width: usize,
}

fn default_half_width() -> usize {
    caqed_core::lattice::DEFAULT_HALF_WIDTH
}

impl GridConfig {
    pub fn to_grid(self) -> SimulationGrid {
        SimulationGrid::new(self.t_max, self.n_t, self.lattice_half_width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Delta,
    G0,
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps).map(|j| self.from + j as f64 * h).collect()
    }

    pub fn apply(&self, p: &ModelParams, v: f64) -> ModelParams {
        let mut q = *p;
        match self.param {
            SweepParam::Delta => q.delta = v,
            SweepParam::G0 => q.g0 = v,
        }
        q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub rho_ee: f64,
    #[serde(default)]
    pub rho_eg_re: f64,
    #[serde(default)]
    pub rho_eg_im: f64,
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState { rho_ee: 1.0, rho_eg_re: 0.0, rho_eg_im: 0.0 }
    }
}

/// Field export window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    /// Sites `-half_width..=half_width` are written.
    pub half_width: usize,
    /// Keep every `every`-th time sample.
    #[serde(default = "one_usize")]
    pub every: usize,
}

fn one_usize() -> usize {
    1
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { half_width: 40, every: 1 }
    }
}

/// Lumped elements in SI units, Josephson and charging energies in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitElements {
    pub l0: f64,
    pub c0: f64,
    pub c: f64,
    pub cg: f64,
    pub c_sigma_q: f64,
    pub ej_hz: f64,
    pub ec_hz: f64,
}

/// Desired effective model in Hz with the fixed elements in SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitTargetsConfig {
    pub omega0_hz: f64,
    pub xi_hz: f64,
    pub g0_hz: f64,
    #[serde(default)]
    pub delta_hz: f64,
    pub c0: f64,
    pub c_sigma_q: f64,
    pub ec_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    #[serde(default)]
    pub elements: Option<CircuitElements>,
    #[serde(default)]
    pub targets: Option<CircuitTargetsConfig>,
    /// Also check the reference device values.
    #[serde(default)]
    pub table_check: bool,
}

/// Per-run numerical policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Absolute quadrature error per time point.
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
}

fn default_abs_tol() -> f64 {
    1e-9
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { abs_tol: default_abs_tol() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub params: Option<ParamsConfig>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    pub outputs: BTreeSet<Output>,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub field: Option<FieldConfig>,
    #[serde(default)]
    pub circuit: Option<CircuitConfig>,
    #[serde(default)]
    pub tolerance: ToleranceConfig,
}

impl Scenario {
    pub fn model(&self) -> Result<ModelParams> {
        let p = self.params.with_context(|| format!("scenario '{}' has no params", self.name))?;
        Ok(p.to_model().validate()?)
    }

    pub fn sim_grid(&self) -> Result<SimulationGrid> {
        let g = self.grid.with_context(|| format!("scenario '{}' has no grid", self.name))?;
        let xi = self.params.map_or(1.0, |p| p.xi);
        Ok(g.to_grid().validate(xi)?)
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenarios: Vec<Scenario>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyConfig {
    Many(RunConfig),
    One(Box<Scenario>),
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let any: AnyConfig = serde_json::from_str(text).context("config is not a valid scenario or scenario list")?;
        let cfg = match any {
            AnyConfig::Many(c) => c,
            AnyConfig::One(s) => RunConfig { scenarios: vec![*s] },
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text)
    }

    /// Names unique and usable as directory names.
    pub fn check(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in &self.scenarios {
            if s.name.is_empty() || !s.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) || s.name.starts_with('.') {
                bail!("scenario name '{}' must be non-empty ASCII letters, digits, '-', '_' or '.'", s.name);
            }
            if !seen.insert(s.name.as_str()) {
                bail!("duplicate scenario name '{}'", s.name);
            }
            if let Some(sw) = &s.sweep {
                if sw.steps == 0 || !sw.from.is_finite() || !sw.to.is_finite() {
                    bail!("scenario '{}': sweep needs finite bounds and steps >= 1", s.name);
                }
            }
            if let Some(f) = &s.field {
                if f.every == 0 {
                    bail!("scenario '{}': field.every must be at least 1", s.name);
                }
            }
            if !(s.tolerance.abs_tol > 0.0) {
                bail!("scenario '{}': tolerance.abs_tol must be positive", s.name);
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
