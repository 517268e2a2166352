//! Lumped-element circuit (a chain of capacitively coupled LC resonators
//! with a transmon) mapped onto the tight-binding model, and back.
//!
//! All inputs are SI: henry, farad, and angular frequencies in rad/s for
//! `E_J` and `E_C` (energies divided by ħ). The chain capacitance per site
//! is `C_Σ = C_0 + 2C`; with the qubit attached, `C_Σ' = C_Σ + C_g`.
//!
//! ```text
//! ω0 = 1/√(L0 C_Σ'),   ξ = ω0 C/(2 C_Σ'),
//! ω_q = √(8 E_C E_J),  g0 = C_g √(ω_q ω0/(C_Σq C_Σ'))/2.
//! ```
//!
//! The transmon frequency `ω_q` is absolute; the model detuning is
//! `Δ = ω_q - ω0`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::model::ModelParams;
use crate::{Error, Result};

/// Largest `C/C_Σ` for which the first-order inverse-capacitance expansion
/// is trusted.
pub const REGIME_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    pub l0: f64,
    pub c0: f64,
    pub c: f64,
    pub cg: f64,
    pub c_sigma_q: f64,
    pub ej: f64,
    pub ec: f64,
}

impl CircuitParams {
    pub fn validate(self) -> Result<Self> {
        let pos = [
            (self.l0, "l0 must be positive"),
            (self.c0, "c0 must be positive"),
            (self.c, "c must be positive"),
            (self.c_sigma_q, "c_sigma_q must be positive"),
            (self.ej, "ej must be positive"),
            (self.ec, "ec must be positive"),
        ];
        for (v, msg) in pos {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(msg));
            }
        }
        if !(self.cg.is_finite() && self.cg >= 0.0) {
            return Err(Error::InvalidParams("cg must be non-negative"));
        }
        Ok(self)
    }

    /// Bulk site capacitance `C_0 + 2C`.
    pub fn c_sigma(&self) -> f64 {
        self.c0 + 2.0 * self.c
    }

    /// Line capacitance renormalized by the qubit, `C_Σ + C_g`.
    pub fn c_sigma_prime(&self) -> f64 {
        self.c_sigma() + self.cg
    }
}

/// Effective model in angular frequency (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveModel {
    pub omega0: f64,
    pub xi: f64,
    pub g0: f64,
    /// Transmon transition frequency `√(8 E_C E_J)`.
    pub qubit_frequency: f64,
    /// `qubit_frequency - omega0`.
    pub delta: f64,
    /// `C/C_Σ`.
    pub coupling_ratio: f64,
    pub warnings: Vec<&'static str>,
}

impl EffectiveModel {
    /// Small-emitter model in units of `ξ`. Fails when the qubit is
    /// decoupled (`g0 = 0`).
    pub fn model_params(&self) -> Result<ModelParams> {
        let mut p = ModelParams::small(self.g0 / self.xi, self.delta / self.xi);
        p.omega0 = self.omega0 / self.xi;
        p.validate()
    }
}

pub fn effective_model(cp: &CircuitParams) -> Result<EffectiveModel> {
    let cp = cp.validate()?;
    let cs = cp.c_sigma_prime();
    let omega0 = 1.0 / (cp.l0 * cs).sqrt();
    let xi = omega0 * cp.c / (2.0 * cs);
    let qubit_frequency = (8.0 * cp.ec * cp.ej).sqrt();
    let g0 = cp.cg * (qubit_frequency * omega0 / (cp.c_sigma_q * cs)).sqrt() / 2.0;
    let coupling_ratio = cp.c / cp.c_sigma();
    let mut warnings = Vec::new();
    if coupling_ratio >= REGIME_LIMIT {
        warnings.push("C/C_sigma >= 0.1: first-order capacitance expansion is unreliable");
    }
    Ok(EffectiveModel { omega0, xi, g0, qubit_frequency, delta: qubit_frequency - omega0, coupling_ratio, warnings })
}

/// Targets for the inverse problem. Frequencies in rad/s; `c0`,
/// `c_sigma_q` and `ec` are held fixed and the remaining elements solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitTargets {
    pub omega0: f64,
    pub xi: f64,
    pub g0: f64,
    pub delta: f64,
    pub c0: f64,
    pub c_sigma_q: f64,
    pub ec: f64,
}

/// Solve for `L0`, `C`, `C_g` and `E_J`. With `z = √C_Σ'` the conditions
/// reduce to `(1 - 2ρ) z² - β z - C_0 = 0`, `ρ = 2ξ/ω0`,
/// `β = 2 g0 √(C_Σq/(ω_q ω0))`.
pub fn solve_circuit(t: &CircuitTargets) -> Result<CircuitParams> {
    for (v, msg) in [
        (t.omega0, "omega0 must be positive"),
        (t.xi, "xi must be positive"),
        (t.c0, "c0 must be positive"),
        (t.c_sigma_q, "c_sigma_q must be positive"),
        (t.ec, "ec must be positive"),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParams(msg));
        }
    }
    if !(t.g0.is_finite() && t.g0 >= 0.0) {
        return Err(Error::InvalidParams("g0 must be non-negative"));
    }
    let wq = t.omega0 + t.delta;
    if !(wq > 0.0) {
        return Err(Error::InvalidParams("qubit frequency omega0 + delta must be positive"));
    }
    let rho = 2.0 * t.xi / t.omega0;
    if rho >= 0.5 {
        return Err(Error::InvalidParams("2 xi / omega0 must be below 1/2"));
    }
    let a = 1.0 - 2.0 * rho;
    let beta = 2.0 * t.g0 * (t.c_sigma_q / (wq * t.omega0)).sqrt();
    let z = (beta + (beta * beta + 4.0 * a * t.c0).sqrt()) / (2.0 * a);
    let cs = z * z;
    CircuitParams {
        l0: 1.0 / (t.omega0 * t.omega0 * cs),
        c0: t.c0,
        c: rho * cs,
        cg: beta * z,
        c_sigma_q: t.c_sigma_q,
        ej: wq * wq / (8.0 * t.ec),
        ec: t.ec,
    }
    .validate()
}

/// Published device values, in Hz.
pub const TABLE_OMEGA0_HZ: f64 = 5.71e9;
pub const TABLE_XI_HZ: f64 = 249e6;
pub const TABLE_G0_HZ: f64 = 50e6;

/// Element values held fixed when solving for the reference device: a
/// 400 fF site capacitor and an 80 fF transmon with `E_C/h = 242 MHz`.
pub const REFERENCE_C0: f64 = 400e-15;
pub const REFERENCE_C_SIGMA_Q: f64 = 80e-15;
pub const REFERENCE_EC_HZ: f64 = 242e6;

#[derive(Debug, Clone, PartialEq)]
pub struct TableLine {
    pub name: &'static str,
    pub expected: f64,
    pub obtained: f64,
    pub rel_tol: f64,
}

impl TableLine {
    pub fn relative_error(&self) -> f64 {
        ((self.obtained - self.expected) / self.expected).abs()
    }

    pub fn pass(&self) -> bool {
        self.relative_error() <= self.rel_tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub circuit: CircuitParams,
    pub model: EffectiveModel,
    pub lines: Vec<TableLine>,
}

impl TableReport {
    pub fn pass(&self) -> bool {
        self.lines.iter().all(TableLine::pass)
    }
}

/// Solve the circuit for the reference device with `g0 = ξ/5` at resonance
/// and check the forward map against the reference numbers.
pub fn table_check() -> Result<TableReport> {
    let two_pi = 2.0 * PI;
    let g0_hz = TABLE_XI_HZ / 5.0;
    let targets = CircuitTargets {
        omega0: two_pi * TABLE_OMEGA0_HZ,
        xi: two_pi * TABLE_XI_HZ,
        g0: two_pi * g0_hz,
        delta: 0.0,
        c0: REFERENCE_C0,
        c_sigma_q: REFERENCE_C_SIGMA_Q,
        ec: two_pi * REFERENCE_EC_HZ,
    };
    let circuit = solve_circuit(&targets)?;
    let model = effective_model(&circuit)?;
    let lines = alloc::vec![
        TableLine { name: "omega0/2pi [Hz]", expected: TABLE_OMEGA0_HZ, obtained: model.omega0 / two_pi, rel_tol: 1e-3 },
        TableLine { name: "xi/2pi [Hz]", expected: TABLE_XI_HZ, obtained: model.xi / two_pi, rel_tol: 1e-3 },
        TableLine { name: "g0/2pi [Hz]", expected: 49.8e6, obtained: model.g0 / two_pi, rel_tol: 1e-3 },
        TableLine { name: "g0 rounded to 10 MHz [Hz]", expected: TABLE_G0_HZ, obtained: (model.g0 / two_pi / 1e7).round() * 1e7, rel_tol: 0.0 },
        TableLine { name: "g0/xi", expected: 0.2, obtained: model.g0 / model.xi, rel_tol: 1e-3 },
        TableLine { name: "omega0/xi", expected: 22.93172690763052, obtained: model.omega0 / model.xi, rel_tol: 1e-3 },
    ];
    Ok(TableReport { circuit, model, lines })
}
