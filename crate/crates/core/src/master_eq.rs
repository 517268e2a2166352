//! Reduced emitter state, time-local master-equation rates and entropy.
//!
//! In the single-excitation sector the emitter map is fixed by the amplitude
//! `α(t)`: `ρ_ee(t) = ρ_ee(0)|α|²` and `ρ_eg(t) = ρ_eg(0)α`. The equivalent
//! time-local generator has
//!
//! ```text
//! Δ̃(t) = -2 Im(α̇/α),    Γ(t) = -2 Re(α̇/α),
//! ```
//!
//! where `Δ̃` keeps the factor two of the customary convention in this model
//! (the usual Lamb shift is half of it). Only `Γ` enters the populations.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::dynamics::{uniform_step, AmplitudeTrace};
use crate::{Error, Result};

/// Below this `|α|` the rates are reported as undefined.
pub const ALPHA_FLOOR: f64 = 1e-9;

/// Negative rates smaller than this fraction of `max |Γ|` are treated as
/// finite-difference noise by the witness.
pub const WITNESS_REL_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix {
    pub rho_ee: f64,
    pub rho_eg: C64,
    pub time: f64,
}

impl QubitDensityMatrix {
    pub fn new(rho_ee: f64, rho_eg: C64, time: f64) -> Result<Self> {
        let rho = QubitDensityMatrix { rho_ee, rho_eg, time };
        rho.validate()
    }

    pub fn excited() -> Self {
        QubitDensityMatrix { rho_ee: 1.0, rho_eg: C64::new(0.0, 0.0), time: 0.0 }
    }

    pub fn ground() -> Self {
        QubitDensityMatrix { rho_ee: 0.0, rho_eg: C64::new(0.0, 0.0), time: 0.0 }
    }

    /// `(|e⟩ + |g⟩)/√2`.
    pub fn equal_superposition() -> Self {
        QubitDensityMatrix { rho_ee: 0.5, rho_eg: C64::new(0.5, 0.0), time: 0.0 }
    }

    pub fn rho_gg(&self) -> f64 {
        1.0 - self.rho_ee
    }

    /// `ρ_ee ρ_gg - |ρ_eg|²`, non-negative for a physical state.
    pub fn positivity_margin(&self) -> f64 {
        self.rho_ee * self.rho_gg() - self.rho_eg.norm_sqr()
    }

    pub fn validate(self) -> Result<Self> {
        if !(0.0..=1.0).contains(&self.rho_ee) {
            return Err(Error::Domain { what: "rho_ee", value: self.rho_ee });
        }
        if self.positivity_margin() < -1e-12 || !self.rho_eg.is_finite() {
            return Err(Error::Domain { what: "|rho_eg|^2 - rho_ee rho_gg", value: -self.positivity_margin() });
        }
        Ok(self)
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = ((self.rho_ee - 0.5).powi(2) + self.rho_eg.norm_sqr()).sqrt();
        [0.5 - r, 0.5 + r]
    }
}

/// Emitter state at every sample of `trace`.
pub fn density_matrix(trace: &AmplitudeTrace, rho0: QubitDensityMatrix) -> Result<Vec<QubitDensityMatrix>> {
    let rho0 = rho0.validate()?;
    Ok(trace
        .times
        .iter()
        .zip(&trace.alpha)
        .map(|(&time, &a)| QubitDensityMatrix { rho_ee: rho0.rho_ee * a.norm_sqr(), rho_eg: rho0.rho_eg * a, time })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub time: f64,
    pub lamb_shift: f64,
    pub decay_rate: f64,
}

/// Rates on every sample; `None` where `|α| < ALPHA_FLOOR`.
pub fn rates(trace: &AmplitudeTrace) -> Result<Vec<Option<RatePair>>> {
    let h = trace.uniform_step()?;
    let deriv = demodulated_derivative(&trace.alpha, h)?;
    Ok(trace
        .times
        .iter()
        .zip(&trace.alpha)
        .zip(deriv)
        .map(|((&time, &a), da)| {
            if a.norm() < ALPHA_FLOOR {
                return None;
            }
            let q = da / a;
            Some(RatePair { time, lamb_shift: -2.0 * q.im, decay_rate: -2.0 * q.re })
        })
        .collect())
}

/// Fourth-order finite-difference derivative on a uniform grid.
pub fn derivative(f: &[C64], h: f64) -> Result<Vec<C64>> {
    let n = f.len();
    if n < 5 {
        return Err(Error::TooFewSamples { got: n, need: 5 });
    }
    let s = 1.0 / (12.0 * h);
    let mut out = Vec::with_capacity(n);
    out.push((f[0] * -25.0 + f[1] * 48.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * s);
    out.push((f[0] * -3.0 - f[1] * 10.0 + f[2] * 18.0 - f[3] * 6.0 + f[4]) * s);
    for j in 2..n - 2 {
        out.push((f[j - 2] - f[j - 1] * 8.0 + f[j + 1] * 8.0 - f[j + 2]) * s);
    }
    let m = n - 1;
    out.push((f[m] * 3.0 + f[m - 1] * 10.0 - f[m - 2] * 18.0 + f[m - 3] * 6.0 - f[m - 4]) * s);
    out.push((f[m] * 25.0 - f[m - 1] * 48.0 + f[m - 2] * 36.0 - f[m - 3] * 16.0 + f[m - 4] * 3.0) * s);
    Ok(out)
}

/// Derivative of a fast-rotating amplitude. At each sample the local
/// carrier `ω` is removed, `f e^{iωt}` is differentiated and `-iωf` added
/// back; the result is exact in `ω`, so only the truncation error shrinks.
pub fn demodulated_derivative(f: &[C64], h: f64) -> Result<Vec<C64>> {
    let n = f.len();
    if n < 5 {
        return Err(Error::TooFewSamples { got: n, need: 5 });
    }
    let s = 1.0 / (12.0 * h);
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let (lo, hi) = (j.saturating_sub(1), (j + 1).min(n - 1));
        let step = f[hi] * f[lo].conj();
        let omega = if step.norm() > 0.0 { -step.arg() / ((hi - lo) as f64 * h) } else { 0.0 };
        let start = j.saturating_sub(2).min(n - 5);
        let g: [C64; 5] =
            core::array::from_fn(|k| f[start + k] * C64::from_polar(1.0, omega * ((start + k) as f64 - j as f64) * h));
        let w: [f64; 5] = match j - start {
            0 => [-25.0, 48.0, -36.0, 16.0, -3.0],
            1 => [-3.0, -10.0, 18.0, -6.0, 1.0],
            2 => [1.0, -8.0, 0.0, 8.0, -1.0],
            3 => [-1.0, 6.0, -18.0, 10.0, 3.0],
            _ => [3.0, -16.0, 36.0, -48.0, 25.0],
        };
        let dg = g.iter().zip(w).fold(C64::new(0.0, 0.0), |acc, (&gk, wk)| acc + gk * wk) * s;
        out.push(dg + C64::new(0.0, -omega) * f[j]);
    }
    Ok(out)
}

/// Cumulative integral `∫_{t_0}^{t_j} f` with fourth-order local rules.
pub fn cumulative_integral(f: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = f.len();
    if n < 4 {
        return Err(Error::TooFewSamples { got: n, need: 4 });
    }
    let c = h / 24.0;
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    for j in 0..n - 1 {
        let piece = if j == 0 {
            9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]
        } else if j == n - 2 {
            9.0 * f[j + 1] + 19.0 * f[j] - 5.0 * f[j - 1] + f[j - 2]
        } else {
            -f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]
        };
        acc += c * piece;
        out.push(acc);
    }
    Ok(out)
}

/// Solve `dρ_ee/dt = -Γ(t) ρ_ee` from `rho_ee0`. Samples at and after the
/// first undefined rate are NaN.
pub fn propagate_population(rates: &[Option<RatePair>], rho_ee0: f64) -> Result<Vec<f64>> {
    let times: Vec<f64> = rates.iter().map(|r| r.map_or(f64::NAN, |r| r.time)).collect();
    let defined = rates.iter().take_while(|r| r.is_some()).count();
    if defined < 4 {
        return Err(Error::TooFewSamples { got: defined, need: 4 });
    }
    let h = uniform_step(&times[..defined])?;
    let gamma: Vec<f64> = rates[..defined].iter().map(|r| r.expect("defined").decay_rate).collect();
    let integral = cumulative_integral(&gamma, h)?;
    let mut out: Vec<f64> = integral.iter().map(|i| rho_ee0 * (-i).exp()).collect();
    out.resize(rates.len(), f64::NAN);
    Ok(out)
}

/// Von Neumann entropy in nats, `0 ≤ S ≤ ln 2`.
pub fn entropy(rho: &QubitDensityMatrix) -> f64 {
    rho.eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0)
}

/// Maximal runs of consecutive defined samples with `Γ` below minus the
/// noise floor, as `(first time, last time)`. A run of a single sample is
/// not resolved by the grid and is dropped.
pub fn nonmarkovianity_witness(rates: &[Option<RatePair>]) -> Vec<(f64, f64)> {
    let scale = rates.iter().flatten().fold(0.0f64, |m, r| m.max(r.decay_rate.abs()));
    let floor = WITNESS_REL_FLOOR * scale;
    let mut out = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for r in rates.iter().chain([&None]) {
        match r {
            Some(r) if r.decay_rate < -floor => {
                open = Some(open.map_or((r.time, r.time), |(a, _)| (a, r.time)));
            }
            _ => out.extend(open.take().filter(|(a, b)| b > a)),
        }
    }
    out
}
