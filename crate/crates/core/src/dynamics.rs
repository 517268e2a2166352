//! Exact emitter amplitude `α(t)`: a branch-cut integral over the band plus
//! one undamped term `r_j e^{-i y_j t}` per real pole.
//!
//! With `ỹ = cos θ` the scattering part reads
//!
//! ```text
//! α_scat(t) = (4 g̃² / π) ∫₀^π K_θ(θ) e^{2iξ t cos θ} dθ,   g̃ = g0/ξ,
//! K_θ = C² s² / (4 (a s + g̃² S C / 2)² + g̃⁴ C⁴),
//! ```
//!
//! where `s = sin θ`, `a = 2 cos θ + Δ/ξ`, `C = cos(dθ/2)`, `S = sin(dθ/2)`
//! and `d = 0` for a small emitter. This is `sin θ · K(ỹ)` rewritten so the
//! denominator is a sum of squares: it never changes sign and only vanishes
//! where the numerator does (a BIC tuned exactly onto the node), in which
//! case the limit is finite.
//!
//! Quadrature policy: the kernel is partitioned adaptively with GK15 panels
//! (minimum width `1e-8`), each panel is then split so that the phase of
//! `e^{2iξt cos θ}` advances by at most `π` across it, and the per-time error
//! estimate `Σ |K15 - G7|` must stay below the absolute tolerance. Beyond
//! `t = 1000/ξ` the interior of the band switches to a Filon rule in `ỹ`
//! (degree-16 Chebyshev fit of the kernel against exact oscillatory moments)
//! while the two end caps stay on GK15 in `θ`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::bessel::bessel_j_sequence;
use crate::bound_states::{all_poles, BoundState};
use crate::model::{Geometry, ModelParams, SimulationGrid};
use crate::quadrature::{adaptive_partition, chebyshev_monomials, filon_integral, gauss_legendre, Gk15Rule, Panel};
use crate::spectral::invert_dispersion;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub delta: f64,
    pub g0: f64,
    pub xi: f64,
    pub d: Option<u32>,
    pub giant: bool,
}

impl KernelSpec {
    pub fn from_params(p: &ModelParams) -> Self {
        let giant = matches!(p.geometry(), Geometry::Giant { .. });
        KernelSpec { delta: p.delta, g0: p.g0, xi: p.xi, d: p.d, giant }
    }

    pub fn validate(&self) -> Result<Self> {
        if !(self.xi > 0.0 && self.g0 > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParams("kernel needs xi > 0, g0 > 0 and finite delta"));
        }
        match (self.giant, self.d) {
            (true, Some(d)) if d % 2 == 0 => Ok(*self),
            (true, _) => Err(Error::InvalidParams("giant kernel requires an even d")),
            (false, _) => Ok(*self),
        }
    }

    fn separation(&self) -> u32 {
        if self.giant {
            self.d.unwrap_or(0)
        } else {
            0
        }
    }

    /// `4 g̃² / π`.
    pub fn prefactor(&self) -> f64 {
        let gt = self.g0 / self.xi;
        4.0 * gt * gt / PI
    }

    /// `K_θ(θ) = sin θ · K(cos θ)` in the cancellation-free form.
    pub fn kernel_theta(&self, theta: f64) -> f64 {
        let gt = self.g0 / self.xi;
        let g2 = gt * gt;
        let s = theta.sin();
        let a = 2.0 * theta.cos() + self.delta / self.xi;
        let d = self.separation() as f64;
        let (c, sd) = if d == 0.0 { (1.0, 0.0) } else { ((0.5 * d * theta).cos(), (0.5 * d * theta).sin()) };
        let num = c * c * s * s;
        let lin = a * s + 0.5 * g2 * sd * c;
        let den = 4.0 * lin * lin + g2 * g2 * c * c * c * c;
        if den > 0.0 {
            num / den
        } else if num == 0.0 && s != 0.0 {
            // exactly on a tuned BIC node: average the two neighbours
            let h = 1e-7;
            0.5 * (self.kernel_theta(theta - h) + self.kernel_theta(theta + h))
        } else {
            0.0
        }
    }
}

fn check_open(y: f64) -> Result<()> {
    if !(y.abs() < 1.0) {
        return Err(Error::Domain { what: "y_tilde", value: y });
    }
    Ok(())
}

/// `K(ỹ) = √(1-ỹ²) / (4(2ỹ + Δ/ξ)²(1-ỹ²) + (g0/ξ)⁴)`.
pub fn kernel_small(y: f64, spec: &KernelSpec) -> Result<f64> {
    check_open(y)?;
    if spec.giant {
        return Err(Error::InvalidParams("kernel_small needs a small-emitter spec"));
    }
    let gt = spec.g0 / spec.xi;
    let a = 2.0 * y + spec.delta / spec.xi;
    let q = 1.0 - y * y;
    Ok(q.sqrt() / (4.0 * a * a * q + gt.powi(4)))
}

/// `K_giant(ỹ, d) = √(1-ỹ²)[1 + cos(kd)] / (8(2ỹ+Δ/ξ)²(1-ỹ²) + F)` with
/// `F = g̃⁴(1 + cos kd) - 4g̃²(2ỹ+Δ/ξ)√(1-ỹ²) sin kd` and `k = k(-2ξỹ)`.
pub fn kernel_giant(y: f64, spec: &KernelSpec) -> Result<f64> {
    check_open(y)?;
    let d = match (spec.giant, spec.d) {
        (true, Some(d)) => d as f64,
        _ => return Err(Error::InvalidParams("kernel_giant needs a giant-emitter spec")),
    };
    let gt = spec.g0 / spec.xi;
    let k = invert_dispersion(-2.0 * spec.xi * y, spec.xi)?;
    let a = 2.0 * y + spec.delta / spec.xi;
    let q = 1.0 - y * y;
    let cos_kd = (k * d).cos();
    let f = gt.powi(4) * (1.0 + cos_kd) - 4.0 * gt * gt * a * q.sqrt() * (k * d).sin();
    let den = 8.0 * a * a * q + f;
    if den.abs() < 1e-30 {
        return Err(Error::Domain { what: "kernel denominator", value: den });
    }
    Ok(q.sqrt() * (1.0 + cos_kd) / den)
}

/// Interior zeros of the kernel on `(-1, 1)`, counted as local minima on a
/// uniform `θ` grid whose value is below `1e-12` of the kernel's maximum.
/// The zeros are double zeros, so sign changes would miss them.
pub fn kernel_zero_count(spec: &KernelSpec, samples: usize) -> usize {
    let vals: Vec<f64> = (1..samples).map(|j| spec.kernel_theta(PI * j as f64 / samples as f64)).collect();
    let peak = vals.iter().cloned().fold(0.0, f64::max);
    let mut count = 0;
    for j in 1..vals.len().saturating_sub(1) {
        if vals[j] <= vals[j - 1] && vals[j] < vals[j + 1] && vals[j] < 1e-12 * peak {
            count += 1;
        }
    }
    // a zero can fall between grid points; refine any shallow minimum
    for j in 1..vals.len().saturating_sub(1) {
        if vals[j] <= vals[j - 1] && vals[j] < vals[j + 1] && vals[j] >= 1e-12 * peak {
            let lo = PI * j as f64 / samples as f64;
            let hi = PI * (j + 2) as f64 / samples as f64;
            if golden_min(|t| spec.kernel_theta(t), lo, hi) < 1e-12 * peak {
                count += 1;
            }
        }
    }
    count
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
        if b - a < 1e-15 {
            break;
        }
    }
    f(0.5 * (a + b))
}

/// Numerical policy of the scattering integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePolicy {
    /// Absolute error budget per time point.
    pub abs_tol: f64,
    /// Smallest panel the kernel partition may create.
    pub min_width: f64,
    /// Extra splitting of every oscillation panel (1 = nominal).
    pub refine: usize,
    /// Times above this (in `1/ξ`) use the Filon rule.
    pub filon_after: f64,
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        QuadraturePolicy { abs_tol: 1e-9, min_width: 1e-8, refine: 1, filon_after: 1000.0 }
    }
}

/// Half-width of the end caps handled in `θ` by the Filon scheme.
const FILON_CAP: f64 = 0.1;
const FILON_DEGREE: usize = 16;

struct FilonPanel {
    center: f64,
    half: f64,
    poly: Vec<f64>,
}

/// Precomputed branch-cut integral for one kernel.
pub struct ScatteringIntegral {
    spec: KernelSpec,
    policy: QuadraturePolicy,
    pref: f64,
    kernel_panels: Vec<Panel>,
    /// Flattened GK15 data for `t <= t_split`: cos θ, Kronrod and
    /// Kronrod-minus-Gauss weights times kernel and prefactor.
    nodes_y: Vec<f64>,
    w_k: Vec<f64>,
    w_diff: Vec<f64>,
    panel_bounds: Vec<(f64, f64)>,
    t_split: f64,
    filon: Vec<FilonPanel>,
    filon_error: f64,
    gl: (Vec<f64>, Vec<f64>),
}

impl ScatteringIntegral {
    /// Build the integral for times up to `t_max`.
    pub fn new(spec: KernelSpec, t_max: f64, policy: QuadraturePolicy) -> Result<Self> {
        let spec = spec.validate()?;
        let pref = spec.prefactor();
        let f = |th: f64| pref * spec.kernel_theta(th);
        let kernel_panels = adaptive_partition(&f, 0.0, PI, 16, 0.05 * policy.abs_tol, policy.min_width, 1 << 22)?;

        let t_split = t_max.min(policy.filon_after);
        let omega = 2.0 * spec.xi * t_split;
        let mut nodes_y = Vec::new();
        let mut w_k = Vec::new();
        let mut w_diff = Vec::new();
        let mut panel_bounds = Vec::new();
        for p in &kernel_panels {
            for sub in split_for_oscillation(*p, omega, policy.refine) {
                let rule = Gk15Rule::on(sub.a, sub.b);
                for j in 0..15 {
                    let kv = f(rule.nodes[j]);
                    nodes_y.push(rule.nodes[j].cos());
                    w_k.push(rule.kronrod[j] * kv);
                    w_diff.push((rule.kronrod[j] - rule.gauss[j]) * kv);
                }
                panel_bounds.push((sub.a, sub.b));
            }
        }

        let mut integral = ScatteringIntegral {
            spec,
            policy,
            pref,
            kernel_panels,
            nodes_y,
            w_k,
            w_diff,
            panel_bounds,
            t_split,
            filon: Vec::new(),
            filon_error: 0.0,
            gl: gauss_legendre(48),
        };
        if t_max > policy.filon_after {
            integral.build_filon()?;
        }
        Ok(integral)
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Number of GK15 panels used below the Filon threshold.
    pub fn panel_count(&self) -> usize {
        self.panel_bounds.len()
    }

    fn build_filon(&mut self) -> Result<()> {
        let spec = self.spec;
        let pref = self.pref;
        // kernel in ỹ on the interior, K(ỹ) = K_θ / sin θ
        let k_y = |y: f64| {
            let th = y.clamp(-1.0, 1.0).acos();
            pref * spec.kernel_theta(th) / th.sin()
        };
        let y_lo = -(FILON_CAP.cos());
        let y_hi = FILON_CAP.cos();
        // seed the ỹ partition from the kernel's θ panels
        let mut cuts: Vec<f64> = self
            .kernel_panels
            .iter()
            .map(|p| p.a.cos())
            .filter(|&y| y > y_lo && y < y_hi)
            .collect();
        cuts.push(y_lo);
        cuts.push(y_hi);
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        let budget = 0.25 * self.policy.abs_tol;
        let mut stack: Vec<Panel> = cuts.windows(2).rev().map(|w| Panel { a: w[0], b: w[1] }).collect();
        let mut total_err = 0.0;
        while let Some(p) = stack.pop() {
            let (poly, err) = chebyshev_monomials(&k_y, p.a, p.b, FILON_DEGREE);
            let bound = err * p.width();
            if bound <= budget * p.width() / (y_hi - y_lo) || p.width() < self.policy.min_width {
                total_err += bound;
                self.filon.push(FilonPanel { center: 0.5 * (p.a + p.b), half: 0.5 * p.width(), poly });
            } else {
                let m = 0.5 * (p.a + p.b);
                stack.push(Panel { a: m, b: p.b });
                stack.push(Panel { a: p.a, b: m });
            }
            if self.filon.len() + stack.len() > 1 << 20 {
                return Err(Error::Quadrature { t: self.policy.filon_after, panel: (p.a, p.b), estimate: bound });
            }
        }
        self.filon_error = total_err;
        Ok(())
    }

    /// `α_scat(t)` with the policy-selected rule.
    pub fn eval(&self, t: f64) -> Result<C64> {
        if t > self.policy.filon_after && !self.filon.is_empty() {
            self.eval_filon(t)
        } else if t <= self.t_split * (1.0 + 1e-12) {
            self.eval_gk(t)
        } else {
            self.eval_gk_on_the_fly(t)
        }
    }

    fn eval_gk(&self, t: f64) -> Result<C64> {
        let omega = 2.0 * self.spec.xi * t;
        let mut sum = C64::new(0.0, 0.0);
        let mut err_total = 0.0;
        let mut worst = (0.0, (0.0, 0.0));
        for (p, bounds) in self.panel_bounds.iter().enumerate() {
            let mut ks = C64::new(0.0, 0.0);
            let mut ds = C64::new(0.0, 0.0);
            for j in 15 * p..15 * p + 15 {
                let e = C64::from_polar(1.0, omega * self.nodes_y[j]);
                ks += e * self.w_k[j];
                ds += e * self.w_diff[j];
            }
            sum += ks;
            let e = ds.norm();
            err_total += e;
            if e > worst.0 {
                worst = (e, *bounds);
            }
        }
        if err_total > self.policy.abs_tol {
            return Err(Error::Quadrature { t, panel: worst.1, estimate: err_total });
        }
        Ok(sum)
    }

    /// GK15 with panels split for this particular `t` (between the
    /// precomputed range and the Filon threshold).
    fn eval_gk_on_the_fly(&self, t: f64) -> Result<C64> {
        self.gk_over(t, &self.kernel_panels)
    }

    fn gk_over(&self, t: f64, panels: &[Panel]) -> Result<C64> {
        let omega = 2.0 * self.spec.xi * t;
        let mut sum = C64::new(0.0, 0.0);
        let mut err_total = 0.0;
        let mut worst = (0.0, (0.0, 0.0));
        for p in panels {
            for sub in split_for_oscillation(*p, omega, self.policy.refine) {
                let rule = Gk15Rule::on(sub.a, sub.b);
                let mut ks = C64::new(0.0, 0.0);
                let mut ds = C64::new(0.0, 0.0);
                for j in 0..15 {
                    let kv = self.pref * self.spec.kernel_theta(rule.nodes[j]);
                    let e = C64::from_polar(kv, omega * rule.nodes[j].cos());
                    ks += e * rule.kronrod[j];
                    ds += e * (rule.kronrod[j] - rule.gauss[j]);
                }
                sum += ks;
                let e = ds.norm();
                err_total += e;
                if e > worst.0 {
                    worst = (e, (sub.a, sub.b));
                }
            }
        }
        if err_total > self.policy.abs_tol {
            return Err(Error::Quadrature { t, panel: worst.1, estimate: err_total });
        }
        Ok(sum)
    }

    /// Filon rule in the band interior plus GK15 end caps.
    pub fn eval_filon(&self, t: f64) -> Result<C64> {
        if self.filon.is_empty() {
            return Err(Error::InvalidParams("Filon panels were not built for this time range"));
        }
        let omega = 2.0 * self.spec.xi * t;
        let mut sum = C64::new(0.0, 0.0);
        for p in &self.filon {
            let phase = C64::from_polar(p.half, omega * p.center);
            sum += phase * filon_integral(&p.poly, omega * p.half, &self.gl);
        }
        let caps: Vec<Panel> = self
            .kernel_panels
            .iter()
            .flat_map(|p| clip(*p, 0.0, FILON_CAP).into_iter().chain(clip(*p, PI - FILON_CAP, PI)))
            .collect();
        let cap_sum = self.gk_over(t, &caps).map_err(|e| match e {
            Error::Quadrature { panel, estimate, .. } => {
                Error::Quadrature { t, panel, estimate: estimate + self.filon_error }
            }
            other => other,
        })?;
        Ok(sum + cap_sum)
    }

    /// Adaptive GK15 regardless of `t`, for cross-checking the Filon rule.
    pub fn eval_adaptive(&self, t: f64) -> Result<C64> {
        self.gk_over(t, &self.kernel_panels)
    }
}

fn clip(p: Panel, lo: f64, hi: f64) -> Option<Panel> {
    let a = p.a.max(lo);
    let b = p.b.min(hi);
    (b > a).then_some(Panel { a, b })
}

/// Sub-panels of `p` across which `ω cos θ` changes by at most `π/refine`.
fn split_for_oscillation(p: Panel, omega: f64, refine: usize) -> impl Iterator<Item = Panel> {
    let max_sin = if p.a <= PI / 2.0 && p.b >= PI / 2.0 { 1.0 } else { p.a.sin().max(p.b.sin()) };
    let phase = omega * max_sin * p.width();
    let m = ((phase / PI).ceil() as usize).max(1) * refine.max(1);
    let w = p.width() / m as f64;
    (0..m).map(move |j| Panel { a: p.a + j as f64 * w, b: if j + 1 == m { p.b } else { p.a + (j + 1) as f64 * w } })
}

/// Emitter amplitude on a time grid, split into its two contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub times: Vec<f64>,
    pub alpha: Vec<C64>,
    pub scattering_part: Vec<C64>,
    pub residue_part: Vec<C64>,
}

impl AmplitudeTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn population(&self) -> Vec<f64> {
        self.alpha.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Build from a bare amplitude series (no decomposition available).
    pub fn from_alpha(times: Vec<f64>, alpha: Vec<C64>) -> Self {
        let n = times.len();
        AmplitudeTrace { times, scattering_part: alpha.clone(), alpha, residue_part: vec![C64::new(0.0, 0.0); n] }
    }

    /// Spacing of a uniform grid, or an error.
    pub fn uniform_step(&self) -> Result<f64> {
        uniform_step(&self.times)
    }
}

pub(crate) fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::TooFewSamples { got: times.len(), need: 2 });
    }
    let h = times[1] - times[0];
    if !(h > 0.0) {
        return Err(Error::NonUniformGrid);
    }
    for (j, &t) in times.iter().enumerate() {
        if (t - times[0] - j as f64 * h).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(h)
}

/// `Σ_j r_j e^{-i y_j t}`.
pub fn residue_sum(bound: &[BoundState], t: f64) -> C64 {
    bound.iter().map(|b| C64::from_polar(b.residue, -b.energy * t)).sum()
}

/// `α(t)` at arbitrary times.
pub fn alpha_at_times(spec: &KernelSpec, times: &[f64], bound: &[BoundState], policy: QuadraturePolicy) -> Result<AmplitudeTrace> {
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    let integral = ScatteringIntegral::new(*spec, t_max, policy)?;
    let mut alpha = Vec::with_capacity(times.len());
    let mut scattering_part = Vec::with_capacity(times.len());
    let mut residue_part = Vec::with_capacity(times.len());
    for &t in times {
        let s = integral.eval(t)?;
        let r = residue_sum(bound, t);
        scattering_part.push(s);
        residue_part.push(r);
        alpha.push(s + r);
    }
    Ok(AmplitudeTrace { times: times.to_vec(), alpha, scattering_part, residue_part })
}

/// `α(t)` on the uniform grid of `grid`. `bound` must hold every real pole
/// of the kernel's parameters (see [`crate::bound_states::all_poles`]).
pub fn alpha_exact(spec: &KernelSpec, grid: &SimulationGrid, bound: &[BoundState]) -> Result<AmplitudeTrace> {
    alpha_at_times(spec, &grid.times(), bound, QuadraturePolicy::default())
}

/// Poles plus trace in one call.
pub fn solve_amplitude(params: &ModelParams, times: &[f64], policy: QuadraturePolicy) -> Result<AmplitudeTrace> {
    let params = params.validate()?;
    let bound = all_poles(&params)?;
    alpha_at_times(&KernelSpec::from_params(&params), times, &bound, policy)
}

/// Quadrature weights on `m + 1` equally spaced points (unit spacing):
/// the fourth-order Gregory end correction `[3/8, 7/6, 23/24, 1, …]` when
/// `m >= 6`, Newton–Cotes combinations below.
fn gregory_weights(m: usize) -> Vec<f64> {
    let mut w = vec![0.0; m + 1];
    match m {
        0 => {}
        1 => w.copy_from_slice(&[0.5, 0.5]),
        2 => w.copy_from_slice(&[1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]),
        3 => w.copy_from_slice(&[3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0]),
        4 => w.copy_from_slice(&[1.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]),
        5 => w.copy_from_slice(&[1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0 + 3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0]),
        _ => {
            for v in w.iter_mut() {
                *v = 1.0;
            }
            let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
            for (j, &e) in ends.iter().enumerate() {
                w[j] = e;
                w[m - j] = e;
            }
        }
    }
    w
}

/// `β_n(t) = -i (-i)^{|n|} g0 ∫₀ᵗ α(t-τ) J_{|n|}(2ξτ) dτ` for each site in
/// `sites` (small emitter, rotating frame). Returns one series per site.
pub fn beta_fields_small(sites: &[i64], trace: &AmplitudeTrace, params: &ModelParams) -> Result<Vec<Vec<C64>>> {
    let params = params.validate()?;
    if params.geometry() != Geometry::Small {
        return Err(Error::InvalidParams("closed-form photon amplitudes need nc = 1"));
    }
    let h = trace.uniform_step()?;
    if trace.times[0].abs() > 1e-12 {
        return Err(Error::InvalidParams("trace must start at t = 0"));
    }
    let nt = trace.len();
    let nmax = sites.iter().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0);
    // bessel[k][n] = J_n(2ξ τ_k)
    let bessel: Vec<Vec<f64>> = (0..nt).map(|k| bessel_j_sequence(nmax, 2.0 * params.xi * k as f64 * h)).collect();
    let weights: Vec<Vec<f64>> = (0..nt).map(gregory_weights).collect();
    let mut out = Vec::with_capacity(sites.len());
    for &n in sites {
        let m = n.unsigned_abs() as usize;
        let phase = C64::new(0.0, -1.0) * C64::new(0.0, -1.0).powi(m as i32) * params.g0;
        let mut series = Vec::with_capacity(nt);
        for j in 0..nt {
            let w = &weights[j];
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..=j {
                acc += trace.alpha[j - k] * (w[k] * bessel[k][m]);
            }
            series.push(phase * acc * h);
        }
        out.push(series);
    }
    Ok(out)
}

/// Single-site version of [`beta_fields_small`].
pub fn beta_field_small(n: i64, trace: &AmplitudeTrace, params: &ModelParams) -> Result<Vec<C64>> {
    Ok(beta_fields_small(&[n], trace, params)?.remove(0))
}

/// Power-law fit of the scattering contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    /// Slope of `log |α_scat|²` against `log t`.
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the power-law fit.
    pub rms_power: f64,
    /// RMS residual of a straight-line fit of `log |α_scat|²` against `t`.
    pub rms_exponential: f64,
    /// False when an exponential describes the data better.
    pub algebraic: bool,
    pub samples: usize,
}

fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    (slope, icpt, rms)
}

/// Least-squares slope of `log |scattering_part|²` against `log t` over
/// samples with `t` in `window`.
pub fn tail_exponent(trace: &AmplitudeTrace, window: (f64, f64)) -> Result<TailFit> {
    let mut lt = Vec::new();
    let mut tt = Vec::new();
    let mut ly = Vec::new();
    for (t, s) in trace.times.iter().zip(&trace.scattering_part) {
        if *t >= window.0 && *t <= window.1 && *t > 0.0 && s.norm_sqr() > 0.0 {
            lt.push(t.ln());
            tt.push(*t);
            ly.push(s.norm_sqr().ln());
        }
    }
    if lt.len() < 10 {
        return Err(Error::TooFewSamples { got: lt.len(), need: 10 });
    }
    let (slope, intercept, rms_power) = line_fit(&lt, &ly);
    let (_, _, rms_exponential) = line_fit(&tt, &ly);
    Ok(TailFit {
        slope,
        intercept,
        rms_power,
        rms_exponential,
        algebraic: rms_power <= rms_exponential,
        samples: lt.len(),
    })
}
