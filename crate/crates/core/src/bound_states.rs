//! Real poles of the resolvent and the stationary photon clouds they carry.
//!
//! Outside the band the pole equation `y - Δ - Σ(y) = 0` is solved in the
//! variable `κ`, with `y = ±2ξ cosh κ`, which stays well conditioned as the
//! pole approaches a band edge. On each side of the band the pole function
//! is strictly monotone in `κ`, so there is exactly one BOC above and one
//! below the continuum for both geometries.
//!
//! Inside the band a giant emitter has a pole (BIC) exactly when its
//! detuning sits on a zero `ω_m` of the effective spectral density.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::model::{Geometry, ModelParams};
use crate::spectral::{effective_zeros, invert_dispersion, Bath, Side, DEFAULT_BRANCH_EPS};
use crate::{Error, Result};

/// A detuning closer than this to some `ω_m` (in units of `ξ`) hosts a BIC.
pub const BIC_MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    BocUpper,
    BocLower,
    Bic,
}

impl BoundKind {
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::BocUpper => "boc_upper",
            BoundKind::BocLower => "boc_lower",
            BoundKind::Bic => "bic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// Pole position `y_j` (BOC) or `ω_m` (BIC).
    pub energy: f64,
    pub residue: f64,
    pub kind: BoundKind,
    /// Inverse localization length, BOC only (zero for a BIC).
    pub kappa: f64,
    /// Phase `arcsin(Δ/2ξ) + π/2`, BIC only (zero for a BOC).
    pub phi: f64,
}

impl BoundState {
    pub fn is_boc(&self) -> bool {
        !matches!(self.kind, BoundKind::Bic)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub sites: Vec<i64>,
    pub occupation: Vec<f64>,
    pub time_dependent: bool,
}

impl FieldProfile {
    pub fn total(&self) -> f64 {
        self.occupation.iter().sum()
    }

    pub fn at(&self, n: i64) -> Option<f64> {
        let first = *self.sites.first()?;
        self.occupation.get(usize::try_from(n - first).ok()?).copied()
    }
}

/// Real-axis quantities at `y = σ 2ξ cosh κ`: `(y, w, x)` with
/// `w = σ 2ξ sinh κ` and `x = σ e^{-κ}`.
fn off_band(kappa: f64, sign: f64, xi: f64) -> (f64, f64, f64) {
    (sign * 2.0 * xi * kappa.cosh(), sign * 2.0 * xi * kappa.sinh(), sign * (-kappa).exp())
}

/// Self-energy `Σ(y) = (g0²/2)(1 + x^d)/w` and its derivative in `y`.
/// `d = 0` gives the small emitter.
fn sigma_real(g0: f64, d: u32, y: f64, w: f64, x: f64) -> (f64, f64) {
    let xd = x.powi(d as i32);
    let c = 0.5 * g0 * g0;
    let sigma = c * (1.0 + xd) / w;
    let dsigma = c * (-(d as f64) * xd / (w * w) - (1.0 + xd) * y / (w * w * w));
    (sigma, dsigma)
}

/// `y - Δ - Σ(y)` on the `σ` side of the band, as a function of `κ`.
fn pole_function(params: &ModelParams, kappa: f64, sign: f64) -> f64 {
    let (y, w, x) = off_band(kappa, sign, params.xi);
    let d = params.geometry().separation();
    y - params.delta - sigma_real(params.g0, d, y, w, x).0
}

fn solve_side(params: &ModelParams, sign: f64) -> Result<BoundState> {
    // sign * f(κ) increases from -∞ at κ = 0⁺ to +∞
    let h = |k: f64| sign * pole_function(params, k, sign);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut grow = 0;
    while h(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 60 || !hi.is_finite() {
            return Err(Error::NoConvergence { what: "BOC bracket", lo, hi });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if v.is_nan() {
            return Err(Error::NoConvergence { what: "BOC bisection", lo, hi });
        }
        if v > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let kappa = if h(hi).abs() < h(lo).abs() || lo == 0.0 { hi } else { lo };
    let (y, w, x) = off_band(kappa, sign, params.xi);
    let (_, dsigma) = sigma_real(params.g0, params.geometry().separation(), y, w, x);
    let residue = 1.0 / (1.0 - dsigma);
    if !(residue > 0.0 && residue <= 1.0) {
        return Err(Error::NoConvergence { what: "BOC residue", lo, hi });
    }
    Ok(BoundState {
        energy: y,
        residue,
        kind: if sign > 0.0 { BoundKind::BocUpper } else { BoundKind::BocLower },
        kappa,
        phi: 0.0,
    })
}

/// Both bound states outside the continuum, upper first.
pub fn find_boc_poles(params: &ModelParams) -> Result<Vec<BoundState>> {
    let params = params.validate()?;
    Ok(alloc::vec![solve_side(&params, 1.0)?, solve_side(&params, -1.0)?])
}

/// `|y - Δ + i G(-iy)|` from the closed-form `G`.
pub fn pole_residual(params: &ModelParams, y: f64) -> Result<f64> {
    let bath = Bath::from_params(params);
    let g = bath.resolvent(C64::new(0.0, -y), params.geometry())?;
    Ok((C64::new(y - params.delta, 0.0) + C64::i() * g).norm())
}

/// Zeros of `J_eff` inside the band, sorted; `⌈d/2⌉` values.
pub fn bic_frequencies(d: u32, xi: f64) -> Vec<f64> {
    effective_zeros(d, xi)
}

/// Closed-form BIC residue `1/(1 + g0²[A(u,d) + B(u,d)])` with
/// `u = 2ξ/ω_m` and `η = √(1 - u²)` (principal branch, `|u| > 1`).
/// `ω_m = 0` makes `u` infinite; that case goes through [`numerical_residue`].
pub fn residue_bic(omega_m: f64, d: u32, g0: f64, xi: f64) -> Result<f64> {
    if omega_m == 0.0 {
        let bath = Bath::new(xi, g0);
        return numerical_residue(&bath, Geometry::Giant { d }, 0.0);
    }
    if omega_m.abs() >= 2.0 * xi {
        return Err(Error::OutOfBand { omega: omega_m });
    }
    let gt = g0 / xi;
    let u = C64::new(2.0 * xi / omega_m, 0.0);
    let one = C64::new(1.0, 0.0);
    let eta = (one - u * u).sqrt();
    let di = d as i32;
    let a = d as f64 * u.powi(2 - di) * (one - eta).powi(di) / (8.0 * eta * eta);
    let b = (one + (one - eta).powi(di) / u.powi(di)) * (u * u / (8.0 * eta)) * (one + u * u / (eta * eta));
    let r = one / (one + gt * gt * (a + b));
    if r.im.abs() > 1e-10 * r.re.abs() {
        return Err(Error::Domain { what: "BIC residue imaginary part", value: r.im });
    }
    Ok(r.re)
}

/// `[1 + G'(s)]⁻¹` at `s = -iy` by Richardson-extrapolated central differences.
///
/// Off the band the difference runs along `Re s`. Inside the band it runs
/// along the cut on the `Re s > 0` sheet, using [`Bath::branch_limit`].
pub fn numerical_residue(bath: &Bath, geometry: Geometry, y: f64) -> Result<f64> {
    let gp = numerical_g_prime(bath, geometry, y)?;
    let r = C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) + gp);
    if r.im.abs() > 1e-8 * r.re.abs().max(1e-300) {
        return Err(Error::Domain { what: "residue imaginary part", value: r.im });
    }
    Ok(r.re)
}

fn numerical_g_prime(bath: &Bath, geometry: Geometry, y: f64) -> Result<C64> {
    let gap = y.abs() - 2.0 * bath.xi;
    let central = |h: f64| -> Result<C64> {
        if gap > 0.0 {
            let s0 = C64::new(0.0, -y);
            let p = bath.resolvent(s0 + h, geometry)?;
            let m = bath.resolvent(s0 - h, geometry)?;
            Ok((p - m) / (2.0 * h))
        } else {
            // G(ε + iv) differentiated in v: dG/dv = i G'
            let p = bath.branch_limit(-y + h, Side::Right, geometry, DEFAULT_BRANCH_EPS)?;
            let m = bath.branch_limit(-y - h, Side::Right, geometry, DEFAULT_BRANCH_EPS)?;
            Ok((p - m) / (2.0 * h) * C64::new(0.0, -1.0))
        }
    };
    // three-level Richardson table, error O(h⁶) relative to the distance
    // from the nearest band edge
    let h = (gap.abs() / 16.0).min(1e-2 * bath.xi);
    let d1 = central(h)?;
    let d2 = central(h / 2.0)?;
    let d3 = central(h / 4.0)?;
    let e12 = (4.0 * d2 - d1) / 3.0;
    let e23 = (4.0 * d3 - d2) / 3.0;
    Ok((16.0 * e23 - e12) / 15.0)
}

/// The BIC hosted by these parameters, if the detuning matches some `ω_m`.
pub fn find_bic(params: &ModelParams) -> Result<Option<BoundState>> {
    let params = params.validate()?;
    let Geometry::Giant { d } = params.geometry() else {
        return Ok(None);
    };
    let xi = params.xi;
    let Some(omega_m) = bic_frequencies(d, xi)
        .into_iter()
        .find(|w| (w - params.delta).abs() < BIC_MATCH_TOL * xi)
    else {
        return Ok(None);
    };
    let residue = residue_bic(omega_m, d, params.g0, xi)?;
    let phi = (params.delta / (2.0 * xi)).clamp(-1.0, 1.0).asin() + FRAC_PI_2;
    Ok(Some(BoundState { energy: omega_m, residue, kind: BoundKind::Bic, kappa: 0.0, phi }))
}

/// Every real pole: upper BOC, lower BOC, then the BIC when present.
pub fn all_poles(params: &ModelParams) -> Result<Vec<BoundState>> {
    let mut poles = find_boc_poles(params)?;
    if let Some(bic) = find_bic(params)? {
        poles.push(bic);
    }
    Ok(poles)
}

/// Stationary photon amplitude of `state` at site `n`, including its
/// residue weight: `r g_leg Σ_p x^{|n-p|} / w` over the coupling sites `p`.
pub fn stationary_amplitude(state: &BoundState, params: &ModelParams, n: i64) -> Result<C64> {
    let xi = params.xi;
    let (x, w) = match state.kind {
        BoundKind::BocUpper | BoundKind::BocLower => {
            let sign = if state.kind == BoundKind::BocUpper { 1.0 } else { -1.0 };
            let (_, w, x) = off_band(state.kappa, sign, xi);
            (C64::new(x, 0.0), C64::new(w, 0.0))
        }
        BoundKind::Bic => {
            let k = invert_dispersion(state.energy, xi)?;
            (C64::from_polar(1.0, -k), C64::new(0.0, 2.0 * xi * k.sin()))
        }
    };
    let g_leg = params.leg_coupling();
    let sum: C64 = params
        .coupling_sites()
        .iter()
        .map(|&p| x.powi((n - p).unsigned_abs() as i32))
        .sum();
    Ok(state.residue * g_leg * sum / w)
}

fn window(half_width: usize) -> Vec<i64> {
    let h = half_width as i64;
    (-h..=h).collect()
}

/// Half-width covering `10/κ` sites, at least `d/2 + 10`, capped at `cap`.
pub fn default_window(state: &BoundState, params: &ModelParams, cap: usize) -> usize {
    let floor = params.geometry().separation() as usize / 2 + 10;
    let want = if state.is_boc() && state.kappa > 0.0 {
        let w = 10.0 / state.kappa;
        if w.is_finite() && w < cap as f64 { w.ceil() as usize } else { cap }
    } else {
        floor
    };
    want.max(floor).min(cap.max(floor))
}

/// Long-time field of a BOC, `g0² r² e^{-2κ|n|} / (y² - 4ξ²)` for the small
/// emitter; a giant emitter gets the two-point superposition of the same
/// exponentials.
pub fn boc_field_profile(state: &BoundState, params: &ModelParams, half_width: usize) -> Result<FieldProfile> {
    if !state.is_boc() {
        return Err(Error::WrongKind { expected: "BOC" });
    }
    let sites = window(half_width);
    let occupation = match params.geometry() {
        Geometry::Small => {
            let y = state.energy;
            let xi = params.xi;
            let pre = params.g0 * params.g0 * state.residue * state.residue
                / ((y.abs() - 2.0 * xi) * (y.abs() + 2.0 * xi));
            sites.iter().map(|&n| pre * (-2.0 * state.kappa * n.unsigned_abs() as f64).exp()).collect()
        }
        Geometry::Giant { .. } => sites
            .iter()
            .map(|&n| stationary_amplitude(state, params, n).map(|a| a.norm_sqr()))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(FieldProfile { sites, occupation, time_dependent: false })
}

/// Field of a BIC,
/// `g0² r_m² [1 + cos(φ(|n + d/2| - |n - d/2|))] / (2(4ξ² - ω_m²))`.
pub fn bic_field_profile(state: &BoundState, params: &ModelParams, half_width: usize) -> Result<FieldProfile> {
    if state.kind != BoundKind::Bic {
        return Err(Error::WrongKind { expected: "BIC" });
    }
    let Geometry::Giant { d } = params.geometry() else {
        return Err(Error::InvalidParams("a BIC needs two coupling points"));
    };
    let xi = params.xi;
    let w = state.energy;
    let pre = params.g0 * params.g0 * state.residue * state.residue / (2.0 * (2.0 * xi - w) * (2.0 * xi + w));
    let h = (d / 2) as i64;
    let sites = window(half_width);
    let occupation = sites
        .iter()
        .map(|&n| {
            let arg = ((n + h).abs() - (n - h).abs()) as f64;
            (pre * (1.0 + (state.phi * arg).cos())).max(0.0)
        })
        .collect();
    Ok(FieldProfile { sites, occupation, time_dependent: false })
}

/// Breathing field of the coherent BOC + BIC superposition at time `t`.
///
/// Each state contributes its stationary amplitude rotating at its own
/// energy, so the profile is periodic with period `2π/(y₊ - ω_m)`.
pub fn superposition_field(
    boc: &BoundState,
    bic: &BoundState,
    t: f64,
    params: &ModelParams,
    half_width: usize,
) -> Result<FieldProfile> {
    if !boc.is_boc() {
        return Err(Error::WrongKind { expected: "BOC" });
    }
    if bic.kind != BoundKind::Bic {
        return Err(Error::WrongKind { expected: "BIC" });
    }
    if (bic.energy - params.delta).abs() >= BIC_MATCH_TOL * params.xi {
        return Err(Error::Mismatch("BIC energy does not match the detuning"));
    }
    let check = find_boc_poles(params)?;
    if !check.iter().any(|s| s.kind == boc.kind && (s.energy - boc.energy).abs() < 1e-9 * params.xi) {
        return Err(Error::Mismatch("BOC does not belong to these parameters"));
    }
    let pb = C64::from_polar(1.0, -boc.energy * t);
    let pm = C64::from_polar(1.0, -bic.energy * t);
    let sites = window(half_width);
    let occupation = sites
        .iter()
        .map(|&n| {
            let a = stationary_amplitude(boc, params, n)? * pb + stationary_amplitude(bic, params, n)? * pm;
            Ok(a.norm_sqr())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldProfile { sites, occupation, time_dependent: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn small_emitter_closed_form() {
        let p = ModelParams::small(0.2, 0.0);
        let poles = find_boc_poles(&p).unwrap();
        let exact = (2.0 + (4.0f64 + 0.2f64.powi(4)).sqrt()).sqrt();
        assert!((poles[0].energy - exact).abs() < 1e-10);
        assert!((poles[1].energy + exact).abs() < 1e-10);
        let y = exact;
        let r = 1.0 / (1.0 + 0.04 / (y * y * (1.0 - 4.0 / (y * y)).powf(1.5)));
        for s in &poles {
            assert!((s.residue - r).abs() < 1e-10 * r, "{} vs {r}", s.residue);
            assert!((s.kappa - (s.energy.abs() / 2.0).acosh()).abs() < 1e-6);
        }
    }

    #[test]
    fn pole_residual_small() {
        for &delta in &[0.0, 1.5, 2.0, -0.7] {
            let p = ModelParams::small(0.2, delta);
            for s in find_boc_poles(&p).unwrap() {
                let res = pole_residual(&p, s.energy).unwrap();
                assert!(res < 1e-11, "delta={delta} {:?}: {res:e}", s.kind);
            }
        }
    }

    #[test]
    fn known_band_edge_values() {
        let s = find_boc_poles(&ModelParams::small(0.2, 2.0)).unwrap()[0];
        assert!((s.energy - 2.0732363666110065).abs() < 1e-12);
        assert!((s.residue - 0.6626949379592859).abs() < 1e-12);
        let s = find_boc_poles(&ModelParams::small(0.2, 1.5)).unwrap()[0];
        assert!((s.energy - 2.0015892456908864).abs() < 1e-12);
        assert!((s.residue - 0.00629445434568615).abs() < 1e-12);
        let s = find_boc_poles(&ModelParams::giant(0.2, 2.0, 30)).unwrap()[0];
        assert!((s.energy - 2.0462873187914945).abs() < 1e-12);
    }

    #[test]
    fn mirror_symmetry() {
        let a = find_boc_poles(&ModelParams::small(0.3, 0.8)).unwrap();
        let b = find_boc_poles(&ModelParams::small(0.3, -0.8)).unwrap();
        assert!((a[0].energy + b[1].energy).abs() < 1e-13);
        assert!((a[0].residue - b[1].residue).abs() < 1e-13);
    }

    #[test]
    fn poles_move_out_with_coupling() {
        let mut last = 2.0;
        for j in 1..20 {
            let e = find_boc_poles(&ModelParams::small(0.05 * j as f64, 0.0)).unwrap()[0].energy;
            assert!(e > last);
            last = e;
        }
    }

    #[test]
    fn analytic_and_numerical_boc_residues_agree() {
        for p in [ModelParams::small(0.2, 1.5), ModelParams::giant(0.2, 2.0, 30), ModelParams::giant(0.4, -1.0, 4)] {
            let bath = Bath::from_params(&p);
            for s in find_boc_poles(&p).unwrap() {
                let r = numerical_residue(&bath, p.geometry(), s.energy).unwrap();
                assert!((r - s.residue).abs() < 1e-8 * s.residue.max(1e-3), "{r} vs {}", s.residue);
            }
        }
    }

    #[test]
    fn bic_frequency_lists() {
        assert_eq!(bic_frequencies(2, 1.0), alloc::vec![0.0]);
        let f4 = bic_frequencies(4, 1.0);
        assert!((f4[0] + 2f64.sqrt()).abs() < 1e-15 && (f4[1] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(bic_frequencies(12, 1.0).len(), 6);
        assert_eq!(bic_frequencies(30, 1.0).len(), 15);
    }

    #[test]
    fn appendix_residue_matches_green_function_form() {
        for &d in &[4u32, 12, 30] {
            for w in bic_frequencies(d, 1.0) {
                if w == 0.0 {
                    continue;
                }
                let r = residue_bic(w, d, 0.2, 1.0).unwrap();
                let k = (w / 2.0).acos();
                let expect = 1.0 / (1.0 + 0.04 * d as f64 / (8.0 * k.sin().powi(2)));
                assert!((r - expect).abs() < 1e-12, "d={d} w={w}: {r} vs {expect}");
            }
        }
    }

    #[test]
    fn d2_bic_residue() {
        let r = residue_bic(0.0, 2, 0.2, 1.0).unwrap();
        assert!((r - 100.0 / 101.0).abs() < 1e-9, "{r}");
        let bic = find_bic(&ModelParams::giant(0.2, 0.0, 2)).unwrap().unwrap();
        assert!((bic.phi - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn bic_only_when_tuned() {
        let w = 2.0 * (5.0 * PI / 12.0).cos();
        assert!(find_bic(&ModelParams::giant(0.2, w, 12)).unwrap().is_some());
        assert!(find_bic(&ModelParams::giant(0.2, w + 1e-6, 12)).unwrap().is_none());
        assert!(find_bic(&ModelParams::small(0.2, 0.0)).unwrap().is_none());
        assert_eq!(all_poles(&ModelParams::giant(0.2, w, 12)).unwrap().len(), 3);
    }

    #[test]
    fn boc_profile_log_slope() {
        let p = ModelParams::small(0.2, 1.5);
        let poles = find_boc_poles(&p).unwrap();
        let up = boc_field_profile(&poles[0], &p, 50).unwrap();
        let lo = boc_field_profile(&poles[1], &p, 50).unwrap();
        let slope = (up.at(20).unwrap().ln() - up.at(10).unwrap().ln()) / 10.0;
        assert!((slope + 2.0 * poles[0].kappa).abs() < 1e-12);
        // the lower pole hugs its band edge, so its cloud is wider but far weaker
        assert!(poles[1].kappa < poles[0].kappa);
        assert!(lo.at(0).unwrap() < 1e-3 * up.at(0).unwrap());
        assert!(up.occupation.iter().chain(&lo.occupation).all(|&v| v >= 0.0));
    }

    #[test]
    fn boc_profile_matches_generic_amplitude() {
        let p = ModelParams::small(0.2, 2.0);
        let s = find_boc_poles(&p).unwrap()[0];
        let prof = boc_field_profile(&s, &p, 30).unwrap();
        for (&n, &v) in prof.sites.iter().zip(&prof.occupation) {
            let a = stationary_amplitude(&s, &p, n).unwrap().norm_sqr();
            assert!((a - v).abs() < 1e-14);
        }
    }

    #[test]
    fn bic_profile_support_and_symmetry() {
        let w = 2.0 * (5.0 * PI / 12.0).cos();
        let p = ModelParams::giant(0.2, w, 12);
        let bic = find_bic(&p).unwrap().unwrap();
        let prof = bic_field_profile(&bic, &p, 40).unwrap();
        for (&n, &v) in prof.sites.iter().zip(&prof.occupation) {
            if n.abs() > 6 {
                assert!(v < 1e-15, "n={n} v={v}");
            }
            assert!((v - prof.at(-n).unwrap()).abs() < 1e-15);
            let a = stationary_amplitude(&bic, &p, n).unwrap().norm_sqr();
            assert!((a - v).abs() < 1e-12, "n={n}: {a} vs {v}");
        }
        assert!(matches!(boc_field_profile(&bic, &p, 5), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn superposition_is_periodic() {
        let w = 2.0 * (PI / 12.0).cos();
        let p = ModelParams::giant(0.2, w, 12);
        let poles = all_poles(&p).unwrap();
        let (boc, bic) = (poles[0], poles[2]);
        let period = 2.0 * PI / (boc.energy - bic.energy);
        let a = superposition_field(&boc, &bic, 3.7, &p, 30).unwrap();
        let b = superposition_field(&boc, &bic, 3.7 + period, &p, 30).unwrap();
        for (x, y) in a.occupation.iter().zip(&b.occupation) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(a.time_dependent);
        // cross term averages out over a period
        let n_avg = 64;
        let mut avg = alloc::vec![0.0; a.sites.len()];
        for j in 0..n_avg {
            let f = superposition_field(&boc, &bic, j as f64 * period / n_avg as f64, &p, 30).unwrap();
            for (s, v) in avg.iter_mut().zip(&f.occupation) {
                *s += v / n_avg as f64;
            }
        }
        let sb = boc_field_profile(&boc, &p, 30).unwrap();
        let sm = bic_field_profile(&bic, &p, 30).unwrap();
        for i in 0..avg.len() {
            assert!((avg[i] - sb.occupation[i] - sm.occupation[i]).abs() < 1e-12);
        }
        let other = find_boc_poles(&ModelParams::small(0.2, 0.0)).unwrap()[0];
        assert!(superposition_field(&other, &bic, 0.0, &p, 5).is_err());
    }
}
