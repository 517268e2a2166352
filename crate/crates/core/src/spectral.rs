//! Dispersion, spectral densities and the resolvent function `G(s)`.
//!
//! `G(s) = (1/2π) ∫ dω J(ω) / (s + iω)` is evaluated in closed form. For the
//! giant emitter it is built from the free lattice Green's function
//! `⟨n|(E - H)^{-1}|0⟩ = x^{|n|} / w`, with `w = √(E² - 4ξ²)` and
//! `x = 2ξ / (E + w)` on the branch `|x| <= 1`, via `G(s) = i Σ(is)`.
//! The small-emitter `G` is the principal-branch expression
//! `g0² / (s √(1 + 4ξ²/s²))`.

use core::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::model::{Geometry, ModelParams};
use crate::{Error, Result};

/// `ω_k = 2ξ cos k`. Any real `k` is accepted (cosine is 2π-periodic).
pub fn dispersion(k: f64, xi: f64) -> f64 {
    2.0 * xi * k.cos()
}

/// Principal inverse of the dispersion, `k(ω) = arccos(ω / 2ξ) ∈ [0, π]`.
pub fn invert_dispersion(omega: f64, xi: f64) -> Result<f64> {
    let c = omega / (2.0 * xi);
    if !(c.abs() <= 1.0) {
        return Err(Error::OutOfBand { omega });
    }
    Ok(c.acos())
}

/// Interference factor `𝒢(ω) = (1/N_c²) (1 - cos(k d N_c)) / (1 - cos(k d))`.
pub fn array_factor(omega: f64, d: u32, nc: u32, xi: f64) -> Result<f64> {
    let k = open_band_momentum(omega, xi)?;
    let x = k * d as f64;
    if (1.0 - x.cos()).abs() < 1e-12 {
        return Ok(1.0);
    }
    let n = nc as f64;
    let ratio = (n * x / 2.0).sin() / (x / 2.0).sin();
    Ok(ratio * ratio / (n * n))
}

fn open_band_momentum(omega: f64, xi: f64) -> Result<f64> {
    if omega.abs() > 2.0 * xi || omega.is_nan() {
        return Err(Error::OutOfBand { omega });
    }
    if omega.abs() == 2.0 * xi {
        return Err(Error::BandEdge { omega });
    }
    invert_dispersion(omega, xi)
}

/// Side of the branch cut, by the sign of `Re s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }
}

/// Default offset from the cut used by [`Bath::branch_limit`].
pub const DEFAULT_BRANCH_EPS: f64 = 1e-9;

/// Waveguide bath seen by an emitter with bare coupling `g0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bath {
    pub xi: f64,
    pub g0: f64,
}

impl Bath {
    pub fn new(xi: f64, g0: f64) -> Self {
        Bath { xi, g0 }
    }

    pub fn from_params(params: &ModelParams) -> Self {
        Bath { xi: params.xi, g0: params.g0 }
    }

    /// `J(ω) = 2 g0² / √(4ξ² - ω²)` for a single coupling point.
    pub fn j_small(&self, omega: f64) -> Result<f64> {
        open_band_momentum(omega, self.xi)?;
        let xi = self.xi;
        Ok(2.0 * self.g0 * self.g0 / ((2.0 * xi - omega) * (2.0 * xi + omega)).sqrt())
    }

    /// `J_eff(ω) = g0² [1 + cos(k(ω) d)] / √(4ξ² - ω²)` for two coupling points.
    pub fn j_eff(&self, omega: f64, d: u32) -> Result<f64> {
        let k = open_band_momentum(omega, self.xi)?;
        let half = (k * d as f64 / 2.0).cos();
        let xi = self.xi;
        Ok(2.0 * half * half * self.g0 * self.g0 / ((2.0 * xi - omega) * (2.0 * xi + omega)).sqrt())
    }

    /// Spectral density for either geometry.
    pub fn spectral_density(&self, omega: f64, geometry: Geometry) -> Result<f64> {
        match geometry {
            Geometry::Small => self.j_small(omega),
            Geometry::Giant { d } => self.j_eff(omega, d),
        }
    }

    fn check_off_cut(&self, s: C64) -> Result<()> {
        if s.re == 0.0 && s.im.abs() <= 2.0 * self.xi {
            return Err(Error::OnBranchCut { re: s.re, im: s.im });
        }
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::Domain { what: "laplace variable", value: s.norm() });
        }
        Ok(())
    }

    /// Small-emitter `G(s) = g0² / (s √(1 + 4ξ²/s²))`, principal square root.
    pub fn g_function(&self, s: C64) -> Result<C64> {
        self.check_off_cut(s)?;
        let root = (C64::new(1.0, 0.0) + 4.0 * self.xi * self.xi / (s * s)).sqrt();
        Ok(self.g0 * self.g0 / (s * root))
    }

    /// Giant-emitter `G(s, d) = (g0²/2) (1 + x^d) / w` evaluated at `E = is`,
    /// with per-leg coupling `g0/2`. At `d = 0` it coincides with
    /// [`Bath::g_function`].
    pub fn g_function_giant(&self, s: C64, d: u32) -> Result<C64> {
        self.check_off_cut(s)?;
        let energy = C64::new(-s.im, s.re);
        let (w, x) = free_roots(energy, self.xi);
        let sigma = 0.5 * self.g0 * self.g0 * (C64::new(1.0, 0.0) + x.powi(d as i32)) / w;
        Ok(C64::new(-sigma.im, sigma.re))
    }

    /// `G(s)` for either geometry.
    pub fn resolvent(&self, s: C64, geometry: Geometry) -> Result<C64> {
        match geometry {
            Geometry::Small => self.g_function(s),
            Geometry::Giant { d } => self.g_function_giant(s, d),
        }
    }

    /// `lim_{ε→0⁺} G(±ε + iy)`, from evaluations at `ε` and `ε/2` combined by
    /// Richardson extrapolation.
    pub fn branch_limit(&self, y: f64, side: Side, geometry: Geometry, eps: f64) -> Result<C64> {
        if !(eps > 0.0) {
            return Err(Error::Domain { what: "branch offset", value: eps });
        }
        let sign = side.sign();
        let coarse = self.resolvent(C64::new(sign * eps, y), geometry)?;
        let fine = self.resolvent(C64::new(sign * eps / 2.0, y), geometry)?;
        Ok(2.0 * fine - coarse)
    }
}

/// Roots `(w, x)` of the free chain at complex energy `E` off the band:
/// `w² = E² - 4ξ²`, `x = 2ξ / (E + w)` with `|x| <= 1`.
pub(crate) fn free_roots(energy: C64, xi: f64) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let mut w = energy * (one - 4.0 * xi * xi / (energy * energy)).sqrt();
    if (energy + w).norm_sqr() < (energy - w).norm_sqr() {
        w = -w;
    }
    (w, 2.0 * xi / (energy + w))
}

/// `ω_m = 2ξ cos(π(2m+1)/d)`, the zeros of `J_eff` inside the band, sorted.
pub fn effective_zeros(d: u32, xi: f64) -> alloc::vec::Vec<f64> {
    let mut zeros: alloc::vec::Vec<f64> = (0..d)
        .map(|m| PI * (2 * m + 1) as f64 / d as f64)
        .filter(|&k| k > 0.0 && k < PI)
        .map(|k| dispersion(k, xi))
        // cos(π/2) is not exactly zero in floating point
        .map(|w| if w.abs() < 1e-14 * xi { 0.0 } else { w })
        .collect();
    zeros.sort_by(|a, b| a.total_cmp(b));
    zeros
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    const PI: f64 = core::f64::consts::PI;

    fn bath() -> Bath {
        Bath::new(1.0, 0.2)
    }

    /// `(1/2π) ∫ J(ω)/(s + iω) dω` with `ω = 2ξ cos θ`, which removes the
    /// inverse-square-root endpoint singularities of both densities.
    fn quadrature_g(s: C64, d: Option<u32>) -> C64 {
        let n = 20_000;
        let h = PI / n as f64;
        let g0: f64 = 0.2;
        let mut acc = C64::new(0.0, 0.0);
        // composite Simpson in θ
        for j in 0..=n {
            let th = j as f64 * h;
            let omega = 2.0 * th.cos();
            // J(ω) dω = (2g0²/(2 sin θ)) 2 sin θ dθ = 2 g0² dθ for the small emitter
            let weight = match d {
                None => 2.0 * g0 * g0,
                Some(d) => {
                    let c = ((PI - th) * d as f64).cos();
                    g0 * g0 * (1.0 + c)
                }
            };
            let f = weight / (s + C64::new(0.0, omega));
            let c = if j == 0 || j == n { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += c * f;
        }
        acc * h / 3.0 / (2.0 * PI)
    }

    #[test]
    fn dispersion_values() {
        assert!((dispersion(0.0, 1.0) - 2.0).abs() < 1e-15);
        assert!(dispersion(PI / 2.0, 1.0).abs() < 1e-15);
        assert!((dispersion(PI, 1.0) + 2.0).abs() < 1e-15);
        assert!((dispersion(PI + 2.0 * PI, 1.0) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_dispersion() {
        assert!((invert_dispersion(0.0, 1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(invert_dispersion(2.0, 1.0).unwrap(), 0.0);
        let w = 2.0 * (5.0 * PI / 12.0).cos();
        assert!((invert_dispersion(w, 1.0).unwrap() - 5.0 * PI / 12.0).abs() < 1e-14);
        assert!(matches!(invert_dispersion(2.5, 1.0), Err(Error::OutOfBand { .. })));
    }

    #[test]
    fn small_spectral_density() {
        let b = bath();
        assert!((b.j_small(0.0).unwrap() - 0.04).abs() < 1e-15);
        assert!((b.j_small(3f64.sqrt()).unwrap() - 0.08).abs() < 1e-14);
        assert!(b.j_small(1.999_999).unwrap() > 20.0);
        assert!(matches!(b.j_small(2.0), Err(Error::BandEdge { .. })));
        assert!(matches!(b.j_small(-2.1), Err(Error::OutOfBand { .. })));
    }

    #[test]
    fn array_factor_limits() {
        // k d = π: destructive interference
        assert!(array_factor(0.0, 2, 2, 1.0).unwrap().abs() < 1e-15);
        assert!((array_factor(0.7, 0, 2, 1.0).unwrap() - 1.0).abs() < 1e-15);
        for &w in &[-1.9, -0.3, 0.0, 1.1] {
            assert!((array_factor(w, 8, 1, 1.0).unwrap() - 1.0).abs() < 1e-14);
        }
        // removable point k d = 2π
        assert!((array_factor(0.0, 4, 2, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn effective_density_matches_factorized_form() {
        let b = bath();
        for &d in &[2u32, 4, 12, 30] {
            for j in 1..50 {
                let w = -2.0 + 4.0 * j as f64 / 50.0;
                let direct = b.j_eff(w, d).unwrap();
                let factored = b.j_small(w).unwrap() * array_factor(w, d, 2, 1.0).unwrap();
                assert!((direct - factored).abs() < 1e-12 * (1.0 + direct));
                assert!(direct >= 0.0 && direct <= 2.0 * b.j_small(w).unwrap() + 1e-15);
            }
        }
        let centre = b.j_eff(0.0, 4).unwrap();
        // array factor is 1 at the band centre for d = 4
        assert!((centre - 0.04).abs() < 1e-15, "{centre}");
    }

    #[test]
    fn effective_density_vanishes_at_zeros() {
        let b = bath();
        for &d in &[2u32, 4, 12, 30] {
            let zeros = effective_zeros(d, 1.0);
            assert_eq!(zeros.len(), (d as usize + 1) / 2);
            for w in zeros {
                assert!(b.j_eff(w, d).unwrap() < 1e-28);
            }
        }
        let z12 = effective_zeros(12, 1.0);
        let expected: Vec<f64> = [11.0, 9.0, 7.0, 5.0, 3.0, 1.0]
            .iter()
            .map(|m| 2.0 * (m * PI / 12.0).cos())
            .collect();
        for (a, b) in z12.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn g_function_asymptote() {
        let s = C64::new(1e6, 0.0);
        let g = bath().g_function(s).unwrap();
        let asym = 0.04 / s;
        assert!(((g - asym) / asym).norm() < 1e-11);
    }

    #[test]
    fn g_function_on_imaginary_axis_outside_band() {
        let b = bath();
        for &y in &[2.5, 3.0, 10.0] {
            let g = b.g_function(C64::new(0.0, -y)).unwrap();
            let expected = C64::new(0.0, 0.04 / (y * (1.0 - 4.0 / (y * y)).sqrt()));
            assert!((g - expected).norm() < 1e-15);
            let q = quadrature_g(C64::new(0.0, -y), None);
            assert!((g - q).norm() < 1e-8 * g.norm());
        }
    }

    #[test]
    fn g_function_rejects_cut() {
        assert!(matches!(
            bath().g_function(C64::new(0.0, 1.0)),
            Err(Error::OnBranchCut { .. })
        ));
        assert!(bath().g_function_giant(C64::new(0.0, -2.0), 4).is_err());
    }

    #[test]
    fn branch_limits_small() {
        let b = bath();
        for &y in &[-1.7, -0.4, 0.0, 0.9, 1.95] {
            let right = b.branch_limit(y, Side::Right, Geometry::Small, DEFAULT_BRANCH_EPS).unwrap();
            let left = b.branch_limit(y, Side::Left, Geometry::Small, DEFAULT_BRANCH_EPS).unwrap();
            let expected = 0.04 / (4.0 - y * y).sqrt();
            assert!((right - expected).norm() < 1e-8, "{y}: {right}");
            assert!((left + expected).norm() < 1e-8);
        }
    }

    #[test]
    fn giant_matches_small_at_zero_separation() {
        let b = bath();
        for &s in &[C64::new(0.3, 1.0), C64::new(-0.2, -3.0), C64::new(2.0, 0.5), C64::new(-1.0, 0.1)] {
            let a = b.g_function(s).unwrap();
            let g = b.g_function_giant(s, 0).unwrap();
            assert!((a - g).norm() < 1e-14 * a.norm(), "{s}");
        }
    }

    #[test]
    fn giant_vanishes_at_bic_frequencies() {
        let b = bath();
        for &d in &[2u32, 12, 30] {
            for w in effective_zeros(d, 1.0) {
                let g = b
                    .branch_limit(-w, Side::Right, Geometry::Giant { d }, DEFAULT_BRANCH_EPS)
                    .unwrap();
                assert!(g.norm() < 1e-9, "d={d} w={w} g={g}");
            }
        }
    }

    #[test]
    fn giant_jump_identity() {
        let b = bath();
        for &d in &[2u32, 4, 12, 30] {
            for j in 0..25 {
                let y = -1.98 + 3.96 * (j as f64 + 0.37) / 25.0;
                let geom = Geometry::Giant { d };
                let right = b.branch_limit(y, Side::Right, geom, DEFAULT_BRANCH_EPS).unwrap();
                let left = b.branch_limit(y, Side::Left, geom, DEFAULT_BRANCH_EPS).unwrap();
                let jump = right - left;
                let expected = b.j_eff(-y, d).unwrap();
                assert!((jump - expected).norm() < 1e-8, "d={d} y={y}: {jump} vs {expected}");
            }
        }
    }

    #[test]
    fn quadrature_oracle_small_and_giant() {
        let b = bath();
        let pts = [
            C64::new(0.5, 0.0),
            C64::new(0.05, 1.3),
            C64::new(-0.7, 0.4),
            C64::new(-0.02, -1.9),
            C64::new(1.0, -3.0),
            C64::new(0.0, 2.4),
        ];
        for &s in &pts {
            let g = b.g_function(s).unwrap();
            let q = quadrature_g(s, None);
            assert!((g - q).norm() < 1e-8 * q.norm(), "small {s}: {g} vs {q}");
            for &d in &[2u32, 12] {
                let g = b.g_function_giant(s, d).unwrap();
                let q = quadrature_g(s, Some(d));
                assert!((g - q).norm() < 1e-8 * q.norm().max(1e-3), "giant d={d} {s}: {g} vs {q}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let b = bath();
        for &s in &[C64::new(0.3, 1.0), C64::new(-0.5, 2.5)] {
            let g = b.g_function(s).unwrap();
            let gc = b.g_function(s.conj()).unwrap();
            assert!((g.conj() - gc).norm() < 1e-15);
        }
    }
}
