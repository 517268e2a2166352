//! Model parameters shared by every other module.
//!
//! Energies are measured in units of the hopping `ξ` and times in `1/ξ`.
//! The emitter couples with strength `g0 / nc` at each of its `nc`
//! coupling points, so a giant emitter with `nc = 2` couples with `g0 / 2`
//! to the cavities at `±d/2`.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Emitter geometry: a point-like emitter or two coupling points at `±d/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Small,
    Giant { d: u32 },
}

impl Geometry {
    /// Separation between coupling points (`0` for a small emitter).
    pub fn separation(self) -> u32 {
        match self {
            Geometry::Small => 0,
            Geometry::Giant { d } => d,
        }
    }

    pub fn coupling_points(self) -> u32 {
        match self {
            Geometry::Small => 1,
            Geometry::Giant { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Nearest-neighbour hopping `ξ`.
    pub xi: f64,
    /// Bare cavity frequency; only meaningful outside the rotating frame.
    pub omega0: f64,
    /// Bare emitter-waveguide coupling `g0`.
    pub g0: f64,
    /// Rotating-frame detuning `Δ = δ - ω0`.
    pub delta: f64,
    /// Number of coupling points.
    pub nc: u32,
    /// Separation between coupling points, required iff `nc == 2`.
    pub d: Option<u32>,
}

impl ModelParams {
    /// Small emitter with `ξ = 1`.
    pub fn small(g0: f64, delta: f64) -> Self {
        ModelParams { xi: 1.0, omega0: 0.0, g0, delta, nc: 1, d: None }
    }

    /// Giant emitter with two coupling points `d` sites apart and `ξ = 1`.
    pub fn giant(g0: f64, delta: f64, d: u32) -> Self {
        ModelParams { xi: 1.0, omega0: 0.0, g0, delta, nc: 2, d: Some(d) }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        ModelParams { delta, ..self }
    }

    pub fn validate(self) -> Result<Self> {
        validate(self)
    }

    /// Geometry implied by `nc` and `d`. Assumes validated parameters.
    pub fn geometry(&self) -> Geometry {
        match (self.nc, self.d) {
            (2, Some(d)) => Geometry::Giant { d },
            _ => Geometry::Small,
        }
    }

    /// Coupling per leg, `g0 / nc`.
    pub fn leg_coupling(&self) -> f64 {
        self.g0 / self.nc as f64
    }

    /// Lattice sites the emitter couples to.
    pub fn coupling_sites(&self) -> Vec<i64> {
        match self.geometry() {
            Geometry::Small => alloc::vec![0],
            Geometry::Giant { d } => {
                let h = (d / 2) as i64;
                alloc::vec![-h, h]
            }
        }
    }
}

/// Check every [`ModelParams`] invariant and return the parameters unchanged.
pub fn validate(params: ModelParams) -> Result<ModelParams> {
    if !(params.xi.is_finite() && params.xi > 0.0) {
        return Err(Error::InvalidParams("xi must be positive"));
    }
    if !(params.g0.is_finite() && params.g0 > 0.0) {
        return Err(Error::InvalidParams("g0 must be positive"));
    }
    if !params.delta.is_finite() || !params.omega0.is_finite() {
        return Err(Error::InvalidParams("delta and omega0 must be finite"));
    }
    match (params.nc, params.d) {
        (1, None) => {}
        (1, Some(_)) => return Err(Error::InvalidParams("d is only allowed when nc = 2")),
        (2, Some(d)) if d >= 2 && d % 2 == 0 => {}
        (2, Some(_)) => return Err(Error::InvalidParams("d must be even and at least 2")),
        (2, None) => return Err(Error::InvalidParams("nc = 2 requires d")),
        _ => return Err(Error::InvalidParams("nc must be 1 or 2")),
    }
    Ok(params)
}

/// Uniform time grid plus the half-width of the oracle lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationGrid {
    pub t_max: f64,
    pub n_t: usize,
    /// The oracle lattice spans sites `-N..=N`.
    pub lattice_half_width: usize,
}

impl SimulationGrid {
    pub fn new(t_max: f64, n_t: usize, lattice_half_width: usize) -> Self {
        SimulationGrid { t_max, n_t, lattice_half_width }
    }

    /// Checks the grid shape and that no wavefront (speed `2ξ`) reaches
    /// the lattice ends within `t_max`.
    pub fn validate(self, xi: f64) -> Result<Self> {
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(Error::InvalidParams("t_max must be non-negative"));
        }
        if self.n_t < 2 {
            return Err(Error::InvalidParams("n_t must exceed 1"));
        }
        if self.t_max * 2.0 * xi >= self.lattice_half_width as f64 {
            return Err(Error::InvalidParams(
                "lattice too small: 2*xi*t_max must stay below lattice_half_width",
            ));
        }
        Ok(self)
    }

    pub fn dt(&self) -> f64 {
        self.t_max / (self.n_t - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.n_t).map(|j| j as f64 * dt).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_small_emitter() {
        let p = ModelParams::small(0.2, 0.0);
        assert_eq!(validate(p), Ok(p));
    }

    #[test]
    fn rejects_odd_separation() {
        let p = ModelParams::giant(0.2, 0.0, 3);
        assert!(matches!(validate(p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn accepts_d12() {
        let delta = 2.0 * (5.0 * core::f64::consts::PI / 12.0).cos();
        let p = ModelParams::giant(0.2, delta, 12);
        assert_eq!(validate(p), Ok(p));
    }

    #[test]
    fn rejects_bad_values() {
        let p = ModelParams::small(0.2, 0.0);
        assert!(validate(ModelParams { xi: 0.0, ..p }).is_err());
        assert!(validate(ModelParams { g0: -0.1, ..p }).is_err());
        assert!(validate(ModelParams { nc: 3, ..p }).is_err());
        assert!(validate(ModelParams { nc: 2, d: None, ..p }).is_err());
        assert!(validate(ModelParams { nc: 2, d: Some(0), ..p }).is_err());
        assert!(validate(ModelParams { d: Some(2), ..p }).is_err());
    }

    #[test]
    fn validation_is_idempotent() {
        let p = ModelParams::giant(0.3, 1.0, 30);
        assert_eq!(validate(validate(p).unwrap()), validate(p));
    }

    #[test]
    fn coupling_convention() {
        let p = ModelParams::giant(0.2, 0.0, 12);
        assert_eq!(p.leg_coupling(), 0.1);
        assert_eq!(p.coupling_sites(), alloc::vec![-6, 6]);
        assert_eq!(ModelParams::small(0.2, 0.0).coupling_sites(), alloc::vec![0]);
    }

    #[test]
    fn grid_rejects_reflections() {
        assert!(SimulationGrid::new(100.0, 101, 400).validate(1.0).is_ok());
        assert!(SimulationGrid::new(250.0, 101, 400).validate(1.0).is_err());
        assert!(SimulationGrid::new(10.0, 1, 400).validate(1.0).is_err());
        let g = SimulationGrid::new(1.0, 5, 10);
        assert_eq!(g.times(), alloc::vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
