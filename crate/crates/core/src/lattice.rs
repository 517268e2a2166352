//! Brute-force reference: the single-excitation sector of the emitter plus
//! an open chain of `2N + 1` cavities (sites `-N..=N`), in the rotating
//! frame.
//!
//! Time stepping uses a truncated Taylor expansion of `e^{-iHh}` to eighth
//! order with a fixed step (`0.02/ξ` by default). For a linear autonomous
//! system this is the same propagator an eighth-order Runge–Kutta scheme
//! produces; the extra orders keep the norm drift near round-off over
//! thousands of time units.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::linalg::symmetric_eigen;
use crate::model::{Geometry, ModelParams, SimulationGrid};
use crate::{Error, Result};

/// Default half-width of the oracle chain (801 cavities).
pub const DEFAULT_HALF_WIDTH: usize = 400;
/// Largest tolerated `|‖ψ‖² - 1|`.
pub const NORM_TOL: f64 = 1e-8;
/// Largest tolerated occupation of either end cavity.
pub const EDGE_TOL: f64 = 1e-10;

/// Sparse real symmetric Hamiltonian. Index 0 is the emitter and index
/// `1 + n + N` is cavity `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub half_width: usize,
    pub delta: f64,
    pub xi: f64,
    /// Emitter bonds as `(index, strength)`.
    pub bonds: Vec<(usize, f64)>,
}

impl Hamiltonian {
    pub fn build(params: &ModelParams, half_width: usize) -> Result<Self> {
        let params = params.validate()?;
        let need = params.geometry().separation() as usize / 2 + 10;
        if half_width < need {
            return Err(Error::InvalidParams("half_width must be at least d/2 + 10"));
        }
        let g = params.leg_coupling();
        let bonds = params
            .coupling_sites()
            .into_iter()
            .map(|n| (site_index(half_width, n), g))
            .collect();
        Ok(Hamiltonian { half_width, delta: params.delta, xi: params.xi, bonds })
    }

    pub fn dim(&self) -> usize {
        2 * self.half_width + 2
    }

    pub fn site_index(&self, n: i64) -> usize {
        site_index(self.half_width, n)
    }

    /// `out = H v`.
    pub fn apply(&self, v: &[C64], out: &mut [C64]) {
        let dim = self.dim();
        out[0] = v[0] * self.delta;
        for &(j, g) in &self.bonds {
            out[0] += v[j] * g;
        }
        let xi = self.xi;
        out[1] = v[2] * xi;
        for i in 2..dim - 1 {
            out[i] = (v[i - 1] + v[i + 1]) * xi;
        }
        out[dim - 1] = v[dim - 2] * xi;
        for &(j, g) in &self.bonds {
            out[j] += v[0] * g;
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut a = vec![0.0; n * n];
        a[0] = self.delta;
        for i in 1..n - 1 {
            a[i * n + i + 1] = self.xi;
            a[(i + 1) * n + i] = self.xi;
        }
        for &(j, g) in &self.bonds {
            a[j] += g;
            a[j * n] += g;
        }
        a
    }
}

fn site_index(half_width: usize, n: i64) -> usize {
    (1 + half_width as i64 + n) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub emitter_amp: C64,
    /// Amplitudes on sites `-N..=N`.
    pub photon_amps: Vec<C64>,
    pub time: f64,
}

impl LatticeState {
    /// Emitter excited, field empty, `t = 0`.
    pub fn excited_emitter(half_width: usize) -> Self {
        LatticeState {
            emitter_amp: C64::new(1.0, 0.0),
            photon_amps: vec![C64::new(0.0, 0.0); 2 * half_width + 1],
            time: 0.0,
        }
    }

    pub fn half_width(&self) -> usize {
        (self.photon_amps.len() - 1) / 2
    }

    pub fn norm_sqr(&self) -> f64 {
        self.emitter_amp.norm_sqr() + self.photon_amps.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    pub fn photon(&self, n: i64) -> C64 {
        self.photon_amps[(n + self.half_width() as i64) as usize]
    }

    /// Larger of the two end-cavity occupations.
    pub fn edge_occupation(&self) -> f64 {
        let last = self.photon_amps.len() - 1;
        self.photon_amps[0].norm_sqr().max(self.photon_amps[last].norm_sqr())
    }

    fn to_vector(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.photon_amps.len() + 1);
        v.push(self.emitter_amp);
        v.extend_from_slice(&self.photon_amps);
        v
    }

    fn from_vector(v: &[C64], time: f64) -> Self {
        LatticeState { emitter_amp: v[0], photon_amps: v[1..].to_vec(), time }
    }
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy(h: &Hamiltonian, state: &LatticeState) -> f64 {
    let v = state.to_vector();
    let mut hv = vec![C64::new(0.0, 0.0); v.len()];
    h.apply(&v, &mut hv);
    v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Upper bound on the internal step, in `1/ξ`.
    pub max_step: f64,
    pub taylor_order: usize,
    /// Reject the run when the chain ends light up or the norm drifts.
    pub enforce_checks: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { max_step: 0.02, taylor_order: 8, enforce_checks: true }
    }
}

/// Time-ordered states on every grid time (the first is `state0`).
pub fn evolve(state0: &LatticeState, grid: &SimulationGrid, params: &ModelParams) -> Result<Vec<LatticeState>> {
    let mut out = Vec::with_capacity(grid.n_t);
    evolve_with(state0, grid, params, EvolveOptions::default(), |s| out.push(s.clone()))?;
    Ok(out)
}

/// As [`evolve`] but hands each state to `observer` instead of storing it.
pub fn evolve_with<F: FnMut(&LatticeState)>(
    state0: &LatticeState,
    grid: &SimulationGrid,
    params: &ModelParams,
    options: EvolveOptions,
    mut observer: F,
) -> Result<()> {
    let params = params.validate()?;
    let grid = grid.validate(params.xi)?;
    let half_width = state0.half_width();
    if half_width != grid.lattice_half_width {
        return Err(Error::Mismatch("state size differs from grid.lattice_half_width"));
    }
    let h = Hamiltonian::build(&params, half_width)?;
    let norm0 = state0.norm_sqr();
    if (norm0 - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidParams("initial state must be normalized"));
    }
    let dt = grid.dt();
    let substeps = ((dt / (options.max_step / params.xi)).ceil() as usize).max(1);
    let step = dt / substeps as f64;

    let dim = h.dim();
    let mut psi = state0.to_vector();
    let mut term = vec![C64::new(0.0, 0.0); dim];
    let mut next = vec![C64::new(0.0, 0.0); dim];
    observer(&LatticeState::from_vector(&psi, 0.0));
    for j in 1..grid.n_t {
        for _ in 0..substeps {
            term.copy_from_slice(&psi);
            for k in 1..=options.taylor_order {
                h.apply(&term, &mut next);
                let c = C64::new(0.0, -step / k as f64);
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = n * c;
                }
                for (p, t) in psi.iter_mut().zip(&term) {
                    *p += t;
                }
            }
        }
        let state = LatticeState::from_vector(&psi, j as f64 * dt);
        if options.enforce_checks {
            let drift = (state.norm_sqr() - norm0).abs();
            if drift > NORM_TOL {
                return Err(Error::NormDrift { time: state.time, drift });
            }
            let edge = state.edge_occupation();
            if edge > EDGE_TOL {
                return Err(Error::BoundaryReached { time: state.time, occupation: edge });
            }
        }
        observer(&state);
    }
    Ok(())
}

/// Emitter amplitude on every grid time, without storing the field.
pub fn emitter_trace(params: &ModelParams, grid: &SimulationGrid) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(grid.n_t);
    let s0 = LatticeState::excited_emitter(grid.lattice_half_width);
    evolve_with(&s0, grid, params, EvolveOptions::default(), |s| out.push(s.emitter_amp))?;
    Ok(out)
}

/// One eigenpair of the full chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenmode {
    pub energy: f64,
    /// Normalized eigenvector in the [`Hamiltonian`] index layout.
    pub vector: Vec<f64>,
    /// `|⟨e|ψ⟩|²`.
    pub emitter_weight: f64,
    /// Photon weight on sites with `|n| > d/2` (`|n| > 0` for nc = 1).
    pub outside_weight: f64,
    /// Outside the band, or inside it with the photon confined to `|n| <= d/2`.
    pub bound_candidate: bool,
}

/// Eigenvalues closer than this are treated as one degenerate cluster.
const CLUSTER_TOL: f64 = 1e-9;

/// All eigenpairs of the chain, ascending. Degenerate clusters are rotated
/// so the most confined combination comes first.
pub fn eigenmodes(params: &ModelParams, half_width: usize) -> Result<Vec<Eigenmode>> {
    let h = Hamiltonian::build(params, half_width)?;
    let n = h.dim();
    let eig = symmetric_eigen(&h.to_dense(), n)?;
    let half = params.geometry().separation() as i64 / 2;
    let outside: Vec<bool> = (0..n).map(|i| i > 0 && (i as i64 - 1 - half_width as i64).abs() > half).collect();
    let mut vectors: Vec<Vec<f64>> = (0..n).map(|j| eig.vector(j).to_vec()).collect();
    localize_clusters(&eig.values, &mut vectors, &outside);
    let xi = params.xi;
    Ok(eig
        .values
        .iter()
        .zip(vectors)
        .map(|(&energy, vector)| {
            let emitter_weight = vector[0] * vector[0];
            let outside_weight: f64 = (-(half_width as i64)..=half_width as i64)
                .filter(|m| m.abs() > half)
                .map(|m| vector[site_index(half_width, m)].powi(2))
                .sum();
            let out_of_band = energy.abs() > 2.0 * xi;
            let confined = outside_weight < 1e-8 && emitter_weight > 1e-6;
            Eigenmode { energy, vector, emitter_weight, outside_weight, bound_candidate: out_of_band || confined }
        })
        .collect())
}

/// Rotate a degenerate block so it is diagonal in the weight on indices
/// where `outside` is true, most confined first. A compact bound state that
/// happens to share its energy with an extended chain mode is separated this
/// way.
fn localize_block(block: &mut [Vec<f64>], outside: &[bool]) {
    let k = block.len();
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = block[i]
                .iter()
                .zip(&block[j])
                .zip(outside)
                .filter(|(_, &o)| o)
                .map(|((a, b), _)| a * b)
                .sum();
            m[i * k + j] = s;
            m[j * k + i] = s;
        }
    }
    let Ok(eig) = symmetric_eigen(&m, k) else { return };
    let dim = block[0].len();
    let rotated: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let c = eig.vector(j);
            let mut v = vec![0.0; dim];
            for (ci, b) in c.iter().zip(block.iter()) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += ci * bi;
                }
            }
            v
        })
        .collect();
    for (v, r) in block.iter_mut().zip(rotated) {
        *v = r;
    }
}

fn localize_clusters(values: &[f64], vectors: &mut [Vec<f64>], outside: &[bool]) {
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            localize_block(&mut vectors[start..end], outside);
        }
        start = end;
    }
}

/// Eigenstate of the emitter-visible (mirror-even) sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMode {
    pub energy: f64,
    pub emitter_weight: f64,
    /// Occupation `|⟨n|ψ⟩|²` of one cavity at distance `|n|`, indexed by `|n|`.
    pub site_weight: Vec<f64>,
}

/// Diagonalize only the mirror-symmetric sector, which contains every state
/// with emitter weight: basis `|e⟩`, `|0⟩` and `(|n⟩ + |-n⟩)/√2`.
pub fn emitter_sector_modes(params: &ModelParams, half_width: usize) -> Result<Vec<SectorMode>> {
    let params = params.validate()?;
    Hamiltonian::build(&params, half_width)?;
    let n = half_width + 2;
    let xi = params.xi;
    let mut a = vec![0.0; n * n];
    a[0] = params.delta;
    // index 1 is |0⟩, index 1 + m is the even combination at distance m
    let set = |a: &mut Vec<f64>, i: usize, j: usize, v: f64| {
        a[i * n + j] += v;
        a[j * n + i] += v;
    };
    set(&mut a, 1, 2, 2f64.sqrt() * xi);
    for m in 1..half_width {
        set(&mut a, 1 + m, 2 + m, xi);
    }
    match params.geometry() {
        Geometry::Small => set(&mut a, 0, 1, params.g0),
        Geometry::Giant { d } => set(&mut a, 0, 1 + (d / 2) as usize, params.leg_coupling() * 2f64.sqrt()),
    }
    let eig = symmetric_eigen(&a, n)?;
    let half = params.geometry().separation() as usize / 2;
    let outside: Vec<bool> = (0..n).map(|i| i > 1 + half).collect();
    let mut vectors: Vec<Vec<f64>> = (0..n).map(|j| eig.vector(j).to_vec()).collect();
    localize_clusters(&eig.values, &mut vectors, &outside);
    Ok(eig
        .values
        .iter()
        .zip(vectors)
        .map(|(&energy, v)| {
            let mut site_weight = Vec::with_capacity(half_width + 1);
            site_weight.push(v[1] * v[1]);
            for m in 1..=half_width {
                site_weight.push(0.5 * v[1 + m] * v[1 + m]);
            }
            SectorMode { energy, emitter_weight: v[0] * v[0], site_weight }
        })
        .collect())
}

/// Sector modes that are bound: outside the band, or inside it with no
/// photon weight beyond `|n| = d/2`.
pub fn bound_candidates(params: &ModelParams, half_width: usize) -> Result<Vec<SectorMode>> {
    let half = params.geometry().separation() as usize / 2;
    let xi = params.xi;
    Ok(emitter_sector_modes(params, half_width)?
        .into_iter()
        .filter(|m| {
            let outside: f64 = m.site_weight.iter().skip(half + 1).sum();
            m.energy.abs() > 2.0 * xi || (outside < 1e-8 && m.emitter_weight > 1e-6)
        })
        .collect())
}
