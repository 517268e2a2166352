//! Scenario execution and output layout.
//!
//! Each scenario writes into its own directory below the output root, and a
//! `manifest.json` at the root lists parameters, policy and checksums. No
//! timestamps or host data are recorded, so identical inputs give
//! byte-identical outputs.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use caqed_core::bound_states::{all_poles, bic_field_profile, boc_field_profile, default_window, BoundKind, BoundState};
use caqed_core::circuit::{effective_model, solve_circuit, table_check, CircuitParams, CircuitTargets, EffectiveModel};
use caqed_core::dynamics::{beta_fields_small, solve_amplitude, AmplitudeTrace, KernelSpec, QuadraturePolicy};
use caqed_core::lattice::{bound_candidates, eigenmodes, evolve_with, EvolveOptions, LatticeState};
use caqed_core::master_eq::{density_matrix, entropy, nonmarkovianity_witness, rates, QubitDensityMatrix};
use caqed_core::spectral::Bath;
use caqed_core::{Geometry, ModelParams, SimulationGrid, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{Engine, FieldConfig, GridConfig, Output, ParamsConfig, RunConfig, Scenario, ToleranceConfig};
use crate::output::{FieldTable, FileEntry, ScenarioWriter, Table};

pub const MANIFEST_FORMAT: u32 = 1;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub engine: Option<Engine>,
    /// Replaces every scenario's quadrature tolerance.
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub name: String,
    pub description: Option<String>,
    pub engine: Engine,
    pub params: Option<ParamsConfig>,
    pub grid: Option<GridConfig>,
    pub tolerance: ToleranceConfig,
    pub outputs: Vec<Output>,
    pub files: Vec<FileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub format: u32,
    pub scenarios: Vec<ScenarioRecord>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join("manifest.json");
        let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Run every scenario in parallel on the current rayon pool.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<Manifest> {
    cfg.check()?;
    std::fs::create_dir_all(&opts.out_dir).with_context(|| format!("cannot create {}", opts.out_dir.display()))?;
    let records: Vec<ScenarioRecord> =
        cfg.scenarios.par_iter().map(|s| run_scenario(s, opts)).collect::<Result<_>>()?;
    let manifest = Manifest {
        tool: "caqed".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        format: MANIFEST_FORMAT,
        scenarios: records,
    };
    let mut text = serde_json::to_vec_pretty(&manifest)?;
    text.push(b'\n');
    std::fs::write(opts.out_dir.join("manifest.json"), text)?;
    Ok(manifest)
}

fn effective(s: &Scenario, opts: &RunOptions) -> Scenario {
    let mut s = s.clone();
    if let Some(e) = opts.engine {
        s.engine = e;
    }
    if let Some(t) = opts.abs_tol {
        s.tolerance.abs_tol = t;
    }
    s
}

fn policy(s: &Scenario) -> QuadraturePolicy {
    QuadraturePolicy { abs_tol: s.tolerance.abs_tol, ..QuadraturePolicy::default() }
}

pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ScenarioRecord> {
    let s = effective(s, opts);
    let mut w = ScenarioWriter::new(&opts.out_dir, &s.name)?;
    let mut summary = serde_json::Map::new();
    compute(&s, &mut w, &mut summary).with_context(|| format!("scenario '{}'", s.name))?;
    if !summary.is_empty() {
        w.write_json("summary.json", &Value::Object(summary))?;
    }
    Ok(ScenarioRecord {
        name: s.name.clone(),
        description: s.description.clone(),
        engine: s.engine,
        params: s.params,
        grid: s.grid,
        tolerance: s.tolerance,
        outputs: s.outputs.iter().copied().collect(),
        files: w.files,
    })
}

type Summary = serde_json::Map<String, Value>;

fn compute(s: &Scenario, w: &mut ScenarioWriter, summary: &mut Summary) -> Result<()> {
    if s.wants(Output::Circuit) {
        let report = circuit_report(s)?;
        w.write_json("circuit.json", &report)?;
    }
    let band = [Output::Kernel, Output::Density].iter().any(|o| s.wants(*o));
    let dynamic = [Output::Trace, Output::Field, Output::Rates, Output::Entropy].iter().any(|o| s.wants(*o));
    if !(band || dynamic || s.wants(Output::BoundStates) || s.wants(Output::Spectrum)) {
        return Ok(());
    }
    let p = s.model()?;
    if s.wants(Output::Kernel) {
        w.write_csv("kernel.csv", kernel_table(&p)?)?;
    }
    if s.wants(Output::Density) {
        w.write_csv("density.csv", density_table(&p)?)?;
    }
    if let Some(sweep) = &s.sweep {
        let unsupported = [Output::Field, Output::BoundStates, Output::Rates, Output::Entropy];
        if unsupported.iter().any(|o| s.wants(*o)) {
            bail!("sweeps support only the trace and spectrum outputs");
        }
        if s.wants(Output::Spectrum) {
            let half_width = s.grid.map_or(100, |g| g.lattice_half_width);
            let rows: Vec<(f64, Vec<(f64, f64, bool)>, Vec<BoundState>)> = sweep
                .values()
                .into_par_iter()
                .map(|v| {
                    let q = sweep.apply(&p, v).validate()?;
                    let modes = eigenmodes(&q, half_width)?;
                    let poles = all_poles(&q)?;
                    Ok((v, modes.into_iter().map(|m| (m.energy, m.emitter_weight, m.bound_candidate)).collect(), poles))
                })
                .collect::<Result<_>>()?;
            let mut t = Table::new(&["value", "energy", "emitter_weight", "bound_candidate"]);
            let mut b = Table::new(&["value", "kind", "energy", "residue"]);
            for (v, modes, poles) in rows {
                for (e, wgt, c) in modes {
                    t.push(vec![v.into(), e.into(), wgt.into(), (c as i64).into()]);
                }
                for pole in poles {
                    b.push(vec![v.into(), pole.kind.label().into(), pole.energy.into(), pole.residue.into()]);
                }
            }
            w.write_csv("spectrum.csv", t)?;
            w.write_csv("bound_energies.csv", b)?;
        }
        if s.wants(Output::Trace) {
            let grid = s.sim_grid()?;
            let times = grid.times();
            let traces: Vec<(f64, Vec<C64>)> = sweep
                .values()
                .into_par_iter()
                .map(|v| {
                    let q = sweep.apply(&p, v).validate()?;
                    let tr = trace_for(&q, &grid, s.engine, policy(s))?;
                    Ok((v, tr.alpha))
                })
                .collect::<Result<_>>()?;
            let mut t = Table::new(&["value", "t", "abs2_alpha"]);
            for (v, alpha) in traces {
                for (time, a) in times.iter().zip(alpha) {
                    t.push(vec![v.into(), (*time).into(), a.norm_sqr().into()]);
                }
            }
            w.write_csv("sweep.csv", t)?;
        }
        return Ok(());
    }
    if s.wants(Output::Spectrum) {
        let half_width = s.grid.map_or(100, |g| g.lattice_half_width);
        let mut t = Table::new(&["energy", "emitter_weight", "bound_candidate"]);
        for m in eigenmodes(&p, half_width)? {
            t.push(vec![m.energy.into(), m.emitter_weight.into(), (m.bound_candidate as i64).into()]);
        }
        w.write_csv("spectrum.csv", t)?;
    }
    if s.wants(Output::BoundStates) {
        let half_width = s.grid.map_or(caqed_core::lattice::DEFAULT_HALF_WIDTH, |g| g.lattice_half_width);
        let (states, profiles) = bound_state_tables(&p, s.engine, half_width)?;
        summary.insert("bound_states".into(), states.1);
        w.write_csv("bound_states.csv", states.0)?;
        w.write_csv("bound_profiles.csv", profiles)?;
    }
    if !dynamic {
        return Ok(());
    }
    let grid = s.sim_grid()?;
    let field_cfg = s.field.unwrap_or_default();
    let want_field = s.wants(Output::Field);
    let (trace, field) = match (s.engine, p.geometry()) {
        (Engine::Lattice, _) => {
            let (tr, f) = lattice_run(&p, &grid, want_field.then_some(field_cfg))?;
            (tr, f)
        }
        (Engine::Exact, geometry) => {
            let tr = solve_amplitude(&p, &grid.times(), policy(s))?;
            let f = match (want_field, geometry) {
                (false, _) => None,
                (true, Geometry::Small) => Some(small_field(&p, &tr, field_cfg, policy(s))?),
                // the closed-form convolution covers one coupling point only
                (true, Geometry::Giant { .. }) => lattice_run(&p, &grid, Some(field_cfg))?.1,
            };
            (tr, f)
        }
    };
    if s.wants(Output::Trace) {
        w.write_csv("trace.csv", trace_table(&trace, s.engine))?;
        let last = trace.alpha.last().map_or(0.0, |a| a.norm_sqr());
        summary.insert("final_population".into(), json!(last));
    }
    if let Some(f) = field {
        w.write_csv("field.csv", f.to_table())?;
        w.write("field.bin", &f.encode())?;
    }
    if s.wants(Output::Rates) || s.wants(Output::Entropy) {
        let i = s.initial_state;
        let rho0 = QubitDensityMatrix::new(i.rho_ee, C64::new(i.rho_eg_re, i.rho_eg_im), 0.0)?;
        let (table, witness) = master_eq_table(&trace, rho0)?;
        w.write_csv("master_eq.csv", table)?;
        let iv: Vec<[f64; 2]> = witness.iter().map(|&(a, b)| [a, b]).collect();
        summary.insert("negative_rate_intervals".into(), json!(iv));
    }
    Ok(())
}

/// Emitter trace from the chosen engine.
pub fn trace_for(p: &ModelParams, grid: &SimulationGrid, engine: Engine, policy: QuadraturePolicy) -> Result<AmplitudeTrace> {
    match engine {
        Engine::Exact => Ok(solve_amplitude(p, &grid.times(), policy)?),
        Engine::Lattice => Ok(lattice_run(p, grid, None)?.0),
    }
}

fn lattice_run(p: &ModelParams, grid: &SimulationGrid, field: Option<FieldConfig>) -> Result<(AmplitudeTrace, Option<FieldTable>)> {
    let s0 = LatticeState::excited_emitter(grid.lattice_half_width);
    let mut alpha = Vec::with_capacity(grid.n_t);
    let hw = field.map_or(0, |f| f.half_width.min(grid.lattice_half_width));
    let mut table = field.map(|_| FieldTable { times: Vec::new(), first_site: -(hw as i64), n_sites: 2 * hw + 1, values: Vec::new() });
    let every = field.map_or(1, |f| f.every);
    let mut j = 0usize;
    evolve_with(&s0, grid, p, EvolveOptions::default(), |st| {
        alpha.push(st.emitter_amp);
        if let Some(t) = table.as_mut() {
            if j % every == 0 {
                t.times.push(st.time);
                t.values.extend((-(hw as i64)..=hw as i64).map(|n| st.photon(n).norm_sqr()));
            }
        }
        j += 1;
    })?;
    Ok((AmplitudeTrace::from_alpha(grid.times(), alpha), table))
}

/// Largest time step (in units of `1/ξ`) for the photon convolution.
const FIELD_MAX_STEP: f64 = 0.05;

/// The photon convolution is evaluated on a grid refined to
/// `FIELD_MAX_STEP` and sampled back onto the output times.
fn small_field(p: &ModelParams, tr: &AmplitudeTrace, f: FieldConfig, policy: QuadraturePolicy) -> Result<FieldTable> {
    let hw = f.half_width as i64;
    let sites: Vec<i64> = (-hw..=hw).collect();
    let h = tr.uniform_step()?;
    let refine = (h * p.xi / FIELD_MAX_STEP).ceil().max(1.0) as usize;
    let fine;
    let source = if refine > 1 {
        let n = (tr.len() - 1) * refine + 1;
        let t_max = *tr.times.last().expect("non-empty trace");
        let times: Vec<f64> = (0..n).map(|j| t_max * j as f64 / (n - 1) as f64).collect();
        fine = solve_amplitude(p, &times, policy)?;
        &fine
    } else {
        tr
    };
    let series = beta_fields_small(&sites, source, p)?;
    let mut table = FieldTable { times: Vec::new(), first_site: -hw, n_sites: sites.len(), values: Vec::new() };
    for (i, &t) in tr.times.iter().enumerate().step_by(f.every) {
        table.times.push(t);
        table.values.extend(series.iter().map(|s| s[i * refine].norm_sqr()));
    }
    Ok(table)
}

fn trace_table(tr: &AmplitudeTrace, engine: Engine) -> Table {
    let mut t = Table::new(&["t", "re_alpha", "im_alpha", "abs2_alpha", "re_scattering", "im_scattering", "re_residue", "im_residue"]);
    let exact = engine == Engine::Exact;
    for j in 0..tr.len() {
        let (a, sc, r) = (tr.alpha[j], tr.scattering_part[j], tr.residue_part[j]);
        let part = |v: f64| if exact { Some(v) } else { None };
        t.push(vec![
            tr.times[j].into(),
            a.re.into(),
            a.im.into(),
            a.norm_sqr().into(),
            part(sc.re).into(),
            part(sc.im).into(),
            part(r.re).into(),
            part(r.im).into(),
        ]);
    }
    t
}

fn master_eq_table(tr: &AmplitudeTrace, rho0: QubitDensityMatrix) -> Result<(Table, Vec<(f64, f64)>)> {
    let rho = density_matrix(tr, rho0)?;
    let r = rates(tr)?;
    let mut t = Table::new(&["t", "rho_ee", "re_rho_eg", "im_rho_eg", "lamb_shift", "decay_rate", "entropy"]);
    for (m, rate) in rho.iter().zip(&r) {
        t.push(vec![
            m.time.into(),
            m.rho_ee.into(),
            m.rho_eg.re.into(),
            m.rho_eg.im.into(),
            rate.map(|x| x.lamb_shift).into(),
            rate.map(|x| x.decay_rate).into(),
            entropy(m).into(),
        ]);
    }
    Ok((t, nonmarkovianity_witness(&r)))
}

type StateTables = ((Table, Value), Table);

fn bound_state_tables(p: &ModelParams, engine: Engine, half_width: usize) -> Result<StateTables> {
    let mut states = Table::new(&["index", "kind", "energy", "residue", "kappa", "phi"]);
    let mut profiles = Table::new(&["index", "n", "occupation"]);
    let mut listing = Vec::new();
    match engine {
        Engine::Exact => {
            for (i, st) in all_poles(p)?.iter().enumerate() {
                let i = i as i64;
                states.push(vec![i.into(), st.kind.label().into(), st.energy.into(), st.residue.into(), st.kappa.into(), st.phi.into()]);
                listing.push(json!({"kind": st.kind.label(), "energy": st.energy, "residue": st.residue, "kappa": st.kappa}));
                let window = default_window(st, p, 400);
                let prof = match st.kind {
                    BoundKind::Bic => bic_field_profile(st, p, window)?,
                    _ => boc_field_profile(st, p, window)?,
                };
                for (n, occ) in prof.sites.iter().zip(&prof.occupation) {
                    profiles.push(vec![i.into(), (*n).into(), (*occ).into()]);
                }
            }
        }
        Engine::Lattice => {
            for (i, m) in bound_candidates(p, half_width)?.iter().enumerate() {
                let i = i as i64;
                let kind = if m.energy > 2.0 * p.xi {
                    "boc_upper"
                } else if m.energy < -2.0 * p.xi {
                    "boc_lower"
                } else {
                    "bic"
                };
                states.push(vec![i.into(), kind.into(), m.energy.into(), m.emitter_weight.into(), None.into(), None.into()]);
                listing.push(json!({"kind": kind, "energy": m.energy, "residue": m.emitter_weight}));
                // |⟨n|ψ⟩|² times the emitter weight is the long-time occupation
                for (d, occ) in m.site_weight.iter().enumerate() {
                    let occ = occ * m.emitter_weight;
                    if d == 0 {
                        profiles.push(vec![i.into(), 0i64.into(), occ.into()]);
                    } else {
                        profiles.push(vec![i.into(), (-(d as i64)).into(), occ.into()]);
                        profiles.push(vec![i.into(), (d as i64).into(), occ.into()]);
                    }
                }
            }
        }
    }
    Ok(((states, Value::Array(listing)), profiles))
}

fn kernel_table(p: &ModelParams) -> Result<Table> {
    let spec = KernelSpec::from_params(p).validate()?;
    let mut t = Table::new(&["y", "kernel"]);
    let n = 2000;
    for j in 1..n {
        // ỹ = cos θ on a uniform θ grid resolves the band edges; the θ form
        // stays finite where the printed ratio is 0/0 (tuned BIC nodes)
        let theta = std::f64::consts::PI * j as f64 / n as f64;
        t.push(vec![theta.cos().into(), (spec.kernel_theta(theta) / theta.sin()).into()]);
    }
    Ok(t)
}

fn density_table(p: &ModelParams) -> Result<Table> {
    let bath = Bath::from_params(p);
    let mut t = Table::new(&["omega", "density"]);
    let n = 2000;
    for j in 1..n {
        let omega = 2.0 * p.xi * (std::f64::consts::PI * (n - j) as f64 / n as f64).cos();
        t.push(vec![omega.into(), bath.spectral_density(omega, p.geometry())?.into()]);
    }
    Ok(t)
}

/// Report for the `circuit` output and subcommand.
pub fn circuit_report(s: &Scenario) -> Result<Value> {
    let cfg = s.circuit.with_context(|| format!("scenario '{}' has no circuit section", s.name))?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let model_json = |m: &EffectiveModel| {
        json!({
            "si": {
                "omega0_hz": m.omega0 / two_pi,
                "xi_hz": m.xi / two_pi,
                "g0_hz": m.g0 / two_pi,
                "qubit_frequency_hz": m.qubit_frequency / two_pi,
                "delta_hz": m.delta / two_pi,
            },
            "model_units": {
                "omega0": m.omega0 / m.xi,
                "g0": m.g0 / m.xi,
                "delta": m.delta / m.xi,
            },
            "coupling_ratio": m.coupling_ratio,
            "warnings": m.warnings,
        })
    };
    let circuit_json = |c: &CircuitParams| {
        json!({"l0": c.l0, "c0": c.c0, "c": c.c, "cg": c.cg, "c_sigma_q": c.c_sigma_q, "ej_hz": c.ej / two_pi, "ec_hz": c.ec / two_pi})
    };
    let mut report = serde_json::Map::new();
    if let Some(e) = cfg.elements {
        let cp = CircuitParams { l0: e.l0, c0: e.c0, c: e.c, cg: e.cg, c_sigma_q: e.c_sigma_q, ej: e.ej_hz * two_pi, ec: e.ec_hz * two_pi };
        report.insert("forward".into(), model_json(&effective_model(&cp)?));
    }
    if let Some(t) = cfg.targets {
        let cp = solve_circuit(&CircuitTargets {
            omega0: t.omega0_hz * two_pi,
            xi: t.xi_hz * two_pi,
            g0: t.g0_hz * two_pi,
            delta: t.delta_hz * two_pi,
            c0: t.c0,
            c_sigma_q: t.c_sigma_q,
            ec: t.ec_hz * two_pi,
        })?;
        let back = effective_model(&cp)?;
        report.insert("inverse".into(), json!({"circuit": circuit_json(&cp), "model": model_json(&back)}));
    }
    if cfg.table_check {
        let r = table_check()?;
        let lines: Vec<Value> = r
            .lines
            .iter()
            .map(|l| json!({"quantity": l.name, "expected": l.expected, "obtained": l.obtained, "relative_error": l.relative_error(), "pass": l.pass()}))
            .collect();
        report.insert(
            "table_check".into(),
            json!({"pass": r.pass(), "circuit": circuit_json(&r.circuit), "model": model_json(&r.model), "lines": lines}),
        );
    }
    if report.is_empty() {
        bail!("circuit section needs elements, targets or table_check");
    }
    Ok(Value::Object(report))
}

/// Bound states of every scenario as JSON, for the `bound-states` command.
pub fn bound_states_report(cfg: &RunConfig, engine: Option<Engine>) -> Result<Value> {
    let out: Vec<Value> = cfg
        .scenarios
        .par_iter()
        .map(|s| {
            let p = s.model()?;
            let engine = engine.unwrap_or(s.engine);
            let half_width = s.grid.map_or(caqed_core::lattice::DEFAULT_HALF_WIDTH, |g| g.lattice_half_width);
            let ((_, listing), _) = bound_state_tables(&p, engine, half_width)?;
            Ok(json!({"name": s.name, "engine": engine, "bound_states": listing}))
        })
        .collect::<Result<_>>()?;
    Ok(json!({ "scenarios": out }))
}
