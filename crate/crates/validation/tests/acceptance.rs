//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every tolerance is fixed here; none is
//! adjusted to make a check pass.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use caqed_core::bound_states::{
    all_poles, bic_frequencies, boc_field_profile, find_bic, numerical_residue, residue_bic, BoundKind, BoundState,
};
use caqed_core::circuit::table_check;
use caqed_core::dynamics::{kernel_zero_count, residue_sum, solve_amplitude, tail_exponent, AmplitudeTrace, KernelSpec, QuadraturePolicy};
use caqed_core::lattice::{bound_candidates, emitter_sector_modes, emitter_trace, SectorMode, DEFAULT_HALF_WIDTH};
use caqed_core::master_eq::{density_matrix, entropy, nonmarkovianity_witness, propagate_population, rates, QubitDensityMatrix};
use caqed_core::spectral::{effective_zeros, Bath};
use caqed_core::{Geometry, ModelParams, SimulationGrid};
use caqed_validation::{count_zeros, envelope_slope, fit_sinusoid, line_slope, mean_over};

type Res<T> = Result<T, Box<dyn std::error::Error>>;

/// One measured quantity against its bound. Informational entries carry
/// no bound and never decide the verdict.
struct Check {
    what: String,
    value: f64,
    bound: Option<f64>,
}

impl Check {
    fn new(what: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { what: what.into(), value, bound: Some(bound) }
    }

    fn info(what: impl Into<String>, value: f64) -> Self {
        Check { what: what.into(), value, bound: None }
    }

    fn pass(&self) -> bool {
        self.bound.map_or(true, |b| self.value.abs() <= b)
    }
}

/// Exact equality of small counts, reported as a deviation.
fn count(what: impl Into<String>, got: usize, want: usize) -> Check {
    Check::new(format!("{} = {got} (want {want})", what.into()), got as f64 - want as f64, 0.5)
}

fn grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect()
}

fn exact(p: &ModelParams, times: &[f64]) -> Res<AmplitudeTrace> {
    Ok(solve_amplitude(p, times, QuadraturePolicy::default())?)
}

fn lattice(p: &ModelParams, t_max: f64, h: f64, half_width: usize) -> Res<(Vec<f64>, Vec<f64>)> {
    let n = (t_max / h).round() as usize + 1;
    let g = SimulationGrid::new(t_max, n, half_width);
    let a = emitter_trace(p, &g)?;
    Ok((g.times(), a.iter().map(|c| c.norm_sqr()).collect()))
}

fn pole(poles: &[BoundState], kind: BoundKind) -> Res<BoundState> {
    poles.iter().copied().find(|b| b.kind == kind).ok_or_else(|| format!("no {} pole", kind.label()).into())
}

fn closest(modes: &[SectorMode], e: f64) -> &SectorMode {
    modes.iter().min_by(|a, b| (a.energy - e).abs().total_cmp(&(b.energy - e).abs())).expect("non-empty")
}

const G0: f64 = 0.2;

fn c1() -> Res<Vec<Check>> {
    let p = ModelParams::small(G0, 0.0);
    let gamma = G0 * G0;
    let tr = exact(&p, &grid(0.0, 75.0, 0.05))?;
    let dev = tr.times.iter().zip(&tr.alpha).map(|(t, a)| (a.norm_sqr() - (-gamma * t).exp()).abs()).fold(0.0, f64::max);
    Ok(vec![Check::new("max |α|² - exp(-γt)| on [0, 75]", dev, 0.02)])
}

fn c2() -> Res<Vec<Check>> {
    let p = ModelParams::small(G0, 0.0);
    let y = (2.0 + (4.0 + G0.powi(4)).sqrt()).sqrt();
    let poles = all_poles(&p)?;
    let (up, lo) = (pole(&poles, BoundKind::BocUpper)?, pole(&poles, BoundKind::BocLower)?);
    let modes = emitter_sector_modes(&p, DEFAULT_HALF_WIDTH)?;
    Ok(vec![
        Check::new("y+ vs closed form", up.energy - y, 1e-10),
        Check::new("y- vs closed form", lo.energy + y, 1e-10),
        Check::new("y+ vs 801-site chain", closest(&modes, up.energy).energy - up.energy, 1e-5),
        Check::new("y- vs 801-site chain", closest(&modes, lo.energy).energy - lo.energy, 1e-5),
    ])
}

fn c3() -> Res<Vec<Check>> {
    let p = ModelParams::small(G0, 2.0);
    let up = pole(&all_poles(&p)?, BoundKind::BocUpper)?;
    let r = up.residue;
    // |α|² approaches r+² through a slowly decaying beat between the bound
    // state and the band edge, so the plateau is the mean over one full
    // beat period. The 801-site chain stays reflection-free up to t ≈ 185.
    let beat = 2.0 * PI / (up.energy - 2.0);
    let window = (180.0 - beat, 180.0);
    let tr = exact(&p, &grid(0.0, window.1, 0.05))?;
    let plateau_exact = mean_over(&tr.times, &tr.population(), window.0, window.1);
    let (lt, la) = lattice(&p, window.1, 0.05, DEFAULT_HALF_WIDTH)?;
    let plateau_lattice = mean_over(&lt, &la, window.0, window.1);
    let late = exact(&p, &grid(1000.0, 2000.0, 0.25))?;
    let plateau_late = mean_over(&late.times, &late.population(), 1000.0, 2000.0);
    Ok(vec![
        Check::new(format!("exact plateau on [{:.1}, {:.1}] - r+²", window.0, window.1), plateau_exact - r * r, 1e-3),
        Check::new("lattice plateau - r+²", plateau_lattice - r * r, 1e-3),
        Check::new("exact - lattice plateau", plateau_exact - plateau_lattice, 1e-3),
        Check::new("exact plateau on [1000, 2000] - r+²", plateau_late - r * r, 1e-3),
    ])
}

fn c4() -> Res<Vec<Check>> {
    let mut out = Vec::new();
    for delta in [1.5, 2.0] {
        let p = ModelParams::small(G0, delta);
        let up = pole(&all_poles(&p)?, BoundKind::BocUpper)?;
        let kappa = (up.energy / 2.0).acosh();
        let modes = emitter_sector_modes(&p, DEFAULT_HALF_WIDTH)?;
        let m = closest(&modes, up.energy);
        let n: Vec<f64> = (1..=30).map(|k| k as f64).collect();
        let lw: Vec<f64> = (1..=30).map(|k| m.site_weight[k].ln()).collect();
        out.push(Check::new(format!("Δ={delta}: lattice eigenvector slope + 2κ+"), line_slope(&n, &lw) + 2.0 * kappa, 1e-4));
        let prof = boc_field_profile(&up, &p, 30)?;
        let lp: Vec<f64> = (1..=30).map(|k| prof.at(k).expect("in window").ln()).collect();
        out.push(Check::new(format!("Δ={delta}: stationary profile slope + 2κ+"), line_slope(&n, &lp) + 2.0 * kappa, 1e-4));
    }
    Ok(out)
}

fn c5() -> Res<Vec<Check>> {
    let p = ModelParams::giant(G0, 0.0, 2);
    let rm = 1.0 / (1.0 + (G0 / 2.0).powi(2));
    let bic = find_bic(&p)?.ok_or("no BIC at d = 2")?;
    let tr = exact(&p, &grid(400.0, 500.0, 0.05))?;
    let steady = mean_over(&tr.times, &tr.population(), 400.0, 500.0);
    let cands = bound_candidates(&p, DEFAULT_HALF_WIDTH)?;
    let m = cands.iter().find(|m| m.energy.abs() < 1e-9).ok_or("no zero-energy lattice mode")?;
    let outside: f64 = m.site_weight.iter().skip(2).map(|w| 2.0 * w).sum();
    Ok(vec![
        Check::new("BIC residue - r_m", bic.residue - rm, 1e-4),
        Check::new("steady |α|² - r_m²", steady - rm * rm, 1e-4),
        Check::new("lattice emitter weight - r_m", m.emitter_weight - rm, 1e-4),
        Check::new("lattice photon weight outside |n| <= 1", outside, 1e-8),
    ])
}

fn c6() -> Res<Vec<Check>> {
    let bath = Bath::new(1.0, G0);
    let mut out = Vec::new();
    for d in [4u32, 12, 30] {
        let mut worst = 0.0f64;
        let mut n = 0;
        for w in bic_frequencies(d, 1.0).into_iter().filter(|w| *w != 0.0) {
            let closed = residue_bic(w, d, G0, 1.0)?;
            let numeric = numerical_residue(&bath, Geometry::Giant { d }, w)?;
            worst = worst.max((closed - numeric).abs());
            n += 1;
        }
        out.push(Check::new(format!("d={d}: max residue deviation over {n} BICs"), worst, 1e-8));
    }
    Ok(out)
}

/// Scenario 7: `Δ = 2ξ cos(π/12)`, `d = 12`.
fn scenario7() -> ModelParams {
    ModelParams::giant(G0, 2.0 * (PI / 12.0).cos(), 12)
}

fn c7(tr: &AmplitudeTrace) -> Res<Vec<Check>> {
    let p = scenario7();
    let poles = all_poles(&p)?;
    let (up, bic) = (pole(&poles, BoundKind::BocUpper)?, pole(&poles, BoundKind::Bic)?);
    let fit = fit_sinusoid(&tr.times, &tr.population(), 0.02, 0.5);
    Ok(vec![
        Check::new("frequency - (y+ - ω_m)", fit.frequency - (up.energy - bic.energy), 1e-3),
        Check::new("amplitude - 2 r+ r_m", fit.amplitude - 2.0 * up.residue * bic.residue, 1e-3),
        Check::new("offset - (r+² + r_m²)", fit.offset - (up.residue.powi(2) + bic.residue.powi(2)), 1e-3),
    ])
}

fn scattering_power(tr: &AmplitudeTrace) -> Vec<f64> {
    tr.scattering_part.iter().map(|c| c.norm_sqr()).collect()
}

/// Log-log slope of the beat-averaged scattering power sampled at
/// log-spaced centres across `window`, each averaged over one beat.
fn sparse_envelope_slope(p: &ModelParams, window: (f64, f64), beat: f64) -> Res<f64> {
    let (centres, per) = (24, 32);
    let mut times = Vec::with_capacity(centres * per);
    let mut lc = Vec::with_capacity(centres);
    for j in 0..centres {
        let c = window.0 * (window.1 / window.0).powf(j as f64 / (centres - 1) as f64);
        lc.push(c.ln());
        times.extend((0..per).map(|k| c + beat * k as f64 / per as f64));
    }
    let tr = exact(p, &times)?;
    let power = scattering_power(&tr);
    let lm: Vec<f64> = power.chunks_exact(per).map(|c| (c.iter().sum::<f64>() / per as f64).ln()).collect();
    Ok(line_slope(&lc, &lm))
}

/// Scattering part of the small emitter at `Δ = 0`. The two band edges
/// beat at `4ξ`, so slopes are fitted to the envelope averaged over that
/// period; the raw fit and the band-edge case are printed alongside.
fn c8() -> Res<Vec<Check>> {
    let p = ModelParams::small(G0, 0.0);
    let beat = PI / 2.0;
    let (w1, w2) = ((20.0, 100.0), (200.0, 2000.0));
    let early = exact(&p, &grid(w1.0, w1.1, 0.05))?;
    let late = exact(&p, &grid(w2.0, w2.1, 0.05))?;
    // large chain: reflections stay away from the emitter until t ≈ 2048
    let poles = all_poles(&p)?;
    let g = SimulationGrid::new(w2.1, 40001, 4096);
    let a = emitter_trace(&p, &g)?;
    let lt = g.times();
    let lat_scat: Vec<f64> = lt.iter().zip(&a).map(|(&t, &x)| (x - residue_sum(&poles, t)).norm_sqr()).collect();
    let edge = exact(&ModelParams::small(G0, 2.0), &grid(w2.0, w2.1, 0.05))?;
    Ok(vec![
        Check::new("Δ=0 slope on [20, 100] + 1", envelope_slope(&early.times, &scattering_power(&early), w1, beat) + 1.0, 0.3),
        Check::new("Δ=0 slope on [200, 2000] + 3", envelope_slope(&late.times, &scattering_power(&late), w2, beat) + 3.0, 0.3),
        Check::new("Δ=0 lattice slope on [200, 2000] + 3", envelope_slope(&lt, &lat_scat, w2, beat) + 3.0, 0.3),
        Check::info("Δ=0 unaveraged slope on [20, 100]", tail_exponent(&early, w1)?.slope),
        Check::info("Δ=0 unaveraged slope on [200, 2000]", tail_exponent(&late, w2)?.slope),
        Check::info("Δ=0 slope on [1000, 5000]", sparse_envelope_slope(&p, (1000.0, 5000.0), beat)?),
        Check::info("Δ=0 slope on [50000, 100000]", sparse_envelope_slope(&p, (5e4, 1e5), beat)?),
        Check::info("Δ=2 slope on [200, 2000]", envelope_slope(&edge.times, &scattering_power(&edge), w2, beat)),
    ])
}

fn c9() -> Res<Vec<Check>> {
    let bath = Bath::new(1.0, G0);
    let mut out = Vec::new();
    for d in [2u32, 4, 12, 30] {
        let half = d.div_ceil(2) as usize;
        let listed = effective_zeros(d, 1.0);
        out.push(count(format!("d={d}: listed J_eff zeros"), listed.len(), half));
        let found = count_zeros(|w| bath.j_eff(w, d).unwrap_or(f64::NAN), -2.0, 2.0, 20000);
        out.push(count(format!("d={d}: J_eff zeros on the band"), found, half));
        // K has a double zero at every J_eff zero except the one the tuned BIC removes
        let counts: Vec<usize> = bic_frequencies(d, 1.0)
            .into_iter()
            .map(|w| kernel_zero_count(&KernelSpec::from_params(&ModelParams::giant(G0, w, d)), 20000))
            .collect();
        let off = counts.iter().map(|&c| c.abs_diff(half - 1)).max().unwrap_or(usize::MAX);
        out.push(count(format!("d={d}: worst K zero count offset over {} BIC tunings", counts.len()), off, 0));
    }
    Ok(out)
}

fn c10(tr7: &AmplitudeTrace) -> Res<Vec<Check>> {
    let mut out = Vec::new();
    for (name, p) in [("small Δ=2", ModelParams::small(G0, 2.0)), ("scenario 7", scenario7())] {
        let tr = exact(&p, &grid(0.0, 100.0, 0.01))?;
        let pop = propagate_population(&rates(&tr)?, 1.0)?;
        let dev = pop.iter().zip(tr.population()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        out.push(Check::new(format!("{name}: max |∫Γ population - ρ_ee|"), if dev.is_nan() { f64::INFINITY } else { dev }, 1e-6));
    }
    let tr = exact(&ModelParams::small(G0, 2.0), &grid(0.0, 100.0, 0.1))?;
    let intervals = nonmarkovianity_witness(&rates(&tr)?);
    out.push(Check::new(format!("small Δ=2: {} negative-Γ intervals, need >= 1", intervals.len()), if intervals.is_empty() { 1.0 } else { 0.0 }, 0.5));
    let p = scenario7();
    let poles = all_poles(&p)?;
    let target = pole(&poles, BoundKind::BocUpper)?.energy - pole(&poles, BoundKind::Bic)?.energy;
    let s: Vec<f64> = density_matrix(tr7, QubitDensityMatrix::excited())?.iter().map(entropy).collect();
    let fit = fit_sinusoid(&tr7.times, &s, 0.02, 0.5);
    out.push(Check::new("scenario 7: entropy frequency - (y+ - ω_m)", fit.frequency - target, 1e-3));
    Ok(out)
}

fn c11() -> Res<Vec<Check>> {
    let r = table_check()?;
    Ok(r.lines.iter().map(|l| Check::new(format!("{} relative error", l.name), l.relative_error(), l.rel_tol)).collect())
}

fn c12() -> Res<Vec<Check>> {
    let scenarios = [
        ("small Δ=0", ModelParams::small(G0, 0.0)),
        ("small Δ=3/2", ModelParams::small(G0, 1.5)),
        ("small Δ=2", ModelParams::small(G0, 2.0)),
        ("d=2 Δ=0", ModelParams::giant(G0, 0.0, 2)),
        ("d=12 Δ=2cos(5π/12)", ModelParams::giant(G0, 2.0 * (5.0 * PI / 12.0).cos(), 12)),
        ("d=12 Δ=2cos(π/12)", scenario7()),
        ("d=30 Δ=2", ModelParams::giant(G0, 2.0, 30)),
    ];
    let mut out = Vec::new();
    for (name, p) in scenarios {
        let tr = exact(&p, &grid(0.0, 100.0, 0.1))?;
        let (_, la) = lattice(&p, 100.0, 0.1, DEFAULT_HALF_WIDTH)?;
        let dev = tr.population().iter().zip(&la).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        out.push(Check::new(format!("{name}: max ||α_exact|² - |α_lattice|²|"), dev, 1e-3));
    }
    Ok(out)
}

fn report(n: u32, title: &str, result: Res<Vec<Check>>, started: Instant) -> bool {
    let secs = started.elapsed().as_secs_f64();
    match result {
        Ok(checks) => {
            let pass = checks.iter().all(Check::pass);
            println!("criterion {n:>2} {} {title} ({secs:.1} s)", if pass { "PASS" } else { "FAIL" });
            for c in &checks {
                match c.bound {
                    Some(b) => println!("    [{}] {}: {:.3e} (bound {b:.0e})", if c.pass() { "ok" } else { "x" }, c.what, c.value),
                    None => println!("    [--] {}: {:.3e} (not judged)", c.what, c.value),
                }
            }
            pass
        }
        Err(e) => {
            println!("criterion {n:>2} FAIL {title}: error: {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters: nothing to enumerate here
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let t7 = exact(&scenario7(), &grid(200.0, 1000.0, 0.1));
    let t7 = &t7;
    let mut results = Vec::new();
    let mut run = |n: u32, title: &str, f: &dyn Fn() -> Res<Vec<Check>>| {
        let t0 = Instant::now();
        results.push(report(n, title, f(), t0));
    };
    let with7 = |f: fn(&AmplitudeTrace) -> Res<Vec<Check>>| {
        move || match t7 {
            Ok(tr) => f(tr),
            Err(e) => Err(e.to_string().into()),
        }
    };
    run(1, "Markovian limit", &c1);
    run(2, "BOC energies", &c2);
    run(3, "partial decay at the band edge", &c3);
    run(4, "BOC localization", &c4);
    run(5, "d = 2 BIC", &c5);
    run(6, "BIC residue closed form", &c6);
    run(7, "oscillating bound state", &with7(c7));
    run(8, "power-law tails", &c8);
    run(9, "kernel zero counts", &c9);
    run(10, "master-equation consistency", &with7(c10));
    run(11, "circuit mapping", &c11);
    run(12, "exact solver against the lattice", &c12);
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
