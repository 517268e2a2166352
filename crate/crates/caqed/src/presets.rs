//! Built-in scenarios, one per named plot panel.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::config::{
    CircuitConfig, Engine, FieldConfig, GridConfig, InitialState, Output, ParamsConfig, RunConfig, Scenario, Sweep,
    SweepParam, ToleranceConfig,
};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub build: fn() -> RunConfig,
}

fn small(delta: f64) -> ParamsConfig {
    ParamsConfig { xi: 1.0, omega0: 0.0, g0: 0.2, delta, nc: 1, d: None }
}

fn giant(delta: f64, d: u32) -> ParamsConfig {
    ParamsConfig { xi: 1.0, omega0: 0.0, g0: 0.2, delta, nc: 2, d: Some(d) }
}

fn grid(t_max: f64, n_t: usize, half_width: usize) -> GridConfig {
    GridConfig { t_max, n_t, lattice_half_width: half_width }
}

fn scenario(name: &str, params: ParamsConfig, grid: Option<GridConfig>, outputs: &[Output]) -> Scenario {
    Scenario {
        name: name.to_string(),
        description: None,
        params: Some(params),
        grid,
        outputs: outputs.iter().copied().collect::<BTreeSet<_>>(),
        engine: Engine::Exact,
        sweep: None,
        initial_state: InitialState::default(),
        field: None,
        circuit: None,
        tolerance: ToleranceConfig::default(),
    }
}

fn one(s: Scenario) -> RunConfig {
    RunConfig { scenarios: vec![s] }
}

fn delta_sweep(name: &str, params: ParamsConfig) -> RunConfig {
    let mut s = scenario(name, params, Some(grid(100.0, 201, 400)), &[Output::Trace]);
    s.sweep = Some(Sweep { param: SweepParam::Delta, from: -2.5, to: 2.5, steps: 101 });
    one(s)
}

fn field_movie(name: &str, params: ParamsConfig) -> RunConfig {
    let mut s = scenario(name, params, Some(grid(100.0, 2001, 400)), &[Output::Trace, Output::Field, Output::BoundStates]);
    s.field = Some(FieldConfig { half_width: 120, every: 10 });
    one(s)
}

fn per_separation(prefix: &str, output: Output) -> RunConfig {
    RunConfig {
        scenarios: [2u32, 4, 12, 30]
            .iter()
            .map(|&d| scenario(&format!("{prefix}_d{d}"), giant(0.0, d), None, &[output]))
            .collect(),
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1b",
        summary: "small-emitter spectral density across the band",
        build: || one(scenario("fig1b", small(0.0), None, &[Output::Density])),
    },
    Preset {
        name: "fig1c",
        summary: "lattice spectrum and bound-state energies versus g0/xi in [0, 1]",
        build: || {
            let mut s = scenario("fig1c", small(0.0), Some(grid(1.0, 2, 100)), &[Output::Spectrum]);
            s.sweep = Some(Sweep { param: SweepParam::G0, from: 0.02, to: 1.0, steps: 50 });
            one(s)
        },
    },
    Preset {
        name: "fig2b",
        summary: "|alpha(t)|^2 heatmap over the detuning sweep -5xi/2..5xi/2, small emitter",
        build: || delta_sweep("fig2b", small(0.0)),
    },
    Preset {
        name: "fig2c",
        summary: "small-emitter traces at Delta in {0, 3xi/2, 2xi} with bound-state profiles",
        build: || RunConfig {
            scenarios: [("fig2c_delta0", 0.0), ("fig2c_delta1.5", 1.5), ("fig2c_delta2", 2.0)]
                .iter()
                .map(|&(n, d)| {
                    scenario(n, small(d), Some(grid(100.0, 1001, 400)), &[Output::Trace, Output::BoundStates, Output::Rates, Output::Entropy])
                })
                .collect(),
        },
    },
    Preset {
        name: "fig3a",
        summary: "propagating field, small emitter at Delta = 3xi/2",
        build: || field_movie("fig3a", small(1.5)),
    },
    Preset {
        name: "fig3b",
        summary: "bound-state formation in the field, small emitter at Delta = 2xi",
        build: || field_movie("fig3b", small(2.0)),
    },
    Preset {
        name: "fig5a",
        summary: "giant-emitter kernel along the band for d in {2, 4, 12, 30}",
        build: || per_separation("fig5a", Output::Kernel),
    },
    Preset {
        name: "fig5b",
        summary: "effective spectral density for d in {2, 4, 12, 30}",
        build: || per_separation("fig5b", Output::Density),
    },
    Preset {
        name: "fig6a",
        summary: "|alpha(t)|^2 heatmap over the detuning sweep, giant emitter d = 2",
        build: || delta_sweep("fig6a", giant(0.0, 2)),
    },
    Preset {
        name: "fig6b",
        summary: "|alpha(t)|^2 heatmap over the detuning sweep, giant emitter d = 12",
        build: || delta_sweep("fig6b", giant(0.0, 12)),
    },
    Preset {
        name: "fig6c",
        summary: "BIC traces for {Delta = 0, d = 2} and {Delta = 2xi cos(5pi/12), d = 12}",
        build: || RunConfig {
            scenarios: vec![
                scenario("fig6c_d2", giant(0.0, 2), Some(grid(100.0, 1001, 400)), &[Output::Trace, Output::BoundStates, Output::Rates]),
                scenario(
                    "fig6c_d12",
                    giant(2.0 * (5.0 * PI / 12.0).cos(), 12),
                    Some(grid(100.0, 1001, 400)),
                    &[Output::Trace, Output::BoundStates, Output::Rates],
                ),
            ],
        },
    },
    Preset {
        name: "fig7a",
        summary: "BIC field formation for {Delta = 2xi cos(5pi/12), d = 12}",
        build: || field_movie("fig7a", giant(2.0 * (5.0 * PI / 12.0).cos(), 12)),
    },
    Preset {
        name: "fig7b",
        summary: "breathing field of the BOC+BIC superposition, {Delta = 2xi cos(pi/12), d = 12}",
        build: || {
            let mut c = field_movie("fig7b", giant(2.0 * (PI / 12.0).cos(), 12));
            c.scenarios[0].outputs.extend([Output::Rates, Output::Entropy]);
            c
        },
    },
    Preset {
        name: "fig7c",
        summary: "quasi-bound oscillating field, {Delta = 2xi, d = 30}",
        build: || field_movie("fig7c", giant(2.0, 30)),
    },
    Preset {
        name: "table1",
        summary: "circuit solved for the reference device and mapped back",
        build: || {
            let mut s = scenario("table1", small(0.0), None, &[Output::Circuit]);
            s.params = None;
            s.circuit = Some(CircuitConfig { elements: None, targets: None, table_check: true });
            one(s)
        },
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        let mut names = BTreeSet::new();
        for p in PRESETS {
            assert!(names.insert(p.name));
            let cfg = (p.build)();
            cfg.check().unwrap();
            for s in &cfg.scenarios {
                if s.params.is_some() {
                    s.model().unwrap();
                }
                if s.grid.is_some() {
                    s.sim_grid().unwrap();
                }
            }
        }
        assert!(find("fig7b").is_some() && find("fig9").is_none());
    }
}
