//! Polariton branch frequencies versus the linearized coupling: the
//! normal-mode softening toward the critical point.

use crate::config::{grid_linear, Config, ScalarKey, SweepAxis, UnitClass};
use crate::output::CsvDocument;
use crate::sweep::{grid_points, run_grid};
use crate::CliResult;
use polsim::polariton;

const KEYS: &[ScalarKey] = &[
    ScalarKey {
        name: "spectrum.delta_a",
        class: UnitClass::Frequency,
        default: 1.0e7,
    },
    ScalarKey {
        name: "spectrum.omega_m",
        class: UnitClass::Frequency,
        default: 1.0e7,
    },
    ScalarKey {
        name: "spectrum.g_over_omega_m",
        class: UnitClass::Dimensionless,
        default: 0.0,
    },
    ScalarKey {
        name: "spectrum.g_lin",
        class: UnitClass::Frequency,
        default: f64::NAN,
    },
];

const COLUMNS: &[&str] = &[
    "g_over_omega_m",
    "g_lin",
    "omega_minus",
    "omega_plus",
    "status",
];

pub fn run(cfg: &Config, threads: usize) -> CliResult<CsvDocument> {
    cfg.check_known_keys(&[
        "spectrum.delta_a",
        "spectrum.omega_m",
        "spectrum.g_over_omega_m",
        "spectrum.g_lin",
    ])?;
    let resolved = super::resolve_scalars(cfg, KEYS)?;

    let mut axes = cfg.sweep_axes(KEYS)?;
    if axes.is_empty() {
        axes.push(SweepAxis {
            name: "g_over_omega_m".into(),
            values: grid_linear(0.0, 0.5, 101),
        });
    }
    let points = grid_points(&axes);

    let kernel = |point: &crate::sweep::Point| -> Result<Vec<f64>, polsim::Error> {
        let delta_a = super::value_of(&resolved, point, "delta_a");
        let omega_m = super::value_of(&resolved, point, "omega_m");
        let g_lin = match point.get("g_lin") {
            Some(&g) => g,
            None => super::value_of(&resolved, point, "g_over_omega_m") * omega_m,
        };
        let (wp, wm) = polariton::polariton_frequencies(delta_a, omega_m, g_lin)?;
        Ok(vec![g_lin / omega_m, g_lin, wm, wp])
    };
    let rows = run_grid(&points, COLUMNS.len() - 1, threads, kernel)?;

    let mut doc = CsvDocument::new(COLUMNS);
    super::base_comments(&mut doc, cfg);
    super::emit_polariton_derived(&mut doc, resolved["delta_a"], resolved["omega_m"], 0.0, 0.0)?;
    for row in rows {
        doc.push_row(row);
    }
    Ok(doc)
}
