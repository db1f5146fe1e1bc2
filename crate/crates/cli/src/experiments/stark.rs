//! The polariton-number-dependent ac Stark shift of the spin frequency, with
//! the exact dressed-ladder value alongside the dispersive approximation.

use std::f64::consts::PI;

use crate::config::{Config, ScalarKey, UnitClass};
use crate::output::CsvDocument;
use crate::sweep::{grid_points, run_grid};
use crate::CliResult;
use polsim::dispersive;

const KEYS: &[ScalarKey] = &[
    ScalarKey {
        name: "stark.lambda_plus",
        class: UnitClass::Frequency,
        default: 21991485.75128552, // 2π · 3.5 MHz
    },
    ScalarKey {
        name: "stark.delta",
        class: UnitClass::Frequency,
        default: 219914857.5128552, // 2π · 35 MHz
    },
    ScalarKey {
        name: "stark.n_pl",
        class: UnitClass::Dimensionless,
        default: 1.0,
    },
];

const COLUMNS: &[&str] = &[
    "lambda_plus",
    "delta",
    "zeta",
    "n_pl",
    "zero_point_shift",
    "stark_shift",
    "stark_shift_hz",
    "exact_single_quantum_shift",
    "slope_rel_error",
    "status",
];

pub fn run(cfg: &Config, threads: usize) -> CliResult<CsvDocument> {
    cfg.check_known_keys(&["stark.lambda_plus", "stark.delta", "stark.n_pl"])?;
    let resolved = super::resolve_scalars(cfg, KEYS)?;
    let axes = cfg.sweep_axes(KEYS)?;
    let points = grid_points(&axes);

    let kernel = |point: &crate::sweep::Point| -> Result<Vec<f64>, polsim::Error> {
        let lambda_plus = super::value_of(&resolved, point, "lambda_plus");
        let delta = super::value_of(&resolved, point, "delta");
        let n_pl = super::value_of(&resolved, point, "n_pl");
        let s = dispersive::stark_shift(lambda_plus, delta, n_pl)?;
        let exact = dispersive::stark_shift_exact_jc(lambda_plus, delta);
        let slope = 2.0 * lambda_plus * s.zeta;
        let rel = if exact != 0.0 {
            (slope - exact).abs() / exact
        } else {
            0.0
        };
        Ok(vec![
            lambda_plus,
            delta,
            s.zeta,
            n_pl,
            s.zero_point,
            s.shift,
            s.shift / (2.0 * PI),
            exact,
            rel,
        ])
    };
    let rows = run_grid(&points, COLUMNS.len() - 1, threads, kernel)?;

    let mut doc = CsvDocument::new(COLUMNS);
    super::base_comments(&mut doc, cfg);
    for row in rows {
        doc.push_row(row);
    }
    Ok(doc)
}
