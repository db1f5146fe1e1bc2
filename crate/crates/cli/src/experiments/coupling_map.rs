//! Spin–polariton coupling strengths over the (G_c − G)/ω_m grid for a set
//! of Δ_a/ω_m ratios, in long format: one surface row per (ratio, gap) pair.

use crate::config::{grid_log, Config, ScalarKey, SweepAxis, UnitClass};
use crate::output::CsvDocument;
use crate::sweep::{grid_points, run_grid};
use crate::CliResult;
use polsim::polariton;

const KEYS: &[ScalarKey] = &[
    ScalarKey {
        name: "coupling_map.lambda",
        class: UnitClass::Frequency,
        default: 43982.29715025711, // 2π · 7 kHz
    },
    ScalarKey {
        name: "coupling_map.omega_m",
        class: UnitClass::Frequency,
        default: 1.0e7,
    },
    ScalarKey {
        name: "coupling_map.gap_over_omega_m",
        class: UnitClass::Dimensionless,
        default: 1.0e-3,
    },
];

const COLUMNS: &[&str] = &[
    "delta_a_over_omega_m",
    "gap_over_omega_m",
    "g_lin",
    "omega_minus",
    "omega_minus_over_delta_a",
    "lambda_plus",
    "lambda_minus",
    "eta_plus",
    "eta_minus",
    "status",
];

pub fn run(cfg: &Config, threads: usize) -> CliResult<CsvDocument> {
    cfg.check_known_keys(&[
        "coupling_map.lambda",
        "coupling_map.omega_m",
        "coupling_map.gap_over_omega_m",
        "coupling_map.delta_a_ratios",
    ])?;
    let resolved = super::resolve_scalars(cfg, KEYS)?;
    let ratios = cfg.scalar_list(
        "coupling_map.delta_a_ratios",
        UnitClass::Dimensionless,
        &[1.0, 10.0],
    )?;

    let mut axes = vec![SweepAxis {
        name: "delta_a_over_omega_m".into(),
        values: ratios,
    }];
    let user_axes = cfg.sweep_axes(KEYS)?;
    if user_axes.is_empty() {
        axes.push(SweepAxis {
            name: "gap_over_omega_m".into(),
            values: grid_log(1.0e-6, 0.3, 49),
        });
    } else {
        axes.extend(user_axes);
    }
    let points = grid_points(&axes);

    let lambda = resolved["lambda"];
    let kernel = |point: &crate::sweep::Point| -> Result<Vec<f64>, polsim::Error> {
        let omega_m = super::value_of(&resolved, point, "omega_m");
        let ratio = point["delta_a_over_omega_m"];
        let gap = super::value_of(&resolved, point, "gap_over_omega_m");
        let delta_a = ratio * omega_m;
        let g_c = polariton::critical_coupling(delta_a, omega_m)?;
        let g_lin = g_c - gap * omega_m;
        if g_lin < 0.0 {
            return Err(polsim::Error::InvalidInput(format!(
                "gap {gap} pushes the coupling below zero"
            )));
        }
        let (wp, wm) = polariton::polariton_frequencies(delta_a, omega_m, g_lin)?;
        let c = polariton::spin_polariton_couplings(lambda, delta_a, omega_m, g_lin)?;
        let _ = wp;
        Ok(vec![
            ratio,
            gap,
            g_lin,
            wm,
            wm / delta_a,
            c.lambda_plus,
            c.lambda_minus,
            c.eta_plus,
            c.eta_minus,
        ])
    };
    let rows = run_grid(&points, COLUMNS.len() - 1, threads, kernel)?;

    let mut doc = CsvDocument::new(COLUMNS);
    super::base_comments(&mut doc, cfg);
    doc.comment_num("derived.lambda", lambda);
    doc.comment_num("derived.omega_m", resolved["omega_m"]);
    for row in rows {
        doc.push_row(row);
    }
    Ok(doc)
}
