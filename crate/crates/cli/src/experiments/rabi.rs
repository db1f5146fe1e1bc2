//! Vacuum Rabi oscillations between the spin and the low-frequency polariton
//! at resonance, with cavity decay and transversal spin relaxation.

use std::f64::consts::PI;

use crate::config::{Config, ScalarKey, UnitClass};
use crate::output::{Cell, CsvDocument};
use crate::{CliError, CliResult};
use polsim::dynamics::{self, RabiParams};

const KEYS: &[ScalarKey] = &[
    ScalarKey {
        name: "rabi.lambda_plus",
        class: UnitClass::Frequency,
        default: 21991485.75128552, // 2π · 3.5 MHz
    },
    ScalarKey {
        name: "rabi.omega_minus",
        class: UnitClass::Frequency,
        default: 100.0,
    },
    ScalarKey {
        name: "rabi.kappa",
        class: UnitClass::Frequency,
        default: 1.0e6,
    },
    ScalarKey {
        name: "rabi.gamma_perp",
        class: UnitClass::Frequency,
        default: 1.0e3,
    },
];

const COLUMNS: &[&str] = &["t", "p_e", "n_polariton"];

pub fn run(cfg: &Config) -> CliResult<CsvDocument> {
    cfg.check_known_keys(&[
        "rabi.lambda_plus",
        "rabi.omega_minus",
        "rabi.kappa",
        "rabi.gamma_perp",
    ])?;
    if !cfg.sweep.is_empty() {
        return Err(CliError::Config(
            "rabi emits a time series and does not take sweep axes".into(),
        ));
    }
    let resolved = super::resolve_scalars(cfg, KEYS)?;
    let params = RabiParams {
        lambda_plus: resolved["lambda_plus"],
        omega_minus: resolved["omega_minus"],
        kappa: resolved["kappa"],
        gamma_perp: resolved["gamma_perp"],
    };
    if params.lambda_plus <= 0.0 {
        return Err(CliError::Config("rabi.lambda_plus must be > 0".into()));
    }
    let period = PI / params.lambda_plus;
    let t_final = cfg.numerics.t_final.unwrap_or(5.0 * period);
    let max_rate = params
        .lambda_plus
        .max(params.omega_minus)
        .max(params.kappa)
        .max(params.gamma_perp);
    let dt = cfg
        .numerics
        .dt
        .unwrap_or_else(|| dynamics::default_time_step(max_rate));

    let traj = dynamics::rabi_experiment(&params, cfg.numerics.n_max, t_final, dt)?;

    let mut doc = CsvDocument::new(COLUMNS);
    super::base_comments(&mut doc, cfg);
    doc.comment_num("derived.lambda_plus", params.lambda_plus);
    doc.comment_num("derived.rabi_period", period);
    doc.comment_num("derived.t_final", t_final);
    doc.comment_num("derived.dt", dt);
    doc.comment("derived.n_max", cfg.numerics.n_max.to_string());

    let pe = traj
        .series("p_e")
        .expect("series emitted by the experiment");
    let n = traj.series("n_polariton").expect("series emitted");
    for (k, &t) in traj.times.iter().enumerate() {
        doc.push_row(vec![Cell::Num(t), Cell::Num(pe[k]), Cell::Num(n[k])]);
    }
    Ok(doc)
}
