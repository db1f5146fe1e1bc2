//! Driven classical steady state of the electromechanical subsystem, plus the
//! geometric spin-cavity coupling estimate and bath occupations.

use crate::config::{Config, ScalarKey, UnitClass};
use crate::output::CsvDocument;
use crate::sweep::{grid_points, run_grid};
use crate::CliResult;
use polsim::meanfield::{self, SystemParams};
use polsim::PhysicalConstants;

const KEYS: &[ScalarKey] = &[
    ScalarKey {
        name: "params.omega_a",
        class: UnitClass::Frequency,
        default: 12566370614.359172,
    },
    ScalarKey {
        name: "params.omega_m",
        class: UnitClass::Frequency,
        default: 1.0e7,
    },
    ScalarKey {
        name: "params.omega_d",
        class: UnitClass::Frequency,
        default: 12466370614.359172,
    },
    ScalarKey {
        name: "params.g",
        class: UnitClass::Frequency,
        default: 628.3185307179587,
    },
    ScalarKey {
        name: "params.kappa",
        class: UnitClass::Frequency,
        default: 1.0e6,
    },
    ScalarKey {
        name: "params.gamma_m",
        class: UnitClass::Frequency,
        default: 10.0,
    },
    ScalarKey {
        name: "params.drive_amp",
        class: UnitClass::Frequency,
        default: 0.0,
    },
    ScalarKey {
        name: "params.spin_drive_amp",
        class: UnitClass::Frequency,
        default: 0.0,
    },
    ScalarKey {
        name: "params.omega_nv",
        class: UnitClass::Frequency,
        default: 18033038577.63206,
    },
    ScalarKey {
        name: "params.lambda",
        class: UnitClass::Frequency,
        default: 43982.29715025711,
    },
    ScalarKey {
        name: "params.gamma_perp",
        class: UnitClass::Frequency,
        default: 1.0e3,
    },
    ScalarKey {
        name: "params.gamma_par",
        class: UnitClass::Frequency,
        default: 0.0,
    },
    ScalarKey {
        name: "params.inductance",
        class: UnitClass::Si,
        default: 2.0e-9,
    },
    ScalarKey {
        name: "params.distance",
        class: UnitClass::Si,
        default: 50.0e-9,
    },
    ScalarKey {
        name: "params.temperature",
        class: UnitClass::Si,
        default: 0.02,
    },
    ScalarKey {
        name: "params.quality",
        class: UnitClass::Dimensionless,
        default: 3.0e4,
    },
];

const COLUMNS: &[&str] = &[
    "drive_amp",
    "a_mean_re",
    "a_mean_im",
    "photon_number",
    "detuning",
    "g_lin",
    "residual",
    "lambda_geometric",
    "n_th_cavity",
    "n_th_mech",
    "status",
];

fn params_from(map: &std::collections::BTreeMap<String, f64>) -> SystemParams {
    SystemParams {
        omega_a: map["omega_a"],
        omega_m: map["omega_m"],
        omega_d: map["omega_d"],
        g: map["g"],
        kappa: map["kappa"],
        gamma_m: map["gamma_m"],
        drive_amp: map["drive_amp"],
        spin_drive_amp: map["spin_drive_amp"],
        omega_nv: map["omega_nv"],
        lambda: map["lambda"],
        gamma_perp: map["gamma_perp"],
        gamma_par: map["gamma_par"],
        inductance: map["inductance"],
        distance: map["distance"],
        temperature: map["temperature"],
        quality: map["quality"],
    }
}

pub fn run(cfg: &Config, threads: usize) -> CliResult<CsvDocument> {
    let known: Vec<&str> = KEYS.iter().map(|k| k.name).collect();
    cfg.check_known_keys(&known)?;
    let resolved = super::resolve_scalars(cfg, KEYS)?;
    let tol = cfg.numerics.tol;
    let constants = PhysicalConstants::default();

    let axes = cfg.sweep_axes(KEYS)?;
    let points = grid_points(&axes);

    let kernel = |point: &crate::sweep::Point| -> Result<Vec<f64>, polsim::Error> {
        let mut map = resolved.clone();
        for (name, value) in point {
            map.insert(name.clone(), *value);
        }
        let p = params_from(&map);
        let mf = meanfield::solve_mean_fields(&p, tol)?;
        let lambda_geo =
            meanfield::coupling_estimate(p.distance, p.omega_a, p.inductance, &constants)?;
        let n_th_cavity = meanfield::thermal_occupation(p.omega_a, p.temperature)?;
        let n_th_mech = meanfield::thermal_occupation(p.omega_m, p.temperature)?;
        Ok(vec![
            p.drive_amp,
            mf.a_mean.re,
            mf.a_mean.im,
            mf.photon_number,
            mf.detuning,
            mf.coupling,
            mf.residual,
            lambda_geo,
            n_th_cavity,
            n_th_mech,
        ])
    };
    let rows = run_grid(&points, COLUMNS.len() - 1, threads, kernel)?;

    let mut doc = CsvDocument::new(COLUMNS);
    super::base_comments(&mut doc, cfg);
    doc.comment_num("derived.tol", tol);
    for row in rows {
        doc.push_row(row);
    }
    Ok(doc)
}
