//! The experiment registry: each experiment resolves its inputs from the
//! configuration, evaluates a kernel (over a sweep grid where that makes
//! sense), and emits a CSV document with the resolved and derived parameters
//! in the comment block.

mod coupling_map;
mod iswap;
mod meanfield;
mod rabi;
mod spectrum;
mod stark;

use std::collections::BTreeMap;

use crate::config::{Config, ExperimentKind, ScalarKey};
use crate::output::CsvDocument;
use crate::sweep::Point;
use crate::{CliError, CliResult};
use polsim::polariton;

pub fn run_experiment(cfg: &Config, threads: usize) -> CliResult<CsvDocument> {
    match cfg.experiment {
        ExperimentKind::Spectrum => spectrum::run(cfg, threads),
        ExperimentKind::CouplingMap => coupling_map::run(cfg, threads),
        ExperimentKind::Rabi => rabi::run(cfg),
        ExperimentKind::Iswap => iswap::run(cfg),
        ExperimentKind::Stark => stark::run(cfg, threads),
        ExperimentKind::Meanfield => meanfield::run(cfg, threads),
    }
}

/// Header comments shared by every experiment: tool id, experiment name, and
/// the raw configuration echo (sorted, so output is byte-stable).
pub(crate) fn base_comments(doc: &mut CsvDocument, cfg: &Config) {
    doc.comment("generator", format!("sim {}", env!("CARGO_PKG_VERSION")));
    doc.comment("experiment", cfg.experiment.name());
    doc.comment(
        "units",
        match cfg.units {
            crate::config::UnitMode::Angular => "angular",
            crate::config::UnitMode::Hertz => "hertz",
        },
    );
    doc.comment(
        "note",
        "resolved and derived values below are angular (rad/s)",
    );
    for (key, value) in cfg.echo_pairs() {
        doc.comment(&format!("config.{key}"), value);
    }
}

/// Resolve a set of scalar keys into short-name → value, ready to be
/// overlaid by sweep-point values.
pub(crate) fn resolve_scalars(
    cfg: &Config,
    keys: &[ScalarKey],
) -> CliResult<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for key in keys {
        let short = key.name.split('.').next_back().expect("dotted key");
        map.insert(short.to_string(), cfg.scalar(key)?);
    }
    Ok(map)
}

/// Value lookup for a kernel: sweep-point value if the axis covers it, else
/// the resolved scalar.
pub(crate) fn value_of(resolved: &BTreeMap<String, f64>, point: &Point, name: &str) -> f64 {
    point.get(name).copied().unwrap_or_else(|| resolved[name])
}

/// Emit the derived polariton frame into the comment block, re-checking the
/// spectral trace and determinant identities at emission.
pub(crate) fn emit_polariton_derived(
    doc: &mut CsvDocument,
    delta_a: f64,
    omega_m: f64,
    g_lin: f64,
    lambda: f64,
) -> CliResult<()> {
    let g_c = polariton::critical_coupling(delta_a, omega_m)?;
    let (wp, wm) = polariton::polariton_frequencies(delta_a, omega_m, g_lin)?;
    let s = delta_a * delta_a + omega_m * omega_m;
    let trace_defect = (wp * wp + wm * wm - s).abs();
    let det = delta_a * omega_m * (delta_a * omega_m - 4.0 * g_lin * g_lin);
    let det_defect = (wp * wp * wm * wm - det).abs();
    if trace_defect > 1e-10 * s || det_defect > 1e-8 * s * s {
        return Err(CliError::Physics(polsim::Error::InvalidInput(format!(
            "derived spectrum violates its identities (trace defect {trace_defect:e}, \
             determinant defect {det_defect:e})"
        ))));
    }
    doc.comment_num("derived.delta_a", delta_a);
    doc.comment_num("derived.omega_m", omega_m);
    doc.comment_num("derived.g_lin", g_lin);
    doc.comment_num("derived.g_c", g_c);
    doc.comment_num("derived.omega_plus", wp);
    doc.comment_num("derived.omega_minus", wm);
    if wm > 0.0 && lambda > 0.0 {
        let c = polariton::spin_polariton_couplings(lambda, delta_a, omega_m, g_lin)?;
        doc.comment_num("derived.lambda_plus", c.lambda_plus);
        doc.comment_num("derived.lambda_minus", c.lambda_minus);
        doc.comment_num("derived.eta_plus", c.eta_plus);
        doc.comment_num("derived.eta_minus", c.eta_minus);
    }
    Ok(())
}
