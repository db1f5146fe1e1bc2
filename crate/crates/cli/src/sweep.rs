//! Cartesian sweep engine: lexicographic row order in axis order, pure
//! kernels evaluated (optionally in parallel) with per-point errors recorded
//! as status rows instead of aborting the grid.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::config::SweepAxis;
use crate::output::Cell;
use crate::CliResult;
use polsim::Error;

/// A single grid point: parameter name → value.
pub type Point = BTreeMap<String, f64>;

/// Expand axes into the full grid, last axis fastest (lexicographic order).
pub fn grid_points(axes: &[SweepAxis]) -> Vec<Point> {
    let mut points = vec![Point::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.values.len());
        for base in &points {
            for &v in &axis.values {
                let mut p = base.clone();
                p.insert(axis.name.clone(), v);
                next.push(p);
            }
        }
        points = next;
    }
    points
}

/// Map a physics error to its status token.
pub fn status_of(err: &Error) -> &'static str {
    match err {
        Error::UnstableRegime { .. } => "unstable",
        Error::SingularCoupling => "singular",
        Error::NonDispersive { .. } => "nondispersive",
        Error::NonConvergence(_) => "nonconvergent",
        Error::TruncationTooSmall { .. } => "truncated",
        _ => "error",
    }
}

/// Evaluate `kernel` on every point. A point's numeric columns come back as
/// `Cell::Num`; kernel errors yield empty numeric cells and the error's
/// status token. The status column is appended last.
pub fn run_grid<K>(
    points: &[Point],
    n_value_columns: usize,
    threads: usize,
    kernel: K,
) -> CliResult<Vec<Vec<Cell>>>
where
    K: Fn(&Point) -> Result<Vec<f64>, Error> + Sync,
{
    let eval = |point: &Point| -> Vec<Cell> {
        match kernel(point) {
            Ok(values) => {
                debug_assert_eq!(values.len(), n_value_columns);
                let mut row: Vec<Cell> = values.into_iter().map(Cell::Num).collect();
                row.push(Cell::Text("ok".into()));
                row
            }
            Err(err) => {
                let mut row = vec![Cell::Empty; n_value_columns];
                row.push(Cell::Text(status_of(&err).into()));
                row
            }
        }
    };

    let rows = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::CliError::Config(format!("thread pool: {e}")))?;
        pool.install(|| points.par_iter().map(eval).collect())
    } else {
        points.iter().map(eval).collect()
    };
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(name: &str, values: &[f64]) -> SweepAxis {
        SweepAxis {
            name: name.into(),
            values: values.to_vec(),
        }
    }

    #[test]
    fn grid_is_lexicographic_last_axis_fastest() {
        let axes = vec![axis("a", &[1.0, 2.0]), axis("b", &[10.0, 20.0, 30.0])];
        let points = grid_points(&axes);
        assert_eq!(points.len(), 6);
        let flat: Vec<(f64, f64)> = points.iter().map(|p| (p["a"], p["b"])).collect();
        assert_eq!(
            flat,
            vec![
                (1.0, 10.0),
                (1.0, 20.0),
                (1.0, 30.0),
                (2.0, 10.0),
                (2.0, 20.0),
                (2.0, 30.0)
            ]
        );
    }

    #[test]
    fn errors_become_status_rows() {
        let points = grid_points(&[axis("x", &[1.0, -1.0, 2.0])]);
        let rows = run_grid(&points, 1, 1, |p| {
            let x = p["x"];
            if x < 0.0 {
                Err(Error::UnstableRegime { omega_minus_sq: x })
            } else {
                Ok(vec![x * x])
            }
        })
        .unwrap();
        assert_eq!(rows[0], vec![Cell::Num(1.0), Cell::Text("ok".into())]);
        assert_eq!(rows[1], vec![Cell::Empty, Cell::Text("unstable".into())]);
        assert_eq!(rows[2], vec![Cell::Num(4.0), Cell::Text("ok".into())]);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let points = grid_points(&[axis("x", &[0.5, 1.5, 2.5, 3.5])]);
        let kernel = |p: &Point| Ok(vec![p["x"].sin()]);
        let serial = run_grid(&points, 1, 1, kernel).unwrap();
        let parallel = run_grid(&points, 1, 4, kernel).unwrap();
        assert_eq!(serial, parallel);
    }
}
