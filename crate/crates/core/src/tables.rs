//! Eigenvalue tables per `(j, J)` with the known closed forms for `N = 7, 8`.
//!
//! A row collects every block with the same `j` and `J`; for odd `N` that is
//! the `c = ±1/4` pair. Nested radicals `±√(A ± √B)` expand to four values.

use crate::error::Result;
use crate::half::Half;
use crate::quasispin::{multiplicities, ModelParams};
use crate::spectra::{eigenvalues, sector_blocks, DEFAULT_EIG_TOL};

/// A closed form: its printed expression and an evaluator returning the
/// eigenvalues at a given `δ`, ascending.
#[derive(Clone, Copy, Debug)]
pub struct ClosedForm {
    pub expression: &'static str,
    eval: fn(f64) -> Vec<f64>,
}

impl ClosedForm {
    pub fn evaluate(&self, delta: f64) -> Vec<f64> {
        let mut v = (self.eval)(delta);
        v.sort_by(f64::total_cmp);
        v
    }
}

fn pm(x: f64) -> Vec<f64> {
    vec![-x, x]
}

fn nested(a: f64, b: f64) -> Vec<f64> {
    let r = b.sqrt();
    let mut v = pm((a + r).sqrt());
    v.extend(pm((a - r).sqrt()));
    v
}

fn with_zero(mut v: Vec<f64>) -> Vec<f64> {
    v.push(0.0);
    v
}

/// Closed form for `(N, j, J)`, where one is known.
pub fn closed_form(n: usize, j: Half, big_j: Half) -> Option<ClosedForm> {
    let cf = |expression, eval| Some(ClosedForm { expression, eval });
    match (n, j.twice(), big_j.twice()) {
        (7, 1, 0) => cf("±1/2", |_| pm(0.5)),
        (7, 3, 1) => cf("±(1/2 ± sqrt(1 + 3/49 delta^2))", |d| {
            let r = (1.0 + 3.0 / 49.0 * d * d).sqrt();
            vec![0.5 + r, 0.5 - r, -0.5 + r, -0.5 - r]
        }),
        (8, 0, 0) | (8, 2, 0) => cf("0", |_| vec![0.0]),
        (8, 2, 1) => cf("±sqrt(1 + 1/64 delta^2)", |d| pm((1.0 + d * d / 64.0).sqrt())),
        (8, 4, 1) => cf("±sqrt(1 + 9/64 delta^2)", |d| pm((1.0 + 9.0 * d * d / 64.0).sqrt())),
        (8, 4, 2) => cf("0, ±sqrt(4 + 3/16 delta^2)", |d| with_zero(pm((4.0 + 3.0 * d * d / 16.0).sqrt()))),
        (8, 6, 2) => cf("0, ±sqrt(4 + 15/16 delta^2)", |d| with_zero(pm((4.0 + 15.0 * d * d / 16.0).sqrt()))),
        (8, 6, 3) => cf("±sqrt(5 + 33/64 delta^2 ± sqrt(16 + 3/2 delta^2 + 27/128 delta^4))", |d| {
            let t = d * d;
            nested(5.0 + 33.0 / 64.0 * t, 16.0 + 1.5 * t + 27.0 / 128.0 * t * t)
        }),
        (8, 8, 3) => cf("±sqrt(5 + 113/64 delta^2 ± sqrt(16 + 19/2 delta^2 + 275/128 delta^4))", |d| {
            let t = d * d;
            nested(5.0 + 113.0 / 64.0 * t, 16.0 + 9.5 * t + 275.0 / 128.0 * t * t)
        }),
        (8, 8, 4) => cf("0, ±sqrt(10 + 59/32 delta^2 ± sqrt(36 - 9/8 delta^2 + 2025/1024 delta^4))", |d| {
            let t = d * d;
            with_zero(nested(10.0 + 59.0 / 32.0 * t, 36.0 - 9.0 / 8.0 * t + 2025.0 / 1024.0 * t * t))
        }),
        _ => None,
    }
}

/// One `(j, J)` row evaluated at a given `δ`.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub j: Half,
    pub multiplicity: u64,
    pub big_j: Half,
    /// Block eigenvalues of every `c` with this `(j, J)`, ascending.
    pub eigenvalues: Vec<f64>,
    pub closed_form: Option<ClosedForm>,
}

impl TableRow {
    pub fn closed_form_values(&self, delta: f64) -> Option<Vec<f64>> {
        self.closed_form.map(|cf| cf.evaluate(delta))
    }
}

/// Rows for every `(j, J)` in increasing `j`, then increasing `J`.
pub fn table_rows(params: &ModelParams) -> Result<Vec<TableRow>> {
    let n = params.n_particles;
    let mut rows: Vec<TableRow> = Vec::new();
    for (block, mult) in sector_blocks(params)? {
        let vals = eigenvalues(&block, DEFAULT_EIG_TOL)?;
        let (j, big_j) = (block.rep.j, block.rep.big_j);
        match rows.iter_mut().find(|r| r.j == j && r.big_j == big_j) {
            Some(r) => r.eigenvalues.extend(vals),
            None => rows.push(TableRow {
                j,
                multiplicity: mult,
                big_j,
                eigenvalues: vals,
                closed_form: closed_form(n, j, big_j),
            }),
        }
    }
    for r in &mut rows {
        r.eigenvalues.sort_by(f64::total_cmp);
    }
    rows.sort_by(|a, b| a.j.cmp(&b.j).then(a.big_j.cmp(&b.big_j)));
    debug_assert!(rows.iter().all(|r| multiplicities(n).iter().any(|m| m.j == r.j)));
    Ok(rows)
}
