use rayon::prelude::*;

use super::block::{build_block, eigenvalues, HamiltonianBlock, DEFAULT_EIG_TOL};
use super::{SectorLabel, Spectrum, SpectrumEntry};
use crate::algebra::decompose;
use crate::error::{Error, Result};
use crate::exact::Shift;
use crate::half::Half;
use crate::quasispin::{build_j_block, multiplicities, ModelParams};

/// Degeneracies are counted in `u64`, so `2^N` must fit.
pub const MAX_ASSEMBLED_PARTICLES: usize = 62;

fn check_assembled(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ASSEMBLED_PARTICLES {
        return Err(Error::ParticleNumber { n, max: MAX_ASSEMBLED_PARTICLES });
    }
    Ok(())
}

/// The split blocks of every sector, `j` descending, each with its `m_j`.
pub fn sector_blocks(params: &ModelParams) -> Result<Vec<(HamiltonianBlock, u64)>> {
    check_assembled(params.n_particles)?;
    let mut out = Vec::new();
    for m in multiplicities(params.n_particles) {
        for rep in decompose(m.j, params.n_particles)? {
            out.push((build_block(&rep, params)?, m.multiplicity));
        }
    }
    Ok(out)
}

/// Spectrum from the `(J, c)` blocks of every multiplet, each eigenvalue
/// repeated `m_j` times.
pub fn full_spectrum(params: &ModelParams) -> Result<Spectrum> {
    let mut entries = Vec::new();
    for (block, mult) in sector_blocks(params)? {
        let label = SectorLabel::Rep { j: block.rep.j, big_j: block.rep.big_j, c: block.rep.c };
        for energy in eigenvalues(&block, DEFAULT_EIG_TOL)? {
            entries.push(SpectrumEntry { energy, degeneracy: mult, label });
        }
    }
    Ok(Spectrum::new(entries))
}

/// Spectrum from the unsplit `(2j+1)`-dimensional multiplet blocks.
pub fn jblock_spectrum(params: &ModelParams) -> Result<Spectrum> {
    check_assembled(params.n_particles)?;
    let mut entries = Vec::new();
    for m in multiplicities(params.n_particles) {
        let label = SectorLabel::Multiplet { j: m.j };
        for energy in build_j_block(m.j, params)?.eigenvalues()? {
            entries.push(SpectrumEntry { energy, degeneracy: m.multiplicity, label });
        }
    }
    Ok(Spectrum::new(entries))
}

/// Eigenvalues of one `(j, J, c)` block at one grid point, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub j: Half,
    pub big_j: Half,
    pub c: Shift,
    pub eigenvalues: Vec<f64>,
}

/// Block eigenvalues at every `δ` in `grid`.
///
/// Rows come in grid order and, within a grid point, in sector order
/// (`j`, `J`, `c` descending), whatever the thread schedule.
pub fn sweep(params: &ModelParams, grid: &[f64]) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty delta grid".into()));
    }
    check_assembled(params.n_particles)?;
    let per_point: Vec<Result<Vec<SweepRow>>> = grid
        .par_iter()
        .map(|&delta| {
            let p = params.with_delta(delta)?;
            let mut rows = Vec::new();
            for (block, _) in sector_blocks(&p)? {
                rows.push(SweepRow {
                    delta,
                    j: block.rep.j,
                    big_j: block.rep.big_j,
                    c: block.rep.c,
                    eigenvalues: eigenvalues(&block, DEFAULT_EIG_TOL)?,
                });
            }
            rows.sort_by(|a, b| {
                let la = SectorLabel::Rep { j: a.j, big_j: a.big_j, c: a.c };
                let lb = SectorLabel::Rep { j: b.j, big_j: b.big_j, c: b.c };
                la.cmp(&lb)
            });
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_point {
        out.extend(rows?);
    }
    Ok(out)
}

/// `steps + 1` evenly spaced points from `min` to `max` inclusive; a single
/// point when `min == max`.
pub fn delta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || min < 0.0 || min > max {
        return Err(Error::InvalidArgument(format!("need 0 <= delta_min <= delta_max, got {min}..{max}")));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    if min == max {
        return Ok(vec![min]);
    }
    let width = max - min;
    Ok((0..=steps)
        .map(|i| if i == steps { max } else { min + width * i as f64 / steps as f64 })
        .collect())
}
