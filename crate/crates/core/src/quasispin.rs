//! su(2) quasi-spin structure of the two-level model.
//!
//! The 2^N configuration space splits into multiplets of the total quasi-spin
//! `j`. Inside a multiplet the Hamiltonian `ε j0 + V (j+² + j-²)` only couples
//! `m` to `m ± 2`. All energies here are in units of `ε`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exact::{q_int, Q};
use crate::half::Half;

/// Particle number, level splitting and dimensionless strength `δ`.
///
/// The pair interaction is `V = δ ε / (2N)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n_particles: usize,
    pub epsilon: f64,
    pub delta: f64,
}

impl ModelParams {
    pub fn new(n_particles: usize, epsilon: f64, delta: f64) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::ParticleNumber { n: 0, max: usize::MAX });
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
        }
        Ok(ModelParams { n_particles, epsilon, delta })
    }

    /// Dimensionless model with `ε = 1`.
    pub fn reduced(n_particles: usize, delta: f64) -> Result<Self> {
        Self::new(n_particles, 1.0, delta)
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.n_particles, self.epsilon, delta)
    }

    /// `V` in absolute energy units.
    pub fn interaction(&self) -> f64 {
        self.delta * self.epsilon / (2.0 * self.n_particles as f64)
    }

    /// `V / ε = δ / 2N`.
    pub fn reduced_interaction(&self) -> f64 {
        self.delta / (2.0 * self.n_particles as f64)
    }

    pub fn max_j(&self) -> Half {
        Half::from_twice(self.n_particles as i64)
    }

    /// Checks that `j` occurs for this particle number.
    pub fn check_sector(&self, j: Half) -> Result<()> {
        check_sector(self.n_particles, j)
    }
}

pub(crate) fn check_sector(n: usize, j: Half) -> Result<()> {
    let top = Half::from_twice(n as i64);
    if j.twice() < 0 || j > top || !j.same_parity(top) {
        return Err(Error::InvalidSector { j, n });
    }
    Ok(())
}

/// One su(2) sector: `multiplicity` copies of a `2j+1` dimensional multiplet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JMultiplet {
    pub j: Half,
    pub multiplicity: u64,
}

impl JMultiplet {
    pub fn dimension(&self) -> usize {
        (self.j.twice() + 1) as usize
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Multiplets of `N` spin-1/2 quasi-particles, largest `j` first.
///
/// `m_j = C(N, N/2 - j) - C(N, N/2 - j - 1)`.
pub fn multiplicities(n: usize) -> Vec<JMultiplet> {
    let n = n as u64;
    (0..=n / 2)
        .map(|k| {
            let count = binomial(n, k) - if k == 0 { 0 } else { binomial(n, k - 1) };
            JMultiplet {
                j: Half::from_twice((n - 2 * k) as i64),
                multiplicity: count as u64,
            }
        })
        .collect()
}

fn check_projection(j: Half, m: Half) -> Result<()> {
    if j.twice() < 0 || m.abs() > j || !m.same_parity(j) {
        return Err(Error::ProjectionOutOfRange { j, m });
    }
    Ok(())
}

/// `⟨j, m+2| j+² |j, m⟩²` as an exact integer.
pub fn jplus2_element_sq(j: Half, m: Half) -> Result<Q> {
    check_projection(j, m)?;
    if (m + Half::from_int(2)) > j {
        return Ok(q_int(0));
    }
    let (tj, tm) = (i128::from(j.twice()), i128::from(m.twice()));
    // each factor is (2j ± 2m + const) / 2
    let p = (tj - tm - 2) * (tj - tm) * (tj + tm + 2) * (tj + tm + 4);
    Ok(Q::new(p, 16))
}

/// `⟨j, m+2| j+² |j, m⟩ = √((j-m-1)(j-m)(j+m+1)(j+m+2))`.
pub fn jplus2_element(j: Half, m: Half) -> Result<f64> {
    let sq = jplus2_element_sq(j, m)?;
    Ok(crate::exact::q_to_f64(&sq).sqrt())
}

/// The Hamiltonian restricted to one `j` multiplet, basis `m = -j, ..., j`.
#[derive(Clone, Debug)]
pub struct JBlock {
    pub j: Half,
    pub params: ModelParams,
    pub matrix: DMatrix<f64>,
}

/// Builds the dense `(2j+1)`-dimensional block in units of `ε`.
pub fn build_j_block(j: Half, params: &ModelParams) -> Result<JBlock> {
    params.check_sector(j)?;
    let dim = (j.twice() + 1) as usize;
    let coupling = params.reduced_interaction();
    let ms: Vec<Half> = (0..dim).map(|i| Half::from_twice(-j.twice() + 2 * i as i64)).collect();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (i, m) in ms.iter().enumerate() {
        matrix[(i, i)] = m.to_f64();
        if i + 2 < dim {
            let v = coupling * jplus2_element(j, *m)?;
            matrix[(i + 2, i)] = v;
            matrix[(i, i + 2)] = v;
        }
    }
    Ok(JBlock { j, params: *params, matrix })
}

impl JBlock {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in units of `ε`, ascending, from a dense symmetric solve.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        dense_symmetric_eigenvalues(&self.matrix)
    }
}

pub(crate) fn dense_symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = m.nrows();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let eig = m.clone().try_symmetric_eigen(f64::EPSILON, 0).ok_or_else(|| Error::NoConvergence {
        dim,
        detail: format!("frobenius norm {:.3e}", m.norm()),
    })?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn h(twice: i64) -> Half {
        Half::from_twice(twice)
    }

    #[test]
    fn multiplicities_n7_n8_n1() {
        let pairs = |n| {
            multiplicities(n).iter().map(|m| (m.j.twice(), m.multiplicity)).collect::<Vec<_>>()
        };
        assert_eq!(pairs(7), vec![(7, 1), (5, 6), (3, 14), (1, 14)]);
        assert_eq!(pairs(8), vec![(8, 1), (6, 7), (4, 20), (2, 28), (0, 14)]);
        assert_eq!(pairs(1), vec![(1, 1)]);
    }

    #[test]
    fn multiplicity_sum_rule() {
        for n in 1..=40usize {
            let total: u128 = multiplicities(n)
                .iter()
                .map(|m| u128::from(m.multiplicity) * m.dimension() as u128)
                .sum();
            assert_eq!(total, 1u128 << n, "N = {n}");
            assert!(multiplicities(n).iter().all(|m| m.multiplicity >= 1));
            assert_eq!(multiplicities(n)[0].multiplicity, 1);
        }
    }

    #[test]
    fn jplus2_examples() {
        // two su(2) steps √3 · 2
        assert_abs_diff_eq!(jplus2_element(h(3), h(-3)).unwrap(), 2.0 * 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(jplus2_element(h(2), h(-2)).unwrap(), 2.0, epsilon = 1e-15);
        assert_eq!(jplus2_element(h(1), h(-1)).unwrap(), 0.0);
        assert_eq!(jplus2_element(h(4), h(4)).unwrap(), 0.0);
        assert!(jplus2_element(h(3), h(5)).is_err());
        assert!(jplus2_element(h(3), h(0)).is_err());
    }

    #[test]
    fn jplus2_composes_single_steps() {
        let step = |j: f64, m: f64| ((j - m) * (j + m + 1.0)).sqrt();
        for tj in 0..12i64 {
            for tm in (-tj..=tj - 4).step_by(2) {
                let (j, m) = (tj as f64 / 2.0, tm as f64 / 2.0);
                let expect = step(j, m) * step(j, m + 1.0);
                assert_abs_diff_eq!(jplus2_element(h(tj), h(tm)).unwrap(), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spin_half_block() {
        for delta in [0.0, 1.0, 7.5] {
            let p = ModelParams::reduced(7, delta).unwrap();
            let e = build_j_block(h(1), &p).unwrap().eigenvalues().unwrap();
            assert_eq!(e, vec![-0.5, 0.5]);
        }
    }

    #[test]
    fn j1_block_n8() {
        for delta in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let p = ModelParams::reduced(8, delta).unwrap();
            let e = build_j_block(h(2), &p).unwrap().eigenvalues().unwrap();
            let r = (1.0 + delta * delta / 64.0).sqrt();
            assert_abs_diff_eq!(e[0], -r, epsilon = 1e-12);
            assert_abs_diff_eq!(e[1], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e[2], r, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_coupling_is_diagonal() {
        let p = ModelParams::reduced(9, 0.0).unwrap();
        for tj in (1..=9).step_by(2) {
            let e = build_j_block(h(tj), &p).unwrap().eigenvalues().unwrap();
            let want: Vec<f64> = (0..=tj).map(|i| (-tj + 2 * i) as f64 / 2.0).collect();
            assert_eq!(e, want);
        }
    }

    #[test]
    fn blocks_are_symmetric() {
        let p = ModelParams::reduced(10, 3.0).unwrap();
        for tj in (0..=10).step_by(2) {
            let b = build_j_block(h(tj), &p).unwrap();
            assert_eq!(b.matrix, b.matrix.transpose());
        }
    }

    #[test]
    fn rejects_bad_sectors() {
        let p = ModelParams::reduced(4, 1.0).unwrap();
        assert!(build_j_block(h(6), &p).is_err());
        assert!(build_j_block(h(1), &p).is_err());
        assert!(ModelParams::reduced(0, 1.0).is_err());
        assert!(ModelParams::reduced(3, -1.0).is_err());
        assert!(ModelParams::new(3, 0.0, 1.0).is_err());
    }

    #[test]
    fn interaction_relation() {
        let p = ModelParams::new(8, 2.0, 4.0).unwrap();
        assert_eq!(p.interaction(), 0.5);
        assert_eq!(p.reduced_interaction(), 0.25);
    }
}
