//! Brute-force ground truth on the full 2^N configuration space.
//!
//! A configuration is a bitstring `b`: bit `m` set means fermion `m` sits in
//! the upper level, i.e. the pair `α⁺_m β⁺_m` has acted on `|0⟩`.
//!
//! Fermionic signs: `j+ = Σ_m α⁺_m β⁺_m` is a sum of pair operators. The `α`
//! and `β` operators commute with each other and each family anticommutes
//! internally, so two pairs on different modes commute. Every configuration
//! is therefore reached from `|0⟩` with a `+1` amplitude regardless of the
//! order in which pairs are created, and the bitstring matrices below carry no
//! signs. `tests::pair_operators_match_fermionic_construction` checks this
//! against explicit Jordan-Wigner matrices for N = 2.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::half::Half;
use crate::quasispin::ModelParams;
use crate::spectra::{SectorLabel, Spectrum, SpectrumEntry};

pub const DEFAULT_MAX_PARTICLES: usize = 14;

/// Which operator an [`OperatorMatrix`] represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorLabel {
    J0,
    JPlus,
    JMinus,
    JSquared,
    Hamiltonian,
    Derived,
}

/// All bitstrings of length `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockBasis {
    pub n_particles: usize,
}

impl FockBasis {
    pub fn new(n_particles: usize, limit: usize) -> Result<Self> {
        if n_particles == 0 || n_particles > limit || n_particles >= usize::BITS as usize - 1 {
            return Err(Error::ParticleNumber { n: n_particles, max: limit });
        }
        Ok(FockBasis { n_particles })
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_particles
    }

    /// `j0` eigenvalue of a configuration: excited pairs minus `N/2`.
    pub fn j0_of(&self, state: usize) -> Half {
        Half::from_twice(2 * i64::from(state.count_ones()) - self.n_particles as i64)
    }
}

/// Row-compressed real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub label: OperatorLabel,
    dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl OperatorMatrix {
    fn from_rows(label: OperatorLabel, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let dim = rows.len();
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(r.len());
                for (c, v) in r {
                    match merged.last_mut() {
                        Some(last) if last.0 == c => last.1 += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|e| e.1 != 0.0);
                merged
            })
            .collect();
        OperatorMatrix { label, dim, rows }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.rows[row]
            .binary_search_by_key(&col, |e| e.0)
            .map_or(0.0, |i| self.rows[row][i].1)
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> OperatorMatrix {
        let mut rows = vec![Vec::new(); self.dim];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                rows[j].push((i, v));
            }
        }
        OperatorMatrix::from_rows(OperatorLabel::Derived, rows)
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let mut scratch = vec![0.0; self.dim];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                for &(k, a) in r {
                    for &(j, b) in &other.rows[k] {
                        if scratch[j] == 0.0 {
                            touched.push(j);
                        }
                        scratch[j] += a * b;
                    }
                }
                let out: Vec<(usize, f64)> = touched.drain(..).map(|j| (j, std::mem::take(&mut scratch[j]))).collect();
                out
            })
            .collect();
        OperatorMatrix::from_rows(OperatorLabel::Derived, rows)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &OperatorMatrix, b: f64) -> OperatorMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(x, y)| {
                x.iter().map(|&(c, v)| (c, a * v)).chain(y.iter().map(|&(c, v)| (c, b * v))).collect()
            })
            .collect();
        OperatorMatrix::from_rows(OperatorLabel::Derived, rows)
    }

    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(other).combine(1.0, &other.matmul(self), -1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().fold(0.0, |m, e| m.max(e.1.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `self · v` for each column of a dense matrix.
    pub fn apply(&self, v: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, v.ncols());
        for (i, r) in self.rows.iter().enumerate() {
            for &(k, a) in r {
                for c in 0..v.ncols() {
                    out[(i, c)] += a * v[(k, c)];
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                m[(i, j)] = v;
            }
        }
        m
    }

    fn relabel(mut self, label: OperatorLabel) -> Self {
        self.label = label;
        self
    }
}

/// Quasi-spin generators, their Casimir and the Hamiltonian on the full space.
#[derive(Clone, Debug)]
pub struct FockOperators {
    pub basis: FockBasis,
    pub j0: OperatorMatrix,
    pub jplus: OperatorMatrix,
    pub jminus: OperatorMatrix,
    pub jsq: OperatorMatrix,
    pub hamiltonian: OperatorMatrix,
}

/// Max-norm residuals of the su(2) relations and of `[H, j²] = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CommutatorResiduals {
    pub j0_jplus: f64,
    pub j0_jminus: f64,
    pub jplus_jminus: f64,
    pub hamiltonian_jsq: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.j0_jplus.max(self.j0_jminus).max(self.jplus_jminus).max(self.hamiltonian_jsq)
    }
}

/// Builds `j0, j+, j-, j²` and `H/ε` for `params.n_particles ≤ limit`.
pub fn build_operators(params: &ModelParams, limit: usize) -> Result<FockOperators> {
    let basis = FockBasis::new(params.n_particles, limit)?;
    let n = basis.n_particles;
    let dim = basis.dimension();

    let j0 = OperatorMatrix::from_rows(
        OperatorLabel::J0,
        (0..dim).map(|b| vec![(b, basis.j0_of(b).to_f64())]).collect(),
    );
    // j+ |b⟩ = Σ_{m unset} |b with m set⟩, stored row-wise as ⟨b'| j+ |b⟩.
    let mut plus_rows = vec![Vec::new(); dim];
    for b in 0..dim {
        for m in 0..n {
            if b & (1 << m) == 0 {
                plus_rows[b | (1 << m)].push((b, 1.0));
            }
        }
    }
    let jplus = OperatorMatrix::from_rows(OperatorLabel::JPlus, plus_rows);
    let jminus = jplus.transpose().relabel(OperatorLabel::JMinus);

    let jsq = jplus
        .matmul(&jminus)
        .combine(0.5, &jminus.matmul(&jplus), 0.5)
        .combine(1.0, &j0.matmul(&j0), 1.0)
        .relabel(OperatorLabel::JSquared);

    let pair = jplus.matmul(&jplus).combine(1.0, &jminus.matmul(&jminus), 1.0);
    let hamiltonian = j0
        .combine(1.0, &pair, params.reduced_interaction())
        .relabel(OperatorLabel::Hamiltonian);

    Ok(FockOperators { basis, j0, jplus, jminus, jsq, hamiltonian })
}

impl FockOperators {
    pub fn commutator_residuals(&self) -> CommutatorResiduals {
        CommutatorResiduals {
            j0_jplus: self.j0.commutator(&self.jplus).combine(1.0, &self.jplus, -1.0).max_abs(),
            j0_jminus: self.j0.commutator(&self.jminus).combine(1.0, &self.jminus, 1.0).max_abs(),
            jplus_jminus: self.jplus.commutator(&self.jminus).combine(1.0, &self.j0, -2.0).max_abs(),
            hamiltonian_jsq: self.hamiltonian.commutator(&self.jsq).max_abs(),
        }
    }
}

/// Tolerance for assigning an eigenvector to the sector `j`.
pub const J_CLASSIFY_TOL: f64 = 1e-6;

fn classify_j(jsq: f64) -> Option<Half> {
    let j = 0.5 * (-1.0 + (1.0 + 4.0 * jsq.max(0.0)).sqrt());
    let twice = (2.0 * j).round() as i64;
    let jj = twice as f64 / 2.0;
    ((jsq - jj * (jj + 1.0)).abs() < J_CLASSIFY_TOL).then(|| Half::from_twice(twice))
}

/// All `2^N` eigenvalues of `H/ε`, each labelled by its quasi-spin `j`.
///
/// Degenerate eigenspaces of `H` are rotated so that `j²` is diagonal inside
/// them before classification. Entries of equal energy and `j` are merged
/// into one entry carrying the degeneracy.
pub fn brute_force_spectrum(params: &ModelParams, limit: usize) -> Result<Spectrum> {
    let ops = build_operators(params, limit)?;
    let dim = ops.basis.dimension();
    let h = ops.hamiltonian.to_dense();
    let eig = h.clone().try_symmetric_eigen(f64::EPSILON, 0).ok_or_else(|| Error::NoConvergence {
        dim,
        detail: format!("frobenius norm {:.3e}, max entry {:.3e}", h.norm(), ops.hamiltonian.max_abs()),
    })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let radius = eig.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let cluster_tol = 1e-8 * radius.max(1.0);

    let mut entries = Vec::new();
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim
            && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] < cluster_tol
        {
            end += 1;
        }
        let members = &order[start..end];
        let energy = members.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / members.len() as f64;

        let vecs = DMatrix::from_fn(dim, members.len(), |r, c| eig.eigenvectors[(r, members[c])]);
        let projected = vecs.transpose() * ops.jsq.apply(&vecs);
        let projected = 0.5 * (&projected + projected.transpose());
        let jvals = crate::quasispin::dense_symmetric_eigenvalues(&projected)?;

        let mut counts: Vec<(Half, u64)> = Vec::new();
        for v in jvals {
            let j = classify_j(v).ok_or_else(|| Error::NoConvergence {
                dim,
                detail: format!("<j^2> = {v} at E = {energy} matches no j(j+1)"),
            })?;
            match counts.iter_mut().find(|(h, _)| *h == j) {
                Some(slot) => slot.1 += 1,
                None => counts.push((j, 1)),
            }
        }
        for (j, degeneracy) in counts {
            entries.push(SpectrumEntry { energy, degeneracy, label: SectorLabel::Multiplet { j } });
        }
        start = end;
    }
    Ok(Spectrum::new(entries))
}
