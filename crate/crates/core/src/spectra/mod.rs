//! Block Hamiltonians, their eigenvalues and assembled spectra.
//!
//! Energies are in units of `ε` throughout.

mod assemble;
mod block;

pub use assemble::{
    delta_grid, full_spectrum, jblock_spectrum, sector_blocks, sweep, SweepRow, MAX_ASSEMBLED_PARTICLES,
};
pub use block::{build_block, char_poly, eigenvalues, CharPoly, HamiltonianBlock, CHAR_POLY_MAX_DIM, DEFAULT_EIG_TOL};

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Shift;
use crate::half::Half;

/// Where an eigenvalue came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SectorLabel {
    /// Unclassified, e.g. a merged cluster.
    Full,
    /// A quasi-spin multiplet.
    Multiplet { j: Half },
    /// A representation `(J, c)` inside multiplet `j`.
    Rep { j: Half, big_j: Half, c: Shift },
}

impl SectorLabel {
    pub fn j(&self) -> Option<Half> {
        match *self {
            SectorLabel::Full => None,
            SectorLabel::Multiplet { j } | SectorLabel::Rep { j, .. } => Some(j),
        }
    }

    pub fn big_j(&self) -> Option<Half> {
        match *self {
            SectorLabel::Rep { big_j, .. } => Some(big_j),
            _ => None,
        }
    }

    pub fn c(&self) -> Option<Shift> {
        match *self {
            SectorLabel::Rep { c, .. } => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorLabel::Full => write!(f, "full"),
            SectorLabel::Multiplet { j } => write!(f, "j={j}"),
            SectorLabel::Rep { j, big_j, c } => write!(f, "j={j},J={big_j},c={c}"),
        }
    }
}

/// `j` descending, then `J` descending, then `c` descending; `Full` first.
impl Ord for SectorLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(l: &SectorLabel) -> u8 {
            match l {
                SectorLabel::Full => 0,
                SectorLabel::Multiplet { .. } => 1,
                SectorLabel::Rep { .. } => 2,
            }
        }
        let full_first = (*self != SectorLabel::Full).cmp(&(*other != SectorLabel::Full));
        full_first
            .then_with(|| other.j().cmp(&self.j()))
            .then_with(|| rank(self).cmp(&rank(other)))
            .then_with(|| other.big_j().cmp(&self.big_j()))
            .then_with(|| other.c().cmp(&self.c()))
    }
}

impl PartialOrd for SectorLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub energy: f64,
    pub degeneracy: u64,
    pub label: SectorLabel,
}

/// Eigenvalues with degeneracies, ascending; ties ordered by label.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn new(mut entries: Vec<SpectrumEntry>) -> Self {
        entries.retain(|e| e.degeneracy > 0);
        entries.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.label.cmp(&b.label)));
        Spectrum { entries }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<SpectrumEntry> {
        self.entries
    }

    /// Sum of degeneracies.
    pub fn total_count(&self) -> u64 {
        self.entries.iter().map(|e| e.degeneracy).sum()
    }

    /// Every eigenvalue repeated by its degeneracy, ascending.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_count() as usize);
        for e in &self.entries {
            out.extend(std::iter::repeat_n(e.energy, e.degeneracy as usize));
        }
        out
    }

    pub fn spectral_radius(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.energy.abs()))
    }

    /// Sum of all eigenvalues with multiplicity.
    pub fn trace(&self) -> f64 {
        self.entries.iter().map(|e| e.energy * e.degeneracy as f64).sum()
    }

    /// Copy with every energy multiplied by `factor`, e.g. `ε`.
    pub fn scaled(&self, factor: f64) -> Spectrum {
        let entries = self.entries.iter().map(|e| SpectrumEntry { energy: e.energy * factor, ..*e }).collect();
        Spectrum::new(entries)
    }
}

/// Largest difference between two multisets after sorting both.
///
/// Multisets of different size are infinitely far apart.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).fold(0.0, |m, (x, y)| {
        let d = (x - y).abs();
        if d.is_nan() {
            f64::INFINITY
        } else {
            m.max(d)
        }
    })
}

/// A group of eigenvalues closer than the clustering tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub energy: f64,
    pub size: u64,
    /// Contributions per label, in label order.
    pub labels: Vec<(SectorLabel, u64)>,
}

/// `1e-8 · max(1, spectral radius)`.
pub fn default_cluster_tol(spectrum: &Spectrum) -> f64 {
    1e-8 * spectrum.spectral_radius().max(1.0)
}

/// Groups consecutive eigenvalues whose gap is below `cluster_tol`.
///
/// The reported energy is the degeneracy-weighted mean of the cluster.
pub fn degeneracies(spectrum: &Spectrum, cluster_tol: f64) -> Result<Vec<Cluster>> {
    if !(cluster_tol.is_finite() && cluster_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("cluster tolerance must be positive, got {cluster_tol}")));
    }
    let mut out: Vec<Cluster> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    let mut weighted = 0.0;
    for e in spectrum.entries() {
        let fresh = out.is_empty() || e.energy - last >= cluster_tol;
        if fresh {
            if let Some(c) = out.last_mut() {
                c.energy = weighted / c.size as f64;
            }
            out.push(Cluster { energy: e.energy, size: 0, labels: Vec::new() });
            weighted = 0.0;
        }
        let c = out.last_mut().expect("pushed above");
        c.size += e.degeneracy;
        weighted += e.energy * e.degeneracy as f64;
        match c.labels.iter_mut().find(|(l, _)| *l == e.label) {
            Some(slot) => slot.1 += e.degeneracy,
            None => c.labels.push((e.label, e.degeneracy)),
        }
        last = e.energy;
    }
    if let Some(c) = out.last_mut() {
        c.energy = weighted / c.size as f64;
    }
    for c in &mut out {
        c.labels.sort_by_key(|l| l.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn h(t: i64) -> Half {
        Half::from_twice(t)
    }

    fn entry(energy: f64, degeneracy: u64, label: SectorLabel) -> SpectrumEntry {
        SpectrumEntry { energy, degeneracy, label }
    }

    #[test]
    fn label_order() {
        let quarter = Shift::from_rational(q(1, 4));
        let mut labels = [
            SectorLabel::Rep { j: h(5), big_j: h(2), c: -quarter },
            SectorLabel::Multiplet { j: h(3) },
            SectorLabel::Rep { j: h(7), big_j: h(3), c: quarter },
            SectorLabel::Rep { j: h(5), big_j: h(2), c: quarter },
            SectorLabel::Full,
            SectorLabel::Rep { j: h(7), big_j: h(5), c: Shift::ZERO },
        ];
        labels.sort();
        assert_eq!(labels[0], SectorLabel::Full);
        assert_eq!(labels[1], SectorLabel::Rep { j: h(7), big_j: h(5), c: Shift::ZERO });
        assert_eq!(labels[2], SectorLabel::Rep { j: h(7), big_j: h(3), c: quarter });
        assert_eq!(labels[3], SectorLabel::Rep { j: h(5), big_j: h(2), c: quarter });
        assert_eq!(labels[4], SectorLabel::Rep { j: h(5), big_j: h(2), c: -quarter });
        assert_eq!(labels[5], SectorLabel::Multiplet { j: h(3) });
    }

    #[test]
    fn spectrum_sorts_and_counts() {
        let s = Spectrum::new(vec![
            entry(1.0, 2, SectorLabel::Multiplet { j: h(1) }),
            entry(-1.0, 1, SectorLabel::Multiplet { j: h(1) }),
            entry(1.0, 1, SectorLabel::Multiplet { j: h(3) }),
            entry(0.0, 0, SectorLabel::Full),
        ]);
        assert_eq!(s.total_count(), 4);
        assert_eq!(s.flatten(), vec![-1.0, 1.0, 1.0, 1.0]);
        assert_eq!(s.entries()[1].label, SectorLabel::Multiplet { j: h(3) });
        assert_eq!(s.trace(), 2.0);
    }

    #[test]
    fn multiset_distance_basics() {
        assert_eq!(multiset_distance(&[1.0, 0.0], &[0.0, 1.0]), 0.0);
        assert_eq!(multiset_distance(&[1.0], &[0.0, 1.0]), f64::INFINITY);
        assert!((multiset_distance(&[1.0, 2.0], &[1.5, 2.0]) - 0.5).abs() < 1e-15);
        assert_eq!(multiset_distance(&[f64::NAN], &[0.0]), f64::INFINITY);
    }

    #[test]
    fn clusters_merge_close_values() {
        let j1 = SectorLabel::Multiplet { j: h(2) };
        let j0 = SectorLabel::Multiplet { j: h(0) };
        let s = Spectrum::new(vec![entry(0.0, 1, j1), entry(1e-12, 2, j0), entry(1.0, 1, j1)]);
        let c = degeneracies(&s, 1e-9).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].size, 3);
        assert_eq!(c[0].labels, vec![(j1, 1), (j0, 2)]);
        let exact = degeneracies(&s, 1e-300).unwrap();
        assert_eq!(exact.len(), 3);
        assert!(degeneracies(&s, 0.0).is_err());
        assert!(degeneracies(&s, f64::NAN).is_err());
    }
}
