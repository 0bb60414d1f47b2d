use nalgebra::DMatrix;

use lmg_core::algebra::decompose;
use lmg_core::fock::{brute_force_spectrum, DEFAULT_MAX_PARTICLES};
use lmg_core::quasispin::multiplicities;
use lmg_core::spectra::{
    build_block, char_poly, default_cluster_tol, degeneracies, eigenvalues, full_spectrum, jblock_spectrum,
    multiset_distance, SectorLabel, CHAR_POLY_MAX_DIM, DEFAULT_EIG_TOL,
};
use lmg_core::{Half, ModelParams};

/// Real parts of the roots of a monic polynomial, from its companion matrix.
fn companion_roots(coeffs: &[f64]) -> Vec<f64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -coeffs[i] / coeffs[d];
    }
    let mut roots: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
    roots.sort_by(f64::total_cmp);
    roots
}

#[test]
fn char_poly_roots_are_block_eigenvalues() {
    let mut blocks = 0;
    for n in 1..=16 {
        for m in multiplicities(n) {
            for rep in decompose(m.j, n).unwrap() {
                if rep.dimension() > CHAR_POLY_MAX_DIM {
                    continue;
                }
                for delta in [0.0, 0.5, 1.0, 2.0, 5.0] {
                    let block = build_block(&rep, &ModelParams::reduced(n, delta).unwrap()).unwrap();
                    let poly = char_poly(&block).unwrap();
                    let roots = companion_roots(&poly.at_delta(delta));
                    let eig = eigenvalues(&block, DEFAULT_EIG_TOL).unwrap();
                    let scale = eig.iter().fold(1.0f64, |s, e| s.max(e.abs()));
                    assert!(multiset_distance(&roots, &eig) < 1e-9 * scale, "({rep}), delta {delta}: {roots:?} vs {eig:?}");
                }
                blocks += 1;
            }
        }
    }
    assert!(blocks > 100);
}

#[test]
fn three_routes_agree_up_to_ten() {
    for n in 1..=10 {
        for delta in [0.0, 0.25, 1.0, 3.0, 7.5] {
            let p = ModelParams::reduced(n, delta).unwrap();
            let fock = brute_force_spectrum(&p, DEFAULT_MAX_PARTICLES).unwrap().flatten();
            let jblock = jblock_spectrum(&p).unwrap().flatten();
            let split = full_spectrum(&p).unwrap().flatten();
            assert!(multiset_distance(&fock, &jblock) < 1e-9, "N = {n}, delta = {delta}");
            assert!(multiset_distance(&fock, &split) < 1e-9, "N = {n}, delta = {delta}");
        }
    }
}

#[test]
fn brute_force_labels_match_assembly() {
    // per-j multisets, not just the union
    for n in [5usize, 8] {
        let p = ModelParams::reduced(n, 1.5).unwrap();
        let fock = brute_force_spectrum(&p, DEFAULT_MAX_PARTICLES).unwrap();
        let split = full_spectrum(&p).unwrap();
        for m in multiplicities(n) {
            let pick = |s: &lmg_core::spectra::Spectrum| -> Vec<f64> {
                s.entries()
                    .iter()
                    .filter(|e| e.label.j() == Some(m.j))
                    .flat_map(|e| std::iter::repeat_n(e.energy, e.degeneracy as usize))
                    .collect()
            };
            assert!(multiset_distance(&pick(&fock), &pick(&split)) < 1e-9, "N = {n}, j = {}", m.j);
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn noninteracting_clusters_are_binomial() {
    let s = full_spectrum(&ModelParams::reduced(8, 0.0).unwrap()).unwrap();
    let clusters = degeneracies(&s, default_cluster_tol(&s)).unwrap();
    let sizes: Vec<u64> = clusters.iter().map(|c| c.size).collect();
    let want: Vec<u64> = (0..=8).map(|k| binomial(8, k)).collect();
    assert_eq!(sizes, want);
    for (k, c) in clusters.iter().enumerate() {
        assert_eq!(c.energy, k as f64 - 4.0);
    }
}

#[test]
fn zero_cluster_collects_every_integer_sector() {
    let s = full_spectrum(&ModelParams::reduced(8, 1.0).unwrap()).unwrap();
    let clusters = degeneracies(&s, default_cluster_tol(&s)).unwrap();
    let zero = clusters.iter().find(|c| c.energy.abs() < 1e-9).expect("zero cluster");
    let mut js: Vec<Half> = zero.labels.iter().filter_map(|(l, _)| l.j()).collect();
    js.dedup();
    js.sort();
    assert_eq!(js, (0..=4).map(Half::from_int).collect::<Vec<_>>());
    assert!(zero.labels.iter().all(|(l, _)| matches!(l, SectorLabel::Rep { .. })));
}

#[test]
fn assembled_totals() {
    assert_eq!(full_spectrum(&ModelParams::reduced(8, 2.0).unwrap()).unwrap().total_count(), 256);
    assert_eq!(full_spectrum(&ModelParams::reduced(7, 2.0).unwrap()).unwrap().total_count(), 128);
    let s = full_spectrum(&ModelParams::reduced(2, 0.0).unwrap()).unwrap().flatten();
    assert_eq!(s, vec![-1.0, 0.0, 0.0, 1.0]);
}
