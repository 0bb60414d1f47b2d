use std::fmt;

use nalgebra::DMatrix;

use crate::algebra::{RepLabel, Stride};
use crate::error::{Error, Result};
use crate::exact::{q_int, DeltaPoly, Q};
use crate::half::Half;
use crate::quasispin::ModelParams;

/// Default relative accuracy of [`eigenvalues`].
pub const DEFAULT_EIG_TOL: f64 = 1e-14;

/// Largest block expanded by [`char_poly`].
pub const CHAR_POLY_MAX_DIM: usize = 8;

/// `⟨H⟩/ε` on one representation: a symmetric tridiagonal matrix given by
/// its diagonal and the products of its mirrored off-diagonal pairs.
///
/// For `q = 1` the basis is `M = J, J−1, …, −J` with diagonal `2(M + c)` and
/// `off_products[i] = δ² f(M−1) g(M)` at `M = J − i`. A `q = 2` block lists
/// the sub-ladder `M = J, J−2, …` first and then `M = J−1, J−3, …`, with a
/// zero product between them.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianBlock {
    pub rep: RepLabel,
    pub delta: f64,
    pub projections: Vec<Half>,
    pub diagonal: Vec<f64>,
    pub off_products: Vec<f64>,
    exact: Option<ExactBlock>,
}

/// Rational diagonal and `δ`-free ladder products, when `c` is rational.
#[derive(Clone, Debug, PartialEq)]
struct ExactBlock {
    diagonal: Vec<Q>,
    ladder: Vec<Q>,
}

impl HamiltonianBlock {
    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal.iter().sum()
    }

    /// Whether the block carries exact rational data for [`char_poly`].
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Dense matrix in the symmetric gauge.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dimension();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        for (i, p) in self.off_products.iter().enumerate() {
            let v = p.max(0.0).sqrt();
            m[(i, i + 1)] = v;
            m[(i + 1, i)] = v;
        }
        debug_assert_eq!(m.nrows(), d);
        m
    }

    /// Replaces one off-diagonal product, dropping the exact data.
    ///
    /// Used to probe the checks with a deliberately broken block.
    pub fn with_off_product(mut self, index: usize, value: f64) -> Result<Self> {
        let len = self.off_products.len();
        let slot = self
            .off_products
            .get_mut(index)
            .ok_or_else(|| Error::InvalidArgument(format!("off-diagonal index {index} out of 0..{len}")))?;
        *slot = value;
        self.exact = None;
        Ok(self)
    }
}

/// Ordering of basis states: stride-2 representations are split into their
/// two sub-ladders.
fn block_projections(rep: &RepLabel) -> Vec<Half> {
    let all = rep.projections();
    match rep.q {
        Stride::One => all,
        Stride::Two => {
            let (even, odd): (Vec<_>, Vec<_>) = all.into_iter().partition(|m| (rep.big_j - *m).twice() % 4 == 0);
            even.into_iter().chain(odd).collect()
        }
    }
}

/// Builds `⟨H⟩/ε` for `rep` at the strength in `params`.
pub fn build_block(rep: &RepLabel, params: &ModelParams) -> Result<HamiltonianBlock> {
    if rep.n != params.n_particles {
        return Err(Error::InvalidRepresentation(format!(
            "representation ({rep}) belongs to N = {}, not N = {}",
            rep.n, params.n_particles
        )));
    }
    params.check_sector(rep.j)?;
    let delta = params.delta;
    let projections = block_projections(rep);
    let step = Half::from_int(rep.q.value() as i64);

    let diagonal: Vec<f64> = projections.iter().map(|m| 2.0 * rep.j0_value(*m)).collect();
    let exact_diag: Option<Vec<Q>> = rep.c.as_rational().map(|c| {
        let q_step = q_int(rep.q.value() as i128);
        projections.iter().map(|m| q_int(2) * (m.to_rational() / q_step + c)).collect()
    });

    let mut off_products = Vec::with_capacity(projections.len().saturating_sub(1));
    let mut ladder: Option<Vec<Q>> = exact_diag.as_ref().map(|_| Vec::new());
    for pair in projections.windows(2) {
        let (upper, lower) = (pair[0], pair[1]);
        let (value, exact) = if upper - step == lower {
            let p = rep.product_at(upper)?;
            if p.signum() < 0 {
                return Err(Error::NegativeProduct { label: rep.to_string(), m: upper, value: p.to_f64() });
            }
            (p.to_f64().max(0.0), p.as_rational())
        } else {
            (0.0, Some(q_int(0)))
        };
        off_products.push(delta * delta * value);
        ladder = match (ladder, exact) {
            (Some(mut l), Some(e)) => {
                l.push(e);
                Some(l)
            }
            _ => None,
        };
    }
    let exact = match (exact_diag, ladder) {
        (Some(diagonal), Some(ladder)) => Some(ExactBlock { diagonal, ladder }),
        _ => None,
    };
    Ok(HamiltonianBlock { rep: *rep, delta, projections, diagonal, off_products, exact })
}

/// Number of eigenvalues strictly below `x` of one unreduced segment.
fn sturm_count(diag: &[f64], prods: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            q = diag[i] - x - prods[i - 1] / q;
        }
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

const MAX_BISECTIONS: usize = 4096;

fn segment_eigenvalues(diag: &[f64], prods: &[f64], tol: f64, out: &mut Vec<f64>) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        out.push(diag[0]);
        return Ok(());
    }
    let pmax = prods.iter().fold(1.0f64, |m, p| m.max(*p));
    let pivmin = f64::MIN_POSITIVE * pmax;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { prods[i - 1].sqrt() } else { 0.0 };
        let right = if i + 1 < n { prods[i].sqrt() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) + pivmin;
    lo -= pad;
    hi += pad;

    for k in 0..n {
        let (mut a, mut b) = (lo, hi);
        let mut converged = false;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (a + b);
            if b - a <= tol * mid.abs().max(1.0) || mid <= a || mid >= b {
                converged = true;
                break;
            }
            if sturm_count(diag, prods, mid, pivmin) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                dim: n,
                detail: format!("bisection for eigenvalue {k} stalled in [{a:e}, {b:e}]"),
            });
        }
        out.push(0.5 * (a + b));
    }
    Ok(())
}

/// All eigenvalues of `block`, ascending, by Sturm-sequence bisection.
///
/// Each is accurate to `tol · max(1, |E|)` up to rounding in the Sturm
/// recurrence. The matrix is first split wherever an off-diagonal product is
/// exactly zero, so decoupled entries come out exactly.
pub fn eigenvalues(block: &HamiltonianBlock, tol: f64) -> Result<Vec<f64>> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let dim = block.dimension();
    if block.off_products.len() + 1 != dim.max(1) {
        return Err(Error::InvalidArgument(format!(
            "{} off-diagonal products for dimension {dim}",
            block.off_products.len()
        )));
    }
    if let Some(bad) = block.diagonal.iter().chain(&block.off_products).find(|v| !v.is_finite()) {
        return Err(Error::NoConvergence { dim, detail: format!("non-finite matrix entry {bad}") });
    }
    if let Some((i, p)) = block.off_products.iter().enumerate().find(|(_, p)| **p < 0.0) {
        return Err(Error::NegativeProduct {
            label: block.rep.to_string(),
            m: block.projections.get(i).copied().unwrap_or(Half::ZERO),
            value: *p,
        });
    }

    let mut out = Vec::with_capacity(dim);
    let mut start = 0;
    for end in 1..=dim {
        if end == dim || block.off_products[end - 1] == 0.0 {
            segment_eigenvalues(&block.diagonal[start..end], &block.off_products[start..end - 1], tol, &mut out)?;
            start = end;
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Monic `det(E·1 − ⟨H⟩)` with coefficients that are polynomials in `δ²`.
///
/// `coeffs[k]` multiplies `E^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    pub coeffs: Vec<DeltaPoly>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `E^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> DeltaPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(DeltaPoly::zero)
    }

    /// Coefficients of `E^0 … E^D` at a given `δ`.
    pub fn at_delta(&self, delta: f64) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.eval(delta)).collect()
    }

    pub fn eval(&self, energy: f64, delta: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * energy + c.eval(delta))
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let power = match k {
                0 => String::new(),
                1 => "E".to_string(),
                _ => format!("E^{k}"),
            };
            if *c == DeltaPoly::one() && k > 0 {
                write!(f, "{power}")?;
            } else if k == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) {power}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact characteristic polynomial from the three-term recurrence
///
/// ```text
/// P_k = (E − a_k) P_{k−1} − δ² l_{k−1} P_{k−2}
/// ```
///
/// where `a_k` is the diagonal and `l_k` the `δ`-free ladder product.
pub fn char_poly(block: &HamiltonianBlock) -> Result<CharPoly> {
    let dim = block.dimension();
    if dim > CHAR_POLY_MAX_DIM {
        return Err(Error::TooLarge { dim, max: CHAR_POLY_MAX_DIM });
    }
    let exact = block.exact.as_ref().ok_or_else(|| {
        Error::InvalidArgument(format!("block ({}) has no exact rational form", block.rep))
    })?;
    // polynomials in E, each coefficient a DeltaPoly
    let mut prev: Vec<DeltaPoly> = vec![DeltaPoly::one()];
    let mut cur: Vec<DeltaPoly> = vec![DeltaPoly::one()];
    for k in 0..dim {
        let a = DeltaPoly::constant(exact.diagonal[k]);
        let mut next = vec![DeltaPoly::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(&a * c);
        }
        if k > 0 {
            let link = DeltaPoly::delta_sq(exact.ladder[k - 1]);
            for (i, c) in prev.iter().enumerate() {
                next[i] = &next[i] - &(&link * c);
            }
        }
        prev = cur;
        cur = next;
    }
    Ok(CharPoly { coeffs: cur })
}
