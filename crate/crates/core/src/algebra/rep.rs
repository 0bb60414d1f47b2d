use std::fmt;

use nalgebra::DMatrix;

use super::{sector_constant, PolyAlgebraParams};
use crate::error::{Error, Result};
use crate::exact::{q, q_int, Shift, Surd, Q};
use crate::half::Half;
use crate::quasispin::check_sector;

/// Ladder stride `q`: `J±` move `M` by one (`q = 1`) or by two (`q = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stride {
    One,
    Two,
}

impl Stride {
    pub fn value(self) -> usize {
        match self {
            Stride::One => 1,
            Stride::Two => 2,
        }
    }

    pub fn from_value(q: usize) -> Result<Self> {
        match q {
            1 => Ok(Stride::One),
            2 => Ok(Stride::Two),
            _ => Err(Error::InvalidRepresentation(format!("q = {q} is not supported (only 1 or 2)"))),
        }
    }
}

/// A finite representation `(q, J, c)` of the algebra of sector `j` with `N` particles.
///
/// It has dimension `2J+1` and states `|J M⟩`, `M = J, J−1, …, −J`, on which
/// `J0 = M/q + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RepLabel {
    pub q: Stride,
    pub big_j: Half,
    pub c: Shift,
    pub j: Half,
    pub n: usize,
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}, j={}, J={}, c={}, N={}", self.q.value(), self.j, self.big_j, self.c, self.n)
    }
}

impl RepLabel {
    pub fn q1(j: Half, big_j: Half, c: Shift, n: usize) -> Self {
        RepLabel { q: Stride::One, big_j, c, j, n }
    }

    /// The stride-2 representation carried by the whole `j` multiplet.
    pub fn q2_multiplet(j: Half, n: usize) -> Self {
        RepLabel { q: Stride::Two, big_j: j, c: Shift::ZERO, j, n }
    }

    pub fn dimension(&self) -> usize {
        (self.big_j.twice() + 1) as usize
    }

    /// `M = J, J−1, …, −J`.
    pub fn projections(&self) -> Vec<Half> {
        self.big_j.down_to(-self.big_j).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ParticleNumber { n: 0, max: usize::MAX });
        }
        if self.big_j.twice() < 0 || self.j.twice() < 0 {
            return Err(Error::InvalidRepresentation(format!("negative label in {self}")));
        }
        Ok(())
    }

    /// `f(M − q) g(M)`, the product linking `M` to `M − q`.
    pub fn product_at(&self, m: Half) -> Result<Surd> {
        match self.q {
            Stride::One => fg_product_q1(self.j, self.big_j, self.c, m, self.n),
            Stride::Two => {
                if !self.c.is_zero() {
                    return Err(Error::InvalidRepresentation(format!("q = 2 needs c = 0, got {self}")));
                }
                fg_product_q2(self.j, self.big_j, m, self.n).map(Surd::from_rational)
            }
        }
    }

    /// All interior ladder products, top link first.
    pub fn ladder(&self) -> Result<LadderCoefficients> {
        self.validate()?;
        let step = Half::from_int(self.q.value() as i64);
        let bottom = -self.big_j + step;
        let products = self
            .big_j
            .down_to(bottom)
            .map(|m| self.product_at(m).map(|p| (m, p)))
            .collect::<Result<_>>()?;
        Ok(LadderCoefficients { rep: *self, products })
    }

    /// `J0` eigenvalue `M/q + c` as a float.
    pub fn j0_value(&self, m: Half) -> f64 {
        m.to_f64() / self.q.value() as f64 + self.c.to_f64()
    }

    /// The quasi-spin projections `m = 2 J0` covered by a `q = 1` LMG block.
    ///
    /// Computed from the diagonal and checked against the `j` ladder rather
    /// than assumed from the sign of `c`.
    pub fn j0_assignment(&self) -> Result<Vec<Half>> {
        let c = self.c.as_rational().ok_or_else(|| {
            Error::InvalidRepresentation(format!("irrational shift in {self} has no m assignment"))
        })?;
        let scale = q_int(2 / self.q.value() as i128);
        self.projections()
            .into_iter()
            .map(|m| {
                let twice_m = (m.to_rational() * scale + q_int(2) * c) * q_int(2);
                if !twice_m.is_integer() {
                    return Err(Error::InvalidRepresentation(format!("2(M+c) = {} is not a half-integer", twice_m / 2)));
                }
                let half = Half::from_twice(*twice_m.numer() as i64);
                if half.abs() > self.j || !half.same_parity(self.j) {
                    return Err(Error::InvalidRepresentation(format!("m = {half} is not in the j = {} ladder", self.j)));
                }
                Ok(half)
            })
            .collect()
    }
}

/// Interior products `f(M − q) g(M)` for `M` from the top of the ladder down.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderCoefficients {
    pub rep: RepLabel,
    pub products: Vec<(Half, Surd)>,
}

impl LadderCoefficients {
    pub fn min_sign(&self) -> i8 {
        self.products.iter().map(|(_, p)| p.signum()).min().unwrap_or(0)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.products.iter().all(|(_, p)| p.signum() >= 0)
    }

    pub fn values(&self) -> Vec<f64> {
        self.products.iter().map(|(_, p)| p.to_f64()).collect()
    }
}

/// Shifts allowed for a `q = 1` representation of dimension `2J+1` in sector `j`.
///
/// `c = 0` always; `c = ±√(j(j+1)/4 − 1/8 − J(J+1))` when the radicand is
/// nonnegative. A negative radicand is dropped.
pub fn c_values(j: Half, big_j: Half) -> Vec<Shift> {
    let jr = j.to_rational();
    let bj = big_j.to_rational();
    let radicand = jr * (jr + q_int(1)) / q_int(4) - q(1, 8) - bj * (bj + q_int(1));
    let mut out = vec![Shift::ZERO];
    if radicand > q_int(0) {
        out.extend(Shift::from_square(true, radicand));
        out.extend(Shift::from_square(false, radicand));
    }
    out
}

/// Residual of `α c (c² + J(J+1)) + β (c² + J(J+1)/3) + γ c + Δ`, exactly.
pub fn q1_constraint_residual(c: Shift, big_j: Half, params: &PolyAlgebraParams) -> Surd {
    let bj = big_j.to_rational();
    let jj1 = bj * (bj + q_int(1));
    let r = c.square();
    let rational = params.beta * (r + jj1 / q_int(3)) + params.delta0;
    let coeff = q_int(i128::from(c.sign())) * (params.alpha * (r + jj1) + params.gamma);
    Surd::new(rational, coeff, r)
}

/// `f(M−1) g(M)` of the `q = 1` representation `(J, c)` in sector `j`:
///
/// ```text
/// (J−M+1)(J+M)/N² · [2j² + 2j − 1 − 4J² − 4J − 4M² + 4M + 8(1−2M)c − 24c²]
/// ```
///
/// `M` runs over `−J … J+1`; both ends give the boundary zero.
pub fn fg_product_q1(j: Half, big_j: Half, c: Shift, m: Half, n: usize) -> Result<Surd> {
    if n == 0 {
        return Err(Error::ParticleNumber { n, max: usize::MAX });
    }
    if !m.same_parity(big_j) || m < -big_j || m > big_j + Half::from_int(1) || big_j.twice() < 0 {
        return Err(Error::ProjectionOutOfRange { j: big_j, m });
    }
    let bj = big_j.to_rational();
    let mr = m.to_rational();
    let n2 = q_int((n * n) as i128);
    let outer = (bj - mr + q_int(1)) * (bj + mr) / n2;
    let rational = sector_constant(j) - q_int(4) * bj * bj - q_int(4) * bj - q_int(4) * mr * mr
        + q_int(4) * mr
        - q_int(24) * c.square();
    let linear = q_int(8) * (q_int(1) - q_int(2) * mr) * q_int(i128::from(c.sign()));
    Ok(Surd::new(rational * outer, linear * outer, c.square()))
}

/// `f'(M'−2) g'(M')` of the `q = 2` representation `J'` in sector `j`.
///
/// Integer `J'` has two interleaved sub-ladders (`J' − M'` even or odd) with
/// their own formulas. Half-integer `J'` only exists for `J' = j`.
pub fn fg_product_q2(j: Half, jp: Half, mp: Half, n: usize) -> Result<Q> {
    if n == 0 {
        return Err(Error::ParticleNumber { n, max: usize::MAX });
    }
    if jp.twice() < 0 || !mp.same_parity(jp) {
        return Err(Error::ProjectionOutOfRange { j: jp, m: mp });
    }
    let n2 = q_int((4 * n * n) as i128);
    let (jr, jpr, m) = (j.to_rational(), jp.to_rational(), mp.to_rational());
    let one = q_int(1);
    let two = q_int(2);

    if !jp.is_integer() {
        if jp != j {
            return Err(Error::InvalidRepresentation(format!("half-integer J' = {jp} must equal j = {j}")));
        }
        if mp < -jp || mp > jp + Half::from_int(2) {
            return Err(Error::ProjectionOutOfRange { j: jp, m: mp });
        }
        return Ok((jr + m) * (jr + m - one) * (jr - m + one) * (jr - m + two) / n2);
    }

    let s = two * jr * jr + two * jr;
    if (jp - mp).twice() % 4 == 0 {
        if mp < -jp || mp > jp + Half::from_int(2) {
            return Err(Error::ProjectionOutOfRange { j: jp, m: mp });
        }
        Ok((jpr - m + two) * (jpr + m) * (s - one - jpr * jpr - two * jpr - m * m + two * m) / n2)
    } else {
        if mp < -jp + Half::from_int(1) || mp > jp + Half::from_int(1) {
            return Err(Error::ProjectionOutOfRange { j: jp, m: mp });
        }
        Ok((jpr - m + one) * (jpr + m - one) * (s - jpr * jpr - m * m + two * m) / n2)
    }
}

/// The two `q = 1` pieces of the `j` multiplet.
///
/// Integer `j = n` gives `(J = n/2, c = 0) ⊕ (J = (n−1)/2, c = 0)`; half-integer
/// `j = n + 1/2` gives `(J = n/2, c = 1/4) ⊕ (J = n/2, c = −1/4)`. `j = 0`
/// is the single trivial representation.
pub fn decompose(j: Half, n: usize) -> Result<Vec<RepLabel>> {
    check_sector(n, j)?;
    let tj = j.twice();
    if tj == 0 {
        return Ok(vec![RepLabel::q1(j, Half::ZERO, Shift::ZERO, n)]);
    }
    if j.is_integer() {
        let k = tj / 2;
        Ok(vec![
            RepLabel::q1(j, Half::from_twice(k), Shift::ZERO, n),
            RepLabel::q1(j, Half::from_twice(k - 1), Shift::ZERO, n),
        ])
    } else {
        let big_j = Half::from_twice((tj - 1) / 2);
        let quarter = Shift::from_rational(q(1, 4));
        Ok(vec![RepLabel::q1(j, big_j, quarter, n), RepLabel::q1(j, big_j, -quarter, n)])
    }
}

/// `J0`, `J+`, `J-` of a representation in the symmetric gauge `f = g = √(fg)`.
///
/// Row/column `i` is the state `M = J − i`.
#[derive(Clone, Debug)]
pub struct RepMatrices {
    pub rep: RepLabel,
    pub j0: DMatrix<f64>,
    pub jplus: DMatrix<f64>,
    pub jminus: DMatrix<f64>,
}

impl RepMatrices {
    pub fn build(rep: &RepLabel) -> Result<Self> {
        rep.validate()?;
        let dim = rep.dimension();
        let step = rep.q.value();
        let ms = rep.projections();
        let j0 = DMatrix::from_fn(dim, dim, |r, c| if r == c { rep.j0_value(ms[r]) } else { 0.0 });
        let mut jplus = DMatrix::zeros(dim, dim);
        for lower in step..dim {
            let upper = lower - step;
            let p = rep.product_at(ms[upper])?;
            if p.signum() < 0 {
                return Err(Error::NegativeProduct { label: rep.to_string(), m: ms[upper], value: p.to_f64() });
            }
            jplus[(upper, lower)] = p.to_f64().max(0.0).sqrt();
        }
        let jminus = jplus.transpose();
        Ok(RepMatrices { rep: *rep, j0, jplus, jminus })
    }
}

/// Max-norm residual of the defining relations on `rep`.
///
/// Checks `[J0, J±] ∓ J±` and `[J+, J-] − (α J0³ + β J0² + γ J0 + Δ)`.
pub fn verify_commutators(rep: &RepLabel, params: &PolyAlgebraParams) -> Result<f64> {
    let m = RepMatrices::build(rep)?;
    let comm = |a: &DMatrix<f64>, b: &DMatrix<f64>| a * b - b * a;
    let r1 = (comm(&m.j0, &m.jplus) - &m.jplus).amax();
    let r2 = (comm(&m.j0, &m.jminus) + &m.jminus).amax();
    let poly = DMatrix::from_fn(m.j0.nrows(), m.j0.ncols(), |r, c| {
        if r == c {
            params.commutator_poly(m.j0[(r, r)])
        } else {
            0.0
        }
    });
    let r3 = (comm(&m.jplus, &m.jminus) - poly).amax();
    Ok(r1.max(r2).max(r3))
}

/// `C = J+ J- + casimir_poly(J0)` on the representation basis.
#[derive(Clone, Debug)]
pub struct CasimirMatrix {
    pub matrix: DMatrix<f64>,
    /// Largest `|J+J-|` or `|casimir_poly(J0)|` entry summed into `matrix`,
    /// the size of its rounding.
    pub term_scale: f64,
}

impl CasimirMatrix {
    /// Distinct diagonal values; see [`distinct_diagonal`].
    pub fn distinct_values(&self, rel_tol: f64) -> Result<Vec<f64>> {
        distinct_diagonal(&self.matrix, rel_tol, self.term_scale)
    }
}

pub fn casimir_matrix(rep: &RepLabel, params: &PolyAlgebraParams) -> Result<CasimirMatrix> {
    let m = RepMatrices::build(rep)?;
    let mut c = &m.jplus * &m.jminus;
    let mut term_scale = c.amax();
    for i in 0..c.nrows() {
        let h = params.casimir_poly(m.j0[(i, i)]);
        term_scale = term_scale.max(h.abs());
        c[(i, i)] += h;
    }
    Ok(CasimirMatrix { matrix: c, term_scale })
}

/// Distinct diagonal values of a matrix that must be diagonal.
///
/// `scale` is the magnitude of the terms that were summed into the entries.
/// Fails if an off-diagonal entry exceeds `rel_tol · max(1, scale, ‖m‖)`;
/// values are merged when they differ by at most `rel_tol` times the larger
/// of themselves and `scale`.
pub fn distinct_diagonal(m: &DMatrix<f64>, rel_tol: f64, scale: f64) -> Result<Vec<f64>> {
    let bound = m.amax().max(scale).max(1.0);
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if r != c && m[(r, c)].abs() > rel_tol * bound {
                return Err(Error::InvalidRepresentation(format!(
                    "Casimir not diagonal: entry ({r},{c}) = {:e}",
                    m[(r, c)]
                )));
            }
        }
    }
    let mut vals: Vec<f64> = m.diagonal().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for v in vals {
        match out.last() {
            Some(&last) if (v - last).abs() <= rel_tol * last.abs().max(v.abs()).max(scale) => {}
            _ => out.push(v),
        }
    }
    Ok(out)
}

/// Casimir values of the stride-2 representation `J' = n` in sector `j`, for
/// the sub-ladders `M' = n, n−2, …` and `M' = n−1, n−3, …`:
///
/// ```text
/// n(n+2)   [j(j+1) − (n+1)²/2] / 2N²
/// (n−1)(n+1) [j(j+1) − n²/2]   / 2N²
/// ```
///
/// The second factor is `(n+1)`; evaluating `C = J+J- + casimir_poly(J0)` on
/// the top state of the odd sub-ladder gives this value for every `j`, `n`.
/// For `J' = j` the two values coincide.
pub fn casimir_eigenvalues_q2(j: Half, n: u32, particles: usize) -> (Q, Q) {
    let jr = j.to_rational();
    let jj1 = jr * (jr + q_int(1));
    let nn = q_int(i128::from(n));
    let den = q_int(2 * (particles * particles) as i128);
    let even = nn * (nn + q_int(2)) * (jj1 - (nn + q_int(1)) * (nn + q_int(1)) / q_int(2)) / den;
    let odd = (nn - q_int(1)) * (nn + q_int(1)) * (jj1 - nn * nn / q_int(2)) / den;
    (even, odd)
}

/// Casimir value `j(j−1)(j+1)(j+2) / 4N²` on a half-integer multiplet.
pub fn casimir_value_half_integer(j: Half, particles: usize) -> Q {
    let jr = j.to_rational();
    jr * (jr - q_int(1)) * (jr + q_int(1)) * (jr + q_int(2)) / q_int(4 * (particles * particles) as i128)
}
