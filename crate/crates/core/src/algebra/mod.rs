//! The cubic deformation of sl(2,R) realized inside each quasi-spin multiplet.
//!
//! With `J0 = j0/2` and `J± = j±²/2N` the LMG Hamiltonian reads
//! `H = ε [2 J0 + δ (J+ + J-)]`, and the generators close on
//!
//! ```text
//! [J0, J±] = ±J±
//! [J+, J-] = α J0³ + β J0² + γ J0 + Δ
//! ```
//!
//! Inside a multiplet `j` is a number, so the algebra is fixed per sector.

mod general;
mod rep;
mod supplementary;

pub use general::{
    d_value, general_rep, q1_nonzero_root_square, shift_constraint, GeneralRep, LadderLink, SubLadder,
};
pub use rep::{
    c_values, casimir_eigenvalues_q2, casimir_matrix, casimir_value_half_integer, decompose,
    distinct_diagonal, fg_product_q1, fg_product_q2, q1_constraint_residual, verify_commutators,
    CasimirMatrix, LadderCoefficients, RepLabel, RepMatrices, Stride,
};
pub use supplementary::{enumerate_supplementary, scan_representations, RepKind, ScannedRep};

use crate::error::Result;
use crate::exact::{q, q_int, q_to_f64, Q};
use crate::half::Half;
use crate::quasispin::check_sector;

/// Coefficients of the cubic on the right of `[J+, J-]`.
///
/// `delta0` is the constant term, named to keep it apart from the strength `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyAlgebraParams {
    pub alpha: Q,
    pub beta: Q,
    pub gamma: Q,
    pub delta0: Q,
}

impl PolyAlgebraParams {
    pub fn new(alpha: Q, beta: Q, gamma: Q, delta0: Q) -> Self {
        PolyAlgebraParams { alpha, beta, gamma, delta0 }
    }

    /// `α x³ + β x² + γ x + Δ`.
    pub fn commutator_poly(&self, x: f64) -> f64 {
        let [a, b, g, d] = self.to_f64();
        ((a * x + b) * x + g) * x + d
    }

    pub fn commutator_poly_exact(&self, x: Q) -> Q {
        ((self.alpha * x + self.beta) * x + self.gamma) * x + self.delta0
    }

    /// Polynomial part of the Casimir, `C = J+ J- + casimir_poly(J0)`.
    ///
    /// It satisfies `casimir_poly(x + 1) - casimir_poly(x) = commutator_poly(x)`.
    pub fn casimir_poly_exact(&self, x: Q) -> Q {
        let (a, b, g, d) = (self.alpha, self.beta, self.gamma, self.delta0);
        let c4 = a / q_int(4);
        let c3 = b / q_int(3) - a / q_int(2);
        let c2 = a / q_int(4) - b / q_int(2) + g / q_int(2);
        let c1 = b / q_int(6) - g / q_int(2) + d;
        (((c4 * x + c3) * x + c2) * x + c1) * x
    }

    pub fn casimir_poly(&self, x: f64) -> f64 {
        let (a, b, g, d) = (self.alpha, self.beta, self.gamma, self.delta0);
        let c4 = q_to_f64(&(a / q_int(4)));
        let c3 = q_to_f64(&(b / q_int(3) - a / q_int(2)));
        let c2 = q_to_f64(&(a / q_int(4) - b / q_int(2) + g / q_int(2)));
        let c1 = q_to_f64(&(b / q_int(6) - g / q_int(2) + d));
        (((c4 * x + c3) * x + c2) * x + c1) * x
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [q_to_f64(&self.alpha), q_to_f64(&self.beta), q_to_f64(&self.gamma), q_to_f64(&self.delta0)]
    }
}

/// `2j² + 2j − 1`, the recurring combination of the sector label.
pub(crate) fn sector_constant(j: Half) -> Q {
    let jr = j.to_rational();
    q_int(2) * jr * jr + q_int(2) * jr - q_int(1)
}

/// `α = −16/N², β = 0, γ = 2(2j² + 2j − 1)/N², Δ = 0`.
pub fn lmg_params(n: usize, j: Half) -> Result<PolyAlgebraParams> {
    check_sector(n, j)?;
    let n2 = (n * n) as i128;
    Ok(PolyAlgebraParams {
        alpha: q(-16, n2),
        beta: q_int(0),
        gamma: q_int(2) * sector_constant(j) / q_int(n2),
        delta0: q_int(0),
    })
}
