//! Finite representations of the general cubic algebra for strides 1 and 2.
//!
//! States `|J M⟩` carry `J0 = M/q + c`. They fall into `q` sub-ladders
//! `M = J − l − qk`, `l = 0 … q−1`, each ending at `M = −J + d` with
//! `d = (2J − l) mod q`. Summing the commutator polynomial down a sub-ladder
//! gives the products; requiring the product below the last state to vanish
//! gives one cubic equation in `c` per sub-ladder.

use super::{PolyAlgebraParams, Stride};
use crate::error::{Error, Result};
use crate::exact::{q, q_int, q_to_f64, Q};
use crate::half::Half;

/// Offset `d` of the sub-ladder bottom `−J + d`.
pub fn d_value(q: Stride, big_j: Half, l: usize) -> usize {
    let qv = q.value() as i64;
    ((big_j.twice() - l as i64).rem_euclid(qv)) as usize
}

/// Number of states in sub-ladder `l`, zero when it is empty.
fn sub_ladder_len(q: Stride, big_j: Half, l: usize) -> usize {
    let d = d_value(q, big_j, l) as i64;
    let span = big_j.twice() - d - l as i64;
    if span < 0 {
        0
    } else {
        (span / q.value() as i64 + 1) as usize
    }
}

/// Coefficients `[c⁰, c¹, c², c³]` of the constraint for sub-ladder `l`.
///
/// ```text
/// α [c³ + 3(d−l)/2q c² + ((J² − J(d+l) + l² − dl + d²)/q² + (2J−d−l)/2q) c
///    + (2J²(d−l) − 2J(d²−l²) + d³ − d²l + dl² − l³)/4q³ + (l² − d² + 2J(d−l))/4q²]
/// + β [c² + (d−l)/q c + (J² − J(d+l) + d² − dl + l²)/3q² + (2J−d−l)/6q]
/// + γ (c + (d−l)/2q) + Δ = 0
/// ```
pub fn shift_constraint(params: &PolyAlgebraParams, q: Stride, big_j: Half, l: usize) -> [Q; 4] {
    let d = d_value(q, big_j, l) as i128;
    let l = l as i128;
    let qq = q_int(q.value() as i128);
    let jr = big_j.to_rational();
    let (dq, lq) = (q_int(d), q_int(l));
    let quad = jr * jr - jr * (dq + lq) + lq * lq - dq * lq + dq * dq;
    let span = q_int(2) * jr - dq - lq;

    let a = [
        (q_int(2) * jr * jr * (dq - lq) - q_int(2) * jr * (dq * dq - lq * lq) + dq * dq * dq - dq * dq * lq
            + dq * lq * lq
            - lq * lq * lq)
            / (q_int(4) * qq * qq * qq)
            + (lq * lq - dq * dq + q_int(2) * jr * (dq - lq)) / (q_int(4) * qq * qq),
        quad / (qq * qq) + span / (q_int(2) * qq),
        q_int(3) * (dq - lq) / (q_int(2) * qq),
        q_int(1),
    ];
    let b = [quad / (q_int(3) * qq * qq) + span / (q_int(6) * qq), (dq - lq) / qq, q_int(1), q_int(0)];
    let g = [(dq - lq) / (q_int(2) * qq), q_int(1), q_int(0), q_int(0)];
    let mut out = [q_int(0); 4];
    for i in 0..4 {
        out[i] = params.alpha * a[i] + params.beta * b[i] + params.gamma * g[i];
    }
    out[0] += params.delta0;
    out
}

/// One ladder link: the product `f(M − q) g(M)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderLink {
    pub m: Half,
    pub product: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubLadder {
    pub l: usize,
    pub d: usize,
    /// `k = 0 …` down the sub-ladder; the last entry is the boundary link
    /// below the bottom state, which vanishes for an admissible `c`.
    pub links: Vec<LadderLink>,
}

impl SubLadder {
    pub fn boundary(&self) -> f64 {
        self.links.last().map_or(0.0, |l| l.product)
    }

    pub fn interior(&self) -> &[LadderLink] {
        &self.links[..self.links.len().saturating_sub(1)]
    }
}

/// A representation of the general algebra for one real root `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralRep {
    pub q: Stride,
    pub big_j: Half,
    pub c: f64,
    pub sub_ladders: Vec<SubLadder>,
}

impl GeneralRep {
    /// Product `f(M − q) g(M)` for an interior link, if `M` is on a ladder.
    pub fn product_at(&self, m: Half) -> Option<f64> {
        self.sub_ladders.iter().flat_map(|s| s.interior()).find(|l| l.m == m).map(|l| l.product)
    }
}

fn link_product(params: &PolyAlgebraParams, x: f64, k: f64) -> f64 {
    let [a, b, g, d] = params.to_f64();
    (k + 1.0)
        * (a * x.powi(3) + b * x * x + g * x + d - 0.5 * (3.0 * a * x * x + 2.0 * b * x + g) * k
            + (3.0 * a * x + b) * k * (2.0 * k + 1.0) / 6.0
            - a / 4.0 * k * k * (k + 1.0))
}

/// Real roots of the shift constraints and the ladders they produce.
///
/// For `q = 2` a root must solve both sub-ladder equations. An identically
/// vanishing equation imposes nothing.
pub fn general_rep(params: &PolyAlgebraParams, q: Stride, big_j: Half) -> Result<Vec<GeneralRep>> {
    if big_j.twice() < 0 {
        return Err(Error::InvalidRepresentation(format!("J = {big_j} is negative")));
    }
    let active: Vec<usize> = (0..q.value()).filter(|&l| sub_ladder_len(q, big_j, l) > 0).collect();
    let equations: Vec<[Q; 4]> = active
        .iter()
        .map(|&l| shift_constraint(params, q, big_j, l))
        .filter(|e| e.iter().any(|c| *c != q_int(0)))
        .collect();

    let roots = match equations.first() {
        None => {
            return Err(Error::IncompatibleConstraints(format!(
                "every constraint vanishes identically for q = {}, J = {big_j}; c is undetermined",
                q.value()
            )))
        }
        Some(first) => {
            let mut roots = real_roots(&to_f64(first));
            roots.retain(|&c| {
                equations[1..].iter().all(|e| {
                    let p = to_f64(e);
                    let reach = c.abs().max(1.0);
                    let scale = p.iter().enumerate().map(|(i, v)| v.abs() * reach.powi(i as i32)).sum::<f64>();
                    eval(&p, c).abs() <= 1e-9 * scale
                })
            });
            roots
        }
    };
    if roots.is_empty() {
        return Err(Error::IncompatibleConstraints(format!(
            "no real c solves the {} constraint(s) for q = {}, J = {big_j}",
            equations.len(),
            q.value()
        )));
    }

    Ok(roots
        .into_iter()
        .map(|c| {
            let sub_ladders = active
                .iter()
                .map(|&l| {
                    let d = d_value(q, big_j, l);
                    let len = sub_ladder_len(q, big_j, l);
                    let x = (big_j.to_f64() - l as f64) / q.value() as f64 + c;
                    let links = (0..len)
                        .map(|k| LadderLink {
                            m: Half::from_twice(big_j.twice() - 2 * (l + q.value() * k) as i64),
                            product: link_product(params, x, k as f64),
                        })
                        .collect();
                    SubLadder { l, d, links }
                })
                .collect();
            GeneralRep { q, big_j, c, sub_ladders }
        })
        .collect())
}

fn to_f64(p: &[Q; 4]) -> [f64; 4] {
    [q_to_f64(&p[0]), q_to_f64(&p[1]), q_to_f64(&p[2]), q_to_f64(&p[3])]
}

fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Real roots of `p[0] + p[1] x + p[2] x² + p[3] x³`, ascending.
///
/// Splits the line at the critical points and bisects each monotone piece;
/// double roots at a critical point are caught by the value test there.
pub(crate) fn real_roots(p: &[f64; 4]) -> Vec<f64> {
    let mut deg = 3;
    while deg > 0 && p[deg] == 0.0 {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    if p[0] == 0.0 {
        // exact root at zero: deflate
        let mut rest = real_roots(&[p[1], p[2], p[3], 0.0]);
        if !rest.contains(&0.0) {
            rest.push(0.0);
        }
        rest.sort_by(f64::total_cmp);
        return rest;
    }
    let coeffs = &p[..=deg];
    let lead = coeffs[deg];
    let bound = 1.0 + coeffs[..deg].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let scale_at = |x: f64| coeffs.iter().enumerate().map(|(i, c)| c.abs() * x.abs().powi(i as i32)).sum::<f64>();

    let deriv: Vec<f64> = (1..=deg).map(|i| coeffs[i] * i as f64).collect();
    let mut crit: Vec<f64> = match deriv.len() {
        1 => Vec::new(),
        2 => vec![-deriv[0] / deriv[1]],
        _ => {
            let (a, b, c) = (deriv[2], deriv[1], deriv[0]);
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                Vec::new()
            } else {
                let s = disc.sqrt();
                let q = -0.5 * (b + b.signum() * s);
                let mut v = Vec::new();
                if q != 0.0 {
                    v.push(c / q);
                }
                v.push(q / a);
                v
            }
        }
    };
    crit.retain(|x| x.is_finite() && x.abs() < bound);
    crit.sort_by(f64::total_cmp);

    let mut knots = vec![-bound];
    knots.extend(crit.iter().copied());
    knots.push(bound);

    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if !roots.iter().any(|x| (x - r).abs() <= 1e-12 * r.abs().max(1.0)) {
            roots.push(r);
        }
    };
    for &x in &crit {
        if eval(coeffs, x).abs() <= 1e-14 * scale_at(x).max(1e-300) {
            push(x, &mut roots);
        }
    }
    for w in knots.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval(coeffs, lo), eval(coeffs, hi));
        if flo == 0.0 {
            push(lo, &mut roots);
            continue;
        }
        if fhi == 0.0 {
            push(hi, &mut roots);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let fm = eval(coeffs, mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        push(0.5 * (lo + hi), &mut roots);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// `−J(J+1) − γ/α`, the nonzero-root square of the `q = 1` constraint with `β = Δ = 0`.
pub fn q1_nonzero_root_square(params: &PolyAlgebraParams, big_j: Half) -> Option<Q> {
    if params.alpha == q_int(0) {
        return None;
    }
    let jr = big_j.to_rational();
    Some(-jr * (jr + q(1, 1)) - params.gamma / params.alpha)
}

#[cfg(test)]
mod tests {
    use super::super::{c_values, decompose, fg_product_q1, fg_product_q2, lmg_params};
    use super::*;
    use crate::quasispin::multiplicities;

    fn h(t: i64) -> Half {
        Half::from_twice(t)
    }

    #[test]
    fn d_rules() {
        assert_eq!(d_value(Stride::One, h(5), 0), 0);
        assert_eq!(d_value(Stride::Two, h(4), 0), 0);
        assert_eq!(d_value(Stride::Two, h(4), 1), 1);
        assert_eq!(d_value(Stride::Two, h(3), 0), 1);
        assert_eq!(d_value(Stride::Two, h(3), 1), 0);
    }

    #[test]
    fn q1_constraint_reduces_without_even_terms() {
        // β = Δ = 0: c [α c² + α J(J+1) + γ]
        let p = PolyAlgebraParams::new(q(-3, 7), q_int(0), q(5, 2), q_int(0));
        for tj in 0..10 {
            let bj = h(tj).to_rational();
            let e = shift_constraint(&p, Stride::One, h(tj), 0);
            assert_eq!(e, [q_int(0), p.alpha * bj * (bj + q_int(1)) + p.gamma, q_int(0), p.alpha]);
        }
    }

    #[test]
    fn constraint_is_boundary_product() {
        // the bottom link of each sub-ladder equals (K+1) times the constraint
        let p = PolyAlgebraParams::new(q(-2, 3), q(1, 5), q(7, 4), q(-1, 9));
        for stride in [Stride::One, Stride::Two] {
            for tj in 0..9 {
                for l in 0..stride.value() {
                    let len = sub_ladder_len(stride, h(tj), l);
                    if len == 0 {
                        continue;
                    }
                    let e = to_f64(&shift_constraint(&p, stride, h(tj), l));
                    for c in [-1.3, -0.25, 0.0, 0.4, 2.0] {
                        let x = (h(tj).to_f64() - l as f64) / stride.value() as f64 + c;
                        let k = (len - 1) as f64;
                        let lhs = link_product(&p, x, k);
                        let rhs = (k + 1.0) * eval(&e, c);
                        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0), "{stride:?} J={} l={l} c={c}", h(tj));
                    }
                }
            }
        }
    }

    #[test]
    fn link_product_sums_commutator_poly() {
        // independent route: Σ_{i=0}^{k} φ(x − i)
        let p = PolyAlgebraParams::new(q(-5, 3), q(2, 7), q(1, 2), q(3, 11));
        for x in [-1.75, 0.0, 0.5, 2.25] {
            for k in 0..8 {
                let direct: f64 = (0..=k).map(|i| p.commutator_poly(x - i as f64)).sum();
                let formula = link_product(&p, x, k as f64);
                assert!((direct - formula).abs() < 1e-10 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn q1_lmg_roots_match_c_values() {
        for n in [5usize, 7, 8, 10] {
            for mult in multiplicities(n) {
                let params = lmg_params(n, mult.j).unwrap();
                for tbj in 0..=n as i64 {
                    let reps = general_rep(&params, Stride::One, h(tbj)).unwrap();
                    let mut got: Vec<f64> = reps.iter().map(|r| r.c).collect();
                    let mut want: Vec<f64> = c_values(mult.j, h(tbj)).iter().map(|c| c.to_f64()).collect();
                    got.sort_by(f64::total_cmp);
                    want.sort_by(f64::total_cmp);
                    assert_eq!(got.len(), want.len(), "j={} J={}", mult.j, h(tbj));
                    for (a, b) in got.iter().zip(&want) {
                        assert!((a - b).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn q1_lmg_ladder_matches_closed_product() {
        let params = lmg_params(7, h(5)).unwrap();
        let reps = general_rep(&params, Stride::One, h(2)).unwrap();
        let r = reps.iter().find(|r| (r.c - 0.25).abs() < 1e-12).unwrap();
        let links = &r.sub_ladders[0].links;
        let vals: Vec<f64> = links.iter().map(|l| l.product).collect();
        let want = [10.0 / 49.0, 18.0 / 49.0, 0.0];
        for (a, b) in vals.iter().zip(want) {
            assert!((a - b).abs() < 1e-14, "{vals:?}");
        }

        for n in 1..=10usize {
            for mult in multiplicities(n) {
                let params = lmg_params(n, mult.j).unwrap();
                for rep in decompose(mult.j, n).unwrap() {
                    let g = general_rep(&params, Stride::One, rep.big_j).unwrap();
                    let g = g.iter().find(|g| (g.c - rep.c.to_f64()).abs() < 1e-12).unwrap();
                    assert!(g.sub_ladders[0].boundary().abs() < 1e-12);
                    for link in g.sub_ladders[0].interior() {
                        let want = fg_product_q1(mult.j, rep.big_j, rep.c, link.m, n).unwrap().to_f64();
                        assert!((link.product - want).abs() < 1e-12, "{rep} M={}", link.m);
                    }
                }
            }
        }
    }

    #[test]
    fn q2_lmg_reproduces_multiplet_products() {
        for n in 2..=10usize {
            for mult in multiplicities(n) {
                let params = lmg_params(n, mult.j).unwrap();
                let reps = general_rep(&params, Stride::Two, mult.j).unwrap();
                let zero = reps.iter().find(|r| r.c.abs() < 1e-12).expect("c = 0 solves both equations");
                for m in mult.j.down_to(-mult.j + h(4)) {
                    let want = q_to_f64(&fg_product_q2(mult.j, mult.j, m, n).unwrap());
                    let got = zero.product_at(m).unwrap();
                    assert!((got - want).abs() < 1e-12, "j={} M'={m}", mult.j);
                }
                for s in &zero.sub_ladders {
                    assert!(s.boundary().abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn incompatible_q2_constraints() {
        // Δ alone: every equation is the nonzero constant Δ
        let p = PolyAlgebraParams::new(q_int(0), q_int(0), q_int(0), q_int(1));
        assert!(matches!(general_rep(&p, Stride::Two, h(4)), Err(Error::IncompatibleConstraints(_))));
        let zero = PolyAlgebraParams::new(q_int(0), q_int(0), q_int(0), q_int(0));
        assert!(general_rep(&zero, Stride::One, h(2)).is_err());
    }

    #[test]
    fn cubic_roots() {
        let r = real_roots(&[-6.0, 11.0, -6.0, 1.0]);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        // double root at 1: (x−1)²(x+2)
        let r = real_roots(&[2.0, -3.0, 0.0, 1.0]);
        assert_eq!(r.len(), 2, "{r:?}");
        assert!(real_roots(&[1.0, 0.0, 1.0, 0.0]).is_empty());
        assert_eq!(real_roots(&[0.0, 0.0, 0.0, 1.0]), vec![0.0]);
        assert_eq!(real_roots(&[3.0, 2.0, 0.0, 0.0]), vec![-1.5]);
    }

    #[test]
    fn nonzero_root_square() {
        let params = lmg_params(7, h(5)).unwrap();
        assert_eq!(q1_nonzero_root_square(&params, h(2)), Some(q(1, 16)));
    }
}
