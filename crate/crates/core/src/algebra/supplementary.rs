//! Stride-1 representations of a sector's algebra beyond the two that
//! decompose the `j` multiplet.

use super::{c_values, decompose, LadderCoefficients, RepLabel};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::quasispin::check_sector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// One of the pieces of the `j` multiplet.
    Lmg,
    /// Admissible for the algebra but not realized by the two-level model.
    Supplementary,
}

impl RepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RepKind::Lmg => "LMG",
            RepKind::Supplementary => "supplementary",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScannedRep {
    pub rep: RepLabel,
    pub kind: RepKind,
    /// Every ladder product is nonnegative, so the block is real symmetric.
    pub admissible: bool,
    pub ladder: LadderCoefficients,
}

/// Every `(J, c)` with `J ≤ j_max` and `c` from [`c_values`], admissible or not.
pub fn scan_representations(j: Half, n: usize, j_max: Half) -> Result<Vec<ScannedRep>> {
    check_sector(n, j)?;
    if j_max.twice() < 0 {
        return Err(Error::InvalidArgument(format!("J_max = {j_max} is negative")));
    }
    let lmg = decompose(j, n)?;
    let mut out = Vec::new();
    for twice in 0..=j_max.twice() {
        let big_j = Half::from_twice(twice);
        for c in c_values(j, big_j) {
            let rep = RepLabel::q1(j, big_j, c, n);
            let ladder = rep.ladder()?;
            let kind = if lmg.contains(&rep) { RepKind::Lmg } else { RepKind::Supplementary };
            out.push(ScannedRep { rep, kind, admissible: ladder.all_nonnegative(), ladder });
        }
    }
    Ok(out)
}

/// The admissible subset of [`scan_representations`].
pub fn enumerate_supplementary(j: Half, n: usize, j_max: Half) -> Result<Vec<ScannedRep>> {
    Ok(scan_representations(j, n, j_max)?.into_iter().filter(|s| s.admissible).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> Half {
        Half::from_twice(t)
    }

    #[test]
    fn contains_lmg_reps() {
        for n in 1..=10usize {
            for mult in crate::quasispin::multiplicities(n) {
                let found = enumerate_supplementary(mult.j, n, mult.j).unwrap();
                for rep in decompose(mult.j, n).unwrap() {
                    let s = found.iter().find(|s| s.rep == rep).expect("LMG rep admissible");
                    assert_eq!(s.kind, RepKind::Lmg);
                }
            }
        }
    }

    #[test]
    fn j4_n8_scan() {
        let found = enumerate_supplementary(h(8), 8, h(12)).unwrap();
        assert!(found.iter().all(|s| s.ladder.values().iter().all(|v| *v >= 0.0)));
        let lmg: Vec<_> = found.iter().filter(|s| s.kind == RepKind::Lmg).collect();
        assert_eq!(lmg.len(), 2);
        let extra: Vec<_> = found.iter().filter(|s| s.kind == RepKind::Supplementary).collect();
        assert!(!extra.is_empty());
        assert!(extra.iter().any(|s| s.rep.big_j != h(4) && s.rep.big_j != h(3)));
        // admissibility is decided exactly; the scan also reports failures
        let all = scan_representations(h(8), 8, h(12)).unwrap();
        assert!(all.iter().any(|s| !s.admissible));
        assert_eq!(all.iter().filter(|s| s.admissible).count(), found.len());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(scan_representations(h(3), 8, h(2)).is_err());
        assert!(scan_representations(h(8), 8, h(-1)).is_err());
    }
}
