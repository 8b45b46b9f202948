//! Cyclic homology from Hochschild homology by degreewise bookkeeping.
//!
//! With reduced groups (HH_0 and HC_0 less the idempotents S in degree 0),
//! the Connes sequence splits into dim HH_{n+1} = dim HC_n + dim HC_{n+1}
//! at each internal degree. Above the last non-zero HH at a degree, HC
//! vanishes, so HC is recovered from the top down.

use thiserror::Error;

use crate::series::GradedDims;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclicError {
    #[error("HH table of length {len} does not reach past degree {cutoff}")]
    Incomplete { len: usize, cutoff: i64 },
    #[error("negative cyclic dimension at index {index}, degree {degree}")]
    Negative { index: usize, degree: i64 },
    #[error("HC_0 differs from HH_0 at degree {degree}")]
    Mismatch { degree: i64 },
}

/// Lowest total degree of generators at homological index n.
pub fn index_offset(h: u32, n: usize) -> i64 {
    (n / 4) as i64 * h as i64 + (n % 4) as i64
}

/// HC_0..HC_{len-1} through degree `cutoff` from HH_0..HH_{len-1}.
///
/// HH_n lives in degrees >= index_offset(n), so the table must run past the
/// cutoff: every HH_i with i >= len is then zero at the degrees asked for.
pub fn cyclic_from_hh(hh: &[GradedDims], vertices: usize, h: u32, cutoff: i64) -> Result<Vec<GradedDims>, CyclicError> {
    let len = hh.len();
    if len == 0 || index_offset(h, len) <= cutoff {
        return Err(CyclicError::Incomplete { len, cutoff });
    }
    let s = GradedDims::monomial(vertices as i64, 0);
    let reduced: Vec<GradedDims> = hh
        .iter()
        .enumerate()
        .map(|(n, x)| if n == 0 { x.sub(&s) } else { x.clone() }.truncate(cutoff))
        .collect();

    let mut hc = vec![GradedDims::zero(); len];
    for n in (0..len - 1).rev() {
        hc[n] = reduced[n + 1].sub(&hc[n + 1]);
        if let Some((d, _)) = hc[n].terms().find(|&(_, k)| k < 0) {
            return Err(CyclicError::Negative { index: n, degree: d });
        }
    }
    // top index: HH_len = 0 forces HC_{len-1} = -HC_len = 0 already
    if let Some((d, _)) = hc[0].sub(&reduced[0]).terms().next() {
        return Err(CyclicError::Mismatch { degree: d });
    }
    hc[0] = hc[0].add(&s);
    Ok(hc)
}

/// Coefficients of sum_i (-1)^i dim reduced HC_i through degree `cutoff`,
/// comparable with the product formula for the Euler characteristic.
pub fn euler_of_hc(hc: &[GradedDims], vertices: usize, cutoff: i64) -> Vec<i64> {
    let mut out = vec![0i64; cutoff.max(0) as usize + 1];
    for (i, x) in hc.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (d, k) in x.terms() {
            let k = if i == 0 && d == 0 { k - vertices as i64 } else { k };
            if (0..=cutoff).contains(&d) {
                out[d as usize] += sign * k;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(terms: &[(i64, i64)]) -> GradedDims {
        GradedDims::from_terms(terms.iter().copied())
    }

    #[test]
    fn zero_reduced_homology_gives_zero_cyclic() {
        let hh = vec![g(&[(0, 3)]), GradedDims::zero(), GradedDims::zero()];
        let hc = cyclic_from_hh(&hh, 3, 4, 1).unwrap();
        assert_eq!(hc, vec![g(&[(0, 3)]), GradedDims::zero(), GradedDims::zero()]);
    }

    #[test]
    fn two_periods_of_a4_shape() {
        // HH_2 = HH_3 = t^3, HH_8 = HH_9 = t^9 (h = 4, through degree 9)
        let mut hh = vec![GradedDims::zero(); 12];
        hh[0] = g(&[(0, 3)]);
        hh[2] = g(&[(3, 1)]);
        hh[3] = g(&[(3, 1)]);
        hh[8] = g(&[(9, 1)]);
        hh[9] = g(&[(9, 1)]);
        let hc = cyclic_from_hh(&hh, 3, 4, 9).unwrap();
        assert_eq!(hc[2], g(&[(3, 1)]));
        assert_eq!(hc[3], GradedDims::zero());
        assert_eq!(hc[8], g(&[(9, 1)]));
        assert_eq!(euler_of_hc(&hc, 3, 9), vec![0, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn inconsistent_tables_are_rejected() {
        let mut hh = vec![GradedDims::zero(); 8];
        hh[0] = g(&[(0, 1)]);
        hh[1] = g(&[(2, 1)]);
        assert_eq!(cyclic_from_hh(&hh, 1, 4, 4), Err(CyclicError::Mismatch { degree: 2 }));
        assert!(matches!(cyclic_from_hh(&hh, 1, 4, 8), Err(CyclicError::Incomplete { .. })));
    }
}
