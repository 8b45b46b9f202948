//! HH_0 = A/[A, A] straight from the algebra, and HH^0 from an HH table.

use rayon::prelude::*;

use super::HomologyError;
use crate::algebra::GradedAlgebra;
use crate::linalg::Echelon;
use crate::series::GradedDims;

/// Graded dimension of A/[A, A], by spanning commutators of basis elements.
///
/// Non-cyclic paths are commutators with an idempotent, so only the cyclic
/// blocks i A_k i contribute; there the span of x y - y x over x in i A_p j,
/// y in j A_{k-p} i (0 < p < k) is removed.
pub fn hh0_direct(a: &GradedAlgebra) -> Result<GradedDims, HomologyError> {
    let t = a.tower();
    let n = a.graph().num_vertices();
    let dims: Vec<(i64, i64)> = (0..=a.top())
        .into_par_iter()
        .map(|k| {
            let cyclic: usize = (0..n).map(|i| a.block(k, i, i).len()).sum();
            let mut span = Echelon::new();
            for p in 1..k {
                for i in 0..n {
                    for j in 0..n {
                        for &x in a.block(p, i, j) {
                            for &y in a.block(k - p, j, i) {
                                let c = a.mul_basis(p, x, k - p, y).sub(t, &a.mul_basis(k - p, y, p, x));
                                if !c.is_zero() {
                                    span.insert(t, &c)?;
                                }
                            }
                        }
                    }
                }
            }
            Ok((k as i64, (cyclic - span.rank()) as i64))
        })
        .collect::<Result<_, HomologyError>>()?;
    Ok(GradedDims::from_terms(dims))
}

/// HH^0 = HH_3'[-3] + L, with HH_3' the part of HH_3 in total degrees
/// 3..h-1 and L spanned by the top elements u_j with nu(j) = j (degree h-3).
pub fn hh0_cohomology(a: &GradedAlgebra, hh3: &GradedDims) -> GradedDims {
    let g = a.graph();
    let h = g.h as i64;
    let mut out = GradedDims::zero();
    for (d, k) in hh3.terms() {
        if (3..h).contains(&d) {
            out.add_term(d - 3, k);
        }
    }
    let fixed = (0..g.num_vertices()).filter(|&j| g.nu_vertex[j] == j).count() as i64;
    out.add_term(h - 3, fixed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::cells::{builtin_potential, CellSource, SolveOptions};
    use crate::quiver::Family;

    fn algebra(f: Family) -> GradedAlgebra {
        let prep = builtin_potential(f, CellSource::Builtin, &SolveOptions::default()).unwrap();
        build_algebra(&prep.potential.relations()).unwrap()
    }

    #[test]
    fn e8star_commutator_quotient() {
        let a = algebra(Family::E8Star);
        let expected = GradedDims::from_terms([(0, 4), (1, 2), (2, 1), (3, 1), (5, 1)]);
        assert_eq!(hh0_direct(&a).unwrap(), expected);
    }

    #[test]
    fn a_graphs_have_no_reduced_part() {
        for n in 4..=7 {
            let a = algebra(Family::A(n));
            let nv = a.graph().num_vertices() as i64;
            assert_eq!(hh0_direct(&a).unwrap(), GradedDims::from_terms([(0, nv)]));
        }
    }
}
