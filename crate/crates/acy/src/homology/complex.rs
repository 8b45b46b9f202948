//! The Hochschild homology complex (two constructions) and the cohomology
//! complex Hom(P, A).

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::resolution::{generator_terms, Term};
use super::{gen_count, Direction, GradedComplex, HomologyError, Map, Slot, Space};
use crate::algebra::GradedAlgebra;
use crate::linalg::SparseVec;
use crate::scalar::Elem;

/// Sparse column under construction: target (p, gen, basis index) -> coefficient.
type Column = Vec<((usize, usize, usize), Elem)>;

fn add_vector(col: &mut Column, a: &GradedAlgebra, p: usize, gen: Option<usize>, v: &SparseVec, c: &Elem) {
    let t = a.tower();
    for (i, x) in &v.entries {
        let g = gen.unwrap_or_else(|| a.piece(p).src(*i));
        col.push(((p, g, *i), t.mul(c, x)));
    }
}

/// Turn columns indexed by source position into a Map over target positions.
fn assemble(a: &GradedAlgebra, src: &Space, tgt: &Space, columns: Vec<Vec<Column>>) -> Map {
    let t = a.tower();
    let mut cols = BTreeMap::new();
    for (p, level) in columns.into_iter().enumerate() {
        if level.is_empty() {
            continue;
        }
        let degree = src.offset + p as i64;
        let vecs = level
            .into_iter()
            .map(|col| {
                let entries = col
                    .into_iter()
                    .map(|((q, g, x), c)| {
                        debug_assert_eq!(tgt.offset + q as i64, degree);
                        let pos = tgt.position(q, g, x).unwrap_or_else(|| {
                            panic!("image ({g}, {x}) in degree {q} lies outside space {}", tgt.index)
                        });
                        (pos, c)
                    })
                    .collect();
                SparseVec::from_terms(t, entries)
            })
            .collect();
        cols.insert(degree, vecs);
    }
    Map { cols }
}

/// The differential H_n -> H_{n-1} written out slot by slot.
fn direct_map(a: &GradedAlgebra, src: &Space, tgt: &Space) -> Map {
    let gr = a.graph();
    let t = a.tower();
    let top = a.top();
    let k = src.twist as i64;
    let one = t.one();
    let minus = t.from_int(-1);
    let mut columns = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let level = src.level(src.offset + p as i64).unwrap_or(&[]);
        let mut out = Vec::with_capacity(level.len());
        for &(g, xi) in level {
            let x = SparseVec::unit(t, xi);
            let mut col = Column::new();
            match src.slot {
                Slot::Edge => {
                    let xa = a.mul(p, &x, 1, &a.beta_basis(-k, 1, g));
                    add_vector(&mut col, a, p + 1, None, &xa, &one);
                    add_vector(&mut col, a, p + 1, None, &a.left_edge(g, p, &x), &minus);
                }
                Slot::Reversed => {
                    for ([b, b2], w) in a.relation(g) {
                        let xb = a.mul(p, &x, 1, &a.beta_basis(-k, 1, *b));
                        add_vector(&mut col, a, p + 1, Some(*b2), &xb, w);
                        add_vector(&mut col, a, p + 1, Some(*b), &a.left_edge(*b2, p, &x), w);
                    }
                }
                Slot::Top => {
                    for &e in gr.out_edges(g) {
                        let xa = a.mul(p, &x, 1, &a.beta_basis(-k, 1, e));
                        add_vector(&mut col, a, p + 1, Some(e), &xa, &one);
                    }
                    for &e in gr.in_edges(g) {
                        add_vector(&mut col, a, p + 1, Some(e), &a.left_edge(e, p, &x), &minus);
                    }
                }
                Slot::Vertex => {
                    // only idempotents survive: everything else lands above the top degree
                    if p == 0 {
                        let bx = a.beta(1, 0, &x);
                        for q in 0..=top {
                            for w in 0..a.dim(q) {
                                if a.piece(q).src(w) != g {
                                    continue;
                                }
                                let left = a.mul(top - q, a.form().dual(q, w), 0, &bx);
                                let v = a.mul(top - q, &left, q, &a.beta_basis(-(k - 1), q, w));
                                add_vector(&mut col, a, top, Some(a.piece(q).dst(w)), &v, &one);
                            }
                        }
                    }
                }
            }
            out.push(col);
        }
        columns.push(out);
    }
    assemble(a, src, tgt, columns)
}

fn all_terms(a: &GradedAlgebra, slot: Slot) -> Vec<Vec<Term>> {
    (0..gen_count(a, slot)).map(|g| generator_terms(a, slot, g)).collect()
}

/// H_n -> H_{n-1} from the resolution: x (x) g' maps to
/// sum c g (x) z beta^{-m'}(beta^m(x) y) over the terms c y (x) g (x) z of mu(g').
fn generic_map(a: &GradedAlgebra, src: &Space, tgt: &Space) -> Map {
    let t = a.tower();
    let (m, m2) = (src.twist as i64, tgt.twist as i64);
    let terms = all_terms(a, src.slot);
    let mut columns = Vec::new();
    for p in 0..=a.top() {
        let level = src.level(src.offset + p as i64).unwrap_or(&[]);
        let mut out = Vec::with_capacity(level.len());
        for &(g, xi) in level {
            let bx = a.beta_basis(m, p, xi);
            let mut col = Column::new();
            for term in &terms[g] {
                let (yd, y) = term.left;
                let (zd, z) = term.right;
                let xy = a.mul_by_basis(p, &bx, yd, y);
                if xy.is_zero() {
                    continue;
                }
                let inner = a.beta(-m2, p + yd, &xy);
                let v = a.mul(zd, &SparseVec::unit(t, z), p + yd, &inner);
                add_vector(&mut col, a, p + yd + zd, Some(term.gen), &v, &term.coeff);
            }
            out.push(col);
        }
        columns.push(out);
    }
    assemble(a, src, tgt, columns)
}

/// Hom(P_n, A) -> Hom(P_{n+1}, A): (d phi)(g') = sum c y phi(g) beta^m(z).
fn cohomology_map(a: &GradedAlgebra, src: &Space, tgt: &Space) -> Map {
    let t = a.tower();
    let m = src.twist as i64;
    let next = all_terms(a, tgt.slot);
    // terms of mu_{n+1} grouped by the generator of P_n they hit
    let mut hitting: Vec<Vec<(usize, &Term)>> = vec![Vec::new(); gen_count(a, src.slot)];
    for (g2, ts) in next.iter().enumerate() {
        for term in ts {
            hitting[term.gen].push((g2, term));
        }
    }
    let mut columns = Vec::new();
    for p in 0..=a.top() {
        let level = src.level(src.offset + p as i64).unwrap_or(&[]);
        let mut out = Vec::with_capacity(level.len());
        for &(g, xi) in level {
            let x = SparseVec::unit(t, xi);
            let mut col = Column::new();
            for &(g2, term) in &hitting[g] {
                let (yd, y) = term.left;
                let (zd, z) = term.right;
                let yx = a.mul(yd, &SparseVec::unit(t, y), p, &x);
                if yx.is_zero() {
                    continue;
                }
                let v = a.mul(yd + p, &yx, zd, &a.beta_basis(m, zd, z));
                add_vector(&mut col, a, p + yd + zd, Some(g2), &v, &term.coeff);
            }
            out.push(col);
        }
        columns.push(out);
    }
    assemble(a, src, tgt, columns)
}

fn homology_complex(
    a: &GradedAlgebra,
    n_max: usize,
    build: fn(&GradedAlgebra, &Space, &Space) -> Map,
) -> Result<GradedComplex, HomologyError> {
    let spaces: Vec<Space> = (0..=n_max).map(|n| Space::homology(a, n)).collect();
    let mut maps: Vec<Option<Map>> = (0..=n_max)
        .into_par_iter()
        .map(|n| (n > 0).then(|| build(a, &spaces[n], &spaces[n - 1])))
        .collect();
    maps.truncate(n_max + 1);
    GradedComplex::new(Direction::Homology, a.tower().clone(), spaces, maps)
}

/// Homology complex H_0 <- H_1 <- ... <- H_{n_max} from the slot formulas.
pub fn build_hh_complex(a: &GradedAlgebra, n_max: usize) -> Result<GradedComplex, HomologyError> {
    homology_complex(a, n_max, direct_map)
}

/// The same complex obtained by tensoring the resolution with A.
pub fn build_hh_complex_generic(a: &GradedAlgebra, n_max: usize) -> Result<GradedComplex, HomologyError> {
    homology_complex(a, n_max, generic_map)
}

/// Cochain complex C^0 -> ... -> C^{n_max} computing HH^*.
pub fn build_cohomology_complex(a: &GradedAlgebra, n_max: usize) -> Result<GradedComplex, HomologyError> {
    let spaces: Vec<Space> = (0..=n_max).map(|n| Space::cohomology(a, n)).collect();
    let maps: Vec<Option<Map>> = (0..=n_max)
        .into_par_iter()
        .map(|n| (n < n_max).then(|| cohomology_map(a, &spaces[n], &spaces[n + 1])))
        .collect();
    GradedComplex::new(Direction::Cohomology, a.tower().clone(), spaces, maps)
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
    fn both_constructions_agree_and_square_to_zero() {
        for f in [Family::A(4), Family::A(5), Family::E8Star] {
            let a = algebra(f);
            let direct = build_hh_complex(&a, 13).unwrap();
            let generic = build_hh_complex_generic(&a, 13).unwrap();
            direct.check_d2().unwrap();
            for n in 1..=13 {
                let (x, y) = (direct.maps[n].as_ref().unwrap(), generic.maps[n].as_ref().unwrap());
                assert_eq!(x.cols, y.cols, "{f} index {n}");
            }
        }
    }

    #[test]
    fn a4_low_homology() {
        let a = algebra(Family::A(4));
        let c = build_hh_complex(&a, 4).unwrap();
        assert_eq!(c.homology(0).unwrap().get(0), a.graph().num_vertices() as i64);
    }

    #[test]
    fn cohomology_squares_to_zero() {
        for f in [Family::A(4), Family::A(6), Family::E8Star] {
            let a = algebra(f);
            build_cohomology_complex(&a, 14).unwrap().check_d2().unwrap();
        }
    }
}
