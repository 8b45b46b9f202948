//! The periodic bimodule resolution P_n = A (x)_S G_r (x)_S N^(m), n = 4m + r,
//! its differentials on generators, and the exactness check.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{gen_count, gen_ends, HomologyError, Slot};
use crate::algebra::GradedAlgebra;
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Elem;

/// c * left (x) gen (x) right, with left and right algebra basis elements
/// given as (degree, index).
#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub coeff: Elem,
    pub left: (usize, usize),
    pub gen: usize,
    pub right: (usize, usize),
}

/// mu_n(1 (x) g (x) 1) for a generator g of slot `slot(n)`; n >= 1. The
/// formula only depends on the slot (mu_{n+4} = mu_n up to the twist).
pub(crate) fn generator_terms(a: &GradedAlgebra, slot: Slot, g: usize) -> Vec<Term> {
    let gr = a.graph();
    let t = a.tower();
    let one = t.one();
    let minus = t.from_int(-1);
    match slot {
        Slot::Edge => {
            let (s, r) = (gr.src(g), gr.dst(g));
            vec![
                Term { coeff: one, left: (1, g), gen: r, right: (0, r) },
                Term { coeff: minus, left: (0, s), gen: s, right: (1, g) },
            ]
        }
        Slot::Reversed => {
            let mut out = Vec::new();
            for ([b, b2], w) in a.relation(g) {
                out.push(Term { coeff: w.clone(), left: (1, *b), gen: *b2, right: (0, gr.dst(*b2)) });
                out.push(Term { coeff: w.clone(), left: (0, gr.src(*b)), gen: *b, right: (1, *b2) });
            }
            out
        }
        Slot::Top => {
            let mut out = Vec::new();
            for &e in gr.out_edges(g) {
                out.push(Term { coeff: one.clone(), left: (1, e), gen: e, right: (0, g) });
            }
            for &e in gr.in_edges(g) {
                out.push(Term { coeff: minus.clone(), left: (0, g), gen: e, right: (1, e) });
            }
            out
        }
        Slot::Vertex => {
            let form = a.form();
            let top = a.top();
            let mut out = Vec::new();
            for q in 0..=top {
                for w in 0..a.dim(q) {
                    if a.piece(q).src(w) != g {
                        continue;
                    }
                    let r = a.piece(q).dst(w);
                    for (v, c) in &form.dual(q, w).entries {
                        out.push(Term { coeff: c.clone(), left: (q, w), gen: r, right: (top - q, *v) });
                    }
                }
            }
            out
        }
    }
}

/// Twist m of P_n and the degree m h + r of its generators.
pub(crate) fn twist_and_shift(a: &GradedAlgebra, n: usize) -> (usize, i64) {
    let m = n / 4;
    (m % 3, (m as i64) * a.graph().h as i64 + (n % 4) as i64)
}

/// y (x) g (x) z as (deg y, y, g, deg z, z).
type Triple = (usize, usize, usize, usize, usize);

/// P_n at one total degree, split into bimodule blocks (left vertex, right vertex).
struct Cell {
    blocks: BTreeMap<(usize, usize), Vec<Triple>>,
    pos: HashMap<Triple, ((usize, usize), usize)>,
}

fn ends_lists(a: &GradedAlgebra) -> (Vec<Vec<Vec<usize>>>, Vec<Vec<Vec<usize>>>) {
    let n = a.graph().num_vertices();
    let mut ending = vec![vec![Vec::new(); n]; a.top() + 1];
    let mut starting = vec![vec![Vec::new(); n]; a.top() + 1];
    for (p, (e, s)) in ending.iter_mut().zip(starting.iter_mut()).enumerate() {
        for i in 0..a.dim(p) {
            e[a.piece(p).dst(i)].push(i);
            s[a.piece(p).src(i)].push(i);
        }
    }
    (ending, starting)
}

fn build_cell(a: &GradedAlgebra, n: usize, d: i64, ends: &(Vec<Vec<Vec<usize>>>, Vec<Vec<Vec<usize>>>)) -> Cell {
    let (ending, starting) = ends;
    let gr = a.graph();
    let slot = Slot::of_index(n);
    let (m, shift) = twist_and_shift(a, n);
    let mut blocks: BTreeMap<(usize, usize), Vec<Triple>> = BTreeMap::new();
    let free = d - shift;
    if free >= 0 {
        for g in 0..gen_count(a, slot) {
            let (s, r) = gen_ends(a, slot, g);
            for p in 0..=a.top().min(free as usize) {
                let q = free as usize - p;
                if q > a.top() {
                    continue;
                }
                for &y in &ending[p][s] {
                    for &z in &starting[q][r] {
                        let key = (a.piece(p).src(y), gr.nu_pow_vertex(a.piece(q).dst(z), m as i64));
                        blocks.entry(key).or_default().push((p, y, g, q, z));
                    }
                }
            }
        }
    }
    let mut pos = HashMap::new();
    for (k, v) in &blocks {
        for (i, tr) in v.iter().enumerate() {
            pos.insert(*tr, (*k, i));
        }
    }
    Cell { blocks, pos }
}

/// Image of y (x) g (x) z under mu_n, as (target triple, coefficient).
fn image(a: &GradedAlgebra, n: usize, tr: Triple, terms: &[Vec<Term>]) -> Vec<(Triple, Elem)> {
    let t = a.tower();
    let (p, y, g, q, z) = tr;
    let (m, _) = twist_and_shift(a, n);
    let (m2, _) = twist_and_shift(a, n - 1);
    let zt = a.beta_basis(m as i64 - m2 as i64, q, z);
    let mut out = Vec::new();
    for term in &terms[g] {
        let left = a.mul_basis(p, y, term.left.0, term.left.1);
        if left.is_zero() {
            continue;
        }
        let rq = term.right.0 + q;
        let right = a.mul(term.right.0, &SparseVec::unit(t, term.right.1), q, &zt);
        for (l, cl) in &left.entries {
            for (r, cr) in &right.entries {
                let c = t.mul(&term.coeff, &t.mul(cl, cr));
                out.push(((p + term.left.0, *l, term.gen, rq, *r), c));
            }
        }
    }
    out
}

/// One node of the exactness check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NodeCheck {
    pub index: usize,
    pub degree: i64,
    pub dim: usize,
    pub rank_out: usize,
    pub rank_in: usize,
}

impl NodeCheck {
    pub fn exact(&self) -> bool {
        self.dim == self.rank_out + self.rank_in
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExactnessReport {
    pub cutoff: i64,
    pub nodes: Vec<NodeCheck>,
    /// rank of multiplication A (x)_S A -> A equals dim A in every degree
    pub surjective: bool,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.surjective && self.nodes.iter().all(NodeCheck::exact)
    }

    pub fn first_failure(&self) -> Option<&NodeCheck> {
        self.nodes.iter().find(|c| !c.exact())
    }
}

fn block_rank(a: &GradedAlgebra, cols: &[SparseVec]) -> Result<usize, HomologyError> {
    let mut e = Echelon::new();
    for c in cols {
        e.insert(a.tower(), c)?;
    }
    Ok(e.rank())
}

/// Rank of mu_n: P_n -> P_{n-1} at total degree d, block by block.
fn rank_mu(a: &GradedAlgebra, n: usize, src: &Cell, tgt: &Cell, terms: &[Vec<Term>]) -> Result<usize, HomologyError> {
    let t = a.tower();
    let ranks: Vec<usize> = src
        .blocks
        .par_iter()
        .map(|(_, trs)| {
            let cols: Vec<SparseVec> = trs
                .iter()
                .map(|&tr| {
                    let entries = image(a, n, tr, terms)
                        .into_iter()
                        .map(|(x, c)| (tgt.pos[&x].1, c))
                        .collect();
                    SparseVec::from_terms(t, entries)
                })
                .collect();
            block_rank(a, &cols)
        })
        .collect::<Result<_, _>>()?;
    Ok(ranks.into_iter().sum())
}

/// Rank of mu_0: A (x)_S A -> A at total degree d.
fn rank_mu0(a: &GradedAlgebra, src: &Cell) -> Result<usize, HomologyError> {
    let ranks: Vec<usize> = src
        .blocks
        .par_iter()
        .map(|(_, trs)| {
            let cols: Vec<SparseVec> = trs.iter().map(|&(p, y, _, q, z)| a.mul_basis(p, y, q, z)).collect();
            block_rank(a, &cols)
        })
        .collect::<Result<_, _>>()?;
    Ok(ranks.into_iter().sum())
}

/// Exactness of the resolution at every node P_n, at every total degree up
/// to `cutoff`, and surjectivity of the multiplication map.
pub fn verify_resolution(a: &GradedAlgebra, cutoff: i64) -> Result<ExactnessReport, HomologyError> {
    let ends = ends_lists(a);
    let slots = [Slot::Vertex, Slot::Edge, Slot::Reversed, Slot::Top];
    let terms: Vec<Vec<Vec<Term>>> = slots
        .iter()
        .map(|&s| (0..gen_count(a, s)).map(|g| generator_terms(a, s, g)).collect())
        .collect();
    // P_n has generators in degree >= m h + r; beyond the cutoff it does not matter
    let last = (0..).find(|&n| twist_and_shift(a, n).1 > cutoff).unwrap_or(0);
    let mut nodes = Vec::new();
    let mut surjective = true;
    for d in 0..=cutoff {
        let cells: Vec<Cell> = (0..=last).map(|n| build_cell(a, n, d, &ends)).collect();
        let mut ranks = vec![0usize; last + 1];
        for n in 1..=last {
            ranks[n] = rank_mu(a, n, &cells[n], &cells[n - 1], &terms[n % 4])?;
        }
        let r0 = rank_mu0(a, &cells[0])?;
        if d <= a.top() as i64 && r0 != a.dim(d as usize) || d > a.top() as i64 && r0 != 0 {
            surjective = false;
        }
        for n in 0..last {
            let dim = cells[n].pos.len();
            if dim == 0 {
                continue;
            }
            nodes.push(NodeCheck { index: n, degree: d, dim, rank_out: if n == 0 { r0 } else { ranks[n] }, rank_in: ranks[n + 1] });
        }
    }
    Ok(ExactnessReport { cutoff, nodes, surjective })
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
    fn a4_resolution_is_exact_through_2h() {
        let a = algebra(Family::A(4));
        let r = verify_resolution(&a, 8).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
    }

    #[test]
    fn e8star_resolution_is_exact_through_2h() {
        let a = algebra(Family::E8Star);
        let r = verify_resolution(&a, 16).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
    }
}
