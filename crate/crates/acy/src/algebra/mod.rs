//! The graded algebra A = CG / (relations), built degree by degree.
//!
//! Degree k is spanned by the products b.e of a degree k-1 basis element b
//! with an edge e, modulo the images c.rho_a of the relations. Each degree
//! is reduced with one echelon basis per (source, range) block, pivots at
//! the largest candidate index; the surviving candidates are single paths
//! and form the basis. Right multiplication by edges is stored as a table.

mod doc;
mod form;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cells::{CellError, RelationSet};
use crate::linalg::{Echelon, SparseVec};
use crate::quiver::Graph;
use crate::scalar::{Elem, ScalarError, Tower};
use crate::series::{hilbert_closed_form, SeriesError};

pub use doc::{AlgebraDoc, ALGEBRA_SCHEMA};
pub use form::Form;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Cells(#[from] CellError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("degree {degree}, block {src} -> {dst}: dimension {found}, closed form {expected}")]
    HilbertMismatch { degree: usize, src: String, dst: String, expected: i64, found: i64 },
    #[error("top-degree space from vertex {0} is not one-dimensional")]
    TopNotOneDim(String),
    #[error("pairing is singular in degree {degree} on the block {src} -> {dst}")]
    SingularPairing { degree: usize, src: String, dst: String },
    #[error("relation at edge `{0}` is not mapped into the ideal by nu")]
    NotNuStable(String),
    #[error("form is not compatible with nu: {0}")]
    FormInconsistent(String),
}

/// Basis data of one degree.
#[derive(Clone, Debug)]
pub struct Piece {
    paths: Vec<Vec<usize>>,
    src: Vec<usize>,
    dst: Vec<usize>,
    /// right[b][j]: b times the j-th outgoing edge of dst(b), in the next degree
    right: Vec<Vec<SparseVec>>,
    /// basis indices per block, at src * n + dst
    blocks: Vec<Vec<usize>>,
}

impl Piece {
    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    /// Edges of the basis path (empty for vertices).
    pub fn path(&self, i: usize) -> &[usize] {
        &self.paths[i]
    }

    pub fn src(&self, i: usize) -> usize {
        self.src[i]
    }

    pub fn dst(&self, i: usize) -> usize {
        self.dst[i]
    }
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    graph: Arc<Graph>,
    tower: Arc<Tower>,
    relations: RelationSet,
    pieces: Vec<Piece>,
    /// position of each edge among the outgoing edges of its source
    out_pos: Vec<usize>,
    /// nu^1 and nu^2 images of every basis element, per degree
    beta: [Vec<Vec<SparseVec>>; 2],
    form: Option<Form>,
}

fn vertex_piece(g: &Graph, t: &Tower) -> Piece {
    let n = g.num_vertices();
    let mut blocks = vec![Vec::new(); n * n];
    for v in 0..n {
        blocks[v * n + v].push(v);
    }
    Piece {
        paths: vec![Vec::new(); n],
        src: (0..n).collect(),
        dst: (0..n).collect(),
        right: (0..n).map(|v| g.out_edges(v).iter().map(|&e| SparseVec::unit(t, e)).collect()).collect(),
        blocks,
    }
}

fn edge_piece(g: &Graph) -> Piece {
    let n = g.num_vertices();
    let mut blocks = vec![Vec::new(); n * n];
    for e in 0..g.num_edges() {
        blocks[g.src(e) * n + g.dst(e)].push(e);
    }
    Piece {
        paths: (0..g.num_edges()).map(|e| vec![e]).collect(),
        src: (0..g.num_edges()).map(|e| g.src(e)).collect(),
        dst: (0..g.num_edges()).map(|e| g.dst(e)).collect(),
        right: Vec::new(),
        blocks,
    }
}

/// Degree k from degrees k-1 and k-2. Fills `pieces[k-1].right` and
/// returns the new piece (without its own right table).
fn extend(g: &Graph, t: &Tower, rels: &RelationSet, out_pos: &[usize], pieces: &mut [Piece]) -> Result<Piece, AlgebraError> {
    let k = pieces.len();
    let n = g.num_vertices();
    let (prev, before) = (&pieces[k - 1], &pieces[k - 2]);
    let mut offset = Vec::with_capacity(prev.dim() + 1);
    let mut cand: Vec<(usize, usize)> = Vec::new();
    for b in 0..prev.dim() {
        offset.push(cand.len());
        for &e in g.out_edges(prev.dst[b]) {
            cand.push((b, e));
        }
    }
    let cand_of = |b: usize, e: usize| offset[b] + out_pos[e];
    let block_of = |c: usize| prev.src[cand[c].0] * n + g.dst(cand[c].1);

    let mut ech: HashMap<usize, Echelon> = HashMap::new();
    for c in 0..before.dim() {
        for &a in g.in_edges(before.dst[c]) {
            let mut terms = Vec::new();
            for ([b, b2], w) in &rels.relations[a] {
                for (y, x) in &before.right[c][out_pos[*b]].entries {
                    terms.push((cand_of(*y, *b2), t.mul(w, x)));
                }
            }
            let v = SparseVec::from_terms(t, terms);
            if !v.is_zero() {
                ech.entry(before.src[c] * n + g.src(a)).or_default().insert(t, &v)?;
            }
        }
    }
    let mut pivot_rows: HashMap<usize, SparseVec> = HashMap::new();
    for e in ech.values_mut() {
        e.make_reduced(t);
        for r in e.rows() {
            pivot_rows.insert(r.max_index().expect("echelon rows are nonzero"), r.clone());
        }
    }

    let mut new_index = vec![usize::MAX; cand.len()];
    let mut piece = Piece { paths: Vec::new(), src: Vec::new(), dst: Vec::new(), right: Vec::new(), blocks: vec![Vec::new(); n * n] };
    for (c, &(b, e)) in cand.iter().enumerate() {
        if pivot_rows.contains_key(&c) {
            continue;
        }
        let i = piece.paths.len();
        new_index[c] = i;
        let mut p = prev.paths[b].clone();
        p.push(e);
        piece.paths.push(p);
        piece.src.push(prev.src[b]);
        piece.dst.push(g.dst(e));
        piece.blocks[block_of(c)].push(i);
    }
    let minus_one = t.from_int(-1);
    let right: Vec<Vec<SparseVec>> = (0..prev.dim())
        .map(|b| {
            g.out_edges(prev.dst[b])
                .iter()
                .map(|&e| {
                    let c = cand_of(b, e);
                    match pivot_rows.get(&c) {
                        None => SparseVec::unit(t, new_index[c]),
                        Some(row) => {
                            let head = &row.entries[..row.entries.len() - 1];
                            SparseVec::from_terms(t, head.iter().map(|(j, x)| (new_index[*j], t.mul(x, &minus_one))).collect())
                        }
                    }
                })
                .collect()
        })
        .collect();
    pieces[k - 1].right = right;
    Ok(piece)
}

fn gate(g: &Graph, piece: &Piece, expected: &[Vec<i64>], degree: usize) -> Result<(), AlgebraError> {
    let n = g.num_vertices();
    for i in 0..n {
        for j in 0..n {
            let found = piece.blocks[i * n + j].len() as i64;
            let want = expected.get(i).map(|r| r[j]).unwrap_or(0);
            if found != want {
                return Err(AlgebraError::HilbertMismatch {
                    degree,
                    src: g.vertices[i].clone(),
                    dst: g.vertices[j].clone(),
                    expected: want,
                    found,
                });
            }
        }
    }
    Ok(())
}

/// Build A from certified relations, check every degree against the closed
/// form of the Hilbert series, and set up nu and the Frobenius form.
pub fn build_algebra(rels: &RelationSet) -> Result<GradedAlgebra, AlgebraError> {
    let mut a = build_unchecked(rels)?;
    let form = Form::build(&a, 0)?;
    a.form = Some(form);
    Ok(a)
}

/// Build the algebra and its nu action, without the form.
pub fn build_unchecked(rels: &RelationSet) -> Result<GradedAlgebra, AlgebraError> {
    rels.validate()?;
    let g = rels.graph.clone();
    let t = rels.tower.clone();
    let top = g.h as usize - 3;
    let hilbert = hilbert_closed_form(&g, top + 1)?;
    let mut out_pos = vec![0; g.num_edges()];
    for v in 0..g.num_vertices() {
        for (j, &e) in g.out_edges(v).iter().enumerate() {
            out_pos[e] = j;
        }
    }
    let mut pieces = vec![vertex_piece(&g, &t), edge_piece(&g)];
    gate(&g, &pieces[0], &hilbert[0], 0)?;
    gate(&g, &pieces[1], &hilbert[1], 1)?;
    for k in 2..=top + 1 {
        let piece = extend(&g, &t, rels, &out_pos, &mut pieces)?;
        gate(&g, &piece, &hilbert[k], k)?;
        pieces.push(piece);
    }
    // degree top+1 was only needed for the gate
    pieces.pop();
    let mut alg = GradedAlgebra {
        graph: g,
        tower: t,
        relations: rels.clone(),
        pieces,
        out_pos,
        beta: [Vec::new(), Vec::new()],
        form: None,
    };
    alg.check_nu_stable()?;
    for k in 1..=2 {
        let table = (0..=top)
            .map(|d| (0..alg.dim(d)).map(|i| alg.nu_path(k, d, i)).collect())
            .collect();
        alg.beta[k - 1] = table;
    }
    Ok(alg)
}

impl GradedAlgebra {
    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    /// h - 3, the degree of the top generators.
    pub fn top(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn piece(&self, d: usize) -> &Piece {
        &self.pieces[d]
    }

    pub fn dim(&self, d: usize) -> usize {
        self.pieces.get(d).map(Piece::dim).unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.iter().map(Piece::dim).sum()
    }

    /// Basis indices of i A_d j.
    pub fn block(&self, d: usize, i: usize, j: usize) -> &[usize] {
        let n = self.graph.num_vertices();
        self.pieces.get(d).map(|p| p.blocks[i * n + j].as_slice()).unwrap_or(&[])
    }

    pub fn form(&self) -> &Form {
        self.form.as_ref().expect("form is built with the algebra")
    }

    /// Coefficient of bc in the relation at a, that is W(abc).
    pub fn w(&self, a: usize, b: usize, c: usize) -> Elem {
        self.relations.relations[a]
            .iter()
            .find(|(p, _)| *p == [b, c])
            .map(|(_, x)| x.clone())
            .unwrap_or_else(|| self.tower.zero())
    }

    /// Terms (b, c, W(abc)) of the relation at a.
    pub fn relation(&self, a: usize) -> &[([usize; 2], Elem)] {
        &self.relations.relations[a]
    }

    /// v e for v in A_d.
    pub fn right_edge(&self, d: usize, v: &SparseVec, e: usize) -> SparseVec {
        let t = &*self.tower;
        if d >= self.top() {
            return SparseVec::new();
        }
        let p = &self.pieces[d];
        let s = self.graph.src(e);
        let mut acc = SparseVec::new();
        for (b, x) in &v.entries {
            if p.dst[*b] == s {
                acc = acc.axpy(t, x, &p.right[*b][self.out_pos[e]]);
            }
        }
        acc
    }

    /// x times the basis element j of A_q, for x in A_p.
    pub fn mul_by_basis(&self, p: usize, x: &SparseVec, q: usize, j: usize) -> SparseVec {
        if p + q > self.top() {
            return SparseVec::new();
        }
        let t = &*self.tower;
        let piece = &self.pieces[q];
        let mut z = SparseVec::from_terms(
            t,
            x.entries
                .iter()
                .filter(|(i, _)| self.pieces[p].dst[*i] == piece.src[j])
                .cloned()
                .collect(),
        );
        for (step, &e) in piece.paths[j].iter().enumerate() {
            z = self.right_edge(p + step, &z, e);
            if z.is_zero() {
                break;
            }
        }
        z
    }

    /// x y for x in A_p and y in A_q.
    pub fn mul(&self, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> SparseVec {
        let t = &*self.tower;
        let mut acc = SparseVec::new();
        if p + q > self.top() {
            return acc;
        }
        for (j, c) in &y.entries {
            acc = acc.axpy(t, c, &self.mul_by_basis(p, x, q, *j));
        }
        acc
    }

    /// Product of two basis elements.
    pub fn mul_basis(&self, p: usize, i: usize, q: usize, j: usize) -> SparseVec {
        self.mul_by_basis(p, &SparseVec::unit(&self.tower, i), q, j)
    }

    /// a y for an edge a and y in A_q.
    pub fn left_edge(&self, a: usize, q: usize, y: &SparseVec) -> SparseVec {
        self.mul(1, &SparseVec::unit(&self.tower, a), q, y)
    }

    /// nu^k applied edge by edge to a basis path.
    fn nu_path(&self, k: usize, d: usize, i: usize) -> SparseVec {
        let g = &*self.graph;
        let t = &*self.tower;
        let piece = &self.pieces[d];
        let mut z = SparseVec::unit(t, g.nu_pow_vertex(piece.src[i], k as i64));
        for (step, &e) in piece.paths[i].iter().enumerate() {
            z = self.right_edge(step, &z, g.nu_pow_edge(e, k as i64));
        }
        z
    }

    /// beta^k(x) for x in A_d (k any integer; beta has order 3).
    pub fn beta(&self, k: i64, d: usize, x: &SparseVec) -> SparseVec {
        let k = k.rem_euclid(3) as usize;
        if k == 0 || self.graph.nu_is_trivial() {
            return x.clone();
        }
        let t = &*self.tower;
        let mut acc = SparseVec::new();
        for (i, c) in &x.entries {
            acc = acc.axpy(t, c, &self.beta[k - 1][d][*i]);
        }
        acc
    }

    /// beta^k of a basis element.
    pub fn beta_basis(&self, k: i64, d: usize, i: usize) -> SparseVec {
        self.beta(k, d, &SparseVec::unit(&self.tower, i))
    }

    /// nu(rho_a) must vanish in A_2 for every edge a.
    fn check_nu_stable(&self) -> Result<(), AlgebraError> {
        let g = &*self.graph;
        if g.nu_is_trivial() || self.top() < 2 {
            return Ok(());
        }
        let t = &*self.tower;
        for a in 0..g.num_edges() {
            let mut acc = SparseVec::new();
            for ([b, c], w) in &self.relations.relations[a] {
                let start = SparseVec::unit(t, g.nu_edge[*b]);
                acc = acc.axpy(t, w, &self.right_edge(1, &start, g.nu_edge[*c]));
            }
            if !acc.is_zero() {
                return Err(AlgebraError::NotNuStable(g.edges[a].id.clone()));
            }
        }
        Ok(())
    }

    /// Human-readable name of a basis element.
    pub fn path_label(&self, d: usize, i: usize) -> String {
        let g = &*self.graph;
        let p = &self.pieces[d];
        if d == 0 {
            return format!("e{}", g.vertices[p.src[i]]);
        }
        p.paths[i].iter().map(|&e| g.edges[e].id.as_str()).collect::<Vec<_>>().join(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{builtin_potential, CellSource, SolveOptions};
    use crate::quiver::Family;

    pub(crate) fn algebra(f: Family) -> GradedAlgebra {
        let prep = builtin_potential(f, CellSource::Builtin, &SolveOptions::default()).unwrap();
        build_algebra(&prep.potential.relations()).unwrap()
    }

    #[test]
    fn a4_dimensions() {
        let a = algebra(Family::A(4));
        assert_eq!(a.top(), 1);
        assert_eq!((a.dim(0), a.dim(1)), (3, 3));
        assert_eq!(a.total_dim(), 6);
    }

    #[test]
    fn e8star_associative_and_beta_trivial() {
        let a = algebra(Family::E8Star);
        let t = a.tower().clone();
        assert_eq!(a.top(), 5);
        for p in 0..=a.top() {
            for q in 0..=a.top() - p {
                for r in 0..=a.top() - p - q {
                    for i in (0..a.dim(p)).step_by(3) {
                        for j in (0..a.dim(q)).step_by(2) {
                            let xy = a.mul_basis(p, i, q, j);
                            for l in 0..a.dim(r) {
                                let z = SparseVec::unit(&t, l);
                                let lhs = a.mul(p + q, &xy, r, &z);
                                let yz = a.mul_basis(q, j, r, l);
                                let rhs = a.mul(p, &SparseVec::unit(&t, i), q + r, &yz);
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
        let x = SparseVec::unit(&t, 0);
        assert_eq!(a.beta(1, 2, &x), x);
    }

    #[test]
    fn beta_is_an_automorphism_of_order_three() {
        let a = algebra(Family::A(5));
        let t = a.tower().clone();
        for p in 0..=a.top() {
            for i in 0..a.dim(p) {
                let x = SparseVec::unit(&t, i);
                let b3 = a.beta(1, p, &a.beta(1, p, &a.beta(1, p, &x)));
                assert_eq!(b3, x);
                for q in 0..=a.top() - p {
                    for j in 0..a.dim(q) {
                        let lhs = a.beta(1, p + q, &a.mul_basis(p, i, q, j));
                        let rhs = a.mul(p, &a.beta_basis(1, p, i), q, &a.beta_basis(1, q, j));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_idempotents_act_as_identity() {
        let a = algebra(Family::A(6));
        let t = a.tower().clone();
        for d in 0..=a.top() {
            for i in 0..a.dim(d) {
                let x = SparseVec::unit(&t, i);
                let s = a.piece(d).src(i);
                let r = a.piece(d).dst(i);
                assert_eq!(a.mul(0, &SparseVec::unit(&t, s), d, &x), x);
                assert_eq!(a.mul(d, &x, 0, &SparseVec::unit(&t, r)), x);
                let other = (s + 1) % a.graph().num_vertices();
                assert!(a.mul(0, &SparseVec::unit(&t, other), d, &x).is_zero());
            }
        }
    }
}
