//! Cell systems on a graph: Ocneanu's type I/II equations, gauge
//! equivalence, the potential and its cyclic derivatives.

mod builtin;
mod doc;
mod modp;
mod normalize;
mod orbifold;
mod solve;

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{rank, SparseVec};
use crate::quiver::{Graph, GraphError};
use crate::scalar::{Elem, Tower};
use crate::scalar::ScalarError;

pub use builtin::{builtin_potential, builtin_relations, e8star_relations, family_cells, CellSource, Prepared};
pub use doc::{CellDoc, RelationDoc, TriangleDoc, CELL_SCHEMA, RELATION_SCHEMA};
pub use normalize::{fix_nu_gauge, to_potential};
pub use orbifold::{orbifold_cells, orbifold_variants, unfold_cells, unfold_relations};
pub use solve::{solve_cells, SolveOptions};

#[derive(Debug, Error)]
pub enum CellError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("numeric cell solver failed: {0}")]
    Solver(String),
    #[error("could not identify an exact value for {0}")]
    Exactify(String),
    #[error("cell system fails verification: {0}")]
    Verification(String),
    #[error("gauge matrix is not unitary on the class of edge `{0}`")]
    NotUnitary(String),
    #[error("no built-in cell data for {0}: user data required")]
    UserDataRequired(String),
    #[error("relations are not the cyclic derivatives of a potential: {0}")]
    NotCyclic(String),
    #[error("schema: {0}")]
    Schema(String),
}

/// Closed paths of length three, grouped into rotation classes.
#[derive(Clone, Debug)]
pub struct Triangles {
    list: Vec<[usize; 3]>,
    lookup: HashMap<[usize; 3], usize>,
    by_edge: Vec<Vec<(usize, usize, usize)>>,
}

fn rotations(t: [usize; 3]) -> [[usize; 3]; 3] {
    [t, [t[1], t[2], t[0]], [t[2], t[0], t[1]]]
}

impl Triangles {
    pub fn new(g: &Graph) -> Self {
        let mut list = Vec::new();
        let mut lookup = HashMap::new();
        let mut by_edge = vec![Vec::new(); g.num_edges()];
        for a in 0..g.num_edges() {
            for &b in g.out_edges(g.dst(a)) {
                for &c in g.out_edges(g.dst(b)) {
                    if g.dst(c) != g.src(a) {
                        continue;
                    }
                    let t = [a, b, c];
                    let canon = *rotations(t).iter().min().unwrap();
                    let id = *lookup.entry(canon).or_insert_with(|| {
                        list.push(canon);
                        list.len() - 1
                    });
                    lookup.insert(t, id);
                    by_edge[a].push((b, c, id));
                }
            }
        }
        Triangles { list, lookup, by_edge }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    /// Canonical representatives (the lexicographically least rotation).
    pub fn list(&self) -> &[[usize; 3]] {
        &self.list
    }

    pub fn class_of(&self, t: [usize; 3]) -> Option<usize> {
        self.lookup.get(&t).copied()
    }

    /// All (b, c, class) with abc a closed path.
    pub fn starting_with(&self, a: usize) -> &[(usize, usize, usize)] {
        &self.by_edge[a]
    }
}

/// Triangle weights together with the Perron-Frobenius data they are
/// checked against.
#[derive(Clone, Debug)]
pub struct CellSystem {
    pub graph: Arc<Graph>,
    pub tower: Arc<Tower>,
    pub phi: Vec<Elem>,
    pub triangles: Arc<Triangles>,
    pub weights: Vec<Elem>,
}

impl CellSystem {
    pub fn weight(&self, t: [usize; 3]) -> Option<&Elem> {
        self.triangles.class_of(t).map(|i| &self.weights[i])
    }

    /// Move every weight into a larger tower.
    pub fn lift_to(&self, tower: &Arc<Tower>) -> Result<CellSystem, CellError> {
        let lift = |x: &Elem| tower.lift(&self.tower, x);
        Ok(CellSystem {
            graph: self.graph.clone(),
            tower: tower.clone(),
            phi: self.phi.iter().map(lift).collect::<Result<_, _>>()?,
            triangles: self.triangles.clone(),
            weights: self.weights.iter().map(lift).collect::<Result<_, _>>()?,
        })
    }

    /// The same weights read as a potential (no normalization).
    pub fn potential(&self) -> Potential {
        Potential {
            graph: self.graph.clone(),
            tower: self.tower.clone(),
            triangles: self.triangles.clone(),
            weights: self.weights.clone(),
        }
    }

    /// Both verification reports; errors on the first failure.
    pub fn certify(&self) -> Result<(), CellError> {
        for r in [verify_type_i(self), verify_type_ii(self)] {
            if !r.passed() {
                return Err(CellError::Verification(r.to_string()));
            }
        }
        Ok(())
    }
}

/// Result of checking one family of frames.
#[derive(Clone, Debug)]
pub struct FrameReport {
    pub kind: &'static str,
    pub frames: usize,
    pub failures: Vec<String>,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl std::fmt::Display for FrameReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            write!(f, "{}: {} frames pass", self.kind, self.frames)
        } else {
            let shown: Vec<&str> = self.failures.iter().take(4).map(String::as_str).collect();
            write!(f, "{}: {} of {} frames fail ({})", self.kind, self.failures.len(), self.frames, shown.join("; "))
        }
    }
}

fn edge_list(g: &Graph, es: &[usize]) -> String {
    es.iter().map(|&e| g.edges[e].id.as_str()).collect::<Vec<_>>().join(",")
}

/// Type I: sum_{b1,b2} W(a b1 b2) conj W(a' b1 b2) = delta_{a a'} [2] phi_i phi_j
/// for all pairs of parallel edges a, a'.
pub fn verify_type_i(w: &CellSystem) -> FrameReport {
    let g = &*w.graph;
    let t = &*w.tower;
    let q2 = t.qint(2);
    let conj: Vec<Elem> = w.weights.iter().map(|x| t.conj(x)).collect();
    let results: Vec<(usize, Vec<String>)> = (0..g.num_edges())
        .into_par_iter()
        .map(|a| {
            let (i, j) = (g.src(a), g.dst(a));
            let mut fails = Vec::new();
            let mut frames = 0;
            for &a2 in g.out_edges(i) {
                if g.dst(a2) != j {
                    continue;
                }
                frames += 1;
                let mut lhs = t.zero();
                for &(b1, b2, c) in w.triangles.starting_with(a) {
                    if let Some(c2) = w.triangles.class_of([a2, b1, b2]) {
                        lhs = t.add(&lhs, &t.mul(&w.weights[c], &conj[c2]));
                    }
                }
                let rhs = if a == a2 { t.mul(&q2, &t.mul(&w.phi[i], &w.phi[j])) } else { t.zero() };
                if lhs != rhs {
                    fails.push(format!("({})", edge_list(g, &[a, a2])));
                }
            }
            (frames, fails)
        })
        .collect();
    FrameReport {
        kind: "type I",
        frames: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().flat_map(|r| r.1).collect(),
    }
}

/// Enumerate type II frames: a2: i2->i1, a3: i2->i3, a4: i4->i3, a1: i4->i1.
pub(crate) fn type_ii_frames(g: &Graph, a2: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let (i2, i1) = (g.src(a2), g.dst(a2));
    for &a3 in g.out_edges(i2) {
        for &a4 in g.in_edges(g.dst(a3)) {
            for &a1 in g.out_edges(g.src(a4)) {
                if g.dst(a1) == i1 {
                    out.push([a1, a2, a3, a4]);
                }
            }
        }
    }
    out
}

/// Terms of the type II sum for one frame: (k, t, t3, t4, t1) with
/// t = (a2 b1 b2), t3 = (a3 b3 b2), t4 = (a4 b3 b4), t1 = (a1 b1 b4), k = r(b1).
pub(crate) fn type_ii_terms(g: &Graph, tri: &Triangles, f: [usize; 4]) -> Vec<(usize, [usize; 4])> {
    let [a1, a2, a3, a4] = f;
    let mut out = Vec::new();
    for &(b1, b2, t) in tri.starting_with(a2) {
        let k = g.dst(b1);
        for &(b3, b2b, t3) in tri.starting_with(a3) {
            if b2b != b2 {
                continue;
            }
            for &(b3b, b4, t4) in tri.starting_with(a4) {
                if b3b != b3 {
                    continue;
                }
                if let Some(t1) = tri.class_of([a1, b1, b4]) {
                    out.push((k, [t, t3, t4, t1]));
                }
            }
        }
    }
    out
}

/// Right-hand side indicator of a type II frame: (delta_{a1 a4} delta_{a2 a3}, delta_{a1 a2} delta_{a3 a4}).
pub(crate) fn type_ii_rhs(f: [usize; 4]) -> (bool, bool) {
    let [a1, a2, a3, a4] = f;
    (a1 == a4 && a2 == a3, a1 == a2 && a3 == a4)
}

/// Type II: sum phi_k^{-1} W(a2 b1 b2) conj W(a3 b3 b2) W(a4 b3 b4) conj W(a1 b1 b4)
/// = d_{a1a4} d_{a2a3} phi_{i4} phi_{i1} phi_{i2} + d_{a1a2} d_{a3a4} phi_{i1} phi_{i2} phi_{i3}.
pub fn verify_type_ii(w: &CellSystem) -> FrameReport {
    let g = &*w.graph;
    let t = &*w.tower;
    let conj: Vec<Elem> = w.weights.iter().map(|x| t.conj(x)).collect();
    let phi_inv: Vec<Option<Elem>> = w.phi.iter().map(|p| t.inv(p).ok()).collect();
    let results: Vec<(usize, Vec<String>)> = (0..g.num_edges())
        .into_par_iter()
        .map(|a2| {
            let frames = type_ii_frames(g, a2);
            let mut fails = Vec::new();
            for &f in &frames {
                let [a1, _, a3, a4] = f;
                let (i1, i2, i3, i4) = (g.dst(a2), g.src(a2), g.dst(a3), g.src(a4));
                let mut lhs = t.zero();
                for (k, [c, c3, c4, c1]) in type_ii_terms(g, &w.triangles, f) {
                    let Some(pk) = &phi_inv[k] else {
                        fails.push(format!("phi vanishes at {}", g.vertices[k]));
                        continue;
                    };
                    let term = t.mul(&t.mul(&w.weights[c], &conj[c3]), &t.mul(&w.weights[c4], &conj[c1]));
                    lhs = t.add(&lhs, &t.mul(&term, pk));
                }
                let (d1, d2) = type_ii_rhs(f);
                let mut rhs = t.zero();
                if d1 {
                    rhs = t.add(&rhs, &t.mul(&w.phi[i4], &t.mul(&w.phi[i1], &w.phi[i2])));
                }
                if d2 {
                    rhs = t.add(&rhs, &t.mul(&w.phi[i1], &t.mul(&w.phi[i2], &w.phi[i3])));
                }
                if lhs != rhs {
                    fails.push(format!("({})", edge_list(g, &[a1, a2, a3, a4])));
                }
            }
            (frames.len(), fails)
        })
        .collect();
    FrameReport {
        kind: "type II",
        frames: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().flat_map(|r| r.1).collect(),
    }
}

/// Phi_W = sum_abc W(abc) abc, with weights in any tower; need not be unitary.
#[derive(Clone, Debug)]
pub struct Potential {
    pub graph: Arc<Graph>,
    pub tower: Arc<Tower>,
    pub triangles: Arc<Triangles>,
    pub weights: Vec<Elem>,
}

impl Potential {
    /// W(abc), zero when abc is not a closed path.
    pub fn w(&self, a: usize, b: usize, c: usize) -> Elem {
        self.triangles.class_of([a, b, c]).map(|i| self.weights[i].clone()).unwrap_or_else(|| self.tower.zero())
    }

    /// The cyclic derivative at every edge.
    pub fn relations(&self) -> RelationSet {
        let t = &self.tower;
        let relations = (0..self.graph.num_edges())
            .map(|a| {
                self.triangles
                    .starting_with(a)
                    .iter()
                    .filter(|(_, _, c)| !t.is_zero(&self.weights[*c]))
                    .map(|&(b, c, i)| ([b, c], self.weights[i].clone()))
                    .collect()
            })
            .collect();
        RelationSet { graph: self.graph.clone(), tower: self.tower.clone(), relations }
    }

    /// Apply nu to every triangle; equal to self iff the potential is nu-invariant.
    pub fn is_nu_invariant(&self) -> bool {
        let g = &self.graph;
        self.triangles.list().iter().enumerate().all(|(i, t)| {
            let image = t.map(|e| g.nu_edge[e]);
            match self.triangles.class_of(image) {
                Some(j) => self.weights[j] == self.weights[i],
                None => self.tower.is_zero(&self.weights[i]),
            }
        })
    }
}

/// For each edge a, the relation d_a Phi as a combination of length-two paths
/// from r(a) to s(a).
#[derive(Clone, Debug)]
pub struct RelationSet {
    pub graph: Arc<Graph>,
    pub tower: Arc<Tower>,
    pub relations: Vec<Vec<([usize; 2], Elem)>>,
}

impl RelationSet {
    /// Check endpoints and homogeneity.
    pub fn validate(&self) -> Result<(), CellError> {
        let g = &self.graph;
        if self.relations.len() != g.num_edges() {
            return Err(CellError::Schema(format!(
                "{} relations for {} edges",
                self.relations.len(),
                g.num_edges()
            )));
        }
        for (a, rel) in self.relations.iter().enumerate() {
            for ([b, c], _) in rel {
                if g.src(*b) != g.dst(a) || g.dst(*b) != g.src(*c) || g.dst(*c) != g.src(a) {
                    return Err(CellError::Schema(format!(
                        "relation at `{}` contains the path {} which does not run from r(a) to s(a)",
                        g.edges[a].id,
                        edge_list(g, &[*b, *c])
                    )));
                }
            }
        }
        Ok(())
    }

    /// Recover a potential whose cyclic derivatives are proportional to these
    /// relations: solve for per-relation scales c_a with
    /// c_a rho_a[bc] = c_b rho_b[ca] = c_c rho_c[ab] on every closed path abc.
    pub fn to_potential(&self) -> Result<Potential, CellError> {
        self.validate()?;
        let g = self.graph.clone();
        let t = self.tower.clone();
        let tri = Arc::new(Triangles::new(&g));
        let coeff = |a: usize, b: usize, c: usize| -> Elem {
            self.relations[a].iter().find(|(p, _)| *p == [b, c]).map(|(_, x)| x.clone()).unwrap_or_else(|| t.zero())
        };
        let ne = g.num_edges();
        let mut rows: Vec<SparseVec> = Vec::new();
        for rep in tri.list() {
            let rots = rotations(*rep);
            let vals: Vec<Elem> = rots.iter().map(|r| coeff(r[0], r[1], r[2])).collect();
            for k in 1..3 {
                let (a0, ak) = (rots[0][0], rots[k][0]);
                let row = SparseVec::from_terms(&t, vec![(a0, vals[0].clone()), (ak, t.neg(&vals[k]))]);
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
        // columns are the unknown scales; kernel of the transposed system
        let cols = transpose_sparse(&t, &rows, ne);
        let (_, kernel) = crate::linalg::rank_and_kernel(&t, &cols)?;
        let used: Vec<bool> = (0..ne).map(|a| !self.relations[a].is_empty()).collect();
        let scales = generic_combination(&t, &kernel, ne, &used)
            .ok_or_else(|| CellError::NotCyclic("no consistent scaling with all relations nonzero".into()))?;
        let weights = tri
            .list()
            .iter()
            .map(|&[a, b, c]| t.mul(&scales[a], &coeff(a, b, c)))
            .collect::<Vec<_>>();
        let pot = Potential { graph: g, tower: t.clone(), triangles: tri, weights };
        // the derived relations must span the same lines as the given ones
        let derived = pot.relations();
        for a in 0..ne {
            let given = path_vec(&t, &self.relations[a], &self.graph);
            let mine = path_vec(&t, &derived.relations[a], &self.graph);
            if rank(&t, &[given.clone(), mine.clone()])? != rank(&t, &[given])?.max(rank(&t, &[mine])?) {
                return Err(CellError::NotCyclic(format!("relation at `{}`", self.graph.edges[a].id)));
            }
        }
        Ok(pot)
    }
}

fn path_vec(t: &Tower, rel: &[([usize; 2], Elem)], g: &Graph) -> SparseVec {
    let ne = g.num_edges();
    SparseVec::from_terms(t, rel.iter().map(|([b, c], x)| (b * ne + c, x.clone())).collect())
}

fn transpose_sparse(t: &Tower, rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut cols: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in &r.entries {
            cols[*j].push((i, x.clone()));
        }
    }
    cols.into_iter().map(|c| SparseVec::from_terms(t, c)).collect()
}

/// A kernel vector nonzero at every `used` coordinate: try small integer
/// combinations of the kernel basis.
fn generic_combination(t: &Tower, kernel: &[SparseVec], n: usize, used: &[bool]) -> Option<Vec<Elem>> {
    if kernel.is_empty() {
        return None;
    }
    for attempt in 0..16i64 {
        let mut v = SparseVec::new();
        for (i, k) in kernel.iter().enumerate() {
            let coef = 1 + (attempt * (i as i64 + 1)) % 7 + i as i64 * attempt;
            v = v.axpy(t, &t.from_int(coef), k);
        }
        let dense = v.to_dense(t, n);
        if (0..n).all(|a| !used[a] || !t.is_zero(&dense[a])) {
            return Some(dense);
        }
    }
    None
}

/// A unitary change of basis on each class of parallel edges:
/// `entries[a]` lists (a', u(a, a')) with a' parallel to a.
#[derive(Clone, Debug)]
pub struct Gauge {
    pub entries: Vec<Vec<(usize, Elem)>>,
}

impl Gauge {
    pub fn identity(g: &Graph, t: &Tower) -> Self {
        Gauge { entries: (0..g.num_edges()).map(|a| vec![(a, t.one())]).collect() }
    }

    /// Multiply the single edge `e` by the scalar `u`.
    pub fn phase(g: &Graph, t: &Tower, e: usize, u: Elem) -> Self {
        let mut s = Gauge::identity(g, t);
        s.entries[e] = vec![(e, u)];
        s
    }

    fn get(&self, t: &Tower, a: usize, b: usize) -> Elem {
        self.entries[a].iter().find(|(x, _)| *x == b).map(|(_, u)| u.clone()).unwrap_or_else(|| t.zero())
    }

    pub fn check_unitary(&self, g: &Graph, t: &Tower) -> Result<(), CellError> {
        for a in 0..g.num_edges() {
            for (b, _) in &self.entries[a] {
                if g.src(*b) != g.src(a) || g.dst(*b) != g.dst(a) {
                    return Err(CellError::NotUnitary(g.edges[a].id.clone()));
                }
            }
            let class: Vec<usize> = g.out_edges(g.src(a)).iter().copied().filter(|&b| g.dst(b) == g.dst(a)).collect();
            for &b in &class {
                let mut s = t.zero();
                for &c in &class {
                    s = t.add(&s, &t.mul(&self.get(t, a, c), &t.conj(&self.get(t, b, c))));
                }
                let want = if a == b { t.one() } else { t.zero() };
                if s != want {
                    return Err(CellError::NotUnitary(g.edges[a].id.clone()));
                }
            }
        }
        Ok(())
    }
}

/// W1(a1 a2 a3) = sum u(a1,a1') u(a2,a2') u(a3,a3') W2(a1' a2' a3').
pub fn gauge_transform(w: &CellSystem, u: &Gauge) -> Result<CellSystem, CellError> {
    let t = &*w.tower;
    u.check_unitary(&w.graph, t)?;
    let weights = w
        .triangles
        .list()
        .iter()
        .map(|&[a1, a2, a3]| {
            let mut s = t.zero();
            for (b1, u1) in &u.entries[a1] {
                for (b2, u2) in &u.entries[a2] {
                    for (b3, u3) in &u.entries[a3] {
                        if let Some(x) = w.weight([*b1, *b2, *b3]) {
                            s = t.add(&s, &t.mul(&t.mul(u1, u2), &t.mul(u3, x)));
                        }
                    }
                }
            }
            s
        })
        .collect();
    Ok(CellSystem { weights, ..w.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuInvariance {
    /// W(nu t) = W(t) for every triangle.
    Invariant,
    /// Weights move, but nu maps the span of the relations to itself.
    SpanStable,
    NotStable,
}

pub fn check_nu_invariance(p: &Potential) -> Result<NuInvariance, CellError> {
    if p.is_nu_invariant() {
        return Ok(NuInvariance::Invariant);
    }
    let g = &*p.graph;
    let t = &*p.tower;
    let rels = p.relations();
    // block of relations per (r(a), s(a)) pair
    for a in 0..g.num_edges() {
        let block: Vec<usize> = g.in_edges(g.src(a)).iter().copied().filter(|&b| g.src(b) == g.dst(a)).collect();
        let span: Vec<SparseVec> = block.iter().map(|&b| path_vec(t, &rels.relations[b], g)).collect();
        let na = g.nu_edge[a];
        let image: Vec<([usize; 2], Elem)> =
            rels.relations[a].iter().map(|([b, c], x)| ([g.nu_edge[*b], g.nu_edge[*c]], x.clone())).collect();
        let target: Vec<usize> = g.in_edges(g.src(na)).iter().copied().filter(|&b| g.src(b) == g.dst(na)).collect();
        let mut tspan: Vec<SparseVec> = target.iter().map(|&b| path_vec(t, &rels.relations[b], g)).collect();
        let r0 = rank(t, &tspan)?;
        tspan.push(path_vec(t, &image, g));
        if rank(t, &tspan)? != r0 {
            return Ok(NuInvariance::NotStable);
        }
        let _ = span;
    }
    Ok(NuInvariance::SpanStable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Family;
    use crate::scalar::Tower;

    fn a4_cells(weight_sq_sign: i64) -> CellSystem {
        let g = Arc::new(Family::A(4).build().unwrap());
        let base = Tower::base(g.base_field().unwrap());
        let (t, root) = base.adjoin_sqrt(&base.qint(2)).unwrap();
        let tri = Arc::new(Triangles::new(&g));
        let w = if weight_sq_sign > 0 { root } else { t.zero() };
        CellSystem {
            graph: g.clone(),
            tower: t.clone(),
            phi: vec![t.one(); 3],
            weights: vec![w; tri.len()],
            triangles: tri,
        }
    }

    #[test]
    fn a4_fourth_root_of_two() {
        let w = a4_cells(1);
        assert_eq!(w.triangles.len(), 1);
        let x = w.tower.approx(&w.weights[0]).0;
        assert!((x - 2f64.powf(0.25)).abs() < 1e-12);
        assert!(verify_type_i(&w).passed());
        assert!(verify_type_ii(&w).passed());
    }

    #[test]
    fn zero_cells_fail() {
        let w = a4_cells(0);
        assert!(!verify_type_i(&w).passed());
        assert!(!verify_type_ii(&w).passed());
    }

    #[test]
    fn single_triangle_relation() {
        let w = a4_cells(1);
        let rels = w.potential().relations();
        for (a, rel) in rels.relations.iter().enumerate() {
            assert_eq!(rel.len(), 1);
            let ([b, c], x) = &rel[0];
            assert_eq!(w.graph.src(*b), w.graph.dst(a));
            assert_eq!(w.graph.dst(*c), w.graph.src(a));
            assert_eq!(x, &w.weights[0]);
        }
    }

    #[test]
    fn sign_flip_is_gauge() {
        let w = a4_cells(1);
        let t = w.tower.clone();
        let u = Gauge::phase(&w.graph, &t, 0, t.from_int(-1));
        let w2 = gauge_transform(&w, &u).unwrap();
        assert_eq!(w2.weights[0], t.neg(&w.weights[0]));
        assert!(w2.certify().is_ok());
        let bad = Gauge::phase(&w.graph, &t, 0, t.from_int(2));
        assert!(matches!(gauge_transform(&w, &bad), Err(CellError::NotUnitary(_))));
    }

    #[test]
    fn constant_weights_are_nu_invariant() {
        let w = a4_cells(1);
        assert_eq!(check_nu_invariance(&w.potential()).unwrap(), NuInvariance::Invariant);
    }

    #[test]
    fn potential_round_trip() {
        let w = a4_cells(1);
        let p = w.potential().relations().to_potential().unwrap();
        assert_eq!(p.weights.len(), 1);
        assert!(!p.tower.is_zero(&p.weights[0]));
    }
}
