//! Quivers for the SU(3) ADE graphs: adjacency, the Z3 symmetry nu,
//! Perron-Frobenius data and the built-in families.

mod doc;
mod families;

use std::cmp::Ordering;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::nullspace_dense;
use crate::scalar::{FieldElem, NumberField, ScalarError, Tower};

pub use doc::GraphDoc;
pub use families::{build_d, orbit_sizes, Family, OrbifoldMap, StarTag, UNSUPPORTED};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("illegal family parameter: {0}")]
    IllegalParameter(String),
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("graph `{0}` is not supported")]
    Unsupported(String),
    #[error("edge `{edge}` violates the colouring ({from} -> {to})")]
    Colouring { edge: String, from: u8, to: u8 },
    #[error("nu is not a graph automorphism: {0}")]
    NotAutomorphism(String),
    #[error("nu has order not dividing 3")]
    NuOrder,
    #[error("P does not commute with the adjacency matrix")]
    NotCommuting,
    #[error("graph with nontrivial nu has parallel edges")]
    ParallelEdges,
    #[error("Perron-Frobenius vector: {0}")]
    PerronFrobenius(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite quiver with Coxeter number and symmetry nu (on vertices and edges).
#[derive(Clone, Debug)]
pub struct Graph {
    pub name: String,
    pub h: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub coloring: Option<Vec<u8>>,
    pub nu_vertex: Vec<usize>,
    pub nu_edge: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, o: &Graph) -> bool {
        self.h == o.h
            && self.vertices == o.vertices
            && self.edges == o.edges
            && self.coloring == o.coloring
            && self.nu_vertex == o.nu_vertex
            && self.nu_edge == o.nu_edge
    }
}

impl Graph {
    /// Assemble and validate a graph.
    pub fn new(
        name: impl Into<String>,
        h: u32,
        vertices: Vec<String>,
        edges: Vec<Edge>,
        coloring: Option<Vec<u8>>,
        nu_vertex: Vec<usize>,
        nu_edge: Vec<usize>,
    ) -> Result<Graph, GraphError> {
        let n = vertices.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return Err(GraphError::Schema(format!("edge `{}` has an endpoint out of range", e.id)));
            }
            out_edges[e.src].push(i);
            in_edges[e.dst].push(i);
        }
        let g = Graph { name: name.into(), h, vertices, edges, coloring, nu_vertex, nu_edge, out_edges, in_edges };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.h < 4 {
            return Err(GraphError::Schema(format!("Coxeter number {} below 4", self.h)));
        }
        let n = self.vertices.len();
        if self.nu_vertex.len() != n || self.nu_edge.len() != self.edges.len() {
            return Err(GraphError::Schema("nu must map every vertex and edge".into()));
        }
        if let Some(col) = &self.coloring {
            if col.len() != n {
                return Err(GraphError::Schema("colouring must cover every vertex".into()));
            }
            for e in &self.edges {
                let (a, b) = (col[e.src], col[e.dst]);
                if a > 2 || b != (a + 1) % 3 {
                    return Err(GraphError::Colouring { edge: e.id.clone(), from: a, to: b });
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let f = self.nu_edge.get(i).and_then(|&j| self.edges.get(j)).ok_or(GraphError::NuOrder)?;
            if f.src != self.nu_vertex[e.src] || f.dst != self.nu_vertex[e.dst] {
                return Err(GraphError::NotAutomorphism(format!("edge `{}`", e.id)));
            }
        }
        let is_perm = |p: &[usize]| {
            let mut seen = vec![false; p.len()];
            p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
        };
        if !is_perm(&self.nu_vertex) || !is_perm(&self.nu_edge) {
            return Err(GraphError::NotAutomorphism("not a bijection".into()));
        }
        if (0..n).any(|v| self.nu_vertex[self.nu_vertex[self.nu_vertex[v]]] != v)
            || (0..self.edges.len()).any(|e| self.nu_edge[self.nu_edge[self.nu_edge[e]]] != e)
        {
            return Err(GraphError::NuOrder);
        }
        let d = self.adjacency();
        for i in 0..n {
            for j in 0..n {
                // (P D)_{ij} = D_{nu(i) j}, (D P)_{ij} = D_{i nu^{-1}(j)}
                let pd = d[self.nu_vertex[i]][j];
                let dp = d[i][self.nu_inverse_vertex(j)];
                if pd != dp {
                    return Err(GraphError::NotCommuting);
                }
            }
        }
        if !self.nu_is_trivial() {
            for i in 0..n {
                for j in 0..n {
                    if d[i][j] > 1 {
                        return Err(GraphError::ParallelEdges);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn src(&self, e: usize) -> usize {
        self.edges[e].src
    }

    pub fn dst(&self, e: usize) -> usize {
        self.edges[e].dst
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Adjacency matrix, D[i][j] = number of edges i -> j.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.num_vertices();
        let mut d = vec![vec![0i64; n]; n];
        for e in &self.edges {
            d[e.src][e.dst] += 1;
        }
        d
    }

    /// Permutation matrix of nu: P[i][nu(i)] = 1.
    pub fn nu_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.num_vertices();
        let mut p = vec![vec![0i64; n]; n];
        for i in 0..n {
            p[i][self.nu_vertex[i]] = 1;
        }
        p
    }

    pub fn nu_is_trivial(&self) -> bool {
        self.nu_vertex.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// nu^k on vertices, k taken mod 3 (negative allowed).
    pub fn nu_pow_vertex(&self, v: usize, k: i64) -> usize {
        let mut v = v;
        for _ in 0..k.rem_euclid(3) {
            v = self.nu_vertex[v];
        }
        v
    }

    pub fn nu_pow_edge(&self, e: usize, k: i64) -> usize {
        let mut e = e;
        for _ in 0..k.rem_euclid(3) {
            e = self.nu_edge[e];
        }
        e
    }

    pub fn nu_inverse_vertex(&self, v: usize) -> usize {
        self.nu_pow_vertex(v, 2)
    }

    /// Same vertices, every edge reversed; nu carried over.
    pub fn opposite(&self) -> Graph {
        let edges = self.edges.iter().map(|e| Edge { id: e.id.clone(), src: e.dst, dst: e.src }).collect();
        let coloring = self.coloring.as_ref().map(|c| c.iter().map(|x| (3 - x) % 3).collect());
        Graph::new(
            self.name.clone(),
            self.h,
            self.vertices.clone(),
            edges,
            coloring,
            self.nu_vertex.clone(),
            self.nu_edge.clone(),
        )
        .expect("opposite of a valid graph is valid")
    }

    pub fn base_field(&self) -> Result<Arc<NumberField>, GraphError> {
        Ok(Arc::new(NumberField::new(self.h)?))
    }

    /// Perron-Frobenius eigenvalue [3] and eigenvector (minimum entry 1), exactly in Q(c).
    pub fn perron_frobenius(&self) -> Result<(FieldElem, Vec<FieldElem>), GraphError> {
        let field = self.base_field()?;
        let t = Tower::base(field.clone());
        let n = self.num_vertices();
        let q3 = t.qint(3);
        let d = self.adjacency();
        // rows of (D - [3] I)
        let rows: Vec<Vec<_>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = t.from_int(d[i][j]);
                        if i == j {
                            t.sub(&x, &q3)
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let ns = nullspace_dense(&t, &rows, n)?;
        if ns.len() != 1 {
            return Err(GraphError::PerronFrobenius(format!("eigenspace of [3] has dimension {}", ns.len())));
        }
        let mut v = ns.into_iter().next().unwrap();
        if t.sign(&v[0])? == Ordering::Less {
            v = v.iter().map(|x| t.neg(x)).collect();
        }
        for x in &v {
            if t.sign(x)? != Ordering::Greater {
                return Err(GraphError::PerronFrobenius("eigenvector is not strictly positive".into()));
            }
        }
        let mut min = v[0].clone();
        for x in &v[1..] {
            if t.sign(&t.sub(x, &min))? == Ordering::Less {
                min = x.clone();
            }
        }
        let inv = t.inv(&min)?;
        let phi = v.iter().map(|x| t.base_part(&t.mul(x, &inv)).unwrap()).collect();
        Ok((t.base_part(&q3).unwrap(), phi))
    }
}

/// Integer matrix helpers shared by the series code and tests.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut c = vec![vec![0i64; m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                c[i][j] += a[i][k] * bk[j];
            }
        }
    }
    c
}

pub fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a4_is_three_cycle() {
        let g = Family::A(4).build().unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 3);
        assert!(!g.nu_is_trivial());
        let (a, phi) = g.perron_frobenius().unwrap();
        assert!(a.is_one());
        assert!(phi.iter().all(|x| x.is_one()));
    }

    #[test]
    fn pf_vectors_are_eigenvectors() {
        for fam in [Family::A(5), Family::A(7), Family::AStar(6), Family::E8Star, Family::D(9), Family::DStar(7)] {
            let g = fam.build().unwrap();
            let f = g.base_field().unwrap();
            let (alpha, phi) = g.perron_frobenius().unwrap();
            assert_eq!(alpha, f.qint(3));
            let d = g.adjacency();
            for i in 0..g.num_vertices() {
                let mut s = f.zero();
                for j in 0..g.num_vertices() {
                    s = f.add(&s, &f.scale_int(&phi[j], d[i][j]));
                }
                assert_eq!(s, f.mul(&alpha, &phi[i]), "{}", g.name);
            }
        }
    }

    #[test]
    fn opposite_is_involution() {
        let g = Family::E8Star.build().unwrap();
        let o = g.opposite();
        let e = g.edges.iter().position(|e| g.vertices[e.src] == "2" && g.vertices[e.dst] == "4").unwrap();
        assert_eq!(o.vertices[o.edges[e].src], "4");
        assert_eq!(o.opposite(), g);
    }
}
