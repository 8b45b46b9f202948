//! The Frobenius form f, top generators and dual bases.
//!
//! f is zero below the top degree h-3. Each block j A_{h-3} nu(j) is one
//! dimensional; the values of f on these blocks are fixed by f(u) = 1 at one
//! vertex and propagated along edges through (x, y) = (y, beta(x)).

use std::collections::VecDeque;

use super::{AlgebraError, GradedAlgebra};
use crate::linalg::{inverse_dense, SparseVec};
use crate::scalar::{Elem, ScalarError};

#[derive(Clone, Debug)]
pub struct Form {
    /// f on the top-degree basis
    values: Vec<Elem>,
    /// u_j with f(u_j) = 1, as top-degree vectors
    units: Vec<SparseVec>,
    /// dual[p][i]: the dual of basis element i of A_p, in A_{top-p}
    dual: Vec<Vec<SparseVec>>,
    normalized: usize,
}

impl Form {
    /// Build the form with f(u) = 1 at `start`, then check the Nakayama
    /// identity on every basis pair and invert the pairing blocks.
    pub fn build(a: &GradedAlgebra, start: usize) -> Result<Form, AlgebraError> {
        let g = &**a.graph();
        let t = &**a.tower();
        let n = g.num_vertices();
        let top = a.top();

        let mut gen = vec![usize::MAX; n];
        for j in 0..n {
            let block = a.block(top, j, g.nu_vertex[j]);
            if block.len() != 1 {
                return Err(AlgebraError::TopNotOneDim(g.vertices[j].clone()));
            }
            gen[j] = block[0];
        }
        if gen.iter().copied().collect::<std::collections::BTreeSet<_>>().len() != a.dim(top) {
            return Err(AlgebraError::TopNotOneDim("(extra top-degree blocks)".into()));
        }

        // c[j] = f(basis generator of j A_top nu(j))
        let mut c: Vec<Option<Elem>> = vec![None; n];
        c[start] = Some(t.one());
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (e, forward) in g.out_edges(v).iter().map(|&e| (e, true)).chain(g.in_edges(v).iter().map(|&e| (e, false))) {
                let (i, k) = (g.src(e), g.dst(e));
                let other = if forward { k } else { i };
                if c[other].is_some() {
                    continue;
                }
                let (alpha, gamma) = edge_ratio(a, e, &gen)?;
                // alpha c_i = gamma c_k
                let value = if forward {
                    t.div(&t.mul(&alpha, c[i].as_ref().unwrap()), &gamma)?
                } else {
                    t.div(&t.mul(&gamma, c[k].as_ref().unwrap()), &alpha)?
                };
                c[other] = Some(value);
                queue.push_back(other);
            }
        }
        let c: Vec<Elem> = c
            .into_iter()
            .enumerate()
            .map(|(j, x)| x.ok_or_else(|| AlgebraError::FormInconsistent(format!("vertex {} unreachable", g.vertices[j]))))
            .collect::<Result<_, _>>()?;

        let mut values = vec![t.zero(); a.dim(top)];
        let mut units = Vec::with_capacity(n);
        for j in 0..n {
            values[gen[j]] = c[j].clone();
            units.push(SparseVec::unit(t, gen[j]).scale(t, &t.inv(&c[j])?));
        }
        let mut form = Form { values, units, dual: Vec::new(), normalized: start };
        form.check_nakayama(a)?;
        form.dual = form.dual_bases(a)?;
        Ok(form)
    }

    pub fn normalized_vertex(&self) -> usize {
        self.normalized
    }

    /// f(x) for x in A_d.
    pub fn f(&self, a: &GradedAlgebra, d: usize, x: &SparseVec) -> Elem {
        let t = &**a.tower();
        if d != a.top() {
            return t.zero();
        }
        x.entries.iter().fold(t.zero(), |acc, (i, c)| t.add(&acc, &t.mul(c, &self.values[*i])))
    }

    /// (x, y) = f(xy).
    pub fn pair(&self, a: &GradedAlgebra, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> Elem {
        if p + q != a.top() {
            return a.tower().zero();
        }
        self.f(a, p + q, &a.mul(p, x, q, y))
    }

    /// u_j, the generator of j A_top nu(j) with f(u_j) = 1.
    pub fn unit(&self, j: usize) -> &SparseVec {
        &self.units[j]
    }

    /// Dual of basis element i of A_p; lies in A_{top-p}.
    pub fn dual(&self, p: usize, i: usize) -> &SparseVec {
        &self.dual[p][i]
    }

    fn check_nakayama(&self, a: &GradedAlgebra) -> Result<(), AlgebraError> {
        let g = &**a.graph();
        let t = &**a.tower();
        let top = a.top();
        let n = g.num_vertices();
        for p in 0..=top {
            let q = top - p;
            for s in 0..n {
                for m in 0..n {
                    for &i in a.block(p, s, m) {
                        for &j in a.block(q, m, g.nu_vertex[s]) {
                            let x = SparseVec::unit(t, i);
                            let y = SparseVec::unit(t, j);
                            let lhs = self.pair(a, p, &x, q, &y);
                            let rhs = self.pair(a, q, &y, p, &a.beta(1, p, &x));
                            if lhs != rhs {
                                return Err(AlgebraError::FormInconsistent(format!(
                                    "(x, y) != (y, beta x) for x = {}, y = {}",
                                    a.path_label(p, i),
                                    a.path_label(q, j)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairing matrix of the block s A_p m against m A_{top-p} nu(s).
    pub fn pairing_block(&self, a: &GradedAlgebra, p: usize, s: usize, m: usize) -> Vec<Vec<Elem>> {
        let q = a.top() - p;
        let rows = a.block(p, s, m);
        let cols = a.block(q, m, a.graph().nu_vertex[s]);
        rows.iter()
            .map(|&i| {
                cols.iter()
                    .map(|&j| self.f(a, a.top(), &a.mul_basis(p, i, q, j)))
                    .collect()
            })
            .collect()
    }

    fn dual_bases(&self, a: &GradedAlgebra) -> Result<Vec<Vec<SparseVec>>, AlgebraError> {
        let g = &**a.graph();
        let t = &**a.tower();
        let top = a.top();
        let n = g.num_vertices();
        let mut out = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let q = top - p;
            let mut duals = vec![SparseVec::new(); a.dim(p)];
            for s in 0..n {
                for m in 0..n {
                    let rows = a.block(p, s, m);
                    let cols = a.block(q, m, g.nu_vertex[s]);
                    let singular = || AlgebraError::SingularPairing {
                        degree: p,
                        src: g.vertices[s].clone(),
                        dst: g.vertices[m].clone(),
                    };
                    if rows.len() != cols.len() {
                        return Err(singular());
                    }
                    if rows.is_empty() {
                        continue;
                    }
                    let inv = inverse_dense(t, &self.pairing_block(a, p, s, m)).map_err(|e| match e {
                        ScalarError::DivisionByZero => singular(),
                        other => other.into(),
                    })?;
                    for (r, &i) in rows.iter().enumerate() {
                        duals[i] = SparseVec::from_terms(t, cols.iter().enumerate().map(|(v, &j)| (j, inv[v][r].clone())).collect());
                    }
                }
            }
            out.push(duals);
        }
        Ok(out)
    }
}

/// For e: i -> k, pick y in k A_{top-1} nu(i) with e y != 0 and return
/// (alpha, gamma) where e y = alpha g_i and y beta(e) = gamma g_k.
fn edge_ratio(a: &GradedAlgebra, e: usize, gen: &[usize]) -> Result<(Elem, Elem), AlgebraError> {
    let g = &**a.graph();
    let t = &**a.tower();
    let top = a.top();
    let (i, k) = (g.src(e), g.dst(e));
    for &y in a.block(top - 1, k, g.nu_vertex[i]) {
        let ey = a.mul_basis(1, e, top - 1, y);
        let Some(alpha) = ey.get(gen[i]).cloned() else { continue };
        let ybe = a.mul(top - 1, &SparseVec::unit(t, y), 1, &a.beta_basis(1, 1, e));
        let gamma = ybe.get(gen[k]).cloned().ok_or_else(|| {
            AlgebraError::FormInconsistent(format!("y beta(e) vanishes for e = {}", g.edges[e].id))
        })?;
        return Ok((alpha, gamma));
    }
    Err(AlgebraError::FormInconsistent(format!("edge {} pairs to zero with the complementary degree", g.edges[e].id)))
}
