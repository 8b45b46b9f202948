//! Numeric solution of the type I/II system followed by exact
//! identification of every weight.
//!
//! Weights are real unknowns, one per triangle class. Levenberg-Marquardt
//! runs from seeded random starts; each converged W^2 is matched against
//! products of quantum integers, then W = sign * sqrt is built in a tower and
//! the whole system is re-verified exactly.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{type_ii_frames, type_ii_rhs, type_ii_terms, CellError, CellSystem, Triangles};
use crate::quiver::Graph;
use num_rational::BigRational;

use crate::scalar::{Elem, FieldElem, NumberField, Tower};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub seed: u64,
    pub max_trials: usize,
    /// Relative tolerance for matching W^2 against candidate values.
    pub match_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { seed: 1, max_trials: 40, match_tol: 1e-9 }
    }
}

/// sum_i coef_i prod_{j in idx_i} x_j - constant
struct Equation {
    constant: f64,
    terms: Vec<(f64, Vec<usize>)>,
}

impl Equation {
    fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, idx)| c * idx.iter().map(|&i| x[i]).product::<f64>()).sum::<f64>() - self.constant
    }

    fn grad(&self, x: &[f64], row: &mut [f64]) {
        for (c, idx) in &self.terms {
            for k in 0..idx.len() {
                let mut p = *c;
                for (m, &j) in idx.iter().enumerate() {
                    if m != k {
                        p *= x[j];
                    }
                }
                row[idx[k]] += p;
            }
        }
    }
}

fn build_equations(g: &Graph, tri: &Triangles, phi: &[f64], q2: f64) -> Vec<Equation> {
    let mut eqs = Vec::new();
    for a in 0..g.num_edges() {
        let (i, j) = (g.src(a), g.dst(a));
        for &a2 in g.out_edges(i) {
            if g.dst(a2) != j {
                continue;
            }
            let terms = tri
                .starting_with(a)
                .iter()
                .filter_map(|&(b1, b2, c)| tri.class_of([a2, b1, b2]).map(|c2| (1.0, vec![c, c2])))
                .collect();
            let constant = if a == a2 { q2 * phi[i] * phi[j] } else { 0.0 };
            eqs.push(Equation { constant, terms });
        }
    }
    for a2 in 0..g.num_edges() {
        for f in type_ii_frames(g, a2) {
            let [_, _, a3, a4] = f;
            let (i1, i2, i3, i4) = (g.dst(a2), g.src(a2), g.dst(a3), g.src(a4));
            let terms = type_ii_terms(g, tri, f).into_iter().map(|(k, cs)| (1.0 / phi[k], cs.to_vec())).collect();
            let (d1, d2) = type_ii_rhs(f);
            let mut constant = 0.0;
            if d1 {
                constant += phi[i4] * phi[i1] * phi[i2];
            }
            if d2 {
                constant += phi[i1] * phi[i2] * phi[i3];
            }
            eqs.push(Equation { constant, terms });
        }
    }
    eqs
}

fn cost(eqs: &[Equation], x: &[f64]) -> f64 {
    eqs.iter().map(|e| e.eval(x).powi(2)).sum::<f64>() / 2.0
}

/// Levenberg-Marquardt from `x`; returns the final cost.
fn levenberg_marquardt(eqs: &[Equation], x: &mut Vec<f64>, max_iter: usize) -> f64 {
    let n = x.len();
    let m = eqs.len();
    let mut lambda = 1e-3;
    let mut c = cost(eqs, x);
    for _ in 0..max_iter {
        if c < 1e-28 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(m, n);
        let mut r = DVector::<f64>::zeros(m);
        let mut row = vec![0.0; n];
        for (i, e) in eqs.iter().enumerate() {
            r[i] = e.eval(x);
            row.iter_mut().for_each(|v| *v = 0.0);
            e.grad(x, &mut row);
            for (j, v) in row.iter().enumerate() {
                jac[(i, j)] = *v;
            }
        }
        let jt = jac.transpose();
        let a = &jt * &jac;
        let grad = &jt * &r;
        let mut improved = false;
        for _ in 0..30 {
            let mut damped = a.clone();
            for d in 0..n {
                damped[(d, d)] += lambda * (a[(d, d)] + 1e-9);
            }
            let Some(step) = damped.cholesky().map(|ch| ch.solve(&(-&grad))) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let tc = cost(eqs, &trial);
            if tc < c {
                *x = trial;
                c = tc;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    c
}

/// Products prod_n [n]^{e_n} * 2^a * 3^b with small exponents, sorted by log.
pub(crate) struct CandidateTable {
    /// Quantum integer indices followed by the primes 2 and 3 (as negative tags).
    bases: Vec<i64>,
    entries: Vec<(f64, Vec<i8>)>,
}

const EXP_RANGE: i8 = 3;

impl CandidateTable {
    pub(crate) fn new(field: &NumberField) -> Self {
        let h = field.h() as i64;
        let mut bases: Vec<i64> = (2..=h / 2).collect();
        bases.extend([-2, -3]);
        let logs: Vec<f64> = bases
            .iter()
            .map(|&b| if b < 0 { (-b as f64).ln() } else { field.approx(&field.qint(b)).ln() })
            .collect();
        let mut entries = Vec::new();
        let mut exps = vec![-EXP_RANGE; bases.len()];
        loop {
            let l: f64 = exps.iter().zip(&logs).map(|(&e, l)| e as f64 * l).sum();
            entries.push((l, exps.clone()));
            let mut k = 0;
            loop {
                if k == exps.len() {
                    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
                    return CandidateTable { bases, entries };
                }
                if exps[k] < EXP_RANGE {
                    exps[k] += 1;
                    break;
                }
                exps[k] = -EXP_RANGE;
                k += 1;
            }
        }
    }

    /// Exponents of the simplest candidate within relative tolerance of `v` > 0.
    fn find(&self, v: f64, tol: f64) -> Option<&[i8]> {
        let l = v.ln();
        let lo = self.entries.partition_point(|e| e.0 < l - tol);
        self.entries[lo..]
            .iter()
            .take_while(|e| e.0 <= l + tol)
            .min_by_key(|e| e.1.iter().map(|x| x.unsigned_abs() as u32).sum::<u32>())
            .map(|e| e.1.as_slice())
    }

    fn value(&self, field: &NumberField, exps: &[i8]) -> Result<FieldElem, CellError> {
        let mut acc = field.one();
        for (&b, &e) in self.bases.iter().zip(exps) {
            if e == 0 {
                continue;
            }
            let base = if b < 0 { field.from_int(-b) } else { field.qint(b) };
            let p = field.pow(&base, e.unsigned_abs() as u32);
            acc = if e > 0 { field.mul(&acc, &p) } else { field.div(&acc, &p)? };
        }
        Ok(acc)
    }

    /// Exact element of K matching `v`, or None.
    pub(crate) fn identify(&self, field: &NumberField, v: f64, tol: f64) -> Result<Option<FieldElem>, CellError> {
        match self.find(v, tol) {
            Some(e) => {
                let x = self.value(field, e)?;
                Ok(((field.approx(&x) - v).abs() <= tol * v.abs().max(1.0) * 10.0).then_some(x))
            }
            None => Ok(self.identify_linear(field, v, tol)),
        }
    }

    /// Fallback: v = (c_0 + c_1 g + ... + c_{d-1} g^{d-1}) / den with g = [2]
    /// and small integers, preferring small denominators and heights.
    fn identify_linear(&self, field: &NumberField, v: f64, tol: f64) -> Option<FieldElem> {
        const HEIGHT: i64 = 12;
        const MAX_DEN: i64 = 8;
        let d = field.degree();
        let g = field.approx(&field.gen());
        let pows: Vec<f64> = (0..d).map(|i| g.powi(i as i32)).collect();
        let mut best: Option<(i64, Vec<i64>, i64)> = None;
        for den in 1..=MAX_DEN {
            let mut c = vec![-HEIGHT; d.saturating_sub(1)];
            loop {
                let rest: f64 = c.iter().zip(&pows[1..]).map(|(&x, p)| x as f64 * p).sum();
                let c0 = (den as f64 * v - rest).round();
                if (c0 + rest - den as f64 * v).abs() <= tol * den as f64 * v.abs().max(1.0) {
                    let height = c.iter().map(|x| x.abs()).chain([c0.abs() as i64]).max().unwrap_or(0);
                    if best.as_ref().map_or(true, |b| height < b.0) {
                        let mut all = vec![c0 as i64];
                        all.extend(&c);
                        best = Some((height, all, den));
                    }
                }
                let Some(k) = c.iter().position(|&x| x < HEIGHT) else { break };
                c[k] += 1;
                c[..k].iter_mut().for_each(|x| *x = -HEIGHT);
            }
            if best.is_some() {
                break;
            }
        }
        let (_, c, den) = best?;
        let coords: Vec<BigRational> = c.iter().map(|&x| BigRational::new(x.into(), den.into())).collect();
        let gpows: Vec<FieldElem> = (0..d).map(|i| field.pow(&field.gen(), i as u32)).collect();
        let mut acc = field.zero();
        for (q, p) in coords.iter().zip(&gpows) {
            acc = field.add(&acc, &field.mul(&field.from_rational(q), p));
        }
        Some(acc)
    }
}

/// Square roots of base-field elements, growing the tower as needed.
pub(crate) fn signed_roots(base: &Arc<Tower>, values: &[(f64, FieldElem)]) -> Result<(Arc<Tower>, Vec<Elem>), CellError> {
    let mut tower = base.clone();
    let mut roots: Vec<(Arc<Tower>, Elem)> = Vec::with_capacity(values.len());
    for (sign, v) in values {
        if v.is_zero() {
            roots.push((tower.clone(), tower.zero()));
            continue;
        }
        let (t2, r) = tower.adjoin_sqrt(&tower.from_base(v.clone()))?;
        tower = t2;
        let r = if *sign < 0.0 { tower.neg(&r) } else { r };
        roots.push((tower.clone(), r));
    }
    let lifted = roots.iter().map(|(t, r)| tower.lift(t, r)).collect::<Result<Vec<_>, _>>()?;
    Ok((tower, lifted))
}

/// Exact cell system for a graph without parallel edges, from real weights.
pub fn solve_cells(g: &Arc<Graph>, opts: &SolveOptions) -> Result<CellSystem, CellError> {
    let field = g.base_field()?;
    let (_, phi_k) = g.perron_frobenius()?;
    let phi: Vec<f64> = phi_k.iter().map(|x| field.approx(x)).collect();
    let tri = Arc::new(Triangles::new(g));
    if tri.is_empty() {
        return Err(CellError::Solver(format!("{} has no triangles", g.name)));
    }
    let q2 = field.approx(&field.qint(2));
    let eqs = build_equations(g, &tri, &phi, q2);
    let table = CandidateTable::new(&field);
    let base = Tower::base(field.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut last = String::from("no trial converged");
    for trial in 0..opts.max_trials {
        let mut x: Vec<f64> = (0..tri.len()).map(|_| rng.gen_range(-2.5..2.5)).collect();
        let c = levenberg_marquardt(&eqs, &mut x, 400);
        if c > 1e-20 {
            last = format!("trial {trial}: residual cost {c:.3e}");
            continue;
        }
        let mut values = Vec::with_capacity(x.len());
        let mut ok = true;
        for (i, &w) in x.iter().enumerate() {
            if w.abs() < 1e-7 {
                values.push((1.0, field.zero()));
                continue;
            }
            match table.identify(&field, w * w, opts.match_tol)? {
                Some(v) => values.push((w.signum(), v)),
                None => {
                    last = format!("trial {trial}: W^2 = {:.12} at triangle {i} not identified", w * w);
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let (tower, weights) = signed_roots(&base, &values)?;
        let phi_e = phi_k.iter().map(|p| tower.from_base(p.clone())).collect();
        let cells = CellSystem { graph: g.clone(), tower, phi: phi_e, triangles: tri.clone(), weights };
        match cells.certify() {
            Ok(()) => return Ok(cells),
            Err(e) => last = format!("trial {trial}: {e}"),
        }
    }
    Err(CellError::Solver(format!("{}: {last}", g.name)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Family;

    fn solve(name: &str) -> CellSystem {
        let g = Arc::new(Family::parse(name).unwrap().build().unwrap());
        solve_cells(&g, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn a4_weight_is_fourth_root_of_two() {
        let w = solve("A4");
        let x = w.tower.approx(&w.weights[0]).0.abs();
        assert!((x - 2f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn small_families_certify() {
        for name in ["A5", "A6", "A5*", "A6*", "E8*"] {
            let w = solve(name);
            assert!(w.certify().is_ok(), "{name}");
        }
    }

    #[test]
    fn candidate_lookup() {
        let f = NumberField::new(8).unwrap();
        let t = CandidateTable::new(&f);
        let target = f.div(&f.mul(&f.qint(2), &f.qint(3)), &f.qint(4)).unwrap();
        let got = t.identify(&f, f.approx(&target), 1e-9).unwrap().unwrap();
        assert_eq!(got, target);
    }
}
