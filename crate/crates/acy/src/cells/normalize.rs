//! Gauge fixing for nu, and rescaling of edges to shrink the scalar tower.
//!
//! Rescaling a -> lambda_a a is an automorphism of the path algebra taking
//! the relations of W to those of W'(abc) = lambda_a lambda_b lambda_c W(abc)
//! up to scalars, so A(W) and A(W') are isomorphic graded algebras. With
//! lambda constant on nu-orbits the isomorphism commutes with nu. Choosing
//! lambda_a = g_F * omega^k (g_F a product of tower generators) reduces to
//! linear systems over F_2 and F_3.

use super::modp::solve_mod_p;
use super::{gauge_transform, CellError, CellSystem, Gauge, Potential};
use crate::scalar::{ratio, Elem, FieldElem, Tower};

/// Sign gauge making W(nu t) = W(t) for every triangle. Requires
/// W(nu t) = +-W(t), which holds for cells on graphs without parallel edges
/// whose moduli are nu-symmetric.
pub fn fix_nu_gauge(cells: &CellSystem) -> Result<CellSystem, CellError> {
    let g = &*cells.graph;
    if g.nu_is_trivial() {
        return Ok(cells.clone());
    }
    let t = &*cells.tower;
    let ne = g.num_edges();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, tr) in cells.triangles.list().iter().enumerate() {
        let image = tr.map(|e| g.nu_edge[e]);
        let j = cells.triangles.class_of(image).ok_or_else(|| CellError::Schema("nu does not preserve triangles".into()))?;
        let (w, wn) = (&cells.weights[i], &cells.weights[j]);
        let flip = if wn == w {
            0
        } else if *wn == t.neg(w) {
            1
        } else {
            return Err(CellError::Verification(format!(
                "W(nu t) / W(t) is not +-1 on the triangle through {}",
                g.vertices[g.src(tr[0])]
            )));
        };
        if t.is_zero(w) {
            continue;
        }
        let mut row = vec![0u8; ne];
        for &e in tr {
            row[e] ^= 1;
            row[g.nu_edge[e]] ^= 1;
        }
        rows.push(row);
        rhs.push(flip);
    }
    let s = solve_mod_p(&rows, &rhs, ne, 2)
        .ok_or_else(|| CellError::Verification("no sign gauge makes the cells nu-invariant".into()))?;
    let mut u = Gauge::identity(g, t);
    for (e, &bit) in s.iter().enumerate() {
        if bit == 1 {
            u.entries[e] = vec![(e, t.from_int(-1))];
        }
    }
    let fixed = gauge_transform(cells, &u)?;
    debug_assert!(fixed.potential().is_nu_invariant());
    Ok(fixed)
}

/// Structure of the tower needed to write omega = (-1 + sqrt(-3)) / 2.
struct Omega {
    bit: usize,
    pows: [Elem; 3],
}

fn find_omega(t: &Tower) -> Option<Omega> {
    let m3 = t.field().from_int(-3);
    let bit = t.radicands().iter().position(|x| *x == m3)?;
    let half = t.from_rational(&ratio(1, 2));
    let w = t.mul(&t.add(&t.from_int(-1), &t.gen(bit)), &half);
    let w2 = t.mul(&w, &w);
    Some(Omega { bit, pows: [t.one(), w, w2] })
}

/// W = c g_S omega^j with c in K.
#[derive(Clone, Debug)]
struct Mono {
    coef: FieldElem,
    set: usize,
    phase: usize,
}

fn decompose(t: &Tower, omega: Option<&Omega>, w: &Elem) -> Option<Mono> {
    let phases: &[usize] = if omega.is_some() { &[0, 1, 2] } else { &[0] };
    for &j in phases {
        // omega^{-j} = omega^{3-j}
        let x = match omega {
            Some(o) => t.mul(w, &o.pows[(3 - j) % 3]),
            None => w.clone(),
        };
        let nz: Vec<usize> = (0..x.coords().len()).filter(|&s| !x.coords()[s].is_zero()).collect();
        if nz.len() == 1 {
            return Some(Mono { coef: x.coords()[nz[0]].clone(), set: nz[0], phase: j });
        }
    }
    None
}

fn edge_orbits(p: &Potential) -> (Vec<usize>, usize) {
    let g = &*p.graph;
    let mut var = vec![usize::MAX; g.num_edges()];
    let mut n = 0;
    for e in 0..g.num_edges() {
        if var[e] != usize::MAX {
            continue;
        }
        let mut f = e;
        loop {
            var[f] = n;
            f = g.nu_edge[f];
            if f == e {
                break;
            }
        }
        n += 1;
    }
    (var, n)
}

/// Reduced F_2 basis of a family of bit sets, with `first` (if any) as the
/// leading basis vector and removed from all others.
fn f2_basis(sets: impl Iterator<Item = usize>, first: Option<usize>) -> Vec<usize> {
    let mut basis: Vec<usize> = first.into_iter().collect();
    for mut s in sets {
        for &b in &basis {
            let top = usize::BITS - 1 - b.leading_zeros();
            if s >> top & 1 == 1 {
                s ^= b;
            }
        }
        if s != 0 {
            let top = usize::BITS - 1 - s.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> top & 1 == 1 && Some(*b) != first {
                    *b ^= s;
                }
            }
            basis.push(s);
        }
    }
    basis
}

/// Decompose `s` over a basis produced by `f2_basis`; returns the indices used.
fn f2_coords(basis: &[usize], mut s: usize) -> Option<Vec<usize>> {
    let mut used = Vec::new();
    for (i, &b) in basis.iter().enumerate() {
        let top = usize::BITS - 1 - b.leading_zeros();
        if s >> top & 1 == 1 {
            s ^= b;
            used.push(i);
        }
    }
    (s == 0).then_some(used)
}

/// g_S as a tower element.
fn gen_product(t: &Tower, set: usize) -> Elem {
    let mut coords = t.zero().coords().to_vec();
    coords[set] = t.field().one();
    t.from_coords(coords).expect("subset index within the tower")
}

/// Rescale edges so that the weights live in the smallest tower reachable
/// by the method above. Returns the input unchanged when some weight is not
/// of the form c g_S omega^j.
pub fn to_potential(p: &Potential) -> Result<Potential, CellError> {
    let t = p.tower.clone();
    let omega = find_omega(&t);
    let monos: Option<Vec<Option<Mono>>> = p
        .weights
        .iter()
        .map(|w| if t.is_zero(w) { Some(None) } else { decompose(&t, omega.as_ref(), w).map(Some) })
        .collect();
    let Some(monos) = monos else { return Ok(p.clone()) };
    let (var, nvar) = edge_orbits(p);
    let active: Vec<usize> = (0..monos.len()).filter(|&i| monos[i].is_some()).collect();
    let rows_for = |modulus: u8| -> Vec<Vec<u8>> {
        active
            .iter()
            .map(|&i| {
                let mut row = vec![0u8; nvar];
                for &e in &p.triangles.list()[i] {
                    row[var[e]] = (row[var[e]] + 1) % modulus;
                }
                row
            })
            .collect()
    };
    // F_2: one system per generator
    let rows2 = rows_for(2);
    let mut flip = vec![0usize; nvar];
    for bit in 0..t.rank() {
        let rhs: Vec<u8> = active.iter().map(|&i| (monos[i].as_ref().unwrap().set >> bit & 1) as u8).collect();
        if let Some(x) = solve_mod_p(&rows2, &rhs, nvar, 2) {
            for (v, &b) in x.iter().enumerate() {
                flip[v] |= (b as usize) << bit;
            }
        }
    }
    // F_3: phases
    let mut turn = vec![0usize; nvar];
    if omega.is_some() {
        let rhs: Vec<u8> = active.iter().map(|&i| ((3 - monos[i].as_ref().unwrap().phase) % 3) as u8).collect();
        if let Some(x) = solve_mod_p(&rows_for(3), &rhs, nvar, 3) {
            turn = x.iter().map(|&k| k as usize).collect();
        }
    }
    let lambda: Vec<Elem> = (0..p.graph.num_edges())
        .map(|e| {
            let g = gen_product(&t, flip[var[e]]);
            match &omega {
                Some(o) => t.mul(&g, &o.pows[turn[var[e]]]),
                None => g,
            }
        })
        .collect();
    let rescaled: Vec<Elem> = p
        .triangles
        .list()
        .iter()
        .zip(&p.weights)
        .map(|(tr, w)| tr.iter().fold(w.clone(), |acc, &e| t.mul(&acc, &lambda[e])))
        .collect();
    let monos: Vec<Option<Mono>> = rescaled
        .iter()
        .map(|w| if t.is_zero(w) { Ok(None) } else { decompose(&t, omega.as_ref(), w).map(Some).ok_or(()) })
        .collect::<Result<_, _>>()
        .map_err(|_| CellError::Schema("rescaled weight lost its monomial form".into()))?;
    let needs_omega = monos.iter().flatten().any(|m| m.phase != 0);
    let first = if needs_omega { omega.as_ref().map(|o| 1usize << o.bit) } else { None };
    let basis = f2_basis(monos.iter().flatten().map(|m| m.set), first);
    let field = t.field().clone();
    let radicands: Vec<FieldElem> =
        basis.iter().map(|&b| gen_product(&t, b)).map(|g| t.base_part(&t.mul(&g, &g)).expect("square of g_S")).collect();
    let target = Tower::with_radicands(field, radicands)?;
    let new_omega = needs_omega.then(|| find_omega(&target).expect("sqrt(-3) leads the target tower"));
    let weights = monos
        .iter()
        .map(|m| {
            let Some(m) = m else { return Ok(target.zero()) };
            let used = f2_coords(&basis, m.set).expect("set lies in the span");
            // prod of g_B in the old tower = kappa g_S
            let old = used.iter().fold(t.one(), |acc, &i| t.mul(&acc, &gen_product(&t, basis[i])));
            let kappa = old.coords()[m.set].clone();
            let new = used.iter().fold(target.one(), |acc, &i| target.mul(&acc, &target.gen(i)));
            let c = t.field().div(&m.coef, &kappa)?;
            let mut w = target.mul_base(&new, &c);
            if let Some(o) = &new_omega {
                w = target.mul(&w, &o.pows[m.phase]);
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>, CellError>>()?;
    Ok(Potential { graph: p.graph.clone(), tower: target, triangles: p.triangles.clone(), weights })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cells::{solve_cells, SolveOptions};
    use crate::quiver::Family;

    #[test]
    fn a5_cells_gauge_fix_and_shrink() {
        let g = Arc::new(Family::A(5).build().unwrap());
        let cells = solve_cells(&g, &SolveOptions::default()).unwrap();
        let fixed = fix_nu_gauge(&cells).unwrap();
        assert!(fixed.potential().is_nu_invariant());
        fixed.certify().unwrap();
        let p = to_potential(&fixed.potential()).unwrap();
        assert!(p.tower.rank() <= fixed.tower.rank());
        assert!(p.is_nu_invariant());
    }

    #[test]
    fn basis_with_leading_vector() {
        let b = f2_basis([0b011, 0b110, 0b101].into_iter(), Some(0b100));
        assert_eq!(b[0], 0b100);
        assert_eq!(b.len(), 3);
        assert!(f2_coords(&b, 0b111).is_some());
    }
}
