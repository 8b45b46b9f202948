//! Cell systems obtained from other graphs: the three-coloured unfolding
//! (D^(n)* from A^(n)*, E8 from E8*) and the Z3 orbifold D^(3k+3) of A^(3k+3).

use std::sync::Arc;

use super::{CellError, CellSystem, RelationSet, Triangles};
use crate::quiver::{Graph, OrbifoldMap, StarTag};
use crate::scalar::Elem;

/// Lift cells along an unfolding: vertex v_a = 3v + a, edge e_a = 3e + a.
/// Every unfolded triangle lies over a base triangle with the same weight.
pub fn unfold_cells(base: &CellSystem, unfolded: &Arc<Graph>) -> Result<CellSystem, CellError> {
    check_unfolding(&base.graph, unfolded)?;
    let tri = Arc::new(Triangles::new(unfolded));
    let weights = tri
        .list()
        .iter()
        .map(|t| {
            let b = t.map(|e| e / 3);
            base.weight(b).cloned().ok_or_else(|| CellError::Schema("unfolded triangle without a base triangle".into()))
        })
        .collect::<Result<_, _>>()?;
    let phi = (0..unfolded.num_vertices()).map(|v| base.phi[v / 3].clone()).collect();
    Ok(CellSystem { graph: unfolded.clone(), tower: base.tower.clone(), phi, triangles: tri, weights })
}

/// Lift relations along an unfolding: rho_{e_a} = sum c [b_{a+1} c_{a+2}].
pub fn unfold_relations(base: &RelationSet, unfolded: &Arc<Graph>) -> Result<RelationSet, CellError> {
    check_unfolding(&base.graph, unfolded)?;
    let relations = (0..unfolded.num_edges())
        .map(|e| {
            let a = e % 3;
            base.relations[e / 3]
                .iter()
                .map(|([b, c], x)| ([3 * b + (a + 1) % 3, 3 * c + (a + 2) % 3], x.clone()))
                .collect()
        })
        .collect();
    let rs = RelationSet { graph: unfolded.clone(), tower: base.tower.clone(), relations };
    rs.validate()?;
    Ok(rs)
}

fn check_unfolding(base: &Graph, g: &Graph) -> Result<(), CellError> {
    let ok = g.num_vertices() == 3 * base.num_vertices()
        && g.num_edges() == 3 * base.num_edges()
        && g.edges.iter().enumerate().all(|(i, e)| {
            let b = &base.edges[i / 3];
            e.src == 3 * b.src + i % 3 && e.dst == 3 * b.dst + (i % 3 + 1) % 3
        });
    if ok {
        Ok(())
    } else {
        Err(CellError::Schema(format!("{} is not the unfolding of {}", g.name, base.name)))
    }
}

/// D^(3k+3) cells from nu-invariant A^(3k+3) cells.
///
/// A triangle away from the tripled vertex lifts uniquely to A and keeps its
/// weight when the lift closes (zero otherwise). A triangle through copy l
/// of the tripled vertex has the form star_l -> i1 -> i2 -> star_l with the
/// middle edge gamma or gamma'; it gets W_A / sqrt(3) * omega^(l m), with
/// m = m_gamma or m_gamma' and omega a primitive cube root of unity. The pair
/// (m_gamma, m_gamma') is the first in {0,1,2}^2 that verifies exactly.
pub fn orbifold_cells(a_cells: &CellSystem, map: &OrbifoldMap, d: &Arc<Graph>) -> Result<CellSystem, CellError> {
    Ok(orbifold_variants(a_cells, map, d)?.swap_remove(0).1)
}

/// Every phase pair (m_gamma, m_gamma') whose orbifold cells verify, in
/// search order.
pub fn orbifold_variants(
    a_cells: &CellSystem,
    map: &OrbifoldMap,
    d: &Arc<Graph>,
) -> Result<Vec<((usize, usize), CellSystem)>, CellError> {
    let a = &*a_cells.graph;
    if a.nu_vertex != map.parent.nu_vertex || a.edges != map.parent.edges {
        return Err(CellError::Schema("cells are not on the parent A graph".into()));
    }
    if !a_cells.potential().is_nu_invariant() {
        return Err(CellError::Verification("A cells must be nu-invariant before taking the orbifold".into()));
    }
    let (t3, r3) = a_cells.tower.adjoin_sqrt(&a_cells.tower.from_int(3))?;
    let (tower, rm3) = t3.adjoin_sqrt_signed(&t3.from_int(-3))?;
    let r3 = tower.lift(&t3, &r3)?;
    let half = tower.from_rational(&crate::scalar::ratio(1, 2));
    let omega = tower.mul(&tower.add(&tower.from_int(-1), &rm3), &half);
    let omega_pows = [tower.one(), omega.clone(), tower.mul(&omega, &omega)];
    let inv_r3 = tower.inv(&r3)?;
    let a_cells = a_cells.lift_to(&tower)?;
    let tri = Arc::new(Triangles::new(d));

    let star_copy = |v: usize| match map.vertex_tag[v] {
        StarTag::Star(l) => Some(l),
        StarTag::Orbit(_) => None,
    };
    // weights without phase, and the phase exponent data (l, which gamma)
    let mut plain: Vec<Elem> = Vec::with_capacity(tri.len());
    let mut phase: Vec<Option<(usize, usize)>> = Vec::with_capacity(tri.len());
    for &t in tri.list() {
        let rot = (0..3).find(|&r| star_copy(d.src(t[r])).is_some()).unwrap_or(0);
        let [e1, e2, e3] = [t[rot], t[(rot + 1) % 3], t[(rot + 2) % 3]];
        let l = star_copy(d.src(e1));
        let mut w = tower.zero();
        for &x1 in &map.edge_orbit[e1] {
            if l.is_some() && a.src(x1) != map.star {
                continue;
            }
            let Some(&x2) = map.edge_orbit[e2].iter().find(|&&x| a.src(x) == a.dst(x1)) else { continue };
            let Some(&x3) = map.edge_orbit[e3].iter().find(|&&x| a.src(x) == a.dst(x2)) else { continue };
            if a.dst(x3) == a.src(x1) {
                w = a_cells.weight([x1, x2, x3]).cloned().unwrap_or_else(|| tower.zero());
            }
            break;
        }
        match l {
            Some(l) => {
                let which = map.gamma.iter().position(|&g| g == e2).ok_or_else(|| {
                    CellError::Schema(format!("triangle through {} avoids the double edge", d.vertices[d.src(e1)]))
                })?;
                plain.push(tower.mul(&w, &inv_r3));
                phase.push(Some((l, which)));
            }
            None => {
                plain.push(w);
                phase.push(None);
            }
        }
    }
    let phi: Vec<Elem> = map
        .vertex_tag
        .iter()
        .map(|tag| match tag {
            StarTag::Orbit(o) => a_cells.phi[o[0]].clone(),
            StarTag::Star(_) => tower.mul(&a_cells.phi[map.star], &tower.from_rational(&crate::scalar::ratio(1, 3))),
        })
        .collect();
    let mut found = Vec::new();
    let mut last = None;
    for m in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (0, 0), (1, 1), (2, 2)] {
        let weights = plain
            .iter()
            .zip(&phase)
            .map(|(w, p)| match p {
                Some((l, which)) => {
                    let e = if *which == 0 { m.0 } else { m.1 };
                    tower.mul(w, &omega_pows[(l * e) % 3])
                }
                None => w.clone(),
            })
            .collect();
        let cells = CellSystem { graph: d.clone(), tower: tower.clone(), phi: phi.clone(), triangles: tri.clone(), weights };
        match cells.certify() {
            Ok(()) => found.push((m, cells)),
            Err(e) => last = Some(e),
        }
    }
    if found.is_empty() {
        return Err(last.unwrap_or_else(|| CellError::Verification("no phase choice".into())));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{fix_nu_gauge, solve_cells, SolveOptions};
    use crate::quiver::Family;

    #[test]
    fn e8_from_e8star_certifies() {
        let base = Arc::new(Family::E8Star.build().unwrap());
        let cells = solve_cells(&base, &SolveOptions::default()).unwrap();
        let e8 = Arc::new(Family::E8.build().unwrap());
        let lifted = unfold_cells(&cells, &e8).unwrap();
        // the loop triangles aaa lift to a single class each
        let loops = cells.triangles.list().iter().filter(|t| t[0] == t[1] && t[1] == t[2]).count();
        assert_eq!(lifted.triangles.len(), 3 * cells.triangles.len() - 2 * loops);
        lifted.certify().unwrap();
    }

    #[test]
    fn d6_orbifold_certifies() {
        let (d, map) = crate::quiver::build_d(6).unwrap();
        let a = Arc::new(map.parent.clone());
        let cells = fix_nu_gauge(&solve_cells(&a, &SolveOptions::default()).unwrap()).unwrap();
        let dc = orbifold_cells(&cells, &map, &Arc::new(d)).unwrap();
        assert!(!dc.tower.is_real());
    }
}
