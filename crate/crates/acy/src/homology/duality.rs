//! Self-duality of the homology complex under the Frobenius form, and the
//! identification of the cohomology differentials with homology ones.
//!
//! H_j and H_{11-j} are paired in complementary total degrees (d, 3h - d):
//! (g, x) against (g', y) gives f(x y) when g' = nu^{-k}(g), k the twist of
//! the first space, and 0 otherwise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Direction, GradedComplex, HomologyError, Slot, Space};
use crate::algebra::GradedAlgebra;
use crate::linalg::SparseVec;
use crate::scalar::Elem;
use crate::series::GradedDims;

/// One matrix identity, checked at every total degree where it is defined.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdentityCheck {
    /// "self-dual" (mu'_i against mu'_{12-i}), "beta" (mu'_12) or
    /// "cohomology" (mu*_i against mu'_{16-i})
    pub kind: String,
    pub index: usize,
    pub partner: usize,
    pub sign: i8,
    pub degrees: usize,
    pub failed_at: Option<i64>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failed_at.is_none()
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct DualityReport {
    pub identities: Vec<IdentityCheck>,
    /// (index, degree) pairs where dim HH_i,d != dim HH_{11-i},{3h-d}
    /// (or HH_11 against HH_12 reflected at 6h)
    pub symmetry_failures: Vec<(usize, i64)>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.symmetry_failures.is_empty() && self.identities.iter().all(IdentityCheck::passed)
    }
}

fn partner_gen(a: &GradedAlgebra, first: &Space, g: usize) -> usize {
    let k = -(first.twist as i64);
    match first.slot {
        Slot::Vertex | Slot::Top => a.graph().nu_pow_vertex(g, k),
        Slot::Edge | Slot::Reversed => a.graph().nu_pow_edge(g, k),
    }
}

/// Pairing matrix between `first` at total degree d1 and `second` at d2.
fn pairing(a: &GradedAlgebra, first: &Space, d1: i64, second: &Space, d2: i64) -> Vec<Vec<Elem>> {
    let t = a.tower();
    let rows = first.level(d1).unwrap_or(&[]);
    let cols = second.level(d2).unwrap_or(&[]);
    let (p, q) = (first.p_of(d1), second.p_of(d2));
    rows.iter()
        .map(|&(g, x)| {
            let want = partner_gen(a, first, g);
            cols.iter()
                .map(|&(g2, y)| {
                    if g2 != want || p + q != a.top() {
                        return t.zero();
                    }
                    a.form().f(a, a.top(), &a.mul_basis(p, x, q, y))
                })
                .collect()
        })
        .collect()
}

/// rows[a][b] = sum_pos v_a[pos] * m[pos][b]
fn apply_left(a: &GradedAlgebra, vs: &[SparseVec], m: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let t = a.tower();
    vs.iter()
        .map(|v| {
            let mut row = vec![t.zero(); ncols];
            for (pos, c) in &v.entries {
                for (b, x) in m[*pos].iter().enumerate() {
                    if !x.is_zero() {
                        row[b] = t.add(&row[b], &t.mul(c, x));
                    }
                }
            }
            row
        })
        .collect()
}

fn transpose(m: Vec<Vec<Elem>>, ncols: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = (0..ncols).map(|_| Vec::with_capacity(m.len())).collect();
    for row in m {
        for (j, x) in row.into_iter().enumerate() {
            out[j].push(x);
        }
    }
    out
}

fn scaled(a: &GradedAlgebra, m: Vec<Vec<Elem>>, sign: i8) -> Vec<Vec<Elem>> {
    if sign > 0 {
        return m;
    }
    let t = a.tower();
    m.into_iter().map(|r| r.iter().map(|x| t.neg(x)).collect()).collect()
}

/// Sign of mu'_i against the adjoint of mu'_{12-i}.
pub fn self_dual_sign(i: usize) -> i8 {
    if i % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Checks <mu'_i u, v> = sign <u, mu'_{12-i} v> for u in H_i, v in H_{12-i}.
fn check_self_dual(a: &GradedAlgebra, c: &GradedComplex, i: usize) -> IdentityCheck {
    let h3 = 3 * a.graph().h as i64;
    let j = 12 - i;
    let sign = self_dual_sign(i);
    let (mi, mj) = (c.maps[i].as_ref().expect("map built"), c.maps[j].as_ref().expect("map built"));
    let degrees: Vec<i64> = c.spaces[i].degrees().collect();
    let bad: Vec<i64> = degrees
        .par_iter()
        .filter_map(|&d| {
            let e = h3 - d;
            let nu = c.spaces[i].dim_at(d);
            let nv = c.spaces[j].dim_at(e);
            if nu == 0 || nv == 0 {
                return None;
            }
            // <mu'_i u_a, v_b>
            let p = pairing(a, &c.spaces[i - 1], d, &c.spaces[j], e);
            let lhs = apply_left(a, mi.at(d), &p, nv);
            // <u_a, mu'_j v_b>
            let q = pairing(a, &c.spaces[i], d, &c.spaces[j - 1], e);
            let qt = transpose(q, c.spaces[j - 1].dim_at(e));
            let rhs = transpose(apply_left(a, mj.at(e), &qt, nu), nu);
            (lhs != scaled(a, rhs, sign)).then_some(d)
        })
        .collect();
    IdentityCheck {
        kind: "self-dual".into(),
        index: i,
        partner: j,
        sign,
        degrees: degrees.len(),
        failed_at: bad.into_iter().min(),
    }
}

/// (mu'_12)* = mu'_12 o beta: <mu'_12 u, w> = <u, mu'_12 beta(w)> on the
/// degree-0 part of H_12 (the only part mu'_12 does not kill).
fn check_beta(a: &GradedAlgebra, c: &GradedComplex) -> IdentityCheck {
    let t = a.tower();
    let (s12, s11, s0) = (&c.spaces[12], &c.spaces[11], &c.spaces[0]);
    let m = c.maps[12].as_ref().expect("map built");
    let d = s12.offset;
    let n = s12.dim_at(d);
    let basis = s12.level(d).unwrap_or(&[]);
    let cols = m.at(d);
    // images of beta(w_b), expressed through the columns of mu'_12
    let beta_images: Vec<SparseVec> = basis
        .iter()
        .map(|&(_, y)| {
            let by = a.beta_basis(1, 0, y);
            let mut acc = SparseVec::new();
            for (z, cz) in &by.entries {
                let pos = s12.position(0, a.piece(0).src(*z), *z).expect("beta keeps degree 0");
                acc = acc.axpy(t, cz, &cols[pos]);
            }
            acc
        })
        .collect();
    let e11 = s11.offset + a.top() as i64;
    let p = pairing(a, s11, e11, s0, 0);
    let lhs = apply_left(a, cols, &p, n);
    let q = pairing(a, s0, 0, s11, e11);
    let qt = transpose(q, s11.dim_at(e11));
    let rhs = transpose(apply_left(a, &beta_images, &qt, n), n);
    IdentityCheck {
        kind: "beta".into(),
        index: 12,
        partner: 12,
        sign: 1,
        degrees: 1,
        failed_at: (lhs != rhs).then_some(d),
    }
}

/// mu*_{n+1} (leaving cochain space n) equals sign * mu'_j, j = 15 - n mod 12,
/// with the bases of C^n and H_j identified slot-for-slot. For mu*_4 the
/// identification needs beta^{-1} on the source: written out with the
/// dual-basis swap, mu'_12(x) = sum w_j* beta(x) beta(w_j) = mu*_4(beta(x)).
fn check_cohomology(a: &GradedAlgebra, hom: &GradedComplex, coh: &GradedComplex, n: usize) -> IdentityCheck {
    let j = match (15 - n % 12) % 12 {
        0 => 12,
        j => j,
    };
    let sign: i8 = if (n + 1) % 2 == 1 { -1 } else { 1 };
    let twist = if n % 12 == 3 { -1 } else { 0 };
    let (sc, sh) = (&coh.spaces[n], &hom.spaces[j]);
    let (mc, mh) = (coh.maps[n].as_ref().expect("map built"), hom.maps[j].as_ref().expect("map built"));
    let t = &**hom.tower();
    let factor = t.from_int(sign as i64);
    let mut failed = None;
    let mut degrees = 0;
    for dc in sc.degrees() {
        let p = sc.p_of(dc);
        let dh = sh.offset + p as i64;
        degrees += 1;
        let (x, y) = (mc.at(dc), mh.at(dh));
        let basis = sc.level(dc).unwrap_or(&[]);
        let mut same = x.len() == y.len() && basis == sh.level(dh).unwrap_or(&[]);
        for (u, &(g, xi)) in x.iter().zip(basis) {
            if !same {
                break;
            }
            let expected = if twist == 0 {
                y[sh.position(p, g, xi).expect("same basis")].scale(t, &factor)
            } else {
                let mut acc = SparseVec::new();
                for (z, cz) in &a.beta_basis(twist, p, xi).entries {
                    let pos = sh.position(p, a.piece(p).src(*z), *z).expect("vertex slot basis");
                    acc = acc.axpy(t, &t.mul(cz, &factor), &y[pos]);
                }
                acc
            };
            same = *u == expected;
        }
        if !same {
            failed = Some(dc);
            break;
        }
    }
    IdentityCheck { kind: "cohomology".into(), index: n + 1, partner: j, sign, degrees, failed_at: failed }
}

/// dim HH_i,d = dim HH_{11-i},{3h-d} for i = 1..10, and HH_11 against HH_12
/// reflected at 6h; only pairs with both indices inside the table count.
pub fn dimension_symmetry(hh: &[GradedDims], h: u32) -> Vec<(usize, i64)> {
    let h = h as i64;
    let mut bad = Vec::new();
    let mut check = |i: usize, j: usize, s: i64| {
        if j >= hh.len() {
            return;
        }
        let reflected = hh[j].dual_shift(s);
        for d in hh[i].terms().map(|(d, _)| d).chain(reflected.terms().map(|(d, _)| d)) {
            if hh[i].get(d) != reflected.get(d) && !bad.contains(&(i, d)) {
                bad.push((i, d));
            }
        }
    };
    for i in 1..=10.min(hh.len().saturating_sub(1)) {
        check(i, 11 - i, 3 * h);
    }
    if hh.len() > 11 {
        check(11, 12, 6 * h);
    }
    bad.sort_unstable();
    bad
}

/// All duality identities. `hom` needs maps 1..=12; `coh`, when given,
/// needs maps 0..=11.
pub fn verify_duality(
    a: &GradedAlgebra,
    hom: &GradedComplex,
    coh: Option<&GradedComplex>,
) -> Result<DualityReport, HomologyError> {
    assert_eq!(hom.direction, Direction::Homology);
    let mut identities: Vec<IdentityCheck> = (1..=11).map(|i| check_self_dual(a, hom, i)).collect();
    identities.push(check_beta(a, hom));
    if let Some(coh) = coh {
        identities.extend((0..12).map(|n| check_cohomology(a, hom, coh, n)));
    }
    let table = hom.table()?;
    let symmetry_failures = dimension_symmetry(&table, a.graph().h);
    Ok(DualityReport { identities, symmetry_failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::cells::{builtin_potential, CellSource, SolveOptions};
    use crate::homology::{build_cohomology_complex, build_hh_complex};
    use crate::quiver::Family;

    fn algebra(f: Family) -> GradedAlgebra {
        let prep = builtin_potential(f, CellSource::Builtin, &SolveOptions::default()).unwrap();
        build_algebra(&prep.potential.relations()).unwrap()
    }

    #[test]
    fn identities_hold() {
        for f in [Family::A(4), Family::A(5), Family::E8Star] {
            let a = algebra(f);
            let hom = build_hh_complex(&a, 13).unwrap();
            let coh = build_cohomology_complex(&a, 13).unwrap();
            let r = verify_duality(&a, &hom, Some(&coh)).unwrap();
            for c in &r.identities {
                assert!(c.passed(), "{f}: {c:?}");
            }
            assert!(r.symmetry_failures.is_empty(), "{f}: {:?}", r.symmetry_failures);
        }
    }

    #[test]
    fn asymmetric_table_is_flagged() {
        let mut hh = vec![GradedDims::zero(); 12];
        hh[2] = GradedDims::monomial(1, 3);
        assert_eq!(dimension_symmetry(&hh, 4), vec![(2, 3), (9, 9)]);
    }
}
