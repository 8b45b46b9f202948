use std::sync::{Arc, OnceLock};

use acy::algebra::{build_algebra, GradedAlgebra};
use acy::cells::{builtin_potential, family_cells, gauge_transform, CellSource, CellSystem, Gauge, SolveOptions};
use acy::linalg::SparseVec;
use acy::quiver::Family;
use acy::scalar::{Elem, NumberField, Tower};
use acy::series::{GradedDims, RatFunc};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn algebra(f: Family) -> GradedAlgebra {
    let p = builtin_potential(f, CellSource::Builtin, &SolveOptions::default()).unwrap();
    build_algebra(&p.potential.relations()).unwrap()
}

fn a5() -> &'static GradedAlgebra {
    static A: OnceLock<GradedAlgebra> = OnceLock::new();
    A.get_or_init(|| algebra(Family::A(5)))
}

fn d6star() -> &'static GradedAlgebra {
    static A: OnceLock<GradedAlgebra> = OnceLock::new();
    A.get_or_init(|| algebra(Family::DStar(6)))
}

fn a4_cells() -> &'static CellSystem {
    static C: OnceLock<CellSystem> = OnceLock::new();
    C.get_or_init(|| family_cells(Family::A(4), &SolveOptions::default()).unwrap())
}

/// Q(2cos(pi/9)) with sqrt(-3) adjoined.
fn tower() -> &'static Arc<Tower> {
    static T: OnceLock<Arc<Tower>> = OnceLock::new();
    T.get_or_init(|| {
        let f = Arc::new(NumberField::new(9).unwrap());
        let r = f.from_int(-3);
        Tower::with_radicands(f, vec![r]).unwrap()
    })
}

fn elem(c: &[(i64, i64)]) -> Elem {
    let t = tower();
    let f = t.field();
    let d = f.degree();
    let coords = c
        .chunks(d)
        .map(|ch| {
            let q: Vec<BigRational> = ch.iter().map(|&(n, m)| BigRational::new(BigInt::from(n), BigInt::from(m))).collect();
            f.from_coords(&q).unwrap()
        })
        .collect();
    t.from_coords(coords).unwrap()
}

fn elem_strategy() -> impl Strategy<Value = Elem> {
    let n = tower().degree();
    prop::collection::vec((-4i64..=4, 1i64..=3), n).prop_map(|c| elem(&c))
}

fn dims_strategy() -> impl Strategy<Value = GradedDims> {
    prop::collection::vec((-20i64..40, 1i64..5), 0..6).prop_map(GradedDims::from_terms)
}

fn factors_strategy() -> impl Strategy<Value = Vec<(usize, i32)>> {
    prop::collection::vec((1usize..8, -2i32..=2), 0..4)
}

/// A random basis element of A_p, as (p, i).
fn basis_element(a: &'static GradedAlgebra, max_degree: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..=max_degree.min(a.top())).prop_filter("empty degree", move |&p| a.dim(p) > 0).prop_flat_map(move |p| (Just(p), 0..a.dim(p)))
}

fn triple(a: &'static GradedAlgebra) -> impl Strategy<Value = [(usize, usize); 3]> {
    let third = a.top() / 3;
    let rest = a.top() - 2 * third;
    (basis_element(a, third), basis_element(a, third), basis_element(a, rest)).prop_map(|(x, y, z)| [x, y, z])
}

fn associates(a: &GradedAlgebra, [(p, i), (q, j), (r, k)]: [(usize, usize); 3]) -> bool {
    let t = a.tower();
    let z = SparseVec::unit(t, k);
    let left = a.mul(p + q, &a.mul_basis(p, i, q, j), r, &z);
    let right = a.mul(p, &SparseVec::unit(t, i), q + r, &a.mul_basis(q, j, r, k));
    left == right
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dual_shift_is_an_involution(m in dims_strategy(), s in -30i64..30) {
        prop_assert_eq!(m.dual_shift(s).dual_shift(s), m.clone());
        prop_assert_eq!(m.shift(s).shift(-s), m);
    }

    #[test]
    fn graded_dims_form_a_group(a in dims_strategy(), b in dims_strategy()) {
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn factor_products_multiply(f in factors_strategy(), g in factors_strategy(), s in 1usize..4) {
        let joined: Vec<_> = f.iter().chain(&g).copied().collect();
        let prod = RatFunc::from_factors(&f).mul(&RatFunc::from_factors(&g));
        prop_assert_eq!(RatFunc::from_factors(&joined), prod.clone());
        let pulled: Vec<_> = joined.iter().map(|&(d, e)| (d * s, e)).collect();
        prop_assert_eq!(RatFunc::from_factors(&pulled), prod.substitute_power(s));
    }

    #[test]
    fn tower_is_a_field(a in elem_strategy(), b in elem_strategy(), c in elem_strategy()) {
        let t = tower();
        prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
        prop_assert_eq!(t.mul(&a, &t.add(&b, &c)), t.add(&t.mul(&a, &b), &t.mul(&a, &c)));
        prop_assert_eq!(t.conj(&t.mul(&a, &b)), t.mul(&t.conj(&a), &t.conj(&b)));
        prop_assert_eq!(t.conj(&t.conj(&a)), a.clone());
        if !t.is_zero(&a) {
            prop_assert!(t.is_one(&t.mul(&a, &t.inv(&a).unwrap())));
        }
    }

    #[test]
    fn multiplication_is_associative_with_rotation(x in triple(a5())) {
        prop_assert!(associates(a5(), x));
    }

    #[test]
    fn multiplication_is_associative(x in triple(d6star())) {
        prop_assert!(associates(d6star(), x));
    }

    #[test]
    fn beta_is_multiplicative(x in basis_element(a5(), 2), y in basis_element(a5(), 2), k in 1i64..3) {
        let a = a5();
        let t = a.tower();
        let ((p, i), (q, j)) = (x, y);
        let lhs = a.beta(k, p + q, &a.mul_basis(p, i, q, j));
        let rhs = a.mul(p, &a.beta_basis(k, p, i), q, &a.beta_basis(k, q, j));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.beta(3 - k, p, &a.beta_basis(k, p, i)), SparseVec::unit(t, i));
    }

    #[test]
    fn sign_gauges_keep_cells_certified(flips in prop::collection::vec(any::<bool>(), 1..64)) {
        let cells = a4_cells();
        let t = &*cells.tower;
        let mut u = Gauge::identity(&cells.graph, t);
        for (e, flip) in flips.iter().enumerate().take(cells.graph.num_edges()) {
            if *flip {
                u.entries[e] = vec![(e, t.from_int(-1))];
            }
        }
        let moved = gauge_transform(cells, &u).unwrap();
        prop_assert!(moved.certify().is_ok());
    }
}
