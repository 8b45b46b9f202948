//! Hilbert series, determinants of the Hilbert matrix and the Euler
//! characteristic of reduced cyclic homology.

mod graded;
mod poly;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::quiver::{mat_mul, transpose, Graph};

pub use graded::GradedDims;
pub use poly::{Poly, RatFunc};

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("the symmetry matrix P does not commute with the adjacency matrix")]
    NotCommuting,
    #[error("Euler coefficient a_{0} is not an integer")]
    NonIntegral(usize),
}

/// Coefficient matrices H^0..H^n of (1 - P t^h) / (1 - D t + D^T t^2 - t^3),
/// H^k[i][j] counting degree-k paths from i to j modulo relations.
pub fn hilbert_closed_form(g: &Graph, n: usize) -> Result<Vec<Vec<Vec<i64>>>, SeriesError> {
    let d = g.adjacency();
    let dt = transpose(&d);
    let p = g.nu_matrix();
    if mat_mul(&p, &d) != mat_mul(&d, &p) || mat_mul(&p, &dt) != mat_mul(&dt, &p) {
        return Err(SeriesError::NotCommuting);
    }
    let m = g.num_vertices();
    let h = g.h as usize;
    let ident: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    let mut out: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut cur = if k == 0 { ident.clone() } else { mat_mul(&d, &out[k - 1]) };
        if k >= 2 {
            let t = mat_mul(&dt, &out[k - 2]);
            sub_assign(&mut cur, &t);
        }
        if k >= 3 {
            let t = out[k - 3].clone();
            add_assign(&mut cur, &t);
        }
        if k == h {
            sub_assign(&mut cur, &p);
        }
        out.push(cur);
    }
    Ok(out)
}

fn add_assign(a: &mut [Vec<i64>], b: &[Vec<i64>]) {
    for (r, s) in a.iter_mut().zip(b) {
        for (x, y) in r.iter_mut().zip(s) {
            *x += y;
        }
    }
}

fn sub_assign(a: &mut [Vec<i64>], b: &[Vec<i64>]) {
    for (r, s) in a.iter_mut().zip(b) {
        for (x, y) in r.iter_mut().zip(s) {
            *x -= y;
        }
    }
}

/// Total dimension per degree of the closed form.
pub fn hilbert_totals(g: &Graph, n: usize) -> Result<Vec<i64>, SeriesError> {
    Ok(hilbert_closed_form(g, n)?.iter().map(|m| m.iter().flatten().sum()).collect())
}

/// Determinant of a polynomial matrix by fraction-free (Bareiss) elimination.
pub fn det_poly_matrix(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Poly::zero();
            };
            a.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// det(1 - D t + D^T t^2 - t^3).
pub fn denominator_det(g: &Graph) -> Poly {
    let d = g.adjacency();
    let n = g.num_vertices();
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = (i == j) as i64;
                    Poly::from_i64(&[diag, -d[i][j], d[j][i], -diag])
                })
                .collect()
        })
        .collect();
    det_poly_matrix(&m)
}

/// det H_A(t) = det(1 - P t^h) / det(1 - D t + D^T t^2 - t^3), in lowest terms.
pub fn det_hilbert(g: &Graph) -> RatFunc {
    let n = g.num_vertices();
    let h = g.h as usize;
    let p = g.nu_matrix();
    let num: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut c = vec![0i64; h + 1];
                    c[0] = (i == j) as i64;
                    c[h] = -p[i][j];
                    Poly::from_i64(&c)
                })
                .collect()
        })
        .collect();
    RatFunc::new(det_poly_matrix(&num), denominator_det(g))
}

/// The determinant of the denominator for A^(2m+2)* (`odd = false`) or
/// A^(2m+1)* (`odd = true`) by the tridiagonal recursion.
pub fn astar_denominator(m: usize, odd: bool) -> Poly {
    assert!(m >= 1);
    let t1 = Poly::from_i64(&[1, -1, 1, -1]);
    let t2sq = Poly::from_i64(&[0, -1, 1]).pow(2);
    // dets[j] = D_j with D_0 = 1, D_1 = T_1, D_j = T_1 D_{j-1} - T_2^2 D_{j-2}
    let mut dets = vec![Poly::one(), t1.clone()];
    for j in 2..=m {
        let next = t1.mul(&dets[j - 1]).sub(&t2sq.mul(&dets[j - 2]));
        dets.push(next);
    }
    if !odd {
        return dets[m].clone();
    }
    if m == 1 {
        return Poly::one_minus_t(3);
    }
    // last diagonal entry carries the loop-free end: (1 - t^3)
    Poly::one_minus_t(3).mul(&dets[m - 1]).sub(&t2sq.mul(&dets[m - 2]))
}

/// Coefficients a_0..a_n of the reduced cyclic-homology Euler characteristic,
/// defined by prod_k (1 - t^k)^{-a_k} = prod_s det H_A(t^s).
///
/// With c_j the coefficients of t (det H)'/det H, matching logarithmic
/// derivatives gives sum_{k | N} k a_k = sum_{j | N} (N/j) c_j; Moebius
/// inversion recovers a_k.
pub fn euler_characteristic_hc(g: &Graph, n: usize) -> Result<Vec<i64>, SeriesError> {
    euler_from_det(&det_hilbert(g), n)
}

pub fn euler_from_det(det: &RatFunc, n: usize) -> Result<Vec<i64>, SeriesError> {
    // t D'/D = t (P'Q - PQ') / (PQ) for D = P/Q
    let (p, q) = (&det.num, &det.den);
    let dp = derivative_times_t(p);
    let dq = derivative_times_t(q);
    let num = dp.mul(q).sub(&p.mul(&dq));
    let den = p.mul(q);
    let c = num.series_div(&den, n);
    let gsum: Vec<BigInt> = (0..=n)
        .map(|nn| {
            if nn == 0 {
                return BigInt::zero();
            }
            (1..=nn).filter(|j| nn % j == 0).map(|j| BigInt::from(nn / j) * &c[j]).sum()
        })
        .collect();
    let mut a = vec![0i64; n + 1];
    for k in 1..=n {
        let s: BigInt = (1..=k).filter(|d| k % d == 0).map(|d| BigInt::from(moebius(k / d)) * &gsum[d]).sum();
        let kb = BigInt::from(k);
        if !(&s % &kb).is_zero() {
            return Err(SeriesError::NonIntegral(k));
        }
        a[k] = (s / kb).to_i64().expect("Euler coefficient fits in i64");
    }
    Ok(a)
}

fn derivative_times_t(p: &Poly) -> Poly {
    Poly::new(p.coeffs().iter().enumerate().map(|(i, c)| c * BigInt::from(i)).collect())
}

pub fn moebius(mut n: usize) -> i64 {
    let mut r = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            r = -r;
        }
        d += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Family;

    #[test]
    fn a4_hilbert_and_det() {
        let g = Family::A(4).build().unwrap();
        assert_eq!(hilbert_totals(&g, 8).unwrap(), vec![3, 3, 0, 0, 0, 0, 0, 0, 0]);
        let d = det_hilbert(&g);
        assert_eq!(d, RatFunc::from_factors(&[(6, 1), (3, -1)]));
    }

    #[test]
    fn low_coefficients() {
        let g = Family::E8Star.build().unwrap();
        let h = hilbert_closed_form(&g, 9).unwrap();
        assert_eq!(h[1], g.adjacency());
        for (i, row) in h[0].iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, (i == j) as i64);
            }
        }
    }

    #[test]
    fn euler_e8star() {
        let g = Family::E8Star.build().unwrap();
        let a = euler_characteristic_hc(&g, 32).unwrap();
        let expect = RatFunc::new(Poly::from_i64(&[0, 2, 1, 2, 0, 2, 1, 2, -2]), Poly::one_minus_t(8)).series(32);
        assert_eq!(a, expect.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>());
    }

    #[test]
    fn trivial_det_gives_zero_euler() {
        let a = euler_from_det(&RatFunc::new(Poly::one(), Poly::one()), 10).unwrap();
        assert!(a.iter().all(|&x| x == 0));
    }

    #[test]
    fn moebius_values() {
        assert_eq!([1, 2, 3, 4, 5, 6, 12, 30].map(moebius), [1, -1, -1, 0, -1, 1, 0, -1]);
    }
}

#[cfg(test)]
mod family_tests {
    use super::*;
    use crate::quiver::Family;

    fn families() -> Vec<Family> {
        let mut v = vec![Family::A(4), Family::A(5), Family::A(7), Family::E8, Family::E8Star];
        v.extend((5..=12).map(Family::AStar));
        v.extend([6, 9, 12, 15].map(Family::D));
        v.extend((5..=12).map(Family::DStar));
        v
    }

    #[test]
    fn top_degree_is_nu_and_series_terminates() {
        for f in families() {
            let g = f.build().unwrap();
            let h = g.h as usize;
            let hs = hilbert_closed_form(&g, 2 * h).unwrap();
            assert_eq!(hs[h - 3], g.nu_matrix(), "{f}");
            for (k, m) in hs.iter().enumerate().skip(h - 2) {
                assert!(m.iter().flatten().all(|&x| x == 0), "{f} degree {k}");
            }
            assert!(hs.iter().flatten().flatten().all(|&x| x >= 0), "{f}");
        }
    }

    #[test]
    fn determinants_match_product_forms() {
        let cases: Vec<(Family, RatFunc)> = vec![
            (Family::A(4), RatFunc::from_factors(&[(6, 1), (3, -1)])),
            (Family::E8Star, RatFunc::from_factors(&[(2, 1), (4, 1), (8, 2), (1, -2)])),
            (Family::E8, RatFunc::from_factors(&[(2, 1), (4, 1), (8, 2), (1, -2)]).substitute_power(3)),
        ];
        for (f, r) in cases {
            assert_eq!(det_hilbert(&f.build().unwrap()), r, "{f}");
        }
        for m in 2..=5i32 {
            let n = 2 * m as usize + 2;
            let r = RatFunc::from_factors(&[(2, 1), (n, m - 1), (1, -m)]);
            assert_eq!(det_hilbert(&Family::AStar(n as u32).build().unwrap()), r, "A{n}*");
            let n = 2 * m as usize + 1;
            let r = RatFunc::from_factors(&[(n, m - 1), (1, 1 - m)]);
            assert_eq!(det_hilbert(&Family::AStar(n as u32).build().unwrap()), r, "A{n}*");
        }
        for k in 1..=2i32 {
            let n = 6 * k as usize;
            let r = RatFunc::from_factors(&[(n, 2 * (3 * k * (k - 1) + 2)), (3 * k as usize, 1), (3, -3)]);
            assert_eq!(det_hilbert(&Family::D(n as u32).build().unwrap()), r, "D{n}");
            let r = RatFunc::from_factors(&[(6, 1), (n, 9 * k - 6), (3, 1 - 3 * k)]);
            assert_eq!(det_hilbert(&Family::DStar(n as u32).build().unwrap()), r, "D{n}*");
            let n = 6 * k as usize + 3;
            let r = RatFunc::from_factors(&[(n, 6 * k * k + 3), (3, -3)]);
            assert_eq!(det_hilbert(&Family::D(n as u32).build().unwrap()), r, "D{n}");
            let r = RatFunc::from_factors(&[(n, 9 * k), (3, -3 * k)]);
            assert_eq!(det_hilbert(&Family::DStar(n as u32).build().unwrap()), r, "D{n}*");
        }
    }

    #[test]
    fn astar_recursion_closed_forms() {
        for m in 1..=6usize {
            let even = Poly::one_minus_t(1).pow(m as u32).mul(&Poly::one_minus_t(2 * m + 2)).div_exact(&Poly::one_minus_t(2));
            assert_eq!(astar_denominator(m, false), even, "m = {m}");
            let odd = Poly::one_minus_t(1).pow(m as u32 - 1).mul(&Poly::one_minus_t(2 * m + 1));
            assert_eq!(astar_denominator(m, true), odd, "m = {m}");
            if m >= 2 {
                let g = Family::AStar(2 * m as u32 + 2).build().unwrap();
                assert_eq!(denominator_det(&g), even);
                let g = Family::AStar(2 * m as u32 + 1).build().unwrap();
                assert_eq!(denominator_det(&g), odd);
            }
        }
    }

    #[test]
    fn euler_a4() {
        // HH_2 = t^3 and HH_8 its dual shifted by 12, period 12
        let a = euler_characteristic_hc(&Family::A(4).build().unwrap(), 40).unwrap();
        let expect = RatFunc::new(Poly::from_i64(&[0, 0, 0, 1, 0, 0, 0, 0, 0, 1]), Poly::one_minus_t(12)).series(40);
        assert_eq!(a, expect.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>());
    }

    #[test]
    fn euler_d_families() {
        for k in 1..=3i64 {
            let n = 6 * k as usize;
            let mut num = vec![0i64; n + 1];
            for j in 1..=2 * k - 1 {
                num[3 * j as usize] += 3;
            }
            num[3 * k as usize] -= 1;
            num[n] -= 6 * k * (k - 1) + 2;
            let expect = RatFunc::new(Poly::from_i64(&num), Poly::one_minus_t(n)).series(60);
            let a = euler_characteristic_hc(&Family::D(n as u32).build().unwrap(), 60).unwrap();
            assert_eq!(a, expect.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>(), "D{n}");

            let n = 6 * k as usize + 3;
            let mut num = vec![0i64; n + 1];
            for j in 1..=2 * k {
                num[3 * j as usize] += 3;
            }
            num[n] -= 6 * k * k;
            let expect = RatFunc::new(Poly::from_i64(&num), Poly::one_minus_t(n)).series(60);
            let a = euler_characteristic_hc(&Family::D(n as u32).build().unwrap(), 60).unwrap();
            assert_eq!(a, expect.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>(), "D{n}");
        }
    }
}
