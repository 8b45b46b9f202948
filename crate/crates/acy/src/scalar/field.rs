//! The real cyclotomic field K = Q(c), c = 2cos(pi/h).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScalarError;

/// Integer polynomial helpers, coefficients low to high.
fn poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic divisor.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        q[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    q
}

/// Cyclotomic polynomial Phi_n.
pub fn cyclotomic(n: u32) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut p = num;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic(d));
        }
    }
    p
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// Minimal polynomial of 2cos(pi/h), monic, low to high.
///
/// Phi_{2h} is palindromic of degree 2m, so z^{-m} Phi_{2h}(z) is a
/// polynomial in x = z + 1/z via z^k + z^{-k} = V_k(x).
pub fn min_poly_2cos(h: u32) -> Vec<BigInt> {
    let phi = cyclotomic(2 * h);
    let m = (phi.len() - 1) / 2;
    // V_0 = 2, V_1 = x, V_{k+1} = x V_k - V_{k-1}
    let mut v: Vec<Vec<BigInt>> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    for k in 1..m {
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, c) in v[k].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in v[k - 1].iter().enumerate() {
            next[i] -= c;
        }
        v.push(next);
    }
    let mut out = vec![BigInt::zero(); m + 1];
    out[0] += &phi[m];
    for k in 1..=m {
        for (i, c) in v[k].iter().enumerate() {
            out[i] += &phi[m + k] * c;
        }
    }
    poly_trim(&mut out);
    out
}

/// Element of K: `num / den` in the power basis 1, c, .., c^{d-1}; `den > 0`, reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElem {
    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Rational coordinates in the power basis.
    pub fn coords(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    fn normalize(mut self) -> Self {
        if self.is_zero() {
            self.den = BigInt::one();
            return self;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        if self.den.is_negative() {
            for c in &mut self.num {
                *c = -&*c;
            }
            self.den = -&self.den;
        }
        self
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*c"),
                _ => format!("{c}*c^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        if self.den.is_one() {
            write!(f, "({})", parts.join(" + "))
        } else {
            write!(f, "({})/{}", parts.join(" + "), self.den)
        }
    }
}

/// The field Q(2cos(pi/h)) with its arithmetic.
#[derive(Clone, Debug)]
pub struct NumberField {
    h: u32,
    modulus: Vec<BigInt>,
    /// c^{d+k} reduced, for k = 0..d-2.
    reduce_table: Vec<Vec<BigInt>>,
    /// All real conjugates of c; index 0 is 2cos(pi/h).
    conjugates: Vec<f64>,
}

impl NumberField {
    pub fn new(h: u32) -> Result<Self, ScalarError> {
        if h < 4 {
            return Err(ScalarError::BadCoxeter(h));
        }
        let modulus = min_poly_2cos(h);
        let d = modulus.len() - 1;
        debug_assert_eq!(d as u32, euler_phi(2 * h) / 2);
        let mut reduce_table = Vec::new();
        // c^d = -sum modulus[i] c^i
        let mut cur: Vec<BigInt> = modulus[..d].iter().map(|c| -c).collect();
        for _ in 0..d.saturating_sub(1) {
            reduce_table.push(cur.clone());
            // multiply by c
            let top = cur[d - 1].clone();
            let mut next = vec![BigInt::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] -= &top * &modulus[i];
            }
            cur = next;
        }
        let conjugates = (1..h)
            .filter(|k| k % 2 == 1 && k.gcd(&(2 * h)) == 1)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / h as f64).cos())
            .collect::<Vec<_>>();
        debug_assert_eq!(conjugates.len(), d);
        Ok(NumberField { h, modulus, reduce_table, conjugates })
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn conjugates(&self) -> &[f64] {
        &self.conjugates
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { num: vec![BigInt::zero(); self.degree()], den: BigInt::one() }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> FieldElem {
        let mut e = self.zero();
        e.num[0] = n;
        e
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElem {
        let mut e = self.zero();
        e.num[0] = q.numer().clone();
        e.den = q.denom().clone();
        e.normalize()
    }

    /// The generator c = 2cos(pi/h) = [2].
    pub fn gen(&self) -> FieldElem {
        let mut e = self.zero();
        if self.degree() == 1 {
            // c is rational only for h < 4, excluded in `new`
            unreachable!();
        }
        e.num[1] = BigInt::one();
        e
    }

    /// Build from rational power-basis coordinates.
    pub fn from_coords(&self, coords: &[BigRational]) -> Result<FieldElem, ScalarError> {
        if coords.len() != self.degree() {
            return Err(ScalarError::BadCoordinates { expected: self.degree(), got: coords.len() });
        }
        let den = coords.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = coords.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        Ok(FieldElem { num, den }.normalize())
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        if b.is_zero() {
            return a.clone();
        }
        if a.is_zero() {
            return b.clone();
        }
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return FieldElem { num, den: a.den.clone() }.normalize();
        }
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        FieldElem { num, den: &a.den * &b.den }.normalize()
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem { num: a.num.iter().map(|x| -x).collect(), den: a.den.clone() }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let d = self.degree();
        let prod = poly_mul(&a.num, &b.num);
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for (k, c) in prod[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in self.reduce_table[k].iter().enumerate() {
                num[i] += c * r;
            }
        }
        FieldElem { num, den: &a.den * &b.den }.normalize()
    }

    pub fn scale_int(&self, a: &FieldElem, k: i64) -> FieldElem {
        let k = BigInt::from(k);
        FieldElem { num: a.num.iter().map(|x| x * &k).collect(), den: a.den.clone() }.normalize()
    }

    pub fn pow(&self, a: &FieldElem, mut e: u32) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `a` in the power basis (columns = images of c^j).
    fn mul_matrix(&self, a: &FieldElem) -> Vec<Vec<BigRational>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = a.clone();
        let c = self.gen();
        for _ in 0..d {
            cols.push(cur.coords());
            cur = self.mul(&cur, &c);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, ScalarError> {
        if a.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(q) = a.as_rational() {
            return Ok(self.from_rational(&q.recip()));
        }
        // Solve M z = e_0 by Gaussian elimination over Q.
        let d = self.degree();
        let mut m = self.mul_matrix(a);
        let mut rhs: Vec<BigRational> = (0..d)
            .map(|i| if i == 0 { BigRational::one() } else { BigRational::zero() })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(ScalarError::DivisionByZero)?;
            m.swap(col, piv);
            rhs.swap(col, piv);
            let inv = m[col][col].recip();
            for j in col..d {
                m[col][j] = &m[col][j] * &inv;
            }
            rhs[col] = &rhs[col] * &inv;
            for r in 0..d {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for j in col..d {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
                let t = &f * &rhs[col];
                rhs[r] -= t;
            }
        }
        self.from_coords(&rhs)
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, ScalarError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Quantum integer [n] at q = exp(i pi/h), any integer n.
    pub fn qint(&self, n: i64) -> FieldElem {
        if n < 0 {
            return self.neg(&self.qint(-n));
        }
        let c = self.gen();
        let (mut prev, mut cur) = (self.zero(), self.one());
        if n == 0 {
            return prev;
        }
        for _ in 1..n {
            let next = self.sub(&self.mul(&c, &cur), &prev);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Value under the embedding c -> conjugates[k].
    pub fn eval_f64(&self, a: &FieldElem, k: usize) -> f64 {
        let x = self.conjugates[k];
        let den = a.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = 0.0;
        for c in a.num.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc / den
    }

    pub fn approx(&self, a: &FieldElem) -> f64 {
        self.eval_f64(a, 0)
    }

    /// Exact trace of multiplication by `a`.
    pub fn trace(&self, a: &FieldElem) -> BigRational {
        let m = self.mul_matrix(a);
        (0..self.degree()).fold(BigRational::zero(), |acc, i| acc + &m[i][i])
    }

    /// Discriminant of the power basis, |det Tr(c^{i+j})|.
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        let c = self.gen();
        let traces: Vec<BigRational> = (0..2 * d - 1).map(|k| self.trace(&self.pow(&c, k as u32))).collect();
        let mut m: Vec<Vec<BigRational>> = (0..d).map(|i| (0..d).map(|j| traces[i + j].clone()).collect()).collect();
        let mut det = BigRational::one();
        for col in 0..d {
            let Some(piv) = (col..d).find(|&r| !m[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if piv != col {
                m.swap(col, piv);
                det = -det;
            }
            det *= &m[col][col];
            for r in col + 1..d {
                let f = &m[r][col] / &m[col][col];
                for j in col..d {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
            }
        }
        det.to_integer().abs()
    }

    /// Square root inside K, if it exists. Found numerically over all
    /// real embeddings and confirmed exactly.
    pub fn sqrt(&self, x: &FieldElem) -> Option<FieldElem> {
        if x.is_zero() {
            return Some(self.zero());
        }
        let d = self.degree();
        // y = sqrt(x) ; z = den * y is an algebraic integer since z^2 = den * num.
        let scaled = FieldElem { num: x.num.iter().map(|c| c * &x.den).collect(), den: BigInt::one() };
        let vals: Vec<f64> = (0..d).map(|k| self.eval_f64(&scaled, k)).collect();
        if vals.iter().any(|v| *v < 0.0 && v.abs() > 1e-9) {
            return None;
        }
        let roots: Vec<f64> = vals.iter().map(|v| v.max(0.0).sqrt()).collect();
        let disc = self.discriminant();
        let disc_f = disc.to_f64()?;
        let vander = nalgebra::DMatrix::from_fn(d, d, |i, j| self.conjugates[i].powi(j as i32));
        let lu = vander.lu();
        for pattern in 0..(1u32 << (d - 1)) {
            let rhs = nalgebra::DVector::from_fn(d, |i, _| {
                if i > 0 && (pattern >> (i - 1)) & 1 == 1 {
                    -roots[i]
                } else {
                    roots[i]
                }
            });
            let Some(sol) = lu.solve(&rhs) else { continue };
            let coords: Option<Vec<BigRational>> = sol
                .iter()
                .map(|v| {
                    let r = (v * disc_f).round();
                    if !r.is_finite() || ((v * disc_f) - r).abs() > 1e-3 {
                        return None;
                    }
                    Some(BigRational::new(BigInt::from(r as i128), disc.clone()))
                })
                .collect();
            let Some(coords) = coords else { continue };
            let z = self.from_coords(&coords).ok()?;
            if self.mul(&z, &z) == scaled {
                // y = z / den, sign chosen positive at embedding 0
                let y = self.mul(&z, &self.from_rational(&BigRational::new(BigInt::one(), x.den.clone())));
                return Some(if self.approx(&y) < 0.0 { self.neg(&y) } else { y });
            }
        }
        None
    }

    pub fn elem_from_parts(&self, num: Vec<BigInt>, den: BigInt) -> Result<FieldElem, ScalarError> {
        if num.len() != self.degree() {
            return Err(ScalarError::BadCoordinates { expected: self.degree(), got: num.len() });
        }
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(FieldElem { num, den }.normalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_poly_degrees() {
        for (h, d) in [(4, 2), (5, 2), (6, 2), (7, 3), (8, 4), (9, 3), (10, 4), (12, 4)] {
            assert_eq!(NumberField::new(h).unwrap().degree(), d, "h={h}");
        }
    }

    #[test]
    fn min_poly_vanishes_numerically() {
        for h in 4..20 {
            let f = NumberField::new(h).unwrap();
            let x = 2.0 * (std::f64::consts::PI / h as f64).cos();
            let v: f64 = f.modulus().iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap());
            assert!(v.abs() < 1e-9, "h={h}: {v}");
        }
    }

    #[test]
    fn qint_values() {
        let f = NumberField::new(6).unwrap();
        let c = f.qint(2);
        assert_eq!(f.mul(&c, &c), f.from_int(3));
        assert_eq!(f.qint(3), f.from_int(2));
        let f4 = NumberField::new(4).unwrap();
        assert!(f4.qint(3).is_one());
        assert!(f4.qint(4).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = NumberField::new(9).unwrap();
        for n in 1..9 {
            let q = f.qint(n);
            let qi = f.inv(&q).unwrap();
            assert!(f.mul(&q, &qi).is_one());
        }
    }

    #[test]
    fn sqrt_in_field() {
        let f = NumberField::new(8).unwrap();
        // [2]^2 = 2 + sqrt2 style: check sqrt of a square
        let x = f.add(&f.qint(3), &f.from_int(5));
        let y2 = f.mul(&x, &x);
        let y = f.sqrt(&y2).unwrap();
        assert_eq!(f.mul(&y, &y), y2);
        assert!(f.sqrt(&f.from_int(2)).is_some()); // sqrt2 in Q(2cos(pi/8))
        assert!(f.sqrt(&f.from_int(3)).is_none());
    }
}
