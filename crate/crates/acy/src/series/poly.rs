//! Integer polynomials in t and rational functions over them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![BigInt::one()])
    }

    pub fn constant(k: i64) -> Self {
        Poly::new(vec![BigInt::from(k)])
    }

    /// k t^d
    pub fn monomial(k: i64, d: usize) -> Self {
        let mut c = vec![BigInt::zero(); d + 1];
        c[d] = BigInt::from(k);
        Poly::new(c)
    }

    /// 1 - t^d
    pub fn one_minus_t(d: usize) -> Self {
        Poly::one().sub(&Poly::monomial(1, d))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        Poly::new(self.0.iter().map(|x| x * k).collect())
    }

    /// Exact division of every coefficient by k.
    pub fn div_scalar(&self, k: &BigInt) -> Poly {
        Poly::new(self.0.iter().map(|x| x / k).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// p(t^s)
    pub fn substitute_power(&self, s: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigInt::zero(); (self.0.len() - 1) * s + 1];
        for (i, x) in self.0.iter().enumerate() {
            c[i * s] = x.clone();
        }
        Poly::new(c)
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Division with remainder when the divisor's leading coefficient divides
    /// everything needed; returns None otherwise.
    pub fn div_rem(&self, d: &Poly) -> Option<(Poly, Poly)> {
        let dd = d.degree()?;
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            let (qc, rem) = c.div_rem(&lead);
            if !rem.is_zero() {
                return None;
            }
            for (j, y) in d.0.iter().enumerate() {
                r[k + j] -= &qc * y;
            }
            q[k] = qc;
        }
        Some((Poly::new(q), Poly::new(r)))
    }

    /// Exact quotient; panics when the division is not exact.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d).expect("integral division");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Pseudo-remainder lc(d)^k * self mod d.
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.0[dd].clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.0[rd].clone();
            let shifted = d.mul(&Poly::monomial(1, rd - dd)).scale(&c);
            r = r.scale(&lead).sub(&shifted);
        }
        r
    }

    fn primitive(&self) -> Poly {
        let c = self.content();
        if c.is_zero() {
            return Poly::zero();
        }
        let mut p = Poly::new(self.0.iter().map(|x| x / &c).collect());
        if p.0.last().is_some_and(|x| x.is_negative()) {
            p = p.neg();
        }
        p
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Power series of self / den up to t^n (den(0) must be +-1).
    pub fn series_div(&self, den: &Poly, n: usize) -> Vec<BigInt> {
        let d0 = den.coeff(0);
        assert!(d0.abs().is_one(), "denominator must be a unit at t = 0");
        let mut out = vec![BigInt::zero(); n + 1];
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(den.0.len().saturating_sub(1)) {
                acc -= &den.0[j] * &out[k - j];
            }
            out[k] = acc * &d0;
        }
        out
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|x| x.to_i64().expect("coefficient fits in i64")).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of integer polynomials.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 { (num.div_exact(&g), den.div_exact(&g)) } else { (num, den) };
        let c = num.content().gcd(&den.content());
        if !c.is_zero() && !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        // positive value at t = 0 in the denominator when possible
        let lead = den.coeffs().iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(BigInt::one);
        if lead.is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatFunc { num, den }
    }

    /// Product of factors (1 - t^d)^e given as (d, e) with e of either sign.
    pub fn from_factors(factors: &[(usize, i32)]) -> Self {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for &(d, e) in factors {
            let f = Poly::one_minus_t(d).pow(e.unsigned_abs());
            if e >= 0 {
                num = num.mul(&f);
            } else {
                den = den.mul(&f);
            }
        }
        RatFunc::new(num, den)
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn substitute_power(&self, s: usize) -> RatFunc {
        RatFunc::new(self.num.substitute_power(s), self.den.substitute_power(s))
    }

    pub fn series(&self, n: usize) -> Vec<BigInt> {
        self.num.series_div(&self.den, n)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_reduction() {
        // (1-t^6)/(1-t^3) = 1 + t^3
        let r = RatFunc::new(Poly::one_minus_t(6), Poly::one_minus_t(3));
        assert_eq!(r.den, Poly::one());
        assert_eq!(r.num, Poly::from_i64(&[1, 0, 0, 1]));
    }

    #[test]
    fn series_of_geometric() {
        let s = Poly::one().series_div(&Poly::one_minus_t(1), 4);
        assert!(s.iter().all(|x| x.is_one()));
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_i64(&[1, -2, 0, 3]).to_string(), "1 - 2t + 3t^3");
    }
}
