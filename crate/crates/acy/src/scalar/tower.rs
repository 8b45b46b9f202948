//! Multiquadratic towers L = K(sqrt x_1, .., sqrt x_r) with radicands in K.
//!
//! An element is a vector of 2^r coordinates in K indexed by subsets S of
//! the generators, standing for sum_S a_S g_S with g_S = prod_{i in S} g_i.
//! Products follow g_S g_T = g_{S xor T} prod_{i in S and T} x_i.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::field::{FieldElem, NumberField};
use super::interval::Interval;
use super::ScalarError;

/// Precision cap for sign certification, in bits.
pub const MAX_SIGN_BITS: u32 = 1 << 14;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem(pub(crate) Vec<FieldElem>);

impl Elem {
    pub fn coords(&self) -> &[FieldElem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| if s == 0 { format!("{c:?}") } else { format!("{c:?}*g{s:b}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub struct Tower {
    field: Arc<NumberField>,
    radicands: Vec<FieldElem>,
    imaginary: Vec<bool>,
    prods: Vec<FieldElem>,
    /// Bit mask of imaginary generators.
    imag_mask: usize,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower").field("h", &self.field.h()).field("radicands", &self.radicands).finish()
    }
}

impl PartialEq for Tower {
    fn eq(&self, o: &Tower) -> bool {
        self.field.h() == o.field.h() && self.radicands == o.radicands
    }
}

impl Eq for Tower {}

impl Tower {
    pub fn base(field: Arc<NumberField>) -> Arc<Tower> {
        Self::with_radicands(field, Vec::new()).expect("base tower")
    }

    /// Build a tower from a radicand list. Signs are certified; independence
    /// of the radicands is the caller's responsibility (see `adjoin_sqrt`).
    pub fn with_radicands(field: Arc<NumberField>, radicands: Vec<FieldElem>) -> Result<Arc<Tower>, ScalarError> {
        let r = radicands.len();
        let mut imaginary = Vec::with_capacity(r);
        for x in &radicands {
            if x.is_zero() {
                return Err(ScalarError::NotPositive);
            }
            imaginary.push(base_sign(&field, x)? == Ordering::Less);
        }
        let mut prods = vec![field.one(); 1 << r];
        for mask in 1..(1usize << r) {
            let i = mask.trailing_zeros() as usize;
            prods[mask] = field.mul(&prods[mask & (mask - 1)], &radicands[i]);
        }
        let imag_mask = imaginary.iter().enumerate().filter(|(_, b)| **b).fold(0, |m, (i, _)| m | (1 << i));
        Ok(Arc::new(Tower { field, radicands, imaginary, prods, imag_mask }))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn radicands(&self) -> &[FieldElem] {
        &self.radicands
    }

    pub fn rank(&self) -> usize {
        self.radicands.len()
    }

    /// Degree of the tower over Q.
    pub fn degree(&self) -> usize {
        self.field.degree() << self.rank()
    }

    pub fn is_real(&self) -> bool {
        self.imag_mask == 0
    }

    fn width(&self) -> usize {
        1 << self.rank()
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![self.field.zero(); self.width()])
    }

    pub fn one(&self) -> Elem {
        self.from_base(self.field.one())
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_base(self.field.from_int(n))
    }

    pub fn from_rational(&self, q: &BigRational) -> Elem {
        self.from_base(self.field.from_rational(q))
    }

    pub fn from_base(&self, x: FieldElem) -> Elem {
        let mut e = self.zero();
        e.0[0] = x;
        e
    }

    /// Coordinates from a subset-indexed list of base elements.
    pub fn from_coords(&self, coords: Vec<FieldElem>) -> Result<Elem, ScalarError> {
        if coords.len() != self.width() {
            return Err(ScalarError::BadCoordinates { expected: self.width(), got: coords.len() });
        }
        Ok(Elem(coords))
    }

    pub fn qint(&self, n: i64) -> Elem {
        self.from_base(self.field.qint(n))
    }

    /// The generator sqrt(x_i).
    pub fn gen(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e.0[1 << i] = self.field.one();
        e
    }

    /// Base-field value, if the element has no radical part.
    pub fn base_part(&self, x: &Elem) -> Option<FieldElem> {
        if x.0[1..].iter().all(|c| c.is_zero()) {
            Some(x.0[0].clone())
        } else {
            None
        }
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        x.is_zero()
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        x.0[0].is_one() && x.0[1..].iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.iter().zip(&b.0).map(|(x, y)| self.field.add(x, y)).collect())
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.iter().zip(&b.0).map(|(x, y)| self.field.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(a.0.iter().map(|x| self.field.neg(x)).collect())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if self.rank() == 0 {
            return Elem(vec![self.field.mul(&a.0[0], &b.0[0])]);
        }
        let mut out = self.zero();
        for (s, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (t, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut p = self.field.mul(x, y);
                let common = s & t;
                if common != 0 {
                    p = self.field.mul(&p, &self.prods[common]);
                }
                out.0[s ^ t] = self.field.add(&out.0[s ^ t], &p);
            }
        }
        out
    }

    pub fn mul_base(&self, a: &Elem, k: &FieldElem) -> Elem {
        Elem(a.0.iter().map(|x| self.field.mul(x, k)).collect())
    }

    /// Flip the sign of generator i.
    fn flip(&self, a: &Elem, i: usize) -> Elem {
        Elem(
            a.0.iter()
                .enumerate()
                .map(|(s, x)| if s >> i & 1 == 1 { self.field.neg(x) } else { x.clone() })
                .collect(),
        )
    }

    /// Complex conjugation (identity on real towers).
    pub fn conj(&self, a: &Elem) -> Elem {
        if self.imag_mask == 0 {
            return a.clone();
        }
        Elem(
            a.0.iter()
                .enumerate()
                .map(|(s, x)| {
                    if (s & self.imag_mask).count_ones() % 2 == 1 {
                        self.field.neg(x)
                    } else {
                        x.clone()
                    }
                })
                .collect(),
        )
    }

    /// Inverse by successive conjugation: a * flip_1(a) * .. lands in K.
    pub fn inv(&self, a: &Elem) -> Result<Elem, ScalarError> {
        if a.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut num = self.one();
        let mut cur = a.clone();
        for i in 0..self.rank() {
            let c = self.flip(&cur, i);
            num = self.mul(&num, &c);
            cur = self.mul(&cur, &c);
        }
        let norm = self.base_part(&cur).expect("norm lies in the base field");
        if norm.is_zero() {
            return Err(ScalarError::ZeroDivisor);
        }
        let ni = self.field.inv(&norm)?;
        Ok(self.mul_base(&num, &ni))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem, ScalarError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Floating-point value (re, im) under the distinguished embedding.
    pub fn approx(&self, a: &Elem) -> (f64, f64) {
        let rad: Vec<f64> = self.radicands.iter().map(|x| self.field.approx(x).abs().sqrt()).collect();
        let (mut re, mut im) = (0.0, 0.0);
        for (s, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mut v = self.field.approx(x);
            for (i, r) in rad.iter().enumerate() {
                if s >> i & 1 == 1 {
                    v *= r;
                }
            }
            match (s & self.imag_mask).count_ones() % 4 {
                0 => re += v,
                1 => im += v,
                2 => re -= v,
                _ => im -= v,
            }
        }
        (re, im)
    }

    /// Certified enclosures (re, im) at roughly `bits` binary digits of c.
    pub fn enclose(&self, a: &Elem, bits: u32) -> (Interval, Interval) {
        let c = gen_interval(&self.field, bits);
        let rad: Vec<Interval> = self
            .radicands
            .iter()
            .zip(&self.imaginary)
            .map(|(x, neg)| {
                let v = eval_interval(&self.field, x, &c);
                let v = if *neg { v.neg() } else { v };
                // radicand sign is certified at construction, so the enclosure is nonnegative once tight
                let v = Interval { lo: v.lo.clone().max(BigRational::zero()), hi: v.hi };
                v.sqrt(bits).expect("nonnegative")
            })
            .collect();
        let (mut re, mut im) = (Interval::zero(), Interval::zero());
        for (s, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mut v = eval_interval(&self.field, x, &c);
            for (i, r) in rad.iter().enumerate() {
                if s >> i & 1 == 1 {
                    v = v.mul(r).round_out(bits + 8);
                }
            }
            match (s & self.imag_mask).count_ones() % 4 {
                0 => re = re.add(&v),
                1 => im = im.add(&v),
                2 => re = re.add(&v.neg()),
                _ => im = im.add(&v.neg()),
            }
        }
        (re, im)
    }

    /// Certified sign of a real element.
    pub fn sign(&self, a: &Elem) -> Result<Ordering, ScalarError> {
        if a.is_zero() {
            return Ok(Ordering::Equal);
        }
        if !self.conj(a).eq(a) {
            return Err(ScalarError::NotReal);
        }
        let mut bits = 32;
        while bits <= MAX_SIGN_BITS {
            let (re, _) = self.enclose(a, bits);
            if re.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if re.hi.is_negative() {
                return Ok(Ordering::Less);
            }
            bits *= 2;
        }
        Err(ScalarError::Undecided)
    }

    /// Enclosure of the real part of width at most 10^-digits.
    pub fn embed_real(&self, a: &Elem, digits: u32) -> Result<Interval, ScalarError> {
        let target = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits));
        let mut bits = (digits as f64 * 3.33) as u32 + 16;
        while bits <= MAX_SIGN_BITS {
            let (re, _) = self.enclose(a, bits);
            if re.width() <= target {
                return Ok(re);
            }
            bits *= 2;
        }
        Err(ScalarError::Undecided)
    }

    /// Square root of a base-field element inside this tower (Kummer test:
    /// x is a square in L iff x * x_S is a square in K for some subset S).
    pub fn sqrt_of_base(&self, x: &FieldElem) -> Result<Option<Elem>, ScalarError> {
        if x.is_zero() {
            return Ok(Some(self.zero()));
        }
        for s in 0..self.width() {
            let y = self.field.mul(x, &self.prods[s]);
            let Some(k) = self.field.sqrt(&y) else { continue };
            // sqrt(x) = k / g_S = k g_S / x_S
            let mut e = self.zero();
            e.0[s] = self.field.div(&k, &self.prods[s])?;
            debug_assert_eq!(self.mul(&e, &e), self.from_base(x.clone()));
            return Ok(Some(self.normalize_root(e)?));
        }
        Ok(None)
    }

    /// Choose the root with positive real part (or positive imaginary part
    /// when purely imaginary).
    fn normalize_root(&self, e: Elem) -> Result<Elem, ScalarError> {
        let re = self.mul(&self.add(&e, &self.conj(&e)), &self.from_rational(&half()));
        let s = if !re.is_zero() {
            self.sign(&re)?
        } else {
            // purely imaginary: decide by the imaginary part of e - conj(e)
            let d = self.sub(&e, &self.conj(&e));
            let mut bits = 32;
            loop {
                let (_, im) = self.enclose(&d, bits);
                if im.lo.is_positive() {
                    break Ordering::Greater;
                }
                if im.hi.is_negative() {
                    break Ordering::Less;
                }
                bits *= 2;
                if bits > MAX_SIGN_BITS {
                    return Err(ScalarError::Undecided);
                }
            }
        };
        Ok(if s == Ordering::Less { self.neg(&e) } else { e })
    }

    /// Adjoin sqrt(x) for x in the base field. Returns the (possibly unchanged)
    /// tower and the root. Negative radicands give imaginary generators.
    pub fn adjoin_sqrt_signed(self: &Arc<Self>, x: &Elem) -> Result<(Arc<Tower>, Elem), ScalarError> {
        let base = self.base_part(x).ok_or(ScalarError::NonBaseRadicand)?;
        if base.is_zero() {
            return Ok((self.clone(), self.zero()));
        }
        if let Some(root) = self.sqrt_of_base(&base)? {
            return Ok((self.clone(), root));
        }
        let mut rads = self.radicands.clone();
        rads.push(base);
        let t = Tower::with_radicands(self.field.clone(), rads)?;
        let g = t.gen(t.rank() - 1);
        Ok((t, g))
    }

    /// Adjoin sqrt(x) for a certified positive base-field element.
    pub fn adjoin_sqrt(self: &Arc<Self>, x: &Elem) -> Result<(Arc<Tower>, Elem), ScalarError> {
        if self.sign(x)? != Ordering::Greater {
            return Err(ScalarError::NotPositive);
        }
        self.adjoin_sqrt_signed(x)
    }

    /// True when `self`'s radicands are a prefix of `other`'s.
    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.field.h() == other.field.h()
            && self.rank() <= other.rank()
            && self.radicands[..] == other.radicands[..self.rank()]
    }

    /// Lift an element of a prefix tower into this tower.
    pub fn lift(&self, from: &Tower, x: &Elem) -> Result<Elem, ScalarError> {
        if !from.is_prefix_of(self) {
            return Err(ScalarError::TowerMismatch);
        }
        let mut e = self.zero();
        for (s, c) in x.0.iter().enumerate() {
            e.0[s] = c.clone();
        }
        Ok(e)
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Enclosure of c = 2cos(pi/h) of width 2^-bits, by bisection on the minimal polynomial.
pub fn gen_interval(field: &NumberField, bits: u32) -> Interval {
    let c0 = 2.0 * (std::f64::consts::PI / field.h() as f64).cos();
    let eval = |x: &BigRational| -> BigRational {
        field.modulus().iter().rev().fold(BigRational::zero(), |acc, k| acc * x + BigRational::from_integer(k.clone()))
    };
    let mut lo = BigRational::from_f64(c0 - 1e-9).unwrap();
    let mut hi = BigRational::from_f64(c0 + 1e-9).unwrap();
    let slo = eval(&lo).signum();
    assert!(slo != eval(&hi).signum() && !slo.is_zero(), "root bracket");
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let s = eval(&mid).signum();
        if s.is_zero() {
            return Interval::point(mid);
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval { lo, hi }
}

fn eval_interval(field: &NumberField, x: &FieldElem, c: &Interval) -> Interval {
    let mut acc = Interval::zero();
    for k in x.num().iter().rev() {
        acc = acc.mul(c).add(&Interval::point(BigRational::from_integer(k.clone())));
    }
    let _ = field;
    acc.scale(&BigRational::new(BigInt::one(), x.den().clone()))
}

/// Certified sign of a base-field element.
pub fn base_sign(field: &NumberField, x: &FieldElem) -> Result<Ordering, ScalarError> {
    if x.is_zero() {
        return Ok(Ordering::Equal);
    }
    let mut bits = 32;
    while bits <= MAX_SIGN_BITS {
        let v = eval_interval(field, x, &gen_interval(field, bits));
        if v.lo.is_positive() {
            return Ok(Ordering::Greater);
        }
        if v.hi.is_negative() {
            return Ok(Ordering::Less);
        }
        bits *= 2;
    }
    Err(ScalarError::Undecided)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(h: u32) -> Arc<Tower> {
        Tower::base(Arc::new(NumberField::new(h).unwrap()))
    }

    #[test]
    fn adjoin_and_square() {
        let t = tower(8);
        let q3 = t.qint(3);
        let (t2, g) = t.adjoin_sqrt(&q3).unwrap();
        assert_eq!(t2.rank(), 1);
        assert_eq!(t2.mul(&g, &g), t2.lift(&t, &q3).unwrap());
        // idempotent
        let (t3, g2) = t2.adjoin_sqrt(&t2.lift(&t, &q3).unwrap()).unwrap();
        assert_eq!(t3.rank(), 1);
        assert_eq!(g2, g);
    }

    #[test]
    fn fourth_root_of_two() {
        let t = tower(4);
        let (t2, g) = t.adjoin_sqrt(&t.qint(2)).unwrap();
        let g4 = t2.pow(&g, 4);
        assert_eq!(g4, t2.from_int(2));
        let (re, _) = t2.approx(&g);
        assert!((re - 2f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn square_already_present() {
        let t = tower(6);
        let (t2, r) = t.adjoin_sqrt(&t.from_int(3)).unwrap();
        assert_eq!(t2.rank(), 0);
        assert!((t2.approx(&r).0 - 3f64.sqrt()).abs() < 1e-12);
        let (t3, one) = t.adjoin_sqrt(&t.one()).unwrap();
        assert_eq!(t3.rank(), 0);
        assert!(t3.is_one(&one));
    }

    #[test]
    fn inverse_in_tower() {
        let t = tower(7);
        let (t, _) = t.adjoin_sqrt(&t.qint(2)).unwrap();
        let (t, _) = t.adjoin_sqrt(&t.qint(3)).unwrap();
        assert_eq!(t.rank(), 2);
        let x = t.add(&t.add(&t.gen(0), &t.gen(1)), &t.from_int(1));
        let xi = t.inv(&x).unwrap();
        assert!(t.is_one(&t.mul(&x, &xi)));
    }

    #[test]
    fn imaginary_generator() {
        let t = tower(9);
        let (t, w) = t.adjoin_sqrt_signed(&t.from_int(-3)).unwrap();
        assert!(!t.is_real());
        assert_eq!(t.mul(&w, &w), t.from_int(-3));
        assert_eq!(t.conj(&w), t.neg(&w));
        let (re, im) = t.approx(&w);
        assert!(re.abs() < 1e-12 && (im - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn signs_and_enclosures() {
        let t = tower(12);
        let q2 = t.qint(2);
        let iv = t.embed_real(&q2, 20).unwrap();
        let x = 2.0 * (std::f64::consts::PI / 12.0).cos();
        assert!((iv.midpoint_f64() - x).abs() < 1e-15);
        assert_eq!(t.sign(&t.sub(&q2, &t.from_int(2))).unwrap(), Ordering::Less);
        let z = t.zero();
        assert!(t.embed_real(&z, 5).unwrap().contains_zero());
    }
}
