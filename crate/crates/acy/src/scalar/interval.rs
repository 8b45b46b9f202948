//! Closed rational intervals for certified real enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, q: &BigRational) -> Interval {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Enclosure of sqrt over a nonnegative interval, at `bits` binary digits.
    pub fn sqrt(&self, bits: u32) -> Option<Interval> {
        if self.lo.is_negative() {
            return None;
        }
        let scale = BigInt::one() << (2 * bits as usize);
        let lo_n = (&self.lo * BigRational::from_integer(scale.clone())).floor().to_integer();
        let hi_n = (&self.hi * BigRational::from_integer(scale)).ceil().to_integer();
        let den = BigInt::one() << bits as usize;
        let lo = BigRational::new(lo_n.sqrt(), den.clone());
        let hi = BigRational::new(hi_n.sqrt() + 1, den);
        Some(Interval { lo, hi })
    }

    /// Round outward to dyadic endpoints to stop numerator growth.
    pub fn round_out(&self, bits: u32) -> Interval {
        let scale = BigRational::from_integer(BigInt::one() << bits as usize);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Interval { lo, hi }
    }
}
