//! Exact scalars: the field Q(2cos(pi/h)) and square-root towers over it.

mod field;
mod interval;
mod tower;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{cyclotomic, min_poly_2cos, FieldElem, NumberField};
pub use interval::Interval;
pub use tower::{base_sign, gen_interval, Elem, Tower, MAX_SIGN_BITS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("Coxeter number {0} is below 4")]
    BadCoxeter(u32),
    #[error("quantum integer index {n} out of range for h = {h}")]
    QintOutOfRange { n: i64, h: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor in tower: adjoined radicands are not independent")]
    ZeroDivisor,
    #[error("scalars live in different towers")]
    TowerMismatch,
    #[error("radicand is not positive")]
    NotPositive,
    #[error("radicand must lie in the base field")]
    NonBaseRadicand,
    #[error("element is not real")]
    NotReal,
    #[error("expected {expected} coordinates, got {got}")]
    BadCoordinates { expected: usize, got: usize },
    #[error("sign undecided at maximum precision")]
    Undecided,
    #[error("malformed scalar document: {0}")]
    Parse(String),
}

/// A tower element bundled with its tower.
#[derive(Clone)]
pub struct Scalar {
    tower: Arc<Tower>,
    elem: Elem,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elem)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        self.tower == o.tower && self.elem == o.elem
    }
}

/// [n] at q = exp(i pi/h), for 0 <= n < 2h.
pub fn quantum_integer(n: i64, h: u32) -> Result<Scalar, ScalarError> {
    if h < 4 {
        return Err(ScalarError::BadCoxeter(h));
    }
    if n < 0 || n >= 2 * h as i64 {
        return Err(ScalarError::QintOutOfRange { n, h });
    }
    let tower = Tower::base(Arc::new(NumberField::new(h)?));
    let elem = tower.qint(n);
    Ok(Scalar { tower, elem })
}

impl Scalar {
    pub fn new(tower: Arc<Tower>, elem: Elem) -> Self {
        Scalar { tower, elem }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn elem(&self) -> &Elem {
        &self.elem
    }

    pub fn from_int(tower: &Arc<Tower>, n: i64) -> Self {
        Scalar { tower: tower.clone(), elem: tower.from_int(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    fn same(&self, o: &Scalar) -> Result<(), ScalarError> {
        if Arc::ptr_eq(&self.tower, &o.tower) || self.tower == o.tower {
            Ok(())
        } else {
            Err(ScalarError::TowerMismatch)
        }
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.same(o)?;
        Ok(Scalar { tower: self.tower.clone(), elem: self.tower.add(&self.elem, &o.elem) })
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.same(o)?;
        Ok(Scalar { tower: self.tower.clone(), elem: self.tower.sub(&self.elem, &o.elem) })
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.same(o)?;
        Ok(Scalar { tower: self.tower.clone(), elem: self.tower.mul(&self.elem, &o.elem) })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.same(o)?;
        Ok(Scalar { tower: self.tower.clone(), elem: self.tower.div(&self.elem, &o.elem)? })
    }

    pub fn neg(&self) -> Scalar {
        Scalar { tower: self.tower.clone(), elem: self.tower.neg(&self.elem) }
    }

    pub fn sign(&self) -> Result<Ordering, ScalarError> {
        self.tower.sign(&self.elem)
    }

    pub fn embed_real(&self, digits: u32) -> Result<Interval, ScalarError> {
        self.tower.embed_real(&self.elem, digits)
    }

    pub fn approx(&self) -> f64 {
        self.tower.approx(&self.elem).0
    }

    /// Re-express in a tower extending this one.
    pub fn lift_to(&self, tower: &Arc<Tower>) -> Result<Scalar, ScalarError> {
        Ok(Scalar { tower: tower.clone(), elem: tower.lift(&self.tower, &self.elem)? })
    }
}

/// Adjoin the square root of a positive base-field scalar; returns the
/// (possibly unchanged) tower and the root.
pub fn adjoin_sqrt(x: &Scalar) -> Result<(Arc<Tower>, Scalar), ScalarError> {
    let (t, r) = x.tower.adjoin_sqrt(&x.elem)?;
    Ok((t.clone(), Scalar::new(t, r)))
}

/// Serialized tower: Coxeter number and radicand coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDoc {
    pub h: u32,
    #[serde(default)]
    pub radicands: Vec<Vec<String>>,
}

impl TowerDoc {
    pub fn from_tower(t: &Tower) -> Self {
        TowerDoc { h: t.field().h(), radicands: t.radicands().iter().map(field_to_strings).collect() }
    }

    pub fn build(&self) -> Result<Arc<Tower>, ScalarError> {
        let field = Arc::new(NumberField::new(self.h)?);
        let rads = self.radicands.iter().map(|r| field_from_strings(&field, r)).collect::<Result<Vec<_>, _>>()?;
        Tower::with_radicands(field, rads)
    }
}

pub fn field_to_strings(x: &FieldElem) -> Vec<String> {
    x.coords().iter().map(|q| q.to_string()).collect()
}

pub fn field_from_strings(field: &NumberField, s: &[String]) -> Result<FieldElem, ScalarError> {
    let coords = s
        .iter()
        .map(|t| t.trim().parse::<BigRational>().map_err(|e| ScalarError::Parse(format!("{t}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    field.from_coords(&coords)
}

/// Scalar as subset-indexed lists of base-field rational coordinates.
pub fn elem_to_strings(x: &Elem) -> Vec<Vec<String>> {
    x.coords().iter().map(field_to_strings).collect()
}

pub fn elem_from_strings(t: &Tower, s: &[Vec<String>]) -> Result<Elem, ScalarError> {
    let coords = s.iter().map(|c| field_from_strings(t.field(), c)).collect::<Result<Vec<_>, _>>()?;
    t.from_coords(coords)
}

/// Rational number from an integer pair.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_integer_examples() {
        let one = quantum_integer(1, 5).unwrap();
        assert!(one.tower().is_one(one.elem()));
        let q = quantum_integer(3, 4).unwrap();
        assert!(q.tower().is_one(q.elem()));
        let c = quantum_integer(2, 6).unwrap();
        let c2 = c.mul(&c).unwrap();
        assert_eq!(c2, Scalar::from_int(c.tower(), 3));
        assert!(quantum_integer(8, 4).is_err());
        assert!(quantum_integer(2, 3).is_err());
    }

    #[test]
    fn product_rule() {
        for h in 4..13 {
            let t = Tower::base(Arc::new(NumberField::new(h).unwrap()));
            for n in 1..h as i64 {
                let lhs = t.mul(&t.qint(2), &t.qint(n));
                let rhs = t.add(&t.qint(n - 1), &t.qint(n + 1));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn mismatch_is_error() {
        let a = quantum_integer(2, 5).unwrap();
        let b = quantum_integer(2, 7).unwrap();
        assert_eq!(a.add(&b), Err(ScalarError::TowerMismatch));
        assert_eq!(a.div(&Scalar::from_int(a.tower(), 0)), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn tower_doc_roundtrip() {
        let t = Tower::base(Arc::new(NumberField::new(8).unwrap()));
        let (t, _) = t.adjoin_sqrt(&t.qint(3)).unwrap();
        let doc = TowerDoc::from_tower(&t);
        let back = doc.build().unwrap();
        assert_eq!(*back, *t);
    }
}
