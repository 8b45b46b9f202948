//! Closed-form homology tables: the shape of HH, HC and HH^* in terms of a
//! few graded spaces, the printed values of those spaces per family, and
//! their recovery from the Euler characteristic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::cyclic::index_offset;
use crate::quiver::Family;
use crate::series::GradedDims;

/// The graded spaces determining every table.
///
/// `Trivial` (nu = id, period 4, shift h): C, X and K, with K in degree 0.
/// `Rotating` (period 12, shift 3h): C, X_1..X_4 and K_1, K_2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Trivial { c: GradedDims, x: GradedDims, k: GradedDims },
    Rotating { c: GradedDims, x: [GradedDims; 4], k: [GradedDims; 2] },
}

fn z() -> GradedDims {
    GradedDims::zero()
}

fn sum(parts: &[GradedDims]) -> GradedDims {
    parts.iter().fold(z(), |acc, p| acc.add(p))
}

impl Structure {
    pub fn c(&self) -> &GradedDims {
        match self {
            Structure::Trivial { c, .. } | Structure::Rotating { c, .. } => c,
        }
    }

    /// Reduced HH_0..HH_11 (trivial: HH_0..HH_4) before periodic extension.
    fn hh_block(&self, h: i64) -> Vec<GradedDims> {
        match self {
            Structure::Trivial { c, x, k } => vec![
                c.clone(),
                c.add(x),
                c.dual_shift(h).add(&x.dual_shift(h)),
                c.dual_shift(h).add(&k.shift(h)),
                c.shift(h).add(&k.dual_shift(h)),
            ],
            Structure::Rotating { c, x, k } => {
                let [x1, x2, x3, x4] = x;
                let [k1, k2] = k;
                let s = 3 * h;
                vec![
                    c.clone(),
                    c.add(x1),
                    x2.add(x1),
                    x2.add(&k1.shift(h)),
                    x3.add(&k1.shift(h)),
                    x3.add(x4),
                    x3.dual_shift(s).add(&x4.dual_shift(s)),
                    x3.dual_shift(s).add(&k1.dual_shift(2 * h)),
                    x2.dual_shift(s).add(&k1.dual_shift(2 * h)),
                    x2.dual_shift(s).add(&x1.dual_shift(s)),
                    c.dual_shift(s).add(&x1.dual_shift(s)),
                    c.dual_shift(s).add(&k2.shift(s)),
                    c.shift(s).add(&k2.dual_shift(s)),
                ]
            }
        }
    }

    /// Reduced HC_0..HC_12 (trivial: HC_0..HC_4).
    fn hc_block(&self, h: i64) -> Vec<GradedDims> {
        match self {
            Structure::Trivial { c, x, k } => vec![c.clone(), x.clone(), c.dual_shift(h), k.shift(h), c.shift(h)],
            Structure::Rotating { c, x, k } => {
                let [x1, x2, x3, x4] = x;
                let [k1, k2] = k;
                let s = 3 * h;
                vec![
                    c.clone(),
                    x1.clone(),
                    x2.clone(),
                    k1.shift(h),
                    x3.clone(),
                    x4.clone(),
                    x3.dual_shift(s),
                    k1.dual_shift(2 * h),
                    x2.dual_shift(s),
                    x1.dual_shift(s),
                    c.dual_shift(s),
                    k2.shift(s),
                    c.shift(s),
                ]
            }
        }
    }

    fn period(&self, h: i64) -> (usize, i64) {
        match self {
            Structure::Trivial { .. } => (4, h),
            Structure::Rotating { .. } => (12, 3 * h),
        }
    }

    /// HH_0..HH_{n_max}, with S (one idempotent per vertex) in HH_0.
    pub fn hh(&self, h: u32, vertices: usize, n_max: usize) -> Vec<GradedDims> {
        let h = h as i64;
        extend(self.hh_block(h), self.period(h), vertices, n_max)
    }

    /// HC_0..HC_{n_max}, with S in HC_0.
    pub fn hc(&self, h: u32, vertices: usize, n_max: usize) -> Vec<GradedDims> {
        let h = h as i64;
        extend(self.hc_block(h), self.period(h), vertices, n_max)
    }

    /// HH^0..HH^{n_max} in the theorem layout, with `l` the fixed-vertex
    /// top elements.
    pub fn cohomology(&self, h: u32, l: &GradedDims, n_max: usize) -> Vec<GradedDims> {
        let h = h as i64;
        let block = match self {
            Structure::Trivial { c, x, k } => vec![
                c.dual_shift(h - 3).add(l),
                c.dual_shift(h - 3).add(&x.dual_shift(h - 3)),
                c.shift(-3).add(&x.shift(-3)),
                c.shift(-3).add(&k.dual_shift(-3)),
                c.dual_shift(-3).add(&k.shift(-3)),
            ],
            Structure::Rotating { c, x, k } => {
                let [x1, x2, x3, x4] = x;
                let [k1, k2] = k;
                let low = -3 * h - 3;
                vec![
                    x2.shift(-3).add(l),
                    x2.shift(-3).add(&x1.shift(-3)),
                    c.shift(-3).add(&x1.shift(-3)),
                    c.shift(-3).add(&k2.dual_shift(-3)),
                    c.dual_shift(-3).add(&k2.shift(-3)),
                    c.dual_shift(-3).add(&x1.dual_shift(-3)),
                    x2.dual_shift(-3).add(&x1.dual_shift(-3)),
                    x2.dual_shift(-3).add(&k1.dual_shift(-h - 3)),
                    x3.dual_shift(-3).add(&k1.dual_shift(-h - 3)),
                    x3.dual_shift(-3).add(&x4.dual_shift(-3)),
                    x3.shift(low).add(&x4.shift(low)),
                    x3.shift(low).add(&k1.shift(-2 * h - 3)),
                    x2.shift(low).add(&k1.shift(-2 * h - 3)),
                ]
            }
        };
        let (p, s) = self.period(h);
        (0..=n_max)
            .map(|i| if i < block.len() { block[i].clone() } else { block[(i - 1) % p + 1].shift(-s * ((i - 1) / p) as i64) })
            .collect()
    }
}

/// Index 0 stays as given (plus S); index i >= 1 repeats the block
/// 1..=period with the degree shift.
fn extend(block: Vec<GradedDims>, (p, s): (usize, i64), vertices: usize, n_max: usize) -> Vec<GradedDims> {
    (0..=n_max)
        .map(|i| {
            if i == 0 {
                block[0].add(&GradedDims::monomial(vertices as i64, 0))
            } else if i < block.len() {
                block[i].clone()
            } else {
                block[(i - 1) % p + 1].shift(s * ((i - 1) / p) as i64)
            }
        })
        .collect()
}

/// Printed spaces for one family, plus the fixed-vertex term of HH^0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub structure: Structure,
    pub fixed: GradedDims,
}

fn series(terms: impl IntoIterator<Item = (i64, i64)>) -> GradedDims {
    GradedDims::from_terms(terms)
}

fn constant(k: i64) -> GradedDims {
    GradedDims::monomial(k, 0)
}

/// Reduced HH_0 as printed for the family, where one is printed.
pub fn printed_hh0(f: Family) -> Option<GradedDims> {
    let n = match f {
        Family::A(_) => return Some(z()),
        Family::E8 => return Some(series([(3, 1)])),
        Family::E8Star => return Some(series([(1, 2), (2, 1), (3, 1), (5, 1)])),
        Family::AStar(n) | Family::D(n) | Family::DStar(n) => n as i64,
    };
    Some(match f {
        Family::AStar(_) => series((1..=n - 3).map(|j| (j, (n - j - 1) / 2))),
        Family::D(_) => {
            let k = n / 3 - 1;
            series((1..k).map(|j| (3 * j, 3)).chain([(3 * k, 1)]))
        }
        _ => {
            let m = (n - 1) / 2;
            if n % 2 == 0 {
                series((1..=(2 * m - 1) / 3).map(|j| (3 * j, m - 3 * j / 2)))
            } else {
                series((1..=(2 * m - 2) / 3).map(|j| (3 * j, m - (3 * j + 1) / 2)))
            }
        }
    })
}

/// The printed theorem data for a family, where the family has one.
pub fn closed_form_tables(f: Family) -> Option<ClosedForm> {
    let rotating = |c: GradedDims, x2: GradedDims, x3: GradedDims, k2: i64, fixed: GradedDims| ClosedForm {
        structure: Structure::Rotating { c, x: [z(), x2, x3, z()], k: [z(), constant(k2)] },
        fixed,
    };
    let trivial = |c: GradedDims, x: GradedDims, k: i64, fixed: GradedDims| ClosedForm {
        structure: Structure::Trivial { c, x, k: constant(k) },
        fixed,
    };
    Some(match f {
        Family::A(4) => rotating(z(), series([(3, 1)]), z(), 0, z()),
        Family::A(5) => rotating(z(), series([(3, 1)]), series([(6, 1)]), 0, z()),
        Family::A(6) => rotating(z(), series([(3, 1)]), z(), 2, series([(3, 1)])),
        Family::A(7) => rotating(z(), series([(3, 1), (6, 1)]), series([(9, 1)]), 2, z()),
        Family::A(_) => return None,
        Family::E8 => rotating(series([(3, 1)]), series([(3, 1), (6, 1)]), series([(9, 2)]), 2, z()),
        Family::E8Star => trivial(printed_hh0(f)?, z(), 2, series([(5, 4)])),
        Family::AStar(n) => {
            let n = n as i64;
            trivial(printed_hh0(f)?, z(), 0, series([(n - 3, (n - 1) / 2)]))
        }
        Family::D(n) if n % 6 == 0 => {
            let k = n as i64 / 6;
            let c = series((1..=2 * k - 2).map(|j| (3 * j, 3)).chain([(6 * k - 3, 1)]));
            let x = if k == 1 {
                z()
            } else {
                series([(3, 1), (3 * k, 1), (6 * k - 3, 1)].into_iter().chain((2..=2 * k - 2).map(|j| (3 * j, 3))))
            };
            trivial(c, x, 6 * k * (k - 1) + 2, series([(6 * k - 3, 3 * k * (2 * k - 1) + 3)]))
        }
        Family::D(n) if n % 6 == 3 => {
            let k = n as i64 / 6;
            let c = series((1..=2 * k - 1).map(|j| (3 * j, 3)).chain([(6 * k, 1)]));
            let x = series([(3, 1), (6 * k, 1)].into_iter().chain((2..=2 * k - 1).map(|j| (3 * j, 3))));
            trivial(c, x, 6 * k * k, series([(6 * k, 3 * k * (2 * k + 1) + 3)]))
        }
        Family::DStar(n) if n % 6 == 0 => {
            let k = n as i64 / 6;
            trivial(printed_hh0(f)?, z(), 6 * k - 4, series([(6 * k - 3, 9 * k - 3)]))
        }
        Family::DStar(n) if n % 6 == 3 => {
            let k = n as i64 / 6;
            trivial(printed_hh0(f)?, z(), 6 * k, series([(6 * k, 9 * k + 3)]))
        }
        Family::D(_) | Family::DStar(_) => return None,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("Euler series too short: need {need} coefficients, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("bookkeeping does not separate at degree {degree}")]
    Inconsistent { degree: i64 },
    #[error("negative dimension for {space} at degree {degree}")]
    Negative { space: &'static str, degree: i64 },
}

fn restrict(g: &GradedDims, lo: i64, hi: i64) -> GradedDims {
    GradedDims::from_terms(g.terms().filter(|&(d, _)| (lo..=hi).contains(&d)))
}

fn require_nonneg(g: &GradedDims, space: &'static str) -> Result<(), StructureError> {
    match g.terms().find(|&(_, k)| k < 0) {
        Some((degree, _)) => Err(StructureError::Negative { space, degree }),
        None => Ok(()),
    }
}

/// Recover the structure spaces from C = reduced HH_0 and the Euler
/// characteristic chi of reduced HC (coefficients a_0, a_1, ...).
///
/// With period shift P (h or 3h), chi (1 - t^P) is a polynomial of degree
/// at most P whose pieces sit in separated degree windows. For a rotating
/// symmetry the windows of X_1, X_3 and K_1 overlap the rest, so HH_1 and
/// HH_4 (reduced) are needed as well.
pub fn structure_from_euler(
    h: u32,
    c: &GradedDims,
    chi: &[i64],
    rotating: Option<(&GradedDims, &GradedDims)>,
) -> Result<Structure, StructureError> {
    let h = h as i64;
    let p = if rotating.is_some() { 3 * h } else { h };
    if (chi.len() as i64) <= p {
        return Err(StructureError::TooShort { need: p as usize + 1, got: chi.len() });
    }
    let num = GradedDims::from_terms(
        (0..chi.len() as i64).map(|k| (k, chi[k as usize] - if k >= p { chi[(k - p) as usize] } else { 0 })),
    );
    if let Some(d) = num.terms().map(|(d, _)| d).find(|&d| d > p) {
        return Err(StructureError::Inconsistent { degree: d });
    }
    match rotating {
        None => {
            // num = C - X + C*[h] - K t^h
            let k = constant(-num.get(h));
            let x = c.add(&c.dual_shift(h)).sub(&restrict(&num, i64::MIN, h - 1));
            require_nonneg(&x, "X")?;
            require_nonneg(&k, "K")?;
            Ok(Structure::Trivial { c: c.clone(), x, k })
        }
        Some((hh1, hh4)) => {
            let x1 = hh1.sub(c);
            let k1 = constant(hh4.get(h));
            let x3 = hh4.sub(&k1.shift(h));
            require_nonneg(&x1, "X_1")?;
            require_nonneg(&x3, "X_3")?;
            let s = 3 * h;
            // num - known = X_2 - X_4 + X_2*[3h] - K_2 t^{3h}
            let known = sum(&[
                c.clone(),
                x1.scale(-1),
                k1.shift(h).scale(-1),
                x3.clone(),
                x3.dual_shift(s),
                k1.dual_shift(2 * h).scale(-1),
                x1.dual_shift(s).scale(-1),
                c.dual_shift(s),
            ]);
            let rest = num.sub(&known);
            let k2 = constant(-rest.get(s));
            let x2 = restrict(&rest, 2, h - 1);
            let x4 = restrict(&rest, h + 1, 2 * h - 2).scale(-1);
            require_nonneg(&x2, "X_2")?;
            require_nonneg(&x4, "X_4")?;
            let leftover = rest.sub(&x2).add(&x4).sub(&x2.dual_shift(s)).add(&k2.shift(s));
            if let Some((d, _)) = leftover.terms().next() {
                return Err(StructureError::Inconsistent { degree: d });
            }
            require_nonneg(&k2, "K_2")?;
            Ok(Structure::Rotating { c: c.clone(), x: [x1, x2, x3, x4], k: [k1, k2] })
        }
    }
}

/// Smallest table length whose HH_i vanish above index len-1 through `cutoff`.
pub fn table_length(h: u32, cutoff: i64) -> usize {
    (0..).find(|&n| index_offset(h, n) > cutoff).unwrap_or(0)
}
