//! Hochschild homology and cohomology of A from the 12-periodic resolution.
//!
//! Homological index n = 4m + r uses generators of slot r (vertices, edges,
//! reversed edges, vertices again) twisted by N^(m). A basis element of the
//! homology complex is a pair (generator g, algebra basis element x) with
//! x in r(g) A nu^{-m}(s(g)); its total degree is m h + r + |x|. The
//! cohomology complex uses x in s(g) A nu^m(r(g)) in total degree
//! |x| - m h - r.

mod complex;
mod cyclic;
mod duality;
mod expected;
mod hh0;
mod report;
mod resolution;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraError, GradedAlgebra};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::{ScalarError, Tower};
use crate::series::{GradedDims, SeriesError};

pub use complex::{build_cohomology_complex, build_hh_complex, build_hh_complex_generic};
pub use cyclic::{cyclic_from_hh, euler_of_hc, index_offset, CyclicError};
pub use duality::{dimension_symmetry, self_dual_sign, verify_duality, DualityReport, IdentityCheck};
pub use expected::{closed_form_tables, printed_hh0, structure_from_euler, table_length, ClosedForm, Structure, StructureError};
pub use hh0::{hh0_cohomology, hh0_direct};
pub use report::{
    cohomology_from_homology, compute_report, describe_tower, CellSummary, Check, CheckOutcome, ComputeOptions, Cutoffs,
    GraphSummary, HomologyReport, ReportContext, Tables, BASIS_ORDERING, REPORT_SCHEMA,
};
pub use resolution::{verify_resolution, ExactnessReport};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("d^2 != 0 at index {index}, total degree {degree}")]
    NotAComplex { index: usize, degree: i64 },
    #[error("negative homology dimension at index {index}, total degree {degree}")]
    Negative { index: usize, degree: i64 },
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("degree cutoff {cutoff} is below 3h = {min}")]
    Cutoff { cutoff: i64, min: i64 },
}

/// The four generator slots of one period of the resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Vertex,
    Edge,
    Reversed,
    Top,
}

impl Slot {
    pub fn of_index(n: usize) -> Slot {
        [Slot::Vertex, Slot::Edge, Slot::Reversed, Slot::Top][n % 4]
    }

    pub fn is_edge(self) -> bool {
        matches!(self, Slot::Edge | Slot::Reversed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Homology,
    Cohomology,
}

/// Generator endpoints (s(g), r(g)) in the resolution.
pub(crate) fn gen_ends(a: &GradedAlgebra, slot: Slot, g: usize) -> (usize, usize) {
    let gr = a.graph();
    match slot {
        Slot::Vertex | Slot::Top => (g, g),
        Slot::Edge => (gr.src(g), gr.dst(g)),
        Slot::Reversed => (gr.dst(g), gr.src(g)),
    }
}

pub(crate) fn gen_count(a: &GradedAlgebra, slot: Slot) -> usize {
    if slot.is_edge() {
        a.graph().num_edges()
    } else {
        a.graph().num_vertices()
    }
}

/// One term of a complex: basis pairs (generator, algebra basis index),
/// grouped by algebra degree p; total degree = offset + p.
#[derive(Clone, Debug)]
pub struct Space {
    pub index: usize,
    pub slot: Slot,
    /// m mod 3 for index n = 4m + r
    pub twist: usize,
    pub offset: i64,
    by_p: Vec<Vec<(usize, usize)>>,
}

impl Space {
    /// Homology space of index n.
    pub fn homology(a: &GradedAlgebra, n: usize) -> Space {
        let m = n / 4;
        let k = m % 3;
        let slot = Slot::of_index(n);
        let offset = (m as i64) * a.graph().h as i64 + (n % 4) as i64;
        Space::collect(a, n, slot, k, offset, |s, r| (r, a.graph().nu_pow_vertex(s, -(k as i64))))
    }

    /// Cohomology space of index n (Hom of the n-th resolution term into A).
    pub fn cohomology(a: &GradedAlgebra, n: usize) -> Space {
        let m = n / 4;
        let k = m % 3;
        let slot = Slot::of_index(n);
        let offset = -((m as i64) * a.graph().h as i64 + (n % 4) as i64);
        Space::collect(a, n, slot, k, offset, |s, r| (s, a.graph().nu_pow_vertex(r, k as i64)))
    }

    fn collect(
        a: &GradedAlgebra,
        index: usize,
        slot: Slot,
        twist: usize,
        offset: i64,
        block: impl Fn(usize, usize) -> (usize, usize),
    ) -> Space {
        let by_p = (0..=a.top())
            .map(|p| {
                let mut v = Vec::new();
                for g in 0..gen_count(a, slot) {
                    let (s, r) = gen_ends(a, slot, g);
                    let (i, j) = block(s, r);
                    v.extend(a.block(p, i, j).iter().map(|&x| (g, x)));
                }
                v.sort_unstable();
                v
            })
            .collect();
        Space { index, slot, twist, offset, by_p }
    }

    pub fn dim_at(&self, degree: i64) -> usize {
        self.level(degree).map(|v| v.len()).unwrap_or(0)
    }

    /// Basis at a total degree.
    pub fn level(&self, degree: i64) -> Option<&[(usize, usize)]> {
        let p = degree - self.offset;
        if p < 0 {
            return None;
        }
        self.by_p.get(p as usize).map(|v| v.as_slice())
    }

    /// Position of (g, x) within its total degree.
    pub fn position(&self, p: usize, g: usize, x: usize) -> Option<usize> {
        self.by_p.get(p)?.binary_search(&(g, x)).ok()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_p.iter().enumerate().filter(|(_, v)| !v.is_empty()).map(|(p, _)| self.offset + p as i64)
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims::from_terms(self.degrees().map(|d| (d, self.dim_at(d) as i64)))
    }

    /// Algebra degree of the basis at total degree d.
    pub fn p_of(&self, degree: i64) -> usize {
        (degree - self.offset) as usize
    }
}

/// A linear map between two spaces, stored per total degree as the images
/// of the source basis (sparse over the target basis at the same degree).
#[derive(Clone, Debug, Default)]
pub struct Map {
    pub cols: BTreeMap<i64, Vec<SparseVec>>,
}

impl Map {
    pub fn at(&self, degree: i64) -> &[SparseVec] {
        self.cols.get(&degree).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// A complex: spaces[0..] and maps, with maps[n] the differential leaving
/// spaces[n] (homology: to n-1, cohomology: to n+1).
#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub direction: Direction,
    pub spaces: Vec<Space>,
    pub maps: Vec<Option<Map>>,
    tower: Arc<Tower>,
    ranks: Vec<BTreeMap<i64, usize>>,
}

impl GradedComplex {
    pub(crate) fn new(direction: Direction, tower: Arc<Tower>, spaces: Vec<Space>, maps: Vec<Option<Map>>) -> Result<Self, HomologyError> {
        let mut c = GradedComplex { direction, spaces, maps, tower, ranks: Vec::new() };
        c.ranks = c.compute_ranks()?;
        Ok(c)
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    fn target(&self, n: usize) -> Option<usize> {
        match self.direction {
            Direction::Homology => n.checked_sub(1),
            Direction::Cohomology => (n + 1 < self.spaces.len()).then_some(n + 1),
        }
    }

    /// Index of the map arriving at space n, when it was built.
    fn incoming(&self, n: usize) -> Option<usize> {
        let src = match self.direction {
            Direction::Homology => n + 1,
            Direction::Cohomology => n.checked_sub(1)?,
        };
        self.maps.get(src)?.as_ref().map(|_| src)
    }

    fn compute_ranks(&self) -> Result<Vec<BTreeMap<i64, usize>>, HomologyError> {
        let t = &*self.tower;
        let jobs: Vec<(usize, i64)> = self
            .maps
            .iter()
            .enumerate()
            .filter_map(|(n, m)| m.as_ref().map(|m| (n, m)))
            .flat_map(|(n, m)| m.cols.keys().map(move |&d| (n, d)))
            .collect();
        let found: Vec<(usize, i64, usize)> = jobs
            .par_iter()
            .map(|&(n, d)| {
                let cols = self.maps[n].as_ref().unwrap().at(d);
                let mut e = Echelon::new();
                for c in cols {
                    e.insert(t, c)?;
                }
                Ok((n, d, e.rank()))
            })
            .collect::<Result<_, ScalarError>>()?;
        let mut ranks = vec![BTreeMap::new(); self.maps.len()];
        for (n, d, r) in found {
            ranks[n].insert(d, r);
        }
        Ok(ranks)
    }

    /// Rank of the map leaving space n at total degree d.
    pub fn rank(&self, n: usize, d: i64) -> usize {
        self.ranks.get(n).and_then(|r| r.get(&d)).copied().unwrap_or(0)
    }

    /// Whether the homology at space n is determined (the arriving map for
    /// homology, the leaving map for cohomology, has been built).
    pub fn is_complete_at(&self, n: usize) -> bool {
        let need = match self.direction {
            Direction::Homology => n + 1,
            Direction::Cohomology => n,
        };
        matches!(self.maps.get(need), Some(Some(_)))
    }

    /// Graded dimension of the homology at space n.
    pub fn homology(&self, n: usize) -> Result<GradedDims, HomologyError> {
        let sp = &self.spaces[n];
        let inc = self.incoming(n);
        let mut out = GradedDims::zero();
        for d in sp.degrees() {
            let dim = sp.dim_at(d) as i64 - self.rank(n, d) as i64 - inc.map(|i| self.rank(i, d)).unwrap_or(0) as i64;
            if dim < 0 {
                return Err(HomologyError::Negative { index: n, degree: d });
            }
            out.add_term(d, dim);
        }
        Ok(out)
    }

    /// Homology at every space where both adjacent maps exist.
    pub fn table(&self) -> Result<Vec<GradedDims>, HomologyError> {
        (0..self.spaces.len()).take_while(|&n| self.is_complete_at(n)).map(|n| self.homology(n)).collect()
    }

    /// Composition of consecutive differentials vanishes at every degree.
    pub fn check_d2(&self) -> Result<(), HomologyError> {
        let t = &*self.tower;
        for n in 0..self.spaces.len() {
            let (Some(m1), Some(mid)) = (self.maps[n].as_ref(), self.target(n)) else { continue };
            let Some(m2) = self.maps[mid].as_ref() else { continue };
            for (&d, cols) in &m1.cols {
                let next = m2.at(d);
                for c in cols {
                    let mut acc = SparseVec::new();
                    for (j, x) in &c.entries {
                        acc = acc.axpy(t, x, &next[*j]);
                    }
                    if !acc.is_zero() {
                        return Err(HomologyError::NotAComplex { index: n, degree: d });
                    }
                }
            }
        }
        Ok(())
    }
}
