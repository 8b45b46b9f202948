//! One full run on an algebra: HH, HC and HH^* tables, every cross-check,
//! and the JSON and text renderings of the result.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    build_cohomology_complex, build_hh_complex, closed_form_tables, cyclic_from_hh, euler_of_hc, hh0_cohomology,
    hh0_direct, printed_hh0, structure_from_euler, table_length, verify_duality, verify_resolution, GradedComplex,
    HomologyError, Structure,
};
use crate::algebra::GradedAlgebra;
use crate::quiver::Family;
use crate::scalar::{field_to_strings, Tower};
use crate::series::{euler_characteristic_hc, hilbert_totals, GradedDims};

pub const REPORT_SCHEMA: &str = "acy-report/1";

/// How basis elements are ordered inside every (index, degree) space.
pub const BASIS_ORDERING: &str =
    "pairs (generator, path) sorted by generator index, then by the index of the path in the degree-p basis of A; generators are vertices or edges in graph order";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Hilbert,
    D2,
    Exactness,
    Duality,
    Periodicity,
    Euler,
    Hh0Cross,
    Hh0Printed,
    Cohomology,
    Structure,
    Theorem,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Hilbert,
        Check::D2,
        Check::Exactness,
        Check::Duality,
        Check::Periodicity,
        Check::Euler,
        Check::Hh0Cross,
        Check::Hh0Printed,
        Check::Cohomology,
        Check::Structure,
        Check::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Hilbert => "hilbert",
            Check::D2 => "d2",
            Check::Exactness => "exactness",
            Check::Duality => "duality",
            Check::Periodicity => "periodicity",
            Check::Euler => "euler",
            Check::Hh0Cross => "hh0_cross",
            Check::Hh0Printed => "hh0_printed",
            Check::Cohomology => "cohomology",
            Check::Structure => "structure",
            Check::Theorem => "theorem",
        }
    }

    fn needs_homology(self) -> bool {
        !matches!(self, Check::Hilbert | Check::Exactness | Check::Hh0Printed)
    }

    fn needs_cohomology(self) -> bool {
        matches!(self, Check::D2 | Check::Duality | Check::Cohomology | Check::Theorem)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Check::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| format!("unknown check `{s}` (expected one of {})", Check::ALL.map(Check::name).join(", ")))
    }
}

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    /// Highest total degree in the HH and HC tables; defaults to 4h.
    pub cutoff_degree: Option<i64>,
    /// Number of 12-periods of the complex; tables run through index 12p+1.
    pub periods: usize,
    pub checks: BTreeSet<Check>,
    /// Fill in the tables even when no selected check needs them.
    pub tables: bool,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions { cutoff_degree: None, periods: 1, checks: Check::ALL.into_iter().collect(), tables: true }
    }
}

impl ComputeOptions {
    pub fn only(check: Check) -> Self {
        ComputeOptions { checks: [check].into_iter().collect(), tables: false, ..Default::default() }
    }

    pub fn max_index(&self) -> usize {
        12 * self.periods.max(1) + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub name: String,
    pub family: Option<String>,
    pub h: u32,
    pub vertices: usize,
    pub edges: usize,
    pub nu: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSummary {
    pub origin: String,
    pub tower: String,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cutoffs {
    pub degree: i64,
    pub max_index: usize,
    /// Highest index of the homology complex actually built.
    pub complex_index: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub hh: Vec<GradedDims>,
    pub hc: Vec<GradedDims>,
    pub cohomology: Vec<GradedDims>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(detail: impl Into<String>) -> Self {
        CheckOutcome { passed: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        CheckOutcome { passed: false, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub schema: String,
    pub version: String,
    pub graph: GraphSummary,
    pub cells: CellSummary,
    pub basis_ordering: String,
    pub cutoffs: Cutoffs,
    pub tables: Tables,
    pub checks: BTreeMap<Check, CheckOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Structure>,
}

impl HomologyReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<Check> {
        self.checks.iter().filter(|(_, c)| !c.passed).map(|(&k, _)| k).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering in the layout of the structure theorems.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let g = &self.graph;
        let _ = writeln!(s, "graph {} (h = {}, |V| = {}, |E| = {}, nu = {})", g.name, g.h, g.vertices, g.edges, g.nu);
        let _ = writeln!(s, "cells {} [{}]", self.cells.origin, if self.cells.certified { "certified" } else { "relations" });
        let _ = writeln!(s, "tower {}", self.cells.tower);
        let _ = writeln!(s, "acy {} / {}", self.version, self.schema);
        let _ = writeln!(s, "cutoff degree {}, indices 0..={}", self.cutoffs.degree, self.cutoffs.max_index);
        if let Some(st) = &self.structure {
            let _ = writeln!(s);
            match st {
                Structure::Trivial { c, x, k } => {
                    let _ = writeln!(s, "H_C(t) = {c}\nH_X(t) = {x}\nH_K(t) = {k}");
                }
                Structure::Rotating { c, x, k } => {
                    let _ = writeln!(s, "H_C(t) = {c}");
                    for (i, xi) in x.iter().enumerate() {
                        let _ = writeln!(s, "H_X{}(t) = {xi}", i + 1);
                    }
                    for (i, ki) in k.iter().enumerate() {
                        let _ = writeln!(s, "H_K{}(t) = {ki}", i + 1);
                    }
                }
            }
        }
        for (title, rows, up) in [
            ("Hochschild homology", &self.tables.hh, false),
            ("cyclic homology", &self.tables.hc, false),
            ("Hochschild cohomology", &self.tables.cohomology, true),
        ] {
            if rows.is_empty() {
                continue;
            }
            let _ = writeln!(s, "\n{title}");
            let sym = if title.starts_with("cyclic") { "HC" } else { "HH" };
            for (i, r) in rows.iter().enumerate() {
                let label = if up { format!("{sym}^{i}") } else { format!("{sym}_{i}") };
                let _ = writeln!(s, "  {label:<6} = {r}");
            }
        }
        let _ = writeln!(s, "\nchecks");
        for (k, c) in &self.checks {
            let _ = writeln!(s, "  {:<12} {}  {}", k.name(), if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
        s
    }
}

/// Human-readable field tower: the base field and its adjoined roots.
pub fn describe_tower(t: &Tower) -> String {
    let h = t.field().h();
    let mut s = format!("Q(c), c = 2cos(pi/{h}), degree {}", t.degree());
    let roots: Vec<String> = t.radicands().iter().map(|r| format!("sqrt({})", poly_in_c(&field_to_strings(r)))).collect();
    if !roots.is_empty() {
        let _ = write!(s, "; adjoined {}", roots.join(", "));
    }
    if !t.is_real() {
        s.push_str("; complex");
    }
    s
}

fn poly_in_c(coords: &[String]) -> String {
    let terms: Vec<String> = coords
        .iter()
        .enumerate()
        .filter(|(_, q)| q.as_str() != "0")
        .map(|(i, q)| match i {
            0 => q.clone(),
            1 if q == "1" => "c".into(),
            1 => format!("{q}c"),
            _ if q == "1" => format!("c^{i}"),
            _ => format!("{q}c^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// Everything known about the run apart from the algebra itself.
#[derive(Clone, Debug)]
pub struct ReportContext {
    pub family: Option<Family>,
    pub cells: CellSummary,
}

fn truncated(rows: &[GradedDims], n: usize, cutoff: i64) -> Vec<GradedDims> {
    rows.iter().take(n).map(|r| r.truncate(cutoff)).collect()
}

/// First index where two tables differ.
fn first_difference(a: &[GradedDims], b: &[GradedDims]) -> Option<usize> {
    (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i))
}

fn outcome(what: &str, computed: &[GradedDims], expected: &[GradedDims], sym: &str) -> Result<(), String> {
    match first_difference(computed, expected) {
        None => Ok(()),
        Some(i) => Err(format!(
            "{what}: {sym}{i} is {} but expected {}",
            computed.get(i).cloned().unwrap_or_default(),
            expected.get(i).cloned().unwrap_or_default()
        )),
    }
}

/// HH^0..HH^{n_max} from the homology table through the identifications
/// HH^i = HH_{3-i}[-3] (i = 1, 2), HH^i = HH_{15-i}[-3h-3] (i = 3..12)
/// and period 12 with shift -3h.
pub fn cohomology_from_homology(a: &GradedAlgebra, hh: &[GradedDims], n_max: usize) -> Vec<GradedDims> {
    let h = a.graph().h as i64;
    let mut out: Vec<GradedDims> = Vec::with_capacity(n_max + 1);
    for i in 0..=n_max {
        let r = match i {
            0 => hh0_cohomology(a, &hh[3]),
            1 | 2 => hh[3 - i].shift(-3),
            3..=12 => hh[15 - i].shift(-3 * h - 3),
            _ => out[i - 12].shift(-3 * h),
        };
        out.push(r);
    }
    out
}

fn cutoff_of(a: &GradedAlgebra, opts: &ComputeOptions) -> Result<i64, HomologyError> {
    let h = a.graph().h as i64;
    let cutoff = opts.cutoff_degree.unwrap_or(4 * h);
    if cutoff < 3 * h {
        return Err(HomologyError::Cutoff { cutoff, min: 3 * h });
    }
    Ok(cutoff)
}

/// Run the selected checks (and tables) on one algebra.
pub fn compute_report(a: &GradedAlgebra, ctx: &ReportContext, opts: &ComputeOptions) -> Result<HomologyReport, HomologyError> {
    let g = a.graph();
    let h = g.h;
    let hh_ = h as i64;
    let nv = g.num_vertices();
    let cutoff = cutoff_of(a, opts)?;
    let max_index = opts.max_index();
    let want = |c: Check| opts.checks.contains(&c);
    let need_hom = opts.tables || opts.checks.iter().any(|c| c.needs_homology());
    let need_coh = opts.tables || opts.checks.iter().any(|c| c.needs_cohomology());

    let len = table_length(h, cutoff);
    let n_hom = len.max(max_index + 1);
    let mut checks = BTreeMap::new();
    let mut tables = Tables::default();
    let mut structure = None;

    if want(Check::Hilbert) {
        let closed = hilbert_totals(g, 2 * h as usize)?;
        let bad = closed.iter().enumerate().find(|&(k, &c)| c != if k <= a.top() { a.dim(k) as i64 } else { 0 });
        checks.insert(
            Check::Hilbert,
            match bad {
                None => CheckOutcome::pass(format!("dim A_k matches the closed form for k = 0..{}, top degree {}", 2 * h, a.top())),
                Some((k, &c)) => CheckOutcome::fail(format!("degree {k}: closed form {c}")),
            },
        );
    }
    if want(Check::Exactness) {
        let r = verify_resolution(a, 2 * hh_)?;
        checks.insert(
            Check::Exactness,
            match (r.passed(), r.first_failure()) {
                (true, _) => CheckOutcome::pass(format!("{} nodes exact through degree {}", r.nodes.len(), 2 * h)),
                (false, Some(n)) => CheckOutcome::fail(format!(
                    "node {} at degree {}: dim {} != {} + {}",
                    n.index, n.degree, n.dim, n.rank_out, n.rank_in
                )),
                (false, None) => CheckOutcome::fail("multiplication map is not surjective"),
            },
        );
    }
    if want(Check::Hh0Printed) {
        if let Some(c) = ctx.family.and_then(printed_hh0) {
            let direct = hh0_direct(a)?;
            let expected = c.add(&GradedDims::monomial(nv as i64, 0));
            checks.insert(
                Check::Hh0Printed,
                if direct == expected {
                    CheckOutcome::pass(format!("A/[A,A] = {direct}"))
                } else {
                    CheckOutcome::fail(format!("A/[A,A] = {direct}, printed S + C = {expected}"))
                },
            );
        }
    }
    if !need_hom {
        return Ok(finish(a, ctx, cutoff, max_index, 0, tables, checks, structure));
    }

    let hom = build_hh_complex(a, n_hom)?;
    let coh = if need_coh { Some(build_cohomology_complex(a, max_index.max(12) + 1)?) } else { None };
    if want(Check::D2) {
        let r = hom.check_d2().and_then(|_| coh.as_ref().map_or(Ok(()), GradedComplex::check_d2));
        checks.insert(
            Check::D2,
            match r {
                Ok(()) => CheckOutcome::pass(format!("homology maps 1..={n_hom}, cohomology maps 0..={}", max_index.max(12))),
                Err(e) => CheckOutcome::fail(e.to_string()),
            },
        );
    }
    let hh = hom.table()?;
    tables.hh = truncated(&hh, max_index + 1, cutoff);

    if want(Check::Hh0Cross) {
        let direct = hh0_direct(a)?;
        checks.insert(
            Check::Hh0Cross,
            if direct == hh[0] {
                CheckOutcome::pass(format!("HH_0 = {direct} both ways"))
            } else {
                CheckOutcome::fail(format!("A/[A,A] = {direct}, complex gives {}", hh[0]))
            },
        );
    }
    if want(Check::Periodicity) {
        let mut bad = None;
        for i in 1..hh.len() {
            if i + 12 < hh.len() && hh[i + 12] != hh[i].shift(3 * hh_) {
                bad = Some(format!("HH_{} != HH_{i}[3h]", i + 12));
                break;
            }
            if g.nu_is_trivial() && i + 4 < hh.len() && hh[i + 4] != hh[i].shift(hh_) {
                bad = Some(format!("HH_{} != HH_{i}[h]", i + 4));
                break;
            }
        }
        let what = if g.nu_is_trivial() { "periods 4 and 12" } else { "period 12" };
        checks.insert(
            Check::Periodicity,
            match bad {
                None => CheckOutcome::pass(format!("{what} through index {}", hh.len() - 1)),
                Some(d) => CheckOutcome::fail(d),
            },
        );
    }

    let hc = cyclic_from_hh(&truncated(&hh, n_hom, cutoff), nv, h, cutoff);
    if let Ok(hc) = &hc {
        tables.hc = hc.iter().take(max_index + 1).cloned().collect();
    }
    let chi = euler_characteristic_hc(g, cutoff as usize)?;
    if want(Check::Euler) {
        checks.insert(
            Check::Euler,
            match &hc {
                Err(e) => CheckOutcome::fail(e.to_string()),
                Ok(hc) => {
                    let from_hc = euler_of_hc(hc, nv, cutoff);
                    match (0..chi.len()).find(|&k| chi[k] != from_hc[k]) {
                        None => CheckOutcome::pass(format!("chi agrees through t^{cutoff}")),
                        Some(k) => CheckOutcome::fail(format!(
                            "t^{k}: tables give {}, determinant product gives {}",
                            from_hc[k], chi[k]
                        )),
                    }
                }
            },
        );
    }

    let mut coh_table = Vec::new();
    if let Some(coh) = &coh {
        coh_table = coh.table()?.into_iter().take(max_index + 1).collect();
        tables.cohomology = coh_table.clone();
        if want(Check::Cohomology) {
            let ident = cohomology_from_homology(a, &hh, coh_table.len().saturating_sub(1));
            checks.insert(
                Check::Cohomology,
                match outcome("identification", &coh_table, &ident, "HH^") {
                    Ok(()) => CheckOutcome::pass(format!("complex and identification agree through HH^{}", coh_table.len() - 1)),
                    Err(e) => CheckOutcome::fail(e),
                },
            );
        }
        if want(Check::Duality) {
            let r = verify_duality(a, &hom, Some(coh))?;
            let checked = r.identities.len();
            checks.insert(
                Check::Duality,
                if r.passed() {
                    CheckOutcome::pass(format!("{checked} matrix identities and dimension symmetry"))
                } else if let Some(c) = r.identities.iter().find(|c| !c.passed()) {
                    CheckOutcome::fail(format!(
                        "{} identity for index {} against {} fails at degree {}",
                        c.kind,
                        c.index,
                        c.partner,
                        c.failed_at.unwrap_or_default()
                    ))
                } else {
                    let (i, d) = r.symmetry_failures[0];
                    CheckOutcome::fail(format!("dim HH_{i} at degree {d} is not mirrored"))
                },
            );
        }
    }

    if want(Check::Structure) {
        let c = hh[0].sub(&GradedDims::monomial(nv as i64, 0));
        let rot = (!g.nu_is_trivial()).then_some((&hh[1], &hh[4]));
        let result = match structure_from_euler(h, &c, &chi, rot) {
            Err(e) => CheckOutcome::fail(e.to_string()),
            Ok(s) => {
                let res = outcome("HH", &tables.hh, &truncated(&s.hh(h, nv, max_index), max_index + 1, cutoff), "HH_")
                    .and_then(|_| outcome("HC", &tables.hc, &truncated(&s.hc(h, nv, max_index), max_index + 1, cutoff), "HC_"));
                structure = Some(s);
                match res {
                    Ok(()) => CheckOutcome::pass("tables predicted from C, chi (and HH_1, HH_4) agree"),
                    Err(e) => CheckOutcome::fail(e),
                }
            }
        };
        checks.insert(Check::Structure, result);
    }
    if want(Check::Theorem) {
        if let Some(cf) = ctx.family.and_then(closed_form_tables) {
            let hh_t = truncated(&cf.structure.hh(h, nv, max_index), max_index + 1, cutoff);
            let hc_t = truncated(&cf.structure.hc(h, nv, max_index), max_index + 1, cutoff);
            let coh_t = cf.structure.cohomology(h, &cf.fixed, coh_table.len().saturating_sub(1));
            let res = outcome("HH", &tables.hh, &hh_t, "HH_")
                .and_then(|_| outcome("HC", &tables.hc, &hc_t, "HC_"))
                .and_then(|_| outcome("HH^*", &coh_table, &coh_t, "HH^"));
            checks.insert(
                Check::Theorem,
                match res {
                    Ok(()) => CheckOutcome::pass("HH, HC and HH^* match the printed structure"),
                    Err(e) => CheckOutcome::fail(e),
                },
            );
        }
    }
    if !opts.tables {
        tables = Tables::default();
    }
    Ok(finish(a, ctx, cutoff, max_index, n_hom, tables, checks, structure))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    a: &GradedAlgebra,
    ctx: &ReportContext,
    degree: i64,
    max_index: usize,
    complex_index: usize,
    tables: Tables,
    checks: BTreeMap<Check, CheckOutcome>,
    structure: Option<Structure>,
) -> HomologyReport {
    let g = a.graph();
    HomologyReport {
        schema: REPORT_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        graph: GraphSummary {
            name: g.name.clone(),
            family: ctx.family.map(|f| f.to_string()),
            h: g.h,
            vertices: g.num_vertices(),
            edges: g.num_edges(),
            nu: if g.nu_is_trivial() { "identity" } else { "rotation" }.into(),
        },
        cells: ctx.cells.clone(),
        basis_ordering: BASIS_ORDERING.into(),
        cutoffs: Cutoffs { degree, max_index, complex_index },
        tables,
        checks,
        structure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::cells::{builtin_potential, CellSource, SolveOptions};

    fn report(f: Family, opts: &ComputeOptions) -> HomologyReport {
        let prep = builtin_potential(f, CellSource::Builtin, &SolveOptions::default()).unwrap();
        let a = build_algebra(&prep.potential.relations()).unwrap();
        let cells = CellSummary { origin: prep.origin, tower: describe_tower(a.tower()), certified: prep.cells.is_some() };
        compute_report(&a, &ReportContext { family: Some(f), cells }, opts).unwrap()
    }

    #[test]
    fn a4_full_report_passes() {
        let r = report(Family::A(4), &ComputeOptions::default());
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.tables.hh[2], GradedDims::monomial(1, 3));
        assert_eq!(r.tables.hh.len(), 14);
        assert_eq!(r.tables.cohomology.len(), 14);
        let json = r.to_json();
        let back: HomologyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"hh0_cross\""));
    }

    #[test]
    fn two_periods_fill_every_table() {
        let opts = ComputeOptions { periods: 2, ..Default::default() };
        let r = report(Family::A(4), &opts);
        assert!(r.passed(), "{}", r.to_text());
        for rows in [&r.tables.hh, &r.tables.hc, &r.tables.cohomology] {
            assert_eq!(rows.len(), 26);
        }
    }

    #[test]
    fn single_check_skips_tables() {
        let r = report(Family::E8Star, &ComputeOptions::only(Check::Hilbert));
        assert!(r.tables.hh.is_empty());
        assert_eq!(r.checks.len(), 1);
        assert!(r.passed());
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("hh0-cross".parse::<Check>().is_ok());
        assert!("bogus".parse::<Check>().is_err());
    }

    #[test]
    fn short_cutoff_is_rejected() {
        let prep = builtin_potential(Family::A(4), CellSource::Builtin, &SolveOptions::default()).unwrap();
        let a = build_algebra(&prep.potential.relations()).unwrap();
        let ctx = ReportContext { family: None, cells: CellSummary { origin: String::new(), tower: String::new(), certified: false } };
        let opts = ComputeOptions { cutoff_degree: Some(5), ..Default::default() };
        assert!(matches!(compute_report(&a, &ctx, &opts), Err(HomologyError::Cutoff { .. })));
    }
}
