//! Acceptance gate: one line per criterion, PASS or FAIL with detail.
//!
//! The process exits non-zero only when the set of failing (criterion,
//! graph) pairs differs from [`KNOWN_FAILURES`].

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use acy::algebra::{build_algebra, GradedAlgebra};
use acy::cells::{builtin_potential, family_cells, fix_nu_gauge, gauge_transform, to_potential, CellSource, CellSystem, Gauge, SolveOptions};
use acy::homology::{
    closed_form_tables, compute_report, describe_tower, hh0_direct, printed_hh0, CellSummary, Check, ComputeOptions, HomologyReport,
    ReportContext, Tables,
};
use acy::quiver::{Family, Graph};
use acy::scalar::{Elem, Tower};
use acy::series::{det_hilbert, GradedDims, RatFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Pinned limits. Dimensions, series and determinants are compared exactly.
mod tolerance {
    use std::time::Duration;

    /// Building cells and algebra and checking the Hilbert series.
    pub const HILBERT: Duration = Duration::from_secs(30);
    /// Building the algebra and the full HH/HC/HH^* run.
    pub const TABLES: Duration = Duration::from_secs(300);
    /// Highest homological index in the tables.
    pub const MAX_INDEX: usize = 13;
    /// Random unitary gauges tried per graph.
    pub const GAUGES: usize = 2;
    pub const GAUGE_SEED: u64 = 0x5eed;
}

/// D9 and D12: the complex gives C = 2t^3 + t^6 (+ t^9) where the printed
/// tables have 3t^3 + t^6 and 3t^3 + 3t^6 + t^9; chi agrees either way.
const KNOWN_FAILURES: &[(u8, &str)] = &[(3, "D9"), (3, "D12"), (4, "D9"), (4, "D12"), (5, "D9"), (5, "D12")];

const HILBERT_GRAPHS: &[&str] =
    &["A4", "A5", "A6", "A7", "A5*", "A6*", "A7*", "A8*", "A9*", "D9", "D12", "D6*", "D7*", "D8*", "D9*", "E8", "E8*"];
const TABLE_GRAPHS: &[&str] = &["A4", "A5", "A6", "A7", "E8", "E8*", "D9", "D12", "A5*", "A6*", "A7*", "A8*", "D6*", "D9*"];
const PROPERTY_GRAPHS: &[&str] = &[
    "A4", "A5", "A6", "A7", "A8", "A9", "A5*", "A6*", "A7*", "A8*", "A9*", "D6*", "D7*", "D8*", "D9*", "D9", "D12", "E8", "E8*",
];
const GAUGE_GRAPHS: &[&str] = &["A4", "A6", "A5*", "D6*", "D9", "E8*"];

struct Run {
    family: Family,
    algebra: GradedAlgebra,
    context: ReportContext,
    build: Duration,
    report: HomologyReport,
    total: Duration,
}

#[derive(Default)]
struct Criterion {
    failures: BTreeMap<String, String>,
    notes: Vec<String>,
}

impl Criterion {
    fn check(&mut self, graph: &str, ok: bool, why: impl FnOnce() -> String) {
        if !ok {
            self.failures.entry(graph.to_string()).or_insert_with(why);
        }
    }
}

fn family(name: &str) -> Family {
    Family::parse(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn context(f: Family, origin: String, a: &GradedAlgebra, certified: bool) -> ReportContext {
    ReportContext { family: Some(f), cells: CellSummary { origin, tower: describe_tower(a.tower()), certified } }
}

fn run(name: &str) -> Run {
    let f = family(name);
    let start = Instant::now();
    let prep = builtin_potential(f, CellSource::Builtin, &SolveOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
    let algebra = build_algebra(&prep.potential.relations()).unwrap_or_else(|e| panic!("{name}: {e}"));
    let build = start.elapsed();
    let ctx = context(f, prep.origin, &algebra, prep.cells.is_some());
    let report = compute_report(&algebra, &ctx, &ComputeOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
    Run { family: f, algebra, context: ctx, build, report, total: start.elapsed() }
}

fn within(rows: &[GradedDims], cutoff: i64) -> Vec<GradedDims> {
    rows.iter().take(tolerance::MAX_INDEX + 1).map(|r| r.truncate(cutoff)).collect()
}

fn first_mismatch(sym: &str, got: &[GradedDims], want: &[GradedDims]) -> Option<String> {
    (0..got.len().max(want.len())).find(|&i| got.get(i) != want.get(i)).map(|i| {
        format!(
            "{sym}{i} = {} but expected {}",
            got.get(i).cloned().unwrap_or_default(),
            want.get(i).cloned().unwrap_or_default()
        )
    })
}

fn hilbert_gate(runs: &BTreeMap<&str, Run>) -> Criterion {
    let mut c = Criterion::default();
    let mut slowest = Duration::ZERO;
    for name in HILBERT_GRAPHS {
        let r = &runs[name];
        let a = &r.algebra;
        let start = Instant::now();
        let gate = compute_report(a, &r.context, &ComputeOptions::only(Check::Hilbert)).unwrap();
        let elapsed = r.build + start.elapsed();
        slowest = slowest.max(elapsed);
        let h = a.graph().h as usize;
        c.check(name, gate.passed(), || gate.checks[&Check::Hilbert].detail.clone());
        c.check(name, a.top() == h - 3, || format!("top degree {} != h - 3 = {}", a.top(), h - 3));
        c.check(name, elapsed <= tolerance::HILBERT, || format!("{elapsed:.1?} over {:?}", tolerance::HILBERT));
    }
    c.notes.push(format!("{} graphs, slowest {slowest:.2?} (limit {:?})", HILBERT_GRAPHS.len(), tolerance::HILBERT));
    c
}

fn determinants() -> Criterion {
    let mut c = Criterion::default();
    let mut cases: Vec<(String, RatFunc)> = vec![
        ("A4".into(), RatFunc::from_factors(&[(6, 1), (3, -1)])),
        ("E8*".into(), RatFunc::from_factors(&[(2, 1), (4, 1), (8, 2), (1, -2)])),
    ];
    for m in 2..=5i32 {
        let n = 2 * m as usize + 2;
        cases.push((format!("A{n}*"), RatFunc::from_factors(&[(2, 1), (n, m - 1), (1, -m)])));
        let n = 2 * m as usize + 1;
        cases.push((format!("A{n}*"), RatFunc::from_factors(&[(n, m - 1), (1, 1 - m)])));
    }
    for k in 1..=2i32 {
        let n = 6 * k as usize;
        cases.push((format!("D{n}"), RatFunc::from_factors(&[(n, 2 * (3 * k * (k - 1) + 2)), (3 * k as usize, 1), (3, -3)])));
        cases.push((format!("D{n}*"), RatFunc::from_factors(&[(6, 1), (n, 9 * k - 6), (3, 1 - 3 * k)])));
        let n = n + 3;
        cases.push((format!("D{n}"), RatFunc::from_factors(&[(n, 6 * k * k + 3), (3, -3)])));
        cases.push((format!("D{n}*"), RatFunc::from_factors(&[(n, 9 * k), (3, -3 * k)])));
    }
    let det = |name: &str| det_hilbert(&family(name).build().unwrap());
    for (name, want) in &cases {
        let got = det(name);
        c.check(name, got == *want, || format!("det = {got}, printed {want}"));
    }
    let e8 = det("E8");
    let pulled = det("E8*").substitute_power(3);
    c.check("E8", e8 == pulled, || format!("det = {e8}, det(E8*)(t^3) = {pulled}"));
    c.notes.push(format!("{} printed forms and E8 = E8*(t^3)", cases.len()));
    c
}

fn hh0(runs: &BTreeMap<&str, Run>) -> Criterion {
    let mut c = Criterion::default();
    for name in PROPERTY_GRAPHS {
        let r = &runs[name];
        let direct = hh0_direct(&r.algebra).unwrap();
        let complex = &r.report.tables.hh[0];
        c.check(name, direct == *complex, || format!("A/[A,A] = {direct}, complex {complex}"));
        let s = GradedDims::monomial(r.algebra.graph().num_vertices() as i64, 0);
        if let Some(printed) = printed_hh0(r.family).map(|p| p.add(&s)) {
            c.check(name, direct == printed, || format!("A/[A,A] = {direct}, printed S + C = {printed}"));
        }
    }
    c.notes.push(format!("{} graphs, A/[A,A] against the complex and the printed S + C", PROPERTY_GRAPHS.len()));
    c
}

fn tables(runs: &BTreeMap<&str, Run>) -> Criterion {
    let mut c = Criterion::default();
    let mut slowest = Duration::ZERO;
    for name in TABLE_GRAPHS {
        let r = &runs[name];
        let g = r.algebra.graph();
        let cutoff = 4 * g.h as i64;
        slowest = slowest.max(r.total);
        c.check(name, r.total <= tolerance::TABLES, || format!("{:.1?} over {:?}", r.total, tolerance::TABLES));
        let cf = closed_form_tables(r.family).expect("theorem tables");
        let (nv, h) = (g.num_vertices(), g.h);
        let t = &r.report.tables;
        let hh = within(&cf.structure.hh(h, nv, tolerance::MAX_INDEX), cutoff);
        let hc = within(&cf.structure.hc(h, nv, tolerance::MAX_INDEX), cutoff);
        let bad = first_mismatch("HH_", &within(&t.hh, cutoff), &hh).or_else(|| first_mismatch("HC_", &within(&t.hc, cutoff), &hc));
        c.check(name, bad.is_none(), || bad.clone().unwrap_or_default());
    }
    c.notes.push(format!("{} graphs through index {}, degree 4h, slowest {slowest:.2?}", TABLE_GRAPHS.len(), tolerance::MAX_INDEX));
    c
}

/// Fixed-vertex series L: one copy of t^{h-3} per vertex fixed by nu.
fn fixed_series(g: &Graph) -> GradedDims {
    let fixed = (0..g.num_vertices()).filter(|&v| g.nu_pow_vertex(v, 1) == v).count();
    GradedDims::monomial(fixed as i64, g.h as i64 - 3)
}

fn cohomology(runs: &BTreeMap<&str, Run>) -> Criterion {
    let mut c = Criterion::default();
    for name in TABLE_GRAPHS {
        let r = &runs[name];
        let g = r.algebra.graph();
        let ident = &r.report.checks[&Check::Cohomology];
        c.check(name, ident.passed, || ident.detail.clone());
        let cf = closed_form_tables(r.family).expect("theorem tables");
        let l = fixed_series(g);
        c.check(name, cf.fixed == l, || format!("printed H_L = {}, fixed vertices give {l}", cf.fixed));
        let coh = &r.report.tables.cohomology;
        let want = cf.structure.cohomology(g.h, &cf.fixed, coh.len() - 1);
        let bad = first_mismatch("HH^", coh, &want);
        c.check(name, bad.is_none(), || bad.clone().unwrap_or_default());
    }
    c.notes.push(format!("{} graphs: complex, identification and theorem tables with L", TABLE_GRAPHS.len()));
    c
}

fn properties(runs: &BTreeMap<&str, Run>) -> Criterion {
    let mut c = Criterion::default();
    let wanted = [Check::D2, Check::Duality, Check::Exactness, Check::Periodicity, Check::Euler, Check::Hh0Cross];
    for name in PROPERTY_GRAPHS {
        let r = &runs[name];
        for k in wanted {
            let o = &r.report.checks[&k];
            c.check(name, o.passed, || format!("{k}: {}", o.detail));
        }
    }
    c.notes.push(format!("{} graphs x {} properties", PROPERTY_GRAPHS.len(), wanted.len()));
    c
}

/// A unit of the tower: -1, or a primitive cube root of unity when sqrt(-3)
/// has been adjoined.
fn units(t: &Tower) -> Vec<Elem> {
    let mut u = vec![t.from_int(-1)];
    for i in 0..t.radicands().len() {
        let s = t.gen(i);
        if t.mul(&s, &s) == t.from_int(-3) {
            u.push(t.div(&t.add(&t.from_int(-1), &s), &t.from_int(2)).unwrap());
        }
    }
    u
}

fn random_gauge(cells: &CellSystem, units: &[Elem], rng: &mut ChaCha8Rng) -> Gauge {
    let t = &*cells.tower;
    let g = &cells.graph;
    let mut u = Gauge::identity(g, t);
    for e in 0..g.num_edges() {
        if rng.gen_bool(0.5) {
            u.entries[e] = vec![(e, units[rng.gen_range(0..units.len())].clone())];
        }
    }
    u
}

fn table_of(cells: &CellSystem, f: Family) -> Result<Tables, String> {
    let c = fix_nu_gauge(cells).map_err(|e| e.to_string())?;
    let p = to_potential(&c.potential()).map_err(|e| e.to_string())?;
    let a = build_algebra(&p.relations()).map_err(|e| e.to_string())?;
    let ctx = context(f, "gauge variant".into(), &a, true);
    let opts = ComputeOptions { checks: BTreeSet::new(), ..Default::default() };
    compute_report(&a, &ctx, &opts).map(|r| r.tables).map_err(|e| e.to_string())
}

fn cells_and_gauge(runs: &BTreeMap<&str, Run>) -> Criterion {
    let mut c = Criterion::default();
    let opts = SolveOptions::default();
    let mut systems = 0;
    for name in HILBERT_GRAPHS {
        let cells = family_cells(family(name), &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
        let r = cells.certify();
        c.check(name, r.is_ok(), || format!("{}", r.unwrap_err()));
        systems += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tolerance::GAUGE_SEED);
    let mut variants = 0;
    let mut complex = 0;
    for name in GAUGE_GRAPHS {
        let f = family(name);
        let cells = family_cells(f, &opts).unwrap();
        let base = match table_of(&cells, f) {
            Ok(t) => t,
            Err(e) => {
                c.check(name, false, || e);
                continue;
            }
        };
        let reference = &runs[name].report.tables;
        c.check(name, base == *reference, || "solved cells and built-in data give different tables".into());
        let u = units(&cells.tower);
        complex += usize::from(u.len() > 1) * tolerance::GAUGES;
        for _ in 0..tolerance::GAUGES {
            let gauge = random_gauge(&cells, &u, &mut rng);
            let moved = gauge_transform(&cells, &gauge).and_then(|w| w.certify().map(|_| w));
            let res = moved.map_err(|e| e.to_string()).and_then(|w| table_of(&w, f));
            c.check(name, res.as_ref() == Ok(&base), || match res {
                Ok(_) => "gauge variant changes the tables".into(),
                Err(e) => format!("gauge variant: {e}"),
            });
            variants += 1;
        }
    }
    c.notes.push(format!("{systems} cell systems certified, {variants} gauge variants ({complex} with cube roots of unity)"));
    c
}

fn main() -> ExitCode {
    let mut runs = BTreeMap::new();
    for name in PROPERTY_GRAPHS {
        runs.insert(*name, run(name));
    }
    let criteria: [(u8, &str, Criterion); 7] = [
        (1, "hilbert gate", hilbert_gate(&runs)),
        (2, "determinants", determinants()),
        (3, "hh0 agreement", hh0(&runs)),
        (4, "HH/HC tables", tables(&runs)),
        (5, "cohomology", cohomology(&runs)),
        (6, "property suite", properties(&runs)),
        (7, "cells and gauge", cells_and_gauge(&runs)),
    ];
    let known: BTreeSet<(u8, String)> = KNOWN_FAILURES.iter().map(|&(n, g)| (n, g.to_string())).collect();
    let mut seen = BTreeSet::new();
    for (n, title, c) in &criteria {
        let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {n} ({title}): {status}  {}", c.notes.join("; "));
        for (g, why) in &c.failures {
            let tag = if known.contains(&(*n, g.clone())) { " [known]" } else { "" };
            line.push_str(&format!("; {g}{tag}: {why}"));
            seen.insert((*n, g.clone()));
        }
        println!("{line}");
    }
    if seen == known {
        ExitCode::SUCCESS
    } else {
        let extra: Vec<_> = seen.difference(&known).collect();
        let fixed: Vec<_> = known.difference(&seen).collect();
        eprintln!("unexpected failures {extra:?}; known failures now passing {fixed:?}");
        ExitCode::FAILURE
    }
}
