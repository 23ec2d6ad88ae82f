//! Command implementations behind the `fibtype` binary. Each command returns
//! an [`Output`] so that tests can drive them without spawning a process.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::Path;

use fibtype::abelian::abelian_invariants;
use fibtype::classify::{self, Classification, ClassifyError};
use fibtype::coset::{enumerate_with, CosetOutcome, Strategy};
use fibtype::diagram::{
    self, boundary_word, color_faces, curvature_report, assign_angles, fmt_rational, forbidden_patterns,
    lane_curvature, lane_decomposition, vertex_label, z_placement_check, ColoredDisk, VanKampenDiagram,
};
use fibtype::params::{self, FibParams, ParamError};
use fibtype::stargraph::{self, fib_star_graph, girth, interior_vertex_census, short_cycles, StarGraphError};
use fibtype::words::{CyclicPresentation, Word};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;

/// What a command printed and how it wants the process to exit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Output { stdout: String::new(), stderr: format!("error: {msg}\n"), code }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn checked(n: u32, m: u32, k: u32) -> Result<FibParams, ParamError> {
    let p = params::derive(n, m, k)?;
    p.require_coprime()?;
    Ok(p)
}

/// Parses `a..b`, `a..=b`, `a-b` (all inclusive) or a single `n`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let s = s.trim();
    let split = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad bound {t:?}: {e}"));
    let (lo, hi) = match split {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(lo..=hi)
}

// ---- classify / table ----------------------------------------------------

pub fn cmd_classify(n: u32, m: u32, k: u32, json: bool) -> Output {
    let c = match classify::classify(n, m, k) {
        Ok(c) => c,
        Err(e) => return Output::fail(EXIT_INVALID, e),
    };
    if json {
        return Output::ok(to_json(&c));
    }
    Output::ok(render_classification(&c))
}

fn order_text(c: &Classification) -> String {
    match (&c.order, &c.family) {
        (Some(o), _) => o.to_string(),
        (None, classify::Family::Unknown) => "unknown".into(),
        (None, _) => "infinite".into(),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_classification(c: &Classification) -> String {
    let p = &c.params;
    let mut s = String::new();
    writeln!(s, "G_{}({},{})  A={} B={}", p.n, p.m, p.k, p.a, p.b).unwrap();
    writeln!(s, "name: {}", c.name).unwrap();
    writeln!(s, "family: {}", c.family).unwrap();
    writeln!(s, "order: {}", order_text(c)).unwrap();
    writeln!(s, "verdict: {}, {}", c.hyperbolicity, c.tits).unwrap();
    if let Some(cl) = c.clause {
        writeln!(s, "clause: ({})", cl.letter()).unwrap();
    }
    writeln!(s, "T(5): {}  T(6): {}", yes_no(c.small_cancellation.t5), yes_no(c.small_cancellation.t6)).unwrap();
    writeln!(s, "provenance: {}", c.provenance).unwrap();
    s
}

/// One row of `table` output: an isomorphism class for `n <= 12`, a
/// congruence family for `n >= 13`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: u32,
    /// Representative (or first example) parameters.
    pub m: Option<u32>,
    pub k: Option<u32>,
    pub name: String,
    pub group: String,
    pub order: String,
    pub hyperbolic: String,
    pub tits: String,
    pub provenance: String,
    /// Parameter pairs falling in a congruence family.
    pub count: Option<usize>,
}

pub fn table_rows(n: u32) -> Result<Vec<ReportRow>, ClassifyError> {
    if n <= 12 {
        return classify::class_rows(n)?
            .into_iter()
            .map(|r| {
                let c = classify::classify(r.n, r.m, r.k)?;
                Ok(ReportRow {
                    n,
                    m: Some(r.m),
                    k: Some(r.k),
                    name: r.name.into(),
                    group: r.group.into(),
                    order: r.order.to_string(),
                    hyperbolic: r.hyp.into(),
                    tits: r.tits.into(),
                    provenance: c.provenance,
                    count: None,
                })
            })
            .collect();
    }
    let rows = classify::congruence_table(n)?;
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| ReportRow {
            n,
            m: r.example.map(|e| e.0),
            k: r.example.map(|e| e.1),
            order: if matches!(i, 0 | 3) { "finite" } else { "infinite" }.into(),
            name: r.congruence,
            group: r.group,
            hyperbolic: r.hyp,
            tits: r.tits,
            provenance: format!("first matching congruence row {}", i + 1),
            count: Some(r.count),
        })
        .collect())
}

/// Renders rows as `|`-separated lines, with a header whenever the row kind
/// (class or congruence family) changes.
pub fn render_table(rows: &[ReportRow]) -> String {
    let mut s = String::new();
    let mut last = None;
    for r in rows {
        let small = r.n <= 12;
        if last != Some(small) {
            if small {
                writeln!(s, "n | name | group | order | non-elem. hyp. | Tits alt.").unwrap();
            } else {
                writeln!(s, "n | congruence | group | non-elem. hyp. | Tits alt. | count | example").unwrap();
            }
            last = Some(small);
        }
        if small {
            writeln!(s, "{} | {} | {} | {} | {} | {}", r.n, r.name, r.group, r.order, r.hyperbolic, r.tits).unwrap();
            continue;
        }
        let ex = match (r.m, r.k) {
            (Some(m), Some(k)) => format!("G_{}({m},{k})", r.n),
            _ => "-".into(),
        };
        let count = r.count.unwrap_or(0);
        writeln!(s, "{} | {} | {} | {} | {} | {count} | {ex}", r.n, r.name, r.group, r.hyperbolic, r.tits).unwrap();
    }
    s
}

pub fn cmd_table(range: RangeInclusive<u32>, json: bool) -> Output {
    let mut rows = Vec::new();
    for n in range {
        match table_rows(n) {
            Ok(r) => rows.extend(r),
            Err(e) => return Output::fail(EXIT_INVALID, e),
        }
    }
    Output::ok(if json { to_json(&rows) } else { render_table(&rows) })
}

// ---- small cancellation / star graph --------------------------------------

fn star_fail(e: StarGraphError) -> Output {
    let code = match e {
        StarGraphError::BudgetExceeded(_) => EXIT_LIMIT,
        _ => EXIT_INVALID,
    };
    Output::fail(code, e)
}

fn girth_text(g: Option<usize>) -> String {
    g.map_or_else(|| "infinite".into(), |g| g.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallCancellationReport {
    pub params: FibParams,
    pub girth: Option<usize>,
    pub t5: bool,
    pub t6_profile: Option<bool>,
    pub t6_generic: Option<bool>,
}

fn small_cancellation(n: u32, m: u32, k: u32, six: bool, json: bool) -> Output {
    let p = match checked(n, m, k) {
        Ok(p) => p,
        Err(e) => return Output::fail(EXIT_INVALID, e),
    };
    let g = match fib_star_graph(n, m, k) {
        Ok(g) => girth(&g),
        Err(e) => return star_fail(e),
    };
    let r = SmallCancellationReport {
        params: p,
        girth: g,
        t5: classify::is_t5(n, m, k),
        t6_profile: six.then(|| classify::t6_profile(n, m, k)),
        t6_generic: six.then(|| classify::is_t6_generic(n, m, k)),
    };
    if json {
        return Output::ok(to_json(&r));
    }
    let mut s = format!("G_{n}({m},{k}): star graph girth {}\n", girth_text(g));
    match (r.t6_profile, r.t6_generic) {
        (Some(prof), Some(gen)) => {
            writeln!(s, "T(6) congruence profile: {}", yes_no(prof)).unwrap();
            writeln!(s, "generic T(6) conditions: {}", yes_no(gen)).unwrap();
        }
        _ => writeln!(s, "T(5): {}", yes_no(r.t5)).unwrap(),
    }
    Output::ok(s)
}

pub fn cmd_t5(n: u32, m: u32, k: u32, json: bool) -> Output {
    small_cancellation(n, m, k, false, json)
}

pub fn cmd_t6(n: u32, m: u32, k: u32, json: bool) -> Output {
    small_cancellation(n, m, k, true, json)
}

pub fn cmd_star_girth(n: u32, m: u32, k: u32, json: bool) -> Output {
    if let Err(e) = checked(n, m, k) {
        return Output::fail(EXIT_INVALID, e);
    }
    let g = match fib_star_graph(n, m, k) {
        Ok(g) => g,
        Err(e) => return star_fail(e),
    };
    let gi = girth(&g);
    if json {
        return Output::ok(to_json(&serde_json::json!({
            "vertices": g.vertex_count(),
            "edges": g.edges().len(),
            "girth": gi,
        })));
    }
    let mut s = format!("star graph of G_{n}({m},{k}): {} vertices, {} edges", g.vertex_count(), g.edges().len());
    for ty in [stargraph::EdgeType::X, stargraph::EdgeType::Y, stargraph::EdgeType::Z] {
        write!(s, ", {} {ty}", g.count_type(ty)).unwrap();
    }
    writeln!(s, "\ngirth: {}", girth_text(gi)).unwrap();
    Output::ok(s)
}

pub fn cmd_star_cycles(n: u32, m: u32, k: u32, maxlen: usize, json: bool) -> Output {
    if let Err(e) = checked(n, m, k) {
        return Output::fail(EXIT_INVALID, e);
    }
    let cycles = match fib_star_graph(n, m, k).and_then(|g| short_cycles(&g, maxlen)) {
        Ok(c) => c,
        Err(e) => return star_fail(e),
    };
    if json {
        return Output::ok(to_json(&cycles));
    }
    let mut s = String::new();
    for c in &cycles {
        writeln!(s, "{c}").unwrap();
    }
    writeln!(s, "{} closed reduced walks of length <= {maxlen}", cycles.len()).unwrap();
    Output::ok(s)
}

pub fn cmd_star_census(n: u32, m: u32, k: u32, p: u32, json: bool) -> Output {
    let r = match interior_vertex_census(n, m, k, p) {
        Ok(r) => r,
        Err(e) => return star_fail(e),
    };
    let code = if r.passed() { EXIT_OK } else { EXIT_INVALID };
    let stdout = if json {
        to_json(&r)
    } else {
        let mut s = format!("census G_{n}({m},{k}), p={p}: {} walks of length <= 7\n", r.cycles.len());
        for c in &r.violations {
            writeln!(s, "violation: {c}").unwrap();
        }
        writeln!(s, "{}", if r.passed() { "passed" } else { "FAILED" }).unwrap();
        s
    };
    Output { stdout, stderr: String::new(), code }
}

// ---- abelianisation / order / cases ---------------------------------------

pub fn cmd_ab(n: u32, m: u32, k: u32, json: bool) -> Output {
    if let Err(e) = checked(n, m, k) {
        return Output::fail(EXIT_INVALID, e);
    }
    let a = abelian_invariants(n, m, k);
    if json {
        return Output::ok(to_json(&a));
    }
    let order = a.order().map_or_else(|| "infinite".to_string(), |o| o.to_string());
    Output::ok(format!("G_{n}({m},{k})^ab = {a}\norder: {order}\n"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub params: FibParams,
    pub order: Option<u64>,
    pub strategy: Option<Strategy>,
    pub max_cosets: usize,
    pub defined: u64,
    pub coincidences: u64,
    pub max_live: usize,
}

/// Coset enumeration over the trivial subgroup. Without an explicit strategy,
/// HLT runs first and Felsch is tried on overflow.
pub fn cmd_order(n: u32, m: u32, k: u32, max_cosets: usize, strategy: Option<Strategy>, json: bool) -> Output {
    let p = match checked(n, m, k) {
        Ok(p) => p,
        Err(e) => return Output::fail(EXIT_INVALID, e),
    };
    let pres = match CyclicPresentation::fibonacci_type(n, m, k) {
        Ok(x) => x,
        Err(e) => return Output::fail(EXIT_INVALID, e),
    };
    let strategies = match strategy {
        Some(s) => vec![s],
        None => vec![Strategy::Hlt, Strategy::Felsch],
    };
    let mut report = OrderReport {
        params: p,
        order: None,
        strategy: None,
        max_cosets,
        defined: 0,
        coincidences: 0,
        max_live: 0,
    };
    for s in strategies {
        let r = match enumerate_with(&pres, &[], max_cosets, s) {
            Ok(r) => r,
            Err(e) => return Output::fail(EXIT_INVALID, e),
        };
        report.defined += r.stats.defined;
        report.coincidences += r.stats.coincidences;
        report.max_live = report.max_live.max(r.stats.max_live);
        if let CosetOutcome::Closed { order } = r.outcome {
            report.order = Some(order);
            report.strategy = Some(s);
            break;
        }
    }
    let stdout = if json {
        to_json(&report)
    } else {
        match (report.order, report.strategy) {
            (Some(o), Some(s)) => format!(
                "|G_{n}({m},{k})| = {o}\nstrategy {s:?}, {} cosets defined, {} coincidences, max live {}\n",
                report.defined, report.coincidences, report.max_live
            ),
            _ => String::new(),
        }
    };
    if report.order.is_none() {
        return Output {
            stdout,
            stderr: format!("error: coset limit {max_cosets} reached for G_{n}({m},{k})\n"),
            code: EXIT_LIMIT,
        };
    }
    Output::ok(stdout)
}

pub fn cmd_cases(p: u32, json: bool) -> Output {
    let reps = match params::case_representatives(p) {
        Ok(r) => r,
        Err(e) => return Output::fail(EXIT_INVALID, e),
    };
    let mut all = Vec::new();
    for r in &reps {
        match classify::classify(r.n, r.m, r.k) {
            Ok(c) => all.push(c),
            Err(e) => return Output::fail(EXIT_INVALID, e),
        }
    }
    if json {
        return Output::ok(to_json(&all));
    }
    let mut s = String::new();
    for c in &all {
        let p = &c.params;
        writeln!(s, "G_{}({},{}) A={} B={}: {}; {}", p.n, p.m, p.k, p.a, p.b, c.name, c.hyperbolicity).unwrap();
    }
    writeln!(s, "{} representatives with k of additive order {p}", all.len()).unwrap();
    Output::ok(s)
}

// ---- diagrams -----------------------------------------------------------

/// Splits `w` as `u v u v^-1` with `u`, `v` nonempty, if possible.
pub fn commutator_like(w: &Word) -> Option<(Word, Word)> {
    let l = w.letters();
    let n = w.rank();
    for a in 1..l.len() / 2 {
        let b = l.len() / 2 - a;
        if b == 0 || 2 * (a + b) != l.len() {
            continue;
        }
        let u = &l[..a];
        let v = &l[a..a + b];
        let vinv: Vec<_> = v.iter().rev().map(|x| x.inv()).collect();
        if &l[a + b..2 * a + b] == u && l[2 * a + b..] == vinv[..] {
            return Some((Word::new(n, u.to_vec()).ok()?, Word::new(n, v.to_vec()).ok()?));
        }
    }
    None
}

fn read(path: &Path) -> Result<String, Output> {
    std::fs::read_to_string(path).map_err(|e| Output::fail(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn is_disk_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "cdk")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub kind: String,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub faces: usize,
}

pub fn cmd_diagram_check(path: &Path, json: bool) -> Output {
    let text = match read(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let r = if is_disk_file(path) {
        match ColoredDisk::parse_cdk(&text) {
            Ok(cd) => CheckReport { kind: "colored-disk".into(), vertices: None, edges: None, faces: cd.len() },
            Err(e) => return Output::fail(EXIT_INVALID, e),
        }
    } else {
        match diagram::parse_and_validate(&text) {
            Ok(d) => CheckReport {
                kind: "diagram".into(),
                vertices: Some(d.vertex_count()),
                edges: Some(d.edges().len()),
                faces: d.faces().len(),
            },
            Err(e) => return Output::fail(EXIT_INVALID, format!("[{}] {e}", e.code())),
        }
    };
    if json {
        return Output::ok(to_json(&r));
    }
    match (r.vertices, r.edges) {
        (Some(v), Some(e)) => Output::ok(format!("valid, {v} vertices, {e} edges, {} faces\n", r.faces)),
        _ => Output::ok(format!("valid colored disk, {} faces\n", r.faces)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaneRow {
    pub id: String,
    /// Joined lane types, e.g. `(2,2)#(3,3)`.
    pub lanes: String,
    pub kind: (usize, usize),
    pub faces: usize,
    pub kappa: Option<String>,
    pub avg: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCurvature {
    pub id: i64,
    pub label: String,
    pub kappa: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramAudit {
    pub reduced: bool,
    pub boundary: String,
    /// `(a, b)` when the boundary reads `a b a b^-1`.
    pub commutator: Option<(String, String)>,
    pub gauss_bonnet_total: String,
    pub faces: Vec<NamedCurvature>,
    pub interior_vertices: Vec<NamedCurvature>,
    pub boundary_vertices: Vec<NamedCurvature>,
    pub z_violations: usize,
    pub black_faces: usize,
    pub forbidden: Vec<usize>,
    pub lanes: Result<Vec<LaneRow>, String>,
    pub kappa_max: Option<String>,
    pub verdict: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskAudit {
    pub faces: usize,
    pub black_faces: usize,
    pub crowded_black_faces: Vec<String>,
    /// Matched pattern numbers (1-based), one entry per match.
    pub forbidden: Vec<usize>,
    pub lanes: Result<Vec<LaneRow>, String>,
}

fn lane_rows(cd: &ColoredDisk, d: Option<&VanKampenDiagram>) -> Result<Vec<LaneRow>, String> {
    let ls = lane_decomposition(cd).map_err(|e| e.to_string())?;
    let curv = d.map(|d| lane_curvature(d, &ls));
    Ok(ls
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| LaneRow {
            id: format!("L{i}"),
            lanes: ls.element_name(i),
            kind: e.kind,
            faces: e.faces.len(),
            kappa: curv.as_ref().map(|c| fmt_rational(&c.elements[i].0)),
            avg: curv.as_ref().map(|c| fmt_rational(&c.elements[i].1)),
        })
        .collect())
}

pub fn audit_diagram(d: &VanKampenDiagram) -> DiagramAudit {
    let rep = curvature_report(d, &assign_angles(d));
    let bw = boundary_word(d);
    let cd = color_faces(d);
    let lanes = lane_rows(&cd, Some(d));
    let curv = lane_decomposition(&cd).ok().map(|ls| lane_curvature(d, &ls));
    let named = |v: usize, k: &num_rational::BigRational| NamedCurvature {
        id: d.vertex_id(v),
        label: vertex_label(d, v),
        kappa: fmt_rational(k),
    };
    DiagramAudit {
        reduced: diagram::is_reduced(d),
        boundary: bw.to_string(),
        commutator: commutator_like(&bw).map(|(a, b)| (a.to_string(), b.to_string())),
        gauss_bonnet_total: fmt_rational(&rep.total),
        faces: rep
            .faces
            .iter()
            .enumerate()
            .map(|(f, k)| NamedCurvature {
                id: d.faces()[f].id,
                label: d.face_label(f).to_string(),
                kappa: fmt_rational(k),
            })
            .collect(),
        interior_vertices: rep.interior_vertices.iter().map(|(&v, k)| named(v, k)).collect(),
        boundary_vertices: rep.boundary_vertices.iter().map(|(&v, k)| named(v, k)).collect(),
        z_violations: z_placement_check(d).len(),
        black_faces: cd.black_faces().len(),
        forbidden: forbidden_patterns(&cd).iter().map(|m| m.pattern).collect(),
        lanes,
        kappa_max: curv.as_ref().and_then(|c| c.kappa_max.as_ref().map(fmt_rational)),
        verdict: curv.map(|c| c.verdict.to_string()),
    }
}

pub fn audit_disk(cd: &ColoredDisk) -> DiskAudit {
    DiskAudit {
        faces: cd.len(),
        black_faces: cd.black_faces().len(),
        crowded_black_faces: cd.crowded_black_faces().iter().map(|&f| cd.label(f).to_string()).collect(),
        forbidden: forbidden_patterns(cd).iter().map(|m| m.pattern).collect(),
        lanes: lane_rows(cd, None),
    }
}

fn render_lanes(s: &mut String, lanes: &Result<Vec<LaneRow>, String>) {
    match lanes {
        Ok(rows) => {
            writeln!(s, "lane id | type | faces | kappa | avg").unwrap();
            for r in rows {
                let dash = || "-".to_string();
                writeln!(
                    s,
                    "{} | {} = ({},{}) | {} | {} | {}",
                    r.id,
                    r.lanes,
                    r.kind.0,
                    r.kind.1,
                    r.faces,
                    r.kappa.clone().unwrap_or_else(dash),
                    r.avg.clone().unwrap_or_else(dash)
                )
                .unwrap();
            }
        }
        Err(e) => writeln!(s, "lane decomposition failed: {e}").unwrap(),
    }
}

fn render_forbidden(s: &mut String, forbidden: &[usize]) {
    if forbidden.is_empty() {
        writeln!(s, "no forbidden pattern matched").unwrap();
    }
    for p in forbidden {
        writeln!(s, "forbidden pattern #{p} matched").unwrap();
    }
}

pub fn render_diagram_audit(a: &DiagramAudit) -> String {
    let mut s = String::new();
    let reduced = if a.reduced { "reduced" } else { "not reduced" };
    let boundary = match &a.commutator {
        Some(_) => "a b a b^-1".to_string(),
        None => a.boundary.clone(),
    };
    writeln!(s, "valid, {reduced}, boundary = {boundary}, GB total = {}", a.gauss_bonnet_total).unwrap();
    if let Some((x, y)) = &a.commutator {
        writeln!(s, "  a = {x}\n  b = {y}").unwrap();
    }
    writeln!(s, "faces:").unwrap();
    for f in &a.faces {
        writeln!(s, "  face {} [{}] kappa = {}", f.id, f.label, f.kappa).unwrap();
    }
    writeln!(s, "interior vertices:").unwrap();
    for v in &a.interior_vertices {
        writeln!(s, "  vertex {} [{}] kappa = {}", v.id, v.label, v.kappa).unwrap();
    }
    writeln!(s, "boundary vertices:").unwrap();
    for v in &a.boundary_vertices {
        writeln!(s, "  vertex {} kappa = {}", v.id, v.kappa).unwrap();
    }
    writeln!(s, "z-placement violations: {}", a.z_violations).unwrap();
    writeln!(s, "black faces: {}", a.black_faces).unwrap();
    render_forbidden(&mut s, &a.forbidden);
    render_lanes(&mut s, &a.lanes);
    if let Some(k) = &a.kappa_max {
        writeln!(s, "kappa_L = {k}").unwrap();
    }
    if let Some(v) = &a.verdict {
        writeln!(s, "{v}").unwrap();
    }
    s
}

pub fn render_disk_audit(a: &DiskAudit) -> String {
    let mut s = format!("colored disk, {} faces, {} black\n", a.faces, a.black_faces);
    if !a.crowded_black_faces.is_empty() {
        writeln!(s, "black faces with >= 2 black neighbours: {}", a.crowded_black_faces.join(" ")).unwrap();
    }
    render_forbidden(&mut s, &a.forbidden);
    render_lanes(&mut s, &a.lanes);
    s
}

pub fn cmd_diagram_audit(path: &Path, json: bool) -> Output {
    let text = match read(path) {
        Ok(t) => t,
        Err(o) => return o,
    };
    if is_disk_file(path) {
        let cd = match ColoredDisk::parse_cdk(&text) {
            Ok(cd) => cd,
            Err(e) => return Output::fail(EXIT_INVALID, e),
        };
        let a = audit_disk(&cd);
        return Output::ok(if json { to_json(&a) } else { render_disk_audit(&a) });
    }
    let d = match diagram::parse_and_validate(&text) {
        Ok(d) => d,
        Err(e) => return Output::fail(EXIT_INVALID, format!("[{}] {e}", e.code())),
    };
    let a = audit_diagram(&d);
    Output::ok(if json { to_json(&a) } else { render_diagram_audit(&a) })
}
