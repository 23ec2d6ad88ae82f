//! Star graphs of cyclic presentations, pieces, C(p)/T(q) profiles, girth
//! and enumeration of short closed reduced walks.
//!
//! Vertex `i` is `x_i` and vertex `n + i` is `x_i^{-1}`. Every length-2 cyclic
//! subword `a b` of a relator contributes the edge `{a, b^{-1}}`. For
//! `P_n(m,k)` the three corners of `x_i x_{i+m} x_{i+k}^{-1}` give an
//! X edge `x_i - x_{i+m}^{-1}`, a Y edge `x_{i+m} - x_{i+k}` and a Z edge
//! `x_{i+k}^{-1} - x_i^{-1}`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{self, FibParams, ParamError};
use crate::words::{relators, CyclicPresentation, Letter, Word};

/// Largest walk length `short_cycles` accepts.
pub const MAX_CYCLE_LEN: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarGraphError {
    #[error("relator {0} is not cyclically reduced")]
    NotCyclicallyReduced(usize),
    #[error("cycle search budget exceeded: maxlen {0} > {MAX_CYCLE_LEN}")]
    BudgetExceeded(usize),
    #[error("census precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Params(#[from] ParamError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeType {
    X,
    Y,
    Z,
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            EdgeType::X => 'X',
            EdgeType::Y => 'Y',
            EdgeType::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarEdge {
    pub u: usize,
    pub v: usize,
    pub ty: Option<EdgeType>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarGraph {
    n: u32,
    edges: Vec<StarEdge>,
    /// `adj[v]` lists `(edge id, other endpoint)`; a loop appears twice.
    adj: Vec<Vec<(usize, usize)>>,
}

fn vertex_of(l: Letter, n: u32) -> usize {
    if l.inverse {
        (n + l.gen) as usize
    } else {
        l.gen as usize
    }
}

/// Human-readable vertex name: `x3` or `X3`.
pub fn vertex_name(v: usize, n: u32) -> String {
    let n = n as usize;
    if v < n {
        format!("x{v}")
    } else {
        format!("X{}", v - n)
    }
}

impl StarGraph {
    fn from_edges(n: u32, edges: Vec<StarEdge>) -> Self {
        let mut adj = vec![Vec::new(); 2 * n as usize];
        for (id, e) in edges.iter().enumerate() {
            adj[e.u].push((id, e.v));
            adj[e.v].push((id, e.u));
        }
        StarGraph { n, edges, adj }
    }

    /// Untyped star graph of an arbitrary relator list in rank `n`.
    pub fn from_relators(n: u32, rels: &[Word]) -> Result<Self, StarGraphError> {
        let mut edges = Vec::new();
        for (ri, r) in rels.iter().enumerate() {
            if !r.is_cyclically_reduced() {
                return Err(StarGraphError::NotCyclicallyReduced(ri));
            }
            let ls = r.letters();
            for i in 0..ls.len() {
                let a = ls[i];
                let b = ls[(i + 1) % ls.len()];
                edges.push(StarEdge { u: vertex_of(a, n), v: vertex_of(b.inv(), n), ty: None });
            }
        }
        Ok(Self::from_edges(n, edges))
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> &[StarEdge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn count_type(&self, ty: EdgeType) -> usize {
        self.edges.iter().filter(|e| e.ty == Some(ty)).count()
    }
}

/// Star graph of a cyclic presentation. When the defining word has the shape
/// `x_0 x_m x_k^{-1}` the edges are typed X, Y, Z.
pub fn build_star_graph(p: &CyclicPresentation) -> Result<StarGraph, StarGraphError> {
    let n = p.rank();
    let rels = relators(p);
    let mut g = StarGraph::from_relators(n, &rels)?;
    let ls = p.word().letters();
    let typed = ls.len() == 3 && !ls[0].inverse && !ls[1].inverse && ls[2].inverse;
    if typed {
        for (idx, e) in g.edges.iter_mut().enumerate() {
            e.ty = Some(match idx % 3 {
                0 => EdgeType::X,
                1 => EdgeType::Y,
                _ => EdgeType::Z,
            });
        }
    }
    Ok(g)
}

/// Convenience wrapper for `P_n(m,k)`.
pub fn fib_star_graph(n: u32, m: u32, k: u32) -> Result<StarGraph, StarGraphError> {
    let p = CyclicPresentation::fibonacci_type(n, m, k).map_err(|e| StarGraphError::Precondition(e.to_string()))?;
    build_star_graph(&p)
}

/// Length of a shortest closed walk with no immediate reversal along the same
/// edge; `None` for a forest.
pub fn girth(g: &StarGraph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (id, e) in g.edges.iter().enumerate() {
        if e.u == e.v {
            return Some(1);
        }
        // shortest u-v path avoiding edge `id`
        let mut dist = vec![usize::MAX; g.vertex_count()];
        let mut queue = VecDeque::new();
        dist[e.u] = 0;
        queue.push_back(e.u);
        while let Some(x) = queue.pop_front() {
            if best.is_some_and(|b| dist[x] + 2 > b) {
                break;
            }
            for &(eid, y) in &g.adj[x] {
                if eid == id || dist[y] != usize::MAX {
                    continue;
                }
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
        if dist[e.v] != usize::MAX {
            let len = dist[e.v] + 1;
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best
}

/// Symmetrized relator set with positions: every rotation of every relator and
/// of its inverse.
fn symmetrized(rels: &[Word]) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for r in rels {
        for w in [r.clone(), r.inverse()] {
            for s in 0..w.len() {
                out.push(w.rotate(s).letters().to_vec());
            }
        }
    }
    out
}

fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pieces {
    pub pieces: BTreeSet<Word>,
    pub max_len: usize,
}

/// All common prefixes between distinct positions of the symmetrized relator set.
pub fn pieces_of(n: u32, rels: &[Word]) -> Pieces {
    let sym = symmetrized(rels);
    let mut pieces = BTreeSet::new();
    let mut max_len = 0;
    for i in 0..sym.len() {
        for j in (i + 1)..sym.len() {
            let l = common_prefix(&sym[i], &sym[j]);
            max_len = max_len.max(l);
            for len in 1..=l {
                pieces.insert(Word::new(n, sym[i][..len].to_vec()).expect("letters in range"));
            }
        }
    }
    Pieces { pieces, max_len }
}

pub fn pieces(p: &CyclicPresentation) -> Pieces {
    pieces_of(p.rank(), &relators(p))
}

/// Fewest pieces whose product is `r`; `None` when `r` is no such product.
fn min_piece_factorization(r: &[Letter], pieces: &BTreeSet<Word>, n: u32) -> Option<usize> {
    let len = r.len();
    let mut best: Vec<Option<usize>> = vec![None; len + 1];
    best[0] = Some(0);
    for i in 0..len {
        let Some(c) = best[i] else { continue };
        for j in (i + 1)..=len {
            let w = Word::new(n, r[i..j].to_vec()).expect("letters in range");
            if pieces.contains(&w) {
                best[j] = Some(best[j].map_or(c + 1, |b: usize| b.min(c + 1)));
            }
        }
    }
    best[len]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallCancellationProfile {
    /// Largest `p` with C(p); `None` means C(p) for every `p`.
    pub c: Option<usize>,
    /// Largest `q` with T(q) (the girth); `None` means T(q) for every `q`.
    pub t: Option<usize>,
    pub max_piece_len: usize,
}

impl SmallCancellationProfile {
    pub fn satisfies_c(&self, p: usize) -> bool {
        self.c.is_none_or(|c| c >= p)
    }

    pub fn satisfies_t(&self, q: usize) -> bool {
        self.t.is_none_or(|t| t >= q)
    }
}

pub fn small_cancellation_profile(p: &CyclicPresentation) -> Result<SmallCancellationProfile, StarGraphError> {
    let rels = relators(p);
    let pcs = pieces_of(p.rank(), &rels);
    let c = symmetrized(&rels)
        .iter()
        .filter_map(|r| min_piece_factorization(r, &pcs.pieces, p.rank()))
        .min();
    let g = build_star_graph(p)?;
    Ok(SmallCancellationProfile { c, t: girth(&g), max_piece_len: pcs.max_len })
}

/// A closed reduced walk in the star graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleRecord {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub types: String,
    pub alpha: usize,
    pub beta: usize,
    /// Two consecutive X edges (cyclically); never expected for `P_n(m,k)`.
    pub has_xx: bool,
}

impl CycleRecord {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_pure_z(&self) -> bool {
        !self.types.is_empty() && self.types.chars().all(|c| c == 'Z')
    }
}

impl fmt::Display for CycleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "len={} type={} alpha={} beta={}", self.len(), self.types, self.alpha, self.beta)?;
        if self.has_xx {
            write!(f, " XX")?;
        }
        Ok(())
    }
}

/// Encodes a directed edge step as `2*edge + dir`, where `dir = 0` walks
/// `u -> v`.
type Step = u32;

fn canonical_steps(steps: &[Step]) -> Vec<Step> {
    let len = steps.len();
    let reversed: Vec<Step> = steps.iter().rev().map(|s| s ^ 1).collect();
    let mut best: Option<Vec<Step>> = None;
    for seq in [steps, &reversed[..]] {
        for r in 0..len {
            let cand: Vec<Step> = seq[r..].iter().chain(&seq[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Closed walks of length `<= maxlen` with no immediate reversal (cyclically),
/// up to rotation and reflection. Walks may repeat vertices, so powers of a
/// shorter cycle are listed too.
pub fn short_cycles(g: &StarGraph, maxlen: usize) -> Result<Vec<CycleRecord>, StarGraphError> {
    if maxlen > MAX_CYCLE_LEN {
        return Err(StarGraphError::BudgetExceeded(maxlen));
    }
    let mut found: BTreeSet<Vec<Step>> = BTreeSet::new();
    let mut path: Vec<Step> = Vec::with_capacity(maxlen);
    for start in 0..g.vertex_count() {
        dfs(g, start, start, maxlen, &mut path, &mut found);
    }
    let mut out: Vec<CycleRecord> = found.into_iter().map(|steps| record(g, &steps)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.types.cmp(&b.types)).then_with(|| a.cmp(b)));
    Ok(out)
}

fn step_target(g: &StarGraph, s: Step) -> usize {
    let e = &g.edges[(s >> 1) as usize];
    if s & 1 == 0 {
        e.v
    } else {
        e.u
    }
}

fn step_source(g: &StarGraph, s: Step) -> usize {
    let e = &g.edges[(s >> 1) as usize];
    if s & 1 == 0 {
        e.u
    } else {
        e.v
    }
}

fn dfs(g: &StarGraph, start: usize, at: usize, maxlen: usize, path: &mut Vec<Step>, found: &mut BTreeSet<Vec<Step>>) {
    if path.len() == maxlen {
        return;
    }
    let last_edge = path.last().map(|s| s >> 1);
    let mut seen_loop = BTreeSet::new();
    for &(eid, _) in &g.adj[at] {
        if Some(eid as u32) == last_edge {
            continue;
        }
        let e = &g.edges[eid];
        // a loop appears twice in adj; walk it in both directions once each
        let dirs: Vec<u32> = if e.u == e.v {
            if !seen_loop.insert(eid) {
                continue;
            }
            vec![0, 1]
        } else if e.u == at {
            vec![0]
        } else {
            vec![1]
        };
        for dir in dirs {
            let s = (eid as u32) << 1 | dir;
            path.push(s);
            let to = step_target(g, s);
            if to == start && (path[0] >> 1 != eid as u32 || path.len() == 1 && e.u == e.v) {
                found.insert(canonical_steps(path));
            }
            dfs(g, start, to, maxlen, path, found);
            path.pop();
        }
    }
}

fn record(g: &StarGraph, steps: &[Step]) -> CycleRecord {
    let edges: Vec<usize> = steps.iter().map(|s| (s >> 1) as usize).collect();
    let vertices: Vec<usize> = steps.iter().map(|&s| step_source(g, s)).collect();
    let tys: Vec<Option<EdgeType>> = edges.iter().map(|&e| g.edges[e].ty).collect();
    let types: String = tys.iter().map(|t| t.map_or('-', |t| t.to_string().chars().next().unwrap_or('-'))).collect();
    let alpha = tys.iter().filter(|t| **t == Some(EdgeType::Z)).count();
    let beta = tys.iter().filter(|t| **t == Some(EdgeType::Y)).count();
    let len = tys.len();
    let has_xx = len >= 2
        && (0..len).any(|i| tys[i] == Some(EdgeType::X) && tys[(i + 1) % len] == Some(EdgeType::X));
    CycleRecord { vertices, edges, types, alpha, beta, has_xx }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusReport {
    pub params: FibParams,
    pub order: u32,
    pub cycles: Vec<CycleRecord>,
    pub violations: Vec<CycleRecord>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every closed reduced walk of length at most 7 is a pure Z walk
/// whose length is a multiple of `p`.
pub fn interior_vertex_census(n: u32, m: u32, k: u32, p: u32) -> Result<CensusReport, StarGraphError> {
    let fp = params::derive(n, m, k)?;
    if !(3..=5).contains(&p) {
        return Err(StarGraphError::Precondition(format!("p={p} not in {{3,4,5}}")));
    }
    if !params::has_order(k, n, p) {
        return Err(StarGraphError::Precondition(format!("k={k} does not have additive order {p} mod {n}")));
    }
    if n <= 7 * p {
        return Err(StarGraphError::Precondition(format!("n={n} <= 7p={}", 7 * p)));
    }
    if m == 0 || m == k {
        return Err(StarGraphError::Precondition("need 1 <= m < n with m != k".into()));
    }
    fp.require_coprime()?;
    let g = fib_star_graph(n, m, k)?;
    let cycles = short_cycles(&g, 7)?;
    let violations = cycles
        .iter()
        .filter(|c| !c.is_pure_z() || c.len() % p as usize != 0)
        .cloned()
        .collect();
    Ok(CensusReport { params: fp, order: p, cycles, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    /// Brute-force girth oracle: shortest closed non-backtracking walk found
    /// by exhaustive enumeration of walks.
    fn brute_girth(g: &StarGraph, cap: usize) -> Option<usize> {
        (1..=cap).find(|&l| short_cycles(g, l).unwrap().iter().any(|c| c.len() == l))
    }

    #[test]
    fn typed_edge_rules() {
        for (n, m, k) in [(10u32, 7u32, 1u32), (5, 1, 2), (13, 4, 9), (8, 0, 3)] {
            let g = fib_star_graph(n, m, k).unwrap();
            let p = params::derive(n, m, k).unwrap();
            assert_eq!(g.vertex_count(), 2 * n as usize);
            assert_eq!(g.edges().len(), 3 * n as usize);
            for ty in [EdgeType::X, EdgeType::Y, EdgeType::Z] {
                assert_eq!(g.count_type(ty), n as usize);
            }
            let n_us = n as usize;
            let mut xs = BTreeSet::new();
            let mut ys = BTreeSet::new();
            let mut zs = BTreeSet::new();
            for i in 0..n_us {
                xs.insert((i, n_us + (i + m as usize) % n_us));
                let (y0, y1) = (i, (i + p.b as usize) % n_us);
                ys.insert((y0.min(y1), y0.max(y1)));
                let (z0, z1) = (n_us + i, n_us + (i + p.a as usize) % n_us);
                zs.insert((z0.min(z1), z0.max(z1)));
            }
            for e in g.edges() {
                let key = (e.u.min(e.v), e.u.max(e.v));
                match e.ty.unwrap() {
                    EdgeType::X => assert!(xs.contains(&key), "{e:?}"),
                    EdgeType::Y => assert!(ys.contains(&key), "{e:?}"),
                    EdgeType::Z => assert!(zs.contains(&key), "{e:?}"),
                }
            }
            let deg: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            assert_eq!(deg, 6 * n as usize);
            assert!((0..g.vertex_count()).all(|v| g.degree(v) == 3));
        }
    }

    #[test]
    fn z_edges_for_h10_7() {
        let g = fib_star_graph(10, 7, 1).unwrap();
        for e in g.edges().iter().filter(|e| e.ty == Some(EdgeType::Z)) {
            let (a, b) = (e.u - 10, e.v - 10);
            assert!((a + 1) % 10 == b || (b + 1) % 10 == a);
        }
        let g = fib_star_graph(5, 1, 2).unwrap();
        for e in g.edges().iter().filter(|e| e.ty == Some(EdgeType::Y)) {
            assert!(e.u < 5 && e.v < 5);
            assert!((e.u + 1) % 5 == e.v || (e.v + 1) % 5 == e.u);
        }
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&fib_star_graph(8, 1, 2).unwrap()), Some(4));
        assert!(girth(&fib_star_graph(9, 1, 2).unwrap()).unwrap() >= 5);
        assert!(girth(&fib_star_graph(12, 6, 1).unwrap()).unwrap() >= 6);
        for (n, m, k) in [(8, 1, 2), (9, 1, 2), (12, 6, 1), (7, 3, 1), (10, 7, 1), (6, 2, 1)] {
            let g = fib_star_graph(n, m, k).unwrap();
            assert_eq!(girth(&g), brute_girth(&g, 8), "({n},{m},{k})");
        }
    }

    #[test]
    fn girth_of_forest_and_multi_edges() {
        // relators x0 x1 and x1 x0 give each of {x0, X1}, {x1, X0} twice
        let p = CyclicPresentation::new(Word::parse(2, "x0 x1").unwrap()).unwrap();
        let g = build_star_graph(&p).unwrap();
        assert_eq!(girth(&g), Some(2));
        let g = StarGraph::from_relators(3, &[Word::parse(3, "x0 x1 x2").unwrap()]).unwrap();
        assert_eq!(girth(&g), None);
        let g = StarGraph::from_relators(2, &[Word::parse(2, "x0 x0").unwrap()]).unwrap();
        assert_eq!(girth(&g), Some(2));
        assert_eq!(short_cycles(&g, 2).unwrap().len(), 1);
    }

    #[test]
    fn pieces_examples() {
        for (n, m, k) in [(9u32, 1u32, 2u32), (10, 7, 1), (11, 4, 1), (13, 2, 5)] {
            let p = CyclicPresentation::fibonacci_type(n, m, k).unwrap();
            assert_eq!(pieces(&p).max_len, 1);
        }
        let p2 = CyclicPresentation::new(Word::parse(2, "x0 x1").unwrap()).unwrap();
        assert_eq!(pieces(&p2).max_len, 2);
        let single = pieces_of(2, &[Word::parse(2, "x0").unwrap()]);
        assert!(single.pieces.is_empty());
        let p = CyclicPresentation::new(Word::parse(2, "x0").unwrap()).unwrap();
        assert!(pieces(&p).pieces.is_empty());
    }

    #[test]
    fn profile_examples() {
        let prof = |n, m, k| small_cancellation_profile(&CyclicPresentation::fibonacci_type(n, m, k).unwrap()).unwrap();
        assert!(prof(9, 1, 2).satisfies_t(5));
        assert!(prof(11, 4, 1).satisfies_t(6));
        assert!(prof(8, 4, 1).satisfies_t(6));
        assert!(!prof(8, 1, 2).satisfies_t(5));
        assert_eq!(prof(9, 1, 2).c, Some(3));
        assert_eq!(prof(9, 1, 2).max_piece_len, 1);
    }

    #[test]
    fn short_cycle_examples() {
        let types = |n, m, k| -> BTreeSet<(usize, String)> {
            short_cycles(&fib_star_graph(n, m, k).unwrap(), 7)
                .unwrap()
                .into_iter()
                .map(|c| (c.len(), c.types))
                .collect()
        };
        let t = types(24, 1, 8);
        assert_eq!(t, [(3, "ZZZ".to_string()), (6, "ZZZZZZ".to_string())].into_iter().collect());
        let t = types(36, 1, 9);
        assert_eq!(t, [(4, "ZZZZ".to_string())].into_iter().collect());
        let t = types(40, 1, 8);
        assert_eq!(t, [(5, "ZZZZZ".to_string())].into_iter().collect());
        assert!(short_cycles(&fib_star_graph(24, 1, 8).unwrap(), 13).is_err());
    }

    #[test]
    fn short_cycles_count_distinct_walks() {
        // The Z triangles of P_24(1,8): 8 of length 3 and their squares.
        let cycles = short_cycles(&fib_star_graph(24, 1, 8).unwrap(), 7).unwrap();
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 8);
        assert_eq!(cycles.iter().filter(|c| c.len() == 6).count(), 8);
        assert!(cycles.iter().all(|c| !c.has_xx));
        let line = cycles[0].to_string();
        assert_eq!(line, "len=3 type=ZZZ alpha=3 beta=0");
    }

    #[test]
    fn census_examples() {
        assert!(interior_vertex_census(24, 1, 8, 3).unwrap().passed());
        assert!(interior_vertex_census(32, 1, 8, 4).unwrap().passed());
        assert!(interior_vertex_census(40, 3, 8, 5).unwrap().passed());
        assert!(interior_vertex_census(21, 1, 7, 3).is_err());
        assert!(interior_vertex_census(24, 1, 9, 3).is_err());
        assert!(interior_vertex_census(24, 2, 8, 3).is_err());
    }

    #[test]
    fn cycles_counts_consistent_with_types() {
        let g = fib_star_graph(13, 3, 5).unwrap();
        for c in short_cycles(&g, 8).unwrap() {
            assert_eq!(c.alpha, c.types.matches('Z').count());
            assert_eq!(c.beta, c.types.matches('Y').count());
            assert!(!c.has_xx);
            // closed walk
            let first = c.vertices[0];
            let last_edge = &g.edges()[*c.edges.last().unwrap()];
            let last_v = *c.vertices.last().unwrap();
            let other = if last_edge.u == last_v { last_edge.v } else { last_edge.u };
            assert_eq!(other, first);
        }
    }
}
