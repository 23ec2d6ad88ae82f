//! Todd-Coxeter coset enumeration.
//!
//! Cosets are numbered from 1; 0 marks an undefined table entry. Column `2g`
//! is generator `x_g`, column `2g + 1` its inverse. Coincidences are handled
//! with a union-find forest. When the table fills up, a lookahead pass scans
//! every live coset without defining new ones, then dead rows are compacted
//! away and enumeration resumes.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{relators, CyclicPresentation, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("max_cosets must be at least 1")]
    ZeroLimit,
    #[error("max_cosets {0} exceeds the table index range")]
    LimitTooLarge(usize),
    #[error("subgroup generator has rank {got}, presentation has rank {want}")]
    RankMismatch { got: u32, want: u32 },
    #[error(transparent)]
    Presentation(#[from] crate::words::WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Strategy {
    /// Relator-based definitions, row by row.
    #[default]
    Hlt,
    /// Definitions at the first undefined entry, each followed by deduction processing.
    Felsch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CosetOutcome {
    Closed { order: u64 },
    Overflow { limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CosetStats {
    /// Cosets defined over the whole run.
    pub defined: u64,
    pub coincidences: u64,
    pub max_live: usize,
    pub lookaheads: u32,
    pub compactions: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetResult {
    pub outcome: CosetOutcome,
    pub stats: CosetStats,
    /// The compacted table on closure.
    #[serde(skip)]
    pub table: Option<CosetTable>,
}

impl CosetResult {
    pub fn order(&self) -> Option<u64> {
        match self.outcome {
            CosetOutcome::Closed { order } => Some(order),
            CosetOutcome::Overflow { .. } => None,
        }
    }
}

/// A closed coset table with cosets `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    cols: usize,
    len: usize,
    data: Vec<u32>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn columns(&self) -> usize {
        self.cols
    }

    /// Image of coset `c` under column `x`.
    pub fn get(&self, c: u32, x: usize) -> u32 {
        self.data[c as usize * self.cols + x]
    }

    pub fn act(&self, c: u32, l: Letter) -> u32 {
        self.get(c, col(l) as usize)
    }

    /// Traces `w` from coset `c`.
    pub fn trace(&self, c: u32, w: &Word) -> u32 {
        w.letters().iter().fold(c, |c, &l| self.act(c, l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupOrder {
    Known(u64),
    Unknown { limit: usize },
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Known(o) => write!(f, "{o}"),
            GroupOrder::Unknown { limit } => write!(f, "unknown (coset limit {limit} reached)"),
        }
    }
}

fn col(l: Letter) -> u8 {
    (2 * l.gen + l.inverse as u32) as u8
}

#[inline]
fn inv(x: u8) -> u8 {
    x ^ 1
}

struct Full;

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    limit: usize,
    queue: Vec<u32>,
    deductions: Vec<(u32, u8)>,
    felsch: bool,
    stats: CosetStats,
    live: usize,
}

impl Enumerator {
    fn new(cols: usize, limit: usize, felsch: bool) -> Self {
        let mut e = Enumerator {
            cols,
            table: vec![0; 2 * cols],
            parent: vec![0, 1],
            limit,
            queue: Vec::new(),
            deductions: Vec::new(),
            felsch,
            stats: CosetStats { defined: 1, max_live: 1, ..Default::default() },
            live: 1,
        };
        e.table.reserve(cols * limit.min(1 << 20));
        e
    }

    /// Rows allocated, live or dead (excluding the dummy row 0).
    fn rows(&self) -> usize {
        self.parent.len() - 1
    }

    #[inline]
    fn get(&self, c: u32, x: u8) -> u32 {
        self.table[c as usize * self.cols + x as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, x: u8, v: u32) {
        self.table[c as usize * self.cols + x as usize] = v;
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: u8) -> Result<u32, Full> {
        if self.rows() >= self.limit {
            return Err(Full);
        }
        let d = self.parent.len() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(0, self.cols));
        self.set(c, x, d);
        self.set(d, inv(x), c);
        self.stats.defined += 1;
        self.live += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        if self.felsch {
            self.deductions.push((c, x));
        }
        Ok(d)
    }

    fn deduce(&mut self, f: u32, x: u8, b: u32) {
        self.set(f, x, b);
        self.set(b, inv(x), f);
        if self.felsch {
            self.deductions.push((f, x));
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (phi, psi) = (self.rep(k), self.rep(l));
        if phi == psi {
            return;
        }
        let (mu, nu) = (phi.min(psi), phi.max(psi));
        self.parent[nu as usize] = mu;
        self.queue.push(nu);
        self.live -= 1;
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        if a == b {
            return;
        }
        self.stats.coincidences += 1;
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols as u8 {
                let d = self.get(g, x);
                if d == 0 {
                    continue;
                }
                self.set(d, inv(x), 0);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let tm = self.get(mu, x);
                if tm != 0 {
                    self.merge(nu, tm);
                    continue;
                }
                let tn = self.get(nu, inv(x));
                if tn != 0 {
                    self.merge(mu, tn);
                    continue;
                }
                self.deduce(mu, x, nu);
            }
        }
    }

    /// Scans `w` at `a`, defining new cosets when `fill` is set.
    fn scan(&mut self, a: u32, w: &[u8], fill: bool) -> Result<(), Full> {
        let (mut f, mut b) = (a, a);
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j {
                let t = self.get(f, w[i as usize]);
                if t == 0 {
                    break;
                }
                f = t;
                i += 1;
            }
            if i > j {
                if f != a {
                    self.coincidence(f, a);
                }
                return Ok(());
            }
            while j >= i {
                let t = self.get(b, inv(w[j as usize]));
                if t == 0 {
                    break;
                }
                b = t;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                self.deduce(f, w[i as usize], b);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }

    fn process_deductions(&mut self, starts: &[Vec<Vec<u8>>]) {
        while let Some((a, x)) = self.deductions.pop() {
            if self.is_live(a) {
                for w in &starts[x as usize] {
                    if !self.is_live(a) {
                        break;
                    }
                    let _ = self.scan(a, w, false);
                }
            }
            let a = self.rep(a);
            let b = self.get(a, x);
            if b != 0 && self.is_live(b) {
                for w in &starts[inv(x) as usize] {
                    if !self.is_live(b) {
                        break;
                    }
                    let _ = self.scan(b, w, false);
                }
            }
        }
    }

    fn lookahead(&mut self, rels: &[Vec<u8>]) {
        self.stats.lookaheads += 1;
        let felsch = self.felsch;
        self.felsch = false;
        let mut c = 1u32;
        while (c as usize) <= self.rows() {
            for w in rels {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c, w, false);
            }
            c += 1;
        }
        self.felsch = felsch;
        self.deductions.clear();
    }

    /// True when every live row is full and every relator closes at every coset.
    fn is_closed(&mut self, rels: &[Vec<u8>]) -> bool {
        for c in 1..=self.rows() as u32 {
            if !self.is_live(c) {
                continue;
            }
            if (0..self.cols as u8).any(|x| self.get(c, x) == 0) {
                return false;
            }
            for w in rels {
                let end = w.iter().fold(c, |d, &x| self.get(d, x));
                if end != c {
                    return false;
                }
            }
        }
        true
    }

    /// Renumbers live cosets in order; returns the new index of the first
    /// live coset at or after `from`.
    fn compact(&mut self, from: u32) -> u32 {
        self.stats.compactions += 1;
        let rows = self.rows();
        let mut map = vec![0u32; rows + 1];
        let mut next = 0u32;
        let mut resume = None;
        for c in 1..=rows as u32 {
            if self.is_live(c) {
                next += 1;
                map[c as usize] = next;
            }
            if c >= from && resume.is_none() && self.is_live(c) {
                resume = Some(next);
            }
        }
        let mut table = vec![0u32; (next as usize + 1) * self.cols];
        for c in 1..=rows as u32 {
            let nc = map[c as usize];
            if nc == 0 {
                continue;
            }
            for x in 0..self.cols {
                let v = self.table[c as usize * self.cols + x];
                table[nc as usize * self.cols + x] = if v == 0 { 0 } else { map[v as usize] };
            }
        }
        self.table = table;
        self.parent = (0..=next).collect();
        self.live = next as usize;
        resume.unwrap_or(next + 1)
    }

    fn finish(mut self) -> CosetResult {
        self.compact(1);
        let len = self.rows();
        CosetResult {
            outcome: CosetOutcome::Closed { order: len as u64 },
            stats: self.stats,
            table: Some(CosetTable { cols: self.cols, len, data: self.table }),
        }
    }

    fn overflow(self) -> CosetResult {
        CosetResult { outcome: CosetOutcome::Overflow { limit: self.limit }, stats: self.stats, table: None }
    }
}

fn word_cols(w: &Word) -> Vec<u8> {
    w.letters().iter().map(|&l| col(l)).collect()
}

/// Coset enumeration of `subgroup` in the group of `p`, HLT strategy.
pub fn enumerate(p: &CyclicPresentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetResult, CosetError> {
    enumerate_with(p, subgroup, max_cosets, Strategy::Hlt)
}

pub fn enumerate_with(
    p: &CyclicPresentation,
    subgroup: &[Word],
    max_cosets: usize,
    strategy: Strategy,
) -> Result<CosetResult, CosetError> {
    if max_cosets == 0 {
        return Err(CosetError::ZeroLimit);
    }
    if max_cosets >= u32::MAX as usize {
        return Err(CosetError::LimitTooLarge(max_cosets));
    }
    for h in subgroup {
        if h.rank() != p.rank() {
            return Err(CosetError::RankMismatch { got: h.rank(), want: p.rank() });
        }
    }
    let cols = 2 * p.rank() as usize;
    let rels: Vec<Vec<u8>> = relators(p)
        .iter()
        .map(|r| word_cols(&crate::words::reduce(r, true)))
        .filter(|w| !w.is_empty())
        .collect();
    let gens: Vec<Vec<u8>> = subgroup.iter().map(|h| word_cols(&crate::words::reduce(h, false))).collect();
    let mut e = Enumerator::new(cols, max_cosets, strategy == Strategy::Felsch);
    let result = match strategy {
        Strategy::Hlt => run_hlt(&mut e, &rels, &gens),
        Strategy::Felsch => run_felsch(&mut e, &rels, &gens),
    }
    ;
    Ok(match result {
        Ok(()) => e.finish(),
        Err(()) => e.overflow(),
    })
}

impl Enumerator {
    /// Called on a full table: lookahead, then compaction. Returns the new
    /// resume position, or `Err` when nothing could be reclaimed.
    fn relieve(&mut self, rels: &[Vec<u8>], at: u32) -> Result<Option<u32>, ()> {
        self.lookahead(rels);
        if self.is_closed(rels) {
            return Ok(None);
        }
        if self.live >= self.limit {
            return Err(());
        }
        Ok(Some(self.compact(at)))
    }
}

fn run_hlt(e: &mut Enumerator, rels: &[Vec<u8>], gens: &[Vec<u8>]) -> Result<(), ()> {
    // subgroup generators at coset 1; restart from scratch is never needed
    // because compaction keeps coset 1 as coset 1
    for h in gens {
        while e.scan(1, h, true).is_err() {
            if e.relieve(rels, 1)?.is_none() { return Ok(()) }
        }
    }
    let mut a = 1u32;
    'outer: while (a as usize) <= e.rows() {
        if e.is_live(a) {
            for w in rels {
                if !e.is_live(a) {
                    break;
                }
                if e.scan(a, w, true).is_err() {
                    match e.relieve(rels, a)? {
                        None => return Ok(()),
                        Some(na) => {
                            a = na;
                            continue 'outer;
                        }
                    }
                }
            }
            for x in 0..e.cols as u8 {
                if e.is_live(a) && e.get(a, x) == 0 && e.define(a, x).is_err() {
                    match e.relieve(rels, a)? {
                        None => return Ok(()),
                        Some(na) => {
                            a = na;
                            continue 'outer;
                        }
                    }
                }
            }
        }
        a += 1;
    }
    Ok(())
}

fn run_felsch(e: &mut Enumerator, rels: &[Vec<u8>], gens: &[Vec<u8>]) -> Result<(), ()> {
    let mut starts: Vec<Vec<Vec<u8>>> = vec![Vec::new(); e.cols];
    for r in rels {
        let inverse: Vec<u8> = r.iter().rev().map(|&x| inv(x)).collect();
        for w in [r, &inverse] {
            for s in 0..w.len() {
                let rot: Vec<u8> = w[s..].iter().chain(&w[..s]).copied().collect();
                if !starts[rot[0] as usize].contains(&rot) {
                    starts[rot[0] as usize].push(rot);
                }
            }
        }
    }
    for h in gens {
        while e.scan(1, h, true).is_err() {
            if e.relieve(rels, 1)?.is_none() {
                return Ok(());
            }
        }
        e.process_deductions(&starts);
    }
    let mut a = 1u32;
    'outer: while (a as usize) <= e.rows() {
        for x in 0..e.cols as u8 {
            if !e.is_live(a) {
                break;
            }
            if e.get(a, x) != 0 {
                continue;
            }
            if e.define(a, x).is_err() {
                match e.relieve(rels, a)? {
                    None => return Ok(()),
                    Some(na) => {
                        a = na;
                        continue 'outer;
                    }
                }
            }
            e.process_deductions(&starts);
        }
        a += 1;
    }
    Ok(())
}

/// Order of `G_n(m,k)` by enumerating cosets of the trivial subgroup.
/// Tries HLT first and falls back to the Felsch strategy on overflow.
pub fn group_order(n: u32, m: u32, k: u32, max_cosets: usize) -> Result<GroupOrder, CosetError> {
    let p = CyclicPresentation::fibonacci_type(n, m, k)?;
    for strategy in [Strategy::Hlt, Strategy::Felsch] {
        if let Some(o) = enumerate_with(&p, &[], max_cosets, strategy)?.order() {
            return Ok(GroupOrder::Known(o));
        }
    }
    Ok(GroupOrder::Unknown { limit: max_cosets })
}
