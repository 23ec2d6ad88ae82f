//! Random reduced diagrams grown by gluing faces to the boundary.
//!
//! Faces read either a relator or its inverse. Every move refuses to create
//! a cancelling pair, so the result is always a reduced disk diagram with
//! simple boundary.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{DiagramError, Edge, EdgeRef, Face, VanKampenDiagram};
use crate::params::additive_order;
use crate::words::Letter;

type Tri = [Letter; 3];

#[derive(Debug, Clone)]
pub struct Grower {
    n: u32,
    m: u32,
    k: u32,
    nv: usize,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    /// Whether each face reads a relator (true) or an inverse relator.
    dirs: Vec<bool>,
    boundary: Vec<EdgeRef>,
}

impl Grower {
    fn empty(n: u32, m: u32, k: u32) -> Self {
        Grower { n, m, k, nv: 0, edges: Vec::new(), faces: Vec::new(), dirs: Vec::new(), boundary: Vec::new() }
    }

    fn md(&self, x: i64) -> u32 {
        x.rem_euclid(self.n as i64) as u32
    }

    fn vertex(&mut self) -> usize {
        self.nv += 1;
        self.nv - 1
    }

    fn edge(&mut self, from: usize, to: usize, gen: i64) -> usize {
        let gen = self.md(gen);
        self.edges.push(Edge { id: self.edges.len() as i64, from, to, gen });
        self.edges.len() - 1
    }

    /// A new edge read as `l` when walking from `u` to `v`.
    fn edge_reading(&mut self, u: usize, v: usize, l: Letter) -> EdgeRef {
        if l.inverse {
            EdgeRef::bwd(self.edge(v, u, l.gen as i64))
        } else {
            EdgeRef::fwd(self.edge(u, v, l.gen as i64))
        }
    }

    fn face(&mut self, cycle: Vec<EdgeRef>, dir: bool) {
        self.faces.push(Face { id: self.faces.len() as i64, cycle });
        self.dirs.push(dir);
    }

    fn start(&self, r: EdgeRef) -> usize {
        let e = &self.edges[r.edge];
        if r.forward {
            e.from
        } else {
            e.to
        }
    }

    fn end(&self, r: EdgeRef) -> usize {
        self.start(r.reversed())
    }

    fn letter(&self, r: EdgeRef) -> Letter {
        Letter::new(self.edges[r.edge].gen, !r.forward)
    }

    fn splice(&mut self, pos: usize, remove: usize, with: Vec<EdgeRef>) {
        self.boundary.rotate_left(pos);
        self.boundary.splice(0..remove, with);
    }

    /// `x_i x_{i+m} x_{i+k}^{-1}` rotated to start at corner `c`, or for
    /// `dir = false` the inverse relator rotated so that it starts with the
    /// reversal of corner `c`.
    fn corner_word(&self, i: i64, c: usize, dir: bool) -> Tri {
        let (m, k) = (self.m as i64, self.k as i64);
        let w = if dir {
            [Letter::pos(self.md(i)), Letter::pos(self.md(i + m)), Letter::neg(self.md(i + k))]
        } else {
            [Letter::pos(self.md(i + k)), Letter::neg(self.md(i + m)), Letter::neg(self.md(i))]
        };
        let s = if dir { c } else { [1, 0, 2][c] };
        [w[s], w[(s + 1) % 3], w[(s + 2) % 3]]
    }

    /// Star-graph edges leaving walk vertex `a`: `(edge id, dir, face word)`
    /// where the face word starts with `a` and its corner steps to the
    /// inverse of its second letter.
    fn steps_from(&self, a: Letter) -> Vec<(usize, bool, Tri)> {
        let mut out = Vec::new();
        for i in 0..self.n as i64 {
            for c in 0..3 {
                for dir in [true, false] {
                    let w = self.corner_word(i, c, dir);
                    if w[0] == a {
                        out.push((i as usize * 3 + c, dir, w));
                    }
                }
            }
        }
        out
    }

    fn face_with(&self, r: EdgeRef) -> Option<(usize, usize)> {
        self.faces.iter().enumerate().find_map(|(f, face)| face.cycle.iter().position(|&x| x == r).map(|p| (f, p)))
    }

    /// Star-graph edge id of the corner of `f` after position `p`.
    fn corner_id(&self, f: usize, p: usize) -> usize {
        let cyc = &self.faces[f].cycle;
        let (a, b) = (self.letter(cyc[p]), self.letter(cyc[(p + 1) % 3]));
        for i in 0..self.n as i64 {
            for c in 0..3 {
                let w = self.corner_word(i, c, self.dirs[f]);
                if w[0] == a && w[1] == b {
                    return i as usize * 3 + c;
                }
            }
        }
        unreachable!("faces read relators")
    }

    /// Whether a face reading `word` from `r` reversed would cancel against
    /// the face already on `r`.
    fn cancels(&self, word: &Tri, r: EdgeRef) -> bool {
        let Some((f, p)) = self.face_with(r) else { return false };
        let cyc = &self.faces[f].cycle;
        let mirror = [self.letter(r).inv(), self.letter(cyc[(p + 2) % 3]).inv(), self.letter(cyc[(p + 1) % 3]).inv()];
        *word == mirror
    }

    /// One positive face `x_i x_{i+m} x_{i+k}^{-1}`.
    pub fn single_face(n: u32, m: u32, k: u32, i: u32) -> Self {
        let mut g = Grower::empty(n, m, k);
        let (p, q, r) = (g.vertex(), g.vertex(), g.vertex());
        let i = i as i64;
        let a = g.edge(p, q, i);
        let b = g.edge(q, r, i + m as i64);
        let c = g.edge(p, r, i + k as i64);
        let cyc = vec![EdgeRef::fwd(a), EdgeRef::fwd(b), EdgeRef::bwd(c)];
        g.face(cyc.clone(), true);
        g.boundary = cyc;
        g
    }

    /// `p` positive faces around a vertex labelled `Z^p`, where `p` is the
    /// additive order of `k`. Spokes carry `x_i, x_{i+k}, ...`.
    pub fn wheel(n: u32, m: u32, k: u32, i: u32) -> Self {
        let p = additive_order(k, n) as usize;
        let mut g = Grower::empty(n, m, k);
        let c = g.vertex();
        let qs: Vec<usize> = (0..p).map(|_| g.vertex()).collect();
        let (i, m, k) = (i as i64, m as i64, k as i64);
        let spokes: Vec<usize> = (0..p).map(|j| g.edge(c, qs[j], i + j as i64 * k)).collect();
        let rims: Vec<usize> = (0..p).map(|j| g.edge(qs[j], qs[(j + 1) % p], i + j as i64 * k + m)).collect();
        for j in 0..p {
            g.face(vec![EdgeRef::fwd(spokes[j]), EdgeRef::fwd(rims[j]), EdgeRef::bwd(spokes[(j + 1) % p])], true);
        }
        g.boundary = rims.into_iter().map(EdgeRef::fwd).collect();
        g
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Faces that may be glued along boundary edge `pos`, as words read
    /// from that edge reversed. Cancelling choices are left out.
    pub fn attach_options(&self, pos: usize) -> Vec<(bool, [Letter; 3])> {
        let r = self.boundary[pos];
        let a = self.letter(r.reversed());
        let mut out: Vec<(bool, Tri)> = Vec::new();
        for (_, dir, w) in self.steps_from(a) {
            if !self.cancels(&w, r) && !out.contains(&(dir, w)) {
                out.push((dir, w));
            }
        }
        out
    }

    /// Glues a face reading `word` along boundary edge `pos` (reversed),
    /// adding one vertex. The new boundary edges start at index 0.
    pub fn glue(&mut self, pos: usize, dir: bool, word: [Letter; 3]) {
        let r = self.boundary[pos];
        assert_eq!(word[0], self.letter(r.reversed()), "face must read the boundary edge");
        let (u, v) = (self.start(r), self.end(r));
        let z = self.vertex();
        let e1 = self.edge_reading(u, z, word[1]);
        let e2 = self.edge_reading(z, v, word[2]);
        self.face(vec![r.reversed(), e1, e2], dir);
        self.splice(pos, 1, vec![e1, e2]);
    }

    /// Glues a random non-cancelling face along boundary edge `pos`.
    pub fn attach<R: Rng>(&mut self, rng: &mut R, pos: usize) -> bool {
        match self.attach_options(pos).choose(rng) {
            Some(&(dir, w)) => {
                self.glue(pos, dir, w);
                true
            }
            None => false,
        }
    }

    /// Degree of the vertex between boundary edges `pos` and `pos + 1`.
    pub fn corner_degree(&self, pos: usize) -> usize {
        let v = self.end(self.boundary[pos]);
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    /// Closes the corner between boundary edges `pos` and `pos + 1` with one
    /// face reading `word` from the second edge reversed.
    fn fill_with(&mut self, pos: usize, dir: bool, word: Tri) {
        let len = self.boundary.len();
        let (r1, r2) = (self.boundary[pos], self.boundary[(pos + 1) % len]);
        debug_assert_eq!(word[0], self.letter(r2.reversed()));
        debug_assert_eq!(word[1], self.letter(r1.reversed()));
        let (x, y) = (self.start(r1), self.end(r2));
        let f = self.edge_reading(x, y, word[2]);
        self.face(vec![r2.reversed(), r1.reversed(), f], dir);
        self.splice(pos, 2, vec![f]);
    }

    /// Makes the vertex after boundary edge `pos` interior by gluing a fan
    /// of faces around it whose corners follow a non-backtracking walk in
    /// the star graph, with at most `max_faces` faces and final degree at
    /// least `min_degree`. Among walks of least length one is chosen at
    /// random.
    pub fn close_corner<R: Rng>(&mut self, rng: &mut R, pos: usize, max_faces: usize, min_degree: usize) -> bool {
        let len = self.boundary.len();
        if len < 4 {
            return false;
        }
        let (r1, r2) = (self.boundary[pos], self.boundary[(pos + 1) % len]);
        let (s, t) = (self.letter(r2).inv(), self.letter(r1));
        let first_block = self.face_with(r2).map(|(f, p)| self.corner_id(f, (p + 2) % 3));
        let last_block = self.face_with(r1).map(|(f, p)| self.corner_id(f, p));
        // breadth-first over (walk vertex, last star-graph edge)
        type State = (Letter, Option<usize>);
        let mut prev: HashMap<State, (State, bool, Tri)> = HashMap::new();
        let mut queue: VecDeque<(State, usize)> = VecDeque::from([((s, first_block), 0)]);
        let mut goal = None;
        while let Some(((a, last), depth)) = queue.pop_front() {
            if depth >= max_faces {
                break;
            }
            let mut steps = self.steps_from(a);
            steps.shuffle(rng);
            for (id, dir, w) in steps {
                if Some(id) == last {
                    continue;
                }
                let b = w[1].inv();
                let st = (b, Some(id));
                if st == (s, first_block) {
                    continue;
                }
                if b == t && Some(id) != last_block {
                    prev.insert(st, ((a, last), dir, w));
                    goal = Some(st);
                    break;
                }
                if depth + 1 < max_faces && !prev.contains_key(&st) && st.0 != s {
                    prev.insert(st, ((a, last), dir, w));
                    queue.push_back((st, depth + 1));
                }
            }
            if goal.is_some() {
                break;
            }
        }
        let Some(mut cur) = goal else { return false };
        let mut path = Vec::new();
        while cur != (s, first_block) {
            let (p, dir, w) = prev[&cur];
            path.push((dir, w));
            cur = p;
        }
        path.reverse();
        if self.corner_degree(pos) + path.len() - 1 < min_degree {
            return false;
        }
        // each glued face puts the edge leaving the vertex at index 0 and r1
        // at the end
        let mut at = (pos + 1) % len;
        for &(dir, w) in &path[..path.len() - 1] {
            self.glue(at, dir, w);
            at = 0;
        }
        let last = (at + self.boundary.len() - 1) % self.boundary.len();
        let (dir, w) = path[path.len() - 1];
        self.fill_with(last, dir, w);
        true
    }

    /// Glues a whole positive `Z^p` wheel whose first rim is the backward
    /// boundary edge `pos`.
    pub fn attach_wheel(&mut self, pos: usize) -> bool {
        let r = self.boundary[pos];
        let (n, m, k) = (self.n, self.m as i64, self.k as i64);
        let p = additive_order(self.k, n) as usize;
        if r.forward || p < 2 {
            return false;
        }
        let e = self.edges[r.edge];
        let i = e.gen as i64 - m;
        if self.cancels(&self.corner_word(i, 1, true), r) {
            return false;
        }
        let c = self.vertex();
        let mut qs = vec![e.from, e.to];
        for _ in 2..p {
            let v = self.vertex();
            qs.push(v);
        }
        let spokes: Vec<usize> = (0..p).map(|j| self.edge(c, qs[j], i + j as i64 * k)).collect();
        let mut rims = vec![r.edge];
        for j in 1..p {
            let rim = self.edge(qs[j], qs[(j + 1) % p], i + j as i64 * k + m);
            rims.push(rim);
        }
        for j in 0..p {
            self.face(vec![EdgeRef::fwd(spokes[j]), EdgeRef::fwd(rims[j]), EdgeRef::bwd(spokes[(j + 1) % p])], true);
        }
        self.splice(pos, 1, rims[1..].iter().map(|&x| EdgeRef::fwd(x)).collect());
        true
    }

    pub fn finish(self) -> Result<VanKampenDiagram, DiagramError> {
        let base = self.start(self.boundary[0]);
        VanKampenDiagram::new(
            (self.n, self.m, self.k),
            (0..self.nv as i64).collect(),
            self.edges,
            self.faces,
            self.boundary,
            base,
        )
    }
}

/// Relative weights of the moves and a floor on the degree of vertices
/// made interior by a closing fan.
#[derive(Debug, Clone, Copy)]
pub struct GrowConfig {
    pub steps: usize,
    pub attach: u32,
    pub close: u32,
    pub wheel: u32,
    pub min_close_degree: usize,
    /// Most faces one closing fan may add.
    pub max_fan: usize,
}

impl GrowConfig {
    pub fn standard(steps: usize) -> Self {
        GrowConfig { steps, attach: 3, close: 4, wheel: 1, min_close_degree: 0, max_fan: 10 }
    }

    /// Growth that never creates an interior vertex of degree at most 6.
    pub fn without_small_vertices(steps: usize) -> Self {
        GrowConfig { steps, attach: 3, close: 4, wheel: 0, min_close_degree: 7, max_fan: 10 }
    }
}

/// Presentations with `k` of additive order `p` and `n > 7p`.
pub fn lane_presentation(p: u32) -> Option<(u32, u32, u32)> {
    match p {
        3 => Some((24, 1, 8)),
        4 => Some((32, 1, 8)),
        5 => Some((40, 3, 8)),
        _ => None,
    }
}

pub fn grow<R: Rng>(rng: &mut R, (n, m, k): (u32, u32, u32), cfg: GrowConfig) -> VanKampenDiagram {
    let start = rng.gen_range(0..n);
    let mut g = if cfg.wheel > 0 && rng.gen_bool(0.5) {
        Grower::wheel(n, m, k, start)
    } else {
        Grower::single_face(n, m, k, start)
    };
    let total = (cfg.attach + cfg.close + cfg.wheel).max(1);
    for _ in 0..cfg.steps {
        let len = g.boundary_len();
        let roll = rng.gen_range(0..total);
        if roll < cfg.close {
            let mut order: Vec<usize> = (0..len).collect();
            order.shuffle(rng);
            if order.into_iter().take(6).any(|pos| g.close_corner(rng, pos, cfg.max_fan, cfg.min_close_degree)) {
                continue;
            }
        } else if roll < cfg.close + cfg.wheel && g.attach_wheel(rng.gen_range(0..len)) {
            continue;
        }
        let pos = rng.gen_range(0..len);
        g.attach(rng, pos);
    }
    g.finish().expect("grown diagrams are valid")
}
