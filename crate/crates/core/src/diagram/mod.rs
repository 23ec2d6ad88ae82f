//! Van Kampen diagrams over `P_n(m,k)` as combinatorial disk maps.
//!
//! Orientation convention: every face cycle and the boundary cycle are listed
//! in one common rotational sense, the one in which faces read relators. An
//! interior edge therefore occurs in two faces with opposite signs, and a
//! boundary edge occurs once in a face and once in the boundary with the
//! same sign. A face may read a relator or, as a mirror face, its inverse.

pub mod disk;
pub mod grow;
pub mod lanes;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stargraph::EdgeType;
use crate::words::{fib_word, Letter, Word};

pub use disk::{color_faces, forbidden_patterns, Color, ColoredDisk, PatternMatch};
pub use lanes::{ant_walk, lane_curvature, lane_decomposition, AntLane, LaneCurvature, LaneSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("edge-incidence violation: {0}")]
    EdgeIncidence(String),
    #[error("euler-characteristic violation: V - E + F = {v} - {e} + {f} = {chi}, expected 1")]
    EulerCharacteristic { v: usize, e: usize, f: usize, chi: i64 },
    #[error("face-label violation: face {face} reads {label}, not a relator rotation")]
    FaceLabel { face: i64, label: String },
    #[error("non-simple-boundary: {0}")]
    NonSimpleBoundary(String),
    #[error("not-a-disk: {0}")]
    NotADisk(String),
}

impl DiagramError {
    /// Stable short code naming the violated invariant.
    pub fn code(&self) -> &'static str {
        match self {
            DiagramError::Malformed(_) => "malformed",
            DiagramError::EdgeIncidence(_) => "edge-incidence",
            DiagramError::EulerCharacteristic { .. } => "euler-characteristic",
            DiagramError::FaceLabel { .. } => "face-label",
            DiagramError::NonSimpleBoundary(_) => "non-simple-boundary",
            DiagramError::NotADisk(_) => "not-a-disk",
        }
    }
}

fn malformed(msg: impl Into<String>) -> DiagramError {
    DiagramError::Malformed(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: i64,
    pub from: usize,
    pub to: usize,
    pub gen: u32,
}

/// An edge traversed forwards (`from -> to`, reading `x_gen`) or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub edge: usize,
    pub forward: bool,
}

impl EdgeRef {
    pub fn fwd(edge: usize) -> Self {
        EdgeRef { edge, forward: true }
    }

    pub fn bwd(edge: usize) -> Self {
        EdgeRef { edge, forward: false }
    }

    pub fn reversed(self) -> Self {
        EdgeRef { edge: self.edge, forward: !self.forward }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: i64,
    pub cycle: Vec<EdgeRef>,
}

/// Corner of `face` between `cycle[pos]` and `cycle[pos + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub face: usize,
    pub pos: usize,
    pub vertex: usize,
    pub ty: EdgeType,
}

#[derive(Debug, Clone)]
pub struct VanKampenDiagram {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    vertex_ids: Vec<i64>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    boundary: Vec<EdgeRef>,
    base: usize,
    corners: Vec<Vec<Corner>>,
    /// Corners around each vertex in rotational order.
    rotation: Vec<Vec<(usize, usize)>>,
    on_boundary: Vec<bool>,
    /// Faces (with position) containing each edge.
    edge_faces: Vec<Vec<(usize, usize)>>,
}

impl VanKampenDiagram {
    /// Builds and validates a diagram from dense indices.
    pub fn new(
        (n, m, k): (u32, u32, u32),
        vertex_ids: Vec<i64>,
        edges: Vec<Edge>,
        faces: Vec<Face>,
        boundary: Vec<EdgeRef>,
        base: usize,
    ) -> Result<Self, DiagramError> {
        let mut d = VanKampenDiagram {
            n,
            m,
            k,
            vertex_ids,
            edges,
            faces,
            boundary,
            base,
            corners: Vec::new(),
            rotation: Vec::new(),
            on_boundary: Vec::new(),
            edge_faces: Vec::new(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_id(&self, v: usize) -> i64 {
        self.vertex_ids[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn boundary(&self) -> &[EdgeRef] {
        &self.boundary
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn start(&self, r: EdgeRef) -> usize {
        let e = &self.edges[r.edge];
        if r.forward {
            e.from
        } else {
            e.to
        }
    }

    pub fn end(&self, r: EdgeRef) -> usize {
        let e = &self.edges[r.edge];
        if r.forward {
            e.to
        } else {
            e.from
        }
    }

    pub fn letter(&self, r: EdgeRef) -> Letter {
        Letter::new(self.edges[r.edge].gen, !r.forward)
    }

    pub fn face_label(&self, f: usize) -> Word {
        let ls = self.faces[f].cycle.iter().map(|&r| self.letter(r)).collect();
        Word::new(self.n, ls).expect("generators validated")
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn is_interior_vertex(&self, v: usize) -> bool {
        !self.on_boundary[v]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_faces[e].len() == 1
    }

    /// Faces (with cycle position) that contain edge `e`.
    pub fn edge_faces(&self, e: usize) -> &[(usize, usize)] {
        &self.edge_faces[e]
    }

    /// Number of edge ends at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    pub fn corners(&self, f: usize) -> &[Corner] {
        &self.corners[f]
    }

    pub fn all_corners(&self) -> impl Iterator<Item = &Corner> {
        self.corners.iter().flatten()
    }

    /// Corners at `v` in rotational order; for a boundary vertex the order
    /// runs from one boundary edge to the other.
    pub fn corners_at(&self, v: usize) -> Vec<Corner> {
        self.rotation[v].iter().map(|&(f, p)| self.corners[f][p]).collect()
    }

    /// Faces incident to `v`.
    pub fn faces_at(&self, v: usize) -> Vec<usize> {
        let mut fs: Vec<usize> = self.rotation[v].iter().map(|&(f, _)| f).collect();
        fs.sort_unstable();
        fs.dedup();
        fs
    }

    fn validate(&mut self) -> Result<(), DiagramError> {
        let (n, m, k) = (self.n, self.m, self.k);
        if n < 2 || m >= n || k >= n {
            return Err(malformed(format!("parameters (n,m,k)=({n},{m},{k}) out of range")));
        }
        if m == 0 || k == 0 || m == k {
            return Err(malformed("need 0 < m, k < n and m != k so the relator is cyclically reduced"));
        }
        let nv = self.vertex_ids.len();
        for e in &self.edges {
            if e.from >= nv || e.to >= nv {
                return Err(malformed(format!("edge {} has an unknown endpoint", e.id)));
            }
            if e.gen >= n {
                return Err(malformed(format!("edge {} has generator {} >= n", e.id, e.gen)));
            }
        }
        let ne = self.edges.len();
        let check_cycle = |what: String, cyc: &[EdgeRef]| -> Result<(), DiagramError> {
            if cyc.is_empty() {
                return Err(malformed(format!("{what} is empty")));
            }
            if let Some(r) = cyc.iter().find(|r| r.edge >= ne) {
                return Err(malformed(format!("{what} refers to unknown edge index {}", r.edge)));
            }
            for i in 0..cyc.len() {
                let (a, b) = (cyc[i], cyc[(i + 1) % cyc.len()]);
                if self.end(a) != self.start(b) {
                    return Err(malformed(format!("{what} is not a closed path at position {i}")));
                }
            }
            Ok(())
        };
        for f in &self.faces {
            check_cycle(format!("face {}", f.id), &f.cycle)?;
        }
        check_cycle("boundary".into(), &self.boundary)?;
        if self.base >= nv || !self.boundary.iter().any(|&r| self.start(r) == self.base) {
            return Err(malformed("base vertex is not on the boundary"));
        }

        // incidence
        let mut edge_faces: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ne];
        let mut face_signs: Vec<Vec<bool>> = vec![Vec::new(); ne];
        for (fi, f) in self.faces.iter().enumerate() {
            for (p, r) in f.cycle.iter().enumerate() {
                edge_faces[r.edge].push((fi, p));
                face_signs[r.edge].push(r.forward);
            }
        }
        let mut bd_signs: Vec<Vec<bool>> = vec![Vec::new(); ne];
        for r in &self.boundary {
            bd_signs[r.edge].push(r.forward);
        }
        for e in 0..ne {
            let ok = match (face_signs[e].as_slice(), bd_signs[e].as_slice()) {
                ([a, b], []) => a != b,
                ([a], [b]) => a == b,
                _ => false,
            };
            if !ok {
                return Err(DiagramError::EdgeIncidence(format!(
                    "edge {} occurs {} time(s) in faces and {} time(s) in the boundary with incompatible orientation",
                    self.edges[e].id,
                    face_signs[e].len(),
                    bd_signs[e].len()
                )));
            }
        }

        // face labels
        let rel = fib_word(n, m, k).expect("range checked");
        let rel_inv = rel.inverse();
        for (fi, f) in self.faces.iter().enumerate() {
            let w = self.face_label(fi);
            let ok = (0..n as i64).any(|i| {
                let r = crate::words::shift(&rel, i);
                let ri = crate::words::shift(&rel_inv, i);
                w.is_rotation_of(&r) || w.is_rotation_of(&ri)
            });
            if !ok {
                return Err(DiagramError::FaceLabel { face: f.id, label: w.to_string() });
            }
        }

        let chi = nv as i64 - ne as i64 + self.faces.len() as i64;
        if chi != 1 {
            return Err(DiagramError::EulerCharacteristic { v: nv, e: ne, f: self.faces.len(), chi });
        }

        let mut on_boundary = vec![false; nv];
        for &r in &self.boundary {
            let v = self.start(r);
            if on_boundary[v] {
                return Err(DiagramError::NonSimpleBoundary(format!(
                    "vertex {} is visited twice",
                    self.vertex_ids[v]
                )));
            }
            on_boundary[v] = true;
        }

        // corners and vertex rotations
        let mut corners = Vec::with_capacity(self.faces.len());
        let mut at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for (fi, f) in self.faces.iter().enumerate() {
            let len = f.cycle.len();
            let mut cs = Vec::with_capacity(len);
            for p in 0..len {
                let (a, b) = (f.cycle[p], f.cycle[(p + 1) % len]);
                let v = self.end(a);
                cs.push(Corner { face: fi, pos: p, vertex: v, ty: corner_type(self.letter(a), self.letter(b)) });
                at[v].push((fi, p));
            }
            corners.push(cs);
        }
        let succ = |fi: usize, p: usize| -> Option<(usize, usize)> {
            let f = &self.faces[fi];
            let out = f.cycle[(p + 1) % f.cycle.len()];
            edge_faces[out.edge]
                .iter()
                .find(|&&(g, q)| (g, (q + 1) % self.faces[g].cycle.len()) != (fi, (p + 1) % f.cycle.len()) && self.faces[g].cycle[q].forward != out.forward)
                .map(|&(g, q)| (g, q))
        };
        let mut rotation = vec![Vec::new(); nv];
        for v in 0..nv {
            let cs = &at[v];
            if cs.is_empty() {
                return Err(DiagramError::NotADisk(format!("vertex {} lies on no face", self.vertex_ids[v])));
            }
            let start = if on_boundary[v] {
                let has_pred: Vec<(usize, usize)> = cs.iter().filter_map(|&(f, p)| succ(f, p)).collect();
                let starts: Vec<_> = cs.iter().filter(|c| !has_pred.contains(c)).collect();
                if starts.len() != 1 {
                    return Err(DiagramError::NotADisk(format!(
                        "link of boundary vertex {} is not a single path",
                        self.vertex_ids[v]
                    )));
                }
                *starts[0]
            } else {
                *cs.iter().min().expect("nonempty")
            };
            let mut order = vec![start];
            let mut cur = start;
            while let Some(nx) = succ(cur.0, cur.1) {
                if nx == start {
                    break;
                }
                if order.contains(&nx) || order.len() > cs.len() {
                    return Err(DiagramError::NotADisk(format!("link of vertex {} is not simple", self.vertex_ids[v])));
                }
                order.push(nx);
                cur = nx;
            }
            let closed = succ(cur.0, cur.1) == Some(start);
            if order.len() != cs.len() || closed == on_boundary[v] {
                return Err(DiagramError::NotADisk(format!(
                    "link of vertex {} is not a single {}",
                    self.vertex_ids[v],
                    if on_boundary[v] { "path" } else { "cycle" }
                )));
            }
            rotation[v] = order;
        }

        // connectivity through shared edges
        let nf = self.faces.len();
        let mut parent: Vec<usize> = (0..nf).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for ef in &edge_faces {
            if let [(a, _), (b, _)] = ef.as_slice() {
                let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
                parent[ra] = rb;
            }
        }
        let roots = (0..nf).filter(|&f| find(&mut parent, f) == f).count();
        if roots != 1 {
            return Err(DiagramError::NotADisk(format!("{roots} connected components")));
        }

        self.corners = corners;
        self.rotation = rotation;
        self.on_boundary = on_boundary;
        self.edge_faces = edge_faces;
        Ok(())
    }
}

/// Type of the star-graph edge `{a, b^{-1}}` for consecutive letters `a b`
/// of a Fibonacci-type relator or its inverse: X joins a positive vertex to
/// a negative one, Y two positive vertices, Z two negative vertices.
pub fn corner_type(a: Letter, b: Letter) -> EdgeType {
    let (pa, pb) = (!a.inverse, b.inverse);
    match (pa, pb) {
        (true, true) => EdgeType::Y,
        (false, false) => EdgeType::Z,
        _ => EdgeType::X,
    }
}

/// Signed edge reference in the file format: `"+3"`, `"-3"` or an integer
/// (negative meaning reversed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SignedRef {
    id: i64,
    forward: bool,
}

impl Serialize for SignedRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}{}", if self.forward { '+' } else { '-' }, self.id))
    }
}

impl<'de> Deserialize<'de> for SignedRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(SignedRef { id: i.abs(), forward: i >= 0 }),
            Raw::Str(s) => {
                let s = s.trim();
                let (forward, rest) = match s.as_bytes().first() {
                    Some(b'+') => (true, &s[1..]),
                    Some(b'-') => (false, &s[1..]),
                    _ => (true, s),
                };
                let id: i64 = rest.parse().map_err(|_| de::Error::custom(format!("bad edge reference {s:?}")))?;
                if id < 0 {
                    return Err(de::Error::custom(format!("bad edge reference {s:?}")));
                }
                Ok(SignedRef { id, forward })
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    id: i64,
    from: i64,
    to: i64,
    gen: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct FaceDoc {
    id: i64,
    cycle: Vec<SignedRef>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DiagramDoc {
    n: u32,
    m: u32,
    k: u32,
    vertices: Vec<i64>,
    edges: Vec<EdgeDoc>,
    faces: Vec<FaceDoc>,
    boundary: Vec<SignedRef>,
    base: i64,
}

/// Parses the JSON diagram format and checks every diagram invariant.
pub fn parse_and_validate(text: &str) -> Result<VanKampenDiagram, DiagramError> {
    let doc: DiagramDoc = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let mut vidx = HashMap::new();
    for (i, &v) in doc.vertices.iter().enumerate() {
        if vidx.insert(v, i).is_some() {
            return Err(malformed(format!("duplicate vertex id {v}")));
        }
    }
    let vertex = |v: i64| vidx.get(&v).copied().ok_or_else(|| malformed(format!("unknown vertex id {v}")));
    let mut eidx = HashMap::new();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, e) in doc.edges.iter().enumerate() {
        if eidx.insert(e.id, i).is_some() {
            return Err(malformed(format!("duplicate edge id {}", e.id)));
        }
        edges.push(Edge { id: e.id, from: vertex(e.from)?, to: vertex(e.to)?, gen: e.gen });
    }
    let eref = |r: &SignedRef| {
        eidx.get(&r.id)
            .map(|&edge| EdgeRef { edge, forward: r.forward })
            .ok_or_else(|| malformed(format!("unknown edge id {}", r.id)))
    };
    let mut seen_faces = std::collections::HashSet::new();
    let mut faces = Vec::with_capacity(doc.faces.len());
    for f in &doc.faces {
        if !seen_faces.insert(f.id) {
            return Err(malformed(format!("duplicate face id {}", f.id)));
        }
        faces.push(Face { id: f.id, cycle: f.cycle.iter().map(eref).collect::<Result<_, _>>()? });
    }
    let boundary = doc.boundary.iter().map(eref).collect::<Result<_, _>>()?;
    let base = vertex(doc.base)?;
    VanKampenDiagram::new((doc.n, doc.m, doc.k), doc.vertices.clone(), edges, faces, boundary, base)
}

impl VanKampenDiagram {
    /// Serializes to the JSON diagram format.
    pub fn to_json(&self) -> String {
        let sref = |r: &EdgeRef| SignedRef { id: self.edges[r.edge].id, forward: r.forward };
        let doc = DiagramDoc {
            n: self.n,
            m: self.m,
            k: self.k,
            vertices: self.vertex_ids.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc { id: e.id, from: self.vertex_ids[e.from], to: self.vertex_ids[e.to], gen: e.gen })
                .collect(),
            faces: self.faces.iter().map(|f| FaceDoc { id: f.id, cycle: f.cycle.iter().map(sref).collect() }).collect(),
            boundary: self.boundary.iter().map(sref).collect(),
            base: self.vertex_ids[self.base],
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

/// Boundary label read from the base vertex.
pub fn boundary_word(d: &VanKampenDiagram) -> Word {
    let bd = d.boundary();
    let s = bd.iter().position(|&r| d.start(r) == d.base()).expect("base on boundary");
    let ls = bd[s..].iter().chain(&bd[..s]).map(|&r| d.letter(r)).collect();
    Word::new(d.n, ls).expect("generators validated")
}

/// Label of face `f` read in face orientation starting with `cycle[p]`.
fn label_from(d: &VanKampenDiagram, f: usize, p: usize) -> Vec<Letter> {
    let c = &d.faces()[f].cycle;
    (0..c.len()).map(|i| d.letter(c[(p + i) % c.len()])).collect()
}

/// Interior edges whose two faces cancel: read from the shared edge in the
/// same direction, the two face labels agree.
pub fn cancelling_pairs(d: &VanKampenDiagram) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for e in 0..d.edges().len() {
        let [(f, p), (g, q)] = d.edge_faces(e) else { continue };
        let fw = label_from(d, *f, *p);
        // g traverses e the other way; read g backwards starting with e
        let gc = &d.faces()[*g].cycle;
        let gw: Vec<Letter> = (0..gc.len()).map(|i| d.letter(gc[(q + gc.len() - i) % gc.len()]).inv()).collect();
        if fw == gw {
            out.push((e, *f, *g));
        }
    }
    out
}

pub fn is_reduced(d: &VanKampenDiagram) -> bool {
    cancelling_pairs(d).is_empty()
}

/// All corners with their X/Y/Z types.
pub fn corner_labels(d: &VanKampenDiagram) -> Vec<Corner> {
    d.all_corners().copied().collect()
}

/// Corner types around `v` in rotational order.
pub fn vertex_label(d: &VanKampenDiagram, v: usize) -> String {
    d.corners_at(v).iter().map(|c| c.ty.to_string()).collect()
}

/// Vertices whose label contains `XX` (cyclically for interior vertices).
pub fn xx_violations(d: &VanKampenDiagram) -> Vec<usize> {
    (0..d.vertex_count())
        .filter(|&v| {
            let l = vertex_label(d, v);
            if d.is_interior_vertex(v) {
                format!("{l}{l}").contains("XX") && l.len() > 1 || l == "X"
            } else {
                l.contains("XX")
            }
        })
        .collect()
}

/// Exact angle per corner, indexed `[face][pos]`, in degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleAssignment {
    pub angles: Vec<Vec<BigRational>>,
}

impl AngleAssignment {
    pub fn get(&self, c: &Corner) -> &BigRational {
        &self.angles[c.face][c.pos]
    }

    /// Angles from an arbitrary rule.
    pub fn from_fn(d: &VanKampenDiagram, mut f: impl FnMut(&Corner) -> BigRational) -> Self {
        AngleAssignment { angles: d.corners.iter().map(|cs| cs.iter().map(&mut f).collect()).collect() }
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `360/q` at an interior vertex of degree `q`, `29` at a boundary vertex.
pub fn assign_angles(d: &VanKampenDiagram) -> AngleAssignment {
    let deg: Vec<usize> = (0..d.vertex_count()).map(|v| d.degree(v)).collect();
    AngleAssignment::from_fn(d, |c| {
        if d.is_interior_vertex(c.vertex) {
            rational(360, deg[c.vertex] as i64)
        } else {
            rational(29, 1)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureReport {
    pub faces: Vec<BigRational>,
    pub interior_vertices: BTreeMap<usize, BigRational>,
    pub boundary_vertices: BTreeMap<usize, BigRational>,
    pub face_total: BigRational,
    pub interior_total: BigRational,
    pub boundary_total: BigRational,
    pub total: BigRational,
}

impl CurvatureReport {
    pub fn gauss_bonnet_holds(&self) -> bool {
        self.total == rational(360, 1)
    }

    pub fn interior_flat(&self) -> bool {
        self.interior_vertices.values().all(Zero::is_zero)
    }

    pub fn interior_nonpositive(&self) -> bool {
        !self.interior_vertices.values().any(Signed::is_positive)
    }
}

pub fn curvature_report(d: &VanKampenDiagram, a: &AngleAssignment) -> CurvatureReport {
    let faces: Vec<BigRational> = (0..d.faces().len())
        .map(|f| d.corners(f).iter().fold(rational(-180, 1), |acc, c| acc + a.get(c)))
        .collect();
    let mut interior_vertices = BTreeMap::new();
    let mut boundary_vertices = BTreeMap::new();
    for v in 0..d.vertex_count() {
        let sum = d.corners_at(v).iter().fold(BigRational::zero(), |acc, c| acc + a.get(c));
        if d.is_interior_vertex(v) {
            interior_vertices.insert(v, rational(360, 1) - sum);
        } else {
            boundary_vertices.insert(v, rational(180, 1) - sum);
        }
    }
    let sum = |it: &mut dyn Iterator<Item = &BigRational>| it.fold(BigRational::zero(), |acc, x| acc + x);
    let face_total = sum(&mut faces.iter());
    let interior_total = sum(&mut interior_vertices.values());
    let boundary_total = sum(&mut boundary_vertices.values());
    let total = &face_total + &interior_total + &boundary_total;
    CurvatureReport { faces, interior_vertices, boundary_vertices, face_total, interior_total, boundary_total, total }
}

/// A pair of faces violating the Z placement rule across a shared edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZViolation {
    pub edge: usize,
    pub face: usize,
    pub other: usize,
}

/// For faces `v v1 v2` and `u v1 v2` sharing the edge `v1 v2`, where the
/// first has its Z corner at `v`: neither the `v1`, `v2` corners of the
/// first nor the `u` corner of the second may be Z. One entry per edge.
pub fn z_placement_check(d: &VanKampenDiagram) -> Vec<ZViolation> {
    let mut out = Vec::new();
    for e in 0..d.edges().len() {
        let [(f, p), (g, q)] = d.edge_faces(e) else { continue };
        let (f, p, g, q) = (*f, *p, *g, *q);
        if f == g {
            continue;
        }
        // in a triangle the corner opposite cycle[p] is at pos p + 1
        let opposite = |face: usize, pos: usize| d.corners(face)[(pos + 1) % 3];
        let at_ends = |face: usize, pos: usize| {
            let cs = d.corners(face);
            [cs[(pos + 2) % 3], cs[pos % 3]]
        };
        if d.faces()[f].cycle.len() != 3 || d.faces()[g].cycle.len() != 3 {
            continue;
        }
        let mut bad = false;
        for (a, pa, b, pb) in [(f, p, g, q), (g, q, f, p)] {
            if opposite(a, pa).ty == EdgeType::Z
                && (at_ends(a, pa).iter().any(|c| c.ty == EdgeType::Z) || opposite(b, pb).ty == EdgeType::Z)
            {
                bad = true;
            }
        }
        if bad {
            out.push(ZViolation { edge: e, face: f.min(g), other: f.max(g) });
        }
    }
    out
}

impl fmt::Display for VanKampenDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "diagram over P_{}({},{}): V={} E={} F={} boundary length {}",
            self.n,
            self.m,
            self.k,
            self.vertex_count(),
            self.edges.len(),
            self.faces.len(),
            self.boundary.len()
        )
    }
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Single positive face `P -x_i-> Q -x_{i+m}-> R`, `P -x_{i+k}-> R`.
    pub(crate) fn single_face(n: u32, m: u32, k: u32, i: u32) -> VanKampenDiagram {
        let edges = vec![
            Edge { id: 0, from: 0, to: 1, gen: i % n },
            Edge { id: 1, from: 1, to: 2, gen: (i + m) % n },
            Edge { id: 2, from: 0, to: 2, gen: (i + k) % n },
        ];
        let cyc = vec![EdgeRef::fwd(0), EdgeRef::fwd(1), EdgeRef::bwd(2)];
        VanKampenDiagram::new((n, m, k), vec![0, 1, 2], edges, vec![Face { id: 0, cycle: cyc.clone() }], cyc, 0)
            .unwrap()
    }

    /// A face and its mirror glued along the `x_{i+m}` edge.
    fn mirror_pair() -> VanKampenDiagram {
        // P=0, Q=1, R=2, P'=3 mirror apex
        let (n, m, k) = (10, 7, 1);
        let edges = vec![
            Edge { id: 0, from: 0, to: 1, gen: 0 },
            Edge { id: 1, from: 1, to: 2, gen: 7 },
            Edge { id: 2, from: 0, to: 2, gen: 1 },
            Edge { id: 3, from: 3, to: 1, gen: 0 },
            Edge { id: 4, from: 3, to: 2, gen: 1 },
        ];
        let f0 = Face { id: 0, cycle: vec![EdgeRef::fwd(0), EdgeRef::fwd(1), EdgeRef::bwd(2)] };
        // mirror: reads x_1 X_7 X_0 from P'
        let f1 = Face { id: 1, cycle: vec![EdgeRef::fwd(4), EdgeRef::bwd(1), EdgeRef::bwd(3)] };
        let boundary = vec![EdgeRef::fwd(0), EdgeRef::bwd(3), EdgeRef::fwd(4), EdgeRef::bwd(2)];
        VanKampenDiagram::new((n, m, k), vec![0, 1, 2, 3], edges, vec![f0, f1], boundary, 0).unwrap()
    }

    #[test]
    fn single_face_basics() {
        let d = single_face(10, 7, 1, 0);
        assert_eq!((d.vertex_count(), d.edges().len(), d.faces().len()), (3, 3, 1));
        assert_eq!(boundary_word(&d), Word::parse(10, "x0 x7 X1").unwrap());
        assert!(is_reduced(&d));
        let mut types: Vec<_> = corner_labels(&d).iter().map(|c| c.ty).collect();
        types.sort();
        assert_eq!(types, vec![EdgeType::X, EdgeType::Y, EdgeType::Z]);
        // Z at P, X at Q, Y at R
        assert_eq!(vertex_label(&d, 0), "Z");
        assert_eq!(vertex_label(&d, 1), "X");
        assert_eq!(vertex_label(&d, 2), "Y");
        assert!(z_placement_check(&d).is_empty());
        let rep = curvature_report(&d, &assign_angles(&d));
        assert_eq!(rep.faces, vec![rational(-93, 1)]);
        assert!(rep.boundary_vertices.values().all(|v| *v == rational(151, 1)));
        assert_eq!(rep.total, rational(360, 1));
    }

    #[test]
    fn mirror_pair_is_not_reduced() {
        let d = mirror_pair();
        assert!(!is_reduced(&d));
        assert_eq!(cancelling_pairs(&d).len(), 1);
        // the mirror face reads the inverse relator
        assert_eq!(d.face_label(1), Word::parse(10, "x1 X7 X0").unwrap());
        // Z corners at both apexes, opposite the shared edge
        assert_eq!(z_placement_check(&d).len(), 1);
        assert!(curvature_report(&d, &assign_angles(&d)).gauss_bonnet_holds());
    }

    #[test]
    fn json_round_trip() {
        let d = mirror_pair();
        let e = parse_and_validate(&d.to_json()).unwrap();
        assert_eq!(e.to_json(), d.to_json());
        assert_eq!(boundary_word(&e), boundary_word(&d));
    }

    #[test]
    fn signed_refs_accept_numbers_and_strings() {
        let text = r#"{"n":10,"m":7,"k":1,"vertices":[5,6,7],
            "edges":[{"id":1,"from":5,"to":6,"gen":0},{"id":2,"from":6,"to":7,"gen":7},{"id":3,"from":5,"to":7,"gen":1}],
            "faces":[{"id":0,"cycle":[1,"+2",-3]}],"boundary":["+1","+2","-3"],"base":6}"#;
        let d = parse_and_validate(text).unwrap();
        assert_eq!(boundary_word(&d), Word::parse(10, "x7 X1 x0").unwrap());
    }

    #[test]
    fn face_label_error() {
        let text = r#"{"n":10,"m":7,"k":1,"vertices":[0,1,2],
            "edges":[{"id":0,"from":0,"to":1,"gen":0},{"id":1,"from":1,"to":2,"gen":1},{"id":2,"from":0,"to":2,"gen":2}],
            "faces":[{"id":0,"cycle":["+0","+1","-2"]}],"boundary":["+0","+1","-2"],"base":0}"#;
        let e = parse_and_validate(text).unwrap_err();
        assert_eq!(e.code(), "face-label");
    }

    #[test]
    fn incidence_and_malformed_errors() {
        // boundary sign flipped
        let text = r#"{"n":10,"m":7,"k":1,"vertices":[0,1,2],
            "edges":[{"id":0,"from":0,"to":1,"gen":0},{"id":1,"from":1,"to":2,"gen":7},{"id":2,"from":0,"to":2,"gen":1}],
            "faces":[{"id":0,"cycle":["+0","+1","-2"]}],"boundary":["+2","-1","-0"],"base":0}"#;
        assert_eq!(parse_and_validate(text).unwrap_err().code(), "edge-incidence");
        let text = r#"{"n":10,"m":7,"k":1,"vertices":[0,1,2],
            "edges":[{"id":0,"from":0,"to":1,"gen":0},{"id":1,"from":1,"to":2,"gen":7},{"id":2,"from":0,"to":2,"gen":1}],
            "faces":[{"id":0,"cycle":["+0","+2","-1"]}],"boundary":["+0","+1","-2"],"base":0}"#;
        assert_eq!(parse_and_validate(text).unwrap_err().code(), "malformed");
        assert_eq!(parse_and_validate("{").unwrap_err().code(), "malformed");
    }

    #[test]
    fn angles_are_exact() {
        assert_eq!(rational(360, 7).to_string(), "360/7");
        assert_eq!(fmt_rational(&rational(360, 6)), "60");
        assert_eq!(fmt_rational(&rational(-93, 1)), "-93");
    }
}
