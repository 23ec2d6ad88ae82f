//! Black/white colorings of triangulated disks and the forbidden
//! configurations that cannot occur in a reduced diagram.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::VanKampenDiagram;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiskError {
    #[error("malformed disk: {0}")]
    Malformed(String),
    #[error("edge {0}-{1} lies on more than two faces")]
    NonManifoldEdge(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskFace {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub color: Color,
    pub label: String,
}

/// A colored triangulated disk: faces, adjacency across shared edges and
/// boundary flags. Faces keep the indices of their source diagram.
#[derive(Debug, Clone)]
pub struct ColoredDisk {
    faces: Vec<DiskFace>,
    edge_faces: Vec<Vec<usize>>,
    vertex_names: Vec<String>,
}

impl ColoredDisk {
    /// Abstract disk from vertex tuples; edges are identified by endpoints.
    pub fn from_faces(vertex_names: Vec<String>, faces: Vec<(Vec<usize>, Color, String)>) -> Result<Self, DiskError> {
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_faces: Vec<Vec<usize>> = Vec::new();
        let mut out = Vec::with_capacity(faces.len());
        for (fi, (vs, color, label)) in faces.into_iter().enumerate() {
            if vs.len() < 3 {
                return Err(DiskError::Malformed(format!("face {label} has fewer than three vertices")));
            }
            let distinct: BTreeSet<_> = vs.iter().collect();
            if distinct.len() != vs.len() || vs.iter().any(|&v| v >= vertex_names.len()) {
                return Err(DiskError::Malformed(format!("face {label} has repeated or unknown vertices")));
            }
            let mut edges = Vec::with_capacity(vs.len());
            for i in 0..vs.len() {
                let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
                let key = (a.min(b), a.max(b));
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    edge_faces.push(Vec::new());
                    edge_faces.len() - 1
                });
                edge_faces[id].push(fi);
                if edge_faces[id].len() > 2 {
                    return Err(DiskError::NonManifoldEdge(vertex_names[a].clone(), vertex_names[b].clone()));
                }
                edges.push(id);
            }
            out.push(DiskFace { vertices: vs, edges, color, label });
        }
        Ok(ColoredDisk { faces: out, edge_faces, vertex_names })
    }

    /// Disk underlying a validated diagram, with the given face colors.
    pub fn from_diagram(d: &VanKampenDiagram, colors: &[Color]) -> Self {
        let faces = d
            .faces()
            .iter()
            .zip(colors)
            .map(|(f, &color)| DiskFace {
                vertices: f.cycle.iter().map(|&r| d.start(r)).collect(),
                edges: f.cycle.iter().map(|r| r.edge).collect(),
                color,
                label: format!("f{}", f.id),
            })
            .collect();
        let edge_faces = (0..d.edges().len()).map(|e| d.edge_faces(e).iter().map(|&(f, _)| f).collect()).collect();
        let vertex_names = (0..d.vertex_count()).map(|v| d.vertex_id(v).to_string()).collect();
        ColoredDisk { faces, edge_faces, vertex_names }
    }

    pub fn parse_cdk(text: &str) -> Result<Self, DiskError> {
        let doc: CdkDoc = serde_json::from_str(text).map_err(|e| DiskError::Malformed(e.to_string()))?;
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut faces = Vec::with_capacity(doc.faces.len());
        for (i, f) in doc.faces.into_iter().enumerate() {
            let vs = f
                .vertices
                .iter()
                .map(|v| {
                    let key = match v {
                        serde_json::Value::String(s) => s.clone(),
                        serde_json::Value::Number(n) => n.to_string(),
                        other => return Err(DiskError::Malformed(format!("bad vertex {other}"))),
                    };
                    Ok(*index.entry(key.clone()).or_insert_with(|| {
                        names.push(key);
                        names.len() - 1
                    }))
                })
                .collect::<Result<Vec<_>, _>>()?;
            faces.push((vs, f.color, f.label.unwrap_or_else(|| format!("f{i}"))));
        }
        Self::from_faces(names, faces)
    }

    pub fn to_cdk(&self) -> String {
        let doc = CdkDoc {
            faces: self
                .faces
                .iter()
                .map(|f| CdkFace {
                    vertices: f.vertices.iter().map(|&v| serde_json::Value::String(self.vertex_names[v].clone())).collect(),
                    color: f.color,
                    label: Some(f.label.clone()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn faces(&self) -> &[DiskFace] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn color(&self, f: usize) -> Color {
        self.faces[f].color
    }

    pub fn label(&self, f: usize) -> &str {
        &self.faces[f].label
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.label == label)
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    /// Faces across the interior edges of `f`, in edge order.
    pub fn neighbors(&self, f: usize) -> Vec<usize> {
        self.faces[f]
            .edges
            .iter()
            .filter_map(|&e| self.edge_faces[e].iter().copied().find(|&g| g != f))
            .collect()
    }

    pub fn neighbors_of_color(&self, f: usize, c: Color) -> Vec<usize> {
        self.neighbors(f).into_iter().filter(|&g| self.faces[g].color == c).collect()
    }

    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.faces[f].edges.iter().any(|&e| self.edge_faces[e].len() == 1)
    }

    pub fn black_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].color == Color::Black).collect()
    }

    /// Black faces with two or more white neighbours.
    pub fn crowded_black_faces(&self) -> Vec<usize> {
        self.black_faces().into_iter().filter(|&f| self.neighbors_of_color(f, Color::White).len() > 1).collect()
    }

    fn faces_at(&self) -> Vec<Vec<usize>> {
        let mut at = vec![Vec::new(); self.vertex_names.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            for &v in &f.vertices {
                at[v].push(fi);
            }
        }
        at
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CdkFace {
    vertices: Vec<serde_json::Value>,
    color: Color,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CdkDoc {
    faces: Vec<CdkFace>,
}

/// Black iff incident to an interior vertex of degree at most 6.
pub fn color_faces(d: &VanKampenDiagram) -> ColoredDisk {
    let small: Vec<bool> = (0..d.vertex_count()).map(|v| d.is_interior_vertex(v) && d.degree(v) <= 6).collect();
    let colors: Vec<Color> = d
        .faces()
        .iter()
        .map(|f| {
            if f.cycle.iter().any(|&r| small[d.start(r)]) {
                Color::Black
            } else {
                Color::White
            }
        })
        .collect();
    ColoredDisk::from_diagram(d, &colors)
}

const PATTERN_TEXT: [&str; 5] = [
    include_str!("../../fixtures/fig3-1.cdk"),
    include_str!("../../fixtures/fig3-2.cdk"),
    include_str!("../../fixtures/fig3-3.cdk"),
    include_str!("../../fixtures/fig3-4.cdk"),
    include_str!("../../fixtures/fig3-5.cdk"),
];

/// The five impossible configurations, numbered from 1.
pub fn patterns() -> Vec<ColoredDisk> {
    PATTERN_TEXT.iter().map(|t| ColoredDisk::parse_cdk(t).expect("built-in pattern parses")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PatternMatch {
    /// Pattern number, 1 to 5.
    pub pattern: usize,
    /// Matched disk faces, sorted.
    pub faces: Vec<usize>,
}

/// Color-preserving embeddings of each pattern, one match per face set.
pub fn forbidden_patterns(cd: &ColoredDisk) -> Vec<PatternMatch> {
    let mut out = BTreeSet::new();
    for (i, p) in patterns().iter().enumerate() {
        for faces in embeddings(p, cd) {
            out.insert(PatternMatch { pattern: i + 1, faces });
        }
    }
    out.into_iter().collect()
}

/// Face sets of `host` onto which `pat` embeds by an injective,
/// color-preserving vertex map.
pub fn embeddings(pat: &ColoredDisk, host: &ColoredDisk) -> BTreeSet<Vec<usize>> {
    // order pattern faces so each one after the first meets an earlier one
    let mut order = vec![0usize];
    let mut placed = vec![false; pat.len()];
    if pat.is_empty() {
        return BTreeSet::new();
    }
    placed[0] = true;
    while order.len() < pat.len() {
        let next = (0..pat.len())
            .find(|&f| {
                !placed[f]
                    && order.iter().any(|&g| pat.faces[f].vertices.iter().any(|v| pat.faces[g].vertices.contains(v)))
            })
            .or_else(|| (0..pat.len()).find(|&f| !placed[f]))
            .expect("unplaced face exists");
        placed[next] = true;
        order.push(next);
    }
    let mut search = Search {
        pat,
        host,
        order,
        host_at: host.faces_at(),
        vmap: vec![None; pat.vertex_names.len()],
        vused: vec![false; host.vertex_names.len()],
        fused: vec![false; host.len()],
        chosen: Vec::new(),
        found: BTreeSet::new(),
    };
    search.run(0);
    search.found
}

struct Search<'a> {
    pat: &'a ColoredDisk,
    host: &'a ColoredDisk,
    order: Vec<usize>,
    host_at: Vec<Vec<usize>>,
    vmap: Vec<Option<usize>>,
    vused: Vec<bool>,
    fused: Vec<bool>,
    chosen: Vec<usize>,
    found: BTreeSet<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            let mut fs = self.chosen.clone();
            fs.sort_unstable();
            self.found.insert(fs);
            return;
        }
        let pf = &self.pat.faces[self.order[depth]];
        let anchor = pf.vertices.iter().find_map(|&v| self.vmap[v]);
        let candidates: Vec<usize> = match anchor {
            Some(hv) => self.host_at[hv].clone(),
            None => (0..self.host.len()).collect(),
        };
        for hf in candidates {
            let hface = &self.host.faces[hf];
            if self.fused[hf] || hface.color != pf.color || hface.vertices.len() != pf.vertices.len() {
                continue;
            }
            for perm in permutations(pf.vertices.len()) {
                let assign: Vec<(usize, usize)> =
                    pf.vertices.iter().zip(&perm).map(|(&pv, &j)| (pv, hface.vertices[j])).collect();
                let consistent = assign.iter().all(|&(pv, hv)| match self.vmap[pv] {
                    Some(x) => x == hv,
                    None => !self.vused[hv],
                });
                // two unmapped pattern vertices may not land on one host vertex
                if !consistent {
                    continue;
                }
                let fresh: Vec<(usize, usize)> = assign.iter().copied().filter(|&(pv, _)| self.vmap[pv].is_none()).collect();
                for &(pv, hv) in &fresh {
                    self.vmap[pv] = Some(hv);
                    self.vused[hv] = true;
                }
                self.fused[hf] = true;
                self.chosen.push(hf);
                self.run(depth + 1);
                self.chosen.pop();
                self.fused[hf] = false;
                for &(pv, hv) in &fresh {
                    self.vmap[pv] = None;
                    self.vused[hv] = false;
                }
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(v: [usize; 3], c: Color, l: &str) -> (Vec<usize>, Color, String) {
        (v.to_vec(), c, l.to_string())
    }

    #[test]
    fn adjacency_and_boundary() {
        let names = (0..4).map(|i| i.to_string()).collect();
        let cd = ColoredDisk::from_faces(
            names,
            vec![tri([0, 1, 2], Color::Black, "a"), tri([1, 2, 3], Color::White, "b")],
        )
        .unwrap();
        assert_eq!(cd.neighbors(0), vec![1]);
        assert!(cd.is_boundary_face(0) && cd.is_boundary_face(1));
        assert_eq!(cd.neighbors_of_color(1, Color::Black), vec![0]);
    }

    #[test]
    fn rejects_non_manifold_edge() {
        let names = (0..5).map(|i| i.to_string()).collect();
        let err = ColoredDisk::from_faces(
            names,
            vec![
                tri([0, 1, 2], Color::Black, "a"),
                tri([0, 1, 3], Color::White, "b"),
                tri([0, 1, 4], Color::White, "c"),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, DiskError::NonManifoldEdge(..)));
    }

    #[test]
    fn patterns_have_expected_types() {
        let counts: Vec<(usize, usize)> = patterns()
            .iter()
            .map(|p| {
                let b = p.black_faces().len();
                (b, p.len() - b)
            })
            .collect();
        assert_eq!(counts, vec![(3, 1), (4, 2), (5, 3), (6, 4), (6, 4)]);
    }

    #[test]
    fn each_pattern_matches_itself_once() {
        for (i, p) in patterns().iter().enumerate() {
            let m = forbidden_patterns(p);
            assert!(m.iter().any(|x| x.pattern == i + 1 && x.faces.len() == p.len()), "pattern {}", i + 1);
            assert_eq!(m.iter().filter(|x| x.pattern == i + 1).count(), 1);
        }
    }

    #[test]
    fn recoloring_breaks_the_match() {
        let p = &patterns()[0];
        let faces = p
            .faces()
            .iter()
            .map(|f| (f.vertices.clone(), Color::White, f.label.clone()))
            .collect();
        let white = ColoredDisk::from_faces(p.vertex_names.clone(), faces).unwrap();
        assert!(forbidden_patterns(&white).is_empty());
    }

    #[test]
    fn cdk_round_trip() {
        let p = &patterns()[2];
        let q = ColoredDisk::parse_cdk(&p.to_cdk()).unwrap();
        assert_eq!(q.faces(), p.faces());
    }
}
