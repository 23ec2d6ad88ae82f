//! Ant walks, ant lanes and their joins, and lane curvature.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::disk::{Color, ColoredDisk};
use super::{assign_angles, curvature_report, rational, vertex_label, VanKampenDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaneError {
    #[error("face {0} is not black and cannot be home")]
    NotBlack(String),
    #[error("ambiguous move out of face {0}: two forced moves")]
    Ambiguous(String),
    #[error("ant revisits face {0}")]
    Revisit(String),
    #[error("junction {0} is shared by {1} maximal lanes")]
    CrowdedJunction(String, usize),
    #[error("lane elements overlap in face {0}")]
    Overlap(String),
}

/// How the walk ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Destination {
    /// The ant never left home.
    Home,
    /// Last white face has no black neighbour.
    Junction,
    /// Last white face has one black neighbour and a boundary edge.
    Boundary,
    /// Last white face has two black neighbours.
    DoubleBlack,
    /// Anything else; never produced for reduced diagrams.
    Other,
}

/// The lane shapes an ant lane can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaneShape {
    /// `(1,0)`
    Lone,
    /// `(1,1)`
    Pair,
    /// `b = w >= 2`, ending at a junction.
    Junction,
    /// `b - 1 = w >= 1`, ending at a boundary face.
    Boundary,
    /// `b - 2 = w >= 1`, ending beside two black faces.
    DoubleBlack,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntLane {
    pub home: usize,
    /// White faces in walk order.
    pub whites: Vec<usize>,
    /// Black faces, home first.
    pub blacks: Vec<usize>,
    pub junction: Option<usize>,
    pub destination: Destination,
}

impl AntLane {
    pub fn kind(&self) -> (usize, usize) {
        (self.blacks.len(), self.whites.len())
    }

    pub fn faces(&self) -> BTreeSet<usize> {
        self.blacks.iter().chain(&self.whites).copied().collect()
    }

    pub fn shape(&self) -> Option<LaneShape> {
        let (b, w) = self.kind();
        match (b, w, self.destination) {
            (1, 0, _) => Some(LaneShape::Lone),
            (1, 1, _) => Some(LaneShape::Pair),
            (b, w, Destination::Junction) if b == w && w >= 2 => Some(LaneShape::Junction),
            (b, w, Destination::Boundary) if b == w + 1 && w >= 1 => Some(LaneShape::Boundary),
            (b, w, Destination::DoubleBlack) if b == w + 2 && w >= 1 => Some(LaneShape::DoubleBlack),
            _ => None,
        }
    }
}

/// Walks an ant from `home` under the forced-move rules; it stops as soon
/// as no move is forced.
pub fn ant_walk(cd: &ColoredDisk, home: usize) -> Result<AntLane, LaneError> {
    let name = |f: usize| cd.label(f).to_string();
    if cd.color(home) != Color::Black {
        return Err(LaneError::NotBlack(name(home)));
    }
    let mut whites: Vec<usize> = Vec::new();
    let first = cd.neighbors_of_color(home, Color::White);
    match first.as_slice() {
        [] => {}
        [w] => whites.push(*w),
        _ => return Err(LaneError::Ambiguous(name(home))),
    }
    let mut prev = home;
    while let Some(&cur) = whites.last() {
        let other_black = cd.neighbors_of_color(cur, Color::Black).iter().any(|&g| g != home);
        if !other_black {
            break;
        }
        let next: Vec<usize> =
            cd.neighbors_of_color(cur, Color::White).into_iter().filter(|&g| g != prev).collect();
        match next.as_slice() {
            [] => break,
            [g] => {
                if whites.contains(g) {
                    return Err(LaneError::Revisit(name(*g)));
                }
                prev = cur;
                whites.push(*g);
            }
            _ => return Err(LaneError::Ambiguous(name(cur))),
        }
    }
    let mut blacks = vec![home];
    for &w in &whites {
        for g in cd.neighbors_of_color(w, Color::Black) {
            if !blacks.contains(&g) {
                blacks.push(g);
            }
        }
    }
    let (junction, destination) = match whites.last() {
        None => (None, Destination::Home),
        Some(&last) => {
            let nb = cd.neighbors_of_color(last, Color::Black);
            let nb_new: Vec<usize> = nb.iter().copied().filter(|&g| whites.len() > 1 || g != home).collect();
            if nb.is_empty() {
                (Some(last), Destination::Junction)
            } else if nb_new.len() == 1 && cd.is_boundary_face(last) {
                (None, Destination::Boundary)
            } else if nb_new.len() == 2 {
                (None, Destination::DoubleBlack)
            } else {
                (None, Destination::Other)
            }
        }
    };
    Ok(AntLane { home, whites, blacks, junction, destination })
}

/// An element of the lane set: a maximal lane or a join of lanes sharing a
/// junction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneElement {
    /// Indices into [`LaneSet::maximal`].
    pub lanes: Vec<usize>,
    pub faces: BTreeSet<usize>,
    /// `(b, w)` by the join formula.
    pub kind: (usize, usize),
    pub junction: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneSet {
    /// Every ant lane, one per black home.
    pub all: Vec<AntLane>,
    /// Distinct maximal lanes.
    pub maximal: Vec<AntLane>,
    pub elements: Vec<LaneElement>,
}

impl LaneSet {
    pub fn element_name(&self, i: usize) -> String {
        self.elements[i]
            .lanes
            .iter()
            .map(|&l| {
                let (b, w) = self.maximal[l].kind();
                format!("({b},{w})")
            })
            .collect::<Vec<_>>()
            .join("#")
    }
}

/// All ant lanes, the maximal ones, and their joins at shared junctions.
/// A maximal lane whose junction lies in no other maximal lane forms an
/// element on its own.
pub fn lane_decomposition(cd: &ColoredDisk) -> Result<LaneSet, LaneError> {
    let all = cd.black_faces().into_iter().map(|h| ant_walk(cd, h)).collect::<Result<Vec<_>, _>>()?;
    let sets: Vec<BTreeSet<usize>> = all.iter().map(AntLane::faces).collect();
    let mut maximal: Vec<AntLane> = Vec::new();
    let mut seen: Vec<&BTreeSet<usize>> = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let dominated = sets.iter().any(|t| t.len() > s.len() && s.is_subset(t));
        if !dominated && !seen.contains(&s) {
            seen.push(s);
            maximal.push(all[i].clone());
        }
    }
    let mut by_junction: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut elements = Vec::new();
    for (i, l) in maximal.iter().enumerate() {
        match l.junction {
            Some(j) => by_junction.entry(j).or_default().push(i),
            None => elements.push(LaneElement { lanes: vec![i], faces: l.faces(), kind: l.kind(), junction: None }),
        }
    }
    for (j, group) in by_junction {
        if group.len() > 3 {
            return Err(LaneError::CrowdedJunction(cd.label(j).to_string(), group.len()));
        }
        let faces: BTreeSet<usize> = group.iter().flat_map(|&i| maximal[i].faces()).collect();
        let b = group.iter().map(|&i| maximal[i].kind().0).sum();
        let w = group.iter().map(|&i| maximal[i].kind().1).sum::<usize>() + 1 - group.len();
        elements.push(LaneElement { lanes: group, faces, kind: (b, w), junction: Some(j) });
    }
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, e) in elements.iter().enumerate() {
        for &f in &e.faces {
            if owner.insert(f, i).is_some() {
                return Err(LaneError::Overlap(cd.label(f).to_string()));
            }
        }
        if e.faces.len() != e.kind.0 + e.kind.1 {
            let f = *e.faces.iter().next().expect("lanes are nonempty");
            return Err(LaneError::Overlap(cd.label(f).to_string()));
        }
    }
    Ok(LaneSet { all, maximal, elements })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Hypothesis holds and every element averages at most -1.
    Confirmed,
    /// Hypothesis holds but some element averages above -1.
    Refuted,
    /// Hypothesis fails; the bound is reported but not asserted.
    Withheld(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Confirmed => write!(f, "kappa_L <= -1 confirmed"),
            Verdict::Refuted => write!(f, "kappa_L <= -1 REFUTED"),
            Verdict::Withheld(why) => write!(f, "verdict withheld: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneCurvature {
    /// `(kappa(L), average)` per element.
    pub elements: Vec<(BigRational, BigRational)>,
    /// Largest element average; `None` when there are no elements.
    pub kappa_max: Option<BigRational>,
    pub bound_met: bool,
    pub verdict: Verdict,
}

/// First interior vertex with degree below 8 whose label is not `Z^d`,
/// `3 <= d <= 6`.
pub fn hypothesis_failure(d: &VanKampenDiagram) -> Option<usize> {
    (0..d.vertex_count()).filter(|&v| d.is_interior_vertex(v)).find(|&v| {
        let label = vertex_label(d, v);
        let pure_z = (3..=6).contains(&label.len()) && label.chars().all(|c| c == 'Z');
        d.degree(v) < 8 && !pure_z
    })
}

/// Curvature of each element under the standard angles.
pub fn lane_curvature(d: &VanKampenDiagram, ls: &LaneSet) -> LaneCurvature {
    let rep = curvature_report(d, &assign_angles(d));
    let elements: Vec<(BigRational, BigRational)> = ls
        .elements
        .iter()
        .map(|e| {
            let k = e.faces.iter().fold(BigRational::zero(), |acc, &f| acc + &rep.faces[f]);
            let avg = &k / rational(e.faces.len() as i64, 1);
            (k, avg)
        })
        .collect();
    let kappa_max = elements.iter().map(|(_, a)| a.clone()).max();
    let bound_met = kappa_max.as_ref().is_none_or(|m| *m <= rational(-1, 1));
    let verdict = match hypothesis_failure(d) {
        Some(v) => Verdict::Withheld(format!(
            "interior vertex {} has degree {} and label {}",
            d.vertex_id(v),
            d.degree(v),
            vertex_label(d, v)
        )),
        None if bound_met => Verdict::Confirmed,
        None => Verdict::Refuted,
    };
    LaneCurvature { elements, kappa_max, bound_met, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4() -> ColoredDisk {
        ColoredDisk::parse_cdk(include_str!("../../fixtures/fig4.cdk")).unwrap()
    }

    fn labels(cd: &ColoredDisk, fs: &[usize]) -> Vec<String> {
        fs.iter().map(|&f| cd.label(f).to_string()).collect()
    }

    #[test]
    fn fig4_walks() {
        let cd = fig4();
        let l = ant_walk(&cd, cd.find("B0").unwrap()).unwrap();
        assert_eq!(labels(&cd, &l.whites), ["W1", "W2"]);
        assert_eq!(l.kind(), (2, 2));
        assert_eq!(l.junction, cd.find("W2"));
        assert_eq!(l.shape(), Some(LaneShape::Junction));

        let r = ant_walk(&cd, cd.find("B0'").unwrap()).unwrap();
        assert_eq!(labels(&cd, &r.whites), ["W1'", "W2'", "W2"]);
        assert_eq!(r.kind(), (3, 3));
        assert_eq!(r.junction, cd.find("W2"));

        let s = ant_walk(&cd, cd.find("B2'").unwrap()).unwrap();
        assert_eq!(s.kind(), (1, 1));
    }

    #[test]
    fn fig4_decomposition() {
        let cd = fig4();
        let ls = lane_decomposition(&cd).unwrap();
        let mut kinds: Vec<_> = ls.maximal.iter().map(AntLane::kind).collect();
        kinds.sort();
        assert_eq!(kinds, vec![(2, 2), (3, 3)]);
        assert_eq!(ls.elements.len(), 1);
        assert_eq!(ls.elements[0].kind, (5, 4));
        assert_eq!(ls.elements[0].faces.len(), 9);
    }

    #[test]
    fn walking_from_white_is_an_error() {
        let cd = fig4();
        assert!(matches!(ant_walk(&cd, cd.find("W1").unwrap()), Err(LaneError::NotBlack(_))));
    }

    #[test]
    fn lone_black_boundary_face() {
        let names = (0..3).map(|i| i.to_string()).collect();
        let cd = ColoredDisk::from_faces(names, vec![(vec![0, 1, 2], Color::Black, "B".into())]).unwrap();
        let ls = lane_decomposition(&cd).unwrap();
        assert_eq!(ls.elements.len(), 1);
        assert_eq!(ls.elements[0].kind, (1, 0));
        assert_eq!(ls.maximal[0].shape(), Some(LaneShape::Lone));
    }

    #[test]
    fn two_white_neighbours_of_home_is_ambiguous() {
        let names = (0..5).map(|i| i.to_string()).collect();
        let cd = ColoredDisk::from_faces(
            names,
            vec![
                (vec![0, 1, 2], Color::Black, "B".into()),
                (vec![0, 1, 3], Color::White, "W".into()),
                (vec![1, 2, 4], Color::White, "V".into()),
            ],
        )
        .unwrap();
        assert!(matches!(ant_walk(&cd, 0), Err(LaneError::Ambiguous(_))));
    }
}
