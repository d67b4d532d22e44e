//! Combinatorial triangulated spheres and disk patches with diagonal flips.
//!
//! Complexes are immutable values: a flip returns a new complex. Faces are
//! stored oriented (counter-clockwise seen from outside) in a canonical
//! rotation, and edges are unordered vertex pairs, so two complexes are equal
//! exactly when they have the same oriented faces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub type VertexId = usize;

/// An unordered vertex pair, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// Panics on a loop `u == v`.
    pub fn new(u: VertexId, v: VertexId) -> Self {
        assert_ne!(u, v, "an edge needs two distinct endpoints");
        Edge {
            lo: u.min(v),
            hi: u.max(v),
        }
    }

    pub fn lo(&self) -> VertexId {
        self.lo
    }

    pub fn hi(&self) -> VertexId {
        self.hi
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> Edge {
        Edge::new(map(self.lo), map(self.hi))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid edge key {0:?}, expected \"v1-v2\"")]
pub struct ParseEdgeError(pub String);

impl FromStr for Edge {
    type Err = ParseEdgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseEdgeError(s.to_string());
        let (u, v) = s.trim().split_once('-').ok_or_else(err)?;
        let u: VertexId = u.trim().parse().map_err(|_| err())?;
        let v: VertexId = v.trim().parse().map_err(|_| err())?;
        if u == v {
            return Err(err());
        }
        Ok(Edge::new(u, v))
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An oriented triangle, rotated so the smallest vertex id comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face([VertexId; 3]);

impl Face {
    pub fn new(a: VertexId, b: VertexId, c: VertexId) -> Self {
        let v = [a, b, c];
        let k = (0..3).min_by_key(|&i| v[i]).unwrap();
        Face([v[k], v[(k + 1) % 3], v[(k + 2) % 3]])
    }

    pub fn vertices(&self) -> [VertexId; 3] {
        self.0
    }

    pub fn is_degenerate(&self) -> bool {
        let [a, b, c] = self.0;
        a == b || b == c || a == c
    }

    /// Directed boundary edges `(a, b), (b, c), (c, a)`.
    pub fn directed_edges(&self) -> [(VertexId, VertexId); 3] {
        let [a, b, c] = self.0;
        [(a, b), (b, c), (c, a)]
    }

    pub fn edges(&self) -> [Edge; 3] {
        self.directed_edges().map(|(u, v)| Edge::new(u, v))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// The vertex of this face that is not on `e`.
    pub fn apex(&self, e: Edge) -> Option<VertexId> {
        if !(self.contains(e.lo) && self.contains(e.hi)) {
            return None;
        }
        self.0.iter().copied().find(|&v| !e.contains(v))
    }

    /// Whether the face traverses `u -> v` in its orientation.
    pub fn has_directed(&self, u: VertexId, v: VertexId) -> bool {
        self.directed_edges().contains(&(u, v))
    }

    /// Unoriented vertex set, for comparisons that ignore orientation.
    pub fn vertex_set(&self) -> [VertexId; 3] {
        let mut v = self.0;
        v.sort_unstable();
        v
    }

    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> Face {
        let [a, b, c] = self.0;
        Face::new(map(a), map(b), map(c))
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [a, b, c] = <[VertexId; 3]>::deserialize(deserializer)?;
        Ok(Face::new(a, b, c))
    }
}

/// The quadrilateral formed by the two faces on either side of an edge.
///
/// With diagonal `{p, r}` (`p` the smaller id) and faces `(p, r, q)` and
/// `(r, p, s)`, the boundary runs `p -> s -> r -> q -> p` following the face
/// orientation. `boundary[0]` and `boundary[2]` are opposite sides, as are
/// `boundary[1]` and `boundary[3]`. A flip replaces `{p, r}` with `{q, s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quad {
    pub diagonal: Edge,
    pub boundary: [Edge; 4],
    pub opposite: Edge,
    /// The two faces removed by the flip.
    pub faces: [Face; 2],
    /// `[p, s, r, q]` in boundary order.
    pub corners: [VertexId; 4],
}

impl Quad {
    /// The two faces that replace `faces` after the flip.
    pub fn flipped_faces(&self) -> [Face; 2] {
        let [p, s, r, q] = self.corners;
        [Face::new(p, s, q), Face::new(s, r, q)]
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.corners.iter().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("edge {0} is not in the complex")]
    MissingEdge(Edge),
    #[error("edge {edge} cannot be flipped: {reason}")]
    DegenerateQuad { edge: Edge, reason: String },
    #[error("flipping {edge} would duplicate existing edge {existing}")]
    DuplicateEdge { edge: Edge, existing: Edge },
    #[error("edge {0} lies on the boundary and has only one face")]
    BoundaryEdge(Edge),
    #[error("invalid complex: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One failed structural check reported by `validate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DegenerateFace(Face),
    DuplicateFace(Face),
    EdgeFaceCount { edge: Edge, faces: usize },
    Orientation { edge: Edge },
    VertexCount { expected: usize, found: usize },
    EdgeCount { expected: usize, found: usize },
    FaceCount { expected: usize, found: usize },
    Euler { expected: i64, found: i64 },
    Disconnected { components: usize },
    VertexLink { vertex: VertexId },
    Boundary { reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegenerateFace(face) => write!(f, "face with repeated vertex: {face:?}"),
            Violation::DuplicateFace(face) => write!(f, "duplicate face: {face:?}"),
            Violation::EdgeFaceCount { edge, faces } => write!(f, "edge in {faces} face: {edge}"),
            Violation::Orientation { edge } => write!(f, "inconsistent orientation at edge {edge}"),
            Violation::VertexCount { expected, found } => {
                write!(f, "vertex count {found} != n = {expected}")
            }
            Violation::EdgeCount { expected, found } => {
                write!(f, "edge count ≠ 3n−6: expected {expected}, found {found}")
            }
            Violation::FaceCount { expected, found } => {
                write!(f, "face count ≠ 2n−4: expected {expected}, found {found}")
            }
            Violation::Euler { expected, found } => {
                write!(f, "Euler characteristic {found}, expected {expected}")
            }
            Violation::Disconnected { components } => {
                write!(f, "complex has {components} connected components")
            }
            Violation::VertexLink { vertex } => {
                write!(f, "link of vertex {vertex} is not a single cycle")
            }
            Violation::Boundary { reason } => write!(f, "boundary: {reason}"),
        }
    }
}

/// Oriented faces plus the derived edge-to-face incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FaceSet {
    faces: BTreeSet<Face>,
    adjacency: BTreeMap<Edge, Vec<Face>>,
}

impl FaceSet {
    fn from_faces(faces: impl IntoIterator<Item = Face>) -> (Self, Vec<Violation>) {
        let mut set = BTreeSet::new();
        let mut unordered = BTreeSet::new();
        let mut problems = Vec::new();
        for face in faces {
            if face.is_degenerate() {
                problems.push(Violation::DegenerateFace(face));
                continue;
            }
            if !unordered.insert(face.vertex_set()) || !set.insert(face) {
                problems.push(Violation::DuplicateFace(face));
            }
        }
        let mut adjacency: BTreeMap<Edge, Vec<Face>> = BTreeMap::new();
        for face in &set {
            for e in face.edges() {
                adjacency.entry(e).or_default().push(*face);
            }
        }
        (FaceSet { faces: set, adjacency }, problems)
    }

    fn vertices(&self) -> BTreeSet<VertexId> {
        self.faces.iter().flat_map(|f| f.vertices()).collect()
    }

    fn edge_quad(&self, e: Edge) -> Result<Quad, ComplexError> {
        let incident = self.adjacency.get(&e).ok_or(ComplexError::MissingEdge(e))?;
        match incident.len() {
            1 => return Err(ComplexError::BoundaryEdge(e)),
            2 => {}
            k => {
                return Err(ComplexError::DegenerateQuad {
                    edge: e,
                    reason: format!("edge lies in {k} faces"),
                })
            }
        }
        let (p, r) = (e.lo, e.hi);
        let forward = incident.iter().find(|f| f.has_directed(p, r));
        let backward = incident.iter().find(|f| f.has_directed(r, p));
        let (Some(&f1), Some(&f2)) = (forward, backward) else {
            return Err(ComplexError::DegenerateQuad {
                edge: e,
                reason: "incident faces are inconsistently oriented".into(),
            });
        };
        let q = f1.apex(e).expect("face contains its edge");
        let s = f2.apex(e).expect("face contains its edge");
        if q == s {
            return Err(ComplexError::DegenerateQuad {
                edge: e,
                reason: format!("incident faces share the opposite vertex {q}"),
            });
        }
        Ok(Quad {
            diagonal: e,
            boundary: [Edge::new(p, s), Edge::new(s, r), Edge::new(r, q), Edge::new(q, p)],
            opposite: Edge::new(q, s),
            faces: [f1, f2],
            corners: [p, s, r, q],
        })
    }

    fn flip(&self, e: Edge) -> Result<(FaceSet, Quad), ComplexError> {
        let quad = self.edge_quad(e)?;
        if self.adjacency.contains_key(&quad.opposite) {
            return Err(ComplexError::DuplicateEdge {
                edge: e,
                existing: quad.opposite,
            });
        }
        let mut faces = self.faces.clone();
        for f in &quad.faces {
            faces.remove(f);
        }
        faces.extend(quad.flipped_faces());
        let (next, problems) = FaceSet::from_faces(faces);
        debug_assert!(problems.is_empty());
        Ok((next, quad))
    }

    /// Checks shared by spheres and patches: orientation, edge multiplicity,
    /// connectivity and vertex links. `closed` selects whether boundary
    /// edges (one incident face) are allowed.
    fn local_violations(&self, closed: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        for (edge, faces) in &self.adjacency {
            let ok = if closed {
                faces.len() == 2
            } else {
                faces.len() == 1 || faces.len() == 2
            };
            if !ok {
                out.push(Violation::EdgeFaceCount {
                    edge: *edge,
                    faces: faces.len(),
                });
                continue;
            }
            if faces.len() == 2 {
                let (u, v) = (edge.lo, edge.hi);
                let fwd = faces.iter().filter(|f| f.has_directed(u, v)).count();
                if fwd != 1 {
                    out.push(Violation::Orientation { edge: *edge });
                }
            }
        }
        let components = self.components();
        if components > 1 {
            out.push(Violation::Disconnected { components });
        }
        for v in self.vertices() {
            if !self.link_is_single_path(v, closed) {
                out.push(Violation::VertexLink { vertex: v });
            }
        }
        out
    }

    fn components(&self) -> usize {
        let verts: Vec<VertexId> = self.vertices().into_iter().collect();
        let index: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.adjacency.keys() {
            let (a, b) = (find(&mut parent, index[&e.lo]), find(&mut parent, index[&e.hi]));
            parent[a] = b;
        }
        (0..verts.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// The link of `v` must be one cycle (closed) or one cycle or path
    /// (patch boundary vertex).
    fn link_is_single_path(&self, v: VertexId, closed: bool) -> bool {
        let mut next: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut heads = BTreeSet::new();
        for f in self.faces.iter().filter(|f| f.contains(v)) {
            let [a, b, c] = f.vertices();
            let (x, y) = if a == v {
                (b, c)
            } else if b == v {
                (c, a)
            } else {
                (a, b)
            };
            if next.insert(x, y).is_some() || !heads.insert(y) {
                return false;
            }
        }
        if next.is_empty() {
            return false;
        }
        let start = next
            .keys()
            .copied()
            .find(|k| !heads.contains(k))
            .or_else(|| next.keys().next().copied())
            .unwrap();
        let is_path = !heads.contains(&start);
        if closed && is_path {
            return false;
        }
        let mut seen = 1;
        let mut cur = start;
        while let Some(&n) = next.get(&cur) {
            if n == start {
                break;
            }
            seen += 1;
            cur = n;
            if seen > next.len() + 1 {
                return false;
            }
        }
        let expected = if is_path { next.len() + 1 } else { next.len() };
        seen == expected
    }
}

/// Operations shared by closed spheres and disk patches.
pub trait FlipComplex: Clone + PartialEq + Sized {
    fn faces(&self) -> &BTreeSet<Face>;

    /// All edges in canonical (lexicographic) order.
    fn edges(&self) -> Vec<Edge>;

    fn has_edge(&self, e: Edge) -> bool;

    fn edge_quad(&self, e: Edge) -> Result<Quad, ComplexError>;

    /// Replace `e` by the opposite diagonal of its quad; returns the new
    /// complex and the created edge.
    fn apply_flip(&self, e: Edge) -> Result<(Self, Edge), ComplexError>;

    /// Whether flips of `e1` and `e2` act on disjoint parts of the complex:
    /// both are legal, their quads share no face and they would not create
    /// the same edge.
    fn are_far(&self, e1: Edge, e2: Edge) -> Result<bool, ComplexError> {
        let q1 = self.edge_quad(e1)?;
        let q2 = self.edge_quad(e2)?;
        if e1 == e2 || q1.opposite == q2.opposite || self.has_edge(q1.opposite) || self.has_edge(q2.opposite) {
            return Ok(false);
        }
        Ok(!q1.faces.iter().any(|f| q2.faces.contains(f)))
    }
}

/// A triangulated 2-sphere on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    mesh: FaceSet,
}

impl Triangulation {
    /// Builds the complex without structural checks; see [`validate`].
    pub fn from_faces(n: usize, faces: impl IntoIterator<Item = Face>) -> Self {
        let (mesh, _) = FaceSet::from_faces(faces);
        Triangulation { n, mesh }
    }

    /// Builds and validates; fails with every violation found.
    pub fn new(n: usize, faces: impl IntoIterator<Item = Face>) -> Result<Self, ComplexError> {
        let faces: Vec<Face> = faces.into_iter().collect();
        let (mesh, mut problems) = FaceSet::from_faces(faces);
        let t = Triangulation { n, mesh };
        problems.extend(validate(&t));
        if problems.is_empty() {
            Ok(t)
        } else {
            Err(ComplexError::Invalid(problems))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.mesh.vertices()
    }

    pub fn edge_count(&self) -> usize {
        self.mesh.adjacency.len()
    }

    pub fn face_count(&self) -> usize {
        self.mesh.faces.len()
    }

    /// Incident faces of an edge, as stored.
    pub fn incident_faces(&self, e: Edge) -> Option<&[Face]> {
        self.mesh.adjacency.get(&e).map(|v| v.as_slice())
    }

    /// Renames vertices, keeping orientation.
    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> Triangulation {
        Triangulation::from_faces(self.n, self.mesh.faces.iter().map(|f| f.relabel(&map)))
    }

    /// Edges in `self` but not in `other`, and vice versa.
    pub fn edge_difference(&self, other: &Triangulation) -> (Vec<Edge>, Vec<Edge>) {
        let removed = self
            .mesh
            .adjacency
            .keys()
            .filter(|e| !other.mesh.adjacency.contains_key(e))
            .copied()
            .collect();
        let added = other
            .mesh
            .adjacency
            .keys()
            .filter(|e| !self.mesh.adjacency.contains_key(e))
            .copied()
            .collect();
        (removed, added)
    }
}

impl FlipComplex for Triangulation {
    fn faces(&self) -> &BTreeSet<Face> {
        &self.mesh.faces
    }

    fn edges(&self) -> Vec<Edge> {
        self.mesh.adjacency.keys().copied().collect()
    }

    fn has_edge(&self, e: Edge) -> bool {
        self.mesh.adjacency.contains_key(&e)
    }

    fn edge_quad(&self, e: Edge) -> Result<Quad, ComplexError> {
        self.mesh.edge_quad(e)
    }

    fn apply_flip(&self, e: Edge) -> Result<(Self, Edge), ComplexError> {
        let (mesh, quad) = self.mesh.flip(e)?;
        Ok((Triangulation { n: self.n, mesh }, quad.opposite))
    }
}

/// Structural diagnostics for a closed triangulated sphere. Empty iff valid.
pub fn validate(t: &Triangulation) -> Vec<Violation> {
    let mut out = t.mesh.local_violations(true);
    let n = t.n;
    let v = t.vertices().len();
    if v != n {
        out.push(Violation::VertexCount { expected: n, found: v });
    }
    let e = t.edge_count();
    let f = t.face_count();
    if n >= 4 {
        if e != 3 * n - 6 {
            out.push(Violation::EdgeCount {
                expected: 3 * n - 6,
                found: e,
            });
        }
        if f != 2 * n - 4 {
            out.push(Violation::FaceCount {
                expected: 2 * n - 4,
                found: f,
            });
        }
    } else {
        out.push(Violation::VertexCount { expected: 4, found: n });
    }
    let chi = v as i64 - e as i64 + f as i64;
    if chi != 2 {
        out.push(Violation::Euler {
            expected: 2,
            found: chi,
        });
    }
    out
}

/// A triangulated disk: interior edges have two faces, boundary edges one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    mesh: FaceSet,
}

impl Patch {
    pub fn from_faces(faces: impl IntoIterator<Item = Face>) -> Self {
        let (mesh, _) = FaceSet::from_faces(faces);
        Patch { mesh }
    }

    pub fn boundary_edges(&self) -> Vec<Edge> {
        self.mesh
            .adjacency
            .iter()
            .filter(|(_, f)| f.len() == 1)
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn diagonals(&self) -> Vec<Edge> {
        self.mesh
            .adjacency
            .iter()
            .filter(|(_, f)| f.len() == 2)
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.mesh.vertices()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.mesh.local_violations(false);
        let boundary = self.boundary_edges();
        let mut degree: BTreeMap<VertexId, usize> = BTreeMap::new();
        for e in &boundary {
            *degree.entry(e.lo).or_default() += 1;
            *degree.entry(e.hi).or_default() += 1;
        }
        if boundary.is_empty() {
            out.push(Violation::Boundary {
                reason: "patch has no boundary".into(),
            });
        } else if degree.values().any(|&d| d != 2) {
            out.push(Violation::Boundary {
                reason: "boundary is not a simple cycle".into(),
            });
        }
        let chi = self.vertices().len() as i64 - self.mesh.adjacency.len() as i64 + self.mesh.faces.len() as i64;
        if chi != 1 {
            out.push(Violation::Euler {
                expected: 1,
                found: chi,
            });
        }
        out
    }

    /// Walks the flip graph: flip `first`, then repeatedly flip the single
    /// diagonal that was not created by the previous step. Only meaningful
    /// for patches with two diagonals (pentagons). Returns every visited
    /// patch (including the start) and the flipped edges in order.
    pub fn alternating_walk(&self, first: Edge, steps: usize) -> Result<(Vec<Patch>, Vec<Edge>), ComplexError> {
        let mut patches = vec![self.clone()];
        let mut flipped = Vec::with_capacity(steps);
        let mut target = first;
        for _ in 0..steps {
            let cur = patches.last().unwrap();
            let (next, created) = cur.apply_flip(target)?;
            flipped.push(target);
            let other = next
                .diagonals()
                .into_iter()
                .find(|d| *d != created)
                .ok_or(ComplexError::MissingEdge(created))?;
            target = other;
            patches.push(next);
        }
        Ok((patches, flipped))
    }
}

impl FlipComplex for Patch {
    fn faces(&self) -> &BTreeSet<Face> {
        &self.mesh.faces
    }

    fn edges(&self) -> Vec<Edge> {
        self.mesh.adjacency.keys().copied().collect()
    }

    fn has_edge(&self, e: Edge) -> bool {
        self.mesh.adjacency.contains_key(&e)
    }

    fn edge_quad(&self, e: Edge) -> Result<Quad, ComplexError> {
        self.mesh.edge_quad(e)
    }

    fn apply_flip(&self, e: Edge) -> Result<(Self, Edge), ComplexError> {
        let (mesh, quad) = self.mesh.flip(e)?;
        Ok((Patch { mesh }, quad.opposite))
    }
}

/// Convex pentagon on vertices 1..=5 (boundary 1-2-3-4-5), fanned from
/// vertex 1: diagonals {1,3} and {1,4}.
pub fn pentagon_patch() -> Patch {
    Patch::from_faces([Face::new(1, 2, 3), Face::new(1, 3, 4), Face::new(1, 4, 5)])
}

/// Boundary of the canonical pentagon in cyclic order `a, b, c, d, e`.
pub fn pentagon_boundary() -> [Edge; 5] {
    [
        Edge::new(1, 2),
        Edge::new(2, 3),
        Edge::new(3, 4),
        Edge::new(4, 5),
        Edge::new(5, 1),
    ]
}

/// The tetrahedron on vertices 1..=4.
pub fn tetrahedron() -> Triangulation {
    Triangulation::from_faces(
        4,
        [
            Face::new(1, 2, 4),
            Face::new(2, 1, 3),
            Face::new(1, 4, 3),
            Face::new(2, 3, 4),
        ],
    )
}

/// Double pyramid over the triangle 1-2-3 with apexes 4 (above) and 5.
pub fn triangular_bipyramid() -> Triangulation {
    Triangulation::from_faces(
        5,
        [
            Face::new(1, 2, 4),
            Face::new(2, 3, 4),
            Face::new(3, 1, 4),
            Face::new(2, 1, 5),
            Face::new(3, 2, 5),
            Face::new(1, 3, 5),
        ],
    )
}

/// Octahedron with equator 1-2-3-4 and poles 5 (above) and 6.
pub fn octahedron() -> Triangulation {
    let mut faces = Vec::new();
    for i in 0..4 {
        let (a, b) = (i + 1, (i + 1) % 4 + 1);
        faces.push(Face::new(a, b, 5));
        faces.push(Face::new(b, a, 6));
    }
    Triangulation::from_faces(6, faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_canonical_rotation_keeps_orientation() {
        assert_eq!(Face::new(3, 1, 2), Face::new(1, 2, 3));
        assert_ne!(Face::new(1, 3, 2), Face::new(1, 2, 3));
        assert_eq!(Face::new(1, 3, 2).vertex_set(), [1, 2, 3]);
    }

    #[test]
    fn edge_parse_and_display() {
        let e: Edge = "7-2".parse().unwrap();
        assert_eq!(e, Edge::new(2, 7));
        assert_eq!(e.to_string(), "2-7");
        assert!("3-3".parse::<Edge>().is_err());
        assert!("3".parse::<Edge>().is_err());
    }

    #[test]
    fn standard_shapes_validate() {
        assert!(validate(&tetrahedron()).is_empty());
        assert!(validate(&triangular_bipyramid()).is_empty());
        assert!(validate(&octahedron()).is_empty());
        assert_eq!(tetrahedron().edge_count(), 6);
        assert_eq!(tetrahedron().face_count(), 4);
    }

    #[test]
    fn tetrahedron_missing_face() {
        let faces: Vec<Face> = tetrahedron().faces().iter().skip(1).copied().collect();
        let t = Triangulation::from_faces(4, faces);
        let msgs: Vec<String> = validate(&t).iter().map(|v| v.to_string()).collect();
        assert!(msgs.iter().any(|m| m.starts_with("edge in 1 face: ")), "{msgs:?}");
    }

    #[test]
    fn wrong_edge_count() {
        // Octahedron plus a face on three of its vertices: 13 edges for n = 6.
        let mut faces: Vec<Face> = octahedron().faces().iter().copied().collect();
        faces.push(Face::new(1, 3, 5));
        let t = Triangulation::from_faces(6, faces);
        assert_eq!(t.edge_count(), 13);
        let v = validate(&t);
        assert!(v.contains(&Violation::EdgeCount {
            expected: 12,
            found: 13
        }));
        assert!(v[..].iter().any(|x| x.to_string().starts_with("edge count ≠ 3n−6")));
    }

    #[test]
    fn reversed_face_is_an_orientation_violation() {
        let mut faces: Vec<Face> = tetrahedron().faces().iter().copied().collect();
        let [a, b, c] = faces[0].vertices();
        faces[0] = Face::new(a, c, b);
        let v = validate(&Triangulation::from_faces(4, faces));
        assert!(v.iter().any(|x| matches!(x, Violation::Orientation { .. })));
    }

    #[test]
    fn pinched_vertex_is_caught() {
        // Two tetrahedra glued at vertex 1: the link of 1 is two cycles.
        let t1 = tetrahedron();
        let t2 = tetrahedron().relabel(|v| if v == 1 { 1 } else { v + 3 });
        let faces: Vec<Face> = t1.faces().iter().chain(t2.faces().iter()).copied().collect();
        let v = validate(&Triangulation::from_faces(7, faces));
        assert!(v.contains(&Violation::VertexLink { vertex: 1 }));
    }

    #[test]
    fn tetrahedron_quad() {
        let t = tetrahedron();
        let q = t.edge_quad(Edge::new(1, 2)).unwrap();
        assert_eq!(
            q.boundary,
            [Edge::new(1, 3), Edge::new(3, 2), Edge::new(2, 4), Edge::new(4, 1)]
        );
        assert_eq!(q.opposite, Edge::new(3, 4));
        assert_eq!(
            t.edge_quad(Edge::new(1, 9)),
            Err(ComplexError::MissingEdge(Edge::new(1, 9)))
        );
    }

    #[test]
    fn tetrahedron_flip_duplicates_an_edge() {
        let err = tetrahedron().apply_flip(Edge::new(1, 2)).unwrap_err();
        assert_eq!(
            err,
            ComplexError::DuplicateEdge {
                edge: Edge::new(1, 2),
                existing: Edge::new(3, 4)
            }
        );
    }

    #[test]
    fn bipyramid_equatorial_flip() {
        let t = triangular_bipyramid();
        let q = t.edge_quad(Edge::new(1, 2)).unwrap();
        assert_eq!(q.opposite, Edge::new(4, 5));
        let (t2, created) = t.apply_flip(Edge::new(1, 2)).unwrap();
        assert_eq!(created, Edge::new(4, 5));
        assert!(validate(&t2).is_empty());
        assert!(!t2.has_edge(Edge::new(1, 2)));
        // every other face is untouched
        let kept: BTreeSet<_> = t.faces().difference(t2.faces()).copied().collect();
        assert_eq!(kept, q.faces.iter().copied().collect());
        let (back, restored) = t2.apply_flip(created).unwrap();
        assert_eq!(restored, Edge::new(1, 2));
        assert_eq!(back, t);
    }

    #[test]
    fn bipyramid_equatorial_edges_are_not_far() {
        let t = triangular_bipyramid();
        assert!(!t.are_far(Edge::new(1, 2), Edge::new(2, 3)).unwrap());
        assert!(!t.are_far(Edge::new(1, 2), Edge::new(1, 2)).unwrap());
    }

    #[test]
    fn pentagon_patch_shape() {
        let p = pentagon_patch();
        assert!(p.validate().is_empty());
        assert_eq!(p.faces().len(), 3);
        assert_eq!(p.diagonals(), vec![Edge::new(1, 3), Edge::new(1, 4)]);
        assert_eq!(p.boundary_edges().len(), 5);
        assert_eq!(
            p.edge_quad(Edge::new(1, 2)),
            Err(ComplexError::BoundaryEdge(Edge::new(1, 2)))
        );
        let (flipped, created) = p.apply_flip(Edge::new(1, 3)).unwrap();
        assert_eq!(created, Edge::new(2, 4));
        assert!(flipped.validate().is_empty());
        assert_eq!(flipped.diagonals(), vec![Edge::new(1, 4), Edge::new(2, 4)]);
    }

    #[test]
    fn pentagon_five_cycle() {
        let p = pentagon_patch();
        let (patches, flipped) = p.alternating_walk(Edge::new(1, 3), 5).unwrap();
        assert_eq!(patches[5], p);
        assert_eq!(
            flipped,
            vec![
                Edge::new(1, 3),
                Edge::new(1, 4),
                Edge::new(2, 4),
                Edge::new(2, 5),
                Edge::new(3, 5)
            ]
        );
        let distinct: BTreeSet<Vec<Edge>> = patches[..5].iter().map(|p| p.diagonals()).collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn pentagon_flip_graph_is_a_five_cycle() {
        // Exhaustive search over the flip graph from the fan triangulation.
        let start = pentagon_patch();
        let mut nodes: Vec<Patch> = vec![start.clone()];
        let mut edges = BTreeSet::new();
        let mut i = 0;
        while i < nodes.len() {
            let cur = nodes[i].clone();
            for d in cur.diagonals() {
                let (next, _) = cur.apply_flip(d).unwrap();
                let j = match nodes.iter().position(|x| *x == next) {
                    Some(j) => j,
                    None => {
                        nodes.push(next);
                        nodes.len() - 1
                    }
                };
                edges.insert((i.min(j), i.max(j)));
            }
            i += 1;
        }
        assert_eq!(nodes.len(), 5);
        assert_eq!(edges.len(), 5);
        for k in 0..5 {
            let deg = edges.iter().filter(|(a, b)| *a == k || *b == k).count();
            assert_eq!(deg, 2);
        }
    }
}
