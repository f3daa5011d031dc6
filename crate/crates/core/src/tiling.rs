//! Finite balls of the Cayley graph, built combinatorially by closing faces,
//! then embedded as a tiling by regular polygons.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coset::{cyclic_closure, CosetTable};
use crate::error::{Error, Result};
use crate::geometry::{
    generator_frames, solve_edge_length, AngleSolution, GeometryClass, Isometry, ModelPoint,
};
use crate::scheme::{Dart, FaceLength, LabelingScheme, Side, TypeVector};
use crate::word::GroupWord;

pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Upper bound on cosets allocated during construction.
    pub vertex_cap: usize,
    /// Extra depth enumerated beyond the radius of an infinite ball so that
    /// faces near the boundary close. `None` picks half the longest finite face plus one.
    pub margin: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
            margin: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    fn times(self, tau: i8) -> Orientation {
        match (self, tau > 0) {
            (o, true) => o,
            (Orientation::Ccw, false) => Orientation::Cw,
            (Orientation::Cw, false) => Orientation::Ccw,
        }
    }

    fn side(self) -> Side {
        match self {
            Orientation::Ccw => Side::Plus,
            Orientation::Cw => Side::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord {
    pub id: usize,
    /// Graph distance from the root.
    pub distance: usize,
    /// Predecessor on a shortest path from the root and the letter leading here.
    pub parent: Option<(usize, usize)>,
    /// Slot `j` holds the neighbour across the edge labelled `a_j` here,
    /// i.e. the vertex reached by the letter `a_{σ(j)}`.
    pub slots: Vec<Option<usize>>,
    pub orientation: Orientation,
    pub position: ModelPoint<f64>,
    pub frame: Isometry<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub u_slot: usize,
    pub v: usize,
    pub v_slot: usize,
    /// Letter leading from `u` to `v`.
    pub generator: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRecord {
    pub face_class: usize,
    pub length: FaceLength,
    /// Corners in walking order: the vertex and the dart naming the face there.
    pub boundary: Vec<(usize, Dart)>,
    pub closed: bool,
}

impl FaceRecord {
    /// Edges on the boundary that lie in the ball.
    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.boundary.len()
        } else {
            self.boundary.len().saturating_sub(1)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub scheme: LabelingScheme,
    pub type_vector: TypeVector,
    pub solution: AngleSolution,
    pub radius: usize,
    pub root: usize,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<Edge>,
    pub faces: Vec<FaceRecord>,
}

pub fn build_ball(scheme: &LabelingScheme, tv: &TypeVector, radius: usize) -> Result<Ball> {
    build_ball_with(scheme, tv, radius, &BuildOptions::default())
}

/// Builds the radius-`radius` ball. Spherical graphs are always enumerated in
/// full; the returned ball is then cut down to the requested radius.
pub fn build_ball_with(
    scheme: &LabelingScheme,
    tv: &TypeVector,
    radius: usize,
    options: &BuildOptions,
) -> Result<Ball> {
    scheme.check_type_vector(tv)?;
    let solution = solve_edge_length(tv)?;
    let pres = scheme.canonical_presentation(tv)?;
    let words: Vec<Vec<usize>> = pres.face_relators.iter().map(|f| f.word.0.clone()).collect();
    let rels = cyclic_closure(&words, scheme.sigma());
    let mut table = CosetTable::new(scheme.sigma(), options.vertex_cap);
    if solution.geometry == GeometryClass::Spherical {
        table.enumerate(&rels)?;
    } else {
        let longest = tv.entries().iter().filter_map(|k| k.finite()).max().unwrap_or(0);
        let margin = options.margin.unwrap_or(longest.div_ceil(2) + 1);
        table.enumerate_to_depth(&rels, radius.saturating_add(margin))?;
    }
    assemble(scheme, tv, solution, &table, radius)
}

/// The whole Cayley graph of a spherical type vector.
pub fn build_complete(scheme: &LabelingScheme, tv: &TypeVector, options: &BuildOptions) -> Result<Ball> {
    let ball = build_ball_with(scheme, tv, usize::MAX, options)?;
    if ball.solution.geometry != GeometryClass::Spherical {
        return Err(Error::IncompleteBall {
            open_slots: ball.open_slots(),
        });
    }
    Ok(ball)
}

fn assemble(
    scheme: &LabelingScheme,
    tv: &TypeVector,
    solution: AngleSolution,
    table: &CosetTable,
    radius: usize,
) -> Result<Ball> {
    let d = scheme.degree();
    let sigma = scheme.sigma();
    let frames = generator_frames(scheme, &solution)?;
    let geometry = solution.geometry;

    // breadth-first from the root, letters in increasing order
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut cosets = vec![0usize];
    let mut vertices = vec![VertexRecord {
        id: 0,
        distance: 0,
        parent: None,
        slots: vec![None; d],
        orientation: Orientation::Ccw,
        position: ModelPoint::base(geometry, 53),
        frame: Isometry::identity(geometry, 53),
    }];
    ids.insert(0, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut max_distance = 0;
    while let Some(v) = queue.pop_front() {
        if vertices[v].distance >= radius {
            continue;
        }
        for x in 0..d {
            let Some(c) = table.get(cosets[v], x) else { continue };
            if ids.contains_key(&c) {
                continue;
            }
            let id = vertices.len();
            ids.insert(c, id);
            cosets.push(c);
            let frame = vertices[v].frame.compose(&frames.crossing[x]);
            let position = frame.apply(&ModelPoint::base(geometry, 53));
            let distance = vertices[v].distance + 1;
            max_distance = max_distance.max(distance);
            vertices.push(VertexRecord {
                id,
                distance,
                parent: Some((v, x)),
                slots: vec![None; d],
                orientation: vertices[v].orientation.times(scheme.tau()[x]),
                position,
                frame,
            });
            queue.push_back(id);
        }
    }
    for v in 0..vertices.len() {
        for j in 0..d {
            vertices[v].slots[j] = table.get(cosets[v], sigma[j]).and_then(|c| ids.get(&c).copied());
        }
    }

    let mut edges = Vec::new();
    for (v, rec) in vertices.iter().enumerate() {
        for (j, slot) in rec.slots.iter().enumerate() {
            if let Some(u) = *slot {
                if (v, j) <= (u, sigma[j]) {
                    edges.push(Edge {
                        u: v,
                        u_slot: j,
                        v: u,
                        v_slot: sigma[j],
                        generator: sigma[j],
                    });
                }
            }
        }
    }

    let mut ball = Ball {
        scheme: scheme.clone(),
        type_vector: tv.clone(),
        solution,
        radius,
        root: 0,
        vertices,
        edges,
        faces: Vec::new(),
    };
    if ball.is_complete() {
        ball.radius = max_distance;
    }
    ball.faces = ball.collect_faces();
    Ok(ball)
}

impl Ball {
    pub fn geometry(&self) -> GeometryClass {
        self.solution.geometry
    }

    pub fn edge_length(&self) -> f64 {
        self.solution.edge_length
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of empty slots over all vertices.
    pub fn open_slots(&self) -> usize {
        self.vertices
            .iter()
            .map(|v| v.slots.iter().filter(|s| s.is_none()).count())
            .sum()
    }

    /// No open slots: the ball is the whole (finite) Cayley graph.
    pub fn is_complete(&self) -> bool {
        self.open_slots() == 0
    }

    pub fn max_distance(&self) -> usize {
        self.vertices.iter().map(|v| v.distance).max().unwrap_or(0)
    }

    /// Vertex reached from `v` by the letter `a_x`.
    pub fn neighbor(&self, v: usize, x: usize) -> Option<usize> {
        self.vertices[v].slots[self.scheme.inverse_of(x)]
    }

    pub fn trace(&self, from: usize, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(from, |v, &x| self.neighbor(v, x))
    }

    /// A shortest word from the root to `v`.
    pub fn word_to(&self, mut v: usize) -> GroupWord {
        let mut letters = Vec::new();
        while let Some((p, x)) = self.vertices[v].parent {
            letters.push(x);
            v = p;
        }
        letters.reverse();
        GroupWord(letters)
    }

    /// Whether `word` is trivial, if this ball is large enough to tell.
    ///
    /// The first half is traced from the root and the inverse of the second
    /// half likewise; the word is trivial iff both walks end together.
    pub fn decide_word(&self, word: &GroupWord) -> Option<bool> {
        let w = word.letters();
        if self.is_complete() {
            return self.trace(self.root, w).map(|v| v == self.root);
        }
        let k = w.len().div_ceil(2);
        if k > self.radius {
            return None;
        }
        let front = self.trace(self.root, &w[..k])?;
        let back_word: Vec<usize> = w[k..].iter().rev().map(|&x| self.scheme.inverse_of(x)).collect();
        let back = self.trace(self.root, &back_word)?;
        Some(front == back)
    }

    fn corner_dart(&self, v: usize, generator: usize) -> Dart {
        Dart {
            generator,
            side: self.vertices[v].orientation.side(),
        }
    }

    fn face_length(&self, class: usize) -> FaceLength {
        let fp = self.scheme.orbits();
        self.type_vector.entries()[fp.class_members(class)[0]]
    }

    fn collect_faces(&self) -> Vec<FaceRecord> {
        let d = self.scheme.degree();
        let fp = self.scheme.orbits();
        let mut seen = vec![false; self.vertices.len() * d];
        let mut faces = Vec::new();
        let step = |v: usize, dart: Dart| -> Option<(usize, Dart)> {
            let next = self.scheme.dart_step(dart);
            self.neighbor(v, next.generator).map(|w| (w, next))
        };
        let step_back = |v: usize, dart: Dart| -> Option<(usize, Dart)> {
            let prev = self.scheme.dart_step_inv(dart);
            self.neighbor(v, self.scheme.inverse_of(dart.generator)).map(|w| (w, prev))
        };
        for v in 0..self.vertices.len() {
            for g in 0..d {
                if seen[v * d + g] {
                    continue;
                }
                let start = (v, self.corner_dart(v, g));
                let mut boundary = vec![start];
                let mut closed = false;
                let mut cur = start;
                while let Some(next) = step(cur.0, cur.1) {
                    if next == start {
                        closed = true;
                        break;
                    }
                    boundary.push(next);
                    cur = next;
                }
                if !closed {
                    let mut head = Vec::new();
                    let mut cur = start;
                    while let Some(prev) = step_back(cur.0, cur.1) {
                        head.push(prev);
                        cur = prev;
                    }
                    head.reverse();
                    head.extend(boundary);
                    boundary = head;
                }
                for &(u, dart) in &boundary {
                    seen[u * d + dart.generator] = true;
                }
                let face_class = fp.dart_class(start.1);
                faces.push(FaceRecord {
                    face_class,
                    length: self.face_length(face_class),
                    boundary,
                    closed,
                });
            }
        }
        faces
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .map(|v| {
                json!({
                    "id": v.id,
                    "distance": v.distance,
                    "orientation": v.orientation,
                    "position": v.position.to_f64(),
                    "slots": v.slots,
                })
            })
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| json!({"u": e.u, "v": e.v, "generator": e.generator + 1}))
            .collect();
        let faces: Vec<_> = self
            .faces
            .iter()
            .map(|f| {
                json!({
                    "class": f.face_class,
                    "length": match f.length {
                        FaceLength::Finite(k) => json!(k),
                        FaceLength::Infinite => json!("inf"),
                    },
                    "closed": f.closed,
                    "vertices": f.boundary.iter().map(|c| c.0).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "scheme": self.scheme,
            "type_vector": self.type_vector,
            "geometry": self.solution.geometry,
            "edge_length": self.solution.edge_length,
            "angles": self.solution.angles,
            "radius": self.radius,
            "root": self.root,
            "vertices": vertices,
            "edges": edges,
            "faces": faces,
        })
    }
}

/// Combinatorial word problem: traces the word in a ball of half its length.
pub fn wp_combinatorial(scheme: &LabelingScheme, tv: &TypeVector, word: &GroupWord) -> Result<bool> {
    wp_combinatorial_with(scheme, tv, word, &BuildOptions::default())
}

pub fn wp_combinatorial_with(
    scheme: &LabelingScheme,
    tv: &TypeVector,
    word: &GroupWord,
    options: &BuildOptions,
) -> Result<bool> {
    word.check_degree(scheme.degree())?;
    let radius = word.len().div_ceil(2);
    let ball = build_ball_with(scheme, tv, radius, options)?;
    ball.decide_word(word)
        .ok_or_else(|| Error::InvalidWord("word leaves the constructed ball".into()))
}

/// `V − E + F` of a complete ball.
pub fn euler_characteristic(ball: &Ball) -> Result<i64> {
    let open = ball.open_slots();
    if open > 0 {
        return Err(Error::IncompleteBall { open_slots: open });
    }
    let f = ball.faces.iter().filter(|f| f.closed).count();
    Ok(ball.vertex_count() as i64 - ball.edge_count() as i64 + f as i64)
}
