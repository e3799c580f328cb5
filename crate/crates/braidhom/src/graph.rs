//! Finite multigraphs with explicit half-edge incidence.
//!
//! A graph here is a finite 1-complex: self-loops and parallel edges are
//! allowed.  Every edge owns exactly two half-edges; the half-edge with
//! index `2e + s` is end `s` of edge `e`.  Vertex and edge identifiers are
//! opaque strings, and the total order used everywhere downstream (basis
//! enumeration, sign conventions) is insertion order.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex index {0} out of range")]
    VertexIndex(usize),
    #[error("edge index {0} out of range")]
    EdgeIndex(usize),
    #[error("invalid parameter for standard graph: {0}")]
    BadParameter(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
}

/// A finite multigraph.  Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    vertex_ids: Vec<String>,
    edge_ids: Vec<String>,
    /// Endpoint vertex indices of each edge; half-edge `2e` attaches at
    /// `endpoints[e].0`, half-edge `2e + 1` at `endpoints[e].1`.
    endpoints: Vec<(usize, usize)>,
    /// Half-edges at each vertex, ascending.
    incidence: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}: {} vertices, {} edges)", self.name, self.n_vertices(), self.n_edges())
    }
}

impl Graph {
    /// Builds a graph from vertex ids and edge endpoint pairs.  Edges get
    /// automatic ids `e1, e2, ...` in insertion order.
    pub fn build(
        vertex_ids: &[&str],
        edge_endpoints: &[(&str, &str)],
    ) -> Result<Graph, GraphError> {
        let named: Vec<(String, &str, &str)> = edge_endpoints
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (format!("e{}", i + 1), a, b))
            .collect();
        let named_ref: Vec<(&str, &str, &str)> =
            named.iter().map(|(id, a, b)| (id.as_str(), *a, *b)).collect();
        Graph::build_named("", vertex_ids, &named_ref)
    }

    /// Builds a graph with explicit edge ids.
    pub fn build_named(
        name: &str,
        vertex_ids: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Graph, GraphError> {
        let mut g = Graph {
            name: name.to_string(),
            vertex_ids: Vec::new(),
            edge_ids: Vec::new(),
            endpoints: Vec::new(),
            incidence: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
        };
        for v in vertex_ids {
            g.push_vertex(v)?;
        }
        for (id, a, b) in edges {
            let u = g
                .vertex_index
                .get(*a)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let w = g
                .vertex_index
                .get(*b)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            g.push_edge(id, u, w)?;
        }
        Ok(g)
    }

    fn push_vertex(&mut self, id: &str) -> Result<usize, GraphError> {
        if self.vertex_index.contains_key(id) {
            return Err(GraphError::DuplicateVertex(id.to_string()));
        }
        let idx = self.vertex_ids.len();
        self.vertex_ids.push(id.to_string());
        self.vertex_index.insert(id.to_string(), idx);
        self.incidence.push(Vec::new());
        Ok(idx)
    }

    fn push_edge(&mut self, id: &str, u: usize, w: usize) -> Result<usize, GraphError> {
        if self.edge_index.contains_key(id) {
            return Err(GraphError::DuplicateEdge(id.to_string()));
        }
        let e = self.edge_ids.len();
        self.edge_ids.push(id.to_string());
        self.edge_index.insert(id.to_string(), e);
        self.endpoints.push((u, w));
        self.incidence[u].push(2 * e);
        self.incidence[w].push(2 * e + 1);
        Ok(e)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Graph {
        self.name = name.to_string();
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edge_ids[e]
    }

    pub fn vertex(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<usize, GraphError> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    pub fn is_self_loop(&self, e: usize) -> bool {
        self.endpoints[e].0 == self.endpoints[e].1
    }

    /// Half-edges at `v`, ascending; `d(v)` is the length of this slice.
    pub fn half_edges_at(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn n_half_edges(&self) -> usize {
        2 * self.n_edges()
    }

    /// The edge a half-edge belongs to.
    pub fn he_edge(&self, h: usize) -> usize {
        h / 2
    }

    /// The vertex a half-edge attaches to.
    pub fn he_vertex(&self, h: usize) -> usize {
        let (u, w) = self.endpoints[h / 2];
        if h % 2 == 0 {
            u
        } else {
            w
        }
    }

    /// The other half-edge of the same edge.
    pub fn he_partner(&self, h: usize) -> usize {
        h ^ 1
    }

    /// Half-edge of edge `e` attaching at `v` on side `which` (0 or 1 for
    /// self-loops; for ordinary edges `which` is ignored).
    pub fn half_edge_of(&self, e: usize, v: usize) -> Option<usize> {
        let (u, w) = self.endpoints[e];
        if u == v {
            Some(2 * e)
        } else if w == v {
            Some(2 * e + 1)
        } else {
            None
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.n_vertices()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> {
        0..self.n_edges()
    }

    /// Connected components; returns (count, component index per vertex).
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.n_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for &h in &self.incidence[v] {
                    let w = self.he_vertex(self.he_partner(h));
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    /// First Betti number: |E| - |V| + #components.
    pub fn betti1(&self) -> usize {
        let (c, _) = self.components();
        self.n_edges() + c - self.n_vertices()
    }

    /// Subdivides edge `e` into `pieces[e]` pieces (>= 1 each).  Returns the
    /// subdivided graph and the smoothing morphism back to `self`.
    pub fn subdivide(
        &self,
        pieces: &[usize],
    ) -> Result<(Graph, crate::morphism::GraphMorphism), GraphError> {
        if pieces.len() != self.n_edges() {
            return Err(GraphError::BadParameter(format!(
                "pieces list has length {}, expected {}",
                pieces.len(),
                self.n_edges()
            )));
        }
        if let Some(e) = pieces.iter().position(|&p| p == 0) {
            return Err(GraphError::BadParameter(format!(
                "edge `{}` subdivided into 0 pieces",
                self.edge_id(e)
            )));
        }
        let mut g = Graph {
            name: format!("{}'", self.name),
            vertex_ids: Vec::new(),
            edge_ids: Vec::new(),
            endpoints: Vec::new(),
            incidence: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
        };
        for id in &self.vertex_ids {
            g.push_vertex(id).unwrap();
        }
        // Interior vertices per edge, appended after the originals.
        let mut interior: Vec<Vec<usize>> = Vec::with_capacity(self.n_edges());
        for e in self.edges() {
            let mut ivs = Vec::new();
            for i in 1..pieces[e] {
                ivs.push(g.push_vertex(&format!("{}.v{}", self.edge_id(e), i)).unwrap());
            }
            interior.push(ivs);
        }
        // Piece edges, grouped per original edge in original edge order.
        let mut edge_image = Vec::new();
        let mut first_piece = vec![0usize; self.n_edges()];
        let mut last_piece = vec![0usize; self.n_edges()];
        for e in self.edges() {
            let (u, w) = self.endpoints[e];
            let p = pieces[e];
            let chain: Vec<usize> = std::iter::once(u)
                .chain(interior[e].iter().copied())
                .chain(std::iter::once(w))
                .collect();
            for j in 0..p {
                let id = if p == 1 {
                    self.edge_id(e).to_string()
                } else {
                    format!("{}.{}", self.edge_id(e), j + 1)
                };
                let pe = g.push_edge(&id, chain[j], chain[j + 1]).unwrap();
                if j == 0 {
                    first_piece[e] = pe;
                }
                if j == p - 1 {
                    last_piece[e] = pe;
                }
                edge_image.push(e);
            }
        }
        // Smoothing morphism: pieces map onto their original edge, original
        // vertices map to themselves, interior vertices map into the edge.
        use crate::morphism::{GraphMorphism, VertexImage};
        let mut vertex_image = Vec::with_capacity(g.n_vertices());
        for v in 0..self.n_vertices() {
            let mut half_edge_map = Vec::new();
            for &h in g.half_edges_at(v) {
                let pe = g.he_edge(h);
                let orig = edge_image[pe];
                // End pieces carry the original half-edges.
                let target_h = if pe == first_piece[orig] && h % 2 == 0 {
                    2 * orig
                } else {
                    debug_assert!(pe == last_piece[orig] && h % 2 == 1);
                    2 * orig + 1
                };
                half_edge_map.push((h, target_h));
            }
            vertex_image.push(VertexImage::ToVertex { vertex: v, half_edge_map });
        }
        for e in self.edges() {
            for _ in &interior[e] {
                vertex_image.push(VertexImage::ToEdge(e));
            }
        }
        let m = GraphMorphism::new(g.clone(), self.clone(), edge_image, vertex_image);
        m.validate().expect("subdivision smoothing must validate");
        Ok((g, m))
    }

    /// Replaces `v` by one univalent vertex per half-edge at `v`.  Returns
    /// the exploded graph and the canonical morphism back to `self` (each
    /// new vertex mapped into the interior of its edge).
    pub fn vertex_explosion(
        &self,
        v: usize,
    ) -> Result<(Graph, crate::morphism::GraphMorphism), GraphError> {
        if v >= self.n_vertices() {
            return Err(GraphError::VertexIndex(v));
        }
        use crate::morphism::{GraphMorphism, VertexImage};
        let mut g = Graph {
            name: format!("{}_{}", self.name, self.vertex_id(v)),
            vertex_ids: Vec::new(),
            edge_ids: Vec::new(),
            endpoints: Vec::new(),
            incidence: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
        };
        // v is replaced, in place, by its half-edges in ascending order.
        let mut old_to_new = vec![usize::MAX; self.n_vertices()];
        let mut he_to_new: HashMap<usize, usize> = HashMap::new();
        for u in self.vertices() {
            if u == v {
                for (i, &h) in self.half_edges_at(v).iter().enumerate() {
                    let idx = g.push_vertex(&format!("{}@{}", self.vertex_id(v), i)).unwrap();
                    he_to_new.insert(h, idx);
                }
            } else {
                old_to_new[u] = g.push_vertex(self.vertex_id(u)).unwrap();
            }
        }
        for e in self.edges() {
            let (a, b) = self.endpoints[e];
            let na = if a == v { he_to_new[&(2 * e)] } else { old_to_new[a] };
            let nb = if b == v { he_to_new[&(2 * e + 1)] } else { old_to_new[b] };
            g.push_edge(self.edge_id(e), na, nb).unwrap();
        }
        let edge_image: Vec<usize> = self.edges().collect();
        let mut vertex_image = vec![VertexImage::ToEdge(0); g.n_vertices()];
        for u in self.vertices() {
            if u == v {
                continue;
            }
            let half_edge_map = self.half_edges_at(u).iter().map(|&h| (h, h)).collect();
            vertex_image[old_to_new[u]] = VertexImage::ToVertex { vertex: u, half_edge_map };
        }
        for (&h, &idx) in &he_to_new {
            vertex_image[idx] = VertexImage::ToEdge(self.he_edge(h));
        }
        let m = GraphMorphism::new(g.clone(), self.clone(), edge_image, vertex_image);
        m.validate().expect("explosion morphism must validate");
        Ok((g, m))
    }

    /// Contracts edge `e`.  A self-loop is deleted.  The returned
    /// [`Contraction`] records the identification of the minor's vertices
    /// and edges with those of `self`.
    pub fn contract_edge(&self, e: usize) -> Result<Contraction, GraphError> {
        if e >= self.n_edges() {
            return Err(GraphError::EdgeIndex(e));
        }
        let (v1, v2) = self.endpoints[e];
        let loop_edge = v1 == v2;
        let (keep, drop) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
        let mut g = Graph {
            name: format!("{}/{}", self.name, self.edge_id(e)),
            vertex_ids: Vec::new(),
            edge_ids: Vec::new(),
            endpoints: Vec::new(),
            incidence: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
        };
        let mut vertex_to_orig = Vec::new();
        let mut orig_to_new = vec![usize::MAX; self.n_vertices()];
        for u in self.vertices() {
            if !loop_edge && u == drop {
                continue;
            }
            orig_to_new[u] = g.push_vertex(self.vertex_id(u)).unwrap();
            vertex_to_orig.push(u);
        }
        if !loop_edge {
            orig_to_new[drop] = orig_to_new[keep];
        }
        let mut edge_to_orig = Vec::new();
        for f in self.edges() {
            if f == e {
                continue;
            }
            let (a, b) = self.endpoints[f];
            g.push_edge(self.edge_id(f), orig_to_new[a], orig_to_new[b]).unwrap();
            edge_to_orig.push(f);
        }
        Ok(Contraction {
            minor: g,
            original_edge: e,
            was_loop: loop_edge,
            merged: if loop_edge { None } else { Some((keep, drop)) },
            vertex_to_orig,
            edge_to_orig,
        })
    }

    /// Disjoint union; ids of `other` are prefixed to stay unique.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        g.name = format!("{}+{}", self.name, other.name);
        let offset = g.n_vertices();
        for id in &other.vertex_ids {
            g.push_vertex(&format!("u2.{}", id)).unwrap();
        }
        for e in other.edges() {
            let (a, b) = other.endpoints[e];
            g.push_edge(&format!("u2.{}", other.edge_id(e)), offset + a, offset + b).unwrap();
        }
        g
    }

    /// Brute-force isomorphism test for small graphs (test helper).
    pub fn is_isomorphic_small(&self, other: &Graph) -> bool {
        if self.n_vertices() != other.n_vertices() || self.n_edges() != other.n_edges() {
            return false;
        }
        let n = self.n_vertices();
        if n > 9 {
            panic!("is_isomorphic_small is for graphs with at most 9 vertices");
        }
        let mut deg_a: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut deg_b: Vec<usize> = (0..n).map(|v| other.degree(v)).collect();
        deg_a.sort_unstable();
        deg_b.sort_unstable();
        if deg_a != deg_b {
            return false;
        }
        // Edge multiset under a vertex bijection must match.
        let edge_multiset = |g: &Graph, perm: &[usize]| {
            let mut v: Vec<(usize, usize)> = g
                .edges()
                .map(|e| {
                    let (a, b) = g.endpoints(e);
                    let (a, b) = (perm[a], perm[b]);
                    (a.min(b), a.max(b))
                })
                .collect();
            v.sort_unstable();
            v
        };
        let ident: Vec<usize> = (0..n).collect();
        let target = edge_multiset(other, &ident);
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| edge_multiset(self, p) == target)
    }
}

fn permute(perm: &mut Vec<usize>, k: usize, check: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return check(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if permute(perm, k + 1, check) {
            return true;
        }
        perm.swap(k, i);
    }
    false
}

/// Result of contracting an edge: the minor plus the identification of its
/// vertices and edges inside the original graph.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub minor: Graph,
    pub original_edge: usize,
    pub was_loop: bool,
    /// For a non-loop contraction, the merged original endpoints
    /// (kept id, dropped id).
    pub merged: Option<(usize, usize)>,
    /// Minor vertex index -> original vertex index (merged vertex maps to
    /// the kept endpoint).
    pub vertex_to_orig: Vec<usize>,
    /// Minor edge index -> original edge index.
    pub edge_to_orig: Vec<usize>,
}

impl Contraction {
    /// Original half-edge corresponding to a minor half-edge.
    pub fn he_to_orig(&self, h: usize) -> usize {
        2 * self.edge_to_orig[h / 2] + h % 2
    }
}

/// Named graph families used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardGraph {
    Interval,
    Star(usize),
    Cycle(usize),
    Theta(usize),
    Lollipop(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Net,
}

/// Constructs a member of a named family with deterministic labels.
pub fn standard_graph(kind: StandardGraph) -> Result<Graph, GraphError> {
    use StandardGraph::*;
    match kind {
        Interval => Graph::build_named("I", &["0", "1"], &[("e", "0", "1")]),
        Star(n) => {
            if n < 1 {
                return Err(GraphError::BadParameter("star needs n >= 1".into()));
            }
            let leaves: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let mut vs: Vec<&str> = vec!["c"];
            vs.extend(leaves.iter().map(|s| s.as_str()));
            let eids: Vec<String> = (1..=n).map(|i| format!("e{}", i)).collect();
            let edges: Vec<(&str, &str, &str)> =
                (0..n).map(|i| (eids[i].as_str(), "c", leaves[i].as_str())).collect();
            Graph::build_named(&format!("S{}", n), &vs, &edges)
        }
        Cycle(n) => {
            if n < 1 {
                return Err(GraphError::BadParameter("cycle needs n >= 1".into()));
            }
            let vids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let vs: Vec<&str> = vids.iter().map(|s| s.as_str()).collect();
            let eids: Vec<String> = (1..=n).map(|i| format!("e{}", i)).collect();
            let edges: Vec<(&str, &str, &str)> = (0..n)
                .map(|i| (eids[i].as_str(), vids[i].as_str(), vids[(i + 1) % n].as_str()))
                .collect();
            Graph::build_named(&format!("C{}", n), &vs, &edges)
        }
        Theta(n) => {
            if n < 2 {
                return Err(GraphError::BadParameter("theta needs n >= 2".into()));
            }
            let eids: Vec<String> = (1..=n).map(|i| format!("e{}", i)).collect();
            let edges: Vec<(&str, &str, &str)> =
                (0..n).map(|i| (eids[i].as_str(), "u", "w")).collect();
            Graph::build_named(&format!("Theta{}", n), &["u", "w"], &edges)
        }
        Lollipop(n) => {
            if n < 1 {
                return Err(GraphError::BadParameter("lollipop needs n >= 1".into()));
            }
            let vids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let mut vs: Vec<&str> = vids.iter().map(|s| s.as_str()).collect();
            vs.push("t");
            let eids: Vec<String> = (1..=n).map(|i| format!("e{}", i)).collect();
            let mut edges: Vec<(&str, &str, &str)> = (0..n)
                .map(|i| (eids[i].as_str(), vids[i].as_str(), vids[(i + 1) % n].as_str()))
                .collect();
            edges.push(("e0", "0", "t"));
            Graph::build_named(&format!("L{}", n), &vs, &edges)
        }
        Complete(n) => {
            if n < 1 {
                return Err(GraphError::BadParameter("complete needs n >= 1".into()));
            }
            let vids: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let vs: Vec<&str> = vids.iter().map(|s| s.as_str()).collect();
            let mut eids = Vec::new();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    eids.push((format!("e{}{}", i, j), i - 1, j - 1));
                }
            }
            let edges: Vec<(&str, &str, &str)> = eids
                .iter()
                .map(|(id, i, j)| (id.as_str(), vids[*i].as_str(), vids[*j].as_str()))
                .collect();
            Graph::build_named(&format!("K{}", n), &vs, &edges)
        }
        CompleteBipartite(m, n) => {
            if m < 1 || n < 1 {
                return Err(GraphError::BadParameter("bipartite needs m, n >= 1".into()));
            }
            let avs: Vec<String> = (1..=m).map(|i| format!("a{}", i)).collect();
            let bvs: Vec<String> = (1..=n).map(|i| format!("b{}", i)).collect();
            let mut vs: Vec<&str> = avs.iter().map(|s| s.as_str()).collect();
            vs.extend(bvs.iter().map(|s| s.as_str()));
            let mut eids = Vec::new();
            for i in 0..m {
                for j in 0..n {
                    eids.push((format!("a{}b{}", i + 1, j + 1), i, j));
                }
            }
            let edges: Vec<(&str, &str, &str)> = eids
                .iter()
                .map(|(id, i, j)| (id.as_str(), avs[*i].as_str(), bvs[*j].as_str()))
                .collect();
            Graph::build_named(&format!("K{},{}", m, n), &vs, &edges)
        }
        Net => Graph::build_named(
            "N",
            &["1", "2", "3", "p1", "p2", "p3"],
            &[
                ("e12", "1", "2"),
                ("e13", "1", "3"),
                ("e23", "2", "3"),
                ("f1", "1", "p1"),
                ("f2", "2", "p2"),
                ("f3", "3", "p3"),
            ],
        ),
    }
}

/// Parses the graph text format: one declaration per line, `#` comments.
///
/// ```text
/// graph <name>
/// vertex <id>
/// edge <id> <vid> <vid>
/// ```
pub fn parse_graph(src: &str, path: &str) -> Result<Graph, GraphError> {
    let mut name = String::new();
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let err = |line: usize, msg: String| GraphError::Parse { path: path.to_string(), line, msg };
    for (i, raw) in src.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "graph" => {
                if tokens.len() != 2 {
                    return Err(err(line_no, "expected `graph <name>`".into()));
                }
                name = tokens[1].to_string();
            }
            "vertex" => {
                if tokens.len() != 2 {
                    return Err(err(line_no, "expected `vertex <id>`".into()));
                }
                vertices.push(tokens[1].to_string());
            }
            "edge" => {
                if tokens.len() != 4 {
                    return Err(err(line_no, "expected `edge <id> <vid> <vid>`".into()));
                }
                edges.push((tokens[1].to_string(), tokens[2].to_string(), tokens[3].to_string()));
            }
            other => {
                return Err(err(line_no, format!("unknown declaration `{}`", other)));
            }
        }
    }
    let vs: Vec<&str> = vertices.iter().map(|s| s.as_str()).collect();
    let es: Vec<(&str, &str, &str)> =
        edges.iter().map(|(id, a, b)| (id.as_str(), a.as_str(), b.as_str())).collect();
    Graph::build_named(&name, &vs, &es).map_err(|e| match e {
        GraphError::Parse { .. } => e,
        other => GraphError::Parse { path: path.to_string(), line: 0, msg: other.to_string() },
    })
}

/// Renders a graph in the text format accepted by [`parse_graph`].
pub fn render_graph(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("graph {}\n", if g.name().is_empty() { "g" } else { g.name() }));
    for v in g.vertices() {
        out.push_str(&format!("vertex {}\n", g.vertex_id(v)));
    }
    for e in g.edges() {
        let (a, b) = g.endpoints(e);
        out.push_str(&format!("edge {} {} {}\n", g.edge_id(e), g.vertex_id(a), g.vertex_id(b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_interval() {
        let g = standard_graph(StandardGraph::Interval).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn build_loop() {
        let g = Graph::build(&["v"], &[("v", "v")]).unwrap();
        assert_eq!(g.degree(0), 2);
        assert!(g.is_self_loop(0));
        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        assert!(g.is_isomorphic_small(&c1));
    }

    #[test]
    fn build_k4() {
        let g = standard_graph(StandardGraph::Complete(4)).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.n_edges(), 6);
        for v in g.vertices() {
            assert_eq!(g.degree(v), 3);
        }
        assert_eq!(g.betti1(), 3);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            Graph::build(&["a", "a"], &[]),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            Graph::build(&["a"], &[("a", "b")]),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn standard_families() {
        let s3 = standard_graph(StandardGraph::Star(3)).unwrap();
        assert_eq!(s3.n_vertices(), 4);
        assert_eq!(s3.n_edges(), 3);
        assert_eq!(s3.degree(s3.vertex("c").unwrap()), 3);

        let theta = standard_graph(StandardGraph::Theta(3)).unwrap();
        assert_eq!(theta.n_vertices(), 2);
        assert_eq!(theta.n_edges(), 3);

        let net = standard_graph(StandardGraph::Net).unwrap();
        assert_eq!(net.n_vertices(), 6);
        assert_eq!(net.n_edges(), 6);
        let degs: Vec<usize> = net.vertices().map(|v| net.degree(v)).collect();
        assert_eq!(degs, vec![3, 3, 3, 1, 1, 1]);

        assert!(standard_graph(StandardGraph::Theta(1)).is_err());
        assert!(standard_graph(StandardGraph::Star(0)).is_err());
    }

    #[test]
    fn half_edge_counts() {
        for g in [
            standard_graph(StandardGraph::Complete(4)).unwrap(),
            standard_graph(StandardGraph::Lollipop(2)).unwrap(),
            standard_graph(StandardGraph::Cycle(1)).unwrap(),
        ] {
            let total: usize = g.vertices().map(|v| g.degree(v)).sum();
            assert_eq!(total, 2 * g.n_edges());
        }
    }

    #[test]
    fn subdivide_counts() {
        let i = standard_graph(StandardGraph::Interval).unwrap();
        let (g, m) = i.subdivide(&[1]).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.n_edges(), 1);
        m.validate().unwrap();

        let (p4, _) = i.subdivide(&[3]).unwrap();
        assert_eq!(p4.n_vertices(), 4);
        assert_eq!(p4.n_edges(), 3);

        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let (c3, m) = c1.subdivide(&[3]).unwrap();
        assert!(c3.is_isomorphic_small(&standard_graph(StandardGraph::Cycle(3)).unwrap()));
        // All pieces map to the single original edge.
        for e in c3.edges() {
            assert_eq!(m.edge_image(e), 0);
        }
    }

    #[test]
    fn explosion_shapes() {
        let s3 = standard_graph(StandardGraph::Star(3)).unwrap();
        let c = s3.vertex("c").unwrap();
        let (ex, m) = s3.vertex_explosion(c).unwrap();
        assert_eq!(ex.n_edges(), 3);
        assert_eq!(ex.n_vertices(), 6);
        let (comps, _) = ex.components();
        assert_eq!(comps, 3);
        m.validate().unwrap();

        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let (ex, _) = k4.vertex_explosion(k4.vertex("4").unwrap()).unwrap();
        assert!(ex.is_isomorphic_small(&standard_graph(StandardGraph::Net).unwrap()));

        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let (ex, _) = c1.vertex_explosion(0).unwrap();
        assert!(ex.is_isomorphic_small(&standard_graph(StandardGraph::Interval).unwrap()));
    }

    #[test]
    fn explosion_counts() {
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let (ex, _) = k4.vertex_explosion(0).unwrap();
        assert_eq!(ex.n_edges(), k4.n_edges());
        assert_eq!(ex.n_vertices(), k4.n_vertices() + k4.degree(0) - 1);
    }

    #[test]
    fn contraction_shapes() {
        // Tail contraction of the lollipop gives the cycle.
        let l1 = standard_graph(StandardGraph::Lollipop(1)).unwrap();
        let c = l1.contract_edge(l1.edge("e0").unwrap()).unwrap();
        assert!(c.minor.is_isomorphic_small(&standard_graph(StandardGraph::Cycle(1)).unwrap()));

        let c3 = standard_graph(StandardGraph::Cycle(3)).unwrap();
        let c = c3.contract_edge(0).unwrap();
        assert!(c.minor.is_isomorphic_small(&standard_graph(StandardGraph::Cycle(2)).unwrap()));
        assert_eq!(c3.betti1(), c.minor.betti1());

        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let c = k4.contract_edge(0).unwrap();
        assert_eq!(c.minor.n_vertices(), 3);
        assert_eq!(c.minor.n_edges(), 5);

        // Contracting a self-loop deletes it and lowers betti1.
        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let c = c1.contract_edge(0).unwrap();
        assert!(c.was_loop);
        assert_eq!(c.minor.n_edges(), 0);
        assert_eq!(c.minor.n_vertices(), 1);
        assert_eq!(c.minor.betti1(), c1.betti1() - 1);
    }

    #[test]
    fn betti1_values() {
        assert_eq!(standard_graph(StandardGraph::Complete(4)).unwrap().betti1(), 3);
        assert_eq!(standard_graph(StandardGraph::Star(5)).unwrap().betti1(), 0);
        assert_eq!(
            standard_graph(StandardGraph::CompleteBipartite(3, 3)).unwrap().betti1(),
            4
        );
    }

    #[test]
    fn parse_round_trip() {
        let src = "# a comment\ngraph k4\nvertex 1\nvertex 2\nvertex 3\nvertex 4\n\
                   edge e12 1 2\nedge e13 1 3\nedge e14 1 4\nedge e23 2 3\nedge e24 2 4\nedge e34 3 4\n";
        let g = parse_graph(src, "k4.graph").unwrap();
        assert!(g.is_isomorphic_small(&standard_graph(StandardGraph::Complete(4)).unwrap()));
        let again = parse_graph(&render_graph(&g), "rt").unwrap();
        assert_eq!(g, again.with_name(g.name()));
    }

    #[test]
    fn parse_errors_name_line() {
        let bad = "graph g\nvertex a\nedge e a b\n";
        match parse_graph(bad, "t.graph") {
            Err(GraphError::Parse { msg, .. }) => assert!(msg.contains("unknown vertex")),
            other => panic!("expected parse error, got {:?}", other),
        }
        let bad2 = "graph g\nfoo bar\n";
        match parse_graph(bad2, "t.graph") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {:?}", other),
        }
        // Self-loop accepted.
        let g = parse_graph("graph g\nvertex v\nedge e v v\n", "t.graph").unwrap();
        assert!(g.is_self_loop(0));
    }
}
