//! Graph morphisms: injective continuous maps sending vertices to vertices
//! or into edge interiors.
//!
//! The data stored here is the combinatorial shadow of such a map: a total
//! map on edges plus, per vertex, either a target vertex (with an injective
//! half-edge map) or a target edge.  Validation enforces the consistency
//! rules this shadow must satisfy; it does not re-prove topological
//! injectivity for arbitrary hand-built data.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("edge image list has wrong length")]
    EdgeImageLength,
    #[error("vertex image list has wrong length")]
    VertexImageLength,
    #[error("edge image {0} out of range")]
    EdgeImageRange(usize),
    #[error("half-edge map at vertex `{0}` is not injective or incomplete")]
    HalfEdgeMap(String),
    #[error("half-edge {0} maps to a half-edge of the wrong edge")]
    HalfEdgeEdgeMismatch(usize),
    #[error("half-edge {0} maps to a half-edge at the wrong vertex")]
    HalfEdgeVertexMismatch(usize),
    #[error("two source vertices map to target vertex `{0}`")]
    VertexCollision(String),
    #[error("vertex `{0}` mapped into an edge has valence {1} > 2")]
    EdgeImageValence(String, usize),
    #[error("vertex `{0}` maps into edge `{1}` but touches an edge not mapping there")]
    EdgeImageInconsistent(String, String),
    #[error("edges mapping into `{0}` do not form a single arc")]
    OverlapOnEdge(String),
    #[error("half-edges of target edge `{0}` covered more than once")]
    HalfEdgeCover(String),
    #[error("morphisms not composable")]
    NotComposable,
}

/// Image of a source vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexImage {
    ToVertex {
        vertex: usize,
        /// Pairs (source half-edge at this vertex, target half-edge).
        half_edge_map: Vec<(usize, usize)>,
    },
    ToEdge(usize),
}

#[derive(Clone, Debug)]
pub struct GraphMorphism {
    source: Graph,
    target: Graph,
    edge_image: Vec<usize>,
    vertex_image: Vec<VertexImage>,
}

impl GraphMorphism {
    pub fn new(
        source: Graph,
        target: Graph,
        edge_image: Vec<usize>,
        vertex_image: Vec<VertexImage>,
    ) -> GraphMorphism {
        GraphMorphism { source, target, edge_image, vertex_image }
    }

    pub fn identity(g: &Graph) -> GraphMorphism {
        let vertex_image = g
            .vertices()
            .map(|v| VertexImage::ToVertex {
                vertex: v,
                half_edge_map: g.half_edges_at(v).iter().map(|&h| (h, h)).collect(),
            })
            .collect();
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            edge_image: g.edges().collect(),
            vertex_image,
        }
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn edge_image(&self, e: usize) -> usize {
        self.edge_image[e]
    }

    pub fn vertex_image(&self, v: usize) -> &VertexImage {
        &self.vertex_image[v]
    }

    /// Image of a source half-edge when its vertex maps to a vertex.
    pub fn half_edge_image(&self, h: usize) -> Option<usize> {
        match &self.vertex_image[self.source.he_vertex(h)] {
            VertexImage::ToVertex { half_edge_map, .. } => {
                half_edge_map.iter().find(|(s, _)| *s == h).map(|(_, t)| *t)
            }
            VertexImage::ToEdge(_) => None,
        }
    }

    pub fn validate(&self) -> Result<(), MorphismError> {
        let src = &self.source;
        let tgt = &self.target;
        if self.edge_image.len() != src.n_edges() {
            return Err(MorphismError::EdgeImageLength);
        }
        if self.vertex_image.len() != src.n_vertices() {
            return Err(MorphismError::VertexImageLength);
        }
        for &e in &self.edge_image {
            if e >= tgt.n_edges() {
                return Err(MorphismError::EdgeImageRange(e));
            }
        }
        let mut vertex_targets: HashSet<usize> = HashSet::new();
        for v in src.vertices() {
            match &self.vertex_image[v] {
                VertexImage::ToVertex { vertex, half_edge_map } => {
                    if !vertex_targets.insert(*vertex) {
                        return Err(MorphismError::VertexCollision(
                            tgt.vertex_id(*vertex).to_string(),
                        ));
                    }
                    // The half-edge map must be defined exactly on H(v) and
                    // be injective into H(f(v)).
                    let mut seen_src: HashSet<usize> = HashSet::new();
                    let mut seen_tgt: HashSet<usize> = HashSet::new();
                    for &(h, th) in half_edge_map {
                        if src.he_vertex(h) != v || !seen_src.insert(h) || !seen_tgt.insert(th) {
                            return Err(MorphismError::HalfEdgeMap(
                                src.vertex_id(v).to_string(),
                            ));
                        }
                        if tgt.he_vertex(th) != *vertex {
                            return Err(MorphismError::HalfEdgeVertexMismatch(h));
                        }
                        if tgt.he_edge(th) != self.edge_image[src.he_edge(h)] {
                            return Err(MorphismError::HalfEdgeEdgeMismatch(h));
                        }
                    }
                    if half_edge_map.len() != src.degree(v) {
                        return Err(MorphismError::HalfEdgeMap(src.vertex_id(v).to_string()));
                    }
                }
                VertexImage::ToEdge(e) => {
                    if *e >= tgt.n_edges() {
                        return Err(MorphismError::EdgeImageRange(*e));
                    }
                    if src.degree(v) > 2 {
                        return Err(MorphismError::EdgeImageValence(
                            src.vertex_id(v).to_string(),
                            src.degree(v),
                        ));
                    }
                    for &h in src.half_edges_at(v) {
                        if self.edge_image[src.he_edge(h)] != *e {
                            return Err(MorphismError::EdgeImageInconsistent(
                                src.vertex_id(v).to_string(),
                                tgt.edge_id(*e).to_string(),
                            ));
                        }
                    }
                }
            }
        }
        self.validate_arcs()
    }

    /// Injectivity proxy.  The source edges mapping into a fixed target
    /// edge form a subgraph that embeds into that closed edge, so every
    /// incident vertex meets it at most twice, each of the target edge's
    /// two half-edges is covered by at most one source half-edge at a
    /// vertex-image vertex, and no component is a closed loop of smoothed
    /// vertices (a circle cannot embed in an arc's interior).
    fn validate_arcs(&self) -> Result<(), MorphismError> {
        let src = &self.source;
        let tgt = &self.target;
        let mut per_target: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in src.edges() {
            per_target.entry(self.edge_image[e]).or_default().push(e);
        }
        for (&te, edges) in &per_target {
            let mut degree: HashMap<usize, usize> = HashMap::new();
            for &e in edges {
                let (a, b) = src.endpoints(e);
                *degree.entry(a).or_insert(0) += 1;
                *degree.entry(b).or_insert(0) += 1;
            }
            let mut covered_targets: HashSet<usize> = HashSet::new();
            let mut anchored = false;
            for (&v, &d) in &degree {
                if d > 2 {
                    return Err(MorphismError::OverlapOnEdge(tgt.edge_id(te).to_string()));
                }
                if let VertexImage::ToVertex { half_edge_map, .. } = &self.vertex_image[v] {
                    anchored = true;
                    for &(h, th) in half_edge_map {
                        if self.edge_image[src.he_edge(h)] == te && !covered_targets.insert(th) {
                            return Err(MorphismError::HalfEdgeCover(
                                tgt.edge_id(te).to_string(),
                            ));
                        }
                    }
                }
            }
            // With every vertex smoothed into te, a component with all
            // degrees 2 is a closed loop in the edge's interior.
            if !anchored && degree.values().all(|&d| d == 2) {
                return Err(MorphismError::OverlapOnEdge(tgt.edge_id(te).to_string()));
            }
        }
        Ok(())
    }

    /// Composition `g . f` where `self = g` and `f.target == g.source`.
    pub fn compose(g: &GraphMorphism, f: &GraphMorphism) -> Result<GraphMorphism, MorphismError> {
        if f.target != g.source {
            return Err(MorphismError::NotComposable);
        }
        let edge_image: Vec<usize> =
            f.edge_image.iter().map(|&e| g.edge_image[e]).collect();
        let mut vertex_image = Vec::with_capacity(f.source.n_vertices());
        for v in f.source.vertices() {
            let img = match &f.vertex_image[v] {
                VertexImage::ToEdge(e) => VertexImage::ToEdge(g.edge_image[*e]),
                VertexImage::ToVertex { vertex, half_edge_map } => match &g.vertex_image[*vertex] {
                    VertexImage::ToEdge(e) => VertexImage::ToEdge(*e),
                    VertexImage::ToVertex { vertex: w, half_edge_map: hm2 } => {
                        let lookup: HashMap<usize, usize> = hm2.iter().copied().collect();
                        let composed: Vec<(usize, usize)> = half_edge_map
                            .iter()
                            .map(|&(h, th)| (h, lookup[&th]))
                            .collect();
                        VertexImage::ToVertex { vertex: *w, half_edge_map: composed }
                    }
                },
            };
            vertex_image.push(img);
        }
        Ok(GraphMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            edge_image,
            vertex_image,
        })
    }
}
