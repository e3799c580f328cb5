//! The bigraded chain complex of local vertex states and edge multidegrees
//! attached to a graph, together with its differential, edge action, and the
//! chain maps induced by graph morphisms, edge contractions, and the reduced
//! inclusion.
//!
//! A monomial assigns a nonnegative multidegree to every edge and a local
//! state to every vertex: empty, occupied, a half-edge at the vertex, or (at
//! reduced vertices) a difference `h - h0` against the vertex's base
//! half-edge.  Weight counts points (edge degrees + occupied + half-edge
//! states), degree counts half-edge states.  The differential sends a
//! half-edge state to `e(h) - v(h)` and a difference to `e(h) - e(h0)`,
//! extended by the Leibniz rule with Koszul signs over the vertex order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{Contraction, Graph};
use crate::linalg::{Int, SparseMat};
use crate::morphism::{GraphMorphism, VertexImage};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SwkError {
    #[error("chain is not homogeneous")]
    NotHomogeneous,
    #[error("monomial not found in the slice basis (wrong slice?)")]
    NotInSlice,
    #[error("vertex states collide at vertex {0} in a product")]
    StateCollision(usize),
    #[error("reduced vertex {0} is isolated")]
    IsolatedReduced(usize),
    #[error("induced maps require the full complex on both sides")]
    NeedsFullComplex,
    #[error("{0}")]
    BadInput(String),
}

/// Local state of a vertex in a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexState {
    Empty,
    Occupied,
    /// A half-edge at this vertex (global half-edge index).
    Half(usize),
    /// Difference `h - h0` against the vertex's base half-edge; reduced
    /// vertices only, with `h` never the base itself.
    Diff(usize),
}

impl VertexState {
    pub fn bidegree(&self) -> (usize, usize) {
        match self {
            VertexState::Empty => (0, 0),
            VertexState::Occupied => (0, 1),
            VertexState::Half(_) | VertexState::Diff(_) => (1, 1),
        }
    }

    pub fn degree(&self) -> usize {
        self.bidegree().0
    }
}

/// Basis element: edge multidegrees plus one state per vertex, read as the
/// ordered product over the graph's vertex order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub edge_deg: Vec<u32>,
    pub states: Vec<VertexState>,
}

impl Monomial {
    pub fn empty(g: &Graph) -> Monomial {
        Monomial {
            edge_deg: vec![0; g.n_edges()],
            states: vec![VertexState::Empty; g.n_vertices()],
        }
    }

    pub fn with_state(mut self, v: usize, s: VertexState) -> Monomial {
        self.states[v] = s;
        self
    }

    pub fn with_edge(mut self, e: usize, d: u32) -> Monomial {
        self.edge_deg[e] += d;
        self
    }

    pub fn degree(&self) -> usize {
        self.states.iter().map(|s| s.degree()).sum()
    }

    pub fn weight(&self) -> usize {
        let state_wt: usize = self.states.iter().map(|s| s.bidegree().1).sum();
        let edge_wt: usize = self.edge_deg.iter().map(|&d| d as usize).sum();
        state_wt + edge_wt
    }

    /// The vertex's base half-edge for difference states.
    pub fn base_half_edge(g: &Graph, v: usize) -> Option<usize> {
        g.half_edges_at(v).first().copied()
    }
}

/// Integer linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<Monomial, Int>,
}

impl Chain {
    pub fn zero() -> Chain {
        Chain::default()
    }

    pub fn from_monomial(m: Monomial) -> Chain {
        let mut c = Chain::zero();
        c.add_term(m, Int::one());
        c
    }

    pub fn add_term(&mut self, m: Monomial, coef: Int) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.scale(&Int::from(-1)))
    }

    pub fn scale(&self, k: &Int) -> Chain {
        let mut out = Chain::zero();
        if k.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * k);
        }
        out
    }

    pub fn neg(&self) -> Chain {
        self.scale(&Int::from(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Int)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// (degree, weight) if homogeneous; None for the zero chain.
    pub fn bidegree(&self) -> Result<Option<(usize, usize)>, SwkError> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Ok(None) };
        let dw = (first.degree(), first.weight());
        for m in it {
            if (m.degree(), m.weight()) != dw {
                return Err(SwkError::NotHomogeneous);
            }
        }
        Ok(Some(dw))
    }

    /// Boundary of the chain.
    pub fn boundary(&self, g: &Graph) -> Chain {
        let mut out = Chain::zero();
        for (m, c) in &self.terms {
            for (bm, bc) in monomial_boundary(g, m).terms {
                out.add_term(bm, bc * c);
            }
        }
        out
    }

    /// Multiplication by an edge: raises that edge's multidegree.
    pub fn times_edge(&self, e: usize) -> Chain {
        let mut out = Chain::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone().with_edge(e, 1), c.clone());
        }
        out
    }
}

/// Leibniz boundary of a single monomial; the sign at a vertex is
/// (-1)^(number of degree-1 states at earlier vertices).
pub fn monomial_boundary(g: &Graph, m: &Monomial) -> Chain {
    let mut out = Chain::zero();
    let mut sign = Int::one();
    for v in g.vertices() {
        match m.states[v] {
            VertexState::Empty | VertexState::Occupied => {}
            VertexState::Half(h) => {
                let e = g.he_edge(h);
                out.add_term(
                    m.clone().with_state(v, VertexState::Empty).with_edge(e, 1),
                    sign.clone(),
                );
                out.add_term(m.clone().with_state(v, VertexState::Occupied), -sign.clone());
                sign = -sign;
            }
            VertexState::Diff(h) => {
                let h0 = Monomial::base_half_edge(g, v).expect("difference at isolated vertex");
                out.add_term(
                    m.clone().with_state(v, VertexState::Empty).with_edge(g.he_edge(h), 1),
                    sign.clone(),
                );
                out.add_term(
                    m.clone().with_state(v, VertexState::Empty).with_edge(g.he_edge(h0), 1),
                    -sign.clone(),
                );
                sign = -sign;
            }
        }
    }
    out
}

/// Graded product of chains with disjoint state supports; the Koszul sign
/// counts inversions between the factors' degree-1 vertices.
pub fn chain_product(a: &Chain, b: &Chain) -> Result<Chain, SwkError> {
    let mut out = Chain::zero();
    for (ma, ca) in a.terms() {
        let deg_a: Vec<usize> = ma
            .states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.degree() == 1)
            .map(|(v, _)| v)
            .collect();
        for (mb, cb) in b.terms() {
            let mut m = ma.clone();
            for (e, d) in mb.edge_deg.iter().enumerate() {
                m.edge_deg[e] += d;
            }
            let mut inversions = 0usize;
            for (v, s) in mb.states.iter().enumerate() {
                if *s == VertexState::Empty {
                    continue;
                }
                if m.states[v] != VertexState::Empty {
                    return Err(SwkError::StateCollision(v));
                }
                m.states[v] = *s;
                if s.degree() == 1 {
                    inversions += deg_a.iter().filter(|&&w| w > v).count();
                }
            }
            let coef = ca * cb;
            out.add_term(m, if inversions % 2 == 0 { coef } else { -coef });
        }
    }
    Ok(out)
}

/// A (degree, weight) slice of the complex with its ordered monomial basis.
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub degree: usize,
    pub weight: usize,
    pub reduced: BTreeSet<usize>,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl ComplexSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a chain in this slice's basis.
    pub fn vector_of(&self, c: &Chain) -> Result<Vec<Int>, SwkError> {
        let mut v = vec![Int::zero(); self.dim()];
        for (m, coef) in c.terms() {
            let i = self.index_of(m).ok_or(SwkError::NotInSlice)?;
            v[i] = coef.clone();
        }
        Ok(v)
    }

    pub fn chain_of(&self, v: &[Int]) -> Chain {
        let mut c = Chain::zero();
        for (i, coef) in v.iter().enumerate() {
            c.add_term(self.basis[i].clone(), coef.clone());
        }
        c
    }
}

/// All monomials of the given degree and weight, difference states exactly
/// at the vertices of `reduced`, in the deterministic lexicographic order.
pub fn enumerate_basis(
    g: &Graph,
    reduced: &BTreeSet<usize>,
    degree: usize,
    weight: usize,
) -> ComplexSlice {
    // Per-vertex state options with their (degree, weight).
    let mut options: Vec<Vec<(VertexState, usize, usize)>> = Vec::with_capacity(g.n_vertices());
    for v in g.vertices() {
        let mut opts = vec![(VertexState::Empty, 0, 0)];
        if reduced.contains(&v) {
            // Isolated reduced vertices contribute only the empty state.
            for &h in g.half_edges_at(v).iter().skip(1) {
                opts.push((VertexState::Diff(h), 1, 1));
            }
        } else {
            opts.push((VertexState::Occupied, 0, 1));
            for &h in g.half_edges_at(v) {
                opts.push((VertexState::Half(h), 1, 1));
            }
        }
        options.push(opts);
    }

    let mut basis = Vec::new();
    let mut states = vec![VertexState::Empty; g.n_vertices()];
    distribute_states(g, &options, 0, degree, weight, &mut states, &mut basis);
    basis.sort_unstable();
    let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    ComplexSlice { degree, weight, reduced: reduced.clone(), basis, index }
}

fn distribute_states(
    g: &Graph,
    options: &[Vec<(VertexState, usize, usize)>],
    v: usize,
    deg_left: usize,
    wt_left: usize,
    states: &mut Vec<VertexState>,
    out: &mut Vec<Monomial>,
) {
    if v == g.n_vertices() {
        if deg_left > 0 {
            return;
        }
        let mut edge_deg = vec![0u32; g.n_edges()];
        distribute_edges(g, 0, wt_left, &mut edge_deg, states, out);
        return;
    }
    for &(s, d, w) in &options[v] {
        if d > deg_left || w > wt_left {
            continue;
        }
        states[v] = s;
        distribute_states(g, options, v + 1, deg_left - d, wt_left - w, states, out);
    }
    states[v] = VertexState::Empty;
}

fn distribute_edges(
    g: &Graph,
    e: usize,
    wt_left: usize,
    edge_deg: &mut Vec<u32>,
    states: &[VertexState],
    out: &mut Vec<Monomial>,
) {
    if e == g.n_edges() {
        if wt_left == 0 {
            out.push(Monomial { edge_deg: edge_deg.clone(), states: states.to_vec() });
        }
        return;
    }
    if e == g.n_edges() - 1 {
        edge_deg[e] = wt_left as u32;
        out.push(Monomial { edge_deg: edge_deg.clone(), states: states.to_vec() });
        edge_deg[e] = 0;
        return;
    }
    for d in 0..=wt_left {
        edge_deg[e] = d as u32;
        distribute_edges(g, e + 1, wt_left - d, edge_deg, states, out);
    }
    edge_deg[e] = 0;
}

/// Matrix of the differential from `from` (degree i) to `to` (degree i-1),
/// both of the same weight and reduction set.
pub fn boundary_map(g: &Graph, from: &ComplexSlice, to: &ComplexSlice) -> SparseMat {
    debug_assert_eq!(from.weight, to.weight);
    debug_assert!(from.degree == to.degree + 1);
    debug_assert_eq!(from.reduced, to.reduced);
    let mut m = SparseMat::zero(to.dim(), from.dim());
    for (j, mono) in from.basis.iter().enumerate() {
        for (bm, coef) in monomial_boundary(g, mono).terms() {
            let i = to
                .index_of(bm)
                .expect("boundary term missing from companion slice");
            m.add_entry(i, j, coef.clone());
        }
    }
    m
}

/// Matrix of multiplication by edge `e` from weight k to weight k+1.
pub fn edge_mult_map(g: &Graph, e: usize, from: &ComplexSlice, to: &ComplexSlice) -> SparseMat {
    debug_assert_eq!(from.degree, to.degree);
    debug_assert!(from.weight + 1 == to.weight);
    debug_assert_eq!(from.reduced, to.reduced);
    let _ = g;
    let mut m = SparseMat::zero(to.dim(), from.dim());
    for (j, mono) in from.basis.iter().enumerate() {
        let img = mono.clone().with_edge(e, 1);
        let i = to.index_of(&img).expect("edge multiple missing from target slice");
        m.add_entry(i, j, Int::one());
    }
    m
}

// ---------------------------------------------------------------------------
// Multiplicative chain maps
// ---------------------------------------------------------------------------

/// One additive term of a local state's image: a coefficient, edge-degree
/// increments, and at most one target letter.
struct MapTerm {
    coef: Int,
    edge_inc: Vec<usize>,
    letter: Option<(usize, VertexState)>,
}

/// Applies a multiplicative map to one monomial: edge degrees push forward
/// along `edge_image`, non-empty states expand through `state_image`, and
/// the Koszul sign reorders the image's degree-1 letters into the target
/// vertex order.
fn apply_monomial_map(
    src: &Graph,
    tgt: &Graph,
    mono: &Monomial,
    edge_image: &dyn Fn(usize) -> usize,
    state_image: &dyn Fn(usize, VertexState) -> Vec<MapTerm>,
) -> Chain {
    let mut base = Monomial::empty(tgt);
    for (e, d) in mono.edge_deg.iter().enumerate() {
        if *d > 0 {
            base.edge_deg[edge_image(e)] += d;
        }
    }
    // Expand the product over vertices with non-empty states.
    struct Branch {
        coef: Int,
        edge_inc: Vec<usize>,
        letters: Vec<(usize, VertexState)>,
    }
    let mut branches = vec![Branch { coef: Int::one(), edge_inc: Vec::new(), letters: Vec::new() }];
    for v in src.vertices() {
        let s = mono.states[v];
        if s == VertexState::Empty {
            continue;
        }
        let images = state_image(v, s);
        let mut next = Vec::with_capacity(branches.len() * images.len());
        for b in &branches {
            for t in &images {
                let mut nb = Branch {
                    coef: &b.coef * &t.coef,
                    edge_inc: b.edge_inc.clone(),
                    letters: b.letters.clone(),
                };
                nb.edge_inc.extend_from_slice(&t.edge_inc);
                if let Some(l) = t.letter {
                    nb.letters.push(l);
                }
                next.push(nb);
            }
        }
        branches = next;
    }
    let mut out = Chain::zero();
    for b in branches {
        let mut m = base.clone();
        for e in &b.edge_inc {
            m.edge_deg[*e] += 1;
        }
        let mut ok = true;
        for &(v, s) in &b.letters {
            if m.states[v] != VertexState::Empty {
                ok = false;
                break;
            }
            m.states[v] = s;
        }
        assert!(ok, "image letters collide; morphism not injective on states");
        // Koszul sign: parity of inversions among the degree-1 letters.
        let deg1: Vec<usize> = b
            .letters
            .iter()
            .filter(|(_, s)| s.degree() == 1)
            .map(|&(v, _)| v)
            .collect();
        let mut inv = 0usize;
        for i in 0..deg1.len() {
            for j in i + 1..deg1.len() {
                if deg1[i] > deg1[j] {
                    inv += 1;
                }
            }
        }
        out.add_term(m, if inv % 2 == 0 { b.coef } else { -b.coef });
    }
    out
}

fn assemble_map(
    src_g: &Graph,
    tgt_g: &Graph,
    from: &ComplexSlice,
    to: &ComplexSlice,
    edge_image: &dyn Fn(usize) -> usize,
    state_image: &dyn Fn(usize, VertexState) -> Vec<MapTerm>,
) -> Result<SparseMat, SwkError> {
    let mut m = SparseMat::zero(to.dim(), from.dim());
    for (j, mono) in from.basis.iter().enumerate() {
        let img = apply_monomial_map(src_g, tgt_g, mono, edge_image, state_image);
        for (im, coef) in img.terms() {
            let i = to.index_of(im).ok_or(SwkError::NotInSlice)?;
            m.add_entry(i, j, coef.clone());
        }
    }
    Ok(m)
}

/// Chain map induced by a graph morphism on matching (degree, weight)
/// slices of the full complexes.
pub fn induced_chain_map(
    f: &GraphMorphism,
    from: &ComplexSlice,
    to: &ComplexSlice,
) -> Result<SparseMat, SwkError> {
    if !from.reduced.is_empty() || !to.reduced.is_empty() {
        return Err(SwkError::NeedsFullComplex);
    }
    let src = f.source();
    let tgt = f.target();
    let state_image = |v: usize, s: VertexState| -> Vec<MapTerm> {
        match f.vertex_image(v) {
            VertexImage::ToVertex { vertex, half_edge_map } => match s {
                VertexState::Occupied => vec![MapTerm {
                    coef: Int::one(),
                    edge_inc: vec![],
                    letter: Some((*vertex, VertexState::Occupied)),
                }],
                VertexState::Half(h) => {
                    let th = half_edge_map
                        .iter()
                        .find(|(s_h, _)| *s_h == h)
                        .map(|(_, t)| *t)
                        .expect("validated morphism has a total half-edge map");
                    vec![MapTerm {
                        coef: Int::one(),
                        edge_inc: vec![],
                        letter: Some((*vertex, VertexState::Half(th))),
                    }]
                }
                _ => unreachable!("empty states are skipped, differences need U = empty"),
            },
            VertexImage::ToEdge(e) => match s {
                // An occupied vertex inside an edge is a point on that edge.
                VertexState::Occupied => {
                    vec![MapTerm { coef: Int::one(), edge_inc: vec![*e], letter: None }]
                }
                // Half-edge states die when the vertex is smoothed away.
                VertexState::Half(_) => vec![],
                _ => unreachable!(),
            },
        }
    };
    assemble_map(src, tgt, from, to, &|e| f.edge_image(e), &state_image)
}

/// Chain map from the complex of an edge contraction's minor into the
/// complex of the original graph: the merged vertex's occupied state maps
/// to the contracted edge, and a half-edge at the merged vertex maps to the
/// difference of its lift and the contracted edge's half-edge at the same
/// endpoint.  For a deleted self-loop the map is the subgraph inclusion.
pub fn contraction_chain_map(
    g: &Graph,
    ctr: &Contraction,
    from: &ComplexSlice,
    to: &ComplexSlice,
) -> Result<SparseMat, SwkError> {
    if !from.reduced.is_empty() || !to.reduced.is_empty() {
        return Err(SwkError::NeedsFullComplex);
    }
    let minor = &ctr.minor;
    let e0 = ctr.original_edge;
    let (end0, _end1) = g.endpoints(e0);
    let state_image = |v: usize, s: VertexState| -> Vec<MapTerm> {
        let orig_v = ctr.vertex_to_orig[v];
        let merged_here = ctr.merged.map_or(false, |(keep, _)| keep == orig_v);
        match s {
            VertexState::Occupied if merged_here => {
                vec![MapTerm { coef: Int::one(), edge_inc: vec![e0], letter: None }]
            }
            VertexState::Occupied => vec![MapTerm {
                coef: Int::one(),
                edge_inc: vec![],
                letter: Some((orig_v, VertexState::Occupied)),
            }],
            VertexState::Half(h) => {
                let lift = ctr.he_to_orig(h);
                if merged_here {
                    let vj = g.he_vertex(lift);
                    let hj = if vj == end0 { 2 * e0 } else { 2 * e0 + 1 };
                    vec![
                        MapTerm {
                            coef: Int::one(),
                            edge_inc: vec![],
                            letter: Some((vj, VertexState::Half(lift))),
                        },
                        MapTerm {
                            coef: -Int::one(),
                            edge_inc: vec![],
                            letter: Some((vj, VertexState::Half(hj))),
                        },
                    ]
                } else {
                    vec![MapTerm {
                        coef: Int::one(),
                        edge_inc: vec![],
                        letter: Some((orig_v, VertexState::Half(lift))),
                    }]
                }
            }
            _ => unreachable!(),
        }
    };
    assemble_map(minor, g, from, to, &|e| ctr.edge_to_orig[e], &state_image)
}

/// Inclusion of a reduced slice into the corresponding full slice: each
/// difference state expands to the difference of two half-edge monomials.
pub fn reduced_inclusion(
    g: &Graph,
    from: &ComplexSlice,
    to: &ComplexSlice,
) -> Result<SparseMat, SwkError> {
    if !to.reduced.is_empty() {
        return Err(SwkError::NeedsFullComplex);
    }
    for &v in &from.reduced {
        if g.degree(v) == 0 {
            return Err(SwkError::IsolatedReduced(v));
        }
    }
    let state_image = |v: usize, s: VertexState| -> Vec<MapTerm> {
        match s {
            VertexState::Diff(h) => {
                let h0 = Monomial::base_half_edge(g, v).unwrap();
                vec![
                    MapTerm {
                        coef: Int::one(),
                        edge_inc: vec![],
                        letter: Some((v, VertexState::Half(h))),
                    },
                    MapTerm {
                        coef: -Int::one(),
                        edge_inc: vec![],
                        letter: Some((v, VertexState::Half(h0))),
                    },
                ]
            }
            other => vec![MapTerm { coef: Int::one(), edge_inc: vec![], letter: Some((v, other)) }],
        }
    };
    assemble_map(g, g, from, to, &|e| e, &state_image)
}

/// Dimensions predicted by the generating function
/// prod_v (1 + t + d(v) x t) / (1 - t)^{|E|}; used as an enumeration check.
pub fn predicted_dimension(g: &Graph, degree: usize, weight: usize) -> usize {
    // Polynomial in x and t, truncated at the requested weight.
    let kmax = weight;
    // coeffs[i][k]
    let mut acc = vec![vec![0i64; kmax + 1]; degree + 2];
    acc[0][0] = 1;
    for v in g.vertices() {
        let mut next = vec![vec![0i64; kmax + 1]; degree + 2];
        for (i, row) in acc.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                next[i][k] += c;
                if k + 1 <= kmax {
                    next[i][k + 1] += c;
                    if i + 1 < next.len() {
                        next[i + 1][k + 1] += c * g.degree(v) as i64;
                    }
                }
            }
        }
        acc = next;
    }
    // Multiply by 1/(1-t)^{|E|}: per edge, cumulative sums over weight.
    for _ in 0..g.n_edges() {
        for row in acc.iter_mut() {
            for k in 1..=kmax {
                row[k] += row[k - 1];
            }
        }
    }
    acc[degree][weight] as usize
}
