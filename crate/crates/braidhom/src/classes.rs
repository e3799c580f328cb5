//! Explicit cycles and relation chains: star and loop cycles, external
//! products, canonical classes of unitrivalent graphs, and the I/X/Q/Theta/O
//! relation chains together with a boundary test.
//!
//! All chains here live in the full complex.  A star cycle at a vertex with
//! half-edges h1, h2, h3 is
//!
//!   e(h1)(h2 - h3) + e(h2)(h3 - h1) + e(h3)(h1 - h2),
//!
//! closed of degree 1 and weight 2.  A loop cycle along a closed embedded
//! walk is the alternating sum of outgoing minus incoming half-edges at the
//! walk's vertices, closed of degree 1 and weight 1.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{is_in_image, Int};
use crate::swk::{chain_product, enumerate_basis, boundary_map, Chain, Monomial, VertexState};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassError {
    #[error("star cycle needs three distinct half-edges at one vertex")]
    BadStar,
    #[error("walk is not a closed embedded cycle")]
    BadWalk,
    #[error("external product factors overlap")]
    Overlap,
    #[error("graph is not unitrivalent")]
    NotUnitrivalent,
    #[error("relation data does not match the required subgraph shape: {0}")]
    BadShape(String),
    #[error("chain is not closed")]
    NotClosed,
    #[error("chain is not homogeneous")]
    NotHomogeneous,
}

/// Data of a constructible cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleSpec {
    /// Star class at `vertex` spanned by three distinct half-edges there.
    Star { vertex: usize, half_edges: [usize; 3] },
    /// Loop class along a closed embedded walk, given by the outgoing
    /// half-edge at each successive vertex.
    Loop { walk: Vec<usize> },
    /// External product of cycles with disjoint supports.
    External(Vec<CycleSpec>),
}

/// The degree-1, weight-2 star cycle at `v`.
pub fn star_cycle(g: &Graph, v: usize, h1: usize, h2: usize, h3: usize) -> Result<Chain, ClassError> {
    let hs = [h1, h2, h3];
    for &h in &hs {
        if h >= g.n_half_edges() || g.he_vertex(h) != v {
            return Err(ClassError::BadStar);
        }
    }
    if h1 == h2 || h1 == h3 || h2 == h3 {
        return Err(ClassError::BadStar);
    }
    let mut c = Chain::zero();
    for j in 0..3 {
        let (a, b, d) = (hs[j], hs[(j + 1) % 3], hs[(j + 2) % 3]);
        let e = g.he_edge(a);
        c.add_term(
            Monomial::empty(g).with_edge(e, 1).with_state(v, VertexState::Half(b)),
            Int::from(1),
        );
        c.add_term(
            Monomial::empty(g).with_edge(e, 1).with_state(v, VertexState::Half(d)),
            Int::from(-1),
        );
    }
    Ok(c)
}

/// Checks that `walk` (outgoing half-edges at successive vertices) is a
/// closed embedded cycle and returns the visited (vertex, out, in) triples.
fn validate_walk(g: &Graph, walk: &[usize]) -> Result<Vec<(usize, usize, usize)>, ClassError> {
    if walk.is_empty() {
        return Err(ClassError::BadWalk);
    }
    let n = walk.len();
    let mut triples = Vec::with_capacity(n);
    for i in 0..n {
        let out = walk[i];
        if out >= g.n_half_edges() {
            return Err(ClassError::BadWalk);
        }
        let v = g.he_vertex(out);
        let inc = g.he_partner(walk[(i + n - 1) % n]);
        if g.he_vertex(inc) != v {
            return Err(ClassError::BadWalk);
        }
        triples.push((v, out, inc));
    }
    let vertices: BTreeSet<usize> = triples.iter().map(|&(v, _, _)| v).collect();
    let edges: BTreeSet<usize> = walk.iter().map(|&h| g.he_edge(h)).collect();
    if vertices.len() != n || edges.len() != n {
        return Err(ClassError::BadWalk);
    }
    // A self-loop step must use the two half-edges of one edge; otherwise
    // out and in at a vertex must differ.
    for &(_, out, inc) in &triples {
        if out == inc {
            return Err(ClassError::BadWalk);
        }
    }
    Ok(triples)
}

/// The degree-1, weight-1 loop cycle along a closed embedded walk.
pub fn loop_cycle(g: &Graph, walk: &[usize]) -> Result<Chain, ClassError> {
    let triples = validate_walk(g, walk)?;
    let mut c = Chain::zero();
    for (v, out, inc) in triples {
        c.add_term(Monomial::empty(g).with_state(v, VertexState::Half(out)), Int::from(1));
        c.add_term(Monomial::empty(g).with_state(v, VertexState::Half(inc)), Int::from(-1));
    }
    Ok(c)
}

/// External product of chains, monomial by monomial with Koszul signs.
/// The factors' state supports must be disjoint.
pub fn external_product(factors: &[Chain]) -> Result<Chain, ClassError> {
    let mut acc = match factors.first() {
        None => return Ok(Chain::zero()),
        Some(c) => c.clone(),
    };
    for c in &factors[1..] {
        acc = chain_product(&acc, c).map_err(|_| ClassError::Overlap)?;
    }
    Ok(acc)
}

/// Support data used to validate geometric disjointness of cycle specs.
struct Support {
    state_vertices: BTreeSet<usize>,
    /// Edges wholly consumed (loop walks own their edges).
    owned_edges: BTreeSet<usize>,
    /// Half-edges touched (a star's legs reach partway into their edges).
    half_edges: BTreeSet<usize>,
}

fn support(g: &Graph, spec: &CycleSpec) -> Result<Support, ClassError> {
    match spec {
        CycleSpec::Star { vertex, half_edges } => Ok(Support {
            state_vertices: [*vertex].into_iter().collect(),
            owned_edges: BTreeSet::new(),
            half_edges: half_edges.iter().copied().collect(),
        }),
        CycleSpec::Loop { walk } => {
            let triples = validate_walk(g, walk)?;
            let edges: BTreeSet<usize> = walk.iter().map(|&h| g.he_edge(h)).collect();
            let half_edges =
                edges.iter().flat_map(|&e| [2 * e, 2 * e + 1]).collect();
            Ok(Support {
                state_vertices: triples.iter().map(|&(v, _, _)| v).collect(),
                owned_edges: edges,
                half_edges,
            })
        }
        CycleSpec::External(parts) => {
            let mut acc = Support {
                state_vertices: BTreeSet::new(),
                owned_edges: BTreeSet::new(),
                half_edges: BTreeSet::new(),
            };
            for p in parts {
                let s = support(g, p)?;
                if !acc.state_vertices.is_disjoint(&s.state_vertices) {
                    return Err(ClassError::Overlap);
                }
                // A wholly-owned edge admits no other tenant, not even a
                // star leg reaching in from the far end.
                for &e in &s.owned_edges {
                    if acc.half_edges.contains(&(2 * e)) || acc.half_edges.contains(&(2 * e + 1)) {
                        return Err(ClassError::Overlap);
                    }
                }
                for &h in &s.half_edges {
                    if acc.owned_edges.contains(&g.he_edge(h)) {
                        return Err(ClassError::Overlap);
                    }
                }
                acc.state_vertices.extend(&s.state_vertices);
                acc.owned_edges.extend(&s.owned_edges);
                acc.half_edges.extend(&s.half_edges);
            }
            Ok(acc)
        }
    }
}

/// Builds the chain of a cycle spec, validating its shape and supports.
pub fn build_cycle(g: &Graph, spec: &CycleSpec) -> Result<Chain, ClassError> {
    match spec {
        CycleSpec::Star { vertex, half_edges } => {
            star_cycle(g, *vertex, half_edges[0], half_edges[1], half_edges[2])
        }
        CycleSpec::Loop { walk } => loop_cycle(g, walk),
        CycleSpec::External(parts) => {
            support(g, spec)?;
            let factors: Vec<Chain> =
                parts.iter().map(|p| build_cycle(g, p)).collect::<Result<_, _>>()?;
            external_product(&factors)
        }
    }
}

/// The canonical class of a unitrivalent graph: per trivalent vertex, the
/// loop class of its self-loop if it has one, else its star class; external
/// product over the trivalent vertices.  Degree N, weight 2N - r.
pub fn canonical_class(g: &Graph) -> Result<Chain, ClassError> {
    let mut parts = Vec::new();
    for v in g.vertices() {
        match g.degree(v) {
            1 => {}
            3 => {
                let hs = g.half_edges_at(v);
                let self_loop = hs.iter().find(|&&h| g.is_self_loop(g.he_edge(h)));
                match self_loop {
                    Some(&h) => {
                        let h = h.min(g.he_partner(h));
                        parts.push(CycleSpec::Loop { walk: vec![h] });
                    }
                    None => parts.push(CycleSpec::Star {
                        vertex: v,
                        half_edges: [hs[0], hs[1], hs[2]],
                    }),
                }
            }
            _ => return Err(ClassError::NotUnitrivalent),
        }
    }
    build_cycle(g, &CycleSpec::External(parts))
}

/// Data for a relation chain.  Each relation is the left-hand side of a
/// homology relation induced by an embedded subgraph; the chain is closed
/// and must be a boundary.
#[derive(Clone, Debug)]
pub enum Relation {
    /// (e(h1) - e(h2)) times the empty monomial, for distinct half-edges at
    /// a common vertex.
    I { h1: usize, h2: usize },
    /// Alternating sum e(h_j) * star(other three, cyclically) over four
    /// distinct half-edges at one vertex.
    X { vertex: usize, half_edges: [usize; 4] },
    /// (e_out - e_pendant) * loop - star(in, out, pendant) on a lollipop:
    /// a closed embedded walk plus a pendant half-edge at its base.
    Q { walk: Vec<usize>, pendant: usize },
    /// Difference of the star cycles at the two ends of three internally
    /// disjoint paths; each path is a list of successive outgoing
    /// half-edges from the common start vertex to the common end vertex.
    Theta { paths: [Vec<usize>; 3] },
    /// (e_i - e_j) * loop for two edges of a closed embedded walk.
    O { walk: Vec<usize>, ei: usize, ej: usize },
}

/// Validates an open path of outgoing half-edges; returns (start vertex,
/// end vertex, interior vertices, edges, first half-edge, arrival
/// half-edge).
fn validate_path(
    g: &Graph,
    path: &[usize],
) -> Result<(usize, usize, Vec<usize>, Vec<usize>, usize, usize), ClassError> {
    if path.is_empty() {
        return Err(ClassError::BadShape("empty path".into()));
    }
    let start = g.he_vertex(path[0]);
    let mut interior = Vec::new();
    for w in path.windows(2) {
        let arrive = g.he_partner(w[0]);
        if g.he_vertex(arrive) != g.he_vertex(w[1]) {
            return Err(ClassError::BadShape("disconnected path".into()));
        }
        interior.push(g.he_vertex(w[1]));
    }
    let end = g.he_vertex(g.he_partner(*path.last().unwrap()));
    let edges: Vec<usize> = path.iter().map(|&h| g.he_edge(h)).collect();
    let distinct: BTreeSet<usize> = edges.iter().copied().collect();
    if distinct.len() != edges.len() {
        return Err(ClassError::BadShape("path repeats an edge".into()));
    }
    Ok((start, end, interior, edges, path[0], g.he_partner(*path.last().unwrap())))
}

/// The relation's left-hand-side chain.
pub fn relation_chain(g: &Graph, rel: &Relation) -> Result<Chain, ClassError> {
    match rel {
        Relation::I { h1, h2 } => {
            if h1 == h2 || g.he_vertex(*h1) != g.he_vertex(*h2) {
                return Err(ClassError::BadShape("need two half-edges at one vertex".into()));
            }
            let mut c = Chain::zero();
            c.add_term(Monomial::empty(g).with_edge(g.he_edge(*h1), 1), Int::from(1));
            c.add_term(Monomial::empty(g).with_edge(g.he_edge(*h2), 1), Int::from(-1));
            Ok(c)
        }
        Relation::X { vertex, half_edges } => {
            let hs = *half_edges;
            let set: BTreeSet<usize> = hs.iter().copied().collect();
            if set.len() != 4 || hs.iter().any(|&h| g.he_vertex(h) != *vertex) {
                return Err(ClassError::BadShape("need four half-edges at one vertex".into()));
            }
            let mut c = Chain::zero();
            for j in 0..4 {
                let star = star_cycle(
                    g,
                    *vertex,
                    hs[(j + 1) % 4],
                    hs[(j + 2) % 4],
                    hs[(j + 3) % 4],
                )?;
                let term = star.times_edge(g.he_edge(hs[j]));
                c = if j % 2 == 0 { c.add(&term) } else { c.sub(&term) };
            }
            Ok(c)
        }
        Relation::Q { walk, pendant } => {
            let triples = validate_walk(g, walk)?;
            let (base, out0, in0) = triples[0];
            if g.he_vertex(*pendant) != base
                || walk.iter().any(|&h| g.he_edge(h) == g.he_edge(*pendant))
            {
                return Err(ClassError::BadShape(
                    "pendant must attach at the walk base, off the cycle".into(),
                ));
            }
            let gamma = loop_cycle(g, walk)?;
            let alpha = star_cycle(g, base, in0, out0, *pendant)?;
            let lhs = gamma
                .times_edge(g.he_edge(out0))
                .sub(&gamma.times_edge(g.he_edge(*pendant)));
            Ok(lhs.sub(&alpha))
        }
        Relation::Theta { paths } => {
            let mut starts = Vec::new();
            let mut ends = Vec::new();
            let mut firsts = Vec::new();
            let mut arrivals = Vec::new();
            let mut interiors: Vec<BTreeSet<usize>> = Vec::new();
            let mut edge_sets: Vec<BTreeSet<usize>> = Vec::new();
            for p in paths {
                let (s, e, interior, edges, first, arrive) = validate_path(g, p)?;
                starts.push(s);
                ends.push(e);
                firsts.push(first);
                arrivals.push(arrive);
                interiors.push(interior.into_iter().collect());
                edge_sets.push(edges.into_iter().collect());
            }
            let u = starts[0];
            let w = ends[0];
            if starts.iter().any(|&s| s != u) || ends.iter().any(|&e| e != w) || u == w {
                return Err(ClassError::BadShape(
                    "three paths must share distinct endpoints".into(),
                ));
            }
            for i in 0..3 {
                if interiors[i].contains(&u) || interiors[i].contains(&w) {
                    return Err(ClassError::BadShape("path passes through an endpoint".into()));
                }
                for j in i + 1..3 {
                    if !interiors[i].is_disjoint(&interiors[j])
                        || !edge_sets[i].is_disjoint(&edge_sets[j])
                    {
                        return Err(ClassError::BadShape("paths are not internally disjoint".into()));
                    }
                }
            }
            let alpha_u = star_cycle(g, u, firsts[0], firsts[1], firsts[2])?;
            let alpha_w = star_cycle(g, w, arrivals[2], arrivals[1], arrivals[0])?;
            Ok(alpha_u.sub(&alpha_w))
        }
        Relation::O { walk, ei, ej } => {
            let edges: BTreeSet<usize> = walk.iter().map(|&h| g.he_edge(h)).collect();
            if !edges.contains(ei) || !edges.contains(ej) {
                return Err(ClassError::BadShape("both edges must lie on the walk".into()));
            }
            let gamma = loop_cycle(g, walk)?;
            Ok(gamma.times_edge(*ei).sub(&gamma.times_edge(*ej)))
        }
    }
}

/// Whether a closed homogeneous chain is a boundary, decided integrally.
pub fn verify_boundary(g: &Graph, chain: &Chain) -> Result<bool, ClassError> {
    let Some((degree, weight)) = chain.bidegree().map_err(|_| ClassError::NotHomogeneous)?
    else {
        return Ok(true);
    };
    if !chain.boundary(g).is_zero() {
        return Err(ClassError::NotClosed);
    }
    let none = BTreeSet::new();
    let above = enumerate_basis(g, &none, degree + 1, weight);
    let here = enumerate_basis(g, &none, degree, weight);
    let d = boundary_map(g, &above, &here);
    let target = here.vector_of(chain).map_err(|_| ClassError::NotHomogeneous)?;
    Ok(is_in_image(&d, &target))
}

/// Convenience: the boundary matrix into a chain's slice, for callers that
/// also want a explicit bounding chain.
pub fn bounding_chain(g: &Graph, chain: &Chain) -> Result<Option<Chain>, ClassError> {
    let Some((degree, weight)) = chain.bidegree().map_err(|_| ClassError::NotHomogeneous)?
    else {
        return Ok(Some(Chain::zero()));
    };
    if !chain.boundary(g).is_zero() {
        return Err(ClassError::NotClosed);
    }
    let none = BTreeSet::new();
    let above = enumerate_basis(g, &none, degree + 1, weight);
    let here = enumerate_basis(g, &none, degree, weight);
    let d = boundary_map(g, &above, &here);
    let target = here.vector_of(chain).map_err(|_| ClassError::NotHomogeneous)?;
    Ok(crate::linalg::solve_in_image(&d, &target).map(|x| above.chain_of(&x)))
}

/// Star cycle data at a vertex using its first three half-edges.
pub fn default_star(g: &Graph, v: usize) -> Result<CycleSpec, ClassError> {
    let hs = g.half_edges_at(v);
    if hs.len() < 3 {
        return Err(ClassError::BadStar);
    }
    Ok(CycleSpec::Star { vertex: v, half_edges: [hs[0], hs[1], hs[2]] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{standard_graph, StandardGraph};
    use crate::linalg::int;

    fn he_toward(g: &Graph, v: usize, w: usize) -> usize {
        *g.half_edges_at(v)
            .iter()
            .find(|&&h| g.he_vertex(g.he_partner(h)) == w)
            .unwrap()
    }

    #[test]
    fn star_cycle_closed_and_antisymmetric() {
        let s3 = standard_graph(StandardGraph::Star(3)).unwrap();
        let c = s3.vertex("c").unwrap();
        let hs: Vec<usize> = s3.half_edges_at(c).to_vec();
        let a = star_cycle(&s3, c, hs[0], hs[1], hs[2]).unwrap();
        assert!(a.boundary(&s3).is_zero());
        assert_eq!(a.bidegree().unwrap(), Some((1, 2)));
        let swapped = star_cycle(&s3, c, hs[0], hs[2], hs[1]).unwrap();
        assert_eq!(swapped, a.neg());
        // Cyclic invariance.
        assert_eq!(star_cycle(&s3, c, hs[1], hs[2], hs[0]).unwrap(), a);
        assert!(star_cycle(&s3, c, hs[0], hs[0], hs[1]).is_err());
    }

    #[test]
    fn k4_star_cycle_matches_expansion() {
        // At vertex 4 of K4 the star cycle is
        // (h1 - h2) e34 + (h3 - h1) e24 + (h2 - h3) e14,
        // h_i the half-edge at 4 toward i.
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let v4 = k4.vertex("4").unwrap();
        let h = |i: &str| he_toward(&k4, v4, k4.vertex(i).unwrap());
        let (h1, h2, h3) = (h("1"), h("2"), h("3"));
        let a = star_cycle(&k4, v4, h1, h2, h3).unwrap();
        let e = |id: &str| k4.edge(id).unwrap();
        let mut expect = Chain::zero();
        for (hp, hm, eid) in [
            (h1, h2, "e34"),
            (h3, h1, "e24"),
            (h2, h3, "e14"),
        ] {
            expect.add_term(
                Monomial::empty(&k4).with_edge(e(eid), 1).with_state(v4, VertexState::Half(hp)),
                int(1),
            );
            expect.add_term(
                Monomial::empty(&k4).with_edge(e(eid), 1).with_state(v4, VertexState::Half(hm)),
                int(-1),
            );
        }
        assert_eq!(a, expect);
    }

    #[test]
    fn k4_triangle_loop_matches_expansion() {
        // gamma_4 = h^(1)_2 - h^(1)_3 + h^(2)_3 - h^(2)_1 + h^(3)_1 - h^(3)_2.
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let v = |i: &str| k4.vertex(i).unwrap();
        let walk = vec![
            he_toward(&k4, v("1"), v("2")),
            he_toward(&k4, v("2"), v("3")),
            he_toward(&k4, v("3"), v("1")),
        ];
        let gamma = loop_cycle(&k4, &walk).unwrap();
        assert!(gamma.boundary(&k4).is_zero());
        assert_eq!(gamma.bidegree().unwrap(), Some((1, 1)));
        let mut expect = Chain::zero();
        for (a, b, c) in [("1", "2", "3"), ("2", "3", "1"), ("3", "1", "2")] {
            expect.add_term(
                Monomial::empty(&k4).with_state(v(a), VertexState::Half(he_toward(&k4, v(a), v(b)))),
                int(1),
            );
            expect.add_term(
                Monomial::empty(&k4).with_state(v(a), VertexState::Half(he_toward(&k4, v(a), v(c)))),
                int(-1),
            );
        }
        assert_eq!(gamma, expect);
    }

    #[test]
    fn self_loop_cycle() {
        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let gamma = loop_cycle(&c1, &[0]).unwrap();
        assert!(gamma.boundary(&c1).is_zero());
        let mut expect = Chain::zero();
        expect.add_term(Monomial::empty(&c1).with_state(0, VertexState::Half(0)), int(1));
        expect.add_term(Monomial::empty(&c1).with_state(0, VertexState::Half(1)), int(-1));
        assert_eq!(gamma, expect);
    }

    #[test]
    fn theta_loops_closed() {
        let th = standard_graph(StandardGraph::Theta(3)).unwrap();
        let u = th.vertex("u").unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let out = th.half_edge_of(i, u).unwrap();
                let back = th.he_partner(th.half_edge_of(j, u).unwrap());
                let gamma = loop_cycle(&th, &[out, back]).unwrap();
                assert!(gamma.boundary(&th).is_zero(), "cycle through e{} e{}", i, j);
            }
        }
    }

    #[test]
    fn external_products() {
        let net = standard_graph(StandardGraph::Net).unwrap();
        let s1 = default_star(&net, net.vertex("1").unwrap()).unwrap();
        let s2 = default_star(&net, net.vertex("2").unwrap()).unwrap();
        let prod = build_cycle(&net, &CycleSpec::External(vec![s1.clone(), s2.clone()])).unwrap();
        assert_eq!(prod.bidegree().unwrap(), Some((2, 4)));
        assert!(prod.boundary(&net).is_zero());

        // Unit for the product.
        let a = build_cycle(&net, &s1).unwrap();
        let unit = Chain::from_monomial(Monomial::empty(&net));
        assert_eq!(external_product(&[a.clone(), unit]).unwrap(), a);

        // Transposing two degree-1 factors flips the sign.
        let b = build_cycle(&net, &s2).unwrap();
        let ab = external_product(&[a.clone(), b.clone()]).unwrap();
        let ba = external_product(&[b, a]).unwrap();
        assert_eq!(ab, ba.neg());
    }

    #[test]
    fn external_overlap_rejected() {
        let net = standard_graph(StandardGraph::Net).unwrap();
        let s1 = default_star(&net, net.vertex("1").unwrap()).unwrap();
        assert_eq!(
            build_cycle(&net, &CycleSpec::External(vec![s1.clone(), s1])).unwrap_err(),
            ClassError::Overlap
        );
        // A star leg reaching into a loop's owned edge overlaps.
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let v = |i: &str| k4.vertex(i).unwrap();
        let triangle = CycleSpec::Loop {
            walk: vec![
                he_toward(&k4, v("1"), v("2")),
                he_toward(&k4, v("2"), v("3")),
                he_toward(&k4, v("3"), v("1")),
            ],
        };
        let star_at_4 = default_star(&k4, v("4")).unwrap();
        // Works: star at 4 uses only pendant-like edges to the triangle.
        assert!(build_cycle(&k4, &CycleSpec::External(vec![triangle.clone(), star_at_4])).is_ok());
        // Fails: a star at 1 reaches into triangle edges.
        let star_at_1 = default_star(&k4, v("1")).unwrap();
        assert_eq!(
            build_cycle(&k4, &CycleSpec::External(vec![triangle, star_at_1])).unwrap_err(),
            ClassError::Overlap
        );
    }

    #[test]
    fn canonical_classes() {
        let net = standard_graph(StandardGraph::Net).unwrap();
        let beta = canonical_class(&net).unwrap();
        assert_eq!(beta.bidegree().unwrap(), Some((3, 6)));
        assert!(beta.boundary(&net).is_zero());

        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let beta = canonical_class(&k4).unwrap();
        assert_eq!(beta.bidegree().unwrap(), Some((4, 8)));
        assert!(beta.boundary(&k4).is_zero());

        // Lollipop: one trivalent vertex with a self-loop, so degree 1,
        // weight 1.
        let l1 = standard_graph(StandardGraph::Lollipop(1)).unwrap();
        let beta = canonical_class(&l1).unwrap();
        assert_eq!(beta.bidegree().unwrap(), Some((1, 1)));
        assert!(beta.boundary(&l1).is_zero());

        let c2 = standard_graph(StandardGraph::Cycle(2)).unwrap();
        assert_eq!(canonical_class(&c2).unwrap_err(), ClassError::NotUnitrivalent);
    }

    #[test]
    fn q_relation_on_l1_is_chain_level_zero() {
        let l1 = standard_graph(StandardGraph::Lollipop(1)).unwrap();
        let v0 = l1.vertex("0").unwrap();
        let loop_h = *l1
            .half_edges_at(v0)
            .iter()
            .find(|&&h| l1.is_self_loop(l1.he_edge(h)))
            .unwrap();
        let pendant = *l1
            .half_edges_at(v0)
            .iter()
            .find(|&&h| !l1.is_self_loop(l1.he_edge(h)))
            .unwrap();
        let rel = Relation::Q { walk: vec![loop_h], pendant };
        let chain = relation_chain(&l1, &rel).unwrap();
        assert!(chain.is_zero(), "got {:?}", chain);
    }

    #[test]
    fn theta_relation_has_explicit_bounding_chain() {
        // On the theta graph the difference of the two star cycles equals
        // the boundary of (h1-h2)(h'1-h'3) - (h1-h3)(h'1-h'2).
        let th = standard_graph(StandardGraph::Theta(3)).unwrap();
        let u = th.vertex("u").unwrap();
        let w = th.vertex("w").unwrap();
        let paths = [
            vec![th.half_edge_of(0, u).unwrap()],
            vec![th.half_edge_of(1, u).unwrap()],
            vec![th.half_edge_of(2, u).unwrap()],
        ];
        let chain = relation_chain(&th, &Relation::Theta { paths }).unwrap();
        let h = |e: usize| th.half_edge_of(e, u).unwrap();
        let hp = |e: usize| th.he_partner(th.half_edge_of(e, u).unwrap());
        let mono = |hu: usize, hw: usize, sign: i64, acc: &mut Chain| {
            acc.add_term(
                Monomial::empty(&th)
                    .with_state(u, VertexState::Half(hu))
                    .with_state(w, VertexState::Half(hw)),
                int(sign),
            );
        };
        let mut b = Chain::zero();
        for (h_u, h_w, s) in [
            (h(0), hp(0), 1),
            (h(0), hp(2), -1),
            (h(1), hp(0), -1),
            (h(1), hp(2), 1),
        ] {
            mono(h_u, h_w, s, &mut b);
        }
        let mut b2 = Chain::zero();
        for (h_u, h_w, s) in [
            (h(0), hp(0), 1),
            (h(0), hp(1), -1),
            (h(2), hp(0), -1),
            (h(2), hp(1), 1),
        ] {
            mono(h_u, h_w, s, &mut b2);
        }
        let bounding = b.sub(&b2);
        assert_eq!(bounding.boundary(&th), chain);
        assert_eq!(verify_boundary(&th, &chain), Ok(true));
    }

    #[test]
    fn star_and_loop_cycles_are_not_boundaries() {
        let s3 = standard_graph(StandardGraph::Star(3)).unwrap();
        let c = s3.vertex("c").unwrap();
        let hs = s3.half_edges_at(c).to_vec();
        let a = star_cycle(&s3, c, hs[0], hs[1], hs[2]).unwrap();
        assert_eq!(verify_boundary(&s3, &a), Ok(false));

        let c3 = standard_graph(StandardGraph::Cycle(3)).unwrap();
        let walk: Vec<usize> = (0..3).map(|i| c3.half_edge_of(i, i).unwrap()).collect();
        let gamma = loop_cycle(&c3, &walk).unwrap();
        assert_eq!(verify_boundary(&c3, &gamma), Ok(false));
    }

    #[test]
    fn verify_boundary_rejects_non_closed() {
        let s3 = standard_graph(StandardGraph::Star(3)).unwrap();
        let h = Chain::from_monomial(
            Monomial::empty(&s3).with_state(s3.vertex("c").unwrap(), VertexState::Half(0)),
        );
        assert_eq!(verify_boundary(&s3, &h), Err(ClassError::NotClosed));
    }
}
