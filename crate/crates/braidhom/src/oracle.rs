//! Brute-force cross-check: the discrete configuration complex of a
//! sufficiently subdivided graph.
//!
//! A cell is a set of k pairwise closure-disjoint closed cells (vertices and
//! edges) of the subdivided graph; its dimension is the number of edge
//! members.  Cellular homology of this cube complex computes the homology of
//! the k-point configuration space once the graph is subdivided finely
//! enough.  Every answer is recomputed with one extra round of subdivision
//! and must agree, so the oracle certifies its own subdivision level rather
//! than trusting a fixed bound.

use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{rank, snf_diagonal, HomologyGroup, Int, SparseMat};
use num_traits::One;

pub const DEFAULT_MAX_CELLS: usize = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("cell count exceeds the ceiling of {ceiling} cells")]
    CellCeiling { ceiling: usize },
    #[error("stabilization failure at (i={i}, k={k}): {first} vs {second} after one more subdivision")]
    Stabilization { i: usize, k: usize, first: String, second: String },
}

/// A closed cell of the subdivided graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellId {
    V(usize),
    E(usize),
}

/// A set of pairwise closure-disjoint closed cells, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeCell(pub Vec<CellId>);

impl CubeCell {
    pub fn dimension(&self) -> usize {
        self.0.iter().filter(|c| matches!(c, CellId::E(_))).count()
    }
}

/// Subdivides every edge into max(k+1, 2) pieces.  This removes self-loops
/// and makes every essential path and cycle long enough for k points; the
/// stabilization recheck in [`oracle_homology`] certifies sufficiency.
pub fn sufficient_subdivision(g: &Graph, k: usize) -> Graph {
    subdivision_at(g, k, 0)
}

fn subdivision_at(g: &Graph, k: usize, extra: usize) -> Graph {
    let pieces = (k + 1).max(2) + extra;
    let (sub, _) = g.subdivide(&vec![pieces; g.n_edges()]).expect("uniform subdivision");
    sub
}

/// The chain complex of the k-point configuration complex.
pub struct CubeComplex {
    /// Cells by dimension; dimension d holds the cells with d edge members.
    pub cells: Vec<Vec<CubeCell>>,
    /// boundaries[d] maps dimension d to dimension d-1 (d >= 1).
    pub boundaries: Vec<SparseMat>,
}

impl CubeComplex {
    pub fn dim_count(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, |c| c.len())
    }

    pub fn euler_characteristic(&self) -> Int {
        let mut chi = Int::from(0);
        for (d, cells) in self.cells.iter().enumerate() {
            let term = Int::from(cells.len() as i64);
            if d % 2 == 0 {
                chi += term;
            } else {
                chi -= term;
            }
        }
        chi
    }
}

fn touched_mask(g: &Graph, c: CellId, words: usize) -> Vec<u64> {
    let mut mask = vec![0u64; words];
    let mut set = |v: usize| mask[v / 64] |= 1 << (v % 64);
    match c {
        CellId::V(v) => set(v),
        CellId::E(e) => {
            let (a, b) = g.endpoints(e);
            set(a);
            set(b);
        }
    }
    mask
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

/// All k-element closure-disjoint cell sets, bucketed by dimension.
pub fn enumerate_cells(
    g: &Graph,
    k: usize,
    max_cells: usize,
) -> Result<Vec<Vec<CubeCell>>, OracleError> {
    let words = g.n_vertices().div_ceil(64).max(1);
    let all: Vec<CellId> = g
        .vertices()
        .map(CellId::V)
        .chain(g.edges().map(CellId::E))
        .collect();
    let masks: Vec<Vec<u64>> = all.iter().map(|&c| touched_mask(g, c, words)).collect();
    let mut out: Vec<Vec<CubeCell>> = vec![Vec::new(); k + 1];
    let mut total = 0usize;
    let mut chosen: Vec<CellId> = Vec::with_capacity(k);
    let mut used = vec![0u64; words];

    fn rec(
        all: &[CellId],
        masks: &[Vec<u64>],
        start: usize,
        remaining: usize,
        chosen: &mut Vec<CellId>,
        used: &mut Vec<u64>,
        out: &mut Vec<Vec<CubeCell>>,
        total: &mut usize,
        max_cells: usize,
    ) -> Result<(), OracleError> {
        if remaining == 0 {
            *total += 1;
            if *total > max_cells {
                return Err(OracleError::CellCeiling { ceiling: max_cells });
            }
            let cell = CubeCell(chosen.clone());
            let d = cell.dimension();
            out[d].push(cell);
            return Ok(());
        }
        if all.len() - start < remaining {
            return Ok(());
        }
        for i in start..all.len() {
            if !disjoint(&masks[i], used) {
                continue;
            }
            for (w, m) in used.iter_mut().zip(&masks[i]) {
                *w |= m;
            }
            chosen.push(all[i]);
            rec(all, masks, i + 1, remaining - 1, chosen, used, out, total, max_cells)?;
            chosen.pop();
            for (w, m) in used.iter_mut().zip(&masks[i]) {
                *w &= !m;
            }
        }
        Ok(())
    }

    rec(&all, &masks, 0, k, &mut chosen, &mut used, &mut out, &mut total, max_cells)?;
    for bucket in out.iter_mut() {
        bucket.sort_unstable();
    }
    Ok(out)
}

/// Cubical boundary: with a cell's edge members sorted by edge order, the
/// j-th edge (1-indexed) contributes (-1)^(j-1) ([e_j -> head] - [e_j ->
/// tail]), edges oriented from the lower-ordered endpoint to the higher.
pub fn cube_boundary(
    g: &Graph,
    from: &[CubeCell],
    to_index: &std::collections::HashMap<CubeCell, usize>,
    to_len: usize,
) -> SparseMat {
    let mut m = SparseMat::zero(to_len, from.len());
    for (j, cell) in from.iter().enumerate() {
        let mut edge_no = 0usize;
        for (pos, &c) in cell.0.iter().enumerate() {
            let CellId::E(e) = c else { continue };
            let sign = if edge_no % 2 == 0 { Int::one() } else { -Int::one() };
            edge_no += 1;
            let (a, b) = g.endpoints(e);
            let (tail, head) = (a.min(b), a.max(b));
            if head == tail {
                // A self-loop member has coinciding faces; they cancel.
                continue;
            }
            for (vertex, s) in [(head, sign.clone()), (tail, -sign.clone())] {
                let mut face = cell.0.clone();
                face[pos] = CellId::V(vertex);
                face.sort_unstable();
                let i = to_index[&CubeCell(face)];
                m.add_entry(i, j, s);
            }
        }
    }
    m
}

/// Builds the whole complex for k points on (an already subdivided) graph.
pub fn build_complex(g: &Graph, k: usize, max_cells: usize) -> Result<CubeComplex, OracleError> {
    let cells = enumerate_cells(g, k, max_cells)?;
    let mut boundaries = vec![SparseMat::zero(0, 0)];
    for d in 1..cells.len() {
        let index: std::collections::HashMap<CubeCell, usize> =
            cells[d - 1].iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        boundaries.push(cube_boundary(g, &cells[d], &index, cells[d - 1].len()));
    }
    Ok(CubeComplex { cells, boundaries })
}

/// Homology groups H_0..H_{i_max} of a built complex.  Betti numbers come
/// from boundary ranks; torsion of H_i is read from the invariant factors
/// of the (i+1)-st boundary, which is valid because the cycle lattice is a
/// direct summand of the chain lattice.
pub fn complex_homology(cx: &CubeComplex, i_max: usize) -> Vec<HomologyGroup> {
    let top = cx.cells.len() - 1;
    let mut ranks = vec![0usize; top + 2];
    let mut torsions: Vec<Vec<Int>> = vec![Vec::new(); top + 2];
    for d in 1..=top {
        if cx.boundaries[d].is_zero() {
            continue;
        }
        if d <= i_max + 1 {
            let diag = snf_diagonal(&cx.boundaries[d]);
            ranks[d] = diag.len();
            torsions[d] = diag.into_iter().filter(|x| !x.is_one()).collect();
        } else {
            ranks[d] = rank(&cx.boundaries[d]);
        }
    }
    let mut out = Vec::new();
    for i in 0..=i_max {
        let dim = cx.dim_count(i);
        let (r_out, r_in) = (ranks.get(i).copied().unwrap_or(0), ranks.get(i + 1).copied().unwrap_or(0));
        let r_out = if i == 0 { 0 } else { r_out };
        out.push(HomologyGroup {
            betti: dim - r_out - r_in,
            torsion: torsions.get(i + 1).cloned().unwrap_or_default(),
        });
    }
    out
}

/// H_0..H_{i_max} of the k-point configuration space of `g`, computed on a
/// sufficient subdivision and certified by recomputing on a finer one.
pub fn oracle_homology_range(
    g: &Graph,
    i_max: usize,
    k: usize,
    max_cells: usize,
) -> Result<Vec<HomologyGroup>, OracleError> {
    let first = {
        let sub = subdivision_at(g, k, 0);
        let cx = build_complex(&sub, k, max_cells)?;
        complex_homology(&cx, i_max)
    };
    let second = {
        let sub = subdivision_at(g, k, 1);
        let cx = build_complex(&sub, k, max_cells)?;
        complex_homology(&cx, i_max)
    };
    for i in 0..=i_max {
        if first[i] != second[i] {
            return Err(OracleError::Stabilization {
                i,
                k,
                first: first[i].to_string(),
                second: second[i].to_string(),
            });
        }
    }
    Ok(first)
}

/// Single homology group, with the stabilization certificate.
pub fn oracle_homology(
    g: &Graph,
    i: usize,
    k: usize,
    max_cells: usize,
) -> Result<HomologyGroup, OracleError> {
    Ok(oracle_homology_range(g, i, k, max_cells)?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::euler_characteristic;
    use crate::graph::{standard_graph, StandardGraph};
    use crate::linalg::{homology_of_pair, int};
    use num_traits::Zero;

    #[test]
    fn cell_counts_path4() {
        // Two points on a path with 4 vertices: 6 / 6 / 1 cells.
        let i = standard_graph(StandardGraph::Interval).unwrap();
        let (p4, _) = i.subdivide(&[3]).unwrap();
        let cells = enumerate_cells(&p4, 2, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(cells[0].len(), 6);
        assert_eq!(cells[1].len(), 6);
        assert_eq!(cells[2].len(), 1);
    }

    #[test]
    fn cell_counts_c5() {
        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let (c5, _) = c1.subdivide(&[5]).unwrap();
        let cells = enumerate_cells(&c5, 2, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(cells[0].len(), 10);
        assert_eq!(cells[1].len(), 15);
        assert_eq!(cells[2].len(), 5);
    }

    #[test]
    fn zero_points_single_cell() {
        let g = standard_graph(StandardGraph::Complete(4)).unwrap();
        let cells = enumerate_cells(&g, 0, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(cells[0].len(), 1);
        assert!(cells[0][0].0.is_empty());
    }

    #[test]
    fn subdivision_sizes() {
        // Each of the 6 edges into 3 pieces: 18 edges, 4 + 12 vertices.
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let sub = sufficient_subdivision(&k4, 2);
        assert_eq!(sub.n_vertices(), 16);
        assert_eq!(sub.n_edges(), 18);
        assert_eq!(
            sub.n_vertices() as i64 - sub.n_edges() as i64,
            k4.n_vertices() as i64 - k4.n_edges() as i64
        );
        let i = standard_graph(StandardGraph::Interval).unwrap();
        let sub = sufficient_subdivision(&i, 3);
        assert_eq!(sub.n_vertices(), 5);
        // Self-loops disappear.
        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let sub = sufficient_subdivision(&c1, 2);
        assert!(sub.edges().all(|e| !sub.is_self_loop(e)));
        assert_eq!(sub.n_edges(), 3);
    }

    #[test]
    fn boundary_convention_and_d_squared() {
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        let sub = sufficient_subdivision(&k4, 2);
        let cx = build_complex(&sub, 2, DEFAULT_MAX_CELLS).unwrap();
        // Single-edge cells: boundary is head - tail within each cell.
        let d1 = &cx.boundaries[1];
        for (j, cell) in cx.cells[1].iter().enumerate() {
            let col: Vec<Int> = d1.col_vec(j);
            let nonzero = col.iter().filter(|v| !v.is_zero()).count();
            assert_eq!(nonzero, 2, "cell {:?}", cell);
        }
        for d in 2..cx.cells.len() {
            assert!(cx.boundaries[d - 1].mul(&cx.boundaries[d]).is_zero());
        }
    }

    #[test]
    fn self_loop_contributes_zero() {
        // Without subdividing, a self-loop cell's faces cancel.
        let l1 = standard_graph(StandardGraph::Lollipop(1)).unwrap();
        let cx = build_complex(&l1, 1, DEFAULT_MAX_CELLS).unwrap();
        // One point on the graph: cells are vertices and edges.
        let loop_col = cx.cells[1]
            .iter()
            .position(|c| matches!(c.0[0], CellId::E(e) if l1.is_self_loop(e)))
            .unwrap();
        assert!(cx.boundaries[1].col_vec(loop_col).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn oracle_circle_two_points() {
        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let h = oracle_homology(&c1, 1, 2, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(h, HomologyGroup::free(1));
    }

    #[test]
    fn oracle_star_two_points() {
        let s3 = standard_graph(StandardGraph::Star(3)).unwrap();
        let h = oracle_homology(&s3, 1, 2, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(h, HomologyGroup::free(1));
    }

    #[test]
    fn oracle_interval_contractible() {
        let i = standard_graph(StandardGraph::Interval).unwrap();
        for k in 0..=3 {
            let hs = oracle_homology_range(&i, 2, k, DEFAULT_MAX_CELLS).unwrap();
            assert_eq!(hs[0], HomologyGroup::free(1), "k={}", k);
            assert!(hs[1].is_trivial());
            assert!(hs[2].is_trivial());
        }
    }

    #[test]
    fn euler_characteristic_matches_formula() {
        for kind in [
            StandardGraph::Interval,
            StandardGraph::Star(3),
            StandardGraph::Cycle(3),
            StandardGraph::Theta(3),
            StandardGraph::Complete(4),
        ] {
            let g = standard_graph(kind).unwrap();
            for k in 0..=3 {
                let sub = sufficient_subdivision(&g, k);
                let cx = build_complex(&sub, k, DEFAULT_MAX_CELLS).unwrap();
                assert_eq!(
                    cx.euler_characteristic(),
                    euler_characteristic(&g, k),
                    "{:?} k={}",
                    kind,
                    k
                );
            }
        }
    }

    #[test]
    fn h0_counts_component_multisets() {
        // Two components: H_0(B_k) has rank = number of k-multisets of
        // components.
        let i = standard_graph(StandardGraph::Interval).unwrap();
        let u = i.disjoint_union(&i);
        for (k, expected) in [(1usize, 2usize), (2, 3), (3, 4)] {
            let hs = oracle_homology_range(&u, 0, k, DEFAULT_MAX_CELLS).unwrap();
            assert_eq!(hs[0], HomologyGroup::free(expected), "k={}", k);
        }
    }

    #[test]
    fn rank_diag_method_matches_two_stage() {
        // The oracle's betti/torsion bookkeeping must agree with the
        // kernel-based two-stage reduction.
        let theta = standard_graph(StandardGraph::Theta(3)).unwrap();
        let sub = sufficient_subdivision(&theta, 2);
        let cx = build_complex(&sub, 2, DEFAULT_MAX_CELLS).unwrap();
        let hs = complex_homology(&cx, 2);
        for i in 0..=2 {
            let zero_in;
            let d_in = if i + 1 < cx.boundaries.len() {
                &cx.boundaries[i + 1]
            } else {
                zero_in = SparseMat::zero(cx.dim_count(i), 0);
                &zero_in
            };
            let zero_out;
            let d_out = if i >= 1 {
                &cx.boundaries[i]
            } else {
                zero_out = SparseMat::zero(0, cx.dim_count(0));
                &zero_out
            };
            let h = homology_of_pair(d_in, d_out).unwrap();
            assert_eq!(h, hs[i], "degree {}", i);
        }
    }

    #[test]
    fn ceiling_is_enforced() {
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        assert_eq!(
            oracle_homology(&k4, 1, 2, 10),
            Err(OracleError::CellCeiling { ceiling: 10 })
        );
    }

    #[test]
    fn oracle_k33_two_torsion() {
        let k33 = standard_graph(StandardGraph::CompleteBipartite(3, 3)).unwrap();
        let h = oracle_homology(&k33, 1, 2, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(h.betti, 4);
        assert_eq!(h.torsion, vec![int(2)]);
    }
}
