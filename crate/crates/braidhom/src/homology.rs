//! Orchestration: homology of (degree, weight) slices, tables, and the
//! structural verifications (reduced quasi-isomorphism, edge-multiplication
//! injectivity, the vertex long exact sequence, one-bridge splittings, and
//! top-degree checks for unitrivalent graphs).

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::formulas::free_module_rank;
use crate::graph::Graph;
use crate::linalg::{
    self, homology_of_pair, induced_on_homology, HomologyGroup, LinalgError, SparseMat,
};
use crate::oracle::{self, OracleError};
use crate::report::{CheckReport, HomologyTable};
use crate::swk::{
    boundary_map, edge_mult_map, enumerate_basis, reduced_inclusion, ComplexSlice, SwkError,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Swk(#[from] SwkError),
    #[error("vertex {0} is not a separating bivalent vertex")]
    NotOneBridge(usize),
    #[error("graph is not unitrivalent")]
    NotUnitrivalent,
    #[error("half-edge {0} is not at vertex {1}")]
    HalfEdgeMismatch(usize, usize),
}

/// The default reduction set: every non-isolated vertex.
pub fn default_reduction(g: &Graph) -> BTreeSet<usize> {
    g.vertices().filter(|&v| g.degree(v) > 0).collect()
}

pub fn full_complex() -> BTreeSet<usize> {
    BTreeSet::new()
}

/// The boundary pair around slice (i, k): (d_in from degree i+1, d_out to
/// degree i-1).
fn boundary_pair(
    g: &Graph,
    red: &BTreeSet<usize>,
    i: usize,
    k: usize,
) -> (SparseMat, SparseMat, ComplexSlice) {
    let here = enumerate_basis(g, red, i, k);
    let above = enumerate_basis(g, red, i + 1, k);
    let d_in = boundary_map(g, &above, &here);
    let d_out = if i == 0 {
        SparseMat::zero(0, here.dim())
    } else {
        let below = enumerate_basis(g, red, i - 1, k);
        boundary_map(g, &here, &below)
    };
    (d_in, d_out, here)
}

/// Homology of the weight-k slice in degree i.
pub fn homology(g: &Graph, i: usize, k: usize, red: &BTreeSet<usize>) -> HomologyGroup {
    let (d_in, d_out, _) = boundary_pair(g, red, i, k);
    homology_of_pair(&d_in, &d_out).expect("slice complexes compose to zero")
}

/// The full rectangle of homology groups, computed in parallel and merged
/// in slice order.
pub fn homology_table(
    g: &Graph,
    i_max: usize,
    k_max: usize,
    red: &BTreeSet<usize>,
) -> HomologyTable {
    let cells: Vec<(usize, usize)> =
        (0..=i_max).flat_map(|i| (0..=k_max).map(move |k| (i, k))).collect();
    let entries: Vec<((usize, usize), HomologyGroup)> = cells
        .par_iter()
        .map(|&(i, k)| ((i, k), homology(g, i, k, red)))
        .collect();
    HomologyTable {
        graph: g.name().to_string(),
        reduced: !red.is_empty(),
        max_degree: i_max,
        max_weight: k_max,
        entries: entries.into_iter().collect(),
    }
}

/// Rational Betti numbers betti[i][k] for i <= i_max, k <= k_max, via
/// boundary ranks.
pub fn betti_table(g: &Graph, i_max: usize, k_max: usize, red: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let mut dims = vec![vec![0usize; k_max + 1]; i_max + 2];
    let mut slices: Vec<Vec<ComplexSlice>> = Vec::with_capacity(i_max + 2);
    for i in 0..=i_max + 1 {
        let mut row = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let s = enumerate_basis(g, red, i, k);
            dims[i][k] = s.dim();
            row.push(s);
        }
        slices.push(row);
    }
    // ranks[i][k] = rank of the boundary leaving degree i.
    let cells: Vec<(usize, usize)> =
        (1..=i_max + 1).flat_map(|i| (0..=k_max).map(move |k| (i, k))).collect();
    let ranks: Vec<((usize, usize), usize)> = cells
        .par_iter()
        .map(|&(i, k)| {
            let d = boundary_map(g, &slices[i][k], &slices[i - 1][k]);
            ((i, k), linalg::rank(&d))
        })
        .collect();
    let mut rank_of = vec![vec![0usize; k_max + 1]; i_max + 2];
    for ((i, k), r) in ranks {
        rank_of[i][k] = r;
    }
    let mut betti = vec![vec![0usize; k_max + 1]; i_max + 1];
    for i in 0..=i_max {
        for k in 0..=k_max {
            betti[i][k] = dims[i][k] - rank_of[i + 1][k] - if i == 0 { 0 } else { rank_of[i][k] };
        }
    }
    betti
}

/// Verifies that the reduced inclusion induces an isomorphism on homology
/// in every slice of the rectangle.
pub fn verify_reduced_quasi_iso(
    g: &Graph,
    u: &BTreeSet<usize>,
    i_max: usize,
    k_max: usize,
) -> Result<CheckReport, EngineError> {
    for &v in u {
        if g.degree(v) == 0 {
            return Err(EngineError::Swk(SwkError::IsolatedReduced(v)));
        }
    }
    let mut report = CheckReport::new(
        "reduced_quasi_iso",
        format!("graph={} |U|={} i<={} k<={}", g.name(), u.len(), i_max, k_max),
    );
    let full = full_complex();
    for k in 0..=k_max {
        for i in 0..=i_max {
            let (rd_in, rd_out, r_here) = boundary_pair(g, u, i, k);
            let (fd_in, fd_out, f_here) = boundary_pair(g, &full, i, k);
            let inc = reduced_inclusion(g, &r_here, &f_here)?;
            let ind = induced_on_homology(&inc, (&rd_in, &rd_out), (&fd_in, &fd_out), false)?;
            report.push(
                format!("i={} k={}", i, k),
                ind.is_isomorphism(),
                format!("reduced {} vs full {}", ind.source, ind.target),
            );
        }
    }
    Ok(report)
}

/// Verifies that multiplication by every edge is injective on homology over
/// the integers, for all slices in the rectangle.
pub fn verify_edge_injectivity(
    g: &Graph,
    i_max: usize,
    k_max: usize,
    red: &BTreeSet<usize>,
) -> Result<CheckReport, EngineError> {
    let mut report = CheckReport::new(
        "edge_injectivity",
        format!("graph={} i<={} k<={}", g.name(), i_max, k_max),
    );
    for e in g.edges() {
        for k in 0..=k_max {
            for i in 0..=i_max {
                let (sd_in, sd_out, s_here) = boundary_pair(g, red, i, k);
                let (td_in, td_out, t_here) = boundary_pair(g, red, i, k + 1);
                let f = edge_mult_map(g, e, &s_here, &t_here);
                let ind =
                    induced_on_homology(&f, (&sd_in, &sd_out), (&td_in, &td_out), false)?;
                report.push(
                    format!("e={} i={} k={}", g.edge_id(e), i, k),
                    ind.injective,
                    format!("{} -> {}", ind.source, ind.target),
                );
            }
        }
    }
    Ok(report)
}

/// Rank of the map induced on rational homology at slice (i, k) -> (i, k')
/// by a chain-level map given as blocks (all sharing the same target).
fn induced_rank_rational(
    blocks: &[SparseMat],
    src_out: &SparseMat,
    tgt_in: &SparseMat,
) -> usize {
    let kernel = linalg::kernel(src_out).basis();
    let mut stacked = tgt_in.clone();
    for f in blocks {
        stacked = stacked.hstack(&f.mul(&kernel));
    }
    linalg::rank(&stacked) - linalg::rank(tgt_in)
}

/// Checks the rank-level exactness of the long exact sequence attached to a
/// vertex: with gv the explosion of g at v and delta the connecting map
/// multiplying by e(h) - e(h0) on each summand,
///
///   dim H_n(B_k(g)) = dim coker(delta at (n, k)) + dim ker(delta at (n-1, k)).
pub fn les_check(
    g: &Graph,
    v: usize,
    h0: usize,
    n_max: usize,
    k_max: usize,
) -> Result<CheckReport, EngineError> {
    if g.he_vertex(h0) != v {
        return Err(EngineError::HalfEdgeMismatch(h0, v));
    }
    let (gv, _) = g.vertex_explosion(v).expect("vertex validated");
    let red_g = default_reduction(g);
    let red_gv = default_reduction(&gv);
    let betti_g = betti_table(g, n_max, k_max, &red_g);
    let betti_gv = betti_table(&gv, n_max, k_max, &red_gv);
    let others: Vec<usize> =
        g.half_edges_at(v).iter().copied().filter(|&h| h != h0).collect();
    // Edges keep their indices under explosion.
    let e0 = g.he_edge(h0);

    let mut report = CheckReport::new(
        "vertex_les",
        format!("graph={} v={} h0={} n<={} k<={}", g.name(), g.vertex_id(v), h0, n_max, k_max),
    );
    // delta_rank[n][k]: rank of the connecting map into H_n(B_k(gv)).
    let mut delta_rank = vec![vec![0usize; k_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for k in 1..=k_max {
            let src_here = enumerate_basis(&gv, &red_gv, n, k - 1);
            let tgt_here = enumerate_basis(&gv, &red_gv, n, k);
            if src_here.dim() == 0 {
                continue;
            }
            let src_below = enumerate_basis(&gv, &red_gv, n.wrapping_sub(1), k - 1);
            let src_out = if n == 0 {
                SparseMat::zero(0, src_here.dim())
            } else {
                boundary_map(&gv, &src_here, &src_below)
            };
            let tgt_above = enumerate_basis(&gv, &red_gv, n + 1, k);
            let tgt_in = boundary_map(&gv, &tgt_above, &tgt_here);
            let blocks: Vec<SparseMat> = others
                .iter()
                .map(|&h| {
                    let m_h = edge_mult_map(&gv, g.he_edge(h), &src_here, &tgt_here);
                    let m_0 = edge_mult_map(&gv, e0, &src_here, &tgt_here);
                    let mut diff = m_h;
                    for (r, c, val) in m_0.entries().map(|(r, c, v)| (r, c, v.clone())) {
                        diff.add_entry(r, c, -val);
                    }
                    diff
                })
                .collect();
            delta_rank[n][k] = induced_rank_rational(&blocks, &src_out, &tgt_in);
        }
    }
    let dim_gv =
        |n: usize, k: usize| -> usize { betti_gv.get(n).map_or(0, |row| row[k]) };
    for n in 0..=n_max {
        for k in 0..=k_max {
            let coker = dim_gv(n, k) - delta_rank[n][k];
            let kernel = if n == 0 || k == 0 {
                0
            } else {
                others.len() * dim_gv(n - 1, k - 1) - delta_rank[n - 1][k]
            };
            let lhs = betti_g[n][k];
            report.push(
                format!("n={} k={}", n, k),
                lhs == coker + kernel,
                format!("dim H = {}, coker delta = {}, ker delta = {}", lhs, coker, kernel),
            );
        }
    }
    Ok(report)
}

/// Checks the one-bridge splitting at a separating bivalent vertex: over
/// the rationals the homology of g is the tensor product, over a weight-1
/// polynomial variable, of the two halves' homology.  Free generator counts
/// per weight are first differences of the dimension sequences.
pub fn one_bridge_check(
    g: &Graph,
    v: usize,
    n_max: usize,
    k_max: usize,
) -> Result<CheckReport, EngineError> {
    if g.degree(v) != 2 {
        return Err(EngineError::NotOneBridge(v));
    }
    let (gv, _) = g.vertex_explosion(v).expect("vertex validated");
    let comps = gv.component_subgraphs();
    if comps.len() != g.components().0 + 1 {
        return Err(EngineError::NotOneBridge(v));
    }
    if g.components().0 != 1 {
        return Err(EngineError::NotOneBridge(v));
    }
    let left = &comps[0];
    let right = &comps[1];
    let b_left = betti_table(left, n_max, k_max, &default_reduction(left));
    let b_right = betti_table(right, n_max, k_max, &default_reduction(right));
    let b_g = betti_table(g, n_max, k_max, &default_reduction(g));
    // Free generator counts over K[e].
    let gens = |b: &Vec<Vec<usize>>, i: usize, a: usize| -> i64 {
        let cur = b[i][a] as i64;
        let prev = if a == 0 { 0 } else { b[i][a - 1] as i64 };
        cur - prev
    };
    let mut report = CheckReport::new(
        "one_bridge",
        format!("graph={} v={} n<={} k<={}", g.name(), g.vertex_id(v), n_max, k_max),
    );
    for i in 0..=n_max {
        for a in 0..=k_max {
            if gens(&b_left, i, a) < 0 || gens(&b_right, i, a) < 0 {
                report.push(
                    format!("gen i={} a={}", i, a),
                    false,
                    "dimension sequence not monotone; freeness fails".into(),
                );
            }
        }
    }
    for n in 0..=n_max {
        for k in 0..=k_max {
            let mut predicted = 0i64;
            for i in 0..=n {
                let j = n - i;
                for a in 0..=k {
                    for b in 0..=(k - a) {
                        predicted += gens(&b_left, i, a) * gens(&b_right, j, b);
                    }
                }
            }
            report.push(
                format!("n={} k={}", n, k),
                b_g[n][k] as i64 == predicted,
                format!("dim H = {}, tensor product predicts {}", b_g[n][k], predicted),
            );
        }
    }
    Ok(report)
}

/// Top-degree checks for a unitrivalent graph with N trivalent vertices and
/// r self-loops: H_N(B_k) is free of rank C(k - (2N - r) + |E| - 1, |E| - 1);
/// for simple graphs, H_{N-1} matches the per-vertex quotient-module count
/// and H_{N-2} is torsion-free.
pub fn unitrivalent_top_check(g: &Graph, weights: &[usize]) -> Result<CheckReport, EngineError> {
    let mut n_trivalent = 0usize;
    for v in g.vertices() {
        match g.degree(v) {
            1 => {}
            3 => n_trivalent += 1,
            _ => return Err(EngineError::NotUnitrivalent),
        }
    }
    let self_loops = g.edges().filter(|&e| g.is_self_loop(e)).count();
    let mut parallel = false;
    {
        let mut seen = BTreeSet::new();
        for e in g.edges() {
            let (a, b) = g.endpoints(e);
            if !seen.insert((a.min(b), a.max(b))) {
                parallel = true;
            }
        }
    }
    let simple = self_loops == 0 && !parallel;
    let n = n_trivalent;
    let beta_weight = 2 * n - self_loops;
    let red = default_reduction(g);
    let mut report = CheckReport::new(
        "unitrivalent_top",
        format!("graph={} N={} r={} simple={}", g.name(), n, self_loops, simple),
    );
    for &k in weights {
        let top = homology(g, n, k, &red);
        let expect = free_module_rank(g.n_edges(), &[beta_weight], k);
        report.push(
            format!("H_{}(B_{})", n, k),
            top.betti == expect && top.torsion.is_empty(),
            format!("got {}, expected free rank {}", top, expect),
        );
        if simple && n >= 1 {
            let codim1 = homology(g, n - 1, k, &red);
            // Identifying the three edges at a vertex leaves |E| - 2
            // variables per trivalent vertex.
            let expect: usize = (0..n)
                .map(|_| free_module_rank(g.n_edges() - 2, &[2 * n - 2], k))
                .sum();
            report.push(
                format!("H_{}(B_{})", n - 1, k),
                codim1.betti == expect && codim1.torsion.is_empty(),
                format!("got {}, expected free rank {}", codim1, expect),
            );
        }
        if simple && n >= 2 {
            let codim2 = homology(g, n - 2, k, &red);
            report.push(
                format!("H_{}(B_{}) torsion", n - 2, k),
                codim2.torsion.is_empty(),
                format!("got {}", codim2),
            );
        }
    }
    Ok(report)
}

/// Cross-check against the subdivision oracle, slice by slice, exact
/// including torsion.  Slices whose cell count exceeds the ceiling are
/// skipped with a notice rather than failed.
pub fn cross_check(
    g: &Graph,
    i_max: usize,
    k_max: usize,
    max_cells: usize,
    red: &BTreeSet<usize>,
) -> CheckReport {
    let mut report = CheckReport::new(
        "oracle_cross_check",
        format!("graph={} i<={} k<={} max_cells={}", g.name(), i_max, k_max, max_cells),
    );
    for k in 0..=k_max {
        match oracle::oracle_homology_range(g, i_max, k, max_cells) {
            Ok(oracle_groups) => {
                for (i, from_oracle) in oracle_groups.iter().enumerate() {
                    let from_slices = homology(g, i, k, red);
                    report.push(
                        format!("i={} k={}", i, k),
                        from_slices == *from_oracle,
                        format!("slice complex {} vs oracle {}", from_slices, from_oracle),
                    );
                }
            }
            Err(OracleError::CellCeiling { ceiling }) => {
                report.push(
                    format!("k={}", k),
                    true,
                    format!("skipped: cell count exceeds ceiling {}", ceiling),
                );
            }
            Err(e @ OracleError::Stabilization { .. }) => {
                report.push(format!("k={}", k), false, e.to_string());
            }
        }
    }
    report
}

impl Graph {
    /// The connected components as separate graphs (original labels kept).
    pub fn component_subgraphs(&self) -> Vec<Graph> {
        let (count, comp) = self.components();
        (0..count)
            .map(|c| {
                let vs: Vec<&str> = self
                    .vertices()
                    .filter(|&v| comp[v] == c)
                    .map(|v| self.vertex_id(v))
                    .collect();
                let es: Vec<(&str, &str, &str)> = self
                    .edges()
                    .filter(|&e| comp[self.endpoints(e).0] == c)
                    .map(|e| {
                        let (a, b) = self.endpoints(e);
                        (self.edge_id(e), self.vertex_id(a), self.vertex_id(b))
                    })
                    .collect();
                Graph::build_named(&format!("{}#{}", self.name(), c), &vs, &es)
                    .expect("component subgraph")
            })
            .collect()
    }
}
