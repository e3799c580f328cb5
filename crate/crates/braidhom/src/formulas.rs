//! Closed-form combinatorics: Euler characteristics of the configuration
//! spaces, the Euler-Poincare series, and rank predictions for free modules
//! over the edge polynomial ring.

use num_traits::{One, Zero};

use crate::graph::Graph;
use crate::linalg::Int;

/// Binomial coefficient with C(n, m) = 0 for n < 0 or n < m.
pub fn binomial(n: i64, m: i64) -> Int {
    if m < 0 || n < 0 || n < m {
        return Int::zero();
    }
    let mut acc = Int::one();
    for i in 0..m {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Euler characteristic of the space of k points on the graph:
/// sum over vertex subsets U of
/// (-1)^|U| C(k - |U| + |E| - 1, |E| - 1) prod_{v in U} (d(v) - 1),
/// evaluated through the elementary symmetric polynomials of the d(v) - 1.
pub fn euler_characteristic(g: &Graph, k: usize) -> Int {
    let ne = g.n_edges() as i64;
    let nv = g.n_vertices();
    // elem[u] = e_u(d(v) - 1 : v in V)
    let mut elem = vec![Int::zero(); nv + 1];
    elem[0] = Int::one();
    for v in g.vertices() {
        let x = Int::from(g.degree(v) as i64 - 1);
        for u in (1..=nv).rev() {
            let add = &elem[u - 1] * &x;
            elem[u] += add;
        }
    }
    let mut chi = Int::zero();
    for (u, coeff) in elem.iter().enumerate() {
        let b = if ne == 0 {
            // No edges: the multiplicity factor degenerates to [k = |U|].
            if k as i64 == u as i64 {
                Int::one()
            } else {
                Int::zero()
            }
        } else {
            binomial(k as i64 - u as i64 + ne - 1, ne - 1)
        };
        let term = coeff * b;
        if u % 2 == 0 {
            chi += term;
        } else {
            chi -= term;
        }
    }
    chi
}

/// Coefficients c_0..c_kmax of the Euler-Poincare series
/// prod_v (1 + t (1 - d(v))) / (1 - t)^{|E|}, expanded by explicit power
/// series arithmetic (an independent route to the same numbers as
/// [`euler_characteristic`]).
pub fn euler_poincare_coeffs(g: &Graph, k_max: usize) -> Vec<Int> {
    let mut coeffs = vec![Int::zero(); k_max + 1];
    coeffs[0] = Int::one();
    for v in g.vertices() {
        // Multiply by 1 + (1 - d(v)) t.
        let c = Int::from(1 - g.degree(v) as i64);
        for k in (1..=k_max).rev() {
            let add = &coeffs[k - 1] * &c;
            coeffs[k] += add;
        }
    }
    // Dividing by (1 - t) is a running sum.
    for _ in 0..g.n_edges() {
        for k in 1..=k_max {
            let prev = coeffs[k - 1].clone();
            coeffs[k] += prev;
        }
    }
    coeffs
}

/// Rank in weight k of a free module over a polynomial ring on `num_edges`
/// weight-1 variables with generators of the given weights.
pub fn free_module_rank(num_edges: usize, generator_weights: &[usize], k: usize) -> usize {
    let mut total = Int::zero();
    for &w in generator_weights {
        if num_edges == 0 {
            if w == k {
                total += Int::one();
            }
        } else {
            total += binomial(
                k as i64 - w as i64 + num_edges as i64 - 1,
                num_edges as i64 - 1,
            );
        }
    }
    let s = total.to_string();
    s.parse::<usize>().expect("rank fits in usize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{standard_graph, Graph, StandardGraph};
    use crate::linalg::int;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(-1, 0), int(0));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(0, 0), int(1));
    }

    #[test]
    fn euler_k4_weight_two() {
        // 21 - 48 + 24 by direct evaluation of the subset sum.
        let k4 = standard_graph(StandardGraph::Complete(4)).unwrap();
        assert_eq!(euler_characteristic(&k4, 2), int(-3));
    }

    #[test]
    fn euler_weight_one_is_graph_euler_characteristic() {
        for kind in [
            StandardGraph::Complete(4),
            StandardGraph::Star(3),
            StandardGraph::Theta(3),
            StandardGraph::Lollipop(2),
        ] {
            let g = standard_graph(kind).unwrap();
            let chi = g.n_vertices() as i64 - g.n_edges() as i64;
            assert_eq!(euler_characteristic(&g, 1), Int::from(chi), "{:?}", kind);
        }
    }

    #[test]
    fn euler_s3_weight_two() {
        let s3 = standard_graph(StandardGraph::Star(3)).unwrap();
        assert_eq!(euler_characteristic(&s3, 2), int(0));
    }

    #[test]
    fn series_matches_formula() {
        for kind in [
            StandardGraph::Interval,
            StandardGraph::Cycle(1),
            StandardGraph::Complete(4),
            StandardGraph::Net,
            StandardGraph::CompleteBipartite(2, 3),
        ] {
            let g = standard_graph(kind).unwrap();
            let series = euler_poincare_coeffs(&g, 10);
            for (k, c) in series.iter().enumerate() {
                assert_eq!(*c, euler_characteristic(&g, k), "{:?} at k={}", kind, k);
            }
        }
    }

    #[test]
    fn series_special_cases() {
        // The circle: 1 + 0 t + 0 t^2 + ...
        let c1 = standard_graph(StandardGraph::Cycle(1)).unwrap();
        let s = euler_poincare_coeffs(&c1, 6);
        assert_eq!(s[0], int(1));
        assert!(s[1..].iter().all(|c| c.is_zero()));
        // The interval: all coefficients 1.
        let i = standard_graph(StandardGraph::Interval).unwrap();
        assert!(euler_poincare_coeffs(&i, 6).iter().all(|c| *c == int(1)));
    }

    #[test]
    fn disjoint_union_convolves() {
        let a = standard_graph(StandardGraph::Star(3)).unwrap();
        let b = standard_graph(StandardGraph::Cycle(2)).unwrap();
        let u = a.disjoint_union(&b);
        for k in 0..=5 {
            let mut conv = Int::zero();
            for j in 0..=k {
                conv += euler_characteristic(&a, j) * euler_characteristic(&b, k - j);
            }
            assert_eq!(euler_characteristic(&u, k), conv);
        }
    }

    #[test]
    fn no_edges_degenerate() {
        // k points on m isolated points: C(m, k).
        let g = Graph::build(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(euler_characteristic(&g, 0), int(1));
        assert_eq!(euler_characteristic(&g, 2), int(3));
        assert_eq!(euler_characteristic(&g, 3), int(1));
        assert_eq!(euler_characteristic(&g, 4), int(0));
    }

    #[test]
    fn free_ranks() {
        assert_eq!(free_module_rank(3, &[2], 2), 1);
        assert_eq!(free_module_rank(6, &[6], 7), 6);
        assert_eq!(free_module_rank(5, &[0], 0), 1);
        assert_eq!(free_module_rank(0, &[2], 2), 1);
        assert_eq!(free_module_rank(0, &[2], 3), 0);
        assert_eq!(free_module_rank(3, &[2, 2], 2), 2);
    }
}
