use crate::graph::Graph;
use crate::rng::RandomSource;

/// Erdős–Rényi graph used as random test input.
pub(crate) fn random_graph(n: usize, p: f64, rng: &mut RandomSource) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}
