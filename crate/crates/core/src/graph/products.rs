use super::{Graph, Vertex};
use crate::caps::Caps;
use crate::{Error, Result};

fn product_size(g: &Graph, h: &Graph) -> Result<usize> {
    let cap = Caps::default().max_vertices;
    let n = (g.vertex_count() as u128) * (h.vertex_count() as u128);
    if n > cap as u128 {
        return Err(Error::cap("product vertices", n, cap as u128));
    }
    Ok(n as usize)
}

/// Cartesian sum `G □ H`; vertex `(g, h)` is numbered `g * |V(H)| + h`.
pub fn cartesian_sum(g: &Graph, h: &Graph) -> Result<Graph> {
    let n = product_size(g, h)?;
    let nh = h.vertex_count();
    let mut adj: Vec<Vec<Vertex>> = Vec::with_capacity(n);
    for a in 0..g.vertex_count() {
        for b in 0..nh {
            let mut list: Vec<Vertex> = g
                .neighbors(a)
                .iter()
                .map(|&a2| a2 * nh + b)
                .chain(h.neighbors(b).iter().map(|&b2| a * nh + b2))
                .collect();
            list.sort_unstable();
            adj.push(list);
        }
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Categorical (tensor) product `G × H`; same vertex numbering as [`cartesian_sum`].
pub fn tensor_product(g: &Graph, h: &Graph) -> Result<Graph> {
    let n = product_size(g, h)?;
    let nh = h.vertex_count();
    let mut adj: Vec<Vec<Vertex>> = Vec::with_capacity(n);
    for a in 0..g.vertex_count() {
        for b in 0..nh {
            let mut list: Vec<Vertex> = g
                .neighbors(a)
                .iter()
                .flat_map(|&a2| h.neighbors(b).iter().map(move |&b2| a2 * nh + b2))
                .collect();
            list.sort_unstable();
            adj.push(list);
        }
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Disjoint union, parts numbered consecutively.
pub fn disjoint_union(parts: &[Graph]) -> Result<Graph> {
    let cap = Caps::default().max_vertices;
    let n: usize = parts.iter().map(Graph::vertex_count).sum();
    if n > cap {
        return Err(Error::cap("union vertices", n as u128, cap as u128));
    }
    let mut adj = Vec::with_capacity(n);
    let mut offset = 0;
    for p in parts {
        for v in 0..p.vertex_count() {
            adj.push(p.neighbors(v).iter().map(|&w| w + offset).collect());
        }
        offset += p.vertex_count();
    }
    Ok(Graph::from_sorted_adjacency(adj))
}
