use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{AdmissiblePair, Graph, MultiGraph, Vertex};
use crate::caps::Caps;
use crate::rng::RandomSource;
use crate::{Error, Result};

/// Small named graphs used as patterns and test subjects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedGraph {
    /// `K_k`
    Complete(usize),
    /// `C_k`, `k >= 3`
    Cycle(usize),
    /// `P_k` on `k` vertices
    Path(usize),
    /// `D_k`: a path on `k - 1` vertices with an extra leaf at its second-to-last vertex
    Fork(usize),
    /// `K_{a,b}`
    CompleteBipartite(usize, usize),
    /// `k` isolated vertices
    Empty(usize),
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NamedGraph::Complete(k) => write!(f, "K{k}"),
            NamedGraph::Cycle(k) => write!(f, "C{k}"),
            NamedGraph::Path(k) => write!(f, "P{k}"),
            NamedGraph::Fork(k) => write!(f, "D{k}"),
            NamedGraph::CompleteBipartite(a, b) => write!(f, "K{a},{b}"),
            NamedGraph::Empty(k) => write!(f, "E{k}"),
        }
    }
}

impl FromStr for NamedGraph {
    type Err = Error;

    /// Accepts `K4`, `C5`, `P3`, `D4`, `E2` and `K3,3` (also `K3x3`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown graph name `{s}`"));
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rest = chars.as_str();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match head {
            'K' => match rest.split_once([',', 'x']) {
                Some((a, b)) => Ok(NamedGraph::CompleteBipartite(num(a)?, num(b)?)),
                None => Ok(NamedGraph::Complete(num(rest)?)),
            },
            'C' => Ok(NamedGraph::Cycle(num(rest)?)),
            'P' => Ok(NamedGraph::Path(num(rest)?)),
            'D' => Ok(NamedGraph::Fork(num(rest)?)),
            'E' => Ok(NamedGraph::Empty(num(rest)?)),
            _ => Err(bad()),
        }
    }
}

pub fn make_named(kind: NamedGraph) -> Result<Graph> {
    let too_small = |min: usize, k: usize| {
        Err(Error::invalid(format!(
            "{kind} needs size at least {min}, got {k}"
        )))
    };
    match kind {
        NamedGraph::Complete(k) => {
            if k < 1 {
                return too_small(1, k);
            }
            let adj = (0..k)
                .map(|v| (0..k).filter(|&w| w != v).collect())
                .collect();
            Ok(Graph::from_sorted_adjacency(adj))
        }
        NamedGraph::Cycle(k) => {
            if k < 3 {
                return too_small(3, k);
            }
            let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
            Graph::from_edges(k, &edges)
        }
        NamedGraph::Path(k) => {
            if k < 1 {
                return too_small(1, k);
            }
            let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
            Graph::from_edges(k, &edges)
        }
        NamedGraph::Fork(k) => {
            if k < 3 {
                return too_small(3, k);
            }
            let mut edges: Vec<_> = (1..k - 1).map(|i| (i - 1, i)).collect();
            // path 0..k-2, extra leaf k-1 hangs off vertex k-3
            edges.push((k - 3, k - 1));
            Graph::from_edges(k, &edges)
        }
        NamedGraph::CompleteBipartite(a, b) => {
            if a < 1 || b < 1 {
                return too_small(1, a.min(b));
            }
            let edges: Vec<_> = (0..a)
                .flat_map(|i| (0..b).map(move |j| (i, a + j)))
                .collect();
            Graph::from_edges(a + b, &edges)
        }
        NamedGraph::Empty(k) => {
            if k < 1 {
                return too_small(1, k);
            }
            Ok(Graph::empty(k))
        }
    }
}

/// The `d`-dimensional hypercube `Q_d` on `{0,1}^d`.
pub fn make_hypercube(d: usize) -> Result<Graph> {
    let cap = Caps::default().hypercube_dimension;
    if d > cap {
        return Err(Error::cap("hypercube dimension", d as u128, cap as u128));
    }
    let n = 1usize << d;
    let adj = (0..n)
        .map(|v| {
            let mut l: Vec<Vertex> = (0..d).map(|i| v ^ (1 << i)).collect();
            l.sort_unstable();
            l
        })
        .collect();
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Grid `{0..side}^dim` with edges between points at L1 distance one.
pub fn make_grid(dim: usize, side: usize) -> Result<Graph> {
    if dim < 1 || side < 1 {
        return Err(Error::invalid("grid needs positive dimension and side"));
    }
    let cap = Caps::default().max_vertices;
    let n = (side as u128)
        .checked_pow(dim as u32)
        .filter(|&n| n <= cap as u128)
        .ok_or_else(|| {
            Error::cap(
                "grid vertices",
                (side as u128).saturating_pow(dim as u32),
                cap as u128,
            )
        })? as usize;
    let mut adj = vec![Vec::with_capacity(2 * dim); n];
    for (v, list) in adj.iter_mut().enumerate() {
        let mut stride = 1;
        let mut rest = v;
        for _ in 0..dim {
            let coord = rest % side;
            if coord > 0 {
                list.push(v - stride);
            }
            if coord + 1 < side {
                list.push(v + stride);
            }
            rest /= side;
            stride *= side;
        }
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

pub(crate) fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Normalized representatives of the points of `PG(r, q)`: nonzero vectors of
/// length `r + 1` over `F_q` whose first nonzero coordinate is 1.
fn projective_points(q: u64, r: usize) -> Vec<Vec<u64>> {
    let len = r + 1;
    let mut out = Vec::new();
    for lead in 0..len {
        let free = len - lead - 1;
        let count = q.pow(free as u32);
        for code in 0..count {
            let mut v = vec![0; len];
            v[lead] = 1;
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = c % q;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

fn normalize(v: &mut [u64], q: u64) -> bool {
    let Some(lead) = v.iter().position(|&x| x != 0) else {
        return false;
    };
    let inv = mod_inverse(v[lead], q);
    for x in v.iter_mut() {
        *x = *x * inv % q;
    }
    true
}

fn mod_inverse(a: u64, q: u64) -> u64 {
    // q prime: a^(q-2)
    let mut result = 1u64;
    let mut base = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    result
}

/// Point–hyperplane incidence graph of `PG(r, q)` for prime `q`, paired with
/// its regular degree `d = (q^r - 1)/(q - 1)`. Points come first.
pub fn make_projective_incidence(q: u64, r: usize) -> Result<AdmissiblePair> {
    if !is_prime(q) {
        return Err(Error::invalid(format!("q = {q} is not prime")));
    }
    if r < 2 {
        return Err(Error::invalid("projective dimension r must be at least 2"));
    }
    let cap = Caps::default().max_vertices as u128;
    let points_u = (q as u128)
        .checked_pow(r as u32 + 1)
        .map(|p| (p - 1) / (q as u128 - 1))
        .unwrap_or(u128::MAX);
    if points_u.saturating_mul(2) > cap {
        return Err(Error::cap(
            "projective incidence vertices",
            points_u.saturating_mul(2),
            cap,
        ));
    }
    let points = projective_points(q, r);
    let n_pts = points.len();
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &x| acc * q + x);
    let index: HashMap<u64, usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (encode(p), i))
        .collect();
    let d = (q.pow(r as u32) - 1) / (q - 1);
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d as usize); 2 * n_pts];
    let len = r + 1;
    for (h, a) in points.iter().enumerate() {
        // a·x = 0; a is normalized so its leading coordinate is 1 and can be solved for.
        let pivot = a.iter().position(|&x| x != 0).expect("normalized");
        let free: Vec<usize> = (0..len).filter(|&i| i != pivot).collect();
        let total = q.pow(r as u32);
        let mut x = vec![0u64; len];
        for code in 1..total {
            let mut c = code;
            for &i in &free {
                x[i] = c % q;
                c /= q;
            }
            let s: u64 = free.iter().map(|&i| a[i] * x[i] % q).sum::<u64>() % q;
            x[pivot] = (q - s) % q;
            let mut y = x.clone();
            if !normalize(&mut y, q) {
                continue;
            }
            let p = index[&encode(&y)];
            adj[n_pts + h].push(p);
        }
        let list = &mut adj[n_pts + h];
        list.sort_unstable();
        list.dedup();
    }
    for h in 0..n_pts {
        let hv = n_pts + h;
        let pts = adj[hv].clone();
        for p in pts {
            adj[p].push(hv);
        }
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
    }
    let graph = Graph::from_sorted_adjacency(adj);
    debug_assert!(graph.is_regular(d as usize));
    AdmissiblePair::new(graph, d)
}

/// Configuration model on `n` vertices with `d` legs each.
///
/// Returns the multigraph from a uniform perfect matching of the legs and its
/// underlying simple graph. When `n * d` is odd the last leg of the last
/// vertex is left out.
pub fn configuration_model(
    n: usize,
    d: usize,
    rng: &mut RandomSource,
) -> Result<(MultiGraph, Graph)> {
    if n < 1 || d < 1 {
        return Err(Error::invalid(
            "configuration model needs n >= 1 and d >= 1",
        ));
    }
    let total = n
        .checked_mul(d)
        .filter(|&t| t <= Caps::default().max_vertices * 64)
        .ok_or_else(|| {
            Error::cap(
                "configuration model legs",
                (n as u128) * (d as u128),
                (Caps::default().max_vertices * 64) as u128,
            )
        })?;
    let mut legs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    if total % 2 == 1 {
        legs.pop();
    }
    rng.shuffle(&mut legs);
    let edges: Vec<_> = legs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    let multi = MultiGraph::new(n, edges);
    let simple = multi.simplify();
    Ok((multi, simple))
}

/// Erdős–Rényi graph `G(n, p)`.
pub fn erdos_renyi(n: usize, p: f64, rng: &mut RandomSource) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// One representative of every isomorphism class of graphs on `n <= 7`
/// vertices, ordered by edge count and then by canonical key.
pub fn small_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > 7 {
        return Err(Error::cap("small graph order", n as u128, 7u128));
    }
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut seen = std::collections::BTreeMap::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> = (0..pairs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let g = Graph::from_edges(n, &edges)?;
        let key = super::canonical_key(&g)?;
        seen.entry((edges.len(), key)).or_insert(g);
    }
    Ok(seen.into_values().collect())
}
