//! Exact homomorphism counts.
//!
//! Connected patterns are counted by backtracking along an ordering in which
//! every vertex after the first has an earlier neighbour; candidates for a
//! vertex are the common neighbours of the images of its earlier neighbours.
//! The last vertex is never enumerated, only counted. Trees use a dynamic
//! program over leaf elimination instead.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

fn check_pattern(f: &Graph, cap: usize) -> Result<()> {
    if f.vertex_count() == 0 {
        return Err(Error::EmptyPattern);
    }
    if f.vertex_count() > cap {
        return Err(Error::cap(
            "pattern vertices",
            f.vertex_count() as u128,
            cap as u128,
        ));
    }
    Ok(())
}

/// Order with maximum back-degree first; `back[i]` lists positions of earlier
/// neighbours of `order[i]`.
struct Plan {
    order: Vec<Vertex>,
    back: Vec<Vec<usize>>,
}

impl Plan {
    fn new(f: &Graph, start: Option<Vertex>) -> Plan {
        let n = f.vertex_count();
        let mut placed = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let first = start.unwrap_or_else(|| {
            (0..n)
                .max_by_key(|&v| (f.degree(v), std::cmp::Reverse(v)))
                .unwrap_or(0)
        });
        placed[first] = 0;
        order.push(first);
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| placed[v] == usize::MAX)
                .max_by_key(|&v| {
                    let back = f
                        .neighbors(v)
                        .iter()
                        .filter(|&&w| placed[w] != usize::MAX)
                        .count();
                    (back, f.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex exists");
            placed[next] = order.len();
            order.push(next);
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut b: Vec<usize> = f
                    .neighbors(v)
                    .iter()
                    .map(|&w| placed[w])
                    .filter(|&j| j < i)
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        Plan { order, back }
    }
}

struct Search<'a> {
    plan: &'a Plan,
    g: &'a Graph,
    injective: bool,
    images: Vec<Vertex>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn candidates(&self, depth: usize, mut visit: impl FnMut(Vertex)) {
        let back = &self.plan.back[depth];
        if back.is_empty() {
            for x in 0..self.g.vertex_count() {
                if !(self.injective && self.used[x]) {
                    visit(x);
                }
            }
            return;
        }
        let pivot = *back
            .iter()
            .min_by_key(|&&j| self.g.degree(self.images[j]))
            .expect("nonempty back list");
        let anchor = self.images[pivot];
        'cand: for &x in self.g.neighbors(anchor) {
            if self.injective && self.used[x] {
                continue;
            }
            for &j in back {
                if j != pivot && !self.g.has_edge(self.images[j], x) {
                    continue 'cand;
                }
            }
            visit(x);
        }
    }

    fn count(&mut self, depth: usize) -> Option<u128> {
        let last = depth + 1 == self.plan.order.len();
        if last {
            let mut c = 0u128;
            self.candidates(depth, |_| c += 1);
            return Some(c);
        }
        let mut list = Vec::new();
        self.candidates(depth, |x| list.push(x));
        let mut total = 0u128;
        for x in list {
            self.images[depth] = x;
            self.used[x] = true;
            let sub = self.count(depth + 1);
            self.used[x] = false;
            total = total.checked_add(sub?)?;
        }
        Some(total)
    }
}

/// Sum over the images of the first vertex in `roots`, in parallel.
fn count_with_plan(plan: &Plan, g: &Graph, injective: bool, roots: &[Vertex]) -> Result<BigUint> {
    let n = plan.order.len();
    let parts: Vec<Option<u128>> = roots
        .par_iter()
        .map(|&x| {
            if n == 1 {
                return Some(1);
            }
            let mut s = Search {
                plan,
                g,
                injective,
                images: vec![0; n],
                used: vec![false; g.vertex_count()],
            };
            s.images[0] = x;
            s.used[x] = true;
            s.count(1)
        })
        .collect();
    let mut total = BigUint::from(0u32);
    for p in parts {
        total += p.ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Per-vertex rooted counts for a tree rooted at `o`: entry `x` is the number
/// of homomorphisms sending `o` to `x`.
fn tree_rooted_counts(f: &Graph, o: Vertex, g: &Graph) -> Result<Vec<u128>> {
    let n = f.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![o];
    parent[o] = o;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in f.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    let gn = g.vertex_count();
    let mut value: Vec<Option<Vec<u128>>> = vec![None; n];
    for &v in order.iter().rev() {
        let mut acc = vec![1u128; gn];
        for &c in f.neighbors(v) {
            if parent[c] != v {
                continue;
            }
            let child = value[c].take().expect("children processed first");
            for (x, a) in acc.iter_mut().enumerate() {
                if *a == 0 {
                    continue;
                }
                let mut s = 0u128;
                for &y in g.neighbors(x) {
                    s = s.checked_add(child[y]).ok_or(Error::Overflow)?;
                }
                *a = a.checked_mul(s).ok_or(Error::Overflow)?;
            }
        }
        value[v] = Some(acc);
    }
    Ok(value[o].take().expect("root value"))
}

fn connected_hom(f: &Graph, g: &Graph) -> Result<BigUint> {
    if f.vertex_count() == 1 {
        return Ok(BigUint::from(g.vertex_count()));
    }
    if f.is_tree() {
        let counts = tree_rooted_counts(f, 0, g)?;
        return Ok(counts.into_iter().map(BigUint::from).sum());
    }
    let plan = Plan::new(f, None);
    let roots: Vec<Vertex> = (0..g.vertex_count()).collect();
    count_with_plan(&plan, g, false, &roots)
}

/// Number of homomorphisms from `f` to `g`.
pub fn hom_count(f: &Graph, g: &Graph) -> Result<BigUint> {
    hom_count_capped(f, g, Caps::default().pattern_vertices)
}

pub fn hom_count_capped(f: &Graph, g: &Graph, cap: usize) -> Result<BigUint> {
    check_pattern(f, cap)?;
    let mut total = BigUint::from(1u32);
    for comp in f.components() {
        total *= connected_hom(&f.induced(&comp), g)?;
        if total == BigUint::from(0u32) {
            break;
        }
    }
    Ok(total)
}

/// Homomorphism count by backtracking only, without the forest fast path.
pub fn hom_count_backtracking(f: &Graph, g: &Graph) -> Result<BigUint> {
    check_pattern(f, Caps::default().pattern_vertices)?;
    let plan = Plan::new(f, None);
    let roots: Vec<Vertex> = (0..g.vertex_count()).collect();
    count_with_plan(&plan, g, false, &roots)
}

/// Number of injective homomorphisms from `f` to `g`.
pub fn inj_count(f: &Graph, g: &Graph) -> Result<BigUint> {
    inj_count_capped(f, g, Caps::default().pattern_vertices)
}

pub fn inj_count_capped(f: &Graph, g: &Graph, cap: usize) -> Result<BigUint> {
    check_pattern(f, cap)?;
    if f.vertex_count() > g.vertex_count() {
        return Ok(BigUint::from(0u32));
    }
    let plan = Plan::new(f, None);
    let roots: Vec<Vertex> = (0..g.vertex_count()).collect();
    count_with_plan(&plan, g, true, &roots)
}

/// Homomorphisms of the connected pattern `f` sending `o` to `p`.
pub fn rooted_hom_count(f: &Graph, o: Vertex, g: &Graph, p: Vertex) -> Result<BigUint> {
    check_rooted(f, o, g, Some(p))?;
    if f.is_tree() {
        return Ok(BigUint::from(tree_rooted_counts(f, o, g)?[p]));
    }
    let plan = Plan::new(f, Some(o));
    count_with_plan(&plan, g, false, &[p])
}

/// Rooted counts for every image `p` of the root, indexed by `p`.
pub fn rooted_hom_counts(f: &Graph, o: Vertex, g: &Graph) -> Result<Vec<BigUint>> {
    check_rooted(f, o, g, None)?;
    if f.is_tree() {
        return Ok(tree_rooted_counts(f, o, g)?
            .into_iter()
            .map(BigUint::from)
            .collect());
    }
    let plan = Plan::new(f, Some(o));
    (0..g.vertex_count())
        .into_par_iter()
        .map(|p| count_with_plan(&plan, g, false, &[p]))
        .collect()
}

fn check_rooted(f: &Graph, o: Vertex, g: &Graph, p: Option<Vertex>) -> Result<()> {
    check_pattern(f, Caps::default().pattern_vertices)?;
    if !f.is_connected() {
        return Err(Error::DisconnectedPattern);
    }
    if o >= f.vertex_count() {
        return Err(Error::invalid(format!("root {o} outside pattern")));
    }
    if let Some(p) = p {
        if p >= g.vertex_count() {
            return Err(Error::invalid(format!("target vertex {p} outside graph")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_hypercube, make_named, NamedGraph};
    use crate::rng::RandomSource;
    use crate::test_support::random_graph;
    use proptest::prelude::*;

    fn named(kind: NamedGraph) -> Graph {
        make_named(kind).unwrap()
    }

    fn brute(f: &Graph, g: &Graph, injective: bool) -> u64 {
        let k = f.vertex_count();
        let n = g.vertex_count();
        let mut map = vec![0usize; k];
        let mut count = 0;
        loop {
            let ok = f.edges().all(|(a, b)| g.has_edge(map[a], map[b]))
                && (!injective || (0..k).all(|i| (0..i).all(|j| map[i] != map[j])));
            if ok {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == k {
                    return count;
                }
                map[i] += 1;
                if map[i] < n {
                    break;
                }
                map[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn examples() {
        let k4 = named(NamedGraph::Complete(4));
        let c3 = named(NamedGraph::Cycle(3));
        let k2 = named(NamedGraph::Complete(2));
        let q3 = make_hypercube(3).unwrap();
        assert_eq!(hom_count(&k2, &q3).unwrap(), BigUint::from(24u32));
        assert_eq!(inj_count(&k2, &q3).unwrap(), BigUint::from(24u32));
        assert_eq!(hom_count(&c3, &k4).unwrap(), BigUint::from(24u32));
        assert_eq!(inj_count(&c3, &k4).unwrap(), BigUint::from(24u32));
        let c4 = named(NamedGraph::Cycle(4));
        let k33 = named(NamedGraph::CompleteBipartite(3, 3));
        assert_eq!(hom_count(&c4, &k33).unwrap(), BigUint::from(162u32));
        let p3 = named(NamedGraph::Path(3));
        assert_eq!(inj_count(&p3, &p3).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn rooted_examples() {
        let k2 = named(NamedGraph::Complete(2));
        let p3 = named(NamedGraph::Path(3));
        let c4 = named(NamedGraph::Cycle(4));
        let c5 = named(NamedGraph::Cycle(5));
        let c3 = named(NamedGraph::Cycle(3));
        let q3 = make_hypercube(3).unwrap();
        assert_eq!(
            rooted_hom_count(&k2, 0, &q3, 5).unwrap(),
            BigUint::from(3u32)
        );
        for p in 0..4 {
            assert_eq!(
                rooted_hom_count(&p3, 1, &c4, p).unwrap(),
                BigUint::from(4u32)
            );
            assert_eq!(
                rooted_hom_count(&p3, 0, &c4, p).unwrap(),
                BigUint::from(4u32)
            );
        }
        let total: BigUint = rooted_hom_counts(&c3, 0, &c5).unwrap().into_iter().sum();
        assert_eq!(total, BigUint::from(0u32));
        let bad = Graph::empty(2);
        assert_eq!(
            rooted_hom_count(&bad, 0, &c5, 0),
            Err(Error::DisconnectedPattern)
        );
    }

    #[test]
    fn rooted_counts_sum_to_hom() {
        let mut rng = RandomSource::new(3);
        for trial in 0..20 {
            let g = random_graph(9, 0.4, &mut rng);
            let f = if trial % 2 == 0 {
                named(NamedGraph::Cycle(4))
            } else {
                named(NamedGraph::Fork(5))
            };
            for o in 0..f.vertex_count() {
                let total: BigUint = rooted_hom_counts(&f, o, &g).unwrap().into_iter().sum();
                assert_eq!(total, hom_count(&f, &g).unwrap());
            }
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = RandomSource::new(11);
        let patterns = [
            named(NamedGraph::Cycle(3)),
            named(NamedGraph::Cycle(4)),
            named(NamedGraph::Path(4)),
            named(NamedGraph::Fork(4)),
            named(NamedGraph::Complete(4)),
            Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap(),
            Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap(),
            Graph::empty(2),
        ];
        for _ in 0..10 {
            let g = random_graph(6, 0.5, &mut rng);
            for f in &patterns {
                assert_eq!(
                    hom_count(f, &g).unwrap(),
                    BigUint::from(brute(f, &g, false))
                );
                assert_eq!(inj_count(f, &g).unwrap(), BigUint::from(brute(f, &g, true)));
            }
        }
    }

    #[test]
    fn tensor_product_multiplies_counts() {
        let c3 = named(NamedGraph::Cycle(3));
        let k3 = named(NamedGraph::Complete(3));
        let prod = crate::graph::tensor_product(&k3, &k3).unwrap();
        let single = hom_count(&c3, &k3).unwrap();
        assert_eq!(hom_count(&c3, &prod).unwrap(), &single * &single);
    }

    #[test]
    fn caps_and_empty_patterns() {
        let g = named(NamedGraph::Cycle(5));
        assert_eq!(hom_count(&Graph::empty(0), &g), Err(Error::EmptyPattern));
        assert!(matches!(
            hom_count(&Graph::empty(11), &g),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(
            hom_count(&Graph::empty(3), &g).unwrap(),
            BigUint::from(125u32)
        );
    }

    fn random_forest(n: usize, rng: &mut RandomSource) -> Graph {
        let mut edges = Vec::new();
        for v in 1..n {
            if rng.bernoulli(0.8) {
                edges.push((rng.index(v), v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn forest_fast_path_matches_backtracking() {
        let mut rng = RandomSource::new(2024);
        for i in 0..200 {
            let f = random_forest(2 + i % 6, &mut rng);
            let g = random_graph(5 + i % 8, 0.35, &mut rng);
            assert_eq!(
                hom_count(&f, &g).unwrap(),
                hom_count_backtracking(&f, &g).unwrap()
            );
        }
    }

    proptest! {
        #[test]
        fn relabeling_preserves_counts(seed in any::<u64>()) {
            let mut rng = RandomSource::new(seed);
            let g = random_graph(7, 0.5, &mut rng);
            let f = named(NamedGraph::Cycle(4));
            let mut perm: Vec<usize> = (0..7).collect();
            rng.shuffle(&mut perm);
            prop_assert_eq!(hom_count(&f, &g).unwrap(), hom_count(&f, &g.permuted(&perm)).unwrap());
            prop_assert_eq!(inj_count(&f, &g).unwrap(), inj_count(&f, &g.permuted(&perm)).unwrap());
        }
    }
}
