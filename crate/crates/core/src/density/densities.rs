//! Normalized homomorphism densities of patterns in admissible pairs.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::hom::{hom_count, inj_count, rooted_hom_count, rooted_hom_counts};
use crate::graph::{AdmissiblePair, Graph, Vertex};
use crate::{Error, Result};

/// Exact count over exact normalizer, with the reduced ratio as a double.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityValue {
    pub count: BigUint,
    pub normalizer: BigUint,
}

impl DensityValue {
    pub fn new(count: BigUint, normalizer: BigUint) -> Self {
        DensityValue { count, normalizer }
    }

    pub fn one() -> Self {
        DensityValue::new(BigUint::one(), BigUint::one())
    }

    /// Reduced exact value. A zero normalizer only arises for zero counts and reads as 0.
    pub fn exact(&self) -> BigRational {
        if self.normalizer.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(
            BigInt::from(self.count.clone()),
            BigInt::from(self.normalizer.clone()),
        )
    }

    pub fn value(&self) -> f64 {
        self.exact().to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_one(&self) -> bool {
        self.count == self.normalizer && !self.count.is_zero()
    }

    /// `"num/den"` in lowest terms.
    pub fn fraction(&self) -> String {
        let r = self.exact();
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for DensityValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("exact", &self.fraction())?;
        m.serialize_entry("value", &self.value())?;
        m.end()
    }
}

fn validate(pair: &AdmissiblePair) -> Result<()> {
    AdmissiblePair::new(pair.graph.clone(), pair.d).map(|_| ())
}

fn pow(base: u64, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// `hom(F,G) / (v(G)^c(F) d^(v(F)-c(F)))`, multiplicative over components of `F`.
pub fn t(f: &Graph, pair: &AdmissiblePair) -> Result<DensityValue> {
    validate(pair)?;
    let count = hom_count(f, &pair.graph)?;
    let c = f.component_count();
    let normalizer = pow(pair.vertex_count() as u64, c) * pow(pair.d, f.vertex_count() - c);
    Ok(DensityValue::new(count, normalizer))
}

/// Injective density; each component on `k >= 2` vertices is normalized by
/// `v(G) d (d-1)^(k-2)` and each isolated vertex by `v(G)`.
pub fn t_inj(f: &Graph, pair: &AdmissiblePair) -> Result<DensityValue> {
    validate(pair)?;
    let c = f.component_count();
    let big = f.components().iter().filter(|comp| comp.len() >= 2).count();
    let rest = f.vertex_count() - c - big;
    if pair.d == 1 && rest > 0 {
        return Err(Error::invalid(
            "injective density with d = 1 needs components of at most two vertices",
        ));
    }
    let count = inj_count(f, &pair.graph)?;
    let normalizer = pow(pair.vertex_count() as u64, c) * pow(pair.d, big) * pow(pair.d - 1, rest);
    Ok(DensityValue::new(count, normalizer))
}

/// `hom((F,o),(G,p)) / d^(v(F)-1)`.
pub fn t_rooted(f: &Graph, o: Vertex, pair: &AdmissiblePair, p: Vertex) -> Result<DensityValue> {
    validate(pair)?;
    let count = rooted_hom_count(f, o, &pair.graph, p)?;
    Ok(DensityValue::new(count, pow(pair.d, f.vertex_count() - 1)))
}

/// Rooted densities at every vertex of `G`.
pub fn t_rooted_all(f: &Graph, o: Vertex, pair: &AdmissiblePair) -> Result<Vec<DensityValue>> {
    validate(pair)?;
    let normalizer = pow(pair.d, f.vertex_count() - 1);
    Ok(rooted_hom_counts(f, o, &pair.graph)?
        .into_iter()
        .map(|c| DensityValue::new(c, normalizer.clone()))
        .collect())
}

/// Exact `t - t_inj` for a connected pattern.
pub fn hom_vs_inj_gap(f: &Graph, pair: &AdmissiblePair) -> Result<BigRational> {
    if !f.is_connected() {
        return Err(Error::DisconnectedPattern);
    }
    Ok(t(f, pair)?.exact() - t_inj(f, pair)?.exact())
}

/// Constant `C_F` with `|t - t_inj| <= C_F / d` for connected `F`.
///
/// Writing `hom = inj + sum of inj over proper quotients`, each proper
/// quotient contributes at most `1/d` to `t`, and replacing `d^(k-1)` by
/// `d (d-1)^(k-2)` changes the injective term by at most `(k-2)/d`. The two
/// contributions have opposite signs, so the larger one bounds the gap.
pub fn gap_constant(f: &Graph) -> Result<u64> {
    let proper = super::quotients::enumerate_quotients(f)?
        .iter()
        .map(|q| q.multiplicity as u64)
        .sum::<u64>()
        - 1;
    Ok(proper.max(f.vertex_count().saturating_sub(2) as u64))
}

/// `t(F, tensor product of factors, product of d)` against the product of the
/// factor densities.
pub fn product_density_check(
    f: &Graph,
    factors: &[AdmissiblePair],
) -> Result<(BigRational, BigRational)> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::invalid("product needs at least one factor"))?;
    let mut graph = first.graph.clone();
    let mut d = first.d;
    let mut rhs = t(f, first)?.exact();
    for factor in rest {
        graph = crate::graph::tensor_product(&graph, &factor.graph)?;
        d = d
            .checked_mul(factor.d)
            .ok_or_else(|| Error::invalid("product degree bound overflows"))?;
        rhs *= t(f, factor)?.exact();
    }
    let lhs = t(f, &AdmissiblePair::new(graph, d)?)?.exact();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_hypercube, make_named, NamedGraph};
    use crate::rng::RandomSource;
    use crate::test_support::random_graph;
    use num_traits::Signed;

    fn named(kind: NamedGraph) -> Graph {
        make_named(kind).unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn pair(g: Graph, d: u64) -> AdmissiblePair {
        AdmissiblePair::new(g, d).unwrap()
    }

    #[test]
    fn t_examples() {
        let k4 = pair(named(NamedGraph::Complete(4)), 3);
        let k2 = named(NamedGraph::Complete(2));
        let c3 = named(NamedGraph::Cycle(3));
        let c4 = named(NamedGraph::Cycle(4));
        assert_eq!(t(&k2, &k4).unwrap().exact(), ratio(12, 12));
        let c5 = pair(named(NamedGraph::Cycle(5)), 4);
        assert_eq!(t(&k2, &c5).unwrap().exact(), ratio(10, 20));
        assert!(t(&c4, &pair(named(NamedGraph::CompleteBipartite(3, 3)), 3))
            .unwrap()
            .is_one());
        assert_eq!(t(&c3, &k4).unwrap().exact(), ratio(2, 3));
        assert_eq!(t(&c3, &k4).unwrap().fraction(), "2/3");
    }

    #[test]
    fn t_inj_examples() {
        let k4 = pair(named(NamedGraph::Complete(4)), 3);
        assert!(t_inj(&Graph::empty(1), &k4).unwrap().is_one());
        let c5 = pair(named(NamedGraph::Cycle(5)), 4);
        let k2 = named(NamedGraph::Complete(2));
        assert_eq!(
            t_inj(&k2, &c5).unwrap().exact(),
            t(&k2, &c5).unwrap().exact()
        );
        assert!(t_inj(&named(NamedGraph::Cycle(3)), &k4).unwrap().is_one());
        let matching = pair(Graph::from_edges(2, &[(0, 1)]).unwrap(), 1);
        assert!(t_inj(&k2, &matching).unwrap().is_one());
        assert!(t_inj(&named(NamedGraph::Path(3)), &matching).is_err());
    }

    #[test]
    fn rooted_examples() {
        let q3 = pair(make_hypercube(3).unwrap(), 3);
        let k2 = named(NamedGraph::Complete(2));
        assert!(t_rooted(&k2, 0, &q3, 4).unwrap().is_one());
        let c4 = pair(named(NamedGraph::Cycle(4)), 2);
        let p3 = named(NamedGraph::Path(3));
        for p in 0..4 {
            assert!(t_rooted(&p3, 0, &c4, p).unwrap().is_one());
        }
    }

    #[test]
    fn rooted_mean_is_unrooted_density() {
        let mut rng = RandomSource::new(5);
        let cases = [
            (
                named(NamedGraph::Path(3)),
                pair(make_hypercube(3).unwrap(), 3),
            ),
            (
                named(NamedGraph::Cycle(4)),
                pair(named(NamedGraph::Complete(5)), 6),
            ),
            (
                named(NamedGraph::Fork(5)),
                pair(random_graph(9, 0.4, &mut rng), 8),
            ),
        ];
        for (f, pr) in &cases {
            for o in 0..f.vertex_count() {
                let all = t_rooted_all(f, o, pr).unwrap();
                let sum: BigRational = all.iter().map(|v| v.exact()).sum();
                let mean = sum / BigRational::from_integer((pr.vertex_count() as i64).into());
                assert_eq!(mean, t(f, pr).unwrap().exact());
            }
        }
    }

    #[test]
    fn gap_examples() {
        let k2 = named(NamedGraph::Complete(2));
        let q4 = pair(make_hypercube(4).unwrap(), 4);
        assert!(hom_vs_inj_gap(&k2, &q4).unwrap().is_zero());
        assert!(hom_vs_inj_gap(&Graph::empty(1), &q4).unwrap().is_zero());
        let p3 = named(NamedGraph::Path(3));
        assert_eq!(gap_constant(&p3).unwrap(), 1);
        for d in 6..=10 {
            let qd = pair(make_hypercube(d).unwrap(), d as u64);
            let gap = hom_vs_inj_gap(&p3, &qd).unwrap();
            assert!(gap.clone().abs() <= ratio(2, d as i64));
            assert!(gap.abs() <= ratio(gap_constant(&p3).unwrap() as i64, d as i64));
        }
    }

    #[test]
    fn products() {
        let c3 = named(NamedGraph::Cycle(3));
        let k3 = pair(named(NamedGraph::Complete(3)), 2);
        let (lhs, rhs) = product_density_check(&c3, &[k3.clone(), k3.clone()]).unwrap();
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = product_density_check(&c3, &[k3]).unwrap();
        assert_eq!(lhs, rhs);
        let k2 = pair(named(NamedGraph::Complete(2)), 1);
        let (lhs, rhs) =
            product_density_check(&named(NamedGraph::Complete(2)), &[k2.clone(), k2]).unwrap();
        assert!(lhs.is_one() && rhs.is_one());
    }

    fn random_connected(n: usize, extra: usize, rng: &mut RandomSource) -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.index(v), v)).collect();
        for _ in 0..extra {
            let (u, v) = (rng.index(n), rng.index(n));
            if u != v
                && !edges.contains(&(u.min(v), u.max(v)))
                && !edges.contains(&(u.max(v), u.min(v)))
            {
                edges.push((u.min(v), u.max(v)));
            }
        }
        Graph::from_edges_lossy(n, edges)
    }

    /// A connected proper subgraph: drop a non-bridge edge or a leaf.
    fn connected_subgraph(f: &Graph, rng: &mut RandomSource) -> Option<Graph> {
        let edges: Vec<_> = f.edges().collect();
        for _ in 0..20 {
            let (u, v) = edges[rng.index(edges.len())];
            let h = f.without_edge(u, v);
            if h.is_connected() {
                return Some(h);
            }
            if f.degree(v) == 1 && f.vertex_count() > 1 {
                return Some(f.without_vertices(&[v]));
            }
            if f.degree(u) == 1 && f.vertex_count() > 1 {
                return Some(f.without_vertices(&[u]));
            }
        }
        None
    }

    #[test]
    fn densities_are_monotone_under_subgraphs() {
        let mut rng = RandomSource::new(99);
        let mut checked = 0;
        while checked < 150 {
            let f = random_connected(2 + rng.index(5), rng.index(3), &mut rng);
            let Some(sub) = connected_subgraph(&f, &mut rng) else {
                continue;
            };
            let g = random_graph(4 + rng.index(9), 0.2 + 0.6 * rng.unit(), &mut rng);
            let d = g.max_degree() as u64 + rng.index(3) as u64;
            if d < 2 {
                continue;
            }
            let pr = pair(g, d);
            assert!(t(&f, &pr).unwrap().exact() <= t(&sub, &pr).unwrap().exact());
            assert!(t_inj(&f, &pr).unwrap().exact() <= t_inj(&sub, &pr).unwrap().exact());
            assert!(t(&f, &pr).unwrap().value() <= 1.0);
            assert!(t_inj(&f, &pr).unwrap().value() <= 1.0);
            checked += 1;
        }
    }

    /// Graphs obtained from `a + b` by identifying a nonempty partial matching
    /// between the vertices of `a` and of `b`, with the number of identified pairs.
    fn gluings(a: &Graph, b: &Graph) -> Vec<(Graph, usize)> {
        let mut out = Vec::new();
        let mut target = vec![usize::MAX; a.vertex_count()];
        fn rec(
            i: usize,
            a: &Graph,
            b: &Graph,
            target: &mut Vec<usize>,
            taken: &mut Vec<bool>,
            out: &mut Vec<(Graph, usize)>,
        ) {
            let (na, nb) = (a.vertex_count(), b.vertex_count());
            if i == na {
                let merged = target.iter().filter(|&&t| t != usize::MAX).count();
                if merged == 0 {
                    return;
                }
                let mut label = vec![0; na];
                let mut next = nb;
                for v in 0..na {
                    label[v] = if target[v] == usize::MAX {
                        next += 1;
                        next - 1
                    } else {
                        target[v]
                    };
                }
                let edges = b
                    .edges()
                    .chain(a.edges().map(|(u, v)| (label[u], label[v])));
                out.push((Graph::from_edges_lossy(next, edges), merged));
                return;
            }
            rec(i + 1, a, b, target, taken, out);
            for w in 0..nb {
                if !taken[w] {
                    taken[w] = true;
                    target[i] = w;
                    rec(i + 1, a, b, target, taken, out);
                    target[i] = usize::MAX;
                    taken[w] = false;
                }
            }
        }
        rec(
            0,
            a,
            b,
            &mut target,
            &mut vec![false; b.vertex_count()],
            &mut out,
        );
        out
    }

    #[test]
    fn componentwise_injective_bound() {
        let mut rng = RandomSource::new(19);
        let parts = [
            named(NamedGraph::Complete(2)),
            named(NamedGraph::Path(3)),
            named(NamedGraph::Cycle(3)),
            named(NamedGraph::Cycle(4)),
        ];
        for trial in 0..24 {
            let a = &parts[trial % 4];
            let b = &parts[(trial / 4) % 4];
            let f = crate::graph::disjoint_union(&[a.clone(), b.clone()]).unwrap();
            let g = random_graph(10 + trial % 3, 0.45, &mut rng);
            let pr = pair(g.clone(), g.max_degree().max(2) as u64);
            let product = t_inj(a, &pr).unwrap().exact() * t_inj(b, &pr).unwrap().exact();
            let diff = product - t_inj(&f, &pr).unwrap().exact();
            assert!(!diff.is_negative());
            // the overlap of two embeddings is exactly a gluing of the two parts
            let glued = gluings(a, b);
            let overlap: BigUint = glued.iter().map(|(h, _)| inj_count(h, &g).unwrap()).sum();
            let inj_a = inj_count(a, &g).unwrap();
            let inj_b = inj_count(b, &g).unwrap();
            assert_eq!(inj_a * inj_b, inj_count(&f, &g).unwrap() + overlap);
            // one-merge terms are each below 1/v(G), as are the remaining ones
            let one_merges = glued.iter().filter(|(_, m)| *m == 1).count();
            let rest = glued.len() - one_merges;
            let v = pr.vertex_count() as i64;
            assert!(diff <= ratio(one_merges as i64 + rest as i64, v));
        }
    }
}
