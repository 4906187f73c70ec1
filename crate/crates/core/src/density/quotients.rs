//! Quotients of a pattern by partitions into independent sets.

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::graph::{canonical_key, CanonicalKey, Graph};
use crate::{Error, Result};

/// One isomorphism class of quotient together with the number of partitions producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub graph: Graph,
    pub multiplicity: usize,
}

/// All simple quotients of `f`, grouped by isomorphism class. Larger quotients
/// come first; `f` itself is always the first entry with multiplicity 1.
pub fn enumerate_quotients(f: &Graph) -> Result<Vec<Quotient>> {
    enumerate_quotients_capped(f, Caps::default().quotient_vertices)
}

pub fn enumerate_quotients_capped(f: &Graph, cap: usize) -> Result<Vec<Quotient>> {
    let n = f.vertex_count();
    if n == 0 {
        return Err(Error::EmptyPattern);
    }
    if n > cap {
        return Err(Error::cap(
            "quotient pattern vertices",
            n as u128,
            cap as u128,
        ));
    }
    let mut classes: BTreeMap<(std::cmp::Reverse<usize>, CanonicalKey), Quotient> = BTreeMap::new();
    let mut block = vec![0usize; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    partitions(f, 0, &mut block, &mut members, &mut |block, blocks| {
        let g = Graph::from_edges_lossy(blocks, f.edges().map(|(u, v)| (block[u], block[v])));
        let key = canonical_key(&g).expect("quotients are small");
        classes
            .entry((std::cmp::Reverse(blocks), key))
            .and_modify(|q| q.multiplicity += 1)
            .or_insert(Quotient {
                graph: g,
                multiplicity: 1,
            });
    });
    Ok(classes.into_values().collect())
}

/// Restricted-growth enumeration of partitions into independent blocks.
fn partitions(
    f: &Graph,
    v: usize,
    block: &mut Vec<usize>,
    members: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[usize], usize),
) {
    if v == f.vertex_count() {
        emit(block, members.len());
        return;
    }
    for b in 0..members.len() {
        if members[b].iter().any(|&u| f.has_edge(u, v)) {
            continue;
        }
        block[v] = b;
        members[b].push(v);
        partitions(f, v + 1, block, members, emit);
        members[b].pop();
    }
    block[v] = members.len();
    members.push(vec![v]);
    partitions(f, v + 1, block, members, emit);
    members.pop();
}
