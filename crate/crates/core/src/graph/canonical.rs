//! Canonical labeling by equitable refinement plus individualization search.
//!
//! Each connected component is canonized separately and the component
//! certificates are sorted, so disjoint copies do not multiply the search.
//! Within a component, twin vertices (same neighborhood apart from each
//! other) are interchangeable and only one of them is individualized.

use super::{Graph, Vertex};
use crate::caps::Caps;
use crate::{Error, Result};

/// Byte string identifying an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u8>);

pub fn canonical_key(g: &Graph) -> Result<CanonicalKey> {
    canonical_key_with_cap(g, Caps::default().canonical_vertices)
}

pub fn canonical_key_with_cap(g: &Graph, cap: usize) -> Result<CanonicalKey> {
    let n = g.vertex_count();
    if n > cap.min(64) {
        return Err(Error::cap(
            "canonical key vertices",
            n as u128,
            cap.min(64) as u128,
        ));
    }
    let mut certs: Vec<Vec<u64>> = g
        .components()
        .into_iter()
        .map(|comp| {
            let sub = g.induced(&comp);
            component_certificate(&sub)
        })
        .collect();
    certs.sort();
    let mut bytes = Vec::with_capacity(8 * n + 8 * certs.len());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for c in &certs {
        bytes.extend_from_slice(&(c.len() as u32).to_le_bytes());
        for row in c {
            bytes.extend_from_slice(&row.to_le_bytes());
        }
    }
    Ok(CanonicalKey(bytes))
}

/// Lexicographically least adjacency-row certificate over the search tree.
fn component_certificate(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let masks: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1u64 << w)))
        .collect();
    let mut partition = vec![(0..n).collect::<Vec<Vertex>>()];
    refine(&masks, &mut partition);
    let mut best: Option<Vec<u64>> = None;
    search(&masks, partition, &mut best);
    best.expect("search visits at least one leaf")
}

fn refine(masks: &[u64], partition: &mut Vec<Vec<Vertex>>) {
    'outer: loop {
        for s in 0..partition.len() {
            let splitter: u64 = partition[s].iter().fold(0u64, |m, &v| m | (1u64 << v));
            for c in 0..partition.len() {
                if partition[c].len() < 2 {
                    continue;
                }
                let count = |v: &Vertex| (masks[*v] & splitter).count_ones();
                let first = count(&partition[c][0]);
                if partition[c].iter().all(|v| count(v) == first) {
                    continue;
                }
                let mut cell = std::mem::take(&mut partition[c]);
                cell.sort_by_key(|v| (count(v), *v));
                let mut pieces: Vec<Vec<Vertex>> = Vec::new();
                let mut last = None;
                for v in cell {
                    let k = count(&v);
                    if last != Some(k) {
                        pieces.push(Vec::new());
                        last = Some(k);
                    }
                    pieces.last_mut().expect("pushed").push(v);
                }
                partition.splice(c..=c, pieces);
                continue 'outer;
            }
        }
        break;
    }
}

fn certificate(masks: &[u64], partition: &[Vec<Vertex>]) -> Vec<u64> {
    let n = masks.len();
    let mut pos = vec![0usize; n];
    for (i, cell) in partition.iter().enumerate() {
        pos[cell[0]] = i;
    }
    let mut order = vec![0usize; n];
    for (v, &p) in pos.iter().enumerate() {
        order[p] = v;
    }
    order
        .iter()
        .map(|&v| {
            let mut row = 0u64;
            let mut m = masks[v];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                row |= 1u64 << pos[w];
                m &= m - 1;
            }
            row
        })
        .collect()
}

fn search(masks: &[u64], partition: Vec<Vec<Vertex>>, best: &mut Option<Vec<u64>>) {
    let target = partition
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i);
    let Some(t) = target else {
        let cert = certificate(masks, &partition);
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    };
    let mut tried: Vec<Vertex> = Vec::new();
    for &v in &partition[t] {
        let twin = tried.iter().any(|&u| {
            let bu = 1u64 << u;
            let bv = 1u64 << v;
            masks[u] & !bv == masks[v] & !bu
        });
        if twin {
            continue;
        }
        tried.push(v);
        let mut next = partition.clone();
        let rest: Vec<Vertex> = next[t].iter().copied().filter(|&w| w != v).collect();
        next.splice(t..=t, [vec![v], rest]);
        refine(masks, &mut next);
        search(masks, next, best);
    }
}
