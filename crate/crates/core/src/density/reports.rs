//! Tables over sequences of admissible pairs.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};

use super::densities::{t, t_inj, DensityValue};
use crate::graph::{make_named, AdmissiblePair, Graph, NamedGraph, Vertex};
use crate::{Error, Result};

/// A pattern with a display name and an optional root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub graph: Graph,
    pub root: Option<Vertex>,
}

impl Pattern {
    pub fn new(name: impl Into<String>, graph: Graph) -> Self {
        Pattern {
            name: name.into(),
            graph,
            root: None,
        }
    }

    pub fn rooted(mut self, root: Vertex) -> Result<Self> {
        if !self.graph.is_connected() {
            return Err(Error::DisconnectedPattern);
        }
        if root >= self.graph.vertex_count() {
            return Err(Error::invalid(format!(
                "root {root} outside pattern {}",
                self.name
            )));
        }
        self.root = Some(root);
        Ok(self)
    }

    /// Parses a named graph such as `C4` or `K3,3`.
    pub fn named(name: &str) -> Result<Self> {
        let kind: NamedGraph = name.parse()?;
        Ok(Pattern::new(kind.to_string(), make_named(kind)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Hom,
    Injective,
}

/// Densities of several patterns along a sequence of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceTable {
    pub kind: DensityKind,
    pub labels: Vec<String>,
    pub patterns: Vec<String>,
    pub cells: Vec<Vec<DensityValue>>,
}

impl ConvergenceTable {
    pub fn build(
        kind: DensityKind,
        seq: &[(String, AdmissiblePair)],
        patterns: &[Pattern],
    ) -> Result<Self> {
        let mut cells = Vec::with_capacity(seq.len());
        for (_, pair) in seq {
            let row = patterns
                .iter()
                .map(|p| match kind {
                    DensityKind::Hom => t(&p.graph, pair),
                    DensityKind::Injective => t_inj(&p.graph, pair),
                })
                .collect::<Result<Vec<_>>>()?;
            cells.push(row);
        }
        Ok(ConvergenceTable {
            kind,
            labels: seq.iter().map(|(l, _)| l.clone()).collect(),
            patterns: patterns.iter().map(|p| p.name.clone()).collect(),
            cells,
        })
    }

    /// One row per pair; each pattern gets an exact and a decimal column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("graph");
        for p in &self.patterns {
            out.push_str(&format!(
                ",{},{}",
                csv_field(p),
                csv_field(&format!("{p}_value"))
            ));
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.cells) {
            out.push_str(&csv_field(label));
            for cell in row {
                out.push_str(&format!(",{},{}", cell.fraction(), fmt_f64(cell.value())));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .labels
            .iter()
            .zip(&self.cells)
            .map(|(label, row)| {
                let cells: serde_json::Map<String, Value> = self
                    .patterns
                    .iter()
                    .zip(row)
                    .map(|(p, c)| (p.clone(), serde_json::to_value(c).expect("serializable")))
                    .collect();
                json!({ "graph": label, "densities": cells })
            })
            .collect();
        json!({ "kind": self.kind, "patterns": self.patterns, "rows": rows })
    }
}

/// CSV field with RFC 4180 quoting when it contains a comma, quote or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-trip decimal form.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRow {
    pub label: String,
    pub t_k2: String,
    pub t_p3: String,
    pub t_k2_value: f64,
    pub t_p3_value: f64,
    /// Minimum, quartiles and maximum of deg/d.
    pub degree_quantiles: [f64; 5],
    /// `|t(P3) - t(K2)^2|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaReport {
    pub rows: Vec<AlphaRow>,
    pub alpha_hat: f64,
    pub last_residual: f64,
}

pub fn alpha_regularity_report(seq: &[(String, AdmissiblePair)]) -> Result<AlphaReport> {
    if seq.is_empty() {
        return Err(Error::invalid("alpha report needs a nonempty sequence"));
    }
    let k2 = make_named(NamedGraph::Complete(2))?;
    let p3 = make_named(NamedGraph::Path(3))?;
    let mut rows = Vec::new();
    for (label, pair) in seq {
        let a = t(&k2, pair)?;
        let b = t(&p3, pair)?;
        let mut ratios: Vec<f64> = pair
            .graph
            .degrees()
            .iter()
            .map(|&x| x as f64 / pair.d as f64)
            .collect();
        ratios.sort_by(f64::total_cmp);
        let q = |p: f64| ratios[((p * (ratios.len() - 1) as f64).round()) as usize];
        let residual: BigRational = b.exact() - a.exact() * a.exact();
        rows.push(AlphaRow {
            label: label.clone(),
            t_k2: a.fraction(),
            t_p3: b.fraction(),
            t_k2_value: a.value(),
            t_p3_value: b.value(),
            degree_quantiles: [q(0.0), q(0.25), q(0.5), q(0.75), q(1.0)],
            residual: residual.abs().to_f64().unwrap_or(f64::NAN),
        });
    }
    let last = rows.last().expect("nonempty");
    Ok(AlphaReport {
        alpha_hat: last.t_k2_value,
        last_residual: last.residual,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GirthProfile {
    pub ks: Vec<usize>,
    pub labels: Vec<String>,
    /// `values[row][i]` is `t_inj(C_{ks[i]})` on pair `row`.
    pub values: Vec<Vec<DensityValue>>,
    /// Per cycle length, whether the column is non-increasing along the sequence.
    pub nonincreasing: Vec<bool>,
}

pub fn essential_girth_profile(
    seq: &[(String, AdmissiblePair)],
    k_max: usize,
) -> Result<GirthProfile> {
    let ks: Vec<usize> = (3..=k_max).collect();
    let cycles = ks
        .iter()
        .map(|&k| make_named(NamedGraph::Cycle(k)))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::new();
    for (_, pair) in seq {
        values.push(
            cycles
                .iter()
                .map(|c| t_inj(c, pair))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let nonincreasing = (0..ks.len())
        .map(|i| {
            values
                .windows(2)
                .all(|w| w[1][i].exact() <= w[0][i].exact())
        })
        .collect();
    Ok(GirthProfile {
        ks,
        labels: seq.iter().map(|(l, _)| l.clone()).collect(),
        values,
        nonincreasing,
    })
}

/// Which case of the characterization of `t = 1` applies, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitCase {
    EdgelessPattern,
    ForestInRegular,
    BipartiteInCompleteBipartite,
}

pub fn unit_density_case(f: &Graph, pair: &AdmissiblePair) -> Option<UnitCase> {
    let g = &pair.graph;
    if f.edge_count() == 0 {
        return Some(UnitCase::EdgelessPattern);
    }
    if f.is_forest() && g.is_regular(pair.d as usize) {
        return Some(UnitCase::ForestInRegular);
    }
    let d = pair.d as usize;
    let all_kdd =
        g.is_regular(d) && g.components().iter().all(|c| c.len() == 2 * d) && g.is_bipartite();
    if f.is_bipartite() && all_kdd {
        return Some(UnitCase::BipartiteInCompleteBipartite);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_grid, make_hypercube};
    use crate::rng::RandomSource;

    fn pair(g: Graph, d: u64) -> AdmissiblePair {
        AdmissiblePair::new(g, d).unwrap()
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("C4"), "C4");
        assert_eq!(csv_field("K3,3"), "\"K3,3\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
        assert_eq!(csv_field("x\ny"), "\"x\ny\"");
    }

    #[test]
    fn alpha_examples() {
        let seq: Vec<_> = (4..=7)
            .map(|d| (format!("Q{d}"), pair(make_hypercube(d).unwrap(), d as u64)))
            .collect();
        let report = alpha_regularity_report(&seq).unwrap();
        for row in &report.rows {
            assert_eq!(row.t_k2, "1/1");
            assert_eq!(row.t_p3, "1/1");
            assert_eq!(row.residual, 0.0);
        }
        for n in 2..6 {
            let grid = make_grid(2, n).unwrap();
            let report = alpha_regularity_report(&[("grid".into(), pair(grid, 4))]).unwrap();
            assert_eq!(report.rows[0].t_k2, format!("{}/{}", n - 1, n));
        }
    }

    #[test]
    fn girth_examples() {
        let trees: Vec<_> = (3..6)
            .map(|k| {
                (
                    "path".to_string(),
                    pair(make_named(NamedGraph::Path(k)).unwrap(), 2),
                )
            })
            .collect();
        let prof = essential_girth_profile(&trees, 6).unwrap();
        assert!(prof.values.iter().flatten().all(|v| v.count == 0u32.into()));
        let kdd: Vec<_> = (3..=4)
            .map(|d| {
                (
                    format!("K{d},{d}"),
                    pair(
                        make_named(NamedGraph::CompleteBipartite(d, d)).unwrap(),
                        d as u64,
                    ),
                )
            })
            .collect();
        let prof = essential_girth_profile(&kdd, 4).unwrap();
        for (row, d) in prof.values.iter().zip(3u64..) {
            assert_eq!(row[1].count, (2 * d * d * (d - 1) * (d - 1)).into());
            assert!(row[1].value() > 0.4);
        }
    }

    #[test]
    fn table_serialization_is_stable() {
        let seq: Vec<_> = (2..=3)
            .map(|d| (format!("Q{d}"), pair(make_hypercube(d).unwrap(), d as u64)))
            .collect();
        let pats = vec![Pattern::named("K2").unwrap(), Pattern::named("C4").unwrap()];
        let table = ConvergenceTable::build(DensityKind::Hom, &seq, &pats).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with("graph,K2,K2_value,C4,C4_value\nQ2,1/1,1.0,1/1,1.0\n"));
        let json = serde_json::to_string(&table.to_json()).unwrap();
        assert!(json.contains("\"exact\":\"1/1\""));
    }

    fn all_graphs(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        (0u32..(1 << pairs.len()))
            .map(|mask| {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                Graph::from_edges(n, &edges).unwrap()
            })
            .collect()
    }

    #[test]
    fn unit_density_characterization() {
        let patterns: Vec<Graph> = (1..=4).flat_map(all_graphs).collect();
        let mut hosts: Vec<Graph> = (1..=5).flat_map(all_graphs).collect();
        let mut rng = RandomSource::new(8);
        hosts.extend((0..30).map(|_| crate::test_support::random_graph(8, 0.5, &mut rng)));
        hosts.push(make_named(NamedGraph::CompleteBipartite(4, 4)).unwrap());
        hosts.push(
            crate::graph::disjoint_union(&vec![make_named(NamedGraph::Cycle(4)).unwrap(); 2])
                .unwrap(),
        );
        for g in &hosts {
            let dmax = g.max_degree().max(1) as u64;
            for d in [dmax, dmax + 1] {
                let pr = pair(g.clone(), d);
                for f in &patterns {
                    let one = t(f, &pr).unwrap().is_one();
                    assert_eq!(
                        one,
                        unit_density_case(f, &pr).is_some(),
                        "{f:?} {g:?} d={d}"
                    );
                }
            }
        }
    }
}
