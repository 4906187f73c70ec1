use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use graphlim::graph::{
    configuration_model, make_grid, make_hypercube, make_named, make_projective_incidence,
    NamedGraph,
};
use graphlim::{AdmissiblePair, Caps, RandomSource};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Declarative experiment description. Loaded from TOML, then overridden
/// field by field from the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub caps: Caps,
    pub family: Option<String>,
    /// Family parameters: `4..10` (inclusive), `2,3,5` or a single value.
    pub d: Option<String>,
    pub dim: Option<usize>,
    pub r: Option<usize>,
    pub degree: Option<usize>,
    pub patterns: Option<Vec<String>>,
    pub kind: Option<String>,
    pub k_max: Option<usize>,
    pub xi: Option<f64>,
    pub gauge: Option<String>,
    pub gamma: Option<Vec<u64>>,
    pub delta: Option<Vec<u64>>,
    pub samples: Option<usize>,
    pub depth: Option<usize>,
    pub suite: Option<String>,
    pub criteria: Option<Vec<u32>>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))
            .map_err(Failure::Config)?;
        toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))
            .map_err(Failure::Config)
    }

    /// Fields set in `other` replace ours.
    pub fn overridden_by(
        mut self,
        other: ExperimentConfig,
        caps_override: Option<&str>,
    ) -> Result<Self, Failure> {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            seed, out, workers, family, d, dim, r, degree, patterns, kind, k_max, xi, gauge, gamma,
            delta, samples, depth, suite, criteria
        );
        if let Some(spec) = caps_override {
            self.caps = self
                .caps
                .with_overrides(spec)
                .map_err(|e| Failure::Config(e.into()))?;
        }
        Ok(self)
    }

    pub fn require_seed(&self, what: &str) -> Result<u64, Failure> {
        self.seed.ok_or_else(|| {
            Failure::Config(anyhow::anyhow!("{what} is randomized and needs --seed"))
        })
    }

    pub fn params(&self) -> Result<Vec<u64>, Failure> {
        let text = self
            .d
            .as_deref()
            .ok_or_else(|| Failure::Config(anyhow::anyhow!("missing --d parameter list")))?;
        parse_params(text).map_err(Failure::Config)
    }

    pub fn pattern_names(&self) -> Vec<String> {
        self.patterns
            .clone()
            .unwrap_or_else(|| ["K2", "P3", "C4"].map(String::from).to_vec())
    }

    /// Labelled pairs of the requested family.
    pub fn sequence(&self) -> Result<Vec<(String, AdmissiblePair)>, Failure> {
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| Failure::Config(anyhow::anyhow!("missing --family")))?;
        let params = self.params()?;
        let seed = if family == "config" {
            Some(self.require_seed("family config")?)
        } else {
            None
        };
        let mut out = Vec::new();
        for p in params {
            let usize_p = usize::try_from(p)
                .map_err(|_| Failure::Config(anyhow::anyhow!("parameter {p} too large")))?;
            let (label, pair) = match family {
                "hypercube" => {
                    if usize_p > self.caps.hypercube_dimension {
                        return Err(Failure::Cap(anyhow::anyhow!(
                            "hypercube dimension {p} exceeds cap {}",
                            self.caps.hypercube_dimension
                        )));
                    }
                    (format!("Q{p}"), AdmissiblePair::new(make_hypercube(usize_p)?, p)?)
                }
                "projective" => {
                    let r = self.r.unwrap_or(2);
                    (format!("PG({r},{p})"), make_projective_incidence(p, r)?)
                }
                "grid" => {
                    let dim = self.dim.unwrap_or(2);
                    (format!("grid{dim}d{p}"), AdmissiblePair::new(make_grid(dim, usize_p)?, 2 * dim as u64)?)
                }
                "config" => {
                    let n = 1usize
                        .checked_shl(p as u32)
                        .filter(|&n| p < 64 && n <= self.caps.max_vertices)
                        .ok_or_else(|| Failure::Cap(anyhow::anyhow!("2^{p} vertices exceeds max_vertices")))?;
                    let d = self.degree.unwrap_or_else(|| cube_root(n as u64) as usize).max(1);
                    let mut rng = RandomSource::new(seed.unwrap_or(0)).fork(p);
                    let (_, simple) = configuration_model(n, d, &mut rng)?;
                    (format!("config{n}d{d}"), AdmissiblePair::new(simple, d as u64)?)
                }
                "complete" => {
                    let g = make_named(NamedGraph::Complete(usize_p))?;
                    (format!("K{p}"), AdmissiblePair::tight(g)?)
                }
                "cycle" => (format!("C{p}"), AdmissiblePair::new(make_named(NamedGraph::Cycle(usize_p))?, 2)?),
                "star" => {
                    let g = make_named(NamedGraph::CompleteBipartite(1, usize_p))?;
                    (format!("K1,{p}"), AdmissiblePair::new(g, p.max(1))?)
                }
                "kdd" => {
                    let g = make_named(NamedGraph::CompleteBipartite(usize_p, usize_p))?;
                    (format!("K{p},{p}"), AdmissiblePair::new(g, p.max(1))?)
                }
                other => {
                    return Err(Failure::Config(anyhow::anyhow!(
                        "unknown family `{other}` (hypercube, projective, grid, config, complete, cycle, star, kdd)"
                    )))
                }
            };
            if pair.vertex_count() > self.caps.max_vertices {
                return Err(Failure::Cap(anyhow::anyhow!(
                    "{label} has {} vertices, cap is {}",
                    pair.vertex_count(),
                    self.caps.max_vertices
                )));
            }
            out.push((label, pair));
        }
        Ok(out)
    }
}

pub fn cube_root(n: u64) -> u64 {
    let mut r = (n as f64).cbrt() as u64;
    while (r + 1).pow(3) <= n {
        r += 1;
    }
    while r.pow(3) > n {
        r -= 1;
    }
    r
}

pub fn parse_params(text: &str) -> anyhow::Result<Vec<u64>> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let lo: u64 = a
            .trim()
            .parse()
            .with_context(|| format!("bad range start in `{text}`"))?;
        let hi: u64 = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .with_context(|| format!("bad range end in `{text}`"))?;
        if lo > hi {
            bail!("empty range `{text}`");
        }
        return Ok((lo..=hi).collect());
    }
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .with_context(|| format!("bad parameter `{s}`"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if values.is_empty() {
        bail!("empty parameter list");
    }
    Ok(values)
}
