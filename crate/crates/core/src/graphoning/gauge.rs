use serde::Serialize;

use crate::{AdmissiblePair, Error, Result};

use super::cantor::CantorSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeKind {
    Cube,
    Proj,
    /// Digit `n` has radix `gamma[n]` and may take `delta[n]` equally spaced
    /// values. The last pair repeats past the end of the lists.
    MixedRadix {
        gamma: Vec<u64>,
        delta: Vec<u64>,
    },
}

/// Hausdorff gauge `h`, nondecreasing on `(0, 1]`.
///
/// * cube: `h(x) = 1 / log2(1/x)`
/// * proj: `h(x) = sqrt(2x)`
/// * mixed radix: linear in `x` between the nodes `(1/Γ_n, 1/Δ_n)`, where
///   `Γ_n = γ_1⋯γ_n` and `Δ_n = δ_1⋯δ_n`, and linear to the origin past the
///   last supplied node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeFunction {
    #[serde(flatten)]
    kind: GaugeKind,
    /// `(log2 Γ_n, log2 Δ_n)` for `n = 0..=len`.
    #[serde(skip)]
    nodes: Vec<(f64, f64)>,
}

/// Finite-sequence stand-ins for the side conditions of the mixed-radix
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MixedRadixConditions {
    pub divisibility: bool,
    pub delta_nondecreasing: bool,
    pub ratio_nondecreasing: bool,
    /// `|Δ_n h(1/Γ_n) − 1| < 2^-n` for every supplied level.
    pub covering_bound: bool,
}

impl GaugeFunction {
    pub fn cube() -> Self {
        GaugeFunction {
            kind: GaugeKind::Cube,
            nodes: Vec::new(),
        }
    }

    pub fn proj() -> Self {
        GaugeFunction {
            kind: GaugeKind::Proj,
            nodes: Vec::new(),
        }
    }

    pub fn mixed_radix(gamma: Vec<u64>, delta: Vec<u64>) -> Result<Self> {
        if gamma.is_empty() || gamma.len() != delta.len() {
            return Err(Error::invalid(
                "gamma and delta must be nonempty and of equal length",
            ));
        }
        for (i, (&g, &dl)) in gamma.iter().zip(&delta).enumerate() {
            if dl < 2 || g < dl {
                return Err(Error::invalid(format!(
                    "need gamma >= delta >= 2 at position {i}"
                )));
            }
            if (g - 1) % (dl - 1) != 0 {
                return Err(Error::invalid(format!(
                    "delta - 1 = {} does not divide gamma - 1 = {} at position {i}",
                    dl - 1,
                    g - 1
                )));
            }
        }
        let mut nodes = vec![(0.0, 0.0)];
        let (mut lg, mut ld) = (0.0f64, 0.0f64);
        for (&g, &dl) in gamma.iter().zip(&delta) {
            lg += (g as f64).log2();
            ld += (dl as f64).log2();
            nodes.push((lg, ld));
        }
        Ok(GaugeFunction {
            kind: GaugeKind::MixedRadix { gamma, delta },
            nodes,
        })
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            GaugeKind::Cube => "cube",
            GaugeKind::Proj => "proj",
            GaugeKind::MixedRadix { .. } => "mixed_radix",
        }
    }

    pub fn block_structure(&self) -> CantorSpec {
        CantorSpec::new(self.kind.clone())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.eval_at_log2(x.log2())
    }

    /// `h(x)` from `log2 x`, exact at the block nodes of cube and proj.
    pub fn eval_at_log2(&self, log2_x: f64) -> f64 {
        match self.kind {
            GaugeKind::Cube => 1.0 / -log2_x.min(0.0),
            _ => self.eval_log2(log2_x).exp2(),
        }
    }

    /// `log2 h(x)` from `log2 x`.
    pub fn eval_log2(&self, log2_x: f64) -> f64 {
        let log2_x = log2_x.min(0.0);
        match self.kind {
            GaugeKind::Cube => -(-log2_x).log2(),
            GaugeKind::Proj => (1.0 + log2_x) / 2.0,
            GaugeKind::MixedRadix { .. } => self.mixed_log2(log2_x),
        }
    }

    fn mixed_log2(&self, log2_x: f64) -> f64 {
        let depth = -log2_x;
        let last = self.nodes[self.nodes.len() - 1];
        if depth >= last.0 {
            // h(x) = x Γ_N / Δ_N
            return log2_x + last.0 - last.1;
        }
        let i = self.nodes.partition_point(|&(lg, _)| lg <= depth);
        let (g0, d0) = self.nodes[i - 1];
        if g0 == depth {
            return -d0;
        }
        let (g1, d1) = self.nodes[i];
        // Linear in x between x1 = 2^-g1 < x < x0 = 2^-g0.
        let x = log2_x.exp2();
        let (x0, x1) = ((-g0).exp2(), (-g1).exp2());
        let (h0, h1) = ((-d0).exp2(), (-d1).exp2());
        (h1 + (h0 - h1) * (x - x1) / (x0 - x1)).log2()
    }

    pub fn mixed_radix_conditions(&self) -> Option<MixedRadixConditions> {
        let GaugeKind::MixedRadix { gamma, delta } = &self.kind else {
            return None;
        };
        let divisibility = gamma
            .iter()
            .zip(delta)
            .all(|(&g, &d)| (g - 1) % (d - 1) == 0);
        let delta_nondecreasing = delta.windows(2).all(|w| w[0] <= w[1]);
        let ratio_nondecreasing = gamma.windows(2).zip(delta.windows(2)).all(|(g, d)| {
            u128::from(g[0]) * u128::from(d[1]) <= u128::from(g[1]) * u128::from(d[0])
        });
        let covering_bound = (1..=gamma.len().min(20)).all(|n| {
            (covering_sum(self, n).unwrap_or(f64::INFINITY) - 1.0).abs() < (-(n as f64)).exp2()
        });
        Some(MixedRadixConditions {
            divisibility,
            delta_nondecreasing,
            ratio_nondecreasing,
            covering_bound,
        })
    }
}

/// Sum of `h(diam I)` over the `Δ_n` level-`n` cylinders of the Cantor set,
/// each of diameter `1/Γ_n`. Evaluated in the log2 domain so that levels
/// whose diameter underflows `f64` stay exact.
pub fn covering_sum(g: &GaugeFunction, level: usize) -> Result<f64> {
    if level > 20 {
        return Err(Error::cap("covering level", level as u128, 20u128));
    }
    let spec = g.block_structure();
    let (mut log2_count, mut log2_diam) = (0.0f64, 0.0f64);
    for b in spec.blocks(level) {
        log2_count += (b.choices as f64).log2();
        log2_diam -= b.log2_super_radix();
    }
    Ok(log2_count.exp2() * g.eval_at_log2(log2_diam))
}

/// `h(1/v(G_n)) · d_n` along a sequence of pairs with strictly increasing
/// vertex counts.
pub fn gauge_growth_check(g: &GaugeFunction, seq: &[AdmissiblePair]) -> Result<Vec<f64>> {
    for w in seq.windows(2) {
        if w[1].vertex_count() <= w[0].vertex_count() {
            return Err(Error::invalid("vertex counts must be strictly increasing"));
        }
    }
    Ok(seq
        .iter()
        .map(|p| {
            let log2_x = -(p.vertex_count() as f64).log2();
            g.eval_at_log2(log2_x) * p.d as f64
        })
        .collect())
}
