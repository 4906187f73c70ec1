use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Graph, RandomSource, Result, Vertex};

use super::cantor::{is_member, sample_block_values, sample_s, CantorSpec, DigitPoint};

const CHUNK: usize = 1024;

fn check_layout(x: &DigitPoint, spec: &CantorSpec) -> Result<()> {
    if x.radices() != spec.radices(x.depth()).as_slice() {
        return Err(Error::invalid(
            "digit point radices do not match the block layout",
        ));
    }
    Ok(())
}

/// Neighbour of `x` drawn from `deg(x)`: `y = (x + s) mod 1` with `s` μ-random
/// in `S`. Since `S` is closed under `s ↦ 1 − s`, this is the law of a point
/// with `|x − y| ∈ S`, and `x = 0` gives `y = s`.
pub fn kernel_sample(
    x: &DigitPoint,
    spec: &CantorSpec,
    rng: &mut RandomSource,
) -> Result<DigitPoint> {
    check_layout(x, spec)?;
    x.add_mod1(&sample_s(spec, rng, x.depth()))
}

/// `W(x, y) = 1`, i.e. `|x − y| ∈ S`, checked as `(y − x) mod 1 ∈ S` or
/// `(x − y) mod 1 ∈ S`. Both forms agree for infinite expansions; at finite
/// depth the truncated negation is one unit off the digit complement.
pub fn is_adjacent(x: &DigitPoint, y: &DigitPoint, spec: &CantorSpec) -> Result<bool> {
    Ok(is_member(&y.sub_mod1(x)?, spec)? || is_member(&x.sub_mod1(y)?, spec)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeDensityEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub alpha: f64,
    /// Kernel draws that failed the adjacency check.
    pub violations: usize,
    pub depth: usize,
    pub seed: u64,
}

/// Monte Carlo estimate of `t((F, o), x)` for a tree `F`: each sample walks
/// `F` outward from `o`, drawing every child from `deg` of its parent and
/// keeping it with probability `alpha`.
pub fn mc_rooted_tree_density(
    f: &Graph,
    root: Vertex,
    spec: &CantorSpec,
    x: &DigitPoint,
    samples: usize,
    alpha: f64,
    rng: &RandomSource,
) -> Result<TreeDensityEstimate> {
    if f.vertex_count() == 0 {
        return Err(Error::EmptyPattern);
    }
    if !f.is_tree() {
        return Err(Error::NotAForest);
    }
    if root >= f.vertex_count() {
        return Err(Error::invalid(format!("root {root} out of range")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid("alpha must lie in [0, 1]"));
    }
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    check_layout(x, spec)?;
    is_member(x, spec)?;

    // (vertex, parent) in BFS order
    let mut order = vec![(root, root)];
    let mut seen = vec![false; f.vertex_count()];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head].0;
        head += 1;
        for &w in f.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                order.push((w, v));
            }
        }
    }

    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<(f64, f64, usize)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng.fork(c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let (mut sum, mut sq, mut bad) = (0.0, 0.0, 0usize);
            let mut points = vec![x.clone(); f.vertex_count()];
            for _ in 0..n {
                let mut value = 1.0;
                for &(v, p) in &order[1..] {
                    let y = kernel_sample(&points[p], spec, &mut rng)?;
                    if !is_adjacent(&points[p], &y, spec)? {
                        bad += 1;
                        value = 0.0;
                    }
                    if alpha < 1.0 && !rng.bernoulli(alpha) {
                        value = 0.0;
                    }
                    points[v] = y;
                }
                sum += value;
                sq += value * value;
            }
            Ok((sum, sq, bad))
        })
        .collect();
    let (mut sum, mut sq, mut violations) = (0.0, 0.0, 0);
    for part in parts {
        let (s, q, b) = part?;
        sum += s;
        sq += q;
        violations += b;
    }
    let n = samples as f64;
    let estimate = sum / n;
    let var = if samples > 1 {
        ((sq - n * estimate * estimate) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(TreeDensityEstimate {
        estimate,
        stderr: (var / n).sqrt(),
        samples,
        alpha,
        violations,
        depth: x.depth(),
        seed: rng.seed(),
    })
}

/// Truncation used by [`acyclicity_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcyclicityDepth {
    /// Whole blocks, summed symbolically; cube blocks double in length, so
    /// this reaches far past what a digit vector can hold.
    Blocks(usize),
    /// Binary (or mixed-radix) digits, summed digit by digit.
    Digits(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcyclicityReport {
    pub k: usize,
    pub trials: usize,
    pub hits: usize,
    pub fraction: f64,
    pub depth: AcyclicityDepth,
    pub complete_blocks: usize,
    pub seed: u64,
}

/// Whether the mod-1 sum of the points with the given block value indices
/// lies in `S`, looking at the first `values[0].len()` blocks and treating
/// all later digits as zero.
pub(crate) fn block_sum_is_member(spec: &CantorSpec, values: &[Vec<u64>]) -> bool {
    let blocks = values[0].len();
    let mut carry = 0u128;
    for i in (0..blocks).rev() {
        let b = spec.block(i);
        let r = u128::from(b.radix);
        let step = u128::from(b.step());
        let j = step * values.iter().map(|v| u128::from(v[i])).sum::<u128>();
        // Digits from the least significant end of the block. The carry is
        // monotone and below `k`, so it settles after at most `k` digits and
        // every later digit repeats the last one.
        let mut digit = None;
        let mut done = 0u128;
        while done < b.len {
            let t = j + carry;
            let d = t % r;
            let next = t / r;
            match digit {
                None => digit = Some(d),
                Some(e) if e != d => return false,
                _ => {}
            }
            done += 1;
            if next == carry {
                break;
            }
            carry = next;
        }
        if digit.is_some_and(|d| d % step != 0) {
            return false;
        }
    }
    true
}

/// Fraction of trials in which the mod-1 sum of `k` independent μ-random
/// points of `S` passes the membership test at the given truncation.
pub fn acyclicity_test(
    spec: &CantorSpec,
    k: usize,
    trials: usize,
    depth: AcyclicityDepth,
    rng: &RandomSource,
) -> Result<AcyclicityReport> {
    if !(1..=6).contains(&k) {
        return Err(Error::invalid(format!("k = {k} outside 1..=6")));
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let complete = match depth {
        AcyclicityDepth::Blocks(n) => n,
        AcyclicityDepth::Digits(n) => spec.complete_blocks(n),
    };
    if complete < 8 {
        return Err(Error::invalid(format!(
            "{complete} complete blocks, need at least 8"
        )));
    }
    let chunks = trials.div_ceil(CHUNK);
    let hits: Result<Vec<usize>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng.fork(c as u64);
            let n = CHUNK.min(trials - c * CHUNK);
            let mut hits = 0;
            for _ in 0..n {
                let hit = match depth {
                    AcyclicityDepth::Blocks(blocks) => {
                        let values: Vec<Vec<u64>> = (0..k)
                            .map(|_| sample_block_values(spec, &mut rng, blocks))
                            .collect();
                        block_sum_is_member(spec, &values)
                    }
                    AcyclicityDepth::Digits(digits) => {
                        let mut sum = sample_s(spec, &mut rng, digits);
                        for _ in 1..k {
                            sum = sum.add_mod1(&sample_s(spec, &mut rng, digits))?;
                        }
                        is_member(&sum, spec)?
                    }
                };
                hits += usize::from(hit);
            }
            Ok(hits)
        })
        .collect();
    let hits: usize = hits?.into_iter().sum();
    Ok(AcyclicityReport {
        k,
        trials,
        hits,
        fraction: hits as f64 / trials as f64,
        depth,
        complete_blocks: complete,
        seed: rng.seed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedGraph};
    use crate::graphoning::GaugeFunction;

    fn specs() -> [CantorSpec; 2] {
        [
            GaugeFunction::cube().block_structure(),
            GaugeFunction::proj().block_structure(),
        ]
    }

    #[test]
    fn kernel_samples_are_adjacent() {
        for spec in specs() {
            let mut rng = RandomSource::new(9);
            let radices = spec.radices(128);
            let zero = DigitPoint::zero(radices.clone());
            let half = DigitPoint::from_f64(0.5, radices.clone()).unwrap();
            for _ in 0..10_000 {
                let y = kernel_sample(&half, &spec, &mut rng).unwrap();
                assert!(is_adjacent(&half, &y, &spec).unwrap());
                assert!(is_adjacent(&y, &half, &spec).unwrap());
            }
            for _ in 0..200 {
                let y = kernel_sample(&zero, &spec, &mut rng).unwrap();
                assert!(is_member(&y, &spec).unwrap());
            }
            let x = DigitPoint::from_f64(0.3, radices).unwrap();
            let mut a = RandomSource::new(1);
            let mut b = RandomSource::new(1);
            assert_eq!(
                kernel_sample(&x, &spec, &mut a),
                kernel_sample(&x, &spec, &mut b)
            );
        }
    }

    #[test]
    fn kernel_from_zero_returns_the_shift() {
        let spec = &specs()[0];
        let zero = DigitPoint::zero(spec.radices(64));
        let mut a = RandomSource::new(2);
        let mut b = RandomSource::new(2);
        assert_eq!(
            kernel_sample(&zero, spec, &mut a).unwrap(),
            sample_s(spec, &mut b, 64)
        );
    }

    #[test]
    fn tree_densities_are_one() {
        let rng = RandomSource::new(5);
        for spec in specs() {
            let x = DigitPoint::from_f64(0.37, spec.radices(96)).unwrap();
            for name in [
                NamedGraph::Complete(2),
                NamedGraph::Path(3),
                NamedGraph::Path(4),
            ] {
                let f = make_named(name).unwrap();
                let e = mc_rooted_tree_density(&f, 0, &spec, &x, 2000, 1.0, &rng).unwrap();
                assert_eq!(e.estimate, 1.0);
                assert_eq!(e.stderr, 0.0);
                assert_eq!(e.violations, 0);
            }
        }
    }

    #[test]
    fn thinned_tree_density() {
        let spec = &specs()[1];
        let f = make_named(NamedGraph::Path(3)).unwrap();
        let x = DigitPoint::zero(spec.radices(64));
        for root in [0, 1] {
            let e = mc_rooted_tree_density(&f, root, spec, &x, 20_000, 0.5, &RandomSource::new(6))
                .unwrap();
            assert!((e.estimate - 0.25).abs() <= 3.0 * e.stderr, "{e:?}");
        }
        let c4 = make_named(NamedGraph::Cycle(4)).unwrap();
        assert_eq!(
            mc_rooted_tree_density(&c4, 0, spec, &x, 10, 1.0, &RandomSource::new(6)),
            Err(Error::NotAForest)
        );
    }

    #[test]
    fn estimates_do_not_depend_on_thread_count() {
        let spec = &specs()[1];
        let f = make_named(NamedGraph::Path(4)).unwrap();
        let x = DigitPoint::zero(spec.radices(64));
        let run =
            || mc_rooted_tree_density(&f, 1, spec, &x, 5000, 0.7, &RandomSource::new(8)).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(single, many);
    }

    #[test]
    fn symbolic_and_digit_sums_agree() {
        let mut rng = RandomSource::new(10);
        for spec in specs() {
            for blocks in [3, 5, 7] {
                let depth: u128 = spec.blocks(blocks).iter().map(|b| b.len).sum();
                let depth = depth as usize;
                for k in 1..=4 {
                    for _ in 0..300 {
                        let values: Vec<Vec<u64>> = (0..k)
                            .map(|_| sample_block_values(&spec, &mut rng, blocks))
                            .collect();
                        let mut sum = DigitPoint::zero(spec.radices(depth));
                        for v in &values {
                            sum = sum.add_mod1(&spec.point_from_blocks(v, depth)).unwrap();
                        }
                        assert_eq!(
                            block_sum_is_member(&spec, &values),
                            is_member(&sum, &spec).unwrap()
                        );
                    }
                }
            }
        }
        let m = GaugeFunction::mixed_radix(vec![7, 13, 61], vec![3, 4, 5])
            .unwrap()
            .block_structure();
        for _ in 0..500 {
            let values: Vec<Vec<u64>> = (0..3)
                .map(|_| sample_block_values(&m, &mut rng, 6))
                .collect();
            let mut sum = DigitPoint::zero(m.radices(6));
            for v in &values {
                sum = sum.add_mod1(&m.point_from_blocks(v, 6)).unwrap();
            }
            assert_eq!(
                block_sum_is_member(&m, &values),
                is_member(&sum, &m).unwrap()
            );
        }
    }

    #[test]
    fn acyclicity_fractions() {
        let rng = RandomSource::new(11);
        for spec in specs() {
            let control =
                acyclicity_test(&spec, 1, 2000, AcyclicityDepth::Blocks(128), &rng).unwrap();
            assert_eq!(control.fraction, 1.0);
            for k in [2, 3] {
                let r =
                    acyclicity_test(&spec, k, 10_000, AcyclicityDepth::Blocks(128), &rng).unwrap();
                assert!(r.fraction < 0.01, "{r:?}");
            }
        }
        let proj = &specs()[1];
        let r = acyclicity_test(proj, 3, 10_000, AcyclicityDepth::Digits(128), &rng).unwrap();
        assert!(r.fraction < 0.01, "{r:?}");
        assert!(acyclicity_test(&specs()[0], 2, 10, AcyclicityDepth::Digits(128), &rng).is_err());
        assert!(acyclicity_test(proj, 0, 10, AcyclicityDepth::Blocks(8), &rng).is_err());
    }

    #[test]
    fn two_point_survival_is_three_quarters_per_block() {
        // With blocks of length >= 2, the sum of two points stays in S
        // through a block with probability 3/4 whatever the incoming carry.
        let rng = RandomSource::new(12);
        let n = 40_000;
        for (spec, blocks) in [(&specs()[0], 8), (&specs()[1], 8), (&specs()[1], 12)] {
            let r = acyclicity_test(spec, 2, n, AcyclicityDepth::Blocks(blocks), &rng).unwrap();
            let p = 0.75f64.powi(blocks as i32);
            let sd = (p * (1.0 - p) / n as f64).sqrt();
            assert!((r.fraction - p).abs() < 4.0 * sd, "{r:?} vs {p}");
        }
    }

    #[test]
    fn deeper_truncation_does_not_increase_hits() {
        let rng = RandomSource::new(13);
        let proj = &specs()[1];
        let shallow = acyclicity_test(proj, 2, 20_000, AcyclicityDepth::Digits(33), &rng).unwrap();
        let deep = acyclicity_test(proj, 2, 20_000, AcyclicityDepth::Digits(65), &rng).unwrap();
        assert!(deep.fraction <= shallow.fraction);
        let shallow = acyclicity_test(proj, 2, 20_000, AcyclicityDepth::Blocks(64), &rng).unwrap();
        let deep = acyclicity_test(proj, 2, 20_000, AcyclicityDepth::Blocks(128), &rng).unwrap();
        assert!(deep.fraction <= shallow.fraction);
    }
}
