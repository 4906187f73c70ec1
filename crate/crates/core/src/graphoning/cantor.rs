use std::fmt;

use serde::{Serialize, Serializer};

use crate::{Error, RandomSource, Result};

use super::gauge::GaugeKind;

/// A run of `len` digits of radix `radix` that must all equal one value
/// `j · step` with `0 <= j < choices`, where `step = (radix−1)/(choices−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub radix: u64,
    /// Saturates at `u128::MAX` for cube blocks past the 128th.
    pub len: u128,
    pub choices: u64,
}

impl Block {
    pub fn step(&self) -> u64 {
        (self.radix - 1) / (self.choices - 1)
    }

    pub fn log2_super_radix(&self) -> f64 {
        self.len as f64 * (self.radix as f64).log2()
    }
}

/// Block layout of the Cantor-type set `S` attached to a gauge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CantorSpec {
    kind: GaugeKind,
}

impl CantorSpec {
    pub(crate) fn new(kind: GaugeKind) -> Self {
        CantorSpec { kind }
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    /// Block `i`, counted from the most significant end starting at 0.
    pub fn block(&self, i: usize) -> Block {
        match &self.kind {
            GaugeKind::Cube => Block {
                radix: 2,
                len: if i == 0 {
                    2
                } else if i < 128 {
                    1u128 << i
                } else {
                    u128::MAX
                },
                choices: 2,
            },
            GaugeKind::Proj => Block {
                radix: 2,
                len: if i == 0 { 3 } else { 2 },
                choices: 2,
            },
            GaugeKind::MixedRadix { gamma, delta } => {
                let k = i.min(gamma.len() - 1);
                Block {
                    radix: gamma[k],
                    len: 1,
                    choices: delta[k],
                }
            }
        }
    }

    pub fn blocks(&self, count: usize) -> Vec<Block> {
        (0..count).map(|i| self.block(i)).collect()
    }

    /// Block index of every digit position up to `depth`, and the number of
    /// blocks that fit completely.
    fn layout(&self, depth: usize) -> (Vec<usize>, usize) {
        let mut owner = Vec::with_capacity(depth);
        let mut complete = 0;
        let mut i = 0;
        while owner.len() < depth {
            let b = self.block(i);
            let take = b.len.min((depth - owner.len()) as u128) as usize;
            owner.extend(std::iter::repeat_n(i, take));
            if take as u128 == b.len {
                complete += 1;
            }
            i += 1;
        }
        (owner, complete)
    }

    pub fn radices(&self, depth: usize) -> Vec<u64> {
        self.layout(depth)
            .0
            .into_iter()
            .map(|i| self.block(i).radix)
            .collect()
    }

    pub fn complete_blocks(&self, depth: usize) -> usize {
        self.layout(depth).1
    }

    /// Point whose block `i` carries the value index `values[i]`; blocks past
    /// the end of `values` are zero.
    pub fn point_from_blocks(&self, values: &[u64], depth: usize) -> DigitPoint {
        let (owner, _) = self.layout(depth);
        let mut digits = Vec::with_capacity(depth);
        let mut radices = Vec::with_capacity(depth);
        for i in owner {
            let b = self.block(i);
            digits.push(values.get(i).copied().unwrap_or(0) * b.step());
            radices.push(b.radix);
        }
        DigitPoint { digits, radices }
    }

    /// Number of blocks touched by the first `depth` digits.
    pub fn blocks_touched(&self, depth: usize) -> usize {
        self.layout(depth).0.last().map_or(0, |&i| i + 1)
    }
}

/// Finite expansion `Σ digits[i] / (radices[0]⋯radices[i])` of a point of
/// `[0, 1]`, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitPoint {
    digits: Vec<u64>,
    radices: Vec<u64>,
}

impl DigitPoint {
    pub fn new(digits: Vec<u64>, radices: Vec<u64>) -> Result<Self> {
        if digits.len() != radices.len() {
            return Err(Error::invalid("digits and radices differ in length"));
        }
        if let Some(i) = (0..digits.len()).find(|&i| radices[i] < 2 || digits[i] >= radices[i]) {
            return Err(Error::invalid(format!(
                "digit {i} out of range for its radix"
            )));
        }
        Ok(DigitPoint { digits, radices })
    }

    pub fn zero(radices: Vec<u64>) -> Self {
        DigitPoint {
            digits: vec![0; radices.len()],
            radices,
        }
    }

    /// Truncated expansion of `x ∈ [0, 1)`.
    pub fn from_f64(x: f64, radices: Vec<u64>) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::invalid(format!("{x} is outside [0, 1)")));
        }
        let mut rest = x;
        let digits = radices
            .iter()
            .map(|&r| {
                let scaled = rest * r as f64;
                let d = (scaled.floor() as u64).min(r - 1);
                rest = scaled - d as f64;
                d
            })
            .collect();
        Ok(DigitPoint { digits, radices })
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    pub fn value(&self) -> f64 {
        let mut v = 0.0;
        for (&d, &r) in self.digits.iter().zip(&self.radices).rev() {
            v = (v + d as f64) / r as f64;
        }
        v
    }

    /// Digitwise `r − 1 − a`, the reflection `x ↦ 1 − x` up to the last digit.
    pub fn complement(&self) -> DigitPoint {
        DigitPoint {
            digits: self
                .digits
                .iter()
                .zip(&self.radices)
                .map(|(&d, &r)| r - 1 - d)
                .collect(),
            radices: self.radices.clone(),
        }
    }

    fn check_compatible(&self, other: &DigitPoint) -> Result<()> {
        if self.radices != other.radices {
            return Err(Error::invalid("digit points use different radix layouts"));
        }
        Ok(())
    }

    /// `(self + other) mod 1`, exact at this depth.
    pub fn add_mod1(&self, other: &DigitPoint) -> Result<DigitPoint> {
        self.check_compatible(other)?;
        let mut digits = vec![0; self.depth()];
        let mut carry = 0u128;
        for i in (0..self.depth()).rev() {
            let r = u128::from(self.radices[i]);
            let t = u128::from(self.digits[i]) + u128::from(other.digits[i]) + carry;
            digits[i] = (t % r) as u64;
            carry = t / r;
        }
        Ok(DigitPoint {
            digits,
            radices: self.radices.clone(),
        })
    }

    /// `(self − other) mod 1`, exact at this depth.
    pub fn sub_mod1(&self, other: &DigitPoint) -> Result<DigitPoint> {
        self.check_compatible(other)?;
        let mut digits = vec![0; self.depth()];
        let mut borrow = 0u64;
        for i in (0..self.depth()).rev() {
            let (a, b) = (self.digits[i], other.digits[i] + borrow);
            if a >= b {
                digits[i] = a - b;
                borrow = 0;
            } else {
                digits[i] = self.radices[i] - (b - a);
                borrow = 1;
            }
        }
        Ok(DigitPoint {
            digits,
            radices: self.radices.clone(),
        })
    }
}

impl fmt::Display for DigitPoint {
    /// `b2:0110…` when every radix is the same and at most 10, otherwise
    /// `mixed:d/r,d/r,…`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.radices.first() {
            Some(&r) if r <= 10 && self.radices.iter().all(|&q| q == r) => {
                write!(f, "b{r}:")?;
                for d in &self.digits {
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            _ => {
                f.write_str("mixed:")?;
                for (i, (d, r)) in self.digits.iter().zip(&self.radices).enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{d}/{r}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for DigitPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Whether every complete block of `x` is constant with an allowed value.
/// The trailing incomplete block is ignored.
pub fn is_member(x: &DigitPoint, spec: &CantorSpec) -> Result<bool> {
    let (_, complete) = spec.layout(x.depth());
    if complete < 2 {
        return Err(Error::invalid(format!(
            "depth {} covers {complete} complete blocks, need 2",
            x.depth()
        )));
    }
    let mut first = 0;
    for i in 0..complete {
        let b = spec.block(i);
        let len = b.len as usize;
        if x.radices[first..first + len].iter().any(|&r| r != b.radix) {
            return Err(Error::invalid(
                "digit point radices do not match the block layout",
            ));
        }
        let d = x.digits[first];
        if !d.is_multiple_of(b.step()) || x.digits[first..first + len].iter().any(|&e| e != d) {
            return Ok(false);
        }
        first += len;
    }
    Ok(true)
}

/// One uniform value index per block touched by `depth` digits.
pub fn sample_block_values(spec: &CantorSpec, rng: &mut RandomSource, blocks: usize) -> Vec<u64> {
    (0..blocks)
        .map(|i| rng.below(spec.block(i).choices))
        .collect()
}

/// μ-random point of `S` to `depth` digits: each block takes one of its
/// allowed values uniformly, independently across blocks.
pub fn sample_s(spec: &CantorSpec, rng: &mut RandomSource, depth: usize) -> DigitPoint {
    let values = sample_block_values(spec, rng, spec.blocks_touched(depth));
    spec.point_from_blocks(&values, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphoning::GaugeFunction;

    fn cube() -> CantorSpec {
        GaugeFunction::cube().block_structure()
    }

    fn proj() -> CantorSpec {
        GaugeFunction::proj().block_structure()
    }

    fn binary(s: &str) -> DigitPoint {
        let digits: Vec<u64> = s.bytes().map(|b| u64::from(b - b'0')).collect();
        let n = digits.len();
        DigitPoint::new(digits, vec![2; n]).unwrap()
    }

    #[test]
    fn block_layouts() {
        let lens: Vec<u128> = cube().blocks(6).iter().map(|b| b.len).collect();
        assert_eq!(lens, [2, 2, 4, 8, 16, 32]);
        let lens: Vec<u128> = proj().blocks(5).iter().map(|b| b.len).collect();
        assert_eq!(lens, [3, 2, 2, 2, 2]);
        assert_eq!(cube().block(200).len, u128::MAX);
        let m = GaugeFunction::mixed_radix(vec![4, 4], vec![2, 2])
            .unwrap()
            .block_structure();
        assert_eq!(m.block(0).step(), 3);
        assert_eq!(m.block(5).radix, 4);
        assert_eq!(cube().complete_blocks(128), 7);
        assert_eq!(proj().complete_blocks(128), 63);
        assert_eq!(proj().complete_blocks(127), 63);
    }

    #[test]
    fn membership_examples() {
        assert!(is_member(&binary("1100111100000000"), &cube()).unwrap());
        assert!(!is_member(&binary("1000"), &cube()).unwrap());
        assert!(!is_member(&binary("1101"), &cube()).unwrap());
        // the incomplete trailing block is ignored
        assert!(is_member(&binary("110010"), &cube()).unwrap());
        assert!(is_member(&binary(&"1".repeat(128)), &proj()).unwrap());
        assert!(!is_member(&binary("1101100"), &proj()).unwrap());
        assert!(is_member(&binary("11"), &cube()).is_err());
        let m = GaugeFunction::mixed_radix(vec![4, 4], vec![2, 2])
            .unwrap()
            .block_structure();
        assert!(is_member(&DigitPoint::new(vec![3, 0, 3], vec![4; 3]).unwrap(), &m).unwrap());
        assert!(!is_member(&DigitPoint::new(vec![3, 1, 3], vec![4; 3]).unwrap(), &m).unwrap());
        assert!(is_member(&binary("110011"), &m).is_err());
    }

    #[test]
    fn samples_are_members_and_deterministic() {
        for spec in [cube(), proj()] {
            let mut rng = RandomSource::new(1);
            let mut again = RandomSource::new(1);
            for _ in 0..500 {
                let p = sample_s(&spec, &mut rng, 128);
                assert!(is_member(&p, &spec).unwrap());
                assert_eq!(p, sample_s(&spec, &mut again, 128));
            }
        }
        let m = GaugeFunction::mixed_radix(vec![7, 13, 61], vec![3, 4, 5])
            .unwrap()
            .block_structure();
        let mut rng = RandomSource::new(2);
        for _ in 0..500 {
            assert!(is_member(&sample_s(&m, &mut rng, 12), &m).unwrap());
        }
    }

    #[test]
    fn sample_mean_is_one_half() {
        let spec = proj();
        let mut rng = RandomSource::new(3);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_s(&spec, &mut rng, 64).value())
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(
            (mean - 0.5).abs() < 3.0 * (var / n as f64).sqrt(),
            "mean {mean}"
        );
    }

    #[test]
    fn complement_symmetry() {
        let mut rng = RandomSource::new(4);
        for spec in [cube(), proj()] {
            for _ in 0..300 {
                let digits: Vec<u64> = (0..32).map(|_| rng.below(2)).collect();
                let x = DigitPoint::new(digits, vec![2; 32]).unwrap();
                assert_eq!(
                    is_member(&x, &spec).unwrap(),
                    is_member(&x.complement(), &spec).unwrap()
                );
                let s = sample_s(&spec, &mut rng, 32);
                assert!(is_member(&s.complement(), &spec).unwrap());
            }
        }
    }

    #[test]
    fn modular_arithmetic() {
        let mut rng = RandomSource::new(5);
        let radices = vec![3, 5, 2, 7, 10, 2];
        let modulus: u64 = radices.iter().product();
        let as_int = |p: &DigitPoint| {
            p.digits()
                .iter()
                .zip(p.radices())
                .fold(0, |acc, (&d, &r)| acc * r + d)
        };
        for _ in 0..200 {
            let a = DigitPoint::from_f64(rng.unit(), radices.clone()).unwrap();
            let b = DigitPoint::from_f64(rng.unit(), radices.clone()).unwrap();
            assert_eq!(
                as_int(&a.add_mod1(&b).unwrap()),
                (as_int(&a) + as_int(&b)) % modulus
            );
            assert_eq!(
                as_int(&a.sub_mod1(&b).unwrap()),
                (as_int(&a) + modulus - as_int(&b)) % modulus
            );
            assert_eq!(a.add_mod1(&b).unwrap().sub_mod1(&b).unwrap(), a);
        }
        let x = DigitPoint::from_f64(0.625, vec![2; 4]).unwrap();
        assert_eq!(x.to_string(), "b2:1010");
        assert_eq!(x.value(), 0.625);
        assert_eq!(
            DigitPoint::new(vec![1, 12], vec![4, 13])
                .unwrap()
                .to_string(),
            "mixed:1/4,12/13"
        );
        assert!(DigitPoint::new(vec![2], vec![2]).is_err());
        assert!(x.add_mod1(&DigitPoint::zero(vec![3; 4])).is_err());
    }
}
