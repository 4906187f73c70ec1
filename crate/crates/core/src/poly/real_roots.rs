//! Real roots of integer polynomials by Sturm sequences and exact bisection.
//!
//! The polynomial is split into squarefree factors; each factor's roots are
//! isolated by Sturm sign counts at dyadic points and then bisected, all
//! evaluations being exact.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive};

use super::intpoly::IntPolynomial;
use crate::{Error, Result};

/// Bisection stops once the isolating interval is narrower than `2^-REFINE_BITS`.
const REFINE_BITS: u32 = 44;

/// Real roots with multiplicity, ascending.
pub fn real_roots(p: &IntPolynomial) -> Result<Vec<f64>> {
    let degree = p
        .degree()
        .ok_or_else(|| Error::invalid("the zero polynomial has no root set"))?;
    let mut roots = Vec::with_capacity(degree);
    for (i, f) in p.squarefree_factors().iter().enumerate() {
        let Some(fd) = f.degree() else { continue };
        if fd == 0 {
            continue;
        }
        let found = squarefree_real_roots(f)?;
        if found.len() != fd {
            return Err(Error::Numerical(format!(
                "Sturm count found {} real roots of a squarefree factor of degree {fd}",
                found.len()
            )));
        }
        for r in found {
            roots.extend(std::iter::repeat_n(r, i + 1));
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

struct Sturm {
    seq: Vec<IntPolynomial>,
}

impl Sturm {
    fn new(f: &IntPolynomial) -> Sturm {
        let mut seq = vec![f.clone(), f.derivative().primitive()];
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let mut r = a.pseudo_rem(b);
            // pseudo-division multiplies by lc(b)^e; undo a negative factor
            let e = a.degree().unwrap_or(0) + 1 - b.degree().unwrap_or(0);
            if b.leading().is_negative() && e % 2 == 1 {
                r = r.neg();
            }
            if r.is_zero() {
                break;
            }
            let g = r.content();
            let r = IntPolynomial::new(r.coeffs().iter().map(|c| -(c / &g)).collect());
            seq.push(r);
        }
        Sturm { seq }
    }

    /// Sign changes at `a / 2^k`, zeros skipped.
    fn variations(&self, a: &BigInt, k: u32) -> usize {
        let mut last = Sign::NoSign;
        let mut count = 0;
        for p in &self.seq {
            let s = p.sign_at_dyadic(a, k);
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }
}

/// Dyadic interval `(lo, hi] / 2^k`.
#[derive(Clone)]
struct Interval {
    lo: BigInt,
    hi: BigInt,
    k: u32,
}

impl Interval {
    fn refine(&self) -> (Interval, Interval, BigInt) {
        let lo = &self.lo << 1;
        let hi = &self.hi << 1;
        let mid: BigInt = (&lo + &hi) >> 1;
        let k = self.k + 1;
        (
            Interval {
                lo,
                hi: mid.clone(),
                k,
            },
            Interval {
                lo: mid.clone(),
                hi: &self.hi << 1,
                k,
            },
            mid,
        )
    }
}

fn squarefree_real_roots(f: &IntPolynomial) -> Result<Vec<f64>> {
    let sturm = Sturm::new(f);
    // Cauchy bound 1 + max |c_i / c_n|, rounded up to a power of two
    let lead = f.leading().abs();
    let ratio = f
        .coeffs()
        .iter()
        .map(|c| (c.abs() + &lead - 1u32) / &lead)
        .max()
        .unwrap_or_default();
    let bound_bits = (ratio + 1u32).bits() as u32 + 1;
    let root = Interval {
        lo: -(BigInt::from(1) << bound_bits as usize),
        hi: BigInt::from(1) << bound_bits as usize,
        k: 0,
    };
    let mut isolated = Vec::new();
    let mut stack = vec![(root.clone(), count(&sturm, &root))];
    while let Some((iv, c)) = stack.pop() {
        match c {
            0 => {}
            1 => isolated.push(iv),
            _ => {
                let (left, right, _) = iv.refine();
                let cl = count(&sturm, &left);
                if c < cl {
                    return Err(Error::Numerical("inconsistent Sturm counts".into()));
                }
                stack.push((right, c - cl));
                stack.push((left, cl));
            }
        }
    }
    let mut roots: Vec<f64> = isolated.into_iter().map(|iv| bisect(f, iv)).collect();
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

fn count(sturm: &Sturm, iv: &Interval) -> usize {
    sturm
        .variations(&iv.lo, iv.k)
        .saturating_sub(sturm.variations(&iv.hi, iv.k))
}

fn dyadic_to_f64(a: &BigInt, k: u32) -> f64 {
    let bits = a.bits();
    if bits > 1000 {
        let shift = bits - 64;
        let top = (a >> shift).to_f64().unwrap_or(f64::NAN);
        return top * 2f64.powi(shift as i32 - k as i32);
    }
    a.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(k as i32))
}

/// Narrows an interval holding exactly one simple root by sign bisection.
fn bisect(f: &IntPolynomial, mut iv: Interval) -> f64 {
    if f.sign_at_dyadic(&iv.hi, iv.k) == Sign::NoSign {
        return dyadic_to_f64(&iv.hi, iv.k);
    }
    let width_bits = |iv: &Interval| (&iv.hi - &iv.lo).bits() as i64 - iv.k as i64;
    while width_bits(&iv) > -(REFINE_BITS as i64) {
        let hi_sign = f.sign_at_dyadic(&iv.hi, iv.k);
        let (left, right, mid) = iv.refine();
        let s = f.sign_at_dyadic(&mid, left.k);
        if s == Sign::NoSign {
            return dyadic_to_f64(&mid, left.k);
        }
        iv = if s == hi_sign { left } else { right };
    }
    let sum: BigInt = &iv.lo + &iv.hi;
    dyadic_to_f64(&sum, iv.k + 1)
}
