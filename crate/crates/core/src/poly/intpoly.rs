//! Dense polynomials with big-integer coefficients.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPolynomial::new(vec![c])
    }

    /// `c x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        IntPolynomial::new(coeffs)
    }

    /// `x - a`.
    pub fn linear_root(a: i64) -> Self {
        IntPolynomial::from_i64(&[-a, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = IntPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Value at a Gaussian integer `re + im i`, as (real, imaginary) parts.
    pub fn eval_gaussian(&self, re: &BigInt, im: &BigInt) -> (BigInt, BigInt) {
        let (mut a, mut b) = (BigInt::zero(), BigInt::zero());
        for c in self.coeffs.iter().rev() {
            let na = &a * re - &b * im + c;
            let nb = &a * im + &b * re;
            a = na;
            b = nb;
        }
        (a, b)
    }

    /// Sign of the value at the dyadic point `a / 2^k`.
    pub fn sign_at_dyadic(&self, a: &BigInt, k: u32) -> Sign {
        let Some(n) = self.degree() else {
            return Sign::NoSign;
        };
        // 2^(kn) p(a / 2^k) = sum c_j a^j 2^(k(n-j))
        let mut scaled = BigInt::zero();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            scaled = scaled * a + (c << (k as usize * (n - j)));
        }
        scaled.sign()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + c.to_f64().unwrap_or(f64::NAN)
            })
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) a mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut r = self.clone();
        let mut steps = (self.degree().unwrap_or(0) + 1).saturating_sub(dd);
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = IntPolynomial::monomial(r.leading(), rd - dd);
            r = r.scale(&lc).sub(&shift.mul(d));
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lc, steps));
        }
        r
    }

    /// Exact quotient; `None` if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lc = d.leading();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                return None;
            }
            let (c, rem) = r.leading().div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            let term = IntPolynomial::monomial(c.clone(), rd - dd);
            q[rd - dd] = c;
            r = r.sub(&term.mul(d));
        }
        Some(IntPolynomial::new(q))
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        a.primitive()
    }

    /// Squarefree decomposition `p = c * prod f_i^i`; entry `i - 1` is `f_i`
    /// (primitive, possibly constant 1).
    pub fn squarefree_factors(&self) -> Vec<IntPolynomial> {
        let p = self.primitive();
        if p.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let dp = p.derivative();
        let a = p.gcd(&dp);
        let mut b = p.div_exact(&a).expect("gcd divides");
        let mut c = dp.div_exact(&a).expect("gcd divides derivative");
        let mut out = Vec::new();
        loop {
            let d = c.sub(&b.derivative());
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let f = b.gcd(&d);
            out.push(f.clone());
            b = b.div_exact(&f).expect("factor divides");
            c = d.div_exact(&f).expect("factor divides");
        }
        out
    }

    /// Power sums `p_k = sum of r^k` over the roots, `k = 1..=count`, by Newton's
    /// identities; exact for monic polynomials.
    pub fn power_sums(&self, count: usize) -> Vec<BigInt> {
        let n = self.degree().unwrap_or(0);
        let lead = self.leading();
        assert!(lead.abs().is_one(), "power sums need a monic polynomial");
        // e_j as signed coefficients: p(x) = sum_j (-1)^j e_j x^(n-j) times lead
        let e: Vec<BigInt> = (0..=n)
            .map(|j| {
                let c = self.coeff(n - j) * &lead;
                if j % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let mut p: Vec<BigInt> = Vec::with_capacity(count + 1);
        p.push(BigInt::from(n));
        for k in 1..=count {
            let mut s = BigInt::zero();
            for i in 1..k {
                let ei = if i <= n { e[i].clone() } else { BigInt::zero() };
                let term = ei * &p[k - i];
                if (i - 1) % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            if k <= n {
                let term = &e[k] * BigInt::from(k);
                if (k - 1) % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            p.push(s);
        }
        p.remove(0);
        p
    }

    /// Decimal coefficient strings, ascending degree.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint_abs(x: &BigInt) -> f64 {
    ln_biguint(x.magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        assert_eq!(a.pow(3), p(&[-1, 3, -3, 1]));
        assert_eq!(p(&[-1, 0, 1]).div_exact(&a), Some(b.clone()));
        assert_eq!(p(&[1, 0, 1]).div_exact(&a), None);
        assert_eq!(a.add(&b), p(&[0, 2]));
        assert_eq!(p(&[0, 0, 0]).degree(), None);
        assert_eq!(p(&[1, -3, 0, 1]).to_string(), "x^3 - 3x + 1");
        assert_eq!(
            p(&[0, -3, 0, 1]).to_json(),
            serde_json::json!(["0", "-3", "0", "1"])
        );
    }

    #[test]
    fn gcd_and_squarefree() {
        let x1 = p(&[-1, 1]);
        let x2 = p(&[-2, 1]);
        let f = x1.pow(3).mul(&x2).mul(&p(&[1, 0, 1]).pow(2));
        let sq = f.squarefree_factors();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq[0], x2);
        assert_eq!(sq[1], p(&[1, 0, 1]));
        assert_eq!(sq[2], x1);
        assert_eq!(
            x1.pow(2).mul(&x2).gcd(&x1.mul(&x2).pow(2)),
            x1.pow(2).mul(&x2)
        );
        assert_eq!(x1.mul(&x2).gcd(&x1.pow(3)), x1);
    }

    #[test]
    fn dyadic_signs() {
        let f = p(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(f.sign_at_dyadic(&BigInt::from(3), 1), Sign::Plus); // 1.5
        assert_eq!(f.sign_at_dyadic(&BigInt::from(5), 2), Sign::Minus); // 1.25
        assert_eq!(
            p(&[-1, 4]).sign_at_dyadic(&BigInt::from(1), 2),
            Sign::NoSign
        );
    }

    #[test]
    fn newton_power_sums() {
        // roots 1, 2, 3
        let f = p(&[-6, 11, -6, 1]);
        let s = f.power_sums(4);
        assert_eq!(
            s,
            vec![6, 14, 36, 98]
                .into_iter()
                .map(BigInt::from)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn big_logs() {
        let x = BigUint::from(10u32).pow(400);
        assert!((ln_biguint(&x) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_biguint(&BigUint::from(7u32)) - 7f64.ln()).abs() < 1e-15);
    }
}
