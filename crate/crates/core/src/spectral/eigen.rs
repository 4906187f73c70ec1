//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by implicit-shift QL iteration.
//!
//! The matrix is stored row-major and only its lower triangle is read or
//! updated during the reduction.

use crate::scalar::Real;
use crate::{Error, Result};

/// Eigenvalues (ascending order not guaranteed) and, if requested, the
/// eigenvectors as rows.
pub(crate) struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: Option<Vec<Vec<T>>>,
}

/// Dot product with four independent accumulators so the loop vectorizes.
fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let (xc, yc) = (x.chunks_exact(4), y.chunks_exact(4));
    let (xr, yr) = (xc.remainder(), yc.remainder());
    for (a, b) in xc.zip(yc) {
        for l in 0..4 {
            acc[l] += a[l] * b[l];
        }
    }
    let mut tail = T::zero();
    for (&a, &b) in xr.iter().zip(yr) {
        tail += a * b;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Applies the pending rank-two update `S -= v q^T + q v^T` of the block
/// starting at `s` to the lower-triangle entries in columns `from..`.
fn apply_update<T: Real>(a: &mut [T], n: usize, s: usize, v: &[T], q: &[T], from: usize) {
    for i in from..n {
        let (vi, qi) = (v[i - s], q[i - s]);
        let row = &mut a[i * n + from..i * n + i + 1];
        for ((x, &vj), &qj) in row.iter_mut().zip(&v[from - s..]).zip(&q[from - s..]) {
            *x -= vi * qj + qi * vj;
        }
    }
}

/// Reduces the symmetric matrix `a` (n x n, row-major, lower triangle used) to
/// tridiagonal form. Returns the diagonal, the subdiagonal (`off[i]` couples
/// `i` and `i+1`) and, if requested, `Q^T` as rows so that `A = Q T Q^T`.
///
/// The rank-two update of each step is deferred and fused with the
/// matrix-vector product of the next step, so the trailing block is streamed
/// through memory once per step.
fn tridiagonalize<T: Real>(
    a: &mut [T],
    n: usize,
    want_q: bool,
) -> (Vec<T>, Vec<T>, Option<Vec<Vec<T>>>) {
    let mut off = vec![T::zero(); n.saturating_sub(1)];
    let mut reflectors: Vec<(usize, Vec<T>)> = Vec::new();
    let mut pending: Option<(usize, Vec<T>, Vec<T>)> = None;
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let two = T::one() + T::one();
    for k in 0..n.saturating_sub(2) {
        if let Some((s, pv, pq)) = &pending {
            for i in k..n {
                a[i * n + k] -= pv[i - s] * pq[k - s] + pq[i - s] * pv[k - s];
            }
        }
        let start = k + 1;
        let m = n - start;
        for i in 0..m {
            v[i] = a[(start + i) * n + k];
        }
        let tail: T = v[1..m].iter().map(|&x| x * x).sum();
        if tail == T::zero() {
            off[k] = v[0];
            if let Some((s, pv, pq)) = pending.take() {
                apply_update(a, n, s, &pv, &pq, start);
            }
            continue;
        }
        let norm = (v[0] * v[0] + tail).sqrt();
        let alpha = if v[0] > T::zero() { -norm } else { norm };
        off[k] = alpha;
        v[0] -= alpha;
        let vnorm = (v[0] * v[0] + tail).sqrt();
        for x in v[..m].iter_mut() {
            *x = *x / vnorm;
        }
        // p = 2 S v over the lower triangle, applying the deferred update first
        for x in p[..m].iter_mut() {
            *x = T::zero();
        }
        let prev = pending.take();
        for i in 0..m {
            let row = &mut a[(start + i) * n + start..(start + i) * n + start + i + 1];
            if let Some((s, pv, pq)) = &prev {
                let off_i = start + i - s;
                let (vi, qi) = (pv[off_i], pq[off_i]);
                let base = start - s;
                for ((x, &vj), &qj) in row.iter_mut().zip(&pv[base..]).zip(&pq[base..]) {
                    *x -= vi * qj + qi * vj;
                }
            }
            let vi = v[i];
            let acc = dot(&row[..i], &v[..i]);
            for (&aij, pj) in row[..i].iter().zip(p[..i].iter_mut()) {
                *pj += aij * vi;
            }
            p[i] += acc + row[i] * vi;
        }
        for x in p[..m].iter_mut() {
            *x *= two;
        }
        let kappa = v[..m].iter().zip(&p[..m]).map(|(&x, &y)| x * y).sum::<T>();
        for i in 0..m {
            p[i] -= kappa * v[i];
        }
        pending = Some((start, v[..m].to_vec(), p[..m].to_vec()));
        if want_q {
            reflectors.push((start, v[..m].to_vec()));
        }
    }
    if let Some((s, pv, pq)) = pending.take() {
        apply_update(a, n, s, &pv, &pq, s);
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    let q = want_q.then(|| {
        let mut qt: Vec<Vec<T>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        for (start, v) in &reflectors {
            let mut w = vec![T::zero(); n];
            for (i, &vi) in v.iter().enumerate() {
                for (wj, &x) in w.iter_mut().zip(&qt[start + i]) {
                    *wj += vi * x;
                }
            }
            for (i, &vi) in v.iter().enumerate() {
                for (x, &wj) in qt[start + i].iter_mut().zip(&w) {
                    *x -= two * vi * wj;
                }
            }
        }
        qt
    });
    (diag, off, q)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. Rows of `z`, if
/// given, are rotated alongside so they end up as eigenvectors.
fn tridiagonal_ql<T: Real>(d: &mut [T], off: &[T], mut z: Option<&mut Vec<Vec<T>>>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let mut e: Vec<T> = off.to_vec();
    e.push(T::zero());
    let budget = 64 * n.max(1);
    let mut iterations = 0usize;
    let eps = T::epsilon();
    let two = T::one() + T::one();
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > budget {
                return Err(Error::Numerical(format!(
                    "QL iteration exceeded {budget} steps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut deflated_early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut(i + 1);
                    let (zi, zi1) = (&mut lo[i], &mut hi[0]);
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
            }
            if deflated_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

pub(crate) fn symmetric_eigen<T: Real>(
    mut a: Vec<T>,
    n: usize,
    want_vectors: bool,
) -> Result<Eigen<T>> {
    if a.len() != n * n {
        return Err(Error::invalid("matrix storage does not match dimension"));
    }
    let (mut d, off, q) = tridiagonalize(&mut a, n, want_vectors);
    let mut z = q;
    tridiagonal_ql(&mut d, &off, z.as_mut())?;
    Ok(Eigen {
        values: d,
        vectors: z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[f64]]) -> Vec<f64> {
        rows.iter().flat_map(|r| r.iter().copied()).collect()
    }

    #[test]
    fn small_matrices() {
        let a = dense(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let mut e = symmetric_eigen(a, 2, false).unwrap().values;
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
        let one = symmetric_eigen(vec![5.0], 1, true).unwrap();
        assert_eq!(one.values, vec![5.0]);
        assert!(symmetric_eigen(Vec::<f64>::new(), 0, true)
            .unwrap()
            .values
            .is_empty());
    }

    #[test]
    fn vectors_diagonalize() {
        let n = 7;
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x =
                    ((i * 7 + j * 3) % 5) as f64 - 2.0 + if i == j { 0.5 * i as f64 } else { 0.0 };
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let eig = symmetric_eigen(a.clone(), n, true).unwrap();
        let vecs = eig.vectors.unwrap();
        for (lam, v) in eig.values.iter().zip(&vecs) {
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
                assert!((av - lam * v[i]).abs() < 1e-12);
            }
        }
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        assert!((eig.values.iter().sum::<f64>() - trace).abs() < 1e-12);
    }
}
