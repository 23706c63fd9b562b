//! Small dense vector helpers for dimensions up to 4.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn scale(a: &[f64], t: f64) -> Vec<f64> {
    a.iter().map(|x| x * t).collect()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .expect("nonempty");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            if f != 0.0 {
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    d
}

/// A vector orthogonal to `k-1` vectors in `R^k` (generalized cross
/// product via cofactors). Its norm equals the `(k-1)`-volume of the
/// parallelotope they span.
pub(crate) fn cross(vectors: &[Vec<f64>]) -> Vec<f64> {
    let k = vectors.len() + 1;
    (0..k)
        .map(|i| {
            let minor: Vec<Vec<f64>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect())
                .collect();
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let d = if minor.is_empty() { 1.0 } else { det(&minor) };
            sign * d
        })
        .collect()
}

/// Extends `basis` (orthonormal) by Gram-Schmidt with `v`; returns the new
/// unit vector when the residual is longer than `tol`.
pub(crate) fn orthonormal_extend(basis: &[Vec<f64>], v: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut r = v.to_vec();
    // two passes for stability
    for _ in 0..2 {
        for b in basis {
            let c = dot(&r, b);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let n = norm(&r);
    (n > tol).then(|| scale(&r, 1.0 / n))
}

/// Distance from `v` to the span of an orthonormal `basis`.
pub(crate) fn residual_norm(basis: &[Vec<f64>], v: &[f64]) -> f64 {
    let mut r = v.to_vec();
    for b in basis {
        let c = dot(&r, b);
        for (x, y) in r.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
    norm(&r)
}

/// Orthonormal basis of the orthogonal complement of an orthonormal set in `R^d`.
pub(crate) fn complement(basis: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let mut full = basis.to_vec();
    let mut out = Vec::new();
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        if let Some(u) = orthonormal_extend(&full, &e, 1e-8) {
            full.push(u.clone());
            out.push(u);
        }
        if full.len() == d {
            break;
        }
    }
    out
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        assert_eq!(det(&[vec![2.0]]), 2.0);
        assert!((det(&[vec![1.0, 2.0], vec![3.0, 4.0]]) + 2.0).abs() < 1e-15);
        let m = vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 3.0]];
        assert!((det(&m) + 3.0).abs() < 1e-15);
    }

    #[test]
    fn cross_is_orthogonal() {
        let a = vec![1.0, 2.0, 0.5, -1.0];
        let b = vec![0.0, 1.0, 3.0, 2.0];
        let c = vec![2.0, -1.0, 1.0, 0.0];
        let n = cross(&[a.clone(), b.clone(), c.clone()]);
        for v in [&a, &b, &c] {
            assert!(dot(&n, v).abs() < 1e-12);
        }
        assert_eq!(cross(&[vec![1.0, 0.0]]), vec![0.0, -1.0]);
    }

    #[test]
    fn complement_dims() {
        let b = vec![vec![1.0, 0.0, 0.0, 0.0]];
        let c = complement(&b, 4);
        assert_eq!(c.len(), 3);
        for u in &c {
            assert!(dot(u, &b[0]).abs() < 1e-14);
        }
    }
}
