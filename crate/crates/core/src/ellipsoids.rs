//! Centered ellipsoids encoded by a positive-semidefinite quadratic form.
//!
//! The body described by `Q` is `Q^{1/2}·B`, the image of the unit ball
//! under the symmetric square root, with support function `h(x) = sqrt(xᵀQx)`.
//! Working with the form rather than semiaxes keeps degenerate ellipsoids
//! (segments, points) first-class.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::convex::{convex_hull, Body, Polytope, SupportFunction};
use crate::error::{Error, Result};
use crate::kac::{beta_n, sigma_n};
use crate::mc::{map_chunks, sample_rng, Estimate, Moments};
use crate::spectra::Spectrum;

pub const MAX_DIM: usize = 4;
pub const MIN_SAMPLES: usize = 10_000;
const PSD_TOL: f64 = 1e-12;
const DET_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EllipsoidJson", into = "EllipsoidJson")]
pub struct Ellipsoid {
    dim: usize,
    form: Vec<Vec<f64>>,
}

/// Wire form: `{"dim": n, "form": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EllipsoidJson {
    pub dim: usize,
    pub form: Vec<Vec<f64>>,
}

impl TryFrom<EllipsoidJson> for Ellipsoid {
    type Error = Error;

    fn try_from(v: EllipsoidJson) -> Result<Self> {
        if v.form.len() != v.dim {
            return Err(Error::DimensionMismatch { expected: v.dim, found: v.form.len() });
        }
        Ellipsoid::new(v.form)
    }
}

impl From<Ellipsoid> for EllipsoidJson {
    fn from(e: Ellipsoid) -> Self {
        EllipsoidJson { dim: e.dim, form: e.form }
    }
}

impl Ellipsoid {
    /// Validates symmetry and semidefiniteness; eigenvalues in
    /// `[-1e-12·scale, 0)` are clamped to zero.
    pub fn new(form: Vec<Vec<f64>>) -> Result<Self> {
        let n = form.len();
        if n == 0 {
            return Err(Error::Empty("quadratic form"));
        }
        if let Some(row) = form.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        if form.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite entry in quadratic form"));
        }
        let scale = form.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in 0..i {
                if (form[i][j] - form[j][i]).abs() > PSD_TOL * scale {
                    return Err(Error::invalid("quadratic form is not symmetric"));
                }
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (form[i][j] + form[j][i]));
        let eig = SymmetricEigen::new(m.clone());
        if eig.eigenvalues.iter().any(|&l| l < -PSD_TOL * scale) {
            return Err(Error::invalid("quadratic form is not positive semidefinite"));
        }
        let form = if eig.eigenvalues.iter().any(|&l| l < 0.0) {
            let clamped = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| l.max(0.0)));
            let q = &eig.eigenvectors * DMatrix::from_diagonal(&clamped) * eig.eigenvectors.transpose();
            to_rows(&q)
        } else {
            to_rows(&m)
        };
        Ok(Ellipsoid { dim: n, form })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Ellipsoid::new((0..n).map(|i| (0..n).map(|j| if i == j { diag[i] } else { 0.0 }).collect()).collect())
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Ellipsoid::from_diagonal(&vec![radius * radius; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &[Vec<f64>] {
        &self.form
    }

    fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.form[i][j])
    }

    /// Symmetric square root `Q^{1/2}`.
    pub fn sqrt_form(&self) -> DMatrix<f64> {
        let eig = SymmetricEigen::new(self.matrix());
        let root = DVector::from_iterator(self.dim, eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()));
        &eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose()
    }

    pub fn determinant(&self) -> f64 {
        let d = self.matrix().determinant();
        if d < DET_FLOOR {
            0.0
        } else {
            d
        }
    }

    pub fn is_zero(&self) -> bool {
        self.form.iter().flatten().all(|&x| x == 0.0)
    }

    /// The ellipsoid `t·E` (form scaled by `t²`).
    pub fn scaled(&self, t: f64) -> Ellipsoid {
        Ellipsoid {
            dim: self.dim,
            form: self.form.iter().map(|r| r.iter().map(|x| x * t * t).collect()).collect(),
        }
    }

    /// Inscribed polygon through `Q^{1/2}(cos t_j, sin t_j)`; planar only.
    pub fn polygon(&self, vertices: usize) -> Result<Polytope> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.dim });
        }
        let a = self.sqrt_form();
        let pts: Vec<Vec<f64>> = (0..vertices)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / vertices as f64;
                let v = &a * DVector::from_vec(vec![t.cos(), t.sin()]);
                vec![v[0], v[1]]
            })
            .collect();
        convex_hull(&pts)
    }
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl SupportFunction for Ellipsoid {
    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn support(&self, x: &[f64]) -> f64 {
        let mut q = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                q += x[i] * self.form[i][j] * x[j];
            }
        }
        q.max(0.0).sqrt()
    }
}

/// Newton ellipsoid of a spectrum: `Q = (1/#Λ) Σ λλᵀ`.
///
/// The formula is evaluated for any spectrum; the real-root theorems that
/// use it assume central symmetry, which callers check separately.
pub fn newton_ellipsoid(s: &Spectrum) -> Result<Ellipsoid> {
    if s.is_empty() {
        return Err(Error::Empty("spectrum"));
    }
    let n = s.dim();
    let mut q = vec![vec![0.0; n]; n];
    for p in s.points() {
        for i in 0..n {
            for j in 0..n {
                q[i][j] += (p[i] * p[j]) as f64;
            }
        }
    }
    let inv = 1.0 / s.len() as f64;
    for row in q.iter_mut() {
        for x in row.iter_mut() {
            *x *= inv;
        }
    }
    Ellipsoid::new(q)
}

/// Ellipsoid of a convex body: `Q = E[x xᵀ]` for `x` uniform on the body
/// (uniform with respect to the volume of its affine hull).
///
/// Balls use the closed form `r²·(σ_{n-1}/σ_n)·β_n·I`; polytopes are
/// integrated exactly over a simplex decomposition. Lower-dimensional
/// polytopes must lie in a linear subspace spanned by lattice vectors.
pub fn body_ellipsoid(body: &Body) -> Result<Ellipsoid> {
    match body {
        Body::Ball { dim, radius } => {
            if *dim == 0 {
                return Err(Error::invalid("dimension must be >= 1"));
            }
            let n = *dim as u32;
            let c = sigma_n(n - 1) / sigma_n(n) * beta_n(n);
            Ellipsoid::ball(*dim, radius * c.sqrt())
        }
        Body::Polytope(p) => {
            if p.is_degenerate() {
                if p.affine_dim() == 0 && p.vertices()[0].iter().any(|&x| x != 0.0) {
                    return Err(Error::Degenerate("a point body must be the origin".into()));
                }
                p.exact_region()?;
            }
            Ellipsoid::new(p.second_moment())
        }
    }
}

/// Monte Carlo estimate of the body ellipsoid by rejection sampling in the
/// bounding box. Full-dimensional bodies only.
#[derive(Debug, Clone)]
pub struct SampledEllipsoid {
    pub ellipsoid: Ellipsoid,
    /// Largest standard error over the form entries.
    pub stderr: f64,
    pub accepted: usize,
}

pub fn body_ellipsoid_mc(body: &Body, samples: usize, seed: u64) -> Result<SampledEllipsoid> {
    let n = body.dim();
    let (lo, hi, inside): (Vec<f64>, Vec<f64>, Box<dyn Fn(&[f64]) -> bool + Sync>) = match body {
        Body::Ball { dim, radius } => {
            let r = *radius;
            (vec![-r; *dim], vec![r; *dim], Box::new(move |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>() <= r * r))
        }
        Body::Polytope(p) => {
            if p.is_degenerate() {
                return Err(Error::Degenerate("sampling needs a full-dimensional body".into()));
            }
            let (lo, hi) = p.bounding_box();
            let p = p.clone();
            (
                lo,
                hi,
                Box::new(move |x: &[f64]| {
                    let y = p.project(x);
                    p.facets().iter().all(|f| crate::linalg::dot(&f.normal, &y) <= f.offset)
                }),
            )
        }
    };
    let parts = map_chunks(samples, |range| {
        let mut acc = vec![Moments::default(); n * n];
        for i in range {
            let mut rng = sample_rng(seed, i as u64);
            let x: Vec<f64> = (0..n).map(|c| Uniform::new_inclusive(lo[c], hi[c]).unwrap().sample(&mut rng)).collect();
            if inside(&x) {
                for a in 0..n {
                    for b in 0..n {
                        acc[a * n + b].push(x[a] * x[b]);
                    }
                }
            }
        }
        acc
    });
    let mut acc = vec![Moments::default(); n * n];
    for part in parts {
        for (a, p) in acc.iter_mut().zip(part) {
            *a = a.merge(p);
        }
    }
    if acc[0].n < 2 {
        return Err(Error::Numeric("too few accepted samples".into()));
    }
    let form: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| acc[a * n + b].mean()).collect()).collect();
    let stderr = acc.iter().map(|m| m.estimate(seed).stderr).fold(0.0, f64::max);
    Ok(SampledEllipsoid { ellipsoid: Ellipsoid::new(form)?, stderr, accepted: acc[0].n })
}

/// `σ_n·sqrt(det Q)`; zero for singular forms.
pub fn ellipsoid_volume(e: &Ellipsoid) -> f64 {
    sigma_n(e.dim() as u32) * e.determinant().sqrt()
}

/// Mixed volume of `n` centered ellipsoids in `R^n` by the Gaussian
/// determinant estimator
///
/// `V(E_1, ..., E_n) ≈ σ_n · E|det(A_1g_1, ..., A_ng_n)| / E|det(g_1, ..., g_n)|`
///
/// with `A_i = Q_i^{1/2}` and independent standard Gaussian `g_i`. Both
/// expectations use the same sample stream; the reported standard error is
/// the delta-method error of the ratio. For balls the ratio is `Π r_i` in
/// every sample.
pub fn mixed_volume_ellipsoids(es: &[Ellipsoid], samples: usize, seed: u64) -> Result<Estimate> {
    let n = es.len();
    if n == 0 {
        return Err(Error::Empty("ellipsoid list"));
    }
    if n > MAX_DIM {
        return Err(Error::UnsupportedDimension { dim: n, max: MAX_DIM });
    }
    if let Some(e) = es.iter().find(|e| e.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: e.dim() });
    }
    if es.iter().all(Ellipsoid::is_zero) {
        return Ok(Estimate::exact(0.0, seed));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::invalid(format!("need at least {MIN_SAMPLES} samples")));
    }
    let roots: Vec<DMatrix<f64>> = es.iter().map(Ellipsoid::sqrt_form).collect();

    #[derive(Default, Clone, Copy)]
    struct Acc {
        x: f64,
        y: f64,
        xx: f64,
        yy: f64,
        xy: f64,
    }
    let parts = map_chunks(samples, |range| {
        let mut a = Acc::default();
        let mut g = DMatrix::<f64>::zeros(n, n);
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in range {
            let mut rng = sample_rng(seed, i as u64);
            for c in 0..n {
                for r in 0..n {
                    g[(r, c)] = StandardNormal.sample(&mut rng);
                }
            }
            for c in 0..n {
                let col = &roots[c] * g.column(c);
                m.set_column(c, &col);
            }
            let x = m.determinant().abs();
            let y = g.determinant().abs();
            a.x += x;
            a.y += y;
            a.xx += x * x;
            a.yy += y * y;
            a.xy += x * y;
        }
        a
    });
    let t = parts.into_iter().fold(Acc::default(), |s, p| Acc {
        x: s.x + p.x,
        y: s.y + p.y,
        xx: s.xx + p.xx,
        yy: s.yy + p.yy,
        xy: s.xy + p.xy,
    });
    let nf = samples as f64;
    let (mx, my) = (t.x / nf, t.y / nf);
    let ratio = mx / my;
    let var_x = (t.xx / nf - mx * mx) * nf / (nf - 1.0);
    let var_y = (t.yy / nf - my * my) * nf / (nf - 1.0);
    let cov = (t.xy / nf - mx * my) * nf / (nf - 1.0);
    let var_r = ((var_x - 2.0 * ratio * cov + ratio * ratio * var_y) / (my * my * nf)).max(0.0);
    let s = sigma_n(n as u32);
    Ok(Estimate { mean: s * ratio, stderr: s * var_r.sqrt(), n_samples: samples, seed })
}
