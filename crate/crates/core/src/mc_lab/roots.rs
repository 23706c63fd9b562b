//! Real roots of trigonometric polynomials on the circle and of pairs of
//! them on the 2-torus.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Vector2};

use super::trig::TrigPolynomial;
use crate::error::{Error, Result};

/// Default oversampling: grid points per unit of degree.
pub const GRID_FACTOR: usize = 16;
const BISECT_TOL: f64 = 1e-12;
/// Halvings of a grid cell before falling back to its sign change.
const MAX_DEPTH_1D: u32 = 56;

/// Roots in `[0, 2π)`. The circle is cut into `grid_factor·max(deg, 1)`
/// cells; each cell is either excluded by a Taylor bound, shown monotone
/// (then its sign change decides) or halved. Close root pairs are therefore
/// not lost between grid points, and the count does not depend on the grid
/// except for roots of even order.
pub fn real_roots_1d_with_grid(f: &TrigPolynomial, grid_factor: usize) -> Result<Vec<f64>> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.dim() });
    }
    if f.is_zero() {
        return Err(Error::invalid("polynomial is identically zero"));
    }
    if grid_factor == 0 {
        return Err(Error::invalid("grid factor must be positive"));
    }
    let n = grid_factor * (f.degree().ceil() as usize).max(1);
    let at = |j: usize| TAU * j as f64 / n as f64;
    let vals: Vec<f64> = (0..n).map(|j| f.eval(&[at(j)])).collect();
    let m2 = f.curvature_bound();
    let mut roots = Vec::new();
    for j in 0..n {
        isolate_1d(f, m2, (at(j), vals[j]), (at(j + 1), vals[(j + 1) % n]), 0, &mut roots);
    }
    Ok(roots.into_iter().map(|r| r.rem_euclid(TAU)).collect())
}

/// Roots in `[a, b)` given the endpoint values.
fn isolate_1d(f: &TrigPolynomial, m2: f64, (a, fa): (f64, f64), (b, fb): (f64, f64), depth: u32, out: &mut Vec<f64>) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let (fc, g) = f.eval_grad(&[c]);
    let d = g[0].abs();
    if fc.abs() > d * h + 0.5 * m2 * h * h {
        return;
    }
    if d > m2 * h || depth >= MAX_DEPTH_1D {
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            out.push(bisect(f, a, b, fa));
        }
        return;
    }
    isolate_1d(f, m2, (a, fa), (c, fc), depth + 1, out);
    isolate_1d(f, m2, (c, fc), (b, fb), depth + 1, out);
}

fn bisect(f: &TrigPolynomial, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f.eval(&[mid]);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn real_roots_1d(f: &TrigPolynomial) -> Result<Vec<f64>> {
    real_roots_1d_with_grid(f, GRID_FACTOR)
}

pub fn count_real_roots_1d(f: &TrigPolynomial) -> Result<usize> {
    Ok(real_roots_1d(f)?.len())
}

/// Common roots on the 2-torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusRoots {
    /// False when the frequencies of both polynomials lie on one line; the
    /// common zero set is then a union of curves or empty, and no roots are
    /// reported.
    pub generic: bool,
    pub roots: Vec<[f64; 2]>,
    /// Cells examined by the subdivision.
    pub cells: usize,
}

impl TorusRoots {
    pub fn count(&self) -> usize {
        self.roots.len()
    }
}

pub const MAX_DEPTH: u32 = 40;
pub const MAX_CELLS: usize = 2_000_000;
const DEDUP_TOL: f64 = 1e-6;

fn spans_plane(f1: &TrigPolynomial, f2: &TrigPolynomial) -> bool {
    let freqs: Vec<&[f64]> = f1
        .terms()
        .chain(f2.terms())
        .filter(|(l, a, b)| (*a != 0.0 || *b != 0.0) && l.iter().any(|&x| x != 0.0))
        .map(|(l, _, _)| l)
        .collect();
    freqs.iter().any(|u| freqs.iter().any(|v| u[0] * v[1] - u[1] * v[0] != 0.0))
}

fn torus_dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (0..2)
        .map(|i| {
            let d = (a[i] - b[i]).rem_euclid(TAU);
            d.min(TAU - d)
        })
        .fold(0.0, f64::max)
}

struct System<'a> {
    f: [&'a TrigPolynomial; 2],
    curv: [f64; 2],
    scale: f64,
}

impl System<'_> {
    fn eval(&self, x: &[f64; 2]) -> (Vector2<f64>, Matrix2<f64>) {
        let (v1, g1) = self.f[0].eval_grad(x);
        let (v2, g2) = self.f[1].eval_grad(x);
        (Vector2::new(v1, v2), Matrix2::new(g1[0], g1[1], g2[0], g2[1]))
    }

    fn newton(&self, start: [f64; 2], reach: f64) -> Option<[f64; 2]> {
        let mut x = Vector2::new(start[0], start[1]);
        let (mut fx, mut jx) = self.eval(&[x[0], x[1]]);
        for _ in 0..60 {
            let step = jx.try_inverse()? * fx;
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..12 {
                let y = x - step * t;
                let (fy, jy) = self.eval(&[y[0], y[1]]);
                if fy.norm() < fx.norm() || fy.norm() <= 1e-14 * self.scale {
                    accepted = Some((y, fy, jy));
                    break;
                }
                t *= 0.5;
            }
            let (y, fy, jy) = accepted?;
            let moved = (y - x).amax();
            x = y;
            fx = fy;
            jx = jy;
            if (x[0] - start[0]).abs().max((x[1] - start[1]).abs()) > reach {
                return None;
            }
            if moved <= 1e-14 * (1.0 + x.amax()) || fx.norm() <= 1e-15 * self.scale {
                break;
            }
        }
        (fx.norm() <= 1e-9 * self.scale).then_some([x[0], x[1]])
    }

    /// `true` when `F` is injective on the `ℓ∞` ball of radius `rho` around
    /// `r`: `‖J(r)⁻¹‖·(M_1 + M_2)·ρ < 1`.
    fn unique_near(&self, r: &[f64; 2], rho: f64) -> bool {
        let (_, j) = self.eval(r);
        let sv = j.singular_values();
        let smin = sv[0].min(sv[1]);
        smin > 0.0 && (self.curv[0] + self.curv[1]) * rho < smin
    }

    fn excluded(&self, c: &[f64; 2], h: f64) -> bool {
        (0..2).any(|i| {
            let (v, g) = self.f[i].eval_grad(c);
            let bound = (g[0].abs() + g[1].abs()) * h + 0.5 * self.curv[i] * h * h;
            v.abs() > bound * (1.0 + 1e-12) + 1e-300
        })
    }
}

/// Common zeros of `f1, f2` on `[0, 2π)²`.
///
/// The torus is tiled by cells of side at most `π/(8·deg)`. A cell is
/// discarded when a Taylor bound shows one of the functions has no zero in
/// it. Otherwise damped Newton runs from the center; a converged root `r`
/// settles the cell when the Jacobian at `r` certifies that the system is
/// injective on an `ℓ∞` ball around `r` containing the cell. Unsettled cells
/// are split in four. Fails with [`Error::Numeric`] past [`MAX_DEPTH`]
/// levels or [`MAX_CELLS`] cells.
pub fn real_roots_2d(f1: &TrigPolynomial, f2: &TrigPolynomial) -> Result<TorusRoots> {
    for f in [f1, f2] {
        if f.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: f.dim() });
        }
        if f.is_zero() {
            return Err(Error::invalid("polynomial is identically zero"));
        }
    }
    if !spans_plane(f1, f2) {
        return Ok(TorusRoots { generic: false, roots: vec![], cells: 0 });
    }
    let sys = System {
        f: [f1, f2],
        curv: [f1.curvature_bound(), f2.curvature_bound()],
        scale: f1.terms().chain(f2.terms()).map(|(_, a, b)| a.hypot(b)).sum(),
    };
    let deg = f1.degree().max(f2.degree()).max(1.0);
    let k = 16 * deg.ceil() as usize;
    let h0 = TAU / k as f64 / 2.0;
    let mut stack: Vec<([f64; 2], f64, u32)> = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            stack.push(([(2 * i + 1) as f64 * h0, (2 * j + 1) as f64 * h0], h0, 0));
        }
    }
    let mut roots: Vec<[f64; 2]> = Vec::new();
    let mut cells = 0usize;
    while let Some((c, h, depth)) = stack.pop() {
        cells += 1;
        if cells > MAX_CELLS {
            return Err(Error::Numeric("root isolation exceeded its cell budget".into()));
        }
        if sys.excluded(&c, h) {
            continue;
        }
        if let Some(r) = sys.newton(c, 4.0 * h) {
            let rho = (r[0] - c[0]).abs().max((r[1] - c[1]).abs()) + h;
            if sys.unique_near(&r, rho) {
                let r = [r[0].rem_euclid(TAU), r[1].rem_euclid(TAU)];
                if !roots.iter().any(|q| torus_dist(q, &r) < DEDUP_TOL) {
                    roots.push(r);
                }
                continue;
            }
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Numeric("root isolation did not converge (near-singular root)".into()));
        }
        let q = h / 2.0;
        for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
            stack.push(([c[0] + dx, c[1] + dy], q, depth + 1));
        }
    }
    roots.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    Ok(TorusRoots { generic: true, roots, cells })
}

pub fn count_real_roots_2d(f1: &TrigPolynomial, f2: &TrigPolynomial) -> Result<TorusRoots> {
    real_roots_2d(f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::sample_rng;
    use crate::mc_lab::trig::sample_trig;
    use crate::spectra::Spectrum;

    fn poly1(terms: Vec<(i64, f64, f64)>) -> TrigPolynomial {
        TrigPolynomial::new(1, terms.into_iter().map(|(l, a, b)| (vec![l], a, b)).collect()).unwrap()
    }

    #[test]
    fn one_dimensional_examples() {
        assert_eq!(count_real_roots_1d(&poly1(vec![(1, 1.0, 0.0)])).unwrap(), 2);
        let f = poly1(vec![(3, 1.0, 0.0), (1, 1e-3, -2e-3)]);
        assert_eq!(count_real_roots_1d(&f).unwrap(), 6);
        assert_eq!(count_real_roots_1d(&poly1(vec![(0, 1.0, 0.0)])).unwrap(), 0);
        assert!(count_real_roots_1d(&poly1(vec![(2, 0.0, 0.0)])).is_err());
        let roots = real_roots_1d(&poly1(vec![(1, 1.0, 0.0)])).unwrap();
        assert!((roots[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn close_pair_inside_one_cell() {
        // cos(θ - c) = 1 - ε has two roots ±√(2ε) around c, both in the first cell
        let c = TAU / 32.0;
        let eps = 1e-6;
        let f = poly1(vec![(1, c.cos(), c.sin()), (0, -(1.0 - eps), 0.0)]);
        let roots = real_roots_1d(&f).unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(f.eval(&[r]).abs() < 1e-12);
        }
        for k in [1, 2, 16, 64] {
            assert_eq!(real_roots_1d_with_grid(&f, k).unwrap().len(), 2);
        }
    }

    #[test]
    fn two_dimensional_examples() {
        let c1 = TrigPolynomial::new(2, vec![(vec![1, 0], 1.0, 0.0)]).unwrap();
        let c2 = TrigPolynomial::new(2, vec![(vec![0, 1], 1.0, 0.0)]).unwrap();
        let s1 = TrigPolynomial::new(2, vec![(vec![1, 0], 0.0, 1.0)]).unwrap();
        let r = count_real_roots_2d(&c1, &c2).unwrap();
        assert!(r.generic);
        assert_eq!(r.count(), 4);
        let r = count_real_roots_2d(&c1, &s1).unwrap();
        assert!(!r.generic);
        assert_eq!(r.count(), 0);
    }

    #[test]
    fn product_system_counts_multiply() {
        let a = TrigPolynomial::new(2, vec![(vec![2, 0], 1.0, 0.3), (vec![0, 0], 0.2, 0.0)]).unwrap();
        let b = TrigPolynomial::new(2, vec![(vec![0, 3], 0.5, 1.0)]).unwrap();
        // 4 roots in θ1 times 6 in θ2
        assert_eq!(count_real_roots_2d(&a, &b).unwrap().count(), 24);
    }

    /// Independent count: piecewise-linear interpolation of both functions
    /// on a triangulated `grid²` mesh; each triangle whose linear system has
    /// a solution inside contributes one root.
    fn mesh_oracle(f1: &TrigPolynomial, f2: &TrigPolynomial, grid: usize) -> usize {
        let h = TAU / grid as f64;
        let v1: Vec<f64> = (0..grid * grid).map(|k| f1.eval(&[(k / grid) as f64 * h, (k % grid) as f64 * h])).collect();
        let v2: Vec<f64> = (0..grid * grid).map(|k| f2.eval(&[(k / grid) as f64 * h, (k % grid) as f64 * h])).collect();
        let at = |i: usize, j: usize| (i % grid) * grid + (j % grid);
        let mut count = 0;
        for i in 0..grid {
            for j in 0..grid {
                let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
                for tri in [[corners[0], corners[1], corners[2]], [corners[0], corners[2], corners[3]]] {
                    let (a1, b1, c1) = (v1[tri[0]], v1[tri[1]] - v1[tri[0]], v1[tri[2]] - v1[tri[0]]);
                    let (a2, b2, c2) = (v2[tri[0]], v2[tri[1]] - v2[tri[0]], v2[tri[2]] - v2[tri[0]]);
                    let det = b1 * c2 - c1 * b2;
                    if det == 0.0 {
                        continue;
                    }
                    let s = (-a1 * c2 + c1 * a2) / det;
                    let t = (-b1 * a2 + a1 * b2) / det;
                    if s >= 0.0 && t >= 0.0 && s + t < 1.0 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn random_pairs_match_mesh_oracle() {
        let s = Spectrum::new((-1..=1).flat_map(|x| (-1..=1).map(move |y| vec![x, y]))).unwrap();
        for i in 0..3 {
            let mut rng = sample_rng(2024, i);
            let f1 = sample_trig(&s, &mut rng).unwrap();
            let f2 = sample_trig(&s, &mut rng).unwrap();
            let got = count_real_roots_2d(&f1, &f2).unwrap();
            assert_eq!(got.count(), mesh_oracle(&f1, &f2, 2048), "sample {i}");
        }
    }

    #[test]
    fn roots_are_roots() {
        let s = Spectrum::new((-2..=2).flat_map(|x| (-1..=1).map(move |y| vec![x, y]))).unwrap();
        let mut rng = sample_rng(9, 0);
        let f1 = sample_trig(&s, &mut rng).unwrap();
        let f2 = sample_trig(&s, &mut rng).unwrap();
        for r in count_real_roots_2d(&f1, &f2).unwrap().roots {
            assert!(f1.eval(&r).abs() < 1e-10 && f2.eval(&r).abs() < 1e-10);
        }
    }
}
