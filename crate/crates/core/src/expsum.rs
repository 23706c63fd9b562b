//! Exponential sums `f(z) = Σ c·exp(conj(λ)·z)` in one complex variable:
//! Newton polygon, zero counts in disks and the linear growth of those
//! counts with the radius.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{convex_hull, Polytope};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum1D {
    terms: Vec<(Complex64, Complex64)>,
}

impl ExpSum1D {
    /// `(frequency, coefficient)` pairs; frequencies distinct, coefficients
    /// nonzero.
    pub fn new(terms: Vec<(Complex64, Complex64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Empty("exponential sum"));
        }
        for (i, (l, c)) in terms.iter().enumerate() {
            if !(l.re.is_finite() && l.im.is_finite() && c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::invalid("non-finite term"));
            }
            if c.norm() == 0.0 {
                return Err(Error::invalid("zero coefficient"));
            }
            if terms[..i].iter().any(|(m, _)| m == l) {
                return Err(Error::invalid(format!("repeated frequency {l}")));
            }
        }
        Ok(ExpSum1D { terms })
    }

    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|(l, c)| c * (l.conj() * z).exp()).sum()
    }

    /// `f(z)·exp(-M)` and `Σ|c|·exp(Re(conj(λ)z) - M)`, where `M` is the
    /// largest exponent real part. The ratio of the two measures
    /// cancellation without overflow.
    fn eval_scaled(&self, z: Complex64) -> (Complex64, f64) {
        let m = self.terms.iter().map(|(l, _)| (l.conj() * z).re).fold(f64::NEG_INFINITY, f64::max);
        let mut s = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (l, c) in &self.terms {
            let w = l.conj() * z;
            let e = Complex64::from_polar((w.re - m).exp(), w.im);
            s += c * e;
            mass += c.norm() * (w.re - m).exp();
        }
        (s, mass)
    }

    /// `z ↦ f(z + w)`.
    pub fn shifted(&self, w: Complex64) -> ExpSum1D {
        ExpSum1D { terms: self.terms.iter().map(|(l, c)| (*l, c * (l.conj() * w).exp())).collect() }
    }

    /// Every coefficient times `k`.
    pub fn scaled(&self, k: Complex64) -> Result<ExpSum1D> {
        ExpSum1D::new(self.terms.iter().map(|(l, c)| (*l, c * k)).collect())
    }

    /// Frequencies and coefficients conjugated; zeros are mirrored in the
    /// real axis.
    pub fn conjugated(&self) -> ExpSum1D {
        ExpSum1D { terms: self.terms.iter().map(|(l, c)| (l.conj(), c.conj())).collect() }
    }

    fn max_abs_frequency(&self) -> f64 {
        self.terms.iter().map(|(l, _)| l.norm()).fold(0.0, f64::max)
    }
}

/// One term per line: `re(λ) im(λ) re(c) im(c)`. Blank lines and lines
/// starting with `#` are skipped.
impl FromStr for ExpSum1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let nums = t
                .split_whitespace()
                .map(|w| w.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
            if nums.len() != 4 {
                return Err(Error::Parse { line: i + 1, message: format!("expected 4 numbers, found {}", nums.len()) });
            }
            terms.push((Complex64::new(nums[0], nums[1]), Complex64::new(nums[2], nums[3])));
        }
        ExpSum1D::new(terms)
    }
}

impl fmt::Display for ExpSum1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, c) in &self.terms {
            writeln!(f, "{:e} {:e} {:e} {:e}", l.re, l.im, c.re, c.im)?;
        }
        Ok(())
    }
}

/// Convex hull of the frequencies in `C ≅ R²`.
pub fn newton_polygon(f: &ExpSum1D) -> Result<Polytope> {
    convex_hull(&f.terms.iter().map(|(l, _)| vec![l.re, l.im]).collect::<Vec<_>>())
}

/// Boundary length of a planar body, counting a segment from both sides
/// (twice its length) and a point as 0.
pub fn effective_perimeter(p: &Polytope) -> Result<f64> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: p.dim() });
    }
    Ok(match p.affine_dim() {
        0 => 0.0,
        1 => 2.0 * p.diameter(),
        _ => p.perimeter().expect("planar polygon"),
    })
}

/// Leading term `(r/2π)·effective_perimeter` of the zero count in `|z| < r`.
pub fn predicted_count(f: &ExpSum1D, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid("radius must be positive"));
    }
    Ok(r / TAU * effective_perimeter(&newton_polygon(f)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskCountReport {
    /// Radius actually used (after nudging).
    pub r: f64,
    pub requested_r: f64,
    pub count: u64,
    pub predicted: f64,
    pub contour_points: usize,
    pub nudges: u32,
}

pub const MAX_CONTOUR_POINTS: usize = 1 << 22;
pub const MAX_NUDGES: u32 = 3;
const NEAR_ZERO: f64 = 1e-10;

enum Winding {
    Count(i64, usize),
    NearZero,
}

fn arg_step(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Winding number of `f` around `|z| = r` with `n0` initial points; every
/// segment is bisected until the argument moves by less than `π/2` on it.
fn winding(f: &ExpSum1D, r: f64, n0: usize) -> Result<Winding> {
    let at = |t: f64| f.eval_scaled(Complex64::from_polar(r, t));
    let init: Vec<(f64, Complex64, f64)> = (0..n0)
        .into_par_iter()
        .map(|j| {
            let t = TAU * j as f64 / n0 as f64;
            let (v, m) = at(t);
            (t, v, m)
        })
        .collect();
    if init.iter().any(|(_, v, m)| v.norm() <= NEAR_ZERO * m) {
        return Ok(Winding::NearZero);
    }
    let mut total = 0.0;
    let mut points = n0;
    for j in 0..n0 {
        let (t0, v0, _) = init[j];
        let (t1, v1) = if j + 1 < n0 { (init[j + 1].0, init[j + 1].1) } else { (TAU, init[0].1) };
        let mut stack = vec![(t0, v0, t1, v1)];
        while let Some((a, va, b, vb)) = stack.pop() {
            let d = arg_step(va, vb);
            if d.abs() < PI / 2.0 {
                total += d;
                continue;
            }
            if b - a < 1e-13 * TAU {
                return Ok(Winding::NearZero);
            }
            let mid = 0.5 * (a + b);
            let (vm, mm) = at(mid);
            if vm.norm() <= NEAR_ZERO * mm {
                return Ok(Winding::NearZero);
            }
            points += 1;
            if points > MAX_CONTOUR_POINTS {
                return Err(Error::Numeric("winding number needs more than 2^22 contour points".into()));
            }
            // second half first so the sum runs in contour order
            stack.push((mid, vm, b, vb));
            stack.push((a, va, mid, vm));
        }
    }
    Ok(Winding::Count((total / TAU).round() as i64, points))
}

/// Number of zeros in the open disk `|z| < r` by the argument principle.
///
/// The winding number is recomputed with twice as many initial points
/// until two successive values agree. If `f` nearly vanishes on the
/// contour, `r` grows by `1e-6·(1+r)`, at most [`MAX_NUDGES`] times.
pub fn count_zeros_disk(f: &ExpSum1D, r: f64) -> Result<DiskCountReport> {
    let predicted = predicted_count(f, r)?;
    let requested_r = r;
    let mut r = r;
    for nudges in 0..=MAX_NUDGES {
        if f.terms.len() == 1 {
            return Ok(DiskCountReport { r, requested_r, count: 0, predicted, contour_points: 0, nudges });
        }
        let mut n = (8.0 * r * f.max_abs_frequency()).ceil().max(64.0) as usize;
        let mut prev: Option<i64> = None;
        let outcome = loop {
            match winding(f, r, n)? {
                Winding::NearZero => break None,
                Winding::Count(w, pts) => {
                    if prev == Some(w) {
                        break Some((w, pts));
                    }
                    prev = Some(w);
                }
            }
            n *= 2;
            if n > MAX_CONTOUR_POINTS {
                return Err(Error::Numeric("winding number did not stabilize".into()));
            }
        };
        match outcome {
            Some((w, pts)) => {
                if w < 0 {
                    return Err(Error::Numeric(format!("negative winding number {w}")));
                }
                let predicted = predicted_count(f, r)?;
                return Ok(DiskCountReport { r, requested_r, count: w as u64, predicted, contour_points: pts, nudges });
            }
            None => r += 1e-6 * (1.0 + r),
        }
    }
    Err(Error::Numeric(format!("f vanishes near |z| = {requested_r} after {MAX_NUDGES} nudges")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub slope: f64,
    pub intercept: f64,
    /// `max |count - slope·r - intercept|`.
    pub max_residual: f64,
    pub counts: Vec<DiskCountReport>,
}

/// Least-squares line through `(r, N(f, r))`.
pub fn density_slope(f: &ExpSum1D, radii: &[f64]) -> Result<SlopeReport> {
    if radii.len() < 4 {
        return Err(Error::invalid("need at least 4 radii"));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(Error::invalid("radii must be positive and increasing"));
    }
    if radii[radii.len() - 1] < 4.0 * radii[0] {
        return Err(Error::invalid("largest radius must be at least 4 times the smallest"));
    }
    let counts = radii.iter().map(|&r| count_zeros_disk(f, r)).collect::<Result<Vec<_>>>()?;
    let k = counts.len() as f64;
    let xs: Vec<f64> = counts.iter().map(|c| c.r).collect();
    let ys: Vec<f64> = counts.iter().map(|c| c.count as f64).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).abs()).fold(0.0, f64::max);
    Ok(SlopeReport { slope, intercept, max_residual, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn periodic() -> ExpSum1D {
        // e^{2πiz} - 1: conj(λ) = 2πi
        ExpSum1D::new(vec![(c(0.0, -TAU), c(1.0, 0.0)), (c(0.0, 0.0), c(-1.0, 0.0))]).unwrap()
    }

    pub(crate) fn sinh3() -> ExpSum1D {
        ExpSum1D::new(vec![(c(3.0, 0.0), c(1.0, 0.0)), (c(-3.0, 0.0), c(-1.0, 0.0))]).unwrap()
    }

    fn triangle() -> ExpSum1D {
        ExpSum1D::new(vec![(c(0.0, 0.0), c(1.0, 0.0)), (c(1.0, 0.0), c(1.0, 0.0)), (c(0.0, 1.0), c(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn polygon_and_perimeter() {
        let p = newton_polygon(&periodic()).unwrap();
        assert_eq!(p.affine_dim(), 1);
        assert!((effective_perimeter(&p).unwrap() - 2.0 * TAU).abs() < 1e-12);
        let p = newton_polygon(&triangle()).unwrap();
        assert!((effective_perimeter(&p).unwrap() - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        let single = ExpSum1D::new(vec![(c(1.0, 1.0), c(2.0, 0.0))]).unwrap();
        assert_eq!(effective_perimeter(&newton_polygon(&single).unwrap()).unwrap(), 0.0);
        assert!((predicted_count(&periodic(), 5.5).unwrap() - 11.0).abs() < 1e-12);
        assert!((predicted_count(&sinh3(), 10.0).unwrap() - 60.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn exact_counts() {
        assert_eq!(count_zeros_disk(&periodic(), 5.5).unwrap().count, 11);
        assert_eq!(count_zeros_disk(&sinh3(), 10.0).unwrap().count, 19);
        let single = ExpSum1D::new(vec![(c(1.0, 0.0), c(1.0, 0.0))]).unwrap();
        assert_eq!(count_zeros_disk(&single, 7.0).unwrap().count, 0);
    }

    #[test]
    fn zero_on_contour_is_nudged() {
        let rep = count_zeros_disk(&periodic(), 5.0).unwrap();
        assert_eq!(rep.nudges, 1);
        assert_eq!(rep.count, 11);
        assert!(rep.r > 5.0);
    }

    #[test]
    fn slopes() {
        let radii = [10.0, 20.0, 30.0, 40.0, 50.0];
        let s = density_slope(&periodic(), &radii).unwrap();
        assert!((s.slope - 2.0).abs() < 0.05, "{s:?}");
        let s = density_slope(&sinh3(), &radii).unwrap();
        assert!((s.slope / (6.0 / PI) - 1.0).abs() < 0.02, "{s:?}");
        let s = density_slope(&triangle(), &[25.0, 50.0, 100.0, 200.0]).unwrap();
        let want = (2.0 + 2f64.sqrt()) / TAU;
        assert!((s.slope / want - 1.0).abs() < 0.05, "{s:?}");
        assert!(density_slope(&sinh3(), &[10.0, 20.0, 30.0]).is_err());
        assert!(density_slope(&sinh3(), &[10.0, 20.0, 30.0, 35.0]).is_err());
    }

    #[test]
    fn invariances() {
        let f = triangle();
        let k = c(-0.3, 2.0);
        for r in [3.0, 9.5, 17.25] {
            let base = count_zeros_disk(&f, r).unwrap().count;
            assert_eq!(count_zeros_disk(&f.scaled(k).unwrap(), r).unwrap().count, base);
            assert_eq!(count_zeros_disk(&f.conjugated(), r).unwrap().count, base);
        }
    }

    #[test]
    fn text_round_trip() {
        let f = triangle();
        let back: ExpSum1D = f.to_string().parse().unwrap();
        assert_eq!(back, f);
        let err = "1 0 1 0\n# c\n2 0 x 0\n".parse::<ExpSum1D>().unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "invalid float literal".into() });
        assert!("1 0 1 0\n1 0 2 0".parse::<ExpSum1D>().is_err());
    }
}
