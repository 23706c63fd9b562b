//! Monte Carlo checks of the real-root formulas: sampled root counts, the
//! evaluation-map identities, the curve length and the Crofton formula.

pub mod roots;
pub mod trig;

use std::f64::consts::{PI, SQRT_2, TAU};

use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::{map_chunks, sample_rng, Estimate, Moments};
use crate::spectra::{degree_1d, Spectrum};

pub use roots::{count_real_roots_1d, count_real_roots_2d, real_roots_1d, real_roots_1d_with_grid, real_roots_2d, TorusRoots};
pub use trig::{sample_trig, TrigPolynomial};

pub const MIN_SAMPLES: usize = 100;
/// Attempts per sample before a 2-D run gives up.
pub const MAX_REDRAWS: usize = 8;

fn estimate_of(counts: &[usize], seed: u64) -> Estimate {
    let mut m = Moments::default();
    for &c in counts {
        m.push(c as f64);
    }
    m.estimate(seed)
}

/// Root counts of `n` independent random polynomials; sample `i` draws from
/// stream `(seed, i)`.
pub fn sample_counts_1d(s: &Spectrum, n: usize, seed: u64) -> Result<Vec<usize>> {
    degree_1d(s)?;
    s.require_symmetric()?;
    let parts = map_chunks(n, |range| {
        range
            .map(|i| {
                let f = sample_trig(s, &mut sample_rng(seed, i as u64))?;
                count_real_roots_1d(&f)
            })
            .collect::<Result<Vec<_>>>()
    });
    Ok(parts.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

pub fn estimate_expected_roots_1d(s: &Spectrum, n: usize, seed: u64) -> Result<Estimate> {
    if n < MIN_SAMPLES {
        return Err(Error::invalid(format!("need at least {MIN_SAMPLES} samples")));
    }
    Ok(estimate_of(&sample_counts_1d(s, n, seed)?, seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemCounts {
    pub counts: Vec<usize>,
    /// Samples that had to be redrawn because root isolation failed.
    pub redraws: usize,
}

fn spectra_span_plane(s1: &Spectrum, s2: &Spectrum) -> bool {
    let pts: Vec<&Vec<i64>> = s1.points().iter().chain(s2.points()).collect();
    pts.iter().any(|u| pts.iter().any(|v| u[0] * v[1] - u[1] * v[0] != 0))
}

/// Root counts on the 2-torus of `n` random systems. A sample whose root
/// isolation fails is redrawn from the continuation of its own stream.
pub fn sample_counts_2d(s1: &Spectrum, s2: &Spectrum, n: usize, seed: u64) -> Result<SystemCounts> {
    for s in [s1, s2] {
        if s.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: s.dim() });
        }
        s.require_symmetric()?;
    }
    if !spectra_span_plane(s1, s2) {
        return Err(Error::invalid("spectra lie on a line; the system has no isolated roots"));
    }
    let parts = map_chunks(n, |range| -> Result<(Vec<usize>, usize)> {
        let mut counts = Vec::with_capacity(range.len());
        let mut redraws = 0;
        for i in range {
            let mut rng = sample_rng(seed, i as u64);
            let mut attempt = 0;
            loop {
                let f1 = sample_trig(s1, &mut rng)?;
                let f2 = sample_trig(s2, &mut rng)?;
                match real_roots_2d(&f1, &f2) {
                    Ok(r) => {
                        counts.push(r.count());
                        break;
                    }
                    Err(Error::Numeric(msg)) => {
                        attempt += 1;
                        redraws += 1;
                        if attempt >= MAX_REDRAWS {
                            return Err(Error::Numeric(format!("sample {i}: {msg}")));
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok((counts, redraws))
    });
    let mut out = SystemCounts { counts: Vec::with_capacity(n), redraws: 0 };
    for p in parts {
        let (c, r) = p?;
        out.counts.extend(c);
        out.redraws += r;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemEstimate {
    #[serde(flatten)]
    pub estimate: Estimate,
    pub redraws: usize,
}

pub fn estimate_expected_roots_2d(s1: &Spectrum, s2: &Spectrum, n: usize, seed: u64) -> Result<SystemEstimate> {
    if n < MIN_SAMPLES {
        return Err(Error::invalid(format!("need at least {MIN_SAMPLES} samples")));
    }
    let c = sample_counts_2d(s1, s2, n, seed)?;
    Ok(SystemEstimate { estimate: estimate_of(&c.counts, seed), redraws: c.redraws })
}

/// Coordinates of the evaluation functional `f ↦ f(θ)` in the basis
/// `{1, √2·cos(λ·θ), √2·sin(λ·θ)}`, orthonormal for the normalized measure
/// `dθ/(2π)^n`.
pub fn evaluation_vector(s: &Spectrum, theta: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(s.len());
    if s.contains_zero() {
        v.push(1.0);
    }
    for lam in s.positive_half() {
        let t: f64 = lam.iter().zip(theta).map(|(&l, x)| l as f64 * x).sum();
        let (sn, cs) = t.sin_cos();
        v.push(SQRT_2 * cs);
        v.push(SQRT_2 * sn);
    }
    v
}

/// Derivative of [`evaluation_vector`] along the circle (dimension 1).
pub fn evaluation_derivative_1d(s: &Spectrum, t: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(s.len());
    if s.contains_zero() {
        v.push(0.0);
    }
    for lam in s.positive_half() {
        let l = lam[0] as f64;
        let (sn, cs) = (l * t).sin_cos();
        v.push(-SQRT_2 * l * sn);
        v.push(SQRT_2 * l * cs);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `max | |Θ(θ)|² - #Λ |`.
    pub norm_residual: f64,
    /// `max | |Θ'(θ)|² - Σλ² |`, dimension 1 only.
    pub derivative_residual: Option<f64>,
    pub trials: usize,
}

/// Checks `|Θ(θ)|² = #Λ` (and `|Θ'|² = Σλ²` on the circle) at random points.
pub fn evaluation_identities(s: &Spectrum, trials: usize, seed: u64) -> Result<IdentityReport> {
    let n = s.dim();
    if n > 2 {
        return Err(Error::UnsupportedDimension { dim: n, max: 2 });
    }
    s.require_symmetric()?;
    let count = s.len() as f64;
    let sum_sq = s.sum_sq_norms();
    let angle = Uniform::new(0.0, TAU).expect("valid range");
    let mut norm_residual: f64 = 0.0;
    let mut derivative_residual: f64 = 0.0;
    for i in 0..trials {
        let mut rng = sample_rng(seed, i as u64);
        let theta: Vec<f64> = (0..n).map(|_| angle.sample(&mut rng)).collect();
        let v = evaluation_vector(s, &theta);
        norm_residual = norm_residual.max((v.iter().map(|x| x * x).sum::<f64>() - count).abs());
        if n == 1 {
            let d = evaluation_derivative_1d(s, theta[0]);
            derivative_residual = derivative_residual.max((d.iter().map(|x| x * x).sum::<f64>() - sum_sq).abs());
        }
    }
    Ok(IdentityReport { norm_residual, derivative_residual: (n == 1).then_some(derivative_residual), trials })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveLength {
    pub numeric: f64,
    pub closed_form: f64,
}

/// Length of the closed curve `t ↦ Θ(t)/|Θ(t)|` on the unit sphere, by
/// quadrature of the speed, next to `2π·sqrt((1/#Λ)Σλ²)`.
pub fn curve_length_check(s: &Spectrum) -> Result<CurveLength> {
    let deg = degree_1d(s)?;
    s.require_symmetric()?;
    let closed_form = TAU * (s.sum_sq_norms() / s.len() as f64).sqrt();
    let speed = |t: f64| {
        let v = evaluation_vector(s, &[t]);
        let d = evaluation_derivative_1d(s, t);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let dd: f64 = d.iter().map(|x| x * x).sum();
        let vd: f64 = v.iter().zip(&d).map(|(x, y)| x * y).sum();
        ((dd * vv - vd * vd).max(0.0)).sqrt() / vv
    };
    let panels = 8 * (deg as usize).max(1);
    let w = TAU / panels as f64;
    let numeric = (0..panels)
        .map(|k| quadrature::integrate(speed, k as f64 * w, (k + 1) as f64 * w, 1e-13 * w).integral)
        .sum();
    Ok(CurveLength { numeric, closed_form })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CroftonReport {
    #[serde(flatten)]
    pub estimate: Estimate,
    /// `length/π` of the curve.
    pub predicted: f64,
}

/// Mean number of crossings of the curve `Θ(t)` with a random hyperplane
/// `{x : ⟨x, ξ⟩ = 0}`, `ξ` standard Gaussian in `R^{#Λ}`. The crossings are
/// the roots of the trigonometric polynomial `t ↦ ⟨Θ(t), ξ⟩`.
pub fn crofton_check(s: &Spectrum, n: usize, seed: u64) -> Result<CroftonReport> {
    degree_1d(s)?;
    if n < MIN_SAMPLES {
        return Err(Error::invalid(format!("need at least {MIN_SAMPLES} samples")));
    }
    let predicted = curve_length_check(s)?.numeric / PI;
    let positive = s.positive_half();
    let parts = map_chunks(n, |range| {
        let mut m = Moments::default();
        for i in range {
            let mut rng = sample_rng(seed, i as u64);
            let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
            let mut terms = Vec::with_capacity(positive.len() + 1);
            if s.contains_zero() {
                terms.push((vec![0], normal(), 0.0));
            }
            for lam in &positive {
                terms.push((lam.to_vec(), SQRT_2 * normal(), SQRT_2 * normal()));
            }
            let f = TrigPolynomial::new(1, terms)?;
            m.push(count_real_roots_1d(&f)? as f64);
        }
        Ok(m)
    });
    let m = parts.into_iter().collect::<Result<Vec<_>>>()?.into_iter().fold(Moments::default(), Moments::merge);
    Ok(CroftonReport { estimate: m.estimate(seed), predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kac::expected_real_roots_1d;
    use crate::spectra::interval_spectrum;

    fn pm(points: &[i64]) -> Spectrum {
        Spectrum::new(points.iter().map(|&x| vec![x])).unwrap()
    }

    #[test]
    fn plus_minus_one_always_has_two_roots() {
        let c = sample_counts_1d(&pm(&[-1, 1]), 500, 3).unwrap();
        assert!(c.iter().all(|&k| k == 2));
        let e = estimate_expected_roots_1d(&pm(&[-1, 1]), 500, 3).unwrap();
        assert_eq!((e.mean, e.stderr), (2.0, 0.0));
    }

    #[test]
    fn small_intervals_match_formula() {
        for m in [1u32, 2] {
            let s = interval_spectrum(m).unwrap();
            let e = estimate_expected_roots_1d(&s, 4000, 10 + m as u64).unwrap();
            assert!(e.agrees_with(expected_real_roots_1d(&s).unwrap(), 3.0), "{e:?}");
        }
    }

    #[test]
    fn identities_hold() {
        let r = evaluation_identities(&interval_spectrum(2).unwrap(), 50, 0).unwrap();
        assert!(r.norm_residual <= 1e-9 && r.derivative_residual.unwrap() <= 1e-9);
        let g = Spectrum::new((-1..=1).flat_map(|x| (-1..=1).map(move |y| vec![x, y]))).unwrap();
        let r = evaluation_identities(&g, 50, 0).unwrap();
        assert!(r.norm_residual <= 1e-9 && r.derivative_residual.is_none());
        let v = evaluation_vector(&pm(&[0]), &[1.0]);
        assert_eq!(v, vec![1.0]);
    }

    #[test]
    fn curve_lengths() {
        for (s, want) in [(pm(&[-1, 1]), TAU), (interval_spectrum(3).unwrap(), 2.0 * TAU), (pm(&[0]), 0.0)] {
            let c = curve_length_check(&s).unwrap();
            assert!((c.closed_form - want).abs() < 1e-12);
            assert!((c.numeric - want).abs() <= 1e-6 * want.max(1e-300), "{c:?}");
        }
    }

    #[test]
    fn crofton_small() {
        let r = crofton_check(&pm(&[-1, 1]), 1000, 4).unwrap();
        assert_eq!(r.estimate.mean, 2.0);
        let r = crofton_check(&interval_spectrum(3).unwrap(), 4000, 4).unwrap();
        assert!(r.estimate.agrees_with(4.0, 3.0), "{r:?}");
        assert_eq!(crofton_check(&interval_spectrum(3).unwrap(), 4000, 4).unwrap(), r);
    }

    #[test]
    fn degenerate_product_system() {
        let a = Spectrum::new(vec![vec![-1i64, 0], vec![0, 0], vec![1, 0]]).unwrap();
        let b = Spectrum::new(vec![vec![0i64, -1], vec![0, 0], vec![0, 1]]).unwrap();
        let e = estimate_expected_roots_2d(&a, &b, 2000, 1).unwrap();
        let formula = crate::kac::expected_real_roots(&[a, b], 200_000, 1).unwrap();
        assert!((formula.mean - 8.0 / 3.0).abs() < 4.0 * formula.stderr);
        assert!(e.estimate.agrees_with(8.0 / 3.0, 3.0), "{e:?}");
    }

    #[test]
    fn two_d_is_reproducible() {
        let g = Spectrum::new((-1..=1).flat_map(|x| (-1..=1).map(move |y| vec![x, y]))).unwrap();
        let a = sample_counts_2d(&g, &g, 150, 8).unwrap();
        let b = sample_counts_2d(&g, &g, 150, 8).unwrap();
        assert_eq!(a, b);
    }
}
