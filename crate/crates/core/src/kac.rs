//! Closed-form expectations and probabilities for real roots of random
//! real Laurent polynomial systems, plus the ball constants they need.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::convex::{convex_hull, mixed_volume, Body, Polytope};
use crate::ellipsoids::{body_ellipsoid, ellipsoid_volume, mixed_volume_ellipsoids, newton_ellipsoid, Ellipsoid};
use crate::error::{Error, Result};
use crate::linalg::factorial;
use crate::mc::Estimate;
use crate::spectra::{degree_1d, Spectrum};

/// Largest index for which the exact `rational × π^k` forms are exposed.
pub const MAX_EXACT: u32 = 20;

/// A number of the form `coeff · π^pi_power` with rational `coeff`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiRational {
    pub coeff: Ratio<i128>,
    pub pi_power: u32,
}

impl PiRational {
    pub fn new(numer: i128, denom: i128, pi_power: u32) -> Self {
        PiRational { coeff: Ratio::new(numer, denom), pi_power }
    }

    pub fn value(&self) -> f64 {
        let c = self.coeff.numer().to_f64().unwrap() / self.coeff.denom().to_f64().unwrap();
        c * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

/// `21pi/1024`, `pi/8`, `2/3`, `4pi^2/3`.
impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.coeff.numer(), self.coeff.denom());
        let pi = match self.pi_power {
            0 => String::new(),
            1 => "pi".to_string(),
            k => format!("pi^{k}"),
        };
        let head = if pi.is_empty() {
            n.to_string()
        } else if n.is_one() {
            pi
        } else if *n == -1 {
            format!("-{pi}")
        } else {
            format!("{n}{pi}")
        };
        if d.is_one() {
            write!(f, "{head}")
        } else {
            write!(f, "{head}/{d}")
        }
    }
}

/// `∫_{-1}^{1} x²(1-x²)^{(n-1)/2} dx` in exact form, for `1 <= n <= 20`.
///
/// Uses `β_{n+2} = β_n·(n+1)/(n+4)` from `β_1 = 2/3`, `β_2 = π/8`
/// (integration by parts on the Chebyshev binomial).
pub fn beta_exact(n: u32) -> Result<PiRational> {
    if n == 0 || n > MAX_EXACT {
        return Err(Error::invalid(format!("exact beta is tabulated for 1..={MAX_EXACT}")));
    }
    let (mut k, mut c, p) = if n % 2 == 1 { (1, Ratio::new(2, 3), 0) } else { (2, Ratio::new(1, 8), 1) };
    while k < n {
        c *= Ratio::new(k as i128 + 1, k as i128 + 4);
        k += 2;
    }
    Ok(PiRational { coeff: c, pi_power: p })
}

/// Floating-point `β_n` for any `n >= 0` (`β_0 = π/2`).
pub fn beta_n(n: u32) -> f64 {
    let (mut k, mut b) = if n % 2 == 1 { (1, 2.0 / 3.0) } else { (0, std::f64::consts::FRAC_PI_2) };
    while k < n {
        b *= (k as f64 + 1.0) / (k as f64 + 4.0);
        k += 2;
    }
    b
}

/// Volume of the unit `k`-ball in exact form, `0 <= k <= 20`:
/// `π^j/j!` for `k = 2j`, `2^{j+1}π^j/(2j+1)!!` for `k = 2j+1`.
pub fn sigma_exact(k: u32) -> Result<PiRational> {
    if k > MAX_EXACT {
        return Err(Error::invalid(format!("exact ball volume is tabulated for 0..={MAX_EXACT}")));
    }
    let j = k / 2;
    let mut c = Ratio::<i128>::one();
    if k % 2 == 0 {
        for i in 1..=j {
            c /= i as i128;
        }
    } else {
        c *= 2;
        for i in 0..=j {
            if i > 0 {
                c *= 2;
            }
            c /= (2 * i + 1) as i128;
        }
    }
    Ok(PiRational { coeff: c, pi_power: j })
}

/// Volume of the unit `k`-ball, `π^{k/2}/Γ(k/2+1)`.
pub fn sigma_n(k: u32) -> f64 {
    // σ_k = σ_{k-2}·2π/k
    let (mut i, mut s) = if k % 2 == 0 { (0, 1.0) } else { (1, 2.0) };
    while i < k {
        i += 2;
        s *= std::f64::consts::TAU / i as f64;
    }
    s
}

/// `lim P(Λ_m) = ((σ_{n-1}/σ_n)·β_n)^{n/2}` for the lattice points of
/// dilated balls.
pub fn asymptotic_prob_ball(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    Ok((sigma_n(n - 1) / sigma_n(n) * beta_n(n)).powf(n as f64 / 2.0))
}

/// Expected number of roots on the unit circle, `2·sqrt((1/#Λ)Σλ²)`.
pub fn expected_real_roots_1d(s: &Spectrum) -> Result<f64> {
    degree_1d(s)?;
    s.require_symmetric()?;
    Ok(2.0 * (s.sum_sq_norms() / s.len() as f64).sqrt())
}

/// Probability that a root is real, `(1/deg)·sqrt((1/#Λ)Σλ²)` with
/// `deg = max |λ|`.
pub fn prob_real_1d(s: &Spectrum) -> Result<f64> {
    let deg = degree_1d(s)?;
    if deg == 0 {
        return Err(Error::invalid("spectrum has degree 0"));
    }
    Ok(expected_real_roots_1d(s)? / (2.0 * deg as f64))
}

fn check_system(spectra: &[Spectrum]) -> Result<usize> {
    let n = spectra.len();
    if n == 0 {
        return Err(Error::Empty("spectrum list"));
    }
    for s in spectra {
        if s.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
        }
    }
    Ok(n)
}

/// `V(E_1, ..., E_n)`, exact when all ellipsoids coincide, otherwise the
/// seeded Gaussian estimator.
fn ellipsoid_mixed_volume(es: &[Ellipsoid], samples: usize, seed: u64) -> Result<Estimate> {
    if es.iter().all(|e| e == &es[0]) {
        return Ok(Estimate::exact(ellipsoid_volume(&es[0]), seed));
    }
    mixed_volume_ellipsoids(es, samples, seed)
}

/// Expected number of roots on the torus `S^n` of a random system with the
/// given centrally symmetric spectra: `n!·V(Ell(Λ_1), ..., Ell(Λ_n))`.
pub fn expected_real_roots(spectra: &[Spectrum], samples: usize, seed: u64) -> Result<Estimate> {
    let n = check_system(spectra)?;
    if n > crate::ellipsoids::MAX_DIM {
        return Err(Error::UnsupportedDimension { dim: n, max: crate::ellipsoids::MAX_DIM });
    }
    for s in spectra {
        s.require_symmetric()?;
    }
    let es = spectra.iter().map(newton_ellipsoid).collect::<Result<Vec<_>>>()?;
    let est = ellipsoid_mixed_volume(&es, samples, seed)?;
    let f = factorial(n);
    Ok(Estimate { mean: f * est.mean, stderr: f * est.stderr, ..est })
}

/// Generic number of torus roots, `n!·V(conv Λ_1, ..., conv Λ_n)`, `n <= 3`.
///
/// The value is an integer for lattice polytopes, so floating-point noise
/// below `1e-6` is rounded away.
pub fn bkk_count(spectra: &[Spectrum]) -> Result<f64> {
    let n = check_system(spectra)?;
    let hulls = spectra.iter().map(|s| convex_hull(&s.points_f64())).collect::<Result<Vec<_>>>()?;
    let v = factorial(n) * mixed_volume(&hulls)?;
    Ok(if (v - v.round()).abs() < 1e-6 { v.round() } else { v })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KacReport {
    pub expected_real_roots: f64,
    pub total_roots: f64,
    pub prob_real: f64,
    /// Standard error of `expected_real_roots` (0 when computed exactly).
    pub stderr: f64,
    pub seed: u64,
    pub n_samples: usize,
    /// Short SHA-256 digests of the input spectra.
    pub spectra: Vec<String>,
}

/// Expected real roots, BKK count and their ratio.
pub fn prob_real(spectra: &[Spectrum], samples: usize, seed: u64) -> Result<KacReport> {
    let expected = expected_real_roots(spectra, samples, seed)?;
    let total = bkk_count(spectra)?;
    if total <= 1e-12 {
        return Err(Error::Degenerate("BKK count is zero; probability undefined".into()));
    }
    Ok(KacReport {
        expected_real_roots: expected.mean,
        total_roots: total,
        prob_real: expected.mean / total,
        stderr: expected.stderr,
        seed,
        n_samples: expected.n_samples,
        spectra: spectra.iter().map(Spectrum::digest).collect(),
    })
}

fn body_mixed_volume(bodies: &[Body]) -> Result<f64> {
    let n = bodies.len();
    if bodies.iter().all(|b| b == &bodies[0]) {
        return Ok(match &bodies[0] {
            Body::Ball { radius, .. } => sigma_n(n as u32) * radius.powi(n as i32),
            Body::Polytope(p) => p.volume(),
        });
    }
    let polys: Vec<&Polytope> = bodies
        .iter()
        .filter_map(|b| match b {
            Body::Polytope(p) => Some(p),
            _ => None,
        })
        .collect();
    let radii: Vec<f64> = bodies
        .iter()
        .filter_map(|b| match b {
            Body::Ball { radius, .. } => Some(*radius),
            _ => None,
        })
        .collect();
    if polys.is_empty() {
        return Ok(sigma_n(n as u32) * radii.iter().product::<f64>());
    }
    if radii.is_empty() {
        return mixed_volume(&polys.into_iter().cloned().collect::<Vec<_>>());
    }
    match (n, polys.len()) {
        // V(K, rB) = r·perimeter(K)/2 in the plane
        (2, 1) => {
            let p = polys[0];
            let perim = match p.affine_dim() {
                2 => p.perimeter().unwrap_or(0.0),
                1 => 2.0 * p.diameter(),
                _ => 0.0,
            };
            Ok(radii[0] * perim / 2.0)
        }
        _ => Err(Error::invalid("mixing balls and polytopes is supported in the plane only")),
    }
}

/// `V(Ell(Δ_1), ..., Ell(Δ_n)) / V(Δ_1, ..., Δ_n)`: the limiting fraction of
/// real roots for spectra `mΔ_i ∩ Z^n` as `m → ∞`.
pub fn asymptotic_prob_bodies(bodies: &[Body], samples: usize, seed: u64) -> Result<Estimate> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::Empty("body list"));
    }
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
    }
    let denom = body_mixed_volume(bodies)?;
    if denom <= 1e-300 {
        return Err(Error::Degenerate("mixed volume of the bodies is zero".into()));
    }
    let es = bodies.iter().map(body_ellipsoid).collect::<Result<Vec<_>>>()?;
    let num = ellipsoid_mixed_volume(&es, samples, seed)?;
    Ok(Estimate { mean: num.mean / denom, stderr: num.stderr / denom, ..num })
}
