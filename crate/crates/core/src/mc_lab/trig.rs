//! Real trigonometric polynomials `Σ α_λ cos(λ·θ) + β_λ sin(λ·θ)` over a
//! centrally symmetric spectrum, and their Gaussian ensemble.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

/// One coefficient pair per `±λ` class. The zero frequency, when present,
/// is stored with `beta = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    freqs: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl TrigPolynomial {
    /// Builds from explicit `(λ, α, β)` triples; `λ` and `-λ` must not both
    /// appear.
    pub fn new(dim: usize, terms: Vec<(Vec<i64>, f64, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        let mut out = TrigPolynomial { dim, freqs: vec![], alpha: vec![], beta: vec![] };
        let mut seen: Vec<Vec<i64>> = Vec::new();
        for (lam, a, b) in terms {
            if lam.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: lam.len() });
            }
            let neg: Vec<i64> = lam.iter().map(|x| -x).collect();
            if seen.contains(&lam) || seen.contains(&neg) {
                return Err(Error::invalid("frequency listed twice up to sign"));
            }
            let zero = lam.iter().all(|&x| x == 0);
            out.freqs.push(lam.iter().map(|&x| x as f64).collect());
            out.alpha.push(a);
            out.beta.push(if zero { 0.0 } else { b });
            seen.push(lam);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[f64], f64, f64)> {
        self.freqs.iter().zip(&self.alpha).zip(&self.beta).map(|((l, a), b)| (l.as_slice(), *a, *b))
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().chain(&self.beta).all(|&c| c == 0.0)
    }

    /// `max |λ|_1` over the terms with a nonzero coefficient.
    pub fn degree(&self) -> f64 {
        self.terms()
            .filter(|(_, a, b)| *a != 0.0 || *b != 0.0)
            .map(|(l, _, _)| l.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        let mut s = 0.0;
        for (l, a, b) in self.terms() {
            let t: f64 = l.iter().zip(theta).map(|(x, y)| x * y).sum();
            let (sn, cs) = t.sin_cos();
            s += a * cs + b * sn;
        }
        s
    }

    /// Value and gradient.
    pub fn eval_grad(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let mut s = 0.0;
        let mut g = vec![0.0; self.dim];
        for (l, a, b) in self.terms() {
            let t: f64 = l.iter().zip(theta).map(|(x, y)| x * y).sum();
            let (sn, cs) = t.sin_cos();
            s += a * cs + b * sn;
            let d = b * cs - a * sn;
            for (gi, li) in g.iter_mut().zip(l) {
                *gi += d * li;
            }
        }
        (s, g)
    }

    /// Bound on every second directional derivative along unit `ℓ∞` steps:
    /// `Σ amp·|λ|_1²`.
    pub fn curvature_bound(&self) -> f64 {
        self.terms()
            .map(|(l, a, b)| {
                let l1: f64 = l.iter().map(|x| x.abs()).sum();
                a.hypot(b) * l1 * l1
            })
            .sum()
    }

    /// `θ ↦ f(θ + shift)`, expressed again in the same basis.
    pub fn rotated(&self, shift: &[f64]) -> TrigPolynomial {
        let mut out = self.clone();
        for i in 0..self.freqs.len() {
            let t: f64 = self.freqs[i].iter().zip(shift).map(|(x, y)| x * y).sum();
            let (sn, cs) = t.sin_cos();
            let (a, b) = (self.alpha[i], self.beta[i]);
            out.alpha[i] = a * cs + b * sn;
            out.beta[i] = b * cs - a * sn;
        }
        out
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: f64) -> TrigPolynomial {
        let mut out = self.clone();
        out.alpha.iter_mut().chain(out.beta.iter_mut()).for_each(|x| *x *= c);
        out
    }
}

/// Draws a random element of the span of `{cos(λ·θ), sin(λ·θ)}` whose
/// coordinates in the `L²(dθ)`-orthonormal basis on the torus are iid
/// standard Gaussians: `√2/(2π)^{n/2}·cos`, `√2/(2π)^{n/2}·sin` and
/// `1/(2π)^{n/2}` for the constant. The variance of `f(θ)` is
/// `#Λ/(2π)^n` at every point.
pub fn sample_trig<R: Rng + ?Sized>(s: &Spectrum, rng: &mut R) -> Result<TrigPolynomial> {
    s.require_symmetric()?;
    let n = s.dim();
    let unit = std::f64::consts::TAU.powf(-(n as f64) / 2.0);
    let pair = std::f64::consts::SQRT_2 * unit;
    let mut terms = Vec::with_capacity(s.len() / 2 + 1);
    if s.contains_zero() {
        let g: f64 = rng.sample(StandardNormal);
        terms.push((vec![0; n], unit * g, 0.0));
    }
    for lam in s.positive_half() {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        terms.push((lam.clone(), pair * a, pair * b));
    }
    TrigPolynomial::new(n, terms)
}
