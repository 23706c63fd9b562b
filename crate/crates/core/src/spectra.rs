//! Finite lattice spectra: the frequency sets of Laurent and trigonometric
//! polynomials.
//!
//! A [`Spectrum`] is a nonempty, duplicate-free set of integer vectors of a
//! common dimension. Points are kept in lexicographic order so that equality
//! and hashing do not depend on how the set was built.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use sha2::{Digest, Sha256};

use crate::convex::Body;
use crate::error::{Error, Result};

/// A frequency vector in `Z^n`.
pub type LatticePoint = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum {
    dim: usize,
    points: Vec<LatticePoint>,
    symmetric: bool,
}

impl Spectrum {
    /// Builds a spectrum from a list of integer vectors, removing duplicates.
    pub fn new<I, P>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<LatticePoint>,
    {
        let mut set = BTreeSet::new();
        let mut dim = None;
        for p in points {
            let p: LatticePoint = p.into();
            match dim {
                None => {
                    if p.is_empty() {
                        return Err(Error::invalid("lattice points must have dimension >= 1"));
                    }
                    dim = Some(p.len());
                }
                Some(d) if d != p.len() => {
                    return Err(Error::DimensionMismatch { expected: d, found: p.len() })
                }
                _ => {}
            }
            set.insert(p);
        }
        let dim = dim.ok_or(Error::Empty("spectrum"))?;
        let symmetric = set.iter().all(|p| set.contains(&negate(p)));
        Ok(Spectrum { dim, points: set.into_iter().collect(), symmetric })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    /// Points as floating vectors, for the geometric modules.
    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.iter().map(|&c| c as f64).collect()).collect()
    }

    /// Every point multiplied by the integer `k`.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        Spectrum::new(self.points.iter().map(|p| p.iter().map(|c| c * k).collect::<Vec<_>>()))
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if self.symmetric {
            Ok(())
        } else {
            Err(Error::NotSymmetric)
        }
    }

    /// Largest absolute coordinate over all points (sup norm).
    pub fn max_abs_coord(&self) -> i64 {
        self.points.iter().flat_map(|p| p.iter().map(|c| c.abs())).max().unwrap_or(0)
    }

    /// Sum of squared Euclidean norms.
    pub fn sum_sq_norms(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>())
            .sum()
    }

    /// Representatives of the ±pairs: nonzero points whose first nonzero
    /// coordinate is positive.
    pub fn positive_half(&self) -> Vec<&LatticePoint> {
        self.points.iter().filter(|p| is_positive(p)).collect()
    }

    pub fn contains_zero(&self) -> bool {
        self.points.iter().any(|p| p.iter().all(|&c| c == 0))
    }

    /// Short content hash of the canonical text form.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_string().as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn negate(p: &[i64]) -> LatticePoint {
    p.iter().map(|c| -c).collect()
}

fn is_positive(p: &[i64]) -> bool {
    p.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Text format: `n <dim>` header, one point per line, `#` comments.
impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.dim)?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Spectrum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut points = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            match dim {
                None => {
                    let mut it = line.split_whitespace();
                    if it.next() != Some("n") {
                        return Err(parse_err("expected header `n <dim>`".into()));
                    }
                    let d: usize = it
                        .next()
                        .ok_or_else(|| parse_err("missing dimension".into()))?
                        .parse()
                        .map_err(|e| parse_err(format!("bad dimension: {e}")))?;
                    if d == 0 || it.next().is_some() {
                        return Err(parse_err("malformed header".into()));
                    }
                    dim = Some(d);
                }
                Some(d) => {
                    let p = line
                        .split_whitespace()
                        .map(|t| t.parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| parse_err(format!("bad integer: {e}")))?;
                    if p.len() != d {
                        return Err(parse_err(format!("expected {d} coordinates, found {}", p.len())));
                    }
                    points.push(p);
                }
            }
        }
        if dim.is_none() {
            return Err(Error::Parse { line: 1, message: "missing header".into() });
        }
        Spectrum::new(points)
    }
}

/// `{-m, ..., m}` in one dimension.
pub fn interval_spectrum(m: u32) -> Result<Spectrum> {
    if m == 0 {
        return Err(Error::invalid("interval spectrum needs m >= 1"));
    }
    let m = m as i64;
    Spectrum::new((-m..=m).map(|k| vec![k]))
}

/// Integer range `lo..=hi` in one dimension.
pub fn range_spectrum(lo: i64, hi: i64) -> Result<Spectrum> {
    if lo > hi {
        return Err(Error::Empty("range spectrum"));
    }
    Spectrum::new((lo..=hi).map(|k| vec![k]))
}

/// Lattice points of the closed Euclidean ball of radius `m` in `Z^n`.
pub fn ball_spectrum(n: usize, m: f64) -> Result<Spectrum> {
    dilate_spectrum(&Body::Ball { dim: n, radius: 1.0 }, m)
}

/// Lattice points of the closed dilate `m·body`.
///
/// Membership is decided exactly: ball radii and polytope facet inequalities
/// are compared in rational arithmetic, so boundary points are never lost to
/// rounding.
pub fn dilate_spectrum(body: &Body, m: f64) -> Result<Spectrum> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::invalid("dilation factor must be positive"));
    }
    let n = body.dim();
    if n == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    let m_q = BigRational::from_f64(m).expect("finite");
    let mut points = Vec::new();
    match body {
        Body::Ball { radius, .. } => {
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(Error::invalid("ball radius must be positive"));
            }
            let r = m_q * BigRational::from_f64(*radius).expect("finite");
            let r2 = &r * &r;
            let bound = r.floor().to_integer().to_i64().ok_or_else(|| Error::invalid("radius too large"))?;
            for_each_box_point(&vec![-bound; n], &vec![bound; n], |p| {
                let s: i64 = p.iter().map(|c| c * c).sum();
                if BigRational::from_integer(BigInt::from(s)) <= r2 {
                    points.push(p.to_vec());
                }
            });
        }
        Body::Polytope(poly) => {
            let region = poly.exact_region()?;
            let (lo, hi) = poly.bounding_box();
            let lo: Vec<i64> = lo.iter().map(|v| (v * m).floor() as i64 - 1).collect();
            let hi: Vec<i64> = hi.iter().map(|v| (v * m).ceil() as i64 + 1).collect();
            for_each_box_point(&lo, &hi, |p| {
                if region.contains_scaled(p, &m_q) {
                    points.push(p.to_vec());
                }
            });
        }
    }
    if points.is_empty() {
        return Err(Error::Degenerate("dilated body contains no lattice points".into()));
    }
    Spectrum::new(points)
}

fn for_each_box_point(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut i = 0;
        loop {
            if i == cur.len() {
                return;
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
    }
}

/// Maximum `|λ|` over a one-dimensional spectrum.
pub fn degree_1d(s: &Spectrum) -> Result<u64> {
    if s.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: s.dim() });
    }
    Ok(s.points().iter().map(|p| p[0].unsigned_abs()).max().unwrap_or(0))
}
