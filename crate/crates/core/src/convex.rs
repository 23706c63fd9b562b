//! Convex polytopes in dimension at most 4.
//!
//! A [`Polytope`] is always stored in canonical form: its vertex list holds
//! exactly the extreme points of the hull, in lexicographic order. Bodies of
//! lower affine dimension are allowed everywhere; internally every polytope
//! carries an orthonormal frame of its affine hull and its facet structure
//! inside that hull.
//!
//! Volumes are sums of simplex determinants over a boundary triangulation
//! coned from an interior point. Mixed volumes use inclusion-exclusion over
//! Minkowski sums, which is cheap for `n <= 3`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cross, det, dot, factorial, norm, orthonormal_extend, residual_norm, sub};

pub const MAX_DIM: usize = 4;

/// Relative tolerance for coplanarity and affine-dimension decisions.
const REL_TOL: f64 = 1e-10;

/// Number of unit directions used by [`hausdorff_distance`] in the plane.
pub const HAUSDORFF_DIRECTIONS: usize = 4096;

/// Anything with a support function `h(x) = max_{ξ∈A} <ξ, x>`.
pub trait SupportFunction {
    fn ambient_dim(&self) -> usize;
    fn support(&self, x: &[f64]) -> f64;
}

/// A facet of a polytope, expressed in the coordinates of its affine frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Outward unit normal (frame coordinates).
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Indices into [`Polytope::vertices`].
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeJson", into = "PolytopeJson")]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
    local: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    /// Boundary simplices in frame coordinates; coned from `center` they
    /// triangulate the body.
    cells: Vec<Vec<Vec<f64>>>,
    center: Vec<f64>,
    tol: f64,
}

/// Wire form: `{"dim": d, "vertices": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl TryFrom<PolytopeJson> for Polytope {
    type Error = Error;

    fn try_from(v: PolytopeJson) -> Result<Self> {
        if let Some(p) = v.vertices.iter().find(|p| p.len() != v.dim) {
            return Err(Error::DimensionMismatch { expected: v.dim, found: p.len() });
        }
        convex_hull(&v.vertices)
    }
}

impl From<Polytope> for PolytopeJson {
    fn from(p: Polytope) -> Self {
        PolytopeJson { dim: p.dim, vertices: p.vertices }
    }
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.affine_dim() < self.dim
    }

    /// Origin and orthonormal basis of the affine hull.
    pub fn frame(&self) -> (&[f64], &[Vec<f64>]) {
        (&self.origin, &self.basis)
    }

    /// Vertices in frame coordinates, aligned with [`Polytope::vertices`].
    pub fn local_vertices(&self) -> &[Vec<f64>] {
        &self.local
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub(crate) fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Ambient `d`-volume; zero for lower-dimensional bodies.
    pub fn volume(&self) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            self.relative_volume()
        }
    }

    /// Volume measured inside the affine hull (a point has 0-volume 1).
    pub fn relative_volume(&self) -> f64 {
        let k = self.affine_dim();
        if k == 0 {
            return 1.0;
        }
        let fk = factorial(k);
        self.cells
            .iter()
            .map(|cell| {
                let rows: Vec<Vec<f64>> = cell.iter().map(|v| sub(v, &self.center)).collect();
                det(&rows).abs() / fk
            })
            .sum()
    }

    /// Length of the boundary of a 2-dimensional body.
    pub fn perimeter(&self) -> Option<f64> {
        (self.affine_dim() == 2).then(|| {
            self.facets
                .iter()
                .map(|f| norm(&sub(&self.local[f.vertices[0]], &self.local[f.vertices[1]])))
                .sum()
        })
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for i in 0..self.dim {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(norm(&sub(a, b)));
            }
        }
        d
    }

    pub fn lift(&self, local: &[f64]) -> Vec<f64> {
        let mut x = self.origin.clone();
        for (c, b) in local.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += c * bi;
            }
        }
        x
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let y = sub(x, &self.origin);
        self.basis.iter().map(|b| dot(&y, b)).collect()
    }

    /// `∫ x xᵀ dx / vol_k`, the second-moment matrix of the uniform
    /// distribution on the body, integrated against the volume of its affine
    /// hull. Exact up to rounding (simplex decomposition).
    pub fn second_moment(&self) -> Vec<Vec<f64>> {
        let d = self.dim;
        let k = self.affine_dim();
        if k == 0 {
            let p = &self.vertices[0];
            return (0..d).map(|i| (0..d).map(|j| p[i] * p[j]).collect()).collect();
        }
        let mut acc = vec![vec![0.0; d]; d];
        let mut total = 0.0;
        let fk = factorial(k);
        let c = self.lift(&self.center);
        for cell in &self.cells {
            let rows: Vec<Vec<f64>> = cell.iter().map(|v| sub(v, &self.center)).collect();
            let vol = det(&rows).abs() / fk;
            if vol == 0.0 {
                continue;
            }
            total += vol;
            let mut pts: Vec<Vec<f64>> = cell.iter().map(|v| self.lift(v)).collect();
            pts.push(c.clone());
            let s: Vec<f64> = (0..d).map(|i| pts.iter().map(|p| p[i]).sum()).collect();
            let w = vol / ((k + 1) as f64 * (k + 2) as f64);
            for i in 0..d {
                for j in 0..d {
                    let mut m = s[i] * s[j];
                    for p in &pts {
                        m += p[i] * p[j];
                    }
                    acc[i][j] += w * m;
                }
            }
        }
        for row in acc.iter_mut() {
            for x in row.iter_mut() {
                *x /= total;
            }
        }
        acc
    }

    pub fn translated(&self, t: &[f64]) -> Result<Polytope> {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        convex_hull(&pts)
    }

    pub fn scaled(&self, s: f64) -> Result<Polytope> {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| v.iter().map(|a| a * s).collect()).collect();
        convex_hull(&pts)
    }

    /// Exact description used for lattice-point membership.
    pub fn exact_region(&self) -> Result<ExactRegion> {
        ExactRegion::new(self)
    }
}

impl SupportFunction for Polytope {
    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn support(&self, x: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(v, x)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A convex body given either by vertices or as a centered Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Body {
    Polytope(Polytope),
    Ball { dim: usize, radius: f64 },
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Polytope(p) => p.dim(),
            Body::Ball { dim, .. } => *dim,
        }
    }

    pub fn scaled(&self, s: f64) -> Result<Body> {
        Ok(match self {
            Body::Polytope(p) => Body::Polytope(p.scaled(s)?),
            Body::Ball { dim, radius } => Body::Ball { dim: *dim, radius: radius * s },
        })
    }
}

impl SupportFunction for Body {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn support(&self, x: &[f64]) -> f64 {
        match self {
            Body::Polytope(p) => p.support(x),
            Body::Ball { radius, .. } => radius * norm(x),
        }
    }
}

/// Canonical convex hull of a finite point set in `R^d`, `d <= 4`.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<Polytope> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let d = first.len();
    if d == 0 {
        return Err(Error::invalid("points must have dimension >= 1"));
    }
    if d > MAX_DIM {
        return Err(Error::UnsupportedDimension { dim: d, max: MAX_DIM });
    }
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.len() });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite coordinate"));
        }
    }

    let scale = points
        .iter()
        .map(|p| norm(&sub(p, first)))
        .fold(0.0, f64::max)
        .max(first.iter().map(|x| x.abs()).fold(0.0, f64::max));
    let tol = REL_TOL * scale.max(f64::MIN_POSITIVE);

    // Affine frame by greedy farthest-point selection.
    let origin = first.clone();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut chosen = vec![0usize];
    loop {
        let (idx, dist) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, residual_norm(&basis, &sub(p, &origin))))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if dist <= tol * 100.0 || basis.len() == d {
            break;
        }
        let u = orthonormal_extend(&basis, &sub(&points[idx], &origin), 0.0).expect("positive residual");
        basis.push(u);
        chosen.push(idx);
    }
    let k = basis.len();
    let local: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let y = sub(p, &origin);
            basis.iter().map(|b| dot(&y, b)).collect()
        })
        .collect();

    let raw = match k {
        0 => RawHull { extreme: vec![0], facets: vec![], cells: vec![], center: vec![] },
        1 => hull_1d(&local),
        2 => hull_2d(&local, tol),
        _ => hull_nd(&local, &chosen, tol),
    };
    Ok(finish(d, points, origin, basis, &local, raw, tol))
}

struct RawHull {
    /// Indices of extreme points into the input.
    extreme: Vec<usize>,
    /// (normal, offset) in frame coordinates.
    facets: Vec<(Vec<f64>, f64)>,
    cells: Vec<Vec<Vec<f64>>>,
    center: Vec<f64>,
}

fn hull_1d(local: &[Vec<f64>]) -> RawHull {
    let (mut lo, mut hi) = (0, 0);
    for (i, p) in local.iter().enumerate() {
        if p[0] < local[lo][0] {
            lo = i;
        }
        if p[0] > local[hi][0] {
            hi = i;
        }
    }
    let (a, b) = (local[lo][0], local[hi][0]);
    RawHull {
        extreme: vec![lo, hi],
        facets: vec![(vec![-1.0], -a), (vec![1.0], b)],
        cells: vec![vec![vec![a]], vec![vec![b]]],
        center: vec![0.5 * (a + b)],
    }
}

/// Andrew's monotone chain; collinear boundary points are dropped.
fn hull_2d(local: &[Vec<f64>], tol: f64) -> RawHull {
    let mut idx: Vec<usize> = (0..local.len()).collect();
    idx.sort_by(|&i, &j| local[i][0].total_cmp(&local[j][0]).then(local[i][1].total_cmp(&local[j][1])));
    let turn = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (&local[o], &local[a], &local[b]);
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let area_tol = |o: usize, b: usize| tol * norm(&sub(&local[b], &local[o])).max(tol);
    let mut chain: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in iter {
            while chain.len() >= start + 2 {
                let (o, a) = (chain[chain.len() - 2], chain[chain.len() - 1]);
                if turn(o, a, i) <= area_tol(o, i) {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(i);
        }
        chain.pop();
    }
    let ring = chain;
    let n = ring.len();
    let center: Vec<f64> = (0..2).map(|c| ring.iter().map(|&i| local[i][c]).sum::<f64>() / n as f64).collect();
    let mut facets = Vec::with_capacity(n);
    let mut cells = Vec::with_capacity(n);
    for e in 0..n {
        let (a, b) = (&local[ring[e]], &local[ring[(e + 1) % n]]);
        let ed = sub(b, a);
        let len = norm(&ed);
        let nrm = vec![ed[1] / len, -ed[0] / len];
        facets.push((nrm.clone(), dot(&nrm, a)));
        cells.push(vec![a.clone(), b.clone()]);
    }
    RawHull { extreme: ring, facets, cells, center }
}

struct SimplexFacet {
    verts: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
}

fn simplex_facet(local: &[Vec<f64>], verts: Vec<usize>, interior: &[f64]) -> SimplexFacet {
    let v0 = &local[verts[0]];
    let edges: Vec<Vec<f64>> = verts[1..].iter().map(|&v| sub(&local[v], v0)).collect();
    let mut n = cross(&edges);
    let len = norm(&n);
    for x in n.iter_mut() {
        *x /= len;
    }
    let mut off = dot(&n, v0);
    if dot(&n, interior) > off {
        for x in n.iter_mut() {
            *x = -*x;
        }
        off = -off;
    }
    SimplexFacet { verts, normal: n, offset: off }
}

/// Incremental (beneath-beyond) hull for full-dimensional point sets in
/// `R^3` and `R^4`, producing a simplicial boundary.
fn hull_nd(local: &[Vec<f64>], initial: &[usize], tol: f64) -> RawHull {
    let k = local[0].len();
    let center: Vec<f64> =
        (0..k).map(|c| initial.iter().map(|&i| local[i][c]).sum::<f64>() / initial.len() as f64).collect();
    let mut facets: Vec<SimplexFacet> = (0..=k)
        .map(|omit| {
            let verts: Vec<usize> =
                initial.iter().enumerate().filter(|(j, _)| *j != omit).map(|(_, &v)| v).collect();
            simplex_facet(local, verts, &center)
        })
        .collect();

    // Farthest points first keeps the intermediate hulls small.
    let mut order: Vec<usize> = (0..local.len()).filter(|i| !initial.contains(i)).collect();
    order.sort_by(|&a, &b| norm(&sub(&local[b], &center)).total_cmp(&norm(&sub(&local[a], &center))));

    let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
    for i in order {
        let p = &local[i];
        let visible: Vec<usize> =
            (0..facets.len()).filter(|&f| dot(&facets[f].normal, p) - facets[f].offset > tol).collect();
        if visible.is_empty() {
            continue;
        }
        ridges.clear();
        for &f in &visible {
            let verts = &facets[f].verts;
            for omit in 0..verts.len() {
                let mut r: Vec<usize> =
                    verts.iter().enumerate().filter(|(j, _)| *j != omit).map(|(_, &v)| v).collect();
                r.sort_unstable();
                *ridges.entry(r).or_insert(0) += 1;
            }
        }
        for &f in visible.iter().rev() {
            facets.swap_remove(f);
        }
        let mut horizon: Vec<&Vec<usize>> = ridges.iter().filter(|(_, &c)| c == 1).map(|(r, _)| r).collect();
        horizon.sort();
        for r in horizon {
            let mut verts = r.clone();
            verts.push(i);
            facets.push(simplex_facet(local, verts, &center));
        }
    }

    let mut extreme: Vec<usize> = facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
    extreme.sort_unstable();
    extreme.dedup();

    // Merge coplanar simplices into true facets.
    let mut merged: Vec<(Vec<f64>, f64)> = Vec::new();
    for f in &facets {
        if !merged.iter().any(|(n, o)| dot(n, &f.normal) > 1.0 - 1e-9 && (o - f.offset).abs() <= tol * 10.0) {
            merged.push((f.normal.clone(), f.offset));
        }
    }
    let cells = facets.iter().map(|f| f.verts.iter().map(|&v| local[v].clone()).collect()).collect();
    RawHull { extreme, facets: merged, cells, center }
}

fn finish(
    d: usize,
    points: &[Vec<f64>],
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
    local: &[Vec<f64>],
    raw: RawHull,
    tol: f64,
) -> Polytope {
    let k = basis.len();
    let face_tol = tol * 10.0;
    // A candidate is a vertex iff the normals of the facets through it span the frame.
    let mut keep: Vec<usize> = raw
        .extreme
        .iter()
        .copied()
        .filter(|&i| {
            if k <= 2 {
                return true;
            }
            let mut span: Vec<Vec<f64>> = Vec::new();
            for (n, o) in &raw.facets {
                if (dot(n, &local[i]) - o).abs() <= face_tol {
                    if let Some(u) = orthonormal_extend(&span, n, 1e-6) {
                        span.push(u);
                    }
                }
            }
            span.len() == k
        })
        .collect();
    keep.sort_by(|&a, &b| {
        points[a].iter().zip(&points[b]).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    keep.dedup_by(|a, b| points[*a] == points[*b]);
    let vertices: Vec<Vec<f64>> = keep.iter().map(|&i| points[i].clone()).collect();
    let loc: Vec<Vec<f64>> = keep.iter().map(|&i| local[i].clone()).collect();
    let facets = raw
        .facets
        .into_iter()
        .map(|(normal, offset)| {
            let vs = loc
                .iter()
                .enumerate()
                .filter(|(_, v)| (dot(&normal, v) - offset).abs() <= face_tol)
                .map(|(i, _)| i)
                .collect();
            Facet { normal, offset, vertices: vs }
        })
        .collect();
    Polytope { dim: d, vertices, origin, basis, local: loc, facets, cells: raw.cells, center: raw.center, tol }
}

/// Hull of all pairwise vertex sums.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let pts: Vec<Vec<f64>> =
        p.vertices().iter().flat_map(|a| q.vertices().iter().map(move |b| crate::linalg::add(a, b))).collect();
    convex_hull(&pts)
}

/// Ordinary `d`-volume of the hull (zero for degenerate bodies).
pub fn volume(p: &Polytope) -> f64 {
    p.volume()
}

pub fn support_function(p: &Polytope, x: &[f64]) -> f64 {
    p.support(x)
}

/// Mixed volume `V(A_1, ..., A_n)` of `n` polytopes in `R^n`, `n <= 3`,
/// normalized so that `V(A, ..., A) = vol(A)`.
pub fn mixed_volume(bodies: &[Polytope]) -> Result<f64> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::Empty("mixed volume arguments"));
    }
    if n > 3 {
        return Err(Error::UnsupportedDimension { dim: n, max: 3 });
    }
    for b in bodies {
        if b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
        }
    }
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut sum: Option<Polytope> = None;
        for (i, b) in bodies.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = Some(match sum {
                    None => b.clone(),
                    Some(s) => minkowski_sum(&s, b)?,
                });
            }
        }
        let vol = sum.expect("nonempty subset").volume();
        let sign = if (n - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * vol;
    }
    Ok((total / factorial(n)).max(0.0))
}

/// Quasi-uniform unit directions in `R^d` used for support-function sampling.
pub fn unit_directions(d: usize) -> Vec<Vec<f64>> {
    let m = HAUSDORFF_DIRECTIONS;
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..m)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / m as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            // Fibonacci sphere
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / m as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..4 * m)
                .map(|_| {
                    let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let n = norm(&g);
                    g.into_iter().map(|x| x / n).collect()
                })
                .collect()
        }
    }
}

/// Hausdorff distance `sup_{|u|=1} |h_A(u) - h_B(u)|`, approximated on
/// [`unit_directions`]. The sampled value never exceeds the true distance and
/// undershoots it by at most the body diameters times the largest angular gap.
pub fn hausdorff_distance<A, B>(a: &A, b: &B) -> Result<f64>
where
    A: SupportFunction + ?Sized,
    B: SupportFunction + ?Sized,
{
    let d = a.ambient_dim();
    if b.ambient_dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: b.ambient_dim() });
    }
    Ok(unit_directions(d).iter().map(|u| (a.support(u) - b.support(u)).abs()).fold(0.0, f64::max))
}

/// Rational description of a polytope: its affine hull and facet
/// inequalities, recomputed exactly from the (dyadic) vertex coordinates.
#[derive(Debug, Clone)]
pub struct ExactRegion {
    anchor: Vec<BigRational>,
    /// Orthogonal (unnormalized) basis of the hull's direction space; empty
    /// when the body is full-dimensional.
    span: Vec<Vec<BigRational>>,
    full: bool,
    halfspaces: Vec<(Vec<BigRational>, BigRational)>,
}

fn to_q(v: &[f64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_f64(x).expect("finite")).collect()
}

fn qdot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Rational Gram-Schmidt step: `v` minus its projection on an orthogonal basis.
fn q_reject(basis: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    let mut r = v.to_vec();
    for b in basis {
        let c = qdot(&r, b) / qdot(b, b);
        for (x, y) in r.iter_mut().zip(b) {
            *x -= &c * y;
        }
    }
    r
}

impl ExactRegion {
    fn new(p: &Polytope) -> Result<Self> {
        let k = p.affine_dim();
        let d = p.dim();
        let verts: Vec<Vec<BigRational>> = p.vertices().iter().map(|v| to_q(v)).collect();
        let anchor = verts[0].clone();

        let mut span: Vec<Vec<BigRational>> = Vec::new();
        for v in &verts[1..] {
            let diff: Vec<BigRational> = v.iter().zip(&anchor).map(|(a, b)| a - b).collect();
            let r = q_reject(&span, &diff);
            if r.iter().any(|x| !x.is_zero()) && span.len() < k {
                span.push(r);
            }
        }
        let full = k == d;
        if !full && q_reject(&span, &anchor).iter().any(|x| !x.is_zero()) {
            return Err(Error::Degenerate(
                "lower-dimensional body must lie in a linear subspace spanned by lattice vectors".into(),
            ));
        }

        let mut halfspaces = Vec::new();
        for f in p.facets() {
            let s0 = &verts[f.vertices[0]];
            let mut dirs_f: Vec<Vec<f64>> = Vec::new();
            let mut dirs_q: Vec<Vec<BigRational>> = Vec::new();
            for &vi in &f.vertices[1..] {
                let df = sub(&p.local_vertices()[vi], &p.local_vertices()[f.vertices[0]]);
                if let Some(u) = orthonormal_extend(&dirs_f, &df, p.tolerance() * 100.0) {
                    dirs_f.push(u);
                    let dq: Vec<BigRational> = verts[vi].iter().zip(s0).map(|(a, b)| a - b).collect();
                    let r = q_reject(&dirs_q, &dq);
                    dirs_q.push(r);
                }
                if dirs_f.len() + 1 == k {
                    break;
                }
            }
            // the vertex farthest behind the facet fixes the normal's sign
            let (far, _) = p
                .local_vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| (i, f.offset - dot(&f.normal, v)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            let u: Vec<BigRational> = verts[far].iter().zip(s0).map(|(a, b)| a - b).collect();
            let n: Vec<BigRational> = q_reject(&dirs_q, &u).into_iter().map(|x| -x).collect();
            let c = qdot(&n, s0);
            halfspaces.push((n, c));
        }
        Ok(ExactRegion { anchor, span, full, halfspaces })
    }

    /// Whether the integer point `x` lies in the closed dilate `m·P`.
    pub fn contains_scaled(&self, x: &[i64], m: &BigRational) -> bool {
        let y: Vec<BigRational> = x.iter().map(|&c| BigRational::from_integer(BigInt::from(c)) / m).collect();
        if !self.full {
            let diff: Vec<BigRational> = y.iter().zip(&self.anchor).map(|(a, b)| a - b).collect();
            if q_reject(&self.span, &diff).iter().any(|v| !v.is_zero()) {
                return false;
            }
        }
        self.halfspaces.iter().all(|(n, c)| qdot(n, &y) <= *c)
    }
}
