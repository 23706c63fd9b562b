//! Asymptotic zero densities of exponential-sum systems: faces of Newton
//! polytopes in `C^n`, their dual cones and the pseudovolume.
//!
//! `C^n` is identified with `R^{2n}` through `(re_1, im_1, ..., re_n, im_n)`,
//! so multiplication by `i` maps `(a, b)` to `(-b, a)` in each pair.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::convex::{convex_hull, mixed_volume, Polytope};
use crate::error::{Error, Result};
use crate::expsum::{newton_polygon, ExpSum1D};
use crate::linalg::{complement, det, dot, orthonormal_extend, sub};

pub const MAX_N: usize = 2;
pub const MAX_VERTICES: usize = 64;
const FACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexPolytopeJson", into = "ComplexPolytopeJson")]
pub struct ComplexPolytope {
    n: usize,
    hull: Polytope,
}

/// Wire form: `{"n": n, "vertices": [[re1, im1, ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexPolytopeJson {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl TryFrom<ComplexPolytopeJson> for ComplexPolytope {
    type Error = Error;

    fn try_from(v: ComplexPolytopeJson) -> Result<Self> {
        ComplexPolytope::new(v.n, &v.vertices)
    }
}

impl From<ComplexPolytope> for ComplexPolytopeJson {
    fn from(p: ComplexPolytope) -> Self {
        ComplexPolytopeJson { n: p.n, vertices: p.hull.vertices().to_vec() }
    }
}

impl ComplexPolytope {
    /// Convex hull of points given as `2n` real coordinates each.
    pub fn new(n: usize, points: &[Vec<f64>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("complex dimension must be >= 1"));
        }
        if n > MAX_N {
            return Err(Error::UnsupportedDimension { dim: n, max: MAX_N });
        }
        if let Some(p) = points.iter().find(|p| p.len() != 2 * n) {
            return Err(Error::DimensionMismatch { expected: 2 * n, found: p.len() });
        }
        let hull = convex_hull(points)?;
        if hull.vertices().len() > MAX_VERTICES {
            return Err(Error::invalid(format!("at most {MAX_VERTICES} vertices are supported")));
        }
        Ok(ComplexPolytope { n, hull })
    }

    /// Points of `R^n ⊂ C^n` (zero imaginary parts).
    pub fn from_real(points: &[Vec<f64>]) -> Result<Self> {
        let n = points.first().map_or(0, Vec::len);
        let lifted: Vec<Vec<f64>> = points.iter().map(|p| p.iter().flat_map(|&x| [x, 0.0]).collect()).collect();
        ComplexPolytope::new(n, &lifted)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        self.hull.vertices()
    }

    pub fn hull(&self) -> &Polytope {
        &self.hull
    }

    pub fn is_real(&self) -> bool {
        self.vertices().iter().all(|v| v.iter().skip(1).step_by(2).all(|&y| y.abs() <= FACE_TOL))
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        Ok(ComplexPolytope { n: self.n, hull: self.hull.scaled(t)? })
    }

    pub fn translated(&self, w: &[f64]) -> Result<Self> {
        Ok(ComplexPolytope { n: self.n, hull: self.hull.translated(w)? })
    }

    /// Image under `z ↦ e^{iφ}z` (all coordinates rotated by `φ`).
    pub fn rotated(&self, phi: f64) -> Result<Self> {
        let (s, c) = phi.sin_cos();
        let pts: Vec<Vec<f64>> = self
            .vertices()
            .iter()
            .map(|v| v.chunks(2).flat_map(|z| [c * z[0] - s * z[1], s * z[0] + c * z[1]]).collect())
            .collect();
        ComplexPolytope::new(self.n, &pts)
    }
}

/// Multiplication by `i` in `R^{2n}` coordinates.
pub fn times_i(v: &[f64]) -> Vec<f64> {
    v.chunks(2).flat_map(|z| [-z[1], z[0]]).collect()
}

/// Normal cone `cone(rays) + span(lineality)` of a face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCone {
    pub rays: Vec<Vec<f64>>,
    pub lineality: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceDatum {
    /// Indices into [`ComplexPolytope::vertices`].
    pub vertices: Vec<usize>,
    /// Orthonormal basis of the tangent space.
    pub tangent: Vec<Vec<f64>>,
    pub n_volume: f64,
    pub cosine: f64,
    pub dual_cone: DualCone,
    /// `vol_n(K ∩ B_1)/σ_n`, the fraction of the unit ball of the cone's
    /// span covered by the cone.
    pub cone_fraction: f64,
}

fn orthonormal_span(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        if let Some(u) = orthonormal_extend(&basis, v, FACE_TOL * scale) {
            basis.push(u);
        }
    }
    basis
}

fn tangent_of(p: &Polytope, idx: &[usize]) -> Vec<Vec<f64>> {
    let v = p.vertices();
    orthonormal_span(&idx.iter().skip(1).map(|&i| sub(&v[i], &v[idx[0]])).collect::<Vec<_>>())
}

fn lift_direction(p: &Polytope, local: &[f64]) -> Vec<f64> {
    let (_, basis) = p.frame();
    let mut out = vec![0.0; p.dim()];
    for (c, b) in local.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// `|det(B1ᵀB2)|` for orthonormal bases `B1` of `T⊥` and `B2` of `iT`: the
/// Jacobian of the orthogonal projection between the two `n`-planes.
pub fn face_cosine(tangent: &[Vec<f64>], n: usize) -> Result<f64> {
    if tangent.len() != n {
        return Err(Error::Degenerate(format!("tangent space has dimension {} instead of {n}", tangent.len())));
    }
    let normal = complement(tangent, 2 * n);
    let rotated: Vec<Vec<f64>> = tangent.iter().map(|t| times_i(t)).collect();
    let m: Vec<Vec<f64>> = normal.iter().map(|a| rotated.iter().map(|b| dot(a, b)).collect()).collect();
    Ok(det(&m).abs().min(1.0))
}

fn face_datum(p: &Polytope, n: usize, vertices: Vec<usize>, cone: DualCone, cone_fraction: f64) -> Result<FaceDatum> {
    let tangent = tangent_of(p, &vertices);
    let pts: Vec<Vec<f64>> = vertices.iter().map(|&i| p.vertices()[i].clone()).collect();
    let n_volume = convex_hull(&pts)?.relative_volume();
    let cosine = face_cosine(&tangent, n)?;
    Ok(FaceDatum { vertices, tangent, n_volume, cosine, dual_cone: cone, cone_fraction })
}

/// All faces of real dimension `n`, read off the hull's facet structure.
///
/// The dual cone of a face `Γ` is the set of `z` for which `Re⟨z, ·⟩` is
/// maximized on all of `Γ`. A face equal to the whole body has the full
/// orthogonal complement as cone; a facet of an `(n+1)`-dimensional body
/// has a half-space; a 2-face of a 4-polytope has the planar wedge between
/// its two facet normals.
pub fn enumerate_n_faces(p: &ComplexPolytope) -> Result<Vec<FaceDatum>> {
    let n = p.n;
    let h = &p.hull;
    let k = h.affine_dim();
    let (_, frame) = h.frame();
    let all: Vec<usize> = (0..h.vertices().len()).collect();
    if k < n {
        return Ok(vec![]);
    }
    if k == n {
        let cone = DualCone { rays: vec![], lineality: complement(frame, 2 * n) };
        return Ok(vec![face_datum(h, n, all, cone, 1.0)?]);
    }
    let outside = complement(frame, 2 * n);
    if k == n + 1 {
        return h
            .facets()
            .iter()
            .map(|f| {
                let cone = DualCone { rays: vec![lift_direction(h, &f.normal)], lineality: outside.clone() };
                face_datum(h, n, f.vertices.clone(), cone, 0.5)
            })
            .collect();
    }
    // k = n + 2 = 4: ridges shared by two facets
    let facets = h.facets();
    let mut out = Vec::new();
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            let common: Vec<usize> = facets[i].vertices.iter().copied().filter(|v| facets[j].vertices.contains(v)).collect();
            if common.len() < n + 1 || tangent_of(h, &common).len() != n {
                continue;
            }
            let angle = dot(&facets[i].normal, &facets[j].normal).clamp(-1.0, 1.0).acos();
            let cone = DualCone {
                rays: vec![lift_direction(h, &facets[i].normal), lift_direction(h, &facets[j].normal)],
                lineality: vec![],
            };
            out.push(face_datum(h, n, common, cone, angle / TAU)?);
        }
    }
    Ok(out)
}

/// `Σ_Γ c(Γ)·vol_n(Γ)·vol_n(K_Γ ∩ B_1)/σ_n` over the `n`-faces.
///
/// Equals the `n`-volume for bodies in `R^n ⊂ C^n` and the semiperimeter for
/// polygons in `C`; a segment in `C` counts from both sides.
pub fn pseudovolume(p: &ComplexPolytope) -> Result<f64> {
    Ok(enumerate_n_faces(p)?.iter().map(|f| f.cosine * f.n_volume * f.cone_fraction).sum())
}

/// Expected number of zeros in `D + Re(C^n)` of a random system whose
/// Newton polytopes lie in `Re(C^n)`:
/// `n!/(2π)^n · vol_n(D) · V(conv Λ_1, ..., conv Λ_n)`.
pub fn zero_density_real_case(newton: &[ComplexPolytope], region_volume: f64) -> Result<f64> {
    let n = newton.len();
    if n == 0 {
        return Err(Error::Empty("polytope list"));
    }
    if n > 3 {
        return Err(Error::UnsupportedDimension { dim: n, max: 3 });
    }
    if !(region_volume >= 0.0) {
        return Err(Error::invalid("region volume must be nonnegative"));
    }
    let mut real = Vec::with_capacity(n);
    for p in newton {
        if p.n != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.n });
        }
        if !p.is_real() {
            return Err(Error::invalid("non-real frequency present"));
        }
        let pts: Vec<Vec<f64>> = p.vertices().iter().map(|v| v.iter().step_by(2).copied().collect()).collect();
        real.push(convex_hull(&pts)?);
    }
    let f: f64 = (1..=n).map(|k| k as f64).product();
    Ok(f / TAU.powi(n as i32) * region_volume * mixed_volume(&real)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayDensity {
    pub direction: [f64; 2],
    /// Zeros per unit length along the ray.
    pub density: f64,
}

/// Rays carrying the zeros of a one-variable exponential sum: the outward
/// normals of the sides of its Newton polygon, each with density
/// `length/(2π)`. A segment contributes both of its normals.
pub fn ray_density_1d(f: &ExpSum1D) -> Result<Vec<RayDensity>> {
    let p = newton_polygon(f)?;
    let lift = |local: &[f64]| {
        let v = lift_direction(&p, local);
        [v[0], v[1]]
    };
    Ok(match p.affine_dim() {
        0 => vec![],
        1 => {
            let (_, frame) = p.frame();
            let normal = [-frame[0][1], frame[0][0]];
            let density = p.diameter() / TAU;
            vec![
                RayDensity { direction: normal, density },
                RayDensity { direction: [-normal[0], -normal[1]], density },
            ]
        }
        _ => p
            .facets()
            .iter()
            .map(|side| {
                let a = &p.local_vertices()[side.vertices[0]];
                let b = &p.local_vertices()[side.vertices[1]];
                RayDensity { direction: lift(&side.normal), density: crate::linalg::norm(&sub(a, b)) / TAU }
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn triangle() -> ComplexPolytope {
        ComplexPolytope::new(1, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn real_square() -> ComplexPolytope {
        ComplexPolytope::from_real(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn faces_of_examples() {
        let faces = enumerate_n_faces(&triangle()).unwrap();
        assert_eq!(faces.len(), 3);
        assert!(faces.iter().all(|f| (f.cosine - 1.0).abs() < 1e-12));
        let seg = ComplexPolytope::new(1, &[vec![0.0, 0.0], vec![0.0, -TAU]]).unwrap();
        let faces = enumerate_n_faces(&seg).unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].dual_cone.lineality.len(), 1);
        let faces = enumerate_n_faces(&real_square()).unwrap();
        assert_eq!(faces.len(), 1);
        assert!((faces[0].cosine - 1.0).abs() < 1e-12);
        assert!((faces[0].n_volume - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tilted_face_cosine() {
        // T = span{(1,0,0,0), (0,sin t,cos t,0)}: T⊥ and iT meet at cos² t
        for t in [0.0f64, 0.3, 0.9, 1.4] {
            let (s, c) = t.sin_cos();
            let tangent = vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, s, c, 0.0]];
            let got = face_cosine(&tangent, 2).unwrap();
            // oracle: volume of the projection of an orthonormal frame of iT onto T⊥
            let proj = |v: &[f64]| -> Vec<f64> {
                let mut r = v.to_vec();
                for b in &tangent {
                    let k = dot(v, b);
                    for (x, y) in r.iter_mut().zip(b) {
                        *x -= k * y;
                    }
                }
                r
            };
            let it: Vec<Vec<f64>> = tangent.iter().map(|v| proj(&times_i(v))).collect();
            let gram = [[dot(&it[0], &it[0]), dot(&it[0], &it[1])], [dot(&it[1], &it[0]), dot(&it[1], &it[1])]];
            let oracle = (gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0]).max(0.0).sqrt();
            assert!((got - oracle).abs() < 1e-12 && (got - c * c).abs() < 1e-12, "t={t}: {got} {oracle}");
        }
    }

    #[test]
    fn pseudovolume_anchors() {
        assert!((pseudovolume(&triangle()).unwrap() - (2.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((pseudovolume(&real_square()).unwrap() - 1.0).abs() < 1e-12);
        let pt = ComplexPolytope::new(1, &[vec![0.3, 0.1]]).unwrap();
        assert_eq!(pseudovolume(&pt).unwrap(), 0.0);
        let seg = ComplexPolytope::new(1, &[vec![0.0, 0.0], vec![0.0, -TAU]]).unwrap();
        assert!((pseudovolume(&seg).unwrap() - TAU).abs() < 1e-12);
    }

    #[test]
    fn pseudovolume_of_real_cube_faces() {
        // a real square lifted into a 3-dimensional body: faces of the prism
        let mut pts = Vec::new();
        for &(x, y) in &[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)] {
            for h in [0.0, 0.5] {
                pts.push(vec![x, h, y, 0.0]);
            }
        }
        let p = ComplexPolytope::new(2, &pts).unwrap();
        let faces = enumerate_n_faces(&p).unwrap();
        assert_eq!(faces.len(), 6);
        assert!(pseudovolume(&p).unwrap() > 0.0);
    }

    #[test]
    fn four_dimensional_body_ridges() {
        let mut pts = Vec::new();
        for mask in 0..16u32 {
            pts.push((0..4).map(|b| ((mask >> b) & 1) as f64).collect::<Vec<_>>());
        }
        let p = ComplexPolytope::new(2, &pts).unwrap();
        let faces = enumerate_n_faces(&p).unwrap();
        assert_eq!(faces.len(), 24);
        assert!(faces.iter().all(|f| (f.cone_fraction - 0.25).abs() < 1e-12));
        let pv = pseudovolume(&p).unwrap();
        let doubled = pseudovolume(&p.scaled(2.0).unwrap()).unwrap();
        assert!((doubled - 4.0 * pv).abs() < 1e-9);
    }

    #[test]
    fn real_case_density() {
        for m in [1.0, 3.0] {
            let p = ComplexPolytope::from_real(&[vec![-m], vec![m]]).unwrap();
            let l = 2.5;
            assert!((zero_density_real_case(&[p], l).unwrap() - m * l / std::f64::consts::PI).abs() < 1e-12);
        }
        let sq = real_square();
        let want = 2.0 / TAU.powi(2);
        assert!((zero_density_real_case(&[sq.clone(), sq], 1.0).unwrap() - want).abs() < 1e-12);
        let seg = ComplexPolytope::from_real(&[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(zero_density_real_case(&[seg.clone(), seg], 1.0).unwrap(), 0.0);
        assert!(zero_density_real_case(&[triangle()], 1.0).is_err());
    }

    #[test]
    fn ray_densities() {
        let c = |a: f64, b: f64| Complex64::new(a, b);
        let sinh3 = ExpSum1D::new(vec![(c(3.0, 0.0), c(1.0, 0.0)), (c(-3.0, 0.0), c(-1.0, 0.0))]).unwrap();
        let rays = ray_density_1d(&sinh3).unwrap();
        assert_eq!(rays.len(), 2);
        for r in &rays {
            assert!(r.direction[0].abs() < 1e-12 && (r.density - 3.0 / std::f64::consts::PI).abs() < 1e-12);
        }
        let per = ExpSum1D::new(vec![(c(0.0, -TAU), c(1.0, 0.0)), (c(0.0, 0.0), c(-1.0, 0.0))]).unwrap();
        for r in ray_density_1d(&per).unwrap() {
            assert!(r.direction[1].abs() < 1e-12 && (r.density - 1.0).abs() < 1e-12);
        }
        let tri = ExpSum1D::new(vec![(c(0.0, 0.0), c(1.0, 0.0)), (c(1.0, 0.0), c(1.0, 0.0)), (c(0.0, 1.0), c(1.0, 0.0))]).unwrap();
        let mut d: Vec<f64> = ray_density_1d(&tri).unwrap().iter().map(|r| r.density * TAU).collect();
        d.sort_by(f64::total_cmp);
        assert!((d[0] - 1.0).abs() < 1e-12 && (d[1] - 1.0).abs() < 1e-12 && (d[2] - 2f64.sqrt()).abs() < 1e-12);
    }
}
