//! Property tests for the invariants each module promises.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kacfta::convex::{convex_hull, minkowski_sum, mixed_volume, support_function, Body, Polytope, SupportFunction};
use kacfta::ellipsoids::{mixed_volume_ellipsoids, newton_ellipsoid, Ellipsoid};
use kacfta::expsum::{count_zeros_disk, ExpSum1D};
use kacfta::kac::{asymptotic_prob_bodies, beta_n, expected_real_roots, expected_real_roots_1d, prob_real, prob_real_1d};
use kacfta::mc::sample_rng;
use kacfta::mc_lab::{
    count_real_roots_1d, count_real_roots_2d, estimate_expected_roots_1d, real_roots_1d_with_grid, sample_trig,
};
use kacfta::output::format_f64;
use kacfta::spectra::{interval_spectrum, Spectrum};
use kacfta::zerofan::{pseudovolume, ComplexPolytope};

fn point_cloud(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, n), n + 1..n + 8)
}

fn full_polytope(n: usize) -> impl Strategy<Value = Polytope> {
    point_cloud(n)
        .prop_map(|pts| convex_hull(&pts).unwrap())
        .prop_filter("full-dimensional", |p| !p.is_degenerate() && p.volume() > 1e-3)
}

/// Symmetric 1-D spectrum from a set of positive frequencies, maybe with 0.
fn sym_spectrum_1d() -> impl Strategy<Value = Spectrum> {
    (prop::collection::btree_set(1i64..8, 1..4), any::<bool>()).prop_map(|(pos, zero)| {
        let mut pts: Vec<Vec<i64>> = pos.iter().flat_map(|&k| [vec![k], vec![-k]]).collect();
        if zero {
            pts.push(vec![0]);
        }
        Spectrum::new(pts).unwrap()
    })
}

fn sym_spectrum_2d() -> impl Strategy<Value = Spectrum> {
    prop::collection::btree_set((-3i64..=3, 0i64..=3), 2..5).prop_filter_map("spans the plane", |half| {
        let mut pts = vec![];
        for (a, b) in half {
            if (a, b) == (0, 0) || (b == 0 && a < 0) {
                continue;
            }
            pts.push(vec![a, b]);
            pts.push(vec![-a, -b]);
        }
        let s = Spectrum::new(pts).ok()?;
        let p = convex_hull(&s.points_f64()).ok()?;
        (!p.is_degenerate()).then_some(s)
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_text_round_trips(s in sym_spectrum_2d()) {
        let back: Spectrum = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn support_is_positively_homogeneous(p in full_polytope(3), x in prop::collection::vec(-1.0f64..1.0, 3), t in 0.1f64..10.0) {
        let tx: Vec<f64> = x.iter().map(|v| v * t).collect();
        prop_assert!(close(support_function(&p, &tx), t * support_function(&p, &x), 1e-12));
    }

    #[test]
    fn hull_vertices_are_a_fixed_point(pts in point_cloud(3)) {
        let p = convex_hull(&pts).unwrap();
        let q = convex_hull(p.vertices()).unwrap();
        prop_assert!(close(p.volume(), q.volume(), 1e-12));
        prop_assert_eq!(p.vertices().len(), q.vertices().len());
    }

    #[test]
    fn mixed_volume_is_symmetric_and_multilinear(a in full_polytope(2), b in full_polytope(2), c in full_polytope(2), t in 0.2f64..4.0) {
        let ab = mixed_volume(&[a.clone(), b.clone()]).unwrap();
        prop_assert!(close(ab, mixed_volume(&[b.clone(), a.clone()]).unwrap(), 1e-9));
        let sum = minkowski_sum(&a, &c).unwrap();
        let lhs = mixed_volume(&[sum, b.clone()]).unwrap();
        let rhs = ab + mixed_volume(&[c.clone(), b.clone()]).unwrap();
        prop_assert!(close(lhs, rhs, 1e-9));
        prop_assert!(close(mixed_volume(&[a.scaled(t).unwrap(), b.clone()]).unwrap(), t * ab, 1e-9));
        prop_assert!(close(mixed_volume(&[a.clone(), a.clone()]).unwrap(), a.volume(), 1e-12));
        prop_assert!(ab >= 0.0);
    }

    #[test]
    fn mixed_volume_diagonal_is_volume_3d(a in full_polytope(3)) {
        prop_assert!(close(mixed_volume(&[a.clone(), a.clone(), a.clone()]).unwrap(), a.volume(), 1e-12));
    }

    #[test]
    fn newton_ellipsoid_lies_in_the_hull(s in sym_spectrum_2d(), phi in 0.0f64..TAU) {
        let e = newton_ellipsoid(&s).unwrap();
        let hull = convex_hull(&s.points_f64()).unwrap();
        let u = [phi.cos(), phi.sin()];
        prop_assert!(e.support(&u) <= hull.support(&u) + 1e-12);
    }

    #[test]
    fn newton_ellipsoid_scales_quadratically(s in sym_spectrum_2d(), k in 2i64..5) {
        let e = newton_ellipsoid(&s).unwrap();
        let ek = newton_ellipsoid(&s.scaled(k).unwrap()).unwrap();
        for (r, rk) in e.form().iter().zip(ek.form()) {
            for (x, xk) in r.iter().zip(rk) {
                prop_assert!(close(*xk, (k * k) as f64 * x, 1e-12));
            }
        }
    }

    #[test]
    fn system_of_one_matches_the_1d_formula(s in sym_spectrum_1d()) {
        let exact = expected_real_roots_1d(&s).unwrap();
        let est = expected_real_roots(&[s.clone()], 1000, 0).unwrap();
        prop_assert!(close(est.mean, exact, 1e-12));
        prop_assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn probability_is_in_unit_interval(s in sym_spectrum_1d()) {
        let p = prob_real_1d(&s).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
    }

    #[test]
    fn probability_is_in_unit_interval_2d(s in sym_spectrum_2d()) {
        let r = prob_real(&[s.clone(), s.clone()], 10_000, 0).unwrap();
        prop_assert!(r.prob_real > 0.0 && r.prob_real <= 1.0 + 1e-12);
    }

    #[test]
    fn body_probability_ignores_individual_scaling(a in full_polytope(2), b in full_polytope(2), s1 in 0.2f64..5.0, s2 in 0.2f64..5.0) {
        let p = asymptotic_prob_bodies(&[Body::Polytope(a.clone()), Body::Polytope(b.clone())], 10_000, 0).unwrap();
        let q = asymptotic_prob_bodies(
            &[Body::Polytope(a.scaled(s1).unwrap()), Body::Polytope(b.scaled(s2).unwrap())],
            10_000,
            0,
        ).unwrap();
        prop_assert!(close(p.mean, q.mean, 1e-9));
    }

    #[test]
    fn ball_probability_ignores_radius(r in 0.1f64..50.0) {
        let p = asymptotic_prob_bodies(&[Body::Ball { dim: 2, radius: 1.0 }, Body::Ball { dim: 2, radius: 1.0 }], 10_000, 0).unwrap();
        let q = asymptotic_prob_bodies(&[Body::Ball { dim: 2, radius: r }, Body::Ball { dim: 2, radius: r }], 10_000, 0).unwrap();
        prop_assert!(close(p.mean, q.mean, 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn root_count_is_rotation_invariant_1d(s in sym_spectrum_1d(), seed in any::<u64>(), shift in 0.0f64..TAU) {
        let f = sample_trig(&s, &mut sample_rng(seed, 0)).unwrap();
        prop_assert_eq!(count_real_roots_1d(&f).unwrap(), count_real_roots_1d(&f.rotated(&[shift])).unwrap());
    }

    #[test]
    fn root_count_is_rotation_invariant_2d(seed in 0u64..1000, a in 0.0f64..TAU, b in 0.0f64..TAU) {
        let s = interval_grid();
        let mut rng = sample_rng(seed, 0);
        let f1 = sample_trig(&s, &mut rng).unwrap();
        let f2 = sample_trig(&s, &mut rng).unwrap();
        let r = count_real_roots_2d(&f1, &f2).unwrap();
        let q = count_real_roots_2d(&f1.rotated(&[a, b]), &f2.rotated(&[a, b])).unwrap();
        prop_assume!(r.generic && q.generic);
        prop_assert_eq!(r.count(), q.count());
    }

    #[test]
    fn root_count_is_scale_invariant(s in sym_spectrum_1d(), seed in any::<u64>(), c in 1e-3f64..1e3) {
        let f = sample_trig(&s, &mut sample_rng(seed, 0)).unwrap();
        prop_assert_eq!(count_real_roots_1d(&f).unwrap(), count_real_roots_1d(&f.scaled(c)).unwrap());
    }

    #[test]
    fn grid_refinement_never_loses_roots(s in sym_spectrum_1d(), seed in any::<u64>()) {
        let f = sample_trig(&s, &mut sample_rng(seed, 0)).unwrap();
        let coarse = real_roots_1d_with_grid(&f, 4).unwrap().len();
        let fine = real_roots_1d_with_grid(&f, 8).unwrap().len();
        let finer = real_roots_1d_with_grid(&f, 16).unwrap().len();
        prop_assert!(coarse <= fine && fine <= finer);
    }

    #[test]
    fn root_count_is_even_and_bounded(s in sym_spectrum_1d(), seed in any::<u64>()) {
        let f = sample_trig(&s, &mut sample_rng(seed, 0)).unwrap();
        let n = count_real_roots_1d(&f).unwrap();
        let deg = s.max_abs_coord() as usize;
        prop_assert!(n % 2 == 0 && n <= 2 * deg);
    }

    #[test]
    fn zero_count_ignores_coefficient_scaling(re in -3.0f64..3.0, im in -3.0f64..3.0, r in 1.0f64..12.0) {
        let k = Complex64::new(re, im);
        prop_assume!(k.norm() > 1e-2);
        let f = sinh3();
        let a = count_zeros_disk(&f, r).unwrap();
        let b = count_zeros_disk(&f.scaled(k).unwrap(), r).unwrap();
        prop_assume!(a.nudges == 0 && b.nudges == 0);
        prop_assert_eq!(a.count, b.count);
    }

    #[test]
    fn zero_count_is_conjugation_invariant(r in 1.0f64..12.0, seed in any::<u64>()) {
        let f = random_expsum(seed);
        let a = count_zeros_disk(&f, r).unwrap();
        let b = count_zeros_disk(&f.conjugated(), r).unwrap();
        prop_assume!(a.nudges == 0 && b.nudges == 0);
        prop_assert_eq!(a.count, b.count);
    }

    #[test]
    fn zero_count_shift_changes_by_bounded_amount(seed in any::<u64>(), wx in -1.0f64..1.0, wy in -1.0f64..1.0) {
        let f = random_expsum(seed);
        let r = 20.0;
        let a = count_zeros_disk(&f, r).unwrap().count as f64;
        let b = count_zeros_disk(&f.shifted(Complex64::new(wx, wy)), r).unwrap().count as f64;
        // |w| ≤ √2, so the two disks differ inside an annulus of width 2√2;
        // frequencies lie in a box of perimeter 16
        let slope = 16.0 / TAU;
        prop_assert!((a - b).abs() <= 2.0 * 2f64.sqrt() * slope + 6.0);
    }

    #[test]
    fn zero_count_is_monotone_in_radius(seed in any::<u64>(), r in 1.0f64..15.0) {
        let f = random_expsum(seed);
        let a = count_zeros_disk(&f, r).unwrap();
        let b = count_zeros_disk(&f, r + 2.5).unwrap();
        prop_assert!(a.count <= b.count);
    }

    #[test]
    fn pseudovolume_of_real_polytope_is_volume(pts in point_cloud(2)) {
        let p = ComplexPolytope::from_real(&pts).unwrap();
        prop_assume!(p.hull().affine_dim() == 2);
        let v = convex_hull(&pts).unwrap().volume();
        prop_assert!(close(pseudovolume(&p).unwrap(), v, 1e-9));
    }

    #[test]
    fn pseudovolume_of_polygon_is_semiperimeter(pts in point_cloud(2)) {
        let hull = convex_hull(&pts).unwrap();
        prop_assume!(!hull.is_degenerate());
        let p = ComplexPolytope::new(1, &pts).unwrap();
        prop_assert!(close(pseudovolume(&p).unwrap(), hull.perimeter().unwrap() / 2.0, 1e-9));
    }

    #[test]
    fn pseudovolume_symmetries(pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 4), 5..10), t in 0.2f64..3.0, phi in 0.0f64..TAU, w in prop::collection::vec(-5.0f64..5.0, 4)) {
        let p = ComplexPolytope::new(2, &pts).unwrap();
        prop_assume!(p.hull().affine_dim() >= 2);
        let base = pseudovolume(&p).unwrap();
        prop_assert!(close(pseudovolume(&p.scaled(t).unwrap()).unwrap(), t * t * base, 1e-9));
        prop_assert!(close(pseudovolume(&p.translated(&w).unwrap()).unwrap(), base, 1e-9));
        prop_assert!(close(pseudovolume(&p.rotated(phi).unwrap()).unwrap(), base, 1e-9));
    }

    #[test]
    fn float_rendering_is_lossless(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

fn interval_grid() -> Spectrum {
    Spectrum::new((-1..=1).flat_map(|x| (-1..=1).map(move |y| vec![x, y]))).unwrap()
}

fn sinh3() -> ExpSum1D {
    ExpSum1D::new(vec![(Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)), (Complex64::new(-3.0, 0.0), Complex64::new(-1.0, 0.0))])
        .unwrap()
}

/// Three or four terms with frequencies in the box [-2, 2]², generic coefficients.
fn random_expsum(seed: u64) -> ExpSum1D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(3..=4);
    let terms = (0..k)
        .map(|_| {
            let lam = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let c = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..TAU));
            (lam, c)
        })
        .collect();
    ExpSum1D::new(terms).unwrap()
}

#[test]
fn beta_matches_the_defining_integral() {
    for n in 1..=20u32 {
        let q = quadrature::integrate(|x: f64| x * x * (1.0 - x * x).powf((n as f64 - 1.0) / 2.0), -1.0, 1.0, 1e-15).integral;
        assert!((q - beta_n(n)).abs() <= 1e-12, "n = {n}: {q} vs {}", beta_n(n));
    }
}

#[test]
fn interval_spectra_match_closed_form() {
    for m in [1u32, 2, 3, 5] {
        let s = interval_spectrum(m).unwrap();
        let mf = m as f64;
        let target = 2.0 * (mf * (mf + 1.0) / 3.0).sqrt();
        assert!((expected_real_roots_1d(&s).unwrap() - target).abs() <= 1e-12);
        let e = estimate_expected_roots_1d(&s, 4000, 7).unwrap();
        assert!(e.agrees_with(target, 3.0), "m = {m}: {} ± {} vs {target}", e.mean, e.stderr);
    }
    let s = Spectrum::new(vec![vec![-1i64], vec![0], vec![1]]).unwrap();
    let e = estimate_expected_roots_1d(&s, 4000, 7).unwrap();
    assert!(e.agrees_with(2.0 * (2.0f64 / 3.0).sqrt(), 3.0));
}

/// The reported standard error is calibrated: z-scores against a polygon
/// oracle have unit variance across seeds.
#[test]
fn ellipsoid_stderr_is_calibrated() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut zs = Vec::new();
    for _ in 0..10 {
        let mut ell = || {
            let (a, b) = (rng.random_range(0.2..3.0), rng.random_range(0.2..3.0));
            let t: f64 = rng.random_range(0.0..PI);
            let (s, c) = t.sin_cos();
            Ellipsoid::new(vec![vec![a * c * c + b * s * s, (a - b) * s * c], vec![(a - b) * s * c, a * s * s + b * c * c]]).unwrap()
        };
        let (a, b) = (ell(), ell());
        let oracle = mixed_volume(&[a.polygon(256).unwrap(), b.polygon(256).unwrap()]).unwrap();
        for seed in 0..30 {
            let e = mixed_volume_ellipsoids(&[a.clone(), b.clone()], 10_000, seed).unwrap();
            zs.push((e.mean - oracle) / e.stderr);
        }
    }
    let k = zs.len() as f64;
    let mean = zs.iter().sum::<f64>() / k;
    let var = zs.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / (k - 1.0);
    // 300 z-scores: sd of the sample variance is about 0.08
    assert!(mean.abs() < 0.25 && (0.75..1.3).contains(&var), "mean {mean}, var {var}");
}
