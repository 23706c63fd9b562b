// Random systems of two trigonometric polynomials on the torus: the
// Newton-ellipsoid prediction against certified root counts.

use kacfta::ellipsoids::newton_ellipsoid;
use kacfta::kac::prob_real;
use kacfta::mc::sample_rng;
use kacfta::mc_lab::{estimate_expected_roots_2d, real_roots_2d, sample_trig};
use kacfta::spectra::Spectrum;

pub fn run() -> kacfta::Result<()> {
    let grid = Spectrum::new((-1..=1).flat_map(|x| (-1..=1).map(move |y| vec![x, y])))?;
    println!("ellipsoid form {:?}", newton_ellipsoid(&grid)?.form());

    let report = prob_real(&[grid.clone(), grid.clone()], 10_000, 0)?;
    println!(
        "predicted {:.6} real of {} total, fraction {:.6}",
        report.expected_real_roots, report.total_roots, report.prob_real
    );

    let mut rng = sample_rng(3, 0);
    let f = sample_trig(&grid, &mut rng)?;
    let g = sample_trig(&grid, &mut rng)?;
    let roots = real_roots_2d(&f, &g)?;
    println!("one draw: {} roots in {} cells", roots.count(), roots.cells);
    for r in &roots.roots {
        println!("  ({:.6}, {:.6})", r[0], r[1]);
    }

    let e = estimate_expected_roots_2d(&grid, &grid, 400, 0)?;
    println!("sampled {:.4} ± {:.4}, redraws {}", e.estimate.mean, e.estimate.stderr, e.redraws);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
