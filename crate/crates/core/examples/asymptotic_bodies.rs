// Spectra that fill out a convex body: the Newton ellipsoid of the dilates
// converges to the body's own ellipsoid, and the real fraction to a ratio of
// mixed volumes.

use kacfta::convex::{convex_hull, hausdorff_distance, Body};
use kacfta::ellipsoids::{body_ellipsoid, newton_ellipsoid};
use kacfta::kac::{asymptotic_prob_ball, asymptotic_prob_bodies};
use kacfta::spectra::dilate_spectrum;

pub fn run() -> kacfta::Result<()> {
    let disk = Body::Ball { dim: 2, radius: 1.0 };
    let limit = body_ellipsoid(&disk)?;
    for m in [4.0, 8.0, 16.0, 32.0] {
        let e = newton_ellipsoid(&dilate_spectrum(&disk, m)?)?.scaled(1.0 / m);
        println!("m = {m:>4}: distance to limit {:.6}", hausdorff_distance(&e, &limit)?);
    }

    let square = Body::Polytope(convex_hull(&[vec![-1.0, -1.0], vec![1.0, -1.0], vec![1.0, 1.0], vec![-1.0, 1.0]])?);
    let triangle = Body::Polytope(convex_hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])?);
    println!("disk,disk         {:.6}", asymptotic_prob_ball(2)?);
    for (name, pair) in [
        ("square,square", [square.clone(), square.clone()]),
        ("square,triangle", [square.clone(), triangle.clone()]),
        ("disk,triangle", [disk.clone(), triangle.clone()]),
    ] {
        let p = asymptotic_prob_bodies(&pair, 20_000, 0)?;
        println!("{name:<17} {:.6} ± {:.6}", p.mean, p.stderr);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
