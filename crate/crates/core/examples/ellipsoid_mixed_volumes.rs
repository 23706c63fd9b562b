// Mixed volumes of ellipsoids by sampling random determinants, next to the
// exact value for balls and a fine polygon in the plane.

use kacfta::convex::mixed_volume;
use kacfta::ellipsoids::{ellipsoid_volume, mixed_volume_ellipsoids, Ellipsoid};
use kacfta::kac::sigma_n;

pub fn run() -> kacfta::Result<()> {
    let balls = [Ellipsoid::ball(3, 1.0)?, Ellipsoid::ball(3, 2.0)?, Ellipsoid::ball(3, 3.0)?];
    let e = mixed_volume_ellipsoids(&balls, 20_000, 0)?;
    println!("balls 1,2,3: {:.6} ± {:.1e}, exact {:.6}", e.mean, e.stderr, sigma_n(3) * 6.0);

    let a = Ellipsoid::new(vec![vec![2.0, 0.5], vec![0.5, 0.3]])?;
    let b = Ellipsoid::from_diagonal(&[0.2, 1.5])?;
    let e = mixed_volume_ellipsoids(&[a.clone(), b.clone()], 50_000, 0)?;
    let oracle = mixed_volume(&[a.polygon(256)?, b.polygon(256)?])?;
    println!("planar pair: {:.6} ± {:.6}, 256-gon {:.6}", e.mean, e.stderr, oracle);
    println!("areas {:.6} {:.6}", ellipsoid_volume(&a), ellipsoid_volume(&b));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
