// Newton polytopes of a few spectra and the root counts they bound.

use kacfta::convex::{convex_hull, mixed_volume};
use kacfta::kac::bkk_count;
use kacfta::spectra::{ball_spectrum, Spectrum};

pub fn run() -> kacfta::Result<()> {
    let square = Spectrum::new((-1..=1).flat_map(|x| (-1..=1).map(move |y| vec![x, y])))?;
    let diamond = Spectrum::new(vec![vec![0i64, 0], vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]])?;
    let disk = ball_spectrum(2, 3.0)?;

    for (name, s) in [("square", &square), ("diamond", &diamond), ("disk r=3", &disk)] {
        let hull = convex_hull(&s.points_f64())?;
        println!("{name:>9}: {} points, hull has {} vertices, area {}", s.len(), hull.vertices().len(), hull.volume());
    }

    // mixed area of the square and the diamond
    let sq = convex_hull(&square.points_f64())?;
    let di = convex_hull(&diamond.points_f64())?;
    println!("V(square, diamond) = {}", mixed_volume(&[sq, di])?);

    for (a, b) in [(&square, &square), (&square, &diamond), (&diamond, &disk)] {
        println!("BKK count {:>4}", bkk_count(&[a.clone(), b.clone()])?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
