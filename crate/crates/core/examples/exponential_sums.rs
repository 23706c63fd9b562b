// Zeros of exponential sums in growing disks. The count grows linearly in
// the radius with slope set by the perimeter of the Newton polygon.

use kacfta::expsum::{count_zeros_disk, density_slope, newton_polygon, predicted_count, ExpSum1D};

pub fn run() -> kacfta::Result<()> {
    let sums: [(&str, &str); 3] = [
        ("exp(2 pi i z) - 1", "0 -6.283185307179586 1 0\n0 0 -1 0\n"),
        ("2 sinh(3z)", "3 0 1 0\n-3 0 -1 0\n"),
        ("1 + e^z + e^{iz}", "0 0 1 0\n1 0 1 0\n0 -1 1 0\n"),
    ];
    let radii = [10.0, 20.0, 40.0, 80.0];
    for (name, text) in sums {
        let f: ExpSum1D = text.parse()?;
        let p = newton_polygon(&f)?;
        let small = count_zeros_disk(&f, 5.5)?;
        let s = density_slope(&f, &radii)?;
        println!("{name}");
        println!("  polygon with {} vertices", p.vertices().len());
        println!("  N(5.5) = {} (predicted {:.3})", small.count, small.predicted);
        println!("  slope {:.4}, predicted {:.4}, max residual {:.2}", s.slope, predicted_count(&f, 1.0)?, s.max_residual);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
