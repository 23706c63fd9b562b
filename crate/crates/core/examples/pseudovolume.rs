// Faces of polytopes in complex space, their tilt against the complex
// structure and the face sum that gives zero densities.

use std::f64::consts::PI;

use kacfta::expsum::ExpSum1D;
use kacfta::zerofan::{enumerate_n_faces, pseudovolume, ray_density_1d, zero_density_real_case, ComplexPolytope};

pub fn run() -> kacfta::Result<()> {
    let triangle = ComplexPolytope::new(1, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])?;
    for face in enumerate_n_faces(&triangle)? {
        println!("edge {:?}: length {:.6}, fraction {}", face.vertices, face.n_volume, face.cone_fraction);
    }
    println!("triangle: {:.12}", pseudovolume(&triangle)?);

    let square = ComplexPolytope::from_real(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]])?;
    println!("real square: {:.12}", pseudovolume(&square)?);

    // a tilted square in C^2 spanned by (1, 0) and (i sin t, cos t)
    let t = PI / 5.0;
    let (s, c) = t.sin_cos();
    let u = [1.0, 0.0, 0.0, 0.0];
    let v = [0.0, s, c, 0.0];
    let pts: Vec<Vec<f64>> = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        .iter()
        .map(|&(a, b)| (0..4).map(|k| a * u[k] + b * v[k]).collect())
        .collect();
    let tilted = ComplexPolytope::new(2, &pts)?;
    for face in enumerate_n_faces(&tilted)? {
        println!("tilted face: cosine {:.6} (cos^2 t = {:.6})", face.cosine, c * c);
    }

    let segment = ComplexPolytope::from_real(&[vec![-3.0], vec![3.0]])?;
    println!("real density, m = 3, length 2: {:.6}", zero_density_real_case(&[segment], 2.0)?);

    let f: ExpSum1D = "3 0 1 0\n-3 0 -1 0\n".parse()?;
    for r in ray_density_1d(&f)? {
        println!("ray {:?}: {:.6} zeros per unit length", r.direction, r.density);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
