// The curve traced by the evaluation map on the sphere: its length and the
// number of times a random hyperplane cuts it.

use kacfta::mc_lab::{crofton_check, curve_length_check, evaluation_identities};
use kacfta::spectra::{interval_spectrum, Spectrum};

pub fn run() -> kacfta::Result<()> {
    let spectra = [
        Spectrum::new(vec![vec![-1i64], vec![1]])?,
        interval_spectrum(3)?,
        Spectrum::new(vec![vec![-5i64], vec![-2], vec![0], vec![2], vec![5]])?,
    ];
    for s in &spectra {
        let id = evaluation_identities(s, 50, 0)?;
        let len = curve_length_check(s)?;
        let cuts = crofton_check(s, 4000, 0)?;
        println!("{s:?}");
        println!("  identity residuals {:.1e} {:.1e}", id.norm_residual, id.derivative_residual.unwrap_or(0.0));
        println!("  length {:.12} (closed form {:.12})", len.numeric, len.closed_form);
        println!("  crossings {:.4} ± {:.4}, length/pi {:.4}", cuts.estimate.mean, cuts.estimate.stderr, cuts.predicted);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
