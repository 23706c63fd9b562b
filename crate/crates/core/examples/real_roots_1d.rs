// Expected number of real roots of a random trigonometric polynomial on the
// circle: closed form against sampled root counts.

use kacfta::kac::{asymptotic_prob_ball, expected_real_roots_1d, prob_real_1d};
use kacfta::mc_lab::estimate_expected_roots_1d;
use kacfta::spectra::{interval_spectrum, Spectrum};

pub fn run() -> kacfta::Result<()> {
    println!("{:>3} {:>10} {:>18} {:>8}", "m", "exact", "sampled", "P(real)");
    for m in [1u32, 2, 3, 5, 8] {
        let s = interval_spectrum(m)?;
        let e = estimate_expected_roots_1d(&s, 2000, 0)?;
        println!(
            "{m:>3} {:>10.5} {:>10.4} ± {:.4} {:>8.5}",
            expected_real_roots_1d(&s)?,
            e.mean,
            e.stderr,
            prob_real_1d(&s)?
        );
    }
    // lacunary: only the top frequency and zero
    let sparse = Spectrum::new(vec![vec![-6i64], vec![0], vec![6]])?;
    println!("{{-6, 0, 6}}: {}", expected_real_roots_1d(&sparse)?);
    println!("limit 1/sqrt(3) = {}", asymptotic_prob_ball(1)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
