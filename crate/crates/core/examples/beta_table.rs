// Exact values of the moment integrals and the limiting probability that a
// root is real for spectra filling a ball.

use kacfta::kac::{asymptotic_prob_ball, beta_exact, sigma_exact, MAX_EXACT};

pub fn run() -> kacfta::Result<()> {
    for n in 1..=MAX_EXACT {
        let b = beta_exact(n)?;
        println!("n = {n:>2}  beta = {:<18} {:.12}", b.to_string(), b.value());
    }
    for n in 1..=6 {
        println!("n = {n}  ball volume {:<12} limit {:.10}", sigma_exact(n)?.to_string(), asymptotic_prob_ball(n)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
