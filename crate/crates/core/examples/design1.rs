//! Simulates one Design-1 sample and fits the MRC and LAD estimators.
//!
//! `cargo run --release -p bundlechoice-core --example design1 -- 1000 7`

use bundlechoice_core::designs::{simulate_cross, DesignSpec};
use bundlechoice_core::lad::{estimate_lad_cross, LadConfig};
use bundlechoice_core::mrc::{estimate_mrc, MrcConfig};

fn main() -> Result<(), bundlechoice_core::Error> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);

    let spec = DesignSpec::builtin(1)?;
    let data = simulate_cross(&spec, n, seed)?;
    println!("N = {n}, seed = {seed}, truth: beta_2 = gamma_2 = rho1_1 = rho2_1 = 1");

    let mrc = estimate_mrc(&data, &MrcConfig::default().with_seed(seed))?;
    for (name, v) in mrc.names.iter().zip(&mrc.estimates) {
        println!("mrc  {name:>8} = {v:.3}");
    }
    let lad = estimate_lad_cross(&data, &spec.lad_layout(), &LadConfig::default().with_seed(seed))?;
    for (name, v) in lad.names.iter().zip(&lad.estimates) {
        println!("lad  {name:>8} = {v:.3}");
    }
    Ok(())
}
