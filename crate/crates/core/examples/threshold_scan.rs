//! Scans μ through the lower polariton threshold at η = 0.1.
//!
//! ```text
//! cargo run --example threshold_scan
//! ```

use gse::hilbert::SystemParams;
use gse::model::{Model, MuChoice};
use gse::spectrum::default_grid;

fn main() -> gse::Result<()> {
    let params = SystemParams::resonant(0.1, 0.5e-6, 7e-4);
    let probe = Model::build(params, 8, MuChoice::OmegaGPlusOmegaMinus)?;
    let threshold = probe.params.mu;
    println!("threshold omega_G + omega_- = {threshold:.6}");
    println!("{:>10} {:>11} {:>11} {:>11}", "mu-thr", "f_C", "f_-", "f_+");
    for step in -5..=5 {
        let d = 0.004 * step as f64;
        let m = Model::build(params, 8, MuChoice::Absolute(threshold + d))?;
        let f = Model::spectral_fluxes(&m.spectrum(&default_grid())?);
        println!("{d:>+10.3} {:>11.4e} {:>11.4e} {:>11.4e}", f.central, f.minus, f.plus);
    }
    Ok(())
}
