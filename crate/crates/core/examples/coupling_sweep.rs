//! Line fluxes against η from the master equation, next to the closed forms,
//! for both reservoir settings.
//!
//! ```text
//! cargo run --example coupling_sweep
//! ```

use gse::hilbert::SystemParams;
use gse::model::{Model, MuChoice};
use gse::ratemodel::{analytic_el, analytic_gse};
use gse::spectrum::default_grid;

const GAMMA: f64 = 0.5e-6;
const GAMMA_CAV: f64 = 7e-4;

fn main() -> gse::Result<()> {
    let grid = default_grid();
    for (mu, analytic) in [
        (MuChoice::OmegaG, analytic_gse as fn(f64, f64, f64) -> _),
        (MuChoice::OmegaGPlusOmegaPlus, analytic_el),
    ] {
        println!("mu = {mu}");
        println!("{:>6} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}", "eta", "f_C", "f_C*", "f_+", "f_+*", "f_-", "f_-*");
        for eta in [0.02, 0.04, 0.06, 0.08, 0.1] {
            let m = Model::build(SystemParams::resonant(eta, GAMMA, GAMMA_CAV), 8, mu)?;
            let f = Model::spectral_fluxes(&m.spectrum(&grid)?);
            let a = analytic(eta, GAMMA, GAMMA_CAV);
            println!(
                "{eta:>6.2} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
                f.central, a.central, f.plus, a.plus, f.minus, a.minus
            );
        }
        println!();
    }
    println!("* closed-form lowest-order fluxes");
    Ok(())
}
