//! Five-level rate equations built from the dressed channels, compared with
//! the full master equation.
//!
//! ```text
//! cargo run --example rate_model
//! ```

use gse::hilbert::SystemParams;
use gse::model::{Model, MuChoice};
use gse::ratemodel::STATES;
use gse::spectrum::default_grid;

fn main() -> gse::Result<()> {
    let params = SystemParams::resonant(0.1, 0.5e-6, 7e-4);
    for mu in [MuChoice::OmegaG, MuChoice::OmegaGPlusOmegaMinus, MuChoice::OmegaGPlusOmegaPlus] {
        let m = Model::build(params, 8, mu)?;
        let r = m.rates();
        let pops = m.rate_populations()?;
        let rate = m.rate_fluxes()?;
        let me = Model::spectral_fluxes(&m.spectrum(&default_grid())?);
        println!("mu = {mu}");
        println!(
            "  in: 0->G {:.3e} 0->+ {:.3e} 0->- {:.3e} 1->G {:.3e} 1->+ {:.3e} 1->- {:.3e}",
            r.in_0g, r.in_0p, r.in_0m, r.in_1g, r.in_1p, r.in_1m
        );
        let p = pops.to_array();
        let listed: Vec<String> = STATES.iter().zip(p).map(|(s, v)| format!("{s} {v:.4e}")).collect();
        println!("  populations: {}", listed.join("  "));
        println!("  {:>8} {:>11} {:>11}", "", "rates", "master eq.");
        for (name, a, b) in [("f_C", rate.central, me.central), ("f_+", rate.plus, me.plus), ("f_-", rate.minus, me.minus)] {
            println!("  {name:>8} {a:>11.4e} {b:>11.4e}");
        }
    }
    Ok(())
}
