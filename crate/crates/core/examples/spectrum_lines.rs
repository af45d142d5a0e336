//! Emission spectrum at η = 0.1 with the reservoir at the ground-state level
//! and above both polaritons. Writes `omega,S_gse,S_el` to the given path
//! (default `spectrum_eta0.1.csv`) and prints the line fluxes.
//!
//! ```text
//! cargo run --example spectrum_lines -- /tmp/spectrum.csv
//! ```

use std::fmt::Write as _;

use gse::hilbert::SystemParams;
use gse::model::{Model, MuChoice};
use gse::spectrum::default_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "spectrum_eta0.1.csv".into());
    let params = SystemParams::resonant(0.1, 0.5e-6, 7e-4);
    let grid = default_grid();
    let mut columns = Vec::new();
    for mu in [MuChoice::OmegaG, MuChoice::OmegaGPlusOmegaPlus] {
        let m = Model::build(params, 8, mu)?;
        let spec = m.spectrum(&grid)?;
        let f = Model::spectral_fluxes(&spec);
        println!("mu = {mu}");
        println!("  f_C {:.4e}  f_+ {:.4e}  f_- {:.4e}", f.central, f.plus, f.minus);
        println!("  integral {:.4e}  Gamma_cav<X+X-> {:.4e}", spec.total_flux(), m.emission_rate());
        columns.push(spec.values);
    }
    let mut out = String::from("# eta = 0.1, gamma = 5e-7, gamma_cav = 7e-4\nomega,S_gse,S_el\n");
    for (k, w) in grid.iter().enumerate() {
        writeln!(out, "{w:e},{:e},{:e}", columns[0][k], columns[1][k])?;
    }
    std::fs::write(&path, out)?;
    println!("wrote {path}");
    Ok(())
}
