//! Dressed energies of the one-electron Rabi sector against the coupling.
//!
//! ```text
//! cargo run --example dressed_levels
//! ```

use gse::hilbert::{ModelSpace, SystemParams};
use gse::rabi::{dressed_basis, ground_photon_number, hamiltonian};

fn main() -> gse::Result<()> {
    let space = ModelSpace::new(12)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>12}", "eta", "omega_G", "omega_-", "omega_+", "split/2eta", "<n>_G");
    for eta in [0.0, 0.02, 0.05, 0.1, 0.2, 0.3] {
        let params = SystemParams::resonant(eta, 0.0, 0.0);
        let basis = dressed_basis(&hamiltonian(&params, &space), &space)?;
        let split = basis.omega_plus() - basis.omega_minus();
        let ratio = if eta > 0.0 { split / (2.0 * eta) } else { f64::NAN };
        println!(
            "{eta:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.3e}",
            basis.omega_g(),
            basis.omega_minus(),
            basis.omega_plus(),
            ratio,
            ground_photon_number(&basis, &space)
        );
    }
    // The virtual photon content of |G⟩ grows as η²/4 at weak coupling.
    Ok(())
}
