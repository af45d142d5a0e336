//! Steady state of the full master equation and its physical checks.
//!
//! ```text
//! cargo run --example steady_state
//! ```

use gse::hilbert::SystemParams;
use gse::model::{Model, MuChoice};

fn main() -> gse::Result<()> {
    let params = SystemParams::resonant(0.1, 0.5e-6, 7e-4);
    for mu in [MuChoice::OmegaG, MuChoice::OmegaGPlusOmegaPlus] {
        let m = Model::build(params, 8, mu)?;
        let rho = &m.steady;
        let p = rho.populations();
        let b = &m.basis;
        println!("mu = {mu} ({:.6}), Liouvillian blocks: {}", m.params.mu, m.liouvillian.block_sizes().len());
        println!(
            "  P(s,0) {:.6e}  P(s,1) {:.6e}  P(G) {:.6e}  P(+) {:.6e}  P(-) {:.6e}",
            p[b.empty(0)],
            p[b.empty(1)],
            p[b.ground()],
            p[b.plus()],
            p[b.minus()]
        );
        println!(
            "  <n> {:.4e}  current {:.4e}  emission {:.4e}",
            m.photon_number(),
            m.electron_current(),
            m.emission_rate()
        );
        println!(
            "  |Tr-1| {:.1e}  hermiticity {:.1e}  min eigenvalue {:.1e}",
            (rho.trace() - 1.0).norm(),
            rho.hermiticity_defect(),
            rho.min_eigenvalue()?
        );
    }
    Ok(())
}
