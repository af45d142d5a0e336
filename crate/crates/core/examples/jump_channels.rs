//! Lists the dressed jump channels of the three baths at one parameter point.
//!
//! ```text
//! cargo run --example jump_channels -- 0.1
//! ```

use gse::dissipators::Bath;
use gse::hilbert::SystemParams;
use gse::model::{Model, MuChoice};

fn main() -> gse::Result<()> {
    let eta: f64 = std::env::args().nth(1).map_or(0.1, |s| s.parse().expect("eta must be a number"));
    let model = Model::build(SystemParams::resonant(eta, 0.5e-6, 7e-4), 4, MuChoice::OmegaGPlusOmegaPlus)?;
    let b = &model.basis;
    println!("eta = {eta}, mu = {:.6} (omega_G + omega_+)", model.params.mu);
    for bath in [Bath::Cavity, Bath::ElectronIn, Bath::ElectronOut] {
        let mut channels: Vec<_> = model.channels.iter().filter(|c| c.bath == bath).collect();
        channels.sort_by(|a, c| c.rate.total_cmp(&a.rate));
        println!("\n{bath:?}: {} channels, strongest:", channels.len());
        for c in channels.iter().take(8) {
            println!(
                "  {:<12} -> {:<12} rate {:.4e}  freq {:+.5}",
                format!("{:?}", b.level(c.from)),
                format!("{:?}", b.level(c.to)),
                c.rate,
                c.freq
            );
        }
    }
    Ok(())
}
