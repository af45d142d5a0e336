//! End-to-end assembly: Hamiltonian, dressed basis, channels, generator and
//! steady state for one parameter point.

use std::fmt;
use std::str::FromStr;

use crate::dissipators::{channels_cavity, channels_in, channels_out, x_pm, Bath, JumpChannel};
use crate::error::{Error, Result};
use crate::hilbert::{ModelSpace, SystemParams};
use crate::liouvillian::{build_liouvillian, steady_state, DensityOperator, Superoperator};
use crate::numerics::ComplexMatrix;
use crate::rabi::{dressed_basis, hamiltonian, DressedBasis};
use crate::ratemodel::{self, Fluxes, Populations, RateSet};
use crate::spectrum::{default_windows, resolved_spectrum, total_emission_rate, Peak, Spectrum};

/// How the chemical potential is chosen. Symbolic choices are resolved after
/// diagonalisation since the dressed energies depend on the coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MuChoice {
    Absolute(f64),
    /// `μ = ω_G`
    OmegaG,
    /// `μ = ω_G + ω_−`, the lower polariton threshold
    OmegaGPlusOmegaMinus,
    /// `μ = ω_G + ω_+`, both polaritons open
    OmegaGPlusOmegaPlus,
    /// `μ = ω_+`
    OmegaPlus,
}

impl MuChoice {
    pub fn resolve(self, basis: &DressedBasis) -> f64 {
        match self {
            MuChoice::Absolute(mu) => mu,
            MuChoice::OmegaG => basis.omega_g(),
            MuChoice::OmegaGPlusOmegaMinus => basis.omega_g() + basis.omega_minus(),
            MuChoice::OmegaGPlusOmegaPlus => basis.omega_g() + basis.omega_plus(),
            MuChoice::OmegaPlus => basis.omega_plus(),
        }
    }
}

impl FromStr for MuChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega_G" => Ok(MuChoice::OmegaG),
            "omega_G_plus_omega_minus" => Ok(MuChoice::OmegaGPlusOmegaMinus),
            "omega_G_plus_omega_plus" => Ok(MuChoice::OmegaGPlusOmegaPlus),
            "omega_plus" => Ok(MuChoice::OmegaPlus),
            other => Err(Error::config(
                "mu",
                format!(
                    "unknown symbol `{other}` (expected a number, omega_G, omega_G_plus_omega_minus, \
                     omega_G_plus_omega_plus or omega_plus)"
                ),
            )),
        }
    }
}

impl fmt::Display for MuChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuChoice::Absolute(mu) => write!(f, "{mu:e}"),
            MuChoice::OmegaG => f.write_str("omega_G"),
            MuChoice::OmegaGPlusOmegaMinus => f.write_str("omega_G_plus_omega_minus"),
            MuChoice::OmegaGPlusOmegaPlus => f.write_str("omega_G_plus_omega_plus"),
            MuChoice::OmegaPlus => f.write_str("omega_plus"),
        }
    }
}

/// Everything computed for one parameter point.
#[derive(Clone, Debug)]
pub struct Model {
    /// Parameters with μ resolved.
    pub params: SystemParams,
    pub space: ModelSpace,
    pub basis: DressedBasis,
    pub channels: Vec<JumpChannel>,
    pub liouvillian: Superoperator,
    pub steady: DensityOperator,
    pub x_minus: ComplexMatrix,
    pub x_plus: ComplexMatrix,
}

impl Model {
    /// Builds the model; `params.mu` is ignored in favour of `mu`.
    pub fn build(params: SystemParams, n_max: usize, mu: MuChoice) -> Result<Self> {
        let space = ModelSpace::new(n_max)?;
        params.with_mu(0.0).validate()?;
        let basis = dressed_basis(&hamiltonian(&params, &space), &space)?;
        let params = params.with_mu(mu.resolve(&basis));
        params.validate()?;
        let mut channels = channels_cavity(&basis, &space, params.gamma_cav);
        channels.extend(channels_out(&basis, &space, params.gamma_out));
        channels.extend(channels_in(&basis, &space, params.gamma_in, params.mu));
        let liouvillian = build_liouvillian(&basis.hamiltonian(), &channels)?;
        let steady = steady_state(&liouvillian)?;
        let (x_minus, x_plus) = x_pm(&basis, &space);
        Ok(Self {
            params,
            space,
            basis,
            channels,
            liouvillian,
            steady,
            x_minus,
            x_plus,
        })
    }

    /// Spectrum on `grid`, split into the central and polariton lines.
    pub fn spectrum(&self, grid: &[f64]) -> Result<Spectrum> {
        let spacing = if grid.len() > 1 { grid[1] - grid[0] } else { 0.0 };
        if spacing > 0.5 * self.params.gamma_cav {
            log::warn!(
                "grid spacing {spacing:e} is coarse against gamma_cav = {:e}; line fluxes lose accuracy",
                self.params.gamma_cav
            );
        }
        let windows = default_windows(&self.basis, spacing);
        resolved_spectrum(
            &self.liouvillian,
            &self.steady,
            &self.x_minus,
            &self.x_plus,
            grid,
            self.params.gamma_cav,
            self.basis.energies(),
            &windows,
        )
    }

    /// Line fluxes from a spectrum computed by [`spectrum`](Self::spectrum).
    pub fn spectral_fluxes(spec: &Spectrum) -> Fluxes {
        let get = |p| spec.peak_flux(p).unwrap_or(f64::NAN);
        Fluxes {
            central: get(Peak::Central),
            plus: get(Peak::Plus),
            minus: get(Peak::Minus),
        }
    }

    pub fn rates(&self) -> RateSet {
        ratemodel::extract_rates(&self.basis, &self.channels)
    }

    pub fn rate_populations(&self) -> Result<Populations> {
        ratemodel::rate_steady_state(&ratemodel::rate_matrix(&self.rates()))
    }

    pub fn rate_fluxes(&self) -> Result<Fluxes> {
        Ok(ratemodel::fluxes(&self.rate_populations()?, &self.rates()))
    }

    /// Electrons per unit time leaving through the drain in the steady state.
    pub fn electron_current(&self) -> f64 {
        let p = self.steady.populations();
        self.channels
            .iter()
            .filter(|c| c.bath == Bath::ElectronOut)
            .map(|c| c.rate * p[c.from])
            .sum()
    }

    /// `Γ_cav⟨X⁺X⁻⟩` in the steady state.
    pub fn emission_rate(&self) -> f64 {
        total_emission_rate(&self.steady, &self.x_minus, &self.x_plus, self.params.gamma_cav)
    }

    /// Steady-state `⟨a†a⟩`.
    pub fn photon_number(&self) -> f64 {
        let n = self.basis.to_dressed(&self.space.photon_number());
        self.steady.expectation(&n).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn symbols_round_trip() {
        for s in ["omega_G", "omega_G_plus_omega_minus", "omega_G_plus_omega_plus", "omega_plus"] {
            assert_eq!(s.parse::<MuChoice>().unwrap().to_string(), s);
        }
        assert!(matches!("omega_X".parse::<MuChoice>(), Err(Error::Config { path, .. }) if path == "mu"));
    }

    #[test]
    fn dark_current() {
        let m = Model::build(SystemParams::resonant(0.0, 0.5e-6, 7e-4), 6, MuChoice::Absolute(0.0)).unwrap();
        assert_relative_eq!(m.electron_current(), 0.25e-6, epsilon = 1e-12);
        assert!(m.emission_rate().abs() < 1e-16);
    }

    #[test]
    fn symbolic_mu_follows_coupling() {
        let m = Model::build(SystemParams::resonant(0.1, 0.5e-6, 7e-4), 6, MuChoice::OmegaGPlusOmegaPlus).unwrap();
        assert_eq!(m.params.mu, m.basis.energy(m.basis.plus()));
        let rates = m.rates();
        assert!(rates.in_0p > 0.0 && rates.in_0m > 0.0);
    }
}
