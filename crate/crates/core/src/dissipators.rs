//! Dressed-state jump channels for the three baths.
//!
//! Every channel is a single dressed transition `|to⟩⟨from|` with a golden-rule
//! rate `Γ·|⟨to|O|from⟩|²`, where `O` is the bare coupling operator of the bath:
//!
//! * cavity: `X = a + a†`, downward transitions only (zero temperature);
//! * injection: `O_in = (|g⟩ + |e⟩)⟨s| ⊗ 1`, gated by the chemical potential;
//! * extraction: `O_out = O_in†`, ungated (the drain is a pure sink).
//!
//! All operators here are expressed in the dressed basis, where the
//! Hamiltonian is `diag(E)`.

use crate::hilbert::{Electronic, ModelSpace};
use crate::numerics::{ComplexMatrix, ONE, ZERO};
use crate::rabi::{DressedBasis, DEGENERACY_TOLERANCE};

/// Transitions whose squared matrix element is below this are dropped.
pub const MIN_WEIGHT: f64 = 1e-14;

/// Slack on the Heaviside argument so that thresholds computed from the same
/// dressed energies open exactly (`Θ(0) = 1`) despite rounding.
pub const GATE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bath {
    Cavity,
    ElectronIn,
    ElectronOut,
}

/// One dressed transition `from → to`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpChannel {
    pub from: usize,
    pub to: usize,
    pub rate: f64,
    /// `E_from − E_to`
    pub freq: f64,
    pub bath: Bath,
}

impl JumpChannel {
    /// Dressed-basis operator `|to⟩⟨from|`.
    pub fn operator(&self, dim: usize) -> ComplexMatrix {
        let mut op = ComplexMatrix::zeros(dim, dim);
        op[(self.to, self.from)] = ONE;
        op
    }
}

fn quadrature(space: &ModelSpace) -> ComplexMatrix {
    let a = space.annihilation();
    &a + &a.adjoint()
}

/// Bare extraction operator `|s⟩(⟨g| + ⟨e|) ⊗ 1`.
pub fn extraction_operator(space: &ModelSpace) -> ComplexMatrix {
    &space.transition(Electronic::Ground, Electronic::Empty)
        + &space.transition(Electronic::Excited, Electronic::Empty)
}

/// Bare injection operator `(|g⟩ + |e⟩)⟨s| ⊗ 1`.
pub fn injection_operator(space: &ModelSpace) -> ComplexMatrix {
    extraction_operator(space).adjoint()
}

/// Cavity decay: one channel per pair `E_i < E_j` with rate `Γ_cav·|⟨i|X|j⟩|²`.
pub fn channels_cavity(basis: &DressedBasis, space: &ModelSpace, gamma_cav: f64) -> Vec<JumpChannel> {
    let x = basis.to_dressed(&quadrature(space));
    let e = basis.energies();
    let mut out = Vec::new();
    for j in 0..basis.dim() {
        for i in 0..basis.dim() {
            let freq = e[j] - e[i];
            let weight = x[(i, j)].norm_sqr();
            if freq > DEGENERACY_TOLERANCE && weight >= MIN_WEIGHT {
                out.push(JumpChannel {
                    from: j,
                    to: i,
                    rate: gamma_cav * weight,
                    freq,
                    bath: Bath::Cavity,
                });
            }
        }
    }
    out
}

/// Extraction from every one-electron eigenstate `j` into every `|s, n⟩`.
pub fn channels_out(basis: &DressedBasis, space: &ModelSpace, gamma_out: f64) -> Vec<JumpChannel> {
    let o = basis.to_dressed(&extraction_operator(space));
    let e = basis.energies();
    let mut out = Vec::new();
    for j in basis.occupied() {
        for n in 0..basis.n_empty() {
            let to = basis.empty(n);
            let weight = o[(to, j)].norm_sqr();
            if weight >= MIN_WEIGHT {
                out.push(JumpChannel {
                    from: j,
                    to,
                    rate: gamma_out * weight,
                    freq: e[j] - e[to],
                    bath: Bath::ElectronOut,
                });
            }
        }
    }
    out
}

/// Injection `|s, n⟩ → j`, open when `μ + n·ω_C − E_j ≥ 0`.
///
/// `n·ω_C` is read off the dressed energies as `E_{s,n} − E_{s,0}`, so the
/// gate never sees the empty-state offset ω_s.
pub fn channels_in(
    basis: &DressedBasis,
    space: &ModelSpace,
    gamma_in: f64,
    mu: f64,
) -> Vec<JumpChannel> {
    let o = basis.to_dressed(&injection_operator(space));
    let e = basis.energies();
    let vacuum = e[basis.empty(0)];
    let mut out = Vec::new();
    for n in 0..basis.n_empty() {
        let from = basis.empty(n);
        let photons = e[from] - vacuum;
        for j in basis.occupied() {
            let weight = o[(j, from)].norm_sqr();
            if weight < MIN_WEIGHT || mu + photons - e[j] < -GATE_TOLERANCE {
                continue;
            }
            out.push(JumpChannel {
                from,
                to: j,
                rate: gamma_in * weight,
                freq: e[from] - e[j],
                bath: Bath::ElectronIn,
            });
        }
    }
    out
}

/// Positive- and negative-frequency parts of `X = a + a†` in the dressed basis:
/// `X⁻ = Σ_{E_j > E_i} ⟨i|X|j⟩ |i⟩⟨j|` and `X⁺ = (X⁻)†`.
pub fn x_pm(basis: &DressedBasis, space: &ModelSpace) -> (ComplexMatrix, ComplexMatrix) {
    let x = basis.to_dressed(&quadrature(space));
    let e = basis.energies();
    let minus = ComplexMatrix::from_fn(basis.dim(), basis.dim(), |i, j| {
        if e[j] - e[i] > DEGENERACY_TOLERANCE {
            x[(i, j)]
        } else {
            ZERO
        }
    });
    let plus = minus.adjoint();
    (minus, plus)
}

/// Sum of the rates of the channels `from → to` (0 when absent).
pub fn rate_between(channels: &[JumpChannel], from: usize, to: usize) -> f64 {
    channels
        .iter()
        .filter(|c| c.from == from && c.to == to)
        .fold(0.0, |acc, c| acc + c.rate)
}

/// Total outgoing rate of each dressed state.
pub fn decay_rates(channels: &[JumpChannel], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for c in channels {
        out[c.from] += c.rate;
    }
    out
}
