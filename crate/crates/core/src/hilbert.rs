//! Composite space {|s⟩, |g⟩, |e⟩} ⊗ Fock(n_max) and its elementary operators.
//!
//! Units throughout the crate: ħ = 1 and ω_C = 1 by convention, so every
//! energy, rate and frequency is a dimensionless multiple of the cavity
//! frequency.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ONE};

/// Electronic configuration of the dot: empty, or one electron in the lower
/// or upper orbital.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Electronic {
    /// `|s⟩`, no electron
    Empty,
    /// `|g⟩`
    Ground,
    /// `|e⟩`
    Excited,
}

impl Electronic {
    pub const ALL: [Electronic; 3] = [Electronic::Empty, Electronic::Ground, Electronic::Excited];

    pub fn electrons(self) -> usize {
        match self {
            Electronic::Empty => 0,
            Electronic::Ground | Electronic::Excited => 1,
        }
    }

    fn slot(self) -> usize {
        match self {
            Electronic::Empty => 0,
            Electronic::Ground => 1,
            Electronic::Excited => 2,
        }
    }
}

impl FromStr for Electronic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(Electronic::Empty),
            "g" => Ok(Electronic::Ground),
            "e" => Ok(Electronic::Excited),
            other => Err(Error::UnknownLabel(other.to_owned())),
        }
    }
}

impl fmt::Display for Electronic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Electronic::Empty => "s",
            Electronic::Ground => "g",
            Electronic::Excited => "e",
        })
    }
}

/// Bare product basis `|x, n⟩` with `x ∈ {s, g, e}` and `0 ≤ n ≤ n_max`.
///
/// Flat index of `|x, n⟩` is `slot(x)·(n_max + 1) + n`, with slots ordered
/// s, g, e.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSpace {
    n_max: usize,
}

impl ModelSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of Fock states per electronic level.
    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        3 * self.fock_dim()
    }

    /// Panics if `n > n_max`.
    pub fn index(&self, x: Electronic, n: usize) -> usize {
        assert!(n <= self.n_max, "photon number {n} above cutoff {}", self.n_max);
        x.slot() * self.fock_dim() + n
    }

    pub fn label(&self, k: usize) -> (Electronic, usize) {
        assert!(k < self.dim(), "index {k} outside space of dimension {}", self.dim());
        (Electronic::ALL[k / self.fock_dim()], k % self.fock_dim())
    }

    /// Unit vector `|x, n⟩`.
    pub fn basis_vector(&self, x: Electronic, n: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[self.index(x, n)] = ONE;
        v
    }

    /// Photon annihilation `a ⊗ 1_el`, truncated at `n_max`.
    pub fn annihilation(&self) -> ComplexMatrix {
        let mut a = ComplexMatrix::zeros(self.dim(), self.dim());
        for x in Electronic::ALL {
            for n in 1..=self.n_max {
                a[(self.index(x, n - 1), self.index(x, n))] = Complex64::new((n as f64).sqrt(), 0.0);
            }
        }
        a
    }

    /// `a†a`
    pub fn photon_number(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(
            &(0..self.dim()).map(|k| self.label(k).1 as f64).collect::<Vec<_>>(),
        )
    }

    /// `|to⟩⟨from| ⊗ 1_photon`
    pub fn transition(&self, from: Electronic, to: Electronic) -> ComplexMatrix {
        let mut t = ComplexMatrix::zeros(self.dim(), self.dim());
        for n in 0..=self.n_max {
            t[(self.index(to, n), self.index(from, n))] = ONE;
        }
        t
    }

    /// Same as [`transition`](Self::transition) with string labels.
    pub fn transition_by_label(&self, from: &str, to: &str) -> Result<ComplexMatrix> {
        Ok(self.transition(from.parse()?, to.parse()?))
    }

    /// Electron number: 0 on `|s, n⟩`, 1 on `|g, n⟩` and `|e, n⟩`.
    pub fn number_electron(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(
            &(0..self.dim())
                .map(|k| self.label(k).0.electrons() as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// Parity `exp(iπ(a†a + |e⟩⟨e|))`, diagonal in the bare basis.
    pub fn parity(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(
            &(0..self.dim())
                .map(|k| {
                    let (x, n) = self.label(k);
                    let quanta = n + usize::from(x == Electronic::Excited);
                    if quanta % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                })
                .collect::<Vec<_>>(),
        )
    }

    /// Bare indices of the zero-electron sector (`|s, 0⟩ … |s, n_max⟩`).
    pub fn empty_sector(&self) -> Vec<usize> {
        (0..=self.n_max).map(|n| self.index(Electronic::Empty, n)).collect()
    }

    /// Bare indices of the one-electron sector, g-block then e-block.
    pub fn occupied_sector(&self) -> Vec<usize> {
        [Electronic::Ground, Electronic::Excited]
            .into_iter()
            .flat_map(|x| (0..=self.n_max).map(move |n| self.index(x, n)))
            .collect()
    }
}

/// Physical constants of the model, in units of ω_C.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub omega_c: f64,
    pub omega_e: f64,
    /// Energy offset of the empty state (enters as `−ω_s|s⟩⟨s|`).
    pub omega_s: f64,
    /// Vacuum Rabi coupling Ω_R.
    pub rabi: f64,
    pub gamma_in: f64,
    pub gamma_out: f64,
    pub gamma_cav: f64,
    /// Chemical potential of the injecting reservoir.
    pub mu: f64,
}

/// Tolerance for flagging `ω_e = ω_C`.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

impl SystemParams {
    /// Resonant model with `Γ_in = Γ_out = gamma`, `ω_s = 0` and `μ = 0`.
    pub fn resonant(eta: f64, gamma: f64, gamma_cav: f64) -> Self {
        Self {
            omega_c: 1.0,
            omega_e: 1.0,
            omega_s: 0.0,
            rabi: eta,
            gamma_in: gamma,
            gamma_out: gamma,
            gamma_cav,
            mu: 0.0,
        }
    }

    /// Normalised coupling `η = Ω_R/ω_C`.
    pub fn eta(&self) -> f64 {
        self.rabi / self.omega_c
    }

    pub fn is_resonant(&self) -> bool {
        (self.omega_e - self.omega_c).abs() <= RESONANCE_TOLERANCE
    }

    pub fn with_mu(self, mu: f64) -> Self {
        Self { mu, ..self }
    }

    /// Checks that every frequency and rate is finite and non-negative
    /// (μ may take any finite value).
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_c", self.omega_c),
            ("omega_e", self.omega_e),
            ("omega_s", self.omega_s),
            ("rabi", self.rabi),
            ("gamma_in", self.gamma_in),
            ("gamma_out", self.gamma_out),
            ("gamma_cav", self.gamma_cav),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::config(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !self.mu.is_finite() {
            return Err(Error::config("mu", "must be finite"));
        }
        Ok(())
    }
}
