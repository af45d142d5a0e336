//! Five-level rate equations over `{|s,0⟩, |s,1⟩, |G⟩, |+⟩, |−⟩}` and the
//! closed-form lowest-order emission fluxes.
//!
//! The populations obey `Ṗ = M·P` with
//!
//! ```text
//! Ṗ_s0 = −P_s0 Γ_in^{s,0} + P_G Γ_out^{G→0} + P_± Γ_out^{±→0} + P_s1 Γ_cav
//! Ṗ_s1 = −P_s1 (Γ_cav + Γ_in^{s,1}) + P_G Γ_out^{G→1} + P_± Γ_out^{±→1}
//! Ṗ_G  = −P_G Γ_out^G + P_s0 Γ_in^{0→G} + P_s1 Γ_in^{1→G} + P_± Γ_cav^±
//! Ṗ_±  = −P_± (Γ_cav^± + Γ_out^±) + P_s1 Γ_in^{1→±} + P_s0 Γ_in^{0→±}
//! ```
//!
//! where a repeated ± is summed. The `Γ_in^{0→±}` terms only appear once
//! μ reaches the polariton thresholds.

use num_complex::Complex64;

use crate::dissipators::{rate_between, JumpChannel};
use crate::error::Result;
use crate::numerics::{null_vector, stationary_distribution, ComplexMatrix};
use crate::rabi::DressedBasis;

/// Order of the five states in [`rate_matrix`] and [`Populations::to_array`].
pub const STATES: [&str; 5] = ["s0", "s1", "G", "+", "-"];

const S0: usize = 0;
const S1: usize = 1;
const G: usize = 2;
const P: usize = 3;
const M: usize = 4;

/// Dressed rates among the five low-lying states.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RateSet {
    pub in_0g: f64,
    pub in_1g: f64,
    pub in_1p: f64,
    pub in_1m: f64,
    pub in_0p: f64,
    pub in_0m: f64,
    pub out_g0: f64,
    pub out_g1: f64,
    pub out_p0: f64,
    pub out_p1: f64,
    pub out_m0: f64,
    pub out_m1: f64,
    pub cav: f64,
    pub cav_p: f64,
    pub cav_m: f64,
}

impl RateSet {
    /// `Γ_in^{s,0}`: total injection out of `|s,0⟩`.
    pub fn in_s0(&self) -> f64 {
        self.in_0g + self.in_0p + self.in_0m
    }

    /// `Γ_in^{s,1}`
    pub fn in_s1(&self) -> f64 {
        self.in_1g + self.in_1p + self.in_1m
    }

    /// `Γ_out^G`
    pub fn out_g(&self) -> f64 {
        self.out_g0 + self.out_g1
    }

    /// `Γ_out^+`
    pub fn out_p(&self) -> f64 {
        self.out_p0 + self.out_p1
    }

    /// `Γ_out^−`
    pub fn out_m(&self) -> f64 {
        self.out_m0 + self.out_m1
    }

    fn all(&self) -> [f64; 15] {
        [
            self.in_0g, self.in_1g, self.in_1p, self.in_1m, self.in_0p, self.in_0m, self.out_g0, self.out_g1,
            self.out_p0, self.out_p1, self.out_m0, self.out_m1, self.cav, self.cav_p, self.cav_m,
        ]
    }

    pub fn is_valid(&self) -> bool {
        self.all().iter().all(|r| r.is_finite() && *r >= 0.0)
    }
}

/// Picks the five-state rates out of a full dressed channel list.
pub fn extract_rates(basis: &DressedBasis, channels: &[JumpChannel]) -> RateSet {
    let (s0, s1) = (basis.empty(0), basis.empty(1));
    let (g, p, m) = (basis.ground(), basis.plus(), basis.minus());
    let r = |from, to| rate_between(channels, from, to);
    RateSet {
        in_0g: r(s0, g),
        in_1g: r(s1, g),
        in_1p: r(s1, p),
        in_1m: r(s1, m),
        in_0p: r(s0, p),
        in_0m: r(s0, m),
        out_g0: r(g, s0),
        out_g1: r(g, s1),
        out_p0: r(p, s0),
        out_p1: r(p, s1),
        out_m0: r(m, s0),
        out_m1: r(m, s1),
        cav: r(s1, s0),
        cav_p: r(p, g),
        cav_m: r(m, g),
    }
}

/// Generator `M` with `Ṗ = M·P`, states ordered as [`STATES`].
pub fn rate_matrix(r: &RateSet) -> [[f64; 5]; 5] {
    let mut m = [[0.0; 5]; 5];
    m[S0][S0] = -r.in_s0();
    m[S0][G] = r.out_g0;
    m[S0][P] = r.out_p0;
    m[S0][M] = r.out_m0;
    m[S0][S1] = r.cav;

    m[S1][S1] = -(r.cav + r.in_s1());
    m[S1][G] = r.out_g1;
    m[S1][P] = r.out_p1;
    m[S1][M] = r.out_m1;

    m[G][G] = -r.out_g();
    m[G][S0] = r.in_0g;
    m[G][S1] = r.in_1g;
    m[G][P] = r.cav_p;
    m[G][M] = r.cav_m;

    m[P][P] = -(r.cav_p + r.out_p());
    m[P][S1] = r.in_1p;
    m[P][S0] = r.in_0p;

    m[M][M] = -(r.cav_m + r.out_m());
    m[M][S1] = r.in_1m;
    m[M][S0] = r.in_0m;
    m
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Populations {
    pub s0: f64,
    pub s1: f64,
    pub g: f64,
    pub plus: f64,
    pub minus: f64,
}

impl Populations {
    pub fn from_array(p: [f64; 5]) -> Self {
        Self {
            s0: p[S0],
            s1: p[S1],
            g: p[G],
            plus: p[P],
            minus: p[M],
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.s0, self.s1, self.g, self.plus, self.minus]
    }

    pub fn sum(&self) -> f64 {
        self.to_array().iter().sum()
    }
}

/// Kernel of `M`, normalised to unit sum.
///
/// States outside the single closed class of the rate graph get exactly zero
/// population; the closed class itself is solved by subtraction-free
/// elimination. Fails when the kernel is not one-dimensional.
pub fn rate_steady_state(m: &[[f64; 5]; 5]) -> Result<Populations> {
    let rows: Vec<&[f64]> = m.iter().map(|r| r.as_slice()).collect();
    let full = ComplexMatrix::from_real_rows(&rows);
    // uniqueness check; also the fallback answer
    let kernel = null_vector(&full)?;
    let closed = closed_class(m);
    let k = closed.len();
    let sub = ComplexMatrix::from_fn(k, k, |r, c| full[(closed[r], closed[c])]);
    let mut p = [0.0; 5];
    match stationary_distribution(&sub) {
        Some(local) => {
            for (&i, v) in closed.iter().zip(local) {
                p[i] = v;
            }
        }
        None => {
            let total: Complex64 = kernel.iter().sum();
            for (i, z) in kernel.iter().enumerate() {
                p[i] = (z / total).re.max(0.0);
            }
            let total: f64 = p.iter().sum();
            p.iter_mut().for_each(|v| *v /= total);
        }
    }
    Ok(Populations::from_array(p))
}

/// States from which no rate leads out of the set: the unique sink class.
fn closed_class(m: &[[f64; 5]; 5]) -> Vec<usize> {
    // reach[i][j]: j reachable from i
    let mut reach = [[false; 5]; 5];
    for i in 0..5 {
        reach[i][i] = true;
        for j in 0..5 {
            if i != j && m[j][i] > 0.0 {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..5 {
        for i in 0..5 {
            for j in 0..5 {
                reach[i][j] |= reach[i][k] && reach[k][j];
            }
        }
    }
    let recurrent: Vec<usize> = (0..5).filter(|&i| (0..5).all(|j| !reach[i][j] || reach[j][i])).collect();
    recurrent
}

/// Photon fluxes of the three emission lines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fluxes {
    pub central: f64,
    pub plus: f64,
    pub minus: f64,
}

/// `f_C = P_s1 Γ_cav`, `f_± = P_± Γ_cav^±`.
pub fn fluxes(p: &Populations, r: &RateSet) -> Fluxes {
    Fluxes {
        central: p.s1 * r.cav,
        plus: p.plus * r.cav_p,
        minus: p.minus * r.cav_m,
    }
}

/// Lowest-order ground-state electroluminescence (μ at the ground-state
/// threshold): `f_C = η²Γ/8·(1 − Γ/Γ_cav)`, `f_± = η²Γ²/(16Γ_cav)`.
///
/// Valid for `η ≪ 1` and `Γ ≪ Γ_cav`; not enforced.
pub fn analytic_gse(eta: f64, gamma: f64, gamma_cav: f64) -> Fluxes {
    let side = eta * eta * gamma * gamma / (16.0 * gamma_cav);
    Fluxes {
        central: eta * eta * gamma / 8.0 * (1.0 - gamma / gamma_cav),
        plus: side,
        minus: side,
    }
}

/// Standard electroluminescence with both polaritons open:
/// `f'_C = (Γ/6)(2Γ/Γ_cav + η²)`, `f'_± = (Γ/6)(1 ± η/2)(1 − 2Γ/Γ_cav)`.
pub fn analytic_el(eta: f64, gamma: f64, gamma_cav: f64) -> Fluxes {
    let base = gamma / 6.0 * (1.0 - 2.0 * gamma / gamma_cav);
    Fluxes {
        central: gamma / 6.0 * (2.0 * gamma / gamma_cav + eta * eta),
        plus: base * (1.0 + eta / 2.0),
        minus: base * (1.0 - eta / 2.0),
    }
}
