//! Hamiltonian of the open Rabi model and its dressed eigenbasis.
//!
//! ```text
//! H = ω_C a†a + ω_e |e⟩⟨e| − ω_s |s⟩⟨s| + Ω_R (a + a†)(|e⟩⟨g| + |g⟩⟨e|)
//! ```
//!
//! H conserves the electron number, so it is diagonalised separately in the
//! zero-electron sector (where it is already diagonal in `|s, n⟩`) and in the
//! one-electron sector (a quantum Rabi model). The three lowest one-electron
//! eigenstates are the dressed ground state `|G⟩` and the polariton doublet
//! `|−⟩`, `|+⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Electronic, ModelSpace, SystemParams};
use crate::numerics::{eig_hermitian, ComplexMatrix, ABS_FLOOR, ZERO};

/// Energies closer than this are treated as one degenerate cluster when
/// fixing the eigenvector basis.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Light-matter coupling operator `(a + a†)(|e⟩⟨g| + |g⟩⟨e|)`.
pub fn coupling_operator(space: &ModelSpace) -> ComplexMatrix {
    let a = space.annihilation();
    let x = &a + &a.adjoint();
    let sigma_x = &space.transition(Electronic::Ground, Electronic::Excited)
        + &space.transition(Electronic::Excited, Electronic::Ground);
    x.matmul(&sigma_x)
}

pub fn hamiltonian(params: &SystemParams, space: &ModelSpace) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(space.dim(), space.dim());
    for k in 0..space.dim() {
        let (x, n) = space.label(k);
        let mut e = params.omega_c * n as f64;
        match x {
            Electronic::Empty => e -= params.omega_s,
            Electronic::Excited => e += params.omega_e,
            Electronic::Ground => {}
        }
        h[(k, k)] = Complex64::new(e, 0.0);
    }
    if params.rabi != 0.0 {
        h += &coupling_operator(space).scale(Complex64::new(params.rabi, 0.0));
    }
    h
}

/// Identification of a dressed eigenstate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Zero-electron state `|s, n⟩`.
    Empty(usize),
    /// `|G⟩`
    Ground,
    /// Lower polariton `|−⟩`.
    Minus,
    /// Upper polariton `|+⟩`.
    Plus,
    /// k-th one-electron eigenstate for k ≥ 3 (counting `|G⟩` as 0).
    Higher(usize),
}

/// Eigenbasis of the Hamiltonian with sector and level labels.
///
/// Dressed indices run over the zero-electron states `|s, 0⟩ … |s, n_max⟩`
/// first, followed by the one-electron eigenstates in ascending energy.
#[derive(Clone, Debug)]
pub struct DressedBasis {
    energies: Vec<f64>,
    states: ComplexMatrix,
    sectors: Vec<usize>,
    n_empty: usize,
}

impl DressedBasis {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, i: usize) -> f64 {
        self.energies[i]
    }

    /// Eigenvectors as columns, expressed in the bare basis.
    pub fn states(&self) -> &ComplexMatrix {
        &self.states
    }

    pub fn state(&self, i: usize) -> Vec<Complex64> {
        self.states.col(i)
    }

    /// Electron number (0 or 1) of eigenstate `i`.
    pub fn sector(&self, i: usize) -> usize {
        self.sectors[i]
    }

    pub fn sectors(&self) -> &[usize] {
        &self.sectors
    }

    pub fn empty(&self, n: usize) -> usize {
        assert!(n < self.n_empty, "photon number {n} above cutoff");
        n
    }

    pub fn n_empty(&self) -> usize {
        self.n_empty
    }

    /// Indices of the one-electron eigenstates, ascending in energy.
    pub fn occupied(&self) -> std::ops::Range<usize> {
        self.n_empty..self.dim()
    }

    pub fn ground(&self) -> usize {
        self.n_empty
    }

    pub fn minus(&self) -> usize {
        self.n_empty + 1
    }

    pub fn plus(&self) -> usize {
        self.n_empty + 2
    }

    pub fn level(&self, i: usize) -> Level {
        if i < self.n_empty {
            return Level::Empty(i);
        }
        match i - self.n_empty {
            0 => Level::Ground,
            1 => Level::Minus,
            2 => Level::Plus,
            k => Level::Higher(k),
        }
    }

    /// `ω_G`
    pub fn omega_g(&self) -> f64 {
        self.energies[self.ground()]
    }

    /// `ω_−`, measured from `ω_G`.
    pub fn omega_minus(&self) -> f64 {
        self.energies[self.minus()] - self.omega_g()
    }

    /// `ω_+`, measured from `ω_G`.
    pub fn omega_plus(&self) -> f64 {
        self.energies[self.plus()] - self.omega_g()
    }

    /// `U†·op·U`: a bare-basis operator expressed in the dressed basis.
    pub fn to_dressed(&self, op: &ComplexMatrix) -> ComplexMatrix {
        self.states.adjoint().matmul(op).matmul(&self.states)
    }

    /// The Hamiltonian in its own eigenbasis, `diag(E)`.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.energies)
    }
}

fn sub_block(m: &ComplexMatrix, idx: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Largest `|H_ij|` coupling the two electron-number sectors.
fn cross_sector_coupling(h: &ComplexMatrix, space: &ModelSpace) -> f64 {
    let mut worst = 0.0f64;
    for &i in &space.empty_sector() {
        for &j in &space.occupied_sector() {
            worst = worst.max(h[(i, j)].norm()).max(h[(j, i)].norm());
        }
    }
    worst
}

/// Rotates eigenvectors within each degenerate cluster onto eigenvectors of
/// `tie_break` (ascending), so labels are deterministic at degenerate points
/// and continuous with the limit of vanishing coupling.
fn resolve_degeneracies(
    values: &[f64],
    vectors: &mut ComplexMatrix,
    tie_break: &ComplexMatrix,
) -> Result<()> {
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end] - values[start]).abs() <= DEGENERACY_TOLERANCE {
            end += 1;
        }
        if end - start > 1 {
            let cols: Vec<Vec<Complex64>> = (start..end).map(|k| vectors.col(k)).collect();
            let projected = ComplexMatrix::from_fn(cols.len(), cols.len(), |i, j| {
                tie_break.expectation_between(&cols[i], &cols[j])
            });
            let rot = eig_hermitian(&projected)?;
            for (k, target) in (start..end).enumerate() {
                for row in 0..vectors.rows() {
                    vectors[(row, target)] = cols
                        .iter()
                        .enumerate()
                        .map(|(l, c)| c[row] * rot.vectors[(l, k)])
                        .sum();
                }
            }
        }
        start = end;
    }
    Ok(())
}

/// Makes the largest-magnitude component of every column real and positive.
fn fix_phases(vectors: &mut ComplexMatrix) {
    for j in 0..vectors.cols() {
        let mut best = ZERO;
        for i in 0..vectors.rows() {
            if vectors[(i, j)].norm() > best.norm() + 1e-12 {
                best = vectors[(i, j)];
            }
        }
        if best.norm() > 0.0 {
            let phase = best.conj() / best.norm();
            for i in 0..vectors.rows() {
                vectors[(i, j)] *= phase;
            }
        }
    }
}

/// Diagonalises `h` (built by [`hamiltonian`]) sector by sector.
pub fn dressed_basis(h: &ComplexMatrix, space: &ModelSpace) -> Result<DressedBasis> {
    if h.rows() != space.dim() || !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: h.rows(),
        });
    }
    let scale = h.max_abs().max(1.0);
    if cross_sector_coupling(h, space) > (1e-12 * scale).max(ABS_FLOOR) {
        return Err(mixing_error(h, space));
    }

    let dim = space.dim();
    let empty = space.empty_sector();
    let occupied = space.occupied_sector();
    let mut energies = Vec::with_capacity(dim);
    let mut states = ComplexMatrix::zeros(dim, dim);
    let mut sectors = Vec::with_capacity(dim);

    let h0 = sub_block(h, &empty);
    let diagonal = (0..h0.rows()).all(|i| {
        (0..h0.cols()).all(|j| i == j || h0[(i, j)].norm() <= ABS_FLOOR)
    });
    if diagonal {
        // |s, n⟩ are already eigenstates; keep them in photon order.
        for (col, &bare) in empty.iter().enumerate() {
            energies.push(h0[(col, col)].re);
            states[(bare, col)] = Complex64::new(1.0, 0.0);
            sectors.push(0);
        }
    } else {
        let e0 = eig_hermitian(&h0)?;
        for (col, &val) in e0.values.iter().enumerate() {
            energies.push(val);
            for (r, &bare) in empty.iter().enumerate() {
                states[(bare, col)] = e0.vectors[(r, col)];
            }
            sectors.push(0);
        }
    }

    let h1 = sub_block(h, &occupied);
    let mut e1 = eig_hermitian(&h1)?;
    let tie_break = sub_block(&coupling_operator(space), &occupied);
    resolve_degeneracies(&e1.values, &mut e1.vectors, &tie_break)?;
    fix_phases(&mut e1.vectors);
    let offset = empty.len();
    for (k, &val) in e1.values.iter().enumerate() {
        energies.push(val);
        for (r, &bare) in occupied.iter().enumerate() {
            states[(bare, offset + k)] = e1.vectors[(r, k)];
        }
        sectors.push(1);
    }

    let basis = DressedBasis {
        energies,
        states,
        sectors,
        n_empty: empty.len(),
    };
    check_sectors(&basis, space)?;
    Ok(basis)
}

fn check_sectors(basis: &DressedBasis, space: &ModelSpace) -> Result<()> {
    let n_el = space.number_electron();
    for i in 0..basis.dim() {
        let value = n_el.expectation(&basis.state(i)).re;
        if (value - value.round()).abs() > 1e-6 || value.round() as usize != basis.sector(i) {
            return Err(Error::SectorMixing { index: i, value });
        }
    }
    Ok(())
}

/// Diagonalises a sector-mixing `h` in full and reports the eigenstate whose
/// electron number is furthest from an integer.
fn mixing_error(h: &ComplexMatrix, space: &ModelSpace) -> Error {
    let n_el = space.number_electron();
    let eig = match eig_hermitian(h) {
        Ok(e) => e,
        Err(e) => return e,
    };
    let (index, value) = (0..eig.values.len())
        .map(|i| (i, n_el.expectation(&eig.vectors.col(i)).re))
        .max_by(|a, b| {
            (a.1 - a.1.round())
                .abs()
                .total_cmp(&(b.1 - b.1.round()).abs())
        })
        .unwrap_or((0, f64::NAN));
    Error::SectorMixing { index, value }
}

/// `⟨G|a†a|G⟩`
pub fn ground_photon_number(basis: &DressedBasis, space: &ModelSpace) -> f64 {
    space
        .photon_number()
        .expectation(&basis.state(basis.ground()))
        .re
}

/// Closed-form states of the rotating-wave (Jaynes-Cummings) limit at
/// resonance, as vectors in the bare basis.
#[derive(Clone, Debug)]
pub struct JcStates {
    /// `|g, 0⟩`
    pub ground: Vec<Complex64>,
    /// `(|g, 1⟩ + |e, 0⟩)/√2`
    pub plus: Vec<Complex64>,
    /// `(|g, 1⟩ − |e, 0⟩)/√2`
    pub minus: Vec<Complex64>,
}

/// The JC states do not depend on the parameters; `params` is accepted so the
/// call mirrors the exact route it is compared against.
pub fn jc_reference(_params: &SystemParams, space: &ModelSpace) -> JcStates {
    let g0 = space.basis_vector(Electronic::Ground, 0);
    let g1 = space.basis_vector(Electronic::Ground, 1);
    let e0 = space.basis_vector(Electronic::Excited, 0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    JcStates {
        ground: g0,
        plus: g1.iter().zip(&e0).map(|(a, b)| (a + b) * r).collect(),
        minus: g1.iter().zip(&e0).map(|(a, b)| (a - b) * r).collect(),
    }
}
