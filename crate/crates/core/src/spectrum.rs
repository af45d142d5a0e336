//! Emission spectrum from the quantum regression theorem.
//!
//! `S(ω) = (Γ_cav/π)·Re Tr[X⁺·R(ω)·(X⁻ρ_ss)]` with the resolvent
//! `R(ω) = −(L − iω)⁻¹`, evaluated point by point on a frequency grid.
//! The stationary mode is removed from the source `X⁻ρ_ss` first.
//!
//! Besides the total spectrum, each [`PeakWindow`] gets its own component:
//! the same resolvent applied to the part of the source made of coherences
//! `|i⟩⟨j|` whose transition frequency `E_j − E_i` lies in the window.
//! Integrating a component over the whole grid gives the photon flux of that
//! line without picking up the tails of its neighbours.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liouvillian::{from_vec, to_vec, vec_index, DensityOperator, Superoperator};
use crate::numerics::{ComplexMatrix, ZERO};
use crate::rabi::DressedBasis;

pub const DEFAULT_GRID_MIN: f64 = 0.5;
pub const DEFAULT_GRID_MAX: f64 = 1.5;
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// Peaks closer than this many grid steps trigger a resolution warning.
pub const MIN_PEAK_SEPARATION_STEPS: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Peak {
    /// `|s,1⟩ → |s,0⟩`, at ω_C
    Central,
    /// `|+⟩ → |G⟩`
    Plus,
    /// `|−⟩ → |G⟩`
    Minus,
}

impl Peak {
    pub fn name(self) -> &'static str {
        match self {
            Peak::Central => "central",
            Peak::Plus => "plus",
            Peak::Minus => "minus",
        }
    }
}

/// Frequency interval `[lo, hi)` attributed to one emission line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakWindow {
    pub peak: Peak,
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
}

impl PeakWindow {
    pub fn halfwidth(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn contains(&self, w: f64) -> bool {
        w >= self.lo && w < self.hi
    }
}

/// Uniform grid of `points` frequencies over `[min, max]`.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let step = (max - min) / (points - 1) as f64;
    (0..points).map(|k| min + step * k as f64).collect()
}

pub fn default_grid() -> Vec<f64> {
    linear_grid(DEFAULT_GRID_MIN, DEFAULT_GRID_MAX, DEFAULT_GRID_POINTS)
}

/// Windows around the central line and the two polariton lines, bounded by
/// the midpoints between neighbouring centres.
///
/// Logs a warning when two centres are closer than
/// [`MIN_PEAK_SEPARATION_STEPS`] grid steps.
pub fn default_windows(basis: &DressedBasis, grid_spacing: f64) -> Vec<PeakWindow> {
    let e = basis.energies();
    let mut centers = [
        (Peak::Minus, e[basis.minus()] - e[basis.ground()]),
        (Peak::Central, e[basis.empty(1)] - e[basis.empty(0)]),
        (Peak::Plus, e[basis.plus()] - e[basis.ground()]),
    ];
    centers.sort_by(|a, b| a.1.total_cmp(&b.1));
    if !windows_resolved(&centers.map(|c| c.1), grid_spacing) {
        log::warn!(
            "emission lines at {:?} are closer than {} grid steps of {:e}",
            centers.map(|c| c.1),
            MIN_PEAK_SEPARATION_STEPS,
            grid_spacing
        );
    }
    let mid = |a: f64, b: f64| 0.5 * (a + b);
    let m01 = mid(centers[0].1, centers[1].1);
    let m12 = mid(centers[1].1, centers[2].1);
    let bounds = [
        (centers[0].1 - (m01 - centers[0].1), m01),
        (m01, m12),
        (m12, centers[2].1 + (centers[2].1 - m12)),
    ];
    centers
        .iter()
        .zip(bounds)
        .map(|(&(peak, center), (lo, hi))| PeakWindow { peak, center, lo, hi })
        .collect()
}

/// Whether sorted centres are at least [`MIN_PEAK_SEPARATION_STEPS`] grid steps apart.
pub fn windows_resolved(centers: &[f64], grid_spacing: f64) -> bool {
    centers
        .windows(2)
        .all(|w| (w[1] - w[0]).abs() >= MIN_PEAK_SEPARATION_STEPS * grid_spacing)
}

/// Spectrum on a grid, with optional per-line components.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub windows: Vec<PeakWindow>,
    /// `components[k][i]` is the part of `values[i]` produced by lines in `windows[k]`.
    pub components: Vec<Vec<f64>>,
    /// Grid indices where the resolvent solve failed; their values are NaN.
    pub failures: Vec<usize>,
}

impl Spectrum {
    /// Integral of the full spectrum over the whole grid.
    pub fn total_flux(&self) -> f64 {
        trapezoid(&self.omegas, &self.values)
    }

    /// Integral of one line's component over the whole grid.
    pub fn peak_flux(&self, peak: Peak) -> Option<f64> {
        self.windows
            .iter()
            .position(|w| w.peak == peak)
            .map(|k| trapezoid(&self.omegas, &self.components[k]))
    }

    pub fn window(&self, peak: Peak) -> Option<&PeakWindow> {
        self.windows.iter().find(|w| w.peak == peak)
    }

    /// Indices of strict local maxima above `threshold`.
    pub fn local_maxima(&self, threshold: f64) -> Vec<usize> {
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .filter(|&i| v[i] > threshold && v[i] > v[i - 1] && v[i] >= v[i + 1])
            .collect()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::config("grid.points", "at least two frequencies are required"));
    }
    if grid.iter().any(|w| !w.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("grid", "frequencies must be finite and strictly ascending"));
    }
    Ok(())
}

/// `(Γ_cav/π)·Re Tr[X⁺·R(ω)·v]` on each grid point for every source in `sources`.
fn resolvent_traces(
    l: &Superoperator,
    xp: &ComplexMatrix,
    sources: &[Vec<Complex64>],
    grid: &[f64],
    gamma_cav: f64,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let d = l.dim();
    let prefactor = gamma_cav / std::f64::consts::PI;
    let rows: Vec<Option<Vec<f64>>> = grid
        .par_iter()
        .map(|&w| {
            let shift = Complex64::new(0.0, w);
            sources
                .iter()
                .map(|v| {
                    let x = l.solve_shifted(shift, v).ok()?;
                    // Tr[X⁺·(−x)]
                    let mut acc = ZERO;
                    for i in 0..d {
                        for k in 0..d {
                            let p = xp[(i, k)];
                            if p != ZERO {
                                acc -= p * x[vec_index(k, i, d)];
                            }
                        }
                    }
                    Some(prefactor * acc.re)
                })
                .collect()
        })
        .collect();
    let mut out = vec![vec![f64::NAN; grid.len()]; sources.len()];
    let mut failures = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        match row {
            Some(vals) => {
                for (k, v) in vals.into_iter().enumerate() {
                    out[k][i] = v;
                }
            }
            None => failures.push(i),
        }
    }
    (out, failures)
}

fn deflated_source(rho_ss: &DensityOperator, xm: &ComplexMatrix) -> Vec<Complex64> {
    let v = xm * rho_ss.matrix();
    let tr = v.trace();
    let deflated = &v - &rho_ss.matrix().scale(tr);
    to_vec(&deflated)
}

fn check_operators(l: &Superoperator, rho_ss: &DensityOperator, xm: &ComplexMatrix, xp: &ComplexMatrix) -> Result<()> {
    for m in [rho_ss.matrix(), xm, xp] {
        if m.rows() != l.dim() || m.cols() != l.dim() {
            return Err(Error::DimensionMismatch {
                expected: l.dim(),
                found: m.rows(),
            });
        }
    }
    Ok(())
}

/// Total emission spectrum on `grid`.
///
/// A failed resolvent solve at one frequency leaves NaN at that point and
/// records its index in [`Spectrum::failures`].
pub fn emission_spectrum(
    l: &Superoperator,
    rho_ss: &DensityOperator,
    xm: &ComplexMatrix,
    xp: &ComplexMatrix,
    grid: &[f64],
    gamma_cav: f64,
) -> Result<Spectrum> {
    check_grid(grid)?;
    check_operators(l, rho_ss, xm, xp)?;
    let v = deflated_source(rho_ss, xm);
    let (mut values, failures) = resolvent_traces(l, xp, &[v], grid, gamma_cav);
    Ok(Spectrum {
        omegas: grid.to_vec(),
        values: values.remove(0),
        windows: Vec::new(),
        components: Vec::new(),
        failures,
    })
}

/// Like [`emission_spectrum`], and also splits the spectrum by emission line.
///
/// `energies` are the eigenvalues of the (diagonal) Hamiltonian in the basis
/// of `l`; coherence `|i⟩⟨j|` is attributed to the window holding `E_j − E_i`.
pub fn resolved_spectrum(
    l: &Superoperator,
    rho_ss: &DensityOperator,
    xm: &ComplexMatrix,
    xp: &ComplexMatrix,
    grid: &[f64],
    gamma_cav: f64,
    energies: &[f64],
    windows: &[PeakWindow],
) -> Result<Spectrum> {
    check_grid(grid)?;
    check_operators(l, rho_ss, xm, xp)?;
    let d = l.dim();
    if energies.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: energies.len(),
        });
    }
    let v = deflated_source(rho_ss, xm);
    let mut sources = vec![v.clone()];
    for w in windows {
        let mut part = vec![ZERO; d * d];
        for j in 0..d {
            for i in 0..d {
                if w.contains(energies[j] - energies[i]) {
                    let k = vec_index(i, j, d);
                    part[k] = v[k];
                }
            }
        }
        sources.push(part);
    }
    let (mut traces, failures) = resolvent_traces(l, xp, &sources, grid, gamma_cav);
    let values = traces.remove(0);
    Ok(Spectrum {
        omegas: grid.to_vec(),
        values,
        windows: windows.to_vec(),
        components: traces,
        failures,
    })
}

/// Trapezoidal integral of `spec` over `[center − halfwidth, center + halfwidth]`,
/// with linear interpolation at the window edges.
pub fn integrate_peak(spec: &Spectrum, center: f64, halfwidth: f64) -> Result<f64> {
    let (lo, hi) = (center - halfwidth, center + halfwidth);
    let (min, max) = match (spec.omegas.first(), spec.omegas.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (f64::NAN, f64::NAN),
    };
    if !(lo >= min && hi <= max && lo <= hi) {
        return Err(Error::WindowOutsideGrid { lo, hi, min, max });
    }
    integrate_range(&spec.omegas, &spec.values, lo, hi)
}

fn integrate_range(x: &[f64], y: &[f64], lo: f64, hi: f64) -> Result<f64> {
    let interp = |k: usize, t: f64| {
        let f = (t - x[k]) / (x[k + 1] - x[k]);
        y[k] + f * (y[k + 1] - y[k])
    };
    let mut acc = 0.0;
    for k in 0..x.len() - 1 {
        let (a, b) = (x[k].max(lo), x[k + 1].min(hi));
        if b > a {
            acc += 0.5 * (b - a) * (interp(k, a) + interp(k, b));
        }
    }
    Ok(acc)
}

/// `Γ_cav·⟨X⁺X⁻⟩` in the state `rho`; the total emitted photon flux.
pub fn total_emission_rate(rho: &DensityOperator, xm: &ComplexMatrix, xp: &ComplexMatrix, gamma_cav: f64) -> f64 {
    gamma_cav * rho.expectation(&(xp * xm)).re
}

/// Reshapes a vectorised source for inspection.
pub fn source_matrix(rho_ss: &DensityOperator, xm: &ComplexMatrix) -> ComplexMatrix {
    from_vec(&deflated_source(rho_ss, xm), rho_ss.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissipators::{channels_cavity, channels_in, channels_out, x_pm};
    use crate::hilbert::{ModelSpace, SystemParams};
    use crate::liouvillian::{build_liouvillian, propagate_vec, steady_state};
    use crate::rabi::{dressed_basis, hamiltonian};
    use approx::assert_relative_eq;
    use rustfft::FftPlanner;

    struct Run {
        basis: DressedBasis,
        l: Superoperator,
        rho: DensityOperator,
        xm: ComplexMatrix,
        xp: ComplexMatrix,
    }

    fn run(eta: f64, gamma: f64, gamma_cav: f64, n_max: usize, mu: impl Fn(&DressedBasis) -> f64) -> Run {
        let p = SystemParams::resonant(eta, gamma, gamma_cav);
        let space = ModelSpace::new(n_max).unwrap();
        let basis = dressed_basis(&hamiltonian(&p, &space), &space).unwrap();
        let mut ch = channels_cavity(&basis, &space, gamma_cav);
        ch.extend(channels_out(&basis, &space, gamma));
        ch.extend(channels_in(&basis, &space, gamma, mu(&basis)));
        let l = build_liouvillian(&basis.hamiltonian(), &ch).unwrap();
        let rho = steady_state(&l).unwrap();
        let (xm, xp) = x_pm(&basis, &space);
        Run { basis, l, rho, xm, xp }
    }

    fn spectrum(r: &Run, grid: &[f64], gamma_cav: f64) -> Spectrum {
        let spacing = grid[1] - grid[0];
        let windows = default_windows(&r.basis, spacing);
        resolved_spectrum(&r.l, &r.rho, &r.xm, &r.xp, grid, gamma_cav, r.basis.energies(), &windows).unwrap()
    }

    #[test]
    fn dark_case_is_dark() {
        let r = run(0.0, 0.5e-6, 7e-4, 8, |_| 0.0);
        let s = emission_spectrum(&r.l, &r.rho, &r.xm, &r.xp, &default_grid(), 7e-4).unwrap();
        assert!(s.values.iter().all(|v| v.abs() < 1e-16));
        assert!(s.failures.is_empty());
    }

    #[test]
    fn lines_sit_at_dressed_frequencies() {
        let gc = 7e-4;
        let r = run(0.1, 0.5e-6, gc, 8, |b| b.omega_g() + b.omega_plus());
        let grid = default_grid();
        let s = spectrum(&r, &grid, gc);
        assert!(s.values.iter().all(|&v| v >= -1e-12));
        let step = grid[1] - grid[0];
        for w in &s.windows {
            let k = s.local_maxima(0.0).into_iter().filter(|&i| w.contains(grid[i])).max_by(|&a, &b| s.values[a].total_cmp(&s.values[b])).unwrap();
            assert!((grid[k] - w.center).abs() <= step, "{:?}", w);
        }
    }

    #[test]
    fn windows_partition() {
        let r = run(0.1, 0.5e-6, 7e-4, 6, |b| b.omega_g());
        let w = default_windows(&r.basis, 2.5e-4);
        assert_eq!(w.iter().map(|w| w.peak).collect::<Vec<_>>(), [Peak::Minus, Peak::Central, Peak::Plus]);
        assert_eq!(w[0].hi, w[1].lo);
        assert_eq!(w[1].hi, w[2].lo);
        assert_relative_eq!(w[1].center, 1.0, epsilon = 1e-12);
        assert!((w[0].center - 0.9).abs() < 0.01 && (w[2].center - 1.1).abs() < 0.01);
        assert_relative_eq!(w[0].halfwidth(), 0.5 * (w[1].center - w[0].center), epsilon = 1e-12);

        let r = run(0.0, 0.5e-6, 7e-4, 4, |_| 0.0);
        let w = default_windows(&r.basis, 2.5e-4);
        assert!(!windows_resolved(&w.iter().map(|w| w.center).collect::<Vec<_>>(), 2.5e-4));
    }

    #[test]
    fn components_sum_to_total() {
        let gc = 7e-4;
        let r = run(0.1, 0.5e-6, gc, 6, |b| b.omega_g());
        let s = spectrum(&r, &linear_grid(0.8, 1.2, 801), gc);
        for i in 0..s.omegas.len() {
            let sum: f64 = s.components.iter().map(|c| c[i]).sum();
            // weak lines from higher states fall outside every window
            assert!((sum - s.values[i]).abs() <= 1e-4 * s.values[i].abs());
        }
    }

    #[test]
    fn parseval() {
        let gc = 7e-4;
        for mu_plus in [false, true] {
            let r = run(0.1, 0.5e-6, gc, 8, |b| if mu_plus { b.omega_g() + b.omega_plus() } else { b.omega_g() });
            let s = spectrum(&r, &default_grid(), gc);
            let expected = total_emission_rate(&r.rho, &r.xm, &r.xp, gc);
            assert_relative_eq!(s.total_flux(), expected, max_relative = 0.03);
        }
    }

    #[test]
    fn integration_edges() {
        let s = Spectrum {
            omegas: linear_grid(0.0, 1.0, 11),
            values: vec![0.0; 11],
            windows: Vec::new(),
            components: Vec::new(),
            failures: Vec::new(),
        };
        assert_eq!(integrate_peak(&s, 0.5, 0.2).unwrap(), 0.0);
        assert!(matches!(integrate_peak(&s, 0.9, 0.2), Err(Error::WindowOutsideGrid { .. })));

        let ramp = Spectrum {
            values: s.omegas.clone(),
            ..s
        };
        // ∫ x dx over [0.25, 0.55] is exact for a linear integrand
        assert_relative_eq!(integrate_peak(&ramp, 0.4, 0.15).unwrap(), 0.5 * (0.55f64.powi(2) - 0.25f64.powi(2)), epsilon = 1e-14);
    }

    #[test]
    fn grid_validation() {
        let r = run(0.1, 0.5e-6, 7e-4, 3, |b| b.omega_g());
        let bad = [1.0, 0.9, 1.1];
        assert!(emission_spectrum(&r.l, &r.rho, &r.xm, &r.xp, &bad, 7e-4).is_err());
        assert!(emission_spectrum(&r.l, &r.rho, &r.xm, &r.xp, &[1.0], 7e-4).is_err());
    }

    /// Propagates `C(τ) = Tr[X⁺ e^{Lτ} v]` and Fourier transforms it.
    #[test]
    fn time_domain_cross_check() {
        let (g, gc) = (0.02, 0.05);
        let r = run(0.1, g, gc, 3, |b| b.omega_g() + b.omega_plus());
        let d = r.l.dim();
        let v = deflated_source(&r.rho, &r.xm);

        let dt = 0.05;
        let samples = 28_000;
        let mut c = Vec::with_capacity(samples);
        let mut x = v.clone();
        for _ in 0..samples {
            let m = from_vec(&x, d);
            c.push((&r.xp * &m).trace());
            x = propagate_vec(&r.l, &x, dt, 1).unwrap();
        }
        assert!(c.last().unwrap().norm() < 1e-6 * c[0].norm());

        let n = 1 << 19;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, z) in c.iter().enumerate() {
            buf[k] = if k == 0 { z * 0.5 } else { *z } * dt;
        }
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let dw = 2.0 * std::f64::consts::PI / (n as f64 * dt);

        let lo = (0.8 / dw).ceil() as usize;
        let hi = (1.2 / dw).floor() as usize;
        let grid: Vec<f64> = (lo..=hi).map(|k| k as f64 * dw).collect();
        let s = emission_spectrum(&r.l, &r.rho, &r.xm, &r.xp, &grid, gc).unwrap();
        let max = s.max_value();
        let mut checked = 0;
        for (i, k) in (lo..=hi).enumerate() {
            let fft = gc / std::f64::consts::PI * buf[k].re;
            if s.values[i] > 0.1 * max {
                assert_relative_eq!(fft, s.values[i], max_relative = 0.05);
                checked += 1;
            }
        }
        assert!(checked > 20);
    }
}
