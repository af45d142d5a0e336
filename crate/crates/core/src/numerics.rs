//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is a row-major dense matrix of `Complex64`. The heavy
//! decompositions are delegated to `faer`; everything else (products,
//! adjoints, norms) is done here directly since the matrices involved are
//! small (at most a few thousand rows).

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Absolute floor applied to every scale-relative tolerance.
pub const ABS_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row slices; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Column vector view of a slice.
    pub fn column(v: &[Complex64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        self.data
            .chunks_exact(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `self·rhs − rhs·self`
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `|M_ij − conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Expectation value `v†·M·v`.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        inner(v, &self.mul_vec(v))
    }

    /// `⟨a|M|b⟩`
    pub fn expectation_between(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        inner(a, &self.mul_vec(b))
    }

    pub(crate) fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub(crate) fn from_faer(m: faer::MatRef<'_, Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// `⟨a|b⟩ = Σ conj(a_i)·b_i`
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn ensure_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    ensure_square(m)?;
    let tolerance = (1e-12 * m.max_abs()).max(ABS_FLOOR);
    let defect = m.hermiticity_defect();
    if defect > tolerance {
        return Err(Error::NotHermitian { defect, tolerance });
    }
    if m.rows() == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let evd = m
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NoConvergence)?;
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_faer(evd.U()),
    })
}

/// Solves `A·x = b` by LU with partial pivoting and one step of iterative
/// refinement.
pub fn solve_linear(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_square(a)?;
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    if b.is_empty() {
        return Ok(Vec::new());
    }
    let lu = a.to_faer().partial_piv_lu();
    let condition = lu_condition_estimate(lu.U());
    if !condition.is_finite() || condition > 1e15 {
        return Err(Error::Singular { condition });
    }
    let rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
    let mut x = lu.solve(&rhs);
    // refinement: x += A⁻¹(b − A·x)
    let xv: Vec<Complex64> = (0..b.len()).map(|i| x[(i, 0)]).collect();
    let ax = a.mul_vec(&xv);
    let resid = Mat::from_fn(b.len(), 1, |i, _| b[i] - ax[i]);
    let dx = lu.solve(&resid);
    x += &dx;
    let out: Vec<Complex64> = (0..b.len()).map(|i| x[(i, 0)]).collect();
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular { condition });
    }
    Ok(out)
}

/// Ratio of the largest to the smallest pivot magnitude; a cheap lower bound
/// on the 2-norm condition number.
fn lu_condition_estimate(u: faer::MatRef<'_, Complex64>) -> f64 {
    let mut max = 0.0f64;
    let mut min = f64::INFINITY;
    for i in 0..u.nrows().min(u.ncols()) {
        let p = u[(i, i)].norm();
        max = max.max(p);
        min = min.min(p);
    }
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Relative singular-value threshold below which a direction counts as
/// belonging to the kernel.
pub const KERNEL_TOLERANCE: f64 = 1e-10;

/// Unit vector spanning the one-dimensional kernel of `a`.
///
/// Uses the right singular vector of the smallest singular value. Fails with
/// [`Error::KernelDimension`] unless exactly one singular value lies below
/// `KERNEL_TOLERANCE · σ_max` (floored at [`ABS_FLOOR`]).
pub fn null_vector(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    ensure_square(a)?;
    let n = a.rows();
    if n == 0 {
        return Err(Error::KernelDimension { dimension: 0 });
    }
    let svd = a.to_faer().svd().map_err(|_| Error::NoConvergence)?;
    let sigma: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    let threshold = (KERNEL_TOLERANCE * sigma[0]).max(ABS_FLOOR);
    let dimension = sigma.iter().filter(|&&s| s <= threshold).count();
    if dimension != 1 {
        return Err(Error::KernelDimension { dimension });
    }
    let v = svd.V();
    let mut x: Vec<Complex64> = (0..n).map(|i| v[(i, n - 1)]).collect();
    let len = norm(&x);
    x.iter_mut().for_each(|z| *z /= len);
    Ok(x)
}

/// Stationary distribution of an irreducible Markov generator `m`
/// (`Ṗ = m·P`, so `m[j, i]` is the rate `i → j`), by
/// Grassmann-Taksar-Heyman elimination.
///
/// The elimination never subtracts, so even populations many orders of
/// magnitude below the largest come out with full relative accuracy.
/// Returns `None` if `m` has a complex or negative off-diagonal entry, or if
/// the chain is reducible.
pub fn stationary_distribution(m: &ComplexMatrix) -> Option<Vec<f64>> {
    if !m.is_square() || m.rows() == 0 {
        return None;
    }
    let n = m.rows();
    // q[i][j]: rate i → j
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let z = m[(j, i)];
            if z.im != 0.0 {
                return None;
            }
            if i != j {
                if z.re < 0.0 {
                    return None;
                }
                q[i][j] = z.re;
            }
        }
    }
    for k in (1..n).rev() {
        let out: f64 = q[k][..k].iter().sum();
        if out <= 0.0 {
            return None;
        }
        for i in 0..k {
            q[i][k] /= out;
        }
        for i in 0..k {
            let qik = q[i][k];
            if qik == 0.0 {
                continue;
            }
            for j in 0..k {
                if i != j {
                    q[i][j] += qik * q[k][j];
                }
            }
        }
    }
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    for k in 1..n {
        p[k] = (0..k).map(|i| p[i] * q[i][k]).sum();
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    Some(p)
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Vec::new());
    }
    let s = a
        .to_faer()
        .singular_values()
        .map_err(|_| Error::NoConvergence)?;
    Ok(s.into_iter().collect())
}

/// Eigenvalues of a general square matrix, unordered.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    ensure_square(a)?;
    match a.rows() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![a[(0, 0)]]),
        _ => a.to_faer().eigenvalues().map_err(|_| Error::NoConvergence),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&a + &a.adjoint()).scale(c(0.5))
    }

    fn reconstruction_error(m: &ComplexMatrix, e: &HermitianEigen) -> f64 {
        let d = ComplexMatrix::from_real_diagonal(&e.values);
        let rec = e.vectors.matmul(&d).matmul(&e.vectors.adjoint());
        (&rec - m).frobenius_norm() / m.frobenius_norm()
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eig_hermitian(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        let overlap = inner(&e.vectors.col(0), &e.vectors.col(1));
        assert!(overlap.norm() < 1e-12);
    }

    #[test]
    fn pauli_x() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = eig_hermitian(&m).unwrap();
        assert_relative_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[1], 1.0, epsilon = 1e-14);
        let v0 = e.vectors.col(0);
        // (1, -1)/√2 up to phase
        assert_relative_eq!((v0[0] + v0[1]).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(v0[0].norm(), 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        let v1 = e.vectors.col(1);
        assert_relative_eq!((v1[0] - v1[1]).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn scaled_pauli_x() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 0.1], &[0.1, 0.0]]);
        let e = eig_hermitian(&m).unwrap();
        assert_relative_eq!(e.values[0], -0.1, epsilon = 1e-15);
        assert_relative_eq!(e.values[1], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn eig_rejects_bad_input() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig_hermitian(&rect), Err(Error::NotSquare { .. })));
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.5, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_residual_and_orthonormality() {
        let m = random_hermitian(60, 7);
        let e = eig_hermitian(&m).unwrap();
        let radius = e.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        for k in 0..60 {
            let v = e.vectors.col(k);
            let mv = m.mul_vec(&v);
            let r: Vec<_> = mv.iter().zip(&v).map(|(a, b)| a - b * e.values[k]).collect();
            assert!(norm(&r) <= 1e-10 * radius);
        }
        let gram = e.vectors.adjoint().matmul(&e.vectors);
        assert!((&gram - &ComplexMatrix::identity(60)).max_abs() < 1e-10);
    }

    #[test]
    fn reconstruction_at_dimension_800() {
        let m = random_hermitian(800, 11);
        let e = eig_hermitian(&m).unwrap();
        assert!(reconstruction_error(&m, &e) < 1e-9);
    }

    #[test]
    fn solve_examples() {
        let b = vec![Complex64::new(0.3, -1.0), c(2.0), Complex64::new(0.0, 4.0)];
        let x = solve_linear(&ComplexMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);

        let two = ComplexMatrix::identity(2).scale(c(2.0));
        let x = solve_linear(&two, &[c(1.0), c(1.0)]).unwrap();
        assert_relative_eq!(x[0].re, 0.5);
        assert_relative_eq!(x[1].re, 0.5);

        let upper = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let x = solve_linear(&upper, &[c(2.0), c(1.0)]).unwrap();
        assert_relative_eq!(x[0].re, 1.0);
        assert_relative_eq!(x[1].re, 1.0);
    }

    #[test]
    fn solve_singular() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        match solve_linear(&m, &[c(1.0), c(1.0)]) {
            Err(Error::Singular { condition }) => assert!(condition > 1e15),
            other => panic!("expected singular error, got {other:?}"),
        }
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            solve_linear(&m, &[c(1.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn null_vector_examples() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let x = null_vector(&m).unwrap();
        assert_relative_eq!(x[0].norm(), 1.0, epsilon = 1e-14);
        assert!(x[1].norm() < 1e-14);

        let g = ComplexMatrix::from_real_rows(&[&[-1.0, 1.0], &[1.0, -1.0]]);
        let x = null_vector(&g).unwrap();
        assert!((x[0] - x[1]).norm() < 1e-14);
        assert_relative_eq!(norm(&x), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn null_vector_rejects_ambiguous_kernel() {
        let z = ComplexMatrix::zeros(3, 3);
        assert!(matches!(
            null_vector(&z),
            Err(Error::KernelDimension { dimension: 3 })
        ));
        let full = ComplexMatrix::identity(3);
        assert!(matches!(
            null_vector(&full),
            Err(Error::KernelDimension { dimension: 0 })
        ));
    }

    #[test]
    fn general_eigenvalues_of_rotation_generator() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, -2.0], &[2.0, 0.0]]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert_relative_eq!(ev[0].im, -2.0, epsilon = 1e-12);
        assert_relative_eq!(ev[1].im, 2.0, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn hermitian_reconstruction(n in 1usize..40, seed in any::<u64>()) {
            let m = random_hermitian(n, seed);
            let e = eig_hermitian(&m).unwrap();
            prop_assert!(reconstruction_error(&m, &e) < 1e-9);
        }

        #[test]
        fn solve_residual(n in 1usize..30, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // diagonally dominant, hence well conditioned
            let mut a = ComplexMatrix::from_fn(n, n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            for i in 0..n {
                a[(i, i)] += c(2.0 * n as f64);
            }
            let b: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let x = solve_linear(&a, &b).unwrap();
            let r: Vec<_> = a.mul_vec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
            prop_assert!(norm(&r) <= 1e-10 * norm(&b));
        }
    }

    #[test]
    fn stationary_distribution_two_state() {
        // 0 → 1 at rate 2, 1 → 0 at rate 1
        let m = ComplexMatrix::from_real_rows(&[&[-2.0, 1.0], &[2.0, -1.0]]);
        let p = stationary_distribution(&m).unwrap();
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15 && (p[1] - 2.0 / 3.0).abs() < 1e-15);
        let reducible = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 0.0]]);
        assert!(stationary_distribution(&reducible).is_none());
        let complex = ComplexMatrix::from_fn(2, 2, |i, j| if i == j { ZERO } else { Complex64::new(1.0, 1.0) });
        assert!(stationary_distribution(&complex).is_none());
    }

    #[test]
    fn stationary_distribution_keeps_tiny_populations() {
        // chain 0 → 1 → 2 → 0 with a very slow first step: P_2/P_1 is exact
        let (a, b, c) = (1e-12, 1.0, 3.0);
        let m = ComplexMatrix::from_real_rows(&[&[-a, 0.0, c], &[a, -b, 0.0], &[0.0, b, -c]]);
        let p = stationary_distribution(&m).unwrap();
        assert!((p[2] / p[1] - b / c).abs() < 1e-14);
        assert!((p[1] / p[0] - a / b).abs() < 1e-14 * a);
    }

    proptest! {
        #[test]
        fn stationary_distribution_is_kernel(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 6;
            let mut m = ComplexMatrix::from_fn(n, n, |i, j| if i == j { ZERO } else { Complex64::new(rng.random_range(0.01..1.0), 0.0) });
            for j in 0..n {
                let out: Complex64 = (0..n).filter(|&i| i != j).map(|i| m[(i, j)]).sum();
                m[(j, j)] = -out;
            }
            let p = stationary_distribution(&m).unwrap();
            let pc: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            prop_assert!(norm(&m.mul_vec(&pc)) < 1e-14);
            let k = null_vector(&m).unwrap();
            let scale = k.iter().sum::<Complex64>();
            for i in 0..n {
                prop_assert!(((k[i] / scale).re - p[i]).abs() < 1e-12);
            }
        }
    }
}
