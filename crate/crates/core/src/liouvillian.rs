//! Lindblad generator, steady state and time evolution.
//!
//! Operators are vectorised by column stacking: `vec(ρ)[r + c·d] = ρ[r, c]`,
//! so `vec(AρB) = (Bᵀ ⊗ A)·vec(ρ)`.
//!
//! The dense `d² × d²` matrix is kept, but the generators built from dressed
//! channels are block diagonal under a permutation (populations form one
//! block, each coherence is its own 1×1 block). [`Superoperator`] finds these
//! blocks once at assembly and every decomposition works block by block.

use num_complex::Complex64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;

use crate::dissipators::JumpChannel;
use crate::error::{Error, Result};
use crate::numerics::{self, ComplexMatrix, ABS_FLOOR, ZERO};

/// Hermiticity tolerance for [`build_liouvillian`]'s Hamiltonian.
const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// A kernel is accepted as unique when the next-smallest eigenvalue
/// magnitude exceeds the smallest by this factor.
pub const UNIQUENESS_RATIO: f64 = 1e3;

/// Column-stacked index of `ρ[r, c]`.
#[inline]
pub fn vec_index(r: usize, c: usize, d: usize) -> usize {
    r + c * d
}

/// A density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Wraps a square matrix; no positivity or trace check is made.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(Self { matrix })
    }

    /// Pure state `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &[Complex64]) -> Self {
        let d = psi.len();
        Self {
            matrix: ComplexMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj()),
        }
    }

    /// `|k⟩⟨k|`
    pub fn projector(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(k, k)] = numerics::ONE;
        Self { matrix: m }
    }

    /// Inverse of [`to_vec`](Self::to_vec).
    pub fn from_vec(v: &[Complex64], dim: usize) -> Result<Self> {
        if v.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: v.len(),
            });
        }
        Ok(Self {
            matrix: ComplexMatrix::from_fn(dim, dim, |r, c| v[vec_index(r, c, dim)]),
        })
    }

    pub fn to_vec(&self) -> Vec<Complex64> {
        to_vec(&self.matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.hermiticity_defect()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let h = (&self.matrix + &self.matrix.adjoint()).scale(Complex64::new(0.5, 0.0));
        let eig = numerics::eig_hermitian(&h)?;
        Ok(eig.values.first().copied().unwrap_or(0.0))
    }

    /// `Tr(A ρ)`
    pub fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for k in 0..d {
                acc += op[(i, k)] * self.matrix[(k, i)];
            }
        }
        acc
    }

    /// Real diagonal.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }
}

/// Column-stacked vectorisation of any square matrix.
pub fn to_vec(m: &ComplexMatrix) -> Vec<Complex64> {
    let d = m.rows();
    let mut v = vec![ZERO; d * d];
    for c in 0..d {
        for r in 0..d {
            v[vec_index(r, c, d)] = m[(r, c)];
        }
    }
    v
}

/// Inverse of [`to_vec`] for a `d × d` matrix.
pub fn from_vec(v: &[Complex64], d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |r, c| v[vec_index(r, c, d)])
}

#[derive(Clone, Debug)]
struct Block {
    indices: Vec<usize>,
    matrix: ComplexMatrix,
}

/// Linear map on vectorised `d × d` operators.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
    blocks: Vec<Block>,
    block_of: Vec<usize>,
}

impl Superoperator {
    /// Wraps a dense `d² × d²` matrix and finds its invariant blocks.
    pub fn from_matrix(matrix: ComplexMatrix, dim: usize) -> Result<Self> {
        let n = dim * dim;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        let (blocks, block_of) = decompose(&matrix);
        Ok(Self {
            dim,
            matrix,
            blocks,
            block_of,
        })
    }

    /// Dimension `d` of the underlying Hilbert space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Sizes of the invariant blocks, in discovery order.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.indices.len()).collect()
    }

    /// `L·v` on a vectorised operator.
    pub fn apply_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim * self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim * self.dim,
                found: v.len(),
            });
        }
        let mut out = vec![ZERO; v.len()];
        for b in &self.blocks {
            for (a, &row) in b.indices.iter().enumerate() {
                out[row] = b.indices.iter().enumerate().map(|(c, &col)| b.matrix[(a, c)] * v[col]).sum();
            }
        }
        Ok(out)
    }

    /// Solves `(L − s·1)·x = rhs`, skipping blocks on which `rhs` vanishes.
    pub fn solve_shifted(&self, shift: Complex64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim * self.dim;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut x = vec![ZERO; n];
        for b in &self.blocks {
            if b.indices.iter().all(|&i| rhs[i] == ZERO) {
                continue;
            }
            let local: Vec<Complex64> = b.indices.iter().map(|&i| rhs[i]).collect();
            let sol = if b.indices.len() == 1 {
                let a = b.matrix[(0, 0)] - shift;
                if a.norm() == 0.0 {
                    return Err(Error::Singular {
                        condition: f64::INFINITY,
                    });
                }
                vec![local[0] / a]
            } else {
                let mut m = b.matrix.clone();
                for i in 0..b.indices.len() {
                    m[(i, i)] -= shift;
                }
                numerics::solve_linear(&m, &local)?
            };
            for (&i, z) in b.indices.iter().zip(sol) {
                x[i] = z;
            }
        }
        Ok(x)
    }

    /// All `d²` eigenvalues, gathered block by block.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.dim * self.dim);
        for b in &self.blocks {
            out.extend(numerics::eigenvalues(&b.matrix)?);
        }
        Ok(out)
    }

    /// Index of the block holding vectorised entry `k`.
    fn block_index(&self, k: usize) -> usize {
        self.block_of[k]
    }
}

/// Connected components of the nonzero pattern (rows and columns merged).
fn decompose(m: &ComplexMatrix) -> (Vec<Block>, Vec<usize>) {
    let n = m.rows();
    let data = m.as_slice();
    let mut sets = UnionFind::<usize>::new(n);
    for r in 0..n {
        for c in 0..n {
            if r != c && data[r * n + c] != ZERO {
                sets.union(r, c);
            }
        }
    }
    let labels = sets.into_labeling();
    let mut root_block = vec![usize::MAX; n];
    let mut block_of = vec![0; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        let root = labels[k];
        if root_block[root] == usize::MAX {
            root_block[root] = members.len();
            members.push(Vec::new());
        }
        block_of[k] = root_block[root];
        members[root_block[root]].push(k);
    }
    let blocks = members
        .into_iter()
        .map(|indices| {
            let k = indices.len();
            let matrix = ComplexMatrix::from_fn(k, k, |a, b| data[indices[a] * n + indices[b]]);
            Block { indices, matrix }
        })
        .collect();
    (blocks, block_of)
}

/// Local indices of the single closed class of the flow graph of `m`
/// (edge `c → r` when `m[r, c] ≠ 0`), or `None` if there is more than one.
///
/// A kernel vector vanishes identically outside a unique closed class.
fn closed_class(m: &ComplexMatrix) -> Option<Vec<usize>> {
    let n = m.rows();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for r in 0..n {
        for c in 0..n {
            if r != c && m[(r, c)] != ZERO {
                graph.add_edge(nodes[c], nodes[r], ());
            }
        }
    }
    let components = tarjan_scc(&graph);
    let mut component_of = vec![0; n];
    for (k, comp) in components.iter().enumerate() {
        for node in comp {
            component_of[node.index()] = k;
        }
    }
    let mut sinks = components.iter().enumerate().filter(|(k, comp)| {
        comp.iter()
            .all(|&node| graph.neighbors(node).all(|next| component_of[next.index()] == *k))
    });
    let first = sinks.next()?;
    if sinks.next().is_some() {
        return None;
    }
    let mut local: Vec<usize> = first.1.iter().map(|node| node.index()).collect();
    local.sort_unstable();
    Some(local)
}

/// `L(ρ) = −i[H, ρ] + Σ_k γ_k (A_k ρ A_k† − ½{A_k†A_k, ρ})` with `A_k = |to⟩⟨from|`.
///
/// `h` and the channel indices must refer to the same basis.
pub fn build_liouvillian(h: &ComplexMatrix, channels: &[JumpChannel]) -> Result<Superoperator> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let tolerance = HERMITIAN_TOLERANCE * h.max_abs().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > tolerance {
        return Err(Error::NotHermitian { defect, tolerance });
    }
    let d = h.rows();
    for c in channels {
        if c.from >= d || c.to >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: c.from.max(c.to) + 1,
            });
        }
    }
    let n = d * d;
    let mut l = ComplexMatrix::zeros(n, n);
    let minus_i = Complex64::new(0.0, -1.0);
    // −i(1 ⊗ H − Hᵀ ⊗ 1)
    for p in 0..d {
        for r in 0..d {
            for s in 0..d {
                let hrs = h[(r, s)];
                if hrs != ZERO {
                    l[(vec_index(r, p, d), vec_index(s, p, d))] += minus_i * hrs;
                    // ρH term: row (p, r) column (p, s) picks H[s, r]
                    l[(vec_index(p, r, d), vec_index(p, s, d))] -= minus_i * h[(s, r)];
                }
            }
        }
    }
    for ch in channels {
        let (i, j, g) = (ch.to, ch.from, ch.rate);
        if g == 0.0 {
            continue;
        }
        let half = Complex64::new(0.5 * g, 0.0);
        l[(vec_index(i, i, d), vec_index(j, j, d))] += Complex64::new(g, 0.0);
        for p in 0..d {
            l[(vec_index(j, p, d), vec_index(j, p, d))] -= half;
            l[(vec_index(p, j, d), vec_index(p, j, d))] -= half;
        }
    }
    Superoperator::from_matrix(l, d)
}

/// `L(ρ)` through the superoperator.
pub fn apply(l: &Superoperator, rho: &DensityOperator) -> Result<ComplexMatrix> {
    if rho.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: rho.dim(),
        });
    }
    Ok(from_vec(&l.apply_vec(&rho.to_vec())?, l.dim()))
}

/// `L(ρ)` evaluated directly from commutator and dissipators.
pub fn lindblad_rhs(
    h: &ComplexMatrix,
    channels: &[JumpChannel],
    rho: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if h.rows() != rho.rows() || !rho.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: rho.rows(),
        });
    }
    let d = h.rows();
    let mut out = h.commutator(rho).scale(Complex64::new(0.0, -1.0));
    for ch in channels {
        let a = ch.operator(d);
        let ad = a.adjoint();
        let ada = &ad * &a;
        let jump = &(&a * rho) * &ad;
        let anti = &(&ada * rho) + &(rho * &ada);
        let term = &jump - &anti.scale(Complex64::new(0.5, 0.0));
        out += &term.scale(Complex64::new(ch.rate, 0.0));
    }
    Ok(out)
}

/// Unique stationary state of `l`.
///
/// The kernel vector is taken from the block holding the smallest-magnitude
/// eigenvalue, restricted to the closed class of that block's flow graph so
/// that states the dynamics never reaches come out exactly zero. A block in
/// rate-equation form (real, non-negative off-diagonals) is solved by
/// [`numerics::stationary_distribution`]; anything else by
/// [`numerics::null_vector`]. The result is Hermitian-symmetrised and
/// normalised to unit trace.
pub fn steady_state(l: &Superoperator) -> Result<DensityOperator> {
    let d = l.dim();
    let mut smallest: Vec<(f64, usize)> = Vec::new();
    let mut scale = 0.0f64;
    for (k, b) in l.blocks.iter().enumerate() {
        scale = scale.max(b.matrix.max_abs());
        for z in numerics::eigenvalues(&b.matrix)? {
            smallest.push((z.norm(), k));
        }
    }
    smallest.sort_by(|a, b| a.0.total_cmp(&b.0));
    let floor = (ABS_FLOOR * scale).max(f64::MIN_POSITIVE);
    let (first, block) = smallest.first().copied().ok_or(Error::KernelDimension { dimension: 0 })?;
    if let Some(&(second, _)) = smallest.get(1) {
        if second <= UNIQUENESS_RATIO * first.max(floor) {
            return Err(Error::NonUniqueSteadyState {
                ratio: second / first.max(floor),
            });
        }
    }
    let b = &l.blocks[block];
    let support = closed_class(&b.matrix).unwrap_or_else(|| (0..b.indices.len()).collect());
    let k = support.len();
    let sub = ComplexMatrix::from_fn(k, k, |r, c| b.matrix[(support[r], support[c])]);
    let local = match numerics::stationary_distribution(&sub) {
        Some(p) => p.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        None => numerics::null_vector(&sub)?,
    };
    let mut v = vec![ZERO; d * d];
    for (&i, z) in support.iter().zip(local) {
        v[b.indices[i]] = z;
    }
    let m = from_vec(&v, d);
    let herm = (&m + &m.adjoint()).scale(Complex64::new(0.5, 0.0));
    let tr = herm.trace();
    if tr.norm() <= ABS_FLOOR {
        return Err(Error::KernelDimension { dimension: 0 });
    }
    DensityOperator::new(herm.scale(tr.inv()))
}

/// Fourth-order Runge-Kutta propagation of a vectorised operator.
pub fn propagate_vec(l: &Superoperator, v: &[Complex64], dt: f64, steps: usize) -> Result<Vec<Complex64>> {
    let mut x = v.to_vec();
    let h = Complex64::new(dt, 0.0);
    let axpy = |a: &[Complex64], s: Complex64, b: &[Complex64]| -> Vec<Complex64> {
        a.iter().zip(b).map(|(p, q)| p + s * q).collect()
    };
    for _ in 0..steps {
        let k1 = l.apply_vec(&x)?;
        let k2 = l.apply_vec(&axpy(&x, h * 0.5, &k1))?;
        let k3 = l.apply_vec(&axpy(&x, h * 0.5, &k2))?;
        let k4 = l.apply_vec(&axpy(&x, h, &k3))?;
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(x)
}

/// `ρ(t)` from `ρ(0)` with `steps` RK4 steps.
pub fn evolve(l: &Superoperator, rho: &DensityOperator, t: f64, steps: usize) -> Result<DensityOperator> {
    let steps = steps.max(1);
    let v = propagate_vec(l, &rho.to_vec(), t / steps as f64, steps)?;
    DensityOperator::from_vec(&v, l.dim())
}

/// Which block of `l` contains `ρ[r, c]`.
pub fn block_of_entry(l: &Superoperator, r: usize, c: usize) -> usize {
    l.block_index(vec_index(r, c, l.dim()))
}
