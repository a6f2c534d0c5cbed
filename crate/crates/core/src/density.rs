//! Density matrices over a list of party dimensions.
//!
//! Party 1 is the most significant Kronecker factor.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::complex::{ComplexMatrix, ZERO};
use crate::error::{Error, Result, ValidationFailure};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    party_dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace, positive semidefinite.
    pub fn new(party_dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::new_unchecked(party_dims, matrix)?;
        rho.validate().map_err(Error::Validation)?;
        Ok(rho)
    }

    /// Checks shapes only. Used where physicality is established by
    /// construction or deliberately left to the caller.
    pub fn new_unchecked(party_dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        if party_dims.is_empty() || party_dims.contains(&0) {
            return Err(Error::dims("party dimensions must be non-empty and positive"));
        }
        let d: usize = party_dims.iter().product();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::dims(format!(
                "party dims {party_dims:?} need a {d}x{d} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { party_dims, matrix })
    }

    pub fn from_pure(party_dims: Vec<usize>, amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::new_unchecked(party_dims, ComplexMatrix::outer(&psi, &psi))
    }

    pub fn maximally_mixed(party_dims: Vec<usize>) -> Result<Self> {
        let d: usize = party_dims.iter().product();
        Self::new_unchecked(party_dims, ComplexMatrix::from_real_diagonal(&vec![1.0 / d as f64; d]))
    }

    pub fn validate(&self) -> std::result::Result<(), ValidationFailure> {
        let m = &self.matrix;
        let d = m.rows();
        let mut worst = (0, 0, 0.0);
        for r in 0..d {
            for c in r..d {
                let dev = (m.get(r, c) - m.get(c, r).conj()).norm();
                if dev > worst.2 {
                    worst = (r, c, dev);
                }
            }
        }
        if worst.2 > HERMITICITY_TOL {
            return Err(ValidationFailure::Hermiticity { row: worst.0, col: worst.1, deviation: worst.2 });
        }
        let tr = m.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(ValidationFailure::Trace { re: tr.re, im: tr.im });
        }
        let min = self.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(ValidationFailure::Positivity { min_eigenvalue: min });
        }
        Ok(())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |r, c| {
            0.5 * (self.matrix.get(r, c) + self.matrix.get(c, r).conj())
        });
        m.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn party_dims(&self) -> &[usize] {
        &self.party_dims
    }

    pub fn num_parties(&self) -> usize {
        self.party_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn is_qubits(&self) -> bool {
        self.party_dims.iter().all(|&d| d == 2)
    }

    pub fn purity(&self) -> f64 {
        // tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.hs_norm_sq()
    }

    /// `‖self − other‖²` in the Hilbert–Schmidt norm.
    pub fn hs_distance_sq(&self, other: &Self) -> Result<f64> {
        Ok(self.matrix.sub(&other.matrix)?.hs_norm_sq())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.party_dims.clone();
        dims.extend_from_slice(&other.party_dims);
        Self { party_dims: dims, matrix: self.matrix.kron(&other.matrix) }
    }

    /// Convex combination `p·self + (1−p)·other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.party_dims != other.party_dims {
            return Err(Error::dims("mixing states on different party structures"));
        }
        let m = self
            .matrix
            .scale(Complex64::new(p, 0.0))
            .add(&other.matrix.scale(Complex64::new(1.0 - p, 0.0)))?;
        Ok(Self { party_dims: self.party_dims.clone(), matrix: m })
    }

    /// Conjugation `U ρ U†` by an operator on the full space.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Self::new_unchecked(self.party_dims.clone(), m)
    }

    /// Reorders the parties: party `perm[j]` (1-based) of `self` becomes
    /// party `j + 1` of the result.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_parties();
        check_permutation(perm, n)?;
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.party_dims[p - 1]).collect();
        let d = self.dim();
        let old_strides = strides(&self.party_dims);
        // map every new basis index to the corresponding old one
        let map: Vec<usize> = (0..d)
            .map(|new| {
                let digits = unflatten(new, &new_dims);
                digits.iter().zip(perm).map(|(&x, &p)| x * old_strides[p - 1]).sum()
            })
            .collect();
        let mut m = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                m.set(r, c, self.matrix.get(map[r], map[c]));
            }
        }
        Ok(Self { party_dims: new_dims, matrix: m })
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidParty(format!("{perm:?} is not a permutation of 1..={n}")));
    }
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::InvalidParty(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

pub(crate) fn unflatten(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = idx % dims[i];
        idx /= dims[i];
    }
    out
}

/// Reduced state on the parties in `keep` (1-based, any order; the result
/// keeps the original party order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_parties();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() != keep.len() || kept.iter().any(|&p| p == 0 || p > n) {
        return Err(Error::InvalidParty(format!("cannot keep parties {keep:?} of {n}")));
    }
    let traced: Vec<usize> = (1..=n).filter(|p| !kept.contains(p)).collect();
    let kdims: Vec<usize> = kept.iter().map(|&p| rho.party_dims[p - 1]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&p| rho.party_dims[p - 1]).collect();
    let st = strides(&rho.party_dims);
    let offset = |parties: &[usize], dims: &[usize], idx: usize| -> usize {
        unflatten(idx, dims).iter().zip(parties).map(|(&x, &p)| x * st[p - 1]).sum()
    };
    let dk: usize = kdims.iter().product();
    let dt: usize = tdims.iter().product();
    let k_off: Vec<usize> = (0..dk).map(|i| offset(&kept, &kdims, i)).collect();
    let t_off: Vec<usize> = (0..dt).map(|i| offset(&traced, &tdims, i)).collect();
    let mut m = ComplexMatrix::zeros(dk, dk);
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = ZERO;
            for &t in &t_off {
                acc += rho.matrix.get(k_off[r] + t, k_off[c] + t);
            }
            m.set(r, c, acc);
        }
    }
    DensityMatrix::new_unchecked(kdims, m)
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` acting on party `party` (1-based).
pub fn embed_operator(op: &ComplexMatrix, party: usize, party_dims: &[usize]) -> Result<ComplexMatrix> {
    if party == 0 || party > party_dims.len() {
        return Err(Error::InvalidParty(format!("party {party} of {}", party_dims.len())));
    }
    let d = party_dims[party - 1];
    if op.rows() != d || op.cols() != d {
        return Err(Error::dims(format!("operator is {}x{}, party {party} has dim {d}", op.rows(), op.cols())));
    }
    let before: usize = party_dims[..party - 1].iter().product();
    let after: usize = party_dims[party..].iter().product();
    Ok(ComplexMatrix::identity(before).kron(op).kron(&ComplexMatrix::identity(after)))
}
