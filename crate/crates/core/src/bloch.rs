//! Orthonormal Hermitian product bases, the coefficient tensor of a state in
//! such a basis, and the qubit Bloch decomposition (coherent vectors plus one
//! correlation tensor per party subset).
//!
//! For qubits the basis is fixed as `(I, σx, σy, σz)/√2`, so a coefficient
//! tensor entry is `2^{-N/2}` times the matching Pauli expectation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::complex::{ComplexMatrix, ZERO};
use crate::density::{strides, unflatten, DensityMatrix};
use crate::error::{Error, Result};
use crate::tensor::{mode_apply, RealTensor};

/// Orthonormal basis `{X_i}` of Hermitian operators on `C^d`, with
/// `tr(X_i X_j) = δ_ij` and `X_1 = I/√d`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl HermitianBasis {
    /// Normalized generalized Gell-Mann basis: identity, then for each pair
    /// `j < k` the symmetric and antisymmetric off-diagonal elements, then the
    /// `d − 1` diagonal elements. For `d = 2` this is `(I, σx, σy, σz)/√2`.
    pub fn standard(dim: usize) -> Self {
        assert!(dim > 0, "basis dimension must be positive");
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(dim * dim);
        elements.push(ComplexMatrix::from_real_diagonal(&vec![1.0 / (dim as f64).sqrt(); dim]));
        for j in 0..dim {
            for k in j + 1..dim {
                let mut sym = ComplexMatrix::zeros(dim, dim);
                sym.set(j, k, Complex64::new(r2, 0.0));
                sym.set(k, j, Complex64::new(r2, 0.0));
                elements.push(sym);
                let mut anti = ComplexMatrix::zeros(dim, dim);
                anti.set(j, k, Complex64::new(0.0, -r2));
                anti.set(k, j, Complex64::new(0.0, r2));
                elements.push(anti);
            }
        }
        for l in 1..dim {
            let norm = ((l * (l + 1)) as f64).sqrt();
            let mut diag = vec![0.0; dim];
            for d in diag.iter_mut().take(l) {
                *d = 1.0 / norm;
            }
            diag[l] = -(l as f64) / norm;
            elements.push(ComplexMatrix::from_real_diagonal(&diag));
        }
        Self { dim, elements }
    }

    pub fn qubit() -> Self {
        Self::standard(2)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Expansion coefficients `⟨v|X_i|v⟩` of the projector `|v⟩⟨v|`.
    pub fn projector_coefficients(&self, v: &[Complex64]) -> Vec<f64> {
        self.elements
            .iter()
            .map(|x| {
                let xv = x.apply(v);
                v.iter().zip(&xv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
            })
            .collect()
    }

    /// `Σ_i coeffs[i] X_i`
    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (c, x) in coeffs.iter().zip(&self.elements) {
            for (dst, src) in m.data_mut().iter_mut().zip(x.data()) {
                *dst += src * c;
            }
        }
        m
    }
}

/// Expansion coefficients `c_{i_1…i_N} = tr(ρ X_{i_1} ⊗ … ⊗ X_{i_N})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor {
    party_dims: Vec<usize>,
    tensor: RealTensor,
}

impl CoefficientTensor {
    pub fn new(party_dims: Vec<usize>, tensor: RealTensor) -> Result<Self> {
        let expect: Vec<usize> = party_dims.iter().map(|d| d * d).collect();
        if tensor.dims() != expect.as_slice() {
            return Err(Error::dims(format!(
                "coefficient tensor dims {:?} do not match party dims {party_dims:?}",
                tensor.dims()
            )));
        }
        Ok(Self { party_dims, tensor })
    }

    pub fn party_dims(&self) -> &[usize] {
        &self.party_dims
    }

    pub fn num_parties(&self) -> usize {
        self.party_dims.len()
    }

    pub fn tensor(&self) -> &RealTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> RealTensor {
        self.tensor
    }

    pub fn norm_sq(&self) -> f64 {
        self.tensor.frobenius_norm_sq()
    }

    pub fn is_qubits(&self) -> bool {
        self.party_dims.iter().all(|&d| d == 2)
    }

    /// Rebuilds `Σ c_i X_{i_1} ⊗ … ⊗ X_{i_N}`. Positivity is not checked.
    pub fn reconstruct(&self, bases: &[HermitianBasis]) -> Result<DensityMatrix> {
        check_bases(&self.party_dims, bases)?;
        let mut data: Vec<Complex64> = self.tensor.data().iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut dims: Vec<usize> = self.tensor.dims().to_vec();
        for (m, basis) in bases.iter().enumerate() {
            let d = basis.dim;
            // M[(r,c), i] = X_i[r][c]
            let mut a = vec![ZERO; d * d * d * d];
            for (i, x) in basis.elements.iter().enumerate() {
                for (rc, v) in x.data().iter().enumerate() {
                    a[rc * d * d + i] = *v;
                }
            }
            data = mode_apply(&dims, &data, m, &a, d * d);
            dims[m] = d * d;
        }
        let rho = deinterleave(&self.party_dims, &data);
        DensityMatrix::new_unchecked(self.party_dims.clone(), rho)
    }

    /// Qubit reconstruction in the fixed Pauli basis.
    pub fn reconstruct_qubits(&self) -> Result<DensityMatrix> {
        let bases = vec![HermitianBasis::qubit(); self.num_parties()];
        self.reconstruct(&bases)
    }
}

fn check_bases(party_dims: &[usize], bases: &[HermitianBasis]) -> Result<()> {
    if bases.len() != party_dims.len() || bases.iter().zip(party_dims).any(|(b, &d)| b.dim != d) {
        return Err(Error::dims(format!(
            "bases of dims {:?} for parties {party_dims:?}",
            bases.iter().map(|b| b.dim).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// Reorders `ρ[r][c]` into a tensor whose `m`-th index is `r_m·d_m + c_m`.
fn interleave(party_dims: &[usize], rho: &ComplexMatrix) -> Vec<Complex64> {
    let d = rho.rows();
    let pair_dims: Vec<usize> = party_dims.iter().map(|x| x * x).collect();
    let pair_strides = strides(&pair_dims);
    let mut out = vec![ZERO; d * d];
    for r in 0..d {
        let rd = unflatten(r, party_dims);
        for c in 0..d {
            let cd = unflatten(c, party_dims);
            let idx: usize = (0..party_dims.len()).map(|m| (rd[m] * party_dims[m] + cd[m]) * pair_strides[m]).sum();
            out[idx] = rho.get(r, c);
        }
    }
    out
}

fn deinterleave(party_dims: &[usize], data: &[Complex64]) -> ComplexMatrix {
    let d: usize = party_dims.iter().product();
    let pair_dims: Vec<usize> = party_dims.iter().map(|x| x * x).collect();
    let pair_strides = strides(&pair_dims);
    let mut m = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let rd = unflatten(r, party_dims);
        for c in 0..d {
            let cd = unflatten(c, party_dims);
            let idx: usize = (0..party_dims.len()).map(|k| (rd[k] * party_dims[k] + cd[k]) * pair_strides[k]).sum();
            m.set(r, c, data[idx]);
        }
    }
    m
}

/// Coefficient tensor of `rho` in the product basis built from `bases`.
pub fn coefficient_tensor(rho: &DensityMatrix, bases: &[HermitianBasis]) -> Result<CoefficientTensor> {
    let party_dims = rho.party_dims().to_vec();
    check_bases(&party_dims, bases)?;
    let mut data = interleave(&party_dims, rho.matrix());
    let mut dims: Vec<usize> = party_dims.iter().map(|x| x * x).collect();
    for (m, basis) in bases.iter().enumerate() {
        let d = basis.dim;
        // M[i, (r,c)] = X_i[c][r], so that the contraction gives tr(ρ X_i)
        let mut a = vec![ZERO; d * d * d * d];
        for (i, x) in basis.elements.iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    a[i * d * d + r * d + c] = x.get(c, r);
                }
            }
        }
        data = mode_apply(&dims, &data, m, &a, d * d);
        dims[m] = d * d;
    }
    let tensor = RealTensor::new(dims, data.into_iter().map(|z| z.re).collect())?;
    CoefficientTensor::new(party_dims, tensor)
}

/// Coefficient tensor in the standard basis of every party.
pub fn standard_coefficient_tensor(rho: &DensityMatrix) -> Result<CoefficientTensor> {
    let bases: Vec<HermitianBasis> = rho.party_dims().iter().map(|&d| HermitianBasis::standard(d)).collect();
    coefficient_tensor(rho, &bases)
}

/// A non-empty set of parties, stored as a bitmask (party `p` is bit `p−1`).
///
/// Ordered by size, then lexicographically by sorted members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartySet(u64);

impl PartySet {
    pub fn from_parties(parties: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &p in parties {
            if p == 0 || p > 64 {
                return Err(Error::InvalidParty(format!("party {p}")));
            }
            bits |= 1 << (p - 1);
        }
        if bits == 0 {
            return Err(Error::InvalidParty("empty party set".into()));
        }
        Ok(Self(bits))
    }

    pub(crate) fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, party: usize) -> bool {
        (1..=64).contains(&party) && self.0 & (1 << (party - 1)) != 0
    }

    /// Members in increasing order.
    pub fn parties(&self) -> Vec<usize> {
        (1..=64).filter(|&p| self.contains(p)).collect()
    }

    /// Position of `party` among the sorted members.
    pub fn position(&self, party: usize) -> Option<usize> {
        self.contains(party).then(|| (self.0 & ((1 << (party - 1)) - 1)).count_ones() as usize)
    }
}

impl Ord for PartySet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.parties().cmp(&other.parties()))
    }
}

impl PartialOrd for PartySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.parties().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", ps.join(","))
    }
}

/// Bloch data of an N-qubit state: coherent vectors `s^(k)` and correlation
/// tensors `T^S` (entries `tr(ρ σ_{α_1} ⊗ … )` over the members of `S`, in
/// increasing party order) for every subset with `|S| ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDecomposition {
    n: usize,
    coherent: Vec<[f64; 3]>,
    correlations: BTreeMap<PartySet, RealTensor>,
}

impl BlochDecomposition {
    /// All-zero data: the maximally mixed state.
    pub fn zero(n: usize) -> Self {
        let mut correlations = BTreeMap::new();
        for bits in 1u64..(1 << n) {
            let s = PartySet::from_bits(bits);
            if s.len() >= 2 {
                correlations.insert(s, RealTensor::zeros(vec![3; s.len()]));
            }
        }
        Self { n, coherent: vec![[0.0; 3]; n], correlations }
    }

    /// From the full Pauli expectation tensor (dims `[4; N]`, index 0 = I).
    /// The all-identity entry is ignored.
    pub fn from_expectation_tensor(full: &RealTensor) -> Result<Self> {
        let n = full.order();
        if full.dims().iter().any(|&d| d != 4) {
            return Err(Error::dims(format!("expectation tensor dims {:?}", full.dims())));
        }
        if n > 16 {
            return Err(Error::InvalidArgument(format!("{n} qubits is beyond the supported range")));
        }
        let mut dec = Self::zero(n);
        let mut idx = vec![0usize; n];
        for (flat, &v) in full.data().iter().enumerate() {
            let digits = unflatten(flat, full.dims());
            let bits = digits.iter().enumerate().filter(|(_, &d)| d != 0).fold(0u64, |b, (m, _)| b | 1 << m);
            match bits.count_ones() {
                0 => {}
                1 => {
                    let k = bits.trailing_zeros() as usize;
                    dec.coherent[k][digits[k] - 1] = v;
                }
                _ => {
                    idx.clear();
                    idx.extend(digits.iter().filter(|&&d| d != 0).map(|d| d - 1));
                    let t = dec.correlations.get_mut(&PartySet::from_bits(bits)).expect("subset present");
                    t.set(&idx, v);
                }
            }
        }
        Ok(dec)
    }

    /// Full Pauli expectation tensor, with the all-identity entry set to 1.
    pub fn expectation_tensor(&self) -> RealTensor {
        let dims = vec![4; self.n];
        let mut full = RealTensor::zeros(dims.clone());
        let len = full.data().len();
        let mut idx = Vec::with_capacity(self.n);
        for flat in 0..len {
            let digits = unflatten(flat, &dims);
            let bits = digits.iter().enumerate().filter(|(_, &d)| d != 0).fold(0u64, |b, (m, _)| b | 1 << m);
            let v = match bits.count_ones() {
                0 => 1.0,
                1 => {
                    let k = bits.trailing_zeros() as usize;
                    self.coherent[k][digits[k] - 1]
                }
                _ => {
                    idx.clear();
                    idx.extend(digits.iter().filter(|&&d| d != 0).map(|d| d - 1));
                    self.correlations[&PartySet::from_bits(bits)].get(&idx)
                }
            };
            full.data_mut()[flat] = v;
        }
        full
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Coherent vector of party `k` (1-based).
    pub fn coherent(&self, k: usize) -> [f64; 3] {
        self.coherent[k - 1]
    }

    pub fn set_coherent(&mut self, k: usize, s: [f64; 3]) {
        self.coherent[k - 1] = s;
    }

    pub fn correlation(&self, set: &PartySet) -> Option<&RealTensor> {
        self.correlations.get(set)
    }

    pub fn correlation_mut(&mut self, set: &PartySet) -> Option<&mut RealTensor> {
        self.correlations.get_mut(set)
    }

    /// Correlation tensors ordered by subset size, then lexicographically.
    pub fn correlations(&self) -> impl Iterator<Item = (&PartySet, &RealTensor)> {
        self.correlations.iter()
    }

    /// `1 + Σ_k ‖s^(k)‖² + Σ_S ‖T^S‖²`, which equals `2^N tr ρ²`.
    pub fn total_norm_sq(&self) -> f64 {
        1.0 + self.coherent.iter().flatten().map(|x| x * x).sum::<f64>()
            + self.correlations.values().map(RealTensor::frobenius_norm_sq).sum::<f64>()
    }

    /// Coefficient tensor in the Pauli basis: every entry is the Pauli
    /// expectation scaled by `2^{-N/2}`.
    pub fn coefficient_tensor(&self) -> CoefficientTensor {
        let scale = 2f64.powf(-(self.n as f64) / 2.0);
        let mut t = self.expectation_tensor();
        t.data_mut().iter_mut().for_each(|x| *x *= scale);
        CoefficientTensor::new(vec![2; self.n], t).expect("qubit dims")
    }

    /// Inverse of [`coefficient_tensor`](Self::coefficient_tensor) for qubit tensors.
    pub fn from_coefficient_tensor(c: &CoefficientTensor) -> Result<Self> {
        if let Some((m, &d)) = c.party_dims().iter().enumerate().find(|(_, &d)| d != 2) {
            return Err(Error::NotQubit { party: m + 1, dim: d });
        }
        let scale = 2f64.powf(c.num_parties() as f64 / 2.0);
        let mut t = c.tensor().clone();
        t.data_mut().iter_mut().for_each(|x| *x *= scale);
        Self::from_expectation_tensor(&t)
    }
}

/// Bloch decomposition of an N-qubit state.
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    if let Some((m, &d)) = rho.party_dims().iter().enumerate().find(|(_, &d)| d != 2) {
        return Err(Error::NotQubit { party: m + 1, dim: d });
    }
    let bases = vec![HermitianBasis::qubit(); rho.num_parties()];
    BlochDecomposition::from_coefficient_tensor(&coefficient_tensor(rho, &bases)?)
}

/// `2^{-N}(I + Σ s·σ + Σ T·σ⊗σ…)`. Hermitian with unit trace by
/// construction; positivity is the caller's concern.
pub fn reconstruct_state(dec: &BlochDecomposition) -> Result<DensityMatrix> {
    dec.coefficient_tensor().reconstruct_qubits()
}

/// `|‖C‖² − 2^{-N}(1 + Σ‖s‖² + Σ‖T‖²)|`
pub fn check_norm_identity(c: &CoefficientTensor, dec: &BlochDecomposition) -> f64 {
    let n = dec.num_qubits() as i32;
    (c.norm_sq() - 2f64.powi(-n) * dec.total_norm_sq()).abs()
}

/// Single-qubit Pauli expectations `tr(ρ σ_α)`, computed directly.
#[cfg(test)]
pub(crate) fn pauli_expectations_1q(rho: &ComplexMatrix) -> [f64; 3] {
    let p = crate::complex::pauli();
    std::array::from_fn(|a| rho.matmul(&p[a]).expect("2x2").trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::pauli;
    use crate::density::partial_trace;

    fn pure(dims: Vec<usize>, amps: &[(usize, f64)]) -> DensityMatrix {
        let d: usize = dims.iter().product();
        let mut v = vec![ZERO; d];
        for &(i, a) in amps {
            v[i] = Complex64::new(a, 0.0);
        }
        DensityMatrix::from_pure(dims, &v).unwrap()
    }

    fn ghz() -> DensityMatrix {
        pure(vec![2, 2, 2], &[(0, 1.0), (7, 1.0)])
    }

    fn w() -> DensityMatrix {
        pure(vec![2, 2, 2], &[(1, 1.0), (2, 1.0), (4, 1.0)])
    }

    fn bell() -> DensityMatrix {
        pure(vec![2, 2], &[(0, 1.0), (3, 1.0)])
    }

    fn set(ps: &[usize]) -> PartySet {
        PartySet::from_parties(ps).unwrap()
    }

    #[test]
    fn bases_are_orthonormal() {
        for d in 1..=4 {
            let b = HermitianBasis::standard(d);
            assert_eq!(b.elements().len(), d * d);
            for (i, x) in b.elements().iter().enumerate() {
                assert!(x.max_abs_diff(&x.adjoint()) < 1e-15);
                for (j, y) in b.elements().iter().enumerate() {
                    let ip = x.matmul(y).unwrap().trace();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - expect).norm() < 1e-12, "d={d} i={i} j={j}");
                }
            }
        }
        let q = HermitianBasis::qubit();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        for (a, p) in pauli().iter().enumerate() {
            assert!(q.elements()[a + 1].max_abs_diff(&p.scale(Complex64::new(r2, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_has_only_identity_component() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2, 2]).unwrap();
        let c = standard_coefficient_tensor(&rho).unwrap();
        let first = 2f64.powf(-1.5);
        assert!((c.tensor().data()[0] - first).abs() < 1e-15);
        assert!(c.tensor().data()[1..].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn bell_coefficients() {
        let c = standard_coefficient_tensor(&bell()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = match (i, j) {
                    (0, 0) | (1, 1) | (3, 3) => 0.5,
                    (2, 2) => -0.5,
                    _ => 0.0,
                };
                assert!((c.tensor().get(&[i, j]) - expect).abs() < 1e-15, "({i},{j})");
            }
        }
        assert!((c.norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_round_trip_qutrit_qubit() {
        let mut v = vec![ZERO; 6];
        for (i, a) in v.iter_mut().enumerate() {
            *a = Complex64::new(i as f64 + 1.0, (i as f64) * 0.5 - 1.0);
        }
        let rho = DensityMatrix::from_pure(vec![3, 2], &v).unwrap();
        let mixed = rho.mix(&DensityMatrix::maximally_mixed(vec![3, 2]).unwrap(), 0.7).unwrap();
        let c = standard_coefficient_tensor(&mixed).unwrap();
        let bases = [HermitianBasis::standard(3), HermitianBasis::standard(2)];
        let back = c.reconstruct(&bases).unwrap();
        assert!(back.matrix().max_abs_diff(mixed.matrix()) < 1e-14);
        assert!((c.norm_sq() - mixed.purity()).abs() < 1e-14);
        let unit = c.tensor().get(&[0, 0]);
        assert!((unit - 1.0 / 6f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ghz_bloch_data() {
        let dec = bloch_decompose(&ghz()).unwrap();
        for k in 1..=3 {
            assert_eq!(dec.coherent(k), [0.0; 3]);
        }
        for pair in [[1, 2], [1, 3], [2, 3]] {
            let t = dec.correlation(&set(&pair)).unwrap();
            let expect = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
            assert!(t.data().iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-15), "{pair:?}");
        }
        let t3 = dec.correlation(&set(&[1, 2, 3])).unwrap();
        let mut expect = RealTensor::zeros(vec![3, 3, 3]);
        expect.set(&[0, 0, 0], 1.0);
        expect.set(&[0, 1, 1], -1.0);
        expect.set(&[1, 0, 1], -1.0);
        expect.set(&[1, 1, 0], -1.0);
        assert!(t3.max_abs_diff(&expect) < 1e-15);
        assert!((t3.frobenius_norm_sq() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn w_bloch_data() {
        let dec = bloch_decompose(&w()).unwrap();
        for k in 1..=3 {
            let s = dec.coherent(k);
            assert!(s[0].abs() < 1e-15 && s[1].abs() < 1e-15 && (s[2] - 1.0 / 3.0).abs() < 1e-15);
        }
        for pair in [[1, 2], [1, 3], [2, 3]] {
            let t = dec.correlation(&set(&pair)).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    let expect = match (a, b) {
                        (0, 0) | (1, 1) => 2.0 / 3.0,
                        (2, 2) => -1.0 / 3.0,
                        _ => 0.0,
                    };
                    assert!((t.get(&[a, b]) - expect).abs() < 1e-15);
                }
            }
        }
        let t3 = dec.correlation(&set(&[1, 2, 3])).unwrap();
        let mut expect = RealTensor::zeros(vec![3, 3, 3]);
        expect.set(&[2, 2, 2], -1.0);
        for p in [[0, 0, 2], [0, 2, 0], [2, 0, 0], [1, 1, 2], [1, 2, 1], [2, 1, 1]] {
            expect.set(&p, 2.0 / 3.0);
        }
        assert!(t3.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn product_of_zeros() {
        let dec = bloch_decompose(&pure(vec![2, 2, 2], &[(0, 1.0)])).unwrap();
        for k in 1..=3 {
            let s = dec.coherent(k);
            assert!(s[0].abs() < 1e-15 && s[1].abs() < 1e-15 && (s[2] - 1.0).abs() < 1e-15);
        }
        for (s, t) in dec.correlations() {
            let mut zz = vec![0; s.len()];
            zz.fill(2);
            for (flat, &v) in t.data().iter().enumerate() {
                let expect = if flat == t.offset(&zz) { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn reconstruct_simple_cases() {
        let mixed = reconstruct_state(&BlochDecomposition::zero(3)).unwrap();
        assert!(mixed.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.125; 8])) < 1e-15);

        let mut one = BlochDecomposition::zero(1);
        one.set_coherent(1, [0.0, 0.0, 1.0]);
        let zero_ket = reconstruct_state(&one).unwrap();
        assert!(zero_ket.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-15);

        let g = ghz();
        let back = reconstruct_state(&bloch_decompose(&g).unwrap()).unwrap();
        assert!(back.matrix().max_abs_diff(g.matrix()) < 1e-12);
    }

    #[test]
    fn norm_identity_examples() {
        for rho in [bell(), ghz(), w(), DensityMatrix::maximally_mixed(vec![2, 2]).unwrap()] {
            let c = standard_coefficient_tensor(&rho).unwrap();
            let dec = bloch_decompose(&rho).unwrap();
            assert!(check_norm_identity(&c, &dec) < 1e-12);
        }
        // GHZ: 1 = (1 + 0 + 3·1 + 4) / 8
        assert!((bloch_decompose(&ghz()).unwrap().total_norm_sq() - 8.0).abs() < 1e-13);
    }

    #[test]
    fn coherent_vector_matches_reduced_state() {
        let rho = w();
        let dec = bloch_decompose(&rho).unwrap();
        for k in 1..=3 {
            let reduced = partial_trace(&rho, &[k]).unwrap();
            let s = pauli_expectations_1q(reduced.matrix());
            assert!((0..3).all(|a| (s[a] - dec.coherent(k)[a]).abs() < 1e-15));
        }
    }

    #[test]
    fn party_set_order_and_positions() {
        let mut sets = [set(&[2, 3]), set(&[1, 2, 3]), set(&[1, 3]), set(&[1, 2]), set(&[4])];
        sets.sort();
        let shown: Vec<String> = sets.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["{4}", "{1,2}", "{1,3}", "{2,3}", "{1,2,3}"]);
        assert_eq!(set(&[2, 5, 7]).position(5), Some(1));
        assert_eq!(set(&[2, 5, 7]).position(3), None);
        assert!(PartySet::from_parties(&[]).is_err());
    }

    #[test]
    fn non_qubit_rejected() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 3]).unwrap();
        assert!(matches!(bloch_decompose(&rho), Err(Error::NotQubit { party: 2, dim: 3 })));
    }
}
