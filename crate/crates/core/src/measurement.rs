//! Non-selective von Neumann measurements and classical-quantum states.

use num_complex::Complex64;

use crate::bloch::{CoefficientTensor, HermitianBasis};
use crate::complex::ComplexMatrix;
use crate::density::{embed_operator, DensityMatrix};
use crate::discord::Isometry;
use crate::error::{Error, Result};
use crate::tensor::n_mode_product;

pub const ORTHONORMALITY_TOL: f64 = 1e-12;

/// Orthonormal basis `{|l⟩}` of one party.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveBasis {
    party: usize,
    kets: Vec<Vec<Complex64>>,
}

impl ProjectiveBasis {
    pub fn new(party: usize, kets: Vec<Vec<Complex64>>) -> Result<Self> {
        if party == 0 {
            return Err(Error::InvalidParty("parties are numbered from 1".into()));
        }
        let d = kets.len();
        if d == 0 || kets.iter().any(|k| k.len() != d) {
            return Err(Error::InvalidBasis(format!("need {d} kets of length {d}")));
        }
        for (i, a) in kets.iter().enumerate() {
            for (j, b) in kets.iter().enumerate() {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - expect).norm() > ORTHONORMALITY_TOL {
                    return Err(Error::InvalidBasis(format!("⟨{i}|{j}⟩ = {ip}, expected {expect}")));
                }
            }
        }
        Ok(Self { party, kets })
    }

    pub fn computational(party: usize, d: usize) -> Result<Self> {
        Self::new(party, crate::discord::computational_kets(d))
    }

    pub fn party(&self) -> usize {
        self.party
    }

    pub fn dim(&self) -> usize {
        self.kets.len()
    }

    pub fn kets(&self) -> &[Vec<Complex64>] {
        &self.kets
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.kets.iter().map(|k| ComplexMatrix::outer(k, k)).collect()
    }

    pub fn isometry(&self) -> Result<Isometry> {
        Isometry::from_kets(&self.kets, &HermitianBasis::standard(self.dim()))
    }
}

/// `Σ_l P̂_l ρ P̂_l` with `P̂_l` the projector `|l⟩⟨l|` on the basis's party.
pub fn apply_projective_measurement(rho: &DensityMatrix, basis: &ProjectiveBasis) -> Result<DensityMatrix> {
    let k = basis.party;
    if k > rho.num_parties() {
        return Err(Error::InvalidParty(format!("party {k} of {}", rho.num_parties())));
    }
    if rho.party_dims()[k - 1] != basis.dim() {
        return Err(Error::dims(format!(
            "basis of dimension {} for party {k} of dimension {}",
            basis.dim(),
            rho.party_dims()[k - 1]
        )));
    }
    let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for p in basis.projectors() {
        let full = embed_operator(&p, k, rho.party_dims())?;
        let term = full.matmul(rho.matrix())?.matmul(&full)?;
        out = out.add(&term)?;
    }
    DensityMatrix::new_unchecked(rho.party_dims().to_vec(), out)
}

/// Recovers the measurement basis from an isometry: row `a_l` expands the
/// projector `Σ_i a_{li} X_i`, whose range is spanned by `|l⟩`. The phase of
/// each ket is fixed so its first nonzero amplitude is real and positive.
pub fn basis_from_isometry(a: &Isometry, party: usize) -> Result<ProjectiveBasis> {
    let d = a.dim();
    let basis = HermitianBasis::standard(d);
    let kets = (0..d)
        .map(|l| {
            let p = basis.combine(a.matrix().row(l));
            // the largest column of a rank-one projector is the best-conditioned copy of |l⟩
            let col = (0..d)
                .max_by(|&x, &y| p.get(x, x).re.total_cmp(&p.get(y, y).re))
                .expect("d > 0");
            let mut v: Vec<Complex64> = (0..d).map(|r| p.get(r, col)).collect();
            let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
            let lead = v.iter().find(|z| z.norm() > 1e-12).copied().unwrap_or(Complex64::new(1.0, 0.0));
            let phase = lead.conj() / lead.norm();
            for z in &mut v {
                *z = *z * phase / norm;
            }
            v
        })
        .collect();
    ProjectiveBasis::new(party, kets)
}

/// `C ×_k (Ãᵗ Ã)`: the coefficient tensor of the state after measuring party
/// `k` in the basis encoded by `a_tilde`.
pub fn optimal_post_measurement_state(c: &CoefficientTensor, a_tilde: &Isometry, k: usize) -> Result<CoefficientTensor> {
    if k == 0 || k > c.num_parties() {
        return Err(Error::InvalidParty(format!("party {k} of {}", c.num_parties())));
    }
    if a_tilde.dim() != c.party_dims()[k - 1] {
        return Err(Error::dims(format!(
            "isometry for dimension {} applied to party of dimension {}",
            a_tilde.dim(),
            c.party_dims()[k - 1]
        )));
    }
    let t = n_mode_product(c.tensor(), &a_tilde.projector(), k)?;
    CoefficientTensor::new(c.party_dims().to_vec(), t)
}

/// `Σ_l p_l |l⟩⟨l| ⊗ ρ_l` with the measured party placed at slot `k`.
/// `conditionals[l]` lives on the remaining parties in their original order;
/// term `l` uses ket `l` of `basis`.
pub fn build_classical_quantum_state(
    k: usize,
    probs: &[f64],
    basis: &ProjectiveBasis,
    conditionals: &[DensityMatrix],
) -> Result<DensityMatrix> {
    if basis.party != k {
        return Err(Error::InvalidBasis(format!("basis belongs to party {}, not {k}", basis.party)));
    }
    if probs.is_empty() || probs.len() != conditionals.len() || probs.len() > basis.dim() {
        return Err(Error::InvalidDistribution(format!(
            "{} probabilities, {} conditionals, {} kets",
            probs.len(),
            conditionals.len(),
            basis.dim()
        )));
    }
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidDistribution(format!("probabilities {probs:?} outside [0, 1]")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    let rest = conditionals[0].party_dims().to_vec();
    for rho in conditionals {
        if rho.party_dims() != rest {
            return Err(Error::dims("conditionals live on different party structures"));
        }
        rho.validate().map_err(Error::Validation)?;
    }
    let n = rest.len() + 1;
    if k > n {
        return Err(Error::InvalidParty(format!("party {k} of {n}")));
    }
    let d = basis.dim();
    let side = d * conditionals[0].dim();
    let mut m = ComplexMatrix::zeros(side, side);
    for ((p, rho), ket) in probs.iter().zip(conditionals).zip(&basis.kets) {
        let term = ComplexMatrix::outer(ket, ket).kron(rho.matrix()).scale(Complex64::new(*p, 0.0));
        m = m.add(&term)?;
    }
    let mut dims = vec![d];
    dims.extend_from_slice(&rest);
    let front = DensityMatrix::new_unchecked(dims, m)?;
    // slot k takes the measured party (currently first)
    let perm: Vec<usize> = (1..=n)
        .map(|j| match j.cmp(&k) {
            std::cmp::Ordering::Less => j + 1,
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => j,
        })
        .collect();
    front.permute_parties(&perm)
}
