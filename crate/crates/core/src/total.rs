//! Total quantum correlations `Q`: measure every qubit in turn, each time in
//! the basis that is optimal for the current chain state.

use serde::Serialize;

use crate::bloch::{BlochDecomposition, CoefficientTensor};
use crate::density::{check_permutation, DensityMatrix};
use crate::discord::{discord_from_isometry, discord_qubit_closed_form, discord_two_qubit_dakic, two_qubit_bloch, Isometry};
use crate::error::{Error, Result};
use crate::measurement::optimal_post_measurement_state;
use crate::sym3::{sym3_top_eigen, Sym3};
use crate::tensor::n_mode_product;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub party: usize,
    /// Discord of the chain state before this step, for this party.
    pub discord: f64,
    pub a_tilde: Isometry,
    #[serde(skip)]
    pub post: CoefficientTensor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TotalCorrelationReport {
    /// Sum of the step discords.
    pub q_value: f64,
    /// `‖C‖² − ‖C ×₁ Ã₁ ⋯ ×_N Ã_N‖²` with the step isometries.
    pub telescoped: f64,
    pub order: Vec<usize>,
    pub steps: Vec<ChainStep>,
}

impl TotalCorrelationReport {
    /// Coefficient tensor after the last measurement.
    pub fn final_tensor(&self) -> &CoefficientTensor {
        &self.steps.last().expect("at least one qubit").post
    }
}

/// Greedy measurement chain over `order` (default `1..=N`). Each step
/// rebuilds `G` from the current chain tensor, takes the closed-form
/// optimum and applies `C ← C ×_k Ãᵗ Ã`.
pub fn total_quantum_correlations(dec: &BlochDecomposition, order: Option<&[usize]>) -> Result<TotalCorrelationReport> {
    let n = dec.num_qubits();
    let order: Vec<usize> = match order {
        Some(o) => {
            check_permutation(o, n)?;
            o.to_vec()
        }
        None => (1..=n).collect(),
    };
    let original = dec.coefficient_tensor();
    let mut current = original.clone();
    let mut steps = Vec::with_capacity(n);
    for &party in &order {
        let state = BlochDecomposition::from_coefficient_tensor(&current)?;
        let report = discord_qubit_closed_form(&state, party)?;
        current = optimal_post_measurement_state(&current, &report.a_tilde, party)?;
        steps.push(ChainStep { party, discord: report.value, a_tilde: report.a_tilde, post: current.clone() });
    }
    let q_value = steps.iter().map(|s| s.discord).sum();
    let telescoped = telescoped_value(&original, &steps)?;
    Ok(TotalCorrelationReport { q_value, telescoped, order, steps })
}

/// Chain with caller-chosen isometries instead of the per-step optimum; the
/// step values are `‖C‖² − ‖C ×_k A‖²` of the current chain tensor.
pub fn chain_with_isometries(c: &CoefficientTensor, order: &[usize], isometries: &[Isometry]) -> Result<TotalCorrelationReport> {
    check_permutation(order, c.num_parties())?;
    if isometries.len() != order.len() {
        return Err(Error::InvalidArgument(format!("{} isometries for {} steps", isometries.len(), order.len())));
    }
    let mut current = c.clone();
    let mut steps = Vec::with_capacity(order.len());
    for (&party, a) in order.iter().zip(isometries) {
        let discord = discord_from_isometry(&current, a, party)?;
        current = optimal_post_measurement_state(&current, a, party)?;
        steps.push(ChainStep { party, discord, a_tilde: a.clone(), post: current.clone() });
    }
    let q_value = steps.iter().map(|s| s.discord).sum();
    let telescoped = telescoped_value(c, &steps)?;
    Ok(TotalCorrelationReport { q_value, telescoped, order: order.to_vec(), steps })
}

/// `‖C‖² − ‖C ×_{k₁} A₁ ⋯ ×_{k_N} A_N‖²` for the isometries of `steps`.
pub fn telescoped_value(c: &CoefficientTensor, steps: &[ChainStep]) -> Result<f64> {
    let mut t = c.tensor().clone();
    for s in steps {
        t = n_mode_product(&t, s.a_tilde.matrix(), s.party)?;
    }
    Ok(c.norm_sq() - t.frobenius_norm_sq())
}

/// Two-qubit `Q = D_1(ρ) + D_2(Π̃₁(ρ))` from Bloch vectors alone: measuring
/// qubit 1 along `ê` maps `x → (ê·x)ê`, `T → êêᵗT` and leaves `y` alone.
pub fn two_qubit_total(rho: &DensityMatrix) -> Result<f64> {
    let d1 = discord_two_qubit_dakic(rho, 1)?;
    let (x, y, t) = two_qubit_bloch(rho.matrix());
    let mut g = Sym3::outer(x);
    for a in 0..3 {
        for b in a..3 {
            g.add_assign_entry(a, b, (0..3).map(|c| t[a][c] * t[b][c]).sum());
        }
    }
    let (_, e) = sym3_top_eigen(&g);
    // ê ᵗ T, the only surviving row direction of the measured correlation matrix
    let et: [f64; 3] = std::array::from_fn(|b| (0..3).map(|a| e[a] * t[a][b]).sum());
    let norm_et: f64 = et.iter().map(|v| v * v).sum();
    let norm_y: f64 = y.iter().map(|v| v * v).sum();
    // G₂ = y yᵗ + T'ᵗ T' with T' = ê (êᵗT): T'ᵗT' = (êᵗT)ᵗ(êᵗT)
    let g2 = Sym3::outer(y).plus(&Sym3::outer(et));
    let (lambda, _) = sym3_top_eigen(&g2);
    let d2 = 0.25 * (norm_y + norm_et - lambda);
    Ok(d1 + if (-1e-12..0.0).contains(&d2) { 0.0 } else { d2 })
}

/// Same chain starting from a coefficient tensor; fails on non-qubit parties.
pub fn total_from_tensor(c: &CoefficientTensor, order: Option<&[usize]>) -> Result<TotalCorrelationReport> {
    total_quantum_correlations(&BlochDecomposition::from_coefficient_tensor(c)?, order)
}
