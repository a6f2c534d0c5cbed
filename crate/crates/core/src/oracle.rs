//! Brute-force checks for the closed forms.
//!
//! [`oracle_discord_qubit`] minimizes `‖ρ − Π(ρ)‖²` over measurement axes on
//! a zooming grid, working on the density matrix with projector algebra
//! only. It never touches the Bloch data or the `G` matrix.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{ComplexMatrix, ZERO};
use crate::density::DensityMatrix;
use crate::discord::discord_qubit;
use crate::error::{Error, Result};
use crate::sym3::{sym3_top_eigen, Sym3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub refinement_rounds: usize,
    pub zoom_factor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { theta_steps: 181, phi_steps: 360, refinement_rounds: 3, zoom_factor: 10.0 }
    }
}

impl GridSpec {
    pub fn new(theta_steps: usize, phi_steps: usize, refinement_rounds: usize, zoom_factor: f64) -> Result<Self> {
        let g = Self { theta_steps, phi_steps, refinement_rounds, zoom_factor };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_steps < 8 || self.phi_steps < 8 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 8 steps per angle, got {}x{}",
                self.theta_steps, self.phi_steps
            )));
        }
        if !(self.zoom_factor > 1.0) {
            return Err(Error::InvalidArgument(format!("zoom factor {} must exceed 1", self.zoom_factor)));
        }
        Ok(())
    }

    /// Searches `f` over the sphere (as `(cos θ, φ)`) for its minimum. Round
    /// 0 covers everything; every later round re-grids a window shrunk by
    /// `zoom_factor` around the incumbent. Returns the incumbent and the best
    /// value after each round.
    fn minimize<F>(&self, f: F) -> Result<((f64, f64, f64), Vec<f64>)>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        self.validate()?;
        let (mut c_half, mut p_half): (f64, f64) = (1.0, PI);
        let (mut c_mid, mut p_mid): (f64, f64) = (0.0, PI);
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let mut history = Vec::with_capacity(self.refinement_rounds + 1);
        for round in 0..=self.refinement_rounds {
            let c_lo = (c_mid - c_half).max(-1.0);
            let c_hi = (c_mid + c_half).min(1.0);
            let (p_lo, p_span, p_den) = if round == 0 {
                // full circle: exclude the endpoint 2π, it repeats 0
                (0.0, 2.0 * PI, self.phi_steps as f64)
            } else {
                (p_mid - p_half, 2.0 * p_half, (self.phi_steps - 1) as f64)
            };
            let c_den = (self.theta_steps - 1) as f64;
            let round_best = (0..self.theta_steps * self.phi_steps)
                .into_par_iter()
                .map(|idx| {
                    let (i, j) = (idx / self.phi_steps, idx % self.phi_steps);
                    let c = c_lo + (c_hi - c_lo) * i as f64 / c_den;
                    let p = p_lo + p_span * j as f64 / p_den;
                    (f(c, p), c, p)
                })
                .reduce(|| (f64::INFINITY, 0.0, 0.0), |a, b| if b.0 < a.0 { b } else { a });
            if round_best.0 < best.0 {
                best = round_best;
            }
            history.push(best.0);
            c_mid = best.1;
            p_mid = best.2;
            c_half /= self.zoom_factor;
            p_half /= self.zoom_factor;
        }
        Ok((best, history))
    }
}

/// Unit vector with polar cosine `c` and azimuth `phi`.
pub fn axis(c: f64, phi: f64) -> [f64; 3] {
    let s = (1.0 - c * c).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), c]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    /// Measurement axis; the basis is `{|±n̂⟩}`.
    pub axis: [f64; 3],
    pub round_minima: Vec<f64>,
}

/// `min_n̂ ‖ρ − Π_n̂(ρ)‖²` with `Π_n̂` the measurement of qubit `k` in the
/// eigenbasis of `n̂·σ`.
pub fn oracle_discord_qubit(rho: &DensityMatrix, k: usize, grid: &GridSpec) -> Result<OracleResult> {
    let n = rho.num_parties();
    if k == 0 || k > n {
        return Err(Error::InvalidParty(format!("party {k} of {n}")));
    }
    if rho.party_dims()[k - 1] != 2 {
        return Err(Error::NotQubit { party: k, dim: rho.party_dims()[k - 1] });
    }
    let blocks = QubitBlocks::new(rho, k)?;
    let purity = rho.purity();
    let ((value, c, phi), round_minima) = grid.minimize(|c, phi| purity - blocks.kept_weight(c, phi))?;
    Ok(OracleResult { value, theta: c.clamp(-1.0, 1.0).acos(), phi, axis: axis(c, phi), round_minima })
}

/// The four blocks `R_ab = (⟨a| ⊗ I) ρ (|b⟩ ⊗ I)` of `ρ` with qubit `k` moved
/// to the front.
struct QubitBlocks {
    side: usize,
    r: [Vec<Complex64>; 4],
}

impl QubitBlocks {
    fn new(rho: &DensityMatrix, k: usize) -> Result<Self> {
        let n = rho.num_parties();
        let mut perm = vec![k];
        perm.extend((1..=n).filter(|&p| p != k));
        let front = rho.permute_parties(&perm)?;
        let m: &ComplexMatrix = front.matrix();
        let side = rho.dim() / 2;
        let r = std::array::from_fn(|ab| {
            let (a, b) = (ab / 2, ab % 2);
            let mut blk = Vec::with_capacity(side * side);
            for i in 0..side {
                for j in 0..side {
                    blk.push(m.get(a * side + i, b * side + j));
                }
            }
            blk
        });
        Ok(Self { side, r })
    }

    /// `tr Π(ρ)² = Σ_{u ∈ {+,−}} ‖⟨u|ρ|u⟩‖²` where `⟨u|ρ|u⟩ = Σ_ab ū_a u_b R_ab`.
    fn kept_weight(&self, c: f64, phi: f64) -> f64 {
        let ch = ((1.0 + c) / 2.0).max(0.0).sqrt();
        let sh = ((1.0 - c) / 2.0).max(0.0).sqrt();
        let ph = Complex64::from_polar(1.0, phi);
        let up = [Complex64::new(ch, 0.0), ph * sh];
        let down = [-ph.conj() * sh, Complex64::new(ch, 0.0)];
        [up, down]
            .iter()
            .map(|u| {
                let w = [u[0].conj() * u[0], u[0].conj() * u[1], u[1].conj() * u[0], u[1].conj() * u[1]];
                let mut acc = 0.0;
                for idx in 0..self.side * self.side {
                    let mut z = ZERO;
                    for (wab, r) in w.iter().zip(&self.r) {
                        z += wab * r[idx];
                    }
                    acc += z.norm_sqr();
                }
                acc
            })
            .sum()
    }
}

/// `max_{‖ê‖=1} ê G êᵗ` over the same zooming grid.
pub fn oracle_quadratic_max(g: &Sym3, grid: &GridSpec) -> Result<f64> {
    let ((neg, _, _), _) = grid.minimize(|c, phi| -g.quad_form(axis(c, phi)))?;
    Ok(-neg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DbarCheck {
    pub closed_form: f64,
    pub oracle: f64,
    /// `oracle − closed_form`; non-negative up to rounding.
    pub gap: f64,
}

/// Compares the closed-form `D_k` with the brute-force minimum over
/// measurements for an N-qubit state.
pub fn verify_equality_dbar(rho: &DensityMatrix, k: usize, grid: &GridSpec) -> Result<DbarCheck> {
    let closed_form = discord_qubit(rho, k)?.value;
    let oracle = oracle_discord_qubit(rho, k, grid)?.value;
    Ok(DbarCheck { closed_form, oracle, gap: oracle - closed_form })
}

/// Largest eigenvalue of `g` and the grid estimate, for reporting.
pub fn quadratic_gap(g: &Sym3, grid: &GridSpec) -> Result<f64> {
    Ok(sym3_top_eigen(g).0 - oracle_quadratic_max(g, grid)?)
}
