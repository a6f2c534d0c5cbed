//! Geometric discord `D_k`.
//!
//! Every route evaluates `‖C‖² − ‖C ×_k A‖²` for some measurement isometry
//! `A`. For qubits the best `A` comes from the top eigenvector of `G^(k)`;
//! for larger parties [`discord_generic_upper_bound`] searches over bases.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{BlochDecomposition, CoefficientTensor, HermitianBasis};
use crate::complex::{kron_all, pauli, ComplexMatrix, ONE, ZERO};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::sym3::{norm3, sym3_top_eigen, Sym3};
use crate::tensor::{n_mode_product, RealMatrix};

pub const ISOMETRY_TOL: f64 = 1e-10;
/// Rounding noise below zero that is clamped away.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Measurement isometry: a real `d × d²` matrix whose row `l` holds the
/// expansion coefficients of the projector `|l⟩⟨l|` in the standard basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Isometry {
    dim: usize,
    matrix: RealMatrix,
}

impl Isometry {
    /// Checks `A Aᵗ = I`, `a_{l1} = 1/√d` and that each column sums to the
    /// trace of the matching basis element.
    pub fn new(matrix: RealMatrix) -> Result<Self> {
        let d = matrix.rows();
        if matrix.cols() != d * d {
            return Err(Error::InvalidIsometry(format!("shape {}x{} is not d x d²", d, matrix.cols())));
        }
        let gram = matrix.matmul(&matrix.transpose())?;
        let dev = gram.max_abs_diff(&RealMatrix::identity(d));
        if dev > ISOMETRY_TOL {
            return Err(Error::InvalidIsometry(format!("A Aᵗ deviates from I by {dev:e}")));
        }
        let lead = 1.0 / (d as f64).sqrt();
        for l in 0..d {
            if (matrix.get(l, 0) - lead).abs() > ISOMETRY_TOL {
                return Err(Error::InvalidIsometry(format!("row {l} has leading entry {}", matrix.get(l, 0))));
            }
        }
        for i in 0..d * d {
            let sum: f64 = (0..d).map(|l| matrix.get(l, i)).sum();
            let trace = if i == 0 { (d as f64).sqrt() } else { 0.0 };
            if (sum - trace).abs() > ISOMETRY_TOL {
                return Err(Error::InvalidIsometry(format!("column {i} sums to {sum}, expected {trace}")));
            }
        }
        Ok(Self { dim: d, matrix })
    }

    /// Isometry of the orthonormal basis `kets` of `C^d`.
    pub fn from_kets(kets: &[Vec<Complex64>], basis: &HermitianBasis) -> Result<Self> {
        let rows: Vec<Vec<f64>> = kets.iter().map(|k| basis.projector_coefficients(k)).collect();
        Self::new(RealMatrix::from_rows(&rows)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    /// `Aᵗ A`, the orthogonal projector onto the span of the rows.
    pub fn projector(&self) -> RealMatrix {
        self.matrix.transpose().matmul(&self.matrix).expect("square product")
    }
}

/// Closed-form discord for measurements on one qubit, with its witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscordReport {
    pub party: usize,
    pub value: f64,
    pub g: Sym3,
    pub eta_max: f64,
    pub e_max: [f64; 3],
    pub a_tilde: Isometry,
    pub norm_c_sq: f64,
}

fn check_party(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParty(format!("party {k} of {n}")));
    }
    Ok(())
}

fn clamp(value: f64) -> f64 {
    if (-NEGATIVE_CLAMP..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}

/// `G^(k) = s sᵗ + Σ_{S ∋ k} M_S`, where `M_S` contracts every index of
/// `T^S` except the one belonging to party `k`. For `|S| = 2` this is the
/// `Tᵗ T` term; larger subsets give the higher-order terms.
pub fn build_g_matrix(dec: &BlochDecomposition, k: usize) -> Result<Sym3> {
    check_party(k, dec.num_qubits())?;
    let mut g = Sym3::outer(dec.coherent(k));
    for (set, t) in dec.correlations() {
        let Some(pos) = set.position(k) else { continue };
        let u = t.unfold(pos + 1)?;
        for a in 0..3 {
            for b in a..3 {
                let dot: f64 = u.row(a).iter().zip(u.row(b)).map(|(x, y)| x * y).sum();
                g.add_assign_entry(a, b, dot);
            }
        }
    }
    Ok(g)
}

/// `‖s^(k)‖² + Σ_{S ∋ k} ‖T^S‖²`
fn weight_on_party(dec: &BlochDecomposition, k: usize) -> f64 {
    let s = dec.coherent(k);
    s.iter().map(|x| x * x).sum::<f64>()
        + dec
            .correlations()
            .filter(|(set, _)| set.contains(k))
            .map(|(_, t)| t.frobenius_norm_sq())
            .sum::<f64>()
}

/// Closed-form `D_k` for an N-qubit state given by its Bloch data:
/// `2^{-N}(‖s^(k)‖² + Σ_{S∋k} ‖T^S‖² − η_max)`.
pub fn discord_qubit_closed_form(dec: &BlochDecomposition, k: usize) -> Result<DiscordReport> {
    let g = build_g_matrix(dec, k)?;
    let (eta_max, e_max) = sym3_top_eigen(&g);
    let scale = 2f64.powi(-(dec.num_qubits() as i32));
    let value = clamp(scale * (weight_on_party(dec, k) - eta_max));
    Ok(DiscordReport {
        party: k,
        value,
        g,
        eta_max,
        e_max,
        a_tilde: optimal_isometry(e_max)?,
        norm_c_sq: scale * dec.total_norm_sq(),
    })
}

/// Convenience wrapper: Bloch-decompose `rho`, then apply the closed form.
pub fn discord_qubit(rho: &DensityMatrix, k: usize) -> Result<DiscordReport> {
    discord_qubit_closed_form(&crate::bloch::bloch_decompose(rho)?, k)
}

/// Qubit isometry with rows `(1, ê)/√2` and `(1, −ê)/√2`.
pub fn optimal_isometry(e: [f64; 3]) -> Result<Isometry> {
    let n = norm3(e);
    if (n - 1.0).abs() > ISOMETRY_TOL {
        return Err(Error::InvalidIsometry(format!("axis has norm {n}, expected 1")));
    }
    let r = FRAC_1_SQRT_2;
    let data = vec![r, r * e[0], r * e[1], r * e[2], r, -r * e[0], -r * e[1], -r * e[2]];
    Ok(Isometry { dim: 2, matrix: RealMatrix::new(2, 4, data)? })
}

/// `‖C‖² − ‖C ×_k A‖²`: the distance from the state to the classical-quantum
/// state induced by `a`. Upper-bounds `D_k` for every valid `a`.
pub fn discord_from_isometry(c: &CoefficientTensor, a: &Isometry, k: usize) -> Result<f64> {
    check_party(k, c.num_parties())?;
    let dk = c.party_dims()[k - 1];
    if a.dim != dk {
        return Err(Error::dims(format!("isometry for dimension {} applied to party of dimension {dk}", a.dim)));
    }
    let projected = n_mode_product(c.tensor(), &a.matrix, k)?;
    Ok(clamp(c.norm_sq() - projected.frobenius_norm_sq()))
}

/// Two-qubit discord from coherent vectors `x`, `y` and correlation matrix
/// `T`, computed straight from Pauli traces of `rho`.
pub fn discord_two_qubit_dakic(rho: &DensityMatrix, k: usize) -> Result<f64> {
    if rho.party_dims() != [2, 2] {
        return Err(Error::dims(format!("two qubits required, got party dims {:?}", rho.party_dims())));
    }
    check_party(k, 2)?;
    let (x, y, t) = two_qubit_bloch(rho.matrix());
    let (local, tt) = if k == 1 { (x, t) } else { (y, transpose3(t)) };
    // G = local localᵗ + T Tᵗ (T → Tᵗ for the second party)
    let mut full = [[0.0; 3]; 3];
    for (a, row) in full.iter_mut().enumerate() {
        for (b, g) in row.iter_mut().enumerate() {
            *g = local[a] * local[b] + (0..3).map(|c| tt[a][c] * tt[b][c]).sum::<f64>();
        }
    }
    let lambda = sym3_top_eigen(&Sym3::from_full(full)).0;
    let norm_local: f64 = local.iter().map(|v| v * v).sum();
    let norm_t: f64 = t.iter().flatten().map(|v| v * v).sum();
    Ok(clamp(0.25 * (norm_local + norm_t - lambda)))
}

pub(crate) fn two_qubit_bloch(rho: &ComplexMatrix) -> ([f64; 3], [f64; 3], [[f64; 3]; 3]) {
    let p = pauli();
    let id = ComplexMatrix::identity(2);
    let ev = |op: ComplexMatrix| rho.matmul(&op).expect("4x4").trace().re;
    let x = std::array::from_fn(|a| ev(kron_all([&p[a], &id])));
    let y = std::array::from_fn(|a| ev(kron_all([&id, &p[a]])));
    let t = std::array::from_fn(|a| std::array::from_fn(|b| ev(kron_all([&p[a], &p[b]]))));
    (x, y, t)
}

fn transpose3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
}

/// Best value found by [`discord_generic_upper_bound`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericDiscord {
    /// Upper bound on `D_k`; not certified optimal.
    pub value: f64,
    pub isometry: Isometry,
    pub restarts: usize,
}

const SCAN_POINTS: usize = 16;
const MIN_SWEEPS: usize = 3;
const MAX_SWEEPS: usize = 500;
const SWEEP_TOL: f64 = 1e-9;

/// Numerical search over orthonormal bases of party `k` for any party
/// dimension. The basis is `U|j⟩` with `U` a product of `d(d−1)/2` two-level
/// rotations (angle and phase each); the angles are optimized by multi-start
/// coordinate ascent with a coarse scan and golden-section line search.
/// Restart `i` draws its start from the stream `(seed, i)`.
pub fn discord_generic_upper_bound(
    c: &CoefficientTensor,
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<GenericDiscord> {
    check_party(k, c.num_parties())?;
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let d = c.party_dims()[k - 1];
    let basis = HermitianBasis::standard(d);
    // ‖C ×_k A‖² = tr(A W Aᵗ) with W = C_(k) C_(k)ᵗ
    let unfolded = c.tensor().unfold(k)?;
    let gram = unfolded.matmul(&unfolded.transpose())?;
    let problem = BasisSearch { dim: d, basis: &basis, gram: &gram };
    let n_params = d * (d - 1);

    let (best_val, best_params) = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let start: Vec<f64> = (0..n_params)
                .map(|i| rng.random_range(0.0..problem.period(i)))
                .collect();
            problem.ascend(start)
        })
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .expect("restarts > 0");
    let _ = best_val;
    let isometry = Isometry::new(problem.isometry_rows(&best_params))?;
    let projected = n_mode_product(c.tensor(), isometry.matrix(), k)?;
    Ok(GenericDiscord { value: clamp(c.norm_sq() - projected.frobenius_norm_sq()), isometry, restarts })
}

struct BasisSearch<'a> {
    dim: usize,
    basis: &'a HermitianBasis,
    gram: &'a RealMatrix,
}

impl BasisSearch<'_> {
    fn period(&self, i: usize) -> f64 {
        if i.is_multiple_of(2) {
            PI
        } else {
            2.0 * PI
        }
    }

    fn kets(&self, params: &[f64]) -> Vec<Vec<Complex64>> {
        let d = self.dim;
        let mut u = ComplexMatrix::identity(d);
        let mut p = params.chunks_exact(2);
        for j in 0..d {
            for l in j + 1..d {
                let pair = p.next().expect("parameter count");
                let (s, c) = pair[0].sin_cos();
                let phase = Complex64::from_polar(1.0, pair[1]);
                let mut giv = ComplexMatrix::identity(d);
                giv.set(j, j, Complex64::new(c, 0.0));
                giv.set(l, l, Complex64::new(c, 0.0));
                giv.set(j, l, -phase.conj() * s);
                giv.set(l, j, phase * s);
                u = u.matmul(&giv).expect("square");
            }
        }
        (0..d).map(|col| (0..d).map(|row| u.get(row, col)).collect()).collect()
    }

    fn isometry_rows(&self, params: &[f64]) -> RealMatrix {
        let rows: Vec<Vec<f64>> = self.kets(params).iter().map(|k| self.basis.projector_coefficients(k)).collect();
        RealMatrix::from_rows(&rows).expect("rectangular")
    }

    fn objective(&self, params: &[f64]) -> f64 {
        let a = self.isometry_rows(params);
        (0..a.rows())
            .map(|l| {
                let row = a.row(l);
                let wa: Vec<f64> = (0..row.len())
                    .map(|i| self.gram.row(i).iter().zip(row).map(|(w, x)| w * x).sum())
                    .collect();
                row.iter().zip(&wa).map(|(x, y)| x * y).sum::<f64>()
            })
            .sum()
    }

    fn ascend(&self, mut params: Vec<f64>) -> (f64, Vec<f64>) {
        let mut best = self.objective(&params);
        if params.is_empty() {
            return (best, params);
        }
        for sweep in 0..MAX_SWEEPS {
            let before = best;
            for i in 0..params.len() {
                let (v, x) = self.line_search(&mut params, i);
                if v > best {
                    best = v;
                    params[i] = x;
                }
            }
            if sweep + 1 >= MIN_SWEEPS && best - before < SWEEP_TOL {
                break;
            }
        }
        (best, params)
    }

    /// Coarse scan over one period of coordinate `i`, then golden-section
    /// refinement around the best scan point. Leaves `params[i]` unchanged.
    fn line_search(&self, params: &mut [f64], i: usize) -> (f64, f64) {
        let origin = params[i];
        let step = self.period(i) / SCAN_POINTS as f64;
        let mut eval = |x: f64| {
            params[i] = x;
            self.objective(params)
        };
        let (mut bx, mut bv) = (origin, f64::NEG_INFINITY);
        for s in 0..SCAN_POINTS {
            let x = origin + s as f64 * step;
            let v = eval(x);
            if v > bv {
                bv = v;
                bx = x;
            }
        }
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (bx - step, bx + step);
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut f1 = eval(x1);
        let mut f2 = eval(x2);
        while hi - lo > 1e-10 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = eval(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = eval(x1);
            }
        }
        let (gx, gv) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
        params[i] = origin;
        if gv > bv {
            (gv, gx)
        } else {
            (bv, bx)
        }
    }
}

/// Computational-basis kets of `C^d`.
pub fn computational_kets(d: usize) -> Vec<Vec<Complex64>> {
    (0..d)
        .map(|j| (0..d).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{bloch_decompose, standard_coefficient_tensor};

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

    fn classical_pair() -> DensityMatrix {
        bell_like_mixture()
    }

    fn bell_like_mixture() -> DensityMatrix {
        let a = pure(vec![2, 2], &[(0, 1.0)]);
        let b = pure(vec![2, 2], &[(3, 1.0)]);
        a.mix(&b, 0.5).unwrap()
    }

    #[test]
    fn g_matrix_examples() {
        // GHZ: s = 0, two pairs diag(0,0,1), triple term diag(2,2,0)
        let g = build_g_matrix(&bloch_decompose(&ghz()).unwrap(), 1).unwrap();
        assert!(g.max_abs_diff(&Sym3::diag(2.0, 2.0, 2.0)) < 1e-14);
        let g = build_g_matrix(&bloch_decompose(&w()).unwrap(), 1).unwrap();
        assert!(g.max_abs_diff(&Sym3::diag(16.0 / 9.0, 16.0 / 9.0, 20.0 / 9.0)) < 1e-14);
        let g = build_g_matrix(&BlochDecomposition::zero(3), 2).unwrap();
        assert_eq!(g, Sym3::default());
        assert!(build_g_matrix(&BlochDecomposition::zero(3), 4).is_err());
    }

    #[test]
    fn pure_state_values() {
        for k in 1..=3 {
            let r = discord_qubit(&ghz(), k).unwrap();
            assert!((r.value - 0.5).abs() < 1e-14);
            let r = discord_qubit(&w(), k).unwrap();
            assert!((r.value - 4.0 / 9.0).abs() < 1e-14);
        }
        let prod = pure(vec![2, 2, 2], &[(0, 0.6), (4, 0.8)]);
        for k in 1..=3 {
            assert!(discord_qubit(&prod, k).unwrap().value.abs() < 1e-14);
        }
    }

    #[test]
    fn report_is_self_consistent() {
        let rho = w();
        let c = standard_coefficient_tensor(&rho).unwrap();
        for k in 1..=3 {
            let r = discord_qubit(&rho, k).unwrap();
            let via_a = discord_from_isometry(&c, &r.a_tilde, k).unwrap();
            assert!((via_a - r.value).abs() < 1e-12);
            assert!((r.norm_c_sq - c.norm_sq()).abs() < 1e-12);
            assert!(r.value <= r.norm_c_sq - 0.125 + 1e-12);
        }
    }

    #[test]
    fn optimal_isometry_rows() {
        let a = optimal_isometry([0.0, 0.0, 1.0]).unwrap();
        let r = FRAC_1_SQRT_2;
        assert_eq!(a.matrix().data(), &[r, 0.0, 0.0, r, r, 0.0, 0.0, -r]);
        let x = optimal_isometry([1.0, 0.0, 0.0]).unwrap();
        let plus = vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)];
        let minus = vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0)];
        let from_kets = Isometry::from_kets(&[plus, minus], &HermitianBasis::qubit()).unwrap();
        assert!(x.matrix().max_abs_diff(from_kets.matrix()) < 1e-15);
        assert!(optimal_isometry([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn isometry_projectors_are_rank_one_and_complete() {
        let q = HermitianBasis::qubit();
        for e in [[0.6, 0.0, 0.8], [0.48, 0.6, 0.64], [-1.0, 0.0, 0.0]] {
            let a = optimal_isometry(e).unwrap();
            let p0 = q.combine(a.matrix().row(0));
            let p1 = q.combine(a.matrix().row(1));
            assert!(p0.matmul(&p0).unwrap().max_abs_diff(&p0) < 1e-15);
            assert!(p0.matmul(&p1).unwrap().hs_norm_sq() < 1e-30);
            assert!(p0.add(&p1).unwrap().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
            assert!((p0.trace().re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn isometry_validation() {
        let bad = RealMatrix::new(2, 4, vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(Isometry::new(bad), Err(Error::InvalidIsometry(_))));
        let wrong_shape = RealMatrix::identity(2);
        assert!(Isometry::new(wrong_shape).is_err());
    }

    #[test]
    fn evaluator_examples() {
        let c = standard_coefficient_tensor(&bell()).unwrap();
        let z = optimal_isometry([0.0, 0.0, 1.0]).unwrap();
        assert!((discord_from_isometry(&c, &z, 1).unwrap() - 0.5).abs() < 1e-15);

        let mixed = standard_coefficient_tensor(&DensityMatrix::maximally_mixed(vec![2, 2]).unwrap()).unwrap();
        let a = optimal_isometry([0.48, 0.6, 0.64]).unwrap();
        assert!(discord_from_isometry(&mixed, &a, 2).unwrap().abs() < 1e-15);

        // every axis is optimal for GHZ since G = 2I
        let c = standard_coefficient_tensor(&ghz()).unwrap();
        let x = optimal_isometry([1.0, 0.0, 0.0]).unwrap();
        assert!((discord_from_isometry(&c, &x, 1).unwrap() - 0.5).abs() < 1e-15);

        // a suboptimal axis for W gives a strictly larger value: ⅛(52/9 − 16/9)
        let c = standard_coefficient_tensor(&w()).unwrap();
        assert!((discord_from_isometry(&c, &x, 1).unwrap() - 0.5).abs() < 1e-14);

        let qutrit = standard_coefficient_tensor(&DensityMatrix::maximally_mixed(vec![3, 2]).unwrap()).unwrap();
        assert!(discord_from_isometry(&qutrit, &z, 1).is_err());
    }

    #[test]
    fn dakic_examples() {
        for k in 1..=2 {
            assert!((discord_two_qubit_dakic(&bell(), k).unwrap() - 0.5).abs() < 1e-15);
            assert!(discord_two_qubit_dakic(&classical_pair(), k).unwrap().abs() < 1e-15);
            let prod = pure(vec![2, 2], &[(0, 0.6), (1, 0.8)]);
            assert!(discord_two_qubit_dakic(&prod, k).unwrap().abs() < 1e-15);
        }
        assert!(discord_two_qubit_dakic(&ghz(), 1).is_err());
        assert!(discord_two_qubit_dakic(&bell(), 3).is_err());
    }

    #[test]
    fn generic_search_matches_qubit_closed_form() {
        for rho in [bell(), w(), ghz()] {
            let c = standard_coefficient_tensor(&rho).unwrap();
            for k in 1..=rho.num_parties() {
                let closed = discord_qubit(&rho, k).unwrap().value;
                let found = discord_generic_upper_bound(&c, k, 8, 11).unwrap();
                assert!((found.value - closed).abs() < 1e-6, "k={k}: {} vs {closed}", found.value);
            }
        }
    }

    #[test]
    fn generic_search_on_qutrits() {
        let mixed = DensityMatrix::maximally_mixed(vec![3, 2]).unwrap();
        let c = standard_coefficient_tensor(&mixed).unwrap();
        assert!(discord_generic_upper_bound(&c, 1, 4, 0).unwrap().value.abs() < 1e-12);

        // Σ_l p_l |l⟩⟨l| ⊗ ρ_l on a qutrit ⊗ qubit, computational basis
        let rhos = [
            pure(vec![2], &[(0, 1.0)]),
            pure(vec![2], &[(0, 0.6), (1, 0.8)]),
            DensityMatrix::maximally_mixed(vec![2]).unwrap(),
        ];
        let probs = [0.5, 0.3, 0.2];
        let mut m = ComplexMatrix::zeros(6, 6);
        for (l, (p, r)) in probs.iter().zip(&rhos).enumerate() {
            let proj = ComplexMatrix::outer(&computational_kets(3)[l], &computational_kets(3)[l]);
            m = m.add(&proj.kron(r.matrix()).scale(Complex64::new(*p, 0.0))).unwrap();
        }
        let cq = DensityMatrix::new(vec![3, 2], m).unwrap();
        let c = standard_coefficient_tensor(&cq).unwrap();
        let found = discord_generic_upper_bound(&c, 1, 16, 3).unwrap();
        assert!(found.value <= 1e-6, "{}", found.value);
        // the computational basis itself is an admissible isometry
        let comp = Isometry::from_kets(&computational_kets(3), &HermitianBasis::standard(3)).unwrap();
        assert!(discord_from_isometry(&c, &comp, 1).unwrap() < 1e-14);
    }

    #[test]
    fn generic_search_is_deterministic() {
        let c = standard_coefficient_tensor(&w()).unwrap();
        let a = discord_generic_upper_bound(&c, 2, 4, 99).unwrap();
        let b = discord_generic_upper_bound(&c, 2, 4, 99).unwrap();
        assert_eq!(a, b);
        assert!(discord_generic_upper_bound(&c, 2, 0, 99).is_err());
    }
}
