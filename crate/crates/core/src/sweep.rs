//! Parameter sweeps over the three-qubit families and detection of the
//! points where the top eigenvector of `G^(k)` jumps between branches.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::bloch_decompose;
use crate::discord::{build_g_matrix, discord_qubit_closed_form};
use crate::error::{Error, Result};
use crate::states::{family_state, Family, FamilySpec};
use crate::sym3::{sym3_top_eigen, Sym3};
use crate::total::total_quantum_correlations;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    /// `D_k` for each reported party, in the order of [`Sweep::parties`].
    pub discords: Vec<f64>,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub family: Family,
    pub parties: Vec<usize>,
    pub rows: Vec<SweepRow>,
}

/// `steps` equally spaced points from `from` to `to`, both included.
pub fn uniform_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from >= to {
        return Err(Error::InvalidArgument(format!("invalid range {from}..{to}; need 0 <= from < to <= 1")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { to } else { from + (to - from) * i as f64 / last })
        .collect())
}

/// One row per grid point with `D_k` for each party in `parties` (all when
/// `None`) and `Q` for the default measurement order.
pub fn sweep_family(family: Family, from: f64, to: f64, steps: usize, parties: Option<&[usize]>) -> Result<Sweep> {
    let n = family.num_qubits();
    let parties: Vec<usize> = parties.map_or_else(|| (1..=n).collect(), <[usize]>::to_vec);
    if parties.is_empty() || parties.iter().any(|&k| k == 0 || k > n) {
        return Err(Error::InvalidParty(format!("{parties:?} for a {n}-qubit family")));
    }
    let rows = uniform_grid(from, to, steps)?
        .into_par_iter()
        .map(|p| {
            let dec = bloch_decompose(&family_state(&FamilySpec::new(family, p)?)?)?;
            let discords = parties
                .iter()
                .map(|&k| discord_qubit_closed_form(&dec, k).map(|r| r.value))
                .collect::<Result<Vec<f64>>>()?;
            let q = total_quantum_correlations(&dec, None)?.q_value;
            Ok(SweepRow { p, discords, q })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { family, parties, rows })
}

/// `%.{digits}g`-style formatting.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}

impl Sweep {
    /// CSV with columns `p`, `d<k>` per reported party, `q`; 12 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p");
        for k in &self.parties {
            let _ = write!(out, ",d{k}");
        }
        out.push_str(",q\n");
        for row in &self.rows {
            out.push_str(&format_significant(row.p, 12));
            for d in &row.discords {
                out.push(',');
                out.push_str(&format_significant(*d, 12));
            }
            let _ = writeln!(out, ",{}", format_significant(row.q, 12));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchCrossing {
    /// Parameter where the left branch stops being the top eigenvalue.
    pub p: f64,
    pub left_axis: [f64; 3],
    pub right_axis: [f64; 3],
}

fn g_at(family: Family, p: f64, k: usize) -> Result<Sym3> {
    build_g_matrix(&bloch_decompose(&family_state(&FamilySpec::new(family, p)?)?)?, k)
}

/// Scans the grid for neighbouring points whose top eigenvectors of `G^(k)`
/// are far from parallel, then bisects each such interval for the point
/// where `η_max − e_Lᵗ G e_L` (with `e_L` the left top eigenvector) leaves
/// zero.
pub fn detect_branch_crossings(family: Family, from: f64, to: f64, steps: usize, k: usize) -> Result<Vec<BranchCrossing>> {
    const PARALLEL: f64 = 0.9;
    let grid = uniform_grid(from, to, steps)?;
    let tops: Vec<(f64, [f64; 3])> = grid
        .iter()
        .map(|&p| g_at(family, p, k).map(|g| sym3_top_eigen(&g)))
        .collect::<Result<_>>()?;
    let mut crossings = Vec::new();
    for i in 0..grid.len() - 1 {
        let (el, er) = (tops[i].1, tops[i + 1].1);
        let dot: f64 = el.iter().zip(&er).map(|(a, b)| a * b).sum();
        if dot.abs() >= PARALLEL {
            continue;
        }
        let off_branch = |p: f64| -> Result<bool> {
            let g = g_at(family, p, k)?;
            let eta = sym3_top_eigen(&g).0;
            Ok(eta - g.quad_form(el) > 1e-12 * eta.abs().max(1.0))
        };
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if off_branch(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        crossings.push(BranchCrossing { p: 0.5 * (lo + hi), left_axis: el, right_axis: er });
    }
    Ok(crossings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::named_state_str;

    #[test]
    fn grid_checks() {
        let g = uniform_grid(0.0, 1.0, 11).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[10], 1.0);
        assert!((g[3] - 0.3).abs() < 1e-16);
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
        assert!(uniform_grid(0.5, 0.5, 3).is_err());
        assert!(uniform_grid(-0.1, 1.0, 3).is_err());
    }

    #[test]
    fn ghz_noise_column() {
        let s = sweep_family(Family::GhzNoise, 0.0, 1.0, 11, Some(&[1])).unwrap();
        for row in &s.rows {
            assert!((row.discords[0] - row.p * row.p / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn endpoints_match_named_states() {
        let s = sweep_family(Family::WGhz, 0.0, 1.0, 3, None).unwrap();
        let ghz = discord_qubit_closed_form(&bloch_decompose(&named_state_str("ghz(3)").unwrap()).unwrap(), 1).unwrap();
        let w = discord_qubit_closed_form(&bloch_decompose(&named_state_str("w(3)").unwrap()).unwrap(), 1).unwrap();
        assert_eq!(s.rows[0].discords[0], ghz.value);
        assert_eq!(s.rows[2].discords[0], w.value);
    }

    #[test]
    fn csv_layout() {
        let s = sweep_family(Family::GhzGhzMinus, 0.0, 1.0, 3, Some(&[1, 3])).unwrap();
        let csv = s.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "p,d1,d3,q");
        assert_eq!(lines[1], "0,0.5,0.5,0.75");
        assert_eq!(lines[2], "0.5,0,0,0");
        assert!(sweep_family(Family::WGhz, 0.0, 1.0, 3, Some(&[4])).is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.1 + 0.2, 12), "0.3");
        assert_eq!(format_significant(4.0 / 9.0, 12), "0.444444444444");
        assert_eq!(format_significant(-1.25e-9, 12), "-1.25e-9");
        assert_eq!(format_significant(123456.0, 12), "123456");
        assert_eq!(format_significant(0.0, 12), "0");
    }

    #[test]
    fn w_ghz_has_one_crossing() {
        let c = detect_branch_crossings(Family::WGhz, 0.0, 1.0, 201, 1).unwrap();
        assert_eq!(c.len(), 1, "{c:?}");
        assert!((c[0].p - 0.75).abs() < 1e-9, "{}", c[0].p);
        assert!(detect_branch_crossings(Family::GhzNoise, 0.0, 1.0, 51, 1).unwrap().is_empty());
    }
}
