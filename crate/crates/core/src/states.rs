//! Named states, the one-parameter families used in the sweeps, and seeded
//! random states.
//!
//! Randomness comes from ChaCha8 seeded with a `u64`; equal seeds give
//! bitwise-equal output on every platform.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::complex::{ComplexMatrix, ZERO};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::measurement::ProjectiveBasis;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateName {
    Ghz(usize),
    GhzMinus(usize),
    W(usize),
    Bell,
    MaxMixed(Vec<usize>),
}

impl FromStr for StateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownState(s.clone());
        if s == "bell" {
            return Ok(Self::Bell);
        }
        let (head, args) = match s.split_once('(') {
            Some((h, rest)) => (h.trim(), rest.strip_suffix(')').ok_or_else(unknown)?),
            None => return Err(unknown()),
        };
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| unknown())?;
        let single = || match nums.as_slice() {
            [n] if *n >= 2 => Ok(*n),
            _ => Err(Error::UnknownState(format!("{s}: need one qubit count of at least 2"))),
        };
        match head {
            "ghz" => Ok(Self::Ghz(single()?)),
            "ghz-minus" => Ok(Self::GhzMinus(single()?)),
            "w" => Ok(Self::W(single()?)),
            "max-mixed" if !nums.is_empty() && !nums.contains(&0) => Ok(Self::MaxMixed(nums)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ghz(n) => write!(f, "ghz({n})"),
            Self::GhzMinus(n) => write!(f, "ghz-minus({n})"),
            Self::W(n) => write!(f, "w({n})"),
            Self::Bell => write!(f, "bell"),
            Self::MaxMixed(d) => {
                let parts: Vec<String> = d.iter().map(usize::to_string).collect();
                write!(f, "max-mixed({})", parts.join(","))
            }
        }
    }
}

fn ket(n: usize, amps: &[(usize, f64)]) -> Result<DensityMatrix> {
    let mut v = vec![ZERO; 1 << n];
    for &(i, a) in amps {
        v[i] = Complex64::new(a, 0.0);
    }
    DensityMatrix::from_pure(vec![2; n], &v)
}

/// Kets use `|0⟩` = +1 eigenvector of `σ_z`; qubit 1 is the most
/// significant bit.
pub fn named_state(name: &StateName) -> Result<DensityMatrix> {
    match name {
        StateName::Ghz(n) => ket(*n, &[(0, 1.0), ((1 << n) - 1, 1.0)]),
        StateName::GhzMinus(n) => ket(*n, &[(0, 1.0), ((1 << n) - 1, -1.0)]),
        StateName::W(n) => {
            let amps: Vec<(usize, f64)> = (0..*n).map(|b| (1 << b, 1.0)).collect();
            ket(*n, &amps)
        }
        StateName::Bell => ket(2, &[(0, 1.0), (3, 1.0)]),
        StateName::MaxMixed(dims) => DensityMatrix::maximally_mixed(dims.clone()),
    }
}

pub fn named_state_str(name: &str) -> Result<DensityMatrix> {
    named_state(&name.parse()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `p |GHZ⟩⟨GHZ| + (1 − p) I/8`
    GhzNoise,
    /// `p |W⟩⟨W| + (1 − p) |GHZ⟩⟨GHZ|`
    WGhz,
    /// `p |GHZ₋⟩⟨GHZ₋| + (1 − p) |GHZ⟩⟨GHZ|`
    GhzGhzMinus,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::GhzNoise, Family::WGhz, Family::GhzGhzMinus];

    pub fn num_qubits(self) -> usize {
        3
    }

    fn endpoints(self) -> Result<(DensityMatrix, DensityMatrix)> {
        let ghz = named_state(&StateName::Ghz(3))?;
        Ok(match self {
            Self::GhzNoise => (ghz, DensityMatrix::maximally_mixed(vec![2, 2, 2])?),
            Self::WGhz => (named_state(&StateName::W(3))?, ghz),
            Self::GhzGhzMinus => (named_state(&StateName::GhzMinus(3))?, ghz),
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ghz-noise" => Ok(Self::GhzNoise),
            "w-ghz" => Ok(Self::WGhz),
            "ghz-ghzminus" => Ok(Self::GhzGhzMinus),
            other => Err(Error::UnknownState(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GhzNoise => "ghz-noise",
            Self::WGhz => "w-ghz",
            Self::GhzGhzMinus => "ghz-ghzminus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub p: f64,
}

impl FamilySpec {
    pub fn new(family: Family, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("family parameter {p} outside [0, 1]")));
        }
        Ok(Self { family, p })
    }
}

/// Convex mixture `p ρ_a + (1 − p) ρ_b` of the family's two endpoints.
pub fn family_state(spec: &FamilySpec) -> Result<DensityMatrix> {
    let spec = FamilySpec::new(spec.family, spec.p)?;
    let (a, b) = spec.family.endpoints()?;
    a.mix(&b, spec.p)
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("shape")
}

/// `M M† / tr(M M†)` with `M` a `D × rank` matrix of standard complex
/// Gaussians.
pub fn random_density(party_dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    let d: usize = party_dims.iter().product();
    if rank == 0 || rank > d {
        return Err(Error::InvalidArgument(format!("rank {rank} for total dimension {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = gaussian_matrix(d, rank, &mut rng);
    let mm = m.matmul(&m.adjoint())?;
    let tr = mm.trace().re;
    DensityMatrix::new_unchecked(party_dims.to_vec(), mm.scale(Complex64::new(1.0 / tr, 0.0)))
}

/// Haar-random unitary columns via Gram–Schmidt on a Gaussian matrix.
pub fn random_basis(party: usize, d: usize, seed: u64) -> Result<ProjectiveBasis> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(d, d, &mut rng);
    let mut kets: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for col in 0..d {
        let mut v: Vec<Complex64> = (0..d).map(|r| g.get(r, col)).collect();
        // two passes keep the result orthonormal to machine precision
        for _ in 0..2 {
            for k in &kets {
                let ip: Complex64 = k.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ki) in v.iter_mut().zip(k) {
                    *vi -= ip * ki;
                }
            }
        }
        let n = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        kets.push(v.into_iter().map(|z| z / n).collect());
    }
    ProjectiveBasis::new(party, kets)
}

/// Random single-party unitary (columns of [`random_basis`]).
pub fn random_unitary(d: usize, seed: u64) -> Result<ComplexMatrix> {
    let b = random_basis(1, d, seed)?;
    let mut u = ComplexMatrix::zeros(d, d);
    for (c, k) in b.kets().iter().enumerate() {
        for (r, z) in k.iter().enumerate() {
            u.set(r, c, *z);
        }
    }
    Ok(u)
}

/// Random probability vector of length `n` (normalized exponentials).
pub fn random_distribution(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|_| rand_distr::Exp1.sample(&mut rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}
