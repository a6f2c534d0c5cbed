//! Real symmetric 3×3 matrices and their top eigenpair.

use serde::Serialize;

/// Real symmetric 3×3 matrix; only the upper triangle is stored.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Sym3 {
    /// `[xx, xy, xz, yy, yz, zz]`
    upper: [f64; 6],
}

const SLOT: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

impl Sym3 {
    pub fn from_upper(upper: [f64; 6]) -> Self {
        Self { upper }
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Self { upper: [a, 0.0, 0.0, b, 0.0, c] }
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0, 1.0)
    }

    /// Builds from a full matrix, averaging the two off-diagonal triangles.
    pub fn from_full(m: [[f64; 3]; 3]) -> Self {
        let avg = |i: usize, j: usize| 0.5 * (m[i][j] + m[j][i]);
        Self { upper: [m[0][0], avg(0, 1), avg(0, 2), m[1][1], avg(1, 2), m[2][2]] }
    }

    /// `v vᵗ`
    pub fn outer(v: [f64; 3]) -> Self {
        Self { upper: [v[0] * v[0], v[0] * v[1], v[0] * v[2], v[1] * v[1], v[1] * v[2], v[2] * v[2]] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[SLOT[i][j]]
    }

    pub fn add_assign_entry(&mut self, i: usize, j: usize, v: f64) {
        if i <= j {
            self.upper[SLOT[i][j]] += v;
        }
    }

    pub fn upper(&self) -> [f64; 6] {
        self.upper
    }

    pub fn to_full(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.get(i, j);
            }
        }
        m
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| self.get(i, j) * v[j]).sum();
        }
        out
    }

    /// `vᵗ G v`
    pub fn quad_form(&self, v: [f64; 3]) -> f64 {
        let gv = self.apply(v);
        gv.iter().zip(&v).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { upper: self.upper.map(|x| x * s) }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut upper = self.upper;
        for (u, o) in upper.iter_mut().zip(other.upper) {
            *u += o;
        }
        Self { upper }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.upper.iter().zip(&other.upper).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// All eigenvalues (ascending) with matching unit eigenvectors.
    pub fn eigen(&self) -> ([f64; 3], [[f64; 3]; 3]) {
        let (vals, vecs) = jacobi(self.to_full());
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let sorted_vals = order.map(|i| vals[i]);
        let sorted_vecs = order.map(|i| [vecs[0][i], vecs[1][i], vecs[2][i]]);
        (sorted_vals, sorted_vecs)
    }
}

/// Cyclic Jacobi sweeps until the off-diagonal norm drops below 1e-14
/// relative to the Frobenius norm. Returns eigenvalues and the matrix whose
/// columns are eigenvectors.
fn jacobi(mut a: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-14 * scale.max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off = (2.0 * (a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2))).sqrt();
        if off <= tol {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2]], v)
}

/// Top eigenpair of `g`.
///
/// When the largest eigenvalue is degenerate (eigenvalues within 1e-12), the
/// returned vector is the unit vector of the top eigenspace with the largest
/// absolute first component; if the eigenspace is orthogonal to the x axis,
/// the y axis decides, then z. In every case the first component above 1e-12
/// in magnitude is made positive.
pub fn sym3_top_eigen(g: &Sym3) -> (f64, [f64; 3]) {
    let (vals, vecs) = g.eigen();
    let eta = vals[2];
    let tol = 1e-12 * eta.abs().max(1.0);
    let top: Vec<[f64; 3]> = (0..3).filter(|&i| eta - vals[i] <= tol).map(|i| vecs[i]).collect();
    let e = if top.len() == 1 {
        top[0]
    } else {
        // project each coordinate axis onto the eigenspace; first non-vanishing wins
        let mut chosen = top[0];
        for axis in 0..3 {
            let mut p = [0.0; 3];
            for u in &top {
                for (pi, ui) in p.iter_mut().zip(u) {
                    *pi += u[axis] * ui;
                }
            }
            let n = norm3(p);
            if n > 1e-6 {
                chosen = p.map(|x| x / n);
                break;
            }
        }
        chosen
    };
    (eta, fix_sign(normalize3(e)))
}

fn fix_sign(e: [f64; 3]) -> [f64; 3] {
    match e.iter().find(|x| x.abs() > 1e-12) {
        Some(&x) if x < 0.0 => e.map(|c| -c),
        _ => e,
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = norm3(v);
    v.map(|x| x / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_vec(a: [f64; 3], b: [f64; 3]) {
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal() {
        let (eta, e) = sym3_top_eigen(&Sym3::diag(2.0, 2.0, 3.0));
        assert!((eta - 3.0).abs() < 1e-14);
        assert_vec(e, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn identity_breaks_ties_towards_x() {
        let (eta, e) = sym3_top_eigen(&Sym3::identity());
        assert!((eta - 1.0).abs() < 1e-14);
        assert_vec(e, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn yz_degenerate_plane_picks_y() {
        let (_, e) = sym3_top_eigen(&Sym3::diag(0.5, 2.0, 2.0));
        assert_vec(e, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn swap_block() {
        let g = Sym3::from_full([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let (eta, e) = sym3_top_eigen(&g);
        assert!((eta - 1.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_vec(e, [r, r, 0.0]);
    }

    #[test]
    fn rotated_degenerate_plane_prefers_x_projection() {
        // top eigenspace spanned by (1,1,0)/√2 and z
        let g = Sym3::from_full([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 2.0]]);
        let (eta, e) = sym3_top_eigen(&g);
        assert!((eta - 2.0).abs() < 1e-13);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_vec(e, [r, r, 0.0]);
    }

    #[test]
    fn rayleigh_bound_on_random_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = Sym3::from_upper(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
            let (eta, _) = sym3_top_eigen(&g);
            for _ in 0..1000 {
                let v = normalize3(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
                assert!(g.quad_form(v) <= eta + 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn eigenpair_residual(upper in prop::array::uniform6(-5.0f64..5.0)) {
            let g = Sym3::from_upper(upper);
            let (eta, e) = sym3_top_eigen(&g);
            let ge = g.apply(e);
            for i in 0..3 {
                prop_assert!((ge[i] - eta * e[i]).abs() < 1e-10);
            }
            prop_assert!((norm3(e) - 1.0).abs() < 1e-12);
            let (vals, _) = g.eigen();
            prop_assert!(vals.iter().all(|&v| v <= eta + 1e-12));
        }
    }
}
