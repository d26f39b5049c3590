//! Generalized Rademacher functions, Vilenkin characters, and Dirichlet
//! kernels on the truncated group.
//!
//! The k-th Rademacher function is r_k(x) = exp(2πi·x_k/m_k); the characters
//! are the finite products ψ_n = Π_k r_k^{n_k} indexed through the
//! mixed-radix expansion of n. They form a complete orthonormal system for
//! the normalized counting measure. The Dirichlet kernel D_n = Σ_{k<n} ψ_k
//! has two structural forms this module exposes besides the brute-force sum:
//!
//! * at the scales, D_{M_n}(x) = M_n when x ∈ I_n(0) and 0 otherwise;
//! * in general, D_n(x) = ψ_n(x) Σ_j D_{M_j}(x) Σ_{u=m_j−n_j}^{m_j−1} r_j^u(x),
//!   where the j-th inner sum is empty whenever n_j = 0.
//!
//! Both are checked against the brute-force sum in the tests. On the shell
//! I_l(0) \ I_{l+1}(0) the closed form also yields the growth bound
//! |D_n| ≤ Σ_{j≤l} n_j·M_j ≤ M_{l+1}, which the Hardy-space estimates lean
//! on; `dirichlet_shell_bound_check` verifies it exhaustively.
//!
//! All roots of unity are read from per-radix tables exp(2πi·u/m_k), u < m_k,
//! indexed by (exponent mod m_k), so repeated powers stay bit-stable instead
//! of drifting through accumulated multiplication.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::group::{GroupSpec, Point};

/// The m-th roots of unity exp(2πi·u/m) for u < m.
pub fn roots_of_unity(m: u32) -> Vec<Complex64> {
    (0..m)
        .map(|u| Complex64::from_polar(1.0, TAU * f64::from(u) / f64::from(m)))
        .collect()
}

/// Character evaluator for one group: its scale data plus per-radix root
/// tables, so every value is an exact table entry exp(2πi·u/m_k).
#[derive(Debug, Clone)]
pub struct Characters {
    spec: GroupSpec,
    roots: Vec<Vec<Complex64>>,
}

impl Characters {
    pub fn new(spec: &GroupSpec) -> Self {
        let roots = spec.radices().iter().map(|&m| roots_of_unity(m)).collect();
        Characters {
            spec: spec.clone(),
            roots,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// exp(2πi·u/m_k) with the exponent reduced mod m_k.
    fn root(&self, k: usize, exponent: u64) -> Complex64 {
        let table = &self.roots[k];
        table[(exponent % table.len() as u64) as usize]
    }

    /// r_k(x) = exp(2πi·x_k/m_k).
    pub fn rademacher(&self, k: usize, x: &Point) -> Complex64 {
        assert!(k < self.spec.depth(), "coordinate {k} out of range");
        self.root(k, u64::from(x.digit(k)))
    }

    /// ψ_n(x) = Π_k r_k(x)^{n_k}.
    ///
    /// Panics if n ≥ M_N or x is not a point of the group.
    pub fn vilenkin(&self, n: u64, x: &Point) -> Complex64 {
        assert!(
            self.spec.contains_point(x),
            "point does not belong to the group"
        );
        self.vilenkin_at_rank(n, self.spec.rank(x))
    }

    /// ψ_n evaluated at the point of rank `x_rank`, peeling both mixed-radix
    /// expansions on the fly.
    pub fn vilenkin_at_rank(&self, n: u64, x_rank: u64) -> Complex64 {
        let points = self.spec.points();
        assert!(n < points, "character index {n} out of range");
        assert!(x_rank < points, "point rank {x_rank} out of range");
        let mut value = Complex64::new(1.0, 0.0);
        let mut nrest = n;
        let mut xrest = x_rank;
        for k in 0..self.spec.depth() {
            if nrest == 0 && xrest == 0 {
                break;
            }
            let m = u64::from(self.spec.radix(k));
            let nk = nrest % m;
            let xk = xrest % m;
            nrest /= m;
            xrest /= m;
            if nk != 0 && xk != 0 {
                value *= self.root(k, nk * xk);
            }
        }
        value
    }

    /// Writes ψ_n over the whole grid (indexed by rank) into `out`.
    ///
    /// Works axis by axis: the stripe of points with digit x_k = u picks up
    /// the factor exp(2πi·n_k·u/m_k), so only coordinates with n_k ≠ 0 cost
    /// a pass.
    pub fn character_grid(&self, n: u64, out: &mut [Complex64]) {
        let points = self.spec.points();
        assert!(n < points, "character index {n} out of range");
        assert_eq!(out.len() as u64, points, "output buffer has wrong length");
        out.fill(Complex64::new(1.0, 0.0));
        let mut nrest = n;
        for k in 0..self.spec.depth() {
            let m = u64::from(self.spec.radix(k));
            let nk = nrest % m;
            nrest /= m;
            if nk == 0 {
                continue;
            }
            let stride = self.spec.scale(k) as usize;
            let block = self.spec.scale(k + 1) as usize;
            for chunk in out.chunks_mut(block) {
                for u in 1..m {
                    let factor = self.root(k, nk * u);
                    let start = (u as usize) * stride;
                    for v in &mut chunk[start..start + stride] {
                        *v *= factor;
                    }
                }
            }
            if nrest == 0 {
                break;
            }
        }
    }

    /// Brute-force Dirichlet kernel D_n(x) = Σ_{k<n} ψ_k(x), for 1 ≤ n ≤ M_N.
    pub fn dirichlet_naive(&self, n: u64, x: &Point) -> Complex64 {
        assert!(
            n >= 1 && n <= self.spec.points(),
            "kernel index {n} out of range"
        );
        let x_rank = self.spec.rank(x);
        (0..n).map(|k| self.vilenkin_at_rank(k, x_rank)).sum()
    }

    /// Scale kernel D_{M_j}(x) = M_j·1[x ∈ I_j(0)], evaluated directly from
    /// the digit prefix.
    pub fn dirichlet_block(&self, scale_index: usize, x: &Point) -> f64 {
        assert!(
            scale_index <= self.spec.depth(),
            "scale index {scale_index} out of range"
        );
        if x.digits()[..scale_index].iter().all(|&d| d == 0) {
            self.spec.scale(scale_index) as f64
        } else {
            0.0
        }
    }

    /// Closed-form Dirichlet kernel
    /// D_n(x) = ψ_n(x) Σ_j D_{M_j}(x) Σ_{u=m_j−n_j}^{m_j−1} r_j^u(x),
    /// skipping coordinates with n_j = 0 (their inner sum is empty).
    ///
    /// For n = M_N the kernel reduces to the scale kernel M_N·1[x = 0].
    pub fn dirichlet_closed(&self, n: u64, x: &Point) -> Complex64 {
        let points = self.spec.points();
        assert!(n >= 1 && n <= points, "kernel index {n} out of range");
        if n == points {
            return Complex64::new(self.dirichlet_block(self.spec.depth(), x), 0.0);
        }
        // x ∈ I_j(0) exactly for j up to the first nonzero digit.
        let deepest = self
            .spec
            .shell_index(x)
            .unwrap_or_else(|| self.spec.depth());
        let mut inner = Complex64::new(0.0, 0.0);
        let mut nrest = n;
        for j in 0..self.spec.depth() {
            if nrest == 0 {
                break;
            }
            let m = u64::from(self.spec.radix(j));
            let nj = nrest % m;
            nrest /= m;
            if nj == 0 || j > deepest {
                continue;
            }
            let scale = self.spec.scale(j) as f64;
            let xj = u64::from(x.digit(j));
            let mut tail = Complex64::new(0.0, 0.0);
            for u in (m - nj)..m {
                tail += self.root(j, u * xj);
            }
            inner += scale * tail;
        }
        self.vilenkin(n, x) * inner
    }

    /// Checks |D_n| ≤ M_{l+1} over the entire shell I_l(0) \ I_{l+1}(0),
    /// with a hair of slack for roundoff.
    pub fn dirichlet_shell_bound_check(&self, n: u64, shell: usize) -> bool {
        assert!(shell < self.spec.depth(), "shell index out of range");
        let bound = self.spec.scale(shell + 1) as f64 * (1.0 + 1e-12);
        (0..self.spec.points())
            .filter_map(|r| {
                let x = self.spec.digits(r).expect("rank in range");
                (self.spec.shell_index(&x) == Some(shell)).then_some(x)
            })
            .all(|x| self.dirichlet_closed(n, &x).norm() <= bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn chars_2323() -> Characters {
        Characters::new(&GroupSpec::new(vec![2, 3, 2, 3]).unwrap())
    }

    #[test]
    fn cube_root_of_unity() {
        let spec = GroupSpec::new(vec![3]).unwrap();
        let chars = Characters::new(&spec);
        let x = spec.digits(1).unwrap();
        let r = chars.rademacher(0, &x);
        assert!((r.re - -0.4999999999999998).abs() < 1e-15);
        assert!((r.im - 0.8660254037844387).abs() < 1e-15);
    }

    #[test]
    fn characters_are_orthonormal() {
        let chars = chars_2323();
        let spec = chars.spec().clone();
        let mn = spec.points();
        for a in 0..mn {
            for b in 0..mn {
                let inner: Complex64 = (0..mn)
                    .map(|r| chars.vilenkin_at_rank(a, r) * chars.vilenkin_at_rank(b, r).conj())
                    .sum::<Complex64>()
                    / mn as f64;
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (inner - expected).norm() < 1e-12,
                    "⟨ψ_{a}, ψ_{b}⟩ = {inner}"
                );
            }
        }
    }

    #[test]
    fn characters_are_multiplicative_in_the_argument() {
        let chars = chars_2323();
        let spec = chars.spec().clone();
        for n in 0..spec.points() {
            for a in (0..spec.points()).step_by(7) {
                for b in (0..spec.points()).step_by(5) {
                    let x = spec.digits(a).unwrap();
                    let y = spec.digits(b).unwrap();
                    let lhs = chars.vilenkin(n, &spec.add(&x, &y));
                    let rhs = chars.vilenkin(n, &x) * chars.vilenkin(n, &y);
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn character_grid_matches_pointwise_evaluation() {
        let chars = chars_2323();
        let spec = chars.spec().clone();
        let mut grid = vec![Complex64::new(0.0, 0.0); spec.points() as usize];
        for n in 0..spec.points() {
            chars.character_grid(n, &mut grid);
            for r in 0..spec.points() {
                let direct = chars.vilenkin_at_rank(n, r);
                assert!((grid[r as usize] - direct).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn scale_kernels_are_scaled_interval_indicators() {
        let chars = chars_2323();
        let spec = chars.spec().clone();
        for j in 0..=spec.depth() {
            let mj = spec.scale(j);
            for r in 0..spec.points() {
                let x = spec.digits(r).unwrap();
                let brute = if mj == spec.points() {
                    // D_{M_N} = Σ over all characters.
                    (0..mj).map(|k| chars.vilenkin_at_rank(k, r)).sum()
                } else {
                    chars.dirichlet_naive(mj, &x)
                };
                let block = chars.dirichlet_block(j, &x);
                assert!(
                    (brute - Complex64::new(block, 0.0)).norm() < TOL,
                    "D_{{M_{j}}} at rank {r}: {brute} vs {block}"
                );
            }
        }
    }

    #[test]
    fn closed_form_matches_brute_force_everywhere() {
        let chars = chars_2323();
        let spec = chars.spec().clone();
        for n in 1..=spec.points() {
            for r in 0..spec.points() {
                let x = spec.digits(r).unwrap();
                let brute: Complex64 = (0..n).map(|k| chars.vilenkin_at_rank(k, r)).sum();
                let closed = chars.dirichlet_closed(n, &x);
                assert!(
                    (brute - closed).norm() < TOL,
                    "D_{n} at rank {r}: {brute} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn kernel_at_origin_counts_terms() {
        let chars = chars_2323();
        let spec = chars.spec().clone();
        let zero = Point::zero(&spec);
        for n in 1..=spec.points() {
            let v = chars.dirichlet_closed(n, &zero);
            assert!((v - Complex64::new(n as f64, 0.0)).norm() < TOL);
        }
    }

    #[test]
    fn shell_bound_holds_for_all_kernels() {
        let chars = chars_2323();
        let spec = chars.spec().clone();
        for n in 1..=spec.points() {
            for shell in 0..spec.depth() {
                assert!(
                    chars.dirichlet_shell_bound_check(n, shell),
                    "kernel D_{n} exceeds M_{{l+1}} on shell {shell}"
                );
            }
        }
    }
}
