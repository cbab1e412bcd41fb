//! Gauss–Jacobi quadrature with a one-sided algebraic endpoint singularity.
//!
//! Rules are expressed on `[0, 1]` with weight `x^beta` attached to the
//! `x = 0` endpoint:
//!
//! ```text
//! ∫₀¹ x^β g(x) dx  ≈  Σᵢ wᵢ g(xᵢ)
//! ```
//!
//! `beta = 0` recovers plain Gauss–Legendre.  Nodes and weights are obtained
//! from the Golub–Welsch eigenvalue method applied to the monic Jacobi
//! three-term recurrence, using a symmetric tridiagonal eigen-solve.

use std::cell::RefCell;
use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};

/// A quadrature rule for `∫₀¹ x^β g(x) dx`.
#[derive(Debug, Clone)]
pub struct JacobiRule {
    /// Nodes in `(0, 1)`, ascending.
    pub nodes: Vec<f64>,
    /// Positive weights; `Σ wᵢ = 1/(β+1)`.
    pub weights: Vec<f64>,
    /// Singularity exponent at the `x = 0` end (`beta > -1`).
    pub beta: f64,
}

impl JacobiRule {
    /// Builds an `n`-point rule, exact for integrands `g` of degree `≤ 2n-1`.
    pub fn new(n: usize, beta: f64) -> Self {
        assert!(n >= 1, "rule size must be positive");
        assert!(beta > -1.0, "endpoint exponent must exceed -1");
        // Monic Jacobi recurrence on [-1, 1] with weight (1+t)^beta
        // (alpha = 0):  p_{k+1} = (t - a_k) p_k - b_k p_{k-1}.
        let mut diag = vec![0.0f64; n];
        let mut off = vec![0.0f64; n.saturating_sub(1)];
        for (k, d) in diag.iter_mut().enumerate() {
            let k = k as f64;
            *d = if k == 0.0 {
                beta / (beta + 2.0)
            } else {
                let s = 2.0 * k + beta;
                beta * beta / (s * (s + 2.0))
            };
        }
        for (k, o) in off.iter_mut().enumerate() {
            let k = (k + 1) as f64;
            let s = 2.0 * k + beta;
            let b = 4.0 * k * k * (k + beta) * (k + beta) / (s * s * (s + 1.0) * (s - 1.0));
            *o = b.sqrt();
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
        }
        for i in 0..n - 1 {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
        let eig = SymmetricEigen::new(m);
        let mu0 = 2f64.powf(beta + 1.0) / (beta + 1.0);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let t = eig.eigenvalues[j];
                let v0 = eig.eigenvectors[(0, j)];
                (t, mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // Map [-1, 1] -> [0, 1]: x = (1+t)/2, and absorb the Jacobian plus
        // the rescaled weight factor (2x)^beta / x^beta = 2^beta.
        let scale = 2f64.powf(-(beta + 1.0));
        let nodes = pairs.iter().map(|p| 0.5 * (1.0 + p.0)).collect();
        let weights = pairs.iter().map(|p| p.1 * scale).collect();
        JacobiRule {
            nodes,
            weights,
            beta,
        }
    }

    /// Applies the rule to `g`, approximating `∫₀¹ x^β g(x) dx`.
    pub fn apply<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Memoizing store for quadrature rules keyed by `(n, beta)`.
#[derive(Debug, Default)]
pub struct QuadCache {
    rules: RefCell<HashMap<(usize, u64), JacobiRule>>,
}

impl QuadCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns (building if necessary) the `n`-point rule for exponent `beta`.
    pub fn rule(&self, n: usize, beta: f64) -> JacobiRule {
        let key = (n, beta.to_bits());
        if let Some(r) = self.rules.borrow().get(&key) {
            return r.clone();
        }
        let r = JacobiRule::new(n, beta);
        self.rules.borrow_mut().insert(key, r.clone());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_monomials_exact() {
        // beta = 0: ∫₀¹ x^m dx = 1/(m+1), exact through degree 2n-1.
        let rule = JacobiRule::new(8, 0.0);
        for m in 0..16u32 {
            let got = rule.apply(|x| x.powi(m as i32));
            let want = 1.0 / (m as f64 + 1.0);
            assert!((got - want).abs() < 1e-13, "m={m}: got {got}, want {want}");
        }
    }

    #[test]
    fn jacobi_monomials_exact() {
        // ∫₀¹ x^β x^m dx = 1/(m+β+1) for several singular exponents,
        // including the slit-tip value beta = 1 and reflex values in (-1, 0).
        for &beta in &[-0.5, -0.75, 0.5, 1.0, 0.25] {
            let rule = JacobiRule::new(10, beta);
            for m in 0..20u32 {
                let got = rule.apply(|x| x.powi(m as i32));
                let want = 1.0 / (m as f64 + beta + 1.0);
                assert!(
                    (got - want).abs() < 1e-12 * want.abs().max(1.0),
                    "beta={beta} m={m}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn nodes_inside_open_interval() {
        for &beta in &[-0.9, 0.0, 1.0] {
            let rule = JacobiRule::new(16, beta);
            assert!(rule.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 1.0 / (beta + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_integrand_converges() {
        // ∫₀¹ x^{-1/2} e^x dx = 2 Σ 1/(k! (2k+1)) — a rapidly
        // converging series; 25 terms exceed double precision.
        let mut want = 0.0f64;
        let mut fact = 1.0f64;
        for k in 0..25 {
            if k > 0 {
                fact *= k as f64;
            }
            want += 1.0 / (fact * (2.0 * k as f64 + 1.0));
        }
        want *= 2.0;
        let rule = JacobiRule::new(12, -0.5);
        let got = rule.apply(|x| x.exp());
        assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
    }

    #[test]
    fn cache_returns_identical_rules() {
        let cache = QuadCache::new();
        let a = cache.rule(6, 0.5);
        let b = cache.rule(6, 0.5);
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.weights, b.weights);
    }
}
