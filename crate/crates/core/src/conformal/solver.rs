//! Schwarz–Christoffel parameter problem for the disk.
//!
//! For a counterclockwise polygon with vertices `w_k` and exponents
//! `beta_k`, the map has derivative
//!
//! ```text
//! f'(z) = Π_k (1 - z / z_k)^{beta_k},     z_k = e^{i theta_k},
//! ```
//!
//! and `f(z) = w_base + C ∫ f'`.  Three prevertex angles are fixed by the
//! Möbius gauge (`theta_{n-3} = pi`, `theta_{n-2} = 3pi/2`,
//! `theta_{n-1} = 2pi`, i.e. the last three polygon vertices); the remaining
//! `n - 3` angles are found by a damped Newton iteration on logarithmic
//! side-length ratios.  Side integrals use Gauss–Jacobi panels with the
//! endpoint singularity absorbed into the quadrature weight and compound
//! subdivision so no other prevertex sits closer than twice a panel length.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use super::polygon::Polygon;
use super::quad::QuadCache;

/// Quadrature nodes per panel.
const NQ: usize = 16;
/// Convergence target for the Newton residual (log side-length ratios).
const NEWTON_TOL: f64 = 1e-11;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(
        "parameter solve stalled: residual {residual:.3e} after {iters} iterations \
         (smallest prevertex gap {min_gap:.3e} rad)"
    )]
    NoConvergence {
        residual: f64,
        iters: usize,
        min_gap: f64,
    },
    #[error("domain depth {0} exceeds the configured crowding bound {1}")]
    TooDeep(u32, u32),
    #[error("map residual {achieved:.3e} exceeds the requested accuracy {requested:.3e}")]
    Accuracy { achieved: f64, requested: f64 },
    #[error("inverse iteration failed: {0}")]
    InverseFailure(String),
    #[error("{0}")]
    Numeric(String),
}

/// A solved Schwarz–Christoffel representation.
#[derive(Debug)]
pub struct ScSolution {
    pub polygon: Polygon,
    /// Ascending prevertex angles in `(0, 2*pi]`; the last one is `2*pi`.
    pub thetas: Vec<f64>,
    pub prevertices: Vec<Complex64>,
    /// Affine factor: `f(z) = w_k + c * ∫_{z_k}^{z} f'` for any vertex `k`.
    pub c: Complex64,
    /// Largest absolute side mismatch `|c·I_k - (w_{k+1} - w_k)|`.
    pub residual: f64,
    quad: QuadCache,
}

impl ScSolution {
    /// Assembles an unsolved trial state; `c` is set to 1 and no residual
    /// is claimed.  Used internally by the Newton objective.
    fn trial(polygon: Polygon, thetas: Vec<f64>) -> Self {
        let prevertices = thetas
            .iter()
            .map(|&t| Complex64::new(t.cos(), t.sin()))
            .collect();
        ScSolution {
            polygon,
            thetas,
            prevertices,
            c: Complex64::new(1.0, 0.0),
            residual: f64::NAN,
            quad: QuadCache::new(),
        }
    }

    /// The Schwarz–Christoffel derivative product.
    pub fn fprime(&self, z: Complex64) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for (zk, &b) in self.prevertices.iter().zip(&self.polygon.betas) {
            p *= (Complex64::new(1.0, 0.0) - z * zk.conj()).powf(b);
        }
        p
    }

    fn fprime_skip(&self, z: Complex64, skip: usize) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for (j, (zk, &b)) in self.prevertices.iter().zip(&self.polygon.betas).enumerate() {
            if j != skip {
                p *= (Complex64::new(1.0, 0.0) - z * zk.conj()).powf(b);
            }
        }
        p
    }

    fn nearest_prevertex_gap(&self, k: usize) -> f64 {
        self.prevertices
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, zj)| (zj - self.prevertices[k]).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// One Gauss–Jacobi panel `∫_{z_k}^{z_end} f'` with the singularity
    /// at `z_k` folded into the weight.
    fn panel_from_prevertex(&self, k: usize, z_end: Complex64) -> Complex64 {
        let zk = self.prevertices[k];
        let beta = self.polygon.betas[k];
        let rule = self.quad.rule(NQ, beta);
        // (1 - z/z_k) = x * (z_k - z_end)/z_k along the panel.
        let a_fac = ((zk - z_end) * zk.conj()).powf(beta);
        let dir = z_end - zk;
        let mut s = Complex64::new(0.0, 0.0);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            s += w * self.fprime_skip(zk + dir * x, k);
        }
        dir * a_fac * s
    }

    /// Straight-path integral of `f'` between two non-singular points,
    /// subdivided so each panel stays short relative to the nearest
    /// prevertex.
    pub fn integrate_plain(&self, a: Complex64, b: Complex64) -> Complex64 {
        let rule = self.quad.rule(NQ, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut cur = a;
        for _ in 0..6000 {
            let rem = b - cur;
            let len = rem.norm();
            if len <= 1e-15 {
                break;
            }
            let r = self
                .prevertices
                .iter()
                .map(|z| (z - cur).norm())
                .fold(f64::INFINITY, f64::min);
            let h = (0.5 * r).max(1e-14).min(len);
            let nxt = cur + rem * (h / len);
            let dir = nxt - cur;
            let mut s = Complex64::new(0.0, 0.0);
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                s += w * self.fprime(cur + dir * x);
            }
            acc += dir * s;
            cur = nxt;
        }
        acc
    }

    /// `∫_{z_k}^{z_end} f'` with the algebraic singularity at the start.
    pub fn integrate_from_prevertex(&self, k: usize, z_end: Complex64) -> Complex64 {
        let zk = self.prevertices[k];
        let total = z_end - zk;
        let len = total.norm();
        if len <= 1e-15 {
            return Complex64::new(0.0, 0.0);
        }
        let gap = self.nearest_prevertex_gap(k);
        let h = (0.5 * gap).min(len);
        let z1 = zk + total * (h / len);
        self.panel_from_prevertex(k, z1) + self.integrate_plain(z1, z_end)
    }

    /// `I_k = ∫_{z_k}^{z_{k+1}} f'`, split at the chord midpoint so both
    /// endpoint singularities are absorbed.
    pub fn side_integral(&self, k: usize) -> Complex64 {
        let n = self.polygon.len();
        let k1 = (k + 1) % n;
        let mid = 0.5 * (self.prevertices[k] + self.prevertices[k1]);
        self.integrate_from_prevertex(k, mid) - self.integrate_from_prevertex(k1, mid)
    }

    pub fn side_integrals(&self) -> Vec<Complex64> {
        (0..self.polygon.len())
            .map(|k| self.side_integral(k))
            .collect()
    }

    fn smallest_angle_gap(&self) -> f64 {
        let n = self.thetas.len();
        (0..n)
            .map(|k| {
                let prev = if k == 0 {
                    self.thetas[n - 1] - 2.0 * PI
                } else {
                    self.thetas[k - 1]
                };
                self.thetas[k] - prev
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves the parameter problem for `polygon`.  `init` optionally
    /// supplies starting angles for the `n - 3` free prevertices.
    pub fn solve(polygon: &Polygon, init: Option<&[f64]>) -> Result<ScSolution, SolveError> {
        let n = polygon.len();
        assert!(n >= 4, "parameter problem needs at least four vertices");
        let m = n - 3;

        let lengths = polygon.side_lengths();
        let x0 = match init {
            Some(free) => {
                assert_eq!(free.len(), m);
                x_from_free_thetas(free)
            }
            None => {
                // Seed prevertex spacing with cumulative boundary length up
                // to the gauge vertex at angle pi.
                let mut cum = Vec::with_capacity(m);
                let mut acc = 0.0;
                for len in lengths.iter().take(m) {
                    acc += len;
                    cum.push(acc);
                }
                let total: f64 = acc + lengths[m];
                let free: Vec<f64> = cum.iter().map(|&c| PI * c / total).collect();
                x_from_free_thetas(&free)
            }
        };

        let objective = |x: &[f64]| -> Vec<f64> {
            let thetas = thetas_from_x(x, n);
            let trial = ScSolution::trial(polygon.clone(), thetas);
            let i0 = trial.side_integral(0).norm();
            (1..=m)
                .map(|k| {
                    let ik = trial.side_integral(k).norm();
                    (ik * lengths[0] / (i0 * lengths[k])).ln()
                })
                .collect()
        };

        let mut x = x0;
        let mut f = objective(&x);
        let mut fnorm = inf_norm(&f);
        let mut iters = 0usize;
        while fnorm > NEWTON_TOL && iters < 80 {
            iters += 1;
            // Forward-difference Jacobian.
            let hstep = 1e-6;
            let mut jac = DMatrix::<f64>::zeros(m, m);
            for j in 0..m {
                let mut xp = x.clone();
                xp[j] += hstep;
                let fp = objective(&xp);
                for i in 0..m {
                    jac[(i, j)] = (fp[i] - f[i]) / hstep;
                }
            }
            let rhs = DVector::from_iterator(m, f.iter().map(|v| -v));
            let Some(dx) = jac.lu().solve(&rhs) else {
                break;
            };
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let xn: Vec<f64> = x
                    .iter()
                    .zip(dx.iter())
                    .map(|(xi, di)| (xi + lambda * di).clamp(-40.0, 40.0))
                    .collect();
                let fnew = objective(&xn);
                let fnewnorm = inf_norm(&fnew);
                if fnewnorm.is_finite() && fnewnorm < fnorm {
                    x = xn;
                    f = fnew;
                    fnorm = fnewnorm;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }

        let thetas = thetas_from_x(&x, n);
        let mut sol = ScSolution::trial(polygon.clone(), thetas);
        if fnorm > 1e-8 || !fnorm.is_finite() {
            return Err(SolveError::NoConvergence {
                residual: fnorm,
                iters,
                min_gap: sol.smallest_angle_gap(),
            });
        }

        // Affine factor from the longest side; residual over all sides.
        let integrals = sol.side_integrals();
        let kref = (0..n)
            .max_by(|&a, &b| lengths[a].partial_cmp(&lengths[b]).unwrap())
            .unwrap();
        let wv = &sol.polygon.vertices;
        let c = (wv[(kref + 1) % n] - wv[kref]) / integrals[kref];
        let residual = (0..n)
            .map(|k| (c * integrals[k] - (wv[(k + 1) % n] - wv[k])).norm())
            .fold(0.0, f64::max);
        sol.c = c;
        sol.residual = residual;
        Ok(sol)
    }

    /// Solves with a homotopy fallback: if the direct solve stalls, reflex
    /// vertices are grown gradually from a shallow copy of the polygon,
    /// reusing each stage's angles as the next starting point.
    pub fn solve_with_continuation(polygon: &Polygon) -> Result<ScSolution, SolveError> {
        match ScSolution::solve(polygon, None) {
            Ok(sol) => Ok(sol),
            Err(first_err) => {
                let m = polygon.len() - 3;
                let mut guess: Option<Vec<f64>> = None;
                let mut last: Option<ScSolution> = None;
                for &t in &[0.3f64, 0.55, 0.8, 1.0] {
                    let stage = polygon.shrunken(t);
                    match ScSolution::solve(&stage, guess.as_deref()) {
                        Ok(sol) => {
                            guess = Some(sol.thetas[..m].to_vec());
                            last = Some(sol);
                        }
                        Err(_) => return Err(first_err),
                    }
                }
                Ok(last.expect("continuation produced a solution"))
            }
        }
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, &b| a.max(b.abs()))
}

/// Free angles in `(0, pi)` -> log-increment unknowns (last increment,
/// reaching `pi`, is the gauge and fixed at 1 before normalization).
fn x_from_free_thetas(free: &[f64]) -> Vec<f64> {
    let m = free.len();
    let mut incr = Vec::with_capacity(m + 1);
    let mut prev = 0.0;
    for &t in free {
        incr.push((t - prev).max(1e-12));
        prev = t;
    }
    incr.push((PI - prev).max(1e-12));
    (0..m).map(|i| (incr[i] / incr[m]).ln()).collect()
}

/// Log-increment unknowns -> full ascending angle vector with the gauge
/// `theta_{n-3} = pi`, `theta_{n-2} = 3pi/2`, `theta_{n-1} = 2pi`.
fn thetas_from_x(x: &[f64], n: usize) -> Vec<f64> {
    let m = n - 3;
    debug_assert_eq!(x.len(), m);
    let incr: Vec<f64> = x
        .iter()
        .map(|&v| v.exp())
        .chain(std::iter::once(1.0))
        .collect();
    let total: f64 = incr.iter().sum();
    let mut thetas = Vec::with_capacity(n);
    let mut acc = 0.0;
    for item in incr.iter().take(m) {
        acc += item;
        thetas.push(PI * acc / total);
    }
    thetas.push(PI);
    thetas.push(1.5 * PI);
    thetas.push(2.0 * PI);
    thetas
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::polygon::Polygon;
    use crate::domain::DomainModel;
    use crate::staged::StagedSet;

    #[test]
    fn square_prevertices_symmetric() {
        let dm = DomainModel::square_fixture();
        let poly = Polygon::from_domain(&dm);
        let sol = ScSolution::solve(&poly, None).expect("square solves");
        // Equal sides force equally spaced prevertices: theta_0 = pi/2.
        assert!(
            (sol.thetas[0] - PI / 2.0).abs() < 1e-9,
            "theta_0 = {}",
            sol.thetas[0]
        );
        assert!(sol.residual < 1e-9, "residual {}", sol.residual);
    }

    #[test]
    fn spike_domain_solves() {
        let staged = StagedSet::empty(0, 0);
        let dm = DomainModel::build(&staged, 1).unwrap();
        let poly = Polygon::from_domain(&dm);
        let sol = ScSolution::solve_with_continuation(&poly).expect("spike solves");
        assert!(sol.residual < 1e-8, "residual {}", sol.residual);
        // The domain is symmetric about x = 1/2 but the gauge is not, so
        // just sanity-check ordering and positivity of the gaps.
        for k in 1..sol.thetas.len() {
            assert!(sol.thetas[k] > sol.thetas[k - 1]);
        }
    }

    #[test]
    fn closure_sum_vanishes() {
        let staged = StagedSet::new(1, 3, &[(0, 1)]).unwrap();
        let dm = DomainModel::build(&staged, 2).unwrap();
        let poly = Polygon::from_domain(&dm);
        let sol = ScSolution::solve_with_continuation(&poly).expect("tent+spike solves");
        let total: Complex64 = sol.side_integrals().iter().sum();
        assert!(
            (sol.c * total).norm() < 1e-8,
            "side vectors close up: {}",
            (sol.c * total).norm()
        );
        assert!(sol.residual < 1e-8, "residual {}", sol.residual);
    }
}
