//! Normalized conformal map of the unit disk onto a domain model.
//!
//! Wraps a solved Schwarz–Christoffel representation `f` with the disk
//! automorphism `T(z) = (a + e^{i lam} z)/(1 + conj(a) e^{i lam} z)` chosen
//! so that `phi = f ∘ T` satisfies `phi(0) = interior_ref` and
//! `phi'(0) > 0`.

use num_complex::Complex64;
use serde_json::json;

use crate::conformal::polygon::Polygon;
use crate::conformal::solver::{ScSolution, SolveError};
use crate::domain::DomainModel;

/// Deepest truncation accepted by the solver before prevertex crowding
/// makes double precision untrustworthy.
pub const CROWDING_DEPTH_BOUND: u32 = 5;

/// The normalized disk-to-domain map.
#[derive(Debug)]
pub struct ConformalMap {
    pub sc: ScSolution,
    /// Preimage of `interior_ref` under the raw map `f`.
    pub a: Complex64,
    /// Rotation `e^{i lam}` making `phi'(0)` positive real.
    pub rot: Complex64,
    /// Cached `f(0)`.
    pub f0: Complex64,
    /// Achieved accuracy: max of the polygon side residual and the
    /// round-trip probe residual.
    pub eps_map: f64,
    pub interior_ref: Complex64,
    /// Coarse forward samples `(z, phi(z))` used to seed inversions.
    seeds: Vec<(Complex64, Complex64)>,
}

impl ConformalMap {
    /// Solves the map for `dm` to the requested accuracy.
    pub fn solve(dm: &DomainModel, eps_map: f64) -> Result<ConformalMap, SolveError> {
        if dm.depth > CROWDING_DEPTH_BOUND {
            return Err(SolveError::TooDeep(dm.depth, CROWDING_DEPTH_BOUND));
        }
        let poly = Polygon::from_domain(dm);
        let sc = ScSolution::solve_with_continuation(&poly)?;
        let n = sc.polygon.len();
        let f0 = sc.polygon.vertices[n - 1]
            + sc.c * sc.integrate_from_prevertex(n - 1, Complex64::new(0.0, 0.0));

        let (xr, yr) = dm.interior_ref.to_f64();
        let interior_ref = Complex64::new(xr, yr);

        // Locate a = f^{-1}(interior_ref) by a damped Newton iteration
        // from the disk center.
        let mut a = Complex64::new(0.0, 0.0);
        let mut ok = false;
        for _ in 0..80 {
            let fv = raw_eval(&sc, f0, a);
            let err = fv - interior_ref;
            if err.norm() < 1e-13 {
                ok = true;
                break;
            }
            let deriv = sc.c * sc.fprime(a);
            if deriv.norm() < 1e-300 {
                break;
            }
            let mut step = err / deriv;
            let mut next = a - step;
            while next.norm() >= 0.999 {
                step *= 0.5;
                next = a - step;
            }
            a = next;
        }
        if !ok {
            return Err(SolveError::InverseFailure(
                "could not locate the preimage of interior_ref".into(),
            ));
        }

        let d0 = sc.c * sc.fprime(a);
        let rot = Complex64::from_polar(1.0, -d0.arg());

        let mut cm = ConformalMap {
            sc,
            a,
            rot,
            f0,
            eps_map: 0.0,
            interior_ref,
            seeds: Vec::new(),
        };
        cm.build_seeds();

        // Round-trip residual on a 100-point probe grid, with the
        // inversion seeded independently of the probe itself.
        let mut worst = cm.sc.residual;
        for ir in 0..5 {
            let r = 0.1 + 0.2 * ir as f64;
            for it in 0..20 {
                let t = 2.0 * std::f64::consts::PI * (it as f64 + 0.31) / 20.0;
                let z = Complex64::from_polar(r, t);
                let w = cm.forward(z);
                match cm.inverse(w) {
                    Ok(z2) => {
                        let res = (cm.forward(z2) - w).norm();
                        worst = worst.max(res);
                    }
                    Err(_) => {
                        worst = f64::INFINITY;
                    }
                }
            }
        }
        cm.eps_map = worst;
        if !(worst <= eps_map) {
            return Err(SolveError::Accuracy {
                achieved: worst,
                requested: eps_map,
            });
        }
        Ok(cm)
    }

    fn build_seeds(&mut self) {
        let mut seeds = vec![(
            Complex64::new(0.0, 0.0),
            self.forward(Complex64::new(0.0, 0.0)),
        )];
        for &r in &[0.35f64, 0.65, 0.85, 0.95] {
            for it in 0..36 {
                let t = 2.0 * std::f64::consts::PI * it as f64 / 36.0;
                let z = Complex64::from_polar(r, t);
                seeds.push((z, self.forward(z)));
            }
        }
        self.seeds = seeds;
    }

    /// Disk automorphism carrying 0 to `a`.
    pub fn t_fwd(&self, z: Complex64) -> Complex64 {
        (self.a + self.rot * z) / (Complex64::new(1.0, 0.0) + self.a.conj() * self.rot * z)
    }

    pub fn t_inv(&self, zeta: Complex64) -> Complex64 {
        self.rot.conj() * (zeta - self.a) / (Complex64::new(1.0, 0.0) - self.a.conj() * zeta)
    }

    /// `phi(z)` for `|z| < 1`.
    pub fn forward(&self, z: Complex64) -> Complex64 {
        raw_eval(&self.sc, self.f0, self.t_fwd(z))
    }

    /// `phi'(z)` for `|z| < 1`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let u = self.rot * z;
        let den = Complex64::new(1.0, 0.0) + self.a.conj() * u;
        let tprime = self.rot * (1.0 - self.a.norm_sqr()) / (den * den);
        self.sc.c * self.sc.fprime(self.t_fwd(z)) * tprime
    }

    /// Numeric inverse `phi^{-1}(w)` via Newton from the best coarse seed.
    pub fn inverse(&self, w: Complex64) -> Result<Complex64, SolveError> {
        let seed = self
            .seeds
            .iter()
            .min_by(|a, b| (a.1 - w).norm().partial_cmp(&(b.1 - w).norm()).unwrap())
            .map(|s| s.0)
            .unwrap_or_default();
        self.inverse_seeded(w, seed)
    }

    /// Newton inversion from an explicit starting point.
    pub fn inverse_seeded(&self, w: Complex64, seed: Complex64) -> Result<Complex64, SolveError> {
        self.inverse_seeded_tol(w, seed, 1e-8)
    }

    /// Like [`inverse`], but accepting a caller-chosen residual tolerance.
    /// Looser tolerances are needed for targets on the domain boundary,
    /// where the preimage sits on the unit circle and Newton steps are
    /// clamped inside it.
    pub fn inverse_tol(&self, w: Complex64, tol: f64) -> Result<Complex64, SolveError> {
        let seed = self
            .seeds
            .iter()
            .min_by(|a, b| (a.1 - w).norm().partial_cmp(&(b.1 - w).norm()).unwrap())
            .map(|s| s.0)
            .unwrap_or_default();
        self.inverse_seeded_tol(w, seed, tol)
    }

    fn inverse_seeded_tol(
        &self,
        w: Complex64,
        seed: Complex64,
        tol: f64,
    ) -> Result<Complex64, SolveError> {
        let mut z = seed;
        let mut best = z;
        let mut best_err = f64::INFINITY;
        for _ in 0..60 {
            let err = self.forward(z) - w;
            let en = err.norm();
            if en < best_err {
                best_err = en;
                best = z;
            }
            if en < tol * 1e-4 {
                return Ok(z);
            }
            let d = self.derivative(z);
            if !d.norm().is_finite() || d.norm() < 1e-300 {
                break;
            }
            let mut step = err / d;
            let mut next = z - step;
            let mut tries = 0;
            while next.norm() >= 1.0 - 1e-12 && tries < 50 {
                step *= 0.5;
                next = z - step;
                tries += 1;
            }
            z = next;
        }
        if best_err < tol {
            Ok(best)
        } else {
            Err(SolveError::InverseFailure(format!(
                "newton stalled at |phi(z) - w| = {best_err:.3e}"
            )))
        }
    }

    /// Prevertex positions in the normalized disk (preimages of the
    /// polygon vertices under `phi`).
    pub fn normalized_prevertices(&self) -> Vec<Complex64> {
        self.sc
            .prevertices
            .iter()
            .map(|&zk| {
                let z = self.t_inv(zk);
                // T maps the circle to itself; renormalize rounding drift.
                z / z.norm()
            })
            .collect()
    }

    /// Structured-text dump of the solver state.
    pub fn to_document(&self) -> serde_json::Value {
        json!({
            "prevertex_angles": self.sc.thetas,
            "scale": [self.sc.c.re, self.sc.c.im],
            "mobius_a": [self.a.re, self.a.im],
            "mobius_rot": [self.rot.re, self.rot.im],
            "side_residual": self.sc.residual,
            "eps_map": self.eps_map,
            "interior_ref": [self.interior_ref.re, self.interior_ref.im],
        })
    }
}

/// Evaluates the raw Schwarz–Christoffel map `f` at `u` in the open disk,
/// integrating from the center when well inside and from the nearest
/// prevertex when close to the circle.
fn raw_eval(sc: &ScSolution, f0: Complex64, u: Complex64) -> Complex64 {
    if u.norm() <= 0.8 {
        f0 + sc.c * sc.integrate_plain(Complex64::new(0.0, 0.0), u)
    } else {
        let (k, _) = sc
            .prevertices
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - u).norm().partial_cmp(&(b.1 - u).norm()).unwrap())
            .unwrap();
        sc.polygon.vertices[k] + sc.c * sc.integrate_from_prevertex(k, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;
    use crate::geom::{rat, QPoint};
    use crate::staged::StagedSet;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn square_fixture_normalization_and_symmetry() {
        let dm = DomainModel::square_fixture();
        let cm = ConformalMap::solve(&dm, 1e-6).expect("square map");
        let center = Complex64::new(0.5, 0.5);
        assert!(close(cm.forward(Complex64::new(0.0, 0.0)), center, 1e-10));
        // phi'(0) positive real.
        let d0 = cm.derivative(Complex64::new(0.0, 0.0));
        assert!(d0.re > 0.0 && d0.im.abs() < 1e-9 * d0.re);
        // 4-fold symmetry: phi(i z) - c = i (phi(z) - c).
        for &(re, im) in &[(0.3, 0.2), (-0.5, 0.1), (0.0, 0.62), (0.41, -0.33)] {
            let z = Complex64::new(re, im);
            let lhs = cm.forward(Complex64::new(0.0, 1.0) * z) - center;
            let rhs = Complex64::new(0.0, 1.0) * (cm.forward(z) - center);
            assert!(close(lhs, rhs, 1e-5), "symmetry at {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn spike_map_images_stay_in_domain() {
        let staged = StagedSet::empty(0, 0);
        let dm = DomainModel::build(&staged, 1).unwrap();
        let cm = ConformalMap::solve(&dm, 1e-6).expect("spike map");
        assert!(close(
            cm.forward(Complex64::new(0.0, 0.0)),
            Complex64::new(0.5, 0.75),
            1e-10
        ));
        // Images of a radial grid lie in D (checked exactly on rounded
        // rationals with a safety margin off the boundary).
        for ir in 1..6 {
            let r = ir as f64 / 6.4;
            for it in 0..24 {
                let t = 2.0 * std::f64::consts::PI * (it as f64 + 0.17) / 24.0;
                let w = cm.forward(Complex64::from_polar(r, t));
                let p = QPoint::new(
                    rat((w.re * (1 << 20) as f64).round() as i64, 1 << 20),
                    rat((w.im * (1 << 20) as f64).round() as i64, 1 << 20),
                );
                assert!(dm.point_in_d(&p), "image {w} escaped the domain");
            }
        }
    }

    #[test]
    fn prevertex_correspondence_monotone() {
        let staged = StagedSet::new(1, 2, &[(0, 1)]).unwrap();
        let dm = DomainModel::build(&staged, 2).unwrap();
        let cm = ConformalMap::solve(&dm, 1e-6).expect("tent+spike map");
        let pv = cm.normalized_prevertices();
        // Angles must be cyclically increasing (orientation preserved).
        let args: Vec<f64> = pv.iter().map(|z| z.arg()).collect();
        let mut wraps = 0;
        for k in 0..args.len() {
            let a = args[k];
            let b = args[(k + 1) % args.len()];
            if b <= a {
                wraps += 1;
            }
        }
        assert_eq!(
            wraps, 1,
            "prevertex angles not cyclically monotone: {args:?}"
        );
    }

    #[test]
    fn inverse_round_trip() {
        let staged = StagedSet::empty(0, 0);
        let dm = DomainModel::build(&staged, 1).unwrap();
        let cm = ConformalMap::solve(&dm, 1e-6).unwrap();
        for &(re, im) in &[(0.2, 0.3), (-0.6, 0.25), (0.1, -0.7), (0.85, 0.1)] {
            let z = Complex64::new(re, im);
            let w = cm.forward(z);
            let z2 = cm.inverse(w).expect("invertible");
            assert!(close(cm.forward(z2), w, 1e-8));
        }
    }
}
