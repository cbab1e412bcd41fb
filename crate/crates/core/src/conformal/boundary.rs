//! Boundary extension sampling: radial limits, a certified lower bound on
//! the center-to-half-radius image distance, and sampled image arcs of
//! circles centered on the unit circle.

use num_bigint::BigInt;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::conformal::map::ConformalMap;
use crate::geom::Rat;

#[derive(Debug, Error)]
pub enum BoundaryError {
    #[error("point is not on the unit circle (|z| = {0})")]
    NotUnimodular(f64),
    #[error("requested precision {requested:.3e} unreachable at angle {angle:.6}: achieved {achieved:.3e}")]
    PrecisionUnreachable {
        angle: f64,
        requested: f64,
        achieved: f64,
    },
    #[error(
        "margin collapse: grid minimum {min:.3e} does not exceed the safety term {safety:.3e}"
    )]
    MarginCollapse { min: f64, safety: f64 },
    #[error("containment check failed: {0}")]
    Containment(String),
}

/// A point estimate with an attached error bar.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryEstimate {
    pub value: Complex64,
    pub err: f64,
}

/// Radial-limit estimate of the boundary extension at a unimodular point.
///
/// Evaluates `phi((1 - 2^-m) zeta)` for growing `m` and accepts once the
/// Cauchy difference plus the map error fits inside `precision`.
pub fn boundary_point(
    cm: &ConformalMap,
    zeta: Complex64,
    precision: f64,
) -> Result<BoundaryEstimate, BoundaryError> {
    let r = zeta.norm();
    if (r - 1.0).abs() > 1e-9 {
        return Err(BoundaryError::NotUnimodular(r));
    }
    let zeta = zeta / r;
    let mut prev = cm.forward(zeta * (1.0 - 0.25));
    let mut achieved = f64::INFINITY;
    for m in 3..=45u32 {
        let cur = cm.forward(zeta * (1.0 - 2f64.powi(-(m as i32))));
        let diff = (cur - prev).norm();
        achieved = 2.0 * diff + cm.eps_map;
        if achieved <= precision {
            return Ok(BoundaryEstimate {
                value: cur,
                err: achieved.min(precision),
            });
        }
        prev = cur;
    }
    Err(BoundaryError::PrecisionUnreachable {
        angle: zeta.arg(),
        requested: precision,
        achieved,
    })
}

/// `rho_lower_bound` on a configurable angular grid; the public entry
/// point uses 720 samples.
pub fn rho_lower_bound_with(cm: &ConformalMap, grid: usize) -> Result<Rat, BoundaryError> {
    assert!(grid >= 8);
    let phi0 = cm.forward(Complex64::new(0.0, 0.0));
    let mut minv = f64::INFINITY;
    for k in 0..grid {
        let t = 2.0 * PI * k as f64 / grid as f64;
        let z = Complex64::from_polar(0.5, t);
        minv = minv.min((cm.forward(z) - phi0).norm());
    }
    // Modulus-of-continuity safety on |z| = 1/2: a derivative bound from a
    // finer sample of |phi'|, inflated, times the half arc spacing.
    let mut deriv_max: f64 = 0.0;
    for k in 0..2 * grid {
        let t = 2.0 * PI * k as f64 / (2 * grid) as f64;
        deriv_max = deriv_max.max(cm.derivative(Complex64::from_polar(0.5, t)).norm());
    }
    let safety = 1.2 * deriv_max * (0.5 * PI / grid as f64) + cm.eps_map;
    let bound = minv - safety;
    if bound <= 0.0 {
        return Err(BoundaryError::MarginCollapse { min: minv, safety });
    }
    // Round down to a dyadic rational.
    let scaled = (bound * (1u64 << 24) as f64).floor() as i64;
    Ok(Rat::new(BigInt::from(scaled), BigInt::from(1u64 << 24)))
}

/// Certified-with-margin rational lower bound for
/// `min over unimodular zeta of |phi(0) - phi(zeta/2)|`.
pub fn rho_lower_bound(cm: &ConformalMap) -> Result<Rat, BoundaryError> {
    rho_lower_bound_with(cm, 720)
}

/// The angular interval `(psi_lo, psi_hi)` for which `c + rho e^{i psi}`
/// lies in the closed unit disk, or `None` when the whole circle does.
pub(crate) fn circle_in_disk_interval(c: Complex64, rho: f64) -> Option<(f64, f64)> {
    let cn = c.norm();
    if cn + rho <= 1.0 {
        return None;
    }
    let kappa = (1.0 - cn * cn - rho * rho) / (2.0 * rho * cn);
    let kappa = kappa.clamp(-1.0, 1.0);
    let half = kappa.acos();
    let alpha = c.arg();
    Some((alpha + half, alpha + 2.0 * PI - half))
}

/// Samples the image under `phi` of `∂D_r(zeta) ∩ closed disk` at the
/// requested angular resolution, with per-sample error bars.  The first
/// and last samples are boundary estimates; interior samples are direct
/// evaluations.
pub fn image_arc(
    cm: &ConformalMap,
    r: f64,
    zeta: Complex64,
    resolution: usize,
) -> Result<Vec<BoundaryEstimate>, BoundaryError> {
    assert!(r > 0.0 && r < 1.0, "radius must be in (0, 1)");
    assert!(resolution >= 3);
    let zn = zeta.norm();
    if (zn - 1.0).abs() > 1e-9 {
        return Err(BoundaryError::NotUnimodular(zn));
    }
    let zeta = zeta / zn;
    let (lo, hi) =
        circle_in_disk_interval(zeta, r).expect("a circle centered on the unit circle crosses it");
    let bnd_precision = (cm.eps_map * 10.0).max(1e-6);
    let mut out = Vec::with_capacity(resolution);
    for i in 0..resolution {
        let psi = lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
        let z = zeta + r * Complex64::from_polar(1.0, psi);
        if z.norm() >= 1.0 - 1e-9 {
            out.push(boundary_point(cm, z / z.norm(), bnd_precision)?);
        } else {
            out.push(BoundaryEstimate {
                value: cm.forward(z),
                err: cm.eps_map,
            });
        }
    }
    Ok(out)
}

/// Largest pairwise distance among sampled values.
pub fn samples_diameter(samples: &[BoundaryEstimate]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            d = d.max((samples[i].value - samples[j].value).norm());
        }
    }
    d
}
