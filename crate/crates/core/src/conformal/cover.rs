//! Oscillation covers of the unit circle and the strong rectangle
//! evaluator built on them.
//!
//! A cover for accuracy `2^-k` is a finite family of open rational
//! rectangles whose interiors cover the circle and on each of which the
//! sampled oscillation of the map (plus error bars) stays below `2^-k`.
//! Candidate rectangles are grown around rational-angle anchors by an
//! adaptive walk; the final coverage claim is discharged exactly on the
//! rational rectangle edges, with no floating point.

use num_bigint::BigInt;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

use crate::conformal::circle_alg::covers_circle;
use crate::conformal::map::ConformalMap;
use crate::geom::{rat_to_f64, QRect, Rat, RectKind};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("no rectangle with oscillation below 2^-{k} found at angle {angle:.6}")]
    ArcStuck { angle: f64, k: u32 },
    #[error("exact coverage check failed at circle point ({0:.6}, {1:.6})")]
    CoverageGap(f64, f64),
    #[error("requested accuracy 2^-{k} exceeds the configured bound 2^-{k_max}")]
    TooFine { k: u32, k_max: u32 },
}

/// Covers for a range of accuracies, keyed by `k`.
#[derive(Debug, Default)]
pub struct CoverFamily {
    pub covers: BTreeMap<u32, Vec<QRect>>,
}

impl CoverFamily {
    pub fn build(cm: &ConformalMap, k_max: u32) -> Result<Self, CoverError> {
        let mut covers = BTreeMap::new();
        for k in 1..=k_max {
            covers.insert(k, oscillation_cover(cm, k)?);
        }
        Ok(CoverFamily { covers })
    }
}

/// Dyadic floor/ceil at grid `2^-26`.
fn dyadic(v: f64, up: bool) -> Rat {
    let scale = (1u64 << 26) as f64;
    let n = if up {
        (v * scale).ceil() as i64
    } else {
        (v * scale).floor() as i64
    };
    Rat::new(BigInt::from(n), BigInt::from(1u64 << 26))
}

/// Measured oscillation of `phi` over `rect ∩ closed disk`: the sampled
/// value spread plus twice the radial-differencing error estimate and
/// twice the map error.  Returns `None` when the rectangle misses the
/// closed disk entirely.
pub fn rect_oscillation(cm: &ConformalMap, rect: &QRect) -> Option<f64> {
    let xl = rat_to_f64(&rect.x_lo);
    let xh = rat_to_f64(&rect.x_hi);
    let yl = rat_to_f64(&rect.y_lo);
    let yh = rat_to_f64(&rect.y_hi);
    let mut vals: Vec<Complex64> = Vec::new();
    // Interior grid.
    let n = 9;
    for i in 0..=n {
        for j in 0..=n {
            let x = xl + (xh - xl) * i as f64 / n as f64;
            let y = yl + (yh - yl) * j as f64 / n as f64;
            let z = Complex64::new(x, y);
            if z.norm() <= 1.0 - 1e-9 {
                vals.push(cm.forward(z));
            }
        }
    }
    // Circle portion: radial samples at angles whose circle point lies in
    // the closed rectangle.
    let mut err_rad: f64 = 0.0;
    let count = 65;
    let (c_lo, c_hi) = angular_window(xl, xh, yl, yh);
    if c_hi > c_lo {
        for i in 0..=count {
            let t = c_lo + (c_hi - c_lo) * i as f64 / count as f64;
            let p = Complex64::from_polar(1.0, t);
            if p.re >= xl - 1e-12 && p.re <= xh + 1e-12 && p.im >= yl - 1e-12 && p.im <= yh + 1e-12
            {
                let v1 = cm.forward(p * (1.0 - 2f64.powi(-11)));
                let v2 = cm.forward(p * (1.0 - 2f64.powi(-15)));
                err_rad = err_rad.max((v2 - v1).norm());
                vals.push(v1);
                vals.push(v2);
            }
        }
    }
    if vals.is_empty() {
        return None;
    }
    let mut osc: f64 = 0.0;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            osc = osc.max((vals[i] - vals[j]).norm());
        }
    }
    Some(osc + 2.0 * err_rad + 2.0 * cm.eps_map)
}

/// A crude angular window guaranteed to contain every circle point of the
/// rectangle (trimmed later by the per-point membership test).
fn angular_window(xl: f64, xh: f64, yl: f64, yh: f64) -> (f64, f64) {
    // Sample the rectangle boundary corners and take the spread of their
    // angles, padded; rectangles used here are small and away from the
    // origin, so the window is well-defined.
    let corners = [
        Complex64::new(xl, yl),
        Complex64::new(xl, yh),
        Complex64::new(xh, yl),
        Complex64::new(xh, yh),
    ];
    let base = corners[0].arg();
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for c in &corners {
        let mut d = c.arg() - base;
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (base + lo - 0.05, base + hi + 0.05)
}

/// Builds an open dyadic rectangle snugly containing the circle arc
/// `[a0, a1]`, padded by `pad`.
fn arc_box(a0: f64, a1: f64, pad: f64) -> Option<QRect> {
    let n = 48;
    let mut xl = f64::INFINITY;
    let mut xh = f64::NEG_INFINITY;
    let mut yl = f64::INFINITY;
    let mut yh = f64::NEG_INFINITY;
    for i in 0..=n {
        let t = a0 + (a1 - a0) * i as f64 / n as f64;
        xl = xl.min(t.cos());
        xh = xh.max(t.cos());
        yl = yl.min(t.sin());
        yh = yh.max(t.sin());
    }
    QRect::new(
        dyadic(xl - pad, false),
        dyadic(xh + pad, true),
        dyadic(yl - pad, false),
        dyadic(yh + pad, true),
        RectKind::Open,
    )
    .ok()
}

/// Finite open-rectangle cover of the unit circle with per-rectangle
/// sampled oscillation below `2^-k`; coverage is verified exactly.
pub fn oscillation_cover(cm: &ConformalMap, k: u32) -> Result<Vec<QRect>, CoverError> {
    let thresh = 2f64.powi(-(k as i32));
    let mut rects: Vec<QRect> = Vec::new();
    let mut t = 0.0f64;
    let mut width = PI / 4.0;
    let min_width = 1e-5;
    while t < 2.0 * PI {
        let mut accepted = None;
        while width >= min_width {
            let a0 = t - 0.25 * width;
            let a1 = t + width;
            let pad = (width * 0.05).max(1e-6);
            if let Some(rect) = arc_box(a0, a1, pad) {
                if let Some(osc) = rect_oscillation(cm, &rect) {
                    if osc < 0.96 * thresh {
                        accepted = Some((rect, a1));
                        break;
                    }
                }
            }
            width *= 0.5;
        }
        let Some((rect, a1)) = accepted else {
            return Err(CoverError::ArcStuck { angle: t, k });
        };
        rects.push(rect);
        t = a1;
        width = (width * 2.0).min(PI / 4.0);
    }
    match covers_circle(&rects) {
        Ok(()) => Ok(rects),
        Err(w) => {
            let (x, y) = w.approx();
            Err(CoverError::CoverageGap(x, y))
        }
    }
}

/// Strong rectangle-in/rectangle-out evaluation: if `r` fits inside an
/// element of the finest cover possible, returns a dyadic rectangle that
/// contains every sampled value of `phi` on `r ∩ closed disk` plus error
/// bars (side at most `2·2^-k` by the cover's oscillation property);
/// declines with `None` when `r` fits no cover element.
pub fn strong_eval(cm: &ConformalMap, fam: &CoverFamily, r: &QRect) -> Option<QRect> {
    let fits = fam
        .covers
        .iter()
        .rev()
        .find(|(_, rects)| rects.iter().any(|e| r.subset_of(e)))?;
    let k = *fits.0;
    let xl = rat_to_f64(&r.x_lo);
    let xh = rat_to_f64(&r.x_hi);
    let yl = rat_to_f64(&r.y_lo);
    let yh = rat_to_f64(&r.y_hi);
    let mut vals: Vec<(Complex64, f64)> = Vec::new();
    let n = 12;
    for i in 0..=n {
        for j in 0..=n {
            let z = Complex64::new(
                xl + (xh - xl) * i as f64 / n as f64,
                yl + (yh - yl) * j as f64 / n as f64,
            );
            if z.norm() <= 1.0 - 1e-9 {
                vals.push((cm.forward(z), cm.eps_map));
            }
        }
    }
    let (c_lo, c_hi) = angular_window(xl, xh, yl, yh);
    for i in 0..=64 {
        let t = c_lo + (c_hi - c_lo) * i as f64 / 64.0;
        let p = Complex64::from_polar(1.0, t);
        if p.re >= xl && p.re <= xh && p.im >= yl && p.im <= yh {
            let v1 = cm.forward(p * (1.0 - 2f64.powi(-11)));
            let v2 = cm.forward(p * (1.0 - 2f64.powi(-15)));
            let err = 2.0 * (v2 - v1).norm() + cm.eps_map;
            vals.push((v2, err));
        }
    }
    if vals.is_empty() {
        return None;
    }
    let mut bxl = f64::INFINITY;
    let mut bxh = f64::NEG_INFINITY;
    let mut byl = f64::INFINITY;
    let mut byh = f64::NEG_INFINITY;
    // Tightest certain values: the largest lower bound and smallest upper
    // bound over the samples.  These anchor the oscillation padding below.
    let mut mxl = f64::NEG_INFINITY;
    let mut mxh = f64::INFINITY;
    let mut myl = f64::NEG_INFINITY;
    let mut myh = f64::INFINITY;
    for &(v, e) in &vals {
        bxl = bxl.min(v.re - e);
        bxh = bxh.max(v.re + e);
        byl = byl.min(v.im - e);
        byh = byh.max(v.im + e);
        mxl = mxl.max(v.re - e);
        mxh = mxh.min(v.re + e);
        myl = myl.max(v.im - e);
        myh = myh.min(v.im + e);
    }
    // The cover element guarantees image oscillation below 2^-k, but the
    // sample grid need not attain the extremes.  Pad the sample hull so the
    // result certainly contains every image value: any value lies within
    // the oscillation bound of the best certain sample value.
    let osc = 2f64.powi(-(k as i32));
    let slack = 2.0 * cm.eps_map;
    let oxl = bxl.min(mxl - osc) - slack;
    let oxh = bxh.max(mxh + osc) + slack;
    let oyl = byl.min(myl - osc) - slack;
    let oyh = byh.max(myh + osc) + slack;
    let out = QRect::new(
        dyadic(oxl, false),
        dyadic(oxh, true),
        dyadic(oyl, false),
        dyadic(oyh, true),
        RectKind::Open,
    )
    .ok()?;
    let emax = vals.iter().map(|&(_, e)| e).fold(0.0f64, f64::max);
    let side = 2.0 * osc + 2.0 * emax + 4.0 * slack + 1e-6;
    debug_assert!(
        rat_to_f64(&(&out.x_hi - &out.x_lo)) <= side
            && rat_to_f64(&(&out.y_hi - &out.y_lo)) <= side,
        "strong_eval output exceeds the cover's oscillation budget"
    );
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;
    use crate::geom::rat;

    fn square_map() -> ConformalMap {
        ConformalMap::solve(&DomainModel::square_fixture(), 1e-6).unwrap()
    }

    #[test]
    fn square_k1_cover_small_and_exactly_covering() {
        let cm = square_map();
        let cover = oscillation_cover(&cm, 1).expect("k=1 cover");
        assert!(cover.len() <= 32, "cover size {}", cover.len());
        assert!(covers_circle(&cover).is_ok());
        for r in &cover {
            let osc = rect_oscillation(&cm, r).expect("rect meets circle");
            assert!(osc < 0.5, "oscillation {osc}");
        }
    }

    #[test]
    fn covers_grow_with_k() {
        let cm = square_map();
        let c1 = oscillation_cover(&cm, 1).unwrap();
        let c2 = oscillation_cover(&cm, 2).unwrap();
        let c3 = oscillation_cover(&cm, 3).unwrap();
        assert!(c1.len() <= c2.len());
        assert!(c2.len() <= c3.len());
    }

    #[test]
    fn strong_eval_contract() {
        let cm = square_map();
        let fam = CoverFamily::build(&cm, 3).unwrap();
        // A tiny rectangle around angle 0.
        let r = QRect::open(rat(63, 64), rat(65, 64), rat(-1, 64), rat(1, 64)).unwrap();
        let out = strong_eval(&cm, &fam, &r).expect("fits in a cover element");
        let side = rat_to_f64(&(&out.x_hi - &out.x_lo)).max(rat_to_f64(&(&out.y_hi - &out.y_lo)));
        // The rectangle pokes radially past the snug k = 3 arc boxes, so it
        // lands in a k = 2 element; the padded output side is then at most
        // twice that oscillation bound.
        assert!(side <= 2.0 * 2f64.powi(-2) + 1e-2, "side {side}");
        // The whole-circle rectangle is declined.
        let big = QRect::open(rat(-2, 1), rat(2, 1), rat(-2, 1), rat(2, 1)).unwrap();
        assert!(strong_eval(&cm, &fam, &big).is_none());
    }
}
