//! Exact arithmetic on unit-circle points with quadratic-irrational
//! coordinates, used to verify that a family of open rational rectangles
//! covers the whole circle.
//!
//! Every intersection of the circle with a rational rectangle edge has one
//! rational coordinate and one of the form `±sqrt(q)` with `q` rational.
//! Comparisons against rational bounds therefore reduce to exact sign and
//! square comparisons, with no floating point involved.

use num_traits::Zero;
use std::cmp::Ordering;

use crate::geom::{QRect, Rat};

/// An exact number that is either rational or `±sqrt(q)` for rational
/// `q >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgNum {
    Rational(Rat),
    /// `value = sqrt(sq)` when `neg` is false, `-sqrt(sq)` otherwise.
    Root {
        neg: bool,
        sq: Rat,
    },
}

impl AlgNum {
    fn sign(&self) -> i8 {
        match self {
            AlgNum::Rational(r) => {
                if r.is_zero() {
                    0
                } else if *r > Rat::zero() {
                    1
                } else {
                    -1
                }
            }
            AlgNum::Root { neg, sq } => {
                if sq.is_zero() {
                    0
                } else if *neg {
                    -1
                } else {
                    1
                }
            }
        }
    }

    fn square(&self) -> Rat {
        match self {
            AlgNum::Rational(r) => r * r,
            AlgNum::Root { sq, .. } => sq.clone(),
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        let s = self.sign();
        let rs = if r.is_zero() {
            0i8
        } else if *r > Rat::zero() {
            1
        } else {
            -1
        };
        match s.cmp(&rs) {
            Ordering::Less => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
            Ordering::Equal => {
                // Same strict sign (or both zero).
                if s == 0 {
                    Ordering::Equal
                } else if s > 0 {
                    self.square().cmp(&(r * r))
                } else {
                    (r * r).cmp(&self.square())
                }
            }
        }
    }
}

/// A point on the unit circle with exact coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePoint {
    pub x: AlgNum,
    pub y: AlgNum,
}

impl CirclePoint {
    /// Strict interior membership in a rational rectangle, decided
    /// exactly (the rectangle's own kind is ignored: coverage needs open
    /// containment).
    pub fn in_open_rect(&self, r: &QRect) -> bool {
        self.x.cmp_rat(&r.x_lo) == Ordering::Greater
            && self.x.cmp_rat(&r.x_hi) == Ordering::Less
            && self.y.cmp_rat(&r.y_lo) == Ordering::Greater
            && self.y.cmp_rat(&r.y_hi) == Ordering::Less
    }

    pub fn approx(&self) -> (f64, f64) {
        let f = |a: &AlgNum| match a {
            AlgNum::Rational(r) => crate::geom::rat_to_f64(r),
            AlgNum::Root { neg, sq } => {
                let v = crate::geom::rat_to_f64(sq).sqrt();
                if *neg {
                    -v
                } else {
                    v
                }
            }
        };
        (f(&self.x), f(&self.y))
    }
}

/// All intersection points of the unit circle with the edge lines of `r`,
/// restricted to the closed edge extents.
pub fn circle_rect_crossings(r: &QRect) -> Vec<CirclePoint> {
    let one = Rat::from_integer(1.into());
    let mut out = Vec::new();
    // Vertical edges x = c: y = ±sqrt(1 - c^2) within [y_lo, y_hi].
    for c in [&r.x_lo, &r.x_hi] {
        let rem = &one - c * c;
        if rem >= Rat::zero() {
            for neg in [false, true] {
                let y = AlgNum::Root {
                    neg,
                    sq: rem.clone(),
                };
                if y.cmp_rat(&r.y_lo) != Ordering::Less && y.cmp_rat(&r.y_hi) != Ordering::Greater {
                    out.push(CirclePoint {
                        x: AlgNum::Rational(c.clone()),
                        y,
                    });
                }
            }
        }
    }
    // Horizontal edges y = c: x = ±sqrt(1 - c^2) within [x_lo, x_hi].
    for c in [&r.y_lo, &r.y_hi] {
        let rem = &one - c * c;
        if rem >= Rat::zero() {
            for neg in [false, true] {
                let x = AlgNum::Root {
                    neg,
                    sq: rem.clone(),
                };
                if x.cmp_rat(&r.x_lo) != Ordering::Less && x.cmp_rat(&r.x_hi) != Ordering::Greater {
                    out.push(CirclePoint {
                        x,
                        y: AlgNum::Rational(c.clone()),
                    });
                }
            }
        }
    }
    out
}

/// Exact verification that the open interiors of `rects` cover the unit
/// circle.  On failure, returns an uncovered circle point as witness.
///
/// The covered part of the circle is a finite union of open arcs whose
/// endpoint set is contained in the edge-crossing points of the
/// rectangles; if the uncovered set is nonempty, it contains one of these
/// crossing points (or the circle meets no rectangle edge at all, in
/// which case a single probe point decides everything).
pub fn covers_circle(rects: &[QRect]) -> Result<(), CirclePoint> {
    let mut critical = Vec::new();
    for r in rects {
        critical.extend(circle_rect_crossings(r));
    }
    if critical.is_empty() {
        let probe = CirclePoint {
            x: AlgNum::Rational(Rat::from_integer(1.into())),
            y: AlgNum::Rational(Rat::zero()),
        };
        return if rects.iter().any(|r| probe.in_open_rect(r)) {
            Ok(())
        } else {
            Err(probe)
        };
    }
    for p in critical {
        if !rects.iter().any(|r| p.in_open_rect(r)) {
            return Err(p);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat;

    fn rect(xl: (i64, i64), xh: (i64, i64), yl: (i64, i64), yh: (i64, i64)) -> QRect {
        QRect::open(
            rat(xl.0, xl.1),
            rat(xh.0, xh.1),
            rat(yl.0, yl.1),
            rat(yh.0, yh.1),
        )
        .unwrap()
    }

    #[test]
    fn algnum_comparisons() {
        // sqrt(2) vs 3/2: 2 > 9/4 is false, so sqrt(2) < 3/2.
        let s2 = AlgNum::Root {
            neg: false,
            sq: rat(2, 1),
        };
        assert_eq!(s2.cmp_rat(&rat(3, 2)), Ordering::Less);
        assert_eq!(s2.cmp_rat(&rat(7, 5)), Ordering::Greater);
        assert_eq!(s2.cmp_rat(&rat(-1, 1)), Ordering::Greater);
        let neg = AlgNum::Root {
            neg: true,
            sq: rat(1, 4),
        };
        assert_eq!(neg.cmp_rat(&rat(-1, 2)), Ordering::Equal);
        assert_eq!(neg.cmp_rat(&rat(-3, 4)), Ordering::Greater);
        assert_eq!(neg.cmp_rat(&rat(0, 1)), Ordering::Less);
        let zero_root = AlgNum::Root {
            neg: true,
            sq: rat(0, 1),
        };
        assert_eq!(zero_root.cmp_rat(&rat(0, 1)), Ordering::Equal);
    }

    #[test]
    fn crossing_points_of_a_quadrant_box() {
        // [1/2, 2] x [0, 2] cuts the circle at (1/2, sqrt(3)/2) and (1, 0).
        let r = rect((1, 2), (2, 1), (0, 1), (2, 1));
        let pts = circle_rect_crossings(&r);
        assert_eq!(pts.len(), 2, "{pts:?}");
        let approx: Vec<(f64, f64)> = pts.iter().map(|p| p.approx()).collect();
        assert!(approx
            .iter()
            .any(|&(x, y)| (x - 0.5).abs() < 1e-12 && (y - 0.75f64.sqrt()).abs() < 1e-12));
        assert!(approx
            .iter()
            .any(|&(x, y)| (x - 1.0).abs() < 1e-12 && y.abs() < 1e-12));
    }

    #[test]
    fn four_overlapping_boxes_cover() {
        // Four unit-ish boxes around the quadrant arcs, mutually
        // overlapping across the axes.
        let boxes = vec![
            rect((-1, 8), (9, 8), (-1, 8), (9, 8)), // right-top
            rect((-9, 8), (1, 8), (-1, 8), (9, 8)), // left-top
            rect((-9, 8), (1, 8), (-9, 8), (1, 8)), // left-bottom
            rect((-1, 8), (9, 8), (-9, 8), (1, 8)), // right-bottom
        ];
        assert!(covers_circle(&boxes).is_ok());
    }

    #[test]
    fn gap_is_detected_with_witness() {
        // Remove one quadrant box: points near angle 45 degrees escape.
        let boxes = vec![
            rect((-9, 8), (1, 8), (-1, 8), (9, 8)),
            rect((-9, 8), (1, 8), (-9, 8), (1, 8)),
            rect((-1, 8), (9, 8), (-9, 8), (1, 8)),
        ];
        let w = covers_circle(&boxes).unwrap_err();
        let (x, y) = w.approx();
        assert!((x * x + y * y - 1.0).abs() < 1e-9);
        assert!(
            x > 0.0 && y > 0.0,
            "witness in the uncovered quadrant: ({x}, {y})"
        );
    }

    #[test]
    fn giant_box_covers_without_crossings() {
        let boxes = vec![rect((-2, 1), (2, 1), (-2, 1), (2, 1))];
        assert!(covers_circle(&boxes).is_ok());
        let boxes = vec![rect((5, 1), (6, 1), (5, 1), (6, 1))];
        assert!(covers_circle(&boxes).is_err());
    }

    #[test]
    fn tangent_box_edge_counts_as_crossing() {
        // Edge x = 1 tangent at (1, 0); a box whose edge is tangent but
        // whose interior misses the circle does not cover by itself.
        let tangent = rect((1, 1), (2, 1), (-1, 1), (1, 1));
        let pts = circle_rect_crossings(&tangent);
        assert!(pts.iter().any(|p| p.approx() == (1.0, 0.0)));
        assert!(covers_circle(&[tangent]).is_err());
    }
}
