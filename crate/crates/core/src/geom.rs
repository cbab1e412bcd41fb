//! Exact rational planar primitives.
//!
//! Everything in this module is exact: points are Gaussian rationals,
//! rectangles carry open/closed semantics, and comparisons against
//! irrational bounds are done by squaring and cross-multiplication.
//! Diameters and distances are carried squared so that all values stay
//! in the rational field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Rat = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i32) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("taxicab arc endpoints coincide")]
    EqualPoints,
    #[error("degenerate rectangle: {0}")]
    DegenerateRect(String),
    #[error("empty point list")]
    EmptyPointList,
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPoint {
    pub re: Rat,
    pub im: Rat,
}

impl QPoint {
    pub fn new(re: Rat, im: Rat) -> Self {
        QPoint { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        QPoint::new(rat(re, 1), rat(im, 1))
    }

    pub fn dist_sq(&self, other: &QPoint) -> Rat {
        let dx = &self.re - &other.re;
        let dy = &self.im - &other.im;
        &dx * &dx + &dy * &dy
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Good enough for the coordinate ranges used here.
    let n = r.numer();
    let d = r.denom();
    match (n.to_string().parse::<f64>(), d.to_string().parse::<f64>()) {
        (Ok(a), Ok(b)) => a / b,
        _ => f64::NAN,
    }
}

/// A closed line segment `[a, b]`; `a = b` is permitted and denotes the
/// singleton set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub a: QPoint,
    pub b: QPoint,
}

impl Segment {
    pub fn new(a: QPoint, b: QPoint) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn length_sq(&self) -> Rat {
        self.a.dist_sq(&self.b)
    }

    /// Exact point-on-segment test.
    pub fn contains(&self, p: &QPoint) -> bool {
        let cross = (&self.b.re - &self.a.re) * (&p.im - &self.a.im)
            - (&self.b.im - &self.a.im) * (&p.re - &self.a.re);
        if !cross.is_zero() {
            return false;
        }
        let dot = (&p.re - &self.a.re) * (&self.b.re - &self.a.re)
            + (&p.im - &self.a.im) * (&self.b.im - &self.a.im);
        if dot.is_negative() {
            return false;
        }
        dot <= self.length_sq()
    }

    /// Point at parameter `t` along the segment (t in [0,1] for points on it).
    pub fn at(&self, t: &Rat) -> QPoint {
        QPoint::new(
            &self.a.re + t * (&self.b.re - &self.a.re),
            &self.a.im + t * (&self.b.im - &self.a.im),
        )
    }

    /// Closest point of the segment to `p` (clamped orthogonal projection).
    pub fn closest_point(&self, p: &QPoint) -> QPoint {
        let len2 = self.length_sq();
        if len2.is_zero() {
            return self.a.clone();
        }
        let mut t = ((&p.re - &self.a.re) * (&self.b.re - &self.a.re)
            + (&p.im - &self.a.im) * (&self.b.im - &self.a.im))
            / len2;
        if t.is_negative() {
            t = Rat::zero();
        } else if t > Rat::one() {
            t = Rat::one();
        }
        self.at(&t)
    }

    pub fn dist_sq_to_point(&self, p: &QPoint) -> Rat {
        self.closest_point(p).dist_sq(p)
    }

    pub fn shares_endpoint(&self, other: &Segment) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }
}

/// Orientation sign of the triangle (a, b, c): positive for counterclockwise.
pub fn orient(a: &QPoint, b: &QPoint, c: &QPoint) -> i8 {
    let v = (&b.re - &a.re) * (&c.im - &a.im) - (&b.im - &a.im) * (&c.re - &a.re);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Whether two closed segments share any point.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    if s.is_degenerate() {
        return t.contains(&s.a);
    }
    if t.is_degenerate() {
        return s.contains(&t.a);
    }
    let o1 = orient(&s.a, &s.b, &t.a);
    let o2 = orient(&s.a, &s.b, &t.b);
    let o3 = orient(&t.a, &t.b, &s.a);
    let o4 = orient(&t.a, &t.b, &s.b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    // Collinear / endpoint-touching cases.
    (o1 == 0 && s.contains(&t.a))
        || (o2 == 0 && s.contains(&t.b))
        || (o3 == 0 && t.contains(&s.a))
        || (o4 == 0 && t.contains(&s.b))
}

/// Squared distance between two closed segments.
pub fn seg_seg_dist_sq(s: &Segment, t: &Segment) -> Rat {
    if segments_intersect(s, t) {
        return Rat::zero();
    }
    let mut best = s.dist_sq_to_point(&t.a);
    for d in [
        s.dist_sq_to_point(&t.b),
        t.dist_sq_to_point(&s.a),
        t.dist_sq_to_point(&s.b),
    ] {
        if d < best {
            best = d;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RectKind {
    Open,
    Closed,
}

/// An axis-aligned rational rectangle with open or closed semantics.
/// Degenerate rectangles are rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRect {
    pub x_lo: Rat,
    pub x_hi: Rat,
    pub y_lo: Rat,
    pub y_hi: Rat,
    pub kind: RectKind,
}

impl QRect {
    pub fn new(
        x_lo: Rat,
        x_hi: Rat,
        y_lo: Rat,
        y_hi: Rat,
        kind: RectKind,
    ) -> Result<Self, GeomError> {
        if x_lo >= x_hi || y_lo >= y_hi {
            return Err(GeomError::DegenerateRect(format!(
                "[{}, {}] x [{}, {}]",
                x_lo, x_hi, y_lo, y_hi
            )));
        }
        Ok(QRect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
            kind,
        })
    }

    pub fn open(x_lo: Rat, x_hi: Rat, y_lo: Rat, y_hi: Rat) -> Result<Self, GeomError> {
        QRect::new(x_lo, x_hi, y_lo, y_hi, RectKind::Open)
    }

    pub fn closed(x_lo: Rat, x_hi: Rat, y_lo: Rat, y_hi: Rat) -> Result<Self, GeomError> {
        QRect::new(x_lo, x_hi, y_lo, y_hi, RectKind::Closed)
    }

    pub fn with_kind(&self, kind: RectKind) -> QRect {
        QRect {
            kind,
            ..self.clone()
        }
    }

    pub fn closure(&self) -> QRect {
        self.with_kind(RectKind::Closed)
    }

    pub fn interior(&self) -> QRect {
        self.with_kind(RectKind::Open)
    }

    pub fn contains_point(&self, p: &QPoint) -> bool {
        match self.kind {
            RectKind::Open => {
                p.re > self.x_lo && p.re < self.x_hi && p.im > self.y_lo && p.im < self.y_hi
            }
            RectKind::Closed => {
                p.re >= self.x_lo && p.re <= self.x_hi && p.im >= self.y_lo && p.im <= self.y_hi
            }
        }
    }

    pub fn corners(&self) -> [QPoint; 4] {
        [
            QPoint::new(self.x_lo.clone(), self.y_lo.clone()),
            QPoint::new(self.x_hi.clone(), self.y_lo.clone()),
            QPoint::new(self.x_hi.clone(), self.y_hi.clone()),
            QPoint::new(self.x_lo.clone(), self.y_hi.clone()),
        ]
    }

    pub fn center(&self) -> QPoint {
        let two = rat(2, 1);
        QPoint::new(
            (&self.x_lo + &self.x_hi) / &two,
            (&self.y_lo + &self.y_hi) / &two,
        )
    }

    /// Max squared distance between any two points of the closure.
    pub fn diam_sq(&self) -> Rat {
        let dx = &self.x_hi - &self.x_lo;
        let dy = &self.y_hi - &self.y_lo;
        &dx * &dx + &dy * &dy
    }

    /// Whether this rectangle and `other` share a point, each with its own
    /// open/closed semantics.
    pub fn intersects(&self, other: &QRect) -> bool {
        let strict = self.kind == RectKind::Open || other.kind == RectKind::Open;
        let x_ok = if strict {
            self.x_lo < other.x_hi && other.x_lo < self.x_hi
        } else {
            self.x_lo <= other.x_hi && other.x_lo <= self.x_hi
        };
        let y_ok = if strict {
            self.y_lo < other.y_hi && other.y_lo < self.y_hi
        } else {
            self.y_lo <= other.y_hi && other.y_lo <= self.y_hi
        };
        x_ok && y_ok
    }

    /// Whether `self` is a subset of `other` (as point sets, honoring kinds).
    pub fn subset_of(&self, other: &QRect) -> bool {
        let strict = self.kind == RectKind::Closed && other.kind == RectKind::Open;
        if strict {
            self.x_lo > other.x_lo
                && self.x_hi < other.x_hi
                && self.y_lo > other.y_lo
                && self.y_hi < other.y_hi
        } else {
            self.x_lo >= other.x_lo
                && self.x_hi <= other.x_hi
                && self.y_lo >= other.y_lo
                && self.y_hi <= other.y_hi
        }
    }
}

/// One- or two-leg axis-aligned arc between two points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxicabArc {
    pub legs: Vec<Segment>,
}

impl TaxicabArc {
    pub fn endpoints(&self) -> (&QPoint, &QPoint) {
        let first = &self.legs[0];
        let last = &self.legs[self.legs.len() - 1];
        (&first.a, &last.b)
    }

    /// Vertex chain of the arc (2 or 3 points).
    pub fn vertices(&self) -> Vec<QPoint> {
        let mut v = vec![self.legs[0].a.clone()];
        for leg in &self.legs {
            v.push(leg.b.clone());
        }
        v
    }
}

/// The one or two taxicab arcs from `z1` to `z2`.
///
/// When the points share a coordinate the two candidate arcs collapse to a
/// single straight segment, returned once.
pub fn taxicab_arcs(z1: &QPoint, z2: &QPoint) -> Result<Vec<TaxicabArc>, GeomError> {
    if z1 == z2 {
        return Err(GeomError::EqualPoints);
    }
    if z1.re == z2.re || z1.im == z2.im {
        return Ok(vec![TaxicabArc {
            legs: vec![Segment::new(z1.clone(), z2.clone())],
        }]);
    }
    let via_a = QPoint::new(z1.re.clone(), z2.im.clone());
    let via_b = QPoint::new(z2.re.clone(), z1.im.clone());
    Ok(vec![
        TaxicabArc {
            legs: vec![
                Segment::new(z1.clone(), via_a.clone()),
                Segment::new(via_a, z2.clone()),
            ],
        },
        TaxicabArc {
            legs: vec![
                Segment::new(z1.clone(), via_b.clone()),
                Segment::new(via_b, z2.clone()),
            ],
        },
    ])
}

/// Exact test: does segment `s` contain a point of rectangle `r`?
pub fn seg_meets_rect(s: &Segment, r: &QRect) -> bool {
    // Clip the parameter interval [0,1] against the four half-plane
    // constraints; each bound carries a strictness flag.
    let strict = r.kind == RectKind::Open;
    let mut lo = Rat::zero();
    let mut lo_strict = false;
    let mut hi = Rat::one();
    let mut hi_strict = false;

    let mut clip = |start: &Rat, delta: Rat, bound_lo: &Rat, bound_hi: &Rat| -> bool {
        if delta.is_zero() {
            if strict {
                return start > bound_lo && start < bound_hi;
            }
            return start >= bound_lo && start <= bound_hi;
        }
        // start + t*delta in (bound_lo, bound_hi)
        let t1 = (bound_lo - start) / &delta;
        let t2 = (bound_hi - start) / &delta;
        let (t_lo, t_hi) = if delta.is_positive() {
            (t1, t2)
        } else {
            (t2, t1)
        };
        if t_lo > lo || (t_lo == lo && strict) {
            lo = t_lo;
            lo_strict = strict;
        }
        if t_hi < hi || (t_hi == hi && strict) {
            hi = t_hi;
            hi_strict = strict;
        }
        true
    };

    let dx = &s.b.re - &s.a.re;
    let dy = &s.b.im - &s.a.im;
    if !clip(&s.a.re, dx, &r.x_lo, &r.x_hi) {
        return false;
    }
    if !clip(&s.a.im, dy, &r.y_lo, &r.y_hi) {
        return false;
    }
    if lo < hi {
        true
    } else {
        lo == hi && !lo_strict && !hi_strict
    }
}

/// Exact squared diameter of a finite point set: the max of |p - q|^2 over
/// vertex pairs. For piecewise-linear sets the diameter is attained at
/// vertices, so this is the exact squared diameter of the polyline hull.
pub fn polyline_diameter_sq(pts: &[QPoint]) -> Result<Rat, GeomError> {
    if pts.is_empty() {
        return Err(GeomError::EmptyPointList);
    }
    let mut best = Rat::zero();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = pts[i].dist_sq(&pts[j]);
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Sorted parameters `t` in [0, 1] where `seg.at(t)` meets some segment of
/// `obstacles`. Transversal crossings contribute the crossing parameter;
/// collinear overlaps contribute both endpoints of the shared piece, so
/// between two consecutive returned parameters the membership pattern is
/// constant on the open interval.
pub fn seg_hit_params(seg: &Segment, obstacles: &[Segment]) -> Vec<Rat> {
    let d1 = (&seg.b.re - &seg.a.re, &seg.b.im - &seg.a.im);
    let len2 = seg.length_sq();
    let mut out: Vec<Rat> = Vec::new();
    let mut push = |t: Rat| {
        if !t.is_negative() && t <= Rat::one() {
            out.push(t);
        }
    };
    for obs in obstacles {
        let d2 = (&obs.b.re - &obs.a.re, &obs.b.im - &obs.a.im);
        let w = (&obs.a.re - &seg.a.re, &obs.a.im - &seg.a.im);
        let cross = &d1.0 * &d2.1 - &d1.1 * &d2.0;
        if !cross.is_zero() {
            let t = (&w.0 * &d2.1 - &w.1 * &d2.0) / &cross;
            let u = (&w.0 * &d1.1 - &w.1 * &d1.0) / &cross;
            if !u.is_negative() && u <= Rat::one() {
                push(t);
            }
        } else {
            // Parallel; collinear iff w is also parallel to d1.
            let coll = &w.0 * &d1.1 - &w.1 * &d1.0;
            if coll.is_zero() && !len2.is_zero() {
                let ta = (&w.0 * &d1.0 + &w.1 * &d1.1) / &len2;
                let tb =
                    ((&obs.b.re - &seg.a.re) * &d1.0 + (&obs.b.im - &seg.a.im) * &d1.1) / &len2;
                let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
                if hi >= Rat::zero() && lo <= Rat::one() {
                    push(lo.max(Rat::zero()));
                    push(hi.min(Rat::one()));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLoc {
    Inside,
    Outside,
    OnBoundary,
}

/// Even-odd classification of `p` against a closed polygonal curve given as
/// a segment list. Doubled (slit) segments contribute an even crossing count
/// and therefore do not change parity.
pub fn point_in_closed_curve(segs: &[Segment], p: &QPoint) -> PointLoc {
    for s in segs {
        if s.contains(p) {
            return PointLoc::OnBoundary;
        }
    }
    let mut inside = false;
    for s in segs {
        let (a, b) = (&s.a, &s.b);
        let a_above = a.im > p.im;
        let b_above = b.im > p.im;
        if a_above == b_above {
            continue;
        }
        // x-coordinate of the crossing of the horizontal line through p.
        let t = (&p.im - &a.im) / (&b.im - &a.im);
        let x = &a.re + &t * (&b.re - &a.re);
        if x > p.re {
            inside = !inside;
        }
    }
    if inside {
        PointLoc::Inside
    } else {
        PointLoc::Outside
    }
}

/// Smallest integer `m` with `2^-m < d`, given `d_sq = d^2 > 0`.
pub fn min_exp_below(d_sq: &Rat) -> i32 {
    assert!(
        d_sq.is_positive(),
        "min_exp_below needs a positive distance"
    );
    // Find m with 2^(-2m) < d_sq, minimal.
    let mut m: i32 = 0;
    if pow2(0) < *d_sq {
        // d > 1: walk down while still below.
        while pow2(-2 * (m - 1)) < *d_sq {
            m -= 1;
            if m < -64 {
                break;
            }
        }
        return m;
    }
    while pow2(-2 * m) >= *d_sq {
        m += 1;
        assert!(m < 4096, "distance too small");
    }
    m
}
