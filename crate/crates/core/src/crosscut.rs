//! Wads, chains of wads, crosscuts, and acceptability.
//!
//! A wad is a chained union of open rational boxes; an approximate
//! crosscut is a simple chain of wads whose interior wads close up inside
//! D and whose end wads reach the boundary. Crosscuts themselves are
//! rational polylines through D with non-vertex boundary endpoints. All
//! predicates here are exact; the only numeric input is the lower bound
//! `rho_lb` handed to the star filter by the conformal layer.

use crate::domain::DomainModel;
use crate::effective::{closed_rect_in_d, rect_avoids_rest, rect_meets_sigma};
use crate::geom::{
    point_in_closed_curve, polyline_diameter_sq, rat, seg_hit_params, taxicab_arcs, GeomError,
    PointLoc, QPoint, QRect, Rat, Segment, TaxicabArc,
};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrosscutError {
    #[error("point {0} is not on the boundary")]
    OffBoundary(QPoint),
    #[error("point {0} is a vertex")]
    VertexPoint(QPoint),
    #[error("points coincide")]
    EqualPoints,
    #[error("constituent index {0} out of range")]
    BadIndex(usize),
    #[error("wad has no boxes")]
    EmptyWad,
    #[error("chain has no wads")]
    EmptyChain,
    #[error("crosscut polyline needs at least two points")]
    TooShort,
    #[error("crosscut interior touches the boundary at segment {0}")]
    InteriorOnBoundary(usize),
    #[error("crosscut interior leaves the domain at segment {0}")]
    InteriorOutside(usize),
    #[error("crosscut polyline is not simple")]
    NotSimple,
    #[error("arc endpoints do not match the crosscut endpoints")]
    EndpointMismatch,
    #[error("arc contains a point of the domain")]
    ArcMeetsDomain,
    #[error("arc crosses the crosscut away from the endpoints")]
    ArcCrossesCut,
    #[error("both sides classify the same; curve is degenerate")]
    DegenerateSides,
    #[error("rho lower bound must be positive")]
    NonPositiveRho,
}

/// Which clause of the chain definition a candidate violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainViolation {
    /// A wad is empty or its boxes do not form a chain.
    WadNotChained(usize),
    /// Two non-consecutive wads intersect, or consecutive ones do not.
    NotSimple(usize, usize),
    /// The closure of an interior wad leaves D.
    ClosureEscapesDomain(usize),
    /// An end wad does not reach the boundary.
    EndMissesBoundary(usize),
}

/// A union of a chain of open rational boxes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wad {
    pub boxes: Vec<QRect>,
}

impl Wad {
    pub fn new(boxes: Vec<QRect>) -> Result<Self, CrosscutError> {
        let wad = Wad { boxes };
        wad.check_chained()?;
        Ok(wad)
    }

    fn check_chained(&self) -> Result<(), CrosscutError> {
        if self.boxes.is_empty() {
            return Err(CrosscutError::EmptyWad);
        }
        for w in self.boxes.windows(2) {
            if !w[0].intersects(&w[1]) {
                return Err(CrosscutError::EmptyWad);
            }
        }
        Ok(())
    }

    pub fn contains_point(&self, p: &QPoint) -> bool {
        self.boxes.iter().any(|b| b.contains_point(p))
    }

    pub fn meets(&self, other: &Wad) -> bool {
        self.boxes
            .iter()
            .any(|a| other.boxes.iter().any(|b| a.intersects(b)))
    }

    /// Exact squared diameter of the closure (attained at box corners).
    pub fn diam_sq(&self) -> Result<Rat, GeomError> {
        polyline_diameter_sq(&self.corner_set())
    }

    fn corner_set(&self) -> Vec<QPoint> {
        self.boxes.iter().flat_map(|b| b.corners()).collect()
    }
}

/// A simple chain of wads, intended to approximate a crosscut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxCrosscut {
    pub wads: Vec<Wad>,
}

impl ApproxCrosscut {
    pub fn new(wads: Vec<Wad>) -> Result<Self, CrosscutError> {
        if wads.is_empty() {
            return Err(CrosscutError::EmptyChain);
        }
        Ok(ApproxCrosscut { wads })
    }

    /// Union of all box corners across wads.
    fn corner_set(&self) -> Vec<QPoint> {
        self.wads.iter().flat_map(|w| w.corner_set()).collect()
    }

    /// Squared diameter of the closure of the whole chain.
    pub fn diam_sq(&self) -> Result<Rat, GeomError> {
        polyline_diameter_sq(&self.corner_set())
    }
}

/// Largest wad diameter, squared: the chain's approximation error.
pub fn error_of(a: &ApproxCrosscut) -> Result<Rat, CrosscutError> {
    let mut best = Rat::zero();
    for w in &a.wads {
        w.check_chained()?;
        let d = w.diam_sq().map_err(|_| CrosscutError::EmptyWad)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// Validate the approximate-crosscut clauses, naming the violated one.
pub fn is_approx_crosscut(dm: &DomainModel, a: &ApproxCrosscut) -> Result<(), ChainViolation> {
    let n = a.wads.len();
    for (i, w) in a.wads.iter().enumerate() {
        if w.check_chained().is_err() {
            return Err(ChainViolation::WadNotChained(i));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let should_meet = j == i + 1;
            if a.wads[i].meets(&a.wads[j]) != should_meet {
                return Err(ChainViolation::NotSimple(i, j));
            }
        }
    }
    for (i, w) in a.wads.iter().enumerate() {
        if i == 0 || i == n - 1 {
            continue;
        }
        for b in &w.boxes {
            if !closed_rect_in_d(dm, &b.closure()) {
                return Err(ChainViolation::ClosureEscapesDomain(i));
            }
        }
    }
    for (which, idx) in [(0usize, 0usize), (1, n - 1)] {
        let wad = &a.wads[idx];
        let touches = wad.boxes.iter().any(|b| {
            dm.boundary_segments
                .iter()
                .any(|s| crate::geom::seg_meets_rect(s, &b.closure()))
        });
        if !touches {
            return Err(ChainViolation::EndMissesBoundary(which));
        }
    }
    Ok(())
}

/// A crosscut: a simple rational polyline through D whose endpoints are
/// non-vertex boundary points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscut {
    pub polyline: Vec<QPoint>,
    /// Constituent indices of the two endpoints.
    pub ends: (usize, usize),
}

impl Crosscut {
    pub fn new(dm: &DomainModel, polyline: Vec<QPoint>) -> Result<Self, CrosscutError> {
        if polyline.len() < 2 {
            return Err(CrosscutError::TooShort);
        }
        let p = &polyline[0];
        let q = polyline.last().unwrap();
        let ends = (end_constituent(dm, p)?, end_constituent(dm, q)?);
        // Interior vertices must be in D; each segment may touch X only at
        // the crosscut endpoints.
        for v in &polyline[1..polyline.len() - 1] {
            if !dm.point_in_d(v) {
                return Err(CrosscutError::InteriorOutside(0));
            }
        }
        let m = polyline.len() - 1;
        for i in 0..m {
            let seg = Segment::new(polyline[i].clone(), polyline[i + 1].clone());
            let hits = seg_hit_params(&seg, &dm.boundary_segments);
            for t in &hits {
                let allowed = (i == 0 && t.is_zero()) || (i == m - 1 && t.is_one());
                if !allowed {
                    return Err(CrosscutError::InteriorOnBoundary(i));
                }
            }
            // No piece of the segment may run along the boundary.
            let mut cuts = hits;
            cuts.insert(0, Rat::zero());
            cuts.push(Rat::one());
            cuts.sort();
            cuts.dedup();
            for w in cuts.windows(2) {
                let mid = seg.at(&((&w[0] + &w[1]) / rat(2, 1)));
                if !dm.point_in_d(&mid) {
                    return Err(CrosscutError::InteriorOutside(i));
                }
            }
        }
        // Simplicity of the polyline itself.
        for i in 0..m {
            for j in (i + 2)..m {
                if i == 0 && j == m - 1 && polyline[0] == polyline[m] {
                    continue;
                }
                let si = Segment::new(polyline[i].clone(), polyline[i + 1].clone());
                let sj = Segment::new(polyline[j].clone(), polyline[j + 1].clone());
                if crate::geom::segments_intersect(&si, &sj) {
                    return Err(CrosscutError::NotSimple);
                }
            }
        }
        Ok(Crosscut { polyline, ends })
    }

    pub fn endpoints(&self) -> (&QPoint, &QPoint) {
        (&self.polyline[0], self.polyline.last().unwrap())
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.polyline
            .windows(2)
            .map(|w| Segment::new(w[0].clone(), w[1].clone()))
            .collect()
    }

    pub fn diam_sq(&self) -> Rat {
        polyline_diameter_sq(&self.polyline).expect("nonempty polyline")
    }
}

fn end_constituent(dm: &DomainModel, p: &QPoint) -> Result<usize, CrosscutError> {
    if dm.is_vertex(p).is_some() {
        return Err(CrosscutError::VertexPoint(p.clone()));
    }
    match dm.constituent_of(p) {
        crate::domain::Location::OnConstituent(k) => Ok(k),
        _ => Err(CrosscutError::OffBoundary(p.clone())),
    }
}

/// Does the chain approximate the crosscut: the polyline must split into
/// consecutive (possibly degenerate) closed pieces with the j-th piece
/// inside wad j, junction points landing in both adjacent wads.
///
/// Decided exactly: refine the polyline at box-edge crossings, so wad
/// membership is constant on each open atom; then sweep a feasible set of
/// current piece indices, filtering by membership and closing upward
/// under hand-offs (a hand-off j -> j+1 may happen at any position that
/// lies in both wads).
pub fn approximates(a: &ApproxCrosscut, c: &Crosscut) -> bool {
    let n = a.wads.len();
    let all_edges: Vec<Segment> = a
        .wads
        .iter()
        .flat_map(|w| &w.boxes)
        .flat_map(|b| {
            let cs = b.corners();
            [
                Segment::new(cs[0].clone(), cs[1].clone()),
                Segment::new(cs[1].clone(), cs[2].clone()),
                Segment::new(cs[2].clone(), cs[3].clone()),
                Segment::new(cs[3].clone(), cs[0].clone()),
            ]
        })
        .collect();
    // Alternating probe sequence: junction points and atom-interior
    // midpoints, each a position where membership must hold.
    let mut probes: Vec<QPoint> = vec![c.polyline[0].clone()];
    for seg in c.segments() {
        let mut cuts = seg_hit_params(&seg, &all_edges);
        cuts.insert(0, Rat::zero());
        cuts.push(Rat::one());
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            if w[0] < w[1] {
                probes.push(seg.at(&((&w[0] + &w[1]) / rat(2, 1))));
            }
            probes.push(seg.at(&w[1]));
        }
    }
    let mut feasible = vec![false; n];
    feasible[0] = true;
    for pos in &probes {
        // The current piece must contain this position.
        for j in 0..n {
            if feasible[j] && !a.wads[j].contains_point(pos) {
                feasible[j] = false;
            }
        }
        // Hand off to later pieces while the position stays covered.
        for j in 0..n - 1 {
            if feasible[j] && a.wads[j + 1].contains_point(pos) {
                feasible[j + 1] = true;
            }
        }
        if feasible.iter().all(|f| !f) {
            return false;
        }
    }
    feasible[n - 1]
}

/// Def-style conservative intersection: the unique constituent the wad
/// meets, provided its closure avoids every vertex and every other
/// constituent.
pub fn conservatively_intersects(dm: &DomainModel, u: &Wad) -> Option<usize> {
    let mut hit: Option<usize> = None;
    for k in 0..dm.constituents.len() {
        let meets = u
            .boxes
            .iter()
            .any(|b| rect_meets_sigma(dm, b, k).unwrap_or(false));
        if meets {
            if hit.is_some() {
                return None;
            }
            hit = Some(k);
        }
    }
    let k = hit?;
    for b in &u.boxes {
        if !rect_avoids_rest(dm, &b.closure(), k).unwrap_or(false) {
            return None;
        }
    }
    Some(k)
}

/// Exact test that a segment contains no point of the open domain D.
pub fn segment_avoids_domain(dm: &DomainModel, seg: &Segment) -> bool {
    let mut cuts = seg_hit_params(seg, &dm.boundary_segments);
    cuts.insert(0, Rat::zero());
    cuts.push(Rat::one());
    cuts.sort();
    cuts.dedup();
    // Breakpoints lie on X (or are the input endpoints); only the open
    // pieces between them can dip into D, and membership is constant there.
    for pair in cuts.windows(2) {
        let mid = seg.at(&((&pair[0] + &pair[1]) / rat(2, 1)));
        if dm.point_in_d(&mid) {
            return false;
        }
    }
    for t in &cuts {
        if dm.point_in_d(&seg.at(t)) {
            return false;
        }
    }
    true
}

/// Whether an arc (as segments) contains no point of D.
pub fn arc_avoids_domain(dm: &DomainModel, arc: &TaxicabArc) -> bool {
    arc.legs.iter().all(|leg| segment_avoids_domain(dm, leg))
}

/// Acceptable placement of two non-vertex boundary points: at least one
/// taxicab arc between them avoids D entirely.
pub fn acceptably_placed_points(
    dm: &DomainModel,
    p: &QPoint,
    q: &QPoint,
) -> Result<bool, CrosscutError> {
    if !dm.on_boundary(p) {
        return Err(CrosscutError::OffBoundary(p.clone()));
    }
    if !dm.on_boundary(q) {
        return Err(CrosscutError::OffBoundary(q.clone()));
    }
    if p == q {
        return Err(CrosscutError::EqualPoints);
    }
    if dm.is_vertex(p).is_some() || dm.is_vertex(q).is_some() {
        return Ok(false);
    }
    let arcs = taxicab_arcs(p, q).expect("distinct points");
    Ok(arcs.iter().any(|arc| arc_avoids_domain(dm, arc)))
}

/// Constituent-level acceptability, decided on representative non-vertex
/// points (placement is invariant across the choice of points).
pub fn acceptably_placed_constituents(
    dm: &DomainModel,
    k1: usize,
    k2: usize,
) -> Result<bool, CrosscutError> {
    let c1 = dm.constituents.get(k1).ok_or(CrosscutError::BadIndex(k1))?;
    let c2 = dm.constituents.get(k2).ok_or(CrosscutError::BadIndex(k2))?;
    let (p, q) = if k1 == k2 {
        (c1.representative(), c1.representative2())
    } else {
        (c1.representative(), c2.representative())
    };
    acceptably_placed_points(dm, &p, &q)
}

/// Exact comparison `(1 + sqrt(2))^2 * d_sq < rho_sq`, i.e.
/// `(3 + 2*sqrt(2)) * d_sq < rho_sq`, via one squaring.
pub fn star_diameter_ok(d_sq: &Rat, rho_sq: &Rat) -> bool {
    let rest = rho_sq - rat(3, 1) * d_sq;
    if !rest.is_positive() {
        return d_sq.is_zero() && rho_sq.is_positive();
    }
    // Need 2*sqrt(2)*d_sq < rest with both sides positive.
    rat(8, 1) * d_sq * d_sq < &rest * &rest
}

/// Whether a single chain passes the star filter against `rho_lb`.
pub fn star_accepts(
    dm: &DomainModel,
    a: &ApproxCrosscut,
    rho_lb: &Rat,
) -> Result<bool, CrosscutError> {
    if !rho_lb.is_positive() {
        return Err(CrosscutError::NonPositiveRho);
    }
    if is_approx_crosscut(dm, a).is_err() {
        return Ok(false);
    }
    let k1 = match conservatively_intersects(dm, &a.wads[0]) {
        Some(k) => k,
        None => return Ok(false),
    };
    let kn = match conservatively_intersects(dm, a.wads.last().unwrap()) {
        Some(k) => k,
        None => return Ok(false),
    };
    if !acceptably_placed_constituents(dm, k1, kn)? {
        return Ok(false);
    }
    let d_sq = a.diam_sq().map_err(|_| CrosscutError::EmptyChain)?;
    Ok(star_diameter_ok(&d_sq, &(rho_lb * rho_lb)))
}

/// Filter a batch of chains through the star criteria.
pub fn star_filter(
    dm: &DomainModel,
    chains: &[ApproxCrosscut],
    rho_lb: &Rat,
) -> Result<Vec<ApproxCrosscut>, CrosscutError> {
    let mut out = Vec::new();
    for a in chains {
        if star_accepts(dm, a, rho_lb)? {
            out.push(a.clone());
        }
    }
    Ok(out)
}

/// Result of the interior-side analysis of a crosscut.
#[derive(Debug, Clone)]
pub struct SideReport {
    pub interior_sample: QPoint,
    pub exterior_sample: QPoint,
    /// True when the interior side is to the left of the polyline's
    /// orientation at the probed segment.
    pub interior_is_left: bool,
}

/// Classify the two sides of `c` against the Jordan curve `c` followed by
/// the reversed arc `tau`; exactly one side must land inside.
pub fn interior_side_check(
    dm: &DomainModel,
    c: &Crosscut,
    tau: &TaxicabArc,
) -> Result<SideReport, CrosscutError> {
    let (p, q) = c.endpoints();
    let (ta, tb) = tau.endpoints();
    let aligned = ta == p && tb == q;
    let reversed = ta == q && tb == p;
    if !aligned && !reversed {
        return Err(CrosscutError::EndpointMismatch);
    }
    if !arc_avoids_domain(dm, tau) {
        return Err(CrosscutError::ArcMeetsDomain);
    }
    // tau may touch the crosscut only at the shared endpoints.
    let cut_segs = c.segments();
    for leg in &tau.legs {
        for s in &cut_segs {
            if crate::geom::segments_intersect(leg, s) {
                let shared_ok = [p, q].iter().any(|e| leg.contains(e) && s.contains(e));
                let mid = leg.at(&rat(1, 2));
                if !shared_ok || s.contains(&mid) || leg.contains(&s.at(&rat(1, 2))) {
                    return Err(CrosscutError::ArcCrossesCut);
                }
            }
        }
    }
    // Close the curve: crosscut forward, arc back.
    let mut jordan = cut_segs.clone();
    let legs: Vec<Segment> = if aligned {
        tau.legs
            .iter()
            .rev()
            .map(|s| Segment::new(s.b.clone(), s.a.clone()))
            .collect()
    } else {
        tau.legs.clone()
    };
    jordan.extend(legs);

    // Probe both sides at the midpoint of a middle crosscut segment.
    let probe_seg = &cut_segs[cut_segs.len() / 2];
    let mid = probe_seg.at(&rat(1, 2));
    let normal = (
        -(&probe_seg.b.im - &probe_seg.a.im),
        &probe_seg.b.re - &probe_seg.a.re,
    );
    let norm_sq = &normal.0 * &normal.0 + &normal.1 * &normal.1;
    // Shrink the offset until both probes classify strictly.
    let mut delta = rat(1, 16);
    for _ in 0..64 {
        let left = QPoint::new(&mid.re + &delta * &normal.0, &mid.im + &delta * &normal.1);
        let right = QPoint::new(&mid.re - &delta * &normal.0, &mid.im - &delta * &normal.1);
        // Keep the probes well clear of the rest of the curve.
        let off_sq = &delta * &delta * &norm_sq;
        let clearance = jordan
            .iter()
            .filter(|s| *s != probe_seg)
            .map(|s| s.dist_sq_to_point(&mid))
            .min();
        let clear_enough = clearance.map_or(true, |cl| rat(16, 1) * &off_sq < cl);
        if clear_enough {
            let lc = point_in_closed_curve(&jordan, &left);
            let rc = point_in_closed_curve(&jordan, &right);
            match (lc, rc) {
                (PointLoc::Inside, PointLoc::Outside) => {
                    return Ok(SideReport {
                        interior_sample: left,
                        exterior_sample: right,
                        interior_is_left: true,
                    });
                }
                (PointLoc::Outside, PointLoc::Inside) => {
                    return Ok(SideReport {
                        interior_sample: right,
                        exterior_sample: left,
                        interior_is_left: false,
                    });
                }
                (PointLoc::OnBoundary, _) | (_, PointLoc::OnBoundary) => {}
                _ => return Err(CrosscutError::DegenerateSides),
            }
        }
        delta /= rat(2, 1);
    }
    Err(CrosscutError::DegenerateSides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ConstituentKind;
    use crate::geom::pow2;
    use crate::staged::StagedSet;

    fn qp(re: (i64, i64), im: (i64, i64)) -> QPoint {
        QPoint::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    fn obox(x0: (i64, i64), x1: (i64, i64), y0: (i64, i64), y1: (i64, i64)) -> QRect {
        QRect::open(
            rat(x0.0, x0.1),
            rat(x1.0, x1.1),
            rat(y0.0, y0.1),
            rat(y1.0, y1.1),
        )
        .unwrap()
    }

    fn spike1() -> DomainModel {
        DomainModel::build(&StagedSet::empty(4, 9), 1).unwrap()
    }

    /// Five single-box wads crossing the spike domain at heights 9/16..11/16.
    fn crossing_chain() -> ApproxCrosscut {
        let slabs = [
            ((-1, 64), (1, 4)),
            ((3, 16), (7, 16)),
            ((3, 8), (5, 8)),
            ((9, 16), (13, 16)),
            ((3, 4), (65, 64)),
        ];
        let wads = slabs
            .iter()
            .map(|&(lo, hi)| Wad::new(vec![obox(lo, hi, (9, 16), (11, 16))]).unwrap())
            .collect();
        ApproxCrosscut::new(wads).unwrap()
    }

    #[test]
    fn chain_across_domain_is_valid() {
        let dm = spike1();
        assert_eq!(is_approx_crosscut(&dm, &crossing_chain()), Ok(()));
    }

    #[test]
    fn chain_not_simple() {
        let dm = spike1();
        let mut a = crossing_chain();
        // Widen wad 0 so it reaches wad 2.
        a.wads[0] = Wad::new(vec![obox((-1, 64), (1, 2), (9, 16), (11, 16))]).unwrap();
        assert_eq!(
            is_approx_crosscut(&dm, &a),
            Err(ChainViolation::NotSimple(0, 2))
        );
    }

    #[test]
    fn chain_interior_escape() {
        let dm = spike1();
        let mut a = crossing_chain();
        // Lift wad 2 through the top side.
        a.wads[2] = Wad::new(vec![obox((3, 8), (5, 8), (9, 16), (33, 32))]).unwrap();
        assert_eq!(
            is_approx_crosscut(&dm, &a),
            Err(ChainViolation::ClosureEscapesDomain(2))
        );
    }

    #[test]
    fn chain_end_misses_boundary() {
        let dm = spike1();
        let mut a = crossing_chain();
        a.wads[4] = Wad::new(vec![obox((3, 4), (7, 8), (9, 16), (11, 16))]).unwrap();
        assert_eq!(
            is_approx_crosscut(&dm, &a),
            Err(ChainViolation::EndMissesBoundary(1))
        );
    }

    #[test]
    fn approximates_cases() {
        let dm = spike1();
        let c = Crosscut::new(&dm, vec![qp((0, 1), (5, 8)), qp((1, 1), (5, 8))]).unwrap();
        assert_eq!(c.ends, (0, 2));
        assert!(approximates(&crossing_chain(), &c));

        // A single wad containing the whole crosscut.
        let big = ApproxCrosscut::new(vec![Wad::new(vec![obox(
            (-1, 64),
            (65, 64),
            (9, 16),
            (11, 16),
        )])
        .unwrap()])
        .unwrap();
        assert!(approximates(&big, &c));

        // Chain with a gap: remove overlap between wads 1 and 2.
        let mut broken = crossing_chain();
        broken.wads[1] = Wad::new(vec![obox((3, 16), (5, 16), (9, 16), (11, 16))]).unwrap();
        assert!(!approximates(&broken, &c));

        // A crosscut exiting the covered band is not approximated.
        let c2 = Crosscut::new(
            &dm,
            vec![qp((0, 1), (5, 8)), qp((1, 2), (7, 8)), qp((1, 1), (5, 8))],
        )
        .unwrap();
        assert!(!approximates(&crossing_chain(), &c2));
    }

    #[test]
    fn error_of_examples() {
        // A singleton box of side 1/4: squared diagonal 1/8.
        let a = ApproxCrosscut::new(vec![
            Wad::new(vec![obox((0, 1), (1, 4), (0, 1), (1, 4))]).unwrap()
        ])
        .unwrap();
        assert_eq!(error_of(&a).unwrap(), rat(1, 8));

        // Two overlapping unit boxes: corners span [0, 3/2] x [0, 3/2].
        let a = ApproxCrosscut::new(vec![Wad::new(vec![
            obox((0, 1), (1, 1), (0, 1), (1, 1)),
            obox((1, 2), (3, 2), (1, 2), (3, 2)),
        ])
        .unwrap()])
        .unwrap();
        assert_eq!(error_of(&a).unwrap(), rat(9, 2));

        assert!(Wad::new(vec![]).is_err());
    }

    #[test]
    fn conservative_intersection_cases() {
        let dm = spike1();
        // Small box straddling the midpoint of the left side.
        let u = Wad::new(vec![obox((-1, 16), (1, 16), (7, 16), (9, 16))]).unwrap();
        assert_eq!(conservatively_intersects(&dm, &u), Some(0));
        // Box around the corner i: contains a vertex.
        let u = Wad::new(vec![obox((-1, 16), (1, 16), (15, 16), (17, 16))]).unwrap();
        assert_eq!(conservatively_intersects(&dm, &u), None);
        // Tall box near the top of the left side: still only one hit.
        let u = Wad::new(vec![obox((-1, 16), (1, 2), (7, 8), (31, 32))]).unwrap();
        assert_eq!(conservatively_intersects(&dm, &u), Some(0));
        // Extending past y = 1 picks up the top side as well: ambiguous.
        let u = Wad::new(vec![obox((-1, 16), (1, 2), (7, 8), (33, 32))]).unwrap();
        assert_eq!(conservatively_intersects(&dm, &u), None);
    }

    #[test]
    fn acceptably_placed_examples() {
        let dm = spike1();
        // Left side and bottom run: the taxicab arc through the origin
        // hugs the boundary.
        assert!(acceptably_placed_points(&dm, &qp((0, 1), (1, 2)), &qp((3, 8), (0, 1))).unwrap());
        // Left side against the spike: every arc crosses D.
        assert!(!acceptably_placed_points(&dm, &qp((0, 1), (1, 2)), &qp((1, 2), (1, 4))).unwrap());
        // A vertex disqualifies.
        assert!(
            !acceptably_placed_points(&dm, &QPoint::from_ints(0, 1), &qp((3, 8), (0, 1))).unwrap()
        );
        // Off-boundary is an error.
        assert!(acceptably_placed_points(&dm, &qp((1, 3), (1, 3)), &qp((3, 8), (0, 1))).is_err());
    }

    #[test]
    fn acceptably_placed_constituent_table() {
        let dm = spike1();
        // Same side.
        assert!(acceptably_placed_constituents(&dm, 0, 0).unwrap());
        // Adjacent sides.
        assert!(acceptably_placed_constituents(&dm, 0, 1).unwrap());
        // Opposite sides of the square: never acceptable.
        assert!(!acceptably_placed_constituents(&dm, 0, 2).unwrap());

        // Two distinct tents are never acceptably placed.
        let table = StagedSet::new(4, 9, &[(0, 2), (1, 3)]).unwrap();
        let dm = DomainModel::build(&table, 2).unwrap();
        let tents: Vec<usize> = dm
            .constituents
            .iter()
            .filter(|c| c.kind == ConstituentKind::Tent)
            .map(|c| c.index)
            .collect();
        assert_eq!(tents.len(), 2);
        assert!(!acceptably_placed_constituents(&dm, tents[0], tents[1]).unwrap());
        // A tent against a bottom run: the route under the tent works.
        let run = dm
            .constituents
            .iter()
            .find(|c| c.kind == ConstituentKind::BottomRun)
            .unwrap()
            .index;
        assert!(acceptably_placed_constituents(&dm, tents[0], run).unwrap());
    }

    #[test]
    fn placement_is_constituent_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let table = StagedSet::new(4, 9, &[(0, 2)]).unwrap();
        let dm = DomainModel::build(&table, 2).unwrap();
        let mut checked = 0;
        while checked < 200 {
            let ci = rng.gen_range(0..dm.constituents.len());
            let cj = rng.gen_range(0..dm.constituents.len());
            let si = rng.gen_range(0..dm.constituents[ci].segments.len());
            let sj = rng.gen_range(0..dm.constituents[cj].segments.len());
            let tp = rat(rng.gen_range(1..128), 128);
            let tq = rat(rng.gen_range(1..128), 128);
            let p = dm.constituents[ci].segments[si].at(&tp);
            let q = dm.constituents[cj].segments[sj].at(&tq);
            if p == q || dm.is_vertex(&p).is_some() || dm.is_vertex(&q).is_some() {
                continue;
            }
            // Skip points that also lie on another constituent (shared
            // corners are vertices, so this should not happen).
            let by_points = acceptably_placed_points(&dm, &p, &q).unwrap();
            let by_constituents = acceptably_placed_constituents(&dm, ci, cj).unwrap();
            assert_eq!(by_points, by_constituents, "p={p} q={q} ci={ci} cj={cj}");
            checked += 1;
        }
    }

    #[test]
    fn star_filter_cases() {
        let dm = spike1();
        let rho = rat(1, 1);
        // The crossing chain spans the unit square: diameter too large.
        assert!(!star_accepts(&dm, &crossing_chain(), &rho).unwrap());

        // A small chain from the left side back to the left side.
        let wads = vec![
            Wad::new(vec![obox((-1, 64), (1, 16), (1, 2), (9, 16))]).unwrap(),
            Wad::new(vec![obox((1, 32), (3, 32), (33, 64), (19, 32))]).unwrap(),
            Wad::new(vec![obox((-1, 64), (1, 16), (9, 16), (5, 8))]).unwrap(),
        ];
        let a = ApproxCrosscut::new(wads).unwrap();
        assert_eq!(is_approx_crosscut(&dm, &a), Ok(()));
        assert!(star_accepts(&dm, &a, &rho).unwrap());
        // Tiny rho kills it.
        assert!(!star_accepts(&dm, &a, &rat(1, 64)).unwrap());
        assert!(star_accepts(&dm, &a, &rat(0, 1)).is_err());

        let passed = star_filter(&dm, &[crossing_chain(), a.clone()], &rho).unwrap();
        assert_eq!(passed.len(), 1);
        assert_eq!(passed[0], a);
    }

    #[test]
    fn star_diameter_comparison_is_exact() {
        // (1+sqrt(2))^2 = 3 + 2 sqrt(2) ~ 5.828; with rho^2 = 1 the cutoff
        // for d^2 sits between 6/35 and 7/40.
        assert!(star_diameter_ok(&rat(6, 35), &rat(1, 1)));
        assert!(!star_diameter_ok(&rat(7, 40), &rat(1, 1)));
        assert!(!star_diameter_ok(&rat(1, 1), &rat(1, 1)));
    }

    #[test]
    fn interior_side_basic() {
        let dm = spike1();
        // Crosscut from the left side down to the bottom, arc through the
        // origin corner.
        let p = qp((0, 1), (1, 2));
        let q = qp((3, 8), (0, 1));
        let c = Crosscut::new(&dm, vec![p.clone(), qp((1, 4), (1, 4)), q.clone()]).unwrap();
        let arcs = taxicab_arcs(&p, &q).unwrap();
        let tau = arcs
            .iter()
            .find(|a| arc_avoids_domain(&dm, a))
            .expect("one arc hugs the boundary");
        let report = interior_side_check(&dm, &c, tau).unwrap();
        assert!(dm.point_in_d(&report.interior_sample));
        // The enclosed pocket is the corner below-left of the crosscut.
        assert!(report.interior_sample.re < rat(1, 4) || report.interior_sample.im < rat(1, 4));
    }

    #[test]
    fn interior_side_rejects_crossing_arc() {
        let dm = spike1();
        let p = qp((0, 1), (1, 2));
        let q = qp((3, 8), (0, 1));
        let c = Crosscut::new(&dm, vec![p.clone(), qp((1, 4), (1, 4)), q.clone()]).unwrap();
        // The other taxicab arc runs through D.
        let arcs = taxicab_arcs(&p, &q).unwrap();
        let bad = arcs
            .iter()
            .find(|a| !arc_avoids_domain(&dm, a))
            .expect("one arc crosses D");
        assert!(matches!(
            interior_side_check(&dm, &c, bad),
            Err(CrosscutError::ArcMeetsDomain)
        ));
    }

    #[test]
    fn taxicab_diameter_bound() {
        // Each taxicab arc has Euclidean diameter at most sqrt(2)|p-q|:
        // diam^2 <= 2 d^2, exactly, on a sample of rational pairs.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = QPoint::new(
                rat(rng.gen_range(-64..64), 64),
                rat(rng.gen_range(-64..64), 64),
            );
            let q = QPoint::new(
                rat(rng.gen_range(-64..64), 64),
                rat(rng.gen_range(-64..64), 64),
            );
            if p == q {
                continue;
            }
            let d_sq = p.dist_sq(&q);
            for arc in taxicab_arcs(&p, &q).unwrap() {
                let diam = polyline_diameter_sq(&arc.vertices()).unwrap();
                assert!(diam <= rat(2, 1) * &d_sq);
                assert!(diam >= d_sq.clone());
            }
        }
    }

    #[test]
    fn crosscut_validation() {
        let dm = spike1();
        // Endpoint on a vertex.
        assert!(matches!(
            Crosscut::new(&dm, vec![QPoint::from_ints(0, 0), qp((1, 2), (3, 4))]),
            Err(CrosscutError::VertexPoint(_))
        ));
        // Interior point outside D.
        assert!(Crosscut::new(
            &dm,
            vec![
                qp((0, 1), (1, 2)),
                QPoint::from_ints(2, 2),
                qp((1, 1), (1, 2))
            ]
        )
        .is_err());
        // Crossing the spike slit is rejected: the midpoint of the chord at
        // height 1/4 lies on the slit.
        assert!(matches!(
            Crosscut::new(&dm, vec![qp((0, 1), (1, 4)), qp((1, 1), (1, 4))]),
            Err(CrosscutError::InteriorOnBoundary(_))
        ));
        // A chord above the spike tip is fine.
        let c = Crosscut::new(&dm, vec![qp((0, 1), (5, 8)), qp((1, 1), (5, 8))]).unwrap();
        assert_eq!(c.diam_sq(), rat(1, 1));
        let _ = pow2(0);
    }
}
