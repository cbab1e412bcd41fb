//! Construction of the truncated counterexample domain: the vertex family,
//! the closed boundary curve, the bounded component, and the significant
//! constituents labeled clockwise from the left side of the unit square.
//!
//! Truncation replaces the infinite tail accumulating at the origin by a
//! single closing segment along the real axis; this preserves every
//! constituent with index below the configured depth and keeps the bounded
//! component simply connected. Spikes are kept as doubled (slit) segments
//! rather than removed, so the interior angle 2*pi at each spike tip is part
//! of the geometry seen by the conformal solver.

use crate::geom::{
    point_in_closed_curve, pow2, rat, segments_intersect, PointLoc, QPoint, Rat, Segment,
};
use crate::staged::StagedSet;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("vertex index {0} beyond truncation (max {1})")]
    IndexBeyondTruncation(u32, u32),
    #[error("depth must satisfy 1 <= J <= n_max + 1, got J = {0}, n_max = {1}")]
    BadDepth(u32, u32),
    #[error("stage table inconsistent with depth: {0}")]
    InconsistentTable(String),
    #[error("boundary self-intersection between segments {0} and {1}")]
    SelfIntersection(usize, usize),
    #[error("malformed domain document: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstituentKind {
    SquareSide,
    BottomRun,
    Tent,
    Spike,
}

/// A significant constituent of the boundary: a side segment of the unit
/// square, a maximal bottom run, or a tent/spike.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub index: usize,
    pub kind: ConstituentKind,
    pub segments: Vec<Segment>,
    /// The slot index j for tents and spikes.
    pub tent_index: Option<u32>,
}

impl Constituent {
    pub fn contains(&self, p: &QPoint) -> bool {
        self.segments.iter().any(|s| s.contains(p))
    }

    /// A non-vertex representative point of the constituent.
    pub fn representative(&self) -> QPoint {
        self.segments[0].at(&rat(1, 2))
    }

    /// A second representative distinct from `representative`. For spikes
    /// the two legs coincide pointwise, so the fallback quarter point is
    /// used there as well.
    pub fn representative2(&self) -> QPoint {
        if self.segments.len() > 1 {
            let p = self.segments[1].at(&rat(1, 2));
            if p != self.representative() {
                return p;
            }
        }
        self.segments[0].at(&rat(1, 4))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Vertex(u32),
    OnConstituent(usize),
    Off,
}

/// The truncated domain: boundary vertices, the closed boundary curve, the
/// constituents, and a reference interior point.
#[derive(Debug, Clone)]
pub struct DomainModel {
    pub staged: StagedSet,
    pub depth: u32,
    pub vertices: Vec<QPoint>,
    pub boundary_segments: Vec<Segment>,
    pub constituents: Vec<Constituent>,
    pub interior_ref: QPoint,
    /// True for the square-only test fixture (no tent/spike slots).
    pub is_fixture: bool,
}

/// Exact vertex formula. Base cases 0..=3, then per-slot recurrences; the
/// feet of slot j move off-center by 2^-(j+3+s) exactly when j entered at s.
pub fn vertex_point(n: u32, staged: &StagedSet) -> QPoint {
    match n {
        0 => QPoint::from_ints(0, 0),
        1 => QPoint::from_ints(0, 1),
        2 => QPoint::from_ints(1, 1),
        3 => QPoint::from_ints(1, 0),
        _ => {
            let j = (n - 4) / 3;
            let r = (n - 4) % 3;
            let base = pow2(-(j as i32 + 1));
            match r {
                0 | 2 => {
                    let delta = match staged.stage_of(j) {
                        Some(s) => {
                            let d = pow2(-(j as i32 + 3 + s as i32));
                            // Feet must stay strictly between neighboring
                            // stations: 2^-(j+3+s) < 2^-(j+2) for all s >= 0.
                            assert!(d < pow2(-(j as i32 + 2)), "foot perturbation collides");
                            d
                        }
                        None => Rat::zero(),
                    };
                    if r == 0 {
                        QPoint::new(base + delta, Rat::zero())
                    } else {
                        QPoint::new(base - delta, Rat::zero())
                    }
                }
                1 => QPoint::new(base.clone(), base),
                _ => unreachable!(),
            }
        }
    }
}

impl DomainModel {
    /// Build the truncated domain for `J` tent/spike slots.
    pub fn build(staged: &StagedSet, depth: u32) -> Result<Self, DomainError> {
        if depth < 1 || depth > staged.n_max + 1 {
            return Err(DomainError::BadDepth(depth, staged.n_max));
        }
        let last = 3 * depth + 3;
        let vertices: Vec<QPoint> = (0..=last).map(|n| vertex_point(n, staged)).collect();

        let mut boundary_segments = Vec::with_capacity(last as usize + 1);
        for n in 0..last as usize {
            boundary_segments.push(Segment::new(vertices[n].clone(), vertices[n + 1].clone()));
        }
        // Truncation closure back to the origin along the real axis.
        boundary_segments.push(Segment::new(
            vertices[last as usize].clone(),
            vertices[0].clone(),
        ));

        let mut constituents = Vec::new();
        for k in 0..3 {
            constituents.push(Constituent {
                index: k,
                kind: ConstituentKind::SquareSide,
                segments: vec![boundary_segments[k].clone()],
                tent_index: None,
            });
        }
        for j in 0..depth {
            let i = (3 * j + 3) as usize;
            constituents.push(Constituent {
                index: constituents.len(),
                kind: ConstituentKind::BottomRun,
                segments: vec![boundary_segments[i].clone()],
                tent_index: None,
            });
            let leg1 = boundary_segments[i + 1].clone();
            let leg2 = boundary_segments[i + 2].clone();
            let kind = if leg1.a == leg2.b {
                ConstituentKind::Spike
            } else {
                ConstituentKind::Tent
            };
            constituents.push(Constituent {
                index: constituents.len(),
                kind,
                segments: vec![leg1, leg2],
                tent_index: Some(j),
            });
        }
        constituents.push(Constituent {
            index: constituents.len(),
            kind: ConstituentKind::BottomRun,
            segments: vec![boundary_segments[last as usize].clone()],
            tent_index: None,
        });

        let dm = DomainModel {
            staged: staged.clone(),
            depth,
            vertices,
            boundary_segments,
            constituents,
            interior_ref: QPoint::new(rat(1, 2), rat(3, 4)),
            is_fixture: false,
        };
        dm.verify_boundary()?;
        Ok(dm)
    }

    /// The unit square with no tent/spike slots; used as a well-understood
    /// fixture for the conformal solver (4-fold symmetry about the center).
    pub fn square_fixture() -> Self {
        let staged = StagedSet::empty(0, 0);
        let vertices = vec![
            QPoint::from_ints(0, 0),
            QPoint::from_ints(0, 1),
            QPoint::from_ints(1, 1),
            QPoint::from_ints(1, 0),
        ];
        let mut boundary_segments = Vec::new();
        for n in 0..4 {
            boundary_segments.push(Segment::new(
                vertices[n].clone(),
                vertices[(n + 1) % 4].clone(),
            ));
        }
        let constituents = (0..4)
            .map(|k| Constituent {
                index: k,
                kind: ConstituentKind::SquareSide,
                segments: vec![boundary_segments[k].clone()],
                tent_index: None,
            })
            .collect();
        DomainModel {
            staged,
            depth: 0,
            vertices,
            boundary_segments,
            constituents,
            interior_ref: QPoint::new(rat(1, 2), rat(1, 2)),
            is_fixture: true,
        }
    }

    pub fn vertex(&self, n: u32) -> Result<QPoint, DomainError> {
        let max = 3 * self.depth + 3;
        if n > max {
            return Err(DomainError::IndexBeyondTruncation(n, max));
        }
        Ok(self.vertices[n as usize].clone())
    }

    pub fn is_vertex(&self, p: &QPoint) -> Option<u32> {
        self.vertices.iter().position(|v| v == p).map(|i| i as u32)
    }

    /// Locate a point: vertex, unique constituent, or off the boundary.
    pub fn constituent_of(&self, p: &QPoint) -> Location {
        if let Some(n) = self.is_vertex(p) {
            return Location::Vertex(n);
        }
        for c in &self.constituents {
            if c.contains(p) {
                return Location::OnConstituent(c.index);
            }
        }
        Location::Off
    }

    pub fn on_boundary(&self, p: &QPoint) -> bool {
        self.boundary_segments.iter().any(|s| s.contains(p))
    }

    /// Exact membership in the bounded component. Boundary points are not
    /// members; spikes contribute an even crossing count and stay outside.
    pub fn point_in_d(&self, p: &QPoint) -> bool {
        point_in_closed_curve(&self.boundary_segments, p) == PointLoc::Inside
    }

    /// Closedness and (away from spikes) simplicity of the boundary curve.
    fn verify_boundary(&self) -> Result<(), DomainError> {
        let n = self.boundary_segments.len();
        for i in 0..n {
            let next = &self.boundary_segments[(i + 1) % n];
            if self.boundary_segments[i].b != next.a {
                return Err(DomainError::InconsistentTable(format!(
                    "boundary not closed at segment {i}"
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (s, t) = (&self.boundary_segments[i], &self.boundary_segments[j]);
                if s == t || (s.a == t.b && s.b == t.a) {
                    continue; // the doubled spike pair
                }
                if segments_intersect(s, t) {
                    // Non-consecutive segments may only meet in a shared
                    // vertex (happens at spike bases).
                    let shared = s.shares_endpoint(t);
                    let ok =
                        shared && !s.contains(&t.at(&rat(1, 2))) && !t.contains(&s.at(&rat(1, 2)));
                    if !ok {
                        return Err(DomainError::SelfIntersection(i, j));
                    }
                }
            }
        }
        if !self.point_in_d(&self.interior_ref) && !self.is_fixture {
            return Err(DomainError::InconsistentTable(
                "interior reference point not inside the bounded component".into(),
            ));
        }
        Ok(())
    }

    /// All tent slots `(j, s, foot_r, apex, foot_l)` present at this depth.
    pub fn tents(&self) -> Vec<(u32, u32, QPoint, QPoint, QPoint)> {
        let mut out = Vec::new();
        for j in 0..self.depth {
            if let Some(s) = self.staged.stage_of(j) {
                let i = (3 * j + 4) as usize;
                out.push((
                    j,
                    s,
                    self.vertices[i].clone(),
                    self.vertices[i + 1].clone(),
                    self.vertices[i + 2].clone(),
                ));
            }
        }
        out
    }

    pub fn to_svg(&self, width: u32, height: u32) -> String {
        let margin = 0.125f64;
        let span = 1.0 + 2.0 * margin;
        let sx = width as f64 / span;
        let sy = height as f64 / span;
        let tx = |p: &QPoint| {
            let (x, y) = p.to_f64();
            ((x + margin) * sx, (1.0 + margin - y) * sy)
        };
        let mut d = String::new();
        for (i, seg) in self.boundary_segments.iter().enumerate() {
            let (x0, y0) = tx(&seg.a);
            let (x1, y1) = tx(&seg.b);
            if i == 0 {
                d.push_str(&format!("M {x0:.3} {y0:.3} "));
            }
            d.push_str(&format!("L {x1:.3} {y1:.3} "));
        }
        d.push('Z');
        let (rx, ry) = tx(&self.interior_ref);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
             viewBox=\"0 0 {width} {height}\">\n\
             <path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n\
             <circle cx=\"{rx:.3}\" cy=\"{ry:.3}\" r=\"2.5\" fill=\"red\"/>\n</svg>\n"
        )
    }

    pub fn to_document(&self) -> DomainDoc {
        DomainDoc {
            table: serde_json::from_str(&self.staged.to_json()).expect("table json"),
            depth: self.depth,
            vertices: self
                .vertices
                .iter()
                .map(|p| [p.re.to_string(), p.im.to_string()])
                .collect(),
            constituents: self
                .constituents
                .iter()
                .map(|c| ConstituentDoc {
                    index: c.index,
                    kind: c.kind,
                    tent_index: c.tent_index,
                })
                .collect(),
            interior_ref: [
                self.interior_ref.re.to_string(),
                self.interior_ref.im.to_string(),
            ],
        }
    }

    pub fn from_document(doc: &DomainDoc) -> Result<Self, DomainError> {
        let table_json =
            serde_json::to_string(&doc.table).map_err(|e| DomainError::Malformed(e.to_string()))?;
        let staged =
            StagedSet::from_json(&table_json).map_err(|e| DomainError::Malformed(e.to_string()))?;
        let dm = DomainModel::build(&staged, doc.depth)?;
        // The vertex list in the document is validated against the rebuild.
        if doc.vertices.len() != dm.vertices.len() {
            return Err(DomainError::Malformed("vertex count mismatch".into()));
        }
        for (stored, built) in doc.vertices.iter().zip(&dm.vertices) {
            let re = parse_rat(&stored[0])?;
            let im = parse_rat(&stored[1])?;
            if re != built.re || im != built.im {
                return Err(DomainError::Malformed(
                    "vertex list disagrees with table".into(),
                ));
            }
        }
        Ok(dm)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("domain serialization")
    }

    pub fn from_json(source: &str) -> Result<Self, DomainError> {
        let doc: DomainDoc =
            serde_json::from_str(source).map_err(|e| DomainError::Malformed(e.to_string()))?;
        DomainModel::from_document(&doc)
    }
}

fn parse_rat(s: &str) -> Result<Rat, DomainError> {
    s.parse::<Rat>()
        .map_err(|e| DomainError::Malformed(format!("bad rational {s:?}: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstituentDoc {
    pub index: usize,
    pub kind: ConstituentKind,
    pub tent_index: Option<u32>,
}

/// Exchange format for a built domain: the table, the depth, the exact
/// vertex list, and the constituent labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainDoc {
    pub table: serde_json::Value,
    pub depth: u32,
    pub vertices: Vec<[String; 2]>,
    pub constituents: Vec<ConstituentDoc>,
    pub interior_ref: [String; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat;

    fn qp(re: (i64, i64), im: (i64, i64)) -> QPoint {
        QPoint::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn base_vertices() {
        let s = StagedSet::empty(4, 9);
        assert_eq!(vertex_point(1, &s), QPoint::from_ints(0, 1));
        assert_eq!(vertex_point(2, &s), QPoint::from_ints(1, 1));
    }

    #[test]
    fn spike_vertices_when_absent() {
        let s = StagedSet::empty(4, 9);
        assert_eq!(vertex_point(4, &s), qp((1, 2), (0, 1)));
        assert_eq!(vertex_point(5, &s), qp((1, 2), (1, 2)));
        assert_eq!(vertex_point(6, &s), qp((1, 2), (0, 1)));
    }

    #[test]
    fn tent_vertices_at_stage_two() {
        let s = StagedSet::new(4, 9, &[(0, 2)]).unwrap();
        assert_eq!(vertex_point(4, &s), qp((17, 32), (0, 1)));
        assert_eq!(vertex_point(6, &s), qp((15, 32), (0, 1)));
        // Feet distance must be 2^-(j+2+s) = 2^-4.
        let d = vertex_point(4, &s).dist_sq(&vertex_point(6, &s));
        assert_eq!(d, rat(1, 256));
    }

    #[test]
    fn build_two_spikes() {
        let s = StagedSet::empty(4, 9);
        let dm = DomainModel::build(&s, 2).unwrap();
        let spikes: Vec<_> = dm
            .constituents
            .iter()
            .filter(|c| c.kind == ConstituentKind::Spike)
            .collect();
        assert_eq!(spikes.len(), 2);
        assert_eq!(spikes[0].segments[0].a, qp((1, 2), (0, 1)));
        assert_eq!(spikes[1].segments[0].a, qp((1, 4), (0, 1)));
    }

    #[test]
    fn build_one_tent() {
        let s = StagedSet::new(4, 9, &[(0, 2)]).unwrap();
        let dm = DomainModel::build(&s, 1).unwrap();
        let tent = dm
            .constituents
            .iter()
            .find(|c| c.kind == ConstituentKind::Tent)
            .unwrap();
        assert_eq!(tent.segments[0].b, qp((1, 2), (1, 2))); // apex
        assert_eq!(tent.segments[0].a, qp((17, 32), (0, 1)));
        assert_eq!(tent.segments[1].b, qp((15, 32), (0, 1)));
    }

    #[test]
    fn constituent_count_depth_one() {
        for table in [
            StagedSet::empty(4, 9),
            StagedSet::new(4, 9, &[(0, 3)]).unwrap(),
        ] {
            let dm = DomainModel::build(&table, 1).unwrap();
            // 3 square sides + 2 bottom runs + 1 tent-or-spike.
            assert_eq!(dm.constituents.len(), 6);
        }
    }

    #[test]
    fn locate_points() {
        let s = StagedSet::empty(4, 9);
        let dm = DomainModel::build(&s, 1).unwrap();
        assert_eq!(
            dm.constituent_of(&qp((0, 1), (1, 2))),
            Location::OnConstituent(0)
        );
        assert_eq!(
            dm.constituent_of(&QPoint::from_ints(0, 1)),
            Location::Vertex(1)
        );
        // 3/4 lies on the bottom run adjacent to the right corner.
        assert_eq!(
            dm.constituent_of(&qp((3, 4), (0, 1))),
            Location::OnConstituent(3)
        );
        assert_eq!(dm.constituent_of(&qp((1, 3), (1, 3))), Location::Off);
    }

    #[test]
    fn membership() {
        let s = StagedSet::empty(4, 9);
        let dm = DomainModel::build(&s, 1).unwrap();
        assert!(dm.point_in_d(&dm.interior_ref.clone()));
        assert!(!dm.point_in_d(&QPoint::from_ints(2, 2)));
        // On the spike slit: a boundary point, not a member.
        assert!(!dm.point_in_d(&qp((1, 2), (1, 4))));
        // Just next to the slit: inside.
        assert!(dm.point_in_d(&qp((33, 64), (1, 4))));
    }

    #[test]
    fn depth_bounds() {
        let s = StagedSet::empty(2, 9);
        assert!(DomainModel::build(&s, 0).is_err());
        assert!(DomainModel::build(&s, 4).is_err());
        assert!(DomainModel::build(&s, 3).is_ok());
    }

    #[test]
    fn gap_and_apex_identities() {
        let s = StagedSet::new(6, 12, &[(0, 0), (1, 5), (3, 12)]).unwrap();
        let dm = DomainModel::build(&s, 4).unwrap();
        for (j, stage, foot_r, apex, foot_l) in dm.tents() {
            let gap = foot_r.dist_sq(&foot_l);
            let expect = pow2(-2 * (j as i32 + 2 + stage as i32));
            assert_eq!(gap, expect);
            assert_eq!(
                apex,
                QPoint::new(pow2(-(j as i32 + 1)), pow2(-(j as i32 + 1)))
            );
            // Tent legs are long: each leg diameter >= 2^-(j+1).
            let floor = pow2(-2 * (j as i32 + 1));
            assert!(foot_r.dist_sq(&apex) >= floor);
            assert!(foot_l.dist_sq(&apex) >= floor);
        }
    }

    #[test]
    fn document_roundtrip() {
        let s = StagedSet::new(4, 9, &[(0, 2), (2, 7)]).unwrap();
        let dm = DomainModel::build(&s, 3).unwrap();
        let back = DomainModel::from_json(&dm.to_json()).unwrap();
        assert_eq!(back.vertices, dm.vertices);
        assert_eq!(back.depth, dm.depth);
    }

    #[test]
    fn svg_has_path() {
        let s = StagedSet::empty(4, 9);
        let dm = DomainModel::build(&s, 3).unwrap();
        let svg = dm.to_svg(400, 400);
        assert!(svg.contains("<path"));
        assert_eq!(svg.matches("L ").count(), dm.boundary_segments.len());
    }
}
