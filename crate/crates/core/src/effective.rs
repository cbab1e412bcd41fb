//! Rectangle-based effective descriptions of the domain: exact predicates
//! for "this rectangle meets constituent k" and "this rectangle avoids the
//! rest of the boundary", plus deterministic dyadic-grid enumerations of
//! the closed rectangles inside D and the open rectangles meeting X.
//!
//! The truncated model decides the avoidance predicate by exhaustive exact
//! checks over the finite boundary; the tail machinery (the m_j values and
//! the squares R_j) is still implemented and property-tested.

use crate::domain::DomainModel;
use crate::geom::{pow2, rat, seg_meets_rect, QPoint, QRect, Rat, RectKind};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EffectiveError {
    #[error("constituent index {0} out of range")]
    BadIndex(usize),
    #[error("rectangle must be {0:?}")]
    WrongKind(RectKind),
    #[error("index j = 0 rejected; tail squares are defined for j >= 1")]
    TailIndexZero,
}

/// Exact decision whether the open rectangle `r` contains a point of
/// constituent `k`.
pub fn rect_meets_sigma(dm: &DomainModel, r: &QRect, k: usize) -> Result<bool, EffectiveError> {
    if r.kind != RectKind::Open {
        return Err(EffectiveError::WrongKind(RectKind::Open));
    }
    let c = dm.constituents.get(k).ok_or(EffectiveError::BadIndex(k))?;
    Ok(c.segments.iter().any(|s| seg_meets_rect(s, r)))
}

/// Exact decision whether the closed rectangle `r` is disjoint from every
/// constituent other than `k` and from all vertices.
pub fn rect_avoids_rest(dm: &DomainModel, r: &QRect, k: usize) -> Result<bool, EffectiveError> {
    if r.kind != RectKind::Closed {
        return Err(EffectiveError::WrongKind(RectKind::Closed));
    }
    if k >= dm.constituents.len() {
        return Err(EffectiveError::BadIndex(k));
    }
    for v in &dm.vertices {
        if r.contains_point(v) {
            return Ok(false);
        }
    }
    for c in &dm.constituents {
        if c.index == k {
            continue;
        }
        if c.segments.iter().any(|s| seg_meets_rect(s, r)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The exact tail threshold `m_j` and square `R_j = (-2^-j, m_j)^2` used to
/// cut off all but finitely many constituents; defined for `j >= 1`.
pub fn mj_rect(j: u32) -> Result<(Rat, QRect), EffectiveError> {
    if j == 0 {
        return Err(EffectiveError::TailIndexZero);
    }
    let j = j as i32;
    let m = pow2(-(j + 3)) + pow2(-(j + 5)) + pow2(-(j + 2)) - pow2(-(j + 4));
    let lo = -pow2(-j);
    let r = QRect::open(lo.clone(), m.clone(), lo, m.clone()).expect("R_j is nondegenerate");
    Ok((m, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamMode {
    /// Closed rational rectangles included in D.
    OpenDomain,
    /// Open rational rectangles containing a point of X.
    ClosedBoundary,
}

/// Deterministic dyadic-grid enumeration. Levels are swept in increasing
/// order; within a level, cells are ordered by distance of their center to
/// the interior reference point (ties broken by descending y then
/// ascending x), so prefixes are reproducible.
pub struct RectStream {
    dm: DomainModel,
    mode: StreamMode,
    level: u32,
    queue: VecDeque<(u32, QRect)>,
}

impl RectStream {
    pub fn new(dm: &DomainModel, mode: StreamMode) -> Self {
        RectStream {
            dm: dm.clone(),
            mode,
            level: 0,
            queue: VecDeque::new(),
        }
    }

    fn emit_level(&mut self, level: u32) {
        let scale = pow2(-(level as i32));
        // Cover [-1/8, 9/8]^2 with level-`level` cells.
        let cells = 1i64 << level;
        let lo = -((cells + 7) / 8) - 1;
        let hi = (9 * cells + 7) / 8 + 1;
        let mut found: Vec<(Rat, Rat, Rat, QRect)> = Vec::new();
        for ax in lo..hi {
            for ay in lo..hi {
                let keep = match self.mode {
                    StreamMode::OpenDomain => {
                        let x_lo = rat(ax, 1) * &scale;
                        let x_hi = rat(ax + 1, 1) * &scale;
                        let y_lo = rat(ay, 1) * &scale;
                        let y_hi = rat(ay + 1, 1) * &scale;
                        let cell = QRect::closed(x_lo, x_hi, y_lo, y_hi).unwrap();
                        closed_rect_in_d(&self.dm, &cell).then_some(cell)
                    }
                    StreamMode::ClosedBoundary => {
                        // Open cells on the plain dyadic grid can never
                        // contain the gridline-aligned parts of X, so this
                        // stream uses cells centered at grid points (the
                        // half-shifted grid): every dyadic boundary feature
                        // of scale coarser than the level lies strictly
                        // inside some cell.
                        let x_lo = rat(2 * ax - 1, 2) * &scale;
                        let x_hi = rat(2 * ax + 1, 2) * &scale;
                        let y_lo = rat(2 * ay - 1, 2) * &scale;
                        let y_hi = rat(2 * ay + 1, 2) * &scale;
                        let cell = QRect::open(x_lo, x_hi, y_lo, y_hi).unwrap();
                        open_rect_meets_x(&self.dm, &cell).then_some(cell)
                    }
                };
                if let Some(cell) = keep {
                    let c = cell.center();
                    let d = c.dist_sq(&self.dm.interior_ref);
                    found.push((d, -c.im.clone(), c.re.clone(), cell));
                }
            }
        }
        found.sort_by(|a, b| (&a.0, &a.1, &a.2).cmp(&(&b.0, &b.1, &b.2)));
        for (_, _, _, cell) in found {
            self.queue.push_back((level, cell));
        }
    }
}

impl Iterator for RectStream {
    type Item = (u32, QRect);

    fn next(&mut self) -> Option<Self::Item> {
        while self.queue.is_empty() {
            self.level += 1;
            if self.level > 14 {
                return None; // desk-scale cap
            }
            let level = self.level;
            self.emit_level(level);
        }
        self.queue.pop_front()
    }
}

/// Exact test that a closed rectangle is included in D: it must be disjoint
/// from every boundary segment and have a corner inside.
pub fn closed_rect_in_d(dm: &DomainModel, r: &QRect) -> bool {
    debug_assert_eq!(r.kind, RectKind::Closed);
    if dm.boundary_segments.iter().any(|s| seg_meets_rect(s, r)) {
        return false;
    }
    dm.point_in_d(&r.corners()[0])
}

/// Exact test that an open rectangle contains a boundary point.
pub fn open_rect_meets_x(dm: &DomainModel, r: &QRect) -> bool {
    debug_assert_eq!(r.kind, RectKind::Open);
    dm.boundary_segments.iter().any(|s| seg_meets_rect(s, r))
}

pub fn enum_open_d(dm: &DomainModel) -> RectStream {
    RectStream::new(dm, StreamMode::OpenDomain)
}

pub fn enum_closed_x(dm: &DomainModel) -> RectStream {
    RectStream::new(dm, StreamMode::ClosedBoundary)
}

/// Exact squared distance from a point to the boundary X.
pub fn dist_sq_to_boundary(dm: &DomainModel, p: &QPoint) -> Rat {
    let mut best: Option<Rat> = None;
    for s in &dm.boundary_segments {
        let d = s.dist_sq_to_point(p);
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    }
    best.expect("boundary nonempty")
}
