//! Counterclockwise polygon view of a domain boundary, with interior-angle
//! exponents for the Schwarz–Christoffel representation.
//!
//! The boundary chain stored on [`DomainModel`] runs clockwise; here it is
//! reversed so the interior lies on the left.  Each vertex carries the
//! exponent `beta = alpha/pi - 1`, where `alpha` in `(0, 2*pi]` is the
//! interior angle.  Slit tips (where the two incident edges coincide) get
//! `alpha = 2*pi` exactly; degenerate-direction detection is done on the
//! exact rational vertices, not on floats.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::domain::DomainModel;
use crate::geom::QPoint;

/// A simple closed polygon, counterclockwise, possibly with cusps
/// (slit tips traversed on both sides).
#[derive(Debug, Clone)]
pub struct Polygon {
    /// Vertices in counterclockwise order.
    pub vertices: Vec<Complex64>,
    /// Interior-angle exponents; `betas[k]` belongs to `vertices[k]`
    /// and lies in `(-1, 1]`, with `1` exactly at slit tips.
    pub betas: Vec<f64>,
    /// Marks vertices whose two neighbors coincide (slit tips).
    pub tips: Vec<bool>,
}

impl Polygon {
    /// Builds the counterclockwise polygon of `dm`'s boundary.
    pub fn from_domain(dm: &DomainModel) -> Self {
        let segs = &dm.boundary_segments;
        let n = segs.len();
        let verts_q: Vec<QPoint> = (0..n).map(|i| segs[n - 1 - i].b.clone()).collect();
        let tips: Vec<bool> = (0..n)
            .map(|k| verts_q[(k + n - 1) % n] == verts_q[(k + 1) % n])
            .collect();
        let vertices: Vec<Complex64> = verts_q
            .iter()
            .map(|p| {
                let (x, y) = p.to_f64();
                Complex64::new(x, y)
            })
            .collect();
        Self::with_tips(vertices, tips)
    }

    /// Builds a polygon from float vertices plus exact tip flags.
    pub fn with_tips(vertices: Vec<Complex64>, tips: Vec<bool>) -> Self {
        let n = vertices.len();
        assert_eq!(n, tips.len());
        assert!(n >= 3, "polygon needs at least three vertices");
        let mut betas = Vec::with_capacity(n);
        for k in 0..n {
            let w = vertices[k];
            let p = vertices[(k + n - 1) % n];
            let q = vertices[(k + 1) % n];
            let alpha = if tips[k] {
                2.0 * PI
            } else {
                let mut a = ((p - w) / (q - w)).arg();
                if a <= 1e-14 {
                    a += 2.0 * PI;
                }
                a
            };
            betas.push(alpha / PI - 1.0);
        }
        Polygon {
            vertices,
            betas,
            tips,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Length of side `k`, joining vertex `k` to vertex `k + 1`.
    pub fn side_length(&self, k: usize) -> f64 {
        let n = self.len();
        (self.vertices[(k + 1) % n] - self.vertices[k]).norm()
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.side_length(k)).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths().iter().sum()
    }

    /// Sum of the turning exponents; `-2` for every simple closed polygon.
    pub fn beta_sum(&self) -> f64 {
        self.betas.iter().sum()
    }

    /// A homotopy copy with every reflex vertex (slit tip or tent apex)
    /// pulled toward the midpoint of its neighbors by `1 - t`; `t = 1`
    /// returns the original shape.  Used for solver continuation.
    pub fn shrunken(&self, t: f64) -> Polygon {
        let n = self.len();
        let mut verts = self.vertices.clone();
        for k in 0..n {
            if self.betas[k] > 0.5 {
                let anchor = 0.5 * (self.vertices[(k + n - 1) % n] + self.vertices[(k + 1) % n]);
                verts[k] = anchor + t * (self.vertices[k] - anchor);
            }
        }
        Polygon::with_tips(verts, self.tips.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;
    use crate::staged::StagedSet;

    #[test]
    fn square_fixture_polygon() {
        let dm = DomainModel::square_fixture();
        let poly = Polygon::from_domain(&dm);
        assert_eq!(poly.len(), 4);
        // Counterclockwise from the origin along the bottom.
        assert!((poly.vertices[0] - Complex64::new(0.0, 0.0)).norm() < 1e-15);
        assert!((poly.vertices[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((poly.vertices[2] - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert!((poly.vertices[3] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        for &b in &poly.betas {
            assert!((b + 0.5).abs() < 1e-12, "square corner exponent");
        }
        assert!((poly.beta_sum() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn spike_domain_polygon() {
        // One spike slot, never entered: the slit at x = 1/2 is doubled and
        // its tip is an exact cusp.
        let staged = StagedSet::empty(0, 0);
        let dm = DomainModel::build(&staged, 1).unwrap();
        let poly = Polygon::from_domain(&dm);
        assert_eq!(poly.len(), 7);
        // Vertex 2 is the tip (0, 1/2)·(1+i): neighbors both at (1/2, 0).
        assert!(poly.tips[2]);
        assert!((poly.betas[2] - 1.0).abs() < 1e-15);
        // Slit base visited twice, each visit a right angle.
        assert!((poly.betas[1] + 0.5).abs() < 1e-12);
        assert!((poly.betas[3] + 0.5).abs() < 1e-12);
        // Last three vertices are the plain square corners 1, 1+i, i.
        let n = poly.len();
        assert!((poly.vertices[n - 3] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((poly.vertices[n - 2] - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert!((poly.vertices[n - 1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((poly.beta_sum() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn tent_domain_angles() {
        // Slot 0 entered at stage 2: feet at 1/2 ± 1/32, apex at (1/2, 1/2).
        let staged = StagedSet::new(0, 2, &[(0, 2)]).unwrap();
        let dm = DomainModel::build(&staged, 1).unwrap();
        let poly = Polygon::from_domain(&dm);
        assert_eq!(poly.len(), 7);
        assert!(!poly.tips[2]);
        // Apex interior angle is reflex: 2*pi minus the small wedge between
        // the legs; wedge = 2*atan((1/32)/(1/2)).
        let wedge = 2.0 * (1.0f64 / 16.0).atan();
        let want = (2.0 * PI - wedge) / PI - 1.0;
        assert!(
            (poly.betas[2] - want).abs() < 1e-12,
            "apex exponent {} vs {}",
            poly.betas[2],
            want
        );
        assert!((poly.beta_sum() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn shrunken_pulls_reflex_vertices() {
        let staged = StagedSet::empty(1, 0);
        let dm = DomainModel::build(&staged, 2).unwrap();
        let poly = Polygon::from_domain(&dm);
        let half = poly.shrunken(0.5);
        for k in 0..poly.len() {
            if poly.betas[k] > 0.5 {
                assert!(half.vertices[k].im < poly.vertices[k].im);
            } else {
                assert_eq!(half.vertices[k], poly.vertices[k]);
            }
        }
        assert!((half.beta_sum() + 2.0).abs() < 1e-12);
        let full = poly.shrunken(1.0);
        for k in 0..poly.len() {
            assert!((full.vertices[k] - poly.vertices[k]).norm() < 1e-15);
        }
    }
}
