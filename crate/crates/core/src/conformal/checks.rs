//! Numeric verification of the crosscut-recognition contracts: witness
//! parameters, the four recognizing clauses, the diameter bound for
//! sampled point pairs, and a generator for certified crosscuts obtained
//! as images of circles tangent to the cap boundary.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::conformal::boundary::{
    boundary_point, circle_in_disk_interval, BoundaryError, BoundaryEstimate,
};
use crate::conformal::map::ConformalMap;
use crate::crosscut::Crosscut;
use crate::domain::DomainModel;
use crate::effective::dist_sq_to_boundary;
use crate::geom::{pow2, rat, rat_to_f64, QPoint, Rat};

/// Three-valued outcome of a numeric check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The margin is smaller than the map error; no claim is made.
    Inconclusive,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClauseReport {
    pub name: String,
    pub verdict: Verdict,
    /// Distance to the decision threshold, in the clause's own units.
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub clauses: Vec<ClauseReport>,
}

impl CheckReport {
    fn from_clauses(clauses: Vec<ClauseReport>) -> Self {
        let verdict = clauses
            .iter()
            .fold(Verdict::Pass, |acc, c| acc.and(c.verdict));
        CheckReport { verdict, clauses }
    }
}

/// Witness parameters `(s_0, r_0)` for a unimodular point, plus the
/// configurable clause-4 threshold stand-in.
#[derive(Debug, Clone)]
pub struct WitnessParams {
    pub s0: Rat,
    pub r0: Rat,
    /// Angle of the unimodular point as a fraction of a full turn.
    pub zeta_turns: Rat,
    /// Clause-4 threshold; `None` selects the default `r_0 / 4`.
    pub m_tilde: Option<f64>,
}

impl WitnessParams {
    pub fn new(s0: Rat, r0: Rat, zeta_turns: Rat) -> Self {
        WitnessParams {
            s0,
            r0,
            zeta_turns,
            m_tilde: None,
        }
    }

    /// Exact clause 1: `0 < r_0 < s_0 < 1/2`.
    pub fn params_valid(&self) -> bool {
        self.r0 > Rat::from_integer(0.into()) && self.s0 > self.r0 && self.s0 < rat(1, 2)
    }

    pub fn zeta(&self) -> Complex64 {
        let a = 2.0 * PI * rat_to_f64(&self.zeta_turns);
        Complex64::from_polar(1.0, a)
    }

    pub fn m_tilde_value(&self) -> f64 {
        self.m_tilde.unwrap_or(rat_to_f64(&self.r0) / 4.0)
    }
}

/// A crosscut carried as samples in the image plane, each with an error
/// bar — either converted from an exact [`Crosscut`] or produced by the
/// certified generator.
#[derive(Debug, Clone)]
pub struct MappedCrosscut {
    pub samples: Vec<Complex64>,
    pub errs: Vec<f64>,
    /// Disk-plane circle `(center, radius)` when generated as the image
    /// of a circular arc.
    pub preimage: Option<(Complex64, f64)>,
}

impl MappedCrosscut {
    /// Samples an exact rational crosscut, subdividing each segment.
    pub fn from_crosscut(cut: &Crosscut, subdiv: usize) -> Self {
        let subdiv = subdiv.max(1);
        let mut samples = Vec::new();
        let pts: Vec<Complex64> = cut
            .polyline
            .iter()
            .map(|p| {
                let (x, y) = p.to_f64();
                Complex64::new(x, y)
            })
            .collect();
        for k in 0..pts.len() - 1 {
            for s in 0..subdiv {
                samples.push(pts[k] + (pts[k + 1] - pts[k]) * (s as f64 / subdiv as f64));
            }
        }
        samples.push(*pts.last().unwrap());
        let errs = vec![0.0; samples.len()];
        MappedCrosscut {
            samples,
            errs,
            preimage: None,
        }
    }

    pub fn from_estimates(est: &[BoundaryEstimate], preimage: Option<(Complex64, f64)>) -> Self {
        MappedCrosscut {
            samples: est.iter().map(|e| e.value).collect(),
            errs: est.iter().map(|e| e.err).collect(),
            preimage,
        }
    }

    pub fn max_err(&self) -> f64 {
        self.errs.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Largest pairwise sample distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.samples.len() {
            for j in i + 1..self.samples.len() {
                d = d.max((self.samples[i] - self.samples[j]).norm());
            }
        }
        d
    }

    fn dist_to(&self, p: Complex64) -> f64 {
        let mut d = f64::INFINITY;
        for k in 0..self.samples.len() - 1 {
            let a = self.samples[k];
            let b = self.samples[k + 1];
            let ab = b - a;
            let denom = ab.norm_sqr();
            let t = if denom == 0.0 {
                0.0
            } else {
                (((p - a).conj() * ab).re / denom).clamp(0.0, 1.0)
            };
            d = d.min((p - (a + ab * t)).norm());
        }
        d
    }
}

/// Numeric verification of the four recognizing clauses.
///
/// The cap region reading used for clauses 3 and 4: the far side of the
/// sampled arc is identified with the image of the disk cap
/// `{u : |u - zeta| < s_0}`, so membership is decided on preimages.  This
/// interpretation is configurable only through the threshold knob and is
/// recorded here rather than asserted as canonical.
pub fn check_recognizably_bounds(
    cm: &ConformalMap,
    cut: &MappedCrosscut,
    wp: &WitnessParams,
) -> CheckReport {
    let mut clauses = Vec::new();

    // Clause 1: exact rational arithmetic.
    let ok1 = wp.params_valid();
    let margin1 = if ok1 {
        let a = rat_to_f64(&wp.r0);
        let b = rat_to_f64(&wp.s0);
        a.min(b - a).min(0.5 - b)
    } else {
        0.0
    };
    clauses.push(ClauseReport {
        name: "clause1-parameter-range".into(),
        verdict: if ok1 { Verdict::Pass } else { Verdict::Fail },
        margin: margin1,
    });
    if !ok1 {
        return CheckReport::from_clauses(clauses);
    }

    let s0 = rat_to_f64(&wp.s0);
    let r0 = rat_to_f64(&wp.r0);
    let zeta = wp.zeta();
    let eps = cm.eps_map.max(1e-12);

    // Clause 2: phi((1 - s0) zeta) lies on the cut.
    let probe = cm.forward(zeta * (1.0 - s0));
    let d2 = cut.dist_to(probe);
    let tol_lo = (10.0 * eps).max(1e-6) + cut.max_err() + sample_spacing(cut);
    let tol_hi = (tol_lo * 3.0).max(wp.m_tilde_value() / 4.0);
    let v2 = if d2 <= tol_lo {
        Verdict::Pass
    } else if d2 >= tol_hi {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    clauses.push(ClauseReport {
        name: "clause2-probe-on-cut".into(),
        verdict: v2,
        margin: d2,
    });

    // Clauses 3 and 4 need preimage classification of the cut samples.
    let band = 1e-4 + 10.0 * eps;
    let mut states = Vec::new(); // +1 inside cap, 0 near rim, -1 outside
    let mut pres: Vec<Option<Complex64>> = Vec::new();
    let mut unknown = 0usize;
    let mut rim_margin = f64::INFINITY;
    for &w in &cut.samples {
        match cm.inverse_tol(w, 1e-5) {
            Ok(u) => {
                let d = (u - zeta).norm();
                pres.push(Some(u));
                if (d - s0).abs() <= band {
                    states.push(0i8);
                } else {
                    rim_margin = rim_margin.min((d - s0).abs());
                    states.push(if d < s0 { 1 } else { -1 });
                }
            }
            Err(_) => {
                unknown += 1;
                states.push(0);
                pres.push(None);
            }
        }
    }
    let runs_plus = count_runs(&states, 1);
    let runs_rim = count_runs(&states, 0);
    let v3 = if unknown * 5 > states.len() {
        Verdict::Inconclusive
    } else if runs_plus == 2 && runs_rim <= 2 {
        // Two far-side components separated by one touch of the cap rim
        // (the rim band may be split in two by sampling, hence <= 2).
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    clauses.push(ClauseReport {
        name: "clause3-cap-components".into(),
        verdict: v3,
        margin: if rim_margin.is_finite() {
            rim_margin
        } else {
            0.0
        },
    });

    // Clause 4: the radial segment stays m-tilde away from the far-side
    // closure of the cut.  "Far side" means beyond the chord through the
    // cut's preimage-circle center, perpendicular to zeta: the two end
    // arcs near the domain boundary, well separated from the rim-touch
    // point that the radial segment starts at.
    let m_tilde = wp.m_tilde_value();
    let far_thresh = match cut.preimage {
        Some((center, _)) => (center * zeta.conj()).re,
        None => 1.0 - s0 / 4.0,
    };
    let far: Vec<Complex64> = cut
        .samples
        .iter()
        .zip(&pres)
        .filter(|&(_, u)| matches!(u, Some(u) if (u * zeta.conj()).re > far_thresh))
        .map(|(&w, _)| w)
        .collect();
    let mut min_dist = f64::INFINITY;
    for k in 0..=64 {
        let t = (1.0 - s0) + (s0 - r0) * k as f64 / 64.0;
        let p = cm.forward(zeta * t);
        for &w in &far {
            min_dist = min_dist.min((p - w).norm());
        }
    }
    let marg4 = 2.0 * eps + cut.max_err() + 1e-7;
    let v4 = if far.is_empty() {
        Verdict::Inconclusive
    } else if min_dist > m_tilde + marg4 {
        Verdict::Pass
    } else if min_dist < m_tilde - marg4 {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    clauses.push(ClauseReport {
        name: "clause4-radial-clearance".into(),
        verdict: v4,
        margin: min_dist - m_tilde,
    });

    CheckReport::from_clauses(clauses)
}

fn sample_spacing(cut: &MappedCrosscut) -> f64 {
    let mut m: f64 = 0.0;
    for k in 0..cut.samples.len().saturating_sub(1) {
        m = m.max((cut.samples[k + 1] - cut.samples[k]).norm());
    }
    m * 0.5
}

fn count_runs(states: &[i8], which: i8) -> usize {
    let mut runs = 0;
    let mut inside = false;
    for &s in states {
        if s == which && !inside {
            runs += 1;
            inside = true;
        } else if s != which {
            inside = false;
        }
    }
    runs
}

/// Report of the diameter bound test over sampled point pairs.
#[derive(Debug, Clone)]
pub struct WitnessBoundReport {
    pub verdict: Verdict,
    pub pairs: usize,
    /// Smallest observed slack of
    /// `(1 + sqrt 2)·diam(C) - (|phi(z1) - phi(z2)| - tol)`.
    pub worst_slack: f64,
}

/// Samples `pairs` point pairs in `D_{r_0}(zeta) ∩ disk` and checks the
/// diameter bound `(1 + sqrt 2)·diam(C) >= |phi(z1) - phi(z2)| - 1e-6`.
pub fn witness_bound_check(
    cm: &ConformalMap,
    cut: &MappedCrosscut,
    wp: &WitnessParams,
    pairs: usize,
    seed: u64,
) -> WitnessBoundReport {
    let zeta = wp.zeta();
    let r0 = rat_to_f64(&wp.r0);
    let lhs = (1.0 + 2f64.sqrt()) * (cut.diameter() + 2.0 * cut.max_err());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> Complex64 {
        loop {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let y: f64 = rng.gen_range(-1.0..1.0);
            if x * x + y * y > 1.0 {
                continue;
            }
            let z = zeta + r0 * Complex64::new(x, y);
            if z.norm() < 1.0 - 1e-9 {
                return z;
            }
        }
    };
    let mut worst = f64::INFINITY;
    for _ in 0..pairs {
        let z1 = sample(&mut rng);
        let z2 = sample(&mut rng);
        let rhs = (cm.forward(z1) - cm.forward(z2)).norm() - 1e-6;
        worst = worst.min(lhs - rhs);
    }
    let marg = 3.0 * cm.eps_map;
    let verdict = if worst > marg {
        Verdict::Pass
    } else if worst < -marg {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    WitnessBoundReport {
        verdict,
        pairs,
        worst_slack: worst,
    }
}

/// Generates a crosscut as the image of the circle of radius
/// `rho = 3 s_0 / 4` centered at `(1 - s_0 + rho) zeta`: the circle is
/// internally tangent to the cap rim `|u - zeta| = s_0`, crosses the unit
/// circle, and its image is a crosscut of `D` by conformality.  Interior
/// samples are verified to lie in `D` by exact arithmetic with a margin
/// covering their error bars.
pub fn certified_crosscut(
    cm: &ConformalMap,
    dm: &DomainModel,
    wp: &WitnessParams,
    resolution: usize,
) -> Result<MappedCrosscut, BoundaryError> {
    assert!(resolution >= 5);
    let s0 = rat_to_f64(&wp.s0);
    let rho = 0.75 * s0;
    let zeta = wp.zeta();
    let center = zeta * (1.0 - s0 + rho);
    let (lo, hi) = circle_in_disk_interval(center, rho)
        .expect("tangent circle always crosses the unit circle");
    let bnd_precision = (cm.eps_map * 10.0).max(1e-6);
    let mut est = Vec::with_capacity(resolution);
    for i in 0..resolution {
        let psi = lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
        let z = center + rho * Complex64::from_polar(1.0, psi);
        if z.norm() >= 1.0 - 1e-9 {
            est.push(boundary_point(cm, z / z.norm(), bnd_precision)?);
        } else {
            est.push(BoundaryEstimate {
                value: cm.forward(z),
                err: cm.eps_map,
            });
        }
    }
    // Exact interior containment for the interior samples, with margin.
    let grid = pow2(-20);
    for e in est.iter().take(resolution - 1).skip(1) {
        let p = QPoint::new(snap(e.value.re, &grid), snap(e.value.im, &grid));
        let margin = e.err + 2.0 * rat_to_f64(&grid);
        if !dm.point_in_d(&p) {
            return Err(BoundaryError::Containment(format!(
                "sample {} not in D",
                e.value
            )));
        }
        let d2 = rat_to_f64(&dist_sq_to_boundary(dm, &p));
        if d2 <= margin * margin {
            return Err(BoundaryError::Containment(format!(
                "sample {} too close to the boundary (dist^2 {d2:.3e})",
                e.value
            )));
        }
    }
    Ok(MappedCrosscut::from_estimates(&est, Some((center, rho))))
}

fn snap(x: f64, grid: &Rat) -> Rat {
    let g = rat_to_f64(grid);
    rat((x / g).round() as i64, 1) * grid.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainModel;
    use crate::staged::StagedSet;

    fn spike_setup() -> (DomainModel, ConformalMap) {
        let staged = StagedSet::empty(0, 0);
        let dm = DomainModel::build(&staged, 1).unwrap();
        let cm = ConformalMap::solve(&dm, 1e-6).unwrap();
        (dm, cm)
    }

    #[test]
    fn clause1_violation_fails() {
        let (dm, cm) = spike_setup();
        let wp = WitnessParams::new(rat(3, 5), rat(1, 8), rat(1, 8));
        let cut = certified_crosscut(
            &cm,
            &dm,
            &WitnessParams::new(rat(1, 4), rat(1, 8), rat(1, 8)),
            33,
        )
        .unwrap();
        let report = check_recognizably_bounds(&cm, &cut, &wp);
        assert_eq!(report.verdict, Verdict::Fail);
        assert_eq!(report.clauses[0].verdict, Verdict::Fail);
    }

    #[test]
    fn generated_crosscut_passes_all_clauses() {
        let (dm, cm) = spike_setup();
        let wp = WitnessParams::new(rat(1, 4), rat(1, 16), rat(1, 8));
        let cut = certified_crosscut(&cm, &dm, &wp, 65).expect("generator succeeds");
        let report = check_recognizably_bounds(&cm, &cut, &wp);
        assert_eq!(
            report.verdict,
            Verdict::Pass,
            "clauses: {:?}",
            report.clauses
        );
    }

    #[test]
    fn far_cut_fails_clause2() {
        let (dm, cm) = spike_setup();
        let wp = WitnessParams::new(rat(1, 4), rat(1, 16), rat(1, 8));
        // A cut generated for the opposite boundary point misses the probe.
        let other = WitnessParams::new(rat(1, 4), rat(1, 16), rat(5, 8));
        let cut = certified_crosscut(&cm, &dm, &other, 65).unwrap();
        let report = check_recognizably_bounds(&cm, &cut, &wp);
        assert_eq!(report.clauses[1].verdict, Verdict::Fail);
    }

    #[test]
    fn witness_bound_holds_for_generated_cut() {
        let (dm, cm) = spike_setup();
        let wp = WitnessParams::new(rat(1, 4), rat(1, 16), rat(3, 16));
        let cut = certified_crosscut(&cm, &dm, &wp, 65).unwrap();
        let report = witness_bound_check(&cm, &cut, &wp, 200, 42);
        assert_eq!(
            report.verdict,
            Verdict::Pass,
            "slack {}",
            report.worst_slack
        );
    }

    #[test]
    fn undersized_fake_cut_fails_bound() {
        let (dm, cm) = spike_setup();
        let wp = WitnessParams::new(rat(1, 4), rat(1, 16), rat(3, 16));
        let real = certified_crosscut(&cm, &dm, &wp, 65).unwrap();
        // Collapse the cut to two nearby samples: the diameter shrinks
        // far below what the image pairs require.
        let fake = MappedCrosscut {
            samples: vec![
                real.samples[30],
                real.samples[30] + Complex64::new(1e-6, 0.0),
            ],
            errs: vec![0.0, 0.0],
            preimage: None,
        };
        let report = witness_bound_check(&cm, &fake, &wp, 200, 7);
        assert_eq!(report.verdict, Verdict::Fail);
    }
}
