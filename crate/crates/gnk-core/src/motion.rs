//! Geometric realization of pure braids and collinearity event detection.
//!
//! Base points sit on the unit circle, one per position slot, with a small
//! deterministic jitter that breaks the regular-polygon symmetries. One unit
//! time slice is spent per braid letter: the two strands in the crossing
//! slots rotate by a half turn about the midpoint of their slots
//! (counterclockwise for a positive letter), everything else stands still.
//! Between cancellations the signed area of each strand triple is sampled on
//! a per-slice grid and every sign change is sharpened by bisection.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::braid::BraidWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("braid is not pure: realization requires the identity permutation")]
    NotPure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    fn add(self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }
}

/// Motion of one strand over one time slice.
#[derive(Debug, Clone, Copy)]
enum Motion {
    Fixed(Point),
    /// Half turn about `center`, starting from `center + start_offset`;
    /// `dir` is the sign of the rotation.
    Arc { center: Point, start_offset: Point, dir: f64 },
}

impl Motion {
    fn at(&self, tau: f64) -> Point {
        match *self {
            Motion::Fixed(p) => p,
            Motion::Arc { center, start_offset, dir } => {
                center.add(start_offset.rotated(dir * PI * tau))
            }
        }
    }
}

/// Piecewise-analytic motion of `n` points over `t in [0, 1]`, one slice per
/// braid letter, endpoints at the jittered base configuration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    n: u8,
    base: Vec<Point>,
    slices: Vec<Vec<Motion>>,
    epsilon: f64,
    seed: u64,
}

impl Trajectory {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn slice_count(&self) -> usize {
        self.slices.len()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn base_points(&self) -> &[Point] {
        &self.base
    }

    /// Position of strand `s` (1-based) at global time `t in [0, 1]`.
    pub fn position(&self, strand: u8, t: f64) -> Point {
        let m = self.slices.len();
        let scaled = (t.clamp(0.0, 1.0)) * m as f64;
        let idx = (scaled.floor() as usize).min(m - 1);
        let tau = scaled - idx as f64;
        self.slices[idx][(strand - 1) as usize].at(tau)
    }
}

/// Perturbed base configuration: the unit-circle slot points plus a
/// deterministic jitter of magnitude `epsilon` drawn from `seed`.
fn base_points(n: u8, epsilon: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=n)
        .map(|j| {
            let angle = 2.0 * PI * j as f64 / n as f64;
            let dx: f64 = rng.gen_range(-1.0..=1.0) * epsilon;
            let dy: f64 = rng.gen_range(-1.0..=1.0) * epsilon;
            Point::new(angle.cos() + dx, angle.sin() + dy)
        })
        .collect()
}

/// Realizes a pure braid as a trajectory: one half-twist of the two strands
/// in the crossing slots per letter, all other strands fixed at their slot
/// points. Start and end configurations coincide because the braid is pure.
pub fn realize(b: &BraidWord, epsilon: f64, seed: u64) -> Result<Trajectory, RealizeError> {
    if !b.is_pure() {
        return Err(RealizeError::NotPure);
    }
    let n = b.n();
    let base = base_points(n, epsilon, seed);
    let mut occupant: Vec<u8> = (1..=n).collect();
    let mut slices = Vec::with_capacity(b.len().max(1));
    if b.is_empty() {
        slices.push(base.iter().map(|&p| Motion::Fixed(p)).collect());
    }
    for letter in b.letters() {
        let i = (letter.index - 1) as usize;
        let (pa, pb) = (base[i], base[i + 1]);
        let center = Point::new((pa.x + pb.x) / 2.0, (pa.y + pb.y) / 2.0);
        let dir = letter.sign as f64;
        let mut motions = vec![Motion::Fixed(Point::new(0.0, 0.0)); n as usize];
        for slot in 0..n as usize {
            let strand = occupant[slot] as usize - 1;
            motions[strand] = if slot == i || slot == i + 1 {
                Motion::Arc { center, start_offset: base[slot].sub(center), dir }
            } else {
                Motion::Fixed(base[slot])
            };
        }
        slices.push(motions);
        occupant.swap(i, i + 1);
    }
    Ok(Trajectory { n, base, slices, epsilon, seed })
}

/// Detection tolerances. The circumradius is 1, so slopes and distances are
/// on that scale.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Sample grid per trajectory slice.
    pub samples_per_segment: usize,
    /// Bisection stops when the bracket is this narrow in `t`.
    pub time_tol: f64,
    /// Two events closer than this are simultaneous (degenerate).
    pub min_event_gap: f64,
    /// Signed-area slope below this at a root is a tangency (degenerate).
    pub min_slope: f64,
    /// A fourth point closer than this to the event line is degenerate.
    pub collinear_tol: f64,
    /// Projection gap below which the middle strand is ambiguous.
    pub middle_tie_tol: f64,
    /// Minimum allowed pairwise distance at any sampled time.
    pub min_separation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            samples_per_segment: 512,
            time_tol: 1e-12,
            min_event_gap: 1e-6,
            min_slope: 1e-9,
            collinear_tol: 1e-7,
            middle_tie_tol: 1e-9,
            min_separation: 1e-9,
        }
    }
}

/// A simple zero of the signed area of one strand triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollinearityEvent {
    pub t: f64,
    /// `[left, middle, right]` in canonical generator order.
    pub triple: [u8; 3],
    pub middle: u8,
    /// Sign of the time derivative of the signed area at the root.
    pub orientation_flip: i8,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DegeneracyFlags {
    pub simultaneous_triples: bool,
    pub four_point_collinearity: bool,
    pub tangency: bool,
    pub middle_tie: bool,
    pub near_collision: bool,
}

impl DegeneracyFlags {
    pub fn any(&self) -> bool {
        self.simultaneous_triples
            || self.four_point_collinearity
            || self.tangency
            || self.middle_tie
            || self.near_collision
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub event_count: usize,
    pub min_time_gap: Option<f64>,
    pub min_abs_slope: Option<f64>,
    pub flags: DegeneracyFlags,
    pub retries_used: u32,
    pub pass: bool,
}

fn signed_area(tr: &Trajectory, triple: [u8; 3], t: f64) -> f64 {
    let a = tr.position(triple[0], t);
    let b = tr.position(triple[1], t);
    let c = tr.position(triple[2], t);
    b.sub(a).cross(c.sub(a))
}

fn bisect(tr: &Trajectory, triple: [u8; 3], mut lo: f64, mut hi: f64, f_lo: f64, tol: f64) -> f64 {
    let sign_lo = f_lo.signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = signed_area(tr, triple, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn triples(n: u8) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Scans every strand triple for simple zeros of its signed area, resolves
/// the middle strand at each root, and grades the trajectory: finitely many
/// events, one triple per event, robust slopes and gaps. A failing report
/// means the caller should perturb and retry.
pub fn detect_events(tr: &Trajectory, tol: &Tolerances) -> (Vec<CollinearityEvent>, StabilityReport) {
    let mut flags = DegeneracyFlags::default();
    let mut events: Vec<CollinearityEvent> = Vec::new();
    let mut min_abs_slope: Option<f64> = None;

    let m = tr.slice_count();
    let grid = tol.samples_per_segment;
    let step = 1.0 / (m as f64 * grid as f64);

    // Pairwise separation check on the shared sample grid.
    let mut min_sep = f64::INFINITY;
    for g in 0..=(m * grid) {
        let t = g as f64 * step;
        let pts: Vec<Point> = (1..=tr.n()).map(|s| tr.position(s, t)).collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                min_sep = min_sep.min(pts[i].sub(pts[j]).norm());
            }
        }
    }
    if min_sep < tol.min_separation {
        flags.near_collision = true;
    }

    for triple in triples(tr.n()) {
        let mut roots: Vec<f64> = Vec::new();
        for slice in 0..m {
            let t0 = slice as f64 / m as f64;
            let mut prev_t = t0;
            let mut prev_f = signed_area(tr, triple, prev_t);
            for g in 1..=grid {
                let t = t0 + g as f64 * step;
                let f = signed_area(tr, triple, t);
                if prev_f == 0.0 {
                    roots.push(prev_t);
                } else if f != 0.0 && f.signum() != prev_f.signum() {
                    roots.push(bisect(tr, triple, prev_t, t, prev_f, tol.time_tol));
                }
                prev_t = t;
                prev_f = f;
            }
            if prev_f == 0.0 && slice == m - 1 {
                roots.push(prev_t);
            }
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots.dedup_by(|a, b| (*a - *b).abs() <= 2.0 * tol.time_tol);

        for t in roots {
            // Derivative of the signed area, for the stability grade.
            let h = (10.0 * tol.time_tol).max(1e-9);
            let lo = (t - h).max(0.0);
            let hi = (t + h).min(1.0);
            let slope = (signed_area(tr, triple, hi) - signed_area(tr, triple, lo)) / (hi - lo);
            if slope.abs() < tol.min_slope {
                flags.tangency = true;
            }
            min_abs_slope = Some(min_abs_slope.map_or(slope.abs(), |s: f64| s.min(slope.abs())));

            // Order the three strands along the line through the farthest
            // pair; the median is the middle strand.
            let pts = [
                tr.position(triple[0], t),
                tr.position(triple[1], t),
                tr.position(triple[2], t),
            ];
            let dists = [
                (pts[0].sub(pts[1]).norm(), 0, 1),
                (pts[0].sub(pts[2]).norm(), 0, 2),
                (pts[1].sub(pts[2]).norm(), 1, 2),
            ];
            let &(_, fa, fb) = dists
                .iter()
                .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .unwrap();
            let dir = pts[fb].sub(pts[fa]);
            let dir = Point::new(dir.x / dir.norm(), dir.y / dir.norm());
            let mut proj: Vec<(f64, usize)> = (0..3).map(|i| (pts[i].dot(dir), i)).collect();
            proj.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            if proj[1].0 - proj[0].0 < tol.middle_tie_tol || proj[2].0 - proj[1].0 < tol.middle_tie_tol
            {
                flags.middle_tie = true;
            }
            let middle = triple[proj[1].1];
            let outer = [triple[proj[0].1], triple[proj[2].1]];

            // Any fourth strand on the same line makes the event degenerate.
            for other in 1..=tr.n() {
                if triple.contains(&other) {
                    continue;
                }
                let p = tr.position(other, t);
                if dir.cross(p.sub(pts[fa])).abs() < tol.collinear_tol {
                    flags.four_point_collinearity = true;
                }
            }

            let (left, right) = (outer[0].min(outer[1]), outer[0].max(outer[1]));
            events.push(CollinearityEvent {
                t,
                triple: [left, middle, right],
                middle,
                orientation_flip: if slope >= 0.0 { 1 } else { -1 },
            });
        }
    }

    events.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap().then(a.triple.cmp(&b.triple)));

    let mut min_gap: Option<f64> = None;
    for pair in events.windows(2) {
        let gap = pair[1].t - pair[0].t;
        min_gap = Some(min_gap.map_or(gap, |g: f64| g.min(gap)));
    }
    if min_gap.is_some_and(|g| g < tol.min_event_gap) {
        flags.simultaneous_triples = true;
    }

    let report = StabilityReport {
        event_count: events.len(),
        min_time_gap: min_gap,
        min_abs_slope,
        flags,
        retries_used: 0,
        pass: !flags.any(),
    };
    (events, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;

    #[test]
    fn constant_trajectory_has_no_events() {
        let b = BraidWord::empty(5);
        let tr = realize(&b, 1e-3, 7).unwrap();
        let (events, report) = detect_events(&tr, &Tolerances::default());
        assert!(events.is_empty());
        assert!(report.pass);
        assert_eq!(report.event_count, 0);
    }

    #[test]
    fn realize_rejects_non_pure() {
        let b = parse_braid("s1", 3).unwrap();
        assert_eq!(realize(&b, 1e-3, 0).err(), Some(RealizeError::NotPure));
    }

    #[test]
    fn endpoints_return_to_base() {
        let b = parse_braid("s2 s2 s1 s1^-1", 3).unwrap();
        let tr = realize(&b, 1e-3, 3).unwrap();
        for strand in 1..=3u8 {
            let start = tr.position(strand, 0.0);
            let end = tr.position(strand, 1.0);
            assert!((start.x - end.x).abs() < 1e-12);
            assert!((start.y - end.y).abs() < 1e-12);
            let base = tr.base_points()[(strand - 1) as usize];
            assert!((start.x - base.x).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectory_is_continuous_across_slices() {
        let b = parse_braid("s2 s2 s1 s1", 3).unwrap();
        let tr = realize(&b, 1e-3, 11).unwrap();
        for strand in 1..=3u8 {
            for k in 1..tr.slice_count() {
                let t = k as f64 / tr.slice_count() as f64;
                let before = tr.position(strand, t - 1e-13);
                let after = tr.position(strand, t + 1e-13);
                assert!(before.sub(after).norm() < 1e-9);
            }
        }
    }

    /// Closed-form check for the two-strand rotation in the 3-strand braid:
    /// the rotating pair's line passes through the fixed point exactly when
    /// its direction angle hits the fixed point's offset angle mod pi. With
    /// zero jitter the roots and middles are exactly computable.
    #[test]
    fn rotation_braid_matches_analytic_roots() {
        let b = parse_braid("s2 s2", 3).unwrap();
        let tr = realize(&b, 0.0, 0).unwrap();
        let (events, report) = detect_events(&tr, &Tolerances::default());
        assert!(report.pass, "flags: {:?}", report.flags);
        assert_eq!(events.len(), 2);

        // Oracle: base points of slots 2 and 3 rotate about their midpoint.
        let p1 = Point::new((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
        let p2 = Point::new((4.0 * PI / 3.0).cos(), (4.0 * PI / 3.0).sin());
        let p3 = Point::new(1.0, 0.0);
        let mid = Point::new((p2.x + p3.x) / 2.0, (p2.y + p3.y) / 2.0);
        let theta0 = (p3.y - mid.y).atan2(p3.x - mid.x);
        let theta_star = (p1.y - mid.y).atan2(p1.x - mid.x);
        let delta = (theta_star - theta0).rem_euclid(PI);
        let expected: Vec<f64> = (0..2).map(|k| (delta + k as f64 * PI) / (2.0 * PI)).collect();
        // Middle strand: strand 3 when its offset angle is aligned with the
        // fixed point, strand 2 when anti-aligned.
        let expected_middles: Vec<u8> = expected
            .iter()
            .map(|&t| {
                let angle = theta0 + 2.0 * PI * t - theta_star;
                if angle.cos() > 0.0 {
                    3
                } else {
                    2
                }
            })
            .collect();

        for (event, (&t_exp, &mid_exp)) in
            events.iter().zip(expected.iter().zip(&expected_middles))
        {
            assert!((event.t - t_exp).abs() < 1e-9, "t={} expected {}", event.t, t_exp);
            assert_eq!(event.middle, mid_exp);
        }
        // Frozen values for the unperturbed configuration.
        assert!((events[0].t - 0.25).abs() < 1e-9);
        assert!((events[1].t - 0.75).abs() < 1e-9);
        assert_eq!(events[0].middle, 3);
        assert_eq!(events[1].middle, 2);
    }

    #[test]
    fn events_keep_the_middle_strand_in_the_middle() {
        let b = parse_braid("s1 s1 s2 s2", 4).unwrap();
        let tr = realize(&b, 1e-3, 5).unwrap();
        let (events, report) = detect_events(&tr, &Tolerances::default());
        assert!(report.pass);
        for e in &events {
            let pts: Vec<Point> = e.triple.iter().map(|&s| tr.position(s, e.t)).collect();
            let dir = pts[2].sub(pts[0]);
            let middle_proj = pts[1].sub(pts[0]).dot(dir);
            assert!(middle_proj > 0.0 && middle_proj < dir.dot(dir));
        }
    }

    #[test]
    fn jitter_does_not_change_the_event_pattern() {
        let b = parse_braid("s2 s2", 3).unwrap();
        let mut patterns = std::collections::BTreeSet::new();
        for seed in 0..6u64 {
            let tr = realize(&b, 1e-3, seed).unwrap();
            let (events, report) = detect_events(&tr, &Tolerances::default());
            assert!(report.pass, "seed {seed}");
            let pattern: Vec<([u8; 3], u8)> =
                events.iter().map(|e| (e.triple, e.middle)).collect();
            patterns.insert(pattern);
        }
        assert_eq!(patterns.len(), 1);
    }
}
