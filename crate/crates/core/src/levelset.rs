//! Level-set flow of a Jordan curve as the intersection of evolving nested
//! annuli, the area law for annuli, and the long-term trichotomy.
//!
//! Every annulus is stored with both boundaries oriented so that the annulus
//! lies on their left. Its area is then `4 pi - off_alpha - off_beta`, where
//! `off` is the area to the right of a boundary.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{
    curves_intersect, diagnostics_unchecked, hausdorff_distance, is_embedded, is_left_of, ClosedSphereCurve, Polyline,
};
use crate::error::{Error, Result};
use crate::flow::{evolve_closed, FlowConfig, FlowTrajectory, TerminalStatus};
use crate::geom::{geodesic_distance, slerp, SpherePoint};

const SPHERE_AREA: f64 = 2.0 * TAU;

/// Region between two disjoint closed curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusState {
    /// Boundary facing the first complementary component.
    pub alpha: ClosedSphereCurve,
    /// Boundary facing the second complementary component.
    pub beta: ClosedSphereCurve,
    pub t: f64,
    pub area: f64,
}

/// Area to the right of a closed curve.
fn off_area(c: &ClosedSphereCurve) -> f64 {
    SPHERE_AREA - diagnostics_unchecked(c).enclosed_area.expect("closed curve")
}

fn is_degenerate(alpha: &ClosedSphereCurve, beta: &ClosedSphereCurve) -> bool {
    alpha.nodes() == beta.reversed().nodes()
}

/// Area of the annulus on the left of both boundaries; exactly 0 for the
/// zero-thickness annulus `(c reversed, c)`.
pub fn annulus_area(alpha: &ClosedSphereCurve, beta: &ClosedSphereCurve) -> f64 {
    if is_degenerate(alpha, beta) {
        return 0.0;
    }
    SPHERE_AREA - off_area(alpha) - off_area(beta)
}

impl AnnulusState {
    /// Both boundaries must be embedded, disjoint, and have the annulus on
    /// their left. `beta` equal to `alpha` reversed is the degenerate annulus.
    pub fn new(alpha: ClosedSphereCurve, beta: ClosedSphereCurve, t: f64) -> Result<Self> {
        for c in [&alpha, &beta] {
            if !is_embedded(c) {
                return Err(Error::Domain("annulus boundary is not embedded".into()));
            }
        }
        if !is_degenerate(&alpha, &beta) {
            if curves_intersect(&alpha, &beta) {
                return Err(Error::Domain("annulus boundaries intersect".into()));
            }
            let area = annulus_area(&alpha, &beta);
            if !(area > 0.0 && area < SPHERE_AREA) {
                return Err(Error::Domain(format!("annulus area {area} outside (0, 4 pi); check boundary orientation")));
            }
        }
        let area = annulus_area(&alpha, &beta);
        Ok(AnnulusState { alpha, beta, t, area })
    }

    /// Annulus between the circles of polar radius `inner < outer` about
    /// `center`.
    pub fn between_circles(center: SpherePoint, inner: f64, outer: f64, nodes: usize) -> Result<Self> {
        if !(0.0 < inner && inner < outer && outer < PI) {
            return Err(Error::Domain(format!("need 0 < inner < outer < pi, got {inner}, {outer}")));
        }
        let alpha = ClosedSphereCurve::circle(center, inner, nodes)?.reversed();
        let beta = ClosedSphereCurve::circle(center, outer, nodes)?;
        Self::new(alpha, beta, 0.0)
    }

    /// Areas of the two complementary components, off `alpha` then off `beta`.
    pub fn complement_areas(&self) -> (f64, f64) {
        if is_degenerate(&self.alpha, &self.beta) {
            let a = off_area(&self.alpha);
            return (a, SPHERE_AREA - a);
        }
        (off_area(&self.alpha), off_area(&self.beta))
    }

    /// Whether `p` is inside the annulus, at least `slack` away from both
    /// boundaries; `None` when `p` is within `slack` of a boundary.
    pub fn contains(&self, p: &SpherePoint, slack: f64) -> Option<bool> {
        let near = |c: &ClosedSphereCurve| crate::curve::distance_to_polyline(p, c) < slack;
        if near(&self.alpha) || near(&self.beta) {
            return None;
        }
        Some(is_left_of(&self.alpha, p) && is_left_of(&self.beta, p))
    }
}

/// Splits every edge longer than `max_edge` into equal geodesic pieces.
fn subdivide(c: &ClosedSphereCurve, max_edge: f64) -> Vec<SpherePoint> {
    let mut out = Vec::with_capacity(c.node_count());
    for i in 0..c.segment_count() {
        let (a, b) = c.segment(i);
        let pieces = (geodesic_distance(a, b) / max_edge).ceil().max(1.0) as usize;
        out.extend((0..pieces).map(|k| slerp(a, b, k as f64 / pieces as f64)));
    }
    out
}

/// Moves every node a geodesic distance `eps` along the bisector of its two
/// edge normals; positive `eps` goes to the left.
fn displace(nodes: &[SpherePoint], eps: f64) -> Vec<SpherePoint> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let p = nodes[i];
            let fwd = p.tangent_toward(&nodes[(i + 1) % n]).unwrap_or_default();
            let back = p.tangent_toward(&nodes[(i + n - 1) % n]).unwrap_or_default();
            let normal = p.vector().cross(&(fwd - back));
            let len = normal.norm();
            if len < 1e-15 {
                return p;
            }
            p.exp(&(normal * (eps / len)))
        })
        .collect()
}

fn smooth_once(nodes: &mut [SpherePoint]) {
    let n = nodes.len();
    let old = nodes.to_vec();
    for i in 0..n {
        let v = old[i].vector() * 0.5 + (old[(i + n - 1) % n].vector() + old[(i + 1) % n].vector()) * 0.25;
        nodes[i] = SpherePoint::normalized(v);
    }
}

const MAX_SMOOTHING: usize = 400;

/// One side's offset at distance `eps`, smoothed until it is embedded and
/// misses the curve. Fails if that needs more than the pass budget or ends
/// farther than `2 eps` from the curve.
fn offset_side(curve: &ClosedSphereCurve, eps: f64, side: f64, level: usize) -> Result<ClosedSphereCurve> {
    let base = subdivide(curve, eps);
    let mut nodes = displace(&base, side * eps);
    let collision = || Error::OffsetCollision { level, eps };
    for _ in 0..=MAX_SMOOTHING {
        let candidate = ClosedSphereCurve::from_nodes_unchecked(nodes.clone());
        if candidate.min_edge() > 1e-8 && is_embedded(&candidate) && !curves_intersect(&candidate, curve) {
            let c = ClosedSphereCurve::new(nodes).map_err(|_| collision())?;
            if hausdorff_distance(&c, curve) > 2.0 * eps {
                return Err(collision());
            }
            return Ok(c);
        }
        smooth_once(&mut nodes);
    }
    Err(collision())
}

/// Annulus approximants at offsets `eps0 2^-n`, `n = 0..n_levels`. Alpha
/// lies in the component on the curve's left, beta in the one on its right.
pub fn approximate_boundaries(curve: &ClosedSphereCurve, eps0: f64, n_levels: usize) -> Vec<Result<AnnulusState>> {
    if let Err(e) = crate::curve::check_embedded(curve) {
        return vec![Err(e)];
    }
    (0..n_levels)
        .into_par_iter()
        .map(|level| {
            let eps = eps0 * 0.5f64.powi(level as i32);
            let alpha = offset_side(curve, eps, 1.0, level)?.reversed();
            let beta = offset_side(curve, eps, -1.0, level)?;
            AnnulusState::new(alpha, beta, 0.0)
        })
        .collect()
}

/// Evolves both boundaries to `t`.
pub fn evolve_annulus(state: &AnnulusState, t: f64, flow: &FlowConfig) -> Result<AnnulusState> {
    let cfg = FlowConfig { max_time: t, snapshot_interval: t.max(f64::MIN_POSITIVE), ..*flow };
    let run = |c: &ClosedSphereCurve| -> Result<ClosedSphereCurve> {
        let traj = evolve_closed(c, &cfg)?;
        match traj.status {
            TerminalStatus::ReachedMaxTime => Ok(traj.last().curve.clone()),
            TerminalStatus::Extinct => Err(Error::ExtinctionBeforeEnd { time: traj.last().t }),
            TerminalStatus::Singularity => Err(Error::BlowUp { time: traj.last().t }),
        }
    };
    if t == 0.0 {
        return Ok(state.clone());
    }
    let (alpha, beta) = rayon::join(|| run(&state.alpha), || run(&state.beta));
    let (alpha, beta) = (alpha?, beta?);
    let area = annulus_area(&alpha, &beta);
    Ok(AnnulusState { alpha, beta, t: state.t + t, area })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SandwichVerdict {
    MeasureZeroCurve,
    PositiveAreaAnnulus,
    Inconclusive,
}

/// One level of the sandwich.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichLevel {
    pub n: usize,
    /// Offset distance; `None` for annuli supplied directly.
    pub offset: Option<f64>,
    /// Hausdorff distance between the evolved boundaries.
    pub gap: Option<f64>,
    pub area: Option<f64>,
    /// Why the level produced no data.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichResult {
    pub t: f64,
    pub levels: Vec<SandwichLevel>,
    pub verdict: SandwichVerdict,
}

/// Area below which an annulus is treated as empty.
pub const AREA_FLOOR: f64 = 1e-2;

/// Gap allowed at offset `eps` after time `t`: three times the barrier
/// radius of a latitude at distance `eps`.
pub fn sandwich_gap_bound(eps: f64, t: f64) -> f64 {
    3.0 * (eps.sin() * t.exp()).min(1.0).asin()
}

impl SandwichResult {
    /// `n, eps, gap, area` rows; failed levels have empty fields.
    pub fn to_csv(&self) -> String {
        let field = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
        let mut out = String::from("n,eps,gap,area\n");
        for l in &self.levels {
            out.push_str(&format!("{},{},{},{}\n", l.n, field(l.offset), field(l.gap), field(l.area)));
        }
        out
    }
}

fn verdict(levels: &[SandwichLevel], t: f64) -> SandwichVerdict {
    let ok: Vec<&SandwichLevel> = levels.iter().filter(|l| l.error.is_none()).collect();
    let Some(finest) = ok.last() else {
        return SandwichVerdict::Inconclusive;
    };
    let (gap, area) = (finest.gap.unwrap_or(f64::INFINITY), finest.area.unwrap_or(0.0));
    if let Some(eps) = finest.offset {
        if gap <= sandwich_gap_bound(eps, t) {
            return SandwichVerdict::MeasureZeroCurve;
        }
    }
    let stable = match ok.len() {
        1 => true,
        k => (area - ok[k - 2].area.unwrap_or(0.0)).abs() <= 0.1 * area,
    };
    if area > AREA_FLOOR && stable {
        SandwichVerdict::PositiveAreaAnnulus
    } else {
        SandwichVerdict::Inconclusive
    }
}

/// Evolves prepared levels `(offset, annulus)` to time `t`; levels are run
/// concurrently and reported in input order.
pub fn sandwich_levels(levels: Vec<(Option<f64>, Result<AnnulusState>)>, t: f64, flow: &FlowConfig) -> SandwichResult {
    let rows: Vec<SandwichLevel> = levels
        .into_par_iter()
        .enumerate()
        .map(|(n, (offset, state))| match state.and_then(|s| evolve_annulus(&s, t, flow)) {
            Ok(s) => SandwichLevel {
                n,
                offset,
                gap: Some(hausdorff_distance(&s.alpha, &s.beta)),
                area: Some(s.area),
                error: None,
            },
            Err(e) => SandwichLevel { n, offset, gap: None, area: None, error: Some(e.to_string()) },
        })
        .collect();
    let verdict = verdict(&rows, t);
    SandwichResult { t, levels: rows, verdict }
}

/// Approximates the level-set flow of `curve` at time `t` by `n_levels`
/// nested annuli with offsets `eps0 2^-n`.
pub fn sandwich_flow(curve: &ClosedSphereCurve, eps0: f64, n_levels: usize, t: f64, flow: &FlowConfig) -> SandwichResult {
    let levels = approximate_boundaries(curve, eps0, n_levels)
        .into_iter()
        .enumerate()
        .map(|(n, s)| (Some(eps0 * 0.5f64.powi(n as i32)), s))
        .collect();
    sandwich_levels(levels, t, flow)
}

fn evolve_checked(c: &ClosedSphereCurve, cfg: &FlowConfig) -> Result<FlowTrajectory<ClosedSphereCurve>> {
    let traj = evolve_closed(c, cfg)?;
    if traj.status == TerminalStatus::Singularity {
        return Err(Error::BlowUp { time: traj.last().t });
    }
    Ok(traj)
}

/// Evolves both boundaries and returns the largest `|mu(t) / (mu(0) e^t) - 1|`
/// over the sample times `k dt_sample <= t_end`.
pub fn area_ode_check(state0: &AnnulusState, t_end: f64, dt_sample: f64, flow: &FlowConfig) -> Result<f64> {
    if state0.area == 0.0 {
        return Ok(0.0);
    }
    let cfg = FlowConfig { max_time: t_end, snapshot_interval: dt_sample, ..*flow };
    let (a, b) = rayon::join(|| evolve_checked(&state0.alpha, &cfg), || evolve_checked(&state0.beta, &cfg));
    let (a, b) = (a?, b?);
    for traj in [&a, &b] {
        if traj.status == TerminalStatus::Extinct {
            return Err(Error::ExtinctionBeforeEnd { time: traj.last().t });
        }
    }
    let mut worst: f64 = 0.0;
    for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
        let mu = annulus_area(&sa.curve, &sb.curve);
        worst = worst.max((mu / (state0.area * sa.t.exp()) - 1.0).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LongTermVerdict {
    ExtinctFiniteTime,
    HemisphereLimit,
    WholeSphere,
    Inconclusive,
}

/// Outcome of [`classify_long_term`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongTermReport {
    pub verdict: LongTermVerdict,
    /// Time at which the verdict was reached (`max_time` for the limit case).
    pub time: Option<f64>,
    /// Largest complementary-component area at `t = 0`.
    pub a_max: f64,
    /// Outcome predicted from `a_max` versus `2 pi`.
    pub expected: LongTermVerdict,
    pub consistent: bool,
    /// `(t, area)` samples.
    pub areas: Vec<(f64, f64)>,
}

/// Tolerance for `A = 2 pi`.
const BISECT_TOL: f64 = 1e-3;

/// Predicted outcome for largest complementary area `a`.
pub fn expected_outcome(a: f64) -> LongTermVerdict {
    if (a - TAU).abs() <= BISECT_TOL {
        LongTermVerdict::HemisphereLimit
    } else if a > TAU {
        LongTermVerdict::ExtinctFiniteTime
    } else {
        LongTermVerdict::WholeSphere
    }
}

/// Right-hand area of a boundary at time `t`. After extinction the side that
/// collapsed has area 0.
fn off_area_at(traj: &FlowTrajectory<ClosedSphereCurve>, t: f64) -> Option<f64> {
    if let Some(s) = traj.snapshots.iter().find(|s| (s.t - t).abs() < 1e-9) {
        if !(traj.status == TerminalStatus::Extinct && std::ptr::eq(s, traj.last())) {
            return Some(off_area(&s.curve));
        }
    }
    let last = traj.last();
    (traj.status == TerminalStatus::Extinct && last.t <= t + 1e-9).then(|| {
        let left = last.diagnostics.enclosed_area.expect("closed curve");
        if left < TAU {
            SPHERE_AREA
        } else {
            0.0
        }
    })
}

/// Evolves the annulus boundaries to `max_time` and classifies the outcome:
/// area below [`AREA_FLOOR`] is extinction, area within it of `4 pi` is the
/// whole sphere, and a surviving boundary with bending `<= 1e-3` and length
/// within `1e-2` of `2 pi` at `max_time` is the hemisphere limit.
pub fn classify_long_term(state0: &AnnulusState, max_time: f64, sample: f64, flow: &FlowConfig) -> Result<LongTermReport> {
    let (ca, cb) = state0.complement_areas();
    let a_max = ca.max(cb);
    let expected = expected_outcome(a_max);
    let cfg = FlowConfig { max_time, snapshot_interval: sample, ..*flow };
    let (a, b) = rayon::join(|| evolve_checked(&state0.alpha, &cfg), || evolve_checked(&state0.beta, &cfg));
    let (a, b) = (a?, b?);

    let steps = (max_time / sample).round() as usize;
    let mut times: Vec<f64> = (0..=steps).map(|k| (k as f64 * sample).min(max_time)).collect();
    for traj in [&a, &b] {
        if traj.status == TerminalStatus::Extinct {
            times.push(traj.last().t);
        }
    }
    times.sort_by(f64::total_cmp);
    times.dedup_by(|x, y| (*x - *y).abs() < 1e-9);

    let mut areas = Vec::new();
    let mut decided = None;
    for &t in &times {
        let (Some(oa), Some(ob)) = (off_area_at(&a, t), off_area_at(&b, t)) else {
            continue;
        };
        let area = (SPHERE_AREA - oa - ob).max(0.0);
        areas.push((t, area));
        if decided.is_none() && t > 0.0 {
            if area <= AREA_FLOOR {
                decided = Some((LongTermVerdict::ExtinctFiniteTime, t));
            } else if area >= SPHERE_AREA - AREA_FLOOR {
                decided = Some((LongTermVerdict::WholeSphere, t));
            }
        }
    }
    let (verdict, time) = match decided {
        Some((v, t)) => (v, Some(t)),
        None => {
            let near_great = [&a, &b].iter().any(|traj| {
                let s = traj.last();
                traj.status == TerminalStatus::ReachedMaxTime
                    && s.diagnostics.bending <= 1e-3
                    && (s.diagnostics.length - TAU).abs() <= 1e-2
            });
            if near_great {
                (LongTermVerdict::HemisphereLimit, Some(max_time))
            } else {
                (LongTermVerdict::Inconclusive, None)
            }
        }
    };
    Ok(LongTermReport { verdict, time, a_max, expected, consistent: verdict == expected, areas })
}

/// The three reference annuli: a thin annulus about a small latitude, one
/// bounded by a bisecting curve, and one between two small polar caps.
pub mod scenarios {
    use super::*;
    use crate::geom::GreatCircle;

    /// Annulus between polar radii 0.28 and 0.32: the outer complement
    /// exceeds `2 pi`.
    pub fn thin_small_latitude(nodes: usize) -> Result<AnnulusState> {
        AnnulusState::between_circles(SpherePoint::north(), 0.28, 0.32, nodes)
    }

    /// Annulus between a bisecting curve (a mode-2 graph of amplitude 0.02
    /// over the equator, odd under a quarter turn) and latitude `-0.1`.
    pub fn straddling_equator(nodes: usize) -> Result<AnnulusState> {
        let g = GreatCircle::equator();
        let upper: Vec<SpherePoint> = (0..nodes)
            .map(|j| {
                let x = TAU * j as f64 / nodes as f64;
                g.point_at(x, (0.02 * (2.0 * x).sin()).atan())
            })
            .collect();
        let alpha = ClosedSphereCurve::new(upper)?.reversed();
        let beta = ClosedSphereCurve::circle(SpherePoint::north(), PI / 2.0 + 0.1, nodes)?;
        AnnulusState::new(alpha, beta, 0.0)
    }

    /// Annulus between the latitudes at polar radius 0.6 about each pole.
    pub fn between_polar_caps(nodes: usize) -> Result<AnnulusState> {
        AnnulusState::between_circles(SpherePoint::north(), 0.6, PI - 0.6, nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::circle_oracle;
    use crate::geom::GreatCircle;
    use approx::assert_abs_diff_eq;

    fn flow() -> FlowConfig {
        FlowConfig { dt: 1e-4, target_nodes: 256, ..Default::default() }
    }

    fn equator(n: usize) -> ClosedSphereCurve {
        ClosedSphereCurve::great_circle(&GreatCircle::equator(), n).unwrap()
    }

    #[test]
    fn offsets_of_equator_are_latitudes() {
        let levels = approximate_boundaries(&equator(256), 0.1, 1);
        let s = levels[0].as_ref().unwrap();
        let g = GreatCircle::equator();
        assert!(s.alpha.nodes().iter().all(|p| (g.signed_band_coordinate(p) - 0.1).abs() < 1e-12));
        assert!(s.beta.nodes().iter().all(|p| (g.signed_band_coordinate(p) + 0.1).abs() < 1e-12));
        assert_abs_diff_eq!(s.area, 2.0 * TAU * 0.1f64.sin(), epsilon = 1e-3);
    }

    #[test]
    fn offsets_of_circle_are_concentric() {
        let c = ClosedSphereCurve::circle(SpherePoint::north(), 0.8, 256).unwrap();
        let s = approximate_boundaries(&c, 0.1, 1).pop().unwrap().unwrap();
        let n = SpherePoint::north();
        assert!(s.alpha.nodes().iter().all(|p| (geodesic_distance(p, &n) - 0.7).abs() < 1e-12));
        assert!(s.beta.nodes().iter().all(|p| (geodesic_distance(p, &n) - 0.9).abs() < 1e-12));
    }

    #[test]
    fn koch_offsets_embedded_and_close() {
        let k = crate::jordan::koch_like(3, SpherePoint::north(), 1.0).unwrap();
        for (level, s) in approximate_boundaries(&k, 0.05, 4).into_iter().enumerate() {
            let s = s.unwrap_or_else(|e| panic!("level {level}: {e}"));
            let eps = 0.05 * 0.5f64.powi(level as i32);
            for c in [&s.alpha, &s.beta] {
                assert!(is_embedded(c));
                assert!(!curves_intersect(c, &k));
                assert!(hausdorff_distance(c, &k) <= 2.0 * eps);
            }
            assert!(s.area > 0.0);
        }
    }

    #[test]
    fn equator_sandwich_is_measure_zero() {
        let r = sandwich_flow(&equator(256), 0.1, 4, 0.1, &flow());
        assert_eq!(r.verdict, SandwichVerdict::MeasureZeroCurve);
        for l in &r.levels {
            let eps = l.offset.unwrap();
            let exact = 2.0 * (eps.sin() * 0.1f64.exp()).asin();
            assert_abs_diff_eq!(l.gap.unwrap(), exact, epsilon = 1e-4);
            assert!(l.gap.unwrap() <= sandwich_gap_bound(eps, 0.1));
        }
        assert!(r.levels.windows(2).all(|w| w[1].gap.unwrap() <= w[0].gap.unwrap() + 1e-3));
        assert!(r.to_csv().lines().count() == 5);
    }

    #[test]
    fn circle_sandwich_tracks_oracle() {
        let r0 = PI / 3.0;
        let c = ClosedSphereCurve::circle(SpherePoint::north(), r0, 256).unwrap();
        let levels = approximate_boundaries(&c, 0.1, 3);
        let n = SpherePoint::north();
        let mut last_gap = f64::INFINITY;
        for (level, s) in levels.into_iter().enumerate() {
            let eps = 0.1 * 0.5f64.powi(level as i32);
            let s = evolve_annulus(&s.unwrap(), 0.2, &flow()).unwrap();
            for (c, r) in [(&s.alpha, r0 - eps), (&s.beta, r0 + eps)] {
                let expected = circle_oracle(r, 0.2).unwrap();
                assert!(c.nodes().iter().all(|p| (geodesic_distance(p, &n) - expected).abs() < 5e-3));
            }
            let gap = hausdorff_distance(&s.alpha, &s.beta);
            assert!(gap < last_gap);
            last_gap = gap;
        }
    }

    #[test]
    fn explicit_annulus_has_positive_area() {
        let s = AnnulusState::between_circles(SpherePoint::north(), 0.6, 1.0, 256).unwrap();
        let r = sandwich_levels(vec![(None, Ok(s))], 0.05, &flow());
        assert_eq!(r.verdict, SandwichVerdict::PositiveAreaAnnulus);
    }

    #[test]
    fn area_law_for_latitude_annuli() {
        let s = AnnulusState::between_circles(SpherePoint::north(), 0.6, 1.0, 256).unwrap();
        assert_abs_diff_eq!(s.area, TAU * (0.6f64.cos() - 1.0f64.cos()), epsilon = 1e-3);
        // the inner boundary dies at ln sec 0.6 = 0.192
        assert!(area_ode_check(&s, 0.18, 0.02, &flow()).unwrap() <= 1e-2);
        assert!(matches!(area_ode_check(&s, 0.3, 0.02, &flow()), Err(Error::ExtinctionBeforeEnd { .. })));
        let band = AnnulusState::between_circles(SpherePoint::north(), PI / 2.0 - 0.05, PI / 2.0 + 0.05, 256).unwrap();
        assert!(area_ode_check(&band, 0.2, 0.02, &flow()).unwrap() <= 1e-2);
        let c = equator(64);
        let flat = AnnulusState::new(c.reversed(), c, 0.0).unwrap();
        assert_eq!(flat.area, 0.0);
        assert_eq!(area_ode_check(&flat, 0.2, 0.05, &flow()).unwrap(), 0.0);
    }

    #[test]
    fn orientation_is_checked() {
        let a = ClosedSphereCurve::circle(SpherePoint::north(), 0.6, 64).unwrap();
        let b = ClosedSphereCurve::circle(SpherePoint::north(), 1.0, 64).unwrap();
        assert!(AnnulusState::new(a.clone(), b.clone(), 0.0).is_err());
        assert!(AnnulusState::new(a.reversed(), b, 0.0).is_ok());
    }

    #[test]
    fn containment_query() {
        let s = AnnulusState::between_circles(SpherePoint::north(), 0.6, 1.0, 128).unwrap();
        assert_eq!(s.contains(&SpherePoint::from_polar(0.8, 0.3), 1e-3), Some(true));
        assert_eq!(s.contains(&SpherePoint::from_polar(0.3, 0.3), 1e-3), Some(false));
        assert_eq!(s.contains(&SpherePoint::from_polar(2.0, 0.3), 1e-3), Some(false));
    }

    #[test]
    fn trichotomy() {
        let cfg = FlowConfig { dt: 1e-4, target_nodes: 128, ..Default::default() };
        let a = classify_long_term(&scenarios::thin_small_latitude(128).unwrap(), 0.2, 0.01, &cfg).unwrap();
        assert_eq!(a.verdict, LongTermVerdict::ExtinctFiniteTime);
        assert!(a.consistent && a.a_max > TAU);
        let t = a.time.unwrap();
        assert!(t >= (1.0 / 0.28f64.cos()).ln() && t <= (1.0 / 0.32f64.cos()).ln() + 0.01, "{t}");

        let c = classify_long_term(&scenarios::between_polar_caps(128).unwrap(), 0.5, 0.01, &cfg).unwrap();
        assert_eq!(c.verdict, LongTermVerdict::WholeSphere);
        assert!(c.consistent && c.a_max < TAU);
    }

    #[test]
    fn bisecting_boundary_keeps_half_the_sphere() {
        let s = scenarios::straddling_equator(128).unwrap();
        let (off_alpha, _) = s.complement_areas();
        assert_abs_diff_eq!(off_alpha, TAU, epsilon = 1e-9);
        let cfg = FlowConfig { dt: 1e-4, target_nodes: 128, max_time: 1.0, snapshot_interval: 0.1, ..Default::default() };
        let traj = evolve_closed(&s.alpha, &cfg).unwrap();
        for snap in &traj.snapshots {
            assert_abs_diff_eq!(snap.diagnostics.enclosed_area.unwrap(), TAU, epsilon = 1e-2);
        }
    }
}
