//! Parametric curve shortening flow on the unit sphere.
//!
//! Each node moves by the discrete geodesic curvature vector and is then
//! projected back onto the sphere. Arc endpoints never move.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::curve::{check_embedded, diagnostics_unchecked, ClosedSphereCurve, CurveDiagnostics, Polyline, Resample, SphereArc};
use crate::error::{Error, Result};
use crate::geom::{geodesic_distance, GreatCircle, SpherePoint, Vec3};

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    /// Largest step; reduced automatically to respect `dt <= 0.25 h_min^2`.
    pub dt: f64,
    /// Remesh to equal arc-length spacing every this many steps.
    pub remesh_every: usize,
    /// Upper bound on the node count after remeshing.
    pub target_nodes: usize,
    /// Closed curves shorter than this are declared extinct.
    pub extinction_length: f64,
    pub max_time: f64,
    /// Snapshots are taken at integer multiples of this interval.
    pub snapshot_interval: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            dt: 1e-4,
            remesh_every: 20,
            target_nodes: 512,
            extinction_length: 1e-2,
            max_time: 1.0,
            snapshot_interval: 1e-2,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::ConfigInvalid(what.to_string()));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if self.remesh_every == 0 {
            return bad("remesh_every must be at least 1");
        }
        if self.target_nodes < 32 {
            return bad("target_nodes must be at least 32");
        }
        if !(self.extinction_length > 0.0) {
            return bad("extinction_length must be positive");
        }
        if !(self.max_time > 0.0 && self.max_time.is_finite()) {
            return bad("max_time must be positive");
        }
        if !(self.snapshot_interval > 0.0) {
            return bad("snapshot_interval must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalStatus {
    Extinct,
    ReachedMaxTime,
    Singularity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot<C> {
    pub t: f64,
    pub curve: C,
    pub diagnostics: CurveDiagnostics,
}

/// Snapshots in strictly increasing time plus the reason the run stopped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTrajectory<C> {
    pub snapshots: Vec<Snapshot<C>>,
    pub status: TerminalStatus,
    pub steps: usize,
}

impl<C> FlowTrajectory<C> {
    pub fn last(&self) -> &Snapshot<C> {
        self.snapshots.last().expect("trajectory has an initial snapshot")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.diagnostics.length).collect()
    }
}

/// Curvature vector at `p` from its two neighbours, using chord lengths;
/// exact for circles.
fn curvature_vector(prev: &Vec3, p: &Vec3, next: &Vec3) -> Vec3 {
    let (dm, dp) = (p - prev, next - p);
    let (hm, hp) = (dm.norm(), dp.norm());
    let k = (dp / hp - dm / hm) * (2.0 / (hm + hp));
    k - p * p.dot(&k)
}

/// Hermite tangent at node `i` with respect to chord length.
fn spline_tangent(pts: &[Vec3], i: usize, closed: bool) -> Vec3 {
    let n = pts.len();
    if !closed && i == 0 {
        return (pts[1] - pts[0]).normalize();
    }
    if !closed && i == n - 1 {
        return (pts[n - 1] - pts[n - 2]).normalize();
    }
    let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
    let (dm, dp) = (pts[i] - pts[prev], pts[next] - pts[i]);
    let (hm, hp) = (dm.norm(), dp.norm());
    (dp * (hm / hp) + dm * (hp / hm)) / (hm + hp)
}

/// Equal arc-length remesh through a cubic Hermite (Catmull-Rom) spline of
/// the nodes, projected back onto the sphere. Arc endpoints are kept.
fn remesh(nodes: &[SpherePoint], closed: bool, n_out: usize) -> Vec<SpherePoint> {
    let pts: Vec<Vec3> = nodes.iter().map(|p| *p.vector()).collect();
    let n = pts.len();
    let segs = if closed { n } else { n - 1 };
    let chords: Vec<f64> = (0..segs).map(|i| (pts[(i + 1) % n] - pts[i]).norm()).collect();
    let tangents: Vec<Vec3> = (0..n).map(|i| spline_tangent(&pts, i, closed)).collect();
    let total: f64 = chords.iter().sum();
    let spacing = if closed { total / n_out as f64 } else { total / (n_out - 1) as f64 };

    let mut out = Vec::with_capacity(n_out);
    let (mut seg, mut start) = (0usize, 0.0f64);
    for k in 0..n_out {
        if !closed && k == n_out - 1 {
            out.push(nodes[n - 1]);
            break;
        }
        let s = spacing * k as f64;
        while seg + 1 < segs && start + chords[seg] <= s {
            start += chords[seg];
            seg += 1;
        }
        if !closed && k == 0 {
            out.push(nodes[0]);
            continue;
        }
        let h = chords[seg];
        let u = ((s - start) / h).clamp(0.0, 1.0);
        let (u2, u3) = (u * u, u * u * u);
        let j = (seg + 1) % n;
        let v = pts[seg] * (2.0 * u3 - 3.0 * u2 + 1.0)
            + tangents[seg] * (h * (u3 - 2.0 * u2 + u))
            + pts[j] * (-2.0 * u3 + 3.0 * u2)
            + tangents[j] * (h * (u3 - u2));
        out.push(SpherePoint::normalized(v));
    }
    out
}

fn edge_range(nodes: &[SpherePoint], closed: bool) -> (f64, f64, f64) {
    let n = nodes.len();
    let segs = if closed { n } else { n - 1 };
    let (mut lo, mut hi, mut sum) = (f64::INFINITY, 0.0f64, 0.0);
    for i in 0..segs {
        let h = geodesic_distance(&nodes[i], &nodes[(i + 1) % n]);
        lo = lo.min(h);
        hi = hi.max(h);
        sum += h;
    }
    (lo, hi, sum)
}

const MAX_HALVINGS: usize = 8;

fn integrate<C: Resample + Clone>(curve: &C, cfg: &FlowConfig) -> FlowTrajectory<C> {
    let closed = curve.is_closed();
    let mut nodes = curve.nodes().to_vec();
    let n0 = nodes.len();
    let (_, _, l0) = edge_range(&nodes, closed);
    let h_target = l0 / n0.min(cfg.target_nodes) as f64;
    let n_min = n0.min(32);

    let snapshot = |nodes: &[SpherePoint], t: f64| {
        let c = curve.with_nodes(nodes.to_vec());
        let diagnostics = diagnostics_unchecked(&c);
        Snapshot { t, curve: c, diagnostics }
    };

    let mut snapshots = vec![snapshot(&nodes, 0.0)];
    let mut t = 0.0;
    let mut dt = cfg.dt;
    let mut steps = 0usize;
    let mut next_index = 1usize;
    let mut velocity = vec![Vec3::zeros(); n0];

    let status = loop {
        let target = (next_index as f64 * cfg.snapshot_interval).min(cfg.max_time);
        let (h_min, _, _) = edge_range(&nodes, closed);
        let limit = 0.25 * h_min * h_min;
        let mut halvings = 0;
        while dt > limit {
            dt *= 0.5;
            halvings += 1;
            if halvings > MAX_HALVINGS {
                break;
            }
        }
        if halvings > MAX_HALVINGS || !limit.is_finite() {
            break TerminalStatus::Singularity;
        }
        while 2.0 * dt <= cfg.dt && 8.0 * dt <= limit {
            dt *= 2.0;
        }

        let truncated = t + dt >= target;
        let step = if truncated { target - t } else { dt };
        let n = nodes.len();
        velocity.resize(n, Vec3::zeros());
        for i in 0..n {
            if !closed && (i == 0 || i == n - 1) {
                velocity[i] = Vec3::zeros();
                continue;
            }
            let prev = nodes[(i + n - 1) % n].vector();
            let next = nodes[(i + 1) % n].vector();
            velocity[i] = curvature_vector(prev, nodes[i].vector(), next);
        }
        let mut finite = true;
        for i in 0..n {
            if !closed && (i == 0 || i == n - 1) {
                continue;
            }
            let moved = nodes[i].vector() + velocity[i] * step;
            if !(moved.iter().all(|x| x.is_finite()) && moved.norm() > 1e-12) {
                finite = false;
                break;
            }
            nodes[i] = SpherePoint::normalized(moved);
        }
        if !finite {
            break TerminalStatus::Singularity;
        }
        t = if truncated { target } else { t + step };
        steps += 1;

        let (h_min, h_max, length) = edge_range(&nodes, closed);
        if steps.is_multiple_of(cfg.remesh_every) || h_min < 0.3 * h_max {
            let wanted = ((length / h_target).round() as usize).clamp(n_min, cfg.target_nodes);
            let count = if (wanted as f64 - n as f64).abs() > 0.1 * n as f64 { wanted } else { n };
            nodes = remesh(&nodes, closed, count);
        }

        if closed && length < cfg.extinction_length {
            snapshots.push(snapshot(&nodes, t));
            break TerminalStatus::Extinct;
        }
        if truncated {
            snapshots.push(snapshot(&nodes, t));
            next_index += 1;
            if t >= cfg.max_time {
                break TerminalStatus::ReachedMaxTime;
            }
        }
    };
    if status == TerminalStatus::Singularity && snapshots.last().map(|s| s.t) != Some(t) {
        snapshots.push(snapshot(&nodes, t));
    }
    FlowTrajectory { snapshots, status, steps }
}

/// Evolves an embedded closed curve.
pub fn evolve_closed(curve: &ClosedSphereCurve, cfg: &FlowConfig) -> Result<FlowTrajectory<ClosedSphereCurve>> {
    cfg.validate()?;
    check_embedded(curve)?;
    Ok(integrate(curve, cfg))
}

/// Evolves an arc with both endpoints held fixed.
pub fn evolve_arc(arc: &SphereArc, cfg: &FlowConfig) -> Result<FlowTrajectory<SphereArc>> {
    cfg.validate()?;
    if geodesic_distance(arc.endpoint_a(), arc.endpoint_b()) > std::f64::consts::PI - 1e-9 {
        return Err(Error::AntipodalEndpoints);
    }
    Ok(integrate(arc, cfg))
}

/// Radius at time `t` of a geodesic circle of initial radius `r0`; zero at
/// and after the extinction time `ln(sec r0)`.
pub fn circle_oracle(r0: f64, t: f64) -> Result<f64> {
    if !(r0 > 0.0 && r0 < FRAC_PI_2) || !(t >= 0.0) {
        return Err(Error::Domain(format!("circle_oracle needs 0 < r0 < pi/2 and t >= 0, got r0 = {r0}, t = {t}")));
    }
    let c = r0.cos() * t.exp();
    Ok(if c >= 1.0 { 0.0 } else { c.acos() })
}

/// Extinction time `ln(sec r0)` of a geodesic circle.
pub fn circle_extinction_time(r0: f64) -> Result<f64> {
    if !(r0 > 0.0 && r0 < FRAC_PI_2) {
        return Err(Error::Domain(format!("extinction time needs 0 < r0 < pi/2, got {r0}")));
    }
    Ok(-r0.cos().ln())
}

/// Halfwidth at time `t` of the band `B_R(g)` whose boundary latitudes act
/// as barriers: `arcsin(sin R e^t)`.
pub fn barrier_radius_oracle(r: f64, t: f64) -> Result<f64> {
    let s = r.sin() * t.exp();
    if !(0.0..FRAC_PI_2).contains(&r) || !(t >= 0.0) || s > 1.0 {
        return Err(Error::Domain(format!("band of halfwidth {r} reaches the pole by t = {t}")));
    }
    Ok(s.asin())
}

/// First time every node lies in the closed cap `B_radius(center)`,
/// linearly interpolated between snapshots.
pub fn time_to_enter_cap<C: Polyline>(traj: &FlowTrajectory<C>, center: &SpherePoint, radius: f64) -> Result<f64> {
    let reach = |c: &C| c.nodes().iter().map(|p| geodesic_distance(p, center)).fold(0.0, f64::max);
    let mut prev: Option<(f64, f64)> = None;
    for s in &traj.snapshots {
        let m = reach(&s.curve);
        if m <= radius {
            return Ok(match prev {
                None => s.t,
                Some((t0, m0)) => t0 + (s.t - t0) * (m0 - radius) / (m0 - m),
            });
        }
        prev = Some((s.t, m));
    }
    Err(Error::NeverEnters { max_time: traj.last().t })
}

/// Band and closeness parameters shared by the straightening experiment and
/// the Dirichlet arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeafParams {
    /// Band halfwidth `r`.
    pub r: f64,
    /// Radius `C` of the region where closeness is required.
    pub c: f64,
    /// Closeness angle `alpha`.
    pub alpha: f64,
}

impl LeafParams {
    /// Requires `0 < 2r < alpha C` and `C < pi/2`.
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.alpha > 0.0 && self.c > 0.0 && self.c < FRAC_PI_2) {
            return Err(Error::ParamDomain(format!("need r, alpha > 0 and 0 < C < pi/2: {self:?}")));
        }
        if !(2.0 * self.r < self.alpha * self.c) {
            return Err(Error::ParamDomain(format!("need 2r < alpha C, got 2r = {}, alpha C = {}", 2.0 * self.r, self.alpha * self.c)));
        }
        Ok(())
    }
}

/// Endpoints and parameters of a Dirichlet arc straddling `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletArcSpec {
    pub g: GreatCircle,
    pub params: LeafParams,
    pub a0: SpherePoint,
    pub a1: SpherePoint,
}

impl DirichletArcSpec {
    /// `a1` is the reflection of `a0` across `g`; `a0` must lie outside
    /// `B_{(1+alpha) r}(g)`.
    pub fn new(g: GreatCircle, params: LeafParams, a0: SpherePoint) -> Result<Self> {
        params.validate()?;
        let band = g.signed_band_coordinate(&a0).abs();
        if band <= (1.0 + params.alpha) * params.r {
            return Err(Error::ParamDomain(format!(
                "endpoint band coordinate {band} not outside (1 + alpha) r = {}",
                (1.0 + params.alpha) * params.r
            )));
        }
        Ok(DirichletArcSpec { g, params, a0, a1: g.reflect(&a0) })
    }
}

/// Outcome of evolving a leafable curve and watching it straighten.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StraighteningReport {
    /// `(t, c1_deviation(l_t, g))` at every snapshot.
    pub deviation: Vec<(f64, f64)>,
    /// First snapshot time with deviation `<= alpha`.
    pub first_within_alpha: Option<f64>,
    /// Initial band halfwidth actually occupied by the curve.
    pub initial_band: f64,
    /// Containment in `B_{(1+alpha) r0}(g)` at every snapshot where the
    /// barrier radius is still below `(1+alpha) r0`.
    pub contained_while_barrier_holds: bool,
    /// Containment in `B_{R_t}(g)` (plus 1e-3) at every snapshot.
    pub barrier_respected: bool,
    pub status: TerminalStatus,
}

/// Evolves `ell` up to `t_end`, recording its closeness to `g`.
pub fn straightening_experiment(
    ell: &ClosedSphereCurve,
    g: &GreatCircle,
    params: &LeafParams,
    t_end: f64,
    cfg: &FlowConfig,
) -> Result<StraighteningReport> {
    let cfg = FlowConfig { max_time: t_end, ..*cfg };
    let traj = evolve_closed(ell, &cfg)?;
    let band_of = |c: &ClosedSphereCurve| c.nodes().iter().map(|p| g.signed_band_coordinate(p).abs()).fold(0.0, f64::max);
    let r0 = band_of(ell);
    let widened = (1.0 + params.alpha) * r0;
    let mut deviation = Vec::with_capacity(traj.snapshots.len());
    let mut contained = true;
    let mut barrier = true;
    for s in &traj.snapshots {
        deviation.push((s.t, crate::curve::c1_deviation(&s.curve, g)?));
        let band = band_of(&s.curve);
        let rt = barrier_radius_oracle(r0, s.t)?;
        if band > rt + 1e-3 {
            barrier = false;
        }
        if rt <= widened && band > widened {
            contained = false;
        }
    }
    let first_within_alpha = deviation.iter().find(|(_, d)| *d <= params.alpha).map(|(t, _)| *t);
    Ok(StraighteningReport {
        deviation,
        first_within_alpha,
        initial_band: r0,
        contained_while_barrier_holds: contained,
        barrier_respected: barrier,
        status: traj.status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{hausdorff_distance, ClosedSphereCurve};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn mean_radius(c: &ClosedSphereCurve, center: &SpherePoint) -> f64 {
        let d: f64 = c.nodes().iter().map(|p| geodesic_distance(p, center)).sum();
        d / c.node_count() as f64
    }

    #[test]
    fn config_validation() {
        assert!(FlowConfig::default().validate().is_ok());
        let bad = FlowConfig { target_nodes: 16, ..Default::default() };
        assert!(matches!(bad.validate(), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn oracle_examples() {
        assert_abs_diff_eq!(circle_oracle(0.7, 0.0).unwrap(), 0.7, epsilon = 1e-15);
        assert_eq!(circle_oracle(PI / 3.0, 2f64.ln()).unwrap(), 0.0);
        assert_abs_diff_eq!(circle_oracle(PI / 3.0, 0.2).unwrap(), (0.5 * 0.2f64.exp()).acos(), epsilon = 1e-15);
        assert_abs_diff_eq!(circle_oracle(PI / 3.0, 0.2).unwrap(), 0.914, epsilon = 5e-4);
        assert!(circle_oracle(1.6, 0.1).is_err());
        assert_abs_diff_eq!(circle_extinction_time(PI / 3.0).unwrap(), 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(barrier_radius_oracle(0.3, 0.0).unwrap(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(barrier_radius_oracle(0.1, 0.05).unwrap(), 0.10515, epsilon = 1e-5);
        assert!(matches!(barrier_radius_oracle(1.4, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn shrinking_circle_matches_oracle() {
        let r0 = PI / 3.0;
        let c = ClosedSphereCurve::circle(SpherePoint::north(), r0, 512).unwrap();
        let cfg = FlowConfig { max_time: 0.2, snapshot_interval: 0.05, ..Default::default() };
        let traj = evolve_closed(&c, &cfg).unwrap();
        assert_eq!(traj.status, TerminalStatus::ReachedMaxTime);
        let times = traj.times();
        assert_eq!(times.len(), 5);
        for (k, t) in times.iter().enumerate() {
            assert_abs_diff_eq!(*t, 0.05 * k as f64, epsilon = 1e-15);
        }
        let r = mean_radius(&traj.last().curve, &SpherePoint::north());
        assert_abs_diff_eq!(r, circle_oracle(r0, 0.2).unwrap(), epsilon = 5e-3);
    }

    #[test]
    fn circle_goes_extinct_on_time() {
        let c = ClosedSphereCurve::circle(SpherePoint::north(), PI / 3.0, 256).unwrap();
        let cfg = FlowConfig { max_time: 1.0, snapshot_interval: 0.05, target_nodes: 256, ..Default::default() };
        let traj = evolve_closed(&c, &cfg).unwrap();
        assert_eq!(traj.status, TerminalStatus::Extinct);
        let t = traj.last().t;
        assert!((t - 2f64.ln()).abs() <= 0.01 * 2f64.ln(), "extinct at {t}");
    }

    #[test]
    fn equator_is_stationary() {
        let c = ClosedSphereCurve::great_circle(&GreatCircle::equator(), 256).unwrap();
        let cfg = FlowConfig { max_time: 1.0, snapshot_interval: 0.25, ..Default::default() };
        let traj = evolve_closed(&c, &cfg).unwrap();
        assert!(hausdorff_distance(&c, &traj.last().curve) <= 1e-4);
    }

    #[test]
    fn geodesic_arc_is_stationary() {
        let a = SpherePoint::from_polar(0.5, 0.2);
        let b = SpherePoint::from_polar(1.5, 1.4);
        let arc = SphereArc::geodesic(a, b, 64).unwrap();
        let cfg = FlowConfig { max_time: 0.5, snapshot_interval: 0.1, ..Default::default() };
        let traj = evolve_arc(&arc, &cfg).unwrap();
        assert!(hausdorff_distance(&arc, &traj.last().curve) <= 1e-6);
        assert_eq!(traj.last().curve.endpoint_a(), &a);
        assert_eq!(traj.last().curve.endpoint_b(), &b);
    }

    #[test]
    fn bumped_arc_returns_to_geodesic() {
        // quarter great circle along the equator, bumped toward the north
        let g = GreatCircle::equator();
        let n = 128;
        let nodes = (0..n)
            .map(|j| {
                let s = j as f64 / (n - 1) as f64;
                g.point_at(FRAC_PI_2 * s, 0.05 * (PI * s).sin().powi(3))
            })
            .collect();
        let arc = SphereArc::new(nodes).unwrap();
        let chord = SphereArc::geodesic(*arc.endpoint_a(), *arc.endpoint_b(), 64).unwrap();
        let cfg = FlowConfig { max_time: 2.0, snapshot_interval: 0.1, ..Default::default() };
        let traj = evolve_arc(&arc, &cfg).unwrap();
        assert!(hausdorff_distance(&traj.last().curve, &chord) <= 1e-3);
        for w in traj.lengths().windows(2) {
            assert!(w[1] <= w[0] + 1e-6);
        }
    }

    #[test]
    fn antipodal_arc_rejected() {
        let g = GreatCircle::equator();
        let nodes = (0..16).map(|j| g.point_at(PI * j as f64 / 15.0, 0.0)).collect();
        let arc = SphereArc::new(nodes).unwrap();
        assert!(matches!(evolve_arc(&arc, &FlowConfig::default()), Err(Error::AntipodalEndpoints)));
    }

    #[test]
    fn remesh_preserves_circle() {
        let c = ClosedSphereCurve::circle(SpherePoint::north(), 0.8, 128).unwrap();
        let out = remesh(c.nodes(), true, 300);
        for p in &out {
            assert_abs_diff_eq!(geodesic_distance(p, &SpherePoint::north()), 0.8, epsilon = 1e-6);
        }
    }

    #[test]
    fn cap_entry_times() {
        let c = ClosedSphereCurve::circle(SpherePoint::north(), 0.5, 128).unwrap();
        let cfg = FlowConfig { max_time: 0.1, snapshot_interval: 1e-3, ..Default::default() };
        let traj = evolve_closed(&c, &cfg).unwrap();
        assert_eq!(time_to_enter_cap(&traj, &SpherePoint::north(), 0.6).unwrap(), 0.0);
        // r(t) = 0.45 at t = ln(cos 0.45 / cos 0.5)
        let expected = (0.45f64.cos() / 0.5f64.cos()).ln();
        assert_abs_diff_eq!(time_to_enter_cap(&traj, &SpherePoint::north(), 0.45).unwrap(), expected, epsilon = 1e-3);
        assert!(matches!(time_to_enter_cap(&traj, &SpherePoint::south(), 1.0), Err(Error::NeverEnters { .. })));
    }

    #[test]
    fn latitude_stays_straight() {
        let g = GreatCircle::equator();
        let ell = ClosedSphereCurve::circle(*g.pole(), FRAC_PI_2 - 0.03, 256).unwrap();
        let params = LeafParams { r: 0.05, c: 0.5, alpha: 0.3 };
        let cfg = FlowConfig { snapshot_interval: 0.01, ..Default::default() };
        let rep = straightening_experiment(&ell, &g, &params, 0.05, &cfg).unwrap();
        assert!(rep.deviation.iter().all(|(_, d)| *d < 1e-6));
        assert!(rep.contained_while_barrier_holds && rep.barrier_respected);
        assert_eq!(rep.first_within_alpha, Some(0.0));
    }

    #[test]
    fn dirichlet_spec_invariants() {
        let g = GreatCircle::equator();
        let params = LeafParams { r: 0.05, c: 1.5, alpha: 0.5 };
        let a0 = g.point_at(0.7, 0.08);
        let spec = DirichletArcSpec::new(g, params, a0).unwrap();
        assert_abs_diff_eq!(spec.a1.z(), -a0.z(), epsilon = 1e-15);
        assert!(DirichletArcSpec::new(g, params, g.point_at(0.7, 0.05)).is_err());
        assert!(DirichletArcSpec::new(g, LeafParams { r: 0.5, ..params }, a0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn length_never_increases(r in 0.4f64..1.2, amp in 0.0f64..0.08, mode in 2u32..5) {
            let n = 128;
            let nodes = (0..n).map(|j| {
                let phi = TAU * j as f64 / n as f64;
                SpherePoint::from_polar(r + amp * (mode as f64 * phi).sin(), phi)
            }).collect();
            let c = ClosedSphereCurve::new(nodes).unwrap();
            let cfg = FlowConfig { max_time: 0.05, snapshot_interval: 0.005, target_nodes: 128, ..Default::default() };
            let traj = evolve_closed(&c, &cfg).unwrap();
            let times = traj.times();
            prop_assert!(times.windows(2).all(|w| w[1] > w[0]));
            prop_assert!(traj.lengths().windows(2).all(|w| w[1] <= w[0] + 1e-6));
        }

        #[test]
        fn barrier_holds(band in 0.05f64..0.3, amp_frac in 0.1f64..0.9, mode in 2u32..6) {
            let g = GreatCircle::equator();
            let n = 128;
            let nodes = (0..n).map(|j| {
                let phi = TAU * j as f64 / n as f64;
                g.point_at(phi, band * amp_frac * (mode as f64 * phi).sin())
            }).collect();
            let c = ClosedSphereCurve::new(nodes).unwrap();
            let cfg = FlowConfig { max_time: 0.1, snapshot_interval: 0.02, ..Default::default() };
            let traj = evolve_closed(&c, &cfg).unwrap();
            for s in &traj.snapshots {
                let rt = barrier_radius_oracle(band, s.t).unwrap();
                let worst = s.curve.nodes().iter().map(|p| g.signed_band_coordinate(p).abs()).fold(0.0, f64::max);
                prop_assert!(worst <= rt + 1e-3);
            }
        }
    }
}
