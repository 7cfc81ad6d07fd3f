//! Jordan-curve apparatus: r-multiplicity, spacings, leafable curves, and the
//! generator corpus used by the experiments.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::curve::{c1_deviation_where, distance_to_polyline, ClosedSphereCurve, Polyline, SphereArc};
use crate::error::{Error, Result};
use crate::flow::{DirichletArcSpec, LeafParams};
use crate::geom::{geodesic_distance, slerp, GreatCircle, SpherePoint, Vec3, Wedge};

/// Closed-band tolerance: grazing `|coord| = r` counts as touching.
const TOUCH_TOL: f64 = 1e-9;

/// Components of `curve ∩ B_{2r}(g)` that meet the closed band of halfwidth `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityReport {
    pub circle: GreatCircle,
    pub r: f64,
    pub count: usize,
    /// Node index ranges `(first, last)`; `last < first` means the range wraps.
    pub components: Vec<(usize, usize)>,
}

impl Serialize for MultiplicityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            pole: [f64; 3],
            r: f64,
            count: usize,
            components: Vec<[usize; 2]>,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        Wire {
            pole: self.circle.pole().to_array(),
            r: self.r,
            count: self.count,
            components: self.components.iter().map(|&(a, b)| [a, b]).collect(),
            _p: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

/// Band coordinates along the polyline, with every edge subdivided to at most
/// `r/4` so that crossings between nodes are seen. Each sample carries the
/// node index it sits at or just after.
fn band_profile(curve: &ClosedSphereCurve, g: &GreatCircle, r: f64) -> Vec<(f64, usize, bool)> {
    let mut out = Vec::with_capacity(curve.node_count());
    for i in 0..curve.segment_count() {
        let (a, b) = curve.segment(i);
        out.push((g.signed_band_coordinate(a), i, true));
        let pieces = (geodesic_distance(a, b) / (0.25 * r)).ceil() as usize;
        for k in 1..pieces {
            out.push((g.signed_band_coordinate(&slerp(a, b, k as f64 / pieces as f64)), i, false));
        }
    }
    out
}

/// r-multiplicity of `curve` with respect to `g`.
pub fn multiplicity_at(curve: &ClosedSphereCurve, g: &GreatCircle, r: f64) -> MultiplicityReport {
    let n = curve.node_count();
    let samples = band_profile(curve, g, r);
    let inside = |c: f64| c.abs() < 2.0 * r;
    let touches = |c: f64| c.abs() <= r + TOUCH_TOL;
    let m = samples.len();
    let mut components = Vec::new();
    match samples.iter().position(|s| !inside(s.0)) {
        None => {
            if samples.iter().any(|s| touches(s.0)) {
                components.push((0, n - 1));
            }
        }
        Some(start) => {
            let mut k = 0;
            while k < m {
                let idx = (start + k) % m;
                if !inside(samples[idx].0) {
                    k += 1;
                    continue;
                }
                let first = idx;
                let mut last = idx;
                let mut touched = false;
                while k < m && inside(samples[(start + k) % m].0) {
                    last = (start + k) % m;
                    touched |= touches(samples[last].0);
                    k += 1;
                }
                if touched {
                    let (_, i0, at0) = samples[first];
                    let (_, i1, _) = samples[last];
                    let lo = if at0 { i0 } else { (i0 + 1) % n };
                    components.push((lo, i1));
                }
            }
        }
    }
    MultiplicityReport { circle: *g, r, count: components.len(), components }
}

/// Quasi-uniform poles on the upper hemisphere (each great circle once).
pub fn fibonacci_poles(count: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = (k as f64 + 0.5) / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            SpherePoint::normalized(Vec3::new(rho * phi.cos(), rho * phi.sin(), z))
        })
        .collect()
}

/// Quasi-uniform points on the whole sphere.
pub fn fibonacci_sphere(count: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            SpherePoint::normalized(Vec3::new(rho * phi.cos(), rho * phi.sin(), z))
        })
        .collect()
}

fn lex_less(a: &SpherePoint, b: &SpherePoint) -> bool {
    a.to_array().iter().zip(b.to_array()).find(|(x, y)| **x != *y).is_some_and(|(x, y)| *x < y)
}

/// Largest multiplicity over the given poles; ties go to the
/// lexicographically smallest pole, so the result is order independent.
pub fn multiplicity_over(curve: &ClosedSphereCurve, r: f64, poles: &[SpherePoint]) -> (usize, SpherePoint) {
    poles
        .par_iter()
        .map(|p| (multiplicity_at(curve, &GreatCircle::new(*p), r).count, *p))
        .reduce_with(|a, b| if a.0 > b.0 || (a.0 == b.0 && lex_less(&a.1, &b.1)) { a } else { b })
        .expect("at least one pole")
}

/// Sampled lower bound on `sup_g M_{r,g}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupMultiplicity {
    pub value: usize,
    pub circle: GreatCircle,
    pub poles_sampled: usize,
}

/// Maximizes [`multiplicity_at`] over a spiral lattice of `pole_samples`
/// poles, then once more over a small ring of poles around the best one.
pub fn multiplicity_sup(curve: &ClosedSphereCurve, r: f64, pole_samples: usize) -> Result<SupMultiplicity> {
    if pole_samples < 100 {
        return Err(Error::Domain(format!("need at least 100 pole samples, got {pole_samples}")));
    }
    let lattice = fibonacci_poles(pole_samples);
    let (value, pole) = multiplicity_over(curve, r, &lattice);
    let spacing = (TAU / pole_samples as f64).sqrt();
    let (e1, e2) = GreatCircle::new(pole).frame();
    let ring: Vec<SpherePoint> = [0.25, 0.5]
        .iter()
        .flat_map(|&s| {
            (0..8).map(move |k| {
                let a = TAU * k as f64 / 8.0;
                pole.exp(&((e1 * a.cos() + e2 * a.sin()) * (s * spacing)))
            })
        })
        .collect();
    let (refined, refined_pole) = multiplicity_over(curve, r, &ring);
    let (value, pole) = if refined > value { (refined, refined_pole) } else { (value, pole) };
    Ok(SupMultiplicity { value, circle: GreatCircle::new(pole), poles_sampled: pole_samples + ring.len() })
}

/// A finite point set certifying that the curve keeps away from many
/// transverse great circles. Valid when (1) every point and its antipode are
/// farther than `c` from the curve, and (2) through every `x` two of the
/// great circles `x ∨ y_i` cross at more than `pi/2 - theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spacing {
    pub points: Vec<SpherePoint>,
    pub c: f64,
    pub theta: f64,
}

impl Serialize for Spacing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            points: Vec<[f64; 3]>,
            #[serde(rename = "C")]
            c: f64,
            theta: f64,
        }
        Wire { points: self.points.iter().map(|p| p.to_array()).collect(), c: self.c, theta: self.theta }.serialize(s)
    }
}

/// Why a spacing failed verification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SpacingFailure {
    /// `y_i` (or its antipode) is within `C` of the curve.
    TooClose { index: usize, antipode: bool, distance: f64 },
    /// No two spacing circles through `x` meet at more than `pi/2 - theta`.
    NoTransversePair { x: SpherePoint, best_angle: f64 },
}

/// Angle in `[0, pi)` of the great circle `x ∨ y` at `x`, or `None` when
/// `y = ±x`.
fn line_angle(x: &SpherePoint, y: &SpherePoint, frame: &(Vec3, Vec3)) -> Option<f64> {
    let t = x.tangent_toward(y)?;
    Some(t.dot(&frame.1).atan2(t.dot(&frame.0)).rem_euclid(PI))
}

/// Largest angle between two of the lines through `x` (in `[0, pi/2]`).
fn best_crossing(x: &SpherePoint, points: &[SpherePoint]) -> f64 {
    let frame = GreatCircle::new(*x).frame();
    let mut angles: Vec<f64> = points.iter().filter_map(|y| line_angle(x, y, &frame)).collect();
    best_pair_angle(&mut angles).0
}

/// Best line-angle separation and the index pair achieving it, in the
/// sorted order of `angles`.
fn best_pair_angle(angles: &mut [f64]) -> (f64, usize, usize) {
    angles.sort_by(f64::total_cmp);
    let m = angles.len();
    let mut best = (0.0, 0, 0);
    for i in 0..m {
        let target = (angles[i] + FRAC_PI_2).rem_euclid(PI);
        let pos = angles.partition_point(|a| *a < target);
        for j in [pos % m.max(1), (pos + m - 1) % m.max(1)] {
            if m == 0 {
                break;
            }
            let d = (angles[j] - angles[i]).abs();
            let sep = d.min(PI - d);
            if sep > best.0 {
                best = (sep, i, j);
            }
        }
    }
    best
}

/// Verdict of [`verify_spacing`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingVerdict {
    pub ok: bool,
    pub failure: Option<SpacingFailure>,
}

/// Checks condition (1) exactly and condition (2) on `x_samples`
/// quasi-uniform points.
pub fn verify_spacing(curve: &dyn Polyline, spacing: &Spacing, x_samples: usize) -> SpacingVerdict {
    for (index, y) in spacing.points.iter().enumerate() {
        for (antipode, p) in [(false, *y), (true, y.antipode())] {
            let distance = distance_to_polyline(&p, curve);
            if !(distance > spacing.c) {
                return SpacingVerdict { ok: false, failure: Some(SpacingFailure::TooClose { index, antipode, distance }) };
            }
        }
    }
    let need = FRAC_PI_2 - spacing.theta;
    let xs = fibonacci_sphere(x_samples);
    let worst = xs
        .par_iter()
        .map(|x| (best_crossing(x, &spacing.points), *x))
        .filter(|(a, _)| !(*a > need))
        .reduce_with(|a, b| if a.0 < b.0 || (a.0 == b.0 && lex_less(&a.1, &b.1)) { a } else { b });
    match worst {
        None => SpacingVerdict { ok: true, failure: None },
        Some((best_angle, x)) => SpacingVerdict { ok: false, failure: Some(SpacingFailure::NoTransversePair { x, best_angle }) },
    }
}

const SPACING_CANDIDATES: usize = 2000;
const SPACING_CHECK: usize = 4000;

/// Greedy realization of the covering argument: wherever condition (2)
/// fails, add the pair of well-cleared candidates whose circles through `x`
/// are closest to perpendicular. The clearance threshold halves until the
/// cover succeeds. `C` is half the smallest clearance of the chosen points.
pub fn construct_spacing(curve: &ClosedSphereCurve, theta: f64) -> Result<Spacing> {
    if !(theta > 0.0 && theta < PI / 4.0) {
        return Err(Error::Domain(format!("theta {theta} outside (0, pi/4)")));
    }
    let candidates = fibonacci_sphere(SPACING_CANDIDATES);
    let clearance: Vec<f64> = candidates
        .par_iter()
        .map(|y| distance_to_polyline(y, curve).min(distance_to_polyline(&y.antipode(), curve)))
        .collect();
    let max_clear = clearance.iter().cloned().fold(0.0, f64::max);
    let xs = fibonacci_sphere(SPACING_CHECK);
    let need = FRAC_PI_2 - theta / 2.0;

    let mut tau = 0.5 * max_clear;
    while tau > 1e-3 {
        let pool: Vec<usize> = (0..candidates.len()).filter(|&i| clearance[i] > tau).collect();
        if let Some(chosen) = greedy_cover(&xs, &candidates, &pool, need) {
            let points: Vec<SpherePoint> = chosen.iter().map(|&i| candidates[i]).collect();
            let c = 0.5 * chosen.iter().map(|&i| clearance[i]).fold(f64::INFINITY, f64::min);
            return Ok(Spacing { points, c, theta });
        }
        tau *= 0.5;
    }
    Err(Error::SpacingNotFound(format!("no cover with clearance above 1e-3 (max clearance {max_clear:.3e})")))
}

fn greedy_cover(xs: &[SpherePoint], candidates: &[SpherePoint], pool: &[usize], need: f64) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for x in xs {
        let current: Vec<SpherePoint> = chosen.iter().map(|&i| candidates[i]).collect();
        if best_crossing(x, &current) > need {
            continue;
        }
        // candidates well away from x and ax give directions stable near x
        let frame = GreatCircle::new(*x).frame();
        let usable: Vec<(f64, usize)> = pool
            .iter()
            .filter(|&&i| {
                let d = geodesic_distance(x, &candidates[i]);
                d > 0.3 && d < PI - 0.3
            })
            .filter_map(|&i| line_angle(x, &candidates[i], &frame).map(|a| (a, i)))
            .collect();
        let mut angles: Vec<f64> = usable.iter().map(|u| u.0).collect();
        let mut sorted = usable.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (sep, i, j) = best_pair_angle(&mut angles);
        if !(sep > need) {
            return None;
        }
        for k in [sorted[i].1, sorted[j].1] {
            if !chosen.contains(&k) {
                chosen.push(k);
            }
        }
    }
    Some(chosen)
}

/// Reasons a curve fails the leafable test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeafReason {
    /// `2r < alpha C` fails, `C >= pi/2`, or `x` is not on `g`.
    ParameterViolation,
    /// Some node leaves `B_{2r}(g)`.
    Containment,
    /// On `V` the curve is not a single-valued graph over `g`.
    NotGraphOnV,
    /// On `V` the curve is not `alpha/2` C^1-close to `g`.
    NotCloseOnV,
    /// The curve does not wind once around the band.
    NotGenerator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafableVerdict {
    pub leafable: bool,
    pub reasons: Vec<LeafReason>,
}

/// Tests the leafable conditions with `V = B_C(x) ∪ B_C(ax)`.
pub fn is_leafable(ell: &ClosedSphereCurve, g: &GreatCircle, params: &LeafParams, x: &SpherePoint) -> LeafableVerdict {
    let mut reasons = Vec::new();
    if params.validate().is_err() || g.pole().dot(x).abs() > 1e-9 {
        reasons.push(LeafReason::ParameterViolation);
    }
    let nodes = ell.nodes();
    if nodes.iter().any(|p| !(g.signed_band_coordinate(p).abs() < 2.0 * params.r)) {
        reasons.push(LeafReason::Containment);
    }
    let ax = x.antipode();
    let in_v = |p: &SpherePoint| geodesic_distance(p, x) < params.c || geodesic_distance(p, &ax) < params.c;

    let n = nodes.len();
    let steps: Vec<f64> = (0..n)
        .map(|i| {
            let d = g.longitude_of(&nodes[(i + 1) % n]) - g.longitude_of(&nodes[i]);
            (d + PI).rem_euclid(TAU) - PI
        })
        .collect();
    let winding: f64 = steps.iter().sum();
    if (winding.abs() - TAU).abs() > 1e-6 {
        reasons.push(LeafReason::NotGenerator);
    }
    let sense = winding.signum();
    let graph_ok = (0..n).all(|i| !(in_v(&nodes[i]) && in_v(&nodes[(i + 1) % n])) || steps[i] * sense > 0.0);
    if !graph_ok {
        reasons.push(LeafReason::NotGraphOnV);
    }
    match c1_deviation_where(ell, g, in_v) {
        Ok(dev) if dev <= params.alpha / 2.0 => {}
        _ => reasons.push(LeafReason::NotCloseOnV),
    }
    LeafableVerdict { leafable: reasons.is_empty(), reasons }
}

/// Closed curve of latitude angle `lat(phi)` over `g`, sampled at `n`
/// equally spaced longitudes.
fn graph_curve(g: &GreatCircle, n: usize, lat: impl Fn(f64) -> f64) -> Result<ClosedSphereCurve> {
    ClosedSphereCurve::new((0..n).map(|j| {
        let phi = TAU * j as f64 / n as f64;
        g.point_at(phi, lat(phi))
    }).collect())
}

/// Latitude of polar radius `r0` about `center`.
pub fn circle_curve(center: SpherePoint, r0: f64, n: usize) -> Result<ClosedSphereCurve> {
    if !(r0 > 0.0 && r0 < PI) {
        return Err(Error::ParamDomain(format!("circle radius {r0} outside (0, pi)")));
    }
    ClosedSphereCurve::circle(center, r0, n)
}

/// Polar radius `r0 + amplitude sin(mode phi)` about `center`.
pub fn perturbed_latitude(center: SpherePoint, r0: f64, amplitude: f64, mode: u32, n: usize) -> Result<ClosedSphereCurve> {
    if !(amplitude.abs() < r0.min(PI - r0)) {
        return Err(Error::ParamDomain(format!("amplitude {amplitude} reaches a pole from radius {r0}")));
    }
    graph_curve(&GreatCircle::new(center), n, |phi| FRAC_PI_2 - r0 - amplitude * (mode as f64 * phi).sin())
}

fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s * (s * (6.0 * s - 15.0) + 10.0)
}

/// Leafable curve over `g` that coincides with `g` on `V = B_C(x) ∪ B_C(ax)`
/// and oscillates (modes 14..20, seeded) between, with amplitude `0.9 r` and
/// C^1 deviation at least 0.5 rad. `x` is the point at longitude 0 of `g`.
pub fn leafable_wiggle(g: &GreatCircle, params: &LeafParams, seed: u64, n: usize) -> Result<(ClosedSphereCurve, SpherePoint)> {
    params.validate()?;
    let x = g.point_at(0.0, 0.0);
    let flat = params.c + 0.05;
    let ramp = 0.3;
    if flat + ramp >= FRAC_PI_2 {
        return Err(Error::ParamDomain(format!("C = {} leaves no room for the wiggle", params.c)));
    }
    let window = move |phi: f64| {
        let d = phi.rem_euclid(PI);
        let d = d.min(PI - d);
        smoothstep((d - flat) / ramp)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let main = rng.gen_range(14..=20) as f64;
        let extra: Vec<(f64, f64, f64)> = (0..2)
            .map(|_| (rng.gen_range(10..=20) as f64, rng.gen_range(0.0..0.2), rng.gen_range(0.0..TAU)))
            .collect();
        let phase = rng.gen_range(0.0..TAU);
        let raw = |phi: f64| {
            window(phi)
                * ((main * phi + phase).sin() + extra.iter().map(|(k, a, p)| a * (k * phi + p).sin()).sum::<f64>())
        };
        let peak = (0..4096).map(|j| raw(TAU * j as f64 / 4096.0).abs()).fold(0.0, f64::max);
        let scale = 0.9 * params.r / peak;
        let curve = graph_curve(g, n, |phi| scale * raw(phi))?;
        if crate::curve::c1_deviation(&curve, g)? >= 0.5 {
            return Ok((curve, x));
        }
    }
    Err(Error::ParamDomain(format!("band r = {} too thin for a 0.5 rad wiggle", params.r)))
}

/// The Dirichlet arc Γ with its endpoint data and wedge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletGamma {
    pub arc: SphereArc,
    pub spec: DirichletArcSpec,
    /// Point of `g` the wedge is hinged at; the arc's endpoints are near it.
    pub x: SpherePoint,
    pub wedge: Wedge,
}

/// Peak latitude of Γ as a multiple of `r`.
const GAMMA_PEAK: f64 = 1.96;
/// Endpoint latitude of Γ as a multiple of `r`.
const GAMMA_END: f64 = 1.6;
/// Angular distance from `x` of the tip where Γ crosses `g`.
const GAMMA_TIP: f64 = 2.5;
/// Blend scale of the profile: `sqrt(s)` below it (a round tip), close to
/// `s^0.7` above it.
const GAMMA_BLEND: f64 = 0.05;

/// Profile `f(s) = sqrt(s) ((s + b) / (1 + b))^0.2` with `f(1) = 1`. Since
/// `f(s)^2 / s` is smooth and positive at 0, the two halves meet in a
/// smooth tip.
fn gamma_profile(s: f64) -> f64 {
    s.sqrt() * ((s + GAMMA_BLEND) / (1.0 + GAMMA_BLEND)).powf(0.2)
}

/// Builds Γ over the equator hinged at `x = (1, 0, 0)`.
///
/// Each half is `lambda(phi) = 1.96 r f(sin(k phi))` (see [`gamma_profile`]) in coordinates
/// `(cos phi, sqrt(sin² phi - sin² lambda), ±sin lambda)`, where `phi` is the
/// distance from `x` and `k = pi / 2.5`, starting where `lambda = 1.6 r`.
/// The halves meet on `g` at `phi = 2.5`. Both tails are made geodesically
/// flat over their last two edges.
pub fn dirichlet_gamma(params: &LeafParams, nodes: usize) -> Result<DirichletGamma> {
    params.validate()?;
    if nodes < 32 {
        return Err(Error::ParamDomain(format!("Γ needs at least 32 nodes, got {nodes}")));
    }
    let r = params.r;
    let g = GreatCircle::equator();
    let x = SpherePoint::new(1.0, 0.0, 0.0)?;
    let k = PI / GAMMA_TIP;
    let peak = GAMMA_PEAK * r;
    let lambda = |phi: f64| peak * gamma_profile((k * phi).sin().max(0.0));
    // f is increasing on [0, 1]; bisect for f(s0) = 1.6 / 1.96
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if gamma_profile(mid) < GAMMA_END / GAMMA_PEAK {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi0 = lo.asin() / k;
    let point = |phi: f64, sign: f64| {
        let l = lambda(phi);
        let (sp, sl) = (phi.sin(), l.sin());
        SpherePoint::normalized(Vec3::new(phi.cos(), (sp * sp - sl * sl).max(0.0).sqrt(), sign * sl))
    };

    // dense sampling clustered near the tip, where the curvature concentrates
    let dense = 40 * nodes;
    let param = |s: f64| phi0 + (GAMMA_TIP - phi0) * (1.0 - (1.0 - s).powi(2));
    let mut fine: Vec<SpherePoint> = (0..dense).map(|j| point(param(j as f64 / dense as f64), 1.0)).collect();
    fine.push(point(GAMMA_TIP, 1.0));
    fine.extend((0..dense).rev().map(|j| point(param(j as f64 / dense as f64), -1.0)));
    let arc = crate::curve::resample(&SphereArc::from_nodes_unchecked(fine), nodes)?;
    let mut pts = arc.into_nodes();
    let m = pts.len();
    pts[1] = slerp(&pts[0], &pts[2], 0.5);
    pts[m - 2] = slerp(&pts[m - 1], &pts[m - 3], 0.5);
    let arc = SphereArc::new(pts)?;

    let a0 = *arc.endpoint_a();
    let spec = DirichletArcSpec::new(g, *params, a0)?;
    let mut wedge = Wedge::new(g, x, 0.0)?;
    wedge.halfangle = wedge.tilt_of(&a0).expect("endpoint is off the hinge").abs();
    Ok(DirichletGamma { arc, spec, x, wedge })
}

/// Discrete checks of the defining properties of Γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaChecks {
    /// Interior nodes lie in `B_{2r}(g) ∩ W_theta`.
    pub contained: bool,
    /// Meets `g` once and is a graph over `g` on each side of that point.
    pub double_graph: bool,
    /// Wedge tilt strictly monotone along the arc, so each rotated circle
    /// `R_psi(g)` is met once.
    pub monotone_tilt: bool,
    /// Interior turning angles share one sign.
    pub convex: bool,
    /// Nodes 0, 1, 2 (and the mirror triple) are geodesically collinear.
    pub flat_tails: bool,
    /// Endpoints outside `B_{(1+alpha) r}(g)`.
    pub endpoints_outside: bool,
    /// Nodes within `B_{(1+alpha) r}(g)` lie in `B_{alpha C}(ax)`.
    pub low_part_near_antipode: bool,
}

pub fn check_gamma(gamma: &DirichletGamma) -> GammaChecks {
    let nodes = gamma.arc.nodes();
    let m = nodes.len();
    let g = gamma.spec.g;
    let p = gamma.spec.params;
    let coords: Vec<f64> = nodes.iter().map(|q| g.signed_band_coordinate(q)).collect();
    let contained = (1..m - 1).all(|i| coords[i].abs() < 2.0 * p.r && gamma.wedge.contains(&nodes[i]));

    let crossings = coords.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    let tip = coords.iter().position(|c| *c <= 0.0).unwrap_or(m);
    let lon: Vec<f64> = nodes.iter().map(|q| q.y().atan2(q.x())).collect();
    let up = lon[..tip].windows(2).all(|w| w[1] > w[0]);
    let down = lon[tip..].windows(2).all(|w| w[1] < w[0]);
    let double_graph = crossings == 1 && up && down;

    let tilts: Vec<f64> = nodes.iter().filter_map(|q| gamma.wedge.tilt_of(q)).collect();
    let monotone_tilt = tilts.len() == m && tilts.windows(2).all(|w| w[1] < w[0]);

    let turns = crate::curve::turning_angles(&gamma.arc);
    let interior = &turns[1..m - 1];
    let convex = interior.iter().all(|t| *t >= -1e-12) || interior.iter().all(|t| *t <= 1e-12);

    let flat = |a: &SpherePoint, b: &SpherePoint, c: &SpherePoint| {
        a.vector().cross(c.vector()).normalize().dot(b.vector()).abs() < 1e-12
    };
    let flat_tails = flat(&nodes[0], &nodes[1], &nodes[2]) && flat(&nodes[m - 1], &nodes[m - 2], &nodes[m - 3]);

    let widened = (1.0 + p.alpha) * p.r;
    let endpoints_outside = coords[0].abs() > widened && coords[m - 1].abs() > widened;
    let ax = gamma.x.antipode();
    let low_part_near_antipode =
        nodes.iter().zip(&coords).all(|(q, c)| c.abs() >= widened || geodesic_distance(q, &ax) < p.alpha * p.c);
    GammaChecks { contained, double_graph, monotone_tilt, convex, flat_tails, endpoints_outside, low_part_near_antipode }
}

/// Spherical snowflake: a geodesic triangle inscribed in `∂B_radius(center)`
/// whose edges are repeatedly split in thirds with the middle third replaced
/// by an outward bump of height `sqrt(3)/6` times the edge length.
pub fn koch_like(depth: u32, center: SpherePoint, radius: f64) -> Result<ClosedSphereCurve> {
    if depth > 6 {
        return Err(Error::ParamDomain(format!("Koch depth {depth} exceeds 6")));
    }
    if !(radius > 0.0 && radius < FRAC_PI_2) {
        return Err(Error::ParamDomain(format!("Koch base radius {radius} outside (0, pi/2)")));
    }
    let g = GreatCircle::new(center);
    let mut nodes: Vec<SpherePoint> = (0..3).map(|j| g.point_at(TAU * j as f64 / 3.0, FRAC_PI_2 - radius)).collect();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(4 * nodes.len());
        for i in 0..nodes.len() {
            let (a, b) = (nodes[i], nodes[(i + 1) % nodes.len()]);
            let len = geodesic_distance(&a, &b);
            let left = a.vector().cross(b.vector()).normalize();
            let mid = slerp(&a, &b, 0.5);
            let bump = mid.exp(&(-left * (3f64.sqrt() / 6.0 * len)));
            next.extend([a, slerp(&a, &b, 1.0 / 3.0), bump, slerp(&a, &b, 2.0 / 3.0)]);
        }
        nodes = next;
    }
    if nodes.len() < crate::curve::MIN_NODES {
        let tri = ClosedSphereCurve::from_nodes_unchecked(nodes);
        return crate::curve::resample(&tri, 3 * crate::curve::MIN_NODES);
    }
    ClosedSphereCurve::new(nodes)
}

/// The curve families of the experiment corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CurveKind {
    Circle {
        radius: f64,
        #[serde(default = "default_center")]
        center: [f64; 3],
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
    PerturbedLatitude {
        radius: f64,
        amplitude: f64,
        mode: u32,
        #[serde(default = "default_center")]
        center: [f64; 3],
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
    LeafableWiggle {
        #[serde(default = "default_center")]
        pole: [f64; 3],
        r: f64,
        c: f64,
        alpha: f64,
        #[serde(default = "default_wiggle_nodes")]
        nodes: usize,
    },
    DirichletGamma {
        r: f64,
        #[serde(default = "default_gamma_c")]
        c: f64,
        #[serde(default = "default_gamma_alpha")]
        alpha: f64,
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
    KochLike {
        depth: u32,
        #[serde(default = "default_koch_radius")]
        radius: f64,
        #[serde(default = "default_center")]
        center: [f64; 3],
    },
}

fn default_center() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}
fn default_nodes() -> usize {
    512
}
fn default_wiggle_nodes() -> usize {
    1024
}
fn default_gamma_c() -> f64 {
    1.5
}
fn default_gamma_alpha() -> f64 {
    0.5
}
fn default_koch_radius() -> f64 {
    1.0
}

/// A generated curve; Γ is the only open one.
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Closed(ClosedSphereCurve),
    Gamma(DirichletGamma),
}

fn point_from(a: [f64; 3]) -> Result<SpherePoint> {
    SpherePoint::new(a[0], a[1], a[2]).map_err(|_| Error::ParamDomain("zero center vector".into()))
}

/// Builds a corpus curve; `seed` drives the only randomized family.
pub fn generate_curve(kind: &CurveKind, seed: u64) -> Result<Generated> {
    Ok(match *kind {
        CurveKind::Circle { radius, center, nodes } => Generated::Closed(circle_curve(point_from(center)?, radius, nodes)?),
        CurveKind::PerturbedLatitude { radius, amplitude, mode, center, nodes } => {
            Generated::Closed(perturbed_latitude(point_from(center)?, radius, amplitude, mode, nodes)?)
        }
        CurveKind::LeafableWiggle { pole, r, c, alpha, nodes } => {
            let g = GreatCircle::new(point_from(pole)?);
            Generated::Closed(leafable_wiggle(&g, &LeafParams { r, c, alpha }, seed, nodes)?.0)
        }
        CurveKind::DirichletGamma { r, c, alpha, nodes } => Generated::Gamma(dirichlet_gamma(&LeafParams { r, c, alpha }, nodes)?),
        CurveKind::KochLike { depth, radius, center } => Generated::Closed(koch_like(depth, point_from(center)?, radius)?),
    })
}
