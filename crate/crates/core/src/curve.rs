//! Discrete closed curves and fixed-endpoint arcs on the sphere.
//!
//! Both kinds are polylines whose edges are minor geodesic segments. Closed
//! curves are oriented by node order; the region on the left of the direction
//! of travel is the "enclosed" side used by [`CurveDiagnostics`].

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{geodesic_distance, slerp, GreatCircle, Rotation, SpherePoint, Vec3};

pub const MIN_NODES: usize = 8;
const MIN_EDGE: f64 = 1e-8;

/// Common view of closed curves and arcs as geodesic polylines.
pub trait Polyline {
    fn nodes(&self) -> &[SpherePoint];
    fn is_closed(&self) -> bool;

    fn node_count(&self) -> usize {
        self.nodes().len()
    }

    fn segment_count(&self) -> usize {
        let n = self.nodes().len();
        if self.is_closed() {
            n
        } else {
            n.saturating_sub(1)
        }
    }

    /// Endpoints of segment `i`.
    fn segment(&self, i: usize) -> (&SpherePoint, &SpherePoint) {
        let nodes = self.nodes();
        (&nodes[i], &nodes[(i + 1) % nodes.len()])
    }

    fn edge_lengths(&self) -> Vec<f64> {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                geodesic_distance(a, b)
            })
            .collect()
    }

    fn length(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    fn max_edge(&self) -> f64 {
        self.edge_lengths().into_iter().fold(0.0, f64::max)
    }

    fn min_edge(&self) -> f64 {
        self.edge_lengths().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// A closed polyline (last node connects back to the first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedSphereCurve {
    nodes: Vec<SpherePoint>,
}

/// An open polyline with pinned endpoints (first and last node).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereArc {
    nodes: Vec<SpherePoint>,
}

fn validate_nodes(nodes: &[SpherePoint], closed: bool) -> Result<()> {
    if nodes.len() < MIN_NODES {
        return Err(Error::TooFewNodes { needed: MIN_NODES, got: nodes.len() });
    }
    let segs = if closed { nodes.len() } else { nodes.len() - 1 };
    for i in 0..segs {
        let len = geodesic_distance(&nodes[i], &nodes[(i + 1) % nodes.len()]);
        if !(len > MIN_EDGE && len < FRAC_PI_2) {
            return Err(Error::BadEdge { index: i, length: len });
        }
    }
    Ok(())
}

impl ClosedSphereCurve {
    /// Validates node count and edge lengths. Embeddedness is checked
    /// separately by [`check_embedded`].
    pub fn new(nodes: Vec<SpherePoint>) -> Result<Self> {
        validate_nodes(&nodes, true)?;
        Ok(ClosedSphereCurve { nodes })
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<SpherePoint>) -> Self {
        ClosedSphereCurve { nodes }
    }

    /// The circle `∂B_radius(center)` sampled at `n` equally spaced nodes,
    /// oriented counterclockwise seen from `center` (center on the left).
    pub fn circle(center: SpherePoint, radius: f64, n: usize) -> Result<Self> {
        if !(radius > 0.0 && radius < PI) {
            return Err(Error::Domain(format!("circle radius {radius} outside (0, pi)")));
        }
        let g = GreatCircle::new(center);
        let lat = FRAC_PI_2 - radius;
        let nodes = (0..n).map(|j| g.point_at(TAU * j as f64 / n as f64, lat)).collect();
        Self::new(nodes)
    }

    /// The great circle `g` sampled at `n` nodes, in its own orientation.
    pub fn great_circle(g: &GreatCircle, n: usize) -> Result<Self> {
        Self::circle(*g.pole(), FRAC_PI_2, n)
    }

    pub fn into_nodes(self) -> Vec<SpherePoint> {
        self.nodes
    }

    /// Same curve traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        ClosedSphereCurve { nodes }
    }

    pub fn rotated(&self, rot: &Rotation) -> Self {
        ClosedSphereCurve { nodes: self.nodes.iter().map(|p| rot.apply(p)).collect() }
    }
}

impl SphereArc {
    pub fn new(nodes: Vec<SpherePoint>) -> Result<Self> {
        validate_nodes(&nodes, false)?;
        Ok(SphereArc { nodes })
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<SpherePoint>) -> Self {
        SphereArc { nodes }
    }

    /// Minor geodesic segment from `a` to `b` sampled at `n` nodes.
    pub fn geodesic(a: SpherePoint, b: SpherePoint, n: usize) -> Result<Self> {
        if geodesic_distance(&a, &b) > PI - 1e-9 {
            return Err(Error::AntipodalEndpoints);
        }
        let mut nodes: Vec<SpherePoint> = (0..n).map(|j| slerp(&a, &b, j as f64 / (n - 1) as f64)).collect();
        if let Some(last) = nodes.last_mut() {
            *last = b;
        }
        Self::new(nodes)
    }

    pub fn endpoint_a(&self) -> &SpherePoint {
        &self.nodes[0]
    }

    pub fn endpoint_b(&self) -> &SpherePoint {
        self.nodes.last().expect("arc has nodes")
    }

    pub fn into_nodes(self) -> Vec<SpherePoint> {
        self.nodes
    }

    pub fn rotated(&self, rot: &Rotation) -> Self {
        SphereArc { nodes: self.nodes.iter().map(|p| rot.apply(p)).collect() }
    }
}

impl Polyline for ClosedSphereCurve {
    fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }
    fn is_closed(&self) -> bool {
        true
    }
}

impl Polyline for SphereArc {
    fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }
    fn is_closed(&self) -> bool {
        false
    }
}

/// Either kind of curve, as read from a curve file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyCurve {
    Closed(ClosedSphereCurve),
    Arc(SphereArc),
}

impl AnyCurve {
    pub fn as_polyline(&self) -> &dyn Polyline {
        match self {
            AnyCurve::Closed(c) => c,
            AnyCurve::Arc(a) => a,
        }
    }
}

/// Polylines that can be rebuilt from a fresh node list of the same kind.
pub trait Resample: Polyline + Sized {
    fn with_nodes(&self, nodes: Vec<SpherePoint>) -> Self;
}

impl Resample for ClosedSphereCurve {
    fn with_nodes(&self, nodes: Vec<SpherePoint>) -> Self {
        ClosedSphereCurve::from_nodes_unchecked(nodes)
    }
}

impl Resample for SphereArc {
    fn with_nodes(&self, nodes: Vec<SpherePoint>) -> Self {
        SphereArc::from_nodes_unchecked(nodes)
    }
}

/// Cumulative arc length at each node (and, for closed curves, a final
/// entry for the return to node 0).
fn cumulative_lengths(c: &impl Polyline) -> Vec<f64> {
    let mut acc = Vec::with_capacity(c.segment_count() + 1);
    let mut s = 0.0;
    acc.push(0.0);
    for len in c.edge_lengths() {
        s += len;
        acc.push(s);
    }
    acc
}

/// Resamples to `n` nodes at equal arc-length spacing along the geodesic
/// polyline. Arc endpoints are kept bit-for-bit; closed curves keep node 0.
pub fn resample<C: Resample>(curve: &C, n: usize) -> Result<C> {
    if n < MIN_NODES {
        return Err(Error::TooFewNodes { needed: MIN_NODES, got: n });
    }
    let nodes = curve.nodes();
    let cum = cumulative_lengths(curve);
    let total = *cum.last().unwrap();
    let closed = curve.is_closed();
    let spacing = if closed { total / n as f64 } else { total / (n - 1) as f64 };

    let mut out = Vec::with_capacity(n);
    let mut seg = 0usize;
    for k in 0..n {
        if !closed && k == n - 1 {
            out.push(*nodes.last().unwrap());
            break;
        }
        let s = spacing * k as f64;
        while seg + 1 < cum.len() - 1 && cum[seg + 1] <= s {
            seg += 1;
        }
        let (a, b) = curve.segment(seg);
        let len = cum[seg + 1] - cum[seg];
        let frac = if len > 0.0 { ((s - cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        out.push(if frac == 0.0 { *a } else { slerp(a, b, frac) });
    }
    Ok(curve.with_nodes(out))
}

/// Signed exterior turning angle at each node, positive for left turns
/// (toward the enclosed side). Arcs get zero at their two endpoints.
pub fn turning_angles(c: &impl Polyline) -> Vec<f64> {
    let nodes = c.nodes();
    let n = nodes.len();
    let closed = c.is_closed();
    (0..n)
        .map(|i| {
            if !closed && (i == 0 || i == n - 1) {
                return 0.0;
            }
            let p = &nodes[i];
            let prev = &nodes[(i + n - 1) % n];
            let next = &nodes[(i + 1) % n];
            match (p.tangent_toward(prev), p.tangent_toward(next)) {
                (Some(back), Some(fwd)) => {
                    let t_in = -back;
                    t_in.cross(&fwd).dot(p.vector()).atan2(t_in.dot(&fwd))
                }
                _ => 0.0,
            }
        })
        .collect()
}

/// Per-node discrete geodesic curvature: turning angle divided by the mean
/// length of the two adjacent edges.
pub fn vertex_curvatures(c: &impl Polyline) -> Vec<f64> {
    let turns = turning_angles(c);
    let edges = c.edge_lengths();
    let n = c.node_count();
    let closed = c.is_closed();
    (0..n)
        .map(|i| {
            if !closed && (i == 0 || i == n - 1) {
                return 0.0;
            }
            let h = 0.5 * (edges[(i + edges.len() - 1) % edges.len()] + edges[i % edges.len()]);
            turns[i] / h
        })
        .collect()
}

/// Length, curvature integrals and (for closed curves) the area of the
/// region on the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveDiagnostics {
    pub length: f64,
    /// Integral of signed geodesic curvature (sum of turning angles).
    pub total_curvature: f64,
    /// Integral of squared geodesic curvature.
    pub bending: f64,
    /// Area on the left, `2 pi - total_curvature` (closed curves only).
    pub enclosed_area: Option<f64>,
}

/// Diagnostics without the embeddedness check.
pub fn diagnostics_unchecked(c: &impl Polyline) -> CurveDiagnostics {
    let turns = turning_angles(c);
    let edges = c.edge_lengths();
    let n = c.node_count();
    let closed = c.is_closed();
    let length: f64 = edges.iter().sum();
    let total_curvature: f64 = turns.iter().sum();
    let mut bending = 0.0;
    for i in 0..n {
        if !closed && (i == 0 || i == n - 1) {
            continue;
        }
        let h = 0.5 * (edges[(i + edges.len() - 1) % edges.len()] + edges[i % edges.len()]);
        bending += turns[i] * turns[i] / h;
    }
    CurveDiagnostics {
        length,
        total_curvature,
        bending,
        enclosed_area: closed.then_some(TAU - total_curvature),
    }
}

/// Diagnostics of an embedded closed curve.
pub fn diagnostics(c: &ClosedSphereCurve) -> Result<CurveDiagnostics> {
    check_embedded(c)?;
    Ok(diagnostics_unchecked(c))
}

/// Whether the minor geodesic arcs `a-b` and `c-d` share a point, with an
/// absolute `slack` on the containment tests (negative slack = strict).
pub fn segments_intersect(a: &SpherePoint, b: &SpherePoint, c: &SpherePoint, d: &SpherePoint, slack: f64) -> bool {
    let (a, b, c, d) = (a.vector(), b.vector(), c.vector(), d.vector());
    let n1 = a.cross(b);
    let n2 = c.cross(d);
    let (l1, l2) = (n1.norm(), n2.norm());
    if l1 < 1e-300 || l2 < 1e-300 {
        return false;
    }
    let (n1, n2) = (n1 / l1, n2 / l2);
    let line = n1.cross(&n2);
    let on_arc = |q: &Vec3, a: &Vec3, b: &Vec3, n: &Vec3| a.cross(q).dot(n) >= -slack && q.cross(b).dot(n) >= -slack;
    if line.norm() < 1e-14 {
        // same great circle: overlap iff an endpoint of one lies on the other
        return on_arc(c, a, b, &n1) || on_arc(d, a, b, &n1) || on_arc(a, c, d, &n2) || on_arc(b, c, d, &n2);
    }
    let q = line.normalize();
    [q, -q].iter().any(|q| on_arc(q, a, b, &n1) && on_arc(q, c, d, &n2))
}

/// Chord-midpoint bounding ball of a geodesic segment.
fn segment_ball(a: &SpherePoint, b: &SpherePoint) -> (Vec3, f64) {
    let m = (a.vector() + b.vector()) * 0.5;
    let half = (a.vector() - b.vector()).norm() * 0.5;
    let sag = 1.0 - (1.0 - half * half).max(0.0).sqrt();
    (m, half + sag)
}

/// First pair of non-adjacent intersecting segments, if any.
fn find_self_intersection(c: &dyn Polyline) -> Option<(usize, usize)> {
    let m = c.segment_count();
    let closed = c.is_closed();
    let balls: Vec<(Vec3, f64)> = (0..m).map(|i| {
        let (a, b) = c.segment(i);
        segment_ball(a, b)
    }).collect();
    // sweep along x: only segments whose x-extents overlap are compared
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| (balls[i].0.x - balls[i].1).total_cmp(&(balls[j].0.x - balls[j].1)));
    for (oi, &i) in order.iter().enumerate() {
        let hi = balls[i].0.x + balls[i].1;
        for &j in &order[oi + 1..] {
            if balls[j].0.x - balls[j].1 > hi {
                break;
            }
            let (lo, up) = (i.min(j), i.max(j));
            let adjacent = up - lo == 1 || (closed && lo == 0 && up == m - 1);
            if adjacent {
                continue;
            }
            if (balls[i].0 - balls[j].0).norm() > balls[i].1 + balls[j].1 + 1e-12 {
                continue;
            }
            let (a, b) = c.segment(i);
            let (p, q) = c.segment(j);
            if segments_intersect(a, b, p, q, 1e-12) {
                return Some((lo, up));
            }
        }
    }
    None
}

/// Errors with [`Error::NotEmbedded`] if two non-adjacent segments meet.
pub fn check_embedded(c: &dyn Polyline) -> Result<()> {
    match find_self_intersection(c) {
        Some((first, second)) => Err(Error::NotEmbedded { first, second }),
        None => Ok(()),
    }
}

pub fn is_embedded(c: &dyn Polyline) -> bool {
    find_self_intersection(c).is_none()
}

/// Whether two polylines share a point.
pub fn curves_intersect(a: &dyn Polyline, b: &dyn Polyline) -> bool {
    let balls_b: Vec<(Vec3, f64)> = (0..b.segment_count()).map(|j| {
        let (p, q) = b.segment(j);
        segment_ball(p, q)
    }).collect();
    (0..a.segment_count()).any(|i| {
        let (p, q) = a.segment(i);
        let (m, r) = segment_ball(p, q);
        balls_b.iter().enumerate().any(|(j, (mb, rb))| {
            (m - mb).norm() <= r + rb + 1e-12 && {
                let (c, d) = b.segment(j);
                segments_intersect(p, q, c, d, 1e-12)
            }
        })
    })
}

/// Distance from `p` to the minor geodesic segment `a-b`.
pub fn point_segment_distance(p: &SpherePoint, a: &SpherePoint, b: &SpherePoint) -> f64 {
    if p == a || p == b {
        return 0.0;
    }
    let n = a.vector().cross(b.vector());
    let ln = n.norm();
    if ln > 1e-15 {
        let n = n / ln;
        let pv = p.vector();
        let q = pv - n * pv.dot(&n);
        if q.norm() > 1e-15 && a.vector().cross(&q).dot(&n) >= 0.0 && q.cross(b.vector()).dot(&n) >= 0.0 {
            return pv.dot(&n).abs().min(1.0).asin();
        }
    }
    geodesic_distance(p, a).min(geodesic_distance(p, b))
}

/// Distance from `p` to the nearest point of a polyline.
pub fn distance_to_polyline(p: &SpherePoint, c: &dyn Polyline) -> f64 {
    (0..c.segment_count())
        .map(|i| {
            let (a, b) = c.segment(i);
            point_segment_distance(p, a, b)
        })
        .fold(f64::INFINITY, f64::min)
}

const HAUSDORFF_MIN_EDGE: f64 = 1e-4;
const HAUSDORFF_TOL: f64 = 1e-7;

/// Largest distance from a point of `a` to the polyline `b`.
///
/// Vertices are evaluated exactly; each segment of `a` is then bounded from
/// above using its endpoint distances to individual segments of `b` plus a
/// curvature allowance, and subdivided until the bound is within tolerance
/// of the running maximum or the piece is shorter than 1e-4.
fn directed_hausdorff(a: &dyn Polyline, b: &dyn Polyline) -> f64 {
    let mut best = a.nodes().iter().map(|p| distance_to_polyline(p, b)).fold(0.0, f64::max);
    let mut stack: Vec<(SpherePoint, SpherePoint)> =
        (0..a.segment_count()).map(|i| { let (p, q) = a.segment(i); (*p, *q) }).collect();
    while let Some((p, q)) = stack.pop() {
        let len = geodesic_distance(&p, &q);
        let mut bound = f64::INFINITY;
        for j in 0..b.segment_count() {
            let (c, d) = b.segment(j);
            let m = point_segment_distance(&p, c, d).max(point_segment_distance(&q, c, d));
            bound = bound.min(m);
        }
        // along a geodesic, |f''| <= tan f and f <= bound + len/2
        let reach = bound + len / 2.0;
        let allowance = if reach < 1.5 { len * len / 8.0 * reach.tan() } else { f64::INFINITY };
        if bound + allowance <= best + HAUSDORFF_TOL {
            continue;
        }
        if len < HAUSDORFF_MIN_EDGE {
            best = best.max(bound.min(distance_to_polyline(&slerp(&p, &q, 0.5), b) + len / 2.0));
            continue;
        }
        let mid = slerp(&p, &q, 0.5);
        best = best.max(distance_to_polyline(&mid, b));
        stack.push((p, mid));
        stack.push((mid, q));
    }
    best
}

/// Symmetric Hausdorff distance between two polylines.
pub fn hausdorff_distance(a: &dyn Polyline, b: &dyn Polyline) -> f64 {
    if a.is_closed() == b.is_closed() && a.nodes() == b.nodes() {
        return 0.0;
    }
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Discrete unit tangent at node `i` (central difference projected onto the
/// tangent plane; one-sided at arc endpoints).
pub fn node_tangent(c: &dyn Polyline, i: usize) -> Option<Vec3> {
    let nodes = c.nodes();
    let n = nodes.len();
    let (prev, next) = if c.is_closed() {
        ((i + n - 1) % n, (i + 1) % n)
    } else {
        (i.saturating_sub(1), (i + 1).min(n - 1))
    };
    let p = nodes[i].vector();
    let d = nodes[next].vector() - nodes[prev].vector();
    let t = d - p * p.dot(&d);
    let len = t.norm();
    (len > 1e-15).then(|| t / len)
}

/// Unsigned angle in `[0, pi/2]` between the discrete tangent at node `i`
/// and the latitude of `g` through that node.
fn latitude_angle(c: &dyn Polyline, g: &GreatCircle, i: usize) -> Result<f64> {
    let p = &c.nodes()[i];
    if geodesic_distance(p, g.pole()).min(geodesic_distance(p, &g.pole().antipode())) < 1e-6 {
        return Err(Error::PoleDegenerate { tolerance: 1e-6 });
    }
    let e = g.latitude_direction(p).ok_or(Error::PoleDegenerate { tolerance: 1e-6 })?;
    let meridian = p.vector().cross(&e);
    let t = node_tangent(c, i).ok_or(Error::Domain("degenerate tangent".into()))?;
    Ok(t.dot(&meridian).abs().atan2(t.dot(&e).abs()))
}

/// Maximum over nodes of the angle between the curve and the latitudes of
/// `g`; the curve is `theta` C^1-close to `g` iff the result is `<= theta`.
pub fn c1_deviation(c: &dyn Polyline, g: &GreatCircle) -> Result<f64> {
    c1_deviation_where(c, g, |_| true)
}

/// As [`c1_deviation`], restricted to nodes accepted by `keep`. Returns 0
/// when no node is kept.
pub fn c1_deviation_where(c: &dyn Polyline, g: &GreatCircle, keep: impl Fn(&SpherePoint) -> bool) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..c.node_count() {
        if keep(&c.nodes()[i]) {
            worst = worst.max(latitude_angle(c, g, i)?);
        }
    }
    Ok(worst)
}

/// Number of sign changes of `<node, pole(g)>` around the closed polyline.
/// Nodes exactly on `g` count as lying on the pole side (a 1e-12 push).
pub fn intersection_count(c: &ClosedSphereCurve, g: &GreatCircle) -> usize {
    let signs: Vec<bool> = c.nodes().iter().map(|p| p.dot(g.pole()) + 1e-12 * (p.dot(g.pole()) == 0.0) as u8 as f64 > 0.0).collect();
    let n = signs.len();
    (0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count()
}

/// Whether `p` lies in the region to the left of a closed curve.
///
/// Parity of crossings along a geodesic path from a reference point just to
/// the left of edge 0.
pub fn is_left_of(c: &ClosedSphereCurve, p: &SpherePoint) -> bool {
    let (a, b) = c.segment(0);
    let pole = a.vector().cross(b.vector()).normalize();
    let mid = slerp(a, b, 0.5);
    let delta = 1e-3 * geodesic_distance(a, b).min(1e-3);
    let start = SpherePoint::normalized(mid.vector() + pole * delta);
    // split the path into pieces shorter than pi/2, detouring near antipodes
    let mut waypoints = vec![start];
    if geodesic_distance(&start, p) > PI - 1e-3 {
        let (e1, _) = GreatCircle::new(start).frame();
        waypoints.push(SpherePoint::normalized(e1));
    }
    waypoints.push(*p);
    let mut path = vec![waypoints[0]];
    for w in waypoints.windows(2) {
        let d = geodesic_distance(&w[0], &w[1]);
        let pieces = (d / 1.0).ceil().max(1.0) as usize;
        for k in 1..=pieces {
            path.push(slerp(&w[0], &w[1], k as f64 / pieces as f64));
        }
    }
    let mut crossings = 0usize;
    for w in path.windows(2) {
        for i in 0..c.segment_count() {
            let (s, t) = c.segment(i);
            if segments_intersect(&w[0], &w[1], s, t, 0.0) {
                crossings += 1;
            }
        }
    }
    crossings.is_multiple_of(2)
}
