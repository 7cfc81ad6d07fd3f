//! Solver output against oracles computed independently of the library.

use proptest::prelude::*;
use sphere_csf::curve::{diagnostics, ClosedSphereCurve, Polyline};
use sphere_csf::flow::{evolve_closed, FlowConfig};
use sphere_csf::geom::{geodesic_distance, Rotation, SpherePoint};

/// Classical RK4 for the radius of a shrinking circle, `r' = -cot r`.
fn rk4_radius(r0: f64, t: f64, steps: usize) -> f64 {
    let f = |r: f64| -r.cos() / r.sin();
    let h = t / steps as f64;
    let mut r = r0;
    for _ in 0..steps {
        let k1 = f(r);
        let k2 = f(r + 0.5 * h * k1);
        let k3 = f(r + 0.5 * h * k2);
        let k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    r
}

/// Area to the left via a fan of signed spherical triangles from the north pole.
fn fan_area(c: &ClosedSphereCurve) -> f64 {
    let o = [0.0, 0.0, 1.0];
    let nodes = c.nodes();
    let mut sum = 0.0;
    for i in 0..nodes.len() {
        let a = nodes[i].to_array();
        let b = nodes[(i + 1) % nodes.len()].to_array();
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let triple = o[0] * cross[0] + o[1] * cross[1] + o[2] * cross[2];
        let dots = 1.0 + (o[2] * a[2]) + (o[2] * b[2]) + (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
        sum += 2.0 * triple.atan2(dots);
    }
    sum.rem_euclid(4.0 * std::f64::consts::PI)
}

fn mean_radius(c: &ClosedSphereCurve, center: &SpherePoint) -> f64 {
    c.nodes().iter().map(|p| geodesic_distance(p, center)).sum::<f64>() / c.node_count() as f64
}

#[test]
fn circle_radius_tracks_rk4() {
    let center = SpherePoint::from_polar(0.4, 1.1);
    let r0 = 1.2;
    let c = ClosedSphereCurve::circle(center, r0, 256).unwrap();
    let cfg = FlowConfig { dt: 1e-4, max_time: 0.5, snapshot_interval: 0.1, target_nodes: 256, ..FlowConfig::default() };
    let traj = evolve_closed(&c, &cfg).unwrap();
    for s in &traj.snapshots {
        let oracle = rk4_radius(r0, s.t, 2000);
        let r = mean_radius(&s.curve, &center);
        assert!((r - oracle).abs() / oracle < 5e-3, "t = {}: {r} vs {oracle}", s.t);
    }
}

#[test]
fn left_area_matches_triangle_fan() {
    let center = SpherePoint::from_polar(2.0, 0.3);
    for r in [0.3, 1.0, 2.5] {
        let c = ClosedSphereCurve::circle(center, r, 400).unwrap();
        let area = diagnostics(&c).unwrap().enclosed_area.unwrap();
        let fan = fan_area(&c);
        assert!((area - fan).abs() < 1e-9, "r = {r}: {area} vs {fan}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn flow_commutes_with_rotation(axis_polar in 0.1f64..3.0, axis_az in 0.0f64..std::f64::consts::TAU, angle in -3.0f64..3.0) {
        let base = ClosedSphereCurve::new(
            (0..128)
                .map(|i| {
                    let s = i as f64 / 128.0 * std::f64::consts::TAU;
                    SpherePoint::from_polar(1.0 + 0.1 * (3.0 * s).sin(), s)
                })
                .collect(),
        )
        .unwrap();
        let rot = Rotation::new(SpherePoint::from_polar(axis_polar, axis_az), angle);
        let cfg = FlowConfig { dt: 1e-4, max_time: 0.05, snapshot_interval: 0.05, target_nodes: 128, ..FlowConfig::default() };
        let a = evolve_closed(&base, &cfg).unwrap();
        let b = evolve_closed(&base.rotated(&rot), &cfg).unwrap();
        let (la, lb) = (a.last().diagnostics.length, b.last().diagnostics.length);
        prop_assert!((la - lb).abs() < 1e-6 * la, "{} vs {}", la, lb);
        let moved = a.last().curve.rotated(&rot);
        let gap = sphere_csf::curve::hausdorff_distance(&moved, &b.last().curve);
        prop_assert!(gap < 1e-6, "gap {}", gap);
    }
}
