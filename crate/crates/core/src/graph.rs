//! Curve shortening flow for curves that are graphs over a great circle.
//!
//! A graph is a 2π-periodic profile `u` sampled at `x_j = 2πj/n`; the curve
//! is the set of points at longitude `x_j` along `g` and latitude
//! `atan(u_j)`, with `u > 0` toward `pole(g)`. In this chart the flow reads
//! `u_t = (1+u²)² / (1+u²+u_x²) · (u_xx + u)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::curve::{hausdorff_distance, ClosedSphereCurve};
use crate::error::{Error, Result};
use crate::flow::{evolve_closed, FlowConfig};
use crate::geom::GreatCircle;

/// Largest admissible `|u|`: latitude `pi/2 - 1e-3`.
pub fn pole_guard() -> f64 {
    (FRAC_PI_2 - 1e-3).tan()
}

/// Samples of a periodic profile; `n` is a power of two, at least 64.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGraph {
    values: Vec<f64>,
}

impl PeriodicGraph {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::Domain(format!("graph needs a power-of-two sample count >= 64, got {n}")));
        }
        if let Some(u) = values.iter().find(|u| !(u.abs() < pole_guard())) {
            return Err(Error::Domain(format!("sample {u} is beyond the pole guard")));
        }
        Ok(PeriodicGraph { values })
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..n).map(|j| f(TAU * j as f64 / n as f64)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.values.len();
        (0..n).map(move |j| TAU * j as f64 / n as f64)
    }

    /// The profile `x -> u(-x)`.
    pub fn reflected(&self) -> Self {
        let n = self.values.len();
        PeriodicGraph { values: (0..n).map(|j| self.values[(n - j) % n]).collect() }
    }

    /// Discrete sine coefficient `(2/n) sum u_j sin(k x_j)`.
    pub fn sine_coefficient(&self, k: u32) -> f64 {
        let n = self.values.len() as f64;
        self.grid().zip(&self.values).map(|(x, u)| u * (k as f64 * x).sin()).sum::<f64>() * 2.0 / n
    }

    /// Profile CSV: one `x,u` line per sample.
    pub fn to_csv(&self) -> String {
        self.grid().zip(&self.values).map(|(x, u)| format!("{x:.16e},{u:.16e}\n")).collect()
    }

    /// Reads the `x,u` format; the `x` column is checked against the grid.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut xs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected x,u", lineno + 1)));
            }
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)));
            xs.push(parse(parts[0])?);
            values.push(parse(parts[1])?);
        }
        let n = values.len();
        for (j, x) in xs.iter().enumerate() {
            if (x - TAU * j as f64 / n as f64).abs() > 1e-9 {
                return Err(Error::Parse(format!("sample {j} at x = {x} is off the uniform grid")));
            }
        }
        Self::new(values)
    }
}

/// Largest stable step for the current profile.
fn stable_step(u: &[f64]) -> f64 {
    let h = TAU / u.len() as f64;
    let m = u.iter().map(|v| (1.0 + v * v).powi(2)).fold(0.0, f64::max);
    0.2 * h * h / m
}

/// Explicit Euler with central differences. The step is the smaller of `dt`
/// and the parabolic stability limit; the last step lands on `t_end`.
pub fn evolve_graph(u0: &PeriodicGraph, dt: f64, t_end: f64) -> Result<PeriodicGraph> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Domain(format!("need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}")));
    }
    let n = u0.len();
    let h = TAU / n as f64;
    let guard = pole_guard();
    let mut u = u0.values.clone();
    let mut next = vec![0.0; n];
    let mut t = 0.0;
    while t < t_end {
        let step = dt.min(stable_step(&u)).min(t_end - t);
        for j in 0..n {
            let (l, c, r) = (u[(j + n - 1) % n], u[j], u[(j + 1) % n]);
            // written symmetrically in l and r so reflection commutes exactly
            let ux = (r - l) / (2.0 * h);
            let uxx = ((r + l) - 2.0 * c) / (h * h);
            let w = 1.0 + c * c;
            next[j] = c + step * w * w / (w + ux * ux) * (uxx + c);
        }
        std::mem::swap(&mut u, &mut next);
        t = if step == t_end - t { t_end } else { t + step };
        if u.iter().any(|v| !(v.abs() < guard)) {
            return Err(Error::BlowUp { time: t });
        }
    }
    Ok(PeriodicGraph { values: u })
}

/// The spherical curve of a profile over `g`.
pub fn lift_to_sphere(u: &PeriodicGraph, g: &GreatCircle) -> ClosedSphereCurve {
    let nodes = u.grid().zip(&u.values).map(|(x, v)| g.point_at(x, v.atan())).collect();
    ClosedSphereCurve::from_nodes_unchecked(nodes)
}

/// Hausdorff gap at time `t` between the graph solver and the parametric
/// solver started from the lift of `u0`.
pub fn crosscheck(u0: &PeriodicGraph, g: &GreatCircle, t: f64) -> Result<f64> {
    let graph = evolve_graph(u0, 1e-5, t)?;
    let cfg = FlowConfig {
        dt: 1e-5,
        max_time: t,
        snapshot_interval: t,
        target_nodes: u0.len().max(32),
        ..Default::default()
    };
    let traj = evolve_closed(&lift_to_sphere(u0, g), &cfg)?;
    Ok(hausdorff_distance(&lift_to_sphere(&graph, g), &traj.last().curve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{intersection_count, Polyline};
    use crate::geom::SpherePoint;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn constant(v: f64) -> PeriodicGraph {
        PeriodicGraph::from_fn(64, |_| v).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PeriodicGraph::new(vec![0.0; 48]).is_err());
        assert!(PeriodicGraph::new(vec![0.0; 100]).is_err());
        assert!(PeriodicGraph::new(vec![2000.0; 64]).is_err());
    }

    #[test]
    fn zero_is_fixed_exactly() {
        let out = evolve_graph(&constant(0.0), 1e-3, 1.0).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_data_follows_barrier_law() {
        let out = evolve_graph(&constant(0.1f64.tan()), 1e-5, 0.05).unwrap();
        let expected = (0.1f64.sin() * 0.05f64.exp()).asin().tan();
        assert_abs_diff_eq!(expected, 0.105535, epsilon = 1e-6);
        for v in out.values() {
            assert_abs_diff_eq!(*v, expected, epsilon = 1e-6);
        }
    }

    #[test]
    fn single_mode_decays_at_linear_rate() {
        let u0 = PeriodicGraph::from_fn(128, |x| 0.01 * (2.0 * x).sin()).unwrap();
        let out = evolve_graph(&u0, 1e-4, 0.1).unwrap();
        let amp = out.sine_coefficient(2);
        let expected = 0.01 * (-0.3f64).exp();
        assert!((amp - expected).abs() <= 0.05 * expected, "{amp} vs {expected}");
    }

    #[test]
    fn blow_up_reported() {
        // the stable step shrinks like u^-4, so start just under the guard
        let u0 = PeriodicGraph::from_fn(64, |_| pole_guard() - 0.05).unwrap();
        assert!(matches!(evolve_graph(&u0, 1e-4, 1.0), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn lift_examples() {
        let g = GreatCircle::equator();
        let flat = lift_to_sphere(&constant(0.0), &g);
        assert!(flat.nodes().iter().all(|p| p.z().abs() < 1e-15));
        let raised = lift_to_sphere(&constant(0.3f64.tan()), &g);
        for p in raised.nodes() {
            assert_abs_diff_eq!(g.signed_band_coordinate(p), 0.3, epsilon = 1e-12);
        }
        let wave = PeriodicGraph::from_fn(256, |x| 0.05 * (3.0 * x + 0.01).sin()).unwrap();
        assert_eq!(intersection_count(&lift_to_sphere(&wave, &g), &g), 6);
        let tilted = GreatCircle::new(SpherePoint::from_polar(0.4, 1.0));
        let lifted = lift_to_sphere(&constant(0.2f64.tan()), &tilted);
        assert!(lifted.nodes().iter().all(|p| (tilted.signed_band_coordinate(p) - 0.2).abs() < 1e-12));
    }

    #[test]
    fn csv_round_trip() {
        let u = PeriodicGraph::from_fn(64, |x| 0.1 * x.cos()).unwrap();
        assert_eq!(PeriodicGraph::from_csv(&u.to_csv()).unwrap(), u);
        assert!(PeriodicGraph::from_csv("0,1\n3,1\n").is_err());
    }

    #[test]
    fn crosscheck_trivial_cases() {
        let g = GreatCircle::equator();
        assert!(crosscheck(&constant(0.0), &g, 0.1).unwrap() <= 1e-9);
        assert!(crosscheck(&constant(0.1f64.tan()), &g, 0.1).unwrap() <= 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn reflection_commutes_exactly(a in -0.2f64..0.2, b in -0.2f64..0.2, k in 1u32..5, phase in 0.0f64..6.0) {
            let u0 = PeriodicGraph::from_fn(64, |x| a * (k as f64 * x + phase).sin() + b * (2.0 * x).cos()).unwrap();
            let lhs = evolve_graph(&u0.reflected(), 1e-3, 0.05).unwrap();
            let rhs = evolve_graph(&u0, 1e-3, 0.05).unwrap().reflected();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn constant_data_matches_closed_form(phi0 in 0.0f64..0.3, t in 0.0f64..0.3) {
            let out = evolve_graph(&constant(phi0.tan()), 1e-5, t).unwrap();
            let expected = (phi0.sin() * t.exp()).asin().tan();
            prop_assert!(out.values().iter().all(|v| (v - expected).abs() <= 1e-6));
        }
    }
}
