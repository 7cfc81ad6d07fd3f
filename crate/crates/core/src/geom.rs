//! Exact primitives on the unit sphere: points, great circles, latitudes,
//! rotations, caps, bands and wedges.
//!
//! Everything here is an immutable value. Points are unit vectors in R^3;
//! a great circle is stored by its pole and oriented counterclockwise when
//! seen from that pole (so the pole side is on the left when walking along
//! the circle).

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Distance below which a point counts as sitting on the pole of a circle.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// A point on the unit sphere.
#[derive(Clone, Copy, PartialEq)]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    /// Normalizes `(x, y, z)` onto the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vec3::new(x, y, z))
    }

    pub fn from_vector(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 1e-300) {
            return Err(Error::ZeroVector);
        }
        Ok(SpherePoint(v / n))
    }

    /// Normalizes a vector already known to be far from zero.
    #[inline]
    pub(crate) fn normalized(v: Vec3) -> Self {
        SpherePoint(v.normalize())
    }

    /// Point at colatitude `polar` and longitude `azimuth` in the standard frame.
    pub fn from_polar(polar: f64, azimuth: f64) -> Self {
        SpherePoint(Vec3::new(
            polar.sin() * azimuth.cos(),
            polar.sin() * azimuth.sin(),
            polar.cos(),
        ))
    }

    pub fn north() -> Self {
        SpherePoint(Vec3::z())
    }

    pub fn south() -> Self {
        SpherePoint(-Vec3::z())
    }

    #[inline]
    pub fn vector(&self) -> &Vec3 {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }
    pub fn y(&self) -> f64 {
        self.0.y
    }
    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    #[inline]
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.0.dot(&other.0)
    }

    /// The antipodal point `-p`.
    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(-self.0)
    }

    /// Unit tangent at `self` pointing along the geodesic toward `q`.
    /// Returns `None` when `q` is (numerically) `self` or its antipode.
    pub fn tangent_toward(&self, q: &SpherePoint) -> Option<Vec3> {
        let t = q.0 - self.0 * self.0.dot(&q.0);
        let n = t.norm();
        (n > 1e-15).then(|| t / n)
    }

    /// Moves along the geodesic leaving `self` with initial velocity `v`
    /// (a tangent vector; its length is the distance travelled).
    pub fn exp(&self, v: &Vec3) -> SpherePoint {
        let v = v - self.0 * self.0.dot(v);
        let len = v.norm();
        if len < 1e-300 {
            return *self;
        }
        SpherePoint::normalized(self.0 * len.cos() + v * (len.sin() / len))
    }
}

impl fmt::Debug for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpherePoint({}, {}, {})", self.0.x, self.0.y, self.0.z)
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(d)?;
        SpherePoint::new(x, y, z).map_err(serde::de::Error::custom)
    }
}

/// Great-circle distance in `[0, pi]`.
///
/// Uses `atan2(|p x q|, p.q)`, which agrees with the clamped `acos` form but
/// keeps full precision for nearly coincident and nearly antipodal pairs.
#[inline]
pub fn geodesic_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    p.0.cross(&q.0).norm().atan2(p.0.dot(&q.0))
}

/// Point a fraction `s` of the way along the minor geodesic from `p` to `q`.
pub fn slerp(p: &SpherePoint, q: &SpherePoint, s: f64) -> SpherePoint {
    let d = geodesic_distance(p, q);
    if d < 1e-12 {
        return SpherePoint::normalized(p.0 * (1.0 - s) + q.0 * s);
    }
    let sd = d.sin();
    let a = ((1.0 - s) * d).sin() / sd;
    let b = (s * d).sin() / sd;
    SpherePoint::normalized(p.0 * a + q.0 * b)
}

/// Area of the geodesic ball (cap) of radius `r`, `2 pi (1 - cos r)`.
pub fn cap_area(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < PI) {
        return Err(Error::Domain(format!("cap radius {r} outside (0, pi)")));
    }
    Ok(TAU * (1.0 - r.cos()))
}

/// An oriented great circle `{p : <p, pole> = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreatCircle {
    pole: SpherePoint,
}

impl GreatCircle {
    pub fn new(pole: SpherePoint) -> Self {
        GreatCircle { pole }
    }

    /// The equator, with pole `(0, 0, 1)`.
    pub fn equator() -> Self {
        GreatCircle::new(SpherePoint::north())
    }

    /// The great circle through two non-antipodal, distinct points, oriented
    /// from `a` toward `b`.
    pub fn through(a: &SpherePoint, b: &SpherePoint) -> Result<Self> {
        Ok(GreatCircle::new(SpherePoint::from_vector(a.0.cross(&b.0))?))
    }

    #[inline]
    pub fn pole(&self) -> &SpherePoint {
        &self.pole
    }

    /// Orthonormal frame `(e1, e2)` spanning the circle's plane with
    /// `e2 = pole x e1`, so longitude increases counterclockwise seen from
    /// the pole. `e1` is fixed deterministically from the pole alone.
    pub fn frame(&self) -> (Vec3, Vec3) {
        let p = self.pole.0;
        // least-aligned coordinate axis gives a well-conditioned cross product
        let axis = if p.x.abs() <= p.y.abs() && p.x.abs() <= p.z.abs() {
            Vec3::x()
        } else if p.y.abs() <= p.z.abs() {
            Vec3::y()
        } else {
            Vec3::z()
        };
        let e1 = axis.cross(&p).normalize();
        let e2 = p.cross(&e1);
        (e1, e2)
    }

    /// Point at the given longitude along the circle, displaced toward the
    /// pole by the signed latitude angle.
    pub fn point_at(&self, longitude: f64, latitude: f64) -> SpherePoint {
        let (e1, e2) = self.frame();
        let v = (e1 * longitude.cos() + e2 * longitude.sin()) * latitude.cos()
            + self.pole.0 * latitude.sin();
        SpherePoint::normalized(v)
    }

    /// Longitude of `p` in the circle's frame, in `(-pi, pi]`.
    pub fn longitude_of(&self, p: &SpherePoint) -> f64 {
        let (e1, e2) = self.frame();
        p.0.dot(&e2).atan2(p.0.dot(&e1))
    }

    /// `pi/2 - d(p, pole)`: zero on the circle, positive on the pole side.
    /// `|value| < r` iff `p` lies in the band `B_r(g)`.
    #[inline]
    pub fn signed_band_coordinate(&self, p: &SpherePoint) -> f64 {
        FRAC_PI_2 - geodesic_distance(p, &self.pole)
    }

    /// Mirror image of `p` across the circle's plane.
    pub fn reflect(&self, p: &SpherePoint) -> SpherePoint {
        let n = self.pole.0;
        SpherePoint::normalized(p.0 - n * (2.0 * p.0.dot(&n)))
    }

    /// Direction of the latitude through `p` (pole x p, normalized), or `None`
    /// at the poles.
    pub fn latitude_direction(&self, p: &SpherePoint) -> Option<Vec3> {
        let d = self.pole.0.cross(&p.0);
        let n = d.norm();
        (n > 1e-15).then(|| d / n)
    }

    /// Applies a rotation to the circle (rotates its pole).
    pub fn rotated(&self, rot: &Rotation) -> GreatCircle {
        GreatCircle::new(rot.apply(&self.pole))
    }
}

/// A latitude `∂B_radius(pole)`; when the pole belongs to a great circle `g`,
/// these are the latitudes of `g`, and radius `pi/2` is `g` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Latitude {
    pub pole: SpherePoint,
    pub radius: f64,
}

impl Latitude {
    pub fn contains(&self, p: &SpherePoint, tol: f64) -> bool {
        (geodesic_distance(p, &self.pole) - self.radius).abs() <= tol
    }
}

/// The latitude of `g` through `p`.
pub fn latitude_through(g: &GreatCircle, p: &SpherePoint) -> Result<Latitude> {
    let radius = geodesic_distance(g.pole(), p);
    if !(POLE_TOLERANCE..=PI - POLE_TOLERANCE).contains(&radius) {
        return Err(Error::PoleDegenerate { tolerance: POLE_TOLERANCE });
    }
    Ok(Latitude { pole: *g.pole(), radius })
}

/// Rotation by `angle` (right-handed) about `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    axis: SpherePoint,
    angle: f64,
}

impl Rotation {
    /// The angle is reduced into `(-pi, pi]`.
    pub fn new(axis: SpherePoint, angle: f64) -> Self {
        let mut a = angle.rem_euclid(TAU);
        if a > PI {
            a -= TAU;
        }
        Rotation { axis, angle: a }
    }

    pub fn axis(&self) -> &SpherePoint {
        &self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn inverse(&self) -> Rotation {
        Rotation::new(self.axis, -self.angle)
    }

    /// Rodrigues' formula.
    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        let k = self.axis.0;
        let (s, c) = self.angle.sin_cos();
        v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
    }

    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        SpherePoint::normalized(self.apply_vector(&p.0))
    }
}

/// Rotates `p` by `rot`.
pub fn rotate(rot: &Rotation, p: &SpherePoint) -> SpherePoint {
    rot.apply(p)
}

/// The open band `B_r(g)` of points within `halfwidth` of a great circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub circle: GreatCircle,
    pub halfwidth: f64,
}

impl Band {
    pub fn new(circle: GreatCircle, halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0 && halfwidth < FRAC_PI_2) {
            return Err(Error::Domain(format!("band halfwidth {halfwidth} outside (0, pi/2)")));
        }
        Ok(Band { circle, halfwidth })
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        self.circle.signed_band_coordinate(p).abs() < self.halfwidth
    }
}

/// The wedge `W_theta(g, x)`: union of the great circles obtained by rotating
/// `g` about its point `x` through angles `|psi| <= halfangle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    pub circle: GreatCircle,
    pub vertex: SpherePoint,
    pub halfangle: f64,
}

impl Wedge {
    pub fn new(circle: GreatCircle, vertex: SpherePoint, halfangle: f64) -> Result<Self> {
        if circle.pole().dot(&vertex).abs() > 1e-9 {
            return Err(Error::Domain("wedge vertex is not on its great circle".into()));
        }
        if !(0.0..FRAC_PI_2).contains(&halfangle) {
            return Err(Error::Domain(format!("wedge halfangle {halfangle} outside [0, pi/2)")));
        }
        Ok(Wedge { circle, vertex, halfangle })
    }

    /// Rotation angle `psi` in `(-pi/2, pi/2]` such that `p` lies on
    /// `R_psi(g)`; `None` for `p = ±vertex` (on every such circle).
    pub fn tilt_of(&self, p: &SpherePoint) -> Option<f64> {
        let v = self.vertex.0;
        let q = p.0 - v * v.dot(&p.0);
        if q.norm() < 1e-14 {
            return None;
        }
        let pole = self.circle.pole().0;
        let e1 = pole.cross(&v);
        let mut psi = q.dot(&pole).atan2(q.dot(&e1));
        if psi > FRAC_PI_2 {
            psi -= PI;
        } else if psi <= -FRAC_PI_2 {
            psi += PI;
        }
        Some(psi)
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        self.tilt_of(p).is_none_or(|psi| psi.abs() <= self.halfangle + 1e-12)
    }

    /// The rotation `R_psi` fixing the vertex.
    pub fn rotation(&self, psi: f64) -> Rotation {
        Rotation::new(self.vertex, psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(x, y, z).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_abs_diff_eq!(geodesic_distance(&pt(0., 0., 1.), &pt(1., 0., 0.)), FRAC_PI_2, epsilon = 1e-15);
        let p = pt(0.3, -0.2, 0.9);
        assert_eq!(geodesic_distance(&p, &p), 0.0);
        assert_abs_diff_eq!(geodesic_distance(&pt(0., 0., 1.), &pt(0., 0., -1.)), PI, epsilon = 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(SpherePoint::new(0., 0., 0.), Err(Error::ZeroVector));
    }

    #[test]
    fn latitude_examples() {
        let g = GreatCircle::equator();
        let lat = latitude_through(&g, &pt(1., 0., 0.)).unwrap();
        assert_abs_diff_eq!(lat.radius, FRAC_PI_2, epsilon = 1e-15);

        let p = pt(0.3f64.sin(), 0., 0.3f64.cos());
        assert_abs_diff_eq!(latitude_through(&g, &p).unwrap().radius, 0.3, epsilon = 1e-14);

        let p = SpherePoint::from_polar(1.2, 0.7);
        let lat = latitude_through(&g, &p).unwrap();
        assert_abs_diff_eq!(lat.radius, 1.2, epsilon = 1e-14);
        assert_abs_diff_eq!(p.dot(&lat.pole), 1.2f64.cos(), epsilon = 1e-14);

        assert!(matches!(latitude_through(&g, &SpherePoint::north()), Err(Error::PoleDegenerate { .. })));
        assert!(matches!(latitude_through(&g, &SpherePoint::south()), Err(Error::PoleDegenerate { .. })));
    }

    #[test]
    fn band_coordinate_examples() {
        let g = GreatCircle::equator();
        assert_abs_diff_eq!(g.signed_band_coordinate(&pt(0., 1., 0.)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.signed_band_coordinate(&SpherePoint::north()), FRAC_PI_2, epsilon = 1e-15);
        let p = SpherePoint::from_polar(1.4, 2.0);
        assert_abs_diff_eq!(g.signed_band_coordinate(&p), FRAC_PI_2 - 1.4, epsilon = 1e-14);
        assert_abs_diff_eq!(FRAC_PI_2 - 1.4, 0.170796, epsilon = 1e-6);
        let band = Band::new(g, 0.2).unwrap();
        assert!(band.contains(&p));
        assert!(!Band::new(g, 0.1).unwrap().contains(&p));
    }

    #[test]
    fn cap_area_examples() {
        assert_abs_diff_eq!(cap_area(FRAC_PI_2).unwrap(), TAU, epsilon = 1e-14);
        assert_abs_diff_eq!(cap_area(PI - 1e-9).unwrap(), 2.0 * TAU, epsilon = 1e-12);
        assert_abs_diff_eq!(cap_area(PI / 3.0).unwrap(), PI, epsilon = 1e-14);
        assert!(cap_area(0.0).is_err());
        assert!(cap_area(PI).is_err());
        assert!(cap_area(-1.0).is_err());
    }

    #[test]
    fn rotation_examples() {
        let p = pt(0.2, 0.5, -0.4);
        let id = Rotation::new(SpherePoint::north(), 0.0);
        assert_abs_diff_eq!((rotate(&id, &p).vector() - p.vector()).norm(), 0.0, epsilon = 1e-15);

        let quarter = Rotation::new(SpherePoint::north(), FRAC_PI_2);
        let q = rotate(&quarter, &pt(1., 0., 0.));
        assert_abs_diff_eq!((q.vector() - Vec3::y()).norm(), 0.0, epsilon = 1e-15);

        let r = Rotation::new(pt(1., 2., 3.), 0.77);
        let back = rotate(&r.inverse(), &rotate(&r, &p));
        assert_abs_diff_eq!((back.vector() - p.vector()).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(Rotation::new(SpherePoint::north(), 3.0 * PI).angle(), PI);
    }

    #[test]
    fn great_circle_frame_is_oriented() {
        let g = GreatCircle::new(pt(0.3, -0.7, 0.2));
        let (e1, e2) = g.frame();
        assert_abs_diff_eq!(e1.dot(g.pole().vector()), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e1.cross(&e2).dot(g.pole().vector()), 1.0, epsilon = 1e-14);
        let p = g.point_at(1.1, 0.25);
        assert_abs_diff_eq!(g.longitude_of(&p), 1.1, epsilon = 1e-14);
        assert_abs_diff_eq!(g.signed_band_coordinate(&p), 0.25, epsilon = 1e-14);
        let m = g.reflect(&p);
        assert_abs_diff_eq!(g.signed_band_coordinate(&m), -0.25, epsilon = 1e-14);
    }

    #[test]
    fn wedge_membership() {
        let g = GreatCircle::equator();
        let x = pt(1., 0., 0.);
        let w = Wedge::new(g, x, 0.2).unwrap();
        assert!(w.contains(&x));
        assert!(w.contains(&x.antipode()));
        // a point on R_psi(g) with |psi| <= 0.2
        let p = w.rotation(0.15).apply(&pt(0.3, 1.0, 0.0));
        assert_abs_diff_eq!(w.tilt_of(&p).unwrap(), 0.15, epsilon = 1e-13);
        assert!(w.contains(&p));
        let q = w.rotation(-0.3).apply(&pt(0.3, 1.0, 0.0));
        assert!(!w.contains(&q));
        assert!(Wedge::new(g, pt(1., 0., 0.1), 0.2).is_err());
    }

    fn unit() -> impl Strategy<Value = SpherePoint> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-3)
            .prop_map(|(x, y, z)| pt(x, y, z))
    }

    proptest! {
        #[test]
        fn normalization_holds(p in unit()) {
            prop_assert!((p.vector().norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn metric_axioms(p in unit(), q in unit(), r in unit()) {
            let d = geodesic_distance;
            prop_assert!((d(&p, &q) - d(&q, &p)).abs() < 1e-15);
            prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-10);
            prop_assert!((0.0..=PI).contains(&d(&p, &q)));
        }

        #[test]
        fn latitude_contains_its_point(pole in unit(), p in unit()) {
            let g = GreatCircle::new(pole);
            if let Ok(lat) = latitude_through(&g, &p) {
                prop_assert!(lat.contains(&p, 1e-10));
                // disjoint from g unless it is g itself
                if (lat.radius - FRAC_PI_2).abs() > 1e-6 {
                    let on_g = g.point_at(0.3, 0.0);
                    prop_assert!(!lat.contains(&on_g, 1e-9));
                }
            }
        }

        #[test]
        fn complementary_caps(r in 1e-3f64..(PI - 1e-3)) {
            prop_assert!((cap_area(r).unwrap() + cap_area(PI - r).unwrap() - 2.0 * TAU).abs() < 1e-12);
        }

        #[test]
        fn rotation_is_isometry(axis in unit(), angle in -PI..PI, p in unit(), q in unit()) {
            let rot = Rotation::new(axis, angle);
            let before = geodesic_distance(&p, &q);
            let after = geodesic_distance(&rotate(&rot, &p), &rotate(&rot, &q));
            prop_assert!((before - after).abs() < 1e-12);
            prop_assert!((rot.apply(&p).dot(&rot.apply(&q)) - p.dot(&q)).abs() < 1e-12);
            let fixed = rotate(&rot, &axis);
            prop_assert!((fixed.vector() - axis.vector()).norm() < 1e-12);
        }

        #[test]
        fn rotation_composition(axis in unit(), a in -1.5f64..1.5, b in -1.5f64..1.5, p in unit()) {
            let ra = Rotation::new(axis, a);
            let rb = Rotation::new(axis, b);
            let rab = Rotation::new(axis, a + b);
            let lhs = rb.apply(&ra.apply(&p));
            let rhs = rab.apply(&p);
            prop_assert!((lhs.vector() - rhs.vector()).norm() < 1e-12);
        }

        #[test]
        fn wedge_invariant_under_vertex_rotation(lon in 0.1f64..3.0, psi in -0.3f64..0.3, spin in -0.2f64..0.2) {
            let g = GreatCircle::equator();
            let w = Wedge::new(g, pt(1., 0., 0.), 0.3).unwrap();
            let base = w.rotation(psi).apply(&g.point_at(lon, 0.0));
            prop_assert!(w.contains(&base));
            // rotating by a further angle keeps membership whenever the total
            // tilt stays within the halfangle
            let moved = w.rotation(spin).apply(&base);
            prop_assert_eq!(w.contains(&moved), (psi + spin).abs() <= 0.3 + 1e-12);
        }
    }
}
