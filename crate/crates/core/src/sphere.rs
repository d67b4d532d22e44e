//! Points on the unit sphere, coplanarity predicates, and spherical Delaunay
//! triangulation through the convex hull.
//!
//! Four points of the sphere are cocircular exactly when they are coplanar,
//! and the Delaunay triangulation of points on the sphere is the boundary of
//! their convex hull. A triple is a hull face iff every other point lies
//! strictly on one side of its plane, which gives a direct O(n^4) algorithm.
//!
//! Determinants are evaluated in `f64`; when the result is too close to zero
//! to trust its sign, it is re-evaluated exactly over the rationals (every
//! finite `f64` is a dyadic rational).

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{validate, Face, Triangulation};

pub const DEFAULT_EPS_GEO: f64 = 1e-9;
pub const NORM_TOLERANCE: f64 = 1e-12;

pub(crate) type Vec3 = [f64; 3];

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: Vec3, k: f64) -> Vec3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Rotation of `v` by `angle` about the unit `axis` (Rodrigues).
pub(crate) fn rotate(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    let k_cross_v = cross(axis, v);
    let k_dot_v = dot(axis, v);
    add(add(scale(v, c), scale(k_cross_v, s)), scale(axis, k_dot_v * (1.0 - c)))
}

/// Angle between two unit vectors, accurate for small and large angles.
pub(crate) fn angle_between(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// A point on the unit sphere. The caller's coordinates are kept alongside
/// the normalized ones, which are obtained with a single division by the
/// Euclidean norm of the input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    raw: Vec3,
    unit: Vec3,
}

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, SphereError> {
        let raw = [x, y, z];
        if raw.iter().any(|c| !c.is_finite()) {
            return Err(SphereError::InvalidPoint(raw));
        }
        let len = norm(raw);
        if len == 0.0 || !len.is_finite() {
            return Err(SphereError::InvalidPoint(raw));
        }
        let unit = [x / len, y / len, z / len];
        debug_assert!((norm(unit) - 1.0).abs() <= NORM_TOLERANCE);
        Ok(SpherePoint { raw, unit })
    }

    pub(crate) fn from_unit(v: Vec3) -> Self {
        SpherePoint::new(v[0], v[1], v[2]).expect("finite nonzero vector")
    }

    /// Point at latitude/longitude given in radians.
    pub fn from_lat_lon(lat: f64, lon: f64) -> Self {
        let (sl, cl) = lat.sin_cos();
        let (so, co) = lon.sin_cos();
        SpherePoint::from_unit([cl * co, cl * so, sl])
    }

    pub fn coords(&self) -> Vec3 {
        self.unit
    }

    pub fn input(&self) -> Vec3 {
        self.raw
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        norm(sub(self.unit, other.unit))
    }

    /// Great-circle distance in radians.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        angle_between(self.unit, other.unit)
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(deserializer)?;
        SpherePoint::new(x, y, z).map_err(serde::de::Error::custom)
    }
}

/// An ordered list of points; index `i` is vertex `i` of any triangulation
/// computed from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration {
    pub points: Vec<SpherePoint>,
}

impl Configuration {
    pub fn new(points: Vec<SpherePoint>) -> Self {
        Configuration { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `n` points drawn uniformly from the sphere.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let points = (0..n)
            .map(|_| {
                let z: f64 = rng.random_range(-1.0..1.0);
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let r = (1.0 - z * z).sqrt();
                SpherePoint::from_unit([r * phi.cos(), r * phi.sin(), z])
            })
            .collect();
        Configuration { points }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GeneralPositionViolation {
    Coincident(usize, usize),
    GreatCircle(usize, usize, usize),
    Cocircular(usize, usize, usize, usize),
}

impl fmt::Display for GeneralPositionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneralPositionViolation::Coincident(i, j) => write!(f, "coincident points {i}, {j}"),
            GeneralPositionViolation::GreatCircle(i, j, k) => {
                write!(f, "points {i}, {j}, {k} lie on a great circle")
            }
            GeneralPositionViolation::Cocircular(i, j, k, l) => {
                write!(f, "points {i}, {j}, {k}, {l} are cocircular")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SphereError {
    #[error("point {0:?} cannot be normalized onto the sphere")]
    InvalidPoint(Vec3),
    #[error("at least 4 points are required, got {0}")]
    TooFewPoints(usize),
    #[error("face vertices lie on a common great circle")]
    DegenerateFace,
    #[error("configuration is not in general position: {}", list(.0))]
    GeneralPositionViolation(Vec<GeneralPositionViolation>),
    #[error("hull construction produced an invalid complex: {0}")]
    Internal(String),
}

fn list(v: &[GeneralPositionViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// `det[q - p; r - p; s - p]`: zero iff the four points are coplanar, i.e.
/// cocircular on the sphere. Positive when `s` lies on the side of the
/// plane that `(q - p) x (r - p)` points to.
pub fn coplanarity_det(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint, s: &SpherePoint) -> f64 {
    let a = sub(q.unit, p.unit);
    let b = sub(r.unit, p.unit);
    let c = sub(s.unit, p.unit);
    dot(a, cross(b, c))
}

/// A bound on the rounding error of `coplanarity_det`.
fn coplanarity_error_bound(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint, s: &SpherePoint) -> f64 {
    let a = sub(q.unit, p.unit).map(f64::abs);
    let b = sub(r.unit, p.unit).map(f64::abs);
    let c = sub(s.unit, p.unit).map(f64::abs);
    let permanent =
        a[0] * (b[1] * c[2] + b[2] * c[1]) + a[1] * (b[2] * c[0] + b[0] * c[2]) + a[2] * (b[0] * c[1] + b[1] * c[0]);
    // Covers the rounding of the differences, products and sums.
    1e-15 * permanent
}

fn exact(v: Vec3) -> [BigRational; 3] {
    v.map(|c| BigRational::from_float(c).expect("finite coordinate"))
}

/// Exact sign of `coplanarity_det` on the stored `f64` coordinates.
pub fn exact_coplanarity_sign(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint, s: &SpherePoint) -> i8 {
    let [p, q, r, s] = [p, q, r, s].map(|x| exact(x.unit));
    let d = |u: &[BigRational; 3], v: &[BigRational; 3]| -> [BigRational; 3] {
        [&u[0] - &v[0], &u[1] - &v[1], &u[2] - &v[2]]
    };
    let a = d(&q, &p);
    let b = d(&r, &p);
    let c = d(&s, &p);
    let det = &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0]);
    if det.is_zero() {
        0
    } else if det.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of `coplanarity_det`, treating `|det| <= eps` as zero. With
/// `eps = 0` the sign is exact.
pub fn coplanarity_sign(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint, s: &SpherePoint, eps: f64) -> i8 {
    let det = coplanarity_det(p, q, r, s);
    if det.abs() <= eps {
        return 0;
    }
    if det.abs() > coplanarity_error_bound(p, q, r, s) {
        return if det > 0.0 { 1 } else { -1 };
    }
    exact_coplanarity_sign(p, q, r, s)
}

/// `p . (q x r)`; zero iff the three points lie on a great circle.
pub fn great_circle_det(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint) -> f64 {
    dot(p.unit, cross(q.unit, r.unit))
}

/// Position of `s` relative to the circumcircle of the face `(p, q, r)`,
/// which must be oriented as a hull face (counter-clockwise seen from
/// outside the hull): `+1` inside the circumcircle cap cut off by the face
/// plane, `-1` on the hull side, `0` within `eps` of the plane.
pub fn in_circumcircle(face: [&SpherePoint; 3], s: &SpherePoint, eps: f64) -> Result<i8, SphereError> {
    let [p, q, r] = face;
    if great_circle_det(p, q, r).abs() <= eps {
        return Err(SphereError::DegenerateFace);
    }
    Ok(coplanarity_sign(p, q, r, s, eps))
}

/// Coincident pairs, great-circle triples and cocircular quadruples, each
/// detected with tolerance `eps`.
pub fn is_general_position(c: &Configuration, eps: f64) -> Vec<GeneralPositionViolation> {
    let pts = &c.points;
    let n = pts.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].distance(&pts[j]) <= eps {
                out.push(GeneralPositionViolation::Coincident(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if great_circle_det(&pts[i], &pts[j], &pts[k]).abs() <= eps {
                    out.push(GeneralPositionViolation::GreatCircle(i, j, k));
                }
                for l in k + 1..n {
                    if coplanarity_sign(&pts[i], &pts[j], &pts[k], &pts[l], eps) == 0 {
                        out.push(GeneralPositionViolation::Cocircular(i, j, k, l));
                    }
                }
            }
        }
    }
    out
}

/// Spherical Delaunay triangulation of a configuration in general position
/// (within `eps`). Vertex `i` of the result is `c.points[i]`.
pub fn delaunay(c: &Configuration, eps: f64) -> Result<Triangulation, SphereError> {
    if c.len() < 4 {
        return Err(SphereError::TooFewPoints(c.len()));
    }
    let violations = is_general_position(c, eps);
    if !violations.is_empty() {
        return Err(SphereError::GeneralPositionViolation(violations));
    }
    hull_triangulation(c, eps)
}

/// Convex-hull triangulation that only rejects degeneracies which make the
/// Delaunay triangulation ambiguous: coincident points and cocircular
/// quadruples whose circle bounds an empty cap. Great-circle triples and
/// cocircular quadruples with points on both sides are accepted. Used when
/// sampling moving configurations, typically with `eps = 0` (exact signs).
pub fn hull_triangulation(c: &Configuration, eps: f64) -> Result<Triangulation, SphereError> {
    let pts = &c.points;
    let n = pts.len();
    if n < 4 {
        return Err(SphereError::TooFewPoints(n));
    }
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].distance(&pts[j]) <= eps.max(f64::MIN_POSITIVE) {
                violations.push(GeneralPositionViolation::Coincident(i, j));
            }
        }
    }
    if !violations.is_empty() {
        return Err(SphereError::GeneralPositionViolation(violations));
    }
    let mut faces = Vec::with_capacity(2 * n - 4);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                match classify_triple(pts, i, j, k, eps) {
                    TripleClass::NotFace => {}
                    TripleClass::Face(f) => faces.push(f),
                    TripleClass::Degenerate(zeros) => {
                        for l in zeros {
                            let mut q = [i, j, k, l];
                            q.sort_unstable();
                            violations.push(GeneralPositionViolation::Cocircular(q[0], q[1], q[2], q[3]));
                        }
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        violations.sort();
        violations.dedup();
        return Err(SphereError::GeneralPositionViolation(violations));
    }
    let t = Triangulation::from_faces(n, faces);
    let problems = validate(&t);
    if !problems.is_empty() {
        let msg = problems.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ");
        return Err(SphereError::Internal(msg));
    }
    Ok(t)
}

enum TripleClass {
    NotFace,
    Face(Face),
    Degenerate(Vec<usize>),
}

fn classify_triple(pts: &[SpherePoint], i: usize, j: usize, k: usize, eps: f64) -> TripleClass {
    let (mut pos, mut neg) = (false, false);
    let mut zeros = Vec::new();
    for (l, s) in pts.iter().enumerate() {
        if l == i || l == j || l == k {
            continue;
        }
        match coplanarity_sign(&pts[i], &pts[j], &pts[k], s, eps) {
            1 => pos = true,
            -1 => neg = true,
            _ => zeros.push(l),
        }
        if pos && neg {
            return TripleClass::NotFace;
        }
    }
    if !zeros.is_empty() {
        return TripleClass::Degenerate(zeros);
    }
    // Orient so that every other point is on the negative (hull) side.
    if pos {
        TripleClass::Face(Face::new(i, k, j))
    } else {
        TripleClass::Face(Face::new(i, j, k))
    }
}
