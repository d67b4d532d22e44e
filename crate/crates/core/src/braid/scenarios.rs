//! Seeded motion plans with known flip behaviour, used as fixtures.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Keyframe, MotionPlan, Trajectory};
use crate::sphere::{norm, rotate, scale, SpherePoint};

/// A random rotation of the sphere.
fn random_rotation(rng: &mut ChaCha8Rng) -> impl Fn(SpherePoint) -> SpherePoint {
    let axis = loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let len = norm(v);
        if len > 0.1 && len <= 1.0 {
            break scale(v, 1.0 / len);
        }
    };
    let angle = rng.random_range(0.0..2.0 * PI);
    move |p: SpherePoint| SpherePoint::from_unit(rotate(p.coords(), axis, angle))
}

fn deg(rng: &mut ChaCha8Rng, center: f64, spread: f64) -> f64 {
    (center + rng.random_range(-spread..spread)).to_radians()
}

/// Five points. Four stay put; the fifth dips into the circumcircle cap of a
/// neighbouring face and returns, so the Delaunay triangulation flips one
/// edge and then flips it back.
pub fn cap_crossing_plan(seed: u64) -> MotionPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixed = [
        SpherePoint::from_lat_lon(deg(&mut rng, 0.0, 3.0), deg(&mut rng, 0.0, 3.0)),
        SpherePoint::from_lat_lon(deg(&mut rng, 0.0, 3.0), deg(&mut rng, 120.0, 3.0)),
        SpherePoint::from_lat_lon(deg(&mut rng, 0.0, 3.0), deg(&mut rng, 240.0, 3.0)),
        SpherePoint::from_lat_lon(deg(&mut rng, -75.0, 3.0), deg(&mut rng, 200.0, 3.0)),
    ];
    let lon = deg(&mut rng, 60.0, 3.0);
    let high = SpherePoint::from_lat_lon(deg(&mut rng, 60.0, 3.0), lon);
    let low = SpherePoint::from_lat_lon(deg(&mut rng, 10.0, 3.0), lon);
    let rot = random_rotation(&mut rng);
    let mut trajectories: Vec<Trajectory> = fixed.iter().map(|&p| Trajectory::stationary(rot(p))).collect();
    let (high, low) = (rot(high), rot(low));
    trajectories.push(
        Trajectory::new(vec![
            Keyframe { time: 0.0, point: high },
            Keyframe { time: 0.5, point: low },
            Keyframe { time: 1.0, point: high },
        ])
        .expect("valid keyframes"),
    );
    MotionPlan::new(trajectories).expect("closed loop")
}

/// Five points near a circle of latitude, with latitude offsets
/// `ρ cos(2φ_k − θ)` as `θ` runs once around `[0, 2π]`, plus two spectators
/// in the far hemisphere. The triangulation of the five-point cap cycles
/// through all five triangulations of the pentagon: five flips among
/// vertices `0..5`, returning to the start.
pub fn pentagon_loop_plan(seed: u64) -> MotionPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lat = deg(&mut rng, 20.0, 5.0);
    let rho = 0.005;
    let lons: Vec<f64> = (0..5).map(|k| deg(&mut rng, 72.0 * k as f64, 8.0)).collect();
    let spectators = [
        SpherePoint::from_lat_lon(deg(&mut rng, -65.0, 10.0), deg(&mut rng, 40.0, 30.0)),
        SpherePoint::from_lat_lon(deg(&mut rng, -65.0, 10.0), deg(&mut rng, 220.0, 30.0)),
    ];
    let rot = random_rotation(&mut rng);
    let samples = 200;
    let mut trajectories = Vec::with_capacity(7);
    for &phi in &lons {
        let mut kfs = Vec::with_capacity(samples + 1);
        for j in 0..samples {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            let p = SpherePoint::from_lat_lon(lat + rho * (2.0 * phi - theta).cos(), phi);
            kfs.push(Keyframe {
                time: j as f64 / samples as f64,
                point: rot(p),
            });
        }
        let first = kfs[0].point;
        kfs.push(Keyframe {
            time: 1.0,
            point: first,
        });
        trajectories.push(Trajectory::new(kfs).expect("valid keyframes"));
    }
    for p in spectators {
        trajectories.push(Trajectory::stationary(rot(p)));
    }
    MotionPlan::new(trajectories).expect("closed loop")
}
