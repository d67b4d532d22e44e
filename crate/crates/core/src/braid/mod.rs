//! Braids as looped motions of points on the sphere, and the Delaunay flip
//! sequences they induce.

mod events;
pub mod scenarios;
mod simplify;
mod word;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::sphere::{angle_between, dot, norm, scale, sub, Configuration, SphereError, SpherePoint};

pub use events::{detect_flip_events, FlipEvent, FlipSequence, TraceOptions};
pub use simplify::{inverse_sequence, sequences_equivalent, simplify_check, Move, SimplifyReport};
pub use word::{parse_braid_word, word_to_motion, BraidWord, Generator, LayoutParams};

/// Trajectory ends must match a start point within this distance.
pub const LOOP_TOLERANCE: f64 = 1e-9;

/// Consecutive keyframes closer than this to antipodal are rejected.
const ANTIPODAL_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MotionError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("generator index {index} out of range 1..={max} for {n} strands")]
    IndexOutOfRange { index: usize, max: usize, n: usize },
    #[error("layout error: {0}")]
    Layout(String),
    #[error("invalid trajectory {index}: {reason}")]
    InvalidTrajectory { index: usize, reason: String },
    #[error("motion is not a loop: {0}")]
    NotALoop(String),
    #[error("points {i} and {j} collide near t = {time}")]
    Collision { time: f64, i: usize, j: usize },
    #[error("non-generic motion in [{t0}, {t1}]: {detail}")]
    NonGenericMotion { t0: f64, t1: f64, detail: String },
    #[error("degenerate configuration at t = {time}: {source}")]
    Geometry {
        time: f64,
        #[source]
        source: SphereError,
    },
    #[error("invalid options: {0}")]
    InvalidOptions(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Keyframe {
    pub time: f64,
    pub point: SpherePoint,
}

/// Spherical linear interpolation between unit vectors.
pub(crate) fn slerp(a: [f64; 3], b: [f64; 3], u: f64) -> [f64; 3] {
    let theta = angle_between(a, b);
    if theta < 1e-15 {
        return a;
    }
    let s = theta.sin();
    let wa = ((1.0 - u) * theta).sin() / s;
    let wb = (u * theta).sin() / s;
    [wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]]
}

/// A path on the sphere through keyframes at times `0 = t_0 < ... < t_m = 1`,
/// following the great-circle arc between consecutive keyframes at constant
/// speed.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    keyframes: Vec<Keyframe>,
}

impl Trajectory {
    pub fn new(keyframes: Vec<Keyframe>) -> Result<Self, String> {
        if keyframes.len() < 2 {
            return Err("needs at least two keyframes".into());
        }
        if keyframes[0].time != 0.0 || keyframes.last().unwrap().time != 1.0 {
            return Err("keyframe times must start at 0 and end at 1".into());
        }
        for w in keyframes.windows(2) {
            if w[1].time.is_nan() || w[1].time <= w[0].time {
                return Err(format!("times not strictly increasing at t = {}", w[1].time));
            }
            let theta = angle_between(w[0].point.coords(), w[1].point.coords());
            if theta > std::f64::consts::PI - ANTIPODAL_MARGIN {
                return Err(format!("antipodal keyframes at t = {}", w[0].time));
            }
        }
        Ok(Trajectory { keyframes })
    }

    /// A point that does not move.
    pub fn stationary(point: SpherePoint) -> Self {
        Trajectory {
            keyframes: vec![Keyframe { time: 0.0, point }, Keyframe { time: 1.0, point }],
        }
    }

    pub fn keyframes(&self) -> &[Keyframe] {
        &self.keyframes
    }

    pub fn start(&self) -> SpherePoint {
        self.keyframes[0].point
    }

    pub fn end(&self) -> SpherePoint {
        self.keyframes.last().unwrap().point
    }

    /// Position at time `t`, clamped to `[0, 1]`. Exactly the keyframe point
    /// at keyframe times.
    pub fn eval(&self, t: f64) -> SpherePoint {
        let t = t.clamp(0.0, 1.0);
        let k = self.keyframes.partition_point(|kf| kf.time <= t);
        if k == 0 {
            return self.keyframes[0].point;
        }
        let a = &self.keyframes[k - 1];
        if a.time == t || k == self.keyframes.len() {
            return a.point;
        }
        let b = &self.keyframes[k];
        if a.point == b.point {
            return a.point;
        }
        let u = (t - a.time) / (b.time - a.time);
        SpherePoint::from_unit(slerp(a.point.coords(), b.point.coords(), u))
    }
}

/// `n` trajectories forming a loop in the configuration space of distinct
/// unordered points: the set of end points equals the set of start points.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionPlan {
    trajectories: Vec<Trajectory>,
    /// `permutation[i] = j` when strand `i` ends where strand `j` started.
    permutation: Vec<usize>,
}

impl MotionPlan {
    pub fn new(trajectories: Vec<Trajectory>) -> Result<Self, MotionError> {
        let n = trajectories.len();
        let mut permutation = Vec::with_capacity(n);
        let mut taken = vec![false; n];
        for (i, tr) in trajectories.iter().enumerate() {
            let end = tr.end();
            let matches: Vec<usize> = (0..n)
                .filter(|&j| trajectories[j].start().distance(&end) <= LOOP_TOLERANCE)
                .collect();
            match matches.as_slice() {
                [j] if !taken[*j] => {
                    taken[*j] = true;
                    permutation.push(*j);
                }
                [] => {
                    return Err(MotionError::NotALoop(format!(
                        "strand {i} does not end at any start point"
                    )))
                }
                _ => {
                    return Err(MotionError::NotALoop(format!(
                        "end of strand {i} matches an ambiguous or repeated start point"
                    )))
                }
            }
        }
        Ok(MotionPlan {
            trajectories,
            permutation,
        })
    }

    pub fn n(&self) -> usize {
        self.trajectories.len()
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn is_pure(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn eval(&self, t: f64) -> Configuration {
        Configuration::new(self.trajectories.iter().map(|tr| tr.eval(t)).collect())
    }

    /// Sorted union of all keyframe times.
    fn keyframe_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self
            .trajectories
            .iter()
            .flat_map(|tr| tr.keyframes.iter().map(|k| k.time))
            .collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup();
        times
    }

    /// The same motion traversed with a different speed profile: the result
    /// at time `s` is the configuration this plan has at time `warp(s)`.
    /// `warp` must be a strictly increasing bijection of `[0, 1]`. Paths are
    /// first refined to a common set of keyframe times, so every strand
    /// shares the same time map and the family of configurations passed
    /// through is unchanged.
    pub fn reparametrized(&self, warp: impl Fn(f64) -> f64) -> Result<MotionPlan, MotionError> {
        let times = self.keyframe_times();
        let new_times: Vec<f64> = times
            .iter()
            .map(|&t| {
                if t <= 0.0 {
                    0.0
                } else if t >= 1.0 {
                    1.0
                } else {
                    invert_monotone(&warp, t)
                }
            })
            .collect();
        let mut trajectories = Vec::with_capacity(self.n());
        for (index, tr) in self.trajectories.iter().enumerate() {
            let keyframes = times
                .iter()
                .zip(&new_times)
                .map(|(&t, &s)| Keyframe {
                    time: s,
                    point: tr.eval(t),
                })
                .collect();
            let tr = Trajectory::new(keyframes).map_err(|reason| MotionError::InvalidTrajectory { index, reason })?;
            trajectories.push(tr);
        }
        Ok(MotionPlan {
            trajectories,
            permutation: self.permutation.clone(),
        })
    }

    /// Moves every keyframe by a seeded random tangent offset of length at
    /// most `magnitude`, keeping the loop closed: the last keyframe of strand
    /// `i` receives the perturbed first keyframe of the strand it ends on.
    pub fn jittered(&self, seed: u64, magnitude: f64) -> Result<MotionPlan, MotionError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut jitter = |p: SpherePoint| -> SpherePoint {
            let v = p.coords();
            let raw: [f64; 3] = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let tangent = sub(raw, scale(v, dot(raw, v)));
            let len = norm(tangent);
            if len < 1e-12 {
                return p;
            }
            let offset = scale(tangent, magnitude * rng.random_range(0.0..1.0) / len);
            let moved = [v[0] + offset[0], v[1] + offset[1], v[2] + offset[2]];
            SpherePoint::from_unit(moved)
        };
        let starts: Vec<SpherePoint> = self.trajectories.iter().map(|tr| jitter(tr.start())).collect();
        let mut trajectories = Vec::with_capacity(self.n());
        for (index, tr) in self.trajectories.iter().enumerate() {
            let last = tr.keyframes.len() - 1;
            let keyframes = tr
                .keyframes
                .iter()
                .enumerate()
                .map(|(k, kf)| {
                    let point = if k == 0 {
                        starts[index]
                    } else if k == last {
                        starts[self.permutation[index]]
                    } else {
                        jitter(kf.point)
                    };
                    Keyframe { time: kf.time, point }
                })
                .collect();
            let tr = Trajectory::new(keyframes).map_err(|reason| MotionError::InvalidTrajectory { index, reason })?;
            trajectories.push(tr);
        }
        Ok(MotionPlan {
            trajectories,
            permutation: self.permutation.clone(),
        })
    }

    pub fn to_file(&self) -> MotionFile {
        MotionFile {
            n: self.n(),
            trajectories: self
                .trajectories
                .iter()
                .map(|tr| tr.keyframes.iter().map(|k| (k.time, k.point)).collect())
                .collect(),
        }
    }

    pub fn from_file(file: &MotionFile) -> Result<MotionPlan, MotionError> {
        if file.trajectories.len() != file.n {
            return Err(MotionError::InvalidTrajectory {
                index: file.trajectories.len(),
                reason: format!(
                    "declared n = {} but found {} trajectories",
                    file.n,
                    file.trajectories.len()
                ),
            });
        }
        let mut trajectories = Vec::with_capacity(file.n);
        for (index, kfs) in file.trajectories.iter().enumerate() {
            let keyframes = kfs.iter().map(|&(time, point)| Keyframe { time, point }).collect();
            let tr = Trajectory::new(keyframes).map_err(|reason| MotionError::InvalidTrajectory { index, reason })?;
            trajectories.push(tr);
        }
        MotionPlan::new(trajectories)
    }
}

/// Inverse of a strictly increasing bijection of `[0, 1]` by bisection.
fn invert_monotone(f: &impl Fn(f64) -> f64, y: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// On-disk motion format: `{"n": .., "trajectories": [[[t, [x, y, z]], ..], ..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionFile {
    pub n: usize,
    pub trajectories: Vec<Vec<(f64, SpherePoint)>>,
}

/// Unit vector along `a + b`.
pub(crate) fn midpoint_axis(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    let m = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    scale(m, 1.0 / norm(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(x, y, z).unwrap()
    }

    #[test]
    fn trajectory_invariants() {
        let a = p(1.0, 0.0, 0.0);
        let b = p(0.0, 1.0, 0.0);
        assert!(Trajectory::new(vec![Keyframe { time: 0.0, point: a }]).is_err());
        assert!(Trajectory::new(vec![
            Keyframe { time: 0.0, point: a },
            Keyframe { time: 0.5, point: b },
            Keyframe { time: 0.5, point: a },
            Keyframe { time: 1.0, point: a },
        ])
        .is_err());
        assert!(Trajectory::new(vec![
            Keyframe { time: 0.0, point: a },
            Keyframe {
                time: 1.0,
                point: p(-1.0, 0.0, 0.0)
            },
        ])
        .is_err());
        assert!(Trajectory::new(vec![Keyframe { time: 0.1, point: a }, Keyframe { time: 1.0, point: a },]).is_err());
    }

    #[test]
    fn eval_keyframes_and_midpoint() {
        let a = p(1.0, 0.0, 0.0);
        let b = p(0.0, 1.0, 0.0);
        let tr = Trajectory::new(vec![
            Keyframe { time: 0.0, point: a },
            Keyframe { time: 0.5, point: b },
            Keyframe { time: 1.0, point: a },
        ])
        .unwrap();
        assert_eq!(tr.eval(0.0), a);
        assert_eq!(tr.eval(0.5), b);
        assert_eq!(tr.eval(1.0), a);
        let mid = tr.eval(0.25).coords();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((mid[0] - h).abs() < 1e-15 && (mid[1] - h).abs() < 1e-15 && mid[2].abs() < 1e-15);
    }

    #[test]
    fn loop_detection() {
        let a = p(1.0, 0.0, 0.0);
        let b = p(0.0, 1.0, 0.0);
        let c = p(0.0, 0.0, 1.0);
        let via = |s: SpherePoint, e: SpherePoint| {
            Trajectory::new(vec![
                Keyframe { time: 0.0, point: s },
                Keyframe { time: 0.5, point: c },
                Keyframe { time: 1.0, point: e },
            ])
            .unwrap()
        };
        let plan = MotionPlan::new(vec![via(a, b), via(b, a)]).unwrap();
        assert_eq!(plan.permutation(), &[1, 0]);
        assert!(!plan.is_pure());
        assert!(MotionPlan::new(vec![via(a, c), Trajectory::stationary(b)]).is_err());
    }

    #[test]
    fn reparametrization_preserves_configurations() {
        let a = p(1.0, 0.0, 0.0);
        let b = p(0.0, 1.0, 0.0);
        let tr = Trajectory::new(vec![
            Keyframe { time: 0.0, point: a },
            Keyframe { time: 0.5, point: b },
            Keyframe { time: 1.0, point: a },
        ])
        .unwrap();
        let plan = MotionPlan::new(vec![tr, Trajectory::stationary(p(0.0, 0.0, 1.0))]).unwrap();
        let warped = plan.reparametrized(|t| t * t).unwrap();
        let s = 0.5f64.sqrt();
        assert!(warped.eval(s).points[0].distance(&b) < 1e-12);
        assert_eq!(warped.eval(1.0), plan.eval(1.0));
    }

    #[test]
    fn jitter_keeps_loops_closed() {
        let a = p(1.0, 0.0, 0.0);
        let b = p(0.0, 1.0, 0.0);
        let c = p(0.0, 0.0, 1.0);
        let via = |s: SpherePoint, e: SpherePoint| {
            Trajectory::new(vec![
                Keyframe { time: 0.0, point: s },
                Keyframe { time: 0.5, point: c },
                Keyframe { time: 1.0, point: e },
            ])
            .unwrap()
        };
        let plan = MotionPlan::new(vec![via(a, b), via(b, a)]).unwrap();
        let j = plan.jittered(5, 1e-4).unwrap();
        assert_eq!(j.permutation(), plan.permutation());
        assert_eq!(j.trajectories()[0].end(), j.trajectories()[1].start());
        let moved = j.trajectories()[0].start().distance(&a);
        assert!(moved > 0.0 && moved <= 1e-4 + 1e-15);
        assert_eq!(plan.jittered(5, 1e-4).unwrap(), j);
    }

    #[test]
    fn motion_file_round_trip() {
        let plan = MotionPlan::new(vec![
            Trajectory::stationary(p(1.0, 0.0, 0.0)),
            Trajectory::stationary(p(0.0, 1.0, 0.0)),
        ])
        .unwrap();
        let json = serde_json::to_string(&plan.to_file()).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"trajectories":[[[0.0,[1.0,0.0,0.0]],[1.0,[1.0,0.0,0.0]]],[[0.0,[0.0,1.0,0.0]],[1.0,[0.0,1.0,0.0]]]]}"#
        );
        let back: MotionFile = serde_json::from_str(&json).unwrap();
        assert_eq!(MotionPlan::from_file(&back).unwrap(), plan);
    }
}
