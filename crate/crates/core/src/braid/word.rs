use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{midpoint_axis, Keyframe, MotionError, MotionPlan, Trajectory};
use crate::sphere::{angle_between, rotate, SpherePoint};

/// One letter `σ_i^{±1}` of a braid word; `index` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub index: usize,
    pub inverse: bool,
}

impl Generator {
    pub fn sign(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.index)?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub n: usize,
    pub letters: Vec<Generator>,
}

impl BraidWord {
    pub fn identity(n: usize) -> Self {
        BraidWord { n, letters: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `permutation[i]` is the position strand `i` occupies after the word;
    /// `σ_i` exchanges positions `i - 1` and `i` (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.n).collect();
        for g in &self.letters {
            at.swap(g.index - 1, g.index);
        }
        let mut perm = vec![0; self.n];
        for (slot, &strand) in at.iter().enumerate() {
            perm[strand] = slot;
        }
        perm
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Parses `letter*` with `letter := "s" INT ("^-1")?`, letters separated by
/// optional whitespace. Indices must lie in `1..n`.
pub fn parse_braid_word(text: &str, n: usize) -> Result<BraidWord, MotionError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut letters = Vec::new();
    let err = |position: usize, message: &str| MotionError::Parse {
        position,
        message: message.to_string(),
    };
    while pos < bytes.len() {
        if bytes[pos].is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if bytes[pos] != b's' {
            return Err(err(pos, "expected 's'"));
        }
        pos += 1;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(err(pos, "expected generator index"));
        }
        let index: usize = text[start..pos]
            .parse()
            .map_err(|_| err(start, "generator index too large"))?;
        let mut inverse = false;
        if bytes[pos..].starts_with(b"^") {
            if bytes[pos..].starts_with(b"^-1") {
                inverse = true;
                pos += 3;
            } else {
                return Err(err(pos, "expected '^-1'"));
            }
        }
        if index == 0 || index >= n {
            return Err(MotionError::IndexOutOfRange {
                index,
                max: n.saturating_sub(1),
                n,
            });
        }
        letters.push(Generator { index, inverse });
    }
    Ok(BraidWord { n, letters })
}

/// Placement of base points and sampling of generator swaps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayoutParams {
    /// Latitude of the base circle, in degrees.
    pub latitude_deg: f64,
    /// Latitude jitter amplitude as a fraction of the base spacing.
    pub latitude_jitter: f64,
    /// Longitude jitter amplitude as a fraction of the longitude step.
    pub longitude_jitter: f64,
    /// Keyframes per letter along the half-turn.
    pub samples_per_letter: usize,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            latitude_deg: 45.0,
            latitude_jitter: 0.12,
            longitude_jitter: 0.1,
            samples_per_letter: 24,
            seed: 0,
        }
    }
}

impl LayoutParams {
    pub fn with_seed(seed: u64) -> Self {
        LayoutParams {
            seed,
            ..Self::default()
        }
    }
}

/// Base points near a circle of latitude, equally spaced in longitude up to
/// a seeded jitter that breaks the cocircularity of the exact circle.
fn base_points(n: usize, layout: &LayoutParams) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(layout.seed);
    let lat = layout.latitude_deg.to_radians();
    let step = 2.0 * PI / n as f64;
    let spacing = {
        let a = SpherePoint::from_lat_lon(lat, 0.0);
        let b = SpherePoint::from_lat_lon(lat, step);
        a.angle_to(&b)
    };
    (0..n)
        .map(|k| {
            let dlat = layout.latitude_jitter * spacing * rng.random_range(-1.0..1.0);
            let dlon = layout.longitude_jitter * step * rng.random_range(-1.0..1.0);
            SpherePoint::from_lat_lon(lat + dlat, k as f64 * step + dlon)
        })
        .collect()
}

/// Realizes a braid word as a looped motion. Strand `i` starts at base slot
/// `i`. Letter `σ_i^{±1}` occupies its own time slot, during which the points
/// in slots `i - 1` and `i` turn by `±π` about their spherical midpoint
/// (counter-clockwise seen from outside for `+`); all other points rest.
pub fn word_to_motion(word: &BraidWord, layout: &LayoutParams) -> Result<MotionPlan, MotionError> {
    let n = word.n;
    if n < 4 {
        return Err(MotionError::Layout(format!("need at least 4 strands, got {n}")));
    }
    if layout.samples_per_letter < 3 {
        return Err(MotionError::Layout("need at least 3 samples per letter".into()));
    }
    if layout.latitude_deg.is_nan() || layout.latitude_deg.abs() >= 89.0 {
        return Err(MotionError::Layout(format!(
            "latitude {} too close to a pole",
            layout.latitude_deg
        )));
    }
    let base = base_points(n, layout);
    for i in 0..n {
        for j in i + 1..n {
            if base[i].angle_to(&base[j]) < 1e-6 {
                return Err(MotionError::Layout(format!("base points {i} and {j} coincide")));
            }
        }
    }
    // Each swap stays inside the cap centered at the pair midpoint whose
    // radius is half the pair distance; no other base point may enter it.
    for g in &word.letters {
        let (a, b) = (g.index - 1, g.index);
        let axis = midpoint_axis(base[a].coords(), base[b].coords());
        let radius = angle_between(axis, base[a].coords());
        for (c, p) in base.iter().enumerate() {
            if c != a && c != b && angle_between(axis, p.coords()) <= radius * 1.05 {
                return Err(MotionError::Layout(format!(
                    "swap cap of slots {a}, {b} contains base point {c}"
                )));
            }
        }
    }

    let k = layout.samples_per_letter;
    let total = word.letters.len() * k;
    let time = |idx: usize| idx as f64 / total as f64;
    let mut slot_of: Vec<usize> = (0..n).collect();
    let mut strand_at: Vec<usize> = (0..n).collect();
    let mut frames: Vec<Vec<Keyframe>> = (0..n)
        .map(|i| {
            vec![Keyframe {
                time: 0.0,
                point: base[i],
            }]
        })
        .collect();
    for (letter, g) in word.letters.iter().enumerate() {
        let (a, b) = (g.index - 1, g.index);
        let axis = midpoint_axis(base[a].coords(), base[b].coords());
        let (sa, sb) = (strand_at[a], strand_at[b]);
        for j in 1..=k {
            let t = time(letter * k + j);
            let angle = g.sign() as f64 * PI * j as f64 / k as f64;
            for (strand, frame) in frames.iter_mut().enumerate() {
                let point = if j == k && strand == sa {
                    base[b]
                } else if j == k && strand == sb {
                    base[a]
                } else if strand == sa {
                    SpherePoint::from_unit(rotate(base[a].coords(), axis, angle))
                } else if strand == sb {
                    SpherePoint::from_unit(rotate(base[b].coords(), axis, angle))
                } else {
                    base[slot_of[strand]]
                };
                frame.push(Keyframe { time: t, point });
            }
        }
        strand_at.swap(a, b);
        slot_of[sa] = b;
        slot_of[sb] = a;
    }
    let trajectories = frames
        .into_iter()
        .enumerate()
        .map(|(index, mut kfs)| {
            if kfs.len() == 1 {
                let p = kfs[0].point;
                kfs.push(Keyframe { time: 1.0, point: p });
            }
            Trajectory::new(kfs).map_err(|reason| MotionError::InvalidTrajectory { index, reason })
        })
        .collect::<Result<Vec<_>, _>>()?;
    MotionPlan::new(trajectories)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_words() {
        let w = parse_braid_word("s1 s2^-1 s1", 3).unwrap();
        assert_eq!(
            w.letters,
            vec![
                Generator {
                    index: 1,
                    inverse: false
                },
                Generator {
                    index: 2,
                    inverse: true
                },
                Generator {
                    index: 1,
                    inverse: false
                },
            ]
        );
        assert_eq!(w.to_string(), "s1 s2^-1 s1");
        assert!(parse_braid_word("", 5).unwrap().is_empty());
        assert!(parse_braid_word("  \n", 5).unwrap().is_empty());
        assert_eq!(parse_braid_word("s1s2", 5).unwrap().letters.len(), 2);
    }

    #[test]
    fn rejects_bad_words() {
        assert!(matches!(
            parse_braid_word("s7", 5),
            Err(MotionError::IndexOutOfRange { index: 7, .. })
        ));
        assert!(matches!(
            parse_braid_word("s0", 5),
            Err(MotionError::IndexOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            parse_braid_word("s1 t2", 5),
            Err(MotionError::Parse { position: 3, .. })
        ));
        assert!(matches!(
            parse_braid_word("s1^2", 5),
            Err(MotionError::Parse { position: 2, .. })
        ));
        assert!(matches!(
            parse_braid_word("s", 5),
            Err(MotionError::Parse { position: 1, .. })
        ));
    }

    #[test]
    fn word_permutations() {
        let w = parse_braid_word("s1", 5).unwrap();
        assert_eq!(w.permutation(), vec![1, 0, 2, 3, 4]);
        let w = parse_braid_word("s1 s2", 5).unwrap();
        // strand 0 ends in slot 2, strand 1 in slot 0, strand 2 in slot 1
        assert_eq!(w.permutation(), vec![2, 0, 1, 3, 4]);
    }

    #[test]
    fn empty_word_is_constant() {
        let plan = word_to_motion(&BraidWord::identity(5), &LayoutParams::default()).unwrap();
        assert!(plan.is_pure());
        for tr in plan.trajectories() {
            assert_eq!(tr.keyframes().len(), 2);
            assert_eq!(tr.start(), tr.end());
        }
        assert_eq!(plan.eval(0.3), plan.eval(0.0));
    }

    #[test]
    fn plan_permutation_matches_word() {
        for text in ["s1", "s1 s1", "s1 s2", "s2^-1 s3 s1 s4^-1"] {
            let w = parse_braid_word(text, 5).unwrap();
            let plan = word_to_motion(&w, &LayoutParams::with_seed(3)).unwrap();
            assert_eq!(plan.permutation(), w.permutation().as_slice(), "{text}");
        }
        let plan = word_to_motion(&parse_braid_word("s1 s1", 5).unwrap(), &LayoutParams::default()).unwrap();
        assert!(plan.is_pure());
        assert_eq!(plan.eval(1.0), plan.eval(0.0));
    }

    #[test]
    fn swap_stays_on_its_cap_boundary() {
        let w = parse_braid_word("s2", 6).unwrap();
        let plan = word_to_motion(&w, &LayoutParams::with_seed(9)).unwrap();
        let start = plan.eval(0.0);
        let axis = midpoint_axis(start.points[1].coords(), start.points[2].coords());
        let radius = angle_between(axis, start.points[1].coords());
        for k in 0..=40 {
            let c = plan.eval(k as f64 / 40.0);
            let d = angle_between(axis, c.points[1].coords());
            assert!(d <= radius + 1e-12 && d > 0.99 * radius);
            assert_eq!(c.points[0], start.points[0]);
        }
    }

    #[test]
    fn large_n_layout_succeeds() {
        let w = parse_braid_word("s1 s24 s49^-1", 50).unwrap();
        assert!(word_to_motion(&w, &LayoutParams::default()).is_ok());
    }

    #[test]
    fn layout_errors() {
        let w = BraidWord::identity(3);
        assert!(matches!(
            word_to_motion(&w, &LayoutParams::default()),
            Err(MotionError::Layout(_))
        ));
        let w = parse_braid_word("s1", 6).unwrap();
        let crowded = LayoutParams {
            longitude_jitter: 0.0,
            latitude_jitter: 3.0,
            seed: 1,
            ..LayoutParams::default()
        };
        // A large latitude jitter pushes neighbours into the swap cap for some seed.
        let failures = (0..50)
            .filter(|&s| {
                matches!(
                    word_to_motion(&w, &LayoutParams { seed: s, ..crowded }),
                    Err(MotionError::Layout(_))
                )
            })
            .count();
        assert!(failures > 0);
    }
}
