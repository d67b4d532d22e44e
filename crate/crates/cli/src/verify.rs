//! Seeded property suites behind `tropbraid verify`.

use std::fmt;

use clap::ValueEnum;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropbraid::complex::{Edge, FlipComplex, Triangulation};
use tropbraid::labeling::{check_far_commutativity, check_pentagon, LabeledTriangulation};
use tropbraid::sphere::{coplanarity_det, delaunay, in_circumcircle, Configuration};
use tropbraid::{flip_label, QuadLabels, TropicalValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Involution,
    Far,
    Pentagon,
    Euler,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: usize,
    pub total: usize,
    /// Extra lines: coverage figures and counterexamples.
    pub notes: Vec<String>,
    /// Whether failures make the run fail. The pentagon sweep only reports.
    pub gating: bool,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        !self.gating || self.passed == self.total
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.suite.to_possible_value().unwrap();
        writeln!(f, "{}: {}/{} passed", name.get_name(), self.passed, self.total)?;
        for note in &self.notes {
            writeln!(f, "  {note}")?;
        }
        Ok(())
    }
}

pub const LABEL_RANGE: i64 = 100;

fn label(rng: &mut ChaCha8Rng) -> TropicalValue {
    TropicalValue::from_integer(rng.random_range(-LABEL_RANGE..=LABEL_RANGE))
}

fn random_labels(t: &Triangulation, rng: &mut ChaCha8Rng) -> LabeledTriangulation {
    let values = t.edges().iter().map(|_| label(rng)).collect();
    LabeledTriangulation::from_vector(t.clone(), values).expect("one value per edge")
}

/// A Delaunay triangulation of `n` random points, resampling the rare
/// configurations that are not in general position.
pub fn random_delaunay(n: usize, eps: f64, rng: &mut ChaCha8Rng) -> (Configuration, Triangulation) {
    loop {
        let c = Configuration::random(n, rng);
        if let Ok(t) = delaunay(&c, eps) {
            return (c, t);
        }
    }
}

pub fn far_pairs(t: &Triangulation) -> Vec<(Edge, Edge)> {
    let edges = t.edges();
    let mut out = Vec::new();
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            if t.are_far(a, b).unwrap_or(false) {
                out.push((a, b));
            }
        }
    }
    out
}

/// The pentagon update equations taken literally: `z, t, u, v, w` from
/// boundary labels `a..e` and diagonals `x, y`; closure asks for `(v, w) = (x, y)`.
pub fn literal_pentagon_closes(l: [i64; 7]) -> bool {
    let [a, b, c, d, e, x, y] = l;
    let z = (x + d - y).max(c + e - y);
    let t = (b + z - x).max(a + e - x);
    let u = (a + d - z).max(t + e - z);
    let v = (b + d - t).max(c + u - t);
    let w = (a + y - u).max(e + b - u);
    v == x && w == y
}

/// Empty-circumcircle test of every face against every other point, plus
/// an O(n^4) search confirming no other triple has an empty circumcircle.
pub fn oracle_holds(c: &Configuration, t: &Triangulation, eps: f64) -> Result<(), String> {
    let pts = &c.points;
    for f in t.faces() {
        let [i, j, k] = f.vertices();
        for (l, s) in pts.iter().enumerate() {
            if f.contains(l) {
                continue;
            }
            let det = coplanarity_det(&pts[i], &pts[j], &pts[k], s);
            match in_circumcircle([&pts[i], &pts[j], &pts[k]], s, eps) {
                Ok(-1) if det.abs() > eps => {}
                other => return Err(format!("face ({i}, {j}, {k}) vs point {l}: {other:?}, det {det:e}")),
            }
        }
    }
    let n = pts.len();
    let mut empty = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let signs: Vec<f64> = (0..n)
                    .filter(|&l| l != i && l != j && l != k)
                    .map(|l| coplanarity_det(&pts[i], &pts[j], &pts[k], &pts[l]).signum())
                    .collect();
                if signs.iter().all(|&s| s == signs[0]) {
                    empty += 1;
                }
            }
        }
    }
    if empty != t.face_count() {
        return Err(format!("{empty} empty-circle triples but {} faces", t.face_count()));
    }
    Ok(())
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64, eps: f64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut notes = Vec::new();
    let mut gating = true;
    match suite {
        Suite::Involution => {
            for _ in 0..trials {
                let q = QuadLabels {
                    a: label(&mut rng),
                    b: label(&mut rng),
                    c: label(&mut rng),
                    d: label(&mut rng),
                    x: label(&mut rng),
                };
                let once = flip_label(&q);
                let twice = flip_label(&q.with_diagonal(once));
                if twice == q.x {
                    passed += 1;
                } else if notes.len() < 3 {
                    notes.push(format!("counterexample: {q:?}"));
                }
            }
        }
        Suite::Far => {
            for _ in 0..trials {
                let n = rng.random_range(8..=20);
                let (t, pair) = loop {
                    let (_, t) = random_delaunay(n, eps, &mut rng);
                    if let Some(&pair) = far_pairs(&t).choose(&mut rng) {
                        break (t, pair);
                    }
                };
                let lt = random_labels(&t, &mut rng);
                match check_far_commutativity(&lt, pair.0, pair.1) {
                    Ok(true) => passed += 1,
                    other => {
                        if notes.len() < 3 {
                            notes.push(format!("n = {n}, edges {} and {}: {other:?}", pair.0, pair.1));
                        }
                    }
                }
            }
        }
        Suite::Pentagon => {
            gating = false;
            let mut literal = 0;
            for _ in 0..trials {
                let l: [i64; 7] = std::array::from_fn(|_| rng.random_range(-LABEL_RANGE..=LABEL_RANGE));
                let boundary = [l[0], l[1], l[2], l[3], l[4]].map(TropicalValue::from_integer);
                let diagonals = [l[5], l[6]].map(TropicalValue::from_integer);
                if check_pentagon(&boundary, &diagonals) {
                    passed += 1;
                } else if notes.len() < 3 {
                    notes.push(format!(
                        "counterexample: boundary {:?}, diagonals {:?}",
                        &l[..5],
                        &l[5..]
                    ));
                }
                if literal_pentagon_closes(l) {
                    literal += 1;
                }
            }
            notes.push(format!(
                "literal update equations close for {literal}/{trials} labelings"
            ));
        }
        Suite::Euler => {
            for _ in 0..trials {
                let n = rng.random_range(5..=40);
                let (_, t) = random_delaunay(n, eps, &mut rng);
                let (e, f) = (t.edge_count(), t.face_count());
                if e == 3 * n - 6 && f == 2 * n - 4 && n + f == e + 2 {
                    passed += 1;
                } else if notes.len() < 3 {
                    notes.push(format!("n = {n}: {e} edges, {f} faces"));
                }
            }
        }
        Suite::Oracle => {
            for _ in 0..trials {
                let n = rng.random_range(4..=20);
                let (c, t) = random_delaunay(n, eps, &mut rng);
                match oracle_holds(&c, &t, eps) {
                    Ok(()) => passed += 1,
                    Err(msg) => {
                        if notes.len() < 3 {
                            notes.push(format!("n = {n}: {msg}"));
                        }
                    }
                }
            }
        }
    }
    SuiteReport {
        suite,
        passed,
        total: trials,
        notes,
        gating,
    }
}
