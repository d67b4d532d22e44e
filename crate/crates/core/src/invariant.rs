//! The braid invariant: an initial tropical labeling pushed through the flip
//! sequence of a looped motion, read off in canonical edge order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::braid::{detect_flip_events, FlipSequence, MotionError, MotionPlan, TraceOptions};
use crate::complex::{Edge, FlipComplex, Triangulation};
use crate::labeling::{LabeledTriangulation, LabelingError};
use crate::tropical::TropicalValue;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvariantError {
    #[error("cannot read labels from {path}: {reason}")]
    FileFormat { path: PathBuf, reason: String },
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Motion(#[from] MotionError),
    #[error("initial labeling does not match the triangulation at t = 0")]
    InitialMismatch,
    #[error("final triangulation does not return to the initial one under the strand permutation")]
    NotALoop,
    #[error("invariants are not comparable: {0}")]
    ShapeMismatch(String),
    #[error("invalid label range [{lo}, {hi}]")]
    InvalidRange { lo: i64, hi: i64 },
}

/// How to choose the initial labeling.
#[derive(Clone, Debug, PartialEq)]
pub enum LabelScheme {
    /// A JSON object mapping `"u-v"` to a label.
    File(PathBuf),
    /// Independent uniform integers in `lo..=hi`, drawn in canonical edge order.
    SeededRandom {
        seed: u64,
        lo: i64,
        hi: i64,
    },
    Constant(TropicalValue),
}

/// Parses a label map `{"u-v": "p/q" | int, ...}`.
pub fn parse_label_map(text: &str) -> Result<BTreeMap<Edge, TropicalValue>, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn label_map_json(labels: &LabeledTriangulation) -> String {
    serde_json::to_string_pretty(labels.labels()).expect("label maps serialize")
}

fn read_label_file(path: &Path) -> Result<BTreeMap<Edge, TropicalValue>, InvariantError> {
    let fail = |reason: String| InvariantError::FileFormat {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    parse_label_map(&text).map_err(fail)
}

pub fn initial_labels(t: &Triangulation, scheme: &LabelScheme) -> Result<LabeledTriangulation, InvariantError> {
    match scheme {
        LabelScheme::File(path) => {
            let map = read_label_file(path)?;
            Ok(LabeledTriangulation::new(t.clone(), map)?)
        }
        &LabelScheme::SeededRandom { seed, lo, hi } => {
            if lo > hi {
                return Err(InvariantError::InvalidRange { lo, hi });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values = t
                .edges()
                .iter()
                .map(|_| TropicalValue::from_integer(rng.random_range(lo..=hi)))
                .collect();
            Ok(LabeledTriangulation::from_vector(t.clone(), values)?)
        }
        LabelScheme::Constant(v) => Ok(LabeledTriangulation::constant(t.clone(), v.clone())),
    }
}

/// Final labels of a loop, in the canonical edge order of the initial
/// triangulation, together with the initial labels they came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantVector {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub labels: Vec<TropicalValue>,
    pub initial_labels: Vec<TropicalValue>,
}

impl InvariantVector {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `(edge, initial, final)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (&Edge, &TropicalValue, &TropicalValue)> {
        self.edges
            .iter()
            .zip(&self.initial_labels)
            .zip(&self.labels)
            .map(|((e, a), b)| (e, a, b))
    }
}

/// Applies the labeled flip of every event in order and renames the final
/// vertices by `permutation` (strand `i` ends where strand `permutation[i]`
/// started), so that edges line up with the initial triangulation.
pub fn invariant_from_sequence(
    seq: &FlipSequence,
    permutation: &[usize],
    labels: &LabeledTriangulation,
) -> Result<InvariantVector, InvariantError> {
    if labels.complex() != seq.initial() {
        return Err(InvariantError::InitialMismatch);
    }
    let mut current = labels.clone();
    for event in &seq.events {
        let (next, created) = current.flip(event.flipped)?;
        debug_assert_eq!(created, event.created);
        current = next;
    }
    let rename = |v: usize| permutation[v];
    let final_complex = current.complex().relabel(rename);
    if &final_complex != labels.complex() {
        return Err(InvariantError::NotALoop);
    }
    let renamed: BTreeMap<Edge, TropicalValue> = current
        .labels()
        .iter()
        .map(|(e, v)| (e.relabel(rename), v.clone()))
        .collect();
    Ok(InvariantVector {
        n: seq.n(),
        edges: renamed.keys().copied().collect(),
        labels: renamed.into_values().collect(),
        initial_labels: labels.labels().values().cloned().collect(),
    })
}

pub fn compute_invariant(
    plan: &MotionPlan,
    labels: &LabeledTriangulation,
    opts: &TraceOptions,
) -> Result<InvariantVector, InvariantError> {
    let seq = detect_flip_events(plan, opts)?;
    invariant_from_sequence(&seq, plan.permutation(), labels)
}

/// Exact equality of final labels. Invariants computed from different
/// initial data are not comparable.
pub fn compare(a: &InvariantVector, b: &InvariantVector) -> Result<bool, InvariantError> {
    if a.n != b.n {
        return Err(InvariantError::ShapeMismatch(format!("n = {} vs n = {}", a.n, b.n)));
    }
    if a.edges != b.edges || a.labels.len() != a.edges.len() || b.labels.len() != b.edges.len() {
        return Err(InvariantError::ShapeMismatch("different edge sets".into()));
    }
    if a.initial_labels != b.initial_labels {
        return Err(InvariantError::ShapeMismatch("different initial labelings".into()));
    }
    Ok(a.labels == b.labels)
}
