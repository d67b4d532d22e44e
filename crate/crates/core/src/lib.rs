//! Tropical Ptolemy invariants of spherical braids.
//!
//! Points moving on the 2-sphere induce a sequence of Delaunay flips. Each
//! flip updates one tropical (max-plus) edge label by the rule
//! `x' = max(a + c, b + d) - x`, and the labeling reached at the end of the
//! motion is the invariant.

pub mod braid;
pub mod complex;
pub mod formats;
pub mod invariant;
pub mod labeling;
pub mod sphere;
pub mod tropical;

pub use braid::{BraidWord, FlipEvent, FlipSequence, MotionPlan, TraceOptions, Trajectory};
pub use complex::{Edge, Face, FlipComplex, Patch, Quad, Triangulation, VertexId};
pub use invariant::{compare, compute_invariant, initial_labels, InvariantVector, LabelScheme};
pub use labeling::{LabelVector, Labeled, LabeledPatch, LabeledTriangulation};
pub use sphere::{Configuration, SpherePoint};
pub use tropical::{flip_label, QuadLabels, TropicalValue};
