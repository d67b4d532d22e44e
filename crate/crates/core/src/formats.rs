//! Interchange formats: JSON documents and tab-separated tables.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::braid::FlipSequence;
use crate::complex::{Edge, Face, FlipComplex, Triangulation};
use crate::invariant::InvariantVector;

/// `{"n": .., "edge_count": .., "face_count": .., "faces": [[a, b, c], ..], "edges": ["u-v", ..]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub n: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub faces: Vec<Face>,
    pub edges: Vec<Edge>,
}

impl From<&Triangulation> for TriangulationFile {
    fn from(t: &Triangulation) -> Self {
        TriangulationFile {
            n: t.n(),
            edge_count: t.edge_count(),
            face_count: t.face_count(),
            faces: t.faces().iter().copied().collect(),
            edges: t.edges(),
        }
    }
}

pub fn triangulation_tsv(t: &Triangulation) -> String {
    let mut out = String::from("a\tb\tc\n");
    for f in t.faces() {
        let [a, b, c] = f.vertices();
        writeln!(out, "{a}\t{b}\t{c}").unwrap();
    }
    out
}

pub fn flip_sequence_tsv(seq: &FlipSequence) -> String {
    let mut out = String::from("index\ttime\tflipped\tcreated\n");
    for (k, e) in seq.events.iter().enumerate() {
        writeln!(out, "{}\t{}\t{}\t{}", k + 1, e.time, e.flipped, e.created).unwrap();
    }
    out
}

pub fn invariant_tsv(v: &InvariantVector) -> String {
    let mut out = String::from("edge\tinitial\tfinal\n");
    for (e, a, b) in v.rows() {
        writeln!(out, "{e}\t{a}\t{b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tetrahedron;
    use crate::tropical::TropicalValue;

    #[test]
    fn triangulation_round_trip() {
        let t = tetrahedron();
        let file = TriangulationFile::from(&t);
        let json = serde_json::to_string(&file).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"edge_count":6,"face_count":4,"faces":[[1,2,4],[1,3,2],[1,4,3],[2,3,4]],"edges":["1-2","1-3","1-4","2-3","2-4","3-4"]}"#
        );
        let back: TriangulationFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, file);
        assert_eq!(Triangulation::new(back.n, back.faces).unwrap(), t);
    }

    #[test]
    fn tables() {
        let t = tetrahedron();
        let tsv = triangulation_tsv(&t);
        assert_eq!(tsv.lines().count(), 5);
        assert_eq!(tsv.lines().nth(1), Some("1\t2\t4"));
        let v = InvariantVector {
            n: 4,
            edges: vec![Edge::new(0, 1)],
            labels: vec![TropicalValue::from_ratio(3, 2)],
            initial_labels: vec![TropicalValue::from_integer(1)],
        };
        assert_eq!(invariant_tsv(&v), "edge\tinitial\tfinal\n0-1\t1\t3/2\n");
    }
}
