use std::collections::BTreeSet;

use serde::Serialize;

use super::{FlipEvent, FlipSequence};
use crate::complex::{Edge, VertexId};

/// A flip as an edge replacement, without its time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Move {
    pub flipped: Edge,
    pub created: Edge,
}

impl From<&FlipEvent> for Move {
    fn from(e: &FlipEvent) -> Self {
        Move {
            flipped: e.flipped,
            created: e.created,
        }
    }
}

fn triple(a: VertexId, b: VertexId, c: VertexId) -> [VertexId; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

impl Move {
    pub fn inverse(&self) -> Move {
        Move {
            flipped: self.created,
            created: self.flipped,
        }
    }

    /// Vertex sets of the two faces the flip destroys.
    pub fn removed_faces(&self) -> [[VertexId; 3]; 2] {
        let (p, r) = (self.flipped.lo(), self.flipped.hi());
        let (q, s) = (self.created.lo(), self.created.hi());
        [triple(p, r, q), triple(p, r, s)]
    }

    /// Vertex sets of the two faces the flip creates.
    pub fn created_faces(&self) -> [[VertexId; 3]; 2] {
        self.inverse().removed_faces()
    }

    pub fn vertices(&self) -> [VertexId; 4] {
        [
            self.flipped.lo(),
            self.flipped.hi(),
            self.created.lo(),
            self.created.hi(),
        ]
    }

    /// Whether `self`, applied just before `earlier`, would act exactly as
    /// it does just after it.
    fn commutes_past(&self, earlier: &Move) -> bool {
        let disjoint = |a: [[VertexId; 3]; 2], b: [[VertexId; 3]; 2]| a.iter().all(|f| !b.contains(f));
        disjoint(self.removed_faces(), earlier.created_faces())
            && disjoint(self.created_faces(), earlier.removed_faces())
            && self.created != earlier.flipped
            && self.flipped != earlier.created
    }

    /// Adjacent moves acting on quads that share no face.
    fn is_far_from(&self, other: &Move) -> bool {
        let faces =
            |m: &Move| -> Vec<[VertexId; 3]> { m.removed_faces().into_iter().chain(m.created_faces()).collect() };
        let mine = faces(self);
        self.created != other.created
            && self.created != other.flipped
            && self.flipped != other.created
            && faces(other).iter().all(|f| !mine.contains(f))
    }
}

/// Five moves inside one five-vertex set flipping five distinct edges and
/// recreating exactly them: a closed walk around the pentagon flip graph.
fn is_pentagon_cycle(moves: &[Move]) -> bool {
    if moves.len() != 5 {
        return false;
    }
    let verts: BTreeSet<VertexId> = moves.iter().flat_map(|m| m.vertices()).collect();
    let flipped: BTreeSet<Edge> = moves.iter().map(|m| m.flipped).collect();
    let created: BTreeSet<Edge> = moves.iter().map(|m| m.created).collect();
    verts.len() == 5 && flipped.len() == 5 && flipped == created
}

/// Adjacent relations found in a flip sequence and the length left after
/// cancelling them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplifyReport {
    pub original_length: usize,
    /// `k` such that event `k + 1` undoes event `k`.
    pub involution_pairs: Vec<usize>,
    /// `k` such that events `k` and `k + 1` act on quads sharing no face.
    pub far_pairs: Vec<usize>,
    /// `k` such that events `k..k + 5` form a pentagon cycle.
    pub pentagons: Vec<usize>,
    /// What remains after repeatedly cancelling inverse pairs (across
    /// commuting moves) and pentagon cycles.
    pub reduced: Vec<Move>,
}

impl SimplifyReport {
    pub fn reduced_length(&self) -> usize {
        self.reduced.len()
    }
}

pub fn inverse_sequence(moves: &[Move]) -> Vec<Move> {
    moves.iter().rev().map(Move::inverse).collect()
}

fn cancel_inverse_pair(moves: &mut Vec<Move>) -> bool {
    for i in 0..moves.len() {
        for j in i + 1..moves.len() {
            if moves[j] == moves[i].inverse() {
                moves.remove(j);
                moves.remove(i);
                return true;
            }
            if !moves[j].commutes_past(&moves[i]) {
                break;
            }
        }
    }
    false
}

fn cancel_pentagon(moves: &mut Vec<Move>) -> bool {
    if moves.len() < 5 {
        return false;
    }
    for i in 0..=moves.len() - 5 {
        if is_pentagon_cycle(&moves[i..i + 5]) {
            moves.drain(i..i + 5);
            return true;
        }
    }
    false
}

/// Cancels inverse pairs separated only by moves commuting with the first,
/// and closed pentagon cycles, until neither applies.
pub fn reduce(moves: &[Move]) -> Vec<Move> {
    let mut moves = moves.to_vec();
    while cancel_inverse_pair(&mut moves) || cancel_pentagon(&mut moves) {}
    moves
}

/// Sufficient test that two flip sequences from the same triangulation are
/// related by involution, far-commutativity and pentagon moves:
/// `a` followed by the reverse of `b` reduces to nothing.
pub fn sequences_equivalent(a: &[Move], b: &[Move]) -> bool {
    let mut word = a.to_vec();
    word.extend(inverse_sequence(b));
    reduce(&word).is_empty()
}

pub fn simplify_check(seq: &FlipSequence) -> SimplifyReport {
    let moves: Vec<Move> = seq.events.iter().map(Move::from).collect();
    let involution_pairs = (0..moves.len().saturating_sub(1))
        .filter(|&k| moves[k + 1] == moves[k].inverse())
        .collect();
    let far_pairs = (0..moves.len().saturating_sub(1))
        .filter(|&k| moves[k].is_far_from(&moves[k + 1]))
        .collect();
    let pentagons = (0..moves.len().saturating_sub(4))
        .filter(|&k| is_pentagon_cycle(&moves[k..k + 5]))
        .collect();
    SimplifyReport {
        original_length: moves.len(),
        involution_pairs,
        far_pairs,
        pentagons,
        reduced: reduce(&moves),
    }
}
