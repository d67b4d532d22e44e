//! Tropical edge labelings, flips on labels, and executable checks of the
//! involution, far-commutativity and pentagon relations.

use std::collections::BTreeMap;

use crate::complex::{pentagon_boundary, pentagon_patch, ComplexError, Edge, FlipComplex, Patch, Quad, Triangulation};
use crate::tropical::{flip_label, QuadLabels, TropicalValue};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelingError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("no label for edges {}", edge_list(.0))]
    MissingEdgeLabel(Vec<Edge>),
    #[error("labels given for edges not in the complex: {}", edge_list(.0))]
    UnknownEdge(Vec<Edge>),
    #[error("flips of {0} and {1} are not far apart")]
    NotFar(Edge, Edge),
}

pub(crate) fn edge_list(edges: &[Edge]) -> String {
    edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

/// A complex with exactly one tropical label per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeled<C> {
    complex: C,
    labels: BTreeMap<Edge, TropicalValue>,
}

pub type LabeledTriangulation = Labeled<Triangulation>;
pub type LabeledPatch = Labeled<Patch>;

/// Labels listed in canonical (lexicographic) edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelVector(pub Vec<TropicalValue>);

impl<C: FlipComplex> Labeled<C> {
    pub fn new(complex: C, labels: BTreeMap<Edge, TropicalValue>) -> Result<Self, LabelingError> {
        let edges = complex.edges();
        let missing: Vec<Edge> = edges.iter().filter(|e| !labels.contains_key(e)).copied().collect();
        if !missing.is_empty() {
            return Err(LabelingError::MissingEdgeLabel(missing));
        }
        let unknown: Vec<Edge> = labels.keys().filter(|e| !complex.has_edge(**e)).copied().collect();
        if !unknown.is_empty() {
            return Err(LabelingError::UnknownEdge(unknown));
        }
        Ok(Labeled { complex, labels })
    }

    /// Every edge gets `value`.
    pub fn constant(complex: C, value: TropicalValue) -> Self {
        let labels = complex.edges().into_iter().map(|e| (e, value.clone())).collect();
        Labeled { complex, labels }
    }

    /// Labels taken from `values` in canonical edge order.
    pub fn from_vector(complex: C, values: Vec<TropicalValue>) -> Result<Self, LabelingError> {
        let edges = complex.edges();
        if values.len() < edges.len() {
            return Err(LabelingError::MissingEdgeLabel(edges[values.len()..].to_vec()));
        }
        let labels = edges.into_iter().zip(values).collect();
        Ok(Labeled { complex, labels })
    }

    pub fn complex(&self) -> &C {
        &self.complex
    }

    pub fn labels(&self) -> &BTreeMap<Edge, TropicalValue> {
        &self.labels
    }

    pub fn label(&self, e: Edge) -> Option<&TropicalValue> {
        self.labels.get(&e)
    }

    pub fn label_vector(&self) -> LabelVector {
        LabelVector(self.labels.values().cloned().collect())
    }

    /// The quad around `e` and its labels, `a..d` following the quad boundary.
    pub fn quad_labels(&self, e: Edge) -> Result<(Quad, QuadLabels), LabelingError> {
        let quad = self.complex.edge_quad(e)?;
        let get = |e: Edge| {
            self.labels
                .get(&e)
                .cloned()
                .ok_or_else(|| LabelingError::MissingEdgeLabel(vec![e]))
        };
        let [a, b, c, d] = quad.boundary;
        let labels = QuadLabels {
            a: get(a)?,
            b: get(b)?,
            c: get(c)?,
            d: get(d)?,
            x: get(e)?,
        };
        Ok((quad, labels))
    }

    /// Flip `e`, labeling the new diagonal with `rule` applied to the quad.
    pub fn flip_with(
        &self,
        e: Edge,
        rule: impl Fn(&QuadLabels) -> TropicalValue,
    ) -> Result<(Self, Edge), LabelingError> {
        let (_, q) = self.quad_labels(e)?;
        let (complex, created) = self.complex.apply_flip(e)?;
        let mut labels = self.labels.clone();
        labels.remove(&e);
        labels.insert(created, rule(&q));
        Ok((Labeled { complex, labels }, created))
    }

    /// Flip `e` and relabel its replacement by the tropical Ptolemy rule.
    pub fn flip(&self, e: Edge) -> Result<(Self, Edge), LabelingError> {
        self.flip_with(e, flip_label)
    }
}

pub fn labeled_flip<C: FlipComplex>(lt: &Labeled<C>, e: Edge) -> Result<Labeled<C>, LabelingError> {
    lt.flip(e).map(|(next, _)| next)
}

pub fn check_involution<C: FlipComplex>(lt: &Labeled<C>, e: Edge) -> Result<bool, LabelingError> {
    check_involution_with(lt, e, flip_label)
}

/// Involution check under an arbitrary update rule.
pub fn check_involution_with<C: FlipComplex>(
    lt: &Labeled<C>,
    e: Edge,
    rule: impl Fn(&QuadLabels) -> TropicalValue,
) -> Result<bool, LabelingError> {
    let (once, created) = lt.flip_with(e, &rule)?;
    let (twice, _) = once.flip_with(created, &rule)?;
    Ok(&twice == lt)
}

pub fn check_far_commutativity<C: FlipComplex>(lt: &Labeled<C>, e1: Edge, e2: Edge) -> Result<bool, LabelingError> {
    if !lt.complex.are_far(e1, e2)? {
        return Err(LabelingError::NotFar(e1, e2));
    }
    let (a, _) = lt.flip(e1)?;
    let (ab, _) = a.flip(e2)?;
    let (b, _) = lt.flip(e2)?;
    let (ba, _) = b.flip(e1)?;
    Ok(ab == ba)
}

/// The canonical pentagon patch with boundary labels `a..e` on
/// `1-2, 2-3, 3-4, 4-5, 5-1` and diagonal labels on `1-3, 1-4`.
pub fn labeled_pentagon(boundary: &[TropicalValue; 5], diagonals: &[TropicalValue; 2]) -> LabeledPatch {
    let mut labels: BTreeMap<Edge, TropicalValue> =
        pentagon_boundary().into_iter().zip(boundary.iter().cloned()).collect();
    labels.insert(Edge::new(1, 3), diagonals[0].clone());
    labels.insert(Edge::new(1, 4), diagonals[1].clone());
    Labeled {
        complex: pentagon_patch(),
        labels,
    }
}

/// Five flips around the pentagon's flip graph, starting with `first` and
/// then always flipping the diagonal that was not just created. Returns the
/// six labeled patches visited.
pub fn pentagon_cycle(start: &LabeledPatch, first: Edge) -> Result<Vec<LabeledPatch>, LabelingError> {
    let mut states = vec![start.clone()];
    let mut target = first;
    for _ in 0..5 {
        let (next, created) = states.last().unwrap().flip(target)?;
        target = next
            .complex
            .diagonals()
            .into_iter()
            .find(|d| *d != created)
            .expect("a pentagon has two diagonals");
        states.push(next);
    }
    Ok(states)
}

/// Whether the five-flip cycle on the labeled canonical pentagon returns
/// the initial labeled patch exactly.
pub fn check_pentagon(boundary: &[TropicalValue; 5], diagonals: &[TropicalValue; 2]) -> bool {
    let start = labeled_pentagon(boundary, diagonals);
    let states = pentagon_cycle(&start, Edge::new(1, 3)).expect("canonical pentagon is flippable");
    states[5] == start
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{triangular_bipyramid, validate};

    fn tv(v: i64) -> TropicalValue {
        TropicalValue::from_integer(v)
    }

    fn labeled_bipyramid(values: [i64; 9]) -> LabeledTriangulation {
        Labeled::from_vector(triangular_bipyramid(), values.map(tv).to_vec()).unwrap()
    }

    #[test]
    fn rejects_incomplete_or_foreign_labels() {
        let t = triangular_bipyramid();
        let mut labels: BTreeMap<Edge, TropicalValue> = t.edges().into_iter().map(|e| (e, tv(1))).collect();
        labels.remove(&Edge::new(1, 2));
        assert_eq!(
            Labeled::new(t.clone(), labels.clone()),
            Err(LabelingError::MissingEdgeLabel(vec![Edge::new(1, 2)]))
        );
        labels.insert(Edge::new(1, 2), tv(0));
        labels.insert(Edge::new(4, 5), tv(0));
        assert_eq!(
            Labeled::new(t, labels),
            Err(LabelingError::UnknownEdge(vec![Edge::new(4, 5)]))
        );
    }

    #[test]
    fn all_zero_flip() {
        let lt = Labeled::constant(triangular_bipyramid(), tv(0));
        let next = labeled_flip(&lt, Edge::new(1, 2)).unwrap();
        assert_eq!(next.label(Edge::new(4, 5)), Some(&tv(0)));
        assert!(validate(next.complex()).is_empty());
    }

    #[test]
    fn embedded_quad_flip() {
        // Quad of 1-2 in the bipyramid: boundary 1-5, 5-2, 2-4, 4-1.
        let t = triangular_bipyramid();
        let q = t.edge_quad(Edge::new(1, 2)).unwrap();
        assert_eq!(
            q.boundary,
            [Edge::new(1, 5), Edge::new(2, 5), Edge::new(2, 4), Edge::new(1, 4)]
        );
        let mut labels: BTreeMap<Edge, TropicalValue> = t.edges().into_iter().map(|e| (e, tv(-9))).collect();
        for (e, v) in q.boundary.iter().zip([2, 0, 3, 1]) {
            labels.insert(*e, tv(v));
        }
        labels.insert(Edge::new(1, 2), tv(1));
        let lt = Labeled::new(t, labels).unwrap();
        let next = labeled_flip(&lt, Edge::new(1, 2)).unwrap();
        assert_eq!(next.label(Edge::new(4, 5)), Some(&tv(4)));
        let unchanged = lt.labels().iter().filter(|(e, v)| next.label(**e) == Some(*v)).count();
        assert_eq!(unchanged, 8);
        assert!(check_involution(&lt, Edge::new(1, 2)).unwrap());
        assert_eq!(labeled_flip(&next, Edge::new(4, 5)).unwrap(), lt);
    }

    #[test]
    fn involution_with_rationals() {
        let t = triangular_bipyramid();
        let values = (1..=9).map(|k| TropicalValue::from_ratio(1, k + 1)).collect();
        let lt = Labeled::from_vector(t, values).unwrap();
        for e in lt.complex().edges() {
            if lt.complex().edge_quad(e).is_ok() && lt.flip(e).is_ok() {
                assert!(check_involution(&lt, e).unwrap());
            }
        }
    }

    /// The product form of the Ptolemy relation read as an assignment: the new diagonal gets
    /// `max(a, c) + max(b, d)`. It is not an involution.
    fn literal_rule(q: &QuadLabels) -> TropicalValue {
        q.a.oplus(&q.c).otimes(&q.b.oplus(&q.d))
    }

    #[test]
    fn literal_rule_is_not_an_involution() {
        let mut counterexample = None;
        'search: for u in -2..=2 {
            for v in -2..=2 {
                for w in -2..=2 {
                    let lt = labeled_bipyramid([u, v, w, 0, 1, 0, 2, 0, 0]);
                    if !check_involution_with(&lt, Edge::new(1, 2), literal_rule).unwrap() {
                        counterexample = Some((u, v, w));
                        break 'search;
                    }
                }
            }
        }
        assert!(counterexample.is_some());
    }

    #[test]
    fn far_commutativity_needs_far_edges() {
        let lt = Labeled::constant(triangular_bipyramid(), tv(0));
        assert_eq!(
            check_far_commutativity(&lt, Edge::new(1, 2), Edge::new(2, 3)),
            Err(LabelingError::NotFar(Edge::new(1, 2), Edge::new(2, 3)))
        );
    }

    #[test]
    fn flip_changes_exactly_one_label() {
        let lt = labeled_bipyramid([3, -1, 4, 1, -5, 9, 2, -6, 5]);
        let next = labeled_flip(&lt, Edge::new(2, 3)).unwrap();
        let common = lt.labels().iter().filter(|(e, v)| next.label(**e) == Some(*v)).count();
        assert_eq!(common, lt.labels().len() - 1);
        assert_eq!(next.labels().len(), lt.labels().len());
    }

    #[test]
    fn pentagon_zero_labels() {
        assert!(check_pentagon(&[0, 0, 0, 0, 0].map(tv), &[0, 0].map(tv)));
    }

    /// Independent replay of the canonical five-flip walk with plain integer
    /// arithmetic: a..e on 12,23,34,45,51, x on 13, y on 14.
    fn walk_by_hand(a: i64, b: i64, c: i64, d: i64, e: i64, x: i64, y: i64) -> [i64; 5] {
        let f24 = (a + c).max(b + y) - x;
        let f25 = (a + d).max(f24 + e) - y;
        let f35 = (b + d).max(c + f25) - f24;
        let f13 = (a + f35).max(b + e) - f25;
        let f14 = (f13 + d).max(c + e) - f35;
        [f24, f25, f35, f13, f14]
    }

    #[test]
    fn pentagon_walk_matches_hand_arithmetic() {
        let (a, b, c, d, e, x, y) = (1, 2, 3, 4, 5, 6, 2);
        let start = labeled_pentagon(&[a, b, c, d, e].map(tv), &[x, y].map(tv));
        let states = pentagon_cycle(&start, Edge::new(1, 3)).unwrap();
        let hand = walk_by_hand(a, b, c, d, e, x, y);
        let created = [
            Edge::new(2, 4),
            Edge::new(2, 5),
            Edge::new(3, 5),
            Edge::new(1, 3),
            Edge::new(1, 4),
        ];
        for k in 0..5 {
            assert_eq!(states[k + 1].label(created[k]), Some(&tv(hand[k])));
        }
        assert_eq!(hand[3], x);
        assert_eq!(hand[4], y);
        assert_eq!(states[5], start);
    }

    #[test]
    fn pentagon_random_sweep_closes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let v: Vec<i64> = (0..7).map(|_| rng.random_range(-10..=10)).collect();
            let boundary = [v[0], v[1], v[2], v[3], v[4]].map(tv);
            let diagonals = [v[5], v[6]].map(tv);
            assert!(check_pentagon(&boundary, &diagonals));
            let hand = walk_by_hand(v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
            assert_eq!((hand[3], hand[4]), (v[5], v[6]));
        }
    }
}
