use serde::{Serialize, Serializer};

use super::{MotionError, MotionPlan};
use crate::complex::{Edge, FlipComplex, Triangulation};
use crate::sphere::{
    coplanarity_sign, delaunay, hull_triangulation, GeneralPositionViolation, SphereError, DEFAULT_EPS_GEO,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    /// Tolerance for the general-position check at `t = 0` and `t = 1`.
    pub eps_geo: f64,
    /// Initial sampling step.
    pub dt_init: f64,
    /// Bisection stops once an interval is this short.
    pub dt_min: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            eps_geo: DEFAULT_EPS_GEO,
            dt_init: 1e-3,
            dt_min: 1e-12,
        }
    }
}

impl TraceOptions {
    pub fn validate(&self) -> Result<(), MotionError> {
        if self.eps_geo.is_nan() || self.eps_geo <= 0.0 {
            return Err(MotionError::InvalidOptions("eps must be positive".into()));
        }
        if !(self.dt_min > 0.0 && self.dt_init > 0.0) {
            return Err(MotionError::InvalidOptions("time steps must be positive".into()));
        }
        if self.dt_min >= self.dt_init || self.dt_init > 1.0 {
            return Err(MotionError::InvalidOptions("need dt_min < dt_init <= 1".into()));
        }
        Ok(())
    }
}

/// A Delaunay flip at a critical time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlipEvent {
    pub time: f64,
    pub flipped: Edge,
    pub created: Edge,
}

/// Events `t_1 < ... < t_l` and triangulations `T_1, ..., T_{l+1}`, where
/// `T_{k+1}` is `T_k` with `events[k].flipped` replaced by `events[k].created`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlipSequence {
    pub events: Vec<FlipEvent>,
    pub triangulations: Vec<Triangulation>,
}

impl FlipSequence {
    pub fn n(&self) -> usize {
        self.triangulations[0].n()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn initial(&self) -> &Triangulation {
        &self.triangulations[0]
    }

    pub fn last(&self) -> &Triangulation {
        self.triangulations.last().unwrap()
    }

    pub fn flipped_edges(&self) -> Vec<Edge> {
        self.events.iter().map(|e| e.flipped).collect()
    }
}

impl Serialize for FlipSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Export<'a> {
            n: usize,
            count: usize,
            events: &'a [FlipEvent],
        }
        Export {
            n: self.n(),
            count: self.events.len(),
            events: &self.events,
        }
        .serialize(serializer)
    }
}

struct Tracer<'a> {
    plan: &'a MotionPlan,
    opts: TraceOptions,
}

impl Tracer<'_> {
    /// Delaunay triangulation with exact predicates at an interior time.
    fn sample(&self, t: f64) -> Result<Triangulation, MotionError> {
        let config = self.plan.eval(t);
        hull_triangulation(&config, 0.0).map_err(|e| match e {
            SphereError::GeneralPositionViolation(v) => match v.first() {
                Some(GeneralPositionViolation::Coincident(i, j)) => MotionError::Collision { time: t, i: *i, j: *j },
                _ => MotionError::NonGenericMotion {
                    t0: t,
                    t1: t,
                    detail: format!(
                        "exactly degenerate configuration: {}",
                        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                    ),
                },
            },
            other => MotionError::Geometry { time: t, source: other },
        })
    }

    fn localize(
        &self,
        (a, ta): (f64, &Triangulation),
        (b, tb): (f64, &Triangulation),
        out: &mut Vec<(FlipEvent, Triangulation)>,
    ) -> Result<(), MotionError> {
        let m = a + 0.5 * (b - a);
        if b - a <= self.opts.dt_min || m <= a || m >= b {
            let event = self.single_flip(a, ta, b, tb)?;
            out.push((event, tb.clone()));
            return Ok(());
        }
        let tm = self.sample(m)?;
        if &tm != ta {
            self.localize((a, ta), (m, &tm), out)?;
        }
        if &tm != tb {
            self.localize((m, &tm), (b, tb), out)?;
        }
        Ok(())
    }

    /// Checks that `tb` is `ta` after one flip whose quadruple changes side.
    fn single_flip(&self, a: f64, ta: &Triangulation, b: f64, tb: &Triangulation) -> Result<FlipEvent, MotionError> {
        let (removed, added) = ta.edge_difference(tb);
        let describe = |detail: String| MotionError::NonGenericMotion { t0: a, t1: b, detail };
        if removed.len() != 1 || added.len() != 1 {
            return Err(describe(format!(
                "simultaneous events: edges {} replaced by {}",
                join(&removed),
                join(&added)
            )));
        }
        let (flipped, created) = (removed[0], added[0]);
        let quad = ta
            .edge_quad(flipped)
            .map_err(|e| describe(format!("cannot flip {flipped}: {e}")))?;
        let (after, made) = ta
            .apply_flip(flipped)
            .map_err(|e| describe(format!("cannot flip {flipped}: {e}")))?;
        if made != created || &after != tb {
            return Err(describe(format!("edge {flipped} -> {created} is not a single flip")));
        }
        let [p, s, r, q] = quad.corners;
        let sign_at = |t: f64| {
            let c = self.plan.eval(t);
            coplanarity_sign(&c.points[p], &c.points[r], &c.points[q], &c.points[s], 0.0)
        };
        let (sa, sb) = (sign_at(a), sign_at(b));
        if sa == 0 || sb == 0 || sa == sb {
            return Err(describe(format!(
                "quadruple ({p}, {s}, {r}, {q}) does not cross cocircularity"
            )));
        }
        Ok(FlipEvent {
            time: a + 0.5 * (b - a),
            flipped,
            created,
        })
    }
}

fn join(edges: &[Edge]) -> String {
    edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

/// Samples the plan every `dt_init`, recomputing the Delaunay triangulation,
/// and bisects each changed interval down to `dt_min` until every change is
/// a single flip whose four points pass through a common circle.
pub fn detect_flip_events(plan: &MotionPlan, opts: &TraceOptions) -> Result<FlipSequence, MotionError> {
    opts.validate()?;
    let endpoint =
        |t: f64| delaunay(&plan.eval(t), opts.eps_geo).map_err(|source| MotionError::Geometry { time: t, source });
    let first = endpoint(0.0)?;
    let last = endpoint(1.0)?;
    let tracer = Tracer { plan, opts: *opts };

    let steps = (1.0 / opts.dt_init - 1e-9).ceil().max(1.0) as usize;
    let mut found = Vec::new();
    let mut prev = (0.0, first.clone());
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let cur = if k == steps { last.clone() } else { tracer.sample(t)? };
        if cur != prev.1 {
            tracer.localize((prev.0, &prev.1), (t, &cur), &mut found)?;
        }
        prev = (t, cur);
    }

    let mut events = Vec::with_capacity(found.len());
    let mut triangulations = Vec::with_capacity(found.len() + 1);
    triangulations.push(first);
    for (event, t) in found {
        events.push(event);
        triangulations.push(t);
    }
    Ok(FlipSequence { events, triangulations })
}
