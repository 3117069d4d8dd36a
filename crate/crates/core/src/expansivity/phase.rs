//! Uniform access to point and solenoid dynamics, and chain iteration.

use alloc::vec::Vec;
use core::cell::Cell;

use crate::metric::{diameter_of, solenoid_distance, ContinuumApprox, Metric, Point, SolenoidPoint};
use crate::systems::{Direction, DynSystem};
use crate::{Error, Result};

/// Largest chain the refinement may build.
pub const MAX_CHAIN_POINTS: usize = 1_000_000;

/// Subdivision depth after which a gap is accepted as is.
const MAX_SPLIT_DEPTH: u32 = 48;

pub(crate) trait Phase {
    type Pt: Clone;
    fn step(&self, p: &Self::Pt, dir: Direction) -> Result<Self::Pt>;
    fn dist(&self, a: &Self::Pt, b: &Self::Pt) -> f64;
    fn mid(&self, a: &Self::Pt, b: &Self::Pt) -> Self::Pt;
    fn diameter(&self, pts: &[Self::Pt]) -> f64;
    fn evaluations(&self) -> u64;
}

pub(crate) struct PointPhase<'a> {
    pub sys: &'a DynSystem,
    pub metric: Metric,
    evals: Cell<u64>,
}

impl<'a> PointPhase<'a> {
    pub fn new(sys: &'a DynSystem) -> Result<PointPhase<'a>> {
        let metric = sys
            .metric()
            .ok_or_else(|| Error::SpaceMismatch(alloc::format!("{} has no point phase space", sys.id())))?;
        Ok(PointPhase {
            sys,
            metric,
            evals: Cell::new(0),
        })
    }
}

/// Exact for up to this many points or planar sets, a double-sweep lower
/// bound above.
const EXACT_DIAMETER_LIMIT: usize = 4000;

impl Phase for PointPhase<'_> {
    type Pt = Point;

    fn step(&self, p: &Point, dir: Direction) -> Result<Point> {
        self.evals.set(self.evals.get() + 1);
        self.sys.eval(p, dir)
    }

    fn dist(&self, a: &Point, b: &Point) -> f64 {
        self.metric.dist(a, b)
    }

    fn mid(&self, a: &Point, b: &Point) -> Point {
        a.midpoint(b)
    }

    fn diameter(&self, pts: &[Point]) -> f64 {
        let planar = self.metric == Metric::Euclidean && pts.first().is_some_and(|p| p.tag().dim() == 2);
        if planar || pts.len() <= EXACT_DIAMETER_LIMIT {
            let all: Vec<usize> = (0..pts.len()).collect();
            diameter_of(pts, &all, self.metric).value
        } else {
            double_sweep(pts, |a, b| self.dist(a, b))
        }
    }

    fn evaluations(&self) -> u64 {
        self.evals.get()
    }
}

pub(crate) struct SolenoidPhase<'a> {
    pub sys: &'a DynSystem,
    evals: Cell<u64>,
}

impl<'a> SolenoidPhase<'a> {
    pub fn new(sys: &'a DynSystem) -> SolenoidPhase<'a> {
        SolenoidPhase {
            sys,
            evals: Cell::new(0),
        }
    }
}

impl Phase for SolenoidPhase<'_> {
    type Pt = SolenoidPoint;

    fn step(&self, p: &SolenoidPoint, dir: Direction) -> Result<SolenoidPoint> {
        self.evals.set(self.evals.get() + 1);
        self.sys.eval_solenoid(p, dir)
    }

    fn dist(&self, a: &SolenoidPoint, b: &SolenoidPoint) -> f64 {
        solenoid_distance(a, b).unwrap_or(f64::INFINITY)
    }

    fn mid(&self, a: &SolenoidPoint, b: &SolenoidPoint) -> SolenoidPoint {
        a.midpoint(b)
    }

    fn diameter(&self, pts: &[SolenoidPoint]) -> f64 {
        if pts.len() <= EXACT_DIAMETER_LIMIT / 4 {
            let mut best = 0.0f64;
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    best = best.max(self.dist(a, b));
                }
            }
            best
        } else {
            double_sweep(pts, |a, b| self.dist(a, b))
        }
    }

    fn evaluations(&self) -> u64 {
        self.evals.get()
    }
}

/// Lower bound `max_j d(x_far, x_j)` with `x_far` farthest from the first
/// point; at least half the diameter.
fn double_sweep<P>(pts: &[P], d: impl Fn(&P, &P) -> f64) -> f64 {
    let Some(first) = pts.first() else {
        return 0.0;
    };
    let far = pts
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, p)| {
            let v = d(first, p);
            if v > acc.1 {
                (i, v)
            } else {
                acc
            }
        });
    let second = pts.iter().map(|p| d(&pts[far.0], p)).fold(0.0, f64::max);
    second.max(far.1)
}

/// One application of the map to a chain, subdividing (in the source) any
/// link whose image is longer than `gap`. Without `refine` the points are
/// mapped as they are.
pub(crate) fn step_chain<P: Phase>(
    phase: &P,
    chain: &[P::Pt],
    gap: f64,
    dir: Direction,
    refine: bool,
) -> Result<Vec<P::Pt>> {
    let mut out: Vec<P::Pt> = Vec::with_capacity(chain.len());
    let Some(first) = chain.first() else {
        return Ok(out);
    };
    let mut prev_src = first.clone();
    let mut prev_img = phase.step(first, dir)?;
    out.push(prev_img.clone());
    let mut stack: Vec<(P::Pt, P::Pt, u32)> = Vec::new();
    for q in &chain[1..] {
        let q_img = phase.step(q, dir)?;
        if !refine {
            out.push(q_img.clone());
        } else {
            // depth-first bisection keeps the output ordered
            stack.push((q.clone(), q_img.clone(), 0));
            while let Some((src, img, depth)) = stack.pop() {
                if phase.dist(&prev_img, &img) <= gap || depth >= MAX_SPLIT_DEPTH {
                    out.push(img.clone());
                    prev_src = src;
                    prev_img = img;
                    continue;
                }
                let m = phase.mid(&prev_src, &src);
                let m_img = phase.step(&m, dir)?;
                stack.push((src, img, depth + 1));
                stack.push((m, m_img, depth + 1));
                if out.len() + stack.len() > MAX_CHAIN_POINTS {
                    return Err(Error::Resource(alloc::format!(
                        "chain refinement beyond {MAX_CHAIN_POINTS} points"
                    )));
                }
            }
        }
        prev_src = q.clone();
        prev_img = q_img;
    }
    Ok(out)
}

/// `f^n(C)` as a chain. With `refine`, links longer than the input's gap
/// bound are bisected in the previous iterate, so the result keeps that
/// gap bound; without it the gap bound becomes the largest image link.
pub fn continuum_iterate(sys: &DynSystem, c: &ContinuumApprox, n: i64, refine: bool) -> Result<ContinuumApprox> {
    let phase = PointPhase::new(sys)?;
    let dir = if n >= 0 { Direction::Forward } else { Direction::Backward };
    let mut chain: Vec<Point> = c.points().to_vec();
    for _ in 0..n.unsigned_abs() {
        chain = step_chain(&phase, &chain, c.gap_bound(), dir, refine)?;
    }
    if n == 0 {
        return Ok(c.clone());
    }
    let widest = chain.windows(2).map(|w| phase.dist(&w[0], &w[1])).fold(0.0, f64::max);
    let gap = if refine { widest.max(c.gap_bound()) } else { widest };
    Ok(ContinuumApprox::from_parts_unchecked(chain, gap))
}
