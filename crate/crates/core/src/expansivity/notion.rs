//! Per-notion testers over seed families.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::phase::{step_chain, Phase, PointPhase, SolenoidPhase};
use super::seeds::eigen_rectangle_cloud;
use super::{search_order, ExpansivityReport, Family, Notion, NotionParams, RunStats, Seed, SeedSet, SolenoidSeed, Verdict};
use crate::dimension::{dim_eps_estimate, dim_eps_lower};
use crate::metric::{hausdorff_distance, ContinuumApprox, Metric, Point, PointCloud};
use crate::systems::{cat_lambda, Direction, DynSystem};
use crate::{Error, Result};

/// Defect allowed for isometries and exact rectangle iterates.
const EXACT_TOL: f64 = 1e-9;

/// Dimension bounds of one iterate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimSample {
    pub n: i64,
    pub lower: usize,
    pub upper: Option<usize>,
}

/// Outcome of the witness-family check over all examined iterates.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCheck {
    pub family: &'static str,
    pub verified: bool,
    pub max_defect: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedOutcome {
    pub seed: usize,
    /// First iterate (in search order) meeting the criterion.
    pub reached_at: Option<i64>,
    /// Criterion quantity at `reached_at`, otherwise its extreme over the
    /// horizon: diameter, separation, surviving count or lower dimension.
    pub measure: f64,
    pub examined: u32,
    /// Seed points still within `δ` of the anchor (ball-type notions).
    pub survivors: Option<usize>,
    pub family: Option<FamilyCheck>,
    pub dims: Vec<DimSample>,
}

impl SeedOutcome {
    fn new(seed: usize) -> SeedOutcome {
        SeedOutcome {
            seed,
            reached_at: None,
            measure: 0.0,
            examined: 0,
            survivors: None,
            family: None,
            dims: Vec::new(),
        }
    }

    /// A seed that never met the criterion and whose family extends that
    /// to all iterates.
    fn is_counterexample(&self, notion: Notion) -> bool {
        if self.reached_at.is_some() || !self.family.as_ref().is_some_and(|f| f.verified) {
            return false;
        }
        match notion {
            Notion::Dw { d } | Notion::PositiveDw { d } => {
                !self.dims.is_empty() && self.dims.iter().all(|s| s.upper.is_some_and(|u| u <= d))
            }
            _ => true,
        }
    }
}

fn check_params(p: &NotionParams) -> Result<()> {
    if p.horizon < 1 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    if !(p.delta.is_finite() && p.delta > 0.0) {
        return Err(Error::Domain(format!("scale must be positive, got {}", p.delta)));
    }
    if let Notion::NExpansive { n } = p.notion {
        if n == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
    }
    Ok(())
}

/// Walks the iterates of a seed in search order until `visit` reports the
/// criterion met. Returns the iterate it stopped at, the number examined
/// and the largest chain built.
fn sweep<P: Phase>(
    phase: &P,
    start: &[P::Pt],
    refine_gap: Option<f64>,
    horizon: u32,
    two_sided: bool,
    mut visit: impl FnMut(i64, &[P::Pt]) -> Result<bool>,
) -> Result<(Option<i64>, u32, usize)> {
    let mut fwd: Vec<P::Pt> = start.to_vec();
    let mut bwd: Vec<P::Pt> = start.to_vec();
    let mut examined = 0u32;
    let mut largest = start.len();
    let gap = refine_gap.unwrap_or(f64::INFINITY);
    for n in search_order(horizon, two_sided) {
        let pts = match n {
            0 => start,
            n if n > 0 => {
                fwd = step_chain(phase, &fwd, gap, Direction::Forward, refine_gap.is_some())?;
                largest = largest.max(fwd.len());
                &fwd
            }
            _ => {
                bwd = step_chain(phase, &bwd, gap, Direction::Backward, refine_gap.is_some())?;
                largest = largest.max(bwd.len());
                &bwd
            }
        };
        examined += 1;
        if visit(n, pts)? {
            return Ok((Some(n), examined, largest));
        }
    }
    Ok((None, examined, largest))
}

/// Visitor for the notions measured by distances alone. Point lists for
/// ball-type notions carry the anchor at index 0.
struct DistanceJudge {
    notion: Notion,
    delta: f64,
    alive: Vec<bool>,
    best: f64,
}

impl DistanceJudge {
    fn new(notion: Notion, delta: f64, len: usize) -> DistanceJudge {
        let best = match notion {
            Notion::Expansive | Notion::NExpansive { .. } => f64::INFINITY,
            _ => 0.0,
        };
        DistanceJudge {
            notion,
            delta,
            alive: alloc::vec![true; len],
            best,
        }
    }

    fn allowed_companions(&self) -> usize {
        match self.notion {
            Notion::NExpansive { n } => n - 1,
            _ => 0,
        }
    }

    fn survivors(&self) -> usize {
        self.alive.iter().skip(1).filter(|a| **a).count()
    }

    fn judge<P: Phase>(&mut self, phase: &P, n: i64, pts: &[P::Pt]) -> bool {
        match self.notion {
            Notion::Cw | Notion::Partial { .. } => {
                let d = phase.diameter(pts);
                self.best = self.best.max(d);
                d >= self.delta
            }
            Notion::Sensitivity => {
                let sep = pts[1..].iter().map(|q| phase.dist(&pts[0], q)).fold(0.0, f64::max);
                self.best = self.best.max(sep);
                sep > self.delta
            }
            Notion::Expansive | Notion::NExpansive { .. } => {
                for (j, q) in pts.iter().enumerate().skip(1) {
                    let d = phase.dist(&pts[0], q);
                    // points equal to the anchor are the anchor
                    if (n == 0 && d == 0.0) || d > self.delta {
                        self.alive[j] = false;
                    }
                }
                let count = self.survivors();
                self.best = self.best.min(count as f64);
                count <= self.allowed_companions()
            }
            Notion::Dw { .. } | Notion::PositiveDw { .. } => false,
        }
    }
}

fn uses_anchor(notion: Notion) -> bool {
    matches!(notion, Notion::Expansive | Notion::NExpansive { .. } | Notion::Sensitivity)
}

fn seed_resolution(seed: &Seed) -> f64 {
    match &seed.set {
        SeedSet::Cloud(c) => c.resolution_h(),
        SeedSet::Chain(c) => c.gap_bound() / 2.0,
    }
}

fn check_seed(sys: &DynSystem, p: &NotionParams, i: usize, seed: &Seed) -> Result<()> {
    let pts = seed.set.points();
    if pts.is_empty() {
        return Err(Error::Precondition(format!("seed {i} is empty")));
    }
    if Some(pts[0].tag()) != sys.space() || seed.anchor.is_some_and(|a| Some(a.tag()) != sys.space()) {
        return Err(Error::SpaceMismatch(format!("seed {i} does not live in the phase space of {}", sys.id())));
    }
    if p.delta <= 4.0 * seed_resolution(seed) {
        return Err(Error::Precondition(format!(
            "scale {} must exceed four times the resolution {} of seed {i}",
            p.delta,
            seed_resolution(seed)
        )));
    }
    match p.notion {
        Notion::Cw if !matches!(seed.set, SeedSet::Chain(_)) => {
            Err(Error::Precondition(format!("cw needs chain seeds; seed {i} is a cloud")))
        }
        Notion::Cw if seed.dim < 1 => Err(Error::Precondition(format!("seed {i} is not a nontrivial continuum"))),
        Notion::Partial { d } | Notion::Dw { d } | Notion::PositiveDw { d } if seed.dim <= d => Err(
            Error::Precondition(format!("seed {i} has dimension {} but must exceed {d}", seed.dim)),
        ),
        _ => Ok(()),
    }
}

/// Family bookkeeping for a point seed.
struct FamilyState<'a> {
    family: &'a Family,
    seed: &'a Seed,
    metric: Metric,
    max_defect: f64,
    last_defect: f64,
    tolerance: f64,
}

impl<'a> FamilyState<'a> {
    fn new(sys: &DynSystem, seed: &'a Seed, metric: Metric) -> Result<Option<FamilyState<'a>>> {
        let Some(family) = &seed.family else {
            return Ok(None);
        };
        let tolerance = match family {
            Family::InvariantSet => 2.0 * seed_resolution(seed),
            Family::IsometricOrbit => EXACT_TOL,
            Family::EigenRectangle { .. } => {
                if !matches!(sys, DynSystem::CatMap) {
                    return Err(Error::Precondition("eigen rectangles belong to the cat map".into()));
                }
                EXACT_TOL
            }
        };
        Ok(Some(FamilyState {
            family,
            seed,
            metric,
            max_defect: 0.0,
            last_defect: 0.0,
            tolerance,
        }))
    }

    /// Records the defect of iterate `n` given its image points.
    fn observe(&mut self, n: i64, img: &[Point]) -> Result<()> {
        if n == 0 {
            return Ok(());
        }
        let src = self.seed.set.points();
        let defect = match self.family {
            Family::InvariantSet => {
                let a = PointCloud::new(img.to_vec(), self.tolerance)?;
                let b = PointCloud::new(src.to_vec(), self.tolerance)?;
                hausdorff_distance(&a, &b, self.metric)?
            }
            Family::IsometricOrbit if img.len() != src.len() => f64::INFINITY,
            Family::IsometricOrbit => {
                let m = self.metric;
                let mut worst = 0.0f64;
                for j in 1..src.len() {
                    worst = worst.max((m.dist(&img[j - 1], &img[j]) - m.dist(&src[j - 1], &src[j])).abs());
                    worst = worst.max((m.dist(&img[0], &img[j]) - m.dist(&src[0], &src[j])).abs());
                }
                worst
            }
            Family::EigenRectangle {
                center,
                half_unstable,
                half_stable,
            } => rectangle_step_defect(center, *half_unstable, *half_stable, n)?,
        };
        self.max_defect = self.max_defect.max(defect);
        self.last_defect = defect;
        Ok(())
    }

    fn finish(&self) -> FamilyCheck {
        FamilyCheck {
            family: self.family.name(),
            verified: self.max_defect <= self.tolerance,
            max_defect: self.max_defect,
            tolerance: self.tolerance,
        }
    }
}

/// Corners of the `n`-th iterate of an eigen rectangle.
fn rectangle_corners(center: &Point, half_u: f64, half_s: f64, n: i64) -> Result<[Point; 4]> {
    let (u, v) = crate::systems::cat_eigenvectors();
    let lam = crate::fmath::powi(cat_lambda(), n as i32);
    let c = DynSystem::CatMap.iterate(center, n)?;
    let (a, b) = (half_u * lam, half_s / lam);
    let corner = |s: f64, t: f64| Point::torus2(c.x() + s * a * u[0] + t * b * v[0], c.y() + s * a * u[1] + t * b * v[1]);
    Ok([corner(-1.0, -1.0), corner(1.0, -1.0), corner(1.0, 1.0), corner(-1.0, 1.0)])
}

/// Distance between the image of iterate `n ∓ 1`'s corners and iterate
/// `n`'s corners.
fn rectangle_step_defect(center: &Point, half_u: f64, half_s: f64, n: i64) -> Result<f64> {
    let prev = if n > 0 { n - 1 } else { n + 1 };
    let dir = if n > 0 { Direction::Forward } else { Direction::Backward };
    let before = rectangle_corners(center, half_u, half_s, prev)?;
    let after = rectangle_corners(center, half_u, half_s, n)?;
    let mut worst = 0.0f64;
    for (p, q) in before.iter().zip(after.iter()) {
        let img = DynSystem::CatMap.eval(p, dir)?;
        worst = worst.max(Metric::TorusQuotient.dist(&img, q));
    }
    Ok(worst)
}

/// Runs the tester for `params.notion` over point seeds.
///
/// Two-sided notions examine `n = 0, 1, −1, 2, …` up to the horizon;
/// positive notions and non-invertible systems only forward iterates.
pub fn test_notion(sys: &DynSystem, params: &NotionParams, seeds: &[Seed]) -> Result<ExpansivityReport> {
    check_params(params)?;
    if seeds.is_empty() {
        return Err(Error::Empty);
    }
    for (i, s) in seeds.iter().enumerate() {
        check_seed(sys, params, i, s)?;
    }
    let phase = PointPhase::new(sys)?;
    let two_sided = sys.is_invertible() && !params.notion.forward_only();
    let mut stats = RunStats::default();
    let mut outcomes = Vec::with_capacity(seeds.len());
    for (i, seed) in seeds.iter().enumerate() {
        let mut out = SeedOutcome::new(i);
        let mut family = FamilyState::new(sys, seed, phase.metric)?;
        let (reached, examined, largest) = match params.notion {
            Notion::Dw { d } | Notion::PositiveDw { d } => {
                dw_seed(&phase, params, d, seed, two_sided, &mut family, &mut out, &mut stats)?
            }
            notion => {
                let mut pts: Vec<Point> = Vec::with_capacity(seed.set.points().len() + 1);
                if uses_anchor(notion) {
                    pts.push(seed.anchor_point().expect("seed checked nonempty"));
                }
                pts.extend_from_slice(seed.set.points());
                let refine = match (&seed.set, uses_anchor(notion)) {
                    (SeedSet::Chain(c), false) => Some(c.gap_bound()),
                    _ => None,
                };
                let offset = usize::from(uses_anchor(notion));
                let mut judge = DistanceJudge::new(notion, params.delta, pts.len());
                let r = sweep(&phase, &pts, refine, params.horizon, two_sided, |n, img| {
                    if let Some(f) = family.as_mut() {
                        f.observe(n, &img[offset..])?;
                    }
                    Ok(judge.judge(&phase, n, img))
                })?;
                out.measure = judge.best;
                if uses_anchor(notion) && notion != Notion::Sensitivity {
                    out.survivors = Some(judge.survivors());
                }
                r
            }
        };
        out.reached_at = reached;
        out.examined = examined;
        out.family = family.map(|f| f.finish());
        stats.largest_chain = stats.largest_chain.max(largest);
        outcomes.push(out);
    }
    stats.map_evaluations = phase.evaluations();
    Ok(assemble(sys.id(), params, two_sided, outcomes, stats))
}

#[allow(clippy::too_many_arguments)]
fn dw_seed(
    phase: &PointPhase<'_>,
    params: &NotionParams,
    d: usize,
    seed: &Seed,
    two_sided: bool,
    family: &mut Option<FamilyState<'_>>,
    out: &mut SeedOutcome,
    stats: &mut RunStats,
) -> Result<(Option<i64>, u32, usize)> {
    let sigma = params.delta;
    let h = seed_resolution(seed);
    let refine = match &seed.set {
        SeedSet::Chain(c) => Some(c.gap_bound()),
        SeedSet::Cloud(_) => None,
    };
    let mut best_lower = 0usize;
    let r = sweep(phase, seed.set.points(), refine, params.horizon, two_sided, |n, img| {
        let mut defect = 0.0;
        if let Some(f) = family.as_mut() {
            f.observe(n, img)?;
            defect = f.last_defect;
        }
        let sample = match (&seed.set, seed.family.as_ref()) {
            (_, Some(Family::EigenRectangle { center, half_unstable, half_stable })) => {
                let lam = crate::fmath::powi(cat_lambda(), n as i32);
                let c = DynSystem::CatMap.iterate(center, n)?;
                Some(eigen_rectangle_cloud(&c, half_unstable * lam, half_stable / lam, h)?)
            }
            (SeedSet::Cloud(_), Some(Family::IsometricOrbit)) => Some(PointCloud::new(img.to_vec(), h)?),
            // every point of C = fⁿ(C) is within h of the seed, which is
            // within the measured defect of the image
            (SeedSet::Cloud(_), Some(Family::InvariantSet)) => Some(PointCloud::new(img.to_vec(), h + defect)?),
            (SeedSet::Chain(c), _) => {
                let widest = img.windows(2).map(|w| phase.metric.dist(&w[0], &w[1])).fold(0.0, f64::max);
                let chain = ContinuumApprox::from_parts_unchecked(img.to_vec(), widest.max(c.gap_bound()));
                Some(chain.to_cloud())
            }
            (SeedSet::Cloud(_), None) => None,
        };
        let Some(cloud) = sample else {
            return Ok(false);
        };
        if sigma <= 4.0 * cloud.resolution_h() {
            return Ok(false);
        }
        stats.dimension_estimates += 1;
        let (lower, upper) = if seed.family.is_some() {
            let e = dim_eps_estimate(&cloud, sigma)?;
            (e.lower, Some(e.upper))
        } else {
            (dim_eps_lower(&cloud, sigma)?.0, None)
        };
        best_lower = best_lower.max(lower);
        out.dims.push(super::DimSample { n, lower, upper });
        Ok(lower > d)
    })?;
    out.measure = best_lower as f64;
    Ok(r)
}

/// Runs a distance-based tester over solenoid chains. The dimension
/// notions are not available on the solenoid.
pub fn test_solenoid_notion(sys: &DynSystem, params: &NotionParams, seeds: &[SolenoidSeed]) -> Result<ExpansivityReport> {
    check_params(params)?;
    if !matches!(sys, DynSystem::SolenoidShift { .. }) {
        return Err(Error::SpaceMismatch(format!("{} does not act on solenoid points", sys.id())));
    }
    if matches!(params.notion, Notion::Dw { .. } | Notion::PositiveDw { .. }) {
        return Err(Error::Precondition("dimension notions are not tested on the solenoid".into()));
    }
    if let Notion::Partial { d } = params.notion {
        if d > 0 {
            return Err(Error::Precondition(format!("solenoid chains have dimension 1, not above {d}")));
        }
    }
    if seeds.is_empty() {
        return Err(Error::Empty);
    }
    for (i, s) in seeds.iter().enumerate() {
        if s.points.is_empty() {
            return Err(Error::Precondition(format!("seed {i} is empty")));
        }
        if params.delta <= 2.0 * s.gap_bound {
            return Err(Error::Precondition(format!(
                "scale {} must exceed twice the gap {} of seed {i}",
                params.delta, s.gap_bound
            )));
        }
    }
    let phase = SolenoidPhase::new(sys);
    let mut stats = RunStats::default();
    let mut outcomes = Vec::with_capacity(seeds.len());
    for (i, seed) in seeds.iter().enumerate() {
        let mut out = SeedOutcome::new(i);
        let notion = params.notion;
        let refine = (!uses_anchor(notion)).then_some(seed.gap_bound);
        let mut judge = DistanceJudge::new(notion, params.delta, seed.points.len());
        let (reached, examined, largest) = sweep(&phase, &seed.points, refine, params.horizon, true, |n, img| {
            Ok(judge.judge(&phase, n, img))
        })?;
        out.measure = judge.best;
        if matches!(notion, Notion::Expansive | Notion::NExpansive { .. }) {
            out.survivors = Some(judge.survivors());
        }
        out.reached_at = reached;
        out.examined = examined;
        stats.largest_chain = stats.largest_chain.max(largest);
        outcomes.push(out);
    }
    stats.map_evaluations = phase.evaluations();
    Ok(assemble(sys.id(), params, true, outcomes, stats))
}

fn assemble(
    system: &'static str,
    params: &NotionParams,
    two_sided: bool,
    outcomes: Vec<SeedOutcome>,
    stats: RunStats,
) -> ExpansivityReport {
    let range = if two_sided { "|n|" } else { "n" };
    let counter: Vec<usize> = outcomes
        .iter()
        .filter(|o| o.is_counterexample(params.notion))
        .map(|o| o.seed)
        .collect();
    let open = outcomes.iter().filter(|o| o.reached_at.is_none()).count();
    let (verdict, reason): (Verdict, String) = if let Some(first) = counter.first() {
        let family = outcomes[*first].family.as_ref().map_or("", |f| f.family);
        (
            Verdict::Fail,
            format!(
                "{} seed(s) never met the criterion for {range} <= {} and carry a verified {family} witness (first: seed {first})",
                counter.len(),
                params.horizon
            ),
        )
    } else if open == 0 {
        (
            Verdict::Pass,
            format!("all {} seeds met the criterion within {range} <= {}", outcomes.len(), params.horizon),
        )
    } else {
        (
            Verdict::Inconclusive,
            format!(
                "{open} of {} seeds did not meet the criterion within {range} <= {} and have no verified witness family",
                outcomes.len(),
                params.horizon
            ),
        )
    };
    ExpansivityReport {
        system,
        params: *params,
        verdict,
        reason,
        two_sided,
        outcomes,
        stats,
    }
}
