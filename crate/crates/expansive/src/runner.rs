//! Executes one experiment config and writes its artifacts.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use expansive_core::dimension::{dim_eps_estimate, dim_eps_oracle};
use expansive_core::expansivity::{
    disk_seed, dynamical_ball, eigen_rectangle_cloud, eigen_rectangle_seed, segment_seeds, solenoid_segment,
    stable_set_scan, test_notion, test_solenoid_notion, thin_annulus_seed, EscapeRule, ExpansivityReport,
    NotionParams, ScanWindow, Seed, SeedSet, Verdict,
};
use expansive_core::metric::{directed_hausdorff, Metric, Point, PointCloud, SolenoidPoint, SpaceTag};
use expansive_core::systems::{DynSystem, Direction, CATALOG};
use expansive_core::tangency::{local_ball_cardinality_bound, tangency_order, JetPair, Polynomial, TangencyOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Centers, CloudSource, Escape, ExperimentConfig, Operation, SeedSource};
use crate::formats::{chain_csv, cloud_csv, cloud_meta_json, cover_json, orbit_csv, segments_json, to_json_bytes};
use crate::svg::{project, Figure};
use crate::{exit_code, RunError, LIBRARY, VERSION};

/// Overall result of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Completed; the operation has no pass/fail criterion.
    Ok,
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Pass => exit_code::PASS,
            Status::Fail => exit_code::FAIL,
            Status::Inconclusive => exit_code::INCONCLUSIVE,
        }
    }

    fn from_verdict(v: Verdict) -> Status {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }

    fn threshold(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Contents of `report.json`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub library: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub experiment: Value,
    pub system: String,
    pub operation: &'static str,
    pub status: Status,
    pub exit_code: i32,
    pub reason: String,
    pub results: Value,
    /// Other files written next to the report, sorted.
    pub artifacts: Vec<String>,
}

/// A finished run held in memory.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    /// `(file name, bytes)` in the order they are written; the report last.
    pub files: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    pub fn status(&self) -> Status {
        self.report.status
    }

    pub fn exit_code(&self) -> i32 {
        self.report.status.exit_code()
    }

    pub fn file(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }
}

struct Artifacts(Vec<(String, Vec<u8>)>);

impl Artifacts {
    fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.0.push((name.into(), bytes.into()));
    }

    fn cloud(&mut self, stem: &str, c: &PointCloud) {
        self.add(format!("{stem}.csv"), cloud_csv(c));
        self.add(format!("{stem}.json"), cloud_meta_json(c));
    }
}

/// Validate, execute and write all outputs to `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let outcome = execute(cfg)?;
    write_outputs(&outcome, &cfg.output_dir)?;
    Ok(outcome)
}

/// Write every file of `outcome` into `dir`, creating it if needed.
pub fn write_outputs(outcome: &Outcome, dir: &Path) -> Result<(), RunError> {
    fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    for (name, bytes) in &outcome.files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| RunError::io(path, e))?;
    }
    Ok(())
}

/// Run `cfg` without touching the file system.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    cfg.validate()?;
    let sys = cfg.build_system()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut files = Artifacts(Vec::new());
    let (status, reason, results) = match &cfg.operation {
        Operation::Catalog => catalog(),
        Operation::Orbit { point, back, forward } => orbit(&sys, point, *back, *forward, &mut files)?,
        Operation::Ball {
            centers,
            delta,
            horizon,
            grid,
            window_half,
            max_diameter,
        } => {
            let half = window_half.unwrap_or(1.25 * delta);
            let centers = resolve_centers(&sys, centers, half, &mut rng)?;
            balls(&sys, &centers, *delta, *horizon, *grid, half, *max_diameter, &mut files)?
        }
        Operation::Dim { cloud, epsilon, oracle } => {
            let c = load_cloud(&sys, cloud)?;
            dim(&c, *epsilon, *oracle, &mut files)?
        }
        Operation::StableSet {
            window,
            grid,
            horizon,
            escape,
            max_hausdorff,
        } => stable_set(&sys, &window.lo, &window.hi, *grid, *horizon, escape, *max_hausdorff, &mut files)?,
        Operation::Test {
            notion,
            delta,
            horizon,
            seeds,
        } => {
            let params = NotionParams {
                notion: (*notion).into(),
                delta: *delta,
                horizon: *horizon,
            };
            test(&sys, &params, seeds, &mut rng, &mut files)?
        }
        Operation::Tangency {
            stable,
            unstable,
            r,
            half_window,
        } => tangency(stable, unstable, *r, *half_window)?,
        Operation::Render {
            cloud,
            e_segments,
            project,
            title,
        } => render(&sys, cloud.as_ref(), *e_segments, *project, title.as_deref(), &mut files)?,
    };
    let mut artifacts: Vec<String> = files.0.iter().map(|(n, _)| n.clone()).collect();
    artifacts.sort();
    let report = Report {
        library: LIBRARY,
        version: VERSION,
        config_hash: cfg.hash(),
        experiment: cfg.experiment_json(),
        system: sys.id().to_string(),
        operation: cfg.operation.name(),
        status,
        exit_code: status.exit_code(),
        reason,
        results,
        artifacts,
    };
    files.add("report.json", to_json_bytes(&report));
    Ok(Outcome { report, files: files.0 })
}

type OpResult = (Status, String, Value);

fn catalog() -> OpResult {
    let entries: Vec<Value> = CATALOG
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "space": e.space,
                "invertible": e.invertible,
                "description": e.description,
            })
        })
        .collect();
    (Status::Ok, format!("{} systems", entries.len()), Value::Array(entries))
}

fn point_in(sys: &DynSystem, coords: &[f64]) -> Result<Point, RunError> {
    let tag = sys
        .space()
        .ok_or_else(|| RunError::Config(format!("{} has no point phase space", sys.id())))?;
    Ok(Point::new(tag, coords)?)
}

/// Uniform point of the system's space; annulus points keep `margin` from
/// both boundary circles.
fn random_point(sys: &DynSystem, margin: f64, rng: &mut ChaCha8Rng) -> Result<Point, RunError> {
    let tag = sys
        .space()
        .ok_or_else(|| RunError::Config(format!("{} has no point phase space", sys.id())))?;
    let mut u = || rng.random::<f64>();
    Ok(match tag {
        SpaceTag::Torus2 => Point::torus2(u(), u()),
        SpaceTag::Circle => Point::circle(u()),
        SpaceTag::Plane2 => Point::plane2(u(), u()),
        SpaceTag::Plane3 => Point::plane3(u(), u(), u()),
        SpaceTag::Annulus => {
            if margin >= 0.5 {
                return Err(RunError::Config(format!("margin {margin} leaves no room in the annulus")));
            }
            let r = 1.0 + margin + (1.0 - 2.0 * margin) * u();
            Point::annulus_polar(r, TAU * u())?
        }
    })
}

fn resolve_centers(
    sys: &DynSystem,
    centers: &Centers,
    margin: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Point>, RunError> {
    match centers {
        Centers::Points(v) => v.iter().map(|p| point_in(sys, p)).collect(),
        Centers::Random(n) => (0..*n).map(|_| random_point(sys, margin, rng)).collect(),
    }
}

fn coords(p: &Point) -> Vec<f64> {
    p.coords().to_vec()
}

fn orbit(sys: &DynSystem, point: &[f64], back: u32, forward: u32, files: &mut Artifacts) -> Result<OpResult, RunError> {
    if let DynSystem::SolenoidShift { half_width } = sys {
        let mut a = SolenoidPoint::from_anchor(point[0], *half_width);
        for _ in 0..back {
            a = sys.eval_solenoid(&a, Direction::Backward)?;
        }
        let mut rows = Vec::with_capacity((back + forward + 1) as usize);
        for n in -(back as i64)..=forward as i64 {
            rows.push((n, Point::circle(a.entry(0).unwrap_or(0.0))));
            a = sys.eval_solenoid(&a, Direction::Forward)?;
        }
        files.add("orbit.csv", orbit_csv(SpaceTag::Circle, &rows));
        let results = json!({ "points": rows.len(), "column": "middle window entry" });
        return Ok((Status::Ok, format!("{} orbit points", rows.len()), results));
    }
    let p = point_in(sys, point)?;
    let orbit = sys.orbit(&p, back, forward)?;
    files.add("orbit.csv", orbit_csv(p.tag(), &orbit));
    let last = orbit.last().map(|(_, q)| coords(q)).unwrap_or_default();
    let results = json!({ "points": orbit.len(), "start": coords(&p), "last": last });
    Ok((Status::Ok, format!("{} orbit points", orbit.len()), results))
}

#[allow(clippy::too_many_arguments)]
fn balls(
    sys: &DynSystem,
    centers: &[Point],
    delta: f64,
    horizon: u32,
    grid: f64,
    half: f64,
    max_diameter: Option<f64>,
    files: &mut Artifacts,
) -> Result<OpResult, RunError> {
    let mut rows = Vec::new();
    let (mut widest, mut truncated) = (0.0f64, 0usize);
    for (i, x) in centers.iter().enumerate() {
        let window = ScanWindow::around(x, half)?;
        let b = dynamical_ball(sys, x, delta, horizon, grid, &window)?;
        widest = widest.max(b.diameter);
        truncated += usize::from(b.touches_boundary);
        files.cloud(&format!("ball_{i}"), &b.ball);
        if b.ball.tag() != SpaceTag::Plane3 {
            let mut fig = Figure::new(format!("dynamical ball {i} of {}", sys.id())).resolution(grid);
            let lo: Vec<f64> = (0..window.dim()).map(|a| window.lo(a)).collect();
            let hi: Vec<f64> = (0..window.dim()).map(|a| window.hi(a)).collect();
            if lo.len() == 2 {
                fig = fig.bounds(lo[0], hi[0], lo[1], hi[1]);
            }
            fig.cloud("ball", &b.ball)?;
            let center = PointCloud::new(vec![*x], grid)?;
            fig.cloud("center", &center)?;
            files.add(format!("ball_{i}.svg"), fig.render());
        }
        rows.push(json!({
            "center": coords(x),
            "points": b.ball.len(),
            "diameter": b.diameter,
            "component_count": b.component_count,
            "touches_boundary": b.touches_boundary,
            "grid_points": b.grid_points,
        }));
    }
    let (status, reason) = if truncated > 0 {
        (
            Status::Inconclusive,
            format!("{truncated} ball(s) reach the scan window; enlarge window_half"),
        )
    } else if let Some(m) = max_diameter {
        (
            Status::threshold(widest <= m),
            format!("largest diameter {widest:e} against {m:e}"),
        )
    } else {
        (Status::Ok, format!("largest diameter {widest:e}"))
    };
    let results = json!({
        "delta": delta,
        "horizon": horizon,
        "grid": grid,
        "window_half": half,
        "max_diameter": widest,
        "balls": rows,
    });
    Ok((status, reason, results))
}

fn load_cloud(sys: &DynSystem, src: &CloudSource) -> Result<PointCloud, RunError> {
    Ok(match src {
        CloudSource::Csv { path } => crate::formats::read_cloud(path)?,
        CloudSource::ESample { h } => {
            let s = sys
                .saddle()
                .ok_or_else(|| RunError::Config("e_sample needs a saddle system".into()))?;
            s.geometry.sample(*h)?
        }
        CloudSource::Circle { center, radius, h } => {
            let n = (TAU * radius / h).ceil().max(3.0) as usize;
            let pts = (0..n)
                .map(|k| {
                    let a = TAU * k as f64 / n as f64;
                    Point::plane2(center[0] + radius * a.cos(), center[1] + radius * a.sin())
                })
                .collect();
            PointCloud::new(pts, *h)?
        }
        CloudSource::Segment { from, to, h } => {
            let len = (to[0] - from[0]).hypot(to[1] - from[1]);
            let n = (len / h).ceil().max(1.0) as usize;
            let pts = (0..=n)
                .map(|k| {
                    let t = k as f64 / n as f64;
                    Point::plane2(from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1]))
                })
                .collect();
            PointCloud::new(pts, *h)?
        }
        CloudSource::Disk { center, radius, h } => match disk_seed(&point_in(sys, center)?, *radius, *h)?.set {
            SeedSet::Cloud(c) => c,
            SeedSet::Chain(c) => c.to_cloud(),
        },
        CloudSource::EigenRectangle {
            center,
            half_unstable,
            half_stable,
            h,
        } => eigen_rectangle_cloud(&Point::torus2(center[0], center[1]), *half_unstable, *half_stable, *h)?,
    })
}

fn dim(c: &PointCloud, epsilon: f64, with_oracle: bool, files: &mut Artifacts) -> Result<OpResult, RunError> {
    let est = dim_eps_estimate(c, epsilon)?;
    let oracle = if with_oracle { Some(dim_eps_oracle(c, epsilon)?) } else { None };
    files.cloud("cloud", c);
    files.add("cover.json", cover_json(&est.witness_cover));
    if let Some(chain) = &est.witness_chain {
        files.add("chain.csv", chain_csv(chain));
    }
    if c.tag() != SpaceTag::Plane3 {
        let mut fig = Figure::new(format!("witness cover, epsilon = {epsilon}")).resolution(c.resolution_h());
        fig.cover("cover boxes", &est.witness_cover)?;
        fig.cloud_in_chart("samples", c, &est.witness_cover)?;
        files.add("cover.svg", fig.render());
    }
    let results = json!({
        "epsilon": epsilon,
        "points": c.len(),
        "resolution_h": c.resolution_h(),
        "lower": est.lower,
        "upper": est.upper,
        "oracle": oracle,
        "candidates": est.candidates,
        "cover": {
            "size": est.witness_cover.len(),
            "mesh": est.witness_cover.mesh(),
            "order": est.witness_cover.order(),
        },
    });
    let reason = format!("{} <= dim_eps <= {}", est.lower, est.upper);
    Ok((Status::Ok, reason, results))
}

#[allow(clippy::too_many_arguments)]
fn stable_set(
    sys: &DynSystem,
    lo: &[f64],
    hi: &[f64],
    grid: f64,
    horizon: u32,
    escape: &Escape,
    max_hausdorff: Option<f64>,
    files: &mut Artifacts,
) -> Result<OpResult, RunError> {
    let window = ScanWindow::new(lo, hi)?;
    let rule = match escape {
        Escape::SaddleR1 => EscapeRule::SaddleR1,
        Escape::Radius { center, radius } => EscapeRule::Radius {
            center: point_in(sys, center)?,
            radius: *radius,
        },
    };
    let scan = stable_set_scan(sys, &window, grid, horizon, &rule)?;
    files.cloud("stable_set", &scan);
    let mut results = json!({
        "grid": grid,
        "horizon": horizon,
        "points": scan.len(),
    });
    let mut fig = Figure::new(format!("stable set scan of {}", sys.id())).resolution(grid);
    if lo.len() == 2 {
        fig = fig.bounds(lo[0], hi[0], lo[1], hi[1]);
    }
    let mut status = Status::Ok;
    let mut reason = format!("{} grid points survive {horizon} iterates", scan.len());
    if let DynSystem::IrregularSaddle2d(s) = sys {
        let segs = s.geometry.segments();
        files.add("e_segments.json", segments_json(&segs));
        fig.segments("E", &segs);
        let e = s.geometry.sample(grid / 2.0)?;
        let (to_e, from_e) = if scan.is_empty() {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (
                directed_hausdorff(&scan, &e, Metric::Euclidean)?,
                directed_hausdorff(&e, &scan, Metric::Euclidean)?,
            )
        };
        let d = to_e.max(from_e);
        results["hausdorff"] = json!({
            "scan_to_e": to_e,
            "e_to_scan": from_e,
            "distance": d,
            "e_sample_points": e.len(),
            "e_sample_resolution": e.resolution_h(),
        });
        reason = format!("{reason}; Hausdorff distance to E {d:e}");
        if let Some(m) = max_hausdorff {
            status = Status::threshold(d <= m);
            reason = format!("{reason} against {m:e}");
        }
    }
    if scan.tag() == SpaceTag::Plane3 {
        fig.cloud("scan (x, y)", &project(&scan, [0, 1])?)?;
    } else {
        fig.cloud("scan", &scan)?;
    }
    files.add("stable_set.svg", fig.render());
    Ok((status, reason, results))
}

fn build_seeds(sys: &DynSystem, src: &SeedSource, rng: &mut ChaCha8Rng) -> Result<Vec<Seed>, RunError> {
    Ok(match src {
        SeedSource::Segments { count, length, gap } => segment_seeds(sys, *count, *length, *gap)?,
        SeedSource::Disks { centers, radius, h } => resolve_centers(sys, centers, *radius, rng)?
            .iter()
            .map(|c| disk_seed(c, *radius, *h))
            .collect::<Result<_, _>>()?,
        SeedSource::ThinAnnulus { r0, r1, h } => vec![thin_annulus_seed(*r0, *r1, *h)?],
        SeedSource::EigenRectangle {
            center,
            half_unstable,
            half_stable,
            h,
        } => vec![eigen_rectangle_seed(
            &Point::torus2(center[0], center[1]),
            *half_unstable,
            *half_stable,
            *h,
        )?],
        SeedSource::SolenoidSegments { .. } => unreachable!("solenoid seeds are built separately"),
    })
}

fn expansivity_results(r: &ExpansivityReport, files: &mut Artifacts) -> Value {
    let mut out = String::from("seed,reached_at,measure,examined,survivors,family,family_verified,max_defect\n");
    let mut dims = String::from("seed,n,lower,upper\n");
    let mut rows = Vec::new();
    for o in &r.outcomes {
        let fam = o.family.as_ref();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            o.seed,
            o.reached_at.map(|n| n.to_string()).unwrap_or_default(),
            crate::formats::fmt_f64(o.measure),
            o.examined,
            o.survivors.map(|n| n.to_string()).unwrap_or_default(),
            fam.map(|f| f.family).unwrap_or(""),
            fam.map(|f| f.verified.to_string()).unwrap_or_default(),
            fam.map(|f| crate::formats::fmt_f64(f.max_defect)).unwrap_or_default(),
        ));
        for d in &o.dims {
            dims.push_str(&format!(
                "{},{},{},{}\n",
                o.seed,
                d.n,
                d.lower,
                d.upper.map(|u| u.to_string()).unwrap_or_default()
            ));
        }
        rows.push(json!({
            "seed": o.seed,
            "reached_at": o.reached_at,
            "measure": o.measure,
            "examined": o.examined,
            "survivors": o.survivors,
            "family": fam.map(|f| json!({
                "family": f.family,
                "verified": f.verified,
                "max_defect": f.max_defect,
                "tolerance": f.tolerance,
            })),
            "dimension_samples": o.dims.len(),
            "max_upper": o.dims.iter().filter_map(|d| d.upper).max(),
        }));
    }
    files.add("outcomes.csv", out);
    if r.outcomes.iter().any(|o| !o.dims.is_empty()) {
        files.add("dims.csv", dims);
    }
    json!({
        "notion": r.params.notion.name(),
        "delta": r.params.delta,
        "horizon": r.params.horizon,
        "verdict": r.verdict.name(),
        "two_sided": r.two_sided,
        "stats": {
            "map_evaluations": r.stats.map_evaluations,
            "dimension_estimates": r.stats.dimension_estimates,
            "largest_chain": r.stats.largest_chain,
        },
        "outcomes": rows,
    })
}

fn test(
    sys: &DynSystem,
    params: &NotionParams,
    seeds: &SeedSource,
    rng: &mut ChaCha8Rng,
    files: &mut Artifacts,
) -> Result<OpResult, RunError> {
    let report = if let SeedSource::SolenoidSegments { count, spread, gap } = seeds {
        let DynSystem::SolenoidShift { half_width } = sys else {
            return Err(RunError::Config("solenoid_segments seeds need solenoid_shift".into()));
        };
        let seeds = (0..*count)
            .map(|_| solenoid_segment(rng.random::<f64>(), *spread, *gap, *half_width))
            .collect::<Result<Vec<_>, _>>()?;
        test_solenoid_notion(sys, params, &seeds)?
    } else {
        test_notion(sys, params, &build_seeds(sys, seeds, rng)?)?
    };
    let results = expansivity_results(&report, files);
    Ok((Status::from_verdict(report.verdict), report.reason.clone(), results))
}

fn tangency(stable: &[f64], unstable: &[f64], r: usize, half_window: f64) -> Result<OpResult, RunError> {
    let jp = JetPair::new(Polynomial::new(stable.to_vec())?, Polynomial::new(unstable.to_vec())?, r, half_window)?;
    match tangency_order(&jp)? {
        TangencyOrder::ExceedsR => Ok((
            Status::Fail,
            format!("jets agree through degree {r}: no finite local bound"),
            json!({ "order": null, "exceeds_r": true, "r": r }),
        )),
        TangencyOrder::Order(k) => {
            let b = local_ball_cardinality_bound(&jp)?;
            let status = if b.holds() { Status::Pass } else { Status::Inconclusive };
            let reason = format!(
                "contact order {k}; {} distinct intersections in [-{half_window}, {half_window}]",
                b.roots
            );
            Ok((
                status,
                reason,
                json!({
                    "order": k,
                    "exceeds_r": false,
                    "r": r,
                    "bound": b.bound,
                    "roots": b.roots,
                    "holds": b.holds(),
                    "half_window": half_window,
                }),
            ))
        }
    }
}

fn render(
    sys: &DynSystem,
    cloud: Option<&CloudSource>,
    e_segments: bool,
    axes: Option<[usize; 2]>,
    title: Option<&str>,
    files: &mut Artifacts,
) -> Result<OpResult, RunError> {
    let title = title.map_or_else(|| format!("{} figure", sys.id()), str::to_string);
    let mut fig = Figure::new(title);
    let mut results = json!({});
    if e_segments {
        let s = sys
            .saddle()
            .ok_or_else(|| RunError::Config("e_segments needs a saddle system".into()))?;
        let segs = s.geometry.segments();
        fig = fig.resolution(s.geometry.total_truncation_bound());
        fig.segments("E", &segs);
        files.add("e_segments.json", segments_json(&segs));
        results["segments"] = json!(segs.len());
    }
    if let Some(src) = cloud {
        let mut c = load_cloud(sys, src)?;
        if let Some(axes) = axes {
            c = project(&c, axes)?;
        }
        fig = fig.resolution(c.resolution_h());
        fig.cloud("cloud", &c)?;
        results["points"] = json!(c.len());
    }
    files.add("figure.svg", fig.render());
    Ok((Status::Ok, "figure written".into(), results))
}
