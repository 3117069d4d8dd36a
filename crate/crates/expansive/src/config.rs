//! Experiment configs.
//!
//! A config names a catalog system, one operation with its parameters, an
//! output directory and a seed. Unknown fields are rejected everywhere, and
//! [`ExperimentConfig::validate`] checks ranges before anything runs. The
//! JSON Schema in `docs/experiment-config.schema.json` describes the same
//! format.

use std::path::{Path, PathBuf};

use expansive_core::expansivity::Notion;
use expansive_core::systems::{DynSystem, EGeometry, IntegratorConfig, Saddle};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::RunError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemSpec,
    pub operation: Operation,
    pub output_dir: PathBuf,
    /// Seed for every randomized choice (random centers and anchors).
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "SystemParams::is_default")]
    pub params: SystemParams,
}

/// Optional parameters; each applies to some systems only.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Saddle: levels of the comb.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Saddle: teeth per level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_limit_segments: Option<bool>,
    /// Saddle: RK4 step of single map evaluations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator_step: Option<f64>,
    /// Solenoid: window half width.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<usize>,
}

impl SystemParams {
    fn is_default(&self) -> bool {
        *self == SystemParams::default()
    }
}

/// Explicit points or a number of seeded random points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Centers {
    Points(Vec<Vec<f64>>),
    Random(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Escape {
    SaddleR1,
    Radius { center: Vec<f64>, radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// Where the cloud of a `dim` or `render` operation comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CloudSource {
    /// A CSV with its JSON sidecar, as written by this tool.
    Csv { path: PathBuf },
    /// Sample of the saddle's comb (system must be a saddle).
    ESample { h: f64 },
    /// Plane circle of `radius` around `center`.
    Circle { center: [f64; 2], radius: f64, h: f64 },
    /// Plane segment.
    Segment { from: [f64; 2], to: [f64; 2], h: f64 },
    /// Filled disk in the system's space.
    Disk { center: Vec<f64>, radius: f64, h: f64 },
    /// Cat-map stable × unstable parallelogram.
    EigenRectangle {
        center: [f64; 2],
        half_unstable: f64,
        half_stable: f64,
        h: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NotionSpec {
    Expansive,
    NExpansive { n: usize },
    Cw,
    Partial { d: usize },
    Dw { d: usize },
    PositiveDw { d: usize },
    Sensitivity,
}

impl From<NotionSpec> for Notion {
    fn from(n: NotionSpec) -> Notion {
        match n {
            NotionSpec::Expansive => Notion::Expansive,
            NotionSpec::NExpansive { n } => Notion::NExpansive { n },
            NotionSpec::Cw => Notion::Cw,
            NotionSpec::Partial { d } => Notion::Partial { d },
            NotionSpec::Dw { d } => Notion::Dw { d },
            NotionSpec::PositiveDw { d } => Notion::PositiveDw { d },
            NotionSpec::Sensitivity => Notion::Sensitivity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeedSource {
    /// Short chains spread over the space.
    Segments { count: usize, length: f64, gap: f64 },
    Disks { centers: Centers, radius: f64, h: f64 },
    /// Invariant annulus `r0 ≤ |p| ≤ r1` (annulus system).
    ThinAnnulus { r0: f64, r1: f64, h: f64 },
    EigenRectangle {
        center: [f64; 2],
        half_unstable: f64,
        half_stable: f64,
        h: f64,
    },
    /// Solenoid arcs from seeded random anchors.
    SolenoidSegments { count: usize, spread: f64, gap: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Operation {
    Catalog,
    Orbit {
        point: Vec<f64>,
        #[serde(default)]
        back: u32,
        forward: u32,
    },
    Ball {
        centers: Centers,
        delta: f64,
        horizon: u32,
        grid: f64,
        /// Half side of the scanned box; defaults to `1.25·delta`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window_half: Option<f64>,
        /// Pass when every ball is at most this wide.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_diameter: Option<f64>,
    },
    Dim {
        cloud: CloudSource,
        epsilon: f64,
        /// Also run the exact oracle (small clouds only).
        #[serde(default)]
        oracle: bool,
    },
    StableSet {
        window: Window,
        grid: f64,
        horizon: u32,
        escape: Escape,
        /// Pass when the Hausdorff distance to the comb sample is at most
        /// this (saddle only).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_hausdorff: Option<f64>,
    },
    Test {
        notion: NotionSpec,
        delta: f64,
        horizon: u32,
        seeds: SeedSource,
    },
    Tangency {
        /// Ascending coefficients of the stable graph.
        stable: Vec<f64>,
        unstable: Vec<f64>,
        r: usize,
        half_window: f64,
    },
    Render {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cloud: Option<CloudSource>,
        /// Draw the comb segments of the saddle.
        #[serde(default)]
        e_segments: bool,
        /// Coordinates to keep when the cloud is three-dimensional.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        project: Option<[usize; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        title: Option<String>,
    },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Catalog => "catalog",
            Operation::Orbit { .. } => "orbit",
            Operation::Ball { .. } => "ball",
            Operation::Dim { .. } => "dim",
            Operation::StableSet { .. } => "stable_set",
            Operation::Test { .. } => "test",
            Operation::Tangency { .. } => "tangency",
            Operation::Render { .. } => "render",
        }
    }
}

fn bad(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<(), RunError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

fn finite(name: &str, v: &[f64]) -> Result<(), RunError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(bad(format!("{name} must be finite")))
    }
}

impl ExperimentConfig {
    /// Parse and validate.
    pub fn from_json(text: &str) -> Result<ExperimentConfig, RunError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            RunError::Config(m) => bad(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// The config without its output directory, as recorded in reports.
    pub fn experiment_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.remove("output_dir");
        }
        v
    }

    /// SHA-256 of the canonical JSON of [`experiment_json`](Self::experiment_json).
    /// Formatting of the source file and the output directory do not enter.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.experiment_json()).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// The catalog system with the configured parameters.
    pub fn build_system(&self) -> Result<DynSystem, RunError> {
        let p = &self.system.params;
        let sys = DynSystem::from_id(&self.system.id).map_err(|e| bad(e.to_string()))?;
        let saddle_params =
            p.levels.is_some() || p.per_level.is_some() || p.include_limit_segments.is_some() || p.integrator_step.is_some();
        match sys {
            DynSystem::IrregularSaddle2d(s) | DynSystem::IrregularSaddle3d(s) if saddle_params => {
                let geom = EGeometry::new(
                    p.levels.unwrap_or(s.geometry.levels()),
                    p.per_level.unwrap_or(s.geometry.per_level()),
                    p.include_limit_segments.unwrap_or(s.geometry.include_limit_segments()),
                )?;
                let integrator = IntegratorConfig {
                    step: p.integrator_step.unwrap_or(s.integrator.step),
                    ..s.integrator
                };
                let s = Saddle::new(geom, integrator)?;
                Ok(if self.system.id == "irregular_saddle_2d" {
                    DynSystem::IrregularSaddle2d(s)
                } else {
                    DynSystem::IrregularSaddle3d(s)
                })
            }
            _ if saddle_params => Err(bad(format!("comb parameters do not apply to {}", self.system.id))),
            DynSystem::SolenoidShift { .. } if p.half_width.is_some() => {
                let k = p.half_width.unwrap_or_default();
                if !(1..=48).contains(&k) {
                    return Err(bad(format!("half_width must lie in 1..=48, got {k}")));
                }
                Ok(DynSystem::SolenoidShift { half_width: k })
            }
            _ if p.half_width.is_some() => Err(bad(format!("half_width does not apply to {}", self.system.id))),
            other => Ok(other),
        }
    }

    /// Range checks that need no computation.
    pub fn validate(&self) -> Result<(), RunError> {
        let sys = self.build_system()?;
        let space_dim = sys.space().map(|t| t.dim());
        let need_space = |what: &str| {
            space_dim.ok_or_else(|| bad(format!("{what} needs a point phase space; {} has none", sys.id())))
        };
        let check_point = |name: &str, p: &[f64], dim: usize| -> Result<(), RunError> {
            finite(name, p)?;
            if p.len() != dim {
                return Err(bad(format!("{name} needs {dim} coordinates, got {}", p.len())));
            }
            Ok(())
        };
        let check_centers = |c: &Centers, dim: Option<usize>| -> Result<(), RunError> {
            match c {
                Centers::Points(v) => {
                    if v.is_empty() {
                        return Err(bad("centers list is empty"));
                    }
                    let dim = dim.unwrap_or(1);
                    v.iter().try_for_each(|p| check_point("center", p, dim))
                }
                Centers::Random(0) => Err(bad("random center count must be positive")),
                Centers::Random(_) => Ok(()),
            }
        };
        match &self.operation {
            Operation::Catalog => {}
            Operation::Orbit { point, back, .. } => {
                let dim = space_dim.unwrap_or(1);
                check_point("point", point, dim)?;
                if *back > 0 && !sys.is_invertible() {
                    return Err(bad(format!("{} is not invertible; back must be 0", sys.id())));
                }
            }
            Operation::Ball {
                centers,
                delta,
                horizon,
                grid,
                window_half,
                max_diameter,
            } => {
                let dim = need_space("ball")?;
                check_centers(centers, Some(dim))?;
                positive("delta", *delta)?;
                positive("grid", *grid)?;
                if *horizon == 0 {
                    return Err(bad("horizon must be at least 1"));
                }
                if let Some(w) = window_half {
                    positive("window_half", *w)?;
                }
                if let Some(m) = max_diameter {
                    positive("max_diameter", *m)?;
                }
            }
            Operation::Dim { cloud, epsilon, .. } => {
                positive("epsilon", *epsilon)?;
                validate_cloud(cloud, &sys)?;
            }
            Operation::StableSet {
                window,
                grid,
                escape,
                max_hausdorff,
                ..
            } => {
                let dim = need_space("stable_set")?;
                check_point("window.lo", &window.lo, dim)?;
                check_point("window.hi", &window.hi, dim)?;
                positive("grid", *grid)?;
                match escape {
                    Escape::SaddleR1 if sys.saddle().is_none() => {
                        return Err(bad("escape rule saddle_r1 needs a saddle system"))
                    }
                    Escape::SaddleR1 => {}
                    Escape::Radius { center, radius } => {
                        check_point("escape.center", center, dim)?;
                        positive("escape.radius", *radius)?;
                    }
                }
                if let Some(m) = max_hausdorff {
                    positive("max_hausdorff", *m)?;
                    if !matches!(sys, DynSystem::IrregularSaddle2d(_)) {
                        return Err(bad("max_hausdorff compares against the comb: irregular_saddle_2d only"));
                    }
                }
            }
            Operation::Test {
                delta, horizon, seeds, ..
            } => {
                positive("delta", *delta)?;
                if *horizon == 0 {
                    return Err(bad("horizon must be at least 1"));
                }
                let solenoid = matches!(sys, DynSystem::SolenoidShift { .. });
                match seeds {
                    SeedSource::Segments { count, length, gap } => {
                        need_space("segment seeds")?;
                        if *count == 0 {
                            return Err(bad("seed count must be positive"));
                        }
                        positive("length", *length)?;
                        positive("gap", *gap)?;
                    }
                    SeedSource::Disks { centers, radius, h } => {
                        if need_space("disk seeds")? != 2 {
                            return Err(bad("disk seeds need a two-dimensional space"));
                        }
                        check_centers(centers, Some(2))?;
                        positive("radius", *radius)?;
                        positive("h", *h)?;
                    }
                    SeedSource::ThinAnnulus { r0, r1, h } => {
                        if !matches!(sys, DynSystem::AnnulusTimeOne) {
                            return Err(bad("thin_annulus seeds need annulus_time_one"));
                        }
                        finite("radii", &[*r0, *r1])?;
                        positive("h", *h)?;
                    }
                    SeedSource::EigenRectangle {
                        center,
                        half_unstable,
                        half_stable,
                        h,
                    } => {
                        if !matches!(sys, DynSystem::CatMap) {
                            return Err(bad("eigen_rectangle seeds need cat_map"));
                        }
                        finite("center", center)?;
                        positive("half_unstable", *half_unstable)?;
                        positive("half_stable", *half_stable)?;
                        positive("h", *h)?;
                    }
                    SeedSource::SolenoidSegments { count, spread, gap } => {
                        if !solenoid {
                            return Err(bad("solenoid_segments seeds need solenoid_shift"));
                        }
                        if *count == 0 {
                            return Err(bad("seed count must be positive"));
                        }
                        positive("spread", *spread)?;
                        positive("gap", *gap)?;
                    }
                }
                if solenoid != matches!(seeds, SeedSource::SolenoidSegments { .. }) {
                    return Err(bad("solenoid_shift is tested with solenoid_segments seeds only"));
                }
            }
            Operation::Tangency {
                stable,
                unstable,
                r,
                half_window,
            } => {
                finite("stable", stable)?;
                finite("unstable", unstable)?;
                if *r == 0 {
                    return Err(bad("r must be at least 1"));
                }
                positive("half_window", *half_window)?;
            }
            Operation::Render {
                cloud, e_segments, project, ..
            } => {
                if let Some(c) = cloud {
                    validate_cloud(c, &sys)?;
                }
                if *e_segments && sys.saddle().is_none() {
                    return Err(bad("e_segments needs a saddle system"));
                }
                if cloud.is_none() && !*e_segments {
                    return Err(bad("render needs a cloud or e_segments"));
                }
                if let Some([a, b]) = project {
                    if a == b || *a > 2 || *b > 2 {
                        return Err(bad(format!("projection axes [{a}, {b}] are invalid")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn validate_cloud(c: &CloudSource, sys: &DynSystem) -> Result<(), RunError> {
    match c {
        CloudSource::Csv { .. } => Ok(()),
        CloudSource::ESample { h } => {
            if sys.saddle().is_none() {
                return Err(bad("e_sample needs a saddle system"));
            }
            positive("h", *h)
        }
        CloudSource::Circle { center, radius, h } => {
            finite("center", center)?;
            positive("radius", *radius)?;
            positive("h", *h)
        }
        CloudSource::Segment { from, to, h } => {
            finite("from", from)?;
            finite("to", to)?;
            positive("h", *h)
        }
        CloudSource::Disk { center, radius, h } => {
            let dim = sys.space().map(|t| t.dim());
            if dim != Some(2) {
                return Err(bad("disk clouds need a two-dimensional space"));
            }
            finite("center", center)?;
            if center.len() != 2 {
                return Err(bad("disk center needs 2 coordinates"));
            }
            positive("radius", *radius)?;
            positive("h", *h)
        }
        CloudSource::EigenRectangle {
            center,
            half_unstable,
            half_stable,
            h,
        } => {
            finite("center", center)?;
            positive("half_unstable", *half_unstable)?;
            positive("half_stable", *half_stable)?;
            positive("h", *h)
        }
    }
}
