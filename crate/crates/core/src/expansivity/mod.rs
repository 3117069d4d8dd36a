//! Finite-horizon measurements of expansivity: dynamical balls, chain
//! iteration, per-notion testers, stable-set scans and intersection
//! clusters.
//!
//! Every "for all n ∈ ℤ" is truncated to `|n| ≤ horizon`. A tester passes
//! when every seed meets the notion's criterion within the horizon; it
//! fails only when some seed never does *and* carries a verified witness
//! family (an invariant set, an isometric orbit, or an exactly iterated
//! eigen-rectangle) that extends the observation to all times. Anything
//! else is inconclusive.

mod ball;
mod notion;
mod phase;
mod scan;
mod seeds;

pub use ball::{dynamical_ball, DynBallResult};
pub use notion::{test_notion, test_solenoid_notion, DimSample, FamilyCheck, SeedOutcome};
pub use phase::{continuum_iterate, MAX_CHAIN_POINTS};
pub use scan::{cluster_intersections, stable_set_scan, EscapeRule, ScanWindow};
pub use seeds::{
    disk_seed, eigen_rectangle_cloud, eigen_rectangle_seed, segment_seeds, solenoid_segment, thin_annulus_seed,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::metric::{ContinuumApprox, Point, PointCloud, SolenoidPoint};

/// Default truncation of two-sided quantifiers.
pub const DEFAULT_HORIZON: u32 = 40;

/// The expansivity notions that can be tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notion {
    /// Dynamical balls around seed anchors reduce to the anchor.
    Expansive,
    /// Dynamical balls around seed anchors keep at most `n` seed points.
    NExpansive { n: usize },
    /// Every seed continuum reaches diameter `δ`.
    Cw,
    /// Seeds of dimension `> d` reach diameter `δ`.
    Partial { d: usize },
    /// Seeds of dimension `> d` reach σ-dimension `> d` (two-sided).
    Dw { d: usize },
    /// As `Dw`, forward iterates only.
    PositiveDw { d: usize },
    /// Some seed point separates from the anchor by more than `δ`.
    Sensitivity,
}

impl Notion {
    pub fn name(&self) -> &'static str {
        match self {
            Notion::Expansive => "expansive",
            Notion::NExpansive { .. } => "n_expansive",
            Notion::Cw => "cw",
            Notion::Partial { .. } => "partial",
            Notion::Dw { .. } => "dw",
            Notion::PositiveDw { .. } => "positive_dw",
            Notion::Sensitivity => "sensitivity",
        }
    }

    pub(crate) fn forward_only(&self) -> bool {
        matches!(self, Notion::PositiveDw { .. })
    }
}

/// Notion, scale (`δ`, `ε` or `σ`) and horizon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NotionParams {
    pub notion: Notion,
    pub delta: f64,
    pub horizon: u32,
}

/// Construction-level knowledge that turns a finite observation into a
/// statement about all iterates.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `f(C) = C` as a set; checked as `hausdorff(fⁿ(C), C) ≤ 2h`.
    InvariantSet,
    /// `f` preserves distances between the seed points; checked on
    /// consecutive points and against the anchor.
    IsometricOrbit,
    /// Cat-map parallelogram `center + s·u + t·v`, `|s| ≤ half_unstable`,
    /// `|t| ≤ half_stable`, with `u`, `v` the unit eigenvectors. Its
    /// iterates are parallelograms of the same kind, computed exactly.
    EigenRectangle {
        center: Point,
        half_unstable: f64,
        half_stable: f64,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::InvariantSet => "invariant_set",
            Family::IsometricOrbit => "isometric_orbit",
            Family::EigenRectangle { .. } => "eigen_rectangle",
        }
    }
}

/// Point set a seed is made of.
#[derive(Clone, Debug, PartialEq)]
pub enum SeedSet {
    Cloud(PointCloud),
    Chain(ContinuumApprox),
}

impl SeedSet {
    pub fn points(&self) -> &[Point] {
        match self {
            SeedSet::Cloud(c) => c.points(),
            SeedSet::Chain(c) => c.points(),
        }
    }
}

/// A seed set with its dimension by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub set: SeedSet,
    /// Topological dimension of the represented set, known by construction.
    pub dim: usize,
    pub family: Option<Family>,
    /// Reference point for ball-type notions; defaults to the first point.
    pub anchor: Option<Point>,
}

impl Seed {
    /// A chain, dimension 1.
    pub fn chain(c: ContinuumApprox) -> Seed {
        Seed {
            set: SeedSet::Chain(c),
            dim: 1,
            family: None,
            anchor: None,
        }
    }

    pub fn cloud(c: PointCloud, dim: usize) -> Seed {
        Seed {
            set: SeedSet::Cloud(c),
            dim,
            family: None,
            anchor: None,
        }
    }

    pub fn with_family(mut self, family: Family) -> Seed {
        self.family = Some(family);
        self
    }

    pub fn with_anchor(mut self, anchor: Point) -> Seed {
        self.anchor = Some(anchor);
        self
    }

    pub fn anchor_point(&self) -> Option<Point> {
        self.anchor.or_else(|| self.set.points().first().copied())
    }
}

/// A chain of solenoid windows.
#[derive(Clone, Debug, PartialEq)]
pub struct SolenoidSeed {
    pub points: Vec<SolenoidPoint>,
    pub gap_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Deterministic work counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub map_evaluations: u64,
    pub dimension_estimates: u64,
    pub largest_chain: usize,
}

/// Verdict with per-seed evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansivityReport {
    pub system: &'static str,
    pub params: NotionParams,
    pub verdict: Verdict,
    pub reason: String,
    /// False when only forward iterates were examined.
    pub two_sided: bool,
    pub outcomes: Vec<SeedOutcome>,
    pub stats: RunStats,
}

/// Iterate order `0, 1, −1, 2, −2, …` (or `0, 1, 2, …`).
pub(crate) fn search_order(horizon: u32, two_sided: bool) -> impl Iterator<Item = i64> {
    let h = horizon as i64;
    (0..=h).flat_map(move |k| {
        let back = if two_sided && k > 0 { Some(-k) } else { None };
        core::iter::once(k).chain(back)
    })
}
