use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::bricks::bricks;
use super::path::path_boxes;
use super::{check_epsilon, cover_order, BrickLayout, Chart, Cover, OpenBox, BRICK_SCALES};
use crate::fmath::sqrt;
use crate::metric::{chain_components_of, diameter_of, ContinuumApprox, GridIndex, Metric, Point, PointCloud};
use crate::Result;

/// Bracket `lower ≤ dim_ε ≤ upper` with the evidence for both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct DimEstimate {
    pub epsilon: f64,
    pub lower: usize,
    pub upper: usize,
    /// Cover with mesh < ε and order `upper`, containing every sample ball.
    pub witness_cover: Cover,
    /// Chain with gaps ≤ 2h and diameter ≥ ε when `lower == 1`.
    pub witness_chain: Option<ContinuumApprox>,
    /// Number of candidate covers examined.
    pub candidates: usize,
}

/// Estimate of the ε-dimension of the set represented by `c`.
///
/// The upper bound is the least order among staggered brick covers (every
/// offset and scale), the path cover when it applies, and the cover by
/// disjoint cluster boxes when every cluster is smaller than ε.
/// The lower bound is 1 when a `2h`-chain component of `c` has diameter at
/// least ε.
pub fn dim_eps_estimate(c: &PointCloud, epsilon: f64) -> Result<DimEstimate> {
    dim_eps_estimate_with(c, epsilon, &[])
}

/// As [`dim_eps_estimate`], also considering `extra` covers. An extra cover
/// counts only if its mesh is below ε, its chart is isometric for `c` and it
/// contains every sample ball.
pub fn dim_eps_estimate_with(c: &PointCloud, epsilon: f64, extra: &[Cover]) -> Result<DimEstimate> {
    check_epsilon(c, epsilon)?;
    c.require_nonempty()?;
    let chart = Chart::for_cloud(c, epsilon)?;
    let pts = chart.lift(c)?;
    let dim = chart.target_dim(c.tag());
    let h = c.resolution_h();

    let (lower, witness_chain) = lower_bound(c, epsilon);

    let mut candidates = 0;
    let mut best: Option<(usize, Cover)> = None;
    let mut offer = |cover: Cover, best: &mut Option<(usize, Cover)>| {
        candidates += 1;
        let order = cover_order(&cover);
        if best.as_ref().is_none_or(|(o, _)| order < *o) {
            *best = Some((order, cover));
        }
    };

    if let Some(boxes) = path_boxes(&pts, dim, h, epsilon) {
        let cover = Cover::new(boxes, chart)?;
        if cover.mesh() < epsilon {
            offer(cover, &mut best);
        }
    }
    if let Some(boxes) = cluster_boxes(&pts, dim, h, epsilon) {
        offer(Cover::new(boxes, chart)?, &mut best);
    }
    for layout in BrickLayout::all(dim) {
        if best.as_ref().is_some_and(|(o, _)| *o <= lower) {
            break;
        }
        let scale = BRICK_SCALES[layout.scale_index];
        if let Some(boxes) = bricks(&pts, dim, h, epsilon, scale, layout.offset_bits) {
            let cover = Cover::new(boxes, chart)?;
            if cover.mesh() < epsilon {
                offer(cover, &mut best);
            }
        }
    }
    for cover in extra {
        if cover.mesh() < epsilon && cover.chart().is_isometric_for(c) && cover.covers_with_resolution(c) {
            offer(cover.clone(), &mut best);
        }
    }

    let (upper, witness_cover) = best.ok_or_else(|| {
        crate::Error::Precondition(alloc::format!("no admissible cover at epsilon = {epsilon}"))
    })?;
    Ok(DimEstimate {
        epsilon,
        lower,
        upper,
        witness_cover,
        witness_chain,
        candidates,
    })
}

/// Tight boxes around groups of samples whose padded balls overlap,
/// merged until pairwise disjoint; `None` once a group reaches ε.
fn cluster_boxes(pts: &[Point], dim: usize, h: f64, epsilon: f64) -> Option<Vec<OpenBox>> {
    let pad = h + 1e-9 * epsilon;
    let reach = 2.0 * pad * sqrt(dim as f64);
    let mut boxes: Vec<OpenBox> = chain_components_of(pts, reach, Metric::Euclidean)
        .into_iter()
        .map(|comp| {
            let mut lo = [f64::INFINITY; 3];
            let mut hi = [f64::NEG_INFINITY; 3];
            for &i in &comp {
                for a in 0..dim {
                    lo[a] = lo[a].min(pts[i].coords()[a] - pad);
                    hi[a] = hi[a].max(pts[i].coords()[a] + pad);
                }
            }
            OpenBox::from_bounds(dim, lo, hi)
        })
        .collect();
    if boxes.len() > CLUSTER_MERGE_LIMIT {
        return None;
    }
    let mut merged = true;
    while merged {
        if boxes.iter().any(|b| b.diameter() >= epsilon) {
            return None;
        }
        merged = false;
        'scan: for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].intersects(&boxes[j]) {
                    let (a, b) = (boxes[i], boxes.swap_remove(j));
                    boxes[i] = OpenBox::from_bounds(
                        dim,
                        core::array::from_fn(|k| if k < dim { a.lo(k).min(b.lo(k)) } else { 0.0 }),
                        core::array::from_fn(|k| if k < dim { a.hi(k).max(b.hi(k)) } else { 0.0 }),
                    );
                    merged = true;
                    break 'scan;
                }
            }
        }
    }
    Some(boxes)
}

/// Most groups [`cluster_boxes`] merges pairwise.
const CLUSTER_MERGE_LIMIT: usize = 2000;

/// Lower bound alone: 1 with a witness chain when some `2h`-chain
/// component has diameter ≥ ε, else 0. Works for wrapping periodic clouds.
pub fn dim_eps_lower(c: &PointCloud, epsilon: f64) -> Result<(usize, Option<ContinuumApprox>)> {
    check_epsilon(c, epsilon)?;
    Ok(lower_bound(c, epsilon))
}

fn lower_bound(c: &PointCloud, epsilon: f64) -> (usize, Option<ContinuumApprox>) {
    let metric = Metric::natural(c.tag());
    let delta = 2.0 * c.resolution_h();
    let pts = c.points();
    for comp in chain_components_of(pts, delta, metric) {
        let first = comp[0];
        let far = comp
            .iter()
            .map(|&j| (metric.dist(&pts[first], &pts[j]), j))
            .fold((0.0, first), |a, b| if b.0 > a.0 { b } else { a });
        let (i, j) = if far.0 >= epsilon {
            (first, far.1)
        } else {
            let d = diameter_of(pts, &comp, metric);
            if d.value < epsilon {
                continue;
            }
            (d.i, d.j)
        };
        let chain = chain_path(pts, delta, metric, i, j);
        return (1, Some(ContinuumApprox::from_parts_unchecked(chain, delta)));
    }
    (0, None)
}

/// Fewest-hop `delta`-chain from `pts[from]` to `pts[to]`.
fn chain_path(pts: &[Point], delta: f64, metric: Metric, from: usize, to: usize) -> Vec<Point> {
    let index = GridIndex::new(pts, metric, delta);
    let mut parent = vec![usize::MAX; pts.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(i) = queue.pop_front() {
        if i == to {
            break;
        }
        index.for_each_within(&pts[i], delta, |j, _| {
            if parent[j] == usize::MAX {
                parent[j] = i;
                queue.push_back(j);
            }
        });
    }
    let mut path = vec![pts[to]];
    let mut k = to;
    while k != from {
        k = parent[k];
        path.push(pts[k]);
    }
    path.reverse();
    path
}
