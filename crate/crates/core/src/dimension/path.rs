use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::{check_epsilon, cover_order, Chart, Cover, OpenBox};
use crate::fmath::{floor, sqrt};
use crate::metric::{GridIndex, Metric, Point, PointCloud};
use crate::Result;

/// Order-one cover along a curve-like cloud, or `None` when the cloud does
/// not look like a path or cycle at this scale.
///
/// Samples are grouped around a greedy net (lexicographic order). Two groups
/// are adjacent when they contain samples at most `2h` apart; if some group
/// has more than two neighbours the construction gives up. Otherwise each
/// group becomes its bounding box plus a `1.05 h` margin, and the result is
/// returned only if it really has order ≤ 1 and mesh < ε.
pub fn path_cover(c: &PointCloud, epsilon: f64) -> Result<Option<Cover>> {
    check_epsilon(c, epsilon)?;
    let chart = Chart::for_cloud(c, epsilon)?;
    let pts = chart.lift(c)?;
    let dim = chart.target_dim(c.tag());
    Ok(path_boxes(&pts, dim, c.resolution_h(), epsilon).and_then(|boxes| {
        let cover = Cover::new(boxes, chart).ok()?;
        (cover.mesh() < epsilon && cover_order(&cover) <= 1).then_some(cover)
    }))
}

fn cell_key(x: &[f64], cell: f64) -> [i64; 3] {
    let mut k = [0i64; 3];
    for (a, v) in x.iter().enumerate() {
        k[a] = floor(v / cell) as i64;
    }
    k
}

fn neighbours(key: [i64; 3], dim: usize) -> impl Iterator<Item = [i64; 3]> {
    let r2 = if dim == 3 { 1 } else { 0 };
    (-1..=1).flat_map(move |a| {
        (-1..=1).flat_map(move |b| (-r2..=r2).map(move |c| [key[0] + a, key[1] + b, key[2] + c]))
    })
}

fn sq(p: &Point, q: &Point) -> f64 {
    p.coords().iter().zip(q.coords()).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub(crate) fn path_boxes(pts: &[Point], dim: usize, h: f64, epsilon: f64) -> Option<Vec<OpenBox>> {
    let m = 1.05 * h;
    let r = (epsilon / 4.0).min(0.95 * (epsilon / (2.0 * sqrt(dim as f64)) - m));
    if !(r > 0.0) || pts.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].lex_cmp(&pts[b]).then(a.cmp(&b)));

    // greedy r-net
    let mut centers: Vec<usize> = Vec::new();
    let mut grid: BTreeMap<[i64; 3], Vec<usize>> = BTreeMap::new();
    for &i in &order {
        let key = cell_key(pts[i].coords(), r);
        let near = neighbours(key, dim).any(|k| {
            grid.get(&k)
                .is_some_and(|list| list.iter().any(|&c| sq(&pts[centers[c]], &pts[i]) <= r * r))
        });
        if !near {
            grid.entry(key).or_default().push(centers.len());
            centers.push(i);
        }
    }

    // nearest-centre assignment
    let mut group = vec![0usize; pts.len()];
    for (i, p) in pts.iter().enumerate() {
        let key = cell_key(p.coords(), r);
        let mut best = (f64::INFINITY, usize::MAX);
        for k in neighbours(key, dim) {
            if let Some(list) = grid.get(&k) {
                for &c in list {
                    let d = sq(&pts[centers[c]], p);
                    if d < best.0 || (d == best.0 && c < best.1) {
                        best = (d, c);
                    }
                }
            }
        }
        group[i] = best.1;
    }

    // adjacency of groups through samples at most 2h apart
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let index = GridIndex::new(pts, Metric::Euclidean, 2.0 * h);
    for (i, p) in pts.iter().enumerate() {
        index.for_each_within(p, 2.0 * h, |j, _| {
            let (a, b) = (group[i], group[j]);
            if a < b {
                edges.insert((a, b));
            }
        });
    }
    let mut degree = vec![0usize; centers.len()];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
        if degree[a] > 2 || degree[b] > 2 {
            return None;
        }
    }

    let mut lo = vec![[f64::INFINITY; 3]; centers.len()];
    let mut hi = vec![[f64::NEG_INFINITY; 3]; centers.len()];
    for (i, p) in pts.iter().enumerate() {
        let g = group[i];
        for a in 0..dim {
            lo[g][a] = lo[g][a].min(p.coords()[a] - m);
            hi[g][a] = hi[g][a].max(p.coords()[a] + m);
        }
    }
    Some((0..centers.len()).map(|g| OpenBox::from_bounds(dim, lo[g], hi[g])).collect())
}
