use alloc::vec;
use alloc::vec::Vec;

use super::cover::max_depth;
use super::{check_epsilon, Chart, OpenBox};
use crate::metric::PointCloud;
use crate::{Error, Result};

/// Largest cloud accepted by [`dim_eps_oracle`].
pub const ORACLE_LIMIT: usize = 12;

/// Exact least order over covers by open boxes of diameter below ε in
/// which every sample ball lies inside one box.
///
/// Any such cover assigns each sample to a box; shrinking every box to the
/// bounding box of its assigned balls (grown by `η = 1e-9 ε`) keeps the
/// cover and never adds overlaps. So the search runs over partitions of the
/// samples into blocks whose tight boxes have diameter below ε.
pub fn dim_eps_oracle(c: &PointCloud, epsilon: f64) -> Result<usize> {
    if c.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            size: c.len(),
            limit: ORACLE_LIMIT,
        });
    }
    check_epsilon(c, epsilon)?;
    c.require_nonempty()?;
    let chart = Chart::for_cloud(c, epsilon)?;
    let pts = chart.lift(c)?;
    let dim = chart.target_dim(c.tag());
    let pad = c.resolution_h() + 1e-9 * epsilon;
    let n = pts.len();

    let full = (1usize << n) - 1;
    let mut blocks: Vec<Option<OpenBox>> = vec![None; full + 1];
    for (mask, slot) in blocks.iter_mut().enumerate().skip(1) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for (_, p) in pts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1) {
            for a in 0..dim {
                lo[a] = lo[a].min(p.coords()[a] - pad);
                hi[a] = hi[a].max(p.coords()[a] + pad);
            }
        }
        let b = OpenBox::from_bounds(dim, lo, hi);
        if b.diameter() < epsilon {
            *slot = Some(b);
        }
    }
    if (0..n).any(|i| blocks[1 << i].is_none()) {
        return Err(Error::Precondition(alloc::format!(
            "a sample ball does not fit in a box of diameter < {epsilon}"
        )));
    }
    for k in 0..n {
        if search(&blocks, full, 0, k + 1, &mut Vec::new()) {
            return Ok(k);
        }
    }
    Ok(n - 1)
}

/// Depth-first search over partitions: the next block holds the lowest
/// uncovered sample, and the union of boxes keeps depth ≤ `limit`.
fn search(blocks: &[Option<OpenBox>], full: usize, covered: usize, limit: usize, chosen: &mut Vec<OpenBox>) -> bool {
    if covered == full {
        return true;
    }
    let rest = !covered & full;
    let first = rest & rest.wrapping_neg();
    let others = rest & !first;
    let mut sub = others;
    loop {
        if let Some(b) = blocks[sub | first] {
            let clipped: Vec<OpenBox> = chosen.iter().filter_map(|o| o.clip(&b)).collect();
            let refs: Vec<&OpenBox> = clipped.iter().collect();
            if max_depth(&refs, 0, b.dim()) < limit {
                chosen.push(b);
                if search(blocks, full, covered | sub | first, limit, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & others;
    }
}
