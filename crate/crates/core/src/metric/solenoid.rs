use alloc::vec::Vec;

use crate::fmath::{powi, wrap01};
use crate::{Error, Result};

/// Finite window `a_{-K}, …, a_K` of a point of the inverse limit of the
/// circle doubling map, together with the entries already shifted out on
/// the past side.
///
/// The window is the measured part; `past` only makes the backward shift
/// an exact inverse of the forward shift.
#[derive(Clone, Debug, PartialEq)]
pub struct SolenoidPoint {
    window: Vec<f64>,
    past: Vec<f64>,
}

impl SolenoidPoint {
    /// Window of length `2K + 1`, entries reduced to `[0, 1)`.
    pub fn new(window: Vec<f64>) -> Result<SolenoidPoint> {
        if window.len() % 2 == 0 {
            return Err(Error::Domain("solenoid window needs odd length 2K + 1".into()));
        }
        if window.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite solenoid entry".into()));
        }
        Ok(SolenoidPoint {
            window: window.into_iter().map(wrap01).collect(),
            past: Vec::new(),
        })
    }

    /// The compatible window whose oldest entry is `a_{-K} = anchor`.
    pub fn from_anchor(anchor: f64, half_width: usize) -> SolenoidPoint {
        let mut window = Vec::with_capacity(2 * half_width + 1);
        let mut a = wrap01(anchor);
        for _ in 0..=2 * half_width {
            window.push(a);
            a = wrap01(2.0 * a);
        }
        SolenoidPoint {
            window,
            past: Vec::new(),
        }
    }

    /// `K`, the half width of the window.
    pub fn half_width(&self) -> usize {
        self.window.len() / 2
    }

    pub fn window(&self) -> &[f64] {
        &self.window
    }

    /// Entry `a_n` for `-K ≤ n ≤ K`.
    pub fn entry(&self, n: i64) -> Option<f64> {
        let k = self.half_width() as i64;
        if n < -k || n > k {
            return None;
        }
        Some(self.window[(n + k) as usize])
    }

    /// Whether consecutive entries satisfy `a_{n+1} = 2 a_n mod 1`.
    pub fn is_compatible(&self, tol: f64) -> bool {
        self.window.windows(2).all(|w| {
            let d = (wrap01(2.0 * w[0]) - w[1]).abs();
            d.min(1.0 - d) <= tol
        })
    }

    /// Shift map `g(a)_n = a_{n+1}`.
    pub fn shift(&self) -> SolenoidPoint {
        let mut window = Vec::with_capacity(self.window.len());
        window.extend_from_slice(&self.window[1..]);
        window.push(wrap01(2.0 * self.window[self.window.len() - 1]));
        let mut past = self.past.clone();
        past.push(self.window[0]);
        SolenoidPoint { window, past }
    }

    /// Inverse shift. The entry that enters the window comes from the
    /// recorded past when available, otherwise the preimage branch
    /// `a_{-K} / 2` is taken.
    pub fn unshift(&self) -> SolenoidPoint {
        let mut past = self.past.clone();
        let first = past.pop().unwrap_or(self.window[0] / 2.0);
        let mut window = Vec::with_capacity(self.window.len());
        window.push(first);
        window.extend_from_slice(&self.window[..self.window.len() - 1]);
        SolenoidPoint { window, past }
    }

    /// Midpoint obtained by interpolating the oldest entry on the short arc
    /// and regenerating the window from it.
    pub fn midpoint(&self, other: &SolenoidPoint) -> SolenoidPoint {
        let a = self.window[0];
        let b = other.window[0];
        let m = wrap01(a + 0.5 * crate::fmath::wrap_half(b - a));
        SolenoidPoint::from_anchor(m, self.half_width())
    }

    /// Bound on the contribution of the entries outside the window.
    pub fn tail_bound(&self) -> f64 {
        powi(2.0, 1 - self.half_width() as i32)
    }
}

/// `Σ_{|n| ≤ K} d(a_n, b_n) / 2^{|n|}` with `d` the arc metric of the circle.
///
/// The omitted tail is at most [`SolenoidPoint::tail_bound`].
pub fn solenoid_distance(a: &SolenoidPoint, b: &SolenoidPoint) -> Result<f64> {
    if a.window.len() != b.window.len() {
        return Err(Error::SpaceMismatch(alloc::format!(
            "solenoid windows of half width {} and {}",
            a.half_width(),
            b.half_width()
        )));
    }
    let k = a.half_width() as i64;
    let mut sum = 0.0;
    for (j, (x, y)) in a.window.iter().zip(&b.window).enumerate() {
        let n = j as i64 - k;
        let d = (x - y).abs();
        sum += d.min(1.0 - d) / powi(2.0, n.unsigned_abs() as i32);
    }
    Ok(sum)
}
