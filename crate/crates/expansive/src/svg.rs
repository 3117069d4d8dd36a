//! Standalone SVG figures of planar data.
//!
//! Output is a pure function of the layers added: coordinates are printed
//! with fixed precision and elements appear in insertion order.

use std::fmt::Write as _;

use expansive_core::dimension::Cover;
use expansive_core::metric::{ContinuumApprox, Point, PointCloud, SpaceTag};
use expansive_core::systems::ESegment;

use crate::RunError;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 64.0;
const PALETTE: [&str; 6] = ["#1f4e79", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#566573"];

#[derive(Clone, Debug)]
enum Shape {
    Points(Vec<[f64; 2]>),
    Chain(Vec<[f64; 2]>),
    Boxes(Vec<[[f64; 2]; 2]>),
    Segments(Vec<[[f64; 2]; 2]>),
}

#[derive(Clone, Debug)]
struct Layer {
    label: String,
    shape: Shape,
}

/// A figure under construction.
#[derive(Clone, Debug, Default)]
pub struct Figure {
    title: String,
    resolution: Option<f64>,
    bounds: Option<[f64; 4]>,
    layers: Vec<Layer>,
}

fn unsupported_3d(what: &str) -> RunError {
    RunError::Unsupported(format!(
        "{what} is three-dimensional and cannot be drawn; render a planar projection instead \
         (svg::project, or `\"project\": [0, 1]` in a render config for the (x, y) plane)"
    ))
}

/// Planar coordinates used for drawing. Circle angles are placed on the
/// horizontal axis.
fn planar(p: &Point) -> [f64; 2] {
    match p.tag() {
        SpaceTag::Circle => [p.theta(), 0.0],
        _ => [p.x(), p.y()],
    }
}

/// Plane cloud made of two coordinates of a cloud.
pub fn project(c: &PointCloud, axes: [usize; 2]) -> Result<PointCloud, RunError> {
    let dim = c.tag().dim();
    if axes.iter().any(|&a| a >= dim) || axes[0] == axes[1] {
        return Err(RunError::Config(format!(
            "projection axes {axes:?} invalid for {} points",
            c.tag().name()
        )));
    }
    let pts: Vec<Point> = c.iter().map(|p| Point::plane2(p.coords()[axes[0]], p.coords()[axes[1]])).collect();
    Ok(if pts.is_empty() {
        PointCloud::empty(SpaceTag::Plane2, c.resolution_h())?
    } else {
        PointCloud::new(pts, c.resolution_h())?
    })
}

impl Figure {
    pub fn new(title: impl Into<String>) -> Figure {
        Figure {
            title: title.into(),
            ..Figure::default()
        }
    }

    /// Resolution stated in the caption.
    pub fn resolution(mut self, h: f64) -> Figure {
        self.resolution = Some(h);
        self
    }

    /// Fixed data window `[x0, x1] × [y0, y1]`; otherwise fitted to the data.
    pub fn bounds(mut self, x0: f64, x1: f64, y0: f64, y1: f64) -> Figure {
        self.bounds = Some([x0, x1, y0, y1]);
        self
    }

    fn push(&mut self, label: &str, shape: Shape) {
        self.layers.push(Layer {
            label: label.to_string(),
            shape,
        });
    }

    pub fn cloud(&mut self, label: &str, c: &PointCloud) -> Result<&mut Figure, RunError> {
        if c.tag() == SpaceTag::Plane3 {
            return Err(unsupported_3d("point cloud"));
        }
        self.push(label, Shape::Points(c.iter().map(planar).collect()));
        Ok(self)
    }

    pub fn chain(&mut self, label: &str, c: &ContinuumApprox) -> Result<&mut Figure, RunError> {
        if c.tag() == SpaceTag::Plane3 {
            return Err(unsupported_3d("chain"));
        }
        self.push(label, Shape::Chain(c.points().iter().map(planar).collect()));
        Ok(self)
    }

    /// Boxes of `cover` in its chart coordinates.
    pub fn cover(&mut self, label: &str, cover: &Cover) -> Result<&mut Figure, RunError> {
        let mut boxes = Vec::with_capacity(cover.len());
        for b in cover.boxes() {
            match b.dim() {
                1 => boxes.push([[b.lo(0), -b.diameter() / 2.0], [b.hi(0), b.diameter() / 2.0]]),
                2 => boxes.push([[b.lo(0), b.lo(1)], [b.hi(0), b.hi(1)]]),
                _ => return Err(unsupported_3d("cover")),
            }
        }
        self.push(label, Shape::Boxes(boxes));
        Ok(self)
    }

    /// Cloud drawn in the chart coordinates of `cover`, so that it lines up
    /// with the boxes.
    pub fn cloud_in_chart(&mut self, label: &str, c: &PointCloud, cover: &Cover) -> Result<&mut Figure, RunError> {
        if c.tag() == SpaceTag::Plane3 {
            return Err(unsupported_3d("point cloud"));
        }
        let pts = cover.chart().lift(c)?;
        self.push(label, Shape::Points(pts.iter().map(|p| [p.x(), p.y()]).collect()));
        Ok(self)
    }

    pub fn segments(&mut self, label: &str, segs: &[ESegment]) -> &mut Figure {
        self.push(label, Shape::Segments(segs.iter().map(|s| [s.start, s.end]).collect()));
        self
    }

    fn data_bounds(&self) -> [f64; 4] {
        if let Some(b) = self.bounds {
            return b;
        }
        let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        let mut see = |p: [f64; 2]| {
            b[0] = b[0].min(p[0]);
            b[1] = b[1].max(p[0]);
            b[2] = b[2].min(p[1]);
            b[3] = b[3].max(p[1]);
        };
        for l in &self.layers {
            match &l.shape {
                Shape::Points(v) | Shape::Chain(v) => v.iter().copied().for_each(&mut see),
                Shape::Boxes(v) | Shape::Segments(v) => v.iter().flatten().copied().for_each(&mut see),
            }
        }
        if !b[0].is_finite() {
            return [0.0, 1.0, 0.0, 1.0];
        }
        let pad = 0.05 * (b[1] - b[0]).max(b[3] - b[2]).max(1e-6);
        [b[0] - pad, b[1] + pad, b[2] - pad, b[3] + pad]
    }

    /// Number of drawn elements of the layer at `index`.
    pub fn layer_len(&self, index: usize) -> Option<usize> {
        self.layers.get(index).map(|l| match &l.shape {
            Shape::Points(v) | Shape::Chain(v) => v.len(),
            Shape::Boxes(v) | Shape::Segments(v) => v.len(),
        })
    }

    pub fn render(&self) -> String {
        let [x0, x1, y0, y1] = self.data_bounds();
        let plot = SIZE - 2.0 * MARGIN;
        let scale = plot / (x1 - x0).max(y1 - y0);
        let sx = |x: f64| MARGIN + (x - x0) * scale;
        let sy = |y: f64| SIZE - MARGIN - (y - y0) * scale;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text class="title" x="{:.1}" y="24" font-size="16" text-anchor="middle">{}</text>"#,
            SIZE / 2.0,
            escape(&self.title)
        );

        // axes with five ticks each
        let (ax0, ay0, ax1, ay1) = (sx(x0), sy(y0), sx(x1), sy(y1));
        let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#);
        let _ = writeln!(s, r#"<line x1="{ax0:.3}" y1="{ay0:.3}" x2="{ax1:.3}" y2="{ay0:.3}"/>"#);
        let _ = writeln!(s, r#"<line x1="{ax0:.3}" y1="{ay0:.3}" x2="{ax0:.3}" y2="{ay1:.3}"/>"#);
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let (vx, vy) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let _ = writeln!(
                s,
                r#"<line x1="{px:.3}" y1="{ay0:.3}" x2="{px:.3}" y2="{:.3}"/>"#,
                ay0 + 5.0,
                px = sx(vx)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{ax0:.3}" y1="{py:.3}" x2="{:.3}" y2="{py:.3}"/>"#,
                ax0 - 5.0,
                py = sy(vy)
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g class="tick-labels" font-size="11">"#);
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let (vx, vy) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let _ = writeln!(
                s,
                r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{vx:.3}</text>"#,
                sx(vx),
                ay0 + 18.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{vy:.3}</text>"#,
                ax0 - 8.0,
                sy(vy) + 4.0
            );
        }
        let _ = writeln!(s, "</g>");

        for (i, l) in self.layers.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(s, r#"<g class="layer" data-label="{}">"#, escape(&l.label));
            match &l.shape {
                Shape::Points(v) => {
                    for p in v {
                        let _ = writeln!(
                            s,
                            r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="1.2" fill="{color}"/>"#,
                            sx(p[0]),
                            sy(p[1])
                        );
                    }
                }
                Shape::Chain(v) => {
                    let mut pts = String::new();
                    for p in v {
                        let _ = write!(pts, "{:.3},{:.3} ", sx(p[0]), sy(p[1]));
                    }
                    let _ = writeln!(
                        s,
                        r#"<polyline class="chain" points="{}" fill="none" stroke="{color}" stroke-width="1"/>"#,
                        pts.trim_end()
                    );
                }
                Shape::Boxes(v) => {
                    for b in v {
                        let _ = writeln!(
                            s,
                            r#"<rect class="box" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{color}" fill-opacity="0.08" stroke="{color}" stroke-width="0.6"/>"#,
                            sx(b[0][0]),
                            sy(b[1][1]),
                            (b[1][0] - b[0][0]) * scale,
                            (b[1][1] - b[0][1]) * scale
                        );
                    }
                }
                Shape::Segments(v) => {
                    for g in v {
                        let _ = writeln!(
                            s,
                            r#"<line class="segment" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="1"/>"#,
                            sx(g[0][0]),
                            sy(g[0][1]),
                            sx(g[1][0]),
                            sy(g[1][1])
                        );
                    }
                }
            }
            let _ = writeln!(s, "</g>");
        }

        let _ = writeln!(s, r#"<g class="legend" font-size="12">"#);
        let mut row = 0;
        for (i, l) in self.layers.iter().enumerate() {
            if self.layer_len(i) == Some(0) {
                continue;
            }
            let y = MARGIN + 16.0 * row as f64;
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(
                s,
                r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/>"#,
                SIZE - MARGIN - 150.0,
                y - 9.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{y:.1}">{}</text>"#,
                SIZE - MARGIN - 135.0,
                escape(&l.label)
            );
            row += 1;
        }
        let _ = writeln!(s, "</g>");
        let caption = match self.resolution {
            Some(h) => format!("resolution h = {h:e}"),
            None => "resolution not stated".to_string(),
        };
        let _ = writeln!(
            s,
            r#"<text class="resolution" x="{MARGIN:.1}" y="{:.1}" font-size="12">{caption}</text>"#,
            SIZE - 16.0
        );
        s.push_str("</svg>\n");
        s
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
