//! CSV and JSON artifact formats.
//!
//! Point clouds are written as CSV with one column per stored coordinate,
//! every value in `{:.16e}`, plus a JSON sidecar holding the space, metric
//! and resolution. Reading needs both files.

use std::fs;
use std::path::{Path, PathBuf};

use expansive_core::dimension::{Chart, Cover};
use expansive_core::metric::{ContinuumApprox, Metric, Point, PointCloud, SpaceTag};
use expansive_core::systems::{ESegment, SegmentKind};
use serde::{Deserialize, Serialize};

use crate::RunError;

/// Fixed float rendering used by every CSV writer.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn columns(tag: SpaceTag) -> &'static [&'static str] {
    match tag {
        SpaceTag::Circle => &["theta"],
        SpaceTag::Plane3 => &["x", "y", "z"],
        SpaceTag::Plane2 | SpaceTag::Torus2 | SpaceTag::Annulus => &["x", "y"],
    }
}

/// Sidecar describing a cloud CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudMeta {
    pub space: String,
    pub metric: String,
    pub resolution_h: f64,
    pub points: usize,
    pub columns: Vec<String>,
}

impl CloudMeta {
    pub fn of(c: &PointCloud) -> CloudMeta {
        CloudMeta {
            space: c.tag().name().to_string(),
            metric: Metric::natural(c.tag()).name().to_string(),
            resolution_h: c.resolution_h(),
            points: c.len(),
            columns: columns(c.tag()).iter().map(|s| s.to_string()).collect(),
        }
    }
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    w.into_inner().expect("flushing to memory")
}

pub fn cloud_csv(c: &PointCloud) -> Vec<u8> {
    csv_bytes(columns(c.tag()), c.iter().map(|p| p.coords().iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>()))
}

/// JSON text with a trailing newline.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable value");
    out.push(b'\n');
    out
}

pub fn cloud_meta_json(c: &PointCloud) -> Vec<u8> {
    to_json_bytes(&CloudMeta::of(c))
}

/// Sidecar path of a cloud CSV: same stem, `.json` extension.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Write `c` to `path` and its sidecar next to it.
pub fn write_cloud(path: &Path, c: &PointCloud) -> Result<(), RunError> {
    fs::write(path, cloud_csv(c)).map_err(|e| RunError::io(path, e))?;
    let side = sidecar_path(path);
    fs::write(&side, cloud_meta_json(c)).map_err(|e| RunError::io(side, e))
}

/// Parse a cloud from CSV text and its sidecar.
pub fn parse_cloud(csv_text: &[u8], meta: &CloudMeta) -> Result<PointCloud, RunError> {
    let tag = SpaceTag::from_name(&meta.space)
        .ok_or_else(|| RunError::Config(format!("unknown space `{}` in cloud sidecar", meta.space)))?;
    let want = columns(tag);
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(csv_text);
    let header = r.headers().map_err(|e| RunError::Config(format!("cloud csv: {e}")))?;
    if header.iter().ne(want.iter().copied()) {
        return Err(RunError::Config(format!("cloud csv header must be {}", want.join(","))));
    }
    let mut pts = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| RunError::Config(format!("cloud csv: {e}")))?;
        let coords = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| RunError::Config(format!("cloud csv row {}: {e}", line + 2)))?;
        pts.push(Point::new(tag, &coords)?);
    }
    if pts.len() != meta.points {
        return Err(RunError::Config(format!(
            "cloud csv has {} points, sidecar says {}",
            pts.len(),
            meta.points
        )));
    }
    Ok(if pts.is_empty() {
        PointCloud::empty(tag, meta.resolution_h)?
    } else {
        PointCloud::new(pts, meta.resolution_h)?
    })
}

/// Read a cloud written by [`write_cloud`].
pub fn read_cloud(path: &Path) -> Result<PointCloud, RunError> {
    let text = fs::read(path).map_err(|e| RunError::io(path, e))?;
    let side = sidecar_path(path);
    let meta_text = fs::read(&side).map_err(|e| RunError::io(&side, e))?;
    let meta: CloudMeta = serde_json::from_slice(&meta_text)
        .map_err(|e| RunError::Config(format!("{}: {e}", side.display())))?;
    parse_cloud(&text, &meta)
}

/// Chain as CSV with an index column, in chain order.
pub fn chain_csv(c: &ContinuumApprox) -> Vec<u8> {
    let mut header = vec!["k"];
    header.extend_from_slice(columns(c.tag()));
    csv_bytes(
        &header,
        c.points().iter().enumerate().map(|(k, p)| {
            let mut row = vec![k.to_string()];
            row.extend(p.coords().iter().map(|&v| fmt_f64(v)));
            row
        }),
    )
}

/// Orbit `(n, fⁿ(p))` as CSV.
pub fn orbit_csv(tag: SpaceTag, orbit: &[(i64, Point)]) -> Vec<u8> {
    let mut header = vec!["n"];
    header.extend_from_slice(columns(tag));
    csv_bytes(
        &header,
        orbit.iter().map(|(n, p)| {
            let mut row = vec![n.to_string()];
            row.extend(p.coords().iter().map(|&v| fmt_f64(v)));
            row
        }),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartJson {
    Identity,
    TorusLift { origin: [f64; 2] },
    CircleCut { cut: f64 },
}

impl From<&Chart> for ChartJson {
    fn from(c: &Chart) -> Self {
        match *c {
            Chart::Identity => ChartJson::Identity,
            Chart::TorusLift { origin } => ChartJson::TorusLift { origin },
            Chart::CircleCut { cut } => ChartJson::CircleCut { cut },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxJson {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverJson {
    pub chart: ChartJson,
    pub size: usize,
    pub mesh: f64,
    pub order: usize,
    pub boxes: Vec<BoxJson>,
}

impl CoverJson {
    pub fn of(cover: &Cover) -> CoverJson {
        CoverJson {
            chart: cover.chart().into(),
            size: cover.len(),
            mesh: cover.mesh(),
            order: cover.order(),
            boxes: cover
                .boxes()
                .iter()
                .map(|b| BoxJson {
                    lo: (0..b.dim()).map(|a| b.lo(a)).collect(),
                    hi: (0..b.dim()).map(|a| b.hi(a)).collect(),
                })
                .collect(),
        }
    }
}

pub fn cover_json(cover: &Cover) -> Vec<u8> {
    to_json_bytes(&CoverJson::of(cover))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl From<&ESegment> for SegmentJson {
    fn from(s: &ESegment) -> Self {
        let (kind, level, index) = match s.kind {
            SegmentKind::Base => ("base", None, None),
            SegmentKind::Tooth { level, index } => ("tooth", Some(level), Some(index)),
            SegmentKind::Limit { level } => ("limit", Some(level), None),
        };
        SegmentJson {
            kind: kind.to_string(),
            level,
            index,
            start: s.start,
            end: s.end,
        }
    }
}

pub fn segments_json(segs: &[ESegment]) -> Vec<u8> {
    to_json_bytes(&segs.iter().map(SegmentJson::from).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cloud_round_trip_is_exact() {
        let pts = vec![Point::torus2(0.1, 1.0 / 3.0), Point::torus2(0.7, 0.25)];
        let c = PointCloud::new(pts, 0.01).unwrap();
        let back = parse_cloud(&cloud_csv(&c), &CloudMeta::of(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn csv_uses_scientific_notation() {
        let c = PointCloud::new(vec![Point::circle(0.5)], 0.1).unwrap();
        assert_eq!(String::from_utf8(cloud_csv(&c)).unwrap(), "theta\n5.0000000000000000e-1\n");
    }

    #[test]
    fn point_count_mismatch_is_rejected() {
        let c = PointCloud::new(vec![Point::plane2(0.0, 0.0)], 0.1).unwrap();
        let mut meta = CloudMeta::of(&c);
        meta.points = 2;
        assert!(parse_cloud(&cloud_csv(&c), &meta).is_err());
    }
}
