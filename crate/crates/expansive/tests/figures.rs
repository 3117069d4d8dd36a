use expansive::formats::{parse_cloud, read_cloud, write_cloud, CloudMeta, cloud_csv, CoverJson};
use expansive::svg::Figure;
use expansive_core::dimension::dim_eps_estimate;
use expansive_core::metric::{ContinuumApprox, Point, PointCloud, SpaceTag};
use expansive_core::systems::{EGeometry, SegmentKind};
use proptest::prelude::*;

fn count(svg: &str, class: &str) -> usize {
    svg.matches(&format!(r#"class="{class}""#)).count()
}

#[test]
fn empty_cloud_gives_axes_only() {
    let mut fig = Figure::new("nothing");
    fig.cloud("empty", &PointCloud::empty(SpaceTag::Plane2, 0.1).unwrap()).unwrap();
    let svg = fig.resolution(0.1).render();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(count(&svg, "axes"), 1);
    assert_eq!(count(&svg, "point"), 0);
    let legend = &svg[svg.find(r#"class="legend""#).unwrap()..];
    assert!(!legend[..legend.find("</g>").unwrap()].contains("<rect"), "legend entry for an empty layer");
    assert!(svg.contains("resolution h = 1e-1"));
}

#[test]
fn cover_box_count_matches_cover_size() {
    for (n, eps) in [(50usize, 0.1), (200, 0.05), (400, 0.3)] {
        let pts = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64 * std::f64::consts::TAU;
                Point::plane2(0.4 * t.cos(), 0.25 * (2.0 * t).sin())
            })
            .collect();
        let c = PointCloud::new(pts, 0.01).unwrap();
        let est = dim_eps_estimate(&c, eps).unwrap();
        let mut fig = Figure::new("cover");
        fig.cover("boxes", &est.witness_cover).unwrap();
        fig.cloud_in_chart("samples", &c, &est.witness_cover).unwrap();
        let svg = fig.render();
        assert_eq!(count(&svg, "box"), est.witness_cover.len());
        assert_eq!(count(&svg, "point"), n);
        assert_eq!(CoverJson::of(&est.witness_cover).boxes.len(), est.witness_cover.len());
    }
}

#[test]
fn e_figure_has_base_teeth_and_limits() {
    let g = EGeometry::new(3, 5, true).unwrap();
    let segs = g.segments();
    let mut fig = Figure::new("E");
    fig.segments("E", &segs);
    let svg = fig.render();
    assert_eq!(count(&svg, "segment"), 1 + 3 * 5 + 3);
    assert_eq!(segs[0].kind, SegmentKind::Base);
    // teeth are vertical, as tall as their abscissa
    for s in &segs[1..] {
        assert_eq!(s.start[0], s.end[0]);
        assert_eq!((s.start[1], s.end[1]), (0.0, s.start[0]));
    }
    // the tallest tooth of level 1 is C(1)
    assert!(segs.iter().any(|s| s.start[0] == 1.0));
}

#[test]
fn rendering_is_deterministic_and_ordered() {
    let chain = ContinuumApprox::segment(Point::plane2(0.0, 0.0), Point::plane2(1.0, 0.5), 0.1).unwrap();
    let build = || {
        let mut f = Figure::new("twice").bounds(0.0, 1.0, 0.0, 1.0);
        f.chain("chain", &chain).unwrap();
        f.cloud("pts", &chain.to_cloud()).unwrap();
        f.render()
    };
    let (a, b) = (build(), build());
    assert_eq!(a, b);
    assert!(a.find("polyline").unwrap() < a.find(r#"class="point""#).unwrap());
}

#[test]
fn circle_clouds_render_on_the_horizontal_axis() {
    let c = PointCloud::new(vec![Point::circle(0.25), Point::circle(0.75)], 0.01).unwrap();
    let mut fig = Figure::new("circle");
    fig.cloud("angles", &c).unwrap();
    assert_eq!(count(&fig.render(), "point"), 2);
}

#[test]
fn written_clouds_read_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    for c in [
        PointCloud::new(vec![Point::plane3(1e-300, -2.5, 7.0)], 0.5).unwrap(),
        PointCloud::new(vec![Point::annulus_polar(1.5, 2.0).unwrap()], 1e-3).unwrap(),
        PointCloud::empty(SpaceTag::Torus2, 0.25).unwrap(),
    ] {
        let path = dir.path().join(format!("{}.csv", c.tag().name()));
        write_cloud(&path, &c).unwrap();
        assert_eq!(read_cloud(&path).unwrap(), c);
    }
    assert!(read_cloud(&dir.path().join("missing.csv")).is_err());
}

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(xs in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..40), h in 1e-9f64..1.0) {
        let c = PointCloud::new(xs.iter().map(|&(x, y)| Point::plane2(x, y)).collect(), h).unwrap();
        let back = parse_cloud(&cloud_csv(&c), &CloudMeta::of(&c)).unwrap();
        prop_assert_eq!(back, c);
    }
}
