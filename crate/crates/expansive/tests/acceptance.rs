//! Acceptance criteria. Each test prints one `ACCEPT` line with the
//! measured value and its threshold, then asserts it.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use expansive_core::dimension::{dim_eps_estimate, dim_eps_estimate_with, dim_eps_oracle};
use expansive_core::expansivity::{
    continuum_iterate, disk_seed, dynamical_ball, eigen_rectangle_seed, segment_seeds, solenoid_segment,
    stable_set_scan, test_notion, test_solenoid_notion, thin_annulus_seed, EscapeRule, Notion, NotionParams,
    ScanWindow, Seed, SeedSet, Verdict,
};
use expansive_core::metric::{directed_hausdorff, ContinuumApprox, Metric, Point, PointCloud};
use expansive_core::systems::{doubling_arc, in_r1, piecewise_t, DynSystem, EGeometry, Saddle};
use expansive_core::tangency::{local_ball_cardinality_bound, sturm_root_count, JetPair, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, name: &str, pass: bool, measured: String, threshold: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPT #{id} {name}: {tag} measured {measured}; threshold {threshold}");
    assert!(pass, "criterion {id} ({name}): measured {measured}, threshold {threshold}");
}

fn saddle() -> DynSystem {
    DynSystem::from_id("irregular_saddle_2d").unwrap()
}

fn params(notion: Notion, delta: f64, horizon: u32) -> NotionParams {
    NotionParams { notion, delta, horizon }
}

#[test]
fn criterion_01_saddle_stable_set() {
    let sys = saddle();
    let grid = 1.0 / 512.0;
    let t = Instant::now();
    let scan = stable_set_scan(&sys, &ScanWindow::unit(2).unwrap(), grid, 60, &EscapeRule::SaddleR1).unwrap();
    let elapsed = t.elapsed();
    let e = sys.saddle().unwrap().geometry.sample(grid / 2.0).unwrap();
    let to_e = directed_hausdorff(&scan, &e, Metric::Euclidean).unwrap();
    let from_e = directed_hausdorff(&e, &scan, Metric::Euclidean).unwrap();
    let d = to_e.max(from_e);
    verdict(
        1,
        "saddle stable set, grid 1/512, horizon 60",
        d <= 0.01 && elapsed <= Duration::from_secs(120),
        format!("Hausdorff {d:.6} (scan->E {to_e:.6}, E->scan {from_e:.6}) in {:.1} s", elapsed.as_secs_f64()),
        "<= 0.01 within 120 s",
    );
}

/// `dist(p, E)` by brute force over the segment list.
fn rho_brute(g: &EGeometry, x: f64, y: f64) -> f64 {
    g.segments()
        .iter()
        .map(|s| {
            let (ax, ay, bx, by) = (s.start[0], s.start[1], s.end[0], s.end[1]);
            let (dx, dy) = (bx - ax, by - ay);
            let t = (((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
            (x - ax - t * dx).hypot(y - ay - t * dy)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_02_rho_halves_under_t() {
    let g = EGeometry::default();
    let p0 = Point::plane2(0.0, 0.0);
    let _ = g.rho(&p0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<(f64, f64)> = (0..10_000)
        .map(|_| {
            let (a, b): (f64, f64) = (rng.random(), rng.random());
            (a.max(b), a.min(b))
        })
        .collect();
    let t = Instant::now();
    let mut worst = 0.0f64;
    for &(x, y) in &samples {
        assert!(in_r1(x, y));
        let (u, v) = piecewise_t(x, y);
        let lhs = g.rho(&Point::plane2(u, v));
        let rhs = 0.5 * g.rho(&Point::plane2(x, y));
        worst = worst.max((lhs - rhs).abs());
    }
    let elapsed = t.elapsed();
    // spot check the fast evaluator against the brute segment scan
    for &(x, y) in samples.iter().take(200) {
        assert!((g.rho(&Point::plane2(x, y)) - rho_brute(&g, x, y)).abs() <= 1e-12);
    }
    verdict(
        2,
        "rho(T p) = rho(p)/2 on 10^4 points of R1",
        worst <= 1e-9 && elapsed <= Duration::from_secs(1),
        format!("max deviation {worst:.3e} in {:.3} s", elapsed.as_secs_f64()),
        "<= 1e-9 within 1 s",
    );
}

#[test]
fn criterion_03_e_moves_by_halving() {
    let base = saddle();
    let g = &base.saddle().unwrap().geometry;
    let segs = g.segments();
    // 20 halvings carry the deepest sampled tooth 20 levels down
    let deep = EGeometry::new(g.levels() + 20, g.per_level(), true).unwrap();
    let sys = DynSystem::IrregularSaddle2d(Saddle::new(deep, base.saddle().unwrap().integrator).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let s = &segs[rng.random_range(0..segs.len())];
        let t: f64 = rng.random();
        let p = Point::plane2(s.start[0] + t * (s.end[0] - s.start[0]), s.start[1] + t * (s.end[1] - s.start[1]));
        let mut q = p;
        for n in 1..=20 {
            q = sys.iterate(&q, 1).unwrap();
            let scale = 0.5f64.powi(n);
            worst = worst.max((q.x() - p.x() * scale).hypot(q.y() - p.y() * scale));
        }
    }
    verdict(
        3,
        "f^n(p) = p/2^n on 10^3 points of E, n <= 20",
        worst <= 1e-7,
        format!("max |f^n(p) - p/2^n| = {worst:.3e}"),
        "<= 1e-7",
    );
}

#[test]
fn criterion_04_cat_balls_are_tiny() {
    let sys = DynSystem::CatMap;
    let (delta, horizon, grid) = (0.05, 20, 5e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut widest, mut slowest) = (0.0f64, Duration::ZERO);
    let mut clean = true;
    for _ in 0..5 {
        let x = Point::torus2(rng.random(), rng.random());
        let t = Instant::now();
        let b = dynamical_ball(&sys, &x, delta, horizon, grid, &ScanWindow::around(&x, 1.25 * delta).unwrap()).unwrap();
        slowest = slowest.max(t.elapsed());
        widest = widest.max(b.diameter);
        clean &= !b.touches_boundary;
    }
    verdict(
        4,
        "cat-map dynamical balls at 5 random centers",
        clean && widest <= 4.0 * grid && slowest <= Duration::from_secs(60),
        format!("max diameter {widest:.3e}, slowest center {:.2} s", slowest.as_secs_f64()),
        "diameter <= 4 grid_h = 2e-3, <= 60 s per center",
    );
}

#[test]
fn criterion_05_cat_not_dw_with_d1() {
    let sigma = 0.05;
    let seed = eigen_rectangle_seed(&Point::torus2(0.3, 0.6), 1e-7, 1e-7, 0.004).unwrap();
    let diam = match &seed.set {
        SeedSet::Cloud(c) => expansive_core::metric::diameter(c, Metric::TorusQuotient).unwrap(),
        SeedSet::Chain(c) => expansive_core::metric::diameter(&c.to_cloud(), Metric::TorusQuotient).unwrap(),
    };
    let r = test_notion(&DynSystem::CatMap, &params(Notion::Dw { d: 1 }, sigma, 15), &[seed]).unwrap();
    let o = &r.outcomes[0];
    let ns: Vec<i64> = o.dims.iter().map(|d| d.n).collect();
    let all_n = (-15..=15).all(|n| ns.contains(&n));
    let max_upper = o.dims.iter().map(|d| d.upper.unwrap_or(usize::MAX)).max().unwrap();
    let fam = o.family.as_ref().unwrap();
    verdict(
        5,
        "cat map is not dw-expansive with D = 1",
        diam < sigma && all_n && max_upper <= 1 && fam.verified && r.verdict == Verdict::Fail,
        format!(
            "rectangle diameter {diam:.2e}, max upper {max_upper} over {} iterates, {} witness defect {:.1e}, verdict {}",
            ns.len(),
            fam.family,
            fam.max_defect,
            r.verdict.name()
        ),
        "upper <= 1 for all |n| <= 15 with a verified family",
    );
}

/// First iterate (order 0, 1, −1, 2, …) at which the rotated disk reaches
/// diameter `target`, rotating each sample by `n/r` in polar form.
fn annulus_oracle(pts: &[Point], target: f64, horizon: i64) -> Option<i64> {
    let polar: Vec<(f64, f64)> = pts.iter().map(|p| (p.x().hypot(p.y()), p.y().atan2(p.x()))).collect();
    let order = (0..=horizon).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] });
    for n in order {
        let img: Vec<(f64, f64)> = polar
            .iter()
            .map(|&(r, a)| {
                let b = a + n as f64 / r;
                (r * b.cos(), r * b.sin())
            })
            .collect();
        let mut d2 = 0.0f64;
        for i in 0..img.len() {
            for j in i + 1..img.len() {
                d2 = d2.max((img[i].0 - img[j].0).powi(2) + (img[i].1 - img[j].1).powi(2));
            }
        }
        if d2.sqrt() >= target {
            return Some(n);
        }
    }
    None
}

#[test]
fn criterion_06_annulus_dichotomy() {
    let sys = DynSystem::AnnulusTimeOne;
    let (radius, h) = (0.05, 0.01);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let seeds: Vec<Seed> = (0..6)
        .map(|k| {
            // spread the centers over the admissible radii
            let r = 1.0 + radius + (1.0 - 2.0 * radius) * (k as f64 + rng.random::<f64>()) / 6.0;
            disk_seed(&Point::annulus_polar(r, TAU * rng.random::<f64>()).unwrap(), radius, h).unwrap()
        })
        .collect();
    let a = test_notion(&sys, &params(Notion::Partial { d: 1 }, 0.2, 400), &seeds).unwrap();
    let mut agree = true;
    let mut latest = 0i64;
    for (o, s) in a.outcomes.iter().zip(&seeds) {
        let oracle = annulus_oracle(s.set.points(), 0.2, 400);
        agree &= o.reached_at == oracle;
        latest = latest.max(o.reached_at.map_or(i64::MAX, i64::abs));
    }
    let part_a = a.verdict == Verdict::Pass && agree && latest <= 400;

    let thin = thin_annulus_seed(1.0, 1.01, 0.0025).unwrap();
    let b = test_notion(&sys, &params(Notion::Dw { d: 1 }, 0.1, 40), &[thin]).unwrap();
    let o = &b.outcomes[0];
    let max_upper = o.dims.iter().map(|d| d.upper.unwrap_or(usize::MAX)).max().unwrap();
    let fam = o.family.as_ref().unwrap();
    let part_b = b.verdict == Verdict::Fail && fam.verified && max_upper == 1 && o.dims.len() == 81;
    verdict(
        6,
        "annulus: partial with D = 1, not dw with D = 1",
        part_a && part_b,
        format!(
            "(a) {} disks reach 0.2 by |n| <= {latest}, rotation oracle agrees: {agree}; \
             (b) thin annulus upper {max_upper} on {} iterates, invariance defect {:.1e} <= {:.1e}",
            seeds.len(),
            o.dims.len(),
            fam.max_defect,
            fam.tolerance
        ),
        "(a) diameter >= 0.2 within 400 iterates; (b) upper = 1 at sigma = 0.1 for all |n| <= 40",
    );
}

fn small_cloud(seed: u64, n: usize, h: f64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..n)
        .map(|_| Point::plane2(rng.random_range(0.0..0.4), rng.random_range(0.0..0.4)))
        .collect();
    PointCloud::new(pts, h).unwrap()
}

fn clustered_cloud(seed: u64, n: usize, h: f64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = [rng.random_range(0.0..0.3), rng.random_range(0.0..0.3)];
    let pts = (0..n)
        .map(|_| Point::plane2(c[0] + rng.random_range(0.0..0.08), c[1] + rng.random_range(0.0..0.08)))
        .collect();
    PointCloud::new(pts, h).unwrap()
}

#[test]
fn criterion_07_dimension_estimator_soundness() {
    let mut cases = 0;
    let mut bracket_violations = Vec::new();
    let mut monotone_violations = 0;
    let eps_seq = [0.06, 0.09, 0.12, 0.2, 0.3];
    for seed in 0..30u64 {
        for (k, c) in [small_cloud(seed, 3 + (seed as usize % 10), 0.01), clustered_cloud(seed, 4 + (seed as usize % 8), 0.005)]
            .into_iter()
            .enumerate()
        {
            let mut last_oracle = usize::MAX;
            let mut last_upper = usize::MAX;
            let mut prev_cover = Vec::new();
            for &eps in &eps_seq {
                let e = dim_eps_estimate_with(&c, eps, &prev_cover).unwrap();
                let o = dim_eps_oracle(&c, eps).unwrap();
                cases += 1;
                if !(e.lower <= o && o <= e.upper) {
                    bracket_violations.push((seed, k, eps, e.lower, o, e.upper));
                }
                if o > last_oracle || e.upper > last_upper {
                    monotone_violations += 1;
                }
                last_oracle = o;
                last_upper = e.upper;
                prev_cover = vec![e.witness_cover];
            }
        }
    }

    // semicontinuity: jittered refinements keep the upper bound
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut semi_violations = 0;
    let circle: PointCloud = PointCloud::new(
        (0..400)
            .map(|i| {
                let t = TAU * i as f64 / 400.0;
                Point::plane2(0.3 * t.cos(), 0.3 * t.sin())
            })
            .collect(),
        0.004,
    )
    .unwrap();
    let segment = PointCloud::new((0..=100).map(|i| Point::plane2(i as f64 / 100.0, 0.0)).collect(), 0.01).unwrap();
    for (base, eps) in [(circle, 0.06), (segment, 0.1)] {
        let e = dim_eps_estimate(&base, eps).unwrap();
        let h = base.resolution_h();
        for n in [4.0, 16.0, 64.0] {
            let j = h / (2.0 * n);
            let pts = base
                .iter()
                .map(|p| Point::plane2(p.x() + rng.random_range(-j..j), p.y() + rng.random_range(-j..j)))
                .collect();
            let cn = PointCloud::new(pts, h / 2.0).unwrap();
            let en = dim_eps_estimate_with(&cn, eps, &[e.witness_cover.clone()]).unwrap();
            semi_violations += usize::from(en.upper > e.upper);
        }
    }
    verdict(
        7,
        "dimension estimator soundness",
        cases >= 50 && bracket_violations.is_empty() && monotone_violations == 0 && semi_violations == 0,
        format!(
            "{cases} oracle cases, {} bracket violations {:?}, {monotone_violations} monotonicity and {semi_violations} semicontinuity violations",
            bracket_violations.len(),
            bracket_violations.first()
        ),
        ">= 50 cases with lower <= oracle <= upper, monotone in epsilon, upper semicontinuous",
    );
}

/// Length of a circle chain measured in the lift.
fn lifted_length(c: &ContinuumApprox) -> f64 {
    c.points()
        .windows(2)
        .map(|w| {
            let d = w[1].theta() - w[0].theta();
            (d - d.round()).abs()
        })
        .sum()
}

#[test]
fn criterion_08_doubling_is_positively_expansive() {
    let sys = DynSystem::DoublingCircle;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_steps = 0u32;
    let mut mismatches = 0;
    let mut lengths: Vec<f64> = (0..40).map(|k| 1e-4 * 1.25f64.powi(k)).filter(|l| *l < 0.5).collect();
    lengths.extend((0..60).map(|_| 10f64.powf(rng.random_range(-4.0..-0.31))));
    for &l in &lengths {
        let exact = (0.5 / l).log2().ceil().max(0.0) as u32;
        worst_steps = worst_steps.max(exact);
        let a: f64 = rng.random();
        let chain = ContinuumApprox::segment(Point::circle(a), Point::circle(a + l), l / 8.0).unwrap();
        let before = if exact > 0 {
            lifted_length(&continuum_iterate(&sys, &chain, exact as i64 - 1, true).unwrap())
        } else {
            0.0
        };
        let at = lifted_length(&continuum_iterate(&sys, &chain, exact as i64, true).unwrap()).min(1.0);
        let closed = doubling_arc(l, exact).unwrap();
        let closed_before = if exact > 0 { doubling_arc(l, exact - 1).unwrap() } else { 0.0 };
        if !(at >= 0.5 - 1e-9 && before < 0.5 && closed >= 0.5 && closed_before < 0.5) {
            mismatches += 1;
        }
    }
    verdict(
        8,
        "doubling arcs of length >= 1e-4 cover half the circle in ceil(log2(0.5/l)) steps",
        mismatches == 0 && worst_steps <= 13,
        format!("{} arcs, {mismatches} mismatches, at most {worst_steps} steps", lengths.len()),
        "exactly ceil(log2(0.5/l)) <= 13 iterations",
    );
}

/// Sign changes on a dense grid, exact zeros counted once.
fn sign_scan(p: &Polynomial, a: f64, b: f64, n: usize) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for i in 0..=n {
        let v = p.eval(a + (b - a) * i as f64 / n as f64);
        if v == 0.0 {
            count += 1;
            last = 0.0;
        } else {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
    let k = rng.random_range(0..=8usize);
    let mut roots: Vec<f64> = Vec::new();
    while roots.len() < k {
        let r = rng.random_range(-1.9..1.9);
        if roots.iter().all(|q: &f64| (q - r).abs() > 0.01) {
            roots.push(r);
        }
    }
    let mut p = Polynomial::from_roots(rng.random_range(0.5..2.0), &roots).unwrap();
    // a root-free quadratic factor when the degree allows it
    if k <= 6 && rng.random_bool(0.5) {
        let c: f64 = rng.random_range(-2.0..2.0);
        p = &p * &Polynomial::new(vec![c * c + 0.25, -2.0 * c, 1.0]).unwrap();
    }
    p
}

#[test]
fn criterion_09_sturm_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut scan_mismatch = 0;
    for _ in 0..500 {
        let p = random_poly(&mut rng);
        assert!(p.degree().unwrap_or(0) <= 8);
        if sturm_root_count(&p, -2.0, 2.0).unwrap() != sign_scan(&p, -2.0, 2.0, 40_000) {
            scan_mismatch += 1;
        }
    }
    let mut rolle_fail = 0;
    for _ in 0..500 {
        let roots: Vec<f64> = (0..rng.random_range(1..=8usize)).map(|_| rng.random_range(-16..=16) as f64 / 8.0).collect();
        let p = Polynomial::from_roots(1.0, &roots).unwrap();
        let (a, b) = (rng.random_range(-2.5..0.0), rng.random_range(0.0..2.5));
        let m = sturm_root_count(&p, a, b).unwrap();
        let dp = p.derivative();
        let md = if dp.is_zero() { 0 } else { sturm_root_count(&dp, a, b).unwrap() };
        rolle_fail += usize::from(md + 1 < m);
    }
    // g^s = x², g^u = −x² + x³/2: contact of order 2
    let jp = JetPair::new(
        Polynomial::new(vec![0.0, 0.0, 1.0]).unwrap(),
        Polynomial::new(vec![0.0, 0.0, -1.0, 0.5]).unwrap(),
        3,
        0.5,
    )
    .unwrap();
    let lb = local_ball_cardinality_bound(&jp).unwrap();
    verdict(
        9,
        "Sturm counts, Rolle property, quadratic tangency bound",
        scan_mismatch == 0 && rolle_fail == 0 && lb.bound == 2 && lb.holds(),
        format!(
            "{scan_mismatch}/500 sign-scan mismatches, {rolle_fail}/500 Rolle failures, bound {} with {} roots",
            lb.bound, lb.roots
        ),
        "0 mismatches, 0 failures, bound 2 with count <= 2",
    );
}

#[test]
fn criterion_10_cross_notion_consistency() {
    let mut disagreements = Vec::new();
    for id in ["cat_map", "annulus_time_one", "irregular_saddle_2d", "irregular_saddle_3d", "doubling_circle"] {
        let sys = DynSystem::from_id(id).unwrap();
        let (len, gap) = if sys.space().unwrap().dim() == 1 { (1e-3, 1e-4) } else { (0.02, 2e-3) };
        let seeds = segment_seeds(&sys, 6, len, gap).unwrap();
        let cw = test_notion(&sys, &params(Notion::Cw, 0.1, 12), &seeds).unwrap();
        let p0 = test_notion(&sys, &params(Notion::Partial { d: 0 }, 0.1, 12), &seeds).unwrap();
        let same = cw.verdict == p0.verdict
            && cw.outcomes.iter().map(|o| o.reached_at).eq(p0.outcomes.iter().map(|o| o.reached_at));
        if !same {
            disagreements.push(id);
        }
    }
    let sol = DynSystem::from_id("solenoid_shift").unwrap();
    let seeds: Vec<_> = (0..4).map(|k| solenoid_segment(0.1 + 0.2 * k as f64, 1e-3, 2e-3, 16).unwrap()).collect();
    let cw = test_solenoid_notion(&sol, &params(Notion::Cw, 0.1, 20), &seeds).unwrap();
    let p0 = test_solenoid_notion(&sol, &params(Notion::Partial { d: 0 }, 0.1, 20), &seeds).unwrap();
    if cw.verdict != p0.verdict {
        disagreements.push("solenoid_shift");
    }

    let mut dw_witnesses = 0;
    let mut dw_not_partial = 0;
    for id in ["cat_map", "doubling_circle"] {
        let sys = DynSystem::from_id(id).unwrap();
        let (len, gap) = if sys.space().unwrap().dim() == 1 { (1e-3, 1e-4) } else { (1e-3, 2e-4) };
        let seeds = segment_seeds(&sys, 10, len, gap).unwrap();
        let sigma = 0.05;
        let dw = test_notion(&sys, &params(Notion::Dw { d: 0 }, sigma, 20), &seeds).unwrap();
        for o in dw.outcomes.iter().filter(|o| o.reached_at.is_some()) {
            dw_witnesses += 1;
            let single = test_notion(&sys, &params(Notion::Partial { d: 0 }, sigma, 20), &seeds[o.seed..=o.seed]).unwrap();
            dw_not_partial += usize::from(single.verdict != Verdict::Pass);
        }
    }
    verdict(
        10,
        "cw = partial(D = 0); dw pass implies partial pass",
        disagreements.is_empty() && dw_witnesses > 0 && dw_not_partial == 0,
        format!(
            "cw/partial disagreements {disagreements:?} on 6 systems; {dw_witnesses} dw witnesses, {dw_not_partial} without a partial pass"
        ),
        "no disagreement; every dw witness passes partial at the same sigma",
    );
}
