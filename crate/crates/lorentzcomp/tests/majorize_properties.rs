use lorentzcomp::gen::*;
use lorentzcomp::majorize::*;
use lorentzcomp::model::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn loop_triangles(l: &TimelikeLoop) -> Vec<[ModelPoint; 3]> {
    let o = l.origin();
    l.alpha
        .windows(2)
        .chain(l.beta.windows(2))
        .map(|w| [o, w[0], w[1]])
        .collect()
}

#[test]
fn straightening_is_long_and_keeps_the_prescribed_sides() {
    for k in [-1.0, 0.0, 1.0] {
        let g = curvature_gauge(k);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = random_concave_quadrilateral(&g, &mut rng, 1e-9).unwrap();
            let s = straighten_alexandrov(&g, &x, false).unwrap();
            let t = |p: &ModelPoint, q: &ModelPoint| tau(&g, p, q).unwrap();
            let tri = &s.triangle;
            assert!((t(&tri.x, &tri.y) - t(&x[0], &x[1])).abs() < 1e-9);
            assert!((t(&tri.y, &tri.z) - t(&x[1], &x[2]) - t(&x[2], &x[3])).abs() < 1e-9);
            assert!((t(&tri.x, &tri.z) - t(&x[0], &x[3])).abs() < 1e-9);
            assert!(s
                .intermediate_margins(&g, &x)
                .unwrap()
                .iter()
                .all(|m| *m >= -1e-9));
            let r =
                sampled_longness(&g, &[tri.vertices()], |p| s.map.eval(p), 100, &mut rng).unwrap();
            assert_eq!(r.order_violations, 0);
            assert!(r.max_defect <= 1e-7, "k={k} defect {}", r.max_defect);
        }
    }
}

#[test]
fn polygon_majorant_is_convex_isometric_and_long() {
    for k in [-1.0, 0.0, 1.0] {
        let g = curvature_gauge(k);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..30 {
            let l = random_star_loop(&g, &mut rng, 1 + i % 6).unwrap();
            let m = majorize_polygon(&g, &l).unwrap();
            assert!(convexity_check(&m.convex));
            assert!(m.depth <= m.breakpoints);
            assert!((loop_length(&m.convex) - loop_length(&l)).abs() < 1e-9);
            for (a, b) in m
                .convex
                .alpha_len
                .iter()
                .zip(&l.alpha_len)
                .chain(m.convex.beta_len.iter().zip(&l.beta_len))
            {
                assert!((a - b).abs() < 1e-9);
            }
            let r = sampled_longness(
                &g,
                &loop_triangles(&m.convex),
                |p| m.map.eval(p),
                100,
                &mut rng,
            )
            .unwrap();
            assert!(
                r.max_defect <= 1e-7,
                "k={k} loop {i} defect {}",
                r.max_defect
            );
        }
    }
}

#[test]
fn skeleton_map_is_long_on_model_chains() {
    for k in [-1.0, 0.0, 1.0] {
        let g = curvature_gauge(k);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let oracle = ModelOracle::new(g, random_chain(&g, &mut rng, 6));
        let fan = build_fan(&g, &oracle, 1).unwrap();
        let mut skel = |rng: &mut ChaCha8Rng| {
            let e = rng.random_range(1..=fan.m());
            let t: f64 = rng.random();
            let (a, b) = if rng.random_bool(0.5) {
                (fan.apex, fan.points[e])
            } else {
                (fan.points[e - 1], fan.points[e])
            };
            geodesic_point(&g, &a, &b, t).unwrap()
        };
        let mut worst = f64::INFINITY;
        let mut n = 0;
        while n < 300 {
            let (p, q) = (skel(&mut rng), skel(&mut rng));
            let (p, q) = match relation(&g, &p, &q).unwrap() {
                c if c.is_causal_future() => (p, q),
                c if c.is_causal_past() => (q, p),
                _ => continue,
            };
            n += 1;
            let (fp, fq) = (
                oracle.resolve(&psi_eval(&fan, &p).unwrap()).unwrap(),
                oracle.resolve(&psi_eval(&fan, &q).unwrap()).unwrap(),
            );
            worst = worst.min(tau(&g, &fp, &fq).unwrap() - tau(&g, &p, &q).unwrap());
        }
        assert!(worst >= -1e-7, "k={k} margin {worst}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn epsilon_bound_is_monotone(k in -1i32..=1, b in 0.5f64..2.0, c in 0.1f64..1.0, a in 0.0f64..0.05, da in 1e-4f64..1e-2, dc in 1e-3f64..0.1) {
        let g = curvature_gauge(k as f64);
        let e = |c: f64, a: f64| epsilon_bound(&g, b, c, a).unwrap();
        prop_assert_eq!(e(c, 0.0).epsilon, 0.0);
        let base = e(c, a);
        prop_assume!(!e(c, a + da).saturated);
        prop_assert!(e(c, a + da).epsilon > base.epsilon);
        if a > 0.0 {
            prop_assert!(e(c + dc, a).epsilon < base.epsilon);
        }
    }

    #[test]
    fn majorisation_terminates_within_the_breakpoint_count(k in -1i32..=1, seed: u64, bends in 1usize..=6) {
        let g = curvature_gauge(k as f64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_star_loop(&g, &mut rng, bends).unwrap();
        let m = majorize_polygon(&g, &l).unwrap();
        prop_assert!(m.depth <= m.breakpoints);
        prop_assert!(m.breakpoints <= bends);
        prop_assert!(convexity_check(&m.convex));
    }
}

#[test]
fn pipeline_certificates_hold_for_every_level() {
    let g = curvature_gauge(0.0);
    let curve = |t: f64| ModelPoint::flat(2.0 * t, 0.3 * (std::f64::consts::PI * t).sin());
    let beta = ModelOracle::new(g, vec![curve(0.0), ModelPoint::flat(2.0, 0.0)]);
    let mut last = f64::INFINITY;
    for n in 3..=5 {
        let alpha = ModelOracle::new(g, dyadic_samples(curve, n));
        let opts = PipelineOptions {
            pairs: 300,
            ..Default::default()
        };
        let m = majorant_of_curve(&g, &alpha, &beta, &opts).unwrap();
        assert!(m.all_hold(), "n={n} defect {}", m.max_defect());
        let level = m.level_epsilon().unwrap();
        assert!(level < last);
        last = level;
    }
}
