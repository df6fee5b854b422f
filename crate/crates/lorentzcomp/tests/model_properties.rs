use lorentzcomp::model::*;
use proptest::prelude::*;

fn gauge_of(k: i32) -> CurvatureGauge {
    curvature_gauge(k as f64)
}

fn chrono(g: &CurvatureGauge, p: &ModelPoint, q: &ModelPoint) -> bool {
    relation(g, p, q).unwrap() == CausalClass::ChronoFuture
}

/// Chart point in a small neighbourhood of the origin.
fn pt() -> impl Strategy<Value = (f64, f64)> {
    (-0.6f64..1.6, -0.7f64..0.7)
}

/// Three chart points stepping forward in time with bounded coordinate speed.
fn chain3() -> impl Strategy<Value = [(f64, f64); 3]> {
    (
        (-0.3f64..0.3, -0.3f64..0.3),
        [(0.05f64..0.7, -0.7f64..0.7), (0.05f64..0.7, -0.7f64..0.7)],
    )
        .prop_map(|(p, steps)| {
            let q = (p.0 + steps[0].0, p.1 + steps[0].0 * steps[0].1);
            let r = (q.0 + steps[1].0, q.1 + steps[1].0 * steps[1].1);
            [p, q, r]
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reverse_triangle_inequality(k in -1i32..=1, c in chain3()) {
        let g = gauge_of(k);
        let [p, q, r] = c.map(|(t, x)| ModelPoint::from_coords(&g, t, x));
        prop_assume!(chrono(&g, &p, &q) && chrono(&g, &q, &r));
        let (pq, qr, pr) = (tau(&g, &p, &q).unwrap(), tau(&g, &q, &r).unwrap(), tau(&g, &p, &r).unwrap());
        prop_assert!(pr >= pq + qr - 1e-9);
    }

    #[test]
    fn law_of_cosines_round_trip(k in -1i32..=1, a in 0.05f64..1.2, b in 0.05f64..1.2, omega in 0.0f64..2.0) {
        let g = gauge_of(k);
        let c = match loc_side(&g, a, b, SignedAngle::new(omega, 1)) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let w = loc_angle(&g, a, b, c).unwrap();
        prop_assert_eq!(w.sigma, 1);
        let rel = (w.omega.cosh() - omega.cosh()).abs() / omega.cosh();
        prop_assert!(rel <= 1e-9, "omega {} back {}", omega, w.omega);
    }

    #[test]
    fn realized_triangle_satisfies_the_law(k in -1i32..=1, c in chain3()) {
        let g = gauge_of(k);
        let [x, y, z] = c.map(|(t, x)| ModelPoint::from_coords(&g, t, x));
        prop_assume!(chrono(&g, &x, &y) && chrono(&g, &y, &z));
        let (a, b, c) = (tau(&g, &x, &y).unwrap(), tau(&g, &y, &z).unwrap(), tau(&g, &x, &z).unwrap());
        prop_assume!(a > 1e-3 && b > 1e-3);
        let w = angle_at(&g, &y, &x, &z).unwrap();
        let pred = loc_side(&g, a, b, w).unwrap();
        prop_assert!((pred - c).abs() <= 1e-9 * c.max(1.0), "pred {} c {}", pred, c);
        let w2 = loc_angle(&g, a, b, c).unwrap();
        prop_assert_eq!(w2.sigma, w.sigma);
    }

    #[test]
    fn isometries_preserve_tau_and_class(k in -1i32..=1, c in chain3(), p in pt(), q in pt(), flip: bool, shift in -0.4f64..0.4) {
        let g = gauge_of(k);
        let [a, b, p, q] = [c[0], c[2], p, q].map(|(t, x)| ModelPoint::from_coords(&g, t, x));
        prop_assume!(chrono(&g, &a, &b));
        let len = tau(&g, &a, &b).unwrap();
        let o = ModelPoint::from_coords(&g, shift, shift);
        let (u, _) = direction(&g, &o, &ModelPoint::from_coords(&g, shift + 1.0, 0.5 * shift)).unwrap();
        let e = exp(&g, &o, &u, len);
        let iso = isometry_from_segments(&g, (&a, &b), (&o, &e), flip).unwrap();
        let (fp, fq) = (iso.apply(&g, &p), iso.apply(&g, &q));
        prop_assert_eq!(relation(&g, &p, &q).unwrap(), relation(&g, &fp, &fq).unwrap());
        let d = (tau(&g, &p, &q).unwrap() - tau(&g, &fp, &fq).unwrap()).abs();
        prop_assert!(d <= 1e-9);
    }

    #[test]
    fn sector_collapse_is_long(k in -1i32..=1, f1 in -0.8f64..0.8, f2 in -0.8f64..0.8, big in 0.5f64..1.5,
                               a in (0.0f64..1.0, 0.0f64..1.0), b in (0.0f64..1.0, 0.0f64..1.0)) {
        let g = gauge_of(k);
        let o = ModelPoint::origin(&g);
        let h = |r: f64, phi: f64| hyperbola_point(&Hyperbola { center: o, r, orientation: Orientation::Future }, &g, phi);
        let spoke = h(big, f1);
        let at = |(u, v): (f64, f64)| h(u * big, f1 + v * (f2 - f1));
        let (x, y) = (at(a), at(b));
        prop_assume!(relation(&g, &x, &y).unwrap().is_causal_future() && a.0 > 1e-6);
        let (fx, fy) = (sector_collapse(&g, &o, &spoke, &x).unwrap(), sector_collapse(&g, &o, &spoke, &y).unwrap());
        prop_assert!(relation(&g, &fx, &fy).unwrap().is_causal_future());
        prop_assert!(tau(&g, &fx, &fy).unwrap() >= tau(&g, &x, &y).unwrap() - 1e-9);
    }
}

#[test]
fn angle_monotone_in_the_opposite_side() {
    for k in [-1.0, 0.0, 1.0] {
        let g = curvature_gauge(k);
        for a in [0.2, 0.5, 0.9] {
            for b in [0.3, 0.6] {
                let mut prev = None;
                let mut c = a + b + 1e-3;
                while c < a + b + 1.0 && g.below_diameter(c) {
                    let w = loc_angle(&g, a, b, c).unwrap().omega;
                    if let Some(p) = prev {
                        assert!(w > p, "k={k} a={a} b={b} c={c}");
                    }
                    prev = Some(w);
                    c += 0.01;
                }
                let c = a + b + 0.4;
                let mut prev = None;
                let mut aa = 0.05;
                while aa < c - b - 1e-3 {
                    let w = loc_angle(&g, aa, b, c).unwrap().omega;
                    if let Some(p) = prev {
                        assert!(w < p, "k={k} a={aa} b={b} c={c}");
                    }
                    prev = Some(w);
                    aa += 0.01;
                }
            }
        }
    }
}

#[test]
fn flat_limit() {
    let flat = curvature_gauge(0.0);
    for k in [1e-8, -1e-8] {
        let g = curvature_gauge(k);
        for (t, x) in [(1.0, 0.3), (0.5, -0.2), (1.9, 0.9)] {
            let (o, p) = (ModelPoint::origin(&g), ModelPoint::from_coords(&g, t, x));
            let want = tau(&flat, &ModelPoint::origin(&flat), &ModelPoint::flat(t, x)).unwrap();
            assert!((tau(&g, &o, &p).unwrap() - want).abs() < 1e-6);
        }
        let c0 = loc_side(&flat, 0.7, 1.1, SignedAngle::new(0.8, 1)).unwrap();
        let c = loc_side(&g, 0.7, 1.1, SignedAngle::new(0.8, 1)).unwrap();
        assert!((c - c0).abs() < 1e-6);
    }
}
