use holodisk::boundary::{self, julia_bound_check};
use holodisk::geometry::{horocycle_inclusion, horocycle_ratio, image_in_region, region_image_from_data, DiskRegion};
use holodisk::holomap::{MapExpr, Mobius};
use holodisk::Complex;
use proptest::prelude::*;

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

fn disk_point() -> impl Strategy<Value = Complex> {
    (0.0f64..0.98, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

/// Automorphism `C⁻¹(C(z)/α + i·s)` with boundary fixed point 1.
fn automorphism(alpha: f64, s: f64) -> MapExpr {
    MapExpr::add(MapExpr::scale(1.0 / alpha, MapExpr::Var.cayley()), MapExpr::constant(Complex::new(0.0, s))).cayley_inv()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn horocycle_membership_matches_euclidean_form(k in 0.05f64..20.0, z in disk_point()) {
        let d = DiskRegion::horocycle(k).unwrap();
        let e = d.euclidean_form();
        let by_ratio = horocycle_ratio(one(), z) < k;
        let by_circle = (z - e.center).norm() < e.radius;
        let m = d.contains(z).unwrap();
        prop_assume!(m.margin.abs() > 1e-9);
        prop_assert_eq!(by_ratio, by_circle);
        prop_assert_eq!(m.inside, by_ratio);
    }

    #[test]
    fn inclusion_always_contains(alpha in 0.05f64..=1.0, re_a in 0.0f64..3.0, im_a in -3.0f64..3.0, k in 0.05f64..10.0) {
        let f2 = alpha * alpha * Complex::new(re_a, im_a) - alpha * (1.0 - alpha);
        let h = horocycle_inclusion(alpha, f2, k).unwrap();
        prop_assert!(h.contained, "gap {}", h.gap);
    }

    #[test]
    fn julia_wolff_inclusion_for_automorphisms(alpha in 0.2f64..3.0, s in -2.0f64..2.0, k in 0.1f64..5.0) {
        let f = automorphism(alpha, s);
        let src = DiskRegion::horocycle(k).unwrap();
        let dst = DiskRegion::horocycle(alpha * k).unwrap();
        prop_assert!(image_in_region(&f, &src, &dst, 256).unwrap().holds);
    }

    #[test]
    fn lft_image_formula_matches_jet(alpha in 0.2f64..3.0, s in -2.0f64..2.0, k in 0.1f64..5.0) {
        let f = automorphism(alpha, s);
        let jet = boundary::jet(&f, one(), 2).unwrap();
        prop_assert!((jet.derivative(1) - alpha).norm() < 1e-8);
        let a = (jet.derivative(2) + alpha * (1.0 - alpha)) / (alpha * alpha);
        prop_assert!(a.re.abs() < 1e-8, "Re a = {}", a.re);
        let image = region_image_from_data(alpha, a, k).unwrap();
        let src = DiskRegion::horocycle(k).unwrap();
        prop_assert!(image_in_region(&f, &src, &image, 256).unwrap().holds);
    }

    #[test]
    fn mobius_inverse_round_trip(ar in -1.0f64..1.0, ai in -1.0f64..1.0, br in -1.0f64..1.0, z in disk_point()) {
        let m = Mobius::new(Complex::new(2.0 + ar, ai), Complex::new(br, 0.3), Complex::new(0.2, br), Complex::new(2.0, -ai));
        prop_assume!(m.det().norm() > 1e-3);
        let w = m.inverse().apply(m.apply(z));
        prop_assert!((w - z).norm() < 1e-10 * (1.0 + z.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn julia_bound_for_herglotz_functions(w in 0.0f64..3.0, cr in 0.0f64..2.0, ci in -2.0f64..2.0) {
        let p = MapExpr::add(MapExpr::scale(w, MapExpr::Var.cayley()), MapExpr::constant(Complex::new(cr, ci)));
        let r = julia_bound_check(&p, 100, 7).unwrap();
        prop_assert!((r.delta - 2.0 * w).abs() < 1e-7, "delta {} for w {}", r.delta, w);
        prop_assert!(r.check.min_slack >= -1e-9);
    }
}
