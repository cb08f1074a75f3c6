//! Property-based invariants of the metric structure machinery.

use nalgebra::Vector2;
use proptest::prelude::*;
use t1helix_core::metric::{
    eta_form, g_tilde, phi_tensor, reeb_field, structure_class, t1_signature, tangential_lift,
    MetricParams, StructureClass, T1Vec, UnitTangentPoint,
};
use t1helix_core::surface::{BaseVec, ChartPoint, SurfaceModel};

fn params_strategy() -> impl Strategy<Value = MetricParams> {
    (
        prop::num::f64::NORMAL.prop_map(|v| v % 2.0),
        prop::num::f64::NORMAL.prop_map(|v| v % 2.0),
        prop::num::f64::NORMAL.prop_map(|v| v % 2.0),
    )
        .prop_filter_map("valid params", |(a, c, d)| {
            let a = if a.abs() < 0.1 { 0.5 } else { a };
            MetricParams::new(a, c, d).ok()
        })
}

/// Contact-class parameters: a, a+c of one sign with d = ±4α − (a+c).
fn contact_params_strategy() -> impl Strategy<Value = MetricParams> {
    (0.1..2.0_f64, 0.1..2.0_f64, prop::bool::ANY).prop_filter_map(
        "contact",
        |(a, ac, flip)| {
            let alpha = a * ac;
            let phi = if flip { 4.0 * alpha } else { -4.0 * alpha };
            let p = MetricParams::new(a, ac - a, phi - ac).ok()?;
            (structure_class(&p) == StructureClass::ContactPseudoMetric).then_some(p)
        },
    )
}

fn sphere_point(th: f64, ph: f64, vx: f64, vy: f64) -> Option<(SurfaceModel, UnitTangentPoint)> {
    let s = SurfaceModel::sphere(1.0).ok()?;
    let base = ChartPoint::new(th, ph);
    let g = s.metric(&base).ok()?;
    let v = Vector2::new(vx, vy);
    let n = (v.transpose() * g * v)[(0, 0)];
    if n < 1e-3 {
        return None;
    }
    Some((s, UnitTangentPoint::new(&s, base, v / n.sqrt()).ok()?))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn g_tilde_symmetric_bilinear(
        p in params_strategy(),
        th in 0.4..2.6_f64, ph in -3.0..3.0_f64,
        vx in -1.0..1.0_f64, vy in -1.0..1.0_f64,
        h1 in -1.0..1.0_f64, h2 in -1.0..1.0_f64,
        t1 in -1.0..1.0_f64, t2 in -1.0..1.0_f64,
        lam in -2.0..2.0_f64,
    ) {
        prop_assume!(vx.abs() + vy.abs() > 0.1);
        let Some((s, pt)) = sphere_point(th, ph, vx, vy) else { return Ok(()); };
        let z1 = T1Vec::new(BaseVec::new(h1, h2), tangential_lift(&s, &pt, &BaseVec::new(t1, t2)));
        let z2 = T1Vec::new(BaseVec::new(t2, h1), tangential_lift(&s, &pt, &BaseVec::new(h2, t1)));
        let sym = g_tilde(&p, &s, &pt, &z1, &z2) - g_tilde(&p, &s, &pt, &z2, &z1);
        prop_assert!(sym.abs() < 1e-12);
        let lin = g_tilde(&p, &s, &pt, &z1.scale(lam).add(&z2), &z2)
            - lam * g_tilde(&p, &s, &pt, &z1, &z2)
            - g_tilde(&p, &s, &pt, &z2, &z2);
        prop_assert!(lin.abs() < 1e-10);
    }

    #[test]
    fn tangential_lift_is_projection(
        th in 0.4..2.6_f64, ph in -3.0..3.0_f64,
        vx in -1.0..1.0_f64, vy in -1.0..1.0_f64,
        x1 in -2.0..2.0_f64, x2 in -2.0..2.0_f64,
    ) {
        prop_assume!(vx.abs() + vy.abs() > 0.1);
        let Some((s, pt)) = sphere_point(th, ph, vx, vy) else { return Ok(()); };
        let x = BaseVec::new(x1, x2);
        let l = tangential_lift(&s, &pt, &x);
        // orthogonal to u and idempotent
        prop_assert!(s.inner(&pt.base, &l, &pt.dir).abs() < 1e-12);
        let ll = tangential_lift(&s, &pt, &l);
        prop_assert!((ll - l).norm() < 1e-12);
    }

    #[test]
    fn contact_structure_axioms(
        p in contact_params_strategy(),
        th in 0.4..2.6_f64, ph in -3.0..3.0_f64,
        vx in -1.0..1.0_f64, vy in -1.0..1.0_f64,
        h1 in -1.0..1.0_f64, h2 in -1.0..1.0_f64,
        t1 in -1.0..1.0_f64, t2 in -1.0..1.0_f64,
    ) {
        prop_assume!(vx.abs() + vy.abs() > 0.1);
        let Some((s, pt)) = sphere_point(th, ph, vx, vy) else { return Ok(()); };
        let xi = reeb_field(&p, &pt);
        // η̃(ξ̃) = 1, φ̃(ξ̃) = 0, η̃ ∘ φ̃ = 0
        prop_assert!((eta_form(&p, &s, &pt, &xi) - 1.0).abs() < 1e-10);
        let pxi = phi_tensor(&p, &s, &pt, &xi);
        prop_assert!(pxi.horiz.norm() < 1e-10 && pxi.tang.norm() < 1e-10);
        let z = T1Vec::new(BaseVec::new(h1, h2), tangential_lift(&s, &pt, &BaseVec::new(t1, t2)));
        prop_assert!(eta_form(&p, &s, &pt, &phi_tensor(&p, &s, &pt, &z)).abs() < 1e-10);
        // φ̃²  = −Id + η̃ ⊗ ξ̃
        let ppz = phi_tensor(&p, &s, &pt, &phi_tensor(&p, &s, &pt, &z));
        let expect = z.scale(-1.0).add(&xi.scale(eta_form(&p, &s, &pt, &z)));
        prop_assert!((ppz.horiz - expect.horiz).norm() < 1e-10);
        prop_assert!((ppz.tang - expect.tang).norm() < 1e-10);
    }

    #[test]
    fn signature_counts_sum_to_three(p in params_strategy(), lorentzian in prop::bool::ANY) {
        let base = if lorentzian { (1, 1) } else { (2, 0) };
        let ((pp, qq), _) = t1_signature(&p, base).unwrap();
        prop_assert_eq!(pp + qq, 3);
    }
}
