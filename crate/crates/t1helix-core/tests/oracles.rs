//! Cross-checks against independent numerical routes:
//!
//! - Gaussian curvature via the Brioschi formula from sampled g_ij, against
//!   the declared curvature of each model;
//! - the full T₁M connection via the 3-coordinate chart (q⁰, q¹, ψ), whose
//!   Christoffel symbols come from finite differences of the 3×3 metric —
//!   curve speeds, accelerations, Frenet curvature/torsion and lightlike
//!   curvature must agree with the lifted-field implementation.

mod common;

use common::*;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use t1helix_core::curves::make_fixture;
use t1helix_core::frenet::{cartan_apparatus, frenet_apparatus};
use t1helix_core::metric::MetricParams;
use t1helix_core::numerics::series_stats;
use t1helix_core::surface::{ChartPoint, SurfaceKind, SurfaceModel};

#[test]
fn brioschi_matches_declared_curvature_everywhere() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let models = [
        SurfaceModel::sphere(1.0).unwrap(),
        SurfaceModel::sphere(4.0).unwrap(),
        SurfaceModel::hyperbolic(-2.0).unwrap(),
        SurfaceModel::de_sitter(1.0).unwrap(),
        SurfaceModel::anti_de_sitter(-2.0).unwrap(),
    ];
    for s in models {
        for _ in 0..1000 {
            let q0 = match s.kind {
                SurfaceKind::Sphere => rng.gen_range(0.3..2.8),
                SurfaceKind::HyperbolicPlane => rng.gen_range(0.3..2.0),
                _ => rng.gen_range(-1.5..1.5),
            };
            let p = ChartPoint::new(q0, rng.gen_range(-3.0..3.0));
            let k = brioschi_curvature(&s, &p);
            assert!(
                (k - s.gauss_curvature()).abs() < 1e-5,
                "{:?}: Brioschi {k} vs {}",
                s.kind,
                s.gauss_curvature()
            );
        }
    }
}

#[test]
fn brioschi_agrees_with_riemann_route() {
    // two in-crate curvature routes: Brioschi from metric samples vs the
    // Riemann tensor of the analytic Christoffels
    let s = SurfaceModel::de_sitter(1.0).unwrap();
    for q0 in [-1.0, -0.3, 0.4, 1.2] {
        let p = ChartPoint::new(q0, 0.7);
        let a = brioschi_curvature(&s, &p);
        let b = s.numeric_gauss_curvature(&p).unwrap();
        assert!((a - b).abs() < 1e-5, "{a} vs {b}");
    }
}

/// Convert a fixture to the 3-coordinate chart curve.
fn fixture_y(name: &str) -> (MetricParams, SurfaceModel, impl Fn(f64) -> Vector3<f64>) {
    let spec = make_fixture(name).unwrap();
    let surface = spec.surface;
    let path = spec.path.clone();
    let yf = move |t: f64| {
        let (q, v) = path(t);
        Vector3::new(q.coords[0], q.coords[1], fiber_psi(&surface, &q, &v))
    };
    (spec.params, surface, yf)
}

#[test]
fn chart_route_confirms_fig2_speed_curvature_torsion() {
    let (p, s, yf) = fixture_y("fig2-oblique");
    // reparametrized to arc length: t = s·√(2/5)
    let scale = (2.0_f64 / 5.0).sqrt();
    let yfs = move |t: f64| yf(t * scale);
    let h = 1e-3;
    let t0 = 0.4;
    let g3 = t1_metric(&p, &s, &yfs(t0));
    let yd = t1_velocity(&yfs, t0, h);
    let speed = (yd.transpose() * g3 * yd)[(0, 0)];
    assert!((speed - 1.0).abs() < 1e-9, "chart speed {speed}");

    let acc = |t: f64| {
        t1_cov_along(&p, &s, &yfs, &|u| t1_velocity(&yfs, u, h), t, h)
    };
    let a0 = acc(t0);
    let q = (a0.transpose() * g3 * a0)[(0, 0)];
    // κ² = G̃(λ'', λ'') = 0.36 for this fixture (κ = 3/5)
    assert!((q - 0.36).abs() < 1e-6, "chart G(l'',l'') = {q}");

    // torsion via G̃(∇W₁, ∇W₁) = ε_λκ² + ε₂τ²; all signs +1 here
    let kappa = q.sqrt();
    let jerk = t1_cov_along(&p, &s, &yfs, &acc, t0, 1e-3);
    let nw1 = jerk / kappa;
    let nn = (nw1.transpose() * g3 * nw1)[(0, 0)];
    let tau2 = nn - kappa * kappa;
    assert!(
        (tau2 - 0.04).abs() < 1e-4,
        "chart τ² = {tau2}, want 0.04"
    );

    // and the lifted-field implementation agrees
    let spec = make_fixture("fig2-oblique").unwrap();
    let sample = spec.build().unwrap().arclength_reparam(&spec.params).unwrap();
    let f = frenet_apparatus(&spec.params, &sample).unwrap();
    let m = sample.stats_margin();
    let k_impl = series_stats(&f.kappa, m).mean;
    let t_impl = series_stats(&f.tau, m).mean;
    assert!((k_impl - kappa).abs() < 1e-5, "impl κ {k_impl} vs chart {kappa}");
    assert!(
        (t_impl.abs() - tau2.abs().sqrt()).abs() < 1e-4,
        "impl |τ| {} vs chart {}",
        t_impl.abs(),
        tau2.abs().sqrt()
    );
}

#[test]
fn chart_route_confirms_null_horizontal_lightlike_curvature() {
    let (p, s, yf) = fixture_y("null-hor");
    let h = 1e-3;
    let t0 = 0.9;
    let g3 = t1_metric(&p, &s, &yf(t0));
    let yd = t1_velocity(&yf, t0, h);
    let speed = (yd.transpose() * g3 * yd)[(0, 0)];
    assert!(speed.abs() < 1e-9, "not null in chart route: {speed}");

    let acc = |t: f64| t1_cov_along(&p, &s, &yf, &|u| t1_velocity(&yf, u, h), t, h);
    let a0 = acc(t0);
    let q = (a0.transpose() * g3 * a0)[(0, 0)];
    assert!((q - 1.0).abs() < 1e-6, "chart pseudo-arc norm {q}");

    let jerk = t1_cov_along(&p, &s, &yf, &acc, t0, 1e-3);
    let kl = 0.5 * (jerk.transpose() * g3 * jerk)[(0, 0)];
    // the lightlike curvature is +d(a+c)/|dφ| = +1/2: the chart route fixes
    // the sign independently of the lifted-field formulas
    assert!((kl - 0.5).abs() < 1e-4, "chart κ_λ = {kl}");

    let spec = make_fixture("null-hor").unwrap();
    let sample = spec.build().unwrap();
    let c = cartan_apparatus(&spec.params, &sample).unwrap();
    let k_impl = series_stats(&c.kappa, sample.stats_margin()).mean;
    assert!((k_impl - kl).abs() < 1e-4, "impl {k_impl} vs chart {kl}");
}

#[test]
fn chart_route_confirms_acceleration_on_random_curve() {
    // a generic (non-helix) curve: both routes must agree on ∇̃_T T
    let s = SurfaceModel::sphere(1.0).unwrap();
    let p = MetricParams::new(0.8, 0.0, 1.7).unwrap();
    let spec = t1helix_core::curves::CurveSpec {
        label: "random".into(),
        family: t1helix_core::curves::CurveFamily::Custom,
        surface: s,
        params: p,
        window: (0.0, 2.0),
        samples: 512,
        rho: 1.0,
        path: std::sync::Arc::new(move |t: f64| {
            let th = 1.1 + 0.2 * (0.9 * t).sin();
            let q = ChartPoint::new(th, 0.7 * t + 0.1 * (1.3 * t).cos());
            let chi = 0.8 * t;
            let v = nalgebra::Vector2::new(chi.cos(), chi.sin() / th.sin());
            (q, v)
        }),
    };
    let sample = spec.build().unwrap();
    let path = spec.path.clone();
    let yf = move |t: f64| {
        let (q, v) = path(t);
        Vector3::new(q.coords[0], q.coords[1], fiber_psi(&s, &q, &v))
    };
    let h = 1e-3;
    let i = (1.0 / sample.step()).round() as usize;
    let t0 = sample.t(i);
    let acc_chart = t1_cov_along(&p, &s, &yf, &|u| t1_velocity(&yf, u, h), t0, h);
    let g3 = t1_metric(&p, &s, &yf(t0));
    let qa = (acc_chart.transpose() * g3 * acc_chart)[(0, 0)];

    // lifted-field route at the same parameter
    let d = sample.derivs(i);
    let acc = t1helix_core::connection::curve_acceleration(&p, &s, &d);
    let qb = t1helix_core::metric::g_tilde_rho(&p, &s, &d.point, &d.v, &acc, &acc, 1.0);
    assert!(
        (qa - qb).abs() < 1e-5,
        "G(l'',l'') chart {qa} vs lifted {qb}"
    );
}
