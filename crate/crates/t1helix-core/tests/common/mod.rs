//! Test-only oracles, kept independent of the implementation paths they
//! check. The Brioschi curvature uses only sampled metric components; the
//! T₁M chart route derives the bundle connection from the metric alone,
//! never touching the closed-form connection cases.

use nalgebra::{Matrix3, Vector2, Vector3};
use t1helix_core::metric::MetricParams;
use t1helix_core::surface::{BaseVec, ChartPoint, SurfaceModel};

// ---------------------------------------------------------------------------
// Brioschi Gaussian curvature from sampled g_ij
// ---------------------------------------------------------------------------

fn metric_efg(surface: &SurfaceModel, q: &[f64; 2]) -> [f64; 3] {
    let g = surface.metric(&ChartPoint::new(q[0], q[1])).unwrap();
    [g[(0, 0)], g[(0, 1)], g[(1, 1)]]
}

fn d_efg(surface: &SurfaceModel, q: &[f64; 2], dir: usize, h: f64) -> [f64; 3] {
    let shift = |s: f64| {
        let mut p = *q;
        p[dir] += s;
        metric_efg(surface, &p)
    };
    let (m2, m1, p1, p2) = (shift(-2.0 * h), shift(-h), shift(h), shift(2.0 * h));
    std::array::from_fn(|k| (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h))
}

fn dd_efg(surface: &SurfaceModel, q: &[f64; 2], d1: usize, d2: usize, h: f64) -> [f64; 3] {
    let shift = |s: f64| {
        let mut p = *q;
        p[d1] += s;
        d_efg(surface, &p, d2, h)
    };
    let (m2, m1, p1, p2) = (shift(-2.0 * h), shift(-h), shift(h), shift(2.0 * h));
    std::array::from_fn(|k| (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h))
}

/// Gaussian curvature by the Brioschi formula from sampled metric
/// components only (valid for indefinite metrics as well — the formula is
/// algebraic in E, F, G and their derivatives).
pub fn brioschi_curvature(surface: &SurfaceModel, p: &ChartPoint) -> f64 {
    let q = [p.coords[0], p.coords[1]];
    let h = 1e-3 * surface.radius.max(1.0);
    let [e, f, g] = metric_efg(surface, &q);
    let [e_u, f_u, g_u] = d_efg(surface, &q, 0, h);
    let [e_v, f_v, g_v] = d_efg(surface, &q, 1, h);
    let e_vv = dd_efg(surface, &q, 1, 1, h)[0];
    let f_uv = dd_efg(surface, &q, 0, 1, h)[1];
    let g_uu = dd_efg(surface, &q, 0, 0, h)[2];
    let m1 = Matrix3::new(
        -0.5 * e_vv + f_uv - 0.5 * g_uu,
        0.5 * e_u,
        f_u - 0.5 * e_v,
        f_v - 0.5 * g_u,
        e,
        f,
        0.5 * g_v,
        f,
        g,
    );
    let m2 = Matrix3::new(0.0, 0.5 * e_v, 0.5 * g_u, 0.5 * e_v, e, f, 0.5 * g_u, f, g);
    let det_g = e * g - f * f;
    (m1.determinant() - m2.determinant()) / (det_g * det_g)
}

// ---------------------------------------------------------------------------
// T₁M as a 3-manifold: (q⁰, q¹, ψ) chart with the fiber angle ψ
// ---------------------------------------------------------------------------

/// Orthonormal base frame by Gram-Schmidt on the coordinate basis; returns
/// (E₁, E₂, sign₁, sign₂).
fn frame(surface: &SurfaceModel, q: &ChartPoint) -> (BaseVec, BaseVec, f64, f64) {
    let g = surface.metric(q).unwrap();
    let e1 = Vector2::new(1.0, 0.0);
    let n1: f64 = (e1.transpose() * g * e1)[(0, 0)];
    let s1 = n1.signum();
    let e1n = e1 / n1.abs().sqrt();
    let raw2 = Vector2::new(0.0, 1.0);
    let proj = (raw2.transpose() * g * e1n)[(0, 0)] / (e1n.transpose() * g * e1n)[(0, 0)];
    let e2 = raw2 - proj * e1n;
    let n2: f64 = (e2.transpose() * g * e2)[(0, 0)];
    (e1n, e2 / n2.abs().sqrt(), s1, n2.signum())
}

/// Unit fiber vector V(q, ψ): trigonometric on Riemannian bases, hyperbolic
/// on Lorentzian ones (branch with positive cosh coefficient).
pub fn fiber_v(surface: &SurfaceModel, q: &ChartPoint, psi: f64) -> BaseVec {
    let (e1, e2, s1, s2) = frame(surface, q);
    match (s1 > 0.0, s2 > 0.0) {
        (true, true) => psi.cos() * e1 + psi.sin() * e2,
        (false, true) => psi.sinh() * e1 + psi.cosh() * e2,
        (true, false) => psi.cosh() * e1 + psi.sinh() * e2,
        _ => panic!("no unit vectors in a negative-definite frame"),
    }
}

/// Fiber coordinate of a unit vector v at q (inverse of `fiber_v`).
pub fn fiber_psi(surface: &SurfaceModel, q: &ChartPoint, v: &BaseVec) -> f64 {
    let (e1, e2, s1, s2) = frame(surface, q);
    let g = surface.metric(q).unwrap();
    let c1 = s1 * (v.transpose() * g * e1)[(0, 0)];
    let c2 = s2 * (v.transpose() * g * e2)[(0, 0)];
    match (s1 > 0.0, s2 > 0.0) {
        (true, true) => c2.atan2(c1),
        (false, true) => c1.asinh(),
        (true, false) => c2.asinh(),
        _ => unreachable!(),
    }
}

/// The 3×3 metric of G̃ in the (q⁰, q¹, ψ) chart, built from the base
/// metric and ∇V only.
pub fn t1_metric(params: &MetricParams, surface: &SurfaceModel, y: &Vector3<f64>) -> Matrix3<f64> {
    let q = ChartPoint::new(y[0], y[1]);
    let psi = y[2];
    let (a, c, d) = (params.a, params.c, params.d);
    let g = surface.metric(&q).unwrap();
    let v = fiber_v(surface, &q, psi);
    let h = 1e-5;
    let gam = surface.christoffels(&q).unwrap();
    // ∇_i V at fixed ψ
    let mut dv = [Vector2::zeros(), Vector2::zeros()];
    for i in 0..2 {
        let shift = |s: f64| {
            let mut p = q;
            p.coords[i] += s;
            fiber_v(surface, &p, psi)
        };
        let der = (-shift(2.0 * h) + 8.0 * shift(h) - 8.0 * shift(-h) + shift(-2.0 * h))
            / (12.0 * h);
        let ei = Vector2::new(if i == 0 { 1.0 } else { 0.0 }, if i == 1 { 1.0 } else { 0.0 });
        dv[i] = der + gam.contract(&ei, &v);
    }
    let w = {
        let shift = |s: f64| fiber_v(surface, &q, psi + s);
        (-shift(2.0 * h) + 8.0 * shift(h) - 8.0 * shift(-h) + shift(-2.0 * h)) / (12.0 * h)
    };
    let ip = |x: &BaseVec, yv: &BaseVec| (x.transpose() * g * yv)[(0, 0)];
    let mut m = Matrix3::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let ei = Vector2::new(if i == 0 { 1.0 } else { 0.0 }, if i == 1 { 1.0 } else { 0.0 });
            let ej = Vector2::new(if j == 0 { 1.0 } else { 0.0 }, if j == 1 { 1.0 } else { 0.0 });
            m[(i, j)] = (a + c) * ip(&ei, &ej) + d * ip(&ei, &v) * ip(&ej, &v)
                + a * ip(&dv[i], &dv[j]);
        }
    }
    for i in 0..2 {
        let val = a * ip(&dv[i], &w);
        m[(i, 2)] = val;
        m[(2, i)] = val;
    }
    m[(2, 2)] = a * ip(&w, &w);
    m
}

/// Christoffel symbols of the 3-metric by finite differences.
pub fn t1_christoffels(
    params: &MetricParams,
    surface: &SurfaceModel,
    y: &Vector3<f64>,
) -> [Matrix3<f64>; 3] {
    let h = 1e-4;
    let mut dg = [Matrix3::zeros(), Matrix3::zeros(), Matrix3::zeros()];
    for k in 0..3 {
        let shift = |s: f64| {
            let mut p = *y;
            p[k] += s;
            t1_metric(params, surface, &p)
        };
        dg[k] = (-shift(2.0 * h) + 8.0 * shift(h) - 8.0 * shift(-h) + shift(-2.0 * h))
            / (12.0 * h);
    }
    let gi = t1_metric(params, surface, y).try_inverse().unwrap();
    let mut out = [Matrix3::zeros(), Matrix3::zeros(), Matrix3::zeros()];
    for kk in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for l in 0..3 {
                    s += gi[(kk, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                out[kk][(i, j)] = 0.5 * s;
            }
        }
    }
    out
}

/// Covariant derivative along y(t) of a 3-component field, standard formula
/// with the finite-difference Christoffels (5-point stencils throughout).
pub fn t1_cov_along(
    params: &MetricParams,
    surface: &SurfaceModel,
    yf: &dyn Fn(f64) -> Vector3<f64>,
    field: &dyn Fn(f64) -> Vector3<f64>,
    t: f64,
    h: f64,
) -> Vector3<f64> {
    let yd = (-yf(t + 2.0 * h) + 8.0 * yf(t + h) - 8.0 * yf(t - h) + yf(t - 2.0 * h))
        / (12.0 * h);
    let df = (-field(t + 2.0 * h) + 8.0 * field(t + h) - 8.0 * field(t - h)
        + field(t - 2.0 * h))
        / (12.0 * h);
    let gam = t1_christoffels(params, surface, &yf(t));
    let mut out = df;
    for k in 0..3 {
        out[k] += (yd.transpose() * gam[k] * field(t))[(0, 0)];
    }
    out
}

/// Velocity of the 3-coordinate curve.
pub fn t1_velocity(yf: &dyn Fn(f64) -> Vector3<f64>, t: f64, h: f64) -> Vector3<f64> {
    (-yf(t + 2.0 * h) + 8.0 * yf(t + h) - 8.0 * yf(t - h) + yf(t - 2.0 * h)) / (12.0 * h)
}
