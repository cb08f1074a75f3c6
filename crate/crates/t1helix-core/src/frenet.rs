//! Frenet apparatus for non-null curves and Cartan apparatus for null curves
//! on T₁M.
//!
//! Non-null, arc-length parameterized, with frame {T, W₁, W₂}:
//!
//! ```text
//! ∇̃_T T  =  ε₁ κ_λ W₁
//! ∇̃_T W₁ = −ε_λ κ_λ T − ε₂ τ W₂
//! ∇̃_T W₂ =  ε₁ τ W₁
//! ```
//!
//! Null, pseudo-arc parameterized (G̃(λ'', λ'') = 1), with frame {T, W, N}:
//!
//! ```text
//! ∇̃_T T = W,   ∇̃_T W = −κ_λ T − N,   ∇̃_T N = κ_λ W
//! N = −λ⁽³⁾ − ½ G̃(λ⁽³⁾, λ⁽³⁾) λ',   κ_λ = ½ G̃(λ⁽³⁾, λ⁽³⁾)
//! ```
//!
//! All covariant derivatives along the curve are taken through the connection
//! transport of sampled component fields; the closed-form jerk expression is
//! never used here, so the frames stay valid on non-helix curves too.

use crate::curves::CurveSample;
use crate::error::{GeoError, Result};
use crate::metric::{g_tilde_rho, MetricParams, T1Vec};
use crate::numerics::series_stats;
use crate::surface::{BaseVec, ChartPoint};
use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::Serialize;

/// Default curvature floor below which the Frenet frame is degenerate.
pub const TOL_FRAME: f64 = 1e-7;

/// Frenet data along an arc-length curve.
#[derive(Debug, Clone, Serialize)]
pub struct FrenetData {
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub eps_lambda: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// Max positive-frame norms of the three Frenet equation residuals.
    pub residuals: FrameResiduals,
    #[serde(skip)]
    pub frames: Vec<[T1Vec; 3]>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrameResiduals {
    pub eq1: f64,
    pub eq2: f64,
    pub eq3: f64,
}

/// Cartan data along a pseudo-arc null curve.
#[derive(Debug, Clone, Serialize)]
pub struct CartanData {
    /// Lightlike curvature κ_λ = ½ G̃(λ⁽³⁾, λ⁽³⁾) per sample.
    pub kappa: Vec<f64>,
    /// Max deviations of the five Gram relations
    /// (T·T, N·N, T·W, N·W, T·N−1) plus the pseudo-arc norm W·W−1.
    pub gram_residuals: [f64; 6],
    /// Max residuals of the three Cartan equations.
    pub residuals: FrameResiduals,
    #[serde(skip)]
    pub frames: Vec<[T1Vec; 3]>,
}

impl FrenetData {
    /// Serialized report: `{kappa: series, tau: series, eps: [ε_λ, ε₁, ε₂],
    /// residuals: {eq1, eq2, eq3}}`.
    pub fn to_report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kappa": self.kappa,
            "tau": self.tau,
            "eps": [self.eps_lambda, self.eps1, self.eps2],
            "residuals": self.residuals,
        })
    }
}

impl CartanData {
    /// Serialized report: `{kappa_lightlike: series, gram_residuals: {...},
    /// residuals: {eq1, eq2, eq3}}`.
    pub fn to_report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kappa_lightlike": self.kappa,
            "gram_residuals": {
                "tt": self.gram_residuals[0],
                "nn": self.gram_residuals[1],
                "tw": self.gram_residuals[2],
                "nw": self.gram_residuals[3],
                "tn_minus_one": self.gram_residuals[4],
                "ww_minus_one": self.gram_residuals[5],
            },
            "residuals": self.residuals,
        })
    }
}

/// Pairwise G̃ inner products of a list of T₁M vectors at a point.
pub fn frame_gram(
    params: &MetricParams,
    surface: &crate::surface::SurfaceModel,
    point: &ChartPoint,
    u: &BaseVec,
    frame: &[T1Vec],
    rho: f64,
) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    for (i, zi) in frame.iter().enumerate() {
        for (j, zj) in frame.iter().enumerate() {
            m[(i, j)] = g_tilde_rho(params, surface, point, u, zi, zj, rho);
        }
    }
    m
}

/// Adapted basis {e^h, u^h, e^t} at a curve sample, with the diagonal G̃
/// values; used to complete frames and take positive norms.
struct AdaptedBasis {
    e: BaseVec,
    diag: [f64; 3],
}

fn adapted_basis(
    params: &MetricParams,
    sample: &CurveSample,
    point: &ChartPoint,
    u: &BaseVec,
) -> AdaptedBasis {
    let g: Matrix2<f64> = sample.surface.metric(point).expect("interior point");
    let cov = Vector2::new(-u[1], u[0]);
    let e_raw = g.try_inverse().expect("non-degenerate") * cov;
    let en = (e_raw.transpose() * g * e_raw)[(0, 0)];
    let e = e_raw / en.abs().sqrt();
    let eta = en.signum();
    let (a, c) = (params.a, params.c);
    let rho = sample.rho;
    AdaptedBasis {
        e,
        diag: [(a + c) * eta, (a + c) * rho + params.d * rho * rho, a * eta],
    }
}

impl AdaptedBasis {
    /// Coordinates of a T₁M vector in the (unnormalized) adapted basis.
    fn coords(
        &self,
        sample: &CurveSample,
        point: &ChartPoint,
        u: &BaseVec,
        z: &T1Vec,
    ) -> Vector3<f64> {
        let g = |x: &BaseVec, y: &BaseVec| sample.surface.inner(point, x, y);
        let gee = g(&self.e, &self.e); // ±1
        Vector3::new(
            g(&z.horiz, &self.e) / gee,
            g(&z.horiz, u) / sample.rho,
            g(&z.tang, &self.e) / gee,
        )
    }

    fn vec_from_coords(&self, u: &BaseVec, w: &Vector3<f64>) -> T1Vec {
        T1Vec::new(w[0] * self.e + w[1] * u, w[2] * self.e)
    }

    /// G̃ of two adapted-coordinate vectors.
    fn pair(&self, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
        a[0] * b[0] * self.diag[0] + a[1] * b[1] * self.diag[1] + a[2] * b[2] * self.diag[2]
    }

    /// Positive-definite norm: orthonormalize the basis by sign.
    fn positive_norm(&self, w: &Vector3<f64>) -> f64 {
        (w[0] * w[0] * self.diag[0].abs()
            + w[1] * w[1] * self.diag[1].abs()
            + w[2] * w[2] * self.diag[2].abs())
        .sqrt()
    }
}

/// Max positive-frame norm of a T₁M field over the window interior.
fn max_positive_norm(params: &MetricParams, sample: &CurveSample, field: &[T1Vec]) -> f64 {
    let m = sample.ghost_margin() + sample.stats_margin();
    let n = sample.internal_count();
    let mut worst: f64 = 0.0;
    for j in m..n - m {
        let d = sample.derivs_internal(j);
        let basis = adapted_basis(params, sample, &d.point, &d.v);
        let w = basis.coords(sample, &d.point, &d.v, &field[j]);
        worst = worst.max(basis.positive_norm(&w));
    }
    worst
}

/// Frenet frame, curvature and torsion of an arc-length non-null curve.
pub fn frenet_apparatus(params: &MetricParams, sample: &CurveSample) -> Result<FrenetData> {
    let ch = sample.causal_character_window(params)?;
    if ch == 0 {
        return Err(GeoError::NullCurve);
    }
    let mid = sample.len() / 2;
    let sp = sample.speed_squared(params, mid);
    if (sp.abs() - 1.0).abs() > 1e-4 {
        return Err(GeoError::UnnormalizedCurve(sp));
    }
    let eps_lambda = ch as f64;

    let total = sample.internal_count();
    let vel = sample.velocity_series_internal();
    let acc = sample.acceleration_series_internal(params);
    let m = sample.ghost_margin() + sample.stats_margin();

    // curvature and second causal character
    let mut q_series = vec![0.0; total];
    for j in 0..total {
        let d = sample.derivs_internal(j);
        q_series[j] = g_tilde_rho(params, &sample.surface, &d.point, &d.v, &acc[j], &acc[j], d.rho);
    }
    let q_stats = series_stats(&q_series[m..total - m], 0);
    let eps1 = q_stats.mean.signum();
    // λ'' must have a fixed causal class over the window for a Frenet frame
    // to exist: reject sign changes (the normal crosses the light cone),
    // uniformly lightlike normals, and vanishing curvature
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    let mut abs_q_min = f64::INFINITY;
    let mut n2_max: f64 = 0.0;
    for j in m..total - m {
        let d = sample.derivs_internal(j);
        let basis = adapted_basis(params, sample, &d.point, &d.v);
        let acc_w = basis.coords(sample, &d.point, &d.v, &acc[j]);
        q_min = q_min.min(q_series[j]);
        q_max = q_max.max(q_series[j]);
        abs_q_min = abs_q_min.min(q_series[j].abs());
        n2_max = n2_max.max(basis.positive_norm(&acc_w).powi(2));
    }
    if q_min < 0.0 && q_max > 0.0 {
        return Err(GeoError::LightlikeNormal {
            q: abs_q_min,
            n: n2_max,
        });
    }
    if n2_max > 1e-9 && q_max.abs().max(q_min.abs()) < 1e-9 * n2_max {
        return Err(GeoError::LightlikeNormal {
            q: abs_q_min,
            n: n2_max,
        });
    }
    if abs_q_min.sqrt() < TOL_FRAME {
        return Err(GeoError::FrameDegenerate(abs_q_min.sqrt()));
    }
    let kappa_internal: Vec<f64> = q_series.iter().map(|q| q.abs().sqrt()).collect();

    // W1 = acc/(ε1 κ); W2 completes the frame with deterministic orientation
    let w1: Vec<T1Vec> = (0..total)
        .map(|j| acc[j].scale(1.0 / (eps1 * kappa_internal[j])))
        .collect();
    let mut w2 = Vec::with_capacity(total);
    let mut eps2_mid = 0.0;
    for j in 0..total {
        let d = sample.derivs_internal(j);
        let basis = adapted_basis(params, sample, &d.point, &d.v);
        let tc = basis.coords(sample, &d.point, &d.v, &vel[j]);
        let w1c = basis.coords(sample, &d.point, &d.v, &w1[j]);
        // covectors of T and W1 in the diagonal basis
        let alpha = Vector3::new(tc[0] * basis.diag[0], tc[1] * basis.diag[1], tc[2] * basis.diag[2]);
        let beta = Vector3::new(
            w1c[0] * basis.diag[0],
            w1c[1] * basis.diag[1],
            w1c[2] * basis.diag[2],
        );
        let mut wc = alpha.cross(&beta);
        // orientation: positive determinant against the adapted basis
        let det = Matrix3::from_columns(&[tc, w1c, wc]).determinant();
        if det < 0.0 {
            wc = -wc;
        }
        let norm2 = basis.pair(&wc, &wc);
        let wcn = wc / norm2.abs().sqrt();
        if j == total / 2 {
            eps2_mid = norm2.signum();
        }
        w2.push(basis.vec_from_coords(&d.v, &wcn));
    }
    let eps2 = eps2_mid;

    // τ from the second Frenet equation
    let nabla_w1 = sample.transport_series(params, &w1);
    let mut tau_internal = vec![0.0; total];
    for j in 0..total {
        let d = sample.derivs_internal(j);
        tau_internal[j] = -g_tilde_rho(
            params,
            &sample.surface,
            &d.point,
            &d.v,
            &nabla_w1[j],
            &w2[j],
            d.rho,
        );
    }

    // residuals of the three equations, via independently transported fields
    let nabla_t = sample.transport_series(params, &vel);
    let nabla_w2 = sample.transport_series(params, &w2);
    let r1: Vec<T1Vec> = (0..total)
        .map(|j| nabla_t[j].sub(&w1[j].scale(eps1 * kappa_internal[j])))
        .collect();
    let r2: Vec<T1Vec> = (0..total)
        .map(|j| {
            nabla_w1[j]
                .add(&vel[j].scale(eps_lambda * kappa_internal[j]))
                .add(&w2[j].scale(eps2 * tau_internal[j]))
        })
        .collect();
    let r3: Vec<T1Vec> = (0..total)
        .map(|j| nabla_w2[j].sub(&w1[j].scale(eps1 * tau_internal[j])))
        .collect();
    let residuals = FrameResiduals {
        eq1: max_positive_norm(params, sample, &r1),
        eq2: max_positive_norm(params, sample, &r2),
        eq3: max_positive_norm(params, sample, &r3),
    };

    let g0 = sample.ghost_margin();
    let n = sample.len();
    let frames: Vec<[T1Vec; 3]> = (0..n)
        .map(|i| [vel[i + g0], w1[i + g0], w2[i + g0]])
        .collect();
    Ok(FrenetData {
        kappa: kappa_internal[g0..g0 + n].to_vec(),
        tau: tau_internal[g0..g0 + n].to_vec(),
        eps_lambda,
        eps1,
        eps2,
        residuals,
        frames,
    })
}

/// Cartan frame and lightlike curvature of a pseudo-arc null curve.
pub fn cartan_apparatus(params: &MetricParams, sample: &CurveSample) -> Result<CartanData> {
    let ch = sample.causal_character_window(params)?;
    if ch != 0 {
        return Err(GeoError::NotNull(sample.speed_squared(params, sample.len() / 2)));
    }
    let total = sample.internal_count();
    let vel = sample.velocity_series_internal();
    let acc = sample.acceleration_series_internal(params);
    let m = sample.ghost_margin() + sample.stats_margin();
    // pseudo-arc normalization check
    for j in m..total - m {
        let d = sample.derivs_internal(j);
        let q = g_tilde_rho(params, &sample.surface, &d.point, &d.v, &acc[j], &acc[j], d.rho);
        if (q - 1.0).abs() > 1e-4 {
            return Err(GeoError::NotPseudoArc(q));
        }
    }
    let jerk = sample.transport_series(params, &acc);
    let mut kappa = vec![0.0; total];
    let mut nfield = Vec::with_capacity(total);
    for j in 0..total {
        let d = sample.derivs_internal(j);
        let k = 0.5
            * g_tilde_rho(params, &sample.surface, &d.point, &d.v, &jerk[j], &jerk[j], d.rho);
        kappa[j] = k;
        nfield.push(jerk[j].scale(-1.0).sub(&vel[j].scale(k)));
    }

    // Gram relations
    let mut gram: [f64; 6] = [0.0; 6];
    for j in m..total - m {
        let d = sample.derivs_internal(j);
        let gt = |a: &T1Vec, b: &T1Vec| {
            g_tilde_rho(params, &sample.surface, &d.point, &d.v, a, b, d.rho)
        };
        gram[0] = gram[0].max(gt(&vel[j], &vel[j]).abs());
        gram[1] = gram[1].max(gt(&nfield[j], &nfield[j]).abs());
        gram[2] = gram[2].max(gt(&vel[j], &acc[j]).abs());
        gram[3] = gram[3].max(gt(&nfield[j], &acc[j]).abs());
        gram[4] = gram[4].max((gt(&vel[j], &nfield[j]) - 1.0).abs());
        gram[5] = gram[5].max((gt(&acc[j], &acc[j]) - 1.0).abs());
    }

    // Cartan equation residuals
    let nabla_t = sample.transport_series(params, &vel);
    let nabla_w = sample.transport_series(params, &acc);
    let nabla_n = sample.transport_series(params, &nfield);
    let r1: Vec<T1Vec> = (0..total).map(|j| nabla_t[j].sub(&acc[j])).collect();
    let r2: Vec<T1Vec> = (0..total)
        .map(|j| {
            nabla_w[j]
                .add(&vel[j].scale(kappa[j]))
                .add(&nfield[j])
        })
        .collect();
    let r3: Vec<T1Vec> = (0..total)
        .map(|j| nabla_n[j].sub(&acc[j].scale(kappa[j])))
        .collect();
    let residuals = FrameResiduals {
        eq1: max_positive_norm(params, sample, &r1),
        eq2: max_positive_norm(params, sample, &r2),
        eq3: max_positive_norm(params, sample, &r3),
    };

    let g0 = sample.ghost_margin();
    let n = sample.len();
    let frames: Vec<[T1Vec; 3]> = (0..n)
        .map(|i| [vel[i + g0], acc[i + g0], nfield[i + g0]])
        .collect();
    Ok(CartanData {
        kappa: kappa[g0..g0 + n].to_vec(),
        gram_residuals: gram,
        residuals,
        frames,
    })
}
