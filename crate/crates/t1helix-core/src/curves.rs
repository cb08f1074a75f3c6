//! Curve construction and analysis on T₁M: families, fixtures, parallel
//! transport, causal characters, arc-length and pseudo-arc reparametrization,
//! and pseudo-Riemannian circle detection.
//!
//! A curve λ = (x, V) is sampled on a uniform grid. Analytic curves carry
//! their defining closure, so reparametrizations re-evaluate the closed form
//! instead of interpolating; tabulated curves fall back to spline resampling.
//! Sampling extends the declared window by a ghost margin so that the nested
//! 5-point stencils used for third covariant derivatives stay central
//! everywhere inside the window.

use crate::connection::{curve_acceleration, project_tangential, CurveDerivatives};
use crate::error::{GeoError, Result};
use crate::metric::{g_tilde_rho, MetricParams, T1Vec};
use crate::numerics::{cumtrapz, deriv_series, is_constant, CubicSpline, MonotoneCubic, STATS_MARGIN};
use crate::surface::{BaseVec, ChartPoint, SurfaceModel};
use nalgebra::{Matrix2, Vector2, Vector3};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Closed-form description of a curve: t ↦ (x(t), V(t)) in chart components.
pub type CurveFn = Arc<dyn Fn(f64) -> (ChartPoint, BaseVec) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveFamily {
    Vertical,
    HorizontalLift,
    Oblique,
    T1Geodesic,
    Custom,
}

/// A buildable curve specification.
#[derive(Clone)]
pub struct CurveSpec {
    pub label: String,
    pub family: CurveFamily,
    pub surface: SurfaceModel,
    pub params: MetricParams,
    pub window: (f64, f64),
    pub samples: usize,
    /// Fiber square g(V, V); −1 only for geodesic-flow curves over timelike
    /// unit fields.
    pub rho: f64,
    pub path: CurveFn,
}

impl std::fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CurveSpec")
            .field("label", &self.label)
            .field("family", &self.family)
            .field("surface", &self.surface)
            .field("window", &self.window)
            .field("samples", &self.samples)
            .finish_non_exhaustive()
    }
}

enum Source {
    Analytic(CurveFn),
    Table,
}

/// A sampled curve with cached covariant derivatives.
pub struct CurveSample {
    pub surface: SurfaceModel,
    pub rho: f64,
    t0: f64,
    h: f64,
    n: usize,
    margin: usize,
    pts: Vec<ChartPoint>,
    vs: Vec<BaseVec>,
    xd: Vec<BaseVec>,
    xdd: Vec<BaseVec>,
    xddd: Vec<BaseVec>,
    vd: Vec<BaseVec>,
    vdd: Vec<BaseVec>,
    vddd: Vec<BaseVec>,
    source: Source,
}

/// Ghost margin added around the declared window for analytic curves.
const GHOST: usize = 8;

fn unwrap_periodic(series: &mut [f64]) {
    let period = 2.0 * std::f64::consts::PI;
    for i in 1..series.len() {
        let mut d = series[i] - series[i - 1];
        while d > period / 2.0 {
            series[i] -= period;
            d = series[i] - series[i - 1];
        }
        while d < -period / 2.0 {
            series[i] += period;
            d = series[i] - series[i - 1];
        }
    }
}

impl CurveSample {
    /// Sample a closed-form curve on `samples` uniform points over `window`.
    pub fn from_closed_form(
        surface: SurfaceModel,
        path: CurveFn,
        window: (f64, f64),
        samples: usize,
        rho: f64,
    ) -> Result<Self> {
        if window.1 <= window.0 || !window.0.is_finite() || !window.1.is_finite() {
            return Err(GeoError::EmptyWindow);
        }
        if samples < 64 {
            return Err(GeoError::TooFewSamples(samples));
        }
        let h = (window.1 - window.0) / (samples - 1) as f64;
        let total = samples + 2 * GHOST;
        let mut pts = Vec::with_capacity(total);
        let mut vs = Vec::with_capacity(total);
        for i in 0..total {
            let t = window.0 + (i as f64 - GHOST as f64) * h;
            let (p, v) = path(t);
            pts.push(p);
            vs.push(v);
        }
        let mut phi_series: Vec<f64> = pts.iter().map(|p| p.coords[1]).collect();
        unwrap_periodic(&mut phi_series);
        for (p, phi) in pts.iter_mut().zip(&phi_series) {
            p.coords[1] = *phi;
        }
        let mut s = CurveSample {
            surface,
            rho,
            t0: window.0,
            h,
            n: samples,
            margin: GHOST,
            pts,
            vs,
            xd: vec![],
            xdd: vec![],
            xddd: vec![],
            vd: vec![],
            vdd: vec![],
            vddd: vec![],
            source: Source::Analytic(path),
        };
        s.compute_derivatives()?;
        Ok(s)
    }

    /// Build from tabulated samples on a uniform grid (no ghost margin;
    /// one-sided stencils near the window ends).
    pub fn from_table(
        surface: SurfaceModel,
        t0: f64,
        h: f64,
        pts: Vec<ChartPoint>,
        vs: Vec<BaseVec>,
        rho: f64,
    ) -> Result<Self> {
        Self::from_table_extended(surface, t0, h, pts, vs, rho, 0)
    }

    /// Build from tabulated samples that already include `margin` ghost
    /// points on each side of the declared window; `t0` is the window start.
    pub fn from_table_extended(
        surface: SurfaceModel,
        t0: f64,
        h: f64,
        pts: Vec<ChartPoint>,
        vs: Vec<BaseVec>,
        rho: f64,
        margin: usize,
    ) -> Result<Self> {
        if pts.len() != vs.len() || pts.len() < 64 + 2 * margin {
            return Err(GeoError::TooFewSamples(pts.len()));
        }
        let n = pts.len() - 2 * margin;
        let mut s = CurveSample {
            surface,
            rho,
            t0,
            h,
            n,
            margin,
            pts,
            vs,
            xd: vec![],
            xdd: vec![],
            xddd: vec![],
            vd: vec![],
            vdd: vec![],
            vddd: vec![],
            source: Source::Table,
        };
        s.compute_derivatives()?;
        Ok(s)
    }

    fn compute_derivatives(&mut self) -> Result<()> {
        let total = self.pts.len();
        // fiber invariant |g(V,V) − ρ| < 1e−8 over the declared window
        for j in self.margin..self.margin + self.n {
            let gvv = self.surface.inner(&self.pts[j], &self.vs[j], &self.vs[j]);
            if (gvv - self.rho).abs() > 1e-8 {
                return Err(GeoError::NotUnitFiber(gvv));
            }
        }
        let comp = |field: &[BaseVec], k: usize| -> Vec<f64> {
            field.iter().map(|v| v[k]).collect()
        };
        let q0: Vec<f64> = self.pts.iter().map(|p| p.coords[0]).collect();
        let q1: Vec<f64> = self.pts.iter().map(|p| p.coords[1]).collect();
        let d0 = deriv_series(&q0, self.h);
        let d1 = deriv_series(&q1, self.h);
        self.xd = (0..total).map(|i| Vector2::new(d0[i], d1[i])).collect();

        let gammas: Vec<_> = self
            .pts
            .iter()
            .map(|p| self.surface.christoffels(p))
            .collect::<Result<Vec<_>>>()?;

        let cov = |field: &[BaseVec], s: &CurveSample| -> Vec<BaseVec> {
            let f0 = deriv_series(&comp(field, 0), s.h);
            let f1 = deriv_series(&comp(field, 1), s.h);
            (0..total)
                .map(|i| {
                    Vector2::new(f0[i], f1[i]) + gammas[i].contract(&s.xd[i], &field[i])
                })
                .collect()
        };
        let xd = self.xd.clone();
        self.xdd = cov(&xd, self);
        let xdd = self.xdd.clone();
        self.xddd = cov(&xdd, self);
        let vs = self.vs.clone();
        self.vd = cov(&vs, self);
        let vd = self.vd.clone();
        self.vdd = cov(&vd, self);
        let vdd = self.vdd.clone();
        self.vddd = cov(&vdd, self);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.h
    }

    pub fn point(&self, i: usize) -> ChartPoint {
        self.pts[i + self.margin]
    }

    pub fn fiber(&self, i: usize) -> BaseVec {
        self.vs[i + self.margin]
    }

    /// All covariant derivatives of the curve at sample `i`.
    pub fn derivs(&self, i: usize) -> CurveDerivatives {
        let j = i + self.margin;
        CurveDerivatives {
            point: self.pts[j],
            xd: self.xd[j],
            xdd: self.xdd[j],
            xddd: self.xddd[j],
            v: self.vs[j],
            vd: self.vd[j],
            vdd: self.vdd[j],
            vddd: self.vddd[j],
            rho: self.rho,
        }
    }

    /// λ' = ẋ^h + (∇_ẋV)^t at sample `i`.
    pub fn velocity(&self, i: usize) -> T1Vec {
        let d = self.derivs(i);
        T1Vec::new(
            d.xd,
            project_tangential(&self.surface, &d.point, &d.v, &d.vd, self.rho),
        )
    }

    /// Base speed σ(t) = g(ẋ, ẋ).
    pub fn sigma(&self, i: usize) -> f64 {
        let d = self.derivs(i);
        self.surface.inner(&d.point, &d.xd, &d.xd)
    }

    /// G̃(λ', λ') at sample `i`.
    pub fn speed_squared(&self, params: &MetricParams, i: usize) -> f64 {
        let d = self.derivs(i);
        let t = self.velocity(i);
        g_tilde_rho(params, &self.surface, &d.point, &d.v, &t, &t, self.rho)
    }

    /// Interior margin for statistics over derived series.
    pub fn stats_margin(&self) -> usize {
        if self.margin > 0 {
            2
        } else {
            STATS_MARGIN
        }
    }

    pub(crate) fn internal_count(&self) -> usize {
        self.pts.len()
    }

    pub(crate) fn ghost_margin(&self) -> usize {
        self.margin
    }

    pub(crate) fn derivs_internal(&self, j: usize) -> CurveDerivatives {
        CurveDerivatives {
            point: self.pts[j],
            xd: self.xd[j],
            xdd: self.xdd[j],
            xddd: self.xddd[j],
            v: self.vs[j],
            vd: self.vd[j],
            vdd: self.vdd[j],
            vddd: self.vddd[j],
            rho: self.rho,
        }
    }

    /// Covariant derivative ∇̃_T of a T₁M field given on the internal grid,
    /// by finite differences of its components plus the connection terms.
    pub(crate) fn transport_series(
        &self,
        params: &MetricParams,
        field: &[T1Vec],
    ) -> Vec<T1Vec> {
        use crate::connection::transport_along;
        let total = self.internal_count();
        assert_eq!(field.len(), total);
        let comp = |sel: fn(&T1Vec) -> BaseVec, k: usize| -> Vec<f64> {
            field.iter().map(|z| sel(z)[k]).collect()
        };
        let hp = |z: &T1Vec| z.horiz;
        let tp = |z: &T1Vec| z.tang;
        let dp0 = deriv_series(&comp(hp, 0), self.h);
        let dp1 = deriv_series(&comp(hp, 1), self.h);
        let dq0 = deriv_series(&comp(tp, 0), self.h);
        let dq1 = deriv_series(&comp(tp, 1), self.h);
        (0..total)
            .map(|j| {
                let gam = self.surface.christoffels(&self.pts[j]).expect("interior");
                let dp = Vector2::new(dp0[j], dp1[j]) + gam.contract(&self.xd[j], &field[j].horiz);
                let dq = Vector2::new(dq0[j], dq1[j]) + gam.contract(&self.xd[j], &field[j].tang);
                transport_along(
                    params,
                    &self.surface,
                    &self.pts[j],
                    &self.vs[j],
                    &self.vd[j],
                    &self.xd[j],
                    &field[j].horiz,
                    &field[j].tang,
                    &dp,
                    &dq,
                    self.rho,
                )
            })
            .collect()
    }

    /// Velocity field λ' on the internal grid.
    pub(crate) fn velocity_series_internal(&self) -> Vec<T1Vec> {
        (0..self.internal_count())
            .map(|j| {
                T1Vec::new(
                    self.xd[j],
                    project_tangential(&self.surface, &self.pts[j], &self.vs[j], &self.vd[j], self.rho),
                )
            })
            .collect()
    }

    /// Acceleration field ∇̃_T T on the internal grid, from the closed-form
    /// second-derivative expression.
    pub(crate) fn acceleration_series_internal(&self, params: &MetricParams) -> Vec<T1Vec> {
        (0..self.internal_count())
            .map(|j| curve_acceleration(params, &self.surface, &self.derivs_internal(j)))
            .collect()
    }

    /// Third derivative ∇̃_T ∇̃_T T on the internal grid via the transport
    /// route (exact for arbitrary curves, unlike the closed-form jerk which
    /// assumes a constant slant).
    pub(crate) fn jerk_series_internal(&self, params: &MetricParams) -> Vec<T1Vec> {
        let acc = self.acceleration_series_internal(params);
        self.transport_series(params, &acc)
    }

    /// Sign of G̃(λ', λ') with |value| < 1e−9 mapped to 0.
    pub fn causal_character(&self, params: &MetricParams, i: usize) -> i8 {
        let v = self.speed_squared(params, i);
        if v.abs() < 1e-9 {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Causal character over the whole window; error when it changes.
    pub fn causal_character_window(&self, params: &MetricParams) -> Result<i8> {
        let m = self.stats_margin();
        let first = self.causal_character(params, m);
        for i in m..self.n - m {
            if self.causal_character(params, i) != first {
                return Err(GeoError::CausalTypeChanges);
            }
        }
        Ok(first)
    }

    fn integrand_table(&self, w: impl Fn(usize) -> f64) -> (Vec<f64>, Vec<f64>) {
        // arc function over the internal grid, zeroed at the window start
        let total = self.pts.len();
        let vals: Vec<f64> = (0..total).map(w).collect();
        let s_raw = cumtrapz(&vals, self.h);
        let offset = s_raw[self.margin];
        let ts: Vec<f64> = (0..total)
            .map(|i| self.t0 + (i as f64 - self.margin as f64) * self.h)
            .collect();
        let ss: Vec<f64> = s_raw.iter().map(|v| v - offset).collect();
        (ts, ss)
    }

    fn reparametrize(&self, ts: Vec<f64>, ss: Vec<f64>) -> Result<CurveSample> {
        let s_end = ss[self.margin + self.n - 1];
        let inv = MonotoneCubic::new(ss, ts);
        match &self.source {
            Source::Analytic(f) => {
                let f = f.clone();
                let path: CurveFn = Arc::new(move |s| f(inv.eval(s)));
                CurveSample::from_closed_form(self.surface, path, (0.0, s_end), self.n, self.rho)
            }
            Source::Table => {
                let grid_t: Vec<f64> = (0..self.n).map(|i| self.t(i)).collect();
                let cols: Vec<Vec<f64>> = [
                    self.pts[self.margin..self.margin + self.n]
                        .iter()
                        .map(|p| p.coords[0])
                        .collect::<Vec<_>>(),
                    self.pts[self.margin..self.margin + self.n]
                        .iter()
                        .map(|p| p.coords[1])
                        .collect::<Vec<_>>(),
                    self.vs[self.margin..self.margin + self.n]
                        .iter()
                        .map(|v| v[0])
                        .collect::<Vec<_>>(),
                    self.vs[self.margin..self.margin + self.n]
                        .iter()
                        .map(|v| v[1])
                        .collect::<Vec<_>>(),
                ]
                .to_vec();
                let splines: Vec<CubicSpline> = cols
                    .into_iter()
                    .map(|c| CubicSpline::new(grid_t.clone(), c))
                    .collect();
                let hs = s_end / (self.n - 1) as f64;
                let mut pts = Vec::with_capacity(self.n);
                let mut vs = Vec::with_capacity(self.n);
                for j in 0..self.n {
                    let s = j as f64 * hs;
                    let t = inv.eval(s);
                    pts.push(ChartPoint::new(splines[0].eval(t), splines[1].eval(t)));
                    vs.push(BaseVec::new(splines[2].eval(t), splines[3].eval(t)));
                }
                CurveSample::from_table(self.surface, 0.0, hs, pts, vs, self.rho)
            }
        }
    }

    /// Reparametrize a non-null curve by T₁M arc length: the new parameter
    /// satisfies |G̃(λ', λ')| = 1.
    pub fn arclength_reparam(&self, params: &MetricParams) -> Result<CurveSample> {
        let ch = self.causal_character_window(params)?;
        if ch == 0 {
            return Err(GeoError::NullCurve);
        }
        let (ts, ss) = self.integrand_table(|i| {
            let d = CurveDerivatives {
                point: self.pts[i],
                xd: self.xd[i],
                xdd: self.xdd[i],
                xddd: self.xddd[i],
                v: self.vs[i],
                vd: self.vd[i],
                vdd: self.vdd[i],
                vddd: self.vddd[i],
                rho: self.rho,
            };
            let t = T1Vec::new(
                d.xd,
                project_tangential(&self.surface, &d.point, &d.v, &d.vd, self.rho),
            );
            g_tilde_rho(params, &self.surface, &d.point, &d.v, &t, &t, self.rho)
                .abs()
                .sqrt()
        });
        self.reparametrize(ts, ss)
    }

    /// Reparametrize a null curve by the pseudo-arc parameter: the new
    /// parameter satisfies G̃(λ'', λ'') = 1.
    pub fn pseudo_arc_reparam(&self, params: &MetricParams) -> Result<CurveSample> {
        let ch = self.causal_character_window(params)?;
        if ch != 0 {
            let v = self.speed_squared(params, self.n / 2);
            return Err(GeoError::NotNull(v));
        }
        let m = self.stats_margin();
        // require G~(λ'',λ'') > 0 over the window
        for i in m..self.n - m {
            let d = self.derivs(i);
            let acc = curve_acceleration(params, &self.surface, &d);
            let q = g_tilde_rho(params, &self.surface, &d.point, &d.v, &acc, &acc, self.rho);
            if q.abs() < 1e-9 {
                return Err(GeoError::NullGeodesic);
            }
            if q < 0.0 {
                return Err(GeoError::NotPseudoArc(q));
            }
        }
        let (ts, ss) = self.integrand_table(|i| {
            let d = CurveDerivatives {
                point: self.pts[i],
                xd: self.xd[i],
                xdd: self.xdd[i],
                xddd: self.xddd[i],
                v: self.vs[i],
                vd: self.vd[i],
                vdd: self.vdd[i],
                vddd: self.vddd[i],
                rho: self.rho,
            };
            let acc = curve_acceleration(params, &self.surface, &d);
            let q = g_tilde_rho(params, &self.surface, &d.point, &d.v, &acc, &acc, self.rho);
            q.max(1e-12).powf(0.25)
        });
        self.reparametrize(ts, ss)
    }
}

/// Report of the pseudo-Riemannian-circle test for a base path.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CircleReport {
    pub is_circle: bool,
    /// K = √|g(ẍ, ẍ)|.
    pub k: f64,
    /// Sign of g(ẍ, ẍ).
    pub eps_prime: f64,
    /// Fitted coefficient in ∇_ẋ ẍ = K′ ẋ.
    pub k_prime: f64,
    pub residual: f64,
}

/// Detect a pseudo-Riemannian circle: constant speed, constant nonzero
/// g(ẍ, ẍ) and ∇_ẋ ẍ proportional to ẋ with a fitted constant.
pub fn circle_check(sample: &CurveSample) -> Result<CircleReport> {
    let m = sample.stats_margin();
    let n = sample.len();
    let sigmas: Vec<f64> = (0..n).map(|i| sample.sigma(i)).collect();
    let (sigma_const, sig_stats) = is_constant(&sigmas, m, 1e-6);
    if !sigma_const {
        return Err(GeoError::NonConstantSpeed(
            sig_stats.std / sig_stats.mean.abs().max(1e-12),
        ));
    }
    let surf = &sample.surface;
    let acc2: Vec<f64> = (0..n)
        .map(|i| {
            let d = sample.derivs(i);
            surf.inner(&d.point, &d.xdd, &d.xdd)
        })
        .collect();
    let (acc_const, acc_stats) = is_constant(&acc2, m, 1e-6);
    // fit K' from g(∇_ẋ ẍ, ẋ) / g(ẋ, ẋ)
    let mut kp_sum = 0.0;
    let mut resid: f64 = 0.0;
    let mut count = 0usize;
    let mut scale: f64 = 0.0;
    for i in m..n - m {
        let d = sample.derivs(i);
        let num = surf.inner(&d.point, &d.xddd, &d.xd);
        let den = surf.inner(&d.point, &d.xd, &d.xd);
        kp_sum += num / den;
        count += 1;
    }
    let k_prime = kp_sum / count as f64;
    for i in m..n - m {
        let d = sample.derivs(i);
        let r = d.xddd - k_prime * d.xd;
        // positive norm in an orthonormalized base frame
        let g = surf.metric(&d.point).unwrap();
        let rn = (r.transpose() * g * r)[(0, 0)].abs().sqrt();
        resid = resid.max(rn);
        scale = scale.max((d.xddd.transpose() * g * d.xddd)[(0, 0)].abs().sqrt());
    }
    let rel_resid = resid / scale.max(1e-12);
    let k = acc_stats.mean.abs().sqrt();
    let is_circle = acc_const && acc_stats.mean.abs() > 1e-9 && rel_resid < 1e-5;
    Ok(CircleReport {
        is_circle,
        k,
        eps_prime: acc_stats.mean.signum(),
        k_prime,
        residual: rel_resid,
    })
}

/// Parallel transport of `v0` along a base path given as a closure, by RK4
/// on ∇_ẋ V = 0. Returns the transported field on the sample grid.
pub fn parallel_transport(
    surface: &SurfaceModel,
    path: &(dyn Fn(f64) -> ChartPoint + Sync),
    v0: BaseVec,
    window: (f64, f64),
    samples: usize,
) -> Result<Vec<BaseVec>> {
    let h = (window.1 - window.0) / (samples - 1) as f64;
    let vel = |t: f64| -> BaseVec {
        let hf = h * 0.5;
        let (pm2, pm1, pp1, pp2) = (
            path(t - 2.0 * hf),
            path(t - hf),
            path(t + hf),
            path(t + 2.0 * hf),
        );
        let mut d = (-pp2.coords + 8.0 * pp1.coords - 8.0 * pm1.coords + pm2.coords) / (12.0 * hf);
        // periodic-coordinate jumps across the stencil
        if d[1].abs() > 100.0 {
            let p0 = path(t);
            let cont = |p: &ChartPoint| {
                let mut q = *p;
                while q.coords[1] - p0.coords[1] > std::f64::consts::PI {
                    q.coords[1] -= 2.0 * std::f64::consts::PI;
                }
                while q.coords[1] - p0.coords[1] < -std::f64::consts::PI {
                    q.coords[1] += 2.0 * std::f64::consts::PI;
                }
                q
            };
            let (a, b, c, e) = (cont(&pm2), cont(&pm1), cont(&pp1), cont(&pp2));
            d = (-e.coords + 8.0 * c.coords - 8.0 * b.coords + a.coords) / (12.0 * hf);
        }
        d
    };
    let rhs = |t: f64, v: &BaseVec| -> Result<BaseVec> {
        let p = path(t);
        let gam = surface.christoffels(&p).map_err(|e| match e {
            GeoError::PointOutsideChart(_, _) => GeoError::ChartExit(t),
            other => other,
        })?;
        Ok(-gam.contract(&vel(t), v))
    };
    let mut out = Vec::with_capacity(samples);
    let mut v = v0;
    for i in 0..samples {
        out.push(v);
        if i + 1 == samples {
            break;
        }
        let t = window.0 + i as f64 * h;
        let k1 = rhs(t, &v)?;
        let k2 = rhs(t + 0.5 * h, &(v + 0.5 * h * k1))?;
        let k3 = rhs(t + 0.5 * h, &(v + 0.5 * h * k2))?;
        let k4 = rhs(t + h, &(v + h * k3))?;
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(out)
}

/// Convert an ambient tangent vector to chart components: w = g⁻¹ Jᵀ S v.
pub fn vector_to_chart(surface: &SurfaceModel, p: &ChartPoint, v: &Vector3<f64>) -> BaseVec {
    let j = embed_jacobian(surface, p);
    let s = surface.ambient_signature();
    let sv = Vector3::new(s[0] * v[0], s[1] * v[1], s[2] * v[2]);
    let rhs = j.transpose() * sv;
    let g: Matrix2<f64> = surface.metric(p).expect("interior point");
    g.try_inverse().expect("non-degenerate") * rhs
}

/// Jacobian of the embedding, columns ∂e/∂q⁰ and ∂e/∂q¹.
pub fn embed_jacobian(surface: &SurfaceModel, p: &ChartPoint) -> nalgebra::Matrix3x2<f64> {
    use crate::surface::SurfaceKind::*;
    let r = surface.radius;
    let (q0, q1) = (p.coords[0], p.coords[1]);
    let (c0, s0) = match surface.kind {
        Sphere => (q0.cos(), q0.sin()),
        _ => (q0.cosh(), q0.sinh()),
    };
    let (c1, s1) = (q1.cos(), q1.sin());
    match surface.kind {
        Sphere => nalgebra::Matrix3x2::new(
            r * c0 * c1,
            -r * s0 * s1,
            -r * s0,
            0.0,
            r * c0 * s1,
            r * s0 * c1,
        ),
        HyperbolicPlane => nalgebra::Matrix3x2::new(
            r * s0,
            0.0,
            r * c0 * c1,
            -r * s0 * s1,
            r * c0 * s1,
            r * s0 * c1,
        ),
        DeSitter2 => nalgebra::Matrix3x2::new(
            r * c0,
            0.0,
            r * s0 * s1,
            r * c0 * c1,
            r * s0 * c1,
            -r * c0 * s1,
        ),
        AntiDeSitter2 => nalgebra::Matrix3x2::new(
            r * s0 * c1,
            -r * c0 * s1,
            r * s0 * s1,
            r * c0 * c1,
            r * c0,
            0.0,
        ),
    }
}

/// Unit base vector orthogonal to `v` in the chart, oriented so that
/// det[v, n] > 0 in chart coordinates.
pub fn unit_normal(surface: &SurfaceModel, p: &ChartPoint, v: &BaseVec) -> BaseVec {
    let g: Matrix2<f64> = surface.metric(p).expect("interior point");
    let cov = Vector2::new(-v[1], v[0]);
    let n = g.try_inverse().expect("non-degenerate") * cov;
    let nn = (n.transpose() * g * n)[(0, 0)];
    let n = n / nn.abs().sqrt();
    if v[0] * n[1] - v[1] * n[0] > 0.0 {
        n
    } else {
        -n
    }
}

// ---------------------------------------------------------------------------
// fixture catalog
// ---------------------------------------------------------------------------

/// Default parameters of the worked contact example: a = 1, c = 0, d = 3 on
/// the unit sphere.
pub fn contact_example_params() -> MetricParams {
    MetricParams::new(1.0, 0.0, 3.0).unwrap()
}

/// Default parameters of the paracontact example: a = −1/2, c = 3/2, d = 1
/// on curvature −2 bases.
pub fn paracontact_example_params() -> MetricParams {
    MetricParams::new(-0.5, 1.5, 1.0).unwrap()
}

fn fixture_samples() -> usize {
    1024
}

/// Catalog of named constructions used by the verification suites:
///
/// - `fig1-timelike`: geodesic-flow curve λ = (x, ẋ) over the timelike
///   geodesic x(t) = (sinh t, cosh t, 0) of the unit de Sitter surface.
/// - `lightlike-geodesic(δ)`, `timelike-geodesic(δ)`, `spacelike-geodesic(ϱ)`:
///   geodesics of the de Sitter surface with parallel unit fibers.
/// - `fig2-oblique`: the latitude circle (1/√2)(cos t, 1, sin t) of the unit
///   sphere with V = √2 ẋ, a=1, c=0, d=3.
/// - `hor0`, `horT`: horizontal lifts of sphere equator geodesics with
///   parallel V at angles cos ψ = 1/√3 and 1/2.
/// - `obl0-circle`: the zero-torsion member of the oblique circle family on
///   the sphere (latitude with unit-speed curvature² = 2).
/// - `oblT-hypercycle`: oblique helix with torsion on the curvature −2
///   hyperbolic plane (hypercycle with unit-speed curvature 1).
/// - `null-hor`: lightlike horizontal helix over a timelike geodesic of the
///   curvature −2 anti-de Sitter surface.
/// - `null-obl`: lightlike oblique helix over a circle of the curvature −2
///   hyperbolic plane.
/// - `vertical`: a unit-speed fiber rotation over a fixed sphere point.
/// - `control-d0-horizontal`: horizontal lift of a non-geodesic latitude with
///   d = 0 (not a helix).
/// - `control-oblique-varspeed`: pointwise-normalized fiber along a
///   non-constant-speed base (not a helix).
/// - `control-null-legendre`: null Legendre construction on a horocycle
///   (rejected by the Cartan machinery).
pub fn make_fixture(name: &str) -> Result<CurveSpec> {
    let pi = std::f64::consts::PI;
    match name {
        "fig1-timelike" => {
            let surface = SurfaceModel::de_sitter(1.0)?;
            Ok(CurveSpec {
                label: name.into(),
                family: CurveFamily::T1Geodesic,
                surface,
                params: MetricParams::new(1.0, 0.0, 3.0)?,
                window: (-1.0, 1.0),
                samples: fixture_samples(),
                rho: -1.0,
                path: Arc::new(move |t| {
                    (ChartPoint::new(t, pi / 2.0), BaseVec::new(1.0, 0.0))
                }),
            })
        }
        "lightlike-geodesic" => fixture_lightlike_geodesic(1.0),
        "timelike-geodesic" => fixture_timelike_geodesic(0.7),
        "spacelike-geodesic" => fixture_spacelike_geodesic(1.5),
        "fig2-oblique" => {
            let surface = SurfaceModel::sphere(1.0)?;
            Ok(CurveSpec {
                label: name.into(),
                family: CurveFamily::Oblique,
                surface,
                params: contact_example_params(),
                window: (0.0, 2.0 * pi),
                samples: fixture_samples(),
                rho: 1.0,
                path: Arc::new(move |t| {
                    (
                        ChartPoint::new(pi / 4.0, t),
                        BaseVec::new(0.0, 2.0_f64.sqrt()),
                    )
                }),
            })
        }
        "hor0" => fixture_horizontal(1.0 / 3.0_f64.sqrt(), "hor0"),
        "horT" => fixture_horizontal(0.5, "horT"),
        "obl0-circle" => fixture_sphere_oblique_circle(2.0, "obl0-circle"),
        "oblT-hypercycle" => fixture_hypercycle_oblique(),
        "null-hor" => {
            let surface = SurfaceModel::anti_de_sitter(-2.0)?;
            Ok(CurveSpec {
                label: name.into(),
                family: CurveFamily::HorizontalLift,
                surface,
                params: paracontact_example_params(),
                window: (0.0, 2.0),
                samples: fixture_samples(),
                rho: 1.0,
                path: Arc::new(move |t| {
                    (
                        ChartPoint::new(0.0, t),
                        BaseVec::new(2.0, -(2.0_f64.sqrt())),
                    )
                }),
            })
        }
        "null-obl" => {
            let surface = SurfaceModel::hyperbolic(-2.0)?;
            let rho0 = 2.0_f64.sqrt().acosh();
            Ok(CurveSpec {
                label: name.into(),
                family: CurveFamily::Oblique,
                surface,
                params: paracontact_example_params(),
                window: (0.0, 2.0 * pi),
                samples: fixture_samples(),
                rho: 1.0,
                path: Arc::new(move |t| {
                    (
                        ChartPoint::new(rho0, t),
                        BaseVec::new(0.0, 2.0_f64.sqrt()),
                    )
                }),
            })
        }
        "vertical" => {
            let surface = SurfaceModel::sphere(1.0)?;
            Ok(CurveSpec {
                label: name.into(),
                family: CurveFamily::Vertical,
                surface,
                params: contact_example_params(),
                window: (0.0, 2.0 * pi),
                samples: fixture_samples(),
                rho: 1.0,
                path: Arc::new(move |t| {
                    (
                        ChartPoint::new(pi / 2.0, 0.0),
                        BaseVec::new(t.cos(), t.sin()),
                    )
                }),
            })
        }
        "control-d0-horizontal" => {
            let surface = SurfaceModel::sphere(1.0)?;
            let th0 = pi / 4.0;
            // parallel transport along the latitude rotates at rate cos θ₀
            Ok(CurveSpec {
                label: name.into(),
                family: CurveFamily::HorizontalLift,
                surface,
                params: MetricParams::new(1.0, 0.0, 0.0)?,
                window: (0.0, 2.0 * pi),
                samples: fixture_samples(),
                rho: 1.0,
                path: Arc::new(move |t| {
                    let chi = -th0.cos() * t;
                    (
                        ChartPoint::new(th0, t),
                        BaseVec::new(chi.cos(), chi.sin() / th0.sin()),
                    )
                }),
            })
        }
        "control-oblique-varspeed" => {
            let surface = SurfaceModel::sphere(1.0)?;
            Ok(CurveSpec {
                label: name.into(),
                family: CurveFamily::Oblique,
                surface,
                params: contact_example_params(),
                window: (0.0, 4.0),
                samples: fixture_samples(),
                rho: 1.0,
                path: Arc::new(move |t| {
                    let th = pi / 3.0 + 0.2 * t.sin();
                    let dth = 0.2 * t.cos();
                    let dph = 0.8;
                    let sig = dth * dth + th.sin().powi(2) * dph * dph;
                    (
                        ChartPoint::new(th, 0.8 * t),
                        BaseVec::new(dth, dph) / sig.sqrt(),
                    )
                }),
            })
        }
        "control-null-legendre" => fixture_null_legendre(),
        other => Err(GeoError::UnknownFixture(other.into())),
    }
}

/// `lightlike-geodesic(δ)`: x(t) = (δt, 1, δt) with V the parallel transport
/// of (0, 0, 1).
pub fn fixture_lightlike_geodesic(delta: f64) -> Result<CurveSpec> {
    let surface = SurfaceModel::de_sitter(1.0)?;
    // V(t) = v0 − m0 (t p + t²/2 ℓ) in ambient coordinates, m0 = ⟨v0, ℓ⟩
    let p0 = Vector3::new(0.0, 1.0, 0.0);
    let ell = Vector3::new(delta, 0.0, delta);
    let v0 = Vector3::new(0.0, 0.0, 1.0);
    let m0 = delta; // ⟨v0, ℓ⟩ in signature (−,+,+)
    Ok(CurveSpec {
        label: "lightlike-geodesic".into(),
        family: CurveFamily::T1Geodesic,
        surface,
        params: MetricParams::new(1.0, 0.0, 0.0)?,
        window: (-0.8, 0.8),
        samples: fixture_samples(),
        rho: 1.0,
        path: Arc::new(move |t| {
            let e = p0 + t * ell;
            let q = surface.chart_from_embed(&e);
            let vamb = v0 - m0 * (t * p0 + 0.5 * t * t * ell);
            (q, vector_to_chart(&surface, &q, &vamb))
        }),
    })
}

/// `timelike-geodesic(δ)` with the Legendre fiber v₀ = (δ, 0, √(1+δ²)).
///
/// The ambient vector (δ, 0, √(1+δ²)) is orthogonal to both x(t) and ẋ(t)
/// for every t, hence it is the parallel unit spacelike normal.
pub fn fixture_timelike_geodesic(delta: f64) -> Result<CurveSpec> {
    let surface = SurfaceModel::de_sitter(1.0)?;
    let s = (1.0 + delta * delta).sqrt();
    Ok(CurveSpec {
        label: "timelike-geodesic".into(),
        family: CurveFamily::T1Geodesic,
        surface,
        params: MetricParams::new(1.0, 0.0, 3.0)?,
        window: (-0.8, 0.8),
        samples: fixture_samples(),
        rho: 1.0,
        path: Arc::new(move |t| {
            let e = Vector3::new(s * t.sinh(), t.cosh(), delta * t.sinh());
            let q = surface.chart_from_embed(&e);
            let n = Vector3::new(delta, 0.0, s);
            (q, vector_to_chart(&surface, &q, &n))
        }),
    })
}

/// `spacelike-geodesic(ϱ)` with the fiber v̄₀ = (ϱ, 0, √(ϱ²−1)), a parallel
/// unit timelike normal (fiber square ρ = −1): the geodesic-flow analogue
/// over a spacelike geodesic.
pub fn fixture_spacelike_geodesic(rho_par: f64) -> Result<CurveSpec> {
    let surface = SurfaceModel::de_sitter(1.0)?;
    let s = (rho_par * rho_par - 1.0).sqrt();
    Ok(CurveSpec {
        label: "spacelike-geodesic".into(),
        family: CurveFamily::T1Geodesic,
        surface,
        params: MetricParams::new(1.0, 0.0, 3.0)?,
        window: (-0.8, 0.8),
        samples: fixture_samples(),
        rho: -1.0,
        path: Arc::new(move |t| {
            let e = Vector3::new(s * t.sin(), t.cos(), rho_par * t.sin());
            let q = surface.chart_from_embed(&e);
            let n = Vector3::new(rho_par, 0.0, s);
            (q, vector_to_chart(&surface, &q, &n))
        }),
    })
}

/// Horizontal helix fixtures on the unit sphere with a = 1, c = 0, d = 3:
/// equator geodesic at speed fixed by arc length, V parallel at angle ψ.
fn fixture_horizontal(cos_psi: f64, label: &str) -> Result<CurveSpec> {
    let surface = SurfaceModel::sphere(1.0)?;
    let pi = std::f64::consts::PI;
    let speed2 = 1.0 / (1.0 + 3.0 * cos_psi * cos_psi);
    let speed = speed2.sqrt();
    let sin_psi = (1.0 - cos_psi * cos_psi).sqrt();
    Ok(CurveSpec {
        label: label.into(),
        family: CurveFamily::HorizontalLift,
        surface,
        params: contact_example_params(),
        window: (0.0, 2.0 * pi),
        samples: fixture_samples(),
        rho: 1.0,
        path: Arc::new(move |t| {
            // equator θ = π/2: chart basis orthonormal and parallel there
            (
                ChartPoint::new(pi / 2.0, speed * t),
                BaseVec::new(sin_psi, cos_psi),
            )
        }),
    })
}

/// Oblique circle fixture on the unit sphere, a=1, c=0, d=3: latitude with
/// prescribed unit-speed curvature² `kg2`, arc-length parameterized, with
/// V = ẋ/√σ.
pub fn fixture_sphere_oblique_circle(kg2: f64, label: &str) -> Result<CurveSpec> {
    let surface = SurfaceModel::sphere(1.0)?;
    let kg = kg2.sqrt();
    let th0 = (1.0 / kg).atan();
    let sigma = 1.0 / (kg2 + 4.0);
    let omega = sigma.sqrt() / th0.sin();
    Ok(CurveSpec {
        label: label.into(),
        family: CurveFamily::Oblique,
        surface,
        params: contact_example_params(),
        window: (0.0, 2.0 * std::f64::consts::PI),
        samples: fixture_samples(),
        rho: 1.0,
        path: Arc::new(move |t| {
            (
                ChartPoint::new(th0, omega * t),
                BaseVec::new(0.0, omega / sigma.sqrt()),
            )
        }),
    })
}

/// Oblique helix with torsion on the curvature −2 hyperbolic plane:
/// hypercycle of unit-speed curvature 1, arc-length σ = 2/3, V = ẋ/√σ.
fn fixture_hypercycle_oblique() -> Result<CurveSpec> {
    let surface = SurfaceModel::hyperbolic(-2.0)?;
    let r = surface.radius; // 1/√2
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let big_a = 1.0;
    let sigma: f64 = 2.0 / 3.0;
    let omega = sigma.sqrt() / big_a;
    Ok(CurveSpec {
        label: "oblT-hypercycle".into(),
        family: CurveFamily::Oblique,
        surface,
        params: paracontact_example_params(),
        window: (-2.0, 2.0),
        samples: fixture_samples(),
        rho: 1.0,
        path: Arc::new(move |t| {
            let w = omega * t;
            let u = big_a * w.cosh() / r;
            let rho_c = u.acosh();
            let phi = c.atan2(big_a * w.sinh());
            let drho = (big_a * omega / r) * w.sinh() / (u * u - 1.0).sqrt();
            let ww = big_a * w.sinh();
            let dphi = -c * (big_a * omega * w.cosh()) / (c * c + ww * ww);
            (
                ChartPoint::new(rho_c, phi),
                BaseVec::new(drho, dphi) / sigma.sqrt(),
            )
        }),
    })
}

/// Null Legendre control: a horocycle of the curvature −2 hyperbolic plane
/// at non-constant speed, fiber = unit normal. With V the horocycle normal,
/// the null condition (a+c)σ + a g(V̇,V̇) = 0 holds for every speed profile
/// (the horocycle curvature is exactly −(a+c)/a), so the curve is null,
/// Legendre and non-vertical; its acceleration is lightlike and nonzero, so
/// Cartan normalization must reject it.
fn fixture_null_legendre() -> Result<CurveSpec> {
    let surface = SurfaceModel::hyperbolic(-2.0)?;
    let r2 = 0.5_f64;
    let c = 1.3_f64;
    Ok(CurveSpec {
        label: "control-null-legendre".into(),
        family: CurveFamily::Custom,
        surface,
        params: paracontact_example_params(),
        window: (-1.0, 1.0),
        samples: fixture_samples(),
        rho: 1.0,
        path: Arc::new(move |t: f64| {
            // unit-speed horocycle traversed at varying rate τ(t)
            let tau = t + 0.3 * (1.0 - t.cos());
            let dtau = 1.0 + 0.3 * t.sin();
            let e = Vector3::new(
                (r2 + c * c + tau * tau) / (2.0 * c),
                (r2 - c * c + tau * tau) / (2.0 * c),
                tau,
            );
            let q = surface.chart_from_embed(&e);
            let vamb = dtau * Vector3::new(tau / c, tau / c, 1.0);
            let xd = vector_to_chart(&surface, &q, &vamb);
            (q, unit_normal(&surface, &q, &xd))
        }),
    })
}

impl CurveSpec {
    pub fn build(&self) -> Result<CurveSample> {
        CurveSample::from_closed_form(
            self.surface,
            self.path.clone(),
            self.window,
            self.samples,
            self.rho,
        )
    }
}
