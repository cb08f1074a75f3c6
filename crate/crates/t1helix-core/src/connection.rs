//! The Levi-Civita connection of (T₁M, G̃) and curve acceleration machinery.
//!
//! For lifted fields the connection is determined by four cases:
//!
//! ```text
//! ∇̃_{X^h} Y^h = {∇_X Y}^h + {−(φ/2a) g(Y,u) X + ((a+c−d)/2a) g(X,u) Y}^t
//! ∇̃_{X^h} Y^t = {((d−(a+c))/2(a+c)) g(X,u) Y + ½ g(X,Y) u
//!                − (d/2(a+c)) g(X,u) g(Y,u) u}^h + {∇_X Y}^t
//! ∇̃_{X^t} Y^h = {((d−(a+c))/2(a+c)) g(Y,u) X + ½ g(X,Y) u
//!                − (d/2(a+c)) g(X,u) g(Y,u) u}^h
//! ∇̃_{X^t} Y^t = −{g(Y,u) X}^t
//! ```
//!
//! These formulas presuppose the K-contact pairing κ = (a+c)/a between the
//! base curvature and the metric constants; all curve pipelines in this crate
//! keep that pairing.
//!
//! Along a curve λ = (x, V) with velocity λ' = ẋ^h + (∇_ẋV)^t the second
//! covariant derivative is
//!
//! ```text
//! ∇̃_T T = {ẍ + ((d−(a+c))/(a+c)) g(ẋ,V) V̇ + g(ẋ,V̇) V}^h
//!        + {V̈ − (d/a) g(ẋ,V) ẋ}^t
//! ```
//!
//! and higher derivatives follow by transporting component fields with the
//! same four cases.

use crate::error::{GeoError, Result};
use crate::metric::{g_tilde_rho, MetricParams, T1Vec};
use crate::surface::{BaseVec, ChartPoint, SurfaceModel};

/// Covariant derivatives of a curve λ = (x, V) at one parameter value.
///
/// `xdd = ∇_ẋ ẋ`, `xddd = ∇_ẋ ∇_ẋ ẋ`, `vd = ∇_ẋ V`, and so on. `rho` is
/// the fiber square g(V, V), +1 except for geodesic-flow curves over
/// timelike unit fields where it is −1.
#[derive(Debug, Clone, Copy)]
pub struct CurveDerivatives {
    pub point: ChartPoint,
    pub xd: BaseVec,
    pub xdd: BaseVec,
    pub xddd: BaseVec,
    pub v: BaseVec,
    pub vd: BaseVec,
    pub vdd: BaseVec,
    pub vddd: BaseVec,
    pub rho: f64,
}

impl CurveDerivatives {
    /// Check |g(V,V) − ρ| and |g(V̇,V)| against the stated tolerances.
    pub fn validate(&self, surface: &SurfaceModel) -> Result<()> {
        let gvv = surface.inner(&self.point, &self.v, &self.v);
        if (gvv - self.rho).abs() > 1e-8 {
            return Err(GeoError::NotUnitFiber(gvv));
        }
        let gvdv = surface.inner(&self.point, &self.vd, &self.v);
        if gvdv.abs() > 1e-8 {
            return Err(GeoError::InvalidParams(format!(
                "g(V',V) = {gvdv:.3e}, differentiated unit constraint violated"
            )));
        }
        Ok(())
    }
}

/// Which connection case to evaluate in [`nabla_tilde`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftCase {
    /// ∇̃_{X^h} Y^h
    HH,
    /// ∇̃_{X^h} Y^t
    HT,
    /// ∇̃_{X^t} Y^h
    TH,
    /// ∇̃_{X^t} Y^t
    TT,
}

/// Project `w` orthogonal to `u` (fiber square ρ).
pub fn project_tangential(
    surface: &SurfaceModel,
    p: &ChartPoint,
    u: &BaseVec,
    w: &BaseVec,
    rho: f64,
) -> BaseVec {
    w - (surface.inner(p, w, u) / rho) * u
}

/// One case of the connection on lifted fields. `dxy` supplies ∇_X Y, which
/// lives along the caller's curve; it only enters the derivative cases (HH
/// horizontal part, HT tangential part).
#[allow(clippy::too_many_arguments)]
pub fn nabla_tilde(
    params: &MetricParams,
    surface: &SurfaceModel,
    p: &ChartPoint,
    u: &BaseVec,
    case: LiftCase,
    x: &BaseVec,
    y: &BaseVec,
    dxy: &BaseVec,
) -> T1Vec {
    let (a, c, d) = (params.a, params.c, params.d);
    let ac = a + c;
    let g = |v: &BaseVec, w: &BaseVec| surface.inner(p, v, w);
    match case {
        LiftCase::HH => {
            let tang = -(params.phi() / (2.0 * a)) * g(y, u) * x
                + (ac - d) / (2.0 * a) * g(x, u) * y;
            T1Vec::new(*dxy, project_tangential(surface, p, u, &tang, 1.0))
        }
        LiftCase::HT => {
            let horiz = (d - ac) / (2.0 * ac) * g(x, u) * y + 0.5 * g(x, y) * u
                - d / (2.0 * ac) * g(x, u) * g(y, u) * u;
            T1Vec::new(horiz, project_tangential(surface, p, u, dxy, 1.0))
        }
        LiftCase::TH => {
            let horiz = (d - ac) / (2.0 * ac) * g(y, u) * x + 0.5 * g(x, y) * u
                - d / (2.0 * ac) * g(x, u) * g(y, u) * u;
            T1Vec::new(horiz, BaseVec::zeros())
        }
        LiftCase::TT => {
            let tang = -g(y, u) * x;
            T1Vec::new(
                BaseVec::zeros(),
                project_tangential(surface, p, u, &tang, 1.0),
            )
        }
    }
}

/// ∇̃ of a field Z = P^h + Q^t along λ, given the base covariant derivatives
/// of its components. Sums the four lift cases over T = ẋ^h + V̇^t; `rho`
/// generalizes the tangential projection.
#[allow(clippy::too_many_arguments)]
pub fn transport_along(
    params: &MetricParams,
    surface: &SurfaceModel,
    p: &ChartPoint,
    u: &BaseVec,
    vd: &BaseVec,
    xd: &BaseVec,
    pv: &BaseVec,
    qv: &BaseVec,
    dp: &BaseVec,
    dq: &BaseVec,
    rho: f64,
) -> T1Vec {
    let (a, c, d) = (params.a, params.c, params.d);
    let ac = a + c;
    let g = |v: &BaseVec, w: &BaseVec| surface.inner(p, v, w);
    let cf = (d - ac) / (2.0 * ac);
    let horiz = dp
        + cf * (g(xd, u) * qv + g(pv, u) * vd)
        + 0.5 * (g(xd, qv) + g(vd, pv)) * u
        - d / (2.0 * ac) * (g(xd, u) * g(qv, u) + g(vd, u) * g(pv, u)) * u;
    let tang = dq - (params.phi() / (2.0 * a)) * g(pv, u) * xd
        + (ac - d) / (2.0 * a) * g(xd, u) * pv
        - g(qv, u) * vd;
    T1Vec::new(horiz, project_tangential(surface, p, u, &tang, rho))
}

/// Second covariant derivative ∇̃_T T of λ = (x, V).
pub fn curve_acceleration(
    params: &MetricParams,
    surface: &SurfaceModel,
    dv: &CurveDerivatives,
) -> T1Vec {
    let (a, c, d) = (params.a, params.c, params.d);
    let ac = a + c;
    let g = |v: &BaseVec, w: &BaseVec| surface.inner(&dv.point, v, w);
    let gxv = g(&dv.xd, &dv.v);
    let horiz = dv.xdd + (d - ac) / ac * gxv * dv.vd + g(&dv.xd, &dv.vd) * dv.v;
    let tang = dv.vdd - (d / a) * gxv * dv.xd;
    T1Vec::new(
        horiz,
        project_tangential(surface, &dv.point, &dv.v, &tang, dv.rho),
    )
}

/// Third covariant derivative of λ as a closed-form expression in base data,
/// with the slant substituted pointwise as θ = ε√|φ| g(ẋ, V).
///
/// Exact when θ is constant along the curve (helices); for general curves
/// use the transport route, which the frame machinery does.
pub fn curve_jerk(
    params: &MetricParams,
    surface: &SurfaceModel,
    dv: &CurveDerivatives,
) -> T1Vec {
    let (a, c, d) = (params.a, params.c, params.d);
    let ac = a + c;
    let al = params.alpha();
    let eps = params.epsilon();
    let sphi = params.sqrt_abs_phi();
    let aphi = params.phi().abs();
    let g = |v: &BaseVec, w: &BaseVec| surface.inner(&dv.point, v, w);
    let th = eps * sphi * g(&dv.xd, &dv.v);
    // d/dt g(ẋ, V̇) = g(ẍ, V̇) + g(ẋ, V̈)
    let dgxv = g(&dv.xdd, &dv.vd) + g(&dv.xd, &dv.vdd);
    let horiz = dv.xddd
        - d * (d - ac) / (2.0 * al * aphi) * th * th * dv.xd
        + 3.0 * eps * (d - ac) / (2.0 * ac * sphi) * th * dv.vdd
        + g(&dv.xd, &dv.vd) * dv.vd
        + (1.5 * dgxv - eps * d * th / (2.0 * a * sphi) * g(&dv.xd, &dv.xd)
            + eps * (2.0 * d - ac) / (2.0 * ac * sphi) * th * g(&dv.vd, &dv.vd)
            + eps * d * d * th.powi(3) / (2.0 * al * aphi * sphi))
            * dv.v;
    let tang = eps * (ac - 3.0 * d) / (2.0 * a * sphi) * th * dv.xdd
        + dv.vddd
        + eps * (ac - d) / (2.0 * a * sphi) * th * g(&dv.xd, &dv.vd) * dv.v
        - (g(&dv.vdd, &dv.v)
            + ((ac - d) * (ac - d) - 2.0 * ac * d) / (2.0 * al * aphi) * th * th)
            * dv.vd;
    T1Vec::new(
        horiz,
        project_tangential(surface, &dv.point, &dv.v, &tang, dv.rho),
    )
}

/// Orthonormalized-frame coefficients of a T₁M vector at (x, u):
/// basis {e^h, u^h, e^t} with e the unit base vector orthogonal to u.
/// The returned triple lives in a frame where G̃ is diag(±1, ±1, ±1).
pub fn frame_coefficients(
    params: &MetricParams,
    surface: &SurfaceModel,
    p: &ChartPoint,
    u: &BaseVec,
    z: &T1Vec,
    rho: f64,
) -> [f64; 3] {
    let g = |v: &BaseVec, w: &BaseVec| surface.inner(p, v, w);
    // complementary unit direction: raise the covector annihilating u
    let gm = surface.metric(p).expect("interior point");
    let cov = nalgebra::Vector2::new(-u[1], u[0]);
    let e_raw = gm.try_inverse().expect("non-degenerate").transpose() * cov;
    let en = g(&e_raw, &e_raw);
    let e = e_raw / en.abs().sqrt();
    let eta = if en > 0.0 { 1.0 } else { -1.0 };
    let (a, c) = (params.a, params.c);
    // diagonal G~ values on {e^h, u^h, e^t}: G~(u^h,u^h) = (a+c)ρ + dρ²
    let d0 = (a + c) * eta;
    let d1 = (a + c) * rho + params.d * rho * rho;
    let d2 = a * eta;
    // coefficients of z in the (non-normalized) basis
    let h_u = g(&z.horiz, u) / rho;
    let h_e = g(&z.horiz, &e) * eta;
    let t_e = g(&z.tang, &e) * eta;
    [
        h_e * d0.abs().sqrt(),
        h_u * d1.abs().sqrt(),
        t_e * d2.abs().sqrt(),
    ]
}

/// Positive-definite norm of a T₁M vector: Σ of squared coefficients in a
/// frame orthonormalized by sign. Signature-safe residual measure.
pub fn frame_norm(
    params: &MetricParams,
    surface: &SurfaceModel,
    p: &ChartPoint,
    u: &BaseVec,
    z: &T1Vec,
    rho: f64,
) -> f64 {
    let c = frame_coefficients(params, surface, p, u, z, rho);
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

/// Norm of ∇̃_T T in the positive frame.
pub fn geodesic_residual(
    params: &MetricParams,
    surface: &SurfaceModel,
    dv: &CurveDerivatives,
) -> f64 {
    let acc = curve_acceleration(params, surface, dv);
    frame_norm(params, surface, &dv.point, &dv.v, &acc, dv.rho)
}

/// State for geodesic integration: chart coordinates of (x, ẋ, V, V̇).
#[derive(Debug, Clone, Copy)]
pub struct GeodesicState {
    pub x: ChartPoint,
    pub xd: BaseVec,
    pub v: BaseVec,
    pub vd: BaseVec,
}

/// Settings for [`integrate_t1_geodesic`].
#[derive(Debug, Clone, Copy)]
pub struct OdeSettings {
    pub step: f64,
    pub t_end: f64,
    pub renormalize: bool,
}

impl Default for OdeSettings {
    fn default() -> Self {
        OdeSettings {
            step: 1e-3,
            t_end: 1.0,
            renormalize: true,
        }
    }
}

fn geodesic_rhs(
    params: &MetricParams,
    surface: &SurfaceModel,
    s: &GeodesicState,
    rho: f64,
) -> Result<(BaseVec, BaseVec, BaseVec, BaseVec)> {
    let (a, c, d) = (params.a, params.c, params.d);
    let ac = a + c;
    let gam = surface.christoffels(&s.x)?;
    let g = |v: &BaseVec, w: &BaseVec| surface.inner(&s.x, v, w);
    let gxv = g(&s.xd, &s.v);
    // ∇_ẋ ẋ = −((d−(a+c))/(a+c)) g(ẋ,V) V̇ − g(ẋ,V̇) V
    let cov_xdd = -(d - ac) / ac * gxv * s.vd - g(&s.xd, &s.vd) * s.v;
    // ∇_ẋ V̇ = (d/a) g(ẋ,V) proj(ẋ) − (g(V̇,V̇)/ρ) V
    let cov_vdd = (d / a) * gxv * project_tangential(surface, &s.x, &s.v, &s.xd, rho)
        - g(&s.vd, &s.vd) / rho * s.v;
    let dxd = cov_xdd - gam.contract(&s.xd, &s.xd);
    let dv = s.vd - gam.contract(&s.xd, &s.v);
    let dvd = cov_vdd - gam.contract(&s.xd, &s.vd);
    Ok((s.xd, dxd, dv, dvd))
}

/// Fixed-step RK4 integration of ∇̃_{λ'} λ' = 0 with per-step constraint
/// projection (renormalize g(V,V) = ρ, re-orthogonalize V̇ against V).
/// Returns the grid and the integrated states.
pub fn integrate_t1_geodesic(
    params: &MetricParams,
    surface: &SurfaceModel,
    init: GeodesicState,
    settings: &OdeSettings,
    rho: f64,
) -> Result<(Vec<f64>, Vec<GeodesicState>)> {
    let h = settings.step;
    if h <= 0.0 || settings.t_end <= 0.0 {
        return Err(GeoError::EmptyWindow);
    }
    let n = (settings.t_end / h).round() as usize;
    let mut states = Vec::with_capacity(n + 1);
    let mut ts = Vec::with_capacity(n + 1);
    let mut s = init;
    let add = |a: &GeodesicState, k: &(BaseVec, BaseVec, BaseVec, BaseVec), w: f64| GeodesicState {
        x: ChartPoint {
            coords: a.x.coords + w * k.0,
        },
        xd: a.xd + w * k.1,
        v: a.v + w * k.2,
        vd: a.vd + w * k.3,
    };
    for i in 0..=n {
        let t = i as f64 * h;
        ts.push(t);
        states.push(s);
        if i == n {
            break;
        }
        let k1 = geodesic_rhs(params, surface, &s, rho).map_err(|e| match e {
            GeoError::PointOutsideChart(_, _) => GeoError::ChartExit(t),
            other => other,
        })?;
        let k2 = geodesic_rhs(params, surface, &add(&s, &k1, 0.5 * h), rho)
            .map_err(|_| GeoError::ChartExit(t))?;
        let k3 = geodesic_rhs(params, surface, &add(&s, &k2, 0.5 * h), rho)
            .map_err(|_| GeoError::ChartExit(t))?;
        let k4 = geodesic_rhs(params, surface, &add(&s, &k3, h), rho)
            .map_err(|_| GeoError::ChartExit(t))?;
        let mut next = GeodesicState {
            x: ChartPoint {
                coords: s.x.coords + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            },
            xd: s.xd + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            v: s.v + h / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2),
            vd: s.vd + h / 6.0 * (k1.3 + 2.0 * k2.3 + 2.0 * k3.3 + k4.3),
        };
        if !next.x.coords.iter().all(|v| v.is_finite())
            || !next.xd.iter().all(|v| v.is_finite())
            || !next.v.iter().all(|v| v.is_finite())
            || !next.vd.iter().all(|v| v.is_finite())
        {
            return Err(GeoError::StepUnstable(t));
        }
        if settings.renormalize {
            let gvv = surface.inner(&next.x, &next.v, &next.v);
            if (gvv / rho) <= 0.0 {
                return Err(GeoError::StepUnstable(t));
            }
            next.v /= (gvv / rho).sqrt();
            next.vd = project_tangential(surface, &next.x, &next.v, &next.vd, rho);
        }
        s = next;
    }
    Ok((ts, states))
}

/// G̃(λ', λ') for an integration state.
pub fn state_speed_squared(
    params: &MetricParams,
    surface: &SurfaceModel,
    s: &GeodesicState,
    rho: f64,
) -> f64 {
    let t = T1Vec::new(
        s.xd,
        project_tangential(surface, &s.x, &s.v, &s.vd, rho),
    );
    g_tilde_rho(params, surface, &s.x, &s.v, &t, &t, rho)
}
