//! Constant-curvature pseudo-Riemannian surface models in explicit charts.
//!
//! Four models are provided, each carrying a radius `r` so that |κ| = 1/r²:
//!
//! | kind            | chart (q0, q1)      | metric                         | κ      |
//! |-----------------|---------------------|--------------------------------|--------|
//! | `Sphere`        | polar (θ, φ)        | r²(dθ² + sin²θ dφ²)            | +1/r²  |
//! | `HyperbolicPlane`| polar (ρ, φ)       | r²(dρ² + sinh²ρ dφ²)           | −1/r²  |
//! | `DeSitter2`     | (θ, φ)              | r²(−dθ² + cosh²θ dφ²)          | +1/r²  |
//! | `AntiDeSitter2` | (ρ, t)              | r²(dρ² − cosh²ρ dt²)           | −1/r²  |
//!
//! The sphere chart is oriented with its poles on the ±e₁ ambient axis
//! (embedding `r(sinθ cosφ, cosθ, sinθ sinφ)`), so that the latitude θ = π/4
//! is the circle `(1/√2)(cos t, 1, sin t)` used by the curve fixtures.

use crate::error::{GeoError, Result};
use nalgebra::{Matrix2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

/// Tangent vector components in the chart coordinate basis.
pub type BaseVec = Vector2<f64>;

/// A point of the parameter domain of a chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub coords: Vector2<f64>,
}

impl ChartPoint {
    pub fn new(q0: f64, q1: f64) -> Self {
        ChartPoint {
            coords: Vector2::new(q0, q1),
        }
    }
}

/// Christoffel symbols Γ^k_{ij} at a point, `gamma[k][(i,j)]`.
#[derive(Debug, Clone, Copy)]
pub struct ChristoffelData {
    pub gamma: [Matrix2<f64>; 2],
}

impl ChristoffelData {
    /// Contraction Γ^k_{ij} a^i b^j.
    pub fn contract(&self, a: &BaseVec, b: &BaseVec) -> BaseVec {
        Vector2::new(
            (a.transpose() * self.gamma[0] * b)[(0, 0)],
            (a.transpose() * self.gamma[1] * b)[(0, 0)],
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    Sphere,
    HyperbolicPlane,
    DeSitter2,
    AntiDeSitter2,
}

impl SurfaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceKind::Sphere => "sphere",
            SurfaceKind::HyperbolicPlane => "hyperbolic",
            SurfaceKind::DeSitter2 => "de-sitter",
            SurfaceKind::AntiDeSitter2 => "anti-de-sitter",
        }
    }
}

/// Width of the guard band around chart singular loci; operations reject
/// points closer than this to a pole.
pub const SINGULAR_GUARD: f64 = 1e-6;

/// A constant-curvature surface in a fixed chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    /// Radius parameter; |κ| = 1/r².
    pub radius: f64,
}

impl SurfaceModel {
    /// Build a model with the given Gaussian curvature. The sign of κ must
    /// match the kind (positive for Sphere/DeSitter2, negative otherwise).
    pub fn new(kind: SurfaceKind, kappa: f64) -> Result<Self> {
        let want_positive = matches!(kind, SurfaceKind::Sphere | SurfaceKind::DeSitter2);
        if kappa == 0.0 || (kappa > 0.0) != want_positive {
            return Err(GeoError::CurvatureSignMismatch {
                kind: kind.name(),
                kappa,
            });
        }
        Ok(SurfaceModel {
            kind,
            radius: 1.0 / kappa.abs().sqrt(),
        })
    }

    pub fn sphere(kappa: f64) -> Result<Self> {
        Self::new(SurfaceKind::Sphere, kappa)
    }
    pub fn hyperbolic(kappa: f64) -> Result<Self> {
        Self::new(SurfaceKind::HyperbolicPlane, kappa)
    }
    pub fn de_sitter(kappa: f64) -> Result<Self> {
        Self::new(SurfaceKind::DeSitter2, kappa)
    }
    pub fn anti_de_sitter(kappa: f64) -> Result<Self> {
        Self::new(SurfaceKind::AntiDeSitter2, kappa)
    }

    pub fn gauss_curvature(&self) -> f64 {
        let k = 1.0 / (self.radius * self.radius);
        match self.kind {
            SurfaceKind::Sphere | SurfaceKind::DeSitter2 => k,
            _ => -k,
        }
    }

    /// Signature (p, q) of the base metric.
    pub fn base_signature(&self) -> (usize, usize) {
        match self.kind {
            SurfaceKind::Sphere | SurfaceKind::HyperbolicPlane => (2, 0),
            SurfaceKind::DeSitter2 | SurfaceKind::AntiDeSitter2 => (1, 1),
        }
    }

    /// True when the second chart coordinate is 2π-periodic.
    pub fn periodic(&self) -> bool {
        true
    }

    fn check_domain(&self, p: &ChartPoint) -> Result<()> {
        let (q0, q1) = (p.coords[0], p.coords[1]);
        if !q0.is_finite() || !q1.is_finite() {
            return Err(GeoError::PointOutsideChart(q0, q1));
        }
        match self.kind {
            SurfaceKind::Sphere => {
                if q0 <= SINGULAR_GUARD || q0 >= std::f64::consts::PI - SINGULAR_GUARD {
                    return Err(GeoError::PointOutsideChart(q0, q1));
                }
            }
            SurfaceKind::HyperbolicPlane if q0 <= SINGULAR_GUARD => {
                return Err(GeoError::PointOutsideChart(q0, q1));
            }
            // de Sitter / anti-de Sitter charts are global, no singular locus
            _ => {}
        }
        Ok(())
    }

    /// Metric components g_ij in the coordinate basis.
    pub fn metric(&self, p: &ChartPoint) -> Result<Matrix2<f64>> {
        self.check_domain(p)?;
        let r2 = self.radius * self.radius;
        let q0 = p.coords[0];
        Ok(match self.kind {
            SurfaceKind::Sphere => Matrix2::new(r2, 0.0, 0.0, r2 * q0.sin().powi(2)),
            SurfaceKind::HyperbolicPlane => Matrix2::new(r2, 0.0, 0.0, r2 * q0.sinh().powi(2)),
            SurfaceKind::DeSitter2 => Matrix2::new(-r2, 0.0, 0.0, r2 * q0.cosh().powi(2)),
            SurfaceKind::AntiDeSitter2 => Matrix2::new(r2, 0.0, 0.0, -r2 * q0.cosh().powi(2)),
        })
    }

    /// Inner product of chart vectors at `p`.
    pub fn inner(&self, p: &ChartPoint, x: &BaseVec, y: &BaseVec) -> f64 {
        let g = self
            .metric(p)
            .unwrap_or_else(|_| Matrix2::from_element(f64::NAN));
        (x.transpose() * g * y)[(0, 0)]
    }

    /// Levi-Civita Christoffel symbols, closed form per chart.
    pub fn christoffels(&self, p: &ChartPoint) -> Result<ChristoffelData> {
        self.check_domain(p)?;
        let g = self.metric(p)?;
        let det = g.determinant();
        if det.abs() < 1e-14 {
            return Err(GeoError::DegenerateMetric(det.abs()));
        }
        let q0 = p.coords[0];
        let mut g0 = Matrix2::zeros();
        let mut g1 = Matrix2::zeros();
        match self.kind {
            SurfaceKind::Sphere => {
                g0[(1, 1)] = -q0.sin() * q0.cos();
                let c = q0.cos() / q0.sin();
                g1[(0, 1)] = c;
                g1[(1, 0)] = c;
            }
            SurfaceKind::HyperbolicPlane => {
                g0[(1, 1)] = -q0.sinh() * q0.cosh();
                let c = q0.cosh() / q0.sinh();
                g1[(0, 1)] = c;
                g1[(1, 0)] = c;
            }
            SurfaceKind::DeSitter2 => {
                g0[(1, 1)] = q0.cosh() * q0.sinh();
                let c = q0.tanh();
                g1[(0, 1)] = c;
                g1[(1, 0)] = c;
            }
            SurfaceKind::AntiDeSitter2 => {
                g0[(1, 1)] = q0.cosh() * q0.sinh();
                let c = q0.tanh();
                g1[(0, 1)] = c;
                g1[(1, 0)] = c;
            }
        }
        Ok(ChristoffelData { gamma: [g0, g1] })
    }

    /// Ambient embedding into R³ (or R³ with an indefinite product).
    pub fn embed(&self, p: &ChartPoint) -> Result<Vector3<f64>> {
        self.check_domain(p)?;
        let r = self.radius;
        let (q0, q1) = (p.coords[0], p.coords[1]);
        Ok(match self.kind {
            SurfaceKind::Sphere => {
                r * Vector3::new(q0.sin() * q1.cos(), q0.cos(), q0.sin() * q1.sin())
            }
            SurfaceKind::HyperbolicPlane => {
                r * Vector3::new(q0.cosh(), q0.sinh() * q1.cos(), q0.sinh() * q1.sin())
            }
            SurfaceKind::DeSitter2 => {
                r * Vector3::new(q0.sinh(), q0.cosh() * q1.sin(), q0.cosh() * q1.cos())
            }
            SurfaceKind::AntiDeSitter2 => {
                r * Vector3::new(q0.cosh() * q1.cos(), q0.cosh() * q1.sin(), q0.sinh())
            }
        })
    }

    /// Diagonal of the ambient scalar product used by `embed`.
    pub fn ambient_signature(&self) -> Vector3<f64> {
        match self.kind {
            SurfaceKind::Sphere => Vector3::new(1.0, 1.0, 1.0),
            SurfaceKind::HyperbolicPlane | SurfaceKind::DeSitter2 => {
                Vector3::new(-1.0, 1.0, 1.0)
            }
            SurfaceKind::AntiDeSitter2 => Vector3::new(-1.0, -1.0, 1.0),
        }
    }

    /// Value of the defining quadric ⟨e, e⟩ for embedded points; equals
    /// ±r² on the model surface.
    pub fn quadric_value(&self, e: &Vector3<f64>) -> f64 {
        let s = self.ambient_signature();
        s[0] * e[0] * e[0] + s[1] * e[1] * e[1] + s[2] * e[2] * e[2]
    }

    /// Expected quadric value for this model.
    pub fn quadric_target(&self) -> f64 {
        let r2 = self.radius * self.radius;
        match self.kind {
            SurfaceKind::Sphere | SurfaceKind::DeSitter2 => r2,
            SurfaceKind::HyperbolicPlane | SurfaceKind::AntiDeSitter2 => -r2,
        }
    }

    /// Convert an ambient point on the quadric back to chart coordinates.
    pub fn chart_from_embed(&self, e: &Vector3<f64>) -> ChartPoint {
        let r = self.radius;
        match self.kind {
            SurfaceKind::Sphere => {
                let th = (e[1] / r).clamp(-1.0, 1.0).acos();
                ChartPoint::new(th, e[2].atan2(e[0]))
            }
            SurfaceKind::HyperbolicPlane => {
                let rh = (e[0] / r).max(1.0).acosh();
                ChartPoint::new(rh, e[2].atan2(e[1]))
            }
            SurfaceKind::DeSitter2 => {
                let th = (e[0] / r).asinh();
                ChartPoint::new(th, e[1].atan2(e[2]))
            }
            SurfaceKind::AntiDeSitter2 => {
                let rh = (e[2] / r).asinh();
                ChartPoint::new(rh, e[1].atan2(e[0]))
            }
        }
    }

    /// Gaussian curvature computed from the Riemann tensor of the analytic
    /// Christoffels, differentiated by 5-point central differences.
    /// K = g_{1l} R^l_{212} / det g.
    pub fn numeric_gauss_curvature(&self, p: &ChartPoint) -> Result<f64> {
        let g = self.metric(p)?;
        let det = g.determinant();
        let h = 1e-4 * self.radius.max(1.0);
        // dGamma[i] = d/dq^i of Gamma
        let mut dgamma = [[Matrix2::<f64>::zeros(); 2]; 2];
        for i in 0..2 {
            let shift = |s: f64| -> Result<ChristoffelData> {
                let mut q = *p;
                q.coords[i] += s;
                self.christoffels(&q)
            };
            let (m2, m1, p1, p2) = (
                shift(-2.0 * h)?,
                shift(-h)?,
                shift(h)?,
                shift(2.0 * h)?,
            );
            for k in 0..2 {
                dgamma[i][k] =
                    (-p2.gamma[k] + 8.0 * p1.gamma[k] - 8.0 * m1.gamma[k] + m2.gamma[k])
                        / (12.0 * h);
            }
        }
        let gam = self.christoffels(p)?;
        // R^l_{212} = d_1 Gamma^l_{22} - d_2 Gamma^l_{12} + Gamma^l_{1m} Gamma^m_{22} - Gamma^l_{2m} Gamma^m_{12}
        let mut riem = [0.0; 2];
        for l in 0..2 {
            let mut v = dgamma[0][l][(1, 1)] - dgamma[1][l][(0, 1)];
            for m in 0..2 {
                v += gam.gamma[l][(0, m)] * gam.gamma[m][(1, 1)]
                    - gam.gamma[l][(1, m)] * gam.gamma[m][(0, 1)];
            }
            riem[l] = v;
        }
        let r1212 = g[(0, 0)] * riem[0] + g[(0, 1)] * riem[1];
        Ok(r1212 / det)
    }
}

/// Covariant derivative ∇_ẋ W along a sampled path.
///
/// `path` and `field` are chart samples on a uniform grid of step `h`; the
/// result is (Ẇ^k + Γ^k_ij ẋ^i W^j) at index `idx`.
pub fn base_cov_deriv_grid(
    surface: &SurfaceModel,
    path: &[ChartPoint],
    field: &[BaseVec],
    h: f64,
    idx: usize,
) -> Result<BaseVec> {
    let n = path.len();
    if n < 5 || idx >= n {
        return Err(GeoError::InsufficientSamples {
            index: idx,
            margin: 2,
        });
    }
    let comp = |k: usize| -> Vec<f64> { field.iter().map(|v| v[k]).collect() };
    let d0 = crate::numerics::deriv_series(&comp(0), h);
    let d1 = crate::numerics::deriv_series(&comp(1), h);
    let xs0 = crate::numerics::deriv_series(&path.iter().map(|p| p.coords[0]).collect::<Vec<_>>(), h);
    let xs1 = crate::numerics::deriv_series(&path.iter().map(|p| p.coords[1]).collect::<Vec<_>>(), h);
    let xd = Vector2::new(xs0[idx], xs1[idx]);
    let gam = surface.christoffels(&path[idx])?;
    Ok(Vector2::new(d0[idx], d1[idx]) + gam.contract(&xd, &field[idx]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn de_sitter_metric_at_origin() {
        // pull back diag(-1,1,1) through f(θ,φ)=(sinhθ, coshθ sinφ, coshθ cosφ):
        // at θ=0 the metric must be diag(-1, 1)
        let s = SurfaceModel::de_sitter(1.0).unwrap();
        let g = s.metric(&ChartPoint::new(0.0, 0.7)).unwrap();
        assert_relative_eq!(g[(0, 0)], -1.0, epsilon = 1e-15);
        assert_relative_eq!(g[(1, 1)], 1.0, epsilon = 1e-15);
        assert_eq!(g[(0, 1)], 0.0);
    }

    #[test]
    fn sphere_orthonormal_at_equator() {
        let s = SurfaceModel::sphere(1.0).unwrap();
        let g = s
            .metric(&ChartPoint::new(std::f64::consts::FRAC_PI_2, 0.3))
            .unwrap();
        assert_relative_eq!(g[(0, 0)], 1.0, epsilon = 1e-15);
        assert_relative_eq!(g[(1, 1)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sphere_radius_half_curvature_four() {
        let s = SurfaceModel::sphere(4.0).unwrap();
        assert_relative_eq!(s.radius, 0.5);
        let p = ChartPoint::new(1.1, 0.4);
        assert!(s.metric(&p).unwrap().determinant() > 0.0);
        assert_relative_eq!(s.numeric_gauss_curvature(&p).unwrap(), 4.0, epsilon = 1e-6);
    }

    #[test]
    fn sphere_christoffel_closed_form() {
        let s = SurfaceModel::sphere(1.0).unwrap();
        let th = 0.9;
        let gam = s.christoffels(&ChartPoint::new(th, 1.2)).unwrap();
        assert_relative_eq!(gam.gamma[0][(1, 1)], -th.sin() * th.cos(), epsilon = 1e-14);
        assert_relative_eq!(gam.gamma[1][(0, 1)], th.cos() / th.sin(), epsilon = 1e-14);
    }

    #[test]
    fn christoffels_symmetric_lower_indices() {
        for s in [
            SurfaceModel::sphere(1.0).unwrap(),
            SurfaceModel::hyperbolic(-2.0).unwrap(),
            SurfaceModel::de_sitter(1.0).unwrap(),
            SurfaceModel::anti_de_sitter(-2.0).unwrap(),
        ] {
            let gam = s.christoffels(&ChartPoint::new(0.8, 0.5)).unwrap();
            for k in 0..2 {
                assert_eq!(gam.gamma[k][(0, 1)], gam.gamma[k][(1, 0)]);
            }
        }
    }

    /// Metric compatibility ∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il = 0.
    #[test]
    fn metric_compatibility_residual() {
        for s in [
            SurfaceModel::sphere(1.0).unwrap(),
            SurfaceModel::de_sitter(1.0).unwrap(),
            SurfaceModel::hyperbolic(-2.0).unwrap(),
            SurfaceModel::anti_de_sitter(-2.0).unwrap(),
        ] {
            let p = ChartPoint::new(0.8, 0.5);
            let h = 1e-5;
            let gam = s.christoffels(&p).unwrap();
            for k in 0..2 {
                let shift = |sgn: f64, m: f64| {
                    let mut q = p;
                    q.coords[k] += sgn * m * h;
                    s.metric(&q).unwrap()
                };
                let dg = (-shift(1.0, 2.0) + 8.0 * shift(1.0, 1.0) - 8.0 * shift(-1.0, 1.0)
                    + shift(-1.0, 2.0))
                    / (12.0 * h);
                let g = s.metric(&p).unwrap();
                let ek = BaseVec::new(if k == 0 { 1.0 } else { 0.0 }, if k == 1 { 1.0 } else { 0.0 });
                for i in 0..2 {
                    for j in 0..2 {
                        let ei = BaseVec::new(if i == 0 { 1.0 } else { 0.0 }, if i == 1 { 1.0 } else { 0.0 });
                        let ej = BaseVec::new(if j == 0 { 1.0 } else { 0.0 }, if j == 1 { 1.0 } else { 0.0 });
                        let gki = gam.contract(&ek, &ei);
                        let gkj = gam.contract(&ek, &ej);
                        let resid = dg[(i, j)]
                            - (gki.transpose() * g * ej)[(0, 0)]
                            - (ei.transpose() * g * gkj)[(0, 0)];
                        assert!(resid.abs() < 1e-9, "compat residual {resid} for {:?}", s.kind);
                    }
                }
            }
        }
    }

    #[test]
    fn embed_de_sitter_origin() {
        let s = SurfaceModel::de_sitter(1.0).unwrap();
        let e = s.embed(&ChartPoint::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(e[0], 0.0);
        assert_relative_eq!(e[1], 0.0);
        assert_relative_eq!(e[2], 1.0);
    }

    #[test]
    fn embeds_satisfy_quadric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for s in [
            SurfaceModel::sphere(1.0).unwrap(),
            SurfaceModel::de_sitter(1.0).unwrap(),
            SurfaceModel::hyperbolic(-2.0).unwrap(),
            SurfaceModel::anti_de_sitter(-2.0).unwrap(),
        ] {
            for _ in 0..10_000 {
                let q0 = match s.kind {
                    SurfaceKind::Sphere => rng.gen_range(0.1..3.0),
                    SurfaceKind::HyperbolicPlane => rng.gen_range(0.1..2.5),
                    _ => rng.gen_range(-2.0..2.0),
                };
                let q1 = rng.gen_range(-3.0..3.0);
                let e = s.embed(&ChartPoint::new(q0, q1)).unwrap();
                assert!(
                    (s.quadric_value(&e) - s.quadric_target()).abs() < 1e-10,
                    "quadric violated for {:?}",
                    s.kind
                );
            }
        }
    }

    #[test]
    fn chart_round_trip() {
        for s in [
            SurfaceModel::sphere(1.0).unwrap(),
            SurfaceModel::hyperbolic(-2.0).unwrap(),
            SurfaceModel::de_sitter(1.0).unwrap(),
            SurfaceModel::anti_de_sitter(-2.0).unwrap(),
        ] {
            let p = ChartPoint::new(0.77, 0.31);
            let e = s.embed(&p).unwrap();
            let q = s.chart_from_embed(&e);
            assert_relative_eq!(q.coords[0], p.coords[0], epsilon = 1e-12);
            assert_relative_eq!(q.coords[1], p.coords[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn pole_guard_rejected() {
        let s = SurfaceModel::sphere(1.0).unwrap();
        assert!(matches!(
            s.metric(&ChartPoint::new(1e-9, 0.0)),
            Err(GeoError::PointOutsideChart(_, _))
        ));
    }

    #[test]
    fn flat_limit_constant_metric_zero_christoffels() {
        // large-radius sphere near equator: metric nearly constant, Γ → 0
        let s = SurfaceModel::sphere(1e-8).unwrap();
        let gam = s
            .christoffels(&ChartPoint::new(std::f64::consts::FRAC_PI_2, 0.0))
            .unwrap();
        for k in 0..2 {
            assert!(gam.gamma[k].amax() < 1e-12);
        }
    }
}
