//! Flat TOML run configuration: surface, metric, curve, fiber, ode and tol
//! sections, each optional on top of a named fixture.

use anyhow::{bail, Context};
use serde::Deserialize;
use std::path::Path;
use std::sync::Arc;
use t1helix_core::connection::OdeSettings;
use t1helix_core::curves::{
    make_fixture, parallel_transport, unit_normal, CurveFn, CurveSample, CurveSpec,
};
use t1helix_core::helix::ClassifyOptions;
use t1helix_core::metric::MetricParams;
use t1helix_core::surface::{BaseVec, SurfaceKind, SurfaceModel};

#[derive(Debug, Clone, Deserialize, Default)]
pub struct RunConfig {
    #[serde(default)]
    pub surface: SurfaceSection,
    #[serde(default)]
    pub metric: Option<MetricSection>,
    #[serde(default)]
    pub curve: CurveSection,
    #[serde(default)]
    pub fiber: FiberSection,
    #[serde(default)]
    pub ode: OdeSection,
    #[serde(default)]
    pub tol: TolSection,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct SurfaceSection {
    pub kind: Option<String>,
    pub curvature: Option<f64>,
    /// Chart name; informational, each kind carries one chart.
    pub chart: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MetricSection {
    pub a: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct CurveSection {
    pub family: Option<String>,
    pub fixture: Option<String>,
    pub window: Option<[f64; 2]>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct FiberSection {
    /// fixture | parallel | proportional | normal
    pub rule: Option<String>,
    /// Chart components of the transport seed (rule = parallel).
    pub seed: Option<[f64; 2]>,
    /// Sign s in V = s·ẋ/√σ (rule = proportional) or the normal orientation.
    pub sign: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OdeSection {
    pub step: f64,
    pub t_end: f64,
    pub renormalize: bool,
}

impl Default for OdeSection {
    fn default() -> Self {
        OdeSection {
            step: 1e-3,
            t_end: 1.0,
            renormalize: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct TolSection {
    pub constancy: f64,
    pub frame: f64,
    pub match_const: f64,
    pub match_null: f64,
    pub geodesic: f64,
}

impl Default for TolSection {
    fn default() -> Self {
        TolSection {
            constancy: 1e-6,
            frame: 1e-7,
            match_const: 1e-4,
            match_null: 1e-3,
            geodesic: 1e-6,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if let Some(w) = self.curve.window {
            if w[1] <= w[0] || !w[0].is_finite() || !w[1].is_finite() {
                bail!("curve.window is empty: [{}, {}]", w[0], w[1]);
            }
        }
        if let Some(n) = self.curve.samples {
            if n < 64 {
                bail!("curve.samples = {n} is below the minimum of 64");
            }
        }
        for (name, v) in [
            ("tol.constancy", self.tol.constancy),
            ("tol.frame", self.tol.frame),
            ("tol.match_const", self.tol.match_const),
            ("tol.match_null", self.tol.match_null),
            ("tol.geodesic", self.tol.geodesic),
            ("ode.step", self.ode.step),
        ] {
            if v <= 0.0 {
                bail!("{name} must be positive, got {v}");
            }
        }
        if let Some(k) = &self.surface.kind {
            let kind = surface_kind_from_str(k)?;
            if let Some(chart) = &self.surface.chart {
                let expected = match kind {
                    SurfaceKind::Sphere | SurfaceKind::HyperbolicPlane => "polar",
                    SurfaceKind::DeSitter2 | SurfaceKind::AntiDeSitter2 => "global",
                };
                if chart != expected {
                    bail!("surface.chart `{chart}` unknown for {k}; this build provides `{expected}`");
                }
            }
        }
        if let Some(r) = &self.fiber.rule {
            if !["fixture", "parallel", "proportional", "normal"].contains(&r.as_str()) {
                bail!("unknown fiber.rule `{r}`");
            }
        }
        Ok(())
    }

    pub fn ode_settings(&self) -> OdeSettings {
        OdeSettings {
            step: self.ode.step,
            t_end: self.ode.t_end,
            renormalize: self.ode.renormalize,
        }
    }

    pub fn classify_options(&self, tol_scale: f64) -> ClassifyOptions {
        ClassifyOptions {
            tol_constancy: self.tol.constancy,
            tol_geodesic: self.tol.geodesic,
            tol_match: self.tol.match_const,
            tol_match_null: self.tol.match_null,
            tol_tau_zero: self.tol.match_const,
            tol_scale,
        }
    }

    /// Resolve the curve specification: fixture geometry plus overrides.
    pub fn curve_spec(&self) -> anyhow::Result<CurveSpec> {
        let Some(fixture) = &self.curve.fixture else {
            bail!("curve.fixture is required (one of the documented fixture names)");
        };
        let mut spec = make_fixture(fixture)
            .with_context(|| format!("building fixture `{fixture}`"))?;
        if let Some(m) = &self.metric {
            spec.params =
                MetricParams::new(m.a, m.c, m.d).context("metric constants rejected")?;
        }
        if let Some(kind) = &self.surface.kind {
            let want = surface_kind_from_str(kind)?;
            if want != spec.surface.kind {
                bail!(
                    "surface.kind `{kind}` conflicts with fixture surface {:?}",
                    spec.surface.kind
                );
            }
        }
        if let Some(kappa) = self.surface.curvature {
            let built = SurfaceModel::new(spec.surface.kind, kappa)
                .context("surface.curvature rejected")?;
            if (built.radius - spec.surface.radius).abs() > 1e-12 {
                bail!(
                    "surface.curvature {kappa} conflicts with the fixture chart; \
                     fixtures pin their curvature"
                );
            }
        }
        if let Some(w) = self.curve.window {
            spec.window = (w[0], w[1]);
        }
        if let Some(n) = self.curve.samples {
            spec.samples = n;
        }
        Ok(spec)
    }

    /// Build the sample, applying the fiber rule on top of the fixture base
    /// path when requested. With `curve.family = "geodesic"` the curve is
    /// re-integrated from the fixture's initial data using the [ode] section
    /// instead of sampling the closed form.
    pub fn build_sample(&self) -> anyhow::Result<CurveSample> {
        let spec = self.curve_spec()?;
        if self.curve.family.as_deref() == Some("geodesic") {
            return self.integrate_sample(&spec);
        }
        let rule = self.fiber.rule.as_deref().unwrap_or("fixture");
        match rule {
            "fixture" => Ok(spec.build()?),
            "proportional" => {
                let sign = self.fiber.sign.unwrap_or(1.0).signum();
                let base = spec.path.clone();
                let surface = spec.surface;
                let h = 1e-6;
                let path: CurveFn = Arc::new(move |t: f64| {
                    let (q, _) = base(t);
                    let qp = base(t + h).0;
                    let qm = base(t - h).0;
                    let xd = (qp.coords - qm.coords) / (2.0 * h);
                    let sig = surface.inner(&q, &xd, &xd);
                    (q, sign * xd / sig.abs().sqrt())
                });
                Ok(CurveSample::from_closed_form(
                    surface,
                    path,
                    spec.window,
                    spec.samples,
                    1.0,
                )?)
            }
            "normal" => {
                let sign = self.fiber.sign.unwrap_or(1.0).signum();
                let base = spec.path.clone();
                let surface = spec.surface;
                let h = 1e-6;
                let path: CurveFn = Arc::new(move |t: f64| {
                    let (q, _) = base(t);
                    let qp = base(t + h).0;
                    let qm = base(t - h).0;
                    let xd = (qp.coords - qm.coords) / (2.0 * h);
                    (q, sign * unit_normal(&surface, &q, &xd))
                });
                Ok(CurveSample::from_closed_form(
                    surface,
                    path,
                    spec.window,
                    spec.samples,
                    1.0,
                )?)
            }
            "parallel" => {
                let seed = self
                    .fiber
                    .seed
                    .ok_or_else(|| anyhow::anyhow!("fiber.rule = parallel needs fiber.seed"))?;
                let margin = 8usize;
                let hgrid = (spec.window.1 - spec.window.0) / (spec.samples - 1) as f64;
                let start = spec.window.0 - margin as f64 * hgrid;
                let total = spec.samples + 2 * margin;
                let base = spec.path.clone();
                let pathfn = move |t: f64| base(t).0;
                let v0 = BaseVec::new(seed[0], seed[1]);
                let vs = parallel_transport(
                    &spec.surface,
                    &pathfn,
                    v0,
                    (start, start + (total - 1) as f64 * hgrid),
                    total,
                )?;
                let pts: Vec<_> = (0..total)
                    .map(|j| pathfn(start + j as f64 * hgrid))
                    .collect();
                Ok(CurveSample::from_table_extended(
                    spec.surface,
                    spec.window.0,
                    hgrid,
                    pts,
                    vs,
                    1.0,
                    margin,
                )?)
            }
            other => bail!("unknown fiber.rule `{other}`"),
        }
    }
}

impl RunConfig {
    /// Integrate the T₁M geodesic equation from the fixture's state at the
    /// window start and return the trajectory as a tabulated sample.
    fn integrate_sample(&self, spec: &CurveSpec) -> anyhow::Result<CurveSample> {
        use t1helix_core::connection::{integrate_t1_geodesic, GeodesicState};
        let t0 = spec.window.0;
        let hfd = 1e-6;
        let (x0, v0) = (spec.path)(t0);
        let xd0 = ((spec.path)(t0 + hfd).0.coords - (spec.path)(t0 - hfd).0.coords) / (2.0 * hfd);
        let vd_raw = ((spec.path)(t0 + hfd).1 - (spec.path)(t0 - hfd).1) / (2.0 * hfd);
        let gam = spec.surface.christoffels(&x0)?;
        let vd0 = vd_raw + gam.contract(&BaseVec::new(xd0[0], xd0[1]), &v0);
        let init = GeodesicState {
            x: x0,
            xd: BaseVec::new(xd0[0], xd0[1]),
            v: v0,
            vd: vd0,
        };
        let settings = self.ode_settings();
        let (ts, states) =
            integrate_t1_geodesic(&spec.params, &spec.surface, init, &settings, spec.rho)?;
        let h = ts[1] - ts[0];
        let pts: Vec<_> = states.iter().map(|s| s.x).collect();
        let vs: Vec<_> = states.iter().map(|s| s.v).collect();
        Ok(CurveSample::from_table(
            spec.surface,
            t0,
            h,
            pts,
            vs,
            spec.rho,
        )?)
    }
}

pub fn surface_kind_from_str(s: &str) -> anyhow::Result<SurfaceKind> {
    Ok(match s {
        "sphere" => SurfaceKind::Sphere,
        "hyperbolic" => SurfaceKind::HyperbolicPlane,
        "de-sitter" => SurfaceKind::DeSitter2,
        "anti-de-sitter" => SurfaceKind::AntiDeSitter2,
        other => bail!(
            "unknown surface.kind `{other}` (expected sphere | hyperbolic | de-sitter | anti-de-sitter)"
        ),
    })
}
