//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("point ({0}, {1}) lies outside the chart domain")]
    PointOutsideChart(f64, f64),

    #[error("metric is degenerate at this point (|det g| = {0:.3e})")]
    DegenerateMetric(f64),

    #[error("not enough samples near the window boundary (index {index}, need margin {margin})")]
    InsufficientSamples { index: usize, margin: usize },

    #[error("surface has no declared ambient embedding")]
    NoEmbedding,

    #[error("curvature sign {kappa} is incompatible with surface kind {kind}")]
    CurvatureSignMismatch { kind: &'static str, kappa: f64 },

    #[error("invalid metric constants: {0}")]
    InvalidParams(String),

    #[error("fiber vector is not unit: g(u,u) = {0}")]
    NotUnitFiber(f64),

    #[error("invalid connection case")]
    InvalidCase,

    #[error("integration step became unstable (NaN or overflow at t = {0})")]
    StepUnstable(f64),

    #[error("trajectory left the chart domain at t = {0}")]
    ChartExit(f64),

    #[error("causal type changes over the window")]
    CausalTypeChanges,

    #[error("curve is null; arc-length reparametrization undefined")]
    NullCurve,

    #[error("curve is not null (G(l',l') = {0:.3e})")]
    NotNull(f64),

    #[error("null geodesic: acceleration is lightlike or zero, no pseudo-arc parameter")]
    NullGeodesic,

    #[error("curve is not pseudo-arc normalized (G(l'',l'') = {0:.3e})")]
    NotPseudoArc(f64),

    #[error("base speed is not constant (relative std {0:.3e})")]
    NonConstantSpeed(f64),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("Frenet frame degenerate: curvature {0:.3e} below tolerance (geodesic or near-geodesic)")]
    FrameDegenerate(f64),

    #[error("acceleration is lightlike (|G(l'',l'')| = {q:.3e} while frame norm {n:.3e}); Frenet theory inapplicable")]
    LightlikeNormal { q: f64, n: f64 },

    #[error("torsion vanishes on the window; f2 formula undefined")]
    ZeroTorsion,

    #[error("curve is not a helix (slant drift {0:.3e})")]
    NotAHelix(f64),

    #[error("curve must be arc-length or pseudo-arc normalized before classification (|G(l',l')| = {0:.3e})")]
    UnnormalizedCurve(f64),

    #[error("cannot decide curve family: {0}")]
    AmbiguousFamily(String),

    #[error("window is empty or degenerate")]
    EmptyWindow,

    #[error("sample count {0} too small (need at least 64)")]
    TooFewSamples(usize),
}

pub type Result<T> = std::result::Result<T, GeoError>;
