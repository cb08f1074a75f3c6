//! Geometric numerics for curves on the unit tangent bundle T₁M of a
//! constant-curvature pseudo-Riemannian surface carrying a Kaluza-Klein-type
//! metric G̃ determined by constants (a, c, d).
//!
//! The crate builds curves λ = (x, V) on T₁M, computes their Frenet or
//! Cartan apparatus numerically, detects helices directed by the geodesic
//! vector field, and matches detected helices against the classification
//! of geodesic, horizontal, oblique and lightlike helix families, comparing
//! predicted curvature/torsion constants with measured ones.
//!
//! Module map:
//! - [`surface`]: constant-curvature surface charts (metric, Christoffels,
//!   covariant derivatives, embeddings).
//! - [`metric`]: the metric G̃ on T₁M, signature analysis, tangential lifts,
//!   and the (para)contact tensors ξ̃, η̃, φ̃.
//! - [`connection`]: the Levi-Civita connection of G̃, curve acceleration
//!   and jerk, geodesic residuals and geodesic integration.
//! - [`curves`]: curve families, fixtures, parallel transport, causal
//!   characters, arc-length and pseudo-arc reparametrization.
//! - [`frenet`]: Frenet (non-null) and Cartan (null) frames, curvature and
//!   torsion extraction.
//! - [`helix`]: slant functions, helix detection, the f₂/h₁ invariants,
//!   helix differential-equation residuals and the classifier.
//! - [`verify`]: named check suites driven by the CLI and the test suite.

pub mod connection;
pub mod curves;
pub mod error;
pub mod frenet;
pub mod helix;
pub mod metric;
pub mod numerics;
pub mod surface;
pub mod verify;

pub use error::{GeoError, Result};
