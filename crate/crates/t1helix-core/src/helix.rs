//! Slant functions, helix detection, the auxiliary invariants f₂ and h₁,
//! helix differential-equation residuals, and the classifier that matches a
//! curve against the helix families with predicted-vs-measured constants.
//!
//! A curve λ is a helix directed by the geodesic vector field when
//! θ = G̃(λ', ξ̃) is constant; equivalently g(ẋ, V) is constant. The
//! classifier determines the family (geodesic / horizontal / oblique ×
//! causal type × torsion), evaluates every hypothesis of the applicable
//! characterization, and only then compares the predicted curvature and
//! torsion constants with the measured ones.
//!
//! Two of the published constants are corrected here, both validated by
//! independent numerical routes (see the frenet tests):
//! - the zero-torsion oblique curvature carries a θ² factor,
//!   κ_λ² = −d(a+c−d)θ²/(2ε₁ε_λα|φ|), which the headline statement drops
//!   (its own derivation, where the constancy of κ_λ is concluded, keeps it);
//! - the lightlike horizontal curvature is +d(a+c)/|dφ|.

use crate::connection::geodesic_residual;
use crate::curves::{circle_check, embed_jacobian, CurveFamily, CurveSample};
use crate::error::{GeoError, Result};
use crate::frenet::{cartan_apparatus, frenet_apparatus, CartanData, FrenetData};
use crate::metric::{g_tilde_rho, MetricParams, T1Vec};
use crate::numerics::{deriv_series, is_constant, series_stats, SeriesStats};
use crate::surface::BaseVec;
use serde::Serialize;

/// Matched helix characterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatchedTheorem {
    /// Trivial helices: geodesics of T₁M with parallel V.
    Geod,
    /// Horizontal, zero torsion.
    Hor0,
    /// Horizontal, nonzero torsion.
    HorT,
    /// Oblique, zero torsion.
    Obl0,
    /// Oblique, nonzero torsion.
    OblT,
    /// Lightlike horizontal.
    NullHor,
    /// Lightlike oblique.
    NullObl,
    None,
}

/// One hypothesis check of a characterization.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    fn new(name: &str, pass: bool, residual: f64) -> Self {
        Check {
            name: name.into(),
            pass,
            residual,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaReport {
    pub series: Vec<f64>,
    pub mean: f64,
    pub constant: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Constants {
    pub kappa: f64,
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Default)]
pub struct BranchSigns {
    pub kappa: i8,
    pub tau: i8,
}

/// Full classification report.
#[derive(Debug, Clone, Serialize)]
pub struct HelixReport {
    pub theta: ThetaReport,
    pub family: CurveFamily,
    pub causal: i8,
    pub is_helix: bool,
    pub matched_theorem: MatchedTheorem,
    pub checks: Vec<Check>,
    /// Reported only when every hypothesis check passes.
    pub predicted: Option<Constants>,
    pub measured: Option<Constants>,
    pub branch_signs: BranchSigns,
}

/// Classifier tolerances.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Relative constancy tolerance for θ and hypothesis identities.
    pub tol_constancy: f64,
    /// Per-sample geodesic residual bound.
    pub tol_geodesic: f64,
    /// |predicted| vs |measured| tolerance, non-null constants.
    pub tol_match: f64,
    /// |predicted| vs |measured| tolerance, lightlike curvature.
    pub tol_match_null: f64,
    /// Torsion magnitudes below this count as zero torsion.
    pub tol_tau_zero: f64,
    /// Scale factor applied to every tolerance.
    pub tol_scale: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol_constancy: 1e-6,
            tol_geodesic: 1e-6,
            tol_match: 1e-4,
            tol_match_null: 1e-3,
            tol_tau_zero: 1e-4,
            tol_scale: 1.0,
        }
    }
}

/// θ(t) = G̃(λ', ξ̃) per sample over the window.
pub fn slant_function(params: &MetricParams, sample: &CurveSample) -> Vec<f64> {
    let sphi = params.sqrt_abs_phi();
    (0..sample.len())
        .map(|i| {
            let d = sample.derivs(i);
            let vel = sample.velocity(i);
            let xi = T1Vec::horizontal(d.v / sphi);
            g_tilde_rho(params, &sample.surface, &d.point, &d.v, &vel, &xi, d.rho)
        })
        .collect()
}

/// Helix verdict and mean slant, via the constancy detector. A zero-mean
/// slant (Legendre) is judged on absolute deviation instead of relative.
pub fn is_helix(params: &MetricParams, sample: &CurveSample, tol: f64) -> (bool, f64) {
    let theta = slant_function(params, sample);
    let m = sample.stats_margin();
    let st = series_stats(&theta, m);
    if st.mean.abs() < 1e-8 {
        (st.max_abs_dev < tol.max(1e-8), st.mean)
    } else {
        (st.std / st.mean.abs() < tol, st.mean)
    }
}

/// The f₂ invariant of non-null helices with nonzero torsion, per sample:
///
/// ```text
/// f₂ = −ε_λ θ κ/τ + (ε₁ ε √|φ| / 2κτ)[g(ẍ,V̇) − g(V̈,ẋ)]
///      − (ε₁ θ / κτ) g(V̇,V̇) + (ε₁ d θ / 2ακτ)(ε_λ − ε θ²)
/// ```
pub fn f2_series(
    params: &MetricParams,
    sample: &CurveSample,
    frenet: &FrenetData,
) -> Result<Vec<f64>> {
    let m = sample.stats_margin();
    let tau_max = frenet.tau[m..frenet.tau.len() - m]
        .iter()
        .fold(0.0_f64, |a, t| a.max(t.abs()));
    if tau_max < 1e-9 {
        return Err(GeoError::ZeroTorsion);
    }
    let theta = slant_function(params, sample);
    let eps = params.epsilon();
    let sphi = params.sqrt_abs_phi();
    let al = params.alpha();
    let (el, e1) = (frenet.eps_lambda, frenet.eps1);
    Ok((0..sample.len())
        .map(|i| {
            let d = sample.derivs(i);
            let g = |x: &BaseVec, y: &BaseVec| sample.surface.inner(&d.point, x, y);
            let (k, t) = (frenet.kappa[i], frenet.tau[i]);
            let th = theta[i];
            -el * th * k / t
                + (e1 * eps * sphi / (2.0 * k * t)) * (g(&d.xdd, &d.vd) - g(&d.vdd, &d.xd))
                - (e1 * th / (k * t)) * g(&d.vd, &d.vd)
                + (e1 * params.d * th / (2.0 * al * k * t)) * (el - eps * th * th)
        })
        .collect())
}

/// The h₁ invariant of null helices, per sample:
///
/// ```text
/// h₁ = (ε√|φ|/2)[g(ẍ,V̇) − g(V̈,ẋ)] − θ g(V̇,V̇) − (εd/2α) θ³ − κ_λ θ
/// ```
pub fn h1_series(
    params: &MetricParams,
    sample: &CurveSample,
    cartan: &CartanData,
) -> Result<Vec<f64>> {
    let ch = sample.causal_character_window(params)?;
    if ch != 0 {
        return Err(GeoError::NotNull(
            sample.speed_squared(params, sample.len() / 2),
        ));
    }
    let theta = slant_function(params, sample);
    let eps = params.epsilon();
    let sphi = params.sqrt_abs_phi();
    let al = params.alpha();
    Ok((0..sample.len())
        .map(|i| {
            let d = sample.derivs(i);
            let g = |x: &BaseVec, y: &BaseVec| sample.surface.inner(&d.point, x, y);
            let th = theta[i];
            (eps * sphi / 2.0) * (g(&d.xdd, &d.vd) - g(&d.vdd, &d.xd))
                - th * g(&d.vd, &d.vd)
                - (eps * params.d / (2.0 * al)) * th.powi(3)
                - cartan.kappa[i] * th
        })
        .collect())
}

/// Either frame apparatus, for the helix differential-equation residual.
pub enum Apparatus<'a> {
    Frenet(&'a FrenetData),
    Cartan(&'a CartanData),
}

/// Norm of the left-hand side of the helix differential equation matching
/// the curve's type, using measured κ_λ, τ, θ and f₂ (or h₁):
///
/// - τ = 0:  λ⁽³⁾ − (κ'/κ) λ'' + ε₁ε_λ κ² λ'
/// - τ ≠ 0:  (ε₁ε₂ f₂/κτ) λ⁽³⁾ − (ε₁ε₂ κ' f₂/κ²τ) λ'' − [ε_λθ − (ε_λε₂ κ f₂/τ)] λ' + V^h/√|φ|
/// - null:   √|φ| θ λ⁽³⁾ + √|φ|(κ_λθ − h₁) λ' + V^h
pub fn helix_ode_residual(
    params: &MetricParams,
    sample: &CurveSample,
    apparatus: &Apparatus,
    opts: &ClassifyOptions,
) -> Result<f64> {
    let (helix, _) = is_helix(params, sample, opts.tol_constancy * opts.tol_scale);
    if !helix {
        let theta = slant_function(params, sample);
        let st = series_stats(&theta, sample.stats_margin());
        return Err(GeoError::NotAHelix(st.std));
    }
    let theta = slant_function(params, sample);
    let g0 = sample.ghost_margin();
    let vel = sample.velocity_series_internal();
    let acc = sample.acceleration_series_internal(params);
    let jerk = sample.jerk_series_internal(params);
    let n = sample.len();
    let m = sample.stats_margin();
    let mut worst: f64 = 0.0;
    match apparatus {
        Apparatus::Frenet(f) => {
            let kprime = deriv_series(&f.kappa, sample.step());
            let tau_mid = series_stats(&f.tau, m).mean;
            let zero_tau = tau_mid.abs() < opts.tol_tau_zero * opts.tol_scale;
            let f2s = if zero_tau {
                vec![]
            } else {
                f2_series(params, sample, f)?
            };
            for i in m..n - m {
                let j = i + g0;
                let d = sample.derivs(i);
                let lhs = if zero_tau {
                    jerk[j]
                        .sub(&acc[j].scale(kprime[i] / f.kappa[i]))
                        .add(&vel[j].scale(f.eps1 * f.eps_lambda * f.kappa[i] * f.kappa[i]))
                } else {
                    let f2 = f2s[i];
                    let (k, t) = (f.kappa[i], f.tau[i]);
                    let c3 = f.eps1 * f.eps2 * f2 / (k * t);
                    jerk[j]
                        .scale(c3)
                        .sub(&acc[j].scale(f.eps1 * f.eps2 * kprime[i] * f2 / (k * k * t)))
                        .sub(&vel[j].scale(
                            f.eps_lambda * theta[i] - f.eps_lambda * f.eps2 * k * f2 / t,
                        ))
                        .add(&T1Vec::horizontal(d.v / params.sqrt_abs_phi()))
                };
                let nn = frame_norm_at(params, sample, i, &lhs);
                worst = worst.max(nn);
            }
        }
        Apparatus::Cartan(c) => {
            let h1 = h1_series(params, sample, c)?;
            let sphi = params.sqrt_abs_phi();
            for i in m..n - m {
                let j = i + g0;
                let d = sample.derivs(i);
                let lhs = jerk[j]
                    .scale(sphi * theta[i])
                    .add(&vel[j].scale(sphi * (c.kappa[i] * theta[i] - h1[i])))
                    .add(&T1Vec::horizontal(d.v));
                worst = worst.max(frame_norm_at(params, sample, i, &lhs));
            }
        }
    }
    Ok(worst)
}

fn frame_norm_at(params: &MetricParams, sample: &CurveSample, i: usize, z: &T1Vec) -> f64 {
    let d = sample.derivs(i);
    crate::connection::frame_norm(params, &sample.surface, &d.point, &d.v, z, d.rho)
}

/// Euclidean norm of a base vector through the embedding Jacobian; a
/// positive-definite gauge for family detection.
fn ambient_norm(sample: &CurveSample, i: usize, w: &BaseVec) -> f64 {
    let d = sample.derivs(i);
    (embed_jacobian(&sample.surface, &d.point) * w).norm()
}

fn detect_family(sample: &CurveSample) -> Result<CurveFamily> {
    let m = sample.stats_margin();
    let mut max_xd: f64 = 0.0;
    let mut max_vd: f64 = 0.0;
    for i in m..sample.len() - m {
        let d = sample.derivs(i);
        max_xd = max_xd.max(ambient_norm(sample, i, &d.xd));
        max_vd = max_vd.max(ambient_norm(sample, i, &d.vd));
    }
    let tol = 1e-6;
    match (max_xd < tol, max_vd < tol) {
        (true, true) => Err(GeoError::AmbiguousFamily(format!(
            "both ẋ ({max_xd:.2e}) and V̇ ({max_vd:.2e}) vanish: constant curve"
        ))),
        (true, false) => Ok(CurveFamily::Vertical),
        (false, true) => Ok(CurveFamily::HorizontalLift),
        (false, false) => Ok(CurveFamily::Oblique),
    }
}

struct Gate {
    checks: Vec<Check>,
}

impl Gate {
    fn new() -> Self {
        Gate { checks: vec![] }
    }
    fn push(&mut self, name: &str, pass: bool, residual: f64) {
        self.checks.push(Check::new(name, pass, residual));
    }
    fn cond(&mut self, name: &str, pass: bool) {
        self.push(name, pass, if pass { 0.0 } else { 1.0 });
    }
    fn resid(&mut self, name: &str, residual: f64, tol: f64) {
        self.push(name, residual.abs() < tol, residual.abs());
    }
    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Classify a normalized curve (arc-length, pseudo-arc, or verified geodesic)
/// against the helix characterizations.
pub fn classify(
    params: &MetricParams,
    sample: &CurveSample,
    opts: &ClassifyOptions,
) -> Result<HelixReport> {
    let theta_series = slant_function(params, sample);
    let m = sample.stats_margin();
    let theta_stats = series_stats(&theta_series, m);
    let (helix, theta_mean) = is_helix(params, sample, opts.tol_constancy * opts.tol_scale);
    let family = detect_family(sample)?;
    let causal = sample.causal_character_window(params)?;
    let theta = ThetaReport {
        series: theta_series.clone(),
        mean: theta_mean,
        constant: helix,
    };
    let report_base = |matched, checks, predicted, measured, branch| HelixReport {
        theta: theta.clone(),
        family,
        causal,
        is_helix: helix,
        matched_theorem: matched,
        checks,
        predicted,
        measured,
        branch_signs: branch,
    };

    // vertical curves are Legendre helices; no Frenet-style characterization
    if family == CurveFamily::Vertical {
        let mut gate = Gate::new();
        gate.resid("theta_zero", theta_stats.mean, 1e-8 + theta_stats.max_abs_dev);
        return Ok(report_base(
            MatchedTheorem::None,
            gate.checks,
            None,
            None,
            BranchSigns::default(),
        ));
    }

    // geodesic branch: three independently reported checks
    let mut geod_resid: f64 = 0.0;
    let mut vd_resid: f64 = 0.0;
    for i in m..sample.len() - m {
        let d = sample.derivs(i);
        geod_resid = geod_resid.max(geodesic_residual(params, &sample.surface, &d));
        vd_resid = vd_resid.max(ambient_norm(sample, i, &d.vd));
    }
    if geod_resid < opts.tol_geodesic * opts.tol_scale {
        let mut gate = Gate::new();
        gate.resid("geodesic_residual", geod_resid, opts.tol_geodesic * opts.tol_scale);
        gate.resid("fiber_parallel", vd_resid, 1e-6 * opts.tol_scale);
        gate.cond("slant_constant", helix);
        let matched = if gate.all_pass() {
            MatchedTheorem::Geod
        } else {
            MatchedTheorem::None
        };
        return Ok(report_base(matched, gate.checks, None, None, BranchSigns::default()));
    }

    if !helix {
        return Ok(report_base(
            MatchedTheorem::None,
            vec![Check::new("slant_constant", false, theta_stats.std)],
            None,
            None,
            BranchSigns::default(),
        ));
    }

    let (a, c, d) = (params.a, params.c, params.d);
    let ac = a + c;
    let al = params.alpha();
    let phi = params.phi();
    let eps = params.epsilon();
    let th = theta_mean;
    let horizontal = family == CurveFamily::HorizontalLift;

    if causal == 0 {
        // null Legendre non-vertical curves cannot be Cartan curves
        if theta_stats.mean.abs() < 1e-8 && theta_stats.max_abs_dev < 1e-6 {
            return Err(GeoError::AmbiguousFamily(
                "null Legendre curve must be vertical; non-vertical construction rejected"
                    .into(),
            ));
        }
        let cartan = cartan_apparatus(params, sample)?;
        let kappa_stats = series_stats(&cartan.kappa, m);
        let (kconst, _) = is_constant(&cartan.kappa, m, 1e-3);
        let mut gate = Gate::new();
        let measured = Constants {
            kappa: kappa_stats.mean,
            tau: None,
        };
        let sigma_mid = sample.sigma(sample.len() / 2);
        if horizontal {
            // lightlike horizontal
            gate.cond("d_nonzero", d.abs() > 1e-12);
            gate.resid(
                "phi_eq_minus_4alpha",
                phi + 4.0 * al,
                1e-9 * phi.abs().max(1.0),
            );
            let gxv = eps * th / params.sqrt_abs_phi();
            gate.resid(
                "slant_square",
                gxv * gxv - 1.0 / (2.0 * d.abs()),
                1e-6 * opts.tol_scale,
            );
            // base geodesic, or a+c = 3d with lightlike acceleration
            let mut xdd_norm: f64 = 0.0;
            let mut xdd_sq: f64 = 0.0;
            for i in m..sample.len() - m {
                let dv = sample.derivs(i);
                xdd_norm = xdd_norm.max(ambient_norm(sample, i, &dv.xdd));
                xdd_sq = xdd_sq
                    .max(sample.surface.inner(&dv.point, &dv.xdd, &dv.xdd).abs());
            }
            let geodesic_base = xdd_norm < 1e-6 * opts.tol_scale;
            let alt_branch = (ac - 3.0 * d).abs() < 1e-9 && xdd_sq < 1e-8 && xdd_norm > 1e-6;
            gate.cond("base_geodesic_or_lightlike_accel", geodesic_base || alt_branch);
            gate.cond("kappa_constant", kconst);
            let predicted = d * ac / (d * phi).abs();
            gate.resid(
                "kappa_match",
                measured.kappa - predicted,
                opts.tol_match_null * opts.tol_scale,
            );
            let matched = if gate.all_pass() {
                MatchedTheorem::NullHor
            } else {
                MatchedTheorem::None
            };
            let pred = gate.all_pass().then_some(Constants {
                kappa: predicted,
                tau: None,
            });
            return Ok(report_base(
                matched,
                gate.checks,
                pred,
                Some(measured),
                BranchSigns {
                    kappa: measured.kappa.signum() as i8,
                    tau: 0,
                },
            ));
        }
        // lightlike oblique
        gate.cond("d_equals_a_plus_c", (d - ac).abs() < 1e-12 && d.abs() > 1e-12);
        gate.resid(
            "sigma_eq_eps_over_2d",
            sigma_mid - eps / (2.0 * d),
            1e-6 * opts.tol_scale,
        );
        let scale = (2.0 * eps * d).sqrt();
        let fiber_resid = fiber_rule_residual(sample, scale);
        gate.resid("fiber_rule", fiber_resid, 1e-6 * opts.tol_scale);
        let circ = circle_check(sample);
        match circ {
            Ok(rep) => gate.cond("base_circle", rep.is_circle),
            Err(_) => gate.cond("base_circle", false),
        }
        gate.cond("kappa_constant", kconst);
        let predicted = eps / 2.0;
        gate.resid(
            "kappa_match",
            measured.kappa - predicted,
            opts.tol_match_null * opts.tol_scale,
        );
        let matched = if gate.all_pass() {
            MatchedTheorem::NullObl
        } else {
            MatchedTheorem::None
        };
        let pred = gate.all_pass().then_some(Constants {
            kappa: predicted,
            tau: None,
        });
        return Ok(report_base(
            matched,
            gate.checks,
            pred,
            Some(measured),
            BranchSigns {
                kappa: measured.kappa.signum() as i8,
                tau: 0,
            },
        ));
    }

    // non-null Frenet branches
    let frenet = frenet_apparatus(params, sample)?;
    let el = frenet.eps_lambda;
    let (e1, e2) = (frenet.eps1, frenet.eps2);
    let kappa_stats = series_stats(&frenet.kappa, m);
    let tau_stats = series_stats(&frenet.tau, m);
    let (kconst, _) = is_constant(&frenet.kappa, m, 1e-4);
    let zero_tau = tau_stats.mean.abs() < opts.tol_tau_zero * opts.tol_scale;
    let measured = Constants {
        kappa: kappa_stats.mean,
        tau: Some(tau_stats.mean),
    };
    let mut gate = Gate::new();
    gate.cond("d_nonzero", d.abs() > 1e-12);
    gate.cond("kappa_constant", kconst);

    let (matched_kind, predicted) = if horizontal {
        let mut xdd_norm: f64 = 0.0;
        for i in m..sample.len() - m {
            let dv = sample.derivs(i);
            xdd_norm = xdd_norm.max(ambient_norm(sample, i, &dv.xdd));
        }
        gate.resid("base_geodesic", xdd_norm, 1e-6 * opts.tol_scale);
        if zero_tau {
            gate.cond("ac_minus_d_nonzero", (ac - d).abs() > 1e-12);
            let gxv = eps * th / params.sqrt_abs_phi();
            gate.resid(
                "slant_square_eq_epslambda_over_2d",
                gxv * gxv - el / (2.0 * d),
                1e-6 * opts.tol_scale,
            );
            let k2 = (d - ac) / (4.0 * e1 * al);
            gate.cond("kappa_formula_real", k2 > 0.0);
            let predicted = Constants {
                kappa: k2.max(0.0).sqrt(),
                tau: Some(0.0),
            };
            gate.resid(
                "kappa_match",
                measured.kappa - predicted.kappa,
                opts.tol_match * opts.tol_scale,
            );
            gate.resid("tau_zero", tau_stats.mean, opts.tol_tau_zero * opts.tol_scale);
            (MatchedTheorem::Hor0, predicted)
        } else {
            gate.resid("four_alpha_eq_phi", 4.0 * al - phi, 1e-9 * phi.abs().max(1.0));
            let disc = e2 * (eps - el * th * th);
            gate.cond("eps2_eps_minus_epslambda_theta2_positive", disc > 0.0);
            gate.cond("eps_product", el * e1 == e2);
            gate.cond("base_nondegenerate", sample.sigma(sample.len() / 2).abs() > 1e-9);
            let predicted = Constants {
                kappa: (2.0 * th * d / phi).abs() * disc.max(0.0).sqrt(),
                tau: Some(eps * el - 2.0 * d * th * th / phi),
            };
            gate.resid(
                "kappa_match",
                measured.kappa - predicted.kappa,
                opts.tol_match * opts.tol_scale,
            );
            gate.resid(
                "tau_match",
                measured.tau.unwrap().abs() - predicted.tau.unwrap().abs(),
                opts.tol_match * opts.tol_scale,
            );
            (MatchedTheorem::HorT, predicted)
        }
    } else {
        // oblique: constant-speed spacelike circle with V = ±ẋ/√σ
        let sigma_mid = sample.sigma(sample.len() / 2);
        match circle_check(sample) {
            Ok(rep) => gate.cond("base_circle", rep.is_circle),
            Err(_) => gate.cond("base_circle", false),
        }
        gate.cond("base_spacelike", sigma_mid > 0.0);
        gate.resid(
            "sigma_eq_eps_theta2_over_phi",
            sigma_mid - eps * th * th / phi,
            1e-6 * opts.tol_scale * sigma_mid.abs().max(1.0),
        );
        let fiber_resid = fiber_rule_residual(sample, 1.0 / sigma_mid.abs().sqrt());
        gate.resid("fiber_rule", fiber_resid, 1e-6 * opts.tol_scale);
        if zero_tau {
            // θ²-corrected zero-torsion curvature
            let k2 = -d * (ac - d) * th * th / (2.0 * e1 * el * al * phi.abs());
            gate.cond("kappa_formula_real", k2 > 0.0);
            let predicted = Constants {
                kappa: k2.max(0.0).sqrt(),
                tau: Some(0.0),
            };
            gate.resid(
                "kappa_match",
                measured.kappa - predicted.kappa,
                opts.tol_match * opts.tol_scale,
            );
            gate.resid("tau_zero", tau_stats.mean, opts.tol_tau_zero * opts.tol_scale);
            (MatchedTheorem::Obl0, predicted)
        } else {
            gate.cond("eps1_eps2_alpha_positive", e1 * e2 * al > 0.0);
            gate.cond("eps_epslambda_one", eps * el == 1.0);
            let disc = e2 * (eps - el * th * th);
            gate.cond("eps2_eps_minus_epslambda_theta2_positive", disc > 0.0);
            let inner = e1 * (1.0 - th * th) / (al * phi);
            gate.cond("kappa_formula_real", inner > 0.0);
            let predicted = Constants {
                kappa: (d * th).abs() * inner.max(0.0).sqrt(),
                tau: Some((eps * phi - 2.0 * el * d * th * th) / (2.0 * (al * phi).abs().sqrt())),
            };
            gate.resid(
                "kappa_match",
                measured.kappa - predicted.kappa,
                opts.tol_match * opts.tol_scale,
            );
            gate.resid(
                "tau_match",
                measured.tau.unwrap().abs() - predicted.tau.unwrap().abs(),
                opts.tol_match * opts.tol_scale,
            );
            (MatchedTheorem::OblT, predicted)
        }
    };

    let all = gate.all_pass();
    let branch = BranchSigns {
        kappa: 1,
        tau: measured.tau.map(|t| t.signum() as i8).unwrap_or(0),
    };
    Ok(report_base(
        if all { matched_kind } else { MatchedTheorem::None },
        gate.checks,
        all.then_some(predicted),
        Some(measured),
        branch,
    ))
}

/// Classify after normalizing: geodesics are classified as sampled,
/// non-null curves are reparametrized by arc length, null curves by the
/// pseudo-arc parameter.
pub fn classify_auto(
    params: &MetricParams,
    sample: &CurveSample,
    opts: &ClassifyOptions,
) -> Result<HelixReport> {
    let m = sample.stats_margin();
    let mut geod: f64 = 0.0;
    for i in m..sample.len() - m {
        let d = sample.derivs(i);
        geod = geod.max(geodesic_residual(params, &sample.surface, &d));
    }
    if geod < opts.tol_geodesic * opts.tol_scale {
        return classify(params, sample, opts);
    }
    match sample.causal_character_window(params)? {
        0 => {
            // null Legendre non-vertical curves are rejected before the
            // pseudo-arc machinery can fail on them
            let st = slant_stats(params, sample);
            let vertical = {
                let mut max_xd: f64 = 0.0;
                for i in m..sample.len() - m {
                    let d = sample.derivs(i);
                    max_xd = max_xd.max(ambient_norm(sample, i, &d.xd));
                }
                max_xd < 1e-6
            };
            if st.mean.abs() < 1e-8 && st.max_abs_dev < 1e-6 && !vertical {
                return Err(GeoError::AmbiguousFamily(
                    "null Legendre curve must be vertical; non-vertical construction rejected"
                        .into(),
                ));
            }
            let normalized = sample.pseudo_arc_reparam(params)?;
            classify(params, &normalized, opts)
        }
        _ => {
            let sp = sample.speed_squared(params, sample.len() / 2);
            if (sp.abs() - 1.0).abs() <= 1e-4 {
                classify(params, sample, opts)
            } else {
                let normalized = sample.arclength_reparam(params)?;
                classify(params, &normalized, opts)
            }
        }
    }
}

/// Max deviation of V from ±scale·ẋ (best sign), in the ambient gauge.
fn fiber_rule_residual(sample: &CurveSample, scale: f64) -> f64 {
    let m = sample.stats_margin();
    let mut plus: f64 = 0.0;
    let mut minus: f64 = 0.0;
    for i in m..sample.len() - m {
        let d = sample.derivs(i);
        plus = plus.max(ambient_norm(sample, i, &(d.v - scale * d.xd)));
        minus = minus.max(ambient_norm(sample, i, &(d.v + scale * d.xd)));
    }
    plus.min(minus)
}

/// Convenience: the [`SeriesStats`] of the slant over the window interior.
pub fn slant_stats(params: &MetricParams, sample: &CurveSample) -> SeriesStats {
    series_stats(&slant_function(params, sample), sample.stats_margin())
}
