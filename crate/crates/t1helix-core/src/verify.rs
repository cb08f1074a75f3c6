//! Named verification suites: structure identities, the seven helix
//! characterizations, connection identities, frame residuals and negative
//! controls. The CLI `verify` subcommand and the acceptance tests drive
//! these through [`run_suite`].

use crate::connection::{
    curve_jerk, geodesic_residual, integrate_t1_geodesic, state_speed_squared, GeodesicState,
    OdeSettings,
};
use crate::curves::{make_fixture, CurveFn, CurveSample};
use crate::error::{GeoError, Result};
use crate::frenet::{cartan_apparatus, frenet_apparatus};
use crate::helix::{classify, slant_stats, ClassifyOptions, MatchedTheorem};
use crate::metric::{
    eta_form, g_tilde, phi_tensor, reeb_field, structure_class, t1_signature, MetricParams,
    StructureClass, T1Vec, UnitTangentPoint,
};
use crate::numerics::{deriv_series, series_stats};
use crate::surface::{BaseVec, ChartPoint, SurfaceModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub runtime_ms: f64,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

pub fn suite_names() -> &'static [&'static str] {
    &[
        "structure",
        "theorem1",
        "theorem2",
        "theorem3",
        "theorem4",
        "theorem5",
        "theorem6",
        "theorem7",
        "connection",
        "frenet",
        "negative",
    ]
}

struct Check {
    name: &'static str,
    tolerance: f64,
    run: Box<dyn Fn() -> Result<(f64, Option<String>)> + Send + Sync>,
}

fn check(
    name: &'static str,
    tolerance: f64,
    run: impl Fn() -> Result<(f64, Option<String>)> + Send + Sync + 'static,
) -> Check {
    Check {
        name,
        tolerance,
        run: Box::new(run),
    }
}

fn ok(residual: f64) -> Result<(f64, Option<String>)> {
    Ok((residual, None))
}

fn run_checks(suite: &str, checks: Vec<Check>) -> SuiteResult {
    let mut results: Vec<CheckResult> = checks
        .into_par_iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.run)();
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            match outcome {
                Ok((residual, detail)) => CheckResult {
                    name: c.name.into(),
                    pass: residual.abs() <= c.tolerance,
                    residual,
                    tolerance: c.tolerance,
                    runtime_ms,
                    detail,
                },
                Err(e) => CheckResult {
                    name: c.name.into(),
                    pass: false,
                    residual: f64::NAN,
                    tolerance: c.tolerance,
                    runtime_ms,
                    detail: Some(format!("error: {e}")),
                },
            }
        })
        .collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteResult {
        suite: suite.into(),
        pass: results.iter().all(|c| c.pass),
        checks: results,
    }
}

/// Run a named suite. `tol_scale` scales every tolerance; `seed` drives the
/// random draws so results are reproducible.
pub fn run_suite(name: &str, seed: u64, tol_scale: f64) -> Result<SuiteResult> {
    match name {
        "structure" => Ok(structure_suite(seed, tol_scale)),
        "theorem1" => Ok(theorem1_suite(tol_scale)),
        "theorem2" => Ok(theorem2_suite(tol_scale)),
        "theorem3" => Ok(theorem3_suite(tol_scale)),
        "theorem4" => Ok(theorem4_suite(tol_scale)),
        "theorem5" => Ok(theorem5_suite(tol_scale)),
        "theorem6" => Ok(theorem6_suite(tol_scale)),
        "theorem7" => Ok(theorem7_suite(tol_scale)),
        "connection" => Ok(connection_suite(seed, tol_scale)),
        "frenet" => Ok(frenet_suite(tol_scale)),
        "negative" => Ok(negative_suite(tol_scale)),
        other => Err(GeoError::UnknownFixture(other.into())),
    }
}

/// Run every suite in a stable order.
pub fn run_all(seed: u64, tol_scale: f64) -> Vec<SuiteResult> {
    suite_names()
        .iter()
        .map(|n| run_suite(n, seed, tol_scale).expect("known suite"))
        .collect()
}

// ---------------------------------------------------------------------------
// structure suite
// ---------------------------------------------------------------------------

fn random_structured_params(rng: &mut ChaCha8Rng, paracontact: bool) -> MetricParams {
    // contact: |φ| = 4α with α > 0, paracontact: |φ| = −4α with α < 0;
    // sign of φ itself drawn freely where the class constraint allows
    loop {
        let a: f64 = rng.gen_range(0.2..2.0) * if paracontact { -1.0 } else { 1.0 };
        let ac: f64 = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let ac = if paracontact { ac } else { ac.abs() * a.signum() };
        let alpha = a * ac;
        if paracontact && alpha >= 0.0 {
            continue;
        }
        if !paracontact && alpha <= 0.0 {
            continue;
        }
        let target = 4.0 * alpha * if paracontact { -1.0 } else { 1.0 };
        let phi = if rng.gen_bool(0.5) { target } else { -target };
        let d = phi - ac;
        let c = ac - a;
        if let Ok(p) = MetricParams::new(a, c, d) {
            if structure_class(&p)
                == if paracontact {
                    StructureClass::ParacontactMetric
                } else {
                    StructureClass::ContactPseudoMetric
                }
            {
                return p;
            }
        }
    }
}

fn random_unit_point(rng: &mut ChaCha8Rng, s: &SurfaceModel) -> UnitTangentPoint {
    let base = ChartPoint::new(rng.gen_range(0.5..2.5), rng.gen_range(-3.0..3.0));
    let g = s.metric(&base).unwrap();
    loop {
        let v = BaseVec::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = (v.transpose() * g * v)[(0, 0)];
        if n > 1e-3 {
            return UnitTangentPoint::new(s, base, v / n.sqrt()).unwrap();
        }
    }
}

fn random_t1vec(rng: &mut ChaCha8Rng, s: &SurfaceModel, pt: &UnitTangentPoint) -> T1Vec {
    let h = BaseVec::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let t = crate::metric::tangential_lift(
        s,
        pt,
        &BaseVec::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    );
    T1Vec::new(h, t)
}

fn structure_suite(seed: u64, ts: f64) -> SuiteResult {
    let checks = vec![
        check("phi_squared_identity", 1e-12 * ts, move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = SurfaceModel::sphere(1.0)?;
            let mut worst: f64 = 0.0;
            for k in 0..1000 {
                let para = k % 2 == 1;
                let p = random_structured_params(&mut rng, para);
                let pt = random_unit_point(&mut rng, &s);
                let z = random_t1vec(&mut rng, &s, &pt);
                let xi = reeb_field(&p, &pt);
                let eta_z = eta_form(&p, &s, &pt, &z);
                let ppz = phi_tensor(&p, &s, &pt, &phi_tensor(&p, &s, &pt, &z));
                let expect = if para {
                    z.sub(&xi.scale(eta_z))
                } else {
                    z.scale(-1.0).add(&xi.scale(eta_z))
                };
                worst = worst
                    .max((ppz.horiz - expect.horiz).norm())
                    .max((ppz.tang - expect.tang).norm());
            }
            ok(worst)
        }),
        check("compatibility_identity", 1e-10 * ts, move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            let s = SurfaceModel::sphere(1.0)?;
            let mut worst: f64 = 0.0;
            for k in 0..1000 {
                let para = k % 2 == 1;
                let p = random_structured_params(&mut rng, para);
                let pt = random_unit_point(&mut rng, &s);
                let z1 = random_t1vec(&mut rng, &s, &pt);
                let z2 = random_t1vec(&mut rng, &s, &pt);
                let lhs = g_tilde(
                    &p,
                    &s,
                    &pt,
                    &phi_tensor(&p, &s, &pt, &z1),
                    &phi_tensor(&p, &s, &pt, &z2),
                );
                let sign = if para { -1.0 } else { 1.0 };
                let rhs = sign
                    * (g_tilde(&p, &s, &pt, &z1, &z2)
                        - p.epsilon() * eta_form(&p, &s, &pt, &z1) * eta_form(&p, &s, &pt, &z2));
                worst = worst.max((lhs - rhs).abs());
            }
            ok(worst)
        }),
        check("reeb_unit_exact", 0.0, move || {
            // ε is defined as sign(φ); φ/|φ| must equal it bit-exactly, and
            // the numeric route is checked at 1e-12 separately
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
            for _ in 0..1000 {
                let a: f64 = rng.gen_range(0.2..2.0);
                let d: f64 = rng.gen_range(-3.0..3.0);
                let Ok(p) = MetricParams::new(a, 0.0, d) else {
                    continue;
                };
                if p.phi() / p.phi().abs() != p.epsilon() {
                    return ok(1.0);
                }
            }
            ok(0.0)
        }),
        check("reeb_unit_numeric", 1e-12 * ts, move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
            let s = SurfaceModel::sphere(1.0)?;
            let mut worst: f64 = 0.0;
            for k in 0..1000 {
                let p = random_structured_params(&mut rng, k % 2 == 1);
                let pt = random_unit_point(&mut rng, &s);
                let xi = reeb_field(&p, &pt);
                worst = worst.max((g_tilde(&p, &s, &pt, &xi, &xi) - p.epsilon()).abs());
            }
            ok(worst)
        }),
        check("eta_reeb_identity", 1e-12 * ts, move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
            let s = SurfaceModel::sphere(1.0)?;
            let mut worst: f64 = 0.0;
            for k in 0..1000 {
                let p = random_structured_params(&mut rng, k % 2 == 1);
                let pt = random_unit_point(&mut rng, &s);
                let z = random_t1vec(&mut rng, &s, &pt);
                let xi = reeb_field(&p, &pt);
                worst = worst.max(
                    (g_tilde(&p, &s, &pt, &z, &xi) - p.epsilon() * eta_form(&p, &s, &pt, &z))
                        .abs(),
                );
            }
            ok(worst)
        }),
        check("signature_oracle_agreement", 0.0, move || {
            // t1_signature debug-asserts agreement internally; count silently
            // uncovered regions as information only
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
            let mut silent = 0usize;
            let mut total = 0usize;
            for _ in 0..1000 {
                let a: f64 = rng.gen_range(-2.0..2.0);
                let c: f64 = rng.gen_range(-2.0..2.0);
                let d: f64 = rng.gen_range(-2.0..2.0);
                let Ok(p) = MetricParams::new(a, c, d) else {
                    continue;
                };
                let k = if rng.gen_bool(0.5) { 0 } else { 1 };
                let (sig, oracle) = t1_signature(&p, (2 - k, k))?;
                if sig.0 + sig.1 != 3 {
                    return ok(1.0);
                }
                total += 1;
                if oracle == crate::metric::SignatureOracle::PropositionSilent {
                    silent += 1;
                }
            }
            Ok((0.0, Some(format!("{silent}/{total} parameter draws outside the case table"))))
        }),
    ];
    run_checks("structure", checks)
}

// ---------------------------------------------------------------------------
// theorem suites
// ---------------------------------------------------------------------------

fn classify_fixture(
    name: &'static str,
    want: MatchedTheorem,
    opts: &ClassifyOptions,
) -> Result<(f64, Option<String>)> {
    let spec = make_fixture(name)?;
    let sample = spec.build()?;
    let rep = classify(&spec.params, &sample, opts)?;
    let detail = format!(
        "matched {:?}; measured {:?}; predicted {:?}",
        rep.matched_theorem, rep.measured, rep.predicted
    );
    if rep.matched_theorem == want {
        Ok((0.0, Some(detail)))
    } else {
        let failing: Vec<_> = rep
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        Ok((1.0, Some(format!("{detail}; failing: {failing:?}"))))
    }
}

fn theorem1_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("fig1_geodesic_residual_any_params", 1e-6 * ts, move || {
            let spec = make_fixture("fig1-timelike")?;
            let sample = spec.build()?;
            let m = sample.stats_margin();
            let mut worst: f64 = 0.0;
            for (a, c, d) in [(1.0, 0.0, 3.0), (1.0, 0.0, 0.0), (0.7, 0.0, -1.3), (2.0, 0.0, 0.5)] {
                let p = MetricParams::new(a, c, d)?;
                for i in m..sample.len() - m {
                    worst = worst.max(geodesic_residual(&p, &sample.surface, &sample.derivs(i)));
                }
            }
            ok(worst)
        }),
        check("fig1_slant_constant", 1e-8 * ts, move || {
            let spec = make_fixture("fig1-timelike")?;
            let sample = spec.build()?;
            let st = slant_stats(&spec.params, &sample);
            ok(st.std / st.mean.abs().max(1e-12))
        }),
        check("fig1_classifies_geod", 0.0, move || {
            classify_fixture("fig1-timelike", MatchedTheorem::Geod, &opts)
        }),
        check("parallel_fixture_classify_geod", 0.0, move || {
            for name in ["timelike-geodesic", "spacelike-geodesic", "lightlike-geodesic"] {
                let (r, d) = classify_fixture(
                    match name {
                        "timelike-geodesic" => "timelike-geodesic",
                        "spacelike-geodesic" => "spacelike-geodesic",
                        _ => "lightlike-geodesic",
                    },
                    MatchedTheorem::Geod,
                    &opts,
                )?;
                if r > 0.0 {
                    return Ok((r, d.map(|s| format!("{name}: {s}"))));
                }
            }
            ok(0.0)
        }),
        check("integrate_fig1_chart_error", 1e-6 * ts, move || {
            let s = SurfaceModel::de_sitter(1.0)?;
            let p = MetricParams::new(1.0, 0.0, 3.0)?;
            let init = GeodesicState {
                x: ChartPoint::new(0.0, std::f64::consts::FRAC_PI_2),
                xd: BaseVec::new(1.0, 0.0),
                v: BaseVec::new(1.0, 0.0),
                vd: BaseVec::zeros(),
            };
            let (tsv, states) = integrate_t1_geodesic(&p, &s, init, &OdeSettings::default(), -1.0)?;
            let mut worst: f64 = 0.0;
            for (t, st) in tsv.iter().zip(&states) {
                worst = worst
                    .max((st.x.coords[0] - t).abs())
                    .max((st.x.coords[1] - std::f64::consts::FRAC_PI_2).abs())
                    .max((st.v[0] - 1.0).abs())
                    .max(st.v[1].abs());
            }
            ok(worst)
        }),
        check("integrate_d0_slant_drift", 1e-6 * ts, move || {
            // d = 0 with a generic parallel fiber: the integrated curve must
            // stay a helix
            let s = SurfaceModel::de_sitter(1.0)?;
            let p = MetricParams::new(1.0, 0.0, 0.0)?;
            let delta = 0.6_f64;
            let sq = (1.0 + delta * delta).sqrt();
            // x(0) = (0, π/2) has ambient (0,1,0); ẋ(0) ambient (sq, 0, δ),
            // v0 = (δ, 0, sq) spacelike unit; chart components via Jacobian
            let surface = s;
            let q0 = ChartPoint::new(0.0, std::f64::consts::FRAC_PI_2);
            let xd0 =
                crate::curves::vector_to_chart(&surface, &q0, &nalgebra::Vector3::new(sq, 0.0, delta));
            let v0 =
                crate::curves::vector_to_chart(&surface, &q0, &nalgebra::Vector3::new(delta, 0.0, sq));
            let init = GeodesicState {
                x: q0,
                xd: xd0,
                v: v0,
                vd: BaseVec::zeros(),
            };
            let (_, states) = integrate_t1_geodesic(&p, &s, init, &OdeSettings::default(), 1.0)?;
            let thetas: Vec<f64> = states
                .iter()
                .map(|st| {
                    p.epsilon() * p.sqrt_abs_phi() * s.inner(&st.x, &st.xd, &st.v)
                })
                .collect();
            let st = series_stats(&thetas, 2);
            ok(st.max_abs_dev)
        }),
        check("integrate_energy_drift", 1e-7 * ts, move || {
            let s = SurfaceModel::de_sitter(1.0)?;
            let p = MetricParams::new(1.0, 0.0, 3.0)?;
            let init = GeodesicState {
                x: ChartPoint::new(0.0, std::f64::consts::FRAC_PI_2),
                xd: BaseVec::new(1.0, 0.0),
                v: BaseVec::new(1.0, 0.0),
                vd: BaseVec::zeros(),
            };
            let (_, states) = integrate_t1_geodesic(&p, &s, init, &OdeSettings::default(), -1.0)?;
            let e0 = state_speed_squared(&p, &s, &states[0], -1.0);
            let mut worst: f64 = 0.0;
            for st in &states {
                worst = worst.max((state_speed_squared(&p, &s, st, -1.0) - e0).abs());
            }
            ok(worst)
        }),
    ];
    run_checks("theorem1", checks)
}

fn measured_constants(name: &'static str) -> Result<(f64, f64)> {
    let spec = make_fixture(name)?;
    let sample = spec.build()?;
    let f = frenet_apparatus(&spec.params, &sample)?;
    let m = sample.stats_margin();
    Ok((
        series_stats(&f.kappa, m).mean,
        series_stats(&f.tau, m).mean,
    ))
}

fn theorem2_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("hor0_kappa_match", 1e-4 * ts, move || {
            let (k, _) = measured_constants("hor0")?;
            let predicted = std::f64::consts::FRAC_1_SQRT_2; // √((d−(a+c))/4ε₁α)
            Ok((k - predicted, Some(format!("measured κ = {k}"))))
        }),
        check("hor0_tau_zero", 1e-4 * ts, move || {
            let (_, t) = measured_constants("hor0")?;
            ok(t)
        }),
        check("hor0_classifies", 0.0, move || {
            classify_fixture("hor0", MatchedTheorem::Hor0, &opts)
        }),
    ];
    run_checks("theorem2", checks)
}

fn theorem3_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("horT_kappa_match", 1e-4 * ts, move || {
            let (k, _) = measured_constants("horT")?;
            // |2θd/φ|·√(ε₂(ε−ε_λθ²)) with θ² = 4/7: 3√3/7
            let predicted = 3.0 * 3.0_f64.sqrt() / 7.0;
            Ok((k - predicted, Some(format!("measured κ = {k}"))))
        }),
        check("horT_tau_match", 1e-4 * ts, move || {
            let (_, t) = measured_constants("horT")?;
            // |εε_λ − 2dθ²/φ| = 1/7
            Ok((t.abs() - 1.0 / 7.0, Some(format!("measured τ = {t}"))))
        }),
        check("horT_classifies", 0.0, move || {
            classify_fixture("horT", MatchedTheorem::HorT, &opts)
        }),
    ];
    run_checks("theorem3", checks)
}

fn theorem4_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("fig2_sigma_half", 1e-10 * ts, move || {
            let spec = make_fixture("fig2-oblique")?;
            let sample = spec.build()?;
            ok(sample.sigma(sample.len() / 2) - 0.5)
        }),
        check("fig2_theta_sqrt2", 1e-8 * ts, move || {
            let spec = make_fixture("fig2-oblique")?;
            let sample = spec.build()?;
            let st = slant_stats(&spec.params, &sample);
            Ok((
                st.mean - 2.0_f64.sqrt(),
                Some(format!("drift {:.2e}", st.std / st.mean)),
            ))
        }),
        // Reference constants as published for this example: κ = √3/2, τ = 0.
        // Two independent derivative routes measure κ = 3/5, |τ| = 1/5
        // instead (the published zero-torsion curvature formula drops a θ²
        // factor; see the corrected check below), so this check documents the
        // discrepancy rather than the implementation.
        check("fig2_reference_constants_as_published", 1e-4 * ts, move || {
            let spec = make_fixture("fig2-oblique")?;
            let sample = spec.build()?.arclength_reparam(&spec.params)?;
            let f = frenet_apparatus(&spec.params, &sample)?;
            let m = sample.stats_margin();
            let k = series_stats(&f.kappa, m).mean;
            let t = series_stats(&f.tau, m).mean;
            let dk = (k - 3.0_f64.sqrt() / 2.0).abs();
            let dt = t.abs();
            Ok((
                dk.max(dt),
                Some(format!("measured κ = {k:.6}, τ = {t:.6}")),
            ))
        }),
        check("fig2_classifies_torsion_branch", 0.0, move || {
            let spec = make_fixture("fig2-oblique")?;
            let sample = spec.build()?.arclength_reparam(&spec.params)?;
            let rep = classify(&spec.params, &sample, &opts)?;
            let pass = rep.matched_theorem == MatchedTheorem::OblT;
            Ok((
                if pass { 0.0 } else { 1.0 },
                Some(format!(
                    "matched {:?}, measured {:?}",
                    rep.matched_theorem, rep.measured
                )),
            ))
        }),
        check("obl0_corrected_kappa_match", 1e-4 * ts, move || {
            // zero-torsion member of the family (unit-speed curvature² = 2):
            // θ² = 2/3 and κ = √(−d(a+c−d)θ²/(2ε₁ε_λα|φ|)) = 1/√2
            let (k, _) = measured_constants("obl0-circle")?;
            Ok((
                k - std::f64::consts::FRAC_1_SQRT_2,
                Some(format!("measured κ = {k}")),
            ))
        }),
        check("obl0_corrected_tau_zero", 1e-4 * ts, move || {
            let (_, t) = measured_constants("obl0-circle")?;
            ok(t)
        }),
        check("obl0_classifies", 0.0, move || {
            classify_fixture("obl0-circle", MatchedTheorem::Obl0, &opts)
        }),
    ];
    run_checks("theorem4", checks)
}

fn theorem5_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("oblT_kappa_match", 1e-4 * ts, move || {
            let (k, _) = measured_constants("oblT-hypercycle")?;
            // |dθ|√(ε₁(1−θ²)/(αφ)) with θ² = 4/3: 2/3
            Ok((k - 2.0 / 3.0, Some(format!("measured κ = {k}"))))
        }),
        check("oblT_tau_match", 1e-4 * ts, move || {
            let (_, t) = measured_constants("oblT-hypercycle")?;
            // |εφ − 2ε_λdθ²|/(2√|αφ|) = 1/3
            Ok((t.abs() - 1.0 / 3.0, Some(format!("measured τ = {t}"))))
        }),
        check("oblT_classifies", 0.0, move || {
            classify_fixture("oblT-hypercycle", MatchedTheorem::OblT, &opts)
        }),
    ];
    run_checks("theorem5", checks)
}

fn theorem6_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("null_hor_kappa_match", 1e-3 * ts, move || {
            let spec = make_fixture("null-hor")?;
            let sample = spec.build()?;
            let c = cartan_apparatus(&spec.params, &sample)?;
            let k = series_stats(&c.kappa, sample.stats_margin()).mean;
            // signed lightlike curvature d(a+c)/|dφ| = +1/2; the + sign is
            // what both derivative routes measure (tests/oracles.rs)
            Ok((k - 0.5, Some(format!("measured κ_λ = {k}"))))
        }),
        check("null_hor_pseudo_arc", 1e-5 * ts, move || {
            let spec = make_fixture("null-hor")?;
            let sample = spec.build()?;
            let m = sample.stats_margin();
            let mut worst: f64 = 0.0;
            for i in m..sample.len() - m {
                let d = sample.derivs(i);
                let acc = crate::connection::curve_acceleration(&spec.params, &sample.surface, &d);
                let q = crate::metric::g_tilde_rho(
                    &spec.params,
                    &sample.surface,
                    &d.point,
                    &d.v,
                    &acc,
                    &acc,
                    sample.rho,
                );
                worst = worst.max((q - 1.0).abs());
            }
            ok(worst)
        }),
        check("null_hor_classifies", 0.0, move || {
            classify_fixture("null-hor", MatchedTheorem::NullHor, &opts)
        }),
    ];
    run_checks("theorem6", checks)
}

fn theorem7_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("null_obl_kappa_match", 1e-3 * ts, move || {
            let spec = make_fixture("null-obl")?;
            let sample = spec.build()?;
            let c = cartan_apparatus(&spec.params, &sample)?;
            let k = series_stats(&c.kappa, sample.stats_margin()).mean;
            Ok((k - 0.5, Some(format!("measured κ_λ = {k}"))))
        }),
        check("null_obl_jerk_half_norm", 1e-3 * ts, move || {
            // ½ G̃(λ⁽³⁾, λ⁽³⁾) from the closed-form jerk agrees
            let spec = make_fixture("null-obl")?;
            let sample = spec.build()?;
            let i = sample.len() / 2;
            let d = sample.derivs(i);
            let j = curve_jerk(&spec.params, &sample.surface, &d);
            let q = crate::metric::g_tilde_rho(
                &spec.params,
                &sample.surface,
                &d.point,
                &d.v,
                &j,
                &j,
                sample.rho,
            );
            ok(0.5 * q - 0.5)
        }),
        check("null_obl_classifies", 0.0, move || {
            classify_fixture("null-obl", MatchedTheorem::NullObl, &opts)
        }),
    ];
    run_checks("theorem7", checks)
}

// ---------------------------------------------------------------------------
// connection suite
// ---------------------------------------------------------------------------

/// A random analytic curve on the unit sphere paired with κ-compatible
/// parameters (c = 0 keeps (a+c)/a = 1).
fn random_curve(rng: &mut ChaCha8Rng) -> (MetricParams, crate::curves::CurveSpec) {
    let a: f64 = rng.gen_range(0.4..1.6);
    let mut d: f64 = rng.gen_range(-1.5..1.5);
    if (a + d).abs() < 0.1 {
        d += 0.3;
    }
    let p = MetricParams::new(a, 0.0, d).unwrap();
    let surface = SurfaceModel::sphere(1.0).unwrap();
    let th0 = rng.gen_range(0.9..2.1);
    let amp = rng.gen_range(0.05..0.25);
    let om = rng.gen_range(0.5..1.5);
    let sp = rng.gen_range(0.4..1.0);
    let chi_rate = rng.gen_range(0.3..1.2);
    let path: CurveFn = Arc::new(move |t: f64| {
        let th = th0 + amp * (om * t).sin();
        let q = ChartPoint::new(th, sp * t + 0.1 * (2.0 * om * t).cos());
        // fiber rotating in the orthonormal chart frame
        let chi = chi_rate * t + 0.2 * (om * t).sin();
        let v = BaseVec::new(chi.cos(), chi.sin() / th.sin());
        (q, v)
    });
    (
        p,
        crate::curves::CurveSpec {
            label: "random".into(),
            family: crate::curves::CurveFamily::Custom,
            surface,
            params: p,
            window: (0.0, 2.0),
            samples: 512,
            rho: 1.0,
            path,
        },
    )
}

/// Random smooth T₁M field along a sample, tangential part projected.
fn random_field(rng: &mut ChaCha8Rng, sample: &CurveSample) -> Vec<T1Vec> {
    let c: [f64; 8] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    (0..sample.internal_count())
        .map(|j| {
            let d = sample.derivs_internal(j);
            let t = (j as f64) * sample.step();
            let p = BaseVec::new(
                c[0] + c[1] * (t + c[2]).sin(),
                c[3] + c[4] * (0.7 * t + c[5]).cos(),
            );
            let q_raw = BaseVec::new(c[6] * (0.9 * t).cos(), c[7] + 0.3 * (1.1 * t).sin());
            let q = crate::connection::project_tangential(
                &sample.surface,
                &d.point,
                &d.v,
                &q_raw,
                sample.rho,
            );
            T1Vec::new(p, q)
        })
        .collect()
}

fn connection_suite(seed: u64, ts: f64) -> SuiteResult {
    let checks = vec![
        check("metric_compatibility_along_curves", 1e-5 * ts, move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(10));
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let (p, spec) = random_curve(&mut rng);
                let sample = spec.build()?;
                let fa = random_field(&mut rng, &sample);
                let fb = random_field(&mut rng, &sample);
                let na = sample.transport_series(&p, &fa);
                let nb = sample.transport_series(&p, &fb);
                let total = sample.internal_count();
                let gab: Vec<f64> = (0..total)
                    .map(|j| {
                        let d = sample.derivs_internal(j);
                        crate::metric::g_tilde_rho(
                            &p,
                            &sample.surface,
                            &d.point,
                            &d.v,
                            &fa[j],
                            &fb[j],
                            sample.rho,
                        )
                    })
                    .collect();
                let dgab = deriv_series(&gab, sample.step());
                let m = sample.ghost_margin() + sample.stats_margin();
                for j in m..total - m {
                    let d = sample.derivs_internal(j);
                    let rhs = crate::metric::g_tilde_rho(
                        &p,
                        &sample.surface,
                        &d.point,
                        &d.v,
                        &na[j],
                        &fb[j],
                        sample.rho,
                    ) + crate::metric::g_tilde_rho(
                        &p,
                        &sample.surface,
                        &d.point,
                        &d.v,
                        &fa[j],
                        &nb[j],
                        sample.rho,
                    );
                    worst = worst.max((dgab[j] - rhs).abs());
                }
            }
            ok(worst)
        }),
        check("reeb_transport_identity", 1e-5 * ts, move || {
            // ∇̃_T ξ̃ = −ε φ̃(T) along arbitrary curves
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(11));
            let mut worst: f64 = 0.0;
            for _ in 0..40 {
                let (p, spec) = random_curve(&mut rng);
                let sample = spec.build()?;
                let total = sample.internal_count();
                let sphi = p.sqrt_abs_phi();
                let xi_field: Vec<T1Vec> = (0..total)
                    .map(|j| T1Vec::horizontal(sample.derivs_internal(j).v / sphi))
                    .collect();
                let nxi = sample.transport_series(&p, &xi_field);
                let m = sample.ghost_margin() + sample.stats_margin();
                for j in m..total - m {
                    let d = sample.derivs_internal(j);
                    let pt = UnitTangentPoint::new(&sample.surface, d.point, d.v)?;
                    let vel = T1Vec::new(
                        d.xd,
                        crate::connection::project_tangential(
                            &sample.surface,
                            &d.point,
                            &d.v,
                            &d.vd,
                            sample.rho,
                        ),
                    );
                    let target = phi_tensor(&p, &sample.surface, &pt, &vel).scale(-p.epsilon());
                    let diff = nxi[j].sub(&target);
                    worst = worst.max(crate::connection::frame_norm(
                        &p,
                        &sample.surface,
                        &d.point,
                        &d.v,
                        &diff,
                        sample.rho,
                    ));
                }
            }
            ok(worst)
        }),
        check("jerk_formula_vs_transport_on_helices", 1e-4 * ts, move || {
            // the closed-form third derivative assumes a constant slant, so
            // the comparison runs on the helix fixture catalog
            let mut worst: f64 = 0.0;
            for name in ["hor0", "horT", "fig2-oblique", "obl0-circle", "null-obl", "null-hor"] {
                let spec = make_fixture(name)?;
                let sample = spec.build()?;
                let jerk_t = sample.jerk_series_internal(&spec.params);
                let m = sample.ghost_margin() + sample.stats_margin();
                for j in m..sample.internal_count() - m {
                    let d = sample.derivs_internal(j);
                    let jf = curve_jerk(&spec.params, &sample.surface, &d);
                    let diff = jf.sub(&jerk_t[j]);
                    worst = worst.max(crate::connection::frame_norm(
                        &spec.params,
                        &sample.surface,
                        &d.point,
                        &d.v,
                        &diff,
                        sample.rho,
                    ));
                }
            }
            ok(worst)
        }),
        check("speed_and_slant_conserved_by_integrator", 1e-6 * ts, move || {
            // G̃(λ',λ') and G̃(λ', ξ̃) drift along an integrated geodesic in a
            // K-contact setup
            let s = SurfaceModel::sphere(1.0)?;
            let p = MetricParams::new(1.0, 0.0, 3.0)?;
            let cpsi = 0.5_f64;
            let speed = (1.0 / (1.0 + 3.0 * cpsi * cpsi)).sqrt();
            let init = GeodesicState {
                x: ChartPoint::new(std::f64::consts::FRAC_PI_2, 0.0),
                xd: BaseVec::new(0.0, speed),
                v: BaseVec::new((1.0 - cpsi * cpsi).sqrt(), cpsi),
                vd: BaseVec::zeros(),
            };
            // this initial condition is NOT geodesic for d≠0 unless the lift
            // is trivial; integrate the actual T₁M geodesic from it and check
            // the conserved quantities only
            let (_, states) = integrate_t1_geodesic(&p, &s, init, &OdeSettings::default(), 1.0)?;
            let e0 = state_speed_squared(&p, &s, &states[0], 1.0);
            let th = |st: &GeodesicState| {
                p.epsilon() * p.sqrt_abs_phi() * s.inner(&st.x, &st.xd, &st.v)
            };
            let th0 = th(&states[0]);
            let mut worst: f64 = 0.0;
            for st in &states {
                worst = worst
                    .max((state_speed_squared(&p, &s, st, 1.0) - e0).abs())
                    .max((th(st) - th0).abs());
            }
            ok(worst)
        }),
    ];
    run_checks("connection", checks)
}

// ---------------------------------------------------------------------------
// frenet / cartan suite
// ---------------------------------------------------------------------------

fn frenet_suite(ts: f64) -> SuiteResult {
    let checks = vec![
        check("frenet_equation_residuals", 1e-4 * ts, move || {
            let mut worst: f64 = 0.0;
            let mut detail = String::new();
            for name in ["hor0", "horT", "obl0-circle", "oblT-hypercycle", "fig2-oblique"] {
                let spec = make_fixture(name)?;
                let sample = if name == "fig2-oblique" {
                    spec.build()?.arclength_reparam(&spec.params)?
                } else {
                    spec.build()?
                };
                let f = frenet_apparatus(&spec.params, &sample)?;
                let r = f.residuals.eq1.max(f.residuals.eq2).max(f.residuals.eq3);
                detail.push_str(&format!("{name}: {r:.2e}; "));
                worst = worst.max(r);
            }
            Ok((worst, Some(detail)))
        }),
        check("cartan_gram_pattern", 1e-5 * ts, move || {
            let mut worst: f64 = 0.0;
            for name in ["null-obl", "null-hor"] {
                let spec = make_fixture(name)?;
                let sample = spec.build()?;
                let c = cartan_apparatus(&spec.params, &sample)?;
                for g in c.gram_residuals {
                    worst = worst.max(g);
                }
            }
            ok(worst)
        }),
        check("pseudo_arc_normalization", 1e-5 * ts, move || {
            let mut worst: f64 = 0.0;
            for name in ["null-obl", "null-hor"] {
                let spec = make_fixture(name)?;
                let sample = spec.build()?.pseudo_arc_reparam(&spec.params)?;
                let m = sample.stats_margin();
                for i in m..sample.len() - m {
                    let d = sample.derivs(i);
                    let acc =
                        crate::connection::curve_acceleration(&spec.params, &sample.surface, &d);
                    let q = crate::metric::g_tilde_rho(
                        &spec.params,
                        &sample.surface,
                        &d.point,
                        &d.v,
                        &acc,
                        &acc,
                        sample.rho,
                    );
                    worst = worst.max((q - 1.0).abs());
                }
            }
            ok(worst)
        }),
        check("cartan_equation_residuals", 1e-4 * ts, move || {
            let mut worst: f64 = 0.0;
            for name in ["null-obl", "null-hor"] {
                let spec = make_fixture(name)?;
                let sample = spec.build()?;
                let c = cartan_apparatus(&spec.params, &sample)?;
                worst = worst
                    .max(c.residuals.eq1)
                    .max(c.residuals.eq2)
                    .max(c.residuals.eq3);
            }
            ok(worst)
        }),
    ];
    run_checks("frenet", checks)
}

// ---------------------------------------------------------------------------
// negative controls
// ---------------------------------------------------------------------------

fn negative_suite(ts: f64) -> SuiteResult {
    let opts = ClassifyOptions {
        tol_scale: ts,
        ..Default::default()
    };
    let checks = vec![
        check("d0_horizontal_not_helix", 0.0, move || {
            let spec = make_fixture("control-d0-horizontal")?;
            let sample = spec.build()?;
            let (h, _) = crate::helix::is_helix(&spec.params, &sample, 1e-6);
            // the lift of a non-geodesic with parallel V has varying slant
            ok(if h { 1.0 } else { 0.0 })
        }),
        check("d0_horizontal_classifies_none", 0.0, move || {
            let spec = make_fixture("control-d0-horizontal")?;
            let sample = spec.build()?.arclength_reparam(&spec.params)?;
            let rep = classify(&spec.params, &sample, &opts)?;
            Ok((
                if rep.matched_theorem == MatchedTheorem::None {
                    0.0
                } else {
                    1.0
                },
                Some(format!("matched {:?}", rep.matched_theorem)),
            ))
        }),
        check("varspeed_oblique_not_helix", 0.0, move || {
            let spec = make_fixture("control-oblique-varspeed")?;
            let sample = spec.build()?;
            let (h, _) = crate::helix::is_helix(&spec.params, &sample, 1e-6);
            ok(if h { 1.0 } else { 0.0 })
        }),
        check("null_legendre_rejected", 0.0, move || {
            let spec = make_fixture("control-null-legendre")?;
            let sample = spec.build()?;
            // must be rejected: a null Legendre curve is necessarily vertical
            match classify(&spec.params, &sample, &opts) {
                Err(_) => ok(0.0),
                Ok(rep) => Ok((
                    1.0,
                    Some(format!("unexpectedly classified {:?}", rep.matched_theorem)),
                )),
            }
        }),
        check("perturbed_fiber_rule_classifies_none", 0.0, move || {
            // fig2 with the fiber rotated by a small varying angle inside the
            // unit fiber: still unit, but no longer a helix
            let spec = make_fixture("fig2-oblique")?;
            let base = spec.path.clone();
            let surface = spec.surface;
            let path: CurveFn = Arc::new(move |t: f64| {
                let (q, v) = base(t);
                let n = crate::curves::unit_normal(&surface, &q, &v);
                let delta = 0.02 * (3.0 * t).sin();
                (q, delta.cos() * v + delta.sin() * n)
            });
            let sample =
                CurveSample::from_closed_form(spec.surface, path, spec.window, spec.samples, 1.0)?;
            let (h, _) = crate::helix::is_helix(&spec.params, &sample, 1e-6);
            if h {
                return ok(1.0);
            }
            let rep = classify(
                &spec.params,
                &sample.arclength_reparam(&spec.params)?,
                &ClassifyOptions::default(),
            )?;
            Ok((
                if rep.matched_theorem == MatchedTheorem::None {
                    0.0
                } else {
                    1.0
                },
                Some(format!("matched {:?}", rep.matched_theorem)),
            ))
        }),
    ];
    run_checks("negative", checks)
}
