//! `t1helix` — build curves on unit tangent bundles of constant-curvature
//! surfaces, measure their Frenet/Cartan invariants, detect helices, and run
//! the verification suites.

mod config;

use anyhow::Context;
use clap::{Parser, Subcommand};
use config::RunConfig;
use std::io::Write;
use std::path::PathBuf;
use t1helix_core::helix::{classify_auto, slant_function};
use t1helix_core::metric::{structure_report, MetricParams, StructureClass};
use t1helix_core::surface::SurfaceModel;
use t1helix_core::verify::{run_all, run_suite, suite_names, SuiteResult};

#[derive(Parser)]
#[command(name = "t1helix", version, about)]
struct Cli {
    /// Run configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Scale factor applied to every tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Verify {
        /// all, structure, theorem1..theorem7, connection, frenet, negative
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a curve from a spec file and export CSV.
    Curve {
        /// Curve spec file; defaults to --config.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Output CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include ambient embedding columns.
        #[arg(long)]
        embed: bool,
    },
    /// Classify a curve against the helix characterizations.
    Classify {
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Sweep metric constants over a grid and report structure per point.
    Sweep {
        /// Grid for a: start:stop:steps.
        #[arg(long, default_value = "1:1:1")]
        a: String,
        /// Grid for c: start:stop:steps.
        #[arg(long, default_value = "0:0:1")]
        c: String,
        /// Grid for d: start:stop:steps.
        #[arg(long, default_value = "-2:2:9")]
        d: String,
        /// Base Gaussian curvature for the K-contact column.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Output CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    init_threads();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn init_threads() {
    if let Ok(v) = std::env::var("T1HELIX_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Verify { suite, seed } => cmd_verify(&suite, seed, cli.tol_scale, cli.json),
        Command::Curve { spec, out, embed } => {
            let path = spec
                .or(cli.config)
                .context("curve needs --spec or --config")?;
            let cfg = RunConfig::load(&path)?;
            cmd_curve(&cfg, out.as_deref(), embed)?;
            Ok(0)
        }
        Command::Classify { spec } => {
            let path = spec
                .or(cli.config)
                .context("classify needs --spec or --config")?;
            let cfg = RunConfig::load(&path)?;
            cmd_classify(&cfg, cli.tol_scale, cli.json)
        }
        Command::Sweep { a, c, d, kappa, out } => {
            cmd_sweep(&a, &c, &d, kappa, out.as_deref(), cli.json)?;
            Ok(0)
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(suite: &str, seed: u64, tol_scale: f64, json: bool) -> anyhow::Result<i32> {
    let results: Vec<SuiteResult> = if suite == "all" {
        run_all(seed, tol_scale)
    } else {
        vec![run_suite(suite, seed, tol_scale).with_context(|| {
            format!("unknown suite `{suite}`; expected all or one of {:?}", suite_names())
        })?]
    };
    let all_pass = results.iter().all(|r| r.pass);
    if json {
        println!("{}", serde_json::to_string_pretty(&results)?);
    } else {
        for r in &results {
            println!("suite {} — {}", r.suite, if r.pass { "PASS" } else { "FAIL" });
            for c in &r.checks {
                println!(
                    "  [{}] {:<42} residual {:>12.3e}  tol {:>8.1e}  {:>7.1} ms{}",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name,
                    c.residual,
                    c.tolerance,
                    c.runtime_ms,
                    c.detail
                        .as_deref()
                        .map(|d| format!("  ({d})"))
                        .unwrap_or_default()
                );
            }
        }
        println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
    }
    Ok(if all_pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// curve export
// ---------------------------------------------------------------------------

/// 17 significant digits, bit-stable round trip.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_curve(cfg: &RunConfig, out: Option<&std::path::Path>, embed: bool) -> anyhow::Result<()> {
    let spec = cfg.curve_spec()?;
    let sample = cfg.build_sample()?;
    let params = spec.params;
    let theta = slant_function(&params, &sample);
    let mut buf = String::new();
    let mut header = String::from("t,x0,x1");
    if embed {
        header.push_str(",e0,e1,e2");
    }
    header.push_str(",V0,V1,eps_lambda,sigma,theta");
    buf.push_str(&header);
    buf.push('\n');
    for i in 0..sample.len() {
        let p = sample.point(i);
        let v = sample.fiber(i);
        let mut row = vec![
            fmt_f64(sample.t(i)),
            fmt_f64(p.coords[0]),
            fmt_f64(p.coords[1]),
        ];
        if embed {
            let e = sample.surface.embed(&p)?;
            row.push(fmt_f64(e[0]));
            row.push(fmt_f64(e[1]));
            row.push(fmt_f64(e[2]));
        }
        row.push(fmt_f64(v[0]));
        row.push(fmt_f64(v[1]));
        row.push(format!("{}", sample.causal_character(&params, i)));
        row.push(fmt_f64(sample.sigma(i)));
        row.push(fmt_f64(theta[i]));
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    match out {
        Some(path) => {
            std::fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            std::io::stdout().write_all(buf.as_bytes())?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(cfg: &RunConfig, tol_scale: f64, json: bool) -> anyhow::Result<i32> {
    let spec = cfg.curve_spec()?;
    let sample = cfg.build_sample()?;
    let opts = cfg.classify_options(tol_scale);
    let report = classify_auto(&spec.params, &sample, &opts)
        .with_context(|| format!("classifying `{}`", spec.label))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("curve:    {}", spec.label);
        println!("family:   {:?}    causal: {}", report.family, report.causal);
        println!(
            "slant:    mean {:.9}  constant: {}",
            report.theta.mean, report.theta.constant
        );
        println!("helix:    {}", report.is_helix);
        println!("matched:  {:?}", report.matched_theorem);
        for c in &report.checks {
            println!(
                "  [{}] {:<44} residual {:.3e}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.residual
            );
        }
        if let Some(m) = &report.measured {
            println!("measured:  kappa {:.9}  tau {:?}", m.kappa, m.tau);
        }
        if let Some(p) = &report.predicted {
            println!("predicted: kappa {:.9}  tau {:?}", p.kappa, p.tau);
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn grid(range: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        anyhow::bail!("grid needs start:stop:steps, got `{range}`");
    };
    let lo: f64 = lo.parse().with_context(|| format!("bad grid start in `{range}`"))?;
    let hi: f64 = hi.parse().with_context(|| format!("bad grid stop in `{range}`"))?;
    let n: usize = n.parse().with_context(|| format!("bad grid steps in `{range}`"))?;
    anyhow::ensure!(n >= 1 && hi >= lo, "bad grid `{range}`");
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

#[derive(serde::Serialize)]
struct SweepRow {
    a: f64,
    c: f64,
    d: f64,
    alpha: f64,
    phi: f64,
    epsilon: f64,
    class: StructureClass,
    signature: (usize, usize),
    k_contact: bool,
    kaluza_klein: bool,
    hor0_admissible: bool,
    hor_t_admissible: bool,
    obl_admissible: bool,
    null_hor_admissible: bool,
    null_obl_admissible: bool,
}

fn cmd_sweep(
    a: &str,
    c: &str,
    d: &str,
    kappa: f64,
    out: Option<&std::path::Path>,
    json: bool,
) -> anyhow::Result<()> {
    let surface = if kappa > 0.0 {
        SurfaceModel::sphere(kappa)
    } else {
        SurfaceModel::hyperbolic(kappa)
    }?;
    let (ga, gc, gd) = (grid(a)?, grid(c)?, grid(d)?);
    let mut rows = Vec::new();
    for &av in &ga {
        for &cv in &gc {
            for &dv in &gd {
                let Ok(p) = MetricParams::new(av, cv, dv) else {
                    continue;
                };
                let rep = structure_report(&p, &surface)?;
                let tol = 1e-9 * rep.phi.abs().max(1.0);
                rows.push(SweepRow {
                    a: av,
                    c: cv,
                    d: dv,
                    alpha: rep.alpha,
                    phi: rep.phi,
                    epsilon: rep.epsilon,
                    class: rep.class,
                    signature: rep.signature,
                    k_contact: rep.k_contact,
                    kaluza_klein: dv == 0.0,
                    hor0_admissible: dv != 0.0 && (av + cv - dv).abs() > tol,
                    hor_t_admissible: dv != 0.0 && (4.0 * rep.alpha - rep.phi).abs() < tol,
                    obl_admissible: dv != 0.0,
                    null_hor_admissible: dv != 0.0 && (rep.phi + 4.0 * rep.alpha).abs() < tol,
                    null_obl_admissible: dv != 0.0 && (dv - (av + cv)).abs() < tol,
                });
            }
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
        return Ok(());
    }
    let mut buf = String::from(
        "a,c,d,alpha,phi,epsilon,class,sig_p,sig_q,k_contact,kaluza_klein,hor0,horT,obl,null_hor,null_obl\n",
    );
    for r in rows {
        buf.push_str(&format!(
            "{},{},{},{},{},{},{:?},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.a),
            fmt_f64(r.c),
            fmt_f64(r.d),
            fmt_f64(r.alpha),
            fmt_f64(r.phi),
            r.epsilon,
            r.class,
            r.signature.0,
            r.signature.1,
            r.k_contact,
            r.kaluza_klein,
            r.hor0_admissible,
            r.hor_t_admissible,
            r.obl_admissible,
            r.null_hor_admissible,
            r.null_obl_admissible
        ));
    }
    match out {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().write_all(buf.as_bytes())?,
    }
    Ok(())
}
