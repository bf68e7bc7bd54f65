//! The subcommands. Each returns whether everything it checked passed.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use modular_sl3::anosov::{
    anosov_verdict, cartan_gap_scan, default_theta, morse_flat_check, peripheral_growth,
    triangle_report, VerdictConfig,
};
use modular_sl3::charvar::{
    self, fuchsian_classify, is_reducible, rep_from_coords, schwartz_t, trace_b2aba_bound_check,
    trace_baba_report, trace_symmetry_check, unipotency_check, Coordinates, DEFAULT_FUCHSIAN_TOL,
    UNIPOTENCY_TOL,
};
use modular_sl3::modgroup::random_f2_geodesic;
use modular_sl3::verify::{self, VerifyConfig};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{self, float, opt_float};

const REDUCIBILITY_TOL: f64 = 1e-7;
const PERIPHERAL_N_MAX: usize = 200;
const WINDOW_LEN: usize = 12;

pub fn run(cfg: &RunConfig) -> Result<bool> {
    match cfg.command {
        Command::Verify => verify(cfg),
        Command::TraceTable => trace_table(cfg),
        Command::Surface => surface(cfg),
        Command::AnosovScan => anosov_scan(cfg),
        Command::RepInfo => rep_info(cfg),
    }
}

/// Maps `f` over the grid on a pool of `cfg.jobs` threads, keeping grid order.
fn par_rows<F>(cfg: &RunConfig, f: F) -> Result<Vec<Vec<String>>>
where
    F: Fn(&[f64]) -> Result<Vec<String>> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let points = cfg.points();
    pool.install(|| points.par_iter().map(|p| f(p)).collect())
}

fn coordinates(p: &[f64]) -> Result<Coordinates> {
    Ok(Coordinates::new(p[0], p[1], p[2])?)
}

fn verify(cfg: &RunConfig) -> Result<bool> {
    let results = verify::run(&VerifyConfig {
        filter: cfg.filter.clone(),
        tol: cfg.tol,
        seed: cfg.seed,
        samples: cfg.samples,
    })?;
    let header = ["suite", "check", "residual", "tol", "status"];
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.suite.clone(),
                r.check.clone(),
                float(r.residual),
                float(r.tol),
                if r.passed { "pass" } else { "fail" }.to_string(),
            ]
        })
        .collect();
    output::emit_table(cfg, &header, &rows)?;
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    for r in &failed {
        match &r.error {
            Some(e) => eprintln!("FAIL {}/{}: {e}", r.suite, r.check),
            None => eprintln!(
                "FAIL {}/{}: residual {:e} exceeds {:e}",
                r.suite, r.check, r.residual, r.tol
            ),
        }
    }
    eprintln!("{} checks, {} failed", results.len(), failed.len());
    Ok(failed.is_empty())
}

fn trace_table(cfg: &RunConfig) -> Result<bool> {
    let header = [
        "s",
        "t",
        "theta",
        "tr_baba_numeric",
        "tr_baba_closed",
        "residual",
    ];
    let rows = par_rows(cfg, |p| {
        let rep = rep_from_coords(&coordinates(p)?);
        let r = trace_baba_report(&rep)?;
        Ok(vec![
            float(p[0]),
            float(p[1]),
            float(p[2]),
            float(r.numeric_trace),
            opt_float(r.closed_form),
            opt_float(r.residual),
        ])
    })?;
    output::emit_table(cfg, &header, &rows)?;
    let max = rows
        .iter()
        .filter_map(|r| r[5].parse::<f64>().ok())
        .fold(0.0, f64::max);
    eprintln!("max residual {max:e} over {} points", rows.len());
    Ok(true)
}

fn surface(cfg: &RunConfig) -> Result<bool> {
    let header = ["s", "theta", "t", "residual", "error"];
    let rows = par_rows(cfg, |p| {
        let (s, theta) = (p[0], p[1]);
        let sample = schwartz_t(s, theta).and_then(|t| {
            let rep = rep_from_coords(&Coordinates::new(s, t, theta)?);
            let tr = charvar::trace_of(&rep, &charvar::baba())?;
            Ok((t, (tr + 1.0).abs()))
        });
        Ok(match sample {
            Ok((t, res)) => vec![float(s), float(theta), float(t), float(res), String::new()],
            Err(e) => vec![
                float(s),
                float(theta),
                String::new(),
                String::new(),
                e.to_string(),
            ],
        })
    })?;
    output::emit_table(cfg, &header, &rows)?;
    let flagged = rows.iter().filter(|r| !r[4].is_empty()).count();
    if flagged > 0 {
        eprintln!("{flagged} rows outside the domain of the surface");
    }
    Ok(true)
}

fn verdict_config(cfg: &RunConfig) -> VerdictConfig {
    VerdictConfig {
        max_len: cfg.max_len,
        sample_budget: cfg.samples,
        seed: cfg.seed,
        ..VerdictConfig::default()
    }
}

fn anosov_scan(cfg: &RunConfig) -> Result<bool> {
    let header = [
        "s",
        "t",
        "theta",
        "verdict",
        "c",
        "minangle",
        "minspacing",
        "error",
    ];
    let vcfg = verdict_config(cfg);
    let rows = par_rows(cfg, |p| {
        let head = vec![float(p[0]), float(p[1]), float(p[2])];
        let tail = match coordinates(p).and_then(|c| Ok(anosov_verdict(&c, &vcfg)?)) {
            Ok(v) => vec![
                v.verdict.to_string(),
                float(v.gap_slope),
                opt_float(v.min_zeta_angle),
                opt_float(v.min_spacing),
                String::new(),
            ],
            Err(e) => vec![
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                e.to_string(),
            ],
        };
        Ok([head, tail].concat())
    })?;
    output::emit_table(cfg, &header, &rows)?;
    Ok(true)
}

/// The value, or `{"error": ...}`.
fn fallible<T: Serialize>(r: modular_sl3::Result<T>) -> Value {
    match r {
        Ok(v) => json!(v),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn rep_info(cfg: &RunConfig) -> Result<bool> {
    let c = cfg.coords.expect("validated");
    let coords = Coordinates::new(c[0], c[1], c[2])?;
    let rep = rep_from_coords(&coords);
    let baba = trace_baba_report(&rep)?;
    let surface_residual = (baba.numeric_trace + 1.0).abs();

    let peripheral = peripheral_growth(&rep, PERIPHERAL_N_MAX).map(|g| {
        json!({
            "model": g.model,
            "kappa": g.kappa,
            "kappa_log": g.kappa_log,
            "kappa_linear": g.kappa_linear,
            "residual_log": g.residual_log,
            "residual_linear": g.residual_linear,
            "n_max": PERIPHERAL_N_MAX,
        })
    });
    let gaps = cartan_gap_scan(&rep, cfg.max_len, cfg.samples, cfg.seed)?;
    let morse = match morse_flat_check(
        &rep,
        &random_f2_geodesic(WINDOW_LEN, cfg.seed),
        &default_theta(),
    ) {
        Ok(m) => json!({
            "max_distance": m.max_distance,
            "monotone": m.monotone,
            "violations": m.violations,
            "min_spacing": m.min_spacing,
            "distances": m.distances,
        }),
        // the flags fail to be opposite when the midpoints do not diverge
        Err(e) => json!({ "error": e.to_string(), "evidence": "evidence-degenerate" }),
    };
    let report = json!({
        "coordinates": { "s": coords.s(), "t": coords.t(), "theta": coords.theta() },
        "fuchsian_class": fuchsian_classify(&coords, cfg.tol.unwrap_or(DEFAULT_FUCHSIAN_TOL)).to_string(),
        "reducible": is_reducible(&rep, REDUCIBILITY_TOL),
        "relator_residual": charvar::relator_residual(&rep),
        "traces": {
            "baba": baba,
            "symmetry": trace_symmetry_check(&rep),
            "b2aba_bound": fallible(trace_b2aba_bound_check(&rep)),
        },
        "surface_residual": surface_residual,
        "unipotency": fallible(unipotency_check(&rep, UNIPOTENCY_TOL)),
        "peripheral": fallible(peripheral),
        "triangle": fallible(triangle_report(&rep)),
        "gaps": {
            "max_len": cfg.max_len,
            "words": gaps.records.len(),
            "sampled": gaps.sampled,
            "slope": gaps.slope,
            "offset": gaps.offset,
            "min_gap_by_length": gaps.min_gap_by_length,
        },
        "verdict": fallible(anosov_verdict(&coords, &verdict_config(cfg))),
        "morse": morse,
    });

    if let Some(path) = &cfg.gaps_out {
        let rows: Vec<Vec<String>> = gaps
            .records
            .iter()
            .map(|r| {
                vec![
                    r.word.clone(),
                    r.length.to_string(),
                    float(r.gap12),
                    float(r.gap23),
                ]
            })
            .collect();
        let w = output::sink(Some(path))?;
        output::write_csv(w, cfg, &["word", "length", "gap12", "gap23"], &rows)?;
    }

    output::write_json(
        output::sink(cfg.out.as_deref())?,
        &output::envelope(cfg, report),
    )?;
    Ok(true)
}
