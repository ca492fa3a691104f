use std::env;

use anyhow::{bail, Context, Result};
use rieszspec::asymptotics::{Branch, DiskConstants, Predictor};
use rieszspec::diagnostics::{basis_verdict, DiagnosticsConfig, Mode};
use rieszspec::oracle::{compare, run, OracleConfig, OracleRun, DEFAULT_SIZE_CAP};
use rieszspec::unperturbed::{compute_c, eigensystem, DEFAULT_GAP_TOL};
use rieszspec::{BasisVerdict, DiskSet, Dominance, ProjectionTable, SweepEntry};
use serde::Serialize;

use crate::args::{AnalyzeArgs, Common, Format, ModeArg, OracleArgs};
use crate::input::{load, Problem};
use crate::output::{csv_table, json, num, opt, re_im};

pub const SIZE_CAP_VAR: &str = "RIESZSPEC_SIZE_CAP";

/// Bytes to write and the process exit code.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub code: u8,
}

#[derive(Debug, Serialize)]
struct RunConfig {
    command: &'static str,
    input: String,
    k_window: [i64; 2],
    c3: f64,
    c4: f64,
    format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<ModeArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slope_floor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bari_a: Option<f64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    truncation: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eig_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    size_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_buffer: Option<i64>,
    gap_tol: f64,
}

impl RunConfig {
    fn new(command: &'static str, problem: &Problem, common: &Common, window: [i64; 2]) -> Self {
        RunConfig {
            command,
            input: problem.source.clone(),
            k_window: window,
            c3: common.c3,
            c4: common.c4,
            format: common.format,
            mode: None,
            ratio_bound: None,
            slope_floor: None,
            bari_a: None,
            truncation: None,
            eig_tol: None,
            size_cap: None,
            edge_buffer: None,
            gap_tol: DEFAULT_GAP_TOL,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        bail!("{name} must be positive and finite, got {v}");
    }
    Ok(())
}

fn window(common: &Common, default: [i64; 2]) -> Result<[i64; 2]> {
    let w = match &common.k_window {
        Some(v) => [v[0], v[1]],
        None => default,
    };
    if w[0] < 1 || w[1] < w[0] {
        bail!(
            "k-window [{}, {}] must satisfy 1 <= k_min <= k_max",
            w[0],
            w[1]
        );
    }
    Ok(w)
}

fn constants(common: &Common) -> Result<DiskConstants> {
    positive("c3", common.c3)?;
    positive("c4", common.c4)?;
    Ok(DiskConstants {
        c3: common.c3,
        c4: common.c4,
    })
}

fn size_cap() -> Result<usize> {
    match env::var(SIZE_CAP_VAR) {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .with_context(|| format!("{SIZE_CAP_VAR} must be a positive integer, got {text:?}")),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    config: &'a RunConfig,
    order: usize,
    dim: usize,
    bc: &'static str,
    system: &'a rieszspec::BiorthogonalSystem,
    verdict: &'a BasisVerdict,
    degenerate_only: bool,
    sweep: &'a [SweepEntry],
    disks: &'a [DiskSet],
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    let common = &args.common;
    let problem = load(&common.input)?;
    let spec = &problem.spec;
    let defaults = DiagnosticsConfig::default();
    let w = window(common, [defaults.k_min, defaults.k_max])?;
    let constants = constants(common)?;
    positive("ratio-bound", args.ratio_bound)?;
    if args.ratio_bound < 1.0 {
        bail!("ratio-bound must be at least 1, got {}", args.ratio_bound);
    }
    let mode = match args.mode {
        ModeArg::Analytic => Mode::Analytic,
        ModeArg::Empirical => Mode::Empirical,
    };
    let diag = DiagnosticsConfig {
        ratio_bound: args.ratio_bound,
        bari_a: args.bari_a,
        ..defaults.window(w[0], w[1])
    };

    let system = eigensystem(&compute_c(spec), DEFAULT_GAP_TOL).context("P2 mean value")?;
    let table = ProjectionTable::build(spec, &system, spec.bc.resonant_frequency(w[1]));
    if let Some(path) = &args.projection_csv {
        let rows = table.rows().into_iter().map(|r| {
            vec![
                r.s.to_string(),
                r.q.to_string(),
                r.p.to_string(),
                num(r.re),
                num(r.im),
                num(r.abs),
            ]
        });
        let bytes = csv_table(&["s", "q", "p", "re_b", "im_b", "abs_b"], rows)?;
        crate::output::emit(&bytes, Some(path))?;
    }
    let predictor = Predictor::new(&table, &system, spec.order, spec.bc, constants);
    let sweep = predictor.predicted_spectrum(w[0], w[1]);
    let disks = (w[0]..=w[1])
        .map(|k| predictor.first_order_disks(k))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = basis_verdict(&table, spec.bc, &diag, mode).context("diagnostics")?;

    let degenerate_only = sweep.iter().all(|e| e.prediction().is_none());
    // A failing dominance condition already explains vanishing diagonals; that
    // report is a complete answer, not a degenerate one.
    let code = if degenerate_only && verdict.dominance.verdict != Dominance::Fails {
        2
    } else {
        0
    };

    let mut config = RunConfig::new("analyze", &problem, common, w);
    config.mode = Some(args.mode);
    config.ratio_bound = Some(diag.ratio_bound);
    config.slope_floor = Some(diag.slope_floor);
    config.bari_a = Some(diag.bari_a);

    let bytes = match common.format {
        Format::Json => json(&AnalyzeReport {
            config: &config,
            order: spec.order,
            dim: spec.dim,
            bc: spec.bc.name(),
            system: &system,
            verdict: &verdict,
            degenerate_only,
            sweep: &sweep,
            disks: &disks,
        })?,
        Format::Csv => sweep_csv(&sweep, &disks)?,
    };
    Ok(Outcome { bytes, code })
}

fn sweep_csv(sweep: &[SweepEntry], disks: &[DiskSet]) -> Result<Vec<u8>> {
    let header = [
        "k",
        "j",
        "status",
        "branch",
        "re_h",
        "im_h",
        "radius",
        "abs_alpha",
        "first_order_radius",
        "disks_disjoint",
    ];
    let mut rows = Vec::new();
    for e in sweep {
        let disk = disks.iter().find(|d| d.k == e.k);
        let first = disk.map(|d| num(d.radius)).unwrap_or_default();
        let disjoint = disk.map(|d| d.disjoint.to_string()).unwrap_or_default();
        match e.prediction() {
            Some(p) => {
                for b in [Branch::Plus, Branch::Minus] {
                    let [re, im] = re_im(p.h(b));
                    rows.push(vec![
                        e.k.to_string(),
                        (e.j + 1).to_string(),
                        "predicted".into(),
                        b.name().into(),
                        re,
                        im,
                        num(p.refined_radius),
                        num(p.alpha(b).norm()),
                        first.clone(),
                        disjoint.clone(),
                    ]);
                }
            }
            None => rows.push(vec![
                e.k.to_string(),
                (e.j + 1).to_string(),
                "degenerate".into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                first,
                disjoint,
            ]),
        }
    }
    csv_table(&header, rows)
}

fn oracle_setup(
    args: &OracleArgs,
    command: &'static str,
) -> Result<(Problem, RunConfig, OracleRun)> {
    let common = &args.common;
    let problem = load(&common.input)?;
    let spec = &problem.spec;
    positive("eig-tol", args.eig_tol)?;
    let mut cfg = OracleConfig::new(args.truncation, 1, 1);
    cfg.constants = constants(common)?;
    cfg.eig_tol = args.eig_tol;
    cfg.size_cap = size_cap()?;
    let buffer = cfg.edge_buffer_for(spec);
    let w = window(common, [1, (args.truncation / 2 - buffer).max(1)])?;
    cfg.k_min = w[0];
    cfg.k_max = w[1];
    let result = run(spec, &cfg)?;

    let mut config = RunConfig::new(command, &problem, common, w);
    config.truncation = Some(cfg.truncation);
    config.eig_tol = Some(cfg.eig_tol);
    config.size_cap = Some(cfg.size_cap);
    config.edge_buffer = Some(buffer);
    config.gap_tol = cfg.gap_tol;
    Ok((problem, config, result))
}

#[derive(Serialize)]
struct OracleReport<'a> {
    config: &'a RunConfig,
    oracle: &'a OracleRun,
}

pub fn oracle(args: &OracleArgs) -> Result<Outcome> {
    let (_, config, result) = oracle_setup(args, "oracle")?;
    let bytes = match args.common.format {
        Format::Json => json(&OracleReport {
            config: &config,
            oracle: &result,
        })?,
        Format::Csv => {
            let header = [
                "index",
                "re_lambda",
                "im_lambda",
                "status",
                "k",
                "j",
                "branch",
                "dominant_frequency",
                "residual",
            ];
            let rows = result.report.eigenpairs.iter().map(|e| {
                let [re, im] = re_im(e.lambda);
                let (k, j, branch) = match &e.assignment {
                    Some(a) => (
                        a.k.to_string(),
                        (a.j + 1).to_string(),
                        a.branch.map(|b| b.name().to_string()).unwrap_or_default(),
                    ),
                    None => Default::default(),
                };
                let status = serde_json::to_value(e.status)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                vec![
                    e.index.to_string(),
                    re,
                    im,
                    status,
                    k,
                    j,
                    branch,
                    e.dominant_frequency.to_string(),
                    num(e.residual),
                ]
            });
            csv_table(&header, rows)?
        }
    };
    Ok(Outcome { bytes, code: 0 })
}

#[derive(Serialize)]
struct CompareReport<'a> {
    config: &'a RunConfig,
    matrix_size: usize,
    matrix_norm: f64,
    max_eig_residual: f64,
    comparison: &'a rieszspec::oracle::ConvergenceReport,
}

pub fn compare_cmd(args: &OracleArgs) -> Result<Outcome> {
    let (_, config, result) = oracle_setup(args, "compare")?;
    let report = compare(&result);
    let bytes = match args.common.format {
        Format::Json => json(&CompareReport {
            config: &config,
            matrix_size: result.matrix_size,
            matrix_norm: result.matrix_norm,
            max_eig_residual: result.max_eig_residual,
            comparison: &report,
        })?,
        Format::Csv => {
            let header = [
                "k",
                "j",
                "branch",
                "re_lambda",
                "im_lambda",
                "re_h",
                "im_h",
                "eigenvalue_error",
                "normalized_error",
                "in_refined_disk",
                "abs_u",
                "abs_v",
                "ratio_error",
                "tail_energy",
                "overlap",
                "predicted_overlap",
            ];
            let rows = report.rows.iter().map(|r| {
                let ov = report.overlaps.iter().find(|o| o.k == r.k && o.j == r.j);
                let [lre, lim] = re_im(r.lambda);
                let [hre, him] = re_im(r.h);
                vec![
                    r.k.to_string(),
                    (r.j + 1).to_string(),
                    r.branch.name().into(),
                    lre,
                    lim,
                    hre,
                    him,
                    num(r.eigenvalue_error),
                    num(r.normalized_error),
                    r.in_refined_disk.to_string(),
                    num(r.u_abs),
                    num(r.v_abs),
                    num(r.ratio_error),
                    num(r.tail_energy),
                    opt(ov.map(|o| o.numerical_abs)),
                    opt(ov.and_then(|o| o.predicted)),
                ]
            });
            csv_table(&header, rows)?
        }
    };
    Ok(Outcome { bytes, code: 0 })
}
