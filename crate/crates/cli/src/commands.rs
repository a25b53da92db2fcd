//! The four subcommands. Each writes human-readable text to `out`, optional
//! CSV and SVG files, diagnostics to stderr, and returns a summary the
//! caller (or a test) can inspect.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crase_core::contour::marching_squares;
use crase_core::crase::{crase_moments, minimize_duan_closed};
use crase_core::oracle::{
    refine, run_oracle, ConvergenceRow, ConvergenceTable, DUAN_SAMPLE_THETAS,
};
use crase_core::sweep::{evaluate_cell, fmt9, SweepCell};
use crase_core::{CraseMoments, DuanResult, OracleReport, SqueezeParams};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg::{render_contours, CONTOUR_LEVELS};

/// Runs `f` on a dedicated pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, CliError> {
    Ok(csv::Writer::from_path(path)?)
}

fn opt9(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), fmt9)
}

fn warn_all(report: &OracleReport) {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSummary {
    pub params: SqueezeParams,
    pub moments: CraseMoments,
    pub duan: DuanResult,
}

pub fn analytic(cfg: &RunConfig, out: &mut dyn Write) -> Result<AnalyticSummary, CliError> {
    let params = cfg.rates().squeeze_params()?;
    let moments = crase_moments(params);
    let duan = minimize_duan_closed(params);
    // With no photons the efficiency is a ratio of zeros.
    let efficiency = (moments.n_ase > 0.0).then_some(moments.efficiency);

    let rows = [
        ("chi", fmt9(params.chi())),
        ("cosh_chi", fmt9(params.chi().cosh())),
        ("eps", fmt9(params.eps())),
        ("n_ase", fmt9(moments.n_ase)),
        ("n_rase", fmt9(moments.n_rase)),
        ("cross_ab", fmt9(moments.cross_ab)),
        ("efficiency", opt9(efficiency)),
        ("theta_star", fmt9(duan.theta_star)),
        ("duan_min", fmt9(duan.sum_min)),
    ];
    for (name, value) in &rows {
        writeln!(out, "{name:<12}{value}")?;
    }
    if duan.entangled {
        writeln!(out, "entangled (duan_min < 1)")?;
    } else {
        writeln!(out, "no entanglement (boundary)")?;
    }

    if let Some(path) = &cfg.csv_path {
        let mut w = csv_writer(path)?;
        w.write_record(rows.iter().map(|(n, _)| *n).chain(["entangled"]))?;
        w.write_record(
            rows.iter()
                .map(|(_, v)| v.as_str())
                .chain([if duan.entangled { "true" } else { "false" }]),
        )?;
        w.flush()?;
    }
    Ok(AnalyticSummary {
        params,
        moments,
        duan,
    })
}

pub const FIGURE3_HEADER: [&str; 4] = ["sqrt_eps", "cosh_chi", "theta_star", "duan_min"];

/// Evaluates the sweep grid, writes CSV (to the configured path, else to
/// `out`) and the SVG, then fails if any cell breaks the entanglement claim.
pub fn figure3(
    cfg: &RunConfig,
    jobs: Option<usize>,
    out: &mut dyn Write,
) -> Result<Vec<SweepCell>, CliError> {
    let spec = cfg.sweep;
    spec.validate()?;
    let cells = with_jobs(jobs, || {
        (0..spec.n_cells())
            .into_par_iter()
            .map(|idx| {
                let (se, cc) = spec.cell_coords(idx);
                evaluate_cell(se, cc, spec.theta_policy)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    match &cfg.csv_path {
        Some(path) => write_cells(csv_writer(path)?, &cells)?,
        None => write_cells(csv::Writer::from_writer(&mut *out), &cells)?,
    }

    if let Some(path) = &cfg.svg_path {
        let xs = spec.sqrt_eps.points();
        let ys = spec.cosh_chi.points();
        // Rows follow cosh_chi; cells are stored sqrt_eps-major.
        let grid: Vec<Vec<f64>> = (0..ys.len())
            .map(|j| {
                (0..xs.len())
                    .map(|i| cells[i * ys.len() + j].duan_min)
                    .collect()
            })
            .collect();
        let contours = marching_squares(&xs, &ys, &grid, &CONTOUR_LEVELS)?;
        let svg = render_contours(
            &contours,
            (xs[0], xs[xs.len() - 1]),
            (ys[0], ys[ys.len() - 1]),
            "sqrt(eps)",
            "cosh(chi)",
        );
        std::fs::write(path, svg)?;
    }

    let violations: Vec<&SweepCell> = cells
        .iter()
        .filter(|c| {
            c.claim_applies(spec.theta_policy) && (c.duan_min >= 1.0 || c.duan_min.is_nan())
        })
        .collect();
    if let Some(first) = violations.first() {
        return Err(CliError::ClaimViolation(format!(
            "{} cell(s) with duan_min >= 1, first at sqrt_eps = {}, cosh_chi = {} (duan_min = {})",
            violations.len(),
            fmt9(first.sqrt_eps),
            fmt9(first.cosh_chi),
            fmt9(first.duan_min)
        )));
    }
    Ok(cells)
}

fn write_cells<W: Write>(mut w: csv::Writer<W>, cells: &[SweepCell]) -> Result<(), CliError> {
    w.write_record(FIGURE3_HEADER)?;
    for c in cells {
        w.write_record([
            fmt9(c.sqrt_eps),
            fmt9(c.cosh_chi),
            fmt9(c.theta_star),
            fmt9(c.duan_min),
        ])?;
    }
    w.flush()?;
    Ok(())
}

const ORACLE_CSV_HEADER: [&str; 4] = ["quantity", "oracle", "analytic", "delta"];

fn oracle_rows(r: &OracleReport) -> Vec<[String; 4]> {
    let d = &r.analytic_deltas;
    let a = &r.analytic;
    let mut rows = vec![
        ["n_ase".into(), fmt9(r.n_ase), fmt9(a.n_ase), fmt9(d.n_ase)],
        [
            "n_rase".into(),
            fmt9(r.n_rase),
            fmt9(a.n_rase),
            fmt9(d.n_rase),
        ],
        [
            "cross_ab".into(),
            fmt9(r.cross_ab),
            fmt9(a.cross_ab),
            fmt9(d.cross_ab),
        ],
        [
            "efficiency".into(),
            opt9(r.efficiency),
            fmt9(a.efficiency),
            opt9(d.efficiency),
        ],
    ];
    let params = r.config.rates.squeeze_params().expect("validated rates");
    for (i, &theta) in DUAN_SAMPLE_THETAS.iter().enumerate() {
        let measured = r.duan_sum_at(theta).expect("theta in (0, 1)");
        let closed = crase_core::crase::duan_sum_closed(params, theta).expect("theta in (0, 1)");
        rows.push([
            format!("duan@{theta}"),
            fmt9(measured),
            fmt9(closed),
            fmt9(d.duan[i]),
        ]);
    }
    rows.push([
        "commutator_a".into(),
        fmt9(r.commutator_a),
        "0".into(),
        String::new(),
    ]);
    rows.push([
        "commutator_b".into(),
        fmt9(r.commutator_b),
        "0".into(),
        String::new(),
    ]);
    rows
}

/// One oracle run at the configured discretization.
pub fn oracle(cfg: &RunConfig, out: &mut dyn Write) -> Result<OracleReport, CliError> {
    let report = run_oracle(&cfg.oracle)?;
    warn_all(&report);
    let rows = oracle_rows(&report);
    writeln!(
        out,
        "{:<14}{:>18}{:>18}{:>18}",
        "quantity", "oracle", "analytic", "delta"
    )?;
    for row in &rows {
        writeln!(
            out,
            "{:<14}{:>18}{:>18}{:>18}",
            row[0], row[1], row[2], row[3]
        )?;
    }
    if let Some(path) = &cfg.csv_path {
        let mut w = csv_writer(path)?;
        w.write_record(ORACLE_CSV_HEADER)?;
        for row in &rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    let worst = report.analytic_deltas.max();
    writeln!(
        out,
        "max delta {} (tolerance {})",
        fmt9(worst),
        fmt9(cfg.tolerance)
    )?;
    if worst > cfg.tolerance || worst.is_nan() {
        return Err(CliError::Tolerance(format!(
            "max analytic delta {} exceeds tolerance {}",
            fmt9(worst),
            fmt9(cfg.tolerance)
        )));
    }
    Ok(report)
}

/// Runs `cfg.levels` refinement levels in parallel and checks that the
/// final level is within tolerance and every delta shrinks.
pub fn converge(
    cfg: &RunConfig,
    jobs: Option<usize>,
    out: &mut dyn Write,
) -> Result<ConvergenceTable, CliError> {
    if cfg.levels < 2 {
        return Err(CliError::Config {
            line: None,
            key: Some("levels".into()),
            message: format!(
                "a convergence study needs at least 2 levels, got {}",
                cfg.levels
            ),
        });
    }
    let rows = with_jobs(jobs, || {
        (0..cfg.levels)
            .into_par_iter()
            .map(|level| {
                run_oracle(&refine(&cfg.oracle, level))
                    .map(|report| ConvergenceRow { level, report })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let table = ConvergenceTable { rows };
    for (level, w) in table.flagged() {
        eprintln!("warning (level {level}): {w}");
    }

    let names: Vec<String> = table.rows[0]
        .report
        .analytic_deltas
        .entries()
        .into_iter()
        .map(|(n, _)| n)
        .collect();
    let mut header: Vec<String> = ["level", "m_oscillators", "dt", "mode_sigma"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(names.iter().cloned());
    header.push("commutator_defect".into());

    let defects = table.commutator_defects();
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .zip(&defects)
        .map(|(row, &defect)| {
            let c = &row.report.config;
            let mut line = vec![
                row.level.to_string(),
                c.m_oscillators.to_string(),
                fmt9(c.step()),
                fmt9(c.mode_sigma),
            ];
            line.extend(
                row.report
                    .analytic_deltas
                    .entries()
                    .into_iter()
                    .map(|(_, d)| opt9(d)),
            );
            line.push(fmt9(defect));
            line
        })
        .collect();

    writeln!(out, "{}", header.join("  "))?;
    for line in &body {
        writeln!(out, "{}", line.join("  "))?;
    }
    if let Some(path) = &cfg.csv_path {
        let mut w = csv_writer(path)?;
        w.write_record(&header)?;
        for line in &body {
            w.write_record(line)?;
        }
        w.flush()?;
    }

    let worst = table.final_report().analytic_deltas.max();
    let non_monotone = table.non_monotone();
    writeln!(
        out,
        "final max delta {} (tolerance {}), monotone: {}",
        fmt9(worst),
        fmt9(cfg.tolerance),
        non_monotone.is_empty()
    )?;
    if worst > cfg.tolerance || worst.is_nan() {
        return Err(CliError::Tolerance(format!(
            "final-level max delta {} exceeds tolerance {}",
            fmt9(worst),
            fmt9(cfg.tolerance)
        )));
    }
    if !non_monotone.is_empty() {
        return Err(CliError::Tolerance(format!(
            "deltas grow under refinement: {}",
            non_monotone.join(", ")
        )));
    }
    Ok(table)
}
