//! Scenario execution: pattern runs with CSV + JSON sidecar emission,
//! preset suites with a summary roll-up, and the oracle cross-check.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use spdcsim::crystal::dispersion_params;
use spdcsim::interference::{
    default_tau_grid, pattern, visibility_vs_thickness, PatternGrid,
};
use spdcsim::oracle::{oracle_report, OracleReport};

use crate::config::{ConfigResult, ResolvedScenario};
use crate::output;
use crate::presets::Preset;

/// Files written for one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct RunArtifacts {
    pub name: String,
    pub csv_path: PathBuf,
    pub metadata_path: PathBuf,
    pub svg_path: Option<PathBuf>,
}

/// Per-preset summary collected in the roll-up report.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub visibility_at_full_compensation: f64,
    pub min_visibility: f64,
    pub asymmetry_fs: f64,
    pub support_fs: f64,
    pub planewave_valid: Option<bool>,
}

/// Compute the pattern for a resolved scenario.
pub fn evaluate(scenario: &ResolvedScenario) -> ConfigResult<PatternGrid> {
    let params = dispersion_params(&scenario.crystal)?;
    let ld = params.support_fs(scenario.crystal.thickness_mm);
    let n = scenario.tau_samples;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1).max(1) as f64;
            ld * (scenario.tau_min_ld + (scenario.tau_max_ld - scenario.tau_min_ld) * t)
        })
        .collect();
    Ok(pattern(
        &scenario.system,
        &scenario.crystal,
        &scenario.pump,
        &grid,
        &scenario.options,
    )?)
}

/// Run one scenario and write its CSV and JSON sidecar (and SVG on request).
pub fn run_scenario(
    scenario: &ResolvedScenario,
    out_dir: &Path,
    svg: bool,
) -> ConfigResult<(RunArtifacts, PatternGrid)> {
    let grid = evaluate(scenario)?;
    let csv_path = out_dir.join(format!("{}.csv", scenario.name));
    let metadata_path = out_dir.join(format!("{}.json", scenario.name));
    output::write_text(&csv_path, &output::pattern_csv(&grid)).map_err(io_err(&csv_path))?;
    output::write_text(
        &metadata_path,
        &serde_json::to_string_pretty(&grid.metadata).expect("metadata serializes"),
    )
    .map_err(io_err(&metadata_path))?;
    let svg_path = if svg {
        let p = out_dir.join(format!("{}.svg", scenario.name));
        output::write_text(&p, &output::pattern_svg(&grid, &scenario.name))
            .map_err(io_err(&p))?;
        Some(p)
    } else {
        None
    };
    Ok((
        RunArtifacts { name: scenario.name.clone(), csv_path, metadata_path, svg_path },
        grid,
    ))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> crate::config::ConfigError + '_ {
    move |source| crate::config::ConfigError::Io { path: path.display().to_string(), source }
}

/// Run a preset (pattern or sweep); returns the summary for the roll-up.
pub fn run_preset(preset: &Preset, out_dir: &Path, svg: bool) -> ConfigResult<RunSummary> {
    match preset {
        Preset::Pattern(scenario) => {
            let (_, grid) = run_scenario(scenario, out_dir, svg)?;
            Ok(RunSummary {
                visibility_at_full_compensation: grid.visibility_at_full_compensation,
                min_visibility: grid.metadata.min_visibility,
                asymmetry_fs: grid.metadata.asymmetry_fs,
                support_fs: grid.metadata.support_fs,
                planewave_valid: grid.metadata.planewave.map(|v| v.valid),
            })
        }
        Preset::ThicknessSweep { scenario, l_grid_mm } => {
            let rows = visibility_vs_thickness(
                l_grid_mm,
                &scenario.crystal,
                &scenario.system,
                &scenario.pump,
                &scenario.options,
            )?;
            let csv_path = out_dir.join(format!("{}.csv", scenario.name));
            output::write_text(&csv_path, &output::sweep_csv(&rows))
                .map_err(io_err(&csv_path))?;
            if svg {
                let p = out_dir.join(format!("{}.svg", scenario.name));
                output::write_text(&p, &output::sweep_svg(&rows, &scenario.name))
                    .map_err(io_err(&p))?;
            }
            let params = dispersion_params(&scenario.crystal)?;
            let at_its_thickness = rows
                .iter()
                .min_by(|a, b| {
                    let da = (a.0 - scenario.crystal.thickness_mm).abs();
                    let db = (b.0 - scenario.crystal.thickness_mm).abs();
                    da.partial_cmp(&db).expect("finite grid")
                })
                .map(|r| r.1)
                .unwrap_or(f64::NAN);
            Ok(RunSummary {
                visibility_at_full_compensation: at_its_thickness,
                min_visibility: rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
                asymmetry_fs: 0.0,
                support_fs: params.support_fs(scenario.crystal.thickness_mm),
                planewave_valid: None,
            })
        }
    }
}

/// Run a list of presets and write the roll-up JSON of summary visibilities.
pub fn run_preset_suite(
    presets: &[Preset],
    out_dir: &Path,
    svg: bool,
) -> ConfigResult<BTreeMap<String, RunSummary>> {
    let mut rollup = BTreeMap::new();
    for preset in presets {
        let summary = run_preset(preset, out_dir, svg)?;
        rollup.insert(preset.name().to_string(), summary);
    }
    let path = out_dir.join("summary.json");
    output::write_text(&path, &serde_json::to_string_pretty(&rollup).expect("serializes"))
        .map_err(io_err(&path))?;
    Ok(rollup)
}

/// Closed-form versus oracle comparison for a cw scenario; the JSON table
/// lands next to the pattern outputs.
pub fn oracle_check(
    scenario: &ResolvedScenario,
    out_dir: &Path,
    samples: usize,
    tol: f64,
) -> ConfigResult<OracleReport> {
    let params = dispersion_params(&scenario.crystal)?;
    let grid = default_tau_grid(&params, scenario.crystal.thickness_mm, samples);
    let report = oracle_report(
        &scenario.system,
        &params,
        scenario.crystal.thickness_mm,
        &grid,
        tol,
    )?;
    let path = out_dir.join(format!("{}-oracle.json", scenario.name));
    output::write_text(&path, &report.to_json()).map_err(io_err(&path))?;
    Ok(report)
}
