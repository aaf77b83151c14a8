use std::path::{Path, PathBuf};
use std::process::ExitCode;

use spdcsim_cli::config::{ResolvedScenario, ScenarioFile};
use spdcsim_cli::{expand, oracle_check, presets, run_preset_suite, run_scenario};

const USAGE: &str = "\
spdcsim - type-II SPDC quantum-interference simulator

USAGE:
    spdcsim run <config.toml> [--out-dir DIR] [--tau-samples N] [--svg] [--drop-sinc]
    spdcsim preset <id...>    [--out-dir DIR] [--tau-samples N] [--svg] [--drop-sinc]
    spdcsim list-presets
    spdcsim oracle-check <config.toml> [--out-dir DIR] [--tau-samples N] [--tol X]

Outputs per scenario: <name>.csv (tau_fs,V,R_over_R0), <name>.json metadata
sidecar, optional <name>.svg plot. Preset suites add summary.json.
";

struct Flags {
    out_dir: PathBuf,
    tau_samples: Option<usize>,
    svg: bool,
    drop_sinc: bool,
    tol: f64,
    positional: Vec<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut flags = Flags {
        out_dir: PathBuf::from("out"),
        tau_samples: None,
        svg: false,
        drop_sinc: false,
        tol: 1.0e-6,
        positional: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--out-dir" => {
                flags.out_dir = PathBuf::from(
                    it.next().ok_or("--out-dir needs a value")?,
                );
            }
            "--tau-samples" => {
                let v = it.next().ok_or("--tau-samples needs a value")?;
                let n: usize = v.parse().map_err(|_| format!("bad --tau-samples {v:?}"))?;
                if n < 2 {
                    return Err("--tau-samples must be at least 2".into());
                }
                flags.tau_samples = Some(n);
            }
            "--tol" => {
                let v = it.next().ok_or("--tol needs a value")?;
                flags.tol = v.parse().map_err(|_| format!("bad --tol {v:?}"))?;
            }
            "--svg" => flags.svg = true,
            "--drop-sinc" => flags.drop_sinc = true,
            other if other.starts_with("--") => return Err(format!("unknown flag {other}")),
            other => flags.positional.push(other.to_string()),
        }
    }
    Ok(flags)
}

fn load_scenario(path_str: &str, flags: &Flags) -> Result<ResolvedScenario, String> {
    let path = Path::new(path_str);
    let file = ScenarioFile::load(path).map_err(|e| e.to_string())?;
    let base = match &file.preset {
        Some(id) => {
            let mut expanded = expand(id).map_err(|e| e.to_string())?;
            if expanded.len() != 1 {
                return Err(format!(
                    "preset {id:?} expands to a suite; configs may only extend single presets"
                ));
            }
            match expanded.remove(0) {
                presets::Preset::Pattern(s) => s,
                presets::Preset::ThicknessSweep { .. } => {
                    return Err(format!("preset {id:?} is a sweep; configs extend pattern presets"))
                }
            }
        }
        None => ResolvedScenario::default(),
    };
    let mut scenario = file
        .resolve_over(base, path.parent())
        .map_err(|e| e.to_string())?;
    scenario.name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    if let Some(n) = flags.tau_samples {
        scenario.tau_samples = n;
    }
    if flags.drop_sinc {
        scenario.options.drop_sinc = true;
    }
    Ok(scenario)
}

fn real_main() -> Result<(), String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(verb) = args.first() else {
        eprint!("{USAGE}");
        return Err("missing subcommand".into());
    };
    let flags = parse_flags(&args[1..])?;

    match verb.as_str() {
        "run" => {
            let [path] = flags.positional.as_slice() else {
                return Err("run expects exactly one config path".into());
            };
            let scenario = load_scenario(path, &flags)?;
            let (artifacts, grid) =
                run_scenario(&scenario, &flags.out_dir, flags.svg).map_err(|e| e.to_string())?;
            println!(
                "{}: V(LD/2) = {:.6}, asymmetry = {:.4} fs -> {}",
                artifacts.name,
                grid.visibility_at_full_compensation,
                grid.metadata.asymmetry_fs,
                artifacts.csv_path.display()
            );
            Ok(())
        }
        "preset" => {
            let mut selected = Vec::new();
            for id in &flags.positional {
                let mut members = expand(id).map_err(|e| e.to_string())?;
                for m in &mut members {
                    if let Some(n) = flags.tau_samples {
                        scenario_of_mut(m).tau_samples = n;
                    }
                    if flags.drop_sinc {
                        scenario_of_mut(m).options.drop_sinc = true;
                    }
                }
                selected.append(&mut members);
            }
            let rollup = run_preset_suite(&selected, &flags.out_dir, flags.svg)
                .map_err(|e| e.to_string())?;
            for (name, summary) in &rollup {
                println!(
                    "{name}: V(LD/2) = {:.6}, min V = {:.6}",
                    summary.visibility_at_full_compensation, summary.min_visibility
                );
            }
            println!("{} preset(s) -> {}", rollup.len(), flags.out_dir.display());
            Ok(())
        }
        "list-presets" => {
            println!("suites:");
            for id in spdcsim_cli::suite_ids() {
                println!("  {id}");
            }
            println!("presets:");
            for preset in spdcsim_cli::catalog() {
                println!("  {:28} {}", preset.name(), preset.description());
            }
            Ok(())
        }
        "oracle-check" => {
            let [path] = flags.positional.as_slice() else {
                return Err("oracle-check expects exactly one config path".into());
            };
            let scenario = load_scenario(path, &flags)?;
            let samples = flags.tau_samples.unwrap_or(101);
            let report = oracle_check(&scenario, &flags.out_dir, samples, flags.tol * 1.0e-3)
                .map_err(|e| e.to_string())?;
            println!(
                "{}: max |closed - oracle| = {:.3e} over {} samples",
                scenario.name,
                report.max_abs_diff,
                report.rows.len()
            );
            if report.max_abs_diff > flags.tol {
                return Err(format!(
                    "oracle disagreement {:.3e} exceeds tolerance {:.3e}",
                    report.max_abs_diff, flags.tol
                ));
            }
            Ok(())
        }
        "--help" | "-h" | "help" => {
            print!("{USAGE}");
            Ok(())
        }
        other => {
            eprint!("{USAGE}");
            Err(format!("unknown subcommand {other:?}"))
        }
    }
}

fn scenario_of_mut(preset: &mut presets::Preset) -> &mut ResolvedScenario {
    match preset {
        presets::Preset::Pattern(s) => s,
        presets::Preset::ThicknessSweep { scenario, .. } => scenario,
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
