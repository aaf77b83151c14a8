//! Declarative scenario configuration.
//!
//! Scenarios are flat TOML documents; every key is listed below and frozen
//! by golden tests. A config may start from a named preset and override
//! individual sections.
//!
//! ```toml
//! preset = "fig4-b5mm"        # optional starting point
//!
//! [crystal]
//! material = "bbo"
//! thickness_mm = 1.5
//! pump_wavelength_nm = 351.1
//! cut_angle_deg = 49.2        # optional; defaults to the degenerate
//!                             # collinear type-II phase-matching angle
//!
//! [pump]
//! kind = "cw"                 # cw | pulsed | beam
//! fwhm_fs = 80.0              # pulsed only
//! diameter_mm = 5.0           # beam only
//!
//! [geometry]
//! d1_mm = 1000.0
//! d2_mm = 250.0
//! f_mm = 250.0
//!
//! [aperture_a]
//! shape = "circular"          # circular | slit | annular | mask
//! b_mm = 5.0
//! a_mm = 1.0                  # slit, annular
//! rotation_deg = 0.0          # slit
//! mask_file = "grid.txt"      # mask
//! shift_mm = [0.0, 0.0]
//!
//! [aperture_b]                # optional; defaults to aperture_a
//!
//! [tau]
//! samples = 512
//! min_ld = -0.25              # grid bounds in units of LD
//! max_ld = 1.25
//!
//! [output]
//! drop_sinc = false
//! ```

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use spdcsim::interference::{EngineOptions, PumpSpec};
use spdcsim::optics::{ApertureShape, ApertureSpec, MaskGrid, OpticalSystemSpec, SpectralFilter};
use spdcsim::{CrystalSpec, Material};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{field}: {why}")]
    Invalid { field: &'static str, why: String },
    #[error("unknown preset {0:?} (run `spdcsim list-presets`)")]
    UnknownPreset(String),
    #[error(transparent)]
    Core(#[from] spdcsim::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub preset: Option<String>,
    pub crystal: Option<CrystalSection>,
    pub pump: Option<PumpSection>,
    pub geometry: Option<GeometrySection>,
    pub aperture_a: Option<ApertureSection>,
    pub aperture_b: Option<ApertureSection>,
    pub tau: Option<TauSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalSection {
    pub material: Option<String>,
    pub thickness_mm: Option<f64>,
    pub pump_wavelength_nm: Option<f64>,
    pub cut_angle_deg: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpSection {
    pub kind: Option<String>,
    pub fwhm_fs: Option<f64>,
    pub diameter_mm: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub d1_mm: Option<f64>,
    pub d2_mm: Option<f64>,
    pub f_mm: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApertureSection {
    pub shape: Option<String>,
    pub a_mm: Option<f64>,
    pub b_mm: Option<f64>,
    pub rotation_deg: Option<f64>,
    pub mask_file: Option<String>,
    pub shift_mm: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSection {
    pub samples: Option<usize>,
    pub min_ld: Option<f64>,
    pub max_ld: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub drop_sinc: Option<bool>,
}

/// A fully concrete scenario, ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    /// Identifier used for output file names.
    pub name: String,
    pub crystal: CrystalSpec,
    pub system: OpticalSystemSpec,
    pub pump: PumpSpec,
    pub tau_samples: usize,
    /// Grid bounds in units of LD.
    pub tau_min_ld: f64,
    pub tau_max_ld: f64,
    pub options: EngineOptions,
}

impl Default for ResolvedScenario {
    fn default() -> Self {
        let aperture =
            ApertureSpec::centered(ApertureShape::Circular { b_mm: 5.0 }).expect("valid");
        ResolvedScenario {
            name: "scenario".into(),
            crystal: CrystalSpec::degenerate_type_ii(Material::Bbo, 1.5, 351.1)
                .expect("default crystal"),
            system: OpticalSystemSpec {
                d1_mm: 1000.0,
                d2_mm: 250.0,
                f_mm: 250.0,
                aperture_a: aperture.clone(),
                aperture_b: aperture,
                spectral_filter: SpectralFilter::None,
                prism: None,
            },
            pump: PumpSpec::CwPlane { wavelength_nm: 351.1 },
            tau_samples: 512,
            tau_min_ld: -0.25,
            tau_max_ld: 1.25,
            options: EngineOptions::default(),
        }
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> ConfigResult<ScenarioFile> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> ConfigResult<ScenarioFile> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        ScenarioFile::parse(&text)
    }

    /// Apply this file on top of `base` (sections present here override).
    /// `dir` anchors relative mask paths.
    pub fn resolve_over(
        &self,
        base: ResolvedScenario,
        dir: Option<&Path>,
    ) -> ConfigResult<ResolvedScenario> {
        let mut out = base;

        if let Some(c) = &self.crystal {
            let material = match c.material.as_deref() {
                None | Some("bbo") | Some("BBO") => Material::Bbo,
                Some(other) => {
                    return Err(ConfigError::Invalid {
                        field: "crystal.material",
                        why: format!("unknown material {other:?} (supported: bbo)"),
                    })
                }
            };
            let thickness = c.thickness_mm.unwrap_or(out.crystal.thickness_mm);
            if !(thickness > 0.0) {
                return Err(ConfigError::Invalid {
                    field: "crystal.thickness_mm",
                    why: format!("must be > 0, got {thickness}"),
                });
            }
            let pump_nm = c.pump_wavelength_nm.unwrap_or(out.crystal.pump_wavelength_nm);
            if !(pump_nm > 0.0) {
                return Err(ConfigError::Invalid {
                    field: "crystal.pump_wavelength_nm",
                    why: format!("must be > 0, got {pump_nm}"),
                });
            }
            out.crystal = match c.cut_angle_deg {
                Some(deg) => CrystalSpec::new(material, thickness, deg.to_radians(), pump_nm)?,
                None => CrystalSpec::degenerate_type_ii(material, thickness, pump_nm)?,
            };
        }

        if let Some(p) = &self.pump {
            let nm = out.crystal.pump_wavelength_nm;
            out.pump = match p.kind.as_deref().unwrap_or("cw") {
                "cw" => PumpSpec::CwPlane { wavelength_nm: nm },
                "pulsed" => {
                    let fwhm = p.fwhm_fs.ok_or(ConfigError::Invalid {
                        field: "pump.fwhm_fs",
                        why: "required for kind = \"pulsed\"".into(),
                    })?;
                    PumpSpec::PulsedPlane { center_wavelength_nm: nm, fwhm_fs: fwhm }
                        .validated()?
                }
                "beam" => {
                    let d = p.diameter_mm.ok_or(ConfigError::Invalid {
                        field: "pump.diameter_mm",
                        why: "required for kind = \"beam\"".into(),
                    })?;
                    PumpSpec::FiniteBeam { wavelength_nm: nm, diameter_mm: d }.validated()?
                }
                other => {
                    return Err(ConfigError::Invalid {
                        field: "pump.kind",
                        why: format!("unknown kind {other:?} (cw | pulsed | beam)"),
                    })
                }
            };
        }

        if let Some(g) = &self.geometry {
            if let Some(d1) = g.d1_mm {
                if !(d1 > 0.0) {
                    return Err(ConfigError::Invalid {
                        field: "geometry.d1_mm",
                        why: format!("must be > 0, got {d1}"),
                    });
                }
                out.system.d1_mm = d1;
            }
            if let Some(d2) = g.d2_mm {
                if !(d2 > 0.0) {
                    return Err(ConfigError::Invalid {
                        field: "geometry.d2_mm",
                        why: format!("must be > 0, got {d2}"),
                    });
                }
                out.system.d2_mm = d2;
            }
            if let Some(f) = g.f_mm {
                if !(f > 0.0) {
                    return Err(ConfigError::Invalid {
                        field: "geometry.f_mm",
                        why: format!("must be > 0, got {f}"),
                    });
                }
                out.system.f_mm = f;
            }
        }

        if let Some(a) = &self.aperture_a {
            out.system.aperture_a = resolve_aperture(a, "aperture_a", dir)?;
            // a lone aperture_a also stands for arm B unless overridden
            if self.aperture_b.is_none() {
                out.system.aperture_b = out.system.aperture_a.clone();
            }
        }
        if let Some(b) = &self.aperture_b {
            out.system.aperture_b = resolve_aperture(b, "aperture_b", dir)?;
        }

        if let Some(t) = &self.tau {
            if let Some(n) = t.samples {
                if n < 2 {
                    return Err(ConfigError::Invalid {
                        field: "tau.samples",
                        why: format!("need at least 2 samples, got {n}"),
                    });
                }
                out.tau_samples = n;
            }
            if let Some(lo) = t.min_ld {
                out.tau_min_ld = lo;
            }
            if let Some(hi) = t.max_ld {
                out.tau_max_ld = hi;
            }
            if out.tau_min_ld >= out.tau_max_ld {
                return Err(ConfigError::Invalid {
                    field: "tau.min_ld",
                    why: format!(
                        "grid bounds must satisfy min < max, got [{}, {}]",
                        out.tau_min_ld, out.tau_max_ld
                    ),
                });
            }
        }

        if let Some(o) = &self.output {
            if let Some(ds) = o.drop_sinc {
                out.options.drop_sinc = ds;
            }
        }

        Ok(out)
    }
}

fn resolve_aperture(
    section: &ApertureSection,
    field: &'static str,
    dir: Option<&Path>,
) -> ConfigResult<ApertureSpec> {
    let shift = section.shift_mm.unwrap_or([0.0, 0.0]);
    let shape = match section.shape.as_deref() {
        Some("circular") | None => ApertureShape::Circular {
            b_mm: section.b_mm.ok_or(ConfigError::Invalid {
                field,
                why: "circular aperture needs b_mm".into(),
            })?,
        },
        Some("slit") => ApertureShape::Slit {
            a_mm: section.a_mm.ok_or(ConfigError::Invalid {
                field,
                why: "slit aperture needs a_mm (walk-off axis extent)".into(),
            })?,
            b_mm: section.b_mm.ok_or(ConfigError::Invalid {
                field,
                why: "slit aperture needs b_mm".into(),
            })?,
            rotation_rad: section.rotation_deg.unwrap_or(0.0).to_radians(),
        },
        Some("annular") => ApertureShape::Annular {
            a_mm: section.a_mm.ok_or(ConfigError::Invalid {
                field,
                why: "annular aperture needs a_mm (inner)".into(),
            })?,
            b_mm: section.b_mm.ok_or(ConfigError::Invalid {
                field,
                why: "annular aperture needs b_mm (outer)".into(),
            })?,
        },
        Some("mask") => {
            let file = section.mask_file.as_deref().ok_or(ConfigError::Invalid {
                field,
                why: "mask aperture needs mask_file".into(),
            })?;
            let path = match dir {
                Some(d) => d.join(file),
                None => Path::new(file).to_path_buf(),
            };
            ApertureShape::Mask { grid: MaskGrid::load(&path)? }
        }
        Some(other) => {
            return Err(ConfigError::Invalid {
                field,
                why: format!("unknown shape {other:?} (circular | slit | annular | mask)"),
            })
        }
    };
    Ok(ApertureSpec::new(shape, shift)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_resolves_with_defaults() {
        let file = ScenarioFile::parse("[crystal]\nthickness_mm = 1.5\n").unwrap();
        let s = file.resolve_over(ResolvedScenario::default(), None).unwrap();
        assert_eq!(s.tau_samples, 512);
        assert_eq!(s.crystal.thickness_mm, 1.5);
        assert!(matches!(s.pump, PumpSpec::CwPlane { .. }));
    }

    #[test]
    fn negative_d1_names_the_field() {
        let file = ScenarioFile::parse("[geometry]\nd1_mm = -5.0\n").unwrap();
        let err = file.resolve_over(ResolvedScenario::default(), None).unwrap_err();
        assert!(err.to_string().contains("geometry.d1_mm"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected_with_location() {
        let err = ScenarioFile::parse("[crystal]\nthicknes_mm = 1.5\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("thicknes_mm"), "{msg}");
    }

    #[test]
    fn pulsed_pump_requires_fwhm() {
        let file = ScenarioFile::parse("[pump]\nkind = \"pulsed\"\n").unwrap();
        let err = file.resolve_over(ResolvedScenario::default(), None).unwrap_err();
        assert!(err.to_string().contains("pump.fwhm_fs"), "{err}");
    }

    #[test]
    fn aperture_a_stands_for_both_arms() {
        let file = ScenarioFile::parse(
            "[aperture_a]\nshape = \"slit\"\na_mm = 7.0\nb_mm = 1.0\n",
        )
        .unwrap();
        let s = file.resolve_over(ResolvedScenario::default(), None).unwrap();
        assert_eq!(s.system.aperture_a, s.system.aperture_b);
    }
}
