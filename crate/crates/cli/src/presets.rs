//! Preset catalog mirroring the figure scenarios of the underlying
//! experiments: circular-aperture series at two geometries, slit
//! orientation studies, pulsed runs, pump-diameter runs with planewave
//! verdicts, shifted-aperture runs, and the visibility-vs-thickness sweeps.

use spdcsim::interference::PumpSpec;
use spdcsim::optics::{ApertureShape, ApertureSpec, OpticalSystemSpec, SpectralFilter};
use spdcsim::{CrystalSpec, Material};

use crate::config::{ConfigError, ConfigResult, ResolvedScenario};

/// A runnable preset: either a pattern scenario or a thickness sweep.
#[derive(Debug, Clone)]
pub enum Preset {
    Pattern(ResolvedScenario),
    /// Visibility at full compensation versus crystal thickness.
    ThicknessSweep {
        scenario: ResolvedScenario,
        l_grid_mm: Vec<f64>,
    },
}

impl Preset {
    pub fn name(&self) -> &str {
        match self {
            Preset::Pattern(s) => &s.name,
            Preset::ThicknessSweep { scenario, .. } => &scenario.name,
        }
    }

    pub fn description(&self) -> String {
        match self {
            Preset::Pattern(s) => {
                let pump = match &s.pump {
                    PumpSpec::CwPlane { wavelength_nm } => format!("cw {wavelength_nm} nm"),
                    PumpSpec::PulsedPlane { center_wavelength_nm, fwhm_fs } => {
                        format!("pulsed {center_wavelength_nm} nm, {fwhm_fs} fs")
                    }
                    PumpSpec::FiniteBeam { wavelength_nm, diameter_mm } => {
                        format!("{diameter_mm}-mm beam, {wavelength_nm} nm")
                    }
                };
                format!(
                    "pattern: L = {} mm, d1 = {} mm, {pump}",
                    s.crystal.thickness_mm, s.system.d1_mm
                )
            }
            Preset::ThicknessSweep { scenario, l_grid_mm } => format!(
                "visibility vs thickness over [{:.2}, {:.2}] mm, d1 = {} mm",
                l_grid_mm.first().unwrap(),
                l_grid_mm.last().unwrap(),
                scenario.system.d1_mm
            ),
        }
    }
}

fn cw(nm: f64) -> PumpSpec {
    PumpSpec::CwPlane { wavelength_nm: nm }
}

fn pulsed(nm: f64) -> PumpSpec {
    PumpSpec::PulsedPlane { center_wavelength_nm: nm, fwhm_fs: 80.0 }
}

fn circular(b: f64) -> ApertureSpec {
    ApertureSpec::centered(ApertureShape::Circular { b_mm: b }).expect("valid aperture")
}

fn slit(a: f64, b: f64, rotation_rad: f64, shift: [f64; 2]) -> ApertureSpec {
    ApertureSpec::new(ApertureShape::Slit { a_mm: a, b_mm: b, rotation_rad }, shift)
        .expect("valid aperture")
}

fn scenario(
    name: &str,
    pump_nm: f64,
    l_mm: f64,
    d1_mm: f64,
    pump: PumpSpec,
    ap_a: ApertureSpec,
    ap_b: ApertureSpec,
) -> ResolvedScenario {
    ResolvedScenario {
        name: name.to_string(),
        crystal: CrystalSpec::degenerate_type_ii(Material::Bbo, l_mm, pump_nm)
            .expect("preset crystal"),
        system: OpticalSystemSpec {
            d1_mm,
            d2_mm: 250.0,
            f_mm: 250.0,
            aperture_a: ap_a,
            aperture_b: ap_b,
            spectral_filter: SpectralFilter::None,
            prism: None,
        },
        pump,
        ..ResolvedScenario::default()
    }
}

fn sweep_grid() -> Vec<f64> {
    (1..=60).map(|i| 0.05 * i as f64).collect()
}

/// All suite identifiers, in catalog order.
pub fn suite_ids() -> Vec<&'static str> {
    vec![
        "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig11", "fig12", "fig13", "fig14",
        "fig15", "fig16",
    ]
}

/// Expand a suite id or single preset id into concrete presets.
pub fn expand(id: &str) -> ConfigResult<Vec<Preset>> {
    let all = catalog();
    if let Some(members) = suite(id) {
        return Ok(all.into_iter().filter(|p| members.contains(&p.name())).collect());
    }
    match all.into_iter().find(|p| p.name() == id) {
        Some(p) => Ok(vec![p]),
        None => Err(ConfigError::UnknownPreset(id.to_string())),
    }
}

fn suite(id: &str) -> Option<Vec<&'static str>> {
    Some(match id {
        "fig4" => vec!["fig4-b2mm", "fig4-b3mm", "fig4-b5mm"],
        "fig5" => vec!["fig5-b2mm", "fig5-b3mm", "fig5-b5mm", "fig5-planewave"],
        "fig6" => vec!["fig6-L0.5mm", "fig6-L1.5mm", "fig6-L3mm"],
        "fig7" => vec!["fig7-b2mm", "fig7-b3mm", "fig7-b5mm", "fig7-planewave"],
        "fig8" => vec!["fig8-horizontal-slit", "fig8-vertical-slit"],
        "fig9" => vec!["fig9-rotated-minus45", "fig9-rotated-plus45"],
        "fig11" => vec!["fig11-b2.5mm", "fig11-b5mm", "fig11-b7mm"],
        "fig12" => vec!["fig12-b2.5mm", "fig12-b5mm", "fig12-b7mm"],
        "fig13" => vec!["fig13-pump5mm", "fig13-pump1.5mm", "fig13-pump0.2mm"],
        "fig14" => vec!["fig14-pump5mm", "fig14-pump1.5mm", "fig14-pump0.2mm"],
        "fig15" => vec!["fig15-horizontal-slits", "fig15-vertical-slits-shifted"],
        "fig16" => vec!["fig16-shift0mm", "fig16-shift0.8mm", "fig16-shift1.6mm"],
        _ => return None,
    })
}

/// Every concrete preset.
pub fn catalog() -> Vec<Preset> {
    let mut out = Vec::new();

    // circular apertures a meter from the crystal, cw 351.1 nm
    for b in [2.0, 3.0, 5.0] {
        out.push(Preset::Pattern(scenario(
            &format!("fig4-b{b:.0}mm"),
            351.1,
            1.5,
            1000.0,
            cw(351.1),
            circular(b),
            circular(b),
        )));
    }

    // visibility vs thickness, cw
    for (name, b) in [
        ("fig5-b2mm", 2.0),
        ("fig5-b3mm", 3.0),
        ("fig5-b5mm", 5.0),
        ("fig5-planewave", 0.01),
    ] {
        out.push(Preset::ThicknessSweep {
            scenario: scenario(name, 351.1, 1.5, 1000.0, cw(351.1), circular(b), circular(b)),
            l_grid_mm: sweep_grid(),
        });
    }

    // pulsed pump, three thicknesses, 5-mm aperture
    for (name, l) in [("fig6-L0.5mm", 0.5), ("fig6-L1.5mm", 1.5), ("fig6-L3mm", 3.0)] {
        out.push(Preset::Pattern(scenario(
            name,
            415.0,
            l,
            1000.0,
            pulsed(415.0),
            circular(5.0),
            circular(5.0),
        )));
    }

    // visibility vs thickness, pulsed
    for (name, b) in [
        ("fig7-b2mm", 2.0),
        ("fig7-b3mm", 3.0),
        ("fig7-b5mm", 5.0),
        ("fig7-planewave", 0.01),
    ] {
        out.push(Preset::ThicknessSweep {
            scenario: scenario(name, 415.0, 1.5, 1000.0, pulsed(415.0), circular(b), circular(b)),
            l_grid_mm: sweep_grid(),
        });
    }

    // slit orientations (1 x 7 mm), cw
    out.push(Preset::Pattern(scenario(
        "fig8-horizontal-slit",
        351.1,
        1.5,
        1000.0,
        cw(351.1),
        slit(1.0, 7.0, 0.0, [0.0, 0.0]),
        slit(1.0, 7.0, 0.0, [0.0, 0.0]),
    )));
    out.push(Preset::Pattern(scenario(
        "fig8-vertical-slit",
        351.1,
        1.5,
        1000.0,
        cw(351.1),
        slit(7.0, 1.0, 0.0, [0.0, 0.0]),
        slit(7.0, 1.0, 0.0, [0.0, 0.0]),
    )));

    // rotated-axis experiment: modeled by the angle between the slit and
    // the walk-off axis (the -45 orientation is perpendicular to the
    // rotated symmetry axis, the +45 orientation is aligned with it)
    out.push(Preset::Pattern(scenario(
        "fig9-rotated-minus45",
        351.1,
        1.5,
        1000.0,
        cw(351.1),
        slit(7.0, 1.0, std::f64::consts::FRAC_PI_2, [0.0, 0.0]),
        slit(7.0, 1.0, std::f64::consts::FRAC_PI_2, [0.0, 0.0]),
    )));
    out.push(Preset::Pattern(scenario(
        "fig9-rotated-plus45",
        351.1,
        1.5,
        1000.0,
        cw(351.1),
        slit(7.0, 1.0, 0.0, [0.0, 0.0]),
        slit(7.0, 1.0, 0.0, [0.0, 0.0]),
    )));

    // increased acceptance angle: apertures 750 mm from the crystal
    for b in [2.5, 5.0, 7.0] {
        out.push(Preset::Pattern(scenario(
            &format!("fig11-b{b}mm"),
            351.1,
            1.5,
            750.0,
            cw(351.1),
            circular(b),
            circular(b),
        )));
        out.push(Preset::Pattern(scenario(
            &format!("fig12-b{b}mm"),
            415.0,
            1.5,
            750.0,
            pulsed(415.0),
            circular(b),
            circular(b),
        )));
    }

    // pump-diameter studies: finite beams, planewave verdict in metadata
    for d in [5.0, 1.5, 0.2] {
        let name13 = format!("fig13-pump{d}mm");
        let name14 = format!("fig14-pump{d}mm");
        out.push(Preset::Pattern(scenario(
            &name13,
            351.1,
            1.5,
            750.0,
            PumpSpec::FiniteBeam { wavelength_nm: 351.1, diameter_mm: d },
            circular(2.5),
            circular(2.5),
        )));
        out.push(Preset::Pattern(scenario(
            &name14,
            351.1,
            1.5,
            750.0,
            PumpSpec::FiniteBeam { wavelength_nm: 351.1, diameter_mm: d },
            circular(5.0),
            circular(5.0),
        )));
    }

    // shifted identical slits in separate arms
    out.push(Preset::Pattern(scenario(
        "fig15-horizontal-slits",
        351.1,
        1.5,
        750.0,
        cw(351.1),
        slit(1.0, 7.0, 0.0, [0.0, 0.0]),
        slit(1.0, 7.0, 0.0, [0.0, 0.0]),
    )));
    out.push(Preset::Pattern(scenario(
        "fig15-vertical-slits-shifted",
        351.1,
        1.5,
        750.0,
        cw(351.1),
        slit(7.0, 1.0, 0.0, [0.0, 1.6]),
        slit(7.0, 1.0, 0.0, [0.0, 0.0]),
    )));

    // shifted annulus against a 7-mm circle
    for shift in [0.0, 0.8, 1.6] {
        out.push(Preset::Pattern(scenario(
            &format!("fig16-shift{shift}mm"),
            351.1,
            1.5,
            750.0,
            cw(351.1),
            ApertureSpec::new(ApertureShape::Annular { a_mm: 2.0, b_mm: 4.0 }, [0.0, shift])
                .expect("valid aperture"),
            circular(7.0),
        )));
    }

    out
}
