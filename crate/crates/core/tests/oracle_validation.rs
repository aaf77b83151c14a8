//! Cross-validation of the closed-form engine against the quadrature oracle
//! and the direct coincidence integral.

use spdcsim::crystal::{dispersion_params, CrystalSpec, DispersionParams, Material};
use spdcsim::interference::{visibility_cw, EngineOptions};
use spdcsim::optics::{ApertureShape, ApertureSpec, OpticalSystemSpec, SpectralFilter};
use spdcsim::oracle::{oracle_report, DirectEvaluator, ToySystem};

fn system(
    shape_a: ApertureShape,
    shift_a: [f64; 2],
    shape_b: ApertureShape,
    shift_b: [f64; 2],
    d1: f64,
) -> OpticalSystemSpec {
    OpticalSystemSpec {
        d1_mm: d1,
        d2_mm: 250.0,
        f_mm: 250.0,
        aperture_a: ApertureSpec::new(shape_a, shift_a).unwrap(),
        aperture_b: ApertureSpec::new(shape_b, shift_b).unwrap(),
        spectral_filter: SpectralFilter::None,
        prism: None,
    }
}

fn params(l: f64) -> (CrystalSpec, DispersionParams) {
    let c = CrystalSpec::degenerate_type_ii(Material::Bbo, l, 351.0).unwrap();
    let p = dispersion_params(&c).unwrap();
    (c, p)
}

#[test]
fn oracle_equivalence_shifted_and_mixed_apertures() {
    let (_, p) = params(1.5);
    let cases = vec![
        // slit pair with a 1.6-mm relative vertical shift
        system(
            ApertureShape::Slit { a_mm: 7.0, b_mm: 1.0, rotation_rad: 0.0 },
            [0.0, 1.6],
            ApertureShape::Slit { a_mm: 7.0, b_mm: 1.0, rotation_rad: 0.0 },
            [0.0, 0.0],
            750.0,
        ),
        // annulus against a wide circle
        system(
            ApertureShape::Annular { a_mm: 2.0, b_mm: 4.0 },
            [0.0, 0.8],
            ApertureShape::Circular { b_mm: 7.0 },
            [0.0, 0.0],
            750.0,
        ),
    ];
    let ld = p.support_fs(1.5);
    let grid: Vec<f64> = (0..41).map(|i| -0.1 * ld + 1.2 * ld * i as f64 / 40.0).collect();
    for sys in cases {
        let rep = oracle_report(&sys, &p, 1.5, &grid, 1e-10).unwrap();
        assert!(rep.max_abs_diff < 1e-6, "max diff {}", rep.max_abs_diff);
    }
}

#[test]
fn oracle_equivalence_rotated_slit() {
    let (_, p) = params(1.5);
    let sys = system(
        ApertureShape::Slit { a_mm: 7.0, b_mm: 1.0, rotation_rad: -std::f64::consts::FRAC_PI_4 },
        [0.0, 0.0],
        ApertureShape::Slit { a_mm: 7.0, b_mm: 1.0, rotation_rad: -std::f64::consts::FRAC_PI_4 },
        [0.0, 0.0],
        750.0,
    );
    let ld = p.support_fs(1.5);
    let grid: Vec<f64> = (0..31).map(|i| ld * i as f64 / 30.0).collect();
    let rep = oracle_report(&sys, &p, 1.5, &grid, 1e-10).unwrap();
    assert!(rep.max_abs_diff < 1e-6, "max diff {}", rep.max_abs_diff);
}

#[test]
fn direct_integral_matches_closed_form_five_mm_equivalent() {
    // scaled toy whose dimensionless dip argument matches the 5-mm circular
    // aperture a meter from the crystal
    let (_, p351) = params(1.5);
    let toy = ToySystem::five_mm_equivalent(&p351);
    let (_, p) = params(toy.l_mm);
    let ev = DirectEvaluator::new(&toy, &p).unwrap();

    let sys = system(
        ApertureShape::Slit {
            a_mm: toy.aperture_half_width_mm,
            b_mm: toy.aperture_half_width_mm,
            rotation_rad: 0.0,
        },
        [0.0, 0.0],
        ApertureShape::Slit {
            a_mm: toy.aperture_half_width_mm,
            b_mm: toy.aperture_half_width_mm,
            rotation_rad: 0.0,
        },
        [0.0, 0.0],
        toy.d1_mm,
    );
    let opts = EngineOptions::default();
    let ld = p.support_fs(toy.l_mm);
    for frac in [0.25, 0.5, 0.75] {
        let tau = frac * ld;
        let direct = ev.visibility(tau);
        let closed = visibility_cw(tau, &sys, &p, toy.l_mm, &opts);
        assert!(
            (direct - closed).abs() < 5.0e-2,
            "tau = {frac} LD: direct {direct} vs closed {closed}"
        );
    }
    // asymmetry direction agrees with the closed form
    let d_asym = ev.visibility(0.25 * ld) - ev.visibility(0.75 * ld);
    let c_asym = visibility_cw(0.25 * ld, &sys, &p, toy.l_mm, &opts)
        - visibility_cw(0.75 * ld, &sys, &p, toy.l_mm, &opts);
    assert!(d_asym.signum() == c_asym.signum() && c_asym > 0.0);
}

#[test]
fn direct_integral_thin_crystal_limit() {
    // a thin crystal accumulates no distinguishability: V(LD/2) near 1
    let c = CrystalSpec::degenerate_type_ii(Material::Bbo, 0.15, 351.0).unwrap();
    let p = dispersion_params(&c).unwrap();
    let toy = ToySystem::pinhole_like(0.15, &p);
    let ev = DirectEvaluator::new(&toy, &p).unwrap();
    let v = ev.visibility(p.support_fs(0.15) / 2.0);
    assert!((v - 1.0).abs() < 5.0e-2, "V = {v}");
}
