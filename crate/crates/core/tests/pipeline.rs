use std::f64::consts::TAU;

use proptest::prelude::*;
use stokesband::elementary::{KernelHeat, SteppingHeat};
use stokesband::halfspace::{divergence_defect, solve_halfspace};
use stokesband::harness::experiments::mre_sample;
use stokesband::harness::{generate_forcing, sample_rng, EnsembleSpec};
use stokesband::norms::{NormEvaluator, NormKind};
use stokesband::spectral::*;
use stokesband::strip::{build_cutoff, consistency_check, solve_strip, CutoffProfile};
use stokesband::{Complex64, Error};

fn strip_layout(dim: usize, nz: usize, nt: usize) -> FieldLayout {
    let band = BandSpec::new(TAU, dim, 0.5).unwrap();
    FieldLayout::new(
        WavenumberLattice::build(band, 0).unwrap(),
        VerticalGrid::strip(nz).unwrap(),
        TimeGrid::new(1.0, nt).unwrap(),
    )
}

fn forcing(layout: &FieldLayout, seed: u64) -> SpectralField {
    let spec = EnsembleSpec {
        n_modes: 3,
        ..Default::default()
    };
    generate_forcing(layout, &spec, &mut sample_rng(seed, 0, 0))
}

fn rel_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).unwrap().coefficient_l1() / b.coefficient_l1()
}

#[test]
fn strip_solution_is_no_slip_and_divergence_free() {
    for dim in [2, 3] {
        let l = strip_layout(dim, 32, 16);
        let f = forcing(&l, 4);
        let sol = solve_strip(&f).unwrap();
        assert_eq!(sol.defects.wall_velocity, 0.0);
        assert!(sol.defects.divergence < 1e-10, "{:?}", sol.defects);
        assert!(sol.state.velocity().conjugate_asymmetry() < 1e-12);
    }
}

#[test]
fn zero_forcing_gives_zero_state() {
    let l = strip_layout(2, 16, 8);
    let f = SpectralField::zeros(&l, Component::Full);
    let sol = solve_strip(&f).unwrap();
    assert!(sol.state.velocity().is_zero() && sol.state.pressure.is_zero());
    let eval = NormEvaluator::new(&l, NormKind::Strip).unwrap();
    let suite = mre_sample(&f, &eval).unwrap();
    assert_eq!(suite.ratio, None);
    assert!(!suite.anomaly);
}

#[test]
fn strip_rejects_a_half_line_grid() {
    let band = BandSpec::new(TAU, 2, 0.5).unwrap();
    let l = FieldLayout::new(
        WavenumberLattice::build(band, 0).unwrap(),
        VerticalGrid::half_line(2.0, 16).unwrap(),
        TimeGrid::new(1.0, 4).unwrap(),
    );
    assert!(solve_strip(&SpectralField::zeros(&l, Component::Full)).is_err());
}

#[test]
fn maximal_regularity_ratio_is_scale_invariant() {
    let l = strip_layout(2, 32, 16);
    let eval = NormEvaluator::new(&l, NormKind::Strip).unwrap();
    let f = forcing(&l, 7);
    let a = mre_sample(&f, &eval).unwrap().ratio.unwrap();
    let b = mre_sample(&f.scaled(Complex64::new(3.0, 0.0)), &eval)
        .unwrap()
        .ratio
        .unwrap();
    assert!((a - b).abs() <= 1e-10 * a, "{a} {b}");
}

#[test]
fn maximal_regularity_ratio_is_translation_invariant() {
    let l = strip_layout(2, 32, 16);
    let eval = NormEvaluator::new(&l, NormKind::Strip).unwrap();
    let points = (2 * l.lattice.max_index() + 2) as f64;
    let f = forcing(&l, 8);
    // Shift by three sample spacings: the sample set maps onto itself.
    let shift = 3.0 * TAU / points;
    let mut g = f.clone();
    for m in 0..l.lattice.len() {
        let phase = Complex64::from_polar(1.0, -l.lattice.mode(m).k[0] * shift);
        g.values_mut()
            .slice_mut(ndarray::s![.., m, .., ..])
            .mapv_inplace(|v| v * phase);
    }
    let a = mre_sample(&f, &eval).unwrap().ratio.unwrap();
    let b = mre_sample(&g, &eval).unwrap().ratio.unwrap();
    assert!((a - b).abs() <= 1e-10 * a, "{a} {b}");
}

#[test]
fn halfspace_divergence_and_heat_paths() {
    let band = BandSpec::new(TAU, 2, 0.5).unwrap();
    let mut prev = f64::INFINITY;
    for (nz, nt) in [(64, 32), (128, 64)] {
        let l = FieldLayout::new(
            WavenumberLattice::build(band, 0).unwrap(),
            VerticalGrid::half_line(2.0, nz).unwrap(),
            TimeGrid::new(1.0, nt).unwrap(),
        );
        let f = forcing(&l, 3);
        let rho = SpectralField::zeros(&l, Component::Scalar);
        let (a, trace) = solve_halfspace(&f, &rho, &SteppingHeat).unwrap();
        assert!(trace.divergence_defect < 1e-10);
        assert!(divergence_defect(&a, &rho).unwrap() < 1e-10);
        // The two heat paths converge to the same composition.
        let (b, _) = solve_halfspace(&f, &rho, &KernelHeat).unwrap();
        let d = rel_diff(&b.velocity(), &a.velocity());
        assert!(d < prev, "{d} after {prev}");
        prev = d;
    }
}

#[test]
fn halfspace_rejects_mismatched_layouts() {
    let a = strip_layout(2, 16, 8);
    let band = BandSpec::new(TAU, 2, 0.5).unwrap();
    let b = FieldLayout::new(
        WavenumberLattice::build(band, 0).unwrap(),
        VerticalGrid::half_line(2.0, 16).unwrap(),
        TimeGrid::new(1.0, 8).unwrap(),
    );
    let f = SpectralField::zeros(&b, Component::Full);
    let rho = SpectralField::zeros(&a, Component::Scalar);
    assert!(solve_halfspace(&f, &rho, &SteppingHeat).is_err());
}

#[test]
fn cutoff_profile_is_a_partition_at_the_walls() {
    let g = VerticalGrid::strip(64).unwrap();
    let c = build_cutoff(1.0 / 6.0, &g).unwrap();
    assert_eq!(c.len(), 65);
    let (e0, _, _) = CutoffProfile::evaluate(1.0 / 6.0, 0.0);
    let (e1, d1, d2) = CutoffProfile::evaluate(1.0 / 6.0, 1.0);
    assert_eq!(e0, 1.0);
    assert_eq!((e1, d1, d2), (0.0, 0.0, 0.0));
    assert!(build_cutoff(0.4, &g).is_err());
}

#[test]
fn localization_consistency_improves_with_resolution() {
    let mut prev = f64::INFINITY;
    for (nz, nt) in [(64, 32), (128, 64)] {
        let l = strip_layout(2, nz, nt);
        let f = forcing(&l, 11);
        let rep = consistency_check(&f, 1.0 / 6.0, 5.0, &SteppingHeat).unwrap();
        let worst = rep.upper.max(rep.lower);
        assert!(worst < 5e-2 && worst < prev, "{worst} after {prev}");
        prev = worst;
    }
}

#[test]
fn leray_projector_rejects_a_populated_zero_mode() {
    let band = BandSpec::new(TAU, 3, 0.5).unwrap();
    let l = FieldLayout::new(
        WavenumberLattice::build(band, 4).unwrap(),
        VerticalGrid::strip(4).unwrap(),
        TimeGrid::new(1.0, 2).unwrap(),
    );
    let mut f = SpectralField::zeros(&l, Component::Horizontal);
    let z = (0..l.lattice.len())
        .find(|&m| l.lattice.mode(m).is_zero())
        .unwrap();
    f.values_mut()[[0, z, 1, 1]] = Complex64::new(1.0, 0.0);
    assert!(matches!(
        apply_multiplier(&f, Multiplier::LerayProjector),
        Err(Error::SingularMultiplier)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn strip_solver_is_linear(s1 in 0u64..500, s2 in 0u64..500, alpha in -3.0f64..3.0) {
        let l = strip_layout(2, 16, 8);
        let (f, g) = (forcing(&l, s1), forcing(&l, s2));
        let combo = f.axpy(Complex64::new(alpha, 0.0), &g).unwrap();
        let u = |x: &SpectralField| solve_strip(x).unwrap().state.velocity();
        let want = u(&f).axpy(Complex64::new(alpha, 0.0), &u(&g)).unwrap();
        prop_assert!(rel_diff(&u(&combo), &want) < 1e-10);
    }

    #[test]
    fn halfspace_solver_is_linear(s1 in 0u64..500, s2 in 0u64..500, alpha in -3.0f64..3.0) {
        let band = BandSpec::new(TAU, 2, 0.5).unwrap();
        let l = FieldLayout::new(WavenumberLattice::build(band, 0).unwrap(), VerticalGrid::half_line(2.0, 32).unwrap(), TimeGrid::new(1.0, 8).unwrap());
        let (f, g) = (forcing(&l, s1), forcing(&l, s2));
        let rho = SpectralField::zeros(&l, Component::Scalar);
        let u = |x: &SpectralField| solve_halfspace(x, &rho, &SteppingHeat).unwrap().0.velocity();
        let combo = f.axpy(Complex64::new(alpha, 0.0), &g).unwrap();
        let want = u(&f).axpy(Complex64::new(alpha, 0.0), &u(&g)).unwrap();
        prop_assert!(rel_diff(&u(&combo), &want) < 1e-10);
    }

    #[test]
    fn leray_projection_is_idempotent_and_divergence_free(seed in 0u64..1000, dim in 2usize..=3) {
        let band = BandSpec::new(TAU, dim, 0.5).unwrap();
        let l = FieldLayout::new(WavenumberLattice::build(band, 0).unwrap(), VerticalGrid::strip(4).unwrap(), TimeGrid::new(1.0, 2).unwrap());
        let full = forcing(&l, seed);
        let hd = l.lattice.band().horizontal_dims();
        let parts: Vec<SpectralField> = (0..hd).map(|c| full.component_field(c)).collect();
        let refs: Vec<&SpectralField> = parts.iter().collect();
        let h = SpectralField::stack(Component::Horizontal, &refs).unwrap();
        let p = apply_multiplier(&h, Multiplier::LerayProjector).unwrap();
        let pp = apply_multiplier(&p, Multiplier::LerayProjector).unwrap();
        prop_assert!(pp.sub(&p).unwrap().coefficient_l1() <= 1e-12 * h.coefficient_l1());
        let div = apply_multiplier(&p, Multiplier::Divergence).unwrap();
        prop_assert!(div.coefficient_l1() <= 1e-12 * h.coefficient_l1());
    }
}
