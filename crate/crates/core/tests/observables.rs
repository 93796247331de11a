use layered_qed::greens::GreenFunction;
use layered_qed::optics::{bose_einstein, EvaluationContext, Geometry};
use layered_qed::quantities::*;
use layered_qed::scenes;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn build(g: &Geometry, e: f64) -> GreenFunction {
    GreenFunction::build(g, &EvaluationContext::from_photon_energy(e).unwrap()).unwrap()
}

#[test]
fn field_fluctuation_ldos_and_occupation_are_consistent() {
    // <E²> = (ħω/ε0) ρ (n + 1/2), which is 4·ldos·(n + 1/2) in these units
    for g in [scenes::interface_scene(), scenes::gap_scene()] {
        for e in [0.09, 0.118, 0.14] {
            let gf = build(&g, e);
            for x in scenes::linspace(-25e-6, 30e-6, 221) {
                let p = spectral_point(&gf, x).unwrap();
                let expected = 4.0 * p.ldos * (p.n_eff + 0.5);
                assert!((p.e2 / expected - 1.0).abs() < 1e-9, "{x:e}: {} vs {expected}", p.e2);
            }
        }
    }
}

#[test]
fn vacuum_at_zero_temperature_holds_only_zero_point_fluctuations() {
    let gf = build(&Geometry::homogeneous(c(1.0, 0.0), 0.0).unwrap(), 0.1);
    let p = spectral_point(&gf, 3e-6).unwrap();
    assert!((p.ldos - 0.5).abs() < 1e-12);
    assert!(p.n_eff.abs() < 1e-15);
    assert!((p.e2 - 1.0).abs() < 1e-12);
}

#[test]
fn poynting_theorem_residual_is_second_order_in_the_step() {
    let g = scenes::gap_scene();
    let gf = build(&g, 0.118);
    let lambda = gf.context().vacuum_wavelength();
    for &x in &[-6e-6, -1.5e-6, 12e-6, 16e-6] {
        let coarse = poynting_theorem_residual(&gf, x, lambda / 40.0).unwrap();
        let fine = poynting_theorem_residual(&gf, x, lambda / 80.0).unwrap();
        let order = (coarse / fine).abs().log2();
        assert!((order - 2.0).abs() < 0.1, "{x:e}: observed order {order}");
    }
}

#[test]
fn poynting_theorem_holds_in_lossy_layers() {
    for (g, e) in [(scenes::interface_scene(), 0.10), (scenes::gap_scene(), 0.14)] {
        let gf = build(&g, e);
        let h = gf.context().vacuum_wavelength() / 2000.0;
        for x in scenes::linspace(-25e-6, 30e-6, 111) {
            let layer = g.layer_at(x);
            let near = g.interfaces().iter().any(|&p| (x - p).abs() < 2.0 * h);
            if layer.is_lossless() || near {
                continue;
            }
            let q = net_emission(&gf, x).unwrap();
            let r = poynting_theorem_residual(&gf, x, h).unwrap();
            assert!(r.abs() < 1e-3 * q.abs(), "{x:e}: residual {r} vs Q {q}");
        }
    }
}

#[test]
fn commutator_kernels_are_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for g in [scenes::interface_scene(), scenes::gap_scene()] {
        let gf = build(&g, 0.118);
        for _ in 0..30 {
            let x = rng.gen_range(-15e-6..25e-6);
            let xp = rng.gen_range(-15e-6..25e-6);
            for d in [DomainPair::RR, DomainPair::LL] {
                let a = commutator_kernel(&gf, x, xp, d).unwrap().value;
                let b = commutator_kernel(&gf, xp, x, d).unwrap().value;
                assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1e-300), "{d:?}");
            }
        }
    }
}

#[test]
fn homogeneous_medium_splits_the_commutator_evenly() {
    let gf = build(&Geometry::homogeneous(c(1.7, 0.2), 0.0).unwrap(), 0.1);
    for &x in &[-3e-6, 0.0, 8e-6] {
        let rr = commutator_kernel(&gf, x, x, DomainPair::RR).unwrap().value;
        let ll = commutator_kernel(&gf, x, x, DomainPair::LL).unwrap().value;
        assert!((rr - 0.5).norm() < 1e-12 && (ll - 0.5).norm() < 1e-12);
        // off-diagonal: translation invariant, and mirror symmetric between the domains
        let a = commutator_kernel(&gf, x + 2e-6, x, DomainPair::RR).unwrap().value;
        let b = commutator_kernel(&gf, x, x + 2e-6, DomainPair::LL).unwrap().value;
        assert!((a - b).norm() < 1e-12);
        let shifted = commutator_kernel(&gf, x + 7e-6, x + 5e-6, DomainPair::RR).unwrap().value;
        assert!((a - shifted).norm() < 1e-12);
    }
}

#[test]
fn ldos_does_not_depend_on_temperature() {
    let cold = scenes::gap_scene().with_uniform_temperature(0.0);
    let hot = scenes::gap_scene().with_uniform_temperature(400.0);
    let (a, b) = (build(&cold, 0.12), build(&hot, 0.12));
    for x in scenes::linspace(-20e-6, 30e-6, 501) {
        assert_eq!(electric_ldos(&a, x).to_bits(), electric_ldos(&b, x).to_bits());
    }
}

#[test]
fn deep_in_a_lossy_medium_the_occupation_is_local() {
    let g = scenes::gap_scene();
    let gf = build(&g, 0.118);
    let ctx = gf.context();
    let left = photon_number(&gf, -60e-6).unwrap();
    let right = photon_number(&gf, 70e-6).unwrap();
    assert!((left / bose_einstein(400.0, ctx).unwrap() - 1.0).abs() < 1e-6);
    assert!((right / bose_einstein(300.0, ctx).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn heat_flows_from_hot_to_cold() {
    let gf = build(&scenes::gap_scene(), 0.118);
    for x in scenes::linspace(0.5e-6, 9.5e-6, 19) {
        assert!(poynting(&gf, x).unwrap() > 0.0);
    }
    let reversed = scenes::gap(c(1.5, 0.3), 300.0, c(2.5, 0.5), 400.0, 10e-6).unwrap();
    let gf = build(&reversed, 0.118);
    assert!(poynting(&gf, 5e-6).unwrap() < 0.0);
}
