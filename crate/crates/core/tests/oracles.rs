mod common;

use common::{frac_lap_oracle, leray_oracle, product_oracle, rel_diff, Rng};
use mhda::field::{ScalarField, VectorField};
use mhda::grid::SpectralGrid;
use mhda::spectral::{
    b_from_potential, current_from_potential, curl, dealias, divergence, fractional_laplacian,
    helmholtz_filter_apply, helmholtz_filter_invert, leray_project, neg_laplacian,
    nonlinear_product, velocity_from_vorticity,
};

const EXPONENTS: [f64; 6] = [0.0, 0.3, 0.5, 1.0, 1.7, 2.0];

#[test]
fn fractional_laplacian_matches_direct_dft() {
    for (seed, length) in [(1, 2.0 * std::f64::consts::PI), (2, 3.0), (3, 10.0)] {
        let g = SpectralGrid::with_length(8, length).unwrap();
        let vals = Rng::new(seed).samples(64);
        let f = ScalarField::from_physical(&g, &vals);
        for s in EXPONENTS.into_iter().chain([0.7]) {
            let got = fractional_laplacian(&f, s).unwrap();
            let want = frac_lap_oracle(&vals, 8, length, s);
            let err = rel_diff(got.coeffs(), &want);
            assert!(err < 1e-12, "L = {length}, s = {s}: {err:e}");
            // physical values as well
            let phys = common::direct_idft(&want, 8);
            let got_phys = got.to_physical();
            let scale = phys.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (a, b) in got_phys.iter().zip(&phys) {
                assert!((a - b.re).abs() <= 1e-12 * scale);
            }
        }
    }
}

#[test]
fn nonlinear_product_matches_convolution() {
    let g = SpectralGrid::new(8).unwrap();
    for seed in 0..5 {
        let mut rng = Rng::new(100 + seed);
        let fv = rng.samples(64);
        let gv = rng.samples(64);
        let f = dealias(&ScalarField::from_physical(&g, &fv));
        let h = dealias(&ScalarField::from_physical(&g, &gv));
        let got = nonlinear_product(&f, &h).unwrap();
        let want = product_oracle(&fv, &gv, 8);
        let err = rel_diff(got.coeffs(), &want);
        assert!(err < 1e-12, "seed {seed}: {err:e}");
        assert!(got.hermitian_defect() < 1e-15);
    }
}

#[test]
fn product_on_finer_grid_matches_convolution() {
    let g = SpectralGrid::new(10).unwrap();
    let mut rng = Rng::new(7);
    let fv = rng.samples(100);
    let gv = rng.samples(100);
    let got = nonlinear_product(
        &dealias(&ScalarField::from_physical(&g, &fv)),
        &dealias(&ScalarField::from_physical(&g, &gv)),
    )
    .unwrap();
    assert!(rel_diff(got.coeffs(), &product_oracle(&fv, &gv, 10)) < 1e-12);
}

#[test]
fn leray_matches_direct_dft() {
    for (seed, length) in [(11, 2.0 * std::f64::consts::PI), (12, 5.0)] {
        let g = SpectralGrid::with_length(8, length).unwrap();
        let mut rng = Rng::new(seed);
        let (xv, yv) = (rng.samples(64), rng.samples(64));
        let f = VectorField::new(ScalarField::from_physical(&g, &xv), ScalarField::from_physical(&g, &yv)).unwrap();
        let p = leray_project(&f);
        let (wx, wy) = leray_oracle(&xv, &yv, 8, length);
        assert!(rel_diff(p.x.coeffs(), &wx) < 1e-12);
        assert!(rel_diff(p.y.coeffs(), &wy) < 1e-12);
    }
}

#[test]
fn leray_is_idempotent_and_kills_gradients() {
    let g = SpectralGrid::new(16).unwrap();
    let mut rng = Rng::new(5);
    let f = VectorField::new(
        dealias(&ScalarField::from_physical(&g, &rng.samples(256))),
        dealias(&ScalarField::from_physical(&g, &rng.samples(256))),
    )
    .unwrap();
    let p = leray_project(&f);
    let pp = leray_project(&p);
    assert!(pp.coeff_distance(&p) <= 1e-14 * p.max_abs_coeff());
    assert!(p.divergence_defect() < 1e-14);
    let grad = mhda::spectral::gradient(&ScalarField::cosine(&g, 1, 0, 1.0));
    assert!(leray_project(&grad).max_abs_coeff() < 1e-16);
}

#[test]
fn helmholtz_roundtrip() {
    let g = SpectralGrid::new(16).unwrap();
    let mut rng = Rng::new(9);
    let v = VectorField::new(
        ScalarField::from_physical(&g, &rng.samples(256)),
        ScalarField::from_physical(&g, &rng.samples(256)),
    )
    .unwrap();
    for alpha in [0.1, 1.0, 3.0] {
        let back = helmholtz_filter_apply(&helmholtz_filter_invert(&v, alpha).unwrap(), alpha).unwrap();
        assert!(back.coeff_distance(&v) <= 1e-14 * v.max_abs_coeff());
    }
    assert!(helmholtz_filter_invert(&v, 0.0).is_err());
    assert!(helmholtz_filter_invert(&v, -1.0).is_err());
}

#[test]
fn vorticity_roundtrip_on_16() {
    let g = SpectralGrid::new(16).unwrap();
    let mut w = ScalarField::from_physical(&g, &Rng::new(21).samples(256));
    w.coeffs_mut()[0] = 0.0.into();
    let v = velocity_from_vorticity(&w).unwrap();
    assert!(curl(&v).coeff_distance(&w) <= 1e-13 * w.max_abs_coeff());
    assert!(v.divergence_defect() < 1e-13);
    let mut biased = w.clone();
    biased.coeffs_mut()[0] = 1.0.into();
    assert!(velocity_from_vorticity(&biased).is_err());
}

#[test]
fn potential_identities() {
    let g = SpectralGrid::new(16).unwrap();
    let a = dealias(&ScalarField::from_physical(&g, &Rng::new(31).samples(256)));
    let b = b_from_potential(&a);
    let div = divergence(&b);
    assert!(div.max_abs_coeff() < 1e-14);
    let j = current_from_potential(&a);
    assert!(j.coeff_distance(&neg_laplacian(&a)) == 0.0);
    assert!(curl(&b).coeff_distance(&j) <= 1e-13 * j.max_abs_coeff());
}
