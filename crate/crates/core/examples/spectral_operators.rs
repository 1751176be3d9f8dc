//! Fourier multipliers on single modes, where every result is known in closed form.

use mhda::field::{ScalarField, VectorField};
use mhda::grid::SpectralGrid;
use mhda::spectral::{
    b_from_potential, fractional_laplacian, helmholtz_filter_invert, leray_project,
    nonlinear_product, velocity_from_vorticity,
};

fn show(label: &str, f: &ScalarField) {
    let nonzero: Vec<String> = (0..f.grid().len())
        .filter(|&i| f.coeffs()[i].norm() > 1e-14)
        .map(|i| {
            let (kx, ky) = f.grid().mode_of(i);
            format!("({kx},{ky}): {:.4}", f.coeffs()[i])
        })
        .collect();
    println!("{label:<28} {}", nonzero.join("  "));
}

fn main() -> mhda::error::Result<()> {
    let g = SpectralGrid::new(16)?;
    let cos_x = ScalarField::cosine(&g, 1, 0, 1.0);
    let cos_2x = ScalarField::cosine(&g, 2, 0, 1.0);

    show("Lambda^1.3 cos x", &fractional_laplacian(&cos_x, 1.3)?);
    show("Lambda^1 cos 2x", &fractional_laplacian(&cos_2x, 1.0)?);
    show("cos x * cos x", &nonlinear_product(&cos_x, &cos_x)?);

    let v = velocity_from_vorticity(&cos_x)?;
    show("velocity of w = cos x, x", &v.x);
    show("velocity of w = cos x, y", &v.y);
    show("Helmholtz filtered, y", &helmholtz_filter_invert(&v, 1.0)?.y);

    let b = b_from_potential(&ScalarField::cosine(&g, 0, 1, 1.0));
    show("b from a = cos y, x", &b.x);

    let gradient = VectorField::new(ScalarField::sine(&g, 1, 0, -1.0), ScalarField::zeros(&g))?;
    show("Leray of grad cos x, x", &leray_project(&gradient).x);
    Ok(())
}
