//! Both sides of `2 ||Lambda^gamma f^{p/2}||^2 <= p <f^{p-1}, Lambda^{2 gamma} f>`
//! for a fixed trigonometric polynomial, over a few `(gamma, p)`.

use mhda::diagnostics::positivity_inequality;
use mhda::field::ScalarField;
use mhda::grid::SpectralGrid;

fn main() -> mhda::error::Result<()> {
    let grid = SpectralGrid::new(16)?;
    let f = ScalarField::from_fn(&grid, |x, y| x.sin() + 0.5 * (2.0 * y).cos() - 0.3 * (x + y).cos());

    println!("{:>6} {:>3} {:>16} {:>16} {:>10}", "gamma", "p", "lhs", "rhs", "rhs/lhs");
    for p in [2, 4, 6, 8] {
        for gamma in [0.0, 0.25, 0.5, 1.0] {
            let (lhs, rhs) = positivity_inequality(&f, gamma, p)?;
            println!("{gamma:>6.2} {p:>3} {lhs:>16.8e} {rhs:>16.8e} {:>10.4}", rhs / lhs);
        }
    }
    Ok(())
}
