//! Majorant flow, the radius of the polydisk on which it stays bounded, the
//! `A / (1 + B delta)` fit, and the Burgers radius estimate.

use normflow::algebra::{MultiIndex, TruncatedSeries, C64};
use normflow::majorant::{
    burgers_boundary, burgers_radius, fit_inverse_law, geometric_majorant, radius_profile, radius_profile_csv,
};

fn main() -> normflow::Result<()> {
    let one = C64::new(1.0, 0.0);
    let seed = TruncatedSeries::from_terms(
        1,
        8,
        3,
        [(MultiIndex::new(&[3], &[0]), one), (MultiIndex::new(&[0], &[3]), one)],
    )?;
    let deltas: Vec<f64> = (0..=10).map(|i| 0.5 * f64::from(i)).collect();
    let rows = radius_profile(&seed, 0.1, &deltas, 400)?;
    print!("{}", radius_profile_csv(&rows));
    let fit = fit_inverse_law(&rows)?;
    println!("fit: radius ~ {:.4} / (1 + {:.4} delta), worst relative residual {:.1}%", fit.a, fit.b, 100.0 * fit.max_rel_residual);

    let g = geometric_majorant(&seed, 0.5)?;
    println!("geometric majorant: a = {:.4}, s = {}, rho = {}", g.a, g.s, g.rho);
    for delta in [0.0, 0.1, 1.0, 10.0, 100.0] {
        let r = burgers_radius(1.0, 0.5, 1, delta)?;
        let b = burgers_boundary(1.0, 0.5, 1, delta)?;
        println!("Burgers, delta = {delta:>5}: closed form {:.6e}, characteristics {:.6e}", r.radius, b);
    }
    Ok(())
}
