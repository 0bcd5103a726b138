//! The change of variables carrying `H_2 + seed` to `H_2 + H(delta)`, with
//! its substitution and symplecticity residuals.

use normflow::algebra::{FrequencyVector, MultiIndex, TruncatedSeries, C64};
use normflow::flow::{normalizing_transform, solve_flow};

fn main() -> normflow::Result<()> {
    let m = 6;
    let freq = FrequencyVector::for_truncation(vec![1.0], 1e-9, m)?;
    let seed = TruncatedSeries::from_terms(
        1,
        m,
        3,
        [
            (MultiIndex::new(&[2], &[1]), C64::new(0.2, 0.0)),
            (MultiIndex::new(&[1], &[2]), C64::new(0.2, 0.0)),
            (MultiIndex::new(&[3], &[0]), C64::new(0.1, -0.1)),
            (MultiIndex::new(&[0], &[3]), C64::new(0.1, 0.1)),
        ],
    )?;
    let sol = solve_flow(&seed, &freq)?;
    for delta in [0.5, 1.0, 2.0] {
        let t = normalizing_transform(&sol, delta, None)?;
        println!(
            "delta = {delta}: Z has {} terms, substitution residual {:.2e}, symplectic residual {:.2e}",
            t.z[0].len(),
            t.substitution_residual(&sol)?,
            t.symplectic_residual()?
        );
    }
    let t = normalizing_transform(&sol, 1.0, None)?;
    println!("Z(z, zbar) at delta = 1:");
    for (k, c) in t.z[0].iter() {
        println!("  {:+.6}{:+.6}i  z^{} zbar^{}", c.re, c.im, k.k(0), k.kbar(0));
    }
    Ok(())
}
