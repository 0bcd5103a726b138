//! Exact exp-polynomial trajectories against plain RK4 on the same truncated
//! system, for a two degree-of-freedom seed read from a JSON fixture.

use std::path::Path;

use normflow::algebra::FrequencyVector;
use normflow::flow::{rk4_oracle, solve_flow, QuadraticField};
use normflow::io::read_series;

fn main() -> normflow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/two_dof.json");
    let (seed, raw) = read_series(&path)?;
    let seed = seed.into_diamond()?;
    let freq = FrequencyVector::for_truncation(raw.omega.unwrap_or(vec![1.0, 2f64.sqrt()]), 1e-6, seed.max_degree())?;

    let sol = solve_flow(&seed, &freq)?;
    let field = QuadraticField::build(&seed, &freq)?;
    println!("n = {}, M = {}, {} seed terms", seed.n(), seed.max_degree(), seed.len());
    println!("support closure: {} coefficients, largest decay rate {:.4}", field.dimension(), field.max_rate());

    for delta in [0.1, 1.0, 5.0] {
        let exact = sol.h_at(delta);
        let scale = exact.max_abs_coeff();
        for steps in [50, 200, 800] {
            let rk = rk4_oracle(&seed, &freq, delta, Some(steps))?;
            println!("delta = {delta:>3}, {steps:>4} RK4 steps: relative difference {:.2e}", exact.max_abs_diff(&rk) / scale);
        }
    }
    Ok(())
}
