//! The graded form `H = sum_q z^{k_q} N^q`, the explicit asymptotic flow, and
//! the finite-degree conjugacy between it and the full flow.

use normflow::algebra::{FrequencyVector, MultiIndex, TruncatedSeries, C64};
use normflow::asymptotic::{asymptotic_flow_explicit, asymptotic_flow_ode, grade, lambda_conjugacy, lambda_conjugacy_residual};

fn main() -> normflow::Result<()> {
    let m = 8;
    let freq = FrequencyVector::for_truncation(vec![1.0, 2f64.sqrt()], 1e-6, m)?;
    let mut seed = TruncatedSeries::diamond(2, m);
    let terms = [
        (MultiIndex::new(&[2, 0], &[1, 0]), C64::new(0.4, 0.0)),
        (MultiIndex::new(&[0, 1], &[2, 0]), C64::new(0.2, -0.3)),
        (MultiIndex::new(&[1, 1], &[1, 1]), C64::new(0.5, 0.0)),
        (MultiIndex::new(&[2, 0], &[2, 0]), C64::new(-0.25, 0.0)),
    ];
    for (k, c) in terms {
        seed.add_term(k, c);
        if !k.is_normal() {
            seed.add_term(k.conjugate(), c.conj());
        }
    }

    let g = grade(&seed)?;
    for (q, nq) in g.components() {
        println!("q = {:>8}: {} action terms", format!("{:?}", q.as_slice()), nq.len());
    }

    for delta in [0.5, 1.0, 2.0] {
        let ex = asymptotic_flow_explicit(&g, &freq, delta)?;
        let ode = asymptotic_flow_ode(&g, &freq, delta, 400)?;
        println!(
            "delta = {delta}: explicit vs RK4 {:.1e}, conjugacy residual {:.1e}",
            ex.max_abs_diff(&ode),
            lambda_conjugacy_residual(&seed, &freq, delta)?
        );
    }

    let lambda = lambda_conjugacy(&seed, &freq)?;
    println!("Lambda(seed) has {} terms; differs from the seed by {:.3e}", lambda.len(), lambda.max_abs_diff(&seed));
    Ok(())
}
