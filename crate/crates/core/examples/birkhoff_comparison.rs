//! The normal form as the `delta -> +inf` limit of the flow, compared with
//! classical Birkhoff normalization by Lie transforms.

use normflow::algebra::{FrequencyVector, MultiIndex, TruncatedSeries, C64};
use normflow::birkhoff::birkhoff_normalize;
use normflow::flow::solve_flow;

fn main() -> normflow::Result<()> {
    let m = 8;
    let freq = FrequencyVector::for_truncation(vec![1.0, 2f64.sqrt()], 1e-6, m)?;
    let mut seed = TruncatedSeries::diamond(2, m);
    let terms = [
        (MultiIndex::new(&[2, 0], &[0, 1]), C64::new(0.3, 0.1)),
        (MultiIndex::new(&[1, 1], &[1, 0]), C64::new(-0.2, 0.4)),
        (MultiIndex::new(&[0, 0], &[3, 1]), C64::new(0.5, 0.0)),
    ];
    for (k, c) in terms {
        seed.add_term(k, c);
        seed.add_term(k.conjugate(), c.conj());
    }

    let flow = solve_flow(&seed, &freq)?.normal_form()?;
    let bk = birkhoff_normalize(&seed, &freq)?;

    println!("{:>10} {:>22} {:>22}", "kappa^l", "flow", "birkhoff");
    for (l, c) in flow.iter() {
        println!("{:>10} {:>+22.15} {:>+22.15}", format!("{:?}", l.to_vec()), c.re, bk.normal.get(l).re);
    }
    println!("largest difference {:.2e}", flow.max_abs_diff(&bk.normal));
    for (d, r) in &bk.residuals {
        println!("degree {d}: {} generator terms, residual {r:.1e}", bk.generators.iter().find(|g| g.0 == *d).map_or(0, |g| g.1.len()));
    }
    Ok(())
}
