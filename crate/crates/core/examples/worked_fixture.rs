//! The flow of `H_2 + z^3 + zbar^3` with `omega = 1`.
//!
//! At truncation `M = 4` the only degree-4 coefficient that moves is the one
//! at `kappa^2`, with `H_{(2,2)}(delta) = -3 (1 - e^{-6 delta})`.

use normflow::algebra::{FrequencyVector, MultiIndex, TruncatedSeries, C64};
use normflow::flow::solve_flow;

fn main() -> normflow::Result<()> {
    let one = C64::new(1.0, 0.0);
    let seed = TruncatedSeries::from_terms(
        1,
        4,
        3,
        [(MultiIndex::new(&[3], &[0]), one), (MultiIndex::new(&[0], &[3]), one)],
    )?;
    let freq = FrequencyVector::for_truncation(vec![1.0], 1e-9, 4)?;
    let sol = solve_flow(&seed, &freq)?;
    sol.validate()?;

    println!("trajectories in rescaled variables:");
    for (k, traj) in sol.trajectories() {
        println!("  k = {:?}/{:?}: {} terms", k.k_vec(), k.kbar_vec(), traj.to_json().len());
    }

    let k22 = MultiIndex::new(&[2], &[2]);
    for delta in [0.0, 0.1, 0.5, 1.0, 5.0] {
        let got = sol.h_at(delta).get(&k22).re;
        let closed = -3.0 * (1.0 - (-6.0 * delta).exp());
        println!("delta = {delta:>4}: H_(2,2) = {got:+.12}  closed form {closed:+.12}");
    }

    let nf = sol.normal_form()?;
    for (l, c) in nf.iter() {
        println!("normal form: {:+.12} kappa^{:?}", c.re, l.to_vec());
    }
    Ok(())
}
