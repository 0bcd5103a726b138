//! The converging three-component case `{-q, 0, q}` and, for contrast, a
//! one-sided seed along a small divisor whose norm grows with `delta`.

use normflow::algebra::{ActionIndex, FrequencyVector, Lattice, NormalSeries, C64};
use normflow::asymptotic::{divergence_probe, small_divisor_seed, three_system_integrate};

fn main() -> normflow::Result<()> {
    let c = |x: f64| C64::new(x, 0.0);
    let freq = FrequencyVector::for_truncation(vec![1.0, 2f64.sqrt()], 1e-6, 8)?;
    let q = Lattice::from_slice(&[1, 0]);
    let omega_q = freq.omega_of(&q);
    let nq = NormalSeries::from_terms(2, 7, [(ActionIndex::new(&[1, 0]), c(0.3)), (ActionIndex::new(&[0, 1]), c(0.2))]);
    let n0 = NormalSeries::from_terms(2, 8, [(ActionIndex::new(&[2, 0]), c(0.5)), (ActionIndex::new(&[1, 1]), c(-0.25))]);

    let mut previous: Option<NormalSeries> = None;
    for delta in [0.0, 10.0, 20.0, 30.0, 40.0, 50.0] {
        let steps = ((200.0 * delta) as usize).max(1);
        let (pq, mq, zero) = three_system_integrate(&nq, &nq, &n0, &q, &freq, delta, steps)?;
        let decay = (-omega_q * delta).exp();
        let moved = previous.as_ref().map_or(0.0, |p| zero.sub(p).polydisk_norm_upper(1.0));
        println!(
            "delta = {delta:>4}: e^(-w delta)|N^q| = {:.2e}, e^(-w delta)|N^-q| = {:.2e}, |N0 - previous| = {moved:.2e}",
            pq.polydisk_norm_upper(1.0) * decay,
            mq.polydisk_norm_upper(1.0) * decay,
        );
        previous = Some(zero);
    }

    let gamma = (1.0 + 5f64.sqrt()) / 2.0;
    let fg = FrequencyVector::for_truncation(vec![1.0, gamma], 1e-3, 11)?;
    let (seed, qs) = small_divisor_seed(&fg, 11)?;
    let deltas: Vec<f64> = (0..=8).map(f64::from).collect();
    let norms = divergence_probe(&seed, &fg, 1.0, &deltas)?;
    println!("one-sided seed along q = {:?} (omega_q = {:.4}):", qs.as_slice(), fg.omega_of(&qs));
    for (d, n) in deltas.iter().zip(norms) {
        println!("  delta = {d}: norm on the unit polydisk {n:.4e}");
    }
    Ok(())
}
