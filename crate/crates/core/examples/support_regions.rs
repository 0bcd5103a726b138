//! Which parts of index space the flow can reach from a sparse seed.
//!
//! A seed supported in the half space `<omega, k'> >= 0` stays there. A seed
//! supported in a ball `|k| <= R` does not stay in that ball in general.

use normflow::algebra::{FrequencyVector, MultiIndex, TruncatedSeries, C64};
use normflow::flow::{solve_flow, strip_violations, Region};

fn main() -> normflow::Result<()> {
    let m = 8;
    let freq = FrequencyVector::for_truncation(vec![1.0, 2f64.sqrt()], 1e-6, m)?;
    let strip = Region::Strip { lo: 0.0, hi: f64::INFINITY };
    let seed = TruncatedSeries::from_terms(
        2,
        m,
        3,
        [
            (MultiIndex::new(&[0, 0], &[2, 1]), C64::new(1.0, 0.0)),
            (MultiIndex::new(&[1, 0], &[0, 2]), C64::new(0.5, 0.5)),
            (MultiIndex::new(&[1, 1], &[1, 1]), C64::new(-0.3, 0.0)),
        ],
    )?;
    println!("seed in the strip: {}", strip.supports(&seed, &freq));
    let sol = solve_flow(&seed, &freq)?;
    println!(
        "{} trajectories, {} of them outside the strip",
        sol.trajectories().len(),
        strip_violations(&sol, strip)?.len()
    );

    let one = C64::new(1.0, 0.0);
    let ball_seed = TruncatedSeries::from_terms(
        1,
        m,
        3,
        [(MultiIndex::new(&[3], &[0]), one), (MultiIndex::new(&[0], &[3]), one)],
    )?;
    let f1 = FrequencyVector::for_truncation(vec![1.0], 1e-9, m)?;
    let sol = solve_flow(&ball_seed, &f1)?;
    let ball = Region::Ball { radius: 5 };
    println!("z^3 + zbar^3 in the ball |k| <= 5: {}", ball.supports(&ball_seed, &f1));
    for k in strip_violations(&sol, ball)? {
        println!("  k = {:?}/{:?} is reached: calH_k(1) = {:+.4}", k.k_vec(), k.kbar_vec(), sol.trajectory(&k).eval(1.0).re);
    }
    Ok(())
}
