//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use normflow::algebra::{ActionIndex, FrequencyVector, Lattice, MultiIndex, NormalSeries, TruncatedSeries, C64};
use normflow::asymptotic::{
    asymptotic_flow_explicit, asymptotic_flow_ode, divergence_probe, grade, lambda_conjugacy_residual,
    small_divisor_seed, three_system_integrate, GradedHamiltonian,
};
use normflow::birkhoff::birkhoff_normalize;
use normflow::flow::{normalizing_transform, rk4_oracle, rk4_oracle_checkpoints, solve_flow, strip_violations, Region};
use normflow::majorant::{burgers_boundary, burgers_radius, domination_violations, majorant_flow_checkpoints};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(m: u32) -> (TruncatedSeries, FrequencyVector) {
    let seed = TruncatedSeries::from_terms(
        1,
        m,
        3,
        [(MultiIndex::new(&[3], &[0]), c(1.0)), (MultiIndex::new(&[0], &[3]), c(1.0))],
    )
    .unwrap();
    (seed, FrequencyVector::for_truncation(vec![1.0], 1e-9, m).unwrap())
}

struct Sweep {
    cases: Vec<(TruncatedSeries, FrequencyVector)>,
}

fn sweep() -> Sweep {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let cases = (0..20)
        .map(|i| {
            let n = 1 + i % 2;
            let m = 8;
            let f = common::random_freq(&mut rng, n, m);
            (common::random_real_seed(&mut rng, n, m, 3, 4), f)
        })
        .collect();
    Sweep { cases }
}

fn relative_diff(exact: &TruncatedSeries, other: &TruncatedSeries) -> f64 {
    exact.max_abs_diff(other) / exact.max_abs_coeff().max(f64::MIN_POSITIVE)
}

fn worked_fixture() -> Outcome {
    let t0 = Instant::now();
    let (seed, f) = fixture(4);
    let sol = solve_flow(&seed, &f).map_err(|e| e.to_string())?;
    let k22 = MultiIndex::new(&[2], &[2]);
    let traj = sol.trajectory(&k22);
    let mut worst: f64 = 0.0;
    for d in [0.0f64, 0.1, 0.5, 1.0, 3.0, 10.0] {
        let want = -3.0 * (1.0 - (-6.0 * d).exp());
        worst = worst.max((traj.eval(d) - c(want)).norm());
    }
    ensure(worst < 1e-14, || format!("H_22 trajectory off by {worst:e}"))?;
    let nf = sol.normal_form().map_err(|e| e.to_string())?;
    let want = NormalSeries::from_terms(1, 4, [(ActionIndex::new(&[2]), c(-3.0))]);
    ensure(nf.max_abs_diff(&want) < 1e-12, || format!("normal form {:?}", nf))?;
    let rk = rk4_oracle(&seed, &f, 1.0, Some(1000)).map_err(|e| e.to_string())?;
    let rk_err = sol.h_at(1.0).max_abs_diff(&rk);
    ensure(rk_err < 1e-8, || format!("rk4 differs by {rk_err:e}"))?;
    let bk = birkhoff_normalize(&seed, &f).map_err(|e| e.to_string())?;
    let bk_err = bk.normal.max_abs_diff(&nf);
    ensure(bk_err < 1e-9, || format!("birkhoff differs by {bk_err:e}"))?;
    let elapsed = t0.elapsed().as_secs_f64();
    ensure(elapsed < 1.0, || format!("took {elapsed:.3} s"))?;
    Ok(format!("H_22 err {worst:.1e}, rk4 {rk_err:.1e}, birkhoff {bk_err:.1e}, {elapsed:.3} s"))
}

fn oracle_sweep(s: &Sweep) -> Outcome {
    let t0 = Instant::now();
    let deltas = [0.1, 1.0, 5.0];
    let mut worst: f64 = 0.0;
    for (i, (seed, f)) in s.cases.iter().enumerate() {
        let sol = solve_flow(seed, f).map_err(|e| e.to_string())?;
        let rk = rk4_oracle_checkpoints(seed, f, &deltas, None).map_err(|e| e.to_string())?;
        for (d, r) in deltas.iter().zip(&rk) {
            let e = relative_diff(&sol.h_at(*d), r);
            ensure(e <= 1e-6, || format!("seed {i}, delta {d}: relative difference {e:e}"))?;
            worst = worst.max(e);
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    ensure(elapsed < 60.0, || format!("took {elapsed:.1} s"))?;
    Ok(format!("20 seeds x 3 deltas, worst relative difference {worst:.1e}, {elapsed:.2} s"))
}

fn uniqueness(s: &Sweep) -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, (seed, f)) in s.cases.iter().enumerate() {
        let nf = solve_flow(seed, f).and_then(|sol| sol.normal_form()).map_err(|e| e.to_string())?;
        let bk = birkhoff_normalize(seed, f).map_err(|e| e.to_string())?;
        let e = nf.max_abs_diff(&bk.normal);
        ensure(e <= 1e-9, || format!("seed {i}: normal forms differ by {e:e}"))?;
        worst = worst.max(e);
    }
    Ok(format!("flow limit vs Birkhoff through degree 8, worst {worst:.1e}"))
}

fn support_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let strip = Region::Strip { lo: 0.0, hi: f64::INFINITY };
    let mut strip_checked = 0;
    for i in 0..20 {
        let n = 1 + i % 2;
        let f = common::random_freq(&mut rng, n, 8);
        let full = common::random_real_seed(&mut rng, n, 8, 4, 5);
        let seed = full.filter(|k| strip.contains(k, &f));
        if seed.is_empty() {
            continue;
        }
        let sol = solve_flow(&seed, &f).map_err(|e| e.to_string())?;
        let v = strip_violations(&sol, strip).map_err(|e| e.to_string())?;
        ensure(v.is_empty(), || format!("strip seed {i}: nonzero trajectories at {v:?}"))?;
        strip_checked += 1;
    }

    let ball = Region::Ball { radius: 5 };
    let (seed, f) = fixture(8);
    let sol = solve_flow(&seed, &f).map_err(|e| e.to_string())?;
    let v = strip_violations(&sol, ball).map_err(|e| e.to_string())?;
    ensure(v.is_empty(), || {
        let k = v[0];
        format!(
            "strip: {strip_checked} seeds invariant; ball B_5: seed z^3 + zbar^3 (M = 8) produces {} nonzero trajectories \
             outside the ball, e.g. k = {:?}/{:?} with calH_k(1) = {:.3e}",
            v.len(),
            k.k_vec(),
            k.kbar_vec(),
            sol.trajectory(&k).eval(1.0)
        )
    })?;
    Ok(format!("{strip_checked} strip seeds and the ball seed keep outside trajectories zero"))
}

fn symmetries(s: &Sweep) -> Outcome {
    let tol = 1e-11;
    let deltas = [0.1, 1.0, 5.0];
    let (mut reality, mut plus, mut minus): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (i, (seed, f)) in s.cases.iter().enumerate() {
        let sol = solve_flow(seed, f).map_err(|e| e.to_string())?;
        for &d in &deltas {
            reality = reality.max(sol.h_at(d).reality_defect());
        }
        for (p, acc) in [(true, &mut plus), (false, &mut minus)] {
            let sym = common::symmetrise(seed, p);
            let sol = solve_flow(&sym, f).map_err(|e| e.to_string())?;
            for &d in &deltas {
                let h = sol.h_at(d);
                *acc = acc.max(h.max_abs_diff(&h.involution(p)));
                reality = reality.max(h.reality_defect());
            }
        }
        ensure(reality <= tol && plus <= tol && minus <= tol, || {
            format!("seed {i}: reality {reality:e}, I+ {plus:e}, I- {minus:e}")
        })?;
    }
    Ok(format!("reality {reality:.1e}, I+ {plus:.1e}, I- {minus:.1e}"))
}

fn transform_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = vec![fixture(5)];
    for i in 0..4 {
        let n = 1 + i % 2;
        let f = common::random_freq(&mut rng, n, 6);
        cases.push((common::random_real_seed(&mut rng, n, 6, 3, 4), f));
    }
    let (mut sub, mut sym): (f64, f64) = (0.0, 0.0);
    for (i, (seed, f)) in cases.iter().enumerate() {
        let sol = solve_flow(seed, f).map_err(|e| e.to_string())?;
        let t = normalizing_transform(&sol, 1.0, None).map_err(|e| e.to_string())?;
        let a = t.substitution_residual(&sol).map_err(|e| e.to_string())?;
        let b = t.symplectic_residual().map_err(|e| e.to_string())?;
        ensure(a < 1e-7 && b < 1e-7, || format!("case {i}: substitution {a:e}, symplectic {b:e}"))?;
        sub = sub.max(a);
        sym = sym.max(b);
    }
    Ok(format!("{} cases at delta = 1: substitution {sub:.1e}, symplectic {sym:.1e}", cases.len()))
}

fn majorant_principle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let deltas = [0.5, 1.0, 2.0];
    let mut checked = 0usize;
    for i in 0..10 {
        let n = 1 + i % 2;
        let m = 7;
        let f = common::random_freq(&mut rng, n, m);
        let seed = common::random_real_seed(&mut rng, n, m, 3, 4);
        let bar = seed.map_coeffs(|_, z| c(z.norm() * (1.0 + rng.gen::<f64>())));
        let sol = solve_flow(&seed, &f).map_err(|e| e.to_string())?;
        let bars = majorant_flow_checkpoints(&bar, &deltas, 400).map_err(|e| e.to_string())?;
        for (d, hb) in deltas.iter().zip(&bars) {
            for h in [sol.calh_at(*d), sol.h_at(*d)] {
                let v = domination_violations(&h, hb, 0.0);
                ensure(v.is_empty(), || format!("pair {i}, delta {d}: violated at {v:?}"))?;
                checked += h.len();
            }
        }
    }
    Ok(format!("10 pairs, {checked} coefficient checks, 0 violations"))
}

fn burgers() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 2.0] {
        for b in [0.5, 1.0, 2.0] {
            for (n, d) in [(1, 0.1), (2, 1.0), (3, 10.0)] {
                let r = burgers_radius(a, b, n, d).map_err(|e| e.to_string())?.radius;
                let e = burgers_boundary(a, b, n, d).map_err(|e| e.to_string())?;
                let rel = (e - r).abs() / r;
                ensure(rel <= 0.01, || format!("a {a}, b {b}, n {n}, delta {d}: closed {r}, boundary {e}"))?;
                worst = worst.max(rel);
            }
        }
    }
    let mut ratio_range = (f64::MAX, f64::MIN);
    for a in [0.5, 1.0, 2.0] {
        for d in [100.0, 200.0, 500.0, 1000.0] {
            let r1 = burgers_radius(a, 1.0, 1, d).unwrap().radius;
            let r2 = burgers_radius(a, 1.0, 1, 2.0 * d).unwrap().radius;
            let q = r2 / r1;
            ensure((0.45..=0.55).contains(&q), || format!("a {a}, delta {d}: ratio {q}"))?;
            ratio_range = (ratio_range.0.min(q), ratio_range.1.max(q));
        }
    }
    Ok(format!(
        "27 grid points, worst relative gap {worst:.1e}; radius(2d)/radius(d) in [{:.4}, {:.4}]",
        ratio_range.0, ratio_range.1
    ))
}

fn random_graded(rng: &mut ChaCha8Rng, f: &FrequencyVector, m: u32) -> GradedHamiltonian {
    let n = f.n();
    let mut g = GradedHamiltonian::new(n, m);
    g.add_term(Lattice::zero(n), ActionIndex::unit(n, 0).add(&ActionIndex::unit(n, n - 1)), c(rng.gen_range(-1.0..1.0)));
    g.add_term(Lattice::zero(n), ActionIndex::new(&vec![1; n]).add(&ActionIndex::unit(n, 0)), c(rng.gen_range(-1.0..1.0)));
    for _ in 0..3 {
        let k = common::indices(n, 3, 4)[rng.gen_range(0..common::indices(n, 3, 4).len())];
        if k.is_normal() {
            continue;
        }
        let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        g.add_term(k.kprime(), k.diagonal_floor(), v);
    }
    g
}

fn asymptotics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ode_worst: f64 = 0.0;
    for i in 0..6 {
        let n = 1 + i % 2;
        let f = common::random_freq(&mut rng, n, 8);
        let g = random_graded(&mut rng, &f, 8);
        for d in [0.5, 1.0, 2.0] {
            let ex = asymptotic_flow_explicit(&g, &f, d).map_err(|e| e.to_string())?;
            let ode = asymptotic_flow_ode(&g, &f, d, 400).map_err(|e| e.to_string())?;
            let e = ex.max_abs_diff(&ode);
            ensure(e < 1e-8, || format!("graded seed {i}, delta {d}: explicit vs rk4 {e:e}"))?;
            ode_worst = ode_worst.max(e);
        }
    }

    let mut lambda_worst: f64 = 0.0;
    let mut cases = vec![fixture(8)];
    for i in 0..4 {
        let n = 1 + i % 2;
        let f = common::random_freq(&mut rng, n, 7);
        cases.push((common::random_real_seed(&mut rng, n, 7, 3, 4), f));
    }
    for (i, (seed, f)) in cases.iter().enumerate() {
        for d in [0.5, 1.0, 2.0] {
            let r = lambda_conjugacy_residual(seed, f, d).map_err(|e| format!("case {i}: {e}"))?;
            ensure(r < 1e-7, || format!("case {i}, delta {d}: conjugacy residual {r:e}"))?;
            lambda_worst = lambda_worst.max(r);
        }
    }

    let strip = Region::Strip { lo: 0.0, hi: f64::INFINITY };
    let mut coincide: f64 = 0.0;
    for i in 0..8 {
        let n = 1 + i % 2;
        let f = common::random_freq(&mut rng, n, 8);
        let seed = common::random_real_seed(&mut rng, n, 8, 4, 4).filter(|k| strip.contains(k, &f));
        if seed.is_empty() {
            continue;
        }
        let sol = solve_flow(&seed, &f).map_err(|e| e.to_string())?;
        let g = grade(&seed).map_err(|e| e.to_string())?;
        for d in [0.5, 1.0, 2.0] {
            let a = asymptotic_flow_explicit(&g, &f, d).map_err(|e| e.to_string())?.reconstruct();
            let e = sol.calh_at(d).max_abs_diff(&a);
            ensure(e < 1e-9, || format!("one-sided seed {i}, delta {d}: flows differ by {e:e}"))?;
            coincide = coincide.max(e);
        }
    }
    Ok(format!("explicit vs rk4 {ode_worst:.1e}; conjugacy {lambda_worst:.1e}; one-sided coincidence {coincide:.1e}"))
}

fn converging_case() -> Outcome {
    let f = FrequencyVector::for_truncation(vec![1.0, 2f64.sqrt()], 1e-6, 8).map_err(|e| e.to_string())?;
    let q = Lattice::from_slice(&[1, 0]);
    let omega_q = f.omega_of(&q);
    let nq = NormalSeries::from_terms(2, 7, [(ActionIndex::new(&[1, 0]), c(0.3)), (ActionIndex::new(&[0, 1]), c(0.2))]);
    let nmq = nq.clone();
    let n0 = NormalSeries::from_terms(2, 8, [(ActionIndex::new(&[2, 0]), c(0.5)), (ActionIndex::new(&[1, 1]), c(-0.25))]);
    let run = |d: f64| three_system_integrate(&nq, &nmq, &n0, &q, &f, d, (200.0 * d) as usize);
    let s40 = run(40.0).map_err(|e| e.to_string())?;
    let s50 = run(50.0).map_err(|e| e.to_string())?;
    let decay = (-omega_q * 50.0).exp();
    let plus = s50.0.polydisk_norm_upper(1.0) * decay;
    let minus = s50.1.polydisk_norm_upper(1.0) * decay;
    let cauchy = s50.2.sub(&s40.2).polydisk_norm_upper(1.0);
    ensure(plus < 1e-6 && minus < 1e-6 && cauchy < 1e-6, || {
        format!("e^(-50)|N^q| {plus:e}, e^(-50)|N^-q| {minus:e}, |N0(50) - N0(40)| {cauchy:e}")
    })?;

    let gamma = (1.0 + 5f64.sqrt()) / 2.0;
    let fg = FrequencyVector::for_truncation(vec![1.0, gamma], 1e-3, 11).map_err(|e| e.to_string())?;
    let (g, qs) = small_divisor_seed(&fg, 11).map_err(|e| e.to_string())?;
    let deltas: Vec<f64> = (0..=8).map(|i| i as f64).collect();
    let norms = divergence_probe(&g, &fg, 1.0, &deltas).map_err(|e| e.to_string())?;
    ensure(norms.windows(2).all(|w| w[1] > w[0]), || format!("norms not increasing: {norms:?}"))?;
    Ok(format!(
        "e^(-50)|N^(+-q)| {:.1e}, |N0(50) - N0(40)| {cauchy:.1e}; probe along q = {:?} grows {:.3} -> {:.3e}",
        plus.max(minus),
        qs.as_slice(),
        norms[0],
        norms[norms.len() - 1]
    ))
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let s = sweep();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 worked fixture", Box::new(worked_fixture)),
        ("2 oracle sweep", Box::new(|| oracle_sweep(&s))),
        ("3 normal-form uniqueness", Box::new(|| uniqueness(&s))),
        ("4 strip and ball invariance", Box::new(support_invariance)),
        ("5 reality and reversibility", Box::new(|| symmetries(&s))),
        ("6 transform consistency", Box::new(transform_consistency)),
        ("7 majorant principle", Box::new(majorant_principle)),
        ("8 Burgers radius", Box::new(burgers)),
        ("9 asymptotic machinery", Box::new(asymptotics)),
        ("10 converging case and divergence probe", Box::new(converging_case)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        match f() {
            Ok(msg) => println!("[PASS] {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name}: {msg}");
            }
        }
    }
    println!("{} of {} criteria passed ({:.1} s)", criteria.len() - failed, criteria.len(), t0.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
