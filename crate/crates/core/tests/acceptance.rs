//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test prints a single `criterion N: PASS|FAIL ...` line with the
//! measured figures before asserting, so `--nocapture` output doubles as a
//! report.

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use chainmap::asymptotics::{szego_check, tail_diagnostics};
use chainmap::chain::{
    bulla_recursion_check, chain_from_coefficients, hahn_chain, jacobi_chain, laguerre_chain, littleq_chain,
    littleq_signed, littleq_transform_block, ChainParameters,
};
use chainmap::measures::{Measure, MeasureKind, PowerLaw, SpectralDensity, Support, TabulatedDensity};
use chainmap::oracle::fixture;
use chainmap::oracle::{gram_schmidt_exact, power_law_moments};
use chainmap::orthopoly::{
    affine_transform, gauss_rule, lanczos_measure, moment_gram_schmidt, stieltjes_with, DiscretisationOptions,
    Interval, OrthoError, RecurrenceCoefficients,
};

const S_GRID: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 3.0];

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn report(id: u32, pass: bool, detail: &str) {
    println!("criterion {id}: {} {detail}", if pass { "PASS" } else { "FAIL" });
}

/// Largest relative deviation of `num` from `exact` over `ω_0..ω_{sites-1}`
/// and `t_0..t_{sites-2}`, plus `c₀`.
fn chain_dev(num: &ChainParameters, exact: &ChainParameters, sites: usize) -> f64 {
    let mut worst = rel(num.c0, exact.c0);
    for n in 0..sites {
        worst = worst.max(rel(num.omega[n], exact.omega[n]));
    }
    for n in 0..sites - 1 {
        worst = worst.max(rel(num.t[n], exact.t[n]));
    }
    worst
}

type EngineFn = fn(&Measure, usize, &DiscretisationOptions) -> Result<RecurrenceCoefficients, OrthoError>;

const ENGINES: [(&str, EngineFn); 2] = [("stieltjes", stieltjes_with), ("lanczos", lanczos_measure)];

fn engine_chain(j: &SpectralDensity, engine: EngineFn, sites: usize) -> ChainParameters {
    let m = Measure::induced(j).unwrap();
    let rc = engine(&m, sites, &DiscretisationOptions::default()).unwrap();
    chain_from_coefficients(&rc, m.g()).unwrap()
}

#[test]
fn criterion_1_hard_cutoff_engines() {
    // n ≤ 100 for both ω and t needs 102 sites
    let sites = 102;
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for &s in &S_GRID {
        let exact = jacobi_chain(0.1, s, 1.0, sites).unwrap();
        let j = SpectralDensity::PowerLawHardCutoff(PowerLaw::new(0.1, s, 1.0).unwrap());
        for (name, engine) in ENGINES {
            let start = Instant::now();
            let num = engine_chain(&j, engine, sites);
            let took = start.elapsed();
            slowest = slowest.max(took);
            let dev = chain_dev(&num, &exact, sites - 1);
            println!("  s={s} {name}: max rel {dev:.2e} in {:.2}s", took.as_secs_f64());
            worst = worst.max(dev);
        }
    }
    let pass = worst < 1e-9 && slowest < Duration::from_secs(10);
    report(1, pass, &format!("max rel {worst:.2e}, slowest {:.2}s", slowest.as_secs_f64()));
    assert!(pass);
}

#[test]
fn criterion_2_exponential_cutoff_engines() {
    let sites = 52;
    let mut worst: f64 = 0.0;
    for &s in &S_GRID {
        let exact = laguerre_chain(0.1, s, 1.0, sites).unwrap();
        let j = SpectralDensity::PowerLawExpCutoff(PowerLaw::new(0.1, s, 1.0).unwrap());
        for (name, engine) in ENGINES {
            let dev = chain_dev(&engine_chain(&j, engine, sites), &exact, sites - 1);
            println!("  s={s} {name}: max rel {dev:.2e}");
            worst = worst.max(dev);
        }
    }
    report(2, worst < 1e-8, &format!("max rel {worst:.2e}"));
    assert!(worst < 1e-8);
}

#[test]
fn criterion_3_szego_integral() {
    let mut worst: f64 = 0.0;
    for &s in &[0.5, 1.0, 3.0] {
        let m = Measure::power_law(1.0, s, 0.0, 1.0).unwrap();
        let r = szego_check(&m).unwrap();
        let err = (r.szego_integral + PI * s * LN_2).abs();
        println!("  s={s}: {:.15} (err {err:.1e}) in_class={}", r.szego_integral, r.in_class);
        assert!(r.in_class);
        worst = worst.max(err);
    }
    report(3, worst < 1e-10, &format!("max abs err {worst:.1e}"));
    assert!(worst < 1e-10);
}

#[test]
fn criterion_4_asymptotic_tails() {
    let cp = jacobi_chain(0.1, 1.0, 1.0, 202).unwrap();
    let n = 200;
    let d_omega = (cp.omega[n] - 0.5).abs();
    let d_t = (cp.t[n] - 0.25).abs();
    let nf = n as f64;
    let exact_omega = 1.0 / (2.0 * (1.0 + 2.0 * nf) * (3.0 + 2.0 * nf));
    let t_closed = (1.0 + nf) * (2.0 + nf) / ((3.0 + 2.0 * nf) * (4.0 + 2.0 * nf)) * ((4.0 + 2.0 * nf) / (2.0 + 2.0 * nf)).sqrt();
    let formula_err = (d_omega - exact_omega).abs().max((cp.t[n] - t_closed).abs());

    let dev20 = |s: f64| {
        let cp = jacobi_chain(0.1, s, 1.0, 22).unwrap();
        (cp.omega[20] - 0.5).abs().max((cp.t[20] - 0.25).abs())
    };
    let (d3, d1, dh) = (dev20(3.0), dev20(1.0), dev20(0.5));
    let ordered = d3 > d1 && d1 > dh;
    let pass = d_omega < 1e-5 && d_t < 1e-5 && formula_err < 1e-14 && ordered;
    report(
        4,
        pass,
        &format!(
            "|dω200| {d_omega:.2e}, |dt200| {d_t:.2e}, formula err {formula_err:.1e}, n=20 devs s=3/1/0.5: {d3:.2e} > {d1:.2e} > {dh:.2e}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_gram_schmidt_instability() {
    let j = SpectralDensity::PowerLawHardCutoff(PowerLaw::new(0.1, 1.0, 1.0).unwrap());
    let m = Measure::induced(&j).unwrap();
    let exact = jacobi_chain(0.1, 1.0, 1.0, 102).unwrap();

    // first n ≤ 40 where double-precision Gram–Schmidt is off by > 1e−3, or
    // where it stops because a computed β went non-positive
    let (gs, exhausted) = match moment_gram_schmidt(&m, 42, 16) {
        Ok(rc) => (rc, None),
        Err(OrthoError::PrecisionExhausted { index, partial }) => (*partial, Some(index)),
        Err(e) => panic!("{e}"),
    };
    let gs_chain = chain_from_coefficients(&gs, m.g()).unwrap();
    let mut first_bad = (0..gs_chain.len().min(41)).find(|&n| {
        rel(gs_chain.omega[n], exact.omega[n]) > 1e-3 || gs_chain.t.get(n).is_some_and(|&t| rel(t, exact.t[n]) > 1e-3)
    });
    if first_bad.is_none() {
        first_bad = exhausted.filter(|&i| i <= 40);
    }

    let lanczos = engine_chain(&j, lanczos_measure, 102);
    let lanczos_dev = chain_dev(&lanczos, &exact, 101);
    let pass = first_bad.is_some() && lanczos_dev < 1e-9;
    report(
        5,
        pass,
        &format!("gram_schmidt@16 first deviation > 1e-3 at n = {first_bad:?} (exhausted at {exhausted:?}); lanczos max rel {lanczos_dev:.2e} through n = 100"),
    );
    assert!(pass);
}

#[test]
fn criterion_6_littleq_certification() {
    let opts = DiscretisationOptions::default();
    let (mut bulla, mut ident, mut lanczos): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &delta in &[1.5, 2.0, 3.0] {
        for &s in &[0.0, 1.0] {
            // 12 interior rows need a 13th hopping
            let q = littleq_signed(0.1, s, 1.0, delta, 13).unwrap();
            let law = PowerLaw::new(0.1, s, 1.0).unwrap();
            let j = SpectralDensity::LogDiscretised { law, delta };
            let zeta: Vec<f64> = j.star_modes().unwrap().iter().take(12).map(|m| m.0).collect();
            let u = littleq_transform_block(delta, s, 12, 12).unwrap();
            let res = bulla_recursion_check(&u, &zeta, &q.omega, &q.t).unwrap() / q.zeta_s;
            bulla = bulla.max(res);

            for m in 1..12 {
                ident = ident.max((q.c[m] - q.a[m - 1] * q.norm_ratio[m - 1].powi(2)).abs());
            }

            let cp = littleq_chain(0.1, s, 1.0, delta, 26).unwrap();
            let rc = lanczos_measure(&Measure::induced(&j).unwrap(), 27, &opts).unwrap();
            let num = chain_from_coefficients(&rc, 1.0).unwrap();
            let dev = chain_dev(&num, &cp, 26);
            lanczos = lanczos.max(dev);
            println!("  Δ={delta} s={s}: residual/ζ_s {res:.1e}, lanczos rel {dev:.1e}");
        }
    }
    let pass = bulla < 1e-10 && ident < 1e-13 && lanczos < 1e-11;
    report(
        6,
        pass,
        &format!("Bulla residual/ζ_s {bulla:.1e}, C identity {ident:.1e}, lanczos n ≤ 25 rel {lanczos:.1e}"),
    );
    assert!(pass);
}

/// Largest relative deviation from the continuum chain over `n ≤ 10`.
fn continuum_dev(cp: &ChainParameters, s: f64) -> f64 {
    let jac = jacobi_chain(0.1, s, 1.0, 12).unwrap();
    (0..=10)
        .map(|n| rel(cp.omega[n], jac.omega[n]).max(rel(cp.t[n], jac.t[n])))
        .fold(0.0, f64::max)
}

#[test]
fn criterion_7_continuum_limits() {
    let s = 1.0;
    let lq = continuum_dev(&littleq_chain(0.1, s, 1.0, 1.001, 12).unwrap(), s);

    let hahn: Vec<(usize, f64)> =
        [1_000, 10_000, 100_000].iter().map(|&n| (n, continuum_dev(&hahn_chain(0.1, s, 1.0, n, 12).unwrap(), s))).collect();
    let hahn_1e4 = hahn[1].1;
    // O(n/N): a tenfold N cuts the deviation by about ten
    let ratios: Vec<f64> = hahn.windows(2).map(|w| w[0].1 / w[1].1).collect();
    let scaling = ratios.iter().all(|r| (5.0..20.0).contains(r));

    // finite-N tail
    let big_n = 1_000;
    let full = hahn_chain(0.1, s, 1.0, big_n, big_n + 1).unwrap();
    let t_peak = full.t.iter().copied().fold(0.0, f64::max);
    let t_last = *full.t.last().unwrap();
    let diag = tail_diagnostics(&full, 1.0, 1.0).unwrap();
    let smaller = hahn_chain(0.1, s, 1.0, 100, 101).unwrap();
    let tail_shrinks = t_last < *smaller.t.last().unwrap();
    for (n, d) in &hahn {
        println!("  hahn N={n}: max rel dev {d:.3e}, N·dev {:.3}", *n as f64 * d);
    }
    println!(
        "  hahn N={big_n} tail: t_last {t_last:.4e} (peak {t_peak:.4}), ω_last {:.6}, measured, not asserted",
        full.omega.last().unwrap()
    );

    let pass = lq < 5e-3 && hahn_1e4 < 2e-3 && scaling && diag.vanishing_hopping && !diag.converging && tail_shrinks;
    report(
        7,
        pass,
        &format!(
            "little-q Δ=1.001 rel {lq:.2e}; hahn N=1e4 rel {hahn_1e4:.2e}; decade ratios {ratios:.2?}; tail t_N-1 = {t_last:.3e} flagged={}",
            diag.vanishing_hopping
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_oracle_supremacy() {
    let n = 12;
    let opts = DiscretisationOptions::default();
    let mut misses = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for s in 0..=3u32 {
        let exact = gram_schmidt_exact(&power_law_moments(s, 2 * n), n).unwrap();
        let (ea, eb) = (exact.alpha_f64(), exact.beta_f64());
        let m = Measure::power_law(1.0, s as f64, 0.0, 1.0).unwrap();
        for (name, engine) in ENGINES {
            let rc = engine(&m, n, &opts).unwrap();
            for k in 0..n {
                let err = rel(rc.alpha[k], ea[k]).max(rel(rc.beta[k], eb[k]));
                worst_ratio = worst_ratio.max(err / rc.est_error[k]);
                if err > rc.est_error[k] {
                    misses.push(format!("s={s} {name} k={k}: {err:.1e} > {:.1e}", rc.est_error[k]));
                }
            }
        }
    }
    for m in &misses {
        println!("  {m}");
    }

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/derived_values.json");
    let stored = std::fs::read_to_string(path).unwrap();
    let regenerated = fixture::generate("all").unwrap();
    let identical = stored == regenerated;

    let pass = misses.is_empty() && identical;
    report(
        8,
        pass,
        &format!(
            "worst err/est_error {worst_ratio:.2}, {} misses; fixture byte-identical: {identical}",
            misses.len()
        ),
    );
    assert!(pass);
}

fn family_grid() -> Vec<(String, SpectralDensity)> {
    let mut grid = Vec::new();
    for &s in &S_GRID {
        let law = PowerLaw::new(0.1, s, 1.0).unwrap();
        grid.push((format!("hard s={s}"), SpectralDensity::PowerLawHardCutoff(law)));
        grid.push((format!("exp s={s}"), SpectralDensity::PowerLawExpCutoff(law)));
    }
    for &s in &[0.0, 1.0] {
        let law = PowerLaw::new(0.1, s, 1.0).unwrap();
        for &delta in &[1.5, 2.0, 3.0] {
            grid.push((format!("log Δ={delta} s={s}"), SpectralDensity::LogDiscretised { law, delta }));
        }
        grid.push((format!("linear N=40 s={s}"), SpectralDensity::LinearDiscretised { law, n: 40 }));
    }
    let samples = (0..=400).map(|k| k as f64 / 400.0).map(|w| (w, w * (1.0 - w) + 0.1)).collect();
    grid.push(("tabulated".into(), SpectralDensity::Tabulated(TabulatedDensity::new(samples).unwrap())));
    grid
}

/// Structural checks on one set of coefficients; returns the failures.
fn structural(label: &str, m: &Measure, rc: &RecurrenceCoefficients) -> Vec<String> {
    let mut fails = Vec::new();
    if let Some(k) = rc.beta.iter().position(|&b| !(b > 0.0)) {
        fails.push(format!("{label}: beta[{k}] = {}", rc.beta[k]));
    }
    let (a, b) = match m.support() {
        Support::Bounded { a, b } => (a, b),
        Support::HalfLine { a } => (a, f64::INFINITY),
    };
    if let Some(k) = rc.alpha.iter().position(|&x| !(a..=b).contains(&x)) {
        fails.push(format!("{label}: alpha[{k}] = {} outside [{a}, {b}]", rc.alpha[k]));
    }

    // an n-point Gauss rule integrates x^r exactly for r ≤ 2n − 1
    let k = rc.n_terms().min(20);
    let rule = gauss_rule(rc, k).unwrap();
    let mu = m.moments(2 * k);
    for (r, &want) in mu.iter().enumerate() {
        let got: f64 = rule.iter().map(|(x, w)| w * x.powi(r as i32)).sum();
        if rel(got, want) > 1e-10 {
            fails.push(format!("{label}: moment {r} {got:e} vs {want:e}"));
            break;
        }
    }

    if let Support::Bounded { a, b } = m.support() {
        let unit = Interval::new(-1.0, 1.0);
        let there = affine_transform(rc, Interval::new(a, b), unit).unwrap();
        let back = affine_transform(&there, unit, Interval::new(a, b)).unwrap();
        // α lives in [a, b], so its drift is measured against b − a; α_k of a
        // log-discretised bath sit far below that width
        let drift = (0..rc.n_terms())
            .map(|k| ((back.alpha[k] - rc.alpha[k]) / (b - a)).abs().max(rel(back.beta[k], rc.beta[k])))
            .fold(0.0, f64::max);
        if drift > 1e-13 {
            fails.push(format!("{label}: affine round trip drift {drift:e}"));
        }
        // covariance: the engine on the mapped point set agrees with the
        // mapped coefficients. A pure scaling keeps nodes clustered at 0
        // representable, which a shift to −1 would not.
        if let MeasureKind::Discrete { nodes, weights } = m.kind() {
            let scale = 2.0 / (b - a);
            let mapped: Vec<(f64, f64)> = nodes.iter().zip(weights).map(|(x, w)| (scale * x, w * scale)).collect();
            let mm = Measure::discrete(mapped, 1.0).unwrap();
            let target = Interval::new(scale * a, scale * b);
            let there = affine_transform(rc, Interval::new(a, b), target).unwrap();
            let direct = lanczos_measure(&mm, rc.n_terms(), &DiscretisationOptions::default()).unwrap();
            let cov = (0..rc.n_terms())
                .map(|k| rel(direct.alpha[k], there.alpha[k]).max(rel(direct.beta[k], there.beta[k])))
                .fold(0.0, f64::max);
            if cov > 1e-10 {
                fails.push(format!("{label}: affine covariance {cov:e}"));
            }
        }
    }
    fails
}

#[test]
fn criterion_9_structural_invariants() {
    let start = Instant::now();
    let opts = DiscretisationOptions::default();
    let mut fails = Vec::new();
    let mut checked = 0;
    for (label, j) in family_grid() {
        let m = Measure::induced(&j).unwrap();
        let n = m.point_count().map_or(30, |p| p.min(30));
        for (name, engine) in ENGINES {
            if m.is_discrete() && name == "stieltjes" {
                // Stieltjes on a finite point set is the same sum Lanczos does
                continue;
            }
            let rc = engine(&m, n, &opts).unwrap();
            fails.extend(structural(&format!("{label} {name}"), &m, &rc));
            checked += 1;
        }
    }
    let took = start.elapsed();
    for f in &fails {
        println!("  {f}");
    }
    let pass = fails.is_empty() && took < Duration::from_secs(60);
    report(9, pass, &format!("{checked} runs, {} failures, {:.1}s", fails.len(), took.as_secs_f64()));
    assert!(pass);
}
