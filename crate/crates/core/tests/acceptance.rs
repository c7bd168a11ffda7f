//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quantcap::capacity::{
    blahut_arimoto_constrained, blahut_arimoto_traced, channel_matrix, high_snr_capacity,
    rate_curve, BaOptions, CapacityResult, ChannelMatrix, ChannelSpec, OutputLabeling,
    RateCurveParams, RateRow,
};
use quantcap::code::{
    construct_code, search_max_code, synthesize_quantizer, synthesize_quantizer_theorem1,
    validate_properties, Code, TransitionSpec,
};
use quantcap::commands::{example_report, golden_quantizer};
use quantcap::polynomial::{RealPolynomial, RootList};
use quantcap::quantizer::Quantizer;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---- oracles ----

/// Standard normal lower tail by composite Simpson quadrature of the density.
fn phi_oracle(z: f64) -> f64 {
    let (a, n) = (-40.0, 200_000);
    let h = (z - a) / n as f64;
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(a) + pdf(z);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * pdf(x);
    }
    s * h / 3.0
}

fn binary_entropy(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

fn gamma_even_oracle(n_q: usize, delta: usize) -> usize {
    (1usize << n_q).min(delta * n_q)
}

fn power_ok(r: &CapacityResult, power: f64) -> bool {
    r.average_power() <= power + 1e-9 * power.max(1.0)
}

// ---- criteria ----

fn golden() -> Outcome {
    let t0 = Instant::now();
    let report = match example_report() {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let assoc = golden_quantizer().associated_code().unwrap();
    let elapsed = t0.elapsed();
    let want = [-6.0, -5.0, -3.0, -2.0, 0.0, 1.0, 2.0, 3.0];
    let got = assoc.boundaries.as_slice();
    let roots_ok = got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 1e-8);
    let code_ok = assoc.code.to_string() == "22,21,20,10,00,10,20,21,22";
    let size_ok = assoc.code_size() == 5;
    outcome(
        roots_ok && code_ok && size_ok && report.passed() && elapsed < Duration::from_secs(1),
        format!("roots {got:?}, code {}, |C| {}, {elapsed:.2?}", assoc.code, assoc.code_size()),
    )
}

fn prop1() -> Outcome {
    let mut bad = Vec::new();
    for n_q in [2usize, 3, 4, 6, 8] {
        let roots = RootList::new((0..2 * n_q).map(|i| 1.3 * i as f64 - 4.0).collect());
        let q = synthesize_quantizer_theorem1(&roots).unwrap();
        let code = q.associated_code().unwrap();
        let want_bits = 1.0 + (n_q as f64).log2();
        let bits = high_snr_capacity(n_q, 2, 2).exact_bits();
        let size_bits = (code.code_size() as f64).log2();
        if code.code_size() != 2 * n_q
            || bits.is_none_or(|b| (b - want_bits).abs() > 1e-12)
            || (size_bits - want_bits).abs() > 1e-12
        {
            bad.push(format!("n_q={n_q}: |C|={} bits={bits:?}", code.code_size()));
        }
        if n_q == 3 {
            // quoted sequence lists position n_q first
            let quoted = ["000", "001", "011", "111", "110", "100", "000"];
            let reversed: Vec<String> = quoted.iter().map(|w| w.chars().rev().collect()).collect();
            let got: Vec<String> = code.code.codewords().iter().map(|w| w.to_string()).collect();
            if got != reversed {
                bad.push(format!("n_q=3 code {}", code.code));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "n_q in {2,3,4,6,8}".into() } else { bad.join("; ") })
}

fn search_even() -> Outcome {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for delta in [2usize, 4] {
        for n_q in 1..=4usize {
            if delta * n_q > 16 {
                continue;
            }
            cases += 1;
            let s = search_max_code(n_q, 2, delta).unwrap();
            if s.gamma != gamma_even_oracle(n_q, delta) {
                bad.push(format!("({n_q},2,{delta}): {}", s.gamma));
            }
        }
    }
    let elapsed = t0.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(60),
        format!("{cases} cases, {elapsed:.2?} {}", bad.join("; ")),
    )
}

fn search_odd() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for delta in [1usize, 3] {
        for n_q in 1..=4usize {
            cases += 1;
            let lo = gamma_even_oracle(n_q, delta);
            let hi = (1usize << n_q).min(delta * n_q + 1);
            let s = search_max_code(n_q, 2, delta).unwrap();
            if s.gamma < lo || s.gamma > hi {
                bad.push(format!("({n_q},2,{delta}): {} not in [{lo},{hi}]", s.gamma));
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} cases {}", bad.join("; ")))
}

fn random_spec(rng: &mut ChaCha8Rng) -> TransitionSpec {
    let n_q = rng.gen_range(1..=5);
    let base = 2 * rng.gen_range(0..=2);
    let kappas = (0..n_q)
        .map(|_| if base < 6 && rng.gen_bool(0.5) { base + 2 } else { base })
        .collect();
    TransitionSpec::binary(kappas)
}

fn random_increasing(rng: &mut ChaCha8Rng, n: usize) -> RootList {
    let mut x = rng.gen_range(-5.0..0.0);
    let v = (0..n)
        .map(|_| {
            x += rng.gen_range(0.05..2.0);
            x
        })
        .collect();
    RootList::new(v)
}

fn roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let spec = random_spec(&mut rng);
        let code = match construct_code(&spec) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{:?}: {e}", spec.kappas));
                continue;
            }
        };
        let roots = random_increasing(&mut rng, code.len() - 1);
        let back = synthesize_quantizer(&code, &roots).and_then(|q| q.associated_code());
        match back {
            Ok(a) if a.code == code => {}
            Ok(a) => failures.push(format!("{:?}: {} != {}", spec.kappas, a.code, code)),
            Err(e) => failures.push(format!("{:?}: {e}", spec.kappas)),
        }
    }
    outcome(failures.is_empty(), format!("100 specs, {} failures {}", failures.len(), failures.join("; ")))
}

fn ba_oracle(results: &mut Vec<(CapacityResult, f64)>) -> Outcome {
    let spec = ChannelSpec::new(1.0, 1.0);
    let inputs = [-1.0, 1.0];
    let w = channel_matrix(&spec, &inputs, &RootList::new(vec![0.0]), &OutputLabeling::separate(2)).unwrap();
    let r = blahut_arimoto_constrained(&w, &inputs, 1.0, &BaOptions::default()).unwrap();
    let want = 1.0 - binary_entropy(phi_oracle(-1.0));
    let err = (r.rate_bits - want).abs();
    let pass = err <= 1e-4;
    results.push((r, 1.0));
    outcome(pass, format!("rate {:.10}, oracle {want:.10}, |err| {err:.2e}", results[0].0.rate_bits))
}

const CURVES: [(usize, usize, usize); 4] = [(1, 2, 1), (1, 2, 2), (3, 2, 1), (3, 2, 2)];

fn curves(results: &mut Vec<(CapacityResult, f64)>) -> Vec<Outcome> {
    let t0 = Instant::now();
    let snrs: Vec<f64> = (0..=15).map(|k| 2.0 * k as f64).collect();
    let sets: Vec<Vec<RateRow>> = CURVES
        .iter()
        .map(|&(n, l, d)| rate_curve(&RateCurveParams::new(n, l, d, snrs.clone())).unwrap())
        .collect();
    let at40: Vec<Vec<RateRow>> = [(1, 2, 2), (2, 2, 2)]
        .iter()
        .map(|&(n, l, d)| rate_curve(&RateCurveParams::new(n, l, d, vec![40.0])).unwrap())
        .collect();
    let elapsed = t0.elapsed();

    for row in sets.iter().chain(&at40).flatten() {
        let p = ChannelSpec::from_snr_db(1.0, row.snr_db).power;
        results.push((row.lower.clone(), p));
        results.push((row.upper.clone(), p));
    }

    // (a) certified non-decrease: rate[k+1] + gap[k+1] >= rate[k] - 1e-7
    let mut worst_dip: f64 = 0.0;
    let mut a_ok = true;
    for rows in &sets {
        for upper in [false, true] {
            for w in rows.windows(2) {
                let (r0, r1) = if upper { (&w[0].upper, &w[1].upper) } else { (&w[0].lower, &w[1].lower) };
                worst_dip = worst_dip.max(r0.rate_bits - r1.rate_bits);
                if r1.rate_bits + r1.gap_bits < r0.rate_bits - 1e-7 || !r1.converged {
                    a_ok = false;
                }
            }
        }
    }

    // (b) upper curves of (1,2,1) and (1,2,2)
    let b_diff = sets[0]
        .iter()
        .zip(&sets[1])
        .map(|(x, y)| (x.upper.rate_bits - y.upper.rate_bits).abs())
        .fold(0.0, f64::max);

    // (c) at 30 dB
    let r322 = sets[3].last().unwrap().upper.rate_bits;
    let r321 = sets[2].last().unwrap().upper.rate_bits;

    // (d) at 40 dB
    let d_errs: Vec<f64> = at40
        .iter()
        .zip([2.0f64, 4.0])
        .map(|(rows, g)| (rows[0].upper.rate_bits - g.log2()).abs())
        .collect();
    let d_gammas: Vec<u64> = at40.iter().map(|r| r[0].gamma_upper).collect();

    vec![
        outcome(a_ok, format!("largest raw dip {worst_dip:.2e} bits")),
        outcome(b_diff <= 1e-6, format!("max |diff| {b_diff:.2e}")),
        outcome(r322 - r321 >= 0.2, format!("(3,2,2) {r322:.6} vs (3,2,1) upper {r321:.6}")),
        outcome(
            d_gammas == [2, 4] && d_errs.iter().all(|&e| e <= 0.05),
            format!("gamma {d_gammas:?}, |rate - log2 gamma| {d_errs:?}"),
        ),
        outcome(elapsed < Duration::from_secs(600), format!("{elapsed:.2?}")),
    ]
}

fn random_channel(rng: &mut ChaCha8Rng) -> (ChannelMatrix, Vec<f64>, f64) {
    let n_in = rng.gen_range(2..=8);
    let n_out = rng.gen_range(2..=6);
    let rows = (0..n_in)
        .map(|_| {
            let v: Vec<f64> = (0..n_out).map(|_| rng.gen_range(0.0..1.0f64).powi(3)).collect();
            let s: f64 = v.iter().sum();
            v.iter().map(|x| x / s).collect()
        })
        .collect();
    let inputs: Vec<f64> = (0..n_in).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let min_cost = inputs.iter().map(|x| x * x).fold(f64::INFINITY, f64::min);
    let power = min_cost + rng.gen_range(0.1..4.0);
    (ChannelMatrix::from_rows(rows).unwrap(), inputs, power)
}

fn row_sums() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0081);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let spec = ChannelSpec::from_snr_db(rng.gen_range(0.1..3.0), rng.gen_range(-10.0..40.0));
        let a = spec.amplitude() * spec.h;
        let inputs: Vec<f64> = (0..rng.gen_range(1..20)).map(|_| rng.gen_range(-5.0..5.0) * a).collect();
        let n_t = rng.gen_range(1..8);
        let t = random_increasing(&mut rng, n_t);
        let labeling = if rng.gen_bool(0.5) {
            OutputLabeling::separate(n_t + 1)
        } else {
            OutputLabeling::merged_ends(n_t + 1)
        };
        let w = channel_matrix(&spec, &inputs, &t, &labeling).unwrap();
        for row in w.rows() {
            worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
        }
    }
    outcome(worst <= 1e-12, format!("200 matrices, worst |row sum - 1| {worst:.2e}"))
}

fn ba_monotone(results: &mut Vec<(CapacityResult, f64)>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0082);
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (w, inputs, power) = random_channel(&mut rng);
        let (r, trace) = blahut_arimoto_traced(&w, &inputs, power, &BaOptions::default()).unwrap();
        let dip = trace.windows(2).map(|t| t[0] - t[1]).fold(0.0, f64::max);
        worst = worst.max(dip);
        // float round-off only
        if dip > 1e-12 {
            bad += 1;
        }
        results.push((r, power));
    }
    outcome(bad == 0, format!("50 channels, {bad} non-monotone, largest decrease {worst:.2e}"))
}

fn power(results: &[(CapacityResult, f64)]) -> Outcome {
    let bad = results.iter().filter(|(r, p)| !power_ok(r, *p)).count();
    let worst = results
        .iter()
        .map(|(r, p)| (r.average_power() - p) / p.max(1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    outcome(bad == 0, format!("{} results, worst excess {worst:.2e}", results.len()))
}

/// Polynomial of degree `d` whose level sets at every `|t| < m` have `d`
/// real roots; returns it with `m`.
fn full_root_poly(rng: &mut ChaCha8Rng, d: usize) -> (RealPolynomial, f64) {
    if d == 1 {
        let p = RealPolynomial::new(vec![rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0)]);
        return (p, f64::INFINITY);
    }
    let roots = random_increasing(rng, d);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let p = RealPolynomial::from_roots(&roots, sign);
    // smallest |f| at a critical point between consecutive roots, sampled finely
    let r = roots.as_slice();
    let m = r
        .windows(2)
        .map(|w| {
            (1..400)
                .map(|k| p.eval(w[0] + (w[1] - w[0]) * k as f64 / 400.0).abs())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    (p, m)
}

fn expected_changes(code: &Code, j: usize) -> usize {
    code.codewords().windows(2).filter(|w| w[0].as_slice()[j] != w[1].as_slice()[j]).count()
}

fn prop2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0084);
    let mut bad = Vec::new();
    for case in 0..200 {
        let ell = rng.gen_range(2..=3);
        let delta = rng.gen_range(1..=4);
        let n_q = rng.gen_range(1..=3);
        let mut polys = Vec::new();
        let mut rows = Vec::new();
        for _ in 0..n_q {
            let (p, m) = full_root_poly(&mut rng, delta);
            let m = m.min(10.0) * 0.9;
            let mut t: Vec<f64> = (0..ell - 1).map(|_| rng.gen_range(-m..m)).collect();
            t.sort_by(f64::total_cmp);
            polys.push(p);
            rows.push(t);
        }
        let q = Quantizer::new(ell, delta, polys, rows).unwrap();
        let a = q.associated_code().unwrap();
        let words = a.code.codewords();
        let top = (ell - 1) as u8;
        let item2 = words[0].as_slice().iter().all(|&c| c == 0 || c == top);
        let item3 = words.windows(2).all(|w| w[0].l1_distance(&w[1]) == 1);
        let item4 = (0..n_q).all(|j| expected_changes(&a.code, j) == (ell - 1) * delta);
        let rep = validate_properties(&a.code, ell, delta, n_q);
        let agree = rep.item2.pass == item2 && rep.item3.pass == item3 && rep.item4.pass == item4;
        if !(item2 && item3 && item4 && agree) {
            bad.push(format!("case {case} ({n_q},{ell},{delta}) code {}", a.code));
        }
    }
    outcome(bad.is_empty(), format!("200 quantizers, {} failures {}", bad.len(), bad.join("; ")))
}

fn main() {
    let mut results = Vec::new();
    let mut lines: Vec<(&str, Outcome)> = vec![
        ("1 golden example", golden()),
        ("2 quadratic construction", prop1()),
        ("3 search vs even-degree formula", search_even()),
        ("4 search within odd-degree bounds", search_odd()),
        ("5 construct/synthesize roundtrip", roundtrip()),
        ("6 BA binary oracle", ba_oracle(&mut results)),
    ];
    let names7 = [
        "7a curves non-decreasing",
        "7b (1,2,1) and (1,2,2) identical",
        "7c (3,2,2) beats (3,2,1) at 30 dB",
        "7d 40 dB rates near log2 gamma",
        "7 curve set runtime",
    ];
    for (name, o) in names7.into_iter().zip(curves(&mut results)) {
        lines.push((name, o));
    }
    lines.push(("8 channel row sums", row_sums()));
    lines.push(("8 BA per-iteration monotonicity", ba_monotone(&mut results)));
    lines.push(("8 power constraint", power(&results)));
    lines.push(("8 code items 2-4 on full-root quantizers", prop2()));

    let mut failed = 0;
    for (name, o) in &lines {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
