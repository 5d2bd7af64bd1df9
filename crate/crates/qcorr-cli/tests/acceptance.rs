//! End-to-end acceptance gate. Each numbered criterion prints one pass/fail
//! line; the process exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use qcorr::coherence::all_measures;
use qcorr::correlated::{c_min, correlated_coherence, CminOptions};
use qcorr::ensemble::{Ensemble, EnsembleMember};
use qcorr::linalg::{c64, CMatrix, CVector, C64};
use qcorr::ops::dephase_alice;
use qcorr::quantifiers::{
    classify, concurrence_2q, d_c_upper_bound, e_l1_pure_closed_form, e_pure,
    e_relent_pure_closed_form, e_upper_bound, entropy_of_entanglement, is_separable_ppt,
    ExtensionSearchOptions, StateClass,
};
use qcorr::sample::{
    ginibre_mixed_full, haar_ket, haar_ket_gapped, haar_unitary, random_probability_vector,
    random_product_basis, random_separable, rng_stream,
};
use qcorr::schmidt::{ket_from_spectrum, schmidt_decompose};
use qcorr::state::{DensityMatrix, Ket};
use qcorr::testbench::{nielsen_pair_sampler, run_suite, werner, werner_product_decomposition};

fn bell_ket() -> Ket {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ket::new(
        CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(s, 0.0)]),
        vec![2, 2],
    )
    .unwrap()
}

fn ab_labels() -> Vec<String> {
    vec!["A".into(), "B".into()]
}

fn budget(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed > limit {
        return Err(format!("took {elapsed:.1?}, budget {limit:.1?}"));
    }
    Ok(())
}

/// 1. Bell closed forms for both measures, under a millisecond.
fn c01_bell_benchmark() -> Result<String, String> {
    let bell = bell_ket();
    let started = Instant::now();
    let l1 = e_pure(all_measures()[0], &bell).map_err(|e| e.to_string())?;
    let re = e_pure(all_measures()[1], &bell).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    for (id, v) in [("l1", l1.value), ("relent", re.value)] {
        if (v - 1.0).abs() > 1e-9 {
            return Err(format!("{id} Bell value {v}"));
        }
    }
    budget(elapsed, Duration::from_millis(1))?;
    Ok(format!("both measures = 1 within 1e-9 in {elapsed:.1?}"))
}

/// 2. Optimizer agrees with the Schmidt-basis value on nondegenerate pure
/// states: 500 draws at 2x2 and 100 at 3x3, both measures, within 1e-6.
fn c02_nondegenerate_pure() -> Result<String, String> {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for (dims, trials, stream) in [([2usize, 2], 500u64, 20u64), ([3, 3], 100, 21)] {
        for t in 0..trials {
            let mut rng = rng_stream(stream, t);
            let psi = haar_ket_gapped(&dims, 1e-3, &mut rng);
            let rho = psi.to_density_default().map_err(|e| e.to_string())?;
            let pair = schmidt_decompose(&psi)
                .and_then(|f| f.local_basis_pair())
                .map_err(|e| e.to_string())?;
            for m in all_measures() {
                let reference = correlated_coherence(m, &rho, &pair).map_err(|e| e.to_string())?;
                let opts = CminOptions {
                    seed: t,
                    ..CminOptions::default()
                };
                let found = c_min(m, &rho, &opts).map_err(|e| e.to_string())?.value;
                let dev = (found - reference).abs();
                worst = worst.max(dev);
                if dev > 1e-6 {
                    return Err(format!(
                        "dims {dims:?} trial {t} {}: |{found} - {reference}| = {dev:.3e}",
                        m.id()
                    ));
                }
            }
        }
    }
    budget(started.elapsed(), Duration::from_secs(60))?;
    Ok(format!("600 states, max deviation {worst:.3e}"))
}

/// 3. Degenerate spectra (incl. maximally entangled 2x2 and 3x3): optimizer
/// matches closed forms within 1e-5 and the perturbation ramp contracts.
fn c03_degenerate_pure() -> Result<String, String> {
    let started = Instant::now();
    for m in all_measures() {
        let report = run_suite("degenerate-schmidt", m, 25, 4242).map_err(|e| e.to_string())?;
        if !report.passed() {
            let first = &report.failures[0];
            return Err(format!(
                "{}: {} failures, first at trial {}: {}",
                m.id(),
                report.failures.len(),
                first.trial,
                first.detail
            ));
        }
    }
    let elapsed = started.elapsed();
    budget(elapsed, Duration::from_secs(60))?;
    Ok(format!("50 constructed states per measure in {elapsed:.1?}"))
}

/// 4. Closed forms against independent oracles on 500 pure 2-qubit states.
fn c04_oracle_equivalence() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for t in 0..500u64 {
        let mut rng = rng_stream(40, t);
        let psi = haar_ket(&[2, 2], &mut rng);
        let schmidt = schmidt_decompose(&psi).map_err(|e| e.to_string())?;
        let conc = concurrence_2q(&psi.to_density_default().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let ent = entropy_of_entanglement(&psi).map_err(|e| e.to_string())?;
        let dev_l1 = (e_l1_pure_closed_form(&schmidt) - conc).abs();
        let dev_re = (e_relent_pure_closed_form(&schmidt) - ent).abs();
        worst = worst.max(dev_l1).max(dev_re);
        if dev_l1 > 1e-8 || dev_re > 1e-8 {
            return Err(format!("trial {t}: l1 dev {dev_l1:.3e}, relent dev {dev_re:.3e}"));
        }
    }
    Ok(format!("500 states, max deviation {worst:.3e}"))
}

/// 5. Faithfulness: separable states certify to zero, entangled pure states
/// stay positive, and the Werner family pins the PPT boundary at p = 1/3.
fn c05_faithfulness() -> Result<String, String> {
    let trimmed = ExtensionSearchOptions {
        restarts: 2,
        max_iters: 200,
        ..ExtensionSearchOptions::default()
    };
    for t in 0..200u64 {
        let mut rng = rng_stream(50, t);
        let ens = random_separable(2, 2, 3, &mut rng).map_err(|e| e.to_string())?;
        let rho = ens.mixture(ab_labels()).map_err(|e| e.to_string())?;
        let m = all_measures()[(t % 2) as usize];
        let report = e_upper_bound(m, &rho, &trimmed, Some(&ens)).map_err(|e| e.to_string())?;
        if report.value.abs() > 1e-8 || report.kind.as_str() != "exact" {
            return Err(format!(
                "separable trial {t}: value {} kind {}",
                report.value,
                report.kind.as_str()
            ));
        }
    }
    for t in 0..200u64 {
        let mut rng = rng_stream(51, t);
        let psi = loop {
            let candidate = haar_ket(&[2, 2], &mut rng);
            let rho = candidate.to_density_default().map_err(|e| e.to_string())?;
            if concurrence_2q(&rho).map_err(|e| e.to_string())? > 0.05 {
                break candidate;
            }
        };
        for m in all_measures() {
            let v = e_pure(m, &psi).map_err(|e| e.to_string())?.value;
            if v <= 1e-3 {
                return Err(format!("entangled trial {t}: {} value {v}", m.id()));
            }
        }
    }
    let mut grid: Vec<f64> = (0..=20).map(|k| 0.05 * k as f64).collect();
    grid.push(1.0 / 3.0);
    for &p in &grid {
        let rho = werner(p).map_err(|e| e.to_string())?;
        let separable = is_separable_ppt(&rho).map_err(|e| e.to_string())?;
        if separable != (p <= 1.0 / 3.0 + 1e-12) {
            return Err(format!("werner p = {p}: ppt verdict {separable}"));
        }
        if separable {
            let dec = werner_product_decomposition(p).map_err(|e| e.to_string())?;
            let residual = dec
                .reconstruction_residual(&rho)
                .map_err(|e| e.to_string())?;
            if residual > 1e-7 {
                return Err(format!("werner p = {p}: residual {residual:.3e}"));
            }
            for m in all_measures() {
                let report =
                    e_upper_bound(m, &rho, &trimmed, Some(&dec)).map_err(|e| e.to_string())?;
                if report.value.abs() > 1e-8 {
                    return Err(format!(
                        "werner p = {p} {}: certified value {}",
                        m.id(),
                        report.value
                    ));
                }
            }
        }
    }
    Ok("200 separable zeros, 200 entangled positives, werner boundary at 1/3".into())
}

/// 6. LOCC monotonicity on the Nielsen slice: 1000 majorization pairs,
/// dims 2 and 3, both measures, zero violations.
fn c06_monotonicity() -> Result<String, String> {
    let started = Instant::now();
    for (dim, stream) in [(2usize, 60u64), (3, 61)] {
        for t in 0..500u64 {
            let pair = nielsen_pair_sampler(dim, stream * 100_000 + t).map_err(|e| e.to_string())?;
            let source = ket_from_spectrum(&pair.source).map_err(|e| e.to_string())?;
            let target = ket_from_spectrum(&pair.target).map_err(|e| e.to_string())?;
            for m in all_measures() {
                let before = e_pure(m, &source).map_err(|e| e.to_string())?.value;
                let after = e_pure(m, &target).map_err(|e| e.to_string())?.value;
                if after > before + 1e-8 {
                    return Err(format!(
                        "dim {dim} trial {t} {}: {before} -> {after}",
                        m.id()
                    ));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    budget(elapsed, Duration::from_secs(30))?;
    Ok(format!("1000 pairs, zero violations in {elapsed:.1?}"))
}

/// 7. Convexity: ensemble averages dominate the mixture bound, and the raw
/// measures are convex on state mixtures; zero violations at 1e-6.
fn c07_convexity() -> Result<String, String> {
    for t in 0..500u64 {
        let mut rng = rng_stream(70, t);
        let m = all_measures()[(t % 2) as usize];
        let a = haar_ket(&[2, 2], &mut rng);
        let b = haar_ket(&[2, 2], &mut rng);
        let w = 0.05 + 0.9 * (t as f64 / 500.0);
        let ens = Ensemble::new(
            vec![w, 1.0 - w],
            vec![
                EnsembleMember::Pure(a.clone()),
                EnsembleMember::Pure(b.clone()),
            ],
        )
        .map_err(|e| e.to_string())?;
        let rho = ens.mixture(ab_labels()).map_err(|e| e.to_string())?;
        let average = w * e_pure(m, &a).map_err(|e| e.to_string())?.value
            + (1.0 - w) * e_pure(m, &b).map_err(|e| e.to_string())?.value;
        let opts = ExtensionSearchOptions {
            max_ancilla_dim: 2,
            restarts: 4,
            max_iters: 300,
            seed: t,
            warm_starts: vec![ens],
            ..ExtensionSearchOptions::default()
        };
        let bound = e_upper_bound(m, &rho, &opts, None)
            .map_err(|e| e.to_string())?
            .value;
        if bound > average + 1e-6 {
            return Err(format!("ensemble trial {t}: bound {bound} > average {average}"));
        }
    }
    for t in 0..500u64 {
        let mut rng = rng_stream(71, t);
        let m = all_measures()[(t % 2) as usize];
        let a = ginibre_mixed_full(&[2, 2], &mut rng).map_err(|e| e.to_string())?;
        let b = ginibre_mixed_full(&[2, 2], &mut rng).map_err(|e| e.to_string())?;
        let lambda = 0.05 + 0.9 * (t as f64 / 500.0);
        let mix = DensityMatrix::new(
            a.data() * C64::from(lambda) + b.data() * C64::from(1.0 - lambda),
            vec![2, 2],
            ab_labels(),
        )
        .map_err(|e| e.to_string())?;
        let basis = random_product_basis(2, 2, &mut rng).composite();
        let lhs = m.evaluate(&mix, &basis).map_err(|e| e.to_string())?;
        let rhs = lambda * m.evaluate(&a, &basis).map_err(|e| e.to_string())?
            + (1.0 - lambda) * m.evaluate(&b, &basis).map_err(|e| e.to_string())?;
        if lhs > rhs + 1e-6 {
            return Err(format!("mixture trial {t}: {lhs} > {rhs}"));
        }
    }
    Ok("500 ensembles + 500 mixtures, zero violations".into())
}

fn random_cc_state(t: u64) -> Result<DensityMatrix, String> {
    let mut rng = rng_stream(80, t);
    let pair = random_product_basis(2, 2, &mut rng);
    let weights = random_probability_vector(4, &mut rng);
    let b = pair.composite();
    let mut diag = CMatrix::zeros(4, 4);
    for (k, &w) in weights.iter().enumerate() {
        diag[(k, k)] = c64(w, 0.0);
    }
    let data = &b * diag * b.adjoint();
    DensityMatrix::new(data, vec![2, 2], ab_labels()).map_err(|e| e.to_string())
}

fn random_cq_not_cc_state(t: u64) -> Result<DensityMatrix, String> {
    let mut rng = rng_stream(81, t);
    let alice = haar_unitary(2, &mut rng);
    let (b0, b1) = loop {
        let x = haar_ket(&[2], &mut rng);
        let y = haar_ket(&[2], &mut rng);
        let overlap = x.amplitudes().dotc(y.amplitudes()).norm();
        if (0.3..=0.7).contains(&overlap) {
            break (x, y);
        }
    };
    let p = 0.55 + 0.2 * ((t % 100) as f64 / 100.0);
    let mut members = Vec::new();
    for (i, bob) in [&b0, &b1].into_iter().enumerate() {
        let mut amps = CVector::zeros(4);
        for a in 0..2 {
            for j in 0..2 {
                amps[a * 2 + j] = alice[(a, i)] * bob.amplitudes()[j];
            }
        }
        members.push(EnsembleMember::Pure(
            Ket::new(amps, vec![2, 2]).map_err(|e| e.to_string())?,
        ));
    }
    Ensemble::new(vec![p, 1.0 - p], members)
        .and_then(|e| e.mixture(ab_labels()))
        .map_err(|e| e.to_string())
}

/// 8. Classifier: 100 CC, 100 CQ-not-CC, 100 entangled states, all labeled
/// correctly, with witnesses replaying to the reported residuals.
fn c08_classifier() -> Result<String, String> {
    for t in 0..100u64 {
        let rho = random_cc_state(t)?;
        let (class, cc, _) = classify(&rho, 1e-8).map_err(|e| e.to_string())?;
        if class != StateClass::ClassicalClassical {
            return Err(format!("cc trial {t}: labeled {}", class.as_str()));
        }
        let replay = correlated_coherence(all_measures()[0], &rho, &cc.witness)
            .map_err(|e| e.to_string())?;
        if (replay - cc.c_min_value).abs() > 1e-10 {
            return Err(format!(
                "cc trial {t}: witness replays to {replay}, reported {}",
                cc.c_min_value
            ));
        }
    }
    for t in 0..100u64 {
        let rho = random_cq_not_cc_state(t)?;
        let (class, _, cq) = classify(&rho, 1e-8).map_err(|e| e.to_string())?;
        if class != StateClass::ClassicalQuantum {
            return Err(format!("cq trial {t}: labeled {}", class.as_str()));
        }
        let dephased = dephase_alice(&rho, &cq.witness_basis).map_err(|e| e.to_string())?;
        if (dephased.max_abs_diff(&rho) - cq.residual).abs() > 1e-12 {
            return Err(format!("cq trial {t}: witness does not replay"));
        }
    }
    for t in 0..100u64 {
        let mut rng = rng_stream(82, t);
        let rho = loop {
            let psi = haar_ket(&[2, 2], &mut rng);
            let rho = psi.to_density_default().map_err(|e| e.to_string())?;
            if concurrence_2q(&rho).map_err(|e| e.to_string())? > 0.05 {
                break rho;
            }
        };
        let (class, _, _) = classify(&rho, 1e-8).map_err(|e| e.to_string())?;
        if class != StateClass::Neither {
            return Err(format!("entangled trial {t}: labeled {}", class.as_str()));
        }
    }
    Ok("300/300 labels correct, witnesses replay".into())
}

/// 9. The three quantifiers coincide on pure states, pairwise within 1e-8.
fn c09_pure_convergence() -> Result<String, String> {
    let opts = ExtensionSearchOptions::default();
    for t in 0..100u64 {
        let mut rng = rng_stream(90, t);
        let dims = if t % 2 == 0 { [2usize, 2] } else { [2, 3] };
        let psi = haar_ket_gapped(&dims, 1e-3, &mut rng);
        let rho = psi.to_density_default().map_err(|e| e.to_string())?;
        for m in all_measures() {
            let e = e_pure(m, &psi).map_err(|e| e.to_string())?.value;
            let d = d_c_upper_bound(m, &rho, &opts, None)
                .map_err(|e| e.to_string())?
                .value;
            let cmin_opts = CminOptions {
                seed: t,
                ..CminOptions::default()
            };
            let c = c_min(m, &rho, &cmin_opts).map_err(|e| e.to_string())?.value;
            let spread = (e - d).abs().max((e - c).abs()).max((d - c).abs());
            if spread > 1e-8 {
                return Err(format!(
                    "trial {t} {}: e {e}, d {d}, c {c} (spread {spread:.3e})",
                    m.id()
                ));
            }
        }
    }
    Ok("100 states, all pairwise gaps within 1e-8".into())
}

/// 10. The validate command is deterministic: two runs at seed 42 emit
/// byte-identical JSON reports.
fn c10_determinism() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_qcorr");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = Command::new(bin)
            .args(["validate", "--seed", "42"])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "validate exited with {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        outputs.push(out.stdout);
    }
    if outputs[0] != outputs[1] {
        return Err("reports differ between runs".into());
    }
    if outputs[0].is_empty() {
        return Err("validate emitted no report".into());
    }
    Ok(format!("two runs, {} identical bytes", outputs[0].len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Result<String, String>)> = vec![
        ("bell benchmark", c01_bell_benchmark),
        ("nondegenerate pure optimizer", c02_nondegenerate_pure),
        ("degenerate pure optimizer", c03_degenerate_pure),
        ("oracle equivalence", c04_oracle_equivalence),
        ("faithfulness", c05_faithfulness),
        ("locc monotonicity", c06_monotonicity),
        ("convexity", c07_convexity),
        ("classifier accuracy", c08_classifier),
        ("pure-state convergence", c09_pure_convergence),
        ("validate determinism", c10_determinism),
    ];
    let mut failures = 0usize;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        match run() {
            Ok(detail) => println!(
                "criterion {:02} {name}: pass [{detail}] ({:.1?})",
                k + 1,
                started.elapsed()
            ),
            Err(why) => {
                failures += 1;
                println!("criterion {:02} {name}: FAIL [{why}]", k + 1);
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all {} criteria pass", criteria.len());
}
