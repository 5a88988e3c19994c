//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::process::{Command, ExitCode};
use std::time::Instant;

use densecode::linalg::ComplexMatrix;
use densecode::measures;
use densecode::protocols::{self, ControlBasis};
use densecode::states::{isotropic, werner, StateFamily};
use densecode::thresholds::{self, build_region_map, find_dense_coding_threshold, DEFAULT_TOL};

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn samples(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn ac1_werner_threshold() -> Outcome {
    let start = Instant::now();
    let r = find_dense_coding_threshold(&StateFamily::Werner, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let err = (r.p_star - 0.7476).abs();
    check(
        err <= 5e-4 && elapsed < 1.0,
        format!("p* = {:.7} (|Δ| = {err:.1e} ≤ 5e-4), {elapsed:.3}s", r.p_star),
        format!("p* = {:.7}, |Δ| = {err:.1e}, {elapsed:.3}s", r.p_star),
    )
}

fn ac2_qutrit_threshold() -> Outcome {
    let r = find_dense_coding_threshold(&StateFamily::Isotropic { d: 3 }, DEFAULT_TOL)
        .map_err(|e| e.to_string())?;
    let err = (r.p_star - 0.716).abs();
    check(
        err <= 5e-4,
        format!("p* = {:.7} (|Δ| = {err:.1e} ≤ 5e-4)", r.p_star),
        format!("p* = {:.7}, expected 0.716 ± 5e-4, |Δ| = {err:.2e}", r.p_star),
    )
}

fn ac3_steering_bound() -> Outcome {
    let t3 = thresholds::steerability_threshold(3).map_err(|e| e.to_string())?;
    let t2 = thresholds::steerability_threshold(2).map_err(|e| e.to_string())?;
    check(
        (t3 - 0.416667).abs() <= 1e-5 && t2 == 0.5,
        format!("d=3: {t3:.7}, d=2: {t2}"),
        format!("d=3: {t3}, d=2: {t2}"),
    )
}

fn ac4_werner_unsteerable_point() -> Outcome {
    let map = build_region_map(&StateFamily::Werner, 1000).map_err(|e| e.to_string())?;
    let interior: Vec<_> = map.unsteerable_segments().filter(|s| s.interval.lo > 0.0).collect();
    if interior.len() != 1 {
        return Err(format!("{} interior unsteerable segments", interior.len()));
    }
    let seg = interior[0].interval;
    let target = 1.0 / 3f64.sqrt();
    let near_steerable =
        [target - 1e-6, target + 1e-6].iter().all(|&p| map.segment_at(p).is_some_and(|s| s.labels.steerable));
    check(
        seg.is_point() && (seg.lo - 0.5773503).abs() <= 1e-6 && near_steerable,
        format!("unsteerable exactly at {{{:.7}}}", seg.lo),
        format!("unsteerable segment {seg}, neighbours steerable: {near_steerable}"),
    )
}

fn ac5_ordering_claim() -> Outcome {
    let mut notes = Vec::new();
    for family in [StateFamily::Werner, StateFamily::Isotropic { d: 3 }] {
        let mut counterexamples = 0;
        let mut steerable_only = 0;
        for p in samples(1000) {
            let dc = measures::family_capacity(&family, p).map_err(|e| e.to_string())?.dense_codeable;
            let st = measures::is_steerable(&family, p).map_err(|e| e.to_string())?.steerable;
            if dc && !st {
                counterexamples += 1;
            }
            if st && !dc {
                steerable_only += 1;
            }
        }
        if counterexamples > 0 || steerable_only == 0 {
            return Err(format!(
                "{family}: {counterexamples} counterexamples, {steerable_only} steerable-only"
            ));
        }
        notes.push(format!("{family}: 0 counterexamples, {steerable_only} steerable-only"));
    }
    Ok(notes.join("; "))
}

fn ac6_capacity_endpoints() -> Outcome {
    let chi = |family: StateFamily, p: f64| measures::family_capacity(&family, p).map(|r| r.chi);
    let w1 = chi(StateFamily::Werner, 1.0).map_err(|e| e.to_string())?;
    let w0 = chi(StateFamily::Werner, 0.0).map_err(|e| e.to_string())?;
    let i1 = chi(StateFamily::Isotropic { d: 3 }, 1.0).map_err(|e| e.to_string())?;
    check(
        (w1 - 2.0).abs() <= 1e-9 && w0.abs() <= 1e-9 && (i1 - 2.0 * 3f64.log2()).abs() <= 1e-9,
        format!("χ(W1) = {w1:.9}, χ(W0) = {w0:.1e}, χ(I3,1) = {i1:.9}"),
        format!("χ(W1) = {w1}, χ(W0) = {w0}, χ(I3,1) = {i1}"),
    )
}

fn ac7_spectra() -> Outcome {
    let mut worst = 0.0f64;
    for p in samples(50) {
        let w = werner(p).map_err(|e| e.to_string())?.spectrum().map_err(|e| e.to_string())?;
        let mut expected = vec![(1.0 + 3.0 * p) / 4.0];
        expected.extend([(1.0 - p) / 4.0; 3]);
        worst = w.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);

        let q = isotropic(3, p).map_err(|e| e.to_string())?.spectrum().map_err(|e| e.to_string())?;
        let mut expected = vec![p + (1.0 - p) / 9.0];
        expected.extend([(1.0 - p) / 9.0; 8]);
        worst = q.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    check(worst <= 1e-9, format!("max deviation {worst:.1e}"), format!("max deviation {worst:.1e}"))
}

/// Exhaustive enumeration independent of the protocol module: the Werner
/// state is the mixture `p·|ψ−⟩⟨ψ−| + (1−p)/4·Σ_k |B_k⟩⟨B_k|`, every term is
/// a real Bell vector, and Alice's Paulis act on real amplitude arrays.
fn superdense_oracle(p: f64) -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // |00⟩, |01⟩, |10⟩, |11⟩
    let bell = [
        [0.0, h, h, 0.0],  // ψ+
        [0.0, h, -h, 0.0], // ψ−
        [h, 0.0, 0.0, h],  // φ+
        [h, 0.0, 0.0, -h], // φ−
    ];
    let encode = |m: usize, v: [f64; 4]| -> [f64; 4] {
        // Z on Alice for m ∈ {2, 3}, then X on Alice for m ∈ {1, 3}
        let mut v = v;
        if m >= 2 {
            v[2] = -v[2];
            v[3] = -v[3];
        }
        if m % 2 == 1 {
            v = [v[2], v[3], v[0], v[1]];
        }
        v
    };
    let overlap =
        |a: [f64; 4], b: [f64; 4]| -> f64 { a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>().powi(2) };
    // decode table from the noiseless singlet channel
    let mut decode = [usize::MAX; 4];
    for m in 0..4 {
        let e = encode(m, bell[1]);
        let k = (0..4).find(|&k| (overlap(bell[k], e) - 1.0).abs() < 1e-12).unwrap();
        decode[k] = m;
    }
    let mut mixture = vec![(p, bell[1])];
    mixture.extend(bell.iter().map(|&b| ((1.0 - p) / 4.0, b)));
    let mut total = 0.0;
    for m in 0..4 {
        for &(weight, component) in &mixture {
            let e = encode(m, component);
            for k in 0..4 {
                if decode[k] == m {
                    total += weight * overlap(bell[k], e);
                }
            }
        }
    }
    total / 4.0
}

fn ac8_protocols() -> Outcome {
    let mut worst_oracle = 0.0f64;
    let mut worst_formula = 0.0f64;
    for p in samples(20) {
        let got = protocols::superdense_run(&werner(p).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?
            .success_probability;
        worst_oracle = worst_oracle.max((got - superdense_oracle(p)).abs());
        worst_formula = worst_formula.max((got - (1.0 + 3.0 * p) / 4.0).abs());
    }
    let mut worst_sum = 0.0f64;
    let mut worst_c = 0.0f64;
    for i in 1..=20 {
        let theta = FRAC_PI_2 * i as f64 / 21.0;
        let trace =
            protocols::controlled_dense_coding_trace(ControlBasis::new(theta).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let total: f64 = trace.branch_probabilities.iter().flatten().sum();
        worst_sum = worst_sum.max((total - 1.0).abs());
        let state = trace.success_state.ok_or("no success branch")?;
        let c = measures::concurrence(&state).map_err(|e| e.to_string())?;
        worst_c = worst_c.max((c - 1.0).abs());
    }
    check(
        worst_oracle <= 1e-9 && worst_formula <= 1e-9 && worst_sum <= 1e-12 && worst_c <= 1e-9,
        format!(
            "superdense vs oracle {worst_oracle:.1e}, vs (1+3p)/4 {worst_formula:.1e}; branch sum {worst_sum:.1e}; concurrence {worst_c:.1e}"
        ),
        format!(
            "superdense vs oracle {worst_oracle:.1e}, vs (1+3p)/4 {worst_formula:.1e}; branch sum {worst_sum:.1e}; concurrence {worst_c:.1e}"
        ),
    )
}

fn ac9_no_signalling() -> Outcome {
    let marginal = |theta: f64| -> Result<ComplexMatrix, String> {
        let basis = ControlBasis::new(theta).map_err(|e| e.to_string())?;
        Ok(protocols::controlled_dense_coding_trace(basis).map_err(|e| e.to_string())?.bob_marginal)
    };
    let reference = marginal(0.0)?;
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let theta = FRAC_PI_2 * i as f64 / 40.0;
        worst = worst.max(marginal(theta)?.max_abs_diff(&reference));
    }
    check(worst <= 1e-12, format!("max deviation {worst:.1e}"), format!("max deviation {worst:.1e}"))
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_densecode")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

/// First grid point where column `col` switches between two rows.
fn transitions(csv: &str, col: usize) -> Vec<(f64, f64)> {
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    rows.windows(2)
        .filter(|w| w[0][col] != w[1][col])
        .map(|w| (w[0][0].parse().unwrap(), w[1][0].parse().unwrap()))
        .collect()
}

fn ac10_cli_reproduction() -> Outcome {
    let dir = std::env::temp_dir().join(format!("densecode-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let steps = 1000;
    let step = 1.0 / (steps - 1) as f64;
    let mut notes = Vec::new();
    for (name, fam_args) in
        [("werner", vec!["--family", "werner"]), ("isotropic-3", vec!["--family", "isotropic", "--d", "3"])]
    {
        let mut texts = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("{name}-{run}.csv"));
            let mut args = vec!["sweep"];
            args.extend(&fam_args);
            let steps_s = steps.to_string();
            args.extend(["--steps", &steps_s, "--out", path.to_str().unwrap()]);
            cli(&args)?;
            texts.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if texts[0] != texts[1] {
            return Err(format!("{name}: sweeps differ between runs"));
        }
        let csv = String::from_utf8(texts.remove(0)).map_err(|e| e.to_string())?;

        let mut args = vec!["threshold"];
        args.extend(&fam_args);
        let first = cli(&args)?;
        if first != cli(&args)? {
            return Err(format!("{name}: threshold output differs between runs"));
        }
        let t: serde_json::Value = serde_json::from_slice(&first).map_err(|e| e.to_string())?;
        let p_star = t["p_star"].as_f64().ok_or("missing p_star")?;
        let steer = t["steerability_threshold"].as_f64().ok_or("missing steerability_threshold")?;

        let dense = transitions(&csv, 5);
        if dense.len() != 1
            || !(dense[0].0 < p_star && p_star <= dense[0].1 + 1e-12)
            || dense[0].1 - p_star > step
        {
            return Err(format!("{name}: dense transitions {dense:?} vs p* {p_star}"));
        }
        let steering = transitions(&csv, 4);
        let steer_ok = match name {
            // 1/√3 is an isolated point the grid cannot land on; the only
            // grid-visible switch is at p = 0
            "werner" => steering.len() == 1 && steering[0].0 == 0.0 && (steering[0].1 - step).abs() < 1e-9,
            _ => {
                steering.len() == 1
                    && steering[0].0 <= steer
                    && steer < steering[0].1
                    && steering[0].1 - steer <= step
            }
        };
        if !steer_ok {
            return Err(format!("{name}: steering transitions {steering:?} vs {steer}"));
        }
        notes.push(format!("{name}: dense switch in ({:.6}, {:.6}] ∋ {p_star:.6}", dense[0].0, dense[0].1));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(notes.join("; ") + "; byte-identical reruns")
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 werner dense-coding threshold 0.7476 ± 5e-4, < 1 s", ac1_werner_threshold),
        ("AC2 qutrit isotropic dense-coding threshold 0.716 ± 5e-4", ac2_qutrit_threshold),
        ("AC3 isotropic steering bound (H_d-1)/(d-1)", ac3_steering_bound),
        ("AC4 werner unsteerable only at 1/sqrt(3)", ac4_werner_unsteerable_point),
        ("AC5 dense-codeable strictly inside steerable", ac5_ordering_claim),
        ("AC6 capacity endpoints", ac6_capacity_endpoints),
        ("AC7 eigensolver vs closed-form spectra", ac7_spectra),
        ("AC8 protocol statistics", ac8_protocols),
        ("AC9 no-signalling in controlled protocol", ac9_no_signalling),
        ("AC10 CLI sweep/threshold consistency and determinism", ac10_cli_reproduction),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
