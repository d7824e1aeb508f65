//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary
//! (`harness = false`) so the lines are always printed; exits non-zero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use holder_bounds::bounds::{bound_report, cs_identity_report, maxmin_bound};
use holder_bounds::cli::run;
use holder_bounds::family::{
    derivative_at_zero, family_functions, fd_derivative_at_zero, find_violation_t, gap_pair, validate_params,
};
use holder_bounds::search::{corpus_instance, trial_rng, Instance, SearchResult};
use holder_bounds::transforms::transformed_holder_bound;
use holder_bounds::{DiscreteMeasure, ExponentPair, SampledFunction, TransformSpec};
use rand::Rng;

const CORPUS_SEED: u64 = 20_240_601;
const CORPUS_SIZE: u64 = 10_000;

type Suite = fn() -> Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    outcome: Result<String, String>,
    elapsed: Duration,
}

fn corpus() -> Vec<(DiscreteMeasure, SampledFunction, SampledFunction)> {
    (0..CORPUS_SIZE)
        .map(|i| corpus_instance(CORPUS_SEED, i, 2..=64, 0.0, 10.0).to_parts().unwrap())
        .collect()
}

fn within(value: f64, bound: f64, rel: f64) -> bool {
    value <= bound + rel * (1.0 + bound)
}

/// 1. Improvement identity is exact to 1e-12 relative; at most 5 s.
fn identity_suite() -> Result<String, String> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for (mu, f, g) in corpus() {
        let r = cs_identity_report(&mu, &f, &g).map_err(|e| e.to_string())?;
        let rel = r.relative_residual();
        worst = worst.max(rel);
        if rel > 1e-12 {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if failures > 0 {
        return Err(format!("{failures} instances above 1e-12 (worst {worst:e})"));
    }
    if secs > 5.0 {
        return Err(format!("took {secs:.2} s > 5 s"));
    }
    Ok(format!("worst relative residual {worst:e} over {CORPUS_SIZE} instances in {secs:.2} s"))
}

fn random_compositions() -> [TransformSpec; 2] {
    let mut rng = trial_rng(CORPUS_SEED, u64::MAX);
    let mut make = || {
        let len = rng.gen_range(2..=4);
        let parts = (0..len)
            .map(|_| match rng.gen_range(0..3) {
                0 => TransformSpec::Scale(rng.gen_range(0.1..10.0)),
                1 => TransformSpec::Swap,
                _ => TransformSpec::MaxMin,
            })
            .collect();
        TransformSpec::compose(parts).unwrap()
    };
    [make(), make()]
}

/// 2. μ(fg) lies below every bound, within 1e-9 (1 + bound).
fn ordering_suite() -> Result<String, String> {
    let [c1, c2] = random_compositions();
    let transforms = [TransformSpec::Scale(0.5), TransformSpec::Swap, TransformSpec::MaxMin, c1, c2];
    let mut rng = trial_rng(CORPUS_SEED, u64::MAX - 1);
    let mut checks = 0u64;
    let mut failures = Vec::new();
    for (i, (mu, f, g)) in corpus().into_iter().enumerate() {
        let exponents = [1.5, 2.0, 3.0, rng.gen_range(1.01..10.0)];
        for p in exponents {
            let e = ExponentPair::new(p).unwrap();
            let r = bound_report(&mu, &f, &g, e).map_err(|e| e.to_string())?;
            let mut bounds = vec![("holder".to_string(), r.holder), ("b_p".into(), r.b_p), ("b_q".into(), r.b_q)];
            for t in &transforms {
                let b = transformed_holder_bound(&mu, &f, &g, e, t).map_err(|e| e.to_string())?;
                bounds.push((t.to_string(), b));
            }
            for (name, b) in bounds {
                checks += 1;
                if !within(r.mu_fg, b, 1e-9) && failures.len() < 5 {
                    failures.push(format!("instance {i} p={p} {name}: {} > {b}", r.mu_fg));
                }
            }
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    Ok(format!(
        "{checks} comparisons, compositions {} and {}",
        transforms[3], transforms[4]
    ))
}

/// 3. B_2² ≤ μ(a)μ(b) and 0 ≤ improvement ≤ μ(1)² sup|a-b|².
fn p2_improvement_suite() -> Result<String, String> {
    let e = ExponentPair::new(2.0).unwrap();
    let mut failures = Vec::new();
    let mut max_ratio = 0.0f64;
    for (i, (mu, f, g)) in corpus().into_iter().enumerate() {
        let r = cs_identity_report(&mu, &f, &g).map_err(|e| e.to_string())?;
        let b2 = maxmin_bound(&mu, &f, &g, e).map_err(|e| e.to_string())?;
        let ok_cs = b2 * b2 <= r.lhs + 1e-12 * (1.0 + r.lhs);
        let ok_eps = r.improvement >= 0.0 && within(r.improvement, r.eps_bound, 1e-12);
        if r.eps_bound > 0.0 {
            max_ratio = max_ratio.max(r.improvement / r.eps_bound);
        }
        if !(ok_cs && ok_eps) && failures.len() < 5 {
            failures.push(format!("instance {i}: B2^2 = {}, lhs = {}, improvement = {}, eps = {}", b2 * b2, r.lhs, r.improvement, r.eps_bound));
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    Ok(format!("max improvement / eps bound = {max_ratio:.3e}"))
}

/// 4. Closed-form gaps agree with direct evaluation within 1e-12 (1 + holder).
fn closed_form_suite() -> Result<String, String> {
    let mut rng = trial_rng(CORPUS_SEED, u64::MAX - 2);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..1000 {
        let (p, w) = if rng.gen_bool(0.5) {
            (rng.gen_range(1.02..1.98), rng.gen_range(0.02..0.98))
        } else {
            (rng.gen_range(2.02..10.0), rng.gen_range(1.02..5.0))
        };
        let m = rng.gen_range(0.01..0.99);
        let t = rng.gen_range(0.0..1.0);
        let params = validate_params(p, m, w).map_err(|e| e.to_string())?;
        let gap = gap_pair(&params, t).map_err(|e| e.to_string())?;
        let (mu, f, g) = family_functions(&params, t).map_err(|e| e.to_string())?;
        let r = bound_report(&mu, &f, &g, ExponentPair::new(p).unwrap()).map_err(|e| e.to_string())?;
        let err = (gap.d1 - (r.b_p - r.holder)).abs().max((gap.d2 - (r.b_q - r.holder)).abs()) / (1.0 + r.holder);
        worst = worst.max(err);
        if err > 1e-12 && failures.len() < 5 {
            failures.push(format!("#{i} (p={p}, m={m}, w={w}, t={t}): {err:e}"));
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    Ok(format!("worst scaled difference {worst:e} over 1000 draws"))
}

/// Ten `w` values on the side of one required by `p`.
fn w_grid(p: f64) -> Vec<f64> {
    if p < 2.0 {
        (0..10).map(|k| 0.05 + 0.1 * k as f64).collect()
    } else {
        (0..10).map(|k| 1.25 + 0.25 * k as f64).collect()
    }
}

/// 5. Formula vs finite difference at h = 1e-5, relative 1e-6; formula > 0.
fn derivative_suite() -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut points = 0;
    let mut failures = Vec::new();
    for p in [1.3, 1.7, 3.0, 5.0] {
        for mi in 1..=9 {
            let m = mi as f64 / 10.0;
            for w in w_grid(p) {
                let params = validate_params(p, m, w).map_err(|e| e.to_string())?;
                let exact = derivative_at_zero(&params);
                if exact.is_nan() || exact <= 0.0 {
                    failures.push(format!("d'(0) = {exact} at p={p}, m={m}, w={w}"));
                }
                for j in [1, 2] {
                    let fd = fd_derivative_at_zero(&params, 1e-5, j).map_err(|e| e.to_string())?;
                    let rel = (fd - exact).abs() / exact.abs();
                    worst = worst.max(rel);
                    points += 1;
                    if rel > 1e-6 && failures.len() < 5 {
                        failures.push(format!("p={p}, m={m}, w={w}, j={j}: {fd} vs {exact} (rel {rel:e})"));
                    }
                }
            }
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    Ok(format!("worst relative error {worst:e} over {points} evaluations"))
}

/// 6. The scan finds t ≤ 0.1 with a gap above 1e-9 (1 + holder); at most 1 s per p.
fn counterexample_suite() -> Result<String, String> {
    let mut found = Vec::new();
    for (p, m, w) in [(1.5, 0.5, 0.5), (3.0, 0.5, 2.0), (4.0, 0.5, 2.0)] {
        let start = Instant::now();
        let params = validate_params(p, m, w).map_err(|e| e.to_string())?;
        let out = find_violation_t(&params, 0.1, 400).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let t = match (out.found, out.t, out.min_gap, out.holder) {
            (true, Some(t), Some(gap), Some(h)) if t <= 0.1 && gap > 1e-9 * (1.0 + h) => t,
            _ => return Err(format!("p = {p}: no violation found ({out:?})")),
        };
        // The violation must also show up in a direct bound evaluation.
        let (mu, f, g) = family_functions(&params, t).map_err(|e| e.to_string())?;
        let r = bound_report(&mu, &f, &g, ExponentPair::new(p).unwrap()).map_err(|e| e.to_string())?;
        if !r.violates_holder_order {
            return Err(format!("p = {p}: t = {t} does not re-verify"));
        }
        if secs > 1.0 {
            return Err(format!("p = {p}: scan took {secs:.2} s > 1 s"));
        }
        found.push(format!("p={p}: t={t:.3e}"));
    }
    Ok(found.join(", "))
}

/// 7. No p = 2 violations across seeds 1..=20; at most 30 s in total.
fn null_search_suite() -> Result<String, String> {
    let start = Instant::now();
    for seed in 1..=20u64 {
        let seed_text = seed.to_string();
        let out = run([
            "holder-bounds", "search", "--p", "2", "--atoms", "16", "--trials", "10000", "--seed", &seed_text,
            "--expect-none",
        ]);
        if out.exit_code != 0 {
            return Err(format!("seed {seed}: exit {} {}", out.exit_code, out.stderr.trim()));
        }
        let result: SearchResult = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
        if result.violations_found != 0 {
            return Err(format!("seed {seed}: {} violations", result.violations_found));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 30.0 {
        return Err(format!("took {secs:.2} s > 30 s"));
    }
    Ok(format!("20 seeds x 10000 trials clean in {secs:.2} s"))
}

/// 8. Seeded commands are byte-identical across repeats and thread counts.
fn determinism_suite() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let instance = dir.path().join("instance.json");
    let inst: Instance = corpus_instance(CORPUS_SEED, 7, 2..=64, 0.0, 10.0);
    std::fs::write(&instance, holder_bounds::format::to_json(&inst)).map_err(|e| e.to_string())?;
    let instance = instance.to_str().unwrap().to_string();

    let search = |threads: &str| {
        vec![
            "search", "--p", "3", "--atoms", "16", "--trials", "5000", "--seed", "99", "--threads", threads,
            "--inject-family", "0.5,2,0.05",
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    let commands: Vec<Vec<String>> = vec![
        search("1"),
        search("2"),
        search("8"),
        ["search", "--p", "2", "--atoms", "32", "--trials", "3000", "--seed", "5"].map(String::from).to_vec(),
        ["identity", "--random", "--n", "16", "--trials", "500", "--seed", "3"].map(String::from).to_vec(),
        ["curve", "--p", "3", "--m", "0.5", "--w", "2", "--t-max", "0.5", "--steps", "101"].map(String::from).to_vec(),
        ["scan", "--p", "1.5", "--m", "0.5", "--w", "0.5"].map(String::from).to_vec(),
        ["derivative", "--p", "5", "--m", "0.3", "--w", "1.7"].map(String::from).to_vec(),
        vec!["bounds".into(), "--input".into(), instance.clone(), "--p".into(), "3".into(), "--transform".into(), "maxmin>scale:2".into()],
        vec!["identity".into(), "--input".into(), instance],
    ];
    let exec = |args: &[String]| {
        let mut full = vec!["holder-bounds".to_string()];
        full.extend_from_slice(args);
        run(full)
    };
    let reference = exec(&commands[0]);
    for cmd in &commands {
        let a = exec(cmd);
        let b = exec(cmd);
        if a.exit_code != 0 {
            return Err(format!("{cmd:?} exited {}: {}", a.exit_code, a.stderr.trim()));
        }
        if a != b {
            return Err(format!("{cmd:?} differs between runs"));
        }
    }
    for cmd in &commands[1..3] {
        if exec(cmd).stdout != reference.stdout {
            return Err(format!("{cmd:?} differs from the single-thread run"));
        }
    }
    Ok(format!("{} commands repeated, search identical at 1/2/8 threads", commands.len()))
}

fn main() -> ExitCode {
    let suites: [(u32, &'static str, Suite); 8] = [
        (1, "identity suite", identity_suite),
        (2, "ordering suite", ordering_suite),
        (3, "p = 2 improvement", p2_improvement_suite),
        (4, "closed-form equivalence", closed_form_suite),
        (5, "derivative validation", derivative_suite),
        (6, "counterexample reproduction", counterexample_suite),
        (7, "p = 2 null search", null_search_suite),
        (8, "determinism", determinism_suite),
    ];
    let results: Vec<Criterion> = suites
        .into_iter()
        .map(|(id, name, suite)| {
            let start = Instant::now();
            let outcome = suite();
            let c = Criterion {
                id,
                name,
                outcome,
                elapsed: start.elapsed(),
            };
            let (tag, detail) = match &c.outcome {
                Ok(d) => ("PASS", d),
                Err(d) => ("FAIL", d),
            };
            println!("[{tag}] criterion {}: {} ({:.2} s) - {detail}", c.id, c.name, c.elapsed.as_secs_f64());
            c
        })
        .collect();
    let failed = results.iter().filter(|c| c.outcome.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
