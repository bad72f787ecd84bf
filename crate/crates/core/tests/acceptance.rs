//! One PASS/FAIL line per acceptance criterion, with the pinned tolerances and time limits.
//! Run with `cargo test -p mmult7 --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use mmult7::certify::{
    outcombos_falsification, parametric_case_matrix, six_term_falsification, strassen_slice_bound, strassen_terms,
    verify_decomposition, DecompositionCandidate, ParametricCase,
};
use mmult7::numeric::{als, border_rank_probe, log_log_slope, AlsConfig, FloatTensor};
use mmult7::rational::q;
use mmult7::report::{catalog_records, ideal_record, reduction_records, roundtrip_record, Status, VerifyOptions};
use mmult7::tensor::{mmult_tensor, w_tensor};

struct Line {
    ok: bool,
    expected_failure: bool,
}

fn line(n: &str, name: &str, ok: bool, limit: Duration, took: Duration, detail: String) -> Line {
    let in_time = took <= limit;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    println!("{verdict}  [{n}] {name}: {detail} ({:.2}s, limit {}s)", took.as_secs_f64(), limit.as_secs());
    Line { ok: ok && in_time, expected_failure: false }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn c1() -> Line {
    let (ok, took) = timed(|| {
        let cand = DecompositionCandidate { terms: strassen_terms(), target: mmult_tensor(2) };
        cand.terms.len() == 7 && verify_decomposition(&cand)
    });
    line("1", "Strassen exactness", ok, secs(1), took, "7 terms sum exactly to MMult₂".into())
}

fn c2() -> Line {
    let (b, took) = timed(|| strassen_slice_bound(&mmult_tensor(2), 0));
    line("2", "slice bound", b.bound == 6, secs(1), took, format!("bound {} (commutator rank {})", b.bound, b.commutator_rank))
}

fn c3() -> Line {
    let opts = VerifyOptions { seeds: 20, ..VerifyOptions::default() };
    let (recs, took) = timed(|| catalog_records(&opts).expect("catalog runs"));
    let passed = recs.iter().filter(|r| r.status == Status::Pass).count();
    for r in recs.iter().filter(|r| r.status != Status::Pass) {
        println!("      {}: {}", r.claim, r.detail);
    }
    line("3", "catalog membership", recs.len() == 16 && passed == 16, secs(120), took, format!("{passed}/16 components × 20 seeds"))
}

fn c4() -> Line {
    let opts = VerifyOptions { seeds: 100, ..VerifyOptions::default() };
    let (recs, took) = timed(|| reduction_records(&opts).expect("reductions run"));
    let passed = recs.iter().filter(|r| r.status == Status::Pass).count();
    for r in recs.iter().filter(|r| r.status != Status::Pass) {
        println!("      {}: {}", r.claim, r.detail);
    }
    line("4", "σ₅ reductions", recs.len() == 4 && passed == 4, secs(60), took, format!("{passed}/4 cases × 100 seeds"))
}

fn c5() -> Line {
    let (r, took) = timed(|| roundtrip_record(&VerifyOptions::default(), 100));
    line("5", "Taylor round trip", r.status == Status::Pass, secs(30), took, r.detail)
}

fn c6() -> Line {
    let (r, took) = timed(|| ideal_record(&VerifyOptions::default(), 50));
    line("6", "ideal suite", r.status == Status::Pass, secs(10), took, r.detail)
}

fn c7() -> Line {
    let (ok, took) = timed(|| {
        // det has degree ≤ 3 in each variable, so agreement on {0,1,2,3}³ is an identity
        let grid: Vec<i64> = (0..4).collect();
        let mut ok = true;
        for &x in &grid {
            for &y in &grid {
                for &z in &grid {
                    let (m, det) = parametric_case_matrix(ParametricCase::JoinTau3, &q(x), &q(y), &q(z));
                    ok &= det == -q(x * x * x) && m.det().unwrap() == det;
                    ok &= (m.rank() <= 2) == (x == 0);
                }
            }
        }
        ok
    });
    line("7", "parametric matrix", ok, secs(1), took, "det = −x³ on a 4×4×4 grid; rank ≤ 2 ⇔ x = 0".into())
}

fn c8() -> Vec<Line> {
    let start = Instant::now();
    let t = FloatTensor::from_exact(&mmult_tensor(2));
    let (_, r7) = als(&t, &AlsConfig { restarts: 20, max_sweeps: 2000, ..AlsConfig::new(7) }).unwrap();
    let (_, r6) = als(&t, &AlsConfig { restarts: 50, max_sweeps: 2000, cap: Some(1e3), ..AlsConfig::new(6) }).unwrap();
    let caps = [2.0, 4.0, 8.0];
    let w = FloatTensor::from_exact(&w_tensor());
    let probe = border_rank_probe(&w, &AlsConfig { restarts: 3, max_sweeps: 20_000, ..AlsConfig::new(2) }, &caps).unwrap();
    let took = start.elapsed();
    let residuals: Vec<f64> = probe.iter().map(|r| r.best_residual).collect();
    let hit_caps = probe.iter().zip(caps).all(|(r, c)| r.max_term_norm >= 0.99 * c);
    let slope = -log_log_slope(&caps, &residuals).unwrap_or(f64::NAN);
    let limit = secs(300);
    let mut out = vec![
        line("8a", "ALS rank 7", r7.best_residual < 1e-6, limit, took, format!("best residual {:.3e} over 20 restarts", r7.best_residual)),
        line("8b", "ALS rank 6", r6.best_residual > 1e-3, limit, took, format!("best residual {:.3e} over 50 restarts, cap 1e3", r6.best_residual)),
    ];
    let mut slope_line = line(
        "8c",
        "W probe slope",
        (slope - 1.0).abs() <= 0.2,
        limit,
        took,
        format!(
            "caps {caps:?}, residuals [{}], caps reached {hit_caps}, log-log slope {slope:.3}",
            residuals.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    );
    // The capped optimum for W decays like 1/(4√3·M²): two opposite points
    // (e₁ ± εe₂)^⊗3/(2ε) leave only ε²e₂^⊗3. Slope 1 belongs to the one-sided difference
    // quotient, which is not optimal, so 8c cannot pass for a solver that reaches the
    // optimum. Freeze the observed behaviour instead.
    if !slope_line.ok {
        assert!(hit_caps, "probe did not reach its caps");
        assert!((1.8..=2.4).contains(&slope), "W probe slope {slope}");
        for (r, c) in residuals.iter().zip(caps) {
            let frontier = 1.0 / (4.0 * 3f64.sqrt() * c * c);
            assert!(*r < 1.5 * frontier, "cap {c}: {r} vs {frontier}");
        }
        println!("      known deviation: optimal rank-2 residual under cap M is Θ(1/M²), see the decisions ledger");
        slope_line.expected_failure = true;
    }
    out.push(slope_line);
    out
}

fn c9() -> Line {
    let ((hits, quads), took) = timed(|| (six_term_falsification(0, 10_000), outcombos_falsification(0, 100_000, 50_000_000)));
    let ok = hits == 0 && quads.degenerate == 100_000 && quads.counterexamples == 0;
    line(
        "9",
        "falsification runs",
        ok,
        secs(180),
        took,
        format!(
            "{hits} of 10000 six-term candidates hit MMult₂; {} counterexamples among {} degenerate quadruples ({} draws)",
            quads.counterexamples, quads.degenerate, quads.trials
        ),
    )
}

#[test]
fn acceptance() {
    let mut lines = vec![c1(), c2(), c3(), c4(), c5(), c6(), c7()];
    lines.extend(c8());
    lines.push(c9());
    let unexpected: Vec<usize> = lines.iter().enumerate().filter(|(_, l)| !l.ok && !l.expected_failure).map(|(i, _)| i).collect();
    let known = lines.iter().filter(|l| l.expected_failure).count();
    println!("{} criteria lines, {} pass, {known} known deviation", lines.len(), lines.iter().filter(|l| l.ok).count());
    assert!(unexpected.is_empty(), "unexpected failures at lines {unexpected:?}");
}
