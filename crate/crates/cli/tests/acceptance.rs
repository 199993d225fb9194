//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::alloc::{GlobalAlloc, Layout, System};
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use momentum_core::{
    bound_estimate, compare_systems, frontier_bruteforce, frontier_sortscan, momentousness,
    parse_gains_table, parse_leader_terms, run_study, runners_up, verify_bound, DeltaSystem,
    GainRecord, MomentousnessScore, MoreMomentous, StudyConfig, SystemComparison,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let ptr = unsafe { System.alloc(layout) };
        if !ptr.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        ptr
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

// Thresholds.
const TABLE2_RUNTIME: Duration = Duration::from_millis(10);
const MOMENTOUSNESS_TOL: f64 = 1e-9;
const RANDOM_SYSTEMS: usize = 1000;
const MAX_RANDOM_N: usize = 500;
const STUDY_TRIALS: usize = 500;
const STUDY_SIZES: [usize; 4] = [20_000, 50_000, 100_000, 200_000];
const FITTED_C_BAND: (f64, f64) = (0.1, 1.0);
const STUDY_RUNTIME: Duration = Duration::from_secs(60);
const BOUND_TOL: f64 = 0.01;
const PERF_N: usize = 200_000;
const PERF_RUNTIME: Duration = Duration::from_secs(1);
/// Peak extra heap per entity while scanning an already built system.
const PERF_BYTES_PER_ENTITY: usize = 32;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> DeltaSystem {
    parse_gains_table(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn system(points: &[(f64, f64)]) -> DeltaSystem {
    DeltaSystem::build(
        points
            .iter()
            .enumerate()
            .map(|(i, &(g, r))| GainRecord::new(format!("e{i}"), None, g, r))
            .collect(),
        "random",
    )
    .unwrap()
}

/// Definition-level maxima, independent of the library.
fn naive_maxima(points: &[(f64, f64)]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|&(g, r)| g > points[i].0 && r > points[i].1))
        .map(|i| i + 1)
        .collect()
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn leader_names(ds: &DeltaSystem) -> Vec<String> {
    frontier_sortscan(ds).unwrap().ids().into_iter().map(str::to_owned).collect()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let ds = load("table2.csv");
    let ranks = frontier_sortscan(&ds).unwrap().ranks();
    let elapsed = start.elapsed();
    let brute = frontier_bruteforce(&ds).unwrap().ranks();
    check(
        ranks == [4, 22, 28] && brute == ranks && elapsed < TABLE2_RUNTIME,
        format!("table2 leaders at ranks {ranks:?} (brute force {brute:?}) in {elapsed:?}"),
    )
}

fn c2() -> Outcome {
    let ds = load("table4.csv");
    let layers = runners_up(&ds, 2).unwrap();
    let ranks: Vec<Vec<usize>> = layers.iter().map(|l| l.iter().map(|e| e.rank).collect()).collect();
    let chombo = layers[0][0].id.as_str().starts_with("El Chombo");
    check(
        ranks == [vec![6], vec![1, 2, 5, 20]] && chombo,
        format!("table4 layers by rank {ranks:?}"),
    )
}

fn c3() -> Outcome {
    let names = leader_names(&load("table5.csv"));
    check(names == ["MSFT", "TSLA"], format!("table5 (g = marketcap * r) leaders {names:?}"))
}

fn c4() -> Outcome {
    let names = leader_names(&load("table6.csv"));
    check(names == ["QS", "CADE", "BKKT"], format!("table6 leaders {names:?}"))
}

fn c5() -> Outcome {
    let t1 = leader_names(&load("table1.csv"));
    let t7 = leader_names(&load("table7.csv"));
    check(
        t1 == ["V5", "V8"] && t7 == ["Picasso", "Banksy", "Basquiat"],
        format!(
            "table1 {t1:?} (prose also names V3, dominated by V5); \
             table7 {t7:?} (prose also names Van Gogh, dominated by Banksy)"
        ),
    )
}

fn c6() -> Outcome {
    let e = MomentousnessScore::from_terms(parse_leader_terms(&fixture("table8.csv")).unwrap());
    let f = MomentousnessScore::from_terms(parse_leader_terms(&fixture("table9.csv")).unwrap());
    let (ev, fv) = (e.value, f.value);
    let cmp = SystemComparison::new(e, f);
    check(
        (ev - 0.50).abs() <= MOMENTOUSNESS_TOL
            && (fv - 2.125).abs() <= MOMENTOUSNESS_TOL
            && cmp.more_momentous == MoreMomentous::B,
        format!("m(E*) = {ev}, m(F*) = {fv}, more momentous: {:?}", cmp.more_momentous),
    )
}

fn c7() -> Outcome {
    let n = 1000;
    let points: Vec<(f64, f64)> = (1..=n).map(|i| (1000.0 / i as f64, (i as f64).ln())).collect();
    let ds = system(&points);
    let size = frontier_sortscan(&ds).unwrap().len();
    let brute = frontier_bruteforce(&ds).unwrap().len();
    check(size == n && brute == n, format!("g = C/i, r = ln i, N = {n}: frontier size {size}"))
}

/// Mixes continuous values, a coarse integer grid (ties) and copied rows
/// (exact duplicates); gains and relative gains can be negative.
fn random_points(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let n = rng.random_range(1..=MAX_RANDOM_N);
    let mut points: Vec<(f64, f64)> = match rng.random_range(0..3) {
        0 => (0..n)
            .map(|_| (rng.random_range(-1e3..1e3), rng.random_range(-1.0..5.0)))
            .collect(),
        1 => (0..n)
            .map(|_| (rng.random_range(-5..20) as f64, rng.random_range(-3..10) as f64 / 10.0))
            .collect(),
        _ => (0..n)
            .map(|_| (rng.random_range(-5..5) as f64 * 100.0, rng.random_range(-1.0..1.0)))
            .collect(),
    };
    for _ in 0..n / 10 {
        let i = rng.random_range(0..points.len());
        let j = rng.random_range(0..points.len());
        points[j] = points[i];
    }
    points
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    let mut tied = 0;
    for _ in 0..RANDOM_SYSTEMS {
        let points = random_points(&mut rng);
        let ds = system(&points);
        let fast = frontier_sortscan(&ds).unwrap().ranks();
        let slow = frontier_bruteforce(&ds).unwrap().ranks();
        if fast != slow || fast != naive_maxima(&points) {
            mismatches += 1;
        }
        if !verify_bound(&ds).distinct_gains {
            tied += 1;
        }
    }
    check(
        mismatches == 0 && tied > 0,
        format!("{RANDOM_SYSTEMS} systems ({tied} with tied gains): {mismatches} mismatches"),
    )
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0;
    let mut inequalities = 0;
    let mut tied_r = 0;
    for _ in 0..RANDOM_SYSTEMS {
        let n = rng.random_range(1..=MAX_RANDOM_N);
        // Distinct gains: a shuffled 1..n scaled; relative gains continuous.
        let mut gains: Vec<f64> = (1..=n).map(|i| i as f64 * 3.5).collect();
        for i in (1..n).rev() {
            gains.swap(i, rng.random_range(0..=i));
        }
        let points: Vec<(f64, f64)> = gains
            .into_iter()
            .map(|g| (g, rng.random_range(-1.0f64..1.0).powi(3) * 50.0))
            .collect();
        let check = verify_bound(&system(&points));
        assert!(check.distinct_gains);
        if !check.holds {
            violations += 1;
        }
        if check.distinct_relative_gains {
            if check.frontier_size != check.moving_maxima_count {
                inequalities += 1;
            }
        } else {
            tied_r += 1;
        }
    }
    check(
        violations == 0 && inequalities == 0 && tied_r == 0,
        format!(
            "{RANDOM_SYSTEMS} systems with distinct g: {violations} bound violations, \
             {inequalities} equality failures, {tied_r} with tied r"
        ),
    )
}

fn c10() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut passed = true;
    for n in STUDY_SIZES {
        let result = run_study(&StudyConfig::new(n, STUDY_TRIALS, 10)).unwrap();
        let p95 = *result.percentile(95.0).unwrap();
        let p99 = *result.percentile(99.0).unwrap();
        if n == 20_000 {
            let cap = bound_estimate(n, 1.0);
            passed &= p99.value <= cap && p95.value >= 2.0;
            lines.push(format!("n={n}: p95={} p99={} (cap {cap:.1})", p95.value, p99.value));
        } else {
            lines.push(format!("n={n}: p95={}", p95.value));
        }
        passed &= (FITTED_C_BAND.0..=FITTED_C_BAND.1).contains(&p95.fitted_c);
        lines.push(format!("c95={:.3}", p95.fitted_c));
    }
    let elapsed = start.elapsed();
    passed &= elapsed < STUDY_RUNTIME;
    check(passed, format!("{} trials each; {}; {elapsed:.1?}", STUDY_TRIALS, lines.join(", ")))
}

fn c11() -> Outcome {
    let a = bound_estimate(20_000, 1.0 / 3.0);
    let b = bound_estimate(200_000, 0.5);
    check(
        (a - 9.37).abs() <= BOUND_TOL && (b - 19.85).abs() <= BOUND_TOL,
        format!("bound(20000, 1/3) = {a:.4}, bound(200000, 1/2) = {b:.4}"),
    )
}

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let points: Vec<(f64, f64)> = (0..PERF_N)
        .map(|_| (rng.random_range(0.0..1e6), rng.random_range(0.0..10.0)))
        .collect();
    let ds = system(&points);
    let baseline = CURRENT.load(Ordering::Relaxed);
    PEAK.store(baseline, Ordering::Relaxed);
    let start = Instant::now();
    let frontier = frontier_sortscan(&ds).unwrap();
    let elapsed = start.elapsed();
    let extra = PEAK.load(Ordering::Relaxed) - baseline;
    let per_entity = extra / PERF_N;
    check(
        elapsed < PERF_RUNTIME && per_entity <= PERF_BYTES_PER_ENTITY,
        format!(
            "N={PERF_N}: {} leaders in {elapsed:?}, peak extra heap {extra} B ({per_entity} B/entity)",
            frontier.len()
        ),
    )
}

fn c13() -> Outcome {
    let f = |name: &str| fixture(name).display().to_string();
    let invocations: Vec<Vec<String>> = vec![
        vec!["leaders".into(), "--gains".into(), f("table2.csv")],
        vec!["leaders".into(), "--gains".into(), f("table4.csv"), "--layers".into(), "3".into(), "--format".into(), "json".into()],
        vec!["leaders".into(), "--before".into(), f("before.csv"), "--after".into(), f("after.csv"), "--format".into(), "csv".into()],
        vec!["rank".into(), "--gains".into(), f("table5.csv"), "--format".into(), "json".into()],
        vec!["momentousness".into(), "--gains".into(), f("abcd.csv")],
        vec!["compare".into(), "--leaders-csv-a".into(), f("table8.csv"), "--leaders-csv-b".into(), f("table9.csv")],
        vec!["verify-bound".into(), "--gains".into(), f("table6.csv"), "--format".into(), "json".into()],
        vec!["simulate".into(), "--n".into(), "20000".into(), "--trials".into(), "200".into(), "--seed".into(), "7".into(), "--format".into(), "json".into()],
        vec!["simulate".into(), "--n".into(), "5000".into(), "--trials".into(), "100".into(), "--seed".into(), "3".into(), "--coupling".into(), "permutation".into(), "--format".into(), "csv".into()],
    ];
    let run = |args: &[String]| {
        Command::new(env!("CARGO_BIN_EXE_momentum"))
            .args(args)
            .output()
            .expect("run momentum")
    };
    let mut differing = Vec::new();
    for args in &invocations {
        let (a, b) = (run(args), run(args));
        if !a.status.success() || a.stdout != b.stdout || a.stdout.is_empty() {
            differing.push(args[0].clone());
        }
    }
    check(
        differing.is_empty(),
        format!("{} invocations run twice; differing or failing: {differing:?}", invocations.len()),
    )
}

fn main() {
    // Also exercise the library end of criterion 6 on a full system.
    let abcd = load("abcd.csv");
    assert_eq!(
        compare_systems(&abcd, &abcd).unwrap().more_momentous,
        MoreMomentous::Equal
    );
    assert!(momentousness(&abcd).is_ok());

    let criteria: [Criterion; 13] = [
        ("table 2 frontier", c1),
        ("table 4 frontier and runners-up", c2),
        ("table 5 frontier", c3),
        ("table 6 frontier", c4),
        ("erratum fixtures (tables 1, 7)", c5),
        ("momentousness (tables 8, 9)", c6),
        ("all-leaders counterexample", c7),
        ("sort-scan equals brute force", c8),
        ("moving-maxima bound", c9),
        ("frontier size under power law", c10),
        ("bound formula", c11),
        ("sort-scan performance", c12),
        ("CLI determinism", c13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        if !outcome.passed {
            failed += 1;
        }
        println!("criterion {:>2} [{tag}] {name}: {}", i + 1, outcome.detail);
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
