//! Acceptance criteria. Runs without the libtest harness so that every run
//! prints one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use moy_kr::calibration::calibrate;
use moy_kr::engine::{delta_stepwise, delta_telescoped, parity_of};
use moy_kr::labelling::{enumerate_labellings, Label};
use moy_kr::relations::check_all;
use moy_kr::{corpus, Diagram, Engine, InteractionTable, LaurentPoly};

const ONE_SECOND: Duration = Duration::from_secs(1);
const ONE_MINUTE: Duration = Duration::from_secs(60);
const TEN_MINUTES: Duration = Duration::from_secs(600);

fn report(
    criterion: u8,
    what: &str,
    failures: &[String],
    elapsed: Duration,
    limit: Option<Duration>,
) -> bool {
    let slow = limit.is_some_and(|l| elapsed >= l);
    let ok = failures.is_empty() && !slow;
    let limit_note = limit
        .map(|l| format!(" (limit {:.0?})", l))
        .unwrap_or_default();
    println!(
        "{} criterion {criterion}: {what} [{:.3?}{limit_note}]",
        if ok { "PASS" } else { "FAIL" },
        elapsed
    );
    for f in failures.iter().take(20) {
        println!("    {f}");
    }
    ok
}

fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

fn criterion_1_circle_values() -> bool {
    let start = Instant::now();
    let e = Engine::default();
    let mut failures = Vec::new();
    for name in ["circle_ccw", "circle_cw"] {
        let d = corpus::get(name).unwrap();
        for n in 1..=6u32 {
            let got = e.eval_p(&d, n);
            let want = LaurentPoly::quantum_int(n as i64);
            if got != want {
                failures.push(format!("{name} n={n}: {got} != {want}"));
            }
        }
    }
    report(
        1,
        "circle values equal [n] for n = 1..6, both orientations",
        &failures,
        start.elapsed(),
        Some(ONE_SECOND),
    )
}

fn criterion_2_bigon_example() -> bool {
    let start = Instant::now();
    let e = Engine::default();
    let d = corpus::get("bigon").unwrap();
    let mut failures = Vec::new();

    let p3 = e.eval_p(&d, 3);
    let want = poly(&[(4, 1), (2, 3), (0, 4), (-2, 3), (-4, 1)]);
    if p3 != want {
        failures.push(format!("(a) P_3 = {p3}"));
    }

    let summands: Vec<_> = e
        .decompose(&d, 2, 1)
        .into_iter()
        .filter(|s| !s.contribution().is_zero())
        .collect();
    if summands.len() != 5 {
        failures.push(format!("(b) {} nonzero summands", summands.len()));
    }
    let mut circle_sigmas: Vec<i64> = summands
        .iter()
        .filter(|s| {
            let one = d.restrict(&s.labelling, Label::One);
            let two = d.restrict(&s.labelling, Label::Two);
            one.circles().count() == 1
                && one.num_edges() == 1
                && two.circles().count() == 1
                && two.num_edges() == 1
        })
        .map(|s| {
            if s.left_parity != 1 || s.right_parity != 1 {
                failures.push(format!(
                    "(b) parity shift {}+{} for sigma {}",
                    s.left_parity, s.right_parity, s.sigma
                ));
            }
            s.sigma
        })
        .collect();
    circle_sigmas.sort_unstable();
    if circle_sigmas != [-3, -1, 1, 3] {
        failures.push(format!("(b) circle sigma multiset {circle_sigmas:?}"));
    }

    match e.chains(&d, 3) {
        Ok(chains) => {
            let mut deltas: Vec<i64> = chains.iter().map(|c| c.delta).collect();
            deltas.sort_unstable();
            if deltas != [-4, -2, -2, -2, 0, 0, 0, 0, 2, 2, 2, 4] {
                failures.push(format!("(c) delta multiset {deltas:?}"));
            }
        }
        Err(err) => failures.push(format!("(c) {err}")),
    }

    match e.homology_table(&d, 3) {
        Ok(h) => {
            let dims: Vec<(i64, u64)> = h
                .dims
                .iter()
                .map(|(k, v)| (*k, v.try_into().unwrap()))
                .collect();
            if dims != [(-4, 1), (-2, 3), (0, 4), (2, 3), (4, 1)] {
                failures.push(format!("(d) dims {dims:?}"));
            }
            if h.parity != 0 {
                failures.push(format!("(d) parity {}", h.parity));
            }
            if h.total_dimension() != 12u32.into() {
                failures.push(format!("(d) total {}", h.total_dimension()));
            }
        }
        Err(err) => failures.push(format!("(d) {err}")),
    }
    report(
        2,
        "closed bigon: P_3, (2,1) decomposition, 12 chains, graded dimensions",
        &failures,
        start.elapsed(),
        Some(ONE_SECOND),
    )
}

fn split_corpus() -> Vec<(&'static str, Diagram)> {
    corpus::all()
        .into_iter()
        .filter(|(_, d)| d.num_vertices() <= 3)
        .collect()
}

fn criterion_3_split_consistency() -> bool {
    let start = Instant::now();
    let e = Engine::default();
    let diagrams = split_corpus();
    let mut failures = Vec::new();
    if diagrams.len() < 8 {
        failures.push(format!(
            "only {} diagrams with at most 3 vertices",
            diagrams.len()
        ));
    }
    for required in [
        "circle_ccw",
        "circle_cw",
        "curl_ccw",
        "curl_cw",
        "bigon",
        "single_vertex",
        "square_a",
        "bigon_and_circle",
    ] {
        if !diagrams.iter().any(|(n, _)| *n == required) {
            failures.push(format!("missing {required}"));
        }
    }
    if !diagrams.iter().any(|(_, d)| d.num_components() >= 2) {
        failures.push("no multi-component diagram".into());
    }
    let mut checked = 0;
    for (name, d) in &diagrams {
        for total in 2..=5u32 {
            let p = e.eval_p(d, total);
            for n in 1..total {
                let m = total - n;
                let split = e.eval_p_split(d, n, m);
                checked += 1;
                if split != p {
                    failures.push(format!("{name} ({n},{m}): {split} != {p}"));
                }
            }
        }
    }
    let what = format!(
        "{checked} splits with n+m <= 5 over {} diagrams agree with P_(n+m)",
        diagrams.len()
    );
    report(3, &what, &failures, start.elapsed(), Some(ONE_MINUTE))
}

fn criterion_4_relation_suite() -> bool {
    let start = Instant::now();
    let e = Engine::default();
    let checks = check_all(&e, 4);
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.to_string())
        .collect();
    let mut failures = failures;
    for r in 1..=5u8 {
        if !checks.iter().any(|c| c.relation == r) {
            failures.push(format!("no instance of relation ({r})"));
        }
    }
    for n in 1..=4 {
        if !checks.iter().any(|c| c.n == n) {
            failures.push(format!("nothing checked at n={n}"));
        }
    }
    let what = format!(
        "{} relation instances (1)-(5) hold for n = 1..4",
        checks.len()
    );
    report(4, &what, &failures, start.elapsed(), Some(ONE_MINUTE))
}

fn criterion_5_structural_invariants() -> bool {
    let start = Instant::now();
    let e = Engine::default();
    let all = corpus::all();
    let mut failures = Vec::new();
    let mut counted = 0usize;

    for (name, d) in &all {
        for f in enumerate_labellings(d, None) {
            counted += 1;
            let r1 = d.restrict(&f, Label::One).rotation();
            let r2 = d.restrict(&f, Label::Two).rotation();
            if r1 + r2 != d.rotation() {
                failures.push(format!("(a) {name} {f}: {r1} + {r2} != {}", d.rotation()));
            }
        }
        for n in 2..=4 {
            match e.chains(d, n) {
                Ok(chains) => {
                    for c in chains {
                        counted += 1;
                        let a = delta_stepwise(n, d.rotation(), &c.steps);
                        let b = delta_telescoped(n, d.rotation(), &c.steps);
                        if a != b || a != c.delta {
                            failures.push(format!("(b) {name} n={n}: {a} / {b} / {}", c.delta));
                        }
                    }
                }
                Err(err) => failures.push(format!("(b) {name} n={n}: {err}")),
            }
        }
        for n in 1..=5 {
            counted += 1;
            let p = e.eval_p(d, n);
            if !p.has_nonnegative_coeffs() {
                failures.push(format!("(c) {name} n={n}: {p}"));
            }
        }
        for n in 1..=4 {
            for m in 1..=(5 - n) {
                for s in e.decompose(d, n, m) {
                    counted += 1;
                    if (s.left_parity + s.right_parity) % 2 != parity_of(d.rotation()) {
                        failures.push(format!("(e) {name} ({n},{m}) {}", s.labelling));
                    }
                }
            }
        }
    }
    for (a, da) in &all {
        for (b, db) in &all {
            if da.num_vertices() + db.num_vertices() > 3 {
                continue;
            }
            let u = da.disjoint_union(db);
            for n in 1..=3 {
                counted += 1;
                if e.eval_p(&u, n) != e.eval_p(da, n) * e.eval_p(db, n) {
                    failures.push(format!("(d) {a} + {b} n={n}"));
                }
            }
        }
    }
    let what = format!("rotation additivity, delta agreement, nonnegativity, multiplicativity, parity ({counted} checks)");
    report(5, &what, &failures, start.elapsed(), None)
}

fn criterion_6_calibration() -> bool {
    let start = Instant::now();
    let cal = calibrate(4);
    let shipped = InteractionTable::shipped();
    let mut failures = Vec::new();
    if cal.candidates.len() != 81 {
        failures.push(format!("{} candidates searched", cal.candidates.len()));
    }
    if !cal.accepts(&shipped) {
        failures.push(format!("shipped table {shipped} rejected"));
    }
    if cal.accepts(&shipped.negated()) {
        failures.push(format!("negated table {} accepted", shipped.negated()));
    }
    if cal.selected() != Some(shipped) {
        failures.push(format!(
            "selected {:?}",
            cal.selected().map(|t| t.to_string())
        ));
    }
    for t in cal.survivors() {
        println!(
            "    surviving table {t}{}",
            if t == shipped { " (shipped)" } else { "" }
        );
    }
    let what = format!(
        "{} of 81 tables survive; shipped accepted, negation rejected",
        cal.survivors().len()
    );
    report(6, &what, &failures, start.elapsed(), Some(TEN_MINUTES))
}

fn criterion_7_determinism() -> bool {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_moykr");
    let corpus_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&corpus_dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "web"))
        .collect();
    files.sort();

    let mut commands: Vec<Vec<String>> = Vec::new();
    for f in &files {
        let f = f.to_string_lossy().into_owned();
        let per_file: [&[&str]; 9] = [
            &["validate"],
            &["rotation"],
            &["labellings"],
            &["labellings", "--m", "2", "--n", "1"],
            &["eval", "--n", "3"],
            &["decompose", "--n", "2", "--m", "1"],
            &["chains", "--n", "3"],
            &["homology", "--n", "3"],
            &["eval", "--n", "4"],
        ];
        for args in per_file {
            for json in [false, true] {
                let mut v: Vec<String> = args.iter().map(|s| s.to_string()).collect();
                if json {
                    v.push("--json".into());
                }
                v.push(f.clone());
                commands.push(v);
            }
        }
    }
    for json in [false, true] {
        let mut v: Vec<String> = ["check", "--relations", "--calibration", "--n-max", "4"]
            .map(String::from)
            .to_vec();
        if json {
            v.push("--json".into());
        }
        commands.push(v);
    }
    commands.push(vec!["corpus".into()]);

    let mut failures = Vec::new();
    for args in &commands {
        let first = Command::new(bin).args(args).output().unwrap();
        let second = Command::new(bin).args(args).output().unwrap();
        if first.status.code() != Some(0) {
            failures.push(format!("{args:?} exited {:?}", first.status.code()));
        }
        if first.stdout != second.stdout || first.status.code() != second.status.code() {
            failures.push(format!("{args:?} differs between runs"));
        }
    }
    let what = format!(
        "{} CLI invocations are byte-identical across two runs",
        commands.len()
    );
    report(7, &what, &failures, start.elapsed(), None)
}

type Criterion = (&'static str, fn() -> bool);

fn main() {
    let criteria: [Criterion; 7] = [
        ("1", criterion_1_circle_values),
        ("2", criterion_2_bigon_example),
        ("3", criterion_3_split_consistency),
        ("4", criterion_4_relation_suite),
        ("5", criterion_5_structural_invariants),
        ("6", criterion_6_calibration),
        ("7", criterion_7_determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        match std::panic::catch_unwind(run) {
            Ok(true) => {}
            Ok(false) => failed += 1,
            Err(_) => {
                println!("FAIL criterion {id}: panicked");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
