//! One pass/fail line per acceptance criterion, 1 through 9.

use std::process::Command;
use std::time::Instant;

use orderkit::suite::{run_suite, SuiteConfig, CRITERIA};

#[test]
fn acceptance() {
    let start = Instant::now();
    let report = run_suite(&SuiteConfig::default()).expect("suite runs");
    let mut lines = Vec::new();
    for c in &report.criteria {
        lines.push((
            c.id,
            c.name.to_string(),
            c.passed(),
            format!("{} checks, {} failures, {:.2?}", c.checks, c.failures.len(), c.elapsed),
        ));
        for f in c.failures.iter().take(5) {
            eprintln!("  criterion {}: {f}", c.id);
        }
    }
    assert_eq!(report.criteria.len(), CRITERIA.len());

    let t = Instant::now();
    let bin = env!("CARGO_BIN_EXE_orderkit");
    let clean = Command::new(bin).arg("verify-suite").output().expect("binary runs");
    let faulty = Command::new(bin).args(["verify-suite", "--inject-fault"]).output().expect("binary runs");
    let clean_ok = clean.status.code() == Some(0);
    let faulty_caught = matches!(faulty.status.code(), Some(c) if c != 0);
    lines.push((
        9,
        "CLI suite passes and rejects an injected fault".to_string(),
        clean_ok && faulty_caught,
        format!("clean exit {:?}, faulty exit {:?}, {:.2?}", clean.status.code(), faulty.status.code(), t.elapsed()),
    ));

    for (id, name, ok, detail) in &lines {
        println!("criterion {id}: {} — {name} ({detail})", if *ok { "PASS" } else { "FAIL" });
    }
    println!("corpus: {} orders, total {:.2?}", report.orders.len(), start.elapsed());
    assert!(lines.iter().all(|l| l.2), "some acceptance criteria failed");
}
