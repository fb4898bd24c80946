//! Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
//! Failures are reported but only fail the target when ACCEPTANCE_STRICT=1.

use wittkit_cli::verify;

fn main() {
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20240601);
    let ids: Vec<usize> = (1..=11).collect();
    let results = verify::run(&ids, seed, 1);
    let mut failed = 0;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {} ({} ms): {}", r.name, r.millis, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed (seed {seed})", results.len() - failed);
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        std::process::exit(1);
    }
}
