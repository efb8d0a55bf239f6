//! Acceptance suite: one PASS/FAIL line per criterion.

use hgbps::verify::{run_all, CheckReport, Scope};

fn line(c: &CheckReport) -> String {
    let limit = c.runtime_limit_s.map_or(String::new(), |l| format!(" / {l} s"));
    format!(
        "{} {:>2} {:<34} cases={:<6} worst/tol={:<10.3e} runtime={:.2} s{}",
        if c.passed { "PASS" } else { "FAIL" },
        c.id,
        c.name,
        c.cases,
        c.worst_ratio,
        c.runtime_s,
        limit
    )
}

fn main() {
    let report = run_all(&Scope::default());
    for c in &report.checks {
        println!("{}", line(c));
        for f in c.failures.iter().take(5) {
            println!("       {f}");
        }
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{} of {} criteria passed", report.checks.len() - failed, report.checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
