//! Runs the seeded verification suite and prints one line per check.
//!
//! `cargo run --release --example verify_suite -- [p] [n] [family_size]`

use padic_harmonic::verify::{run_suite, ProbeConfig};

fn main() -> padic_harmonic::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = args.first().and_then(|s| s.parse().ok()).unwrap_or(2);
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut cfg = ProbeConfig::default_for(p, n);
    if let Some(size) = args.get(2).and_then(|s| s.parse().ok()) {
        cfg.family_size = size;
    }
    cfg.self_test = true;
    let report = run_suite(&cfg)?;
    for r in &report.records {
        let constant = r
            .constant
            .as_ref()
            .map(|c| format!(" constant<={:.4}", padic_harmonic::numeric::to_f64(c.hi())))
            .unwrap_or_default();
        println!(
            "{:<40} {:?} instances={} skipped={} inconclusive={}{constant}",
            r.name, r.verdict, r.instances, r.skipped, r.inconclusive
        );
        if r.verdict != padic_harmonic::verify::Verdict::Pass {
            if let Some(w) = &r.witness {
                println!(
                    "    witness: {} at {}: lhs {} rhs {}",
                    w.instance, w.at, w.lhs, w.rhs
                );
            }
        }
        if let Some(note) = &r.note {
            println!("    note: {note}");
        }
    }
    println!(
        "{} pass, {} fail, {} inconclusive in {:.2?}",
        report.summary.pass, report.summary.fail, report.summary.inconclusive, report.wall_time
    );
    Ok(())
}
