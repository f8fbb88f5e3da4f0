//! Exact infeasibility certificates: no dimension-q code with distance two
//! fits in fewer than four qudits.
//!
//! ```bash
//! cargo run --example nonexistence_sweep
//! ```

use piq4::lp::{check_feasibility, sweep_nonexistence, Feasibility};

fn main() {
    // The three contradictions at q = 3, with their derivation trails.
    for n in 1..=3usize {
        let Feasibility::Infeasible(cert) = check_feasibility(n, 3, 3).unwrap() else {
            panic!("short block lengths are infeasible");
        };
        println!("n = {n}, q = 3:");
        for step in &cert.trail {
            println!("  {step}");
        }
        println!("  contradiction: {}", cert.contradiction_string());
        println!();
    }

    // Sweep a range; every (n, q) must yield a certificate.
    let certificates = sweep_nonexistence(2, 30).unwrap();
    println!(
        "sweep q = 2..30: {} certificates, all infeasible",
        certificates.len()
    );
}
