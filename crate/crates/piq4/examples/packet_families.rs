//! Show how the vertex/edge set of K_q splits into packets, and solve the
//! balancing system for the squared amplitudes.
//!
//! ```bash
//! cargo run --example packet_families
//! ```

use piq4::packets::{midpoint_packets, round_robin_packets, validate_family};
use piq4::verify::solve_balancing;

fn main() {
    println!("odd q = 7: midpoint packets (vertex r plus edges with endpoint sum 2r mod 7)");
    let family = midpoint_packets(7).unwrap();
    for packet in family.packets() {
        let elements: Vec<String> = packet.elements.iter().map(|e| e.to_string()).collect();
        println!("  S_{} = {{{}}}", packet.label, elements.join(", "));
    }
    let report = validate_family(&family);
    println!("  partition of V + E valid: {}", report.is_valid());
    let solution = solve_balancing(&family).unwrap();
    println!(
        "  balanced weights (unique: {}): vertex {}, edges {}",
        solution.solution_space_dim == 0,
        solution.weights[0][0].1,
        solution.weights[0][1].1,
    );

    println!("\neven q = 8: round-robin perfect matchings plus the vertex packet");
    let family = round_robin_packets(8).unwrap();
    for packet in family.packets() {
        let elements: Vec<String> = packet.elements.iter().map(|e| e.to_string()).collect();
        if packet.label == 7 {
            println!("  S_7 (vertices) = {{{}}}", elements.join(", "));
        } else {
            println!("  F_{} = {{{}}}", packet.label, elements.join(", "));
        }
    }
    let report = validate_family(&family);
    println!("  one-factorization valid: {}", report.is_valid());
}
