//! The transversal Pauli action on odd-q codebooks: the fourfold shift acts
//! as the logical cycle and the fourfold phase gate multiplies codeword r by
//! omega^{4r}.
//!
//! ```bash
//! cargo run --example transversal_paulis
//! ```

use piq4::codebook::build;
use piq4::verify::transversal_pauli_check;

fn main() {
    for q in [3u32, 5, 7, 9, 11] {
        let report = transversal_pauli_check(&build(q).unwrap());
        println!("q = {q} ({:?})", report.verdict);
        println!(
            "  X^(x4): r -> {:?}",
            report.x_permutation().expect("shift permutes the codebook")
        );
        let exponents: Vec<u64> = report.z_exponents.iter().map(|e| e.unwrap()).collect();
        println!("  Z^(x4): codeword r gains phase omega^(4r mod {q}) = {exponents:?}");
    }

    // Even q: the findings are recorded but no Pauli action is claimed.
    for q in [4u32, 6] {
        let report = transversal_pauli_check(&build(q).unwrap());
        println!(
            "q = {q} ({:?}): shift image in codebook = {:?}, diagonal = {}",
            report.verdict,
            report.x_permutation(),
            report.z_is_diag
        );
    }
}
