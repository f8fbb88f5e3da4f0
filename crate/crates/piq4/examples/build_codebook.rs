//! Construct codebooks and print their exact amplitudes.
//!
//! ```bash
//! cargo run --example build_codebook
//! ```

use piq4::codebook::build;

fn main() {
    for q in [3u32, 4, 5, 6] {
        let cb = build(q).expect("q >= 2");
        println!(
            "q = {q}: {} codewords in Sym^4(C^{q}), {} construction",
            cb.codewords().len(),
            match cb.construction() {
                piq4::codebook::Construction::Midpoint => "midpoint",
                piq4::codebook::Construction::OneFactorization => "one-factorization",
            }
        );
        for (r, codeword) in cb.codewords().iter().enumerate() {
            print!("  |{r}> =");
            for (idx, (occ, amp)) in codeword.iter().enumerate() {
                if idx > 0 {
                    print!(" +");
                }
                print!(" ({amp}) |{occ}>");
            }
            println!();
            assert!(codeword.norm_sq() == piq4::RadicalScalar::one());
        }
        println!();
    }
}
