//! A tour of the radical-rational ring backing every computation: exact
//! square roots, normalization to squarefree radicands, and zero tests with
//! no tolerance.
//!
//! ```bash
//! cargo run --example exact_scalars
//! ```

use piq4::scalar::{rat, RadicalScalar};

fn main() {
    let sqrt = |n: i64, d: i64| RadicalScalar::sqrt_of_rational(&rat(n, d)).unwrap();

    println!("sqrt(4/9)  = {}", sqrt(4, 9));
    println!("sqrt(2/3)  = {}", sqrt(2, 3));
    println!("sqrt(8)    = {}", sqrt(8, 1));

    let product = &sqrt(2, 1) * &sqrt(6, 1);
    println!("sqrt(2) * sqrt(6) = {product}");

    let sum = &sqrt(2, 1) + &sqrt(3, 1);
    println!("sqrt(2) + sqrt(3) = {sum} (irreducible, two terms)");

    let cancel = &sqrt(8, 1) - &sqrt(2, 1).scale(&rat(2, 1));
    println!(
        "sqrt(8) - 2*sqrt(2) = {cancel}, is_zero = {}",
        cancel.is_zero()
    );

    // The codeword amplitudes: (1/sqrt(3q)) * sqrt(6) = sqrt(2/q).
    let q = 7;
    let lhs = &sqrt(1, 3 * q) * &sqrt(6, 1);
    let rhs = sqrt(2, q);
    println!("(1/sqrt(21)) * sqrt(6) = {lhs} = sqrt(2/7) = {rhs}");
    assert_eq!(lhs, rhs);

    // Squared norms are plain rationals again.
    let amp = sqrt(2, 5);
    println!("|sqrt(2/5)|^2 = {}", amp.square());
}
